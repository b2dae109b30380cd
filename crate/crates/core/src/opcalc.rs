//! The calculus `f ↦ f(A)` for tuples of commuting matrices with spectra in
//! the closed right half-plane, built from kernel integrals of the
//! elementary parts of `f`, together with independent oracles and the
//! compatibility checks.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::elementary_decompose;
use crate::error::{CalcError, FnError};
use crate::fnalg::{is_integer_power, FnExpr, Node};
use crate::kernel::{kernel_integral, Strategy};
use crate::linalg::{eigenvalues, expm, identity, inverse, norm_2, powi, relative_commutator, scalar, top_singular, CMat, CVec};
use crate::quad::{integrate_box, Axis, QuadResult, QuadSpec};
use crate::spectral::joint_diagonalize;
use crate::varset::VarSet;
use crate::C64;

pub const DEFAULT_COMMUTATION_TOL: f64 = 1e-10;
/// Eigenvalues with real part below `-SPECTRUM_SLACK·max(1, ‖A‖)` are rejected.
pub const SPECTRUM_SLACK: f64 = 1e-9;

/// A validated tuple of commuting square matrices.
#[derive(Clone, Debug)]
pub struct OperatorTuple {
    mats: Vec<CMat>,
    tol: f64,
    eigs: Vec<Vec<C64>>,
}

impl OperatorTuple {
    /// Checks shapes, pairwise commutation and `σ(A_j) ⊆ closed C_+`.
    pub fn new(mats: Vec<CMat>, tol: f64) -> Result<Self, CalcError> {
        let d = match mats.first() {
            Some(m) => m.nrows(),
            None => return Err(CalcError::Shape),
        };
        if d == 0 || mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(CalcError::Shape);
        }
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let rel = relative_commutator(&mats[i], &mats[j]);
                if rel > tol {
                    return Err(CalcError::NotCommuting { i, j, rel });
                }
            }
        }
        let mut eigs = Vec::with_capacity(mats.len());
        for (index, m) in mats.iter().enumerate() {
            let e = eigenvalues(m);
            let slack = SPECTRUM_SLACK * norm_2(m).max(1.0);
            if let Some(z) = e.iter().find(|z| z.re < -slack) {
                return Err(CalcError::SpectrumOutside { index, re: z.re, im: z.im });
            }
            eigs.push(e);
        }
        Ok(OperatorTuple { mats, tol, eigs })
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn eigs(&self) -> &[Vec<C64>] {
        &self.eigs
    }

    /// `(A_1 + t_1, .., A_n + t_n)`.
    pub fn shifted(&self, t: &[f64]) -> Result<Self, CalcError> {
        if t.len() != self.n() {
            return Err(CalcError::DimensionMismatch { expected: self.n(), got: t.len() });
        }
        let mats = self.mats.iter().zip(t).map(|(a, s)| a + scalar(self.dim(), C64::new(*s, 0.0))).collect();
        OperatorTuple::new(mats, self.tol)
    }

    /// `ρ_λ(A) = Π_j (A_j + λ)^{-1}`.
    pub fn rho(&self, lambda: C64) -> Result<CMat, CalcError> {
        let mut out = identity(self.dim());
        for a in &self.mats {
            out = &out * inverse(&(a + scalar(self.dim(), lambda)))?;
        }
        Ok(out)
    }
}

/// `validate_tuple` under its usual name.
pub fn validate_tuple(mats: Vec<CMat>, tol: f64) -> Result<OperatorTuple, CalcError> {
    OperatorTuple::new(mats, tol)
}

/// `(-2/π)^n Π_j (A_j + λ̄_j)^{-2}`.
pub fn kernel_op(t: &OperatorTuple, lambda: &[C64]) -> Result<CMat, CalcError> {
    if lambda.len() != t.n() {
        return Err(CalcError::DimensionMismatch { expected: t.n(), got: lambda.len() });
    }
    let mut out = identity(t.dim());
    for (a, l) in t.mats.iter().zip(lambda) {
        if !(l.re > 0.0) {
            return Err(FnError::DomainViolation { index: 0, re: l.re }.into());
        }
        let r = inverse(&(a + scalar(t.dim(), l.conj())))?;
        out = &out * &r * &r;
    }
    Ok(out * C64::new((-2.0 / PI).powi(t.n() as i32), 0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalcOptions {
    pub quad: QuadSpec,
    pub strategy: Strategy,
}

impl Default for CalcOptions {
    fn default() -> Self {
        CalcOptions { quad: QuadSpec::default(), strategy: Strategy::Factorized }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartReport {
    pub omega: VarSet,
    pub err_est: f64,
    pub converged: bool,
    pub n_evals: usize,
}

#[derive(Clone, Debug)]
pub struct CalcResult {
    pub value: CMat,
    /// Sum of the part errors (largest entry modulus).
    pub err_est: f64,
    pub converged: bool,
    pub parts: Vec<PartReport>,
}

impl CalcResult {
    /// Error bound in operator norm.
    pub fn norm_err(&self) -> f64 {
        self.err_est * self.value.nrows() as f64
    }
}

fn check_dims(f: &FnExpr, t: &OperatorTuple) -> Result<(), CalcError> {
    if f.dim() != t.n() {
        return Err(CalcError::DimensionMismatch { expected: f.dim(), got: t.n() });
    }
    Ok(())
}

/// `f(A) = Σ_Ω f_{Ω,0}(A_Ω)`, each part from
/// `∫ K_{|Ω|}(A_Ω, λ̄) D_Ω f_{Ω,0}(λ) dV(λ)`.
pub fn calc(f: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<CalcResult, CalcError> {
    check_dims(f, t)?;
    let d = t.dim();
    let dec = elementary_decompose(f);
    let mut value = CMat::zeros(d, d);
    let mut parts = Vec::with_capacity(dec.parts.len());
    for (omega, part) in &dec.parts {
        if omega.is_empty() {
            value += scalar(d, dec.constant());
            parts.push(PartReport { omega: *omega, err_est: 0.0, converged: true, n_evals: 0 });
            continue;
        }
        let g = part.partial_set(*omega);
        let r = kernel_integral(t.mats(), *omega, &g, &opts.quad, opts.strategy)?;
        value += &r.value;
        parts.push(PartReport { omega: *omega, err_est: r.total_err(), converged: r.converged, n_evals: r.n_evals });
    }
    let err_est = parts.iter().map(|p| p.err_est).sum();
    let converged = parts.iter().all(|p| p.converged);
    Ok(CalcResult { value, err_est, converged, parts })
}

/// `Q_t(f; A) = (-2/π)^n ∫ D_n(f ρ_1^2)(λ) Π_j (A_j + t + λ̄_j)^{-2} dV_n(λ)`.
pub fn calc_qt(f: &FnExpr, t: &OperatorTuple, shift: f64, opts: &CalcOptions) -> Result<QuadResult<CMat>, CalcError> {
    check_dims(f, t)?;
    if !(shift > 0.0) {
        return Err(FnError::InvalidAtom("t must be positive".into()).into());
    }
    let n = t.n();
    let rho1 = FnExpr::rho(n, C64::new(1.0, 0.0))?;
    let g = f.mul(&rho1)?.mul(&rho1)?.partial_set(VarSet::full(n)).canonical();
    if g.is_zero() {
        return Ok(QuadResult { value: CMat::zeros(t.dim(), t.dim()), err_est: 0.0, truncation_est: 0.0, n_evals: 0, converged: true });
    }
    let st = t.shifted(&vec![shift; n])?;
    kernel_integral(st.mats(), VarSet::full(n), &g, &opts.quad, opts.strategy)
}

#[derive(Clone, Debug)]
pub struct QtReport {
    /// `f(A) ρ_1(A)^2`.
    pub target: CMat,
    /// `(t, ‖Q_t - target‖, error budget)`.
    pub gaps: Vec<(f64, f64, f64)>,
}

impl QtReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.gaps.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

/// Distance of `Q_t(f; A)` to `f(A) ρ_1(A)^2` along a sequence of `t`.
pub fn qt_gaps(f: &FnExpr, t: &OperatorTuple, ts: &[f64], opts: &CalcOptions) -> Result<QtReport, CalcError> {
    let c = calc(f, t, opts)?;
    let r = t.rho(C64::new(1.0, 0.0))?;
    let target = &c.value * &r * &r;
    let rn = norm_2(&r);
    let mut gaps = Vec::with_capacity(ts.len());
    for &s in ts {
        let q = calc_qt(f, t, s, opts)?;
        let budget = (q.total_err() + c.err_est * rn * rn) * t.dim() as f64;
        gaps.push((s, norm_2(&(q.value - &target)), budget));
    }
    Ok(QtReport { target, gaps })
}

/// `f(A)` from semigroup and resolvent identities: exponentials map to
/// `exp(-Σ a_j A_j)` and integer powers of resolvents to inverse powers.
pub fn hp_calc(f: &FnExpr, t: &OperatorTuple) -> Result<CMat, CalcError> {
    check_dims(f, t)?;
    hp_node(f.node(), t)
}

fn combine(t: &OperatorTuple, w: &[f64], shift: C64) -> CMat {
    let mut m = scalar(t.dim(), shift);
    for (a, wj) in t.mats.iter().zip(w) {
        if *wj != 0.0 {
            m += a * C64::new(*wj, 0.0);
        }
    }
    m
}

fn hp_node(node: &Node, t: &OperatorTuple) -> Result<CMat, CalcError> {
    let d = t.dim();
    Ok(match node {
        Node::Const(k) => scalar(d, *k),
        Node::Exp(e) => expm(&(-combine(t, &e.rates, C64::new(0.0, 0.0)))),
        Node::Res(r) => {
            let p = is_integer_power(r.power)
                .ok_or_else(|| FnError::Unsupported(alloc::format!("non-integer resolvent power {}", r.power)))?;
            powi(&combine(t, &r.weights, r.shift), -p)?
        }
        Node::Sum(v) => {
            let mut acc = CMat::zeros(d, d);
            for x in v {
                acc += hp_node(x, t)?;
            }
            acc
        }
        Node::Prod(v) => {
            let mut acc = identity(d);
            for x in v {
                acc = &acc * hp_node(x, t)?;
            }
            acc
        }
    })
}

/// `S diag(f(λ^(i))) S^{-1}` over a common eigenbasis.
pub fn diag_oracle(f: &FnExpr, t: &OperatorTuple) -> Result<CMat, CalcError> {
    check_dims(f, t)?;
    let jd = joint_diagonalize(t)?;
    let slack = 1e-12;
    let mut vals = Vec::with_capacity(t.dim());
    for lam in &jd.values {
        if let Some((index, z)) = lam.iter().enumerate().find(|(_, z)| z.re < -slack) {
            return Err(CalcError::SpectrumOutside { index, re: z.re, im: z.im });
        }
        let p: Vec<C64> = lam.iter().map(|z| C64::new(z.re.max(0.0), z.im)).collect();
        vals.push(f.eval_closed(&p));
    }
    let dm = CMat::from_diagonal(&CVec::from_vec(vals));
    Ok(&jd.basis * dm * &jd.basis_inv)
}

/// A gap between two ways of computing the same matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    /// Operator norm of the difference.
    pub gap: f64,
    /// Operator-norm error budget of the quadrature-derived sides.
    pub budget: f64,
    /// Operator norm of the first side.
    pub scale: f64,
}

impl GapReport {
    fn between(a: &CalcResult, b: &CalcResult) -> Self {
        GapReport { gap: norm_2(&(&a.value - &b.value)), budget: a.norm_err() + b.norm_err(), scale: norm_2(&a.value) }
    }
}

/// `‖(fg)(A) - f(A) g(A)‖`.
pub fn check_homomorphism(f: &FnExpr, g: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<GapReport, CalcError> {
    let fg = calc(&f.mul(g)?, t, opts)?;
    let cf = calc(f, t, opts)?;
    let cg = calc(g, t, opts)?;
    let (nf, ng) = (norm_2(&cf.value), norm_2(&cg.value));
    let (ef, eg) = (cf.norm_err(), cg.norm_err());
    Ok(GapReport {
        gap: norm_2(&(&fg.value - &cf.value * &cg.value)),
        budget: fg.norm_err() + ef * ng + eg * nf + ef * eg,
        scale: norm_2(&fg.value),
    })
}

/// `‖f(A + t) - (T(t)f)(A)‖`.
pub fn check_shift(f: &FnExpr, t: &OperatorTuple, s: &[f64], opts: &CalcOptions) -> Result<GapReport, CalcError> {
    let a = calc(f, &t.shifted(s)?, opts)?;
    let b = calc(&f.shift(s)?, t, opts)?;
    Ok(GapReport::between(&a, &b))
}

/// `‖(Υf)(Ã) - f(A)‖` with `A_j = Ã_{π(j)}`.
pub fn merge_calc(f: &FnExpr, pi: &[usize], tilde: &OperatorTuple, opts: &CalcOptions) -> Result<GapReport, CalcError> {
    let m = tilde.n();
    let merged = f.merge(pi, m)?;
    let mats = pi.iter().map(|&k| tilde.mats[k].clone()).collect();
    let full = OperatorTuple::new(mats, tilde.tol)?;
    let a = calc(&merged, tilde, opts)?;
    let b = calc(f, &full, opts)?;
    Ok(GapReport::between(&a, &b))
}

/// `‖f(A_1 + .. + A_n) - f^{[n]}(A)‖` with `f^{[n]}(z) = f(z_1 + .. + z_n)`.
pub fn operator_sum_calc(f1d: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<GapReport, CalcError> {
    let g = t.mats.iter().fold(CMat::zeros(t.dim(), t.dim()), |acc, a| acc + a);
    let single = OperatorTuple::new(vec![g], t.tol)?;
    let a = calc(f1d, &single, opts)?;
    let b = calc(&f1d.sum_of_vars(t.n())?, t, opts)?;
    Ok(GapReport::between(&a, &b))
}

/// Ground truth of a generated tuple: `A_j = S diag(values[j]) S^{-1}`.
#[derive(Clone, Debug)]
pub struct TupleTruth {
    pub basis: CMat,
    pub values: Vec<Vec<C64>>,
}

/// Seeded commuting, jointly diagonalizable tuple with eigenvalues
/// `Re ∈ [0.2, 3]`, `Im ∈ [-2, 2]` and a well-conditioned random basis.
pub fn random_commuting_tuple(n: usize, dim: usize, seed: u64) -> (OperatorTuple, TupleTruth) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = identity(dim);
    for i in 0..dim {
        for k in 0..dim {
            s[(i, k)] += C64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
        }
    }
    let si = inverse(&s).expect("perturbed identity is invertible");
    let mut mats = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let v: Vec<C64> = (0..dim).map(|_| C64::new(rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0))).collect();
        let dm = CMat::from_diagonal(&CVec::from_vec(v.clone()));
        mats.push(&s * dm * &si);
        values.push(v);
    }
    let t = OperatorTuple::new(mats, 1e-8).expect("commuting by construction");
    (t, TupleTruth { basis: s, values })
}

/// Functions used by the compatibility and oracle checks, as DSL text.
/// The first entries are elementary with full support.
pub fn default_family_text(n: usize) -> Vec<String> {
    match n {
        1 => ["res([1],1,1)", "exp([1])", "exp([1])*res([1],2,1)", "1 + exp([0.5])*res([1],1+1i,1)", "res([1],0.5-1i,2) - exp([2])"]
            .iter()
            .map(|s| String::from(*s))
            .collect(),
        2 => [
            "res([1,0],1,1)*res([0,1],1,1)",
            "exp([1,1])",
            "exp([1,1])*res([1,0],1,1)*res([0,1],1,1)",
            "res([1,0],1,1)*res([0,1],2,1)",
            "2 + exp([0.5,0])*res([0,1],1+1i,1)",
            "res([1,0],0.5-1i,2) + exp([0,2])",
        ]
        .iter()
        .map(|s| String::from(*s))
        .collect(),
        _ => {
            let ones = alloc::format!("[{}]", vec!["1"; n].join(","));
            vec![alloc::format!("exp({ones})"), alloc::format!("1 + exp({ones})")]
        }
    }
}

/// Parsed `default_family_text`.
pub fn default_family(n: usize) -> Vec<FnExpr> {
    default_family_text(n).iter().map(|s| FnExpr::parse(s, Some(n)).expect("family parses")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GsfOptions {
    pub quad: QuadSpec,
    pub alpha_points: usize,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Random unit vector pairs for the lower bound.
    pub pairs: usize,
    pub seed: u64,
}

impl Default for GsfOptions {
    fn default() -> Self {
        GsfOptions {
            quad: QuadSpec { rel_tol: 1e-6, ..QuadSpec::default() },
            alpha_points: 40,
            alpha_lo: 1e-3,
            alpha_hi: 1e3,
            pairs: 20,
            seed: 2024,
        }
    }
}

/// Bracket for the constant in the square-function condition.
#[derive(Clone, Debug, PartialEq)]
pub struct GsfEntry {
    pub omega: VarSet,
    /// `sup_α ∫ ‖Π α_j (A_j + α_j - iβ_j)^{-2}‖ dβ`.
    pub gamma_upper: f64,
    /// Same with `|⟨· x, y⟩|` over sampled unit pairs.
    pub gamma_lower: f64,
    /// Maximizer of the upper bound.
    pub alpha_at: Vec<f64>,
    pub err_est: f64,
    pub converged: bool,
    pub n_alpha: usize,
}

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> CVec {
    let v = CVec::from_iterator(d, (0..d).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Golden-section maximization of `g` over `[a, b]`.
fn golden<G: FnMut(f64) -> f64>(mut g: G, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - R * (b - a);
    let mut x2 = a + R * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + R * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - R * (b - a);
            f1 = g(x1);
        }
    }
    if f1 > f2 { (f1, x1) } else { (f2, x2) }
}

/// `γ_{A_Ω}` bracket by a log-spaced `α` search with golden refinement.
pub fn gsf_constant(t: &OperatorTuple, omega: VarSet, opts: &GsfOptions) -> Result<GsfEntry, CalcError> {
    let idx = omega.indices();
    let k = idx.len();
    if k == 0 || !omega.is_subset(VarSet::full(t.n())) {
        return Err(CalcError::DimensionMismatch { expected: t.n(), got: k });
    }
    let d = t.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pairs: Vec<(CVec, CVec)> = (0..opts.pairs).map(|_| (unit_vector(&mut rng, d), unit_vector(&mut rng, d))).collect();
    let min_re: Vec<f64> = idx.iter().map(|&j| t.eigs[j].iter().map(|z| z.re).fold(f64::INFINITY, f64::min).max(0.0)).collect();
    let centers: Vec<f64> = idx.iter().map(|&j| {
        let e = &t.eigs[j];
        e.iter().map(|z| z.im).sum::<f64>() / e.len() as f64
    }).collect();

    struct Eval {
        upper: f64,
        lower: f64,
        err: f64,
        converged: bool,
    }
    let mut count = 0usize;
    let mut eval = |alpha: &[f64]| -> Result<Eval, CalcError> {
        count += 1;
        let at = |beta: &[f64]| -> Result<CMat, CalcError> {
            let mut m = identity(d);
            for (s, &j) in idx.iter().enumerate() {
                let shift = C64::new(alpha[s], -beta[s]);
                let r = inverse(&(&t.mats[j] + scalar(d, shift)))?;
                m = &m * &r * &r * C64::new(alpha[s], 0.0);
            }
            Ok(m)
        };
        let (_, u, v) = top_singular(&at(&centers)?);
        let mut probes = pairs.clone();
        probes.push((v, u));
        let axes: Vec<Axis> = (0..k).map(|s| Axis::Line { center: centers[s], scale: (alpha[s] + min_re[s]).max(1e-3) }).collect();
        let mut failure = None;
        let r = integrate_box(
            &axes,
            |beta| {
                let mut out = vec![0.0; probes.len() + 1];
                match at(beta) {
                    Ok(m) => {
                        out[0] = norm_2(&m);
                        for (i, (x, y)) in probes.iter().enumerate() {
                            out[i + 1] = y.dotc(&(&m * x)).norm();
                        }
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                    }
                }
                out
            },
            &opts.quad,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let lower = r.value[1..].iter().fold(0.0f64, |m, x| m.max(*x));
        Ok(Eval { upper: r.value[0], lower, err: r.err_est, converged: r.converged })
    };

    let (llo, lhi) = (opts.alpha_lo.ln(), opts.alpha_hi.ln());
    let np = opts.alpha_points.max(2);
    let grid: Vec<f64> = (0..np).map(|i| llo + (lhi - llo) * i as f64 / (np - 1) as f64).collect();
    let step = grid[1] - grid[0];

    let mut best_upper = 0.0f64;
    let mut best_lower = 0.0f64;
    let mut best_at = vec![0.0; k];
    let mut err = 0.0f64;
    let mut converged = true;
    let record = |a: &[f64], e: &Eval, bu: &mut f64, bl: &mut f64, at: &mut Vec<f64>, err: &mut f64, conv: &mut bool| {
        if e.upper > *bu {
            *bu = e.upper;
            *at = a.to_vec();
            *err = e.err;
            *conv = e.converged;
        }
        *bl = bl.max(e.lower);
    };
    // diagonal scan (the whole scan for one variable)
    for &la in &grid {
        let a = vec![la.exp(); k];
        let e = eval(&a)?;
        record(&a, &e, &mut best_upper, &mut best_lower, &mut best_at, &mut err, &mut converged);
    }
    // golden refinement in log coordinates, one coordinate at a time
    let mut failure = None;
    for s in 0..k {
        let base: Vec<f64> = best_at.clone();
        let c = base[s].ln();
        let (lo, hi) = if k == 1 { (c - step, c + step) } else { (llo, lhi) };
        let mut local: Vec<(Vec<f64>, Eval)> = Vec::new();
        golden(
            |x| {
                let mut a = base.clone();
                a[s] = x.exp();
                match eval(&a) {
                    Ok(e) => {
                        let u = e.upper;
                        local.push((a, e));
                        u
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                }
            },
            lo.max(llo),
            hi.min(lhi),
            if k == 1 { 20 } else { 25 },
        );
        for (a, e) in &local {
            record(a, e, &mut best_upper, &mut best_lower, &mut best_at, &mut err, &mut converged);
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(GsfEntry { omega, gamma_upper: best_upper, gamma_lower: best_lower.min(best_upper), alpha_at: best_at, err_est: err, converged, n_alpha: count })
}
