//! Closed-form norm bounds for damped, spectrally separated and band-limited
//! functions, and their comparison against computed Besov norms and
//! operator norms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::ComplexFloat;

use crate::besov::{seminorm, BesovOptions};
use crate::decomp::sample_points;
use crate::error::{CalcError, FnError, QuadError};
use crate::fnalg::{sup_norm, sup_on_lines, FnExpr, SupOptions};
use crate::linalg::norm_2;
use crate::opcalc::{calc, diag_oracle, gsf_constant, CalcOptions, GsfOptions, OperatorTuple};
use crate::quad::{integrate_box, Axis, QuadResult, QuadSpec};
use crate::varset::VarSet;
use crate::C64;

/// One bound against the value it is supposed to dominate.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub family: &'static str,
    /// Parameter echo, `name=value` pairs.
    pub params: Vec<(&'static str, f64)>,
    pub bound: f64,
    pub empirical: f64,
    /// Error estimate of `empirical`.
    pub err_est: f64,
    pub ratio: f64,
}

impl BoundReport {
    fn new(family: &'static str, params: Vec<(&'static str, f64)>, bound: f64, empirical: f64, err_est: f64) -> Self {
        BoundReport { family, params, bound, empirical, err_est, ratio: empirical / bound }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.ratio <= 1.0 + tol
    }

    /// `k=v;k=v` rendering of the parameters.
    pub fn params_text(&self) -> String {
        let mut s = String::new();
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(&format!("{k}={v}"));
        }
        s
    }
}

fn positive(name: &str, x: f64) -> Result<(), FnError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(FnError::InvalidAtom(format!("{name} must be positive, got {x}")))
    }
}

fn m_param(lambda: C64, omega: f64) -> Result<f64, FnError> {
    let m = omega.min(lambda.re);
    positive("min(omega, Re lambda)", m)?;
    Ok(m)
}

/// `hnorm (1/(2ν) + m^{-ν})^n` with `m = min(ω, Re λ)`.
pub fn bound_r(nu: f64, lambda: C64, omega: f64, n: usize, hnorm: f64) -> Result<f64, FnError> {
    positive("nu", nu)?;
    let m = m_param(lambda, omega)?;
    Ok(hnorm * (0.5 / nu + m.powf(-nu)).powi(n as i32))
}

/// `hnorm m^{-ν} (n/(2ν) + 1)^n`.
pub fn bound_s(nu: f64, lambda: C64, omega: f64, n: usize, hnorm: f64) -> Result<f64, FnError> {
    positive("nu", nu)?;
    let m = m_param(lambda, omega)?;
    Ok(hnorm * m.powf(-nu) * (n as f64 / (2.0 * nu) + 1.0).powi(n as i32))
}

/// `hnorm e^{-nωτ} (1 + log(1 + 1/(τω))/2)^n`.
pub fn bound_exp_window(tau: f64, omega: f64, n: usize, hnorm: f64) -> Result<f64, FnError> {
    positive("tau", tau)?;
    positive("omega", omega)?;
    let nf = n as f64;
    Ok(hnorm * (-nf * omega * tau).exp() * (1.0 + 0.5 * (1.0 / (tau * omega)).ln_1p()).powi(n as i32))
}

/// `2^{n+1} supnorm log(1 + (2σ/ε)^n)^n`.
pub fn bound_bandlimited(eps: f64, sigma: f64, n: usize, supnorm: f64) -> Result<f64, FnError> {
    positive("epsilon", eps)?;
    if !(sigma > eps) {
        return Err(FnError::InvalidAtom(format!("need epsilon < sigma, got {eps} >= {sigma}")));
    }
    let ni = n as i32;
    Ok(2f64.powi(ni + 1) * supnorm * (2.0 * sigma / eps).powi(ni).ln_1p().powi(ni))
}

/// `4^k log^k(1 + 1/a)`.
pub fn jk_bound(k: usize, a: f64) -> f64 {
    4f64.powi(k as i32) * (1.0 / a).ln_1p().powi(k as i32)
}

/// `∫_{R_+^k} dt / (Π t_j + a e^{Σ t_j})`.
pub fn jk_numeric(k: usize, a: f64, spec: &QuadSpec) -> Result<QuadResult<f64>, QuadError> {
    if !(a > 0.0 && a < 1.0) || k == 0 {
        return Err(QuadError::InvalidSpec(format!("need k >= 1 and a in (0,1), got k={k}, a={a}")));
    }
    // the mass sits around t_j ~ log(1/a)
    let scale = (1.0 / a).ln().max(1.0);
    let axes = vec![Axis::HalfLine { a: 0.0, scale }; k];
    integrate_box(
        &axes,
        |t| {
            let p: f64 = t.iter().product();
            let s: f64 = t.iter().sum();
            if s > 700.0 {
                return 0.0;
            }
            1.0 / (p + a * s.exp())
        },
        spec,
    )
}

/// `‖f‖` over `{Re z_j > -ω}`, through `z ↦ f(z - ω)`.
pub fn hinf_omega_norm(f: &FnExpr, omega: f64) -> Result<f64, FnError> {
    positive("omega", omega)?;
    Ok(sup_norm(&f.shift_left(omega)?))
}

/// `Π_j (λ + z_j)^{-ν}`.
pub fn r_factor(n: usize, nu: f64, lambda: C64) -> Result<FnExpr, FnError> {
    let mut f = FnExpr::constant(n, C64::new(1.0, 0.0));
    for j in 0..n {
        let mut w = vec![0.0; n];
        w[j] = 1.0;
        f = f.mul(&FnExpr::res(w, lambda, nu)?)?;
    }
    Ok(f)
}

/// `(λ + z_1 + .. + z_n)^{-ν}`.
pub fn s_factor(n: usize, nu: f64, lambda: C64) -> Result<FnExpr, FnError> {
    FnExpr::res(vec![1.0; n], lambda, nu)
}

/// `e^{-τ(z_1 + .. + z_n)}`.
pub fn e_tau(n: usize, tau: f64) -> Result<FnExpr, FnError> {
    FnExpr::exp(vec![tau; n])
}

/// `Π_j (e^{-ε z_j} - e^{-σ z_j})`, spectrum in `[ε, σ]^n`.
pub fn bandlimited_product(n: usize, eps: f64, sigma: f64) -> Result<FnExpr, FnError> {
    let mut f = FnExpr::constant(n, C64::new(1.0, 0.0));
    for j in 0..n {
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[j] = eps;
        b[j] = sigma;
        f = f.mul(&FnExpr::exp(a)?.sub(&FnExpr::exp(b)?)?)?;
    }
    Ok(f)
}

/// Exponent vectors of an exponential sum; `None` if `f` has resolvent atoms.
pub fn exponent_set(f: &FnExpr) -> Option<Vec<Vec<f64>>> {
    let p = f.expand();
    if p.terms.iter().any(|m| !m.factors.is_empty()) {
        return None;
    }
    Some(p.terms.iter().filter(|m| m.coef != C64::new(0.0, 0.0)).map(|m| m.rates.clone()).collect())
}

fn full_b0(f: &FnExpr, opts: &BesovOptions) -> Result<(f64, f64), CalcError> {
    let e = seminorm(f, VarSet::full(f.dim()), opts)?;
    if e.diverging {
        return Err(QuadError::Divergent(format!("B_0 seminorm of {}", f)).into());
    }
    Ok((e.value, e.err_est))
}

/// `‖R^ν_λ g‖_{B_0^n}` against `bound_r` with `hnorm = ‖g‖_{H^∞_ω}`.
pub fn check_r(nu: f64, lambda: C64, omega: f64, g: &FnExpr, opts: &BesovOptions) -> Result<BoundReport, CalcError> {
    let n = g.dim();
    let h = hinf_omega_norm(g, omega)?;
    let (v, e) = full_b0(&r_factor(n, nu, lambda)?.mul(g)?, opts)?;
    let b = bound_r(nu, lambda, omega, n, h)?;
    Ok(BoundReport::new("R", vec![("n", n as f64), ("nu", nu), ("re_lambda", lambda.re), ("im_lambda", lambda.im), ("omega", omega), ("hnorm", h)], b, v, e))
}

/// `‖S^ν_λ g‖_{B_0^n}` against `bound_s`.
pub fn check_s(nu: f64, lambda: C64, omega: f64, g: &FnExpr, opts: &BesovOptions) -> Result<BoundReport, CalcError> {
    let n = g.dim();
    let h = hinf_omega_norm(g, omega)?;
    let (v, e) = full_b0(&s_factor(n, nu, lambda)?.mul(g)?, opts)?;
    let b = bound_s(nu, lambda, omega, n, h)?;
    Ok(BoundReport::new("S", vec![("n", n as f64), ("nu", nu), ("re_lambda", lambda.re), ("im_lambda", lambda.im), ("omega", omega), ("hnorm", h)], b, v, e))
}

/// `‖e_τ g‖_{B_0^n}` against `bound_exp_window` with `hnorm = ‖e_τ g‖_{H^∞_ω}`.
pub fn check_exp_window(tau: f64, omega: f64, g: &FnExpr, opts: &BesovOptions) -> Result<BoundReport, CalcError> {
    let n = g.dim();
    let f = e_tau(n, tau)?.mul(g)?;
    let h = hinf_omega_norm(&f, omega)?;
    let (v, e) = full_b0(&f, opts)?;
    let b = bound_exp_window(tau, omega, n, h)?;
    Ok(BoundReport::new("exp_window", vec![("n", n as f64), ("tau", tau), ("omega", omega), ("hnorm", h)], b, v, e))
}

/// `‖f‖_{B_0^n}` against `bound_bandlimited` for the product family.
pub fn check_bandlimited(n: usize, eps: f64, sigma: f64, opts: &BesovOptions) -> Result<BoundReport, CalcError> {
    let f = bandlimited_product(n, eps, sigma)?;
    let s = sup_norm(&f);
    let (v, e) = full_b0(&f, opts)?;
    let b = bound_bandlimited(eps, sigma, n, s)?;
    Ok(BoundReport::new("bandlimited", vec![("n", n as f64), ("epsilon", eps), ("sigma", sigma), ("supnorm", s)], b, v, e))
}

/// `J_k(a)` by quadrature against `jk_bound`.
pub fn check_jk(k: usize, a: f64, spec: &QuadSpec) -> Result<BoundReport, CalcError> {
    let r = jk_numeric(k, a, spec)?;
    Ok(BoundReport::new("J_k", vec![("k", k as f64), ("a", a)], jk_bound(k, a), r.value, r.total_err()))
}

/// Parameter grid for the function-norm comparisons.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateGrid {
    pub dims: Vec<usize>,
    pub nus: Vec<f64>,
    pub lambdas: Vec<C64>,
    pub omegas: Vec<f64>,
    /// Values of `τω` (at `ω = 1`).
    pub tau_omegas: Vec<f64>,
    /// Values of `ε/σ` (at `ε = 1`).
    pub eps_over_sigma: Vec<f64>,
    pub jk: Vec<(usize, f64)>,
}

impl Default for EstimateGrid {
    fn default() -> Self {
        EstimateGrid {
            dims: vec![1, 2],
            nus: vec![0.5, 1.0, 2.0],
            lambdas: vec![C64::new(1.0, 0.0), C64::new(0.5, 1.0)],
            omegas: vec![0.5, 2.0],
            tau_omegas: vec![0.25, 1.0, 4.0],
            eps_over_sigma: vec![0.5, 0.25],
            jk: vec![(1, 0.1), (1, 0.5), (1, 0.9), (2, 0.1), (2, 0.5), (2, 0.9), (3, 0.1), (3, 0.5), (3, 0.9)],
        }
    }
}

/// Test multipliers in `H^∞_ω`: the constant and a resolvent product with
/// poles at `-2ω`.
fn damped_family(n: usize, omega: f64) -> Result<Vec<FnExpr>, FnError> {
    let r = r_factor(n, 1.0, C64::new(2.0 * omega, 0.0))?;
    Ok(vec![FnExpr::constant(n, C64::new(1.0, 0.0)), r])
}

/// Every function-norm comparison over `grid`.
pub fn estimate_matrix(grid: &EstimateGrid, opts: &BesovOptions) -> Result<Vec<BoundReport>, CalcError> {
    let mut out = Vec::new();
    for &n in &grid.dims {
        for &omega in &grid.omegas {
            for (gi, g) in damped_family(n, omega)?.iter().enumerate() {
                // the resolvent multiplier only at the first λ; its coupled
                // seminorms dominate the run time
                let lambdas = if gi == 0 { &grid.lambdas[..] } else { &grid.lambdas[..1] };
                for &nu in &grid.nus {
                    for &lambda in lambdas {
                        out.push(check_r(nu, lambda, omega, g, opts)?);
                        out.push(check_s(nu, lambda, omega, g, opts)?);
                    }
                }
            }
        }
        for &tw in &grid.tau_omegas {
            for g in damped_family(n, 1.0)? {
                out.push(check_exp_window(tw, 1.0, &g, opts)?);
            }
        }
        for &q in &grid.eps_over_sigma {
            out.push(check_bandlimited(n, 1.0, 1.0 / q, opts)?);
        }
    }
    for &(k, a) in &grid.jk {
        out.push(check_jk(k, a, &opts.quad)?);
    }
    Ok(out)
}

/// `sup_β |D_Ω f(α + iβ)|` against `σ^{|Ω|} sup_β |f(α + iβ)|` at one `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinRow {
    pub alpha: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinReport {
    pub omega: VarSet,
    pub sigma: f64,
    pub rows: Vec<BernsteinRow>,
}

impl BernsteinReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.rows.iter().all(|r| r.lhs <= r.rhs * (1.0 + tol) + tol)
    }
}

/// Bernstein's inequality for an exponential sum with spectrum in `[0, σ]^n`
/// on the diagonal `α`-grid.
pub fn bernstein_check(f: &FnExpr, sigma: f64, omega: VarSet, alphas: &[f64], opts: &SupOptions) -> Result<BernsteinReport, FnError> {
    let rates = exponent_set(f).ok_or_else(|| FnError::Unsupported("bernstein_check needs an exponential sum".into()))?;
    if rates.iter().flatten().any(|a| *a < 0.0 || *a > sigma) {
        return Err(FnError::Unsupported(format!("exponent outside [0, {sigma}]")));
    }
    let n = f.dim();
    if !omega.is_subset(VarSet::full(n)) {
        return Err(FnError::DimensionMismatch { expected: n, got: omega.len() });
    }
    let d = f.partial_set(omega);
    let k = sigma.powi(omega.len() as i32);
    let all = VarSet::full(n);
    let rows = alphas
        .iter()
        .map(|&a| {
            let alpha = vec![a; n];
            BernsteinRow { lhs: sup_on_lines(&d, all, &alpha, opts), rhs: k * sup_on_lines(f, all, &alpha, opts), alpha }
        })
        .collect();
    Ok(BernsteinReport { omega, sigma, rows })
}

/// Largest `|f(z)| e^{τ Σ Re z_j} / ‖f‖_∞` over seeded sample points; at most
/// one for functions with spectrum in `[τ, ∞)^n`.
pub fn poisson_ratio(f: &FnExpr, tau: f64, samples: usize, seed: u64) -> Result<f64, FnError> {
    let s = sup_norm(f);
    let mut worst = 0.0f64;
    for z in sample_points(f.dim(), samples, seed) {
        let damp: f64 = z.iter().map(|x| x.re).sum::<f64>() * tau;
        worst = worst.max(f.eval(&z)?.abs() * damp.exp() / s);
    }
    Ok(worst)
}

/// Inputs of the operator-estimate suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteParams {
    pub nus: Vec<f64>,
    pub lambda: C64,
    pub omega: f64,
    pub tau: f64,
    pub eps: f64,
    pub sigma: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { nus: vec![0.5, 1.0, 2.0], lambda: C64::new(1.0, 0.0), omega: 1.0, tau: 1.0, eps: 1.0, sigma: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SuiteOptions {
    pub besov: BesovOptions,
    pub gsf: GsfOptions,
    pub calc: CalcOptions,
}

/// `‖f(A)‖`, from the joint eigenbasis when there is one.
fn op_norm(f: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<(f64, f64), CalcError> {
    match diag_oracle(f, t) {
        Ok(m) => Ok((norm_2(&m), 0.0)),
        Err(CalcError::NotDiagonalizable(_)) => {
            let r = calc(f, t, opts)?;
            Ok((norm_2(&r.value), r.norm_err()))
        }
        Err(e) => Err(e),
    }
}

/// Operator-norm versions of the damped, spectrally separated and
/// band-limited bounds, scaled by the computed `γ_upper` of the full set.
pub fn operator_estimate_suite(t: &OperatorTuple, p: &SuiteParams, opts: &SuiteOptions) -> Result<Vec<BoundReport>, CalcError> {
    let n = t.n();
    let gamma = gsf_constant(t, VarSet::full(n), &opts.gsf)?.gamma_upper;
    let mut out = Vec::new();
    for &nu in &p.nus {
        let (v, e) = op_norm(&r_factor(n, nu, p.lambda)?, t, &opts.calc)?;
        let b = gamma * bound_r(nu, p.lambda, p.omega, n, 1.0)?;
        out.push(BoundReport::new("op_R", vec![("n", n as f64), ("nu", nu), ("re_lambda", p.lambda.re), ("omega", p.omega), ("gamma", gamma)], b, v, e));
        let (v, e) = op_norm(&s_factor(n, nu, p.lambda)?, t, &opts.calc)?;
        let b = gamma * bound_s(nu, p.lambda, p.omega, n, 1.0)?;
        out.push(BoundReport::new("op_S", vec![("n", n as f64), ("nu", nu), ("re_lambda", p.lambda.re), ("omega", p.omega), ("gamma", gamma)], b, v, e));
    }
    let et = e_tau(n, p.tau)?;
    let h = hinf_omega_norm(&et, p.omega)?;
    let (v, e) = op_norm(&et, t, &opts.calc)?;
    let b = gamma * bound_exp_window(p.tau, p.omega, n, h)?;
    out.push(BoundReport::new("op_exp_window", vec![("n", n as f64), ("tau", p.tau), ("omega", p.omega), ("gamma", gamma)], b, v, e));
    let f = bandlimited_product(n, p.eps, p.sigma)?;
    let s = sup_norm(&f);
    let (v, e) = op_norm(&f, t, &opts.calc)?;
    let b = gamma * bound_bandlimited(p.eps, p.sigma, n, s)?;
    out.push(BoundReport::new("op_bandlimited", vec![("n", n as f64), ("epsilon", p.eps), ("sigma", p.sigma), ("gamma", gamma)], b, v, e));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMat;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn closed_form_values() {
        assert!((bound_r(1.0, c(1.0), 1.0, 1, 1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((bound_r(1.0, c(1.0), 1.0, 2, 1.0).unwrap() - 2.25).abs() < 1e-15);
        assert!((bound_s(1.0, c(1.0), 1.0, 2, 1.0).unwrap() - 4.0).abs() < 1e-15);
        let e = bound_exp_window(1.0, 1.0, 1, 1.0).unwrap();
        assert!((e - (-1f64).exp() * (1.0 + 2f64.ln() / 2.0)).abs() < 1e-15);
        assert!((e - 0.4954).abs() < 1e-4);
        assert!((bound_bandlimited(1.0, 2.0, 1, 1.0).unwrap() - 4.0 * 5f64.ln()).abs() < 1e-12);
        assert!((bound_bandlimited(1.0, 2.0, 2, 1.0).unwrap() - 8.0 * 17f64.ln().powi(2)).abs() < 1e-12);
        assert!((jk_bound(1, 0.5) - 4.0 * 3f64.ln()).abs() < 1e-12);
        assert!((jk_bound(2, 0.5) - 19.31).abs() < 1e-2);
        // the smaller of ω and Re λ is used
        assert_eq!(bound_r(1.0, c(3.0), 0.5, 1, 1.0).unwrap(), bound_r(1.0, c(0.5), 3.0, 1, 1.0).unwrap());
        assert!(bound_r(1.0, C64::new(0.0, 1.0), 1.0, 1, 1.0).is_err());
        assert!(bound_bandlimited(2.0, 1.0, 1, 1.0).is_err());
    }

    #[test]
    fn bounds_are_linear_in_the_norm() {
        let k = 3.5;
        assert!((bound_r(0.5, c(2.0), 1.0, 2, k).unwrap() - k * bound_r(0.5, c(2.0), 1.0, 2, 1.0).unwrap()).abs() < 1e-12);
        assert!((bound_s(2.0, c(2.0), 1.0, 2, k).unwrap() - k * bound_s(2.0, c(2.0), 1.0, 2, 1.0).unwrap()).abs() < 1e-12);
        assert!((bound_exp_window(0.25, 1.0, 2, k).unwrap() - k * bound_exp_window(0.25, 1.0, 2, 1.0).unwrap()).abs() < 1e-12);
        assert!((bound_bandlimited(1.0, 4.0, 2, k).unwrap() - k * bound_bandlimited(1.0, 4.0, 2, 1.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn jk_one_variable() {
        let spec = QuadSpec::default().with_tol(1e-8);
        let r = jk_numeric(1, 0.5, &spec).unwrap();
        assert!(r.value <= jk_bound(1, 0.5));
        let lo = jk_numeric(1, 0.9, &spec).unwrap();
        let hi = jk_numeric(1, 0.1, &spec).unwrap();
        assert!(lo.value < r.value && r.value < hi.value);
        assert!(jk_numeric(1, 1.5, &spec).is_err());
    }

    #[test]
    fn hinf_norm_of_exponential() {
        let f = e_tau(2, 0.5).unwrap();
        assert!((hinf_omega_norm(&f, 1.0).unwrap() - 1f64.exp()).abs() < 1e-9);
        // a pole at -1/2 is inside the widened region
        let r = FnExpr::resolvent(1, 0, c(0.5)).unwrap();
        assert!(hinf_omega_norm(&r, 1.0).is_err());
    }

    #[test]
    fn r_with_constant_multiplier() {
        let opts = BesovOptions::default();
        let g = FnExpr::constant(1, c(1.0));
        let r = check_r(1.0, c(1.0), 1.0, &g, &opts).unwrap();
        assert!((r.empirical - 1.0).abs() < 1e-4, "{r:?}");
        assert!((r.bound - 1.5).abs() < 1e-12);
        let s = check_bandlimited(1, 1.0, 2.0, &opts).unwrap();
        assert!((s.empirical - 2.0).abs() < 1e-3, "{s:?}");
        assert!(s.holds(1e-2));
    }

    #[test]
    fn bernstein_examples() {
        let sup = SupOptions::default();
        let f = FnExpr::exp(vec![2.0]).unwrap();
        let r = bernstein_check(&f, 2.0, VarSet::full(1), &[0.1, 1.0], &sup).unwrap();
        for row in &r.rows {
            assert!((row.lhs - row.rhs).abs() < 1e-9 * row.rhs);
        }
        let g = FnExpr::exp(vec![1.0]).unwrap().add(&FnExpr::exp(vec![2.0]).unwrap()).unwrap();
        assert!(bernstein_check(&g, 2.0, VarSet::full(1), &[0.0, 0.5, 2.0], &sup).unwrap().holds(1e-9));
        let e = bernstein_check(&g, 2.0, VarSet::EMPTY, &[0.5], &sup).unwrap();
        assert_eq!(e.rows[0].lhs, e.rows[0].rhs);
        let bad = FnExpr::resolvent(1, 0, c(1.0)).unwrap();
        assert!(bernstein_check(&bad, 2.0, VarSet::full(1), &[0.5], &sup).is_err());
        assert!(bernstein_check(&g, 1.5, VarSet::full(1), &[0.5], &sup).is_err());
    }

    #[test]
    fn poisson_bound() {
        let f = bandlimited_product(2, 1.0, 3.0).unwrap();
        assert!(poisson_ratio(&f, 1.0, 50, 3).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn scalar_suite() {
        let t = OperatorTuple::new(vec![CMat::from_element(1, 1, c(1.5))], 1e-10).unwrap();
        let reports = operator_estimate_suite(&t, &SuiteParams::default(), &SuiteOptions::default()).unwrap();
        assert_eq!(reports.len(), 8);
        for r in &reports {
            assert!(r.holds(1e-2), "{r:?}");
        }
    }
}
