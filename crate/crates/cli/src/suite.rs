//! Consistency checks over operator tuples and the numbered acceptance
//! criteria built from them.
//!
//! Check reports share one layout: `check, case, value, limit, err_est, pass`,
//! where a row passes when `value <= limit`.

use std::time::{Duration, Instant};

use besov_core::besov::{bnorm, BesovOptions};
use besov_core::decomp::{elementary_decompose, is_elementary, sample_points};
use besov_core::estimates::{
    bound_bandlimited, bound_exp_window, bound_r, bound_s, estimate_matrix, jk_bound, operator_estimate_suite, BoundReport, EstimateGrid,
    SuiteOptions, SuiteParams,
};
use besov_core::linalg::{norm_2, CMat};
use besov_core::opcalc::{
    calc, check_homomorphism, check_shift, default_family_text, diag_oracle, gsf_constant, hp_calc, merge_calc, operator_sum_calc, qt_gaps,
    random_commuting_tuple, CalcOptions, GsfOptions, OperatorTuple,
};
use besov_core::repro::reproduce_shifted;
use besov_core::spectral::{check_spectral_inclusion, check_spectral_mapping_equality, check_union_inclusion};
use besov_core::{CalcError, FnExpr, VarSet, C64};
use serde_json::json;

use crate::report::{omega_text, Report};

pub const DEFAULT_SEED: u64 = 2024;
pub const CHECK_COLUMNS: [&str; 6] = ["check", "case", "value", "limit", "err_est", "pass"];

/// Parameter sequence for the smoothed approximants.
pub const QT_STEPS: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

/// A function together with the text it was parsed from.
#[derive(Clone, Debug)]
pub struct NamedFn {
    pub text: String,
    pub f: FnExpr,
}

impl NamedFn {
    pub fn parse(text: &str, n: usize) -> Result<Self, CalcError> {
        Ok(NamedFn { text: text.trim().to_string(), f: FnExpr::parse(text, Some(n))? })
    }

    pub fn new(f: FnExpr) -> Self {
        NamedFn { text: f.to_string(), f }
    }
}

pub fn default_fns(n: usize) -> Vec<NamedFn> {
    default_family_text(n).iter().map(|s| NamedFn::parse(s, n).expect("default family parses")).collect()
}

pub fn check_report(command: &str, seed: u64, opts: &CalcOptions) -> Report {
    let mut r = Report::new(command, seed, &opts.quad, &CHECK_COLUMNS);
    r.pass = Some(true);
    r
}

/// Appends one `value <= limit` row and folds it into the verdict.
pub fn row(rep: &mut Report, check: &str, case: &str, value: f64, limit: f64, err_est: f64) -> bool {
    let ok = value <= limit;
    rep.push(vec![json!(check), json!(case), json!(value), json!(limit), json!(err_est), json!(ok)]);
    rep.check(ok);
    ok
}

/// `‖calc(f, A) - S diag(f(λ)) S^{-1}‖ <= tol (1 + ‖f(A)‖)`.
pub fn oracle_rows(rep: &mut Report, label: &str, t: &OperatorTuple, fns: &[NamedFn], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    for nf in fns {
        let c = calc(&nf.f, t, opts)?;
        let o = diag_oracle(&nf.f, t)?;
        let gap = norm_2(&(&c.value - &o));
        row(rep, "oracle", &format!("{label} f={}", nf.text), gap, tol * (1.0 + norm_2(&o)), c.norm_err());
    }
    Ok(())
}

/// `calc((z_j + λ)^{-1}, A)` against `(A_j + λ)^{-1}`.
pub fn resolvent_rows(rep: &mut Report, label: &str, t: &OperatorTuple, lambdas: &[C64], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    for j in 0..t.n() {
        for &l in lambdas {
            let f = FnExpr::resolvent(t.n(), j, l)?;
            let c = calc(&f, t, opts)?;
            let exact = hp_calc(&f, t)?;
            row(rep, "resolvent", &format!("{label} f={f}"), norm_2(&(&c.value - &exact)), tol, c.norm_err());
        }
    }
    Ok(())
}

/// `‖(fg)(A) - f(A) g(A)‖` over cyclically adjacent pairs of `fns`.
pub fn homomorphism_rows(rep: &mut Report, label: &str, t: &OperatorTuple, fns: &[NamedFn], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    let k = fns.len();
    let pairs: Vec<(usize, usize)> = if k == 1 { vec![(0, 0)] } else { (0..k).map(|i| (i, (i + 1) % k)).collect() };
    for (i, j) in pairs {
        let g = check_homomorphism(&fns[i].f, &fns[j].f, t, opts)?;
        row(rep, "homomorphism", &format!("{label} f={} g={}", fns[i].text, fns[j].text), g.gap, tol, g.budget);
    }
    Ok(())
}

/// Shift vector `s_j = 1/(2(j+1))`.
pub fn shift_vector(n: usize) -> Vec<f64> {
    (0..n).map(|j| 0.5 / (j + 1) as f64).collect()
}

pub fn shift_rows(rep: &mut Report, label: &str, t: &OperatorTuple, fns: &[NamedFn], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    let s = shift_vector(t.n());
    for nf in fns {
        let g = check_shift(&nf.f, t, &s, opts)?;
        row(rep, "shift", &format!("{label} f={} s={s:?}", nf.text), g.gap, tol, g.budget);
    }
    Ok(())
}

/// Onto maps `π: {1..n} -> {1..m}` used by the merge check: the cyclic maps
/// `j ↦ j + r mod m` for `r < min(m, 2)`. Empty when `n < m`.
pub fn merge_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n < m || m == 0 {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for r in 0..m.min(2) {
        let p: Vec<usize> = (0..n).map(|j| (j + r) % m).collect();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn merge_rows(rep: &mut Report, label: &str, tilde: &OperatorTuple, fns: &[NamedFn], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    for nf in fns {
        for pi in merge_maps(nf.f.dim(), tilde.n()) {
            let g = merge_calc(&nf.f, &pi, tilde, opts)?;
            let one_based: Vec<usize> = pi.iter().map(|k| k + 1).collect();
            row(rep, "merge", &format!("{label} f={} pi={one_based:?}", nf.text), g.gap, tol, g.budget);
        }
    }
    Ok(())
}

pub fn sum_rows(rep: &mut Report, label: &str, t: &OperatorTuple, f1d: &[NamedFn], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    for nf in f1d {
        let g = operator_sum_calc(&nf.f, t, opts)?;
        row(rep, "operator_sum", &format!("{label} f={}", nf.text), g.gap, tol, g.budget);
    }
    Ok(())
}

fn strictly_right(t: &OperatorTuple) -> bool {
    t.eigs().iter().flatten().all(|z| z.re > 0.0)
}

fn full_elementary(f: &FnExpr) -> bool {
    f.support() == VarSet::full(f.dim()) && is_elementary(f)
}

/// Inclusion and union form for every function, two-sided equality where it applies.
pub fn spectral_rows(rep: &mut Report, label: &str, t: &OperatorTuple, fns: &[NamedFn], opts: &CalcOptions, tol: f64) -> Result<(), CalcError> {
    for nf in fns {
        let case = format!("{label} f={}", nf.text);
        let r = check_spectral_inclusion(&nf.f, t, opts)?;
        row(rep, "spectral_inclusion", &case, r.distance, tol, r.budget);
        if full_elementary(&nf.f) && strictly_right(t) {
            let r = check_spectral_mapping_equality(&nf.f, t, opts)?;
            row(rep, "spectral_equality", &case, r.distance, tol, r.budget);
        }
        let r = check_union_inclusion(&nf.f, t, opts)?;
        row(rep, "spectral_union", &case, r.distance, tol, r.budget);
    }
    Ok(())
}

/// Gaps `‖Q_t - f(A) ρ_1(A)^2‖` along [`QT_STEPS`]: the sequence must
/// decrease strictly and the last gap must not exceed `final_tol`.
pub fn qt_rows(rep: &mut Report, label: &str, t: &OperatorTuple, nf: &NamedFn, opts: &CalcOptions, final_tol: f64) -> Result<(), CalcError> {
    let q = qt_gaps(&nf.f, t, &QT_STEPS, opts)?;
    let case = format!("{label} f={}", nf.text);
    for w in q.gaps.windows(2) {
        let (t0, g0, _) = w[0];
        let (t1, g1, b1) = w[1];
        // strict: value < limit
        let ok = g1 < g0;
        rep.push(vec![json!("qt_decrease"), json!(format!("{case} t={t0}->{t1}")), json!(g1), json!(g0), json!(b1), json!(ok)]);
        rep.check(ok);
    }
    let (tl, gl, bl) = *q.gaps.last().expect("steps are nonempty");
    row(rep, "qt_final", &format!("{case} t={tl}"), gl, final_tol, bl);
    Ok(())
}

fn bound_row(rep: &mut Report, b: &BoundReport, tol: f64) -> bool {
    let case = format!("{} {}", b.family, b.params_text());
    row(rep, "bound_ratio", &case, b.ratio, 1.0 + tol, b.err_est / b.bound)
}

/// Function-norm bounds over `grid`, one `empirical/bound` row each.
pub fn estimate_rows(rep: &mut Report, grid: &EstimateGrid, opts: &BesovOptions, tol: f64) -> Result<Vec<BoundReport>, CalcError> {
    let rows = estimate_matrix(grid, opts)?;
    for b in &rows {
        bound_row(rep, b, tol);
    }
    Ok(rows)
}

pub fn operator_estimate_rows(rep: &mut Report, label: &str, t: &OperatorTuple, opts: &SuiteOptions, tol: f64) -> Result<(), CalcError> {
    for b in operator_estimate_suite(t, &SuiteParams::default(), opts)? {
        let case = format!("{label} {} {}", b.family, b.params_text());
        row(rep, "operator_bound_ratio", &case, b.ratio, 1.0 + tol, b.err_est / b.bound);
    }
    Ok(())
}

/// One acceptance criterion: the deterministic report plus its wall time.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub report: Report,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
}

impl Outcome {
    pub fn within_time(&self) -> bool {
        self.time_limit.map_or(true, |l| self.elapsed <= l)
    }

    pub fn pass(&self) -> bool {
        self.report.pass == Some(true) && self.within_time()
    }

    /// `PASS criterion N: title (..)`, with the failing rows when it fails.
    pub fn line(&self) -> String {
        let rows = self.report.rows.len();
        let failed: Vec<String> = self
            .report
            .rows
            .iter()
            .filter(|r| r[5] == json!(false))
            .map(|r| format!("{} [{}] value={} limit={}", r[0].as_str().unwrap_or(""), r[1].as_str().unwrap_or(""), r[2], r[3]))
            .collect();
        let mut s = format!(
            "{} criterion {}: {} ({} rows, {} failed, {:.1}s",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            rows,
            failed.len(),
            self.elapsed.as_secs_f64()
        );
        if let Some(l) = self.time_limit {
            s.push_str(&format!(" of {}s allowed", l.as_secs()));
        }
        s.push(')');
        if let Some(e) = self.report.summary.get("error") {
            s.push_str(&format!(" error: {}", e.as_str().unwrap_or("")));
        }
        for f in failed.iter().take(8) {
            s.push_str("\n    ");
            s.push_str(f);
        }
        if failed.len() > 8 {
            s.push_str(&format!("\n    .. {} more", failed.len() - 8));
        }
        s
    }
}

/// Shared inputs of the acceptance criteria.
#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub calc: CalcOptions,
    pub besov: BesovOptions,
    pub gsf: GsfOptions,
    /// Ten seeded commuting pairs of sizes 2 to 6.
    pub pairs: Vec<OperatorTuple>,
    pub family: Vec<NamedFn>,
}

pub const PAIR_COUNT: usize = 10;

impl Context {
    pub fn new(seed: u64) -> Self {
        let pairs = (0..PAIR_COUNT).map(|k| random_commuting_tuple(2, 2 + k % 5, seed.wrapping_add(k as u64)).0).collect();
        Context {
            seed,
            calc: CalcOptions::default(),
            besov: BesovOptions::default(),
            gsf: GsfOptions { seed, ..GsfOptions::default() },
            pairs,
            family: default_fns(2),
        }
    }

    fn report(&self, id: u32) -> Report {
        check_report(&format!("acceptance-{id}"), self.seed, &self.calc)
    }

    fn label(k: usize) -> String {
        format!("pair{k}")
    }

    /// Elementary members of the family with full support.
    fn elementary(&self) -> Vec<NamedFn> {
        self.family.iter().filter(|nf| full_elementary(&nf.f)).cloned().collect()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion1(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    for w in [C64::new(0.5, 0.0), C64::new(1.0, 1.0), C64::new(2.0, -0.5)] {
        let f = FnExpr::res(vec![1.0], w, 1.0)?;
        let r = bnorm(&f, &cx.besov)?;
        let case = format!("f={f}");
        row(rep, "b0_rel_error", &case, rel(r.b0, 1.0 / w.re), 1e-3, r.entry(VarSet::full(1)).map_or(0.0, |e| e.err_est) * w.re);
        row(rep, "total_rel_error", &case, rel(r.total, 2.0 / w.re), 1e-3, r.err_est * w.re / 2.0);
    }
    let products: [&[C64]; 3] = [
        &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
        &[C64::new(0.5, 1.0), C64::new(2.0, 0.0)],
        &[C64::new(1.0, 0.0), C64::new(0.5, -1.0), C64::new(2.0, 0.5)],
    ];
    for ws in products {
        let n = ws.len();
        let mut f = FnExpr::constant(n, C64::new(1.0, 0.0));
        for (j, &w) in ws.iter().enumerate() {
            f = f.mul(&FnExpr::resolvent(n, j, w)?)?;
        }
        let r = bnorm(&f, &cx.besov)?;
        let expect: f64 = ws.iter().map(|w| 1.0 / w.re).product();
        let e = r.entry(VarSet::full(n)).map_or(0.0, |e| e.err_est);
        row(rep, "product_b0_rel_error", &format!("f={f}"), rel(r.b0, expect), 5e-3, e / expect);
    }
    Ok(())
}

/// Shift vectors drawn from the real parts of a second point sample.
fn sample_shifts(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    sample_points(n, count, seed).into_iter().map(|p| p.iter().map(|z| z.re / 2.5).collect()).collect()
}

pub const REPRO_FUNCTIONS: [(&str, usize); 5] = [
    ("res([1,0],1,1)*res([0,1],1,1)", 2),
    ("exp([1,1])", 2),
    ("exp([1,1])*res([1,0],1,1)*res([0,1],2,1)", 2),
    ("res([1,0],0.5+1i,2)*exp([0,0.5])*res([0,1],1,1)", 2),
    ("exp([0.5])*res([1],1-1i,1)", 1),
];

fn criterion2(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    for (k, (text, n)) in REPRO_FUNCTIONS.iter().enumerate() {
        let nf = NamedFn::parse(text, *n)?;
        let zs = sample_points(*n, 20, cx.seed.wrapping_add(100 + k as u64));
        let ts = sample_shifts(*n, 20, cx.seed.wrapping_add(200 + k as u64));
        let mut worst = (0.0f64, 0.0f64);
        let mut ok = true;
        for (z, t) in zs.iter().zip(&ts) {
            let r = reproduce_shifted(&nf.f, z, t, &cx.calc.quad)?;
            ok &= r.gap <= 1e-4;
            if r.gap >= worst.0 {
                worst = (r.gap, r.err_est);
            }
        }
        debug_assert_eq!(ok, worst.0 <= 1e-4);
        row(rep, "reproduce_max_gap", &format!("f={} samples=20", nf.text), worst.0, 1e-4, worst.1);
    }
    Ok(())
}

pub const DECOMPOSE_FUNCTIONS: [(&str, usize); 6] = [
    ("1 + res([1,0],1,1)", 2),
    ("2 + exp([0.5,0])*res([0,1],1+1i,1)", 2),
    ("res([1,0],0.5-1i,2) + exp([0,2])", 2),
    ("(1 + res([1,0,0],1,1))*(3 - exp([0,1,0])) + res([1,1,0],2,1)*res([0,0,1],1,2)", 3),
    ("1 + exp([0.5])*res([1],1+1i,1)", 1),
    ("(2-1i)*res([1],0.5-1i,2) - exp([2])", 1),
];

fn criterion3(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    for (k, (text, n)) in DECOMPOSE_FUNCTIONS.iter().enumerate() {
        let nf = NamedFn::parse(text, *n)?;
        let dec = elementary_decompose(&nf.f);
        let worst = sample_points(*n, 50, cx.seed.wrapping_add(300 + k as u64))
            .iter()
            .map(|z| (dec.eval(z) - nf.f.eval_closed(z)).norm())
            .fold(0.0, f64::max);
        row(rep, "reconstruction", &format!("f={} points=50", nf.text), worst, 1e-9, 0.0);
        if *n <= 2 {
            let whole = bnorm(&nf.f, &cx.besov)?;
            for (omega, part) in &dec.parts {
                let p = bnorm(part, &cx.besov)?;
                let case = format!("f={} part={}", nf.text, omega_text(*omega));
                row(rep, "part_contraction", &case, p.total, whole.total + whole.err_est + p.err_est, p.err_est);
            }
        }
    }
    Ok(())
}

fn criterion4(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    let lambdas = [C64::new(1.0, 0.0), C64::new(0.5, 2.0)];
    for (k, t) in cx.pairs.iter().enumerate() {
        oracle_rows(rep, &Context::label(k), t, &cx.family, &cx.calc, 1e-3)?;
        resolvent_rows(rep, &Context::label(k), t, &lambdas, &cx.calc, 1e-6)?;
    }
    Ok(())
}

/// Pairs used by the operator-sum check; summed variables couple the
/// resolvent atoms and each part becomes a four-dimensional integral.
const SUM_PAIRS: usize = 2;

fn criterion5(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    let f1d = default_fns(1);
    let f3d = default_fns(3);
    for (k, t) in cx.pairs.iter().enumerate() {
        let label = Context::label(k);
        homomorphism_rows(rep, &label, t, &cx.family, &cx.calc, 1e-3)?;
        shift_rows(rep, &label, t, &cx.family, &cx.calc, 1e-3)?;
        merge_rows(rep, &label, t, &cx.family, &cx.calc, 1e-3)?;
        merge_rows(rep, &label, t, &f3d, &cx.calc, 1e-3)?;
        let first = OperatorTuple::new(vec![t.mats()[0].clone()], t.tol())?;
        merge_rows(rep, &format!("{label}[A1]"), &first, &cx.family, &cx.calc, 1e-3)?;
        if k < SUM_PAIRS {
            sum_rows(rep, &label, t, &f1d, &cx.calc, 1e-3)?;
        }
    }
    Ok(())
}

fn diag_tuple(cols: &[&[C64]]) -> Result<OperatorTuple, CalcError> {
    let mats = cols.iter().map(|d| CMat::from_diagonal(&besov_core::linalg::CVec::from_column_slice(d))).collect();
    OperatorTuple::new(mats, 1e-10)
}

fn criterion6(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    let c = |x: f64| C64::new(x, 0.0);
    let scalar = diag_tuple(&[&[c(2.0)]])?;
    qt_rows(rep, "A=[2]", &scalar, &NamedFn::parse("res([1],1,1)", 1)?, &cx.calc, 2e-3)?;
    let ones = diag_tuple(&[&[c(1.0)], &[c(1.0)]])?;
    qt_rows(rep, "A=([1],[1])", &ones, &NamedFn::parse("res([1,0],1,1)*res([0,1],1,1)", 2)?, &cx.calc, 2e-3)?;
    qt_rows(rep, &Context::label(0), &cx.pairs[0], &cx.family[0], &cx.calc, 2e-3)?;
    Ok(())
}

/// `B ⊗ I` and `I ⊗ C` for diagonal `B`, `C`.
pub fn tensor_pair(b: &[C64], c: &[C64]) -> Result<OperatorTuple, CalcError> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for &bi in b {
        for &cj in c {
            x.push(bi);
            y.push(cj);
        }
    }
    diag_tuple(&[&x, &y])
}

fn criterion7(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let zero = diag_tuple(&[&[c(0.0, 0.0)]])?;
    let g = gsf_constant(&zero, VarSet::full(1), &cx.gsf)?;
    // K = 1 for the trivial semigroup
    row(rep, "gsf_scalar", "A=[0] K=1", g.gamma_upper, 2.0 + 1e-2, g.err_est);
    let cases: [(&[C64], &[C64]); 3] = [
        (&[c(0.5, 0.0), c(2.0, 0.0)], &[c(1.0, 0.0), c(3.0, 0.0)]),
        (&[c(1.0, 1.0), c(0.2, 0.0)], &[c(0.7, -2.0), c(1.5, 0.0)]),
        (&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.3, 0.5)]),
    ];
    for (b, cc) in cases {
        let pair = tensor_pair(b, cc)?;
        let gb = gsf_constant(&diag_tuple(&[b])?, VarSet::full(1), &cx.gsf)?;
        let gc = gsf_constant(&diag_tuple(&[cc])?, VarSet::full(1), &cx.gsf)?;
        let gp = gsf_constant(&pair, VarSet::full(2), &cx.gsf)?;
        let prod = gb.gamma_upper * gc.gamma_upper;
        let err = (gp.err_est + gb.err_est * gc.gamma_upper + gc.err_est * gb.gamma_upper) / prod;
        let fmt = |v: &[C64]| v.iter().map(|z| besov_core::fnalg::fmt_complex(*z)).collect::<Vec<_>>().join(",");
        row(rep, "gsf_tensor_rel", &format!("B=diag({}) C=diag({})", fmt(b), fmt(cc)), rel(gp.gamma_upper, prod), 1e-2, err);
    }
    Ok(())
}

fn criterion8(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    let fams = cx.elementary();
    let mut b0 = Vec::with_capacity(fams.len());
    for nf in &fams {
        b0.push(bnorm(&nf.f, &cx.besov)?);
    }
    for (k, t) in cx.pairs.iter().enumerate() {
        let gamma = gsf_constant(t, VarSet::full(2), &cx.gsf)?.gamma_upper;
        for (nf, nb) in fams.iter().zip(&b0) {
            let c = calc(&nf.f, t, &cx.calc)?;
            let bound = gamma * nb.b0 * (1.0 + 1e-2);
            row(rep, "norm_bound", &format!("{} f={} gamma={gamma:.6}", Context::label(k), nf.text), norm_2(&c.value), bound, c.norm_err());
        }
    }
    Ok(())
}

fn criterion9(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    for (k, t) in cx.pairs.iter().enumerate() {
        spectral_rows(rep, &Context::label(k), t, &cx.family, &cx.calc, 1e-3)?;
    }
    Ok(())
}

fn criterion10(cx: &Context, rep: &mut Report) -> Result<(), CalcError> {
    let one = C64::new(1.0, 0.0);
    let l2 = 2f64.ln();
    // direct substitution into each formula, against independently written literals
    let closed: [(&str, f64, f64); 7] = [
        ("bandlimited n=1 eps=1 sigma=2", bound_bandlimited(1.0, 2.0, 1, 1.0)?, 4.0 * 5f64.ln()),
        ("bandlimited n=2 eps=1 sigma=2", bound_bandlimited(1.0, 2.0, 2, 1.0)?, 8.0 * 17f64.ln().powi(2)),
        ("R n=1 nu=1 lambda=1 omega=1", bound_r(1.0, one, 1.0, 1, 1.0)?, 1.5),
        ("R n=2 nu=0.5 lambda=1 omega=4", bound_r(0.5, one, 4.0, 2, 1.0)?, 4.0),
        ("S n=2 nu=1 lambda=1 omega=1", bound_s(1.0, one, 1.0, 2, 1.0)?, 4.0),
        ("exp_window n=1 tau=1 omega=1", bound_exp_window(1.0, 1.0, 1, 1.0)?, (1.0 + l2 / 2.0) / std::f64::consts::E),
        ("J_2 a=0.5", jk_bound(2, 0.5), 16.0 * 3f64.ln().powi(2)),
    ];
    for (case, v, lit) in closed {
        row(rep, "closed_form", case, (v - lit).abs(), 1e-12 * lit.abs(), 0.0);
    }
    row(rep, "closed_form", "bandlimited n=1 eps=1 sigma=2 vs 6.438", (bound_bandlimited(1.0, 2.0, 1, 1.0)? - 6.438).abs(), 5e-4, 0.0);
    estimate_rows(rep, &EstimateGrid::default(), &cx.besov, 1e-2)?;
    let sopts = SuiteOptions { besov: cx.besov.clone(), gsf: cx.gsf.clone(), calc: cx.calc.clone() };
    operator_estimate_rows(rep, &Context::label(0), &cx.pairs[0], &sopts, 1e-2)?;
    Ok(())
}

type Criterion = fn(&Context, &mut Report) -> Result<(), CalcError>;

/// `(id, title, runtime limit in seconds, body)`.
pub const CRITERIA: [(u32, &str, Option<u64>, Criterion); 10] = [
    (1, "resolvent norms and the product rule", Some(60), criterion1),
    (2, "shifted reproducing formula", Some(300), criterion2),
    (3, "elementary decomposition", Some(60), criterion3),
    (4, "calculus against the diagonalization oracle", Some(600), criterion4),
    (5, "homomorphism, shift, merge and operator sum", None, criterion5),
    (6, "smoothed approximants converge", None, criterion6),
    (7, "square-function constants", None, criterion7),
    (8, "norm bound", None, criterion8),
    (9, "spectral mapping", None, criterion9),
    (10, "function-norm bounds and J_k", Some(600), criterion10),
];

/// Runs criterion `id` (1 to 10). Errors are recorded as a failed report.
pub fn run_criterion(cx: &Context, id: u32) -> Option<Outcome> {
    let &(id, title, limit, body) = CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rep = cx.report(id);
    rep.set("title", title);
    let start = Instant::now();
    if let Err(e) = body(cx, &mut rep) {
        rep.set("error", e.to_string());
        rep.check(false);
    }
    Some(Outcome { id, title, report: rep, elapsed: start.elapsed(), time_limit: limit.map(Duration::from_secs) })
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    let cx = Context::new(seed);
    CRITERIA.iter().filter_map(|c| run_criterion(&cx, c.0)).collect()
}

/// Concatenated JSON of every criterion report; the determinism check compares these bytes.
pub fn combined_json(outcomes: &[Outcome]) -> String {
    outcomes.iter().map(|o| o.report.to_json()).collect()
}
