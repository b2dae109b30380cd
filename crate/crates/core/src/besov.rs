//! Besov seminorms `‖f‖_{B_Ω} = ∫ H_Ω f dα_Ω` and the norm `Σ_Ω ‖f‖_{B_Ω}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{FnError, QuadError};
use crate::fnalg::{sup_norm, sup_on_lines, FnExpr, SupOptions};
use crate::quad::{integrate_box, Axis, DomainMode, QuadResult, QuadSpec};
use crate::varset::VarSet;

#[derive(Clone, Debug, PartialEq)]
pub struct BesovOptions {
    pub quad: QuadSpec,
    pub sup: SupOptions,
    /// Run the shell test on integrals that did not converge (always in truncated mode).
    pub detect_divergence: bool,
    /// Skip the separated-variable factorization.
    pub force_generic: bool,
}

impl Default for BesovOptions {
    fn default() -> Self {
        BesovOptions {
            quad: QuadSpec { rel_tol: 1e-7, ..QuadSpec::default() },
            sup: SupOptions::default(),
            detect_divergence: true,
            force_generic: false,
        }
    }
}

impl BesovOptions {
    pub fn with_quad(quad: QuadSpec) -> Self {
        BesovOptions { quad, ..BesovOptions::default() }
    }
}

/// How a seminorm value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// `Ω = ∅`: boundary supremum.
    Sup,
    /// `Ω` not inside the support, so `D_Ω f = 0`.
    Zero,
    /// Product of lower-dimensional factors.
    Factorized,
    /// Direct `|Ω|`-dimensional integral of `H_Ω`.
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeminormEntry {
    pub omega: VarSet,
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
    pub diverging: bool,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeminormReport {
    pub dim: usize,
    /// One entry per subset, in increasing bitmask order.
    pub entries: Vec<SeminormEntry>,
    pub total: f64,
    pub err_est: f64,
    /// `‖f‖_∞`, the `Ω = ∅` entry.
    pub hinfty: f64,
    /// `‖f‖_{B_0^n}`, the `Ω = I_n` entry.
    pub b0: f64,
}

impl SeminormReport {
    pub fn entry(&self, omega: VarSet) -> Option<&SeminormEntry> {
        self.entries.iter().find(|e| e.omega == omega)
    }

    pub fn converged(&self) -> bool {
        self.entries.iter().all(|e| e.converged)
    }

    pub fn diverging(&self) -> bool {
        self.entries.iter().any(|e| e.diverging)
    }
}

/// Lower estimate of `sup |D_Ω f|` at fixed real parts, with the Cauchy upper bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HBracket {
    pub lower: f64,
    pub upper: f64,
}

fn check_alpha(f: &FnExpr, omega: VarSet, alpha: &[f64]) -> Result<(), FnError> {
    if alpha.len() != f.dim() {
        return Err(FnError::DimensionMismatch { expected: f.dim(), got: alpha.len() });
    }
    for j in omega.iter() {
        if !(alpha[j] > 0.0) {
            return Err(FnError::DomainViolation { index: j, re: alpha[j] });
        }
    }
    Ok(())
}

/// `H_Ω f(α)`. Entries of `alpha` outside `Ω` are ignored.
pub fn h_omega(f: &FnExpr, omega: VarSet, alpha: &[f64], opts: &SupOptions) -> Result<f64, FnError> {
    check_alpha(f, omega, alpha)?;
    let g = f.partial_set(omega);
    Ok(h_of_derivative(&g, omega, alpha, opts))
}

fn h_of_derivative(g: &FnExpr, omega: VarSet, alpha: &[f64], opts: &SupOptions) -> f64 {
    if g.is_zero() {
        return 0.0;
    }
    sup_on_lines(g, omega, alpha, opts)
}

/// `H_Ω f(α)` together with `‖f‖_∞ Π_{j∈Ω} 1/α_j` from the Cauchy estimates.
pub fn h_bracket(f: &FnExpr, omega: VarSet, alpha: &[f64], opts: &SupOptions) -> Result<HBracket, FnError> {
    let lower = h_omega(f, omega, alpha, opts)?;
    let m = sup_norm(f);
    let upper = omega.iter().fold(m, |u, j| u / alpha[j]);
    Ok(HBracket { lower, upper })
}

struct Partial {
    value: f64,
    err: f64,
    converged: bool,
    diverging: bool,
}

fn integrate_h(f: &FnExpr, omega: VarSet, opts: &BesovOptions) -> Result<Partial, QuadError> {
    let g = f.partial_set(omega);
    if g.is_zero() {
        return Ok(Partial { value: 0.0, err: 0.0, converged: true, diverging: false });
    }
    let idx = omega.indices();
    let k = idx.len();
    let n = f.dim();
    let run = |axes: &[Axis], spec: &QuadSpec| -> Result<QuadResult<f64>, QuadError> {
        let mut alpha = vec![1.0; n];
        integrate_box(
            axes,
            |x| {
                for (t, &j) in idx.iter().enumerate() {
                    // the open half-plane: nudge the left endpoint
                    alpha[j] = x[t].max(1e-300);
                }
                h_of_derivative(&g, omega, &alpha, &opts.sup)
            },
            spec,
        )
    };
    let boxed = |a: f64| -> Result<QuadResult<f64>, QuadError> {
        run(&vec![Axis::Interval { a: 0.0, b: a }; k], &opts.quad)
    };
    let a = opts.quad.alpha_max;

    match opts.quad.domain {
        DomainMode::Mapped => {
            let r = run(&vec![Axis::PowerHalfLine { a: 0.0, scale: opts.quad.scale, power: 2.0 }; k], &opts.quad)?;
            let mut out = Partial { value: r.value, err: r.err_est, converged: r.converged, diverging: false };
            if !r.converged && opts.detect_divergence {
                let (i1, i2, i4) = (boxed(a)?, boxed(2.0 * a)?, boxed(4.0 * a)?);
                out.diverging = shells_diverge(i1.value, i2.value, i4.value, opts.quad.rel_tol);
            }
            Ok(out)
        }
        DomainMode::Truncated => {
            let i1 = boxed(a)?;
            if !opts.detect_divergence {
                return Ok(Partial { value: i1.value, err: i1.err_est, converged: i1.converged, diverging: false });
            }
            let (i2, i4) = (boxed(2.0 * a)?, boxed(4.0 * a)?);
            let diverging = shells_diverge(i1.value, i2.value, i4.value, opts.quad.rel_tol);
            let (d1, d2) = (i2.value - i1.value, i4.value - i2.value);
            // geometric model of the remaining shells beyond alpha_max
            let tail = if diverging {
                f64::INFINITY
            } else if d1 > 0.0 && d2 < d1 {
                d1 / (1.0 - d2 / d1)
            } else {
                d1.abs() + d2.abs()
            };
            Ok(Partial {
                value: i1.value,
                err: i1.err_est + tail,
                converged: i1.converged && i2.converged && i4.converged,
                diverging,
            })
        }
    }
}

/// Doubling test on `I(A), I(2A), I(4A)`: the integral is taken to diverge
/// when the second shell is not clearly smaller than the first and still
/// matters at the requested tolerance.
pub fn shells_diverge(i1: f64, i2: f64, i4: f64, rel_tol: f64) -> bool {
    let (d1, d2) = (i2 - i1, i4 - i2);
    d2 > rel_tol * i4.abs() && d2 >= 0.9 * d1
}

/// `‖f‖_{B_Ω}`; `Ω = ∅` gives the supremum norm.
pub fn seminorm(f: &FnExpr, omega: VarSet, opts: &BesovOptions) -> Result<SeminormEntry, QuadError> {
    let n = f.dim();
    assert!(omega.is_subset(VarSet::full(n)), "subset out of range");
    let entry = |value, err_est, converged, diverging, method| SeminormEntry { omega, value, err_est, converged, diverging, method };
    if omega.is_empty() {
        let v = sup_on_lines(f, VarSet::EMPTY, &vec![0.0; n], &opts.sup);
        return Ok(entry(v, 0.0, true, false, Method::Sup));
    }
    if !omega.is_subset(f.support()) {
        return Ok(entry(0.0, 0.0, true, false, Method::Zero));
    }
    let (c, groups) = f.separate();
    if opts.force_generic || groups.len() < 2 {
        let p = integrate_h(f, omega, opts)?;
        return Ok(entry(p.value, p.err, p.converged, p.diverging, Method::Generic));
    }
    let mut factors: Vec<Partial> = Vec::with_capacity(groups.len());
    for (s, g) in &groups {
        let w = omega.intersection(*s);
        if w.is_empty() {
            let v = sup_on_lines(g, VarSet::EMPTY, &vec![0.0; n], &opts.sup);
            factors.push(Partial { value: v, err: 0.0, converged: true, diverging: false });
        } else {
            factors.push(integrate_h(g, w, opts)?);
        }
    }
    let value = factors.iter().fold(c.norm(), |v, p| v * p.value);
    let mut err = 0.0;
    for (i, p) in factors.iter().enumerate() {
        let others = factors.iter().enumerate().filter(|(k, _)| *k != i).fold(c.norm(), |v, (_, q)| v * (q.value + q.err));
        err += p.err * others;
    }
    Ok(entry(
        value,
        err,
        factors.iter().all(|p| p.converged),
        factors.iter().any(|p| p.diverging),
        Method::Factorized,
    ))
}

/// All `2^n` seminorms and their sum.
pub fn bnorm(f: &FnExpr, opts: &BesovOptions) -> Result<SeminormReport, QuadError> {
    let n = f.dim();
    let mut entries = Vec::with_capacity(1 << n);
    for omega in VarSet::all(n) {
        entries.push(seminorm(f, omega, opts)?);
    }
    let total = entries.iter().map(|e| e.value).sum();
    let err_est = entries.iter().map(|e| e.err_est).sum();
    let hinfty = entries[0].value;
    let b0 = entries[entries.len() - 1].value;
    Ok(SeminormReport { dim: n, entries, total, err_est, hinfty, b0 })
}
