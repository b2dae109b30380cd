//! Reproducing kernels, the operator `Q_n`, reproducing formulas and the
//! shift semigroup.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::decomp::{elementary_decompose, is_elementary};
use crate::error::{CalcError, FnError, QuadError};
use crate::fnalg::FnExpr;
use crate::kernel::{kernel_integral, kernel_integral_fn, Strategy};
use crate::quad::{integrate_planes_real, DomainMode, QuadSpec};
use crate::varset::VarSet;
use crate::C64;

fn check_point(z: &[C64]) -> Result<(), FnError> {
    for (i, x) in z.iter().enumerate() {
        if !(x.re > 0.0) || !x.im.is_finite() {
            return Err(FnError::DomainViolation { index: i, re: x.re });
        }
    }
    Ok(())
}

/// `K(z, λ) = -2/(π(z+λ)^2)`.
pub fn kernel(z: C64, lambda: C64) -> Result<C64, FnError> {
    check_point(&[z])?;
    check_point(&[lambda]).map_err(|_| FnError::DomainViolation { index: 1, re: lambda.re })?;
    let s = z + lambda;
    Ok(-2.0 / (PI * s * s))
}

/// `K_n(z, λ) = Π_j K(z_j, λ_j)`.
pub fn kernel_n(z: &[C64], lambda: &[C64]) -> Result<C64, FnError> {
    if z.len() != lambda.len() {
        return Err(FnError::DimensionMismatch { expected: z.len(), got: lambda.len() });
    }
    z.iter().zip(lambda).try_fold(C64::new(1.0, 0.0), |acc, (a, b)| Ok(acc * kernel(*a, *b)?))
}

/// Gap between the two sides of a reproducing identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ReproReport {
    pub lhs: C64,
    pub rhs: C64,
    pub gap: f64,
    pub err_est: f64,
    pub converged: bool,
    pub n_evals: usize,
}

impl ReproReport {
    fn new(lhs: C64, r: crate::quad::QuadResult<C64>) -> Self {
        ReproReport {
            lhs,
            rhs: r.value,
            gap: (lhs - r.value).norm(),
            err_est: r.total_err(),
            converged: r.converged,
            n_evals: r.n_evals,
        }
    }
}

/// Outcome of the numerical integrability test.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport {
    pub truncated: f64,
    pub doubled: f64,
    pub stable: bool,
}

/// Relative change tolerated between the truncated integral and its doubling.
pub const INTEGRABILITY_TOL: f64 = 0.05;

/// `∫ |g(λ)| Π_j Re λ_j / |λ_j|^2 dS_n(λ)` over the truncated box and its
/// doubling; stable when the two agree within [`INTEGRABILITY_TOL`].
pub fn check_integrability<G>(n: usize, spec: &QuadSpec, mut g: G) -> Result<IntegrabilityReport, QuadError>
where
    G: FnMut(&[C64]) -> C64,
{
    let base = QuadSpec {
        domain: DomainMode::Truncated,
        rel_tol: spec.rel_tol.max(1e-3),
        max_evals: spec.max_evals.min(400_000),
        ..spec.clone()
    };
    let mut run = |scale: f64| -> Result<f64, QuadError> {
        let s = QuadSpec { alpha_max: base.alpha_max * scale, beta_max: base.beta_max * scale, ..base.clone() };
        let r = integrate_planes_real(n, &vec![1.0; n], &s, |p| {
            let w: f64 = p.lambda.iter().map(|l| l.norm_sqr()).product();
            g(p.lambda).norm() / w
        })?;
        Ok(r.value)
    };
    let a = run(1.0)?;
    let b = run(2.0)?;
    let stable = a.is_finite() && b.is_finite() && (b - a).abs() <= INTEGRABILITY_TOL * b.abs().max(f64::MIN_POSITIVE);
    Ok(IntegrabilityReport { truncated: a, doubled: b, stable })
}

/// `(Q_n g)(z) = ∫ K_n(z, λ̄) g(λ) dV_n(λ)`.
pub fn apply_qn(g: &FnExpr, z: &[C64], spec: &QuadSpec) -> Result<crate::quad::QuadResult<C64>, CalcError> {
    let n = g.dim();
    if z.len() != n {
        return Err(CalcError::DimensionMismatch { expected: n, got: z.len() });
    }
    check_point(z)?;
    if g.is_zero() {
        return Ok(crate::quad::QuadResult { value: C64::new(0.0, 0.0), err_est: 0.0, truncation_est: 0.0, n_evals: 0, converged: true });
    }
    let report = check_integrability(n, spec, |l| g.eval_closed(l))?;
    if !report.stable {
        return Err(QuadError::NotIntegrable(alloc::format!(
            "truncated integral {:.6e} changed to {:.6e} under doubling",
            report.truncated,
            report.doubled
        ))
        .into());
    }
    kernel_integral(z, VarSet::full(n), g, spec, Strategy::Factorized)
}

/// `Q_n` applied to a callable, by direct integration.
pub fn apply_qn_fn<G>(n: usize, g: G, z: &[C64], spec: &QuadSpec) -> Result<crate::quad::QuadResult<C64>, CalcError>
where
    G: FnMut(&[C64]) -> C64,
{
    if z.len() != n {
        return Err(CalcError::DimensionMismatch { expected: n, got: z.len() });
    }
    check_point(z)?;
    kernel_integral_fn(z, VarSet::full(n), spec, g)
}

/// `f_el(z)` against `(Q_n D_n f)(z)`.
pub fn reproduce_elementary(f: &FnExpr, z: &[C64], spec: &QuadSpec) -> Result<ReproReport, CalcError> {
    let n = f.dim();
    check_point(z)?;
    let d = elementary_decompose(f);
    let lhs = d.part(VarSet::full(n)).map(|p| p.eval_closed(z)).unwrap_or_default();
    let g = f.partial_set(VarSet::full(n));
    if g.is_zero() {
        return Ok(ReproReport { lhs, rhs: C64::new(0.0, 0.0), gap: lhs.norm(), err_est: 0.0, converged: true, n_evals: 0 });
    }
    let r = kernel_integral(z, VarSet::full(n), &g, spec, Strategy::Factorized)?;
    Ok(ReproReport::new(lhs, r))
}

fn shifted_point(z: &[C64], t: &[f64]) -> Result<Vec<C64>, FnError> {
    if z.len() != t.len() {
        return Err(FnError::DimensionMismatch { expected: z.len(), got: t.len() });
    }
    if t.iter().any(|x| !(*x >= 0.0)) {
        return Err(FnError::InvalidAtom("shift must be >= 0".into()));
    }
    Ok(z.iter().zip(t).map(|(a, b)| a + b).collect())
}

fn require_vanishing(f: &FnExpr) -> Result<(), FnError> {
    if f.support() != VarSet::full(f.dim()) || !is_elementary(f) {
        return Err(FnError::InvalidAtom("function must vanish at infinity in every variable".into()));
    }
    Ok(())
}

/// `f(z + t)` against `∫ K_n(z + t, λ̄) D_n f(λ) dV_n(λ)`.
pub fn reproduce_shifted(f: &FnExpr, z: &[C64], t: &[f64], spec: &QuadSpec) -> Result<ReproReport, CalcError> {
    check_point(z)?;
    require_vanishing(f)?;
    let zt = shifted_point(z, t)?;
    let lhs = f.eval_closed(&zt);
    let g = f.partial_set(VarSet::full(f.dim()));
    let r = kernel_integral(&zt, VarSet::full(f.dim()), &g, spec, Strategy::Factorized)?;
    Ok(ReproReport::new(lhs, r))
}

/// `T(t)f = f(· + t)`.
pub fn shift(f: &FnExpr, t: &[f64]) -> Result<FnExpr, FnError> {
    f.shift(t)
}

/// `z ↦ f(z_1 + .. + z_n)`.
pub fn sum_of_vars(f: &FnExpr, n: usize) -> Result<FnExpr, FnError> {
    f.sum_of_vars(n)
}

/// `(T(t·1)f · ρ_{1+t}^2)(z)` against
/// `(-2/π)^n ∫ D_n(f ρ_1^2)(λ) ρ_{t+λ̄}(z)^2 dV_n(λ)`.
pub fn smoothed_identity(f: &FnExpr, z: &[C64], t: f64, spec: &QuadSpec) -> Result<ReproReport, CalcError> {
    let n = f.dim();
    check_point(z)?;
    require_vanishing(f)?;
    let rho1 = FnExpr::rho(n, C64::new(1.0, 0.0))?;
    let lhs = f.shift(&vec![t; n])?.mul(&FnExpr::rho(n, C64::new(1.0 + t, 0.0))?)?.mul(&FnExpr::rho(n, C64::new(1.0 + t, 0.0))?)?.eval_closed(z);
    let g = f.mul(&rho1)?.mul(&rho1)?.partial_set(VarSet::full(n));
    let zt: Vec<C64> = z.iter().map(|x| x + t).collect();
    let r = kernel_integral(&zt, VarSet::full(n), &g, spec, Strategy::Factorized)?;
    Ok(ReproReport::new(lhs, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p(s: &str) -> FnExpr {
        FnExpr::parse(s, None).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert!((kernel(c(1.0, 0.0), c(1.0, 0.0)).unwrap() - c(-1.0 / (2.0 * PI), 0.0)).norm() < 1e-16);
        let k2 = kernel_n(&[c(1.0, 0.0); 2], &[c(1.0, 0.0); 2]).unwrap();
        assert!((k2.re - 0.025330295910584444).abs() < 1e-15);
        assert!(kernel(c(0.0, 1.0), c(1.0, 0.0)).is_err());
        assert!(kernel(c(1.0, 1.0), c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn qn_recovers_resolvent() {
        let g = p("res([1],1,1)").partial(0);
        let r = apply_qn(&g, &[c(1.0, 0.0)], &QuadSpec::default()).unwrap();
        assert!((r.value - c(0.5, 0.0)).norm() < 1e-4);
        let zero = FnExpr::constant(1, c(0.0, 0.0));
        assert_eq!(apply_qn(&zero, &[c(1.0, 0.0)], &QuadSpec::default()).unwrap().value, c(0.0, 0.0));
    }

    #[test]
    fn qn_rejects_non_integrable() {
        // a nonzero constant grows logarithmically under doubling
        let r = check_integrability(1, &QuadSpec::default(), |_| c(1.0, 0.0)).unwrap();
        assert!(!r.stable, "{r:?}");
        let g = FnExpr::constant(1, c(1.0, 0.0));
        assert!(matches!(apply_qn(&g, &[c(1.0, 0.0)], &QuadSpec::default()), Err(CalcError::Quad(QuadError::NotIntegrable(_)))));
    }

    #[test]
    fn reproduction_examples() {
        let spec = QuadSpec::default();
        let rho = FnExpr::rho(2, c(1.0, 0.0)).unwrap();
        let r = reproduce_elementary(&rho, &[c(1.0, 0.0); 2], &spec).unwrap();
        assert!((r.lhs - c(0.25, 0.0)).norm() < 1e-15);
        assert!(r.gap < 1e-6, "{r:?}");
        let e = p("exp([1,1])");
        let r = reproduce_elementary(&e, &[c(0.5, 0.0); 2], &spec).unwrap();
        assert!((r.lhs.re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(r.gap < 1e-6, "{r:?}");
        let k = FnExpr::constant(2, c(3.0, 0.0));
        let r = reproduce_elementary(&k, &[c(0.5, 0.0); 2], &spec).unwrap();
        assert_eq!(r.lhs, c(0.0, 0.0));
        assert_eq!(r.rhs, c(0.0, 0.0));
        // non-elementary input: only the top part is reproduced
        let f = p("(1 + res([1,0],1,1)) * (2 + exp([0,1]))");
        let z = [c(0.7, 0.2), c(1.3, -0.4)];
        let r = reproduce_elementary(&f, &z, &spec).unwrap();
        let want = p("res([1,0],1,1)*exp([0,1])").eval(&z).unwrap();
        assert!((r.lhs - want).norm() < 1e-14);
        assert!(r.gap < 1e-6, "{r:?}");
    }

    #[test]
    fn shifted_examples() {
        let spec = QuadSpec::default();
        let rho = FnExpr::rho(2, c(1.0, 0.0)).unwrap();
        let r = reproduce_shifted(&rho, &[c(1.0, 0.0); 2], &[1.0, 1.0], &spec).unwrap();
        assert!((r.lhs.re - 1.0 / 9.0).abs() < 1e-15);
        assert!(r.gap < 1e-6);
        let e = p("exp([1])");
        let r = reproduce_shifted(&e, &[c(1.0, 0.0)], &[2.0], &spec).unwrap();
        assert!((r.lhs.re - (-3.0f64).exp()).abs() < 1e-15);
        assert!(r.gap < 1e-6);
        assert!(reproduce_shifted(&p("1 + res([1],1,1)"), &[c(1.0, 0.0)], &[1.0], &spec).is_err());
    }

    #[test]
    fn shift_and_sum_of_vars() {
        let f = p("res([1],1,1)");
        let s = shift(&f, &[1.0]).unwrap();
        let z = [c(0.3, 0.9)];
        assert!((s.eval(&z).unwrap() - (z[0] + 2.0).inv()).norm() < 1e-15);
        assert_eq!(shift(&f, &[0.0]).unwrap().eval(&z).unwrap(), f.eval(&z).unwrap());
        let g = sum_of_vars(&p("exp([1])"), 3).unwrap();
        let w = [c(0.1, 0.2), c(0.3, -0.1), c(1.0, 0.0)];
        assert!((g.eval(&w).unwrap() - (-(w[0] + w[1] + w[2])).exp()).norm() < 1e-15);
        assert!(sum_of_vars(&g, 2).is_err());
    }

    #[test]
    fn smoothed_identity_holds() {
        let spec = QuadSpec::default();
        let f = p("res([1,0],1,1)*exp([0,1])");
        for t in [1.0, 0.5] {
            let r = smoothed_identity(&f, &[c(0.6, 0.3), c(1.2, -0.7)], t, &spec).unwrap();
            assert!(r.gap < 1e-6, "t={t}: {r:?}");
        }
    }
}
