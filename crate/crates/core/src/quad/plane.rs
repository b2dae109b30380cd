//! Integration over products of right half-planes with the area measure
//! `dV(λ) = α dα dβ`, `λ = α + iβ`.
//!
//! In mapped mode the imaginary axis is split into a central segment
//! `[-start, start]` and two tails. For holomorphic integrands the tails may
//! be rotated into the lower half-plane by `tail_angle`, which turns the
//! oscillation of exponential atoms into decay; the integrand then receives
//! the holomorphic continuation of `λ̄` in `lambda_flat`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64 as C64;

use super::cubature::adaptive_unit;
use super::{ComplexScale, DomainMode, QuadResult, QuadSpec, QuadValue};
use crate::error::QuadError;

/// Shape of the imaginary-part contour for one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contour {
    /// Half-length of the undeformed central segment. Must exceed the
    /// imaginary parts of all singularities of the integrand in `β`.
    pub start: f64,
    /// Tail rotation angle (zero for non-holomorphic integrands).
    pub angle: f64,
}

impl Contour {
    pub fn real(start: f64) -> Self {
        Contour { start, angle: 0.0 }
    }

    /// Central segment reaching past every imaginary part in `poles`.
    pub fn around(poles_im: impl IntoIterator<Item = f64>, angle: f64) -> Self {
        let m = poles_im.into_iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Contour { start: 1.0 + 2.0 * m, angle }
    }
}

/// A quadrature node in `(C_+)^k`.
pub struct PlanePoint<'a> {
    pub lambda: &'a [C64],
    /// `α - iβ`, the holomorphic continuation of `conj(λ)` along the contour.
    pub lambda_flat: &'a [C64],
    pub alpha: &'a [f64],
}

/// `x = scale·u/(1-u)^2` and its derivative. The quadratic pole keeps
/// integrands decaying like `|λ|^-4` bounded at the far corner of the
/// unit square.
#[inline]
pub(crate) fn compactify(u: f64, scale: f64) -> (f64, f64) {
    let r = 1.0 - u;
    (scale * u / (r * r), scale * (1.0 + u) / (r * r * r))
}

fn beta_map(u: f64, c: &Contour, scale: f64) -> (C64, C64) {
    let b = c.start;
    if u < 0.25 {
        let (r, dr) = compactify(1.0 - 4.0 * u, scale);
        let rot = C64::from_polar(1.0, c.angle);
        (-b - rot * r, rot * (4.0 * dr))
    } else if u <= 0.75 {
        (C64::new(b * (4.0 * u - 2.0), 0.0), C64::new(4.0 * b, 0.0))
    } else {
        let (r, dr) = compactify(4.0 * u - 3.0, scale);
        let rot = C64::from_polar(1.0, -c.angle);
        (b + rot * r, rot * (4.0 * dr))
    }
}

fn breakpoints(k: usize, spec: &QuadSpec) -> Vec<Vec<f64>> {
    let n = spec.base_panels;
    let even: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mut out = Vec::with_capacity(2 * k);
    for _ in 0..k {
        out.push(even.clone());
        match spec.domain {
            DomainMode::Mapped => {
                let inner = n - 2;
                let mut b = vec![0.0];
                for i in 0..=inner {
                    b.push(0.25 + 0.5 * i as f64 / inner as f64);
                }
                b.push(1.0);
                out.push(b);
            }
            DomainMode::Truncated => out.push(even.clone()),
        }
    }
    out
}

/// `∫_R^∞ r (1+r)^(-p) dr` times `π`.
fn radial_tail(r: f64, p: f64) -> f64 {
    PI * ((1.0 + r).powf(2.0 - p) / (p - 2.0) - (1.0 + r).powf(1.0 - p) / (p - 1.0))
}

struct Mapper {
    k: usize,
    lam: Vec<C64>,
    flat: Vec<C64>,
    alpha: Vec<f64>,
}

impl Mapper {
    fn new(k: usize) -> Self {
        Mapper { k, lam: vec![C64::new(0.0, 0.0); k], flat: vec![C64::new(0.0, 0.0); k], alpha: vec![0.0; k] }
    }

    /// Fills the point for unit coordinates `u`; returns the Jacobian times `Π α`.
    fn set(&mut self, u: &[f64], contours: &[Contour], spec: &QuadSpec) -> C64 {
        let mut jac = C64::new(1.0, 0.0);
        for j in 0..self.k {
            let (a, da, b, db) = match spec.domain {
                DomainMode::Mapped => {
                    let (a, da) = compactify(u[2 * j], spec.scale);
                    let (b, db) = beta_map(u[2 * j + 1], &contours[j], spec.scale * contours[j].start.max(1.0));
                    (a, da, b, db)
                }
                DomainMode::Truncated => {
                    let b = spec.beta_max * (2.0 * u[2 * j + 1] - 1.0);
                    (spec.alpha_max * u[2 * j], spec.alpha_max, C64::new(b, 0.0), C64::new(2.0 * spec.beta_max, 0.0))
                }
            };
            let ib = C64::new(0.0, 1.0) * b;
            self.lam[j] = a + ib;
            self.flat[j] = a - ib;
            self.alpha[j] = a;
            jac *= db * (a * da);
        }
        jac
    }

    fn point(&self) -> PlanePoint<'_> {
        PlanePoint { lambda: &self.lam, lambda_flat: &self.flat, alpha: &self.alpha }
    }
}

fn truncation_estimate<V, F>(k: usize, spec: &QuadSpec, f: &mut F) -> f64
where
    V: QuadValue,
    F: FnMut(&PlanePoint) -> V,
{
    if spec.domain == DomainMode::Mapped {
        return 0.0;
    }
    let (a_max, b_max, p) = (spec.alpha_max, spec.beta_max, spec.tail_decay);
    let mut m = Mapper::new(k);
    let mut c_fit = 0.0f64;
    let faces: [(f64, f64); 7] = [
        (a_max, 0.0),
        (a_max, 0.5 * b_max),
        (a_max, -0.5 * b_max),
        (0.25 * a_max, b_max),
        (0.25 * a_max, -b_max),
        (0.75 * a_max, b_max),
        (0.75 * a_max, -b_max),
    ];
    for j in 0..k {
        for &(a, b) in &faces {
            for i in 0..k {
                let (ai, bi) = if i == j { (a, b) } else { (1.0, 0.0) };
                m.lam[i] = C64::new(ai, bi);
                m.flat[i] = C64::new(ai, -bi);
                m.alpha[i] = ai;
            }
            let w: f64 = m.alpha.iter().product();
            let v = f(&m.point()).size() * w;
            let model: f64 = m.lam.iter().map(|l| (1.0 + l.norm()).powf(-p)).product();
            c_fit = c_fit.max(v / model);
        }
    }
    let r = a_max.min(b_max);
    let full = radial_tail(0.0, p);
    c_fit * k as f64 * radial_tail(r, p) * full.powi(k as i32 - 1)
}

/// `∫_{(C_+)^k} f(λ) Π_j α_j dα_j dβ_j` for a holomorphic-in-`β` integrand.
pub fn integrate_planes<V, F>(k: usize, contours: &[Contour], spec: &QuadSpec, mut f: F) -> Result<QuadResult<V>, QuadError>
where
    V: ComplexScale,
    F: FnMut(&PlanePoint) -> V,
{
    assert_eq!(contours.len(), k, "one contour per variable");
    let mut m = Mapper::new(k);
    let mut res = adaptive_unit(
        &breakpoints(k, spec),
        |u| {
            let jac = m.set(u, contours, spec);
            let mut v = f(&m.point());
            v.scale_c(jac);
            v
        },
        spec,
    )?;
    res.truncation_est = truncation_estimate(k, spec, &mut f);
    Ok(res)
}

/// As [`integrate_planes`] for real-valued (typically non-holomorphic)
/// integrands; tails are never rotated.
pub fn integrate_planes_real<V, F>(k: usize, starts: &[f64], spec: &QuadSpec, mut f: F) -> Result<QuadResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(&PlanePoint) -> V,
{
    let contours: Vec<Contour> = starts.iter().map(|s| Contour::real(*s)).collect();
    let mut m = Mapper::new(k);
    let mut res = adaptive_unit(
        &breakpoints(k, spec),
        |u| {
            let jac = m.set(u, &contours, spec);
            let v = f(&m.point());
            let mut out = v.zero_like();
            out.axpy(jac.re, &v);
            out
        },
        spec,
    )?;
    res.truncation_est = truncation_estimate(k, spec, &mut f);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(z: C64, flat: C64) -> C64 {
        -2.0 / (PI * (z + flat) * (z + flat))
    }

    #[test]
    fn reproduces_resolvent_with_and_without_rotation() {
        // ∫ K(z, λ̄) f'(λ) dV = f(z) - f(∞) for f = (λ+1)^-1
        let z = C64::new(0.7, -0.4);
        for angle in [0.0, PI / 4.0] {
            let spec = QuadSpec { rel_tol: 1e-9, ..QuadSpec::default() };
            let c = [Contour::around([z.im], angle)];
            let r = integrate_planes(1, &c, &spec, |p| kernel(z, p.lambda_flat[0]) * (-(p.lambda[0] + 1.0).powi(-2))).unwrap();
            let want = (z + 1.0).inv();
            assert!((r.value - want).norm() < 1e-8, "angle {angle}: {} vs {} err {} conv {} n {}", r.value, want, r.err_est, r.converged, r.n_evals);
        }
    }

    #[test]
    fn rotation_tames_exponential_oscillation() {
        let z = C64::new(0.5, 1.5);
        let spec = QuadSpec { rel_tol: 1e-10, ..QuadSpec::default() };
        let c = [Contour::around([z.im], PI / 4.0)];
        let r = integrate_planes(1, &c, &spec, |p| kernel(z, p.lambda_flat[0]) * (-(-p.lambda[0]).exp())).unwrap();
        assert!(r.converged);
        assert!((r.value - (-z).exp()).norm() < 1e-9);
        assert!(r.n_evals < 200_000, "{}", r.n_evals);
    }

    #[test]
    fn truncated_mode_reports_a_tail() {
        let z = C64::new(1.0, 0.0);
        let spec = QuadSpec { domain: DomainMode::Truncated, rel_tol: 1e-7, ..QuadSpec::default() };
        let r = integrate_planes(1, &[Contour::real(1.0)], &spec, |p| kernel(z, p.lambda_flat[0]) * (-(p.lambda[0] + 1.0).powi(-2))).unwrap();
        let want = (z + 1.0).inv();
        assert!(r.truncation_est > 0.0);
        assert!((r.value - want).norm() <= r.err_est + r.truncation_est);
    }

    #[test]
    fn kernel_modulus_is_not_integrable() {
        // the β-integral of |K(1, λ̄)| is 2/(1+α), so ∫ |K| dV grows like 2·alpha_max
        let run = |alpha_max: f64| {
            let spec = QuadSpec { domain: DomainMode::Truncated, alpha_max, beta_max: 1e4, rel_tol: 1e-6, ..QuadSpec::default() };
            let one = C64::new(1.0, 0.0);
            integrate_planes_real(1, &[1.0], &spec, |p| kernel(one, p.lambda_flat[0]).norm()).unwrap().value
        };
        let (a, b) = (run(50.0), run(100.0));
        assert!(a > 1.0);
        let want = 2.0 * (50.0 - (101.0f64 / 51.0).ln());
        assert!((b - a - want).abs() < 0.02 * want, "{a} {b}");
    }
}
