use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::rules::{apply, RuleOut};
use super::{QuadResult, QuadSpec, QuadValue};
use crate::error::QuadError;

/// One real integration axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    /// `[a, b]`.
    Interval { a: f64, b: f64 },
    /// `[a, ∞)` through `x = a + scale·u/(1-u)`.
    HalfLine { a: f64, scale: f64 },
    /// `[a, ∞)` through `x = a + scale·(u/(1-u))^power`; flattens algebraic tails.
    PowerHalfLine { a: f64, scale: f64, power: f64 },
    /// `R` through `x = center + scale·(2u-1)/(u(1-u))`.
    Line { center: f64, scale: f64 },
}

impl Axis {
    #[inline]
    pub(crate) fn map(&self, u: f64) -> (f64, f64) {
        match *self {
            Axis::Interval { a, b } => (a + (b - a) * u, b - a),
            Axis::HalfLine { a, scale } => {
                let r = 1.0 - u;
                (a + scale * u / r, scale / (r * r))
            }
            Axis::PowerHalfLine { a, scale, power } => {
                let r = 1.0 - u;
                let t = u / r;
                (a + scale * t.powf(power), scale * power * t.powf(power - 1.0) / (r * r))
            }
            Axis::Line { center, scale } => {
                let q = u * (1.0 - u);
                (center + scale * (2.0 * u - 1.0) / q, scale * (2.0 * u * u - 2.0 * u + 1.0) / (q * q))
            }
        }
    }
}

struct Region<V> {
    lo: Vec<f64>,
    hi: Vec<f64>,
    depth: Vec<u32>,
    out: RuleOut<V>,
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    // largest error first; older regions first among ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

fn eval_region<V, F>(lo: &[f64], hi: &[f64], f: &mut F) -> Result<RuleOut<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(&[f64]) -> Option<V>,
{
    let c: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let h: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a)).collect();
    apply(&c, &h, f).map_err(|point| QuadError::NonFinite { point })
}

/// Adaptive cubature on the unit cube, with an initial partition given by
/// per-axis breakpoints (each list starts at 0 and ends at 1).
pub(crate) fn adaptive_unit<V, F>(breaks: &[Vec<f64>], mut g: F, spec: &QuadSpec) -> Result<QuadResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(&[f64]) -> V,
{
    spec.validate()?;
    let d = breaks.len();
    assert!(d >= 1, "at least one axis");
    let mut f = |p: &[f64]| {
        let v = g(p);
        if v.size().is_finite() {
            Some(v)
        } else {
            None
        }
    };

    let mut regions: Vec<Option<Region<V>>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;

    let counts: Vec<usize> = breaks.iter().map(|b| b.len() - 1).collect();
    let mut idx = vec![0usize; d];
    loop {
        let lo: Vec<f64> = (0..d).map(|k| breaks[k][idx[k]]).collect();
        let hi: Vec<f64> = (0..d).map(|k| breaks[k][idx[k] + 1]).collect();
        let out = eval_region(&lo, &hi, &mut f)?;
        evals += out.evals;
        heap.push(Key(out.err, regions.len()));
        regions.push(Some(Region { lo, hi, depth: vec![0; d], out }));
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }

    let sum_all = |regions: &[Option<Region<V>>]| {
        let mut total: Option<V> = None;
        let mut err = 0.0;
        for r in regions.iter().flatten() {
            total.get_or_insert_with(|| r.out.value.zero_like()).axpy(1.0, &r.out.value);
            err += r.out.err;
        }
        (total.unwrap(), err)
    };

    let (mut total, mut err) = sum_all(&regions);
    let per_region = regions.iter().flatten().next().map(|r| r.out.evals).unwrap_or(1);
    let mut iter = 0usize;
    let converged = loop {
        if err <= spec.abs_tol.max(spec.rel_tol * total.size()) {
            break true;
        }
        if evals + 2 * per_region > spec.max_evals {
            break false;
        }
        let Some(Key(_, id)) = heap.pop() else { break false };
        let r = regions[id].take().unwrap();
        let axis = (0..d)
            .filter(|&k| r.depth[k] < spec.max_refine_depth)
            .max_by(|&a, &b| {
                r.out.axis_score[a]
                    .total_cmp(&r.out.axis_score[b])
                    .then((r.hi[a] - r.lo[a]).total_cmp(&(r.hi[b] - r.lo[b])))
                    .then(b.cmp(&a))
            });
        let Some(axis) = axis else {
            // depth exhausted: keep the region but stop refining it
            regions[id] = Some(r);
            if heap.is_empty() {
                break false;
            }
            continue;
        };
        let mid = 0.5 * (r.lo[axis] + r.hi[axis]);
        let mut hi1 = r.hi.clone();
        hi1[axis] = mid;
        let mut lo2 = r.lo.clone();
        lo2[axis] = mid;
        let mut depth = r.depth.clone();
        depth[axis] += 1;
        let o1 = eval_region(&r.lo, &hi1, &mut f)?;
        let o2 = eval_region(&lo2, &r.hi, &mut f)?;
        evals += o1.evals + o2.evals;
        total.axpy(-1.0, &r.out.value);
        total.axpy(1.0, &o1.value);
        total.axpy(1.0, &o2.value);
        err += o1.err + o2.err - r.out.err;
        heap.push(Key(o1.err, regions.len()));
        regions.push(Some(Region { lo: r.lo.clone(), hi: hi1, depth: depth.clone(), out: o1 }));
        heap.push(Key(o2.err, regions.len()));
        regions.push(Some(Region { lo: lo2, hi: r.hi, depth, out: o2 }));
        iter += 1;
        if iter % 64 == 0 {
            let (t, e) = sum_all(&regions);
            total = t;
            err = e;
        }
    };
    let (value, err) = sum_all(&regions);
    Ok(QuadResult { value, err_est: err, truncation_est: 0.0, n_evals: evals, converged })
}

/// Adaptive cubature of `f(x)` over a product of real axes.
pub fn integrate_box<V, F>(axes: &[Axis], mut f: F, spec: &QuadSpec) -> Result<QuadResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(&[f64]) -> V,
{
    let n = spec.base_panels;
    let breaks: Vec<Vec<f64>> = axes.iter().map(|_| (0..=n).map(|i| i as f64 / n as f64).collect()).collect();
    let mut x = vec![0.0; axes.len()];
    adaptive_unit(
        &breaks,
        |u| {
            let mut jac = 1.0;
            for (k, ax) in axes.iter().enumerate() {
                let (xk, jk) = ax.map(u[k]);
                x[k] = xk;
                jac *= jk;
            }
            let v = f(&x);
            let mut out = v.zero_like();
            out.axpy(jac, &v);
            out
        },
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_half_line() {
        let spec = QuadSpec::default();
        let r = integrate_box(&[Axis::HalfLine { a: 0.0, scale: 1.0 }], |x| 1.0 / (1.0 + x[0] * x[0]), &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - core::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(r.err_est < 1e-6);
    }

    #[test]
    fn slow_algebraic_tail() {
        let spec = QuadSpec::default();
        let r = integrate_box(&[Axis::PowerHalfLine { a: 0.0, scale: 1.0, power: 2.0 }], |x| (1.0 + x[0]).powf(-1.5), &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn whole_line() {
        let spec = QuadSpec::default();
        let r = integrate_box(&[Axis::Line { center: 0.3, scale: 2.0 }], |x| 1.0 / (1.0 + x[0] * x[0]), &spec).unwrap();
        assert!((r.value - core::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn three_dimensional_gaussian() {
        let spec = QuadSpec { rel_tol: 1e-7, ..QuadSpec::default() };
        let axes = [Axis::Interval { a: -4.0, b: 4.0 }; 3];
        let r = integrate_box(&axes, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), &spec).unwrap();
        let want = core::f64::consts::PI.powf(1.5) * libm_erf3();
        assert!((r.value - want).abs() < 1e-6, "{} vs {}", r.value, want);
    }

    // erf(4)^3
    fn libm_erf3() -> f64 {
        let e = 0.9999999845827421_f64;
        e * e * e
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let spec = QuadSpec::default();
        let r = integrate_box(&[Axis::Interval { a: -1.0, b: 1.0 }], |x| if x[0] > 0.5 { f64::NAN } else { 1.0 }, &spec);
        assert!(matches!(r, Err(QuadError::NonFinite { .. })));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let spec = QuadSpec { max_evals: 200, rel_tol: 1e-14, ..QuadSpec::default() };
        let r = integrate_box(&[Axis::Interval { a: 0.0, b: 1.0 }], |x| x[0].sqrt(), &spec).unwrap();
        assert!(!r.converged);
    }
}
