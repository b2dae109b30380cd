//! Joint spectra of jointly diagonalizable commuting tuples, and checks of
//! the spectral inclusion and mapping theorems against the calculus.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::limit_at_infinity;
use crate::error::CalcError;
use crate::fnalg::FnExpr;
use crate::linalg::{eigen, eigenvalues, inverse, norm_2, CMat, CVec};
use crate::opcalc::{calc, CalcOptions, OperatorTuple};
use crate::varset::VarSet;
use crate::C64;

/// Residual above which a tuple is not treated as jointly diagonalizable.
pub const JOINT_RESIDUAL_TOL: f64 = 1e-8;
const COMBINATION_SEED: u64 = 0x6a01_57ec;

/// A common eigenbasis `S` with `S^{-1} A_j S` diagonal.
#[derive(Clone, Debug)]
pub struct JointDiag {
    pub basis: CMat,
    pub basis_inv: CMat,
    /// `values[i]` is the joint eigenvalue tuple of column `i` of `basis`.
    pub values: Vec<Vec<C64>>,
    /// Largest off-diagonal entry of `S^{-1} A_j S`, relative to `max(1, ‖A_j‖)`.
    pub residual: f64,
}

/// Diagonalizes a generic combination `Σ c_j A_j` and verifies the basis on each `A_j`.
pub fn joint_diagonalize(t: &OperatorTuple) -> Result<JointDiag, CalcError> {
    let mut rng = ChaCha8Rng::seed_from_u64(COMBINATION_SEED);
    let d = t.dim();
    let mut comb = CMat::zeros(d, d);
    for a in t.mats() {
        let c = C64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5));
        comb += a * c;
    }
    let (_, basis) = eigen(&comb);
    let basis_inv = inverse(&basis).map_err(|_| CalcError::NotDiagonalizable("eigenbasis is singular".into()))?;
    let mut values = alloc::vec![Vec::with_capacity(t.n()); d];
    let mut residual = 0.0f64;
    for a in t.mats() {
        let m = &basis_inv * a * &basis;
        let scale = norm_2(a).max(1.0);
        for i in 0..d {
            for k in 0..d {
                if i != k {
                    residual = residual.max(m[(i, k)].norm() / scale);
                }
            }
            values[i].push(m[(i, i)]);
        }
    }
    if residual > JOINT_RESIDUAL_TOL {
        return Err(CalcError::NotDiagonalizable(alloc::format!("joint residual {residual:.3e}")));
    }
    Ok(JointDiag { basis, basis_inv, values, residual })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JointSpectrum {
    /// Distinct joint eigenvalue tuples.
    pub points: Vec<Vec<C64>>,
    pub residual: f64,
}

fn same_point(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * (1.0 + x.norm()))
}

pub fn joint_spectrum(t: &OperatorTuple) -> Result<JointSpectrum, CalcError> {
    let jd = joint_diagonalize(t)?;
    let mut points: Vec<Vec<C64>> = Vec::new();
    for v in jd.values {
        if !points.iter().any(|p| same_point(p, &v, 1e-7)) {
            points.push(v);
        }
    }
    Ok(JointSpectrum { points, residual: jd.residual })
}

/// Largest distance from a point of `a` to the set `b`.
pub fn directed_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance of two finite sets.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    directed_distance(a, b).max(directed_distance(b, a))
}

/// Hausdorff distance of two finite sets of tuples, largest coordinate gap.
pub fn hausdorff_tuples(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    let d = |x: &Vec<C64>, y: &Vec<C64>| x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    let dir = |a: &[Vec<C64>], b: &[Vec<C64>]| a.iter().map(|x| b.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
    dir(a, b).max(dir(b, a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    /// Distance measured by the check (directed or two-sided).
    pub distance: f64,
    /// Operator-norm error budget of the computed `f(A)`.
    pub budget: f64,
    pub spectrum: Vec<C64>,
    pub image: Vec<C64>,
}

fn calc_spectrum(f: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<(Vec<C64>, f64), CalcError> {
    let r = calc(f, t, opts)?;
    Ok((eigenvalues(&r.value), r.err_est * t.dim() as f64))
}

/// `f(λ) ∈ σ(f(A))` for every joint eigenvalue `λ`.
pub fn check_spectral_inclusion(f: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<SpectralReport, CalcError> {
    let js = joint_spectrum(t)?;
    let image: Vec<C64> = js.points.iter().map(|p| f.eval_closed(p)).collect();
    let (spectrum, budget) = calc_spectrum(f, t, opts)?;
    Ok(SpectralReport { distance: directed_distance(&image, &spectrum), budget, spectrum, image })
}

/// `σ(f(A)) = f(σ(A))` for elementary `f` with full support and a tuple with
/// spectrum in the open right half-plane.
pub fn check_spectral_mapping_equality(f: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<SpectralReport, CalcError> {
    for (j, eigs) in t.eigs().iter().enumerate() {
        if let Some(z) = eigs.iter().find(|z| !(z.re > 0.0)) {
            return Err(CalcError::SpectrumOutside { index: j, re: z.re, im: z.im });
        }
    }
    if !f.is_zero() && (f.support() != VarSet::full(f.dim()) || !crate::decomp::is_elementary(f)) {
        return Err(crate::error::FnError::InvalidAtom("equality form needs an elementary function of all variables".into()).into());
    }
    let js = joint_spectrum(t)?;
    let image: Vec<C64> = js.points.iter().map(|p| f.eval_closed(p)).collect();
    let (spectrum, budget) = calc_spectrum(f, t, opts)?;
    Ok(SpectralReport { distance: hausdorff(&image, &spectrum), budget, spectrum, image })
}

/// `σ(f(A)) ⊆ ∪_Ω f_Ω(σ(A))`.
pub fn check_union_inclusion(f: &FnExpr, t: &OperatorTuple, opts: &CalcOptions) -> Result<SpectralReport, CalcError> {
    let js = joint_spectrum(t)?;
    let mut image = Vec::new();
    for omega in VarSet::all(f.dim()) {
        let lim = limit_at_infinity(f, omega);
        image.extend(js.points.iter().map(|p| lim.eval_closed(p)));
    }
    let (spectrum, budget) = calc_spectrum(f, t, opts)?;
    Ok(SpectralReport { distance: directed_distance(&spectrum, &image), budget, spectrum, image })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvectorReport {
    pub eigenvalue: Vec<C64>,
    /// `‖f(A)x - f(λ)x‖ / ‖x‖`.
    pub residual: f64,
    pub budget: f64,
}

/// `f(A)x = f(λ)x` for a joint eigenvector `x`.
pub fn check_eigenvector_mapping(f: &FnExpr, t: &OperatorTuple, x: &CVec, opts: &CalcOptions) -> Result<EigenvectorReport, CalcError> {
    let nx = x.norm();
    if !(nx > 0.0) || x.len() != t.dim() {
        return Err(CalcError::Shape);
    }
    let mut lam = Vec::with_capacity(t.n());
    for a in t.mats() {
        let ax = a * x;
        let l = x.dotc(&ax) / C64::new(nx * nx, 0.0);
        let res = (ax - x * l).norm();
        if res > JOINT_RESIDUAL_TOL * norm_2(a).max(1.0) * nx {
            return Err(CalcError::NotDiagonalizable(alloc::format!("not a joint eigenvector (residual {res:.3e})")));
        }
        lam.push(l);
    }
    let r = calc(f, t, opts)?;
    let fl = f.eval_closed(&lam);
    let residual = (&r.value * x - x * fl).norm() / nx;
    Ok(EigenvectorReport { eigenvalue: lam, residual, budget: r.err_est * t.dim() as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_rows;
    use crate::opcalc::random_commuting_tuple;

    fn diag(v: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(v.len(), v.iter().map(|x| C64::new(*x, 0.0))))
    }

    fn pair() -> OperatorTuple {
        OperatorTuple::new(alloc::vec![diag(&[1.0, 2.0]), diag(&[3.0, 4.0])], 1e-10).unwrap()
    }

    fn sorted(mut v: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
        v.sort_by(|a, b| a[0].re.total_cmp(&b[0].re).then(a[1].re.total_cmp(&b[1].re)));
        v
    }

    #[test]
    fn diagonal_readout() {
        let js = joint_spectrum(&pair()).unwrap();
        let pts = sorted(js.points);
        assert_eq!(pts.len(), 2);
        assert!(same_point(&pts[0], &[C64::new(1.0, 0.0), C64::new(3.0, 0.0)], 1e-12));
        assert!(same_point(&pts[1], &[C64::new(2.0, 0.0), C64::new(4.0, 0.0)], 1e-12));
        let scalars = OperatorTuple::new(alloc::vec![diag(&[2.0, 2.0]), diag(&[5.0, 5.0])], 1e-10).unwrap();
        assert_eq!(joint_spectrum(&scalars).unwrap().points.len(), 1);
    }

    #[test]
    fn similarity_invariance() {
        let (t, _) = random_commuting_tuple(2, 4, 11);
        let js = joint_spectrum(&t).unwrap();
        assert!(js.residual <= JOINT_RESIDUAL_TOL);
        let s = from_rows(&[
            alloc::vec![C64::new(1.0, 0.0), C64::new(0.3, 0.1), C64::new(0.0, 0.0), C64::new(0.2, 0.0)],
            alloc::vec![C64::new(0.0, 0.2), C64::new(1.0, 0.0), C64::new(0.1, 0.0), C64::new(0.0, 0.0)],
            alloc::vec![C64::new(0.0, 0.0), C64::new(0.4, 0.0), C64::new(1.0, 0.0), C64::new(0.0, -0.3)],
            alloc::vec![C64::new(0.1, 0.0), C64::new(0.0, 0.0), C64::new(0.2, 0.2), C64::new(1.0, 0.0)],
        ]);
        let si = inverse(&s).unwrap();
        let conj: Vec<CMat> = t.mats().iter().map(|a| &s * a * &si).collect();
        let t2 = OperatorTuple::new(conj, 1e-10).unwrap();
        let js2 = joint_spectrum(&t2).unwrap();
        let a: Vec<C64> = js.points.iter().map(|p| p[0] + p[1] * C64::new(0.0, 7.0)).collect();
        let b: Vec<C64> = js2.points.iter().map(|p| p[0] + p[1] * C64::new(0.0, 7.0)).collect();
        assert!(hausdorff(&a, &b) < 1e-8);
    }

    #[test]
    fn non_diagonalizable_is_reported() {
        let j = from_rows(&[alloc::vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)], alloc::vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]);
        let t = OperatorTuple::new(alloc::vec![j], 1e-10).unwrap();
        assert!(matches!(joint_spectrum(&t), Err(CalcError::NotDiagonalizable(_))));
    }

    #[test]
    fn mapping_checks_on_diagonal_pair() {
        let opts = CalcOptions::default();
        let t = pair();
        let f = FnExpr::parse("res([1,0],1,1)", None).unwrap();
        let r = check_spectral_inclusion(&f, &t, &opts).unwrap();
        assert!(r.distance < 1e-6, "{r:?}");
        let rho = FnExpr::rho(2, C64::new(1.0, 0.0)).unwrap();
        let r = check_spectral_mapping_equality(&rho, &t, &opts).unwrap();
        assert!(r.distance < 1e-6, "{r:?}");
        let g = FnExpr::parse("1 + res([1,0],1,1)*res([0,1],1,1)", None).unwrap();
        let r = check_union_inclusion(&g, &t, &opts).unwrap();
        assert!(r.distance < 1e-6, "{r:?}");
        let x = CVec::from_vec(alloc::vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let r = check_eigenvector_mapping(&f, &t, &x, &opts).unwrap();
        assert!(r.residual < 1e-6);
        let y = CVec::from_vec(alloc::vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(check_eigenvector_mapping(&f, &t, &y, &opts).is_err());
    }
}
