//! Small dense complex matrix helpers on top of `nalgebra`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::CalcError;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Condition estimate above which a solve is rejected.
pub const COND_LIMIT: f64 = 1.0e12;

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn scalar(d: usize, k: C64) -> CMat {
    CMat::from_diagonal_element(d, d, k)
}

/// Largest entry modulus.
pub fn norm_max(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

pub fn norm_fro(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute column sum.
pub fn norm_1(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral norm (largest singular value).
pub fn norm_2(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Largest singular value with its left and right singular vectors.
pub fn top_singular(m: &CMat) -> (f64, CVec, CVec) {
    let svd = m.clone().svd(true, true);
    let s = &svd.singular_values;
    let k = s.imax();
    let u = svd.u.as_ref().unwrap().column(k).into_owned();
    let v = svd.v_t.as_ref().unwrap().row(k).adjoint();
    (s[k], u, v)
}

/// Inverse with a 1-norm condition check.
pub fn inverse(m: &CMat) -> Result<CMat, CalcError> {
    if m.nrows() == 1 {
        let x = m[(0, 0)];
        if x == C64::new(0.0, 0.0) {
            return Err(CalcError::IllConditioned(f64::INFINITY));
        }
        return Ok(CMat::from_element(1, 1, x.inv()));
    }
    let inv = m.clone().lu().try_inverse().ok_or(CalcError::IllConditioned(f64::INFINITY))?;
    let cond = norm_1(m) * norm_1(&inv);
    if !(cond <= COND_LIMIT) {
        return Err(CalcError::IllConditioned(cond));
    }
    Ok(inv)
}

/// Inverse without the conditioning guard; fails only on exact singularity.
pub fn inverse_unchecked(m: &CMat) -> Result<CMat, CalcError> {
    if m.nrows() == 1 {
        let x = m[(0, 0)];
        if x == C64::new(0.0, 0.0) {
            return Err(CalcError::IllConditioned(f64::INFINITY));
        }
        return Ok(CMat::from_element(1, 1, x.inv()));
    }
    m.clone().lu().try_inverse().ok_or(CalcError::IllConditioned(f64::INFINITY))
}

/// Integer power, negative exponents through the inverse.
pub fn powi(m: &CMat, k: i32) -> Result<CMat, CalcError> {
    let base = if k < 0 { inverse(m)? } else { m.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = identity(m.nrows());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    Ok(acc)
}

/// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
pub fn expm(a: &CMat) -> CMat {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    let d = a.nrows();
    let nrm = norm_1(a);
    let s = if nrm > THETA13 { (nrm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::new(2f64.powi(-s), 0.0);
    let id = identity(d);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let r = |x: f64| C64::new(x, 0.0);
    let u_inner = &a6 * (&a6 * r(B[13]) + &a4 * r(B[11]) + &a2 * r(B[9]))
        + &a6 * r(B[7])
        + &a4 * r(B[5])
        + &a2 * r(B[3])
        + &id * r(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * r(B[12]) + &a4 * r(B[10]) + &a2 * r(B[8]))
        + &a6 * r(B[6])
        + &a4 * r(B[4])
        + &a2 * r(B[2])
        + &id * r(B[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut x = q.lu().solve(&p).expect("Padé denominator is invertible for scaled input");
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

/// Complex Schur form `m = q t q^*`.
pub fn schur(m: &CMat) -> (CMat, CMat) {
    if m.nrows() == 1 {
        return (identity(1), m.clone());
    }
    nalgebra::Schur::new(m.clone()).unpack()
}

pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    schur(m).1.diagonal().iter().copied().collect()
}

/// Eigenvalues and unit eigenvectors (columns), by back-substitution on the Schur form.
pub fn eigen(m: &CMat) -> (Vec<C64>, CMat) {
    let d = m.nrows();
    let (q, t) = schur(m);
    let scale = norm_max(&t).max(f64::MIN_POSITIVE);
    let smin = scale * f64::EPSILON;
    let mut vecs = CMat::zeros(d, d);
    for k in 0..d {
        let mut v = CVec::zeros(d);
        v[k] = C64::new(1.0, 0.0);
        let lk = t[(k, k)];
        for i in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * v[j];
            }
            let mut den = t[(i, i)] - lk;
            if den.norm() < smin {
                den = C64::new(smin, 0.0);
            }
            v[i] = -s / den;
        }
        let x = &q * v;
        let n = x.norm();
        vecs.set_column(k, &(x / C64::new(n, 0.0)));
    }
    (t.diagonal().iter().copied().collect(), vecs)
}

/// Commutator norm relative to the operand norms (Frobenius).
pub fn relative_commutator(a: &CMat, b: &CMat) -> f64 {
    let c = a * b - b * a;
    let den = norm_fro(a) * norm_fro(b);
    if den == 0.0 {
        0.0
    } else {
        norm_fro(&c) / den
    }
}

/// Builds a matrix from rows of complex entries.
pub fn from_rows(rows: &[Vec<C64>]) -> CMat {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(r, c, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CMat {
        CMat::from_fn(3, 3, |i, j| {
            C64::new((i + 2 * j) as f64, (i * j) as f64 + if i == j { 3.0 } else { 0.0 })
        })
    }

    // Reference values from an independent LAPACK-backed computation.
    #[test]
    fn expm_matches_reference() {
        let e = expm(&sample());
        let want = C64::new(1508.2948283862597, 786.463265018306);
        assert!((e[(0, 0)] - want).norm() / want.norm() < 1e-12);
        let z = expm(&CMat::zeros(2, 2));
        assert!((z - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn eigen_matches_reference() {
        let mut ev = eigenvalues(&sample());
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        let want = [
            C64::new(-0.994718487, 3.45257937),
            C64::new(0.0, 3.0),
            C64::new(9.99471849, 7.54742063),
        ];
        for (a, b) in ev.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-7);
        }
        let (vals, vecs) = eigen(&sample());
        for k in 0..3 {
            let v = vecs.column(k);
            let r = sample() * v - v * vals[k];
            assert!(r.norm() < 1e-10);
        }
    }

    #[test]
    fn norms_and_inverse() {
        let m = sample();
        assert!((norm_2(&m) - 13.124152536039762).abs() < 1e-10);
        let inv = inverse(&m).unwrap();
        assert!((inv[(0, 0)] - C64::new(-0.04444444444444445, -0.274074074074074)).norm() < 1e-12);
        assert!(inverse(&CMat::zeros(2, 2)).is_err());
        let p = powi(&m, -2).unwrap();
        assert!((p - &inv * &inv).norm() < 1e-12);
    }

    #[test]
    fn eigen_handles_repeated_eigenvalues() {
        let m = scalar(3, C64::new(2.0, 1.0));
        let (vals, vecs) = eigen(&m);
        assert!(vals.iter().all(|v| (v - C64::new(2.0, 1.0)).norm() < 1e-14));
        assert!((vecs.determinant().norm() - 1.0).abs() < 1e-12);
    }
}
