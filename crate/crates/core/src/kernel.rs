//! Kernel integrals
//! `(-2/π)^k ∫_{C_+^k} Π_{j∈Ω} (A_j + λ̄_j)^{-2} g(λ) dV_k(λ)`
//! for commuting operands `A_j` (matrices, or points of `C_+` for the scalar
//! reproducing formulas).
//!
//! The factorized strategy expands `g` into monomials and splits each one
//! into groups of variables coupled by a resolvent atom. Groups are
//! integrated separately (the operands commute, so the products of the
//! group integrals equal the full integral) and cached within one call.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::CalcError;
use crate::fnalg::{ExpAtom, FnExpr, Monomial, ResLin};
use crate::linalg::{eigenvalues, identity, inverse_unchecked, CMat};
use crate::quad::{integrate_planes, ComplexScale, Contour, QuadResult, QuadSpec};
use crate::varset::VarSet;
use crate::C64;

/// Operand types for kernel integrals.
pub trait KernelOperand: ComplexScale {
    /// `(A + μ)^{-2}`.
    fn sq_resolvent(&self, mu: C64) -> Result<Self, CalcError>;
    fn product(&self, o: &Self) -> Self;
    fn identity_like(&self) -> Self;
    /// Imaginary parts of the spectrum.
    fn spectrum_im(&self) -> Vec<f64>;
}

impl KernelOperand for C64 {
    fn sq_resolvent(&self, mu: C64) -> Result<Self, CalcError> {
        let u = self + mu;
        if u.norm() == 0.0 {
            return Err(CalcError::IllConditioned(f64::INFINITY));
        }
        Ok((u * u).inv())
    }
    fn product(&self, o: &Self) -> Self {
        self * o
    }
    fn identity_like(&self) -> Self {
        C64::new(1.0, 0.0)
    }
    fn spectrum_im(&self) -> Vec<f64> {
        vec![self.im]
    }
}

impl KernelOperand for CMat {
    fn sq_resolvent(&self, mu: C64) -> Result<Self, CalcError> {
        let mut m = self.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += mu;
        }
        let r = inverse_unchecked(&m)?;
        Ok(&r * &r)
    }
    fn product(&self, o: &Self) -> Self {
        self * o
    }
    fn identity_like(&self) -> Self {
        identity(self.nrows())
    }
    fn spectrum_im(&self) -> Vec<f64> {
        eigenvalues(self).iter().map(|z| z.im).collect()
    }
}

/// How kernel integrals are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Monomial expansion with per-group integrals.
    Factorized,
    /// One `2|Ω|`-dimensional integral of the unexpanded integrand.
    Direct,
}

const KPI: f64 = -2.0 / PI;

/// One coupled group of a monomial, with unit coefficient.
#[derive(Clone, Debug, PartialEq)]
struct Piece {
    vars: VarSet,
    rates: Vec<f64>,
    factors: Vec<ResLin>,
}

impl Piece {
    fn eval(&self, lam: &[C64]) -> C64 {
        let mut v = C64::new(1.0, 0.0);
        if self.rates.iter().any(|a| *a != 0.0) {
            v *= ExpAtom { rates: self.rates.clone() }.eval(lam);
        }
        for f in &self.factors {
            v *= f.eval(lam);
        }
        v
    }
}

/// Splits a monomial into groups of `omega`; fails when some variable of
/// `omega` does not occur, since the kernel alone is not integrable.
fn split(m: &Monomial, omega: VarSet) -> Result<Vec<Piece>, CalcError> {
    let n = m.rates.len();
    let mut comps: Vec<VarSet> = Vec::new();
    for f in &m.factors {
        let mut s = f.support();
        comps.retain(|c| {
            if c.intersection(s).is_empty() {
                true
            } else {
                s = s.union(*c);
                false
            }
        });
        comps.push(s);
    }
    let supp = m.support();
    for j in omega.iter() {
        if !supp.contains(j) {
            return Err(CalcError::Quad(crate::error::QuadError::NotIntegrable(alloc::format!(
                "integrand is constant in variable {j}"
            ))));
        }
        if !comps.iter().any(|c| c.contains(j)) {
            comps.push(VarSet::singleton(j));
        }
    }
    comps.sort();
    Ok(comps
        .into_iter()
        .map(|c| {
            let mut rates = vec![0.0; n];
            for j in c.iter() {
                rates[j] = m.rates[j];
            }
            let factors = m.factors.iter().filter(|f| f.support().is_subset(c)).cloned().collect();
            Piece { vars: c, rates, factors }
        })
        .collect())
}

/// Integrates `Π_{j∈vars} (-2/π)(A_j + λ♭_j)^{-2} · g(λ)` over `C_+^{|vars|}`.
fn plane_integral<V, G>(ops: &[V], vars: VarSet, contours: &[Contour], spec: &QuadSpec, mut g: G) -> Result<QuadResult<V>, CalcError>
where
    V: KernelOperand,
    G: FnMut(&[C64]) -> C64,
{
    let idx = vars.indices();
    let n = ops.len();
    let mut lam = vec![C64::new(0.0, 0.0); n];
    let mut failure: Option<CalcError> = None;
    let zero = {
        let mut z = ops[idx[0]].identity_like();
        z.scale_c(C64::new(0.0, 0.0));
        z
    };
    let r = integrate_planes(idx.len(), contours, spec, |p| {
        for (t, &j) in idx.iter().enumerate() {
            lam[j] = p.lambda[t];
        }
        let s = g(&lam);
        let mut acc: Option<V> = None;
        for (t, &j) in idx.iter().enumerate() {
            match ops[j].sq_resolvent(p.lambda_flat[t]) {
                Ok(m) => acc = Some(match acc {
                    None => m,
                    Some(a) => a.product(&m),
                }),
                Err(e) => {
                    failure.get_or_insert(e);
                    return zero.clone();
                }
            }
        }
        let mut v = acc.expect("nonempty group");
        v.scale_c(s * KPI.powi(idx.len() as i32));
        v
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r?)
}

/// Kernel integral of `g` over the variables in `omega`. The support of `g`
/// must lie in `omega`; operands outside `omega` are ignored.
pub fn kernel_integral<V: KernelOperand>(
    ops: &[V],
    omega: VarSet,
    g: &FnExpr,
    spec: &QuadSpec,
    strategy: Strategy,
) -> Result<QuadResult<V>, CalcError> {
    let n = g.dim();
    if ops.len() != n {
        return Err(CalcError::DimensionMismatch { expected: n, got: ops.len() });
    }
    if omega.is_empty() || !g.support().is_subset(omega) {
        return Err(CalcError::Fn(crate::error::FnError::InvalidAtom(alloc::format!(
            "integrand support {:?} must lie in a nonempty {:?}",
            g.support(),
            omega
        ))));
    }
    let spec_im: Vec<Vec<f64>> = ops.iter().map(|a| a.spectrum_im()).collect();
    let zero = || {
        let mut z = ops[omega.indices()[0]].identity_like();
        z.scale_c(C64::new(0.0, 0.0));
        z
    };
    match strategy {
        Strategy::Direct => {
            let contours: Vec<Contour> = omega.iter().map(|j| Contour::around(spec_im[j].iter().copied(), 0.0)).collect();
            plane_integral(ops, omega, &contours, spec, |lam| g.eval_closed(lam))
        }
        Strategy::Factorized => {
            let p = g.expand();
            let mut cache: Vec<(Piece, QuadResult<V>)> = Vec::new();
            let mut total = zero();
            let mut err = 0.0;
            let mut evals = 0;
            let mut converged = true;
            for m in &p.terms {
                let pieces = split(m, omega)?;
                let mut vals: Vec<(V, f64)> = Vec::with_capacity(pieces.len());
                for piece in pieces {
                    let hit = cache.iter().position(|(k, _)| *k == piece);
                    let at = match hit {
                        Some(i) => i,
                        None => {
                            let single = piece.vars.len() == 1;
                            let contours: Vec<Contour> = piece
                                .vars
                                .iter()
                                .map(|j| {
                                    let mut poles = spec_im[j].clone();
                                    if single {
                                        poles.extend(piece.factors.iter().map(|f| f.shift.im / f.weights[j]));
                                    }
                                    // rotate only exponential factors, and only when no
                                    // coupled resolvent can move a pole onto the contour
                                    let angle = if single && piece.rates[j] != 0.0 { spec.tail_angle } else { 0.0 };
                                    Contour::around(poles, angle)
                                })
                                .collect();
                            let r = plane_integral(ops, piece.vars, &contours, spec, |lam| piece.eval(lam))?;
                            evals += r.n_evals;
                            cache.push((piece, r));
                            cache.len() - 1
                        }
                    };
                    let r = &cache[at].1;
                    converged &= r.converged;
                    vals.push((r.value.clone(), r.err_est));
                }
                let mut prod = vals[0].0.clone();
                for (v, _) in &vals[1..] {
                    prod = prod.product(v);
                }
                // first-order propagation of the group errors
                for (i, (_, e)) in vals.iter().enumerate() {
                    let others: f64 = vals.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, (v, e2))| v.size() + e2).product();
                    err += m.coef.norm() * e * others;
                }
                prod.scale_c(m.coef);
                total.axpy(1.0, &prod);
            }
            Ok(QuadResult { value: total, err_est: err, truncation_est: 0.0, n_evals: evals, converged })
        }
    }
}

/// Kernel integral of a callable, always by the direct strategy without
/// contour rotation.
pub fn kernel_integral_fn<V, G>(ops: &[V], omega: VarSet, spec: &QuadSpec, g: G) -> Result<QuadResult<V>, CalcError>
where
    V: KernelOperand,
    G: FnMut(&[C64]) -> C64,
{
    let contours: Vec<Contour> = omega.iter().map(|j| Contour::around(ops[j].spectrum_im(), 0.0)).collect();
    plane_integral(ops, omega, &contours, spec, g)
}
