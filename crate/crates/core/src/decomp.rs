//! Limits at infinity, restrictions, and the elementary decomposition
//! `f = Σ_Ω f_{Ω,0}`.

use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::FnError;
use crate::fnalg::{pow_neg, FnExpr, Node, ResLin};
use crate::varset::VarSet;
use crate::C64;

/// Seed for the sample points used to decide that a part vanishes.
pub const ZERO_TEST_SEED: u64 = 0x5eed_0b0e;
/// A part is dropped when it is at most this large at every sample point.
pub const ZERO_TOL: f64 = 1e-12;
const ZERO_SAMPLES: usize = 50;

/// `f_Ω = lim f` as `Re z_j → ∞` for `j ∉ Ω`, kept as a function of all `n`
/// variables (its support lies in `Ω`).
pub fn limit_at_infinity(f: &FnExpr, omega: VarSet) -> FnExpr {
    f.limit_outside(omega)
}

/// Pseudo-random points of `C_+^n` from a fixed seed: real parts in
/// `(0.05, 5)`, imaginary parts in `(-5, 5)`.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| C64::new(rng.gen_range(0.05..5.0), rng.gen_range(-5.0..5.0))).collect())
        .collect()
}

/// Sampled test for the zero function.
pub fn vanishes(f: &FnExpr) -> bool {
    if f.is_zero() {
        return true;
    }
    sample_points(f.dim(), ZERO_SAMPLES, ZERO_TEST_SEED)
        .iter()
        .all(|z| f.eval_closed(z).norm() <= ZERO_TOL)
}

/// A value for a frozen variable: a point of `C_+` or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Anchor {
    At(C64),
    Infinity,
}

/// `z_Ω ↦ (D_Ψ f)(z)` with `z_j = ζ_j` for `j ∉ Ω`.
///
/// `zeta[j]` is read for `j ∉ Ω` only. The result keeps all `n` variables
/// but has support inside `Ω`.
pub fn restrict(f: &FnExpr, omega: VarSet, zeta: &[Anchor], psi: VarSet) -> Result<FnExpr, FnError> {
    let n = f.dim();
    if zeta.len() != n {
        return Err(FnError::DimensionMismatch { expected: n, got: zeta.len() });
    }
    let outside = omega.complement(n);
    if !psi.is_subset(outside) {
        return Err(FnError::InvalidAtom("derivative set must avoid the kept variables".into()));
    }
    for j in outside.iter() {
        if let Anchor::At(z) = zeta[j] {
            if !(z.re > 0.0) || !z.im.is_finite() {
                return Err(FnError::DomainViolation { index: j, re: z.re });
            }
        }
    }
    let g = f.partial_set(psi);
    let at_inf = outside.iter().filter(|&j| zeta[j] == Anchor::Infinity).fold(VarSet::EMPTY, |s, j| s.with(j));
    let g = g.limit_outside(at_inf.complement(n));
    let node = g.node().clone();
    let node = substitute(&node, outside.difference(at_inf), zeta)?;
    FnExpr::from_node(n, node)
}

fn substitute(node: &Node, vars: VarSet, zeta: &[Anchor]) -> Result<Node, FnError> {
    let value = |j: usize| match zeta[j] {
        Anchor::At(z) => z,
        Anchor::Infinity => unreachable!("limits taken first"),
    };
    Ok(match node {
        Node::Res(r) if !r.support().intersection(vars).is_empty() => {
            let mut w = r.weights.clone();
            let mut shift = r.shift;
            for j in vars.iter() {
                shift += value(j) * w[j];
                w[j] = 0.0;
            }
            if w.iter().all(|x| *x == 0.0) {
                Node::Const(pow_neg(shift, r.power))
            } else {
                Node::Res(ResLin::new(w, shift, r.power)?)
            }
        }
        Node::Exp(e) if !e.support().intersection(vars).is_empty() => {
            let mut rates = e.rates.clone();
            let mut s = C64::new(0.0, 0.0);
            for j in vars.iter() {
                s += value(j) * rates[j];
                rates[j] = 0.0;
            }
            let k = Node::Const((-s).exp());
            if rates.iter().all(|x| *x == 0.0) {
                k
            } else {
                Node::prod(vec![k, Node::Exp(crate::fnalg::ExpAtom::new(rates)?)])
            }
        }
        Node::Sum(v) => Node::sum(v.iter().map(|x| substitute(x, vars, zeta)).collect::<Result<_, _>>()?),
        Node::Prod(v) => Node::prod(v.iter().map(|x| substitute(x, vars, zeta)).collect::<Result<_, _>>()?),
        other => other.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryDecomposition {
    pub dim: usize,
    /// Nonzero parts `(Ω, f_{Ω,0})` in increasing bitmask order.
    pub parts: Vec<(VarSet, FnExpr)>,
}

impl ElementaryDecomposition {
    pub fn part(&self, omega: VarSet) -> Option<&FnExpr> {
        self.parts.iter().find(|(o, _)| *o == omega).map(|(_, f)| f)
    }

    /// `Σ_Ω f_{Ω,0}(z)`.
    pub fn eval(&self, z: &[C64]) -> C64 {
        self.parts.iter().fold(C64::new(0.0, 0.0), |s, (_, f)| s + f.eval_closed(z))
    }

    /// The value at infinity, `f_∅`.
    pub fn constant(&self) -> C64 {
        self.part(VarSet::EMPTY).map(|f| f.eval_closed(&vec![C64::new(1.0, 0.0); self.dim])).unwrap_or_default()
    }
}

/// `f_{Ω,0} = Σ_{Ψ⊆Ω} (-1)^{|Ω|-|Ψ|} f_Ψ` for every `Ω ⊆ support(f)`.
pub fn elementary_decompose(f: &FnExpr) -> ElementaryDecomposition {
    let n = f.dim();
    let supp = f.support();
    let mut parts = Vec::new();
    for omega in supp.subsets() {
        let mut acc = FnExpr::constant(n, C64::new(0.0, 0.0));
        for psi in omega.subsets() {
            let lim = limit_at_infinity(f, psi);
            acc = if (omega.len() - psi.len()) % 2 == 0 { acc.add(&lim) } else { acc.sub(&lim) }.expect("same dimension");
        }
        let part = acc.canonical();
        if !vanishes(&part) {
            parts.push((omega, part));
        }
    }
    ElementaryDecomposition { dim: n, parts }
}

/// The same decomposition read off the expanded form: `f_{Ω,0}` collects the
/// monomials whose support is exactly `Ω`.
pub fn decompose_by_monomials(f: &FnExpr) -> ElementaryDecomposition {
    let n = f.dim();
    let p = f.expand();
    let mut parts: Vec<(VarSet, FnExpr)> = Vec::new();
    for omega in f.support().subsets() {
        let terms: Vec<_> = p.terms.iter().filter(|m| m.support() == omega).cloned().collect();
        if terms.is_empty() {
            continue;
        }
        let part = crate::fnalg::Poly::from_terms(n, terms).to_expr();
        if !vanishes(&part) {
            parts.push((omega, part));
        }
    }
    ElementaryDecomposition { dim: n, parts }
}

/// `|support(f)|`.
pub fn degree(f: &FnExpr) -> usize {
    f.support().len()
}

/// True when the only nonzero part sits at `Ω = support(f)`.
pub fn is_elementary(f: &FnExpr) -> bool {
    let d = elementary_decompose(f);
    let s = f.support();
    d.parts.iter().all(|(o, _)| *o == s)
}
