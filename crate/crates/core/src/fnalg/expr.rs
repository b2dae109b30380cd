use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use crate::error::FnError;
use crate::varset::{VarSet, MAX_DIM};

/// `(shift + Σ_j weights[j] z_j)^(-power)`, principal branch.
#[derive(Clone, Debug, PartialEq)]
pub struct ResLin {
    pub weights: Vec<f64>,
    pub shift: C64,
    pub power: f64,
}

/// `exp(-Σ_j rates[j] z_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpAtom {
    pub rates: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(C64),
    Res(ResLin),
    Exp(ExpAtom),
    Sum(Vec<Node>),
    Prod(Vec<Node>),
}

/// A bounded holomorphic function on the poly-half-plane `C_+^n`,
/// built from resolvent-type and exponential atoms by sums and products.
///
/// Trees are kept normalized: nested sums and products are flattened,
/// constants are folded, and exponential factors of a product are merged.
#[derive(Clone, Debug, PartialEq)]
pub struct FnExpr {
    dim: usize,
    node: Node,
}

pub fn is_integer_power(p: f64) -> Option<i32> {
    if p.fract() == 0.0 && p.abs() <= 1.0e6 {
        Some(p as i32)
    } else {
        None
    }
}

impl ResLin {
    pub fn new(weights: Vec<f64>, shift: C64, power: f64) -> Result<Self, FnError> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(FnError::InvalidAtom(format!("weights must be finite and >= 0: {weights:?}")));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(FnError::InvalidAtom("weights must not all vanish".into()));
        }
        if !(shift.re > 0.0) || !shift.im.is_finite() || !shift.re.is_finite() {
            return Err(FnError::InvalidAtom(format!("shift must have positive real part: {shift}")));
        }
        if !(power > 0.0) || !power.is_finite() {
            return Err(FnError::InvalidAtom(format!("power must be positive: {power}")));
        }
        Ok(ResLin { weights, shift, power })
    }

    pub fn support(&self) -> VarSet {
        support_of(&self.weights)
    }

    #[inline]
    pub fn base(&self, z: &[C64]) -> C64 {
        let mut u = self.shift;
        for (w, zj) in self.weights.iter().zip(z) {
            if *w != 0.0 {
                u += zj * *w;
            }
        }
        u
    }

    #[inline]
    pub fn eval(&self, z: &[C64]) -> C64 {
        pow_neg(self.base(z), self.power)
    }
}

/// `u^(-p)` on the principal branch.
#[inline]
pub fn pow_neg(u: C64, p: f64) -> C64 {
    match is_integer_power(p) {
        Some(k) => u.powi(-k),
        None => (-(u.ln()) * p).exp(),
    }
}

impl ExpAtom {
    pub fn new(rates: Vec<f64>) -> Result<Self, FnError> {
        if rates.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(FnError::InvalidAtom(format!("exponential rates must be finite and >= 0: {rates:?}")));
        }
        Ok(ExpAtom { rates })
    }

    pub fn support(&self) -> VarSet {
        support_of(&self.rates)
    }

    #[inline]
    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (a, zj) in self.rates.iter().zip(z) {
            if *a != 0.0 {
                s += zj * *a;
            }
        }
        (-s).exp()
    }
}

fn support_of(w: &[f64]) -> VarSet {
    w.iter()
        .enumerate()
        .filter(|(_, x)| **x != 0.0)
        .fold(VarSet::EMPTY, |s, (j, _)| s.with(j))
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl Node {
    pub fn support(&self) -> VarSet {
        match self {
            Node::Const(_) => VarSet::EMPTY,
            Node::Res(r) => r.support(),
            Node::Exp(e) => e.support(),
            Node::Sum(v) | Node::Prod(v) => v.iter().fold(VarSet::EMPTY, |s, x| s.union(x.support())),
        }
    }

    #[inline]
    pub fn eval(&self, z: &[C64]) -> C64 {
        match self {
            Node::Const(k) => *k,
            Node::Res(r) => r.eval(z),
            Node::Exp(e) => e.eval(z),
            Node::Sum(v) => v.iter().fold(c(0.0), |s, x| s + x.eval(z)),
            Node::Prod(v) => {
                let mut p = c(1.0);
                for x in v {
                    p *= x.eval(z);
                    if p == c(0.0) {
                        break;
                    }
                }
                p
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Node::Const(k) if *k == c(0.0))
    }

    /// Normalized sum.
    pub fn sum(items: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(items.len());
        let mut k = c(0.0);
        let mut has_const = false;
        for it in items {
            match it {
                Node::Sum(inner) => {
                    for x in inner {
                        match x {
                            Node::Const(v) => {
                                k += v;
                                has_const = true;
                            }
                            other => flat.push(other),
                        }
                    }
                }
                Node::Const(v) => {
                    k += v;
                    has_const = true;
                }
                other => flat.push(other),
            }
        }
        if has_const && k != c(0.0) {
            flat.push(Node::Const(k));
        }
        match flat.len() {
            0 => Node::Const(c(0.0)),
            1 => flat.pop().unwrap(),
            _ => Node::Sum(flat),
        }
    }

    /// Normalized product; the folded constant (if not one) comes first and
    /// all exponential factors are merged into one.
    pub fn prod(items: Vec<Node>) -> Node {
        let mut flat: Vec<Node> = Vec::with_capacity(items.len());
        let mut k = c(1.0);
        let mut exp: Option<Vec<f64>> = None;
        let push = |x: Node, flat: &mut Vec<Node>, k: &mut C64, exp: &mut Option<Vec<f64>>| match x {
            Node::Const(v) => *k *= v,
            Node::Exp(e) => match exp {
                Some(r) => r.iter_mut().zip(&e.rates).for_each(|(a, b)| *a += b),
                None => *exp = Some(e.rates),
            },
            other => flat.push(other),
        };
        for it in items {
            match it {
                Node::Prod(inner) => {
                    for x in inner {
                        push(x, &mut flat, &mut k, &mut exp);
                    }
                }
                other => push(other, &mut flat, &mut k, &mut exp),
            }
        }
        if k == c(0.0) {
            return Node::Const(k);
        }
        if let Some(r) = exp {
            if r.iter().any(|a| *a != 0.0) {
                flat.push(Node::Exp(ExpAtom { rates: r }));
            }
        }
        if k != c(1.0) || flat.is_empty() {
            flat.insert(0, Node::Const(k));
        }
        match flat.len() {
            1 => flat.pop().unwrap(),
            _ => Node::Prod(flat),
        }
    }

    fn partial(&self, j: usize) -> Node {
        match self {
            Node::Const(_) => Node::Const(c(0.0)),
            Node::Res(r) => {
                let w = r.weights[j];
                if w == 0.0 {
                    return Node::Const(c(0.0));
                }
                let mut r2 = r.clone();
                r2.power += 1.0;
                Node::prod(vec![Node::Const(c(-r.power * w)), Node::Res(r2)])
            }
            Node::Exp(e) => {
                let a = e.rates[j];
                if a == 0.0 {
                    return Node::Const(c(0.0));
                }
                Node::prod(vec![Node::Const(c(-a)), Node::Exp(e.clone())])
            }
            Node::Sum(v) => Node::sum(v.iter().filter(|x| x.support().contains(j)).map(|x| x.partial(j)).collect()),
            Node::Prod(v) => {
                let mut terms = Vec::new();
                for (i, x) in v.iter().enumerate() {
                    if !x.support().contains(j) {
                        continue;
                    }
                    let dx = x.partial(j);
                    if dx.is_zero() {
                        continue;
                    }
                    let mut fac: Vec<Node> = Vec::with_capacity(v.len());
                    for (k, y) in v.iter().enumerate() {
                        fac.push(if k == i { dx.clone() } else { y.clone() });
                    }
                    terms.push(Node::prod(fac));
                }
                Node::sum(terms)
            }
        }
    }

    /// Maps every atom through `f`, rebuilding normalized sums and products.
    pub(crate) fn map_atoms<F>(&self, f: &mut F) -> Result<Node, FnError>
    where
        F: FnMut(&Node) -> Result<Node, FnError>,
    {
        Ok(match self {
            Node::Sum(v) => Node::sum(v.iter().map(|x| x.map_atoms(f)).collect::<Result<_, _>>()?),
            Node::Prod(v) => Node::prod(v.iter().map(|x| x.map_atoms(f)).collect::<Result<_, _>>()?),
            atom => f(atom)?,
        })
    }
}

impl FnExpr {
    pub fn from_node(dim: usize, node: Node) -> Result<Self, FnError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(FnError::InvalidAtom(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        check_dims(&node, dim)?;
        Ok(FnExpr { dim, node })
    }

    pub fn constant(dim: usize, k: C64) -> Self {
        FnExpr { dim, node: Node::Const(k) }
    }

    /// `(shift + w·z)^(-power)`.
    pub fn res(weights: Vec<f64>, shift: C64, power: f64) -> Result<Self, FnError> {
        let dim = weights.len();
        FnExpr::from_node(dim, Node::Res(ResLin::new(weights, shift, power)?))
    }

    /// `exp(-a·z)`.
    pub fn exp(rates: Vec<f64>) -> Result<Self, FnError> {
        let dim = rates.len();
        FnExpr::from_node(dim, Node::Exp(ExpAtom::new(rates)?))
    }

    /// `(z_j + lambda)^(-1)` in dimension `n`.
    pub fn resolvent(n: usize, j: usize, lambda: C64) -> Result<Self, FnError> {
        let mut w = vec![0.0; n];
        w[j] = 1.0;
        FnExpr::res(w, lambda, 1.0)
    }

    /// `Π_j (z_j + lambda)^(-1)`.
    pub fn rho(n: usize, lambda: C64) -> Result<Self, FnError> {
        let mut f = FnExpr::constant(n, c(1.0));
        for j in 0..n {
            f = f.mul(&FnExpr::resolvent(n, j, lambda)?)?;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    fn same_dim(&self, o: &FnExpr) -> Result<(), FnError> {
        if self.dim != o.dim {
            return Err(FnError::DimensionMismatch { expected: self.dim, got: o.dim });
        }
        Ok(())
    }

    pub fn add(&self, o: &FnExpr) -> Result<FnExpr, FnError> {
        self.same_dim(o)?;
        Ok(FnExpr { dim: self.dim, node: Node::sum(vec![self.node.clone(), o.node.clone()]) })
    }

    pub fn sub(&self, o: &FnExpr) -> Result<FnExpr, FnError> {
        self.add(&o.scale(c(-1.0)))
    }

    pub fn mul(&self, o: &FnExpr) -> Result<FnExpr, FnError> {
        self.same_dim(o)?;
        Ok(FnExpr { dim: self.dim, node: Node::prod(vec![self.node.clone(), o.node.clone()]) })
    }

    pub fn scale(&self, k: C64) -> FnExpr {
        FnExpr { dim: self.dim, node: Node::prod(vec![Node::Const(k), self.node.clone()]) }
    }

    pub fn is_zero(&self) -> bool {
        self.node.is_zero()
    }

    /// The set of variables the expression depends on syntactically.
    pub fn support(&self) -> VarSet {
        self.node.support()
    }

    /// Evaluates at a point of the open poly-half-plane.
    pub fn eval(&self, z: &[C64]) -> Result<C64, FnError> {
        if z.len() != self.dim {
            return Err(FnError::DimensionMismatch { expected: self.dim, got: z.len() });
        }
        if let Some((index, zj)) = z.iter().enumerate().find(|(_, zj)| !(zj.re > 0.0)) {
            return Err(FnError::DomainViolation { index, re: zj.re });
        }
        Ok(self.node.eval(z))
    }

    /// Evaluates the continuous extension to the closed poly-half-plane.
    ///
    /// Every atom is continuous up to `Re z = 0`, so this is well defined
    /// for `Re z_j >= 0`; the caller is responsible for the domain.
    #[inline]
    pub fn eval_closed(&self, z: &[C64]) -> C64 {
        self.node.eval(z)
    }

    /// `∂/∂z_j`.
    pub fn partial(&self, j: usize) -> FnExpr {
        assert!(j < self.dim, "variable index out of range");
        FnExpr { dim: self.dim, node: self.node.partial(j) }
    }

    /// `D_Ω = Π_{j∈Ω} ∂/∂z_j`.
    pub fn partial_set(&self, omega: VarSet) -> FnExpr {
        omega.iter().fold(self.clone(), |f, j| f.partial(j))
    }

    /// `z ↦ f(z + t)` for a real shift `t >= 0` in every coordinate.
    pub fn shift(&self, t: &[f64]) -> Result<FnExpr, FnError> {
        if t.len() != self.dim {
            return Err(FnError::DimensionMismatch { expected: self.dim, got: t.len() });
        }
        if t.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(FnError::InvalidAtom("shift must be finite and >= 0".into()));
        }
        self.translate(t.iter().map(|x| c(*x)).collect::<Vec<_>>().as_slice(), true)
    }

    /// `z ↦ f(z - ω·1)`; fails if some resolvent atom leaves the admissible family.
    pub fn shift_left(&self, omega: f64) -> Result<FnExpr, FnError> {
        let t = vec![c(-omega); self.dim];
        self.translate(&t, false)
    }

    fn translate(&self, t: &[C64], _forward: bool) -> Result<FnExpr, FnError> {
        let node = self.node.map_atoms(&mut |a| match a {
            Node::Res(r) => {
                let mut r2 = r.clone();
                r2.shift = r.base(t);
                ResLin::new(r2.weights, r2.shift, r2.power).map(Node::Res)
            }
            Node::Exp(e) => {
                let k = e.eval(t);
                Ok(Node::prod(vec![Node::Const(k), Node::Exp(e.clone())]))
            }
            other => Ok(other.clone()),
        })?;
        Ok(FnExpr { dim: self.dim, node })
    }

    /// Limit as `Re z_j → ∞` for every `j` outside `keep`.
    pub fn limit_outside(&self, keep: VarSet) -> FnExpr {
        let node = self
            .node
            .map_atoms(&mut |a| {
                Ok(match a {
                    Node::Res(r) if !r.support().is_subset(keep) => Node::Const(c(0.0)),
                    Node::Exp(e) if !e.support().is_subset(keep) => Node::Const(c(0.0)),
                    other => other.clone(),
                })
            })
            .expect("limit never fails");
        FnExpr { dim: self.dim, node }
    }

    /// Re-indexes a function whose support lies in `vars` as a function of
    /// `|vars|` variables, preserving the order of indices.
    pub fn select_vars(&self, vars: VarSet) -> Result<FnExpr, FnError> {
        if !self.support().is_subset(vars) {
            return Err(FnError::InvalidAtom(format!("support {:?} not inside {:?}", self.support(), vars)));
        }
        let idx = vars.indices();
        let m = idx.len();
        if m == 0 {
            return Err(FnError::InvalidAtom("cannot re-index to zero variables".into()));
        }
        let pick = |w: &[f64]| idx.iter().map(|&j| w[j]).collect::<Vec<_>>();
        let node = self.node.map_atoms(&mut |a| {
            Ok(match a {
                Node::Res(r) => Node::Res(ResLin { weights: pick(&r.weights), ..r.clone() }),
                Node::Exp(e) => Node::Exp(ExpAtom { rates: pick(&e.rates) }),
                other => other.clone(),
            })
        })?;
        FnExpr::from_node(m, node)
    }

    /// Embeds a function of `self.dim()` variables into dimension `n`,
    /// variable `k` going to index `target[k]`.
    pub fn embed(&self, n: usize, target: &[usize]) -> Result<FnExpr, FnError> {
        if target.len() != self.dim || target.iter().any(|&t| t >= n) {
            return Err(FnError::DimensionMismatch { expected: self.dim, got: target.len() });
        }
        let spread = |w: &[f64]| {
            let mut out = vec![0.0; n];
            for (k, &t) in target.iter().enumerate() {
                out[t] += w[k];
            }
            out
        };
        let node = self.node.map_atoms(&mut |a| {
            Ok(match a {
                Node::Res(r) => Node::Res(ResLin { weights: spread(&r.weights), ..r.clone() }),
                Node::Exp(e) => Node::Exp(ExpAtom { rates: spread(&e.rates) }),
                other => other.clone(),
            })
        })?;
        FnExpr::from_node(n, node)
    }

    /// Variable merging: `(Υf)(ξ) = f(z)` with `z_j = ξ_{π(j)}`.
    pub fn merge(&self, pi: &[usize], m: usize) -> Result<FnExpr, FnError> {
        if pi.len() != self.dim {
            return Err(FnError::DimensionMismatch { expected: self.dim, got: pi.len() });
        }
        let mut seen = vec![false; m];
        for &k in pi {
            if k >= m {
                return Err(FnError::InvalidAtom(format!("merge target {k} out of range {m}")));
            }
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(FnError::InvalidAtom("merge map must be surjective".into()));
        }
        self.embed(m, pi)
    }

    /// `z ↦ f(z_1 + .. + z_n)` for a function of one variable.
    pub fn sum_of_vars(&self, n: usize) -> Result<FnExpr, FnError> {
        if self.dim != 1 {
            return Err(FnError::DimensionMismatch { expected: 1, got: self.dim });
        }
        let node = self.node.map_atoms(&mut |a| {
            Ok(match a {
                Node::Res(r) => Node::Res(ResLin { weights: vec![r.weights[0]; n], ..r.clone() }),
                Node::Exp(e) => Node::Exp(ExpAtom { rates: vec![e.rates[0]; n] }),
                other => other.clone(),
            })
        })?;
        FnExpr::from_node(n, node)
    }

    /// Splits a product into factors with pairwise disjoint supports.
    ///
    /// Returns the constant factor and the groups; the product of the groups
    /// times the constant equals `self`.
    pub fn separate(&self) -> (C64, Vec<(VarSet, FnExpr)>) {
        let items: Vec<Node> = match &self.node {
            Node::Prod(v) => v.clone(),
            Node::Const(k) => return (*k, Vec::new()),
            other => vec![other.clone()],
        };
        let mut k = c(1.0);
        let mut groups: Vec<(VarSet, Vec<Node>)> = Vec::new();
        for it in items {
            if let Node::Const(v) = it {
                k *= v;
                continue;
            }
            // exponentials factor over single variables
            let parts: Vec<Node> = match &it {
                Node::Exp(e) => e
                    .support()
                    .iter()
                    .map(|j| {
                        let mut r = vec![0.0; self.dim];
                        r[j] = e.rates[j];
                        Node::Exp(ExpAtom { rates: r })
                    })
                    .collect(),
                _ => vec![it],
            };
            for p in parts {
                let s = p.support();
                let mut merged = (s, vec![p]);
                let mut rest = Vec::new();
                for g in groups.drain(..) {
                    if g.0.intersection(merged.0).is_empty() {
                        rest.push(g);
                    } else {
                        merged.0 = merged.0.union(g.0);
                        let mut nodes = g.1;
                        nodes.extend(merged.1);
                        merged.1 = nodes;
                    }
                }
                rest.push(merged);
                groups = rest;
            }
        }
        groups.sort_by_key(|g| g.0);
        let out = groups
            .into_iter()
            .map(|(s, nodes)| (s, FnExpr { dim: self.dim, node: Node::prod(nodes) }))
            .collect();
        (k, out)
    }
}

fn check_dims(node: &Node, dim: usize) -> Result<(), FnError> {
    match node {
        Node::Const(_) => Ok(()),
        Node::Res(r) if r.weights.len() == dim => Ok(()),
        Node::Exp(e) if e.rates.len() == dim => Ok(()),
        Node::Res(r) => Err(FnError::DimensionMismatch { expected: dim, got: r.weights.len() }),
        Node::Exp(e) => Err(FnError::DimensionMismatch { expected: dim, got: e.rates.len() }),
        Node::Sum(v) | Node::Prod(v) => v.iter().try_for_each(|x| check_dims(x, dim)),
    }
}

impl From<FnExpr> for Box<Node> {
    fn from(f: FnExpr) -> Self {
        Box::new(f.node)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[(f64, f64)]) -> Vec<C64> {
        v.iter().map(|(a, b)| C64::new(*a, *b)).collect()
    }

    #[test]
    fn resolvent_values() {
        let r = FnExpr::resolvent(1, 0, c(1.0)).unwrap();
        let v = r.eval(&z(&[(1.0, 0.0)])).unwrap();
        assert!((v - c(0.5)).norm() < 1e-15);
        assert!(matches!(r.eval(&z(&[(0.0, 1.0)])), Err(FnError::DomainViolation { .. })));
        assert!((r.eval_closed(&z(&[(0.0, 0.0)])) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_rho() {
        let f = FnExpr::rho(2, c(1.0)).unwrap();
        let d = f.partial_set(VarSet::full(2));
        // D_12 (z1+1)^-1 (z2+1)^-1 = (z1+1)^-2 (z2+1)^-2
        let p = z(&[(0.3, 0.7), (1.2, -0.4)]);
        let want = (p[0] + 1.0).powi(-2) * (p[1] + 1.0).powi(-2);
        assert!((d.eval(&p).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn fractional_power_principal_branch() {
        let f = FnExpr::res(vec![1.0], c(1.0), 0.5).unwrap();
        let p = z(&[(0.0, 3.0)]);
        let want = (C64::new(1.0, 3.0)).sqrt().inv();
        assert!((f.eval_closed(&p) - want).norm() < 1e-14);
    }

    #[test]
    fn invalid_atoms_rejected() {
        assert!(FnExpr::res(vec![0.0, 0.0], c(1.0), 1.0).is_err());
        assert!(FnExpr::res(vec![1.0], c(0.0), 1.0).is_err());
        assert!(FnExpr::res(vec![-1.0], c(1.0), 1.0).is_err());
        assert!(FnExpr::exp(vec![-0.5]).is_err());
    }

    #[test]
    fn products_merge_exponentials_and_constants() {
        let a = FnExpr::exp(vec![1.0, 0.0]).unwrap();
        let b = FnExpr::exp(vec![0.0, 2.0]).unwrap();
        let p = a.mul(&b).unwrap().scale(c(2.0)).scale(c(0.5));
        assert_eq!(p.node(), &Node::Exp(ExpAtom { rates: vec![1.0, 2.0] }));
    }

    #[test]
    fn separation_of_rho() {
        let f = FnExpr::rho(3, c(2.0)).unwrap().scale(c(3.0));
        let (k, groups) = f.separate();
        assert_eq!(k, c(3.0));
        assert_eq!(groups.len(), 3);
        let nonsep = FnExpr::res(vec![1.0, 1.0], c(1.0), 1.0).unwrap();
        assert_eq!(nonsep.separate().1.len(), 1);
    }

    #[test]
    fn shift_and_merge() {
        let f = FnExpr::res(vec![1.0, 2.0], c(1.0), 1.0).unwrap().mul(&FnExpr::exp(vec![1.0, 0.0]).unwrap()).unwrap();
        let p = z(&[(0.5, 1.0), (0.25, -2.0)]);
        let g = f.shift(&[0.5, 0.75]).unwrap();
        let q = z(&[(1.0, 1.0), (1.0, -2.0)]);
        assert!((g.eval(&p).unwrap() - f.eval(&q).unwrap()).norm() < 1e-14);
        let m = f.merge(&[0, 0], 1).unwrap();
        let x = z(&[(0.3, 0.2)]);
        assert!((m.eval(&x).unwrap() - f.eval(&[x[0], x[0]]).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn limit_drops_atoms_touching_removed_variables() {
        let f = FnExpr::constant(2, c(1.0))
            .add(&FnExpr::resolvent(2, 0, c(1.0)).unwrap())
            .unwrap()
            .add(&FnExpr::res(vec![1.0, 1.0], c(1.0), 1.0).unwrap())
            .unwrap();
        let l = f.limit_outside(VarSet::singleton(0));
        let p = z(&[(0.5, 0.0), (7.0, 0.0)]);
        assert!((l.eval(&p).unwrap() - c(1.0 + 1.0 / 1.5)).norm() < 1e-14);
    }
}
