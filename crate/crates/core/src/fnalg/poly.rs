//! Expanded sum-of-monomials form.
//!
//! A monomial is `coef · exp(-rates·z) · Π_k (shift_k + w_k·z)^(-power_k)`
//! with distinct resolvent bases; like monomials are combined.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_complex::Complex64 as C64;

use super::expr::{ExpAtom, FnExpr, Node, ResLin};
use crate::varset::VarSet;

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coef: C64,
    pub rates: Vec<f64>,
    pub factors: Vec<ResLin>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub dim: usize,
    pub terms: Vec<Monomial>,
}

fn cmp_f64s(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn cmp_base(a: &ResLin, b: &ResLin) -> Ordering {
    cmp_f64s(&a.weights, &b.weights)
        .then(a.shift.re.total_cmp(&b.shift.re))
        .then(a.shift.im.total_cmp(&b.shift.im))
}

fn cmp_shape(a: &Monomial, b: &Monomial) -> Ordering {
    let mut o = cmp_f64s(&a.rates, &b.rates).then(a.factors.len().cmp(&b.factors.len()));
    for (x, y) in a.factors.iter().zip(&b.factors) {
        o = o.then(cmp_base(x, y)).then(x.power.total_cmp(&y.power));
    }
    o
}

impl Monomial {
    pub fn constant(dim: usize, k: C64) -> Self {
        Monomial { coef: k, rates: vec![0.0; dim], factors: Vec::new() }
    }

    pub fn support(&self) -> VarSet {
        let mut s = self
            .rates
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .fold(VarSet::EMPTY, |s, (j, _)| s.with(j));
        for f in &self.factors {
            s = s.union(f.support());
        }
        s
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let rates = self.rates.iter().zip(&o.rates).map(|(a, b)| a + b).collect();
        let mut factors = self.factors.clone();
        for f in &o.factors {
            match factors.binary_search_by(|x| cmp_base(x, f)) {
                Ok(i) => factors[i].power += f.power,
                Err(i) => factors.insert(i, f.clone()),
            }
        }
        Monomial { coef: self.coef * o.coef, rates, factors }
    }

    #[inline]
    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut v = self.coef;
        if self.rates.iter().any(|a| *a != 0.0) {
            v *= ExpAtom { rates: self.rates.clone() }.eval(z);
        }
        for f in &self.factors {
            v *= f.eval(z);
        }
        v
    }

    pub fn partial(&self, j: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        if self.rates[j] != 0.0 {
            let mut m = self.clone();
            m.coef *= -self.rates[j];
            out.push(m);
        }
        for (k, f) in self.factors.iter().enumerate() {
            let w = f.weights[j];
            if w != 0.0 {
                let mut m = self.clone();
                m.coef *= -f.power * w;
                m.factors[k].power += 1.0;
                out.push(m);
            }
        }
        out
    }

    pub fn to_node(&self) -> Node {
        let mut items = vec![Node::Const(self.coef)];
        if self.rates.iter().any(|a| *a != 0.0) {
            items.push(Node::Exp(ExpAtom { rates: self.rates.clone() }));
        }
        items.extend(self.factors.iter().cloned().map(Node::Res));
        Node::prod(items)
    }
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: Vec::new() }
    }

    pub fn from_terms(dim: usize, mut terms: Vec<Monomial>) -> Self {
        terms.sort_by(cmp_shape);
        let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if cmp_shape(last, &t) == Ordering::Equal => last.coef += t.coef,
                _ => out.push(t),
            }
        }
        out.retain(|m| m.coef != C64::new(0.0, 0.0));
        Poly { dim, terms: out }
    }

    pub fn from_node(dim: usize, node: &Node) -> Self {
        match node {
            Node::Const(k) => Poly::from_terms(dim, vec![Monomial::constant(dim, *k)]),
            Node::Res(r) => {
                let mut m = Monomial::constant(dim, C64::new(1.0, 0.0));
                m.factors.push(r.clone());
                Poly::from_terms(dim, vec![m])
            }
            Node::Exp(e) => {
                let mut m = Monomial::constant(dim, C64::new(1.0, 0.0));
                m.rates = e.rates.clone();
                Poly::from_terms(dim, vec![m])
            }
            Node::Sum(v) => {
                let terms = v.iter().flat_map(|x| Poly::from_node(dim, x).terms).collect();
                Poly::from_terms(dim, terms)
            }
            Node::Prod(v) => {
                let mut acc = vec![Monomial::constant(dim, C64::new(1.0, 0.0))];
                for x in v {
                    let p = Poly::from_node(dim, x);
                    let mut next = Vec::with_capacity(acc.len() * p.terms.len());
                    for a in &acc {
                        for b in &p.terms {
                            next.push(a.mul(b));
                        }
                    }
                    acc = Poly::from_terms(dim, next).terms;
                }
                Poly::from_terms(dim, acc)
            }
        }
    }

    pub fn partial(&self, j: usize) -> Poly {
        Poly::from_terms(self.dim, self.terms.iter().flat_map(|m| m.partial(j)).collect())
    }

    pub fn partial_set(&self, omega: VarSet) -> Poly {
        omega.iter().fold(self.clone(), |p, j| p.partial(j))
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms.iter().fold(C64::new(0.0, 0.0), |s, m| s + m.eval(z))
    }

    pub fn to_expr(&self) -> FnExpr {
        let node = Node::sum(self.terms.iter().map(|m| m.to_node()).collect());
        FnExpr::from_node(self.dim, node).expect("dimensions preserved")
    }
}

impl FnExpr {
    /// Expanded canonical form.
    pub fn expand(&self) -> Poly {
        Poly::from_node(self.dim(), self.node())
    }

    /// Rebuilds the expression from its expanded form.
    pub fn canonical(&self) -> FnExpr {
        self.expand().to_expr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_merges_like_terms() {
        let r = FnExpr::resolvent(1, 0, C64::new(1.0, 0.0)).unwrap();
        let one = FnExpr::constant(1, C64::new(1.0, 0.0));
        let sq = one.add(&r).unwrap().mul(&one.add(&r).unwrap()).unwrap();
        let p = sq.expand();
        // 1 + 2r + r^2
        assert_eq!(p.terms.len(), 3);
        let z = [C64::new(0.4, 1.3)];
        assert!((p.eval(&z) - sq.eval(&z).unwrap()).norm() < 1e-14);
        let diff = sq.sub(&sq).unwrap().expand();
        assert!(diff.terms.is_empty());
    }

    #[test]
    fn partial_agrees_with_tree_derivative() {
        let f = FnExpr::res(alloc::vec![1.0, 2.0], C64::new(1.0, 0.5), 1.5)
            .unwrap()
            .mul(&FnExpr::exp(alloc::vec![0.5, 1.0]).unwrap())
            .unwrap();
        let z = [C64::new(0.3, -0.2), C64::new(1.1, 0.9)];
        let a = f.partial(1).eval(&z).unwrap();
        let b = f.expand().partial(1).eval(&z);
        assert!((a - b).norm() < 1e-13);
    }
}
