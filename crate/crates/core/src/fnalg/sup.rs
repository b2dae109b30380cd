//! Supremum search over imaginary parts.
//!
//! A bounded holomorphic function on a half-plane that is continuous up to
//! the boundary attains its supremum on the boundary line, so suprema over
//! `C_+` reduce to suprema over `Re z = 0` (or over `Re z = α` for the
//! variables held at a fixed real part).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use super::expr::{FnExpr, Node};
use crate::varset::VarSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupOptions {
    /// Grid points per decade of `|β|`.
    pub per_decade: usize,
    /// Decade range `10^lo ..= 10^hi` of `|β|`.
    pub lo: i32,
    pub hi: i32,
    /// Local refinement rounds, each shrinking the window tenfold.
    pub zoom_rounds: usize,
    /// Grid maxima refined independently.
    pub starts: usize,
    /// Cap on tensor grid size; coarser grids are used above it.
    pub budget: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions { per_decade: 4, lo: -3, hi: 4, zoom_rounds: 3, starts: 3, budget: 40_000 }
    }
}

fn line_grid(ppd: usize, lo: i32, hi: i32) -> Vec<f64> {
    let mut pos = Vec::new();
    let k0 = lo * ppd as i32;
    let k1 = hi * ppd as i32;
    for k in k0..=k1 {
        pos.push(10f64.powf(k as f64 / ppd as f64));
    }
    let mut g: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    g.push(0.0);
    g.extend(pos);
    g
}

/// Maximizes `f` over `R^m`; returns the value and the maximizer.
pub fn sup_search<F>(m: usize, mut f: F, opts: &SupOptions) -> (f64, Vec<f64>)
where
    F: FnMut(&[f64]) -> f64,
{
    if m == 0 {
        return (f(&[]), Vec::new());
    }
    let mut ppd = opts.per_decade.max(1);
    let mut grid = line_grid(ppd, opts.lo, opts.hi);
    while ppd > 1 && grid.len().pow(m as u32) > opts.budget {
        ppd -= 1;
        grid = line_grid(ppd, opts.lo, opts.hi);
    }
    let ratio = 10f64.powf(1.0 / ppd as f64) - 1.0;
    let floor = 10f64.powi(opts.lo);

    let mut best: Vec<(f64, Vec<f64>)> = Vec::new();
    let keep = opts.starts.max(1);
    let consider = |v: f64, p: &[f64], best: &mut Vec<(f64, Vec<f64>)>| {
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if best.len() < keep || v > best[best.len() - 1].0 {
            let at = best.iter().position(|b| v > b.0).unwrap_or(best.len());
            best.insert(at, (v, p.to_vec()));
            best.truncate(keep);
        }
    };

    if grid.len().pow(m as u32) <= opts.budget.max(grid.len()) || m == 1 {
        let mut idx = vec![0usize; m];
        let mut p = vec![0.0; m];
        loop {
            for k in 0..m {
                p[k] = grid[idx[k]];
            }
            let v = f(&p);
            consider(v, &p, &mut best);
            let mut k = 0;
            while k < m {
                idx[k] += 1;
                if idx[k] < grid.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
    } else {
        // too many dimensions for a full tensor grid: diagonal and axis lines
        let mut p = vec![0.0; m];
        for &g in &grid {
            for x in p.iter_mut() {
                *x = g;
            }
            let v = f(&p);
            consider(v, &p, &mut best);
            for k in 0..m {
                let mut q = vec![0.0; m];
                q[k] = g;
                let v = f(&q);
                consider(v, &q, &mut best);
            }
        }
    }

    let mut overall = best[0].clone();
    for (v0, p0) in best {
        let mut cur = (v0, p0);
        let mut h: Vec<f64> = cur.1.iter().map(|x| (x.abs() * ratio).max(floor)).collect();
        for _ in 0..opts.zoom_rounds {
            let k = 5i32;
            if m <= 2 {
                let center = cur.1.clone();
                let mut q = center.clone();
                let mut idx = vec![-k; m];
                loop {
                    for d in 0..m {
                        q[d] = center[d] + h[d] * idx[d] as f64 / k as f64;
                    }
                    let v = f(&q);
                    if v > cur.0 || v.is_nan() {
                        cur = (if v.is_nan() { f64::INFINITY } else { v }, q.clone());
                    }
                    let mut d = 0;
                    while d < m {
                        idx[d] += 1;
                        if idx[d] <= k {
                            break;
                        }
                        idx[d] = -k;
                        d += 1;
                    }
                    if d == m {
                        break;
                    }
                }
            } else {
                for d in 0..m {
                    let center = cur.1.clone();
                    let mut q = center.clone();
                    for i in -k..=k {
                        q[d] = center[d] + h[d] * i as f64 / k as f64;
                        let v = f(&q);
                        if v > cur.0 {
                            cur = (v, q.clone());
                        }
                    }
                }
            }
            for x in h.iter_mut() {
                *x /= 10.0;
            }
        }
        for _ in 0..2 {
            for d in 0..m {
                let (v, x) = golden_max(|t| {
                    let mut q = cur.1.clone();
                    q[d] = t;
                    f(&q)
                }, cur.1[d] - h[d] * 10.0, cur.1[d] + h[d] * 10.0);
                if v > cur.0 {
                    cur.0 = v;
                    cur.1[d] = x;
                }
            }
        }
        if cur.0 > overall.0 {
            overall = cur;
        }
    }
    overall
}

fn golden_max<G: FnMut(f64) -> f64>(mut g: G, mut a: f64, mut b: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - R * (b - a);
    let mut x2 = a + R * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + R * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - R * (b - a);
            f1 = g(x1);
        }
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs()) {
            break;
        }
    }
    if f1 > f2 { (f1, x1) } else { (f2, x2) }
}

/// Evaluates `|f|` with variables in `fixed` at real part `alpha[j]` and all
/// others on the boundary `Re z = 0`, imaginary parts taken from `beta`.
pub(crate) fn boundary_point(n: usize, fixed: VarSet, alpha: &[f64], vars: &[usize], beta: &[f64]) -> Vec<C64> {
    let mut z = vec![C64::new(0.0, 0.0); n];
    for j in fixed.iter() {
        z[j].re = alpha[j];
    }
    for (k, &j) in vars.iter().enumerate() {
        z[j].im = beta[k];
    }
    z
}

/// Exact supremum for a product with at most one resolvent atom that moves
/// with the searched imaginary parts: its imaginary part can be cancelled,
/// leaving `(Re base)^{-p}`, and every other factor has constant modulus.
fn product_sup(node: &Node, z0: &[C64], vars: &[usize]) -> Option<f64> {
    fn walk(node: &Node, z0: &[C64], vars: &[usize], moving: &mut usize) -> Option<f64> {
        match node {
            Node::Const(k) => Some(k.norm()),
            Node::Exp(e) => Some(e.eval(z0).norm()),
            Node::Res(r) => {
                if vars.iter().all(|&j| r.weights[j] == 0.0) {
                    return Some(r.eval(z0).norm());
                }
                *moving += 1;
                let re = r.base(z0).re;
                if *moving > 1 || !(re > 0.0) {
                    return None;
                }
                Some(re.powf(-r.power))
            }
            Node::Prod(v) => v.iter().try_fold(1.0, |acc, x| walk(x, z0, vars, moving).map(|y| acc * y)),
            Node::Sum(v) if v.len() == 1 => walk(&v[0], z0, vars, moving),
            Node::Sum(_) => None,
        }
    }
    let mut moving = 0;
    walk(node, z0, vars, &mut moving)
}

/// Common direction of all atom weight vectors restricted to `vars`, if the
/// function depends on the searched imaginary parts only through one linear form.
fn single_direction(node: &Node, vars: &[usize]) -> Option<Vec<f64>> {
    fn walk(node: &Node, vars: &[usize], dir: &mut Option<Vec<f64>>, ok: &mut bool) {
        let w: Vec<f64> = match node {
            Node::Const(_) => return,
            Node::Res(r) => vars.iter().map(|&j| r.weights[j]).collect(),
            Node::Exp(e) => vars.iter().map(|&j| e.rates[j]).collect(),
            Node::Sum(v) | Node::Prod(v) => {
                for x in v {
                    walk(x, vars, dir, ok);
                }
                return;
            }
        };
        if w.iter().all(|x| *x == 0.0) {
            return;
        }
        match dir {
            None => *dir = Some(w),
            Some(d) => {
                // parallel test via the 2x2 minors
                let scale = d.iter().chain(&w).fold(0.0f64, |m, x| m.max(x.abs()));
                for a in 0..w.len() {
                    for b in a + 1..w.len() {
                        if (d[a] * w[b] - d[b] * w[a]).abs() > 1e-14 * scale * scale {
                            *ok = false;
                        }
                    }
                }
            }
        }
    }
    let mut dir = None;
    let mut ok = true;
    walk(node, vars, &mut dir, &mut ok);
    if ok {
        dir
    } else {
        None
    }
}

/// `sup_{β} |f(z)|` with `Re z_j = alpha[j]` for `j ∈ fixed` and `Re z_j = 0`
/// otherwise; only variables in the support of `f` are searched.
pub fn sup_on_lines(f: &FnExpr, fixed: VarSet, alpha: &[f64], opts: &SupOptions) -> f64 {
    let n = f.dim();
    let vars = f.support().indices();
    let z0 = boundary_point(n, fixed, alpha, &vars, &vec![0.0; vars.len()]);
    if let Some(v) = product_sup(f.node(), &z0, &vars) {
        return v;
    }
    if vars.len() > 1 {
        if let Some(d) = single_direction(f.node(), &vars) {
            let nn: f64 = d.iter().map(|x| x * x).sum();
            let mut beta = vec![0.0; vars.len()];
            let (v, _) = sup_search(
                1,
                |t| {
                    for (b, w) in beta.iter_mut().zip(&d) {
                        *b = t[0] * w / nn;
                    }
                    f.eval_closed(&boundary_point(n, fixed, alpha, &vars, &beta)).norm()
                },
                opts,
            );
            return v;
        }
    }
    let (v, _) = sup_search(
        vars.len(),
        |b| f.eval_closed(&boundary_point(n, fixed, alpha, &vars, b)).norm(),
        opts,
    );
    v
}

/// `‖f‖_∞` over the open poly-half-plane.
pub fn sup_norm(f: &FnExpr) -> f64 {
    sup_on_lines(f, VarSet::EMPTY, &vec![0.0; f.dim()], &SupOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolvent_sup_is_inverse_real_part() {
        for w in [0.5, 1.0, 2.0] {
            let f = FnExpr::resolvent(1, 0, C64::new(w, 0.7)).unwrap();
            assert!((sup_norm(&f) - 1.0 / w).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_product_matches_search() {
        let f = FnExpr::parse("3*exp([0.5,1])*res([1,2],1+2i,2.5)", Some(2)).unwrap();
        let vars = [0, 1];
        let alpha = [0.3, 0.7];
        let fixed = VarSet::singleton(1);
        let exact = sup_on_lines(&f, fixed, &alpha, &SupOptions::default());
        let (searched, _) = sup_search(2, |b| f.eval_closed(&boundary_point(2, fixed, &alpha, &vars, b)).norm(), &SupOptions::default());
        assert!((exact - searched).abs() < 1e-6 * exact, "{exact} vs {searched}");
        assert!(searched <= exact * (1.0 + 1e-12));
    }

    #[test]
    fn sup_of_constant_and_difference_of_exponentials() {
        assert!((sup_norm(&FnExpr::constant(2, C64::new(0.0, 3.0))) - 3.0).abs() < 1e-15);
        let f = FnExpr::parse("exp([1]) - exp([2])", None).unwrap();
        // |e^{-iβ} - e^{-2iβ}| peaks at 2
        assert!((sup_norm(&f) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn sup_two_variables_ridge() {
        let f = FnExpr::res(alloc::vec![1.0, 1.0], C64::new(0.5, 1.0), 1.0).unwrap();
        assert!((sup_norm(&f) - 2.0).abs() < 1e-6);
    }
}
