//! Embedded cubature rules on `[-1, 1]^d`.

use alloc::vec;
use alloc::vec::Vec;

use super::QuadValue;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15 Kronrod nodes with Kronrod and embedded Gauss weights (zero off the Gauss nodes).
pub(crate) fn gk15() -> ([f64; 15], [f64; 15], [f64; 15]) {
    let mut x = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for i in 0..7 {
        x[i] = -XGK[i];
        x[14 - i] = XGK[i];
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
        if i % 2 == 1 {
            wg[i] = WG[i / 2];
            wg[14 - i] = WG[i / 2];
        }
    }
    x[7] = 0.0;
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (x, wk, wg)
}

/// Result of one rule application on a region.
pub(crate) struct RuleOut<V> {
    pub value: V,
    pub err: f64,
    /// Preferred split axis.
    pub axis_score: Vec<f64>,
    pub evals: usize,
}

/// Applies the rule for dimension `d` on the box `[c - h, c + h]`.
pub(crate) fn apply<V, F>(c: &[f64], h: &[f64], f: &mut F) -> Result<RuleOut<V>, Vec<f64>>
where
    V: QuadValue,
    F: FnMut(&[f64]) -> Option<V>,
{
    match c.len() {
        1 => gk_1d(c, h, f),
        2 => gk_2d(c, h, f),
        _ => genz_malik(c, h, f),
    }
}

fn gk_1d<V: QuadValue, F: FnMut(&[f64]) -> Option<V>>(c: &[f64], h: &[f64], f: &mut F) -> Result<RuleOut<V>, Vec<f64>> {
    let (x, wk, wg) = gk15();
    let mut k: Option<V> = None;
    let mut g: Option<V> = None;
    for i in 0..15 {
        let p = [c[0] + h[0] * x[i]];
        let v = f(&p).ok_or_else(|| p.to_vec())?;
        let kk = k.get_or_insert_with(|| v.zero_like());
        kk.axpy(wk[i] * h[0], &v);
        let gg = g.get_or_insert_with(|| v.zero_like());
        if wg[i] != 0.0 {
            gg.axpy(wg[i] * h[0], &v);
        }
    }
    let k = k.unwrap();
    let mut d = g.unwrap();
    d.axpy(-1.0, &k);
    let err = d.size();
    Ok(RuleOut { value: k, err, axis_score: vec![err], evals: 15 })
}

fn gk_2d<V: QuadValue, F: FnMut(&[f64]) -> Option<V>>(c: &[f64], h: &[f64], f: &mut F) -> Result<RuleOut<V>, Vec<f64>> {
    let (x, wk, wg) = gk15();
    let mut kk: Option<V> = None;
    let mut gk: Option<V> = None;
    let mut kg: Option<V> = None;
    let area = h[0] * h[1];
    for i in 0..15 {
        for j in 0..15 {
            let p = [c[0] + h[0] * x[i], c[1] + h[1] * x[j]];
            let v = f(&p).ok_or_else(|| p.to_vec())?;
            kk.get_or_insert_with(|| v.zero_like()).axpy(wk[i] * wk[j] * area, &v);
            let a = gk.get_or_insert_with(|| v.zero_like());
            if wg[i] != 0.0 {
                a.axpy(wg[i] * wk[j] * area, &v);
            }
            let b = kg.get_or_insert_with(|| v.zero_like());
            if wg[j] != 0.0 {
                b.axpy(wk[i] * wg[j] * area, &v);
            }
        }
    }
    let kk = kk.unwrap();
    let mut e0 = gk.unwrap();
    e0.axpy(-1.0, &kk);
    let mut e1 = kg.unwrap();
    e1.axpy(-1.0, &kk);
    let (a, b) = (e0.size(), e1.size());
    Ok(RuleOut { value: kk, err: a + b, axis_score: vec![a, b], evals: 225 })
}

fn genz_malik<V: QuadValue, F: FnMut(&[f64]) -> Option<V>>(c: &[f64], h: &[f64], f: &mut F) -> Result<RuleOut<V>, Vec<f64>> {
    let d = c.len();
    let df = d as f64;
    let l2 = (9.0f64 / 70.0).sqrt();
    let l4 = (9.0f64 / 10.0).sqrt();
    let l5 = (9.0f64 / 19.0).sqrt();
    let vol: f64 = h.iter().map(|x| 2.0 * x).product();
    let w1 = (12824.0 - 9120.0 * df + 400.0 * df * df) / 19683.0;
    let w2 = 980.0 / 6561.0;
    let w3 = (1820.0 - 400.0 * df) / 19683.0;
    let w4 = 200.0 / 19683.0;
    let w5 = 6859.0 / 19683.0 / (1u64 << d) as f64;
    let v1 = (729.0 - 950.0 * df + 50.0 * df * df) / 729.0;
    let v2 = 245.0 / 486.0;
    let v3 = (265.0 - 100.0 * df) / 1458.0;
    let v4 = 25.0 / 729.0;

    let mut evals = 0;
    let mut p = c.to_vec();
    let mut eval = |p: &[f64], evals: &mut usize| -> Result<V, Vec<f64>> {
        *evals += 1;
        f(p).ok_or_else(|| p.to_vec())
    };
    let f0 = eval(&p, &mut evals)?;
    let mut s2 = f0.zero_like();
    let mut s3 = f0.zero_like();
    let mut s4 = f0.zero_like();
    let mut s5 = f0.zero_like();
    let mut score = vec![0.0; d];
    for i in 0..d {
        p[i] = c[i] - l2 * h[i];
        let a = eval(&p, &mut evals)?;
        p[i] = c[i] + l2 * h[i];
        let b = eval(&p, &mut evals)?;
        p[i] = c[i] - l4 * h[i];
        let a3 = eval(&p, &mut evals)?;
        p[i] = c[i] + l4 * h[i];
        let b3 = eval(&p, &mut evals)?;
        p[i] = c[i];
        // fourth difference along axis i
        let mut d2 = a.clone();
        d2.axpy(1.0, &b);
        d2.axpy(-2.0, &f0);
        let mut d3 = a3.clone();
        d3.axpy(1.0, &b3);
        d3.axpy(-2.0, &f0);
        let mut diff = d2.clone();
        diff.axpy(-(l2 * l2) / (l4 * l4), &d3);
        score[i] = diff.size();
        s2.axpy(1.0, &a);
        s2.axpy(1.0, &b);
        s3.axpy(1.0, &a3);
        s3.axpy(1.0, &b3);
    }
    for i in 0..d {
        for j in i + 1..d {
            for (si, sj) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)] {
                p[i] = c[i] + si * l4 * h[i];
                p[j] = c[j] + sj * l4 * h[j];
                s4.axpy(1.0, &eval(&p, &mut evals)?);
            }
            p[i] = c[i];
            p[j] = c[j];
        }
    }
    for mask in 0..(1u64 << d) {
        for i in 0..d {
            p[i] = if mask & (1 << i) != 0 { c[i] + l5 * h[i] } else { c[i] - l5 * h[i] };
        }
        s5.axpy(1.0, &eval(&p, &mut evals)?);
    }
    let mut r7 = f0.zero_like();
    r7.axpy(w1 * vol, &f0);
    r7.axpy(w2 * vol, &s2);
    r7.axpy(w3 * vol, &s3);
    r7.axpy(w4 * vol, &s4);
    r7.axpy(w5 * vol, &s5);
    let mut r5 = f0.zero_like();
    r5.axpy(v1 * vol, &f0);
    r5.axpy(v2 * vol, &s2);
    r5.axpy(v3 * vol, &s3);
    r5.axpy(v4 * vol, &s4);
    let mut e = r7.clone();
    e.axpy(-1.0, &r5);
    Ok(RuleOut { value: r7, err: e.size(), axis_score: score, evals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(d: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
        let c = vec![0.0; d];
        let h = vec![1.0; d];
        let mut g = |p: &[f64]| Some(f(p));
        match apply::<f64, _>(&c, &h, &mut g) {
            Ok(r) => r.value,
            Err(_) => unreachable!(),
        }
    }

    #[test]
    fn rules_integrate_polynomials_exactly() {
        // degree 7 monomials on [-1,1]^d
        let exact2 = 4.0 / 9.0; // ∫ x^2 y^2 over [-1,1]^2
        assert!((run(2, |p| p[0] * p[0] * p[1] * p[1]) - exact2).abs() < 1e-14);
        assert!((run(1, |p| p[0].powi(20)) - 2.0 / 21.0).abs() < 1e-14);
        for d in 3..=5 {
            let vol = (1u64 << d) as f64;
            let v = run(d, |p| p[0].powi(4) * p[1] * p[1]);
            // ∫ x^4 y^2 = 2/5 * 2/3 * 2^(d-2)
            let exact = 2.0 / 5.0 * 2.0 / 3.0 * (1u64 << (d - 2)) as f64;
            assert!((v - exact).abs() < 1e-12, "d={d}: {v} vs {exact}");
            assert!((run(d, |_| 1.0) - vol).abs() < 1e-12);
        }
    }
}
