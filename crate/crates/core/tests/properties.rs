use besov_core::besov::{bnorm, h_omega, seminorm, BesovOptions};
use besov_core::decomp::{elementary_decompose, sample_points};
use besov_core::estimates::{bound_bandlimited, bound_exp_window, bound_r, bound_s};
use besov_core::fnalg::{sup_norm, SupOptions};
use besov_core::linalg::norm_2;
use besov_core::opcalc::{calc, hp_calc, random_commuting_tuple, CalcOptions};
use besov_core::quad::{integrate_box, Axis, QuadSpec};
use besov_core::spectral::{hausdorff_tuples, joint_spectrum};
use besov_core::{FnExpr, VarSet, C64};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Atom {
    Res { w: Vec<f64>, s: C64, p: f64 },
    Exp { a: Vec<f64> },
}

impl Atom {
    fn build(&self, scale: f64) -> FnExpr {
        match self {
            Atom::Res { w, s, p } => FnExpr::res(w.iter().map(|x| x * scale).collect(), *s, *p).unwrap(),
            Atom::Exp { a } => FnExpr::exp(a.iter().map(|x| x * scale).collect()).unwrap(),
        }
    }
}

#[derive(Clone, Debug)]
struct Term {
    coef: C64,
    atoms: Vec<Atom>,
}

/// `Σ coef Π atoms`, with every weight and rate multiplied by `scale`.
fn build(n: usize, terms: &[Term], scale: f64) -> FnExpr {
    let mut f = FnExpr::constant(n, C64::new(0.0, 0.0));
    for t in terms {
        let mut p = FnExpr::constant(n, t.coef);
        for a in &t.atoms {
            p = p.mul(&a.build(scale)).unwrap();
        }
        f = f.add(&p).unwrap();
    }
    f
}

fn atom(n: usize) -> impl Strategy<Value = Atom> {
    let weights = proptest::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]), n)
        .prop_filter("some weight nonzero", |w| w.iter().any(|x| *x != 0.0));
    let res = (weights, 0.3f64..3.0, -2.0f64..2.0, prop::sample::select(vec![0.5, 1.0, 2.0]))
        .prop_map(|(w, re, im, p)| Atom::Res { w, s: C64::new(re, im), p });
    let exp = proptest::collection::vec(0.0f64..2.0, n).prop_map(|a| Atom::Exp { a });
    prop_oneof![2 => res, 1 => exp]
}

fn terms(n: usize, max_terms: usize) -> impl Strategy<Value = Vec<Term>> {
    let term = ((-2.0f64..2.0, -2.0f64..2.0), proptest::collection::vec(atom(n), 1..3))
        .prop_map(|((re, im), atoms)| Term { coef: C64::new(re, im), atoms });
    proptest::collection::vec(term, 1..=max_terms)
}

fn function(max_terms: usize) -> impl Strategy<Value = FnExpr> {
    (1usize..=2).prop_flat_map(move |n| terms(n, max_terms).prop_map(move |t| build(n, &t, 1.0)))
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn cheap_besov() -> BesovOptions {
    BesovOptions::with_quad(QuadSpec::default().with_tol(1e-6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_identity(f in function(3)) {
        let text = f.to_string();
        let g = FnExpr::parse(&text, Some(f.dim())).unwrap();
        prop_assert_eq!(g.to_string(), text);
        for z in sample_points(f.dim(), 10, 1) {
            prop_assert!(close(f.eval(&z).unwrap(), g.eval(&z).unwrap(), 1e-12));
        }
    }

    #[test]
    fn mixed_partials_commute(f in function(3)) {
        if f.dim() == 2 {
            let a = f.partial_set(VarSet::singleton(0)).partial_set(VarSet::singleton(1));
            let b = f.partial_set(VarSet::singleton(1)).partial_set(VarSet::singleton(0));
            for z in sample_points(2, 10, 2) {
                prop_assert!(close(a.eval(&z).unwrap(), b.eval(&z).unwrap(), 1e-10));
            }
        }
    }

    #[test]
    fn partial_matches_central_differences(f in function(3), j in 0usize..2) {
        let j = j % f.dim();
        let d = f.partial_set(VarSet::singleton(j));
        let h = 1e-5;
        for mut z in sample_points(f.dim(), 10, 3) {
            z[j].re += 0.5;
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[j].re += h;
            zm[j].re -= h;
            let fd = (f.eval(&zp).unwrap() - f.eval(&zm).unwrap()) / (2.0 * h);
            let exact = d.eval(&z).unwrap();
            let scale = exact.norm().max(f.eval(&z).unwrap().norm()).max(1e-3);
            prop_assert!((fd - exact).norm() <= 1e-6 * scale, "{} vs {}", fd, exact);
        }
    }

    #[test]
    fn shifts_compose(f in function(3), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let n = f.dim();
        let a = f.shift(&vec![s; n]).unwrap().shift(&vec![t; n]).unwrap();
        let b = f.shift(&vec![s + t; n]).unwrap();
        for z in sample_points(n, 10, 4) {
            prop_assert!(close(a.eval(&z).unwrap(), b.eval(&z).unwrap(), 1e-12));
        }
    }

    #[test]
    fn elementary_parts_reconstruct(f in function(3)) {
        let dec = elementary_decompose(&f);
        for z in sample_points(f.dim(), 50, 5) {
            let (a, b) = (dec.eval(&z), f.eval(&z).unwrap());
            prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "{} vs {}", a, b);
        }
    }

    #[test]
    fn bounds_scale_linearly(k in 0.0f64..10.0, nu in 0.2f64..3.0, re in 0.1f64..3.0, omega in 0.1f64..3.0, n in 1usize..3) {
        let l = C64::new(re, 0.5);
        let tol = 1e-12;
        prop_assert!((bound_r(nu, l, omega, n, k).unwrap() - k * bound_r(nu, l, omega, n, 1.0).unwrap()).abs() <= tol * (1.0 + k) * bound_r(nu, l, omega, n, 1.0).unwrap());
        prop_assert!((bound_s(nu, l, omega, n, k).unwrap() - k * bound_s(nu, l, omega, n, 1.0).unwrap()).abs() <= tol * (1.0 + k) * bound_s(nu, l, omega, n, 1.0).unwrap());
        prop_assert!((bound_exp_window(nu, omega, n, k).unwrap() - k * bound_exp_window(nu, omega, n, 1.0).unwrap()).abs() <= tol * (1.0 + k));
        prop_assert!((bound_bandlimited(re, re + nu, n, k).unwrap() - k * bound_bandlimited(re, re + nu, n, 1.0).unwrap()).abs() <= tol * (1.0 + k) * bound_bandlimited(re, re + nu, n, 1.0).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cauchy_inequality(f in function(2), mask in 1u32..4) {
        let n = f.dim();
        let omega = VarSet::from_bits(mask).intersection(VarSet::full(n));
        let s = sup_norm(&f);
        let d = f.partial_set(omega);
        for z in sample_points(n, 10, 6) {
            let denom: f64 = omega.iter().map(|j| 2.0 * z[j].re).product();
            prop_assert!(d.eval(&z).unwrap().norm() <= s / denom * (1.0 + 1e-6) + 1e-12);
        }
    }

    #[test]
    fn h_decreases_in_each_real_part(f in function(2)) {
        let n = f.dim();
        let omega = VarSet::full(n);
        let sup = SupOptions::default();
        let grid = [0.05, 0.2, 1.0, 5.0];
        for j in 0..n {
            let mut prev = f64::INFINITY;
            for &a in &grid {
                let mut alpha = vec![0.7; n];
                alpha[j] = a;
                let h = h_omega(&f, omega, &alpha, &sup).unwrap();
                prop_assert!(h <= prev * (1.0 + 1e-6) + 1e-12, "{} after {}", h, prev);
                prev = h;
            }
        }
    }

    #[test]
    fn quadrature_is_linear_and_deterministic(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.2f64..3.0) {
        let spec = QuadSpec::default().with_tol(1e-9);
        let axes = [Axis::HalfLine { a: 0.0, scale: 1.0 }, Axis::Interval { a: 0.0, b: 1.0 }];
        let g = |x: &[f64]| (-c * x[0]).exp() * (1.0 + x[1] * x[1]);
        let h = |x: &[f64]| 1.0 / ((1.0 + x[0]).powi(3) * (1.0 + x[1]));
        let ig = integrate_box(&axes, g, &spec).unwrap();
        let ih = integrate_box(&axes, h, &spec).unwrap();
        let ic = integrate_box(&axes, |x: &[f64]| a * g(x) + b * h(x), &spec).unwrap();
        let budget = ic.err_est + a.abs() * ig.err_est + b.abs() * ih.err_est + 1e-12;
        prop_assert!((ic.value - (a * ig.value + b * ih.value)).abs() <= budget);
        let again = integrate_box(&axes, |x: &[f64]| a * g(x) + b * h(x), &spec).unwrap();
        prop_assert_eq!(again.value.to_bits(), ic.value.to_bits());
        prop_assert_eq!(again.err_est.to_bits(), ic.err_est.to_bits());
    }

    #[test]
    fn joint_spectrum_is_similarity_invariant(seed in 0u64..1000) {
        let (t, truth) = random_commuting_tuple(2, 4, seed);
        let (u, _) = random_commuting_tuple(1, 4, seed ^ 0x55);
        let s = u.mats()[0].clone();
        let si = s.clone().try_inverse().unwrap();
        let conj: Vec<_> = t.mats().iter().map(|a| &s * a * &si).collect();
        let t2 = besov_core::opcalc::OperatorTuple::new(conj, 1e-8).unwrap();
        let a = joint_spectrum(&t).unwrap();
        let b = joint_spectrum(&t2).unwrap();
        prop_assert!(hausdorff_tuples(&a.points, &b.points) <= 1e-8);
        let exact: Vec<Vec<C64>> = (0..4).map(|i| vec![truth.values[0][i], truth.values[1][i]]).collect();
        prop_assert!(hausdorff_tuples(&a.points, &exact) <= 1e-8);
    }
}

/// One-variable functions with every weight scaled by `b`.
fn scaled_pair() -> impl Strategy<Value = (FnExpr, FnExpr)> {
    (terms(1, 2), 0.3f64..3.0).prop_map(|(t, b)| (build(1, &t, 1.0), build(1, &t, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn norm_is_submultiplicative(f in function(2), g in function(2)) {
        prop_assume!(f.dim() == 1 && g.dim() == 1);
        let o = cheap_besov();
        let (a, b) = (bnorm(&f, &o).unwrap(), bnorm(&g, &o).unwrap());
        let p = bnorm(&f.mul(&g).unwrap(), &o).unwrap();
        let budget = p.err_est + a.err_est * (b.total + b.err_est) + b.err_est * a.total;
        prop_assert!(p.total <= a.total * b.total + budget + 1e-9, "{} > {} * {}", p.total, a.total, b.total);
    }

    #[test]
    fn norm_is_dilation_invariant((f, g) in scaled_pair()) {
        let o = cheap_besov();
        let (a, b) = (bnorm(&f, &o).unwrap(), bnorm(&g, &o).unwrap());
        prop_assert!((a.total - b.total).abs() <= 1e-4 * (1.0 + a.total), "{} vs {}", a.total, b.total);
    }

    #[test]
    fn shifts_contract(f in function(2), t in 0.0f64..2.0) {
        let o = cheap_besov();
        let n = f.dim();
        let a = bnorm(&f, &o).unwrap();
        let b = bnorm(&f.shift(&vec![t; n]).unwrap(), &o).unwrap();
        prop_assert!(b.total <= a.total * (1.0 + 1e-5) + a.err_est + b.err_est);
    }

    #[test]
    fn elementary_parts_contract(f in function(2)) {
        prop_assume!(f.dim() == 1);
        let o = cheap_besov();
        let total = bnorm(&f, &o).unwrap();
        for (_, part) in &elementary_decompose(&f).parts {
            let p = bnorm(part, &o).unwrap();
            prop_assert!(p.total <= total.total * (1.0 + 1e-5) + total.err_est + p.err_est);
        }
    }

    #[test]
    fn values_vary_by_at_most_the_partial_seminorms(f in function(2)) {
        prop_assume!(f.dim() == 1);
        let o = cheap_besov();
        let s = seminorm(&f, VarSet::singleton(0), &o).unwrap();
        let pts = sample_points(1, 10, 7);
        for z in &pts {
            for w in &pts {
                let d = (f.eval(z).unwrap() - f.eval(w).unwrap()).norm();
                prop_assert!(d <= 2.0 * s.value + s.err_est + 1e-9);
            }
        }
    }

    #[test]
    fn calculus_is_linear_and_matches_semigroup_values(seed in 0u64..1000, k in -2.0f64..2.0) {
        let (t, _) = random_commuting_tuple(2, 3, seed);
        let opts = CalcOptions::default();
        let f = FnExpr::parse("exp([1,0.5])*res([1,0],1,1)", None).unwrap();
        let g = FnExpr::parse("res([0,1],2,2)", None).unwrap();
        let h = f.add(&g.scale(C64::new(k, 0.0))).unwrap();
        let (cf, cg, ch) = (calc(&f, &t, &opts).unwrap(), calc(&g, &t, &opts).unwrap(), calc(&h, &t, &opts).unwrap());
        let lin = &cf.value + &cg.value * C64::new(k, 0.0);
        prop_assert!(norm_2(&(&ch.value - lin)) <= 1e-8 + ch.norm_err() + cf.norm_err() + k.abs() * cg.norm_err());
        let hp = hp_calc(&h, &t).unwrap();
        prop_assert!(norm_2(&(&ch.value - hp)) <= 1e-3);
    }
}
