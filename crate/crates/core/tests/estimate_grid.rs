use besov_core::besov::BesovOptions;
use besov_core::estimates::{estimate_matrix, EstimateGrid};

#[test]
fn every_bound_dominates_its_computed_norm() {
    let reports = estimate_matrix(&EstimateGrid::default(), &BesovOptions::default()).unwrap();
    let mut bad = Vec::new();
    for r in &reports {
        println!("{:<12} {:<60} bound={:.6e} emp={:.6e} ratio={:.4}", r.family, r.params_text(), r.bound, r.empirical, r.ratio);
        if !r.holds(1e-2) {
            bad.push(r.clone());
        }
    }
    assert!(bad.is_empty(), "{bad:?}");
}
