//! Adaptive cubature over boxes, half-lines and products of half-planes.

mod cubature;
mod plane;
mod rules;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;
use num_complex::Complex64 as C64;

use crate::error::QuadError;
use crate::linalg::{norm_max, CMat};

pub use cubature::{integrate_box, Axis};
pub use plane::{integrate_planes, integrate_planes_real, Contour, PlanePoint};

/// How unbounded directions are handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainMode {
    /// Rational compactifying maps over the full domain.
    Mapped,
    /// Finite box `α <= alpha_max`, `|β| <= beta_max` with a modelled tail.
    Truncated,
}

/// Cubature parameters. Every report embeds the values used.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadSpec {
    pub alpha_max: f64,
    pub beta_max: f64,
    pub base_panels: usize,
    pub max_refine_depth: u32,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub domain: DomainMode,
    /// Length scale of the compactifying maps.
    pub scale: f64,
    /// Rotation of the imaginary-axis tails into the lower half-plane, for
    /// holomorphic integrands (radians, in `[0, π/2)`).
    pub tail_angle: f64,
    /// Decay exponent assumed for the tail in truncated mode.
    pub tail_decay: f64,
    pub max_evals: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            alpha_max: 200.0,
            beta_max: 2000.0,
            base_panels: 4,
            max_refine_depth: 12,
            rel_tol: 1.0e-8,
            abs_tol: 1.0e-12,
            domain: DomainMode::Mapped,
            scale: 1.0,
            tail_angle: core::f64::consts::FRAC_PI_4,
            tail_decay: 3.0,
            max_evals: 4_000_000,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<(), QuadError> {
        let bad = |m: &str| Err(QuadError::InvalidSpec(m.into()));
        if !(self.alpha_max > 0.0 && self.beta_max > 0.0) {
            return bad("alpha_max and beta_max must be positive");
        }
        if self.base_panels < 4 {
            return bad("base_panels must be at least 4");
        }
        if self.max_refine_depth > 12 {
            return bad("max_refine_depth must be at most 12");
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.scale > 0.0) {
            return bad("scale must be positive");
        }
        if !(0.0..core::f64::consts::FRAC_PI_2).contains(&self.tail_angle) {
            return bad("tail_angle must lie in [0, pi/2)");
        }
        if !(self.tail_decay > 2.0) {
            return bad("tail_decay must exceed 2");
        }
        if self.max_evals == 0 {
            return bad("max_evals must be positive");
        }
        Ok(())
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Flat `key=value` text, one pair per line, fixed key order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mode = match self.domain {
            DomainMode::Mapped => "mapped",
            DomainMode::Truncated => "truncated",
        };
        let _ = write!(
            s,
            "alpha_max={}\nbeta_max={}\nbase_panels={}\nmax_refine_depth={}\nrel_tol={:e}\nabs_tol={:e}\ndomain={}\nscale={}\ntail_angle={}\ntail_decay={}\nmax_evals={}\n",
            self.alpha_max,
            self.beta_max,
            self.base_panels,
            self.max_refine_depth,
            self.rel_tol,
            self.abs_tol,
            mode,
            self.scale,
            self.tail_angle,
            self.tail_decay,
            self.max_evals
        );
        s
    }

    /// Parses `key=value` lines (or `;`/`,` separated pairs) over the defaults.
    pub fn from_text(text: &str) -> Result<Self, QuadError> {
        let mut q = QuadSpec::default();
        for item in text.split(['\n', ';', ',']) {
            let item = item.trim();
            if item.is_empty() || item.starts_with('#') {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| QuadError::InvalidSpec(format!("expected key=value, got '{item}'")))?;
            let (k, v) = (k.trim(), v.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| QuadError::InvalidSpec(format!("bad number for {k}: '{v}'")));
            let int = |v: &str| v.parse::<u64>().map_err(|_| QuadError::InvalidSpec(format!("bad integer for {k}: '{v}'")));
            match k {
                "alpha_max" => q.alpha_max = num(v)?,
                "beta_max" => q.beta_max = num(v)?,
                "base_panels" => q.base_panels = int(v)? as usize,
                "max_refine_depth" => q.max_refine_depth = int(v)? as u32,
                "rel_tol" => q.rel_tol = num(v)?,
                "abs_tol" => q.abs_tol = num(v)?,
                "scale" => q.scale = num(v)?,
                "tail_angle" => q.tail_angle = num(v)?,
                "tail_decay" => q.tail_decay = num(v)?,
                "max_evals" => q.max_evals = int(v)? as usize,
                "domain" => {
                    q.domain = match v {
                        "mapped" => DomainMode::Mapped,
                        "truncated" => DomainMode::Truncated,
                        _ => return Err(QuadError::InvalidSpec(format!("unknown domain '{v}'"))),
                    }
                }
                _ => return Err(QuadError::InvalidSpec(format!("unknown key '{k}'"))),
            }
        }
        q.validate()?;
        Ok(q)
    }
}

/// Outcome of one cubature run.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    /// Estimated discretization error (max-entry norm for matrices).
    pub err_est: f64,
    /// Estimated contribution of the discarded domain (zero in mapped mode).
    pub truncation_est: f64,
    pub n_evals: usize,
    /// False when the tolerance was not met within the evaluation budget.
    pub converged: bool,
}

impl<V> QuadResult<V> {
    pub fn total_err(&self) -> f64 {
        self.err_est + self.truncation_est
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> QuadResult<W> {
        QuadResult {
            value: f(self.value),
            err_est: self.err_est,
            truncation_est: self.truncation_est,
            n_evals: self.n_evals,
            converged: self.converged,
        }
    }
}

/// Values the cubature engine can accumulate.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn axpy(&mut self, w: f64, x: &Self);
    /// Norm used for error control (largest entry modulus).
    fn size(&self) -> f64;
}

/// Values that can be scaled by complex Jacobians.
pub trait ComplexScale: QuadValue {
    fn scale_c(&mut self, w: C64);
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn axpy(&mut self, w: f64, x: &Self) {
        *self += w * x;
    }
    fn size(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero_like(&self) -> Self {
        C64::new(0.0, 0.0)
    }
    fn axpy(&mut self, w: f64, x: &Self) {
        *self += x * w;
    }
    fn size(&self) -> f64 {
        self.norm()
    }
}

impl ComplexScale for C64 {
    fn scale_c(&mut self, w: C64) {
        *self *= w;
    }
}

impl QuadValue for CMat {
    fn zero_like(&self) -> Self {
        CMat::zeros(self.nrows(), self.ncols())
    }
    fn axpy(&mut self, w: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x.iter()) {
            *a += b * w;
        }
    }
    fn size(&self) -> f64 {
        norm_max(self)
    }
}

impl ComplexScale for CMat {
    fn scale_c(&mut self, w: C64) {
        for a in self.iter_mut() {
            *a *= w;
        }
    }
}

impl QuadValue for Vec<f64> {
    fn zero_like(&self) -> Self {
        alloc::vec![0.0; self.len()]
    }
    fn axpy(&mut self, w: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x) {
            *a += w * b;
        }
    }
    fn size(&self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_text_round_trip() {
        let q = QuadSpec { rel_tol: 1e-6, base_panels: 6, domain: DomainMode::Truncated, ..QuadSpec::default() };
        let back = QuadSpec::from_text(&q.to_text()).unwrap();
        assert_eq!(q, back);
        assert_eq!(QuadSpec::from_text("").unwrap(), QuadSpec::default());
        assert!(QuadSpec::from_text("base_panels=2").is_err());
        assert!(QuadSpec::from_text("max_refine_depth=13").is_err());
        assert!(QuadSpec::from_text("bogus=1").is_err());
    }
}
