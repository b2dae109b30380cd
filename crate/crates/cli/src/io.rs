//! Matrix-tuple files: `{"n", "dim", "matrices": [[[ [re, im], .. ], ..], ..], "commutation_tol"?}`.

use std::path::Path;

use besov_core::linalg::CMat;
use besov_core::opcalc::{OperatorTuple, DEFAULT_COMMUTATION_TOL};
use besov_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TupleFile {
    pub n: usize,
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutation_tol: Option<f64>,
}

/// `[[ [re, im], .. ], ..]` rows of one matrix.
pub fn encode_matrix(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn decode_matrix(rows: &[Vec<[f64; 2]>], dim: usize, which: usize) -> Result<CMat, CliError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Input(format!("matrix {which} is not {dim}x{dim}")));
    }
    Ok(CMat::from_fn(dim, dim, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

impl TupleFile {
    pub fn from_tuple(t: &OperatorTuple) -> Self {
        TupleFile { n: t.n(), dim: t.dim(), matrices: t.mats().iter().map(encode_matrix).collect(), commutation_tol: Some(t.tol()) }
    }

    pub fn to_tuple(&self) -> Result<OperatorTuple, CliError> {
        if self.matrices.len() != self.n {
            return Err(CliError::Input(format!("n = {} but {} matrices given", self.n, self.matrices.len())));
        }
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, m)| decode_matrix(m, self.dim, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OperatorTuple::new(mats, self.commutation_tol.unwrap_or(DEFAULT_COMMUTATION_TOL))?)
    }
}

pub fn parse_tuple(text: &str) -> Result<OperatorTuple, CliError> {
    let f: TupleFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("matrix file, line {} column {}: {e}", e.line(), e.column())))?;
    f.to_tuple()
}

pub fn read_tuple(path: &Path) -> Result<OperatorTuple, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_tuple(&text).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"n": 2, "dim": 2, "matrices": [[[[1,0],[0,0]],[[0,0],[2,0]]], [[[3,0],[0,0]],[[0,0],[4,0.5]]]]}"#;
        let t = parse_tuple(text).unwrap();
        assert_eq!(t.mats()[1][(1, 1)], C64::new(4.0, 0.5));
        let back = TupleFile::from_tuple(&t);
        assert_eq!(back.to_tuple().unwrap().mats(), t.mats());
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(parse_tuple(r#"{"n": 1, "dim": 2, "matrices": [[[[1,0]]]]}"#), Err(CliError::Input(_))));
        assert!(matches!(parse_tuple("{"), Err(CliError::Input(m)) if m.contains("line 1")));
        let nc = r#"{"n": 2, "dim": 2, "matrices": [[[[0,0],[1,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[1,0],[0,0]]]]}"#;
        assert!(matches!(parse_tuple(nc), Err(CliError::Calc(_))));
    }
}
