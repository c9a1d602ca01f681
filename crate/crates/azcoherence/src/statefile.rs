//! On-disk JSON schema for density matrices:
//! `{"dim": d, "re": [[..]], "im": [[..]]}`.
//!
//! Writing formats every number with 17 significant digits so that a
//! write/read round trip reproduces the matrix bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matops::{CMatrix, DensityMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let re = (0..d)
            .map(|i| (0..d).map(|j| rho.matrix()[(i, j)].re).collect())
            .collect();
        let im = (0..d)
            .map(|i| (0..d).map(|j| rho.matrix()[(i, j)].im).collect())
            .collect();
        Self { dim: d, re, im }
    }

    /// Rebuild and fully validate the state.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let d = self.dim;
        if self.re.len() != d
            || self.im.len() != d
            || self.re.iter().any(|row| row.len() != d)
            || self.im.iter().any(|row| row.len() != d)
        {
            return Err(Error::InvalidStateFile {
                message: format!("re/im are not {d}x{d} matrices"),
            });
        }
        let mat = CMatrix::from_fn(d, d, |i, j| Complex64::new(self.re[i][j], self.im[i][j]));
        DensityMatrix::new(mat)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidStateFile {
            message: e.to_string(),
        })
    }

    /// Serialize with 17 significant digits per number.
    pub fn to_json(&self) -> String {
        let fmt_matrix = |m: &[Vec<f64>]| {
            m.iter()
                .map(|row| {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect::<Vec<_>>()
                .join(",\n    ")
        };
        format!(
            "{{\n  \"dim\": {},\n  \"re\": [\n    {}\n  ],\n  \"im\": [\n    {}\n  ]\n}}\n",
            self.dim,
            fmt_matrix(&self.re),
            fmt_matrix(&self.im)
        )
    }
}
