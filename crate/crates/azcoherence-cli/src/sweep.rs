//! The pure-qubit sweep: closed forms against the numeric optimizer for
//! C(1/2,1/2), C(1/2,1) and C(1/2,2) over c3 in [-1, 1], written as CSV.

use std::io::Write;
use std::path::PathBuf;

use azcoherence::states;
use azcoherence::{
    coherence_with, qubit_pure_closed, AlphaZ, EvalMethod, OptimizerConfig, QubitVariant,
};

use crate::{fail, EXIT_BAD_INPUT, EXIT_BAD_PARAMS, EXIT_NUMERIC};

pub(crate) const CSV_HEADER: &str = "c3,c_half_half,c_half_one,c_half_two,\
numeric_half_half,numeric_half_one,numeric_half_two,\
absdiff_half_half,absdiff_half_one,absdiff_half_two";

pub(crate) struct SweepRow {
    pub c3: f64,
    pub closed: [f64; 3],
    pub numeric: [f64; 3],
}

impl SweepRow {
    pub fn absdiff(&self) -> [f64; 3] {
        [
            (self.closed[0] - self.numeric[0]).abs(),
            (self.closed[1] - self.numeric[1]).abs(),
            (self.closed[2] - self.numeric[2]).abs(),
        ]
    }

    /// Values within [0, 1] and the z = 1/2, 1, 2 ordering.
    pub fn check_invariants(&self) -> Result<(), String> {
        for v in self.closed.iter().chain(&self.numeric) {
            if !(-1e-9..=1.0 + 1e-9).contains(v) {
                return Err(format!("value {v} outside [0, 1] at c3 = {}", self.c3));
            }
        }
        if self.closed[0] > self.closed[1] + 1e-9 || self.closed[1] > self.closed[2] + 1e-9 {
            return Err(format!("closed-form ordering violated at c3 = {}", self.c3));
        }
        Ok(())
    }
}

pub(crate) fn compute_rows(points: usize, seed: u64) -> Vec<SweepRow> {
    let cfg = OptimizerConfig::with_seed(seed);
    let variants = [
        (QubitVariant::ZHalf, 0.5),
        (QubitVariant::ZOne, 1.0),
        (QubitVariant::ZTwo, 2.0),
    ];
    (0..points)
        .map(|i| {
            let c3 = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
            let bloch = [(1.0 - c3 * c3).max(0.0).sqrt(), 0.0, c3];
            let rho = states::qubit_pure_c3(c3).expect("pure Bloch state");
            let mut closed = [0.0; 3];
            let mut numeric = [0.0; 3];
            for (k, (variant, z)) in variants.into_iter().enumerate() {
                let p = AlphaZ::new(0.5, z).expect("valid parameters");
                closed[k] = qubit_pure_closed(bloch, variant).expect("unit Bloch vector");
                numeric[k] = coherence_with(&rho, &p, EvalMethod::Numeric, &cfg)
                    .expect("numeric coherence")
                    .value;
            }
            SweepRow {
                c3,
                closed,
                numeric,
            }
        })
        .collect()
}

pub(crate) fn cmd_sweep_qubit(points: usize, output: &PathBuf, seed: u64) -> Result<(), u8> {
    if points < 2 {
        return Err(fail(EXIT_BAD_PARAMS, "need at least 2 sweep points"));
    }
    let rows = compute_rows(points, seed);
    for row in &rows {
        row.check_invariants()
            .map_err(|msg| fail(EXIT_NUMERIC, msg))?;
    }
    let mut text = String::with_capacity(rows.len() * 128);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in &rows {
        let d = row.absdiff();
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.c3,
            row.closed[0],
            row.closed[1],
            row.closed[2],
            row.numeric[0],
            row.numeric[1],
            row.numeric[2],
            d[0],
            d[1],
            d[2]
        ));
    }
    let mut file = std::fs::File::create(output)
        .map_err(|e| fail(EXIT_BAD_INPUT, format!("{}: {e}", output.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| fail(EXIT_BAD_INPUT, format!("{}: {e}", output.display())))?;
    Ok(())
}
