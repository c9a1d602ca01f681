//! # azcoherence
//!
//! Quantum coherence measures built on the generalized alpha-z relative
//! Renyi entropy.
//!
//! The library evaluates the trace functional
//!
//! ```text
//! f(rho, sigma) = tr( sigma^((1-a)/2z) rho^(a/z) sigma^((1-a)/2z) )^z
//! ```
//!
//! for density matrices `rho`, `sigma` and parameters `alpha > 0`
//! (`alpha != 1`), `z > 0`, the divergences derived from it, and the induced
//! coherence measure
//!
//! ```text
//! C_{a,z}(rho) = min over diagonal sigma of (f^(1/a) - 1)/(a - 1)
//! ```
//!
//! with a closed form at `z = 1`, an exponentiated-gradient optimizer over
//! the probability simplex for general `z`, and a brute-force grid oracle
//! for qubits and qutrits. The [`channels`] module provides Kraus-form CPTP
//! maps, incoherent-channel sampling and a randomized suite checking the
//! coherence-measure postulates (faithfulness, monotonicity, convexity,
//! strong monotonicity, block additivity).
//!
//! ## Quick start
//!
//! ```rust
//! use azcoherence::{coherence, AlphaZ, EvalMethod};
//! use azcoherence::states::maximally_coherent;
//!
//! let rho = maximally_coherent(2);
//! let p = AlphaZ::new(0.5, 1.0).unwrap();
//! let result = coherence(&rho, &p, EvalMethod::Auto).unwrap();
//! assert!((result.value - 1.0).abs() < 1e-12);
//! ```
//!
//! Parameter regions: the minimum defines a proven coherence measure for
//! `alpha in (0,1), z >= max(alpha, 1-alpha)`, for `alpha in (1,2]` with
//! `z = 1` or `z = alpha/2`, and for `alpha > 1` with `z = alpha`
//! ([`classify_regime`]). Outside those regions the quantity is still
//! computed, flagged as unproven.
//!
//! All logarithms are natural.

pub mod channels;
pub mod coherence;
pub mod divergence;
pub mod error;
pub mod matops;
pub mod simplex_opt;
pub mod statefile;
pub mod states;

pub use coherence::{
    closed_z1_value_unchecked, coherence, coherence_closed_z1, coherence_with,
    max_coherent_value, qubit_pure_closed, z_ordering_check, CoherenceResult, EvalMethod,
    InequalityCheck, Method, QubitVariant, ZOrderingParams, ZOrderingReport,
};
pub use divergence::{
    classify_regime, f_az, gen_div, unit_bound_check, renyi_div, tsallis_div, AlphaZ, UnitBoundReport,
    RegimeCase, RegimeClass,
};
pub use error::{Error, Result};
pub use matops::{
    matpow, schatten_norm, spectral, validate_state, CMatrix, DensityMatrix, DiagonalState,
    HermitianMatrix, SpectralDecomposition,
};
pub use simplex_opt::{grid_oracle, gradient, minimize, GridOracleConfig, OptimizerConfig};
pub use statefile::StateFile;
