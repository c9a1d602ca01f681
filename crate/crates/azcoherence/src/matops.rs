//! Hermitian spectral calculus: eigendecomposition with a support cutoff,
//! support-restricted fractional powers, Schatten p-norms and state validation.
//!
//! Every matrix function in this crate goes through one spectral path: for a
//! Hermitian PSD operator `A = V diag(lambda) V*`, a real power `A^t` is
//! `V diag(lambda_i^t on support, 0 off support) V*`. Negative powers are the
//! support-restricted inverse, so `A^-1 A` equals the projection onto
//! `supp(A)` rather than the identity when `A` is rank deficient.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative support cutoff: eigenvalues at or below `EPS_SUPPORT * lambda_max`
/// are treated as zero. Matches the backward-error scale of the eigensolver.
pub const EPS_SUPPORT: f64 = 1e-10;
/// Tolerance on `|tr(rho) - 1|` for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry (numerical noise).
pub const PSD_TOL: f64 = 1e-10;
/// Entrywise Hermiticity tolerance, relative to the largest entry modulus.
pub const HERM_ENTRY_TOL: f64 = 1e-12;
/// Symmetrization gate, relative to the Frobenius norm of the input.
pub const HERM_GATE_TOL: f64 = 1e-6;

fn max_entry_modulus(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A square matrix stored in exactly Hermitian form.
///
/// Construction symmetrizes the input as `(A + A*)/2`; how much asymmetry is
/// tolerated depends on the constructor.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Strict constructor: the input must be Hermitian entrywise within
    /// `HERM_ENTRY_TOL * max|entry|`.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let limit = HERM_ENTRY_TOL * max_entry_modulus(&mat).max(f64::MIN_POSITIVE);
        Self::build(mat, |residual| residual <= limit, limit)
    }

    /// Lenient constructor used when ingesting raw data: accepts anything whose
    /// symmetrization correction stays below `HERM_GATE_TOL * ||A||_F`.
    pub fn symmetrized(mat: CMatrix) -> Result<Self> {
        let limit = HERM_GATE_TOL * frobenius_norm(&mat).max(f64::MIN_POSITIVE);
        Self::build(mat, |residual| residual <= limit, limit)
    }

    fn build(mat: CMatrix, ok: impl Fn(f64) -> bool, limit: f64) -> Result<Self> {
        let (rows, cols) = mat.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        // Correction norm ||(A - A*)/2||_F, also an entrywise bound.
        let mut residual_sq = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                let diff = mat[(i, j)] - mat[(j, i)].conj();
                residual_sq += 0.25 * diff.norm_sqr();
            }
        }
        let residual = residual_sq.sqrt();
        if !residual.is_finite() || !ok(residual) {
            return Err(Error::NonHermitian { residual, limit });
        }
        let mut sym = mat.clone();
        for i in 0..rows {
            sym[(i, i)] = Complex64::new(mat[(i, i)].re, 0.0);
            for j in (i + 1)..cols {
                let avg = 0.5 * (mat[(i, j)] + mat[(j, i)].conj());
                sym[(i, j)] = avg;
                sym[(j, i)] = avg.conj();
            }
        }
        Ok(Self { mat: sym })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut mat = CMatrix::zeros(d, d);
        for (i, &x) in diag.iter().enumerate() {
            mat[(i, i)] = Complex64::new(x, 0.0);
        }
        Self { mat }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            mat: CMatrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(&self.mat)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.map(|z| z * factor),
        }
    }
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in ascending
/// order and a boolean mask marking the numerically nonzero spectrum.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    support_mask: Vec<bool>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn support_mask(&self) -> &[bool] {
        &self.support_mask
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn rank(&self) -> usize {
        self.support_mask.iter().filter(|&&s| s).count()
    }

    /// `V diag(f(lambda_i) on support, 0 off support) V*`.
    pub fn apply_on_support(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (i, (&lam, &on)) in self.eigenvalues.iter().zip(&self.support_mask).enumerate() {
            let v = if on { f(lam) } else { 0.0 };
            for r in 0..d {
                scaled[(r, i)] *= v;
            }
        }
        let mat = &scaled * self.eigenvectors.adjoint();
        // Exact math gives a Hermitian result; strip rounding asymmetry.
        HermitianMatrix::symmetrized(mat).expect("spectral synthesis is Hermitian")
    }

    /// Support-restricted power `lambda_i^t` (eigenvalues off support map to 0).
    pub fn power(&self, t: f64) -> HermitianMatrix {
        self.apply_on_support(|lam| lam.powf(t))
    }

    /// `tr(P rho)` with `P` the projector onto the support.
    pub fn support_overlap(&self, rho: &CMatrix) -> f64 {
        let d = self.eigenvalues.len();
        let mut total = 0.0;
        for (i, &on) in self.support_mask.iter().enumerate() {
            if !on {
                continue;
            }
            let v = self.eigenvectors.column(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..d {
                for c in 0..d {
                    acc += v[r].conj() * rho[(r, c)] * v[c];
                }
            }
            total += acc.re;
        }
        total
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (i, &lam) in self.eigenvalues.iter().enumerate() {
            for r in 0..d {
                scaled[(r, i)] *= lam;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn spectral(a: &HermitianMatrix) -> SpectralDecomposition {
    let d = a.dim();
    let eig = nalgebra::linalg::SymmetricEigen::new(a.matrix().clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let max = eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = EPS_SUPPORT * max;
    let support_mask = eigenvalues.iter().map(|&l| l > cutoff).collect();
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        support_mask,
    }
}

/// Support-restricted real power of a PSD Hermitian matrix.
///
/// Eigenvalues in `[-EPS_SUPPORT * lambda_max, 0]` are clamped to zero so that
/// numerically pure states stay usable under fractional powers; anything more
/// negative is rejected.
pub fn matpow(a: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    let dec = spectral(a);
    let limit = EPS_SUPPORT * dec.max_eigenvalue().max(0.0);
    if dec.min_eigenvalue() < -limit {
        return Err(Error::NegativeEigenvalue {
            min_eigenvalue: dec.min_eigenvalue(),
            limit,
        });
    }
    Ok(dec.power(t))
}

/// Schatten p-norm `(sum_i s_i^p)^(1/p)` of a Hermitian matrix, with singular
/// values `s_i = |lambda_i|`. The sum runs over the support, which makes the
/// negative orders the norms of the support-restricted inverse:
/// `||X^-1||_{-p} = ||X||_p^{-1}`.
pub fn schatten_norm(a: &HermitianMatrix, p: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidNormOrder { p });
    }
    let dec = spectral(a);
    let singular: Vec<f64> = dec.eigenvalues().iter().map(|l| l.abs()).collect();
    schatten_from_singular(&singular, p)
}

/// Schatten p-norm of an arbitrary matrix through its singular values.
pub fn schatten_norm_general(m: &CMatrix, p: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidNormOrder { p });
    }
    let svd = m.clone().svd(false, false);
    let singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    schatten_from_singular(&singular, p)
}

fn schatten_from_singular(singular: &[f64], p: f64) -> Result<f64> {
    let s_max = singular.iter().copied().fold(0.0, f64::max);
    if s_max <= 0.0 {
        return Err(Error::EmptySupport);
    }
    let cutoff = EPS_SUPPORT * s_max;
    let sum: f64 = singular
        .iter()
        .filter(|&&s| s > cutoff)
        .map(|&s| s.powf(p))
        .sum();
    Ok(sum.powf(1.0 / p))
}

/// A d x d complex Hermitian, PSD, unit-trace quantum state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: HermitianMatrix,
}

impl DensityMatrix {
    /// Validate a raw complex matrix as a quantum state. The input is
    /// symmetrized first; each failure names the violated invariant together
    /// with the measured residual.
    pub fn new(raw: CMatrix) -> Result<Self> {
        let herm = HermitianMatrix::symmetrized(raw)?;
        Self::from_hermitian(herm)
    }

    pub fn from_hermitian(herm: HermitianMatrix) -> Result<Self> {
        let trace = herm.trace();
        if !(trace - 1.0).abs().is_finite() || (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace,
                tolerance: TRACE_TOL,
            });
        }
        let dec = spectral(&herm);
        if dec.min_eigenvalue() < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: dec.min_eigenvalue(),
                limit: PSD_TOL,
            });
        }
        Ok(Self { mat: herm })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.mat.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.mat
    }

    /// Diagonal entries (real parts; the imaginary parts are exactly zero).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix()[(i, i)].re).collect()
    }

    /// Frobenius mass of the off-diagonal block; zero exactly for incoherent
    /// states.
    pub fn offdiagonal_norm(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    acc += self.matrix()[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        frobenius_norm(&(self.matrix() - other.matrix()))
    }
}

/// Free-function entry point for state validation.
pub fn validate_state(raw: &CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(raw.clone())
}

/// A probability vector over the reference basis: an incoherent state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalState {
    probs: Vec<f64>,
}

impl DiagonalState {
    /// Requires `probs[i] >= 0` and `sum = 1` within 1e-12.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities {
                reason: "empty vector".into(),
            });
        }
        if let Some(&bad) = probs.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidProbabilities {
                reason: format!("negative or non-finite component {bad}"),
            });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbabilities {
                reason: format!("sum is {sum}, expected 1 within 1e-12"),
            });
        }
        Ok(Self { probs })
    }

    /// Rescale a nonnegative vector onto the simplex.
    pub fn normalized(mut raw: Vec<f64>) -> Result<Self> {
        if raw.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidProbabilities {
                reason: "negative or non-finite component".into(),
            });
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidProbabilities {
                reason: "vector sums to zero".into(),
            });
        }
        for x in &mut raw {
            *x /= sum;
        }
        Ok(Self { probs: raw })
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            probs: vec![1.0 / d as f64; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn to_density(&self) -> DensityMatrix {
        let herm = HermitianMatrix::from_diagonal(&self.probs);
        DensityMatrix::from_hermitian(herm).expect("simplex vector is a valid state")
    }
}
