//! State constructors and seeded samplers used across the crate and its
//! verification suites.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matops::{CMatrix, DensityMatrix, DiagonalState};

pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Pure state |psi><psi| from (not necessarily normalized) amplitudes.
pub fn pure_density(amplitudes: &[Complex64]) -> Result<DensityMatrix> {
    let d = amplitudes.len();
    let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if norm_sq <= 0.0 {
        return Err(Error::InvalidProbabilities {
            reason: "zero amplitude vector".into(),
        });
    }
    let v = DVector::from_iterator(d, amplitudes.iter().map(|a| a / norm_sq.sqrt()));
    let mat = &v * v.adjoint();
    DensityMatrix::new(mat)
}

/// Qubit state (I + c1 sx + c2 sy + c3 sz)/2; valid whenever |c| <= 1.
pub fn qubit_from_bloch(c: [f64; 3]) -> Result<DensityMatrix> {
    let [c1, c2, c3] = c;
    let mat = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + c3), 0.0),
            Complex64::new(0.5 * c1, -0.5 * c2),
            Complex64::new(0.5 * c1, 0.5 * c2),
            Complex64::new(0.5 * (1.0 - c3), 0.0),
        ],
    );
    DensityMatrix::new(mat)
}

/// Pure qubit on the Bloch sphere with the given c3, azimuth fixed so that
/// c2 = 0 and c1 >= 0.
pub fn qubit_pure_c3(c3: f64) -> Result<DensityMatrix> {
    let c1 = (1.0 - c3 * c3).max(0.0).sqrt();
    qubit_from_bloch([c1, 0.0, c3])
}

/// The maximally coherent state: all amplitudes 1/sqrt(d).
pub fn maximally_coherent(d: usize) -> DensityMatrix {
    let amp = vec![Complex64::new(1.0, 0.0); d];
    pure_density(&amp).expect("uniform amplitudes form a state")
}

/// Diagonal part of a state in the reference basis (complete dephasing).
pub fn dephased(rho: &DensityMatrix) -> DensityMatrix {
    DiagonalState::normalized(rho.diagonal().iter().map(|&x| x.max(0.0)).collect())
        .expect("state diagonal is a probability vector")
        .to_density()
}

/// Direct sum p * a  (+)  (1-p) * b in the reference basis.
pub fn block_diagonal(p: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbabilities {
            reason: format!("block weight {p} outside [0,1]"),
        });
    }
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let mut mat = CMatrix::zeros(d, d);
    for i in 0..da {
        for j in 0..da {
            mat[(i, j)] = a.matrix()[(i, j)] * p;
        }
    }
    for i in 0..db {
        for j in 0..db {
            mat[(da + i, da + j)] = b.matrix()[(i, j)] * (1.0 - p);
        }
    }
    DensityMatrix::new(mat)
}

/// Full-rank random state from the Ginibre ensemble: G G* / tr(G G*).
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    random_density_rank(d, d, rng)
}

/// Random state of rank at most `rank` (Ginibre with d x rank factor).
pub fn random_density_rank(d: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = CMatrix::from_fn(d, rank.max(1), |_, _| complex_gaussian(rng));
    let mut m = &g * g.adjoint();
    let trace: f64 = (0..d).map(|i| m[(i, i)].re).sum();
    m /= Complex64::new(trace, 0.0);
    DensityMatrix::new(m).expect("Ginibre quotient is a state")
}

/// Haar-random pure state.
pub fn random_pure(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let amp: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    pure_density(&amp).expect("Gaussian vector is nonzero")
}

/// Haar-like random unitary: QR of a Gaussian matrix with the phases of the
/// R diagonal absorbed into the columns.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniform sample from the probability simplex (Dirichlet(1,...,1)).
pub fn random_simplex(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d)
        .map(|_| {
            let u: f64 = rng.random::<f64>();
            -(u.max(f64::MIN_POSITIVE)).ln()
        })
        .collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}

/// Random diagonal (incoherent) state.
pub fn random_diagonal(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    DiagonalState::normalized(random_simplex(d, rng))
        .expect("simplex sample")
        .to_density()
}

/// Conjugate a state by a unitary: U rho U*.
pub fn conjugate(rho: &DensityMatrix, u: &CMatrix) -> DensityMatrix {
    let m = u * rho.matrix() * u.adjoint();
    DensityMatrix::new(m).expect("unitary conjugation preserves states")
}
