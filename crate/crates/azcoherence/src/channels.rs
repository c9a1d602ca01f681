//! Quantum channels in Kraus form, incoherent-channel sampling, and the
//! axiom suite that exercises a coherence functional against the standard
//! resource-theory postulates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matops::{frobenius_norm, CMatrix, DensityMatrix};
use crate::statefile::StateFile;
use crate::states;

/// Frobenius tolerance on `sum_n K_n* K_n = I`.
pub const TRACE_PRESERVING_TOL: f64 = 1e-10;
/// Selective outcomes with probability below this are dropped.
pub const OUTCOME_PROB_FLOOR: f64 = 1e-12;

/// A CPTP map given by Kraus operators. When flagged incoherent, every
/// operator has at most one nonzero entry per column, which guarantees that
/// diagonal states map to diagonal states.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    incoherent: bool,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>, incoherent: bool) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::NotTracePreserving { residual: 1.0 });
        }
        let (d_out, d_in) = kraus[0].shape();
        for k in &kraus {
            if k.shape() != (d_out, d_in) {
                return Err(Error::DimensionMismatch {
                    expected: d_in,
                    got: k.ncols(),
                });
            }
        }
        let mut gram = CMatrix::zeros(d_in, d_in);
        for k in &kraus {
            gram += k.adjoint() * k;
        }
        let residual = frobenius_norm(&(gram - CMatrix::identity(d_in, d_in)));
        if residual > TRACE_PRESERVING_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        if incoherent {
            for (index, k) in kraus.iter().enumerate() {
                let scale = k.iter().map(|z| z.norm()).fold(0.0, f64::max);
                for column in 0..d_in {
                    let nonzero = (0..d_out)
                        .filter(|&r| k[(r, column)].norm() > 1e-12 * scale.max(1e-300))
                        .count();
                    if nonzero > 1 {
                        return Err(Error::NotIncoherentKraus { index, column });
                    }
                }
            }
        }
        Ok(Self { kraus, incoherent })
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn is_incoherent(&self) -> bool {
        self.incoherent
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// The identity channel on dimension d.
    pub fn identity(d: usize) -> Self {
        Self::new(vec![CMatrix::identity(d, d)], true).expect("identity is a channel")
    }

    /// The completely dephasing channel with Kraus operators |i><i|.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| {
                let mut k = CMatrix::zeros(d, d);
                k[(i, i)] = Complex64::new(1.0, 0.0);
                k
            })
            .collect();
        Self::new(kraus, true).expect("dephasing is a channel")
    }

    /// Unitary relabeling of the reference basis.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut seen = vec![false; d];
        for &p in perm {
            if p >= d || seen[p] {
                return Err(Error::InvalidProbabilities {
                    reason: "not a permutation".into(),
                });
            }
            seen[p] = true;
        }
        let mut k = CMatrix::zeros(d, d);
        for (j, &p) in perm.iter().enumerate() {
            k[(p, j)] = Complex64::new(1.0, 0.0);
        }
        Self::new(vec![k], true)
    }

    /// Apply the channel: sum_n K_n rho K_n*. The output is revalidated.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: rho.dim(),
            });
        }
        let d_out = self.output_dim();
        let mut out = CMatrix::zeros(d_out, d_out);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        DensityMatrix::new(out)
    }

    /// Per-outcome post-measurement states with their probabilities
    /// p_n = tr(K_n rho K_n*); outcomes below the probability floor are
    /// dropped.
    pub fn selective_outcomes(&self, rho: &DensityMatrix) -> Result<Vec<SelectiveOutcome>> {
        if rho.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: rho.dim(),
            });
        }
        let mut outcomes = Vec::new();
        for k in &self.kraus {
            let raw = k * rho.matrix() * k.adjoint();
            let prob: f64 = (0..raw.nrows()).map(|i| raw[(i, i)].re).sum();
            if prob < OUTCOME_PROB_FLOOR {
                continue;
            }
            let state = DensityMatrix::new(raw / Complex64::new(prob, 0.0))?;
            outcomes.push(SelectiveOutcome { prob, state });
        }
        Ok(outcomes)
    }
}

#[derive(Clone, Debug)]
pub struct SelectiveOutcome {
    pub prob: f64,
    pub state: DensityMatrix,
}

/// Sample an incoherent channel with `m` Kraus operators on dimension `d`.
///
/// Each Kraus operator is K_n = sum_j a_{n,j} |f_n(j)><j| for a column map
/// f_n and complex amplitudes a. Columns are normalized so that
/// sum_n |a_{n,j}|^2 = 1; where two columns collide on a target row the
/// amplitude vectors are orthogonalized over the colliding Kraus indices so
/// that sum_n K_n* K_n = I holds exactly. With m = 1 the column map is a
/// permutation and every amplitude has unit modulus.
pub fn sample_incoherent(d: usize, m: usize, seed: u64) -> KrausChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets = vec![vec![0usize; d]; m];
    let mut amps = vec![vec![Complex64::new(0.0, 0.0); d]; m];

    if m == 1 {
        let mut perm: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        for j in 0..d {
            targets[0][j] = perm[j];
            let a = states::complex_gaussian(&mut rng);
            amps[0][j] = a / a.norm();
        }
    } else {
        for j in 0..d {
            let mut accepted = false;
            for _attempt in 0..32 {
                let cand: Vec<usize> = (0..m).map(|_| rng.random_range(0..d)).collect();
                let mut col: Vec<Complex64> =
                    (0..m).map(|_| states::complex_gaussian(&mut rng)).collect();
                if orthogonalize_column(&mut col, &cand, &targets, &amps, j) {
                    for n in 0..m {
                        targets[n][j] = cand[n];
                        amps[n][j] = col[n];
                    }
                    accepted = true;
                    break;
                }
            }
            if !accepted {
                // Collision-free fallback: give column j a target unused by
                // the previous columns in every Kraus slot.
                for target_row in targets.iter_mut() {
                    let used = &target_row[..j];
                    let free: Vec<usize> = (0..d).filter(|t| !used.contains(t)).collect();
                    target_row[j] = free[rng.random_range(0..free.len())];
                }
                let col: Vec<Complex64> =
                    (0..m).map(|_| states::complex_gaussian(&mut rng)).collect();
                let norm = col.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                for n in 0..m {
                    amps[n][j] = col[n] / norm;
                }
            }
        }
    }

    let kraus: Vec<CMatrix> = (0..m)
        .map(|n| {
            let mut k = CMatrix::zeros(d, d);
            for j in 0..d {
                k[(targets[n][j], j)] += amps[n][j];
            }
            k
        })
        .collect();
    KrausChannel::new(kraus, true).expect("sampled incoherent channel is trace preserving")
}

/// Orthogonalize the candidate amplitude column against every earlier column
/// it collides with, then normalize. Returns false when the projection
/// leaves nothing usable.
fn orthogonalize_column(
    col: &mut [Complex64],
    cand_targets: &[usize],
    targets: &[Vec<usize>],
    amps: &[Vec<Complex64>],
    j: usize,
) -> bool {
    let m = col.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for jp in 0..j {
        let mut w: Vec<Complex64> = (0..m)
            .map(|n| {
                if targets[n][jp] == cand_targets[n] {
                    amps[n][jp]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        // Gram-Schmidt the constraint vectors among themselves.
        for b in &basis {
            let inner: Complex64 = b.iter().zip(w.iter()).map(|(bi, wi)| bi.conj() * wi).sum();
            for n in 0..m {
                w[n] -= inner * b[n];
            }
        }
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in &mut w {
                *x /= norm;
            }
            basis.push(w);
        }
    }
    for b in &basis {
        let inner: Complex64 = b.iter().zip(col.iter()).map(|(bi, ci)| bi.conj() * ci).sum();
        for n in 0..m {
            col[n] -= inner * b[n];
        }
    }
    let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-6 {
        return false;
    }
    for x in col.iter_mut() {
        *x /= norm;
    }
    true
}

/// Sample a general CPTP channel: a Haar-like isometry from d to d*m (QR of
/// a complex Gaussian matrix) sliced into m Kraus blocks. m = 1 gives a
/// random unitary channel.
pub fn sample_cptp(d: usize, m: usize, seed: u64) -> KrausChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(d * m, d, |_, _| states::complex_gaussian(&mut rng));
    let q = g.qr().q();
    let kraus: Vec<CMatrix> = (0..m).map(|n| q.rows(n * d, d).into_owned()).collect();
    KrausChannel::new(kraus, false).expect("isometry blocks are trace preserving")
}

/// Worst observed violation of one postulate, with the state that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub max_violation: f64,
    pub worst_state: Option<StateFile>,
}

impl AxiomCheck {
    fn new() -> Self {
        Self {
            max_violation: f64::NEG_INFINITY,
            worst_state: None,
        }
    }

    fn update(&mut self, violation: f64, state: &DensityMatrix) {
        if violation > self.max_violation {
            self.max_violation = violation;
            self.worst_state = Some(StateFile::from_density(state));
        }
    }
}

/// Violations observed by [`axiom_suite`]; all quantities are "how far on
/// the wrong side", so a sound measure keeps every entry at numerical-noise
/// scale. Violations are data, not errors.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    /// max(-C(rho), |C(dephased rho)|)
    pub c1: AxiomCheck,
    /// Coherent inputs (off-diagonal mass > 1e-8) that scored C <= 1e-9.
    pub c1_faithfulness_failures: usize,
    /// C(Lambda_I(rho)) - C(rho)
    pub c2: AxiomCheck,
    /// C(sum p_n rho_n) - sum p_n C(rho_n)
    pub c3: AxiomCheck,
    /// sum p_n C(outcome_n) - C(rho)
    pub c4: AxiomCheck,
    /// |C(p rho1 + (1-p) rho2 block-diagonal) - p C(rho1) - (1-p) C(rho2)|
    pub additivity: AxiomCheck,
}

impl AxiomReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.c1.max_violation,
            self.c2.max_violation,
            self.c3.max_violation,
            self.c4.max_violation,
            self.additivity.max_violation,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Run `trials` randomized checks of the postulates C1-C4 and block
/// additivity against an arbitrary coherence functional. Trial dimensions
/// cycle through `dims`; additivity always uses a 2 (+) 2 block state.
pub fn axiom_suite<F>(measure: F, trials: usize, seed: u64, dims: &[usize]) -> Result<AxiomReport>
where
    F: Fn(&DensityMatrix) -> Result<f64>,
{
    assert!(!dims.is_empty(), "need at least one trial dimension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport {
        trials,
        c1: AxiomCheck::new(),
        c1_faithfulness_failures: 0,
        c2: AxiomCheck::new(),
        c3: AxiomCheck::new(),
        c4: AxiomCheck::new(),
        additivity: AxiomCheck::new(),
    };
    for trial in 0..trials {
        let d = dims[trial % dims.len()];
        let rho = states::random_density(d, &mut rng);
        let c_rho = measure(&rho)?;

        // C1: nonnegative, zero on incoherent states, positive on coherent.
        let dephased = states::dephased(&rho);
        let c_deph = measure(&dephased)?;
        report.c1.update((-c_rho).max(c_deph.abs()), &rho);
        if rho.offdiagonal_norm() > 1e-8 && c_rho <= 1e-9 {
            report.c1_faithfulness_failures += 1;
        }

        // C2: monotone under an incoherent operation.
        let channel = sample_incoherent(d, rng.random_range(1..=3), rng.random());
        let mapped = channel.apply(&rho)?;
        report.c2.update(measure(&mapped)? - c_rho, &rho);

        // C3: convex in the state.
        let k = rng.random_range(2..=4usize);
        let members: Vec<DensityMatrix> =
            (0..k).map(|_| states::random_density(d, &mut rng)).collect();
        let weights = states::random_simplex(k, &mut rng);
        let mut mixture = CMatrix::zeros(d, d);
        for (w, member) in weights.iter().zip(&members) {
            mixture += member.matrix() * Complex64::new(*w, 0.0);
        }
        let mixture = DensityMatrix::new(mixture)?;
        let avg: f64 = weights
            .iter()
            .zip(&members)
            .map(|(w, member)| Ok(w * measure(member)?))
            .collect::<Result<Vec<f64>>>()?
            .iter()
            .sum();
        report.c3.update(measure(&mixture)? - avg, &mixture);

        // C4: monotone on average under selective incoherent operations.
        let channel = sample_incoherent(d, rng.random_range(2..=3), rng.random());
        let mut avg_out = 0.0;
        for outcome in channel.selective_outcomes(&rho)? {
            avg_out += outcome.prob * measure(&outcome.state)?;
        }
        report.c4.update(avg_out - c_rho, &rho);

        // Block additivity on a directly constructed block-diagonal state.
        let rho1 = states::random_density(2, &mut rng);
        let rho2 = states::random_density(2, &mut rng);
        let weight: f64 = rng.random();
        let block = states::block_diagonal(weight, &rho1, &rho2)?;
        let split = weight * measure(&rho1)? + (1.0 - weight) * measure(&rho2)?;
        report
            .additivity
            .update((measure(&block)? - split).abs(), &block);
    }
    Ok(report)
}
