//! The trace functional f_{alpha,z} and the divergences built on it.
//!
//! For states rho, sigma and parameters alpha > 0 (alpha != 1), z > 0:
//!
//! ```text
//! f(rho, sigma)       = tr( sigma^((1-a)/2z) rho^(a/z) sigma^((1-a)/2z) )^z
//! renyi (log form)    = ln(f) / (a - 1)
//! generalized         = (f^(1/a) - 1) / (a - 1)
//! tsallis  (z = 1)    = (f - 1) / (a - 1)
//! ```
//!
//! All logarithms are natural. For alpha > 1 the functional is finite only
//! when supp(rho) is contained in supp(sigma); the infinite case is signaled
//! as `f64::INFINITY`, never as an error, so optimizers can treat it as an
//! infeasible objective value.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matops::{spectral, DensityMatrix, EPS_SUPPORT};

/// Tolerance used both for the z = 1 closed-form dispatch and for the
/// z-equality comparisons in regime classification.
pub const Z_EQ_TOL: f64 = 1e-12;

/// How much of tr(rho) may sit outside supp(sigma) before the alpha > 1
/// functional is declared infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-9;

/// Validated parameter pair: alpha in (0,1) or (1,inf), z > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaZ {
    alpha: f64,
    z: f64,
}

impl AlphaZ {
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        if !alpha.is_finite() || !z.is_finite() || alpha <= 0.0 || alpha == 1.0 || z <= 0.0 {
            return Err(Error::InvalidParams { alpha, z });
        }
        Ok(Self { alpha, z })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn is_z_one(&self) -> bool {
        (self.z - 1.0).abs() <= Z_EQ_TOL
    }
}

/// The four parameter regions where the induced coherence quantity is a
/// proven measure of coherence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RegimeCase {
    /// alpha in (0,1), z >= max(alpha, 1-alpha)
    A,
    /// alpha in (1,2], z = 1
    B,
    /// alpha in (1,2], z = alpha/2
    C,
    /// alpha > 1, z = alpha
    D,
}

/// Result of classifying an (alpha, z) pair. Several cases can match at once
/// (for example alpha = 2, z = 1 matches both B and C); no match means the
/// pair is outside the proven monotonicity regions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeClass {
    cases: Vec<RegimeCase>,
}

impl RegimeClass {
    pub fn cases(&self) -> &[RegimeCase] {
        &self.cases
    }

    pub fn is_proven(&self) -> bool {
        !self.cases.is_empty()
    }

    pub fn contains(&self, case: RegimeCase) -> bool {
        self.cases.contains(&case)
    }

    pub fn label(&self) -> String {
        if self.cases.is_empty() {
            "unproven".to_string()
        } else {
            self.cases
                .iter()
                .map(|c| format!("{c:?}"))
                .collect::<Vec<_>>()
                .join("+")
        }
    }
}

/// Deterministic, exhaustive classification against the four proven cases.
pub fn classify_regime(p: &AlphaZ) -> RegimeClass {
    let (a, z) = (p.alpha(), p.z());
    let mut cases = Vec::new();
    if a < 1.0 && z >= a.max(1.0 - a) - Z_EQ_TOL {
        cases.push(RegimeCase::A);
    }
    if a > 1.0 && a <= 2.0 && (z - 1.0).abs() <= Z_EQ_TOL {
        cases.push(RegimeCase::B);
    }
    if a > 1.0 && a <= 2.0 && (z - 0.5 * a).abs() <= Z_EQ_TOL {
        cases.push(RegimeCase::C);
    }
    if a > 1.0 && (z - a).abs() <= Z_EQ_TOL {
        cases.push(RegimeCase::D);
    }
    RegimeClass { cases }
}

/// tr( sigma^((1-a)/2z) rho^(a/z) sigma^((1-a)/2z) )^z via the spectral path.
///
/// Returns `f64::INFINITY` when alpha > 1 and supp(rho) leaks outside
/// supp(sigma). Eigenvalues of the composite below `EPS_SUPPORT` times its
/// largest eigenvalue are excluded from the power sum.
pub fn f_az(rho: &DensityMatrix, sigma: &DensityMatrix, p: &AlphaZ) -> f64 {
    let (a, z) = (p.alpha(), p.z());
    let sig_dec = spectral(sigma.hermitian());
    if a > 1.0 {
        let leak = 1.0 - sig_dec.support_overlap(rho.matrix());
        if leak > SUPPORT_LEAK_TOL {
            return f64::INFINITY;
        }
    }
    let s_pow = sig_dec.power((1.0 - a) / (2.0 * z));
    let r_pow = spectral(rho.hermitian()).power(a / z);
    let m = s_pow.matrix() * r_pow.matrix() * s_pow.matrix();
    let composite = crate::matops::HermitianMatrix::symmetrized(m)
        .expect("S R S of Hermitian factors is Hermitian");
    let dec = spectral(&composite);
    power_trace(dec.eigenvalues(), z)
}

/// Sum of mu_i^z over the numerically positive spectrum.
pub(crate) fn power_trace(eigenvalues: &[f64], z: f64) -> f64 {
    let mu_max = eigenvalues.iter().copied().fold(0.0, f64::max);
    if mu_max <= 0.0 {
        return 0.0;
    }
    let cutoff = EPS_SUPPORT * mu_max;
    eigenvalues
        .iter()
        .filter(|&&mu| mu > cutoff)
        .map(|&mu| mu.powf(z))
        .sum()
}

/// ln(f) / (alpha - 1); +infinity propagates.
pub fn renyi_from_f(f: f64, alpha: f64) -> f64 {
    f.ln() / (alpha - 1.0)
}

/// (f^(1/alpha) - 1) / (alpha - 1); +infinity propagates.
pub fn gen_from_f(f: f64, alpha: f64) -> f64 {
    if f.is_infinite() {
        return f64::INFINITY;
    }
    (f.powf(1.0 / alpha) - 1.0) / (alpha - 1.0)
}

/// (f - 1) / (alpha - 1); +infinity propagates.
pub fn tsallis_from_f(f: f64, alpha: f64) -> f64 {
    if f.is_infinite() {
        return f64::INFINITY;
    }
    (f - 1.0) / (alpha - 1.0)
}

/// Log-form alpha-z relative Renyi divergence.
pub fn renyi_div(rho: &DensityMatrix, sigma: &DensityMatrix, p: &AlphaZ) -> f64 {
    renyi_from_f(f_az(rho, sigma, p), p.alpha())
}

/// Generalized alpha-z divergence; nonnegative on all admissible inputs,
/// zero exactly when rho = sigma.
pub fn gen_div(rho: &DensityMatrix, sigma: &DensityMatrix, p: &AlphaZ) -> f64 {
    gen_from_f(f_az(rho, sigma, p), p.alpha())
}

/// Tsallis relative alpha entropy (the z = 1 member), alpha in (0,1) or (1,2].
pub fn tsallis_div(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha == 1.0 || alpha > 2.0 {
        return Err(Error::InvalidAlpha { alpha });
    }
    let p = AlphaZ::new(alpha, 1.0)?;
    Ok(tsallis_from_f(f_az(rho, sigma, &p), alpha))
}

/// Ordering report for the two-sided unit bound on f and its equality case.
#[derive(Clone, Debug, Serialize)]
pub struct UnitBoundReport {
    pub f: f64,
    /// Amount by which f crosses 1 on the forbidden side (0 when the bound holds).
    pub bound_violation: f64,
    pub bound_holds: bool,
    /// |f - 1| < 1e-9
    pub f_equals_one: bool,
    /// ||rho - sigma||_F < 1e-8
    pub states_equal: bool,
    /// The equality characterization: f = 1 exactly when the states coincide.
    pub consistent: bool,
}

pub fn unit_bound_check(rho: &DensityMatrix, sigma: &DensityMatrix, p: &AlphaZ) -> UnitBoundReport {
    let f = f_az(rho, sigma, p);
    let bound_violation = if p.alpha() < 1.0 {
        (f - 1.0).max(0.0)
    } else if f.is_infinite() {
        0.0
    } else {
        (1.0 - f).max(0.0)
    };
    let bound_holds = bound_violation <= 1e-9;
    let f_equals_one = (f - 1.0).abs() < 1e-9;
    let states_equal = rho.frobenius_distance(sigma) < 1e-8;
    UnitBoundReport {
        f,
        bound_violation,
        bound_holds,
        f_equals_one,
        states_equal,
        consistent: f_equals_one == states_equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::{DensityMatrix, DiagonalState};
    use crate::states;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(d: usize) -> DensityMatrix {
        DiagonalState::uniform(d).to_density()
    }

    #[test]
    fn alpha_z_validation() {
        assert!(AlphaZ::new(0.5, 1.0).is_ok());
        assert!(AlphaZ::new(1.0, 1.0).is_err());
        assert!(AlphaZ::new(0.5, 0.0).is_err());
        assert!(AlphaZ::new(-0.5, 1.0).is_err());
        assert!(AlphaZ::new(0.5, -2.0).is_err());
    }

    #[test]
    fn f_is_one_on_equal_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in [2usize, 3, 4] {
            let rho = states::random_density(d, &mut rng);
            for (a, z) in [(0.5, 1.0), (0.3, 0.5), (2.0, 1.0), (1.5, 0.75), (3.0, 3.0)] {
                let p = AlphaZ::new(a, z).unwrap();
                let f = f_az(&rho, &rho, &p);
                assert!((f - 1.0).abs() < 1e-10, "a={a} z={z} f={f}");
            }
        }
    }

    #[test]
    fn f_pure_vs_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2usize, 3, 5] {
            let rho = states::random_pure(d, &mut rng);
            for (a, z) in [(0.5, 1.0), (0.5, 2.0), (2.0, 1.0), (1.5, 1.5)] {
                let p = AlphaZ::new(a, z).unwrap();
                let f = f_az(&rho, &uniform(d), &p);
                let expected = (d as f64).powf(a - 1.0);
                assert!(
                    (f - expected).abs() < 1e-10,
                    "d={d} a={a} z={z}: f={f} expected={expected}"
                );
            }
        }
    }

    #[test]
    fn f_half_one_grid_maximum_is_inverse_sqrt_two() {
        // Independent oracle: dense grid over diagonal states for |+><+|.
        let plus = states::qubit_pure_c3(0.0).unwrap();
        let p = AlphaZ::new(0.5, 1.0).unwrap();
        let mut best = f64::NEG_INFINITY;
        let steps = 1000;
        for i in 0..=steps {
            let q = i as f64 / steps as f64;
            let sigma = DiagonalState::new(vec![q, 1.0 - q]).unwrap().to_density();
            best = best.max(f_az(&plus, &sigma, &p));
        }
        assert!(
            (best - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6,
            "grid max f = {best}"
        );
    }

    #[test]
    fn renyi_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let rho = states::random_density(3, &mut rng);
        let p = AlphaZ::new(0.5, 1.0).unwrap();
        assert!(renyi_div(&rho, &rho, &p).abs() < 1e-10);

        let pure = states::random_pure(4, &mut rng);
        for (a, z) in [(0.5, 1.0), (2.0, 2.0), (1.5, 0.75)] {
            let p = AlphaZ::new(a, z).unwrap();
            let dv = renyi_div(&pure, &uniform(4), &p);
            assert!((dv - 4.0f64.ln()).abs() < 1e-9, "a={a} z={z} D={dv}");
        }

        // Commuting-case scalar oracle: f = sum_k rho_kk^a sigma_kk^(1-a).
        let rho = DiagonalState::new(vec![0.9, 0.1]).unwrap().to_density();
        let sig = DiagonalState::new(vec![0.5, 0.5]).unwrap().to_density();
        let p = AlphaZ::new(2.0, 1.0).unwrap();
        let f = f_az(&rho, &sig, &p);
        assert!((f - 1.64).abs() < 1e-12, "f = {f}");
        assert!((renyi_div(&rho, &sig, &p) - 1.64f64.ln()).abs() < 1e-12);
        assert!((renyi_div(&rho, &sig, &p) - 0.4946962418361073).abs() < 1e-12);
    }

    #[test]
    fn gen_div_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rho = states::random_density(2, &mut rng);
        let p = AlphaZ::new(0.5, 1.0).unwrap();
        assert!(gen_div(&rho, &rho, &p).abs() < 1e-10);

        // |+><+| against the maximally mixed state: f = 1/sqrt(2), value 1.
        let plus = states::qubit_pure_c3(0.0).unwrap();
        let f = f_az(&plus, &uniform(2), &p);
        assert!((f - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((gen_div(&plus, &uniform(2), &p) - 1.0).abs() < 1e-12);

        let p2 = AlphaZ::new(2.0, 1.0).unwrap();
        assert!(gen_div(&uniform(2), &uniform(2), &p2).abs() < 1e-12);
    }

    #[test]
    fn tsallis_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let rho = states::random_density(3, &mut rng);
        assert!(tsallis_div(&rho, &rho, 0.7).unwrap().abs() < 1e-10);

        let rho = DiagonalState::new(vec![0.9, 0.1]).unwrap().to_density();
        let sig = DiagonalState::new(vec![0.5, 0.5]).unwrap().to_density();
        assert!((tsallis_div(&rho, &sig, 2.0).unwrap() - 0.64).abs() < 1e-12);

        let plus = states::qubit_pure_c3(0.0).unwrap();
        let expected = 0.5857864376269049; // 2 (1 - 1/sqrt(2))
        assert!((tsallis_div(&plus, &uniform(2), 0.5).unwrap() - expected).abs() < 1e-12);

        assert!(tsallis_div(&rho, &sig, 2.5).is_err());
    }

    #[test]
    fn divergences_share_the_same_f_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let rho = states::random_density(3, &mut rng);
        let sig = states::random_density(3, &mut rng);
        for (a, z) in [(0.5, 1.0), (2.0, 1.0), (0.7, 2.0)] {
            let p = AlphaZ::new(a, z).unwrap();
            let f = f_az(&rho, &sig, &p);
            assert_eq!(renyi_div(&rho, &sig, &p).to_bits(), renyi_from_f(f, a).to_bits());
            assert_eq!(gen_div(&rho, &sig, &p).to_bits(), gen_from_f(f, a).to_bits());
            if (z - 1.0).abs() <= Z_EQ_TOL && a <= 2.0 {
                assert_eq!(
                    tsallis_div(&rho, &sig, a).unwrap().to_bits(),
                    tsallis_from_f(f, a).to_bits()
                );
            }
        }
    }

    #[test]
    fn infinite_when_support_leaks_for_alpha_above_one() {
        let rho = DiagonalState::new(vec![1.0, 0.0]).unwrap().to_density();
        let sig = DiagonalState::new(vec![0.0, 1.0]).unwrap().to_density();
        let p = AlphaZ::new(2.0, 1.0).unwrap();
        assert!(f_az(&rho, &sig, &p).is_infinite());
        assert!(gen_div(&rho, &sig, &p).is_infinite());
        assert!(renyi_div(&rho, &sig, &p).is_infinite());

        // alpha < 1 with disjoint supports: f = 0, generalized divergence finite.
        let p = AlphaZ::new(0.5, 1.0).unwrap();
        let f = f_az(&rho, &sig, &p);
        assert_eq!(f, 0.0);
        assert!((gen_div(&rho, &sig, &p) - 2.0).abs() < 1e-12);
        assert!(renyi_div(&rho, &sig, &p).is_infinite());
    }

    #[test]
    fn unit_bounds_strict_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let p_low = AlphaZ::new(0.5, 1.0).unwrap();
        for _ in 0..100 {
            let rho = states::random_density(3, &mut rng);
            let sig = states::random_density(3, &mut rng);
            if rho.frobenius_distance(&sig) <= 1e-3 {
                continue;
            }
            let rep = unit_bound_check(&rho, &sig, &p_low);
            assert!(rep.f < 1.0 - 1e-12, "f = {} not strictly below 1", rep.f);
            assert!(rep.bound_holds && rep.consistent);
        }
        let p_high = AlphaZ::new(2.0, 2.0).unwrap();
        for _ in 0..100 {
            let rho = states::random_density(3, &mut rng);
            let sig = states::random_density(3, &mut rng);
            if rho.frobenius_distance(&sig) <= 1e-3 {
                continue;
            }
            let rep = unit_bound_check(&rho, &sig, &p_high);
            assert!(rep.f > 1.0 + 1e-12, "f = {} not strictly above 1", rep.f);
            assert!(rep.bound_holds && rep.consistent);
        }
        // Equal states sit exactly at 1.
        let rho = states::random_density(3, &mut rng);
        let rep = unit_bound_check(&rho, &rho, &p_low);
        assert!(rep.f_equals_one && rep.states_equal && rep.consistent);
    }

    #[test]
    fn classify_regime_cases() {
        let class = classify_regime(&AlphaZ::new(0.5, 1.0).unwrap());
        assert_eq!(class.cases(), &[RegimeCase::A]);

        let class = classify_regime(&AlphaZ::new(2.0, 1.0).unwrap());
        assert!(class.contains(RegimeCase::B));
        // z = alpha/2 = 1 also matches at alpha = 2.
        assert!(class.contains(RegimeCase::C));
        assert_eq!(class.label(), "B+C");

        let class = classify_regime(&AlphaZ::new(3.0, 0.7).unwrap());
        assert!(!class.is_proven());
        assert_eq!(class.label(), "unproven");

        assert!(classify_regime(&AlphaZ::new(3.0, 3.0).unwrap()).contains(RegimeCase::D));
        assert!(classify_regime(&AlphaZ::new(1.5, 0.75).unwrap()).contains(RegimeCase::C));
        assert!(!classify_regime(&AlphaZ::new(0.3, 0.4).unwrap()).is_proven());
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let rho = states::random_density(3, &mut rng);
            let sig = states::random_density(3, &mut rng);
            let u = states::random_unitary(3, &mut rng);
            for (a, z) in [(0.5, 1.0), (2.0, 2.0), (0.7, 0.7)] {
                let p = AlphaZ::new(a, z).unwrap();
                let lhs = f_az(
                    &states::conjugate(&rho, &u),
                    &states::conjugate(&sig, &u),
                    &p,
                );
                let rhs = f_az(&rho, &sig, &p);
                assert!((lhs - rhs).abs() < 1e-9, "a={a} z={z}: {lhs} vs {rhs}");
            }
        }
    }

    fn tempered_diagonal(d: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        // Keep entries bounded below so no eigenvalue of the composite falls
        // under the support cutoff: the identity is then exact.
        let raw = states::random_simplex(d, rng);
        let probs: Vec<f64> = raw.iter().map(|&x| 0.5 * x + 0.5 / d as f64).collect();
        DiagonalState::new(probs).unwrap().to_density()
    }

    #[test]
    fn commuting_reduction_is_z_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..20 {
            let rho = tempered_diagonal(4, &mut rng);
            let sig = tempered_diagonal(4, &mut rng);
            let a = 0.3 + 1.5 * rng.random::<f64>();
            let a = if (a - 1.0).abs() < 0.1 { 1.3 } else { a };
            let scalar: f64 = rho
                .diagonal()
                .iter()
                .zip(sig.diagonal().iter())
                .map(|(&r, &s)| r.powf(a) * s.powf(1.0 - a))
                .sum();
            for z in [0.3, 1.0, 2.7] {
                let p = AlphaZ::new(a, z).unwrap();
                let f = f_az(&rho, &sig, &p);
                assert!((f - scalar).abs() < 1e-10, "a={a} z={z}: {f} vs {scalar}");
            }
        }
    }
}
