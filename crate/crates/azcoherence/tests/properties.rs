//! Cross-module invariants: matrix-power algebra, Hoelder inequalities on
//! Schatten norms, faithfulness of the measure, closed-form optimality,
//! permutation covariance, and block additivity.

use azcoherence::channels::{axiom_suite, KrausChannel};
use azcoherence::coherence::closed_z1_value_unchecked;
use azcoherence::matops::{frobenius_norm, schatten_norm_general, CMatrix, HermitianMatrix};
use azcoherence::states;
use azcoherence::{
    coherence_with, gen_div, matpow, minimize, schatten_norm, spectral, AlphaZ, DensityMatrix,
    DiagonalState, EvalMethod, OptimizerConfig,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_psd(d: usize, rank: usize, scale: f64, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = CMatrix::from_fn(d, rank, |_, _| states::complex_gaussian(rng));
    let m = &g * g.adjoint() * Complex64::new(scale, 0.0);
    HermitianMatrix::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matpow_semigroup_on_full_rank(seed in 0u64..1_000_000, si in 0usize..4, ti in 0usize..4) {
        let exps = [0.25, 0.5, 1.0, 2.0];
        let (s, t) = (exps[si], exps[ti]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_psd(3, 3, 1.0, &mut rng);
        let first = matpow(&a, s).unwrap();
        let chained = matpow(&first, t).unwrap();
        let direct = matpow(&a, s * t).unwrap();
        let err = frobenius_norm(&(chained.matrix() - direct.matrix()));
        prop_assert!(err <= 1e-8, "semigroup error {err} for s={s}, t={t}");
    }

    #[test]
    fn matpow_commutes_with_base(seed in 0u64..1_000_000, ti in 0usize..4) {
        let exps = [0.25, 0.5, 1.0, 2.0];
        let t = exps[ti];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_psd(3, 3, 1.0, &mut rng);
        let p = matpow(&a, t).unwrap();
        let comm = a.matrix() * p.matrix() - p.matrix() * a.matrix();
        prop_assert!(frobenius_norm(&comm) <= 1e-9);
    }

    #[test]
    fn support_inverse_gives_projector(seed in 0u64..1_000_000, deficient in proptest::bool::ANY) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = if deficient { 2 } else { 4 };
        let a = random_psd(4, rank, 1.0, &mut rng);
        let inv = matpow(&a, -1.0).unwrap();
        let prod = inv.matrix() * a.matrix();
        let projector = spectral(&a).apply_on_support(|_| 1.0);
        let err = frobenius_norm(&(prod - projector.matrix()));
        prop_assert!(err <= 1e-8, "inverse-times-base error {err}");
        if !deficient {
            let id = CMatrix::identity(4, 4);
            prop_assert!(frobenius_norm(&(inv.matrix() * a.matrix() - id)) <= 1e-8);
        }
    }

    #[test]
    fn hoelder_inequality(seed in 0u64..1_000_000, p1x in 0.5f64..4.0, p2x in 0.5f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x1 = random_psd(3, 3, 0.7, &mut rng);
        let x2 = random_psd(3, 3, 1.3, &mut rng);
        let r = 1.0 / (1.0 / p1x + 1.0 / p2x);
        let lhs = schatten_norm_general(&(x1.matrix() * x2.matrix()), r).unwrap();
        let rhs = schatten_norm(&x1, p1x).unwrap() * schatten_norm(&x2, p2x).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "Hoelder violated: {lhs} > {rhs}");
    }

    #[test]
    fn reverse_hoelder_inequality(seed in 0u64..1_000_000, p1 in 0.5f64..2.0, extra in 0.5f64..3.0) {
        // Exactly one norm order positive: p1 > 0, p2 < 0 with 1/r = 1/p1 + 1/p2 > 0.
        let p2 = -(p1 + extra);
        let r = 1.0 / (1.0 / p1 + 1.0 / p2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x1 = random_psd(3, 3, 0.9, &mut rng);
        let x2 = random_psd(3, 3, 1.1, &mut rng);
        let lhs = schatten_norm_general(&(x1.matrix() * x2.matrix()), r).unwrap();
        let rhs = schatten_norm(&x1, p1).unwrap() * schatten_norm(&x2, p2).unwrap();
        prop_assert!(lhs >= rhs - 1e-9, "reverse Hoelder violated: {lhs} < {rhs}");
    }
}

/// Faithfulness across one representative parameter pair per proven case:
/// zero exactly on diagonal states, strictly positive on coherent ones.
#[test]
fn faithfulness_per_regime_case() {
    let cases = [
        (0.5, 1.0),  // A, closed form
        (1.5, 1.0),  // B, closed form
        (1.5, 0.75), // C, numeric
        (2.0, 2.0),  // D, numeric
    ];
    let cfg = OptimizerConfig::fast(2024);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (alpha, z) in cases {
        let p = AlphaZ::new(alpha, z).unwrap();
        for trial in 0..500 {
            let d = 2 + trial % 3;
            let (rho, expect_zero) = if trial % 2 == 0 {
                (states::random_density(d, &mut rng), false)
            } else {
                (states::random_diagonal(d, &mut rng), true)
            };
            let value = coherence_with(&rho, &p, EvalMethod::Auto, &cfg)
                .unwrap()
                .value;
            let diagonal = rho.offdiagonal_norm() <= 1e-8;
            assert_eq!(diagonal, expect_zero);
            if diagonal {
                assert!(
                    value.abs() <= 1e-9,
                    "a={alpha} z={z} trial={trial}: C(diagonal) = {value}"
                );
            } else {
                assert!(
                    value > 1e-9,
                    "a={alpha} z={z} trial={trial}: C(coherent) = {value}"
                );
            }
        }
    }
}

/// The numeric optimizer started from random simplex points never beats the
/// closed form by more than tolerance, and the closed-form sigma attains the
/// closed-form value.
#[test]
fn closed_form_is_optimal_at_z_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for trial in 0..50 {
        let d = 2 + trial % 4;
        let alpha = [0.3, 0.5, 0.8, 1.5, 2.0][trial % 5];
        let rho = states::random_density(d, &mut rng);
        let p = AlphaZ::new(alpha, 1.0).unwrap();
        let (closed_value, sigma) = closed_z1_value_unchecked(&rho, alpha);

        let numeric = minimize(&rho, &p, &OptimizerConfig::with_seed(trial as u64)).value;
        assert!(
            numeric >= closed_value - 1e-7,
            "numeric {numeric} beat closed {closed_value}"
        );
        assert!(
            (numeric - closed_value).abs() <= 1e-6,
            "numeric {numeric} vs closed {closed_value}"
        );

        let at_sigma = gen_div(
            &rho,
            &DiagonalState::normalized(sigma).unwrap().to_density(),
            &p,
        );
        assert!(
            (at_sigma - closed_value).abs() <= 1e-10,
            "divergence at sigma* {at_sigma} vs closed {closed_value}"
        );
    }
}

/// C never exceeds the maximally coherent value at z = 1.
#[test]
fn upper_bound_by_maximally_coherent_state() {
    use azcoherence::max_coherent_value;
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for d in [2usize, 3, 4, 5] {
        for alpha in [0.3, 0.5, 0.8, 1.5, 2.0] {
            let bound = max_coherent_value(d, alpha).unwrap();
            for _ in 0..200 {
                let rho = states::random_density(d, &mut rng);
                let c = azcoherence::coherence_closed_z1(&rho, alpha).unwrap().value;
                assert!(
                    c <= bound + 1e-9,
                    "d={d} alpha={alpha}: C = {c} exceeds bound {bound}"
                );
            }
        }
    }
}

/// Relabeling the reference basis leaves the measure unchanged.
#[test]
fn permutation_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    for trial in 0..20 {
        let d = 3 + trial % 2;
        let rho = states::random_density(d, &mut rng);
        let mut perm: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let permuted = KrausChannel::permutation(&perm).unwrap().apply(&rho).unwrap();

        // Closed form at z = 1: exact covariance.
        for alpha in [0.5, 1.5] {
            let a = azcoherence::coherence_closed_z1(&rho, alpha).unwrap().value;
            let b = azcoherence::coherence_closed_z1(&permuted, alpha).unwrap().value;
            assert!((a - b).abs() <= 1e-9, "closed covariance: {a} vs {b}");
        }

        // Numeric path: equal within optimizer tolerance.
        let p = AlphaZ::new(0.5, 2.0).unwrap();
        let cfg = OptimizerConfig::fast(trial as u64);
        let a = coherence_with(&rho, &p, EvalMethod::Numeric, &cfg).unwrap().value;
        let b = coherence_with(&permuted, &p, EvalMethod::Numeric, &cfg)
            .unwrap()
            .value;
        assert!((a - b).abs() <= 1e-6, "numeric covariance: {a} vs {b}");
    }
}

/// Additivity for two and three diagonal blocks; the three-block state is
/// composed by nesting the two-block construction.
#[test]
fn block_additivity_two_and_three_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let p_num = AlphaZ::new(2.0, 2.0).unwrap();
    let cfg = OptimizerConfig::fast(5);
    for trial in 0..5 {
        let rho1 = states::random_density(2, &mut rng);
        let rho2 = states::random_density(2, &mut rng);
        let w: f64 = rng.random();
        let block = states::block_diagonal(w, &rho1, &rho2).unwrap();

        let whole = coherence_with(&block, &p_num, EvalMethod::Numeric, &cfg)
            .unwrap()
            .value;
        let parts = w
            * coherence_with(&rho1, &p_num, EvalMethod::Numeric, &cfg)
                .unwrap()
                .value
            + (1.0 - w)
                * coherence_with(&rho2, &p_num, EvalMethod::Numeric, &cfg)
                    .unwrap()
                    .value;
        assert!(
            (whole - parts).abs() <= 1e-6,
            "trial {trial}: two-block additivity {whole} vs {parts}"
        );
    }

    // Three blocks, closed form (z = 1) and one numeric spot check.
    for trial in 0..5 {
        let blocks: Vec<DensityMatrix> =
            (0..3).map(|_| states::random_density(2, &mut rng)).collect();
        let w = states::random_simplex(3, &mut rng);
        let inner_weight = w[1] / (w[1] + w[2]);
        let inner = states::block_diagonal(inner_weight, &blocks[1], &blocks[2]).unwrap();
        let whole_state = states::block_diagonal(w[0], &blocks[0], &inner).unwrap();

        let alpha = 1.5;
        let whole = azcoherence::coherence_closed_z1(&whole_state, alpha).unwrap().value;
        let parts: f64 = w
            .iter()
            .zip(&blocks)
            .map(|(wi, b)| wi * azcoherence::coherence_closed_z1(b, alpha).unwrap().value)
            .sum();
        assert!(
            (whole - parts).abs() <= 1e-9,
            "trial {trial}: three-block closed additivity {whole} vs {parts}"
        );

        if trial < 2 {
            let whole_n = coherence_with(&whole_state, &p_num, EvalMethod::Numeric, &cfg)
                .unwrap()
                .value;
            let parts_n: f64 = w
                .iter()
                .zip(&blocks)
                .map(|(wi, b)| {
                    wi * coherence_with(b, &p_num, EvalMethod::Numeric, &cfg)
                        .unwrap()
                        .value
                })
                .sum();
            assert!(
                (whole_n - parts_n).abs() <= 1e-6,
                "three-block numeric additivity {whole_n} vs {parts_n}"
            );
        }
    }
}

/// Minimizing the raw Tsallis divergence (no 1/alpha compression) yields a
/// quantity known to fail strong monotonicity; the suite records whatever it
/// observes instead of asserting soundness.
#[test]
fn tsallis_raw_measure_is_recorded_not_asserted() {
    let alpha = 1.8;
    let p = AlphaZ::new(alpha, 1.0).unwrap();
    let measure = |rho: &DensityMatrix| -> azcoherence::Result<f64> {
        // min over diagonal sigma of (f - 1)/(alpha - 1); the optimum of f is
        // the same as for the compressed form, so reuse the closed-form sigma.
        let (_, sigma) = closed_z1_value_unchecked(rho, alpha);
        let sigma = DiagonalState::normalized(sigma)?.to_density();
        let f = azcoherence::f_az(rho, &sigma, &p);
        Ok(azcoherence::divergence::tsallis_from_f(f, alpha))
    };
    let report = axiom_suite(measure, 100, 404, &[2, 3]).unwrap();
    // C1 and C2 hold for this measure; C4 is the documented failure mode, so
    // only record it. All entries must at least be finite.
    assert!(report.c1.max_violation <= 1e-9);
    assert!(report.c4.max_violation.is_finite());
    assert!(report.max_violation().is_finite());
    println!(
        "tsallis raw measure: c2 worst {:+.3e}, c4 worst {:+.3e}, additivity worst {:+.3e}",
        report.c2.max_violation, report.c4.max_violation, report.additivity.max_violation
    );
}
