mod common;

use msrom_core::linalg::{max_abs_diff, orthogonality_defect};
use msrom_core::problems::SweepParams;
use msrom_core::random::{gaussian_matrix, gaussian_vector};
use msrom_core::spaces::OrthonormalFrame;
use msrom_core::spectral::{adapted_bases, decompose, deltas_from_rotation, gamma, gram_matrix};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), n in 1usize..7, extra in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gaussian_matrix(n + extra, n, &mut rng);
        let d = decompose(&g).unwrap();
        prop_assert!(d.reconstruction_error() <= 1e-10);
        prop_assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(orthogonality_defect(&d.u) <= 1e-12);
        prop_assert!(orthogonality_defect(&d.x) <= 1e-12);
    }

    #[test]
    fn diagonal_coupling(seed in any::<u64>()) {
        let inst = common::random_instance(&SweepParams::default(), seed, 0);
        let trial = inst.hierarchy.basis();
        let riesz = inst.problem.riesz_representers(&inst.tests).unwrap();
        let d = decompose(&gram_matrix(&riesz, trial).unwrap()).unwrap();
        let ab = adapted_bases(&d, trial, &riesz).unwrap();
        let coupling = ab.coupling(trial.space());
        for i in 0..coupling.nrows() {
            for j in 0..coupling.ncols() {
                let want = if i == j { d.sigma[j] } else { 0.0 };
                prop_assert!((coupling[(i, j)] - want).abs() <= 1e-9);
            }
        }
        let star = OrthonormalFrame::from_orthonormal(trial.space(), ab.trial_star.clone(), 1e-10);
        prop_assert!(star.is_ok());
        // orthonormal representers stay orthonormal after the rotation by U
        let rr = trial.space().cross_gram(&ab.riesz_star, &ab.riesz_star);
        prop_assert!(max_abs_diff(&rr, &DMatrix::identity(rr.nrows(), rr.ncols())) <= 1e-9);
    }

    #[test]
    fn prescribed_spectrum_round_trip(seed in any::<u64>()) {
        let params = SweepParams::default();
        let p = msrom_core::problems::random_prescription(&params, seed);
        let inst = msrom_core::problems::synth_prescribed(&p).unwrap();
        let riesz = inst.problem.riesz_representers(&inst.tests).unwrap();
        let d = decompose(&gram_matrix(&riesz, inst.hierarchy.basis()).unwrap()).unwrap();
        for (got, want) in d.sigma.iter().zip(&p.sigma) {
            prop_assert!((got - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn deltas_grow_with_profile(seed in any::<u64>(), bump in 0.0f64..0.5, at in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = msrom_core::random::random_orthogonal(5, &mut rng);
        let tau: Vec<f64> = (0..6).map(|k| 1.0 / (k + 1) as f64).collect();
        let eps: Vec<f64> = tau.iter().map(|t| 1.5 * t).collect();
        let base = deltas_from_rotation(&x, &eps, &tau).unwrap();
        let mut wider = eps.clone();
        wider[at] += bump;
        let grown = deltas_from_rotation(&x, &wider, &tau).unwrap();
        for j in 0..5 {
            prop_assert_eq!(base.delta[j], base.eta[j] + base.eta_hat[j]);
            prop_assert!(grown.delta[j] >= base.delta[j]);
            prop_assert!(base.delta[j] >= 0.0);
        }
    }
}

#[test]
fn gamma_dominates_sampled_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for rep in 0..5 {
        let inst = common::random_instance(&SweepParams::default(), 41, rep);
        let trial = inst.hierarchy.basis();
        let riesz = inst.problem.riesz_representers(&inst.tests).unwrap();
        let g = gamma(&riesz, trial).unwrap();
        assert!(g <= 1.0 + 1e-10);
        let complement = trial.complement();
        let mut sampled: f64 = 0.0;
        for _ in 0..10_000 {
            let mix = gaussian_vector(complement.len(), &mut rng);
            let v: DVector<f64> = complement.synthesize(&(&mix / mix.norm()));
            let s = trial.space().cross_gram(
                riesz.vectors(),
                &DMatrix::from_column_slice(v.len(), 1, v.as_slice()),
            );
            sampled = sampled.max(s.norm());
        }
        assert!(sampled <= g + 1e-9, "sampled {sampled} above gamma {g}");
        assert!(
            sampled >= 0.5 * g,
            "sampling far from the supremum: {sampled} vs {g}"
        );
    }
}
