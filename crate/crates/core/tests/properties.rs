//! Randomized invariants of the phase-space and overlap routines.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qi_core::divergence::{fidelity, ln_q_s_general, q_s_coherent_closed, q_s_general, q_s_standard};
use qi_core::symplectic::{apply_unitary, partial_trace, williamson, GaussianState, GaussianUnitary};
use qi_core::target::{make_pair, TargetConfig, TargetModel};
use qi_core::transmitters::{TransmitterKind, TransmitterSpec};

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> GaussianUnitary {
    let mut u = GaussianUnitary::identity(n);
    for _ in 0..rng.gen_range(1..8) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n.max(2))) % n;
        let g = match rng.gen_range(0..4) {
            0 if n > 1 => GaussianUnitary::beamsplitter(rng.gen_range(0.01..0.99), a, b, n),
            1 if n > 1 => GaussianUnitary::two_mode_squeezer(rng.gen_range(-1.0..1.0), a, b, n),
            2 => GaussianUnitary::phase_rotation(rng.gen_range(0.0..6.3), a, n),
            _ => GaussianUnitary::squeezer(rng.gen_range(-1.0..1.0), a, n),
        };
        u = u.then(&g.unwrap());
    }
    u
}

/// Thermal product with the given symplectic eigenvalues, sent through a
/// random Gaussian unitary with a random displacement.
fn random_state(rng: &mut ChaCha8Rng, nu: &[f64]) -> GaussianState {
    let n = nu.len();
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for (k, &v) in nu.iter().enumerate() {
        d[(2 * k, 2 * k)] = v;
        d[(2 * k + 1, 2 * k + 1)] = v;
    }
    let mean = DVector::from_fn(2 * n, |_, _| rng.gen_range(-1.0..1.0));
    let base = GaussianState::new(DVector::zeros(2 * n), d).unwrap();
    let shifted = apply_unitary(&base, &random_unitary(rng, n)).unwrap();
    apply_unitary(&shifted, &GaussianUnitary::displacement(mean)).unwrap()
}

fn nus(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-4.0f64..1.0).prop_map(|e| 0.5 + 10f64.powf(e)), n)
}

fn spec_strategy() -> impl Strategy<Value = TransmitterSpec> {
    (0usize..4, -3.0f64..1.0).prop_map(|(i, e)| {
        let kind = TransmitterKind::ALL[i];
        let ns = if kind == TransmitterKind::Vacuum { 0.0 } else { 10f64.powf(e) };
        TransmitterSpec::new(kind, ns).unwrap()
    })
}

fn cfg_strategy() -> impl Strategy<Value = TargetConfig> {
    (0.01f64..0.99, -3.0f64..2.0).prop_map(|(k, e)| TargetConfig::agnostic(k, 10f64.powf(e)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compositions_are_symplectic(seed in any::<u64>(), n in 1usize..5) {
        let u = random_unitary(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert!(u.symplectic_defect() < 1e-10);
    }

    #[test]
    fn williamson_recovers_eigenvalues(seed in any::<u64>(), mut nu in (1usize..4).prop_flat_map(nus)) {
        let st = random_state(&mut ChaCha8Rng::seed_from_u64(seed), &nu);
        let w = williamson(st.cov()).unwrap();
        nu.sort_by(f64::total_cmp);
        for (a, b) in w.nu.iter().zip(&nu) {
            prop_assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
        }
        let rec = &w.s * st.cov() * w.s.transpose() - w.diagonal();
        prop_assert!(rec.norm() <= 1e-8 * w.diagonal().norm());
    }

    #[test]
    fn reduced_states_stay_physical(seed in any::<u64>(), nu in nus(3), keep in 0usize..3) {
        let st = random_state(&mut ChaCha8Rng::seed_from_u64(seed), &nu);
        let red = partial_trace(&st, &[keep]).unwrap();
        prop_assert!(red.williamson().unwrap().nu[0] >= 0.5 - 1e-10);
    }

    #[test]
    fn overlap_swaps_with_s(seed in any::<u64>(), a in nus(2), b in nus(2), s in 0.02f64..0.98) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_state(&mut rng, &a), random_state(&mut rng, &b));
        let q = q_s_general(&x, &y, s).unwrap();
        let r = q_s_general(&y, &x, 1.0 - s).unwrap();
        prop_assert!((q - r).abs() <= 1e-10 * q.max(1e-300), "{q} vs {r}");
        prop_assert!(q > 0.0 && q <= 1.0 + 1e-12);
    }

    #[test]
    fn self_overlap_is_one(seed in any::<u64>(), a in nus(2), s in 0.02f64..0.98) {
        let x = random_state(&mut ChaCha8Rng::seed_from_u64(seed), &a);
        prop_assert!((q_s_general(&x, &x, s).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_overlap_is_convex_in_s(spec in spec_strategy(), cfg in cfg_strategy(), s in 0.05f64..0.85, h in 0.01f64..0.07) {
        let p = make_pair(&spec, &cfg).unwrap();
        let f = |t: f64| ln_q_s_general(&p.rho0, &p.rho1, t).unwrap();
        let (l, m, r) = (f(s), f(s + h), f(s + 2.0 * h));
        let scale = l.abs().max(r.abs()).max(1e-300);
        prop_assert!(l + r - 2.0 * m >= -1e-9 * scale, "{l} {m} {r}");
    }

    #[test]
    fn normal_form_matches_general(spec in spec_strategy(), cfg in cfg_strategy(), s in 0.05f64..0.95) {
        let p = make_pair(&spec, &cfg).unwrap();
        let g = q_s_general(&p.rho0, &p.rho1, s).unwrap();
        let n = q_s_standard(&spec, &cfg, s).unwrap();
        prop_assert!((g - n).abs() <= 1e-10 * g, "{g} vs {n}");
    }

    #[test]
    fn coherent_closed_form_matches_general(s in 0.05f64..0.95, k in 0.01f64..0.99, nb in -3.0f64..2.0, ns in -3.0f64..1.0) {
        let (nb, ns) = (10f64.powf(nb), 10f64.powf(ns));
        let p = make_pair(&TransmitterSpec::coherent(ns).unwrap(), &TargetConfig::agnostic(k, nb).unwrap()).unwrap();
        let g = q_s_general(&p.rho0, &p.rho1, s).unwrap();
        let c = q_s_coherent_closed(s, k, nb, ns).unwrap();
        prop_assert!((g - c).abs() <= 1e-12 * g, "{g} vs {c}");
    }

    #[test]
    fn fidelity_bounds(seed in any::<u64>(), a in nus(1), b in nus(1)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_state(&mut rng, &a), random_state(&mut rng, &b));
        let f = fidelity(&x, &y).unwrap();
        let g = fidelity(&y, &x).unwrap();
        prop_assert!((f - g).abs() < 1e-12);
        prop_assert!(f > 0.0 && f <= 1.0 + 1e-12);
        // tr √ρ √σ never exceeds the root fidelity
        prop_assert!(q_s_general(&x, &y, 0.5).unwrap() <= f + 1e-12);
    }

    #[test]
    fn legacy_vacuum_always_degenerate(k in 0.01f64..0.99, nb in 0.0f64..100.0) {
        let cfg = TargetConfig::new(k, nb, TargetModel::Legacy).unwrap();
        prop_assert!(make_pair(&TransmitterSpec::vacuum(), &cfg).unwrap().degenerate);
    }
}
