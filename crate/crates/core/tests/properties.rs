use lefschetz::random::{random_homogeneous, random_multivector, random_symplectic, trial_rng};
use lefschetz::symplectic::standard_matrix;
use lefschetz::{Multivector, C64};
use proptest::prelude::*;

fn close(a: &Multivector, b: &Multivector, scale: f64) -> bool {
    (a - b).norm() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn star_is_an_involution(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = trial_rng(seed, 0);
        let w = random_symplectic(&mut rng, n);
        let u = random_multivector(&mut rng, n);
        let back = w.star(&w.star(&u).unwrap()).unwrap();
        prop_assert!(close(&back, &u, u.norm()));
    }

    #[test]
    fn star_is_linear(seed in any::<u64>(), n in 1usize..=3, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut rng = trial_rng(seed, 1);
        let w = random_symplectic(&mut rng, n);
        let u = random_multivector(&mut rng, n);
        let v = random_multivector(&mut rng, n);
        let lhs = w.star(&(&u.scale(a) + &v.scale(b))).unwrap();
        let rhs = &w.star(&u).unwrap().scale(a) + &w.star(&v).unwrap().scale(b);
        prop_assert!(close(&lhs, &rhs, rhs.norm()));
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=6, l in 0usize..=6) {
        prop_assume!(k <= 2 * n && l <= 2 * n);
        let mut rng = trial_rng(seed, 2);
        let u = random_homogeneous(&mut rng, n, k);
        let v = random_homogeneous(&mut rng, n, l);
        let sign = if (k * l) % 2 == 0 { 1.0 } else { -1.0 };
        let uv = &u ^ &v;
        prop_assert!(close(&uv, &(&v ^ &u).scale(sign), uv.norm()));
    }

    #[test]
    fn pairing_parity(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=6) {
        prop_assume!(k <= 2 * n);
        let mut rng = trial_rng(seed, 3);
        let w = random_symplectic(&mut rng, n);
        let mu = random_homogeneous(&mut rng, n, k);
        let nu = random_homogeneous(&mut rng, n, k);
        let a = w.pairing(&mu, &nu).unwrap();
        let b = w.pairing(&nu, &mu).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - b * sign).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=6) {
        prop_assume!(k <= 2 * n);
        let mut rng = trial_rng(seed, 4);
        let w = random_symplectic(&mut rng, n);
        let u = random_homogeneous(&mut rng, n, k);
        let d = w.lefschetz_decompose(&u).unwrap();
        prop_assert!(close(&d.reconstruct(&w), &u, u.norm()));
        for c in &d.components {
            prop_assert!(w.is_primitive(&c.form, 1e-9).unwrap().primitive);
        }
    }

    #[test]
    fn darboux_normalizes(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = trial_rng(seed, 5);
        let w = random_symplectic(&mut rng, n);
        let q = &w.darboux().vectors;
        let residual = (q.transpose() * w.matrix() * q - standard_matrix(n)).amax();
        prop_assert!(residual <= 1e-9);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = trial_rng(seed, 6);
        let u = random_multivector(&mut rng, n).scale(C64::new(0.5, -2.0));
        let text = serde_json::to_string(&u).unwrap();
        let back: Multivector = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, u);
    }
}
