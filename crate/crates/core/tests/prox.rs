mod common;

use common::{problem_and_point, vec_strategy};
use proptest::prelude::*;
use proxkit::linalg::{distance, dot};
use proxkit::prox::{generalized_gradient, prox_step, soft_threshold};

/// Coordinatewise `argmin_x ½(x − z)² + θ|x|` by comparing the three
/// candidate stationary points, no sign formula involved.
fn brute_prox(z: f64, theta: f64) -> f64 {
    let cost = |x: f64| 0.5 * (x - z) * (x - z) + theta * x.abs();
    [0.0, z - theta, z + theta]
        .into_iter()
        .filter(|&c| c == 0.0 || (c > 0.0 && z - theta == c) || (c < 0.0 && z + theta == c))
        .min_by(|a, b| cost(*a).total_cmp(&cost(*b)))
        .unwrap()
}

proptest! {
    #[test]
    fn matches_brute_force(z in vec_strategy(7), theta in 0.0..2.0f64) {
        let out = soft_threshold(&z, theta).unwrap();
        for (o, zi) in out.iter().zip(z.iter()) {
            prop_assert!((o - brute_prox(*zi, theta)).abs() < 1e-15);
        }
    }

    #[test]
    fn firmly_nonexpansive(x in vec_strategy(6), y in vec_strategy(6), theta in 0.0..2.0f64) {
        let px = soft_threshold(&x, theta).unwrap();
        let py = soft_threshold(&y, theta).unwrap();
        let lhs = distance(&px, &py).powi(2);
        let rhs = dot(&px.sub(&py), &x.sub(&y));
        prop_assert!(lhs <= rhs + 1e-12);
        prop_assert!(distance(&px, &py) <= distance(&x, &y) + 1e-12);
    }

    #[test]
    fn odd_symmetry(z in vec_strategy(6), theta in 0.0..2.0f64) {
        let pos = soft_threshold(&z, theta).unwrap();
        let neg = soft_threshold(&z.scaled(-1.0), theta).unwrap();
        prop_assert_eq!(pos.scaled(-1.0), neg);
    }

    #[test]
    fn small_entries_vanish_and_large_shrink(z in vec_strategy(8), theta in 0.0..2.0f64) {
        let out = soft_threshold(&z, theta).unwrap();
        for (o, zi) in out.iter().zip(z.iter()) {
            if zi.abs() <= theta {
                prop_assert_eq!(*o, 0.0);
            } else {
                prop_assert!((o.abs() - (zi.abs() - theta)).abs() < 1e-15);
                prop_assert_eq!(o.signum(), zi.signum());
            }
        }
    }

    #[test]
    fn prox_step_and_generalized_gradient_agree((p, x) in problem_and_point(), lambda in 1e-3..1.0f64) {
        let next = prox_step(&p, &x, lambda).unwrap();
        let g = generalized_gradient(&p, &x, lambda).unwrap();
        let rebuilt = x.add_scaled(-lambda, &g);
        prop_assert!(distance(&rebuilt, &next) <= 1e-12 * (1.0 + proxkit::linalg::norm2(&x)));
    }
}

#[test]
fn negative_threshold_is_rejected() {
    assert!(soft_threshold(&[1.0], -0.5).is_err());
}
