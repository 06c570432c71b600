mod common;

use biasdyn::analysis::{
    dominant_eigenvalue_2x2, fixed_point_equation_residuals, lyapunov_value, recessive_set,
    reduced_two_agent_map, schur_stable_2x2, two_agent_fixed_points, FixedPointRegime,
};
use biasdyn::{run, step, BiasSet, Network, OpinionState, RunOptions};
use common::*;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

fn instance(
    max_n: usize,
    max_k: usize,
) -> impl Strategy<Value = (Network, OpinionState<f64>, BiasSet<f64>)> {
    (1..=max_n, 1..=max_k, any::<u64>()).prop_map(|(n, k, seed)| {
        let mut r = rng(seed);
        let net = random_connected(n, 0.3, &mut r);
        (
            net,
            random_state(n, k, &mut r),
            random_biases(n, k, 0.0, 2.0, 0.2, &mut r),
        )
    })
}

/// Bias values on a coarse grid so that ties are common.
fn grid_biases() -> impl Strategy<Value = BiasSet<f64>> {
    (1usize..=10, 1usize..=6).prop_flat_map(|(n, k)| {
        proptest::collection::vec(0u8..5, n * k).prop_map(move |v| {
            BiasSet::new(n, k, v.into_iter().map(|q| q as f64 / 4.0).collect()).unwrap()
        })
    })
}

fn entry() -> impl Strategy<Value = f64> {
    0.0..=2.0f64
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn recessive_set_is_the_largest_separating_set(b in grid_biases()) {
        let p = recessive_set(&b);
        prop_assert_eq!(&p.recessive, &brute_force_recessive(&b));
        prop_assert!(p.separates(&b));
        prop_assert!(!p.dominant.is_empty());
    }

    #[test]
    fn lyapunov_value_never_increases((net, x, b) in instance(10, 5)) {
        let p = recessive_set(&b);
        let y = step(&x, &b, &net).unwrap();
        prop_assert!(lyapunov_value(&y, &p) <= lyapunov_value(&x, &p) * (1.0 + 1e-14));
    }

    #[test]
    fn schur_test_matches_spectral_radius(a in entry(), b in entry(), c in entry(), d in entry()) {
        let m = [[a, b], [c, d]];
        let rho = spectral_radius(m);
        prop_assume!((rho - 1.0).abs() > 1e-9);
        prop_assert_eq!(schur_stable_2x2(m).unwrap(), rho < 1.0);
        prop_assert!((dominant_eigenvalue_2x2(m) - rho).abs() < 1e-9);
    }

    #[test]
    fn reduced_map_agrees_with_full_step(
        r in proptest::array::uniform4(0.0..2.0f64),
        x1 in 0.0..=1.0f64,
        x2 in 0.0..=1.0f64,
    ) {
        let (r1, r2) = ([r[0], r[1]], [r[2], r[3]]);
        let state = OpinionState::from_rows(&[vec![x1, 1.0 - x1], vec![x2, 1.0 - x2]]).unwrap();
        let b = BiasSet::from_rows(&[r1.to_vec(), r2.to_vec()]).unwrap();
        let full = step(&state, &b, &Network::path(2).unwrap()).unwrap();
        let reduced = reduced_two_agent_map(&r1, &r2, [x1, x2]).unwrap();
        prop_assert!((full.row(0)[0] - reduced[0]).abs() < 1e-14);
        prop_assert!((full.row(1)[0] - reduced[1]).abs() < 1e-14);
    }

    #[test]
    fn corners_solve_the_fixed_point_equations(r in proptest::array::uniform4(0.0..2.0f64)) {
        let (r1, r2) = ([r[0], r[1]], [r[2], r[3]]);
        for c in [0.0, 1.0] {
            prop_assert_eq!(fixed_point_equation_residuals(&r1, &r2, c, c).unwrap(), [0.0, 0.0]);
        }
    }

    #[test]
    fn predicted_corner_attracts_the_two_agent_map(
        r in proptest::array::uniform4(0.05..1.0f64),
        x1 in 0.01..0.99f64,
        x2 in 0.01..0.99f64,
    ) {
        let (r1, r2) = ([r[0], r[1]], [r[2], r[3]]);
        prop_assume!((r1[0] * r2[0] - r1[1] * r2[1]).abs() > 0.05);
        let target = match two_agent_fixed_points(&r1, &r2).unwrap().regime {
            FixedPointRegime::StableAllOne => 1.0,
            _ => 0.0,
        };
        let mut x = [x1, x2];
        for _ in 0..20_000 {
            x = reduced_two_agent_map(&r1, &r2, x).unwrap();
        }
        prop_assert!((x[0] - target).abs() < 1e-6 && (x[1] - target).abs() < 1e-6, "{:?}", x);
    }

    #[test]
    fn uniform_bias_limit_is_degree_weighted_average(
        (n, k, seed) in (1usize..=12, 1usize..=4, any::<u64>()),
        c in 0.2..3.0f64,
    ) {
        let mut r = rng(seed);
        let net = random_connected(n, 0.3, &mut r);
        let x0 = random_state(n, k, &mut r);
        let traj = run(&x0, &uniform_biases(n, k, c), &net, RunOptions::new(1_000_000, 1e-14)).unwrap();
        prop_assert!(traj.converged);
        let w: Vec<f64> = (0..n).map(|i| 1.0 + c * net.degree(i) as f64).collect();
        let total: f64 = w.iter().sum();
        for l in 0..k {
            let avg = (0..n).map(|i| w[i] * x0.row(i)[l]).sum::<f64>() / total;
            for row in traj.final_state().rows() {
                prop_assert!((row[l] - avg).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn single_precision_stays_on_the_simplex((net, x, b) in instance(8, 4)) {
        let x32 = OpinionState::new(x.n(), x.k(), x.as_slice().iter().map(|&v| v as f32).collect()).unwrap();
        let b32 = BiasSet::new(b.n(), b.k(), b.as_slice().iter().map(|&v| v as f32).collect()).unwrap();
        let y32 = step(&x32, &b32, &net).unwrap();
        let y = step(&x, &b, &net).unwrap();
        for (a, e) in y32.as_slice().iter().zip(y.as_slice()) {
            prop_assert!((*a as f64 - e).abs() < 1e-5);
        }
        for row in y32.rows() {
            prop_assert!((row.iter().sum::<f32>() - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn rational_step_matches_floating_point(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, k) = (r.random_range(1..=5), r.random_range(1..=3));
        let net = random_connected(n, 0.4, &mut r);
        let q = |v: i64, d: i64| Rational64::new(v, d);
        let rows: Vec<Vec<Rational64>> = (0..n)
            .map(|_| {
                let w: Vec<i64> = (0..k).map(|_| r.random_range(0..6)).collect();
                let s: i64 = w.iter().sum::<i64>().max(1);
                let mut row: Vec<Rational64> = w.iter().map(|&v| q(v, s)).collect();
                if w.iter().all(|&v| v == 0) {
                    row[0] = q(1, 1);
                }
                row
            })
            .collect();
        let bias: Vec<Rational64> = (0..n * k).map(|_| q(r.random_range(0..5), 4)).collect();
        let xq = OpinionState::from_rows(&rows).unwrap();
        let bq = BiasSet::new(n, k, bias).unwrap();
        let yq = step(&xq, &bq, &net).unwrap();
        let to_f = |v: &Rational64| *v.numer() as f64 / *v.denom() as f64;
        let xf = OpinionState::new(n, k, xq.as_slice().iter().map(to_f).collect()).unwrap();
        let bf = BiasSet::new(n, k, bq.as_slice().iter().map(to_f).collect()).unwrap();
        let yf = step(&xf, &bf, &net).unwrap();
        for row in yq.rows() {
            prop_assert_eq!(row.iter().copied().sum::<Rational64>(), q(1, 1));
        }
        for (a, e) in yq.as_slice().iter().zip(yf.as_slice()) {
            prop_assert!((to_f(a) - e).abs() < 1e-12);
        }
    }
}
