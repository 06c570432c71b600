use biasdyn::{BiasSet, OpinionState};
use biasdyn_cli::io::{parse_bias_csv, parse_state_csv, write_bias_csv, write_state_csv};
use biasdyn_cli::ternary_project;
use proptest::prelude::*;

fn simplex_rows(k: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(0.0..1.0f64, k), 1..20).prop_map(|rows| {
        rows.into_iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                if s == 0.0 {
                    let mut e = vec![0.0; r.len()];
                    e[0] = 1.0;
                    e
                } else {
                    r.into_iter().map(|v| v / s).collect()
                }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ternary_points_stay_in_the_triangle(rows in simplex_rows(3)) {
        let state = OpinionState::from_rows(&rows).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let eps = 1e-12;
        for [u, v] in ternary_project(&state).unwrap() {
            // inside the half-planes bounded by the three edges
            prop_assert!(v >= -eps);
            prop_assert!(v <= 2.0 * h * u + eps);
            prop_assert!(v <= 2.0 * h * (1.0 - u) + eps);
        }
    }

    #[test]
    fn state_csv_is_lossless(rows in (1usize..6).prop_flat_map(simplex_rows)) {
        let state = OpinionState::from_rows(&rows).unwrap();
        let mut buf = Vec::new();
        write_state_csv(&state, &mut buf).unwrap();
        let back = parse_state_csv(&buf[..], "mem").unwrap();
        let bits = |s: &OpinionState<f64>| s.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&state));
    }

    #[test]
    fn bias_csv_is_lossless(values in proptest::collection::vec(0.0..1e6f64, 1..40), k in 1usize..5) {
        let n = values.len() / k;
        prop_assume!(n > 0);
        let b = BiasSet::new(n, k, values[..n * k].to_vec()).unwrap();
        let mut buf = Vec::new();
        write_bias_csv(&b, &mut buf).unwrap();
        let back = parse_bias_csv(&buf[..], "mem").unwrap();
        prop_assert!(back.as_slice().iter().zip(b.as_slice()).all(|(a, c)| a.to_bits() == c.to_bits()));
    }
}
