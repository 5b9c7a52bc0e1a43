use num_traits::ToPrimitive;
use paircollect::distributions::{pmf_y, pmf_y_exact, roots, tail_y, tail_y_exact};
use paircollect::limitlaws::{
    cdf_std_normal, ks_statistic, ks_two_sample, normalization_for, Regime,
};
use paircollect::oracle::recurrence_pmf_y;
use paircollect::simulate::{normalize_sample, sample_y_inversion, EmpiricalSample};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (u64, u64)> {
    (2u64..400).prop_flat_map(|n| (Just(n), 1..=n))
}

proptest! {
    #[test]
    fn tail_differences_are_the_pmf((n, j) in params(), m in 2u64..20_000) {
        let diff = tail_y(n, j, m - 1).unwrap() - tail_y(n, j, m).unwrap();
        let p = pmf_y(n, j, m).unwrap();
        prop_assert!((diff - p).abs() <= 1e-13 + 1e-9 * p, "diff {diff} pmf {p}");
    }

    #[test]
    fn closed_form_matches_recurrence(n in 2u64..30, jfrac in 0.0f64..1.0, k in 2u64..60) {
        let j = 1 + (jfrac * (n - 1) as f64) as u64;
        let rec = recurrence_pmf_y(n, j, k).unwrap();
        prop_assert_eq!(&rec[k as usize - 2], &pmf_y_exact(n, j, k).unwrap());
        let float = pmf_y(n, j, k).unwrap();
        let exact = rec[k as usize - 2].to_f64().unwrap();
        prop_assert!((float - exact).abs() <= 1e-13);
    }

    #[test]
    fn exact_and_float_tails_agree(n in 2u64..20, jfrac in 0.0f64..1.0, m in 1u64..200) {
        let j = 1 + (jfrac * (n - 1) as f64) as u64;
        let exact = tail_y_exact(n, j, m).unwrap().to_f64().unwrap();
        prop_assert!((tail_y(n, j, m).unwrap() - exact).abs() <= 1e-13);
    }

    #[test]
    fn inversion_returns_the_smallest_covering_value((n, j) in params(), u in 1e-9f64..0.999_999) {
        let k = sample_y_inversion(n, j, u).unwrap();
        let r = roots(n, j).unwrap();
        prop_assert!(k >= 2);
        prop_assert!(r.cdf(k) >= u);
        if k > 2 {
            prop_assert!(r.cdf(k - 1) < u);
        }
    }

    #[test]
    fn ks_distance_is_a_probability(values in prop::collection::vec(-10.0f64..10.0, 1..200)) {
        let sample = EmpiricalSample::from_values(values);
        let d = ks_statistic(sample.values(), cdf_std_normal).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!(d >= 0.5 / sample.len() as f64);
    }

    #[test]
    fn two_sample_distance_is_symmetric(
        a in prop::collection::vec(0u8..20, 1..100),
        b in prop::collection::vec(0u8..20, 1..100),
    ) {
        let a = EmpiricalSample::from_values(a.into_iter().map(f64::from).collect());
        let b = EmpiricalSample::from_values(b.into_iter().map(f64::from).collect());
        let ab = ks_two_sample(a.values(), b.values()).unwrap();
        let ba = ks_two_sample(b.values(), a.values()).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ks_two_sample(a.values(), a.values()).unwrap(), 0.0);
    }

    #[test]
    fn normalization_preserves_order(values in prop::collection::vec(0.0f64..1e6, 1..100), n in 3u64..1000) {
        let norm = normalization_for(n, n / 2, Regime::Proportional(0.5)).unwrap();
        let sample = EmpiricalSample::from_values(values);
        let out = normalize_sample(&sample, &norm);
        prop_assert!(out.values().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(out.len(), sample.len());
    }
}
