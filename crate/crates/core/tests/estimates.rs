use ddgk::gkestimate::{difference_degree, gk_report, limsup_composition_check, loglog_slopes, DimSequence};
use proptest::prelude::*;

fn poly_values(coeffs: &[u64], len: usize) -> Vec<u128> {
    (1..=len as u128).map(|r| coeffs.iter().rev().fold(0u128, |acc, &c| acc * r + c as u128)).collect()
}

/// Polynomials of degree `coeffs.len() - 1` with a positive leading term.
fn polynomial() -> impl Strategy<Value = Vec<u64>> {
    (0usize..=4).prop_flat_map(|deg| {
        (prop::collection::vec(0u64..20, deg), 1u64..20).prop_map(|(mut low, lead)| {
            low.push(lead);
            low
        })
    })
}

#[test]
fn limsup_grid() {
    for d in 0..=2 {
        for p in [2, 3] {
            assert!(limsup_composition_check(d, p, 16).unwrap(), "d = {d}, p = {p}");
        }
    }
    assert!(limsup_composition_check(1, 1, 16).is_err());
    assert!(limsup_composition_check(1, 2, 8).is_err());
}

proptest! {
    #[test]
    fn polynomial_degree_is_detected(coeffs in polynomial(), len in 12usize..20) {
        let s = DimSequence::new(poly_values(&coeffs, len));
        prop_assert_eq!(difference_degree(&s), Some(coeffs.len() - 1));
    }

    #[test]
    fn scaling_preserves_estimates(coeffs in polynomial(), k in 1u128..50, len in 10usize..16) {
        let base = poly_values(&coeffs, len);
        let s = DimSequence::new(base.clone());
        let t = DimSequence::new(base.iter().map(|v| v * k).collect());
        prop_assert_eq!(difference_degree(&s), difference_degree(&t));
        let (a, b) = (loglog_slopes(&s).unwrap().slope_window, loglog_slopes(&t).unwrap().slope_window);
        prop_assert!((a - b).abs() <= 0.2);
    }

    #[test]
    fn reports_are_deterministic(values in prop::collection::vec(1u128..10_000, 4..16)) {
        let s = DimSequence::new(values);
        let a = gk_report(&s).unwrap();
        let b = gk_report(&s).unwrap();
        prop_assert_eq!(&a, &b);
        if let Some(v) = a.verdict {
            prop_assert_eq!(a.difference_degree, Some(v));
            prop_assert_eq!(a.slope_window.round() as usize, v);
        }
    }
}
