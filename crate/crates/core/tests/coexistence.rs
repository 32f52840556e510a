use proptest::prelude::*;
use qlw_core::effects::{coexistent, search_certificate, unsharp_qubit};
use qlw_core::linalg::TOL;

fn verdict(a: [f64; 3], b: [f64; 3]) -> bool {
    let q = |v| unsharp_qubit(v, 1.0, TOL).unwrap();
    coexistent(&q(a), &q(b), TOL).unwrap().coexistent
}

#[test]
fn grid_matches_certificate_search() {
    let mut disagreements = Vec::new();
    for i in 0..=40 {
        for j in 0..=40 {
            let (t1, t2) = (i as f64 / 40.0, j as f64 / 40.0);
            let (a, b) = ([t1, 0.0, 0.0], [0.0, t2, 0.0]);
            if verdict(a, b) != search_certificate(a, b, 1e-3, TOL).is_some() {
                disagreements.push((t1, t2));
            }
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

#[test]
fn flip_at_inverse_root_two() {
    let t0 = std::f64::consts::FRAC_1_SQRT_2;
    for (t, expected) in [(t0 - 1e-6, true), (t0 + 1e-6, false)] {
        assert_eq!(verdict([t, 0.0, 0.0], [0.0, t, 0.0]), expected, "t = {t}");
    }
}

fn arb_bloch() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(|(r, th, ph)| {
        [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
    })
}

proptest! {
    #[test]
    fn certificates_are_sound(a in arb_bloch(), b in arb_bloch()) {
        let q = |v| unsharp_qubit(v, 1.0, TOL).unwrap();
        let v = coexistent(&q(a), &q(b), TOL).unwrap();
        if let Some(cert) = v.certificate {
            prop_assert!(cert.min_eigenvalue() >= -TOL);
            prop_assert!(cert.margin_error() <= TOL);
        }
    }

    #[test]
    fn verdict_is_symmetric(a in arb_bloch(), b in arb_bloch()) {
        prop_assert_eq!(verdict(a, b), verdict(b, a));
    }

    #[test]
    fn shrinking_preserves_coexistence(a in arb_bloch(), b in arb_bloch(), s in 0.0f64..=1.0) {
        if verdict(a, b) {
            prop_assert!(verdict(a.map(|x| s * x), b));
        }
    }
}
