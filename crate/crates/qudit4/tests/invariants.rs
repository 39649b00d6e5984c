//! Property tests for the structural invariants of the library.

use num_complex::Complex64;
use proptest::prelude::*;

use qudit4::linalg;
use qudit4::measures;
use qudit4::scan;
use qudit4::states::{self, Labeling, Spectrum4, XState};
use qudit4::unitaries::{self, StructuredKind};

fn spectrum_strategy() -> impl Strategy<Value = Spectrum4> {
    proptest::array::uniform4(1e-6..1.0f64).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        let mut values = raw.map(|v| v / sum);
        let correction: f64 = 1.0 - values.iter().sum::<f64>();
        values[0] += correction;
        Spectrum4::new(values).unwrap()
    })
}

fn angle() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn x_state_strategy() -> impl Strategy<Value = XState> {
    (
        spectrum_strategy(),
        0.0..1.0f64,
        angle(),
        0.0..1.0f64,
        angle(),
    )
        .prop_map(|(s, t14, a14, t23, a23)| {
            let [r11, r22, r33, r44] = s.values();
            XState {
                r11,
                r22,
                r33,
                r44,
                r14: Complex64::from_polar(t14 * (r11 * r44).sqrt(), a14),
                r23: Complex64::from_polar(t23 * (r22 * r33).sqrt(), a23),
            }
        })
}

proptest! {
    #[test]
    fn rotation_1_4_is_unitary(phi in angle()) {
        let w = unitaries::rotation_1_4(phi);
        prop_assert!(unitaries::unitarity_violation(w.matrix()) < 1e-12);
    }

    #[test]
    fn conjugation_preserves_state_invariants(s in spectrum_strategy(), phi in angle()) {
        let rho = states::conjugate(&states::from_spectrum(&s), &unitaries::rotation_1_4(phi));
        let m = rho.matrix();
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(m.hermiticity_violation() < 1e-12);
        let eigs = linalg::eigvalsh(m).unwrap();
        prop_assert!(eigs[3] >= -1e-9);
        let sorted = s.sorted_descending();
        for (e, expected) in eigs.iter().zip(sorted.iter()) {
            prop_assert!((e - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution(s in spectrum_strategy(), phi in angle(), theta in angle()) {
        let b1 = qudit4::linalg::ComplexMatrix2::rotation(phi);
        let b2 = qudit4::linalg::ComplexMatrix2::rotation(theta);
        let w = unitaries::structured(StructuredKind::XType, &b1, &b2).unwrap();
        let rho = states::conjugate(&states::from_spectrum(&s), &w);
        let once = states::partial_transpose(&rho);
        let twice = states::partial_transpose_matrix(&once);
        prop_assert!(twice.max_abs_diff(rho.matrix()) == 0.0);
        prop_assert!((once.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_closed_forms_match_oracle(x in x_state_strategy()) {
        let rho = states::DensityMatrix4::new(x.to_matrix(), Labeling::TwoQubit).unwrap();
        let mut closed = states::x_closed_forms(&x).ppt_eigenvalues;
        closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let oracle = linalg::eigvalsh(&states::partial_transpose(&rho)).unwrap();
        for (c, o) in closed.iter().zip(oracle.iter()) {
            prop_assert!((c - o).abs() < 1e-10);
        }
        prop_assert!((measures::concurrence_x(&x) - measures::concurrence_general(&rho).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn measures_are_mutually_consistent(x in x_state_strategy(), phi in angle()) {
        let rho = states::conjugate(
            &states::DensityMatrix4::new(x.to_matrix(), Labeling::TwoQubit).unwrap(),
            &unitaries::rotation_1_4(phi),
        );
        let report = measures::analyze(&rho).unwrap();
        prop_assert!(report.negativity >= 0.0);
        prop_assert!((0.0..=1.0 + 1e-9).contains(&report.concurrence));
        prop_assert_eq!(report.separable, report.min_ppt_eig >= -1e-9);
        if report.min_ppt_eig < -1e-6 {
            prop_assert!(report.negativity > 1e-7);
            prop_assert!(report.concurrence >= report.negativity / 2.0 - 1e-7);
        }
        if report.separable {
            prop_assert!(report.negativity < 1e-8);
        }
    }

    #[test]
    fn pure_transform_is_idempotent(s in spectrum_strategy()) {
        // Reuse the normalized draw as column amplitudes: sqrt gives unit norm.
        let col = s.values().map(|v| Complex64::new(v.sqrt(), 0.0));
        let rho = measures::pure_transform(&col).unwrap();
        let sq = rho.matrix().multiply(rho.matrix());
        prop_assert!(sq.max_abs_diff(rho.matrix()) < 1e-10);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        let det = measures::schmidt_determinant(&col);
        let report = measures::analyze(&rho).unwrap();
        prop_assert!((report.negativity - 2.0 * det.norm()).abs() < 1e-9);
    }

    #[test]
    fn werner_pipeline_stage_one_is_exact(p in -1.0/3.0..1.0f64) {
        let pipe = scan::werner_pipeline(p, 0.0).unwrap();
        let expected = states::werner(p).unwrap();
        prop_assert!(pipe.werner_state.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    #[test]
    fn json_roundtrip_is_lossless(x in x_state_strategy()) {
        let rho = states::DensityMatrix4::new(x.to_matrix(), Labeling::SpinThreeHalves).unwrap();
        let back = states::from_json(&states::to_json(&rho)).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        prop_assert_eq!(back.labeling(), rho.labeling());
    }

    #[test]
    fn parse_number_accepts_plain_decimals(v in -1e6..1e6f64) {
        let text = format!("{v}");
        prop_assert_eq!(scan::parse_number(&text), Some(v));
    }
}
