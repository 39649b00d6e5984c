//! Acceptance gate: one test per release criterion, each emitting a single
//! pass/fail line through the harness.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qudit4::errata::{self, Evidence};
use qudit4::linalg;
use qudit4::measures;
use qudit4::scan::{self, Family, GridAxis, ScanSpec};
use qudit4::states::{self, Labeling, Spectrum4, XState};
use qudit4::unitaries::{self, Branch, StructuredKind, UnitaryParams};

fn verdict(number: u32, name: &str, ok: bool) {
    println!(
        "criterion {number}: {} - {name}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {number} failed: {name}");
}

fn pure_spec(axis: GridAxis, fixed: BTreeMap<String, f64>, family: Family) -> ScanSpec {
    ScanSpec {
        family,
        spectrum: Spectrum4::new([1.0, 0.0, 0.0, 0.0]).unwrap(),
        axes: vec![axis],
        fixed,
    }
}

#[test]
fn criterion_1_pure_rotation_sweep() {
    let spec = pure_spec(
        GridAxis {
            name: "phi".to_string(),
            start: 0.0,
            stop: PI,
            steps: 401,
        },
        BTreeMap::new(),
        Family::Rotation14,
    );
    let rows = scan::sweep(&spec).unwrap();
    let mut max_diff = 0.0f64;
    let mut zero_nodes = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let phi = row.params[0].1;
        max_diff = max_diff.max((row.negativity - (2.0 * phi).sin().abs()).abs());
        if row.negativity < 1e-9 {
            zero_nodes.push(i);
        }
    }
    verdict(
        1,
        "pure one-angle sweep matches |sin 2 phi| with zeros only at 0, pi/2, pi",
        max_diff < 1e-9 && zero_nodes == vec![0, 200, 400],
    );
}

#[test]
fn criterion_2_first_column_sweep() {
    // The published claim of zeros at a=0 and a=1 holds only at a=1; at a=0
    // the negativity equals 2 d f sqrt(1-d^2) and the second zero sits at
    // a* = d f / sqrt(1-f^2+d^2 f^2). The a=0 discrepancy is a documented
    // finding, asserted here together with the true zero structure.
    let mut ok = true;
    for (d, f) in [(0.6, 0.1), (0.9, 0.1), (0.1, 0.5)] {
        let mut fixed = BTreeMap::new();
        fixed.insert("d".to_string(), d);
        fixed.insert("f".to_string(), f);
        let spec = pure_spec(
            GridAxis {
                name: "a".to_string(),
                start: 0.0,
                stop: 1.0,
                steps: 401,
            },
            fixed,
            Family::FirstColumn,
        );
        let rows = scan::sweep(&spec).unwrap();
        let at_zero = rows.first().unwrap().negativity;
        ok &= (at_zero - 2.0 * d * f * (1.0 - d * d).sqrt()).abs() < 1e-9;
        ok &= rows.last().unwrap().negativity < 1e-9;
        let positive = rows[1..400].iter().filter(|r| r.negativity > 1e-9).count();
        ok &= positive >= 50;
        let boundaries = scan::find_boundary(&spec).unwrap();
        let a_star = d * f / (1.0 - f * f + d * d * f * f).sqrt();
        ok &= boundaries.iter().any(|b| (b - a_star).abs() < 1e-6);
        ok &= boundaries.iter().any(|b| (b - 1.0).abs() < 1e-6);
    }
    ok &= errata::report()
        .findings
        .iter()
        .any(|f| f.id == "first-column-endpoint-claim");
    verdict(
        2,
        "first-column sweep: zero at a=1 and at the interior zero; a=0 value documented",
        ok,
    );
}

#[test]
fn criterion_3_werner_threshold() {
    let min_ppt = |p: f64| {
        let rho = states::werner(p).unwrap();
        linalg::eigvalsh(&states::partial_transpose(&rho)).unwrap()[3]
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    assert!(min_ppt(lo) > 0.0 && min_ppt(hi) < 0.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if min_ppt(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let threshold = 0.5 * (lo + hi);
    let report = measures::analyze(&states::werner(0.6).unwrap()).unwrap();
    verdict(
        3,
        "separability flips at p = 1/3; negativity(0.6) = 0.4",
        (threshold - 1.0 / 3.0).abs() < 1e-8 && (report.negativity - 0.4).abs() < 1e-10,
    );
}

fn random_x_state(rng: &mut ChaCha8Rng) -> XState {
    let [r11, r22, r33, r44] = Spectrum4::random(rng).values();
    let r14 = Complex64::from_polar(
        rng.gen_range(0.0..1.0) * (r11 * r44).sqrt(),
        rng.gen_range(0.0..6.283185307179586),
    );
    let r23 = Complex64::from_polar(
        rng.gen_range(0.0..1.0) * (r22 * r33).sqrt(),
        rng.gen_range(0.0..6.283185307179586),
    );
    XState {
        r11,
        r22,
        r33,
        r44,
        r14,
        r23,
    }
}

#[test]
fn criterion_4_x_state_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = true;
    for _ in 0..10_000 {
        let x = random_x_state(&mut rng);
        let rho = states::DensityMatrix4::new(x.to_matrix(), Labeling::TwoQubit).unwrap();
        let mut closed = states::x_closed_forms(&x).ppt_eigenvalues;
        closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let oracle = linalg::eigvalsh(&states::partial_transpose(&rho)).unwrap();
        for (c, o) in closed.iter().zip(oracle.iter()) {
            ok &= (c - o).abs() < 1e-10;
        }
        let cx = measures::concurrence_x(&x);
        let cg = measures::concurrence_general(&rho).unwrap();
        ok &= (cx - cg).abs() < 1e-9;
        if !ok {
            break;
        }
    }
    verdict(4, "X-state closed forms match the oracle on 10^4 draws", ok);
}

#[test]
fn criterion_5_pure_separable_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let draw = |rng: &mut ChaCha8Rng| rng.gen_range(0.0..=1.0);
    for case in 0..5 {
        for _ in 0..100 {
            let (a, d, f) = match case {
                0 => (1.0, draw(&mut rng), draw(&mut rng)),
                1 => (draw(&mut rng), 1.0, draw(&mut rng)),
                2 => (0.0, 0.0, draw(&mut rng)),
                3 => (0.0, draw(&mut rng), 0.0),
                _ => (draw(&mut rng), 0.0, 1.0),
            };
            let mut params = UnitaryParams::new(a, 0.0, 0.0, d, f, 0.0).unwrap();
            params.phases.phi11 = rng.gen_range(0.0..6.28);
            params.phases.phi21 = rng.gen_range(0.0..6.28);
            params.phases.phi31 = rng.gen_range(0.0..6.28);
            params.phases.phi41 = rng.gen_range(0.0..6.28);
            let col = unitaries::first_column(&params);
            ok &= measures::pure_separable(&col).unwrap();
        }
    }
    verdict(
        5,
        "all five pure-state parameter families are separable",
        ok,
    );
}

#[test]
fn criterion_6_structured_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    for kind in [StructuredKind::Cellular, StructuredKind::Block] {
        for _ in 0..1_000 {
            let spectrum = Spectrum4::random(&mut rng);
            let b1 = unitaries::random_block(&mut rng);
            let b2 = unitaries::random_block(&mut rng);
            let w = unitaries::structured(kind, &b1, &b2).unwrap();
            let rho = states::conjugate(&states::from_spectrum(&spectrum), &w);
            let ppt = linalg::eigvalsh(&states::partial_transpose(&rho)).unwrap();
            let sorted = spectrum.sorted_descending();
            for (p, s) in ppt.iter().zip(sorted.iter()) {
                ok &= (p - s).abs() < 1e-9;
            }
            ok &= ppt[3] >= -1e-9;
        }
    }
    let mut separable = 0usize;
    let mut entangled = 0usize;
    for _ in 0..1_000 {
        let spectrum = Spectrum4::random(&mut rng);
        let b1 = unitaries::random_block(&mut rng);
        let b2 = unitaries::random_block(&mut rng);
        let w = unitaries::structured(StructuredKind::XType, &b1, &b2).unwrap();
        let rho = states::conjugate(&states::from_spectrum(&spectrum), &w);
        if measures::analyze(&rho).unwrap().separable {
            separable += 1;
        } else {
            entangled += 1;
        }
    }
    verdict(
        6,
        "cellular/block rotations preserve the partial-transpose spectrum; X-type reaches both verdicts",
        ok && separable > 0 && entangled > 0,
    );
}

#[test]
fn criterion_7_rotated_werner_window() {
    let window = scan::rotated_werner_boundaries(0.6, 501).unwrap();
    let lo_expected = 0.5 * (1.0f64 / 3.0).acos();
    let hi_expected = FRAC_PI_2 - lo_expected;
    let mut ok = window.len() == 2
        && (window[0] - 0.61548).abs() < 1e-5
        && (window[1] - 0.95531).abs() < 1e-5
        && (window[0] - lo_expected).abs() < 1e-7
        && (window[1] - hi_expected).abs() < 1e-7;
    let report = errata::report();
    let trace = report.findings.iter().find_map(|f| match &f.evidence {
        Evidence::TraceMismatch { printed_trace, .. } => Some(*printed_trace),
        _ => None,
    });
    ok &= trace == Some(2.0);
    let windows = report.findings.iter().find_map(|f| match &f.evidence {
        Evidence::Window {
            published_window,
            computed_window,
            ..
        } => Some((*published_window, *computed_window)),
        _ => None,
    });
    match windows {
        Some((published, computed)) => {
            ok &= (published[0] - 0.421).abs() < 1e-12 && (published[1] - 1.15).abs() < 1e-12;
            ok &= (computed[0] - 0.61548).abs() < 1e-5 && (computed[1] - 0.95531).abs() < 1e-5;
        }
        None => ok = false,
    }
    verdict(
        7,
        "rotated-Werner window is [0.61548, 0.95531]; trace-2 source and both windows documented",
        ok,
    );
}

#[test]
fn criterion_8_werner_generator_evidence() {
    let plus = unitaries::werner_generator_paper(0.6, Branch::Plus);
    let minus = unitaries::werner_generator_paper(0.6, Branch::Minus);
    let mut ok = plus.unitarity_violation > 1e-6 && minus.unitarity_violation > 1e-6;

    let published = errata::published_werner_spectrum(0.6);
    let actual = linalg::eigvalsh(states::werner(0.6).unwrap().matrix()).unwrap();
    let diff = published
        .iter()
        .zip(actual.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    ok &= diff > 1e-3;

    for i in 0..100 {
        let p = -1.0 / 3.0 + (i as f64) * (4.0 / 3.0) / 99.0;
        let (w, spectrum) = unitaries::werner_generator_corrected(p).unwrap();
        let rebuilt = states::conjugate(&states::from_spectrum(&spectrum), &w);
        ok &= rebuilt
            .matrix()
            .max_abs_diff(states::werner(p).unwrap().matrix())
            < 1e-12;
    }
    verdict(
        8,
        "published generator violates unitarity and its spectrum; corrected generator rebuilds the Werner state",
        ok,
    );
}

#[test]
fn criterion_9_invariant_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    for _ in 0..10_000 {
        let spectrum = Spectrum4::random(&mut rng);
        let w = unitaries::random_unitary(&mut rng);
        let rho = states::conjugate(&states::from_spectrum(&spectrum), &w);

        let eigs = linalg::eigvalsh(rho.matrix()).unwrap();
        let sorted = spectrum.sorted_descending();
        for (e, s) in eigs.iter().zip(sorted.iter()) {
            ok &= (e - s).abs() < 1e-9;
        }

        let ppt = states::partial_transpose(&rho);
        let twice = states::partial_transpose_matrix(&ppt);
        ok &= twice.max_abs_diff(rho.matrix()) == 0.0;

        let report = measures::analyze(&rho).unwrap();
        ok &= report.negativity >= 0.0 && report.concurrence >= 0.0;
        ok &= report.separable == (report.min_ppt_eig >= -1e-9);
        if report.min_ppt_eig >= -1e-9 {
            ok &= report.negativity < 1e-8;
        }
        if report.min_ppt_eig < -1e-6 {
            // Entangled well beyond tolerance: both measures must fire, and
            // for two qubits the concurrence dominates half the negativity.
            ok &= report.negativity > 1e-7;
            ok &= report.concurrence > 0.0;
            ok &= report.concurrence >= report.negativity / 2.0 - 1e-7;
        }
        if report.min_ppt_eig > 1e-6 {
            ok &= report.concurrence < 1e-6;
        }
        if !ok {
            break;
        }
    }
    verdict(
        9,
        "conjugation, involution, and measure consistency over 10^4 states",
        ok,
    );
}
