//! Machine-readable report on inconsistencies in the published formulas this
//! crate reimplements, with violation magnitudes measured by the current build.
//!
//! Every entry is evidence, not opinion: each one records the published value
//! or construction verbatim next to what the numeric oracle produces.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::linalg::{self, ComplexMatrix4};
use crate::scan;
use crate::states::{self, DensityMatrix4};
use crate::unitaries::{
    self, build_from_params, unitarity_violation, Branch, Phases, UnitaryParams,
};

/// Schema tag embedded in the JSON output.
pub const ERRATA_SCHEMA: &str = "qudit4-errata/1";

/// Seed for the parametrization survey; fixed so repeated runs are identical.
const SURVEY_SEED: u64 = 0x51_4d_45;

#[derive(Debug, Clone, Serialize)]
pub struct ErrataReport {
    pub schema: String,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub id: String,
    pub summary: String,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A formula defect visible by inspection; no numbers to measure.
    Note { detail: String },
    /// The published Werner generator, evaluated on both sign branches.
    WernerGenerator {
        p: f64,
        plus_branch_unitarity_violation: f64,
        minus_branch_unitarity_violation: f64,
        published_spectrum: [f64; 4],
        werner_spectrum: [f64; 4],
        spectrum_max_diff: f64,
    },
    /// Unitarity of the general parametrization over sampled parameters.
    ParametrizationSurvey {
        samples: usize,
        unitary_fraction: f64,
        max_violation: f64,
        mean_violation: f64,
        regions: Vec<RegionCheck>,
    },
    /// The printed partially transposed rotated-Werner matrix.
    TraceMismatch {
        p: f64,
        phi: f64,
        printed_trace: f64,
        expected_trace: f64,
        computed_trace: f64,
        printed_vs_computed_max_diff: f64,
    },
    /// Endpoint behaviour of the pure-state first-column sweep.
    EndpointClaim {
        d: f64,
        f: f64,
        negativity_at_zero: f64,
        claimed_negativity_at_zero: f64,
        negativity_at_one: f64,
        interior_zero: f64,
        negativity_at_interior_zero: f64,
    },
    /// Separability window of the rotated Werner state.
    Window {
        p: f64,
        published_window: [f64; 2],
        published_formula_window: [f64; 2],
        computed_window: [f64; 2],
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionCheck {
    pub description: String,
    pub a: f64,
    pub bc: f64,
    pub df: f64,
    pub h: f64,
    pub unitarity_violation: f64,
    pub unitary: bool,
}

/// The partially transposed rotated-Werner matrix exactly as published.
/// Its trace is 2, not 1, which is the root of the published window values.
pub fn printed_rotated_werner_ppt(p: f64, phi: f64) -> ComplexMatrix4 {
    let c = (2.0 * phi).cos();
    let mut m = ComplexMatrix4::zero();
    m.entries[0][0] = Complex64::new(0.5 * (p + 1.0 + p * c), 0.0);
    m.entries[1][1] = Complex64::new(0.5 * (1.0 - p), 0.0);
    m.entries[2][2] = Complex64::new(0.5 * (1.0 - p), 0.0);
    m.entries[3][3] = Complex64::new(0.5 * (p + 1.0 - p * c), 0.0);
    m.entries[1][2] = Complex64::new(0.5 * p * c, 0.0);
    m.entries[2][1] = Complex64::new(0.5 * p * c, 0.0);
    m
}

/// Published spectrum claimed for the Werner generator's diagonal input:
/// {(p+1±√2 p)/4, (1−p)/4, (1−p)/4}.
pub fn published_werner_spectrum(p: f64) -> [f64; 4] {
    let root = std::f64::consts::SQRT_2 * p;
    let mut s = [
        (p + 1.0 + root) / 4.0,
        (p + 1.0 - root) / 4.0,
        (1.0 - p) / 4.0,
        (1.0 - p) / 4.0,
    ];
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Published window bounds computed from the published formula
/// (arccos((p−1)/p))/2 and its reflection about π/4; defined for p ≥ 1/2.
pub fn published_window_from_formula(p: f64) -> [f64; 2] {
    let half = 0.5 * ((p - 1.0) / p).acos();
    [FRAC_PI_2 - half, half]
}

fn werner_generator_finding(p: f64) -> Finding {
    let plus = unitaries::werner_generator_paper(p, Branch::Plus);
    let minus = unitaries::werner_generator_paper(p, Branch::Minus);
    let published = published_werner_spectrum(p);
    let actual =
        linalg::eigvalsh(states::werner(p).unwrap().matrix()).expect("Werner state is Hermitian");
    let spectrum_max_diff = published
        .iter()
        .zip(actual.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Finding {
        id: "werner-generator-not-unitary".to_string(),
        summary: "the published generator that maps the diagonal state to the Werner state \
                  is not unitary on either sign branch, and the diagonal spectrum it claims \
                  differs from the Werner spectrum"
            .to_string(),
        evidence: Evidence::WernerGenerator {
            p,
            plus_branch_unitarity_violation: plus.unitarity_violation,
            minus_branch_unitarity_violation: minus.unitarity_violation,
            published_spectrum: published,
            werner_spectrum: actual,
            spectrum_max_diff,
        },
    }
}

fn parametrization_finding() -> Finding {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SURVEY_SEED);
    let samples = 200usize;
    let mut max_violation = 0.0f64;
    let mut sum = 0.0f64;
    let mut unitary = 0usize;
    for _ in 0..samples {
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(0.05..0.95);
        let params = UnitaryParams::new(
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
        )
        .unwrap()
        .with_phases(Phases {
            phi11: rng.gen_range(0.0..std::f64::consts::TAU),
            phi21: rng.gen_range(0.0..std::f64::consts::TAU),
            phi31: rng.gen_range(0.0..std::f64::consts::TAU),
            phi41: rng.gen_range(0.0..std::f64::consts::TAU),
            ..Phases::default()
        });
        let violation = match build_from_params(&params) {
            Ok(m) => unitarity_violation(&m),
            Err(_) => continue,
        };
        max_violation = max_violation.max(violation);
        sum += violation;
        if violation <= unitaries::UNITARITY_TOL {
            unitary += 1;
        }
    }
    let regions = [
        ("b=c, d=f, small moduli", 0.3, 0.2, 0.25, 0.1),
        ("b=c, d=f, mid moduli", 0.5, 0.5, 0.5, 0.5),
        ("b=c, d=f, large moduli", 0.8, 0.7, 0.75, 0.6),
    ]
    .into_iter()
    .map(|(description, a, bc, df, h)| {
        let params = UnitaryParams::new(a, bc, bc, df, df, h).unwrap();
        let violation = build_from_params(&params)
            .map(|m| unitarity_violation(&m))
            .unwrap_or(f64::INFINITY);
        RegionCheck {
            description: description.to_string(),
            a,
            bc,
            df,
            h,
            unitarity_violation: violation,
            unitary: violation <= unitaries::UNITARITY_TOL,
        }
    })
    .collect();
    Finding {
        id: "general-parametrization-not-unitary".to_string(),
        summary: "the published closed-form parametrization of the rotation matrix (second \
                  and fourth columns, in particular the square-root combination in the (2,2) \
                  entry and the phase attached to the (1,2) entry) does not produce a unitary \
                  matrix for generic parameter values"
            .to_string(),
        evidence: Evidence::ParametrizationSurvey {
            samples,
            unitary_fraction: unitary as f64 / samples as f64,
            max_violation,
            mean_violation: sum / samples as f64,
            regions,
        },
    }
}

fn trace_finding(p: f64, phi: f64) -> Finding {
    let printed = printed_rotated_werner_ppt(p, phi);
    let printed_trace = printed.trace().re;
    let rotated: DensityMatrix4 =
        states::conjugate(&states::werner(p).unwrap(), &unitaries::rotation_1_4(phi));
    let computed = states::partial_transpose_matrix(rotated.matrix());
    Finding {
        id: "rotated-werner-ppt-trace".to_string(),
        summary: "the printed partially transposed matrix for the rotated Werner state has \
                  trace 2 instead of 1; its diagonal does not depend on the angle, while the \
                  correct partial transpose moves the angle dependence onto the diagonal"
            .to_string(),
        evidence: Evidence::TraceMismatch {
            p,
            phi,
            printed_trace,
            expected_trace: 1.0,
            computed_trace: computed.trace().re,
            printed_vs_computed_max_diff: printed.max_abs_diff(&computed),
        },
    }
}

fn window_finding(p: f64) -> Finding {
    let computed = scan::rotated_werner_boundaries(p, 501).expect("p > 1/3 has a window");
    Finding {
        id: "rotated-werner-window".to_string(),
        summary: "the published separability window for the rotated Werner state follows from \
                  the trace-2 matrix above; the window computed from the correct partial \
                  transpose is different"
            .to_string(),
        evidence: Evidence::Window {
            p,
            published_window: [0.421, 1.15],
            published_formula_window: published_window_from_formula(p),
            computed_window: [computed[0], *computed.last().unwrap()],
        },
    }
}

fn first_column_endpoints_finding(d: f64, f: f64) -> Finding {
    let column_at = |a: f64| {
        let params = UnitaryParams::new(a, 0.0, 0.0, d, f, 0.0).unwrap();
        unitaries::first_column(&params)
    };
    let negativity_at = |a: f64| {
        crate::measures::analyze(&crate::measures::pure_transform(&column_at(a)).unwrap())
            .unwrap()
            .negativity
    };
    let a_star = d * f / (1.0 - f * f + d * d * f * f).sqrt();
    Finding {
        id: "first-column-endpoint-claim".to_string(),
        summary: "the published claim that the first-column pure-state family is separable \
                  only at a=0 and a=1 fails at a=0, where the negativity equals \
                  2 d f sqrt(1-d^2) > 0; the true zeros are a=1 and an interior point \
                  a* = d f / sqrt(1-f^2+d^2 f^2), consistent with the published case list \
                  once its misprinted a=0 prefix on the proportional-d case is dropped"
            .to_string(),
        evidence: Evidence::EndpointClaim {
            d,
            f,
            negativity_at_zero: negativity_at(0.0),
            claimed_negativity_at_zero: 0.0,
            negativity_at_one: negativity_at(1.0),
            interior_zero: a_star,
            negativity_at_interior_zero: negativity_at(a_star),
        },
    }
}

/// Builds the full report. Pure: repeated calls produce identical output.
pub fn report() -> ErrataReport {
    let findings = vec![
        Finding {
            id: "pure-ppt-eigenvalue-formula".to_string(),
            summary: "the published closed form for the pure-state partial-transpose \
                      eigenvalues mixes a product of moduli with a square root of a sum, so \
                      its two branches are dimensionally inconsistent; this crate computes \
                      those eigenvalues numerically instead"
                .to_string(),
            evidence: Evidence::Note {
                detail: "the formula is never evaluated here; the numeric eigenvalues satisfy \
                         the characteristic-polynomial identity to 1e-12, which the printed \
                         form cannot"
                    .to_string(),
            },
        },
        werner_generator_finding(0.6),
        parametrization_finding(),
        trace_finding(0.6, 0.3),
        window_finding(0.6),
        first_column_endpoints_finding(0.6, 0.1),
        Finding {
            id: "pure-separable-case-duplicate".to_string(),
            summary: "in the published list of separable pure-state parameter families, the \
                      case that sets a=0 and then defines d proportionally to a forces d=0, \
                      duplicating the earlier a=0, d=0 case instead of describing a new one"
                .to_string(),
            evidence: Evidence::Note {
                detail: "implemented as written; the case list still covers exactly the \
                         zero-Schmidt-determinant set because the duplicate adds nothing"
                    .to_string(),
            },
        },
    ];
    ErrataReport {
        schema: ERRATA_SCHEMA.to_string(),
        findings,
    }
}
