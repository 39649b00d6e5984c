//! Density-matrix domain types: diagonal construction from a spectrum,
//! unitary conjugation, partial transpose, partial traces and purity, the
//! X-state view with its closed forms, the Werner family, and the two-qubit /
//! spin-3/2 index labelings.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix2, ComplexMatrix4, LinalgError};
use crate::unitaries::Unitary4;

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const SPECTRUM_SUM_TOL: f64 = 1e-12;
/// Largest off-X-pattern entry allowed when extracting an [`XState`] view.
pub const X_MASS_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("invalid spectrum {values:?}: {reason}")]
    InvalidSpectrum { values: [f64; 4], reason: String },
    #[error("state is not Hermitian (violation {violation:.3e})")]
    NotHermitian { violation: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("state is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },
    #[error("matrix entries are not finite")]
    NotFinite,
    #[error("matrix is not an X-state (off-pattern mass {off_mass:.3e})")]
    NotXState { off_mass: f64 },
    #[error("Werner parameter p = {p} outside [-1/3, 1]")]
    ParameterOutOfRange { p: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("unknown labeling `{0}` (expected `two_qubit` or `spin_3_2`)")]
    UnknownLabeling(String),
    #[error("cannot parse state file: {0}")]
    Parse(String),
}

/// Interpretation tag for the four basis levels. Metadata only: every measure
/// is a function of the numeric matrix and ignores the tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labeling {
    /// 1 = (1/2,1/2), 2 = (1/2,-1/2), 3 = (-1/2,1/2), 4 = (-1/2,-1/2).
    TwoQubit,
    /// 1 = 3/2, 2 = 1/2, 3 = -1/2, 4 = -3/2.
    #[serde(rename = "spin_3_2")]
    SpinThreeHalves,
}

/// Four nonnegative probabilities summing to one: the spectrum of a state and
/// the diagonal of the generating matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum4 {
    values: [f64; 4],
}

impl Spectrum4 {
    pub fn new(values: [f64; 4]) -> Result<Self, StateError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(StateError::InvalidSpectrum {
                values,
                reason: "non-finite entry".to_string(),
            });
        }
        if let Some(neg) = values.iter().find(|&&v| v < 0.0) {
            return Err(StateError::InvalidSpectrum {
                values,
                reason: format!("negative probability {neg}"),
            });
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(StateError::InvalidSpectrum {
                values,
                reason: format!("sum {sum} != 1"),
            });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> [f64; 4] {
        self.values
    }

    pub fn sorted_descending(&self) -> [f64; 4] {
        let mut v = self.values;
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    /// Uniform draw from the probability simplex (normalized exponentials).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut v: [f64; 4] =
                std::array::from_fn(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln());
            let sum: f64 = v.iter().sum();
            for x in v.iter_mut() {
                *x /= sum;
            }
            // Renormalization jitter can leave the sum off by one ulp; snap it.
            let correction: f64 = v.iter().sum();
            v[3] += 1.0 - correction;
            if v[3] >= 0.0 {
                return Self { values: v };
            }
        }
    }
}

/// A validated 4x4 density matrix: Hermitian, unit trace, positive
/// semidefinite, plus a labeling tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    matrix: ComplexMatrix4,
    labeling: Labeling,
}

impl DensityMatrix4 {
    pub fn new(matrix: ComplexMatrix4, labeling: Labeling) -> Result<Self, StateError> {
        if !matrix.is_finite() {
            return Err(StateError::NotFinite);
        }
        let violation = matrix.hermiticity_violation();
        if violation > linalg::HERMITICITY_TOL {
            return Err(StateError::NotHermitian { violation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(StateError::TraceNotOne { trace });
        }
        let eigs = linalg::eigvalsh(&matrix)?;
        let min_eig = eigs[3];
        if min_eig < -PSD_TOL {
            return Err(StateError::NotPositive { min_eig });
        }
        Ok(Self { matrix, labeling })
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn spectrum(&self) -> Result<[f64; 4], StateError> {
        Ok(linalg::eigvalsh(&self.matrix)?)
    }

    /// Tag switch only; the numeric matrix is untouched.
    pub fn relabel(&self, target: Labeling) -> Self {
        Self {
            matrix: self.matrix,
            labeling: target,
        }
    }
}

/// Diagonal state built from a spectrum (two-qubit labeling by default).
pub fn from_spectrum(s: &Spectrum4) -> DensityMatrix4 {
    DensityMatrix4 {
        matrix: ComplexMatrix4::from_diagonal(s.values()),
        labeling: Labeling::TwoQubit,
    }
}

/// `W rho W^dag`. Preserves spectrum and trace; the result is validated.
pub fn conjugate(rho: &DensityMatrix4, w: &Unitary4) -> DensityMatrix4 {
    let m = w
        .matrix()
        .multiply(rho.matrix())
        .multiply(&w.matrix().adjoint());
    // Conjugation by a validated unitary preserves all state invariants up to
    // roundoff well below the constructor tolerances.
    DensityMatrix4 {
        matrix: m,
        labeling: rho.labeling,
    }
}

/// Partial transpose with respect to the second party in the labeling
/// 1=(00), 2=(01), 3=(10), 4=(11).
pub fn partial_transpose(rho: &DensityMatrix4) -> ComplexMatrix4 {
    partial_transpose_matrix(rho.matrix())
}

/// Partial transpose of a raw matrix: `(ppt)_{(i,j),(k,l)} = m_{(i,l),(k,j)}`.
pub fn partial_transpose_matrix(m: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.entries[2 * i + j][2 * k + l] = m.entries[2 * i + l][2 * k + j];
                }
            }
        }
    }
    out
}

/// Reduced single-qubit states and their linear-entropy purity parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub rho_a: ComplexMatrix2,
    pub rho_b: ComplexMatrix2,
    /// `mu_1 = 1 - Tr rho_a^2`, in [0, 3/4].
    pub mu1: f64,
    /// `mu_2 = 1 - Tr rho_b^2`, in [0, 3/4].
    pub mu2: f64,
}

/// Partial traces over each subsystem plus the purity parameters.
pub fn reduce(rho: &DensityMatrix4) -> ReducedState {
    let m = &rho.matrix.entries;
    let rho_a = ComplexMatrix2::new([
        [m[0][0] + m[1][1], m[0][2] + m[1][3]],
        [m[2][0] + m[3][1], m[2][2] + m[3][3]],
    ]);
    let rho_b = ComplexMatrix2::new([
        [m[0][0] + m[2][2], m[0][1] + m[2][3]],
        [m[1][0] + m[3][2], m[1][1] + m[3][3]],
    ]);
    let purity = |r: &ComplexMatrix2| 1.0 - r.multiply(r).trace().re;
    ReducedState {
        rho_a,
        rho_b,
        mu1: purity(&rho_a),
        mu2: purity(&rho_b),
    }
}

/// View of a density (or partial-transpose) matrix whose only nonzero entries
/// lie on the main diagonal and anti-diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r44: f64,
    pub r14: Complex64,
    pub r23: Complex64,
}

impl XState {
    /// Extracts the X view, erroring if any off-pattern entry exceeds
    /// [`X_MASS_TOL`]. PSD is deliberately not required so the view also
    /// applies to partial-transpose matrices.
    pub fn from_matrix(m: &ComplexMatrix4) -> Result<Self, StateError> {
        let mut off_mass = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    off_mass = off_mass.max(m.entries[i][j].norm());
                }
            }
        }
        if off_mass > X_MASS_TOL {
            return Err(StateError::NotXState { off_mass });
        }
        Ok(Self {
            r11: m.entries[0][0].re,
            r22: m.entries[1][1].re,
            r33: m.entries[2][2].re,
            r44: m.entries[3][3].re,
            r14: m.entries[0][3],
            r23: m.entries[1][2],
        })
    }

    pub fn from_state(rho: &DensityMatrix4) -> Result<Self, StateError> {
        Self::from_matrix(rho.matrix())
    }

    pub fn to_matrix(&self) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::from_diagonal([self.r11, self.r22, self.r33, self.r44]);
        m.entries[0][3] = self.r14;
        m.entries[3][0] = self.r14.conj();
        m.entries[1][2] = self.r23;
        m.entries[2][1] = self.r23.conj();
        m
    }

    /// PSD holds iff `r22 r33 >= |r23|^2` and `r11 r44 >= |r14|^2` (given
    /// nonnegative diagonal).
    pub fn is_psd(&self, tol: f64) -> bool {
        self.r11 >= -tol
            && self.r22 >= -tol
            && self.r33 >= -tol
            && self.r44 >= -tol
            && self.r22 * self.r33 + tol >= self.r23.norm_sqr()
            && self.r11 * self.r44 + tol >= self.r14.norm_sqr()
    }
}

/// The `e`-notation quantities and the partial-transpose eigenvalues of an
/// X-state in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XClosedForms {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    /// `{e1 - e3, e1 + e3, e2 - e4, e2 + e4}`: the spectrum of the partial
    /// transpose of the X-state.
    pub ppt_eigenvalues: [f64; 4],
}

/// Closed forms: `e1 = (r11+r44)/2`, `e2 = (r22+r33)/2`,
/// `e3 = sqrt((r11-r44)^2 + 4|r23|^2)/2`, `e4 = sqrt((r22-r33)^2 + 4|r14|^2)/2`.
pub fn x_closed_forms(x: &XState) -> XClosedForms {
    let e1 = (x.r11 + x.r44) / 2.0;
    let e2 = (x.r22 + x.r33) / 2.0;
    let e3 = ((x.r11 - x.r44).powi(2) + 4.0 * x.r23.norm_sqr()).sqrt() / 2.0;
    let e4 = ((x.r22 - x.r33).powi(2) + 4.0 * x.r14.norm_sqr()).sqrt() / 2.0;
    XClosedForms {
        e1,
        e2,
        e3,
        e4,
        ppt_eigenvalues: [e1 - e3, e1 + e3, e2 - e4, e2 + e4],
    }
}

/// The Werner state: diagonal `((1+p)/4, (1-p)/4, (1-p)/4, (1+p)/4)` with
/// anti-diagonal corners `p/2`, for `p` in [-1/3, 1].
pub fn werner(p: f64) -> Result<DensityMatrix4, StateError> {
    if !(-1.0 / 3.0..=1.0).contains(&p) {
        return Err(StateError::ParameterOutOfRange { p });
    }
    let mut m = ComplexMatrix4::from_diagonal([
        (1.0 + p) / 4.0,
        (1.0 - p) / 4.0,
        (1.0 - p) / 4.0,
        (1.0 + p) / 4.0,
    ]);
    m.entries[0][3] = Complex64::new(p / 2.0, 0.0);
    m.entries[3][0] = Complex64::new(p / 2.0, 0.0);
    DensityMatrix4::new(m, Labeling::TwoQubit)
}

/// On-disk JSON schema: `{"labeling": "two_qubit"|"spin_3_2",
/// "matrix": [[[re, im]; 4]; 4]}`.
#[derive(Debug, Serialize, Deserialize)]
struct DensityMatrixFile {
    labeling: Labeling,
    matrix: [[[f64; 2]; 4]; 4],
}

pub fn to_json(rho: &DensityMatrix4) -> String {
    let matrix = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let e = rho.matrix.entries[i][j];
            [e.re, e.im]
        })
    });
    let file = DensityMatrixFile {
        labeling: rho.labeling,
        matrix,
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<DensityMatrix4, StateError> {
    let file: DensityMatrixFile =
        serde_json::from_str(text).map_err(|e| StateError::Parse(e.to_string()))?;
    let mut m = ComplexMatrix4::zero();
    for i in 0..4 {
        for j in 0..4 {
            m.entries[i][j] = Complex64::new(file.matrix[i][j][0], file.matrix[i][j][1]);
        }
    }
    DensityMatrix4::new(m, file.labeling)
}
