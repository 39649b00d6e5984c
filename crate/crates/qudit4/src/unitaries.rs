//! Construction and validation of 4x4 unitary rotations.
//!
//! Covers the generic six-modulus/ten-phase parametrization, the structured
//! families (cellular, block, X-type), the one-angle rotation acting on levels
//! 1 and 4, and the two Werner-state generators: the literal published one
//! (kept as a diagnostic, since it fails unitarity for generic `p`) and a
//! corrected construction that actually reproduces the Werner state.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{ComplexMatrix2, ComplexMatrix4};
use crate::states::Spectrum4;

/// Entrywise tolerance on `U U^dag = I`.
pub const UNITARITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum UnitaryError {
    #[error("matrix is not unitary (max |U U^dag - I| = {violation:.3e})")]
    NotUnitary {
        violation: f64,
        constructed: Box<ComplexMatrix4>,
    },
    #[error("degenerate parameters: {reason}")]
    DegenerateParams { reason: String },
    #[error("parameter p = {p} outside [-1/3, 1]")]
    ParameterOutOfRange { p: f64 },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("modulus `{name}` = {value} outside [0, 1]")]
    ModulusOutOfRange { name: String, value: f64 },
    #[error("missing required modulus `{0}`")]
    MissingModulus(String),
    #[error("cannot parse `{0}` as a number")]
    BadNumber(String),
}

/// A validated 4x4 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary4 {
    matrix: ComplexMatrix4,
}

impl Unitary4 {
    /// Wraps `m` iff it is unitary within [`UNITARITY_TOL`].
    pub fn validate(m: ComplexMatrix4) -> Result<Self, UnitaryError> {
        let violation = unitarity_violation(&m);
        if violation > UNITARITY_TOL {
            Err(UnitaryError::NotUnitary {
                violation,
                constructed: Box::new(m),
            })
        } else {
            Ok(Self { matrix: m })
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.multiply(&other.matrix),
        }
    }
}

/// Max entrywise deviation of `U U^dag` and `U^dag U` from the identity.
pub fn unitarity_violation(m: &ComplexMatrix4) -> f64 {
    let left = m.multiply(&m.adjoint());
    let right = m.adjoint().multiply(m);
    let id = ComplexMatrix4::identity();
    left.max_abs_diff(&id).max(right.max_abs_diff(&id))
}

/// The ten phases appearing in the first-column parametrization and the
/// full-matrix construction. All default to zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Phases {
    pub phi11: f64,
    pub phi12: f64,
    pub phi13: f64,
    pub phi14: f64,
    pub phi21: f64,
    pub phi22: f64,
    pub phi23: f64,
    pub phi31: f64,
    pub phi32: f64,
    pub phi41: f64,
}

/// Coordinates of the generic unitary parametrization: six moduli in [0, 1]
/// and ten phases in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub h: f64,
    pub phases: Phases,
}

impl UnitaryParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, f: f64, h: f64) -> Result<Self, UnitaryError> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d), ("f", f), ("h", h)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(UnitaryError::ModulusOutOfRange {
                    name: name.to_string(),
                    value: v,
                });
            }
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            f,
            h,
            phases: Phases::default(),
        })
    }

    pub fn with_phases(mut self, phases: Phases) -> Self {
        self.phases = phases;
        self
    }

    /// Parses `key=value` pairs as accepted on the command line. Moduli
    /// (a, b, c, d, f, h) are required; phases default to zero.
    pub fn parse_kv<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Self, UnitaryError> {
        let mut map = BTreeMap::new();
        for pair in pairs {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| UnitaryError::BadNumber(pair.to_string()))?;
            let value: f64 = crate::scan::parse_number(value)
                .ok_or_else(|| UnitaryError::BadNumber(value.to_string()))?;
            map.insert(key.to_string(), value);
        }
        Self::from_map(&map)
    }

    pub fn from_map(map: &BTreeMap<String, f64>) -> Result<Self, UnitaryError> {
        let modulus = |name: &str| {
            map.get(name)
                .copied()
                .ok_or_else(|| UnitaryError::MissingModulus(name.to_string()))
        };
        let mut params = Self::new(
            modulus("a")?,
            modulus("b")?,
            modulus("c")?,
            modulus("d")?,
            modulus("f")?,
            modulus("h")?,
        )?;
        for (key, value) in map {
            match key.as_str() {
                "a" | "b" | "c" | "d" | "f" | "h" => {}
                "phi11" => params.phases.phi11 = *value,
                "phi12" => params.phases.phi12 = *value,
                "phi13" => params.phases.phi13 = *value,
                "phi14" => params.phases.phi14 = *value,
                "phi21" => params.phases.phi21 = *value,
                "phi22" => params.phases.phi22 = *value,
                "phi23" => params.phases.phi23 = *value,
                "phi31" => params.phases.phi31 = *value,
                "phi32" => params.phases.phi32 = *value,
                "phi41" => params.phases.phi41 = *value,
                other => return Err(UnitaryError::UnknownParameter(other.to_string())),
            }
        }
        Ok(params)
    }

    /// `alpha = (f^2 + d^2 - f^2 d^2)^{-1/2}`; undefined at f = d = 0.
    pub fn alpha(&self) -> Result<f64, UnitaryError> {
        let denom = self.f * self.f + self.d * self.d - self.f * self.f * self.d * self.d;
        if denom <= 0.0 {
            Err(UnitaryError::DegenerateParams {
                reason: "alpha undefined: f = d = 0".to_string(),
            })
        } else {
            Ok(denom.sqrt().recip())
        }
    }

    /// `beta = (b^2 + c^2 - b^2 c^2)^{-1/2}`; undefined at b = c = 0.
    pub fn beta(&self) -> Result<f64, UnitaryError> {
        let denom = self.b * self.b + self.c * self.c - self.b * self.b * self.c * self.c;
        if denom <= 0.0 {
            Err(UnitaryError::DegenerateParams {
                reason: "beta undefined: b = c = 0".to_string(),
            })
        } else {
            Ok(denom.sqrt().recip())
        }
    }
}

fn phase(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

/// First column of the rotation: `u11 = a e^{i phi11}`,
/// `u21 = d sqrt(1-a^2) e^{i phi21}`, `u31 = f sqrt((1-a^2)(1-d^2)) e^{i phi31}`,
/// `u41 = sqrt((1-a^2)(1-d^2)(1-f^2)) e^{i phi41}`. Unit norm by construction.
pub fn first_column(p: &UnitaryParams) -> [Complex64; 4] {
    let UnitaryParams {
        a, d, f, phases, ..
    } = *p;
    let ra = (1.0 - a * a).max(0.0).sqrt();
    let rd = (1.0 - d * d).max(0.0).sqrt();
    let rf = (1.0 - f * f).max(0.0).sqrt();
    [
        phase(phases.phi11) * a,
        phase(phases.phi21) * d * ra,
        phase(phases.phi31) * f * ra * rd,
        phase(phases.phi41) * ra * rd * rf,
    ]
}

/// Builds the full matrix from the published closed-form expressions, then
/// validates it.
///
/// The printed formulas for several entries (notably u22 and u12) appear to
/// carry transcription errors, so construction is treated as data under test:
/// the matrix is always assembled, and a failed unitarity check returns
/// [`UnitaryError::NotUnitary`] carrying the constructed matrix and the
/// measured violation rather than a panic.
pub fn from_params(p: &UnitaryParams) -> Result<Unitary4, UnitaryError> {
    Unitary4::validate(build_from_params(p)?)
}

/// Assembles the parametrized matrix without the unitarity check.
pub fn build_from_params(p: &UnitaryParams) -> Result<ComplexMatrix4, UnitaryError> {
    let alpha = p.alpha()?;
    let beta = p.beta()?;
    let UnitaryParams {
        a,
        b,
        c,
        d,
        f,
        h,
        phases: ph,
    } = *p;
    let one = |x: f64| (1.0 - x * x).max(0.0);
    let (ra2, rb2, rc2, rd2, rf2, rh2) = (one(a), one(b), one(c), one(d), one(f), one(h));
    let (ra, rb, rc, rd, rf, rh) = (
        ra2.sqrt(),
        rb2.sqrt(),
        rc2.sqrt(),
        rd2.sqrt(),
        rf2.sqrt(),
        rh2.sqrt(),
    );

    let col1 = first_column(p);

    let u12 = phase(ph.phi22) * b * ra; // phase printed as phi22, not phi12
    let u13 = phase(ph.phi13) * c * ra * rb;
    let u14 = phase(ph.phi14) * ra * rb * rc;

    let u22 = -phase(ph.phi12 + ph.phi21 - ph.phi11) * a * b * d
        + (phase(ph.phi22) * c * f * h + Complex64::new(c * d * rf2 * rh2, 0.0))
            .sqrt()
            .scale(alpha * beta * (rb2 * rd2).sqrt())
            * phase(ph.phi32)
        + Complex64::new(alpha * beta * (rb2 * rd2).sqrt() * b * rc, 0.0)
            * phase(ph.phi23)
            * (Complex64::new(f * rh, 0.0) - phase(ph.phi32 - ph.phi22) * d * h * rf);

    let u23 = -phase(ph.phi21 + ph.phi13 - ph.phi11) * a * c * d * rb
        - phase(ph.phi13 - ph.phi12).scale(alpha * beta * rd)
            * (Complex64::new(b, 0.0)
                * (phase(ph.phi22) * f * h + phase(ph.phi32) * d * (rf2 * rh2).sqrt())
                - Complex64::new(c * rb2 * rc, 0.0)
                    * phase(ph.phi23)
                    * (Complex64::new(f * rh, 0.0) - phase(ph.phi32 - ph.phi22) * d * h * rf));

    let u24 = -phase(ph.phi21 + ph.phi41 - ph.phi11) * a * d * (rb2 * rc2).sqrt()
        - phase(ph.phi14 + ph.phi23 - ph.phi12).scale(alpha / beta * rd)
            * (Complex64::new(f * rh, 0.0) - phase(ph.phi32 - ph.phi22) * d * h * rf2);

    let u32 = -phase(ph.phi12 + ph.phi31 - ph.phi11) * a * b * f * rd
        + phase(-ph.phi21).scale(alpha * beta * rb)
            * (Complex64::new(c, 0.0)
                * (-phase(ph.phi22 + ph.phi31) * d * h
                    + phase(ph.phi31 + ph.phi32) * f * rd2 * (rf2 * rh2).sqrt())
                - Complex64::new(b * rc, 0.0)
                    * phase(ph.phi23 + ph.phi31)
                    * (Complex64::new(d * rh, 0.0)
                        + phase(ph.phi32 - ph.phi22) * h * f * rd2 * rf));

    let u33 = -phase(ph.phi13 + ph.phi31 - ph.phi11) * a * c * f * (rb2 * rd2).sqrt()
        - phase(ph.phi13 - ph.phi12 - ph.phi21).scale(alpha * beta)
            * (-phase(ph.phi31 + ph.phi22) * b * d * h
                + phase(ph.phi31 + ph.phi32) * b * f * rd2 * (rf2 * rh2).sqrt()
                + Complex64::new(c * (rb2 * rc2).sqrt(), 0.0)
                    * phase(ph.phi23 + ph.phi31)
                    * (Complex64::new(d * rh, 0.0)
                        + phase(ph.phi32 - ph.phi22) * h * f * rd2 * rf));

    let u34 = -phase(ph.phi31 + ph.phi14 - ph.phi11) * a * f * (rb2 * rc2 * rd2).sqrt()
        + phase(ph.phi14 + ph.phi31 + ph.phi23 - ph.phi12 - ph.phi21).scale(beta / alpha)
            * (Complex64::new(d * rh, 0.0) + phase(ph.phi32 - ph.phi22) * h * f * rd2 * rf);

    let u42 = -phase(ph.phi12 + ph.phi41 - ph.phi11) * a * b * (rd2 * rf2).sqrt()
        - phase(ph.phi32 + ph.phi41 - ph.phi21).scale(alpha / beta * rb)
            * (Complex64::new(c * rh, 0.0) - phase(ph.phi23 - ph.phi22) * b * h * rc);

    let u43 = -phase(ph.phi13 + ph.phi41 - ph.phi11) * a * c * (rb2 * rd2 * rf2).sqrt()
        + phase(ph.phi32 + ph.phi13 + ph.phi41 - ph.phi12 - ph.phi21).scale(alpha / beta)
            * (Complex64::new(b * rh, 0.0) + phase(ph.phi23 - ph.phi22) * c * h * rb2 * rc);

    let u44 = -phase(ph.phi14 + ph.phi41 - ph.phi11) * a * (rb2 * rc2 * rd2 * rf2).sqrt()
        - phase(ph.phi14 + ph.phi41 + ph.phi23 + ph.phi32 - ph.phi12 - ph.phi21 - ph.phi22)
            .scale(alpha * beta * h);

    Ok(ComplexMatrix4::new([
        [col1[0], u12, u13, u14],
        [col1[1], u22, u23, u24],
        [col1[2], u32, u33, u34],
        [col1[3], u42, u43, u44],
    ]))
}

/// One-angle rotation acting on levels 1 and 4: identity except rows/columns
/// 1 and 4 carrying [[cos, sin], [-sin, cos]].
pub fn rotation_1_4(phi: f64) -> Unitary4 {
    let (s, c) = phi.sin_cos();
    let mut m = ComplexMatrix4::identity();
    m.entries[0][0] = Complex64::new(c, 0.0);
    m.entries[0][3] = Complex64::new(s, 0.0);
    m.entries[3][0] = Complex64::new(-s, 0.0);
    m.entries[3][3] = Complex64::new(c, 0.0);
    Unitary4 { matrix: m }
}

/// Sparsity families of structured rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuredKind {
    /// Blocks on rows/columns {1,3} and {2,4}.
    Cellular,
    /// Leading and trailing 2x2 diagonal blocks.
    Block,
    /// Blocks on rows/columns {1,4} and {2,3}.
    XType,
}

impl StructuredKind {
    /// Index pairs (0-based) carrying the two blocks.
    pub fn positions(&self) -> ([usize; 2], [usize; 2]) {
        match self {
            StructuredKind::Cellular => ([0, 2], [1, 3]),
            StructuredKind::Block => ([0, 1], [2, 3]),
            StructuredKind::XType => ([0, 3], [1, 2]),
        }
    }
}

/// Embeds two 2x2 unitary blocks into the sparsity pattern of `kind`.
pub fn structured(
    kind: StructuredKind,
    first: &ComplexMatrix2,
    second: &ComplexMatrix2,
) -> Result<Unitary4, UnitaryError> {
    for block in [first, second] {
        let violation = block.unitarity_violation();
        if violation > UNITARITY_TOL {
            return Err(UnitaryError::NotUnitary {
                violation,
                constructed: Box::new(embed_blocks(kind, first, second)),
            });
        }
    }
    Unitary4::validate(embed_blocks(kind, first, second))
}

fn embed_blocks(
    kind: StructuredKind,
    first: &ComplexMatrix2,
    second: &ComplexMatrix2,
) -> ComplexMatrix4 {
    let (pos1, pos2) = kind.positions();
    let mut m = ComplexMatrix4::zero();
    for (pos, block) in [(pos1, first), (pos2, second)] {
        for i in 0..2 {
            for j in 0..2 {
                m.entries[pos[i]][pos[j]] = block.entries[i][j];
            }
        }
    }
    m
}

/// Sign branch of the published Werner generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Diagnostic output of the literal published Werner generator.
#[derive(Debug, Clone)]
pub struct PaperWernerDiagnostic {
    /// The X-type matrix assembled exactly as printed.
    pub matrix: ComplexMatrix4,
    /// Measured deviation of the assembled matrix from unitarity.
    pub unitarity_violation: f64,
    /// The published source spectrum `l1 = l4 = (p+1 +- sqrt(2) p)/4`,
    /// `l2 = l3 = (1-p)/4`.
    pub spectrum: [f64; 4],
    pub branch: Branch,
}

/// Assembles the published X-type Werner generator verbatim and reports its
/// unitarity violation. Never errors: the construction is expected to fail
/// validation for generic `p`, and measuring by how much is the point.
pub fn werner_generator_paper(p: f64, branch: Branch) -> PaperWernerDiagnostic {
    let s = branch.sign();
    let l1 = (p + 1.0 + s * std::f64::consts::SQRT_2 * p) / 4.0;
    let l2 = (1.0 - p) / 4.0;
    let spectrum = [l1, l2, l2, l1];
    let u11 = (p + s * (p * p + 8.0 * l1 * (p + 1.0)).sqrt()) / (2.0 * (p + 1.0));
    let u22 = s * 2.0 * l2.sqrt() / (1.0 - p).sqrt();
    let u33 = u22;
    let u44 = (-p + s * (p * p + 8.0 * spectrum[3] * (p + 1.0)).sqrt()) / (2.0 * (p + 1.0));
    let u41 = -u11;
    let u14 = u44;
    let mut m = ComplexMatrix4::zero();
    m.entries[0][0] = Complex64::new(u11, 0.0);
    m.entries[0][3] = Complex64::new(u14, 0.0);
    m.entries[1][1] = Complex64::new(u22, 0.0);
    m.entries[2][2] = Complex64::new(u33, 0.0);
    m.entries[3][0] = Complex64::new(u41, 0.0);
    m.entries[3][3] = Complex64::new(u44, 0.0);
    PaperWernerDiagnostic {
        matrix: m,
        unitarity_violation: unitarity_violation(&m),
        spectrum,
        branch,
    }
}

/// Working replacement for the published generator: a pi/4 rotation on levels
/// 1 and 4 applied to the spectrum `((1+3p)/4, (1-p)/4, (1-p)/4, (1-p)/4)`
/// reproduces the Werner state entrywise.
pub fn werner_generator_corrected(p: f64) -> Result<(Unitary4, Spectrum4), UnitaryError> {
    if !(-1.0 / 3.0..=1.0).contains(&p) {
        return Err(UnitaryError::ParameterOutOfRange { p });
    }
    let spectrum = Spectrum4::new([
        (1.0 + 3.0 * p) / 4.0,
        (1.0 - p) / 4.0,
        (1.0 - p) / 4.0,
        (1.0 - p) / 4.0,
    ])
    .expect("valid by construction for p in [-1/3, 1]");
    // The -pi/4 branch puts the corner at +(l1-l4)/2 = +p/2, matching the
    // Werner sign convention.
    Ok((rotation_1_4(-FRAC_PI_4), spectrum))
}

/// Random unitary for tests and sampling modes: a product of complex Givens
/// rotations over all index pairs with random angles and phases, plus a
/// random diagonal phase. Not Haar-distributed.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary4 {
    use std::f64::consts::PI;
    let mut m = ComplexMatrix4::identity();
    for p in 0..4 {
        for q in (p + 1)..4 {
            let theta = rng.gen_range(0.0..PI);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let (s, c) = theta.sin_cos();
            let mut g = ComplexMatrix4::identity();
            g.entries[p][p] = Complex64::new(c, 0.0);
            g.entries[p][q] = Complex64::from_polar(s, phi);
            g.entries[q][p] = -Complex64::from_polar(s, -phi);
            g.entries[q][q] = Complex64::new(c, 0.0);
            m = m.multiply(&g);
        }
    }
    let mut d = ComplexMatrix4::zero();
    for i in 0..4 {
        d.entries[i][i] = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    }
    Unitary4 {
        matrix: m.multiply(&d),
    }
}

/// Random 2x2 unitary block for tests, same construction as [`random_unitary`].
pub fn random_block<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix2 {
    use std::f64::consts::PI;
    let theta = rng.gen_range(0.0..PI);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let (s, c) = theta.sin_cos();
    let d1 = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    let d2 = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    ComplexMatrix2::new([
        [
            Complex64::new(c, 0.0) * d1,
            Complex64::from_polar(s, phi) * d2,
        ],
        [
            -Complex64::from_polar(s, -phi) * d1,
            Complex64::new(c, 0.0) * d2,
        ],
    ])
}

trait ComplexScale {
    fn scale(self, s: f64) -> Complex64;
}

impl ComplexScale for Complex64 {
    fn scale(self, s: f64) -> Complex64 {
        self * s
    }
}
