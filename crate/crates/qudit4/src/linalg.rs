//! Fixed-size complex matrix arithmetic and a self-contained Hermitian
//! eigenvalue solver.
//!
//! Everything downstream (partial transpose spectra, separability verdicts,
//! boundary scans) leans on [`eigvalsh`] as the numeric oracle, so the solver
//! is deliberately dependency-free: a cyclic Jacobi iteration on the 8x8
//! real-symmetric embedding of the 4x4 Hermitian input.

use num_complex::Complex64;
use thiserror::Error;

/// Absolute tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |h_ij - conj(h_ji)| = {violation:.3e})")]
    NotHermitian { violation: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diag:.3e})")]
    NotConverged { sweeps: usize, off_diag: f64 },
}

/// 4x4 complex matrix stored by rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4 {
    pub entries: [[Complex64; 4]; 4],
}

/// 2x2 complex matrix, used for reduced (single-qubit) states and for the
/// blocks of structured rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl ComplexMatrix4 {
    pub const fn new(entries: [[Complex64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::new([[Complex64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = Complex64::new(d[i], 0.0);
        }
        m
    }

    pub fn from_real(entries: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = Complex64::new(entries[i][j], 0.0);
            }
        }
        m
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.entries[i][k] * other.entries[k][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = self.entries[j][i].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate_entries(&self) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] += other.entries[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] -= other.entries[i][j];
            }
        }
        out
    }

    /// Largest entrywise modulus of the difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                max = max.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        max
    }

    pub fn max_abs(&self) -> f64 {
        let mut max = 0.0f64;
        for row in &self.entries {
            for e in row {
                max = max.max(e.norm());
            }
        }
        max
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Max deviation from Hermiticity, `max |h_ij - conj(h_ji)|`.
    pub fn hermiticity_violation(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                max = max.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        max
    }
}

impl ComplexMatrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::new([[Complex64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.entries[0][0] = Complex64::new(1.0, 0.0);
        m.entries[1][1] = Complex64::new(1.0, 0.0);
        m
    }

    /// Real rotation [[cos, sin], [-sin, cos]].
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new([
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += self.entries[i][k] * other.entries[k][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.entries[i][j] = self.entries[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Max entrywise deviation of `U U^dag` from the identity.
    pub fn unitarity_violation(&self) -> f64 {
        let p = self.multiply(&self.adjoint());
        let mut max = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                max = max.max((p.entries[i][j] - Complex64::new(target, 0.0)).norm());
            }
        }
        max
    }
}

fn check_hermitian(h: &ComplexMatrix4) -> Result<(), LinalgError> {
    let violation = h.hermiticity_violation();
    if violation > HERMITICITY_TOL {
        Err(LinalgError::NotHermitian { violation })
    } else {
        Ok(())
    }
}

/// Jacobi eigenvalue iteration on a real symmetric matrix. Optionally
/// accumulates the orthogonal transform into `vecs`.
fn jacobi_symmetric<const N: usize>(
    a: &mut [[f64; N]; N],
    mut vecs: Option<&mut [[f64; N]; N]>,
) -> Result<(), LinalgError> {
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..N {
            for q in (p + 1)..N {
                off += 2.0 * a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < JACOBI_TOL {
            return Ok(());
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                if let Some(v) = vecs.as_deref_mut() {
                    for k in 0..N {
                        let vkp = v[k][p];
                        let vkq = v[k][q];
                        v[k][p] = c * vkp - s * vkq;
                        v[k][q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        // Check once more after the final sweep so a matrix that converges on
        // the last pass is not reported as a failure.
        if sweep == MAX_SWEEPS - 1 {
            let mut off = 0.0f64;
            for p in 0..N {
                for q in (p + 1)..N {
                    off += 2.0 * a[p][q] * a[p][q];
                }
            }
            if off.sqrt() < JACOBI_TOL {
                return Ok(());
            }
            return Err(LinalgError::NotConverged {
                sweeps: MAX_SWEEPS,
                off_diag: off.sqrt(),
            });
        }
    }
    unreachable!()
}

/// Embeds the Hermitian `h = X + iY` as the real symmetric [[X, -Y], [Y, X]],
/// whose spectrum is that of `h` with every eigenvalue doubled.
fn embed(h: &ComplexMatrix4) -> [[f64; 8]; 8] {
    // Symmetrize first so jitter below the Hermiticity tolerance cannot leak
    // into an asymmetric embedding.
    let mut b = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let e = (h.entries[i][j] + h.entries[j][i].conj()) * 0.5;
            b[i][j] = e.re;
            b[i + 4][j + 4] = e.re;
            b[i][j + 4] = -e.im;
            b[i + 4][j] = e.im;
        }
    }
    b
}

/// Eigenvalues of a Hermitian 4x4 matrix, sorted descending.
pub fn eigvalsh(h: &ComplexMatrix4) -> Result<[f64; 4], LinalgError> {
    check_hermitian(h)?;
    let mut b = embed(h);
    jacobi_symmetric(&mut b, None)?;
    let mut diag: [f64; 8] = std::array::from_fn(|i| b[i][i]);
    diag.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // The embedding doubles every eigenvalue; take one of each pair.
    Ok([diag[0], diag[2], diag[4], diag[6]])
}

/// Applies `f` to the spectrum of a Hermitian matrix, `f(H) = sum f(l) P_l`.
pub(crate) fn hermitian_function(
    h: &ComplexMatrix4,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix4, LinalgError> {
    let mut b = embed(h);
    check_hermitian(h)?;
    let mut v = [[0.0f64; 8]; 8];
    for i in 0..8 {
        v[i][i] = 1.0;
    }
    jacobi_symmetric(&mut b, Some(&mut v))?;
    // sum over all 8 embedded eigenvectors counts every complex eigenspace
    // twice, hence the factor 1/2.
    let mut out = ComplexMatrix4::zero();
    for k in 0..8 {
        let fv = f(b[k][k]);
        if fv == 0.0 {
            continue;
        }
        let vec: [Complex64; 4] = std::array::from_fn(|i| Complex64::new(v[i][k], v[i + 4][k]));
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] += vec[i] * vec[j].conj() * (0.5 * fv);
            }
        }
    }
    Ok(out)
}

/// Coefficients `(a1, a2, a3, a4)` of the characteristic polynomial
/// `l^4 + a1 l^3 + a2 l^2 + a3 l + a4`, from the trace power sums.
pub fn char_poly_coeffs(h: &ComplexMatrix4) -> Result<(f64, f64, f64, f64), LinalgError> {
    check_hermitian(h)?;
    let h2 = h.multiply(h);
    let h3 = h2.multiply(h);
    let h4 = h3.multiply(h);
    let p1 = h.trace().re;
    let p2 = h2.trace().re;
    let p3 = h3.trace().re;
    let p4 = h4.trace().re;
    let e1 = p1;
    let e2 = (p1 * p1 - p2) / 2.0;
    let e3 = (p1.powi(3) - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
    let e4 = (p1.powi(4) - 6.0 * p1 * p1 * p2 + 3.0 * p2 * p2 + 8.0 * p1 * p3 - 6.0 * p4) / 24.0;
    Ok((-e1, e2, -e3, e4))
}

/// Evaluates the monic quartic with the given trailing coefficients.
pub fn eval_char_poly(coeffs: (f64, f64, f64, f64), x: f64) -> f64 {
    let (a1, a2, a3, a4) = coeffs;
    (((x + a1) * x + a2) * x + a3) * x + a4
}
