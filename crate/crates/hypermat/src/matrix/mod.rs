//! Dense complex matrix arithmetic, spectral quantities, and matrix
//! functions via the complex Schur form.
//!
//! `CMatrix` is the universal value type of the library: a validated dense
//! square matrix of `Complex64` entries. All spectral routines go through
//! the complex Schur decomposition; the Hermitian-part eigenvalues back the
//! logarithmic norm.

pub mod holo;
pub mod schur;
pub mod triple;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use holo::{holomorphic_apply, matrix_power_scalar, ExpScaled, Holomorphic, PlainFn};
pub use schur::SchurForm;
pub use triple::{random_commuting_triple, CommutingTriple, PSpec, StabilityConstraints};

/// Dense square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    inner: DMatrix<Complex64>,
}

impl CMatrix {
    /// Builds from row-major nested vectors; rejects ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("matrix must have dimension >= 1".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has length {} in a {dim}-dimensional matrix",
                    row.len()
                )));
            }
        }
        let inner = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
        Self::from_dmatrix(inner)
    }

    /// Wraps an `nalgebra` matrix, validating squareness and finiteness.
    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() || inner.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "expected nonempty square matrix, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        for i in 0..inner.nrows() {
            for j in 0..inner.ncols() {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(CMatrix { inner })
    }

    pub fn identity(dim: usize) -> Self {
        CMatrix {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    /// The scalar matrix `z * I`.
    pub fn scalar(dim: usize, z: Complex64) -> Self {
        CMatrix {
            inner: DMatrix::from_diagonal_element(dim, dim, z),
        }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        CMatrix {
            inner: DMatrix::from_fn(diag.len(), diag.len(), |i, j| {
                if i == j {
                    diag[i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// 1x1 matrix holding a single complex value.
    pub fn from_complex(z: Complex64) -> Self {
        Self::scalar(1, z)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn adjoint(&self) -> Self {
        CMatrix {
            inner: self.inner.adjoint(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix {
            inner: self.inner.map(|z| z * s),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Adds `z * I`.
    pub fn shift(&self, z: Complex64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += z;
        }
        CMatrix { inner: m }
    }

    pub fn shift_re(&self, s: f64) -> Self {
        self.shift(Complex64::new(s, 0.0))
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.inner.norm()
    }

    /// Spectral (two-) norm via singular values.
    pub fn norm2(&self) -> f64 {
        if self.dim() == 1 {
            return self.inner[(0, 0)].norm();
        }
        self.inner
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Inverse via LU; errors if singular to working precision.
    pub fn inverse(&self) -> Result<Self> {
        self.inner
            .clone()
            .try_inverse()
            .map(|inner| CMatrix { inner })
            .ok_or_else(|| Error::Domain("matrix is singular".into()))
    }

    /// Norm of the commutator `AB - BA`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let ab = &self.inner * &other.inner;
        let ba = &other.inner * &self.inner;
        (ab - ba).norm()
    }

    /// True when `‖AB - BA‖ <= tol_factor * (1 + ‖A‖‖B‖)`.
    pub fn commutes_with(&self, other: &Self, tol_factor: f64) -> bool {
        self.commutator_norm(other) <= tol_factor * (1.0 + self.norm_fro() * other.norm_fro())
    }

    /// The single entry of a 1x1 matrix.
    pub fn as_complex(&self) -> Option<Complex64> {
        if self.dim() == 1 {
            Some(self.inner[(0, 0)])
        } else {
            None
        }
    }

    /// Detects `-k * I` for a non-negative integer k, exactly (bitwise zeros
    /// off the diagonal, exact integer on it). Used to recognize terminating
    /// hypergeometric numerator parameters.
    pub fn as_neg_int_scalar(&self) -> Option<u64> {
        let d = self.inner[(0, 0)];
        if d.im != 0.0 || d.re > 0.0 || d.re.fract() != 0.0 {
            return None;
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let want = if i == j { d } else { Complex64::new(0.0, 0.0) };
                if self.inner[(i, j)] != want {
                    return None;
                }
            }
        }
        Some((-d.re) as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl std::ops::Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl std::ops::Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl std::ops::Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl std::ops::Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix {
            inner: -self.inner.clone(),
        }
    }
}

/// The library-wide relative difference `‖X−Y‖₂ / (1 + max(‖X‖₂, ‖Y‖₂))`.
pub fn rel_diff(x: &CMatrix, y: &CMatrix) -> f64 {
    let d = (x - y).norm2();
    d / (1.0 + x.norm2().max(y.norm2()))
}

// ---------------------------------------------------------------------------
// Spectral quantities
// ---------------------------------------------------------------------------

/// Eigenvalues, Schur unitary factor, and Schur triangular factor of a matrix.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: Vec<Complex64>,
    pub schur_unitary: CMatrix,
    pub schur_triangular: CMatrix,
}

/// Full Schur-based spectral data for `p`.
pub fn spectral_data(p: &CMatrix) -> Result<SpectralData> {
    let form = SchurForm::compute(p)?;
    Ok(SpectralData {
        eigenvalues: form.eigenvalues().to_vec(),
        schur_unitary: form.unitary_matrix(),
        schur_triangular: form.triangular_matrix(),
    })
}

pub fn eigenvalues(p: &CMatrix) -> Result<Vec<Complex64>> {
    Ok(SchurForm::compute(p)?.eigenvalues().to_vec())
}

/// Spectral abscissa `a(P)`: the largest real part over the spectrum.
pub fn spectral_abscissa(p: &CMatrix) -> Result<f64> {
    Ok(max_re(&eigenvalues(p)?))
}

/// `b(P)`: the smallest real part over the spectrum, so `b(P) = -a(-P)`.
pub fn spectral_floor(p: &CMatrix) -> Result<f64> {
    Ok(min_re(&eigenvalues(p)?))
}

pub(crate) fn max_re(eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn min_re(eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
}

/// Logarithmic norm `μ(P)`: largest eigenvalue of the Hermitian part.
pub fn log_norm(p: &CMatrix) -> Result<f64> {
    hermitian_part_eigs(p).map(|eigs| eigs.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `μ̃(P) = -μ(-P)`: smallest eigenvalue of the Hermitian part.
pub fn log_norm_lower(p: &CMatrix) -> Result<f64> {
    hermitian_part_eigs(p).map(|eigs| eigs.into_iter().fold(f64::INFINITY, f64::min))
}

fn hermitian_part_eigs(p: &CMatrix) -> Result<Vec<f64>> {
    let h = (p.as_dmatrix() + p.as_dmatrix().adjoint()).scale(0.5);
    let se = nalgebra::linalg::SymmetricEigen::try_new(h, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    Ok(se.eigenvalues.iter().cloned().collect())
}

/// True iff every eigenvalue has real part strictly above `margin`.
pub fn is_positive_stable(p: &CMatrix, margin: f64) -> Result<bool> {
    if margin < 0.0 {
        return Err(Error::Precondition("margin must be >= 0".into()));
    }
    Ok(spectral_floor(p)? > margin)
}

// ---------------------------------------------------------------------------
// JSON encoding: {"dim": n, "entries": [[[re,im], ...], ...]} row-major
// ---------------------------------------------------------------------------

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            dim: usize,
            entries: &'a Vec<Vec<[f64; 2]>>,
        }
        let entries: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.inner[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Raw {
            dim: self.dim(),
            entries: &entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            entries: Vec<Vec<[f64; 2]>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.entries.len() != raw.dim {
            return Err(D::Error::custom(format!(
                "entries: expected {} rows, got {}",
                raw.dim,
                raw.entries.len()
            )));
        }
        for (i, row) in raw.entries.iter().enumerate() {
            if row.len() != raw.dim {
                return Err(D::Error::custom(format!(
                    "entries[{i}]: ragged row of length {} in a dim-{} matrix",
                    row.len(),
                    raw.dim
                )));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom(format!(
                        "entries[{i}][{j}]: non-finite value"
                    )));
                }
            }
        }
        let rows: Vec<Vec<Complex64>> = raw
            .entries
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        CMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_rejects_ragged_and_nonfinite() {
        assert!(CMatrix::from_rows(vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]]).is_err());
        assert!(CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(f64::NAN, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .is_err());
        assert!(CMatrix::from_rows(vec![]).is_err());
    }

    #[test]
    fn spectral_abscissa_examples() {
        // identity: sigma = {1}
        assert_eq!(spectral_abscissa(&CMatrix::identity(3)).unwrap(), 1.0);
        // diagonal: read off the diagonal
        let d = CMatrix::diagonal(&[c(1.0, 2.0), c(3.0, -1.0)]);
        assert!((spectral_abscissa(&d).unwrap() - 3.0).abs() < 1e-12);
        assert!((spectral_floor(&d).unwrap() - 1.0).abs() < 1e-12);
        // triangular with repeated eigenvalue 2
        let t = CMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!((spectral_abscissa(&t).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn b_is_negated_abscissa_of_negation() {
        let p = CMatrix::diagonal(&[c(0.5, 1.0), c(2.0, -3.0), c(-0.25, 0.0)]);
        let eigs = eigenvalues(&p).unwrap();
        let b = min_re(&eigs);
        let neg: Vec<Complex64> = eigs.iter().map(|z| -z).collect();
        assert_eq!(b, -max_re(&neg));
    }

    #[test]
    fn log_norm_examples() {
        assert!((log_norm(&CMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-14);
        let neg = CMatrix::scalar(2, c(-1.0, 0.0));
        assert!((log_norm(&neg).unwrap() + 1.0).abs() < 1e-14);
        assert!((log_norm_lower(&neg).unwrap() + 1.0).abs() < 1e-14);
        // [[0,2],[0,0]]: Hermitian part [[0,1],[1,0]], eigenvalues ±1
        let n = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!((log_norm(&n).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_stability() {
        assert!(is_positive_stable(&CMatrix::identity(2), 0.0).unwrap());
        let d = CMatrix::diagonal(&[c(-1.0, 0.0), c(2.0, 0.0)]);
        assert!(!is_positive_stable(&d, 0.0).unwrap());
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(10.0, 0.0)],
            vec![c(0.0, 0.0), c(0.05, 0.0)],
        ])
        .unwrap();
        assert!(!is_positive_stable(&m, 0.1).unwrap());
        assert!(is_positive_stable(&m, 0.0).unwrap());
        assert!(is_positive_stable(&m, -0.5).is_err());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.0, -0.5)],
            vec![c(3.5, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: CMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);

        let ragged = r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0]]]}"#;
        assert!(serde_json::from_str::<CMatrix>(ragged).is_err());
        let bad = r#"{"dim":1,"entries":[[[1e999,0]]]}"#;
        assert!(serde_json::from_str::<CMatrix>(bad).is_err());
    }

    #[test]
    fn neg_int_scalar_detection() {
        assert_eq!(CMatrix::scalar(3, c(-2.0, 0.0)).as_neg_int_scalar(), Some(2));
        assert_eq!(CMatrix::zeros(2).as_neg_int_scalar(), Some(0));
        assert_eq!(CMatrix::identity(2).as_neg_int_scalar(), None);
        assert_eq!(
            CMatrix::scalar(2, c(-1.5, 0.0)).as_neg_int_scalar(),
            None
        );
    }
}
