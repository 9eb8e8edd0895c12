//! Holomorphic matrix functions through the Schur form.
//!
//! A scalar function is lifted to matrix argument by the block Parlett
//! recurrence: diagonal cluster blocks are evaluated by a truncated Taylor
//! expansion about the cluster mean, off-diagonal blocks by triangular
//! Sylvester solves. Functions supply Taylor coefficients either
//! analytically (exponential family) or through a Cauchy-circle quadrature
//! helper; a plain callable without derivative data is accepted but raises
//! a confluence error when a repeated-eigenvalue block actually needs
//! derivatives.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::schur::SchurForm;
use crate::matrix::CMatrix;

/// Scalar function applicable to matrix argument.
pub trait Holomorphic {
    fn name(&self) -> &'static str;

    fn eval(&self, z: Complex64) -> Complex64;

    /// Taylor coefficients `f^(k)(center)/k!` for `k = 0..=order`, with the
    /// zeroth coefficient equal to `eval(center)` exactly. `None` when the
    /// implementation has no derivative information.
    fn taylor(&self, center: Complex64, order: usize) -> Option<Vec<Complex64>>;

    fn is_defined_at(&self, _z: Complex64) -> bool {
        true
    }
}

/// `f(w) = exp(factor * w)`, the family behind `t^P`, `c^{-P}` and `exp`.
#[derive(Clone, Copy, Debug)]
pub struct ExpScaled {
    pub factor: Complex64,
}

impl ExpScaled {
    pub fn new(factor: Complex64) -> Self {
        ExpScaled { factor }
    }

    /// `base^w` through the principal logarithm; `base` must avoid the cut.
    pub fn base_power(base: Complex64) -> Result<Self> {
        if base.im == 0.0 && base.re <= 0.0 {
            return Err(Error::Domain(format!(
                "base {base} lies on the branch cut of the principal logarithm"
            )));
        }
        Ok(ExpScaled {
            factor: base.ln(),
        })
    }
}

impl Holomorphic for ExpScaled {
    fn name(&self) -> &'static str {
        "exp-scaled"
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        (self.factor * z).exp()
    }

    fn taylor(&self, center: Complex64, order: usize) -> Option<Vec<Complex64>> {
        let f0 = self.eval(center);
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = f0;
        coeffs.push(c);
        for k in 1..=order {
            c = c * self.factor / (k as f64);
            coeffs.push(c);
        }
        Some(coeffs)
    }
}

/// Wraps a plain scalar callable without derivative data.
pub struct PlainFn<F: Fn(Complex64) -> Complex64> {
    pub name: &'static str,
    pub f: F,
}

impl<F: Fn(Complex64) -> Complex64> Holomorphic for PlainFn<F> {
    fn name(&self) -> &'static str {
        self.name
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    fn taylor(&self, _center: Complex64, _order: usize) -> Option<Vec<Complex64>> {
        None
    }
}

/// Taylor coefficients `f^(k)(center)/k!` by trapezoidal quadrature of the
/// Cauchy integral on a circle of the given radius. The zeroth coefficient
/// is replaced by a direct evaluation.
pub fn cauchy_taylor(
    f: &dyn Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    order: usize,
) -> Vec<Complex64> {
    let m = (4 * (order + 1)).max(64);
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (m as f64);
        let w = Complex64::new(0.0, theta).exp();
        samples.push((w, f(center + w * radius)));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, fv) in &samples {
            // e^{-ik theta} = w^{-k} = conj(w)^k for |w| = 1
            acc += fv * w.conj().powu(k as u32);
        }
        coeffs.push(acc / (m as f64) / radius.powi(k as i32));
    }
    coeffs[0] = f(center);
    coeffs
}

/// Evaluates `f` on a square matrix via complex Schur form and the block
/// Parlett recurrence.
pub fn holomorphic_apply(f: &dyn Holomorphic, p: &CMatrix) -> Result<CMatrix> {
    SchurForm::compute(p)?.apply(f)
}

impl SchurForm {
    /// Applies a scalar function through this precomputed Schur form.
    pub fn apply(&self, f: &dyn Holomorphic) -> Result<CMatrix> {
        let n = self.dim();
        for lam in self.eigenvalues() {
            if !f.is_defined_at(lam) {
                return Err(Error::UndefinedAtEigenvalue {
                    fn_name: f.name(),
                    eigenvalue: lam,
                });
            }
        }
        let t = self.triangular();
        let mut ft = DMatrix::<Complex64>::zeros(n, n);

        // diagonal cluster blocks
        for cl in self.clusters() {
            let block = t.view((cl.start, cl.start), (cl.len, cl.len)).into_owned();
            let fb = eval_cluster_block(f, &block, cl.mean, n)?;
            ft.view_mut((cl.start, cl.start), (cl.len, cl.len))
                .copy_from(&fb);
        }

        // off-diagonal blocks by increasing superdiagonal distance
        let nb = self.clusters().len();
        for d in 1..nb {
            for bi in 0..nb - d {
                let bj = bi + d;
                let (ci, cj) = (&self.clusters()[bi], &self.clusters()[bj]);
                let tii = t.view((ci.start, ci.start), (ci.len, ci.len));
                let tjj = t.view((cj.start, cj.start), (cj.len, cj.len));
                let tij = t.view((ci.start, cj.start), (ci.len, cj.len));
                let fii = ft.view((ci.start, ci.start), (ci.len, ci.len)).into_owned();
                let fjj = ft.view((cj.start, cj.start), (cj.len, cj.len)).into_owned();
                // C = F_ii T_ij - T_ij F_jj + sum_{i<k<j} (F_ik T_kj - T_ik F_kj)
                let mut c = &fii * tij - tij * &fjj;
                for bk in bi + 1..bj {
                    let ck = &self.clusters()[bk];
                    let fik = ft.view((ci.start, ck.start), (ci.len, ck.len)).into_owned();
                    let tkj = t.view((ck.start, cj.start), (ck.len, cj.len));
                    let tik = t.view((ci.start, ck.start), (ci.len, ck.len));
                    let fkj = ft.view((ck.start, cj.start), (ck.len, cj.len)).into_owned();
                    c += &fik * tkj - tik * &fkj;
                }
                let y = solve_sylvester(&tii.into_owned(), &tjj.into_owned(), &c)?;
                ft.view_mut((ci.start, cj.start), (ci.len, cj.len)).copy_from(&y);
            }
        }

        let result = self.unitary() * ft * self.unitary().adjoint();
        CMatrix::from_dmatrix(result)
    }
}

/// Evaluates `f` on a triangular cluster block by Taylor expansion about the
/// cluster mean, truncated at order `2 * dim` (of the full matrix).
fn eval_cluster_block(
    f: &dyn Holomorphic,
    block: &DMatrix<Complex64>,
    mean: Complex64,
    full_dim: usize,
) -> Result<DMatrix<Complex64>> {
    let len = block.nrows();
    if len == 1 {
        return Ok(DMatrix::from_element(1, 1, f.eval(block[(0, 0)])));
    }
    let mut nil = block.clone();
    for i in 0..len {
        nil[(i, i)] -= mean;
    }
    if nil.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        // exact scalar block
        return Ok(DMatrix::from_diagonal_element(len, len, f.eval(mean)));
    }
    let order = 2 * full_dim;
    let coeffs = f
        .taylor(mean, order)
        .ok_or(Error::Confluence { center: mean })?;
    // matrix Horner: F = c_K I; F <- F N + c_k I
    let mut fm = DMatrix::from_diagonal_element(len, len, coeffs[order]);
    for k in (0..order).rev() {
        fm *= &nil;
        for i in 0..len {
            fm[(i, i)] += coeffs[k];
        }
    }
    Ok(fm)
}

/// Solves `A Y - Y B = C` for upper triangular `A`, `B` via the Kronecker
/// linear system (blocks are tiny).
fn solve_sylvester(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    c: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    let (na, nb) = (a.nrows(), b.nrows());
    let n = na * nb;
    // column-major vec: (I ⊗ A - B^T ⊗ I) vec(Y) = vec(C)
    let mut k = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..nb {
        for i in 0..na {
            let row = j * na + i;
            for i2 in 0..na {
                k[(row, j * na + i2)] += a[(i, i2)];
            }
            for j2 in 0..nb {
                k[(row, j2 * na + i)] -= b[(j2, j)];
            }
        }
    }
    let mut rhs = DMatrix::<Complex64>::zeros(n, 1);
    for j in 0..nb {
        for i in 0..na {
            rhs[(j * na + i, 0)] = c[(i, j)];
        }
    }
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NumericalFailure("singular Sylvester system in Parlett recurrence".into()))?;
    let mut y = DMatrix::<Complex64>::zeros(na, nb);
    for j in 0..nb {
        for i in 0..na {
            y[(i, j)] = sol[(j * na + i, 0)];
        }
    }
    Ok(y)
}

/// `t^P = exp(P ln t)` for a positive real scalar `t`; `t = 1` returns the
/// identity exactly.
pub fn matrix_power_scalar(t: f64, p: &CMatrix) -> Result<CMatrix> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("matrix power base t = {t} must be positive")));
    }
    if t == 1.0 {
        return Ok(CMatrix::identity(p.dim()));
    }
    holomorphic_apply(&ExpScaled::new(Complex64::new(t.ln(), 0.0)), p)
}
