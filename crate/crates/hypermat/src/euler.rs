//! Euler-type integrals over `[0,1]` with matrix-power kernels, evaluated by
//! Gauss-Jacobi quadrature.
//!
//! The integral `∫ u^{Q-I} (1-u)^{R-Q-I} (1-z u^q)^{-P} du` has endpoint
//! singularities governed by the spectra of Q and R-Q. When the commuting
//! parameters admit a shared eigenbasis (the generic case), every
//! eigendirection is integrated against a Gauss-Jacobi weight matching its
//! own exponents, which keeps the non-weight factor analytic and the node
//! ladder short. Otherwise the scalar singular parts are split off at the
//! stability floors b(Q) and b(R-Q) and the bounded matrix-valued remainder
//! is integrated directly.
//!
//! At `z = 1` the kernel is factored as
//! `(1-u^q)^{-P} = (1-u)^{-P} (1+u+...+u^{q-1})^{-P}` and the `(1-u)`
//! exponent becomes `R-Q-P-I`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::schur::SchurForm;
use crate::matrix::{rel_diff, CMatrix, ExpScaled};
use crate::special::{beta_scalar, gamma_matrix, reciprocal_gamma};

/// Node ladder bounds for the doubling refinement.
const LADDER_START: usize = 16;
const LADDER_MAX: usize = 1024;

/// Gauss-Jacobi rule on `[0,1]` for the weight `u^beta (1-u)^alpha`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Integrates a scalar complex function against the weight.
    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let vals: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| f(u) * w)
            .collect();
        pairwise_sum_scalar(&vals)
    }
}

/// Builds the n-point Gauss-Jacobi rule on `[0,1]` for `u^beta (1-u)^alpha`
/// by the Golub-Welsch algorithm on the Jacobi recurrence.
pub fn gauss_jacobi_rule(n: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::Precondition("quadrature rule needs n >= 1".into()));
    }
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let (a, b) = (alpha, beta);
    // symmetric tridiagonal Jacobi matrix from the recurrence coefficients
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n.saturating_sub(1)];
    diag[0] = (b - a) / (a + b + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let denom = 2.0 * kf + a + b;
        diag[k] = (b * b - a * a) / (denom * (denom + 2.0));
        let bk = if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                / (denom.powi(2) * (denom + 1.0) * (denom - 1.0))
        };
        off[k - 1] = bk.sqrt();
    }
    let first = tridiag_eigen_first_components(&mut diag, &mut off)?;
    // total mass of the weight on [-1, 1]
    let mu0 = 2f64.powf(a + b + 1.0) * beta_scalar(a + 1.0, b + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = diag[i];
            let q0 = first[i];
            // map x in [-1,1] to u in (0,1); weights pick up 2^{-(a+b+1)}
            ((x + 1.0) / 2.0, mu0 * q0 * q0 / 2f64.powf(a + b + 1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite nodes"));
    let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    if nodes.iter().any(|&u| u <= 0.0 || u >= 1.0) {
        return Err(Error::NumericalFailure("Jacobi node escaped (0,1)".into()));
    }
    Ok(QuadratureRule {
        alpha,
        beta,
        nodes,
        weights,
    })
}

/// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating only
/// the first components of the eigenvectors (all the Golub-Welsch weights
/// need). `diag` is overwritten with the eigenvalues.
fn tridiag_eigen_first_components(diag: &mut [f64], off: &mut [f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut z = vec![0.0f64; n];
    z[0] = 1.0;
    if n == 1 {
        return Ok(z);
    }
    let mut e = vec![0.0f64; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NumericalFailure(
                    "tridiagonal QL did not converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                let t = (diag[i] - g) * s + 2.0 * c * b;
                p = s * t;
                diag[i + 1] = g + p;
                g = c * t - b;
                // rotate the tracked first-row entries
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(z)
}

/// Specification of `Γ(R)Γ⁻¹(Q)Γ⁻¹(R-Q) ∫ u^{Q-I}(1-u)^{R-Q-I}(1-zu^q)^{-P} du`.
#[derive(Clone, Debug)]
pub struct EulerIntegralSpec {
    pub p: CMatrix,
    pub q_mat: CMatrix,
    pub r_mat: CMatrix,
    pub z: Complex64,
    pub q_exp: u32,
    prefactor: CMatrix,
    /// (b(Q), b of the (1-u)-side exponent matrix)
    margins: (f64, f64),
}

impl EulerIntegralSpec {
    pub fn new(
        p: &CMatrix,
        q_mat: &CMatrix,
        r_mat: &CMatrix,
        z: Complex64,
        q_exp: u32,
    ) -> Result<Self> {
        if q_exp < 1 {
            return Err(Error::Precondition("integral exponent q must be >= 1".into()));
        }
        let dim = p.dim();
        if q_mat.dim() != dim || r_mat.dim() != dim {
            return Err(Error::Dimension("integral parameters must share one dimension".into()));
        }
        for (x, y) in [(p, q_mat), (p, r_mat), (q_mat, r_mat)] {
            if !x.commutes_with(y, 1e-10) {
                return Err(Error::Precondition(
                    "integral parameters do not commute within tolerance".into(),
                ));
            }
        }
        if z.im == 0.0 && z.re > 1.0 {
            return Err(Error::Domain(format!(
                "1 - z u^q crosses the branch cut for real z = {} > 1",
                z.re
            )));
        }
        let at_unit = z.im == 0.0 && (z.re - 1.0).abs() <= 1e-14;
        let bq = crate::matrix::spectral_floor(q_mat)?;
        let one_minus_u_exponent = if at_unit {
            &(r_mat - q_mat) - p
        } else {
            r_mat - q_mat
        };
        let be = crate::matrix::spectral_floor(&one_minus_u_exponent)?;
        if bq <= 0.0 || be <= 0.0 {
            return Err(Error::Precondition(format!(
                "integral needs positive stability: b(Q) = {bq:.4}, b((1-u) exponent) = {be:.4}"
            )));
        }
        let prefactor = {
            let g_r = gamma_matrix(r_mat)?;
            let rg_q = reciprocal_gamma(q_mat)?;
            let rg_rq = reciprocal_gamma(&(r_mat - q_mat))?;
            &(&g_r * &rg_q) * &rg_rq
        };
        Ok(EulerIntegralSpec {
            p: p.clone(),
            q_mat: q_mat.clone(),
            r_mat: r_mat.clone(),
            z,
            q_exp,
            prefactor,
            margins: (bq, be),
        })
    }

    pub fn prefactor(&self) -> &CMatrix {
        &self.prefactor
    }

    pub fn margins(&self) -> (f64, f64) {
        self.margins
    }

    fn at_unit_argument(&self) -> bool {
        self.z.im == 0.0 && (self.z.re - 1.0).abs() <= 1e-14
    }

    /// The (1-u)-side exponent matrix (without the -I shift).
    fn one_minus_u_exponent(&self) -> CMatrix {
        if self.at_unit_argument() {
            &(&self.r_mat - &self.q_mat) - &self.p
        } else {
            &self.r_mat - &self.q_mat
        }
    }

    /// Scalar kernel base at `u`: `1 - z u^q`, or the factored polynomial
    /// `1 + u + ... + u^{q-1}` at z = 1.
    fn kernel_base(&self, u: f64) -> Result<Complex64> {
        let c = if self.at_unit_argument() {
            let mut acc = 0.0;
            for j in 0..self.q_exp {
                acc += u.powi(j as i32);
            }
            Complex64::new(acc, 0.0)
        } else {
            Complex64::new(1.0, 0.0) - self.z * u.powi(self.q_exp as i32)
        };
        if c.norm() < 1e-14 || (c.im == 0.0 && c.re <= 0.0) {
            return Err(Error::Domain(format!(
                "kernel base 1 - z u^q = {c} touches the branch cut at u = {u}"
            )));
        }
        Ok(c)
    }
}

/// Evaluates the integral with its prefactor; doubles the node count from
/// 16 until successive ladder results agree to `tol` (relative).
pub fn euler_integral(spec: &EulerIntegralSpec, tol: f64) -> Result<CMatrix> {
    euler_integral_with_nodes(spec, tol).map(|(m, _)| m)
}

/// As [`euler_integral`], also reporting the node count of the accepted rung.
pub fn euler_integral_with_nodes(spec: &EulerIntegralSpec, tol: f64) -> Result<(CMatrix, usize)> {
    let raw = euler_integral_raw(spec, tol)?;
    Ok((&spec.prefactor * &raw.0, raw.1))
}

/// The bare integral without the gamma prefactor.
pub fn euler_integral_raw(spec: &EulerIntegralSpec, tol: f64) -> Result<(CMatrix, usize)> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("quadrature tolerance must be positive".into()));
    }
    match joint_eigenbasis(spec)? {
        Some(basis) => ladder(tol, |n| eigenbasis_rung(spec, &basis, n)),
        None => ladder(tol, |n| split_weight_rung(spec, n)),
    }
}

/// `B(P,Q) = ∫ u^{P-I} (1-u)^{Q-I} du` by quadrature; the cross-validation
/// route for the gamma-product beta.
pub fn beta_matrix_integral(p: &CMatrix, q: &CMatrix, tol: f64) -> Result<CMatrix> {
    let spec = EulerIntegralSpec::new(
        &CMatrix::zeros(p.dim()),
        p,
        &(p + q),
        Complex64::new(0.0, 0.0),
        1,
    )?;
    euler_integral_raw(&spec, tol).map(|(m, _)| m)
}

fn ladder(
    tol: f64,
    mut rung: impl FnMut(usize) -> Result<CMatrix>,
) -> Result<(CMatrix, usize)> {
    let mut prev: Option<CMatrix> = None;
    let mut n = LADDER_START;
    let mut last_residual = f64::INFINITY;
    while n <= LADDER_MAX {
        let cur = rung(n)?;
        if let Some(p) = &prev {
            let d = rel_diff(&cur, p);
            if d <= tol {
                return Ok((cur, n));
            }
            last_residual = d;
        }
        prev = Some(cur);
        n *= 2;
    }
    Err(Error::Accuracy {
        residual: last_residual,
        nodes: LADDER_MAX,
    })
}

/// Shared eigenbasis of the commuting parameters, when one exists.
struct JointBasis {
    w: DMatrix<Complex64>,
    w_inv: DMatrix<Complex64>,
    /// per-direction exponents: (λ of Q, μ of the (1-u) exponent, π of P)
    lambda: Vec<Complex64>,
    mu: Vec<Complex64>,
    pi: Vec<Complex64>,
}

fn joint_eigenbasis(spec: &EulerIntegralSpec) -> Result<Option<JointBasis>> {
    let dim = spec.q_mat.dim();
    let form = SchurForm::compute(&spec.q_mat)?;
    let Some(y) = triangular_eigenvectors(form.triangular()) else {
        return Ok(None);
    };
    let w = form.unitary() * y;
    let Some(w_inv) = w.clone().try_inverse() else {
        return Ok(None);
    };
    let e_mat = spec.one_minus_u_exponent();
    let d_q = &w_inv * spec.q_mat.as_dmatrix() * &w;
    let d_e = &w_inv * e_mat.as_dmatrix() * &w;
    let d_p = &w_inv * spec.p.as_dmatrix() * &w;
    let scale = spec.q_mat.norm_fro() + e_mat.norm_fro() + spec.p.norm_fro();
    for d in [&d_q, &d_e, &d_p] {
        if off_diagonal_mass(d) > 1e-9 * (1.0 + scale) {
            return Ok(None);
        }
    }
    Ok(Some(JointBasis {
        lambda: (0..dim).map(|i| d_q[(i, i)]).collect(),
        mu: (0..dim).map(|i| d_e[(i, i)]).collect(),
        pi: (0..dim).map(|i| d_p[(i, i)]).collect(),
        w,
        w_inv,
    }))
}

/// Eigenvectors of an upper triangular matrix by back-substitution; `None`
/// when eigenvalues are too close for stable division.
fn triangular_eigenvectors(t: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let n = t.nrows();
    let gap_tol = 1e-8 * t.norm().max(1.0);
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let lam = t[(i, i)];
        y[(i, i)] = Complex64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in (j + 1)..=i {
                s += t[(j, k)] * y[(k, i)];
            }
            let d = t[(j, j)] - lam;
            if d.norm() < gap_tol {
                return None;
            }
            y[(j, i)] = -s / d;
        }
        let nrm = y.column(i).norm();
        for j in 0..=i {
            y[(j, i)] /= Complex64::new(nrm, 0.0);
        }
    }
    Some(y)
}

fn off_diagonal_mass(m: &DMatrix<Complex64>) -> f64 {
    let mut s = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One ladder rung on the shared eigenbasis: each eigendirection gets a rule
/// whose weight absorbs its full endpoint exponents, so the remaining factor
/// is analytic.
fn eigenbasis_rung(spec: &EulerIntegralSpec, basis: &JointBasis, n: usize) -> Result<CMatrix> {
    let dim = basis.lambda.len();
    let mut diag = Vec::with_capacity(dim);
    for i in 0..dim {
        let (lam, mu, pi) = (basis.lambda[i], basis.mu[i], basis.pi[i]);
        let rule = gauss_jacobi_rule(n, mu.re - 1.0, lam.re - 1.0)?;
        let mut vals = Vec::with_capacity(n);
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let c = spec.kernel_base(u)?;
            // residual oscillatory parts u^{i Im λ} (1-u)^{i Im μ}
            let mut g = (-pi * c.ln()).exp();
            if lam.im != 0.0 {
                g *= Complex64::new(0.0, lam.im * u.ln()).exp();
            }
            if mu.im != 0.0 {
                g *= Complex64::new(0.0, mu.im * (1.0 - u).ln()).exp();
            }
            vals.push(g * w);
        }
        diag.push(pairwise_sum_scalar(&vals));
    }
    let d = DMatrix::<Complex64>::from_fn(dim, dim, |i, j| {
        if i == j {
            diag[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    CMatrix::from_dmatrix(&basis.w * d * &basis.w_inv)
}

/// One ladder rung of the general path: scalar singular factors are split
/// off at the stability floors and the bounded matrix remainder
/// `u^{Q-b(Q)I} (1-u)^{E-b(E)I} (1-zu^q)^{-P}` is summed node by node.
fn split_weight_rung(spec: &EulerIntegralSpec, n: usize) -> Result<CMatrix> {
    let (bq, be) = spec.margins;
    let rule = gauss_jacobi_rule(n, be - 1.0, bq - 1.0)?;
    let e_mat = spec.one_minus_u_exponent();
    let form_u = SchurForm::compute(&spec.q_mat.shift_re(-bq))?;
    let form_v = SchurForm::compute(&e_mat.shift_re(-be))?;
    let form_p = SchurForm::compute(&spec.p)?;
    let mut vals = Vec::with_capacity(n);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let c = spec.kernel_base(u)?;
        let gu = form_u.apply(&ExpScaled::new(Complex64::new(u.ln(), 0.0)))?;
        let gv = form_v.apply(&ExpScaled::new(Complex64::new((1.0 - u).ln(), 0.0)))?;
        let gp = form_p.apply(&ExpScaled::new(-c.ln()))?;
        vals.push((&(&gu * &gv) * &gp).scale_re(w));
    }
    Ok(pairwise_sum_matrix(&vals))
}

fn pairwise_sum_scalar(vals: &[Complex64]) -> Complex64 {
    match vals.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => vals[0],
        n => pairwise_sum_scalar(&vals[..n / 2]) + pairwise_sum_scalar(&vals[n / 2..]),
    }
}

fn pairwise_sum_matrix(vals: &[CMatrix]) -> CMatrix {
    match vals.len() {
        0 => unreachable!("rules are nonempty"),
        1 => vals[0].clone(),
        n => &pairwise_sum_matrix(&vals[..n / 2]) + &pairwise_sum_matrix(&vals[n / 2..]),
    }
}
