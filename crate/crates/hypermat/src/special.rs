//! Gamma, reciprocal gamma, beta, Pochhammer and binomial matrix functions.
//!
//! Scalar gamma uses the Lanczos approximation (g = 7, nine coefficients)
//! with the reflection formula for Re(z) < 0.5; matrix arguments go through
//! [`holomorphic_apply`]. The Pochhammer symbol is always built by the
//! multiplicative recurrence; its gamma-quotient form is a test identity,
//! not the implementation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::holo::{cauchy_taylor, holomorphic_apply, Holomorphic};
use crate::matrix::{matrix_power_scalar, CMatrix};

pub use crate::euler::beta_matrix_integral;

const PI: f64 = std::f64::consts::PI;

// Lanczos g = 7 coefficients (GNU Scientific Library set).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Scalar complex gamma function.
pub fn gamma_scalar(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Γ(z) Γ(1-z) = π / sin(πz)
        let s = (PI * z).sin();
        Complex64::new(PI, 0.0) / (s * gamma_scalar(Complex64::new(1.0, 0.0) - z))
    } else {
        let x = z - 1.0;
        let mut t = Complex64::new(LANCZOS_COEFFS[0], 0.0);
        for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            t += c / (x + i as f64);
        }
        let w = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * w.powc(x + 0.5) * (-w).exp() * t
    }
}

/// Scalar reciprocal gamma, entire in z (zero at the poles of gamma).
pub fn recip_gamma_scalar(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // 1/Γ(z) = sin(πz) Γ(1-z) / π, well behaved near the poles
        (PI * z).sin() * gamma_scalar(Complex64::new(1.0, 0.0) - z) / PI
    } else {
        Complex64::new(1.0, 0.0) / gamma_scalar(z)
    }
}

/// Real-argument beta function for positive arguments.
pub fn beta_scalar(a: f64, b: f64) -> f64 {
    let g = |x: f64| gamma_scalar(Complex64::new(x, 0.0)).re;
    g(a) * g(b) / g(a + b)
}

fn dist_to_nonpositive_integer(z: Complex64) -> f64 {
    let nearest = z.re.round().min(0.0);
    (z - Complex64::new(nearest, 0.0)).norm()
}

/// Gamma as a `Holomorphic`, pole-aware for domain checks and Taylor radii.
pub struct GammaFn;

impl Holomorphic for GammaFn {
    fn name(&self) -> &'static str {
        "gamma"
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        gamma_scalar(z)
    }

    fn taylor(&self, center: Complex64, order: usize) -> Option<Vec<Complex64>> {
        let radius = (0.5 * dist_to_nonpositive_integer(center)).clamp(1e-3, 0.5);
        Some(cauchy_taylor(&gamma_scalar, center, radius, order))
    }

    fn is_defined_at(&self, z: Complex64) -> bool {
        dist_to_nonpositive_integer(z) > 1e-12
    }
}

/// Reciprocal gamma as a `Holomorphic`; entire, defined everywhere.
pub struct RecipGammaFn;

impl Holomorphic for RecipGammaFn {
    fn name(&self) -> &'static str {
        "reciprocal-gamma"
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        recip_gamma_scalar(z)
    }

    fn taylor(&self, center: Complex64, order: usize) -> Option<Vec<Complex64>> {
        Some(cauchy_taylor(&recip_gamma_scalar, center, 0.5, order))
    }
}

/// Γ(P); errors if an eigenvalue sits at a non-positive integer.
pub fn gamma_matrix(p: &CMatrix) -> Result<CMatrix> {
    holomorphic_apply(&GammaFn, p)
}

/// Γ⁻¹(P); entire, defined for every square matrix.
pub fn reciprocal_gamma(p: &CMatrix) -> Result<CMatrix> {
    holomorphic_apply(&RecipGammaFn, p)
}

/// Rising factorial `(P)_m = P (P+I) ... (P+(m-1)I)`, `(P)_0 = I`.
pub fn pochhammer(p: &CMatrix, m: usize) -> CMatrix {
    let mut acc = CMatrix::identity(p.dim());
    for j in 0..m {
        acc = &acc * &p.shift_re(j as f64);
    }
    acc
}

/// Precomputed Pochhammer values `(base)_m` for `m = 0..=max_m`.
#[derive(Clone, Debug)]
pub struct PochhammerCache {
    pub base: CMatrix,
    values: Vec<CMatrix>,
}

impl PochhammerCache {
    pub fn new(base: CMatrix, max_m: usize) -> Self {
        let mut values = Vec::with_capacity(max_m + 1);
        values.push(CMatrix::identity(base.dim()));
        for m in 0..max_m {
            let next = &values[m] * &base.shift_re(m as f64);
            values.push(next);
        }
        PochhammerCache { base, values }
    }

    pub fn get(&self, m: usize) -> &CMatrix {
        &self.values[m]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `binom(-P, m) = (-1)^m (P)_m / m!`, built with division at every step so
/// large m cannot overflow the factorial.
pub fn matrix_binomial(p: &CMatrix, m: usize) -> CMatrix {
    let mut acc = CMatrix::identity(p.dim());
    for j in 0..m {
        acc = (&acc * &p.shift_re(j as f64)).scale_re(-1.0 / (j as f64 + 1.0));
    }
    acc
}

/// Falling-factorial binomial `choose(A, m) = A (A-I) ... (A-(m-1)I) / m!`.
pub fn matrix_choose(a: &CMatrix, m: usize) -> CMatrix {
    let mut acc = CMatrix::identity(a.dim());
    for j in 0..m {
        acc = (&acc * &a.shift_re(-(j as f64))).scale_re(1.0 / (j as f64 + 1.0));
    }
    acc
}

/// `B(P,Q) = Γ(P) Γ(Q) [Γ(P+Q)]⁻¹` for commuting P, Q.
pub fn beta_matrix(p: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension(format!(
            "beta arguments have dims {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    if !p.commutes_with(q, 1e-10) {
        return Err(Error::Precondition(
            "beta arguments do not commute within tolerance".into(),
        ));
    }
    let gp = gamma_matrix(p)?;
    let gq = gamma_matrix(q)?;
    let gpq = gamma_matrix(&(p + q))?;
    Ok(&(&gp * &gq) * &gpq.inverse()?)
}

/// `Γ(P)` limit-form element `(m-1)! (P)_m^{-1} m^P`, restated as the
/// stable product `[Π_{j=1}^{m-1} j (P+jI)^{-1}] P^{-1} m^P` so neither the
/// factorial nor the Pochhammer value overflows on its own.
pub fn gamma_limit_form(p: &CMatrix, m: usize) -> Result<CMatrix> {
    if m < 1 {
        return Err(Error::Precondition("limit form needs m >= 1".into()));
    }
    let mut acc = CMatrix::identity(p.dim());
    for j in 1..m {
        let inv = p
            .shift_re(j as f64)
            .inverse()
            .map_err(|_| Error::Domain(format!("(P)_m is singular: P + {j}I not invertible")))?;
        acc = (&acc * &inv).scale_re(j as f64);
    }
    let p_inv = p
        .inverse()
        .map_err(|_| Error::Domain("(P)_m is singular: P not invertible".into()))?;
    let m_pow = matrix_power_scalar(m as f64, p)?;
    Ok(&(&acc * &p_inv) * &m_pow)
}

/// Multiplication identity right-hand side
/// `m^{mn} ((P)/m)_n ((P+I)/m)_n ... ((P+(m-1)I)/m)_n`; equals `(P)_{mn}`.
pub fn pochhammer_multiplication(p: &CMatrix, m: usize, n: usize) -> Result<CMatrix> {
    if m < 1 {
        return Err(Error::Precondition("multiplication identity needs m >= 1".into()));
    }
    let scale = (m as f64).powi((m * n) as i32);
    if !scale.is_finite() {
        return Err(Error::Domain(format!("m^(mn) overflows for m = {m}, n = {n}")));
    }
    let inv_m = 1.0 / m as f64;
    let mut acc = CMatrix::identity(p.dim());
    for j in 0..m {
        let base = p.shift_re(j as f64).scale_re(inv_m);
        acc = &acc * &pochhammer(&base, n);
    }
    Ok(acc.scale_re(scale))
}
