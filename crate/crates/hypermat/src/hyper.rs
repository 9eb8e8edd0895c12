//! Generalized hypergeometric matrix series pFq.
//!
//! Partial sums are built by the term recurrence
//! `T_{m+1} = T_m · Π_i (P_i + mI) · Π_j (Q_j + mI)^{-1} · z/(m+1)` with
//! `T_0 = I`. A numerator parameter equal to `-kI` exactly terminates the
//! series after k+1 terms, which is then summed as an exact finite sum.
//! On the unit circle with p = q+1 the series is only evaluated when the
//! denominator-minus-numerator stability floor clears a safety margin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{spectral_floor, CMatrix};

/// Stability floor required of `Σ denominators - Σ numerators` before a
/// p = q+1 series is summed directly at |z| = 1.
pub const UNIT_CIRCLE_MARGIN: f64 = 0.15;

/// Ordered numerator/denominator matrix parameter lists.
#[derive(Clone, Debug)]
pub struct HyperParams {
    numerator: Vec<CMatrix>,
    denominator: Vec<CMatrix>,
    dim: usize,
}

impl HyperParams {
    /// Validates shared dimension and pairwise commutation.
    pub fn new(numerator: Vec<CMatrix>, denominator: Vec<CMatrix>) -> Result<Self> {
        let dim = numerator
            .first()
            .or_else(|| denominator.first())
            .map(|m| m.dim())
            .ok_or_else(|| Error::Precondition("pFq needs at least one parameter or an explicit dimension".into()))?;
        let all: Vec<&CMatrix> = numerator.iter().chain(denominator.iter()).collect();
        for m in &all {
            if m.dim() != dim {
                return Err(Error::Dimension(format!(
                    "parameter dims differ: {} vs {dim}",
                    m.dim()
                )));
            }
        }
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if !all[i].commutes_with(all[j], 1e-10) {
                    return Err(Error::Precondition(format!(
                        "parameters {i} and {j} do not commute within tolerance"
                    )));
                }
            }
        }
        Ok(HyperParams {
            numerator,
            denominator,
            dim,
        })
    }

    /// 0F0-style empty parameter lists need the dimension spelled out.
    pub fn empty(dim: usize) -> Self {
        HyperParams {
            numerator: Vec::new(),
            denominator: Vec::new(),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn numerator(&self) -> &[CMatrix] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[CMatrix] {
        &self.denominator
    }

    /// Smallest k such that some numerator equals `-kI` exactly.
    pub fn terminating_order(&self) -> Option<u64> {
        self.numerator
            .iter()
            .filter_map(|m| m.as_neg_int_scalar())
            .min()
    }

    /// No denominator eigenvalue may be a non-positive integer down to
    /// `-max_terms`, otherwise some shift `Q_j + mI` is singular.
    pub fn validate_denominators(&self, max_terms: usize) -> Result<()> {
        let horizon = self
            .terminating_order()
            .map(|k| (k as usize).min(max_terms))
            .unwrap_or(max_terms);
        for q in &self.denominator {
            for lam in crate::matrix::eigenvalues(q)? {
                if lam.im.abs() < 1e-9 {
                    let r = lam.re.round();
                    if r <= 0.0 && -r <= horizon as f64 && (lam.re - r).abs() < 1e-9 {
                        return Err(Error::SingularShift {
                            index: (-r) as usize,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Truncation controls for series evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesConfig {
    /// Relative smallness threshold on terms.
    pub tol: f64,
    pub max_terms: usize,
    /// Number of consecutive small terms required before stopping.
    pub consecutive_small: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: 1e-12,
            max_terms: 5000,
            consecutive_small: 3,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_terms < 1 || self.consecutive_small < 1 {
            return Err(Error::Precondition(
                "series config needs tol > 0, max_terms >= 1, consecutive_small >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a truncated series evaluation.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: CMatrix,
    pub terms_used: usize,
    /// Norm of the stopping quantity: the last term (plain summation) or
    /// the last stabilization difference (accelerated summation).
    pub last_term_norm: f64,
    pub converged: bool,
}

/// Evaluates pFq(params; z) by the term recurrence.
pub fn pfq(params: &HyperParams, z: Complex64, config: &SeriesConfig) -> Result<SeriesResult> {
    config.validate()?;
    params.validate_denominators(config.max_terms)?;
    let dim = params.dim();
    let p_cnt = params.numerator.len();
    let q_cnt = params.denominator.len();
    let term_limit = params.terminating_order();

    if term_limit.is_none() && z.norm() > 0.0 {
        if p_cnt == q_cnt + 1 {
            if z.norm() > 1.0 + 1e-12 {
                return Err(Error::Domain(format!(
                    "p = q+1 series diverges for |z| = {} > 1",
                    z.norm()
                )));
            }
            if (z.norm() - 1.0).abs() <= 1e-12 {
                let margin = boundary_margin(params)?;
                if margin < UNIT_CIRCLE_MARGIN {
                    return Err(Error::Precondition(format!(
                        "series at |z| = 1 needs stability floor >= {UNIT_CIRCLE_MARGIN}, got {margin:.4}"
                    )));
                }
            }
        } else if p_cnt > q_cnt + 1 {
            return Err(Error::Domain(
                "series with p > q+1 diverges for z != 0".into(),
            ));
        }
    }

    let mut term = CMatrix::identity(dim);
    let mut sum = term.clone();
    let mut small_run = 0usize;
    let mut last_term_norm = term.norm_fro();
    let mut terms_used = 1usize;
    let mut converged = false;

    let hard_limit = match term_limit {
        // terminating series are summed exactly, never truncated
        Some(k) => k as usize,
        None => config.max_terms,
    };

    let mut m = 0usize;
    while m < hard_limit {
        for p in &params.numerator {
            term = &term * &p.shift_re(m as f64);
        }
        for q in &params.denominator {
            let inv = q.shift_re(m as f64).inverse().map_err(|_| Error::SingularShift { index: m })?;
            term = &term * &inv;
        }
        term = term.scale(z / (m as f64 + 1.0));
        sum = &sum + &term;
        terms_used += 1;
        last_term_norm = term.norm_fro();
        m += 1;

        if term_limit.is_none() {
            if last_term_norm > 1e200 {
                converged = false;
                break;
            }
            if last_term_norm <= config.tol * (1.0 + sum.norm_fro()) {
                small_run += 1;
                if small_run >= config.consecutive_small {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
    }
    if term_limit.is_some() {
        converged = true;
        last_term_norm = 0.0;
    }

    Ok(SeriesResult {
        value: sum,
        terms_used,
        last_term_norm,
        converged,
    })
}

/// Stability floor of `Σ denominators - Σ numerators`.
pub fn boundary_margin(params: &HyperParams) -> Result<f64> {
    let dim = params.dim();
    let mut d = CMatrix::zeros(dim);
    for q in &params.denominator {
        d = &d + q;
    }
    for p in &params.numerator {
        d = &d - p;
    }
    spectral_floor(&d)
}

/// Gauss hypergeometric 2F1(P, Q; R; z), a pFq convenience wrapper.
pub fn two_f_one(
    p: &CMatrix,
    q: &CMatrix,
    r: &CMatrix,
    z: Complex64,
    config: &SeriesConfig,
) -> Result<SeriesResult> {
    let params = HyperParams::new(vec![p.clone(), q.clone()], vec![r.clone()])?;
    pfq(&params, z, config)
}

/// Sums `Σ_m term(m)` with binomial averaging of the partial-sum sequence
/// (Euler transform), suited to the alternating outer series of the
/// half- and unit-argument transformations. The provider returns `None`
/// once the series has terminated exactly, in which case the plain partial
/// sum is returned untransformed.
pub fn euler_accelerated_sum(
    mut next_term: impl FnMut(usize) -> Result<Option<CMatrix>>,
    dim: usize,
    config: &SeriesConfig,
) -> Result<SeriesResult> {
    config.validate()?;
    let mut plain = CMatrix::zeros(dim);
    // diag[k] holds the k-fold averaged partial sums, updated streaming
    let mut diag: Vec<CMatrix> = Vec::new();
    let mut prev_estimate: Option<CMatrix> = None;
    let mut small_run = 0usize;
    let mut last_diff = f64::INFINITY;

    for m in 0..config.max_terms {
        let term = match next_term(m)? {
            Some(t) => t,
            None => {
                // exact finite sum
                return Ok(SeriesResult {
                    value: plain,
                    terms_used: m,
                    last_term_norm: 0.0,
                    converged: true,
                });
            }
        };
        plain = &plain + &term;
        let mut new_diag = Vec::with_capacity(diag.len() + 1);
        new_diag.push(plain.clone());
        for k in 0..diag.len() {
            let avg = (&new_diag[k] + &diag[k]).scale_re(0.5);
            new_diag.push(avg);
        }
        diag = new_diag;
        let estimate = diag.last().expect("nonempty").clone();
        if let Some(prev) = &prev_estimate {
            let d = (&estimate - prev).norm_fro();
            last_diff = d;
            if d <= config.tol * (1.0 + estimate.norm_fro()) {
                small_run += 1;
                if small_run >= config.consecutive_small {
                    return Ok(SeriesResult {
                        value: estimate,
                        terms_used: m + 1,
                        last_term_norm: d,
                        converged: true,
                    });
                }
            } else {
                small_run = 0;
            }
        }
        prev_estimate = Some(estimate);
    }

    Ok(SeriesResult {
        value: prev_estimate.unwrap_or(plain),
        terms_used: config.max_terms,
        last_term_norm: last_diff,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{holomorphic_apply, random_commuting_triple, rel_diff, ExpScaled};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar_pfq(num: &[f64], den: &[f64], z: f64, terms: usize) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 0..terms {
            for a in num {
                term *= a + m as f64;
            }
            for b in den {
                term /= b + m as f64;
            }
            term *= z / (m as f64 + 1.0);
            sum += term;
            if term.abs() < 1e-17 * (1.0 + sum.abs()) {
                break;
            }
        }
        sum
    }

    #[test]
    fn zero_f_zero_is_exponential() {
        let params = HyperParams::empty(2);
        let r = pfq(&params, c(1.0, 0.0), &SeriesConfig::default()).unwrap();
        assert!(r.converged);
        let want = CMatrix::scalar(2, c(std::f64::consts::E, 0.0));
        assert!(rel_diff(&r.value, &want) < 1e-13);
    }

    #[test]
    fn one_f_zero_is_geometric() {
        let params = HyperParams::new(vec![CMatrix::identity(2)], vec![]).unwrap();
        let r = pfq(&params, c(0.5, 0.0), &SeriesConfig::default()).unwrap();
        let want = CMatrix::scalar(2, c(2.0, 0.0));
        assert!(rel_diff(&r.value, &want) < 1e-12);
    }

    #[test]
    fn scalar_ln3_case() {
        // 2F1(1, 0.5; 1.5; 0.25) = artanh(0.5)/0.5 = ln 3
        let p = CMatrix::scalar(1, c(1.0, 0.0));
        let q = CMatrix::scalar(1, c(0.5, 0.0));
        let r = CMatrix::scalar(1, c(1.5, 0.0));
        let res = two_f_one(&p, &q, &r, c(0.25, 0.0), &SeriesConfig::default()).unwrap();
        let want = 1.0986122886681097; // ln 3
        assert!((res.value.as_complex().unwrap().re - want).abs() < 1e-12);
    }

    #[test]
    fn scalar_2ln2_case() {
        // 2F1(1, 1; 2; 0.5) = -ln(1-z)/z = 2 ln 2
        let one = CMatrix::identity(1);
        let two = CMatrix::scalar(1, c(2.0, 0.0));
        let res = two_f_one(&one, &one, &two, c(0.5, 0.0), &SeriesConfig::default()).unwrap();
        let want = 1.3862943611198906;
        assert!((res.value.as_complex().unwrap().re - want).abs() < 1e-12);
    }

    #[test]
    fn parameter_cancellation_reduces_to_one_f_zero() {
        // 2F1(P, Q; Q; z) = (1-z)^{-P} across the working argument range
        for seed in [3u64, 8, 21] {
            let t = random_commuting_triple(seed, 1 + (seed as usize % 3), &Default::default())
                .unwrap();
            for z in [c(0.9, 0.0), c(-0.9, 0.0), c(0.3, 0.2)] {
                let res = two_f_one(&t.p, &t.q, &t.q, z, &SeriesConfig::default()).unwrap();
                let pow = holomorphic_apply(
                    &ExpScaled::new(-(Complex64::new(1.0, 0.0) - z).ln()),
                    &t.p,
                )
                .unwrap();
                assert!(
                    rel_diff(&res.value, &pow) < 1e-9,
                    "seed {seed} z {z}: {}",
                    rel_diff(&res.value, &pow)
                );
            }
        }
    }

    #[test]
    fn gauss_summation_at_unit_argument() {
        // 2F1(0.3, 0.2; 2; 1) = Γ(2)Γ(1.5)/(Γ(1.7)Γ(1.8)); slow power-law
        // tail, so the scalar case gets a deep term budget
        let a = CMatrix::scalar(1, c(0.3, 0.0));
        let b = CMatrix::scalar(1, c(0.2, 0.0));
        let cc = CMatrix::scalar(1, c(2.0, 0.0));
        let cfg = SeriesConfig {
            tol: 1e-14,
            max_terms: 2_000_000,
            consecutive_small: 3,
        };
        let res = two_f_one(&a, &b, &cc, c(1.0, 0.0), &cfg).unwrap();
        assert!(res.converged);
        let want = 1.0471888966733323;
        assert!(
            (res.value.as_complex().unwrap().re - want).abs() < 1e-8,
            "got {}",
            res.value.as_complex().unwrap().re
        );
    }

    #[test]
    fn unit_argument_margin_gate() {
        // 3F2 with floor below the margin is rejected at z = 1
        let a = CMatrix::scalar(1, c(1.0, 0.0));
        let b = CMatrix::scalar(1, c(1.0, 0.0));
        let cc = CMatrix::scalar(1, c(2.05, 0.0));
        let r = two_f_one(&a, &b, &cc, c(1.0, 0.0), &SeriesConfig::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
        // |z| > 1 rejected outright
        let r = two_f_one(&a, &b, &cc, c(1.5, 0.0), &SeriesConfig::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn terminating_series_is_exact_finite_sum() {
        let t = random_commuting_triple(9, 2, &Default::default()).unwrap();
        let neg = CMatrix::scalar(2, c(-3.0, 0.0));
        let params = HyperParams::new(vec![neg.clone(), t.q.clone()], vec![t.r.clone()]).unwrap();
        // allowed even at z far outside the unit disc
        let res = pfq(&params, c(4.0, 0.0), &SeriesConfig::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.terms_used, 4);
        // explicit finite sum oracle
        let mut want = CMatrix::zeros(2);
        for m in 0..=3usize {
            let num = &crate::special::pochhammer(&neg, m) * &crate::special::pochhammer(&t.q, m);
            let den = crate::special::pochhammer(&t.r, m).inverse().unwrap();
            let mut fact = 1.0;
            for j in 1..=m {
                fact *= j as f64;
            }
            want = &want + &(&num * &den).scale(c(4.0, 0.0).powu(m as u32) / fact);
        }
        assert!(rel_diff(&res.value, &want) < 1e-12);
    }

    #[test]
    fn recurrence_matches_explicit_pochhammer_sum() {
        let t = random_commuting_triple(21, 3, &Default::default()).unwrap();
        let params = HyperParams::new(
            vec![t.p.clone(), t.q.clone()],
            vec![t.r.clone()],
        )
        .unwrap();
        let z = c(0.4, 0.1);
        let cfg = SeriesConfig {
            tol: 1e-30,
            max_terms: 30,
            consecutive_small: 3,
        };
        let res = pfq(&params, z, &cfg).unwrap();
        // literal form: sum of (P)_m (Q)_m (R)_m^{-1} z^m / m!
        let mut want = CMatrix::zeros(3);
        let mut fact = 1.0;
        for m in 0..=30usize {
            if m > 0 {
                fact *= m as f64;
            }
            let num = &crate::special::pochhammer(&t.p, m) * &crate::special::pochhammer(&t.q, m);
            let den = crate::special::pochhammer(&t.r, m).inverse().unwrap();
            want = &want + &(&num * &den).scale(z.powu(m as u32) / fact);
        }
        assert!(rel_diff(&res.value, &want) < 1e-12);
    }

    #[test]
    fn numerator_order_invariance() {
        let t = random_commuting_triple(33, 2, &Default::default()).unwrap();
        let z = c(0.3, 0.0);
        let a = pfq(
            &HyperParams::new(vec![t.p.clone(), t.q.clone()], vec![t.r.clone()]).unwrap(),
            z,
            &SeriesConfig::default(),
        )
        .unwrap();
        let b = pfq(
            &HyperParams::new(vec![t.q.clone(), t.p.clone()], vec![t.r.clone()]).unwrap(),
            z,
            &SeriesConfig::default(),
        )
        .unwrap();
        assert!(rel_diff(&a.value, &b.value) < 1e-13);
    }

    #[test]
    fn diagonal_factorization_matches_scalar_series() {
        let d1 = CMatrix::diagonal(&[c(0.4, 0.0), c(1.2, 0.0)]);
        let d2 = CMatrix::diagonal(&[c(0.9, 0.0), c(0.7, 0.0)]);
        let d3 = CMatrix::diagonal(&[c(1.6, 0.0), c(2.1, 0.0)]);
        let params = HyperParams::new(vec![d1, d2], vec![d3]).unwrap();
        let res = pfq(&params, c(0.5, 0.0), &SeriesConfig::default()).unwrap();
        let want = CMatrix::diagonal(&[
            c(scalar_pfq(&[0.4, 0.9], &[1.6], 0.5, 500), 0.0),
            c(scalar_pfq(&[1.2, 0.7], &[2.1], 0.5, 500), 0.0),
        ]);
        assert!(rel_diff(&res.value, &want) < 1e-10);
    }

    #[test]
    fn singular_denominator_shift_reported() {
        let bad = CMatrix::scalar(1, c(-2.0, 0.0));
        let params = HyperParams::new(vec![CMatrix::identity(1)], vec![bad]).unwrap();
        match pfq(&params, c(0.5, 0.0), &SeriesConfig::default()) {
            Err(Error::SingularShift { index }) => assert_eq!(index, 2),
            other => panic!("expected singular shift, got {other:?}"),
        }
    }

    #[test]
    fn accelerated_sum_handles_alternating_tail() {
        // sum (-1)^m / sqrt(m+1) converges conditionally; averaging nails it
        let reference = {
            // Euler-accelerated in f64 directly with plenty of terms
            let mut s = 0.0f64;
            let mut sums = Vec::new();
            for m in 0..2000 {
                s += (-1.0f64).powi(m) / ((m + 1) as f64).sqrt();
                sums.push(s);
            }
            let mut row = sums;
            while row.len() > 1 {
                row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            }
            row[0]
        };
        let cfg = SeriesConfig {
            tol: 1e-13,
            max_terms: 400,
            consecutive_small: 3,
        };
        let res = euler_accelerated_sum(
            |m| {
                Ok(Some(CMatrix::scalar(
                    1,
                    c((-1.0f64).powi(m as i32) / ((m + 1) as f64).sqrt(), 0.0),
                )))
            },
            1,
            &cfg,
        )
        .unwrap();
        assert!(res.converged);
        assert!((res.value.as_complex().unwrap().re - reference).abs() < 1e-10);
    }

    #[test]
    fn accelerated_sum_returns_exact_finite_sums() {
        let cfg = SeriesConfig::default();
        let res = euler_accelerated_sum(
            |m| {
                if m > 2 {
                    Ok(None)
                } else {
                    Ok(Some(CMatrix::scalar(1, c(1.0 / (m + 1) as f64, 0.0))))
                }
            },
            1,
            &cfg,
        )
        .unwrap();
        assert!(res.converged);
        let want = 1.0 + 0.5 + 1.0 / 3.0;
        assert_eq!(res.value.as_complex().unwrap().re, want);
    }
}
