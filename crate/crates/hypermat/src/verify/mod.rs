//! Numerical verification of the Euler-type integral representations and
//! the unit/half-argument transformations.
//!
//! Every identity is checked by evaluating its two sides through
//! independent numerical routes (series vs quadrature, or series vs
//! gamma-ratio times series) and reporting the relative residual
//! `‖LHS-RHS‖₂ / (1 + max(‖LHS‖₂, ‖RHS‖₂))`. The two readings of the
//! binomial-expansion identity (statement vs proof substitution) are both
//! evaluated and the suite names the reading that verifies numerically.

mod gen;
mod report;

pub use gen::{gen_case, generation_constraints};
pub use report::{
    case_tolerance, rows_to_csv, ReportRow, SkippedCase, SuiteOptions, SuiteReport, SuiteSummary,
    T7Discrepancy,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{euler_integral_with_nodes, EulerIntegralSpec};
use crate::hyper::{euler_accelerated_sum, pfq, two_f_one, HyperParams, SeriesConfig};
use crate::matrix::{holomorphic_apply, rel_diff, CMatrix, CommutingTriple, ExpScaled};
use crate::special::{gamma_matrix, pochhammer, reciprocal_gamma};

/// The identities covered by the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    /// Integral representation of the twofold-split 3F2.
    T1,
    /// Its polynomial special case (P = -kI).
    #[serde(rename = "C_T1")]
    CT1,
    /// Unit-argument value via the gamma ratio and 2F1 at -1.
    T2,
    /// Terminating unit-argument value via the Pochhammer ratio (P = -nI).
    C1,
    /// Half-argument transformation (outer binomial series).
    T3,
    /// Half-argument transformation with inner 3F2(;1) values.
    C2,
    /// Integral representation with general power q.
    T4,
    /// q = 3 unit-argument transformation.
    T5,
    /// Rational-argument transformation in w.
    T6,
    /// Its w = -2 specialization (argument -1).
    C3,
    /// Binomial-expansion identity, parameters as printed.
    #[serde(rename = "T7_stmt")]
    T7Stmt,
    /// Binomial-expansion identity, parameters from the substitution.
    #[serde(rename = "T7_proof")]
    T7Proof,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::T1,
        IdentityId::CT1,
        IdentityId::T2,
        IdentityId::C1,
        IdentityId::T3,
        IdentityId::C2,
        IdentityId::T4,
        IdentityId::T5,
        IdentityId::T6,
        IdentityId::C3,
        IdentityId::T7Stmt,
        IdentityId::T7Proof,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::T1 => "T1",
            IdentityId::CT1 => "C_T1",
            IdentityId::T2 => "T2",
            IdentityId::C1 => "C1",
            IdentityId::T3 => "T3",
            IdentityId::C2 => "C2",
            IdentityId::T4 => "T4",
            IdentityId::T5 => "T5",
            IdentityId::T6 => "T6",
            IdentityId::C3 => "C3",
            IdentityId::T7Stmt => "T7_stmt",
            IdentityId::T7Proof => "T7_proof",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        IdentityId::ALL.iter().copied().find(|id| id.as_str() == s)
    }
}

/// Scalar knobs of a case; which are present depends on the identity.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Scalars {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_exp: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

/// One verification case: an identity, a commuting triple satisfying its
/// stability hypotheses, scalar arguments, and a pass tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCase {
    pub identity: IdentityId,
    pub seed: u64,
    pub triple: CommutingTriple,
    pub scalars: Scalars,
    pub tol: f64,
}

/// A named secondary comparison carried by a report (cross-route checks).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuxCheck {
    pub name: String,
    pub residual: Option<f64>,
    pub tol: f64,
    pub passed: bool,
}

/// Outcome of one case: both sides, the residual, and route annotations.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub lhs: Option<CMatrix>,
    pub rhs: Option<CMatrix>,
    pub residual: Option<f64>,
    pub passed: bool,
    pub lhs_route: String,
    pub rhs_route: String,
    /// Effort counters: series terms or quadrature nodes per side.
    pub terms_or_nodes: (usize, usize),
    pub checks: Vec<AuxCheck>,
}

impl VerificationReport {
    pub fn aux_all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn failure(case: &IdentityCase, side: &str, err: &Error, other_route: &str) -> Self {
        let (lhs_route, rhs_route) = if side == "lhs" {
            (format!("failed: {err}"), other_route.to_string())
        } else {
            (other_route.to_string(), format!("failed: {err}"))
        };
        VerificationReport {
            case: case.clone(),
            lhs: None,
            rhs: None,
            residual: None,
            passed: false,
            lhs_route,
            rhs_route,
            terms_or_nodes: (0, 0),
            checks: Vec::new(),
        }
    }
}

fn re(z: f64) -> Complex64 {
    Complex64::new(z, 0.0)
}

/// `[(X + jI)/q for j in 0..q]`, the q-fold parameter splitting.
pub fn split_params(x: &CMatrix, q: u32) -> Vec<CMatrix> {
    (0..q)
        .map(|j| x.shift_re(j as f64).scale_re(1.0 / q as f64))
        .collect()
}

/// Numerator/denominator lists of the q-fold hypergeometric side.
fn qfold_params(triple: &CommutingTriple, q: u32) -> Result<HyperParams> {
    let mut num = vec![triple.p.clone()];
    num.extend(split_params(&triple.q, q));
    HyperParams::new(num, split_params(&triple.r, q))
}

/// Series budget for arguments strictly inside the unit disc.
fn interior_cfg() -> SeriesConfig {
    SeriesConfig {
        tol: 1e-12,
        max_terms: 20_000,
        consecutive_small: 3,
    }
}

/// Series budget for |z| = 1 power-law tails (margins are generated large
/// enough that the stopping term bounds the tail well under the case tol).
fn unit_cfg() -> SeriesConfig {
    SeriesConfig {
        tol: 1e-12,
        max_terms: 60_000,
        consecutive_small: 3,
    }
}

/// Budget for the accelerated outer sums of T3/T6-type transformations.
fn outer_cfg() -> SeriesConfig {
    SeriesConfig {
        tol: 1e-11,
        max_terms: 400,
        consecutive_small: 3,
    }
}

/// Budget for the plain outer sum of the binomial-expansion identity.
fn t7_outer_cfg() -> SeriesConfig {
    SeriesConfig {
        tol: 1e-10,
        max_terms: 8000,
        consecutive_small: 3,
    }
}

fn quad_tol(case_tol: f64) -> f64 {
    (case_tol * 1e-2).clamp(1e-12, 1e-9)
}

/// Γ(R) Γ(R-Q-P) Γ⁻¹(R-P) Γ⁻¹(R-Q), the unit-argument gamma ratio.
fn unit_gamma_ratio(t: &CommutingTriple) -> Result<CMatrix> {
    let rq = &t.r - &t.q;
    let rp = &t.r - &t.p;
    let rqp = &rq - &t.p;
    let a = gamma_matrix(&t.r)?;
    let b = gamma_matrix(&rqp)?;
    let c = reciprocal_gamma(&rp)?;
    let d = reciprocal_gamma(&rq)?;
    Ok(&(&(&a * &b) * &c) * &d)
}

/// Dispatches a case to its verifier.
pub fn verify_case(case: &IdentityCase) -> VerificationReport {
    match case.identity {
        IdentityId::T1 | IdentityId::CT1 => verify_t1(case),
        IdentityId::T2 | IdentityId::C1 => verify_t2(case),
        IdentityId::T3 | IdentityId::C2 => verify_t3(case),
        IdentityId::T4 => verify_t4(case),
        IdentityId::T5 => verify_t5(case),
        IdentityId::T6 | IdentityId::C3 => verify_t6(case),
        IdentityId::T7Stmt | IdentityId::T7Proof => verify_t7(case),
    }
}

/// Integral-representation check: series LHS against the quadrature RHS
/// with the given power `q_exp` (q_exp = 2 is the twofold T1 case, general
/// q_exp the q-fold T4 family; P = -kI gives the polynomial special case).
fn verify_integral_representation(case: &IdentityCase, q_exp: u32) -> VerificationReport {
    let t = &case.triple;
    let z = case.scalars.z.unwrap_or(0.0);
    let lhs = (|| -> Result<(CMatrix, usize)> {
        let params = qfold_params(t, q_exp)?;
        let r = pfq(&params, re(z), &interior_cfg())?;
        if !r.converged {
            return Err(Error::Precondition(format!(
                "series did not converge in {} terms",
                r.terms_used
            )));
        }
        Ok((r.value, r.terms_used))
    })();
    let (lhs, lhs_terms) = match lhs {
        Ok(v) => v,
        Err(e) => return VerificationReport::failure(case, "lhs", &e, "Gauss-Jacobi Euler integral"),
    };
    let rhs = (|| -> Result<(CMatrix, usize)> {
        let spec = EulerIntegralSpec::new(&t.p, &t.q, &t.r, re(z), q_exp)?;
        euler_integral_with_nodes(&spec, quad_tol(case.tol))
    })();
    let (rhs, nodes) = match rhs {
        Ok(v) => v,
        Err(e) => {
            let mut rep =
                VerificationReport::failure(case, "rhs", &e, &format!("{}F{} series", q_exp + 1, q_exp));
            rep.lhs = Some(lhs);
            rep.terms_or_nodes.0 = lhs_terms;
            return rep;
        }
    };
    let residual = rel_diff(&lhs, &rhs);
    VerificationReport {
        case: case.clone(),
        passed: residual <= case.tol,
        residual: Some(residual),
        lhs: Some(lhs),
        rhs: Some(rhs),
        lhs_route: format!("{}F{} series ({} terms)", q_exp + 1, q_exp, lhs_terms),
        rhs_route: format!("Gauss-Jacobi Euler integral ({nodes} nodes, q = {q_exp})"),
        terms_or_nodes: (lhs_terms, nodes),
        checks: Vec::new(),
    }
}

pub fn verify_t1(case: &IdentityCase) -> VerificationReport {
    verify_integral_representation(case, 2)
}

pub fn verify_t4(case: &IdentityCase) -> VerificationReport {
    let q_exp = case.scalars.q_exp.unwrap_or(2);
    let mut rep = verify_integral_representation(case, q_exp);
    if q_exp == 2 {
        // the twofold splitting is definitionally the T1 route
        let t1_case = IdentityCase {
            identity: IdentityId::T1,
            ..case.clone()
        };
        let t1 = verify_t1(&t1_case);
        let residual = match (&rep.lhs, &t1.lhs, &rep.rhs, &t1.rhs) {
            (Some(a), Some(b), Some(c), Some(d)) => Some(rel_diff(a, b).max(rel_diff(c, d))),
            _ => None,
        };
        rep.checks.push(AuxCheck {
            name: "q2-equals-t1-route".into(),
            passed: residual.map(|r| r <= 1e-12).unwrap_or(false),
            residual,
            tol: 1e-12,
        });
    }
    rep
}

/// Unit-argument representation: series (cross-checked by quadrature)
/// against the gamma ratio times 2F1 at -1. For P = -nI the Pochhammer
/// ratio of the terminating form is the primary right-hand side and the gamma
/// route becomes an agreement check.
pub fn verify_t2(case: &IdentityCase) -> VerificationReport {
    let t = &case.triple;
    let lhs = (|| -> Result<(CMatrix, usize)> {
        let params = qfold_params(t, 2)?;
        let r = pfq(&params, re(1.0), &unit_cfg())?;
        if !r.converged {
            return Err(Error::Precondition(format!(
                "unit-argument series did not converge in {} terms",
                r.terms_used
            )));
        }
        Ok((r.value, r.terms_used))
    })();
    let (lhs, lhs_terms) = match lhs {
        Ok(v) => v,
        Err(e) => return VerificationReport::failure(case, "lhs", &e, "gamma ratio x 2F1(-1)"),
    };

    let mut checks = Vec::new();
    // independent integral route for the same series value
    match EulerIntegralSpec::new(&t.p, &t.q, &t.r, re(1.0), 2)
        .and_then(|spec| euler_integral_with_nodes(&spec, quad_tol(case.tol)))
    {
        Ok((quad, _nodes)) => {
            let r = rel_diff(&lhs, &quad);
            checks.push(AuxCheck {
                name: "integral-cross-check".into(),
                residual: Some(r),
                tol: case.tol,
                passed: r <= case.tol,
            });
        }
        Err(e) => checks.push(AuxCheck {
            name: format!("integral-cross-check failed: {e}"),
            residual: None,
            tol: case.tol,
            passed: false,
        }),
    }

    let gamma_route = (|| -> Result<(CMatrix, usize)> {
        let ratio = unit_gamma_ratio(t)?;
        let f = two_f_one(&t.p, &t.q, &(&t.r - &t.p), re(-1.0), &unit_cfg())?;
        if !f.converged {
            return Err(Error::Precondition("2F1(-1) did not converge".into()));
        }
        Ok((&ratio * &f.value, f.terms_used))
    })();

    if case.identity == IdentityId::C1 {
        let n = case.scalars.n.unwrap_or(1) as usize;
        let rhs = (|| -> Result<(CMatrix, usize)> {
            let ratio = &pochhammer(&(&t.r - &t.q), n) * &pochhammer(&t.r, n).inverse()?;
            let f = two_f_one(
                &CMatrix::scalar(t.dim(), re(-(n as f64))),
                &t.q,
                &t.r.shift_re(n as f64),
                re(-1.0),
                &unit_cfg(),
            )?;
            Ok((&ratio * &f.value, f.terms_used))
        })();
        let (rhs, rhs_terms) = match rhs {
            Ok(v) => v,
            Err(e) => return VerificationReport::failure(case, "rhs", &e, "3F2 series at z = 1"),
        };
        match &gamma_route {
            Ok((g, _)) => {
                let r = rel_diff(&rhs, g);
                checks.push(AuxCheck {
                    name: "pochhammer-vs-gamma-route".into(),
                    residual: Some(r),
                    tol: 1e-10,
                    passed: r <= 1e-10,
                });
            }
            Err(e) => checks.push(AuxCheck {
                name: format!("pochhammer-vs-gamma-route failed: {e}"),
                residual: None,
                tol: 1e-10,
                passed: false,
            }),
        }
        let residual = rel_diff(&lhs, &rhs);
        return VerificationReport {
            case: case.clone(),
            passed: residual <= case.tol,
            residual: Some(residual),
            lhs: Some(lhs),
            rhs: Some(rhs),
            lhs_route: format!("terminating 3F2 at z = 1 ({lhs_terms} terms)"),
            rhs_route: format!("Pochhammer ratio x terminating 2F1(-1) ({rhs_terms} terms)"),
            terms_or_nodes: (lhs_terms, rhs_terms),
            checks,
        };
    }

    let (rhs, rhs_terms) = match gamma_route {
        Ok(v) => v,
        Err(e) => {
            let mut rep = VerificationReport::failure(case, "rhs", &e, "3F2 series at z = 1");
            rep.lhs = Some(lhs);
            rep.terms_or_nodes.0 = lhs_terms;
            rep.checks = checks;
            return rep;
        }
    };
    let residual = rel_diff(&lhs, &rhs);
    VerificationReport {
        case: case.clone(),
        passed: residual <= case.tol,
        residual: Some(residual),
        lhs: Some(lhs),
        rhs: Some(rhs),
        lhs_route: format!("3F2 series at z = 1 ({lhs_terms} terms)"),
        rhs_route: format!("gamma ratio x 2F1 series at -1 ({rhs_terms} terms)"),
        terms_or_nodes: (lhs_terms, rhs_terms),
        checks,
    }
}

/// Which inner evaluation the rational-argument family uses.
#[derive(Clone, Copy, PartialEq)]
enum InnerRoute {
    /// C1 form: Pochhammer ratio times terminating 2F1(-1).
    Ratio,
    /// Direct terminating 3F2 at unit argument.
    ThreeF2,
}

pub fn verify_t3(case: &IdentityCase) -> VerificationReport {
    let route = if case.identity == IdentityId::C2 {
        InnerRoute::ThreeF2
    } else {
        InnerRoute::Ratio
    };
    let mut rep = rational_argument_core(case, 1.0, route);
    if case.identity == IdentityId::C2 {
        // the two inner forms are term-by-term equal by the C1 identity
        let other = rational_argument_core(case, 1.0, InnerRoute::Ratio);
        let residual = match (&rep.rhs, &other.rhs) {
            (Some(a), Some(b)) => Some(rel_diff(a, b)),
            _ => None,
        };
        rep.checks.push(AuxCheck {
            name: "c2-vs-t3-route".into(),
            passed: residual.map(|r| r <= 1e-10).unwrap_or(false),
            residual,
            tol: 1e-10,
        });
    }
    rep
}

pub fn verify_t6(case: &IdentityCase) -> VerificationReport {
    let w = case.scalars.w.unwrap_or(2.0);
    rational_argument_core(case, w, InnerRoute::Ratio)
}

/// Core of T3/C2/T6/C3: 3F2 at z = 1/(w+1) equals
/// ((w+1)/w)^P Σ_m binom(-P,m) w^{-m} (inner unit-argument values).
fn rational_argument_core(case: &IdentityCase, w: f64, inner: InnerRoute) -> VerificationReport {
    let t = &case.triple;
    if w == 0.0 || w == -1.0 {
        let e = Error::Precondition(format!("w = {w} is outside R \\ {{0, -1}}"));
        return VerificationReport::failure(case, "rhs", &e, "3F2 series");
    }
    let terminating = t.p.as_neg_int_scalar().is_some();
    if w != 1.0 && w.abs() < 1.5 && !terminating {
        let e = Error::Precondition(format!(
            "outer series needs |w| >= 1.5 (got {w}) unless P = -kI"
        ));
        return VerificationReport::failure(case, "rhs", &e, "3F2 series");
    }
    let z = 1.0 / (w + 1.0);
    let at_unit = (z.abs() - 1.0).abs() <= 1e-12;

    let series_lhs = (|| -> Result<(CMatrix, usize)> {
        let params = qfold_params(t, 2)?;
        let cfg = if at_unit { unit_cfg() } else { interior_cfg() };
        let r = pfq(&params, re(z), &cfg)?;
        if !r.converged {
            return Err(Error::Precondition(format!(
                "series at z = {z} did not converge in {} terms",
                r.terms_used
            )));
        }
        Ok((r.value, r.terms_used))
    })();
    // when the unit-circle margin gate rejects the direct series, the
    // integral representation supplies the left-hand value instead
    let (lhs, lhs_terms, lhs_route, lhs_is_quadrature) = match series_lhs {
        Ok((v, n)) => (v, n, format!("3F2 series at z = {z} ({n} terms)"), false),
        Err(e @ Error::Precondition(_)) if at_unit => {
            match EulerIntegralSpec::new(&t.p, &t.q, &t.r, re(z), 2)
                .and_then(|spec| euler_integral_with_nodes(&spec, quad_tol(case.tol)))
            {
                Ok((v, nodes)) => (
                    v,
                    nodes,
                    format!("Euler integral at z = {z} ({nodes} nodes; series margin below gate)"),
                    true,
                ),
                Err(_) => {
                    return VerificationReport::failure(case, "lhs", &e, "outer binomial series")
                }
            }
        }
        Err(e) => return VerificationReport::failure(case, "lhs", &e, "outer binomial series"),
    };

    let mut checks = Vec::new();
    if !lhs_is_quadrature {
        match EulerIntegralSpec::new(&t.p, &t.q, &t.r, re(z), 2)
            .and_then(|spec| euler_integral_with_nodes(&spec, quad_tol(case.tol)))
        {
            Ok((quad, _)) => {
                let r = rel_diff(&lhs, &quad);
                checks.push(AuxCheck {
                    name: "integral-cross-check".into(),
                    residual: Some(r),
                    tol: case.tol,
                    passed: r <= case.tol,
                });
            }
            Err(e) => checks.push(AuxCheck {
                name: format!("integral-cross-check failed: {e}"),
                residual: None,
                tol: case.tol,
                passed: false,
            }),
        }
    }

    let rhs = (|| -> Result<(CMatrix, usize)> {
        let dim = t.dim();
        let base = (w + 1.0) / w;
        let prefactor = holomorphic_apply(&ExpScaled::new(re(base.ln())), &t.p)?;
        let rq = &t.r - &t.q;
        // binom(-P, m) w^{-m}, the Pochhammer ratio, and (R)_m^{-1} are all
        // advanced incrementally
        let mut binom_w = CMatrix::identity(dim);
        let mut ratio = CMatrix::identity(dim);
        let mut term_zero = false;
        let sum = euler_accelerated_sum(
            |m| {
                if term_zero {
                    return Ok(None);
                }
                if m > 0 {
                    let mf = (m - 1) as f64;
                    binom_w = (&binom_w * &t.p.shift_re(mf)).scale_re(-1.0 / (m as f64 * w));
                    if binom_w.is_zero() {
                        term_zero = true;
                        return Ok(None);
                    }
                    ratio = &(&ratio * &rq.shift_re(mf)) * &t.r.shift_re(mf).inverse()?;
                }
                let inner_val = match inner {
                    InnerRoute::Ratio => {
                        let f = two_f_one(
                            &CMatrix::scalar(dim, re(-(m as f64))),
                            &t.q,
                            &t.r.shift_re(m as f64),
                            re(-1.0),
                            &interior_cfg(),
                        )?;
                        &ratio * &f.value
                    }
                    InnerRoute::ThreeF2 => {
                        let mut num = vec![CMatrix::scalar(dim, re(-(m as f64)))];
                        num.extend(split_params(&t.q, 2));
                        let params = HyperParams::new(num, split_params(&t.r, 2))?;
                        pfq(&params, re(1.0), &interior_cfg())?.value
                    }
                };
                Ok(Some(&binom_w * &inner_val))
            },
            dim,
            &outer_cfg(),
        )?;
        if !sum.converged {
            return Err(Error::Precondition(format!(
                "outer series did not stabilize in {} terms",
                sum.terms_used
            )));
        }
        Ok((&prefactor * &sum.value, sum.terms_used))
    })();
    let (rhs, rhs_terms) = match rhs {
        Ok(v) => v,
        Err(e) => {
            let mut rep = VerificationReport::failure(case, "rhs", &e, "3F2 series");
            rep.lhs = Some(lhs);
            rep.terms_or_nodes.0 = lhs_terms;
            rep.checks = checks;
            return rep;
        }
    };
    let residual = rel_diff(&lhs, &rhs);
    let inner_name = match inner {
        InnerRoute::Ratio => "Pochhammer-ratio 2F1(-1)",
        InnerRoute::ThreeF2 => "terminating 3F2(1)",
    };
    VerificationReport {
        case: case.clone(),
        passed: residual <= case.tol,
        residual: Some(residual),
        lhs: Some(lhs),
        rhs: Some(rhs),
        lhs_route,
        rhs_route: format!(
            "((w+1)/w)^P x outer binomial series over {inner_name} ({rhs_terms} terms)"
        ),
        terms_or_nodes: (lhs_terms, rhs_terms),
        checks,
    }
}

/// q = 3 unit-argument transformation: terminating 4F3 at z = 1 against the
/// gamma ratio times the finite alternating sum of inner 2F1(-1) values.
pub fn verify_t5(case: &IdentityCase) -> VerificationReport {
    let t = &case.triple;
    let lhs = (|| -> Result<(CMatrix, usize)> {
        let params = qfold_params(t, 3)?;
        let r = pfq(&params, re(1.0), &unit_cfg())?;
        if !r.converged {
            return Err(Error::Precondition(format!(
                "4F3 at z = 1 did not converge in {} terms",
                r.terms_used
            )));
        }
        Ok((r.value, r.terms_used))
    })();
    let (lhs, lhs_terms) = match lhs {
        Ok(v) => v,
        Err(e) => return VerificationReport::failure(case, "lhs", &e, "gamma ratio x 2F1(-1) sum"),
    };

    let mut checks = Vec::new();
    match EulerIntegralSpec::new(&t.p, &t.q, &t.r, re(1.0), 3)
        .and_then(|spec| euler_integral_with_nodes(&spec, quad_tol(case.tol)))
    {
        Ok((quad, _)) => {
            let r = rel_diff(&lhs, &quad);
            checks.push(AuxCheck {
                name: "integral-cross-check".into(),
                residual: Some(r),
                tol: case.tol,
                passed: r <= case.tol,
            });
        }
        Err(e) => checks.push(AuxCheck {
            name: format!("integral-cross-check failed: {e}"),
            residual: None,
            tol: case.tol,
            passed: false,
        }),
    }

    let rhs = (|| -> Result<(CMatrix, usize)> {
        let dim = t.dim();
        let ratio = unit_gamma_ratio(t)?;
        let rp = &t.r - &t.p;
        // (-1)^m (P)_m (Q)_m / (m! (R-P)_m), advanced incrementally
        let mut coeff = CMatrix::identity(dim);
        let mut done = false;
        let sum = euler_accelerated_sum(
            |m| {
                if done {
                    return Ok(None);
                }
                if m > 0 {
                    let mf = (m - 1) as f64;
                    coeff = &(&coeff * &(&t.p.shift_re(mf) * &t.q.shift_re(mf)))
                        * &rp.shift_re(mf).inverse()?;
                    coeff = coeff.scale_re(-1.0 / m as f64);
                    if coeff.is_zero() {
                        done = true;
                        return Ok(None);
                    }
                }
                let f = two_f_one(
                    &CMatrix::scalar(dim, re(-(m as f64))),
                    &t.q.shift_re(m as f64),
                    &rp.shift_re(m as f64),
                    re(-1.0),
                    &interior_cfg(),
                )?;
                Ok(Some(&coeff * &f.value))
            },
            dim,
            &outer_cfg(),
        )?;
        if !sum.converged {
            return Err(Error::Precondition(format!(
                "outer series did not stabilize in {} terms (divergent for generic P)",
                sum.terms_used
            )));
        }
        Ok((&ratio * &sum.value, sum.terms_used))
    })();
    let (rhs, rhs_terms) = match rhs {
        Ok(v) => v,
        Err(e) => {
            let mut rep = VerificationReport::failure(case, "rhs", &e, "4F3 series at z = 1");
            rep.lhs = Some(lhs);
            rep.terms_or_nodes.0 = lhs_terms;
            rep.checks = checks;
            return rep;
        }
    };
    let residual = rel_diff(&lhs, &rhs);
    VerificationReport {
        case: case.clone(),
        passed: residual <= case.tol,
        residual: Some(residual),
        lhs: Some(lhs),
        rhs: Some(rhs),
        lhs_route: format!("4F3 series at z = 1 ({lhs_terms} terms)"),
        rhs_route: format!("gamma ratio x alternating 2F1(-1) sum ({rhs_terms} terms)"),
        terms_or_nodes: (lhs_terms, rhs_terms),
        checks,
    }
}

/// Binomial-expansion identity. The statement reading divides the shifted
/// parameter by 2, the proof substitution divides by q; both are computed
/// against the same q-fold series LHS.
pub fn verify_t7(case: &IdentityCase) -> VerificationReport {
    let t = &case.triple;
    let q_exp = case.scalars.q_exp.unwrap_or(2);
    let z = case.scalars.z.unwrap_or(0.25);
    let divisor = match case.identity {
        IdentityId::T7Stmt => 2,
        _ => q_exp,
    };

    let lhs = (|| -> Result<(CMatrix, usize)> {
        let params = qfold_params(t, q_exp)?;
        let r = pfq(&params, re(z), &interior_cfg())?;
        if !r.converged {
            return Err(Error::Precondition(format!(
                "series did not converge in {} terms",
                r.terms_used
            )));
        }
        Ok((r.value, r.terms_used))
    })();
    let (lhs, lhs_terms) = match lhs {
        Ok(v) => v,
        Err(e) => return VerificationReport::failure(case, "lhs", &e, "binomial m-series"),
    };

    let mut checks = Vec::new();
    match EulerIntegralSpec::new(&t.p, &t.q, &t.r, re(z), q_exp)
        .and_then(|spec| euler_integral_with_nodes(&spec, quad_tol(case.tol)))
    {
        Ok((quad, _)) => {
            let r = rel_diff(&lhs, &quad);
            checks.push(AuxCheck {
                name: "integral-cross-check".into(),
                residual: Some(r),
                tol: case.tol,
                passed: r <= case.tol,
            });
        }
        Err(e) => checks.push(AuxCheck {
            name: format!("integral-cross-check failed: {e}"),
            residual: None,
            tol: case.tol,
            passed: false,
        }),
    }

    let rhs = (|| -> Result<(CMatrix, usize)> {
        let dim = t.dim();
        let prefactor = {
            let g_r = gamma_matrix(&t.r)?;
            let rg_q = reciprocal_gamma(&t.q)?;
            let rg_rq = reciprocal_gamma(&(&t.r - &t.q))?;
            &(&g_r * &rg_q) * &rg_rq
        };
        let a = (&t.r - &t.q).shift_re(-1.0); // R - Q - I
        let cfg = t7_outer_cfg();
        let mut sum = CMatrix::zeros(dim);
        let mut signed_choose = CMatrix::identity(dim); // (-1)^m choose(R-Q-I, m)
        let mut terms_used = 0usize;
        let mut small_run = 0usize;
        let mut converged = false;
        for m in 0..cfg.max_terms {
            if m > 0 {
                let mf = (m - 1) as f64;
                signed_choose = (&signed_choose * &a.shift_re(-mf)).scale_re(-1.0 / m as f64);
            }
            if signed_choose.is_zero() {
                converged = true;
                break;
            }
            let shifted = t.q.shift_re(m as f64);
            let c_param = shifted.scale_re(1.0 / divisor as f64);
            let f = two_f_one(
                &t.p,
                &c_param,
                &c_param.shift_re(1.0),
                re(z),
                &interior_cfg(),
            )?;
            let term = &(&signed_choose * &shifted.inverse()?) * &f.value;
            sum = &sum + &term;
            terms_used = m + 1;
            if term.norm_fro() <= cfg.tol * (1.0 + sum.norm_fro()) {
                small_run += 1;
                if small_run >= cfg.consecutive_small {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged {
            return Err(Error::Precondition(format!(
                "binomial m-series did not converge in {terms_used} terms"
            )));
        }
        Ok((&prefactor * &sum, terms_used))
    })();
    let (rhs, rhs_terms) = match rhs {
        Ok(v) => v,
        Err(e) => {
            let mut rep = VerificationReport::failure(
                case,
                "rhs",
                &e,
                &format!("{}F{} series", q_exp + 1, q_exp),
            );
            rep.lhs = Some(lhs);
            rep.terms_or_nodes.0 = lhs_terms;
            rep.checks = checks;
            return rep;
        }
    };
    let residual = rel_diff(&lhs, &rhs);
    VerificationReport {
        case: case.clone(),
        passed: residual <= case.tol,
        residual: Some(residual),
        lhs: Some(lhs),
        rhs: Some(rhs),
        lhs_route: format!("{}F{} series at z = {z} ({lhs_terms} terms)", q_exp + 1, q_exp),
        rhs_route: format!(
            "binomial m-series of 2F1((Q+mI)/{divisor}) values ({rhs_terms} terms)"
        ),
        terms_or_nodes: (lhs_terms, rhs_terms),
        checks,
    }
}

pub use report::{measure_t7_discrepancy, run_suite};
