//! Suite driver, report rows, and the discrepancy measurement.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::CMatrix;

use super::gen::{case_seed, gen_case};
use super::{verify_case, verify_t7, AuxCheck, IdentityId, Scalars, VerificationReport};

/// Residual threshold that a reading must attain uniformly for the
/// discrepancy report to name it.
pub const T7_DISCREPANCY_THRESHOLD: f64 = 1e-5;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub cases_per_identity: usize,
    pub tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 42,
            dims: vec![1, 2, 3],
            cases_per_identity: 5,
            tol: 1e-7,
        }
    }
}

/// Flat JSON row for one verified case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub identity: String,
    pub seed: u64,
    pub dim: usize,
    pub params: CaseParams,
    pub scalars: Scalars,
    pub residual: Option<f64>,
    pub tol: f64,
    pub passed: bool,
    pub lhs_route: String,
    pub rhs_route: String,
    pub terms_or_nodes: [usize; 2],
    pub checks: Vec<AuxCheck>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseParams {
    pub p: CMatrix,
    pub q: CMatrix,
    pub r: CMatrix,
    pub stability_margins: BTreeMap<String, f64>,
}

impl ReportRow {
    pub fn from_report(rep: &VerificationReport) -> Self {
        let case = &rep.case;
        ReportRow {
            identity: case.identity.as_str().to_string(),
            seed: case.seed,
            dim: case.triple.dim(),
            params: CaseParams {
                p: case.triple.p.clone(),
                q: case.triple.q.clone(),
                r: case.triple.r.clone(),
                stability_margins: case.triple.stability_margins.clone(),
            },
            scalars: case.scalars,
            residual: rep.residual,
            tol: case.tol,
            passed: rep.passed,
            lhs_route: rep.lhs_route.clone(),
            rhs_route: rep.rhs_route.clone(),
            terms_or_nodes: [rep.terms_or_nodes.0, rep.terms_or_nodes.1],
            checks: rep.checks.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkippedCase {
    pub identity: String,
    pub seed: u64,
    pub dim: usize,
    pub reason: String,
}

/// Result of evaluating both readings of the binomial-expansion identity on
/// q = 3 cases, where the readings genuinely differ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct T7Discrepancy {
    pub cases: Vec<ReportRow>,
    pub proof_max_residual: Option<f64>,
    pub stmt_max_residual: Option<f64>,
    pub threshold: f64,
    /// The reading that verified uniformly, when exactly one did.
    pub winner: Option<String>,
    pub conclusive: bool,
}

impl T7Discrepancy {
    pub fn summary_line(&self) -> String {
        let fmt = |r: Option<f64>| match r {
            Some(v) => format!("{v:.3e}"),
            None => "n/a".to_string(),
        };
        match &self.winner {
            Some(w) => format!(
                "T7 discrepancy: reading {w} verifies uniformly (max residual {} vs {} at threshold {:.0e})",
                fmt(self.proof_max_residual),
                fmt(self.stmt_max_residual),
                self.threshold
            ),
            None => format!(
                "T7 discrepancy: inconclusive (proof max {}, statement max {})",
                fmt(self.proof_max_residual),
                fmt(self.stmt_max_residual)
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub per_identity: BTreeMap<String, IdentityTally>,
    pub total_passed: usize,
    pub total_failed: usize,
    pub total_skipped: usize,
    pub all_passed: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct IdentityTally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub cases: Vec<ReportRow>,
    pub skipped: Vec<SkippedCase>,
    pub t7_discrepancy: T7Discrepancy,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV projection, one row per case (discrepancy rows included).
    pub fn to_csv(&self) -> String {
        let rows: Vec<&ReportRow> = self
            .cases
            .iter()
            .chain(self.t7_discrepancy.cases.iter())
            .collect();
        rows_to_csv(&rows)
    }
}

/// One CSV line per report row, for spreadsheet triage.
pub fn rows_to_csv<R: std::borrow::Borrow<ReportRow>>(rows: &[R]) -> String {
    let mut out = String::from(
        "identity,seed,dim,z,w,q_exp,n,k,residual,tol,passed,lhs_route,rhs_route,lhs_effort,rhs_effort\n",
    );
    let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let fmt_u32 = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in rows {
        let row = row.borrow();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},\"{}\",\"{}\",{},{}\n",
            row.identity,
            row.seed,
            row.dim,
            fmt_opt(row.scalars.z),
            fmt_opt(row.scalars.w),
            fmt_u32(row.scalars.q_exp),
            fmt_u32(row.scalars.n),
            fmt_u32(row.scalars.k),
            fmt_opt(row.residual),
            row.tol,
            row.passed,
            row.lhs_route.replace('"', "'"),
            row.rhs_route.replace('"', "'"),
            row.terms_or_nodes[0],
            row.terms_or_nodes[1],
        ));
    }
    out
}

fn case_tol(base: f64, dim: usize) -> f64 {
    // conditioning of the similarity costs about a digit above dim 3
    if dim <= 3 {
        base
    } else {
        base * 10.0
    }
}

/// Per-case pass tolerance: the user base tolerance, relaxed for higher
/// dimensions and floored at 1e-6 for the outer-series transformations
/// (their truncation budget).
pub fn case_tolerance(id: IdentityId, dim: usize, base: f64) -> f64 {
    let tol = case_tol(base, dim);
    match id {
        IdentityId::T3
        | IdentityId::C2
        | IdentityId::T6
        | IdentityId::C3
        | IdentityId::T5
        | IdentityId::T7Proof
        | IdentityId::T7Stmt => tol.max(case_tol(1e-6, dim)),
        _ => tol,
    }
}

/// Evaluates both readings on `count` q = 3 cases. Cases run in parallel;
/// the row order is fixed by case index regardless of thread count.
pub fn measure_t7_discrepancy(
    seed: u64,
    dims: &[usize],
    count: usize,
    tol: f64,
) -> Result<T7Discrepancy> {
    let pairs: Vec<(VerificationReport, VerificationReport)> = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<_> {
            let dim = dims[idx % dims.len()];
            // distinct stream from the main T7 rows
            let mut case = gen_case(
                IdentityId::T7Proof,
                seed ^ 0x7777_0000_0000_7777,
                idx,
                dim,
                case_tol(tol * 10.0, dim),
            )?;
            case.scalars.q_exp = Some(3);
            let proof_rep = verify_t7(&case);
            let mut stmt_case = case.clone();
            stmt_case.identity = IdentityId::T7Stmt;
            let stmt_rep = verify_t7(&stmt_case);
            Ok((proof_rep, stmt_rep))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut proof_max: Option<f64> = None;
    let mut stmt_max: Option<f64> = None;
    let mut all_resolved = true;
    for (proof_rep, stmt_rep) in &pairs {
        match proof_rep.residual {
            Some(r) => proof_max = Some(proof_max.map_or(r, |m: f64| m.max(r))),
            None => all_resolved = false,
        }
        match stmt_rep.residual {
            Some(r) => stmt_max = Some(stmt_max.map_or(r, |m: f64| m.max(r))),
            None => all_resolved = false,
        }
        rows.push(ReportRow::from_report(proof_rep));
        rows.push(ReportRow::from_report(stmt_rep));
    }
    let threshold = T7_DISCREPANCY_THRESHOLD;
    let proof_ok = proof_max.map(|m| m <= threshold).unwrap_or(false);
    let stmt_ok = stmt_max.map(|m| m <= threshold).unwrap_or(false);
    let winner = match (proof_ok, stmt_ok) {
        (true, false) => Some("T7_proof".to_string()),
        (false, true) => Some("T7_stmt".to_string()),
        _ => None,
    };
    let conclusive = all_resolved && winner.is_some();
    Ok(T7Discrepancy {
        cases: rows,
        proof_max_residual: proof_max,
        stmt_max_residual: stmt_max,
        threshold,
        winner,
        conclusive,
    })
}

/// Runs every verifier over freshly generated cases; deterministic for a
/// fixed seed. Cases run in parallel but the report order is fixed by
/// identity and case index. The exit-relevant flag `summary.all_passed`
/// requires every main case, every secondary check, and a conclusive
/// discrepancy measurement.
pub fn run_suite(options: &SuiteOptions) -> Result<SuiteReport> {
    if options.dims.is_empty() || options.dims.iter().any(|&d| d == 0 || d > 6) {
        return Err(crate::error::Error::Precondition(
            "suite dims must be a nonempty subset of 1..=6".into(),
        ));
    }
    if options.cases_per_identity < 1 || !(options.tol > 0.0) {
        return Err(crate::error::Error::Precondition(
            "suite needs cases_per_identity >= 1 and tol > 0".into(),
        ));
    }
    let jobs: Vec<(IdentityId, usize)> = IdentityId::ALL
        .iter()
        .flat_map(|&id| (0..options.cases_per_identity).map(move |idx| (id, idx)))
        .collect();
    let outcomes: Vec<std::result::Result<VerificationReport, SkippedCase>> = jobs
        .par_iter()
        .map(|&(id, idx)| {
            let dim = options.dims[idx % options.dims.len()];
            let tol = case_tolerance(id, dim, options.tol);
            match gen_case(id, options.seed, idx, dim, tol) {
                Ok(case) => Ok(verify_case(&case)),
                Err(e) => Err(SkippedCase {
                    identity: id.as_str().to_string(),
                    seed: case_seed(options.seed, id, idx),
                    dim,
                    reason: e.to_string(),
                }),
            }
        })
        .collect();

    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    let mut per_identity: BTreeMap<String, IdentityTally> = BTreeMap::new();
    let mut aux_ok = true;
    for outcome in &outcomes {
        match outcome {
            Ok(rep) => {
                aux_ok &= rep.aux_all_passed();
                let tally = per_identity
                    .entry(rep.case.identity.as_str().to_string())
                    .or_default();
                if rep.passed {
                    tally.passed += 1;
                } else {
                    tally.failed += 1;
                }
                cases.push(ReportRow::from_report(rep));
            }
            Err(skip) => skipped.push(skip.clone()),
        }
    }

    let t7_discrepancy = measure_t7_discrepancy(
        options.seed,
        &options.dims,
        options.cases_per_identity,
        options.tol,
    )?;

    let total_passed = cases.iter().filter(|c| c.passed).count();
    let total_failed = cases.len() - total_passed;
    let all_passed = total_failed == 0 && aux_ok && t7_discrepancy.conclusive;
    Ok(SuiteReport {
        options: options.clone(),
        summary: SuiteSummary {
            per_identity,
            total_passed,
            total_failed,
            total_skipped: skipped.len(),
            all_passed,
        },
        cases,
        skipped,
        t7_discrepancy,
    })
}
