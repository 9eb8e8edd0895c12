//! Deterministic generation of commuting positive-stable matrix families.
//!
//! A triple (P, Q, R) is built from three random diagonal matrices
//! conjugated by one shared similarity, so the matrices commute exactly up
//! to roundoff and their stability margins are controlled by construction.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{spectral_floor, CMatrix};

/// Commutator tolerance factor for generated families.
pub const COMMUTATOR_TOL: f64 = 1e-11;

/// Cap on the similarity condition number.
pub const MAX_SIMILARITY_COND: f64 = 50.0;

/// How the P member of a triple is drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum PSpec {
    /// Eigenvalue real parts drawn from the given range.
    Random { re: (f64, f64) },
    /// Exactly `-k * I` (kept scalar so terminating series detect it).
    NegIntScalar(u32),
}

impl Default for PSpec {
    fn default() -> Self {
        PSpec::Random { re: (0.1, 0.8) }
    }
}

/// Required positive-stability margins for the generated family.
///
/// A `Some(m)` entry demands `b(X) > m` for the named combination; `Q` and
/// `R - Q` default to margin 0.1 when unset since every identity needs the
/// beta-type prefactor to exist.
#[derive(Clone, Debug, Default)]
pub struct StabilityConstraints {
    pub q_margin: Option<f64>,
    pub r_minus_q_margin: Option<f64>,
    pub r_minus_p_margin: Option<f64>,
    pub r_minus_q_minus_p_margin: Option<f64>,
    pub p: PSpec,
    /// Half-width of the eigenvalue imaginary-part range (default 0.3).
    pub imag_half_width: Option<f64>,
}

/// Matrices (P, Q, R) sharing one similarity transform, with stability
/// metadata recomputed from the generated matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutingTriple {
    pub p: CMatrix,
    pub q: CMatrix,
    pub r: CMatrix,
    pub similarity: CMatrix,
    pub seed: u64,
    pub stability_margins: BTreeMap<String, f64>,
}

impl CommutingTriple {
    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn margin(&self, label: &str) -> Option<f64> {
        self.stability_margins.get(label).copied()
    }
}

/// Draws a commuting triple satisfying the constraints; deterministic for a
/// fixed seed. Bounded retries guard against unsatisfiable margin draws.
pub fn random_commuting_triple(
    seed: u64,
    dim: usize,
    constraints: &StabilityConstraints,
) -> Result<CommutingTriple> {
    if dim == 0 {
        return Err(Error::Precondition("dim must be >= 1".into()));
    }
    if let PSpec::Random { re } = constraints.p {
        if !(re.0 < re.1) || !re.0.is_finite() || !re.1.is_finite() {
            return Err(Error::Generation(format!(
                "P real-part range ({}, {}) is empty or non-finite",
                re.0, re.1
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let imag = constraints.imag_half_width.unwrap_or(0.3);
    let mq = constraints.q_margin.unwrap_or(0.1);
    let mrq = constraints.r_minus_q_margin.unwrap_or(0.1);

    for _attempt in 0..64 {
        let mut p_eigs = Vec::with_capacity(dim);
        let mut q_eigs = Vec::with_capacity(dim);
        let mut r_eigs = Vec::with_capacity(dim);
        let draw_im = |rng: &mut ChaCha8Rng| -> f64 {
            if imag > 0.0 {
                rng.gen_range(-imag..imag)
            } else {
                0.0
            }
        };
        for _ in 0..dim {
            let p = match constraints.p {
                PSpec::Random { re } => {
                    Complex64::new(rng.gen_range(re.0..re.1), draw_im(&mut rng))
                }
                PSpec::NegIntScalar(k) => Complex64::new(-(k as f64), 0.0),
            };
            let q = Complex64::new(rng.gen_range(mq + 0.05..mq + 1.2), draw_im(&mut rng));
            // R is placed above Q by whichever requirement is strongest
            let mut re_floor = q.re + mrq + 0.05;
            if let Some(m) = constraints.r_minus_p_margin {
                re_floor = re_floor.max(p.re + m + 0.05);
            }
            if let Some(m) = constraints.r_minus_q_minus_p_margin {
                re_floor = re_floor.max(q.re + p.re + m + 0.05);
            }
            let r = Complex64::new(re_floor + rng.gen_range(0.0..1.0), draw_im(&mut rng));
            p_eigs.push(p);
            q_eigs.push(q);
            r_eigs.push(r);
        }

        let sim = random_similarity(&mut rng, dim)?;
        let sim_inv = sim.inverse()?;
        let conj = |eigs: &[Complex64]| -> CMatrix {
            let d = CMatrix::diagonal(eigs);
            &(&sim * &d) * &sim_inv
        };
        let p = match constraints.p {
            // keep P bitwise scalar so series termination is exact
            PSpec::NegIntScalar(k) => CMatrix::scalar(dim, Complex64::new(-(k as f64), 0.0)),
            _ => conj(&p_eigs),
        };
        let q = conj(&q_eigs);
        let r = conj(&r_eigs);

        let margins = compute_margins(&p, &q, &r)?;
        if !margins_ok(&margins, constraints, mq, mrq) {
            continue;
        }
        for (a, b) in [(&p, &q), (&p, &r), (&q, &r)] {
            if !a.commutes_with(b, COMMUTATOR_TOL) {
                return Err(Error::Generation(
                    "generated family exceeds the commutator tolerance".into(),
                ));
            }
        }
        return Ok(CommutingTriple {
            p,
            q,
            r,
            similarity: sim,
            seed,
            stability_margins: margins,
        });
    }
    Err(Error::Generation(format!(
        "could not satisfy stability constraints after bounded retries (seed {seed}, dim {dim})"
    )))
}

fn compute_margins(p: &CMatrix, q: &CMatrix, r: &CMatrix) -> Result<BTreeMap<String, f64>> {
    let mut m = BTreeMap::new();
    m.insert("Q".to_string(), spectral_floor(q)?);
    m.insert("R".to_string(), spectral_floor(r)?);
    m.insert("R-Q".to_string(), spectral_floor(&(r - q))?);
    m.insert("R-P".to_string(), spectral_floor(&(r - p))?);
    m.insert("R-Q-P".to_string(), spectral_floor(&(&(r - q) - p))?);
    Ok(m)
}

fn margins_ok(
    margins: &BTreeMap<String, f64>,
    constraints: &StabilityConstraints,
    mq: f64,
    mrq: f64,
) -> bool {
    let get = |k: &str| margins.get(k).copied().unwrap_or(f64::NEG_INFINITY);
    if get("Q") <= mq || get("R-Q") <= mrq {
        return false;
    }
    if let Some(m) = constraints.r_minus_p_margin {
        if get("R-P") <= m {
            return false;
        }
    }
    if let Some(m) = constraints.r_minus_q_minus_p_margin {
        if get("R-Q-P") <= m {
            return false;
        }
    }
    true
}

/// Similarity with condition number drawn in [2, 20] (always <= the cap):
/// product of two random unitaries around a log-spaced singular spectrum.
fn random_similarity(rng: &mut ChaCha8Rng, dim: usize) -> Result<CMatrix> {
    if dim == 1 {
        return Ok(CMatrix::identity(1));
    }
    let kappa: f64 = rng.gen_range(2.0..20.0_f64.min(MAX_SIMILARITY_COND));
    let u1 = random_unitary(rng, dim);
    let u2 = random_unitary(rng, dim);
    let mut d = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        let t = i as f64 / (dim - 1) as f64;
        d[(i, i)] = Complex64::new(kappa.powf(-t), 0.0);
    }
    CMatrix::from_dmatrix(u1 * d * u2)
}

fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<Complex64> {
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let qr = g.qr();
    qr.q()
}
