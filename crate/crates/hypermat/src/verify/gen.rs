//! Case generation: per-identity stability constraints and scalar draws.
//!
//! Every case is generated from a seed derived from (suite seed, identity,
//! case index), so suite runs are reproducible byte for byte. Spectra are
//! kept real: the similarity transform already makes the matrices densely
//! complex, while real spectra keep the endpoint behavior of the Euler
//! integrals inside the fast-converging regime of the matched Gauss-Jacobi
//! weights. Unit-argument cases draw their key stability floors large
//! enough that the direct series tail clears the suite tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matrix::{random_commuting_triple, PSpec, StabilityConstraints};

use super::{IdentityCase, IdentityId, Scalars};

const Z_CYCLE: [f64; 4] = [0.25, 0.5, -0.5, 0.0];
const T7_Z_CYCLE: [f64; 3] = [0.25, 0.5, -0.5];
const W_CYCLE: [f64; 4] = [2.0, -2.0, 3.0, 10.0];

/// Stability constraints demanded by each identity's hypotheses (plus the
/// series-speed floors for unit-argument cases).
pub fn generation_constraints(id: IdentityId, idx: usize) -> StabilityConstraints {
    let real_spectrum = StabilityConstraints {
        q_margin: Some(0.3),
        r_minus_q_margin: Some(0.3),
        imag_half_width: Some(0.0),
        p: PSpec::Random { re: (0.15, 0.8) },
        ..Default::default()
    };
    match id {
        IdentityId::T1 | IdentityId::T4 => real_spectrum,
        IdentityId::CT1 => StabilityConstraints {
            p: PSpec::NegIntScalar(1 + (idx as u32) % 3),
            ..real_spectrum
        },
        IdentityId::T2 => StabilityConstraints {
            // keeps b(R-Q-2P) >= 2.2 so both unit-circle series converge fast
            r_minus_q_minus_p_margin: Some(2.55),
            r_minus_p_margin: Some(0.15),
            p: PSpec::Random { re: (0.1, 0.35) },
            ..real_spectrum
        },
        IdentityId::C1 => StabilityConstraints {
            p: PSpec::NegIntScalar(1 + (idx as u32) % 3),
            r_minus_p_margin: Some(0.15),
            r_minus_q_minus_p_margin: Some(0.15),
            ..real_spectrum
        },
        IdentityId::T3 | IdentityId::C2 => StabilityConstraints {
            p: PSpec::Random { re: (0.15, 0.9) },
            ..real_spectrum
        },
        IdentityId::T5 => StabilityConstraints {
            p: PSpec::NegIntScalar(1 + (idx as u32) % 2),
            r_minus_q_margin: Some(0.4),
            ..real_spectrum
        },
        IdentityId::T6 | IdentityId::C3 => {
            let w = if id == IdentityId::C3 {
                -2.0
            } else {
                W_CYCLE[idx % W_CYCLE.len()]
            };
            let unit_argument = (1.0 / (w + 1.0)).abs() >= 1.0 - 1e-12;
            StabilityConstraints {
                r_minus_q_minus_p_margin: if unit_argument { Some(2.2) } else { None },
                p: PSpec::Random { re: (0.15, 0.6) },
                ..real_spectrum
            }
        }
        IdentityId::T7Stmt | IdentityId::T7Proof => StabilityConstraints {
            // b(R-Q) > 1 makes the binomial expansion absolutely summable;
            // the extra headroom keeps its tail under the case tolerance
            r_minus_q_margin: Some(2.25),
            p: PSpec::Random { re: (0.1, 0.8) },
            ..real_spectrum
        },
    }
}

fn scalars_for(id: IdentityId, idx: usize, rng: &mut ChaCha8Rng) -> Scalars {
    match id {
        IdentityId::T1 => Scalars {
            z: Some(draw_z(idx, rng)),
            ..Default::default()
        },
        IdentityId::CT1 => Scalars {
            z: Some(draw_z(idx, rng)),
            k: Some(1 + (idx as u32) % 3),
            ..Default::default()
        },
        IdentityId::T2 => Scalars {
            z: Some(1.0),
            ..Default::default()
        },
        IdentityId::C1 => Scalars {
            z: Some(1.0),
            n: Some(1 + (idx as u32) % 3),
            ..Default::default()
        },
        IdentityId::T3 | IdentityId::C2 => Scalars {
            z: Some(0.5),
            w: Some(1.0),
            ..Default::default()
        },
        IdentityId::T4 => Scalars {
            z: Some(draw_z(idx, rng)),
            q_exp: Some(1 + (idx as u32) % 3),
            ..Default::default()
        },
        IdentityId::T5 => Scalars {
            z: Some(1.0),
            k: Some(1 + (idx as u32) % 2),
            ..Default::default()
        },
        IdentityId::T6 => {
            let w = W_CYCLE[idx % W_CYCLE.len()];
            Scalars {
                w: Some(w),
                z: Some(1.0 / (w + 1.0)),
                ..Default::default()
            }
        }
        IdentityId::C3 => Scalars {
            w: Some(-2.0),
            z: Some(-1.0),
            ..Default::default()
        },
        IdentityId::T7Proof => Scalars {
            z: Some(T7_Z_CYCLE[idx % T7_Z_CYCLE.len()]),
            q_exp: Some(2 + (idx as u32) % 2),
            ..Default::default()
        },
        // statement reading coincides with the proof reading at q = 2; the
        // q = 3 measurement rows are produced separately
        IdentityId::T7Stmt => Scalars {
            z: Some(T7_Z_CYCLE[idx % T7_Z_CYCLE.len()]),
            q_exp: Some(2),
            ..Default::default()
        },
    }
}

fn draw_z(idx: usize, rng: &mut ChaCha8Rng) -> f64 {
    if idx % 5 == 4 {
        0.9 * (2.0 * rng.gen::<f64>() - 1.0)
    } else {
        Z_CYCLE[idx % Z_CYCLE.len()]
    }
}

/// Case seed derived from the suite seed, the identity, and the index.
pub fn case_seed(suite_seed: u64, id: IdentityId, idx: usize) -> u64 {
    let id_idx = IdentityId::ALL.iter().position(|x| *x == id).unwrap_or(0) as u64;
    let mut x = suite_seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(id_idx * 1009 + idx as u64 + 1));
    // splitmix64 finalizer
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// Generates the idx-th case of an identity at the given dimension.
pub fn gen_case(
    id: IdentityId,
    suite_seed: u64,
    idx: usize,
    dim: usize,
    tol: f64,
) -> Result<IdentityCase> {
    let seed = case_seed(suite_seed, id, idx);
    let constraints = generation_constraints(id, idx);
    let triple = random_commuting_triple(seed, dim, &constraints)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5DEE_CE66_D641_2A61);
    let scalars = scalars_for(id, idx, &mut rng);
    Ok(IdentityCase {
        identity: id,
        seed,
        triple,
        scalars,
        tol,
    })
}
