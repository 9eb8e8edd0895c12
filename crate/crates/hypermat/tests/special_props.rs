//! Special-function route agreements at suite scale: beta by quadrature vs
//! the gamma product, the limit form of gamma, and the Pochhammer
//! duplication/multiplication identities.

use hypermat::matrix::{random_commuting_triple, PSpec, StabilityConstraints};
use hypermat::special::{
    beta_matrix, beta_matrix_integral, gamma_limit_form, gamma_matrix, pochhammer,
    pochhammer_multiplication,
};
use hypermat::{rel_diff, CMatrix, Complex64};

fn margin_tenth() -> StabilityConstraints {
    StabilityConstraints {
        q_margin: Some(0.1),
        r_minus_q_margin: Some(0.1),
        imag_half_width: Some(0.0),
        p: PSpec::Random { re: (0.15, 0.9) },
        ..Default::default()
    }
}

#[test]
fn beta_integral_route_matches_gamma_route() {
    for seed in 0..12 {
        let t = random_commuting_triple(seed, 1 + (seed as usize % 3), &margin_tenth()).unwrap();
        // q and r - q are a positive stable commuting pair with margin >= 0.1
        let p = t.q.clone();
        let q = &t.r - &t.q;
        let via_gamma = beta_matrix(&p, &q).unwrap();
        let via_quad = beta_matrix_integral(&p, &q, 1e-10).unwrap();
        let d = rel_diff(&via_gamma, &via_quad);
        assert!(d <= 1e-8, "seed {seed}: {d}");
    }
}

#[test]
fn gamma_limit_form_converges_on_margin_matrices() {
    for seed in [5u64, 23] {
        let t = random_commuting_triple(seed, 2, &margin_tenth()).unwrap();
        let target = gamma_matrix(&t.q).unwrap();
        let mut last = f64::INFINITY;
        for m in [10usize, 100, 1000, 2000] {
            let approx = gamma_limit_form(&t.q, m).unwrap();
            let res = rel_diff(&approx, &target);
            assert!(res < last, "seed {seed}, m = {m}: {res} did not decrease from {last}");
            last = res;
        }
        assert!(last <= 1e-2, "seed {seed}: residual at m = 2000 is {last}");
    }
}

#[test]
fn pochhammer_duplication_and_multiplication() {
    // (P)_{2m} = 2^{2m} (P/2)_m ((P+I)/2)_m and the general m-fold product,
    // checked for m*n <= 40
    for seed in 0..6 {
        let t = random_commuting_triple(seed, 1 + (seed as usize % 3), &margin_tenth()).unwrap();
        for &(m, n) in &[(2usize, 4usize), (2, 20), (3, 13), (4, 10), (5, 8)] {
            let lhs = pochhammer(&t.q, m * n);
            let rhs = pochhammer_multiplication(&t.q, m, n).unwrap();
            let d = rel_diff(&lhs, &rhs);
            assert!(d <= 1e-11, "seed {seed}, (m,n) = ({m},{n}): {d}");
        }
    }
}

#[test]
fn pochhammer_shift_split_at_scale() {
    // (R)_{k+m} = (R)_m (R + mI)_k
    let t = random_commuting_triple(40, 3, &margin_tenth()).unwrap();
    for &(k, m) in &[(12usize, 9usize), (25, 15), (1, 39)] {
        let lhs = pochhammer(&t.r, k + m);
        let rhs = &pochhammer(&t.r, m) * &pochhammer(&t.r.shift_re(m as f64), k);
        assert!(rel_diff(&lhs, &rhs) <= 1e-11, "(k,m) = ({k},{m})");
    }
}

#[test]
fn scalar_half_gamma_is_sqrt_pi() {
    let half = CMatrix::scalar(3, Complex64::new(0.5, 0.0));
    let g = gamma_matrix(&half).unwrap();
    let want = CMatrix::scalar(3, Complex64::new(std::f64::consts::PI.sqrt(), 0.0));
    assert!(rel_diff(&g, &want) <= 1e-12);
}
