//! The central agreement invariant: the Euler integral reproduces the
//! q-fold hypergeometric series for seeded specs over the working range.

use hypermat::euler::{euler_integral, EulerIntegralSpec};
use hypermat::hyper::{pfq, HyperParams, SeriesConfig};
use hypermat::matrix::{random_commuting_triple, StabilityConstraints};
use hypermat::verify::split_params;
use hypermat::{rel_diff, Complex64};

#[test]
fn quadrature_matches_series_for_seeded_specs() {
    let cons = StabilityConstraints {
        q_margin: Some(0.3),
        r_minus_q_margin: Some(0.3),
        imag_half_width: Some(0.0),
        ..Default::default()
    };
    let zs = [0.8, 0.5, -0.8, 0.1];
    let mut checked = 0;
    for seed in 0..12u64 {
        let dim = 1 + (seed as usize % 4);
        let t = random_commuting_triple(seed, dim, &cons).unwrap();
        let q_exp = 1 + (seed % 3) as u32;
        let z = Complex64::new(zs[seed as usize % zs.len()], 0.0);
        let mut num = vec![t.p.clone()];
        num.extend(split_params(&t.q, q_exp));
        let params = HyperParams::new(num, split_params(&t.r, q_exp)).unwrap();
        let series = pfq(&params, z, &SeriesConfig::default()).unwrap();
        assert!(series.converged);
        let spec = EulerIntegralSpec::new(&t.p, &t.q, &t.r, z, q_exp).unwrap();
        let quad = euler_integral(&spec, 1e-10).unwrap();
        let d = rel_diff(&series.value, &quad);
        assert!(d <= 1e-8, "seed {seed} q = {q_exp} z = {z}: {d}");
        checked += 1;
    }
    assert_eq!(checked, 12);
}
