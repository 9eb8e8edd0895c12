//! Assumptions made of the linear-algebra backend, pinned as tests:
//! the complex Schur form must be genuinely upper triangular, unitary
//! to roundoff, reconstructive, and able to handle defective matrices.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C64 = Complex<f64>;

fn rel_err(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

#[test]
fn complex_schur_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12345);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let n = 1 + (trial % 6);
        let a = DMatrix::<C64>::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 10000)
            .unwrap_or_else(|| panic!("no convergence on trial {trial}"));
        let (q, t) = schur.unpack();
        // complex Schur form must be genuinely upper triangular
        let mut low: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                low = low.max(t[(i, j)].norm());
            }
        }
        let recon = &q * &t * q.adjoint();
        let unit = (q.adjoint() * &q - DMatrix::<C64>::identity(n, n)).norm();
        worst = worst.max(rel_err(&recon, &a)).max(low).max(unit);
    }
    println!("worst deviation: {worst:.3e}");
    assert!(worst < 1e-10, "worst = {worst:.3e}");
}

#[test]
fn complex_schur_jordan_block() {
    // defective matrix: repeated eigenvalue 1, one Jordan block
    let a = DMatrix::<C64>::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ],
    );
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 10000).expect("converges");
    let (q, t) = schur.unpack();
    let recon = &q * &t * q.adjoint();
    assert!(rel_err(&recon, &a) < 1e-12);
    assert!(t[(1, 0)].norm() < 1e-12);
}

#[test]
fn complex_hermitian_eigen() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let n = 4;
        let a = DMatrix::<C64>::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = (&a + a.adjoint()).scale(0.5);
        let se = nalgebra::linalg::SymmetricEigen::new(h.clone());
        // eigenvalues real, reconstruction via eigvecs
        let d = DMatrix::<C64>::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(se.eigenvalues[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let recon = &se.eigenvectors * d * se.eigenvectors.adjoint();
        assert!(rel_err(&recon, &h) < 1e-12);
    }
}
