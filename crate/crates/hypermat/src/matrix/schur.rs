//! Complex Schur form with eigenvalue clustering and reordering.
//!
//! `SchurForm` holds `A = U T U*` with `T` upper triangular, plus a
//! partition of the diagonal into contiguous clusters of nearby
//! eigenvalues. The form is computed once and can then evaluate many
//! scalar functions of the same matrix (block Parlett recurrence, see
//! [`holo`](super::holo)).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Relative eigenvalue clustering threshold (times the norm of `T`).
pub const CLUSTER_REL_TOL: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct Cluster {
    pub start: usize,
    pub len: usize,
    /// Arithmetic mean of the cluster's eigenvalues.
    pub mean: Complex64,
}

#[derive(Clone, Debug)]
pub struct SchurForm {
    u: DMatrix<Complex64>,
    t: DMatrix<Complex64>,
    clusters: Vec<Cluster>,
}

impl SchurForm {
    /// Computes the complex Schur form of `a` and reorders it so that
    /// clusters of nearby eigenvalues occupy contiguous diagonal blocks.
    pub fn compute(a: &CMatrix) -> Result<Self> {
        let n = a.dim();
        if n == 1 {
            let t = a.as_dmatrix().clone();
            let mean = t[(0, 0)];
            return Ok(SchurForm {
                u: DMatrix::identity(1, 1),
                t,
                clusters: vec![Cluster {
                    start: 0,
                    len: 1,
                    mean,
                }],
            });
        }
        let (u, t) = if is_upper_triangular(a.as_dmatrix()) {
            (DMatrix::identity(n, n), a.as_dmatrix().clone())
        } else {
            let schur = nalgebra::linalg::Schur::try_new(a.as_dmatrix().clone(), 1e-14, 100_000)
                .or_else(|| {
                    nalgebra::linalg::Schur::try_new(a.as_dmatrix().clone(), 1e-12, 100_000)
                })
                .ok_or_else(|| {
                    Error::NumericalFailure("Schur decomposition did not converge".into())
                })?;
            schur.unpack()
        };
        let mut form = SchurForm {
            u,
            t,
            clusters: Vec::new(),
        };
        form.cluster_and_reorder();
        Ok(form)
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.t[(i, i)]).collect()
    }

    pub fn unitary(&self) -> &DMatrix<Complex64> {
        &self.u
    }

    pub fn triangular(&self) -> &DMatrix<Complex64> {
        &self.t
    }

    pub fn unitary_matrix(&self) -> CMatrix {
        CMatrix::from_dmatrix(self.u.clone()).expect("unitary factor is finite")
    }

    pub fn triangular_matrix(&self) -> CMatrix {
        CMatrix::from_dmatrix(self.t.clone()).expect("triangular factor is finite")
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Groups nearby eigenvalues (transitive closure at `CLUSTER_REL_TOL`
    /// times `‖T‖`) and swaps adjacent diagonal entries until every cluster
    /// is contiguous, accumulating the unitary transforms into `U`.
    fn cluster_and_reorder(&mut self) {
        let n = self.dim();
        let tol = CLUSTER_REL_TOL * self.t.norm().max(f64::MIN_POSITIVE);

        // union-find over eigenvalue indices
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (self.t[(i, i)] - self.t[(j, j)]).norm() <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        // rank clusters by first occurrence along the diagonal
        let mut rank_of_root: Vec<Option<usize>> = vec![None; n];
        let mut next_rank = 0usize;
        let mut ranks: Vec<usize> = Vec::with_capacity(n);
        for i in 0..n {
            let r = find(&mut parent, i);
            let rank = *rank_of_root[r].get_or_insert_with(|| {
                let k = next_rank;
                next_rank += 1;
                k
            });
            ranks.push(rank);
        }

        // bubble pass: swap adjacent entries from different clusters until
        // the rank sequence is non-decreasing
        let mut changed = true;
        while changed {
            changed = false;
            for k in 0..n - 1 {
                if ranks[k] > ranks[k + 1] {
                    self.swap_adjacent(k);
                    ranks.swap(k, k + 1);
                    changed = true;
                }
            }
        }

        // emit contiguous clusters
        let mut clusters = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && ranks[end] == ranks[start] {
                end += 1;
            }
            let mean = (start..end)
                .map(|i| self.t[(i, i)])
                .sum::<Complex64>()
                / (end - start) as f64;
            clusters.push(Cluster {
                start,
                len: end - start,
                mean,
            });
            start = end;
        }
        self.clusters = clusters;
    }

    /// Unitary swap of diagonal entries k and k+1 of the triangular factor.
    fn swap_adjacent(&mut self, k: usize) {
        let a = self.t[(k, k)];
        let b = self.t[(k, k + 1)];
        let c = self.t[(k + 1, k + 1)];
        // eigenvector of [[a,b],[0,c]] for eigenvalue c is (b, c-a)
        let v0 = b;
        let v1 = c - a;
        let nrm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        let (g00, g10, g01, g11);
        if nrm == 0.0 {
            // a == c and b == 0: plain permutation
            let zero = Complex64::new(0.0, 0.0);
            let one = Complex64::new(1.0, 0.0);
            (g00, g10, g01, g11) = (zero, one, one, zero);
        } else {
            g00 = v0 / nrm;
            g10 = v1 / nrm;
            g01 = -v1.conj() / nrm;
            g11 = v0.conj() / nrm;
        }
        let n = self.dim();
        // t[:, k..k+2] *= G
        for i in 0..n {
            let x = self.t[(i, k)];
            let y = self.t[(i, k + 1)];
            self.t[(i, k)] = x * g00 + y * g10;
            self.t[(i, k + 1)] = x * g01 + y * g11;
        }
        // t[k..k+2, :] = G^* t[k..k+2, :]
        for j in 0..n {
            let x = self.t[(k, j)];
            let y = self.t[(k + 1, j)];
            self.t[(k, j)] = g00.conj() * x + g10.conj() * y;
            self.t[(k + 1, j)] = g01.conj() * x + g11.conj() * y;
        }
        // u[:, k..k+2] *= G
        for i in 0..n {
            let x = self.u[(i, k)];
            let y = self.u[(i, k + 1)];
            self.u[(i, k)] = x * g00 + y * g10;
            self.u[(i, k + 1)] = x * g01 + y * g11;
        }
        self.t[(k + 1, k)] = Complex64::new(0.0, 0.0);
    }
}

fn is_upper_triangular(m: &DMatrix<Complex64>) -> bool {
    for i in 1..m.nrows() {
        for j in 0..i {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rel_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        CMatrix::from_dmatrix(DMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }))
        .unwrap()
    }

    #[test]
    fn reconstruction_over_seeded_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let n = 1 + trial % 6;
            let a = random_matrix(&mut rng, n);
            let f = SchurForm::compute(&a).unwrap();
            let recon = f.unitary() * f.triangular() * f.unitary().adjoint();
            let recon = CMatrix::from_dmatrix(recon).unwrap();
            assert!(
                rel_diff(&recon, &a) <= 1e-10,
                "trial {trial}: {}",
                rel_diff(&recon, &a)
            );
            // unitarity in max norm
            let uu = f.unitary().adjoint() * f.unitary() - DMatrix::identity(n, n);
            let max = uu.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(max <= 1e-12, "trial {trial}: unitarity {max}");
        }
    }

    #[test]
    fn reorder_groups_repeated_eigenvalues() {
        // diagonal with interleaved repeated eigenvalues 1, 5, 1, 5
        let a = CMatrix::diagonal(&[c(1.0, 0.0), c(5.0, 0.0), c(1.0, 0.0), c(5.0, 0.0)]);
        let f = SchurForm::compute(&a).unwrap();
        assert_eq!(f.clusters().len(), 2);
        for cl in f.clusters() {
            assert_eq!(cl.len, 2);
            let vals: Vec<Complex64> =
                (cl.start..cl.start + cl.len).map(|i| f.triangular()[(i, i)]).collect();
            assert!((vals[0] - vals[1]).norm() < 1e-10);
        }
        let recon = f.unitary() * f.triangular() * f.unitary().adjoint();
        assert!(rel_diff(&CMatrix::from_dmatrix(recon).unwrap(), &a) < 1e-12);
    }

    #[test]
    fn jordan_block_is_single_cluster() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let f = SchurForm::compute(&a).unwrap();
        assert_eq!(f.clusters().len(), 1);
        assert_eq!(f.clusters()[0].len, 2);
    }
}
