//! Shared helpers for the integration tests: seeded generators and
//! independent dense linear-algebra oracles.

#![allow(dead_code)]

use miqodd_core::{standardize, BandedMatrix, FilterKind, FilterSpec, Instance};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric positive-definite banded matrix via strict diagonal
/// dominance.
pub fn random_pd_banded(rng: &mut ChaCha8Rng, n: usize, k: usize) -> BandedMatrix {
    let off = Uniform::new(-1.0f64, 1.0);
    let bump = Uniform::new(0.1f64, 1.1);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..(i + k + 1).min(n) {
            let v = off.sample(rng);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    for i in 0..n {
        let s: f64 = (0..n).filter(|&j| j != i).map(|j| rows[i][j].abs()).sum();
        rows[i][i] = s + bump.sample(rng);
    }
    BandedMatrix::from_dense(&rows, k).unwrap()
}

/// Standard-normal signal, standardized.
pub fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    standardize(&raw).unwrap().values
}

/// Random inference instance from a filter: returns `(Q, instance)`.
pub fn random_filter_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    kind: FilterKind,
    k: usize,
    lambda: f64,
    mu: f64,
) -> (BandedMatrix, Instance) {
    let y = random_signal(rng, n);
    let signal = miqodd_core::Signal { values: y, standardized: true };
    miqodd_core::build_instance(&signal, &FilterSpec { kind, k, lambda }, mu).unwrap()
}

/// Random cost pair `(c, d)` with no structure, for data-independence runs.
pub fn random_costs(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.2)).collect();
    let d: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    Instance::new(c, d, 0.0)
}

/// Cyclic Jacobi eigenvalue iteration; independent of the crate's power
/// iteration. Returns eigenvalues in ascending order.
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _ in 0..200 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let (aip, aiq) = (m[i][p], m[i][q]);
                    m[i][p] = c * aip - s * aiq;
                    m[i][q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let (apj, aqj) = (m[p][j], m[q][j]);
                    m[p][j] = c * apj - s * aqj;
                    m[q][j] = s * apj + c * aqj;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Dense inverse by Gauss-Jordan with partial pivoting; independent of the
/// crate's Cholesky-based routes.
pub fn dense_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().partial_cmp(&aug[j][col].abs()).unwrap())
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        assert!(p.abs() > 1e-14, "singular matrix in test oracle");
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = aug[row][col];
                if f != 0.0 {
                    for j in 0..2 * n {
                        aug[row][j] -= f * aug[col][j];
                    }
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Bit patterns of length `n` in lexicographic order.
pub fn all_bits(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..(1 << n)).map(move |mask| (0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect())
}
