//! Symmetric band storage, banded Cholesky factorization, and dense
//! pseudoinverse references.
//!
//! A [`BandedMatrix`] stores a symmetric matrix `Q` with `Q[i][j] = 0`
//! whenever `|i - j| > k`. Only the diagonal and the `k` superdiagonals are
//! kept, so entries outside the band cannot even be represented. Positive
//! definiteness is never certified up front; it surfaces later as a failed
//! Schur complement or Cholesky pivot, which also localizes the offending
//! leading submatrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Symmetric positive-definite banded matrix in band storage.
///
/// `bands[b][i]` holds `Q[i][i + b]` for `b = 0..=k`. All indices in this
/// crate are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    k: usize,
    bands: Vec<Vec<f64>>,
}

impl BandedMatrix {
    /// Builds a matrix from band rows: `bands[b][i] = Q[i][i + b]`.
    pub fn from_bands(n: usize, k: usize, bands: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::BandwidthTooLarge { n, k });
        }
        if bands.len() != k + 1 {
            return Err(Error::DimensionMismatch { expected: k + 1, got: bands.len() });
        }
        for (b, band) in bands.iter().enumerate() {
            if band.len() != n - b {
                return Err(Error::DimensionMismatch { expected: n - b, got: band.len() });
            }
        }
        for (i, &v) in bands[0].iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::NonPositiveDiagonal { index: i, value: v });
            }
        }
        Ok(Self { n, k, bands })
    }

    /// Band-row constructor for positive-semidefinite regularizers, which
    /// may carry zero diagonal entries (a zero-weight filter is the zero
    /// matrix). Objective matrices should use [`from_bands`](Self::from_bands).
    pub fn from_bands_psd(n: usize, k: usize, bands: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::BandwidthTooLarge { n, k });
        }
        if bands.len() != k + 1 {
            return Err(Error::DimensionMismatch { expected: k + 1, got: bands.len() });
        }
        for (b, band) in bands.iter().enumerate() {
            if band.len() != n - b {
                return Err(Error::DimensionMismatch { expected: n - b, got: band.len() });
            }
        }
        for (i, &v) in bands[0].iter().enumerate() {
            if !(v >= 0.0) {
                return Err(Error::NonPositiveDiagonal { index: i, value: v });
            }
        }
        Ok(Self { n, k, bands })
    }

    /// Builds a matrix from a dense symmetric array, checking that every
    /// entry outside the band is zero.
    pub fn from_dense(rows: &[Vec<f64>], k: usize) -> Result<Self> {
        let n = rows.len();
        if n == 0 || k >= n {
            return Err(Error::BandwidthTooLarge { n, k });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::AsymmetricEntry { row: i, col: j });
                }
                if j > i + k && rows[i][j] != 0.0 {
                    return Err(Error::OutsideBand { row: i, col: j, k });
                }
            }
        }
        let mut bands = Vec::with_capacity(k + 1);
        for b in 0..=k {
            bands.push((0..n - b).map(|i| rows[i][i + b]).collect());
        }
        Self::from_bands(n, k, bands)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry `Q[i][j]`; zero outside the band.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let b = hi - lo;
        if b > self.k {
            0.0
        } else {
            self.bands[b][lo]
        }
    }

    /// Largest diagonal entry, `Q_max`.
    pub fn diag_max(&self) -> f64 {
        self.bands[0].iter().fold(f64::NEG_INFINITY, |a, &b| if b > a { b } else { a })
    }

    /// `out = Q v`.
    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.bands[0][i] * v[i];
        }
        for b in 1..=self.k {
            for i in 0..self.n - b {
                let q = self.bands[b][i];
                out[i] += q * v[i + b];
                out[i + b] += q * v[i];
            }
        }
    }

    /// Quadratic form `x' Q x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for i in 0..self.n {
            acc += self.bands[0][i] * x[i] * x[i];
        }
        for b in 1..=self.k {
            for i in 0..self.n - b {
                acc += 2.0 * self.bands[b][i] * x[i] * x[i + b];
            }
        }
        acc
    }

    /// Returns `I + self` (used to assemble inference objectives).
    pub fn plus_identity(&self) -> Self {
        let mut bands = self.bands.clone();
        for v in bands[0].iter_mut() {
            *v += 1.0;
        }
        Self { n: self.n, k: self.k, bands }
    }

    /// Band rows, `bands[b][i] = Q[i][i + b]`.
    pub fn bands(&self) -> &[Vec<f64>] {
        &self.bands
    }

    /// Dense copy, for reference computations.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.k)..(i + self.k + 1).min(self.n) {
                rows[i][j] = self.get(i, j);
            }
        }
        rows
    }
}

/// Validated construction from `(row, col, value)` triplets.
///
/// Entries may be given for either triangle (or both, when they agree);
/// unspecified entries are zero. Fails on entries outside the band, on a
/// non-positive diagonal, and on conflicting symmetric pairs. Positive
/// definiteness is *not* checked here.
pub fn make_banded(n: usize, k: usize, entries: &[(usize, usize, f64)]) -> Result<BandedMatrix> {
    if n == 0 || k >= n {
        return Err(Error::BandwidthTooLarge { n, k });
    }
    let mut bands: Vec<Vec<f64>> = (0..=k).map(|b| vec![0.0; n - b]).collect();
    let mut set: Vec<Vec<bool>> = (0..=k).map(|b| vec![false; n - b]).collect();
    for &(i, j, v) in entries {
        if i >= n || j >= n {
            return Err(Error::DimensionMismatch { expected: n, got: i.max(j) + 1 });
        }
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let b = hi - lo;
        if b > k {
            return Err(Error::OutsideBand { row: i, col: j, k });
        }
        if set[b][lo] && bands[b][lo] != v {
            return Err(Error::AsymmetricEntry { row: i, col: j });
        }
        bands[b][lo] = v;
        set[b][lo] = true;
    }
    BandedMatrix::from_bands(n, k, bands)
}

/// Relevant indexes `pi[i] = max { j : Q[i][j] != 0 }` (zero-based).
///
/// Column `i` of a diagram state can no longer influence any transition once
/// the layer exceeds `pi[i]`. The positive diagonal guarantees `pi[i] >= i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceIndex(pub Vec<usize>);

/// Computes the relevant index of every column of `q`.
pub fn relevance_indexes(q: &BandedMatrix) -> RelevanceIndex {
    let n = q.n();
    let pi = (0..n)
        .map(|i| {
            let mut last = i;
            for j in i + 1..(i + q.k() + 1).min(n) {
                if q.get(i, j) != 0.0 {
                    last = j;
                }
            }
            last
        })
        .collect();
    RelevanceIndex(pi)
}

/// Banded Cholesky factorization `Q = L L'` with `L` in band storage.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    k: usize,
    // lower[b][j] = L[j + b][j]
    lower: Vec<Vec<f64>>,
}

impl BandedCholesky {
    /// Factorizes a banded SPD matrix; fails on a non-positive pivot.
    pub fn factor(q: &BandedMatrix) -> Result<Self> {
        Self::factor_compact(q.n(), q.k(), |i, j| q.get(i, j))
    }

    /// Factorizes the compacted principal submatrix `Q_S` of `q`.
    ///
    /// Because `support` is sorted, the compacted submatrix has bandwidth at
    /// most `k` again: compacted indices move at least as fast as original
    /// ones.
    pub fn factor_submatrix(q: &BandedMatrix, support: &[usize]) -> Result<Self> {
        Self::factor_compact(support.len(), q.k().min(support.len().saturating_sub(1)), |i, j| {
            q.get(support[i], support[j])
        })
    }

    fn factor_compact(n: usize, k: usize, at: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut lower: Vec<Vec<f64>> = (0..=k).map(|b| vec![0.0; n - b]).collect();
        for j in 0..n {
            let mut d = at(j, j);
            for p in j.saturating_sub(k)..j {
                let l = lower[j - p][p];
                d -= l * l;
            }
            if !(d > 0.0) {
                return Err(Error::SingularSubmatrix { pivot: j });
            }
            let dj = math::sqrt(d);
            lower[0][j] = dj;
            for i in j + 1..(j + k + 1).min(n) {
                let mut s = at(i, j);
                for p in i.saturating_sub(k)..j {
                    s -= lower[i - p][p] * lower[j - p][p];
                }
                lower[i - j][j] = s / dj;
            }
        }
        Ok(Self { n, k, lower })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves `Q x = rhs` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let mut s = x[i];
            for p in i.saturating_sub(self.k)..i {
                s -= self.lower[i - p][p] * x[p];
            }
            x[i] = s / self.lower[0][i];
        }
        for i in (0..self.n).rev() {
            let mut s = x[i];
            for j in i + 1..(i + self.k + 1).min(self.n) {
                s -= self.lower[j - i][i] * x[j];
            }
            x[i] = s / self.lower[0][i];
        }
    }

    /// Solves `Q x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

fn check_support(n: usize, support: &[usize]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidSupport("support is empty"));
    }
    for w in support.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidSupport("support must be strictly increasing"));
        }
    }
    if *support.last().unwrap() >= n {
        return Err(Error::InvalidSupport("support index out of range"));
    }
    Ok(())
}

/// Solves `Q_S x_S = rhs_S` by banded factorization of the compacted
/// submatrix and returns `x` zero-padded to length `n`.
///
/// `rhs` is a full-length vector; only the entries indexed by `support` are
/// read.
pub fn banded_solve(q: &BandedMatrix, support: &[usize], rhs: &[f64]) -> Result<Vec<f64>> {
    check_support(q.n(), support)?;
    if rhs.len() != q.n() {
        return Err(Error::DimensionMismatch { expected: q.n(), got: rhs.len() });
    }
    let chol = BandedCholesky::factor_submatrix(q, support)?;
    let mut xs: Vec<f64> = support.iter().map(|&i| rhs[i]).collect();
    chol.solve_in_place(&mut xs);
    let mut x = vec![0.0; q.n()];
    for (pos, &i) in support.iter().enumerate() {
        x[i] = xs[pos];
    }
    Ok(x)
}

/// Dense reference for `(Q o z z')^+`: inverts `Q_S` by dense Cholesky and
/// zero-pads. O(n^3); intended for tests and cross-checks.
pub fn pseudoinverse_oracle(q: &BandedMatrix, z: &[bool]) -> Result<Vec<Vec<f64>>> {
    if z.len() != q.n() {
        return Err(Error::DimensionMismatch { expected: q.n(), got: z.len() });
    }
    pseudoinverse_oracle_dense(&q.to_dense(), z)
}

/// Same as [`pseudoinverse_oracle`] for a dense symmetric matrix.
pub fn pseudoinverse_oracle_dense(rows: &[Vec<f64>], z: &[bool]) -> Result<Vec<Vec<f64>>> {
    let n = rows.len();
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: z.len() });
    }
    let support: Vec<usize> = (0..n).filter(|&i| z[i]).collect();
    let mut out = vec![vec![0.0; n]; n];
    let m = support.len();
    if m == 0 {
        return Ok(out);
    }
    let mut sub = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            sub[a * m + b] = rows[support[a]][support[b]];
        }
    }
    let chol = DenseCholesky::factor(&sub, m)?;
    for b in 0..m {
        let mut col = vec![0.0; m];
        col[b] = 1.0;
        chol.solve_in_place(&mut col);
        for a in 0..m {
            out[support[a]][support[b]] = col[a];
        }
    }
    Ok(out)
}

/// Dense Cholesky helper used by the pseudoinverse reference.
struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    fn factor(a: &[f64], n: usize) -> Result<Self> {
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for p in 0..j {
                d -= l[j * n + p] * l[j * n + p];
            }
            if !(d > 0.0) {
                return Err(Error::SingularSubmatrix { pivot: j });
            }
            let dj = math::sqrt(d);
            l[j * n + j] = dj;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for p in 0..j {
                    s -= l[i * n + p] * l[j * n + p];
                }
                l[i * n + j] = s / dj;
            }
        }
        Ok(Self { n, l })
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = x[i];
            for p in 0..i {
                s -= self.l[i * n + p] * x[p];
            }
            x[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.l[j * n + i] * x[j];
            }
            x[i] = s / self.l[i * n + i];
        }
    }
}
