//! Regularization filters, signal standardization, instance assembly, and
//! sliding-window streaming.
//!
//! Both filter families produce a positive-semidefinite matrix `R` with
//! bandwidth `k`; inference instances then use `Q = I + R`, costs
//! `c = mu * 1`, `d = -y`, and the constant `||y||^2 / 2`, so the reported
//! objective matches the denoising objective exactly.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::fptas::power_iteration;
use crate::math;
use crate::solve::Instance;

/// Filter family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    /// Sum of squared k-th order differences.
    KthDiff,
    /// Moving-average residuals over up to `k` preceding values.
    MovingAverage,
}

/// A regularizer specification: family, window/order `k`, and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub k: usize,
    pub lambda: f64,
}

impl FilterSpec {
    /// Builds the `n`-dimensional regularization matrix `R`.
    pub fn matrix(&self, n: usize) -> Result<BandedMatrix> {
        match self.kind {
            FilterKind::KthDiff => kth_diff_matrix(n, self.k, self.lambda),
            FilterKind::MovingAverage => moving_average_matrix(n, self.k, self.lambda),
        }
    }
}

fn accumulate_row(bands: &mut [Vec<f64>], row: &[(usize, f64)], lambda: f64) {
    for &(a, ca) in row {
        for &(b, cb) in row {
            if b >= a {
                bands[b - a][a] += lambda * ca * cb;
            }
        }
    }
}

/// `R = lambda * D'D` for the k-th order difference operator `D` (binomial
/// coefficients with alternating signs); bandwidth `k`. `k = 0` is ridge.
pub fn kth_diff_matrix(n: usize, k: usize, lambda: f64) -> Result<BandedMatrix> {
    if k >= n {
        return Err(Error::InvalidFilter("difference order must be below the dimension"));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidFilter("lambda must be non-negative"));
    }
    // Coefficients of the k-th difference: (-1)^(k-j) * C(k, j) for j = 0..=k.
    let mut coef = vec![0.0f64; k + 1];
    for (j, c) in coef.iter_mut().enumerate() {
        let mut binom = 1.0f64;
        for t in 0..j {
            binom = binom * (k - t) as f64 / (t + 1) as f64;
        }
        *c = if (k - j) % 2 == 0 { binom } else { -binom };
    }
    let mut bands: Vec<Vec<f64>> = (0..=k).map(|b| vec![0.0; n - b]).collect();
    let row: Vec<(usize, f64)> = coef.iter().copied().enumerate().collect();
    for i in 0..n - k {
        let shifted: Vec<(usize, f64)> = row.iter().map(|&(j, c)| (i + j, c)).collect();
        accumulate_row(&mut bands, &shifted, lambda);
    }
    BandedMatrix::from_bands_psd(n, k, bands)
}

/// `R = lambda * M'M` for the moving-average residual operator: row `i`
/// (one-based) encodes `x_i - mean(x_{i-w}..x_{i-1})` with
/// `w = min(k, i - 1)`; the `i = 1` window is empty, leaving the bare `x_1`
/// term. Bandwidth `k`.
pub fn moving_average_matrix(n: usize, k: usize, lambda: f64) -> Result<BandedMatrix> {
    if k == 0 {
        return Err(Error::InvalidFilter("moving-average window must be at least 1"));
    }
    if n < 2 {
        return Err(Error::InvalidFilter("moving average needs dimension at least 2"));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidFilter("lambda must be non-negative"));
    }
    let k = k.min(n - 1);
    let mut bands: Vec<Vec<f64>> = (0..=k).map(|b| vec![0.0; n - b]).collect();
    for i in 0..n {
        let w = k.min(i);
        let mut row = Vec::with_capacity(w + 1);
        row.push((i, 1.0));
        for j in 1..=w {
            row.push((i - j, -1.0 / w as f64));
        }
        accumulate_row(&mut bands, &row, lambda);
    }
    BandedMatrix::from_bands_psd(n, k, bands)
}

/// Largest eigenvalue of a PSD banded matrix by power iteration, relative
/// tolerance `1e-6`.
pub fn max_eigenvalue(r: &BandedMatrix) -> Result<f64> {
    power_iteration(r.n(), 1e-6, |v, w| r.matvec(v, w))
}

/// A signal, possibly standardized to zero mean and unit 2-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub values: Vec<f64>,
    pub standardized: bool,
}

impl Signal {
    /// Wraps raw values without standardizing.
    pub fn raw(values: Vec<f64>) -> Self {
        Self { values, standardized: false }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Centers to zero mean, then scales to unit 2-norm. Constant input fails.
pub fn standardize(y: &[f64]) -> Result<Signal> {
    let n = y.len();
    if n == 0 {
        return Err(Error::ConstantSignal);
    }
    let mean: f64 = y.iter().sum::<f64>() / n as f64;
    let mut values: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let norm = math::sqrt(values.iter().map(|v| v * v).sum());
    if norm == 0.0 {
        return Err(Error::ConstantSignal);
    }
    for v in values.iter_mut() {
        *v /= norm;
    }
    Ok(Signal { values, standardized: true })
}

/// Assembles the inference objective for a signal: `Q = I + R`,
/// `c = mu * 1`, `d = -y`, constant `||y||^2 / 2`.
pub fn build_instance(
    signal: &Signal,
    filter: &FilterSpec,
    mu: f64,
) -> Result<(BandedMatrix, Instance)> {
    let n = signal.len();
    let r = filter.matrix(n)?;
    let q = r.plus_identity();
    let d: Vec<f64> = signal.values.iter().map(|v| -v).collect();
    let norm2: f64 = signal.values.iter().map(|v| v * v).sum();
    let mut inst = Instance::new(vec![mu; n], d, 0.5 * norm2);
    inst.mu = Some(mu);
    Ok((q, inst))
}

/// Sliding windows over a signal, sharing one `Q` and one diagram.
///
/// By default windows are raw slices of the (already globally standardized)
/// series; `restandardize` recenters and rescales each window instead.
pub struct WindowStream<'a> {
    values: &'a [f64],
    width: usize,
    mu: f64,
    restandardize: bool,
    pos: usize,
}

impl WindowStream<'_> {
    /// Total number of windows (at least one by construction).
    pub fn window_count(&self) -> usize {
        self.values.len() - self.width + 1
    }
}

/// Streams one [`Instance`] per length-`width` window of `signal`.
pub fn window_instances<'a>(
    signal: &'a Signal,
    width: usize,
    mu: f64,
    restandardize: bool,
) -> Result<WindowStream<'a>> {
    if signal.len() < width || width == 0 {
        return Err(Error::SignalTooShort { len: signal.len(), width });
    }
    Ok(WindowStream { values: &signal.values, width, mu, restandardize, pos: 0 })
}

impl Iterator for WindowStream<'_> {
    type Item = Result<Instance>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos + self.width > self.values.len() {
            return None;
        }
        let window = &self.values[self.pos..self.pos + self.width];
        self.pos += 1;
        let make = |values: &[f64]| {
            let d: Vec<f64> = values.iter().map(|v| -v).collect();
            let norm2: f64 = values.iter().map(|v| v * v).sum();
            let mut inst = Instance::new(vec![self.mu; self.width], d, 0.5 * norm2);
            inst.mu = Some(self.mu);
            inst
        };
        Some(if self.restandardize {
            standardize(window).map(|s| make(&s.values))
        } else {
            Ok(make(window))
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = self.values.len() - self.width + 1 - self.pos;
        (rem, Some(rem))
    }
}
