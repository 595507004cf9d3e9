//! Diagram states and their rank-one transition calculus.
//!
//! A state at layer `l` (after `l` assignments) stores the *relevant columns*
//! of the pseudoinverse `(Q o zz')^+` of the partial assignment `z` reaching
//! it: exactly the columns `j` with `j < l <= pi[j]`, each as a dense vector
//! of the first `l` rows. Entries in later rows are zero by construction and
//! are never stored. Assigning `z_l = 1` updates the state by the rank-one
//! matrix `u u'`, where the transition vector `u` is computed from the stored
//! columns alone; assigning `z_l = 0` leaves the retained columns unchanged.
//! Columns whose relevant index has passed are dropped either way.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::{BandedMatrix, RelevanceIndex};
use crate::error::{Error, Result};
use crate::math;

/// Relative tolerance on the Schur complement; below it the leading
/// submatrix is declared not positive definite. The complement is bounded
/// below by the smallest eigenvalue of `Q`, so a tiny value signals bad
/// input rather than round-off.
const DELTA_RTOL: f64 = 1e-12;

/// One stored pseudoinverse column.
#[derive(Debug, Clone, PartialEq)]
pub struct StateColumn {
    /// Column index `j` in the original matrix.
    pub index: usize,
    /// Rows `0..layer` of column `j` of `(Q o zz')^+`.
    pub values: Vec<f64>,
}

/// A diagram state: the relevant pseudoinverse columns of a partial
/// assignment, plus an opaque side-constraint automaton state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramState {
    layer: usize,
    cols: Vec<StateColumn>,
    constraint_state: Option<u32>,
}

impl DiagramState {
    /// The root state: no assignments, no columns.
    pub fn root(constraint_state: Option<u32>) -> Self {
        Self { layer: 0, cols: Vec::new(), constraint_state }
    }

    /// Number of assignments made so far (0 at the root, `n` at terminals).
    #[inline]
    pub fn layer(&self) -> usize {
        self.layer
    }

    /// Stored columns, ordered by strictly increasing index.
    #[inline]
    pub fn columns(&self) -> &[StateColumn] {
        &self.cols
    }

    #[inline]
    pub fn constraint_state(&self) -> Option<u32> {
        self.constraint_state
    }

    pub fn set_constraint_state(&mut self, cs: Option<u32>) {
        self.constraint_state = cs;
    }

    fn col_values(&self, index: usize) -> Option<&[f64]> {
        self.cols
            .binary_search_by_key(&index, |c| c.index)
            .ok()
            .map(|pos| self.cols[pos].values.as_slice())
    }

    /// Builds the state reached from the root by the given assignment bits.
    pub fn from_path(q: &BandedMatrix, pi: &RelevanceIndex, bits: &[bool]) -> Result<Self> {
        let mut st = Self::root(None);
        for &b in bits {
            st = state_extend(&st, q, pi, b)?;
        }
        Ok(st)
    }
}

/// Transition vector `u` for assigning one at the state's layer; all-zero
/// exactly on zero-assignment arcs.
///
/// Stored sparse. The entry at index `layer` equals the reciprocal square
/// root of the Schur complement and is strictly positive whenever the vector
/// is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionVector {
    layer: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl TransitionVector {
    /// The all-zero vector attached to a zero-assignment arc at `layer`.
    pub fn zero(layer: usize) -> Self {
        Self { layer, support: Vec::new(), values: Vec::new() }
    }

    /// Rebuilds a vector from sparse parts (deserialization); `support`
    /// must be sorted and within `0..=layer`.
    pub fn from_sparse(layer: usize, support: Vec<usize>, values: Vec<f64>) -> Self {
        debug_assert_eq!(support.len(), values.len());
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.last().is_none_or(|&i| i <= layer));
        Self { layer, support, values }
    }

    pub(crate) fn from_dense(layer: usize, dense: &[f64]) -> Self {
        let mut support = Vec::new();
        let mut values = Vec::new();
        for (i, &v) in dense.iter().enumerate() {
            if v != 0.0 {
                support.push(i);
                values.push(v);
            }
        }
        Self { layer, support, values }
    }

    /// Variable index this vector assigns; the support is a subset of
    /// `0..=layer`.
    #[inline]
    pub fn layer(&self) -> usize {
        self.layer
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Sparse dot product `u' d`.
    pub fn dot(&self, d: &[f64]) -> f64 {
        self.support.iter().zip(&self.values).map(|(&i, v)| v * d[i]).sum()
    }

    /// Dense copy of length `len >= layer + 1`.
    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }
}

/// Computes the transition vector `u = (-W q_l + e_l) / sqrt(delta)` with
/// `delta = Q[l][l] - q_l' W q_l`, where `W` is the state's pseudoinverse and
/// `q_l` is column `l` of `Q`.
///
/// Only the stored relevant columns are consulted; the band structure
/// guarantees they suffice. Fails when `delta` falls below the positivity
/// tolerance, which certifies a non-positive-definite leading submatrix.
pub fn transition_vector(state: &DiagramState, q: &BandedMatrix) -> Result<TransitionVector> {
    let ell = state.layer;
    debug_assert!(ell < q.n());
    let qll = q.get(ell, ell);

    // Band entries Q[i][l] with i < l; every such i has a stored column.
    let lo = ell.saturating_sub(q.k());
    let mut delta = qll;
    for j in lo..ell {
        let qjl = q.get(j, ell);
        if qjl == 0.0 {
            continue;
        }
        let col = state
            .col_values(j)
            .expect("band column must be relevant at its own layer");
        for i in lo..ell {
            let qil = q.get(i, ell);
            if qil != 0.0 {
                delta -= col[i] * qil * qjl;
            }
        }
    }
    if !(delta >= DELTA_RTOL * qll) {
        return Err(Error::NotPositiveDefinite { layer: ell, delta });
    }

    let scale = 1.0 / math::sqrt(delta);
    let mut dense = vec![0.0; ell + 1];
    for j in lo..ell {
        let qjl = q.get(j, ell);
        if qjl == 0.0 {
            continue;
        }
        let col = state.col_values(j).unwrap();
        for (r, &w) in col.iter().enumerate() {
            dense[r] -= w * qjl;
        }
    }
    dense[ell] += 1.0;
    for v in dense.iter_mut() {
        *v *= scale;
    }
    Ok(TransitionVector::from_dense(ell, &dense))
}

/// Advances a state by one assignment: drops columns whose relevant index
/// has passed, applies the rank-one update `u u'` on a one-assignment, and
/// installs the new column for the assigned variable. The constraint state
/// is copied untouched; the diagram builder owns its evolution.
pub fn state_extend(
    state: &DiagramState,
    q: &BandedMatrix,
    pi: &RelevanceIndex,
    assign: bool,
) -> Result<DiagramState> {
    let u = if assign { Some(transition_vector(state, q)?) } else { None };
    Ok(extend_with(state, pi, u.as_ref()))
}

/// [`state_extend`] variant that also returns the transition vector, so
/// builders do not recompute it for the arc.
pub fn state_extend_with_vector(
    state: &DiagramState,
    q: &BandedMatrix,
    pi: &RelevanceIndex,
    assign: bool,
) -> Result<(DiagramState, Option<TransitionVector>)> {
    let u = if assign { Some(transition_vector(state, q)?) } else { None };
    let next = extend_with(state, pi, u.as_ref());
    Ok((next, u))
}

fn extend_with(
    state: &DiagramState,
    pi: &RelevanceIndex,
    u: Option<&TransitionVector>,
) -> DiagramState {
    let ell = state.layer;
    let udense = u.map(|u| u.to_dense(ell + 1));
    let mut cols = Vec::with_capacity(state.cols.len() + 1);
    for col in &state.cols {
        if pi.0[col.index] <= ell {
            continue; // expired
        }
        let mut values = Vec::with_capacity(ell + 1);
        match &udense {
            Some(u) => {
                let uj = u[col.index];
                values.extend(col.values.iter().zip(u.iter()).map(|(&w, &ur)| w + ur * uj));
                values.push(u[ell] * uj);
            }
            None => {
                values.extend_from_slice(&col.values);
                values.push(0.0);
            }
        }
        cols.push(StateColumn { index: col.index, values });
    }
    if pi.0[ell] > ell {
        let values = match &udense {
            Some(u) => {
                let ul = u[ell];
                u.iter().map(|&ur| ur * ul).collect()
            }
            None => vec![0.0; ell + 1],
        };
        cols.push(StateColumn { index: ell, values });
    }
    DiagramState { layer: ell + 1, cols, constraint_state: state.constraint_state }
}

/// Distance between two same-layer states: the maximum over relevant columns
/// of the infinity norm of the column difference, and positive infinity when
/// the constraint states differ (such states are never merged).
pub fn state_distance(a: &DiagramState, b: &DiagramState) -> Result<f64> {
    if a.layer != b.layer {
        return Err(Error::LayerMismatch { left: a.layer, right: b.layer });
    }
    if a.constraint_state != b.constraint_state {
        return Ok(f64::INFINITY);
    }
    debug_assert_eq!(a.cols.len(), b.cols.len());
    let mut dist = 0.0f64;
    for (ca, cb) in a.cols.iter().zip(&b.cols) {
        debug_assert_eq!(ca.index, cb.index);
        for (&x, &y) in ca.values.iter().zip(&cb.values) {
            let d = math::abs(x - y);
            if d > dist {
                dist = d;
            }
        }
    }
    Ok(dist)
}
