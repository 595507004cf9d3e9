//! Brute-force reference solver for desk-scale verification.
//!
//! Enumerates every indicator vector passing a filter, evaluates each by an
//! independent banded solve, and keeps the lexicographically smallest
//! minimizer. No pruning beyond the filter; that is the point.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::solve::{evaluate_objective, Instance, ModeTag, Solution};

/// Feasibility filter applied during enumeration.
pub enum ConstraintFilter<'a> {
    None,
    /// Every maximal run of ones must have length at least `tau`.
    Contiguity(u32),
    Predicate(&'a dyn Fn(&[bool]) -> bool),
}

impl ConstraintFilter<'_> {
    pub fn accepts(&self, z: &[bool]) -> bool {
        match self {
            Self::None => true,
            Self::Contiguity(tau) => runs_at_least(z, *tau),
            Self::Predicate(p) => p(z),
        }
    }
}

/// Run-length rule: every maximal run of ones has length >= `tau`.
pub fn runs_at_least(z: &[bool], tau: u32) -> bool {
    let mut run = 0u32;
    for (i, &b) in z.iter().enumerate() {
        if b {
            run += 1;
        }
        if (!b || i + 1 == z.len()) && run > 0 {
            if run < tau {
                return false;
            }
            run = 0;
        }
    }
    true
}

pub const DEFAULT_ORACLE_CAP: usize = 20;

/// Enumerates all `z` passing the filter and returns the minimizer of
/// `h(z) = c'z - d_S' Q_S^{-1} d_S / 2 + constant`, breaking exact ties
/// toward the lexicographically smallest `z`.
pub fn brute_force(
    q: &BandedMatrix,
    inst: &Instance,
    filter: &ConstraintFilter<'_>,
    cap: usize,
) -> Result<Solution> {
    let n = q.n();
    if n > cap {
        return Err(Error::OracleCapExceeded { cap, n });
    }
    let mut best_h = f64::INFINITY;
    let mut best_z: Option<Vec<bool>> = None;
    let mut z = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        // Most significant bit is z_0, so mask order is lexicographic and
        // strict improvement keeps the lexicographically smallest tie.
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = (mask >> (n - 1 - i)) & 1 == 1;
        }
        if !filter.accepts(&z) {
            continue;
        }
        let h = evaluate_objective(q, inst, &z)?;
        if h < best_h {
            best_h = h;
            best_z = Some(z.clone());
        }
    }
    let z = best_z.ok_or(Error::Infeasible)?;

    let support: Vec<usize> = (0..n).filter(|&i| z[i]).collect();
    let mut x = vec![0.0; n];
    let mut x0 = 0.0;
    if !support.is_empty() {
        let t = crate::banded::banded_solve(q, &support, &inst.d)?;
        for i in 0..n {
            x[i] = -t[i];
            x0 -= inst.d[i] * x[i];
        }
    }
    Ok(Solution {
        z,
        x,
        x0,
        objective: best_h,
        mode: ModeTag::Exact,
        verify_discrepancy: None,
    })
}

/// Checks, over the whole cube, that the linear batch-start system is
/// equivalent to the run-length rule.
///
/// The system uses auxiliary batch-start indicators `zeta` of dimension
/// `n + 1 - tau`:
///
/// ```text
///     z_1 <= zeta_1
///     z_i - z_{i-1} <= zeta_i        for 2 <= i <= n + 1 - tau
///     z_i - z_{i-1} <= 0             for n + 2 - tau <= i <= n
///     zeta_i <= z_{i+j-1}            for 1 <= i <= n + 1 - tau, 1 <= j <= tau
/// ```
///
/// The lower bounds force `zeta` up and the window constraints force it
/// down, so the componentwise-minimal `zeta` is feasible iff any is; the
/// check verifies that witness against every inequality literally.
pub fn contiguity_equivalence_check(n: usize, tau: u32) -> bool {
    debug_assert!(n <= 16);
    let mut z = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = (mask >> (n - 1 - i)) & 1 == 1;
        }
        if zeta_system_feasible(&z, tau) != runs_at_least(&z, tau) {
            return false;
        }
    }
    true
}

fn zeta_system_feasible(z: &[bool], tau: u32) -> bool {
    let n = z.len();
    let tau = tau as usize;
    let zdim = (n + 1).saturating_sub(tau);
    // Minimal zeta satisfying the lower bounds.
    let mut zeta = vec![false; zdim];
    for i in 1..=zdim {
        let rise = if i == 1 { z[0] } else { z[i - 1] && !z[i - 2] };
        zeta[i - 1] = rise;
    }
    // z_1 <= zeta_1 (no zeta means z_1 must be zero).
    if zdim == 0 {
        if z.first().copied().unwrap_or(false) {
            return false;
        }
    } else if z[0] && !zeta[0] {
        return false;
    }
    // z_i - z_{i-1} <= zeta_i.
    for i in 2..=zdim {
        if z[i - 1] && !z[i - 2] && !zeta[i - 1] {
            return false;
        }
    }
    // z_i - z_{i-1} <= 0 for the tail.
    for i in (n + 2).saturating_sub(tau).max(2)..=n {
        if z[i - 1] && !z[i - 2] {
            return false;
        }
    }
    // zeta_i <= z_{i+j-1} for every window position.
    for i in 1..=zdim {
        if zeta[i - 1] {
            for j in 1..=tau {
                if !z[i + j - 2] {
                    return false;
                }
            }
        }
    }
    true
}
