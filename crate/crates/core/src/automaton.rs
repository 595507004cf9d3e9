//! Deterministic automata encoding side constraints on the indicator
//! variables, layered into the diagram alongside the pseudoinverse states.

use crate::diagram::ConstraintKind;

/// A deterministic finite automaton over assignment bits.
///
/// `transition` returns `None` for the absorbing infeasible state; the
/// builder then simply creates no arc. Transitions may depend on the layer
/// and the horizon so that end-of-horizon conditions can be enforced.
pub trait ConstraintAutomaton {
    /// State at the root.
    fn initial(&self) -> u32;

    /// Next state after assigning `bit` to variable `var` (zero-based) out
    /// of `n`, or `None` when infeasible.
    fn transition(&self, state: u32, bit: bool, var: usize, n: usize) -> Option<u32>;

    /// Descriptor recorded in built diagrams and their serializations.
    fn descriptor(&self) -> ConstraintKind;
}

/// Contiguity constraint: nonzero values must come in runs of at least
/// `tau` consecutive periods.
///
/// The automaton state counts consecutive ones, saturating at `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contiguity {
    pub tau: u32,
}

impl Contiguity {
    pub fn new(tau: u32) -> Self {
        Self { tau }
    }
}

impl ConstraintAutomaton for Contiguity {
    fn initial(&self) -> u32 {
        0
    }

    fn transition(&self, state: u32, bit: bool, var: usize, n: usize) -> Option<u32> {
        contiguity_transition(state, bit, var + 1, n, self.tau)
    }

    fn descriptor(&self) -> ConstraintKind {
        ConstraintKind::Contiguity(self.tau)
    }
}

/// Run-count transition for the contiguity constraint.
///
/// `s` counts consecutive ones so far, saturating at `tau`; `ell` is the
/// one-based decision stage. Infeasible when a run would be cut short, or
/// when a fresh run can no longer be completed by the horizon; a zero after
/// a complete run resets the count.
pub fn contiguity_transition(s: u32, assign: bool, ell: usize, n: usize, tau: u32) -> Option<u32> {
    debug_assert!(s <= tau);
    if !assign && s >= 1 && s < tau {
        return None;
    }
    if ell == n && assign && s < tau.saturating_sub(1) {
        return None;
    }
    if !assign && s == tau {
        return Some(0);
    }
    Some(tau.min(s + assign as u32))
}
