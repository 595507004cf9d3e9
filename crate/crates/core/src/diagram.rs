//! Layered decision diagrams over banded quadratics: exact, epsilon-exact,
//! and suffix-truncated construction, plus path enumeration.
//!
//! A diagram for an `n`-variable problem has `n + 1` layers of nodes; arcs
//! connect consecutive layers and carry the assignment bit `nu` and the
//! transition vector `u` of their tail state. The diagram is built once from
//! `Q` alone — no cost data — and solved repeatedly by shortest path.
//!
//! Construction is deterministic: children are generated layer by layer,
//! parents in admission order, zero-arc before one-arc, and each child is
//! merged into the *first admitted* representative within `epsilon` of it
//! (with equal constraint state). Two builds from identical inputs produce
//! bit-identical diagrams.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::ConstraintAutomaton;
use crate::banded::{relevance_indexes, BandedMatrix};
use crate::error::{Error, Result};
use crate::state::{
    state_extend_with_vector, transition_vector, DiagramState, TransitionVector,
};

pub type NodeId = u32;

/// How states are identified during construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuildMode {
    /// Merge only bit-identical states (epsilon = 0).
    Exact,
    /// Merge states within `epsilon` in the state metric.
    EpsExact(f64),
    /// Key nodes by the most recent `m` assignments; the all-zero-prefix
    /// state represents each key. Unconstrained problems only.
    Truncated(usize),
}

impl BuildMode {
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            Self::Exact => Some(0.0),
            Self::EpsExact(e) => Some(*e),
            Self::Truncated(_) => None,
        }
    }
}

/// Side-constraint descriptor recorded in a built diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Unconstrained,
    Contiguity(u32),
    Custom(u32),
}

/// Construction limits.
#[derive(Debug, Clone, Copy)]
pub struct BuildConfig {
    pub mode: BuildMode,
    /// Hard cap on the number of arcs; exceeding it aborts with layer
    /// statistics rather than silently truncating.
    pub arc_budget: usize,
}

impl BuildConfig {
    pub const DEFAULT_ARC_BUDGET: usize = 50_000_000;

    pub fn new(mode: BuildMode) -> Self {
        Self { mode, arc_budget: Self::DEFAULT_ARC_BUDGET }
    }

    pub fn with_arc_budget(mut self, budget: usize) -> Self {
        self.arc_budget = budget;
        self
    }
}

/// One arc of the diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramArc {
    pub tail: NodeId,
    pub head: NodeId,
    /// Variable index assigned by this arc (the layer it emanates from).
    pub var: usize,
    pub nu: bool,
    /// Transition vector of the tail state; all-zero exactly when `nu` is
    /// false.
    pub u: TransitionVector,
}

/// Per-layer node and arc counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerStats {
    pub nodes: usize,
    pub arcs: usize,
}

/// An immutable layered decision diagram.
///
/// Node ids are global and layer-major; layer `l` occupies
/// `layer_offsets[l]..layer_offsets[l + 1]`. States are transient to
/// construction and not retained.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagram {
    n: usize,
    k: usize,
    mode: BuildMode,
    constraint: ConstraintKind,
    layer_offsets: Vec<u32>,
    node_constraint: Vec<Option<u32>>,
    arcs: Vec<DiagramArc>,
    first_arc: Vec<u32>,
}

impl Diagram {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn mode(&self) -> BuildMode {
        self.mode
    }

    #[inline]
    pub fn constraint(&self) -> ConstraintKind {
        self.constraint
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.node_constraint.len()
    }

    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    #[inline]
    pub fn arcs(&self) -> &[DiagramArc] {
        &self.arcs
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        0
    }

    /// Node id range of layer `l` (layers run from 0 to `n`).
    pub fn layer_nodes(&self, l: usize) -> core::ops::Range<u32> {
        self.layer_offsets[l]..self.layer_offsets[l + 1]
    }

    pub fn node_constraint_state(&self, id: NodeId) -> Option<u32> {
        self.node_constraint[id as usize]
    }

    /// Outgoing arcs of a node, in construction order (zero-arc first).
    pub fn out_arcs(&self, id: NodeId) -> &[DiagramArc] {
        let lo = self.first_arc[id as usize] as usize;
        let hi = self.first_arc[id as usize + 1] as usize;
        &self.arcs[lo..hi]
    }

    /// Node and arc counts per layer.
    pub fn layer_stats(&self) -> Vec<LayerStats> {
        let mut stats: Vec<LayerStats> = (0..=self.n)
            .map(|l| LayerStats { nodes: self.layer_nodes(l).len(), arcs: 0 })
            .collect();
        for a in &self.arcs {
            stats[a.var].arcs += 1;
        }
        stats
    }

    /// Number of root-to-terminal paths (saturating).
    pub fn count_paths(&self) -> u128 {
        let mut count = vec![0u128; self.num_nodes()];
        count[0] = 1;
        for a in &self.arcs {
            count[a.head as usize] =
                count[a.head as usize].saturating_add(count[a.tail as usize]);
        }
        self.layer_nodes(self.n).map(|t| count[t as usize]).fold(0u128, u128::saturating_add)
    }

    /// Follows the assignment bits from the root; `None` if an arc is
    /// missing (constraint-pruned prefix). Returns one node per layer.
    pub fn trace_path(&self, bits: &[bool]) -> Option<Vec<NodeId>> {
        let mut node = self.root();
        let mut nodes = vec![node];
        for &b in bits {
            let arc = self.out_arcs(node).iter().find(|a| a.nu == b)?;
            node = arc.head;
            nodes.push(node);
        }
        Some(nodes)
    }

    /// Reassembles a diagram from serialized parts, revalidating the layer
    /// structure: one root, arcs between consecutive layers grouped by tail
    /// in layer order, and zero vectors exactly on zero-assignment arcs.
    pub fn from_parts(
        n: usize,
        k: usize,
        mode: BuildMode,
        constraint: ConstraintKind,
        layer_constraints: Vec<Vec<Option<u32>>>,
        arcs: Vec<DiagramArc>,
    ) -> Result<Self> {
        if layer_constraints.len() != n + 1 || layer_constraints[0].len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: layer_constraints.len(),
            });
        }
        let mut layer_offsets = Vec::with_capacity(n + 2);
        let mut node_constraint = Vec::new();
        let mut acc = 0u32;
        for layer in &layer_constraints {
            layer_offsets.push(acc);
            acc += layer.len() as u32;
            node_constraint.extend_from_slice(layer);
        }
        layer_offsets.push(acc);
        let mut prev_tail = 0u32;
        for arc in &arcs {
            if arc.var >= n
                || arc.tail < prev_tail
                || !(layer_offsets[arc.var]..layer_offsets[arc.var + 1]).contains(&arc.tail)
                || !(layer_offsets[arc.var + 1]..layer_offsets[arc.var + 2]).contains(&arc.head)
                || arc.nu == arc.u.is_zero()
            {
                return Err(Error::InvalidSupport("malformed arc table"));
            }
            prev_tail = arc.tail;
        }
        let first_arc = index_arcs(node_constraint.len(), &arcs);
        Ok(Self { n, k, mode, constraint, layer_offsets, node_constraint, arcs, first_arc })
    }

    /// Like [`trace_path`](Self::trace_path) but returns arc indices.
    pub fn trace_arcs(&self, bits: &[bool]) -> Option<Vec<u32>> {
        let mut node = self.root();
        let mut arcs = Vec::with_capacity(bits.len());
        for &b in bits {
            let base = self.first_arc[node as usize];
            let local = self.out_arcs(node).iter().position(|a| a.nu == b)?;
            arcs.push(base + local as u32);
            node = self.arcs[base as usize + local].head;
        }
        Some(arcs)
    }
}

/// Builds a diagram for `q` under the given mode and optional side
/// constraints.
///
/// In exact and epsilon-exact modes the state space is compressed by
/// relevance and first-fit merging; in truncated mode nodes are keyed by the
/// most recent `m` assignments, the basis of the approximation scheme.
pub fn build_diagram(
    q: &BandedMatrix,
    config: &BuildConfig,
    automaton: Option<&dyn ConstraintAutomaton>,
) -> Result<Diagram> {
    match config.mode {
        BuildMode::Exact => build_merged(q, 0.0, BuildMode::Exact, config.arc_budget, automaton),
        BuildMode::EpsExact(eps) => {
            if !(eps >= 0.0) || !eps.is_finite() {
                return Err(Error::InvalidFilter("epsilon must be a finite non-negative number"));
            }
            build_merged(q, eps, BuildMode::EpsExact(eps), config.arc_budget, automaton)
        }
        BuildMode::Truncated(m) => {
            if automaton.is_some() {
                return Err(Error::AutomatonInTruncatedMode);
            }
            if m == 0 {
                return Err(Error::InvalidTruncationDepth);
            }
            build_truncated(q, m, config.arc_budget)
        }
    }
}

/// Enumerates the assignment vectors of all root-to-terminal paths.
///
/// Fails when the path count exceeds `cap` (default `2^20` via
/// [`enumerate_paths`]).
pub fn enumerate_paths_capped(d: &Diagram, cap: u128) -> Result<Vec<Vec<bool>>> {
    let count = d.count_paths();
    if count > cap {
        return Err(Error::PathCapExceeded { cap, count });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut bits: Vec<bool> = Vec::with_capacity(d.n());
    // Depth-first over out-arcs; arc order makes the output deterministic.
    let mut stack: Vec<(NodeId, usize)> = vec![(d.root(), 0)];
    while let Some((node, next)) = stack.pop() {
        let arcs = d.out_arcs(node);
        if arcs.is_empty() && node >= d.layer_nodes(d.n).start {
            out.push(bits.clone());
            if stack.is_empty() {
                break;
            }
        }
        if next < arcs.len() {
            stack.push((node, next + 1));
            bits.push(arcs[next].nu);
            stack.push((arcs[next].head, 0));
        } else {
            bits.pop();
        }
    }
    Ok(out)
}

/// [`enumerate_paths_capped`] with the default cap of `2^20` paths.
pub fn enumerate_paths(d: &Diagram) -> Result<Vec<Vec<bool>>> {
    enumerate_paths_capped(d, 1 << 20)
}

// ---------------------------------------------------------------------------
// exact / epsilon-exact construction
// ---------------------------------------------------------------------------

/// Monotone map from f64 to u64 preserving order; -0.0 is folded into +0.0.
fn ordered_bits(x: f64) -> u64 {
    let b = (x + 0.0).to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | 0x8000_0000_0000_0000
    }
}

fn constraint_key(cs: Option<u32>) -> u64 {
    match cs {
        Some(c) => c as u64,
        None => u64::MAX,
    }
}

/// The scalar a state is indexed by for merge lookups: the sum of every
/// stored entry. Two states within `eps` in the state metric have sums
/// within `w * eps`, `w` the (layer-wide) entry count, so a range query over
/// that window is a sound candidate filter. Candidates are then verified
/// with the full state distance; the index only prunes, never decides.
fn merge_key(state: &DiagramState) -> f64 {
    let mut sum = 0.0;
    for col in state.columns() {
        for &v in &col.values {
            sum += v;
        }
    }
    sum + 0.0 // fold -0.0 into +0.0
}

/// Early-exit distance check scanning newest columns and rows first, where
/// states that differ in recent assignments separate immediately.
fn within_eps(a: &DiagramState, b: &DiagramState, eps: f64) -> bool {
    for (ca, cb) in a.columns().iter().zip(b.columns()).rev() {
        debug_assert_eq!(ca.index, cb.index);
        for (&x, &y) in ca.values.iter().zip(&cb.values).rev() {
            if !(crate::math::abs(x - y) <= eps) {
                return false;
            }
        }
    }
    true
}

struct MergeIndex {
    eps: f64,
    window: f64,
    map: BTreeMap<(u64, u64), Vec<u32>>,
}

impl MergeIndex {
    fn new(eps: f64, entries_per_state: usize) -> Self {
        Self { eps, window: eps * entries_per_state as f64, map: BTreeMap::new() }
    }

    /// First-fit lookup: the earliest-admitted representative within `eps`.
    fn find(&self, states: &[DiagramState], child: &DiagramState) -> Option<u32> {
        let cs = constraint_key(child.constraint_state());
        let key = merge_key(child);
        let lo = ordered_bits(key - self.window);
        let hi = ordered_bits(key + self.window);
        let mut best: Option<u32> = None;
        for (_, bucket) in self.map.range((cs, lo)..=(cs, hi)) {
            for &idx in bucket {
                if best.is_some_and(|b| b <= idx) {
                    continue;
                }
                if within_eps(&states[idx as usize], child, self.eps) {
                    best = Some(idx);
                }
            }
        }
        best
    }

    fn insert(&mut self, state: &DiagramState, idx: u32) {
        let cs = constraint_key(state.constraint_state());
        let key = ordered_bits(merge_key(state));
        self.map.entry((cs, key)).or_default().push(idx);
    }
}

struct PendingArc {
    var: usize,
    tail: u32,
    head: u32,
    nu: bool,
    u: TransitionVector,
}

fn build_merged(
    q: &BandedMatrix,
    eps: f64,
    mode: BuildMode,
    arc_budget: usize,
    automaton: Option<&dyn ConstraintAutomaton>,
) -> Result<Diagram> {
    let n = q.n();
    let pi = relevance_indexes(q);
    let root_cs = automaton.map(|a| a.initial());

    let mut layer_cs: Vec<Vec<Option<u32>>> = Vec::with_capacity(n + 1);
    layer_cs.push(vec![root_cs]);
    let mut pending: Vec<PendingArc> = Vec::new();
    let mut states: Vec<DiagramState> = vec![DiagramState::root(root_cs)];
    let mut nodes_so_far = 1usize;

    for var in 0..n {
        let relevant_cols = (0..=var).filter(|&j| pi.0[j] >= var + 1).count();
        let mut admitted: Vec<DiagramState> = Vec::new();
        let mut index = MergeIndex::new(eps, relevant_cols * (var + 1));
        for (p, parent) in states.iter().enumerate() {
            for assign in [false, true] {
                let next_cs = match automaton {
                    Some(a) => {
                        let cur = parent.constraint_state().expect("automaton state present");
                        match a.transition(cur, assign, var, n) {
                            Some(cs) => Some(cs),
                            None => continue,
                        }
                    }
                    None => None,
                };
                let (mut child, u) = state_extend_with_vector(parent, q, &pi, assign)?;
                child.set_constraint_state(next_cs);
                let head = match index.find(&admitted, &child) {
                    Some(idx) => idx,
                    None => {
                        let idx = admitted.len() as u32;
                        index.insert(&child, idx);
                        admitted.push(child);
                        idx
                    }
                };
                pending.push(PendingArc {
                    var,
                    tail: p as u32,
                    head,
                    nu: assign,
                    u: u.unwrap_or_else(|| TransitionVector::zero(var)),
                });
                if pending.len() > arc_budget {
                    return Err(Error::ArcBudgetExceeded {
                        budget: arc_budget,
                        layer: var + 1,
                        nodes_so_far,
                    });
                }
            }
        }
        nodes_so_far += admitted.len();
        layer_cs.push(admitted.iter().map(|s| s.constraint_state()).collect());
        states = admitted;
    }
    drop(states);

    let alive = prune_dead_ends(n, &layer_cs, &pending)?;
    assemble(q, mode, constraint_of(automaton), n, layer_cs, pending, alive)
}

fn constraint_of(automaton: Option<&dyn ConstraintAutomaton>) -> ConstraintKind {
    automaton.map_or(ConstraintKind::Unconstrained, |a| a.descriptor())
}

/// Backward sweep removing nodes with no surviving outgoing arc. Only side
/// constraints can create dead ends; unconstrained layers always keep both
/// arcs.
fn prune_dead_ends(
    n: usize,
    layer_cs: &[Vec<Option<u32>>],
    pending: &[PendingArc],
) -> Result<Vec<Vec<bool>>> {
    let mut alive: Vec<Vec<bool>> =
        layer_cs.iter().map(|l| vec![false; l.len()]).collect();
    for a in alive[n].iter_mut() {
        *a = true;
    }
    // Arcs are grouped by layer in construction order.
    let mut by_layer: Vec<core::ops::Range<usize>> = vec![0..0; n];
    for (i, arc) in pending.iter().enumerate() {
        if by_layer[arc.var].is_empty() {
            by_layer[arc.var] = i..i + 1;
        } else {
            by_layer[arc.var].end = i + 1;
        }
    }
    for var in (0..n).rev() {
        for arc in &pending[by_layer[var].clone()] {
            if alive[var + 1][arc.head as usize] {
                alive[var][arc.tail as usize] = true;
            }
        }
    }
    if !alive[0][0] {
        return Err(Error::Infeasible);
    }
    Ok(alive)
}

fn assemble(
    q: &BandedMatrix,
    mode: BuildMode,
    constraint: ConstraintKind,
    n: usize,
    layer_cs: Vec<Vec<Option<u32>>>,
    pending: Vec<PendingArc>,
    alive: Vec<Vec<bool>>,
) -> Result<Diagram> {
    // Global ids for surviving nodes, layer-major in admission order.
    let mut remap: Vec<Vec<Option<u32>>> = Vec::with_capacity(n + 1);
    let mut layer_offsets = Vec::with_capacity(n + 2);
    let mut node_constraint = Vec::new();
    let mut next_id = 0u32;
    for (l, cs_list) in layer_cs.iter().enumerate() {
        layer_offsets.push(next_id);
        let mut ids = Vec::with_capacity(cs_list.len());
        for (i, &cs) in cs_list.iter().enumerate() {
            if alive[l][i] {
                ids.push(Some(next_id));
                node_constraint.push(cs);
                next_id += 1;
            } else {
                ids.push(None);
            }
        }
        remap.push(ids);
    }
    layer_offsets.push(next_id);

    let mut arcs = Vec::with_capacity(pending.len());
    for arc in pending {
        let (Some(tail), Some(head)) =
            (remap[arc.var][arc.tail as usize], remap[arc.var + 1][arc.head as usize])
        else {
            continue;
        };
        arcs.push(DiagramArc { tail, head, var: arc.var, nu: arc.nu, u: arc.u });
    }

    let first_arc = index_arcs(node_constraint.len(), &arcs);
    Ok(Diagram {
        n,
        k: q.k(),
        mode,
        constraint,
        layer_offsets,
        node_constraint,
        arcs,
        first_arc,
    })
}

fn index_arcs(num_nodes: usize, arcs: &[DiagramArc]) -> Vec<u32> {
    let mut first = vec![0u32; num_nodes + 1];
    for a in arcs {
        first[a.tail as usize + 1] += 1;
    }
    for i in 0..num_nodes {
        first[i + 1] += first[i];
    }
    debug_assert!(arcs.windows(2).all(|w| w[0].tail <= w[1].tail));
    first
}

// ---------------------------------------------------------------------------
// truncated construction
// ---------------------------------------------------------------------------

/// Truncated build: layer `l` holds one node per suffix of the most recent
/// `min(l, m)` assignments (newest bit lowest); the state stored for a key
/// is the one reached with an all-zero prefix. The final layer is a single
/// merged terminal.
fn build_truncated(q: &BandedMatrix, m: usize, arc_budget: usize) -> Result<Diagram> {
    let n = q.n();
    let pi = relevance_indexes(q);

    let mut states: Vec<DiagramState> = vec![DiagramState::root(None)];
    let mut layer_sizes: Vec<usize> = vec![1];
    let mut arcs: Vec<(u32, u32, usize, bool, TransitionVector)> = Vec::new();
    let mut arc_count = 0usize;

    for var in 0..n {
        let q_now = var.min(m); // suffix length at this layer
        debug_assert_eq!(states.len(), 1 << q_now);
        let q_next = (var + 1).min(m);
        let next_size = if var + 1 == n { 1 } else { 1usize << q_next };

        arc_count += 2 * states.len();
        if arc_count > arc_budget {
            return Err(Error::ArcBudgetExceeded {
                budget: arc_budget,
                layer: var + 1,
                nodes_so_far: layer_sizes.iter().sum(),
            });
        }

        let mask = (1usize << q_next) - 1;
        for (s, parent) in states.iter().enumerate() {
            let u = transition_vector(parent, q)?;
            for assign in [false, true] {
                let head = if var + 1 == n { 0 } else { ((s << 1) | assign as usize) & mask };
                let uvec = if assign { u.clone() } else { TransitionVector::zero(var) };
                arcs.push((s as u32, head as u32, var, assign, uvec));
            }
        }

        if var + 1 < n {
            let mut next = Vec::with_capacity(next_size);
            for c in 0..next_size {
                let (rep, _) =
                    state_extend_with_vector(&states[c >> 1], q, &pi, c & 1 == 1)?;
                next.push(rep);
            }
            states = next;
        } else {
            states = vec![DiagramState::root(None)];
        }
        layer_sizes.push(next_size);
    }

    let mut layer_offsets = Vec::with_capacity(n + 2);
    let mut acc = 0u32;
    for &sz in &layer_sizes {
        layer_offsets.push(acc);
        acc += sz as u32;
    }
    layer_offsets.push(acc);

    let node_constraint = vec![None; acc as usize];
    let arcs: Vec<DiagramArc> = arcs
        .into_iter()
        .map(|(tail, head, var, nu, u)| DiagramArc {
            tail: layer_offsets[var] + tail,
            head: layer_offsets[var + 1] + head,
            var,
            nu,
            u,
        })
        .collect();
    let first_arc = index_arcs(acc as usize, &arcs);

    Ok(Diagram {
        n,
        k: q.k(),
        mode: BuildMode::Truncated(m),
        constraint: ConstraintKind::Unconstrained,
        layer_offsets,
        node_constraint,
        arcs,
        first_arc,
    })
}
