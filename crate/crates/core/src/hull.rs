//! Extended convex-hull formulation induced by a diagram, and certification
//! of path-induced feasible points.
//!
//! A built diagram describes the closed convex hull of
//! `{(x, z, x0) : x'Qx <= x0, x o (1 - z) = 0, z in Z}` through one flow
//! variable `r_a` and one scaled continuous variable `w_a` per arc:
//!
//! ```text
//!     x0 >= sum_a w_a^2 / r_a          (epigraph; 0/0 = 0)
//!     x   = sum_a u_a w_a              (coupling)
//!     z_i = sum_{a: nu_a = 1, var(a) = i} r_a
//!     r is a unit root-to-terminal flow, r >= 0
//! ```
//!
//! The epigraph is emitted in disaggregated second-order-cone form with one
//! auxiliary `s_a` per arc: `w_a^2 <= s_a r_a` and `sum_a s_a <= x0`. This
//! module only *emits and certifies* the system; solving the resulting conic
//! program is delegated to external tooling, and the shortest-path route in
//! [`crate::solve`] remains the fast path.

use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{BuildMode, Diagram};
use crate::error::Result;
use crate::math;
use crate::solve::{recover_solution, Instance};

/// Row comparison sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Eq,
    Le,
}

/// A sparse linear row `sum coef * var (sense) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinRow {
    pub terms: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

impl LinRow {
    fn eval(&self, point: &[f64]) -> f64 {
        let lhs: f64 = self.terms.iter().map(|&(v, c)| c * point[v]).sum();
        match self.sense {
            RowSense::Eq => math::abs(lhs - self.rhs),
            RowSense::Le => (lhs - self.rhs).max(0.0),
        }
    }
}

/// One rotated-cone block `w^2 <= s * r` for an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeBlock {
    pub arc: usize,
    pub w: usize,
    pub r: usize,
    pub s: usize,
}

/// Variable index layout of a hull formulation.
///
/// Flow variables first, then scaled continuous, then the cone auxiliaries,
/// then `x`, `z`, and finally `x0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarLayout {
    pub num_arcs: usize,
    pub n: usize,
}

impl VarLayout {
    #[inline]
    pub fn r(&self, a: usize) -> usize {
        a
    }
    #[inline]
    pub fn w(&self, a: usize) -> usize {
        self.num_arcs + a
    }
    #[inline]
    pub fn s(&self, a: usize) -> usize {
        2 * self.num_arcs + a
    }
    #[inline]
    pub fn x(&self, i: usize) -> usize {
        3 * self.num_arcs + i
    }
    #[inline]
    pub fn z(&self, i: usize) -> usize {
        3 * self.num_arcs + self.n + i
    }
    #[inline]
    pub fn x0(&self) -> usize {
        3 * self.num_arcs + 2 * self.n
    }
    #[inline]
    pub fn num_vars(&self) -> usize {
        3 * self.num_arcs + 2 * self.n + 1
    }
}

/// The extended formulation of the hull described by a diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct HullFormulation {
    pub layout: VarLayout,
    /// Per-node flow balance for internal layers, then the two unit-flow
    /// rows (first layer and last layer).
    pub flow_rows: Vec<LinRow>,
    /// `x` coupling rows, then `z` coupling rows.
    pub coupling_rows: Vec<LinRow>,
    /// `sum_a s_a <= x0`.
    pub epigraph_row: LinRow,
    /// One rotated cone `w_a^2 <= s_a r_a` per arc; `r_a >= 0` is implied.
    pub cones: Vec<ConeBlock>,
    /// Set when the source diagram was built with `epsilon > 0` or in
    /// truncated mode; the formulation then describes the hull only
    /// approximately.
    pub inexact: bool,
}

/// Emits the hull formulation of a built diagram.
pub fn build_hull(d: &Diagram) -> HullFormulation {
    let layout = VarLayout { num_arcs: d.num_arcs(), n: d.n() };

    let mut flow_rows = Vec::new();
    // Flow balance at every internal node, layer by layer.
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); d.num_nodes()];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); d.num_nodes()];
    for (idx, arc) in d.arcs().iter().enumerate() {
        incoming[arc.head as usize].push(idx);
        outgoing[arc.tail as usize].push(idx);
    }
    for layer in 1..d.n() {
        for node in d.layer_nodes(layer) {
            let mut terms = Vec::new();
            for &a in &incoming[node as usize] {
                terms.push((layout.r(a), 1.0));
            }
            for &a in &outgoing[node as usize] {
                terms.push((layout.r(a), -1.0));
            }
            flow_rows.push(LinRow { terms, sense: RowSense::Eq, rhs: 0.0 });
        }
    }
    // Unit flow out of the root layer and into the terminal layer.
    let first: Vec<(usize, f64)> = d
        .arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.var == 0)
        .map(|(i, _)| (layout.r(i), 1.0))
        .collect();
    flow_rows.push(LinRow { terms: first, sense: RowSense::Eq, rhs: 1.0 });
    let last: Vec<(usize, f64)> = d
        .arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.var == d.n() - 1)
        .map(|(i, _)| (layout.r(i), 1.0))
        .collect();
    flow_rows.push(LinRow { terms: last, sense: RowSense::Eq, rhs: 1.0 });

    let mut coupling_rows = Vec::new();
    // x_i = sum_a u_a[i] w_a
    let mut x_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); d.n()];
    for (idx, arc) in d.arcs().iter().enumerate() {
        for (&i, &v) in arc.u.support().iter().zip(arc.u.values()) {
            x_terms[i].push((layout.w(idx), -v));
        }
    }
    for (i, mut terms) in x_terms.into_iter().enumerate() {
        terms.insert(0, (layout.x(i), 1.0));
        coupling_rows.push(LinRow { terms, sense: RowSense::Eq, rhs: 0.0 });
    }
    // z_i = sum over one-arcs at layer i of r_a
    let mut z_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); d.n()];
    for (idx, arc) in d.arcs().iter().enumerate() {
        if arc.nu {
            z_terms[arc.var].push((layout.r(idx), -1.0));
        }
    }
    for (i, mut terms) in z_terms.into_iter().enumerate() {
        terms.insert(0, (layout.z(i), 1.0));
        coupling_rows.push(LinRow { terms, sense: RowSense::Eq, rhs: 0.0 });
    }

    let mut epi_terms: Vec<(usize, f64)> = (0..d.num_arcs()).map(|a| (layout.s(a), 1.0)).collect();
    epi_terms.push((layout.x0(), -1.0));
    let epigraph_row = LinRow { terms: epi_terms, sense: RowSense::Le, rhs: 0.0 };

    let cones = (0..d.num_arcs())
        .map(|a| ConeBlock { arc: a, w: layout.w(a), r: layout.r(a), s: layout.s(a) })
        .collect();

    let inexact = match d.mode() {
        BuildMode::Exact => false,
        BuildMode::EpsExact(e) => e > 0.0,
        BuildMode::Truncated(_) => true,
    };

    HullFormulation { layout, flow_rows, coupling_rows, epigraph_row, cones, inexact }
}

/// A feasible point of the hull formulation induced by one path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathWitness {
    /// Full variable vector in [`VarLayout`] order.
    pub point: Vec<f64>,
    /// The recovered solution the witness embeds.
    pub z: Vec<bool>,
    pub x: Vec<f64>,
    pub x0: f64,
    /// `d'x + c'z + x0/2 + constant`.
    pub objective: f64,
}

/// Maximum violations of each constraint family at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResiduals {
    pub flow: f64,
    pub coupling: f64,
    pub cone: f64,
    pub epigraph: f64,
    pub nonneg: f64,
    /// `|c'z - x0/2 - sum_a l_a|`: the path length identity; meaningful for
    /// single-path witnesses only (infinity-free otherwise).
    pub objective_identity: f64,
}

impl WitnessResiduals {
    pub fn max(&self) -> f64 {
        self.flow.max(self.coupling).max(self.cone).max(self.epigraph).max(self.nonneg)
    }
}

/// Evaluates every constraint family of the formulation at a point.
pub fn residuals_at(f: &HullFormulation, point: &[f64]) -> WitnessResiduals {
    let mut flow = 0.0f64;
    for row in &f.flow_rows {
        flow = flow.max(row.eval(point));
    }
    let mut coupling = 0.0f64;
    for row in &f.coupling_rows {
        coupling = coupling.max(row.eval(point));
    }
    let epigraph = f.epigraph_row.eval(point);
    let mut cone = 0.0f64;
    let mut nonneg = 0.0f64;
    for c in &f.cones {
        let (w, r, s) = (point[c.w], point[c.r], point[c.s]);
        nonneg = nonneg.max(-r).max(-s);
        // w^2 <= s r, with the 0/0 = 0 convention at r = 0.
        cone = cone.max(w * w - s * r);
    }
    WitnessResiduals { flow, coupling, cone, epigraph, nonneg, objective_identity: 0.0 }
}

/// Builds the witness `(r, w, s, x, z, x0)` of a root-to-terminal path and
/// reports the residuals of every hull constraint plus the path-length
/// identity `c'z - x0/2 = sum_a l_a`.
pub fn certify_path_feasible(
    d: &Diagram,
    f: &HullFormulation,
    path: &[u32],
    inst: &Instance,
) -> Result<(PathWitness, WitnessResiduals)> {
    let layout = f.layout;
    let mut point = vec![0.0; layout.num_vars()];
    let sol = recover_solution(d, path, inst, None)?;

    let mut sum_len = 0.0;
    for &idx in path {
        let arc = &d.arcs()[idx as usize];
        point[layout.r(idx as usize)] = 1.0;
        if arc.nu {
            let w = -arc.u.dot(&inst.d);
            point[layout.w(idx as usize)] = w;
            point[layout.s(idx as usize)] = w * w;
            sum_len += inst.c[arc.var] - 0.5 * w * w;
        }
    }
    for i in 0..layout.n {
        point[layout.x(i)] = sol.x[i];
        point[layout.z(i)] = if sol.z[i] { 1.0 } else { 0.0 };
    }
    point[layout.x0()] = sol.x0;

    let mut res = residuals_at(f, &point);
    let cz: f64 = sol.z.iter().zip(&inst.c).map(|(&b, &ci)| if b { ci } else { 0.0 }).sum();
    res.objective_identity = math::abs(cz - 0.5 * sol.x0 - sum_len);

    let dx: f64 = inst.d.iter().zip(&sol.x).map(|(a, b)| a * b).sum();
    let objective = dx + cz + 0.5 * sol.x0 + inst.constant;
    let witness =
        PathWitness { point, z: sol.z, x: sol.x, x0: sol.x0, objective };
    Ok((witness, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banded::make_banded;
    use crate::diagram::{build_diagram, BuildConfig, BuildMode};

    #[test]
    fn smallest_diagram_layout() {
        let q = make_banded(1, 0, &[(0, 0, 2.0)]).unwrap();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        assert_eq!(d.num_arcs(), 2);
        let f = build_hull(&d);
        assert_eq!(f.cones.len(), 2);
        assert_eq!(f.layout.num_vars(), 3 * 2 + 2 * 1 + 1);
        // No internal layers: just the two unit-flow rows, both over both arcs.
        assert_eq!(f.flow_rows.len(), 2);
        for row in &f.flow_rows {
            assert_eq!(row.terms.len(), 2);
            assert_eq!(row.rhs, 1.0);
        }
        assert!(!f.inexact);
    }

    #[test]
    fn zero_path_witness_is_clean() {
        let q = make_banded(
            3,
            1,
            &[(0, 0, 2.0), (1, 1, 3.0), (2, 2, 2.0), (0, 1, -1.0), (1, 2, -1.0)],
        )
        .unwrap();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let f = build_hull(&d);
        let inst = Instance::new(vec![0.3; 3], vec![-0.5, 0.2, 0.9], 0.0);
        let path = d.trace_arcs(&[false, false, false]).unwrap();
        let (witness, res) = certify_path_feasible(&d, &f, &path, &inst).unwrap();
        assert_eq!(witness.x0, 0.0);
        assert!(witness.point.iter().take(f.layout.num_arcs * 3).all(|&v| v == 0.0 || v == 1.0));
        assert_eq!(res.max(), 0.0);
        assert_eq!(res.objective_identity, 0.0);
    }

    #[test]
    fn truncated_hull_is_flagged() {
        let q = make_banded(
            3,
            1,
            &[(0, 0, 2.0), (1, 1, 3.0), (2, 2, 2.0), (0, 1, -1.0), (1, 2, -1.0)],
        )
        .unwrap();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Truncated(1)), None).unwrap();
        assert!(build_hull(&d).inexact);
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::EpsExact(1e-6)), None).unwrap();
        assert!(build_hull(&d).inexact);
    }
}
