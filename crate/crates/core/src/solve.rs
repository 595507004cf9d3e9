//! Online solving: data-dependent arc lengths, layered-DAG shortest path,
//! and recovery of the full mixed-integer solution.
//!
//! The diagram is read-only here; a [`PathSolver`] owns the per-solve
//! scratch buffers so streaming workloads allocate once and then solve each
//! window in microseconds to milliseconds.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::{banded_solve, BandedMatrix};
use crate::diagram::{BuildMode, Diagram, NodeId};
use crate::error::Result;

/// Cost data layered onto a fixed diagram at solve time.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// Linear indicator costs (length `n`).
    pub c: Vec<f64>,
    /// Linear continuous costs (length `n`).
    pub d: Vec<f64>,
    /// Objective offset, e.g. `||y||^2 / 2` for inference problems.
    pub constant: f64,
    /// Sparsity scalar when `c = mu * 1`.
    pub mu: Option<f64>,
}

impl Instance {
    pub fn new(c: Vec<f64>, d: Vec<f64>, constant: f64) -> Self {
        debug_assert_eq!(c.len(), d.len());
        Self { c, d, constant, mu: None }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.c.len()
    }
}

/// Provenance of a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeTag {
    Exact,
    EpsExact(f64),
    Truncated(usize),
    /// Approximation-scheme solve with a certified additive bound.
    Fptas { bound: f64 },
}

impl ModeTag {
    fn from_build(mode: BuildMode) -> Self {
        match mode {
            BuildMode::Exact => Self::Exact,
            BuildMode::EpsExact(e) => Self::EpsExact(e),
            BuildMode::Truncated(m) => Self::Truncated(m),
        }
    }
}

/// A recovered solution `(z, x, x0)` with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub z: Vec<bool>,
    pub x: Vec<f64>,
    /// Value of `x' Q x` along the path.
    pub x0: f64,
    /// `c'z + d'x + x0/2 + constant`.
    pub objective: f64,
    pub mode: ModeTag,
    /// Infinity-norm gap between the telescoped `x` and an independent
    /// banded re-solve, when verification was requested.
    pub verify_discrepancy: Option<f64>,
}

impl Solution {
    /// Discrepancy threshold above which recovery is flagged as degraded.
    pub const DEGRADED_TOL: f64 = 1e-6;

    pub fn degraded(&self) -> bool {
        self.verify_discrepancy.is_some_and(|d| d > Self::DEGRADED_TOL)
    }
}

/// Arc lengths `l_a = c[var] * nu - (d'u)^2 / 2`; zero-assignment arcs have
/// length exactly zero.
pub fn arc_lengths(d: &Diagram, inst: &Instance) -> Vec<f64> {
    let mut out = Vec::new();
    arc_lengths_into(d, inst, &mut out);
    out
}

/// [`arc_lengths`] into a reused buffer.
pub fn arc_lengths_into(diag: &Diagram, inst: &Instance, out: &mut Vec<f64>) {
    assert_eq!(inst.n(), diag.n(), "instance dimension must match the diagram");
    out.clear();
    out.reserve(diag.num_arcs());
    for arc in diag.arcs() {
        if arc.nu {
            let du = arc.u.dot(&inst.d);
            out.push(inst.c[arc.var] - 0.5 * du * du);
        } else {
            out.push(0.0);
        }
    }
}

/// Single forward pass in layer order; returns the minimal root-to-terminal
/// path (as arc indices) and its length.
///
/// On equal predecessor values the zero-assignment arc wins, so ties break
/// toward sparser solutions, deterministically.
pub fn shortest_path(d: &Diagram, lengths: &[f64]) -> (Vec<u32>, f64) {
    let mut solver = PathSolver::new(d);
    let value = solver.run(d, lengths);
    (solver.extract_path(d), value)
}

/// Reusable shortest-path scratch space, sized once from the diagram.
#[derive(Debug, Clone)]
pub struct PathSolver {
    dist: Vec<f64>,
    pred: Vec<u32>,
    best_terminal: NodeId,
}

const NO_PRED: u32 = u32::MAX;

impl PathSolver {
    pub fn new(d: &Diagram) -> Self {
        Self {
            dist: vec![f64::INFINITY; d.num_nodes()],
            pred: vec![NO_PRED; d.num_nodes()],
            best_terminal: 0,
        }
    }

    /// Relaxes every arc in layer order and returns the optimal value.
    pub fn run(&mut self, d: &Diagram, lengths: &[f64]) -> f64 {
        assert_eq!(lengths.len(), d.num_arcs());
        self.dist.clear();
        self.dist.resize(d.num_nodes(), f64::INFINITY);
        self.pred.clear();
        self.pred.resize(d.num_nodes(), NO_PRED);
        self.dist[d.root() as usize] = 0.0;

        for (idx, arc) in d.arcs().iter().enumerate() {
            let cand = self.dist[arc.tail as usize] + lengths[idx];
            let head = arc.head as usize;
            let cur = self.dist[head];
            let take = cand < cur
                || (cand == cur
                    && !arc.nu
                    && self.pred[head] != NO_PRED
                    && d.arcs()[self.pred[head] as usize].nu);
            if take {
                self.dist[head] = cand;
                self.pred[head] = idx as u32;
            }
        }

        let mut best = f64::INFINITY;
        let mut best_t = d.layer_nodes(d.n()).start;
        for t in d.layer_nodes(d.n()) {
            if self.dist[t as usize] < best {
                best = self.dist[t as usize];
                best_t = t;
            }
        }
        self.best_terminal = best_t;
        best
    }

    /// Arc indices of the optimal path, root first. Valid after [`run`].
    pub fn extract_path(&self, d: &Diagram) -> Vec<u32> {
        let mut path = Vec::with_capacity(d.n());
        let mut node = self.best_terminal;
        while self.pred[node as usize] != NO_PRED {
            let arc_idx = self.pred[node as usize];
            path.push(arc_idx);
            node = d.arcs()[arc_idx as usize].tail;
        }
        path.reverse();
        path
    }
}

/// Recovers `(z, x, x0)` and the objective from a root-to-terminal path.
///
/// `x` is accumulated from the telescoping identity
/// `x = -sum_a u_a (u_a' d)` over the path arcs; passing `verify_with`
/// re-solves the support by banded factorization and records the
/// infinity-norm discrepancy.
pub fn recover_solution(
    diag: &Diagram,
    path: &[u32],
    inst: &Instance,
    verify_with: Option<&BandedMatrix>,
) -> Result<Solution> {
    let n = diag.n();
    assert_eq!(inst.n(), n, "instance dimension must match the diagram");
    let mut z = vec![false; n];
    let mut x = vec![0.0; n];
    let mut x0 = 0.0;
    for &idx in path {
        let arc = &diag.arcs()[idx as usize];
        z[arc.var] = arc.nu;
        if arc.nu {
            let w = arc.u.dot(&inst.d);
            x0 += w * w;
            for (&i, &v) in arc.u.support().iter().zip(arc.u.values()) {
                x[i] -= v * w;
            }
        }
    }
    let cz: f64 = z.iter().zip(&inst.c).map(|(&b, &ci)| if b { ci } else { 0.0 }).sum();
    let objective = cz - 0.5 * x0 + inst.constant;

    let verify_discrepancy = match verify_with {
        Some(q) => {
            let support: Vec<usize> = (0..n).filter(|&i| z[i]).collect();
            let mut disc = 0.0f64;
            if !support.is_empty() {
                let t = banded_solve(q, &support, &inst.d)?;
                for i in 0..n {
                    let diff = crate::math::abs(x[i] + t[i]);
                    if diff > disc {
                        disc = diff;
                    }
                }
            } else {
                for &xi in &x {
                    disc = disc.max(crate::math::abs(xi));
                }
            }
            Some(disc)
        }
        None => None,
    };

    Ok(Solution {
        z,
        x,
        x0,
        objective,
        mode: ModeTag::from_build(diag.mode()),
        verify_discrepancy,
    })
}

/// Objective `h(z) = c'z - d_S' Q_S^{-1} d_S / 2 + constant`, evaluated
/// independently of any diagram via a banded solve. Used for cross-checks
/// and relative-gap reports.
pub fn evaluate_objective(q: &BandedMatrix, inst: &Instance, z: &[bool]) -> Result<f64> {
    assert_eq!(inst.n(), q.n(), "instance dimension must match the matrix");
    assert_eq!(z.len(), q.n());
    let support: Vec<usize> = (0..z.len()).filter(|&i| z[i]).collect();
    let cz: f64 = z.iter().zip(&inst.c).map(|(&b, &ci)| if b { ci } else { 0.0 }).sum();
    if support.is_empty() {
        return Ok(cz + inst.constant);
    }
    let t = banded_solve(q, &support, &inst.d)?;
    let quad: f64 = support.iter().map(|&i| inst.d[i] * t[i]).sum();
    Ok(cz - 0.5 * quad + inst.constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banded::{make_banded, BandedMatrix};
    use crate::diagram::{build_diagram, BuildConfig, BuildMode};

    fn scalar_q2() -> BandedMatrix {
        make_banded(1, 0, &[(0, 0, 2.0)]).unwrap()
    }

    fn example_q3() -> BandedMatrix {
        BandedMatrix::from_dense(
            &[vec![2.0, -1.0, -1.0], vec![-1.0, 3.0, -1.0], vec![-1.0, -1.0, 2.0]],
            2,
        )
        .unwrap()
    }

    #[test]
    fn arc_length_values() {
        let q = scalar_q2();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let inst = Instance::new(vec![1.0], vec![-3.0], 0.0);
        let lengths = arc_lengths(&d, &inst);
        assert_eq!(lengths.len(), 2);
        // zero arc has length exactly zero; the one arc is 1 - 9/4.
        for (arc, &l) in d.arcs().iter().zip(&lengths) {
            if arc.nu {
                assert!((l + 1.25).abs() < 1e-15);
            } else {
                assert_eq!(l, 0.0);
            }
        }

        // With d = 0 the quadratic part vanishes.
        let inst0 = Instance::new(vec![1.0], vec![0.0], 0.0);
        let lengths = arc_lengths(&d, &inst0);
        for (arc, &l) in d.arcs().iter().zip(&lengths) {
            assert_eq!(l, if arc.nu { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn scalar_shortest_path() {
        let q = scalar_q2();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let inst = Instance::new(vec![1.0], vec![-3.0], 0.0);
        let (path, h) = shortest_path(&d, &arc_lengths(&d, &inst));
        assert!((h + 1.25).abs() < 1e-15);
        let sol = recover_solution(&d, &path, &inst, Some(&q)).unwrap();
        assert_eq!(sol.z, vec![true]);
        assert!((sol.x[0] - 1.5).abs() < 1e-12);
        assert!((sol.x0 - 4.5).abs() < 1e-12);
        assert!(sol.verify_discrepancy.unwrap() < 1e-12);
        assert!(!sol.degraded());
    }

    #[test]
    fn huge_sparsity_cost_selects_zero() {
        let q = example_q3();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let inst = Instance::new(vec![1e6; 3], vec![0.3, -0.2, 0.1], 0.0);
        let (path, h) = shortest_path(&d, &arc_lengths(&d, &inst));
        assert_eq!(h, 0.0);
        let sol = recover_solution(&d, &path, &inst, None).unwrap();
        assert_eq!(sol.z, vec![false; 3]);
        assert_eq!(sol.x, vec![0.0; 3]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn recover_two_support_solution() {
        let q = example_q3();
        let d = build_diagram(&q, &BuildConfig::new(BuildMode::Exact), None).unwrap();
        let inst = Instance::new(vec![0.0; 3], vec![1.0, 1.0, 0.0], 0.0);
        let path = d.trace_arcs(&[true, true, false]).unwrap();
        let sol = recover_solution(&d, &path, &inst, Some(&q)).unwrap();
        assert!((sol.x[0] + 0.8).abs() < 1e-12);
        assert!((sol.x[1] + 0.6).abs() < 1e-12);
        assert_eq!(sol.x[2], 0.0);
        assert!((sol.x0 - 1.4).abs() < 1e-12);
        assert!(sol.verify_discrepancy.unwrap() < 1e-10);
    }

    #[test]
    fn objective_evaluation() {
        let q = example_q3();
        let inst = Instance::new(vec![0.5; 3], vec![-3.0, 1.0, 0.0], 2.0);
        assert_eq!(evaluate_objective(&q, &inst, &[false; 3]).unwrap(), 2.0);
        let h = evaluate_objective(&q, &inst, &[true, false, false]).unwrap();
        assert!((h - (2.0 + 0.5 - 9.0 / 4.0)).abs() < 1e-12);
    }
}
