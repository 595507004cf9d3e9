//! Run reports: diagram statistics, latency distributions, and relative
//! gap metrics, all serialized as JSON.

use miqodd_core::{evaluate_objective, BandedMatrix, Diagram, Instance, Solution};
use serde::Serialize;

use crate::error::Result;

/// Per-layer counts; layers are reported one-based, the root layer being 1.
#[derive(Debug, Clone, Serialize)]
pub struct LayerStatsJson {
    pub layer: usize,
    pub nodes: usize,
    pub arcs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramStats {
    pub n: usize,
    pub k: usize,
    pub total_nodes: usize,
    pub total_arcs: usize,
    pub per_layer: Vec<LayerStatsJson>,
}

impl DiagramStats {
    pub fn from_diagram(d: &Diagram) -> Self {
        let per_layer = d
            .layer_stats()
            .iter()
            .enumerate()
            .map(|(l, s)| LayerStatsJson { layer: l + 1, nodes: s.nodes, arcs: s.arcs })
            .collect();
        Self {
            n: d.n(),
            k: d.k(),
            total_nodes: d.num_nodes(),
            total_arcs: d.num_arcs(),
            per_layer,
        }
    }
}

/// Latency distribution over a batch of solves, in milliseconds.
#[derive(Debug, Clone, Serialize)]
pub struct LatencyStats {
    pub count: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub p99_ms: f64,
    pub max_ms: f64,
}

impl LatencyStats {
    pub fn from_durations_ms(mut ms: Vec<f64>) -> Self {
        assert!(!ms.is_empty());
        ms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let count = ms.len();
        let mean = ms.iter().sum::<f64>() / count as f64;
        // Nearest-rank quantile.
        let pick = |q: f64| ms[((q * count as f64).ceil() as usize).clamp(1, count) - 1];
        Self {
            count,
            mean_ms: mean,
            median_ms: pick(0.5),
            p99_ms: pick(0.99),
            max_ms: ms[count - 1],
        }
    }
}

/// The two relative gap metrics comparing a diagram solution against a
/// reference: the gap of reported objectives, and the gap after
/// re-evaluating both indicator vectors through the same projected
/// objective.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapMetrics {
    pub objective_gap: f64,
    pub solution_gap: f64,
}

fn relative(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den.abs()
    }
}

pub fn gap_metrics(
    q: &BandedMatrix,
    inst: &Instance,
    candidate: &Solution,
    reference: &Solution,
) -> Result<GapMetrics> {
    let objective_gap =
        relative(candidate.objective - reference.objective, reference.objective);
    let h_cand = evaluate_objective(q, inst, &candidate.z)?;
    let h_ref = evaluate_objective(q, inst, &reference.z)?;
    let solution_gap = if candidate.z == reference.z {
        0.0
    } else {
        relative(h_cand - h_ref, h_ref)
    };
    Ok(GapMetrics { objective_gap, solution_gap })
}
