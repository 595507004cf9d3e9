//! Solution JSON: `{"z": [...], "x": [...], "objective": f, "x0": f,
//! "mode": str, "timings_ms": {...}}` plus mode-specific fields.

use miqodd_core::{ModeTag, Solution};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct TimingsMs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub build_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionJson {
    pub z: Vec<u8>,
    pub x: Vec<f64>,
    pub objective: f64,
    pub x0: f64,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fptas_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_discrepancy: Option<f64>,
    pub timings_ms: TimingsMs,
}

impl SolutionJson {
    pub fn from_solution(sol: &Solution, timings: TimingsMs) -> Self {
        let (mode, epsilon, m, fptas_bound) = match sol.mode {
            ModeTag::Exact => ("exact", None, None, None),
            ModeTag::EpsExact(e) => ("eps_exact", Some(e), None, None),
            ModeTag::Truncated(m) => ("truncated", None, Some(m), None),
            ModeTag::Fptas { bound } => ("fptas", None, None, Some(bound)),
        };
        Self {
            z: sol.z.iter().map(|&b| b as u8).collect(),
            x: sol.x.clone(),
            objective: sol.objective,
            x0: sol.x0,
            mode: mode.into(),
            epsilon,
            m,
            fptas_bound,
            verify_discrepancy: sol.verify_discrepancy,
            timings_ms: timings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_mode_fields() {
        let sol = Solution {
            z: vec![true, false],
            x: vec![1.5, 0.0],
            x0: 4.5,
            objective: -1.25,
            mode: ModeTag::Fptas { bound: 1e-3 },
            verify_discrepancy: None,
        };
        let js = SolutionJson::from_solution(&sol, TimingsMs::default());
        let text = serde_json::to_string(&js).unwrap();
        assert!(text.contains("\"fptas_bound\":0.001"));
        assert!(text.contains("\"z\":[1,0]"));
    }
}
