//! Diagram serialization: the versioned binary `DDQ1` container and a
//! lossless JSON debug format.
//!
//! Binary layout (little-endian):
//!
//! ```text
//!     magic           "DDQ1"
//!     u32             format version (1)
//!     u32 u32         n, k
//!     u8              mode tag: 0 exact, 1 eps-exact, 2 truncated
//!     8 bytes         epsilon as f64 (tags 0/1) or m as u64 (tag 2)
//!     u8 u32          constraint tag (0 none, 1 contiguity, 2 custom), parameter
//!     per layer       u32 node count, then u32 constraint state per node
//!                     (0xFFFFFFFF for none)
//!     u64             arc count
//!     per arc         u32 tail, u32 head, u32 var, u8 nu,
//!                     u32 support length, then (u32 index, f64 value) pairs
//! ```
//!
//! Writing is deterministic: identical diagrams produce identical bytes.

use std::fs;
use std::path::Path;

use miqodd_core::{
    BuildMode, ConstraintKind, Diagram, DiagramArc, TransitionVector,
};
use serde::{Deserialize, Serialize};

use crate::error::{IoError, Result};

const MAGIC: &[u8; 4] = b"DDQ1";
const VERSION: u32 = 1;
const NO_CONSTRAINT: u32 = u32::MAX;

pub fn diagram_to_bytes(d: &Diagram) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + d.num_arcs() * 32);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(d.n() as u32).to_le_bytes());
    out.extend_from_slice(&(d.k() as u32).to_le_bytes());
    match d.mode() {
        BuildMode::Exact => {
            out.push(0);
            out.extend_from_slice(&0.0f64.to_le_bytes());
        }
        BuildMode::EpsExact(e) => {
            out.push(1);
            out.extend_from_slice(&e.to_le_bytes());
        }
        BuildMode::Truncated(m) => {
            out.push(2);
            out.extend_from_slice(&(m as u64).to_le_bytes());
        }
    }
    match d.constraint() {
        ConstraintKind::Unconstrained => {
            out.push(0);
            out.extend_from_slice(&0u32.to_le_bytes());
        }
        ConstraintKind::Contiguity(tau) => {
            out.push(1);
            out.extend_from_slice(&tau.to_le_bytes());
        }
        ConstraintKind::Custom(id) => {
            out.push(2);
            out.extend_from_slice(&id.to_le_bytes());
        }
    }
    for layer in 0..=d.n() {
        let nodes = d.layer_nodes(layer);
        out.extend_from_slice(&(nodes.len() as u32).to_le_bytes());
        for id in nodes {
            let cs = d.node_constraint_state(id).unwrap_or(NO_CONSTRAINT);
            out.extend_from_slice(&cs.to_le_bytes());
        }
    }
    out.extend_from_slice(&(d.num_arcs() as u64).to_le_bytes());
    for arc in d.arcs() {
        out.extend_from_slice(&arc.tail.to_le_bytes());
        out.extend_from_slice(&arc.head.to_le_bytes());
        out.extend_from_slice(&(arc.var as u32).to_le_bytes());
        out.push(arc.nu as u8);
        out.extend_from_slice(&(arc.u.support().len() as u32).to_le_bytes());
        for (&i, &v) in arc.u.support().iter().zip(arc.u.values()) {
            out.extend_from_slice(&(i as u32).to_le_bytes());
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    path: String,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.buf.len() {
            return Err(IoError::parse(&self.path, "truncated file"));
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn diagram_from_bytes(buf: &[u8], origin: &str) -> Result<Diagram> {
    let mut r = Reader { buf, pos: 0, path: origin.to_string() };
    if r.take(4)? != MAGIC {
        return Err(IoError::parse(origin, "not a DDQ1 file"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(IoError::parse(origin, format!("unsupported version {version}")));
    }
    let n = r.u32()? as usize;
    let k = r.u32()? as usize;
    let mode = match r.u8()? {
        0 => {
            r.f64()?;
            BuildMode::Exact
        }
        1 => BuildMode::EpsExact(r.f64()?),
        2 => BuildMode::Truncated(r.u64()? as usize),
        t => return Err(IoError::parse(origin, format!("unknown mode tag {t}"))),
    };
    let constraint = match (r.u8()?, r.u32()?) {
        (0, _) => ConstraintKind::Unconstrained,
        (1, tau) => ConstraintKind::Contiguity(tau),
        (2, id) => ConstraintKind::Custom(id),
        (t, _) => return Err(IoError::parse(origin, format!("unknown constraint tag {t}"))),
    };
    let mut layers = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        let count = r.u32()? as usize;
        let mut cs = Vec::with_capacity(count);
        for _ in 0..count {
            let v = r.u32()?;
            cs.push(if v == NO_CONSTRAINT { None } else { Some(v) });
        }
        layers.push(cs);
    }
    let arc_count = r.u64()? as usize;
    let mut arcs = Vec::with_capacity(arc_count);
    for _ in 0..arc_count {
        let tail = r.u32()?;
        let head = r.u32()?;
        let var = r.u32()? as usize;
        let nu = r.u8()? != 0;
        let len = r.u32()? as usize;
        let mut support = Vec::with_capacity(len);
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            support.push(r.u32()? as usize);
            values.push(r.f64()?);
        }
        arcs.push(DiagramArc {
            tail,
            head,
            var,
            nu,
            u: TransitionVector::from_sparse(var, support, values),
        });
    }
    if r.pos != buf.len() {
        return Err(IoError::parse(origin, "trailing bytes"));
    }
    Diagram::from_parts(n, k, mode, constraint, layers, arcs)
        .map_err(|e| IoError::parse(origin, e.to_string()))
}

pub fn write_diagram(path: &Path, d: &Diagram) -> Result<()> {
    fs::write(path, diagram_to_bytes(d))
        .map_err(|e| IoError::file(path.display().to_string(), e))
}

pub fn read_diagram(path: &Path) -> Result<Diagram> {
    let buf = fs::read(path).map_err(|e| IoError::file(path.display().to_string(), e))?;
    diagram_from_bytes(&buf, &path.display().to_string())
}

// --- lossless JSON debug format ---

#[derive(Serialize, Deserialize)]
struct DebugArc {
    tail: u32,
    head: u32,
    var: usize,
    nu: u8,
    u: Vec<(usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct DebugDiagram {
    n: usize,
    k: usize,
    mode: String,
    epsilon: Option<f64>,
    m: Option<usize>,
    constraint: String,
    constraint_param: Option<u32>,
    layers: Vec<Vec<Option<u32>>>,
    arcs: Vec<DebugArc>,
}

pub fn diagram_to_debug_json(d: &Diagram) -> String {
    let (mode, epsilon, m) = match d.mode() {
        BuildMode::Exact => ("exact", Some(0.0), None),
        BuildMode::EpsExact(e) => ("eps_exact", Some(e), None),
        BuildMode::Truncated(m) => ("truncated", None, Some(m)),
    };
    let (constraint, constraint_param) = match d.constraint() {
        ConstraintKind::Unconstrained => ("none", None),
        ConstraintKind::Contiguity(tau) => ("contiguity", Some(tau)),
        ConstraintKind::Custom(id) => ("custom", Some(id)),
    };
    let layers = (0..=d.n())
        .map(|l| d.layer_nodes(l).map(|id| d.node_constraint_state(id)).collect())
        .collect();
    let arcs = d
        .arcs()
        .iter()
        .map(|a| DebugArc {
            tail: a.tail,
            head: a.head,
            var: a.var,
            nu: a.nu as u8,
            u: a.u.support().iter().copied().zip(a.u.values().iter().copied()).collect(),
        })
        .collect();
    let dd = DebugDiagram {
        n: d.n(),
        k: d.k(),
        mode: mode.into(),
        epsilon,
        m,
        constraint: constraint.into(),
        constraint_param,
        layers,
        arcs,
    };
    serde_json::to_string_pretty(&dd).expect("diagram debug serialization cannot fail")
}

pub fn diagram_from_debug_json(text: &str, origin: &str) -> Result<Diagram> {
    let dd: DebugDiagram =
        serde_json::from_str(text).map_err(|e| IoError::parse(origin, e.to_string()))?;
    let mode = match dd.mode.as_str() {
        "exact" => BuildMode::Exact,
        "eps_exact" => BuildMode::EpsExact(
            dd.epsilon.ok_or_else(|| IoError::parse(origin, "missing epsilon"))?,
        ),
        "truncated" => {
            BuildMode::Truncated(dd.m.ok_or_else(|| IoError::parse(origin, "missing m"))?)
        }
        other => return Err(IoError::parse(origin, format!("unknown mode {other:?}"))),
    };
    let constraint = match (dd.constraint.as_str(), dd.constraint_param) {
        ("none", _) => ConstraintKind::Unconstrained,
        ("contiguity", Some(tau)) => ConstraintKind::Contiguity(tau),
        ("custom", Some(id)) => ConstraintKind::Custom(id),
        _ => return Err(IoError::parse(origin, "malformed constraint descriptor")),
    };
    let arcs = dd
        .arcs
        .into_iter()
        .map(|a| {
            let (support, values) = a.u.into_iter().unzip();
            DiagramArc {
                tail: a.tail,
                head: a.head,
                var: a.var,
                nu: a.nu != 0,
                u: TransitionVector::from_sparse(a.var, support, values),
            }
        })
        .collect();
    Diagram::from_parts(dd.n, dd.k, mode, constraint, dd.layers, arcs)
        .map_err(|e| IoError::parse(origin, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use miqodd_core::{build_diagram, make_banded, BuildConfig, Contiguity};

    fn sample() -> Diagram {
        let q = make_banded(
            4,
            1,
            &[(0, 0, 3.0), (1, 1, 3.0), (2, 2, 3.0), (3, 3, 3.0), (0, 1, -1.0), (2, 3, 0.5)],
        )
        .unwrap();
        build_diagram(&q, &BuildConfig::new(BuildMode::EpsExact(1e-6)), Some(&Contiguity::new(2)))
            .unwrap()
    }

    #[test]
    fn binary_round_trip_is_lossless_and_deterministic() {
        let d = sample();
        let bytes = diagram_to_bytes(&d);
        assert_eq!(bytes, diagram_to_bytes(&d));
        let back = diagram_from_bytes(&bytes, "<mem>").unwrap();
        assert_eq!(d, back);
        assert_eq!(bytes, diagram_to_bytes(&back));
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let d = sample();
        let text = diagram_to_debug_json(&d);
        let back = diagram_from_debug_json(&text, "<mem>").unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn rejects_garbage() {
        assert!(diagram_from_bytes(b"nope", "<mem>").is_err());
        let mut bytes = diagram_to_bytes(&sample());
        bytes.truncate(bytes.len() - 3);
        assert!(diagram_from_bytes(&bytes, "<mem>").is_err());
    }
}
