//! Hull formulation writers: a JSON document and a plain-text conic format.
//!
//! Both list the variable layout, the flow rows, the coupling rows, the
//! epigraph row, and one rotated-cone block per arc; ordering is
//! deterministic and floats carry 17 significant digits in the text form.

use miqodd_core::hull::{HullFormulation, LinRow, RowSense};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Serialize)]
struct VarsJson {
    count: usize,
    num_arcs: usize,
    n: usize,
    r_offset: usize,
    w_offset: usize,
    s_offset: usize,
    x_offset: usize,
    z_offset: usize,
    x0: usize,
}

#[derive(Serialize)]
struct RowJson {
    terms: Vec<(usize, f64)>,
    sense: &'static str,
    rhs: f64,
}

#[derive(Serialize)]
struct ConeJson {
    arc: usize,
    w: usize,
    r: usize,
    s: usize,
}

#[derive(Serialize)]
struct HullJson {
    vars: VarsJson,
    flow_rows: Vec<RowJson>,
    coupling_rows: Vec<RowJson>,
    epigraph_row: RowJson,
    cones: Vec<ConeJson>,
    flags: Vec<&'static str>,
}

fn row_json(row: &LinRow) -> RowJson {
    RowJson {
        terms: row.terms.clone(),
        sense: match row.sense {
            RowSense::Eq => "eq",
            RowSense::Le => "le",
        },
        rhs: row.rhs,
    }
}

pub fn hull_to_json(f: &HullFormulation) -> String {
    let layout = f.layout;
    let doc = HullJson {
        vars: VarsJson {
            count: layout.num_vars(),
            num_arcs: layout.num_arcs,
            n: layout.n,
            r_offset: layout.r(0),
            w_offset: layout.w(0),
            s_offset: layout.s(0),
            x_offset: layout.x(0),
            z_offset: layout.z(0),
            x0: layout.x0(),
        },
        flow_rows: f.flow_rows.iter().map(row_json).collect(),
        coupling_rows: f.coupling_rows.iter().map(row_json).collect(),
        epigraph_row: row_json(&f.epigraph_row),
        cones: f
            .cones
            .iter()
            .map(|c| ConeJson { arc: c.arc, w: c.w, r: c.r, s: c.s })
            .collect(),
        flags: if f.inexact { vec!["inexact_hull"] } else { vec![] },
    };
    serde_json::to_string_pretty(&doc).expect("hull serialization cannot fail")
}

fn push_row(out: &mut String, row: &LinRow) {
    let sense = match row.sense {
        RowSense::Eq => "eq",
        RowSense::Le => "le",
    };
    write!(out, "row {sense} {:.16e} {}", row.rhs, row.terms.len()).unwrap();
    for &(var, coef) in &row.terms {
        write!(out, " {var} {coef:.16e}").unwrap();
    }
    out.push('\n');
}

/// Plain-text form: one constraint per line.
///
/// `cone a w r s` encodes `point[w]^2 <= point[s] * point[r]` (rotated cone,
/// `0/0 = 0`), and `nonneg r <lo> <hi>` declares `r` variables nonnegative.
pub fn hull_to_cone_text(f: &HullFormulation) -> String {
    let layout = f.layout;
    let mut out = String::new();
    out.push_str("miqodd-hull 1\n");
    writeln!(
        out,
        "vars {} arcs {} n {} r {} w {} s {} x {} z {} x0 {}",
        layout.num_vars(),
        layout.num_arcs,
        layout.n,
        layout.r(0),
        layout.w(0),
        layout.s(0),
        layout.x(0),
        layout.z(0),
        layout.x0()
    )
    .unwrap();
    if f.inexact {
        out.push_str("flag inexact_hull\n");
    }
    for row in &f.flow_rows {
        push_row(&mut out, row);
    }
    for row in &f.coupling_rows {
        push_row(&mut out, row);
    }
    push_row(&mut out, &f.epigraph_row);
    for c in &f.cones {
        writeln!(out, "cone {} {} {} {}", c.arc, c.w, c.r, c.s).unwrap();
    }
    writeln!(out, "nonneg r 0 {}", layout.num_arcs).unwrap();
    out
}
