use std::f64::consts::PI;
use std::fmt::Write;
use std::str::FromStr;

use serde_json::json;

use super::{Curve, Step, TrisectionDiagram};
use crate::error::DiagramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Svg,
}

impl FromStr for Format {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, DiagramError> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "svg" => Ok(Format::Svg),
            other => Err(DiagramError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Render `d` as canonical JSON, a DOT graph of the apex residue with curve
/// overlays, or an SVG sketch.
pub fn export_diagram(d: &TrisectionDiagram, format: &str) -> Result<Vec<u8>, DiagramError> {
    Ok(match format.parse::<Format>()? {
        Format::Json => json_bytes(d),
        Format::Dot => dot(d).into_bytes(),
        Format::Svg => svg(d).into_bytes(),
    })
}

fn json_bytes(d: &TrisectionDiagram) -> Vec<u8> {
    let steps = |cs: &[Curve]| cs.iter().map(|c| c.steps.clone()).collect::<Vec<_>>();
    // serde_json maps are sorted, which makes the output canonical
    let v = json!({
        "alpha": steps(&d.alpha),
        "beta": steps(&d.beta),
        "gamma": steps(&d.gamma),
        "genus": d.genus,
        "k": d.k(),
        "permutation": d.surface.permutation,
    });
    serde_json::to_vec(&v).expect("json values serialize")
}

const PALETTE: [(&str, &str); 3] = [("alpha", "red"), ("beta", "blue"), ("gamma", "darkgreen")];

fn systems(d: &TrisectionDiagram) -> [&[Curve]; 3] {
    [&d.alpha, &d.beta, &d.gamma]
}

fn dot(d: &TrisectionDiagram) -> String {
    let s = &d.surface;
    let mut out = String::from("graph diagram {\n  node [shape=circle, fontsize=10];\n");
    for v in 0..s.vertex_count {
        let _ = writeln!(out, "  {v};");
    }
    for e in &s.edges {
        let _ = writeln!(out, "  {} -- {} [label=\"e{} c{}\", color=gray];", e.u, e.v, e.id, e.color);
    }
    for (j, h) in s.handles.iter().enumerate() {
        let _ = writeln!(out, "  {} -- {} [label=\"h{j}\", style=dashed];", h.u, h.v);
    }
    let ends: std::collections::HashMap<usize, (usize, usize)> = s.edges.iter().map(|e| (e.id, (e.u, e.v))).collect();
    for (sys, (name, color)) in systems(d).iter().zip(PALETTE) {
        for (i, c) in sys.iter().enumerate() {
            for st in &c.steps {
                let (u, v, what) = match *st {
                    Step::Edge { edge, .. } => {
                        let (u, v) = ends[&edge];
                        (u, v, String::new())
                    }
                    Step::Handle { j, .. } | Step::StabCircle { j } => {
                        let h = &s.handles[j];
                        let what = if matches!(st, Step::StabCircle { .. }) { " meridian" } else { "" };
                        (h.u, h.v, what.to_string())
                    }
                };
                let _ = writeln!(out, "  {u} -- {v} [color={color}, penwidth=2, label=\"{name}{i}{what}\"];");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn svg(d: &TrisectionDiagram) -> String {
    let s = &d.surface;
    let n = s.vertex_count.max(1);
    let size = 200.0 + 24.0 * n as f64;
    let c = size / 2.0;
    let r = size / 2.0 - 40.0;
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|v| {
            let a = 2.0 * PI * v as f64 / n as f64;
            (c + r * a.cos(), c + r * a.sin())
        })
        .collect();
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size:.0}\" height=\"{size:.0}\" viewBox=\"0 0 {size:.0} {size:.0}\">\n"
    );
    let line = |out: &mut String, a: usize, b: usize, style: &str| {
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" {style}/>",
            pos[a].0, pos[a].1, pos[b].0, pos[b].1
        );
    };
    for e in &s.edges {
        line(&mut out, e.u, e.v, "stroke=\"#bbb\" stroke-width=\"1\"");
    }
    for h in &s.handles {
        line(&mut out, h.u, h.v, "stroke=\"black\" stroke-dasharray=\"4 3\"");
    }
    let ends: std::collections::HashMap<usize, (usize, usize)> = s.edges.iter().map(|e| (e.id, (e.u, e.v))).collect();
    for (sys, (_, color)) in systems(d).iter().zip(PALETTE) {
        for (i, curve) in sys.iter().enumerate() {
            let shift = 3.0 * (i as f64 + 1.0);
            let mut pts = Vec::new();
            for st in &curve.steps {
                match *st {
                    Step::Edge { edge, forward } => {
                        let (u, v) = ends[&edge];
                        pts.push(if forward { u } else { v });
                    }
                    Step::Handle { j, forward } => {
                        let h = &s.handles[j];
                        pts.push(if forward { h.u } else { h.v });
                    }
                    Step::StabCircle { j } => {
                        let h = &s.handles[j];
                        let (x, y) = ((pos[h.u].0 + pos[h.v].0) / 2.0, (pos[h.u].1 + pos[h.v].1) / 2.0);
                        let _ = writeln!(
                            out,
                            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{:.1}\" fill=\"none\" stroke=\"{color}\"/>",
                            6.0 + shift
                        );
                    }
                }
            }
            if !pts.is_empty() {
                let coords: Vec<String> =
                    pts.iter().map(|&p| format!("{:.1},{:.1}", pos[p].0 + shift, pos[p].1 + shift)).collect();
                let _ = writeln!(
                    out,
                    "<polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-opacity=\"0.7\"/>",
                    coords.join(" ")
                );
            }
        }
    }
    for (v, p) in pos.iter().enumerate().take(s.vertex_count) {
        let _ = writeln!(out, "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"black\"/>", p.0, p.1);
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{v}</text>", p.0 + 6.0, p.1 - 6.0);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::CyclicPermutation;
    use crate::graph::ColoredGraph;
    use crate::trisection::{minimize_k, MinimizeOptions, Mode};

    fn sphere_diagram() -> TrisectionDiagram {
        let g = ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap();
        let eps = CyclicPermutation::identity(4);
        let cert = minimize_k(&g, &eps, MinimizeOptions::default()).unwrap();
        super::super::assemble_diagram(&g, &eps, &cert, Mode::TrisectionClosed).unwrap()
    }

    #[test]
    fn sphere_golden_json() {
        let bytes = export_diagram(&sphere_diagram(), "json").unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            r#"{"alpha":[],"beta":[],"gamma":[],"genus":0,"k":0,"permutation":[0,1,2,3,4]}"#
        );
    }

    #[test]
    fn unknown_format() {
        assert!(matches!(export_diagram(&sphere_diagram(), "png"), Err(DiagramError::UnsupportedFormat(f)) if f == "png"));
    }

    #[test]
    fn svg_is_closed() {
        let s = String::from_utf8(export_diagram(&sphere_diagram(), "svg").unwrap()).unwrap();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    }
}
