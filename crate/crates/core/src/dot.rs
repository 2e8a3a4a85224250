//! Graphviz output for game digraphs, structure diagrams and orbit quotients.
//!
//! Output depends only on the input, so identical inputs give byte-identical
//! text. Layout is left to Graphviz; nodes of equal size share a rank.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BruteForce, GameSpec, NimValue};
use crate::geometry::Geometry;
use crate::mask::SubsetMask;
use crate::structure::{orbit_quotient, StructureClass, StructureDiagram};

/// Largest ground set for which the full game digraph is drawn.
pub const GAME_DOT_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    Game,
    Structure,
    Orbit,
}

impl DiagramKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagramKind::Game => "game",
            DiagramKind::Structure => "structure",
            DiagramKind::Orbit => "orbit",
        }
    }
}

impl std::str::FromStr for DiagramKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "game" => Ok(DiagramKind::Game),
            "structure" => Ok(DiagramKind::Structure),
            "orbit" => Ok(DiagramKind::Orbit),
            _ => Err(Error::Input(format!(
                "unknown diagram kind {s:?} (expected game, structure or orbit)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelPolicy {
    Indices,
    #[default]
    Labels,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagramStyle {
    pub kind: DiagramKind,
    pub labels: LabelPolicy,
    pub nim: bool,
}

impl DiagramStyle {
    pub fn new(kind: DiagramKind) -> Self {
        DiagramStyle {
            kind,
            labels: LabelPolicy::Labels,
            nim: true,
        }
    }
}

/// `<instance-id>.<kind>.dot`
pub fn diagram_file_name(instance_id: &str, kind: DiagramKind) -> String {
    format!("{instance_id}.{}.dot", kind.as_str())
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn set_name(g: Option<&Geometry>, policy: LabelPolicy, set: SubsetMask) -> String {
    if set.is_empty() {
        return "∅".to_string();
    }
    match (g, policy) {
        (Some(g), LabelPolicy::Labels) => g.format_set(set),
        _ => set.to_string(),
    }
}

fn rank_hints(out: &mut String, nodes: &[(usize, String)]) {
    let mut by_size: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (size, id) in nodes {
        by_size.entry(*size).or_default().push(id);
    }
    for ids in by_size.values() {
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
}

/// Full game digraph: one node per reachable position labelled with the set
/// and its nim value, one edge per option.
pub fn emit_game_dot(spec: &GameSpec, labels: LabelPolicy) -> Result<String> {
    let n = spec.n();
    if n > GAME_DOT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: GAME_DOT_LIMIT,
            what: "game digraph output",
        });
    }
    let g = spec.geometry();
    let mut solver = BruteForce::new(spec)?;
    let mut positions = solver.reachable();
    positions.sort();
    let mut out = String::from("digraph game {\n  node [shape=plaintext];\n");
    let mut ranks = Vec::new();
    for &p in &positions {
        let nim = solver.nim(p)?;
        let _ = writeln!(
            out,
            "  p{} [label=\"{} *{nim}\"];",
            p.bits(),
            escape(&set_name(Some(g), labels, p))
        );
        ranks.push((p.len(), format!("p{}", p.bits())));
    }
    rank_hints(&mut out, &ranks);
    for &p in &positions {
        for o in spec.options(p) {
            let _ = writeln!(out, "  p{} -> p{};", p.bits(), o.bits());
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn nim_label(class: &StructureClass, nim: [NimValue; 2]) -> String {
    let part = |k: usize| {
        if class.realized[k] {
            nim[k].to_string()
        } else {
            format!("({})", nim[k])
        }
    };
    format!("{},{}", part(0), part(1))
}

fn shape(class: &StructureClass) -> &'static str {
    if class.parity == 0 {
        "triangle"
    } else {
        "invtriangle"
    }
}

/// Structure diagram or its orbit quotient, per `style.kind`.
///
/// Triangles pointing up are even classes, pointing down odd ones. The label
/// is `nim0,nim1`, with a value in parentheses when the class has no member of
/// that parity. `g` supplies element labels.
pub fn emit_structure_dot(
    diagram: &StructureDiagram,
    style: &DiagramStyle,
    g: Option<&Geometry>,
) -> Result<String> {
    if style.nim && !diagram.is_typed() {
        return Err(Error::TypesMissing);
    }
    let node_label = |c: &StructureClass| -> String {
        match c.nim {
            Some(nim) if style.nim => nim_label(c, nim),
            _ => set_name(g, style.labels, c.set),
        }
    };
    let mut out = String::new();
    match style.kind {
        DiagramKind::Game => {
            return Err(Error::Input(
                "game digraphs come from emit_game_dot".into(),
            ))
        }
        DiagramKind::Structure => {
            out.push_str("digraph structure {\n");
            let mut ranks = Vec::new();
            for (i, c) in diagram.classes.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  c{i} [shape={}, label=\"{}\", xlabel=\"{}\"];",
                    shape(c),
                    escape(&node_label(c)),
                    escape(&set_name(g, style.labels, c.set))
                );
                ranks.push((c.set.len(), format!("c{i}")));
            }
            rank_hints(&mut out, &ranks);
            for &(a, b) in &diagram.arrows {
                let _ = writeln!(out, "  c{a} -> c{b};");
            }
        }
        DiagramKind::Orbit => {
            let q = orbit_quotient(diagram)?;
            out.push_str("digraph orbit {\n");
            let mut ranks = Vec::new();
            for (k, &rep) in q.representatives.iter().enumerate() {
                let c = &diagram.classes[rep];
                let _ = writeln!(
                    out,
                    "  o{k} [shape={}, label=\"{}\", xlabel=\"{} orbit of {}\"];",
                    shape(c),
                    escape(&node_label(c)),
                    escape(&set_name(g, style.labels, c.set)),
                    q.orbit_sizes[k]
                );
                ranks.push((c.set.len(), format!("o{k}")));
            }
            rank_hints(&mut out, &ranks);
            for &(a, b) in &q.arrows {
                let _ = writeln!(out, "  o{a} -> o{b};");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Diagram of `kind` for a game.
pub fn emit(spec: &GameSpec, style: &DiagramStyle) -> Result<String> {
    match style.kind {
        DiagramKind::Game => emit_game_dot(spec, style.labels),
        _ => {
            let diagram = StructureDiagram::solve(spec)?;
            emit_structure_dot(&diagram, style, Some(spec.geometry()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{affine_geometry, point};

    fn three_in_line() -> GameSpec {
        let g = affine_geometry(&[point(&[-1]), point(&[0]), point(&[1])])
            .unwrap()
            .with_labels(Some(vec!["-1".into(), "0".into(), "1".into()]))
            .unwrap();
        GameSpec::full(g)
    }

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn game_digraph_of_three_in_line() {
        let dot = emit_game_dot(&three_in_line(), LabelPolicy::Labels).unwrap();
        assert_eq!(count(&dot, "[label="), 8);
        assert_eq!(count(&dot, "->"), 11);
        assert!(dot.contains("p0 [label=\"∅ *1\"]"));
        assert!(dot.contains("p1 [label=\"{-1} *2\"]"));
        assert!(dot.contains("p5 [label=\"{-1,1} *0\"]"));
        assert_eq!(dot, emit_game_dot(&three_in_line(), LabelPolicy::Labels).unwrap());
    }

    #[test]
    fn structure_and_orbit_diagrams() {
        let spec = three_in_line();
        let s = emit(&spec, &DiagramStyle::new(DiagramKind::Structure)).unwrap();
        assert_eq!(count(&s, "shape="), 4);
        assert_eq!(count(&s, "->"), 4);
        let o = emit(&spec, &DiagramStyle::new(DiagramKind::Orbit)).unwrap();
        assert_eq!(count(&o, "shape="), 3);
        assert!(o.contains("orbit of 2"));
    }

    #[test]
    fn untyped_diagram_is_refused() {
        let d = crate::structure::structure_digraph(&three_in_line());
        let err = emit_structure_dot(&d, &DiagramStyle::new(DiagramKind::Structure), None);
        assert!(matches!(err, Err(Error::TypesMissing)));
    }
}
