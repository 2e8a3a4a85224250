use convex_gen::catalog;
use convex_gen::dot::{
    diagram_file_name, emit, emit_game_dot, emit_structure_dot, DiagramKind, DiagramStyle,
    LabelPolicy,
};
use convex_gen::game::BruteForce;
use convex_gen::structure::orbit_quotient;
use convex_gen::{path_geometry, Error, GameSpec, StructureDiagram, SubsetMask};

fn nodes(dot: &str) -> Vec<&str> {
    dot.lines().filter(|l| l.contains("[") && !l.contains("->") && !l.contains("node [")).collect()
}

fn edges(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("->")).count()
}

#[test]
fn path_game_matches_the_reachable_dag() {
    let spec = GameSpec::full(path_geometry(4).unwrap());
    let bf = BruteForce::new(&spec).unwrap();
    let reachable = bf.reachable();
    let arcs: usize = reachable.iter().map(|&p| spec.options(p).len()).sum();
    let dot = emit_game_dot(&spec, LabelPolicy::Indices).unwrap();
    assert_eq!(nodes(&dot).len(), reachable.len());
    assert_eq!(edges(&dot), arcs);
}

#[test]
fn zero_move_game_is_a_single_node() {
    let g = convex_gen::Geometry::new(1, vec![SubsetMask::full(1)], None).unwrap();
    let dot = emit_game_dot(&GameSpec::full(g), LabelPolicy::Labels).unwrap();
    assert_eq!(nodes(&dot), ["  p0 [label=\"∅ *0\"];"]);
    assert_eq!(edges(&dot), 0);
}

#[test]
fn game_guard() {
    let spec = GameSpec::full(path_geometry(13).unwrap());
    assert!(matches!(
        emit_game_dot(&spec, LabelPolicy::Indices),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn structure_labels_follow_the_types() {
    let inst = catalog::three_branch_tree();
    let d = StructureDiagram::solve(&inst.spec).unwrap();
    let dot = emit_structure_dot(&d, &DiagramStyle::new(DiagramKind::Structure), None).unwrap();
    let lines = nodes(&dot);
    assert_eq!(lines.len(), 8);
    assert_eq!(edges(&dot), d.arrows.len());
    for (line, c) in lines.iter().zip(&d.classes) {
        let [a, b] = c.nim.unwrap();
        let show = |k: usize, v: u32| if c.realized[k] { v.to_string() } else { format!("({v})") };
        assert!(line.contains(&format!("label=\"{},{}\"", show(0, a), show(1, b))), "{line}");
        let shape = if c.parity == 0 { "shape=triangle" } else { "shape=invtriangle" };
        assert!(line.contains(shape), "{line}");
    }
}

#[test]
fn orbit_quotient_nodes_and_sizes() {
    let inst = catalog::three_in_line();
    let d = StructureDiagram::solve(&inst.spec).unwrap();
    let q = orbit_quotient(&d).unwrap();
    let dot = emit(&inst.spec, &DiagramStyle::new(DiagramKind::Orbit)).unwrap();
    assert_eq!(nodes(&dot).len(), q.representatives.len());
    assert_eq!(nodes(&dot).len(), 3);
    assert_eq!(edges(&dot), q.arrows.len());
    assert!(dot.contains("xlabel=\"{-1,0} orbit of 2\""));
}

#[test]
fn output_is_stable_and_named() {
    let inst = catalog::seven_points();
    for kind in [DiagramKind::Game, DiagramKind::Structure, DiagramKind::Orbit] {
        let style = DiagramStyle::new(kind);
        assert_eq!(emit(&inst.spec, &style).unwrap(), emit(&inst.spec, &style).unwrap());
    }
    assert_eq!(diagram_file_name("seven_points", DiagramKind::Orbit), "seven_points.orbit.dot");
}
