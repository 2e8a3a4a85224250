//! Small named instances used by tests, benchmarks and the bundled data files.

use crate::builders::{affine_geometry, deleted_affine, parse_rational, point, tree_vertex_geometry, PointConfig, TreeSpec};
use crate::game::GameSpec;
use crate::io::{Instance, Source};
use crate::mask::SubsetMask;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn points_instance(id: &str, cfg: PointConfig, winning: SubsetMask) -> Instance {
    let g = deleted_affine(&cfg).expect("catalog points are valid");
    Instance {
        id: id.to_string(),
        spec: GameSpec::new(g, winning).expect("catalog winning set is valid"),
        source: Source::Points(cfg),
    }
}

fn tree_instance(id: &str, tree: TreeSpec, winning: SubsetMask) -> Instance {
    let g = tree_vertex_geometry(&tree).expect("catalog tree is valid");
    Instance {
        id: id.to_string(),
        spec: GameSpec::new(g, winning).expect("catalog winning set is valid"),
        source: Source::Tree(tree),
    }
}

/// The points -1, 0, 1 on a line, labelled by coordinate, `W = S`.
pub fn three_in_line() -> Instance {
    let cfg = PointConfig::new(vec![point(&[-1]), point(&[0]), point(&[1])])
        .and_then(|c| c.with_labels(labels(&["-1", "0", "1"])))
        .unwrap();
    points_instance("three_in_line", cfg, SubsetMask::full(3))
}

/// Seven labelled points in the plane with `Ex(S) = {a,b,c,d}`, `W = S`.
pub fn seven_points() -> Instance {
    let f = vec![parse_rational("5/2").unwrap(), parse_rational("1").unwrap()];
    let pts = vec![
        point(&[0, 0]),
        point(&[1, 3]),
        point(&[5, 2]),
        point(&[4, 1]),
        point(&[2, 2]),
        f,
        point(&[1, 2]),
    ];
    let cfg = PointConfig::new(pts)
        .and_then(|c| c.with_labels(labels(&["a", "b", "c", "d", "e", "f", "g"])))
        .unwrap();
    points_instance("seven_points", cfg, SubsetMask::full(7))
}

/// Thirteen integer points whose game with `W = {(0,0)}` has nim value 6.
pub fn nim_six_points() -> Instance {
    let coords: [[i64; 2]; 13] = [
        [-4, -3],
        [-4, 0],
        [-4, 4],
        [-3, -4],
        [-3, -1],
        [-2, 2],
        [-1, -3],
        [0, 0],
        [0, 1],
        [0, 2],
        [2, -4],
        [2, 2],
        [3, -3],
    ];
    let cfg = PointConfig::new(coords.iter().map(|c| point(c)).collect()).unwrap();
    points_instance("nim6_points", cfg, SubsetMask::singleton(7))
}

/// Four points `1=(0,1), 2=(0,0), 3=(-1,0), 4=(1,0)` with `W = {1,2}`,
/// optionally with some of them deleted.
pub fn four_points_deleted(deleted: &[usize]) -> Instance {
    let pts = vec![point(&[0, 1]), point(&[0, 0]), point(&[-1, 0]), point(&[1, 0])];
    let cfg = PointConfig::new(pts)
        .and_then(|c| c.with_labels(labels(&["1", "2", "3", "4"])))
        .and_then(|c| c.with_deleted(deleted.iter().copied().collect()))
        .unwrap();
    let surviving = cfg.surviving();
    let winning: SubsetMask = surviving
        .iter()
        .enumerate()
        .filter(|(_, &orig)| orig <= 1)
        .map(|(local, _)| local)
        .collect();
    points_instance("four_points", cfg, winning)
}

/// Twelve-vertex tree with goal vertices `{1,3,6,8}`.
pub fn three_branch_tree() -> Instance {
    let edges = vec![
        (0, 1),
        (1, 2),
        (0, 3),
        (3, 4),
        (4, 5),
        (2, 6),
        (6, 7),
        (1, 8),
        (8, 9),
        (9, 10),
        (10, 11),
    ];
    let tree = TreeSpec::new(12, edges).unwrap();
    tree_instance("three_branch_tree", tree, SubsetMask::from_elements([1, 3, 6, 8]))
}

/// Ten-vertex spider centred at the single goal vertex 0.
pub fn spider_tree() -> Instance {
    let edges = vec![(0, 1), (1, 2), (2, 3), (0, 4), (0, 5), (0, 6), (6, 7), (0, 8), (8, 9)];
    let tree = TreeSpec::new(10, edges).unwrap();
    tree_instance("spider_tree", tree, SubsetMask::singleton(0))
}

/// Undeleted affine geometry on integer points, `W = S`.
pub fn integer_points(id: &str, coords: &[&[i64]]) -> Instance {
    let pts: Vec<_> = coords.iter().map(|c| point(c)).collect();
    let g = affine_geometry(&pts).unwrap();
    let cfg = PointConfig::new(pts).unwrap();
    Instance {
        id: id.to_string(),
        spec: GameSpec::full(g),
        source: Source::Points(cfg),
    }
}
