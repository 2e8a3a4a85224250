#![allow(dead_code)]

use std::sync::OnceLock;

use convex_gen::explore::{enumerate_geometries, random_points, random_tree, Rng};
use convex_gen::{affine_geometry, tree_vertex_geometry, Geometry, SubsetMask};

pub fn m(elements: &[usize]) -> SubsetMask {
    SubsetMask::from_elements(elements.iter().copied())
}

pub fn small_geometries() -> &'static [Geometry] {
    static ALL: OnceLock<Vec<Geometry>> = OnceLock::new();
    ALL.get_or_init(|| {
        (1..=4)
            .flat_map(|n| enumerate_geometries(n, None).unwrap())
            .collect()
    })
}

/// A geometry picked by `seed`: an enumerated one on at most 4 points, a
/// random planar point set on at most 7 points, or a random tree on at most 8
/// vertices.
pub fn geometry_from_seed(seed: u64) -> Geometry {
    let mut rng = Rng::new(seed);
    match rng.below(3) {
        0 => {
            let all = small_geometries();
            all[rng.below(all.len() as u64) as usize].clone()
        }
        1 => {
            let n = rng.range(1, 7) as usize;
            let cfg = random_points(&mut rng, n, 2, 3).unwrap();
            affine_geometry(&cfg.points).unwrap()
        }
        _ => {
            let n = rng.range(1, 8) as usize;
            tree_vertex_geometry(&random_tree(&mut rng, n).unwrap()).unwrap()
        }
    }
}
