mod common;

use common::m;
use convex_gen::builders::{deleted_affine, point, PointConfig};
use convex_gen::catalog;
use convex_gen::closed::{
    nim_closed, nim_extreme_w, nim_path_multi, nim_path_single, nim_tree_multi, nim_tree_single,
    reduce_line, tree_signature_multi, tree_signature_single, tree_witnesses, ClosedFamily,
    Signature,
};
use convex_gen::explore::{random_tree, Rng};
use convex_gen::structure::{max_nongenerating, StructureDiagram};
use convex_gen::{affine_geometry, nim_bruteforce, tree_vertex_geometry, Error, GameSpec, SubsetMask, TreeSpec};

fn convex_position(hull: usize, interior: usize) -> GameSpec {
    let ring = [[3, 0], [2, 2], [0, 3], [-2, 2], [-3, 0], [-2, -2], [0, -3], [2, -2]];
    let inner = [[0, 0], [1, 0], [0, 1], [-1, 0]];
    let mut pts: Vec<_> = (0..hull).map(|k| point(&ring[k * 8 / hull])).collect();
    pts.extend(inner[..interior].iter().map(|p| point(p)));
    GameSpec::full(affine_geometry(&pts).unwrap())
}

#[test]
fn extreme_winning_examples() {
    let five = convex_position(5, 0);
    assert_eq!(nim_extreme_w(&five.with_winning(m(&[2])).unwrap()).unwrap(), 1);
    let six = convex_position(6, 0);
    assert_eq!(nim_extreme_w(&six.with_winning(m(&[0, 2, 4])).unwrap()).unwrap(), 0);
    let seven = convex_position(4, 3);
    assert_eq!(nim_extreme_w(&seven.with_winning(m(&[0, 1])).unwrap()).unwrap(), 1);
    // an interior goal point is outside the hypothesis
    assert!(matches!(
        nim_extreme_w(&seven.with_winning(m(&[4])).unwrap()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn tree_signature_examples() {
    let inst = catalog::three_branch_tree();
    let convex_gen::Source::Tree(t) = &inst.source else { unreachable!() };
    assert_eq!(tree_signature_multi(t, inst.spec.winning()).unwrap(), Signature::new(2, 1));
    assert_eq!(nim_tree_multi(t, inst.spec.winning()).unwrap(), 3);

    let star = TreeSpec::star(3).unwrap();
    assert_eq!(tree_signature_multi(&star, m(&[1, 2, 3])).unwrap(), Signature::new(0, 3));
    assert!(tree_signature_multi(&star, m(&[1])).is_err());

    let p7 = TreeSpec::path(7).unwrap();
    assert_eq!(tree_signature_multi(&p7, m(&[1, 4])).unwrap(), Signature::new(1, 1));
    assert_eq!(nim_tree_multi(&p7, m(&[1, 4])).unwrap(), 0);
    let p4 = TreeSpec::path(4).unwrap();
    assert_eq!(tree_signature_multi(&p4, m(&[0, 3])).unwrap(), Signature::new(0, 2));
    assert_eq!(nim_tree_multi(&p4, m(&[0, 3])).unwrap(), 0);
}

#[test]
fn single_goal_examples() {
    let inst = catalog::spider_tree();
    let convex_gen::Source::Tree(t) = &inst.source else { unreachable!() };
    assert_eq!(tree_signature_single(t, 0).unwrap(), Signature::new(2, 3));
    assert_eq!(nim_tree_single(t, 0).unwrap(), 3);

    let one = TreeSpec::new(1, vec![]).unwrap();
    assert_eq!(tree_signature_single(&one, 0).unwrap(), Signature::new(0, 0));
    assert_eq!(nim_tree_single(&one, 0).unwrap(), 1);

    let p3 = TreeSpec::path(3).unwrap();
    assert_eq!(tree_signature_single(&p3, 1).unwrap(), Signature::new(0, 2));
    assert_eq!(nim_tree_single(&p3, 1).unwrap(), 2);

    // interior vertex k (1-based) of an odd path with k odd
    let p7 = TreeSpec::path(7).unwrap();
    assert_eq!(tree_signature_single(&p7, 2).unwrap(), Signature::new(2, 0));
}

#[test]
fn path_examples() {
    assert_eq!(nim_path_multi(3, &[1, 3]).unwrap(), 1);
    assert_eq!(nim_path_multi(5, &[3, 5]).unwrap(), 1);
    assert_eq!(nim_path_multi(4, &[2, 4]).unwrap(), 3);
    assert_eq!(nim_path_single(4, 1).unwrap(), 2);
    assert_eq!(nim_path_single(5, 3).unwrap(), 1);
    assert_eq!(nim_path_single(6, 3).unwrap(), 3);
    assert!(nim_path_multi(4, &[3, 2]).is_err());
    assert!(nim_path_multi(4, &[2, 5]).is_err());
    assert!(nim_path_multi(4, &[2]).is_err());
    assert!(nim_path_single(4, 0).is_err());
}

#[test]
fn line_reduction_matches_brute_force_with_deletions() {
    for total in 1..=7usize {
        let pts: Vec<_> = (0..total as i64).map(|x| point(&[x])).collect();
        for deleted in 0u64..(1 << total) {
            let deleted = SubsetMask(deleted);
            if deleted.len() == total {
                continue;
            }
            let cfg = PointConfig::new(pts.clone()).unwrap().with_deleted(deleted).unwrap();
            let g = deleted_affine(&cfg).unwrap();
            let n = g.n();
            for w in 1u64..(1 << n) {
                let w = SubsetMask(w);
                let spec = GameSpec::new(g.clone(), w).unwrap();
                let closed = reduce_line(&cfg, w).unwrap().nim().unwrap();
                assert_eq!(closed, nim_bruteforce(&spec).unwrap(), "{total} points, deleted {deleted}, W {w}");
            }
        }
    }
}

#[test]
fn line_reduction_rejects_the_plane() {
    let inst = catalog::seven_points();
    let convex_gen::Source::Points(cfg) = &inst.source else { unreachable!() };
    assert!(matches!(reduce_line(cfg, m(&[0])), Err(Error::NoClosedForm(_))));
}

#[test]
fn dispatch_picks_the_right_family() {
    assert_eq!(nim_closed(&catalog::three_in_line()).unwrap(), (1, ClosedFamily::Line));
    assert_eq!(nim_closed(&catalog::spider_tree()).unwrap(), (3, ClosedFamily::Tree));
    let seven = catalog::seven_points();
    let extreme = seven.with_winning(m(&[0, 1])).unwrap();
    assert_eq!(nim_closed(&extreme).unwrap(), (1, ClosedFamily::ExtremeWinning));
    assert!(matches!(nim_closed(&seven), Err(Error::NoClosedForm(_))));
    assert!(matches!(nim_closed(&catalog::nim_six_points()), Err(Error::NoClosedForm(_))));
}

#[test]
fn witness_sets_match_the_structure_solver() {
    let mut rng = Rng::new(2024);
    let mut checked = 0;
    while checked < 300 {
        let n = rng.range(2, 12) as usize;
        let t = random_tree(&mut rng, n).unwrap();
        let w = SubsetMask(1 + rng.below(SubsetMask::full(n).bits()));
        if w.len() < 2 {
            continue;
        }
        let wit = tree_witnesses(&t, w).unwrap();
        let spec = GameSpec::new(tree_vertex_geometry(&t).unwrap(), w).unwrap();
        let mut from_tree: Vec<SubsetMask> = wit.sets.iter().map(|s| s.1).collect();
        from_tree.sort();
        let mut solved = max_nongenerating(&spec);
        solved.sort();
        assert_eq!(from_tree, solved, "tree {:?} W={w}", t.edges);
        let d = StructureDiagram::solve(&spec).unwrap();
        assert_eq!(wit.frattini(t.ground()), d.frattini);
        assert_eq!(d.classes.len(), 1 << wit.extreme.len());
        for c in &d.classes {
            let a = wit.extreme - c.set;
            assert_eq!(wit.m_of(t.ground(), a), c.set);
        }
        checked += 1;
    }
}
