use convex_gen::explore::enumerate_geometries;
use convex_gen::{validate_axioms, Geometry, SubsetMask};

/// All convex geometries on `n` points up to isomorphism, by testing every
/// family that contains the ground set.
fn oracle(n: usize, empty_convex: Option<bool>) -> Vec<Geometry> {
    let subsets = 1u64 << n;
    let full = subsets - 1;
    let mut reps: Vec<Geometry> = Vec::new();
    for rest in 0..(1u64 << full) {
        let family: Vec<SubsetMask> = (0..full)
            .filter(|&s| rest >> s & 1 == 1)
            .chain([full])
            .map(SubsetMask)
            .collect();
        if empty_convex.is_some_and(|e| e != family.contains(&SubsetMask::EMPTY)) {
            continue;
        }
        if !validate_axioms(n, &family).unwrap().is_valid() {
            continue;
        }
        let g = Geometry::new(n, family, None).unwrap();
        if reps.iter().all(|r| r.isomorphic(&g).is_none()) {
            reps.push(g);
        }
    }
    reps
}

#[test]
fn counts_match_exhaustive_search() {
    for n in 1..=4 {
        for flag in [None, Some(true), Some(false)] {
            let got = enumerate_geometries(n, flag).unwrap();
            let want = oracle(n, flag);
            assert_eq!(got.len(), want.len(), "n={n} empty={flag:?}");
            for g in &want {
                assert!(
                    got.iter().any(|r| r.isomorphic(g).is_some()),
                    "n={n}: {g:?} has no representative"
                );
            }
        }
    }
}

#[test]
fn representatives_are_valid_and_pairwise_distinct() {
    for n in 1..=5 {
        let reps = enumerate_geometries(n, None).unwrap();
        for (i, a) in reps.iter().enumerate() {
            assert!(validate_axioms(n, a.convex_sets()).unwrap().is_valid());
            for b in &reps[i + 1..] {
                assert!(a.isomorphic(b).is_none(), "{a:?} ~ {b:?}");
            }
        }
    }
}

#[test]
fn small_counts() {
    assert_eq!(enumerate_geometries(1, None).unwrap().len(), 2);
    assert_eq!(enumerate_geometries(2, None).unwrap().len(), 4);
    assert_eq!(enumerate_geometries(3, Some(false)).unwrap().len(), 4);
}

#[test]
fn ordering_is_canonical() {
    let a = enumerate_geometries(4, None).unwrap();
    let b = enumerate_geometries(4, None).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].convex_sets().len() <= w[1].convex_sets().len()));
    assert!(enumerate_geometries(6, None).is_err());
}
