use std::collections::BTreeMap;
use std::path::PathBuf;

use convex_gen::explore::{
    cross_validate, cross_validate_with, random_instance, spectrum, CampaignConfig,
    InstanceSource, NimSolver, RandomKind, StructureSolver, WinningPolicy,
};
use convex_gen::io::{load_instance, Instance};
use convex_gen::{validate_axioms, Error, NimValue, Result};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn config(source: InstanceSource, winning: WinningPolicy, solvers: &[&str]) -> CampaignConfig {
    CampaignConfig {
        source,
        seed: 42,
        winning,
        solvers: solvers.iter().map(|s| s.to_string()).collect(),
        sink: None,
    }
}

#[test]
fn enumerated_geometries_agree() {
    let c = config(
        InstanceSource::Enumerated { min_n: 1, max_n: 4, empty_convex: None },
        WinningPolicy::All,
        &["brute", "structure"],
    );
    let report = cross_validate(&c).unwrap();
    assert_eq!(report.disagreements, 0);
    assert_eq!(report.instances, 2 + 4 * 3 + 10 * 7 + 44 * 15);
    assert_eq!(report.comparisons, report.instances);
}

#[test]
fn random_trees_agree_across_three_solvers() {
    let c = config(
        InstanceSource::RandomTree { count: 150, min_size: 1, max_size: 11 },
        WinningPolicy::RandomK { k: 2, samples: 3 },
        &["brute", "structure", "closed"],
    );
    let report = cross_validate(&c).unwrap();
    assert_eq!(report.disagreements, 0);
    assert!(report.records.iter().all(|r| r.values.values().all(|v| v.is_some())));
    assert_eq!(report.comparisons, 3 * report.instances);
}

/// Adds one to the true value whenever the winning set is a singleton.
struct OffByOne;

impl NimSolver for OffByOne {
    fn name(&self) -> &str {
        "off-by-one"
    }
    fn solve(&self, instance: &Instance) -> Result<Option<NimValue>> {
        let v = convex_gen::nim_bruteforce(&instance.spec)?;
        Ok(Some(if instance.spec.winning().len() == 1 { v + 1 } else { v }))
    }
}

#[test]
fn corrupted_solver_is_caught_and_dumped() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(
        InstanceSource::Enumerated { min_n: 2, max_n: 3, empty_convex: None },
        WinningPolicy::All,
        &[],
    );
    c.sink = Some(dir.path().to_path_buf());
    let report = cross_validate_with(&c, &[&StructureSolver, &OffByOne]).unwrap();
    assert!(report.disagreements > 0);
    let first = report.first_counterexample.clone().unwrap();
    let record = report.records.iter().find(|r| r.id == first).unwrap();
    assert_eq!(record.winning_size, 1);
    assert!(!record.agree);

    // the dump replays to the same disagreement
    let dumped = load_instance(&dir.path().join("counterexample.json"), None).unwrap();
    assert_eq!(dumped.spec.winning().len(), 1);
    let truth = StructureSolver.solve(&dumped).unwrap().unwrap();
    assert_eq!(OffByOne.solve(&dumped).unwrap().unwrap(), truth + 1);
    assert_eq!(record.values["structure"], Some(truth));

    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("id,n,|W|,structure,off-by-one,agree\n"));
    assert_eq!(csv.lines().count(), report.instances + 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut c = config(
        InstanceSource::RandomPoints {
            count: 20,
            min_size: 3,
            max_size: 8,
            dim: 2,
            coord_range: 4,
        },
        WinningPolicy::RandomK { k: 2, samples: 2 },
        &["brute", "structure", "closed"],
    );
    c.sink = Some(a.path().to_path_buf());
    cross_validate(&c).unwrap();
    c.sink = Some(b.path().to_path_buf());
    cross_validate(&c).unwrap();
    for f in ["report.json", "report.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    c.seed = 43;
    c.sink = None;
    let other = cross_validate(&c).unwrap();
    let first: CampaignConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(first, c);
    assert_eq!(other.disagreements, 0);
}

#[test]
fn unwritable_sink_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let mut c = config(
        InstanceSource::Enumerated { min_n: 1, max_n: 2, empty_convex: None },
        WinningPolicy::All,
        &["brute"],
    );
    c.sink = Some(blocker.join("sub"));
    assert!(matches!(cross_validate(&c), Err(Error::Io(_))));
}

#[test]
fn tree_spectrum_stays_below_four() {
    let c = config(
        InstanceSource::AllTrees { min_n: 1, max_n: 8 },
        WinningPolicy::All,
        &["closed"],
    );
    let s = spectrum(&c).unwrap();
    assert!(s.max().unwrap() <= 3);
    assert_eq!(s.counts.values().sum::<usize>() + s.unsolved, s.instances);
    assert_eq!(s.unsolved, 0);
    assert_eq!(s.counts.keys().copied().collect::<Vec<_>>(), [0, 1, 2, 3]);
}

#[test]
fn planar_spectrum_reaches_six() {
    let c = CampaignConfig::load(&data("campaign_planar_spectrum.json")).unwrap();
    let s = spectrum(&c).unwrap();
    assert_eq!(s.counts.get(&6), Some(&1));
    assert_eq!(s.witnesses[&6].id, "nim6_points:W7");
}

#[test]
fn two_point_spectrum_by_hand() {
    // {S}: τ(∅) = S, every W is generated before the first move: 0, 0, 0.
    // {{0},S}: W={0} already generated: 0. W={1} or S: picking 1 ends the
    //   game, picking 0 leaves one move, so mex{0,1} = 2 twice.
    // {∅,{0},S}: W={0}: either pick generates, 1. W={1} or S: 2 as above.
    // all four subsets: W={0} or {1}: 2. W=S: two moves always, 0.
    let c = config(
        InstanceSource::Enumerated { min_n: 2, max_n: 2, empty_convex: None },
        WinningPolicy::All,
        &["brute"],
    );
    let s = spectrum(&c).unwrap();
    let want: BTreeMap<NimValue, usize> = [(0, 5), (1, 1), (2, 6)].into();
    assert_eq!(s.counts, want);
}

#[test]
fn random_instances() {
    let a = random_instance(RandomKind::Points, 13, 2, 5).unwrap();
    let b = random_instance(RandomKind::Points, 13, 2, 5).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let g = a.geometry();
    assert!(validate_axioms(g.n(), g.convex_sets()).unwrap().is_valid());
    let t = random_instance(RandomKind::Tree, 1, 0, 0).unwrap();
    assert_eq!(t.spec.winning().to_vec(), [0]);
    assert!(random_instance(RandomKind::Points, 40, 2, 0).is_err());
}
