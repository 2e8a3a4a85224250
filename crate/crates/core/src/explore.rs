//! Enumeration of small geometries and trees, seeded random instances, and
//! campaigns that run several solvers over an instance stream.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders::{affine_geometry, tree_vertex_geometry, PointConfig, TreeSpec, AFFINE_POINT_LIMIT};
use crate::closed::nim_closed;
use crate::error::{Error, Result};
use crate::game::{nim_bruteforce, GameSpec, NimValue, BRUTE_FORCE_LIMIT};
use crate::geometry::Geometry;
use crate::io::{load_instance, Instance, InstanceFile, Source};
use crate::mask::SubsetMask;
use crate::structure::nim_structure;

pub const ENUMERATION_LIMIT: usize = 5;
pub const TREE_ENUMERATION_LIMIT: usize = 16;
/// Largest random tree or point set.
pub const RANDOM_SIZE_LIMIT: usize = 20;

// ---------------------------------------------------------------------------
// geometries up to isomorphism

struct PermTables {
    /// `tables[p][byte][value]`: image of the subsets in that byte of a family
    /// bitset under permutation `p`.
    tables: Vec<Vec<[u64; 256]>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl PermTables {
    fn new(n: usize) -> Self {
        let subsets = 1usize << n;
        let bytes = subsets.div_ceil(8);
        let tables = permutations(n)
            .into_iter()
            .map(|p| {
                let image: Vec<u64> = (0..subsets as u64)
                    .map(|s| SubsetMask(s).map(&p).bits())
                    .collect();
                (0..bytes)
                    .map(|b| {
                        let mut t = [0u64; 256];
                        for (v, slot) in t.iter_mut().enumerate() {
                            for j in 0..8 {
                                let s = b * 8 + j;
                                if v >> j & 1 == 1 && s < subsets {
                                    *slot |= 1 << image[s];
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        PermTables { tables }
    }

    fn is_orbit_minimal(&self, family: u64) -> bool {
        self.tables.iter().all(|t| {
            let mut image = 0u64;
            for (b, table) in t.iter().enumerate() {
                image |= table[(family >> (8 * b) & 0xff) as usize];
            }
            image >= family
        })
    }
}

/// Every convex geometry on `n <= 5` points up to isomorphism.
///
/// `empty_convex` filters on whether `∅` is convex (`None` keeps both kinds).
/// Representatives are the orbit-minimal families, ordered by number of
/// convex sets and then by family bitset.
pub fn enumerate_geometries(n: usize, empty_convex: Option<bool>) -> Result<Vec<Geometry>> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
            what: "geometry enumeration",
        });
    }
    let full = (1u64 << n) - 1;
    // subsets decided in order of decreasing size, so every superset of the
    // current one is already decided
    let mut order: Vec<u64> = (0..full).collect();
    order.sort_by_key(|&s| (std::cmp::Reverse(s.count_ones()), s));

    let perms = PermTables::new(n);
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 1u64 << full)];
    while let Some((idx, family)) = stack.pop() {
        if idx == order.len() {
            let has_empty = family & 1 == 1;
            if empty_convex.is_none_or(|e| e == has_empty) && perms.is_orbit_minimal(family) {
                out.push(family);
            }
            continue;
        }
        let x = order[idx];
        let mut meet = full;
        let mut any = false;
        let mut accessible = false;
        for i in 0..n {
            if x >> i & 1 == 0 && family >> (x | 1 << i) & 1 == 1 {
                accessible = true;
            }
        }
        let mut rest = family;
        while rest != 0 {
            let k = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            if k != x && k & x == x {
                meet &= k;
                any = true;
            }
        }
        let forced = any && meet == x;
        if forced {
            if accessible {
                stack.push((idx + 1, family | 1 << x));
            }
        } else {
            if accessible {
                stack.push((idx + 1, family | 1 << x));
            }
            stack.push((idx + 1, family));
        }
    }
    out.sort_by_key(|&f| (f.count_ones(), f));
    Ok(out
        .into_iter()
        .map(|f| {
            let sets = (0..=full).filter(|&s| f >> s & 1 == 1).map(SubsetMask).collect();
            Geometry::from_valid(n, sets, None)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// trees up to isomorphism

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| rooted_code(adj, u, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

/// Isomorphism-invariant code: the least rooted code over all roots.
pub fn tree_code(tree: &TreeSpec) -> String {
    let mut adj = vec![Vec::new(); tree.n];
    for &(a, b) in &tree.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..tree.n)
        .map(|r| rooted_code(&adj, r, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// Every tree on `n` vertices up to isomorphism, ordered by [`tree_code`].
pub fn enumerate_trees(n: usize) -> Result<Vec<TreeSpec>> {
    if n == 0 {
        return Err(Error::GroundSetSize(0));
    }
    if n > TREE_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: TREE_ENUMERATION_LIMIT,
            what: "tree enumeration",
        });
    }
    let mut level = vec![TreeSpec::new(1, Vec::new())?];
    for k in 1..n {
        let mut next = BTreeMap::new();
        for t in &level {
            for v in 0..k {
                let mut edges = t.edges.clone();
                edges.push((v, k));
                let grown = TreeSpec::new(k + 1, edges)?;
                next.entry(tree_code(&grown)).or_insert(grown);
            }
        }
        level = next.into_values().collect();
    }
    let mut keyed: Vec<(String, TreeSpec)> =
        level.into_iter().map(|t| (tree_code(&t), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

// ---------------------------------------------------------------------------
// random instances

/// SplitMix64 seeded directly with the seed (state `x = seed`; each step adds
/// `0x9e3779b97f4a7c15` and mixes with multipliers `0xbf58476d1ce4e5b9`,
/// `0x94d049bb133111eb` and shifts 30, 27, 31). Bounded draws use the
/// multiply-shift map `(x * n) >> 64`.
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish draw from `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Draw from the closed range `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo) as u64 + 1) as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomKind {
    Tree,
    Points,
}

fn check_random_size(size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::GroundSetSize(size));
    }
    if size > RANDOM_SIZE_LIMIT {
        return Err(Error::TooLarge {
            n: size,
            limit: RANDOM_SIZE_LIMIT,
            what: "random instance",
        });
    }
    Ok(())
}

/// Uniform labelled tree from a random Prüfer sequence.
pub fn random_tree(rng: &mut Rng, n: usize) -> Result<TreeSpec> {
    check_random_size(n)?;
    if n <= 2 {
        let edges = if n == 2 { vec![(0, 1)] } else { Vec::new() };
        return TreeSpec::new(n, edges);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.below(n as u64) as usize).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    TreeSpec::new(n, edges)
}

/// `n` distinct integer points with coordinates in `-range..=range`.
pub fn random_points(rng: &mut Rng, n: usize, dim: usize, range: i64) -> Result<PointConfig> {
    check_random_size(n)?;
    if n > AFFINE_POINT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: AFFINE_POINT_LIMIT,
            what: "affine geometry",
        });
    }
    if dim == 0 || range < 0 {
        return Err(Error::Precondition("need dim >= 1 and range >= 0".into()));
    }
    let cells = (2 * range as u128 + 1).checked_pow(dim as u32);
    if cells.is_some_and(|c| c < n as u128) {
        return Err(Error::Precondition(format!(
            "cannot place {n} distinct points in [-{range},{range}]^{dim}"
        )));
    }
    let mut pts: Vec<Vec<i64>> = Vec::with_capacity(n);
    while pts.len() < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.range(-range, range)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointConfig::new(pts.iter().map(|p| crate::builders::point(p)).collect())
}

/// A nonempty subset of `0..n`, uniform over the `2^n - 1` choices.
pub fn random_winning(rng: &mut Rng, n: usize) -> SubsetMask {
    let full = SubsetMask::full(n).bits();
    SubsetMask(1 + rng.below(full))
}

/// A deterministic instance with a uniformly random nonempty winning set.
pub fn random_instance(kind: RandomKind, size: usize, dim: usize, seed: u64) -> Result<Instance> {
    let mut rng = Rng::new(seed);
    let base = random_base(&mut rng, kind, size, dim, 10, format!("{kind:?}-{seed}").to_lowercase())?;
    let w = random_winning(&mut rng, size);
    base.with_winning(w)
}

fn random_base(
    rng: &mut Rng,
    kind: RandomKind,
    size: usize,
    dim: usize,
    range: i64,
    id: String,
) -> Result<Instance> {
    let (g, source) = match kind {
        RandomKind::Tree => {
            let t = random_tree(rng, size)?;
            (tree_vertex_geometry(&t)?, Source::Tree(t))
        }
        RandomKind::Points => {
            let cfg = random_points(rng, size, dim, range)?;
            (affine_geometry(&cfg.points)?, Source::Points(cfg))
        }
    };
    Ok(Instance {
        id,
        spec: GameSpec::full(g),
        source,
    })
}

// ---------------------------------------------------------------------------
// campaigns

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSource {
    /// All geometries on `min_n..=max_n` points up to isomorphism.
    Enumerated {
        #[serde(default = "one")]
        min_n: usize,
        max_n: usize,
        #[serde(default)]
        empty_convex: Option<bool>,
    },
    /// All trees on `min_n..=max_n` vertices up to isomorphism.
    AllTrees {
        #[serde(default = "one")]
        min_n: usize,
        max_n: usize,
    },
    RandomTree {
        count: usize,
        #[serde(default = "one")]
        min_size: usize,
        max_size: usize,
    },
    RandomPoints {
        count: usize,
        #[serde(default = "one")]
        min_size: usize,
        max_size: usize,
        #[serde(default = "two")]
        dim: usize,
        #[serde(default = "ten")]
        coord_range: i64,
    },
    File {
        paths: Vec<PathBuf>,
    },
}

fn one() -> usize {
    1
}
fn two() -> usize {
    2
}
fn ten() -> i64 {
    10
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WinningPolicy {
    /// Every nonempty subset of the ground set.
    #[default]
    All,
    /// `samples` random `k`-subsets (`k` clamped to the ground set size).
    RandomK {
        k: usize,
        #[serde(default = "one")]
        samples: usize,
    },
    /// The listed elements, or the instance's own winning set when absent.
    Fixed {
        #[serde(default)]
        set: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub source: InstanceSource,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub winning: WinningPolicy,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<String>,
    /// Directory receiving `report.json`, `report.csv` and, on disagreement,
    /// `counterexample.json`.
    #[serde(default)]
    pub sink: Option<PathBuf>,
}

fn default_solvers() -> Vec<String> {
    vec!["brute".into(), "structure".into(), "closed".into()]
}

impl CampaignConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: CampaignConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Reads a config; relative instance paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut c = Self::parse(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let InstanceSource::File { paths } = &mut c.source {
            for p in paths.iter_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.solvers.is_empty() {
            return Err(Error::Input("no solvers listed".into()));
        }
        for s in &self.solvers {
            solver_by_name(s)?;
        }
        if let WinningPolicy::RandomK { k: 0, .. } = self.winning {
            return Err(Error::EmptyWinningSet);
        }
        Ok(())
    }

    /// The instance stream: base instances expanded by the winning policy.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        let mut rng = Rng::new(self.seed);
        let mut bases = Vec::new();
        match &self.source {
            InstanceSource::Enumerated {
                min_n,
                max_n,
                empty_convex,
            } => {
                for n in *min_n..=*max_n {
                    for (i, g) in enumerate_geometries(n, *empty_convex)?.into_iter().enumerate() {
                        bases.push(Instance {
                            id: format!("geo-n{n}-{i:03}"),
                            spec: GameSpec::full(g),
                            source: Source::Family,
                        });
                    }
                }
            }
            InstanceSource::AllTrees { min_n, max_n } => {
                for n in *min_n..=*max_n {
                    for (i, t) in enumerate_trees(n)?.into_iter().enumerate() {
                        bases.push(Instance {
                            id: format!("tree-n{n}-{i:03}"),
                            spec: GameSpec::full(tree_vertex_geometry(&t)?),
                            source: Source::Tree(t),
                        });
                    }
                }
            }
            InstanceSource::RandomTree {
                count,
                min_size,
                max_size,
            } => {
                for i in 0..*count {
                    let size = draw_size(&mut rng, *min_size, *max_size)?;
                    let id = format!("tree-{i:04}");
                    bases.push(random_base(&mut rng, RandomKind::Tree, size, 0, 0, id)?);
                }
            }
            InstanceSource::RandomPoints {
                count,
                min_size,
                max_size,
                dim,
                coord_range,
            } => {
                for i in 0..*count {
                    let size = draw_size(&mut rng, *min_size, *max_size)?;
                    let id = format!("points-{i:04}");
                    bases.push(random_base(
                        &mut rng,
                        RandomKind::Points,
                        size,
                        *dim,
                        *coord_range,
                        id,
                    )?);
                }
            }
            InstanceSource::File { paths } => {
                for p in paths {
                    bases.push(load_instance(p, None)?);
                }
            }
        }
        let mut out = Vec::new();
        for base in bases {
            let n = base.spec.n();
            let ws: Vec<SubsetMask> = match &self.winning {
                WinningPolicy::All => {
                    if n > BRUTE_FORCE_LIMIT {
                        return Err(Error::TooLarge {
                            n,
                            limit: BRUTE_FORCE_LIMIT,
                            what: "all-winning-sets policy",
                        });
                    }
                    (1..=SubsetMask::full(n).bits()).map(SubsetMask).collect()
                }
                WinningPolicy::RandomK { k, samples } => (0..*samples)
                    .map(|_| random_k_subset(&mut rng, n, *k))
                    .collect(),
                WinningPolicy::Fixed { set: None } => vec![base.spec.winning()],
                WinningPolicy::Fixed { set: Some(s) } => {
                    vec![s.iter().copied().collect()]
                }
            };
            for w in ws {
                let mut inst = base.with_winning(w)?;
                inst.id = format!("{}:W{}", base.id, join_elements(w));
                out.push(inst);
            }
        }
        Ok(out)
    }
}

fn draw_size(rng: &mut Rng, lo: usize, hi: usize) -> Result<usize> {
    if lo == 0 || lo > hi {
        return Err(Error::Input(format!("bad size bounds {lo}..={hi}")));
    }
    Ok(rng.range(lo as i64, hi as i64) as usize)
}

fn random_k_subset(rng: &mut Rng, n: usize, k: usize) -> SubsetMask {
    let mut pool: Vec<usize> = (0..n).collect();
    let k = k.min(n);
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool[..k].iter().copied().collect()
}

fn join_elements(w: SubsetMask) -> String {
    w.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

/// One way of computing the nim value of a game.
pub trait NimSolver: Sync {
    fn name(&self) -> &str;
    /// `Ok(None)` when the solver does not apply to the instance.
    fn solve(&self, instance: &Instance) -> Result<Option<NimValue>>;
}

pub struct BruteSolver;
pub struct StructureSolver;
pub struct ClosedSolver;

impl NimSolver for BruteSolver {
    fn name(&self) -> &str {
        "brute"
    }
    fn solve(&self, instance: &Instance) -> Result<Option<NimValue>> {
        if instance.spec.n() > BRUTE_FORCE_LIMIT {
            return Ok(None);
        }
        nim_bruteforce(&instance.spec).map(Some)
    }
}

impl NimSolver for StructureSolver {
    fn name(&self) -> &str {
        "structure"
    }
    fn solve(&self, instance: &Instance) -> Result<Option<NimValue>> {
        nim_structure(&instance.spec).map(Some)
    }
}

impl NimSolver for ClosedSolver {
    fn name(&self) -> &str {
        "closed"
    }
    fn solve(&self, instance: &Instance) -> Result<Option<NimValue>> {
        match nim_closed(instance) {
            Ok((v, _)) => Ok(Some(v)),
            Err(Error::NoClosedForm(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

pub fn solver_by_name(name: &str) -> Result<Box<dyn NimSolver>> {
    match name {
        "brute" => Ok(Box::new(BruteSolver)),
        "structure" => Ok(Box::new(StructureSolver)),
        "closed" => Ok(Box::new(ClosedSolver)),
        other => Err(Error::Input(format!(
            "unknown solver {other:?} (expected brute, structure or closed)"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub n: usize,
    pub winning_size: usize,
    /// Nim value per solver; `null` where the solver does not apply.
    pub values: BTreeMap<String, Option<NimValue>>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub solvers: Vec<String>,
    pub instances: usize,
    /// Solver pairs compared, summed over instances.
    pub comparisons: usize,
    pub disagreements: usize,
    pub first_counterexample: Option<String>,
    pub records: Vec<Record>,
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `id,n,|W|,<one column per solver>,agree`; inapplicable solvers are blank.
    pub fn to_csv(&self) -> String {
        let mut out = format!("id,n,|W|,{},agree\n", self.solvers.join(","));
        for r in &self.records {
            let _ = write!(out, "{},{},{}", r.id, r.n, r.winning_size);
            for s in &self.solvers {
                match r.values.get(s).copied().flatten() {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => out.push(','),
                }
            }
            let _ = writeln!(out, ",{}", r.agree);
        }
        out
    }
}

fn evaluate(instance: &Instance, solvers: &[&dyn NimSolver]) -> Result<Record> {
    let mut values = BTreeMap::new();
    for s in solvers {
        values.insert(s.name().to_string(), s.solve(instance)?);
    }
    let got: Vec<NimValue> = values.values().flatten().copied().collect();
    Ok(Record {
        id: instance.id.clone(),
        n: instance.spec.n(),
        winning_size: instance.spec.winning().len(),
        agree: got.windows(2).all(|w| w[0] == w[1]),
        values,
    })
}

/// Runs the configured solvers on every instance and writes the report to the
/// sink, if any.
pub fn cross_validate(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let owned: Vec<Box<dyn NimSolver>> = config
        .solvers
        .iter()
        .map(|s| solver_by_name(s))
        .collect::<Result<_>>()?;
    let solvers: Vec<&dyn NimSolver> = owned.iter().map(|b| b.as_ref()).collect();
    cross_validate_with(config, &solvers)
}

/// [`cross_validate`] with caller-supplied solvers; `config.solvers` is ignored.
pub fn cross_validate_with(
    config: &CampaignConfig,
    solvers: &[&dyn NimSolver],
) -> Result<CampaignReport> {
    if let Some(dir) = &config.sink {
        std::fs::create_dir_all(dir)?;
    }
    let instances = config.instances()?;
    let records: Vec<Record> = instances
        .par_iter()
        .map(|inst| evaluate(inst, solvers))
        .collect::<Result<_>>()?;
    let comparisons = records
        .iter()
        .map(|r| {
            let k = r.values.values().flatten().count();
            k * k.saturating_sub(1) / 2
        })
        .sum();
    let first_bad = records.iter().position(|r| !r.agree);
    let report = CampaignReport {
        seed: config.seed,
        solvers: solvers.iter().map(|s| s.name().to_string()).collect(),
        instances: records.len(),
        comparisons,
        disagreements: records.iter().filter(|r| !r.agree).count(),
        first_counterexample: first_bad.map(|i| records[i].id.clone()),
        records,
    };
    if let Some(dir) = &config.sink {
        std::fs::write(dir.join("report.json"), report.to_json())?;
        std::fs::write(dir.join("report.csv"), report.to_csv())?;
        if let Some(i) = first_bad {
            std::fs::write(dir.join("counterexample.json"), instances[i].to_json())?;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub id: String,
    pub instance: InstanceFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub instances: usize,
    /// Instances where no configured solver applied.
    pub unsolved: usize,
    pub counts: BTreeMap<NimValue, usize>,
    /// First instance reaching each value.
    pub witnesses: BTreeMap<NimValue, Witness>,
}

impl SpectrumReport {
    pub fn max(&self) -> Option<NimValue> {
        self.counts.keys().next_back().copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }
}

/// Nim histogram over the instance stream, using the first configured solver
/// that applies to each instance.
pub fn spectrum(config: &CampaignConfig) -> Result<SpectrumReport> {
    config.validate()?;
    let owned: Vec<Box<dyn NimSolver>> = config
        .solvers
        .iter()
        .map(|s| solver_by_name(s))
        .collect::<Result<_>>()?;
    let instances = config.instances()?;
    let values: Vec<Option<NimValue>> = instances
        .par_iter()
        .map(|inst| {
            for s in &owned {
                if let Some(v) = s.solve(inst)? {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    let mut report = SpectrumReport {
        instances: instances.len(),
        unsolved: 0,
        counts: BTreeMap::new(),
        witnesses: BTreeMap::new(),
    };
    for (inst, v) in instances.iter().zip(values) {
        match v {
            None => report.unsolved += 1,
            Some(v) => {
                *report.counts.entry(v).or_default() += 1;
                report.witnesses.entry(v).or_insert_with(|| Witness {
                    id: inst.id.clone(),
                    instance: inst.to_file(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumeration_counts() {
        assert_eq!(enumerate_geometries(1, None).unwrap().len(), 2);
        assert_eq!(enumerate_geometries(2, None).unwrap().len(), 4);
        assert_eq!(enumerate_geometries(2, Some(true)).unwrap().len(), 2);
        assert_eq!(enumerate_geometries(3, Some(false)).unwrap().len(), 4);
        assert!(enumerate_geometries(6, None).is_err());
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }

    #[test]
    fn splitmix_reference_stream() {
        let mut r = Rng::new(1234567);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(got, [6457827717110365317, 3203168211198807973, 9817491932198370423]);
    }

    #[test]
    fn random_instances_are_deterministic() {
        let a = random_instance(RandomKind::Points, 8, 2, 7).unwrap();
        let b = random_instance(RandomKind::Points, 8, 2, 7).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let t = random_instance(RandomKind::Tree, 1, 0, 3).unwrap();
        assert_eq!(t.spec.winning(), SubsetMask::singleton(0));
        assert!(random_instance(RandomKind::Tree, 21, 0, 3).is_err());
    }

    #[test]
    fn prufer_trees_are_trees() {
        let mut rng = Rng::new(9);
        for n in 1..=12 {
            let t = random_tree(&mut rng, n).unwrap();
            assert_eq!(t.edges.len(), n.saturating_sub(1));
            t.validate().unwrap();
        }
    }
}
