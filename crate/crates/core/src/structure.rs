//! Structure equivalence: nim values from the lattice of intersection subsets.
//!
//! Positions `P` and `Q` are structure equivalent when `⌈P⌉ = ⌈Q⌉`, where
//! `⌈P⌉` is the intersection of the maximally non-generating sets containing
//! `P`. Each class `X_I` carries a type `(pty(I), nim0, nim1)` and every
//! position `P ∈ X_I` has `nim(P) = nim_{pty(P)}(X_I)`. The type calculus
//! fills types over the structure digraph from `X_S` downward, so the game's
//! value is `nim0` of the Frattini class without visiting the position space.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{mex, GameSpec, NimValue, Position, BRUTE_FORCE_LIMIT};
use crate::mask::SubsetMask;

/// Node budget for the automorphism search behind [`orbit_quotient`].
pub const AUTOMORPHISM_BUDGET: u64 = 1_000_000;

/// `(pty(I), nim0(X_I), nim1(X_I))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeTriple {
    pub parity: u8,
    pub nim0: NimValue,
    pub nim1: NimValue,
}

impl TypeTriple {
    pub fn new(parity: u8, nim0: NimValue, nim1: NimValue) -> Self {
        TypeTriple { parity, nim0, nim1 }
    }

    /// The nim value of members with the given parity.
    pub fn nim(&self, parity: u8) -> NimValue {
        if parity & 1 == 0 {
            self.nim0
        } else {
            self.nim1
        }
    }
}

impl fmt::Display for TypeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.parity, self.nim0, self.nim1)
    }
}

/// The type of a non-terminal class from the types of its options.
///
/// `nim_p = mex(nim_{1-p}(options))`, then
/// `nim_{1-p} = mex(nim_p(options) ∪ {nim_p})` with `p = pty(I)`.
pub fn class_type_from_options(parity: u8, options: &[TypeTriple]) -> TypeTriple {
    let p = parity & 1;
    let own = mex(options.iter().map(|t| t.nim(1 - p)));
    let other = mex(options.iter().map(|t| t.nim(p)).chain([own]));
    if p == 0 {
        TypeTriple::new(0, own, other)
    } else {
        TypeTriple::new(1, other, own)
    }
}

/// A structure class `X_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureClass {
    pub set: SubsetMask,
    pub parity: u8,
    /// `[nim0, nim1]` once the type calculus has run.
    pub nim: Option<[NimValue; 2]>,
    /// Whether the class has members of even / odd parity. `I` itself is
    /// always a member; the other parity is absent when `X_I = {I}`.
    pub realized: [bool; 2],
}

impl StructureClass {
    pub fn type_triple(&self) -> Option<TypeTriple> {
        self.nim.map(|[a, b]| TypeTriple::new(self.parity, a, b))
    }
}

/// Structure digraph plus (optionally) the types of its classes.
///
/// Classes are ordered by `(|I|, mask)`; arrows are pairs of class indices and
/// always point to a strictly larger set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureDiagram {
    pub ground: SubsetMask,
    pub classes: Vec<StructureClass>,
    pub arrows: Vec<(usize, usize)>,
    pub frattini: SubsetMask,
    pub max_nongenerating: Vec<SubsetMask>,
}

/// Maximally non-generating sets, found among the convex sets.
pub fn max_nongenerating(spec: &GameSpec) -> Vec<SubsetMask> {
    let g = spec.geometry();
    let w = spec.winning();
    let full = g.ground();
    let mut out: Vec<SubsetMask> = g
        .convex_sets()
        .iter()
        .copied()
        .filter(|&k| !w.is_subset(k))
        .filter(|&k| (full - k).iter().all(|a| spec.is_generating(k.with(a))))
        .collect();
    out.sort();
    out
}

/// Same family by scanning every subset of the ground set.
pub fn max_nongenerating_exhaustive(spec: &GameSpec) -> Result<Vec<SubsetMask>> {
    let n = spec.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
            what: "exhaustive subset scan",
        });
    }
    let full = spec.geometry().ground();
    let mut out: Vec<SubsetMask> = (0..1u64 << n)
        .map(SubsetMask)
        .filter(|&m| !spec.is_generating(m))
        .filter(|&m| (full - m).iter().all(|a| spec.is_generating(m.with(a))))
        .collect();
    out.sort();
    Ok(out)
}

/// All intersections of subfamilies of `m`, including `∩∅ = s`.
pub fn intersection_subsets(m: &[SubsetMask], s: SubsetMask) -> Vec<SubsetMask> {
    let mut seen: HashSet<SubsetMask> = HashSet::new();
    let mut work = vec![s];
    seen.insert(s);
    while let Some(x) = work.pop() {
        for &gen in m {
            let y = x & gen;
            if seen.insert(y) {
                work.push(y);
            }
        }
    }
    let mut out: Vec<SubsetMask> = seen.into_iter().collect();
    out.sort();
    out
}

/// `⌈P⌉`: intersection of the members of `m` containing `p`, or `s` if none.
pub fn ceil(m: &[SubsetMask], s: SubsetMask, p: SubsetMask) -> SubsetMask {
    m.iter()
        .filter(|k| k.is_superset(p))
        .fold(s, |acc, &k| acc & k)
}

/// Builds the structure digraph. Types are left unset.
pub fn structure_digraph(spec: &GameSpec) -> StructureDiagram {
    let full = spec.geometry().ground();
    let mset = max_nongenerating(spec);
    let sets = intersection_subsets(&mset, full);
    let index = |x: SubsetMask| sets.binary_search(&x).expect("ceil lands in the lattice");

    let mut arrows = BTreeSet::new();
    let mut classes = Vec::with_capacity(sets.len());
    for (i, &set) in sets.iter().enumerate() {
        for s in (full - set).iter() {
            arrows.insert((i, index(ceil(&mset, full, set.with(s)))));
        }
        let opposite = set.iter().any(|x| ceil(&mset, full, set.without(x)) == set);
        let parity = set.parity();
        let mut realized = [false; 2];
        realized[parity as usize] = true;
        realized[1 - parity as usize] = opposite;
        classes.push(StructureClass {
            set,
            parity,
            nim: None,
            realized,
        });
    }
    let frattini = mset.iter().fold(full, |acc, &k| acc & k);
    StructureDiagram {
        ground: full,
        classes,
        arrows: arrows.into_iter().collect(),
        frattini,
        max_nongenerating: mset,
    }
}

/// Type calculus over a diagram, in decreasing order of `|I|`.
pub fn type_calculus(diagram: &StructureDiagram, parity_of_s: u8) -> Result<StructureDiagram> {
    let mut d = diagram.clone();
    let count = d.classes.len();
    let mut options: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &(from, to) in &d.arrows {
        if from >= count {
            return Err(Error::DanglingArrow(from));
        }
        if to >= count {
            return Err(Error::DanglingArrow(to));
        }
        options[from].push(to);
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(d.classes[i].set.canonical_key()));
    for i in order {
        let ty = if d.classes[i].set == d.ground {
            TypeTriple::new(parity_of_s & 1, 0, 0)
        } else {
            let opt_types: Vec<TypeTriple> = options[i]
                .iter()
                .map(|&j| d.classes[j].type_triple().ok_or(Error::Cycle(j)))
                .collect::<Result<_>>()?;
            class_type_from_options(d.classes[i].parity, &opt_types)
        };
        d.classes[i].nim = Some([ty.nim0, ty.nim1]);
    }
    Ok(d)
}

impl StructureDiagram {
    /// Structure digraph with types computed.
    pub fn solve(spec: &GameSpec) -> Result<Self> {
        let d = structure_digraph(spec);
        let parity = d.ground.parity();
        type_calculus(&d, parity)
    }

    pub fn is_typed(&self) -> bool {
        self.classes.iter().all(|c| c.nim.is_some())
    }

    pub fn index_of(&self, set: SubsetMask) -> Option<usize> {
        self.classes.binary_search_by(|c| c.set.cmp(&set)).ok()
    }

    pub fn ceil(&self, p: SubsetMask) -> SubsetMask {
        ceil(&self.max_nongenerating, self.ground, p)
    }

    pub fn frattini_index(&self) -> usize {
        self.index_of(self.frattini).expect("frattini subset is a class")
    }

    pub fn options_of(&self, i: usize) -> Vec<usize> {
        self.arrows
            .iter()
            .filter(|&&(a, _)| a == i)
            .map(|&(_, b)| b)
            .collect()
    }

    /// The game's nim value: `nim0` of the Frattini class.
    pub fn game_nim(&self) -> Result<NimValue> {
        let c = &self.classes[self.frattini_index()];
        c.nim.map(|[a, _]| a).ok_or(Error::TypesMissing)
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    set: c.set.to_vec(),
                    parity: c.parity,
                    nim0: c.nim.map(|n| n[0]),
                    nim1: c.nim.map(|n| n[1]),
                    realized: c.realized,
                })
                .collect(),
            arrows: self.arrows.iter().map(|&(a, b)| [a, b]).collect(),
            frattini: self.frattini.to_vec(),
            max_nongenerating: self.max_nongenerating.iter().map(|m| m.to_vec()).collect(),
        }
    }
}

/// Serialized class: `{"I":[..],"parity":p,"nim0":a,"nim1":b,"realized":[..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    #[serde(rename = "I")]
    pub set: Vec<usize>,
    pub parity: u8,
    pub nim0: Option<NimValue>,
    pub nim1: Option<NimValue>,
    pub realized: [bool; 2],
}

/// Serialized diagram; arrows index into `classes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub classes: Vec<ClassJson>,
    pub arrows: Vec<[usize; 2]>,
    pub frattini: Vec<usize>,
    pub max_nongenerating: Vec<Vec<usize>>,
}

/// Nim value via the type calculus.
pub fn nim_structure(spec: &GameSpec) -> Result<NimValue> {
    StructureDiagram::solve(spec)?.game_nim()
}

/// The class `X_{⌈P⌉}` and its predicted value `nim_{pty(P)}`.
pub fn class_of_position(
    diagram: &StructureDiagram,
    p: Position,
) -> Result<(&StructureClass, NimValue)> {
    if let Some(element) = (p - diagram.ground).first() {
        return Err(Error::ElementOutOfRange {
            element,
            n: diagram.ground.len(),
        });
    }
    let i = diagram
        .index_of(diagram.ceil(p))
        .expect("ceil lands in the lattice");
    let class = &diagram.classes[i];
    let [a, b] = class.nim.ok_or(Error::TypesMissing)?;
    let value = if p.parity() == 0 { a } else { b };
    Ok((class, value))
}

/// Quotient of a typed diagram by its size-preserving automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitQuotient {
    /// Orbit index of every class.
    pub orbit_of: Vec<usize>,
    /// Least class (in canonical order) of each orbit.
    pub representatives: Vec<usize>,
    pub orbit_sizes: Vec<usize>,
    /// Arrows between orbits, deduplicated.
    pub arrows: Vec<(usize, usize)>,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

struct AutomorphismSearch<'a> {
    size: Vec<usize>,
    out_deg: Vec<usize>,
    in_deg: Vec<usize>,
    adj: &'a [Vec<bool>],
    nodes: u64,
}

impl AutomorphismSearch<'_> {
    fn compatible(&self, a: usize, b: usize) -> bool {
        self.size[a] == self.size[b] && self.out_deg[a] == self.out_deg[b] && self.in_deg[a] == self.in_deg[b]
    }

    /// Extends `map` over `order[k..]`; `map[order[0]]` is fixed by the caller.
    fn extend(&mut self, order: &[usize], k: usize, map: &mut [usize], used: &mut [bool]) -> Result<bool> {
        if k == order.len() {
            return Ok(true);
        }
        let v = order[k];
        for t in 0..map.len() {
            if used[t] || !self.compatible(v, t) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > AUTOMORPHISM_BUDGET {
                return Err(Error::SearchBudget(AUTOMORPHISM_BUDGET));
            }
            let ok = order[..k].iter().all(|&x| {
                let y = map[x];
                self.adj[v][x] == self.adj[t][y] && self.adj[x][v] == self.adj[y][t]
            }) && self.adj[v][v] == self.adj[t][t];
            if !ok {
                continue;
            }
            map[v] = t;
            used[t] = true;
            if self.extend(order, k + 1, map, used)? {
                return Ok(true);
            }
            used[t] = false;
            map[v] = usize::MAX;
        }
        Ok(false)
    }
}

/// Orbits of the size-preserving automorphism group of the structure digraph.
///
/// Fails if orbit-equivalent classes carry different types, or if the search
/// exceeds [`AUTOMORPHISM_BUDGET`] nodes.
pub fn orbit_quotient(diagram: &StructureDiagram) -> Result<OrbitQuotient> {
    if !diagram.is_typed() {
        return Err(Error::TypesMissing);
    }
    let count = diagram.classes.len();
    let mut adj = vec![vec![false; count]; count];
    let mut out_deg = vec![0; count];
    let mut in_deg = vec![0; count];
    for &(a, b) in &diagram.arrows {
        adj[a][b] = true;
        out_deg[a] += 1;
        in_deg[b] += 1;
    }
    let mut search = AutomorphismSearch {
        size: diagram.classes.iter().map(|c| c.set.len()).collect(),
        out_deg,
        in_deg,
        adj: &adj,
        nodes: 0,
    };
    let mut orbits = DisjointSets((0..count).collect());
    for u in 0..count {
        for v in u + 1..count {
            if !search.compatible(u, v) || orbits.find(u) == orbits.find(v) {
                continue;
            }
            let mut map = vec![usize::MAX; count];
            let mut used = vec![false; count];
            map[u] = v;
            used[v] = true;
            // fixing u -> v, place the rest closest-to-u first for early pruning
            let order: Vec<usize> = std::iter::once(u)
                .chain((0..count).filter(|&x| x != u))
                .collect();
            if search.extend(&order, 1, &mut map, &mut used)? {
                for (x, &y) in map.iter().enumerate() {
                    orbits.union(x, y);
                }
            }
        }
    }

    let mut orbit_of = vec![usize::MAX; count];
    let mut representatives = Vec::new();
    let mut orbit_sizes = Vec::new();
    for x in 0..count {
        let root = orbits.find(x);
        if orbit_of[root] == usize::MAX {
            orbit_of[root] = representatives.len();
            representatives.push(root);
            orbit_sizes.push(0);
        }
        orbit_of[x] = orbit_of[root];
        orbit_sizes[orbit_of[x]] += 1;
    }
    for x in 0..count {
        let rep = representatives[orbit_of[x]];
        if diagram.classes[x].nim != diagram.classes[rep].nim {
            return Err(Error::Precondition(format!(
                "orbit-equivalent classes {} and {} carry different types",
                diagram.classes[x].set, diagram.classes[rep].set
            )));
        }
    }
    let arrows: BTreeSet<(usize, usize)> = diagram
        .arrows
        .iter()
        .map(|&(a, b)| (orbit_of[a], orbit_of[b]))
        .collect();
    Ok(OrbitQuotient {
        orbit_of,
        representatives,
        orbit_sizes,
        arrows: arrows.into_iter().collect(),
    })
}
