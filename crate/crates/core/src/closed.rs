//! Closed-form nim values for three families of games: winning sets of
//! extreme points, vertex geometries of trees, and affine geometries on a line.
//!
//! Every entry point checks the hypotheses of its formula and refuses inputs
//! outside them.

use crate::builders::{PointConfig, TreeSpec};
use crate::error::{Error, Result};
use crate::game::{GameSpec, NimValue};
use crate::io::{Instance, Source};
use crate::mask::SubsetMask;
use crate::structure::TypeTriple;

/// Parity counts `(e, o)` of the witness sets behind a tree game.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub even: usize,
    pub odd: usize,
}

impl Signature {
    pub fn new(even: usize, odd: usize) -> Self {
        Signature { even, odd }
    }

    fn count(sizes: impl IntoIterator<Item = usize>) -> Self {
        sizes.into_iter().fold(Signature::default(), |s, k| {
            if k % 2 == 0 {
                Signature::new(s.even + 1, s.odd)
            } else {
                Signature::new(s.even, s.odd + 1)
            }
        })
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.even, self.odd)
    }
}

/// Deficiency of a structure class.
pub type Deficiency = usize;

fn require_extreme_w(spec: &GameSpec) -> Result<SubsetMask> {
    let g = spec.geometry();
    let ex = g.extreme_points(g.ground());
    let w = spec.winning();
    if !w.is_subset(ex) {
        return Err(Error::Precondition(format!(
            "winning set {} is not contained in Ex(S) = {}",
            g.format_set(w),
            g.format_set(ex)
        )));
    }
    Ok(ex)
}

/// Nim value when `W ⊆ Ex(S)`.
pub fn nim_extreme_w(spec: &GameSpec) -> Result<NimValue> {
    require_extreme_w(spec)?;
    let odd = spec.n() % 2 == 1;
    Ok(match (spec.winning().len(), odd) {
        (1, true) => 1,
        (1, false) => 2,
        (_, false) => 0,
        (_, true) => 1,
    })
}

/// `δ(I) = |S \ I|` for an intersection subset of a game with `W ⊆ Ex(S)`;
/// the missing points must all be goal points.
pub fn deficiency_extreme(spec: &GameSpec, set: SubsetMask) -> Result<Deficiency> {
    require_extreme_w(spec)?;
    let missing = spec.geometry().ground() - set;
    if !missing.is_subset(spec.winning()) {
        return Err(Error::Precondition(format!(
            "{} is not an intersection subset: it misses non-goal points",
            spec.geometry().format_set(set)
        )));
    }
    Ok(missing.len())
}

/// Type of a class with deficiency `delta` in a game with `W ⊆ Ex(S)`.
///
/// For odd `|S|` the class parity is `1 - δ mod 2`, so odd deficiencies above
/// 1 give `(0,1,0)` and even ones `(1,1,0)`.
pub fn type_table_extreme(parity_of_s: u8, delta: Deficiency) -> TypeTriple {
    let t = TypeTriple::new;
    if parity_of_s & 1 == 0 {
        match delta {
            0 => t(0, 0, 0),
            1 => t(1, 2, 1),
            d if d % 2 == 0 => t(0, 0, 1),
            _ => t(1, 0, 1),
        }
    } else {
        match delta {
            0 => t(1, 0, 0),
            1 => t(0, 1, 2),
            d if d % 2 == 1 => t(0, 1, 0),
            _ => t(1, 1, 0),
        }
    }
}

/// Tree witness sets for a winning set with at least two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWitnesses {
    /// `Ex(W)`, by the component characterization.
    pub extreme: SubsetMask,
    /// `(w, M_w, V_w)` for every `w ∈ Ex(W)`, by increasing `w`.
    pub sets: Vec<(usize, SubsetMask, SubsetMask)>,
}

impl TreeWitnesses {
    /// `Φ = M_{Ex(W)} = S \ ∪ V_w`.
    pub fn frattini(&self, ground: SubsetMask) -> SubsetMask {
        self.sets.iter().fold(ground, |acc, &(_, _, v)| acc - v)
    }

    /// `M_A` for `A ⊆ Ex(W)`.
    pub fn m_of(&self, ground: SubsetMask, a: SubsetMask) -> SubsetMask {
        self.sets
            .iter()
            .filter(|(w, _, _)| a.contains(*w))
            .fold(ground, |acc, &(_, _, v)| acc - v)
    }
}

fn check_tree_set(tree: &TreeSpec, w: SubsetMask) -> Result<()> {
    tree.validate()?;
    if let Some(element) = (w - tree.ground()).first() {
        return Err(Error::ElementOutOfRange { element, n: tree.n });
    }
    Ok(())
}

/// `Ex(W)` in a tree: `w` is extreme iff `W \ {w}` lies in one component of `T \ w`.
pub fn tree_extreme_points(tree: &TreeSpec, w: SubsetMask) -> Result<SubsetMask> {
    check_tree_set(tree, w)?;
    Ok(w.iter()
        .filter(|&x| {
            let rest = w.without(x);
            tree.components_without(x)
                .iter()
                .filter(|(_, comp)| !(*comp & rest).is_empty())
                .count()
                <= 1
        })
        .collect())
}

/// `M_w` and `V_w = S \ M_w` for each extreme point of `W`, `|W| >= 2`.
pub fn tree_witnesses(tree: &TreeSpec, w: SubsetMask) -> Result<TreeWitnesses> {
    if w.len() < 2 {
        return Err(Error::Precondition(format!(
            "winning set needs at least two vertices, has {}",
            w.len()
        )));
    }
    let extreme = tree_extreme_points(tree, w)?;
    let ground = tree.ground();
    let sets = extreme
        .iter()
        .map(|x| {
            let rest = w.without(x);
            let m = tree
                .components_without(x)
                .into_iter()
                .map(|(_, c)| c)
                .find(|c| !(*c & rest).is_empty())
                .expect("an extreme point has one component meeting W");
            (x, m, ground - m)
        })
        .collect();
    Ok(TreeWitnesses { extreme, sets })
}

/// Game signature `σ(X_Φ)` for `|W| >= 2`: parities of the `|V_w|`.
pub fn tree_signature_multi(tree: &TreeSpec, w: SubsetMask) -> Result<Signature> {
    let wit = tree_witnesses(tree, w)?;
    Ok(Signature::count(wit.sets.iter().map(|(_, _, v)| v.len())))
}

/// Nim value for `|W| >= 2` on a tree vertex geometry.
pub fn nim_tree_multi(tree: &TreeSpec, w: SubsetMask) -> Result<NimValue> {
    let sig = tree_signature_multi(tree, w)?;
    Ok(nim_from_multi_signature(tree.n.is_multiple_of(2), sig))
}

fn nim_from_multi_signature(even_ground: bool, sig: Signature) -> NimValue {
    let eo = (sig.even, sig.odd);
    if even_ground {
        match eo {
            (1, 0) => 1,
            (0, 1) | (1, 2) => 2,
            (1, 1) | (2, 1) => 3,
            _ => 0,
        }
    } else {
        match eo {
            (0, 0) | (1, 1) => 0,
            (1, 0) | (2, 0) => 2,
            _ => 1,
        }
    }
}

/// Signature for `W = {w}`: parities of the components of `T \ w`.
pub fn tree_signature_single(tree: &TreeSpec, w: usize) -> Result<Signature> {
    check_tree_set(tree, SubsetMask::singleton(w))?;
    Ok(Signature::count(
        tree.components_without(w).iter().map(|(_, c)| c.len()),
    ))
}

/// Nim value for `W = {w}` on a tree vertex geometry.
pub fn nim_tree_single(tree: &TreeSpec, w: usize) -> Result<NimValue> {
    let sig = tree_signature_single(tree, w)?;
    Ok(nim_from_single_signature(sig))
}

fn nim_from_single_signature(sig: Signature) -> NimValue {
    match (sig.even, sig.odd) {
        (_, 0) => 1,
        (0, _) => 2,
        _ => 3,
    }
}

/// Dispatches to the single- or multi-vertex tree formula.
pub fn nim_tree(tree: &TreeSpec, w: SubsetMask) -> Result<NimValue> {
    match w.len() {
        0 => Err(Error::EmptyWinningSet),
        1 => nim_tree_single(tree, w.first().unwrap()),
        _ => nim_tree_multi(tree, w),
    }
}

/// Points `s_1 < .. < s_n` on a line, `W = {s_{i_1}, .., s_{i_k}}`, `k >= 2`;
/// indices are 1-based and strictly increasing.
pub fn nim_path_multi(n: usize, indices: &[usize]) -> Result<NimValue> {
    if indices.len() < 2 {
        return Err(Error::Precondition(
            "need at least two winning indices".into(),
        ));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(format!(
            "indices {indices:?} are not strictly increasing"
        )));
    }
    let (first, last) = (indices[0], *indices.last().unwrap());
    if first < 1 || last > n {
        return Err(Error::Precondition(format!(
            "indices {indices:?} out of range 1..={n}"
        )));
    }
    Ok(if first % 2 != last % 2 {
        0
    } else if n % 2 == 1 {
        if first % 2 == 1 {
            1
        } else {
            2
        }
    } else {
        3
    })
}

/// Points `s_1 < .. < s_n` on a line, `W = {s_k}` (1-based).
pub fn nim_path_single(n: usize, k: usize) -> Result<NimValue> {
    if k < 1 || k > n {
        return Err(Error::Precondition(format!("index {k} out of range 1..={n}")));
    }
    Ok(if n % 2 == 1 {
        if k % 2 == 1 {
            1
        } else {
            2
        }
    } else if k == 1 || k == n {
        2
    } else {
        3
    })
}

/// A line game reduced to integer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathReduction {
    /// Already generated before the first move.
    ZeroMove,
    /// Equivalent to a path game on `n` points with the given 1-based winning
    /// indices.
    Path { n: usize, indices: Vec<usize> },
}

impl PathReduction {
    pub fn nim(&self) -> Result<NimValue> {
        match self {
            PathReduction::ZeroMove => Ok(0),
            PathReduction::Path { n, indices } if indices.len() == 1 => {
                nim_path_single(*n, indices[0])
            }
            PathReduction::Path { n, indices } => nim_path_multi(*n, indices),
        }
    }
}

/// Maps a (possibly deleted) affine configuration in `R^1` to a path game.
///
/// `winning` indexes the surviving points. In one dimension `τ(P ∪ D)` is the
/// run of points between the extremes of `P ∪ D`, so a position generates iff
/// it reaches left of `min W` and right of `max W`; a side already covered by a
/// deleted point drops out. One remaining side with `m` admissible points out
/// of `n` plays like the path game on `n - m + 1` points with `k = 1`.
pub fn reduce_line(cfg: &PointConfig, winning: SubsetMask) -> Result<PathReduction> {
    cfg.validate()?;
    if cfg.dim != 1 {
        return Err(Error::NoClosedForm(format!(
            "points live in dimension {}, not 1",
            cfg.dim
        )));
    }
    let surviving = cfg.surviving();
    let n = surviving.len();
    if winning.is_empty() {
        return Err(Error::EmptyWinningSet);
    }
    if let Some(element) = (winning - SubsetMask::full(n)).first() {
        return Err(Error::ElementOutOfRange { element, n });
    }
    let coord = |i: usize| &cfg.points[i][0];
    // surviving points in increasing coordinate order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| coord(surviving[a]).cmp(coord(surviving[b])));
    let rank_of = |local: usize| order.iter().position(|&o| o == local).unwrap() + 1;
    let ranks: Vec<usize> = winning.iter().map(rank_of).collect();
    let lo_rank = *ranks.iter().min().unwrap();
    let hi_rank = *ranks.iter().max().unwrap();
    let lo = coord(surviving[order[lo_rank - 1]]);
    let hi = coord(surviving[order[hi_rank - 1]]);
    let deleted: Vec<usize> = cfg.deleted.iter().collect();
    let left_free = deleted.iter().any(|&d| coord(d) <= lo);
    let right_free = deleted.iter().any(|&d| coord(d) >= hi);
    Ok(match (left_free, right_free) {
        (true, true) => PathReduction::ZeroMove,
        (false, false) => {
            let mut indices = vec![lo_rank];
            if hi_rank != lo_rank {
                indices.push(hi_rank);
            }
            PathReduction::Path { n, indices }
        }
        (true, false) => PathReduction::Path {
            n: hi_rank,
            indices: vec![1],
        },
        (false, true) => PathReduction::Path {
            n: n - lo_rank + 1,
            indices: vec![1],
        },
    })
}

/// Which closed form [`nim_closed`] applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFamily {
    Tree,
    Line,
    ExtremeWinning,
}

impl std::fmt::Display for ClosedFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClosedFamily::Tree => "tree",
            ClosedFamily::Line => "line",
            ClosedFamily::ExtremeWinning => "extreme-winning",
        })
    }
}

/// Picks the closed form matching the instance: tree files, one-dimensional
/// point files, then `W ⊆ Ex(S)`.
pub fn nim_closed(instance: &Instance) -> Result<(NimValue, ClosedFamily)> {
    let w = instance.spec.winning();
    match &instance.source {
        Source::Tree(t) => return Ok((nim_tree(t, w)?, ClosedFamily::Tree)),
        Source::Points(cfg) if cfg.dim == 1 => {
            return Ok((reduce_line(cfg, w)?.nim()?, ClosedFamily::Line))
        }
        _ => {}
    }
    let g = instance.geometry();
    let ex = g.extreme_points(g.ground());
    if w.is_subset(ex) {
        return Ok((nim_extreme_w(&instance.spec)?, ClosedFamily::ExtremeWinning));
    }
    Err(Error::NoClosedForm(format!(
        "not a tree or a line, and W = {} is not contained in Ex(S) = {}",
        g.format_set(w),
        g.format_set(ex)
    )))
}
