//! Convex geometries from exact-rational point sets and from trees.

use std::collections::{HashSet, VecDeque};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::mask::{SubsetMask, MAX_ELEMENTS};

/// Exact rational coordinate.
pub type Rational = BigRational;

/// Largest point set accepted by [`affine_geometry`].
pub const AFFINE_POINT_LIMIT: usize = 20;

/// Parses `"p/q"` or an integer. Decimal and float notations are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Rational(s.to_string());
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer coordinate vector convenience.
pub fn point(coords: &[i64]) -> Vec<Rational> {
    coords.iter().map(|&c| rational(c)).collect()
}

/// A point set in `R^dim` together with a set of points to delete.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig {
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    pub deleted: SubsetMask,
    pub labels: Option<Vec<String>>,
}

impl PointConfig {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        let cfg = PointConfig {
            dim,
            points,
            deleted: SubsetMask::EMPTY,
            labels: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_deleted(mut self, deleted: SubsetMask) -> Result<Self> {
        self.deleted = deleted;
        self.validate()?;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::Input(format!(
                "expected {} labels, found {}",
                self.points.len(),
                labels.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Input("point dimension must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(Error::Input("point set is empty".into()));
        }
        if self.points.len() > AFFINE_POINT_LIMIT {
            return Err(Error::TooLarge {
                n: self.points.len(),
                limit: AFFINE_POINT_LIMIT,
                what: "affine geometries",
            });
        }
        for p in &self.points {
            if p.len() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    found: p.len(),
                });
            }
        }
        check_distinct(&self.points)?;
        let all = SubsetMask::full(self.points.len());
        if !self.deleted.fits(self.points.len()) {
            return Err(Error::ElementOutOfRange {
                element: (self.deleted - all).first().unwrap(),
                n: self.points.len(),
            });
        }
        if self.deleted == all {
            return Err(Error::DeleteAll);
        }
        Ok(())
    }

    /// Indices of surviving points, in order.
    pub fn surviving(&self) -> Vec<usize> {
        (SubsetMask::full(self.points.len()) - self.deleted).to_vec()
    }
}

fn check_distinct(points: &[Vec<Rational>]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoint(i, j));
            }
        }
    }
    Ok(())
}

/// Solves for barycentric coordinates of `p` with respect to `simplex`.
///
/// Returns `None` when the vertices are affinely dependent or when `p` is
/// outside their affine hull.
fn barycentric(simplex: &[&Vec<Rational>], p: &[Rational]) -> Option<Vec<Rational>> {
    let dim = p.len();
    let cols = simplex.len();
    // rows: one per coordinate plus the affine row sum(lambda) = 1
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    for j in 0..dim {
        let mut row: Vec<Rational> = simplex.iter().map(|v| v[j].clone()).collect();
        row.push(p[j].clone());
        rows.push(row);
    }
    let mut ones = vec![Rational::one(); cols];
    ones.push(Rational::one());
    rows.push(ones);

    let mut pivot_row = 0;
    for col in 0..cols {
        let found = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero());
        let r = found?;
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    // remaining rows must read 0 = 0
    if rows[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(rows[..cols].iter().map(|row| row[cols].clone()).collect())
}

/// Exact test of `p ∈ Conv{points[i] : i ∈ a}` via simplices of at most
/// `dim + 1` vertices.
pub fn hull_membership(points: &[Vec<Rational>], a: SubsetMask, p: &[Rational]) -> Result<bool> {
    let dim = p.len();
    for q in points {
        if q.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: q.len(),
            });
        }
    }
    let idx: Vec<usize> = a.iter().filter(|&i| i < points.len()).collect();
    if idx.iter().any(|&i| points[i] == p) {
        return Ok(true);
    }
    let max_k = (dim + 1).min(idx.len());
    for k in 2..=max_k {
        let mut found = false;
        for_each_combination(idx.len(), k, |combo| {
            let simplex: Vec<&Vec<Rational>> = combo.iter().map(|&c| &points[idx[c]]).collect();
            if let Some(lambda) = barycentric(&simplex, p) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    found = true;
                    return true;
                }
            }
            false
        });
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Calls `f` on every k-combination of `0..n` in lexicographic order until it
/// returns `true`.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if f(&c) {
            return;
        }
        // rightmost position that can still advance
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// For every affinely independent vertex subset of size 2..=dim+1, the mask
/// of points lying in its convex hull.
fn simplex_coverage(points: &[Vec<Rational>], dim: usize) -> Vec<(SubsetMask, SubsetMask)> {
    let n = points.len();
    let mut out = Vec::new();
    for k in 2..=(dim + 1).min(n) {
        for_each_combination(n, k, |combo| {
            let simplex: Vec<&Vec<Rational>> = combo.iter().map(|&c| &points[c]).collect();
            let verts: SubsetMask = combo.iter().copied().collect();
            // solving for one of its own vertices fails exactly when the
            // simplex is affinely dependent
            if barycentric(&simplex, simplex[0]).is_none() {
                return false;
            }
            let mut covered = verts;
            for (p, q) in points.iter().enumerate() {
                if verts.contains(p) {
                    continue;
                }
                if let Some(l) = barycentric(&simplex, q) {
                    if l.iter().all(|x| !x.is_negative()) {
                        covered = covered.with(p);
                    }
                }
            }
            if covered != verts {
                out.push((verts, covered));
            }
            false
        });
    }
    out
}

/// The affine convex geometry: `K` is convex iff `K = S ∩ Conv(K)`.
pub fn affine_geometry(points: &[Vec<Rational>]) -> Result<Geometry> {
    let cfg = PointConfig::new(points.to_vec())?;
    Ok(affine_from_config(&cfg))
}

fn affine_from_config(cfg: &PointConfig) -> Geometry {
    let n = cfg.points.len();
    let cover = simplex_coverage(&cfg.points, cfg.dim);
    let closure = |a: SubsetMask| -> SubsetMask {
        cover
            .iter()
            .filter(|(v, _)| v.is_subset(a))
            .fold(a, |acc, (_, c)| acc | *c)
    };
    // every nonempty convex set loses an extreme point and stays convex, so
    // single-element growth from the empty set reaches the whole family
    let mut seen: HashSet<u64> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(0);
    queue.push_back(SubsetMask::EMPTY);
    let full = SubsetMask::full(n);
    while let Some(k) = queue.pop_front() {
        for a in (full - k).iter() {
            let next = k.with(a);
            if !seen.contains(&next.bits()) && closure(next) == next {
                seen.insert(next.bits());
                queue.push_back(next);
            }
        }
    }
    let family = seen.into_iter().map(SubsetMask).collect();
    Geometry::from_valid(n, family, cfg.labels.clone())
}

/// `delete(affine_geometry(points), deleted)` with labels of survivors kept.
pub fn deleted_affine(cfg: &PointConfig) -> Result<Geometry> {
    cfg.validate()?;
    affine_from_config(cfg).delete(cfg.deleted)
}

/// A tree on vertices `0..n` given by its edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSpec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Option<Vec<String>>,
}

impl TreeSpec {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = TreeSpec {
            n,
            edges,
            labels: None,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("path needs at least one vertex".into()));
        }
        TreeSpec::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn star(leaves: usize) -> Result<Self> {
        TreeSpec::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::GroundSetSize(n));
        }
        if self.edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} vertices need {} edges, found {}",
                n,
                n - 1,
                self.edges.len()
            )));
        }
        let mut seen = HashSet::new();
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                return Err(Error::ElementOutOfRange {
                    element: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidTree(format!("duplicate edge {u}-{v}")));
            }
        }
        if self.component_of(0, None) != SubsetMask::full(n) {
            return Err(Error::InvalidTree("edge list is not connected".into()));
        }
        Ok(())
    }

    pub fn neighbors(&self) -> Vec<SubsetMask> {
        let mut adj = vec![SubsetMask::EMPTY; self.n];
        for &(u, v) in &self.edges {
            adj[u] = adj[u].with(v);
            adj[v] = adj[v].with(u);
        }
        adj
    }

    /// Vertex set of the component of `start` after removing `removed`.
    pub fn component_of(&self, start: usize, removed: Option<usize>) -> SubsetMask {
        let adj = self.neighbors();
        bfs_component(&adj, start, removed)
    }

    /// Components of `T \ w`, one per neighbor `v` of `w`, as `(v, vertices)`.
    pub fn components_without(&self, w: usize) -> Vec<(usize, SubsetMask)> {
        let adj = self.neighbors();
        adj[w]
            .iter()
            .map(|v| (v, bfs_component(&adj, v, Some(w))))
            .collect()
    }

    pub fn ground(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }
}

fn bfs_component(adj: &[SubsetMask], start: usize, removed: Option<usize>) -> SubsetMask {
    let blocked = removed.map_or(SubsetMask::EMPTY, SubsetMask::singleton);
    let mut comp = SubsetMask::singleton(start);
    let mut frontier = comp;
    while !frontier.is_empty() {
        let mut next = SubsetMask::EMPTY;
        for u in frontier.iter() {
            next |= adj[u];
        }
        next = next - comp - blocked;
        comp |= next;
        frontier = next;
    }
    comp
}

/// Vertex geometry: the empty set plus every vertex set inducing a connected
/// subgraph.
pub fn tree_vertex_geometry(tree: &TreeSpec) -> Result<Geometry> {
    tree.validate()?;
    let adj = tree.neighbors();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack: Vec<SubsetMask> = Vec::new();
    seen.insert(0);
    for v in 0..tree.n {
        let s = SubsetMask::singleton(v);
        seen.insert(s.bits());
        stack.push(s);
    }
    while let Some(k) = stack.pop() {
        let mut boundary = SubsetMask::EMPTY;
        for u in k.iter() {
            boundary |= adj[u];
        }
        for v in (boundary - k).iter() {
            let next = k.with(v);
            if seen.insert(next.bits()) {
                stack.push(next);
            }
        }
    }
    let family = seen.into_iter().map(SubsetMask).collect();
    Ok(Geometry::from_valid(tree.n, family, tree.labels.clone()))
}

/// Vertex geometry of the path `0 - 1 - .. - (n-1)`: the intervals plus `∅`.
pub fn path_geometry(n: usize) -> Result<Geometry> {
    tree_vertex_geometry(&TreeSpec::path(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(v.iter().copied())
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-1/2").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational(" 4 ").unwrap(), rational(4));
        assert_eq!(parse_rational("6/4").unwrap(), BigRational::new(3.into(), 2.into()));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&rational(-7)), "-7");
    }

    #[test]
    fn hull_membership_examples() {
        let line = vec![point(&[-1]), point(&[0]), point(&[1])];
        assert!(hull_membership(&line, m(&[0, 2]), &point(&[0])).unwrap());
        assert!(!hull_membership(&line, m(&[0, 1]), &point(&[1])).unwrap());
        assert!(hull_membership(&line, m(&[2]), &point(&[1])).unwrap());
        assert!(hull_membership(&line, m(&[0]), &point(&[0, 0])).is_err());
    }

    #[test]
    fn degenerate_triangle_uses_segments() {
        // three collinear points in the plane plus a query on the segment
        let pts = vec![point(&[0, 0]), point(&[2, 2]), point(&[4, 4])];
        assert!(hull_membership(&pts, m(&[0, 2]), &point(&[1, 1])).unwrap());
        assert!(hull_membership(&pts, m(&[0, 1, 2]), &point(&[3, 3])).unwrap());
        assert!(!hull_membership(&pts, m(&[0, 1, 2]), &point(&[3, 2])).unwrap());
    }

    #[test]
    fn single_point_geometry() {
        let g = affine_geometry(&[point(&[3])]).unwrap();
        assert_eq!(g.convex_sets(), &[SubsetMask::EMPTY, m(&[0])]);
    }

    #[test]
    fn duplicate_points_rejected() {
        assert!(matches!(
            affine_geometry(&[point(&[1, 2]), point(&[1, 2])]),
            Err(Error::DuplicatePoint(0, 1))
        ));
    }

    #[test]
    fn collinear_three_is_path_three() {
        let g = affine_geometry(&[point(&[-1]), point(&[0]), point(&[1])]).unwrap();
        // 2^S minus {first,last}
        assert_eq!(g.convex_sets().len(), 7);
        assert!(!g.contains_set(m(&[0, 2])));
        let p3 = path_geometry(3).unwrap();
        assert_eq!(p3.convex_sets(), g.convex_sets());
    }

    #[test]
    fn tree_validation() {
        assert!(TreeSpec::new(3, vec![(0, 1)]).is_err());
        assert!(TreeSpec::new(3, vec![(0, 1), (0, 1)]).is_err());
        assert!(TreeSpec::new(3, vec![(0, 0), (1, 2)]).is_err());
        assert!(TreeSpec::new(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(TreeSpec::new(4, vec![(0, 1), (2, 3), (3, 2)]).is_err());
        assert!(TreeSpec::path(0).is_err());
        assert!(TreeSpec::new(1, vec![]).is_ok());
    }

    #[test]
    fn path_five_has_sixteen_convex_sets() {
        let g = path_geometry(5).unwrap();
        assert_eq!(g.convex_sets().len(), 5 * 6 / 2 + 1);
        for k in g.convex_sets().iter().filter(|k| !k.is_empty()) {
            let v = k.to_vec();
            assert_eq!(v.last().unwrap() - v[0] + 1, v.len(), "{k} is not an interval");
        }
        assert_eq!(path_geometry(1).unwrap().convex_sets(), &[SubsetMask::EMPTY, m(&[0])]);
    }

    #[test]
    fn star_components() {
        let t = TreeSpec::star(3).unwrap();
        let comps = t.components_without(0);
        assert_eq!(comps, vec![(1, m(&[1])), (2, m(&[2])), (3, m(&[3]))]);
        assert_eq!(t.components_without(1), vec![(0, m(&[0, 2, 3]))]);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut all = Vec::new();
        for_each_combination(4, 2, |c| {
            all.push(c.to_vec());
            false
        });
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_combination(3, 4, |_| {
            count += 1;
            false
        });
        assert_eq!(count, 0);
    }
}
