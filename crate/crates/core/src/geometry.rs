//! Finite convex geometries stored as explicit families of convex sets.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::mask::{SubsetMask, MAX_ELEMENTS};

/// Ground sets up to this size get a precomputed closure table (2^n words).
pub const CLOSURE_TABLE_LIMIT: usize = 20;

/// A single failed axiom together with the sets that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The ground set itself is not in the family.
    MissingGroundSet,
    /// `left ∩ right` is not in the family.
    IntersectionMissing { left: SubsetMask, right: SubsetMask },
    /// No single-element extension of `set` is in the family.
    NotAccessible { set: SubsetMask },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::MissingGroundSet => write!(f, "ground set is not convex"),
            AxiomViolation::IntersectionMissing { left, right } => write!(
                f,
                "intersection {} of {} and {} is not convex",
                *left & *right,
                left,
                right
            ),
            AxiomViolation::NotAccessible { set } => {
                write!(f, "{set} has no convex single-element extension")
            }
        }
    }
}

/// Outcome of [`validate_axioms`]. Empty iff the family is a convex geometry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_ground_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ELEMENTS {
        return Err(Error::GroundSetSize(n));
    }
    Ok(())
}

fn check_fits(n: usize, set: SubsetMask) -> Result<()> {
    if let Some(element) = (set - SubsetMask::full(n)).first() {
        return Err(Error::ElementOutOfRange { element, n });
    }
    Ok(())
}

/// Checks the three convex-geometry axioms on a candidate family.
///
/// Structural problems (an element `>= n`) are reported as `Err`; axiom
/// failures are listed in the returned report, one witness per failing set.
pub fn validate_axioms(n: usize, family: &[SubsetMask]) -> Result<ValidationReport> {
    check_ground_size(n)?;
    for &k in family {
        check_fits(n, k)?;
    }
    let mut sets: Vec<SubsetMask> = family.to_vec();
    sets.sort();
    sets.dedup();
    let member = |x: SubsetMask| sets.binary_search(&x).is_ok();
    let full = SubsetMask::full(n);

    let mut violations = Vec::new();
    if !member(full) {
        violations.push(AxiomViolation::MissingGroundSet);
    }
    let mut missing: Vec<SubsetMask> = Vec::new();
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            let c = a & b;
            if !member(c) && !missing.contains(&c) {
                missing.push(c);
                violations.push(AxiomViolation::IntersectionMissing { left: a, right: b });
            }
        }
    }
    for &k in &sets {
        if k != full && !(full - k).iter().any(|a| member(k.with(a))) {
            violations.push(AxiomViolation::NotAccessible { set: k });
        }
    }
    Ok(ValidationReport { violations })
}

/// A convex geometry `(S, K)` on the ground set `{0, .., n-1}`.
///
/// The family is deduplicated and sorted by `(cardinality, mask)`. Values are
/// immutable once built; the closure table is filled lazily and shared.
#[derive(Clone)]
pub struct Geometry {
    n: usize,
    labels: Option<Vec<String>>,
    convex: Vec<SubsetMask>,
    closure_table: OnceLock<Vec<u64>>,
}

impl fmt::Debug for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Geometry")
            .field("n", &self.n)
            .field("labels", &self.labels)
            .field("convex", &self.convex)
            .finish()
    }
}

impl PartialEq for Geometry {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.convex == other.convex && self.labels == other.labels
    }
}

impl Eq for Geometry {}

impl Geometry {
    /// Builds a geometry from an explicit family, rejecting anything that
    /// fails [`validate_axioms`].
    pub fn new(n: usize, family: Vec<SubsetMask>, labels: Option<Vec<String>>) -> Result<Self> {
        let report = validate_axioms(n, &family)?;
        if !report.is_valid() {
            return Err(Error::Axioms(report));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Input(format!(
                    "expected {n} labels, found {}",
                    l.len()
                )));
            }
        }
        Ok(Self::from_valid(n, family, labels))
    }

    /// Skips validation. Callers guarantee the family is a convex geometry.
    pub(crate) fn from_valid(
        n: usize,
        mut family: Vec<SubsetMask>,
        labels: Option<Vec<String>>,
    ) -> Self {
        family.sort();
        family.dedup();
        Geometry {
            n,
            labels,
            convex: family,
            closure_table: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn convex_sets(&self) -> &[SubsetMask] {
        &self.convex
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(Error::Input(format!(
                    "expected {} labels, found {}",
                    self.n,
                    l.len()
                )));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Display name of element `i`: its label, or the index itself.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Formats a set with element labels, e.g. `{a,c}`.
    pub fn format_set(&self, set: SubsetMask) -> String {
        let names: Vec<String> = set.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Resolves a token that is either a label or a decimal index.
    pub fn resolve_element(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == token) {
                return Ok(i);
            }
        }
        match token.parse::<usize>() {
            Ok(i) if i < self.n => Ok(i),
            Ok(i) => Err(Error::ElementOutOfRange {
                element: i,
                n: self.n,
            }),
            Err(_) => Err(Error::UnknownLabel(token.to_string())),
        }
    }

    /// Parses a comma-separated list of labels or indices.
    pub fn parse_set(&self, list: &str) -> Result<SubsetMask> {
        let mut set = SubsetMask::EMPTY;
        for tok in list.split(',').filter(|t| !t.trim().is_empty()) {
            set = set.with(self.resolve_element(tok)?);
        }
        Ok(set)
    }

    /// Membership of `a` in the stored family.
    pub fn contains_set(&self, a: SubsetMask) -> bool {
        self.convex.binary_search(&a).is_ok()
    }

    fn table(&self) -> Option<&[u64]> {
        if self.n > CLOSURE_TABLE_LIMIT {
            return None;
        }
        Some(self.closure_table.get_or_init(|| self.build_closure_table()))
    }

    // tau(A) = A for convex A, otherwise the intersection of tau(A + i) over
    // i not in A; filled from the top of the subset lattice down.
    fn build_closure_table(&self) -> Vec<u64> {
        let size = 1usize << self.n;
        let full = size as u64 - 1;
        let mut table = vec![u64::MAX; size];
        for k in &self.convex {
            table[k.bits() as usize] = k.bits();
        }
        for a in (0..size).rev() {
            if table[a] != u64::MAX {
                continue;
            }
            let mut acc = full;
            let mut free = full & !(a as u64);
            while free != 0 {
                let bit = free & free.wrapping_neg();
                acc &= table[a | bit as usize];
                free ^= bit;
            }
            table[a] = acc;
        }
        table
    }

    /// Convex closure: the intersection of all convex supersets of `a`.
    pub fn closure(&self, a: SubsetMask) -> SubsetMask {
        debug_assert!(a.fits(self.n));
        if let Some(t) = self.table() {
            return SubsetMask(t[a.bits() as usize]);
        }
        self.convex
            .iter()
            .filter(|k| k.is_superset(a))
            .fold(self.ground(), |acc, &k| acc & k)
    }

    /// Closure computed by scanning the family, ignoring any table.
    pub fn closure_by_scan(&self, a: SubsetMask) -> SubsetMask {
        self.convex
            .iter()
            .filter(|k| k.is_superset(a))
            .fold(self.ground(), |acc, &k| acc & k)
    }

    pub fn is_convex(&self, a: SubsetMask) -> bool {
        self.closure(a) == a
    }

    /// `Ex(A)`: elements `a ∈ A` with `a ∉ τ(A \ {a})`.
    pub fn extreme_points(&self, a: SubsetMask) -> SubsetMask {
        a.iter()
            .filter(|&x| !self.closure(a.without(x)).contains(x))
            .collect()
    }

    /// Deletion `K \ D = {K ⊆ S \ D : K ∪ D ∈ K}`, reindexed densely.
    pub fn delete(&self, d: SubsetMask) -> Result<Geometry> {
        self.delete_with_map(d).map(|(g, _)| g)
    }

    /// Like [`Geometry::delete`], also returning the old-to-new index map.
    pub fn delete_with_map(&self, d: SubsetMask) -> Result<(Geometry, Vec<Option<usize>>)> {
        check_fits(self.n, d)?;
        let keep = self.ground() - d;
        if keep.is_empty() {
            return Err(Error::DeleteAll);
        }
        let mut old_to_new = vec![None; self.n];
        for (new, old) in keep.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let reindex = |k: SubsetMask| -> SubsetMask {
            (k - d).iter().map(|i| old_to_new[i].unwrap()).collect()
        };
        let family: Vec<SubsetMask> = self
            .convex
            .iter()
            .filter(|k| k.is_superset(d))
            .map(|&k| reindex(k))
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|i| l[i].clone()).collect());
        Ok((Geometry::from_valid(keep.len(), family, labels), old_to_new))
    }

    /// Per element, the number of convex sets of each cardinality containing it.
    pub fn degree_profile(&self) -> Vec<Vec<usize>> {
        let mut prof = vec![vec![0usize; self.n + 1]; self.n];
        for k in &self.convex {
            for i in k.iter() {
                prof[i][k.len()] += 1;
            }
        }
        prof
    }

    /// Finds the lexicographically least bijection `map` with
    /// `map(K) ∈ other` for every convex `K`, if one exists.
    pub fn isomorphic(&self, other: &Geometry) -> Option<Vec<usize>> {
        if self.n != other.n || self.convex.len() != other.convex.len() {
            return None;
        }
        let p1 = self.degree_profile();
        let p2 = other.degree_profile();
        let mut s1 = p1.clone();
        let mut s2 = p2.clone();
        s1.sort();
        s2.sort();
        if s1 != s2 {
            return None;
        }
        // sets whose largest element is k become checkable once k is mapped
        let mut by_top: Vec<Vec<SubsetMask>> = vec![Vec::new(); self.n];
        let mut empty_ok = true;
        for &k in &self.convex {
            match k.iter().last() {
                Some(top) => by_top[top].push(k),
                None => empty_ok = other.contains_set(SubsetMask::EMPTY),
            }
        }
        if !empty_ok {
            return None;
        }
        let mut map = vec![usize::MAX; self.n];
        let mut used = SubsetMask::EMPTY;
        let ctx = IsoSearch {
            p1: &p1,
            p2: &p2,
            by_top: &by_top,
            other,
        };
        ctx.extend(0, &mut map, &mut used).then_some(map)
    }
}

struct IsoSearch<'a> {
    p1: &'a [Vec<usize>],
    p2: &'a [Vec<usize>],
    by_top: &'a [Vec<SubsetMask>],
    other: &'a Geometry,
}

impl IsoSearch<'_> {
    fn extend(&self, i: usize, map: &mut [usize], used: &mut SubsetMask) -> bool {
        if i == map.len() {
            return true;
        }
        for j in 0..map.len() {
            if used.contains(j) || self.p1[i] != self.p2[j] {
                continue;
            }
            map[i] = j;
            let consistent = self.by_top[i]
                .iter()
                .all(|k| self.other.contains_set(k.map(map)));
            if consistent {
                *used = used.with(j);
                if self.extend(i + 1, map, used) {
                    return true;
                }
                *used = used.without(j);
            }
        }
        map[i] = usize::MAX;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(v.iter().copied())
    }

    fn fam(sets: &[&[usize]]) -> Vec<SubsetMask> {
        sets.iter().map(|s| m(s)).collect()
    }

    #[test]
    fn two_element_families_are_valid() {
        assert!(validate_axioms(2, &fam(&[&[0], &[0, 1]])).unwrap().is_valid());
        assert!(validate_axioms(2, &fam(&[&[0, 1]])).unwrap().is_valid());
    }

    #[test]
    fn invalid_family_reports_witnesses() {
        let r = validate_axioms(3, &fam(&[&[0], &[1], &[0, 1, 2]])).unwrap();
        assert!(!r.is_valid());
        assert!(r.violations.contains(&AxiomViolation::IntersectionMissing {
            left: m(&[0]),
            right: m(&[1])
        }));
        assert!(r
            .violations
            .contains(&AxiomViolation::NotAccessible { set: m(&[0]) }));
        assert!(!r.violations.contains(&AxiomViolation::MissingGroundSet));
    }

    #[test]
    fn missing_ground_set_reported() {
        let r = validate_axioms(2, &fam(&[&[0]])).unwrap();
        assert!(r.violations.contains(&AxiomViolation::MissingGroundSet));
    }

    #[test]
    fn out_of_range_is_structural() {
        assert!(matches!(
            validate_axioms(2, &fam(&[&[0, 2]])),
            Err(Error::ElementOutOfRange { element: 2, n: 2 })
        ));
        assert!(matches!(validate_axioms(0, &[]), Err(Error::GroundSetSize(0))));
    }

    #[test]
    fn closure_and_extreme_points_on_small_geometry() {
        let g = Geometry::new(2, fam(&[&[0], &[0, 1]]), None).unwrap();
        assert_eq!(g.closure(SubsetMask::EMPTY), m(&[0]));
        assert_eq!(g.closure(g.ground()), g.ground());
        assert_eq!(g.extreme_points(g.ground()), m(&[1]));
        assert_eq!(g.extreme_points(SubsetMask::EMPTY), SubsetMask::EMPTY);
        assert!(!g.is_convex(SubsetMask::EMPTY));
        assert!(g.is_convex(g.ground()));
    }

    #[test]
    fn table_and_scan_agree() {
        // vertex geometry of the path 0-1-2-3
        let mut sets = vec![SubsetMask::EMPTY];
        for i in 0..4 {
            for j in i..4 {
                sets.push((i..=j).collect());
            }
        }
        let g = Geometry::new(4, sets, None).unwrap();
        for a in 0..16u64 {
            let a = SubsetMask(a);
            assert_eq!(g.closure(a), g.closure_by_scan(a));
        }
        assert_eq!(g.closure(m(&[0, 3])), m(&[0, 1, 2, 3]));
    }

    #[test]
    fn delete_empty_is_identity() {
        let g = Geometry::new(2, fam(&[&[0], &[0, 1]]), None).unwrap();
        let (h, map) = g.delete_with_map(SubsetMask::EMPTY).unwrap();
        assert_eq!(g, h);
        assert_eq!(map, vec![Some(0), Some(1)]);
    }

    #[test]
    fn delete_everything_fails() {
        let g = Geometry::new(2, fam(&[&[0], &[0, 1]]), None).unwrap();
        assert!(matches!(g.delete(g.ground()), Err(Error::DeleteAll)));
    }

    #[test]
    fn delete_keeps_labels() {
        let g = Geometry::new(
            3,
            fam(&[&[], &[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 1, 2]]),
            Some(vec!["a".into(), "b".into(), "c".into()]),
        )
        .unwrap();
        let (h, map) = g.delete_with_map(m(&[1])).unwrap();
        assert_eq!(map, vec![Some(0), None, Some(1)]);
        assert_eq!(h.labels().unwrap(), &["a".to_string(), "c".to_string()]);
        // K ∪ {b} convex: {b},{a,b},{b,c},{a,b,c}
        assert_eq!(h.convex_sets(), &fam(&[&[], &[0], &[1], &[0, 1]])[..]);
    }

    #[test]
    fn isomorphism_witnesses() {
        let g = Geometry::new(2, fam(&[&[0], &[0, 1]]), None).unwrap();
        let h = Geometry::new(2, fam(&[&[1], &[0, 1]]), None).unwrap();
        assert_eq!(g.isomorphic(&g), Some(vec![0, 1]));
        assert_eq!(g.isomorphic(&h), Some(vec![1, 0]));
        let a = Geometry::new(2, fam(&[&[0, 1]]), None).unwrap();
        let b = Geometry::new(2, fam(&[&[], &[0], &[1], &[0, 1]]), None).unwrap();
        assert_eq!(a.isomorphic(&b), None);
    }

    #[test]
    fn resolve_labels_and_indices() {
        let g = Geometry::new(2, fam(&[&[0], &[0, 1]]), Some(vec!["x".into(), "y".into()]))
            .unwrap();
        assert_eq!(g.parse_set("y, 0").unwrap(), m(&[0, 1]));
        assert!(g.resolve_element("z").is_err());
        assert!(g.resolve_element("5").is_err());
        assert_eq!(g.format_set(m(&[0, 1])), "{x,y}");
    }
}
