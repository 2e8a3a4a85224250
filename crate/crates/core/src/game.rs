//! The achievement game GEN(S, W) and its brute-force Sprague-Grundy solver.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::mask::SubsetMask;

/// A Sprague-Grundy value.
pub type NimValue = u32;

/// Ground sets above this size are refused by the exhaustive solver.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Smallest non-negative integer not in `values`.
pub fn mex<I: IntoIterator<Item = NimValue>>(values: I) -> NimValue {
    let mut seen: u128 = 0;
    let mut spill: Vec<NimValue> = Vec::new();
    for v in values {
        if v < 128 {
            seen |= 1u128 << v;
        } else {
            spill.push(v);
        }
    }
    let low = seen.trailing_ones();
    if low < 128 {
        return low;
    }
    spill.sort_unstable();
    spill.dedup();
    let mut m = 128;
    for v in spill {
        if v == m {
            m += 1;
        } else if v > m {
            break;
        }
    }
    m
}

/// A game position: the set of points chosen so far.
pub type Position = SubsetMask;

/// GEN(S, W): a convex geometry plus a nonempty winning set.
#[derive(Clone, Debug)]
pub struct GameSpec {
    geometry: Arc<Geometry>,
    winning: SubsetMask,
}

impl GameSpec {
    pub fn new(geometry: impl Into<Arc<Geometry>>, winning: SubsetMask) -> Result<Self> {
        let geometry = geometry.into();
        if winning.is_empty() {
            return Err(Error::EmptyWinningSet);
        }
        if let Some(element) = (winning - geometry.ground()).first() {
            return Err(Error::ElementOutOfRange {
                element,
                n: geometry.n(),
            });
        }
        Ok(GameSpec { geometry, winning })
    }

    /// GEN(S) = GEN(S, S).
    pub fn full(geometry: impl Into<Arc<Geometry>>) -> Self {
        let geometry = geometry.into();
        let w = geometry.ground();
        GameSpec {
            geometry,
            winning: w,
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn geometry_arc(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn winning(&self) -> SubsetMask {
        self.winning
    }

    pub fn n(&self) -> usize {
        self.geometry.n()
    }

    pub fn with_winning(&self, winning: SubsetMask) -> Result<Self> {
        GameSpec::new(self.geometry.clone(), winning)
    }

    fn check_position(&self, p: Position) -> Result<()> {
        if let Some(element) = (p - self.geometry.ground()).first() {
            return Err(Error::ElementOutOfRange {
                element,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `W ⊆ τ(P)`.
    pub fn is_generating(&self, p: Position) -> bool {
        self.winning.is_subset(self.geometry.closure(p))
    }

    /// Terminal positions are exactly the generating ones.
    pub fn is_terminal(&self, p: Position) -> bool {
        self.is_generating(p)
    }

    /// `Opt(P)`: empty for generating `P`, else every one-point extension.
    pub fn options(&self, p: Position) -> Vec<Position> {
        if self.is_generating(p) {
            return Vec::new();
        }
        (self.geometry.ground() - p).iter().map(|s| p.with(s)).collect()
    }
}

/// Memoized exhaustive solver over the position DAG of one game.
///
/// The memo is a flat table indexed by position mask, private to this value.
pub struct BruteForce<'a> {
    spec: &'a GameSpec,
    memo: Vec<u8>,
}

const UNKNOWN: u8 = u8::MAX;

impl<'a> BruteForce<'a> {
    pub fn new(spec: &'a GameSpec) -> Result<Self> {
        let n = spec.n();
        if n > BRUTE_FORCE_LIMIT {
            return Err(Error::TooLarge {
                n,
                limit: BRUTE_FORCE_LIMIT,
                what: "the exhaustive solver",
            });
        }
        Ok(BruteForce {
            spec,
            memo: vec![UNKNOWN; 1usize << n],
        })
    }

    pub fn spec(&self) -> &GameSpec {
        self.spec
    }

    /// `nim(P) = mex(nim(Opt(P)))`.
    pub fn nim(&mut self, p: Position) -> Result<NimValue> {
        self.spec.check_position(p)?;
        Ok(self.nim_unchecked(p))
    }

    fn nim_unchecked(&mut self, p: Position) -> NimValue {
        let cached = self.memo[p.bits() as usize];
        if cached != UNKNOWN {
            return cached as NimValue;
        }
        let value = if self.spec.is_generating(p) {
            0
        } else {
            let free = self.spec.geometry().ground() - p;
            let mut seen: u64 = 0;
            for s in free.iter() {
                let v = self.nim_unchecked(p.with(s));
                seen |= 1u64 << v;
            }
            seen.trailing_ones()
        };
        self.memo[p.bits() as usize] = value as u8;
        value
    }

    /// Some option with nim value 0 (least mask first), if one exists.
    pub fn optimal_move(&mut self, p: Position) -> Result<Option<Position>> {
        self.spec.check_position(p)?;
        if self.spec.is_terminal(p) {
            return Err(Error::TerminalPosition);
        }
        let mut opts = self.spec.options(p);
        opts.sort_by_key(|o| o.bits());
        for o in opts {
            if self.nim_unchecked(o) == 0 {
                return Ok(Some(o));
            }
        }
        Ok(None)
    }

    /// All positions reachable from the empty position, in mask order.
    pub fn reachable(&self) -> Vec<Position> {
        let n = self.spec.n();
        let mut seen = vec![false; 1usize << n];
        let mut stack = vec![SubsetMask::EMPTY];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for o in self.spec.options(p) {
                if !seen[o.bits() as usize] {
                    seen[o.bits() as usize] = true;
                    stack.push(o);
                }
            }
        }
        (0..seen.len())
            .filter(|&i| seen[i])
            .map(|i| SubsetMask(i as u64))
            .collect()
    }
}

/// Nim value of a single position.
pub fn nim_of_position(spec: &GameSpec, p: Position) -> Result<NimValue> {
    BruteForce::new(spec)?.nim(p)
}

/// Nim value of the game: the value of the empty starting position.
pub fn nim_bruteforce(spec: &GameSpec) -> Result<NimValue> {
    nim_of_position(spec, SubsetMask::EMPTY)
}

pub fn optimal_move(spec: &GameSpec, p: Position) -> Result<Option<Position>> {
    BruteForce::new(spec)?.optimal_move(p)
}

/// An explicit finite digraph given by successor lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    pub successors: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(vertices: usize) -> Self {
        Digraph {
            successors: vec![Vec::new(); vertices],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize) {
        self.successors[from].push(to);
    }

    /// The nimber `*n`: vertex `k` is `*k` with arcs to every `*j`, `j < k`.
    pub fn nimber(n: usize) -> Self {
        let mut g = Digraph::new(n + 1);
        for k in 0..=n {
            for j in 0..k {
                g.add_arc(k, j);
            }
        }
        g
    }
}

/// Grundy value of every vertex of an acyclic digraph.
pub fn grundy_of_dag(g: &Digraph) -> Result<Vec<NimValue>> {
    let n = g.successors.len();
    for s in &g.successors {
        if let Some(&bad) = s.iter().find(|&&t| t >= n) {
            return Err(Error::ElementOutOfRange { element: bad, n });
        }
    }
    // iterative DFS post-order; state 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut value = vec![0 as NimValue; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = g.successors[v].get(*next) {
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return Err(Error::Cycle(w)),
                    _ => {}
                }
            } else {
                value[v] = mex(g.successors[v].iter().map(|&w| value[w]));
                state[v] = 2;
                stack.pop();
            }
        }
    }
    Ok(value)
}
