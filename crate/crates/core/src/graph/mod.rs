//! Lazy adjacency oracles for infinite, connected, locally-finite graphs.
//!
//! A [`Graph`] pairs a [`Family`] (a deterministic neighbor oracle over a
//! vertex universe) with a root vertex. Nothing is materialized until a
//! [`Ball`] is requested; the ball holds exact BFS distances, a shell index
//! and the ordered edge list used by every supremum in the crate.

mod ball;
mod families;
mod verify;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

pub use ball::{Ball, Window};
pub use families::{Ladder, Lattice, RandomBounded, Ray, Tree};
pub use verify::{GraphDiagnostics, PropertyCheck};

use crate::error::{Error, Result};

/// Default ceiling on the number of vertices in a materialized ball.
pub const DEFAULT_VERTEX_BUDGET: u64 = 10_000_000;

/// Canonical vertex token. Each family maps its vertices injectively onto
/// a pair of integers; ordering is lexicographic on that pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub [i64; 2]);

impl VertexId {
    pub const fn new(a: i64, b: i64) -> Self {
        VertexId([a, b])
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn second(&self) -> i64 {
        self.0[1]
    }
}

/// Lattice coordinates exposed to the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coordinates {
    pub x: i64,
    pub y: Option<i64>,
}

/// A vertex universe together with its neighbor oracle.
///
/// Implementations must be pure: the same vertex always yields the same
/// neighbor list, sorted by [`VertexId`] order, without self-loops or
/// duplicates, and adjacency must be symmetric.
pub trait Family: Send + Sync + fmt::Debug {
    /// Descriptor string this family was built from (e.g. `tree:3`).
    fn descriptor(&self) -> String;

    /// The canonical origin, used as root unless overridden.
    fn origin(&self) -> VertexId;

    fn degree_bound(&self) -> Option<usize>;

    fn contains(&self, v: &VertexId) -> bool;

    /// Neighbors of a vertex already known to be in the universe.
    fn neighbors_unchecked(&self, v: &VertexId) -> Result<Vec<VertexId>>;

    fn format_vertex(&self, v: &VertexId) -> String;

    fn parse_vertex(&self, s: &str) -> Result<VertexId>;

    fn coordinates(&self, _v: &VertexId) -> Option<Coordinates> {
        None
    }

    /// True when the family is infinite and connected, so every BFS shell
    /// around any root is nonempty and consecutive shells are joined by
    /// at least one edge.
    fn has_escaping_ray(&self) -> bool {
        false
    }
}

/// A rooted graph: a family, the fixed vertex `a`, and the vertex budget
/// applied to ball construction.
#[derive(Clone)]
pub struct Graph {
    family: Arc<dyn Family>,
    root: VertexId,
    budget: u64,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("family", &self.family.descriptor())
            .field("root", &self.family.format_vertex(&self.root))
            .field("budget", &self.budget)
            .finish()
    }
}

impl Graph {
    pub fn new(family: Arc<dyn Family>) -> Self {
        let root = family.origin();
        Graph {
            family,
            root,
            budget: DEFAULT_VERTEX_BUDGET,
        }
    }

    /// Builds one of the built-in families from its descriptor:
    /// `ray`, `tree:<q>`, `lattice:<d>`, `ladder`, `random:<seed>:<maxdeg>`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidDescriptor {
            descriptor: descriptor.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = descriptor.trim().split(':').collect();
        let family: Arc<dyn Family> = match parts.as_slice() {
            ["ray"] => Arc::new(Ray),
            ["ladder"] => Arc::new(Ladder),
            ["tree", q] => {
                let q: u32 = q.parse().map_err(|_| bad("tree degree must be an integer"))?;
                Arc::new(Tree::new(q).ok_or_else(|| bad("tree degree must be at least 2"))?)
            }
            ["lattice", d] => {
                let d: u32 = d.parse().map_err(|_| bad("lattice dimension must be an integer"))?;
                Arc::new(Lattice::new(d).ok_or_else(|| bad("lattice dimension must be 1 or 2"))?)
            }
            ["random", seed, maxdeg] => {
                let seed: u64 = seed.parse().map_err(|_| bad("seed must be a u64"))?;
                let maxdeg: u32 = maxdeg.parse().map_err(|_| bad("maxdeg must be an integer"))?;
                Arc::new(
                    RandomBounded::new(seed, maxdeg)
                        .ok_or_else(|| bad("maxdeg must be at least 2"))?,
                )
            }
            _ => return Err(bad("expected ray, tree:<q>, lattice:<d>, ladder or random:<seed>:<maxdeg>")),
        };
        Ok(Graph::new(family))
    }

    /// Re-roots the graph at the vertex with the given encoding.
    pub fn with_root(mut self, encoding: &str) -> Result<Self> {
        self.root = self.parse_vertex(encoding)?;
        Ok(self)
    }

    pub fn with_root_vertex(mut self, root: VertexId) -> Result<Self> {
        self.check(&root)?;
        self.root = root;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn family(&self) -> &dyn Family {
        self.family.as_ref()
    }

    pub fn descriptor(&self) -> String {
        self.family.descriptor()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.family.degree_bound()
    }

    pub fn format_vertex(&self, v: &VertexId) -> String {
        self.family.format_vertex(v)
    }

    pub fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        let v = self.family.parse_vertex(s.trim())?;
        self.check(&v)?;
        Ok(v)
    }

    fn check(&self, v: &VertexId) -> Result<()> {
        if self.family.contains(v) {
            Ok(())
        } else {
            Err(Error::invalid_vertex(
                format!("{:?}", v.0),
                format!("not a vertex of {}", self.family.descriptor()),
            ))
        }
    }

    /// Adjacent vertices of `v`, sorted in canonical order.
    pub fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        self.check(v)?;
        self.family.neighbors_unchecked(v)
    }

    /// Exact distance `d(a, v)` by layered BFS from the root, stopping as
    /// soon as the layer containing `v` is reached.
    pub fn distance(&self, v: &VertexId) -> Result<u64> {
        self.check(v)?;
        if *v == self.root {
            return Ok(0);
        }
        let mut seen: HashSet<VertexId> = HashSet::new();
        seen.insert(self.root);
        let mut frontier = vec![self.root];
        let mut depth = 0u64;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for u in &frontier {
                for w in self.family.neighbors_unchecked(u)? {
                    if w == *v {
                        return Ok(depth);
                    }
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
            if seen.len() as u64 > self.budget {
                return Err(Error::BudgetExceeded {
                    radius: depth,
                    estimated: seen.len() as u64,
                    budget: self.budget,
                    max_feasible_radius: depth.saturating_sub(1),
                });
            }
            frontier = next;
        }
        Err(Error::invalid_vertex(
            self.format_vertex(v),
            "not reachable from the root",
        ))
    }

    /// Distances of several vertices from one layered BFS, which stops once
    /// every target is found or after `cap` layers (missing targets are
    /// reported as `None`).
    pub fn distances_to(&self, targets: &[VertexId], cap: u64) -> Result<Vec<Option<u64>>> {
        for t in targets {
            self.check(t)?;
        }
        let mut found: std::collections::HashMap<VertexId, u64> = std::collections::HashMap::new();
        let wanted: HashSet<VertexId> = targets.iter().copied().collect();
        let mut seen: HashSet<VertexId> = HashSet::new();
        seen.insert(self.root);
        let mut frontier = vec![self.root];
        let mut depth = 0u64;
        loop {
            for v in &frontier {
                if wanted.contains(v) {
                    found.insert(*v, depth);
                }
            }
            if found.len() == wanted.len() || depth == cap || frontier.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for u in &frontier {
                for w in self.family.neighbors_unchecked(u)? {
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
            if seen.len() as u64 > self.budget {
                return Err(Error::BudgetExceeded {
                    radius: depth + 1,
                    estimated: seen.len() as u64,
                    budget: self.budget,
                    max_feasible_radius: depth,
                });
            }
            frontier = next;
            depth += 1;
        }
        Ok(targets.iter().map(|t| found.get(t).copied()).collect())
    }

    /// Materializes the radius-`radius` ball around the root.
    pub fn ball(&self, radius: u64) -> Result<Ball> {
        Ball::build(self, radius)
    }

    /// Checks the oracle contract on the radius-`radius` ball.
    pub fn verify(&self, radius: u64) -> Result<GraphDiagnostics> {
        verify::verify_graph(self, radius)
    }

    /// Plain BFS distances up to `radius`, in discovery order. Used where a
    /// code path must stay independent of [`Ball`].
    pub fn bfs_layers(&self, radius: u64) -> Result<Vec<(VertexId, u64)>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(self.root);
        queue.push_back((self.root, 0u64));
        while let Some((v, d)) = queue.pop_front() {
            out.push((v, d));
            if d == radius {
                continue;
            }
            for w in self.family.neighbors_unchecked(&v)? {
                if seen.insert(w) {
                    queue.push_back((w, d + 1));
                }
            }
            if seen.len() as u64 > self.budget {
                return Err(Error::BudgetExceeded {
                    radius,
                    estimated: seen.len() as u64,
                    budget: self.budget,
                    max_feasible_radius: d,
                });
            }
        }
        Ok(out)
    }
}
