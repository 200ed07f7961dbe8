use std::collections::{HashMap, HashSet};
use std::ops::Range;
use std::sync::Arc;

use once_cell::sync::OnceCell;
use rayon::prelude::*;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

const CHUNK: usize = 4096;

/// A materialized ball `B_R` around the root.
///
/// Vertices are numbered shell by shell and sorted by [`VertexId`] inside a
/// shell, so index order is a valid BFS order and construction is
/// reproducible. Every vertex with `dist ≤ R-1` stores its full neighbor
/// list; vertices on the outer shell store only their neighbors on shell
/// `R-1` (the rest may lie outside the ball).
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    radius: u64,
    vertices: Vec<VertexId>,
    dist: Vec<u32>,
    shell_start: Vec<usize>,
    adj_start: Vec<usize>,
    adj: Vec<u32>,
    index: HashMap<VertexId, u32>,
}

impl Ball {
    pub fn build(graph: &Graph, radius: u64) -> Result<Ball> {
        if radius > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!("radius {radius} is too large")));
        }
        let budget = graph.budget();
        let root = graph.root();
        let mut vertices = vec![root];
        let mut dist = vec![0u32];
        let mut shell_start = vec![0usize, 1];
        let mut index = HashMap::new();
        index.insert(root, 0u32);
        let mut lists: Vec<Vec<VertexId>> = Vec::new();

        for n in 0..radius {
            let shell = shell_start[n as usize]..shell_start[n as usize + 1];
            let mut fresh: HashSet<VertexId> = HashSet::new();
            let mut processed = 0usize;
            for chunk in vertices[shell.clone()].chunks(CHUNK) {
                let nbrs: Vec<Vec<VertexId>> = chunk
                    .par_iter()
                    .map(|v| graph.family().neighbors_unchecked(v))
                    .collect::<Result<_>>()?;
                for list in &nbrs {
                    fresh.extend(list.iter().filter(|w| !index.contains_key(w)));
                }
                lists.extend(nbrs);
                processed += chunk.len();
                if (vertices.len() + fresh.len()) as u64 > budget {
                    return Err(budget_error(
                        radius,
                        n,
                        vertices.len(),
                        shell.len(),
                        fresh.len() as f64 * shell.len() as f64 / processed as f64,
                        budget,
                    ));
                }
            }
            let mut next: Vec<VertexId> = fresh.into_iter().collect();
            next.sort_unstable();
            for v in next {
                index.insert(v, vertices.len() as u32);
                vertices.push(v);
                dist.push(n as u32 + 1);
            }
            shell_start.push(vertices.len());
        }

        // Full lists for the interior; inward lists for the outer shell.
        let outer = shell_start[radius as usize]..vertices.len();
        let mut inward: Vec<Vec<u32>> = vec![Vec::new(); outer.len()];
        let mut adj_start = Vec::with_capacity(vertices.len() + 1);
        let mut adj = Vec::new();
        adj_start.push(0);
        for (i, list) in lists.iter().enumerate() {
            for w in list {
                let j = index[w];
                adj.push(j);
                if outer.contains(&(j as usize)) {
                    inward[j as usize - outer.start].push(i as u32);
                }
            }
            adj_start.push(adj.len());
        }
        for mut list in inward {
            list.sort_unstable_by_key(|&j| vertices[j as usize]);
            list.dedup();
            adj.extend(list);
            adj_start.push(adj.len());
        }

        Ok(Ball {
            radius,
            vertices,
            dist,
            shell_start,
            adj_start,
            adj,
            index,
        })
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    pub fn dist(&self, i: usize) -> u64 {
        self.dist[i] as u64
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    pub fn distance_of(&self, v: &VertexId) -> Option<u64> {
        self.index_of(v).map(|i| self.dist(i))
    }

    /// Index range of shell `n`; empty when `n > R`.
    pub fn shell(&self, n: u64) -> Range<usize> {
        match (self.shell_start.get(n as usize), self.shell_start.get(n as usize + 1)) {
            (Some(&a), Some(&b)) => a..b,
            _ => self.len()..self.len(),
        }
    }

    pub fn shell_sizes(&self) -> Vec<usize> {
        self.shell_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Neighbors of vertex `i` known to the ball: all of them when
    /// `dist(i) < R`, only those on shell `R-1` otherwise.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[self.adj_start[i]..self.adj_start[i + 1]]
            .iter()
            .map(|&j| j as usize)
    }

    /// True when every neighbor of vertex `i` is stored.
    pub fn is_interior(&self, i: usize) -> bool {
        (self.dist[i] as u64) < self.radius
    }

    /// Ordered adjacent pairs `(v, w)` with `dist(v) ≤ R-1`, each once.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.shell(self.radius).start)
            .flat_map(move |i| self.neighbors(i).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj_start[self.shell(self.radius).start]
    }
}

fn budget_error(
    radius: u64,
    shell: u64,
    total: usize,
    shell_len: usize,
    next_estimate: f64,
    budget: u64,
) -> Error {
    let ratio = (next_estimate / shell_len.max(1) as f64).max(1.0);
    let mut estimate = total as f64;
    let mut layer = next_estimate;
    for _ in shell..radius {
        estimate += layer;
        layer *= ratio;
        if estimate > 1e18 {
            break;
        }
    }
    Error::BudgetExceeded {
        radius,
        estimated: estimate.min(u64::MAX as f64) as u64,
        budget,
        max_feasible_radius: shell,
    }
}

/// A graph paired with a working radius whose ball is built on first use
/// and then shared.
#[derive(Debug, Clone)]
pub struct Window {
    graph: Graph,
    radius: u64,
    ball: OnceCell<Arc<Ball>>,
}

impl Window {
    pub fn new(graph: Graph, radius: u64) -> Self {
        Window {
            graph,
            radius,
            ball: OnceCell::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn ball(&self) -> Result<Arc<Ball>> {
        self.ball
            .get_or_try_init(|| Ball::build(&self.graph, self.radius).map(Arc::new))
            .cloned()
    }

    pub fn is_built(&self) -> bool {
        self.ball.get().is_some()
    }
}
