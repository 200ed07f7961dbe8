use serde::Serialize;

use super::{Ball, Graph};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDiagnostics {
    pub family: String,
    pub radius: u64,
    pub vertices: usize,
    pub checks: Vec<PropertyCheck>,
}

impl GraphDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, property: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

struct Tally {
    name: &'static str,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, first_failure: None }
    }

    fn fail(&mut self, msg: impl FnOnce() -> String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(msg());
        }
    }

    fn finish(self) -> PropertyCheck {
        PropertyCheck {
            property: self.name.into(),
            passed: self.first_failure.is_none(),
            counterexample: self.first_failure,
        }
    }
}

pub(crate) fn verify_graph(g: &Graph, radius: u64) -> Result<GraphDiagnostics> {
    let ball = g.ball(radius)?;
    let fam = g.family();
    let fmt = |i: usize| g.format_vertex(&ball.vertex(i));

    let mut symmetry = Tally::new("symmetry");
    let mut simple = Tally::new("simplicity");
    let mut determinism = Tally::new("determinism");
    let mut degree = Tally::new("degree_bound");
    let mut ordered = Tally::new("sorted_neighbors");
    let mut layered = Tally::new("layered_bfs");
    let mut lipschitz = Tally::new("edge_distance");

    for i in 0..ball.len() {
        let v = ball.vertex(i);
        let first = fam.neighbors_unchecked(&v)?;
        let second = fam.neighbors_unchecked(&v)?;
        if first != second {
            determinism.fail(|| fmt(i));
        }
        if first.contains(&v) {
            simple.fail(|| format!("self-loop at {}", fmt(i)));
        }
        if first.windows(2).any(|w| w[0] == w[1]) {
            simple.fail(|| format!("duplicate neighbor at {}", fmt(i)));
        }
        if first.windows(2).any(|w| w[0] > w[1]) {
            ordered.fail(|| fmt(i));
        }
        if let Some(bound) = g.degree_bound() {
            if first.len() > bound {
                degree.fail(|| format!("{} has degree {} > {bound}", fmt(i), first.len()));
            }
        }
        for w in &first {
            if !fam.neighbors_unchecked(w)?.contains(&v) {
                symmetry.fail(|| format!("{} -> {} has no reverse", fmt(i), g.format_vertex(w)));
            }
        }
        let n = ball.dist(i);
        let dists: Vec<Option<u64>> = first.iter().map(|w| ball.distance_of(w)).collect();
        if n >= 1 && !dists.iter().any(|&d| d == Some(n - 1)) {
            layered.fail(|| format!("{} at distance {n} has no parent", fmt(i)));
        }
        if dists.iter().flatten().any(|&d| d + 1 < n) {
            layered.fail(|| format!("{} at distance {n} has a neighbor below {}", fmt(i), n - 1));
        }
        for (w, d) in first.iter().zip(&dists) {
            if let Some(d) = d {
                if d.abs_diff(n) > 1 {
                    lipschitz.fail(|| format!("{} ~ {}", fmt(i), g.format_vertex(w)));
                }
            }
        }
    }
    if Ball::build(g, radius)? != ball {
        determinism.fail(|| "two ball constructions differ".into());
    }

    Ok(GraphDiagnostics {
        family: g.descriptor(),
        radius,
        vertices: ball.len(),
        checks: vec![
            symmetry.finish(),
            simple.finish(),
            determinism.finish(),
            degree.finish(),
            ordered.finish(),
            layered.finish(),
            lipschitz.finish(),
        ],
    })
}
