//! Complex-valued functions on the vertices of a rooted graph.

pub mod certificate;
pub mod dsl;
mod table;

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

pub use certificate::{TailCertificate, TailMap};
pub use dsl::Expr;
pub use table::{format_complex, parse_complex, Table};

use crate::error::{Error, Result};
use crate::graph::{Ball, Graph, VertexId};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The explicit extremal functions used in the norm and compactness
/// arguments. All but `Characteristic` depend only on `d(a, v)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `v ↦ d(a, v)`.
    Distance,
    /// Rises with slope one to `m` at distance `m`, back to zero at `2m`.
    Tent(u64),
    /// Zero below `⌊m/2⌋`, slope two up to `m`, then constant `m`.
    Ramp(u64),
    /// `v ↦ 1 + 1/2 + ... + 1/d(a, v)`.
    Harmonic,
    Characteristic(VertexId),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Derived {
    Scaled(Complex64, GraphFunction),
    Product(GraphFunction, GraphFunction),
    /// `1 / (ψ - λ)`, built only after `|ψ - λ| ≥ c` was checked.
    Resolvent {
        psi: GraphFunction,
        lambda: Complex64,
        c: f64,
    },
    /// `f` on `d ≤ n`, `(2n - d)/d · f` on `n < d < 2n`, zero beyond.
    Cutoff { f: GraphFunction, n: u64 },
    /// `f` minus its cutoff at `n`.
    Residual { f: GraphFunction, n: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    /// Expression in `d` alone.
    Radial(Expr),
    /// Expression reading lattice coordinates.
    Expression(Expr),
    FiniteSupport(Table),
    Witness(Witness),
    Constant(Complex64),
    Derived(Box<Derived>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Empty,
    /// Zero outside the closed ball of this radius.
    Within(u64),
    Unbounded,
}

impl Support {
    /// True when the function vanishes at every vertex with `d > r`.
    pub fn inside(self, r: u64) -> bool {
        match self {
            Support::Empty => true,
            Support::Within(s) => s <= r,
            Support::Unbounded => false,
        }
    }

    pub fn radius(self) -> Option<u64> {
        match self {
            Support::Empty => Some(0),
            Support::Within(s) => Some(s),
            Support::Unbounded => None,
        }
    }

    fn meet(self, other: Support) -> Support {
        use Support::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Within(a), Within(b)) => Within(a.min(b)),
            (Within(a), Unbounded) | (Unbounded, Within(a)) => Within(a),
            (Unbounded, Unbounded) => Unbounded,
        }
    }
}

/// Where a sampled value was read: a whole shell (radial functions) or a
/// single vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Shell(u64),
    Vertex(VertexId, u64),
}

impl Site {
    pub fn dist(&self) -> u64 {
        match self {
            Site::Shell(n) | Site::Vertex(_, n) => *n,
        }
    }

    pub fn describe(&self, g: &Graph) -> String {
        match self {
            Site::Shell(n) => format!("d={n}"),
            Site::Vertex(v, _) => g.format_vertex(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphFunction {
    body: Body,
    tail: Option<TailCertificate>,
    label: String,
}

impl fmt::Display for GraphFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn tent(m: u64, n: u64) -> f64 {
    if n <= m {
        n as f64
    } else if n <= 2 * m {
        (2 * m - n) as f64
    } else {
        0.0
    }
}

fn ramp(m: u64, n: u64) -> f64 {
    if n < m / 2 {
        0.0
    } else if n < m {
        (2 * n + 2) as f64 - m as f64
    } else {
        m as f64
    }
}

pub fn harmonic_number(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn cutoff_factor(n: u64, d: u64) -> f64 {
    if d <= n {
        1.0
    } else if d < 2 * n {
        (2 * n - d) as f64 / d as f64
    } else {
        0.0
    }
}

impl GraphFunction {
    fn new(body: Body, label: impl Into<String>) -> Self {
        GraphFunction {
            body,
            tail: None,
            label: label.into(),
        }
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Attaches user-supplied tail data, replacing any built-in certificate.
    pub fn with_certificate(mut self, cert: TailCertificate) -> Self {
        self.tail = Some(cert);
        self
    }

    /// The explicit certificate, or the built-in one for recognised bodies.
    pub fn certificate(&self) -> Option<TailCertificate> {
        if let Some(t) = &self.tail {
            return Some(t.clone());
        }
        match &self.body {
            Body::Constant(c) => Some(TailCertificate::constant(*c)),
            Body::Radial(e) => certificate::catalog(e),
            Body::Witness(Witness::Distance) => Some(TailCertificate::distance()),
            Body::Witness(Witness::Harmonic) => Some(TailCertificate::harmonic()),
            Body::Witness(Witness::Ramp(m)) => {
                let p: Vec<Complex64> = (0..=*m).map(|n| Complex64::new(ramp(*m, n), 0.0)).collect();
                Some(TailCertificate::eventually_constant(&p))
            }
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(c, f) => f.certificate().map(|t| t.scaled(*c)),
                Derived::Residual { f, n } => f.certificate().map(|t| t.starting_at(2 * n)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_constant(&self) -> Option<Complex64> {
        match &self.body {
            Body::Constant(c) => Some(*c),
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(c, f) => f.is_constant().map(|z| c * z),
                _ => None,
            },
            _ => None,
        }
    }

    /// True when `f(v)` depends only on `d(a, v)` for this graph's root.
    pub fn is_radial(&self, g: &Graph) -> bool {
        match &self.body {
            Body::Radial(_) | Body::Constant(_) => true,
            Body::Expression(_) | Body::FiniteSupport(_) => false,
            Body::Witness(Witness::Characteristic(v)) => *v == g.root(),
            Body::Witness(_) => true,
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(_, f) | Derived::Cutoff { f, .. } | Derived::Residual { f, .. } => f.is_radial(g),
                Derived::Resolvent { psi, .. } => psi.is_radial(g),
                Derived::Product(a, b) => a.is_radial(g) && b.is_radial(g),
            },
        }
    }

    fn needs_distance(&self) -> bool {
        match &self.body {
            Body::Radial(_) | Body::Expression(_) => true,
            Body::FiniteSupport(_) | Body::Constant(_) => false,
            Body::Witness(w) => !matches!(w, Witness::Characteristic(_)),
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(_, f) => f.needs_distance(),
                Derived::Product(a, b) => a.needs_distance() || b.needs_distance(),
                Derived::Resolvent { psi, .. } => psi.needs_distance(),
                Derived::Cutoff { .. } | Derived::Residual { .. } => true,
            },
        }
    }

    /// Value at `v`, computing `d(a, v)` only when the body needs it.
    pub fn evaluate(&self, g: &Graph, v: &VertexId) -> Result<Complex64> {
        g.neighbors(v)?;
        let dist = if self.needs_distance() { g.distance(v)? } else { 0 };
        self.eval_point(g, v, dist)
    }

    /// Value at `v` whose distance to the root is already known.
    pub fn eval_point(&self, g: &Graph, v: &VertexId, dist: u64) -> Result<Complex64> {
        self.value(g, Some(v), dist)
            .map_err(|m| Error::eval(g.format_vertex(v), m))
    }

    /// Profile value on shell `n` of a radial function.
    pub fn radial_value(&self, g: &Graph, n: u64) -> Result<Complex64> {
        debug_assert!(self.is_radial(g));
        self.value(g, None, n)
            .map_err(|m| Error::eval(format!("d={n}"), m))
    }

    fn value(&self, g: &Graph, v: Option<&VertexId>, dist: u64) -> std::result::Result<Complex64, String> {
        let re = |x: f64| Complex64::new(x, 0.0);
        Ok(match &self.body {
            Body::Constant(c) => *c,
            Body::Radial(e) => e.eval_radial(dist as f64)?,
            Body::Expression(e) => {
                let v = v.ok_or("expression needs a vertex")?;
                let c = g.family().coordinates(v);
                e.eval(&dsl::Env {
                    d: dist as f64,
                    x: c.map(|c| c.x as f64),
                    y: c.and_then(|c| c.y).map(|y| y as f64),
                })?
            }
            Body::FiniteSupport(t) => t.get(v.ok_or("table needs a vertex")?),
            Body::Witness(w) => match w {
                Witness::Distance => re(dist as f64),
                Witness::Tent(m) => re(tent(*m, dist)),
                Witness::Ramp(m) => re(ramp(*m, dist)),
                Witness::Harmonic => re(harmonic_number(dist)),
                Witness::Characteristic(u) => match v {
                    Some(v) if v == u => ONE,
                    None if dist == 0 && *u == g.root() => ONE,
                    _ => ZERO,
                },
            },
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(c, f) => c * f.value(g, v, dist)?,
                Derived::Product(a, b) => {
                    let x = a.value(g, v, dist)?;
                    if x == ZERO {
                        ZERO
                    } else {
                        x * b.value(g, v, dist)?
                    }
                }
                Derived::Resolvent { psi, lambda, .. } => {
                    let gap = psi.value(g, v, dist)? - lambda;
                    if gap == ZERO {
                        return Err("resolvent pole: psi(v) equals lambda".into());
                    }
                    ONE / gap
                }
                Derived::Cutoff { f, n } => {
                    let k = cutoff_factor(*n, dist);
                    if k == 0.0 {
                        ZERO
                    } else {
                        k * f.value(g, v, dist)?
                    }
                }
                Derived::Residual { f, n } => {
                    let k = 1.0 - cutoff_factor(*n, dist);
                    if k == 0.0 {
                        ZERO
                    } else {
                        k * f.value(g, v, dist)?
                    }
                }
            },
        })
    }

    /// Radius of a ball outside which the function vanishes.
    pub fn support(&self, g: &Graph) -> Result<Support> {
        Ok(match &self.body {
            Body::Constant(c) if *c == ZERO => Support::Empty,
            Body::Constant(_) | Body::Radial(_) | Body::Expression(_) => Support::Unbounded,
            Body::FiniteSupport(t) => {
                if t.is_empty() {
                    Support::Empty
                } else {
                    let keys: Vec<VertexId> = t.support().copied().collect();
                    let d = g.distances_to(&keys, u64::MAX)?;
                    Support::Within(d.into_iter().flatten().max().unwrap_or(0))
                }
            }
            Body::Witness(w) => match w {
                Witness::Tent(m) => Support::Within(2 * m - 1),
                Witness::Characteristic(v) => Support::Within(g.distance(v)?),
                _ => Support::Unbounded,
            },
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(c, _) if *c == ZERO => Support::Empty,
                Derived::Scaled(_, f) => f.support(g)?,
                Derived::Product(a, b) => a.support(g)?.meet(b.support(g)?),
                Derived::Resolvent { .. } => Support::Unbounded,
                Derived::Cutoff { f, n } => {
                    let inner = f.support(g)?;
                    if *n == 0 {
                        Support::Empty
                    } else {
                        inner.meet(Support::Within(2 * n - 1))
                    }
                }
                Derived::Residual { f, n } => match f.support(g)? {
                    s if s.inside(*n) => Support::Empty,
                    s => s,
                },
            },
        })
    }

    /// A finite vertex list outside which the function vanishes, when one
    /// is known without touching the graph.
    pub fn support_vertices(&self) -> Option<Vec<VertexId>> {
        match &self.body {
            Body::FiniteSupport(t) => Some(t.support().copied().collect()),
            Body::Witness(Witness::Characteristic(v)) => Some(vec![*v]),
            Body::Constant(c) if *c == ZERO => Some(Vec::new()),
            Body::Derived(d) => match d.as_ref() {
                Derived::Scaled(_, f) | Derived::Cutoff { f, .. } | Derived::Residual { f, .. } => f.support_vertices(),
                Derived::Product(a, b) => match (a.support_vertices(), b.support_vertices()) {
                    (Some(x), Some(y)) => Some(if x.len() <= y.len() { x } else { y }),
                    (x, y) => x.or(y),
                },
                Derived::Resolvent { .. } => None,
            },
            _ => None,
        }
    }

    /// Values on every vertex of a ball, in ball order.
    pub fn values_on(&self, g: &Graph, ball: &Ball) -> Result<Vec<Complex64>> {
        (0..ball.len())
            .into_par_iter()
            .map(|i| self.eval_point(g, &ball.vertex(i), ball.dist(i)))
            .collect()
    }

    /// All values on `B_R` in BFS order: one per shell for radial
    /// functions, one per vertex otherwise.
    pub fn sample(&self, g: &Graph, radius: u64) -> Result<Vec<(Site, Complex64)>> {
        if self.is_radial(g) && g.family().has_escaping_ray() {
            return (0..=radius)
                .map(|n| Ok((Site::Shell(n), self.radial_value(g, n)?)))
                .collect();
        }
        let ball = g.ball(radius)?;
        let vals = self.values_on(g, &ball)?;
        Ok(vals
            .into_iter()
            .enumerate()
            .map(|(i, z)| (Site::Vertex(ball.vertex(i), ball.dist(i)), z))
            .collect())
    }
}

/// Parses a symbol. Expressions in `d` alone become radial profiles and
/// expressions without vertex attributes become constants.
pub fn parse_expression(src: &str) -> Result<GraphFunction> {
    let expr = Expr::parse(src)?;
    let label = src.trim().to_string();
    if expr.is_constant() {
        let c = expr
            .eval_radial(0.0)
            .map_err(|m| Error::eval("(constant)", m))?;
        return Ok(GraphFunction::new(Body::Constant(c), label));
    }
    let body = if expr.uses(dsl::Attr::X) || expr.uses(dsl::Attr::Y) {
        Body::Expression(expr)
    } else {
        Body::Radial(expr)
    };
    Ok(GraphFunction::new(body, label))
}

pub fn constant(c: Complex64) -> GraphFunction {
    GraphFunction::new(Body::Constant(c), format_complex(c))
}

pub fn zero() -> GraphFunction {
    constant(ZERO)
}

pub fn from_table(table: Table) -> GraphFunction {
    GraphFunction::new(Body::FiniteSupport(table), "table")
}

pub fn witness_distance() -> GraphFunction {
    GraphFunction::new(Body::Witness(Witness::Distance), "witness:distance")
}

pub fn witness_tent(m: u64) -> Result<GraphFunction> {
    if m == 0 {
        return Err(Error::InvalidParameter("tent peak must be at distance at least 1".into()));
    }
    Ok(GraphFunction::new(Body::Witness(Witness::Tent(m)), format!("witness:tent:{m}")))
}

pub fn witness_ramp(m: u64) -> Result<GraphFunction> {
    if m < 2 {
        return Err(Error::InvalidParameter("ramp target must be at distance at least 2".into()));
    }
    Ok(GraphFunction::new(Body::Witness(Witness::Ramp(m)), format!("witness:ramp:{m}")))
}

pub fn witness_harmonic() -> GraphFunction {
    GraphFunction::new(Body::Witness(Witness::Harmonic), "witness:harmonic")
}

pub fn witness_characteristic(g: &Graph, v: &VertexId) -> Result<GraphFunction> {
    g.neighbors(v)?;
    Ok(GraphFunction::new(
        Body::Witness(Witness::Characteristic(*v)),
        format!("witness:char:{}", g.format_vertex(v)),
    ))
}

pub fn scaled(c: Complex64, f: &GraphFunction) -> GraphFunction {
    let label = format!("({})*({})", format_complex(c), f.label);
    GraphFunction::new(Body::Derived(Box::new(Derived::Scaled(c, f.clone()))), label)
}

pub fn product(a: &GraphFunction, b: &GraphFunction) -> GraphFunction {
    let label = format!("({})*({})", a.label, b.label);
    GraphFunction::new(Body::Derived(Box::new(Derived::Product(a.clone(), b.clone()))), label)
}

/// The three-piece truncation shared by the density argument and `K_n`.
pub fn cutoff(f: &GraphFunction, n: u64) -> GraphFunction {
    let label = format!("cutoff({}, {n})", f.label);
    GraphFunction::new(Body::Derived(Box::new(Derived::Cutoff { f: f.clone(), n })), label)
}

pub fn residual(f: &GraphFunction, n: u64) -> GraphFunction {
    let label = format!("residual({}, {n})", f.label);
    GraphFunction::new(Body::Derived(Box::new(Derived::Residual { f: f.clone(), n })), label)
}

/// `1/(ψ - λ)` after checking `|ψ(v) - λ| ≥ c` on `B_R`. The smallest gap
/// found is reported when the check fails.
pub fn resolvent_symbol(
    psi: &GraphFunction,
    lambda: Complex64,
    c: f64,
    g: &Graph,
    radius: u64,
) -> Result<GraphFunction> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("resolvent margin c = {c} must be positive")));
    }
    let mut worst: Option<(f64, Site)> = None;
    for (site, z) in psi.sample(g, radius)? {
        let gap = (z - lambda).norm();
        if worst.as_ref().map_or(true, |(w, _)| gap < *w) {
            worst = Some((gap, site));
        }
    }
    if let Some((gap, site)) = worst {
        if gap < c && !crate::tolerance::close(gap, c) {
            return Err(Error::ResolventUndefined {
                vertex: site.describe(g),
                gap,
                c,
            });
        }
    }
    let label = format!("1/(({})-({}))", psi.label, format_complex(lambda));
    Ok(GraphFunction::new(
        Body::Derived(Box::new(Derived::Resolvent {
            psi: psi.clone(),
            lambda,
            c,
        })),
        label,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray() -> Graph {
        Graph::parse("ray").unwrap()
    }

    fn at(f: &GraphFunction, g: &Graph, enc: &str) -> Complex64 {
        f.evaluate(g, &g.parse_vertex(enc).unwrap()).unwrap()
    }

    #[test]
    fn witnesses() {
        let g = ray();
        assert_eq!(at(&witness_distance(), &g, "0"), ZERO);
        assert!((at(&witness_harmonic(), &g, "3").re - 11.0 / 6.0).abs() < 1e-15);
        assert_eq!(at(&witness_harmonic(), &g, "2").re, 1.5);
        let t = witness_tent(5).unwrap();
        assert_eq!(at(&t, &g, "5").re, 5.0);
        assert_eq!(at(&t, &g, "12").re, 0.0);
        assert_eq!(t.support(&g).unwrap(), Support::Within(9));
        let r = witness_ramp(6).unwrap();
        assert_eq!(at(&r, &g, "6").re, 6.0);
        assert_eq!(at(&r, &g, "2").re, 0.0);
        assert_eq!(at(&r, &g, "3").re, 2.0);
        assert!(witness_tent(0).is_err());
        assert!(witness_ramp(1).is_err());
    }

    #[test]
    fn characteristic() {
        let g = Graph::parse("tree:3").unwrap();
        let v = g.parse_vertex("r.1.0").unwrap();
        let chi = witness_characteristic(&g, &v).unwrap();
        assert_eq!(at(&chi, &g, "r.1.0"), ONE);
        assert_eq!(at(&chi, &g, "r.1.1"), ZERO);
        assert_eq!(chi.support(&g).unwrap(), Support::Within(2));
        assert!(!chi.is_radial(&g));
        let at_root = witness_characteristic(&g, &g.root()).unwrap();
        assert!(at_root.is_radial(&g));
        assert_eq!(at_root.radial_value(&g, 0).unwrap(), ONE);
    }

    #[test]
    fn expressions() {
        let g = ray();
        let f = parse_expression("1/(d+1)").unwrap();
        assert!(matches!(f.body(), Body::Radial(_)));
        assert!(f.certificate().is_some());
        assert_eq!(at(&f, &g, "3").re, 0.25);
        let bad = parse_expression("1/d").unwrap();
        assert!(matches!(
            bad.evaluate(&g, &g.root()),
            Err(Error::Evaluation { .. })
        ));
        let c = parse_expression("5 + 2*i").unwrap();
        assert_eq!(c.is_constant(), Some(Complex64::new(5.0, 2.0)));
        let lat = Graph::parse("lattice:2").unwrap();
        let xy = parse_expression("x - y").unwrap();
        assert_eq!(at(&xy, &lat, "3,-4").re, 7.0);
        assert!(xy.evaluate(&ray(), &ray().root()).is_err());
    }

    #[test]
    fn cutoff_profile() {
        let g = ray();
        let k = cutoff(&witness_distance(), 2);
        let vals: Vec<f64> = (0..6).map(|n| at(&k, &g, &n.to_string()).re).collect();
        assert_eq!(vals, vec![0.0, 1.0, 2.0, 1.0, 0.0, 0.0]);
        assert_eq!(k.support(&g).unwrap(), Support::Within(3));
        let r = residual(&witness_distance(), 2);
        assert_eq!(at(&r, &g, "3").re, 2.0);
        assert_eq!(at(&r, &g, "7").re, 7.0);
    }

    #[test]
    fn resolvent() {
        let g = ray();
        let psi = parse_expression("1/(d+1)").unwrap();
        let phi = resolvent_symbol(&psi, Complex64::new(2.0, 0.0), 1.0, &g, 64).unwrap();
        assert_eq!(at(&phi, &g, "0").re, -1.0);
        match resolvent_symbol(&psi, Complex64::new(1.0 / 3.0, 0.0), 0.01, &g, 64) {
            Err(Error::ResolventUndefined { vertex, gap, .. }) => {
                assert_eq!(vertex, "d=2");
                assert!(gap < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }
}
