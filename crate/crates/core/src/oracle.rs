//! Brute-force cross-checks. Norms here come from a plain BFS and a direct
//! edge scan, sharing no reduction code with [`crate::lipschitz`].

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{self, GraphFunction, Support, Table};
use crate::graph::{Graph, VertexId};
use crate::lipschitz::{self, Status, Verdict};
use crate::mult_op;
use crate::tolerance;

/// `‖f‖ᵃ` by scanning every edge at a vertex where `f ≠ 0`. Requires the
/// support inside `B_{R-1}`.
pub fn brute_norm(f: &GraphFunction, g: &Graph, radius: u64) -> Result<f64> {
    match f.support(g)? {
        Support::Empty => return Ok(0.0),
        Support::Within(s) if s < radius => {}
        Support::Within(s) => {
            return Err(Error::SupportEscape(format!(
                "{} reaches distance {s}, needs < {radius}",
                f.label()
            )))
        }
        Support::Unbounded => {
            return Err(Error::SupportEscape(format!("{} has unbounded support", f.label())))
        }
    }
    let layers = g.bfs_layers(radius)?;
    let dist: HashMap<VertexId, u64> = layers.iter().copied().collect();
    let mut value: HashMap<VertexId, Complex64> = HashMap::with_capacity(layers.len());
    for &(v, d) in &layers {
        value.insert(v, f.eval_point(g, &v, d)?);
    }
    let mut sup = 0.0f64;
    for &(v, d) in &layers {
        let fv = value[&v];
        if fv == Complex64::new(0.0, 0.0) {
            continue;
        }
        if d == radius {
            return Err(Error::SupportEscape(format!("{} is nonzero on shell {radius}", g.format_vertex(&v))));
        }
        for w in g.neighbors(&v)? {
            let fw = match value.get(&w) {
                Some(z) => *z,
                None => f.eval_point(g, &w, dist.get(&w).copied().unwrap_or(d + 1))?,
            };
            let diff = (fv - fw).norm();
            if diff > sup {
                sup = diff;
            }
        }
    }
    Ok(value[&g.root()].norm() + sup)
}

/// Table with random support in `B_{R-2}` and values in the complex unit
/// square, normalized to `‖f‖ᵃ = 1`.
pub fn random_table(g: &Graph, radius: u64, rng: &mut ChaCha8Rng) -> Result<GraphFunction> {
    if radius < 2 {
        return Err(Error::InvalidParameter("random tables need R ≥ 2".into()));
    }
    let pool = g.bfs_layers(radius - 2)?;
    let k = rng.gen_range(1..=pool.len().min(8));
    let mut table = Table::new();
    for i in sample(rng, pool.len(), k) {
        table.insert(pool[i].0, Complex64::new(rng.gen(), rng.gen()));
    }
    if table.is_empty() {
        table.insert(g.root(), Complex64::new(1.0, 0.0));
    }
    let n = brute_norm(&functions::from_table(table.clone()), g, radius)?;
    Ok(functions::from_table(table.map_values(|z| z / n)).with_label("random"))
}

#[derive(Debug, Clone)]
pub struct BestRatio {
    pub lo: f64,
    pub witness: String,
    pub function: GraphFunction,
}

/// `‖ψf‖ᵃ / ‖f‖ᵃ`, or `None` when `f` vanishes.
fn ratio(psi: &GraphFunction, f: &GraphFunction, g: &Graph, radius: u64) -> Result<Option<f64>> {
    let nf = brute_norm(f, g, radius)?;
    if nf == 0.0 {
        return Ok(None);
    }
    Ok(Some(brute_norm(&functions::product(psi, f), g, radius)? / nf))
}

/// Largest `‖ψf‖ᵃ / ‖f‖ᵃ` over a fixed pool plus seeded random tables
/// refined by greedy coordinate perturbation. A lower bound for `‖M_ψ‖`.
pub fn best_ratio_search(
    psi: &GraphFunction,
    g: &Graph,
    radius: u64,
    budget: usize,
    seed: u64,
) -> Result<BestRatio> {
    if radius < 3 {
        return Err(Error::InvalidParameter("best-ratio search needs R ≥ 3".into()));
    }
    if mult_op::boundedness(psi, g, radius)?.is(Status::Refuted) {
        return Err(Error::UnboundedSymbol(psi.label().to_string()));
    }
    let one = functions::constant(Complex64::new(1.0, 0.0));
    let psi_norm = lipschitz::norm(psi, g, radius)?;
    let mut best = BestRatio {
        lo: if psi_norm.bounds_below() { psi_norm.value } else { 0.0 },
        witness: "constant 1".into(),
        function: one,
    };
    let consider = |f: GraphFunction, r: Option<f64>, best: &mut BestRatio| {
        if let Some(r) = r {
            if r > best.lo {
                best.lo = r;
                best.witness = f.label().to_string();
                best.function = f;
            }
        }
    };

    let mut pool: Vec<GraphFunction> = Vec::new();
    let half = (radius - 1) / 2;
    for n in 1..=half {
        pool.push(functions::cutoff(&functions::witness_distance(), n));
        pool.push(functions::witness_tent(n)?);
        if n >= 2 {
            pool.push(functions::cutoff(&functions::witness_ramp(n)?, n));
        }
    }
    for (v, _) in g.bfs_layers(radius - 1)?.into_iter().take(256) {
        pool.push(functions::witness_characteristic(g, &v)?);
    }
    for f in pool {
        let r = ratio(psi, &f, g, radius)?;
        consider(f, r, &mut best);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = budget.div_ceil(2).max(1);
    let mut start: Option<(f64, GraphFunction)> = None;
    for _ in 0..draws {
        let f = random_table(g, radius, &mut rng)?;
        if let Some(r) = ratio(psi, &f, g, radius)? {
            if start.as_ref().map_or(true, |(s, _)| r > *s) {
                start = Some((r, f.clone()));
            }
            consider(f, Some(r), &mut best);
        }
    }
    if let Some((mut cur, mut f)) = start {
        let mut step = 0.5;
        for _ in 0..budget.saturating_sub(draws) {
            let functions::Body::FiniteSupport(t) = f.body() else { break };
            let keys: Vec<VertexId> = t.support().copied().collect();
            let v = keys[rng.gen_range(0..keys.len())];
            let delta = Complex64::new(rng.gen_range(-step..step), rng.gen_range(-step..step));
            let mut next = t.clone();
            next.insert(v, t.get(&v) + delta);
            if next.is_empty() {
                continue;
            }
            let cand = functions::from_table(next).with_label("random (perturbed)");
            match ratio(psi, &cand, g, radius)? {
                Some(r) if r > cur => {
                    cur = r;
                    f = cand.clone();
                    consider(cand, Some(r), &mut best);
                }
                _ => step *= 0.97,
            }
        }
    }
    Ok(best)
}

/// `‖Σ θ_k χ_{v_k}‖ᵃ` for distinct `v_k`.
pub fn chi_sum_norm(g: &Graph, terms: &[(VertexId, Complex64)], radius: u64) -> Result<f64> {
    let mut table = Table::new();
    for (v, theta) in terms {
        if table.get(v) != Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParameter(format!("vertex {} repeated", g.format_vertex(v))));
        }
        table.insert(*v, *theta);
    }
    brute_norm(&functions::from_table(table), g, radius)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSumReport {
    pub verdict: Verdict,
    pub draws: usize,
    pub max_norm: f64,
}

/// Random signed sums of up to `terms` distinct characteristic functions
/// in `B_{R-1}` with unimodular coefficients; each norm must be `≤ 3`.
pub fn chi_sum_bound_check(g: &Graph, radius: u64, terms: usize, draws: usize, seed: u64) -> Result<ChiSumReport> {
    if radius < 1 {
        return Err(Error::InvalidParameter("χ-sum check needs R ≥ 1".into()));
    }
    let pool: Vec<VertexId> = g.bfs_layers(radius - 1)?.into_iter().map(|(v, _)| v).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_norm = 0.0f64;
    for k in 0..draws {
        let m = rng.gen_range(0..=terms.min(pool.len()));
        let chosen: Vec<(VertexId, Complex64)> = sample(&mut rng, pool.len(), m)
            .into_iter()
            .map(|i| (pool[i], Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))))
            .collect();
        let n = chi_sum_norm(g, &chosen, radius)?;
        max_norm = max_norm.max(n);
        if !tolerance::le(n, 3.0) {
            let w = chosen.iter().map(|(v, _)| g.format_vertex(v)).collect::<Vec<_>>().join(" ");
            return Ok(ChiSumReport {
                verdict: Verdict::new(Status::Refuted, radius)
                    .with_witness(Some(w))
                    .with_note(format!("draw {k}: norm {n} > 3")),
                draws: k + 1,
                max_norm,
            });
        }
    }
    Ok(ChiSumReport {
        verdict: Verdict::new(Status::Proven, radius).with_note(format!("{draws} draws, max norm {max_norm}")),
        draws,
        max_norm,
    })
}

#[derive(Debug, Clone)]
pub struct TestCase {
    pub family: String,
    pub symbol: GraphFunction,
    pub test_functions: Vec<GraphFunction>,
    pub radius: u64,
    pub seed: u64,
    /// Iterations for the best-ratio search.
    pub budget: usize,
}

impl TestCase {
    /// A case with `count` random tables drawn from `seed`.
    pub fn new(g: &Graph, symbol: GraphFunction, radius: u64, seed: u64, count: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let test_functions = (0..count)
            .map(|_| random_table(g, radius, &mut rng))
            .collect::<Result<_>>()?;
        Ok(TestCase {
            family: g.descriptor(),
            symbol,
            test_functions,
            radius,
            seed,
            budget: 64,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub family: String,
    pub symbol: String,
    pub radius: u64,
    pub status: CheckStatus,
    #[serde(serialize_with = "crate::json::opt_f64")]
    pub lhs: Option<f64>,
    #[serde(serialize_with = "crate::json::opt_f64")]
    pub rhs: Option<f64>,
    pub witness: Option<String>,
}

/// Worst `lhs ≤ rhs` instance of one check: failures first, then by margin.
struct Tally {
    worst: Option<(bool, f64, f64, String)>,
    failed: bool,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: None, failed: false }
    }

    fn le(&mut self, lhs: f64, rhs: f64, witness: impl FnOnce() -> String) {
        let bad = !tolerance::le(lhs, rhs);
        let worse = match &self.worst {
            None => true,
            Some((b, l, r, _)) => (bad, lhs - rhs) > (*b, l - r),
        };
        if worse {
            self.worst = Some((bad, lhs, rhs, witness()));
        }
        self.failed |= bad;
    }
}

struct Sweep<'a> {
    case: &'a TestCase,
    out: Vec<CheckRecord>,
}

impl Sweep<'_> {
    fn push(&mut self, check: &'static str, status: CheckStatus, lhs: Option<f64>, rhs: Option<f64>, witness: Option<String>) {
        self.out.push(CheckRecord {
            check,
            family: self.case.family.clone(),
            symbol: self.case.symbol.label().to_string(),
            radius: self.case.radius,
            status,
            lhs,
            rhs,
            witness,
        });
    }

    fn run(&mut self, check: &'static str, body: impl FnOnce() -> Result<Option<Tally>>) {
        match body() {
            Ok(Some(t)) => {
                let status = if t.failed { CheckStatus::Fail } else { CheckStatus::Pass };
                match t.worst {
                    Some((_, l, r, w)) => self.push(check, status, Some(l), Some(r), Some(w)),
                    None => self.push(check, CheckStatus::Skip, None, None, Some("no instances".into())),
                }
            }
            Ok(None) => self.push(check, CheckStatus::Skip, None, None, Some("not applicable to this symbol".into())),
            Err(e) => self.push(check, CheckStatus::Skip, None, None, Some(e.to_string())),
        }
    }
}

/// Runs every inequality check on one case. Failures of individual checks
/// are recorded, never propagated.
pub fn inequality_sweep(case: &TestCase, g: &Graph) -> Vec<CheckRecord> {
    let mut s = Sweep { case, out: Vec::new() };
    let r = case.radius;
    let psi = &case.symbol;
    let fs = &case.test_functions;

    s.run("pointwise_bound", || {
        let mut t = Tally::new();
        for (i, f) in fs.iter().enumerate() {
            let m = lipschitz::Measurement::new(f, g, r)?;
            let (root, semi) = (m.root_abs(), m.seminorm().value);
            for (n, &a) in m.profiles.abs_max.iter().enumerate() {
                t.le(a, root + n as f64 * semi, || format!("f#{i} shell {n}"));
            }
        }
        Ok(Some(t))
    });

    s.run("rebase_bracket", || {
        let mut t = Tally::new();
        let bs: Vec<(VertexId, u64)> = g.bfs_layers(r.min(5))?.into_iter().step_by(3).take(5).collect();
        for (i, f) in fs.iter().enumerate() {
            let na = lipschitz::norm(f, g, r)?.value;
            for (b, n) in &bs {
                let nb = lipschitz::norm_rebased(f, g, b, r)?.value;
                let k = (*n + 1) as f64;
                let w = || format!("f#{i} b={}", g.format_vertex(b));
                t.le(nb, k * na, w);
                t.le(na / k, nb, w);
            }
        }
        Ok(Some(t))
    });

    s.run("omega_tent", || {
        let mut t = Tally::new();
        for (v, d) in g.bfs_layers((r.saturating_sub(1) / 2).min(16))? {
            if d == 0 {
                continue;
            }
            let tent = functions::witness_tent(d)?;
            let n = lipschitz::norm(&tent, g, r)?;
            let at = tent.eval_point(g, &v, d)?.norm();
            let w = || g.format_vertex(&v);
            t.le((n.value - 1.0).abs(), 0.0, w);
            t.le((at - d as f64).abs(), 0.0, w);
        }
        Ok(Some(t))
    });

    s.run("kn_bound", || {
        let mut t = Tally::new();
        for n in 1..=8.min(r / 2) {
            for (i, f) in fs.iter().enumerate() {
                let k = mult_op::apply_kn(n, f, r.max(2 * n + 1))?;
                let lhs = lipschitz::norm(&k, g, r)?.value;
                let rhs = 3.0 * lipschitz::norm(f, g, r)?.value;
                t.le(lhs, rhs, || format!("n={n} f#{i}"));
            }
        }
        Ok(Some(t))
    });

    s.run("oracle_agreement", || {
        let mut t = Tally::new();
        for (i, f) in fs.iter().enumerate() {
            let a = brute_norm(f, g, r)?;
            let b = lipschitz::norm(f, g, r)?.value;
            t.le((a - b).abs(), 1e-12, || format!("f#{i}"));
        }
        Ok(Some(t))
    });

    let analysis = mult_op::analyze(psi, g, r, 1e-9, None);
    match &analysis {
        Ok(a) => {
            let w = format!("{:?}{}", a.bounded.status, a.bounded.leaning.map(|l| format!(" leaning {l:?}")).unwrap_or_default());
            s.push("boundedness", CheckStatus::Info, None, None, Some(w));
        }
        Err(e) => s.push("boundedness", CheckStatus::Skip, None, None, Some(e.to_string())),
    }
    let analysis = analysis.ok().filter(|a| a.op_norm.is_some());

    s.run("op_norm_interval", || {
        let Some(a) = &analysis else { return Ok(None) };
        let [lo, hi] = a.op_norm.as_ref().unwrap();
        if !hi.bounds_above() {
            return Ok(None);
        }
        let mut t = Tally::new();
        t.le(lo.value, hi.value, || "max(‖ψ‖ᵃ, ‖ψ‖∞) ≤ ‖ψ‖∞ + σ_ψ".into());
        Ok(Some(t))
    });

    s.run("op_norm_sandwich", || {
        let Some(a) = &analysis else { return Ok(None) };
        let hi = &a.op_norm.as_ref().unwrap()[1];
        if !hi.bounds_above() {
            return Ok(None);
        }
        let mut t = Tally::new();
        for (i, f) in fs.iter().enumerate() {
            let lhs = brute_norm(&functions::product(psi, f), g, r)?;
            let nf = brute_norm(f, g, r)?;
            t.le(lhs, hi.value * nf, || format!("f#{i}"));
        }
        Ok(Some(t))
    });

    s.run("best_ratio_sound", || {
        let Some(a) = &analysis else { return Ok(None) };
        let hi = &a.op_norm.as_ref().unwrap()[1];
        if !hi.bounds_above() {
            return Ok(None);
        }
        let b = best_ratio_search(psi, g, r, case.budget, case.seed)?;
        let mut t = Tally::new();
        t.le(b.lo, hi.value + 1e-9, || b.witness.clone());
        Ok(Some(t))
    });

    s.run("compact_essential_coherence", || {
        let Some(a) = &analysis else { return Ok(None) };
        let [lo, hi] = a.ess_norm.as_ref().unwrap();
        let mut t = Tally::new();
        let w = || format!("compact {:?}, ess [{}, {}]", a.compact.status, lo.value, hi.value);
        t.le(lo.value, hi.value, w);
        if a.compact.is(Status::Proven) {
            t.le(hi.value, 0.0, w);
        } else if a.compact.is(Status::Refuted) && lo.certified && lo.kind == lipschitz::Kind::Limit {
            // Refuted through B alone leaves A = 0 with 4A + B > 0.
            t.le(0.0, hi.value - tolerance::ABS, w);
        }
        Ok(Some(t))
    });

    s.run("eigenvector", || {
        if analysis.is_none() {
            return Ok(None);
        }
        let mut t = Tally::new();
        for (v, _) in g.bfs_layers(r.min(8))?.into_iter().take(16) {
            let res = mult_op::eigenvector_residual(psi, g, &v, r)?;
            t.le(res, 0.0, || g.format_vertex(&v));
        }
        Ok(Some(t))
    });

    s.run("chi_sum", || {
        let rep = chi_sum_bound_check(g, r.min(8), 12, 50, case.seed)?;
        let mut t = Tally::new();
        t.le(rep.max_norm, 3.0, || rep.verdict.note.clone());
        Ok(Some(t))
    });

    s.out
}

/// Sweeps several cases in parallel; records keep the input order.
pub fn sweep_all(cases: &[(TestCase, Graph)]) -> Vec<CheckRecord> {
    cases
        .par_iter()
        .map(|(c, g)| inequality_sweep(c, g))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// One JSON object per line.
pub fn to_jsonl(records: &[CheckRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Symbols swept when none is given.
pub fn default_symbols(g: &Graph) -> Result<Vec<GraphFunction>> {
    Ok(vec![
        functions::parse_expression("1/(d+1)")?,
        functions::witness_characteristic(g, &g.root())?,
        functions::parse_expression("2")?,
        functions::parse_expression("sum(1/k^2, k, 1, d+1)")?,
        functions::parse_expression("if d==0 then 1 else sin(d)/d")?,
    ])
}
