//! Lipschitz norms on balls, promoted to exact values where the support or
//! a tail certificate allows, plus the little-Lipschitz diagnostics.

mod profile;

use std::collections::HashSet;

use num_complex::Complex64;
use serde::Serialize;

pub use profile::{shell_profiles, shell_profiles_via, ProfilePath, ShellProfiles};

use crate::error::{Error, Result};
use crate::functions::{self, GraphFunction, Support, TailCertificate};
use crate::graph::{Graph, VertexId};
use crate::json;
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Exact,
    LowerBound,
    UpperBound,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "json::f64")]
    pub value: f64,
    pub kind: Kind,
    pub radius: u64,
    pub certified: bool,
    pub note: String,
}

impl Estimate {
    pub fn exact(value: f64, radius: u64, note: impl Into<String>) -> Self {
        Estimate {
            value,
            kind: Kind::Exact,
            radius,
            certified: true,
            note: note.into(),
        }
    }

    pub fn lower(value: f64, radius: u64, note: impl Into<String>) -> Self {
        Estimate {
            value,
            kind: Kind::LowerBound,
            radius,
            certified: false,
            note: note.into(),
        }
    }

    pub fn upper(value: f64, radius: u64, certified: bool, note: impl Into<String>) -> Self {
        Estimate {
            value,
            kind: Kind::UpperBound,
            radius,
            certified,
            note: note.into(),
        }
    }

    pub fn limit(value: f64, radius: u64, note: impl Into<String>) -> Self {
        Estimate {
            value,
            kind: Kind::Limit,
            radius,
            certified: true,
            note: note.into(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == Kind::Exact
    }

    /// True when the value is a proven upper bound for the quantity.
    pub fn bounds_above(&self) -> bool {
        self.certified && matches!(self.kind, Kind::Exact | Kind::UpperBound | Kind::Limit)
    }

    /// True when the value is a proven lower bound for the quantity.
    pub fn bounds_below(&self) -> bool {
        matches!(self.kind, Kind::Exact | Kind::LowerBound) || (self.certified && self.kind == Kind::Limit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Proven,
    Refuted,
    NumericalEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendPoint {
    pub radius: u64,
    #[serde(serialize_with = "json::f64")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub radius: u64,
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trend: Vec<TrendPoint>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaning: Option<Status>,
}

impl Verdict {
    pub fn new(status: Status, radius: u64) -> Self {
        Verdict {
            status,
            radius,
            witness: None,
            trend: Vec::new(),
            note: String::new(),
            leaning: None,
        }
    }

    pub fn with_witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn with_trend(mut self, trend: Vec<TrendPoint>) -> Self {
        self.trend = trend;
        self
    }

    pub fn leaning(mut self, s: Status) -> Self {
        self.leaning = Some(s);
        self
    }

    pub fn is(&self, s: Status) -> bool {
        self.status == s
    }
}

/// A ball observation combined with what the support or certificate says
/// about the rest of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    /// Proven lower bound (the exact value when `exact`).
    pub value: f64,
    pub exact: bool,
    /// Proven upper bound, when one is available and differs from `value`.
    pub upper: Option<f64>,
    pub witness: Option<String>,
    pub reason: String,
}

/// Which supremum a ball observation approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Abs,
    Diff,
    Weighted,
}

/// Profiles of one function on `B_R`, with its support and certificate.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub profiles: ShellProfiles,
    pub support: Support,
    pub certificate: Option<TailCertificate>,
}

impl Measurement {
    pub fn new(f: &GraphFunction, g: &Graph, radius: u64) -> Result<Self> {
        Ok(Measurement {
            profiles: shell_profiles(f, g, radius)?,
            support: f.support(g)?,
            certificate: f.certificate(),
        })
    }

    pub fn radius(&self) -> u64 {
        self.profiles.radius
    }

    fn resolve(&self, q: Quantity) -> Resolved {
        let r = self.radius();
        let p = &self.profiles;
        let cert = self.certificate.as_ref();
        let ((observed, witness), support_ok, tail, limit, tail_at) = match q {
            Quantity::Abs => (
                p.max_abs(),
                self.support.inside(r),
                cert.and_then(|c| c.abs_tail(r + 1)),
                cert.and_then(|c| c.limit_a),
                r + 1,
            ),
            Quantity::Diff => (
                p.max_edge_diff(),
                r >= 1 && self.support.inside(r - 1) || self.support == Support::Empty,
                cert.and_then(|c| c.diff_tail(r)),
                cert.and_then(|c| c.limit_diff),
                r,
            ),
            Quantity::Weighted => (
                p.max_weighted(),
                r >= 1 && self.support.inside(r - 1) || self.support == Support::Empty,
                cert.and_then(|c| c.weighted_tail(r)),
                cert.and_then(|c| c.limit_b),
                r,
            ),
        };
        let done = |value: f64, exact: bool, upper: Option<f64>, reason: String| Resolved {
            value,
            exact,
            upper,
            witness: witness.clone(),
            reason,
        };
        if support_ok {
            return done(observed, true, None, "finite support inside the ball".into());
        }
        if limit == Some(f64::INFINITY) {
            return done(f64::INFINITY, true, None, "certificate: unbounded".into());
        }
        let lo = limit.map_or(observed, |l| observed.max(l));
        match tail {
            Some(t) if t.is_finite() => {
                let hi = observed.max(t);
                if tolerance::le(hi, lo) {
                    done(lo, true, None, format!("certificate tail {t} at n={tail_at} within the observed maximum"))
                } else {
                    done(lo, false, Some(hi), format!("ball maximum; certificate tail {t} at n={tail_at} exceeds it"))
                }
            }
            Some(_) => done(lo, false, None, "ball maximum; certificate tail is infinite".into()),
            None => done(lo, false, None, "ball maximum, no certificate".into()),
        }
    }

    fn estimate(&self, q: Quantity) -> Estimate {
        let r = self.resolve(q);
        let note = match &r.witness {
            Some(w) if r.value.is_finite() && r.value > 0.0 => format!("{}; attained at {w}", r.reason),
            _ => r.reason.clone(),
        };
        if r.exact {
            Estimate::exact(r.value, self.radius(), note)
        } else {
            Estimate::lower(r.value, self.radius(), note)
        }
    }

    fn upper(&self, q: Quantity) -> Option<Estimate> {
        let r = self.resolve(q);
        if r.exact {
            return Some(Estimate::exact(r.value, self.radius(), r.reason));
        }
        r.upper
            .map(|u| Estimate::upper(u, self.radius(), true, r.reason))
    }

    pub fn root_abs(&self) -> f64 {
        self.profiles.root_value.norm()
    }

    /// `sup |f(v) - f(w)|` over adjacent pairs.
    pub fn seminorm(&self) -> Estimate {
        self.estimate(Quantity::Diff)
    }

    pub fn seminorm_upper(&self) -> Option<Estimate> {
        self.upper(Quantity::Diff)
    }

    pub fn norm(&self) -> Estimate {
        let mut e = self.seminorm();
        e.value += self.root_abs();
        e
    }

    pub fn norm_upper(&self) -> Option<Estimate> {
        self.seminorm_upper().map(|mut e| {
            e.value += self.root_abs();
            e
        })
    }

    pub fn sup_norm(&self) -> Estimate {
        self.estimate(Quantity::Abs)
    }

    pub fn sup_upper(&self) -> Option<Estimate> {
        self.upper(Quantity::Abs)
    }

    /// `sup d(a,v) |f(v) - f(w)|` over ordered adjacent pairs.
    pub fn sigma(&self) -> Estimate {
        self.estimate(Quantity::Weighted)
    }

    pub fn sigma_upper(&self) -> Option<Estimate> {
        self.upper(Quantity::Weighted)
    }

    /// `A = lim_n sup{|f(v)| : d(a,v) ≥ n}`.
    pub fn a_limit(&self) -> Estimate {
        let r = self.radius();
        if self.support.radius().is_some() {
            return Estimate::limit(0.0, r, "finite support");
        }
        let cert = self.certificate.as_ref();
        if let Some(a) = cert.and_then(|c| c.limit_a) {
            return Estimate::limit(a, r, "certificate limit");
        }
        if let Some(t) = cert.and_then(|c| c.abs_tail(r + 1)) {
            return Estimate::upper(t, r, true, format!("certificate tail at n={}", r + 1));
        }
        let from = r / 2;
        Estimate::upper(
            self.profiles.abs_tail(from),
            r,
            false,
            format!("ball reading over shells {from}..={r}, uncertified"),
        )
    }

    /// `B = lim_n sup{d(a,v) |f(v) - f(w)| : v ∼ w, d(a,v), d(a,w) ≥ n}`.
    pub fn b_limit(&self) -> Estimate {
        let r = self.radius();
        if self.support.radius().is_some() {
            return Estimate::limit(0.0, r, "finite support");
        }
        let cert = self.certificate.as_ref();
        if let Some(b) = cert.and_then(|c| c.limit_b) {
            return Estimate::limit(b, r, "certificate limit");
        }
        if let Some(t) = cert.and_then(|c| c.weighted_tail(r)) {
            return Estimate::upper(t, r, true, format!("certificate tail at n={r}"));
        }
        let from = r / 2;
        Estimate::upper(
            self.profiles.weighted_tail(from),
            r,
            false,
            format!("ball reading over edges beyond shell {from}, uncertified"),
        )
    }
}

/// Seminorm `sup |f(v) - f(w)|` over edges, read on `B_R`.
pub fn lip_seminorm(f: &GraphFunction, g: &Graph, radius: u64) -> Result<Estimate> {
    Ok(Measurement::new(f, g, radius)?.seminorm())
}

/// `‖f‖ᵃ = |f(a)| + sup |f(v) - f(w)|`.
pub fn norm(f: &GraphFunction, g: &Graph, radius: u64) -> Result<Estimate> {
    Ok(Measurement::new(f, g, radius)?.norm())
}

/// `‖f‖ᵇ = |f(b)| + sup |f(v) - f(w)|` for a vertex `b` of `B_R`.
pub fn norm_rebased(f: &GraphFunction, g: &Graph, b: &VertexId, radius: u64) -> Result<Estimate> {
    let d = g.distances_to(&[*b], radius)?[0].ok_or_else(|| {
        Error::invalid_vertex(g.format_vertex(b), format!("not inside the ball of radius {radius}"))
    })?;
    let mut e = lip_seminorm(f, g, radius)?;
    e.value += f.eval_point(g, b, d)?.norm();
    e.note = format!("based at {} (d(a,b)={d}); {}", g.format_vertex(b), e.note);
    Ok(e)
}

/// Checks `|f(z)| ≤ |f(a)| + d(a,z) · seminorm` on every shell of `B_R`.
pub fn pointwise_bound_check(f: &GraphFunction, g: &Graph, radius: u64) -> Result<Verdict> {
    let m = Measurement::new(f, g, radius)?;
    Ok(pointwise_from(&m))
}

pub(crate) fn pointwise_from(m: &Measurement) -> Verdict {
    let semi = m.seminorm();
    let root = m.root_abs();
    let p = &m.profiles;
    for (n, &a) in p.abs_max.iter().enumerate() {
        let bound = root + n as f64 * semi.value;
        if !tolerance::le(a, bound) {
            let w = p.abs_witness[n].clone();
            let note = format!("|f| = {a} exceeds {bound} on shell {n}");
            return if semi.is_exact() {
                Verdict::new(Status::Refuted, m.radius()).with_witness(w).with_note(note)
            } else {
                Verdict::new(Status::Inconclusive, m.radius())
                    .with_witness(w)
                    .with_note(format!("{note}; seminorm is only a lower bound"))
            };
        }
    }
    Verdict::new(Status::Proven, m.radius()).with_note("holds on every shell of the ball")
}

/// `ω(v) = ω₀(v) = d(a, v)`, with the tent peaking at `v` as the common
/// extremal function (the zero function when `v` is the root).
pub fn omega(g: &Graph, v: &VertexId) -> Result<(u64, GraphFunction)> {
    let d = g.distance(v)?;
    let w = if d == 0 { functions::zero() } else { functions::witness_tent(d)? };
    Ok((d, w))
}

/// Per-shell `M_n = max_{d(v)=n} max_{w∼v} |f(v) - f(w)|` and a verdict on
/// whether `M_n → 0`.
pub fn little_lipschitz_diagnostic(
    f: &GraphFunction,
    g: &Graph,
    schedule: &[u64],
) -> Result<(Verdict, Vec<f64>)> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("radius schedule must be nonempty and increasing".into()));
    }
    let r = *schedule.last().unwrap();
    let m = Measurement::new(f, g, r)?;
    let prof = m.profiles.vertex_diff.clone();
    let trend: Vec<TrendPoint> = schedule
        .iter()
        .map(|&s| TrendPoint {
            radius: s,
            value: prof
                .iter()
                .take(s as usize)
                .skip((s / 2) as usize)
                .fold(0.0, |a: f64, &b| a.max(b)),
        })
        .collect();
    let last_witness = prof
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &x)| x > 0.0)
        .map(|(n, _)| format!("shell {n}"));

    let verdict = if m.support.radius().is_some() {
        Verdict::new(Status::Proven, r).with_note("finite support")
    } else {
        match m.certificate.as_ref().and_then(|c| c.limit_diff) {
            Some(l) if tolerance::is_zero(l) => {
                Verdict::new(Status::Proven, r).with_note("certificate: edge-difference tail tends to 0")
            }
            Some(l) => Verdict::new(Status::Refuted, r)
                .with_witness(last_witness)
                .with_note(format!("certificate: edge differences tend to {l}")),
            None => {
                let first = trend.first().map_or(0.0, |t| t.value);
                let last = trend.last().map_or(0.0, |t| t.value);
                let lean = if last < first && !tolerance::close(last, first) || tolerance::is_zero(last) {
                    Status::Proven
                } else {
                    Status::Refuted
                };
                Verdict::new(Status::NumericalEvidence, r)
                    .with_trend(trend)
                    .with_note("no certificate; trend of max M_n over shells R/2..R")
                    .leaning(lean)
            }
        }
    };
    Ok((verdict, prof))
}

/// `max |f(v)| / d(a,v)` on each shell `1 ≤ n ≤ R`.
pub fn growth_ratio_profile(f: &GraphFunction, g: &Graph, radius: u64) -> Result<Vec<(u64, f64)>> {
    if radius == 0 {
        return Err(Error::InvalidParameter("growth profile needs R ≥ 1".into()));
    }
    Ok(shell_profiles(f, g, radius)?.growth())
}

/// Output of the finite-support approximation.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub function: GraphFunction,
    /// The truncation radius, `None` when the input was already finitely
    /// supported.
    pub n: Option<u64>,
    /// `‖g - f‖ᵃ`, computed on `B_{2N+2}`.
    pub achieved: Estimate,
    /// True when `N` came from the certificate, so `achieved < ε` is a
    /// theorem rather than an observation.
    pub guaranteed: bool,
}

/// Largest truncation radius searched before giving up.
const MAX_CUTOFF: u64 = 1 << 40;

/// Smallest `n ≥ max(1, N₀)` with both certified tails below `ε/4`. Tail
/// maps are nonincreasing, so doubling then bisecting is exact.
fn certified_cutoff(cert: &TailCertificate, eps: f64) -> Option<u64> {
    let ok = |n: u64| {
        let d = cert.diff_tail(n);
        let gr = cert.growth_tail(n);
        matches!((d, gr), (Some(d), Some(gr)) if d < eps / 4.0 && gr < eps / 4.0)
    };
    let start = cert.valid_from.max(1);
    if ok(start) {
        return Some(start);
    }
    let (mut lo, mut hi) = (start, start.max(1) * 2);
    while !ok(hi) {
        lo = hi;
        hi = hi.checked_mul(2)?;
        if hi > MAX_CUTOFF {
            return None;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Finitely supported `f` with `‖g - f‖ᵃ < ε`: `f = g` on `B_N`, scaled by
/// `(2N - d)/d` on `N < d < 2N`, zero beyond.
pub fn finite_support_approximation(
    gfun: &GraphFunction,
    g: &Graph,
    eps: f64,
    forced: Option<u64>,
) -> Result<Approximation> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} must be positive")));
    }
    if gfun.support(g)?.radius().is_some() && forced.is_none() {
        return Ok(Approximation {
            function: gfun.clone(),
            n: None,
            achieved: Estimate::exact(0.0, 0, "input is finitely supported"),
            guaranteed: true,
        });
    }
    let (n, guaranteed) = match forced {
        Some(n) if n >= 1 => (n, false),
        Some(_) => return Err(Error::InvalidParameter("forced N must be at least 1".into())),
        None => {
            let cert = gfun.certificate().ok_or_else(|| {
                Error::NoCertificate(format!("{} has no tail certificate", gfun.label()))
            })?;
            let n = certified_cutoff(&cert, eps).ok_or_else(|| {
                Error::NoCertificate(format!(
                    "certificate of {} lacks edge-difference and growth tails below eps/4",
                    gfun.label()
                ))
            })?;
            (n, true)
        }
    };
    let residual = functions::residual(gfun, n);
    let achieved = norm(&residual, g, 2 * n + 2)?;
    Ok(Approximation {
        function: functions::cutoff(gfun, n),
        n: Some(n),
        achieved,
        guaranteed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongNullReport {
    pub verdict: Verdict,
    pub equidiminishing: bool,
    pub pointwise_null: bool,
    pub norms_vanish: bool,
    /// Whether norm decay agrees with "equidiminishing and pointwise null".
    pub consistent: bool,
    pub norms: Vec<Estimate>,
}

/// Finite-prefix reading of the strong-convergence criterion.
///
/// For each `ε`, `N_ε(f_n)` is the last shell `k < R` with `M_k ≥ ε`.
/// The prefix counts as equidiminishing when, for every `ε`, the largest
/// `N_ε` over the second half does not exceed that over the first half
/// and stays below `R - 1`. Pointwise nullity and norm decay are read on
/// the second half (vertices with `d ≤ 3` for the former).
pub fn strong_null_diagnostic(
    seq: &[GraphFunction],
    g: &Graph,
    radius: u64,
    eps_grid: &[f64],
) -> Result<StrongNullReport> {
    if seq.len() < 2 || eps_grid.is_empty() || radius < 2 {
        return Err(Error::InvalidParameter(
            "need at least two functions, a nonempty epsilon grid and R ≥ 2".into(),
        ));
    }
    let half = seq.len() / 2;
    let sample_ball = g.ball(radius.min(3))?;
    let mut norms = Vec::with_capacity(seq.len());
    let mut n_eps: Vec<Vec<u64>> = vec![Vec::with_capacity(seq.len()); eps_grid.len()];
    let mut point_max = Vec::with_capacity(seq.len());
    for f in seq {
        let m = Measurement::new(f, g, radius)?;
        for (k, &eps) in eps_grid.iter().enumerate() {
            let last = m.profiles.vertex_diff.iter().rposition(|&x| x >= eps);
            n_eps[k].push(last.map_or(0, |i| i as u64));
        }
        let vals = f.values_on(g, &sample_ball)?;
        point_max.push(vals.iter().map(|z| z.norm()).fold(0.0, f64::max));
        norms.push(m.norm());
    }
    let equi = n_eps.iter().all(|ns| {
        let first = ns[..half].iter().max().copied().unwrap_or(0);
        let second = ns[half..].iter().max().copied().unwrap_or(0);
        second <= first && second + 1 < radius
    });
    let pointwise = eps_grid
        .iter()
        .all(|&eps| point_max[half..].iter().all(|&p| p < eps));
    let vanish = eps_grid
        .iter()
        .all(|&eps| norms[half..].iter().all(|e| e.value < eps));
    let consistent = vanish == (equi && pointwise);
    let status = if consistent { Status::NumericalEvidence } else { Status::Inconclusive };
    let lean = if vanish { Status::Proven } else { Status::Refuted };
    let verdict = Verdict::new(status, radius)
        .with_note(format!(
            "equidiminishing={equi}, pointwise_null={pointwise}, norms_vanish={vanish}"
        ))
        .leaning(lean);
    Ok(StrongNullReport {
        verdict,
        equidiminishing: equi,
        pointwise_null: pointwise,
        norms_vanish: vanish,
        consistent,
        norms,
    })
}

/// For `{0,1}`-valued `f ≠ h` vanishing at the root, exhibits an edge
/// across which `f - h` jumps by 1, so `‖f - h‖ᵃ ≥ 1`.
pub fn separation_witness_check(
    f: &GraphFunction,
    h: &GraphFunction,
    g: &Graph,
    radius: u64,
) -> Result<Verdict> {
    if radius == 0 {
        return Err(Error::PreconditionViolated("need R ≥ 1".into()));
    }
    let ball = g.ball(radius)?;
    let fv = f.values_on(g, &ball)?;
    let hv = h.values_on(g, &ball)?;
    let binary = |z: &Complex64| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0);
    if let Some(i) = (0..ball.len()).find(|&i| !binary(&fv[i]) || !binary(&hv[i])) {
        return Err(Error::PreconditionViolated(format!(
            "values at {} are not in {{0, 1}}",
            g.format_vertex(&ball.vertex(i))
        )));
    }
    if fv[0].re != 0.0 || hv[0].re != 0.0 {
        return Err(Error::PreconditionViolated("both functions must vanish at the root".into()));
    }
    let inner = ball.shell(radius).start;
    if (0..inner).all(|i| fv[i] == hv[i]) {
        return Err(Error::PreconditionViolated(format!(
            "the functions agree on the ball of radius {}",
            radius - 1
        )));
    }
    let differs: HashSet<usize> = (0..ball.len()).filter(|&i| fv[i] != hv[i]).collect();
    let (v, w) = ball
        .edges()
        .find(|(v, w)| !differs.contains(v) && differs.contains(w))
        .expect("a path from the root reaches the first difference");
    let name = |i: usize| g.format_vertex(&ball.vertex(i));
    Ok(Verdict::new(Status::Proven, radius)
        .with_witness(Some(format!("{} ~ {}", name(v), name(w))))
        .with_note("|(f-h)(v) - (f-h)(w)| = 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{parse_expression, witness_characteristic, witness_distance, witness_harmonic};

    fn ray() -> Graph {
        Graph::parse("ray").unwrap()
    }

    #[test]
    fn distance_witness_norm() {
        let e = norm(&witness_distance(), &ray(), 10).unwrap();
        assert_eq!((e.value, e.kind), (1.0, Kind::Exact));
        let s = lip_seminorm(&witness_distance(), &ray(), 10).unwrap();
        assert!(s.certified);
    }

    #[test]
    fn harmonic_seminorm_exact() {
        let e = lip_seminorm(&witness_harmonic(), &ray(), 10).unwrap();
        assert_eq!((e.value, e.kind), (1.0, Kind::Exact));
    }

    #[test]
    fn constants_and_characteristic() {
        let g = Graph::parse("tree:3").unwrap();
        let c = parse_expression("5 + 2*i").unwrap();
        let e = lip_seminorm(&c, &g, 4).unwrap();
        assert_eq!((e.value, e.kind), (0.0, Kind::Exact));
        let chi = witness_characteristic(&g, &g.root()).unwrap();
        assert_eq!(norm(&chi, &g, 3).unwrap().value, 2.0);
        assert_eq!(norm(&functions::zero(), &g, 3).unwrap().value, 0.0);
    }

    #[test]
    fn uncertified_is_lower_bound() {
        let e = lip_seminorm(&parse_expression("sqrt(d)").unwrap(), &ray(), 16).unwrap();
        assert_eq!((e.value, e.kind, e.certified), (1.0, Kind::LowerBound, false));
    }

    #[test]
    fn rebase_distance() {
        let g = ray();
        let b = g.parse_vertex("3").unwrap();
        let e = norm_rebased(&witness_distance(), &g, &b, 10).unwrap();
        assert_eq!(e.value, 4.0);
    }

    #[test]
    fn little_lipschitz() {
        let g = ray();
        let (v, prof) = little_lipschitz_diagnostic(&witness_harmonic(), &g, &[8, 16]).unwrap();
        assert!(v.is(Status::Proven));
        assert!(prof.iter().enumerate().all(|(n, &m)| m <= 1.0 / n.max(1) as f64 + 1e-15));
        let (v, _) = little_lipschitz_diagnostic(&witness_distance(), &g, &[8]).unwrap();
        assert!(v.is(Status::Refuted));
        let (v, _) = little_lipschitz_diagnostic(&parse_expression("sqrt(d)").unwrap(), &g, &[16, 32, 64]).unwrap();
        assert!(v.is(Status::NumericalEvidence));
        assert_eq!(v.leaning, Some(Status::Proven));
    }

    #[test]
    fn growth_of_harmonic() {
        let prof = growth_ratio_profile(&witness_harmonic(), &ray(), 30).unwrap();
        let h30: f64 = (1..=30).map(|k| 1.0 / k as f64).sum();
        assert!((prof[29].1 - h30 / 30.0).abs() < 1e-15);
        assert!((prof[29].1 - 0.1332).abs() < 1e-4);
    }

    #[test]
    fn density_on_harmonic() {
        let a = finite_support_approximation(&witness_harmonic(), &ray(), 0.5, None).unwrap();
        assert_eq!(a.n, Some(33));
        assert!(a.guaranteed && a.achieved.is_exact() && a.achieved.value < 0.5);
    }

    #[test]
    fn separation() {
        let g = ray();
        let chi = witness_characteristic(&g, &g.parse_vertex("4").unwrap()).unwrap();
        let v = separation_witness_check(&chi, &functions::zero(), &g, 6).unwrap();
        assert_eq!(v.witness.as_deref(), Some("3 ~ 4"));
        assert!(matches!(
            separation_witness_check(&chi, &chi, &g, 6),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn strong_null_examples() {
        let g = ray();
        let eps = [0.5, 0.25];
        let inv = |n: u64| Complex64::new(1.0 / n as f64, 0.0);

        let tent3 = functions::witness_tent(3).unwrap();
        let seq: Vec<_> = (1..=40).map(|n| functions::scaled(inv(n), &tent3)).collect();
        let r = strong_null_diagnostic(&seq, &g, 16, &eps).unwrap();
        assert!(r.equidiminishing && r.pointwise_null && r.norms_vanish && r.consistent);
        assert!(r.verdict.is(Status::NumericalEvidence));

        let seq: Vec<_> = (1..=8)
            .map(|n| witness_characteristic(&g, &g.parse_vertex(&n.to_string()).unwrap()).unwrap())
            .collect();
        let r = strong_null_diagnostic(&seq, &g, 16, &eps).unwrap();
        assert!(!r.equidiminishing && r.pointwise_null && !r.norms_vanish && r.consistent);
        assert!(r.norms.iter().all(|e| e.value == 1.0));

        let seq: Vec<_> = (1..=40)
            .map(|n| functions::scaled(inv(n), &functions::witness_tent(n).unwrap()))
            .collect();
        let r = strong_null_diagnostic(&seq, &g, 100, &eps).unwrap();
        assert!(r.equidiminishing && r.pointwise_null && r.norms_vanish && r.consistent);
        for (n, e) in (1..=40).zip(&r.norms) {
            assert!((e.value - 1.0 / n as f64).abs() < 1e-12);
        }
    }
}
