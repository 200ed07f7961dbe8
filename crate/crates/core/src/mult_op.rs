//! The multiplication operator `M_ψ f = ψf` on the Lipschitz space.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{self, format_complex, GraphFunction, Site, Table};
use crate::graph::{Graph, VertexId};
use crate::json;
use crate::lipschitz::{self, Estimate, Kind, Measurement, Status, TrendPoint, Verdict};
use crate::tolerance;

/// `σ_ψ = sup d(a,v) |ψ(v) - ψ(w)|` over ordered adjacent pairs.
pub fn sigma_psi(psi: &GraphFunction, g: &Graph, radius: u64) -> Result<Estimate> {
    Ok(Measurement::new(psi, g, radius)?.sigma())
}

fn trend(m: &Measurement, read: impl Fn(&lipschitz::ShellProfiles) -> f64) -> Vec<TrendPoint> {
    let r = m.radius();
    let mut radii = vec![r / 4, r / 2, r];
    radii.dedup();
    radii
        .into_iter()
        .map(|s| TrendPoint {
            radius: s,
            value: read(&m.profiles.truncated(s)),
        })
        .collect()
}

fn grows(t: &[TrendPoint]) -> bool {
    match (t.first(), t.last()) {
        (Some(a), Some(b)) => b.value > a.value && !tolerance::close(a.value, b.value),
        _ => false,
    }
}

fn bounded_from(m: &Measurement) -> Verdict {
    let r = m.radius();
    let sup = m.sup_norm();
    let sigma = m.sigma();
    let infinite = |e: &Estimate| e.is_exact() && e.value.is_infinite();
    if infinite(&sup) || infinite(&sigma) {
        let which = if infinite(&sup) { "sup |ψ|" } else { "σ_ψ" };
        return Verdict::new(Status::Refuted, r).with_note(format!("certificate: {which} is infinite"));
    }
    let finite = |e: Option<Estimate>| e.is_some_and(|e| e.value.is_finite());
    if finite(m.sup_upper()) && finite(m.sigma_upper()) {
        return Verdict::new(Status::Proven, r).with_note(format!(
            "sup |ψ| ≤ {}, σ_ψ ≤ {}",
            m.sup_upper().unwrap().value,
            m.sigma_upper().unwrap().value
        ));
    }
    let sup_trend = trend(m, |p| p.max_abs().0);
    let sigma_trend = trend(m, |p| p.max_weighted().0);
    let lean = if grows(&sup_trend) || grows(&sigma_trend) {
        Status::Refuted
    } else {
        Status::Proven
    };
    let mut t = sup_trend.clone();
    t.extend(sigma_trend.iter().cloned());
    Verdict::new(Status::NumericalEvidence, r)
        .with_trend(t)
        .with_note(format!(
            "uncertified; sup |ψ| readings {:?}, σ_ψ readings {:?}",
            sup_trend.iter().map(|p| p.value).collect::<Vec<_>>(),
            sigma_trend.iter().map(|p| p.value).collect::<Vec<_>>()
        ))
        .leaning(lean)
}

/// Bounded iff `ψ` is bounded and `σ_ψ < ∞`.
pub fn boundedness(psi: &GraphFunction, g: &Graph, radius: u64) -> Result<Verdict> {
    Ok(bounded_from(&Measurement::new(psi, g, radius)?))
}

fn require_bounded(m: &Measurement, psi: &GraphFunction) -> Result<()> {
    let v = bounded_from(m);
    if v.is(Status::Refuted) {
        return Err(Error::UnboundedSymbol(format!("{}: {}", psi.label(), v.note)));
    }
    Ok(())
}

fn interval_from(m: &Measurement) -> (Estimate, Estimate) {
    let r = m.radius();
    let lip = m.norm();
    let sup = m.sup_norm();
    let (lo_val, from) = if lip.value >= sup.value {
        (lip.value, "‖ψ‖ᵃ")
    } else {
        (sup.value, "‖ψ‖∞")
    };
    let lo = if lip.is_exact() && sup.is_exact() {
        Estimate::exact(lo_val, r, format!("max(‖ψ‖ᵃ, ‖ψ‖∞) = {from}"))
    } else {
        Estimate::lower(lo_val, r, format!("max(‖ψ‖ᵃ, ‖ψ‖∞) = {from}, ball readings"))
    };
    let hi = match (m.sup_upper(), m.sigma_upper()) {
        (Some(s), Some(t)) if s.is_exact() && t.is_exact() => {
            Estimate::exact(s.value + t.value, r, "‖ψ‖∞ + σ_ψ")
        }
        (Some(s), Some(t)) => Estimate::upper(s.value + t.value, r, true, "‖ψ‖∞ + σ_ψ from certificate tails"),
        _ => Estimate::upper(
            sup.value + m.sigma().value,
            r,
            false,
            "‖ψ‖∞ + σ_ψ, ball readings, uncertified",
        ),
    };
    (lo, hi)
}

/// `[max(‖ψ‖ᵃ, ‖ψ‖∞), ‖ψ‖∞ + σ_ψ]`.
pub fn operator_norm_interval(psi: &GraphFunction, g: &Graph, radius: u64) -> Result<(Estimate, Estimate)> {
    let m = Measurement::new(psi, g, radius)?;
    require_bounded(&m, psi)?;
    Ok(interval_from(&m))
}

/// One of the two limit conditions for compactness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    /// `Some` when the limit is certified.
    pub holds: Option<bool>,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub verdict: Verdict,
    pub conditions: [Condition; 2],
}

fn condition(name: &'static str, e: Estimate) -> Condition {
    let holds = if e.kind == Kind::Limit && e.certified {
        Some(tolerance::is_zero(e.value))
    } else {
        None
    };
    Condition { name, holds, estimate: e }
}

fn compactness_from(m: &Measurement) -> CompactnessReport {
    let r = m.radius();
    let conds = [
        condition("psi_to_zero", m.a_limit()),
        condition("weighted_diff_to_zero", m.b_limit()),
    ];
    let describe = |c: &Condition, i: usize| match c.holds {
        Some(true) => format!("condition {} holds", i + 1),
        Some(false) => format!("condition {} fails (limit {})", i + 1, c.estimate.value),
        None => format!("condition {} uncertified (reading {})", i + 1, c.estimate.value),
    };
    let note = format!("{}, {}", describe(&conds[0], 0), describe(&conds[1], 1));
    let verdict = match (conds[0].holds, conds[1].holds) {
        (Some(true), Some(true)) => Verdict::new(Status::Proven, r),
        (Some(false), _) | (_, Some(false)) => {
            let w = conds.iter().find(|c| c.holds == Some(false)).map(|c| c.name.to_string());
            Verdict::new(Status::Refuted, r).with_witness(w)
        }
        _ => {
            let lean = if conds.iter().all(|c| tolerance::is_zero(c.estimate.value)) {
                Status::Proven
            } else {
                Status::Refuted
            };
            Verdict::new(Status::NumericalEvidence, r)
                .with_trend(trend(m, |p| p.abs_tail(p.radius / 2)))
                .leaning(lean)
        }
    };
    CompactnessReport {
        verdict: verdict.with_note(note),
        conditions: conds,
    }
}

/// Compact iff `ψ(v) → 0` and `d(a,v) max_{w∼v} |ψ(v) - ψ(w)| → 0`.
pub fn compactness(psi: &GraphFunction, g: &Graph, radius: u64) -> Result<CompactnessReport> {
    let m = Measurement::new(psi, g, radius)?;
    require_bounded(&m, psi)?;
    Ok(compactness_from(&m))
}

fn ess_from(m: &Measurement) -> (Estimate, Estimate) {
    let r = m.radius();
    let a = m.a_limit();
    let b = m.b_limit();
    let value = 4.0 * a.value + b.value;
    let certified = a.certified && b.certified;
    let hi = if a.kind == Kind::Limit && b.kind == Kind::Limit && certified {
        Estimate::limit(value, r, "4A + B")
    } else {
        Estimate::upper(value, r, certified, "4A + B")
    };
    (a, hi)
}

/// `[A(ψ), 4A(ψ) + B(ψ)]`.
pub fn essential_norm_interval(psi: &GraphFunction, g: &Graph, radius: u64) -> Result<(Estimate, Estimate)> {
    let m = Measurement::new(psi, g, radius)?;
    require_bounded(&m, psi)?;
    Ok(ess_from(&m))
}

/// Data on `φ_λ = 1/(ψ - λ)` for a queried `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventReport {
    #[serde(serialize_with = "json::complex")]
    pub lambda: Complex64,
    /// Distance from `λ` to the sampled values and certified limits.
    #[serde(serialize_with = "json::f64")]
    pub gap: f64,
    pub in_sample: bool,
    pub sup_phi: Option<Estimate>,
    pub sigma_phi: Option<Estimate>,
    /// `σ_ψ / c²` with `c = gap`.
    #[serde(serialize_with = "json::opt_f64")]
    pub sigma_bound: Option<f64>,
    /// `max |(ψ - λ) φ_λ - 1|` over the sample.
    #[serde(serialize_with = "json::opt_f64")]
    pub identity_residual: Option<f64>,
    pub bound_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(serialize_with = "json::complex_list")]
    pub sample: Vec<Complex64>,
    /// Where each sampled value was first seen.
    pub sites: Vec<String>,
    #[serde(serialize_with = "json::complex_list")]
    pub extras: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<ResolventReport>,
}

/// Deduplicated values of `ψ` on `B_R`, in BFS order, with the site where
/// each first appears.
fn dedup_sample(psi: &GraphFunction, g: &Graph, radius: u64, grid_eps: f64) -> Result<Vec<(Site, Complex64)>> {
    let mut out: Vec<(Site, Complex64)> = Vec::new();
    for (site, z) in psi.sample(g, radius)? {
        if !out.iter().any(|(_, w)| (z - w).norm() <= grid_eps) {
            out.push((site, z));
        }
    }
    Ok(out)
}

fn spectrum_from(
    m: &Measurement,
    psi: &GraphFunction,
    g: &Graph,
    grid_eps: f64,
    query: Option<Complex64>,
) -> Result<SpectrumReport> {
    let r = m.radius();
    let sample = dedup_sample(psi, g, r, grid_eps)?;
    let mut extras = Vec::new();
    let limit = m
        .certificate
        .as_ref()
        .and_then(|c| c.limit_value)
        .or_else(|| {
            let a = m.a_limit();
            (a.kind == Kind::Limit && a.certified && a.value == 0.0 && m.support.radius().is_none())
                .then_some(Complex64::new(0.0, 0.0))
        });
    if let Some(l) = limit {
        if !sample.iter().any(|(_, z)| (z - l).norm() <= grid_eps) {
            extras.push(l);
        }
    }
    let query = match query {
        Some(lambda) => Some(resolvent_query(m, psi, g, lambda, &sample, &extras, grid_eps)?),
        None => None,
    };
    Ok(SpectrumReport {
        sites: sample.iter().map(|(s, _)| s.describe(g)).collect(),
        sample: sample.into_iter().map(|(_, z)| z).collect(),
        extras,
        query,
    })
}

fn resolvent_query(
    m: &Measurement,
    psi: &GraphFunction,
    g: &Graph,
    lambda: Complex64,
    sample: &[(Site, Complex64)],
    extras: &[Complex64],
    grid_eps: f64,
) -> Result<ResolventReport> {
    let r = m.radius();
    let gap = sample
        .iter()
        .map(|(_, z)| z)
        .chain(extras)
        .map(|z| (z - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    let mut report = ResolventReport {
        lambda,
        gap,
        in_sample: gap <= grid_eps,
        sup_phi: None,
        sigma_phi: None,
        sigma_bound: None,
        identity_residual: None,
        bound_holds: None,
    };
    if report.in_sample {
        return Ok(report);
    }
    let phi = functions::resolvent_symbol(psi, lambda, gap, g, r)?;
    let pm = Measurement::new(&phi, g, r)?;
    let sigma_psi = m.sigma();
    let bound = sigma_psi.value / (gap * gap);
    let sup_phi = pm.sup_norm();
    let sigma_phi = pm.sigma();
    let residual = psi
        .sample(g, r)?
        .into_iter()
        .map(|(site, z)| {
            let p = match &site {
                Site::Shell(n) => phi.radial_value(g, *n),
                Site::Vertex(v, d) => phi.eval_point(g, v, *d),
            }?;
            Ok(((z - lambda) * p - 1.0).norm())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.bound_holds = Some(
        tolerance::le(sup_phi.value, 1.0 / gap) && (sigma_phi.value <= bound + tolerance::ABS || tolerance::le(sigma_phi.value, bound)),
    );
    report.sup_phi = Some(sup_phi);
    report.sigma_phi = Some(sigma_phi);
    report.sigma_bound = Some(bound);
    report.identity_residual = Some(residual);
    Ok(report)
}

/// Point-spectrum sample `ψ(B_R)` and certified limit points of `ψ(G)`;
/// optionally the resolvent data at `query`.
pub fn spectrum(
    psi: &GraphFunction,
    g: &Graph,
    radius: u64,
    grid_eps: f64,
    query: Option<Complex64>,
) -> Result<SpectrumReport> {
    if !(grid_eps > 0.0) {
        return Err(Error::InvalidParameter(format!("grid epsilon {grid_eps} must be positive")));
    }
    let m = Measurement::new(psi, g, radius)?;
    require_bounded(&m, psi)?;
    spectrum_from(&m, psi, g, grid_eps, query)
}

/// `max |ψχ_v - ψ(v)χ_v|` on `B_R`, zero when `χ_v` is an eigenvector.
pub fn eigenvector_residual(psi: &GraphFunction, g: &Graph, v: &VertexId, radius: u64) -> Result<f64> {
    let chi = functions::witness_characteristic(g, v)?;
    let lambda = psi.evaluate(g, v)?;
    let image = apply(psi, &chi, g, radius)?;
    let ball = g.ball(radius)?;
    let ours = image.values_on(g, &ball)?;
    let theirs = chi.values_on(g, &ball)?;
    Ok(ours
        .iter()
        .zip(&theirs)
        .map(|(a, b)| (a - lambda * b).norm())
        .fold(0.0, f64::max))
}

pub const PROBE_CONSTANT: &str = "constant_one";
pub const PROBE_HALF_CHAR: &str = "half_char_root";

fn isometry_from(m: &Measurement, psi: &GraphFunction, g: &Graph) -> Result<Verdict> {
    let r = m.radius();
    let root = m.profiles.root_value;
    // ‖ψ·1‖ᵃ = ‖ψ‖ᵃ must equal ‖1‖ᵃ = 1.
    let lip = m.norm();
    let probe1 = !tolerance::close(lip.value, 1.0) && (lip.is_exact() || lip.value > 1.0);
    // ‖ψ·½χ_a‖ᵃ = |ψ(a)| must equal ‖½χ_a‖ᵃ = 1.
    let probe2 = !tolerance::close(root.norm(), 1.0);
    let differs = psi
        .sample(g, r)?
        .into_iter()
        .find(|(_, z)| !tolerance::close((z - root).norm() + 1.0, 1.0))
        .map(|(s, z)| format!("ψ({}) = {} ≠ ψ(a)", s.describe(g), format_complex(z)));
    if probe1 || probe2 {
        let (probe, lhs) = if probe1 {
            (PROBE_CONSTANT, format!("‖ψ·1‖ = {}", lip.value))
        } else {
            (PROBE_HALF_CHAR, format!("‖ψ·½χ_a‖ = {}", root.norm()))
        };
        let mut note = format!("{lhs} ≠ 1");
        if let Some(d) = differs {
            note = format!("{note}; {d}");
        }
        return Ok(Verdict::new(Status::Refuted, r)
            .with_witness(Some(probe.to_string()))
            .with_note(note));
    }
    if let Some(d) = differs {
        return Ok(Verdict::new(Status::Refuted, r).with_note(format!("not constant: {d}")));
    }
    if let Some(c) = psi.is_constant() {
        return Ok(Verdict::new(Status::Proven, r)
            .with_note(format!("constant {} of modulus one", format_complex(c))));
    }
    Ok(Verdict::new(Status::NumericalEvidence, r)
        .with_note("constant of modulus one on the ball, uncertified beyond it")
        .leaning(Status::Proven))
}

/// `M_ψ` is an isometry iff `ψ` is a constant of modulus one.
pub fn isometry_test(psi: &GraphFunction, g: &Graph, radius: u64) -> Result<Verdict> {
    let m = Measurement::new(psi, g, radius)?;
    isometry_from(&m, psi, g)
}

/// `ψf` materialized on `B_R`.
pub fn apply(psi: &GraphFunction, f: &GraphFunction, g: &Graph, radius: u64) -> Result<GraphFunction> {
    let prod = functions::product(psi, f);
    let mut table = Table::new();
    let sites: Vec<(VertexId, u64)> = match prod.support(g)? {
        functions::Support::Within(s) if s < radius => match prod.support_vertices() {
            Some(vs) => vs
                .iter()
                .copied()
                .zip(g.distances_to(&vs, radius)?)
                .filter_map(|(v, d)| d.map(|d| (v, d)))
                .collect(),
            None => ball_sites(g, radius)?,
        },
        functions::Support::Empty => Vec::new(),
        _ => ball_sites(g, radius)?,
    };
    for (v, d) in sites {
        table.insert(v, prod.eval_point(g, &v, d)?);
    }
    let truncated = !prod.support(g)?.inside(radius);
    let label = if truncated {
        format!("({})*({}) on B_{radius} (truncated)", psi.label(), f.label())
    } else {
        format!("({})*({})", psi.label(), f.label())
    };
    Ok(functions::from_table(table).with_label(label))
}

fn ball_sites(g: &Graph, radius: u64) -> Result<Vec<(VertexId, u64)>> {
    let ball = g.ball(radius)?;
    Ok((0..ball.len()).map(|i| (ball.vertex(i), ball.dist(i))).collect())
}

/// `K_n f`: `f` on `B_n`, `(2n - d)/d · f` on `n < d < 2n`, zero beyond.
pub fn apply_kn(n: u64, f: &GraphFunction, radius: u64) -> Result<GraphFunction> {
    if n == 0 {
        return Err(Error::PreconditionViolated("K_n needs n ≥ 1".into()));
    }
    if radius < 2 * n + 1 {
        return Err(Error::PreconditionViolated(format!("K_{n} needs R ≥ {}", 2 * n + 1)));
    }
    Ok(functions::cutoff(f, n).with_label(format!("K_{n}({})", f.label())))
}

/// The full operator report for one symbol.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolAnalysis {
    pub symbol: String,
    pub family: String,
    pub radius: u64,
    pub sup_norm: Estimate,
    pub lip_norm: Estimate,
    pub sigma: Estimate,
    #[serde(rename = "A")]
    pub a: Estimate,
    #[serde(rename = "B")]
    pub b: Estimate,
    pub bounded: Verdict,
    pub compact: Verdict,
    pub isometry: Verdict,
    pub op_norm: Option<[Estimate; 2]>,
    pub ess_norm: Option<[Estimate; 2]>,
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip)]
    pub conditions: Option<[Condition; 2]>,
}

pub fn analyze(
    psi: &GraphFunction,
    g: &Graph,
    radius: u64,
    grid_eps: f64,
    query: Option<Complex64>,
) -> Result<SymbolAnalysis> {
    if !(grid_eps > 0.0) {
        return Err(Error::InvalidParameter(format!("grid epsilon {grid_eps} must be positive")));
    }
    let m = Measurement::new(psi, g, radius)?;
    let bounded = bounded_from(&m);
    let (isometry, rest) = rayon::join(
        || isometry_from(&m, psi, g),
        || -> Result<_> {
            if bounded.is(Status::Refuted) {
                return Ok(None);
            }
            let (op, ess) = (interval_from(&m), ess_from(&m));
            let spec = spectrum_from(&m, psi, g, grid_eps, query)?;
            Ok(Some((op, ess, spec, compactness_from(&m))))
        },
    );
    let isometry = isometry?;
    let mut out = SymbolAnalysis {
        symbol: psi.label().to_string(),
        family: g.descriptor(),
        radius,
        sup_norm: m.sup_norm(),
        lip_norm: m.norm(),
        sigma: m.sigma(),
        a: m.a_limit(),
        b: m.b_limit(),
        compact: Verdict::new(Status::Refuted, radius).with_note("operator is unbounded"),
        bounded,
        isometry,
        op_norm: None,
        ess_norm: None,
        spectrum: None,
        conditions: None,
    };
    if let Some(((lo, hi), (elo, ehi), spec, comp)) = rest? {
        out.op_norm = Some([lo, hi]);
        out.ess_norm = Some([elo, ehi]);
        out.spectrum = Some(spec);
        out.compact = comp.verdict;
        out.conditions = Some(comp.conditions);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{parse_expression, witness_characteristic, witness_distance};

    fn ray() -> Graph {
        Graph::parse("ray").unwrap()
    }

    fn sym(s: &str) -> GraphFunction {
        parse_expression(s).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let g = ray();
        let s = sigma_psi(&sym("1/(d+1)"), &g, 64).unwrap();
        assert_eq!((s.value, s.kind), (0.5, Kind::Exact));
        let chi = witness_characteristic(&g, &g.root()).unwrap();
        assert_eq!(sigma_psi(&chi, &g, 8).unwrap().value, 1.0);
        let sq: Vec<f64> = [16, 32, 64].iter().map(|&r| sigma_psi(&sym("sqrt(d)"), &g, r).unwrap().value).collect();
        assert!(sq[0] < sq[1] && sq[1] < sq[2]);
    }

    #[test]
    fn boundedness_examples() {
        let g = ray();
        assert!(boundedness(&sym("1/(d+1)"), &g, 64).unwrap().is(Status::Proven));
        assert!(boundedness(&witness_distance(), &g, 64).unwrap().is(Status::Refuted));
        assert!(boundedness(&sym("3"), &g, 64).unwrap().is(Status::Proven));
        assert!(matches!(
            operator_norm_interval(&witness_distance(), &g, 8),
            Err(Error::UnboundedSymbol(_))
        ));
    }

    #[test]
    fn intervals_collapse() {
        let g = ray();
        let (lo, hi) = operator_norm_interval(&sym("1/(d+1)"), &g, 64).unwrap();
        assert_eq!((lo.value, hi.value), (1.5, 1.5));
        let chi = witness_characteristic(&g, &g.root()).unwrap();
        let (lo, hi) = operator_norm_interval(&chi, &g, 8).unwrap();
        assert_eq!((lo.value, hi.value), (2.0, 2.0));
        let (lo, hi) = operator_norm_interval(&sym("2*i"), &g, 8).unwrap();
        assert_eq!((lo.value, hi.value), (2.0, 2.0));
    }

    #[test]
    fn compactness_counterexamples() {
        let g = ray();
        let c = compactness(&sym("if d==0 then 1 else sin(d)/d"), &g, 64).unwrap();
        assert!(c.verdict.is(Status::Refuted));
        assert_eq!((c.conditions[0].holds, c.conditions[1].holds), (Some(true), Some(false)));
        let c = compactness(&sym("sum(1/k^2, k, 1, d+1)"), &g, 64).unwrap();
        assert_eq!((c.conditions[0].holds, c.conditions[1].holds), (Some(false), Some(true)));
        assert!((c.conditions[0].estimate.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert!(compactness(&sym("5"), &g, 8).unwrap().verdict.is(Status::Refuted));
        assert!(compactness(&sym("1/(d+1)"), &g, 8).unwrap().verdict.is(Status::Proven));
    }

    #[test]
    fn essential_interval() {
        let g = ray();
        let (lo, hi) = essential_norm_interval(&sym("sum(1/k^2,k,1,d+1)"), &g, 64).unwrap();
        let a = std::f64::consts::PI.powi(2) / 6.0;
        assert!((lo.value - a).abs() < 1e-12 && (hi.value - 4.0 * a).abs() < 1e-12);
        let (lo, hi) = essential_norm_interval(&sym("-3"), &g, 4).unwrap();
        assert_eq!((lo.value, hi.value), (3.0, 12.0));
    }

    #[test]
    fn spectrum_of_harmonic_symbol() {
        let g = ray();
        let s = spectrum(&sym("1/(d+1)"), &g, 64, 1e-9, Some(Complex64::new(2.0, 0.0))).unwrap();
        assert_eq!(s.sample.len(), 65);
        assert_eq!(s.extras, vec![Complex64::new(0.0, 0.0)]);
        let q = s.query.unwrap();
        assert_eq!(q.gap, 1.0);
        assert_eq!(q.bound_holds, Some(true));
        assert!(q.identity_residual.unwrap() < 1e-15);
        let s = spectrum(&sym("7"), &g, 4, 1e-9, None).unwrap();
        assert_eq!((s.sample.len(), s.extras.len()), (1, 0));
    }

    #[test]
    fn isometry_probes() {
        let g = ray();
        assert!(isometry_test(&sym("i"), &g, 8).unwrap().is(Status::Proven));
        let v = isometry_test(&sym("2"), &g, 8).unwrap();
        assert_eq!(v.witness.as_deref(), Some(PROBE_CONSTANT));
        let v = isometry_test(&sym("1/(d+1)"), &g, 8).unwrap();
        assert!(v.is(Status::Refuted));
    }

    #[test]
    fn apply_and_kn() {
        let g = ray();
        let f = apply(&sym("1/(d+1)"), &witness_distance(), &g, 64).unwrap();
        let e = lipschitz::norm(&f, &g, 64).unwrap();
        assert_eq!(e.value, 0.5);
        let k = apply_kn(2, &witness_distance(), 5).unwrap();
        let vals: Vec<f64> = (0..6).map(|n| k.radial_value(&g, n).unwrap().re).collect();
        assert_eq!(vals, vec![0.0, 1.0, 2.0, 1.0, 0.0, 0.0]);
        assert!(apply_kn(2, &witness_distance(), 4).is_err());
        let r = eigenvector_residual(&sym("1/(d+1)"), &g, &g.parse_vertex("5").unwrap(), 10).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn zero_symbol() {
        let g = Graph::parse("tree:3").unwrap();
        let a = analyze(&sym("0"), &g, 6, 1e-9, None).unwrap();
        assert!(a.bounded.is(Status::Proven) && a.compact.is(Status::Proven));
        let [lo, hi] = a.op_norm.clone().unwrap();
        assert_eq!((lo.value, hi.value), (0.0, 0.0));
        assert_eq!(a.spectrum.unwrap().sample, vec![Complex64::new(0.0, 0.0)]);
    }
}
