use gll::functions::GraphFunction;
use gll::graph::Graph;
use gll::lipschitz::{self, Estimate, Status};
use gll::mult_op::{self, SpectrumReport};
use gll::oracle::{self, CheckStatus, TestCase};
use gll::{Error, Result};
use serde::Serialize;

use crate::config::{Command, Format, RunConfig};

/// Test functions drawn per verification case.
const VERIFY_FUNCTIONS: usize = 8;

pub struct Output {
    pub text: String,
    pub code: i32,
}

fn jsonl<T: Serialize>(records: &[T]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv output: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn profiles_csv(f: &GraphFunction, g: &Graph, radius: u64) -> Result<String> {
    let mut buf = Vec::new();
    lipschitz::shell_profiles(f, g, radius)?
        .write_csv(&mut buf)
        .expect("writing to memory");
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn largest(radii: &[u64]) -> u64 {
    *radii.iter().max().expect("nonempty schedule")
}

pub fn execute(cfg: &RunConfig) -> Result<Output> {
    let g = cfg.graph()?;
    let radii = cfg.radii()?;
    match cfg.command {
        Command::Analyze => analyze(cfg, &g, radii),
        Command::Norm => norm(cfg, &g, radii),
        Command::Approx => approx(cfg, &g),
        Command::Spectrum => spectrum(cfg, &g, radii),
        Command::Verify => verify(cfg, &g, radii),
    }
}

fn analyze(cfg: &RunConfig, g: &Graph, radii: &[u64]) -> Result<Output> {
    let psi = cfg.resolve(cfg.symbol.as_deref(), "symbol", g)?;
    let lambda = cfg.lambda()?;
    let run = |r| mult_op::analyze(&psi, g, r, cfg.grid_eps, lambda);
    let (text, refuted) = match cfg.format {
        Format::Json => {
            let records = radii.iter().map(|&r| run(r)).collect::<Result<Vec<_>>>()?;
            let refuted = records.iter().any(|a| a.bounded.is(Status::Refuted));
            (jsonl(&records), refuted)
        }
        Format::Csv => {
            let r = largest(radii);
            (profiles_csv(&psi, g, r)?, run(r)?.bounded.is(Status::Refuted))
        }
    };
    Ok(Output {
        text,
        code: if refuted { 2 } else { 0 },
    })
}

#[derive(Serialize)]
struct NormRecord<'a> {
    function: &'a str,
    family: String,
    #[serde(flatten)]
    estimate: Estimate,
}

fn norm(cfg: &RunConfig, g: &Graph, radii: &[u64]) -> Result<Output> {
    let f = cfg.resolve(cfg.function.as_deref(), "function", g)?;
    let text = match cfg.format {
        Format::Json => {
            let records = radii
                .iter()
                .map(|&r| {
                    Ok(NormRecord {
                        function: f.label(),
                        family: g.descriptor(),
                        estimate: lipschitz::norm(&f, g, r)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            jsonl(&records)
        }
        Format::Csv => profiles_csv(&f, g, largest(radii))?,
    };
    Ok(Output { text, code: 0 })
}

#[derive(Serialize)]
struct ApproxRecord<'a> {
    function: &'a str,
    family: String,
    #[serde(serialize_with = "opt_f64")]
    eps: Option<f64>,
    n: Option<u64>,
    guaranteed: bool,
    achieved: Estimate,
    support_radius: Option<u64>,
    values: Vec<(String, f64, f64)>,
}

fn opt_f64<S: serde::Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) if x.is_finite() => s.serialize_f64(*x),
        Some(_) => s.serialize_str("inf"),
        None => s.serialize_none(),
    }
}

fn approx(cfg: &RunConfig, g: &Graph) -> Result<Output> {
    let f = cfg.resolve(cfg.function.as_deref(), "function", g)?;
    let eps = match (cfg.eps, cfg.n) {
        (Some(e), _) => e,
        (None, Some(_)) => f64::INFINITY,
        (None, None) => return Err(Error::InvalidParameter("--eps or --n is required".into())),
    };
    let a = lipschitz::finite_support_approximation(&f, g, eps, cfg.n)?;
    let support = a.function.support(g)?.radius();
    let values: Vec<(String, f64, f64)> = match support {
        Some(s) => a
            .function
            .sample(g, s)?
            .into_iter()
            .filter(|(_, z)| z.norm() != 0.0)
            .map(|(site, z)| (site.describe(g), z.re, z.im))
            .collect(),
        None => Vec::new(),
    };
    let text = match cfg.format {
        Format::Json => jsonl(&[ApproxRecord {
            function: f.label(),
            family: g.descriptor(),
            eps: cfg.eps,
            n: a.n,
            guaranteed: a.guaranteed,
            achieved: a.achieved,
            support_radius: support,
            values,
        }]),
        Format::Csv => csv_text(
            &["site", "re", "im"],
            values.into_iter().map(|(s, re, im)| vec![s, re.to_string(), im.to_string()]),
        )?,
    };
    Ok(Output { text, code: 0 })
}

#[derive(Serialize)]
struct SpectrumRecord<'a> {
    symbol: &'a str,
    family: String,
    radius: u64,
    #[serde(flatten)]
    spectrum: SpectrumReport,
}

fn spectrum(cfg: &RunConfig, g: &Graph, radii: &[u64]) -> Result<Output> {
    let psi = cfg.resolve(cfg.symbol.as_deref(), "symbol", g)?;
    let lambda = cfg.lambda()?;
    let run = |r| mult_op::spectrum(&psi, g, r, cfg.grid_eps, lambda);
    let text = match cfg.format {
        Format::Json => {
            let records = radii
                .iter()
                .map(|&r| {
                    Ok(SpectrumRecord {
                        symbol: psi.label(),
                        family: g.descriptor(),
                        radius: r,
                        spectrum: run(r)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            jsonl(&records)
        }
        Format::Csv => {
            let s = run(largest(radii))?;
            let rows = s
                .sample
                .iter()
                .zip(&s.sites)
                .map(|(z, site)| vec!["sample".into(), site.clone(), z.re.to_string(), z.im.to_string()])
                .chain(
                    s.extras
                        .iter()
                        .map(|z| vec!["extra".into(), String::new(), z.re.to_string(), z.im.to_string()]),
                );
            csv_text(&["kind", "site", "re", "im"], rows)?
        }
    };
    Ok(Output { text, code: 0 })
}

fn verify(cfg: &RunConfig, g: &Graph, radii: &[u64]) -> Result<Output> {
    let symbols = match &cfg.symbol {
        Some(s) => vec![cfg.resolve(Some(s), "symbol", g)?],
        None => oracle::default_symbols(g)?,
    };
    let mut cases = Vec::new();
    for &r in radii {
        for psi in &symbols {
            let mut case = TestCase::new(g, psi.clone(), r, cfg.seed, VERIFY_FUNCTIONS)?;
            case.budget = cfg.iterations;
            cases.push((case, g.clone()));
        }
    }
    let records = oracle::sweep_all(&cases);
    let failed = records.iter().any(|r| r.status == CheckStatus::Fail);
    let num = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
    let text = match cfg.format {
        Format::Json => oracle::to_jsonl(&records),
        Format::Csv => csv_text(
            &["check", "family", "symbol", "radius", "status", "lhs", "rhs", "witness"],
            records.iter().map(|r| {
                vec![
                    r.check.to_string(),
                    r.family.clone(),
                    r.symbol.clone(),
                    r.radius.to_string(),
                    serde_json::to_value(r.status).unwrap().as_str().unwrap().to_string(),
                    num(r.lhs),
                    num(r.rhs),
                    r.witness.clone().unwrap_or_default(),
                ]
            }),
        )?,
    };
    Ok(Output {
        text,
        code: if failed { 2 } else { 0 },
    })
}
