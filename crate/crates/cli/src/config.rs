use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gll::functions::{self, parse_complex, GraphFunction, Table, TailCertificate, TailMap};
use gll::graph::Graph;
use gll::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Norm,
    Approx,
    Spectrum,
    Verify,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Overrides for the tail certificate of the symbol or function.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct CertArgs {
    /// Bound on sup{|f(v)| : d(v) ≥ n}, as `inf`, a number or an expression in d
    #[arg(long)]
    pub cert_abs: Option<String>,
    /// Bound on edge differences beyond shell n
    #[arg(long)]
    pub cert_diff: Option<String>,
    /// Bound on distance-weighted edge differences beyond shell n
    #[arg(long)]
    pub cert_wdiff: Option<String>,
    /// Bound on sup{|f(v)|/d(v) : d(v) ≥ n}
    #[arg(long)]
    pub cert_growth: Option<String>,
    /// First shell where the bounds hold
    #[arg(long)]
    pub cert_from: Option<u64>,
    /// Certified value of A
    #[arg(long)]
    pub limit_a: Option<f64>,
    /// Certified value of B
    #[arg(long)]
    pub limit_b: Option<f64>,
    /// Certified limit of the edge differences
    #[arg(long)]
    pub limit_diff: Option<f64>,
    /// Certified limit value of the function, e.g. `0` or `1+2i`
    #[arg(long)]
    pub limit_value: Option<String>,
}

impl CertArgs {
    fn is_empty(&self) -> bool {
        *self == CertArgs::default()
    }

    fn apply(&self, base: Option<TailCertificate>) -> Result<TailCertificate> {
        let mut c = base.unwrap_or_default();
        let map = |s: &Option<String>| s.as_deref().map(TailMap::parse).transpose();
        if let Some(m) = map(&self.cert_abs)? {
            c.sup_abs = Some(m);
        }
        if let Some(m) = map(&self.cert_diff)? {
            c.sup_diff = Some(m);
        }
        if let Some(m) = map(&self.cert_wdiff)? {
            c.sup_weighted_diff = Some(m);
        }
        if let Some(m) = map(&self.cert_growth)? {
            c.sup_growth = Some(m);
        }
        if let Some(n) = self.cert_from {
            c.valid_from = n;
        }
        c.limit_a = self.limit_a.or(c.limit_a);
        c.limit_b = self.limit_b.or(c.limit_b);
        c.limit_diff = self.limit_diff.or(c.limit_diff);
        if let Some(v) = &self.limit_value {
            c.limit_value = Some(complex(v)?);
        }
        Ok(c)
    }
}

/// Options shared by every command. Flags a command does not use are
/// ignored.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Graph family: ray, tree:<q>, lattice:<1|2>, ladder, random:<seed>:<maxdeg>
    #[arg(long, default_value = "ray")]
    pub graph: String,
    /// Root vertex encoding (default: the family's origin)
    #[arg(long)]
    pub root: Option<String>,
    /// Multiplication symbol (analyze, spectrum, verify): an expression in d, x, y,
    /// a witness name or table:<path>
    #[arg(long)]
    pub symbol: Option<String>,
    /// Function (norm, approx): witness:distance|harmonic|tent:<m>|ramp:<m>|char:<vertex>,
    /// table:<path> or an expression
    #[arg(long)]
    pub function: Option<String>,
    /// Radius or comma-separated schedule; one record per radius
    #[arg(long, default_value = "32", value_delimiter = ',')]
    pub radius: Vec<u64>,
    /// Target accuracy (approx)
    #[arg(long)]
    pub eps: Option<f64>,
    /// Force the truncation radius N (approx); drops the accuracy guarantee
    #[arg(long)]
    pub n: Option<u64>,
    /// Deduplication width for spectrum samples
    #[arg(long, default_value_t = 1e-9)]
    pub grid_eps: f64,
    /// Point at which to build the resolvent (analyze, spectrum), e.g. `2` or `0.5+1i`
    #[arg(long)]
    pub lambda: Option<String>,
    /// Seed for random test functions (verify)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Best-ratio search iterations (verify)
    #[arg(long, default_value_t = 64)]
    pub iterations: usize,
    /// Maximum number of vertices in a materialized ball
    #[arg(long, env = "GLL_VERTEX_BUDGET")]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cert: CertArgs,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub graph: String,
    #[serde(default)]
    pub root: Option<String>,
    #[serde(default)]
    pub symbol: Option<String>,
    #[serde(default)]
    pub function: Option<String>,
    pub radius: Vec<u64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub n: Option<u64>,
    pub grid_eps: f64,
    #[serde(default)]
    pub lambda: Option<String>,
    pub seed: u64,
    pub iterations: usize,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "CertArgs::is_empty")]
    pub certificate: CertArgs,
}

impl RunConfig {
    pub fn from_args(command: Command, a: RunArgs) -> Self {
        RunConfig {
            command,
            graph: a.graph,
            root: a.root,
            symbol: a.symbol,
            function: a.function,
            radius: a.radius,
            eps: a.eps,
            n: a.n,
            grid_eps: a.grid_eps,
            lambda: a.lambda,
            seed: a.seed,
            iterations: a.iterations,
            budget: a.budget,
            format: a.format,
            out: a.out,
            certificate: a.cert,
        }
    }

    pub fn graph(&self) -> Result<Graph> {
        let mut g = Graph::parse(&self.graph)?;
        if let Some(r) = &self.root {
            g = g.with_root(r)?;
        }
        if let Some(b) = self.budget {
            g = g.with_budget(b);
        }
        Ok(g)
    }

    pub fn radii(&self) -> Result<&[u64]> {
        if self.radius.is_empty() {
            return Err(Error::InvalidParameter("empty radius schedule".into()));
        }
        Ok(&self.radius)
    }

    pub fn lambda(&self) -> Result<Option<Complex64>> {
        self.lambda.as_deref().map(complex).transpose()
    }

    /// Resolves `--symbol` or `--function`, applying certificate overrides.
    pub fn resolve(&self, spec: Option<&str>, flag: &str, g: &Graph) -> Result<GraphFunction> {
        let spec = spec.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))?;
        let f = parse_function(spec, g)?;
        if self.certificate.is_empty() {
            return Ok(f);
        }
        let cert = self.certificate.apply(f.certificate())?;
        Ok(f.with_certificate(cert))
    }
}

fn complex(s: &str) -> Result<Complex64> {
    parse_complex(s).ok_or_else(|| Error::InvalidParameter(format!("`{s}` is not a complex number")))
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::InvalidParameter(format!("{what} `{s}` must be a nonnegative integer")))
}

pub fn parse_function(spec: &str, g: &Graph) -> Result<GraphFunction> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("table:") {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))?;
        return Ok(functions::from_table(Table::parse(&text, g)?).with_label(spec));
    }
    if let Some(w) = spec.strip_prefix("witness:") {
        let (name, arg) = w.split_once(':').unwrap_or((w, ""));
        return match (name, arg) {
            ("distance", "") => Ok(functions::witness_distance()),
            ("harmonic", "") => Ok(functions::witness_harmonic()),
            ("tent", m) => functions::witness_tent(parse_u64(m, "tent peak")?),
            ("ramp", m) => functions::witness_ramp(parse_u64(m, "ramp target")?),
            ("char", v) => functions::witness_characteristic(g, &g.parse_vertex(v)?),
            _ => Err(Error::InvalidParameter(format!("unknown witness `{w}`"))),
        };
    }
    functions::parse_expression(spec)
}
