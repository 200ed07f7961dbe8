//! Closed-form tail bounds that let a finite ball speak for the whole graph.
//!
//! Every map `n ↦ T(n)` is an upper bound for a supremum over the part of
//! the graph at distance at least `n` from the root:
//!
//! | field               | supremum                                                   |
//! |---------------------|------------------------------------------------------------|
//! | `sup_abs`           | `|f(v)|` over `d(v) ≥ n`                                   |
//! | `sup_diff`          | `|f(v) - f(w)|` over edges with `d(v), d(w) ≥ n`           |
//! | `sup_weighted_diff` | `max(d(v), d(w)) |f(v) - f(w)|` over the same edges        |
//! | `sup_growth`        | `|f(v)| / d(v)` over `d(v) ≥ n`, defined for `n ≥ 1`       |
//!
//! The `limit_*` fields record the exact limits of the first three maps
//! (and of `f` itself, when it converges).

use num_complex::Complex64;
use once_cell::sync::Lazy;

use super::dsl::Expr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum TailMap {
    Const(f64),
    /// An expression in `d`, read at `d = n`.
    Expr(Expr),
    /// Explicit values for `n < head.len()`, then `rest`.
    Table { head: Vec<f64>, rest: Box<TailMap> },
    Scaled(f64, Box<TailMap>),
}

impl TailMap {
    pub fn expr(src: &str) -> TailMap {
        TailMap::Expr(Expr::parse(src).expect("built-in tail expression"))
    }

    /// Accepts `inf`, a number, or an expression in `d`.
    pub fn parse(src: &str) -> Result<TailMap> {
        let s = src.trim();
        if matches!(s, "inf" | "infinity" | "+inf") {
            return Ok(TailMap::Const(f64::INFINITY));
        }
        if let Ok(x) = s.parse::<f64>() {
            if x.is_nan() || x < 0.0 {
                return Err(Error::InvalidParameter(format!("tail bound {s} must be nonnegative")));
            }
            return Ok(TailMap::Const(x));
        }
        let e = Expr::parse(s)?;
        if e.uses(super::dsl::Attr::X) || e.uses(super::dsl::Attr::Y) {
            return Err(Error::InvalidParameter("tail bounds may only depend on d".into()));
        }
        Ok(TailMap::Expr(e))
    }

    /// Value at `n`; `None` when the expression cannot be evaluated there.
    pub fn at(&self, n: u64) -> Option<f64> {
        match self {
            TailMap::Const(x) => Some(*x),
            TailMap::Expr(e) => e.eval_radial(n as f64).ok().map(|z| z.norm()),
            TailMap::Table { head, rest } => match head.get(n as usize) {
                Some(x) => Some(*x),
                None => rest.at(n),
            },
            TailMap::Scaled(c, m) => m.at(n).map(|x| if x.is_infinite() && *c == 0.0 { 0.0 } else { c * x }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TailCertificate {
    pub valid_from: u64,
    pub sup_abs: Option<TailMap>,
    pub sup_diff: Option<TailMap>,
    pub sup_weighted_diff: Option<TailMap>,
    pub sup_growth: Option<TailMap>,
    pub limit_a: Option<f64>,
    pub limit_b: Option<f64>,
    pub limit_diff: Option<f64>,
    pub limit_value: Option<Complex64>,
}

fn read(map: &Option<TailMap>, n: u64, from: u64) -> Option<f64> {
    if n < from {
        return None;
    }
    map.as_ref()?.at(n)
}

impl TailCertificate {
    pub fn abs_tail(&self, n: u64) -> Option<f64> {
        read(&self.sup_abs, n, self.valid_from)
    }

    pub fn diff_tail(&self, n: u64) -> Option<f64> {
        read(&self.sup_diff, n, self.valid_from)
    }

    pub fn weighted_tail(&self, n: u64) -> Option<f64> {
        read(&self.sup_weighted_diff, n, self.valid_from)
    }

    pub fn growth_tail(&self, n: u64) -> Option<f64> {
        read(&self.sup_growth, n, self.valid_from.max(1))
    }

    /// Certificate for `c·f`.
    pub fn scaled(&self, c: Complex64) -> TailCertificate {
        let k = c.norm();
        let s = |m: &Option<TailMap>| m.clone().map(|m| TailMap::Scaled(k, Box::new(m)));
        let l = |x: Option<f64>| x.map(|x| if x.is_infinite() && k == 0.0 { 0.0 } else { k * x });
        TailCertificate {
            valid_from: self.valid_from,
            sup_abs: s(&self.sup_abs),
            sup_diff: s(&self.sup_diff),
            sup_weighted_diff: s(&self.sup_weighted_diff),
            sup_growth: s(&self.sup_growth),
            limit_a: l(self.limit_a),
            limit_b: l(self.limit_b),
            limit_diff: l(self.limit_diff),
            limit_value: self.limit_value.map(|z| c * z),
        }
    }

    /// The same bounds, claimed only from `n` on.
    pub fn starting_at(&self, n: u64) -> TailCertificate {
        TailCertificate {
            valid_from: self.valid_from.max(n),
            ..self.clone()
        }
    }

    pub fn constant(c: Complex64) -> TailCertificate {
        let r = c.norm();
        TailCertificate {
            valid_from: 0,
            sup_abs: Some(TailMap::Const(r)),
            sup_diff: Some(TailMap::Const(0.0)),
            sup_weighted_diff: Some(TailMap::Const(0.0)),
            sup_growth: Some(TailMap::Scaled(r, Box::new(TailMap::expr("1/d")))),
            limit_a: Some(r),
            limit_b: Some(0.0),
            limit_diff: Some(0.0),
            limit_value: Some(c),
        }
    }

    pub fn distance() -> TailCertificate {
        TailCertificate {
            valid_from: 0,
            sup_abs: Some(TailMap::Const(f64::INFINITY)),
            sup_diff: Some(TailMap::Const(1.0)),
            sup_weighted_diff: Some(TailMap::Const(f64::INFINITY)),
            sup_growth: Some(TailMap::Const(1.0)),
            limit_a: Some(f64::INFINITY),
            limit_b: Some(f64::INFINITY),
            limit_diff: Some(1.0),
            limit_value: None,
        }
    }

    pub fn harmonic() -> TailCertificate {
        TailCertificate {
            valid_from: 1,
            sup_abs: Some(TailMap::Const(f64::INFINITY)),
            sup_diff: Some(TailMap::expr("1/(d+1)")),
            sup_weighted_diff: Some(TailMap::Const(1.0)),
            sup_growth: Some(TailMap::expr("sum(1/k, k, 1, d)/d")),
            limit_a: Some(f64::INFINITY),
            limit_b: Some(1.0),
            limit_diff: Some(0.0),
            limit_value: None,
        }
    }

    /// Exact tails of a radial profile `p(0), ..., p(K)` that stays equal
    /// to `p(K)` from `K` on.
    pub fn eventually_constant(profile: &[Complex64]) -> TailCertificate {
        let k = profile.len() - 1;
        let last = profile[k];
        let delta: Vec<f64> = profile.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let suffix_max = |vals: Vec<f64>| -> Vec<f64> {
            let mut out = vals;
            for i in (0..out.len().saturating_sub(1)).rev() {
                out[i] = out[i].max(out[i + 1]);
            }
            out
        };
        let mut abs = suffix_max(profile.iter().map(|z| z.norm()).collect());
        abs.pop();
        let mut diff = suffix_max(delta.clone());
        diff.push(0.0);
        let mut weighted = suffix_max(
            delta.iter().enumerate().map(|(i, d)| (i as f64 + 1.0) * d).collect(),
        );
        weighted.push(0.0);
        let tail_growth = (last.norm() / k.max(1) as f64).max(0.0);
        let mut growth: Vec<f64> = (0..=k)
            .map(|n| if n == 0 { f64::INFINITY } else { profile[n].norm() / n as f64 })
            .collect();
        growth[k] = growth[k].max(tail_growth);
        let mut growth = suffix_max(growth);
        growth.pop();
        TailCertificate {
            valid_from: 0,
            sup_abs: Some(TailMap::Table {
                head: abs,
                rest: Box::new(TailMap::Const(last.norm())),
            }),
            sup_diff: Some(TailMap::Table {
                head: diff,
                rest: Box::new(TailMap::Const(0.0)),
            }),
            sup_weighted_diff: Some(TailMap::Table {
                head: weighted,
                rest: Box::new(TailMap::Const(0.0)),
            }),
            sup_growth: Some(TailMap::Table {
                head: growth,
                rest: Box::new(TailMap::Scaled(last.norm(), Box::new(TailMap::expr("1/d")))),
            }),
            limit_a: Some(last.norm()),
            limit_b: Some(0.0),
            limit_diff: Some(0.0),
            limit_value: Some(last),
        }
    }
}

struct Entry {
    expr: Expr,
    cert: TailCertificate,
}

static CATALOG: Lazy<Vec<Entry>> = Lazy::new(|| {
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    let half_sin = 2.0 * 0.5f64.sin();
    let entry = |src: &str, cert: TailCertificate| Entry {
        expr: Expr::parse(src).expect("catalog symbol"),
        cert,
    };
    vec![
        entry(
            "1/(d+1)",
            TailCertificate {
                valid_from: 0,
                sup_abs: Some(TailMap::expr("1/(d+1)")),
                sup_diff: Some(TailMap::expr("1/((d+1)*(d+2))")),
                sup_weighted_diff: Some(TailMap::expr("1/(d+2)")),
                sup_growth: Some(TailMap::expr("1/(d*(d+1))")),
                limit_a: Some(0.0),
                limit_b: Some(0.0),
                limit_diff: Some(0.0),
                limit_value: Some(Complex64::new(0.0, 0.0)),
            },
        ),
        entry(
            "sum(1/k^2, k, 1, d+1)",
            TailCertificate {
                valid_from: 0,
                sup_abs: Some(TailMap::Const(basel)),
                sup_diff: Some(TailMap::expr("1/(d+2)^2")),
                sup_weighted_diff: Some(TailMap::expr("(d+1)/(d+2)^2")),
                sup_growth: Some(TailMap::expr("sum(1/k^2, k, 1, d+1)/d")),
                limit_a: Some(basel),
                limit_b: Some(0.0),
                limit_diff: Some(0.0),
                limit_value: Some(Complex64::new(basel, 0.0)),
            },
        ),
        entry(
            "if d==0 then 1 else sin(d)/d",
            TailCertificate {
                valid_from: 1,
                sup_abs: Some(TailMap::expr("1/d")),
                sup_diff: Some(TailMap::expr("2/d")),
                sup_weighted_diff: Some(TailMap::expr("2*sin(1/2) + 1/d")),
                sup_growth: Some(TailMap::expr("1/d^2")),
                limit_a: Some(0.0),
                limit_b: Some(half_sin),
                limit_diff: Some(0.0),
                limit_value: Some(Complex64::new(0.0, 0.0)),
            },
        ),
    ]
});

/// Built-in certificate for a recognised symbol, matched on the parsed
/// expression tree.
pub fn catalog(expr: &Expr) -> Option<TailCertificate> {
    CATALOG.iter().find(|e| e.expr == *expr).map(|e| e.cert.clone())
}
