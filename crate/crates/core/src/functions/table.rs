use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Explicit vertex values; every vertex not listed is zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    entries: BTreeMap<VertexId, Complex64>,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    /// Stores `value` at `v`, dropping the entry when the value is zero.
    pub fn insert(&mut self, v: VertexId, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&v);
        } else {
            self.entries.insert(v, value);
        }
    }

    pub fn get(&self, v: &VertexId) -> Complex64 {
        self.entries.get(v).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &Complex64)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &VertexId> {
        self.entries.keys()
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Table {
        let mut out = Table::new();
        for (v, z) in &self.entries {
            out.insert(*v, f(*z));
        }
        out
    }

    /// Reads the two-column text format `<vertex> <re>[±<im>i]`. Blank
    /// lines and lines starting with `#` are skipped; a repeated vertex
    /// keeps its last value.
    pub fn parse(text: &str, graph: &Graph) -> Result<Table> {
        let mut table = Table::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::TableFormat {
                line: n + 1,
                message,
            };
            let mut cols = line.split_whitespace();
            let (Some(enc), Some(val), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(bad("expected `<vertex> <value>`".into()));
            };
            let v = graph
                .parse_vertex(enc)
                .map_err(|e| bad(e.to_string()))?;
            let z = parse_complex(val).ok_or_else(|| bad(format!("cannot read value `{val}`")))?;
            table.insert(v, z);
        }
        Ok(table)
    }

    pub fn to_text(&self, graph: &Graph) -> String {
        let mut out = String::new();
        for (v, z) in &self.entries {
            out.push_str(&graph.format_vertex(v));
            out.push(' ');
            out.push_str(&format_complex(*z));
            out.push('\n');
        }
        out
    }
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` or `i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite()).map(|x| Complex64::new(x, 0.0));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse::<f64>().ok(),
        }
    };
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, imag(&body[k..])?),
        None => (0.0, imag(body)?),
    };
    (re.is_finite() && im.is_finite()).then_some(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2"), Some(Complex64::new(2.0, 0.0)));
        assert_eq!(parse_complex("1.5+2i"), Some(Complex64::new(1.5, 2.0)));
        assert_eq!(parse_complex("-1-0.5i"), Some(Complex64::new(-1.0, -0.5)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Some(Complex64::new(1e-3, 20.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("3i"), Some(Complex64::new(0.0, 3.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("inf"), None);
        for z in [Complex64::new(0.25, -3.0), Complex64::new(-7.0, 0.0), Complex64::new(1e-300, 1e300)] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }

    #[test]
    fn table_file() {
        let g = Graph::parse("tree:3").unwrap();
        let text = "# peak\nr 1\n\nr.2.1 0.5-0.5i\nr.0 0\n";
        let t = Table::parse(text, &g).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(&g.parse_vertex("r.2.1").unwrap()), Complex64::new(0.5, -0.5));
        assert_eq!(Table::parse(&t.to_text(&g), &g).unwrap(), t);
        assert!(matches!(
            Table::parse("r 1\nr.7 2\n", &g),
            Err(Error::TableFormat { line: 2, .. })
        ));
        assert!(matches!(Table::parse("r\n", &g), Err(Error::TableFormat { line: 1, .. })));
    }
}
