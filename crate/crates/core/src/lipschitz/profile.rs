//! Per-shell reductions. Every supremum in the crate is a maximum over one
//! of these profiles, so a single pass over the ball serves all of them.

use std::collections::HashMap;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::functions::GraphFunction;
use crate::graph::{Ball, Graph, VertexId};

/// How the profiles were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfilePath {
    /// One evaluation per shell; valid for radial functions on families
    /// whose consecutive shells are always joined.
    Radial,
    /// Only the support and its neighbors are visited.
    Sparse,
    /// Full enumeration of the ball.
    Dense,
}

/// Shell-indexed maxima on `B_R`.
///
/// * `abs_max[n]`: `max |f|` on shell `n`, for `n ≤ R`.
/// * `vertex_diff[n]`: `max_{d(v)=n} max_{w∼v} |f(v) - f(w)|`, for `n < R`.
/// * `edge_diff[m]`: `max |f(v) - f(w)|` over edges whose nearer endpoint
///   lies on shell `m`, for `m < R`.
/// * `weighted[m]`: the same edges weighted by `max(d(v), d(w))`.
///
/// Edges with both endpoints on shell `R` are not in the ball and are
/// not represented.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellProfiles {
    pub radius: u64,
    pub path: ProfilePath,
    pub root_value: Complex64,
    pub abs_max: Vec<f64>,
    pub vertex_diff: Vec<f64>,
    pub edge_diff: Vec<f64>,
    pub weighted: Vec<f64>,
    pub abs_witness: Vec<Option<String>>,
    pub edge_witness: Vec<Option<String>>,
    pub weighted_witness: Vec<Option<String>>,
}

fn argmax(xs: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &x) in xs.iter().enumerate() {
        if best.map_or(true, |b| x > xs[b]) {
            best = Some(i);
        }
    }
    best
}

impl ShellProfiles {
    fn empty(radius: u64, path: ProfilePath, root_value: Complex64) -> Self {
        let r = radius as usize;
        ShellProfiles {
            radius,
            path,
            root_value,
            abs_max: vec![0.0; r + 1],
            vertex_diff: vec![0.0; r],
            edge_diff: vec![0.0; r],
            weighted: vec![0.0; r],
            abs_witness: vec![None; r + 1],
            edge_witness: vec![None; r],
            weighted_witness: vec![None; r],
        }
    }

    pub fn max_abs(&self) -> (f64, Option<String>) {
        pick(&self.abs_max, &self.abs_witness)
    }

    pub fn max_edge_diff(&self) -> (f64, Option<String>) {
        pick(&self.edge_diff, &self.edge_witness)
    }

    pub fn max_weighted(&self) -> (f64, Option<String>) {
        pick(&self.weighted, &self.weighted_witness)
    }

    /// `max |f|` over shells `n..=R`.
    pub fn abs_tail(&self, n: u64) -> f64 {
        self.abs_max.iter().skip(n as usize).fold(0.0, |a, &b| a.max(b))
    }

    /// Maximum weighted difference over ball edges with both ends at
    /// distance `≥ n`.
    pub fn weighted_tail(&self, n: u64) -> f64 {
        self.weighted.iter().skip(n as usize).fold(0.0, |a, &b| a.max(b))
    }

    pub fn edge_diff_tail(&self, n: u64) -> f64 {
        self.edge_diff.iter().skip(n as usize).fold(0.0, |a, &b| a.max(b))
    }

    /// `max |f(v)| / d(v)` per shell, for `1 ≤ n ≤ R`.
    pub fn growth(&self) -> Vec<(u64, f64)> {
        (1..=self.radius)
            .map(|n| (n, self.abs_max[n as usize] / n as f64))
            .collect()
    }

    /// Profiles truncated to a smaller radius. Exact for every path, since
    /// each entry only involves edges and vertices inside `B_r`.
    pub fn truncated(&self, r: u64) -> ShellProfiles {
        assert!(r <= self.radius);
        let (a, e) = (r as usize + 1, r as usize);
        ShellProfiles {
            radius: r,
            path: self.path,
            root_value: self.root_value,
            abs_max: self.abs_max[..a].to_vec(),
            vertex_diff: self.vertex_diff[..e].to_vec(),
            edge_diff: self.edge_diff[..e].to_vec(),
            weighted: self.weighted[..e].to_vec(),
            abs_witness: self.abs_witness[..a].to_vec(),
            edge_witness: self.edge_witness[..e].to_vec(),
            weighted_witness: self.weighted_witness[..e].to_vec(),
        }
    }

    /// Writes `shell,n,value` rows for every profile.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "shell,n,value")?;
        let rows: [(&str, &[f64]); 4] = [
            ("abs_max", &self.abs_max),
            ("vertex_diff", &self.vertex_diff),
            ("edge_diff", &self.edge_diff),
            ("weighted_diff", &self.weighted),
        ];
        for (name, vals) in rows {
            for (n, v) in vals.iter().enumerate() {
                writeln!(out, "{name},{n},{v}")?;
            }
        }
        for (n, v) in self.growth() {
            writeln!(out, "growth,{n},{v}")?;
        }
        Ok(())
    }
}

fn pick(vals: &[f64], wit: &[Option<String>]) -> (f64, Option<String>) {
    match argmax(vals) {
        Some(i) => (vals[i], wit[i].clone()),
        None => (0.0, None),
    }
}

/// Computes the profiles on `B_R`, picking the cheapest valid path.
pub fn shell_profiles(f: &GraphFunction, g: &Graph, radius: u64) -> Result<ShellProfiles> {
    if f.is_radial(g) && g.family().has_escaping_ray() {
        radial(f, g, radius)
    } else if let Some(support) = f.support_vertices().filter(|_| g.family().has_escaping_ray()) {
        sparse(f, g, radius, &support)
    } else {
        dense(f, g, radius)
    }
}

/// Computes the profiles along a specific path. The radial and sparse
/// paths fall back to the dense one when their preconditions fail.
pub fn shell_profiles_via(
    f: &GraphFunction,
    g: &Graph,
    radius: u64,
    path: ProfilePath,
) -> Result<ShellProfiles> {
    match path {
        ProfilePath::Radial if f.is_radial(g) && g.family().has_escaping_ray() => radial(f, g, radius),
        ProfilePath::Sparse if g.family().has_escaping_ray() => match f.support_vertices() {
            Some(s) => sparse(f, g, radius, &s),
            None => dense(f, g, radius),
        },
        _ => dense(f, g, radius),
    }
}

fn radial(f: &GraphFunction, g: &Graph, radius: u64) -> Result<ShellProfiles> {
    let p: Vec<Complex64> = (0..=radius)
        .into_par_iter()
        .map(|n| f.radial_value(g, n))
        .collect::<Result<_>>()?;
    let mut out = ShellProfiles::empty(radius, ProfilePath::Radial, p[0]);
    for (n, z) in p.iter().enumerate() {
        out.abs_max[n] = z.norm();
        out.abs_witness[n] = Some(format!("d={n}"));
    }
    let delta: Vec<f64> = p.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    for (m, &dm) in delta.iter().enumerate() {
        out.edge_diff[m] = dm;
        out.weighted[m] = (m as f64 + 1.0) * dm;
        out.edge_witness[m] = Some(format!("d={m} ~ d={}", m + 1));
        out.weighted_witness[m] = Some(format!("d={} -> d={m}", m + 1));
        let inward = if m > 0 { delta[m - 1] } else { 0.0 };
        out.vertex_diff[m] = inward.max(dm);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Best {
    value: f64,
    at: (usize, usize),
}

impl Best {
    const NONE: Best = Best {
        value: f64::NEG_INFINITY,
        at: (usize::MAX, usize::MAX),
    };

    /// Larger value wins; ties go to the lexicographically smaller site,
    /// which makes the reduction independent of evaluation order.
    fn offer(&mut self, value: f64, at: (usize, usize)) {
        if value > self.value || (value == self.value && at < self.at) {
            *self = Best { value, at };
        }
    }

    fn merge(&mut self, other: &Best) {
        self.offer(other.value, other.at);
    }

    fn get(&self) -> f64 {
        self.value.max(0.0)
    }
}

/// Maxima gathered from a block of consecutive ball indices. Offsets are
/// relative to `lo`, the smallest distance in the block.
struct Partial {
    lo: usize,
    abs: Vec<Best>,
    vertex: Vec<Best>,
    edge: Vec<Best>,
    weighted: Vec<Best>,
}

fn dense(f: &GraphFunction, g: &Graph, radius: u64) -> Result<ShellProfiles> {
    let ball = g.ball(radius)?;
    let vals = f.values_on(g, &ball)?;
    let r = radius as usize;

    const BLOCK: usize = 8192;
    let blocks: Vec<(usize, usize)> = (0..ball.len())
        .step_by(BLOCK)
        .map(|s| (s, (s + BLOCK).min(ball.len())))
        .collect();
    let partials: Vec<Partial> = blocks
        .par_iter()
        .map(|&(s, e)| scan_block(&ball, &vals, s, e))
        .collect();

    let mut abs = vec![Best::NONE; r + 1];
    let mut vertex = vec![Best::NONE; r];
    let mut edge = vec![Best::NONE; r];
    let mut weighted = vec![Best::NONE; r];
    for p in &partials {
        for (k, b) in p.abs.iter().enumerate() {
            if p.lo + k <= r {
                abs[p.lo + k].merge(b);
            }
        }
        for (k, b) in p.vertex.iter().enumerate() {
            if p.lo + k < r {
                vertex[p.lo + k].merge(b);
            }
        }
        for (k, b) in p.edge.iter().enumerate() {
            if p.lo + k < r {
                edge[p.lo + k].merge(b);
                weighted[p.lo + k].merge(&p.weighted[k]);
            }
        }
    }

    let name = |i: usize| g.format_vertex(&ball.vertex(i));
    let mut out = ShellProfiles::empty(radius, ProfilePath::Dense, vals[0]);
    for n in 0..=r {
        out.abs_max[n] = abs[n].get();
        out.abs_witness[n] = (abs[n].value >= 0.0).then(|| name(abs[n].at.0));
    }
    for m in 0..r {
        out.vertex_diff[m] = vertex[m].get();
        out.edge_diff[m] = edge[m].get();
        out.weighted[m] = weighted[m].get();
        out.edge_witness[m] = (edge[m].value >= 0.0).then(|| {
            let (i, j) = edge[m].at;
            format!("{} ~ {}", name(i), name(j))
        });
        out.weighted_witness[m] = (weighted[m].value >= 0.0).then(|| {
            let (i, j) = weighted[m].at;
            format!("{} -> {}", name(i), name(j))
        });
    }
    Ok(out)
}

fn scan_block(ball: &Ball, vals: &[Complex64], s: usize, e: usize) -> Partial {
    let lo = ball.dist(s) as usize;
    let hi = ball.dist(e - 1) as usize;
    let span = hi - lo + 2;
    let mut p = Partial {
        lo: lo.saturating_sub(1),
        abs: vec![Best::NONE; span + 1],
        vertex: vec![Best::NONE; span + 1],
        edge: vec![Best::NONE; span + 1],
        weighted: vec![Best::NONE; span + 1],
    };
    let base = p.lo;
    for i in s..e {
        let di = ball.dist(i) as usize;
        p.abs[di - base].offer(vals[i].norm(), (i, i));
        if !ball.is_interior(i) {
            continue;
        }
        let mut own = Best::NONE;
        for j in ball.neighbors(i) {
            let dj = ball.dist(j) as usize;
            let diff = (vals[i] - vals[j]).norm();
            own.offer(diff, (i, j));
            let m = di.min(dj);
            p.edge[m - base].offer(diff, (i.min(j), i.max(j)));
            let (far, near) = if dj > di { (j, i) } else { (i, j) };
            p.weighted[m - base].offer(di.max(dj) as f64 * diff, (far, near));
        }
        p.vertex[di - base].merge(&own);
    }
    p
}

fn sparse(f: &GraphFunction, g: &Graph, radius: u64, support: &[VertexId]) -> Result<ShellProfiles> {
    let root_value = f.eval_point(g, &g.root(), 0)?;
    let mut out = ShellProfiles::empty(radius, ProfilePath::Sparse, root_value);
    out.abs_max[0] = root_value.norm();
    out.abs_witness[0] = Some(g.format_vertex(&g.root()));
    if support.is_empty() {
        return Ok(out);
    }
    let mut nbrs: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    let mut targets: Vec<VertexId> = support.to_vec();
    for s in support {
        let list = g.neighbors(s)?;
        targets.extend(list.iter().copied());
        nbrs.insert(*s, list);
    }
    targets.sort_unstable();
    targets.dedup();
    let dist: HashMap<VertexId, u64> = targets
        .iter()
        .copied()
        .zip(g.distances_to(&targets, radius)?)
        .filter_map(|(v, d)| d.map(|d| (v, d)))
        .collect();

    let value = |v: &VertexId, d: u64, cache: &mut HashMap<VertexId, Complex64>| -> Result<Complex64> {
        if let Some(z) = cache.get(v) {
            return Ok(*z);
        }
        let z = f.eval_point(g, v, d)?;
        cache.insert(*v, z);
        Ok(z)
    };
    let mut cache = HashMap::new();
    let mut per_vertex: HashMap<VertexId, (u64, f64)> = HashMap::new();
    let name = |v: &VertexId| g.format_vertex(v);
    let mut sorted: Vec<&VertexId> = support.iter().collect();
    sorted.sort_unstable();
    sorted.dedup();

    for s in sorted {
        let Some(&ds) = dist.get(s) else { continue };
        let fs = value(s, ds, &mut cache)?;
        let n = ds as usize;
        if fs.norm() > out.abs_max[n] || out.abs_witness[n].is_none() {
            out.abs_max[n] = out.abs_max[n].max(fs.norm());
            out.abs_witness[n] = Some(name(s));
        }
        for w in &nbrs[s] {
            let Some(&dw) = dist.get(w) else { continue };
            let m = ds.min(dw) as usize;
            if m >= radius as usize {
                continue;
            }
            let diff = (fs - value(w, dw, &mut cache)?).norm();
            if diff > out.edge_diff[m] || out.edge_witness[m].is_none() {
                out.edge_diff[m] = out.edge_diff[m].max(diff);
                out.edge_witness[m] = Some(format!("{} ~ {}", name(s), name(w)));
            }
            let wdiff = ds.max(dw) as f64 * diff;
            if wdiff > out.weighted[m] || out.weighted_witness[m].is_none() {
                out.weighted[m] = out.weighted[m].max(wdiff);
                out.weighted_witness[m] = Some(if dw > ds {
                    format!("{} -> {}", name(w), name(s))
                } else {
                    format!("{} -> {}", name(s), name(w))
                });
            }
            for (v, d) in [(*s, ds), (*w, dw)] {
                let e = per_vertex.entry(v).or_insert((d, 0.0));
                e.1 = e.1.max(diff);
            }
        }
    }
    for (d, m) in per_vertex.values() {
        if (*d as usize) < out.vertex_diff.len() {
            out.vertex_diff[*d as usize] = out.vertex_diff[*d as usize].max(*m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{parse_expression, witness_characteristic, witness_tent};

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12)
    }

    fn agree(a: &ShellProfiles, b: &ShellProfiles) {
        assert!(close(&a.abs_max, &b.abs_max), "abs {:?} {:?}", a.abs_max, b.abs_max);
        assert!(close(&a.vertex_diff, &b.vertex_diff), "vertex {:?} {:?}", a.vertex_diff, b.vertex_diff);
        assert!(close(&a.edge_diff, &b.edge_diff), "edge {:?} {:?}", a.edge_diff, b.edge_diff);
        assert!(close(&a.weighted, &b.weighted), "weighted {:?} {:?}", a.weighted, b.weighted);
    }

    #[test]
    fn radial_matches_dense() {
        let f = parse_expression("if d==0 then 1 else sin(d)/d").unwrap();
        for fam in ["ray", "tree:3", "lattice:2", "ladder", "random:5:4"] {
            let g = Graph::parse(fam).unwrap();
            let a = shell_profiles_via(&f, &g, 7, ProfilePath::Radial).unwrap();
            let b = shell_profiles_via(&f, &g, 7, ProfilePath::Dense).unwrap();
            assert_eq!(a.path, ProfilePath::Radial);
            agree(&a, &b);
        }
    }

    #[test]
    fn sparse_matches_dense() {
        let g = Graph::parse("ladder").unwrap();
        let v = g.parse_vertex("3,1").unwrap();
        let chi = witness_characteristic(&g, &v).unwrap();
        for r in [2, 3, 4, 8] {
            let a = shell_profiles_via(&chi, &g, r, ProfilePath::Sparse).unwrap();
            let b = shell_profiles_via(&chi, &g, r, ProfilePath::Dense).unwrap();
            agree(&a, &b);
        }
    }

    #[test]
    fn tent_on_ray() {
        let g = Graph::parse("ray").unwrap();
        let p = shell_profiles(&witness_tent(3).unwrap(), &g, 8).unwrap();
        assert_eq!(p.abs_max, vec![0.0, 1.0, 2.0, 3.0, 2.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.weighted, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.0, 0.0]);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("shell,n,value\nabs_max,0,0\n"));
    }

    #[test]
    fn truncation_is_prefix() {
        let g = Graph::parse("lattice:2").unwrap();
        let f = parse_expression("x*x - y").unwrap();
        let big = shell_profiles(&f, &g, 9).unwrap();
        let small = shell_profiles(&f, &g, 5).unwrap();
        agree(&big.truncated(5), &small);
    }
}
