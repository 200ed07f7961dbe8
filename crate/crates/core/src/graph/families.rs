use std::sync::RwLock;

use super::{Coordinates, Family, VertexId};
use crate::error::{Error, Result};

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| Error::invalid_vertex(s, "expected an integer"))
}

/// The one-sided infinite path 0 ∼ 1 ∼ 2 ∼ …
#[derive(Debug, Clone, Copy, Default)]
pub struct Ray;

impl Family for Ray {
    fn descriptor(&self) -> String {
        "ray".into()
    }

    fn origin(&self) -> VertexId {
        VertexId::new(0, 0)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(2)
    }

    fn contains(&self, v: &VertexId) -> bool {
        v.first() >= 0 && v.second() == 0
    }

    fn neighbors_unchecked(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let n = v.first();
        let next = n
            .checked_add(1)
            .ok_or_else(|| Error::invalid_vertex(n.to_string(), "index overflow"))?;
        if n == 0 {
            Ok(vec![VertexId::new(1, 0)])
        } else {
            Ok(vec![VertexId::new(n - 1, 0), VertexId::new(next, 0)])
        }
    }

    fn format_vertex(&self, v: &VertexId) -> String {
        v.first().to_string()
    }

    fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        Ok(VertexId::new(parse_int(s)?, 0))
    }

    fn has_escaping_ray(&self) -> bool {
        true
    }
}

/// Homogeneous tree where every vertex has degree `q`.
///
/// Vertices are stored as `(depth, index)` with the index running over the
/// `q (q-1)^(depth-1)` vertices of that depth in lexicographic path order.
/// The printed form is the path word from the root, e.g. `r.2.0.1`.
#[derive(Debug, Clone, Copy)]
pub struct Tree {
    q: i64,
}

impl Tree {
    pub fn new(q: u32) -> Option<Self> {
        (q >= 2).then_some(Tree { q: q as i64 })
    }

    pub fn degree(&self) -> i64 {
        self.q
    }

    /// Number of vertices at the given depth, or `None` on overflow.
    fn shell_size(&self, depth: i64) -> Option<i64> {
        if depth == 0 {
            return Some(1);
        }
        let mut size = self.q;
        for _ in 1..depth {
            size = size.checked_mul(self.q - 1)?;
        }
        Some(size)
    }
}

impl Family for Tree {
    fn descriptor(&self) -> String {
        format!("tree:{}", self.q)
    }

    fn origin(&self) -> VertexId {
        VertexId::new(0, 0)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.q as usize)
    }

    fn contains(&self, v: &VertexId) -> bool {
        let (depth, idx) = (v.first(), v.second());
        depth >= 0 && idx >= 0 && self.shell_size(depth).is_some_and(|s| idx < s)
    }

    fn neighbors_unchecked(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let (depth, idx) = (v.first(), v.second());
        let branch = self.q - 1;
        let mut out = Vec::with_capacity(self.q as usize);
        if depth == 0 {
            out.extend((0..self.q).map(|c| VertexId::new(1, c)));
            return Ok(out);
        }
        let parent = if depth == 1 { 0 } else { idx / branch };
        out.push(VertexId::new(depth - 1, parent));
        if self.shell_size(depth + 1).is_none() {
            return Err(Error::invalid_vertex(
                self.format_vertex(v),
                "children exceed the representable depth",
            ));
        }
        let base = idx * branch;
        out.extend((0..branch).map(|c| VertexId::new(depth + 1, base + c)));
        Ok(out)
    }

    fn format_vertex(&self, v: &VertexId) -> String {
        let (depth, mut idx) = (v.first(), v.second());
        if depth == 0 {
            return "r".into();
        }
        let branch = self.q - 1;
        let mut digits = Vec::with_capacity(depth as usize);
        for _ in 1..depth {
            digits.push(idx % branch);
            idx /= branch;
        }
        digits.push(idx);
        digits.reverse();
        let mut s = String::from("r");
        for d in digits {
            s.push('.');
            s.push_str(&d.to_string());
        }
        s
    }

    fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        let mut parts = s.split('.');
        if parts.next() != Some("r") {
            return Err(Error::invalid_vertex(s, "tree vertices start with `r`"));
        }
        let branch = self.q - 1;
        let mut depth = 0i64;
        let mut idx = 0i64;
        for part in parts {
            let digit = parse_int(part)?;
            let limit = if depth == 0 { self.q } else { branch };
            if !(0..limit).contains(&digit) {
                return Err(Error::invalid_vertex(s, format!("digit {digit} out of range 0..{limit}")));
            }
            idx = if depth == 0 {
                digit
            } else {
                idx.checked_mul(branch)
                    .and_then(|x| x.checked_add(digit))
                    .ok_or_else(|| Error::invalid_vertex(s, "path too deep"))?
            };
            depth += 1;
        }
        let v = VertexId::new(depth, idx);
        if self.contains(&v) {
            Ok(v)
        } else {
            Err(Error::invalid_vertex(s, "path too deep"))
        }
    }

    fn has_escaping_ray(&self) -> bool {
        true
    }
}

/// The integer lattice ℤ or ℤ² with nearest-neighbor adjacency.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    dim: u32,
}

impl Lattice {
    pub fn new(dim: u32) -> Option<Self> {
        (dim == 1 || dim == 2).then_some(Lattice { dim })
    }
}

impl Family for Lattice {
    fn descriptor(&self) -> String {
        format!("lattice:{}", self.dim)
    }

    fn origin(&self) -> VertexId {
        VertexId::new(0, 0)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(2 * self.dim as usize)
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.dim == 2 || v.second() == 0
    }

    fn neighbors_unchecked(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let (x, y) = (v.first(), v.second());
        let step = |a: i64, d: i64| {
            a.checked_add(d)
                .ok_or_else(|| Error::invalid_vertex(self.format_vertex(v), "coordinate overflow"))
        };
        let mut out = vec![VertexId::new(step(x, -1)?, y)];
        if self.dim == 2 {
            out.push(VertexId::new(x, step(y, -1)?));
            out.push(VertexId::new(x, step(y, 1)?));
        }
        out.push(VertexId::new(step(x, 1)?, y));
        Ok(out)
    }

    fn format_vertex(&self, v: &VertexId) -> String {
        if self.dim == 1 {
            v.first().to_string()
        } else {
            format!("{},{}", v.first(), v.second())
        }
    }

    fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        if self.dim == 1 {
            return Ok(VertexId::new(parse_int(s)?, 0));
        }
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::invalid_vertex(s, "expected `x,y`"))?;
        Ok(VertexId::new(parse_int(x)?, parse_int(y)?))
    }

    fn coordinates(&self, v: &VertexId) -> Option<Coordinates> {
        Some(Coordinates {
            x: v.first(),
            y: (self.dim == 2).then_some(v.second()),
        })
    }

    fn has_escaping_ray(&self) -> bool {
        true
    }
}

/// The ladder ℕ × {0, 1}: two rays joined by rungs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ladder;

impl Family for Ladder {
    fn descriptor(&self) -> String {
        "ladder".into()
    }

    fn origin(&self) -> VertexId {
        VertexId::new(0, 0)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(3)
    }

    fn contains(&self, v: &VertexId) -> bool {
        v.first() >= 0 && (v.second() == 0 || v.second() == 1)
    }

    fn neighbors_unchecked(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let (n, s) = (v.first(), v.second());
        let next = n
            .checked_add(1)
            .ok_or_else(|| Error::invalid_vertex(self.format_vertex(v), "index overflow"))?;
        let mut out = Vec::with_capacity(3);
        if n > 0 {
            out.push(VertexId::new(n - 1, s));
        }
        out.push(VertexId::new(n, 1 - s));
        out.push(VertexId::new(next, s));
        out.sort();
        Ok(out)
    }

    fn format_vertex(&self, v: &VertexId) -> String {
        format!("{},{}", v.first(), v.second())
    }

    fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        let (n, side) = s
            .split_once(',')
            .ok_or_else(|| Error::invalid_vertex(s, "expected `n,side`"))?;
        Ok(VertexId::new(parse_int(n)?, parse_int(side)?))
    }

    fn has_escaping_ray(&self) -> bool {
        true
    }
}

/// Seeded random layered graph with bounded degree.
///
/// Layer `n` holds `width(n)` vertices `(n, i)`; `width(0) = 1` and each
/// width is drawn from `1..=min(64, width(n-1) * (maxdeg - 1))`. Every
/// vertex `(n+1, j)` is joined to its parent `(n, j mod width(n))`.
/// Optional lateral edges `(n,i) ∼ (n,i+1)` and cross edges
/// `(n+1,j) ∼ (n,(j+1) mod width(n))` are switched on by hash bits and kept
/// only when both endpoints' candidate degree fits the bound. All rules are
/// local, so adjacency is symmetric and the distance to `(0,0)` equals the
/// layer index.
#[derive(Debug)]
pub struct RandomBounded {
    seed: u64,
    maxdeg: u32,
    widths: RwLock<Vec<i64>>,
}

const WIDTH_CAP: i64 = 64;
const TAG_WIDTH: u64 = 0x5749_4454;
const TAG_LATERAL: u64 = 0x4c41_5445;
const TAG_CROSS: u64 = 0x4352_4f53;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomBounded {
    pub fn new(seed: u64, maxdeg: u32) -> Option<Self> {
        (maxdeg >= 2).then(|| RandomBounded {
            seed,
            maxdeg,
            widths: RwLock::new(vec![1]),
        })
    }

    fn hash(&self, tag: u64, a: i64, b: i64) -> u64 {
        let mut h = splitmix(self.seed ^ tag);
        h = splitmix(h ^ a as u64);
        splitmix(h ^ (b as u64).rotate_left(17))
    }

    fn bit(&self, tag: u64, a: i64, b: i64) -> bool {
        self.hash(tag, a, b) & 1 == 1
    }

    pub fn width(&self, layer: i64) -> i64 {
        if layer < 0 {
            return 0;
        }
        let idx = layer as usize;
        if let Some(&w) = self.widths.read().expect("width cache poisoned").get(idx) {
            return w;
        }
        let mut widths = self.widths.write().expect("width cache poisoned");
        while widths.len() <= idx {
            let n = widths.len() as i64 - 1;
            let prev = widths[n as usize];
            let cap = (prev * (self.maxdeg as i64 - 1)).clamp(1, WIDTH_CAP);
            let w = 1 + (self.hash(TAG_WIDTH, n, 0) % cap as u64) as i64;
            widths.push(w);
        }
        widths[idx]
    }

    fn mandatory(&self, n: i64, i: i64) -> Vec<VertexId> {
        let mut out = Vec::new();
        if n > 0 {
            out.push(VertexId::new(n - 1, i % self.width(n - 1)));
        }
        let (w, below) = (self.width(n), self.width(n + 1));
        let mut j = i;
        while j < below {
            out.push(VertexId::new(n + 1, j));
            j += w;
        }
        out
    }

    fn optional(&self, n: i64, i: i64) -> Vec<VertexId> {
        let mut out = Vec::new();
        let w = self.width(n);
        if n > 0 {
            if i > 0 && self.bit(TAG_LATERAL, n, i - 1) {
                out.push(VertexId::new(n, i - 1));
            }
            if i + 1 < w && self.bit(TAG_LATERAL, n, i) {
                out.push(VertexId::new(n, i + 1));
            }
            let up = self.width(n - 1);
            if up >= 2 && self.bit(TAG_CROSS, n - 1, i) {
                out.push(VertexId::new(n - 1, (i + 1) % up));
            }
        }
        if w >= 2 {
            let below = self.width(n + 1);
            let mut j = (i + w - 1) % w;
            while j < below {
                if self.bit(TAG_CROSS, n, j) {
                    out.push(VertexId::new(n + 1, j));
                }
                j += w;
            }
        }
        out
    }

    fn candidate_degree(&self, v: &VertexId) -> usize {
        let (n, i) = (v.first(), v.second());
        self.mandatory(n, i).len() + self.optional(n, i).len()
    }
}

impl Family for RandomBounded {
    fn descriptor(&self) -> String {
        format!("random:{}:{}", self.seed, self.maxdeg)
    }

    fn origin(&self) -> VertexId {
        VertexId::new(0, 0)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.maxdeg as usize)
    }

    fn contains(&self, v: &VertexId) -> bool {
        let (n, i) = (v.first(), v.second());
        n >= 0 && i >= 0 && n < i64::MAX / 2 && i < self.width(n)
    }

    fn neighbors_unchecked(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let (n, i) = (v.first(), v.second());
        let bound = self.maxdeg as usize;
        let mut out = self.mandatory(n, i);
        if self.candidate_degree(v) <= bound {
            out.extend(
                self.optional(n, i)
                    .into_iter()
                    .filter(|u| self.candidate_degree(u) <= bound),
            );
        }
        out.sort();
        Ok(out)
    }

    fn format_vertex(&self, v: &VertexId) -> String {
        format!("{}:{}", v.first(), v.second())
    }

    fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        let (n, i) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid_vertex(s, "expected `layer:index`"))?;
        Ok(VertexId::new(parse_int(n)?, parse_int(i)?))
    }

    fn has_escaping_ray(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_word_round_trip() {
        let t = Tree::new(3).unwrap();
        for enc in ["r", "r.0", "r.2", "r.2.1", "r.1.0.1.1"] {
            let v = t.parse_vertex(enc).unwrap();
            assert_eq!(t.format_vertex(&v), enc);
        }
        assert!(t.parse_vertex("r.3").is_err());
        assert!(t.parse_vertex("r.0.2").is_err());
    }

    #[test]
    fn tree_parent_child_consistent() {
        let t = Tree::new(4).unwrap();
        let v = t.parse_vertex("r.3.2.0").unwrap();
        let nb = t.neighbors_unchecked(&v).unwrap();
        assert_eq!(t.format_vertex(&nb[0]), "r.3.2");
        assert_eq!(t.format_vertex(&nb[1]), "r.3.2.0.0");
        assert_eq!(nb.len(), 4);
    }

    #[test]
    fn binary_tree_is_a_line() {
        let t = Tree::new(2).unwrap();
        assert_eq!(t.neighbors_unchecked(&t.origin()).unwrap().len(), 2);
        let v = t.parse_vertex("r.1.0.0").unwrap();
        assert_eq!(t.neighbors_unchecked(&v).unwrap().len(), 2);
    }

    #[test]
    fn random_widths_bounded() {
        let r = RandomBounded::new(7, 4).unwrap();
        assert_eq!(r.width(0), 1);
        for n in 1..200 {
            let (prev, w) = (r.width(n - 1), r.width(n));
            assert!(w >= 1 && w <= WIDTH_CAP && w <= prev * 3, "layer {n}");
        }
    }

    #[test]
    fn random_with_degree_two_is_a_ray() {
        let r = RandomBounded::new(11, 2).unwrap();
        for n in 0..50 {
            assert_eq!(r.width(n), 1);
        }
        let nb = r.neighbors_unchecked(&VertexId::new(3, 0)).unwrap();
        assert_eq!(nb, vec![VertexId::new(2, 0), VertexId::new(4, 0)]);
    }
}
