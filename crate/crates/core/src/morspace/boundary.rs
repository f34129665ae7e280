//! Spans of boundary functions of connected bi-labeled graphs on a finite
//! target, closed under planar gluing operations.
//!
//! An element of `Mor(n,m)` is stored as a function of its `n + m`
//! boundary labels read around the outer face:
//! `(i_0, .., i_n = j_m, j_{m-1}, .., j_1)`. Size zero is represented as
//! size one (`x = y = (v)`).

use crate::bilabeled::{generate_planar_closure, BiLabeledGraph};
use crate::error::{Error, Result};
use crate::graphs::{classical_aut, tuple_orbits, FiniteGraph, DEFAULT_AUT_LIMIT};
use crate::hommat::{decode, encode, hom_tensor};
use crate::linalg::Echelon;
use crate::scalar::Fp;
use num_integer::Integer;
use serde::Serialize;
use std::sync::Arc;

/// Which graph category spans the morphism spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Planar,
    All,
}

impl std::str::FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planar" => Ok(Category::Planar),
            "all" => Ok(Category::All),
            _ => Err(Error::input("category", format!("expected planar or all, got `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClosureConfig {
    /// Largest boundary size kept during the search.
    pub max_size: usize,
    pub max_rounds: usize,
    /// Cap on the total number of stored basis vectors.
    pub max_basis: usize,
    /// Store values per classical orbit of tuples instead of per tuple.
    pub compress: bool,
    /// Seed with all connected graphs up to this many vertices (category all).
    pub seed_vertices: usize,
    /// Elements up to this size act on everything; larger ones only meet
    /// elements up to this size.
    pub generator_size: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { max_size: 4, max_rounds: 12, max_basis: 20_000, compress: true, seed_vertices: 5, generator_size: 3 }
    }
}

/// Basis of the span at one boundary size.
#[derive(Clone, Debug)]
pub struct SizeSpace {
    pub size: usize,
    /// Orbit id of every tuple code.
    pub orbit_of: Arc<Vec<u32>>,
    /// Representative tuple per orbit.
    pub reps: Vec<Vec<usize>>,
    /// Integer basis vectors indexed by orbit.
    pub basis: Vec<Vec<i128>>,
    ech: Echelon<Fp>,
}

impl SizeSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn value(&self, v: &[i128], tuple: &[usize], n: usize) -> i128 {
        v[self.orbit_of[encode(tuple, n)] as usize]
    }

    /// Full function on `I^size` for a stored vector.
    pub fn expand(&self, v: &[i128]) -> Vec<i128> {
        self.orbit_of.iter().map(|&o| v[o as usize]).collect()
    }
}

/// Closure of boundary functions for one finite target and category.
#[derive(Clone, Debug)]
pub struct BoundaryClosure {
    pub n: usize,
    pub category: Category,
    pub spaces: Vec<SizeSpace>,
    pub rounds: usize,
    /// True when the last round added nothing.
    pub stable: bool,
    /// Candidates dropped because an entry overflowed.
    pub overflow_skips: usize,
    /// True when `max_basis` stopped the search.
    pub truncated: bool,
}

fn normalise(mut v: Vec<i128>) -> Option<Vec<i128>> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 { -1 } else { 1 };
    for x in v.iter_mut() {
        *x = *x / g * sign;
    }
    Some(v)
}

fn to_fp(v: &[i128]) -> Vec<Fp> {
    const P: i128 = (1i128 << 61) - 1;
    v.iter().map(|&x| Fp::new(x.rem_euclid(P) as u64)).collect()
}

impl BoundaryClosure {
    pub fn space(&self, size: usize) -> &SizeSpace {
        &self.spaces[size.max(1)]
    }

    pub fn rank(&self, size: usize) -> usize {
        self.space(size).rank()
    }

    /// Rank of `Mor(n, m)`.
    pub fn mor_rank(&self, n: usize, m: usize) -> usize {
        self.rank(n + m)
    }

    fn empty(g: &FiniteGraph, category: Category, cfg: &ClosureConfig) -> Result<Self> {
        let n = g.vertex_count();
        let gens = if cfg.compress { classical_aut(g, DEFAULT_AUT_LIMIT)?.generators } else { Vec::new() };
        let mut spaces = Vec::new();
        for size in 0..=cfg.max_size {
            let size_eff = size.max(1);
            let labels = if size == 0 { vec![0] } else { tuple_orbits(n, size_eff, &gens) };
            let k = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut reps = vec![Vec::new(); k];
            let mut seen = vec![false; k];
            for (c, &l) in labels.iter().enumerate() {
                if !seen[l] {
                    seen[l] = true;
                    reps[l] = decode(c, n, size_eff);
                }
            }
            let orbit_of = Arc::new(labels.iter().map(|&l| l as u32).collect());
            spaces.push(SizeSpace { size, orbit_of, reps, basis: Vec::new(), ech: Echelon::new(k) });
        }
        Ok(BoundaryClosure { n, category, spaces, rounds: 0, stable: false, overflow_skips: 0, truncated: false })
    }

    /// Adds a candidate; returns true if the rank at its size grew.
    fn offer(&mut self, size: usize, v: Option<Vec<i128>>) -> bool {
        let Some(v) = v else {
            self.overflow_skips += 1;
            return false;
        };
        let Some(v) = normalise(v) else { return false };
        let sp = &mut self.spaces[size];
        if sp.ech.insert(to_fp(&v)) {
            sp.basis.push(v);
            true
        } else {
            false
        }
    }

    /// Builds a vector at `size` from a tuple function; `None` on overflow.
    fn build(&self, size: usize, f: impl Fn(&[usize]) -> Option<i128>) -> Option<Vec<i128>> {
        self.spaces[size].reps.iter().map(|t| f(t)).collect()
    }

    fn eval(&self, size: usize, v: &[i128], t: &[usize]) -> i128 {
        self.spaces[size].value(v, t, self.n)
    }

    pub fn generate(g: &FiniteGraph, category: Category, cfg: &ClosureConfig) -> Result<Self> {
        if g.vertex_count() == 0 {
            return Err(Error::input("graph", "empty graph"));
        }
        let mut c = Self::empty(g, category, cfg)?;
        let n = c.n;
        // seeds: single vertex, edge, and small gadgets
        let mut seeds: Vec<(usize, Vec<i128>)> = vec![(1, vec![1; c.spaces[1].reps.len()])];
        if cfg.max_size >= 2 {
            let adj = c.build(2, |t| Some(g.has_edge(t[0], t[1]) as i128)).unwrap();
            seeds.push((2, adj));
        }
        for k in seed_graphs(category, cfg) {
            let labels = boundary_labels(&k);
            let size = labels.len();
            if size == 0 || size > cfg.max_size {
                continue;
            }
            let full = hom_tensor(&k, g, &labels);
            let v = c.build(size, |t| Some(full[encode(t, n)])).unwrap();
            seeds.push((size, v));
        }
        let mut frontier: Vec<(usize, usize)> = Vec::new();
        for (size, v) in seeds {
            if c.offer(size, Some(v)) {
                frontier.push((size, c.spaces[size].basis.len() - 1));
            }
        }
        while c.rounds < cfg.max_rounds && !frontier.is_empty() {
            c.rounds += 1;
            let mut next = Vec::new();
            for &(size, idx) in &frontier {
                let f = c.spaces[size].basis[idx].clone();
                let cands = c.derive(size, &f, cfg.max_size, cfg.generator_size);
                for (s, v) in cands {
                    if c.offer(s, v) {
                        next.push((s, c.spaces[s].basis.len() - 1));
                    }
                }
                if c.total_basis() >= cfg.max_basis {
                    c.truncated = true;
                    break;
                }
            }
            if c.truncated {
                break;
            }
            frontier = next;
        }
        c.stable = frontier.is_empty() && !c.truncated;
        Ok(c)
    }

    pub fn total_basis(&self) -> usize {
        self.spaces.iter().map(|s| s.basis.len()).sum()
    }

    /// All candidates obtained from `f` by one operation, including binary
    /// operations against every stored vector.
    fn derive(&self, b: usize, f: &[i128], max: usize, gen: usize) -> Vec<(usize, Option<Vec<i128>>)> {
        let n = self.n;
        let mut out = Vec::new();
        let ev = |t: &[usize]| self.eval(b, f, t);
        if b >= 2 {
            out.push((b, self.build(b, |t| {
                let mut r: Vec<usize> = t[1..].to_vec();
                r.push(t[0]);
                Some(ev(&r))
            })));
            out.push((b - 1, self.build(b - 1, |t| {
                let mut s: i128 = 0;
                let mut u = Vec::with_capacity(b);
                for v in 0..n {
                    u.clear();
                    u.push(v);
                    u.extend_from_slice(t);
                    s = s.checked_add(ev(&u))?;
                }
                Some(s)
            })));
            out.push((b - 1, self.build(b - 1, |t| {
                let mut u = vec![t[0]];
                u.extend_from_slice(t);
                Some(ev(&u))
            })));
        }
        if b >= 3 {
            out.push((b, self.build(b, |t| {
                let mut r = vec![t[0]];
                r.extend(t[1..].iter().rev());
                Some(ev(&r))
            })));
        }
        if b < max {
            out.push((b + 1, self.build(b + 1, |t| if t[0] == t[1] { Some(ev(&t[1..])) } else { Some(0) })));
        }
        if self.category == Category::All && b >= 2 {
            out.push((b, self.build(b, |t| {
                let mut r = t.to_vec();
                r.swap(0, 1);
                Some(ev(&r))
            })));
        }
        // products with size-2 elements on the first two points
        if b >= 2 {
            for h in &self.spaces[2].basis {
                out.push((b, self.build(b, |t| ev(t).checked_mul(self.eval(2, h, &t[..2])))));
            }
        }
        if self.category == Category::All && b >= 3 && b <= gen + 1 {
            for h in &self.spaces[b].basis {
                out.push((b, self.build(b, |t| ev(t).checked_mul(self.eval(b, h, t)))));
            }
        }
        // gluing along arcs, in both orders
        let partners = if b <= gen { self.spaces.len() - 1 } else { gen.min(self.spaces.len() - 1) };
        for b2 in 1..=partners {
            for g in &self.spaces[b2].basis {
                if b + b2 - 1 <= max {
                    out.push((b + b2 - 1, self.concat(b, f, b2, g)));
                    out.push((b + b2 - 1, self.concat(b2, g, b, f)));
                }
                for k in 1..b.min(b2) {
                    let s = b + b2 - 2 * k;
                    if s >= 1 && s <= max {
                        out.push((s, self.glue(k, b, f, b2, g)));
                        out.push((s, self.glue(k, b2, g, b, f)));
                    }
                }
            }
        }
        out
    }

    fn concat(&self, b: usize, f: &[i128], b2: usize, g: &[i128]) -> Option<Vec<i128>> {
        self.build(b + b2 - 1, |t| {
            let mut u = vec![t[0]];
            u.extend_from_slice(&t[b..]);
            self.eval(b, f, &t[..b]).checked_mul(self.eval(b2, g, &u))
        })
    }

    /// Identifies `f_0..f_k` with `g_k..g_0` and sums the interior points.
    /// The result reads `f_k..f_{b-1}, f_0, g_{k+1}..g_{b2-1}`.
    fn glue(&self, k: usize, b: usize, f: &[i128], b2: usize, g: &[i128]) -> Option<Vec<i128>> {
        let n = self.n;
        let interior = k - 1;
        let total = n.pow(interior as u32);
        self.build(b + b2 - 2 * k, |t| {
            // t = (f_k .. f_{b-1}, f_0, g_{k+1} .. g_{b2-1})
            let fk = t[0];
            let f0 = t[b - k];
            let mut fu = vec![0usize; b];
            let mut gu = vec![0usize; b2];
            fu[0] = f0;
            fu[k] = fk;
            fu[k + 1..b].copy_from_slice(&t[1..b - k]);
            gu[0] = fk;
            gu[k] = f0;
            gu[k + 1..b2].copy_from_slice(&t[b - k + 1..]);
            let mut s: i128 = 0;
            let mut mid = vec![0usize; interior];
            for c in 0..total {
                if c > 0 {
                    let mut q = interior - 1;
                    loop {
                        mid[q] += 1;
                        if mid[q] < n {
                            break;
                        }
                        mid[q] = 0;
                        q -= 1;
                    }
                }
                for (q, &v) in mid.iter().enumerate() {
                    fu[1 + q] = v;
                    gu[k - 1 - q] = v;
                }
                let a = self.eval(b, f, &fu);
                if a == 0 {
                    continue;
                }
                s = s.checked_add(a.checked_mul(self.eval(b2, g, &gu))?)?;
            }
            Some(s)
        })
    }
}

/// Boundary label sequence of a graph in the connected bimodular class,
/// `x_0 .. x_n, y_{m-1} .. y_1`; for `n = m = 0` just `x_0`.
pub fn boundary_labels(k: &BiLabeledGraph) -> Vec<usize> {
    let (n1, m1) = (k.n(), k.m());
    if n1 == 0 || m1 == 0 {
        return Vec::new();
    }
    if n1 + m1 == 2 {
        return vec![k.x[0]];
    }
    if m1 == 1 {
        return k.x[..n1 - 1].to_vec();
    }
    let mut out: Vec<usize> = k.x[..n1 - 1].to_vec();
    out.push(k.x[n1 - 1]);
    out.extend(k.y[1..m1 - 1].iter().rev());
    out
}

fn seed_graphs(category: Category, cfg: &ClosureConfig) -> Vec<BiLabeledGraph> {
    match category {
        Category::Planar => generate_planar_closure(4, 3, 4000)
            .items
            .into_iter()
            .filter(|k| k.classify().in_l && boundary_labels(k).len() <= cfg.max_size)
            .collect(),
        Category::All => {
            let mut out = Vec::new();
            for v in 1..=cfg.seed_vertices {
                let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
                for mask in 0u32..(1 << pairs.len()) {
                    let edges: Vec<(usize, usize)> =
                        pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                    let g = FiniteGraph::from_edges(v, &edges).unwrap();
                    if !g.is_connected() {
                        continue;
                    }
                    out.push(BiLabeledGraph { graph: g.clone(), x: vec![0], y: vec![0] });
                    if v >= 2 && cfg.max_size >= 2 {
                        out.push(BiLabeledGraph { graph: g, x: vec![0, 1], y: vec![0, 1] });
                    }
                }
            }
            out
        }
    }
}
