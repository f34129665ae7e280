//! Quantization of a group with generating family `S`: supports of the
//! relation vectors, the fiber matrices `R^K` of path-labeled planar graphs
//! on the Cayley graph, their span ranks, and the noncrossing even
//! partition count used as the reference for free products of `Z/2`.

use crate::bilabeled::BiLabeledGraph;
use crate::error::{Error, Result};
use crate::graphs::{FiniteGraph, GroupSpec, Word};
use crate::hommat::{decode, encode};
use crate::linalg::Echelon;
use crate::Rational;
use serde::Serialize;
use std::collections::HashMap;

/// Enumeration budget for tuples of generators.
pub const DEFAULT_TUPLE_BUDGET: usize = 1 << 22;

/// Tuples of letters whose product is the identity.
#[derive(Clone, Debug, Serialize)]
pub struct RelationSupport {
    pub n: usize,
    /// `+1` or `-1` per position; all `+1` for the symmetric version.
    pub signs: Vec<i8>,
    /// Per position, the names of the letters indexed by the tuples.
    pub letters: Vec<Vec<String>>,
    /// Index tuples into the generator list.
    pub support: Vec<Vec<usize>>,
}

fn check_budget(s: usize, n: usize, budget: usize) -> Result<usize> {
    s.checked_pow(n as u32).filter(|&c| c <= budget).ok_or_else(|| Error::budget("generator tuples", budget))
}

fn support_of(g: &GroupSpec, letters: &[Word], n: usize, budget: usize) -> Result<Vec<Vec<usize>>> {
    let s = letters.len();
    let total = check_budget(s, n, budget)?;
    let e = g.key(&g.identity());
    let mut out = Vec::new();
    for c in 0..total {
        let t = decode(c, s, n);
        let w = t.iter().fold(g.identity(), |acc, &i| g.mul(&acc, &letters[i]));
        if g.key(&w) == e {
            out.push(t);
        }
    }
    Ok(out)
}

/// `xi_n` for `n = 1..=n_max` on a symmetric generating set.
pub fn relation_vectors(g: &GroupSpec, n_max: usize) -> Result<Vec<RelationSupport>> {
    if !g.is_symmetric() {
        return Err(Error::input("group", "relation vectors need a symmetric generating set"));
    }
    let letters = g.generators().to_vec();
    let names = g.generator_names();
    (1..=n_max)
        .map(|n| {
            Ok(RelationSupport {
                n,
                signs: vec![1; n],
                letters: vec![names.clone(); n],
                support: support_of(g, &letters, n, DEFAULT_TUPLE_BUDGET)?,
            })
        })
        .collect()
}

/// `xi_{n, eps}` for every sign pattern, `n = 1..=n_max`. Position `k`
/// ranges over `F` or over the inverses of `F` by the sign.
pub fn signed_relation_vectors(g: &GroupSpec, n_max: usize) -> Result<Vec<RelationSupport>> {
    let f = g.generators().to_vec();
    let finv: Vec<Word> = f.iter().map(|w| g.inv(w)).collect();
    let names = g.generator_names();
    let inv_names: Vec<String> = names.iter().map(|s| format!("{s}^-1")).collect();
    let mut out = Vec::new();
    for n in 1..=n_max {
        for pattern in 0..1usize << n {
            let signs: Vec<i8> = (0..n).map(|k| if pattern >> k & 1 == 1 { -1 } else { 1 }).collect();
            let total = check_budget(f.len(), n, DEFAULT_TUPLE_BUDGET)?;
            let e = g.key(&g.identity());
            let mut support = Vec::new();
            for c in 0..total {
                let t = decode(c, f.len(), n);
                let w = t
                    .iter()
                    .zip(&signs)
                    .fold(g.identity(), |acc, (&i, &s)| g.mul(&acc, if s > 0 { &f[i] } else { &finv[i] }));
                if g.key(&w) == e {
                    support.push(t);
                }
            }
            let letters = signs.iter().map(|&s| if s > 0 { names.clone() } else { inv_names.clone() }).collect();
            out.push(RelationSupport { n, signs, letters, support });
        }
    }
    Ok(out)
}

/// The indicator of a set of letter triples.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleVector {
    pub letters: usize,
    /// Dense 0/1 vector on `F^3`, first coordinate most significant.
    pub values: Vec<u8>,
    pub support: usize,
    /// `marginals[c][f]`: triples with letter `f` at coordinate `c`.
    pub marginals: [Vec<usize>; 3],
}

pub fn triangle_xi(triples: &[(usize, usize, usize)], letters: usize) -> Result<TriangleVector> {
    let mut values = vec![0u8; letters.pow(3)];
    let mut marginals = [vec![0; letters], vec![0; letters], vec![0; letters]];
    for &(s, t, r) in triples {
        if s >= letters || t >= letters || r >= letters {
            return Err(Error::input("triples", format!("letter out of range in ({s},{t},{r})")));
        }
        let idx = encode(&[s, t, r], letters);
        if values[idx] == 0 {
            values[idx] = 1;
            marginals[0][s] += 1;
            marginals[1][t] += 1;
            marginals[2][r] += 1;
        }
    }
    let support = values.iter().filter(|&&v| v == 1).count();
    Ok(TriangleVector { letters, values, support, marginals })
}

/// Ball in the Cayley graph around the identity with generator steps.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub radius: usize,
    pub graph: FiniteGraph,
    /// `step[v][k]`: the vertex `v s_k`.
    pub step: Vec<Vec<usize>>,
    pub keys: Vec<String>,
}

impl CayleyBall {
    pub fn new(g: &GroupSpec, radius: usize, budget: usize) -> Result<Self> {
        if !g.is_symmetric() {
            return Err(Error::input("group", "Cayley graph needs a symmetric generating set"));
        }
        let gens = g.generators();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut words = vec![g.identity()];
        let mut keys = vec![g.key(&words[0])];
        let mut depth = vec![0usize];
        index.insert(keys[0].clone(), 0);
        let mut step: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < words.len() {
            let w = words[head].clone();
            let mut row = Vec::with_capacity(gens.len());
            for s in gens {
                let w2 = g.mul(&w, s);
                let k = g.key(&w2);
                let id = match index.get(&k) {
                    Some(&id) => id,
                    None if depth[head] < radius => {
                        if words.len() >= budget {
                            return Err(Error::budget("cayley ball vertices", budget));
                        }
                        index.insert(k.clone(), words.len());
                        words.push(w2);
                        keys.push(k);
                        depth.push(depth[head] + 1);
                        words.len() - 1
                    }
                    None => usize::MAX,
                };
                row.push(id);
            }
            step.push(row);
            head += 1;
        }
        let mut graph = FiniteGraph::new(words.len());
        for (v, row) in step.iter().enumerate() {
            for &u in row {
                if u != usize::MAX && u != v {
                    graph.add_edge(v, u)?;
                }
            }
        }
        Ok(CayleyBall { radius, graph, step, keys })
    }

    /// Vertices of the walk `e, s_1, s_1 s_2, ...`.
    pub fn walk(&self, s: &[usize]) -> Option<Vec<usize>> {
        let mut out = vec![0];
        for &k in s {
            let v = self.step[*out.last().unwrap()][k];
            if v == usize::MAX {
                return None;
            }
            out.push(v);
        }
        Some(out)
    }
}

/// `R^K` on `S^n x S^m`, dense row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberMatrix {
    pub n: usize,
    pub m: usize,
    pub letters: usize,
    pub data: Vec<i128>,
}

impl FiberMatrix {
    pub fn rows(&self) -> usize {
        self.letters.pow(self.n as u32)
    }

    pub fn cols(&self) -> usize {
        self.letters.pow(self.m as u32)
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols() + c]
    }

    pub fn mul(&self, o: &FiberMatrix) -> Result<FiberMatrix> {
        if self.m != o.n || self.letters != o.letters {
            return Err(Error::input("fiber matrix", "arity mismatch in product"));
        }
        let (r, k, c) = (self.rows(), self.cols(), o.cols());
        let mut data = vec![0i128; r * c];
        for a in 0..r {
            for b in 0..k {
                let x = self.get(a, b);
                if x != 0 {
                    for d in 0..c {
                        data[a * c + d] += x * o.get(b, d);
                    }
                }
            }
        }
        Ok(FiberMatrix { n: self.n, m: o.m, letters: self.letters, data })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows() {
            let row: Vec<String> = (0..self.cols()).map(|c| self.get(r, c).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Checks the shape of a path-labeled graph in `L(n, m)`: connected, shared
/// first and last labels, labels forming walks.
pub fn check_path_labeled(k: &BiLabeledGraph) -> Result<(usize, usize)> {
    if k.x.is_empty() || k.y.is_empty() {
        return Err(Error::input("blg", "path-labeled graphs need at least one label on each side"));
    }
    let (n, m) = (k.x.len() - 1, k.y.len() - 1);
    if k.x[0] != k.y[0] || k.x[n] != k.y[m] {
        return Err(Error::input("blg", "first and last labels must be shared"));
    }
    if !k.labels_are_paths() {
        return Err(Error::input("blg", "labels must be walks in the graph"));
    }
    if !k.graph.is_connected() {
        return Err(Error::input("blg", "graph must be connected"));
    }
    Ok((n, m))
}

/// Eccentricity of the first label: how far any image can reach.
fn eccentricity(k: &BiLabeledGraph) -> usize {
    k.graph.distances_from(k.x[0]).into_iter().flatten().max().unwrap_or(0)
}

/// Ball radius large enough for every graph in `ks`.
pub fn required_radius(ks: &[BiLabeledGraph]) -> usize {
    ks.iter().map(eccentricity).max().unwrap_or(0)
}

/// `R^K_{st} = T^K_{ij}` with `i`, `j` the walks of `s`, `t` from the
/// identity, by enumerating homomorphisms with the first label at the
/// identity.
pub fn fiber_matrix(k: &BiLabeledGraph, ball: &CayleyBall) -> Result<FiberMatrix> {
    let (n, m) = check_path_labeled(k)?;
    if eccentricity(k) > ball.radius {
        return Err(Error::Guard(format!("graph reaches {} but the ball has radius {}", eccentricity(k), ball.radius)));
    }
    let letters = ball.step.first().map_or(0, |r| r.len());
    let mut counts: HashMap<(Vec<usize>, Vec<usize>), i128> = HashMap::new();
    enumerate_homs(&k.graph, k.x[0], &ball.graph, |img| {
        let i: Vec<usize> = k.x.iter().map(|&v| img[v]).collect();
        let j: Vec<usize> = k.y.iter().map(|&v| img[v]).collect();
        *counts.entry((i, j)).or_default() += 1;
    });
    let mut out = FiberMatrix { n, m, letters, data: vec![0; letters.pow(n as u32) * letters.pow(m as u32)] };
    let rows: Vec<Option<Vec<usize>>> = (0..out.rows()).map(|r| ball.walk(&decode(r, letters, n))).collect();
    let cols: Vec<Option<Vec<usize>>> = (0..out.cols()).map(|c| ball.walk(&decode(c, letters, m))).collect();
    let nc = out.cols();
    for (r, i) in rows.iter().enumerate() {
        for (c, j) in cols.iter().enumerate() {
            if let (Some(i), Some(j)) = (i, j) {
                if let Some(&v) = counts.get(&(i.clone(), j.clone())) {
                    out.data[r * nc + c] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Calls `visit` with every homomorphism `k -> g` sending `root` to vertex 0.
fn enumerate_homs(k: &FiniteGraph, root: usize, g: &FiniteGraph, mut visit: impl FnMut(&[usize])) {
    let kn = k.vertex_count();
    let dist = k.distances_from(root);
    let mut order: Vec<usize> = (0..kn).collect();
    order.sort_by_key(|&v| dist[v].unwrap_or(usize::MAX));
    let mut pos = vec![0; kn];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let back: Vec<Vec<usize>> = order.iter().map(|&v| k.neighbors(v).iter().copied().filter(|&u| pos[u] < pos[v]).collect()).collect();
    // A loop in `k` needs a loop at its image.
    let loops: Vec<bool> = (0..kn).map(|v| k.has_edge(v, v)).collect();
    let mut img = vec![usize::MAX; kn];
    img[root] = 0;
    if k.has_edge(root, root) && !g.has_edge(0, 0) {
        return;
    }
    fn rec(
        p: usize,
        order: &[usize],
        back: &[Vec<usize>],
        loops: &[bool],
        img: &mut Vec<usize>,
        g: &FiniteGraph,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if p == order.len() {
            visit(img);
            return;
        }
        let v = order[p];
        let anchor = back[p][0];
        for &c in g.neighbors(img[anchor]) {
            if back[p].iter().all(|&u| g.has_edge(img[u], c)) && (!loops[v] || g.has_edge(c, c)) {
                img[v] = c;
                rec(p + 1, order, back, loops, img, g, visit);
            }
        }
        img[v] = usize::MAX;
    }
    rec(1, &order, &back, &loops, &mut img, g, &mut visit);
}

/// Noncrossing partitions of `0..n` in restricted growth form.
pub fn noncrossing_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, maxb: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            if is_noncrossing(a) {
                out.push(a.clone());
            }
            return;
        }
        for b in 0..=maxb + 1 {
            a[i] = b;
            rec(i + 1, maxb.max(b), a, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(1, 0, &mut a, &mut out);
    out
}

fn is_noncrossing(a: &[usize]) -> bool {
    let n = a.len();
    for p in 0..n {
        for q in p + 1..n {
            for r in q + 1..n {
                for s in r + 1..n {
                    if a[p] == a[r] && a[q] == a[s] && a[p] != a[q] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Noncrossing partitions of `k` points with every block of even size.
pub fn noncrossing_even_count(k: usize) -> Result<usize> {
    if k % 2 == 1 || k > 12 {
        return Err(Error::input("k", "point count must be even and at most 12"));
    }
    Ok(noncrossing_partitions(k)
        .into_iter()
        .filter(|a| {
            let mut sizes = vec![0usize; k];
            for &b in a {
                sizes[b] += 1;
            }
            sizes.iter().all(|s| s % 2 == 0)
        })
        .count())
}

/// Quotients of the boundary cycle of `L(n, m)` by noncrossing partitions of
/// its `n + m` corners. Partitions joining two neighbouring corners would
/// create loops and are skipped.
pub fn boundary_quotients(n: usize, m: usize) -> Vec<BiLabeledGraph> {
    let big = n + m;
    if big == 0 {
        return vec![BiLabeledGraph::single_vertex(1, 1)];
    }
    let mut out = Vec::new();
    for part in noncrossing_partitions(big) {
        let blocks = part.iter().max().map_or(0, |b| b + 1);
        let mut g = FiniteGraph::new(blocks);
        let mut ok = true;
        if big >= 2 {
            for a in 0..big {
                let (u, v) = (part[a], part[(a + 1) % big]);
                if u == v {
                    ok = false;
                    break;
                }
                g.add_edge(u, v).unwrap();
            }
        } else {
            ok = false;
        }
        if !ok {
            continue;
        }
        let x = (0..=n).map(|k| part[k % big]).collect();
        let y = (0..=m).map(|k| part[(big - k) % big]).collect();
        out.push(BiLabeledGraph { graph: g, x, y });
    }
    out
}

/// Generated path-labeled planar graphs of arity `(n, m)`: the boundary
/// quotients together with one round of compositions through middle
/// arities up to `middle`.
pub fn path_labeled_family(n: usize, m: usize, middle: usize) -> Vec<BiLabeledGraph> {
    let mut out = boundary_quotients(n, m);
    let mut keys: std::collections::HashSet<String> = out.iter().map(|k| k.canonical_key()).collect();
    for k in 0..=middle {
        for a in boundary_quotients(n, k) {
            for b in boundary_quotients(k, m) {
                if let Ok(c) = a.compose(&b) {
                    if keys.insert(c.canonical_key()) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub m: usize,
    pub generated: usize,
    pub rank: usize,
    pub radius: usize,
}

/// Exact rank of the span of `R^K` over the generated family.
pub fn fiber_span_rank(g: &GroupSpec, n: usize, m: usize, middle: usize, ball_budget: usize) -> Result<RankReport> {
    let s = g.generator_count();
    check_budget(s, n + m, DEFAULT_TUPLE_BUDGET)?;
    let fam = path_labeled_family(n, m, middle);
    let radius = required_radius(&fam);
    let ball = CayleyBall::new(g, radius, ball_budget)?;
    let len = s.pow((n + m) as u32);
    let mut ech: Echelon<Rational> = Echelon::new(len);
    for k in &fam {
        let r = fiber_matrix(k, &ball)?;
        ech.insert(r.data.iter().map(|&v| Rational::from_integer(v.into())).collect());
    }
    Ok(RankReport { n, m, generated: fam.len(), rank: ech.rank(), radius })
}
