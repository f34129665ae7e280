//! Bi-labeled graphs `(K, x, y)` and their calculus.

use crate::error::{Error, Result};
use crate::graphs::{FiniteGraph, UnionFind};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

/// A finite graph with an input tuple `x` and an output tuple `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiLabeledGraph {
    pub graph: FiniteGraph,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

/// Membership flags for the nested classes of bi-labeled graphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BlgClass {
    pub in_gc: bool,
    pub in_g1: bool,
    pub in_g2: bool,
    pub in_l: bool,
}

#[derive(Serialize, Deserialize)]
struct BlgJson {
    n: usize,
    m: usize,
    vertices: usize,
    edges: Vec<[usize; 2]>,
    x: Vec<usize>,
    y: Vec<usize>,
}

impl BiLabeledGraph {
    pub fn new(graph: FiniteGraph, x: Vec<usize>, y: Vec<usize>) -> Result<Self> {
        let n = graph.vertex_count();
        if let Some(&v) = x.iter().chain(&y).find(|&&v| v >= n) {
            return Err(Error::input("labels", format!("label {v} is not a vertex of a {n}-vertex graph")));
        }
        Ok(BiLabeledGraph { graph, x, y })
    }

    pub fn from_edges(vertices: usize, edges: &[(usize, usize)], x: &[usize], y: &[usize]) -> Result<Self> {
        Self::new(FiniteGraph::from_edges(vertices, edges)?, x.to_vec(), y.to_vec())
    }

    /// Number of input labels.
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Number of output labels.
    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Single vertex carrying every label.
    pub fn single_vertex(n: usize, m: usize) -> Self {
        BiLabeledGraph { graph: FiniteGraph::new(1), x: vec![0; n], y: vec![0; m] }
    }

    /// Identity `1^{⊗k}`: k isolated vertices with `x = y`.
    pub fn identity(k: usize) -> Self {
        BiLabeledGraph { graph: FiniteGraph::new(k), x: (0..k).collect(), y: (0..k).collect() }
    }

    /// The edge with `x = (0)`, `y = (1)`; its matrix is the adjacency matrix.
    pub fn adjacency() -> Self {
        Self::from_edges(2, &[(0, 1)], &[0], &[1]).unwrap()
    }

    fn disjoint(a: &FiniteGraph, b: &FiniteGraph) -> FiniteGraph {
        let off = a.vertex_count();
        let mut g = FiniteGraph::new(off + b.vertex_count());
        for (u, v) in a.edges() {
            g.add_edge(u, v).unwrap();
        }
        for (u, v) in b.edges() {
            g.add_edge(u + off, v + off).unwrap();
        }
        g
    }

    /// Quotient of `g` by the identifications in `uf`; returns the graph and
    /// the vertex map.
    fn quotient(g: &FiniteGraph, uf: &mut UnionFind) -> (FiniteGraph, Vec<usize>) {
        let map = uf.labels();
        let k = map.iter().copied().max().map_or(0, |m| m + 1);
        let mut q = FiniteGraph::new(k);
        for (u, v) in g.edges() {
            q.add_edge(map[u], map[v]).unwrap();
        }
        (q, map)
    }

    /// Composition: `self ∈ G(n,k)` on the left, `other ∈ G(k,m)` on the right,
    /// gluing `self.y[i]` to `other.x[i]`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.m() != other.n() {
            return Err(Error::input("compose", format!("arity mismatch: {} outputs vs {} inputs", self.m(), other.n())));
        }
        let off = self.vertex_count();
        let g = Self::disjoint(&self.graph, &other.graph);
        let mut uf = UnionFind::new(g.vertex_count());
        for (&a, &b) in self.y.iter().zip(&other.x) {
            uf.union(a, b + off);
        }
        let (q, map) = Self::quotient(&g, &mut uf);
        Ok(BiLabeledGraph { graph: q, x: self.x.iter().map(|&v| map[v]).collect(), y: other.y.iter().map(|&v| map[v + off]).collect() })
    }

    /// Tensor product: disjoint union with concatenated labels.
    pub fn tensor(&self, other: &Self) -> Self {
        let off = self.vertex_count();
        let g = Self::disjoint(&self.graph, &other.graph);
        let x = self.x.iter().copied().chain(other.x.iter().map(|v| v + off)).collect();
        let y = self.y.iter().copied().chain(other.y.iter().map(|v| v + off)).collect();
        BiLabeledGraph { graph: g, x, y }
    }

    pub fn transpose(&self) -> Self {
        BiLabeledGraph { graph: self.graph.clone(), x: self.y.clone(), y: self.x.clone() }
    }

    /// `(K, reverse(y), reverse(x))`, whose matrix is the index-reversed one.
    pub fn tilde(&self) -> Self {
        BiLabeledGraph {
            graph: self.graph.clone(),
            x: self.y.iter().rev().copied().collect(),
            y: self.x.iter().rev().copied().collect(),
        }
    }

    /// Relative tensor product in the connected, bimodular class: glue the
    /// last input/output vertex of `self` to the first one of `other`.
    pub fn relative_tensor(&self, other: &Self) -> Result<Self> {
        if !self.classify().in_l || !other.classify().in_l {
            return Err(Error::input("relative_tensor", "both factors must be connected with x0 = y0 and x_last = y_last"));
        }
        let off = self.vertex_count();
        let g = Self::disjoint(&self.graph, &other.graph);
        let mut uf = UnionFind::new(g.vertex_count());
        uf.union(*self.x.last().unwrap(), other.x[0] + off);
        let (q, map) = Self::quotient(&g, &mut uf);
        let x = self.x.iter().map(|&v| map[v]).chain(other.x[1..].iter().map(|&v| map[v + off])).collect();
        let y = self.y.iter().map(|&v| map[v]).chain(other.y[1..].iter().map(|&v| map[v + off])).collect();
        Ok(BiLabeledGraph { graph: q, x, y })
    }

    fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count());
        for (u, v) in self.graph.edges() {
            uf.union(u, v);
        }
        uf.labels()
    }

    pub fn classify(&self) -> BlgClass {
        let comp = self.components();
        let k = comp.iter().copied().max().map_or(0, |m| m + 1);
        let (n, m) = (self.n(), self.m());
        let hit = |labels: &[usize]| {
            let mut s = vec![false; k];
            for &v in labels {
                s[comp[v]] = true;
            }
            s
        };
        let (hx, hy) = (hit(&self.x), hit(&self.y));
        let in_gc = n >= 1 && m >= 1 && k == 1;
        let in_g1 = n >= 1 && m >= 1 && (0..k).all(|c| hx[c] && hy[c]);
        let in_g2 = n + m >= 1 && (0..k).all(|c| hx[c] || hy[c]);
        let in_l = in_gc && self.x[0] == self.y[0] && self.x[n - 1] == self.y[m - 1];
        BlgClass { in_gc, in_g1, in_g2, in_l }
    }

    /// Whether consecutive labels of both tuples are adjacent in `K`.
    pub fn labels_are_paths(&self) -> bool {
        let ok = |t: &[usize]| t.windows(2).all(|w| self.graph.has_edge(w[0], w[1]));
        ok(&self.x) && ok(&self.y)
    }

    /// Largest distance in `K` from a label to any vertex; `None` if some
    /// component carries no label.
    pub fn label_radius(&self) -> Option<usize> {
        let mut best = vec![usize::MAX; self.vertex_count()];
        for &s in self.x.iter().chain(&self.y) {
            for (v, d) in self.graph.distances_from(s).into_iter().enumerate() {
                if let Some(d) = d {
                    best[v] = best[v].min(d);
                }
            }
        }
        let m = best.iter().copied().max().unwrap_or(0);
        (m != usize::MAX).then_some(m)
    }

    /// Canonical string, invariant under renaming of vertices.
    pub fn canonical_key(&self) -> String {
        let nv = self.vertex_count();
        let mut order: Vec<usize> = Vec::new();
        let mut placed = vec![false; nv];
        for &v in self.x.iter().chain(&self.y) {
            if !placed[v] {
                placed[v] = true;
                order.push(v);
            }
        }
        let rest: Vec<usize> = (0..nv).filter(|&v| !placed[v]).collect();
        let labeled_pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // group unlabeled vertices by a refinement signature
        let mut sig: Vec<(Vec<usize>, usize)> = rest
            .iter()
            .map(|&v| {
                let mut s = vec![self.graph.has_edge(v, v) as usize, self.graph.degree(v)];
                let mut ln: Vec<usize> = self.graph.neighbors(v).iter().filter_map(|w| labeled_pos.get(w).copied()).collect();
                ln.sort_unstable();
                s.push(ln.len());
                s.extend(ln);
                let mut nd: Vec<usize> = self.graph.neighbors(v).iter().map(|&w| self.graph.degree(w)).collect();
                nd.sort_unstable();
                s.push(usize::MAX);
                s.extend(nd);
                (s, v)
            })
            .collect();
        sig.sort();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, (s, v)) in sig.iter().enumerate() {
            if i > 0 && sig[i - 1].0 == *s {
                classes.last_mut().unwrap().push(*v);
            } else {
                classes.push(vec![*v]);
            }
        }
        let mut best: Option<Vec<(usize, usize)>> = None;
        let mut current = order.clone();
        Self::search_orders(&self.graph, &classes, 0, &mut current, &mut best);
        let edges = best.unwrap_or_default();
        let final_order = order;
        let pos: BTreeMap<usize, usize> = final_order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let fmt = |t: &[usize]| t.iter().map(|v| pos[v].to_string()).collect::<Vec<_>>().join(",");
        let e = edges.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(",");
        format!("{};{};{};[{}];[{}];[{}]", self.n(), self.m(), nv, e, fmt(&self.x), fmt(&self.y))
    }

    fn edge_list(g: &FiniteGraph, order: &[usize]) -> Vec<(usize, usize)> {
        let mut pos = vec![0; g.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut e: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let (a, b) = (pos[u], pos[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        e
    }

    fn search_orders(
        g: &FiniteGraph,
        classes: &[Vec<usize>],
        c: usize,
        current: &mut Vec<usize>,
        best: &mut Option<Vec<(usize, usize)>>,
    ) {
        if c == classes.len() {
            let e = Self::edge_list(g, current);
            if best.as_ref().is_none_or(|b| e < *b) {
                *best = Some(e);
            }
            return;
        }
        let mut perm = classes[c].clone();
        permute(&mut perm, 0, &mut |p| {
            let len = current.len();
            current.extend_from_slice(p);
            Self::search_orders(g, classes, c + 1, current, best);
            current.truncate(len);
        });
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BlgJson {
            n: self.n(),
            m: self.m(),
            vertices: self.vertex_count(),
            edges: self.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            x: self.x.clone(),
            y: self.y.clone(),
        })
        .unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: BlgJson = serde_json::from_value(v.clone()).map_err(|e| Error::input("bilabeled", e.to_string()))?;
        if j.x.len() != j.n || j.y.len() != j.m {
            return Err(Error::input("bilabeled", "label tuple lengths disagree with n, m"));
        }
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(j.vertices, &edges, &j.x, &j.y)
    }
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Path graph of length `sum(d)` labelled at the partial sums, `x = y`.
pub fn path_distance_gadget(d: &[usize]) -> BiLabeledGraph {
    let total: usize = d.iter().sum();
    let g = FiniteGraph::path(total + 1);
    let mut x = vec![0];
    let mut acc = 0;
    for &s in d {
        acc += s;
        x.push(acc);
    }
    BiLabeledGraph { graph: g, y: x.clone(), x }
}

/// Interval graph on k vertices with `x = y = (0, ..., k-1)`.
pub fn interval_gadget(k: usize) -> BiLabeledGraph {
    BiLabeledGraph { graph: FiniteGraph::path(k), x: (0..k).collect(), y: (0..k).collect() }
}

/// Nested cups: n isolated vertices with `x = (0, .., n-1, n-1, .., 0)`.
pub fn cup_gadget(n: usize) -> BiLabeledGraph {
    let x = (0..n).chain((0..n).rev()).collect();
    BiLabeledGraph { graph: FiniteGraph::new(n), x, y: Vec::new() }
}

/// Nested cups around a free middle vertex, with output on the outer vertex.
pub fn folded_cup_gadget(n: usize) -> BiLabeledGraph {
    let mut x: Vec<usize> = (0..n).collect();
    x.push(n);
    x.extend((0..n).rev());
    BiLabeledGraph { graph: FiniteGraph::new(n + 1), x, y: vec![0] }
}

/// Cycle of length n labelled around the cycle and back to the start,
/// with the start as the only output.
pub fn circular_gadget(n: usize) -> BiLabeledGraph {
    let g = if n == 2 { FiniteGraph::path(2) } else { FiniteGraph::cycle(n) };
    let x = (0..=n).map(|i| i % n).collect();
    BiLabeledGraph { graph: g, x, y: vec![0] }
}

/// The square with one diagonal: edges 0-1, 1-3, 3-2, 2-0, 1-2; x = 0, y = 1.
pub fn square_diagonal_gadget() -> BiLabeledGraph {
    BiLabeledGraph::from_edges(4, &[(0, 1), (1, 3), (3, 2), (2, 0), (1, 2)], &[0], &[1]).unwrap()
}

/// Named catalogue of the standard gadgets with small default parameters.
pub fn standard_gadgets() -> Vec<(String, BiLabeledGraph)> {
    let mut out = Vec::new();
    for (n, m) in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (1, 2), (2, 1), (2, 2)] {
        out.push((format!("M{n},{m}"), BiLabeledGraph::single_vertex(n, m)));
    }
    out.push(("A".into(), BiLabeledGraph::adjacency()));
    for k in 2..=3 {
        out.push((format!("J{k}"), interval_gadget(k)));
    }
    for n in 1..=2 {
        out.push((format!("R{n}"), cup_gadget(n)));
        out.push((format!("S{n}"), folded_cup_gadget(n)));
    }
    for d in [vec![1], vec![2], vec![1, 1], vec![2, 1]] {
        let name = format!("D({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        out.push((name, path_distance_gadget(&d)));
    }
    for n in 2..=4 {
        out.push((format!("C{n}"), circular_gadget(n)));
    }
    out.push(("SquareDiagonal".into(), square_diagonal_gadget()));
    out
}

/// All `D_d` gadgets with every step length at most `lambda`.
pub fn q_window_gadgets(n: usize, lambda: usize) -> Vec<BiLabeledGraph> {
    let mut out = Vec::new();
    let mut d = vec![0usize; n];
    loop {
        out.push(path_distance_gadget(&d));
        let mut i = 0;
        while i < n && d[i] == lambda {
            d[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        d[i] += 1;
    }
    out
}

/// Result of the bounded planar closure.
#[derive(Clone, Debug)]
pub struct PlanarClosure {
    pub items: Vec<BiLabeledGraph>,
    /// True when the item cap stopped the search.
    pub truncated: bool,
    pub rounds: usize,
}

/// Bounded closure of `{M^{1,0}, M^{1,2}, A, M^{1,1}, M^{2,0}}` under
/// composition, tensor product and transpose.
///
/// Every morphism of a monoidal category generated by a set of morphisms is
/// a composite of layers `1^a ⊗ g ⊗ 1^b`, so the search left-composes such
/// layers onto identities. Items exceeding `max_labels` labels or
/// `size_budget` vertices are dropped; `item_cap` bounds the output.
pub fn generate_planar_closure(max_labels: usize, size_budget: usize, item_cap: usize) -> PlanarClosure {
    let base = [
        BiLabeledGraph::single_vertex(1, 0),
        BiLabeledGraph::single_vertex(1, 2),
        BiLabeledGraph::adjacency(),
        BiLabeledGraph::single_vertex(1, 1),
        BiLabeledGraph::single_vertex(2, 0),
    ];
    let mut gens: Vec<BiLabeledGraph> = Vec::new();
    let mut gen_keys = HashSet::new();
    for g in base.iter().flat_map(|g| [g.clone(), g.transpose()]) {
        if gen_keys.insert(g.canonical_key()) {
            gens.push(g);
        }
    }
    let keep = |k: &BiLabeledGraph| k.n() + k.m() <= max_labels && k.vertex_count() <= size_budget;
    let mut seen: HashSet<String> = HashSet::new();
    let mut items = Vec::new();
    let mut frontier = Vec::new();
    for k in 0..=max_labels / 2 {
        let id = BiLabeledGraph::identity(k);
        if keep(&id) && seen.insert(id.canonical_key()) {
            items.push(id.clone());
            frontier.push(id);
        }
    }
    let mut truncated = false;
    let mut rounds = 0;
    while !frontier.is_empty() && !truncated {
        rounds += 1;
        let mut next = Vec::new();
        'outer: for k in &frontier {
            let width = k.n();
            for g in &gens {
                if g.m() > width {
                    continue;
                }
                for a in 0..=width - g.m() {
                    let b = width - g.m() - a;
                    let layer = BiLabeledGraph::identity(a).tensor(g).tensor(&BiLabeledGraph::identity(b));
                    let c = layer.compose(k).unwrap();
                    if !keep(&c) {
                        continue;
                    }
                    for cand in [c.transpose(), c] {
                        if seen.insert(cand.canonical_key()) {
                            items.push(cand.clone());
                            next.push(cand);
                            if items.len() >= item_cap {
                                truncated = true;
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    items.sort_by_key(|k| k.canonical_key());
    PlanarClosure { items, truncated, rounds }
}

/// Random bi-labeled graph: `v` vertices, edges with probability `p`, random labels.
pub fn random_blg<R: Rng>(rng: &mut R, v: usize, n: usize, m: usize, p: f64) -> BiLabeledGraph {
    let mut g = FiniteGraph::new(v);
    for a in 0..v {
        for b in a + 1..v {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    let x = (0..n).map(|_| rng.gen_range(0..v)).collect();
    let y = (0..m).map(|_| rng.gen_range(0..v)).collect();
    BiLabeledGraph { graph: g, x, y }
}

/// Random connected bi-labeled graph (random spanning tree plus extra edges).
pub fn random_connected_blg<R: Rng>(rng: &mut R, v: usize, n: usize, m: usize, p: f64) -> BiLabeledGraph {
    let mut k = random_blg(rng, v, n, m, p);
    for w in 1..v {
        let u = rng.gen_range(0..w);
        k.graph.add_edge(u, w).unwrap();
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_gluing() {
        let a = BiLabeledGraph::single_vertex(1, 2);
        let b = BiLabeledGraph::single_vertex(2, 1);
        assert_eq!(a.compose(&b).unwrap().canonical_key(), BiLabeledGraph::single_vertex(1, 1).canonical_key());
    }

    #[test]
    fn canonical_key_ignores_names() {
        let k = BiLabeledGraph::from_edges(4, &[(0, 2), (2, 3), (3, 1)], &[0], &[1]).unwrap();
        let k2 = BiLabeledGraph::from_edges(4, &[(3, 1), (1, 2), (2, 0)], &[3], &[0]).unwrap();
        assert_eq!(k.canonical_key(), k2.canonical_key());
        let k3 = BiLabeledGraph::from_edges(4, &[(0, 2), (2, 3), (3, 1)], &[0], &[2]).unwrap();
        assert_ne!(k.canonical_key(), k3.canonical_key());
    }

    #[test]
    fn tilde_of_identity_vertex() {
        let m = BiLabeledGraph::single_vertex(1, 1);
        assert_eq!(m.tilde(), m);
    }

    #[test]
    fn interval_word() {
        let one = BiLabeledGraph::identity(1);
        let m12 = BiLabeledGraph::single_vertex(1, 2);
        let word = m12
            .tensor(&one)
            .compose(&BiLabeledGraph::identity(2).tensor(&m12))
            .unwrap()
            .compose(&one.tensor(&BiLabeledGraph::adjacency()).tensor(&BiLabeledGraph::identity(2)))
            .unwrap()
            .compose(&one.tensor(&BiLabeledGraph::single_vertex(2, 0)).tensor(&one))
            .unwrap()
            .compose(&BiLabeledGraph::identity(2))
            .unwrap();
        assert_eq!(word.canonical_key(), interval_gadget(2).canonical_key());
    }

    #[test]
    fn closure_small_budget() {
        let c = generate_planar_closure(3, 1, 10_000);
        assert!(!c.truncated);
        let keys: HashSet<String> = c.items.iter().map(|k| k.canonical_key()).collect();
        for n in 0..=3 {
            for m in 0..=3 - n {
                assert!(keys.contains(&BiLabeledGraph::single_vertex(n, m).canonical_key()), "missing M{n},{m}");
            }
        }
        let c2 = generate_planar_closure(2, 2, 10_000);
        assert!(c2.items.iter().any(|k| k.canonical_key() == BiLabeledGraph::adjacency().canonical_key()));
    }

    #[test]
    fn classes_nest() {
        let e = BiLabeledGraph::adjacency();
        let c = e.classify();
        assert!(c.in_gc && c.in_g1 && c.in_g2 && !c.in_l);
        let m = BiLabeledGraph::single_vertex(2, 0);
        let c = m.classify();
        assert!(!c.in_gc && !c.in_g1 && c.in_g2);
    }
}
