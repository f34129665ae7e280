//! Homomorphism-count matrices `T^K` on finite targets and on windows of
//! locally finite providers.

use crate::bilabeled::BiLabeledGraph;
use crate::error::{Error, Result};
use crate::graphs::{ball, FiniteGraph, GraphProvider};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap, VecDeque};

/// An ordered list of distinct vertex k-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleWindow {
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl TupleWindow {
    pub fn new(arity: usize, tuples: Vec<Vec<usize>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(tuples.len());
        for (i, t) in tuples.iter().enumerate() {
            if t.len() != arity {
                return Err(Error::input("window", format!("tuple {t:?} does not have arity {arity}")));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::input("window", format!("duplicate tuple {t:?}")));
            }
        }
        Ok(TupleWindow { arity, tuples, index })
    }

    /// All k-tuples over `0..n`, first coordinate most significant.
    pub fn all(n: usize, k: usize) -> Self {
        let total = n.pow(k as u32);
        let tuples = (0..total).map(|c| decode(c, n, k)).collect();
        Self::new(k, tuples).unwrap()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// Mixed-radix decoding, first coordinate most significant.
pub fn decode(mut c: usize, n: usize, k: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for s in (0..k).rev() {
        t[s] = c % n;
        c /= n;
    }
    t
}

pub fn encode(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &v| acc * n + v)
}

/// Sparse matrix of homomorphism counts on a pair of tuple windows.
#[derive(Clone, Debug)]
pub struct HomMatrix {
    pub blg: BiLabeledGraph,
    pub rows: TupleWindow,
    pub cols: TupleWindow,
    pub entries: BTreeMap<(usize, usize), BigUint>,
    pub row_complete: Vec<bool>,
    pub col_complete: Vec<bool>,
}

impl HomMatrix {
    pub fn get(&self, r: usize, c: usize) -> BigUint {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn get_tuple(&self, i: &[usize], j: &[usize]) -> Option<BigUint> {
        Some(self.get(self.rows.position(i)?, self.cols.position(j)?))
    }

    /// Dense copy with `i128` entries; fails if an entry does not fit.
    pub fn to_dense(&self) -> Result<Vec<Vec<i128>>> {
        let mut d = vec![vec![0i128; self.cols.len()]; self.rows.len()];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.to_i128().ok_or_else(|| Error::Numerical("hom count exceeds i128".into()))?;
        }
        Ok(d)
    }

    /// CSV triplets `row_tuple,col_tuple,value` with tuples joined by spaces.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,value\n");
        let join = |t: &[usize]| t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        for (&(r, c), v) in &self.entries {
            s.push_str(&format!("{},{},{}\n", join(&self.rows.tuples[r]), join(&self.cols.tuples[c]), v));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(r, c), v)| serde_json::json!([self.rows.tuples[r], self.cols.tuples[c], v.to_string()]))
            .collect();
        serde_json::json!({"blg": self.blg.to_json(), "entries": entries})
    }
}

/// Backtracking homomorphism counter for a fixed pattern and pinned set.
///
/// Vertices are visited pinned-first, then in BFS order; pendant unpinned
/// vertices are not searched but contribute the degree of their neighbour's
/// image as a factor. Components without pinned vertices are counted once.
pub struct HomCounter {
    order: Vec<usize>,
    /// For each position in `order`: earlier neighbours (by position).
    back: Vec<Vec<usize>>,
    has_loop: Vec<bool>,
    /// Pendant vertices: position of their neighbour in `order`.
    pendants: Vec<usize>,
    pinned: usize,
    free_components: Vec<FiniteGraph>,
}

impl HomCounter {
    pub fn new(k: &FiniteGraph, pinned: &[usize]) -> Self {
        let n = k.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut ncomp = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut q = VecDeque::from([s]);
            comp[s] = ncomp;
            while let Some(v) = q.pop_front() {
                for &w in k.neighbors(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = ncomp;
                        q.push_back(w);
                    }
                }
            }
            ncomp += 1;
        }
        let mut pinned_comp = vec![false; ncomp];
        for &p in pinned {
            pinned_comp[comp[p]] = true;
        }
        let free_components = (0..ncomp)
            .filter(|&c| !pinned_comp[c])
            .map(|c| k.induced(&(0..n).filter(|&v| comp[v] == c).collect::<Vec<_>>()))
            .collect();
        let mut in_order = vec![false; n];
        let mut order = Vec::new();
        for &p in pinned {
            if !in_order[p] {
                in_order[p] = true;
                order.push(p);
            }
        }
        let pinned_len = order.len();
        let pinned_set: Vec<bool> = (0..n).map(|v| in_order[v]).collect();
        let is_pendant = |v: usize| !pinned_set[v] && k.degree(v) == 1 && !k.has_edge(v, v);
        // BFS through pinned components, deferring pendants
        let mut pend_vertices = Vec::new();
        let mut q: VecDeque<usize> = order.iter().copied().collect();
        while let Some(v) = q.pop_front() {
            for &w in k.neighbors(v) {
                if in_order[w] || !pinned_comp[comp[w]] {
                    continue;
                }
                if is_pendant(w) {
                    if !pend_vertices.contains(&w) {
                        pend_vertices.push(w);
                    }
                    continue;
                }
                in_order[w] = true;
                order.push(w);
                q.push_back(w);
            }
        }
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| k.neighbors(v).iter().filter_map(|w| pos.get(w).copied()).filter(|&j| j < i).collect())
            .collect();
        let has_loop = order.iter().map(|&v| k.has_edge(v, v)).collect();
        let pendants = pend_vertices.iter().map(|&w| pos[&k.neighbors(w)[0]]).collect();
        HomCounter { order, back, has_loop, pendants, pinned: pinned_len, free_components }
    }

    /// Number of distinct pinned vertices; `count` expects images for these
    /// in first-occurrence order of the pinned list.
    pub fn pinned_len(&self) -> usize {
        self.pinned
    }

    /// Homomorphisms into `g` extending the pinned images. Returns 0 when
    /// the pinned images are inconsistent with edges among pinned vertices.
    pub fn count(&self, g: &FiniteGraph, images: &[usize]) -> u128 {
        let mut phi = vec![0usize; self.order.len()];
        for (i, &img) in images.iter().enumerate() {
            if self.has_loop[i] && !g.has_edge(img, img) {
                return 0;
            }
            if self.back[i].iter().any(|&j| !g.has_edge(images[j], img)) {
                return 0;
            }
            phi[i] = img;
        }
        let mut total = self.extend(g, &mut phi, self.pinned);
        if total == 0 {
            return 0;
        }
        for c in &self.free_components {
            total = total.checked_mul(free_count(c, g)).expect("hom count overflow");
        }
        total
    }

    fn extend(&self, g: &FiniteGraph, phi: &mut Vec<usize>, i: usize) -> u128 {
        if i == self.order.len() {
            let mut f: u128 = 1;
            for &p in &self.pendants {
                f = f.checked_mul(g.degree(phi[p]) as u128).expect("hom count overflow");
                if f == 0 {
                    break;
                }
            }
            return f;
        }
        let back = &self.back[i];
        let mut total: u128 = 0;
        let candidates: Vec<usize> = match back.first() {
            Some(&j) => g.neighbors(phi[j]).to_vec(),
            None => (0..g.vertex_count()).collect(),
        };
        for c in candidates {
            if self.has_loop[i] && !g.has_edge(c, c) {
                continue;
            }
            if back[1..].iter().any(|&j| !g.has_edge(phi[j], c)) {
                continue;
            }
            phi[i] = c;
            total = total.checked_add(self.extend(g, phi, i + 1)).expect("hom count overflow");
        }
        total
    }
}

fn free_count(c: &FiniteGraph, g: &FiniteGraph) -> u128 {
    let h = HomCounter::new(c, &[0]);
    (0..g.vertex_count()).map(|v| h.count(g, &[v])).sum()
}

/// Number of homomorphisms `K -> G` (no pinned vertices).
pub fn hom_count(k: &FiniteGraph, g: &FiniteGraph) -> u128 {
    HomCounter::new(k, &[]).count(g, &[])
}

/// Homomorphisms `K -> G` sending `pins[t]` to `images[t]`.
pub fn pointed_hom_count(k: &FiniteGraph, pins: &[usize], images: &[usize], g: &FiniteGraph) -> u128 {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut uniq = Vec::new();
    let mut imgs = Vec::new();
    for (&p, &i) in pins.iter().zip(images) {
        match seen.get(&p) {
            Some(&prev) if prev != i => return 0,
            Some(_) => {}
            None => {
                seen.insert(p, i);
                uniq.push(p);
                imgs.push(i);
            }
        }
    }
    HomCounter::new(k, &uniq).count(g, &imgs)
}

/// Distinct labelled vertices of `(x, y)` in first-occurrence order.
fn labelled_vertices(k: &BiLabeledGraph) -> Vec<usize> {
    let mut out = Vec::new();
    for &v in k.x.iter().chain(&k.y) {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Enumerate assignments of the labelled vertices that extend to at least
/// one homomorphism, with their extension counts. Labelled vertices are
/// assigned in BFS order among themselves to prune by adjacency.
fn labelled_assignments(k: &BiLabeledGraph, g: &FiniteGraph, mut visit: impl FnMut(&HashMap<usize, usize>, u128)) {
    let lab = labelled_vertices(k);
    let counter = HomCounter::new(&k.graph, &lab);
    let nv = g.vertex_count();
    let mut images = vec![0usize; lab.len()];
    let back: Vec<Vec<usize>> = (0..lab.len()).map(|i| (0..i).filter(|&j| k.graph.has_edge(lab[i], lab[j])).collect()).collect();
    fn rec(
        i: usize,
        lab: &[usize],
        back: &[Vec<usize>],
        images: &mut Vec<usize>,
        g: &FiniteGraph,
        nv: usize,
        counter: &HomCounter,
        visit: &mut dyn FnMut(&HashMap<usize, usize>, u128),
        kg: &FiniteGraph,
    ) {
        if i == lab.len() {
            let c = counter.count(g, images);
            if c > 0 {
                let m = lab.iter().copied().zip(images.iter().copied()).collect();
                visit(&m, c);
            }
            return;
        }
        let cands: Vec<usize> = match back[i].first() {
            Some(&j) => g.neighbors(images[j]).to_vec(),
            None => (0..nv).collect(),
        };
        for c in cands {
            if kg.has_edge(lab[i], lab[i]) && !g.has_edge(c, c) {
                continue;
            }
            if back[i].iter().any(|&j| !g.has_edge(images[j], c)) {
                continue;
            }
            images[i] = c;
            rec(i + 1, lab, back, images, g, nv, counter, visit, kg);
        }
    }
    rec(0, &lab, &back, &mut images, g, nv, &counter, &mut visit, &k.graph);
}

/// Complete `T^K` on a finite target, indexed by all n- and m-tuples.
pub fn hom_matrix(k: &BiLabeledGraph, target: &FiniteGraph) -> HomMatrix {
    let nv = target.vertex_count();
    let rows = TupleWindow::all(nv, k.n());
    let cols = TupleWindow::all(nv, k.m());
    let mut entries = BTreeMap::new();
    labelled_assignments(k, target, |m, c| {
        let r = encode(&k.x.iter().map(|v| m[v]).collect::<Vec<_>>(), nv);
        let col = encode(&k.y.iter().map(|v| m[v]).collect::<Vec<_>>(), nv);
        *entries.entry((r, col)).or_insert_with(BigUint::zero) += c;
    });
    let (nr, nc) = (rows.len(), cols.len());
    HomMatrix { blg: k.clone(), rows, cols, entries, row_complete: vec![true; nr], col_complete: vec![true; nc] }
}

/// Values of `T^K` as a function of the concatenated label tuple `x ++ y`,
/// dense over `I^{n+m}`, first coordinate most significant.
pub fn hom_tensor(k: &BiLabeledGraph, target: &FiniteGraph, labels: &[usize]) -> Vec<i128> {
    let nv = target.vertex_count();
    let mut out = vec![0i128; nv.pow(labels.len() as u32)];
    labelled_assignments(&BiLabeledGraph { graph: k.graph.clone(), x: labels.to_vec(), y: Vec::new() }, target, |m, c| {
        let idx = encode(&labels.iter().map(|v| m[v]).collect::<Vec<_>>(), nv);
        out[idx] += c as i128;
    });
    out
}

/// `T^K` restricted to windows of a provider. Rows must be tuples of ball
/// vertex indices of `region`; every homomorphism from a connected K lies
/// within distance `ecc` of the image of the first input label.
pub fn hom_matrix_windowed(
    k: &BiLabeledGraph,
    p: &GraphProvider,
    rows: &TupleWindow,
    cols: &TupleWindow,
    keys: &[String],
    budget: usize,
) -> Result<HomMatrix> {
    if !k.graph.is_connected() || k.n() + k.m() == 0 {
        return Err(Error::input("blg", "windowed counts need a connected graph with at least one label"));
    }
    if k.n() == 0 {
        let t = hom_matrix_windowed(&k.transpose(), p, cols, rows, keys, budget)?;
        let entries = t.entries.into_iter().map(|((r, c), v)| ((c, r), v)).collect();
        return Ok(HomMatrix {
            blg: k.clone(),
            rows: rows.clone(),
            cols: cols.clone(),
            entries,
            row_complete: t.col_complete,
            col_complete: t.row_complete,
        });
    }
    let anchor = k.x[0];
    let ecc = k.graph.distances_from(anchor).into_iter().flatten().max().unwrap_or(0);
    let prefix = PrefixSearch::new(&k.graph, anchor, &labelled_vertices(k));
    let mut entries = BTreeMap::new();
    let key_pos: HashMap<&str, usize> = keys.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    for (r, row) in rows.tuples.iter().enumerate() {
        let b = ball(p, &keys[row[0]], ecc, budget)?;
        // translate the row into ball indices; labels outside the ball give 0
        let Some(local_row) = row.iter().map(|&v| b.vertex(&keys[v])).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let mut pins: HashMap<usize, usize> = HashMap::new();
        let mut consistent = true;
        for (&v, &img) in k.x.iter().zip(&local_row) {
            if let Some(&prev) = pins.get(&v) {
                consistent &= prev == img;
            }
            pins.insert(v, img);
        }
        if !consistent {
            continue;
        }
        prefix.for_each(&b.graph, &pins, |phi, c| {
            let Some(col_tuple) = k.y.iter().map(|v| key_pos.get(b.keys[phi[v]].as_str()).copied()).collect::<Option<Vec<_>>>() else {
                return;
            };
            if let Some(cidx) = cols.position(&col_tuple) {
                *entries.entry((r, cidx)).or_insert_with(BigUint::zero) += c;
            }
        });
    }
    Ok(HomMatrix {
        blg: k.clone(),
        rows: rows.clone(),
        cols: cols.clone(),
        entries,
        row_complete: vec![true; rows.len()],
        col_complete: vec![false; cols.len()],
    })
}

/// Enumerates homomorphisms of a connected pattern on the BFS prefix that
/// covers all labelled vertices, counting the remaining extension.
pub struct PrefixSearch {
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    loops: Vec<bool>,
    tail: HomCounter,
}

impl PrefixSearch {
    pub fn new(k: &FiniteGraph, anchor: usize, labelled: &[usize]) -> Self {
        let mut seen = vec![false; k.vertex_count()];
        let mut bfs = vec![anchor];
        seen[anchor] = true;
        let mut i = 0;
        while i < bfs.len() {
            for &w in k.neighbors(bfs[i]) {
                if !seen[w] {
                    seen[w] = true;
                    bfs.push(w);
                }
            }
            i += 1;
        }
        let last = bfs.iter().rposition(|v| labelled.contains(v)).unwrap_or(0);
        let order: Vec<usize> = bfs[..=last].to_vec();
        let back = (0..order.len()).map(|i| (0..i).filter(|&j| k.has_edge(order[i], order[j])).collect()).collect();
        let loops = order.iter().map(|&v| k.has_edge(v, v)).collect();
        let tail = HomCounter::new(k, &order);
        PrefixSearch { order, back, loops, tail }
    }

    /// Calls `visit(phi, count)` for every prefix homomorphism respecting
    /// `pins`, where `phi` maps pattern vertices (prefix only) to targets.
    pub fn for_each(&self, g: &FiniteGraph, pins: &HashMap<usize, usize>, mut visit: impl FnMut(&HashMap<usize, usize>, u128)) {
        let mut images = vec![0usize; self.order.len()];
        self.rec(0, g, pins, &mut images, &mut visit);
    }

    fn rec(&self, i: usize, g: &FiniteGraph, pins: &HashMap<usize, usize>, images: &mut Vec<usize>, visit: &mut dyn FnMut(&HashMap<usize, usize>, u128)) {
        if i == self.order.len() {
            let c = self.tail.count(g, images);
            if c > 0 {
                let phi = self.order.iter().copied().zip(images.iter().copied()).collect();
                visit(&phi, c);
            }
            return;
        }
        let v = self.order[i];
        let cands: Vec<usize> = match (pins.get(&v), self.back[i].first()) {
            (Some(&p), _) => vec![p],
            (None, Some(&j)) => g.neighbors(images[j]).to_vec(),
            (None, None) => (0..g.vertex_count()).collect(),
        };
        for c in cands {
            if self.loops[i] && !g.has_edge(c, c) {
                continue;
            }
            if self.back[i].iter().any(|&j| !g.has_edge(images[j], c)) {
                continue;
            }
            images[i] = c;
            self.rec(i + 1, g, pins, images, visit);
        }
    }
}

/// Which coordinate a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceSide {
    /// Keep the first coordinate, sum over the rest.
    Left,
    /// Keep the last coordinate, sum over the rest.
    Right,
}

/// Partial trace of a square window matrix, as a map from the kept vertex
/// to the diagonal sum.
pub fn partial_trace(t: &HomMatrix, side: TraceSide) -> Result<BTreeMap<usize, BigUint>> {
    if t.rows != t.cols {
        return Err(Error::input("partial_trace", "row and column windows differ"));
    }
    if t.row_complete.iter().any(|c| !c) {
        return Err(Error::Guard("partial trace over incomplete rows would be a truncation".into()));
    }
    let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
    for (r, tuple) in t.rows.tuples.iter().enumerate() {
        let keep = match side {
            TraceSide::Left => tuple[0],
            TraceSide::Right => *tuple.last().unwrap(),
        };
        let e = out.entry(keep).or_default();
        if let Some(v) = t.entries.get(&(r, r)) {
            *e += v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_diagonal() {
        let k = BiLabeledGraph::from_edges(2, &[(0, 1)], &[0], &[0]).unwrap();
        let t = hom_matrix(&k, &FiniteGraph::cycle(4));
        let d = t.to_dense().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d[i][j], if i == j { 2 } else { 0 });
            }
        }
    }

    #[test]
    fn triangle_on_c5() {
        let k = BiLabeledGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)], &[0], &[0]).unwrap();
        assert!(hom_matrix(&k, &FiniteGraph::cycle(5)).entries.is_empty());
    }

    #[test]
    fn cup_is_delta() {
        let t = hom_matrix(&BiLabeledGraph::single_vertex(2, 0), &FiniteGraph::path(3));
        let d = t.to_dense().unwrap();
        for r in 0..9 {
            assert_eq!(d[r][0], if r % 4 == 0 { 1 } else { 0 });
        }
    }

    #[test]
    fn square_of_adjacency() {
        let a = BiLabeledGraph::adjacency();
        let t = hom_matrix(&a.compose(&a).unwrap(), &FiniteGraph::cycle(4)).to_dense().unwrap();
        assert_eq!(t[0], vec![2, 0, 2, 0]);
    }

    #[test]
    fn counts_agree_with_brute_force() {
        let k = FiniteGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 4)]).unwrap();
        let mut g = FiniteGraph::cycle(5);
        g.add_edge(2, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        let mut brute = 0u128;
        for code in 0..5usize.pow(5) {
            let phi = decode(code, 5, 5);
            if k.edges().iter().all(|&(u, v)| g.has_edge(phi[u], phi[v])) {
                brute += 1;
            }
        }
        assert_eq!(hom_count(&k, &g), brute);
    }

    #[test]
    fn partial_trace_of_identity() {
        let t = hom_matrix(&BiLabeledGraph::single_vertex(1, 1), &FiniteGraph::path(3));
        let tr = partial_trace(&t, TraceSide::Left).unwrap();
        assert!(tr.values().all(|v| *v == BigUint::from(1u32)));
    }

    fn window_pair(u: &str, v: &str) -> (Vec<String>, TupleWindow, TupleWindow) {
        let keys = vec![u.to_string(), v.to_string()];
        (keys, TupleWindow::new(1, vec![vec![0]]).unwrap(), TupleWindow::new(1, vec![vec![1]]).unwrap())
    }

    #[test]
    fn windowed_square_diagonal_on_grandparent() {
        let p = crate::graphs::grandparent_graph(3).unwrap();
        let tree = p.orientation().unwrap();
        let child = tree.children("0:").unwrap()[1].clone();
        let sd = crate::bilabeled::square_diagonal_gadget();
        let (keys, r, c) = window_pair(&child, "0:");
        let up = hom_matrix_windowed(&sd, &p, &r, &c, &keys, 10_000).unwrap();
        let (keys, r, c) = window_pair("0:", &child);
        let down = hom_matrix_windowed(&sd, &p, &r, &c, &keys, 10_000).unwrap();
        assert_eq!(up.get(0, 0), BigUint::from(5u32));
        assert_eq!(down.get(0, 0), BigUint::from(7u32));
    }

    #[test]
    fn windowed_degree_on_tree() {
        let p = crate::graphs::tree_graph(3).unwrap();
        let b = ball(&p, "0:", 2, 1000).unwrap();
        let k = BiLabeledGraph::from_edges(2, &[(0, 1)], &[0], &[0]).unwrap();
        let w = TupleWindow::new(1, (0..b.keys.len()).map(|i| vec![i]).collect()).unwrap();
        let t = hom_matrix_windowed(&k, &p, &w, &w, &b.keys, 10_000).unwrap();
        for i in 0..w.len() {
            assert_eq!(t.get(i, i), BigUint::from(3u32));
        }
    }

    #[test]
    fn windowed_matches_full_on_finite() {
        let g = FiniteGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap();
        let p = GraphProvider::finite(g.clone());
        let keys: Vec<String> = (0..5).map(|i| p.neighbors(&p.base()).map(|_| i.to_string()).unwrap()).collect();
        let k = BiLabeledGraph::from_edges(3, &[(0, 1), (1, 2)], &[0, 1], &[2]).unwrap();
        let full = hom_matrix(&k, &g);
        let w = hom_matrix_windowed(&k, &p, &full.rows, &full.cols, &keys, 100).unwrap();
        assert_eq!(full.entries, w.entries);
    }
}
