//! Windowed computations on infinite providers: pair classes of `Mor(1,1)`
//! near the diagonal, depth-bounded orbits, dimensions and the modular
//! function, all read off finite balls with a guard margin.

use super::modular::{mu_assignment, pair_classes, MuAssignment, PairClass};
use super::orbits::{Exactness, OrbitPartition};
use crate::bilabeled::{square_diagonal_gadget, BiLabeledGraph};
use crate::error::{Error, Result};
use crate::graphs::{ball, EmbeddedBall, FiniteGraph, GraphProvider};
use crate::hommat::HomCounter;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Ball around a provider vertex with a guard margin.
#[derive(Clone, Debug)]
pub struct Window {
    pub ball: EmbeddedBall,
    pub margin: usize,
}

impl Window {
    pub fn new(p: &GraphProvider, center: &str, radius: usize, margin: usize, budget: usize) -> Result<Self> {
        if margin + 1 > radius {
            return Err(Error::Guard(format!("radius {radius} leaves no core for margin {margin}")));
        }
        Ok(Window { ball: ball(p, center, radius, budget)?, margin })
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.ball.graph
    }

    /// Vertices whose gadget evaluations see no boundary.
    pub fn core(&self) -> Vec<usize> {
        self.ball.core(self.margin)
    }

    /// Vertices whose whole neighbourhood is in the core.
    pub fn inner(&self) -> Vec<usize> {
        self.ball.core(self.margin + 1)
    }

    pub fn in_inner(&self, v: usize) -> bool {
        self.ball.depth[v] + self.margin < self.ball.radius
    }
}

/// Two-terminal gadget glued in parallel: both labels identified.
pub fn parallel(a: &BiLabeledGraph, b: &BiLabeledGraph) -> Result<BiLabeledGraph> {
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let mut map: Vec<usize> = Vec::with_capacity(nb);
    let mut extra = 0;
    for v in 0..nb {
        if v == b.x[0] {
            map.push(a.x[0]);
        } else if v == b.y[0] {
            map.push(a.y[0]);
        } else {
            map.push(na + extra);
            extra += 1;
        }
    }
    let mut edges = a.graph.edges();
    edges.extend(b.graph.edges().into_iter().map(|(u, v)| (map[u], map[v])));
    BiLabeledGraph::from_edges(na + extra, &edges, &a.x, &a.y)
}

/// Eccentricity of the first label, the reach of a pinned evaluation.
pub fn reach(k: &BiLabeledGraph) -> usize {
    k.graph.distances_from(k.x[0]).into_iter().flatten().max().unwrap_or(0)
}

/// Two-terminal planar gadgets: the edge, the square with a diagonal and its
/// transpose, closed once under composition, parallel gluing and transpose
/// within a vertex budget.
pub fn gadget_family(max_vertices: usize) -> Vec<BiLabeledGraph> {
    let edge = BiLabeledGraph::adjacency();
    let sd = square_diagonal_gadget();
    let mut fam = vec![edge, sd.clone(), sd.transpose()];
    let seeds = fam.clone();
    let mut keys: Vec<String> = fam.iter().map(|k| k.canonical_key()).collect();
    let mut push = |k: BiLabeledGraph, fam: &mut Vec<BiLabeledGraph>| {
        if k.vertex_count() <= max_vertices && k.graph.is_connected() {
            let key = k.canonical_key();
            if !keys.contains(&key) {
                keys.push(key);
                fam.push(k);
            }
        }
    };
    for a in &seeds {
        for b in &seeds {
            if let Ok(c) = a.compose(b) {
                push(c.transpose(), &mut fam);
                push(c, &mut fam);
            }
            if let Ok(c) = parallel(a, b) {
                push(c.transpose(), &mut fam);
                push(c, &mut fam);
            }
        }
    }
    fam
}

/// Values of every gadget on pairs `(v, u)` with `u` equal or adjacent to
/// `v`, for all `v` whose gadget images stay inside the ball.
pub fn pair_signatures(w: &Window, gadgets: &[BiLabeledGraph]) -> Result<Vec<((usize, usize), Vec<i128>)>> {
    if let Some(k) = gadgets.iter().find(|k| reach(k) > w.margin) {
        return Err(Error::Guard(format!("gadget reach {} exceeds margin {}", reach(k), w.margin)));
    }
    let counters: Vec<(HomCounter, bool)> = gadgets
        .iter()
        .map(|k| {
            let same = k.x[0] == k.y[0];
            let pins = if same { vec![k.x[0]] } else { vec![k.x[0], k.y[0]] };
            (HomCounter::new(&k.graph, &pins), same)
        })
        .collect();
    let g = w.graph();
    let mut out = Vec::new();
    for v in w.core() {
        let mut partners = vec![v];
        partners.extend_from_slice(g.neighbors(v));
        for &u in &partners {
            let sig = counters
                .iter()
                .map(|(c, same)| match (same, u == v) {
                    (true, true) => c.count(g, &[v]) as i128,
                    (true, false) => 0,
                    (false, _) => c.count(g, &[v, u]) as i128,
                })
                .collect();
            out.push(((v, u), sig));
        }
    }
    Ok(out)
}

/// Classes of near-diagonal pairs under the algebra generated by the gadget
/// values and series composition of class indicators.
#[derive(Clone, Debug)]
pub struct NearDiagonal {
    /// Pairs evaluated at full depth with their class ids.
    pub class_of: HashMap<(usize, usize), usize>,
    pub classes: Vec<PairClass>,
    /// Vertices all of whose pairs, on both sides, are classified.
    pub counted: Vec<bool>,
    /// Composition rounds performed.
    pub rounds: usize,
    pub stable: bool,
}

fn group(sigs: &HashMap<(usize, usize), Vec<i128>>) -> HashMap<(usize, usize), usize> {
    let mut ids: BTreeMap<&Vec<i128>, usize> = BTreeMap::new();
    for s in sigs.values() {
        let n = ids.len();
        ids.entry(s).or_insert(n);
    }
    sigs.iter().map(|(p, s)| (*p, ids[s])).collect()
}

pub fn near_diagonal_classes(w: &Window, gadgets: &[BiLabeledGraph], max_rounds: usize) -> Result<NearDiagonal> {
    let g = w.graph();
    let nv = g.vertex_count();
    let reach0 = gadgets.iter().map(reach).max().unwrap_or(0);
    let alive = |v: usize, t: usize| w.ball.depth[v] + reach0 + t <= w.ball.radius;
    let mut sigs: HashMap<(usize, usize), Vec<i128>> = pair_signatures(w, gadgets)?.into_iter().collect();
    let mut t = 0;
    let mut stable = false;
    let mut count = group(&sigs).values().collect::<std::collections::BTreeSet<_>>().len();
    while t < max_rounds {
        if !(0..nv).any(|v| alive(v, t + 2)) {
            return Err(Error::Guard(format!("window radius {} too small for {} composition rounds", w.ball.radius, t + 1)));
        }
        let cls = group(&sigs);
        let c = cls.values().max().map_or(0, |m| m + 1);
        let mut next = HashMap::new();
        for (&(i, j), s) in &sigs {
            if !alive(i, t + 1) {
                continue;
            }
            let mut ext = vec![0i128; c * c];
            let mut mid = vec![i];
            mid.extend_from_slice(g.neighbors(i));
            for k in mid {
                if k == j || g.has_edge(k, j) {
                    if let (Some(&a), Some(&b)) = (cls.get(&(i, k)), cls.get(&(k, j))) {
                        ext[a * c + b] += 1;
                    }
                }
            }
            let mut s2 = s.clone();
            s2.extend(ext);
            next.insert((i, j), s2);
        }
        sigs = next;
        t += 1;
        let n2 = group(&sigs).values().collect::<std::collections::BTreeSet<_>>().len();
        if n2 == count {
            stable = true;
            break;
        }
        count = n2;
    }
    let class_of = group(&sigs);
    let counted: Vec<bool> = (0..nv).map(|v| alive(v, t + 1)).collect();
    let mut by_class: Vec<((usize, usize), usize)> = class_of.iter().map(|(p, c)| (*p, *c)).collect();
    by_class.sort();
    let classes = pair_classes(&by_class, |v| counted[v])?;
    // renumber class ids to match the sorted class list
    let mut class_of = HashMap::new();
    for (id, c) in classes.iter().enumerate() {
        for p in &c.pairs {
            class_of.insert(*p, id);
        }
    }
    Ok(NearDiagonal { class_of, classes, counted, rounds: t, stable })
}

/// Depth-bounded data of an infinite provider near the center of a window.
#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub classes: Vec<PairClass>,
    pub orbits: OrbitPartition,
    pub mu: MuAssignment,
    pub rounds: usize,
    pub stable: bool,
    /// Vertices whose class counts are trusted.
    pub counted: Vec<bool>,
    /// `Some(false)` when the orbit of the center reaches the edge of the
    /// evaluated region; `None` when the window cannot decide.
    pub compact: Option<bool>,
}

pub fn analyze_window(w: &Window, gadgets: &[BiLabeledGraph], max_rounds: usize) -> Result<WindowReport> {
    let nd = near_diagonal_classes(w, gadgets, max_rounds)?;
    let nv = w.graph().vertex_count();
    let mu = mu_assignment(nv, w.ball.center, &nd.classes)?;
    let inner: Vec<usize> = (0..nv).filter(|&v| nd.counted[v]).collect();
    let sig = |v: usize| -> Option<Vec<u64>> {
        if !nd.counted[v] {
            return None;
        }
        let mut s = vec![0u64; 2 * nd.classes.len()];
        for (c, cls) in nd.classes.iter().enumerate() {
            s[2 * c] = cls.pairs.iter().filter(|p| p.0 == v).count() as u64;
            s[2 * c + 1] = cls.pairs.iter().filter(|p| p.1 == v).count() as u64;
        }
        Some(s)
    };
    let sigs: Vec<Option<Vec<u64>>> = (0..nv).map(sig).collect();
    let orbits = OrbitPartition::from_signatures(&sigs, Exactness::DepthBounded { depth: nd.rounds });
    let center_orbit = orbits.orbit_of[w.ball.center];
    let edge = inner.iter().map(|&v| w.ball.depth[v]).max().unwrap_or(0);
    let reaches = inner.iter().any(|&v| orbits.orbit_of[v] == center_orbit && w.ball.depth[v] == edge && edge > 0);
    Ok(WindowReport {
        classes: nd.classes,
        orbits,
        mu,
        rounds: nd.rounds,
        stable: nd.stable,
        counted: nd.counted,
        compact: if reaches { Some(false) } else { None },
    })
}

/// Evaluates `sum over labelings of prod W_e(phi(a), phi(b))` for a
/// two-terminal graph whose edges carry functions supported on pairs at
/// distance at most one.
pub fn edge_substitute(
    g: &FiniteGraph,
    k: &BiLabeledGraph,
    weight: &dyn Fn(usize, usize, usize) -> i128,
    i: usize,
    j: usize,
) -> Result<i128> {
    let kv = k.vertex_count();
    let edges = k.graph.edges();
    let (x, y) = (k.x[0], k.y[0]);
    // visit order: BFS from x so each new vertex has an earlier neighbour
    let dist = k.graph.distances_from(x);
    let mut order: Vec<usize> = (0..kv).collect();
    order.sort_by_key(|&v| dist[v].unwrap_or(usize::MAX));
    if dist.iter().any(|d| d.is_none()) {
        return Err(Error::input("gadget", "gadget must be connected"));
    }
    let mut img = vec![usize::MAX; kv];
    fn rec(
        pos: usize,
        order: &[usize],
        img: &mut Vec<usize>,
        edges: &[(usize, usize)],
        k: &BiLabeledGraph,
        g: &FiniteGraph,
        weight: &dyn Fn(usize, usize, usize) -> i128,
        fixed: &[(usize, usize)],
    ) -> i128 {
        if pos == order.len() {
            return edges.iter().enumerate().map(|(e, &(a, b))| weight(e, img[a], img[b])).product();
        }
        let v = order[pos];
        let cands: Vec<usize> = if let Some(&(_, t)) = fixed.iter().find(|(u, _)| *u == v) {
            vec![t]
        } else {
            let anchor = k.graph.neighbors(v).iter().copied().find(|&u| img[u] != usize::MAX).expect("bfs order");
            let mut c = vec![img[anchor]];
            c.extend_from_slice(g.neighbors(img[anchor]));
            c
        };
        let mut total = 0;
        for t in cands {
            img[v] = t;
            // prune on edges to already placed vertices
            let ok = edges.iter().enumerate().all(|(e, &(a, b))| {
                if (a == v || b == v) && img[a] != usize::MAX && img[b] != usize::MAX {
                    weight(e, img[a], img[b]) != 0
                } else {
                    true
                }
            });
            if ok {
                total += rec(pos + 1, order, img, edges, k, g, weight, fixed);
            }
            img[v] = usize::MAX;
        }
        total
    }
    if x == y && i != j {
        return Ok(0);
    }
    Ok(rec(0, &order, &mut img, &edges, k, g, weight, &[(x, i), (y, j)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{grandparent_graph, tree_graph};
    use crate::hommat::pointed_hom_count;
    use crate::Rational;

    #[test]
    fn substitution_with_adjacency_is_hom_count() {
        let g = FiniteGraph::cycle(5);
        let sd = square_diagonal_gadget();
        let adj = |_: usize, a: usize, b: usize| g.has_edge(a, b) as i128;
        for j in 0..5 {
            let s = edge_substitute(&g, &sd, &adj, 0, j).unwrap();
            assert_eq!(s as u128, pointed_hom_count(&sd.graph, &[0, 1], &[0, j], &g));
        }
        let e = BiLabeledGraph::adjacency();
        assert_eq!(edge_substitute(&g, &e, &adj, 0, 1).unwrap(), 1);
    }

    #[test]
    fn grandparent_classes_and_mu() {
        let p = grandparent_graph(3).unwrap();
        let w = Window::new(&p, &p.base(), 6, 2, 200_000).unwrap();
        let fam = vec![BiLabeledGraph::adjacency(), square_diagonal_gadget()];
        let rep = analyze_window(&w, &fam, 2).unwrap();
        let tree = p.orientation().unwrap();
        let center = &w.ball.keys[w.ball.center];
        let parent = w.ball.vertex(&tree.parent(center).unwrap()).unwrap();
        let c = rep.classes.iter().find(|c| c.pairs.contains(&(w.ball.center, parent))).unwrap();
        assert_eq!((c.d_left, c.d_right), (1, 2));
        assert_eq!(rep.mu.ratio(w.ball.center, parent), Some(Rational::from_integer(2.into())));
        assert_eq!(rep.compact, Some(false));
    }

    #[test]
    fn tree_is_unimodular() {
        let p = tree_graph(3).unwrap();
        let w = Window::new(&p, &p.base(), 6, 2, 200_000).unwrap();
        let rep = analyze_window(&w, &[BiLabeledGraph::adjacency(), square_diagonal_gadget()], 2).unwrap();
        assert!(rep.mu.is_constant());
    }
}
