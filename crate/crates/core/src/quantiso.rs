//! Planar isomorphism at bounded depth: pointed homomorphism counts from
//! small connected planar graphs, orbit refinement, an orbit bijection or a
//! reproducible witness, plus Gram comparison and magic unitary validation.

use crate::bilabeled::{generate_planar_closure, BiLabeledGraph};
use crate::error::{Error, Result};
use crate::graphs::FiniteGraph;
use crate::hommat::hom_tensor;
use crate::morspace::{Exactness, OrbitPartition};
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Largest generator size supported by the enumerator.
pub const MAX_DEPTH: usize = 6;
pub const DEFAULT_DEPTH: usize = 6;

/// A connected planar graph with a marked vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGraph {
    pub graph: FiniteGraph,
    pub root: usize,
}

impl PointedGraph {
    /// As a bi-labeled graph with both labels on the root.
    pub fn to_blg(&self) -> BiLabeledGraph {
        BiLabeledGraph { graph: self.graph.clone(), x: vec![self.root], y: vec![self.root] }
    }
}

fn pair_bit(n: usize, a: usize, b: usize) -> u32 {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    // row-major index of (a, b) among pairs a < b of n points
    (a * (2 * n - a - 1) / 2 + (b - a - 1)) as u32
}

fn mask_of(n: usize, adj: &[Vec<bool>], perm: &[usize]) -> u32 {
    let mut m = 0u32;
    for a in 0..n {
        for b in a + 1..n {
            if adj[a][b] {
                m |= 1 << pair_bit(n, perm[a], perm[b]);
            }
        }
    }
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

fn adjacency(n: usize, mask: u32) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            if mask >> pair_bit(n, a, b) & 1 == 1 {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
    }
    adj
}

/// Planarity for at most six vertices: no `K5`, no `K5` with one edge
/// subdivided, no `K3,3`.
fn is_planar_small(n: usize, adj: &[Vec<bool>]) -> bool {
    assert!(n <= 6);
    let complete = |vs: &[usize], skip: Option<(usize, usize)>| {
        vs.iter().enumerate().all(|(p, &a)| {
            vs[p + 1..].iter().all(|&b| adj[a][b] || skip.is_some_and(|(x, y)| (x, y) == (a, b) || (y, x) == (a, b)))
        })
    };
    if n < 5 {
        return true;
    }
    for w in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&v| v != w).collect();
        if n == 5 {
            return !complete(&(0..5).collect::<Vec<_>>(), None);
        }
        if complete(&rest, None) {
            return false;
        }
        for (p, &a) in rest.iter().enumerate() {
            for &b in &rest[p + 1..] {
                if adj[w][a] && adj[w][b] && complete(&rest, Some((a, b))) {
                    return false;
                }
            }
        }
    }
    // K3,3 on all six vertices
    for s in 0u32..64 {
        if s.count_ones() != 3 || s & 1 == 0 {
            continue;
        }
        let (l, r): (Vec<usize>, Vec<usize>) = (0..6).partition(|&v| s >> v & 1 == 1);
        if l.iter().all(|&a| r.iter().all(|&b| adj[a][b])) {
            return false;
        }
    }
    true
}

fn connected(n: usize, adj: &[Vec<bool>]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if adj[v][w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Connected planar graphs with at most `depth` vertices, one pointed
/// version per root orbit, ordered by size, edge count and canonical mask.
pub fn planar_generators(depth: usize) -> Result<Arc<Vec<PointedGraph>>> {
    if depth > MAX_DEPTH {
        return Err(Error::budget("planar generator depth", MAX_DEPTH));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<PointedGraph>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&depth) {
        return Ok(v.clone());
    }
    let mut out: Vec<(usize, u32, u32, usize)> = Vec::new();
    for n in 1..=depth {
        let perms = permutations(n);
        let pairs = n * (n - 1) / 2;
        let mut seen_pointed: BTreeSet<(u32, usize)> = BTreeSet::new();
        for mask in 0u32..(1u32 << pairs) {
            let adj = adjacency(n, mask);
            if !connected(n, &adj) || !is_planar_small(n, &adj) {
                continue;
            }
            // canonical graph mask; skip non-canonical labelings
            let canon = perms.iter().map(|p| mask_of(n, &adj, p)).min().unwrap();
            if canon != mask {
                continue;
            }
            for root in 0..n {
                let key = perms.iter().map(|p| (mask_of(n, &adj, p), p[root])).min().unwrap();
                if key.0 == mask && seen_pointed.insert(key) {
                    out.push((n, mask.count_ones(), mask, key.1));
                }
            }
        }
    }
    out.sort();
    let gens: Vec<PointedGraph> = out
        .into_iter()
        .map(|(n, _, mask, root)| {
            let adj = adjacency(n, mask);
            let mut g = FiniteGraph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if adj[a][b] {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            PointedGraph { graph: g, root }
        })
        .collect();
    let gens = Arc::new(gens);
    cache.lock().unwrap().insert(depth, gens.clone());
    Ok(gens)
}

/// Pointed homomorphism counts of every generator at every vertex of `g`:
/// `counts[v][k]`.
pub fn count_vectors(g: &FiniteGraph, gens: &[PointedGraph]) -> Vec<Vec<u128>> {
    let nv = g.vertex_count();
    let mut counts = vec![vec![0u128; gens.len()]; nv];
    // group generators by underlying graph so each is enumerated once
    let mut by_graph: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
    for (idx, p) in gens.iter().enumerate() {
        let mut key = p.graph.edges();
        key.push((p.graph.vertex_count(), usize::MAX));
        by_graph.entry(key).or_default().push(idx);
    }
    for idxs in by_graph.values() {
        let k = &gens[idxs[0]].graph;
        let roots: Vec<(usize, usize)> = idxs.iter().map(|&i| (i, gens[i].root)).collect();
        let per_root = all_rooted_counts(k, g);
        for (i, r) in roots {
            for v in 0..nv {
                counts[v][i] = per_root[r][v];
            }
        }
    }
    counts
}

/// `out[x][v]`: homomorphisms `k -> g` sending `x` to `v`.
fn all_rooted_counts(k: &FiniteGraph, g: &FiniteGraph) -> Vec<Vec<u128>> {
    let kn = k.vertex_count();
    let nv = g.vertex_count();
    let dist = k.distances_from(0);
    let mut order: Vec<usize> = (0..kn).collect();
    order.sort_by_key(|&v| dist[v].unwrap_or(usize::MAX));
    let pos: Vec<usize> = {
        let mut p = vec![0; kn];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let back: Vec<Vec<usize>> = order.iter().map(|&v| k.neighbors(v).iter().copied().filter(|&u| pos[u] < pos[v]).collect()).collect();
    let mut out = vec![vec![0u128; nv]; kn];
    let mut img = vec![usize::MAX; kn];
    fn rec(
        p: usize,
        order: &[usize],
        back: &[Vec<usize>],
        img: &mut Vec<usize>,
        g: &FiniteGraph,
        out: &mut Vec<Vec<u128>>,
    ) {
        if p == order.len() {
            for (x, &v) in img.iter().enumerate() {
                out[x][v] += 1;
            }
            return;
        }
        let v = order[p];
        let cands: Vec<usize> = match back[p].first() {
            None => (0..g.vertex_count()).collect(),
            Some(&a) => g.neighbors(img[a]).to_vec(),
        };
        for c in cands {
            if back[p].iter().all(|&u| g.has_edge(img[u], c)) {
                img[v] = c;
                rec(p + 1, order, back, img, g, out);
            }
        }
        img[v] = usize::MAX;
    }
    rec(0, &order, &back, &mut img, g, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoStatus {
    Distinguished,
    IndistinguishableUpToDepth,
}

/// A pointed planar graph whose counts at `vertex1` in the first graph and
/// `vertex2` in the second differ, where the first value is attained on
/// no orbit of the other graph (or, failing that, the closest orbit).
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub generator_index: usize,
    #[serde(serialize_with = "ser_pointed")]
    pub generator: PointedGraph,
    pub vertex1: usize,
    pub vertex2: usize,
    pub count1: u128,
    pub count2: u128,
}

fn ser_pointed<S: serde::Serializer>(p: &PointedGraph, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&p.to_blg().to_json(), s)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoVerdict {
    pub status: IsoStatus,
    pub depth: usize,
    pub generators: usize,
    pub orbits1: OrbitPartition,
    pub orbits2: OrbitPartition,
    /// Orbit of the second graph matched to each orbit of the first.
    pub bijection: Option<Vec<usize>>,
    pub witness: Option<Witness>,
}

impl IsoVerdict {
    pub fn distinguished(&self) -> bool {
        self.status == IsoStatus::Distinguished
    }
}

pub fn planar_iso_test(g1: &FiniteGraph, g2: &FiniteGraph, depth: usize) -> Result<IsoVerdict> {
    for (name, g) in [("g1", g1), ("g2", g2)] {
        if g.vertex_count() == 0 || !g.is_connected() {
            return Err(Error::input(name, "graph must be connected and nonempty"));
        }
    }
    if depth == 0 {
        return Err(Error::input("depth", "depth must be at least 1"));
    }
    let gens = planar_generators(depth)?;
    let c1 = count_vectors(g1, &gens);
    let c2 = count_vectors(g2, &gens);
    let exact = Exactness::DepthBounded { depth };
    let orbits1 = OrbitPartition::from_signatures(&c1, exact);
    let orbits2 = OrbitPartition::from_signatures(&c2, exact);
    let set1: BTreeSet<&Vec<u128>> = c1.iter().collect();
    let set2: BTreeSet<&Vec<u128>> = c2.iter().collect();
    if set1 == set2 {
        let bijection = (0..orbits1.count())
            .map(|a| {
                let v = &c1[orbits1.members(a)[0]];
                orbits2.orbit_of[c2.iter().position(|w| w == v).unwrap()]
            })
            .collect();
        return Ok(IsoVerdict {
            status: IsoStatus::IndistinguishableUpToDepth,
            depth,
            generators: gens.len(),
            orbits1,
            orbits2,
            bijection: Some(bijection),
            witness: None,
        });
    }
    let witness = find_witness(&gens, &c1, &c2);
    Ok(IsoVerdict {
        status: IsoStatus::Distinguished,
        depth,
        generators: gens.len(),
        orbits1,
        orbits2,
        bijection: None,
        witness: Some(witness),
    })
}

fn find_witness(gens: &[PointedGraph], c1: &[Vec<u128>], c2: &[Vec<u128>]) -> Witness {
    let make = |k: usize, v1: usize, v2: usize| Witness {
        generator_index: k,
        generator: gens[k].clone(),
        vertex1: v1,
        vertex2: v2,
        count1: c1[v1][k],
        count2: c2[v2][k],
    };
    for k in 0..gens.len() {
        let s1: BTreeSet<u128> = c1.iter().map(|c| c[k]).collect();
        let s2: BTreeSet<u128> = c2.iter().map(|c| c[k]).collect();
        if let Some(&val) = s1.symmetric_difference(&s2).next() {
            return if s1.contains(&val) {
                make(k, c1.iter().position(|c| c[k] == val).unwrap(), 0)
            } else {
                make(k, 0, c2.iter().position(|c| c[k] == val).unwrap())
            };
        }
    }
    // every coordinate has the same value set; compare whole vectors
    let set1: BTreeSet<&Vec<u128>> = c1.iter().collect();
    let set2: BTreeSet<&Vec<u128>> = c2.iter().collect();
    let lonely = *set1.symmetric_difference(&set2).next().expect("vector sets differ");
    let prefix = |a: &[u128], b: &[u128]| a.iter().zip(b).take_while(|(x, y)| x == y).count();
    if set1.contains(lonely) {
        let v1 = c1.iter().position(|c| c == lonely).unwrap();
        let v2 = (0..c2.len()).max_by_key(|&w| (prefix(lonely, &c2[w]), std::cmp::Reverse(w))).unwrap();
        make(prefix(lonely, &c2[v2]), v1, v2)
    } else {
        let v2 = c2.iter().position(|c| c == lonely).unwrap();
        let v1 = (0..c1.len()).max_by_key(|&w| (prefix(lonely, &c1[w]), std::cmp::Reverse(w))).unwrap();
        make(prefix(lonely, &c1[v1]), v1, v2)
    }
}

/// Gram comparison of generated planar bi-labeled graphs on two targets.
#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub items: usize,
    pub arities: Vec<(usize, usize)>,
    pub equal: bool,
    /// First differing Gram entry: arity, item indices and both values.
    pub mismatch: Option<((usize, usize), usize, usize, i128, i128)>,
}

/// Compares `<T^K, T^L>` on both graphs for all generated planar `K, L` of
/// equal arity. Equal Gram matrices give equal linear relations.
pub fn check_correspondence(
    g1: &FiniteGraph,
    g2: &FiniteGraph,
    max_labels: usize,
    size_budget: usize,
) -> Result<CorrespondenceReport> {
    let closure = generate_planar_closure(max_labels, size_budget, 4000);
    let mut by_arity: BTreeMap<(usize, usize), Vec<&BiLabeledGraph>> = BTreeMap::new();
    for k in &closure.items {
        if k.graph.is_connected() {
            by_arity.entry((k.n(), k.m())).or_default().push(k);
        }
    }
    let tensors = |g: &FiniteGraph, ks: &[&BiLabeledGraph]| -> Vec<Vec<i128>> {
        ks.iter()
            .map(|k| {
                let labels: Vec<usize> = k.x.iter().chain(&k.y).copied().collect();
                hom_tensor(k, g, &labels)
            })
            .collect()
    };
    let gram = |t: &[Vec<i128>]| -> Vec<Vec<i128>> {
        t.iter().map(|a| t.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
    };
    let mut mismatch = None;
    for (&ar, ks) in &by_arity {
        let (a, b) = (gram(&tensors(g1, ks)), gram(&tensors(g2, ks)));
        'scan: for p in 0..ks.len() {
            for q in 0..ks.len() {
                if a[p][q] != b[p][q] {
                    mismatch = Some((ar, p, q, a[p][q], b[p][q]));
                    break 'scan;
                }
            }
        }
        if mismatch.is_some() {
            break;
        }
    }
    Ok(CorrespondenceReport {
        items: by_arity.values().map(|v| v.len()).sum(),
        arities: by_arity.keys().copied().collect(),
        equal: mismatch.is_none(),
        mismatch,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MagicReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Checks that `v[i][j]` (rows over `g1`, columns over `g2`) is a magic
/// unitary intertwining the adjacency matrices.
pub fn magic_unitary_verify(v: &[Vec<DMatrix<f64>>], g1: &FiniteGraph, g2: &FiniteGraph, tol: f64) -> Result<MagicReport> {
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    if v.len() != n1 || v.iter().any(|r| r.len() != n2) {
        return Err(Error::input("magic unitary", format!("expected a {n1} x {n2} array of operators")));
    }
    let dim = v.first().and_then(|r| r.first()).map_or(0, |m| m.nrows());
    if v.iter().flatten().any(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(Error::input("magic unitary", "operators must be square of one size"));
    }
    let id = DMatrix::<f64>::identity(dim, dim);
    let zero = DMatrix::<f64>::zeros(dim, dim);
    let off = |a: &DMatrix<f64>, b: &DMatrix<f64>| (a - b).abs().max();
    let mut bad = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let p = &v[i][j];
            if off(p, &p.transpose()) > tol || off(&(p * p), p) > tol {
                bad.push(format!("v[{i}][{j}] is not a projection"));
            }
        }
    }
    for i in 0..n1 {
        let s = v[i].iter().fold(zero.clone(), |acc, m| acc + m);
        if off(&s, &id) > tol {
            bad.push(format!("row {i} does not sum to the identity"));
        }
    }
    for j in 0..n2 {
        let s = (0..n1).fold(zero.clone(), |acc, i| acc + &v[i][j]);
        if off(&s, &id) > tol {
            bad.push(format!("column {j} does not sum to the identity"));
        }
    }
    for i in 0..n1 {
        for j in 0..n2 {
            let left = g1.neighbors(i).iter().fold(zero.clone(), |acc, &k| acc + &v[k][j]);
            let right = g2.neighbors(j).iter().fold(zero.clone(), |acc, &k| acc + &v[i][k]);
            if off(&left, &right) > tol {
                bad.push(format!("adjacency intertwining fails at ({i},{j})"));
            }
        }
    }
    Ok(MagicReport { valid: bad.is_empty(), violations: bad })
}
