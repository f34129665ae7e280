use super::finite::FiniteGraph;
use crate::error::{Error, Result};

pub const DEFAULT_AUT_LIMIT: usize = 10;

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class id per element, numbered by first occurrence.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        out
    }
}

/// Automorphism group given by a strong generating set.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub generators: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<usize>>,
    pub order: u128,
}

impl AutGroup {
    pub fn orbit_of(&self) -> Vec<usize> {
        let n = self.orbits.iter().map(|o| o.len()).sum();
        let mut out = vec![0; n];
        for (i, o) in self.orbits.iter().enumerate() {
            for &v in o {
                out[v] = i;
            }
        }
        out
    }
}

fn extend(g: &FiniteGraph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let n = g.vertex_count();
    let v = map.len();
    if v == n {
        return true;
    }
    for w in 0..n {
        if used[w] || g.degree(w) != g.degree(v) || g.has_edge(w, w) != g.has_edge(v, v) {
            continue;
        }
        if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(map[u], w)) {
            continue;
        }
        map.push(w);
        used[w] = true;
        if extend(g, map, used) {
            return true;
        }
        map.pop();
        used[w] = false;
    }
    false
}

/// Automorphism fixing `0..i` and sending `i` to `j`, if any.
fn find_aut(g: &FiniteGraph, i: usize, j: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut map: Vec<usize> = (0..i).collect();
    let mut used = vec![false; n];
    for &x in &map {
        used[x] = true;
    }
    if used[j] {
        return None;
    }
    if g.degree(i) != g.degree(j) || g.has_edge(i, i) != g.has_edge(j, j) || (0..i).any(|u| g.has_edge(u, i) != g.has_edge(u, j)) {
        return None;
    }
    map.push(j);
    used[j] = true;
    extend(g, &mut map, &mut used).then_some(map)
}

/// Exact automorphism group by backtracking along the stabilizer chain of
/// the base `0, 1, 2, ...`.
pub fn classical_aut(g: &FiniteGraph, limit: usize) -> Result<AutGroup> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::budget("aut-vertex-limit", limit));
    }
    let mut generators = Vec::new();
    let mut order: u128 = 1;
    for i in 0..n {
        let mut orbit = 1u128;
        for j in i + 1..n {
            if let Some(p) = find_aut(g, i, j) {
                orbit += 1;
                generators.push(p);
            }
        }
        order *= orbit;
    }
    let mut uf = UnionFind::new(n);
    for p in &generators {
        for (v, &w) in p.iter().enumerate() {
            uf.union(v, w);
        }
    }
    let labels = uf.labels();
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut orbits = vec![Vec::new(); k];
    for (v, &l) in labels.iter().enumerate() {
        orbits[l].push(v);
    }
    Ok(AutGroup { generators, orbits, order })
}

/// Orbit labels of the diagonal action on `I^k`, tuples indexed in base
/// `n` with the first coordinate most significant.
pub fn tuple_orbits(n: usize, k: usize, generators: &[Vec<usize>]) -> Vec<usize> {
    let total = n.pow(k as u32);
    let mut uf = UnionFind::new(total);
    let mut digits = vec![0usize; k];
    for t in 0..total {
        let mut x = t;
        for d in (0..k).rev() {
            digits[d] = x % n;
            x /= n;
        }
        for p in generators {
            let img = digits.iter().fold(0, |acc, &d| acc * n + p[d]);
            uf.union(t, img);
        }
    }
    uf.labels()
}
