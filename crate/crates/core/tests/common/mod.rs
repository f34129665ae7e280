//! Brute-force reference computations shared by the integration tests.
//! Nothing here calls into the library's counting or search code.
#![allow(dead_code)]

use qgs_core::bilabeled::BiLabeledGraph;
use qgs_core::graphs::FiniteGraph;
use rand::Rng;

pub type Dense = Vec<Vec<i128>>;

fn index(t: &[usize], nv: usize) -> usize {
    t.iter().fold(0, |acc, &v| acc * nv + v)
}

/// `T^K` by enumerating every vertex map of `K` into `g`.
pub fn brute_hom_matrix(k: &BiLabeledGraph, g: &FiniteGraph) -> Dense {
    let nv = g.vertex_count();
    let kv = k.graph.vertex_count();
    let edges = k.graph.edges();
    let mut out = vec![vec![0i128; nv.pow(k.y.len() as u32)]; nv.pow(k.x.len() as u32)];
    let mut map = vec![0usize; kv];
    loop {
        if edges.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
            let r: Vec<usize> = k.x.iter().map(|&v| map[v]).collect();
            let c: Vec<usize> = k.y.iter().map(|&v| map[v]).collect();
            out[index(&r, nv)][index(&c, nv)] += 1;
        }
        let mut p = 0;
        while p < kv {
            map[p] += 1;
            if map[p] < nv {
                break;
            }
            map[p] = 0;
            p += 1;
        }
        if p == kv {
            return out;
        }
    }
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] != 0 {
                for j in 0..m {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
    }
    out
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (br, bc) = (b.len(), b[0].len());
    let mut out = vec![vec![0i128; a[0].len() * bc]; a.len() * br];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            for p in 0..br {
                for q in 0..bc {
                    out[i * br + p][j * bc + q] = x * b[p][q];
                }
            }
        }
    }
    out
}

pub fn transpose(a: &Dense) -> Dense {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

fn decode(mut c: usize, nv: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for p in (0..len).rev() {
        t[p] = c % nv;
        c /= nv;
    }
    t
}

/// `R(i, j) = T(reverse j, reverse i)`.
pub fn reversal(a: &Dense, nv: usize, n: usize, m: usize) -> Dense {
    let mut out = vec![vec![0i128; nv.pow(n as u32)]; nv.pow(m as u32)];
    for (r, row) in out.iter_mut().enumerate() {
        let mut i = decode(r, nv, m);
        i.reverse();
        for (c, x) in row.iter_mut().enumerate() {
            let mut j = decode(c, nv, n);
            j.reverse();
            *x = a[index(&j, nv)][index(&i, nv)];
        }
    }
    out
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> FiniteGraph {
    let mut g = FiniteGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> FiniteGraph {
    let mut g = random_graph(rng, n, p);
    for w in 1..n {
        let u = rng.gen_range(0..w);
        g.add_edge(u, w).unwrap();
    }
    g
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// Every automorphism, by trying all permutations with pruning on edges.
pub fn brute_automorphisms(g: &FiniteGraph) -> Vec<Vec<usize>> {
    fn rec(g: &FiniteGraph, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = g.vertex_count();
        let v = perm.len();
        if v == n {
            out.push(perm.clone());
            return;
        }
        for w in 0..n {
            if used[w] {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(perm[u], w)) {
                perm.push(w);
                used[w] = true;
                rec(g, perm, used, out);
                used[w] = false;
                perm.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(g, &mut Vec::new(), &mut vec![false; g.vertex_count()], &mut out);
    out
}

/// Orbit labels of the group on `k`-tuples, ids by smallest member.
pub fn tuple_orbit_labels(nv: usize, k: usize, group: &[Vec<usize>]) -> Vec<usize> {
    let total = nv.pow(k as u32);
    let mut label = vec![usize::MAX; total];
    let mut next = 0;
    for c in 0..total {
        if label[c] != usize::MAX {
            continue;
        }
        let t = decode(c, nv, k);
        for p in group {
            let img: Vec<usize> = t.iter().map(|&v| p[v]).collect();
            label[index(&img, nv)] = next;
        }
        next += 1;
    }
    label
}

pub fn count_distinct(labels: &[usize]) -> usize {
    let mut v = labels.to_vec();
    v.sort();
    v.dedup();
    v.len()
}

/// Same-block relation of two labelings agrees.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|u| (0..a.len()).all(|v| (a[u] == a[v]) == (b[u] == b[v])))
}

/// Set partitions of `0..n` with all blocks even and no crossing, by
/// listing every restricted growth string.
pub fn brute_noncrossing_even(n: usize) -> usize {
    fn rec(p: &mut Vec<usize>, n: usize, max: usize, count: &mut usize) {
        if p.len() == n {
            let blocks = max;
            let sizes_even = (0..blocks).all(|b| p.iter().filter(|&&x| x == b).count() % 2 == 0);
            let crossing = (0..n).any(|a| {
                (a + 1..n).any(|b| {
                    (b + 1..n).any(|c| (c + 1..n).any(|d| p[a] == p[c] && p[b] == p[d] && p[a] != p[b]))
                })
            });
            if sizes_even && !crossing {
                *count += 1;
            }
            return;
        }
        for b in 0..=max {
            p.push(b);
            rec(p, n, max.max(b + 1), count);
            p.pop();
        }
    }
    let mut count = 0;
    rec(&mut Vec::new(), n, 0, &mut count);
    count
}

/// Pointed homomorphism count of `k` rooted at `root` into `g` rooted at `v`.
pub fn brute_rooted_count(k: &FiniteGraph, root: usize, g: &FiniteGraph, v: usize) -> u128 {
    let blg = BiLabeledGraph::from_edges(k.vertex_count(), &k.edges(), &[root], &[]).unwrap();
    brute_hom_matrix(&blg, g)[v][0] as u128
}

pub fn triangles(g: &FiniteGraph) -> usize {
    let n = g.vertex_count();
    (0..n)
        .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c))
        .count()
}

/// Replaces edges `ab`, `cd` by `ac`, `bd` when that keeps the graph simple.
pub fn degree_preserving_swap<R: Rng>(rng: &mut R, g: &FiniteGraph) -> Option<FiniteGraph> {
    let edges = g.edges();
    if edges.len() < 2 {
        return None;
    }
    let (a, b) = edges[rng.gen_range(0..edges.len())];
    let (c, d) = edges[rng.gen_range(0..edges.len())];
    let distinct = a != c && a != d && b != c && b != d;
    if !distinct || g.has_edge(a, c) || g.has_edge(b, d) {
        return None;
    }
    let kept: Vec<(usize, usize)> = edges.into_iter().filter(|&e| e != (a, b) && e != (c, d)).chain([(a, c), (b, d)]).collect();
    FiniteGraph::from_edges(g.vertex_count(), &kept).ok()
}
