use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// A finite simple graph, possibly with loops. Adjacency lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGraph {
    adj: Vec<Vec<usize>>,
}

impl FiniteGraph {
    pub fn new(n: usize) -> Self {
        FiniteGraph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = FiniteGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &e).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &e).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let e: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &e).unwrap()
    }

    /// Star with one center (vertex 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &e).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::input("edge", format!("edge ({u},{v}) out of range for {n} vertices")));
        }
        let fresh = match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                true
            }
        };
        if u != v {
            if let Err(pos) = self.adj[v].binary_search(&u) {
                self.adj[v].insert(pos, u);
            }
        }
        Ok(fresh)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.adj.len()).any(|v| self.has_edge(v, v))
    }

    /// Edges as pairs `u <= v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u <= v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.adj.len()];
        d[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            let dv = d[v].unwrap();
            for &w in &self.adj[v] {
                if d[w].is_none() {
                    d[w] = Some(dv + 1);
                    q.push_back(w);
                }
            }
        }
        d
    }

    /// All-pairs distances; `usize::MAX` marks disconnected pairs.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.adj.len())
            .map(|s| self.distances_from(s).into_iter().map(|x| x.unwrap_or(usize::MAX)).collect())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.distances_from(0).iter().all(|d| d.is_some())
    }

    pub fn diameter(&self) -> Option<usize> {
        let dm = self.distance_matrix();
        let m = dm.iter().flatten().copied().max().unwrap_or(0);
        (m != usize::MAX).then_some(m)
    }

    /// Image of the graph under the vertex map `v -> perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut g = FiniteGraph::new(self.adj.len());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).unwrap();
        }
        g
    }

    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = FiniteGraph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != usize::MAX {
                    g.add_edge(i, pos[w]).unwrap();
                }
            }
        }
        g
    }

    /// Parses the text format: `finite <n>` then `edge <u> <v>` lines.
    /// Everything after `#` is a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g: Option<FiniteGraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            let parts: Vec<&str> = s.split_whitespace().collect();
            let num = |t: &str| -> Result<usize> {
                t.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("expected a nonnegative integer, found `{t}`") })
            };
            match (parts[0], g.as_mut()) {
                ("finite", None) if parts.len() == 2 => g = Some(FiniteGraph::new(num(parts[1])?)),
                ("finite", _) => return Err(Error::Parse { line, msg: "malformed or repeated `finite <n>` header".into() }),
                ("edge", Some(gr)) if parts.len() == 3 => {
                    let (u, v) = (num(parts[1])?, num(parts[2])?);
                    gr.add_edge(u, v).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
                }
                ("edge", Some(_)) => return Err(Error::Parse { line, msg: "expected `edge <u> <v>`".into() }),
                ("edge", None) => return Err(Error::Parse { line, msg: "`edge` before `finite <n>` header".into() }),
                (other, _) => return Err(Error::Parse { line, msg: format!("unknown directive `{other}`") }),
            }
        }
        g.ok_or(Error::Parse { line: 1, msg: "missing `finite <n>` header".into() })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("finite {}\n", self.adj.len());
        for (u, v) in self.edges() {
            s.push_str(&format!("edge {u} {v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let g = FiniteGraph::cycle(5);
        assert_eq!(FiniteGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_reports_line() {
        let err = FiniteGraph::parse("finite 3\nedge 0 1\nedge 0 x\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "expected a nonnegative integer, found `x`".into() });
        let err = FiniteGraph::parse("finite 2\n\nedge 0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn symmetric_adjacency() {
        let g = FiniteGraph::from_edges(3, &[(0, 1), (1, 0), (2, 2)]).unwrap();
        assert!(g.has_edge(1, 0) && g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_loops());
    }
}
