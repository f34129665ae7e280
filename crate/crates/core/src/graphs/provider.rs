use super::finite::FiniteGraph;
use super::group::GroupSpec;
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, RwLock};

pub const DEFAULT_VERTEX_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Finite,
    Cayley,
    Tree,
    Grandparent,
    Product,
    Custom,
}

/// Neighbourhood oracle of a connected, locally finite graph with string keys.
pub trait NeighborOracle: Send + Sync {
    fn base(&self) -> String;
    fn neighbors(&self, key: &str) -> Result<Vec<String>>;
    fn kind(&self) -> ProviderKind {
        ProviderKind::Custom
    }
}

/// Regular tree oriented towards a fixed end.
///
/// A vertex is `(k, path)`: start at the k-th vertex of a fixed ray towards
/// the end, then descend along `path` (child indices). Child 0 of a ray
/// vertex is the previous ray vertex, so for `k >= 1` the first path entry
/// is nonzero. Keys read `k:p1.p2...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedTree {
    pub degree: usize,
}

type TreeVertex = (usize, Vec<usize>);

impl OrientedTree {
    pub fn parse(&self, key: &str) -> Result<TreeVertex> {
        let bad = || Error::input("vertex", format!("bad tree vertex key `{key}`"));
        let (k, p) = key.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let path: Vec<usize> = if p.is_empty() {
            Vec::new()
        } else {
            p.split('.').map(|t| t.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let kids = self.degree - 1;
        if path.iter().any(|&c| c >= kids) || (k >= 1 && path.first() == Some(&0)) {
            return Err(bad());
        }
        Ok((k, path))
    }

    pub fn key(&self, v: &TreeVertex) -> String {
        let p: Vec<String> = v.1.iter().map(|c| c.to_string()).collect();
        format!("{}:{}", v.0, p.join("."))
    }

    fn parent_of(v: &TreeVertex) -> TreeVertex {
        let (k, p) = v;
        if p.is_empty() {
            (k + 1, Vec::new())
        } else {
            (*k, p[..p.len() - 1].to_vec())
        }
    }

    fn children_of(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let (k, p) = v;
        let kids = self.degree - 1;
        if p.is_empty() && *k >= 1 {
            let mut out = vec![(k - 1, Vec::new())];
            out.extend((1..kids).map(|c| (*k, vec![c])));
            out
        } else {
            (0..kids)
                .map(|c| {
                    let mut q = p.clone();
                    q.push(c);
                    (*k, q)
                })
                .collect()
        }
    }

    pub fn parent(&self, key: &str) -> Result<String> {
        Ok(self.key(&Self::parent_of(&self.parse(key)?)))
    }

    pub fn children(&self, key: &str) -> Result<Vec<String>> {
        Ok(self.children_of(&self.parse(key)?).iter().map(|c| self.key(c)).collect())
    }

    pub fn grandparent(&self, key: &str) -> Result<String> {
        self.parent(&self.parent(key)?)
    }

    pub fn grandchildren(&self, key: &str) -> Result<Vec<String>> {
        let v = self.parse(key)?;
        Ok(self
            .children_of(&v)
            .iter()
            .flat_map(|c| self.children_of(c))
            .map(|g| self.key(&g))
            .collect())
    }
}

struct TreeOracle {
    tree: OrientedTree,
    long_edges: bool,
}

impl NeighborOracle for TreeOracle {
    fn base(&self) -> String {
        "0:".into()
    }

    fn neighbors(&self, key: &str) -> Result<Vec<String>> {
        let mut out = vec![self.tree.parent(key)?];
        out.extend(self.tree.children(key)?);
        if self.long_edges {
            out.push(self.tree.grandparent(key)?);
            out.extend(self.tree.grandchildren(key)?);
        }
        Ok(out)
    }

    fn kind(&self) -> ProviderKind {
        if self.long_edges {
            ProviderKind::Grandparent
        } else {
            ProviderKind::Tree
        }
    }
}

struct FiniteOracle {
    graph: FiniteGraph,
}

impl NeighborOracle for FiniteOracle {
    fn base(&self) -> String {
        "0".into()
    }

    fn neighbors(&self, key: &str) -> Result<Vec<String>> {
        let v: usize = key.parse().map_err(|_| Error::input("vertex", format!("bad vertex key `{key}`")))?;
        if v >= self.graph.vertex_count() {
            return Err(Error::input("vertex", format!("vertex {v} out of range")));
        }
        Ok(self.graph.neighbors(v).iter().map(|w| w.to_string()).collect())
    }

    fn kind(&self) -> ProviderKind {
        ProviderKind::Finite
    }
}

struct CayleyOracle {
    group: GroupSpec,
}

impl NeighborOracle for CayleyOracle {
    fn base(&self) -> String {
        self.group.key(&self.group.identity())
    }

    fn neighbors(&self, key: &str) -> Result<Vec<String>> {
        let g = self.group.oracle().parse(key)?;
        Ok(self.group.generators().iter().map(|s| self.group.key(&self.group.mul(&g, s))).collect())
    }

    fn kind(&self) -> ProviderKind {
        ProviderKind::Cayley
    }
}

type FiberFn = dyn Fn(&str) -> FiniteGraph + Send + Sync;

struct ProductOracle {
    base: GraphProvider,
    fibers: Arc<FiberFn>,
    shape: Mutex<Option<(usize, usize, usize)>>,
}

impl ProductOracle {
    fn split<'a>(&self, key: &'a str) -> Result<(&'a str, usize)> {
        let (v, x) = key.rsplit_once('|').ok_or_else(|| Error::input("vertex", format!("bad product key `{key}`")))?;
        let x = x.parse().map_err(|_| Error::input("vertex", format!("bad fiber index in `{key}`")))?;
        Ok((v, x))
    }

    fn fiber(&self, v: &str) -> Result<FiniteGraph> {
        let f = (self.fibers)(v);
        let kappa = f.vertex_count();
        if f.has_loops() {
            return Err(Error::input("fibers", format!("fiber over `{v}` has loops")));
        }
        let deg = if kappa > 0 { f.degree(0) } else { 0 };
        if (0..kappa).any(|x| f.degree(x) != deg) || (kappa > 0 && deg >= kappa) {
            return Err(Error::input("fibers", format!("fiber over `{v}` is not regular of degree < size")));
        }
        let base_deg = self.base.neighbors(v)?.len();
        let mut shape = self.shape.lock().unwrap();
        match *shape {
            None => *shape = Some((kappa, deg, base_deg)),
            Some(s) if s == (kappa, deg, base_deg) => {}
            Some(s) => {
                return Err(Error::input(
                    "fibers",
                    format!("fiber over `{v}` has (size, degree, base degree) {:?}, expected {:?}", (kappa, deg, base_deg), s),
                ))
            }
        }
        Ok(f)
    }
}

impl NeighborOracle for ProductOracle {
    fn base(&self) -> String {
        format!("{}|0", self.base.base())
    }

    fn neighbors(&self, key: &str) -> Result<Vec<String>> {
        let (v, x) = self.split(key)?;
        let f = self.fiber(v)?;
        if x >= f.vertex_count() {
            return Err(Error::input("vertex", format!("fiber index out of range in `{key}`")));
        }
        let mut out: Vec<String> = f.neighbors(x).iter().map(|y| format!("{v}|{y}")).collect();
        for w in self.base.neighbors(v)?.iter() {
            if w == v {
                return Err(Error::input("base", "base graph has a loop"));
            }
            let kappa = self.fiber(w)?.vertex_count();
            out.extend((0..kappa).map(|y| format!("{w}|{y}")));
        }
        Ok(out)
    }

    fn kind(&self) -> ProviderKind {
        ProviderKind::Product
    }
}

/// A connected, locally finite graph behind a memoizing neighbour oracle.
#[derive(Clone)]
pub struct GraphProvider {
    oracle: Arc<dyn NeighborOracle>,
    cache: Arc<RwLock<HashMap<String, Arc<Vec<String>>>>>,
    finite: Option<Arc<FiniteGraph>>,
    orientation: Option<OrientedTree>,
    description: String,
}

impl std::fmt::Debug for GraphProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GraphProvider({})", self.description)
    }
}

impl GraphProvider {
    pub fn custom(oracle: Arc<dyn NeighborOracle>, description: &str) -> Self {
        GraphProvider {
            oracle,
            cache: Arc::new(RwLock::new(HashMap::new())),
            finite: None,
            orientation: None,
            description: description.into(),
        }
    }

    pub fn finite(graph: FiniteGraph) -> Self {
        let mut p = Self::custom(Arc::new(FiniteOracle { graph: graph.clone() }), "finite graph");
        p.description = format!("finite graph on {} vertices", graph.vertex_count());
        p.finite = Some(Arc::new(graph));
        p
    }

    pub fn cayley(group: &GroupSpec) -> Result<Self> {
        if !group.is_symmetric() {
            return Err(Error::input("group", "Cayley graph needs a symmetric generating set"));
        }
        let desc = format!("Cayley graph of {}", group.description());
        let mut p = Self::custom(Arc::new(CayleyOracle { group: group.clone() }), &desc);
        if group.order().is_some() {
            let b = ball(&p, &p.base(), usize::MAX, DEFAULT_VERTEX_BUDGET)?;
            let mut g = FiniteGraph::new(b.graph.vertex_count());
            for (u, v) in b.graph.edges() {
                g.add_edge(u, v)?;
            }
            p.finite = Some(Arc::new(g));
        }
        Ok(p)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ty = v.get("type").and_then(Value::as_str).ok_or_else(|| Error::input("type", "missing provider type"))?;
        let degree = || -> Result<usize> {
            v.get("d").and_then(Value::as_u64).map(|d| d as usize).ok_or_else(|| Error::input("d", "missing degree `d`"))
        };
        match ty {
            "tree" => tree_graph(degree()?),
            "grandparent" => grandparent_graph(degree()?),
            "cayley" => GraphProvider::cayley(&GroupSpec::from_json(
                v.get("group").ok_or_else(|| Error::input("group", "missing group spec"))?,
            )?),
            "finite" => {
                let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::input("n", "missing vertex count"))? as usize;
                let edges: Vec<(usize, usize)> = serde_json::from_value(v.get("edges").cloned().unwrap_or(Value::Array(vec![])))
                    .map_err(|e| Error::input("edges", e.to_string()))?;
                Ok(GraphProvider::finite(FiniteGraph::from_edges(n, &edges)?))
            }
            "finite_table" | "free" | "free_product_cyclic" | "cyclic" => GraphProvider::cayley(&GroupSpec::from_json(v)?),
            other => Err(Error::input("type", format!("unknown provider type `{other}`"))),
        }
    }

    pub fn base(&self) -> String {
        self.oracle.base()
    }

    pub fn kind(&self) -> ProviderKind {
        self.oracle.kind()
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// The underlying finite graph, when the provider is finite.
    pub fn finite_graph(&self) -> Option<&FiniteGraph> {
        self.finite.as_deref()
    }

    /// Orientation data for trees and grandparent graphs.
    pub fn orientation(&self) -> Option<OrientedTree> {
        self.orientation
    }

    pub fn neighbors(&self, key: &str) -> Result<Arc<Vec<String>>> {
        if let Some(n) = self.cache.read().unwrap().get(key) {
            return Ok(n.clone());
        }
        let n = Arc::new(self.oracle.neighbors(key)?);
        self.cache.write().unwrap().insert(key.to_string(), n.clone());
        Ok(n)
    }
}

fn oriented(d: usize, long_edges: bool) -> GraphProvider {
    let tree = OrientedTree { degree: d };
    let mut p = GraphProvider::custom(Arc::new(TreeOracle { tree, long_edges }), "");
    p.description = if long_edges { format!("grandparent graph over the {d}-regular tree") } else { format!("{d}-regular tree") };
    p.orientation = Some(tree);
    p
}

/// The d-regular tree (d >= 2).
pub fn tree_graph(d: usize) -> Result<GraphProvider> {
    if d < 2 {
        return Err(Error::input("d", "tree degree must be >= 2"));
    }
    Ok(oriented(d, false))
}

/// The d-regular tree oriented towards a fixed end, with an extra edge
/// between every vertex and its grandparent (d >= 3).
pub fn grandparent_graph(d: usize) -> Result<GraphProvider> {
    if d < 3 {
        return Err(Error::input("d", "grandparent graph needs d >= 3"));
    }
    Ok(oriented(d, true))
}

/// Replaces every vertex `v` of `base` by the fiber graph `fibers(v)`; two
/// vertices over adjacent base vertices are always adjacent.
pub fn product_graph(base: GraphProvider, fibers: Arc<FiberFn>) -> Result<GraphProvider> {
    let oracle = ProductOracle { base: base.clone(), fibers, shape: Mutex::new(None) };
    oracle.fiber(&base.base())?;
    let mut p = GraphProvider::custom(Arc::new(oracle), "");
    p.description = format!("product over {}", base.description());
    if let Some(bg) = base.finite_graph() {
        let b = ball(&p, &p.base(), usize::MAX, DEFAULT_VERTEX_BUDGET)?;
        if b.graph.vertex_count() > 0 && bg.is_connected() {
            p.finite = Some(Arc::new(b.graph.clone()));
        }
    }
    Ok(p)
}

/// Finite ball around a provider vertex.
#[derive(Clone, Debug)]
pub struct EmbeddedBall {
    pub graph: FiniteGraph,
    pub keys: Vec<String>,
    pub index: HashMap<String, usize>,
    pub center: usize,
    pub radius: usize,
    /// Distance of each ball vertex from the center.
    pub depth: Vec<usize>,
}

impl EmbeddedBall {
    pub fn vertex(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Vertices whose distance to the boundary sphere exceeds `margin`.
    pub fn core(&self, margin: usize) -> Vec<usize> {
        (0..self.keys.len()).filter(|&v| self.depth[v] + margin <= self.radius).collect()
    }
}

/// BFS ball of the given radius with induced edges. `radius = usize::MAX`
/// explores the whole component (finite providers only).
pub fn ball(p: &GraphProvider, center: &str, radius: usize, budget: usize) -> Result<EmbeddedBall> {
    let mut keys = vec![center.to_string()];
    let mut index = HashMap::from([(center.to_string(), 0usize)]);
    let mut depth = vec![0usize];
    let mut q = VecDeque::from([0usize]);
    while let Some(v) = q.pop_front() {
        if depth[v] >= radius {
            continue;
        }
        for w in p.neighbors(&keys[v].clone())?.iter() {
            if !index.contains_key(w) {
                if keys.len() >= budget {
                    return Err(Error::budget("budget-vertices", budget));
                }
                index.insert(w.clone(), keys.len());
                keys.push(w.clone());
                depth.push(depth[v] + 1);
                q.push_back(keys.len() - 1);
            }
        }
    }
    let mut graph = FiniteGraph::new(keys.len());
    for (v, key) in keys.iter().enumerate() {
        for w in p.neighbors(key)?.iter() {
            if let Some(&j) = index.get(w) {
                graph.add_edge(v, j)?;
            }
        }
    }
    let radius = if radius == usize::MAX { depth.iter().copied().max().unwrap_or(0) } else { radius };
    Ok(EmbeddedBall { graph, keys, index, center: 0, radius, depth })
}

/// Graph distance, or `None` when it exceeds `cap`.
pub fn distance(p: &GraphProvider, u: &str, v: &str, cap: usize) -> Result<Option<usize>> {
    if u == v {
        return Ok(Some(0));
    }
    let mut seen = HashSet::from([u.to_string()]);
    let mut frontier = vec![u.to_string()];
    for d in 1..=cap {
        let mut next = Vec::new();
        for x in &frontier {
            for y in p.neighbors(x)?.iter() {
                if y == v {
                    return Ok(Some(d));
                }
                if seen.insert(y.clone()) {
                    if seen.len() > DEFAULT_VERTEX_BUDGET {
                        return Err(Error::budget("budget-vertices", DEFAULT_VERTEX_BUDGET));
                    }
                    next.push(y.clone());
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_ball_sizes() {
        let t = tree_graph(3).unwrap();
        assert_eq!(ball(&t, &t.base(), 0, 100).unwrap().graph.vertex_count(), 1);
        let b = ball(&t, &t.base(), 2, 100).unwrap();
        assert_eq!(b.graph.vertex_count(), 10);
        assert_eq!(b.graph.edge_count(), 9);
    }

    #[test]
    fn grandparent_degree_and_ball() {
        let g = grandparent_graph(3).unwrap();
        for key in ["0:", "0:1", "3:1.0", "2:"] {
            assert_eq!(g.neighbors(key).unwrap().len(), 8);
        }
        let b = ball(&g, "0:", 1, 100).unwrap();
        assert_eq!(b.graph.vertex_count(), 9);
    }

    #[test]
    fn oriented_keys_are_canonical() {
        let t = OrientedTree { degree: 3 };
        assert_eq!(t.parent("1:1").unwrap(), "1:");
        assert_eq!(t.parent("0:").unwrap(), "1:");
        assert_eq!(t.children("1:").unwrap(), vec!["0:".to_string(), "1:1".to_string()]);
        assert!(t.parse("1:0").is_err());
        for k in ["0:", "2:1.0.1", "5:"] {
            for c in t.children(k).unwrap() {
                assert_eq!(t.parent(&c).unwrap(), k);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let t = tree_graph(3).unwrap();
        assert_eq!(ball(&t, &t.base(), 5, 20).unwrap_err(), Error::budget("budget-vertices", 20));
    }
}
