use super::mor::MorContext;
use serde::Serialize;

/// Whether an orbit partition is final or only separated up to some depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    DepthBounded { depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    /// Orbit id per vertex, numbered by first occurrence.
    pub orbit_of: Vec<usize>,
    pub exactness: Exactness,
}

impl OrbitPartition {
    /// Groups vertices by equal signatures; ids follow the smallest member.
    pub fn from_signatures<T: PartialEq>(sigs: &[T], exactness: Exactness) -> Self {
        let mut reps: Vec<usize> = Vec::new();
        let mut orbit_of = Vec::with_capacity(sigs.len());
        for (v, s) in sigs.iter().enumerate() {
            match reps.iter().position(|&r| sigs[r] == *s) {
                Some(id) => orbit_of.push(id),
                None => {
                    orbit_of.push(reps.len());
                    reps.push(v);
                }
            }
        }
        OrbitPartition { orbit_of, exactness }
    }

    pub fn count(&self) -> usize {
        self.orbit_of.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn members(&self, a: usize) -> Vec<usize> {
        (0..self.orbit_of.len()).filter(|&v| self.orbit_of[v] == a).collect()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        (0..self.count()).map(|a| self.members(a)).collect()
    }

    pub fn same(&self, u: usize, v: usize) -> bool {
        self.orbit_of[u] == self.orbit_of[v]
    }

    /// True if every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &OrbitPartition) -> bool {
        let n = self.orbit_of.len();
        (0..n).all(|u| (0..n).all(|v| !self.same(u, v) || other.same(u, v)))
    }
}

/// Quantum orbits of a finite graph: vertices with equal values under every
/// generated element of `Mor(0,0)`.
pub fn quantum_orbits(ctx: &MorContext) -> OrbitPartition {
    let sp = ctx.closure.space(0);
    let sigs: Vec<Vec<i128>> = (0..ctx.nv()).map(|v| sp.basis.iter().map(|b| sp.value(b, &[v], ctx.nv())).collect()).collect();
    let exactness = if ctx.closure.stable { Exactness::Exact } else { Exactness::DepthBounded { depth: ctx.closure.rounds } };
    OrbitPartition::from_signatures(&sigs, exactness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::FiniteGraph;
    use crate::morspace::{Category, ClosureConfig};

    fn orbits(g: &FiniteGraph, cat: Category) -> Vec<usize> {
        let ctx = MorContext::new(g, cat, &ClosureConfig { max_size: 3, ..Default::default() }).unwrap();
        quantum_orbits(&ctx).orbit_of
    }

    #[test]
    fn known_partitions() {
        assert_eq!(orbits(&FiniteGraph::path(3), Category::Planar), vec![0, 1, 0]);
        assert_eq!(orbits(&FiniteGraph::cycle(4), Category::Planar), vec![0; 4]);
        assert_eq!(orbits(&FiniteGraph::star(3), Category::All), vec![0, 1, 1, 1]);
    }
}
