//! Commutative `Mor(1,1)`: atoms of the pair algebra, their dimensions, and
//! the modular function obtained from them.

use super::mor::MorContext;
use crate::error::{Error, Result};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// A minimal projection of `Mor(1,1)`: the indicator of a set of pairs.
#[derive(Clone, Debug, Serialize)]
pub struct PairClass {
    pub pairs: Vec<(usize, usize)>,
    pub d_left: u64,
    pub d_right: u64,
}

impl PairClass {
    pub fn rho(&self) -> Rational {
        Rational::new(BigInt::from(self.d_right), BigInt::from(self.d_left))
    }
}

/// Groups pairs by their value signature and counts, for each class, the
/// partners of a vertex on either side. `counted` says whose counts are
/// trustworthy (away from a window boundary).
pub fn pair_classes<S: Ord + Clone>(
    pairs: &[((usize, usize), S)],
    counted: impl Fn(usize) -> bool,
) -> Result<Vec<PairClass>> {
    let mut by_sig: BTreeMap<S, Vec<(usize, usize)>> = BTreeMap::new();
    for (p, s) in pairs {
        by_sig.entry(s.clone()).or_default().push(*p);
    }
    let mut out = Vec::new();
    for (_, ps) in by_sig {
        let mut left: BTreeMap<usize, u64> = BTreeMap::new();
        let mut right: BTreeMap<usize, u64> = BTreeMap::new();
        for &(i, j) in &ps {
            *left.entry(i).or_default() += 1;
            *right.entry(j).or_default() += 1;
        }
        let pick = |m: &BTreeMap<usize, u64>, side: &str| -> Result<u64> {
            let vals: Vec<u64> = m.iter().filter(|(v, _)| counted(**v)).map(|(_, c)| *c).collect();
            match vals.first() {
                None => Err(Error::Guard(format!("pair class without a guarded {side} vertex"))),
                Some(&c) if vals.iter().all(|&x| x == c) => Ok(c),
                Some(_) => Err(Error::Numerical(format!("{side} trace of a pair class is not constant"))),
            }
        };
        out.push(PairClass { d_left: pick(&left, "left")?, d_right: pick(&right, "right")?, pairs: ps });
    }
    out.sort_by_key(|c| c.pairs[0]);
    Ok(out)
}

/// Pair classes of a finite graph from the generated `Mor(1,1)`.
pub fn finite_pair_classes(ctx: &MorContext) -> Result<Vec<PairClass>> {
    let sp = ctx.closure.space(2);
    let nv = ctx.nv();
    let mut pairs = Vec::new();
    for i in 0..nv {
        for j in 0..nv {
            let sig: Vec<i128> = sp.basis.iter().map(|b| sp.value(b, &[i, j], nv)).collect();
            if sig.iter().any(|&x| x != 0) {
                pairs.push(((i, j), sig));
            }
        }
    }
    pair_classes(&pairs, |_| true)
}

/// Positive function on vertices with `mu_j / mu_i = rho(W)` for every pair
/// `(i, j)` in a class `W`, normalised at the base vertex.
#[derive(Clone, Debug, Serialize)]
pub struct MuAssignment {
    pub base: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub mu: Vec<Option<Rational>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Option<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.as_ref().map(|r| r.to_string()))?;
    }
    seq.end()
}

impl MuAssignment {
    pub fn ratio(&self, i: usize, j: usize) -> Option<Rational> {
        Some(self.mu[j].clone()? / self.mu[i].clone()?)
    }

    pub fn is_constant(&self) -> bool {
        self.mu.iter().flatten().all(|m| m.is_one())
    }

    /// Whether `mu` takes one value on each orbit, among the vertices kept
    /// by `mask` (all when `None`). This is unimodularity: the modular
    /// element only compares `mu` within orbits.
    pub fn constant_on_orbits(&self, orbit_of: &[usize], mask: Option<&[bool]>) -> bool {
        let mut seen: BTreeMap<usize, &Rational> = BTreeMap::new();
        for (v, m) in self.mu.iter().enumerate() {
            if mask.is_some_and(|k| !k[v]) {
                continue;
            }
            if let Some(m) = m {
                if *seen.entry(orbit_of[v]).or_insert(m) != m {
                    return false;
                }
            }
        }
        true
    }
}

/// Propagates `mu` from `base` along the pairs of all classes and checks the
/// cocycle condition on every pair.
pub fn mu_assignment(nv: usize, base: usize, classes: &[PairClass]) -> Result<MuAssignment> {
    let mut adj: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nv];
    for c in classes {
        let r = c.rho();
        for &(i, j) in &c.pairs {
            adj[i].push((j, r.clone()));
        }
    }
    let mut mu: Vec<Option<Rational>> = vec![None; nv];
    mu[base] = Some(Rational::one());
    let mut q = VecDeque::from([base]);
    while let Some(i) = q.pop_front() {
        let mi = mu[i].clone().unwrap();
        for (j, r) in &adj[i] {
            if mu[*j].is_none() {
                mu[*j] = Some(&mi * r);
                q.push_back(*j);
            }
        }
    }
    for c in classes {
        let r = c.rho();
        for &(i, j) in &c.pairs {
            if let (Some(a), Some(b)) = (&mu[i], &mu[j]) {
                if b / a != r {
                    return Err(Error::Numerical(format!("modular cocycle fails on pair ({i},{j})")));
                }
            }
        }
    }
    Ok(MuAssignment { base, mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::FiniteGraph;
    use crate::morspace::{Category, ClosureConfig};

    #[test]
    fn c4_pair_classes_and_constant_mu() {
        let ctx = MorContext::new(&FiniteGraph::cycle(4), Category::All, &ClosureConfig { max_size: 3, ..Default::default() })
            .unwrap();
        let cls = finite_pair_classes(&ctx).unwrap();
        let mut dims: Vec<(u64, u64)> = cls.iter().map(|c| (c.d_left, c.d_right)).collect();
        dims.sort();
        assert_eq!(dims, vec![(1, 1), (1, 1), (2, 2)]);
        let mu = mu_assignment(4, 0, &cls).unwrap();
        assert!(mu.is_constant());
    }

    #[test]
    fn cocycle_violation_is_reported() {
        let bad = vec![
            PairClass { pairs: vec![(0, 1)], d_left: 1, d_right: 2 },
            PairClass { pairs: vec![(1, 0)], d_left: 1, d_right: 1 },
        ];
        assert!(mu_assignment(2, 0, &bad).is_err());
    }
}
