//! Minimal projections of the finite dimensional algebras `Mor(k,k)`, their
//! left and right dimensions, equivalence classes and conjugate solutions.

use super::mor::{least_squares, MorContext, MorMatrix};
use super::orbits::OrbitPartition;
use crate::error::{Error, Result};
use crate::hommat::decode;
use crate::Rational;
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct SpectralConfig {
    pub tol: f64,
    pub seed: u64,
    pub retries: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { tol: 1e-9, seed: 0, retries: 4 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalProjection {
    pub k: usize,
    #[serde(skip)]
    pub matrix: MorMatrix<f64>,
    /// Orbits of the first and last coordinates.
    pub block: (usize, usize),
    pub d_left: u64,
    pub d_right: u64,
    /// Largest deviation seen while validating.
    pub residual: f64,
    /// Seed of the random element that produced it.
    pub seed: u64,
}

impl MinimalProjection {
    pub fn rho(&self) -> Rational {
        Rational::new(BigInt::from(self.d_right), BigInt::from(self.d_left))
    }

    pub fn rank(&self) -> usize {
        (0..self.matrix.rows()).map(|r| *self.matrix.get(r, r)).sum::<f64>().round() as usize
    }
}

fn frob(m: &MorMatrix<f64>) -> f64 {
    m.data.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn numerical_rank(mats: &[MorMatrix<f64>], tol: f64) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let k = mats.len();
    let g = DMatrix::from_fn(k, k, |a, b| mats[a].data.iter().zip(&mats[b].data).map(|(x, y)| x * y).sum::<f64>());
    let scale = g.diagonal().iter().copied().fold(0.0, f64::max).max(1.0);
    SymmetricEigen::new(g).eigenvalues.iter().filter(|&&l| l > tol.sqrt() * scale).count()
}

/// Eigenprojections of a random self-adjoint element of `Mor(k,k)`,
/// validated to be minimal projections of the algebra.
pub fn minimal_projections(
    ctx: &MorContext,
    k: usize,
    orbits: &OrbitPartition,
    cfg: &SpectralConfig,
) -> Result<Vec<MinimalProjection>> {
    let mats: Vec<MorMatrix<f64>> = ctx.basis(k, k)?.matrices();
    let nv = ctx.nv();
    let mut worst = f64::INFINITY;
    for attempt in 0..=cfg.retries {
        let seed = cfg.seed.wrapping_add(attempt as u64);
        match try_decompose(&mats, k, nv, orbits, cfg.tol, seed) {
            Ok(ps) => return Ok(ps),
            Err(r) => worst = worst.min(r),
        }
    }
    Err(Error::Numerical(format!("minimal projection decomposition of Mor({k},{k}) failed, best residual {worst:.3e}")))
}

fn try_decompose(
    mats: &[MorMatrix<f64>],
    k: usize,
    nv: usize,
    orbits: &OrbitPartition,
    tol: f64,
    seed: u64,
) -> std::result::Result<Vec<MinimalProjection>, f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = nv.pow(k as u32 + 1);
    let mut x = DMatrix::<f64>::zeros(dim, dim);
    for m in mats {
        let c: f64 = rng.gen_range(-1.0..1.0);
        let d = m.to_dmatrix();
        x += (&d + d.transpose()) * c;
    }
    let eig = SymmetricEigen::new(x);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if (eig.eigenvalues[i] - eig.eigenvalues[*g.last().unwrap()]).abs() < 1e-7 * scale => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let check = tol * dim as f64;
    let mut out = Vec::new();
    for g in groups {
        let cols = eig.eigenvectors.select_columns(&g);
        let e = &cols * cols.transpose();
        let p = MorMatrix::from_dmatrix(k, k, nv, &e);
        let (_, res) = least_squares(mats, &p);
        let corner: Vec<MorMatrix<f64>> =
            mats.iter().map(|m| p.mul(m).and_then(|t| t.mul(&p)).expect("square arities")).collect();
        let rank = numerical_rank(&corner, tol);
        if res > check || rank != 1 {
            return Err(if res > check { res } else { f64::INFINITY });
        }
        let (block, dl, dr, dev) = dimensions(&p, orbits)?;
        if dev > check {
            return Err(dev);
        }
        out.push(MinimalProjection { k, matrix: p, block, d_left: dl, d_right: dr, residual: res.max(dev), seed });
    }
    Ok(out)
}

/// Block and rounded partial traces of a projection; also returns the worst
/// deviation from constancy on orbits and from integrality.
fn dimensions(p: &MorMatrix<f64>, orbits: &OrbitPartition) -> std::result::Result<((usize, usize), u64, u64, f64), f64> {
    let k = p.n;
    let mut first = None;
    let mut last = None;
    for r in 0..p.rows() {
        if p.get(r, r).abs() > 1e-8 {
            let i = decode(r, p.nv, k + 1);
            let (a, b) = (orbits.orbit_of[i[0]], orbits.orbit_of[i[k]]);
            if first.get_or_insert(a) != &a || last.get_or_insert(b) != &b {
                return Err(f64::INFINITY);
            }
        }
    }
    let (a, b) = (first.ok_or(f64::INFINITY)?, last.ok_or(f64::INFINITY)?);
    let mut dev: f64 = 0.0;
    let mut read = |tr: Vec<f64>, orb: usize| {
        let vals: Vec<f64> = orbits.members(orb).iter().map(|&v| tr[v]).collect();
        let d = vals[0].round();
        for v in vals {
            dev = dev.max((v - d).abs());
        }
        d as u64
    };
    let dl = read(p.partial_trace(true), a);
    let dr = read(p.partial_trace(false), b);
    Ok(((a, b), dl, dr, dev))
}

/// `P Mor(k,k') Q` is nonzero.
pub fn equivalent(ctx: &MorContext, p: &MinimalProjection, q: &MinimalProjection, tol: f64) -> Result<bool> {
    if p.block != q.block {
        return Ok(false);
    }
    for m in ctx.basis(p.k, q.k)?.matrices::<f64>() {
        if frob(&p.matrix.mul(&m)?.mul(&q.matrix)?) > tol.sqrt() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Irreducible objects up to arity `k_top`, one minimal projection each,
/// represented at the smallest arity where they occur.
#[derive(Clone, Debug)]
pub struct IrreducibleSet {
    pub reps: Vec<MinimalProjection>,
    /// Every minimal projection found, with the index of its class.
    pub all: Vec<(MinimalProjection, usize)>,
}

pub fn irreducibles(ctx: &MorContext, k_top: usize, orbits: &OrbitPartition, cfg: &SpectralConfig) -> Result<IrreducibleSet> {
    let mut reps: Vec<MinimalProjection> = Vec::new();
    let mut all = Vec::new();
    for k in 0..=k_top {
        for p in minimal_projections(ctx, k, orbits, cfg)? {
            let mut class = None;
            for (c, r) in reps.iter().enumerate() {
                if equivalent(ctx, &p, r, cfg.tol)? {
                    class = Some(c);
                    break;
                }
            }
            let c = match class {
                Some(c) => c,
                None => {
                    reps.push(p.clone());
                    reps.len() - 1
                }
            };
            all.push((p, c));
        }
    }
    Ok(IrreducibleSet { reps, all })
}

/// The solutions `s, t` of the conjugate equations built from `P`.
pub fn conjugate_solutions(p: &MorMatrix<f64>) -> (MorMatrix<f64>, MorMatrix<f64>) {
    let (k, nv) = (p.n, p.nv);
    let mut s = MorMatrix::zeros(2 * k, 0, nv);
    let mut t = MorMatrix::zeros(2 * k, 0, nv);
    for r in 0..s.rows() {
        let i = decode(r, nv, 2 * k + 1);
        if i[0] != i[2 * k] {
            continue;
        }
        let front: Vec<usize> = i[..=k].to_vec();
        let back_rev: Vec<usize> = i[k..].iter().rev().copied().collect();
        let back: Vec<usize> = i[k..].to_vec();
        let front_rev: Vec<usize> = i[..=k].iter().rev().copied().collect();
        s.set(r, i[0], *p.entry(&front, &back_rev));
        t.set(r, i[0], *p.entry(&back, &front_rev));
    }
    (s, t)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateReport {
    /// `max |(s* x 1)(1 x t) - P|`.
    pub first: f64,
    /// `max |(t* x 1)(1 x s) - P~|`.
    pub second: f64,
    pub trace_left: f64,
    pub trace_right: f64,
    pub d_left: u64,
    pub d_right: u64,
}

/// Checks both conjugate equations and the trace formulas for `P`.
pub fn check_conjugate(p: &MinimalProjection) -> Result<ConjugateReport> {
    let m = &p.matrix;
    let (k, nv) = (m.n, m.nv);
    let (s, t) = conjugate_solutions(m);
    let one = MorMatrix::<f64>::identity(k, nv);
    let lhs1 = s.adjoint().rel_tensor(&one).mul(&one.rel_tensor(&t))?;
    let lhs2 = t.adjoint().rel_tensor(&one).mul(&one.rel_tensor(&s))?;
    let first = lhs1.sub(m).max_abs();
    let second = lhs2.sub(&m.tilde()).max_abs();
    let left = s.adjoint().mul(&m.rel_tensor(&one))?.mul(&s)?;
    let right = t.adjoint().mul(&one.rel_tensor(m))?.mul(&t)?;
    let i = (0..nv).find(|&v| m.partial_trace(true)[v].abs() > 1e-8).unwrap_or(0);
    let j = (0..nv).find(|&v| m.partial_trace(false)[v].abs() > 1e-8).unwrap_or(0);
    Ok(ConjugateReport {
        first,
        second,
        trace_left: *left.get(i, i),
        trace_right: *right.get(j, j),
        d_left: p.d_left,
        d_right: p.d_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::FiniteGraph;
    use crate::morspace::{quantum_orbits, Category, ClosureConfig};

    fn setup(g: &FiniteGraph, cat: Category) -> (MorContext, OrbitPartition) {
        let ctx = MorContext::new(g, cat, &ClosureConfig { max_size: 4, ..Default::default() }).unwrap();
        let o = quantum_orbits(&ctx);
        (ctx, o)
    }

    #[test]
    fn c4_all_mor11_dimensions() {
        let (ctx, o) = setup(&FiniteGraph::cycle(4), Category::All);
        let ps = minimal_projections(&ctx, 1, &o, &SpectralConfig::default()).unwrap();
        let mut dims: Vec<(u64, u64)> = ps.iter().map(|p| (p.d_left, p.d_right)).collect();
        dims.sort();
        assert_eq!(dims, vec![(1, 1), (1, 1), (2, 2)]);
    }

    #[test]
    fn identity_is_minimal_in_mor00() {
        let (ctx, o) = setup(&FiniteGraph::cycle(4), Category::Planar);
        let ps = minimal_projections(&ctx, 0, &o, &SpectralConfig::default()).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].rho(), Rational::from_integer(1.into()));
    }

    #[test]
    fn conjugate_equations_on_p3() {
        let (ctx, o) = setup(&FiniteGraph::path(3), Category::Planar);
        for k in 0..=2 {
            for p in minimal_projections(&ctx, k, &o, &SpectralConfig::default()).unwrap() {
                let r = check_conjugate(&p).unwrap();
                assert!(r.first < 1e-9 && r.second < 1e-9, "{r:?}");
                assert!((r.trace_left - p.d_left as f64).abs() < 1e-9);
                assert!((r.trace_right - p.d_right as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn k4_irreducibles_are_the_s4_plus_ones() {
        // one orbit: trivial, then the nontrivial part of Mor(1,1), and two
        // more irreducibles in Mor(2,2)
        let (ctx, o) = setup(&FiniteGraph::complete(4), Category::Planar);
        let irr = irreducibles(&ctx, 2, &o, &SpectralConfig::default()).unwrap();
        let ks: Vec<usize> = irr.reps.iter().map(|p| p.k).collect();
        assert_eq!(ks.iter().filter(|&&k| k == 0).count(), 1);
        assert!(irr.reps.len() >= 3, "{ks:?}");
    }
}
