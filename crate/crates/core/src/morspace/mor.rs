//! Dense bimodular matrices on `I^{n+1} x I^{m+1}` and spans of them.

use super::boundary::{BoundaryClosure, Category, ClosureConfig};
use crate::error::{Error, Result};
use crate::graphs::FiniteGraph;
use crate::hommat::{decode, encode};
use crate::scalar::Field;
use nalgebra::DMatrix;

/// Matrix with rows indexed by `I^{n+1}` and columns by `I^{m+1}`, row major,
/// tuples encoded with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct MorMatrix<F> {
    pub n: usize,
    pub m: usize,
    pub nv: usize,
    pub data: Vec<F>,
}

/// Boundary sequence of the entry `(i, j)`, assuming `i_0 = j_0` and
/// `i_n = j_m`.
pub fn boundary_of(i: &[usize], j: &[usize]) -> Vec<usize> {
    let (n, m) = (i.len() - 1, j.len() - 1);
    if n == 0 && m == 0 {
        return vec![i[0]];
    }
    if m == 0 {
        return i[..n].to_vec();
    }
    let mut b = i.to_vec();
    b.extend(j[1..m].iter().rev());
    b
}

impl<F: Field> MorMatrix<F> {
    pub fn zeros(n: usize, m: usize, nv: usize) -> Self {
        let len = nv.pow(n as u32 + 1) * nv.pow(m as u32 + 1);
        MorMatrix { n, m, nv, data: vec![F::zero(); len] }
    }

    pub fn rows(&self) -> usize {
        self.nv.pow(self.n as u32 + 1)
    }

    pub fn cols(&self) -> usize {
        self.nv.pow(self.m as u32 + 1)
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        let cols = self.cols();
        self.data[r * cols + c] = v;
    }

    pub fn entry(&self, i: &[usize], j: &[usize]) -> &F {
        self.get(encode(i, self.nv), encode(j, self.nv))
    }

    /// Builds the bimodular matrix whose nonzero entries are read off a
    /// boundary function.
    pub fn from_boundary(n: usize, m: usize, nv: usize, f: impl Fn(&[usize]) -> F) -> Self {
        let mut t = Self::zeros(n, m, nv);
        for r in 0..t.rows() {
            let i = decode(r, nv, n + 1);
            for c in 0..t.cols() {
                let j = decode(c, nv, m + 1);
                if i[0] == j[0] && i[n] == j[m] {
                    t.set(r, c, f(&boundary_of(&i, &j)));
                }
            }
        }
        t
    }

    pub fn identity(k: usize, nv: usize) -> Self {
        let mut t = Self::zeros(k, k, nv);
        for r in 0..t.rows() {
            t.set(r, r, F::one());
        }
        t
    }

    /// Diagonal matrix from a function of the row tuple.
    pub fn diagonal(k: usize, nv: usize, f: impl Fn(&[usize]) -> F) -> Self {
        let mut t = Self::zeros(k, k, nv);
        for r in 0..t.rows() {
            t.set(r, r, f(&decode(r, nv, k + 1)));
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.m != o.n || self.nv != o.nv {
            return Err(Error::input("matrix", "arity mismatch in product"));
        }
        let mut t = Self::zeros(self.n, o.m, self.nv);
        let (inner, oc) = (self.cols(), o.cols());
        for r in 0..self.rows() {
            for k in 0..inner {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..oc {
                    let b = o.get(k, c);
                    if !b.is_zero() {
                        let idx = r * oc + c;
                        t.data[idx] = t.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(t)
    }

    /// Adjoint; all scalars here are real.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.m, self.n, self.nv);
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// `T~_{ij} = T_{rev j, rev i}`.
    pub fn tilde(&self) -> Self {
        let nv = self.nv;
        let mut t = Self::zeros(self.m, self.n, nv);
        for r in 0..t.rows() {
            let mut i = decode(r, nv, self.m + 1);
            i.reverse();
            for c in 0..t.cols() {
                let mut j = decode(c, nv, self.n + 1);
                j.reverse();
                t.set(r, c, self.entry(&j, &i).clone());
            }
        }
        t
    }

    /// Tensor product over `I`: the last row and column coordinates of
    /// `self` are identified with the first ones of `o`.
    pub fn rel_tensor(&self, o: &Self) -> Self {
        let nv = self.nv;
        let (n, m) = (self.n + o.n, self.m + o.m);
        let mut t = Self::zeros(n, m, nv);
        for r1 in 0..self.rows() {
            let i = decode(r1, nv, self.n + 1);
            for c1 in 0..self.cols() {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                let j = decode(c1, nv, self.m + 1);
                for r2 in 0..o.rows() {
                    let k = decode(r2, nv, o.n + 1);
                    if k[0] != i[self.n] {
                        continue;
                    }
                    for c2 in 0..o.cols() {
                        let b = o.get(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        let l = decode(c2, nv, o.m + 1);
                        if l[0] != j[self.m] {
                            continue;
                        }
                        let mut ri = i.clone();
                        ri.extend_from_slice(&k[1..]);
                        let mut ci = j.clone();
                        ci.extend_from_slice(&l[1..]);
                        t.set(encode(&ri, nv), encode(&ci, nv), a.clone() * b.clone());
                    }
                }
            }
        }
        t
    }

    /// Sum of diagonal entries grouped by the first (left) or last (right)
    /// coordinate. Requires `n = m`.
    pub fn partial_trace(&self, left: bool) -> Vec<F> {
        assert_eq!(self.n, self.m, "partial trace needs a square arity");
        let mut out = vec![F::zero(); self.nv];
        for r in 0..self.rows() {
            let i = decode(r, self.nv, self.n + 1);
            let v = if left { i[0] } else { i[self.n] };
            out[v] = out[v].clone() + self.get(r, r).clone();
        }
        out
    }

    pub fn is_bimodular(&self) -> bool {
        (0..self.rows()).all(|r| {
            let i = decode(r, self.nv, self.n + 1);
            (0..self.cols()).all(|c| {
                let j = decode(c, self.nv, self.m + 1);
                (i[0] == j[0] && i[self.n] == j[self.m]) || self.get(r, c).is_zero()
            })
        })
    }

    pub fn scale(&self, s: &F) -> Self {
        MorMatrix { data: self.data.iter().map(|x| x.clone() * s.clone()).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        MorMatrix { data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        MorMatrix { data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(), ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.as_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> MorMatrix<f64> {
        MorMatrix { n: self.n, m: self.m, nv: self.nv, data: self.data.iter().map(|x| x.as_f64()).collect() }
    }
}

impl MorMatrix<f64> {
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows(), self.cols(), &self.data)
    }

    pub fn from_dmatrix(n: usize, m: usize, nv: usize, d: &DMatrix<f64>) -> Self {
        let mut t = Self::zeros(n, m, nv);
        for r in 0..d.nrows() {
            for c in 0..d.ncols() {
                t.set(r, c, d[(r, c)]);
            }
        }
        t
    }
}

/// Basis of `Mor(n, m)` for a finite target, stored as boundary functions.
#[derive(Clone, Debug)]
pub struct MorBasis {
    pub category: Category,
    pub n: usize,
    pub m: usize,
    pub nv: usize,
    /// Full boundary functions on `I^{max(n+m,1)}`.
    pub elements: Vec<Vec<i128>>,
    pub stable: bool,
    pub rounds: usize,
}

impl MorBasis {
    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix<F: Field>(&self, idx: usize) -> MorMatrix<F> {
        let f = &self.elements[idx];
        MorMatrix::from_boundary(self.n, self.m, self.nv, |b| F::from_i128(f[encode(b, self.nv)]))
    }

    pub fn matrices<F: Field>(&self) -> Vec<MorMatrix<F>> {
        (0..self.rank()).map(|i| self.matrix(i)).collect()
    }
}

/// Closure of `Mor` spaces for a finite graph, shared by all arities up to
/// the configured boundary size.
#[derive(Clone, Debug)]
pub struct MorContext {
    pub graph: FiniteGraph,
    pub closure: BoundaryClosure,
}

impl MorContext {
    pub fn new(graph: &FiniteGraph, category: Category, cfg: &ClosureConfig) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::input("graph", "target graph must be connected"));
        }
        let closure = BoundaryClosure::generate(graph, category, cfg)?;
        Ok(MorContext { graph: graph.clone(), closure })
    }

    pub fn nv(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn max_size(&self) -> usize {
        self.closure.spaces.len() - 1
    }

    pub fn basis(&self, n: usize, m: usize) -> Result<MorBasis> {
        let size = (n + m).max(1);
        if size > self.max_size() {
            return Err(Error::budget("closure boundary size", self.max_size()));
        }
        let sp = self.closure.space(size);
        Ok(MorBasis {
            category: self.closure.category,
            n,
            m,
            nv: self.nv(),
            elements: sp.basis.iter().map(|v| sp.expand(v)).collect(),
            stable: self.closure.stable,
            rounds: self.closure.rounds,
        })
    }

    /// Coefficients expressing `t` in the basis of its arity, or the
    /// residual norm when it is not in the span.
    pub fn coordinates(&self, t: &MorMatrix<f64>) -> Result<(Vec<f64>, f64)> {
        let b = self.basis(t.n, t.m)?;
        let mats: Vec<MorMatrix<f64>> = b.matrices();
        Ok(least_squares(&mats, t))
    }
}

/// Least squares fit of `t` by the span of `mats`; returns the coefficients
/// and the Frobenius norm of the residual.
pub fn least_squares(mats: &[MorMatrix<f64>], t: &MorMatrix<f64>) -> (Vec<f64>, f64) {
    if mats.is_empty() {
        return (Vec::new(), t.data.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    let k = mats.len();
    let gram = DMatrix::from_fn(k, k, |a, b| mats[a].data.iter().zip(&mats[b].data).map(|(x, y)| x * y).sum());
    let rhs = nalgebra::DVector::from_fn(k, |a, _| mats[a].data.iter().zip(&t.data).map(|(x, y)| x * y).sum());
    let c = gram
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map(|v| v.iter().copied().collect::<Vec<_>>())
        .unwrap_or_else(|_| vec![0.0; k]);
    let mut res = t.clone();
    for (a, m) in mats.iter().enumerate() {
        for (x, y) in res.data.iter_mut().zip(&m.data) {
            *x -= c[a] * y;
        }
    }
    (c, res.data.iter().map(|x| x * x).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: &FiniteGraph, cat: Category) -> MorContext {
        MorContext::new(g, cat, &ClosureConfig { max_size: 4, ..Default::default() }).unwrap()
    }

    #[test]
    fn generated_matrices_are_bimodular_and_closed() {
        let c = ctx(&FiniteGraph::cycle(4), Category::Planar);
        let b11 = c.basis(1, 1).unwrap();
        let b12 = c.basis(1, 2).unwrap();
        let b21 = c.basis(2, 1).unwrap();
        for t in b12.matrices::<f64>() {
            assert!(t.is_bimodular());
            assert!(c.coordinates(&t.adjoint()).unwrap().1 < 1e-9);
            assert!(c.coordinates(&t.tilde()).unwrap().1 < 1e-9);
        }
        for t in b12.matrices::<f64>() {
            for s in b21.matrices::<f64>() {
                assert!(c.coordinates(&t.mul(&s).unwrap()).unwrap().1 < 1e-9);
            }
        }
        for t in b11.matrices::<f64>() {
            for s in b11.matrices::<f64>() {
                assert!(c.coordinates(&t.rel_tensor(&s)).unwrap().1 < 1e-9);
            }
        }
    }

    #[test]
    fn partial_traces_land_in_mor00() {
        let c = ctx(&FiniteGraph::path(3), Category::Planar);
        for t in c.basis(2, 2).unwrap().matrices::<f64>() {
            for left in [true, false] {
                let tr = t.partial_trace(left);
                let d = MorMatrix::diagonal(0, 3, |i| tr[i[0]]);
                assert!(c.coordinates(&d).unwrap().1 < 1e-9);
            }
        }
    }

    #[test]
    fn identity_and_tilde_shapes() {
        let id: MorMatrix<f64> = MorMatrix::identity(1, 3);
        assert_eq!(id.tilde(), id);
        let c = ctx(&FiniteGraph::cycle(4), Category::All);
        assert_eq!(c.basis(0, 0).unwrap().rank(), 1);
        assert_eq!(c.basis(1, 1).unwrap().rank(), 3);
        assert!(c.coordinates(&MorMatrix::identity(1, 4)).unwrap().1 < 1e-9);
    }
}
