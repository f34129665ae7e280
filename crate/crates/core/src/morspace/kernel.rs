//! Reproducing kernels of `Mor(N,0)` restricted to one quantum orbit.
//!
//! For tuples `I, J` of length `N+1` that close up (`I_0 = I_N`), the value
//! is `sum_V V(I) V(J)` over an orthonormal basis of the restricted space,
//! with the inner product taken over tuples through one base vertex.

use super::mor::MorContext;
use super::orbits::OrbitPartition;
use crate::error::{Error, Result};
use crate::hommat::{decode, encode};
use crate::linalg::{inverse, Echelon};
use crate::scalar::{Field, Fp};

#[derive(Clone, Debug)]
struct OrbitBlock<F> {
    /// Boundary values of the independent basis functions, per code.
    values: Vec<Vec<i128>>,
    /// `G^{-1} f(code)` per code.
    dual: Vec<Vec<F>>,
}

#[derive(Clone, Debug)]
pub struct TraceKernel<F> {
    pub level: usize,
    nv: usize,
    orbit_of: Vec<usize>,
    blocks: Vec<OrbitBlock<F>>,
}

impl<F: Field> TraceKernel<F> {
    pub fn new(ctx: &MorContext, orbits: &OrbitPartition, level: usize) -> Result<Self> {
        let basis = ctx.basis(level, 0)?;
        let nv = ctx.nv();
        let size = level.max(1);
        let codes = nv.pow(size as u32);
        let mut blocks = Vec::new();
        for a in 0..orbits.count() {
            let in_a = |c: usize| orbits.orbit_of[decode(c, nv, size)[0]] == a;
            let mut ech = Echelon::<Fp>::new(codes);
            let mut chosen: Vec<Vec<i128>> = Vec::new();
            for f in &basis.elements {
                let r: Vec<i128> = (0..codes).map(|c| if in_a(c) { f[c] } else { 0 }).collect();
                let modp: Vec<Fp> = r.iter().map(|&x| Fp::new(x.rem_euclid(Fp::MODULUS as i128) as u64)).collect();
                if ech.insert(modp) {
                    chosen.push(r);
                }
            }
            let r = chosen.len();
            let v = orbits.members(a)[0];
            let base_codes: Vec<usize> = (0..codes).filter(|&c| decode(c, nv, size)[0] == v).collect();
            let gram: Vec<Vec<F>> = (0..r)
                .map(|p| {
                    (0..r)
                        .map(|q| F::from_i128(base_codes.iter().map(|&c| chosen[p][c] * chosen[q][c]).sum()))
                        .collect()
                })
                .collect();
            let ginv = inverse(&gram).ok_or_else(|| Error::Numerical("singular trace Gram matrix".into()))?;
            let mut values = vec![vec![0i128; r]; codes];
            let mut dual = vec![vec![F::zero(); r]; codes];
            for c in 0..codes {
                if !in_a(c) {
                    continue;
                }
                values[c] = (0..r).map(|p| chosen[p][c]).collect();
                if values[c].iter().all(|&x| x == 0) {
                    continue;
                }
                dual[c] = (0..r)
                    .map(|p| {
                        (0..r).fold(F::zero(), |acc, q| {
                            if values[c][q] == 0 {
                                acc
                            } else {
                                acc + ginv[p][q].clone() * F::from_i128(values[c][q])
                            }
                        })
                    })
                    .collect();
            }
            blocks.push(OrbitBlock { values, dual });
        }
        Ok(TraceKernel { level, nv, orbit_of: orbits.orbit_of.clone(), blocks })
    }

    /// Dimension of the restricted space for orbit `a`.
    pub fn dim(&self, a: usize) -> usize {
        self.blocks[a].values.iter().map(|v| v.len()).max().unwrap_or(0)
    }

    fn code(&self, t: &[usize]) -> usize {
        if self.level == 0 {
            t[0]
        } else {
            encode(&t[..self.level], self.nv)
        }
    }

    /// Orbit, boundary values and dual vector at a closed tuple, so that
    /// `value(i, j)` is the dot product of the values at `i` with the dual
    /// at `j`.
    pub fn parts(&self, t: &[usize]) -> Option<(usize, &[i128], &[F])> {
        if t[0] != t[self.level] {
            return None;
        }
        let a = self.orbit_of[t[0]];
        let c = self.code(t);
        Some((a, &self.blocks[a].values[c], &self.blocks[a].dual[c]))
    }

    /// Kernel value at two tuples of length `level + 1`.
    pub fn value(&self, i: &[usize], j: &[usize]) -> F {
        let n = self.level;
        debug_assert!(i.len() == n + 1 && j.len() == n + 1);
        if i[0] != i[n] || j[0] != j[n] || self.orbit_of[i[0]] != self.orbit_of[j[0]] {
            return F::zero();
        }
        let b = &self.blocks[self.orbit_of[i[0]]];
        let (fi, hj) = (&b.values[self.code(i)], &b.dual[self.code(j)]);
        fi.iter().zip(hj).fold(F::zero(), |acc, (&x, y)| if x == 0 { acc } else { acc + F::from_i128(x) * y.clone() })
    }
}
