//! The path algebra `B`, its corner `A` at a base vertex, and the Haar
//! functionals on them, for finite connected graphs.
//!
//! Elements are finite linear combinations of words. `B` words are pairs of
//! vertex tuples `F_n(i, j)` of length `n + 1`; `A` words are `U_n(i, j)` with
//! tuples of length `n`. Products are concatenations, and all functionals
//! are evaluated through reproducing kernels of the invariant spaces, so two
//! elements are equal in the algebra exactly when the difference has zero
//! norm under `phi`.

use crate::error::{Error, Result};
use crate::graphs::{FiniteGraph, GraphProvider};
use crate::hommat::{decode, encode};
use crate::morspace::{
    irreducibles, quantum_orbits, Category, ClosureConfig, IrreducibleSet, MorContext, MorMatrix, MuAssignment,
    OrbitPartition, SpectralConfig, TraceKernel,
};
use crate::scalar::Field;
use crate::Rational;
use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

pub type Tuple = Vec<usize>;
pub type Word = (Tuple, Tuple);

fn rev(t: &[usize]) -> Tuple {
    t.iter().rev().copied().collect()
}

pub(crate) fn rational_to<F: Field>(r: &Rational) -> F {
    match (r.numer().to_i128(), r.denom().to_i128()) {
        (Some(n), Some(d)) => F::from_ratio(n, d),
        // beyond i128; does not happen for the graph sizes handled here
        _ => {
            let scale = 1i128 << 52;
            F::from_ratio((r.to_f64().unwrap_or(f64::NAN) * scale as f64) as i128, scale)
        }
    }
}

/// Linear combination of words with coefficients in `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Combination<F> {
    pub terms: BTreeMap<Word, F>,
}

impl<F: Field> Default for Combination<F> {
    fn default() -> Self {
        Combination { terms: BTreeMap::new() }
    }
}

impl<F: Field> Combination<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.push(w.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            r.push(w.clone(), c.clone() * s.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    fn map_words(&self, f: impl Fn(&Word) -> Option<(Word, F)>) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            if let Some((w2, s)) = f(w) {
                r.push(w2, c.clone() * s);
            }
        }
        r
    }
}

/// Element of the path algebra: words `F_n(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BElement<F>(pub Combination<F>);

/// Element of the quantum automorphism algebra: words `U_n(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AElement<F>(pub Combination<F>);

/// Drops repeated end coordinates present in both tuples.
fn trim(mut i: Tuple, mut j: Tuple) -> Word {
    while i.len() >= 2 && i[i.len() - 1] == i[i.len() - 2] && j[j.len() - 1] == j[j.len() - 2] {
        i.pop();
        j.pop();
    }
    while i.len() >= 2 && i[0] == i[1] && j[0] == j[1] {
        i.remove(0);
        j.remove(0);
    }
    (i, j)
}

impl<F: Field> BElement<F> {
    pub fn zero() -> Self {
        BElement(Combination::zero())
    }

    /// The word `F_n(i, j)`, `n = i.len() - 1`.
    pub fn word(i: &[usize], j: &[usize]) -> Self {
        assert_eq!(i.len(), j.len(), "word tuples must have equal length");
        assert!(!i.is_empty());
        let mut c = Combination::zero();
        c.push(trim(i.to_vec(), j.to_vec()), F::one());
        BElement(c)
    }

    /// `sum xi(i) eta(j) F_n(i, j)` for vectors on `I^{n+1}`.
    pub fn sesquilinear(n: usize, nv: usize, xi: &[F], eta: &[F]) -> Self {
        let mut c = Combination::zero();
        for (a, x) in xi.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in eta.iter().enumerate() {
                if !y.is_zero() {
                    c.push(trim(decode(a, nv, n + 1), decode(b, nv, n + 1)), x.clone() * y.clone());
                }
            }
        }
        BElement(c)
    }

    pub fn add(&self, o: &Self) -> Self {
        BElement(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        BElement(self.0.sub(&o.0))
    }

    pub fn scale(&self, s: &F) -> Self {
        BElement(self.0.scale(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Combination::zero();
        for ((i, j), a) in &self.0.terms {
            for ((k, l), b) in &o.0.terms {
                if i[i.len() - 1] != k[0] || j[j.len() - 1] != l[0] {
                    continue;
                }
                let mut p = i.clone();
                p.extend_from_slice(&k[1..]);
                let mut q = j.clone();
                q.extend_from_slice(&l[1..]);
                r.push(trim(p, q), a.clone() * b.clone());
            }
        }
        BElement(r)
    }

    /// Scalars are real, so the involution only reverses the tuples.
    pub fn star(&self) -> Self {
        BElement(self.0.map_words(|(i, j)| Some(((rev(i), rev(j)), F::one()))))
    }

    /// Anti-automorphism `F_n(i, j) -> F_n(rev j, rev i)`.
    pub fn kappa(&self) -> Self {
        BElement(self.0.map_words(|(i, j)| Some(((rev(j), rev(i)), F::one()))))
    }

    pub fn max_level(&self) -> usize {
        self.0.terms.keys().map(|(i, _)| i.len() - 1).max().unwrap_or(0)
    }
}

impl<F: Field> AElement<F> {
    pub fn one() -> Self {
        Self::word(&[], &[])
    }

    pub fn word(i: &[usize], j: &[usize]) -> Self {
        assert_eq!(i.len(), j.len(), "word tuples must have equal length");
        let mut c = Combination::zero();
        c.push((i.to_vec(), j.to_vec()), F::one());
        AElement(c)
    }

    /// The generator `u_{ij}`.
    pub fn u(i: usize, j: usize) -> Self {
        Self::word(&[i], &[j])
    }

    pub fn add(&self, o: &Self) -> Self {
        AElement(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        AElement(self.0.sub(&o.0))
    }

    pub fn scale(&self, s: &F) -> Self {
        AElement(self.0.scale(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Combination::zero();
        for ((i, j), a) in &self.0.terms {
            for ((k, l), b) in &o.0.terms {
                let mut p = i.clone();
                p.extend_from_slice(k);
                let mut q = j.clone();
                q.extend_from_slice(l);
                r.push((p, q), a.clone() * b.clone());
            }
        }
        AElement(r)
    }

    pub fn star(&self) -> Self {
        AElement(self.0.map_words(|(i, j)| Some(((rev(i), rev(j)), F::one()))))
    }

    pub fn antipode(&self) -> Self {
        AElement(self.0.map_words(|(i, j)| Some(((rev(j), rev(i)), F::one()))))
    }

    pub fn counit(&self) -> F {
        self.0.terms.iter().filter(|((i, j), _)| i == j).fold(F::zero(), |acc, (_, c)| acc + c.clone())
    }

    pub fn max_len(&self) -> usize {
        self.0.terms.keys().map(|(i, _)| i.len()).max().unwrap_or(0)
    }
}

/// Scale factor of the modular element on a word: `U_n(i, j) delta` equals
/// `mu(i_n) / mu(j_n) U_n(i, j)`. `None` when `mu` is unknown at an end.
pub fn delta_factor(mu: &MuAssignment, i: &[usize], j: &[usize]) -> Option<Rational> {
    match (i.last(), j.last()) {
        (Some(&a), Some(&b)) => mu.ratio(b, a),
        _ => Some(Rational::one()),
    }
}

#[derive(Clone, Debug)]
pub struct HaarConfig {
    pub category: Category,
    /// Highest kernel level; words of `B` longer than this are refused.
    pub max_level: usize,
    pub closure: ClosureConfig,
}

impl Default for HaarConfig {
    fn default() -> Self {
        HaarConfig {
            category: Category::Planar,
            max_level: 5,
            closure: ClosureConfig { max_size: 5, ..Default::default() },
        }
    }
}

/// Haar functionals of a finite connected graph.
pub struct Haar<F> {
    pub ctx: MorContext,
    pub orbits: OrbitPartition,
    pub mu: MuAssignment,
    dist: Vec<Vec<usize>>,
    max_level: usize,
    kernels: RwLock<HashMap<usize, Arc<TraceKernel<F>>>>,
    cocycles: RwLock<HashMap<(usize, Tuple), Arc<Vec<F>>>>,
}

/// Residual of left invariance for one word `b`.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceResidual {
    pub word: Word,
    pub base: usize,
    pub value: f64,
    /// Largest coefficient of the trivial component of the difference.
    pub trivial: f64,
    /// Norm of the part of the difference outside the invariant vectors.
    pub leftover: f64,
}

impl InvarianceResidual {
    pub fn max(&self) -> f64 {
        self.trivial.max(self.leftover)
    }
}

impl<F: Field> Haar<F> {
    pub fn new(g: &FiniteGraph, cfg: &HaarConfig) -> Result<Self> {
        let mut closure = cfg.closure.clone();
        closure.max_size = closure.max_size.max(cfg.max_level);
        let ctx = MorContext::new(g, cfg.category, &closure)?;
        Self::from_context(ctx, cfg.max_level)
    }

    /// Refuses providers that are not finite graphs: on a window the
    /// functionals would depend on the truncation.
    pub fn for_provider(p: &GraphProvider, cfg: &HaarConfig) -> Result<Self> {
        match p.finite_graph() {
            Some(g) => Self::new(g, cfg),
            None => Err(Error::Guard(format!(
                "Haar functionals need a finite graph; {} only admits windowed modular data",
                p.description()
            ))),
        }
    }

    pub fn from_context(ctx: MorContext, max_level: usize) -> Result<Self> {
        let orbits = quantum_orbits(&ctx);
        let classes = crate::morspace::finite_pair_classes(&ctx)?;
        let mu = crate::morspace::mu_assignment(ctx.nv(), 0, &classes)?;
        let dist = ctx.graph.distance_matrix();
        Ok(Haar {
            ctx,
            orbits,
            mu,
            dist,
            max_level,
            kernels: RwLock::new(HashMap::new()),
            cocycles: RwLock::new(HashMap::new()),
        })
    }

    pub fn nv(&self) -> usize {
        self.ctx.nv()
    }

    pub fn kernel(&self, level: usize) -> Result<Arc<TraceKernel<F>>> {
        if level > self.max_level {
            return Err(Error::budget("kernel level", self.max_level));
        }
        if let Some(k) = self.kernels.read().unwrap().get(&level) {
            return Ok(k.clone());
        }
        let k = Arc::new(TraceKernel::new(&self.ctx, &self.orbits, level)?);
        self.kernels.write().unwrap().insert(level, k.clone());
        Ok(k)
    }

    fn mu_of(&self, v: usize) -> F {
        rational_to(self.mu.mu[v].as_ref().expect("finite graphs are connected"))
    }

    /// True when the word is forced to vanish by orbit or distance data.
    pub fn vanishes(&self, i: &[usize], j: &[usize]) -> bool {
        !self.orbits.same(i[0], j[0])
            || (1..i.len()).any(|k| self.dist[i[k - 1]][i[k]] != self.dist[j[k - 1]][j[k]])
    }

    /// Removes words that vanish identically.
    pub fn reduce(&self, x: &BElement<F>) -> BElement<F> {
        let mut c = x.0.clone();
        c.terms.retain(|(i, j), _| !self.vanishes(i, j));
        BElement(c)
    }

    pub fn phi(&self, x: &BElement<F>) -> Result<F> {
        let mut acc = F::zero();
        for ((i, j), c) in &x.0.terms {
            let k = self.kernel(i.len() - 1)?;
            acc = acc + c.clone() * k.value(i, j);
        }
        Ok(acc)
    }

    /// `phi(x* x)`; zero exactly when `x` is zero in the algebra.
    pub fn norm_squared(&self, x: &BElement<F>) -> Result<F> {
        self.phi(&x.star().mul(x))
    }

    /// `rho(F_n(i, j)) = mu(i_n) / mu(i_0) F_n(i, j)`.
    pub fn rho(&self, x: &BElement<F>) -> BElement<F> {
        BElement(x.0.map_words(|w| Some((w.clone(), self.mu_of(w.0[w.0.len() - 1]) / self.mu_of(w.0[0])))))
    }

    /// Embedding of `A` into the corner of `B` at the base vertex.
    pub fn theta_e(&self, e: usize, a: &AElement<F>) -> BElement<F> {
        let orbit = self.orbits.members(self.orbits.orbit_of[e]);
        let mut c = Combination::zero();
        for ((i, j), coef) in &a.0.terms {
            for &s in &orbit {
                for &t in &orbit {
                    let mut p = vec![s];
                    p.extend_from_slice(i);
                    p.push(t);
                    let mut q = vec![e];
                    q.extend_from_slice(j);
                    q.push(e);
                    c.push(trim(p, q), coef.clone());
                }
            }
        }
        BElement(c)
    }

    /// `phi_e = phi o Theta_e`, summed over closed words only.
    pub fn phi_e(&self, e: usize, a: &AElement<F>) -> Result<F> {
        let orbit = self.orbits.members(self.orbits.orbit_of[e]);
        let mut acc = F::zero();
        for ((i, j), coef) in &a.0.terms {
            let k = self.kernel(i.len() + 1)?;
            let q: Tuple = std::iter::once(e).chain(j.iter().copied()).chain(std::iter::once(e)).collect();
            for &s in &orbit {
                let p: Tuple = std::iter::once(s).chain(i.iter().copied()).chain(std::iter::once(s)).collect();
                acc = acc + coef.clone() * k.value(&p, &q);
            }
        }
        Ok(acc)
    }

    /// `psi_e = phi_e o S`.
    pub fn psi_e(&self, e: usize, a: &AElement<F>) -> Result<F> {
        self.phi_e(e, &a.antipode())
    }

    /// Right multiplication by the modular element.
    pub fn delta(&self, a: &AElement<F>) -> AElement<F> {
        AElement(a.0.map_words(|(i, j)| {
            let f = delta_factor(&self.mu, i, j).expect("finite graphs are connected");
            Some(((i.clone(), j.clone()), rational_to(&f)))
        }))
    }

    /// `phi_e(u_se U_n(i, j) u_te)` read directly off the kernel at level
    /// `n + 1`, without forming the product.
    pub fn phi_e_sandwich(&self, e: usize, s: usize, t: usize, i: &[usize], j: &[usize]) -> Result<F> {
        if s != t || !self.orbits.same(s, e) {
            return Ok(F::zero());
        }
        let k = self.kernel(i.len() + 1)?;
        let p: Tuple = std::iter::once(s).chain(i.iter().copied()).chain(std::iter::once(s)).collect();
        let q: Tuple = std::iter::once(e).chain(j.iter().copied()).chain(std::iter::once(e)).collect();
        Ok(k.value(&p, &q))
    }

    /// `phi_e(U_m(K, J))` for every `K`, indexed by the code of `K`.
    fn column(&self, e: usize, j: &[usize]) -> Result<Arc<Vec<F>>> {
        let key = (e, j.to_vec());
        if let Some(c) = self.cocycles.read().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let m = j.len();
        let nv = self.nv();
        let codes = nv.pow(m as u32);
        let col: Vec<F> = (0..codes)
            .map(|c| self.phi_e(e, &AElement::word(&decode(c, nv, m), j)))
            .collect::<Result<_>>()?;
        let col = Arc::new(col);
        self.cocycles.write().unwrap().insert(key, col.clone());
        Ok(col)
    }

    /// Residual of `(id x phi_e) Delta(b) = phi_e(b) 1` for `b = U_m(I, J)`.
    ///
    /// The difference is `sum_K (phi_e(U_m(K, J)) - phi_e(b)) U_m(I, K)`. Its
    /// image in `B` is a sesquilinear word whose right vector is checked to
    /// be invariant (leftover) with vanishing pairing against `I` (trivial).
    pub fn left_invariance_residual(&self, e: usize, i: &[usize], j: &[usize]) -> Result<InvarianceResidual> {
        let m = i.len();
        let nv = self.nv();
        let col = self.column(e, j)?;
        let k = self.kernel(m + 1)?;
        let value = col[encode(i, nv)].clone();
        let closed = |v: usize, t: &[usize]| -> Tuple {
            std::iter::once(v).chain(t.iter().copied()).chain(std::iter::once(v)).collect()
        };
        let codes = col.len();
        // w = sum_K (c_K - value) h(e K e)
        let (_, f_e, _) = k.parts(&closed(e, &vec![e; m])).expect("closed tuple");
        let r = f_e.len();
        let mut w = vec![F::zero(); r];
        let mut feats: Vec<&[i128]> = Vec::with_capacity(codes);
        for c in 0..codes {
            let kk = decode(c, nv, m);
            let (_, f, h) = k.parts(&closed(e, &kk)).expect("closed tuple");
            feats.push(f);
            let d = col[c].clone() - value.clone();
            if d.is_zero() {
                continue;
            }
            for p in 0..r {
                w[p] = w[p].clone() + d.clone() * h[p].clone();
            }
        }
        let dotf = |f: &[i128]| -> F {
            f.iter().zip(&w).fold(F::zero(), |acc, (&x, y)| if x == 0 { acc } else { acc + F::from_i128(x) * y.clone() })
        };
        let mut trivial = 0f64;
        for v in self.orbits.members(self.orbits.orbit_of[e]) {
            let (_, f, _) = k.parts(&closed(v, i)).expect("closed tuple");
            trivial = trivial.max(dotf(f).as_f64().abs());
        }
        let mut leftover = 0f64;
        for c in 0..codes {
            let d = (col[c].clone() - value.clone() - dotf(feats[c])).as_f64();
            leftover += d * d;
        }
        Ok(InvarianceResidual {
            word: (i.to_vec(), j.to_vec()),
            base: e,
            value: value.as_f64(),
            trivial,
            leftover: leftover.sqrt(),
        })
    }

    /// Random word `F_n(i, j)` that passes the orbit and distance filters.
    pub fn random_b_word<R: Rng>(&self, rng: &mut R, n: usize) -> Word {
        let nv = self.nv();
        let i0 = rng.gen_range(0..nv);
        let same = self.orbits.members(self.orbits.orbit_of[i0]);
        let mut i = vec![i0];
        let mut j = vec![same[rng.gen_range(0..same.len())]];
        for _ in 0..n {
            let a = rng.gen_range(0..nv);
            let d = self.dist[*i.last().unwrap()][a];
            let cands: Vec<usize> = (0..nv).filter(|&b| self.dist[*j.last().unwrap()][b] == d).collect();
            i.push(a);
            j.push(if cands.is_empty() { rng.gen_range(0..nv) } else { cands[rng.gen_range(0..cands.len())] });
        }
        (i, j)
    }

    pub fn random_b<R: Rng>(&self, rng: &mut R, max_n: usize, terms: usize) -> BElement<F> {
        let mut x = BElement::zero();
        for _ in 0..terms {
            let n = rng.gen_range(0..=max_n);
            let (i, j) = self.random_b_word(rng, n);
            x = x.add(&BElement::word(&i, &j).scale(&F::from_i128(rng.gen_range(-3..=3))));
        }
        x
    }

    /// Random element of `A` built from words `U_n(i, j)` with `1 <= n <= max_n`.
    pub fn random_a<R: Rng>(&self, rng: &mut R, max_n: usize, terms: usize) -> AElement<F> {
        let mut a = AElement(Combination::zero());
        for _ in 0..terms {
            let n = rng.gen_range(1..=max_n);
            let (i, j) = self.random_b_word(rng, n - 1);
            a = a.add(&AElement::word(&i, &j).scale(&F::from_i128(rng.gen_range(-3..=3))));
        }
        a
    }
}

/// Settings for the randomized Haar checks.
#[derive(Clone, Debug, Serialize)]
pub struct HaarSuiteConfig {
    pub samples: usize,
    /// Longest middle word `U_n(i, j)` in the invariance sweep.
    pub max_n: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for HaarSuiteConfig {
    fn default() -> Self {
        HaarSuiteConfig { samples: 200, max_n: 2, seed: 0, tol: 1e-9 }
    }
}

/// Worst values observed by [`haar_suite`].
#[derive(Clone, Debug, Serialize)]
pub struct HaarSuiteReport {
    pub base: usize,
    /// Smallest `phi(x* x)` and `phi_e(a* a)` over the samples.
    pub min_positivity: f64,
    /// `max |phi(x y) - phi(y rho(x))|`.
    pub trace_property: f64,
    pub invariance_words: usize,
    pub left_invariance: f64,
    /// `max |psi_e(a) - phi_e(a delta)|`.
    pub right_modular: f64,
    /// `max |phi_e(a) - mu_f / mu_e phi_f(a)|` over other bases in the orbit.
    pub base_point: f64,
    /// `max |phi(kappa(x)) - phi(x)|`.
    pub kappa_trace: f64,
    pub tol: f64,
    pub passed: bool,
}

pub fn haar_suite(h: &Haar<f64>, e: usize, cfg: &HaarSuiteConfig) -> Result<HaarSuiteReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let nv = h.nv();
    let mut min_pos = f64::INFINITY;
    let mut trace = 0f64;
    let mut kappa = 0f64;
    for _ in 0..cfg.samples {
        let x = h.random_b(&mut rng, 2, 3);
        let y = h.random_b(&mut rng, 2, 3);
        min_pos = min_pos.min(h.norm_squared(&x)?);
        trace = trace.max((h.phi(&x.mul(&y))? - h.phi(&y.mul(&h.rho(&x)))?).abs());
        kappa = kappa.max((h.phi(&x.kappa())? - h.phi(&x)?).abs());
        let a = h.random_a(&mut rng, 2, 3);
        min_pos = min_pos.min(h.phi_e(e, &a.star().mul(&a))?);
    }
    let mut words = 0;
    let mut inv = 0f64;
    for n in 0..=cfg.max_n {
        let total = nv.pow(n as u32);
        for s in 0..nv {
            for t in 0..nv {
                for ic in 0..total {
                    let i = decode(ic, nv, n);
                    let big_i: Tuple = std::iter::once(s).chain(i).chain(std::iter::once(t)).collect();
                    for jc in 0..total {
                        let j = decode(jc, nv, n);
                        let big_j: Tuple = std::iter::once(e).chain(j).chain(std::iter::once(e)).collect();
                        inv = inv.max(h.left_invariance_residual(e, &big_i, &big_j)?.max());
                        words += 1;
                    }
                }
            }
        }
    }
    let others: Vec<usize> = h.orbits.members(h.orbits.orbit_of[e]).into_iter().filter(|&f| f != e).collect();
    let mut right = 0f64;
    let mut base = 0f64;
    for _ in 0..cfg.samples {
        let a = h.random_a(&mut rng, 2, 3);
        right = right.max((h.psi_e(e, &a)? - h.phi_e(e, &h.delta(&a))?).abs());
        for &f in &others {
            let ratio = rational_to::<f64>(&h.mu.ratio(e, f).expect("connected"));
            base = base.max((h.phi_e(e, &a)? - ratio * h.phi_e(f, &a)?).abs());
        }
    }
    let passed = min_pos >= -cfg.tol
        && trace < cfg.tol
        && inv < cfg.tol
        && right < cfg.tol
        && base < cfg.tol
        && kappa < cfg.tol;
    Ok(HaarSuiteReport {
        base: e,
        min_positivity: min_pos,
        trace_property: trace,
        invariance_words: words,
        left_invariance: inv,
        right_modular: right,
        base_point: base,
        kappa_trace: kappa,
        tol: cfg.tol,
        passed,
    })
}

/// Component decomposition of `B` up to a word level: one isometric basis per
/// irreducible and level.
pub struct ComponentModel {
    pub irreducibles: IrreducibleSet,
    /// `ibf[alpha][n]`: isometries `V` in `Mor(n, k_alpha) P_alpha`.
    pub ibf: Vec<Vec<Vec<MorMatrix<f64>>>>,
    pub max_level: usize,
    nv: usize,
}

impl ComponentModel {
    pub fn new(haar: &Haar<f64>, max_level: usize, cfg: &SpectralConfig) -> Result<Self> {
        let ctx = &haar.ctx;
        let irr = irreducibles(ctx, max_level, &haar.orbits, cfg)?;
        let mut ibf = Vec::new();
        for p in &irr.reps {
            let pm = &p.matrix;
            let trp: f64 = (0..pm.rows()).map(|r| *pm.get(r, r)).sum();
            let mut per_level = Vec::new();
            for n in 0..=max_level {
                let basis = ctx.basis(n, p.k)?;
                let mut chosen: Vec<MorMatrix<f64>> = Vec::new();
                for t in basis.matrices::<f64>() {
                    let mut v = t.mul(pm)?;
                    for w in &chosen {
                        let ip = frob(w, &v) / trp;
                        v = v.sub(&w.scale(&ip));
                    }
                    let nn = frob(&v, &v) / trp;
                    if nn > cfg.tol.sqrt() * 1e-3 {
                        chosen.push(v.scale(&(1.0 / nn.sqrt())));
                    }
                }
                per_level.push(chosen);
            }
            ibf.push(per_level);
        }
        Ok(ComponentModel { irreducibles: irr, ibf, max_level, nv: ctx.nv() })
    }

    pub fn count(&self) -> usize {
        self.ibf.len()
    }

    /// `theta_alpha(x)` as a matrix on `I^{k+1} x I^{k+1}`.
    pub fn theta(&self, alpha: usize, x: &BElement<f64>) -> Result<DMatrix<f64>> {
        let k = self.irreducibles.reps[alpha].k;
        let dim = self.nv.pow(k as u32 + 1);
        let mut out = DMatrix::zeros(dim, dim);
        for ((i, j), c) in &x.0.terms {
            let n = i.len() - 1;
            if n > self.max_level {
                return Err(Error::budget("component level", self.max_level));
            }
            let (ri, rj) = (encode(i, self.nv), encode(j, self.nv));
            for v in &self.ibf[alpha][n] {
                for p in 0..dim {
                    let a = *v.get(ri, p);
                    if a == 0.0 {
                        continue;
                    }
                    for q in 0..dim {
                        out[(p, q)] += c * a * v.get(rj, q);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `sum_alpha d_left(alpha)^{-1} <theta_alpha(x), theta_alpha(y)>`.
    pub fn trace_pairing(&self, x: &BElement<f64>, y: &BElement<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for a in 0..self.count() {
            let (tx, ty) = (self.theta(a, x)?, self.theta(a, y)?);
            acc += tx.dot(&ty) / self.irreducibles.reps[a].d_left as f64;
        }
        Ok(acc)
    }

    /// `max |sum_alpha sum_V V V* - 1|` at level `n`.
    pub fn completeness_defect(&self, n: usize) -> Result<f64> {
        let dim = self.nv.pow(n as u32 + 1);
        let mut s = DMatrix::<f64>::identity(dim, dim) * -1.0;
        for per in &self.ibf {
            for v in &per[n] {
                let d = v.to_dmatrix();
                s += &d * d.transpose();
            }
        }
        Ok(s.abs().max())
    }
}

fn frob(a: &MorMatrix<f64>, b: &MorMatrix<f64>) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use num_traits::Zero;

    fn haar(g: &FiniteGraph) -> Haar<f64> {
        Haar::new(g, &HaarConfig::default()).unwrap()
    }

    #[test]
    fn level_zero_projections() {
        let h: Haar<Rational> = Haar::new(&FiniteGraph::path(3), &HaarConfig { max_level: 3, ..Default::default() }).unwrap();
        let p = BElement::<Rational>::word(&[0], &[2]);
        assert_eq!(h.phi(&p).unwrap(), Rational::one());
        assert_eq!(p.mul(&p), p);
        assert!(p.mul(&BElement::word(&[0], &[0])).0.is_zero());
        assert!(h.phi(&BElement::word(&[0], &[1])).unwrap().is_zero());
    }

    #[test]
    fn corner_functionals_on_c4() {
        let h = haar(&FiniteGraph::cycle(4));
        assert!((h.phi_e(0, &AElement::one()).unwrap() - 4.0).abs() < 1e-9);
        assert!((h.phi_e(0, &AElement::u(0, 0)).unwrap() - 1.0).abs() < 1e-9);
        assert!((AElement::<f64>::u(1, 2).counit()).abs() < 1e-12);
        assert!((AElement::<f64>::u(2, 2).counit() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sandwich_formula_matches_product() {
        let h = haar(&FiniteGraph::path(3));
        for s in 0..3 {
            for t in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let a = AElement::u(s, 0).mul(&AElement::u(i, j)).mul(&AElement::u(t, 0));
                        let direct = h.phi_e(0, &a).unwrap();
                        let formula = h.phi_e_sandwich(0, s, t, &[i], &[j]).unwrap();
                        assert!((direct - formula).abs() < 1e-9, "{s}{t}{i}{j}: {direct} vs {formula}");
                    }
                }
            }
        }
    }

    #[test]
    fn left_invariance_on_k3() {
        let h = haar(&FiniteGraph::complete(3));
        for s in 0..3 {
            for t in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let r = h.left_invariance_residual(0, &[s, i, t], &[0, j, 0]).unwrap();
                        assert!(r.max() < 1e-9, "{r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn trace_formula_matches_phi() {
        let h = haar(&FiniteGraph::cycle(4));
        let model = ComponentModel::new(&h, 2, &SpectralConfig::default()).unwrap();
        for n in 0..=2 {
            assert!(model.completeness_defect(n).unwrap() < 1e-9);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let x = h.random_b(&mut rng, 2, 3);
            let y = h.random_b(&mut rng, 2, 3);
            let direct = h.phi(&x.mul(&y.star())).unwrap();
            let via = model.trace_pairing(&x, &y).unwrap();
            assert!((direct - via).abs() < 1e-8, "{direct} vs {via}");
        }
    }
}
