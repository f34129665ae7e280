use crate::error::{Error, Result};
use serde_json::Value;
use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::sync::Arc;

/// Normal-form word; the encoding is private to each oracle.
pub type Word = Vec<i32>;

/// Solvable word problem for a discrete group: every word has a unique
/// normal form, and `key` is injective on normal forms.
pub trait WordOracle: Send + Sync + Debug {
    fn identity(&self) -> Word;
    fn mul(&self, a: &Word, b: &Word) -> Word;
    fn inv(&self, a: &Word) -> Word;
    fn key(&self, a: &Word) -> String;
    fn parse(&self, key: &str) -> Result<Word>;
    /// Group order for finite groups.
    fn order(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug)]
struct TableOracle {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl TableOracle {
    fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::input("mul", "multiplication table must be an n x n table with entries < n"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::input("mul", "table has no identity element"))?;
        let mut inverse = vec![usize::MAX; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| mul[x][y] == identity && mul[y][x] == identity)
                .ok_or_else(|| Error::input("mul", format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::input("mul", "table is not associative"));
                    }
                }
            }
        }
        Ok(TableOracle { mul, identity, inverse })
    }
}

impl WordOracle for TableOracle {
    fn identity(&self) -> Word {
        vec![self.identity as i32]
    }
    fn mul(&self, a: &Word, b: &Word) -> Word {
        vec![self.mul[a[0] as usize][b[0] as usize] as i32]
    }
    fn inv(&self, a: &Word) -> Word {
        vec![self.inverse[a[0] as usize] as i32]
    }
    fn key(&self, a: &Word) -> String {
        a[0].to_string()
    }
    fn parse(&self, key: &str) -> Result<Word> {
        let v: usize = key.parse().map_err(|_| Error::input("vertex", format!("bad element key `{key}`")))?;
        if v >= self.mul.len() {
            return Err(Error::input("vertex", format!("element {v} out of range")));
        }
        Ok(vec![v as i32])
    }
    fn order(&self) -> Option<usize> {
        Some(self.mul.len())
    }
}

fn letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// Free product of finite cyclic groups, syllable normal form
/// `[factor, exponent, factor, exponent, ...]` with distinct neighbours.
#[derive(Debug)]
struct FreeProductOracle {
    orders: Vec<u32>,
}

impl WordOracle for FreeProductOracle {
    fn identity(&self) -> Word {
        Vec::new()
    }
    fn mul(&self, a: &Word, b: &Word) -> Word {
        let mut out = a.clone();
        let mut rest = b.chunks(2);
        for syl in rest.by_ref() {
            let (f, e) = (syl[0], syl[1]);
            let n = out.len();
            if n >= 2 && out[n - 2] == f {
                let m = (out[n - 1] + e).rem_euclid(self.orders[f as usize] as i32);
                if m == 0 {
                    out.truncate(n - 2);
                    continue;
                }
                out[n - 1] = m;
                break;
            } else {
                out.push(f);
                out.push(e);
                break;
            }
        }
        for syl in rest {
            out.extend_from_slice(syl);
        }
        out
    }
    fn inv(&self, a: &Word) -> Word {
        a.chunks(2)
            .rev()
            .flat_map(|s| [s[0], (self.orders[s[0] as usize] as i32 - s[1]) % self.orders[s[0] as usize] as i32])
            .collect()
    }
    fn key(&self, a: &Word) -> String {
        if a.is_empty() {
            return "1".into();
        }
        a.chunks(2)
            .map(|s| if s[1] == 1 { letter(s[0] as usize).to_string() } else { format!("{}^{}", letter(s[0] as usize), s[1]) })
            .collect::<Vec<_>>()
            .join("")
    }
    fn parse(&self, key: &str) -> Result<Word> {
        if key == "1" {
            return Ok(Vec::new());
        }
        let bad = || Error::input("vertex", format!("bad free-product word `{key}`"));
        let chars: Vec<char> = key.chars().collect();
        let mut w = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_lowercase() {
                return Err(bad());
            }
            let f = (c as u8 - b'a') as i32;
            if f as usize >= self.orders.len() {
                return Err(bad());
            }
            i += 1;
            let mut e = 1;
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                e = chars[start..end].iter().collect::<String>().parse().map_err(|_| bad())?;
                i = end;
            }
            if e <= 0 || e >= self.orders[f as usize] as i32 || (w.len() >= 2 && w[w.len() - 2] == f) {
                return Err(bad());
            }
            w.push(f);
            w.push(e);
        }
        Ok(w)
    }
}

/// Free group, reduced words of letters `+-(g+1)`.
#[derive(Debug)]
struct FreeOracle {
    rank: usize,
}

impl WordOracle for FreeOracle {
    fn identity(&self) -> Word {
        Vec::new()
    }
    fn mul(&self, a: &Word, b: &Word) -> Word {
        let mut out = a.clone();
        for &x in b {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }
    fn inv(&self, a: &Word) -> Word {
        a.iter().rev().map(|x| -x).collect()
    }
    fn key(&self, a: &Word) -> String {
        if a.is_empty() {
            return "1".into();
        }
        a.iter()
            .map(|&x| {
                let c = letter(x.unsigned_abs() as usize - 1);
                if x > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }
    fn parse(&self, key: &str) -> Result<Word> {
        if key == "1" {
            return Ok(Vec::new());
        }
        let mut w: Word = Vec::new();
        for c in key.chars() {
            let (g, s) = if c.is_ascii_lowercase() {
                ((c as u8 - b'a') as usize, 1)
            } else if c.is_ascii_uppercase() {
                ((c as u8 - b'A') as usize, -1)
            } else {
                return Err(Error::input("vertex", format!("bad free-group word `{key}`")));
            };
            if g >= self.rank {
                return Err(Error::input("vertex", format!("letter `{c}` exceeds rank {}", self.rank)));
            }
            let x = s * (g as i32 + 1);
            if w.last() == Some(&-x) {
                return Err(Error::input("vertex", format!("word `{key}` is not reduced")));
            }
            w.push(x);
        }
        Ok(w)
    }
}

/// A discrete group with a finite generating family `S`.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    oracle: Arc<dyn WordOracle>,
    gens: Vec<Word>,
    description: String,
}

impl GroupSpec {
    /// Finite group given by its table; `gens` defaults to all non-identity elements.
    pub fn finite_table(mul: Vec<Vec<usize>>, gens: Option<Vec<usize>>) -> Result<Self> {
        let o = TableOracle::new(mul)?;
        let n = o.mul.len();
        let gens: Vec<Word> = match gens {
            Some(g) => {
                if let Some(&bad) = g.iter().find(|&&x| x >= n) {
                    return Err(Error::input("gens", format!("generator {bad} out of range")));
                }
                g.into_iter().map(|x| vec![x as i32]).collect()
            }
            None => (0..n).filter(|&x| x != o.identity).map(|x| vec![x as i32]).collect(),
        };
        let spec = GroupSpec { oracle: Arc::new(o), gens, description: format!("finite group of order {n}") };
        spec.validate()?;
        if !spec.generates_finite() {
            return Err(Error::input("gens", "generating set does not generate the group"));
        }
        Ok(spec)
    }

    /// Free product of cyclic groups of the given orders, with `S` the set of
    /// all nontrivial powers of the factor generators.
    pub fn free_product_cyclic(orders: &[u32]) -> Result<Self> {
        if orders.is_empty() || orders.len() > 26 || orders.iter().any(|&o| o < 2) {
            return Err(Error::input("orders", "need 1..=26 cyclic factors of order >= 2"));
        }
        let gens = orders
            .iter()
            .enumerate()
            .flat_map(|(f, &o)| (1..o as i32).map(move |e| vec![f as i32, e]))
            .collect();
        let desc = format!(
            "free product of cyclic groups of orders {}",
            orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",")
        );
        let spec = GroupSpec { oracle: Arc::new(FreeProductOracle { orders: orders.to_vec() }), gens, description: desc };
        spec.validate()?;
        Ok(spec)
    }

    /// Free group with `S = {a_i, a_i^-1}`.
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::input("rank", "rank must be in 1..=26"));
        }
        let gens = (1..=rank as i32).flat_map(|g| [vec![g], vec![-g]]).collect();
        let spec = GroupSpec { oracle: Arc::new(FreeOracle { rank }), gens, description: format!("free group of rank {rank}") };
        spec.validate()?;
        Ok(spec)
    }

    /// User-supplied oracle and generating family (given as keys).
    pub fn custom(oracle: Arc<dyn WordOracle>, gen_keys: &[&str]) -> Result<Self> {
        let gens = gen_keys.iter().map(|k| oracle.parse(k)).collect::<Result<Vec<_>>>()?;
        let spec = GroupSpec { oracle, gens, description: "custom word oracle".into() };
        spec.validate()?;
        Ok(spec)
    }

    /// Replaces the generating family (used for non-symmetric families `F`).
    pub fn with_generators(&self, gen_keys: &[&str]) -> Result<Self> {
        let gens = gen_keys.iter().map(|k| self.oracle.parse(k)).collect::<Result<Vec<_>>>()?;
        let spec = GroupSpec { oracle: self.oracle.clone(), gens, description: self.description.clone() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ty = v.get("type").and_then(Value::as_str).ok_or_else(|| Error::input("type", "missing group type"))?;
        let spec = match ty {
            "free" => {
                let r = v.get("rank").and_then(Value::as_u64).ok_or_else(|| Error::input("rank", "missing rank"))?;
                GroupSpec::free(r as usize)?
            }
            "free_product_cyclic" => {
                let orders = v
                    .get("orders")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::input("orders", "missing orders list"))?
                    .iter()
                    .map(|o| o.as_u64().map(|x| x as u32).ok_or_else(|| Error::input("orders", "orders must be integers")))
                    .collect::<Result<Vec<_>>>()?;
                GroupSpec::free_product_cyclic(&orders)?
            }
            "cyclic" => {
                let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::input("n", "missing order"))? as usize;
                if n < 2 {
                    return Err(Error::input("n", "order must be >= 2"));
                }
                let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
                GroupSpec::finite_table(mul, None)?
            }
            "finite_table" => {
                let mul: Vec<Vec<usize>> = serde_json::from_value(v.get("mul").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::input("mul", e.to_string()))?;
                if let Some(n) = v.get("n").and_then(Value::as_u64) {
                    if n as usize != mul.len() {
                        return Err(Error::input("n", "does not match the table size"));
                    }
                }
                let gens: Option<Vec<usize>> = match v.get("gens") {
                    Some(g) => Some(serde_json::from_value(g.clone()).map_err(|e| Error::input("gens", e.to_string()))?),
                    None => None,
                };
                GroupSpec::finite_table(mul, gens)?
            }
            other => return Err(Error::input("type", format!("unknown group type `{other}`"))),
        };
        match v.get("generators").and_then(Value::as_array) {
            Some(keys) => {
                let keys: Vec<&str> = keys.iter().filter_map(Value::as_str).collect();
                spec.with_generators(&keys)
            }
            None => Ok(spec),
        }
    }

    fn validate(&self) -> Result<()> {
        let e = self.oracle.identity();
        let mut seen = HashSet::new();
        for g in &self.gens {
            if *g == e {
                return Err(Error::input("gens", "the identity may not belong to the generating set"));
            }
            if !seen.insert(g.clone()) {
                return Err(Error::input("gens", format!("duplicate generator `{}`", self.oracle.key(g))));
            }
        }
        if self.gens.is_empty() {
            return Err(Error::input("gens", "empty generating set"));
        }
        Ok(())
    }

    fn generates_finite(&self) -> bool {
        let Some(n) = self.oracle.order() else { return true };
        let mut seen = HashSet::from([self.oracle.identity()]);
        let mut q = VecDeque::from([self.oracle.identity()]);
        while let Some(x) = q.pop_front() {
            for s in &self.gens {
                let y = self.oracle.mul(&x, s);
                if seen.insert(y.clone()) {
                    q.push_back(y);
                }
            }
        }
        seen.len() == n
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn oracle(&self) -> &Arc<dyn WordOracle> {
        &self.oracle
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.gens.iter().map(|g| self.oracle.key(g)).collect()
    }

    pub fn identity(&self) -> Word {
        self.oracle.identity()
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        self.oracle.mul(a, b)
    }

    pub fn inv(&self, a: &Word) -> Word {
        self.oracle.inv(a)
    }

    pub fn key(&self, a: &Word) -> String {
        self.oracle.key(a)
    }

    pub fn order(&self) -> Option<usize> {
        self.oracle.order()
    }

    /// Product of generators given by their indices in `S`.
    pub fn product(&self, idx: &[usize]) -> Word {
        idx.iter().fold(self.identity(), |acc, &i| self.mul(&acc, &self.gens[i]))
    }

    /// Index of the inverse of generator `i`, if it lies in `S`.
    pub fn inverse_index(&self, i: usize) -> Option<usize> {
        let inv = self.inv(&self.gens[i]);
        self.gens.iter().position(|g| *g == inv)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.gens.len()).all(|i| self.inverse_index(i).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_product_normal_forms() {
        let g = GroupSpec::free_product_cyclic(&[2, 3]).unwrap();
        let a = g.generators()[0].clone();
        let b = g.generators()[1].clone();
        assert_eq!(g.mul(&a, &a), g.identity());
        let bb = g.mul(&b, &b);
        assert_eq!(g.key(&bb), "b^2");
        assert_eq!(g.mul(&bb, &b), g.identity());
        let w = g.mul(&g.mul(&a, &b), &a);
        assert_eq!(g.key(&w), "aba");
        assert_eq!(g.mul(&w, &g.inv(&w)), g.identity());
        assert_eq!(g.oracle().parse("ab^2a").unwrap(), g.mul(&g.mul(&a, &bb), &a));
        assert!(g.is_symmetric());
    }

    #[test]
    fn free_group_reduction() {
        let g = GroupSpec::free(2).unwrap();
        let w = g.product(&[0, 2, 3, 1]);
        assert_eq!(w, g.identity());
        assert_eq!(g.key(&g.product(&[0, 3])), "aB");
    }

    #[test]
    fn table_rejects_identity_generator() {
        let mul = vec![vec![0, 1], vec![1, 0]];
        assert!(GroupSpec::finite_table(mul.clone(), Some(vec![0])).is_err());
        assert!(GroupSpec::finite_table(mul, Some(vec![1])).is_ok());
    }
}
