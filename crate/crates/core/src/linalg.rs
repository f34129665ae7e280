//! Generic row echelon forms, exact inverses and small dense helpers.

use crate::scalar::Field;

/// Incrementally maintained reduced row echelon basis of a subspace of F^len.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    len: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(len: usize) -> Self {
        Echelon { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the projection onto the current span along pivot columns.
    pub fn reduce(&self, v: &mut [F]) {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_negligible() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_negligible())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<F>) -> bool {
        self.reduce(&mut v);
        let Some(q) = v.iter().position(|x| !x.is_negligible()) else {
            return false;
        };
        let inv = F::one() / v[q].clone();
        for x in v.iter_mut() {
            if x.is_negligible() {
                *x = F::zero();
            } else {
                *x = x.clone() * inv.clone();
            }
        }
        for row in self.rows.iter_mut() {
            if row[q].is_zero() {
                continue;
            }
            let c = row[q].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(q);
        true
    }
}

/// Rank of a family of vectors.
pub fn rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut e = Echelon::new(first.len());
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_negligible())?;
        a.swap(col, piv);
        let inv = F::one() / a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let c = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(pivot_row) {
                *x = x.clone() - c.clone() * p;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the null space {c : sum_k c_k v_k = 0} of a family of vectors.
pub fn relations<F: Field>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    let k = vectors.len();
    if k == 0 {
        return Vec::new();
    }
    let len = vectors[0].len();
    // rows of the transposed system: one row per coordinate
    let mut rows: Vec<Vec<F>> = (0..len).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_negligible()) else { continue };
        rows.swap(r, p);
        let inv = F::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pr) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut sol = vec![F::zero(); k];
            sol[f] = F::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                sol[pc] = -rows[i][f].clone();
            }
            sol
        })
        .collect()
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    fn q(v: i128) -> Rational {
        Rational::from_i128(v)
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![q(1), q(2), q(3)]));
        assert!(e.insert(vec![q(0), q(1), q(1)]));
        assert!(!e.insert(vec![q(1), q(3), q(4)]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[q(2), q(5), q(7)]));
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(inverse(&[vec![q(1), q(1)], vec![q(1), q(1)]]).is_none());
    }

    #[test]
    fn relations_span_kernel() {
        let vs = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]];
        let rel = relations(&vs);
        assert_eq!(rel.len(), 1);
        let comb: Vec<Rational> = (0..2)
            .map(|i| vs.iter().zip(&rel[0]).fold(Rational::zero(), |a, (v, c)| a + v[i].clone() * c.clone()))
            .collect();
        assert!(comb.iter().all(|x| x.is_zero()));
    }
}
