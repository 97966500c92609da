//! Exact rank computations.
//!
//! [`bareiss_rank`] is fraction-free elimination over the integers. [`DenseEchelon`] and
//! [`SparseEchelon`] are incremental echelon forms over any [`Scalar`] field; over
//! [`Fp`](crate::scalar::Fp) they give lower bounds for ranks over ℚ.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;
use crate::Rational;

/// Rank of an integer matrix by fraction-free Gaussian elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..ncols {
                let num = &pv * &row[j] - &f * &pivot_row[j];
                debug_assert!(num.is_multiple_of(&prev));
                row[j] = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pv;
        r += 1;
    }
    r
}

/// Rank of a rational matrix: each row is scaled to integers, then [`bareiss_rank`].
pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let ints = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    bareiss_rank(ints)
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Solves `basis · t = target` over ℚ for a full-column-rank `basis` given as column vectors.
/// Returns `None` when `target` is outside the span.
pub fn solve_in_span(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<Rational>> {
    let n = target.len();
    let k = basis.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis
                .iter()
                .map(|b| Rational::from_integer(b[i].into()))
                .collect();
            row.push(Rational::from_integer(target[i].into()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / m[r][col].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=k {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() < k || m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][k].clone();
    }
    Some(sol)
}

/// Incremental dense row echelon form with normalized pivot rows.
#[derive(Clone, Debug)]
pub struct DenseEchelon<S> {
    ncols: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> DenseEchelon<S> {
    pub fn new(ncols: usize) -> Self {
        DenseEchelon {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current pivots; `v` is left reduced.
    pub fn reduce(&self, v: &mut [S]) {
        assert_eq!(v.len(), self.ncols);
        for (c, row) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let f = v[*c].clone();
            for (x, r) in v.iter_mut().zip(row).skip(*c) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
    }

    /// Adds `v`; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, mut v: Vec<S>) -> bool {
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = S::one() / v[c].clone();
        for x in v.iter_mut().skip(c) {
            *x = x.clone() * inv.clone();
        }
        self.rows.push((c, v));
        true
    }
}

/// Incremental sparse echelon form. Columns are `u64` keys; the leading entry of a row is
/// its largest key. Rows live in a single arena.
#[derive(Debug)]
pub struct SparseEchelon<S> {
    pivots: HashMap<u64, u32>,
    starts: Vec<usize>,
    arena: Vec<(u64, S)>,
}

impl<S: Scalar> Default for SparseEchelon<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new() -> Self {
        SparseEchelon {
            pivots: HashMap::new(),
            starts: vec![0],
            arena: Vec::new(),
        }
    }

    pub fn with_capacity(rows: usize, entries: usize) -> Self {
        let mut starts = Vec::with_capacity(rows + 1);
        starts.push(0);
        SparseEchelon {
            pivots: HashMap::with_capacity(rows),
            starts,
            arena: Vec::with_capacity(entries),
        }
    }

    pub fn rank(&self) -> usize {
        self.starts.len() - 1
    }

    fn row(&self, k: u32) -> &[(u64, S)] {
        &self.arena[self.starts[k as usize]..self.starts[k as usize + 1]]
    }

    /// Adds a row given as `(column, value)` pairs in any order; returns whether it was independent.
    pub fn insert(&mut self, mut row: Vec<(u64, S)>) -> bool {
        row.sort_by(|a, b| b.0.cmp(&a.0));
        let mut v: Vec<(u64, S)> = Vec::with_capacity(row.len());
        for (c, x) in row {
            match v.last_mut() {
                Some(last) if last.0 == c => last.1 = last.1.clone() + x,
                _ => v.push((c, x)),
            }
        }
        v.retain(|e| !e.1.is_zero());
        loop {
            let Some(&(lead, ref lv)) = v.first() else {
                return false;
            };
            let Some(&k) = self.pivots.get(&lead) else {
                break;
            };
            let p = self.row(k);
            let f = lv.clone() / p[0].1.clone();
            let mut out = Vec::with_capacity(v.len() + p.len());
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < p.len() {
                if j == p.len() || (i < v.len() && v[i].0 > p[j].0) {
                    out.push(v[i].clone());
                    i += 1;
                } else if i == v.len() || p[j].0 > v[i].0 {
                    out.push((p[j].0, -(f.clone() * p[j].1.clone())));
                    j += 1;
                } else {
                    let x = v[i].1.clone() - f.clone() * p[j].1.clone();
                    if !x.is_zero() {
                        out.push((v[i].0, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            v = out;
        }
        let k = self.rank() as u32;
        self.pivots.insert(v[0].0, k);
        self.arena.extend(v);
        self.starts.push(self.arena.len());
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use crate::scalar::Fp;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(bareiss_rank(bi(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(bareiss_rank(bi(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(bareiss_rank(bi(&[&[0, 1, 0], &[0, 0, 1], &[0, 1, 1]])), 2);
        assert_eq!(bareiss_det(bi(&[&[2, 1], &[1, 1]])), BigInt::from(1));
        assert_eq!(bareiss_det(bi(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            bareiss_det(bi(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
    }

    #[test]
    fn rational_rank_clears_denominators() {
        let rows = vec![vec![q(1, 2), q(1, 3)], vec![q(3, 2), q(1, 1)]];
        assert_eq!(rank_rational(&rows), 1);
    }

    #[test]
    fn solve_span() {
        let basis = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(
            solve_in_span(&basis, &[2, 3, 5]).unwrap(),
            vec![q(2, 1), q(3, 1)]
        );
        assert!(solve_in_span(&basis, &[1, 1, 1]).is_none());
    }

    #[test]
    fn echelons_agree_with_bareiss() {
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 2, 0, 1],
            vec![0, 1, 1, 1],
            vec![1, 3, 1, 2],
            vec![2, 0, 0, 5],
        ];
        let mut d = DenseEchelon::<Fp>::new(4);
        let mut s = SparseEchelon::<Fp>::new();
        for r in &rows {
            d.insert(r.iter().map(|&x| Fp::from_i64(x)).collect());
            s.insert(
                r.iter()
                    .enumerate()
                    .map(|(i, &x)| (i as u64, Fp::from_i64(x)))
                    .collect(),
            );
        }
        let want = bareiss_rank(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        );
        assert_eq!(want, 3);
        assert_eq!(d.rank(), want);
        assert_eq!(s.rank(), want);
    }
}
