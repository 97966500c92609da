//! Integer vectors in the symplectic lattice Z^{2g}, coordinates ordered (a_1, b_1, ..., a_g, b_g).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn zero(genus: usize) -> Self {
        LatticeVector(vec![0; 2 * genus])
    }

    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(Error::Parse(format!(
                "lattice vector needs an even positive length, got {}",
                coords.len()
            )));
        }
        Ok(LatticeVector(coords))
    }

    /// The 0-based `i`-th standard basis vector.
    pub fn unit(genus: usize, i: usize) -> Self {
        let mut v = Self::zero(genus);
        v.0[i] = 1;
        v
    }

    /// `a_d`, with `d` 1-based.
    pub fn a(genus: usize, d: usize) -> Self {
        Self::unit(genus, 2 * (d - 1))
    }

    /// `b_d`, with `d` 1-based.
    pub fn b(genus: usize, d: usize) -> Self {
        Self::unit(genus, 2 * (d - 1) + 1)
    }

    pub fn genus(&self) -> usize {
        self.0.len() / 2
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Coordinates `(a_d, b_d)` of block `d` (1-based).
    pub fn block(&self, d: usize) -> (i64, i64) {
        (self.0[2 * (d - 1)], self.0[2 * (d - 1) + 1])
    }

    /// The component of `self` in block `d`.
    pub fn block_part(&self, d: usize) -> Self {
        let mut v = Self::zero(self.genus());
        v.0[2 * (d - 1)] = self.0[2 * (d - 1)];
        v.0[2 * (d - 1) + 1] = self.0[2 * (d - 1) + 1];
        v
    }

    /// Sum of block components over `d in range`.
    pub fn blocks_part(&self, range: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zero(self.genus());
        for d in range {
            v.0[2 * (d - 1)] = self.0[2 * (d - 1)];
            v.0[2 * (d - 1) + 1] = self.0[2 * (d - 1) + 1];
        }
        v
    }

    /// 1-based indices of blocks carrying a nonzero coordinate, ascending.
    pub fn nonzero_blocks(&self) -> Vec<usize> {
        (1..=self.genus())
            .filter(|&d| self.block(d) != (0, 0))
            .collect()
    }

    pub fn block_count(&self) -> usize {
        (1..=self.genus())
            .filter(|&d| self.block(d) != (0, 0))
            .count()
    }

    /// The symplectic form with ω(a_i, b_i) = 1.
    pub fn omega(&self, other: &Self) -> i64 {
        self.0
            .chunks(2)
            .zip(other.0.chunks(2))
            .map(|(u, v)| u[0] * v[1] - u[1] * v[0])
            .sum()
    }

    pub fn check_genus(&self, genus: usize) -> Result<()> {
        crate::error::same_genus(self.genus(), genus)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints as a combination of basis names, e.g. `a1+2b3`, with `0` for the origin.
impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = format!("{}{}", if i % 2 == 0 { 'a' } else { 'b' }, i / 2 + 1);
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.0.len(), o.0.len());
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.0.len(), o.0.len());
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: LatticeVector) -> LatticeVector {
        &self + &o
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: LatticeVector) -> LatticeVector {
        &self - &o
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_on_basis() {
        let g = 4;
        assert_eq!(LatticeVector::a(g, 2).omega(&LatticeVector::b(g, 2)), 1);
        assert_eq!(LatticeVector::b(g, 2).omega(&LatticeVector::a(g, 2)), -1);
        assert_eq!(LatticeVector::a(g, 1).omega(&LatticeVector::b(g, 2)), 0);
    }

    #[test]
    fn display_names() {
        let v = LatticeVector::new(vec![1, 0, 0, -2, 0, 0, 0, 0]).unwrap();
        assert_eq!(v.to_string(), "a1-2b2");
        assert_eq!(LatticeVector::zero(4).to_string(), "0");
        assert_eq!(v.nonzero_blocks(), vec![1, 2]);
    }
}
