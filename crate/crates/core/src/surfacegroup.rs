//! Freely reduced words in the generators α_1, β_1, ..., α_g, β_g of the surface group,
//! their homology classes, the commutator projection to ∧²H and abelianized Fox derivatives.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{same_genus, Error, Result};
use crate::lattice::LatticeVector;
use crate::symkernel::Wedge2;
use crate::{q, GroupRing, Rational};

/// A generator (1-based: α_i = 2i-1, β_i = 2i) raised to `sign = ±1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    #[serde(rename = "g")]
    pub gen: u16,
    #[serde(rename = "s")]
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: u16, sign: i8) -> Self {
        debug_assert!(gen >= 1 && (sign == 1 || sign == -1));
        Letter { gen, sign }
    }

    pub fn alpha(i: usize) -> Self {
        Letter::new((2 * i - 1) as u16, 1)
    }

    pub fn beta(i: usize) -> Self {
        Letter::new((2 * i) as u16, 1)
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            sign: -self.sign,
        }
    }

    /// 0-based lattice coordinate of the generator.
    pub fn coord(self) -> usize {
        self.gen as usize - 1
    }

    /// Block index of the generator (1-based).
    pub fn block(self) -> usize {
        (self.gen as usize + 1) / 2
    }

    pub fn is_alpha(self) -> bool {
        self.gen % 2 == 1
    }

    pub fn class(self, genus: usize) -> LatticeVector {
        LatticeVector::unit(genus, self.coord()).scale(self.sign as i64)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_alpha() { 'a' } else { 'b' };
        write!(
            f,
            "{kind}{}{}",
            self.block(),
            if self.sign < 0 { "'" } else { "" }
        )
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    genus: usize,
    letters: Vec<Letter>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Word {
    pub fn identity(genus: usize) -> Self {
        Word {
            genus,
            letters: Vec::new(),
        }
    }

    /// Builds a word from arbitrary letters, reducing freely.
    pub fn from_letters(genus: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out = Vec::new();
        for l in letters {
            if l.gen == 0 || l.gen as usize > 2 * genus || (l.sign != 1 && l.sign != -1) {
                return Err(Error::Parse(format!(
                    "letter {l:?} invalid for genus {genus}"
                )));
            }
            push_reduced(&mut out, l);
        }
        Ok(Word {
            genus,
            letters: out,
        })
    }

    pub fn letter(genus: usize, l: Letter) -> Self {
        Word {
            genus,
            letters: vec![l],
        }
    }

    pub fn parse(genus: usize, s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (body, sign) = match tok.strip_suffix('\'') {
                Some(b) => (b, -1),
                None => (tok, 1),
            };
            let mut chars = body.chars();
            let kind = chars
                .next()
                .ok_or_else(|| Error::Parse(format!("empty token in {s:?}")))?;
            let idx: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator token {tok:?}")))?;
            if idx == 0 || idx > genus {
                return Err(Error::Parse(format!(
                    "generator index in {tok:?} outside 1..={genus}"
                )));
            }
            let l = match kind {
                'a' => Letter::alpha(idx),
                'b' => Letter::beta(idx),
                _ => return Err(Error::Parse(format!("bad generator token {tok:?}"))),
            };
            letters.push(Letter { sign, ..l });
        }
        Word::from_letters(genus, letters)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        same_genus(self.genus, other.genus)?;
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word {
            genus: self.genus,
            letters: out,
        })
    }

    pub fn invert(&self) -> Word {
        Word {
            genus: self.genus,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Result<Word> {
        x.multiply(y)?.multiply(&x.invert())?.multiply(&y.invert())
    }

    /// `y x y⁻¹`.
    pub fn conjugate(y: &Word, x: &Word) -> Result<Word> {
        y.multiply(x)?.multiply(&y.invert())
    }

    /// Signed letter count per generator.
    pub fn homology_class(&self) -> LatticeVector {
        let mut c = vec![0i64; 2 * self.genus];
        for l in &self.letters {
            c[l.coord()] += l.sign as i64;
        }
        LatticeVector::new(c).expect("genus is positive")
    }

    /// Homology classes of the prefixes of length 1..=len.
    pub fn prefix_classes(&self) -> Vec<LatticeVector> {
        let mut c = vec![0i64; 2 * self.genus];
        self.letters
            .iter()
            .map(|l| {
                c[l.coord()] += l.sign as i64;
                LatticeVector::new(c.clone()).expect("genus is positive")
            })
            .collect()
    }

    /// Writes `self = u · core · u⁻¹` with `core` cyclically reduced; returns `(u, core)`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let u = Word {
            genus: self.genus,
            letters: self.letters[..k].to_vec(),
        };
        let core = Word {
            genus: self.genus,
            letters: self.letters[k..n - k].to_vec(),
        };
        (u, core)
    }

    /// The commutator projection to ∧²H, defined on words of trivial homology.
    pub fn commutator_projection(&self) -> Result<Wedge2> {
        if !self.homology_class().is_zero() {
            return Err(Error::Precondition(format!(
                "commutator projection needs trivial homology, word {self} has class {}",
                self.homology_class()
            )));
        }
        Ok(wedge_half_sum(self).scale(projection_normalization()))
    }

    /// Abelianized Fox derivative with respect to generator `gen` (1-based).
    pub fn fox_derivative(&self, gen: u16) -> Result<GroupRing> {
        if gen == 0 || gen as usize > 2 * self.genus {
            return Err(Error::Precondition(format!(
                "generator {gen} outside 1..={}",
                2 * self.genus
            )));
        }
        let mut out = GroupRing::zero(self.genus);
        let mut prefix = LatticeVector::zero(self.genus);
        for l in &self.letters {
            let next = &prefix + &l.class(self.genus);
            if l.gen == gen {
                if l.sign > 0 {
                    out.add_term(prefix.clone(), Rational::one());
                } else {
                    out.add_term(next.clone(), -Rational::one());
                }
            }
            prefix = next;
        }
        Ok(out)
    }
}

/// The unnormalized sum `Σ_{j<l} v_j ∧ v_l` over the letter classes of `w`.
fn wedge_half_sum(w: &Word) -> Wedge2 {
    let g = w.genus;
    let mut acc = Wedge2::zero(g);
    let mut seen = vec![0i64; 2 * g];
    for l in &w.letters {
        let j = l.coord();
        for (i, &s) in seen.iter().enumerate() {
            if s != 0 && i != j {
                acc.add_basis(i, j, &q(s * l.sign as i64, 1));
            }
        }
        seen[j] += l.sign as i64;
    }
    acc
}

/// The scalar turning [`wedge_half_sum`] into the commutator projection, fixed by [x, y] ↦ x̄ ∧ ȳ on generators
/// and checked on every generator pair the first time it is requested.
pub fn projection_normalization() -> &'static Rational {
    static NORM: OnceLock<Rational> = OnceLock::new();
    NORM.get_or_init(|| {
        let g = crate::error::MIN_GENUS;
        let x = Word::letter(g, Letter::alpha(1));
        let y = Word::letter(g, Letter::beta(1));
        let raw = wedge_half_sum(&Word::commutator(&x, &y).expect("same genus"));
        let c = raw.coeff(0, 1);
        assert!(!c.is_zero(), "commutator projection degenerate");
        let norm = Rational::one() / c;
        for i in 1..=2 * g as u16 {
            for j in 1..=2 * g as u16 {
                let x = Word::letter(g, Letter::new(i, 1));
                let y = Word::letter(g, Letter::new(j, 1));
                let got =
                    wedge_half_sum(&Word::commutator(&x, &y).expect("same genus")).scale(&norm);
                let mut want = Wedge2::zero(g);
                if i != j {
                    want.add_basis(i as usize - 1, j as usize - 1, &Rational::one());
                }
                assert_eq!(got, want, "normalization fails on generators {i}, {j}");
            }
        }
        norm
    })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Parses the text format with the genus taken from the largest generator index.
impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let g = s
            .split_whitespace()
            .filter_map(|t| {
                t.trim_end_matches('\'')
                    .get(1..)
                    .and_then(|d| d.parse::<usize>().ok())
            })
            .max()
            .unwrap_or(crate::error::MIN_GENUS)
            .max(crate::error::MIN_GENUS);
        Word::parse(g, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: usize = 4;

    fn w(s: &str) -> Word {
        Word::parse(G, s).unwrap()
    }

    #[test]
    fn reduction_and_ops() {
        assert!(w("a1 b1 b1' a1'").is_empty());
        let c = Word::commutator(&w("a1"), &w("b1")).unwrap();
        assert_eq!(c.to_string(), "a1 b1 a1' b1'");
        let v = w("b2 a3");
        let x = w("a1 b4'");
        let prod = Word::conjugate(&x, &v)
            .unwrap()
            .multiply(&Word::conjugate(&x, &v.invert()).unwrap())
            .unwrap();
        assert!(prod.is_empty());
    }

    #[test]
    fn homology_examples() {
        assert!(w("a1 b1 a1' b1'").homology_class().is_zero());
        let h = w("a1 a1 b3'").homology_class();
        assert_eq!(h.coords(), &[2, 0, 0, 0, 0, -1, 0, 0]);
    }

    #[test]
    fn projection_on_commutator_and_boundary() {
        let r = w("a1 b1 a1' b1'").commutator_projection().unwrap();
        let mut want = Wedge2::zero(G);
        want.add_basis(0, 1, &q(1, 1));
        assert_eq!(r, want);
        let boundary = w("a1 b1 a1' b1' a2 b2 a2' b2' a3 b3 a3' b3' a4 b4 a4' b4'");
        assert_eq!(boundary.commutator_projection().unwrap(), Wedge2::omega(G));
        assert!(w("a1").commutator_projection().is_err());
    }

    #[test]
    fn fox_examples() {
        let d = w("a1 b2 a1'").fox_derivative(4).unwrap();
        assert_eq!(d, GroupRing::basis(LatticeVector::a(G, 1)));
        let d = w("a1'").fox_derivative(1).unwrap();
        assert_eq!(d, GroupRing::basis(-LatticeVector::a(G, 1)).neg());
    }

    #[test]
    fn cyclic_reduction_splits_conjugator() {
        let x = w("a2 b1 a1 b1' a1' a2'");
        let (u, core) = x.cyclic_reduction();
        assert_eq!(u.to_string(), "a2");
        assert_eq!(core.to_string(), "b1 a1 b1' a1'");
    }

    #[test]
    fn text_round_trip() {
        let x = w("a1 b3 a1' b4");
        assert_eq!(Word::parse(G, &x.to_string()).unwrap(), x);
        assert!(Word::parse(G, "c1").is_err());
        assert!(Word::parse(G, "a5").is_err());
    }
}
