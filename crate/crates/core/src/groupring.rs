//! The group ring of the lattice Z^{2g}: sparse exact combinations of lattice points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{same_genus, Result};
use crate::lattice::LatticeVector;
use crate::scalar::Scalar;

/// A finite combination `Σ c_h [h]`. Zero coefficients are never stored and
/// terms iterate in lexicographic order of their lattice points.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElem<S> {
    genus: usize,
    terms: BTreeMap<LatticeVector, S>,
}

/// Operations accepted by [`GroupRingElem::combine`].
pub enum CombineOp<'a, S> {
    Add(&'a GroupRingElem<S>),
    Scale(&'a S),
    Multiply(&'a GroupRingElem<S>),
}

impl<S: Scalar> GroupRingElem<S> {
    pub fn zero(genus: usize) -> Self {
        GroupRingElem {
            genus,
            terms: BTreeMap::new(),
        }
    }

    /// The basis element `[h]`.
    pub fn basis(h: LatticeVector) -> Self {
        let genus = h.genus();
        let mut terms = BTreeMap::new();
        terms.insert(h, S::one());
        GroupRingElem { genus, terms }
    }

    pub fn from_terms(
        genus: usize,
        terms: impl IntoIterator<Item = (LatticeVector, S)>,
    ) -> Result<Self> {
        let mut out = Self::zero(genus);
        for (h, c) in terms {
            h.check_genus(genus)?;
            out.add_term(h, c);
        }
        Ok(out)
    }

    /// Integer-coefficient constructor for callers that already validated genus.
    pub fn from_int_terms<'a>(
        genus: usize,
        terms: impl IntoIterator<Item = (&'a LatticeVector, i64)>,
    ) -> Self {
        let mut out = Self::zero(genus);
        for (h, c) in terms {
            debug_assert_eq!(h.genus(), genus);
            out.add_term(h.clone(), S::from_i64(c));
        }
        out
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (LatticeVector, S)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, h: &LatticeVector) -> S {
        self.terms.get(h).cloned().unwrap_or_else(S::zero)
    }

    /// In-place `self += c [h]`.
    pub fn add_term(&mut self, h: LatticeVector, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(h) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// In-place `self += c·other`.
    pub fn add_scaled(&mut self, other: &Self, factor: &S) -> Result<()> {
        same_genus(self.genus, other.genus)?;
        for (h, c) in &other.terms {
            self.add_term(h.clone(), c.clone() * factor.clone());
        }
        Ok(())
    }

    pub fn combine(&self, op: CombineOp<'_, S>) -> Result<Self> {
        match op {
            CombineOp::Add(b) => self.add(b),
            CombineOp::Scale(l) => Ok(self.scale(l)),
            CombineOp::Multiply(b) => self.mul(b),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &S::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one())?;
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.genus);
        if factor.is_zero() {
            return out;
        }
        for (h, c) in &self.terms {
            out.terms.insert(h.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// Convolution product: `[h1]·[h2] = [h1+h2]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_genus(self.genus, other.genus)?;
        let mut out = Self::zero(self.genus);
        for (h1, c1) in &self.terms {
            for (h2, c2) in &other.terms {
                out.add_term(h1 + h2, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// Deck translation: every `[k]` becomes `[k+h]`.
    pub fn translate(&self, h: &LatticeVector) -> Result<Self> {
        h.check_genus(self.genus)?;
        let terms = self.terms.iter().map(|(k, c)| (k + h, c.clone())).collect();
        Ok(GroupRingElem {
            genus: self.genus,
            terms,
        })
    }

    /// Augmentation `Σ c_h`.
    pub fn augment(&self) -> S {
        self.terms
            .values()
            .fold(S::zero(), |acc, c| acc + c.clone())
    }

    /// The lattice-valued map `Σ c_h · h`.
    pub fn hmap(&self) -> Vec<S> {
        let mut out = vec![S::zero(); 2 * self.genus];
        for (h, c) in &self.terms {
            for (o, &x) in out.iter_mut().zip(h.coords()) {
                if x != 0 {
                    *o = o.clone() + c.clone() * S::from_i64(x);
                }
            }
        }
        out
    }

    /// `Σ c_h [h] ↦ Σ c_h [-h]`.
    pub fn involution(&self) -> Self {
        let terms = self.terms.iter().map(|(h, c)| (-h, c.clone())).collect();
        GroupRingElem {
            genus: self.genus,
            terms,
        }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GroupRingElem<T> {
        let mut out = GroupRingElem::zero(self.genus);
        for (h, c) in &self.terms {
            out.add_term(h.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for GroupRingElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (h, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            if mag == "1" {
                write!(f, "{sign}[{h}]")?;
            } else {
                write!(f, "{sign}{mag}[{h}]")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for GroupRingElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    h: LatticeVector,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct ElemDto {
    genus: usize,
    terms: Vec<TermDto>,
}

impl Serialize for GroupRingElem<BigRational> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let dto = ElemDto {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(h, c)| TermDto {
                    h: h.clone(),
                    c: c.to_string(),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupRingElem<BigRational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = ElemDto::deserialize(d)?;
        let mut out = GroupRingElem::zero(dto.genus);
        for t in dto.terms {
            if t.h.genus() != dto.genus {
                return Err(D::Error::custom(format!(
                    "term {} has wrong length for genus {}",
                    t.h, dto.genus
                )));
            }
            let c = BigRational::from_str(&t.c)
                .map_err(|e| D::Error::custom(format!("coefficient {:?}: {e}", t.c)))?;
            out.add_term(t.h, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, GroupRing};

    fn lv(g: usize, i: usize) -> LatticeVector {
        LatticeVector::unit(g, i)
    }

    #[test]
    fn cancellation_and_group_law() {
        let g = 4;
        let o = GroupRing::basis(LatticeVector::zero(g));
        assert!(o.sub(&o).unwrap().is_zero());
        let p = GroupRing::basis(lv(g, 0))
            .mul(&GroupRing::basis(lv(g, 1)))
            .unwrap();
        assert_eq!(p, GroupRing::basis(&lv(g, 0) + &lv(g, 1)));
    }

    #[test]
    fn scale_half() {
        let g = 4;
        let e = GroupRing::basis(lv(g, 0))
            .sub(&GroupRing::basis(lv(g, 1)))
            .unwrap();
        let s = e.scale(&q(1, 2));
        assert_eq!(s.coeff(&lv(g, 0)), q(1, 2));
        assert_eq!(s.coeff(&lv(g, 1)), q(-1, 2));
        assert_eq!(s.to_string(), "-1/2[b1] + 1/2[a1]");
    }

    #[test]
    fn translate_examples() {
        let g = 4;
        let a1 = LatticeVector::a(g, 1);
        let elem = GroupRing::basis(LatticeVector::zero(g))
            .sub(&GroupRing::basis(LatticeVector::b(g, 2)))
            .unwrap();
        let t = elem.translate(&a1).unwrap();
        let want = GroupRing::basis(a1.clone())
            .sub(&GroupRing::basis(&a1 + &LatticeVector::b(g, 2)))
            .unwrap();
        assert_eq!(t, want);
        assert_eq!(elem.translate(&LatticeVector::zero(g)).unwrap(), elem);
    }

    #[test]
    fn augmentation_and_hmap() {
        let g = 4;
        let e = GroupRing::from_int_terms(g, [(&lv(g, 0), 2), (&lv(g, 1), 3)]);
        assert_eq!(e.augment(), q(5, 1));
        assert_eq!(e.hmap()[0], q(2, 1));
        assert_eq!(e.hmap()[1], q(3, 1));
    }

    #[test]
    fn involution_examples() {
        let g = 4;
        let e = GroupRing::from_int_terms(g, [(&lv(g, 0), 1), (&lv(g, 1), -2)]);
        let want = GroupRing::from_int_terms(g, [(&-&lv(g, 0), 1), (&-&lv(g, 1), -2)]);
        assert_eq!(e.involution(), want);
        let o = GroupRing::basis(LatticeVector::zero(g));
        assert_eq!(o.involution(), o);
    }

    #[test]
    fn genus_mismatch_is_error() {
        let a = GroupRing::basis(LatticeVector::zero(4));
        let b = GroupRing::basis(LatticeVector::zero(5));
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn json_shape() {
        let g = 4;
        let e = GroupRing::from_terms(g, [(lv(g, 0), q(3, 2))]).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"genus":4,"terms":[{"h":[1,0,0,0,0,0,0,0],"c":"3/2"}]}"#
        );
        let back: GroupRing = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
