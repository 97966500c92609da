#![allow(dead_code)]

use abelcover::surfacegroup::Letter;
use abelcover::{q, GroupRing, LatticeVector, Rational, Word};
use proptest::prelude::*;

pub const G: usize = 4;

pub fn lattice(bound: i64) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-bound..=bound, 2 * G).prop_map(|c| LatticeVector::new(c).unwrap())
}

pub fn block_vector(d: usize, bound: i64) -> impl Strategy<Value = LatticeVector> {
    (-bound..=bound, -bound..=bound)
        .prop_map(move |(n, m)| LatticeVector::a(G, d).scale(n) + LatticeVector::b(G, d).scale(m))
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

pub fn element(bound: i64) -> impl Strategy<Value = GroupRing> {
    prop::collection::vec((lattice(bound), rational()), 0..5).prop_map(|terms| {
        let mut e = GroupRing::zero(G);
        for (h, c) in terms {
            e.add_term(h, c);
        }
        e
    })
}

pub fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=2 * G as u16, any::<bool>()), 0..=max_len).prop_map(|ls| {
        Word::from_letters(
            G,
            ls.into_iter()
                .map(|(g, inv)| Letter::new(g, if inv { -1 } else { 1 })),
        )
        .unwrap()
    })
}

/// A product of commutators conjugated by a random word.
pub fn loop_word() -> impl Strategy<Value = Word> {
    (prop::collection::vec((word(3), word(3)), 1..=2), word(2)).prop_map(|(pairs, u)| {
        let mut w = Word::identity(G);
        for (x, y) in pairs {
            w = w.multiply(&Word::commutator(&x, &y).unwrap()).unwrap();
        }
        Word::conjugate(&u, &w).unwrap()
    })
}

/// `[h] − [h+x] − [h+y] + [h+x+y]`, written out independently of the library.
pub fn four_term(h: &LatticeVector, x: &LatticeVector, y: &LatticeVector) -> GroupRing {
    let s = |v: LatticeVector, c: i64| (v, Rational::from_integer(c.into()));
    GroupRing::from_terms(
        G,
        [
            s(h.clone(), 1),
            s(h + x, -1),
            s(h + y, -1),
            s(&(h + x) + y, 1),
        ],
    )
    .unwrap()
}
