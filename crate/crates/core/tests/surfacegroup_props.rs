mod common;

use abelcover::surfacegroup::Letter;
use abelcover::symkernel::Wedge2;
use abelcover::{q, GroupRing, LatticeVector, Word};
use common::{loop_word, word, G};
use proptest::prelude::*;

/// Fox derivative computed from its defining recursion, independently of the library.
fn fox_reference(w: &Word, gen: u16) -> GroupRing {
    let mut out = GroupRing::zero(G);
    let mut prefix = LatticeVector::zero(G);
    for l in w.letters() {
        let class = l.class(G);
        if l.gen == gen {
            if l.sign > 0 {
                out.add_term(prefix.clone(), q(1, 1));
            } else {
                out.add_term(&prefix + &class, q(-1, 1));
            }
        }
        prefix = prefix + class;
    }
    out
}

proptest! {
    #[test]
    fn group_laws(w in word(8), v in word(8), u in word(8)) {
        let wv = w.multiply(&v).unwrap();
        prop_assert_eq!(wv.multiply(&u).unwrap(), w.multiply(&v.multiply(&u).unwrap()).unwrap());
        prop_assert!(w.multiply(&w.invert()).unwrap().is_empty());
        prop_assert_eq!(wv.invert(), v.invert().multiply(&w.invert()).unwrap());
        prop_assert_eq!(wv.homology_class(), w.homology_class() + v.homology_class());
    }

    #[test]
    fn words_are_freely_reduced(w in word(12)) {
        for pair in w.letters().windows(2) {
            prop_assert!(pair[0] != pair[1].inverse());
        }
    }

    #[test]
    fn text_round_trip(w in word(10)) {
        prop_assert_eq!(Word::parse(G, &w.to_string()).unwrap(), w);
    }

    #[test]
    fn conjugates_cancel(w in word(6), v in word(6)) {
        let a = Word::conjugate(&w, &v).unwrap();
        let b = Word::conjugate(&w, &v.invert()).unwrap();
        prop_assert!(a.multiply(&b).unwrap().is_empty());
    }

    #[test]
    fn projection_is_additive_and_coinvariant(w in loop_word(), v in loop_word(), u in word(6)) {
        let rw = w.commutator_projection().unwrap();
        let rv = v.commutator_projection().unwrap();
        prop_assert_eq!(w.multiply(&v).unwrap().commutator_projection().unwrap(), rw.add(&rv));
        prop_assert_eq!(Word::conjugate(&u, &w).unwrap().commutator_projection().unwrap(), rw.clone());
        prop_assert!(w.multiply(&w.invert()).unwrap().commutator_projection().unwrap().is_zero());
    }

    #[test]
    fn projection_of_commutator_is_wedge(x in word(5), y in word(5)) {
        let c = Word::commutator(&x, &y).unwrap();
        prop_assert_eq!(c.commutator_projection().unwrap(), Wedge2::wedge(&x.homology_class(), &y.homology_class()));
    }

    #[test]
    fn projection_of_block_boundaries(blocks in prop::sample::subsequence(vec![1usize, 2, 3, 4], 1..=4)) {
        let mut w = Word::identity(G);
        let mut want = Wedge2::zero(G);
        for &d in &blocks {
            let c = Word::commutator(&Word::letter(G, Letter::alpha(d)), &Word::letter(G, Letter::beta(d))).unwrap();
            w = w.multiply(&c).unwrap();
            want = want.add(&Wedge2::wedge(&LatticeVector::a(G, d), &LatticeVector::b(G, d)));
        }
        prop_assert_eq!(w.commutator_projection().unwrap(), want);
    }

    #[test]
    fn fox_matches_recursion_and_fundamental_identity(w in word(10)) {
        let zero = LatticeVector::zero(G);
        let mut total = GroupRing::zero(G);
        for gen in 1..=2 * G as u16 {
            let d = w.fox_derivative(gen).unwrap();
            prop_assert_eq!(&d, &fox_reference(&w, gen));
            let e = LatticeVector::unit(G, gen as usize - 1);
            total = total.add(&d.mul(&GroupRing::from_int_terms(G, [(&e, 1), (&zero, -1)])).unwrap()).unwrap();
        }
        prop_assert_eq!(total, GroupRing::from_int_terms(G, [(&w.homology_class(), 1), (&zero, -1)]));
    }

    #[test]
    fn fox_product_rule(w in word(6), v in word(6), gen in 1..=2 * G as u16) {
        let lhs = w.multiply(&v).unwrap().fox_derivative(gen).unwrap();
        let rhs = w
            .fox_derivative(gen)
            .unwrap()
            .add(&v.fox_derivative(gen).unwrap().translate(&w.homology_class()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclic_reduction_recovers_word(w in word(10)) {
        let (u, core) = w.cyclic_reduction();
        prop_assert_eq!(Word::conjugate(&u, &core).unwrap(), w);
        if let (Some(f), Some(l)) = (core.letters().first(), core.letters().last()) {
            prop_assert!(core.len() == 1 || *f != l.inverse());
        }
    }
}

#[test]
fn projection_rejects_nontrivial_homology() {
    assert!(Word::parse(G, "a1")
        .unwrap()
        .commutator_projection()
        .is_err());
}
