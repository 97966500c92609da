mod common;

use abelcover::xcalculus::{
    apply_relation, corner_cycle, is_w1, is_w2, p_lift, project_group_ring, reduce_to_w1,
    reduce_to_w2, x_q, y_canonicalize, y_expr_image, y_image, y_relation_residual, zw_image, Dir,
    Relation, XExpr, XSym, YSym, ZwKind, ZwSym,
};
use abelcover::{q, GroupRing, LatticeVector, Rational};
use common::{block_vector, element, four_term, lattice, G};
use proptest::prelude::*;

fn zero() -> LatticeVector {
    LatticeVector::zero(G)
}

/// Level-1 reference: a multi-block `[z]` becomes `Σ_d [z_d] − (r−1)[0]`.
fn level1_reference(elem: &GroupRing) -> GroupRing {
    let mut out = GroupRing::zero(G);
    for (z, c) in elem.terms() {
        let blocks = z.nonzero_blocks();
        if blocks.len() < 2 {
            out.add_term(z.clone(), c.clone());
            continue;
        }
        for &d in &blocks {
            out.add_term(z.block_part(d), c.clone());
        }
        out.add_term(zero(), -c * q(blocks.len() as i64 - 1, 1));
    }
    out
}

/// Level-2 reference: single-block terms interpolated bilinearly onto the unit square.
fn level2_reference(elem: &GroupRing) -> GroupRing {
    let mut out = GroupRing::zero(G);
    for (z, c) in level1_reference(elem).terms() {
        let Some(&d) = z.nonzero_blocks().first() else {
            out.add_term(z.clone(), c.clone());
            continue;
        };
        let (n, m) = z.block(d);
        let (a, b) = (LatticeVector::a(G, d), LatticeVector::b(G, d));
        out.add_term(zero(), c * q((1 - n) * (1 - m), 1));
        out.add_term(a.clone(), c * q(n * (1 - m), 1));
        out.add_term(b.clone(), c * q((1 - n) * m, 1));
        out.add_term(a + b, c * q(n * m, 1));
    }
    out
}

fn v1_symbol() -> impl Strategy<Value = XSym> {
    (1..=G, lattice(3), any::<u8>())
        .prop_flat_map(|(d, h, mask)| {
            let others: Vec<usize> = (1..=G)
                .filter(|&e| e != d && mask & (1 << e) != 0)
                .collect();
            (Just(h), block_vector(d, 3), lattice(3), Just(others))
        })
        .prop_filter_map("nonzero first argument", |(h, x, y, others)| {
            let y = y.blocks_part(others);
            (!x.is_zero()).then(|| XSym::v1(h, x, y).unwrap())
        })
}

fn y_symbol() -> impl Strategy<Value = YSym> {
    (1..=G, any::<bool>()).prop_flat_map(|(d, is_a)| {
        block_vector(d, 5)
            .prop_map(move |h| YSym::new(d, h, if is_a { Dir::A } else { Dir::B }).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn image_is_four_term(s in v1_symbol()) {
        prop_assert_eq!(s.x_q(), four_term(&s.h, &s.x, &s.y));
    }

    #[test]
    fn relations_preserve_image(s in v1_symbol(), split in block_vector(1, 2), k in block_vector(1, 2)) {
        let d = s.x.nonzero_blocks()[0];
        let shift = |v: &LatticeVector| {
            let (n, m) = v.block(1);
            LatticeVector::a(G, d).scale(n) + LatticeVector::b(G, d).scale(m)
        };
        for rel in [
            Relation::Symmetry,
            Relation::Inverse,
            Relation::Additivity { x1: shift(&split) },
            Relation::Cube { k: shift(&k) },
        ] {
            let out = apply_relation(&rel, &s).unwrap();
            prop_assert_eq!(x_q(&out), s.x_q(), "{:?}", rel);
        }
    }

    #[test]
    fn reduction_to_first_family(s in v1_symbol()) {
        let out = reduce_to_w1(&s).unwrap();
        prop_assert!(out.terms().all(|(t, _)| is_w1(&t.h, &t.x, &t.y)));
        prop_assert_eq!(x_q(&out), s.x_q());
        if is_w1(&s.h, &s.x, &s.y) {
            prop_assert_eq!(out, XExpr::from_sym(s));
        }
    }

    #[test]
    fn level1_projection(elem in element(3)) {
        let p = project_group_ring(1, &elem).unwrap();
        prop_assert_eq!(&p, &level1_reference(&elem));
        prop_assert_eq!(project_group_ring(1, &p).unwrap(), p);
    }

    #[test]
    fn level2_projection(elem in element(3)) {
        let p = project_group_ring(2, &elem).unwrap();
        prop_assert_eq!(&p, &level2_reference(&elem));
        prop_assert_eq!(p.augment(), elem.augment());
        prop_assert_eq!(project_group_ring(2, &p).unwrap(), p);
    }

    #[test]
    fn projections_kill_first_family_images(s in v1_symbol()) {
        prop_assert!(project_group_ring(1, &s.x_q()).unwrap().is_zero());
    }

    #[test]
    fn lift_inverts_projection(z in lattice(3)) {
        prop_assume!(z.block_count() >= 2);
        let img = x_q(&p_lift(&z).unwrap());
        prop_assert!(img.augment() == Rational::from_integer(0.into()));
        let mut want = GroupRing::basis(z.clone());
        want = want.sub(&level1_reference(&want)).unwrap();
        prop_assert_eq!(img, want);
    }

    #[test]
    fn second_family_reduction(s in y_symbol()) {
        let out = reduce_to_w2(&s);
        prop_assert!(out.keys().all(is_w2));
        let img = y_expr_image(&out).unwrap_or_else(|| GroupRing::zero(G));
        prop_assert_eq!(img, y_image(&s));
        prop_assert!(project_group_ring(2, &y_image(&s)).unwrap().is_zero());
    }

    #[test]
    fn y_relation_vanishes(d in 1..=G, h in block_vector(1, 4)) {
        let (n, m) = h.block(1);
        let h = LatticeVector::a(G, d).scale(n) + LatticeVector::b(G, d).scale(m);
        prop_assert!(y_relation_residual(d, &h).unwrap().is_zero());
    }

    #[test]
    fn y_image_of_second_family(d in 1..=G, off in 0..G - 1, x_is_a in any::<bool>(), y_is_a in any::<bool>(), neg in any::<bool>(), h in lattice(3)) {
        let e = (d + off) % G + 1;
        let x = if x_is_a { LatticeVector::a(G, d) } else { LatticeVector::b(G, d) };
        let y = if y_is_a { LatticeVector::a(G, e) } else { LatticeVector::b(G, e) };
        let y = if neg { -y } else { y };
        let s = XSym::v2(h.clone(), x.clone(), y.clone()).unwrap();
        let hd = h.block_part(d);
        // Reference: [h_d] − 2[h_d+x] + [h_d+2x] read in block d.
        let want = GroupRing::from_terms(G, [(hd.clone(), q(1, 1)), (&hd + &x, q(-2, 1)), (&hd + &x.scale(2), q(1, 1))]).unwrap();
        prop_assert_eq!(project_group_ring(1, &s.x_q()).unwrap(), want.clone());
        prop_assert_eq!(y_image(&y_canonicalize(&h, &x, Some(&y)).unwrap()), want);
    }

    #[test]
    fn json_round_trip(s in v1_symbol(), t in v1_symbol(), c in -5i64..=5) {
        let mut e = XExpr::from_sym(s);
        e.add(t, q(c, 3)).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: XExpr = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn third_family_images() {
    for g in [4usize, 5] {
        for d in 1..=g {
            for e in (1..=g).filter(|&e| e != d) {
                let (td, te) = (corner_cycle(g, d).unwrap(), corner_cycle(g, e).unwrap());
                let z = zw_image(g, ZwSym::new(ZwKind::Z, d, e).unwrap()).unwrap();
                let w = zw_image(g, ZwSym::new(ZwKind::W, d, e).unwrap()).unwrap();
                assert_eq!(z, td.sub(&te).unwrap());
                assert_eq!(w, td.add(&te).unwrap());
                let x = XSym::z(LatticeVector::zero(g), d, e).unwrap();
                assert_eq!(project_group_ring(2, &x.x_q()).unwrap(), z);
                let x = XSym::w(LatticeVector::zero(g), d, e).unwrap();
                assert_eq!(project_group_ring(2, &x.x_q()).unwrap(), w);
            }
        }
    }
}

#[test]
fn reduced_first_family_is_fixed() {
    let s = XSym::v1(zero(), LatticeVector::a(G, 1), LatticeVector::b(G, 3)).unwrap();
    assert_eq!(reduce_to_w1(&s).unwrap(), XExpr::from_sym(s));
    let y = YSym::new(1, zero(), Dir::B).unwrap();
    let out = reduce_to_w2(&y);
    assert_eq!(out.len(), 1);
    assert_eq!(out.get(&y), Some(&q(1, 1)));
}
