//! Small worked values: rack matrices, constructions, isomorphism answers
//! and labeling counts that can be checked by hand.

mod common;

use common::*;
use tsrack::invariants::*;
use tsrack::rack::FiniteGroup;
use tsrack::tsrack::{alexander_isomorphic, enumerate_linear, module_isomorphism, tsrack_isomorphism};
use tsrack::{AbelianGroup, FiniteRack, LinkDiagram, QuotientRing, RackError, TsRack, TsRackError};

fn z4_t1_s2() -> TsRack {
    TsRack::linear(4, 1, 2).unwrap()
}

#[test]
fn subgroup_closures_and_factors() {
    let z4 = AbelianGroup::cyclic(4).unwrap();
    assert_eq!(z4.subgroup_closure(&[vec![2]]).unwrap(), vec![vec![0], vec![2]]);
    assert_eq!(z4.subgroup_closure(&[]).unwrap(), vec![vec![0]]);
    assert_eq!(z4.invariant_factors(&[vec![0], vec![2]]).unwrap(), vec![2]);
    let z12 = AbelianGroup::cyclic(12).unwrap();
    assert_eq!(
        z12.subgroup_closure(&[vec![4]]).unwrap(),
        vec![vec![0], vec![4], vec![8]]
    );
    let evens: Vec<Vec<u64>> = (0..12).step_by(2).map(|v| vec![v]).collect();
    assert_eq!(z12.invariant_factors(&evens).unwrap(), vec![6]);
    let v4 = AbelianGroup::new(vec![2, 2]).unwrap();
    assert_eq!(v4.invariant_factors(&v4.elements()).unwrap(), vec![2, 2]);
}

#[test]
fn quotient_rings() {
    let r = QuotientRing::new(2, &[1, 1]).unwrap();
    assert_eq!(r.size(), 2);
    assert_eq!(r.t(), r.one());
    let r = QuotientRing::new(2, &[1, 0, 1]).unwrap();
    assert_eq!(r.size(), 4);
    assert_eq!(r.t_inverse().unwrap(), r.t().as_slice());
    assert_eq!(r.mul(&r.t(), &r.t()), r.one());
    let r = QuotientRing::new(4, &[-3, 1]).unwrap();
    assert_eq!(r.size(), 4);
    assert_eq!(r.t(), vec![3]);
    assert_eq!(r.t_inverse().unwrap(), &[3]);
}

#[test]
fn rack_matrices() {
    let c3 = FiniteRack::from_matrix(&[vec![2, 2, 2], vec![3, 3, 3], vec![1, 1, 1]]).unwrap();
    assert_eq!(c3, FiniteRack::constant_action(&[2, 3, 1]).unwrap());
    assert_eq!(c3.rank().rank, 3);
    let published =
        FiniteRack::from_matrix(&[vec![3, 1, 3, 1], vec![4, 2, 4, 2], vec![1, 3, 1, 3], vec![2, 4, 2, 4]]).unwrap();
    assert_eq!(published.rank().rank, 2);
    assert!(matches!(
        FiniteRack::from_matrix(&[vec![1, 1], vec![1, 2]]),
        Err(RackError::ColumnNotPermutation { .. })
    ));
    assert_eq!(
        FiniteRack::constant_action(&[2, 1]).unwrap().matrix(),
        vec![vec![2, 2], vec![1, 1]]
    );
    let trivial = FiniteRack::constant_action(&[1, 2, 3]).unwrap();
    assert!(trivial.is_quandle());
    assert_eq!(trivial.rank().rank, 1);
}

#[test]
fn residues_one_to_four_give_the_published_matrix() {
    // list residues as 1, 2, 3, 0: position p holds residue (p + 1) mod 4
    let x = z4_t1_s2().to_finite_rack();
    let perm: Vec<usize> = (0..4).map(|r| (r + 3) % 4).collect();
    let relabeled = x.relabel(&perm).unwrap();
    assert_eq!(
        relabeled.matrix(),
        vec![vec![3, 1, 3, 1], vec![4, 2, 4, 2], vec![1, 3, 1, 3], vec![2, 4, 2, 4]]
    );
}

#[test]
fn conjugation_racks() {
    let s3 = FiniteRack::conjugation(&FiniteGroup::symmetric(3), 1).unwrap();
    assert_eq!(s3.size(), 6);
    assert!(s3.is_quandle());
    assert_eq!(s3.rank().rank, 1);
    let z5 = FiniteRack::conjugation(&FiniteGroup::cyclic(5), 1).unwrap();
    assert_eq!(z5, FiniteRack::constant_action(&[1, 2, 3, 4, 5]).unwrap());
    assert_eq!(
        FiniteRack::conjugation(&FiniteGroup::symmetric(3), 0).unwrap().op(3, 5),
        3
    );
}

#[test]
fn maximal_subquandles() {
    assert_eq!(TsRack::linear(4, 3, 2).unwrap().maximal_subquandle(), vec![0, 1, 2, 3]);
    assert_eq!(z4_t1_s2().maximal_subquandle(), vec![0, 2]);
    assert!(FiniteRack::constant_action(&[2, 1])
        .unwrap()
        .maximal_subquandle()
        .is_empty());
}

#[test]
fn quotient_t_plus_1_table_and_isomorphism() {
    let y = TsRack::quotient(2, &[1, 1]).unwrap();
    let p = |a, b| y.position(&[a, b]).unwrap();
    let (zero, one, s, one_s) = (p(0, 0), p(1, 0), p(0, 1), p(1, 1));
    assert_eq!(y.s(one), s);
    let order = [zero, one, s, one_s];
    let table = [
        [zero, s, zero, s],
        [one, one_s, one, one_s],
        [s, zero, s, zero],
        [one_s, one, one_s, one],
    ];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            assert_eq!(y.op(a, b), table[i][j]);
        }
    }
    // 0 -> 4 (residue 0), 1 -> 1, s -> 2, 1+s -> 3
    let mut phi = vec![0; 4];
    phi[zero] = 0;
    phi[one] = 1;
    phi[s] = 2;
    phi[one_s] = 3;
    let x = z4_t1_s2();
    assert!(y.to_finite_rack().is_homomorphism(&x.to_finite_rack(), &phi));
    assert!(tsrack_isomorphism(&x, &y).is_some());
    assert!(module_isomorphism(&x, &y).is_none());
    assert_eq!(TsRack::quotient(2, &[1, 0, 1]).unwrap().size(), 16);
}

#[test]
fn module_constructions_match_linear_and_quotient() {
    let m = example_modules();
    let (v4, z4) = (&m[0].1, &m[1].1);
    assert!(module_isomorphism(v4, &TsRack::quotient(2, &[1, 1]).unwrap()).is_some());
    assert!(module_isomorphism(z4, &z4_t1_s2()).is_some());
    let trivial = TsRack::module(
        AbelianGroup::new(vec![3, 2]).unwrap(),
        &[vec![1, 0], vec![0, 1]],
        &[vec![0, 0], vec![0, 0]],
    )
    .unwrap();
    assert!(trivial.to_finite_rack().is_quandle());
    assert!((0..6).all(|x| (0..6).all(|y| trivial.op(x, y) == x)));
}

#[test]
fn linear_construction_errors() {
    assert!(matches!(
        TsRack::linear(4, 2, 2),
        Err(TsRackError::NotInvertible { .. })
    ));
    assert!(matches!(
        TsRack::linear(4, 3, 1),
        Err(TsRackError::RelationViolation { lhs: 1, rhs: 2, .. })
    ));
    let x = z4_t1_s2();
    assert!((0..4).all(|v| x.kink(v) == 3 * v % 4));
}

#[test]
fn linear_enumeration() {
    assert_eq!(enumerate_linear(4), vec![(1, 0), (1, 2), (3, 0), (3, 2)]);
    assert_eq!(enumerate_linear(2), vec![(1, 0)]);
    for (t, s) in enumerate_linear(3) {
        assert!(s == 0 || s == (4 - t) % 3, "({t},{s})");
    }
}

#[test]
fn s_submodules() {
    let x = z4_t1_s2();
    let sx = x.s_submodule();
    assert_eq!(x.s_image(), vec![0, 2]);
    assert!((0..2).all(|v| sx.t(v) == v && sx.s(v) == 0));
    let y = TsRack::linear(4, 3, 2).unwrap();
    assert_eq!(y.s_image(), vec![0, 2]);
    assert!(module_isomorphism(&sx, &y.s_submodule()).is_some());
    assert!(tsrack_isomorphism(&x, &y).is_none());
    assert_eq!(TsRack::linear(6, 1, 0).unwrap().s_image(), vec![0]);
    let c = tsrack_isomorphism(&x, &x).unwrap();
    assert_eq!(c.phi, vec![0, 1, 2, 3]);
}

#[test]
fn alexander_classification() {
    let z5 = |t| TsRack::linear(5, t, (6 - t) % 5).unwrap();
    assert!(!alexander_isomorphic(&z5(2), &z5(3)).unwrap());
    assert!(z5(2)
        .to_finite_rack()
        .find_isomorphism(&z5(3).to_finite_rack())
        .is_none());
    assert!(module_isomorphism(&z5(2).s_submodule(), &z5(3).s_submodule()).is_none());
    let v4_trivial = TsRack::module(
        AbelianGroup::new(vec![2, 2]).unwrap(),
        &[vec![1, 0], vec![0, 1]],
        &[vec![0, 0], vec![0, 0]],
    )
    .unwrap();
    assert!(alexander_isomorphic(&TsRack::linear(4, 1, 0).unwrap(), &v4_trivial).unwrap());
    assert!(alexander_isomorphic(&z5(2), &z5(2)).unwrap());
    assert!(matches!(
        alexander_isomorphic(&z4_t1_s2(), &z5(2)),
        Err(TsRackError::WrongStructure(_))
    ));
}

#[test]
fn diagrams() {
    let t = LinkDiagram::from_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    assert_eq!(
        (t.component_count(), t.crossing_count(), t.writhe_vector()[0].abs()),
        (1, 3, 3)
    );
    let h = LinkDiagram::from_pd("X[4,1,3,2] X[2,3,1,4]").unwrap();
    assert_eq!((h.component_count(), h.writhe_vector()), (2, vec![0, 0]));
    assert_eq!(trefoil().writhe_vector(), vec![3]);
    assert_eq!(hopf().writhe_vector(), vec![0, 0]);
    assert_eq!(braid(1, &[]).component_count(), 1);
    assert_eq!(LinkDiagram::unlink(1).writhe_vector(), vec![0]);
    assert!(LinkDiagram::unlink(1).crossing_relations().is_empty());
    let k = hopf().add_kink(0, 1).unwrap();
    assert_eq!(k.writhe_vector(), vec![1, 0]);
    assert_eq!(trefoil().add_kinks(0, 2, 1).unwrap().writhe_vector(), vec![5]);
    let writhes: Vec<Vec<u64>> = hopf().framed_family(2).into_iter().map(|(w, _)| w).collect();
    assert_eq!(writhes, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(LinkDiagram::unlink(1).framed_family(2).len(), 2);
    assert_eq!(trefoil().framed_family(1).len(), 1);
}

#[test]
fn kinked_unknot_relation() {
    let d = LinkDiagram::unlink(1).add_kink(0, 1).unwrap();
    let r = d.crossing_relations();
    assert_eq!(r.len(), 1);
    assert_eq!((r[0].inp, r[0].over, r[0].out, r[0].sign), (0, 0, 0, 1));
    let x = z4_t1_s2();
    // x = x ▷ x: only the fixed points of the kink map
    assert_eq!(enumerate_homs(&d, &x), vec![vec![0], vec![2]]);
}

#[test]
fn framed_trefoil_relations() {
    // one stabilization of the closed 3-braid: four arcs, four relations
    let d = trefoil().add_kink(0, -1).unwrap();
    assert_eq!(d.writhe_vector(), vec![2]);
    assert_eq!(d.arc_count(), 4);
    assert_eq!(d.crossing_relations().len(), 4);
}

#[test]
fn labeling_counts() {
    let x = z4_t1_s2();
    assert_eq!(enumerate_homs(&LinkDiagram::unlink(1), &x).len(), 4);
    let swap = FiniteRack::constant_action(&[2, 1]).unwrap();
    assert_eq!(enumerate_homs(&hopf(), &swap).len(), 0);
    let framed = hopf().add_kink(0, 1).unwrap().add_kink(1, 1).unwrap();
    assert_eq!(enumerate_homs(&framed, &swap).len(), 4);
    // odd writhe gives 2 labelings, even writhe gives 4
    let f = enumerate_homs(&trefoil(), &x);
    assert_eq!(f.len(), 2);
    let g = enumerate_homs(&trefoil().add_kink(0, -1).unwrap(), &x);
    assert_eq!(g.len(), 4);
}

#[test]
fn invariant_values() {
    let swap = FiniteRack::constant_action(&[2, 1]).unwrap();
    assert_eq!(counting_invariant(&LinkDiagram::unlink(2), &swap), 4);
    assert_eq!(counting_invariant(&hopf(), &swap), 4);
    assert_eq!(
        counting_invariant(&LinkDiagram::unlink(1), &z4_t1_s2().to_finite_rack()),
        6
    );
    assert_eq!(writhe_enhanced(&LinkDiagram::unlink(2), &swap).to_string(), "4");
    assert_eq!(writhe_enhanced(&hopf(), &swap).to_string(), "4q_1q_2");
    let one = FiniteRack::constant_action(&[1]).unwrap();
    assert_eq!(writhe_enhanced(&LinkDiagram::unlink(1), &one).to_string(), "1");
    let p = additive_enhanced(&braid(2, &[1, 1, 1, 1]), &z4_t1_s2()).polynomial;
    assert_eq!(p.to_string(), "4u + 12u^2 + 20u^4");
    assert_eq!(recover_counting_from_additive(&p), 36);
    let z12 = TsRack::linear(12, 11, 2).unwrap();
    let p = additive_enhanced(&corpus_link("3_1"), &z12).polynomial;
    assert_eq!(p.to_string(), "u + u^2 + 8u^3 + 2u^4 + 8u^6 + 16u^12");
    assert_eq!(recover_counting_from_additive(&p), 36);
    let w = TsRack::linear(4, 3, 2).unwrap();
    let k = s_enhanced(&trefoil(), &w).polynomial;
    assert_eq!(k.to_string(), "2u^2");
    assert_eq!(recover_counting_from_s(&k), 4);
    assert_eq!(recover_counting_from_s(&"2u + 2u^3".parse().unwrap()), 8);
    assert_eq!(recover_counting_from_s(&tsrack::InvariantPolynomial::zero()), 0);
}
