use super::*;
use crate::matrix_groups::group;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const B: u128 = DEFAULT_BOUND;

fn sorted(mut v: Vec<CompositionFactor>) -> Vec<CompositionFactor> {
    v.sort();
    v
}

fn simple(order: u128) -> CompositionFactor {
    CompositionFactor { order, abelian: false, simple: true }
}

fn cyclic(order: u128) -> CompositionFactor {
    CompositionFactor { order, abelian: true, simple: true }
}

#[test]
fn enumeration_sizes() {
    let sl = enumerate_group(&group(Family::SL, 2, 2, 1, 1).unwrap(), B).unwrap();
    assert_eq!(sl.order(), 6);
    assert!(sl.is_closed());
    let d = group(Family::SL, 2, 3, 1, 1).unwrap();
    let triv = enumerate_closure(Arc::new(d.clone()), &[d.identity()], B).unwrap();
    assert_eq!(triv.order(), 1);
    let pgl = group(Family::PGL, 2, 2, 2, 2).unwrap();
    let e = enumerate_group(&pgl, B).unwrap();
    assert_eq!(e.order(), 3840);
    assert_eq!(e.order() as u128, pgl.order().unwrap());
    assert!(e.is_closed());
}

#[test]
fn full_enumerations_match_group_order() {
    for (f, d, p, r, n) in [(Family::Sp, 4, 2, 1, 1), (Family::GL, 2, 3, 1, 2), (Family::PGSp, 4, 2, 1, 1), (Family::SU, 3, 2, 2, 1)] {
        let desc = group(f, d, p, r, n).unwrap();
        assert_eq!(enumerate_group(&desc, B).unwrap().order() as u128, desc.order().unwrap(), "{desc}");
    }
}

#[test]
fn enumeration_is_deterministic() {
    let d = group(Family::Sp, 4, 2, 1, 1).unwrap();
    let a = enumerate_group(&d, B).unwrap();
    let b = enumerate_group(&d, B).unwrap();
    assert!(a.elements().zip(b.elements()).all(|(x, y)| x == y));
}

#[test]
fn bound_exceeded() {
    let d = group(Family::SL, 2, 3, 1, 2).unwrap();
    assert!(matches!(enumerate_group(&d, 100), Err(Error::TooLarge { .. })));
}

#[test]
fn composition_factors_of_small_groups() {
    let sp4 = enumerate_group(&group(Family::Sp, 4, 2, 1, 1).unwrap(), B).unwrap();
    assert_eq!(sorted(composition_factors(&sp4).unwrap()), vec![cyclic(2), simple(360)]);
    let sl24 = enumerate_group(&group(Family::SL, 2, 2, 2, 1).unwrap(), B).unwrap();
    assert_eq!(composition_factors(&sl24).unwrap(), vec![simple(60)]);
    // SL_2(F_3) = Q_8 . C_3: 2, 2, 2, 3
    let sl23 = enumerate_group(&group(Family::SL, 2, 3, 1, 1).unwrap(), B).unwrap();
    assert_eq!(sorted(composition_factors(&sl23).unwrap()), vec![cyclic(2), cyclic(2), cyclic(2), cyclic(3)]);
    // SL_2(F_5): C_2 then A_5
    let sl25 = enumerate_group(&group(Family::SL, 2, 5, 1, 1).unwrap(), B).unwrap();
    assert_eq!(sorted(composition_factors(&sl25).unwrap()), vec![cyclic(2), simple(60)]);
}

#[test]
fn abelian_p_groups_have_cyclic_factors() {
    // the congruence kernel of SL_2(Z/9) -> SL_2(F_3) is elementary abelian of order 27
    let d = group(Family::SL, 2, 3, 1, 2).unwrap();
    let ring = d.ring_ref().clone();
    let gens = vec![
        Matrix::from_ints(&[vec![1, 3], vec![0, 1]], &ring),
        Matrix::from_ints(&[vec![1, 0], vec![3, 1]], &ring),
        Matrix::from_ints(&[vec![4, 0], vec![0, 7]], &ring),
    ];
    let k = enumerate_closure(Arc::new(d), &gens, B).unwrap();
    assert_eq!(k.order(), 27);
    assert_eq!(composition_factors(&k).unwrap(), vec![cyclic(3); 3]);
}

#[test]
fn factor_orders_multiply_to_group_order() {
    for (f, d, p, r, n) in [(Family::GL, 2, 3, 1, 1), (Family::PGL, 2, 2, 2, 2), (Family::GSp, 4, 2, 1, 1)] {
        let e = enumerate_group(&group(f, d, p, r, n).unwrap(), B).unwrap();
        let fs = composition_factors(&e).unwrap();
        assert_eq!(fs.iter().map(|f| f.order).product::<u128>(), e.order() as u128);
    }
}

fn check_report(s: &SectionSearch) {
    assert!(s.accounting_consistent(), "{s:?}");
    assert!(s.routes_agree(), "{s:?}");
    assert_eq!(s.linear_sections > 0, s.exists());
}

#[test]
fn section_for_pgl2_over_w2_f4() {
    let s = find_section(&group(Family::PGL, 2, 2, 2, 2).unwrap(), &SectionOptions::default()).unwrap();
    check_report(&s);
    assert!(s.exists());
    assert_eq!(s.base_order, 60);
    assert_eq!(s.witness_order, Some(60));
}

#[test]
fn no_section_for_sp4_over_z4() {
    let s = find_section(&group(Family::Sp, 4, 2, 1, 2).unwrap(), &SectionOptions::default()).unwrap();
    check_report(&s);
    assert!(s.exhausted());
    assert!(!s.obstruction.as_ref().unwrap().is_empty());
}

#[test]
fn small_sl2_sections() {
    // only SL_2(Z/9) -> SL_2(F_3) splits; over Z/4 no lift of the swap is an involution
    for (p, exists) in [(2u64, false), (3, true), (5, false)] {
        let s = find_section(&group(Family::SL, 2, p, 1, 2).unwrap(), &SectionOptions::default()).unwrap();
        check_report(&s);
        assert_eq!(s.exists(), exists, "p={p}");
        assert_eq!(s.exhausted(), !exists);
    }
}

#[test]
fn trivial_base_has_identity_section() {
    // SL_1 is trivial at every level
    let s = find_section(&group(Family::SL, 1, 3, 1, 2).unwrap(), &SectionOptions::default()).unwrap();
    assert_eq!(s.base_order, 1);
    assert!(s.exists());
}

#[test]
fn section_verdict_is_seed_independent() {
    let d = group(Family::SL, 2, 3, 1, 2).unwrap();
    for seed in 1..4 {
        let s = find_section(&d, &SectionOptions { seed, ..Default::default() }).unwrap();
        check_report(&s);
        assert!(s.exists());
    }
}

#[test]
fn sl2_f3_generated_by_order_3() {
    let d = group(Family::SL, 2, 3, 1, 1).unwrap();
    let r = verify_generation_props(&d, &d.standard_generators().unwrap(), B).unwrap();
    assert!(r.sc_generated_by_order_p);
    assert!(r.adjoint_hypothesis && r.derived_contained && r.consistent);
    assert_eq!(r.sc_order, 24);
}

#[test]
fn generation_statement_on_random_subgroups_of_sl2_f5() {
    let d = group(Family::SL, 2, 5, 1, 1).unwrap();
    let all = enumerate_group(&d, B).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hyp = 0;
    for _ in 0..20 {
        let k = rng.gen_range(1..=2);
        let gens: Vec<Matrix> = (0..k).map(|_| all.get(rng.gen_range(0..all.order()))).collect();
        let r = verify_generation_props(&d, &gens, B).unwrap();
        assert!(r.consistent);
        hyp += r.adjoint_hypothesis as usize;
    }
    assert!(hyp > 0);
}
