use super::*;
use crate::matrix_groups::{group, GroupLike};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lie(f: Family, d: usize, p: u64, r: usize) -> LieAlgebra {
    LieAlgebra::new(&group(f, d, p, r, 1).unwrap()).unwrap()
}

/// A random element of Ker(G(W_N) -> G(k)) from powers of random words.
pub(crate) fn random_kernel_element(g: &GroupDescriptor, gens: &[Matrix], rng: &mut ChaCha8Rng) -> Matrix {
    let ring = g.ring_ref().clone();
    let mut acc = g.identity();
    for _ in 0..3 {
        let mut w = g.identity();
        for _ in 0..rng.gen_range(4..20) {
            w = g.mul(&w, &gens[rng.gen_range(0..gens.len())]);
        }
        let low = g.at_level(1).unwrap();
        let wb = low.canonical(&w.reduce(&ring, 1));
        let mut o = 1u128;
        let mut x = wb.clone();
        while x != low.identity() {
            x = low.mul(&x, &wb);
            o += 1;
        }
        acc = g.mul(&acc, &w.pow(o, &ring));
    }
    g.canonical(&acc)
}

#[test]
fn lie_dimensions() {
    assert_eq!(lie(Family::SL, 2, 3, 1).dim_fp(), 3);
    assert_eq!(lie(Family::Sp, 4, 2, 1).dim_fp(), 10);
    assert_eq!(lie(Family::GSp, 4, 2, 1).dim_fp(), 11);
    assert_eq!(lie(Family::PGL, 2, 2, 2).dim_fp(), 6);
    assert_eq!(lie(Family::SOPlus, 4, 2, 1).dim_fp(), 6);
    assert_eq!(lie(Family::GSOMinus, 6, 2, 1).dim_fp(), 16);
    assert_eq!(lie(Family::U, 3, 2, 2).dim_fp(), 9);
    assert_eq!(lie(Family::SU, 2, 2, 2).dim_fp(), 3);
    for (f, d, p, r) in [
        (Family::GL, 3, 2, 1),
        (Family::SL, 4, 2, 1),
        (Family::Sp, 6, 3, 1),
        (Family::GSp, 6, 2, 1),
        (Family::PGSp, 4, 2, 1),
        (Family::SOPlus, 5, 3, 1),
        (Family::SOMinus, 4, 3, 1),
        (Family::GSOPlus, 6, 2, 1),
        (Family::SLModMu(2), 2, 3, 1),
    ] {
        let g = group(f, d, p, r, 1).unwrap();
        assert_eq!(LieAlgebra::new(&g).unwrap().dim_fp(), g.lie_dim() * r, "{g}");
    }
    assert!(LieAlgebra::new(&group(Family::SLModMu(2), 2, 2, 1, 1).unwrap()).is_err());
}

#[test]
fn decode_identity_is_zero() {
    let g = group(Family::SL, 2, 2, 1, 3).unwrap();
    let l = LieAlgebra::new(&g).unwrap();
    let x = l.decode(&g.identity(), 2, g.ring_ref()).unwrap();
    assert!(x.data().iter().all(|&c| c == 0));
}

#[test]
fn encode_decode_round_trip_sl2_z4() {
    let g = group(Family::SL, 2, 2, 1, 2).unwrap();
    let l = LieAlgebra::new(&g).unwrap();
    let mut seen = 0;
    for idx in 0..16u64 {
        let data: Vec<u64> = (0..4).map(|k| (idx >> k) & 1).collect();
        let x = Matrix::from_raw(2, 1, data);
        if !l.contains(&x) {
            assert_eq!(l.encode(&x, 1, &g), Err(Error::NotInLieAlgebra));
            continue;
        }
        seen += 1;
        let e = l.encode(&x, 1, &g).unwrap();
        assert!(g.contains(&e));
        assert_eq!(l.decode(&e, 1, g.ring_ref()).unwrap(), x);
    }
    assert_eq!(seen, 8);
}

#[test]
fn kernel_layers_are_lie_algebras_exhaustively() {
    // all matrices I + p^s Y at level s+1 that lie in G, compared with the Lie algebra
    let cases = [
        (Family::GL, 2, 2, 1, 1),
        (Family::SL, 3, 2, 1, 1),
        (Family::Sp, 4, 2, 1, 1),
        (Family::GSp, 4, 2, 1, 2),
        (Family::SL, 2, 2, 2, 2),
        (Family::SOPlus, 3, 3, 1, 1),
        (Family::PGL, 2, 2, 1, 1),
        (Family::PGL, 2, 3, 1, 2),
        (Family::PGSp, 2, 2, 1, 1),
        (Family::SLModMu(2), 2, 3, 1, 1),
    ];
    for (f, d, p, r, s) in cases {
        let g = group(f, d, p, r, s + 1).unwrap();
        let l = LieAlgebra::new(&g).unwrap();
        let ring = g.ring_ref().clone();
        let ps = p.pow(s);
        let cells = d * d * r;
        let mut reps = std::collections::BTreeSet::new();
        let total = p.pow(cells as u32);
        for idx in 0..total {
            let mut x = idx;
            let data: Vec<u64> = (0..cells)
                .map(|_| {
                    let c = x % p;
                    x /= p;
                    c
                })
                .collect();
            let y = Matrix::from_raw(d, r, data.clone());
            let m = Matrix::identity(d, &ring).add(&y.map_coeffs(|c| c * ps), &ring);
            if g.contains(&m) {
                let rep = g.canonical(&m);
                let dec = l.decode(&rep, s, &ring).unwrap();
                assert!(l.contains(&dec));
                reps.insert(rep);
            }
        }
        assert_eq!(reps.len() as u128, (p as u128).pow(l.dim_fp() as u32), "{f} size {d}");
    }
}

#[test]
fn kernel_products_decode_to_sums() {
    let g = group(Family::SL, 2, 2, 1, 3).unwrap();
    let l = LieAlgebra::new(&g).unwrap();
    let ring = g.ring_ref().clone();
    let gens = g.standard_generators().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    while checked < 200 {
        let a = random_kernel_element(&g, &gens, &mut rng);
        let b = random_kernel_element(&g, &gens, &mut rng);
        let (a, b) = (a.pow(2, &ring), b.pow(2, &ring));
        if l.depth(&a, &ring) < 2 || l.depth(&b, &ring) < 2 {
            continue;
        }
        let sum = l.decode(&a, 2, &ring).unwrap().add(&l.decode(&b, 2, &ring).unwrap(), l.residue());
        assert_eq!(l.decode(&g.mul(&a, &b), 2, &ring).unwrap(), sum);
        checked += 1;
    }
}

#[test]
fn explicit_commutator_in_sl2_z8() {
    let g = group(Family::SL, 2, 2, 1, 3).unwrap();
    let ring = g.ring_ref().clone();
    let l = LieAlgebra::new(&g).unwrap();
    let x = Matrix::from_ints(&[vec![1, 2], vec![0, 1]], &ring);
    let y = Matrix::from_ints(&[vec![1, 0], vec![2, 1]], &ring);
    let c = bracket_and_commutator_check(&l, &x, &y, &ring).unwrap();
    assert!(c.equal);
    let k = l.residue().clone();
    assert_eq!(c.lhs, Matrix::from_ints(&[vec![1, 0], vec![0, -1]], &k));
    let comm = x.mul(&y, &ring).mul(&x.inverse(&ring).unwrap(), &ring).mul(&y.inverse(&ring).unwrap(), &ring);
    assert_eq!(comm, Matrix::from_ints(&[vec![1 + 4, 0], vec![0, 1 - 4]], &ring).reduce(&ring, 3).map_coeffs(|c| c % 8));
    let same = bracket_and_commutator_check(&l, &x, &x, &ring).unwrap();
    assert!(same.lhs.data().iter().all(|&c| c == 0) && same.equal);
}

#[test]
fn commutator_bracket_identity_random_pairs() {
    let cases = [
        group(Family::Sp, 4, 2, 1, 3).unwrap(),
        group(Family::GL, 2, 2, 1, 3).unwrap(),
        group(Family::GSp, 4, 2, 1, 3).unwrap(),
        group(Family::PGL, 2, 2, 1, 3).unwrap(),
        group(Family::SL, 2, 2, 2, 3).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in &cases {
        let l = LieAlgebra::new(g).unwrap();
        let gens = g.standard_generators().unwrap();
        for _ in 0..100 {
            let x = random_kernel_element(g, &gens, &mut rng);
            let y = random_kernel_element(g, &gens, &mut rng);
            let c = bracket_and_commutator_check(&l, &x, &y, g.ring_ref()).unwrap();
            assert!(c.equal, "{g}");
        }
    }
    let odd = group(Family::SL, 2, 3, 1, 3).unwrap();
    let l = LieAlgebra::new(&odd).unwrap();
    assert_eq!(
        bracket_and_commutator_check(&l, &odd.identity(), &odd.identity(), odd.ring_ref()).unwrap_err(),
        Error::WrongParity
    );
}

#[test]
fn adjoint_action_commutes_with_codec() {
    let g = group(Family::GSp, 4, 3, 1, 2).unwrap();
    let l = LieAlgebra::new(&g).unwrap();
    let ring = g.ring_ref().clone();
    let gens = g.standard_generators().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let k = random_kernel_element(&g, &gens, &mut rng);
        let mut h = g.identity();
        for _ in 0..10 {
            h = g.mul(&h, &gens[rng.gen_range(0..gens.len())]);
        }
        let conj = g.mul(&g.mul(&h, &k), &g.inv(&h));
        let lhs = l.decode(&conj, 1, &ring).unwrap();
        let rhs = l.adjoint(&h.reduce(&ring, 1), &l.decode(&k, 1, &ring).unwrap());
        assert_eq!(lhs, rhs);
    }
}

fn module(f: Family, d: usize, p: u64, r: usize, mod_scalars: bool) -> AdjointModule {
    let g = group(f, d, p, r, 1).unwrap();
    let mut l = LieAlgebra::new(&g).unwrap();
    if mod_scalars {
        l = l.modulo_scalars().unwrap();
    }
    AdjointModule::new(&l, &g.standard_generators().unwrap()).unwrap()
}

#[test]
fn sl2_f3_is_simple() {
    let m = module(Family::SL, 2, 3, 1, false);
    let a = m.analyze();
    assert_eq!(a.derived_dim, 3);
    assert_eq!(a.is_simple_derived, Some(true));
    assert!(!a.has_codim1_invariant);
    assert_eq!(a.minimal_submodules.len(), 1);
    assert!(a.minimal_search_exhaustive);
}

#[test]
fn abelianization_dimensions() {
    assert_eq!(module(Family::GL, 2, 2, 1, false).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::Sp, 4, 2, 1, false).analyze().abelianization_dim, 4);
    assert_eq!(module(Family::PGSp, 4, 2, 1, false).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::PGSp, 6, 2, 1, false).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::PGL, 4, 2, 1, false).analyze().abelianization_dim, 1);
    // Lie algebras modulo the central torus
    assert_eq!(module(Family::GL, 4, 2, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GL, 3, 3, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GL, 6, 3, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GSp, 4, 2, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GSp, 6, 2, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GSOPlus, 6, 2, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GSOMinus, 6, 2, 1, true).analyze().abelianization_dim, 1);
    assert_eq!(module(Family::GL, 3, 2, 1, true).analyze().abelianization_dim, 0);
}

#[test]
fn action_respects_bracket() {
    let g = group(Family::Sp, 4, 3, 1, 1).unwrap();
    let l = LieAlgebra::new(&g).unwrap();
    let basis = l.basis();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let gens = g.standard_generators().unwrap();
    for _ in 0..50 {
        let s = &gens[rng.gen_range(0..gens.len())];
        let x = &basis[rng.gen_range(0..basis.len())];
        let y = &basis[rng.gen_range(0..basis.len())];
        assert_eq!(l.adjoint(s, &l.bracket(x, y)), l.bracket(&l.adjoint(s, x), &l.adjoint(s, y)));
    }
}

#[test]
fn simplicity_beyond_exhaustive_range() {
    // pgl_3 over F_4 has F_2-dimension 16, beyond exhaustive spinning
    let m = module(Family::PGL, 3, 2, 2, false);
    let a = m.analyze();
    assert!(!a.minimal_search_exhaustive);
    assert_eq!(a.is_simple_derived, Some(true));
    assert_eq!(module(Family::SL, 3, 2, 2, false).analyze().center_dim, 0);
    assert_eq!(module(Family::SL, 3, 3, 2, false).analyze().center_dim, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn codec_is_additive(idx in 0u64..1 << 10, jdx in 0u64..1 << 10) {
        let g = group(Family::Sp, 4, 2, 1, 3).unwrap();
        let l = LieAlgebra::new(&g).unwrap();
        let basis = l.basis();
        let comb = |m: u64| basis.iter().enumerate().filter(|(i, _)| (m >> i) & 1 == 1)
            .fold(Matrix::zero(4, l.residue()), |acc, (_, b)| acc.add(b, l.residue()));
        let x = comb(idx);
        let y = comb(jdx);
        let ex = l.encode(&x, 2, &g).unwrap();
        let ey = l.encode(&y, 2, &g).unwrap();
        let top = g.at_level(3).unwrap();
        prop_assert!(top.contains(&ex));
        let prod = ex.mul(&ey, top.ring_ref());
        prop_assert_eq!(l.decode(&prod, 2, top.ring_ref()).unwrap(), x.add(&y, l.residue()));
    }
}
