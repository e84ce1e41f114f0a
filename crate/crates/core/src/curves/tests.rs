use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::arith::is_prime;
use crate::galois_ring::construct_ring;

fn p(s: &str) -> IntPoly {
    IntPoly::parse(s).unwrap()
}

fn cubic_closed_form(a: i64, b: i64, c: i64, d: i64) -> BigInt {
    let [a, b, c, d] = [a, b, c, d].map(BigInt::from);
    &b * &b * &c * &c - 4 * &a * &c * &c * &c - 4 * &b * &b * &b * &d - 27 * &a * &a * &d * &d + 18 * &a * &b * &c * &d
}

fn eval_mod(f: &IntPoly, x: u64, l: u64) -> u64 {
    f.to_fp(l).iter().rev().fold(0, |acc, &c| (acc * x + c) % l)
}

/// lead^(2n-2) prod_{i<j} (r_i - r_j)^2 mod l, at the first good prime above 100 where f splits.
fn disc_from_roots(f: &IntPoly) -> Option<(u64, u64)> {
    let n = f.degree()?;
    let mut l = 101;
    for _ in 0..200_000 {
        l += 2;
        // the pattern only locates a split prime; the roots themselves are found by search
        if !is_prime(l) || factor_pattern_mod(f, l).map_or(true, |pat| pat.len() != n) {
            continue;
        }
        let roots: Vec<u64> = (0..l).filter(|&x| eval_mod(f, x, l) == 0).collect();
        if roots.len() != n {
            continue;
        }
        let lead = f.lead().rem_euclid(l as i64) as u64;
        let mut acc = (0..2 * n - 2).fold(1, |a, _| a * lead % l);
        for i in 0..n {
            for j in i + 1..n {
                let d = (roots[i] + l - roots[j]) % l;
                acc = acc * d % l * d % l;
            }
        }
        return Some((l, acc));
    }
    None
}

#[test]
fn parse_and_display_roundtrip() {
    for s in ["x^6-x-1", "2x^3-3x+5", "x^3-x^2-2x+1", "-x^5+7"] {
        assert_eq!(p(s).to_string(), s);
    }
    assert_eq!(p("[-1,-1,0,0,0,0,1]"), p("x^6-x-1"));
    assert_eq!(p("2*x^3 + x"), IntPoly::new(vec![0, 1, 0, 2]));
    assert!(IntPoly::parse("x^^2").is_err());
}

#[test]
fn small_discriminants() {
    for (f, d, s) in [("x^3-x", 4, 1), ("x^3-2", -108, -3), ("x^2+1", -4, -1), ("x^3-x-1", -23, -23)] {
        let r = disc_sqfree(&p(f)).unwrap();
        assert_eq!(r.disc, BigInt::from(d), "{f}");
        assert_eq!(r.squarefree_i64(), Some(s), "{f}");
    }
    assert!(disc_sqfree(&p("x^3-x")).unwrap().is_square());
    assert!(matches!(discriminant(&p("x^3-2x^2+x")), Err(crate::Error::ZeroDiscriminant)));
}

#[test]
fn sextic_discriminants_match_root_products() {
    for f in ["x^6-x-1", "x^6+x+1", "x^6-3x^4-2x-6", "3x^6-5x^2+x-2", "x^5-x+1"] {
        let f = p(f);
        let d = discriminant(&f).unwrap();
        let (l, want) = disc_from_roots(&f).expect("a split prime");
        let got = (d % BigInt::from(l) + BigInt::from(l)) % BigInt::from(l);
        assert_eq!(got, BigInt::from(want), "{f} mod {l}");
    }
}

#[test]
fn factorization_of_large_discriminants() {
    // 1000003 * 999983^2 * 2^3 needs rho past trial division
    let n = num_bigint::BigUint::from(1_000_003u64) * num_bigint::BigUint::from(999_983u64).pow(2) * 8u32;
    let (fs, rest) = factor(&n, 1_000_000);
    assert!(rest.is_none());
    let exps: Vec<(String, u32)> = fs.iter().map(|(p, e)| (p.to_string(), *e)).collect();
    assert_eq!(exps, [("2".into(), 3), ("999983".into(), 2), ("1000003".into(), 1)]);
    assert!(is_probable_prime(&num_bigint::BigUint::from(2_147_483_647u64)));
    assert!(!is_probable_prime(&num_bigint::BigUint::from(3_215_031_751u64)));
}

#[test]
fn factor_patterns() {
    assert_eq!(factor_pattern_mod(&p("x^3-2"), 5).unwrap(), vec![1, 2]);
    assert_eq!(factor_pattern_mod(&p("x^3-2"), 7).unwrap(), vec![3]);
    assert!(factor_pattern_mod(&p("x^3-2"), 3).is_err());
    assert!(factor_pattern_mod(&p("x^3-2"), 9).is_err());
}

/// Roots of f in F_{l^k} count sum_{d | k} d * #(degree-d factors).
#[test]
fn patterns_agree_with_extension_root_counts() {
    for (f, l) in [("x^6-x-1", 5u64), ("x^6-x-1", 7), ("x^3-2", 13), ("x^6-3x^4-2x-6", 11)] {
        let f = p(f);
        let pat = factor_pattern_mod(&f, l).unwrap();
        for k in 1..=3usize {
            let ring = construct_ring(l, k, 1).unwrap();
            let cs: Vec<Vec<u64>> = f.coeffs().iter().map(|&c| ring.from_int_raw(c)).collect();
            let mut roots = 0;
            for idx in 0..ring.order() {
                let x = ring.element_at(idx);
                let mut acc = ring.zero_raw();
                for c in cs.iter().rev() {
                    ring.add_raw(&ring.mul_vec(&acc, &x), c, &mut acc);
                }
                roots += ring.is_zero_raw(&acc) as usize;
            }
            let want: usize = pat.iter().filter(|&&d| k % d == 0).sum();
            assert_eq!(roots, want, "{f} at {l}^{k}");
        }
    }
}

#[test]
fn s3_and_s6_certificates() {
    let c = certify_sn(&p("x^3-x-1"), 50).unwrap();
    assert_eq!(c.verdict, SnVerdict::Certified);
    let c = certify_sn(&p("x^6-x-1"), 500).unwrap();
    assert_eq!(c.verdict, SnVerdict::Certified);
    assert!(c.irreducibility_certified && c.n_minus_1_cycle_seen && c.transposition_pattern_seen);
    assert!(matches!(certify_sn(&p("x^3-3x-1"), 50).unwrap().verdict, SnVerdict::NotSn(_)));
    assert!(matches!(certify_sn(&p("x^6-x"), 50).unwrap().verdict, SnVerdict::NotSn(_)));
    // D_6 never shows a 5-cycle
    assert_eq!(certify_sn(&p("x^6-2"), 200).unwrap().verdict, SnVerdict::Unknown);
    assert!(certify_sn(&p("x^5-x+1"), 10).is_err());
}

#[test]
fn fixture_table_verdicts() {
    let fx = curve_fixtures();
    assert!(fx.iter().filter(|f| f.f.degree() == Some(3)).count() >= 10);
    assert!(fx.iter().filter(|f| f.f.degree() == Some(6)).count() >= 3);
    for fx in fx {
        let d = fx.f.degree().unwrap() / 3;
        let v = verdict_4_2_1(&fx.f, d, true, 500).unwrap();
        assert_eq!(v.disc.squarefree_i64(), Some(fx.squarefree), "{}", fx.f);
        assert_eq!(v.outcome, fx.expected, "{} ({})", fx.f, fx.galois);
        assert_eq!(v.trail, ["4.2.1(i)", "4.2.1(ii)"]);
        let unasserted = verdict_4_2_1(&fx.f, d, false, 500).unwrap();
        assert_eq!(unasserted.outcome, ImageOutcome::Unknown);
    }
}

#[test]
fn verdict_rejects_wrong_degree() {
    assert!(verdict_4_2_1(&p("x^5-x+1"), 2, true, 50).is_err());
    assert!(verdict_4_2_1(&p("x^3-2"), 2, true, 50).is_err());
}

#[test]
fn searched_cubics_hit_excluded_classes() {
    let found = find_cubics(&EXCLUDED_SQUAREFREE, 12, 3).unwrap();
    assert_eq!(found.len(), 3);
    assert_eq!(found[0], p("x^3-3x-4"));
    for f in &found {
        let v = verdict_4_2_1(f, 1, true, 100).unwrap();
        assert_eq!(v.condition_i, Some(true));
        assert_eq!(v.condition_ii, Some(false));
        assert_eq!(v.outcome, ImageOutcome::NotSurjective);
    }
}

#[test]
fn elliptic_point_count() {
    let d = count_points_lpoly(&p("x^3-2"), 5).unwrap();
    assert_eq!(d.counts, [6]);
    assert_eq!(d.lpoly, [1, 0, 5]);
    assert_eq!(d.jacobian_order(), 6);
    assert!(d.valid());
}

/// Direct count over F_l with plain modular arithmetic.
fn naive_count(f: &IntPoly, l: u64) -> u128 {
    let chi = |a: u64| -> u128 {
        if a == 0 {
            1
        } else if (1..l).any(|y| y * y % l == a) {
            2
        } else {
            0
        }
    };
    let affine: u128 = (0..l).map(|x| chi(eval_mod(f, x, l))).sum();
    let deg = f.degree().unwrap();
    affine + if deg % 2 == 1 { 1 } else { chi(f.lead().rem_euclid(l as i64) as u64) }
}

#[test]
fn genus_two_counts_at_seven() {
    let f = p("x^5-x+1");
    let d = count_points_lpoly(&f, 7).unwrap();
    // counts over F_7, F_49, F_343 from an independent field implementation
    assert_eq!(d.counts, [7, 49]);
    assert_eq!(d.extra_count, Some((322, 322)));
    assert!(d.valid());
    assert_eq!(d.lpoly.len(), 5);
    assert_eq!(d.lpoly[4], 49);
}

#[test]
fn genus_two_sextic_counts_at_three() {
    let d = count_points_lpoly(&p("x^6-x-1"), 3).unwrap();
    assert_eq!(d.counts, [4, 16]);
    assert_eq!(d.extra_count, Some((28, 28)));
}

#[test]
fn mod2_consistency_over_many_primes() {
    for f in ["x^5-x+1", "x^3-2", "x^6-x-1", "x^6-3x^4-2x-6"] {
        let f = p(f);
        let mut done = 0;
        let mut l = 2;
        while done < 25 {
            l += 1;
            if !is_prime(l) || factor_pattern_mod(&f, l).is_err() {
                continue;
            }
            let r = mod2_consistency(&f, l).unwrap();
            assert!(r.equal, "{f} at {l}: {:?} vs {:?}", r.lpoly_mod2, r.permutation_charpoly_mod2);
            done += 1;
        }
    }
}

#[test]
fn torsion_charpoly_small_cases() {
    // cubic with one root split off: Frobenius swaps two roots, charpoly t^2 + 1 = (t + 1)^2
    assert_eq!(torsion_charpoly_mod2(&[1, 2]), [1, 0, 1]);
    assert_eq!(torsion_charpoly_mod2(&[3]), [1, 1, 1]);
    assert_eq!(torsion_charpoly_mod2(&[1, 1, 1]), [1, 0, 1]);
    assert_eq!(torsion_charpoly_mod2(&[6]).len(), 5);
}

#[test]
fn plane_quartic_counts() {
    let c = PlaneCurve::parse(QUARTIC_4_1_1).unwrap();
    assert_eq!((c.degree, c.genus()), (4, 3));
    let bad = count_plane_curve(&c, 3).unwrap();
    assert!(bad.singular_points > 0);
    let good = count_plane_curve(&c, 5).unwrap();
    assert_eq!(good.singular_points, 0);
    assert_eq!(good.data.counts, [5, 33, 116]);
    assert!(good.data.weil_ok && good.data.functional_equation_ok);
    assert!(PlaneCurve::parse("x^2+y").is_err());
}

proptest! {
    #[test]
    fn cubic_disc_closed_form(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
        prop_assume!(a != 0);
        let f = IntPoly::new(vec![d, c, b, a]);
        let want = cubic_closed_form(a, b, c, d);
        match discriminant(&f) {
            Ok(got) => prop_assert_eq!(got, want),
            Err(_) => prop_assert_eq!(want, BigInt::from(0)),
        }
    }

    #[test]
    fn squarefree_part_times_square(coeffs in proptest::collection::vec(-20i64..20, 4..8)) {
        let f = IntPoly::new(coeffs);
        prop_assume!(f.degree().unwrap_or(0) >= 2);
        if let Ok(r) = disc_sqfree(&f) {
            let s = r.squarefree_part.clone().unwrap();
            let q = &r.disc / &s;
            prop_assert_eq!(&q * &s, r.disc.clone());
            prop_assert!(q >= BigInt::from(0));
            let m = q.magnitude().sqrt();
            prop_assert_eq!(&m * &m, q.magnitude().clone());
        }
    }

    #[test]
    fn hyperelliptic_counts_match_naive(coeffs in proptest::collection::vec(-9i64..9, 4..7), li in 0usize..6) {
        let l = [3u64, 5, 7, 11, 13, 17][li];
        let mut coeffs = coeffs;
        *coeffs.last_mut().unwrap() = 1;
        let f = IntPoly::new(coeffs);
        prop_assume!(f.degree() != Some(4));
        if let Ok(d) = count_points_lpoly(&f, l) {
            prop_assert_eq!(d.counts[0], naive_count(&f, l));
            prop_assert!(d.valid());
        }
    }

    /// Extending the prime budget never turns a certificate into a non-certificate.
    #[test]
    fn certificates_monotone_in_budget(a in -6i64..6, b in -6i64..6, budget in 1usize..20) {
        let f = IntPoly::new(vec![b, a, 0, 0, 0, 0, 1]);
        if let (Ok(small), Ok(large)) = (certify_sn(&f, budget), certify_sn(&f, budget + 30)) {
            if small.verdict == SnVerdict::Certified {
                prop_assert_eq!(&large.verdict, &SnVerdict::Certified);
            }
            if let SnVerdict::NotSn(_) = small.verdict {
                prop_assert!(matches!(large.verdict, SnVerdict::NotSn(_)));
            }
        }
    }
}

#[test]
fn evidence_tables() {
    let r = evidence_4_1(&CurveSource::Hyperelliptic(p(CURVE_4_1_2)), 50);
    assert!(r.all_valid);
    assert_eq!(r.rows.len(), 14);
    assert!(r.rows.iter().filter(|row| row.data.is_some()).count() >= 12);
    let q = evidence_4_1(&CurveSource::Plane(PlaneCurve::parse(QUARTIC_4_1_1).unwrap()), 7);
    assert!(q.rows[0].skipped.is_some());
    assert_eq!(q.rows[1].data.as_ref().unwrap().counts, [5, 33, 116]);
    assert_eq!(q.rows[2].data.as_ref().unwrap().counts, [7, 57, 379]);
    assert_eq!(q.trail, ["4.1"]);
}
