//! Cycle types from factorization patterns and S_n certificates for the 4.2.1 criterion.

use num_bigint::BigInt;
use serde::Serialize;

use super::disc::{disc_sqfree, DiscReport};
use super::poly::IntPoly;
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::poly_fp;

/// Degrees of the irreducible factors of f mod l, ascending (a Frobenius cycle type).
pub fn factor_pattern_mod(f: &IntPoly, l: u64) -> Result<Vec<usize>> {
    if !is_prime(l) || !good_prime(f, l)? {
        return Err(Error::BadPrime(l));
    }
    Ok(poly_fp::factor_degrees(&f.to_fp(l), l))
}

fn good_prime(f: &IntPoly, l: u64) -> Result<bool> {
    let d = super::disc::discriminant(f)?;
    let ll = BigInt::from(l);
    Ok(f.lead().rem_euclid(l as i64) != 0 && (d % &ll) != BigInt::from(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SnVerdict {
    Certified,
    NotSn(String),
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisCertificate {
    pub degree: usize,
    pub primes_used: Vec<u64>,
    pub patterns: Vec<(u64, Vec<usize>)>,
    pub irreducibility_certified: bool,
    pub rational_root: Option<(i64, i64)>,
    pub disc_square: bool,
    pub n_cycle_seen: bool,
    pub n_minus_1_cycle_seen: bool,
    pub transposition_pattern_seen: bool,
    pub verdict: SnVerdict,
}

/// Factor-degree shapes over Q still compatible with every observed pattern.
fn compatible(shape: &[usize], pattern: &[usize]) -> bool {
    // assign each pattern part to a shape part so that sums match exactly
    fn go(parts: &[usize], room: &mut Vec<usize>) -> bool {
        let Some((&first, rest)) = parts.split_first() else { return room.iter().all(|&r| r == 0) };
        for i in 0..room.len() {
            if room[i] >= first && (i == 0 || room[i] != room[i - 1]) {
                room[i] -= first;
                let ok = go(rest, room);
                room[i] += first;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    let mut parts = pattern.to_vec();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    go(&parts, &mut shape.to_vec())
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - k, k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as i64);
            if d * d != n {
                out.push((n / d) as i64);
            }
        }
        d += 1;
    }
    out
}

/// A rational root p/q in lowest terms, by the rational root theorem.
pub fn rational_root(f: &IntPoly) -> Option<(i64, i64)> {
    let c = f.coeffs();
    if c.first() == Some(&0) {
        return Some((0, 1));
    }
    let (a0, an) = (c[0], f.lead());
    for q in divisors(an) {
        for p in divisors(a0) {
            for s in [p, -p] {
                if crate::arith::gcd(s.unsigned_abs(), q as u64) != 1 {
                    continue;
                }
                // sum c_i s^i q^(n-i) == 0, in i128
                let n = c.len() - 1;
                let mut acc: i128 = 0;
                for (i, &ci) in c.iter().enumerate() {
                    acc += ci as i128 * (s as i128).pow(i as u32) * (q as i128).pow((n - i) as u32);
                }
                if acc == 0 {
                    return Some((s, q));
                }
            }
        }
    }
    None
}

/// Certificate that Gal(f) = S_n for n in {3, 6}, using at most `prime_budget` good primes.
pub fn certify_sn(f: &IntPoly, prime_budget: usize) -> Result<GaloisCertificate> {
    let n = f.degree().unwrap_or(0);
    if n != 3 && n != 6 {
        return Err(Error::DegreeOutOfRange(n));
    }
    let disc = disc_sqfree(f)?;
    certify_with(f, &disc, prime_budget)
}

pub(crate) fn certify_with(f: &IntPoly, disc: &DiscReport, prime_budget: usize) -> Result<GaloisCertificate> {
    let n = f.degree().unwrap_or(0);
    let mut cert = GaloisCertificate {
        degree: n,
        primes_used: Vec::new(),
        patterns: Vec::new(),
        irreducibility_certified: false,
        rational_root: rational_root(f),
        disc_square: disc.is_square(),
        n_cycle_seen: false,
        n_minus_1_cycle_seen: false,
        transposition_pattern_seen: false,
        verdict: SnVerdict::Unknown,
    };
    if cert.disc_square {
        cert.verdict = SnVerdict::NotSn(format!("discriminant {} is a square, so Gal lies in A_{n}", disc.disc));
        return Ok(cert);
    }
    if let Some((p, q)) = cert.rational_root {
        cert.verdict = SnVerdict::NotSn(format!("rational root {p}/{q}, so f is reducible"));
        return Ok(cert);
    }
    if n == 3 {
        // a cubic without rational roots is irreducible
        cert.irreducibility_certified = true;
    }
    let mut shapes: Vec<Vec<usize>> = partitions(n, n).into_iter().filter(|s| s.len() > 1).collect();
    let mut l = 1u64;
    while !done(&cert) && cert.primes_used.len() < prime_budget {
        l += 1;
        if !is_prime(l) || !good_prime(f, l)? {
            continue;
        }
        let pat = poly_fp::factor_degrees(&f.to_fp(l), l);
        cert.primes_used.push(l);
        shapes.retain(|s| compatible(s, &pat));
        if shapes.is_empty() {
            cert.irreducibility_certified = true;
        }
        let ones = pat.iter().filter(|&&d| d == 1).count();
        cert.n_cycle_seen |= pat == [n];
        cert.n_minus_1_cycle_seen |= pat.len() == 2 && ones == 1 && pat.contains(&(n - 1));
        // exactly one 2-cycle and odd remaining cycles: an odd power is a transposition
        cert.transposition_pattern_seen |=
            pat.iter().filter(|&&d| d == 2).count() == 1 && pat.iter().all(|&d| d == 2 || d % 2 == 1);
        cert.patterns.push((l, pat));
    }
    if done(&cert) {
        cert.verdict = SnVerdict::Certified;
    }
    Ok(cert)
}

fn done(c: &GaloisCertificate) -> bool {
    match c.degree {
        // transitive subgroups of S_3 are A_3 and S_3; a nonsquare discriminant excludes A_3
        3 => c.irreducibility_certified,
        // transitive with an (n-1)-cycle is 2-transitive, hence primitive; with a transposition, S_n
        _ => c.irreducibility_certified && c.n_minus_1_cycle_seen && c.transposition_pattern_seen,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ImageOutcome {
    Surjective,
    NotSurjective,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageVerdict {
    pub f: String,
    pub d: usize,
    pub disc: DiscReport,
    pub certificate: GaloisCertificate,
    pub condition_i: Option<bool>,
    pub condition_ii: Option<bool>,
    pub outcome: ImageOutcome,
    pub trail: Vec<String>,
    pub notes: Vec<String>,
    pub hypotheses: Vec<String>,
}

pub const EXCLUDED_SQUAREFREE: [i64; 3] = [-1, 2, -2];

/// Im(rho_{A,2}) = GSp_{2d}(Z_2) for the Jacobian of y^2 = f(x), deg f = 3d.
pub fn verdict_4_2_1(f: &IntPoly, d: usize, assert_e_is_q: bool, prime_budget: usize) -> Result<ImageVerdict> {
    let n = f.degree().unwrap_or(0);
    if !(d == 1 || d == 2) || n != 3 * d {
        return Err(Error::DegreeOutOfRange(n));
    }
    let disc = disc_sqfree(f)?;
    let certificate = certify_with(f, &disc, prime_budget)?;
    let condition_i = match certificate.verdict {
        SnVerdict::Certified => Some(true),
        SnVerdict::NotSn(_) => Some(false),
        SnVerdict::Unknown => None,
    };
    let condition_ii = disc.squarefree_i64().map(|s| !EXCLUDED_SQUAREFREE.contains(&s)).or_else(|| {
        // a squarefree part outside i64 is certainly not -1 or +-2
        disc.squarefree_part.as_ref().map(|_| true)
    });
    let mut notes = vec![format!(
        "(ii) evaluated as squarefree_part(disc f) not in {{-1, 2, -2}}: with Gal = S_{n} the only quadratic subfield of F is Q(sqrt(disc f))"
    )];
    let mut hypotheses = Vec::new();
    let outcome = if !assert_e_is_q {
        notes.push("criterion is stated for curves over Q; base field not asserted".into());
        ImageOutcome::Unknown
    } else {
        hypotheses.push("E = Q".into());
        match (condition_i, condition_ii) {
            (Some(false), _) => ImageOutcome::NotSurjective,
            (Some(true), Some(false)) => ImageOutcome::NotSurjective,
            (Some(true), Some(true)) => ImageOutcome::Surjective,
            _ => ImageOutcome::Unknown,
        }
    };
    if disc.squarefree_part.is_none() {
        notes.push("discriminant factorization incomplete".into());
    }
    Ok(ImageVerdict {
        f: f.to_string(),
        d,
        disc,
        certificate,
        condition_i,
        condition_ii,
        outcome,
        trail: vec!["4.2.1(i)".into(), "4.2.1(ii)".into()],
        notes,
        hypotheses,
    })
}

/// Monic cubics x^3 + a x + b (|a|, |b| <= range) with Gal = S_3 and squarefree disc part in
/// `targets`, in order of (|a| + |b|, a, b).
pub fn find_cubics(targets: &[i64], range: i64, limit: usize) -> Result<Vec<IntPoly>> {
    let mut cands: Vec<(i64, i64)> = Vec::new();
    for a in -range..=range {
        for b in -range..=range {
            cands.push((a, b));
        }
    }
    cands.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a, b));
    let mut out = Vec::new();
    for (a, b) in cands {
        let f = IntPoly::new(vec![b, a, 0, 1]);
        let Ok(disc) = disc_sqfree(&f) else { continue };
        let Some(s) = disc.squarefree_i64() else { continue };
        if !targets.contains(&s) {
            continue;
        }
        if certify_with(&f, &disc, 50)?.verdict == SnVerdict::Certified {
            out.push(f);
            if out.len() == limit {
                break;
            }
        }
    }
    Ok(out)
}
