//! Discriminants by Sylvester resultant and their squarefree parts.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::poly::IntPoly;
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 100_000;
pub const DEFAULT_RHO_BUDGET: u64 = 2_000_000;

pub(crate) fn ser_big<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_big_opt<S: Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_factors<S: Serializer>(x: &[(BigUint, u32)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<(String, u32)> = x.iter().map(|(p, e)| (p.to_string(), *e)).collect();
    v.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscReport {
    #[serde(serialize_with = "ser_big")]
    pub disc: BigInt,
    /// None when factorization of |disc| ran out of budget.
    #[serde(serialize_with = "ser_big_opt")]
    pub squarefree_part: Option<BigInt>,
    #[serde(serialize_with = "ser_factors")]
    pub factors: Vec<(BigUint, u32)>,
    #[serde(serialize_with = "ser_big_opt")]
    pub unfactored: Option<BigInt>,
}

impl DiscReport {
    pub fn is_square(&self) -> bool {
        self.disc.sign() != Sign::Minus && {
            let m = self.disc.magnitude();
            let r = m.sqrt();
            &(&r * &r) == m
        }
    }

    pub fn squarefree_i64(&self) -> Option<i64> {
        self.squarefree_part.as_ref().and_then(|s| s.to_i64())
    }
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
            m.swap(i, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Res(f, g) from the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(n), Some(m)) = (f.degree(), g.degree()) else { return BigInt::zero() };
    let size = n + m;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    let fd: Vec<i64> = f.coeffs().iter().rev().copied().collect();
    let gd: Vec<i64> = g.coeffs().iter().rev().copied().collect();
    for r in 0..m {
        for (k, &c) in fd.iter().enumerate() {
            s[r][r + k] = BigInt::from(c);
        }
    }
    for r in 0..n {
        for (k, &c) in gd.iter().enumerate() {
            s[m + r][r + k] = BigInt::from(c);
        }
    }
    bareiss_det(s)
}

/// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lead(f).
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = f.degree().filter(|&n| n >= 1).ok_or(Error::DegreeOutOfRange(0))?;
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(f, &f.derivative());
    let mut d = r / BigInt::from(f.lead());
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    if d.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    Ok(d)
}

pub fn disc_sqfree(f: &IntPoly) -> Result<DiscReport> {
    disc_sqfree_with_budget(f, DEFAULT_RHO_BUDGET)
}

pub fn disc_sqfree_with_budget(f: &IntPoly, rho_budget: u64) -> Result<DiscReport> {
    let disc = discriminant(f)?;
    let (factors, rest) = factor(disc.magnitude(), rho_budget);
    let sign = if disc.is_negative() { -BigInt::one() } else { BigInt::one() };
    let squarefree_part = rest.is_none().then(|| {
        factors.iter().filter(|(_, e)| e % 2 == 1).fold(sign.clone(), |acc, (p, _)| acc * BigInt::from(p.clone()))
    });
    Ok(DiscReport { disc, squarefree_part, factors, unfactored: rest.map(BigInt::from) })
}

/// Prime factorization by trial division and Pollard-Brent rho; the second component is
/// an unfactored composite cofactor when the budget runs out.
pub fn factor(n: &BigUint, rho_budget: u64) -> (Vec<(BigUint, u32)>, Option<BigUint>) {
    let mut n = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && &BigUint::from(d * d) <= &n {
        let bd = BigUint::from(d);
        while (&n % &bd).is_zero() {
            primes.push(bd.clone());
            n /= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stuck = None;
    let mut stack = Vec::new();
    if n > BigUint::one() {
        stack.push(n);
    }
    let mut budget = rho_budget;
    while let Some(m) = stack.pop() {
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        if let Some(r) = m.sqrt().pow(2).eq(&m).then(|| m.sqrt()) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        match pollard_brent(&m, &mut budget) {
            Some(f) => {
                let g = &m / &f;
                stack.push(f);
                stack.push(g);
            }
            None => {
                stuck = Some(stuck.map_or(m.clone(), |s: BigUint| s * m));
            }
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    (out, stuck)
}

/// Miller-Rabin with the first 20 prime bases (deterministic far beyond 2^64).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    const BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    for b in BASES {
        let bb = BigUint::from(b);
        if n == &bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant with deterministic constants c = 1, 2, ...; spends at most `budget` steps.
fn pollard_brent(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigUint::from(2u32), 1u64, BigUint::one());
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += M;
                let spent = M.min(r);
                if *budget < spent {
                    return None;
                }
                *budget -= spent;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}
