//! Dense univariate polynomials over a prime field F_p, little-endian coefficients.

use crate::arith::{inv_mod, mul_mod, pow_mod};

pub type Poly = Vec<u64>;

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    let mut out: Poly = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv_lead = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], inv_lead, p);
        q[dr - db] = c;
        for i in 0..=db {
            let t = mul_mod(c, b[i], p);
            r[dr - db + i] = (r[dr - db + i] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(a, inv_mod(a[d], p).unwrap(), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Inverse of `a` modulo `m`, if gcd is 1.
pub fn inv_mod_poly(a: &[u64], m: &[u64], p: u64) -> Option<Poly> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    trim(&mut r0);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod(r0[0], p)?;
    Some(scale(&s0, c, p))
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Poly {
    let mut base = rem(a, m, p);
    let mut acc: Poly = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    let mut out: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Ben-Or irreducibility test for a polynomial of positive degree.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = match degree(f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    let f = monic(f, p);
    let x: Poly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = powmod(&xp, p as u128, &f, p);
        let g = gcd(&f, &sub(&xp, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Least monic irreducible of degree `r`, ordering candidates by the integer sum c_i p^i.
pub fn least_irreducible(p: u64, r: usize) -> Poly {
    if r == 1 {
        return vec![0, 1];
    }
    let mut coeffs = vec![0u64; r];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// Degrees of irreducible factors of a squarefree polynomial via distinct-degree factorization.
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let x: Poly = vec![0, 1];
    let mut xp = x.clone();
    let mut d = 0;
    while let Some(df) = degree(&f) {
        if df == 0 {
            break;
        }
        d += 1;
        if 2 * d > df {
            out.push(df);
            break;
        }
        xp = powmod(&xp, p as u128, &f, p);
        let g = gcd(&f, &sub(&xp, &x, p), p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 {
            for _ in 0..dg / d {
                out.push(d);
            }
            f = divrem(&f, &g, p).0;
            xp = rem(&xp, &f, p);
        }
    }
    out.sort_unstable();
    out
}

pub fn roots_count(f: &[u64], p: u64) -> usize {
    let f = monic(f, p);
    let xp = powmod(&[0, 1], p as u128, &f, p);
    degree(&gcd(&f, &sub(&xp, &[0, 1], p), p)).unwrap_or(0)
}

/// Distinct roots in F_p of a nonzero polynomial, sorted.
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let mut f = monic(f, p);
    trim(&mut f);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let xp = powmod(&[0, 1], p as u128, &f, p);
    let g = gcd(&f, &sub(&xp, &[0, 1], p), p);
    let mut out = Vec::new();
    split_roots(&g, p, 1, &mut out);
    out.sort_unstable();
    out
}

fn split_roots(g: &[u64], p: u64, mut shift: u64, out: &mut Vec<u64>) {
    match degree(g) {
        None | Some(0) => {}
        Some(1) => out.push((p - mul_mod(g[0], inv_mod(g[1], p).unwrap(), p)) % p),
        Some(_) if p < 64 => {
            for x in 0..p {
                if eval(g, x, p) == 0 {
                    out.push(x);
                }
            }
        }
        Some(d) => loop {
            // deterministic Cantor-Zassenhaus split with shifts a = 1, 2, ...
            let h = powmod(&[shift % p, 1], ((p - 1) / 2) as u128, g, p);
            let c = gcd(g, &sub(&h, &[1], p), p);
            shift += 1;
            let dc = degree(&c).unwrap_or(0);
            if dc > 0 && dc < d {
                let other = divrem(g, &c, p).0;
                split_roots(&c, p, shift, out);
                split_roots(&other, p, shift, out);
                return;
            }
        },
    }
}

/// Distinct monic irreducible factors, sorted by degree then coefficients.
pub fn irreducible_factors(f: &[u64], p: u64) -> Vec<Poly> {
    let mut f = monic(f, p);
    trim(&mut f);
    let x: Poly = vec![0, 1];
    let mut out = Vec::new();
    let mut d = 0;
    while degree(&f).unwrap_or(0) > 0 {
        d += 1;
        let df = degree(&f).unwrap();
        let g = if 2 * d > df {
            d = df;
            f.clone()
        } else {
            let xq = powmod(&x, (p as u128).pow(d as u32), &f, p);
            gcd(&f, &sub(&xq, &x, p), p)
        };
        if degree(&g).unwrap_or(0) == 0 {
            continue;
        }
        // strip every power of the found factors
        loop {
            let h = gcd(&f, &g, p);
            if degree(&h).unwrap_or(0) == 0 {
                break;
            }
            f = divrem(&f, &h, p).0;
        }
        equal_degree_split(&g, d, p, 1, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn equal_degree_split(g: &[u64], d: usize, p: u64, mut seed: u64, out: &mut Vec<Poly>) {
    let n = degree(g).unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(monic(g, p));
        return;
    }
    loop {
        // a deterministic sequence of trial polynomials of degree < n
        let mut a: Poly = (0..n)
            .map(|i| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407 + i as u64);
                (seed >> 33) % p
            })
            .collect();
        trim(&mut a);
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let h = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, g, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            sub(&powmod(&a, e, g, p), &[1], p)
        };
        let c = gcd(g, &h, p);
        let dc = degree(&c).unwrap_or(0);
        if dc > 0 && dc < n {
            let other = divrem(g, &c, p).0;
            equal_degree_split(&c, d, p, seed, out);
            equal_degree_split(&other, d, p, seed ^ 0x9e37, out);
            return;
        }
    }
}

pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = crate::arith::prime_factors(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .unwrap()
}
