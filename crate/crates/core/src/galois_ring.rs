//! Arithmetic in Galois rings W_n(F_{p^r}) = (Z/p^n)[t]/(f), f the least monic irreducible
//! of degree r over F_p, lifted coefficientwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::poly_fp;

#[derive(Debug)]
pub struct GaloisRing {
    p: u64,
    r: usize,
    n: u32,
    pn: u64,
    modulus: Vec<u64>,
    frob_t: Vec<u64>,
}

pub type Ring = Arc<GaloisRing>;

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.n == other.n
    }
}
impl Eq for GaloisRing {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingParams {
    pub p: u64,
    pub r: usize,
    pub n: u32,
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W(p={},r={},n={})", self.p, self.r, self.n)
    }
}

impl FromStr for RingParams {
    type Err = Error;

    /// Accepts `W(p=2,r=2,n=3)`, `Z/81`, `F4` and `GF(9)`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("ring descriptor `{s}`"));
        if let Some(body) = s.strip_prefix("W(").and_then(|b| b.strip_suffix(')')) {
            let (mut p, mut r, mut n) = (None, None, None);
            for part in body.split(',') {
                let (k, v) = part.split_once('=').ok_or_else(bad)?;
                let v: u64 = v.parse().map_err(|_| bad())?;
                match k {
                    "p" => p = Some(v),
                    "r" => r = Some(v as usize),
                    "n" => n = Some(v as u32),
                    _ => return Err(bad()),
                }
            }
            return Ok(RingParams { p: p.ok_or_else(bad)?, r: r.ok_or_else(bad)?, n: n.ok_or_else(bad)? });
        }
        if let Some(m) = s.strip_prefix("Z/") {
            let m: u64 = m.parse().map_err(|_| bad())?;
            let (p, e) = prime_power(m).ok_or_else(bad)?;
            return Ok(RingParams { p, r: 1, n: e });
        }
        let q = s
            .strip_prefix("GF(")
            .and_then(|b| b.strip_suffix(')'))
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(bad)?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        let (p, e) = prime_power(q).ok_or_else(bad)?;
        Ok(RingParams { p, r: e as usize, n: 1 })
    }
}

fn prime_power(m: u64) -> Option<(u64, u32)> {
    let p = crate::arith::prime_factors(m);
    if p.len() != 1 {
        return None;
    }
    let mut e = 0;
    let mut x = m;
    while x > 1 {
        x /= p[0];
        e += 1;
    }
    Some((p[0], e))
}

pub fn construct_ring(p: u64, r: usize, n: u32) -> Result<Ring> {
    if !is_prime(p) {
        return Err(Error::InvalidRingParams(format!("{p} is not prime")));
    }
    if r == 0 || n == 0 {
        return Err(Error::InvalidRingParams("r and n must be positive".into()));
    }
    let pn = crate::arith::checked_pow(p as u128, n)
        .filter(|&x| x < (1u128 << 62))
        .ok_or_else(|| Error::InvalidRingParams(format!("p^n too large for p={p}, n={n}")))? as u64;
    let modulus = poly_fp::least_irreducible(p, r);
    let mut ring = GaloisRing { p, r, n, pn, modulus, frob_t: Vec::new() };
    ring.frob_t = ring.lift_frobenius_root();
    Ok(Arc::new(ring))
}

impl RingParams {
    pub fn build(&self) -> Result<Ring> {
        construct_ring(self.p, self.r, self.n)
    }
}

impl GaloisRing {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// Characteristic p^n.
    pub fn char(&self) -> u64 {
        self.pn
    }
    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.r as u32)
    }
    pub fn params(&self) -> RingParams {
        RingParams { p: self.p, r: self.r, n: self.n }
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.pn as u128).pow(self.r as u32)
    }

    pub fn unit_count(&self) -> u128 {
        let q = self.residue_size() as u128;
        self.order() / q * (q - 1)
    }

    pub fn at_level(&self, m: u32) -> Result<Ring> {
        construct_ring(self.p, self.r, m)
    }

    pub fn residue_ring(&self) -> Ring {
        construct_ring(self.p, self.r, 1).expect("residue ring exists")
    }

    // ---- raw coefficient-slice arithmetic ----

    pub fn zero_raw(&self) -> Vec<u64> {
        vec![0; self.r]
    }

    pub fn one_raw(&self) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[0] = 1 % self.pn;
        v
    }

    pub fn from_int_raw(&self, x: i64) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[0] = x.rem_euclid(self.pn as i64) as u64;
        v
    }

    pub fn add_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.r {
            let s = a[i] + b[i];
            out[i] = if s >= self.pn { s - self.pn } else { s };
        }
    }

    pub fn sub_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.r {
            out[i] = if a[i] >= b[i] { a[i] - b[i] } else { a[i] + self.pn - b[i] };
        }
    }

    pub fn neg_raw(&self, a: &[u64], out: &mut [u64]) {
        for i in 0..self.r {
            out[i] = if a[i] == 0 { 0 } else { self.pn - a[i] };
        }
    }

    pub fn scalar_mul_raw(&self, c: u64, a: &[u64], out: &mut [u64]) {
        for i in 0..self.r {
            out[i] = mul_mod(c % self.pn, a[i], self.pn);
        }
    }

    pub fn mul_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let r = self.r;
        let m = self.pn as u128;
        if r == 1 {
            out[0] = ((a[0] as u128 * b[0] as u128) % m) as u64;
            return;
        }
        let mut prod = [0u128; 64];
        let prod = &mut prod[..2 * r - 1];
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = (prod[i + j] + a[i] as u128 * b[j] as u128) % m;
            }
        }
        for k in (r..2 * r - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..r {
                let sub = (c * self.modulus[i] as u128) % m;
                prod[k - r + i] = (prod[k - r + i] + m - sub) % m;
            }
        }
        for i in 0..r {
            out[i] = prod[i] as u64;
        }
    }

    pub fn mul_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.r];
        self.mul_raw(a, b, &mut out);
        out
    }

    pub fn is_zero_raw(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_unit_raw(&self, a: &[u64]) -> bool {
        a.iter().any(|&c| c % self.p != 0)
    }

    /// Multiplicative inverse: invert the residue in F_p[t]/(f), then Newton-lift.
    pub fn inv_raw(&self, a: &[u64]) -> Option<Vec<u64>> {
        if !self.is_unit_raw(a) {
            return None;
        }
        let p = self.p;
        let res: Vec<u64> = a.iter().map(|&c| c % p).collect();
        let fmod: Vec<u64> = self.modulus.iter().map(|&c| c % p).collect();
        let inv0 = poly_fp::inv_mod_poly(&res, &fmod, p)?;
        let mut y = vec![0u64; self.r];
        for (i, &c) in inv0.iter().enumerate() {
            y[i] = c;
        }
        let two = self.from_int_raw(2);
        let mut prec = 1u32;
        while prec < self.n {
            let ay = self.mul_vec(a, &y);
            let mut t = vec![0; self.r];
            self.sub_raw(&two, &ay, &mut t);
            y = self.mul_vec(&y, &t);
            prec *= 2;
        }
        Some(y)
    }

    pub fn pow_raw(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one_raw();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_vec(&acc, &base);
            }
            base = self.mul_vec(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Teichmuller representative of the residue of `a`.
    pub fn teichmuller_raw(&self, a: &[u64]) -> Vec<u64> {
        let mut y: Vec<u64> = a.iter().map(|&c| c % self.p).collect();
        for _ in 0..self.r as u32 * (self.n - 1) {
            y = self.pow_raw(&y, self.p as u128);
        }
        y
    }

    fn eval_modulus_at(&self, y: &[u64], deriv: bool) -> Vec<u64> {
        // Horner over the ring
        let coeffs: Vec<u64> = if deriv {
            self.modulus.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64, self.pn)).collect()
        } else {
            self.modulus.clone()
        };
        let mut acc = self.zero_raw();
        for &c in coeffs.iter().rev() {
            acc = self.mul_vec(&acc, y);
            let mut cc = self.zero_raw();
            cc[0] = c % self.pn;
            let mut t = self.zero_raw();
            self.add_raw(&acc, &cc, &mut t);
            acc = t;
        }
        acc
    }

    fn lift_frobenius_root(&self) -> Vec<u64> {
        let mut t = self.zero_raw();
        if self.r == 1 {
            return self.one_raw();
        }
        t[1] = 1;
        let mut y = self.pow_raw(&t, self.p as u128);
        for _ in 0..self.n {
            let fy = self.eval_modulus_at(&y, false);
            if self.is_zero_raw(&fy) {
                break;
            }
            let dfy = self.eval_modulus_at(&y, true);
            let inv = self.inv_raw(&dfy).expect("modulus is separable");
            let corr = self.mul_vec(&fy, &inv);
            let mut ny = self.zero_raw();
            self.sub_raw(&y, &corr, &mut ny);
            y = ny;
        }
        y
    }

    /// Frobenius automorphism: t maps to the p-power root of the modulus.
    pub fn frobenius_raw(&self, a: &[u64]) -> Vec<u64> {
        if self.r == 1 {
            return a.to_vec();
        }
        let mut acc = self.zero_raw();
        let mut pw = self.one_raw();
        for &c in a {
            let mut term = self.zero_raw();
            self.scalar_mul_raw(c, &pw, &mut term);
            let mut s = self.zero_raw();
            self.add_raw(&acc, &term, &mut s);
            acc = s;
            pw = self.mul_vec(&pw, &self.frob_t);
        }
        acc
    }

    pub fn frobenius_pow_raw(&self, a: &[u64], k: usize) -> Vec<u64> {
        let mut y = a.to_vec();
        for _ in 0..k % self.r {
            y = self.frobenius_raw(&y);
        }
        y
    }

    /// Minimum p-adic valuation over coefficients; `n` for zero.
    pub fn valuation_raw(&self, a: &[u64]) -> u32 {
        a.iter()
            .map(|&c| {
                if c == 0 {
                    self.n
                } else {
                    let mut v = 0;
                    let mut x = c;
                    while x % self.p == 0 {
                        x /= self.p;
                        v += 1;
                    }
                    v
                }
            })
            .min()
            .unwrap_or(self.n)
    }

    /// Index of an element in base-p^n digit order; inverse of `element_at`.
    pub fn index_of(&self, a: &[u64]) -> u128 {
        a.iter().rev().fold(0u128, |acc, &c| acc * self.pn as u128 + c as u128)
    }

    pub fn element_at(&self, mut idx: u128) -> Vec<u64> {
        let mut v = vec![0; self.r];
        for c in v.iter_mut() {
            *c = (idx % self.pn as u128) as u64;
            idx /= self.pn as u128;
        }
        v
    }

    /// Generators of the unit group: a Teichmuller generator of the residue units and
    /// principal units 1 + p t^k (and 1 + 4 t^k for p = 2).
    pub fn unit_generators_raw(&self) -> Vec<Vec<u64>> {
        let mut gens = Vec::new();
        let prim = self.residue_primitive_raw();
        let tg = self.teichmuller_raw(&prim);
        if tg != self.one_raw() {
            gens.push(tg);
        }
        let mut steps = vec![self.p];
        if self.p == 2 {
            steps.push(4);
        }
        for &s in &steps {
            if s >= self.pn {
                continue;
            }
            for k in 0..self.r {
                let mut u = self.one_raw();
                u[k] = (u[k] + s) % self.pn;
                gens.push(u);
            }
        }
        gens
    }

    /// A generator of the multiplicative group of the residue field (coefficients in [0,p)).
    pub fn residue_primitive_raw(&self) -> Vec<u64> {
        let k = self.residue_ring();
        let q = self.residue_size();
        let fs = crate::arith::prime_factors(q - 1);
        (1..q as u128)
            .map(|i| k.element_at(i))
            .find(|g| fs.iter().all(|&l| k.pow_raw(g, ((q - 1) / l) as u128) != k.one_raw()))
            .unwrap_or_else(|| k.one_raw())
    }

    pub fn lift_raw(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&c| c % self.pn).collect()
    }

    /// Coefficientwise reduction modulo p^m.
    pub fn reduce_raw(&self, a: &[u64], m: u32) -> Vec<u64> {
        let pm = self.p.pow(m);
        a.iter().map(|&c| c % pm).collect()
    }

    /// Residue-field coefficients.
    pub fn residue_raw(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&c| c % self.p).collect()
    }

    // ---- element wrappers ----

    pub fn elem(self: &Arc<Self>, coeffs: &[u64]) -> RingElement {
        let mut c = vec![0; self.r];
        for (i, &x) in coeffs.iter().enumerate().take(self.r) {
            c[i] = x % self.pn;
        }
        RingElement { ring: self.clone(), coeffs: c }
    }

    pub fn int(self: &Arc<Self>, x: i64) -> RingElement {
        RingElement { ring: self.clone(), coeffs: self.from_int_raw(x) }
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        self.int(0)
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        self.int(1)
    }

    pub fn generator_t(self: &Arc<Self>) -> RingElement {
        let mut c = vec![0; self.r];
        if self.r == 1 {
            c[0] = 1;
        } else {
            c[1] = 1;
        }
        RingElement { ring: self.clone(), coeffs: c }
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.order()).map(move |i| RingElement { ring: self.clone(), coeffs: self.element_at(i) })
    }

    pub fn parse_element(self: &Arc<Self>, s: &str) -> Result<RingElement> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let mut c = Vec::new();
            for part in body.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let v: i64 = part.parse().map_err(|_| Error::Parse(format!("element `{s}`")))?;
                c.push(v.rem_euclid(self.pn as i64) as u64);
            }
            if c.len() > self.r {
                return Err(Error::Parse(format!("element `{s}` has more than {} coefficients", self.r)));
            }
            return Ok(self.elem(&c));
        }
        let v: i64 = s.parse().map_err(|_| Error::Parse(format!("element `{s}`")))?;
        Ok(self.int(v))
    }
}

impl fmt::Display for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.params().fmt(f)
    }
}

#[derive(Clone, Debug)]
pub struct RingElement {
    ring: Ring,
    coeffs: Vec<u64>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.coeffs == other.coeffs
    }
}
impl Eq for RingElement {}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Inv,
    IsUnit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingValue {
    Element(RingElement),
    Flag(bool),
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn wrap(&self, coeffs: Vec<u64>) -> RingElement {
        RingElement { ring: self.ring.clone(), coeffs }
    }

    pub fn add(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        let mut c = self.ring.zero_raw();
        self.ring.add_raw(&self.coeffs, &o.coeffs, &mut c);
        Ok(self.wrap(c))
    }

    pub fn sub(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        let mut c = self.ring.zero_raw();
        self.ring.sub_raw(&self.coeffs, &o.coeffs, &mut c);
        Ok(self.wrap(c))
    }

    pub fn mul(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        Ok(self.wrap(self.ring.mul_vec(&self.coeffs, &o.coeffs)))
    }

    pub fn neg(&self) -> RingElement {
        let mut c = self.ring.zero_raw();
        self.ring.neg_raw(&self.coeffs, &mut c);
        self.wrap(c)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit_raw(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero_raw(&self.coeffs)
    }

    pub fn inv(&self) -> Result<RingElement> {
        self.ring.inv_raw(&self.coeffs).map(|c| self.wrap(c)).ok_or(Error::NotUnit)
    }

    pub fn pow(&self, e: u128) -> RingElement {
        self.wrap(self.ring.pow_raw(&self.coeffs, e))
    }

    pub fn teichmuller(&self) -> RingElement {
        self.wrap(self.ring.teichmuller_raw(&self.coeffs))
    }

    pub fn frobenius(&self) -> RingElement {
        self.wrap(self.ring.frobenius_raw(&self.coeffs))
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation_raw(&self.coeffs)
    }

    pub fn reduce_level(&self, m: u32) -> Result<RingElement> {
        if m > self.ring.n {
            return Err(Error::BadLevel { requested: m, available: self.ring.n });
        }
        if m == 0 {
            return Err(Error::InvalidRingParams("level must be positive".into()));
        }
        let target = self.ring.at_level(m)?;
        let c = self.ring.reduce_raw(&self.coeffs, m);
        Ok(RingElement { ring: target, coeffs: c })
    }
}

pub fn ring_arith(a: &RingElement, b: Option<&RingElement>, op: RingOp) -> Result<RingValue> {
    let need_b = || b.ok_or_else(|| Error::Parse("binary operation needs two operands".into()));
    Ok(match op {
        RingOp::Add => RingValue::Element(a.add(need_b()?)?),
        RingOp::Sub => RingValue::Element(a.sub(need_b()?)?),
        RingOp::Mul => RingValue::Element(a.mul(need_b()?)?),
        RingOp::Inv => RingValue::Element(a.inv()?),
        RingOp::IsUnit => RingValue::Flag(a.is_unit()),
    })
}

pub fn teichmuller(a: &RingElement) -> RingElement {
    a.teichmuller()
}

pub fn frobenius(a: &RingElement) -> RingElement {
    a.frobenius()
}

pub fn reduce_level(a: &RingElement, m: u32) -> Result<RingElement> {
    a.reduce_level(m)
}

/// Residue-field arithmetic for a prime field, exposed for callers that need F_p only.
pub fn fp_pow(a: u64, e: u64, p: u64) -> u64 {
    pow_mod(a, e, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn descriptor_round_trip() {
        let d: RingParams = "W(p=2,r=2,n=3)".parse().unwrap();
        assert_eq!(d, RingParams { p: 2, r: 2, n: 3 });
        assert_eq!(d.to_string(), "W(p=2,r=2,n=3)");
        assert_eq!("Z/81".parse::<RingParams>().unwrap(), RingParams { p: 3, r: 1, n: 4 });
        assert_eq!("F4".parse::<RingParams>().unwrap(), RingParams { p: 2, r: 2, n: 1 });
        assert!("Z/12".parse::<RingParams>().is_err());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(construct_ring(4, 1, 1).is_err());
        assert!(construct_ring(2, 0, 1).is_err());
        assert!(construct_ring(2, 1, 70).is_err());
    }

    #[test]
    fn unit_count_matches_enumeration() {
        for (p, r, n) in [(2, 1, 3), (2, 2, 2), (3, 1, 2), (3, 2, 1), (2, 3, 1)] {
            let ring = construct_ring(p, r, n).unwrap();
            let units = ring.elements().filter(|e| e.is_unit()).count() as u128;
            assert_eq!(units, ring.unit_count());
        }
    }

    #[test]
    fn inverse_of_three_mod_eight() {
        let ring = construct_ring(2, 1, 3).unwrap();
        assert_eq!(ring.int(3).inv().unwrap(), ring.int(3));
        assert_eq!(ring.int(2).inv(), Err(Error::NotUnit));
    }

    #[test]
    fn frobenius_is_field_frobenius_on_residue() {
        let k = construct_ring(2, 3, 1).unwrap();
        for x in k.elements() {
            assert_eq!(x.frobenius(), x.pow(2));
        }
    }

    #[test]
    fn frobenius_has_order_r() {
        let ring = construct_ring(3, 2, 3).unwrap();
        let t = ring.generator_t();
        assert_ne!(t.frobenius(), t);
        assert_eq!(t.frobenius().frobenius(), t);
    }

    #[test]
    fn teichmuller_values_mod_nine() {
        let ring = construct_ring(3, 1, 2).unwrap();
        assert_eq!(ring.int(2).teichmuller(), ring.int(8));
        assert_eq!(ring.int(4).teichmuller(), ring.int(1));
    }

    #[test]
    fn unit_generators_generate() {
        for (p, r, n) in [(2, 1, 4), (2, 2, 3), (3, 1, 3), (3, 2, 2), (5, 1, 2)] {
            let ring = construct_ring(p, r, n).unwrap();
            let gens = ring.unit_generators_raw();
            let mut seen = std::collections::HashSet::new();
            let mut stack = vec![ring.one_raw()];
            seen.insert(ring.one_raw());
            while let Some(x) = stack.pop() {
                for g in &gens {
                    let y = ring.mul_vec(&x, g);
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
            assert_eq!(seen.len() as u128, ring.unit_count(), "W({p},{r},{n})");
        }
    }

    fn ring_strategy() -> impl Strategy<Value = Ring> {
        prop_oneof![
            Just((2u64, 1usize, 3u32)),
            Just((2, 2, 3)),
            Just((3, 1, 4)),
            Just((3, 2, 2)),
            Just((2, 3, 2)),
            Just((5, 2, 2)),
        ]
        .prop_map(|(p, r, n)| construct_ring(p, r, n).unwrap())
    }

    fn elem_in(ring: &Ring, seed: &[u64]) -> RingElement {
        ring.elem(seed)
    }

    proptest! {
        #[test]
        fn reduction_is_a_homomorphism(ring in ring_strategy(), a in prop::collection::vec(0u64..1000, 3), b in prop::collection::vec(0u64..1000, 3), m in 1u32..4) {
            let m = m.min(ring.n());
            let x = elem_in(&ring, &a);
            let y = elem_in(&ring, &b);
            let lhs = x.mul(&y).unwrap().reduce_level(m).unwrap();
            let rhs = x.reduce_level(m).unwrap().mul(&y.reduce_level(m).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = x.add(&y).unwrap().reduce_level(m).unwrap();
            let rhs = x.reduce_level(m).unwrap().add(&y.reduce_level(m).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn units_are_nonzero_residues(ring in ring_strategy(), a in prop::collection::vec(0u64..1000, 3)) {
            let x = elem_in(&ring, &a);
            let residue_nonzero = !x.reduce_level(1).unwrap().is_zero();
            prop_assert_eq!(x.is_unit(), residue_nonzero);
            if x.is_unit() {
                prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), ring.one());
            }
        }

        #[test]
        fn teichmuller_is_root_of_unity_and_multiplicative(ring in ring_strategy(), a in prop::collection::vec(0u64..1000, 3), b in prop::collection::vec(0u64..1000, 3)) {
            let q = ring.residue_size() as u128;
            let x = elem_in(&ring, &a);
            let y = elem_in(&ring, &b);
            let tx = x.teichmuller();
            prop_assert_eq!(tx.pow(q), tx.clone());
            prop_assert_eq!(tx.reduce_level(1).unwrap(), x.reduce_level(1).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().teichmuller(), tx.mul(&y.teichmuller()).unwrap());
        }

        #[test]
        fn frobenius_lifts_pth_power(ring in ring_strategy(), a in prop::collection::vec(0u64..1000, 3), b in prop::collection::vec(0u64..1000, 3)) {
            let x = elem_in(&ring, &a);
            let y = elem_in(&ring, &b);
            let fx = x.frobenius();
            prop_assert_eq!(fx.reduce_level(1).unwrap(), x.pow(ring.p() as u128).reduce_level(1).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().frobenius(), fx.mul(&y.frobenius()).unwrap());
            prop_assert_eq!(x.add(&y).unwrap().frobenius(), fx.add(&y.frobenius()).unwrap());
            let mut z = x.clone();
            for _ in 0..ring.r() { z = z.frobenius(); }
            prop_assert_eq!(z, x);
        }
    }
}
