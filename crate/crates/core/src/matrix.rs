//! Square matrices over a Galois ring, stored as flat coefficient arrays.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois_ring::GaloisRing;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Matrix {
    d: usize,
    r: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(d: usize, ring: &GaloisRing) -> Self {
        Matrix { d, r: ring.r(), data: vec![0; d * d * ring.r()] }
    }

    pub fn identity(d: usize, ring: &GaloisRing) -> Self {
        let mut m = Self::zero(d, ring);
        for i in 0..d {
            m.data[(i * d + i) * m.r] = 1 % ring.char();
        }
        m
    }

    pub fn scalar(d: usize, c: &[u64], ring: &GaloisRing) -> Self {
        let mut m = Self::zero(d, ring);
        for i in 0..d {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_raw(d: usize, r: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), d * d * r);
        Matrix { d, r, data }
    }

    /// Builds from integer entries (r = 1 coefficient each, higher coefficients zero).
    pub fn from_ints(rows: &[Vec<i64>], ring: &GaloisRing) -> Self {
        let d = rows.len();
        let mut m = Self::zero(d, ring);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, &ring.from_int_raw(x));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn coeff_len(&self) -> usize {
        self.r
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> &[u64] {
        let k = (i * self.d + j) * self.r;
        &self.data[k..k + self.r]
    }

    pub fn set(&mut self, i: usize, j: usize, v: &[u64]) {
        let k = (i * self.d + j) * self.r;
        self.data[k..k + self.r].copy_from_slice(v);
    }

    pub fn is_identity(&self, ring: &GaloisRing) -> bool {
        *self == Self::identity(self.d, ring)
    }

    pub fn mul(&self, o: &Matrix, ring: &GaloisRing) -> Matrix {
        let (d, r) = (self.d, self.r);
        let m = ring.char();
        if r == 1 {
            let mut data = vec![0u64; d * d];
            if m < (1 << 31) {
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0u64;
                        for k in 0..d {
                            acc += self.data[i * d + k] * o.data[k * d + j];
                            if acc >= 1 << 62 {
                                acc %= m;
                            }
                        }
                        data[i * d + j] = acc % m;
                    }
                }
            } else {
                let mm = m as u128;
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0u128;
                        for k in 0..d {
                            acc = (acc + self.data[i * d + k] as u128 * o.data[k * d + j] as u128) % mm;
                        }
                        data[i * d + j] = acc as u64;
                    }
                }
            }
            return Matrix { d, r, data };
        }
        let mut out = Matrix::zero(d, ring);
        let mut prod = vec![0u64; r];
        for i in 0..d {
            for j in 0..d {
                let base = (i * d + j) * r;
                for k in 0..d {
                    let a = self.entry(i, k);
                    if a.iter().all(|&c| c == 0) {
                        continue;
                    }
                    ring.mul_raw(a, o.entry(k, j), &mut prod);
                    for t in 0..r {
                        let s = out.data[base + t] + prod[t];
                        out.data[base + t] = if s >= m { s - m } else { s };
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix, ring: &GaloisRing) -> Matrix {
        let mut out = self.clone();
        for k in (0..self.data.len()).step_by(self.r) {
            ring.add_raw(&self.data[k..k + self.r], &o.data[k..k + self.r], &mut out.data[k..k + self.r]);
        }
        out
    }

    pub fn sub(&self, o: &Matrix, ring: &GaloisRing) -> Matrix {
        let mut out = self.clone();
        for k in (0..self.data.len()).step_by(self.r) {
            ring.sub_raw(&self.data[k..k + self.r], &o.data[k..k + self.r], &mut out.data[k..k + self.r]);
        }
        out
    }

    pub fn scale(&self, c: &[u64], ring: &GaloisRing) -> Matrix {
        let mut out = self.clone();
        for k in (0..self.data.len()).step_by(self.r) {
            ring.mul_raw(c, &self.data[k..k + self.r], &mut out.data[k..k + self.r]);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.d {
            for j in 0..self.d {
                out.set(j, i, self.entry(i, j));
            }
        }
        out
    }

    /// Entrywise Frobenius to the power k.
    pub fn frobenius(&self, k: usize, ring: &GaloisRing) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.d {
            for j in 0..self.d {
                out.set(i, j, &ring.frobenius_pow_raw(self.entry(i, j), k));
            }
        }
        out
    }

    pub fn trace(&self, ring: &GaloisRing) -> Vec<u64> {
        let mut acc = ring.zero_raw();
        for i in 0..self.d {
            let prev = acc.clone();
            ring.add_raw(&prev, self.entry(i, i), &mut acc);
        }
        acc
    }

    /// Division-free determinant (Bird's iteration).
    pub fn det(&self, ring: &GaloisRing) -> Vec<u64> {
        let d = self.d;
        if d == 0 {
            return ring.one_raw();
        }
        let mut f = self.clone();
        for _ in 1..d {
            let mut mu = Matrix::zero(d, ring);
            let mut tail = ring.zero_raw();
            for i in (0..d).rev() {
                let mut neg = ring.zero_raw();
                ring.neg_raw(&tail, &mut neg);
                mu.set(i, i, &neg);
                for j in i + 1..d {
                    mu.set(i, j, f.entry(i, j));
                }
                let prev = tail.clone();
                ring.add_raw(&prev, f.entry(i, i), &mut tail);
            }
            f = mu.mul(self, ring);
        }
        let v = f.entry(0, 0).to_vec();
        if d % 2 == 0 {
            let mut out = ring.zero_raw();
            ring.neg_raw(&v, &mut out);
            out
        } else {
            v
        }
    }

    /// Inverse by Gauss-Jordan with unit pivots; `None` if not invertible.
    pub fn inverse(&self, ring: &GaloisRing) -> Option<Matrix> {
        let d = self.d;
        let mut a = self.clone();
        let mut b = Matrix::identity(d, ring);
        for c in 0..d {
            let piv = (c..d).find(|&i| ring.is_unit_raw(a.entry(i, c)))?;
            if piv != c {
                a.swap_rows(piv, c);
                b.swap_rows(piv, c);
            }
            let inv = ring.inv_raw(a.entry(c, c)).unwrap();
            a.scale_row(c, &inv, ring);
            b.scale_row(c, &inv, ring);
            for i in 0..d {
                if i == c {
                    continue;
                }
                let f = a.entry(i, c).to_vec();
                if f.iter().all(|&x| x == 0) {
                    continue;
                }
                a.row_sub_mul(i, c, &f, ring);
                b.row_sub_mul(i, c, &f, ring);
            }
        }
        Some(b)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        let w = self.d * self.r;
        for k in 0..w {
            self.data.swap(i * w + k, j * w + k);
        }
    }

    fn scale_row(&mut self, i: usize, c: &[u64], ring: &GaloisRing) {
        let mut t = ring.zero_raw();
        for j in 0..self.d {
            ring.mul_raw(c, self.entry(i, j), &mut t);
            self.set(i, j, &t.clone());
        }
    }

    /// row_i -= f * row_c
    fn row_sub_mul(&mut self, i: usize, c: usize, f: &[u64], ring: &GaloisRing) {
        let mut t = ring.zero_raw();
        let mut s = ring.zero_raw();
        for j in 0..self.d {
            ring.mul_raw(f, self.entry(c, j), &mut t);
            ring.sub_raw(self.entry(i, j), &t, &mut s);
            self.set(i, j, &s.clone());
        }
    }

    pub fn pow(&self, mut e: u128, ring: &GaloisRing) -> Matrix {
        let mut acc = Matrix::identity(self.d, ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            base = base.mul(&base, ring);
            e >>= 1;
        }
        acc
    }

    /// Coefficientwise reduction modulo p^m (for a matrix over a ring of level >= m).
    pub fn reduce(&self, ring: &GaloisRing, m: u32) -> Matrix {
        let pm = ring.p().pow(m);
        Matrix { d: self.d, r: self.r, data: self.data.iter().map(|&c| c % pm).collect() }
    }

    /// p-adic valuation of the matrix, the minimum over its coefficients.
    pub fn valuation(&self, ring: &GaloisRing) -> u32 {
        ring.valuation_raw(&self.data)
    }

    /// Divides every coefficient by p^s (exact when the valuation is at least s).
    pub fn div_p_pow(&self, p: u64, s: u32) -> Matrix {
        let ps = p.pow(s);
        Matrix { d: self.d, r: self.r, data: self.data.iter().map(|&c| c / ps).collect() }
    }

    pub fn map_coeffs(&self, f: impl Fn(u64) -> u64) -> Matrix {
        Matrix { d: self.d, r: self.r, data: self.data.iter().map(|&c| f(c)).collect() }
    }

    pub fn block_diag(blocks: &[&Matrix], ring: &GaloisRing) -> Matrix {
        let d: usize = blocks.iter().map(|b| b.d).sum();
        let mut out = Matrix::zero(d, ring);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.d {
                for j in 0..b.d {
                    out.set(off + i, off + j, b.entry(i, j));
                }
            }
            off += b.d;
        }
        out
    }

    /// Parses `[[1,0],[0,1]]`; entries may be integers or coefficient lists `[a0,a1]`.
    pub fn parse(s: &str, ring: &GaloisRing) -> Result<Matrix> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
        Self::from_json(&v, ring)
    }

    pub fn from_json(v: &serde_json::Value, ring: &GaloisRing) -> Result<Matrix> {
        let bad = || Error::Parse("matrix must be a square array of arrays".into());
        let rows = v.as_array().ok_or_else(bad)?;
        let d = rows.len();
        let mut m = Matrix::zero(d, ring);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(bad)?;
            if row.len() != d {
                return Err(bad());
            }
            for (j, e) in row.iter().enumerate() {
                let coeffs: Vec<i64> = match e {
                    serde_json::Value::Number(x) => vec![x.as_i64().ok_or_else(bad)?],
                    serde_json::Value::Array(cs) => {
                        cs.iter().map(|c| c.as_i64().ok_or_else(bad)).collect::<Result<_>>()?
                    }
                    _ => return Err(bad()),
                };
                if coeffs.len() > ring.r() {
                    return Err(Error::Parse("entry has too many coefficients".into()));
                }
                let mut raw = ring.zero_raw();
                for (k, c) in coeffs.iter().enumerate() {
                    raw[k] = c.rem_euclid(ring.char() as i64) as u64;
                }
                m.set(i, j, &raw);
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.d)
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.d)
                        .map(|j| {
                            let e = self.entry(i, j);
                            if self.r == 1 {
                                serde_json::json!(e[0])
                            } else {
                                serde_json::json!(e)
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Packs matrices over a fixed ring into 128-bit keys.
#[derive(Clone, Copy, Debug)]
pub struct KeyCodec {
    bits: u32,
    d: usize,
    r: usize,
}

impl KeyCodec {
    pub fn new(d: usize, ring: &GaloisRing) -> Option<Self> {
        let bits = 64 - (ring.char() - 1).leading_zeros();
        let bits = bits.max(1);
        if bits as usize * d * d * ring.r() > 128 {
            return None;
        }
        Some(KeyCodec { bits, d, r: ring.r() })
    }

    pub fn pack(&self, m: &Matrix) -> u128 {
        m.data.iter().rev().fold(0u128, |acc, &c| (acc << self.bits) | c as u128)
    }

    pub fn unpack(&self, mut key: u128) -> Matrix {
        let mask = (1u128 << self.bits) - 1;
        let n = self.d * self.d * self.r;
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            data.push((key & mask) as u64);
            key >>= self.bits;
        }
        Matrix { d: self.d, r: self.r, data }
    }
}
