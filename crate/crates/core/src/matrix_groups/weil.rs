//! Weil restriction from W_n(F_{q^s}) to W_n(F_q) through the regular representation.

use crate::error::{Error, Result};
use crate::galois_ring::{construct_ring, GaloisRing, Ring};
use crate::matrix::Matrix;

use super::{Family, GroupDescriptor, GroupLike};

pub struct WeilRestriction {
    inner: GroupDescriptor,
    base: Ring,
    s: usize,
    /// Powers alpha^i t^j in t-coordinates of the big ring, indexed j * r_base + i.
    basis: Vec<Vec<u64>>,
    /// Inverse change of basis over Z/p^n.
    coord: Matrix,
    zp: Ring,
    mult_t: Matrix,
}

impl WeilRestriction {
    pub fn new(inner: GroupDescriptor, s: usize) -> Result<Self> {
        if !matches!(inner.family(), Family::GL | Family::SL | Family::PGL) {
            return Err(Error::UnsupportedFamily(format!("Weil restriction of {}", inner.family())));
        }
        let big = inner.ring_ref().clone();
        if s == 0 || big.r() % s != 0 {
            return Err(Error::InvalidRingParams(format!("degree {s} does not divide {}", big.r())));
        }
        let ra = big.r() / s;
        let base = construct_ring(big.p(), ra, big.n())?;
        let alpha = embed_generator(&base, &big)?;
        let mut basis = Vec::with_capacity(big.r());
        let mut tj = big.one_raw();
        let t = big.generator_t();
        for _ in 0..s {
            let mut ai = big.one_raw();
            for _ in 0..ra {
                basis.push(big.mul_vec(&ai, &tj));
                ai = big.mul_vec(&ai, &alpha);
            }
            tj = big.mul_vec(&tj, t.coeffs());
        }
        let zp = construct_ring(big.p(), 1, big.n())?;
        let rb = big.r();
        let mut change = Matrix::zero(rb, &zp);
        for (col, v) in basis.iter().enumerate() {
            for (row, &c) in v.iter().enumerate() {
                change.set(row, col, &[c]);
            }
        }
        let coord = change.inverse(&zp).ok_or(Error::NotInvertible)?;
        let mut w = WeilRestriction { inner, base, s, basis, coord, zp, mult_t: Matrix::zero(1, &big) };
        let tmat = Matrix::scalar(w.inner.size(), t.coeffs(), &big);
        w.mult_t = w.transport(&tmat);
        Ok(w)
    }

    pub fn inner(&self) -> &GroupDescriptor {
        &self.inner
    }

    pub fn base_ring(&self) -> &Ring {
        &self.base
    }

    /// Coordinates of a big-ring element as s elements of the base ring.
    fn split(&self, b: &[u64]) -> Vec<Vec<u64>> {
        let rb = b.len();
        let ra = self.base.r();
        let pn = self.zp.char() as u128;
        let mut c = vec![0u64; rb];
        for (row, slot) in c.iter_mut().enumerate() {
            let mut acc = 0u128;
            for (col, &x) in b.iter().enumerate() {
                acc = (acc + self.coord.entry(row, col)[0] as u128 * x as u128) % pn;
            }
            *slot = acc as u64;
        }
        (0..self.s).map(|j| c[j * ra..(j + 1) * ra].to_vec()).collect()
    }

    fn join(&self, parts: &[Vec<u64>]) -> Vec<u64> {
        let big = self.inner.ring_ref();
        let ra = self.base.r();
        let mut out = big.zero_raw();
        for (j, a) in parts.iter().enumerate() {
            for (i, &c) in a.iter().enumerate() {
                let mut term = big.zero_raw();
                big.scalar_mul_raw(c, &self.basis[j * ra + i], &mut term);
                let prev = out.clone();
                big.add_raw(&prev, &term, &mut out);
            }
        }
        out
    }

    /// Block matrix of the base-ring-linear map given by a matrix over the big ring.
    pub fn transport(&self, m: &Matrix) -> Matrix {
        let big = self.inner.ring_ref();
        let d = m.dim();
        let s = self.s;
        let mut out = Matrix::zero(d * s, &self.base);
        let t = big.generator_t();
        for a in 0..d {
            for b in 0..d {
                let mut x = m.entry(a, b).to_vec();
                for j in 0..s {
                    for (i, part) in self.split(&x).iter().enumerate() {
                        out.set(a * s + i, b * s + j, part);
                    }
                    x = big.mul_vec(&x, t.coeffs());
                }
            }
        }
        out
    }

    pub fn untransport(&self, m: &Matrix) -> Matrix {
        let big = self.inner.ring_ref();
        let s = self.s;
        let d = m.dim() / s;
        let mut out = Matrix::zero(d, big);
        for a in 0..d {
            for b in 0..d {
                let parts: Vec<Vec<u64>> = (0..s).map(|i| m.entry(a * s + i, b * s).to_vec()).collect();
                out.set(a, b, &self.join(&parts));
            }
        }
        out
    }
}

fn embed_generator(base: &GaloisRing, big: &GaloisRing) -> Result<Vec<u64>> {
    let f: Vec<u64> = base.modulus().to_vec();
    let eval = |x: &[u64], deriv: bool| -> Vec<u64> {
        let coeffs: Vec<u64> = if deriv {
            f.iter().enumerate().skip(1).map(|(i, &c)| c * i as u64 % big.char()).collect()
        } else {
            f.clone()
        };
        let mut acc = big.zero_raw();
        for &c in coeffs.iter().rev() {
            acc = big.mul_vec(&acc, x);
            acc[0] = (acc[0] + c) % big.char();
        }
        acc
    };
    let k = big.residue_ring();
    let root = (0..k.order())
        .map(|i| k.element_at(i))
        .find(|x| {
            let v = eval(x, false);
            v.iter().all(|&c| c % big.p() == 0)
        })
        .ok_or_else(|| Error::InvalidRingParams("no embedding of the base residue field".into()))?;
    let mut y = big.lift_raw(&root);
    for _ in 0..big.n() {
        let fy = eval(&y, false);
        if big.is_zero_raw(&fy) {
            break;
        }
        let inv = big.inv_raw(&eval(&y, true)).ok_or(Error::NotUnit)?;
        let corr = big.mul_vec(&fy, &inv);
        let mut ny = big.zero_raw();
        big.sub_raw(&y, &corr, &mut ny);
        y = ny;
    }
    Ok(y)
}

impl GroupLike for WeilRestriction {
    fn ring(&self) -> &Ring {
        &self.base
    }
    fn dim(&self) -> usize {
        self.inner.size() * self.s
    }
    fn label(&self) -> String {
        format!("Res[{}] {}", self.s, self.inner)
    }
    fn canonical(&self, m: &Matrix) -> Matrix {
        if self.inner.family().is_quotient() {
            self.transport(&self.inner.canonical(&self.untransport(m)))
        } else {
            m.clone()
        }
    }
    fn contains(&self, m: &Matrix) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        let r = &*self.base;
        if m.mul(&self.mult_t, r) != self.mult_t.mul(m, r) {
            return false;
        }
        self.inner.contains(&self.untransport(m))
    }
    fn order(&self) -> Result<u128> {
        self.inner.order()
    }
    fn generators(&self) -> Result<Vec<Matrix>> {
        Ok(self.inner.standard_generators()?.iter().map(|g| self.transport(g)).collect())
    }
}
