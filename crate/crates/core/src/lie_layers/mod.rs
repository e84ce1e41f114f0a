//! Congruence layers Ker(G(W_{s+1}) -> G(W_s)) as F_p-Lie algebras, and adjoint modules.

mod module;

pub use module::{adjoint_module_analysis, AdjointAnalysis, AdjointModule, Submodule};

use crate::error::{Error, Result};
use crate::galois_ring::{GaloisRing, Ring};
use crate::linalg::{nullspace, Subspace, Vector};
use crate::matrix::Matrix;
use crate::matrix_groups::{Family, GroupDescriptor};

/// The residue-field Lie algebra of a family, as an F_p-subspace of flattened matrices.
///
/// For quotient families the algebra is taken modulo scalars and stored on the slice
/// X_00 = 0; `normalize` maps any representative onto that slice.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    family: Family,
    size: usize,
    residue: Ring,
    space: Subspace,
    quotient: bool,
}

impl LieAlgebra {
    pub fn new(desc: &GroupDescriptor) -> Result<Self> {
        let family = desc.family();
        let residue = desc.ring_ref().residue_ring();
        let d = desc.size();
        let p = residue.p();
        let r = residue.r();
        let nx = d * d * r;
        if let Family::SLModMu(m) = family {
            if m as u64 % p == 0 {
                return Err(Error::NotInstantiable("Lie algebra of SL_n/mu_m with p | m".into()));
            }
        }
        let low = desc.at_level(1)?;
        let similitude = family.is_similitude() || family == Family::PGSp;
        let nvars = nx + if similitude { r } else { 0 };
        let field = &*residue;
        let cols: Vec<Vector> = (0..nvars)
            .map(|k| {
                let mut data = vec![0u64; nx];
                let mut lambda = field.zero_raw();
                if k < nx {
                    data[k] = 1;
                } else {
                    lambda[k - nx] = 1;
                }
                let x = Matrix::from_raw(d, r, data);
                constraints(&low, &x, &lambda, field)
            })
            .collect();
        let neq = cols.first().map_or(0, |c| c.len());
        let rows: Vec<Vector> = (0..neq).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let sols = if neq == 0 {
            (0..nvars)
                .map(|k| {
                    let mut v = vec![0; nvars];
                    v[k] = 1;
                    v
                })
                .collect()
        } else {
            nullspace(&rows, nvars, p)
        };
        let quotient = matches!(family, Family::PGL | Family::PGSp);
        let mut lie = LieAlgebra { family, size: d, residue: residue.clone(), space: Subspace::new(p, nx), quotient };
        for s in sols {
            let x = Matrix::from_raw(d, r, s[..nx].to_vec());
            let v = lie.normalize(&x);
            lie.space.insert(v.data());
        }
        let r_eff = if matches!(family, Family::U | Family::SU) { r / 2 } else { r };
        let expected = desc.lie_dim() * r_eff;
        if lie.space.rank() != expected {
            return Err(Error::NotInstantiable(format!(
                "linearized equations of {family} give dimension {} over F_p, expected {expected}",
                lie.space.rank()
            )));
        }
        Ok(lie)
    }

    /// The algebra modulo its scalar line (the Lie algebra of G modulo its central torus).
    pub fn modulo_scalars(&self) -> Result<LieAlgebra> {
        if self.quotient {
            return Ok(self.clone());
        }
        let k = &*self.residue;
        let id = Matrix::identity(self.size, k);
        if !self.space.contains(id.data()) {
            return Err(Error::NotInLieAlgebra);
        }
        let mut out = LieAlgebra { quotient: true, space: Subspace::new(self.p(), self.ambient()), ..self.clone() };
        for v in self.space.basis() {
            let x = out.normalize(&self.to_matrix(v));
            out.space.insert(x.data());
        }
        Ok(out)
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn residue(&self) -> &Ring {
        &self.residue
    }
    pub fn p(&self) -> u64 {
        self.residue.p()
    }
    pub fn is_quotient(&self) -> bool {
        self.quotient
    }
    pub fn space(&self) -> &Subspace {
        &self.space
    }
    /// Dimension over F_p.
    pub fn dim_fp(&self) -> usize {
        self.space.rank()
    }
    pub fn ambient(&self) -> usize {
        self.size * self.size * self.residue.r()
    }

    /// Canonical representative modulo scalars (identity for non-quotient families).
    pub fn normalize(&self, x: &Matrix) -> Matrix {
        if !self.quotient {
            return x.clone();
        }
        let k = &*self.residue;
        let c = x.entry(0, 0).to_vec();
        x.sub(&Matrix::scalar(self.size, &c, k), k)
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.space.contains(self.normalize(x).data())
    }

    pub fn to_vector(&self, x: &Matrix) -> Vector {
        self.normalize(x).data().to_vec()
    }

    pub fn to_matrix(&self, v: &[u64]) -> Matrix {
        Matrix::from_raw(self.size, self.residue.r(), v.to_vec())
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.space.basis().iter().map(|v| self.to_matrix(v)).collect()
    }

    pub fn bracket(&self, x: &Matrix, y: &Matrix) -> Matrix {
        let k = &*self.residue;
        self.normalize(&x.mul(y, k).sub(&y.mul(x, k), k))
    }

    /// Ad(g) X = g X g^{-1} for a residue-level group element g.
    pub fn adjoint(&self, g: &Matrix, x: &Matrix) -> Matrix {
        let k = &*self.residue;
        let gi = g.inverse(k).expect("group element");
        self.normalize(&g.mul(x, k).mul(&gi, k))
    }

    /// Multiplication by the residue generator t; a subspace is a k-subspace iff stable under it.
    pub fn scale_by_t(&self, x: &Matrix) -> Matrix {
        let k = &self.residue;
        self.normalize(&x.scale(k.generator_t().coeffs(), k))
    }

    pub fn is_k_subspace(&self, s: &Subspace) -> bool {
        s.basis().iter().all(|v| s.contains(self.scale_by_t(&self.to_matrix(v)).data()))
    }

    /// Encodes X as I + p^s lift(X) in G(W_{s+1}).
    pub fn encode(&self, x: &Matrix, s: u32, desc: &GroupDescriptor) -> Result<Matrix> {
        if !self.contains(x) {
            return Err(Error::NotInLieAlgebra);
        }
        let top = desc.at_level(s + 1)?;
        let ring = top.ring_ref();
        let ps = self.p().pow(s);
        let lifted = x.map_coeffs(|c| c * ps);
        let m = Matrix::identity(self.size, ring).add(&lifted, ring);
        top.adjoint_representative(&m)
    }

    /// Decodes g = I mod p^s (g over a ring of level >= s+1) to (g - I)/p^s mod p.
    pub fn decode(&self, g: &Matrix, s: u32, ring: &GaloisRing) -> Result<Matrix> {
        if s == 0 || s + 1 > ring.n() {
            return Err(Error::BadLevel { requested: s + 1, available: ring.n() });
        }
        let p = self.p();
        let g = g.reduce(ring, s + 1);
        let top = ring.at_level(s + 1)?;
        let g = self.kernel_representative(&g, &top)?;
        let diff = g.sub(&Matrix::identity(self.size, &top), &top);
        if diff.valuation(&top) < s {
            return Err(Error::NotInKernel);
        }
        let x = diff.div_p_pow(p, s).map_coeffs(|c| c % p);
        Ok(self.normalize(&x))
    }

    /// Valuation of g - I: the largest s with g = I mod p^s (ring level if g = I).
    pub fn depth(&self, g: &Matrix, ring: &GaloisRing) -> u32 {
        let g = self.kernel_representative(g, ring).unwrap_or_else(|_| g.clone());
        g.sub(&Matrix::identity(self.size, ring), ring).valuation(ring)
    }

    /// Chooses the class representative congruent to I when one exists.
    fn kernel_representative(&self, g: &Matrix, ring: &GaloisRing) -> Result<Matrix> {
        match self.family {
            Family::SLModMu(_) => self.mu_representative(g, ring),
            _ if self.quotient => {
                let c = ring.inv_raw(g.entry(0, 0)).ok_or(Error::NotInKernel)?;
                Ok(g.scale(&c, ring))
            }
            _ => Ok(g.clone()),
        }
    }

    fn mu_representative(&self, g: &Matrix, ring: &GaloisRing) -> Result<Matrix> {
        let Family::SLModMu(m) = self.family else { return Ok(g.clone()) };
        let k = ring.residue_ring();
        let c = g.reduce(ring, 1).entry(0, 0).to_vec();
        // lambda = Teichmuller lift of the inverse residue scalar, an m-th root of unity
        let ci = k.inv_raw(&c).ok_or(Error::NotInKernel)?;
        let lam = ring.teichmuller_raw(&ring.lift_raw(&ci));
        if ring.pow_raw(&lam, m as u128) != ring.one_raw() {
            return Err(Error::NotInKernel);
        }
        Ok(g.scale(&lam, ring))
    }
}

/// Linearized defining equations evaluated at (X, lambda), flattened to F_p coordinates.
fn constraints(d: &GroupDescriptor, x: &Matrix, lambda: &[u64], k: &GaloisRing) -> Vector {
    let n = d.size();
    match d.family() {
        Family::GL | Family::PGL => Vec::new(),
        Family::SL | Family::SLModMu(_) => x.trace(k),
        Family::Sp | Family::GSp | Family::PGSp => {
            let j = d.form().unwrap();
            let mut e = x.transpose().mul(j, k).add(&j.mul(x, k), k);
            if d.family() != Family::Sp {
                e = e.sub(&j.scale(lambda, k), k);
            }
            e.data().to_vec()
        }
        Family::SOPlus | Family::SOMinus | Family::GSOPlus | Family::GSOMinus => {
            let u = d.form().unwrap();
            let mut e = x.transpose().mul(u, k).add(&u.mul(x, k), k);
            if d.family().is_similitude() {
                e = e.sub(&u.scale(lambda, k), k);
            }
            let mut out = Vec::new();
            for i in 0..n {
                out.extend_from_slice(e.entry(i, i));
                for j in i + 1..n {
                    let mut s = k.zero_raw();
                    k.add_raw(e.entry(i, j), e.entry(j, i), &mut s);
                    out.extend(s);
                }
            }
            out
        }
        Family::U | Family::SU => {
            let half = k.r() / 2;
            let e = x.frobenius(half, k).transpose().add(x, k);
            let mut out = e.data().to_vec();
            if d.family() == Family::SU {
                out.extend(x.trace(k));
            }
            out
        }
    }
}

pub fn lie_basis(desc: &GroupDescriptor) -> Result<Vec<Matrix>> {
    Ok(LieAlgebra::new(desc)?.basis())
}

/// Result of comparing the commutator of two kernel elements with the bracket of their layers.
#[derive(Clone, Debug)]
pub struct BracketCheck {
    pub lhs: Matrix,
    pub rhs: Matrix,
    pub equal: bool,
}

/// For p = 2: the mod-8 commutator of x, y = I mod 2 lies in the layer at level 2 and
/// equals the bracket of the mod-4 layer vectors.
pub fn bracket_and_commutator_check(lie: &LieAlgebra, x: &Matrix, y: &Matrix, ring: &GaloisRing) -> Result<BracketCheck> {
    if ring.p() != 2 {
        return Err(Error::WrongParity);
    }
    if ring.n() < 3 {
        return Err(Error::BadLevel { requested: 3, available: ring.n() });
    }
    let r3 = ring.at_level(3)?;
    let x3 = x.reduce(ring, 3);
    let y3 = y.reduce(ring, 3);
    let comm = x3
        .mul(&y3, &r3)
        .mul(&x3.inverse(&r3).ok_or(Error::NotInvertible)?, &r3)
        .mul(&y3.inverse(&r3).ok_or(Error::NotInvertible)?, &r3);
    let lhs = lie.decode(&comm, 2, &r3)?;
    let xb = lie.decode(&x3, 1, &r3)?;
    let yb = lie.decode(&y3, 1, &r3)?;
    let rhs = lie.bracket(&xb, &yb);
    let equal = lhs == rhs;
    Ok(BracketCheck { lhs, rhs, equal })
}

#[cfg(test)]
mod tests;
