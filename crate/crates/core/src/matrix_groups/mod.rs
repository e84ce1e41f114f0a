//! Classical group families over Galois rings: descriptors, membership, orders and generators.

mod dynkin;
mod weil;

pub use dynkin::{DynkinDatum, DynkinType};
pub use weil::WeilRestriction;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::checked_pow;
use crate::closure::bfs_closure;
use crate::error::{Error, Result};
use crate::galois_ring::{Ring, RingParams};
use crate::matrix::Matrix;

/// Largest field-level search space scanned when a family has no explicit generators.
const SCAN_LIMIT: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    Sp,
    GSp,
    SOPlus,
    SOMinus,
    GSOPlus,
    GSOMinus,
    U,
    SU,
    SLModMu(u32),
    PGL,
    PGSp,
}

impl Family {
    pub fn is_quotient(self) -> bool {
        matches!(self, Family::PGL | Family::PGSp | Family::SLModMu(_))
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::SOPlus | Family::SOMinus | Family::GSOPlus | Family::GSOMinus)
    }

    pub fn is_similitude(self) -> bool {
        matches!(self, Family::GSp | Family::GSOPlus | Family::GSOMinus)
    }

    pub fn name(self) -> String {
        match self {
            Family::GL => "GL".into(),
            Family::SL => "SL".into(),
            Family::Sp => "Sp".into(),
            Family::GSp => "GSp".into(),
            Family::SOPlus => "SO_plus".into(),
            Family::SOMinus => "SO_minus".into(),
            Family::GSOPlus => "GSO_plus".into(),
            Family::GSOMinus => "GSO_minus".into(),
            Family::U => "U".into(),
            Family::SU => "SU".into(),
            Family::SLModMu(m) => format!("SL_mod_mu_{m}"),
            Family::PGL => "PGL".into(),
            Family::PGSp => "PGSp".into(),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "GL" => Family::GL,
            "SL" => Family::SL,
            "Sp" => Family::Sp,
            "GSp" => Family::GSp,
            "SO_plus" | "SO" => Family::SOPlus,
            "SO_minus" => Family::SOMinus,
            "GSO_plus" | "GSO" => Family::GSOPlus,
            "GSO_minus" => Family::GSOMinus,
            "U" => Family::U,
            "SU" => Family::SU,
            "PGL" => Family::PGL,
            "PGSp" => Family::PGSp,
            other => {
                let m = other
                    .strip_prefix("SL_mod_mu_")
                    .and_then(|m| m.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown family `{other}`")))?;
                Family::SLModMu(m)
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The matrix groups the generic routines (closure, enumeration) operate on.
pub trait GroupLike: Send + Sync {
    fn ring(&self) -> &Ring;
    fn dim(&self) -> usize;
    fn label(&self) -> String;
    /// Class representative; identity map for non-quotient groups.
    fn canonical(&self, m: &Matrix) -> Matrix;
    fn contains(&self, m: &Matrix) -> bool;
    fn order(&self) -> Result<u128>;
    fn generators(&self) -> Result<Vec<Matrix>>;

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        self.canonical(&a.mul(b, self.ring()))
    }

    fn inv(&self, a: &Matrix) -> Matrix {
        self.canonical(&a.inverse(self.ring()).expect("group elements are invertible"))
    }

    fn identity(&self) -> Matrix {
        self.canonical(&Matrix::identity(self.dim(), self.ring()))
    }
}

#[derive(Clone, Debug)]
pub struct GroupDescriptor {
    family: Family,
    size: usize,
    ring: Ring,
    /// Symplectic Gram matrix, upper-triangular quadratic-form matrix, or hermitian Gram matrix.
    form: Option<Matrix>,
    /// Hyperbolic pairs (i, N-1-i) for i < witt; orthogonal families only.
    witt: usize,
    /// Central scalars used for SL_mod_mu_m representatives.
    mu: Vec<Vec<u64>>,
}

impl PartialEq for GroupDescriptor {
    fn eq(&self, o: &Self) -> bool {
        self.family == o.family && self.size == o.size && *self.ring == *o.ring
    }
}
impl Eq for GroupDescriptor {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub multiplier: Option<Vec<u64>>,
}

impl GroupDescriptor {
    pub fn new(family: Family, size: usize, ring: Ring) -> Result<Self> {
        let p = ring.p();
        let n = ring.n();
        if size == 0 {
            return Err(Error::ShapeMismatch("size must be positive".into()));
        }
        let mut d = GroupDescriptor { family, size, ring: ring.clone(), form: None, witt: 0, mu: Vec::new() };
        match family {
            Family::Sp | Family::GSp | Family::PGSp => {
                if size % 2 != 0 {
                    return Err(Error::ShapeMismatch("symplectic size must be even".into()));
                }
                d.form = Some(symplectic_form(size, &ring));
            }
            Family::SOPlus | Family::SOMinus | Family::GSOPlus | Family::GSOMinus => {
                let minus = matches!(family, Family::SOMinus | Family::GSOMinus);
                if p == 2 && n > 1 {
                    return Err(Error::NotInstantiable("orthogonal groups in characteristic 2 are field-level only".into()));
                }
                if minus && n > 1 {
                    return Err(Error::NotInstantiable("non-split orthogonal groups are field-level only".into()));
                }
                if size % 2 == 1 && (p == 2 || minus || family.is_similitude()) {
                    return Err(Error::NotInstantiable("odd orthogonal groups need p odd, split, non-similitude".into()));
                }
                if size < 2 {
                    return Err(Error::ShapeMismatch("orthogonal size must be at least 2".into()));
                }
                let (u, witt) = quadratic_form(size, minus, &ring);
                d.form = Some(u);
                d.witt = witt;
            }
            Family::U | Family::SU => {
                if n != 1 || ring.r() % 2 != 0 {
                    return Err(Error::NotInstantiable("unitary groups need level 1 over F_{q^2}".into()));
                }
                d.form = Some(Matrix::identity(size, &ring));
            }
            Family::SLModMu(m) => {
                if m == 0 || size % m as usize != 0 {
                    return Err(Error::UnsupportedFamily(format!("mu_{m} is not central in SL_{size}")));
                }
                d.mu = roots_of_unity(&ring, m)?;
            }
            Family::GL | Family::SL | Family::PGL => {}
        }
        Ok(d)
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn ring_ref(&self) -> &Ring {
        &self.ring
    }
    pub fn form(&self) -> Option<&Matrix> {
        self.form.as_ref()
    }
    pub fn level(&self) -> u32 {
        self.ring.n()
    }

    pub fn at_level(&self, m: u32) -> Result<GroupDescriptor> {
        GroupDescriptor::new(self.family, self.size, self.ring.at_level(m)?)
    }

    /// Residue-field degree over which points are counted (F_q for unitary groups over F_{q^2}).
    pub fn base_field_size(&self) -> u64 {
        match self.family {
            Family::U | Family::SU => self.ring.p().pow(self.ring.r() as u32 / 2),
            _ => self.ring.residue_size(),
        }
    }

    /// Dimension of the algebraic group.
    pub fn lie_dim(&self) -> usize {
        let n = self.size;
        match self.family {
            Family::GL | Family::U => n * n,
            Family::SL | Family::PGL | Family::SLModMu(_) | Family::SU => n * n - 1,
            Family::Sp | Family::PGSp => n * (n + 1) / 2,
            Family::GSp => n * (n + 1) / 2 + 1,
            Family::SOPlus | Family::SOMinus => n * (n - 1) / 2,
            Family::GSOPlus | Family::GSOMinus => n * (n - 1) / 2 + 1,
        }
    }

    // ---- membership ----

    pub fn membership(&self, m: &Matrix) -> Result<Membership> {
        let ring = &*self.ring;
        if m.dim() != self.size || m.coeff_len() != ring.r() {
            return Err(Error::ShapeMismatch(format!("expected {0}x{0} matrix over {ring}", self.size)));
        }
        let no = Membership { member: false, multiplier: None };
        let one = ring.one_raw();
        let det = m.det(ring);
        if !ring.is_unit_raw(&det) {
            return Ok(no);
        }
        let yes = |mult: Option<Vec<u64>>| Ok(Membership { member: true, multiplier: mult });
        match self.family {
            Family::GL | Family::PGL => yes(None),
            Family::SL => {
                if det == one {
                    yes(None)
                } else {
                    Ok(no)
                }
            }
            Family::SLModMu(_) => {
                if det == one || self.mu.iter().any(|l| m.scale(l, ring).det(ring) == one) {
                    yes(None)
                } else {
                    Ok(no)
                }
            }
            Family::Sp | Family::GSp | Family::PGSp => {
                let j = self.form.as_ref().unwrap();
                let g = m.transpose().mul(j, ring).mul(m, ring);
                let half = self.size / 2;
                let mu = g.entry(0, half).to_vec();
                if self.family == Family::Sp && mu != one {
                    return Ok(no);
                }
                if !ring.is_unit_raw(&mu) || g != j.scale(&mu, ring) {
                    return Ok(no);
                }
                if self.family == Family::Sp {
                    yes(Some(one))
                } else {
                    yes(Some(mu))
                }
            }
            Family::SOPlus | Family::SOMinus | Family::GSOPlus | Family::GSOMinus => self.orthogonal_membership(m, &det),
            Family::U | Family::SU => {
                let half = ring.r() / 2;
                let star = m.frobenius(half, ring).transpose();
                if !star.mul(m, ring).is_identity(ring) {
                    return Ok(no);
                }
                if self.family == Family::SU && det != one {
                    return Ok(no);
                }
                yes(None)
            }
        }
    }

    fn orthogonal_membership(&self, m: &Matrix, det: &[u64]) -> Result<Membership> {
        let ring = &*self.ring;
        let no = Membership { member: false, multiplier: None };
        let u = self.form.as_ref().unwrap();
        let n = self.size;
        let one = ring.one_raw();
        let v = if u.entry(0, 0) == one.as_slice() { vec![0] } else { vec![0, n - 1] };
        let mut mv = vec![ring.zero_raw(); n];
        for (i, slot) in mv.iter_mut().enumerate() {
            for &j in &v {
                let prev = slot.clone();
                ring.add_raw(&prev, m.entry(i, j), slot);
            }
        }
        let mu = quad_value(u, &mv, ring);
        let similitude = self.family.is_similitude();
        if !similitude && mu != one {
            return Ok(no);
        }
        if !ring.is_unit_raw(&mu) {
            return Ok(no);
        }
        let g = m.transpose().mul(u, ring).mul(m, ring).sub(&u.scale(&mu, ring), ring);
        if !quadratic_is_zero(&g, ring) {
            return Ok(no);
        }
        let connected = if ring.p() == 2 {
            // Dickson invariant of M / sqrt(mu)
            let q = ring.residue_size() as u128;
            let s = ring.pow_raw(&mu, q / 2);
            let sinv = ring.inv_raw(&s).unwrap();
            let m1 = m.scale(&sinv, ring).sub(&Matrix::identity(n, ring), ring);
            field_rank(&m1, ring) % 2 == 0
        } else {
            det == ring.pow_raw(&mu, (n / 2) as u128).as_slice()
        };
        if !connected {
            return Ok(no);
        }
        Ok(Membership { member: true, multiplier: Some(mu) })
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.membership(m).map(|x| x.member).unwrap_or(false)
    }

    /// Canonical class representative for quotient families (identity otherwise).
    pub fn adjoint_representative(&self, m: &Matrix) -> Result<Matrix> {
        let ring = &*self.ring;
        match self.family {
            Family::PGL | Family::PGSp => {
                let k = (0..self.size * self.size)
                    .find(|&k| ring.is_unit_raw(m.entry(k / self.size, k % self.size)))
                    .ok_or(Error::NotInvertible)?;
                let c = ring.inv_raw(m.entry(k / self.size, k % self.size)).unwrap();
                Ok(m.scale(&c, ring))
            }
            Family::SLModMu(_) => {
                if m.inverse(ring).is_none() {
                    return Err(Error::NotInvertible);
                }
                Ok(self.mu.iter().map(|l| m.scale(l, ring)).min().unwrap_or_else(|| m.clone()))
            }
            _ => Ok(m.clone()),
        }
    }

    pub fn element(&self, m: Matrix) -> Result<Matrix> {
        if !self.contains(&m) {
            return Err(Error::NotInGroup(m.to_string()));
        }
        self.adjoint_representative(&m)
    }

    // ---- orders ----

    pub fn order(&self) -> Result<u128> {
        let q = self.base_field_size() as u128;
        let n = self.size as u32;
        let of = || Error::SizeOverflow;
        let pw = |e: u32| checked_pow(q, e).ok_or(Error::SizeOverflow);
        let prod = |terms: &mut dyn Iterator<Item = Result<u128>>| -> Result<u128> {
            let mut acc = 1u128;
            for t in terms {
                acc = acc.checked_mul(t?).ok_or(Error::SizeOverflow)?;
            }
            Ok(acc)
        };
        let gl = || -> Result<u128> {
            prod(&mut std::iter::once(pw(n * (n - 1) / 2)).chain((1..=n).map(|i| Ok(pw(i)? - 1))))
        };
        let sp = |m: u32| -> Result<u128> {
            prod(&mut std::iter::once(pw(m * m)).chain((1..=m).map(|i| Ok(pw(2 * i)? - 1))))
        };
        let field: u128 = match self.family {
            Family::GL => gl()?,
            Family::SL | Family::PGL => gl()? / (q - 1),
            Family::SLModMu(_) => gl()? / (q - 1),
            Family::Sp | Family::PGSp => sp(n / 2)?,
            Family::GSp => sp(n / 2)?.checked_mul(q - 1).ok_or_else(of)?,
            Family::SOPlus | Family::SOMinus | Family::GSOPlus | Family::GSOMinus => {
                let base = if n % 2 == 1 {
                    sp((n - 1) / 2)?
                } else {
                    let m = n / 2;
                    let eps = pw(m)?;
                    let e = if matches!(self.family, Family::SOPlus | Family::GSOPlus) { eps - 1 } else { eps + 1 };
                    prod(&mut [pw(m * (m - 1)), Ok(e)].into_iter().chain((1..m).map(|i| Ok(pw(2 * i)? - 1))))?
                };
                if self.family.is_similitude() {
                    base.checked_mul(q - 1).ok_or_else(of)?
                } else {
                    base
                }
            }
            Family::U | Family::SU => {
                let mut acc = pw(n * (n - 1) / 2)?;
                for i in 1..=n {
                    let t = if i % 2 == 0 { pw(i)? - 1 } else { pw(i)? + 1 };
                    acc = acc.checked_mul(t).ok_or_else(of)?;
                }
                if self.family == Family::SU {
                    acc / (q + 1)
                } else {
                    acc
                }
            }
        };
        let level = self.ring.n();
        let mut total = field.checked_mul(pw(self.lie_dim() as u32 * (level - 1))?).ok_or_else(of)?;
        if let Family::SLModMu(_) = self.family {
            total /= self.mu.len() as u128;
        }
        Ok(total)
    }

    // ---- generators ----

    pub fn standard_generators(&self) -> Result<Vec<Matrix>> {
        let ring = &*self.ring;
        let d = self.size;
        let r = ring.r();
        let basis: Vec<Vec<u64>> = (0..r)
            .map(|k| {
                let mut v = ring.zero_raw();
                v[k] = 1;
                v
            })
            .collect();
        let units = ring.unit_generators_raw();
        let gens = match self.family {
            Family::SL | Family::GL | Family::PGL | Family::SLModMu(_) => {
                let mut g = Vec::new();
                for i in 0..d.saturating_sub(1) {
                    for b in &basis {
                        g.push(elementary(d, i, i + 1, b, ring));
                        g.push(elementary(d, i + 1, i, b, ring));
                    }
                }
                if matches!(self.family, Family::GL | Family::PGL) {
                    for u in &units {
                        let mut m = Matrix::identity(d, ring);
                        m.set(0, 0, u);
                        g.push(m);
                    }
                }
                g
            }
            Family::Sp | Family::GSp | Family::PGSp => {
                let h = d / 2;
                let mut g = Vec::new();
                for i in 0..h {
                    for j in i..h {
                        for b in &basis {
                            let mut up = Matrix::identity(d, ring);
                            up.set(i, h + j, b);
                            up.set(j, h + i, b);
                            let mut lo = Matrix::identity(d, ring);
                            lo.set(h + i, j, b);
                            lo.set(h + j, i, b);
                            g.push(up);
                            g.push(lo);
                        }
                    }
                }
                if self.family != Family::Sp {
                    for u in &units {
                        let mut m = Matrix::identity(d, ring);
                        for i in 0..h {
                            m.set(i, i, u);
                        }
                        g.push(m);
                    }
                }
                g
            }
            Family::SOPlus | Family::SOMinus | Family::GSOPlus | Family::GSOMinus if self.witt > 0 => {
                self.orthogonal_generators(&basis, &units)?
            }
            _ => return self.scan_generators(),
        };
        let gens: Vec<Matrix> = gens
            .into_iter()
            .map(|m| self.adjoint_representative(&m))
            .collect::<Result<_>>()?;
        debug_assert!(gens.iter().all(|g| self.contains(g)));
        Ok(gens)
    }

    fn orthogonal_generators(&self, basis: &[Vec<u64>], units: &[Vec<u64>]) -> Result<Vec<Matrix>> {
        let ring = &*self.ring;
        let n = self.size;
        let u = self.form.as_ref().unwrap();
        let mut g = Vec::new();
        let isotropic: Vec<usize> = (0..self.witt).chain(n - self.witt..n).collect();
        for &i in &isotropic {
            for j in 0..n {
                if j == i || j == n - 1 - i {
                    continue;
                }
                for b in basis {
                    g.push(eichler(u, i, j, b, ring));
                }
            }
        }
        if ring.p() != 2 {
            for x in units {
                let mut m = Matrix::identity(n, ring);
                m.set(0, 0, x);
                m.set(n - 1, n - 1, &ring.inv_raw(x).unwrap());
                g.push(m);
            }
        }
        if self.family.is_similitude() {
            if ring.p() == 2 {
                for x in units {
                    g.push(Matrix::scalar(n, x, ring));
                }
            } else if self.family == Family::GSOPlus {
                for x in units {
                    let mut m = Matrix::identity(n, ring);
                    for i in 0..n / 2 {
                        m.set(i, i, x);
                    }
                    g.push(m);
                }
            } else {
                g.push(self.nonsplit_similitude()?);
            }
        }
        Ok(g)
    }

    /// A similitude with primitive multiplier for the non-split form (field level, p odd).
    fn nonsplit_similitude(&self) -> Result<Matrix> {
        let ring = &*self.ring;
        let n = self.size;
        let m = n / 2;
        let prim = ring.residue_primitive_raw();
        let u = self.form.as_ref().unwrap();
        let sub = Matrix::from_raw(
            2,
            ring.r(),
            [u.entry(m - 1, m - 1), u.entry(m - 1, m), u.entry(m, m - 1), u.entry(m, m)].concat(),
        );
        let q = ring.order();
        for idx in 0..q.pow(4) {
            let mut data = Vec::new();
            let mut x = idx;
            for _ in 0..4 {
                data.extend(ring.element_at(x % q));
                x /= q;
            }
            let a = Matrix::from_raw(2, ring.r(), data);
            let g = a.transpose().mul(&sub, ring).mul(&a, ring).sub(&sub.scale(&prim, ring), ring);
            if !quadratic_is_zero(&g, ring) {
                continue;
            }
            let mut out = Matrix::identity(n, ring);
            for i in 0..m - 1 {
                out.set(i, i, &prim);
            }
            for i in 0..2 {
                for j in 0..2 {
                    out.set(m - 1 + i, m - 1 + j, a.entry(i, j));
                }
            }
            if self.contains(&out) {
                return Ok(out);
            }
        }
        Err(Error::NotInstantiable("no similitude found for non-split form".into()))
    }

    /// Exhaustive scan of a small field-level group, then a greedy generating set.
    fn scan_generators(&self) -> Result<Vec<Matrix>> {
        let ring = &*self.ring;
        let q = ring.order();
        let cells = (self.size * self.size) as u32;
        let space = checked_pow(q, cells).filter(|&s| s <= SCAN_LIMIT).ok_or_else(|| {
            Error::NotInstantiable(format!("{} has no explicit generators at this size", self.family))
        })?;
        let mut members = Vec::new();
        for idx in 0..space {
            let mut data = Vec::with_capacity(cells as usize * ring.r());
            let mut x = idx;
            for _ in 0..cells {
                data.extend(ring.element_at(x % q));
                x /= q;
            }
            let m = Matrix::from_raw(self.size, ring.r(), data);
            if self.contains(&m) {
                members.push(self.adjoint_representative(&m)?);
            }
        }
        members.sort();
        members.dedup();
        let target = members.len() as u128;
        let mut gens: Vec<Matrix> = Vec::new();
        let mut have = 1u128;
        for m in members {
            if have == target {
                break;
            }
            let mut trial = gens.clone();
            trial.push(m);
            let size = bfs_closure(self, &trial, target)?.len() as u128;
            if size > have {
                have = size;
                gens = trial;
            }
        }
        Ok(gens)
    }

    /// Image of the simply connected cover on points and its index.
    pub fn sc_image(&self, bound: u128) -> Result<ScImage> {
        let cover = match self.family {
            Family::PGL | Family::SLModMu(_) | Family::SL => GroupDescriptor::new(Family::SL, self.size, self.ring.clone())?,
            Family::PGSp | Family::Sp => GroupDescriptor::new(Family::Sp, self.size, self.ring.clone())?,
            f => return Err(Error::UnsupportedFamily(format!("no simply connected cover for {f}"))),
        };
        let gens: Vec<Matrix> = cover
            .standard_generators()?
            .iter()
            .map(|g| self.adjoint_representative(g))
            .collect::<Result<_>>()?;
        let total = self.order()?;
        let image = if cover.family == self.family { total } else { bfs_closure(self, &gens, bound)?.len() as u128 };
        Ok(ScImage { generators: gens, image_order: image, index: total / image })
    }
}

#[derive(Clone, Debug)]
pub struct ScImage {
    pub generators: Vec<Matrix>,
    pub image_order: u128,
    pub index: u128,
}

impl GroupLike for GroupDescriptor {
    fn ring(&self) -> &Ring {
        &self.ring
    }
    fn dim(&self) -> usize {
        self.size
    }
    fn label(&self) -> String {
        self.to_string()
    }
    fn canonical(&self, m: &Matrix) -> Matrix {
        if self.family.is_quotient() {
            self.adjoint_representative(m).expect("invertible")
        } else {
            m.clone()
        }
    }
    fn contains(&self, m: &Matrix) -> bool {
        GroupDescriptor::contains(self, m)
    }
    fn order(&self) -> Result<u128> {
        GroupDescriptor::order(self)
    }
    fn generators(&self) -> Result<Vec<Matrix>> {
        self.standard_generators()
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.family, self.size, self.ring)
    }
}

/// Descriptor text form `GSp(4, W(p=2,r=1,n=2))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub size: usize,
    pub ring: RingParams,
}

impl FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("group descriptor `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let family: Family = s[..open].trim().parse()?;
        let body = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let (size, ring) = body.split_once(',').ok_or_else(bad)?;
        Ok(GroupSpec { family, size: size.trim().parse().map_err(|_| bad())?, ring: ring.trim().parse()? })
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupDescriptor> {
        GroupDescriptor::new(self.family, self.size, self.ring.build()?)
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.parse::<GroupSpec>()?.build()
    }
}

pub fn group(family: Family, size: usize, p: u64, r: usize, n: u32) -> Result<GroupDescriptor> {
    GroupDescriptor::new(family, size, crate::galois_ring::construct_ring(p, r, n)?)
}

pub fn membership_and_multiplier(m: &Matrix, d: &GroupDescriptor) -> Result<Membership> {
    d.membership(m)
}

pub fn group_order(d: &GroupDescriptor) -> Result<u128> {
    d.order()
}

pub fn standard_generators(d: &GroupDescriptor) -> Result<Vec<Matrix>> {
    d.standard_generators()
}

pub fn adjoint_representative(m: &Matrix, d: &GroupDescriptor) -> Result<Matrix> {
    d.adjoint_representative(m)
}

/// Entrywise reduction to level m, re-canonicalized in the lower-level descriptor.
pub fn reduce_element(g: &Matrix, d: &GroupDescriptor, m: u32) -> Result<(Matrix, GroupDescriptor)> {
    if m == 0 || m > d.level() {
        return Err(Error::BadLevel { requested: m, available: d.level() });
    }
    let low = d.at_level(m)?;
    let red = g.reduce(d.ring_ref(), m);
    let red = low.adjoint_representative(&red)?;
    Ok((red, low))
}

// ---- forms and helpers ----

fn symplectic_form(size: usize, ring: &crate::galois_ring::GaloisRing) -> Matrix {
    let h = size / 2;
    let mut j = Matrix::zero(size, ring);
    for i in 0..h {
        j.set(i, h + i, &ring.one_raw());
        j.set(h + i, i, &ring.from_int_raw(-1));
    }
    j
}

/// Upper-triangular matrix U with Q(x) = x^T U x, and the number of hyperbolic pairs.
fn quadratic_form(size: usize, minus: bool, ring: &Ring) -> (Matrix, usize) {
    let mut u = Matrix::zero(size, ring);
    let one = ring.one_raw();
    let h = size / 2;
    if !minus {
        for i in 0..h {
            u.set(i, size - 1 - i, &one);
        }
        if size % 2 == 1 {
            u.set(h, h, &one);
        }
        return (u, h);
    }
    for i in 0..h - 1 {
        u.set(i, size - 1 - i, &one);
    }
    // anisotropic plane x^2 + xy + a y^2 on coordinates (h-1, h)
    let a = anisotropic_constant(ring);
    u.set(h - 1, h - 1, &one);
    u.set(h - 1, h, &one);
    u.set(h, h, &a);
    (u, h - 1)
}

fn anisotropic_constant(ring: &Ring) -> Vec<u64> {
    let k = ring.residue_ring();
    let q = k.order();
    for ai in 0..q {
        let a = k.element_at(ai);
        let has_root = (0..q).any(|xi| {
            let x = k.element_at(xi);
            let x2 = k.mul_vec(&x, &x);
            let mut s = k.zero_raw();
            k.add_raw(&x2, &x, &mut s);
            let mut t = k.zero_raw();
            k.add_raw(&s, &a, &mut t);
            k.is_zero_raw(&t)
        });
        if !has_root {
            return ring.lift_raw(&a);
        }
    }
    unreachable!("an irreducible quadratic T^2 + T + a exists over every finite field")
}

fn quad_value(u: &Matrix, v: &[Vec<u64>], ring: &crate::galois_ring::GaloisRing) -> Vec<u64> {
    let n = u.dim();
    let mut acc = ring.zero_raw();
    for i in 0..n {
        for j in i..n {
            let c = u.entry(i, j);
            if ring.is_zero_raw(c) {
                continue;
            }
            let t = ring.mul_vec(&ring.mul_vec(&v[i], &v[j]), c);
            let prev = acc.clone();
            ring.add_raw(&prev, &t, &mut acc);
        }
    }
    acc
}

/// A matrix N defines the zero quadratic form iff N_ii = 0 and N_ij + N_ji = 0.
pub fn quadratic_is_zero(g: &Matrix, ring: &crate::galois_ring::GaloisRing) -> bool {
    let n = g.dim();
    let mut s = ring.zero_raw();
    for i in 0..n {
        if !ring.is_zero_raw(g.entry(i, i)) {
            return false;
        }
        for j in i + 1..n {
            ring.add_raw(g.entry(i, j), g.entry(j, i), &mut s);
            if !ring.is_zero_raw(&s) {
                return false;
            }
        }
    }
    true
}

/// Rank of a matrix over the residue field (ring of level 1).
pub(crate) fn field_rank(m: &Matrix, ring: &crate::galois_ring::GaloisRing) -> usize {
    let d = m.dim();
    let mut rows: Vec<Vec<Vec<u64>>> = (0..d).map(|i| (0..d).map(|j| m.entry(i, j).to_vec()).collect()).collect();
    let mut rank = 0;
    for c in 0..d {
        let Some(piv) = (rank..d).find(|&i| !ring.is_zero_raw(&rows[i][c])) else { continue };
        rows.swap(rank, piv);
        let inv = ring.inv_raw(&rows[rank][c]).unwrap();
        for i in 0..d {
            if i == rank || ring.is_zero_raw(&rows[i][c]) {
                continue;
            }
            let f = ring.mul_vec(&rows[i][c], &inv);
            for j in 0..d {
                let t = ring.mul_vec(&f, &rows[rank][j]);
                let mut s = ring.zero_raw();
                ring.sub_raw(&rows[i][j], &t, &mut s);
                rows[i][j] = s;
            }
        }
        rank += 1;
    }
    rank
}

fn elementary(d: usize, i: usize, j: usize, a: &[u64], ring: &crate::galois_ring::GaloisRing) -> Matrix {
    let mut m = Matrix::identity(d, ring);
    m.set(i, j, a);
    m
}

/// Eichler transformation x -> x + B(x,u) v - B(x,v) u - Q(v) B(x,u) u for u = e_i, v = a e_j.
fn eichler(uform: &Matrix, i: usize, j: usize, a: &[u64], ring: &crate::galois_ring::GaloisRing) -> Matrix {
    let n = uform.dim();
    let polar = uform.add(&uform.transpose(), ring);
    let qv = ring.mul_vec(&ring.mul_vec(a, a), uform.entry(j, j));
    let mut m = Matrix::identity(n, ring);
    for k in 0..n {
        // column k is the image of e_k
        let bu = polar.entry(k, i).to_vec();
        let bv = ring.mul_vec(polar.entry(k, j), a);
        let mut col: Vec<Vec<u64>> = (0..n).map(|r| m.entry(r, k).to_vec()).collect();
        let add_to = |col: &mut Vec<Vec<u64>>, idx: usize, val: &[u64]| {
            let prev = col[idx].clone();
            ring.add_raw(&prev, val, &mut col[idx]);
        };
        add_to(&mut col, j, &ring.mul_vec(&bu, a));
        let mut neg = ring.zero_raw();
        ring.neg_raw(&bv, &mut neg);
        add_to(&mut col, i, &neg);
        let t = ring.mul_vec(&qv, &bu);
        ring.neg_raw(&t, &mut neg);
        add_to(&mut col, i, &neg);
        for (r, v) in col.iter().enumerate() {
            m.set(r, k, v);
        }
    }
    m
}

/// Units lambda with lambda^m = 1.
fn roots_of_unity(ring: &Ring, m: u32) -> Result<Vec<Vec<u64>>> {
    let one = ring.one_raw();
    if ring.order() > 1 << 24 {
        if m as u64 % ring.p() == 0 {
            return Err(Error::TooLarge { size: ring.order(), bound: 1 << 24 });
        }
        let k = ring.residue_ring();
        let out: Vec<Vec<u64>> = (1..k.order())
            .map(|i| k.element_at(i))
            .filter(|x| k.pow_raw(x, m as u128) == k.one_raw())
            .map(|x| ring.teichmuller_raw(&x))
            .collect();
        return Ok(out);
    }
    Ok((0..ring.order())
        .map(|i| ring.element_at(i))
        .filter(|x| ring.is_unit_raw(x) && ring.pow_raw(x, m as u128) == one)
        .collect())
}
