use crate::error::{Error, Result};
use crate::galois_ring::Ring;
use crate::lie_layers::LieAlgebra;
use crate::matrix::Matrix;
use crate::matrix_groups::{Family, GroupDescriptor, GroupLike};

/// G / (scalars) for a family containing all scalar matrices (GL, GSp, GSO).
/// Classes are represented by the scaling whose first unit entry (row-major) is 1.
#[derive(Clone, Debug)]
pub struct ScalarQuotient {
    base: GroupDescriptor,
}

impl ScalarQuotient {
    pub fn new(base: GroupDescriptor) -> Result<Self> {
        match base.family() {
            Family::GL | Family::GSp | Family::GSOPlus | Family::GSOMinus => Ok(ScalarQuotient { base }),
            f => Err(Error::UnsupportedFamily(format!("{f} does not contain the scalars"))),
        }
    }

    pub fn base(&self) -> &GroupDescriptor {
        &self.base
    }

    pub fn at_level(&self, m: u32) -> Result<Self> {
        Ok(ScalarQuotient { base: self.base.at_level(m)? })
    }
}

impl GroupLike for ScalarQuotient {
    fn ring(&self) -> &Ring {
        self.base.ring_ref()
    }
    fn dim(&self) -> usize {
        self.base.size()
    }
    fn label(&self) -> String {
        format!("{}/scalars", self.base)
    }
    fn canonical(&self, m: &Matrix) -> Matrix {
        let ring = self.ring();
        let d = m.dim();
        for i in 0..d * d {
            let e = m.entry(i / d, i % d);
            if ring.is_unit_raw(e) {
                let c = ring.inv_raw(e).expect("unit");
                return m.scale(&c, ring);
            }
        }
        m.clone()
    }
    fn contains(&self, m: &Matrix) -> bool {
        self.base.contains(m)
    }
    fn order(&self) -> Result<u128> {
        Ok(self.base.order()? / self.ring().unit_count())
    }
    fn generators(&self) -> Result<Vec<Matrix>> {
        Ok(self.base.standard_generators()?.iter().map(|g| self.canonical(g)).collect())
    }
}

/// The group a filtration is computed in: the descriptor itself or its scalar quotient.
#[derive(Clone, Debug)]
pub enum Target {
    Group(GroupDescriptor),
    Scalars(ScalarQuotient),
}

impl Target {
    pub fn at_level(&self, m: u32) -> Result<Target> {
        Ok(match self {
            Target::Group(d) => Target::Group(d.at_level(m)?),
            Target::Scalars(s) => Target::Scalars(s.at_level(m)?),
        })
    }

    pub fn group(&self) -> &dyn GroupLike {
        match self {
            Target::Group(d) => d,
            Target::Scalars(s) => s,
        }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        match self {
            Target::Group(d) => d,
            Target::Scalars(s) => s.base(),
        }
    }

    pub fn lie(&self) -> Result<LieAlgebra> {
        match self {
            Target::Group(d) => LieAlgebra::new(d),
            Target::Scalars(s) => LieAlgebra::new(s.base())?.modulo_scalars(),
        }
    }

    pub fn level(&self) -> u32 {
        self.descriptor().level()
    }
}
