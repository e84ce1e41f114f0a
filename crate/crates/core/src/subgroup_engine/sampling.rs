//! Seeded random elements and generator sets for tests, benches and the CLI.

use rand::Rng;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::matrix_groups::{GroupDescriptor, GroupLike};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Independent random elements; usually generate everything.
    Random,
    /// One random element plus congruence-kernel elements: cyclic residue image.
    CyclicResidue,
    /// Kernel elements only: trivial residue image.
    Congruence,
    /// p-th powers of random elements.
    PowerMap,
    /// Random elements, some pushed into deeper layers.
    Mixed,
}

pub const SHAPES: [Shape; 5] = [Shape::Random, Shape::CyclicResidue, Shape::Congruence, Shape::PowerMap, Shape::Mixed];

/// Random walk of `steps` letters over the standard generators and their inverses.
pub fn random_element(desc: &GroupDescriptor, steps: usize, rng: &mut impl Rng) -> Result<Matrix> {
    let gens = desc.standard_generators()?;
    let invs: Vec<Matrix> = gens.iter().map(|g| desc.inv(g)).collect();
    let mut x = desc.identity();
    for _ in 0..steps {
        let i = rng.gen_range(0..gens.len());
        let g = if rng.gen_bool(0.5) { &gens[i] } else { &invs[i] };
        x = desc.mul(&x, g);
    }
    Ok(x)
}

/// Order of the reduction of g mod p (bounded search).
pub fn residue_order(desc: &GroupDescriptor, g: &Matrix) -> Result<u128> {
    let low = desc.at_level(1)?;
    let ring = desc.ring_ref();
    let h = low.canonical(&g.reduce(ring, 1));
    let mut x = h.clone();
    let mut k = 1u128;
    while x != low.identity() {
        x = low.mul(&x, &h);
        k += 1;
    }
    Ok(k)
}

/// g raised to the order of its residue: an element of the congruence kernel.
pub fn to_kernel(desc: &GroupDescriptor, g: &Matrix) -> Result<Matrix> {
    let e = residue_order(desc, g)?;
    Ok(desc.canonical(&g.pow(e, desc.ring_ref())))
}

pub fn random_generators(desc: &GroupDescriptor, shape: Shape, count: usize, rng: &mut impl Rng) -> Result<Vec<Matrix>> {
    let steps = 48;
    let p = desc.ring_ref().p() as u128;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let x = random_element(desc, steps, rng)?;
        let g = match shape {
            Shape::Random => x,
            Shape::CyclicResidue if i == 0 => x,
            Shape::CyclicResidue | Shape::Congruence => to_kernel(desc, &x)?,
            Shape::PowerMap => desc.canonical(&x.pow(p, desc.ring_ref())),
            Shape::Mixed => match rng.gen_range(0..3) {
                0 => x,
                1 => to_kernel(desc, &x)?,
                _ => {
                    let k = to_kernel(desc, &x)?;
                    desc.canonical(&k.pow(p, desc.ring_ref()))
                }
            },
        };
        out.push(g);
    }
    Ok(out)
}
