//! Shared inputs for the benchmarks in `benches/`.

use liftcheck_core::matrix::Matrix;
use liftcheck_core::matrix_groups::GroupDescriptor;
use liftcheck_core::subgroup_engine::GeneratedSubgroup;

pub fn descriptor(s: &str) -> GroupDescriptor {
    s.parse().expect("benchmark descriptor")
}

/// K generated by the standard generators of the descriptor.
pub fn standard_subgroup(s: &str) -> GeneratedSubgroup {
    let d = descriptor(s);
    let gens = d.standard_generators().expect("standard generators");
    GeneratedSubgroup::new(d, gens).expect("generators lie in the group")
}

/// Product of all standard generators, a dense-ish element for arithmetic kernels.
pub fn dense_element(d: &GroupDescriptor) -> Matrix {
    let ring = d.ring_ref();
    let gens = d.standard_generators().expect("standard generators");
    gens.iter().fold(Matrix::identity(d.size(), ring), |acc, g| acc.mul(g, ring))
}
