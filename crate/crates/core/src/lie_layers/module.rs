//! F_p-modules given by generator action matrices: spinning, invariant lines, irreducibility.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{charpoly, identity, mat_mul, mat_vec, nullspace, transpose, Mat, Subspace, Vector};
use crate::matrix::Matrix;
use crate::poly_fp;

use super::LieAlgebra;

/// Upper bound on module dimension for the analysis.
pub const MODULE_DIM_BOUND: usize = 100;
/// Largest number of projective points enumerated for exhaustive spinning.
const EXHAUSTIVE_POINTS: u128 = 1 << 14;

#[derive(Clone, Debug)]
struct Module {
    p: u64,
    dim: usize,
    actions: Vec<Mat>,
}

impl Module {
    fn spin(&self, v: &[u64]) -> Subspace {
        let mut s = Subspace::new(self.p, self.dim);
        let mut queue: Vec<Vector> = Vec::new();
        if let Some(b) = s.insert(v) {
            queue.push(b);
        }
        while let Some(w) = queue.pop() {
            for a in &self.actions {
                if let Some(b) = s.insert(&mat_vec(a, &w, self.p)) {
                    queue.push(b);
                }
            }
            if s.is_full() {
                break;
            }
        }
        s
    }

    fn dual(&self) -> Module {
        // contragredient action: (A^{-1})^T; the transpose suffices for invariant subspaces
        Module { p: self.p, dim: self.dim, actions: self.actions.iter().map(transpose).collect() }
    }

    fn restrict(&self, sub: &Subspace) -> Module {
        let basis = sub.basis();
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let cols: Vec<Vector> = basis.iter().map(|b| sub.coordinates(&mat_vec(a, b, self.p)).expect("invariant")).collect();
                transpose(&cols)
            })
            .collect();
        Module { p: self.p, dim: basis.len(), actions }
    }

    fn projective_points(&self) -> Option<Vec<Vector>> {
        let p = self.p as u128;
        let count = (p.checked_pow(self.dim as u32)? - 1) / (p - 1);
        if count > EXHAUSTIVE_POINTS {
            return None;
        }
        let mut out = Vec::with_capacity(count as usize);
        for lead in 0..self.dim {
            let tail = self.dim - lead - 1;
            for idx in 0..(p.pow(tail as u32)) {
                let mut v = vec![0u64; self.dim];
                v[lead] = 1;
                let mut x = idx;
                for slot in v.iter_mut().skip(lead + 1) {
                    *slot = (x % p) as u64;
                    x /= p;
                }
                out.push(v);
            }
        }
        Some(out)
    }

    /// Common eigenvectors of all actions, one representative per found eigen-intersection.
    fn invariant_lines(&self) -> Vec<Vector> {
        let p = self.p;
        let mut cands: Vec<Vec<Vector>> = vec![(0..self.dim)
            .map(|i| {
                let mut v = vec![0; self.dim];
                v[i] = 1;
                v
            })
            .collect()];
        for a in &self.actions {
            let cp = charpoly(a, p);
            let eig: Vec<u64> = poly_fp::roots(&cp, p).into_iter().filter(|&l| l != 0).collect();
            let mut next = Vec::new();
            for basis in &cands {
                // columns of B are the basis vectors; solve (A - l I) B y = 0
                let ab: Vec<Vector> = basis.iter().map(|b| mat_vec(a, b, p)).collect();
                for &l in &eig {
                    let cols: Vec<Vector> = ab
                        .iter()
                        .zip(basis)
                        .map(|(x, b)| x.iter().zip(b).map(|(&u, &w)| (u + p - (l * w) % p) % p).collect())
                        .collect();
                    let rows = transpose(&cols);
                    let ys = nullspace(&rows, basis.len(), p);
                    if ys.is_empty() {
                        continue;
                    }
                    let vecs: Vec<Vector> = ys
                        .iter()
                        .map(|y| {
                            let mut v = vec![0u64; self.dim];
                            for (b, &c) in basis.iter().zip(y) {
                                for (t, &bi) in v.iter_mut().zip(b) {
                                    *t = (*t + c * bi) % p;
                                }
                            }
                            v
                        })
                        .collect();
                    next.push(vecs);
                }
            }
            cands = next;
            if cands.is_empty() {
                break;
            }
        }
        cands.into_iter().map(|b| b[0].clone()).collect()
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Mat {
        let p = self.p;
        let mut theta = vec![vec![0u64; self.dim]; self.dim];
        for _ in 0..4 {
            let len = rng.gen_range(1..=3);
            let mut w = identity(self.dim);
            for _ in 0..len {
                let a = &self.actions[rng.gen_range(0..self.actions.len())];
                w = mat_mul(&w, a, p);
            }
            let c = rng.gen_range(1..p.max(2));
            for (tr, wr) in theta.iter_mut().zip(&w) {
                for (t, &x) in tr.iter_mut().zip(wr) {
                    *t = (*t + c * x % p) % p;
                }
            }
        }
        theta
    }

    /// Exact when exhaustive; otherwise the Holt-Rees form of Norton's criterion,
    /// `None` if it never applies.
    fn is_irreducible(&self, seed: u64) -> Option<bool> {
        if self.dim == 0 {
            return Some(false);
        }
        if self.actions.is_empty() {
            return Some(self.dim == 1);
        }
        if let Some(points) = self.projective_points() {
            return Some(points.iter().all(|v| self.spin(v).is_full()));
        }
        let p = self.p;
        let dual = self.dual();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let theta = self.random_element(&mut rng);
            for f in poly_fp::irreducible_factors(&charpoly(&theta, p), p) {
                if f.len() > 9 {
                    break;
                }
                let nt = poly_at(&f, &theta, p);
                let ker = nullspace(&nt, self.dim, p);
                if ker.is_empty() {
                    continue;
                }
                if !self.spin(&ker[0]).is_full() {
                    return Some(false);
                }
                let kert = nullspace(&transpose(&nt), self.dim, p);
                if !dual.spin(&kert[0]).is_full() {
                    return Some(false);
                }
                if ker.len() == f.len() - 1 {
                    return Some(true);
                }
            }
        }
        None
    }
}

fn poly_at(f: &[u64], a: &Mat, p: u64) -> Mat {
    let n = a.len();
    let mut acc = vec![vec![0u64; n]; n];
    for &c in f.iter().rev() {
        acc = mat_mul(&acc, a, p);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = (row[i] + c) % p;
        }
    }
    acc
}

/// The adjoint module of a residue-level group acting on its Lie algebra.
#[derive(Clone, Debug)]
pub struct AdjointModule {
    lie: LieAlgebra,
    generators: Vec<Matrix>,
    module: Module,
}

#[derive(Clone, Debug, Serialize)]
pub struct Submodule {
    pub dim: usize,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointAnalysis {
    pub dim_fp: usize,
    pub derived_dim: usize,
    pub center_dim: usize,
    pub abelianization_dim: usize,
    pub derived_pivots: Vec<usize>,
    pub center_pivots: Vec<usize>,
    pub minimal_submodules: Vec<Submodule>,
    pub minimal_search_exhaustive: bool,
    pub has_codim1_invariant: bool,
    pub is_simple_derived: Option<bool>,
}

impl AdjointModule {
    /// `generators` are group elements at any level; they act through their residues.
    pub fn new(lie: &LieAlgebra, generators: &[Matrix]) -> Result<Self> {
        let dim = lie.dim_fp();
        if dim > MODULE_DIM_BOUND {
            return Err(Error::TooLarge { size: dim as u128, bound: MODULE_DIM_BOUND as u128 });
        }
        let p = lie.p();
        let pmod = lie.residue().char();
        let gens: Vec<Matrix> = generators.iter().map(|g| g.map_coeffs(|c| c % pmod)).collect();
        let basis = lie.basis();
        let mut actions = Vec::new();
        for g in &gens {
            let cols: Vec<Vector> = basis
                .iter()
                .map(|b| lie.space().coordinates(lie.adjoint(g, b).data()).ok_or(Error::NotInLieAlgebra))
                .collect::<Result<_>>()?;
            actions.push(transpose(&cols));
        }
        Ok(AdjointModule { lie: lie.clone(), generators: gens, module: Module { p, dim, actions } })
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }
    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }
    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }
    pub fn action_matrices(&self) -> &[Mat] {
        &self.module.actions
    }

    pub fn coords(&self, x: &Matrix) -> Option<Vector> {
        self.lie.space().coordinates(&self.lie.to_vector(x))
    }

    pub fn from_coords(&self, c: &[u64]) -> Matrix {
        let p = self.lie.p();
        let mut v = vec![0u64; self.lie.ambient()];
        for (b, &x) in self.lie.space().basis().iter().zip(c) {
            for (t, &bi) in v.iter_mut().zip(b) {
                *t = (*t + x * bi) % p;
            }
        }
        self.lie.to_matrix(&v)
    }

    /// Smallest submodule containing the algebra element x, in coordinates.
    pub fn spin(&self, x: &Matrix) -> Subspace {
        self.module.spin(&self.coords(x).expect("element of the algebra"))
    }

    pub fn derived(&self) -> Subspace {
        let basis = self.lie.basis();
        let mut s = Subspace::new(self.lie.p(), self.dim());
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                s.insert(&self.coords(&self.lie.bracket(&basis[i], &basis[j])).unwrap());
            }
        }
        s
    }

    pub fn center(&self) -> Subspace {
        let basis = self.lie.basis();
        let n = basis.len();
        let mut rows: Vec<Vector> = Vec::new();
        for bj in &basis {
            // column i: coords of [b_i, b_j]
            let cols: Vec<Vector> = basis.iter().map(|bi| self.coords(&self.lie.bracket(bi, bj)).unwrap()).collect();
            rows.extend(transpose(&cols));
        }
        let ns = nullspace(&rows, n, self.lie.p());
        Subspace::from_vectors(self.lie.p(), n, ns.iter())
    }

    /// An invariant subspace of codimension one exists iff the dual has an invariant line.
    pub fn has_codim1_invariant(&self) -> bool {
        !self.module.dual().invariant_lines().is_empty()
    }

    /// Minimal nonzero submodules among spins of candidate vectors, and whether every
    /// nonzero vector was tried.
    pub fn minimal_submodules(&self) -> (Vec<Subspace>, bool) {
        let m = &self.module;
        let (cands, exhaustive) = match m.projective_points() {
            Some(pts) => (pts, true),
            None => {
                let mut c: Vec<Vector> = (0..m.dim)
                    .map(|i| {
                        let mut v = vec![0; m.dim];
                        v[i] = 1;
                        v
                    })
                    .collect();
                c.extend(m.invariant_lines());
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                for _ in 0..16 {
                    let theta = m.random_element(&mut rng);
                    c.extend(nullspace(&theta, m.dim, m.p));
                }
                (c, false)
            }
        };
        let mut spins: Vec<Subspace> = Vec::new();
        for v in &cands {
            let s = m.spin(v);
            if !spins.iter().any(|t| t.equals(&s)) {
                spins.push(s);
            }
        }
        spins.sort_by_key(|s| s.rank());
        let mut minimal: Vec<Subspace> = Vec::new();
        for s in spins {
            if !minimal.iter().any(|t| t.is_subspace_of(&s)) {
                minimal.push(s);
            }
        }
        (minimal, exhaustive)
    }

    pub fn is_simple_derived(&self) -> Option<bool> {
        let d = self.derived();
        self.module.restrict(&d).is_irreducible(0xad1)
    }

    /// Irreducibility of an invariant subspace given in coordinates.
    pub fn is_simple_submodule(&self, sub: &Subspace) -> Option<bool> {
        self.module.restrict(sub).is_irreducible(0x51)
    }

    pub fn analyze(&self) -> AdjointAnalysis {
        let derived = self.derived();
        let center = self.center();
        let (minimal, exhaustive) = self.minimal_submodules();
        AdjointAnalysis {
            dim_fp: self.dim(),
            derived_dim: derived.rank(),
            center_dim: center.rank(),
            abelianization_dim: self.dim() - derived.rank(),
            derived_pivots: derived.pivots().to_vec(),
            center_pivots: center.pivots().to_vec(),
            minimal_submodules: minimal.iter().map(|s| Submodule { dim: s.rank(), pivots: s.pivots().to_vec() }).collect(),
            minimal_search_exhaustive: exhaustive,
            has_codim1_invariant: self.has_codim1_invariant(),
            is_simple_derived: self.is_simple_derived(),
        }
    }
}

pub fn adjoint_module_analysis(m: &AdjointModule) -> AdjointAnalysis {
    m.analyze()
}
