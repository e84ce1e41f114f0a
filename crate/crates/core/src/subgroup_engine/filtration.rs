use serde::Serialize;

use super::quotient::Target;
use super::{EngineOptions, ResidueImage};
use crate::arith::{checked_pow, inv_mod};
use crate::closure::{bfs_closure, Closure};
use crate::error::{Error, Result};
use crate::galois_ring::Ring;
use crate::lie_layers::LieAlgebra;
use crate::linalg::{Subspace, Vector};
use crate::matrix::{KeyCodec, Matrix};
use crate::matrix_groups::GroupLike;

#[derive(Clone, Debug, Serialize)]
pub struct Layer {
    /// Layer index: the kernel of reduction mod p^s inside the image mod p^(s+1).
    pub s: u32,
    pub dim: usize,
    pub basis: Vec<Vector>,
}

/// Images of K in the congruence layers 1 <= s < N, as F_p-subspaces of Lie(G_k).
#[derive(Clone, Debug, Serialize)]
pub struct LayerFiltration {
    pub residue: ResidueImage,
    pub level: u32,
    pub p: u64,
    pub lie_dim: usize,
    pub ambient: usize,
    pub layers: Vec<Layer>,
    /// False when some Schreier generator beyond the word budget is not accounted for.
    pub exact: bool,
    pub truncated: bool,
    pub schreier_used: usize,
    /// Generators longer than the budget: not used for discovery, only sifted afterwards.
    pub schreier_skipped: usize,
    pub schreier_unverified: usize,
    pub word_budget: usize,
}

impl LayerFiltration {
    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.dim).collect()
    }

    pub fn layer(&self, s: u32) -> Option<&Layer> {
        self.layers.iter().find(|l| l.s == s)
    }

    pub fn subspace(&self, s: u32) -> Subspace {
        let basis = self.layer(s).map(|l| l.basis.as_slice()).unwrap_or(&[]);
        Subspace::from_vectors(self.p, self.ambient, basis)
    }

    pub fn is_full(&self, s: u32) -> bool {
        self.layer(s).is_some_and(|l| l.dim == self.lie_dim)
    }

    pub fn all_full(&self) -> bool {
        self.residue.full && self.layers.iter().all(|l| l.dim == self.lie_dim)
    }

    /// log_p of |K ∩ Ker(G(W_N) -> G(k))|.
    pub fn kernel_log_order(&self) -> u32 {
        self.layers.iter().map(|l| l.dim as u32).sum()
    }

    /// |K mod p^N| when the filtration is exact.
    pub fn order(&self) -> Result<u128> {
        if !self.exact {
            return Err(Error::NotExactFiltration(format!(
                "{} Schreier generators beyond word budget {} are not accounted for",
                self.schreier_unverified, self.word_budget
            )));
        }
        let k = checked_pow(self.p as u128, self.kernel_log_order()).ok_or(Error::SizeOverflow)?;
        self.residue.order.checked_mul(k).ok_or(Error::SizeOverflow)
    }

    /// Basis vectors of Lie(G_k) completing layer s.
    pub fn missing(&self, s: u32, lie: &LieAlgebra) -> Vec<Vector> {
        let mut span = self.subspace(s);
        let mut out = Vec::new();
        for v in lie.space().basis() {
            if span.insert(v).is_some() {
                out.push(v.clone());
            }
        }
        out
    }
}

/// Transversal lifts of the residue image, packed when the codec fits.
enum Lifts {
    Packed(KeyCodec, Vec<u128>),
    Plain(Vec<Matrix>),
}

impl Lifts {
    fn get(&self, i: usize) -> Matrix {
        match self {
            Lifts::Packed(c, v) => c.unpack(v[i]),
            Lifts::Plain(v) => v[i].clone(),
        }
    }
}

struct Basis {
    pivot: usize,
    vec: Vector,
    elt: Matrix,
}

/// Polycyclic generating sequence of the kernel part, one echelon basis per layer.
struct Pcgs<'a> {
    group: &'a dyn GroupLike,
    ring: Ring,
    lie: &'a LieAlgebra,
    p: u64,
    n: u32,
    layers: Vec<Vec<Basis>>,
    lie_dim: usize,
}

impl<'a> Pcgs<'a> {
    fn full(&self) -> bool {
        self.layers.iter().all(|l| l.len() == self.lie_dim)
    }

    fn power(&self, g: &Matrix, e: u64) -> Matrix {
        self.group.canonical(&g.pow(e as u128, &self.ring))
    }

    /// Reduces g against the layers; the residual's layer, element and nonzero vector,
    /// or None when g lies in the group generated by the sequence.
    fn reduce(&self, g: &Matrix) -> Result<Option<(usize, Matrix, Vector)>> {
        let mut g = self.group.canonical(g);
        loop {
            let s = self.lie.depth(&g, &self.ring);
            if s == 0 {
                return Err(Error::NotInKernel);
            }
            if s >= self.n {
                return Ok(None);
            }
            let mut v = self.lie.to_vector(&self.lie.decode(&g, s, &self.ring)?);
            for b in &self.layers[s as usize - 1] {
                let c = v[b.pivot];
                if c != 0 {
                    for (x, y) in v.iter_mut().zip(&b.vec) {
                        *x = (*x + (self.p - c) * y) % self.p;
                    }
                    g = self.group.mul(&g, &self.power(&b.elt, self.p - c));
                }
            }
            if v.iter().any(|&x| x != 0) {
                return Ok(Some((s as usize - 1, g, v)));
            }
        }
    }

    /// Sifts g; returns a new normalized element when g adds a direction.
    fn sift(&mut self, g: &Matrix) -> Result<Option<Matrix>> {
        let Some((layer, g, v)) = self.reduce(g)? else { return Ok(None) };
        let j = v.iter().position(|&x| x != 0).expect("nonzero residual");
        let a = inv_mod(v[j], self.p).expect("p prime");
        let h = self.power(&g, a);
        let vec: Vector = v.iter().map(|&x| x * a % self.p).collect();
        self.layers[layer].push(Basis { pivot: j, vec, elt: h.clone() });
        Ok(Some(h))
    }

    fn elements(&self) -> impl Iterator<Item = &Matrix> {
        self.layers.iter().flatten().map(|b| &b.elt)
    }

    /// Adds g and closes under p-th powers, commutators with the sequence and conjugation by `conj`.
    fn absorb(&mut self, g: &Matrix, conj: &[(Matrix, Matrix)]) -> Result<()> {
        let mut queue = vec![g.clone()];
        while let Some(x) = queue.pop() {
            if self.full() {
                return Ok(());
            }
            let Some(h) = self.sift(&x)? else { continue };
            queue.push(self.power(&h, self.p));
            let hi = self.group.inv(&h);
            let others: Vec<Matrix> = self.elements().cloned().collect();
            for y in others {
                let yi = self.group.inv(&y);
                queue.push(self.group.mul(&self.group.mul(&h, &y), &self.group.mul(&hi, &yi)));
            }
            for (c, ci) in conj {
                queue.push(self.group.mul(&self.group.mul(c, &h), ci));
            }
        }
        Ok(())
    }
}

/// Residue closure at level 1 plus the filtration of K at level N of `target`.
pub(crate) fn compute(target: &Target, gens: &[Matrix], opts: &EngineOptions) -> Result<(LayerFiltration, Closure)> {
    let n = target.level();
    let top = target.group();
    let ring = top.ring().clone();
    let p = ring.p();
    let low_t = target.at_level(1)?;
    let low = low_t.group();
    let gens: Vec<Matrix> = gens.iter().map(|g| top.canonical(g)).collect();
    let reduced: Vec<Matrix> = gens.iter().map(|g| low.canonical(&g.reduce(&ring, 1))).collect();
    let closure = bfs_closure(low, &reduced, opts.enumeration_bound)?;
    let residue = ResidueImage::from_closure(target, &closure, &reduced)?;
    let lie = target.lie()?;
    let lie_dim = lie.dim_fp();
    let ambient = lie.ambient();

    let mut pcgs = Pcgs { group: top, ring: ring.clone(), lie: &lie, p, n, layers: (1..n).map(|_| Vec::new()).collect(), lie_dim };
    let (mut used, mut skipped, mut unverified) = (0usize, 0usize, 0usize);
    if n > 1 {
        let mut long = Vec::new();
        let lifts = lift_transversal(top, &closure, &gens);
        let conj: Vec<(Matrix, Matrix)> = gens.iter().map(|g| (g.clone(), top.inv(g))).collect();
        'outer: for i in 0..closure.len() {
            let x = closure.get(i);
            for (s, g) in reduced.iter().enumerate() {
                if pcgs.full() {
                    break 'outer;
                }
                let j = closure.index_of(&low.mul(&x, g)).expect("closure is closed");
                if closure.parent[j] == (i as u32, s as u16) {
                    continue;
                }
                let len = closure.depth[i] as usize + 1 + closure.depth[j] as usize;
                if len > opts.word_budget {
                    skipped += 1;
                    long.push((i, s, j));
                    continue;
                }
                used += 1;
                let t = top.mul(&top.mul(&lifts.get(i), &gens[s]), &top.inv(&lifts.get(j)));
                pcgs.absorb(&t, &conj)?;
            }
        }
        // Schreier's lemma: the kernel part is exact once every generator sifts through
        if !pcgs.full() {
            for (i, s, j) in long {
                let t = top.mul(&top.mul(&lifts.get(i), &gens[s]), &top.inv(&lifts.get(j)));
                if pcgs.reduce(&t)?.is_some() {
                    unverified += 1;
                }
            }
        }
    }
    let full = pcgs.full();
    let layers = pcgs
        .layers
        .iter()
        .enumerate()
        .map(|(i, l)| Layer { s: i as u32 + 1, dim: l.len(), basis: l.iter().map(|b| b.vec.clone()).collect() })
        .collect();
    let truncated = unverified > 0;
    let filtration = LayerFiltration {
        residue,
        level: n,
        p,
        lie_dim,
        ambient,
        layers,
        exact: !truncated || full,
        truncated,
        schreier_used: used,
        schreier_skipped: skipped,
        schreier_unverified: unverified,
        word_budget: opts.word_budget,
    };
    Ok((filtration, closure))
}

/// Lifts T(i) of the residue elements along the Schreier tree: T(i) = T(parent) * g_s.
fn lift_transversal(top: &dyn GroupLike, closure: &Closure, gens: &[Matrix]) -> Lifts {
    let id = top.identity();
    match KeyCodec::new(top.dim(), top.ring()) {
        Some(c) => {
            let mut v = Vec::with_capacity(closure.len());
            v.push(c.pack(&id));
            for i in 1..closure.len() {
                let (j, s) = closure.parent[i];
                v.push(c.pack(&top.mul(&c.unpack(v[j as usize]), &gens[s as usize])));
            }
            Lifts::Packed(c, v)
        }
        None => {
            let mut v = Vec::with_capacity(closure.len());
            v.push(id);
            for i in 1..closure.len() {
                let (j, s) = closure.parent[i];
                let m = top.mul(&v[j as usize], &gens[s as usize]);
                v.push(m);
            }
            Lifts::Plain(v)
        }
    }
}
