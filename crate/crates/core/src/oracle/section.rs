//! Sections of the reduction map G(W_{t+1}) -> G(W_t) over the enumerated base.
//!
//! A choice of lifts x_i of generators b_i extends to a homomorphism iff every Schreier
//! relator of the base (T(i) b_s T(j)^-1 for non-tree edges) evaluates to 1 on the lifts.
//! The relators form a complete presentation, taken from the base's multiplication.
//! Two routes: an affine system over F_p on kernel coordinates, and backtracking over
//! all lifts with relator pruning per prefix subgroup.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::checked_pow;
use crate::closure::{bfs_closure, Closure};
use crate::error::{Error, Result};
use crate::lie_layers::LieAlgebra;
use crate::linalg::{AffineSystem, Vector};
use crate::matrix::Matrix;
use crate::matrix_groups::{GroupDescriptor, GroupLike};

#[derive(Clone, Debug)]
pub struct SectionOptions {
    pub seed: u64,
    pub bound: u128,
    /// Maximum number of candidate lift tuples examined by backtracking.
    pub node_budget: u64,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions { seed: 1, bound: super::DEFAULT_BOUND, node_budget: 1 << 26 }
    }
}

/// Backtracking level k: lifts of b_1..b_k that are sections over <b_1..b_k>.
#[derive(Clone, Debug, Serialize)]
pub struct LevelCount {
    pub prefix_order: usize,
    pub relators: usize,
    pub candidates: u64,
    pub survivors: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionSearch {
    pub subject: String,
    pub base_order: usize,
    pub fiber_size: u64,
    pub generator_count: usize,
    pub relators: usize,
    pub unknowns: usize,
    pub linear_rank: usize,
    /// Number of sections on the chosen generators from the affine system (0 when inconsistent).
    pub linear_sections: u128,
    /// Relator indices whose combination is inconsistent, when no section exists.
    pub obstruction: Option<Vec<usize>>,
    pub levels: Vec<LevelCount>,
    /// False when the node budget stopped backtracking.
    pub backtrack_complete: bool,
    pub backtrack_sections: u64,
    /// Order of the subgroup generated by the witness lifts, when one exists.
    pub witness_order: Option<usize>,
    #[serde(skip)]
    pub witness: Option<Vec<Matrix>>,
    #[serde(skip)]
    pub base_generators: Vec<Matrix>,
}

impl SectionSearch {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }

    /// No section, certified by both the inconsistent system and a complete search.
    pub fn exhausted(&self) -> bool {
        self.witness.is_none() && self.obstruction.is_some() && self.backtrack_complete && self.backtrack_sections == 0
    }

    /// Both routes count the same sections.
    pub fn routes_agree(&self) -> bool {
        self.backtrack_complete && self.linear_sections == self.backtrack_sections as u128
    }

    /// Leaf accounting: every level examines survivors of the previous level times the fiber.
    pub fn accounting_consistent(&self) -> bool {
        let mut prev = 1u64;
        for l in &self.levels {
            if l.candidates != prev * self.fiber_size || l.survivors > l.candidates {
                return false;
            }
            prev = l.survivors;
        }
        !self.backtrack_complete || prev == self.backtrack_sections
    }
}

/// Schreier structure of the subgroup generated by the first k base generators.
struct Prefix {
    closure: Closure,
    /// In BFS order: (i, s, j, tree edge) for element i times generator s = element j.
    edges: Vec<(u32, u16, u32, bool)>,
}

impl Prefix {
    fn new(base: &dyn GroupLike, gens: &[Matrix], bound: u128) -> Result<Self> {
        let closure = bfs_closure(base, gens, bound)?;
        let mut edges = Vec::with_capacity(closure.len() * gens.len());
        for i in 0..closure.len() {
            let x = closure.get(i);
            for (s, g) in gens.iter().enumerate() {
                let j = closure.index_of(&base.mul(&x, g)).expect("closed");
                let tree = closure.parent[j] == (i as u32, s as u16) && j != 0;
                edges.push((i as u32, s as u16, j as u32, tree));
            }
        }
        Ok(Prefix { closure, edges })
    }

    fn relators(&self) -> usize {
        self.edges.iter().filter(|e| !e.3).count()
    }

    /// True when the lifts satisfy every relator of this prefix.
    fn holds(&self, top: &dyn GroupLike, xs: &[Matrix]) -> bool {
        let mut lifts: Vec<Option<Matrix>> = vec![None; self.closure.len()];
        lifts[0] = Some(top.identity());
        for &(i, s, j, tree) in &self.edges {
            let y = top.mul(lifts[i as usize].as_ref().expect("BFS order"), &xs[s as usize]);
            if tree {
                lifts[j as usize] = Some(y);
            } else if lifts[j as usize].as_ref() != Some(&y) {
                return false;
            }
        }
        true
    }

    /// Layer vectors of all relators on the given lifts.
    fn relator_values(&self, top: &dyn GroupLike, xs: &[Matrix], lie: &LieAlgebra, t: u32) -> Result<Vec<Vector>> {
        let ring = top.ring();
        let mut lifts: Vec<Option<Matrix>> = vec![None; self.closure.len()];
        lifts[0] = Some(top.identity());
        let mut out = Vec::new();
        for &(i, s, j, tree) in &self.edges {
            let y = top.mul(lifts[i as usize].as_ref().expect("BFS order"), &xs[s as usize]);
            if tree {
                lifts[j as usize] = Some(y);
            } else {
                let r = top.mul(&y, &top.inv(lifts[j as usize].as_ref().expect("discovered")));
                out.push(lie.to_vector(&lie.decode(&r, t, ring)?));
            }
        }
        Ok(out)
    }
}

/// Searches for a subgroup of G(W_{t+1}) mapping isomorphically onto G(W_t), with t + 1 the
/// level of `desc`.
pub fn find_section(desc: &GroupDescriptor, opts: &SectionOptions) -> Result<SectionSearch> {
    let n = desc.level();
    if n < 2 {
        return Err(Error::BadLevel { requested: n, available: 2 });
    }
    let t = n - 1;
    let top = desc;
    let base = desc.at_level(t)?;
    let ring = top.ring_ref().clone();
    let p = ring.p();
    let lie = LieAlgebra::new(desc)?;
    let m = lie.dim_fp();
    let fiber_size = checked_pow(p as u128, m as u32).filter(|&f| f <= 1 << 24).ok_or(Error::TooLarge {
        size: checked_pow(p as u128, m as u32).unwrap_or(u128::MAX),
        bound: 1 << 24,
    })? as u64;

    let std = top.standard_generators()?;
    let reduced: Vec<Matrix> = std.iter().map(|g| base.canonical(&g.reduce(&ring, t))).collect();
    let full = bfs_closure(&base, &reduced, opts.bound)?;
    let base_order = full.len();
    let subject = format!("{desc} -> level {t}");

    // lift of base element i along its word in the standard generators
    let lift = |i: usize| -> Matrix {
        full.word(i).iter().fold(top.identity(), |acc, &s| top.mul(&acc, &std[s as usize]))
    };
    let picks = choose_generators(&base, &full, opts)?;
    let base_gens: Vec<Matrix> = picks.iter().map(|&i| full.get(i)).collect();
    let lifts: Vec<Matrix> = picks.iter().map(|&i| lift(i)).collect();
    let g = picks.len();

    let kernel: Vec<Matrix> = lie.basis().iter().map(|x| lie.encode(x, t, desc)).collect::<Result<_>>()?;
    let powers: Vec<Vec<Matrix>> =
        kernel.iter().map(|e| (0..p).map(|d| top.canonical(&e.pow(d as u128, &ring))).collect()).collect();
    let fiber_elt = |c: &Matrix, mut code: u64| -> Matrix {
        let mut x = c.clone();
        for pw in &powers {
            let d = code % p;
            code /= p;
            if d != 0 {
                x = top.mul(&x, &pw[d as usize]);
            }
        }
        x
    };

    let prefixes: Vec<Prefix> = (1..=g).map(|k| Prefix::new(&base, &base_gens[..k], opts.bound)).collect::<Result<_>>()?;
    let last = prefixes.last();
    let relators = last.map_or(0, |l| l.relators());

    // affine route: relator values are affine in the kernel coordinates of the lifts
    let unknowns = g * m;
    let mut system = AffineSystem::new(p, unknowns);
    let mut obstruction = None;
    if let Some(last) = last {
        let v0 = last.relator_values(top, &lifts, &lie, t)?;
        let mut cols = Vec::with_capacity(unknowns);
        for a in 0..g {
            for k in 0..m {
                let mut xs = lifts.clone();
                xs[a] = top.mul(&xs[a], &kernel[k]);
                cols.push(last.relator_values(top, &xs, &lie, t)?);
            }
        }
        'eqs: for (r, base_val) in v0.iter().enumerate() {
            for q in 0..base_val.len() {
                let lhs: Vector = cols.iter().map(|c| (c[r][q] + p - base_val[q]) % p).collect();
                let rhs = (p - base_val[q]) % p;
                if rhs == 0 && lhs.iter().all(|&x| x == 0) {
                    continue;
                }
                if let Err(combo) = system.add(&lhs, rhs) {
                    obstruction = Some(equation_relators(&v0, &combo, &cols, p));
                    break 'eqs;
                }
            }
        }
    }
    let linear_rank = system.rank();
    let linear_sections = if obstruction.is_some() {
        0
    } else {
        checked_pow(p as u128, (unknowns - linear_rank) as u32).ok_or(Error::SizeOverflow)?
    };
    let linear_witness = if obstruction.is_none() {
        let sol = system.solution();
        let xs: Vec<Matrix> = (0..g)
            .map(|a| {
                let code = sol[a * m..(a + 1) * m].iter().rev().fold(0u64, |acc, &d| acc * p + d);
                fiber_elt(&lifts[a], code)
            })
            .collect();
        Some(xs)
    } else {
        None
    };

    // backtracking route
    let mut levels = Vec::new();
    let mut survivors: Vec<Vec<Matrix>> = vec![Vec::new()];
    let mut nodes = 0u64;
    let mut complete = true;
    'levels: for (k, prefix) in prefixes.iter().enumerate() {
        let candidates = survivors.len() as u64 * fiber_size;
        if nodes + candidates > opts.node_budget {
            complete = false;
            break;
        }
        nodes += candidates;
        let mut next = Vec::new();
        for prev in &survivors {
            for code in 0..fiber_size {
                let mut xs = prev.clone();
                xs.push(fiber_elt(&lifts[k], code));
                if prefix.holds(top, &xs) {
                    next.push(xs);
                }
            }
        }
        levels.push(LevelCount {
            prefix_order: prefix.closure.len(),
            relators: prefix.relators(),
            candidates,
            survivors: next.len() as u64,
        });
        survivors = next;
        if survivors.is_empty() {
            break 'levels;
        }
    }
    let backtrack_sections = if complete && levels.len() == g { survivors.len() as u64 } else { 0 };
    let bt_witness = if complete && levels.len() == g { survivors.into_iter().next() } else { None };

    let witness = match (linear_witness, bt_witness) {
        (Some(w), _) if last.is_some_and(|l| l.holds(top, &w)) => Some(w),
        (_, Some(w)) => Some(w),
        _ if g == 0 => Some(Vec::new()),
        _ => None,
    };
    let witness_order = match &witness {
        Some(w) => Some(isomorphic_image(top, &base, &ring, t, w, base_order, opts.bound)?),
        None => None,
    };

    Ok(SectionSearch {
        subject,
        base_order,
        fiber_size,
        generator_count: g,
        relators,
        unknowns,
        linear_rank,
        linear_sections,
        obstruction,
        levels,
        backtrack_complete: complete,
        backtrack_sections,
        witness_order,
        witness,
        base_generators: base_gens,
    })
}

/// Size of <w> after checking that reduction maps it one-to-one onto the base.
fn isomorphic_image(
    top: &GroupDescriptor,
    base: &GroupDescriptor,
    ring: &crate::galois_ring::Ring,
    t: u32,
    w: &[Matrix],
    base_order: usize,
    bound: u128,
) -> Result<usize> {
    let cl = bfs_closure(top, w, bound.min(base_order as u128 + 1))?;
    let mut images: Vec<Matrix> = cl.iter().map(|x| base.canonical(&x.reduce(ring, t))).collect();
    images.sort();
    images.dedup();
    if cl.len() != base_order || images.len() != base_order {
        return Err(Error::NotGenerating(format!("witness generates {} elements over a base of {base_order}", cl.len())));
    }
    Ok(cl.len())
}

/// Maps an inconsistent equation combination back to relator indices.
fn equation_relators(v0: &[Vector], combo: &[(usize, u64)], cols: &[Vec<Vector>], p: u64) -> Vec<usize> {
    // equations were added in (relator, coordinate) order skipping trivial ones; replay the numbering
    let mut index = Vec::new();
    for (r, base_val) in v0.iter().enumerate() {
        for q in 0..base_val.len() {
            let rhs = (p - base_val[q]) % p;
            if rhs == 0 && cols.iter().all(|c| (c[r][q] + p - base_val[q]) % p == 0) {
                continue;
            }
            index.push(r);
        }
    }
    let mut rel: Vec<usize> = combo.iter().map(|&(e, _)| index[e]).collect();
    rel.sort_unstable();
    rel.dedup();
    rel
}

/// A small generating set of the base: a seeded random pair when one generates, otherwise greedy.
fn choose_generators(base: &GroupDescriptor, full: &Closure, opts: &SectionOptions) -> Result<Vec<usize>> {
    let order = full.len();
    if order == 1 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut idx: Vec<usize> = (1..order).collect();
    for _ in 0..64 {
        idx.shuffle(&mut rng);
        let pair = [idx[0], idx[1]];
        for k in 1..=2 {
            let gens: Vec<Matrix> = pair[..k].iter().map(|&i| full.get(i)).collect();
            if bfs_closure(base, &gens, order as u128)?.len() == order {
                return Ok(pair[..k].to_vec());
            }
        }
    }
    let mut picks = Vec::new();
    let mut cur = 1;
    for &i in &idx {
        let mut gens: Vec<Matrix> = picks.iter().map(|&j| full.get(j)).collect();
        gens.push(full.get(i));
        let size = bfs_closure(base, &gens, order as u128)?.len();
        if size > cur {
            picks.push(i);
            cur = size;
            if cur == order {
                break;
            }
        }
    }
    Ok(picks)
}
