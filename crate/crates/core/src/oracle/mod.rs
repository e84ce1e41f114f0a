//! Ground truth at desk scale: enumeration, section search, composition factors.

mod section;
#[cfg(test)]
mod tests;

use std::sync::Arc;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::arith::is_prime;
use crate::closure::{bfs_closure, Closure};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::matrix_groups::{Family, GroupDescriptor, GroupLike};

pub use section::{find_section, LevelCount, SectionOptions, SectionSearch};

pub const DEFAULT_BOUND: u128 = 5_000_000;
const FACTOR_BOUND: usize = 1_000_000;

/// An explicit element set in BFS order over a fixed generator list.
pub struct EnumeratedGroup {
    group: Arc<dyn GroupLike>,
    generators: Vec<Matrix>,
    closure: Closure,
    provenance: String,
}

pub fn enumerate_closure(group: Arc<dyn GroupLike>, gens: &[Matrix], bound: u128) -> Result<EnumeratedGroup> {
    let generators: Vec<Matrix> = gens.iter().map(|g| group.canonical(g)).collect();
    let closure = bfs_closure(&*group, &generators, bound)?;
    let provenance = format!("<{} generators> in {}", generators.len(), group.label());
    Ok(EnumeratedGroup { group, generators, closure, provenance })
}

/// The full group from its standard generators.
pub fn enumerate_group(desc: &GroupDescriptor, bound: u128) -> Result<EnumeratedGroup> {
    let gens = desc.standard_generators()?;
    let mut g = enumerate_closure(Arc::new(desc.clone()), &gens, bound)?;
    g.provenance = desc.to_string();
    Ok(g)
}

/// A subgroup of an enumerated group: membership mask plus generators, all as element indices.
#[derive(Clone, Debug)]
pub struct Subset {
    pub mask: Vec<bool>,
    pub elements: Vec<usize>,
    pub gens: Vec<usize>,
}

impl Subset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }
}

impl EnumeratedGroup {
    pub fn order(&self) -> usize {
        self.closure.len()
    }

    pub fn group(&self) -> &dyn GroupLike {
        &*self.group
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn get(&self, i: usize) -> Matrix {
        self.closure.get(i)
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.closure.index_of(&self.group.canonical(m))
    }

    pub fn elements(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.closure.iter()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let m = self.group.mul(&self.get(i), &self.get(j));
        self.closure.index_of(&m).expect("enumerated group is closed")
    }

    pub fn inv(&self, i: usize) -> usize {
        let m = self.group.inv(&self.get(i));
        self.closure.index_of(&m).expect("enumerated group is closed")
    }

    /// Checks closure under the generators and their inverses.
    pub fn is_closed(&self) -> bool {
        let invs: Vec<Matrix> = self.generators.iter().map(|g| self.group.inv(g)).collect();
        self.elements().all(|x| {
            self.generators.iter().chain(&invs).all(|g| self.closure.contains(&self.group.mul(&x, g)))
        })
    }

    pub fn order_of(&self, i: usize) -> usize {
        let mut x = i;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subset {
        let gens: Vec<usize> = self.generators.iter().map(|g| self.index_of(g).expect("generator")).collect();
        Subset { mask: vec![true; self.order()], elements: (0..self.order()).collect(), gens }
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subset {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut elements = vec![0usize];
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    elements.push(y);
                }
            }
            head += 1;
        }
        Subset { mask, elements, gens: gens.to_vec() }
    }

    /// Normal closure of `seeds` in the subgroup generated by `ambient`.
    pub fn normal_closure(&self, seeds: &[usize], ambient: &[usize]) -> Subset {
        let mut gens: Vec<usize> = seeds.to_vec();
        loop {
            let sub = self.generated(&gens);
            let mut fresh = Vec::new();
            for &g in &gens {
                for &h in ambient {
                    let c = self.mul(self.mul(h, g), self.inv(h));
                    if !sub.mask[c] && !fresh.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                return sub;
            }
            gens.extend(fresh);
        }
    }

    /// [H, H] for H generated by `gens`.
    pub fn derived_subgroup(&self, gens: &[usize]) -> Subset {
        let mut comms = Vec::new();
        for &a in gens {
            for &b in gens {
                let c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)));
                comms.push(c);
            }
        }
        self.normal_closure(&comms, gens)
    }

    /// Conjugacy class of x under the subgroup generated by `ambient`.
    fn class(&self, x: usize, ambient: &[usize]) -> Vec<usize> {
        let mut seen = vec![x];
        let mut member = FxHashSet::default();
        member.insert(x);
        let mut head = 0;
        while head < seen.len() {
            let y = seen[head];
            for &h in ambient {
                let c = self.mul(self.mul(h, y), self.inv(h));
                if member.insert(c) {
                    seen.push(c);
                }
            }
            head += 1;
        }
        seen
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CompositionFactor {
    pub order: u128,
    pub abelian: bool,
    pub simple: bool,
}

impl CompositionFactor {
    pub fn label(&self) -> String {
        if self.abelian {
            format!("C_{}", self.order)
        } else {
            format!("simple({})", self.order)
        }
    }
}

/// Composition factors from the bottom of a series found by normal closures of conjugacy classes.
pub fn composition_factors(g: &EnumeratedGroup) -> Result<Vec<CompositionFactor>> {
    if g.order() > FACTOR_BOUND {
        return Err(Error::TooLarge { size: g.order() as u128, bound: FACTOR_BOUND as u128 });
    }
    let whole = g.whole();
    let trivial = g.generated(&[]);
    let mut out = Vec::new();
    factors_between(g, &whole, &trivial, &mut out);
    Ok(out)
}

/// Factors of H/N for N normal in H.
fn factors_between(g: &EnumeratedGroup, h: &Subset, n: &Subset, out: &mut Vec<CompositionFactor>) {
    if h.len() == n.len() {
        return;
    }
    let mut seen = vec![false; g.order()];
    for &x in &h.elements {
        if n.contains(x) || seen[x] {
            continue;
        }
        let class = g.class(x, &h.gens);
        for &c in &class {
            seen[c] = true;
        }
        // every nontrivial normal subgroup of H/N contains an element of prime order mod N
        let mut y = x;
        let mut k = 1;
        while !n.contains(y) {
            y = g.mul(y, x);
            k += 1;
        }
        if !is_prime(k as u64) {
            continue;
        }
        let mut seeds = n.gens.clone();
        seeds.push(x);
        let m = g.normal_closure(&seeds, &h.gens);
        if m.len() < h.len() {
            factors_between(g, &m, n, out);
            factors_between(g, h, &m, out);
            return;
        }
    }
    let order = (h.len() / n.len()) as u128;
    out.push(CompositionFactor { order, abelian: is_prime(order as u64), simple: true });
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub group: String,
    pub subgroup_order: usize,
    /// Image of S in G^ad(k) contains G^ad(k)'.
    pub adjoint_hypothesis: bool,
    /// G(k)' is contained in S.
    pub derived_contained: bool,
    /// The implication of the generation statement holds on this instance.
    pub consistent: bool,
    pub sc_order: usize,
    pub order_p_elements: usize,
    /// G^sc(k) is generated by its elements of order p.
    pub sc_generated_by_order_p: bool,
}

fn adjoint_family(f: Family) -> Result<Family> {
    match f {
        Family::GL | Family::SL | Family::PGL | Family::SLModMu(_) => Ok(Family::PGL),
        Family::Sp | Family::GSp | Family::PGSp => Ok(Family::PGSp),
        f => Err(Error::UnsupportedFamily(format!("no adjoint quotient for {f}"))),
    }
}

fn sc_family(f: Family) -> Result<Family> {
    match adjoint_family(f)? {
        Family::PGL => Ok(Family::SL),
        _ => Ok(Family::Sp),
    }
}

/// Brute-force check of the generation statements for S in G(k).
pub fn verify_generation_props(desc: &GroupDescriptor, s_gens: &[Matrix], bound: u128) -> Result<GenerationReport> {
    if desc.level() != 1 {
        return Err(Error::BadLevel { requested: desc.level(), available: 1 });
    }
    let ring = desc.ring_ref().clone();
    let g = enumerate_group(desc, bound)?;
    let s_idx: Vec<usize> = s_gens
        .iter()
        .map(|m| g.index_of(m).ok_or_else(|| Error::NotInGroup(format!("{m:?}"))))
        .collect::<Result<_>>()?;
    let s = g.generated(&s_idx);

    let ad = GroupDescriptor::new(adjoint_family(desc.family())?, desc.size(), ring.clone())?;
    let ad_group = enumerate_group(&ad, bound)?;
    let ad_whole = ad_group.whole();
    let ad_derived = ad_group.derived_subgroup(&ad_whole.gens);
    let image_gens: Vec<usize> = s_gens
        .iter()
        .map(|m| ad_group.index_of(&ad.adjoint_representative(m)?).ok_or(Error::NotInGroup("adjoint image".into())))
        .collect::<Result<_>>()?;
    let image = ad_group.generated(&image_gens);
    let adjoint_hypothesis = ad_derived.elements.iter().all(|&x| image.contains(x));

    // G(k)' is the image of G^sc(k)
    let cover_desc = GroupDescriptor::new(sc_family(desc.family())?, desc.size(), ring.clone())?;
    let cover = enumerate_group(&cover_desc, bound)?;
    let sc_idx: Vec<usize> = cover
        .generators()
        .iter()
        .map(|m| g.index_of(&desc.adjoint_representative(m)?).ok_or(Error::NotInGroup("simply connected image".into())))
        .collect::<Result<_>>()?;
    let derived = g.generated(&sc_idx);
    let derived_contained = derived.elements.iter().all(|&x| s.contains(x));

    let p = ring.p() as usize;
    let order_p: Vec<usize> = (1..cover.order()).filter(|&i| cover.order_of(i) == p).collect();
    let sub = cover.generated(&order_p);

    Ok(GenerationReport {
        group: desc.to_string(),
        subgroup_order: s.len(),
        adjoint_hypothesis,
        derived_contained,
        consistent: !adjoint_hypothesis || derived_contained,
        sc_order: cover.order(),
        order_p_elements: order_p.len(),
        sc_generated_by_order_p: sub.len() == cover.order(),
    })
}
