//! Generated subgroups of G(W_N(k)): residue images, congruence-layer filtrations,
//! surjectivity verdicts and index decompositions.

mod filtration;
mod quotient;
pub mod sampling;

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashSet;
use serde::Serialize;

pub use filtration::{Layer, LayerFiltration};
pub use quotient::{ScalarQuotient, Target};

use crate::arith::gcd;
use crate::closure::{bfs_closure, Closure};
use crate::criteria::{adjoint_factor_name, check_2_3_exceptions, derived_datum, ConditionReport};
use crate::error::{Error, Result};
use crate::lie_layers::LieAlgebra;
use crate::linalg::{Subspace, Vector};
use crate::matrix::Matrix;
use crate::matrix_groups::{DynkinDatum, Family, GroupDescriptor, GroupLike};

/// Hypothesis strings recognized by the verdict modes.
pub const HYP_ABELIANIZATION: &str = "abelianization image is full";
pub const HYP_AB_KERNEL: &str = "Ker(G^ab(W(k)) -> G^ab(k)) is contained in the image of K";
pub const HYP_DISJOINT: &str = "E linearly disjoint from Q(mu_p^inf)";

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub enumeration_bound: u128,
    /// Maximal length of a Schreier word T(x) s T(xs)^-1.
    pub word_budget: usize,
    /// Attach an index decomposition to verdicts when the family supports it.
    pub with_index: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { enumeration_bound: 5_000_000, word_budget: 16, with_index: false }
    }
}

/// K = <gens> inside G(W_N(k)), with caller-asserted hypotheses.
#[derive(Clone, Debug)]
pub struct GeneratedSubgroup {
    desc: GroupDescriptor,
    gens: Vec<Matrix>,
    hypotheses: Vec<String>,
}

impl GeneratedSubgroup {
    pub fn new(desc: GroupDescriptor, gens: Vec<Matrix>) -> Result<Self> {
        let gens = gens.into_iter().map(|g| desc.element(g)).collect::<Result<Vec<_>>>()?;
        Ok(GeneratedSubgroup { desc, gens, hypotheses: Vec::new() })
    }

    pub fn with_hypothesis(mut self, h: &str) -> Self {
        self.hypotheses.push(h.to_string());
        self
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.desc
    }
    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }
    pub fn hypotheses(&self) -> &[String] {
        &self.hypotheses
    }
    pub fn level(&self) -> u32 {
        self.desc.level()
    }

    pub fn has_hypothesis(&self, h: &str) -> bool {
        self.hypotheses.iter().any(|x| x == h)
    }

    /// The same generators reduced to level m.
    pub fn reduce(&self, m: u32) -> Result<Self> {
        let desc = self.desc.at_level(m)?;
        let ring = self.desc.ring_ref();
        let gens = self.gens.iter().map(|g| desc.canonical(&g.reduce(ring, m))).collect();
        Ok(GeneratedSubgroup { desc, gens, hypotheses: self.hypotheses.clone() })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueImage {
    pub order: u128,
    pub group_order: u128,
    pub full: bool,
    /// F(k) <= image, F the derived group.
    pub contains_derived: Option<bool>,
    /// F(k)' <= image, F(k)' the image of the simply connected cover.
    pub contains_derived_prime: Option<bool>,
    /// Image maps onto G~(k) = G(k)/scalars (families containing the scalars).
    pub onto_tilde: Option<bool>,
    #[serde(skip)]
    pub generators: Vec<Matrix>,
}

fn derived_family(f: Family) -> Family {
    match f {
        Family::GL => Family::SL,
        Family::GSp => Family::Sp,
        Family::GSOPlus => Family::SOPlus,
        Family::GSOMinus => Family::SOMinus,
        Family::U => Family::SU,
        f => f,
    }
}

fn sc_family(f: Family) -> Option<Family> {
    match f {
        Family::GL | Family::SL | Family::PGL | Family::SLModMu(_) => Some(Family::SL),
        Family::GSp | Family::Sp | Family::PGSp => Some(Family::Sp),
        Family::U | Family::SU => Some(Family::SU),
        _ => None,
    }
}

impl ResidueImage {
    pub(crate) fn from_closure(target: &Target, closure: &Closure, reduced: &[Matrix]) -> Result<Self> {
        let low_t = target.at_level(1)?;
        let low = low_t.group();
        let desc = low_t.descriptor();
        let group_order = low.order()?;
        let order = closure.len() as u128;
        let family = desc.family();
        let contains_all = |f: Family| -> Result<bool> {
            let sub = GroupDescriptor::new(f, desc.size(), desc.ring_ref().clone())?;
            Ok(sub.standard_generators()?.iter().all(|g| closure.contains(&low.canonical(g))))
        };
        let scalar_target = matches!(target, Target::Scalars(_));
        let contains_derived = if derived_family(family) == family && !scalar_target {
            Some(order == group_order)
        } else {
            contains_all(derived_family(family)).ok()
        };
        let contains_derived_prime = sc_family(family).and_then(|f| contains_all(f).ok());
        let onto_tilde = match (target, family) {
            (Target::Scalars(_), _) => Some(order == group_order),
            (_, Family::GL | Family::GSp | Family::GSOPlus | Family::GSOMinus) => {
                let ring = desc.ring_ref();
                let mut scalars = 0u128;
                for idx in 0..ring.order() {
                    let c = ring.element_at(idx);
                    if ring.is_unit_raw(&c) && closure.contains(&Matrix::scalar(desc.size(), &c, ring)) {
                        scalars += 1;
                    }
                }
                Some(order / scalars == group_order / ring.unit_count())
            }
            _ => None,
        };
        Ok(ResidueImage {
            order,
            group_order,
            full: order == group_order,
            contains_derived,
            contains_derived_prime,
            onto_tilde,
            generators: reduced.to_vec(),
        })
    }
}

fn residue_in(target: &Target, gens: &[Matrix], opts: &EngineOptions) -> Result<ResidueImage> {
    let top = target.group();
    let low_t = target.at_level(1)?;
    let ring = top.ring();
    let reduced: Vec<Matrix> = gens.iter().map(|g| low_t.group().canonical(&g.reduce(ring, 1))).collect();
    let closure = bfs_closure(low_t.group(), &reduced, opts.enumeration_bound)?;
    ResidueImage::from_closure(target, &closure, &reduced)
}

/// Image of K in G(k), by enumeration.
pub fn residue_image(k: &GeneratedSubgroup, opts: &EngineOptions) -> Result<ResidueImage> {
    residue_in(&Target::Group(k.desc.clone()), &k.gens, opts)
}

pub fn layer_filtration(k: &GeneratedSubgroup, opts: &EngineOptions) -> Result<LayerFiltration> {
    Ok(filtration::compute(&Target::Group(k.desc.clone()), &k.gens, opts)?.0)
}

/// Filtration of the image of K in G/scalars.
pub fn quotient_filtration(k: &GeneratedSubgroup, opts: &EngineOptions) -> Result<LayerFiltration> {
    let t = Target::Scalars(ScalarQuotient::new(k.desc.clone())?);
    Ok(filtration::compute(&t, &k.gens, opts)?.0)
}

// ---------------------------------------------------------------------------
// verdicts

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Full,
    Tilde,
    NormalDerived,
    /// The variant with F(k)' <= K_1, concluding kernel containment.
    NormalDerivedPrime,
    Thm41,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "FULL" => Mode::Full,
            "TILDE" => Mode::Tilde,
            "NORMAL_DERIVED" => Mode::NormalDerived,
            "NORMAL_DERIVED_PRIME" => Mode::NormalDerivedPrime,
            "THM_4_1" => Mode::Thm41,
            other => return Err(Error::Parse(format!("unknown mode `{other}`"))),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "FULL",
            Mode::Tilde => "TILDE",
            Mode::NormalDerived => "NORMAL_DERIVED",
            Mode::NormalDerivedPrime => "NORMAL_DERIVED_PRIME",
            Mode::Thm41 => "THM_4_1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    FullGroup,
    FullOnQuotient(String),
    NormalSubgroupContained(String),
    /// `layer` 0 is the residue image; s >= 1 is the congruence layer mod p^(s+1).
    NotSurjective { layer: u32, missing: Vec<Vector> },
    Inconclusive(String),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::FullGroup => 0,
            Outcome::FullOnQuotient(_) | Outcome::NormalSubgroupContained(_) => 10,
            Outcome::NotSurjective { .. } => 20,
            Outcome::Inconclusive(_) => 30,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::FullGroup => "FullGroup",
            Outcome::FullOnQuotient(_) => "FullOnQuotient",
            Outcome::NormalSubgroupContained(_) => "NormalSubgroupContained",
            Outcome::NotSurjective { .. } => "NotSurjective",
            Outcome::Inconclusive(_) => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailStep {
    pub key: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityVerdict {
    pub subject: String,
    pub mode: Mode,
    pub outcome: Outcome,
    pub trail: Vec<TrailStep>,
    pub exception_checks: Vec<String>,
    pub hypotheses: Vec<String>,
    pub certificate: Vec<String>,
    pub residue_order: Option<u128>,
    pub layer_dims: Vec<usize>,
    pub lie_dim: usize,
    pub index: Option<IndexDecomposition>,
}

impl SurjectivityVerdict {
    fn new(k: &GeneratedSubgroup, mode: Mode) -> Self {
        SurjectivityVerdict {
            subject: k.desc.to_string(),
            mode,
            outcome: Outcome::Inconclusive("not decided".into()),
            trail: Vec::new(),
            exception_checks: Vec::new(),
            hypotheses: k.hypotheses.clone(),
            certificate: Vec::new(),
            residue_order: None,
            layer_dims: Vec::new(),
            lie_dim: 0,
            index: None,
        }
    }

    fn step(&mut self, key: &str, detail: impl Into<String>) {
        self.trail.push(TrailStep { key: key.to_string(), detail: detail.into() });
    }

    fn record(&mut self, f: &LayerFiltration) {
        self.residue_order = Some(f.residue.order);
        self.layer_dims = f.dims();
        self.lie_dim = f.lie_dim;
    }
}

/// Decides surjectivity questions for K under the chosen mode. `report` is the
/// conditions report for the TILDE mode.
pub fn decide_surjectivity(
    k: &GeneratedSubgroup,
    mode: Mode,
    report: Option<&ConditionReport>,
    opts: &EngineOptions,
) -> Result<SurjectivityVerdict> {
    let mut v = SurjectivityVerdict::new(k, mode);
    let res = match mode {
        Mode::Full => decide_full(k, opts, &mut v),
        Mode::NormalDerived => decide_normal(k, false, opts, &mut v),
        Mode::NormalDerivedPrime => decide_normal(k, true, opts, &mut v),
        Mode::Tilde => decide_tilde(k, report, opts, &mut v),
        Mode::Thm41 => decide_thm41(k, opts, &mut v),
    };
    match res {
        Ok(()) => {}
        Err(Error::TooLarge { size, bound }) => {
            v.outcome = Outcome::Inconclusive(format!("enumeration bound exceeded ({size} > {bound})"));
        }
        Err(e) => return Err(e),
    }
    if opts.with_index && matches!(k.desc.family(), Family::GL | Family::GSp | Family::GSOPlus | Family::GSOMinus) {
        v.index = index_decomposition(k, opts).ok();
    }
    Ok(v)
}

fn lifting_threshold(p: u64) -> u32 {
    if p == 2 {
        3
    } else {
        2
    }
}

fn decide_full(k: &GeneratedSubgroup, opts: &EngineOptions, v: &mut SurjectivityVerdict) -> Result<()> {
    let p = k.desc.ring_ref().p();
    let n = k.level();
    let t = lifting_threshold(p);
    if n < t {
        return Err(Error::BadLevel { requested: t, available: n });
    }
    let target = Target::Group(k.desc.clone());
    let (f, _) = filtration::compute(&target, &k.gens, opts)?;
    v.record(&f);
    let lie = target.lie()?;
    v.step("2.2.1a", format!("surjectivity mod p^{t} implies surjectivity at every level"));
    if !f.residue.full {
        v.certificate.push(format!("residue image order {} < |G(k)| = {}", f.residue.order, f.residue.group_order));
        v.outcome = Outcome::NotSurjective { layer: 0, missing: Vec::new() };
        return Ok(());
    }
    v.certificate.push(format!("residue image order {} = |G(k)|", f.residue.order));
    for s in 1..t {
        if !f.is_full(s) {
            let dim = f.layer(s).map_or(0, |l| l.dim);
            v.outcome = if f.exact {
                v.certificate.push(format!("layer {s} has dimension {dim} < {}", f.lie_dim));
                Outcome::NotSurjective { layer: s, missing: f.missing(s, &lie) }
            } else {
                Outcome::Inconclusive(format!(
                    "layer {s} is at least {dim}-dimensional; word budget {} exhausted",
                    f.word_budget
                ))
            };
            return Ok(());
        }
        v.certificate.push(format!("layer {s} full ({} = dim Lie)", f.lie_dim));
    }
    if f.truncated {
        v.certificate.push("layers below the threshold are spanned by explicit elements of K".into());
    }
    v.outcome = Outcome::FullGroup;
    Ok(())
}

fn decide_normal(k: &GeneratedSubgroup, prime: bool, opts: &EngineOptions, v: &mut SurjectivityVerdict) -> Result<()> {
    let desc = &k.desc;
    let ring = desc.ring_ref();
    let (p, q) = (ring.p(), ring.residue_size());
    let fd = derived_datum(desc);
    let name = adjoint_factor_name(&fd, q);
    let rep = check_2_3_exceptions(&fd, p, q)?;
    for c in &rep.conditions {
        v.exception_checks.push(format!("{}: {}", c.key, c.evidence));
    }
    if !rep.holds("2.3(exceptions)") {
        return Err(Error::ExceptionListHit(format!("{name} at q = {q} is excluded by 2.3")));
    }
    let target = Target::Group(desc.clone());
    let (f, _) = filtration::compute(&target, &k.gens, opts)?;
    v.record(&f);
    if gcd(p, fd.c_g()) != 1 {
        v.outcome = Outcome::Inconclusive(format!("gcd(p, c(F)) = {} for F = {}", p, fd.label));
        return Ok(());
    }
    let contained = if prime { f.residue.contains_derived_prime } else { f.residue.contains_derived };
    let what = if prime { "F(k)'" } else { "F(k)" };
    match contained {
        None => {
            v.outcome = Outcome::Inconclusive(format!("containment of {what} in K_1 is not computable for {}", fd.label));
            return Ok(());
        }
        Some(false) => {
            v.outcome = Outcome::Inconclusive(format!("{what} is not contained in K_1"));
            return Ok(());
        }
        Some(true) => v.certificate.push(format!("{what} <= K_1 checked on generators of {}", fd.label)),
    }
    v.step("2.3", format!("F = {}, c(F) = {}, F^ad = {name}, q = {q}", fd.label, fd.c_g()));

    // finite-level shadow of the conclusion: Lie(F) lies in every layer of K
    let fdesc = GroupDescriptor::new(derived_family(desc.family()), desc.size(), ring.clone())?;
    let flie = LieAlgebra::new(&fdesc)?;
    let glie = target.lie()?;
    for s in 1..k.level() {
        let layer = f.subspace(s);
        let inside = flie.basis().iter().all(|x| layer.contains(&glie.to_vector(x)));
        v.certificate.push(format!("layer {s}: Lie(F) contained = {inside}"));
        if !inside && f.exact {
            v.outcome = Outcome::Inconclusive(format!("layer {s} of K misses Lie(F) although the hypotheses hold"));
            return Ok(());
        }
    }
    v.outcome = if prime {
        Outcome::NormalSubgroupContained(format!("Ker({0}(W(k)) -> {0}(k))", fd.label))
    } else {
        Outcome::NormalSubgroupContained(format!("{}(W(k))", fd.label))
    };
    Ok(())
}

fn decide_tilde(
    k: &GeneratedSubgroup,
    report: Option<&ConditionReport>,
    opts: &EngineOptions,
    v: &mut SurjectivityVerdict,
) -> Result<()> {
    let report = report.ok_or_else(|| Error::MissingHypothesis("conditions report for 2.4".into()))?;
    let desc = &k.desc;
    let ring = desc.ring_ref();
    let p = ring.p();
    let order: &[&str] = if p == 2 { &["2.4.1b", "2.4.2a", "2.4.2b"] } else { &["2.4.1a", "2.4.2a", "2.4.2b"] };
    for c in &report.conditions {
        v.exception_checks.push(format!("{}: {:?} ({})", c.key, c.holds, c.evidence));
    }
    let Some(key) = order.iter().copied().find(|key| report.applies(key)) else {
        let failed: Vec<&str> = report.conditions.iter().filter(|c| c.holds != Some(true)).map(|c| c.key.as_str()).collect();
        v.outcome = Outcome::Inconclusive(format!("no variant of 2.4.1 applies; unmet: {}", failed.join(", ")));
        return Ok(());
    };
    let hyp_ok = k.has_hypothesis(HYP_ABELIANIZATION) || (key == "2.4.2a" && k.has_hypothesis(HYP_AB_KERNEL));
    if !hyp_ok {
        return Err(Error::MissingHypothesis(HYP_ABELIANIZATION.into()));
    }
    let sq = ScalarQuotient::new(desc.clone())?;
    let target = Target::Scalars(sq);
    let (tf, _) = filtration::compute(&target, &k.gens, opts)?;
    v.record(&tf);
    let mult_k = multiplier_image(desc, &k.gens)?;
    let mult_g = multiplier_image(desc, &desc.standard_generators()?)?;
    v.certificate.push(format!("abelianization image at level {}: {mult_k} of {mult_g}", k.level()));
    if !tf.residue.full {
        v.certificate.push(format!("image in G~(k) has order {} < {}", tf.residue.order, tf.residue.group_order));
        v.outcome = Outcome::NotSurjective { layer: 0, missing: Vec::new() };
        return Ok(());
    }
    let held: Vec<&str> = report.conditions.iter().filter(|c| c.holds == Some(true)).map(|c| c.key.as_str()).collect();
    v.step(key, format!("conditions holding: {}", held.join(", ")));
    if p == 2 && !report.holds("2.4(va)") && report.holds("2.4(vb)") {
        if k.level() < 3 {
            return Err(Error::BadLevel { requested: 3, available: k.level() });
        }
        let lie = target.lie()?;
        let sub = tf.subspace(2);
        let ksub = lie.is_k_subspace(&sub);
        v.certificate.push(format!("K~_3^2 has dimension {} and is a k_1-subspace: {ksub}", sub.rank()));
        if !ksub {
            v.outcome = Outcome::Inconclusive("K~_3^2 is not a k_1-vector subspace under (vb)".into());
            return Ok(());
        }
    }
    let quotient_full = tf.all_full();
    v.certificate.push(format!("image of K in G~(W_{}) full: {quotient_full}", k.level()));
    if tf.exact && !quotient_full {
        v.outcome = Outcome::Inconclusive(format!(
            "image in G~ mod p^{} is not full; the asserted hypotheses fail at this level",
            k.level()
        ));
        return Ok(());
    }
    let tilde = DynkinDatum::of_descriptor(desc).label;
    v.outcome = Outcome::FullOnQuotient(format!("{tilde}(W(k))"));
    Ok(())
}

fn decide_thm41(k: &GeneratedSubgroup, opts: &EngineOptions, v: &mut SurjectivityVerdict) -> Result<()> {
    let desc = &k.desc;
    let ring = desc.ring_ref();
    let p = ring.p();
    let d = desc.size() / 2;
    if desc.family() != Family::GSp || ring.r() != 1 {
        return Err(Error::UnsupportedFamily(format!("4.1 needs GSp_2d over Z_p, got {desc}")));
    }
    if (p == 2 && d < 3) || (p == 3 && d < 2) {
        return Err(Error::MissingHypothesis(format!("4.1 needs d >= 3 for p = 2 and d >= 2 for p = 3 (d = {d})")));
    }
    if !k.has_hypothesis(HYP_DISJOINT) {
        return Err(Error::MissingHypothesis(HYP_DISJOINT.into()));
    }
    let target = Target::Scalars(ScalarQuotient::new(desc.clone())?);
    let res = residue_in(&target, &k.gens, opts)?;
    v.residue_order = Some(res.order);
    v.certificate.push(format!("image in PGSp_{}(F_{p}) has order {} of {}", 2 * d, res.order, res.group_order));
    if res.full {
        v.step("4.1", format!("mod-p image onto PGSp_{}(F_{p}); asserted: {HYP_DISJOINT}", 2 * d));
        v.outcome = Outcome::FullGroup;
    } else {
        v.outcome = Outcome::NotSurjective { layer: 0, missing: Vec::new() };
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// index decomposition

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexDecomposition {
    pub group_order: u128,
    pub subgroup_order: u128,
    pub total_index: u128,
    /// ([T : K ∩ T], [G/T : image of K]) for T the central torus.
    pub center_split: (u128, u128),
    /// ([F : K ∩ F], [G^ab : image of K]) for F the derived group.
    pub derived_split: (u128, u128),
}

/// det for GL, the similitude multiplier for GSp and GSO.
pub fn multiplier(desc: &GroupDescriptor, m: &Matrix) -> Result<Vec<u64>> {
    let ring = desc.ring_ref();
    match desc.family() {
        Family::GL => Ok(m.det(ring)),
        Family::GSp | Family::GSOPlus | Family::GSOMinus => desc
            .membership(m)?
            .multiplier
            .ok_or_else(|| Error::NotInGroup(m.to_string())),
        f => Err(Error::UnsupportedFamily(format!("{f} has no abelianization map"))),
    }
}

/// Order of the subgroup of units generated by the multipliers of `gens`.
pub fn multiplier_image(desc: &GroupDescriptor, gens: &[Matrix]) -> Result<u128> {
    let ring = desc.ring_ref();
    let vals: Vec<Vec<u64>> = gens.iter().map(|g| multiplier(desc, g)).collect::<Result<_>>()?;
    let mut seen: FxHashSet<Vec<u64>> = FxHashSet::default();
    let mut frontier = vec![ring.one_raw()];
    seen.insert(ring.one_raw());
    while let Some(x) = frontier.pop() {
        for v in &vals {
            let y = ring.mul_vec(&x, v);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(seen.len() as u128)
}

pub fn index_decomposition(k: &GeneratedSubgroup, opts: &EngineOptions) -> Result<IndexDecomposition> {
    let desc = &k.desc;
    let ring = desc.ring_ref();
    let f = layer_filtration(k, opts)?;
    let kord = f.order()?;
    let gord = desc.order()?;
    let tf = quotient_filtration(k, opts)?;
    let kt = tf.order()?;
    let units = ring.unit_count();
    let k_cap_t = kord / kt;
    let mult_k = multiplier_image(desc, &k.gens)?;
    let mult_g = multiplier_image(desc, &desc.standard_generators()?)?;
    let k_cap_f = kord / mult_k;
    let ford = gord / mult_g;
    Ok(IndexDecomposition {
        group_order: gord,
        subgroup_order: kord,
        total_index: gord / kord,
        center_split: (units / k_cap_t, gord / units / kt),
        derived_split: (ford / k_cap_f, mult_g / mult_k),
    })
}

/// Span of layer s computed from a full list of elements (used by tests and the oracle).
pub fn layer_from_elements<'a>(
    lie: &LieAlgebra,
    elements: impl IntoIterator<Item = &'a Matrix>,
    s: u32,
    ring: &crate::galois_ring::GaloisRing,
) -> Subspace {
    let mut span = Subspace::new(lie.p(), lie.ambient());
    for g in elements {
        if lie.depth(g, ring) >= s && s < ring.n() {
            if let Ok(x) = lie.decode(g, s, ring) {
                span.insert(&lie.to_vector(&x));
            }
        }
    }
    span
}
