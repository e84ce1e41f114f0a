//! Acceptance criteria, one PASS/FAIL line each. Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use liftcheck_core::closure::bfs_closure;
use liftcheck_core::criteria::{
    check_2_2_5, check_2_3_exceptions, check_2_4, exception_entries, exception_list, fixture, fixtures,
};
use liftcheck_core::curves::{
    count_points_lpoly, curve_fixtures, disc_sqfree, find_cubics, mod2_consistency, predicted_count, verdict_4_2_1,
    ImageOutcome, IntPoly, EXCLUDED_SQUAREFREE,
};
use liftcheck_core::galois_ring::GaloisRing;
use liftcheck_core::lie_layers::{bracket_and_commutator_check, LieAlgebra};
use liftcheck_core::linalg::Subspace;
use liftcheck_core::matrix::Matrix;
use liftcheck_core::matrix_groups::{group, DynkinDatum, Family, GroupDescriptor, GroupLike};
use liftcheck_core::oracle::{find_section, SectionOptions};
use liftcheck_core::subgroup_engine::sampling::{random_element, random_generators, to_kernel, Shape, SHAPES};
use liftcheck_core::subgroup_engine::{
    decide_surjectivity, index_decomposition, layer_filtration, layer_from_elements, multiplier, multiplier_image,
    EngineOptions, GeneratedSubgroup, IndexDecomposition, Mode, Outcome, HYP_DISJOINT,
};
use liftcheck_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: liftcheck_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn opts() -> EngineOptions {
    EngineOptions::default()
}

fn within(start: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 1. commutators of kernel elements against brackets of their layers

/// (x - I)/2^s mod 2 for integer entries (r = 1 only).
fn layer_mod2(x: &Matrix, s: u32) -> Vec<u64> {
    let d = x.dim();
    let scale = 1i64 << s;
    (0..d * d)
        .map(|i| {
            let v = x.entry(i / d, i % d)[0] as i64 - if i / d == i % d { 1 } else { 0 };
            assert_eq!(v.rem_euclid(scale), 0, "entry not divisible by {scale}");
            (v.rem_euclid(8) / scale) as u64 % 2
        })
        .collect()
}

fn int_mul(a: &Matrix, b: &Matrix, m: i64) -> Matrix {
    let d = a.dim();
    let mut out = vec![vec![0i64; d]; d];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            for k in 0..d {
                *c += a.entry(i, k)[0] as i64 * b.entry(k, j)[0] as i64;
            }
            *c = c.rem_euclid(m);
        }
    }
    Matrix::from_raw(d, 1, out.into_iter().flatten().map(|v| v as u64).collect())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let cases = [
        group(Family::SL, 2, 2, 1, 3),
        group(Family::GL, 3, 2, 1, 3),
        group(Family::Sp, 4, 2, 1, 3),
        group(Family::GSp, 6, 2, 1, 3),
        group(Family::SL, 2, 2, 2, 3),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut summary = Vec::new();
    for g in cases {
        let g = ok(g)?;
        let lie = ok(LieAlgebra::new(&g))?;
        let ring = g.ring_ref();
        let mut nontrivial = 0;
        for i in 0..500 {
            let x = ok(to_kernel(&g, &ok(random_element(&g, 40, &mut rng))?))?;
            let y = ok(to_kernel(&g, &ok(random_element(&g, 40, &mut rng))?))?;
            let c = ok(bracket_and_commutator_check(&lie, &x, &y, ring))?;
            ensure!(c.equal, "{g} pair {i}: commutator layer {} vs bracket {}", c.lhs, c.rhs);
            nontrivial += c.rhs.data().iter().any(|&v| v != 0) as usize;
            if ring.r() == 1 {
                // integer route: (xyx^-1y^-1 - I)/4 = XY - YX mod 2
                let xi = g.inv(&x);
                let yi = g.inv(&y);
                ensure!(int_mul(&x, &xi, 8) == g.identity(), "{g}: inverse");
                let comm = int_mul(&int_mul(&int_mul(&x, &y, 8), &xi, 8), &yi, 8);
                let (xx, yy, cc) = (layer_mod2(&x, 1), layer_mod2(&y, 1), layer_mod2(&comm, 2));
                let d = g.size();
                for a in 0..d {
                    for b in 0..d {
                        let mut s = 0u64;
                        for k in 0..d {
                            s += xx[a * d + k] * yy[k * d + b] + yy[a * d + k] * xx[k * d + b];
                        }
                        ensure!(s % 2 == cc[a * d + b], "{g} pair {i}: integer commutator entry ({a},{b})");
                    }
                }
            }
        }
        ensure!(nontrivial > 0, "{g}: every sampled bracket vanished");
        summary.push(format!("{g} 500/500 ({nontrivial} nonzero)"));
    }
    within(start, Duration::from_secs(30), "commutator checks")?;
    Ok(summary.join("; "))
}

// ---------------------------------------------------------------------------
// 2. SL_2(Z/81): full mod 9 implies full, and FULL verdicts against enumeration

fn criterion_2() -> Check {
    let start = Instant::now();
    let g = ok(group(Family::SL, 2, 3, 1, 4))?;
    let g9 = ok(g.at_level(2))?;
    let order = ok(g.order())?;
    ensure!(order == 472_392, "|SL_2(Z/81)| = {order}");
    let order9 = ok(g9.order())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut implication = 0;
    let mut tries = 0;
    while implication < 50 {
        tries += 1;
        ensure!(tries <= 400, "only {implication} sets full mod 9 among 400");
        let gens = ok(random_generators(&g, Shape::Random, 2, &mut rng))?;
        let low: Vec<Matrix> = gens.iter().map(|x| g9.canonical(&x.reduce(g.ring_ref(), 2))).collect();
        if ok(bfs_closure(&g9, &low, order9 + 1))?.len() as u128 != order9 {
            continue;
        }
        let full = ok(bfs_closure(&g, &gens, order + 1))?.len() as u128;
        ensure!(full == order, "set {tries}: full mod 9 but order {full} mod 81");
        implication += 1;
    }
    let mut matched = 0;
    let mut full_sets = 0;
    for i in 0..100 {
        let shape = SHAPES[i % SHAPES.len()];
        let gens = ok(random_generators(&g, shape, 2 + i % 2, &mut rng))?;
        let oracle_full = ok(bfs_closure(&g, &gens, order + 1))?.len() as u128 == order;
        let k = ok(GeneratedSubgroup::new(g.clone(), gens))?;
        let v = ok(decide_surjectivity(&k, Mode::Full, None, &opts()))?;
        let engine_full = match &v.outcome {
            Outcome::FullGroup => true,
            Outcome::NotSurjective { .. } => false,
            o => return Err(format!("set {i} ({shape:?}): {o:?}")),
        };
        ensure!(engine_full == oracle_full, "set {i} ({shape:?}): engine {engine_full}, oracle {oracle_full}");
        matched += 1;
        full_sets += oracle_full as usize;
    }
    ensure!(full_sets > 0 && full_sets < 100, "verdict sets not mixed: {full_sets} full of 100");
    within(start, Duration::from_secs(600), "SL_2(Z/81) sets")?;
    Ok(format!(
        "{implication} sets full mod 9 are full mod 81 ({tries} drawn); FULL matches enumeration on {matched} sets ({full_sets} full)"
    ))
}

// ---------------------------------------------------------------------------
// 3. sections of G(W_2(k)) -> G(k)

fn section_case(d: &GroupDescriptor) -> std::result::Result<(bool, bool, String), String> {
    let runs: Vec<_> = (1..=3)
        .map(|seed| ok(find_section(d, &SectionOptions { seed, ..Default::default() })))
        .collect::<std::result::Result<_, _>>()?;
    let s = &runs[0];
    ensure!(s.routes_agree() && s.accounting_consistent(), "{d}: routes or accounting disagree");
    for r in &runs[1..] {
        ensure!(
            r.exists() == s.exists() && r.exhausted() == s.exhausted() && r.linear_sections == s.linear_sections,
            "{d}: verdict depends on the seed"
        );
    }
    let again = ok(find_section(d, &SectionOptions::default()))?;
    ensure!(
        serde_json::to_string(&again).unwrap() == serde_json::to_string(s).unwrap(),
        "{d}: repeated search differs"
    );
    Ok((s.exists(), s.exhausted(), format!("{d}: {} sections", s.linear_sections)))
}

fn criterion_3() -> Check {
    let mut notes = Vec::new();
    let pgl = ok(group(Family::PGL, 2, 2, 2, 2))?;
    let (exists, _, n) = section_case(&pgl)?;
    ensure!(exists, "PGL_2(W_2(F_4)) has no section");
    notes.push(n);
    let sp4 = ok(group(Family::Sp, 4, 2, 1, 2))?;
    let (_, exhausted, n) = section_case(&sp4)?;
    ensure!(exhausted, "Sp_4(Z/4) not exhausted");
    notes.push(n);
    // a section is possible only for a listed factor; unlisted analogues are exhausted
    let cases = [
        (Family::SL, 2, 2u64, DynkinDatum::sl(2)),
        (Family::SL, 2, 3, DynkinDatum::sl(2)),
        (Family::SL, 2, 5, DynkinDatum::sl(2)),
        (Family::Sp, 4, 2, DynkinDatum::sp(4)),
    ];
    for (family, size, p, dt) in cases {
        let d = ok(group(family, size, p, 1, 2))?;
        let listed = !ok(check_2_2_5(&dt, p, p))?.holds("2.2.5(ii)");
        let (exists, exhausted, n) = section_case(&d)?;
        ensure!(exists != exhausted, "{d}: neither found nor exhausted");
        ensure!(!exists || listed, "{d}: section for an unlisted factor");
        ensure!(listed || exhausted, "{d}: unlisted factor not exhausted");
        notes.push(format!("{n}, listed {listed}"));
    }
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------------------
// 4. exception lists

fn criterion_4() -> Check {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<BTreeSet<String>>();
    let l225_2 = ["PGL_2", "PGL_3", "PGU_3", "PGU_4", "Res_F4/F2_PGL_2", "G_2"];
    let mut l23_2 = l225_2.to_vec();
    l23_2.push("PGSp_4");
    let expected: Vec<(&str, u64, BTreeSet<String>)> = vec![
        ("2.2.4", 3, s(&["PGL_2"])),
        ("2.2.4", 2, s(&["PGL_2", "PGSp_4", "PGU_3", "G_2"])),
        ("2.2.5", 3, s(&["PGL_2"])),
        ("2.2.5", 4, s(&["PGL_2"])),
        ("2.2.5", 2, s(&l225_2)),
        ("2.3", 3, s(&["PGL_2"])),
        ("2.3", 4, s(&["PGL_2"])),
        ("2.3", 2, s(&l23_2)),
    ];
    let mut entries = 0;
    for (list, q, want) in &expected {
        let got: BTreeSet<String> = exception_list(list, *q).into_iter().collect();
        ensure!(&got == want, "{list} at q = {q}: {got:?}, expected {want:?}");
        entries += want.len();
    }
    let shipped: usize = exception_entries().iter().map(|e| e.factors.len()).sum();
    ensure!(shipped == entries, "{shipped} shipped entries, {entries} expected");
    for list in ["2.2.4", "2.2.5", "2.3"] {
        for q in [5, 7, 8, 9, 16, 25] {
            ensure!(exception_list(list, q).is_empty(), "{list} nonempty at q = {q}");
        }
    }

    // the checkers reject exactly the listed factors
    let datum = |name: &str| match name {
        "PGL_2" => DynkinDatum::sl(2),
        "PGL_3" => DynkinDatum::sl(3),
        "PGU_3" => DynkinDatum::su(3),
        "PGU_4" => DynkinDatum::su(4),
        "PGSp_4" => DynkinDatum::sp(4),
        "Res_F4/F2_PGL_2" => DynkinDatum::res_pgl(2, 2),
        "G_2" => DynkinDatum::g2(),
        other => panic!("no datum for {other}"),
    };
    let all = ["PGL_2", "PGL_3", "PGU_3", "PGU_4", "PGSp_4", "Res_F4/F2_PGL_2", "G_2"];
    for (p, q) in [(2u64, 2u64), (3, 3), (2, 4), (5, 5)] {
        for name in all {
            if name.starts_with("Res") && q != 2 {
                continue;
            }
            let d = datum(name);
            let in225 = expected.iter().any(|(l, qq, w)| *l == "2.2.5" && *qq == q && w.contains(name));
            let in23 = expected.iter().any(|(l, qq, w)| *l == "2.3" && *qq == q && w.contains(name));
            let r225 = ok(check_2_2_5(&d, p, q))?;
            let r23 = ok(check_2_3_exceptions(&d, p, q))?;
            ensure!(r225.holds("2.2.5(ii)") == !in225, "2.2.5(ii) for {name} at q = {q}");
            ensure!(r23.holds("2.3(exceptions)") == !in23, "2.3 exceptions for {name} at q = {q}");
        }
    }
    let sp4_225 = ok(check_2_2_5(&DynkinDatum::sp(4), 2, 2))?;
    let sp4_23 = ok(check_2_3_exceptions(&DynkinDatum::sp(4), 2, 2))?;
    ensure!(sp4_225.applies("2.2.5") && !sp4_23.holds("2.3(exceptions)"), "Sp_4 at q = 2");

    // condition (ii) and the variant exclusions
    let ii = |id: &str| -> std::result::Result<(bool, Vec<String>), String> {
        let f = ok(fixture(id))?;
        let rep = ok(check_2_4(&f.datum, ok(f.computed_abelianization())?))?;
        Ok((rep.holds("2.4(ii)"), rep.applicable().into_iter().map(String::from).collect()))
    };
    let (gl2, gl2_app) = ii("GL-2-q2")?;
    let (gsp4, gsp4_app) = ii("GSp-4-q2")?;
    let (gsp6, _) = ii("GSp-6-q2")?;
    let (gl3, _) = ii("GL-3-q3")?;
    let (_, spin6m) = ii("GSpin-minus-6-q2")?;
    let (_, spin6p) = ii("GSpin-plus-6-q2")?;
    ensure!(!gl2 && gl2_app.is_empty(), "PGL_2 at q = 2 passes (ii)");
    ensure!(!gsp4 && gsp4_app.is_empty(), "PGSp_4 at q = 2 passes (ii)");
    ensure!(gsp6 && gl3, "(ii) fails for an unlisted factor");
    ensure!(spin6m.is_empty() && spin6p == ["2.4.2b"], "PGU_4 exclusion of the (i') variant");
    Ok(format!("{} lists, {entries} entries pinned; checkers and (ii) exclusions agree", expected.len()))
}

// ---------------------------------------------------------------------------
// 5. fixtures of the conditions checker

/// dim_k of Lie/[Lie, Lie] (optionally modulo scalars) from matrix commutators of a basis.
fn direct_abelianization(family: Family, size: usize, p: u64, r: usize, mod_scalars: bool) -> std::result::Result<usize, String> {
    let desc = ok(group(family, size, p, r, 1))?;
    let lie = ok(LieAlgebra::new(&desc))?;
    let k = lie.residue().clone();
    let basis = lie.basis();
    let mut derived = Subspace::new(p, lie.ambient());
    if mod_scalars {
        for j in 0..r {
            let c = k.element_at((p as u128).pow(j as u32));
            derived.insert(Matrix::scalar(size, &c, &k).data());
        }
    }
    for a in &basis {
        for b in &basis {
            derived.insert(a.mul(b, &k).sub(&b.mul(a, &k), &k).data());
        }
    }
    let dim = basis.len() - if mod_scalars { r } else { 0 };
    let der = derived.rank() - if mod_scalars { r } else { 0 };
    Ok((dim - der) / r)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_5() -> Check {
    let main = |p: u64| if p == 2 { "2.4.1b" } else { "2.4.1a" };
    // (id, conclusions stated in the examples)
    let mut cases: Vec<(&str, Vec<&str>)> = Vec::new();
    for (id, n) in [("GL-2-q2", 1u64), ("GL-4-q2", 2), ("GL-4-q4", 2), ("GL-6-q4", 3), ("GL-3-q3", 1), ("GL-6-q3", 2), ("GL-3-q9", 1)] {
        let f = ok(fixture(id))?;
        let (p, q) = (f.datum.p, f.datum.q());
        let want = if q == 2 && n == 1 {
            vec![]
        } else if gcd(n, q - 1) == 1 {
            vec![main(p), "2.4.2a"]
        } else {
            vec!["2.4.2a"]
        };
        cases.push((id, want));
    }
    cases.push(("GLmu-4-2-q2", vec!["2.4.1b", "2.4.2a"]));
    cases.push(("GLmu-9-3-q3", vec!["2.4.1a", "2.4.2a"]));
    for id in ["GSp-6-q2", "GSp-8-q2", "GSp-4-q4", "GSpin-7-q2", "GSO-minus-6-q2", "GSO-plus-6-q2", "GSO-plus-10-q2", "GSO-plus-6-q4"] {
        cases.push((id, vec!["2.4.1b"]));
    }
    cases.push(("GSp-4-q2", vec![]));
    cases.push(("GSpin-plus-6-q2", vec!["2.4.2b"]));
    cases.push(("GSpin-minus-8-q2", vec!["2.4.2b"]));
    let mut checked = 0;
    for (id, want) in &cases {
        let f = ok(fixture(id))?;
        let computed = ok(f.computed_abelianization())?;
        let rep = ok(check_2_4(&f.datum, computed))?;
        for key in want {
            ensure!(rep.applies(key), "{id}: {key} does not apply ({:?})", rep.applicable());
        }
        if want.is_empty() {
            ensure!(!rep.applies("2.4.1a") && !rep.applies("2.4.1b"), "{id}: 2.4.1 applies");
        }
        if id.starts_with("GSO-") && f.datum.q() == 2 {
            for c in ["2.4(i)", "2.4(ii)", "2.4(iii)", "2.4(iv)", "2.4(v)"] {
                ensure!(rep.holds(c), "{id}: {c} fails");
            }
        }
        checked += 1;
    }
    ensure!(checked == fixtures().len() - 1, "{checked} of {} fixtures stated", fixtures().len());

    // (iv): dimension from matrix commutators against table and Lie-module route
    let mut dims = 0;
    for f in fixtures() {
        let Some(src) = f.lie_source else { continue };
        let direct = direct_abelianization(src.family, src.size, f.datum.p, f.datum.r as usize, src.mod_scalars)?;
        let module = ok(f.computed_abelianization())?;
        ensure!(Some(direct) == f.datum.abelianization, "{}: direct {direct}, table {:?}", f.id, f.datum.abelianization);
        ensure!(Some(direct) == module, "{}: direct {direct}, module route {module:?}", f.id);
        if matches!(src.family, Family::GL | Family::GSp | Family::GSOPlus | Family::GSOMinus) {
            ensure!(direct == 1, "{}: abelianization {direct}", f.id);
        }
        dims += 1;
    }
    Ok(format!("{checked} fixture conclusions reproduced; (iv) dimension checked directly on {dims}"))
}

// ---------------------------------------------------------------------------
// 6. index decompositions

fn brute_index(k: &GeneratedSubgroup) -> std::result::Result<IndexDecomposition, String> {
    let d = k.descriptor();
    let ring: &GaloisRing = d.ring_ref();
    let cl = ok(bfs_closure(d, k.generators(), 5_000_000))?;
    let kord = cl.len() as u128;
    let gord = ok(d.order())?;
    let mut scalars = 0u128;
    for idx in 0..ring.order() {
        let c = ring.element_at(idx);
        if ring.is_unit_raw(&c) && cl.contains(&Matrix::scalar(d.size(), &c, ring)) {
            scalars += 1;
        }
    }
    let one = ring.one_raw();
    let mut mults = FxHashSet::default();
    let mut kf = 0u128;
    for g in cl.iter() {
        let m = ok(multiplier(d, &g))?;
        kf += (m == one) as u128;
        mults.insert(m);
    }
    let units = ring.unit_count();
    let mult_g = ok(multiplier_image(d, &ok(d.standard_generators())?))?;
    Ok(IndexDecomposition {
        group_order: gord,
        subgroup_order: kord,
        total_index: gord / kord,
        center_split: (units / scalars, gord / units / (kord / scalars)),
        derived_split: (gord / mult_g / kf, mult_g / mults.len() as u128),
    })
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut notes = Vec::new();
    for (g, sets) in [(group(Family::GL, 2, 3, 1, 2), 50), (group(Family::GSp, 4, 2, 1, 2), 20)] {
        let g = ok(g)?;
        let mut proper = 0;
        for i in 0..sets {
            let shape = SHAPES[i % SHAPES.len()];
            let gens = ok(random_generators(&g, shape, 2, &mut rng))?;
            let k = ok(GeneratedSubgroup::new(g.clone(), gens))?;
            let idx = ok(index_decomposition(&k, &opts()))?;
            ensure!(idx.center_split.0 * idx.center_split.1 == idx.total_index, "{g} set {i}: center split");
            ensure!(idx.derived_split.0 * idx.derived_split.1 == idx.total_index, "{g} set {i}: derived split");
            let brute = brute_index(&k)?;
            ensure!(idx == brute, "{g} set {i}: {idx:?} vs {brute:?}");
            proper += (idx.total_index > 1) as usize;
        }
        notes.push(format!("{g}: {sets} sets ({proper} proper)"));
    }
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------------------
// 7. PGL_2(Z/27)

fn criterion_7() -> Check {
    let g = ok(group(Family::PGL, 2, 3, 1, 3))?;
    let order = ok(g.order())?;
    ensure!(order == 17_496, "|PGL_2(Z/27)| = {order}");
    let g1 = ok(g.at_level(1))?;
    let order1 = ok(g1.order())?;
    let lie = ok(LieAlgebra::new(&g))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut found, mut tries, mut proper) = (0, 0, 0);
    while found < 100 {
        tries += 1;
        ensure!(tries <= 2000, "only {found} sets full mod 3");
        let shape = SHAPES[tries % SHAPES.len()];
        let gens = ok(random_generators(&g, shape, 2 + tries % 2, &mut rng))?;
        let low: Vec<Matrix> = gens.iter().map(|x| g1.canonical(&x.reduce(g.ring_ref(), 1))).collect();
        let res_full = ok(bfs_closure(&g1, &low, order1 + 1))?.len() as u128 == order1;
        let k = ok(GeneratedSubgroup::new(g.clone(), gens.clone()))?;
        let f = ok(layer_filtration(&k, &opts()))?;
        ensure!(f.residue.full == res_full, "set {tries}: residue fullness disagrees");
        if !res_full {
            continue;
        }
        found += 1;
        let cl = ok(bfs_closure(&g, &gens, order + 1))?;
        let elems: Vec<Matrix> = cl.iter().collect();
        let oracle: Vec<usize> = (1..3).map(|s| layer_from_elements(&lie, &elems, s, g.ring_ref()).rank()).collect();
        ensure!(f.dims() == oracle, "set {tries}: dims {:?} vs enumeration {oracle:?}", f.dims());
        ensure!(oracle.iter().all(|&x| x == 0 || x == 3), "set {tries}: layer dims {oracle:?}");
        let index = order / cl.len() as u128;
        let zeros = oracle.iter().filter(|&&x| x == 0).count() as u32;
        ensure!(index == 27u128.pow(zeros), "set {tries}: index {index} with layers {oracle:?}");
        proper += (index > 1) as usize;
    }
    Ok(format!("{found} sets full mod 3 ({tries} drawn, {proper} of index > 1): layers 0 or 3, index a power of 27"))
}

// ---------------------------------------------------------------------------
// 8. THM_4_1

/// Order of the image of gens in GSp(F_p)/scalars by enumeration in GSp(F_p).
fn projective_image(g: &GroupDescriptor, gens: &[Matrix]) -> std::result::Result<(u128, u128), String> {
    let g1 = ok(g.at_level(1))?;
    let ring = g1.ring_ref();
    let low: Vec<Matrix> = gens.iter().map(|x| g1.canonical(&x.reduce(g.ring_ref(), 1))).collect();
    let total = ok(g1.order())?;
    let cl = ok(bfs_closure(&g1, &low, total + 1))?;
    let mut scalars = 0u128;
    for idx in 1..ring.order() {
        let c = ring.element_at(idx);
        scalars += cl.contains(&Matrix::scalar(g1.size(), &c, ring)) as u128;
    }
    Ok((cl.len() as u128 / scalars, total / ring.unit_count()))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    for (g, expected_pg, sets) in [(group(Family::GSp, 6, 2, 1, 2), 1_451_520u128, 8), (group(Family::GSp, 4, 3, 1, 2), 51_840, 20)] {
        let g = ok(g)?;
        let (mut full, mut not_full) = (0, 0);
        let mut all_sets: Vec<Vec<Matrix>> = vec![ok(g.standard_generators())?];
        for i in 1..sets {
            let shape = SHAPES[i % SHAPES.len()];
            all_sets.push(ok(random_generators(&g, shape, 2, &mut rng))?);
        }
        for (i, gens) in all_sets.into_iter().enumerate() {
            let (img, pg) = projective_image(&g, &gens)?;
            ensure!(pg == expected_pg, "{g}: |PGSp(F_p)| = {pg}");
            let k = ok(GeneratedSubgroup::new(g.clone(), gens))?;
            ensure!(
                matches!(decide_surjectivity(&k, Mode::Thm41, None, &opts()), Err(Error::MissingHypothesis(_))),
                "{g} set {i}: ran without the disjointness hypothesis"
            );
            let k = k.with_hypothesis(HYP_DISJOINT);
            let v = ok(decide_surjectivity(&k, Mode::Thm41, None, &opts()))?;
            let oracle_full = img == pg;
            ensure!((v.outcome == Outcome::FullGroup) == oracle_full, "{g} set {i}: {:?}, image {img} of {pg}", v.outcome);
            if oracle_full {
                ensure!(v.trail.iter().any(|t| t.key == "4.1"), "{g} set {i}: no 4.1 step");
                ensure!(v.hypotheses.iter().any(|h| h == HYP_DISJOINT), "{g} set {i}: hypothesis not echoed");
                full += 1;
            } else {
                not_full += 1;
            }
        }
        ensure!(full > 0 && not_full > 0, "{g}: outcomes not mixed ({full} full)");
        notes.push(format!("{g}: {full} full, {not_full} not"));
    }
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------------------
// 9. curves over Q: Galois criterion end to end

fn criterion_9() -> Check {
    let start = Instant::now();
    let table = curve_fixtures();
    let (mut cubics, mut sextics) = (0, 0);
    let mut classes = BTreeSet::new();
    for fx in &table {
        let n = fx.f.degree().unwrap();
        let v = ok(verdict_4_2_1(&fx.f, n / 3, true, 500))?;
        ensure!(v.outcome == fx.expected, "{}: {:?}, expected {:?}", fx.f, v.outcome, fx.expected);
        ensure!(v.disc.squarefree_i64() == Some(fx.squarefree), "{}: squarefree part", fx.f);
        let again = ok(verdict_4_2_1(&fx.f, n / 3, true, 500))?;
        ensure!(serde_json::to_string(&v).unwrap() == serde_json::to_string(&again).unwrap(), "{}: not reproducible", fx.f);
        if n == 3 {
            cubics += 1;
        } else {
            sextics += 1;
        }
        classes.insert(format!("{:?}", fx.expected));
    }
    ensure!(cubics >= 10 && sextics >= 3, "{cubics} cubics, {sextics} sextics");
    ensure!(classes.len() == 3, "outcome classes {classes:?}");
    let verdict = |s: &str| ok(verdict_4_2_1(&s.parse::<IntPoly>().map_err(|e| e.to_string())?, 1, true, 500));
    ensure!(verdict("x^3-2")?.outcome == ImageOutcome::Surjective, "x^3-2");
    ensure!(verdict("x^3-x")?.outcome == ImageOutcome::NotSurjective, "x^3-x");
    let found = ok(find_cubics(&EXCLUDED_SQUAREFREE, 12, 3))?;
    ensure!(!found.is_empty(), "no cubic found");
    for f in &found {
        let c = f.coeffs();
        let (a, b) = (c[1] as i128, c[0] as i128);
        let disc = -4 * a.pow(3) - 27 * b.pow(2);
        let mut core = disc;
        let mut m = 2i128;
        while m * m <= core.abs() {
            while core % (m * m) == 0 {
                core /= m * m;
            }
            m += 1;
        }
        ensure!(EXCLUDED_SQUAREFREE.contains(&(core as i64)), "{f}: disc {disc} has squarefree part {core}");
        let v = ok(verdict_4_2_1(f, 1, true, 500))?;
        ensure!(v.outcome == ImageOutcome::NotSurjective, "{f}: {:?}", v.outcome);
    }
    within(start, Duration::from_secs(120), "curve fixtures")?;
    Ok(format!("{cubics} cubics, {sextics} sextics; found {}", found[0]))
}

// ---------------------------------------------------------------------------
// 10. point counts, L-polynomials and 2-torsion

fn legendre(a: i64, l: i64) -> i64 {
    let a = a.rem_euclid(l);
    if a == 0 {
        return 0;
    }
    let mut r = 1i64;
    let (mut b, mut e) = (a, (l - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn naive_count(f: &IntPoly, l: u64) -> i64 {
    let l = l as i64;
    let c = f.coeffs();
    let affine: i64 = (0..l)
        .map(|x| {
            let v = c.iter().rev().fold(0i64, |acc, &a| (acc * x + a).rem_euclid(l));
            1 + legendre(v, l)
        })
        .sum();
    let n = c.len() - 1;
    affine + if n % 2 == 1 { 1 } else { 1 + legendre(f.lead(), l) }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn criterion_10() -> Check {
    let mut notes = Vec::new();
    for s in ["x^3-2", "x^6-x-1"] {
        let f: IntPoly = s.parse().map_err(|e: Error| e.to_string())?;
        let disc = ok(disc_sqfree(&f))?.disc;
        let mut good = 0;
        for l in (3..400u64).filter(|&l| is_prime(l)) {
            if (&disc % l) == 0.into() {
                continue;
            }
            let r = ok(mod2_consistency(&f, l))?;
            ensure!(r.equal, "{s} at {l}: {:?} vs {:?}", r.lpoly_mod2, r.permutation_charpoly_mod2);
            good += 1;
            if good == 30 {
                break;
            }
        }
        ensure!(good >= 25, "{s}: {good} good primes");
        notes.push(format!("{s}: {good} primes"));
    }
    for s in ["x^3-2", "x^6-x-1", "x^5-x+1"] {
        let f: IntPoly = s.parse().map_err(|e: Error| e.to_string())?;
        let disc = ok(disc_sqfree(&f))?.disc;
        let mut rows = 0;
        for l in (3..=50u64).filter(|&l| is_prime(l)) {
            if (&disc % l) == 0.into() {
                continue;
            }
            let d = ok(count_points_lpoly(&f, l))?;
            let g = d.genus;
            ensure!(d.counts[0] as i64 == naive_count(&f, l), "{s} at {l}: count");
            ensure!(d.lpoly[0] == 1 && d.lpoly.len() == 2 * g + 1, "{s} at {l}: shape");
            for i in 0..=g {
                ensure!(d.lpoly[2 * g - i] == (l as i128).pow((g - i) as u32) * d.lpoly[i], "{s} at {l}: functional equation at {i}");
            }
            for (m, &c) in d.counts.iter().enumerate() {
                let q = (l as f64).powi(m as i32 + 1);
                ensure!(((c as f64) - q - 1.0).abs() <= 2.0 * g as f64 * q.sqrt() + 1e-6, "{s} at {l}: Weil bound over F_{l}^{}", m + 1);
                ensure!(predicted_count(&d.lpoly, l, m + 1) == c as i128, "{s} at {l}: count from L");
            }
            ensure!(d.valid(), "{s} at {l}: report flags");
            rows += 1;
        }
        notes.push(format!("{s}: {rows} primes <= 50"));
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("commutator-bracket identity", criterion_1),
        ("SL_2(Z/81) lifting", criterion_2),
        ("section search", criterion_3),
        ("exception lists", criterion_4),
        ("conditions fixtures", criterion_5),
        ("index splits", criterion_6),
        ("PGL_2(Z/27) layers", criterion_7),
        ("THM_4_1 verdicts", criterion_8),
        ("Galois criterion over Q", criterion_9),
        ("Frobenius data", criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
