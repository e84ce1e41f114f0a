use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use liftcheck_core::criteria::{
    check_2_2_5, check_2_3_exceptions, check_2_4, computed_abelianization, derived_datum, exception_list, fixture,
    fixtures, reductive_datum,
};
use liftcheck_core::curves::{
    certify_sn, count_points_lpoly, disc_sqfree_with_budget, evidence_4_1, factor_pattern_mod, mod2_consistency,
    verdict_4_2_1, CurveSource, ImageOutcome, IntPoly, PlaneCurve, SnVerdict,
};
use liftcheck_core::galois_ring::RingParams;
use liftcheck_core::matrix::Matrix;
use liftcheck_core::matrix_groups::GroupDescriptor;
use liftcheck_core::oracle::{composition_factors, enumerate_closure, find_section, verify_generation_props, SectionOptions};
use liftcheck_core::subgroup_engine::{
    decide_surjectivity, layer_filtration, EngineOptions, GeneratedSubgroup, Mode, HYP_ABELIANIZATION, HYP_AB_KERNEL,
    HYP_DISJOINT,
};
use liftcheck_core::{Error, Result};

use crate::genfile::{format_generators, parse_generators};
use crate::{Cli, Command, CriteriaAction, CurveAction, GroupAction, OracleAction, RingOpArg};

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run = std::result::Result<(Value, u8), Failure>;

/// Runs the request; returns the report document and the process exit code.
pub fn run(cli: &Cli) -> (Value, u8) {
    let g = &cli.global;
    let (name, res) = match &cli.command {
        Command::Ring(a) => ("ring", ring(a)),
        Command::Group(a) => ("group", group(&a.action, g.bound)),
        Command::LiftCheck(a) => ("lift-check", lift_check(a, g.bound)),
        Command::Layers(a) => ("layers", layers(a, g.bound)),
        Command::Criteria(a) => ("criteria", criteria(&a.action)),
        Command::Oracle(a) => ("oracle", oracle(&a.action, g.seed, g.bound)),
        Command::Curve(a) => ("curve", curve(&a.action)),
    };
    let mut doc = json!({ "command": name, "seed": g.seed, "threads": g.threads, "bound": g.bound });
    let code = match res {
        Ok((report, code)) => {
            doc["report"] = report;
            code
        }
        Err(f) => {
            let (msg, code) = match f {
                Failure::Core(e) => {
                    let code = match e {
                        Error::TooLarge { .. } | Error::BudgetExhausted(_) => 30,
                        _ => 2,
                    };
                    (e.to_string(), code)
                }
                Failure::Io(m) => (m, 2),
            };
            doc["error"] = Value::String(msg);
            code
        }
    };
    doc["exit_code"] = json!(code);
    (doc, code)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn descriptor(s: &str) -> Result<GroupDescriptor> {
    s.parse()
}

fn read_generators(path: &Path, desc: &GroupDescriptor) -> std::result::Result<Vec<Matrix>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_generators(&text, desc)?)
}

fn generators_or_standard(path: Option<&Path>, desc: &GroupDescriptor) -> std::result::Result<Vec<Matrix>, Failure> {
    match path {
        Some(p) => read_generators(p, desc),
        None => Ok(desc.standard_generators()?),
    }
}

fn ring(a: &crate::RingArgs) -> Run {
    let params: RingParams = a.ring.parse()?;
    let r = params.build()?;
    let Some(op) = a.op else {
        let report = json!({
            "ring": params.to_string(),
            "p": r.p(), "r": r.r(), "n": r.n(),
            "characteristic": r.char(),
            "residue_size": r.residue_size(),
            "order": r.order(),
            "units": r.unit_count(),
            "modulus": r.modulus(),
        });
        return Ok((report, 0));
    };
    let need = |x: &Option<String>, name: &str| -> Result<String> {
        x.clone().ok_or_else(|| Error::Parse(format!("--{name} is required for this operation")))
    };
    let x = r.parse_element(&need(&a.a, "a")?)?;
    let value: Value = match op {
        RingOpArg::Add => json!(x.add(&r.parse_element(&need(&a.b, "b")?)?)?.coeffs()),
        RingOpArg::Sub => json!(x.sub(&r.parse_element(&need(&a.b, "b")?)?)?.coeffs()),
        RingOpArg::Mul => json!(x.mul(&r.parse_element(&need(&a.b, "b")?)?)?.coeffs()),
        RingOpArg::Inv => json!(x.inv()?.coeffs()),
        RingOpArg::Pow => json!(x.pow(a.e.unwrap_or(1) as u128).coeffs()),
        RingOpArg::Teichmuller => json!(x.teichmuller().coeffs()),
        RingOpArg::Frobenius => json!(x.frobenius().coeffs()),
        RingOpArg::Reduce => {
            let m = a.e.ok_or_else(|| Error::Parse("--e gives the target level".into()))? as u32;
            json!(x.reduce_level(m)?.coeffs())
        }
        RingOpArg::Valuation => json!(x.valuation()),
    };
    Ok((json!({ "ring": params.to_string(), "op": format!("{op:?}").to_lowercase(), "a": x.coeffs(), "value": value }), 0))
}

fn group(action: &GroupAction, bound: u64) -> Run {
    match action {
        GroupAction::Info { group } => {
            let d = descriptor(group)?;
            let order = d.order();
            let report = json!({
                "group": d.to_string(),
                "dimension": d.size(),
                "level": d.level(),
                "order": order.as_ref().ok(),
                "order_error": order.err().map(|e| e.to_string()),
                "lie_dim": d.lie_dim(),
                "standard_generators": d.standard_generators()?.len(),
                "enumerable": d.order().map(|o| o <= bound as u128).unwrap_or(false),
            });
            Ok((report, 0))
        }
        GroupAction::Generators { group, out } => {
            let d = descriptor(group)?;
            let gens = d.standard_generators()?;
            let text = format_generators(&gens);
            if let Some(path) = out {
                std::fs::write(path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            Ok((json!({ "group": d.to_string(), "count": gens.len(), "generators": text.lines().collect::<Vec<_>>() }), 0))
        }
        GroupAction::Member { group, generators } => {
            let d = descriptor(group)?;
            let text = std::fs::read_to_string(generators).map_err(|e| Failure::Io(format!("{}: {e}", generators.display())))?;
            // parsed without the membership check so that non-members can be reported
            let mats = parse_generators(&text, &d)?;
            let rows: Vec<Value> = mats
                .iter()
                .map(|m| match d.membership(m) {
                    Ok(mm) => to_value(&mm),
                    Err(e) => json!({ "member": false, "reason": e.to_string() }),
                })
                .collect();
            let all = mats.iter().all(|m| d.contains(m));
            Ok((json!({ "group": d.to_string(), "matrices": rows, "all_members": all }), if all { 0 } else { 20 }))
        }
    }
}

fn hypothesis(h: &str) -> String {
    match h {
        "abelianization" => HYP_ABELIANIZATION.into(),
        "ab-kernel" => HYP_AB_KERNEL.into(),
        "disjoint" => HYP_DISJOINT.into(),
        other => other.into(),
    }
}

fn lift_check(a: &crate::LiftArgs, bound: u64) -> Run {
    let d = descriptor(&a.group)?;
    let mode: Mode = a.mode.parse()?;
    let gens = generators_or_standard(a.generators.as_deref(), &d)?;
    let mut k = GeneratedSubgroup::new(d.clone(), gens)?;
    for h in &a.hypotheses {
        k = k.with_hypothesis(&hypothesis(h));
    }
    let opts = EngineOptions { enumeration_bound: bound as u128, word_budget: a.word_budget as usize, with_index: a.with_index };
    let report = if mode == Mode::Tilde {
        let base = d.at_level(1)?;
        let rd = reductive_datum(&base)?;
        let ab = computed_abelianization(d.family(), d.size(), d.ring_ref().p(), d.ring_ref().r(), false).ok();
        Some(check_2_4(&rd, ab)?)
    } else {
        None
    };
    let v = decide_surjectivity(&k, mode, report.as_ref(), &opts)?;
    let code = v.outcome.exit_code() as u8;
    let mut out = to_value(&v);
    out["outcome_name"] = json!(v.outcome.name());
    if let Some(r) = report {
        out["conditions"] = to_value(&r);
    }
    Ok((out, code))
}

fn layers(a: &crate::LayersArgs, bound: u64) -> Run {
    let d = descriptor(&a.group)?;
    let gens = generators_or_standard(a.generators.as_deref(), &d)?;
    let k = GeneratedSubgroup::new(d.clone(), gens)?;
    let opts = EngineOptions { enumeration_bound: bound as u128, word_budget: a.word_budget as usize, with_index: false };
    let f = layer_filtration(&k, &opts)?;
    let mut out = to_value(&f);
    out["dims"] = json!(f.dims());
    if !a.bases {
        if let Some(ls) = out["layers"].as_array_mut() {
            for l in ls {
                if let Some(m) = l.as_object_mut() {
                    m.remove("basis");
                }
            }
        }
    }
    Ok((out, 0))
}

fn criteria(action: &CriteriaAction) -> Run {
    match action {
        CriteriaAction::Check24 { fixture: Some(id), .. } => {
            let fx = fixture(id)?;
            let ab = fx.computed_abelianization()?;
            let rep = check_2_4(&fx.datum, ab)?;
            let expected_holds: Vec<&str> = fx.holds.iter().map(String::as_str).collect();
            let mismatches: Vec<String> = rep
                .conditions
                .iter()
                .filter(|c| (c.holds == Some(true)) != expected_holds.contains(&c.key.as_str()))
                .map(|c| c.key.clone())
                .collect();
            let applies_ok = {
                let mut got: Vec<&str> = rep.applicable();
                let mut want: Vec<&str> = fx.applies.iter().map(String::as_str).collect();
                got.sort_unstable();
                want.sort_unstable();
                got == want
            };
            let all_pass = mismatches.is_empty() && applies_ok;
            let code = if all_pass { 0 } else { 20 };
            let out = json!({
                "fixture": id,
                "report": to_value(&rep),
                "computed_abelianization": ab,
                "all_pass": all_pass,
                "applicable": rep.applicable(),
                "mismatched_conditions": mismatches,
            });
            Ok((out, code))
        }
        CriteriaAction::Check24 { group: Some(g), .. } => {
            let d = descriptor(g)?.at_level(1)?;
            let rd = reductive_datum(&d)?;
            let ab = computed_abelianization(d.family(), d.size(), d.ring_ref().p(), d.ring_ref().r(), false).ok();
            let rep = check_2_4(&rd, ab)?;
            Ok((json!({ "group": d.to_string(), "report": to_value(&rep), "computed_abelianization": ab }), 0))
        }
        CriteriaAction::Check24 { .. } => Err(Error::Parse("check24 needs --fixture or --group".into()).into()),
        CriteriaAction::Check225 { group } => {
            let d = descriptor(group)?;
            let dd = derived_datum(&d);
            let (p, q) = (d.ring_ref().p(), d.base_field_size());
            let a = check_2_2_5(&dd, p, q)?;
            let b = check_2_3_exceptions(&dd, p, q)?;
            let ok = a.applies("2.2.5");
            Ok((json!({ "group": d.to_string(), "q": q, "check_2_2_5": to_value(&a), "check_2_3": to_value(&b) }), if ok { 0 } else { 20 }))
        }
        CriteriaAction::Exceptions { list, q } => {
            if !["2.2.4", "2.2.5", "2.3"].contains(&list.as_str()) {
                return Err(Error::Parse(format!("unknown list `{list}`")).into());
            }
            Ok((json!({ "list": list, "q": q, "factors": exception_list(list, *q) }), 0))
        }
        CriteriaAction::Fixtures => {
            let ids: Vec<&str> = fixtures().iter().map(|f| f.id.as_str()).collect();
            Ok((json!({ "fixtures": ids }), 0))
        }
    }
}

fn oracle(action: &OracleAction, seed: u64, bound: u64) -> Run {
    let bound = bound as u128;
    match action {
        OracleAction::Enumerate { group, generators } => {
            let d = descriptor(group)?;
            let gens = generators_or_standard(generators.as_deref(), &d)?;
            let e = enumerate_closure(Arc::new(d.clone()), &gens, bound)?;
            let full = d.order().ok().map(|o| o == e.order() as u128);
            Ok((json!({ "group": d.to_string(), "order": e.order(), "group_order": d.order().ok(), "full": full }), 0))
        }
        OracleAction::Factors { group, generators } => {
            let d = descriptor(group)?;
            let gens = generators_or_standard(generators.as_deref(), &d)?;
            let e = enumerate_closure(Arc::new(d.clone()), &gens, bound)?;
            let fs = composition_factors(&e)?;
            let labels: Vec<String> = fs.iter().map(|f| f.label()).collect();
            Ok((json!({ "group": d.to_string(), "order": e.order(), "factors": labels, "detail": to_value(&fs) }), 0))
        }
        OracleAction::Section { group, node_budget } => {
            let d = descriptor(group)?;
            let opts = SectionOptions { seed, bound, node_budget: *node_budget };
            let s = find_section(&d, &opts)?;
            let code = if s.exists() {
                0
            } else if s.exhausted() {
                20
            } else {
                30
            };
            let mut out = to_value(&s);
            out["exists"] = json!(s.exists());
            out["exhausted"] = json!(s.exhausted());
            out["routes_agree"] = json!(s.routes_agree());
            Ok((out, code))
        }
        OracleAction::Generation { group, generators } => {
            let d = descriptor(group)?;
            let gens = read_generators(generators, &d)?;
            let r = verify_generation_props(&d, &gens, bound)?;
            Ok((to_value(&r), if r.consistent { 0 } else { 20 }))
        }
    }
}

fn poly(s: &str) -> Result<IntPoly> {
    IntPoly::parse(s)
}

fn primes_up_to(max: u64) -> impl Iterator<Item = u64> {
    (3..=max).filter(|&l| liftcheck_core::arith::is_prime(l))
}

fn curve(action: &CurveAction) -> Run {
    match action {
        CurveAction::Verdict { f, no_assert_q, primes } => {
            let f = poly(f)?;
            let d = f.degree().unwrap_or(0) / 3;
            let v = verdict_4_2_1(&f, d, !no_assert_q, *primes as usize)?;
            let code = match v.outcome {
                ImageOutcome::Surjective => 0,
                ImageOutcome::NotSurjective => 20,
                ImageOutcome::Unknown => 30,
            };
            Ok((to_value(&v), code))
        }
        CurveAction::Disc { f, rho_budget } => {
            let r = disc_sqfree_with_budget(&poly(f)?, *rho_budget)?;
            let code = if r.squarefree_part.is_some() { 0 } else { 30 };
            Ok((to_value(&r), code))
        }
        CurveAction::Certify { f, primes } => {
            let c = certify_sn(&poly(f)?, *primes as usize)?;
            let code = match c.verdict {
                SnVerdict::Certified => 0,
                SnVerdict::NotSn(_) => 20,
                SnVerdict::Unknown => 30,
            };
            Ok((to_value(&c), code))
        }
        CurveAction::Count { f, l } => {
            let f = poly(f)?;
            let d = count_points_lpoly(&f, *l)?;
            let mut out = to_value(&d);
            out["pattern"] = json!(factor_pattern_mod(&f, *l)?);
            out["jacobian_order"] = json!(d.jacobian_order());
            out["valid"] = json!(d.valid());
            Ok((out, if d.valid() { 0 } else { 20 }))
        }
        CurveAction::Mod2 { f, max_l } => {
            let f = poly(f)?;
            let mut rows = Vec::new();
            for l in primes_up_to(*max_l) {
                match mod2_consistency(&f, l) {
                    Ok(r) => rows.push(to_value(&r)),
                    Err(Error::BadPrime(_)) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            let all = rows.iter().all(|r| r["equal"] == json!(true));
            Ok((json!({ "f": f.to_string(), "primes": rows.len(), "all_equal": all, "rows": rows }), if all { 0 } else { 20 }))
        }
        CurveAction::Evidence { f, plane, max_l } => {
            let src = match (f, plane) {
                (Some(f), _) => CurveSource::Hyperelliptic(poly(f)?),
                (None, Some(c)) => CurveSource::Plane(PlaneCurve::parse(c)?),
                (None, None) => return Err(Error::Parse("evidence needs --f or --plane".into()).into()),
            };
            let r = evidence_4_1(&src, *max_l);
            Ok((to_value(&r), if r.all_valid { 0 } else { 20 }))
        }
    }
}
