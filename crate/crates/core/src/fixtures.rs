//! Evaluation of the `expected` block carried by scenario files.

use serde_json::Value;

use crate::aggregate::{solve_affine, synthesize, SolveOutcome};
use crate::cone::Relation;
use crate::error::{Error, Result};
use crate::json::{
    array, boolean, child, field, natural, parse_event, parse_point, rows_json, schema_error, string, vector,
    vector_json, PoolingScenario, Scenario, ScenarioBody,
};
use crate::pareto::{check_all, violation, Axiom, AxiomReport};
use crate::pooling::{gfc_check_measure, pool, pooling_profile};
use crate::profile::Profile;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: String, expected: &Value, found: &Value) -> Check {
    Check {
        pass: expected == found,
        detail: if expected == found {
            String::new()
        } else {
            format!("expected {expected}, found {found}")
        },
        name,
    }
}

fn relation_name(v: &Value, ptr: &str) -> Result<Value> {
    let s = string(v, ptr)?;
    Relation::parse(s).ok_or_else(|| schema_error(ptr, format!("unknown relation {s:?}")))?;
    Ok(Value::String(s.into()))
}

fn level(v: &Value, ptr: &str) -> Result<Axiom> {
    let s = string(v, ptr)?;
    Axiom::parse(s).ok_or_else(|| schema_error(ptr, format!("unknown axiom {s:?}")))
}

fn replay_check(name: &str, p: &Profile, r: &AxiomReport) -> Result<Check> {
    let pass = match &r.witness {
        Some(w) => violation(p, r.axiom, &w.x, &w.y)?.is_some(),
        None => false,
    };
    Ok(Check {
        name: name.into(),
        pass,
        detail: String::new(),
    })
}

/// Every assertion of the scenario's `expected` block, evaluated.
pub fn check_expected(s: &Scenario) -> Result<Vec<Check>> {
    let Some(e) = &s.expected else {
        return Ok(Vec::new());
    };
    match &s.body {
        ScenarioBody::Profile(p) => profile_checks(p, e),
        ScenarioBody::Pooling(p) => pooling_checks(p, e),
    }
}

fn profile_checks(p: &Profile, e: &Value) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let base = "/expected";
    if let Some(cs) = e.get("comparisons") {
        let cp = child(base, "comparisons");
        for (i, c) in array(cs, &cp)?.iter().enumerate() {
            let ptr = format!("{cp}/{i}");
            let k = natural(field(c, "rep", &ptr)?, &child(&ptr, "rep"))?;
            if k > p.n() {
                return Err(schema_error(&child(&ptr, "rep"), "no such representation"));
            }
            let x = parse_point(field(c, "x", &ptr)?, &child(&ptr, "x"), &p.domain)?;
            let y = parse_point(field(c, "y", &ptr)?, &child(&ptr, "y"), &p.domain)?;
            let want = relation_name(field(c, "relation", &ptr)?, &child(&ptr, "relation"))?;
            let got = p.compare(k, &x, &y)?.relation;
            out.push(check(
                format!("comparison {i}"),
                &want,
                &Value::String(got.name().into()),
            ));
        }
    }
    if let Some(a) = e.get("axioms") {
        let ap = child(base, "axioms");
        let summary = check_all(p)?;
        let obj = a.as_object().ok_or_else(|| schema_error(&ap, "expected an object"))?;
        for (key, want) in obj {
            let got = if let Some(ax) = Axiom::parse(key) {
                Value::Bool(summary.reports.iter().find(|r| r.axiom == ax).unwrap().holds)
            } else if key == "dr" {
                Value::Bool(summary.dr)
            } else if key == "weak_dr" {
                serde_json::json!({
                    "contains_positive_cone": summary.weak_dr.contains_positive_cone,
                    "contains_direct_sum": summary.weak_dr.contains_direct_sum,
                })
            } else {
                return Err(schema_error(&child(&ap, key), "unknown axiom entry"));
            };
            out.push(check(format!("axioms {key}"), want, &got));
        }
    }
    if let Some(sv) = e.get("solve") {
        let sp = child(base, "solve");
        let outcome = solve_affine(p)?;
        let want_status = string(field(sv, "status", &sp)?, &child(&sp, "status"))?;
        match &outcome {
            SolveOutcome::Solved(a) => {
                out.push(check(
                    "solve status".into(),
                    &Value::String(want_status.into()),
                    &"solved".into(),
                ));
                if let Some(m) = sv.get("matrix") {
                    out.push(check("solve matrix".into(), m, &rows_json(a.map.matrix.row_vecs())));
                }
                if let Some(b) = sv.get("b") {
                    vector(b, &child(&sp, "b"))?;
                    out.push(check("solve offset".into(), b, &vector_json(&a.b)));
                }
                if let Some(c) = sv.get("positivity") {
                    out.push(check("solve positivity".into(), c, &a.positivity.name().into()));
                }
            }
            SolveOutcome::NoP1(r) => {
                out.push(check(
                    "solve status".into(),
                    &Value::String(want_status.into()),
                    &"no_p1".into(),
                ));
                out.push(replay_check("solve witness replays", p, r)?);
            }
        }
    }
    if let Some(ss) = e.get("synthesize") {
        let sp = child(base, "synthesize");
        for (i, s) in array(ss, &sp)?.iter().enumerate() {
            let ptr = format!("{sp}/{i}");
            let lv = level(field(s, "level", &ptr)?, &child(&ptr, "level"))?;
            let want = string(field(s, "status", &ptr)?, &child(&ptr, "status"))?;
            let name = format!("synthesize {}", lv.name());
            match synthesize(p, lv) {
                Ok(r) => {
                    out.push(check(format!("{name} status"), &want.into(), &"ok".into()));
                    if let Some(d) = s.get("dim") {
                        out.push(check(format!("{name} dim"), d, &r.space.dim().into()));
                    }
                    if let Some(c) = s.get("positivity") {
                        out.push(check(format!("{name} positivity"), c, &r.positivity.name().into()));
                    }
                    let verified = r.verification.mismatch.is_none();
                    out.push(Check {
                        name: format!("{name} verification"),
                        pass: verified,
                        detail: String::new(),
                    });
                }
                Err(Error::AxiomFailed(rep)) => {
                    out.push(check(format!("{name} status"), &want.into(), &"axiom_failed".into()));
                    if let Some(a) = s.get("failed_axiom") {
                        out.push(check(format!("{name} failed axiom"), a, &rep.axiom.name().into()));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

fn pooling_checks(s: &PoolingScenario, e: &Value) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let base = "/expected";
    let measure = |k: usize| if k == 0 { &s.social } else { &s.individuals[k - 1] };
    let check_measure_index = |k: usize, ptr: &str| -> Result<()> {
        if k > s.individuals.len() {
            Err(schema_error(ptr, "no such measure"))
        } else {
            Ok(())
        }
    };
    if let Some(es) = e.get("events") {
        let ep = child(base, "events");
        for (i, c) in array(es, &ep)?.iter().enumerate() {
            let ptr = format!("{ep}/{i}");
            let k = natural(field(c, "measure", &ptr)?, &child(&ptr, "measure"))?;
            check_measure_index(k, &child(&ptr, "measure"))?;
            let a = parse_event(field(c, "a", &ptr)?, &child(&ptr, "a"), &s.algebra)?;
            let b = parse_event(field(c, "b", &ptr)?, &child(&ptr, "b"), &s.algebra)?;
            let want = relation_name(field(c, "relation", &ptr)?, &child(&ptr, "relation"))?;
            let got = measure(k).likelihood_compare(a, b)?.relation;
            out.push(check(format!("event comparison {i}"), &want, &got.name().into()));
        }
    }
    if let Some(ps) = e.get("positivity") {
        let pp = child(base, "positivity");
        for (i, c) in array(ps, &pp)?.iter().enumerate() {
            let ptr = format!("{pp}/{i}");
            let k = natural(field(c, "measure", &ptr)?, &child(&ptr, "measure"))?;
            check_measure_index(k, &child(&ptr, "measure"))?;
            let r = measure(k).positivity_nontriviality();
            for key in ["positive", "nontrivial"] {
                if let Some(v) = c.get(key) {
                    boolean(v, &child(&ptr, key))?;
                    let got = if key == "positive" { r.positive } else { r.nontrivial };
                    out.push(check(format!("measure {k} {key}"), v, &got.into()));
                }
            }
        }
    }
    if let Some(g) = e.get("gfc") {
        let gp = child(base, "gfc");
        let k_max = natural(field(g, "k_max", &gp)?, &child(&gp, "k_max"))?;
        let want = field(g, "holds", &gp)?;
        let r = gfc_check_measure(&s.social, k_max)?;
        out.push(check("cancellation".into(), want, &r.holds.into()));
    }
    if let Some(pv) = e.get("pool") {
        let pp = child(base, "pool");
        let want = string(field(pv, "status", &pp)?, &child(&pp, "status"))?;
        match pool(&s.algebra, &s.individuals, &s.social) {
            Ok(r) => {
                out.push(check("pool status".into(), &want.into(), &"ok".into()));
                if let Some(w) = pv.get("weights") {
                    let got = match &r.affine {
                        Some(a) => rows_json(a.map.matrix.row_vecs()),
                        None => Value::Null,
                    };
                    out.push(check("pool weights".into(), w, &got));
                }
                if let Some(b) = pv.get("offset") {
                    let got = r.affine.as_ref().map(|a| vector_json(&a.b)).unwrap_or(Value::Null);
                    out.push(check("pool offset".into(), b, &got));
                }
            }
            Err(Error::AxiomFailed(rep)) => {
                out.push(check("pool status".into(), &want.into(), &"axiom_failed".into()));
                if let Some(a) = pv.get("failed_axiom") {
                    out.push(check("pool failed axiom".into(), a, &rep.axiom.name().into()));
                }
                let prof = pooling_profile(&s.individuals, &s.social)?;
                out.push(replay_check("pool witness replays", &prof, &rep)?);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
