//! JSON encoding of scenarios and results. Rationals are strings throughout.

use serde_json::{json, Map, Value};

use crate::aggregate::{
    AffineSolution, CommonSpaceResult, IsoOutcome, SolveOutcome, SynthesisComparison, SynthesisResult,
    UniquenessOutcome,
};
use crate::cone::{ConeDesc, MemberCert, Membership, OrderRelationResult, Piece, PieceUnion};
use crate::error::{Error, Result};
use crate::linalg::{AffineMap, RMatrix, RVector, Subspace};
use crate::pareto::{AxiomReport, AxiomSummary};
use crate::pooling::{FiniteAlgebra, GfcReport, LyapunovReport, PoolingReport, PositivityReport, VectorMeasure};
use crate::povs::{EmbeddingFailure, EmbeddingReport, Positivity, Povs, PovsMap};
use crate::profile::{Domain, Point, Profile, Representation, SampleAgreement};
use crate::rational::{format_rational, parse_rational, Rational};

pub fn schema_error(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

pub fn child(ptr: &str, key: &str) -> String {
    format!("{ptr}/{}", escape(key))
}

fn index(ptr: &str, i: usize) -> String {
    format!("{ptr}/{i}")
}

pub fn field<'a>(v: &'a Value, key: &str, ptr: &str) -> Result<&'a Value> {
    let obj = v.as_object().ok_or_else(|| schema_error(ptr, "expected an object"))?;
    obj.get(key)
        .ok_or_else(|| schema_error(&child(ptr, key), "missing field"))
}

pub fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema_error(ptr, "expected an array"))
}

pub fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema_error(ptr, "expected a string"))
}

pub fn boolean(v: &Value, ptr: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| schema_error(ptr, "expected a boolean"))
}

pub fn natural(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema_error(ptr, "expected a nonnegative integer"))
}

/// A rational given as a string such as `"-3/4"`, or as a JSON integer.
pub fn rational(v: &Value, ptr: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| schema_error(ptr, format!("not a rational: {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        Value::Number(_) => Err(schema_error(ptr, "floating point numbers are not accepted")),
        _ => Err(schema_error(ptr, "expected a rational string")),
    }
}

pub fn vector(v: &Value, ptr: &str) -> Result<RVector> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &index(ptr, i)))
        .collect()
}

fn vector_of_len(v: &Value, ptr: &str, n: usize) -> Result<RVector> {
    let x = vector(v, ptr)?;
    if x.len() != n {
        return Err(schema_error(ptr, format!("expected {n} entries, found {}", x.len())));
    }
    Ok(x)
}

fn rows_of_len(v: &Value, ptr: &str, n: usize) -> Result<Vec<RVector>> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, r)| vector_of_len(r, &index(ptr, i), n))
        .collect()
}

fn kind<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    string(field(v, "kind", ptr)?, &child(ptr, "kind"))
}

pub fn parse_cone(v: &Value, ptr: &str) -> Result<ConeDesc> {
    let dim = || natural(field(v, "dim", ptr)?, &child(ptr, "dim"));
    let c = match kind(v, ptr)? {
        "orthant" => ConeDesc::Orthant(dim()?),
        "trivial" => ConeDesc::Trivial(dim()?),
        "polyhedral_h" => {
            let d = dim()?;
            ConeDesc::PolyhedralH {
                dim: d,
                rows: rows_of_len(field(v, "rows", ptr)?, &child(ptr, "rows"), d)?,
            }
        }
        "polyhedral_v" => {
            let d = dim()?;
            ConeDesc::PolyhedralV {
                dim: d,
                generators: rows_of_len(field(v, "generators", ptr)?, &child(ptr, "generators"), d)?,
            }
        }
        "product" => {
            let fp = child(ptr, "factors");
            let fs = array(field(v, "factors", ptr)?, &fp)?;
            ConeDesc::Product(
                fs.iter()
                    .enumerate()
                    .map(|(i, f)| parse_cone(f, &index(&fp, i)))
                    .collect::<Result<_>>()?,
            )
        }
        "lex" => ConeDesc::Lex(
            Box::new(parse_cone(field(v, "head", ptr)?, &child(ptr, "head"))?),
            Box::new(parse_cone(field(v, "tail", ptr)?, &child(ptr, "tail"))?),
        ),
        "pieces" => {
            let d = dim()?;
            let pp = child(ptr, "pieces");
            let pieces = array(field(v, "pieces", ptr)?, &pp)?
                .iter()
                .enumerate()
                .map(|(i, p)| parse_piece(p, &index(&pp, i), d))
                .collect::<Result<_>>()?;
            ConeDesc::Pieces(PieceUnion::new(d, pieces))
        }
        other => {
            return Err(schema_error(
                &child(ptr, "kind"),
                format!("unknown cone kind {other:?}"),
            ))
        }
    };
    c.validate().map_err(|e| schema_error(ptr, e.to_string()))?;
    Ok(c)
}

fn parse_piece(v: &Value, ptr: &str, dim: usize) -> Result<Piece> {
    let rows = |key: &str| -> Result<Vec<RVector>> {
        match v.get(key) {
            Some(r) => rows_of_len(r, &child(ptr, key), dim),
            None => Ok(Vec::new()),
        }
    };
    Ok(Piece {
        dim,
        nonstrict: rows("nonstrict")?,
        strict: rows("strict")?,
        equalities: rows("equalities")?,
    })
}

pub fn parse_space(v: &Value, ptr: &str) -> Result<Povs> {
    Povs::new(parse_cone(v, ptr)?).map_err(|e| schema_error(ptr, e.to_string()))
}

pub fn parse_domain(v: &Value, ptr: &str) -> Result<Domain> {
    let d = match kind(v, ptr)? {
        "simplex" => Domain::Simplex(natural(field(v, "m", ptr)?, &child(ptr, "m"))?),
        "cube" => Domain::Cube(natural(field(v, "n", ptr)?, &child(ptr, "n"))?),
        "polytope" => {
            let dim = natural(field(v, "dim", ptr)?, &child(ptr, "dim"))?;
            Domain::Polytope {
                dim,
                vertices: rows_of_len(field(v, "vertices", ptr)?, &child(ptr, "vertices"), dim)?,
            }
        }
        other => {
            return Err(schema_error(
                &child(ptr, "kind"),
                format!("unknown domain kind {other:?}"),
            ))
        }
    };
    d.validate().map_err(|e| schema_error(ptr, e.to_string()))?;
    Ok(d)
}

pub fn parse_rep(v: &Value, ptr: &str, domain_dim: usize) -> Result<Representation> {
    let target = parse_space(field(v, "space", ptr)?, &child(ptr, "space"))?;
    let rows = rows_of_len(field(v, "matrix", ptr)?, &child(ptr, "matrix"), domain_dim)?;
    if rows.len() != target.dim() {
        return Err(schema_error(
            &child(ptr, "matrix"),
            format!("expected {} rows, found {}", target.dim(), rows.len()),
        ));
    }
    let offset = match v.get("offset") {
        Some(o) => vector_of_len(o, &child(ptr, "offset"), target.dim())?,
        None => vec![Rational::from_integer(0.into()); target.dim()],
    };
    let map =
        AffineMap::new(RMatrix::from_rows(domain_dim, rows), offset).map_err(|e| schema_error(ptr, e.to_string()))?;
    Representation::new(target, map).map_err(|e| schema_error(ptr, e.to_string()))
}

pub fn parse_profile(v: &Value, ptr: &str) -> Result<Profile> {
    let domain = parse_domain(field(v, "domain", ptr)?, &child(ptr, "domain"))?;
    let d = domain.ambient_dim();
    let ip = child(ptr, "individuals");
    let individuals = array(field(v, "individuals", ptr)?, &ip)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_rep(r, &index(&ip, i), d))
        .collect::<Result<Vec<_>>>()?;
    let social = parse_rep(field(v, "social", ptr)?, &child(ptr, "social"), d)?;
    Profile::new(domain, individuals, social).map_err(|e| schema_error(ptr, e.to_string()))
}

/// A point given as `{"weights": [...]}`, `{"coords": [...]}` or `{"vertex": j}`.
pub fn parse_point(v: &Value, ptr: &str, domain: &Domain) -> Result<Point> {
    if let Some(w) = v.get("weights") {
        let p = Point {
            weights: vector_of_len(w, &child(ptr, "weights"), domain.vertex_count())?,
        };
        domain.coords(&p).map_err(|e| schema_error(ptr, e.to_string()))?;
        Ok(p)
    } else if let Some(c) = v.get("coords") {
        let x = vector_of_len(c, &child(ptr, "coords"), domain.ambient_dim())?;
        domain
            .point_at(&x)?
            .ok_or_else(|| schema_error(ptr, "point lies outside the domain"))
    } else if let Some(j) = v.get("vertex") {
        let j = natural(j, &child(ptr, "vertex"))?;
        if j >= domain.vertex_count() {
            return Err(schema_error(&child(ptr, "vertex"), "vertex index out of range"));
        }
        Ok(domain.vertex_point(j))
    } else {
        Err(schema_error(ptr, "expected weights, coords or vertex"))
    }
}

#[derive(Clone, Debug)]
pub struct PoolingScenario {
    pub algebra: FiniteAlgebra,
    /// `measures[0]` of the input.
    pub social: VectorMeasure,
    pub individuals: Vec<VectorMeasure>,
}

pub fn parse_measure(v: &Value, ptr: &str, algebra: &FiniteAlgebra) -> Result<VectorMeasure> {
    let target = parse_space(field(v, "space", ptr)?, &child(ptr, "space"))?;
    let vp = child(ptr, "values");
    let values = field(v, "values", ptr)?
        .as_object()
        .ok_or_else(|| schema_error(&vp, "expected an object keyed by atom"))?;
    for k in values.keys() {
        if !algebra.atoms.contains(k) {
            return Err(schema_error(&child(&vp, k), "unknown atom"));
        }
    }
    let atom_values = algebra
        .atoms
        .iter()
        .map(|a| {
            let ap = child(&vp, a);
            let x = values.get(a).ok_or_else(|| schema_error(&ap, "missing atom value"))?;
            vector_of_len(x, &ap, target.dim())
        })
        .collect::<Result<Vec<_>>>()?;
    VectorMeasure::new(target, atom_values).map_err(|e| schema_error(ptr, e.to_string()))
}

pub fn parse_pooling(v: &Value, ptr: &str) -> Result<PoolingScenario> {
    let ap = child(ptr, "atoms");
    let atoms = array(field(v, "atoms", ptr)?, &ap)?
        .iter()
        .enumerate()
        .map(|(i, a)| string(a, &index(&ap, i)).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let algebra = FiniteAlgebra::new(atoms).map_err(|e| schema_error(&ap, e.to_string()))?;
    let mp = child(ptr, "measures");
    let mut measures = array(field(v, "measures", ptr)?, &mp)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_measure(m, &index(&mp, i), &algebra))
        .collect::<Result<Vec<_>>>()?;
    if measures.is_empty() {
        return Err(schema_error(&mp, "at least the social measure is required"));
    }
    let social = measures.remove(0);
    Ok(PoolingScenario {
        algebra,
        social,
        individuals: measures,
    })
}

pub fn parse_event(v: &Value, ptr: &str, algebra: &FiniteAlgebra) -> Result<u64> {
    let names = array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, a)| string(a, &index(ptr, i)))
        .collect::<Result<Vec<_>>>()?;
    algebra.event(&names).map_err(|e| schema_error(ptr, e.to_string()))
}

#[derive(Clone, Debug)]
pub enum ScenarioBody {
    Profile(Profile),
    Pooling(PoolingScenario),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: Option<String>,
    pub body: ScenarioBody,
    pub expected: Option<Value>,
}

pub fn parse_scenario_value(v: &Value) -> Result<Scenario> {
    let name = match v.get("name") {
        Some(n) => Some(string(n, "/name")?.to_string()),
        None => None,
    };
    let body = match kind(v, "")? {
        "profile" => ScenarioBody::Profile(parse_profile(v, "")?),
        "pooling" => ScenarioBody::Pooling(parse_pooling(v, "")?),
        other => return Err(schema_error("/kind", format!("unknown scenario kind {other:?}"))),
    };
    let expected = v.get("expected").cloned();
    if let Some(e) = &expected {
        if !e.is_object() {
            return Err(schema_error("/expected", "expected an object"));
        }
    }
    Ok(Scenario { name, body, expected })
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema_error("", format!("invalid JSON: {e}")))?;
    parse_scenario_value(&v)
}

// encoding

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn rows_json(rows: &[RVector]) -> Value {
    Value::Array(rows.iter().map(|r| vector_json(r)).collect())
}

pub fn matrix_json(m: &RMatrix) -> Value {
    rows_json(m.row_vecs())
}

pub fn piece_json(p: &Piece) -> Value {
    json!({
        "nonstrict": rows_json(&p.nonstrict),
        "strict": rows_json(&p.strict),
        "equalities": rows_json(&p.equalities),
    })
}

pub fn union_json(u: &PieceUnion) -> Value {
    json!({
        "kind": "pieces",
        "dim": u.dim,
        "pieces": u.pieces.iter().map(piece_json).collect::<Vec<_>>(),
    })
}

pub fn cone_json(c: &ConeDesc) -> Value {
    match c {
        ConeDesc::Orthant(n) => json!({"kind": "orthant", "dim": n}),
        ConeDesc::Trivial(n) => json!({"kind": "trivial", "dim": n}),
        ConeDesc::PolyhedralH { dim, rows } => json!({"kind": "polyhedral_h", "dim": dim, "rows": rows_json(rows)}),
        ConeDesc::PolyhedralV { dim, generators } => {
            json!({"kind": "polyhedral_v", "dim": dim, "generators": rows_json(generators)})
        }
        ConeDesc::Product(fs) => json!({"kind": "product", "factors": fs.iter().map(cone_json).collect::<Vec<_>>()}),
        ConeDesc::Lex(h, t) => json!({"kind": "lex", "head": cone_json(h), "tail": cone_json(t)}),
        ConeDesc::Pieces(u) => union_json(u),
    }
}

pub fn povs_json(s: &Povs) -> Value {
    json!({"dim": s.dim(), "cone": cone_json(s.cone())})
}

pub fn map_json(m: &PovsMap) -> Value {
    json!({
        "source": povs_json(&m.source),
        "target": povs_json(&m.target),
        "matrix": matrix_json(&m.matrix),
    })
}

pub fn affine_json(a: &AffineMap) -> Value {
    json!({"matrix": matrix_json(&a.matrix), "offset": vector_json(&a.offset)})
}

pub fn rep_json(r: &Representation) -> Value {
    json!({
        "space": cone_json(r.target.cone()),
        "matrix": matrix_json(&r.map.matrix),
        "offset": vector_json(&r.map.offset),
    })
}

pub fn domain_json(d: &Domain) -> Value {
    match d {
        Domain::Simplex(m) => json!({"kind": "simplex", "m": m}),
        Domain::Cube(n) => json!({"kind": "cube", "n": n}),
        Domain::Polytope { dim, vertices } => json!({"kind": "polytope", "dim": dim, "vertices": rows_json(vertices)}),
    }
}

pub fn profile_json(p: &Profile) -> Value {
    json!({
        "kind": "profile",
        "domain": domain_json(&p.domain),
        "individuals": p.individuals.iter().map(rep_json).collect::<Vec<_>>(),
        "social": rep_json(&p.social),
    })
}

pub fn point_json(p: &Point) -> Value {
    json!({"weights": vector_json(&p.weights)})
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({"ambient": s.ambient(), "basis": rows_json(s.basis())})
}

pub fn membership_json(m: &Membership) -> Value {
    let cert = match &m.cert {
        MemberCert::RowValues(v) => json!({"row_values": vector_json(v)}),
        MemberCert::Weights(v) => json!({"weights": vector_json(v)}),
        MemberCert::Separator(v) => json!({"separator": vector_json(v)}),
        MemberCert::Product(ms) => json!({"product": ms.iter().map(membership_json).collect::<Vec<_>>()}),
        MemberCert::Lex {
            head,
            negated_head,
            tail,
        } => json!({"lex": {
            "head": membership_json(head),
            "negated_head": membership_json(negated_head),
            "tail": tail.as_ref().map(|t| membership_json(t)),
        }}),
        MemberCert::Piece(i) => json!({"piece": i}),
    };
    json!({"member": m.member, "certificate": cert})
}

pub fn relation_json(r: &OrderRelationResult) -> Value {
    json!({
        "relation": r.relation.name(),
        "forward": membership_json(&r.forward),
        "backward": membership_json(&r.backward),
    })
}

pub fn axiom_report_json(r: &AxiomReport) -> Value {
    json!({
        "axiom": r.axiom.name(),
        "holds": r.holds,
        "witness": r.witness.as_ref().map(|w| json!({
            "x": vector_json(&w.x.weights),
            "y": vector_json(&w.y.weights),
            "individual": w.j,
        })),
    })
}

pub fn summary_json(s: &AxiomSummary) -> Value {
    json!({
        "axioms": s.reports.iter().map(axiom_report_json).collect::<Vec<_>>(),
        "dr": s.dr,
        "weak_dr": {
            "contains_positive_cone": s.weak_dr.contains_positive_cone,
            "contains_direct_sum": s.weak_dr.contains_direct_sum,
        },
    })
}

pub fn positivity_json(p: &Positivity) -> Value {
    match p {
        Positivity::NotPositive { witness } => json!({"class": p.name(), "witness": vector_json(witness)}),
        Positivity::Positive { witness } => json!({"class": p.name(), "witness": vector_json(witness)}),
        Positivity::StrictlyPositive => json!({"class": p.name()}),
    }
}

fn failure_name(f: EmbeddingFailure) -> &'static str {
    match f {
        EmbeddingFailure::NotInjective => "NotInjective",
        EmbeddingFailure::NotPositive => "NotPositive",
        EmbeddingFailure::NotReflecting => "NotReflecting",
    }
}

pub fn embedding_json(e: &EmbeddingReport) -> Value {
    json!({
        "embedding": e.embedding,
        "counterexample": e.counterexample.as_ref().map(|(f, v)| json!({
            "failure": failure_name(*f),
            "vector": vector_json(v),
        })),
    })
}

pub fn agreement_json(a: &SampleAgreement) -> Value {
    json!({
        "vertex_pairs": a.vertex_pairs,
        "mixture_pairs": a.mixture_pairs,
        "mismatch": a.mismatch.as_ref().map(|(x, y)| json!({"x": point_json(x), "y": point_json(y)})),
    })
}

pub fn synthesis_json(s: &SynthesisResult) -> Value {
    json!({
        "level": s.level.name(),
        "space": povs_json(&s.space),
        "map": map_json(&s.map),
        "social_rep": rep_json(&s.social_rep),
        "cone": union_json(&s.cone),
        "lineality": subspace_json(&s.lineality),
        "generators": s.generators.as_ref().map(|g| rows_json(g)),
        "positivity": positivity_json(&s.positivity),
        "embeddings": s.embeddings.as_ref().map(|es| es.iter().map(embedding_json).collect::<Vec<_>>()),
        "verification": agreement_json(&s.verification),
    })
}

pub fn affine_solution_json(a: &AffineSolution) -> Value {
    json!({
        "map": map_json(&a.map),
        "b": vector_json(&a.b),
        "dr_holds": a.dr_holds,
        "positivity": positivity_json(&a.positivity),
        "uniqueness_scope": subspace_json(&a.uniqueness_scope),
        "caveat": a.caveat,
    })
}

pub fn solve_json(o: &SolveOutcome) -> Value {
    match o {
        SolveOutcome::Solved(a) => json!({"status": "solved", "solution": affine_solution_json(a)}),
        SolveOutcome::NoP1(r) => json!({"status": "no_p1", "report": axiom_report_json(r)}),
    }
}

pub fn common_space_json(c: &CommonSpaceResult) -> Value {
    json!({
        "space": povs_json(&c.space),
        "reps": c.reps.iter().map(rep_json).collect::<Vec<_>>(),
        "dr_form": c.dr_form,
        "summation_verified": c.summation_verified,
    })
}

pub fn iso_json(o: &IsoOutcome) -> Value {
    match o {
        IsoOutcome::Iso { t, b } => json!({"status": "iso", "t": map_json(t), "b": vector_json(b)}),
        IsoOutcome::NotSamePreorder { witness } => json!({
            "status": "not_same_preorder",
            "witness": witness.as_ref().map(|(x, y)| json!({"x": point_json(x), "y": point_json(y)})),
        }),
        IsoOutcome::NotPervasive { first, second } => json!({
            "status": "not_pervasive",
            "first_pervasive": first,
            "second_pervasive": second,
        }),
    }
}

pub fn comparison_json(c: &SynthesisComparison) -> Value {
    json!({
        "m": map_json(&c.m),
        "source_basis": subspace_json(&c.source_basis),
        "target_basis": subspace_json(&c.target_basis),
    })
}

pub fn uniqueness_json(u: &UniquenessOutcome) -> Value {
    match u {
        UniquenessOutcome::Related { t, offsets } => json!({
            "status": "related",
            "t": map_json(t),
            "offsets": rows_json(offsets),
        }),
        UniquenessOutcome::Mismatch { agent } => json!({"status": "mismatch", "agent": agent}),
        UniquenessOutcome::NotIsomorphic(o) => json!({"status": "not_isomorphic", "iso": iso_json(o)}),
    }
}

pub fn measure_positivity_json(p: &PositivityReport) -> Value {
    json!({"positive": p.positive, "nontrivial": p.nontrivial, "complete": p.complete})
}

pub fn pooling_json(r: &PoolingReport) -> Value {
    json!({
        "axioms": summary_json(&r.axioms),
        "synthesis": synthesis_json(&r.synthesis),
        "affine": r.affine.as_ref().map(affine_solution_json),
    })
}

pub fn gfc_json(g: &GfcReport, algebra: &FiniteAlgebra) -> Value {
    json!({
        "schema": g.schema,
        "holds": g.holds,
        "violation": g.violation.as_ref().map(|v| json!({
            "premises": v.premises.iter().map(|(a, b)| json!({
                "a": algebra.names(*a),
                "b": algebra.names(*b),
            })).collect::<Vec<_>>(),
            "a": algebra.names(v.a),
            "b": algebra.names(v.b),
            "multiplicity": v.multiplicity,
        })),
    })
}

pub fn lyapunov_json(l: &LyapunovReport) -> Value {
    json!({
        "gap": rational_json(&l.gap),
        "range_points": l.range_points,
        "pairs_checked": l.pairs_checked,
        "exhaustive": l.exhaustive,
    })
}

pub fn error_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("message".into(), Value::String(e.to_string()));
    match e {
        Error::Schema { pointer, .. } => {
            m.insert("kind".into(), json!("schema"));
            m.insert("pointer".into(), json!(pointer));
        }
        Error::AxiomFailed(r) => {
            m.insert("kind".into(), json!("axiom_failed"));
            m.insert("report".into(), axiom_report_json(r));
        }
        Error::DRRequired => {
            m.insert("kind".into(), json!("dr_required"));
        }
        Error::NotZeroAtEmpty => {
            m.insert("kind".into(), json!("not_zero_at_empty"));
        }
        _ => {
            m.insert("kind".into(), json!("error"));
        }
    }
    Value::Object(m)
}
