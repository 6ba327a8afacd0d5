//! JSON forms of graphs, divisors, series and reports, and the single-file bundle that carries
//! them together.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::divisor::{AdmissibleMultidegree, EdgeChip, MetricDivisor, PlFunction};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Multigraph};
use crate::p1::linalg::Matrix;
use crate::p1::point::parse_rational;
use crate::p1::poly::fmt_q;
use crate::p1::{FunctionSpace, MarkedComponent, Point, PointDivisor, RatFunc};
use crate::series::{
    ConditionIReport, EdgeData, GlueStatus, GlueVerdict, MetrizedComplexSeries, PreLimitSeries, WeakGlueingReport,
};
use crate::smoothing::{ContextFlags, Verdict};
use crate::twisting::{tight_tuple, Formal, TightTuple, TwistingSeq};

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed(format!("{} must be an object", what)))
}

fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{} must be an array", what)))
}

fn int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| malformed(format!("{} must be an integer", what)))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| malformed(format!("{} must be a string", what)))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| malformed(format!("{} lacks \"{}\"", what, key)))
}

/// Positions and points may be given as strings ("1/2", "inf") or integers.
fn text(v: &Value, what: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        _ => Err(malformed(format!("{} must be a string or an integer", what))),
    }
}

fn vertex_map(m: &MetricGraph, v: Option<&Value>, what: &str) -> Result<Vec<i64>> {
    let mut out = vec![0; m.nv()];
    if let Some(v) = v {
        for (k, c) in obj(v, what)? {
            out[m.g.vertex_index(k)?] = int(c, what)?;
        }
    }
    Ok(out)
}

fn vertex_map_json(m: &MetricGraph, w: &[i64]) -> Value {
    Value::Object(m.g.vertices().iter().zip(w).map(|(k, c)| (k.clone(), json!(c))).collect())
}

// ---------------------------------------------------------------- graphs

pub fn parse_graph(v: &Value) -> Result<MetricGraph> {
    let o = obj(v, "graph")?;
    let vertices = arr(field(o, "vertices", "graph")?, "vertices")?
        .iter()
        .map(|x| string(x, "vertex id").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let mut edges = Vec::new();
    for e in arr(field(o, "edges", "graph")?, "edges")? {
        let eo = obj(e, "edge")?;
        let id = string(field(eo, "id", "edge")?, "edge id")?.to_string();
        let tail = string(field(eo, "tail", "edge")?, "tail")?.to_string();
        let head = string(field(eo, "head", "edge")?, "head")?.to_string();
        let n = match eo.get("n") {
            Some(n) => int(n, "edge length")?,
            None => 1,
        };
        edges.push((id, tail, head, n));
    }
    MetricGraph::new(Multigraph::new(vertices, edges)?)
}

pub fn graph_json(m: &MetricGraph) -> Value {
    json!({
        "vertices": m.g.vertices(),
        "edges": m.g.edges().iter().map(|e| json!({
            "id": e.id,
            "tail": m.g.vertices()[e.tail],
            "head": m.g.vertices()[e.head],
            "n": e.n,
        })).collect::<Vec<_>>(),
    })
}

/// Names a tree edge by its ends, smaller vertex first: "v|w".
pub fn tree_edge_name(m: &MetricGraph, te: usize) -> String {
    let t = &m.tree.edges[te];
    format!("{}|{}", m.g.vertices()[t.a], m.g.vertices()[t.b])
}

/// A tree edge from "v|w" (either order) or from the id of any edge of G over it.
pub fn parse_tree_edge(m: &MetricGraph, s: &str) -> Result<usize> {
    m.require_multitree()?;
    if let Some((a, b)) = s.split_once('|') {
        let (ia, ib) = (m.g.vertex_index(a)?, m.g.vertex_index(b)?);
        return m.tree.between(ia, ib).ok_or_else(|| Error::UnknownId(format!("{} and {} are not adjacent", a, b)));
    }
    let e = m.g.edge_index(s)?;
    Ok(m.tree.edge_to_tree[e])
}

// ---------------------------------------------------------------- divisors on the graph

pub fn parse_divisor(m: &MetricGraph, v: &Value) -> Result<MetricDivisor> {
    let o = obj(v, "divisor")?;
    let vertex = vertex_map(m, o.get("vertex"), "divisor vertex part")?;
    let mut chips = Vec::new();
    if let Some(es) = o.get("edge") {
        for c in arr(es, "divisor edge part")? {
            let co = obj(c, "edge chip")?;
            let edge = m.g.edge_index(string(field(co, "edge", "edge chip")?, "edge id")?)?;
            let t = parse_rational(&text(field(co, "t", "edge chip")?, "position")?)?;
            let c = match co.get("c") {
                Some(c) => int(c, "chip coefficient")?,
                None => 1,
            };
            chips.push(EdgeChip { edge, t, c });
        }
    }
    MetricDivisor::new(m, vertex, chips)
}

pub fn divisor_json(m: &MetricGraph, d: &MetricDivisor) -> Value {
    json!({
        "vertex": vertex_map_json(m, &d.vertex),
        "edge": d.edge.iter().map(|c| json!({"edge": m.edge(c.edge).id, "t": fmt_q(&c.t), "c": c.c})).collect::<Vec<_>>(),
    })
}

/// A divisor on the subdivision given as {point name: coefficient}, names as in
/// `SubdividedGraph::name` ("v", "e1#2").
pub fn sub_divisor_json(m: &MetricGraph, d: &[i64]) -> Value {
    Value::Object(
        d.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(x, c)| (m.sub.name(&m.g, x), json!(c)))
            .collect(),
    )
}

pub fn pl_function_json(m: &MetricGraph, f: &PlFunction) -> Value {
    Value::Object(f.values.iter().enumerate().map(|(x, c)| (m.sub.name(&m.g, x), json!(c))).collect())
}

pub fn parse_multidegree(m: &MetricGraph, v: &Value) -> Result<AdmissibleMultidegree> {
    let o = obj(v, "multidegree")?;
    let w = vertex_map(m, o.get("w"), "multidegree w")?;
    let mut mu = vec![0; m.ne()];
    if let Some(x) = o.get("mu") {
        for (k, c) in obj(x, "multidegree mu")? {
            mu[m.g.edge_index(k)?] = int(c, "mu")?;
        }
    }
    AdmissibleMultidegree::new(m, w, mu)
}

pub fn multidegree_json(m: &MetricGraph, w: &AdmissibleMultidegree) -> Value {
    json!({
        "w": vertex_map_json(m, &w.w),
        "mu": Value::Object(m.g.edges().iter().zip(&w.mu).map(|(e, c)| (e.id.clone(), json!(c))).collect()),
    })
}

pub fn tuple_json(m: &MetricGraph, t: &TightTuple) -> Value {
    json!({
        "w": Value::Object(m.g.vertices().iter().zip(&t.w).map(|(v, w)| (v.clone(), multidegree_json(m, w))).collect()),
        "b": Value::Object((0..m.tree.edges.len()).map(|te| (tree_edge_name(m, te), json!(t.b[te]))).collect()),
    })
}

/// A formal combination of marked points, keyed by edge id.
pub fn formal_json(m: &MetricGraph, f: &Formal) -> Value {
    Value::Object(f.iter().filter(|(_, k)| **k != 0).map(|(e, k)| (m.edge(*e).id.clone(), json!(k))).collect())
}

pub fn twisting_seq_json(m: &MetricGraph, s: &TwistingSeq) -> Value {
    Value::Array(s.divs.iter().map(|d| formal_json(m, d)).collect())
}

// ---------------------------------------------------------------- the projective line

/// {"0": 1, "inf": 2} with an optional "residual": {"zeros": poly, "poles": poly} for points
/// that are not rational.
pub fn parse_point_divisor(v: &Value) -> Result<PointDivisor> {
    let mut d = PointDivisor::zero();
    for (k, c) in obj(v, "point divisor")? {
        if k == "residual" {
            let r = obj(c, "residual")?;
            let poly = |key: &str| -> Result<crate::p1::Poly> {
                match r.get(key) {
                    None => Ok(crate::p1::Poly::one()),
                    Some(p) => {
                        let f: RatFunc = string(p, key)?.parse()?;
                        if !f.den().is_constant() {
                            return Err(malformed(format!("residual {} must be a polynomial", key)));
                        }
                        Ok(f.num().monic())
                    }
                }
            };
            d = d.add(&PointDivisor::from_parts(poly("zeros")?, poly("poles")?, 0));
        } else {
            let p: Point = k.parse()?;
            d = d.add(&PointDivisor::point(&p, int(c, "point coefficient")?));
        }
    }
    Ok(d)
}

pub fn point_divisor_json(d: &PointDivisor) -> Value {
    let (terms, zeros, poles) = d.terms();
    let mut o: Map<String, Value> = terms.iter().map(|(p, k)| (p.to_string(), json!(k))).collect();
    if !zeros.is_constant() || !poles.is_constant() {
        o.insert("residual".into(), json!({"zeros": zeros.to_string(), "poles": poles.to_string()}));
    }
    Value::Object(o)
}

/// {"v": {"e1": "0", "e2": "1"}} plus optional named points {"v": {"R": "inf"}}.
pub fn parse_markings(m: &MetricGraph, marked: &Value, named: Option<&Value>) -> Result<Vec<MarkedComponent>> {
    let mo = obj(marked, "markings")?;
    let no = named.map(|n| obj(n, "named points")).transpose()?;
    for k in mo.keys().chain(no.iter().flat_map(|n| n.keys())) {
        m.g.vertex_index(k)?;
    }
    let points = |x: Option<&Value>, what: &str| -> Result<BTreeMap<String, Point>> {
        let mut out = BTreeMap::new();
        if let Some(x) = x {
            for (k, p) in obj(x, what)? {
                out.insert(k.clone(), text(p, what)?.parse()?);
            }
        }
        Ok(out)
    };
    let mut comps = Vec::new();
    for v in m.g.vertices() {
        let marked = points(mo.get(v), "markings")?;
        let named = points(no.and_then(|n| n.get(v)), "named points")?;
        comps.push(MarkedComponent::new(v.clone(), marked, named)?);
    }
    crate::series::check_markings(m, &comps)?;
    Ok(comps)
}

pub fn markings_json(comps: &[MarkedComponent]) -> (Value, Value) {
    let pts = |x: &BTreeMap<String, Point>| Value::Object(x.iter().map(|(k, p)| (k.clone(), json!(p.to_string()))).collect());
    let marked = Value::Object(comps.iter().map(|c| (c.vertex.clone(), pts(&c.marked))).collect());
    let named = Value::Object(comps.iter().filter(|c| !c.named.is_empty()).map(|c| (c.vertex.clone(), pts(&c.named))).collect());
    (marked, named)
}

fn functions(v: &Value, what: &str) -> Result<Vec<RatFunc>> {
    arr(v, what)?.iter().map(|f| string(f, what)?.parse()).collect()
}

fn functions_json(fs: &[RatFunc]) -> Value {
    Value::Array(fs.iter().map(|f| json!(f.to_string())).collect())
}

fn matrix_json(a: &Matrix) -> Value {
    Value::Array(a.iter().map(|r| Value::Array(r.iter().map(|x| json!(fmt_q(x))).collect())).collect())
}

// ---------------------------------------------------------------- series

/// {"rank": r, "w0": multidegree, "components": {"v": {"divisor": {...}, "basis": [...]}}}.
/// The tight tuple is the one computed from w0; a "tuple" entry, if present, must agree with it.
pub fn parse_series(m: &MetricGraph, v: &Value) -> Result<(PreLimitSeries, AdmissibleMultidegree)> {
    let o = obj(v, "series")?;
    let rank = int(field(o, "rank", "series")?, "rank")?;
    if rank < 0 {
        return Err(malformed("rank must be nonnegative"));
    }
    let w0 = parse_multidegree(m, field(o, "w0", "series")?)?;
    let tuple = tight_tuple(m, &w0)?;
    if let Some(t) = o.get("tuple") {
        let tw = obj(field(obj(t, "tuple")?, "w", "tuple")?, "tuple w")?;
        for (k, w) in tw {
            if parse_multidegree(m, w)? != tuple.w[m.g.vertex_index(k)?] {
                return Err(malformed(format!("tuple entry at {} is not the tight tuple of w0", k)));
            }
        }
    }
    let comps = obj(field(o, "components", "series")?, "components")?;
    let mut spaces = Vec::new();
    for vid in m.g.vertices() {
        let c = obj(comps.get(vid).ok_or_else(|| malformed(format!("no component for {}", vid)))?, "component")?;
        let d = c.get("divisor").or_else(|| c.get("twist_divisor")).ok_or_else(|| malformed(format!("component {} lacks \"divisor\"", vid)))?;
        let d = parse_point_divisor(d)?;
        let basis = functions(field(c, "basis", "component")?, "basis")?;
        spaces.push(FunctionSpace::new(d, basis).map_err(|e| match e {
            Error::NotSection(msg) => Error::NotSection(format!("at {}: {}", vid, msg)),
            other => other,
        })?);
    }
    Ok((PreLimitSeries::new(m, rank as usize, spaces, tuple)?, w0))
}

pub fn series_json(m: &MetricGraph, s: &PreLimitSeries, w0: &AdmissibleMultidegree) -> Value {
    json!({
        "rank": s.rank,
        "w0": multidegree_json(m, w0),
        "tuple": tuple_json(m, &s.tuple),
        "components": Value::Object(m.g.vertices().iter().zip(&s.spaces).map(|(v, sp)| (v.clone(), json!({
            "divisor": point_divisor_json(sp.divisor()),
            "basis": functions_json(sp.basis()),
        }))).collect()),
    })
}

/// {"rank": r, "gamma": divisor, "parts": {"v": point divisor}, "spaces": {"v": [...]}}.
pub fn parse_mc(m: &MetricGraph, v: &Value) -> Result<MetrizedComplexSeries> {
    let o = obj(v, "metrized complex series")?;
    let rank = int(field(o, "rank", "mc")?, "rank")?;
    if rank < 0 {
        return Err(malformed("rank must be nonnegative"));
    }
    let gamma = parse_divisor(m, field(o, "gamma", "mc")?)?;
    let po = obj(field(o, "parts", "mc")?, "parts")?;
    let so = obj(field(o, "spaces", "mc")?, "spaces")?;
    let mut parts = Vec::new();
    let mut spaces = Vec::new();
    for vid in m.g.vertices() {
        parts.push(match po.get(vid) {
            Some(d) => parse_point_divisor(d)?,
            None => PointDivisor::zero(),
        });
        spaces.push(functions(so.get(vid).ok_or_else(|| malformed(format!("no space for {}", vid)))?, "space")?);
    }
    MetrizedComplexSeries::new(m, rank as usize, gamma, parts, spaces)
}

pub fn mc_json(m: &MetricGraph, mc: &MetrizedComplexSeries) -> Value {
    json!({
        "rank": mc.rank,
        "gamma": divisor_json(m, &mc.gamma),
        "parts": Value::Object(m.g.vertices().iter().zip(&mc.parts).map(|(v, d)| (v.clone(), point_divisor_json(d))).collect()),
        "spaces": Value::Object(m.g.vertices().iter().zip(&mc.spaces).map(|(v, h)| (v.clone(), functions_json(h))).collect()),
    })
}

/// {"strongly_bn_general": bool, "d_prime": int}; genus, degree and rank come from the series.
pub fn parse_context(m: &MetricGraph, mc: &MetrizedComplexSeries, v: Option<&Value>) -> Result<ContextFlags> {
    let mut sbn = false;
    let mut dp = None;
    if let Some(v) = v {
        let o = obj(v, "context")?;
        if let Some(b) = o.get("strongly_bn_general") {
            sbn = b.as_bool().ok_or_else(|| malformed("strongly_bn_general must be a boolean"))?;
        }
        if let Some(d) = o.get("d_prime") {
            dp = Some(int(d, "d_prime")?);
        }
    }
    Ok(ContextFlags::for_series(m, mc, sbn, dp))
}

// ---------------------------------------------------------------- reports

pub fn edge_data_json(m: &MetricGraph, ed: &EdgeData) -> Value {
    json!({
        "edge": tree_edge_name(m, ed.tree_edge),
        "b": ed.b,
        "sides": ed.sides.iter().map(|s| json!({
            "vertex": m.g.vertices()[s.vertex],
            "twisting_divisors": twisting_seq_json(m, &s.seq),
            "critical": s.seq.critical(),
            "multivanishing": s.vanishing.values,
            "index": s.vanishing.index,
        })).collect::<Vec<_>>(),
    })
}

pub fn condition_i_json(m: &MetricGraph, rep: &ConditionIReport) -> Value {
    json!({
        "holds": rep.holds(),
        "edges": rep.edges.iter().map(|e| edge_data_json(m, e)).collect::<Vec<_>>(),
        "failures": rep.failures.iter().map(|f| json!({
            "edge": tree_edge_name(m, f.tree_edge),
            "vertex": m.g.vertices()[f.vertex],
            "l": f.l,
            "j": f.j,
            "needed": f.needed,
            "found": f.found,
        })).collect::<Vec<_>>(),
    })
}

fn glue_status(s: GlueStatus) -> &'static str {
    match s {
        GlueStatus::Pass => "pass",
        GlueStatus::Fail => "fail",
        GlueStatus::Uncertified => "uncertified",
    }
}

pub fn glue_verdict(v: GlueVerdict) -> &'static str {
    match v {
        GlueVerdict::Satisfied => "satisfied",
        GlueVerdict::Violated => "violated",
        GlueVerdict::Uncertified => "uncertified",
    }
}

pub fn weak_glueing_json(m: &MetricGraph, rep: &WeakGlueingReport) -> Value {
    json!({
        "verdict": glue_verdict(rep.verdict),
        "checks": rep.checks.iter().map(|c| json!({
            "edge": tree_edge_name(m, c.tree_edge),
            "j": c.j,
            "g": c.g,
            "points": c.edges.iter().map(|&e| m.edge(e).id.clone()).collect::<Vec<_>>(),
            "status": glue_status(c.status),
            "patterns": c.patterns.iter().map(|p| p.iter().map(|s| s.iter().cloned().collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "witness": c.witness.as_ref().map(|w| w.iter().map(matrix_json).collect::<Vec<_>>()),
        })).collect::<Vec<_>>(),
    })
}

pub fn verdict_json(m: &MetricGraph, v: &Verdict) -> Value {
    json!({
        "verdict": v.kind.as_str(),
        "rule": v.rule,
        "detail": {
            "weak_glueing": weak_glueing_json(m, &v.glueing),
            "rho": v.rho,
            "max_dprime": v.max_dprime,
            "d_prime": v.d_prime,
            "residues_distinct": v.residues_distinct,
            "unmet": v.unmet,
        },
    })
}

// ---------------------------------------------------------------- bundles

/// One JSON document with a "graph" and whatever else a command needs: "markings", "named",
/// "divisor", "divisor2", "multidegree", "series", "mc", "context".
#[derive(Clone, Debug)]
pub struct Bundle {
    pub raw: Map<String, Value>,
    pub graph: MetricGraph,
}

impl Bundle {
    pub fn parse(text: &str) -> Result<Bundle> {
        let v: Value = serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {}", e)))?;
        let raw = obj(&v, "bundle")?.clone();
        let graph = parse_graph(field(&raw, "graph", "bundle")?)?;
        Ok(Bundle { raw, graph })
    }

    pub fn get(&self, key: &str) -> Result<&Value> {
        field(&self.raw, key, "bundle")
    }

    pub fn markings(&self) -> Result<Option<Vec<MarkedComponent>>> {
        match self.raw.get("markings") {
            None => Ok(None),
            Some(mk) => parse_markings(&self.graph, mk, self.raw.get("named")).map(Some),
        }
    }

    pub fn require_markings(&self) -> Result<Vec<MarkedComponent>> {
        self.markings()?.ok_or_else(|| malformed("bundle lacks \"markings\""))
    }

    pub fn divisor(&self, key: &str) -> Result<MetricDivisor> {
        parse_divisor(&self.graph, self.get(key)?)
    }

    pub fn multidegree(&self) -> Result<AdmissibleMultidegree> {
        parse_multidegree(&self.graph, self.get("multidegree")?)
    }

    pub fn series(&self) -> Result<(PreLimitSeries, AdmissibleMultidegree)> {
        parse_series(&self.graph, self.get("series")?)
    }

    pub fn mc(&self) -> Result<MetrizedComplexSeries> {
        parse_mc(&self.graph, self.get("mc")?)
    }

    pub fn context(&self, mc: &MetrizedComplexSeries) -> Result<ContextFlags> {
        parse_context(&self.graph, mc, self.raw.get("context"))
    }
}
