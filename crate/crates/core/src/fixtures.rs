//! Worked examples: a three-edge banana graph with a twist and its twisting divisors, and a
//! limit linear series on two glued lines that fails the weak glueing condition. Both come as
//! JSON bundles for the CLI, and `replay_all` recomputes their expected values.

use std::collections::BTreeMap;

use crate::divisor::{AdmissibleMultidegree, MetricDivisor};
use crate::error::Result;
use crate::io;
use crate::graph::{MetricGraph, Multigraph};
use crate::p1::{FunctionSpace, MarkedComponent, Point, PointDivisor, RatFunc};
use crate::series::{MetrizedComplexSeries, PreLimitSeries};
use crate::twisting::{tight_tuple, TightTuple};

/// Two vertices v, v' joined by e1, e2, e3 of lengths 4, 2, 3, all directed v to v'.
pub fn banana_graph() -> MetricGraph {
    MetricGraph::new(
        Multigraph::from_spec(&["v", "v'"], &[("e1", "v", "v'", 4), ("e2", "v", "v'", 2), ("e3", "v", "v'", 3)])
            .expect("valid graph"),
    )
    .expect("valid graph")
}

/// (3, 0; 1, 1, 0) on the banana graph.
pub fn banana_multidegree(m: &MetricGraph) -> AdmissibleMultidegree {
    AdmissibleMultidegree::new(m, vec![3, 0], vec![1, 1, 0]).expect("valid multidegree")
}

/// Two lines glued at two points: e1 of length 2 and e2 of length 1.
pub fn glued_lines_graph() -> MetricGraph {
    MetricGraph::new(Multigraph::from_spec(&["v", "v'"], &[("e1", "v", "v'", 2), ("e2", "v", "v'", 1)]).expect("valid graph"))
        .expect("valid graph")
}

/// The glued-lines series with all its pieces.
pub struct GluedLines {
    pub m: MetricGraph,
    pub comps: Vec<MarkedComponent>,
    pub w0: AdmissibleMultidegree,
    pub tuple: TightTuple,
    pub series: PreLimitSeries,
    pub mc: MetrizedComplexSeries,
}

fn rf(s: &str) -> RatFunc {
    s.parse().expect("valid function")
}

/// On Z_v: P = 0 (for e1), Q = 1 (for e2), R = inf, with f0 = x and f1 = x(x - 1).
/// On Z_v': P' = 0, Q' = 1, R' = inf, with f0' = 1/(x - 1) and f1' = 1.
/// D_Gamma = 2v, D_v = 2R, D_v' = 0.
pub fn glued_lines() -> Result<GluedLines> {
    let m = glued_lines_graph();
    let comp = |v: &str, r: &str| {
        MarkedComponent::new(
            v,
            BTreeMap::from([("e1".to_string(), Point::int(0)), ("e2".to_string(), Point::int(1))]),
            BTreeMap::from([(r.to_string(), Point::Infinity)]),
        )
    };
    let comps = vec![comp("v", "R")?, comp("v'", "R'")?];
    let w0 = AdmissibleMultidegree::new(&m, vec![2, 0], vec![0, 0])?;
    let tuple = tight_tuple(&m, &w0)?;
    let hv = vec![rf("x"), rf("x*(x-1)")];
    let hv2 = vec![rf("1/(x-1)"), rf("1")];
    let series = PreLimitSeries::new(
        &m,
        1,
        vec![
            FunctionSpace::new(PointDivisor::point(&Point::Infinity, 2), hv.clone())?,
            FunctionSpace::new(PointDivisor::point(&Point::int(1), 1), hv2.clone())?,
        ],
        tuple.clone(),
    )?;
    let mc = MetrizedComplexSeries::new(
        &m,
        1,
        MetricDivisor::from_multidegree(&m, &w0),
        vec![PointDivisor::point(&Point::Infinity, 2), PointDivisor::zero()],
        vec![hv, hv2],
    )?;
    Ok(GluedLines { m, comps, w0, tuple, series, mc })
}

/// Bundle for the banana graph with the multidegree (3, 0; 1, 1, 0).
pub fn banana_bundle() -> serde_json::Value {
    let m = banana_graph();
    serde_json::json!({
        "graph": io::graph_json(&m),
        "multidegree": io::multidegree_json(&m, &banana_multidegree(&m)),
        "divisor": io::divisor_json(&m, &MetricDivisor::from_multidegree(&m, &banana_multidegree(&m))),
    })
}

/// Bundle for the glued lines: markings, the pre-limit series and the series on the metrized
/// complex, with a context asserting general components.
pub fn glued_lines_bundle() -> Result<serde_json::Value> {
    let ex = glued_lines()?;
    let (marked, named) = io::markings_json(&ex.comps);
    Ok(serde_json::json!({
        "graph": io::graph_json(&ex.m),
        "markings": marked,
        "named": named,
        "multidegree": io::multidegree_json(&ex.m, &ex.w0),
        "series": io::series_json(&ex.m, &ex.series, &ex.w0),
        "mc": io::mc_json(&ex.m, &ex.mc),
        "context": {"strongly_bn_general": true},
    }))
}

/// One replayed example: each entry is (what, expected, got).
#[derive(Clone, Debug, PartialEq)]
pub struct Replay {
    pub name: &'static str,
    pub entries: Vec<(String, serde_json::Value, serde_json::Value)>,
}

impl Replay {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|(_, a, b)| a == b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "example": self.name,
            "passed": self.passed(),
            "mismatches": self.entries.iter().filter(|(_, a, b)| a != b).map(|(k, a, b)| serde_json::json!({
                "what": k, "expected": a, "got": b,
            })).collect::<Vec<_>>(),
            "checked": self.entries.len(),
        })
    }
}

fn entry(what: &str, expected: serde_json::Value, got: serde_json::Value) -> (String, serde_json::Value, serde_json::Value) {
    (what.to_string(), expected, got)
}

fn replay_twist() -> Result<Replay> {
    use serde_json::json;
    let m = banana_graph();
    let w = banana_multidegree(&m);
    let w2 = crate::twisting::twist(&m, &w, 0);
    Ok(Replay {
        name: "banana twist",
        entries: vec![
            entry("twist at v", json!({"w": {"v": 2, "v'": 1}, "mu": {"e1": 2, "e2": 0, "e3": 1}}), io::multidegree_json(&m, &w2)),
            entry(
                "D_w",
                json!({"vertex": {"v": 3, "v'": 0}, "edge": [{"edge": "e1", "t": "1", "c": 1}, {"edge": "e2", "t": "1", "c": 1}]}),
                io::divisor_json(&m, &MetricDivisor::from_multidegree(&m, &w)),
            ),
            entry(
                "D_w'",
                json!({"vertex": {"v": 2, "v'": 1}, "edge": [{"edge": "e1", "t": "2", "c": 1}, {"edge": "e3", "t": "1", "c": 1}]}),
                io::divisor_json(&m, &MetricDivisor::from_multidegree(&m, &w2)),
            ),
        ],
    })
}

fn replay_twisting_divisors() -> Result<Replay> {
    use serde_json::json;
    let m = banana_graph();
    let wv = banana_multidegree(&m);
    let seq = crate::twisting::twisting_divisors(&m, &wv, 0, 0, 4)?;
    let t = tight_tuple(&m, &wv)?;
    let three = crate::twisting::partial_twist_times(&m, &wv, 0, 0, 3)?;
    Ok(Replay {
        name: "banana twisting divisors",
        entries: vec![
            entry(
                "D_0..D_4",
                json!([{}, {"e3": 1}, {"e2": 1, "e3": 1}, {"e2": 1, "e3": 1}, {"e1": 1, "e2": 2, "e3": 2}]),
                io::twisting_seq_json(&m, &seq),
            ),
            entry("critical", json!([0, 1, 3]), json!(seq.critical())),
            entry("b", json!({"v|v'": 3}), io::tuple_json(&m, &t)["b"].clone()),
            entry("w_v' is three twists of w_v", json!(true), json!(t.w[1] == three)),
            entry("tight", json!(true), json!(crate::twisting::is_tight(&m, &t)?)),
        ],
    })
}

fn replay_glued_lines(pool: &crate::p1::ConstantPool) -> Result<Replay> {
    use crate::series::{check_condition_i, check_weak_glueing, edge_data, realize};
    use crate::smoothing::{classify, ContextFlags};
    use serde_json::json;
    let ex = glued_lines()?;
    let (m, comps) = (&ex.m, &ex.comps);
    let ed = &edge_data(m, comps, &ex.series)?[0];
    let dv = crate::twisting::relative_twist_divisor(m, &ex.w0, &ex.tuple.w[0], 0)?;
    let dv2 = crate::twisting::relative_twist_divisor(m, &ex.w0, &ex.tuple.w[1], 1)?;
    let wg = check_weak_glueing(m, comps, &ex.series, pool)?;
    let ctx = ContextFlags::for_series(m, &ex.mc, true, None);
    let v = classify(m, comps, &ex.mc, &ctx, pool)?;
    Ok(Replay {
        name: "glued lines",
        entries: vec![
            entry("condition (I)", json!(true), json!(check_condition_i(m, comps, &ex.series)?.holds())),
            entry("multivanishing at v", json!([0, 2]), json!(ed.sides[0].vanishing.values)),
            entry("multivanishing at v'", json!([0, 1]), json!(ed.sides[1].vanishing.values)),
            entry("b", json!(1), json!(ex.tuple.b[0])),
            entry("D^v", json!({}), io::point_divisor_json(&realize(m, comps, 0, &dv)?)),
            entry("D^v'", json!({"1": 1}), io::point_divisor_json(&realize(m, comps, 1, &dv2)?)),
            entry("weak glueing", json!("violated"), json!(io::glue_verdict(wg.verdict))),
            entry(
                "weak glueing fails at",
                json!([["v|v'", 0]]),
                json!(wg.failed_at().iter().map(|&(te, j)| json!([io::tree_edge_name(m, te), j])).collect::<Vec<_>>()),
            ),
            entry("verdict", json!({"verdict": "NotSmoothable", "rule": "thm4.5"}), json!({"verdict": v.kind.as_str(), "rule": v.rule})),
        ],
    })
}

/// Replays the three worked examples against their embedded expected values.
pub fn replay_all(pool: &crate::p1::ConstantPool) -> Result<Vec<Replay>> {
    Ok(vec![replay_twist()?, replay_twisting_divisors()?, replay_glued_lines(pool)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_replay() {
        for r in replay_all(&crate::p1::ConstantPool::default()).unwrap() {
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn bundles_parse() {
        let b = io::Bundle::parse(&glued_lines_bundle().unwrap().to_string()).unwrap();
        let ex = glued_lines().unwrap();
        assert_eq!(b.series().unwrap().0, ex.series);
        assert_eq!(b.mc().unwrap(), ex.mc);
        assert_eq!(b.require_markings().unwrap(), ex.comps);
        let b = io::Bundle::parse(&banana_bundle().to_string()).unwrap();
        assert_eq!(b.multidegree().unwrap(), banana_multidegree(&banana_graph()));
    }
}
