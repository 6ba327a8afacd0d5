//! Lifting divisors on chains of loops to pre-limit linear series that satisfy weak glueing:
//! the rank-one construction, the construction for vertex avoiding divisors, and the routing
//! between them by rank.

use std::collections::BTreeMap;

use crate::divisor::{canonical_divisor, dhar_reduce, linearly_equivalent, AdmissibleMultidegree, MetricDivisor, PlFunction, RankSolver};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::p1::space::{construct_function, ConstructOptions};
use crate::p1::{ConstantPool, FunctionSpace, MarkedComponent, Point, PointDivisor, Predicate, RatFunc};
use crate::series::{check_condition_i, check_weak_glueing, marked_point, realize, GlueVerdict, PreLimitSeries};
use crate::smoothing::{check_condition_ii, MAX_PARALLEL};
use crate::twisting::{formal_sub, slope_divisor, tight_tuple, twisting_divisors, Formal, TightTuple};

/// Marked points 0, 1, 2, ... on each component, in edge order.
pub fn default_markings(m: &MetricGraph) -> Vec<MarkedComponent> {
    (0..m.nv())
        .map(|v| {
            let marked = m
                .g
                .incident(v)
                .into_iter()
                .enumerate()
                .map(|(k, e)| (m.edge(e).id.clone(), Point::int(k as i64)))
                .collect();
            MarkedComponent::new(m.g.vertices()[v].clone(), marked, BTreeMap::new()).expect("distinct points")
        })
        .collect()
}

fn require_chain(m: &MetricGraph, most: usize) -> Result<Vec<usize>> {
    let order = m.tree.chain_order(m.nv())?;
    if let Some(t) = m.tree.edges.iter().find(|t| t.fibre.len() > most) {
        return Err(Error::Hypotheses(format!(
            "{} edges join {} and {}, at most {} allowed",
            t.fibre.len(),
            m.g.vertices()[t.a],
            m.g.vertices()[t.b],
            most
        )));
    }
    Ok(order)
}

/// Tree edges before and after position i of the chain.
fn chain_edges(m: &MetricGraph, order: &[usize], i: usize) -> (Option<usize>, Option<usize>) {
    let left = (i > 0).then(|| m.tree.between(order[i - 1], order[i]).expect("chain neighbours"));
    let right = (i + 1 < order.len()).then(|| m.tree.between(order[i], order[i + 1]).expect("chain neighbours"));
    (left, right)
}

/// D^{te, v}_{b} from w_v, with b the twist count of te.
fn twisting_at_b(m: &MetricGraph, tuple: &TightTuple, te: usize, v: usize) -> Result<Formal> {
    let b = tuple.b[te] as usize;
    Ok(twisting_divisors(m, &tuple.w[v], te, v, b)?.divs[b].clone())
}

fn fibre_orders(m: &MetricGraph, comps: &[MarkedComponent], v: usize, te: usize, f: &Formal, sign: i64) -> Result<BTreeMap<Point, i64>> {
    m.tree.edges[te]
        .fibre
        .iter()
        .map(|&e| Ok((marked_point(m, comps, v, e)?, sign * f.get(&e).copied().unwrap_or(0))))
        .collect()
}

fn fibre_points(m: &MetricGraph, comps: &[MarkedComponent], v: usize, te: usize) -> Result<Vec<Point>> {
    m.tree.edges[te].fibre.iter().map(|&e| marked_point(m, comps, v, e)).collect()
}

/// A line bundle on one component: `base` plus generic filler points up to degree `d`.
struct Bundle {
    divisor: PointDivisor,
    fillers: Vec<Point>,
}

fn bundle(comp: &MarkedComponent, base: PointDivisor, d: i64, pool: &ConstantPool) -> Result<Bundle> {
    let count = d - base.degree();
    if count < 0 {
        return Err(Error::Inconsistent(format!(
            "prescribed part of degree {} exceeds the degree {} at {}",
            base.degree(),
            d,
            comp.vertex
        )));
    }
    let avoid: Vec<_> = comp
        .all_points()
        .into_iter()
        .filter_map(|p| match p {
            Point::Finite(a) => Some(a),
            Point::Infinity => None,
        })
        .collect();
    let fillers: Vec<Point> = pool.take_avoiding(0, count as usize, &avoid).into_iter().map(Point::Finite).collect();
    let mut divisor = base;
    for p in &fillers {
        divisor = divisor.add(&PointDivisor::point(p, 1));
    }
    Ok(Bundle { divisor, fillers })
}

/// A section of the bundle with the given orders at marked points. Excess zeros are balanced by
/// simple poles at filler points, excess poles by generic zeros.
fn section(
    comp: &MarkedComponent,
    b: &Bundle,
    mut orders: BTreeMap<Point, i64>,
    predicates: &[Predicate],
    nonconstant: bool,
    pool: &ConstantPool,
    offset: usize,
) -> Result<RatFunc> {
    let total: i64 = orders.values().sum();
    let mut poles = total.max(0) as usize;
    if nonconstant && poles == 0 && orders.values().all(|&k| k == 0) {
        poles = 1;
    }
    if poles > b.fillers.len() {
        return Err(Error::Inconsistent(format!("not enough room for poles at {}", comp.vertex)));
    }
    for p in &b.fillers[..poles] {
        orders.insert(p.clone(), -1);
    }
    orders.entry(Point::Infinity).or_insert(0);
    let opts = ConstructOptions { allow_free_poles: false, avoid: [comp.all_points(), b.fillers.clone()].concat(), pool_offset: offset };
    let f = construct_function(&orders, predicates, pool, &opts)?;
    Ok(f)
}

fn verify(m: &MetricGraph, comps: &[MarkedComponent], s: &PreLimitSeries, pool: &ConstantPool) -> Result<()> {
    let rep = check_condition_i(m, comps, s)?;
    if !rep.holds() {
        return Err(Error::Inconsistent("constructed series fails condition (I)".into()));
    }
    let wg = check_weak_glueing(m, comps, s, pool)?;
    if wg.verdict != GlueVerdict::Satisfied {
        return Err(Error::Inconsistent(format!("constructed series has weak glueing verdict {:?}", wg.verdict)));
    }
    Ok(())
}

/// Output of [`lift_rank_one`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankOneLift {
    /// A pre-limit series (with f^0 = 1 on every component) satisfying weak glueing.
    Series { series: PreLimitSeries, comps: Vec<MarkedComponent>, w0: AdmissibleMultidegree },
    /// deg D > 2g - 2: any lift of D has the same rank by Riemann-Roch on both sides.
    RiemannRoch { degree: i64, genus: i64 },
}

/// The d' used by the rank-one construction: min(2g - 2, g + 1).
pub fn rank_one_dprime(g: i64) -> i64 {
    (2 * g - 2).min(g + 1)
}

/// Rank-one series on a chain lifting an integral divisor of rank 1.
pub fn lift_rank_one(
    m: &MetricGraph,
    d: &MetricDivisor,
    comps: Option<&[MarkedComponent]>,
    pool: &ConstantPool,
) -> Result<RankOneLift> {
    let order = require_chain(m, MAX_PARALLEL)?;
    let sub = d.to_sub(m)?;
    let r = RankSolver::new(&m.sub).rank(&sub)?;
    if r != 1 {
        return Err(Error::RankMismatch(r, 1));
    }
    let g = m.genus();
    let deg = d.degree();
    if deg > 2 * g - 2 {
        return Ok(RankOneLift::RiemannRoch { degree: deg, genus: g });
    }
    let dp = rank_one_dprime(g);
    if !check_condition_ii(m, dp)? {
        return Err(Error::Hypotheses(format!("edge lengths do not allow d' = {}", dp)));
    }
    if deg > dp {
        return Err(Error::Hypotheses(format!("degree {} exceeds d' = {}", deg, dp)));
    }
    let comps: Vec<MarkedComponent> = comps.map(|c| c.to_vec()).unwrap_or_else(|| default_markings(m));
    let (red, _) = dhar_reduce(&m.sub, &sub, order[0]);
    let w0 = AdmissibleMultidegree::from_sub(m, &red)?;
    let tuple = tight_tuple(m, &w0)?;
    let mut spaces = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let (left, right) = chain_edges(m, &order, i);
        let bl = left.map_or(0, |t| tuple.b[t]);
        let br = right.map_or(0, |t| tuple.b[t]);
        let mut orders = BTreeMap::new();
        let mut predicates = Vec::new();
        let mut base = PointDivisor::zero();
        for (side, te, b) in [(0, left, bl), (1, right, br)] {
            let Some(te) = te else { continue };
            if b == 0 {
                let pts = fibre_points(m, &comps, v, te)?;
                predicates.push(Predicate::NonVanishing(pts.clone()));
                predicates.push(Predicate::DistinctValues(pts));
                continue;
            }
            let db = twisting_at_b(m, &tuple, te, v)?;
            let sign = if side == 0 && br > 0 { -1 } else { 1 };
            if side == 0 && br > 0 {
                base = realize(m, &comps, v, &db)?;
            }
            orders.extend(fibre_orders(m, &comps, v, te, &db, sign)?);
        }
        let b = bundle(&comps[v], base, tuple.w[v].w[v], pool)?;
        let f = section(&comps[v], &b, orders, &predicates, true, pool, 0)?;
        spaces.push(FunctionSpace::new(b.divisor, vec![RatFunc::one(), f])?);
    }
    let series = PreLimitSeries::new(m, 1, reorder(spaces, &order), tuple)?;
    verify(m, &comps, &series, pool)?;
    Ok(RankOneLift::Series { series, comps, w0 })
}

/// Spaces built in chain order, put back in vertex order.
fn reorder(spaces: Vec<FunctionSpace>, order: &[usize]) -> Vec<FunctionSpace> {
    let mut out: Vec<Option<FunctionSpace>> = vec![None; spaces.len()];
    for (sp, &v) in spaces.into_iter().zip(order) {
        out[v] = Some(sp);
    }
    out.into_iter().map(|s| s.expect("every vertex once")).collect()
}

/// The divisor D_j ~ D with D_j - j v0 - (r - j) vm effective, found by reducing
/// D - (r - j) vm at v0, and f with D_j = D + div(f).
pub fn compute_dj(m: &MetricGraph, d: &[i64], j: i64, r: i64, v0: usize, vm: usize) -> Result<(Vec<i64>, PlFunction)> {
    let mut e = d.to_vec();
    e[vm] -= r - j;
    let (mut red, f) = dhar_reduce(&m.sub, &e, v0);
    red[vm] += r - j;
    let mut need = red.clone();
    need[v0] -= j;
    need[vm] -= r - j;
    if need.iter().any(|&x| x < 0) {
        return Err(Error::NoEffective);
    }
    Ok((red, f))
}

/// Indices found for the proof identities at one vertex of the chain and one j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidingIndices {
    /// m with D_i^j = D_b - D_m on the left fibre (None at the first vertex).
    pub m: Option<usize>,
    /// n with E_i^j = D_n on the right fibre (None at the last vertex).
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexAvoidingLift {
    pub series: PreLimitSeries,
    pub comps: Vec<MarkedComponent>,
    pub w0: AdmissibleMultidegree,
    /// D_j and the witness f_j with D_j = D + div(f_j), for j = 0..=r.
    pub witnesses: Vec<(Vec<i64>, PlFunction)>,
    /// indices[i][j] in chain order.
    pub indices: Vec<Vec<AvoidingIndices>>,
    pub order: Vec<usize>,
}

/// All indices k <= top with `target` = D_k of the sequence.
fn matching(divs: &[Formal], top: usize, target: &Formal) -> Vec<usize> {
    (0..=top).filter(|&k| &divs[k] == target).collect()
}

/// Rank-r series on a chain with at most two edges per pair, lifting a vertex avoiding divisor.
pub fn lift_vertex_avoiding(
    m: &MetricGraph,
    d: &MetricDivisor,
    r: i64,
    comps: Option<&[MarkedComponent]>,
    pool: &ConstantPool,
) -> Result<VertexAvoidingLift> {
    let order = require_chain(m, 2)?;
    let sub = d.to_sub(m)?;
    let rank = RankSolver::new(&m.sub).rank(&sub)?;
    if rank != r {
        return Err(Error::RankMismatch(rank, r));
    }
    if r < 0 {
        return Err(Error::NoEffective);
    }
    let comps: Vec<MarkedComponent> = comps.map(|c| c.to_vec()).unwrap_or_else(|| default_markings(m));
    let (v0, vm) = (order[0], *order.last().unwrap());
    let (red, _) = dhar_reduce(&m.sub, &sub, v0);
    let w0 = AdmissibleMultidegree::from_sub(m, &red)?;
    let tuple = tight_tuple(m, &w0)?;
    let witnesses = (0..=r).map(|j| compute_dj(m, &red, j, r, v0, vm)).collect::<Result<Vec<_>>>()?;
    let nl = order.len();
    // D_i^j (left) and E_i^j (right) as formal divisors, in chain order
    let mut left_div: Vec<Vec<Formal>> = vec![Vec::new(); nl];
    let mut right_div: Vec<Vec<Formal>> = vec![Vec::new(); nl];
    let mut indices: Vec<Vec<AvoidingIndices>> = vec![Vec::new(); nl];
    let mut right_cands: Vec<Vec<Vec<usize>>> = vec![Vec::new(); nl];
    for (i, &v) in order.iter().enumerate() {
        let (left, right) = chain_edges(m, &order, i);
        for (_, f) in &witnesses {
            let slopes = slope_divisor(m, f, v);
            let mut idx = AvoidingIndices { m: None, n: None };
            if let Some(te) = left {
                let dij: Formal = slopes.iter().filter(|(e, _)| m.tree.edge_to_tree[**e] == te).map(|(e, s)| (*e, *s)).collect();
                let b = tuple.b[te] as usize;
                let seq = twisting_divisors(m, &tuple.w[v], te, v, b + 1)?;
                let cands: Vec<usize> = (0..=b).filter(|&k| formal_sub(&seq.divs[b], &seq.divs[k]) == dij).collect();
                let Some(&mm) = cands.last() else {
                    return Err(Error::NotVertexAvoiding(format!("D_i^j at {} is not D_b - D_m", m.g.vertices()[v])));
                };
                idx.m = Some(mm);
                left_div[i].push(dij);
            }
            if let Some(te) = right {
                let eij: Formal = slopes.iter().filter(|(e, _)| m.tree.edge_to_tree[**e] == te).map(|(e, s)| (*e, -*s)).collect();
                let b = tuple.b[te] as usize;
                let seq = twisting_divisors(m, &tuple.w[v], te, v, b + 1)?;
                let cands = matching(&seq.divs, b, &eij);
                let Some(&nn) = cands.last() else {
                    return Err(Error::NotVertexAvoiding(format!("E_i^j at {} is not a twisting divisor", m.g.vertices()[v])));
                };
                idx.n = Some(nn);
                right_cands[i].push(cands);
                right_div[i].push(eij);
            }
            indices[i].push(idx);
        }
    }
    for i in 0..nl {
        for j in 0..=r as usize {
            for k in 0..j {
                if i > 0 && left_div[i][j] == left_div[i][k] {
                    return Err(Error::NotVertexAvoiding(format!("D_i^j repeat at {}", m.g.vertices()[order[i]])));
                }
                if i + 1 < nl && right_div[i][j] == right_div[i][k] {
                    return Err(Error::NotVertexAvoiding(format!("E_i^j repeat at {}", m.g.vertices()[order[i]])));
                }
            }
        }
        if i + 1 < nl {
            let te = chain_edges(m, &order, i).1.unwrap();
            let b = tuple.b[te] as usize;
            for j in 0..=r as usize {
                // m_{i+1}^j is pinned by D_{i+1}^j; some admissible n must complete it to b
                let next_cands: Vec<usize> = {
                    let v = order[i + 1];
                    let seq = twisting_divisors(m, &tuple.w[v], te, v, b + 1)?;
                    (0..=b).filter(|&k| formal_sub(&seq.divs[b], &seq.divs[k]) == left_div[i + 1][j]).collect()
                };
                let ok = right_cands[i][j].iter().any(|n| next_cands.iter().any(|mm| n + mm == b));
                if !ok {
                    return Err(Error::NotVertexAvoiding(format!(
                        "n + m = b fails between {} and {}",
                        m.g.vertices()[order[i]],
                        m.g.vertices()[order[i + 1]]
                    )));
                }
            }
        }
    }
    let mut spaces = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let (left, right) = chain_edges(m, &order, i);
        let base = match left {
            Some(te) => realize(m, &comps, v, &twisting_at_b(m, &tuple, te, v)?)?,
            None => PointDivisor::zero(),
        };
        let b = bundle(&comps[v], base, tuple.w[v].w[v], pool)?;
        let mut fs = Vec::new();
        for j in 0..=r as usize {
            let mut orders = BTreeMap::new();
            if let Some(te) = left {
                orders.extend(fibre_orders(m, &comps, v, te, &left_div[i][j], -1)?);
            }
            if let Some(te) = right {
                orders.extend(fibre_orders(m, &comps, v, te, &right_div[i][j], 1)?);
            }
            fs.push(section(&comps[v], &b, orders, &[], false, pool, 8 * j)?);
        }
        spaces.push(FunctionSpace::new(b.divisor, fs)?);
    }
    let series = PreLimitSeries::new(m, r as usize, reorder(spaces, &order), tuple)?;
    verify(m, &comps, &series, pool)?;
    Ok(VertexAvoidingLift { series, comps, w0, witnesses, indices, order })
}

/// How a divisor is lifted, by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftPlan {
    /// Rank at most 0 needs no construction.
    Trivial { rank: i64 },
    /// Rank one: the rank-one construction applies to D.
    Direct,
    /// r(K - D) <= 1: Riemann-Roch transfers a lift of K - D (given on the subdivided graph,
    /// reduced at the base vertex) to D. Only `dual_rank` = 1 needs a construction.
    Dual { rank: i64, dual_rank: i64, dual: Vec<i64> },
    /// g = 5, r = 2, deg 4: D ~ 2D' with r(D') = 1; D' lives on the graph with doubled lengths.
    Halving { half: Vec<i64> },
    Inconclusive { rank: i64, reason: String },
}

/// Lengths are multiplied to make D integral; the plan refers to that scaled graph.
pub fn lift_dispatch(m: &MetricGraph, d: &MetricDivisor) -> Result<(MetricGraph, LiftPlan)> {
    let k = d.denominator_lcm();
    let (ms, ds) = if k == 1 { (m.clone(), d.clone()) } else { (m.scaled(k), d.scaled(m, k)) };
    let sub = ds.to_sub(&ms)?;
    let mut solver = RankSolver::new(&ms.sub);
    let r = solver.rank(&sub)?;
    let g = ms.genus();
    let deg = ds.degree();
    if r <= 0 {
        return Ok((ms, LiftPlan::Trivial { rank: r }));
    }
    if r == 1 {
        return Ok((ms, LiftPlan::Direct));
    }
    let kd: Vec<i64> = canonical_divisor(&ms.sub).iter().zip(&sub).map(|(a, b)| a - b).collect();
    let rk = solver.rank(&kd)?;
    if rk <= 1 {
        let (dual, _) = dhar_reduce(&ms.sub, &kd, 0);
        return Ok((ms, LiftPlan::Dual { rank: r, dual_rank: rk, dual }));
    }
    if g == 5 && r == 2 && deg == 4 {
        let m2 = ms.scaled(2);
        let d2 = ds.scaled(&ms, 2).to_sub(&m2)?;
        if let Some(half) = find_half(&m2, &d2)? {
            return Ok((m2, LiftPlan::Halving { half }));
        }
        return Ok((ms, LiftPlan::Inconclusive { rank: r, reason: "no D' with 2D' ~ D and rank 1 found".into() }));
    }
    Ok((ms, LiftPlan::Inconclusive { rank: r, reason: format!("rank {} with r(K - D) = {} on genus {}", r, rk, g) }))
}

/// An effective D' of half the degree with 2D' ~ d and r(D') = 1.
fn find_half(m: &MetricGraph, d: &[i64]) -> Result<Option<Vec<i64>>> {
    let n = m.sub.n_vertices();
    let deg: i64 = d.iter().sum();
    if deg % 2 != 0 || deg / 2 != 2 {
        return Ok(None);
    }
    let mut solver = RankSolver::new(&m.sub);
    for x in 0..n {
        for y in x..n {
            let mut h = vec![0; n];
            h[x] += 1;
            h[y] += 1;
            let twice: Vec<i64> = h.iter().map(|c| 2 * c).collect();
            if linearly_equivalent(&m.sub, &twice, d).is_some() && solver.rank(&h)? == 1 {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}
