//! Pre-limit linear series: multivanishing sequences, condition (I), the weak glueing
//! condition and the correspondence with limit linear series on the metrized complex.

use std::collections::{BTreeMap, BTreeSet};

use crate::divisor::{dhar_reduce, AdmissibleMultidegree, MetricDivisor, BASE};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::p1::linalg::{self, Matrix};
use crate::p1::poly::Poly;
use crate::p1::space::div0;
use crate::p1::{ConstantPool, FunctionSpace, MarkedComponent, Point, PointDivisor, RatFunc};
use crate::twisting::{relative_twist_divisor, slope_divisor, twisting_divisors_until, Formal, TightTuple, TwistingSeq};
use crate::Q;

/// Marked point of edge e on the component at v.
pub fn marked_point(m: &MetricGraph, comps: &[MarkedComponent], v: usize, e: usize) -> Result<Point> {
    comps[v].point(&m.edge(e).id).cloned()
}

/// sum_e k_e P_e on the component at v.
pub fn realize(m: &MetricGraph, comps: &[MarkedComponent], v: usize, f: &Formal) -> Result<PointDivisor> {
    let mut d = PointDivisor::zero();
    for (&e, &k) in f {
        d = d.add(&PointDivisor::point(&marked_point(m, comps, v, e)?, k));
    }
    Ok(d)
}

/// One marked component per vertex, each with a point for every incident edge.
pub fn check_markings(m: &MetricGraph, comps: &[MarkedComponent]) -> Result<()> {
    if comps.len() != m.nv() {
        return Err(Error::Malformed(format!("expected {} components, got {}", m.nv(), comps.len())));
    }
    for (v, c) in comps.iter().enumerate() {
        if c.vertex != m.g.vertices()[v] {
            return Err(Error::Malformed(format!("component {} is listed out of order", c.vertex)));
        }
        for e in m.g.incident(v) {
            marked_point(m, comps, v, e)?;
        }
    }
    Ok(())
}

/// Line bundles with (r+1)-dimensional spaces of sections, one per vertex, taken with respect
/// to a tight tuple. Condition (I) is checked separately by [`check_condition_i`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreLimitSeries {
    pub rank: usize,
    pub spaces: Vec<FunctionSpace>,
    pub tuple: TightTuple,
}

impl PreLimitSeries {
    /// Checks that deg L_v is the degree of w_v at v and that every space has dimension r + 1.
    pub fn new(m: &MetricGraph, rank: usize, spaces: Vec<FunctionSpace>, tuple: TightTuple) -> Result<Self> {
        if spaces.len() != m.nv() || tuple.w.len() != m.nv() || tuple.b.len() != m.tree.edges.len() {
            return Err(Error::Malformed("series does not match the graph".into()));
        }
        for (v, sp) in spaces.iter().enumerate() {
            let name = &m.g.vertices()[v];
            if sp.divisor().degree() != tuple.w[v].w[v] {
                return Err(Error::Malformed(format!(
                    "line bundle at {} has degree {}, the multidegree wants {}",
                    name,
                    sp.divisor().degree(),
                    tuple.w[v].w[v]
                )));
            }
            if sp.dim() != rank + 1 {
                return Err(Error::Malformed(format!("space at {} has dimension {}, not {}", name, sp.dim(), rank + 1)));
            }
        }
        Ok(PreLimitSeries { rank, spaces, tuple })
    }

    pub fn degree(&self) -> i64 {
        self.tuple.w[0].degree()
    }

    /// Per component: degree and echelon form of the series.
    pub fn normal_form(&self) -> Vec<(i64, Matrix)> {
        self.spaces.iter().map(|sp| component_normal_form(sp.divisor(), sp.basis())).collect()
    }
}

/// Nondecreasing vanishing orders a_0 <= ... <= a_r along a twisting sequence, each with the
/// critical index j such that a = deg D_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivanishingSeq {
    pub values: Vec<i64>,
    pub index: Vec<usize>,
}

pub fn multivanishing(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    space: &FunctionSpace,
    seq: &TwistingSeq,
) -> Result<MultivanishingSeq> {
    let v = seq.vertex;
    let mut dims = Vec::with_capacity(seq.divs.len());
    for (i, d) in seq.divs.iter().enumerate() {
        if i > 0 && *d == seq.divs[i - 1] {
            let last = dims[i - 1];
            dims.push(last);
        } else {
            dims.push(space.vanishing(&realize(m, comps, v, d)?).dim());
        }
    }
    if dims[seq.top()] != 0 {
        return Err(Error::Inconsistent("twisting sequence too short to exhaust the space".into()));
    }
    let mut values = Vec::new();
    let mut index = Vec::new();
    for j in seq.critical() {
        for _ in 0..dims[j] - dims[j + 1] {
            values.push(seq.degree(j));
            index.push(j);
        }
    }
    Ok(MultivanishingSeq { values, index })
}

/// Twisting sequence and multivanishing sequence of one side of a tree edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSide {
    pub vertex: usize,
    pub seq: TwistingSeq,
    pub vanishing: MultivanishingSeq,
}

/// Both sides of a tree edge (a, b): `sides[0]` is at a and `sides[1]` at b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeData {
    pub tree_edge: usize,
    pub b: i64,
    pub sides: [EdgeSide; 2],
}

pub fn edge_data(m: &MetricGraph, comps: &[MarkedComponent], s: &PreLimitSeries) -> Result<Vec<EdgeData>> {
    m.require_multitree()?;
    check_markings(m, comps)?;
    let d = s.degree();
    let mut out = Vec::new();
    for (te, t) in m.tree.edges.iter().enumerate() {
        let b = s.tuple.b[te];
        let side = |v: usize| -> Result<EdgeSide> {
            let bound = d.max(s.spaces[v].divisor().degree());
            let seq = twisting_divisors_until(m, &s.tuple.w[v], te, v, b, bound)?;
            let vanishing = multivanishing(m, comps, &s.spaces[v], &seq)?;
            Ok(EdgeSide { vertex: v, seq, vanishing })
        };
        out.push(EdgeData { tree_edge: te, b, sides: [side(t.a)?, side(t.b)?] });
    }
    Ok(out)
}

/// A failure of condition (I): a_l at `vertex` equals deg D_j, but a_{r-l} on the other side
/// is below deg D_{b-j} there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionIFailure {
    pub tree_edge: usize,
    pub vertex: usize,
    pub l: usize,
    pub j: usize,
    pub needed: i64,
    pub found: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionIReport {
    pub edges: Vec<EdgeData>,
    pub failures: Vec<ConditionIFailure>,
}

impl ConditionIReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_condition_i(m: &MetricGraph, comps: &[MarkedComponent], s: &PreLimitSeries) -> Result<ConditionIReport> {
    let edges = edge_data(m, comps, s)?;
    let r = s.rank;
    let mut failures = Vec::new();
    for ed in &edges {
        for (x, y) in [(0, 1), (1, 0)] {
            let (here, there) = (&ed.sides[x], &ed.sides[y]);
            for l in 0..=r {
                let j = here.vanishing.index[l];
                if j as i64 > ed.b {
                    continue;
                }
                let needed = there.seq.degree((ed.b - j as i64) as usize);
                let found = there.vanishing.values[r - l];
                if found < needed {
                    failures.push(ConditionIFailure { tree_edge: ed.tree_edge, vertex: here.vertex, l, j, needed, found });
                }
            }
        }
    }
    Ok(ConditionIReport { edges, failures })
}

/// Supports I such that the subspace meets the torus orbit of vectors with support exactly I.
///
/// Over an infinite field this happens iff U cap k^I is nonzero and strictly larger than
/// U cap k^{I - i} for each i in I. Rows of `basis` span U inside k^m.
pub fn orbit_pattern(basis: &[Vec<Q>], m: usize) -> BTreeSet<Vec<usize>> {
    let k = linalg::rank(basis);
    let dim_in = |mask: usize| -> usize {
        let outside: Vec<usize> = (0..m).filter(|i| mask & (1 << i) == 0).collect();
        if outside.is_empty() {
            k
        } else {
            k - linalg::rank(&linalg::select_columns(basis, &outside))
        }
    };
    let mut out = BTreeSet::new();
    for mask in 1..(1usize << m) {
        let dim = dim_in(mask);
        if dim == 0 {
            continue;
        }
        if (0..m).filter(|i| mask & (1 << i) != 0).all(|i| dim > dim_in(mask & !(1 << i))) {
            out.insert((0..m).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Basis of U cap k^I, where I is given by a bit mask.
fn stratum(basis: &[Vec<Q>], m: usize, mask: usize) -> Matrix {
    let outside: Vec<usize> = (0..m).filter(|i| mask & (1 << i) == 0).collect();
    if outside.is_empty() {
        return basis.to_vec();
    }
    let cols = linalg::transpose(&linalg::select_columns(basis, &outside), outside.len());
    linalg::kernel(&cols, basis.len())
        .iter()
        .map(|c| linalg::combine(c, basis))
        .collect()
}

/// Orbit patterns of g-dimensional subspaces of U spanned by generic vectors of strata, each
/// with one witness.
fn achievable_patterns(u: &[Vec<Q>], m: usize, g: usize, pool: &ConstantPool) -> BTreeMap<BTreeSet<Vec<usize>>, Matrix> {
    let strata: Vec<Matrix> = (1..(1usize << m))
        .map(|mask| stratum(u, m, mask))
        .filter(|s| !s.is_empty())
        .collect();
    let mut out = BTreeMap::new();
    let mut choice = vec![0usize; g];
    loop {
        let mut w: Matrix = Vec::new();
        for (slot, &si) in choice.iter().enumerate() {
            let s = &strata[si];
            let coeffs: Vec<Q> = (0..s.len()).map(|i| pool.get(slot * 8 + i)).collect();
            w.push(linalg::combine(&coeffs, s));
        }
        if linalg::rank(&w) == g {
            out.entry(orbit_pattern(&w, m)).or_insert(w);
        }
        // next nondecreasing choice
        let mut i = g;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if choice[i] + 1 < strata.len() {
                choice[i] += 1;
                for c in i + 1..g {
                    choice[c] = choice[i];
                }
                break;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlueStatus {
    Pass,
    Fail,
    Uncertified,
}

/// The weak glueing check at one critical index j of one tree edge (sides oriented from the
/// smaller vertex index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueingCheck {
    pub tree_edge: usize,
    pub j: usize,
    pub g: usize,
    /// Edges of the increment, in the coordinate order used by the patterns.
    pub edges: Vec<usize>,
    pub status: GlueStatus,
    pub patterns: [BTreeSet<BTreeSet<Vec<usize>>>; 2],
    /// Matching subspaces when the check passes by search.
    pub witness: Option<[Matrix; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlueVerdict {
    Satisfied,
    Violated,
    Uncertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakGlueingReport {
    pub checks: Vec<GlueingCheck>,
    pub verdict: GlueVerdict,
}

impl WeakGlueingReport {
    pub fn failed_at(&self) -> Vec<(usize, usize)> {
        self.checks.iter().filter(|c| c.status == GlueStatus::Fail).map(|c| (c.tree_edge, c.j)).collect()
    }
}

/// Increments with more points than this are reported as uncertified.
pub const MAX_CERTIFIED_POINTS: usize = 3;

/// Images of V(-D_j) / V(-D_{j+1}) on the increment points, under the leading coefficient map.
fn increment_image(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    space: &FunctionSpace,
    side: &EdgeSide,
    j: usize,
) -> Result<(Vec<usize>, Matrix)> {
    let v = side.vertex;
    let edges = side.seq.increment(j);
    let dj = &side.seq.divs[j];
    let sub = space.vanishing(&realize(m, comps, v, dj)?);
    let pts = edges
        .iter()
        .map(|&e| Ok((marked_point(m, comps, v, e)?, dj.get(&e).copied().unwrap_or(0))))
        .collect::<Result<Vec<_>>>()?;
    let (rows, pivots) = linalg::rref(&sub.leading_coeff_map(&pts));
    Ok((edges, rows.into_iter().take(pivots.len()).collect()))
}

pub fn check_weak_glueing(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    s: &PreLimitSeries,
    pool: &ConstantPool,
) -> Result<WeakGlueingReport> {
    let rep = check_condition_i(m, comps, s)?;
    if !rep.holds() {
        let f = &rep.failures[0];
        return Err(Error::ConditionI(format!(
            "at {} with l = {}, j = {}: need {}, found {}",
            m.g.vertices()[f.vertex],
            f.l,
            f.j,
            f.needed,
            f.found
        )));
    }
    let r = s.rank;
    let mut checks = Vec::new();
    for ed in &rep.edges {
        let [sa, sb] = &ed.sides;
        for j in sa.seq.critical() {
            if j as i64 > ed.b {
                continue;
            }
            let j2 = (ed.b - j as i64) as usize;
            let (da, db) = (sa.seq.degree(j), sb.seq.degree(j2));
            let g = (0..=r).filter(|&l| sa.vanishing.values[l] == da && sb.vanishing.values[r - l] == db).count();
            let edges = sa.seq.increment(j);
            if sb.seq.increment(j2) != edges {
                return Err(Error::Inconsistent(format!(
                    "twisting increments at j = {} do not mirror across the edge",
                    j
                )));
            }
            let mut check = GlueingCheck {
                tree_edge: ed.tree_edge,
                j,
                g,
                edges: edges.clone(),
                status: GlueStatus::Pass,
                patterns: Default::default(),
                witness: None,
            };
            if g == 0 || g == edges.len() {
                checks.push(check);
                continue;
            }
            if edges.len() > MAX_CERTIFIED_POINTS {
                check.status = GlueStatus::Uncertified;
                checks.push(check);
                continue;
            }
            let (_, ua) = increment_image(m, comps, &s.spaces[sa.vertex], sa, j)?;
            let (_, ub) = increment_image(m, comps, &s.spaces[sb.vertex], sb, j2)?;
            let pa = achievable_patterns(&ua, edges.len(), g, pool);
            let pb = achievable_patterns(&ub, edges.len(), g, pool);
            let common = pa.keys().find(|p| pb.contains_key(*p)).cloned();
            check.status = if common.is_some() { GlueStatus::Pass } else { GlueStatus::Fail };
            check.witness = common.map(|p| [pa[&p].clone(), pb[&p].clone()]);
            check.patterns = [pa.into_keys().collect(), pb.into_keys().collect()];
            checks.push(check);
        }
    }
    let verdict = if checks.iter().any(|c| c.status == GlueStatus::Fail) {
        GlueVerdict::Violated
    } else if checks.iter().any(|c| c.status == GlueStatus::Uncertified) {
        GlueVerdict::Uncertified
    } else {
        GlueVerdict::Satisfied
    };
    Ok(WeakGlueingReport { checks, verdict })
}

/// A divisor on the metrized complex together with spaces of rational functions on the
/// components: the Gamma-part, a divisor D_v of degree D_Gamma(v) on each component, and
/// (r+1)-dimensional spaces H_v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetrizedComplexSeries {
    pub rank: usize,
    pub gamma: MetricDivisor,
    pub parts: Vec<PointDivisor>,
    pub spaces: Vec<Vec<RatFunc>>,
}

impl MetrizedComplexSeries {
    pub fn new(m: &MetricGraph, rank: usize, gamma: MetricDivisor, parts: Vec<PointDivisor>, spaces: Vec<Vec<RatFunc>>) -> Result<Self> {
        if parts.len() != m.nv() || spaces.len() != m.nv() || gamma.vertex.len() != m.nv() {
            return Err(Error::Malformed("series does not match the graph".into()));
        }
        for v in 0..m.nv() {
            let name = &m.g.vertices()[v];
            if parts[v].degree() != gamma.vertex[v] {
                return Err(Error::Malformed(format!(
                    "divisor on the component at {} has degree {}, the graph part has {}",
                    name,
                    parts[v].degree(),
                    gamma.vertex[v]
                )));
            }
            if spaces[v].len() != rank + 1 || component_normal_form(&parts[v], &spaces[v]).1.len() != rank + 1 {
                return Err(Error::Malformed(format!("functions at {} do not span a space of dimension {}", name, rank + 1)));
            }
        }
        Ok(MetrizedComplexSeries { rank, gamma, parts, spaces })
    }

    pub fn degree(&self) -> i64 {
        self.gamma.degree()
    }
}

/// Degree of D and the echelon form of the span of h * h_D over h in H, with denominators
/// cleared. Two pairs (D, H) and (D + div f, H / f) give the same result.
pub fn component_normal_form(d: &PointDivisor, h: &[RatFunc]) -> (i64, Matrix) {
    let hd = d.h();
    let fs: Vec<RatFunc> = h.iter().map(|f| f.mul(&hd)).collect();
    let mut l = Poly::one();
    for f in &fs {
        let g = Poly::gcd(&l, f.den());
        l = (&l * f.den()).exact_div(&g).monic();
    }
    let polys: Vec<Poly> = fs.iter().map(|f| (f.num() * &l).exact_div(f.den())).collect();
    let width = polys.iter().map(|p| p.degree() + 1).max().unwrap_or(0).max(0) as usize;
    let rows: Matrix = polys.iter().map(|p| (0..width).map(|k| p.coeff(k)).collect()).collect();
    let (r, piv) = linalg::rref(&rows);
    (d.degree(), r.into_iter().take(piv.len()).collect())
}

/// Normal form of a series on the metrized complex: the Gamma-part reduced at the base vertex,
/// the component divisors moved along by the slopes of the reducing function, and each
/// component in [`component_normal_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McNormalForm {
    pub gamma: Vec<i64>,
    pub parts: Vec<(i64, Matrix)>,
}

pub fn normalize_mc(m: &MetricGraph, comps: &[MarkedComponent], mc: &MetrizedComplexSeries) -> Result<McNormalForm> {
    let (red, f) = dhar_reduce(&m.sub, &mc.gamma.to_sub(m)?, BASE);
    let mut parts = Vec::new();
    for v in 0..m.nv() {
        let shifted = mc.parts[v].add(&realize(m, comps, v, &slope_divisor(m, &f, v))?);
        parts.push(component_normal_form(&shifted, &mc.spaces[v]));
    }
    Ok(McNormalForm { gamma: red, parts })
}

/// D_v = div0(s_v) - D^v_{w,w_v} and H_v = V_v / s_v, with s_v the first basis element.
pub fn forgetful(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    s: &PreLimitSeries,
    w: &AdmissibleMultidegree,
) -> Result<MetrizedComplexSeries> {
    check_markings(m, comps)?;
    let mut parts = Vec::new();
    let mut spaces = Vec::new();
    for v in 0..m.nv() {
        let sp = &s.spaces[v];
        let sv = &sp.basis()[0];
        let dv = relative_twist_divisor(m, w, &s.tuple.w[v], v)?;
        parts.push(div0(sv, sp.divisor())?.sub(&realize(m, comps, v, &dv)?));
        spaces.push(sp.basis().iter().map(|f| f.div(sv)).collect());
    }
    let gamma = MetricDivisor::from_multidegree(m, w);
    MetrizedComplexSeries::new(m, s.rank, gamma, parts, spaces)
}

/// L_v = O(D_v + D^v_{w,w_v}) where w is the multidegree of the Gamma-part, with H_v as the
/// sections.
pub fn inverse_forgetful(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    mc: &MetrizedComplexSeries,
    tuple: &TightTuple,
) -> Result<PreLimitSeries> {
    check_markings(m, comps)?;
    let w = mc.gamma.to_multidegree(m)?;
    let mut spaces = Vec::new();
    for v in 0..m.nv() {
        let dv = relative_twist_divisor(m, &w, &tuple.w[v], v)?;
        let l = mc.parts[v].add(&realize(m, comps, v, &dv)?);
        spaces.push(FunctionSpace::new(l, mc.spaces[v].clone()).map_err(|e| match e {
            Error::NotSection(msg) => Error::NotSection(format!("H at {}: {}", m.g.vertices()[v], msg)),
            other => other,
        })?);
    }
    PreLimitSeries::new(m, mc.rank, spaces, tuple.clone())
}

/// Weak glueing of the pre-limit series corresponding to a series on the metrized complex.
pub fn check_mc_weak_glueing(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    mc: &MetrizedComplexSeries,
    tuple: &TightTuple,
    pool: &ConstantPool,
) -> Result<WeakGlueingReport> {
    check_weak_glueing(m, comps, &inverse_forgetful(m, comps, mc, tuple)?, pool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p1::poly::q;

    fn qm(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn patterns_of_small_subspaces() {
        let all = orbit_pattern(&qm(&[&[1, 0], &[0, 1]]), 2);
        assert_eq!(all, [vec![0], vec![1], vec![0, 1]].into_iter().collect());
        assert_eq!(orbit_pattern(&qm(&[&[0, 5]]), 2), [vec![1]].into_iter().collect());
        assert_eq!(orbit_pattern(&qm(&[&[-1, 1]]), 2), [vec![0, 1]].into_iter().collect());
        // a plane in k^3 containing e_0 and (0,1,1)
        let p = orbit_pattern(&qm(&[&[1, 0, 0], &[0, 1, 1]]), 3);
        assert_eq!(p, [vec![0], vec![1, 2], vec![0, 1, 2]].into_iter().collect());
    }

    #[test]
    fn normal_form_ignores_rescaling_by_a_function() {
        let d = PointDivisor::point(&Point::Infinity, 2);
        let h = vec![RatFunc::from_poly(Poly::x()), RatFunc::from_poly(Poly::from_ints(&[0, -1, 1]))];
        let f = RatFunc::new(Poly::from_ints(&[-3, 1]), Poly::from_ints(&[5, 1]));
        let d2 = d.add(&f.divisor());
        let h2: Vec<RatFunc> = h.iter().map(|x| x.div(&f)).collect();
        assert_eq!(component_normal_form(&d, &h), component_normal_form(&d2, &h2));
        let d3 = PointDivisor::point(&Point::int(7), 2);
        assert_ne!(component_normal_form(&d, &h), component_normal_form(&d3, &h));
    }

    #[test]
    fn glued_lines_fail_weak_glueing_at_zero() {
        let ex = crate::fixtures::glued_lines().unwrap();
        assert_eq!(ex.tuple.b, vec![1]);
        let rep = check_condition_i(&ex.m, &ex.comps, &ex.series).unwrap();
        assert!(rep.holds());
        let [a, b] = &rep.edges[0].sides;
        assert_eq!(a.vanishing.values, vec![0, 2]);
        assert_eq!(b.vanishing.values, vec![0, 1]);
        let wg = check_weak_glueing(&ex.m, &ex.comps, &ex.series, &ConstantPool::default()).unwrap();
        assert_eq!(wg.verdict, GlueVerdict::Violated);
        assert_eq!(wg.failed_at(), vec![(0, 0)]);
        let c = &wg.checks[0];
        assert_eq!(c.g, 1);
        assert_eq!(c.patterns[0], [[vec![1]].into_iter().collect()].into_iter().collect());
        assert_eq!(c.patterns[1], [[vec![0, 1]].into_iter().collect()].into_iter().collect());
    }

    #[test]
    fn glued_lines_round_trip() {
        let ex = crate::fixtures::glued_lines().unwrap();
        let back = inverse_forgetful(&ex.m, &ex.comps, &ex.mc, &ex.tuple).unwrap();
        assert_eq!(back.normal_form(), ex.series.normal_form());
        let mc = forgetful(&ex.m, &ex.comps, &ex.series, &ex.w0).unwrap();
        assert_eq!(normalize_mc(&ex.m, &ex.comps, &mc).unwrap(), normalize_mc(&ex.m, &ex.comps, &ex.mc).unwrap());
        // through another multidegree of the same class
        let mc2 = forgetful(&ex.m, &ex.comps, &ex.series, &ex.tuple.w[1]).unwrap();
        assert_eq!(normalize_mc(&ex.m, &ex.comps, &mc2).unwrap(), normalize_mc(&ex.m, &ex.comps, &ex.mc).unwrap());
        let again = inverse_forgetful(&ex.m, &ex.comps, &mc2, &ex.tuple).unwrap();
        assert_eq!(again.normal_form(), ex.series.normal_form());
    }

    #[test]
    fn breaking_vanishing_breaks_condition_i() {
        let ex = crate::fixtures::glued_lines().unwrap();
        let mut spaces = ex.series.spaces.clone();
        let h: Vec<RatFunc> = vec!["x".parse().unwrap(), "x-2".parse().unwrap()];
        spaces[0] = FunctionSpace::new(spaces[0].divisor().clone(), h).unwrap();
        let s = PreLimitSeries::new(&ex.m, 1, spaces, ex.tuple.clone()).unwrap();
        assert!(!check_condition_i(&ex.m, &ex.comps, &s).unwrap().holds());
    }
}
