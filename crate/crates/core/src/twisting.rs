//! Twists of admissible multidegrees, concentration, tight tuples, twisting divisors and
//! relative twist divisors.

use std::collections::{BTreeMap, HashSet};

use crate::divisor::{dhar_reduce, linearly_equivalent, AdmissibleMultidegree, PlFunction};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;

/// Formal divisor on the marked points of one component: edge index to multiplicity.
pub type Formal = BTreeMap<usize, i64>;

pub fn formal_degree(f: &Formal) -> i64 {
    f.values().sum()
}

pub fn formal_add(a: &Formal, b: &Formal) -> Formal {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(*k).or_default() += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn formal_sub(a: &Formal, b: &Formal) -> Formal {
    formal_add(a, &b.iter().map(|(k, v)| (*k, -v)).collect())
}

/// Apply the twist rule at v to the listed edges (all incident on v).
fn twist_edges(m: &MetricGraph, w: &mut AdmissibleMultidegree, v: usize, edges: &[usize]) {
    for &e in edges {
        let edge = m.edge(e);
        let n = edge.n;
        let s = edge.sigma(v);
        let mu = w.mu[e];
        if (mu + s).rem_euclid(n) == 0 {
            w.w[edge.other(v)] += 1;
        }
        if mu == 0 {
            w.w[v] -= 1;
        }
        w.mu[e] = (mu + s).rem_euclid(n);
    }
}

/// Twist at a vertex: every chip on the edges at v moves one step away from v.
pub fn twist(m: &MetricGraph, w: &AdmissibleMultidegree, v: usize) -> AdmissibleMultidegree {
    let mut out = w.clone();
    twist_edges(m, &mut out, v, &m.g.incident(v));
    out
}

/// Twist once at every vertex of a set. Edges inside the set are unchanged, so only the cut
/// edges are processed.
pub fn twist_set(m: &MetricGraph, w: &AdmissibleMultidegree, set: &[bool]) -> AdmissibleMultidegree {
    let mut out = w.clone();
    for v in (0..m.nv()).filter(|&v| set[v]) {
        let cut: Vec<usize> = m.g.incident(v).into_iter().filter(|&e| !set[m.edge(e).other(v)]).collect();
        twist_edges(m, &mut out, v, &cut);
    }
    out
}

/// Inverse of [`twist`]: the twist at all other vertices.
pub fn negative_twist(m: &MetricGraph, w: &AdmissibleMultidegree, v: usize) -> AdmissibleMultidegree {
    let set: Vec<bool> = (0..m.nv()).map(|u| u != v).collect();
    twist_set(m, w, &set)
}

/// Twist at (te, v): the twist rule applied to the edges over te only.
pub fn partial_twist(m: &MetricGraph, w: &AdmissibleMultidegree, te: usize, v: usize) -> Result<AdmissibleMultidegree> {
    m.require_multitree()?;
    let t = &m.tree.edges[te];
    if !t.touches(v) {
        return Err(Error::Malformed(format!("vertex {} is not on that tree edge", m.g.vertices()[v])));
    }
    let mut out = w.clone();
    twist_edges(m, &mut out, v, &t.fibre);
    Ok(out)
}

/// k twists at (te, v); negative k twists at (te, v') instead.
pub fn partial_twist_times(
    m: &MetricGraph,
    w: &AdmissibleMultidegree,
    te: usize,
    v: usize,
    k: i64,
) -> Result<AdmissibleMultidegree> {
    let (side, times) = if k >= 0 { (v, k) } else { (m.tree.edges[te].other(v), -k) };
    let mut out = w.clone();
    for _ in 0..times {
        out = partial_twist(m, &out, te, side)?;
    }
    Ok(out)
}

/// Whether w is concentrated on v, with a witness ordering starting at v.
///
/// The ordering must make w negative at each later vertex after the negative twists at all
/// earlier ones; negative twists at a set S amount to one twist at the complement of S.
pub fn is_concentrated(m: &MetricGraph, w: &AdmissibleMultidegree, v: usize) -> Result<Option<Vec<usize>>> {
    m.require_multitree()?;
    let nv = m.nv();
    let mut placed = vec![false; nv];
    placed[v] = true;
    let mut order = vec![v];
    let mut dead: HashSet<Vec<bool>> = HashSet::new();
    if search(m, w, &mut placed, &mut order, &mut dead) {
        Ok(Some(order))
    } else {
        Ok(None)
    }
}

fn search(
    m: &MetricGraph,
    w: &AdmissibleMultidegree,
    placed: &mut Vec<bool>,
    order: &mut Vec<usize>,
    dead: &mut HashSet<Vec<bool>>,
) -> bool {
    if order.len() == m.nv() {
        return true;
    }
    if dead.contains(placed) {
        return false;
    }
    let rest: Vec<bool> = placed.iter().map(|p| !p).collect();
    let after = twist_set(m, w, &rest);
    for u in 0..m.nv() {
        if placed[u] || after.w[u] >= 0 {
            continue;
        }
        placed[u] = true;
        order.push(u);
        if search(m, w, placed, order, dead) {
            return true;
        }
        order.pop();
        placed[u] = false;
    }
    dead.insert(placed.clone());
    false
}

/// The multidegree whose divisor is the v-reduced divisor equivalent to D_{w0}.
pub fn reduced_multidegree(m: &MetricGraph, w0: &AdmissibleMultidegree, v: usize) -> AdmissibleMultidegree {
    let (red, _) = dhar_reduce(&m.sub, &w0.to_sub(m), v);
    AdmissibleMultidegree::from_sub(m, &red).expect("reduced divisors are edge-reduced")
}

/// Multidegrees concentrated on each vertex, and for each tree edge (a, b) with a < b the count
/// b such that twisting w_a that many times at (e, a) gives w_b (and symmetrically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightTuple {
    pub w: Vec<AdmissibleMultidegree>,
    pub b: Vec<i64>,
}

impl TightTuple {
    pub fn b_at(&self, m: &MetricGraph, u: usize, v: usize) -> Option<i64> {
        m.tree.between(u, v).map(|te| self.b[te])
    }
}

/// The largest k such that k twists at (te, v) keep w nonnegative at v. Twisting at (te, v)
/// only changes the degrees at v and at the other end, and the degree at v never increases.
fn max_twists(m: &MetricGraph, w: &AdmissibleMultidegree, te: usize, v: usize) -> Result<(i64, AdmissibleMultidegree)> {
    let other = m.tree.edges[te].other(v);
    let mut k = 0;
    let mut cur = w.clone();
    let bound = 4 * (w.degree().abs() + 2) * m.g.edges().iter().map(|e| e.n).max().unwrap_or(1);
    if cur.w[v] >= 0 {
        loop {
            let next = partial_twist(m, &cur, te, v)?;
            if next.w[v] < 0 {
                return Ok((k, cur));
            }
            cur = next;
            k += 1;
            if k > bound {
                return Err(Error::Inconsistent("twisting never makes the vertex negative".into()));
            }
        }
    }
    while cur.w[v] < 0 {
        cur = partial_twist(m, &cur, te, other)?;
        k -= 1;
        if -k > bound {
            return Err(Error::Inconsistent("no twist count makes the vertex nonnegative".into()));
        }
    }
    Ok((k, cur))
}

/// Reduced multidegrees at every vertex, linked by the twist counts of the maximal
/// effectiveness rule.
pub fn tight_tuple(m: &MetricGraph, w0: &AdmissibleMultidegree) -> Result<TightTuple> {
    m.require_multitree()?;
    let w: Vec<AdmissibleMultidegree> = (0..m.nv()).map(|v| reduced_multidegree(m, w0, v)).collect();
    let mut b = Vec::new();
    for t in &m.tree.edges {
        let te = b.len();
        let (k, reached) = max_twists(m, &w[t.a], te, t.a)?;
        if reached != w[t.b] {
            return Err(Error::Inconsistent(format!(
                "twisting the {}-reduced multidegree does not reach the {}-reduced one",
                m.g.vertices()[t.a],
                m.g.vertices()[t.b]
            )));
        }
        if k < 0 {
            return Err(Error::Inconsistent(format!("negative twist count {} on a tree edge", k)));
        }
        b.push(k);
    }
    Ok(TightTuple { w, b })
}

/// Every w_v concentrated on v, and the b counts nonnegative and consistent.
pub fn is_tight(m: &MetricGraph, t: &TightTuple) -> Result<bool> {
    m.require_multitree()?;
    for v in 0..m.nv() {
        if is_concentrated(m, &t.w[v], v)?.is_none() {
            return Ok(false);
        }
    }
    for (te, e) in m.tree.edges.iter().enumerate() {
        let b = t.b[te];
        if b < 0 || partial_twist_times(m, &t.w[e.a], te, e.a, b)? != t.w[e.b] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// D_0 = 0, ..., D_top for the pair (te, v): the increment from D_i to D_{i+1} is the sum of the
/// marked points of the edges e over te with sigma(e, v) * mu_v(e) = -i mod n(e).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingSeq {
    pub tree_edge: usize,
    pub vertex: usize,
    pub divs: Vec<Formal>,
}

impl TwistingSeq {
    pub fn top(&self) -> usize {
        self.divs.len() - 1
    }

    pub fn degree(&self, i: usize) -> i64 {
        formal_degree(&self.divs[i])
    }

    /// Edges in D_{i+1} - D_i (multiplicity free).
    pub fn increment(&self, i: usize) -> Vec<usize> {
        formal_sub(&self.divs[i + 1], &self.divs[i]).keys().copied().collect()
    }

    /// j with D_{j+1} != D_j, for j < top.
    pub fn critical(&self) -> Vec<usize> {
        (0..self.top()).filter(|&j| self.divs[j + 1] != self.divs[j]).collect()
    }
}

pub fn increment_edges(m: &MetricGraph, w_v: &AdmissibleMultidegree, te: usize, v: usize, i: i64) -> Vec<usize> {
    m.tree.edges[te]
        .fibre
        .iter()
        .copied()
        .filter(|&e| {
            let edge = m.edge(e);
            (edge.sigma(v) * w_v.mu[e] + i).rem_euclid(edge.n) == 0
        })
        .collect()
}

pub fn twisting_divisors(m: &MetricGraph, w_v: &AdmissibleMultidegree, te: usize, v: usize, top: usize) -> Result<TwistingSeq> {
    m.require_multitree()?;
    if !m.tree.edges[te].touches(v) {
        return Err(Error::Malformed("vertex is not on that tree edge".into()));
    }
    let mut divs = vec![Formal::new()];
    for i in 0..top {
        let mut next = divs[i].clone();
        for e in increment_edges(m, w_v, te, v, i as i64) {
            *next.entry(e).or_default() += 1;
        }
        divs.push(next);
    }
    Ok(TwistingSeq { tree_edge: te, vertex: v, divs })
}

/// Sequence long enough for multivanishing and condition (I): at least up to index b + 1, and
/// until the degree of the last divisor exceeds `d`.
pub fn twisting_divisors_until(
    m: &MetricGraph,
    w_v: &AdmissibleMultidegree,
    te: usize,
    v: usize,
    b: i64,
    d: i64,
) -> Result<TwistingSeq> {
    let mut top = (b + 1).max(1) as usize;
    loop {
        let s = twisting_divisors(m, w_v, te, v, top)?;
        if s.degree(top) > d {
            return Ok(s);
        }
        top *= 2;
    }
}

/// D^v_{w,w'} = sum over edges at v of slp_{e,v}(f) P_e, where D_{w'} = D_w + div(f).
pub fn relative_twist_divisor(
    m: &MetricGraph,
    w: &AdmissibleMultidegree,
    w2: &AdmissibleMultidegree,
    v: usize,
) -> Result<Formal> {
    let f = linearly_equivalent(&m.sub, &w.to_sub(m), &w2.to_sub(m))
        .ok_or_else(|| Error::Inconsistent("the two multidegrees are not linearly equivalent".into()))?;
    Ok(slope_divisor(m, &f, v))
}

/// sum over edges e at v of slp_{e,v}(f) P_e.
pub fn slope_divisor(m: &MetricGraph, f: &PlFunction, v: usize) -> Formal {
    let mut out = Formal::new();
    for e in m.g.incident(v) {
        let s = f.slope(m, e, v);
        if s != 0 {
            out.insert(e, s);
        }
    }
    out
}

/// Twist counts per vertex of G taking w to w2 (twisting every vertex once changes nothing,
/// so the counts are normalised to have minimum 0).
pub fn twist_counts(m: &MetricGraph, w: &AdmissibleMultidegree, w2: &AdmissibleMultidegree) -> Result<Vec<i64>> {
    let f = linearly_equivalent(&m.sub, &w.to_sub(m), &w2.to_sub(m))
        .ok_or_else(|| Error::Inconsistent("the two multidegrees are not linearly equivalent".into()))?;
    let vals = &f.values[..m.nv()];
    let lo = *vals.iter().min().unwrap();
    Ok(vals.iter().map(|x| x - lo).collect())
}

/// D^v along an explicit sequence of vertex twists: a twist at a neighbour u of v adds P_e for
/// the edges e between u and v whose residue becomes 0, and a twist at v subtracts P_e for the
/// edges at v whose residue was 0. Returns the end point and the divisor.
pub fn relative_twist_along(
    m: &MetricGraph,
    w: &AdmissibleMultidegree,
    path: &[usize],
    v: usize,
) -> (AdmissibleMultidegree, Formal) {
    let mut cur = w.clone();
    let mut out = Formal::new();
    for &u in path {
        let next = twist(m, &cur, u);
        for e in m.g.incident(u) {
            let edge = m.edge(e);
            if u == v && cur.mu[e] == 0 {
                *out.entry(e).or_default() -= 1;
            } else if u != v && edge.other(u) == v && next.mu[e] == 0 {
                *out.entry(e).or_default() += 1;
            }
        }
        cur = next;
    }
    out.retain(|_, x| *x != 0);
    (cur, out)
}

/// A twist path realising the given counts, twisting round-robin.
pub fn path_from_counts(counts: &[i64]) -> Vec<usize> {
    let mut left = counts.to_vec();
    let mut path = Vec::new();
    while left.iter().any(|&c| c > 0) {
        for (v, c) in left.iter_mut().enumerate() {
            if *c > 0 {
                path.push(v);
                *c -= 1;
            }
        }
    }
    path
}

/// D^v_{w,w2} computed along a twist path; agrees with [`relative_twist_divisor`].
pub fn relative_twist_divisor_by_path(
    m: &MetricGraph,
    w: &AdmissibleMultidegree,
    w2: &AdmissibleMultidegree,
    v: usize,
) -> Result<Formal> {
    let path = path_from_counts(&twist_counts(m, w, w2)?);
    let (end, d) = relative_twist_along(m, w, &path, v);
    if &end != w2 {
        return Err(Error::Inconsistent("twist counts do not reach the target".into()));
    }
    Ok(d)
}
