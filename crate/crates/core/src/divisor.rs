//! Divisors on the subdivided graph and on the metric graph, admissible multidegrees,
//! chip-firing equivalence, Dhar reduction and rank.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SubdividedGraph};
use crate::Q;

/// A vertex degree per vertex of G plus a residue mu(e) in [0, n(e)) per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleMultidegree {
    pub w: Vec<i64>,
    pub mu: Vec<i64>,
}

impl AdmissibleMultidegree {
    /// Residues are reduced modulo the edge lengths.
    pub fn new(m: &MetricGraph, w: Vec<i64>, mu: Vec<i64>) -> Result<Self> {
        if w.len() != m.nv() || mu.len() != m.ne() {
            return Err(Error::Malformed("multidegree has the wrong number of entries".into()));
        }
        let mu = mu.iter().enumerate().map(|(i, x)| x.rem_euclid(m.edge(i).n)).collect();
        Ok(AdmissibleMultidegree { w, mu })
    }

    pub fn degree(&self) -> i64 {
        self.w.iter().sum::<i64>() + self.mu.iter().filter(|&&x| x != 0).count() as i64
    }

    /// The same multidegree after flipping the listed edges: mu becomes n - mu.
    pub fn reoriented(&self, m: &MetricGraph, flipped: &[bool]) -> Self {
        let mu = self
            .mu
            .iter()
            .enumerate()
            .map(|(i, &x)| if flipped[i] { (m.edge(i).n - x).rem_euclid(m.edge(i).n) } else { x })
            .collect();
        AdmissibleMultidegree { w: self.w.clone(), mu }
    }

    /// D_w as a divisor on the subdivided graph.
    pub fn to_sub(&self, m: &MetricGraph) -> Vec<i64> {
        MetricDivisor::from_multidegree(m, self).to_sub(m).expect("integral by construction")
    }

    /// phi of a divisor on the subdivided graph, which must be edge-reduced.
    pub fn from_sub(m: &MetricGraph, d: &[i64]) -> Result<Self> {
        MetricDivisor::from_sub(m, d).to_multidegree(m)
    }
}

/// A chip on the interior of an edge at distance t from the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeChip {
    pub edge: usize,
    pub t: Q,
    pub c: i64,
}

/// A divisor on the metric graph: integers at the vertices of G and finitely many chips on open
/// edges at rational positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetricDivisor {
    pub vertex: Vec<i64>,
    /// Sorted by (edge, t), no zero coefficients, no repeated positions.
    pub edge: Vec<EdgeChip>,
}

impl MetricDivisor {
    pub fn new(m: &MetricGraph, vertex: Vec<i64>, chips: Vec<EdgeChip>) -> Result<Self> {
        if vertex.len() != m.nv() {
            return Err(Error::Malformed("divisor has the wrong number of vertex entries".into()));
        }
        let mut merged: std::collections::BTreeMap<(usize, Q), i64> = Default::default();
        for ch in chips {
            let n = Q::from_integer(BigInt::from(m.edge(ch.edge).n));
            if ch.t <= Q::zero() || ch.t >= n {
                return Err(Error::Malformed(format!(
                    "position {} is not strictly inside edge {}",
                    ch.t,
                    m.edge(ch.edge).id
                )));
            }
            *merged.entry((ch.edge, ch.t)).or_default() += ch.c;
        }
        let edge = merged
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((edge, t), c)| EdgeChip { edge, t, c })
            .collect();
        Ok(MetricDivisor { vertex, edge })
    }

    pub fn zero(m: &MetricGraph) -> Self {
        MetricDivisor { vertex: vec![0; m.nv()], edge: Vec::new() }
    }

    pub fn degree(&self) -> i64 {
        self.vertex.iter().sum::<i64>() + self.edge.iter().map(|c| c.c).sum::<i64>()
    }

    pub fn is_integral(&self) -> bool {
        self.edge.iter().all(|c| c.t.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.vertex.iter().all(|&x| x >= 0) && self.edge.iter().all(|c| c.c > 0)
    }

    /// Each open edge carries nothing or a single chip of coefficient 1.
    pub fn is_edge_reduced(&self) -> bool {
        self.edge.iter().all(|c| c.c == 1) && self.edge.windows(2).all(|w| w[0].edge != w[1].edge)
    }

    pub fn from_multidegree(_m: &MetricGraph, w: &AdmissibleMultidegree) -> Self {
        let edge = w
            .mu
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| EdgeChip { edge: i, t: Q::from_integer(BigInt::from(x)), c: 1 })
            .collect();
        MetricDivisor { vertex: w.w.clone(), edge }
    }

    pub fn to_multidegree(&self, m: &MetricGraph) -> Result<AdmissibleMultidegree> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        if !self.is_edge_reduced() {
            return Err(Error::NotEdgeReduced);
        }
        let mut mu = vec![0; m.ne()];
        for c in &self.edge {
            mu[c.edge] = c.t.to_integer().try_into().expect("position fits in i64");
        }
        Ok(AdmissibleMultidegree { w: self.vertex.clone(), mu })
    }

    pub fn to_sub(&self, m: &MetricGraph) -> Result<Vec<i64>> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        let mut d = vec![0; m.sub.n_vertices()];
        d[..m.nv()].copy_from_slice(&self.vertex);
        for c in &self.edge {
            let t: i64 = c.t.to_integer().try_into().expect("position fits in i64");
            d[m.sub.at(c.edge, t)] += c.c;
        }
        Ok(d)
    }

    pub fn from_sub(m: &MetricGraph, d: &[i64]) -> Self {
        let mut edge = Vec::new();
        for (e, chain) in m.sub.chains.iter().enumerate() {
            for (t, &x) in chain.iter().enumerate().take(chain.len() - 1).skip(1) {
                if d[x] != 0 {
                    edge.push(EdgeChip { edge: e, t: Q::from_integer(BigInt::from(t)), c: d[x] });
                }
            }
        }
        MetricDivisor { vertex: d[..m.nv()].to_vec(), edge }
    }

    /// The same divisor after flipping the listed edges: positions t become n - t.
    pub fn reoriented(&self, m: &MetricGraph, flipped: &[bool]) -> Self {
        let chips = self
            .edge
            .iter()
            .map(|c| {
                let t = if flipped[c.edge] { Q::from_integer(BigInt::from(m.edge(c.edge).n)) - &c.t } else { c.t.clone() };
                EdgeChip { edge: c.edge, t, c: c.c }
            })
            .collect();
        MetricDivisor::new(m, self.vertex.clone(), chips).expect("positions stay interior")
    }

    /// Lengths multiplied by k (positions scale with them); used to clear denominators.
    pub fn scaled(&self, m: &MetricGraph, k: i64) -> Self {
        let mk = m.scaled(k);
        let kq = Q::from_integer(BigInt::from(k));
        let chips = self.edge.iter().map(|c| EdgeChip { edge: c.edge, t: &c.t * &kq, c: c.c }).collect();
        MetricDivisor::new(&mk, self.vertex.clone(), chips).expect("positions stay interior")
    }

    /// Least common multiple of the denominators of the positions.
    pub fn denominator_lcm(&self) -> i64 {
        let mut l = BigInt::one();
        for c in &self.edge {
            l = l.lcm(c.t.denom());
        }
        l.try_into().expect("denominator fits in i64")
    }
}

/// An integer-valued function on the vertices of the subdivided graph, i.e. a piecewise linear
/// function on the metric graph with integer slopes and breaks only at integer points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlFunction {
    pub values: Vec<i64>,
}

impl PlFunction {
    pub fn zero(sub: &SubdividedGraph) -> Self {
        PlFunction { values: vec![0; sub.n_vertices()] }
    }

    /// div(f)(x) = sum over neighbours y of f(y) - f(x), so firing a set S once is adding
    /// div of its indicator.
    pub fn div(&self, sub: &SubdividedGraph) -> Vec<i64> {
        (0..sub.n_vertices())
            .map(|x| sub.adj[x].iter().map(|&y| self.values[y] - self.values[x]).sum())
            .collect()
    }

    /// Outgoing slope of f along edge e at its endpoint v.
    pub fn slope(&self, m: &MetricGraph, e: usize, v: usize) -> i64 {
        self.values[m.sub.next_from(e, v)] - self.values[v]
    }

    pub fn sub(&self, o: &PlFunction) -> PlFunction {
        PlFunction { values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &PlFunction) -> PlFunction {
        PlFunction { values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }

    /// Shifted so that the minimum is 0.
    pub fn normalized(&self) -> PlFunction {
        let m = self.values.iter().copied().min().unwrap_or(0);
        PlFunction { values: self.values.iter().map(|v| v - m).collect() }
    }
}

pub fn add_div(d: &[i64], f: &PlFunction, sub: &SubdividedGraph) -> Vec<i64> {
    d.iter().zip(f.div(sub)).map(|(a, b)| a + b).collect()
}

fn bfs_dist(sub: &SubdividedGraph, q: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; sub.n_vertices()];
    dist[q] = 0;
    let mut queue = VecDeque::from([q]);
    while let Some(x) = queue.pop_front() {
        for &y in &sub.adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Fire every vertex of `set` k times.
fn fire(sub: &SubdividedGraph, d: &mut [i64], c: &mut [i64], set: &[bool], k: i64) {
    for x in 0..sub.n_vertices() {
        if !set[x] {
            continue;
        }
        c[x] += k;
        for &y in &sub.adj[x] {
            if !set[y] {
                d[x] -= k;
                d[y] += k;
            }
        }
    }
}

/// Dhar's burning from q: the vertices that do not burn, or None if everything burns.
fn unburnt(sub: &SubdividedGraph, d: &[i64], q: usize) -> Option<Vec<bool>> {
    let n = sub.n_vertices();
    let mut burnt = vec![false; n];
    let mut hits = vec![0i64; n];
    burnt[q] = true;
    let mut queue = VecDeque::from([q]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &sub.adj[x] {
            if burnt[y] {
                continue;
            }
            hits[y] += 1;
            if hits[y] > d[y] {
                burnt[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    if count == n {
        None
    } else {
        Some(burnt.into_iter().map(|b| !b).collect())
    }
}

/// The q-reduced divisor equivalent to d, with f such that reduced = d + div(f).
pub fn dhar_reduce(sub: &SubdividedGraph, d: &[i64], q: usize) -> (Vec<i64>, PlFunction) {
    let n = sub.n_vertices();
    let mut d = d.to_vec();
    let mut c = vec![0i64; n];
    let dist = bfs_dist(sub, q);
    let maxd = dist.iter().copied().max().unwrap_or(0);
    // make d effective away from q, ring by ring from the outside in
    for k in (1..=maxd).rev() {
        let mut times = 0;
        for x in 0..n {
            if dist[x] == k && d[x] < 0 {
                let inner = sub.adj[x].iter().filter(|&&y| dist[y] + 1 == k).count() as i64;
                times = times.max(Integer::div_ceil(&(-d[x]), &inner));
            }
        }
        if times > 0 {
            let ball: Vec<bool> = dist.iter().map(|&t| t < k).collect();
            fire(sub, &mut d, &mut c, &ball, times);
        }
    }
    while let Some(set) = unburnt(sub, &d, q) {
        let mut times = i64::MAX;
        for x in 0..n {
            if set[x] {
                let out = sub.adj[x].iter().filter(|&&y| !set[y]).count() as i64;
                if out > 0 {
                    times = times.min(d[x] / out);
                }
            }
        }
        debug_assert!(times >= 1);
        fire(sub, &mut d, &mut c, &set, times);
    }
    (d, PlFunction { values: c })
}

/// Effective away from q and fully burnt from q.
pub fn is_reduced(sub: &SubdividedGraph, d: &[i64], q: usize) -> bool {
    (0..d.len()).all(|x| x == q || d[x] >= 0) && unburnt(sub, d, q).is_none()
}

/// Reducedness decided directly on the metric graph: edges are cut at the chips into segments
/// and the fire spreads along segments. Works for rational positions. `q` is a vertex of G.
pub fn is_reduced_metric(m: &MetricGraph, d: &MetricDivisor, q: usize) -> bool {
    if d.vertex.iter().enumerate().any(|(v, &x)| v != q && x < 0) || d.edge.iter().any(|c| c.c < 0) {
        return false;
    }
    // nodes: vertices of G, then one node per chip
    let mut coef: Vec<i64> = d.vertex.clone();
    let mut segs: Vec<(usize, usize)> = Vec::new();
    for e in 0..m.ne() {
        let mut prev = m.edge(e).tail;
        for ch in d.edge.iter().filter(|c| c.edge == e) {
            let node = coef.len();
            coef.push(ch.c);
            segs.push((prev, node));
            prev = node;
        }
        segs.push((prev, m.edge(e).head));
    }
    let total = coef.len();
    let mut burnt = vec![false; total];
    burnt[q] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..total {
            if burnt[x] {
                continue;
            }
            let dirs = segs
                .iter()
                .filter(|&&(a, b)| (a == x && burnt[b]) || (b == x && burnt[a]))
                .count() as i64;
            if dirs > coef[x] {
                burnt[x] = true;
                changed = true;
            }
        }
    }
    burnt.into_iter().all(|b| b)
}

/// K = valence - 2 at every vertex of the subdivided graph.
pub fn canonical_divisor(sub: &SubdividedGraph) -> Vec<i64> {
    sub.adj.iter().map(|a| a.len() as i64 - 2).collect()
}

/// Base vertex for equivalence tests: the lexicographically least vertex id.
pub const BASE: usize = 0;

/// Some f with d2 = d1 + div(f), if the two divisors are equivalent.
pub fn linearly_equivalent(sub: &SubdividedGraph, d1: &[i64], d2: &[i64]) -> Option<PlFunction> {
    if d1.iter().sum::<i64>() != d2.iter().sum::<i64>() {
        return None;
    }
    let (r1, f1) = dhar_reduce(sub, d1, BASE);
    let (r2, f2) = dhar_reduce(sub, d2, BASE);
    (r1 == r2).then(|| f1.sub(&f2))
}

pub const DEFAULT_RANK_CAP: i64 = 24;

/// Rank of divisors on the subdivided graph, memoised on reduced forms at the base vertex.
///
/// r(D) = -1 when D is not equivalent to an effective divisor, and otherwise
/// 1 + min over vertices x of r(D - x). Subtracted points range over all vertices of the
/// subdivided graph.
pub struct RankSolver<'a> {
    sub: &'a SubdividedGraph,
    memo: HashMap<Vec<i64>, i64>,
    pub cap: i64,
}

impl<'a> RankSolver<'a> {
    pub fn new(sub: &'a SubdividedGraph) -> Self {
        RankSolver { sub, memo: HashMap::new(), cap: DEFAULT_RANK_CAP }
    }

    pub fn rank(&mut self, d: &[i64]) -> Result<i64> {
        let deg: i64 = d.iter().sum();
        if deg < 0 {
            return Ok(-1);
        }
        if deg > self.cap {
            return Err(Error::DegreeCap(deg, self.cap));
        }
        Ok(self.rank_inner(d))
    }

    fn rank_inner(&mut self, d: &[i64]) -> i64 {
        if d.iter().sum::<i64>() < 0 {
            return -1;
        }
        let (red, _) = dhar_reduce(self.sub, d, BASE);
        if red[BASE] < 0 {
            return -1;
        }
        if let Some(&r) = self.memo.get(&red) {
            return r;
        }
        let mut best = i64::MAX;
        let mut e = red.clone();
        for x in 0..self.sub.n_vertices() {
            e[x] -= 1;
            let r = self.rank_inner(&e);
            e[x] += 1;
            best = best.min(r + 1);
            if best == 0 {
                break;
            }
        }
        self.memo.insert(red, best);
        best
    }
}

pub fn rank(sub: &SubdividedGraph, d: &[i64]) -> Result<i64> {
    RankSolver::new(sub).rank(d)
}
