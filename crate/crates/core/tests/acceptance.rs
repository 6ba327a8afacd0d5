//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use troplift::divisor::{canonical_divisor, dhar_reduce, AdmissibleMultidegree, EdgeChip, MetricDivisor, RankSolver};
use troplift::fixtures::{banana_graph, banana_multidegree, glued_lines};
use troplift::graph::{MetricGraph, Multigraph};
use troplift::lifting::{lift_rank_one, lift_vertex_avoiding, rank_one_dprime, RankOneLift};
use troplift::p1::ConstantPool;
use troplift::series::{
    check_condition_i, check_weak_glueing, forgetful, inverse_forgetful, multivanishing, normalize_mc, GlueVerdict,
    PreLimitSeries,
};
use troplift::smoothing::{check_condition_ii, classify, fibre_max_dprime, ContextFlags, VerdictKind, RULE_EQUIVALENCE, RULE_NECESSITY};
use troplift::twisting::{
    formal_degree, is_tight, negative_twist, partial_twist_times, relative_twist_divisor, tight_tuple, twist, twist_set,
    twisting_divisors, Formal, TightTuple,
};
use troplift::{Error, Result};

const FIXTURE_25_BUDGET: Duration = Duration::from_millis(100);
const FIXTURE_411_BUDGET: Duration = Duration::from_secs(1);
const RANK_ONE_PIPELINE_BUDGET: Duration = Duration::from_secs(60);

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn lift<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{}: {}", what, e))
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{:02}", i)).collect()
}

/// Random multitree: a random tree (a chain when `chain`) whose edges are fibres of 1..=max_par
/// parallel edges of lengths 1..=max_len, directed from the smaller vertex.
fn random_multitree(rng: &mut ChaCha8Rng, nv: usize, max_par: usize, max_len: i64, chain: bool) -> MetricGraph {
    let vs = names(nv);
    let mut edges = Vec::new();
    for i in 1..nv {
        let p = if chain { i - 1 } else { rng.gen_range(0..i) };
        for _ in 0..rng.gen_range(1..=max_par) {
            edges.push((format!("e{:02}", edges.len()), vs[p].clone(), vs[i].clone(), rng.gen_range(1..=max_len)));
        }
    }
    MetricGraph::new(Multigraph::new(vs, edges).unwrap()).unwrap()
}

fn random_multidegree(rng: &mut ChaCha8Rng, m: &MetricGraph) -> AdmissibleMultidegree {
    let w = (0..m.nv()).map(|_| rng.gen_range(-2..=4)).collect();
    let mu = (0..m.ne()).map(|e| rng.gen_range(0..m.edge(e).n)).collect();
    AdmissibleMultidegree::new(m, w, mu).unwrap()
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let m = banana_graph();
    let w = banana_multidegree(&m);
    let w2 = twist(&m, &w, 0);
    check(w2.w == vec![2, 1] && w2.mu == vec![2, 0, 1], "twist at v is not (2,1;2,0,1)")?;
    // expected placements: chips at distance mu(e) from v on e1 and e2, then on e1 and e3
    let chip = |e: usize, t: i64| EdgeChip { edge: e, t: q(t), c: 1 };
    let left = MetricDivisor::new(&m, vec![3, 0], vec![chip(0, 1), chip(1, 1)]).unwrap();
    let right = MetricDivisor::new(&m, vec![2, 1], vec![chip(0, 2), chip(2, 1)]).unwrap();
    check(MetricDivisor::from_multidegree(&m, &w) == left, "D_w has the wrong placements")?;
    check(MetricDivisor::from_multidegree(&m, &w2) == right, "D_w' has the wrong placements")?;
    let el = start.elapsed();
    check(el < FIXTURE_25_BUDGET, &format!("took {:?}", el))?;
    Ok(format!("{:?}", el))
}

// ---------------------------------------------------------------- criterion 2

fn criterion_2() -> Outcome {
    let m = banana_graph();
    let wv = banana_multidegree(&m);
    let wv2 = partial_twist_times(&m, &wv, 0, 0, 3).map_err(|e| e.to_string())?;
    let s = lift(twisting_divisors(&m, &wv, 0, 0, 4), "twisting divisors")?;
    let expect: Vec<Formal> = vec![
        Formal::new(),
        [(2, 1)].into(),
        [(1, 1), (2, 1)].into(),
        [(1, 1), (2, 1)].into(),
        [(0, 1), (1, 2), (2, 2)].into(),
    ];
    check(s.divs == expect, &format!("sequence {:?}", s.divs))?;
    check(s.critical() == vec![0, 1, 3], &format!("critical {:?}", s.critical()))?;
    let t = TightTuple { w: vec![wv, wv2], b: vec![3] };
    check(lift(is_tight(&m, &t), "is_tight")?, "(w_v, w_v') is not tight")?;
    Ok("b = 3".into())
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let pool = ConstantPool::default();
    let ex = lift(glued_lines(), "fixture")?;
    let (m, comps) = (&ex.m, &ex.comps);
    check(lift(check_condition_i(m, comps, &ex.series), "condition (I)")?.holds(), "condition (I) fails")?;
    let mv = lift(multivanishing(m, comps, &ex.series.spaces[0], &lift(twisting_divisors(m, &ex.tuple.w[0], 0, 0, 2), "seq")?), "mv")?;
    check(mv.values == vec![0, 2], &format!("multivanishing at v {:?}", mv.values))?;
    let mv2 = lift(multivanishing(m, comps, &ex.series.spaces[1], &lift(twisting_divisors(m, &ex.tuple.w[1], 0, 1, 2), "seq")?), "mv")?;
    check(mv2.values == vec![0, 1], &format!("multivanishing at v' {:?}", mv2.values))?;
    check(ex.tuple.b == vec![1], &format!("b = {:?}", ex.tuple.b))?;
    let dv = lift(relative_twist_divisor(m, &ex.w0, &ex.tuple.w[0], 0), "D^v")?;
    let dv2 = lift(relative_twist_divisor(m, &ex.w0, &ex.tuple.w[1], 1), "D^v'")?;
    check(dv.is_empty(), "D^v is not 0")?;
    // Q' is the marked point of e2 on v'
    check(dv2 == Formal::from([(1, 1)]), &format!("D^v' = {:?}", dv2))?;
    let wg = lift(check_weak_glueing(m, comps, &ex.series, &pool), "weak glueing")?;
    check(wg.verdict == GlueVerdict::Violated && wg.failed_at() == vec![(0, 0)], &format!("failed at {:?}", wg.failed_at()))?;
    let ctx = ContextFlags::for_series(m, &ex.mc, true, None);
    let v = lift(classify(m, comps, &ex.mc, &ctx, &pool), "classify")?;
    check(v.kind == VerdictKind::NotSmoothable && v.rule == Some(RULE_NECESSITY), &format!("verdict {:?} {:?}", v.kind, v.rule))?;
    let el = start.elapsed();
    check(el < FIXTURE_411_BUDGET, &format!("took {:?}", el))?;
    Ok(format!("{:?}", el))
}

// ---------------------------------------------------------------- criterion 4

/// Random connected multigraph with unit lengths: a random spanning tree plus `extra` edges.
fn random_graph(rng: &mut ChaCha8Rng, nv: usize, extra: usize) -> MetricGraph {
    let vs = names(nv);
    let mut pairs = Vec::new();
    for i in 1..nv {
        pairs.push((rng.gen_range(0..i), i));
    }
    while pairs.len() < nv - 1 + extra {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| (format!("e{:02}", k), vs[a].clone(), vs[b].clone(), 1))
        .collect();
    MetricGraph::new(Multigraph::new(vs, edges).unwrap()).unwrap()
}

/// Brute-force rank on a graph with unit lengths. Equivalence is decided by membership of the
/// difference in the image of the Laplacian, via the adjugate of the reduced Laplacian; every
/// effective divisor of the right degree is tried.
struct BruteRank {
    n: usize,
    adj: Vec<Vec<i64>>,
    det: i64,
}

fn determinant(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    // Laplace expansion; matrices here are at most 5x5
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = a[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * a[0][j] * determinant(&minor)
        })
        .sum()
}

impl BruteRank {
    fn new(m: &MetricGraph) -> Self {
        let n = m.nv();
        let mut lap = vec![vec![0i64; n]; n];
        for e in m.g.edges() {
            lap[e.tail][e.tail] += 1;
            lap[e.head][e.head] += 1;
            lap[e.tail][e.head] -= 1;
            lap[e.head][e.tail] -= 1;
        }
        let red: Vec<Vec<i64>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
        let k = n - 1;
        let det = determinant(&red);
        let mut adj = vec![vec![0i64; k]; k];
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let minor: Vec<Vec<i64>> = (0..k)
                    .filter(|&r| r != j)
                    .map(|r| (0..k).filter(|&c| c != i).map(|c| red[r][c]).collect())
                    .collect();
                *cell = if (i + j) % 2 == 0 { 1 } else { -1 } * determinant(&minor);
            }
        }
        BruteRank { n, adj, det }
    }

    fn principal(&self, x: &[i64]) -> bool {
        if x.iter().sum::<i64>() != 0 {
            return false;
        }
        self.adj.iter().all(|row| row.iter().zip(&x[1..]).map(|(a, b)| a * b).sum::<i64>() % self.det == 0)
    }

    fn effective_of_degree(&self, d: i64) -> Vec<Vec<i64>> {
        fn go(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if cur.len() == n - 1 {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for k in 0..=left {
                cur.push(k);
                go(n, left - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d >= 0 {
            go(self.n, d, &mut Vec::new(), &mut out);
        }
        out
    }

    fn has_effective(&self, d: &[i64]) -> bool {
        let deg: i64 = d.iter().sum();
        self.effective_of_degree(deg)
            .iter()
            .any(|e| self.principal(&d.iter().zip(e).map(|(a, b)| a - b).collect::<Vec<_>>()))
    }

    fn rank(&self, d: &[i64]) -> i64 {
        let deg: i64 = d.iter().sum();
        let mut r = -1;
        for k in 0..=deg.max(-1) + 1 {
            let ok = self
                .effective_of_degree(k)
                .iter()
                .all(|e| self.has_effective(&d.iter().zip(e).map(|(a, b)| a - b).collect::<Vec<_>>()));
            if !ok {
                break;
            }
            r = k;
        }
        r
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (graphs, per_graph) = (24, 10);
    let mut brute_checked = 0;
    for _ in 0..graphs {
        let nv = rng.gen_range(2..=6);
        let g = rng.gen_range(0..=3);
        let m = random_graph(&mut rng, nv, g);
        let k = canonical_divisor(&m.sub);
        let brute = BruteRank::new(&m);
        let mut solver = RankSolver::new(&m.sub);
        for _ in 0..per_graph {
            let target = rng.gen_range(-6..=6i64);
            let mut d = vec![0i64; nv];
            for _ in 0..target.unsigned_abs() {
                d[rng.gen_range(0..nv)] += target.signum();
            }
            // shuffle chips around without changing the degree
            for _ in 0..rng.gen_range(0..3) {
                let (a, b) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
                d[a] += 1;
                d[b] -= 1;
            }
            let kd: Vec<i64> = k.iter().zip(&d).map(|(a, b)| a - b).collect();
            let r = lift(solver.rank(&d), "rank")?;
            let rk = lift(solver.rank(&kd), "rank")?;
            let deg: i64 = d.iter().sum();
            check(r - rk == deg + 1 - m.genus(), &format!("Riemann-Roch fails for {:?} on {:?}", d, m.g))?;
            let b = brute.rank(&d);
            check(b == r, &format!("rank {} but brute force {} for {:?}", r, b, d))?;
            brute_checked += 1;
        }
    }
    Ok(format!("{} divisors on {} graphs, {} against brute force", graphs * per_graph, graphs, brute_checked))
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = 150;
    for _ in 0..cases {
        let nv = rng.gen_range(2..=5);
        let m = random_multitree(&mut rng, nv, 3, 5, false);
        let w = random_multidegree(&mut rng, &m);
        let (u, v) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        check(twist(&m, &twist(&m, &w, u), v) == twist(&m, &twist(&m, &w, v), u), "twists do not commute")?;
        check(negative_twist(&m, &twist(&m, &w, v), v) == w, "negative twist does not undo a twist")?;
        check(twist(&m, &negative_twist(&m, &w, v), v) == w, "twist does not undo a negative twist")?;
        check(twist_set(&m, &w, &vec![true; nv]) == w, "twisting every vertex is not the identity")?;
        let te = rng.gen_range(0..m.tree.edges.len());
        let side = m.tree.edges[te].a;
        let k = rng.gen_range(1..=6);
        let there = lift(partial_twist_times(&m, &w, te, side, k), "partial twist")?;
        let back = lift(partial_twist_times(&m, &there, te, side, -k), "partial twist")?;
        check(back == w, "partial twists do not invert")?;
        check(there.degree() == w.degree(), "partial twist changed the degree")?;
    }
    Ok(format!("{} cases", cases))
}

// ---------------------------------------------------------------- criteria 6, 9

/// Random chain with 2..=5 loops in total, fibres of at most `max_par` edges and lengths
/// satisfying condition (II) at d' = min(2g - 2, g + 1).
fn random_chain(rng: &mut ChaCha8Rng, max_par: usize) -> MetricGraph {
    loop {
        let nv = rng.gen_range(2..=5);
        let m = random_multitree(rng, nv, max_par, 7, true);
        let g = m.genus();
        if (2..=5).contains(&g) && check_condition_ii(&m, rank_one_dprime(g)).unwrap() {
            return m;
        }
    }
}

/// Random integral divisor of rank exactly r on the subdivision, reduced at a random vertex of G
/// (hence edge-reduced), or None after a bounded search.
fn random_rank_divisor(rng: &mut ChaCha8Rng, m: &MetricGraph, r: i64, degrees: &[i64]) -> Option<MetricDivisor> {
    let mut solver = RankSolver::new(&m.sub);
    let n = m.sub.n_vertices();
    for _ in 0..200 {
        let deg = degrees[rng.gen_range(0..degrees.len())];
        let mut d = vec![0i64; n];
        // chips at vertices of G are far more likely to give special divisors
        for _ in 0..deg {
            let x = if rng.gen_bool(0.7) { rng.gen_range(0..m.nv()) } else { rng.gen_range(0..n) };
            d[x] += 1;
        }
        if solver.rank(&d).ok()? != r {
            continue;
        }
        let (red, _) = dhar_reduce(&m.sub, &d, rng.gen_range(0..m.nv()));
        return Some(MetricDivisor::from_sub(m, &red));
    }
    None
}

struct RankOneCase {
    m: MetricGraph,
    lifted: RankOneLift,
}

fn rank_one_cases(rng: &mut ChaCha8Rng, want: usize) -> std::result::Result<Vec<RankOneCase>, String> {
    let pool = ConstantPool::default();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want {
        tries += 1;
        if tries > 50 * want {
            return Err(format!("only {} rank-one divisors found", out.len()));
        }
        let m = random_chain(rng, 3);
        let g = m.genus();
        let degrees: Vec<i64> = (2..=rank_one_dprime(g)).collect();
        let Some(d) = random_rank_divisor(rng, &m, 1, &degrees) else { continue };
        let lifted = lift(lift_rank_one(&m, &d, None, &pool), &format!("lift_rank_one on {:?} with {:?}", m.g, d))?;
        out.push(RankOneCase { m, lifted });
    }
    Ok(out)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let pool = ConstantPool::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = rank_one_cases(&mut rng, 24)?;
    for c in &cases {
        let RankOneLift::Series { series, comps, w0 } = &c.lifted else {
            return Err("degree above 2g - 2 cannot have rank one here".into());
        };
        check(lift(check_condition_i(&c.m, comps, series), "condition (I)")?.holds(), "output fails condition (I)")?;
        let wg = lift(check_weak_glueing(&c.m, comps, series, &pool), "weak glueing")?;
        check(wg.verdict == GlueVerdict::Satisfied, &format!("weak glueing {:?}", wg.verdict))?;
        let mc = lift(forgetful(&c.m, comps, series, w0), "forgetful")?;
        let ctx = ContextFlags::for_series(&c.m, &mc, true, Some(rank_one_dprime(c.m.genus())));
        let v = lift(classify(&c.m, comps, &mc, &ctx, &pool), "classify")?;
        check(
            v.kind == VerdictKind::Smoothable && v.rule == Some(RULE_EQUIVALENCE),
            &format!("verdict {:?} {:?} unmet {:?}", v.kind, v.rule, v.unmet),
        )?;
    }
    let el = start.elapsed();
    check(el < RANK_ONE_PIPELINE_BUDGET, &format!("took {:?}", el))?;
    Ok(format!("{} chains in {:?}", cases.len(), el))
}

fn roundtrip(m: &MetricGraph, comps: &[troplift::p1::MarkedComponent], s: &PreLimitSeries, w: &AdmissibleMultidegree) -> std::result::Result<(), String> {
    let mc = lift(forgetful(m, comps, s, w), "forgetful")?;
    let back = lift(inverse_forgetful(m, comps, &mc, &s.tuple), "inverse")?;
    check(back.normal_form() == s.normal_form(), "forgetful then inverse is not the identity")?;
    let again = lift(forgetful(m, comps, &back, w), "forgetful")?;
    check(
        lift(normalize_mc(m, comps, &again), "normalize")? == lift(normalize_mc(m, comps, &mc), "normalize")?,
        "inverse then forgetful is not the identity",
    )?;
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    let ex = lift(glued_lines(), "fixture")?;
    for w in [&ex.w0, &ex.tuple.w[0], &ex.tuple.w[1]] {
        roundtrip(&ex.m, &ex.comps, &ex.series, w)?;
        count += 1;
    }
    for c in rank_one_cases(&mut rng, 20)? {
        let RankOneLift::Series { series, comps, w0 } = &c.lifted else { continue };
        let mut ws = vec![w0.clone()];
        ws.extend(series.tuple.w.iter().cloned());
        for w in &ws {
            roundtrip(&c.m, comps, series, w)?;
            count += 1;
        }
    }
    check(count >= 50, &format!("only {} series", count))?;
    Ok(format!("{} series and base multidegrees", count))
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tuples, mut edges) = (0, 0);
    while tuples < 120 {
        let nv = rng.gen_range(2..=5);
        let m = random_multitree(&mut rng, nv, 3, 6, false);
        let w0 = random_multidegree(&mut rng, &m);
        let t = match tight_tuple(&m, &w0) {
            Ok(t) => t,
            // no tight tuple when the degree is too low to concentrate
            Err(Error::Inconsistent(_)) | Err(Error::NoEffective) => continue,
            Err(e) => return Err(e.to_string()),
        };
        tuples += 1;
        for (te, tr) in m.tree.edges.iter().enumerate() {
            let b = t.b[te] as usize;
            let sa = lift(twisting_divisors(&m, &t.w[tr.a], te, tr.a, b + 1), "seq")?;
            let sb = lift(twisting_divisors(&m, &t.w[tr.b], te, tr.b, b + 1), "seq")?;
            for i in 0..=b {
                let j = b - i;
                check(sa.increment(i) == sb.increment(j), &format!("increment support differs at i = {}", i))?;
                let da = formal_degree(&sa.divs[i + 1]) - formal_degree(&sa.divs[i]);
                let db = formal_degree(&sb.divs[j + 1]) - formal_degree(&sb.divs[j]);
                check(da == db, &format!("increment degree differs at i = {}", i))?;
            }
            edges += 1;
        }
    }
    Ok(format!("{} tuples, {} edges", tuples, edges))
}

// ---------------------------------------------------------------- criterion 8

/// min over relations sum x_i n_i = 0 with a unique positive x_j (|x_i| <= lcm) of
/// sum_i floor(x_j n_j / n_i), minus one.
fn brute_dprime(lengths: &[i64]) -> Option<i64> {
    use num_integer::Integer;
    let l = lengths.iter().fold(1, |a, &b| a.lcm(&b));
    let k = lengths.len();
    let mut best: Option<i64> = None;
    for j in 0..k {
        for xj in 1..=l {
            let floor_sum: i64 = lengths.iter().map(|&ni| xj * lengths[j] / ni).sum();
            if best.is_some_and(|b| floor_sum > b) {
                break;
            }
            // all other x_i <= 0 with sum (-x_i) n_i = x_j n_j
            let others: Vec<i64> = (0..k).filter(|&i| i != j).map(|i| lengths[i]).collect();
            let mut found = false;
            let mut stack = vec![(0usize, xj * lengths[j])];
            while let Some((idx, rest)) = stack.pop() {
                if idx == others.len() {
                    found |= rest == 0;
                    continue;
                }
                for y in 0..=(rest / others[idx]).min(l) {
                    stack.push((idx + 1, rest - y * others[idx]));
                }
            }
            if found {
                best = Some(best.map_or(floor_sum - 1, |b| b.min(floor_sum - 1)));
            }
        }
    }
    best
}

fn criterion_8() -> Outcome {
    check(fibre_max_dprime(&[4, 2, 3]) == Some(3), "max d' of (4,2,3) is not 3")?;
    check(fibre_max_dprime(&[2, 3]) == Some(4), "max d' of (2,3) is not 4")?;
    check(brute_dprime(&[4, 2, 3]) == Some(3) && brute_dprime(&[2, 3]) == Some(4), "oracle disagrees with the worked values")?;
    let mut count = 0;
    for a in 1..=8 {
        for b in a..=8 {
            for c in b..=8 {
                let (x, y) = (fibre_max_dprime(&[a, b, c]), brute_dprime(&[a, b, c]));
                check(x == y, &format!("({},{},{}): {:?} vs oracle {:?}", a, b, c, x, y))?;
                count += 1;
            }
            check(fibre_max_dprime(&[a, b]) == brute_dprime(&[a, b]), &format!("({},{}) disagrees", a, b))?;
        }
    }
    Ok(format!("{} triples", count))
}

// ---------------------------------------------------------------- criterion 10

fn criterion_10() -> Outcome {
    let pool = ConstantPool::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut by_rank = BTreeMap::<i64, usize>::new();
    let mut attempts = 0;
    while by_rank.values().sum::<usize>() < 24 || by_rank.get(&2).copied().unwrap_or(0) < 4 {
        attempts += 1;
        if attempts > 4000 {
            return Err(format!("constructed only {:?} vertex avoiding divisors", by_rank));
        }
        let nv = rng.gen_range(2..=4);
        let m = random_multitree(&mut rng, nv, 2, 7, true);
        let g = m.genus();
        let r = rng.gen_range(0..=2i64);
        if by_rank.get(&r).copied().unwrap_or(0) >= 10 {
            continue;
        }
        let degrees: Vec<i64> = (r.max(1)..=g + r + 1).collect();
        let Some(d) = random_rank_divisor(&mut rng, &m, r, &degrees) else { continue };
        match lift_vertex_avoiding(&m, &d, r, None, &pool) {
            Ok(l) => {
                check(lift(check_condition_i(&m, &l.comps, &l.series), "(I)")?.holds(), "output fails condition (I)")?;
                let wg = lift(check_weak_glueing(&m, &l.comps, &l.series, &pool), "weak glueing")?;
                check(wg.verdict == GlueVerdict::Satisfied, "output fails weak glueing")?;
                check(l.witnesses.len() == r as usize + 1, "missing D_j")?;
                *by_rank.entry(r).or_default() += 1;
            }
            Err(Error::NotVertexAvoiding(_)) | Err(Error::NoEffective) => {}
            Err(e) => return Err(format!("lift_vertex_avoiding: {} on {:?} with {:?}", e, m.g, d)),
        }
    }
    Ok(format!("lifted by rank {:?} in {} attempts", by_rank, attempts))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 banana twist fixture", criterion_1),
        ("2 twisting divisor fixture", criterion_2),
        ("3 glued lines end to end", criterion_3),
        ("4 Riemann-Roch and brute-force rank", criterion_4),
        ("5 twisting algebra", criterion_5),
        ("6 forgetful map bijection", criterion_6),
        ("7 twisting degree symmetry", criterion_7),
        ("8 max d' against oracle", criterion_8),
        ("9 rank-one lifting pipeline", criterion_9),
        ("10 vertex avoiding lifting pipeline", criterion_10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(msg) => println!("criterion {}: PASS ({}; {:.2?})", name, msg, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({})", name, msg)
            }
        }
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
