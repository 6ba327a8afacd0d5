//! Hypotheses of the dimension theorem, the residue condition and smoothability verdicts.

use num_integer::Integer;

use crate::divisor::{AdmissibleMultidegree, MetricDivisor};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::p1::{ConstantPool, MarkedComponent};
use crate::series::{check_mc_weak_glueing, GlueVerdict, MetrizedComplexSeries, WeakGlueingReport};
use crate::twisting::tight_tuple;

/// rho = g + (r + 1)(d - r - g).
pub fn expected_rho(g: i64, r: i64, d: i64) -> i64 {
    g + (r + 1) * (d - r - g)
}

/// Edges of G between any pair of adjacent vertices are at most this many.
pub const MAX_PARALLEL: usize = 3;

fn require_few_parallel(m: &MetricGraph, most: usize) -> Result<()> {
    m.require_multitree()?;
    if let Some(t) = m.tree.edges.iter().find(|t| t.fibre.len() > most) {
        return Err(Error::Hypotheses(format!(
            "{} edges join {} and {}, at most {} allowed",
            t.fibre.len(),
            m.g.vertices()[t.a],
            m.g.vertices()[t.b],
            most
        )));
    }
    Ok(())
}

/// Smallest x > 0 with x * lengths[j] in the monoid generated by the other lengths.
fn minimal_multiple(lengths: &[i64], j: usize) -> Option<i64> {
    let others: Vec<i64> = lengths.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &n)| n).collect();
    if others.is_empty() {
        return None;
    }
    let n = lengths[j];
    let bound = others.iter().fold(n, |a, &b| a.lcm(&b));
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for s in 1..=bound as usize {
        reach[s] = others.iter().any(|&o| o as usize <= s && reach[s - o as usize]);
    }
    (1..=bound / n).find(|&x| reach[(x * n) as usize])
}

/// Largest d' allowed by one fibre, or None when the fibre is a single edge.
pub fn fibre_max_dprime(lengths: &[i64]) -> Option<i64> {
    (0..lengths.len())
        .filter_map(|j| {
            let x = minimal_multiple(lengths, j)?;
            Some(lengths.iter().map(|&ni| x * lengths[j] / ni).sum::<i64>() - 1)
        })
        .min()
}

/// The largest d' for which every relation sum x_i n(e_i) = 0 with a unique positive x_j has
/// floor-sum above d'. None means no pair imposes a bound.
pub fn max_dprime(m: &MetricGraph) -> Result<Option<i64>> {
    require_few_parallel(m, MAX_PARALLEL)?;
    Ok(m
        .tree
        .edges
        .iter()
        .filter_map(|t| fibre_max_dprime(&t.fibre.iter().map(|&e| m.edge(e).n).collect::<Vec<_>>()))
        .min())
}

pub fn check_condition_ii(m: &MetricGraph, d_prime: i64) -> Result<bool> {
    Ok(max_dprime(m)?.is_none_or(|b| d_prime <= b))
}

/// Positions of the chips on the edges of each fibre, measured from the fibre's smaller vertex
/// (0 for an edge without a chip), after scaling so they are integers; they must be pairwise
/// distinct modulo the gcd of the scaled lengths.
pub fn check_residue_condition(m: &MetricGraph, d: &MetricDivisor) -> Result<bool> {
    m.require_multitree()?;
    if !d.is_edge_reduced() {
        return Err(Error::NotEdgeReduced);
    }
    let k = d.denominator_lcm();
    for t in &m.tree.edges {
        let g = t.fibre.iter().fold(0, |a, &e| a.gcd(&(k * m.edge(e).n)));
        let mut seen = Vec::new();
        for &e in &t.fibre {
            let edge = m.edge(e);
            let pos = d
                .edge
                .iter()
                .find(|c| c.edge == e)
                .map(|c| (&c.t * num_rational::BigRational::from_integer(k.into())).to_integer())
                .map(|x| i64::try_from(x).expect("position fits in i64"))
                .unwrap_or(0);
            let pos = if edge.tail == t.a { pos } else { (k * edge.n - pos) % (k * edge.n) };
            let class = pos.rem_euclid(g);
            if seen.contains(&class) {
                return Ok(false);
            }
            seen.push(class);
        }
    }
    Ok(true)
}

pub fn check_residue_condition_w(m: &MetricGraph, w: &AdmissibleMultidegree) -> Result<bool> {
    check_residue_condition(m, &MetricDivisor::from_multidegree(m, w))
}

/// Assertions and optional bounds that go with a series to be classified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextFlags {
    /// Stands in for strong Brill-Noether generality of the marked components.
    pub strongly_bn_general: bool,
    /// When absent the largest admissible d' is used.
    pub d_prime: Option<i64>,
    pub genus: i64,
    pub degree: i64,
    pub rank: i64,
}

impl ContextFlags {
    pub fn for_series(m: &MetricGraph, mc: &MetrizedComplexSeries, strongly_bn_general: bool, d_prime: Option<i64>) -> Self {
        ContextFlags { strongly_bn_general, d_prime, genus: m.genus(), degree: mc.degree(), rank: mc.rank as i64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Smoothable,
    NotSmoothable,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Smoothable => "Smoothable",
            VerdictKind::NotSmoothable => "NotSmoothable",
            VerdictKind::Inconclusive => "Inconclusive",
        }
    }
}

pub const RULE_RESIDUES: &str = "thm4.3";
pub const RULE_NECESSITY: &str = "thm4.5";
pub const RULE_EQUIVALENCE: &str = "thm4.8";
pub const RULE_RHO_ZERO: &str = "cor4.10";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub rule: Option<&'static str>,
    pub glueing: WeakGlueingReport,
    pub rho: i64,
    pub max_dprime: Option<i64>,
    pub d_prime: Option<i64>,
    pub residues_distinct: bool,
    /// Hypotheses of the dimension theorem that fail, in words.
    pub unmet: Vec<String>,
}

/// Verdict for a limit linear series on the metrized complex.
///
/// A failure of weak glueing rules out smoothing. Otherwise the series is smoothable when the
/// dimension-theorem hypotheses hold with d <= d' and weak glueing holds, or under the same
/// hypotheses when rho = 0, or when the residue condition holds on Brill-Noether general
/// components.
pub fn classify(
    m: &MetricGraph,
    comps: &[MarkedComponent],
    mc: &MetrizedComplexSeries,
    ctx: &ContextFlags,
    pool: &ConstantPool,
) -> Result<Verdict> {
    if ctx.genus != m.genus() || ctx.degree != mc.degree() || ctx.rank != mc.rank as i64 {
        return Err(Error::Malformed("context does not match the series".into()));
    }
    let w0 = mc.gamma.to_multidegree(m)?;
    let tuple = tight_tuple(m, &w0)?;
    let glueing = check_mc_weak_glueing(m, comps, mc, &tuple, pool)?;
    let rho = expected_rho(ctx.genus, ctx.rank, ctx.degree);
    let residues_distinct = check_residue_condition(m, &mc.gamma)?;
    let mut unmet = Vec::new();
    let bound = match max_dprime(m) {
        Ok(b) => b,
        Err(e) => {
            unmet.push(e.to_string());
            None
        }
    };
    let few_parallel = unmet.is_empty();
    if !ctx.strongly_bn_general {
        unmet.push("components not asserted strongly Brill-Noether general".into());
    }
    if few_parallel {
        if let (Some(dp), Some(b)) = (ctx.d_prime, bound) {
            if dp > b {
                unmet.push(format!("d' = {} exceeds the largest admissible value {}", dp, b));
            }
        }
        let dp = ctx.d_prime.or(bound);
        if let Some(dp) = dp {
            if ctx.degree > dp {
                unmet.push(format!("degree {} exceeds d' = {}", ctx.degree, dp));
            }
        }
    }
    let hyp = unmet.is_empty();
    let (kind, rule) = if glueing.verdict == GlueVerdict::Violated {
        (VerdictKind::NotSmoothable, Some(RULE_NECESSITY))
    } else if hyp && glueing.verdict == GlueVerdict::Satisfied {
        (VerdictKind::Smoothable, Some(RULE_EQUIVALENCE))
    } else if hyp && rho == 0 {
        (VerdictKind::Smoothable, Some(RULE_RHO_ZERO))
    } else if residues_distinct && ctx.strongly_bn_general {
        (VerdictKind::Smoothable, Some(RULE_RESIDUES))
    } else {
        (VerdictKind::Inconclusive, None)
    };
    Ok(Verdict { kind, rule, glueing, rho, max_dprime: bound, d_prime: ctx.d_prime, residues_distinct, unmet })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;

    fn pair(lengths: &[i64]) -> MetricGraph {
        let names: Vec<String> = (0..lengths.len()).map(|i| format!("e{}", i + 1)).collect();
        let edges: Vec<(&str, &str, &str, i64)> =
            names.iter().zip(lengths).map(|(e, &n)| (e.as_str(), "v", "w", n)).collect();
        MetricGraph::new(Multigraph::from_spec(&["v", "w"], &edges).unwrap()).unwrap()
    }

    #[test]
    fn rho_formula() {
        assert_eq!(expected_rho(1, 1, 2), 1);
        assert_eq!(expected_rho(4, 1, 3), 0);
        assert_eq!(expected_rho(0, 2, 5), 9);
    }

    #[test]
    fn dprime_of_small_fibres() {
        assert_eq!(fibre_max_dprime(&[4, 2, 3]), Some(3));
        assert_eq!(fibre_max_dprime(&[2, 3]), Some(4));
        assert_eq!(fibre_max_dprime(&[3, 5]), Some(7));
        assert_eq!(fibre_max_dprime(&[5, 7]), Some(11));
        assert_eq!(fibre_max_dprime(&[3, 4, 5]), Some(4));
        assert_eq!(fibre_max_dprime(&[7]), None);
        assert_eq!(max_dprime(&pair(&[4, 2, 3])).unwrap(), Some(3));
        assert!(max_dprime(&pair(&[1, 1, 1, 1])).is_err());
        assert!(check_condition_ii(&pair(&[2, 3]), 4).unwrap());
        assert!(!check_condition_ii(&pair(&[2, 3]), 5).unwrap());
    }

    #[test]
    fn residues() {
        let m = pair(&[2, 4]);
        let w = AdmissibleMultidegree::new(&m, vec![0, 0], vec![1, 2]).unwrap();
        assert!(check_residue_condition_w(&m, &w).unwrap());
        let m = pair(&[4, 2, 3]);
        let w = AdmissibleMultidegree::new(&m, vec![0, 0], vec![1, 1, 2]).unwrap();
        assert!(!check_residue_condition_w(&m, &w).unwrap());
        let m = pair(&[5]);
        let w = AdmissibleMultidegree::new(&m, vec![1, 0], vec![0]).unwrap();
        assert!(check_residue_condition_w(&m, &w).unwrap());
    }

    #[test]
    fn glued_lines_are_not_smoothable() {
        let ex = crate::fixtures::glued_lines().unwrap();
        let ctx = ContextFlags::for_series(&ex.m, &ex.mc, true, None);
        let v = classify(&ex.m, &ex.comps, &ex.mc, &ctx, &ConstantPool::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotSmoothable);
        assert_eq!(v.rule, Some(RULE_NECESSITY));
    }
}
