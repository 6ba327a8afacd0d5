//! troplift command line: reads a JSON bundle, runs one computation, prints JSON.
//!
//! Exit codes: 0 success, 1 a check came out other than `--expect` asked, 2 bad input or a
//! failed precondition.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use troplift::divisor::{dhar_reduce, is_reduced, linearly_equivalent, MetricDivisor, RankSolver};
use troplift::fixtures;
use troplift::graph::MetricGraph;
use troplift::io::{self, Bundle};
use troplift::lifting::{lift_dispatch, lift_rank_one, lift_vertex_avoiding, LiftPlan, RankOneLift};
use troplift::p1::{ConstantPool, MarkedComponent};
use troplift::series::{check_condition_i, check_weak_glueing, edge_data, forgetful, inverse_forgetful, GlueVerdict};
use troplift::smoothing::{check_residue_condition, check_residue_condition_w, classify, fibre_max_dprime, max_dprime, VerdictKind};
use troplift::twisting::{negative_twist, partial_twist_times, tight_tuple, twist, twisting_divisors};
use troplift::Error;

#[derive(Parser)]
#[command(name = "troplift", version, about = "Divisors on metric graphs, limit linear series and their smoothability")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Compact single-line JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Exit with 1 unless the command's check comes out this way.
    #[arg(long, global = true, value_enum)]
    expect: Option<Expect>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Pass,
    Fail,
}

#[derive(Args)]
struct Input {
    /// Bundle file, or - for standard input.
    bundle: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    RankOne,
    VertexAvoiding,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the graph and describe its tree and chain structure.
    Validate(Input),
    /// Reduce "divisor" at a vertex, with the witness function.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: String,
    },
    /// Rank of "divisor".
    Rank(Input),
    /// Whether "divisor" and "divisor2" are linearly equivalent.
    Equiv(Input),
    /// Twist "multidegree" at a vertex, or partially along the tree edge given by --edge.
    Twist {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: String,
        /// Twist at the complement of the vertex instead.
        #[arg(long)]
        negative: bool,
        /// Partial twist along the tree edge over this edge id (or "v|w").
        #[arg(long)]
        edge: Option<String>,
        /// Number of partial twists; negative values twist from the other side.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        times: i64,
    },
    /// Tight tuple of reduced multidegrees for "multidegree".
    Tight(Input),
    /// Twisting divisors D_0..D_top at (edge, vertex) for the tight tuple of "multidegree".
    Twistdiv {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        vertex: String,
        /// Defaults to b + 1.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Multivanishing sequences of "series" on both sides of every tree edge.
    Multivanish(Input),
    /// Validate "series" and check condition (I).
    CheckPrelimit(Input),
    /// Weak glueing of "series".
    CheckGlueing(Input),
    /// Series on the metrized complex for "series".
    Forgetful {
        #[command(flatten)]
        input: Input,
        /// Use w_v of the tight tuple instead of w0.
        #[arg(long)]
        base_vertex: Option<String>,
    },
    /// Pre-limit series for "mc".
    Invert(Input),
    /// Smoothability verdict for "mc" with "context".
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        strongly_bn_general: bool,
        #[arg(long)]
        d_prime: Option<i64>,
    },
    /// Largest d' allowed by the edge lengths.
    Dprime {
        #[command(flatten)]
        input: Input,
        /// Also check this value.
        #[arg(long)]
        d_prime: Option<i64>,
    },
    /// Whether chip positions are distinct modulo the fibre gcds ("divisor", else "multidegree").
    Residues(Input),
    /// Lift "divisor" to a pre-limit series on a chain.
    Lift {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Rank for the vertex avoiding construction (computed when absent).
        #[arg(long)]
        rank: Option<i64>,
    },
    /// Replay the worked examples against their expected values.
    Fixtures {
        /// Also write the example bundles into this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

struct Output {
    value: Value,
    /// Outcome of the command's check, for --expect.
    passed: Option<bool>,
}

fn out(value: Value) -> Output {
    Output { value, passed: None }
}

fn checked(value: Value, passed: bool) -> Output {
    Output { value, passed: Some(passed) }
}

fn load(input: &Input) -> Result<Bundle, Error> {
    let text = if input.bundle.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Malformed(format!("stdin: {}", e)))?;
        s
    } else {
        std::fs::read_to_string(&input.bundle)
            .map_err(|e| Error::Malformed(format!("{}: {}", input.bundle.display(), e)))?
    };
    Bundle::parse(&text)
}

fn pool() -> Result<ConstantPool, Error> {
    match std::env::var("TROPLIFT_SEED_POOL") {
        Ok(s) => ConstantPool::parse(&s),
        Err(_) => Ok(ConstantPool::default()),
    }
}

/// The graph with lengths multiplied so the divisors are integral, and the divisors on it.
fn integral(m: &MetricGraph, ds: &[MetricDivisor]) -> (MetricGraph, Vec<Vec<i64>>) {
    let k = ds.iter().fold(1i64, |a, d| num_integer::lcm(a, d.denominator_lcm()));
    let ms = m.scaled(k);
    let subs = ds.iter().map(|d| d.scaled(m, k).to_sub(&ms).expect("integral after scaling")).collect();
    (ms, subs)
}

fn vertex(m: &MetricGraph, id: &str) -> Result<usize, Error> {
    m.g.vertex_index(id)
}

fn lift_output(m: &MetricGraph, plan: Value, lifted: Option<(Vec<MarkedComponent>, troplift::series::PreLimitSeries, troplift::divisor::AdmissibleMultidegree)>) -> Value {
    let mut o = json!({"graph": io::graph_json(m), "plan": plan});
    if let Some((comps, s, w0)) = lifted {
        let (marked, named) = io::markings_json(&comps);
        o["markings"] = marked;
        o["named"] = named;
        o["series"] = io::series_json(m, &s, &w0);
    }
    o
}

fn rank_one(m: &MetricGraph, d: &MetricDivisor, comps: Option<&[MarkedComponent]>, pool: &ConstantPool, plan: Value) -> Result<Value, Error> {
    Ok(match lift_rank_one(m, d, comps, pool)? {
        RankOneLift::Series { series, comps, w0 } => lift_output(m, plan, Some((comps, series, w0))),
        RankOneLift::RiemannRoch { degree, genus } => lift_output(
            m,
            json!({"route": "riemann_roch", "degree": degree, "genus": genus, "from": plan}),
            None,
        ),
    })
}

fn run(cmd: &Cmd) -> Result<Output, Error> {
    let pool = pool()?;
    Ok(match cmd {
        Cmd::Validate(input) => {
            let b = load(input)?;
            let m = &b.graph;
            let chain = m.tree.chain_order(m.nv()).ok();
            out(json!({
                "valid": true,
                "genus": m.genus(),
                "vertices": m.nv(),
                "edges": m.ne(),
                "multitree": m.tree.is_multitree,
                "chain": chain.as_ref().map(|c| c.iter().map(|&v| m.g.vertices()[v].clone()).collect::<Vec<_>>()),
                "tree_edges": (0..m.tree.edges.len()).map(|te| json!({
                    "edge": io::tree_edge_name(m, te),
                    "fibre": m.tree.edges[te].fibre.iter().map(|&e| m.edge(e).id.clone()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }))
        }
        Cmd::Reduce { input, vertex: v } => {
            let b = load(input)?;
            let m = &b.graph;
            let d = b.divisor("divisor")?;
            let q = vertex(m, v)?;
            let sub = d.to_sub(m)?;
            let (red, f) = dhar_reduce(&m.sub, &sub, q);
            out(json!({
                "already_reduced": is_reduced(&m.sub, &sub, q),
                "reduced": io::divisor_json(m, &MetricDivisor::from_sub(m, &red)),
                "witness": io::pl_function_json(m, &f),
            }))
        }
        Cmd::Rank(input) => {
            let b = load(input)?;
            let d = b.divisor("divisor")?;
            let (ms, subs) = integral(&b.graph, &[d]);
            out(json!({"rank": RankSolver::new(&ms.sub).rank(&subs[0])?}))
        }
        Cmd::Equiv(input) => {
            let b = load(input)?;
            let (d1, d2) = (b.divisor("divisor")?, b.divisor("divisor2")?);
            let (ms, subs) = integral(&b.graph, &[d1, d2]);
            let f = linearly_equivalent(&ms.sub, &subs[0], &subs[1]);
            let scaled = ms.g != b.graph.g;
            let equivalent = f.is_some();
            checked(
                json!({
                    "equivalent": f.is_some(),
                    "witness": f.map(|f| io::pl_function_json(&ms, &f)),
                    "witness_graph": if scaled { Some(io::graph_json(&ms)) } else { None },
                }),
                equivalent,
            )
        }
        Cmd::Twist { input, vertex: v, negative, edge, times } => {
            let b = load(input)?;
            let m = &b.graph;
            let w = b.multidegree()?;
            let v = vertex(m, v)?;
            let w2 = match edge {
                Some(e) => {
                    if *negative {
                        return Err(Error::Malformed("--negative does not combine with --edge".into()));
                    }
                    partial_twist_times(m, &w, io::parse_tree_edge(m, e)?, v, *times)?
                }
                None => {
                    let inverse = *negative != (*times < 0);
                    let mut cur = w;
                    for _ in 0..times.unsigned_abs() {
                        cur = if inverse { negative_twist(m, &cur, v) } else { twist(m, &cur, v) };
                    }
                    cur
                }
            };
            out(json!({
                "multidegree": io::multidegree_json(m, &w2),
                "divisor": io::divisor_json(m, &MetricDivisor::from_multidegree(m, &w2)),
            }))
        }
        Cmd::Tight(input) => {
            let b = load(input)?;
            let t = tight_tuple(&b.graph, &b.multidegree()?)?;
            out(io::tuple_json(&b.graph, &t))
        }
        Cmd::Twistdiv { input, edge, vertex: v, top } => {
            let b = load(input)?;
            let m = &b.graph;
            let t = tight_tuple(m, &b.multidegree()?)?;
            let te = io::parse_tree_edge(m, edge)?;
            let v = vertex(m, v)?;
            if !m.tree.edges[te].touches(v) {
                return Err(Error::Malformed("the vertex is not an end of the edge".into()));
            }
            let top = top.unwrap_or(t.b[te] as usize + 1);
            out(io::twisting_seq_json(m, &twisting_divisors(m, &t.w[v], te, v, top)?))
        }
        Cmd::Multivanish(input) => {
            let b = load(input)?;
            let comps = b.require_markings()?;
            let (s, _) = b.series()?;
            out(Value::Array(edge_data(&b.graph, &comps, &s)?.iter().map(|e| io::edge_data_json(&b.graph, e)).collect()))
        }
        Cmd::CheckPrelimit(input) => {
            let b = load(input)?;
            let comps = b.require_markings()?;
            let (s, _) = b.series()?;
            let rep = check_condition_i(&b.graph, &comps, &s)?;
            checked(
                json!({"valid": true, "rank": s.rank, "degree": s.degree(), "condition_i": io::condition_i_json(&b.graph, &rep)}),
                rep.holds(),
            )
        }
        Cmd::CheckGlueing(input) => {
            let b = load(input)?;
            let comps = b.require_markings()?;
            let (s, _) = b.series()?;
            let rep = check_weak_glueing(&b.graph, &comps, &s, &pool)?;
            checked(io::weak_glueing_json(&b.graph, &rep), rep.verdict == GlueVerdict::Satisfied)
        }
        Cmd::Forgetful { input, base_vertex } => {
            let b = load(input)?;
            let comps = b.require_markings()?;
            let (s, w0) = b.series()?;
            let w = match base_vertex {
                Some(v) => s.tuple.w[vertex(&b.graph, v)?].clone(),
                None => w0,
            };
            out(io::mc_json(&b.graph, &forgetful(&b.graph, &comps, &s, &w)?))
        }
        Cmd::Invert(input) => {
            let b = load(input)?;
            let comps = b.require_markings()?;
            let mc = b.mc()?;
            let w = mc.gamma.to_multidegree(&b.graph)?;
            let t = tight_tuple(&b.graph, &w)?;
            out(io::series_json(&b.graph, &inverse_forgetful(&b.graph, &comps, &mc, &t)?, &w))
        }
        Cmd::Classify { input, strongly_bn_general, d_prime } => {
            let b = load(input)?;
            let comps = b.require_markings()?;
            let mc = b.mc()?;
            let mut ctx = b.context(&mc)?;
            ctx.strongly_bn_general |= strongly_bn_general;
            if d_prime.is_some() {
                ctx.d_prime = *d_prime;
            }
            let v = classify(&b.graph, &comps, &mc, &ctx, &pool)?;
            checked(io::verdict_json(&b.graph, &v), v.kind == VerdictKind::Smoothable)
        }
        Cmd::Dprime { input, d_prime } => {
            let b = load(input)?;
            let m = &b.graph;
            let bound = max_dprime(m)?;
            let fibres: Vec<Value> = m
                .tree
                .edges
                .iter()
                .enumerate()
                .map(|(te, t)| {
                    let lengths: Vec<i64> = t.fibre.iter().map(|&e| m.edge(e).n).collect();
                    json!({"edge": io::tree_edge_name(m, te), "lengths": lengths, "max_dprime": fibre_max_dprime(&lengths)})
                })
                .collect();
            let mut o = json!({"max_dprime": bound, "fibres": fibres});
            match d_prime {
                Some(dp) => {
                    let ok = bound.is_none_or(|x| *dp <= x);
                    o["condition_ii"] = json!(ok);
                    checked(o, ok)
                }
                None => out(o),
            }
        }
        Cmd::Residues(input) => {
            let b = load(input)?;
            let ok = if b.raw.contains_key("divisor") {
                check_residue_condition(&b.graph, &b.divisor("divisor")?)?
            } else {
                check_residue_condition_w(&b.graph, &b.multidegree()?)?
            };
            checked(json!({"distinct": ok}), ok)
        }
        Cmd::Lift { input, method, rank } => {
            let b = load(input)?;
            let m = &b.graph;
            let d = b.divisor("divisor")?;
            let comps = b.markings()?;
            match method {
                Method::RankOne => out(rank_one(m, &d, comps.as_deref(), &pool, json!({"route": "rank_one"}))?),
                Method::VertexAvoiding => {
                    let r = match rank {
                        Some(r) => *r,
                        None => RankSolver::new(&m.sub).rank(&d.to_sub(m)?)?,
                    };
                    let l = lift_vertex_avoiding(m, &d, r, comps.as_deref(), &pool)?;
                    let ids: Vec<Value> = l
                        .order
                        .iter()
                        .zip(&l.indices)
                        .map(|(&v, per_j)| json!({
                            "vertex": m.g.vertices()[v],
                            "m": per_j.iter().map(|x| x.m).collect::<Vec<_>>(),
                            "n": per_j.iter().map(|x| x.n).collect::<Vec<_>>(),
                        }))
                        .collect();
                    let dj: Vec<Value> = l.witnesses.iter().map(|(d, _)| io::sub_divisor_json(m, d)).collect();
                    out(lift_output(m, json!({"route": "vertex_avoiding", "rank": r, "d_j": dj, "indices": ids}), Some((l.comps, l.series, l.w0))))
                }
                Method::Auto => {
                    let (ms, plan) = lift_dispatch(m, &d)?;
                    let same = ms.g == m.g;
                    // markings refer to edge ids, which survive scaling
                    let comps = comps.as_deref();
                    match plan {
                        LiftPlan::Trivial { rank } => out(lift_output(&ms, json!({"route": "trivial", "rank": rank}), None)),
                        LiftPlan::Inconclusive { rank, reason } => {
                            out(lift_output(&ms, json!({"route": "inconclusive", "rank": rank, "reason": reason}), None))
                        }
                        LiftPlan::Direct => {
                            let ds = if same { d } else { d.scaled(m, scale_of(m, &ms)) };
                            out(rank_one(&ms, &ds, comps, &pool, json!({"route": "rank_one"}))?)
                        }
                        LiftPlan::Dual { rank, dual_rank, dual } => {
                            let dd = MetricDivisor::from_sub(&ms, &dual);
                            let plan = json!({"route": "dual", "rank": rank, "dual_rank": dual_rank, "lifted": io::divisor_json(&ms, &dd)});
                            if dual_rank == 1 {
                                out(rank_one(&ms, &dd, comps, &pool, plan)?)
                            } else {
                                out(lift_output(&ms, plan, None))
                            }
                        }
                        LiftPlan::Halving { half } => {
                            let dh = MetricDivisor::from_sub(&ms, &half);
                            out(rank_one(&ms, &dh, comps, &pool, json!({"route": "halving", "rank": 2, "lifted": io::divisor_json(&ms, &dh)}))?)
                        }
                    }
                }
            }
        }
        Cmd::Fixtures { write } => {
            if let Some(dir) = write {
                let w = |name: &str, v: Value| {
                    std::fs::write(dir.join(name), serde_json::to_string_pretty(&v).expect("serializable") + "\n")
                        .map_err(|e| Error::Malformed(format!("{}: {}", dir.display(), e)))
                };
                w("banana.json", fixtures::banana_bundle())?;
                w("glued_lines.json", fixtures::glued_lines_bundle()?)?;
            }
            let reps = fixtures::replay_all(&pool)?;
            let ok = reps.iter().all(|r| r.passed());
            let reports = Value::Array(reps.iter().map(|r| r.to_json()).collect());
            Output { value: json!({"passed": ok, "examples": reports}), passed: Some(ok) }
        }
    })
}

/// The factor by which `ms` scales the lengths of `m`.
fn scale_of(m: &MetricGraph, ms: &MetricGraph) -> i64 {
    ms.edge(0).n / m.edge(0).n
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let print = |v: &Value| {
        if cli.pretty {
            println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
        } else {
            println!("{}", v);
        }
    };
    match run(&cli.cmd) {
        Ok(o) => {
            print(&o.value);
            let fixtures_failed = matches!(cli.cmd, Cmd::Fixtures { .. }) && o.passed == Some(false);
            let mismatch = match (cli.expect, o.passed) {
                (Some(Expect::Pass), Some(p)) => !p,
                (Some(Expect::Fail), Some(p)) => p,
                _ => false,
            };
            if fixtures_failed || mismatch {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let v = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            // a failed check reported as an error still counts as a check outcome
            if matches!(e, Error::ConditionI(_)) && cli.expect == Some(Expect::Fail) {
                print(&v);
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", v);
            if matches!(e, Error::ConditionI(_)) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
