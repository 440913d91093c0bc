use gadgetlab::decode::{self, DecodeParams};
use gadgetlab::families::{
    self, compare_ft_bound, AgreeParams, Family, SearchMethod, Word,
};
use gadgetlab::hypergraph::{read_hgr, write_hgr, Hypergraph};
use gadgetlab::labelcover::{
    self, gen_planted_bipartite, gen_planted_layered, Assignment, BipartiteGenConfig, Instance, LayeredGenConfig,
};
use gadgetlab::reduction::{
    self, build_2k_gadget, build_k1_gadget, Coloring, GadgetHypergraph, MaterializeCaps, VerifyMode,
};
use gadgetlab::solvers::{self, MisMethod};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{parse_set, read_input, to_value, write_output, write_set, CliError, CliResult, Outcome};

pub fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Lc(c) => lc(c),
        Command::Family(c) => family(c),
        Command::Bounds(c) => bounds(c),
        Command::Reduce(c) => reduce(c),
        Command::Verify(c) => verify(c),
        Command::Solve(c) => solve(c),
        Command::Decode(c) => decode_cmd(c),
        Command::Pipeline(c) => pipeline(c),
    }
}

fn load_instance(path: &str) -> CliResult<Instance> {
    Ok(labelcover::read_instance(&read_input(path)?)?)
}

fn load_family(path: &str) -> CliResult<Family> {
    Ok(families::read_family(&read_input(path)?)?)
}

fn load_hgr(path: &str) -> CliResult<Hypergraph> {
    Ok(read_hgr(&read_input(path)?)?)
}

fn build_gadget(instance: Instance, q: u8, k: usize) -> CliResult<GadgetHypergraph> {
    Ok(match &instance {
        Instance::Bipartite(b) => build_2k_gadget(b, q, k)?,
        Instance::Layered(l) => build_k1_gadget(l, q, k)?,
    })
}

fn load_gadget(args: &GadgetArgs) -> CliResult<GadgetHypergraph> {
    build_gadget(load_instance(&args.instance)?, args.q, args.k)
}

fn verify_mode(args: &VerifyModeArgs) -> VerifyMode {
    match args.sampled {
        Some(probes) => VerifyMode::Sampled { probes, seed: args.seed },
        None => VerifyMode::Exhaustive { cap: args.cap },
    }
}

fn instance_summary(instance: &Instance) -> Value {
    match instance {
        Instance::Bipartite(b) => json!({
            "type": "bipartite",
            "U": b.left_count(),
            "V": b.right_count(),
            "L": b.left_alphabet(),
            "R": b.right_alphabet(),
            "constraints": b.edges().len(),
            "biregular": b.is_biregular(),
        }),
        Instance::Layered(l) => json!({
            "type": "layered",
            "layers": l.layers().iter().map(|x| json!({"size": x.size, "R": x.alphabet})).collect::<Vec<_>>(),
            "constraints": l.edges().len(),
        }),
    }
}

fn generate(
    kind: LcKind,
    bipartite: &BipartiteShape,
    layered: &LayeredShape,
    seed: u64,
) -> CliResult<(Instance, Assignment)> {
    Ok(match kind {
        LcKind::Bipartite => {
            let cfg = BipartiteGenConfig {
                left_count: bipartite.left,
                right_count: bipartite.right,
                left_alphabet: bipartite.left_alphabet,
                right_alphabet: bipartite.right_alphabet,
                left_degree: bipartite.degree,
                seed,
            };
            let (lc, a) = gen_planted_bipartite(&cfg)?;
            (Instance::Bipartite(lc), a)
        }
        LcKind::Layered => {
            let cfg = LayeredGenConfig {
                layer_sizes: layered.layers.clone(),
                alphabets: layered.alphabets.clone(),
                degree: layered.layer_degree,
                smoothness: layered.smoothness,
                seed,
            };
            let (lc, a) = gen_planted_layered(&cfg)?;
            (Instance::Layered(lc), a)
        }
    })
}

fn lc(command: LcCommand) -> CliResult<Outcome> {
    match command {
        LcCommand::Gen(a) => {
            let (instance, planted) = generate(a.kind, &a.bipartite, &a.layered, a.seed)?;
            write_output(&a.out, &labelcover::write_instance(&instance))?;
            if let Some(path) = &a.planted {
                write_output(path, &labelcover::write_assignment(&planted))?;
            }
            let satisfied = labelcover::eval_assignment(&instance, &planted)?;
            let report = json!({
                "instance": instance_summary(&instance),
                "seed": a.seed,
                "planted_fraction": satisfied.fraction,
            });
            // The instance itself already went to stdout.
            if a.out == "-" {
                return Ok(Outcome { report: Value::Null, ok: true });
            }
            Outcome::ok(report)
        }
        LcCommand::CheckSmooth(a) => {
            let Instance::Layered(l) = load_instance(&a.instance)? else {
                return Err(CliError::usage("smoothness is defined for layered instances"));
            };
            let report = labelcover::check_smoothness(&l, a.smoothness, a.s_max, a.samples, a.seed)?;
            let ok = report.passes;
            Outcome::check(report, ok)
        }
        LcCommand::CheckDense(a) => {
            let Instance::Layered(l) = load_instance(&a.instance)? else {
                return Err(CliError::usage("weak density is defined for layered instances"));
            };
            let report = labelcover::check_weak_density(&l, a.m, a.trials, a.seed)?;
            let ok = report.passes;
            Outcome::check(report, ok)
        }
        LcCommand::Eval(a) => {
            let instance = load_instance(&a.instance)?;
            let assignment = labelcover::read_assignment(&read_input(&a.assignment)?)?;
            Outcome::ok(labelcover::eval_assignment(&instance, &assignment)?)
        }
    }
}

fn family(command: FamilyCommand) -> CliResult<Outcome> {
    match command {
        FamilyCommand::Agreement(a) => {
            let words = a.words.iter().map(|w| Word::from_digits(a.q, w)).collect::<Result<Vec<_>, _>>()?;
            let agreement = families::agreement(&words)?;
            Outcome::ok(json!({"size": agreement.len(), "agreement": agreement}))
        }
        FamilyCommand::Check(a) => {
            let f = load_family(&a.family)?;
            let params = AgreeParams::new(a.k, a.t)?;
            let agreeing = families::is_k_wise_t_agreeing(&f, params);
            let intersecting = if f.alphabet() == 2 {
                Some(families::is_k_wise_t_intersecting(&f, a.k, a.t)?)
            } else {
                None
            };
            let report = json!({
                "size": f.len(),
                "k": a.k,
                "t": a.t,
                "agreeing": agreeing,
                "min_agreement": families::min_agreement(&f, a.k),
                "intersecting": intersecting,
            });
            Outcome::check(report, agreeing)
        }
        FamilyCommand::Shift(a) => {
            let f = load_family(&a.family)?;
            let shifted = families::shift_coordinate(&f, a.i)?;
            write_output(&a.out, &families::write_family(&shifted))?;
            if a.out == "-" {
                return Ok(Outcome { report: Value::Null, ok: true });
            }
            Outcome::ok(json!({"size": shifted.len(), "changed": shifted != f}))
        }
        FamilyCommand::Monotonize(a) => {
            let f = load_family(&a.family)?;
            let (m, moves) = families::monotonize_counting(&f)?;
            if let Some(path) = &a.out {
                write_output(path, &families::write_family(&m))?;
            }
            let t_before = families::min_agreement(&f, 3);
            let t_after = families::min_agreement(&m, 3);
            let report = json!({
                "size": m.len(),
                "moves": moves,
                "upward_closed": families::is_upward_closed(&m)?,
                "min_agreement_before": t_before,
                "min_agreement_after": t_after,
                "min_common_ones_after": families::min_common_ones(&m, 3)?,
            });
            Outcome::ok(report)
        }
        FamilyCommand::Search(a) => {
            let method = match a.method {
                FamilyMethod::Exact => SearchMethod::Exact,
                FamilyMethod::BranchAndBound => SearchMethod::BranchAndBound { node_limit: a.node_limit },
                FamilyMethod::Greedy => SearchMethod::Greedy { seed: a.seed, restarts: a.restarts },
            };
            let outcome = families::max_agreeing_family(a.n, a.q, AgreeParams::new(a.k, a.t)?, method)?;
            if let Some(path) = &a.out {
                write_output(path, &families::write_family(&outcome.witness))?;
            }
            let witness: Vec<String> = outcome.witness.iter().map(|w| w.to_digits()).collect();
            Outcome::ok(json!({
                "q": a.q,
                "n": a.n,
                "k": a.k,
                "t": a.t,
                "max_size": outcome.max_size,
                "exhaustive": outcome.exhaustive,
                "nodes_explored": outcome.nodes_explored,
                "witness": witness,
            }))
        }
    }
}

fn bounds(command: BoundsCommand) -> CliResult<Outcome> {
    match command {
        BoundsCommand::Ft(a) => {
            let bound = families::ft_ternary_bound(a.n, a.t)?;
            let text = bound.to_string();
            let value = text.parse::<u64>().map(Value::from).unwrap_or(Value::String(text));
            let mut report = json!({
                "n": a.n,
                "t": a.t,
                "bound": value,
                "bound_ln": families::ft_ternary_bound_ln(a.n, a.t)?,
            });
            if a.oracle {
                let c = compare_ft_bound(a.n as usize, a.q, a.k, a.t as usize, SearchMethod::Exact)?;
                report["comparison"] = to_value(c)?;
            }
            Outcome::ok(report)
        }
        BoundsCommand::Golden(a) => {
            if a.t > a.n {
                return Err(CliError::usage(format!("need t <= n, got n = {}, t = {}", a.n, a.t)));
            }
            Outcome::ok(json!({
                "n": a.n,
                "t": a.t,
                "bound": families::golden_ratio_bound(a.n, a.t),
                "bound_log2": families::golden_ratio_bound_log2(a.n, a.t),
            }))
        }
        BoundsCommand::Simplified(a) => Outcome::ok(json!({
            "n": a.n,
            "t": a.t,
            "bound": families::simplified_ternary_bound(a.n, a.t)?,
            "bound_ln": families::simplified_ternary_bound_ln(a.n, a.t)?,
        })),
    }
}

fn gadget_summary(g: &GadgetHypergraph) -> Value {
    json!({
        "kind": g.kind(),
        "q": g.q(),
        "k": g.k(),
        "uniformity": g.uniformity(),
        "clouds": g.cloud_count(),
        "vertices": g.vertex_count(),
        "candidate_tuples": reduction::materialize_estimate(g),
    })
}

fn reduce(command: ReduceCommand) -> CliResult<Outcome> {
    match command {
        ReduceCommand::TwoK(a) | ReduceCommand::KPlusOne(a) => reduce_one(a),
        ReduceCommand::Materialize(a) => {
            let g = load_gadget(&a.gadget)?;
            let caps = MaterializeCaps {
                max_vertices: a.max_vertices,
                max_edges: a.max_edges,
                max_evaluations: a.max_evaluations,
            };
            let explicit = reduction::materialize(&g, caps)?;
            write_output(&a.hgr_out, &write_hgr(&explicit.hypergraph))?;
            if let Some(path) = &a.map_out {
                write_output(path, &reduction::write_vertex_map(&explicit))?;
            }
            let mut report = gadget_summary(&g);
            report["edges"] = json!(explicit.hypergraph.edges().len());
            Outcome::ok(report)
        }
    }
}

fn reduce_one(a: ReduceArgs) -> CliResult<Outcome> {
    let instance = load_instance(&a.gadget.instance)?;
    let g = build_gadget(instance, a.gadget.q, a.gadget.k)?;
    let mut report = gadget_summary(&g);
    if let (Some(path), Some(out)) = (&a.assignment, &a.coloring_out) {
        let assignment = labelcover::read_assignment(&read_input(path)?)?;
        let coloring = reduction::completeness_coloring(&g, &assignment)?;
        write_output(out, &(coloring.to_json() + "\n"))?;
        report["colors"] = json!(coloring.num_colors());
    }
    Outcome::ok(report)
}

enum Target {
    Implicit(GadgetHypergraph),
    Explicit(Hypergraph),
}

fn load_target(args: &TargetArgs) -> CliResult<Target> {
    match (&args.instance, &args.hgr) {
        (Some(path), None) => Ok(Target::Implicit(build_gadget(load_instance(path)?, args.q, args.k)?)),
        (None, Some(path)) => Ok(Target::Explicit(load_hgr(path)?)),
        _ => Err(CliError::usage("give exactly one of --instance or --hgr")),
    }
}

fn verify(command: VerifyCommand) -> CliResult<Outcome> {
    match command {
        VerifyCommand::Coloring(a) => {
            let coloring = Coloring::from_json(&read_input(&a.coloring)?)?;
            match load_target(&a.target)? {
                Target::Implicit(g) => {
                    let report = reduction::verify_coloring(&g, &coloring, verify_mode(&a.mode))?;
                    let ok = report.proper;
                    Outcome::check(report, ok)
                }
                Target::Explicit(h) => {
                    if coloring.colors().len() != h.vertex_count() {
                        return Err(CliError::usage(format!(
                            "coloring covers {} vertices, hypergraph has {}",
                            coloring.colors().len(),
                            h.vertex_count()
                        )));
                    }
                    let mono: Vec<&Vec<usize>> = h
                        .edges()
                        .iter()
                        .filter(|e| e.iter().all(|&v| coloring.color(v) == coloring.color(e[0])))
                        .collect();
                    let report = json!({
                        "mode": "exhaustive",
                        "colors": coloring.num_colors(),
                        "monochromatic": mono.len(),
                        "witness": mono.first(),
                        "proper": mono.is_empty(),
                    });
                    Outcome::check(report, mono.is_empty())
                }
            }
        }
        VerifyCommand::Independent(a) => {
            let set = parse_set(&read_input(&a.set)?)?;
            let report = match load_target(&a.target)? {
                Target::Implicit(g) => solvers::is_independent_implicit(&g, &set, verify_mode(&a.mode))?,
                Target::Explicit(h) => {
                    let set: Vec<usize> = set.iter().map(|&v| v as usize).collect();
                    solvers::is_independent_explicit(&h, &set)?
                }
            };
            let ok = report.independent;
            Outcome::check(report, ok)
        }
    }
}

fn solve(command: SolveCommand) -> CliResult<Outcome> {
    match command {
        SolveCommand::Mis(a) => {
            let h = load_hgr(&a.hgr)?;
            let method = match a.method {
                MisKind::Exact => MisMethod::Exact { node_limit: a.node_limit },
                MisKind::Greedy => MisMethod::Greedy,
                MisKind::LocalSearch => MisMethod::LocalSearch { seed: a.seed, iterations: a.iterations as u64 },
            };
            let result = solvers::max_independent_set(&h, method, None)?;
            if let Some(path) = &a.out {
                let set: Vec<u64> = result.vertices.iter().map(|&v| v as u64).collect();
                write_output(path, &write_set(&set))?;
            }
            Outcome::ok(result)
        }
        SolveCommand::Color(a) => {
            let h = load_hgr(&a.hgr)?;
            let coloring = solvers::exists_proper_coloring(&h, a.c, Some(a.node_limit))?;
            if let (Some(path), Some(chi)) = (&a.out, &coloring) {
                write_output(path, &(chi.to_json() + "\n"))?;
            }
            Outcome::ok(json!({
                "c": a.c,
                "colorable": coloring.is_some(),
                "colors": coloring.as_ref().map(|chi| chi.colors().to_vec()),
            }))
        }
    }
}

fn decode_params(knobs: &DecodeKnobs, seed: u64, cap: u64) -> CliResult<(DecodeParams, Option<decode::Schedule>)> {
    let schedule = if knobs.schedule { Some(decode::asymptotic_schedule(knobs.delta, knobs.c)?) } else { None };
    let verify = match knobs.verify {
        VerifyKind::Off => None,
        VerifyKind::Sampled => Some(VerifyMode::Sampled { probes: knobs.probes, seed }),
        VerifyKind::Exhaustive => Some(VerifyMode::Exhaustive { cap }),
    };
    let params = DecodeParams {
        delta: knobs.delta,
        t: schedule.as_ref().map_or(knobs.t, |s| s.t),
        tuple_budget: knobs.tuple_budget,
        seed,
        trials: knobs.trials,
        verify,
    };
    Ok((params, schedule))
}

fn decode_report(report: decode::DecodeReport, schedule: Option<decode::Schedule>) -> CliResult<Outcome> {
    let mut value = to_value(report)?;
    if let Some(s) = schedule {
        value["schedule"] = to_value(s)?;
    }
    Ok(Outcome { report: value, ok: true })
}

fn decode_cmd(command: DecodeCommand) -> CliResult<Outcome> {
    let (a, layered) = match command {
        DecodeCommand::Bipartite(a) => (a, false),
        DecodeCommand::Layered(a) => (a, true),
    };
    let g = load_gadget(&a.gadget)?;
    let set = parse_set(&read_input(&a.set)?)?;
    let (params, schedule) = decode_params(&a.knobs, a.seed, a.cap)?;
    let report = if layered {
        decode::decode_layered(&g, &set, &params)?
    } else {
        decode::decode_bipartite(&g, &set, &params)?
    };
    decode_report(report, schedule)
}

fn planted_gadget(a: &PipelineArgs) -> CliResult<(GadgetHypergraph, Assignment)> {
    let bipartite = BipartiteShape {
        left: a.left,
        right: a.right,
        left_alphabet: a.left_alphabet,
        right_alphabet: a.right_alphabet,
        degree: a.degree,
    };
    let kind = match a.kind {
        GadgetChoice::TwoK => LcKind::Bipartite,
        GadgetChoice::KPlusOne => LcKind::Layered,
    };
    let (instance, planted) = generate(kind, &bipartite, &a.layered, a.seed)?;
    Ok((build_gadget(instance, a.q, a.k)?, planted))
}

fn pipeline(command: PipelineCommand) -> CliResult<Outcome> {
    match command {
        PipelineCommand::Completeness(a) => {
            let (g, planted) = planted_gadget(&a)?;
            let coloring = reduction::completeness_coloring(&g, &planted)?;
            let mode = match a.sampled {
                Some(probes) => VerifyMode::Sampled { probes, seed: a.seed },
                None => VerifyMode::Exhaustive { cap: a.cap },
            };
            let check = reduction::verify_coloring(&g, &coloring, mode)?;
            let ok = check.proper;
            let mut report = to_value(&check)?;
            report["gadget"] = gadget_summary(&g);
            report["instance"] = instance_summary(g.base());
            report["seed"] = json!(a.seed);
            Ok(Outcome { report, ok })
        }
        PipelineCommand::Soundness(a) => {
            let (g, planted) = planted_gadget(&a.pipeline)?;
            let coloring = reduction::completeness_coloring(&g, &planted)?;
            if a.color == 0 || a.color > coloring.num_colors() {
                return Err(CliError::usage(format!("color {} outside 1..={}", a.color, coloring.num_colors())));
            }
            let class = coloring.class(a.color);
            let (params, schedule) = decode_params(&a.knobs, a.pipeline.seed, a.pipeline.cap)?;
            let report = match a.pipeline.kind {
                GadgetChoice::TwoK => decode::decode_bipartite(&g, &class, &params)?,
                GadgetChoice::KPlusOne => decode::decode_layered(&g, &class, &params)?,
            };
            decode_report(report, schedule)
        }
    }
}
