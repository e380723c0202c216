use std::fs;
use std::path::Path;

use clap::ValueEnum;
use opinion_games::dynamics::{
    certify_drop, gadget_adversarial_sequence, run_best_response, validate_schedule, Scheduler,
    Trace,
};
use opinion_games::game::PriceRatio;
use opinion_games::generate::{pos_star_game, RandomGame};
use opinion_games::graph::{
    make_clique, make_complete_bipartite, make_gadget_chain, make_path, make_star, CutwidthResult,
};
use opinion_games::io::{self, rational_value, real_string, real_value};
use opinion_games::logit::{
    build_r, coalescence_time, congestion_upper_bound, contraction_check,
    cutwidth_relaxation_bound, mixing_bounds_from_relaxation, mixing_time_exact,
    path_coupling_bound, potential_path_slack, relaxation_time, small_beta_threshold,
    BottleneckReport, LogitChain,
};
use opinion_games::rational::{parse_decimal, to_f64};
use opinion_games::{Error, OpinionGame, Profile, SocialGraph};
use serde_json::{json, Value};

use crate::cli::{
    BrExpoArgs, BrRunArgs, CanonicalizeArgs, ChainArgs, CoupleArgs, CutwidthArgs, Family, GameArg,
    GenArgs, LogitMixArgs, NashArgs, SweepArgs,
};
use crate::Failure;

/// Resolved configuration and results of one command.
pub struct Outcome {
    pub config: Value,
    pub results: Value,
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<OpinionGame, Failure> {
    io::parse_game(&read(path)?).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<SocialGraph, Failure> {
    io::parse_graph(&read(path)?).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn hexes(profiles: &[Profile]) -> Vec<String> {
    profiles.iter().map(|p| p.to_hex()).collect()
}

fn price(p: &PriceRatio) -> Value {
    match p {
        PriceRatio::Finite(r) => rational_value(r),
        PriceRatio::Infinite => Value::String("inf".into()),
    }
}

fn cutwidth_value(cw: &CutwidthResult) -> Value {
    json!({
        "value": cw.value_decimal().to_string(),
        "exact": rational_value(&cw.value_rational()),
        "ordering": cw.ordering,
    })
}

fn chain(game: OpinionGame, beta: f64) -> Result<LogitChain, Failure> {
    Ok(LogitChain::new(game, beta)?)
}

pub fn gen(args: &GenArgs) -> Run {
    let weight = parse_decimal(&args.weight)?;
    let belief = io::parse_belief(&args.belief)?;
    let game = match args.family {
        Family::Clique => OpinionGame::uniform(make_clique(args.n, weight)?, belief)?,
        Family::Bipartite => {
            OpinionGame::uniform(make_complete_bipartite(args.n, weight)?, belief)?
        }
        Family::Star => OpinionGame::uniform(make_star(args.n, weight)?, belief)?,
        Family::Path => OpinionGame::uniform(make_path(args.n, weight)?, belief)?,
        Family::PosStar => pos_star_game(args.n)?,
        Family::Gadget => {
            let chain = make_gadget_chain(args.n, weight, args.ratio)?;
            OpinionGame::uniform(chain.graph, opinion_games::Rational::new(1, 2))?
        }
        Family::Random => {
            let seed = args
                .seed
                .ok_or_else(|| Failure::Config("the random family needs --seed".into()))?;
            RandomGame {
                n: args.n,
                edge_prob: args.edge_prob,
                weight_digits: args.weight_digits,
                max_weight: args.max_weight,
                belief_digits: args.belief_digits,
            }
            .generate(seed)?
        }
    };
    let config = json!({
        "family": args.family.to_possible_value().map(|v| v.get_name().to_string()),
        "n": args.n,
        "weight": args.weight,
        "belief": args.belief,
        "ratio": args.ratio,
        "seed": args.seed,
        "edge_prob": args.edge_prob,
        "out": args.out,
    });
    let mut results = json!({
        "players": game.n(),
        "edges": game.graph().edges().len(),
        "precision": game.graph().precision(),
    });
    match &args.out {
        Some(path) => write(path, &io::write_game(&game))?,
        None => results["game"] = io::game_to_value(&game),
    }
    Ok(Outcome { config, results })
}

pub fn nash(args: &NashArgs) -> Run {
    let game = load_game(&args.game)?;
    let profiles = game.enumerate_nash()?;
    let (optimum, cost) = game.optimum_profile()?;
    let mut results = json!({
        "nash_profiles": hexes(&profiles),
        "count": profiles.len(),
        "greedy_fill_0": game.greedy_nash(0).to_hex(),
        "greedy_fill_1": game.greedy_nash(1).to_hex(),
        "optimum": optimum.to_hex(),
        "optimum_cost": rational_value(&cost),
    });
    if let Some(hex) = &args.profile {
        let x = Profile::from_hex(hex)?;
        let direct = game.is_nash(x);
        let lemma = game.is_nash_by_thresholds(x);
        if direct.is_nash != lemma.is_nash {
            return Err(Failure::Invariant(format!(
                "profile {x}: improvement check and threshold conditions disagree"
            )));
        }
        results["profile"] = json!({
            "profile": x.to_hex(),
            "is_nash": direct.is_nash,
            "improving_player": direct.witness,
            "potential": rational_value(&game.potential(x)),
            "social_cost": rational_value(&game.social_cost(x)),
        });
    }
    Ok(Outcome {
        config: json!({ "game": args.game, "profile": args.profile }),
        results,
    })
}

pub fn poa_pos(args: &GameArg) -> Run {
    let game = load_game(&args.game)?;
    let rep = game.poa_pos()?;
    Ok(Outcome {
        config: json!({ "game": args.game }),
        results: json!({
            "nash_profiles": hexes(&rep.nash_profiles),
            "optimum": rep.optimum.to_hex(),
            "optimum_cost": rational_value(&rep.optimum_cost),
            "best_nash_cost": rational_value(&rep.best_nash_cost),
            "worst_nash_cost": rational_value(&rep.worst_nash_cost),
            "poa": price(&rep.poa),
            "pos": price(&rep.pos),
        }),
    })
}

fn parse_scheduler(spec: &str) -> Result<Scheduler, Failure> {
    if spec == "round_robin" {
        return Ok(Scheduler::RoundRobin);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| Failure::Config(format!("bad seed in --sched {spec:?}")))?;
        return Ok(Scheduler::UniformRandom { seed });
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = read(Path::new(path))?;
        let seq = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| Failure::Config(format!("{path}: {t:?} is not a player index")))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        return Ok(Scheduler::FixedSequence(seq));
    }
    Err(Failure::Config(format!(
        "--sched must be round_robin, random:SEED or file:PATH, got {spec:?}"
    )))
}

fn write_trace(path: &Path, trace: &Trace) -> Result<(), Failure> {
    let csv_err = |e: csv::Error| Failure::Config(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["t", "mover", "old", "new", "phi_num", "phi_den"])
        .map_err(csv_err)?;
    for s in &trace.steps {
        w.write_record([
            s.t.to_string(),
            s.mover.to_string(),
            s.old.to_string(),
            s.new.to_string(),
            s.potential.numer().to_string(),
            s.potential.denom().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

pub fn br_run(args: &BrRunArgs) -> Run {
    let mut game = load_game(&args.game)?;
    if args.canonical {
        game = game.canonicalize_beliefs()?;
    }
    let sched = parse_scheduler(&args.sched)?;
    let start = Profile::from_hex(&args.start)?;
    if start.bits() >> game.n() != 0 {
        return Err(Failure::Config(format!(
            "--start {start} has bits beyond {} players",
            game.n()
        )));
    }
    let trace = run_best_response(&game, start, &sched, args.max_steps)?;
    if let Some(path) = &args.out {
        write_trace(path, &trace)?;
    }
    Ok(Outcome {
        config: json!({
            "game": args.game,
            "sched": args.sched,
            "max_steps": args.max_steps,
            "start": start.to_hex(),
            "canonical": args.canonical,
            "out": args.out,
        }),
        results: json!({
            "flips": trace.flips(),
            "converged": trace.converged,
            "final": trace.final_profile.to_hex(),
            "final_is_nash": game.is_nash(trace.final_profile).is_nash,
            "start_potential": rational_value(&game.potential(start)),
            "final_potential": rational_value(&game.potential(trace.final_profile)),
            "every_drop_at_least_half": certify_drop(&game, &trace),
        }),
    })
}

pub fn br_expo(args: &BrExpoArgs) -> Run {
    let eps = parse_decimal(&args.eps_last)?;
    let chain = make_gadget_chain(args.gadgets, eps, args.ratio)?;
    let game = OpinionGame::uniform(chain.graph.clone(), opinion_games::Rational::new(1, 2))?;
    let schedule = gadget_adversarial_sequence(&chain, &game)?;
    let trace = validate_schedule(&game, &schedule)?;
    if let Some(path) = &args.out {
        write_trace(path, &trace)?;
    }
    let cycles: Vec<Value> = schedule
        .cycles_per_gadget(args.gadgets)
        .into_iter()
        .map(|(on, off)| json!({ "switch_on": on, "switch_off": off }))
        .collect();
    Ok(Outcome {
        config: json!({
            "gadgets": args.gadgets,
            "eps_last": args.eps_last,
            "ratio": args.ratio,
            "out": args.out,
        }),
        results: json!({
            "players": game.n(),
            "start": schedule.start.to_hex(),
            "switch_start": schedule.start.get(0),
            "flips": trace.flips(),
            "flips_per_gadget": schedule.flips_per_gadget(args.gadgets),
            "cycles_per_gadget": cycles,
            "validated": true,
            "final": trace.final_profile.to_hex(),
        }),
    })
}

pub fn canonicalize(args: &CanonicalizeArgs) -> Run {
    let game = load_game(&args.game)?;
    let canon = game.canonicalize_beliefs()?;
    let strings =
        |g: &OpinionGame| -> Vec<Value> { g.beliefs().iter().map(rational_value).collect() };
    let mut results = json!({
        "beliefs_before": strings(&game),
        "beliefs_after": strings(&canon),
    });
    match &args.out {
        Some(path) => write(path, &io::write_game(&canon))?,
        None => results["game"] = io::game_to_value(&canon),
    }
    Ok(Outcome {
        config: json!({ "game": args.game, "out": args.out }),
        results,
    })
}

pub fn cutwidth(args: &CutwidthArgs) -> Run {
    let graph = load_graph(&args.game)?;
    let cw = graph.cutwidth_with_limit(args.limit)?;
    Ok(Outcome {
        config: json!({ "game": args.game, "limit": args.limit }),
        results: json!({
            "players": graph.n(),
            "cutwidth": cutwidth_value(&cw),
            "ordering_width": graph.unscale_decimal(graph.ordering_width(&cw.ordering)).to_string(),
        }),
    })
}

fn bottleneck_value(rep: &BottleneckReport) -> Value {
    json!({
        "cutwidth": rational_value(&rep.cutwidth),
        "b_star": rational_value(&rep.b_star),
        "b_star_exact": rep.b_star_exact,
        "endpoint": rep.endpoint.to_hex(),
        "b_endpoint": rational_value(&rep.b_endpoint),
        "region_size": rep.region.len(),
        "boundary_size": rep.boundary.len(),
        "boundary_edges": rep.boundary_edges.len(),
        "pi_region": real_value(rep.pi_region),
        "q_out": real_value(rep.q_out),
        "ratio": real_value(rep.ratio),
        "lower_bound": real_value(rep.lower_bound),
        "lemma_bound": real_value(rep.lemma_bound),
    })
}

/// The bottleneck report, or `None` when neither consensus region is light
/// enough to bound anything.
fn bottleneck_if_any(chain: &LogitChain) -> Result<Option<BottleneckReport>, Failure> {
    match build_r(chain) {
        Ok(rep) => Ok(Some(rep)),
        Err(Error::InvalidArgument(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn logit_mix(args: &LogitMixArgs) -> Run {
    let game = load_game(&args.game)?;
    let cw = game.graph().cutwidth()?;
    let chain = chain(game, args.beta)?;
    let t_mix = mixing_time_exact(&chain, args.eps)?;
    let rel = relaxation_time(&chain)?;
    let bounds = mixing_bounds_from_relaxation(&chain)?;
    let bottleneck = bottleneck_if_any(&chain)?;
    Ok(Outcome {
        config: json!({ "game": args.game, "beta": args.beta, "eps": args.eps }),
        results: json!({
            "t_mix": t_mix,
            "t_rel": real_value(rel.t_rel),
            "lambda_2": real_value(rel.lambda_2),
            "lambda_min": real_value(rel.lambda_min),
            "relaxation_lower": real_value(bounds.lower),
            "relaxation_upper": real_value(bounds.upper),
            "surrogate_upper": real_value(bounds.surrogate_upper),
            "pi_min": real_value(bounds.pi_min),
            "cutwidth": cutwidth_value(&cw),
            "bottleneck": bottleneck.as_ref().map(bottleneck_value),
        }),
    })
}

pub fn spectral(args: &ChainArgs) -> Run {
    let game = load_game(&args.game)?;
    let cw = game.graph().cutwidth()?;
    let slack = potential_path_slack(&game, &cw.ordering)?;
    let n = game.n();
    let chain = chain(game, args.beta)?;
    let rel = relaxation_time(&chain)?;
    let bounds = mixing_bounds_from_relaxation(&chain)?;
    let congestion = congestion_upper_bound(&chain, &cw.ordering)?;
    let cw_bound = cutwidth_relaxation_bound(n, args.beta, to_f64(&cw.value_rational()));
    Ok(Outcome {
        config: json!({ "game": args.game, "beta": args.beta }),
        results: json!({
            "t_rel": real_value(rel.t_rel),
            "lambda_2": real_value(rel.lambda_2),
            "lambda_min": real_value(rel.lambda_min),
            "lambda_star": real_value(rel.lambda_star),
            "absolute_gap": real_value(rel.absolute_gap),
            "mixing_lower": real_value(bounds.lower),
            "mixing_upper": real_value(bounds.upper),
            "surrogate_upper": real_value(bounds.surrogate_upper),
            "cutwidth": cutwidth_value(&cw),
            "congestion_bound": real_value(congestion.bound),
            "congestion_edge": [congestion.edge.0.to_hex(), congestion.edge.1.to_hex()],
            "cutwidth_bound": real_value(cw_bound),
            "path_potential_slack": rational_value(&slack),
        }),
    })
}

pub fn bottleneck(args: &ChainArgs) -> Run {
    let game = load_game(&args.game)?;
    let chain = chain(game, args.beta)?;
    let rep = build_r(&chain)?;
    let mut results = bottleneck_value(&rep);
    results["boundary"] = json!(hexes(&rep.boundary));
    Ok(Outcome {
        config: json!({ "game": args.game, "beta": args.beta }),
        results,
    })
}

pub fn couple_check(args: &CoupleArgs) -> Run {
    if !(args.eps > 0.0 && args.eps < 0.5) {
        return Err(Failure::Config(format!(
            "--eps must lie in (0, 1/2), got {}",
            args.eps
        )));
    }
    let seed = match (args.trials, args.seed) {
        (0, s) => s,
        (_, Some(s)) => Some(s),
        (_, None) => return Err(Failure::Config("--trials needs an explicit --seed".into())),
    };
    let game = load_game(&args.game)?;
    let threshold = small_beta_threshold(game.graph());
    let n = game.n();
    let chain = chain(game, args.beta)?;
    let k = contraction_check(&chain)?;
    let target = (-1.0 / (3.0 * n as f64)).exp();
    let mut results = json!({
        "max_expected_distance": real_value(k.max_expected),
        "worst_pair": [k.pair.0.to_hex(), k.pair.1.to_hex()],
        "alpha": real_value(k.alpha()),
        "beta_threshold": real_value(threshold),
        "below_threshold": args.beta <= threshold,
        "contraction_target": real_value(target),
        "meets_target": k.max_expected <= target,
        "path_coupling_bound": path_coupling_bound(n, &k, args.eps).map(real_value),
    });
    if let Some(seed) = seed.filter(|_| args.trials > 0) {
        let ones = Profile::ones(n);
        let times: Vec<Option<u64>> = (0..args.trials as u64)
            .map(|t| {
                coalescence_time(
                    &chain,
                    Profile(0),
                    ones,
                    args.max_steps as u64,
                    seed.wrapping_add(t),
                )
            })
            .collect();
        let met: Vec<u64> = times.iter().flatten().copied().collect();
        let mean = met.iter().sum::<u64>() as f64 / met.len().max(1) as f64;
        results["coalescence"] = json!({
            "trials": args.trials,
            "coalesced": met.len(),
            "mean_steps": real_value(mean),
            "max_steps": met.iter().max(),
        });
    }
    Ok(Outcome {
        config: json!({
            "game": args.game,
            "beta": args.beta,
            "eps": args.eps,
            "trials": args.trials,
            "seed": seed,
            "max_steps": args.max_steps,
        }),
        results,
    })
}

pub struct SweepRow {
    pub beta: f64,
    pub t_mix: u64,
    pub t_rel: f64,
    pub lb_bottleneck: Option<f64>,
    pub ub_congestion: f64,
}

pub fn sweep(args: &SweepArgs) -> Run {
    let game = load_game(&args.game)?;
    let cw = game.graph().cutwidth()?;
    let mut rows = Vec::with_capacity(args.beta.len());
    for &beta in &args.beta {
        let chain = chain(game.clone(), beta)?;
        rows.push(SweepRow {
            beta,
            t_mix: mixing_time_exact(&chain, args.eps)?,
            t_rel: relaxation_time(&chain)?.t_rel,
            lb_bottleneck: bottleneck_if_any(&chain)?.map(|r| r.lower_bound),
            ub_congestion: congestion_upper_bound(&chain, &cw.ordering)?.bound,
        });
    }
    if let Some(path) = &args.out {
        write_sweep(path, &rows)?;
    }
    let table: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "beta": r.beta,
                "t_mix": r.t_mix,
                "t_rel": real_value(r.t_rel),
                "lb_bottleneck": r.lb_bottleneck.map(real_value),
                "ub_congestion": real_value(r.ub_congestion),
            })
        })
        .collect();
    Ok(Outcome {
        config: json!({
            "game": args.game,
            "beta": args.beta,
            "eps": args.eps,
            "out": args.out,
        }),
        results: json!({ "cutwidth": cutwidth_value(&cw), "rows": table }),
    })
}

fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<(), Failure> {
    let csv_err = |e: csv::Error| Failure::Config(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["beta", "t_mix", "t_rel", "lb_bottleneck", "ub_congestion"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.beta.to_string(),
            r.t_mix.to_string(),
            real_string(r.t_rel),
            r.lb_bottleneck.map(real_string).unwrap_or_default(),
            real_string(r.ub_congestion),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}
