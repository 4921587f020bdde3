use std::path::Path;

use serde_json::{json, Map, Value};

use rig_core::game::Witness;
use rig_core::instances::{self, Instance};
use rig_core::io::{self, GameDoc, MorphismDoc, ReifDoc, StrategyDoc, TreeDoc};
use rig_core::morphism::{self, Violation};
use rig_core::probability::{self, MarkovChain, UniformEnv};
use rig_core::rational::{self, Rational};
use rig_core::refinement::{fig3, psi};
use rig_core::strategy::{self, check_rank_progress, support_patterns};
use rig_core::{
    build_spoiler, extract_strategy, reif, solve_buchi, solve_reach, validate_game, ActMap, Arena, FiniteMemoryStrategy,
    FixpointResult, Game, Morphism, Objective, RigError,
};

use crate::args::{FormulaArg, GameArgs, Global, ObjectiveArg};
use crate::error::CliError;
use crate::manifest::Manifest;

pub struct Outcome {
    pub manifest: Manifest,
    pub report: Map<String, Value>,
    pub verdict: bool,
    pub summary: String,
}

type Res<T> = Result<T, CliError>;

fn load_game(man: &mut Manifest, path: &Path) -> Res<Game> {
    let text = man.read("game", path)?;
    man.format("game", io::GAME_FORMAT);
    io::parse_game(&text).map_err(|e| CliError::in_file(path, e))
}

fn load_morphism(man: &mut Manifest, path: &Path, am: &ActMap) -> Res<Morphism> {
    let text = man.read("morphism", path)?;
    man.format("morphism", io::MORPHISM_FORMAT);
    io::parse_morphism(&text, am).map_err(|e| CliError::in_file(path, e))
}

fn load_strategy(man: &mut Manifest, role: &str, path: &Path, am: &ActMap, player: bool) -> Res<FiniteMemoryStrategy> {
    let text = man.read(role, path)?;
    man.format(role, io::STRATEGY_FORMAT);
    let s = io::parse_strategy(&text, am).map_err(|e| CliError::in_file(path, e))?;
    if s.is_player() != player {
        let want = if player { "player" } else { "environment" };
        return Err(CliError::Input(format!("{}: expected a {want} strategy", path.display())));
    }
    Ok(s)
}

fn write(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn arena(game: &Game, m: &Morphism, objective: Objective, g: &Global) -> Res<Arena> {
    let estimate = m.num_states() * (game.num_actions() + 1);
    if estimate > g.max_universe {
        return Err(RigError::CapExceeded {
            what: "universe",
            needed: estimate as u128,
            cap: g.max_universe as u128,
        }
        .into());
    }
    let a = Arena::build(game, m, objective)?;
    a.check_cap(g.max_universe)?;
    Ok(a)
}

fn solve(a: &Arena, objective: Objective) -> FixpointResult {
    match objective {
        Objective::Buchi => solve_buchi(a),
        _ => solve_reach(a),
    }
}

fn history(am: &ActMap, h: &[usize]) -> Value {
    json!(am.history_names(h))
}

fn witness(am: &ActMap, w: &Witness) -> Value {
    json!({ "left": history(am, &w.left), "right": history(am, &w.right) })
}

fn violation(am: &ActMap, v: &Option<Violation>) -> Value {
    match v {
        None => Value::Null,
        Some(v) => json!({ "kind": v.kind.name(), "detail": v.detail, "witness": witness(am, &v.witness) }),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("reports are objects"),
    }
}

fn with_manifest<T: serde::Serialize>(doc: &T, man: &Manifest) -> String {
    let mut v = serde_json::to_value(doc).expect("documents serialize");
    v.as_object_mut()
        .expect("documents are objects")
        .insert("manifest".into(), man.for_file());
    io::to_string(&v)
}

fn dist_value(d: &strategy::Distribution, name: impl Fn(usize) -> String) -> Value {
    Value::Object(d.iter().map(|(x, p)| (name(*x), json!(rational::format(p)))).collect())
}

// validate

fn validate_report(game: &Game, m: Option<&Morphism>, depth: usize) -> Res<(Value, bool)> {
    let am = &game.actmap;
    let report = validate_game(game, depth);
    let axioms: Vec<Value> = report
        .verdicts
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom.name(),
                "pass": v.pass(),
                "witness": v.witness.as_ref().map(|w| witness(am, w)),
            })
        })
        .collect();
    let mut ok = report.is_valid() && report.cross_checks_agree();
    let mut out = json!({
        "game": {
            "valid": report.is_valid(),
            "axioms": axioms,
            "cross_check_depth": depth,
            "cross_checks_agree": report.cross_checks_agree(),
            "states": game.coloring.num_states(),
            "moves": game.num_moves(),
            "binary": game.is_binary(),
        }
    });
    if let Some(m) = m {
        if m.num_moves() != game.num_moves() {
            return Err(CliError::Input("morphism and game read different moves".into()));
        }
        let m = m.trim();
        let refinement = morphism::validate_refinement(game, &m)?;
        let rect = morphism::validate_rectangularity(game, &m)?;
        let mut mo = json!({
            "states": m.num_states(),
            "refinement": violation(am, &refinement),
            "rectangularity": violation(am, &rect),
        });
        ok &= refinement.is_none() && rect.is_none();
        if refinement.is_none() && rect.is_none() {
            match morphism::compute_approx(game, &m) {
                Ok(approx) => {
                    let classes: Vec<Vec<&str>> = approx
                        .classes()
                        .iter()
                        .map(|c| c.iter().map(|&p| m.name(p)).collect())
                        .collect();
                    mo["approx_classes"] = json!(classes);
                    let targets = morphism::raw_targets(game, &m);
                    mo["targets"] = json!(targets.iter().map(|p| m.name(p)).collect::<Vec<_>>());
                }
                Err(v) => {
                    mo["approx"] = violation(am, &Some(v));
                    ok = false;
                }
            }
        }
        mo["valid"] = json!(ok);
        out["morphism"] = mo;
    }
    out["valid"] = json!(ok);
    Ok((out, ok))
}

pub fn validate(game: &Path, morph: Option<&Path>, depth: usize) -> Res<Outcome> {
    let mut man = Manifest::new("validate");
    man.param("depth", depth);
    let g = load_game(&mut man, game)?;
    let m = morph.map(|p| load_morphism(&mut man, p, &g.actmap)).transpose()?;
    let (report, ok) = validate_report(&g, m.as_ref(), depth)?;
    let failed: Vec<String> = report["game"]["axioms"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|a| a["pass"] == json!(false))
        .map(|a| a["axiom"].as_str().unwrap_or_default().to_string())
        .collect();
    let summary = if ok {
        "valid".to_string()
    } else if failed.is_empty() {
        "invalid: morphism axioms fail".to_string()
    } else {
        format!("invalid: {} fail", failed.join(", "))
    };
    Ok(Outcome {
        manifest: man,
        report: obj(report),
        verdict: ok,
        summary,
    })
}

// solve

fn solve_value(a: &Arena, r: &FixpointResult, objective: ObjectiveArg) -> Value {
    let am = a.actmap();
    let elems: Vec<usize> = r.y_star.ones().collect();
    json!({
        "objective": objective.name(),
        "winning": r.winning,
        "initial": a.state_name(a.initial()),
        "states": a.num_states(),
        "actions": a.num_actions(),
        "universe": a.universe_size(),
        "targets": a.targets().iter().map(|p| a.state_name(p)).collect::<Vec<_>>(),
        "approx_classes": a.approx().classes().iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.iter().map(|&p| a.state_name(p)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "y_star": elems.iter().map(|&y| a.element_name(y)).collect::<Vec<_>>(),
        "ranks": elems.iter().filter_map(|&y| r.rank(y).map(|k| json!([a.element_name(y), k]))).collect::<Vec<_>>(),
        "action_sets": (0..a.num_states())
            .filter(|&p| r.contains(p))
            .map(|p| json!([a.state_name(p), r.action_sets[p].iter().map(|&x| am.action_name(x)).collect::<Vec<_>>()]))
            .collect::<Vec<_>>(),
        "iterations": {
            "outer": r.outer_iterations,
            "inner": r.inner_iterations,
            "inner_total": r.inner_iterations_total,
            "max_rank": r.max_rank(),
        },
    })
}

fn load_arena(man: &mut Manifest, input: &GameArgs, g: &Global) -> Res<(Game, Arena)> {
    man.param("objective", input.objective.name());
    let game = load_game(man, &input.game)?;
    let m = load_morphism(man, &input.morphism, &game.actmap)?;
    let a = arena(&game, &m, input.objective.objective(), g)?;
    Ok((game, a))
}

pub fn solve_cmd(input: &GameArgs, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("solve");
    let (_, a) = load_arena(&mut man, input, g)?;
    let r = solve(&a, input.objective.objective());
    let summary = format!(
        "winning: {} ({} of {} elements in Y*, {} outer iterations)",
        yes(r.winning),
        r.y_star.count_ones(..),
        a.universe_size(),
        r.outer_iterations
    );
    Ok(Outcome {
        manifest: man,
        report: obj(solve_value(&a, &r, input.objective)),
        verdict: r.winning,
        summary,
    })
}

// strategy

pub fn strategy_cmd(input: &GameArgs, out: Option<&Path>, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("strategy");
    let (_, a) = load_arena(&mut man, input, g)?;
    let r = solve(&a, input.objective.objective());
    if !r.winning {
        return Ok(Outcome {
            manifest: man,
            report: obj(json!({ "winning": false })),
            verdict: false,
            summary: "not almost-sure winning; no strategy written".into(),
        });
    }
    let sigma = extract_strategy(&a, &r)?;
    man.format("strategy", io::STRATEGY_FORMAT);
    let mut doc = StrategyDoc::from_strategy(&sigma, a.actmap());
    doc.manifest = Some(man.for_file());
    let mut report = json!({ "winning": true, "memory": sigma.memory_size() });
    match out {
        Some(path) => {
            write(path, &io::to_string(&doc))?;
            report["out"] = json!(path.display().to_string());
        }
        None => {
            doc.manifest = None;
            report["strategy"] = serde_json::to_value(&doc).expect("strategy serializes");
        }
    }
    Ok(Outcome {
        manifest: man,
        report: obj(report),
        verdict: true,
        summary: format!("uniform strategy over {} memory states", sigma.memory_size()),
    })
}

// verify

fn player_strategy(man: &mut Manifest, path: Option<&Path>, a: &Arena, r: &FixpointResult) -> Res<FiniteMemoryStrategy> {
    match path {
        Some(p) => load_strategy(man, "strategy", p, a.actmap(), true),
        None => {
            man.param("strategy", "extracted");
            Ok(extract_strategy(a, r)?)
        }
    }
}

pub fn verify_cmd(input: &GameArgs, path: Option<&Path>, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("verify");
    let (_, a) = load_arena(&mut man, input, g)?;
    let r = solve(&a, input.objective.objective());
    let sigma = player_strategy(&mut man, path, &a, &r)?;
    let ok = match input.objective {
        ObjectiveArg::Reach => strategy::verify_almost_sure(&a, &sigma, a.initial(), g.max_spoilers)?,
        ObjectiveArg::Buchi => strategy::verify_almost_sure_buchi(&a, &sigma, a.initial(), g.max_spoilers)?,
    };
    let mut report = json!({ "objective": input.objective.name(), "almost_sure": ok });
    if path.is_none() && input.objective == ObjectiveArg::Reach {
        let rp = check_rank_progress(&a, &r, &sigma);
        report["rank_progress"] = json!({
            "min_decrease_prob": rational::format(&rp.min_decrease_prob),
            "bound": rational::format(&rational::ratio(1, a.num_actions() as i64)),
            "violations": rp.violations,
        });
    }
    Ok(Outcome {
        manifest: man,
        report: obj(report),
        verdict: ok,
        summary: format!("almost-sure against every positional adversary: {}", yes(ok)),
    })
}

// refute

fn support_value(s: &FiniteMemoryStrategy, am: &ActMap) -> Value {
    Value::Object(
        (0..s.memory_size())
            .map(|m| {
                let acts: Vec<&str> = s.player_dist(m).iter().map(|(x, _)| am.action_name(*x)).collect();
                (s.memory_name(m).to_string(), json!(acts))
            })
            .collect(),
    )
}

pub fn refute_cmd(game: &Path, morph: &Path, path: Option<&Path>, out: Option<&Path>, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("refute");
    let input = GameArgs {
        game: game.to_path_buf(),
        morphism: morph.to_path_buf(),
        objective: ObjectiveArg::Reach,
    };
    let (_, a) = load_arena(&mut man, &input, g)?;
    let am = a.actmap();
    let candidates = match path {
        Some(p) => vec![load_strategy(&mut man, "strategy", p, am, true)?],
        None => {
            man.param("strategy", "support-patterns");
            support_patterns(&a, g.max_spoilers)?
        }
    };
    let mut rows = Vec::new();
    let mut first = None;
    for sigma in &candidates {
        let sp = build_spoiler(&a, sigma, a.initial(), g.max_spoilers)?;
        rows.push(json!({
            "support": support_value(sigma, am),
            "refuted": sp.is_some(),
            "reach_prob": sp.as_ref().map(|s| rational::format(&s.reach_prob)),
        }));
        if first.is_none() {
            first = sp;
        }
    }
    let refuted = rows.iter().filter(|r| r["refuted"] == json!(true)).count();
    let all = refuted == candidates.len();
    let mut report = json!({ "candidates": candidates.len(), "refuted": refuted, "all_refuted": all, "results": rows });
    if let (Some(path), Some(sp)) = (out, &first) {
        man.format("spoiler", io::STRATEGY_FORMAT);
        let mut doc = StrategyDoc::from_strategy(&sp.strategy, am);
        doc.manifest = Some(man.for_file());
        write(path, &io::to_string(&doc))?;
        report["out"] = json!(path.display().to_string());
    }
    Ok(Outcome {
        manifest: man,
        report: obj(report),
        verdict: all,
        summary: format!("{refuted} of {} player strategies spoiled", candidates.len()),
    })
}

// simulate and prob

pub struct SimArgs<'a> {
    pub game: &'a Path,
    pub morphism: &'a Path,
    pub strategy: Option<&'a Path>,
    pub env_strategy: Option<&'a Path>,
    pub rounds: usize,
    pub samples: usize,
    pub seed: u64,
    pub transcripts: usize,
}

fn strategies(
    man: &mut Manifest,
    game: &Path,
    morph: &Path,
    strat: Option<&Path>,
    env: Option<&Path>,
    g: &Global,
) -> Res<(Game, Arena, FiniteMemoryStrategy, Option<FiniteMemoryStrategy>)> {
    let input = GameArgs {
        game: game.to_path_buf(),
        morphism: morph.to_path_buf(),
        objective: ObjectiveArg::Reach,
    };
    let (game, a) = load_arena(man, &input, g)?;
    let sigma = match strat {
        Some(p) => load_strategy(man, "strategy", p, &game.actmap, true)?,
        None => player_strategy(man, None, &a, &solve_reach(&a))?,
    };
    let beta = match env {
        Some(p) => Some(load_strategy(man, "env_strategy", p, &game.actmap, false)?),
        None => {
            man.param("env_strategy", "uniform");
            None
        }
    };
    Ok((game, a, sigma, beta))
}

pub fn simulate_cmd(s: &SimArgs, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("simulate");
    man.seed = Some(s.seed);
    man.param("rounds", s.rounds).param("samples", s.samples);
    let (game, _, sigma, beta) = strategies(&mut man, s.game, s.morphism, s.strategy, s.env_strategy, g)?;
    let uniform = UniformEnv(&game.actmap);
    let env: &dyn probability::EnvPolicy = match &beta {
        Some(b) => b,
        None => &uniform,
    };
    let est = probability::simulate(&game, &sigma, env, s.rounds, s.samples, s.seed, s.transcripts);
    let transcripts: Vec<Value> = est
        .transcripts
        .iter()
        .map(|t| json!({ "moves": history(&game.actmap, &t.moves), "reached_at": t.reached_at }))
        .collect();
    Ok(Outcome {
        manifest: man,
        report: obj(json!({
            "rounds": s.rounds,
            "samples": est.samples,
            "successes": est.successes,
            "estimate": format!("{:.6}", est.estimate),
            "std_error": format!("{:.6}", est.std_error),
            "transcripts": transcripts,
        })),
        verdict: true,
        summary: format!("estimated Pr(reach within {} moves) = {:.6}", s.rounds, est.estimate),
    })
}

fn prob_value(r: &Rational, exact: bool) -> Value {
    if exact {
        json!({ "exact": rational::format(r), "decimal": format!("{:.6}", rational::to_f64(r)) })
    } else {
        json!({ "decimal": format!("{:.6}", rational::to_f64(r)) })
    }
}

pub fn prob_cmd(
    game: &Path,
    morph: &Path,
    strat: Option<&Path>,
    env: Option<&Path>,
    horizon: usize,
    exact: bool,
    g: &Global,
) -> Res<Outcome> {
    let mut man = Manifest::new("prob");
    man.param("horizon", horizon).param("exact", exact);
    let (game, a, sigma, beta) = strategies(&mut man, game, morph, strat, env, g)?;
    let beta = beta.unwrap_or_else(|| FiniteMemoryStrategy::uniform_env(&game.actmap));
    let chain = MarkovChain::product(&a, &sigma, &beta, a.initial());
    let p = chain.reach_prob_horizon(horizon);
    let limit = chain.reach_prob_limit();
    Ok(Outcome {
        manifest: man,
        summary: format!("Pr(reach within {horizon} moves) = {}", rational::format(&p)),
        report: obj(json!({
            "horizon": horizon,
            "chain_states": chain.num_states(),
            "reach_prob": prob_value(&p, exact),
            "limit": prob_value(&limit, exact),
            "almost_sure": chain.almost_sure_reach(),
        })),
        verdict: true,
    })
}

// reif

pub fn reif_compile(input: &Path, out_game: &Path, out_morphism: &Path) -> Res<Outcome> {
    let mut man = Manifest::new("reif compile");
    let text = man.read("reif", input)?;
    man.format("reif", io::REIF_FORMAT);
    let rg = io::parse_reif(&text).map_err(|e| CliError::in_file(input, e))?;
    let game = reif::reif_to_game(&rg);
    let m = reif::subset_morphism(&rg);
    man.format("game", io::GAME_FORMAT).format("morphism", io::MORPHISM_FORMAT);
    let mut gd = GameDoc::from_game(&game);
    gd.manifest = Some(man.for_file());
    let mut md = MorphismDoc::from_morphism(&m, &game.actmap);
    md.manifest = Some(man.for_file());
    write(out_game, &io::to_string(&gd))?;
    write(out_morphism, &io::to_string(&md))?;
    Ok(Outcome {
        manifest: man,
        summary: format!(
            "{} locations compiled to {} game states and {} belief states",
            rg.locations.len(),
            game.coloring.num_states(),
            m.num_states()
        ),
        report: obj(json!({
            "locations": rg.locations.len(),
            "game_states": game.coloring.num_states(),
            "morphism_states": m.num_states(),
            "out_game": out_game.display().to_string(),
            "out_morphism": out_morphism.display().to_string(),
        })),
        verdict: true,
    })
}

// counterexample

fn check_formula(formula: FormulaArg, grid: u32, g: &Global) -> Res<psi::Verdict> {
    if grid > g.max_grid {
        return Err(RigError::CapExceeded {
            what: "grid resolution",
            needed: grid as u128,
            cap: g.max_grid as u128,
        }
        .into());
    }
    Ok(psi::check(formula.formula(), grid)?)
}

pub fn counterexample_cmd(formula: FormulaArg, grid: u32, certificate: Option<&Path>, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("counterexample");
    man.param("check", formula.formula().name()).param("grid", grid);
    let v = check_formula(formula, grid, g)?;
    let replayed = psi::replay(&v.certificate);
    let holds = v.holds && replayed.is_ok();
    let mut report = json!({
        "check": formula.formula().name(),
        "grid": grid,
        "holds": holds,
        "points": v.certificate.points.len(),
        "replay": replayed.as_ref().err(),
    });
    match certificate {
        Some(path) => {
            write(path, &with_manifest(&v.certificate, &man))?;
            report["certificate"] = json!(path.display().to_string());
        }
        None => report["certificate"] = serde_json::to_value(&v.certificate).expect("certificates serialize"),
    }
    Ok(Outcome {
        manifest: man,
        summary: format!(
            "{} holds on all {} grid points: {}",
            formula.formula().name(),
            v.certificate.points.len(),
            yes(holds)
        ),
        report: obj(report),
        verdict: holds,
    })
}

// demo

const DEMO_MOVES: usize = 60;
const DEMO_SAMPLES: usize = 10_000;
const DEMO_GRID: u32 = 16;

fn write_instance(dir: &Path, inst: &Instance, man: &Manifest) -> Res<Vec<String>> {
    let mut gd = GameDoc::from_game(&inst.game);
    gd.manifest = Some(man.for_file());
    let mut md = MorphismDoc::from_morphism(&inst.morphism, &inst.game.actmap);
    md.manifest = Some(man.for_file());
    let files = [
        (format!("{}.game.json", inst.name), io::to_string(&gd)),
        (format!("{}.morphism.json", inst.name), io::to_string(&md)),
    ];
    for (name, text) in &files {
        write(&dir.join(name), text)?;
    }
    Ok(files.into_iter().map(|(n, _)| n).collect())
}

fn prepare_dir(dir: Option<&Path>) -> Res<()> {
    if let Some(d) = dir {
        std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
    }
    Ok(())
}

fn demo_fig3(dir: Option<&Path>, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new("demo fig3");
    man.param("grid", DEMO_GRID);
    let inst = fig3::instance();
    let mut files = Vec::new();
    prepare_dir(dir)?;
    if let Some(d) = dir {
        man.format("game", io::GAME_FORMAT)
            .format("morphism", io::MORPHISM_FORMAT)
            .format("tree", io::TREE_FORMAT);
        files = write_instance(d, &inst, &man)?;
        for (name, tree) in [("fig3-G.json", fig3::g_tree()), ("fig3-H.json", fig3::h_tree())] {
            let mut doc = TreeDoc::from_tree(&tree);
            doc.manifest = Some(man.for_file());
            write(&d.join(name), &io::to_string(&doc))?;
            files.push(name.to_string());
        }
    }
    let (validation, valid) = validate_report(&inst.game, Some(&inst.morphism), 4)?;
    let mut checks = Vec::new();
    let mut all = valid;
    for f in [FormulaArg::Psi, FormulaArg::PsiPrime] {
        let v = check_formula(f, DEMO_GRID, g)?;
        let replayed = psi::replay(&v.certificate).is_ok();
        all &= v.holds && replayed;
        if let Some(d) = dir {
            let name = format!("fig3-{}.certificate.json", f.formula().name());
            write(&d.join(&name), &with_manifest(&v.certificate, &man))?;
            files.push(name);
        }
        checks.push(json!({
            "check": f.formula().name(),
            "holds": v.holds,
            "replayed": replayed,
            "points": v.certificate.points.len(),
        }));
    }
    Ok(Outcome {
        manifest: man,
        summary: format!("fig3: morphism valid: {}, both formulas hold: {}", yes(valid), yes(all)),
        report: obj(json!({ "name": "fig3", "validation": validation, "checks": checks, "files": files })),
        verdict: all,
    })
}

fn demo_game(inst: Instance, dir: Option<&Path>, seed: u64, g: &Global) -> Res<Outcome> {
    let mut man = Manifest::new(&format!("demo {}", inst.name));
    man.seed = Some(seed);
    man.param("moves", DEMO_MOVES).param("samples", DEMO_SAMPLES);
    prepare_dir(dir)?;
    let mut files = Vec::new();
    if let Some(d) = dir {
        man.format("game", io::GAME_FORMAT).format("morphism", io::MORPHISM_FORMAT);
        files = write_instance(d, &inst, &man)?;
        if inst.name == "matching-pennies" {
            man.format("reif", io::REIF_FORMAT);
            let mut doc = ReifDoc::from_reif(&reif::matching_pennies());
            doc.manifest = Some(man.for_file());
            write(&d.join("matching-pennies.reif.json"), &io::to_string(&doc))?;
            files.push("matching-pennies.reif.json".into());
        }
    }
    let (validation, valid) = validate_report(&inst.game, Some(&inst.morphism), 6)?;
    let a = arena(&inst.game, &inst.morphism, Objective::Reach, g)?;
    let r = solve_reach(&a);
    let mut report = json!({
        "name": inst.name,
        "validation": validation,
        "solve": solve_value(&a, &r, ObjectiveArg::Reach),
        "files": files,
    });
    let (ok, summary) = if r.winning {
        let sigma = extract_strategy(&a, &r)?;
        let verified = strategy::verify_almost_sure(&a, &sigma, a.initial(), g.max_spoilers)?;
        let rp = check_rank_progress(&a, &r, &sigma);
        let chain = MarkovChain::product(&a, &sigma, &FiniteMemoryStrategy::uniform_env(a.actmap()), a.initial());
        let p = chain.reach_prob_horizon(DEMO_MOVES);
        let game = a.source().map(|(g, _)| g.clone()).expect("built from a game");
        let est = probability::simulate(&game, &sigma, &UniformEnv(&game.actmap), DEMO_MOVES, DEMO_SAMPLES, seed, 0);
        let emit: Map<String, Value> = (0..sigma.memory_size())
            .map(|m| {
                (
                    sigma.memory_name(m).to_string(),
                    dist_value(sigma.player_dist(m), |x| a.actmap().action_name(x).to_string()),
                )
            })
            .collect();
        report["strategy"] = Value::Object(emit);
        report["verified"] = json!(verified);
        report["rank_progress"] = json!({
            "min_decrease_prob": rational::format(&rp.min_decrease_prob),
            "violations": rp.violations,
        });
        report["reach_prob"] = json!({ "horizon": DEMO_MOVES, "exact": rational::format(&p) });
        report["simulation"] = json!({
            "moves": DEMO_MOVES,
            "samples": est.samples,
            "estimate": format!("{:.6}", est.estimate),
        });
        (
            valid && verified && rp.ok(),
            format!(
                "{}: winning, verified: {}, Pr(reach within {DEMO_MOVES} moves) = {:.6}, sampled {:.6}",
                inst.name,
                yes(verified),
                rational::to_f64(&p),
                est.estimate
            ),
        )
    } else {
        let patterns = support_patterns(&a, g.max_spoilers)?;
        let mut spoiled = 0;
        for sigma in &patterns {
            if build_spoiler(&a, sigma, a.initial(), g.max_spoilers)?.is_some() {
                spoiled += 1;
            }
        }
        report["refutation"] = json!({ "patterns": patterns.len(), "spoiled": spoiled });
        (
            false,
            format!(
                "{}: not almost-sure winning; {spoiled} of {} support patterns spoiled",
                inst.name,
                patterns.len()
            ),
        )
    };
    Ok(Outcome {
        manifest: man,
        report: obj(report),
        verdict: ok,
        summary,
    })
}

pub fn demo_cmd(name: &str, dir: Option<&Path>, seed: u64, g: &Global) -> Res<Outcome> {
    if name == "fig3" {
        return demo_fig3(dir, g);
    }
    let inst = instances::bundled().into_iter().find(|i| i.name == name).ok_or_else(|| {
        let names: Vec<&str> = instances::bundled().iter().map(|i| i.name).collect();
        CliError::Input(format!("unknown demo `{name}` (expected one of: {})", names.join(", ")))
    })?;
    demo_game(inst, dir, seed, g)
}
