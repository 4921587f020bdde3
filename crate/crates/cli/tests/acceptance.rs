//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rig_core::enumerate;
use rig_core::game::{Axiom, TARGET};
use rig_core::generate;
use rig_core::instances::{self, Instance};
use rig_core::morphism::{self, raw_targets};
use rig_core::probability::{self, MarkovChain, UniformEnv};
use rig_core::rational::{int, ratio, Rational};
use rig_core::refinement::{psi, Formula};
use rig_core::reif::{self, ReifGame};
use rig_core::strategy::{self, check_rank_progress, support_patterns, Emission};
use rig_core::{
    build_spoiler, extract_strategy, solve_buchi, solve_reach, validate_game, Arena, FiniteMemoryStrategy, Game,
    Morphism, Objective, RigError,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn seconds(d: Duration) -> f64 {
    d.as_secs_f64()
}

// shared instance families

fn perfect_information_instances(seed: u64, n: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| generate::perfect_information(&mut rng, 8, 3, 6)).collect()
}

fn reif_games(seed: u64, n: usize) -> Vec<ReifGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| generate::random_reif(&mut rng, 4, 2)).collect()
}

fn observation_instances(seed: u64, n: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let am = generate::random_actmap(&mut rng, 2, 2, 4);
            generate::observation_game(&mut rng, 4, am, 2, 0.3)
        })
        .collect()
}

fn reach_arena(game: &Game, m: &Morphism) -> Arena {
    Arena::build(game, m, Objective::Reach).expect("generated instances are valid")
}

/// Every reachability arena the invariant checks run on.
fn suite() -> Vec<(String, Arena)> {
    let mut out = Vec::new();
    for inst in instances::all().iter() {
        out.push((inst.name.to_string(), reach_arena(&inst.game, &inst.morphism)));
    }
    for (i, inst) in perfect_information_instances(2, 100).iter().enumerate() {
        out.push((format!("pi-{i}"), reach_arena(&inst.game, &inst.morphism)));
    }
    for (i, inst) in observation_instances(4, 40).iter().enumerate() {
        out.push((format!("obs-{i}"), reach_arena(&inst.game, &inst.morphism)));
    }
    for (i, rg) in reif_games(3, 50).iter().enumerate() {
        out.push((format!("reif-{i}"), reach_arena(&reif::reif_to_game(rg), &reif::subset_morphism(rg))));
    }
    for levels in [4, 9, 19, 39] {
        out.push((format!("cascade-{levels}"), generate::cascade(levels)));
    }
    out
}

// C1

fn c1() -> Outcome {
    let start = Instant::now();
    let inst = instances::matching_pennies();
    let a = reach_arena(&inst.game, &inst.morphism);
    let r = solve_reach(&a);
    ensure!(r.winning, "not winning");
    ensure!(r.y_star.count_ones(..) == a.universe_size(), "Y* is not the full universe");
    let am = a.actmap();
    for mid in ["p1", "p2"] {
        let p = a.state_names().iter().position(|n| n == mid).ok_or(format!("no state {mid}"))?;
        let acts: Vec<&str> = r.action_sets[p].iter().map(|&x| am.action_name(x)).collect();
        ensure!(acts == ["a", "b"], "A_{mid} = {acts:?}");
    }
    let sigma = extract_strategy(&a, &r).map_err(|e| e.to_string())?;
    let half = ratio(1, 2);
    for m in 0..sigma.memory_size() {
        let d = sigma.player_dist(m);
        ensure!(
            d.len() == 2 && d.iter().all(|(_, p)| *p == half),
            "strategy at {} is {d:?}",
            sigma.memory_name(m)
        );
    }
    let chain = MarkovChain::product(&a, &sigma, &FiniteMemoryStrategy::uniform_env(am), a.initial());
    for k in 0..=30usize {
        let expected = int(1) - ratio(1, 1i64 << k);
        let got = chain.reach_prob_horizon(2 * k);
        ensure!(got == expected, "horizon {} moves: {got} != {expected}", 2 * k);
    }
    let game = &inst.game;
    let est = probability::simulate(game, &sigma, &UniformEnv(&game.actmap), 60, 10_000, 2024, 0);
    ensure!(est.estimate >= 0.999, "Monte Carlo estimate {}", est.estimate);
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(1), "took {:.3} s", seconds(t));
    Ok(format!(
        "Y* full ({} elements), A_p1 = A_p2 = {{a,b}}, uniform 1/2, horizon exact for k <= 30, MC {:.6} over 10^4 x 30 rounds, {:.3} s",
        a.universe_size(),
        est.estimate,
        seconds(t)
    ))
}

// C2

/// Sure-reachability attractor of colour-1 states on the Moore machine.
fn attractor(game: &Game) -> Vec<bool> {
    let m = &game.coloring;
    let am = &game.actmap;
    let mut win: Vec<bool> = (0..m.num_states()).map(|q| m.output(q) == TARGET).collect();
    loop {
        let next: Vec<bool> = (0..m.num_states())
            .map(|q| {
                win[q]
                    || (0..am.num_actions()).any(|a| am.moves_of(a).iter().all(|&c| win[m.step(q, c)]))
            })
            .collect();
        if next == win {
            return win;
        }
        win = next;
    }
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut winning = 0;
    let mut states = 0;
    for inst in perfect_information_instances(7, 100) {
        let a = reach_arena(&inst.game, &inst.morphism);
        let r = solve_reach(&a);
        let oracle = attractor(&inst.game);
        let names = inst.game.coloring.names();
        for p in 0..a.num_states() {
            let expected = a.targets().contains(p) || {
                let q = names
                    .iter()
                    .position(|n| n == a.state_name(p))
                    .ok_or(format!("arena state {} has no Moore state", a.state_name(p)))?;
                oracle[q]
            };
            states += 1;
            if r.contains(p) != expected {
                mismatches += 1;
            }
        }
        winning += usize::from(r.winning);
    }
    let t = start.elapsed();
    ensure!(mismatches == 0, "{mismatches} mismatches");
    ensure!(t < Duration::from_secs(5), "took {:.3} s", seconds(t));
    Ok(format!(
        "100 instances, {states} states compared, 0 mismatches ({winning} winning), {:.3} s",
        seconds(t)
    ))
}

// C3

type BeliefNode = (usize, BTreeSet<usize>);

/// Qualitative almost-sure reachability on the belief product of a Reif
/// game: actions are allowed at a belief when every successor of every
/// member stays in Y; a node progresses when some allowed action leads
/// surely into X; Y keeps the nodes whose whole belief progresses.
fn belief_oracle(rg: &ReifGame) -> HashMap<BeliefNode, bool> {
    let am = &rg.actmap;
    let step = |l: usize, c: usize| if rg.winning[l] { l } else { rg.trans[l][c] };
    let obs = |l: usize| (rg.observation[l], rg.winning[l]);
    let init: BeliefNode = (rg.initial, BTreeSet::from([rg.initial]));
    let mut index = HashMap::from([(init.clone(), 0usize)]);
    let mut nodes = vec![init];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < nodes.len() {
        let (l, b) = nodes[k].clone();
        let row = (0..am.num_moves())
            .map(|c| {
                let l2 = step(l, c);
                let mut b2 = BTreeSet::new();
                for &x in &b {
                    for &d in am.moves_of(am.act(c)) {
                        let y = step(x, d);
                        if obs(y) == obs(l2) {
                            b2.insert(y);
                        }
                    }
                }
                let key = (l2, b2);
                *index.entry(key.clone()).or_insert_with(|| {
                    nodes.push(key);
                    nodes.len() - 1
                })
            })
            .collect();
        succ.push(row);
        k += 1;
    }
    let n = nodes.len();
    let mut by_belief: HashMap<&BTreeSet<usize>, Vec<usize>> = HashMap::new();
    for (i, (_, b)) in nodes.iter().enumerate() {
        by_belief.entry(b).or_default().push(i);
    }
    let win: Vec<bool> = nodes.iter().map(|(l, _)| rg.winning[*l]).collect();
    let mut y = vec![true; n];
    loop {
        let allowed: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..am.num_actions())
                    .filter(|&a| {
                        by_belief[&nodes[i].1]
                            .iter()
                            .all(|&j| am.moves_of(a).iter().all(|&c| y[succ[j][c]]))
                    })
                    .collect()
            })
            .collect();
        let mut x: Vec<bool> = (0..n).map(|i| y[i] && win[i]).collect();
        loop {
            let next: Vec<bool> = (0..n)
                .map(|i| {
                    x[i] || (y[i] && allowed[i].iter().any(|&a| am.moves_of(a).iter().all(|&c| x[succ[i][c]])))
                })
                .collect();
            if next == x {
                break;
            }
            x = next;
        }
        let next: Vec<bool> = (0..n).map(|i| by_belief[&nodes[i].1].iter().all(|&j| x[j])).collect();
        if next == y {
            return nodes.into_iter().zip(y).collect();
        }
        y = next;
    }
}

fn parse_belief_name(rg: &ReifGame, name: &str) -> Option<BeliefNode> {
    let loc = |s: &str| rg.locations.iter().position(|l| l == s);
    let (l, b) = name.split_once('|')?;
    let inner = b.strip_prefix('{')?.strip_suffix('}')?;
    let belief = inner.split(',').map(loc).collect::<Option<BTreeSet<_>>>()?;
    Some((loc(l)?, belief))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let mut winning = 0;
    let mut compared = 0;
    for (i, rg) in reif_games(13, 50).iter().enumerate() {
        let a = reach_arena(&reif::reif_to_game(rg), &reif::subset_morphism(rg));
        let r = solve_reach(&a);
        let oracle = belief_oracle(rg);
        for p in 0..a.num_states() {
            let node = parse_belief_name(rg, a.state_name(p)).ok_or(format!("game {i}: bad name {}", a.state_name(p)))?;
            let expected = *oracle.get(&node).ok_or(format!("game {i}: {} unknown to the oracle", a.state_name(p)))?;
            ensure!(
                r.contains(p) == expected,
                "game {i}: state {} solver {} oracle {expected}",
                a.state_name(p),
                r.contains(p)
            );
            compared += 1;
        }
        ensure!(oracle.len() == a.num_states(), "game {i}: {} belief nodes vs {} states", oracle.len(), a.num_states());
        winning += usize::from(r.winning);
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(30), "took {:.3} s", seconds(t));
    Ok(format!(
        "50 games, {compared} belief states agree ({winning} winning), {:.3} s",
        seconds(t)
    ))
}

// C4

fn invariants(name: &str, a: &Arena) -> Result<(), String> {
    let r = solve_reach(a);
    let y = &r.y_star;
    ensure!(&a.interior(y) == y, "{name}: Y* != int(Y*)");
    let targets = a.target_set();
    ensure!(targets.is_subset(y), "{name}: P_F not in Y*");
    let mut bound = a.pre(y);
    bound.union_with(&targets);
    ensure!(y.is_subset(&bound), "{name}: Y* not in Pre(Y*) u P_F");
    for e in y.ones() {
        let rank = r.rank(e).ok_or(format!("{name}: element without rank"))?;
        if e < a.num_states() {
            ensure!(rank % 2 == 1, "{name}: state {} has rank {rank}", a.element_name(e));
            ensure!((rank == 1) == a.targets().contains(e), "{name}: rank 1 at {}", a.element_name(e));
        } else {
            ensure!(rank % 2 == 0, "{name}: pair {} has rank {rank}", a.element_name(e));
        }
    }
    ensure!(r.outer_iterations <= a.universe_size(), "{name}: outer iterations");
    ensure!(r.inner_iterations <= a.universe_size(), "{name}: inner iterations");
    Ok(())
}

/// Least-squares slope of `log t` against `log n`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn c4() -> Outcome {
    let suite = suite();
    for (name, a) in &suite {
        invariants(name, a)?;
    }
    let mut points = Vec::new();
    for levels in [4, 9, 19, 39] {
        let a = generate::cascade(levels);
        let n = a.num_states();
        ensure!(n == 2 * levels + 2, "cascade size");
        let r = solve_reach(&a);
        ensure!(r.outer_iterations == levels + 2, "cascade-{levels}: {} outer iterations", r.outer_iterations);
        let reps = 4000 / n;
        let mut best = f64::INFINITY;
        for _ in 0..7 {
            let t = Instant::now();
            for _ in 0..reps {
                std::hint::black_box(solve_reach(std::hint::black_box(&a)));
            }
            best = best.min(seconds(t.elapsed()) / reps as f64);
        }
        points.push((n as f64, best));
    }
    let k = slope(&points);
    ensure!(k <= 2.5, "fitted exponent {k:.2} > 2.5 ({points:?})");
    let timings: Vec<String> = points.iter().map(|(n, t)| format!("{n}:{:.1}us", t * 1e6)).collect();
    Ok(format!(
        "invariants hold on {} arenas; cascade exponent {k:.2} ({})",
        suite.len(),
        timings.join(" ")
    ))
}

// C5

const SPOILER_CAP: u128 = 1 << 16;
const PATTERN_CAP: u128 = 1 << 8;

fn c5() -> Outcome {
    let (mut won, mut lost, mut patterns, mut skipped) = (0, 0, 0, 0);
    for (name, a) in suite().iter().filter(|(n, _)| !n.starts_with("cascade")) {
        let r = solve_reach(a);
        if r.winning {
            let sigma = extract_strategy(a, &r).map_err(|e| e.to_string())?;
            match strategy::verify_almost_sure(a, &sigma, a.initial(), SPOILER_CAP) {
                Ok(ok) => {
                    ensure!(ok, "{name}: extracted strategy is spoiled");
                    won += 1;
                }
                Err(RigError::CapExceeded { .. }) => skipped += 1,
                Err(e) => return Err(format!("{name}: {e}")),
            }
        } else {
            let pats = match support_patterns(a, PATTERN_CAP) {
                Ok(p) => p,
                Err(RigError::CapExceeded { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(format!("{name}: {e}")),
            };
            let mut all = true;
            let mut checked = 0;
            for sigma in &pats {
                match build_spoiler(a, sigma, a.initial(), SPOILER_CAP) {
                    Ok(Some(sp)) => {
                        let chain = MarkovChain::product(a, sigma, &sp.strategy, a.initial());
                        let p = chain.reach_prob_limit();
                        ensure!(p < Rational::one() && p == sp.reach_prob, "{name}: spoiler value {p}");
                        ensure!(!chain.almost_sure_reach(), "{name}: spoiled chain reaches almost surely");
                        checked += 1;
                    }
                    Ok(None) => return Err(format!("{name}: a support pattern is not spoiled but Y* says losing")),
                    Err(RigError::CapExceeded { .. }) => all = false,
                    Err(e) => return Err(format!("{name}: {e}")),
                }
            }
            if all {
                lost += 1;
                patterns += checked;
            } else {
                skipped += 1;
            }
        }
    }
    ensure!(won > 0 && lost > 0, "too few instances checked: {won} winning, {lost} losing");
    Ok(format!(
        "{won} winning verified, {lost} losing refuted over {patterns} support patterns, {skipped} above the desk-scale caps"
    ))
}

// C6

/// Environment that always resolves an action to its first move.
fn first_move_env(a: &Arena) -> FiniteMemoryStrategy {
    let am = a.actmap();
    let emit = vec![(0..am.num_actions()).map(|x| strategy::dirac(am.moves_of(x)[0])).collect()];
    FiniteMemoryStrategy::new(vec!["e".into()], 0, vec![vec![0; am.num_moves()]], Emission::Environment(emit), am)
        .expect("well formed")
}

fn c6() -> Outcome {
    let mut checked = 0;
    let mut bounds = 0;
    for (name, a) in suite() {
        let r = solve_reach(&a);
        if !r.winning {
            continue;
        }
        let sigma = extract_strategy(&a, &r).map_err(|e| e.to_string())?;
        let na = a.num_actions() as i64;
        let rp = check_rank_progress(&a, &r, &sigma);
        ensure!(rp.ok(), "{name}: {:?}", rp.violations);
        ensure!(rp.min_decrease_prob >= ratio(1, na), "{name}: decrease probability {}", rp.min_decrease_prob);
        let n_star = r.max_rank() as usize;
        let nu = Rational::one() / Rational::from_integer(na.into()).pow(n_star as i32);
        for env in [FiniteMemoryStrategy::uniform_env(a.actmap()), first_move_env(&a)] {
            let chain = MarkovChain::product(&a, &sigma, &env, a.initial());
            for k in 1..=4usize {
                let gap = Rational::one() - chain.reach_prob_horizon(k * n_star);
                let bound = (Rational::one() - &nu).pow(k as i32);
                ensure!(gap <= bound, "{name}: 1 - P({}) = {gap} > {bound}", k * n_star);
                bounds += 1;
            }
        }
        checked += 1;
    }
    ensure!(checked > 0, "no winning instance");
    Ok(format!("{checked} winning instances, rank decrease >= 1/|A| everywhere, {bounds} horizon bounds hold exactly"))
}

// C7

fn c7() -> Outcome {
    let start = Instant::now();
    let mut pure_points = 0;
    for grid in 2..=16u32 {
        for (formula, check) in [
            (Formula::Psi, psi::check_psi as fn(u32) -> rig_core::Result<psi::Verdict>),
            (Formula::PsiPrime, psi::check_psi_prime),
        ] {
            let v = check(grid).map_err(|e| e.to_string())?;
            ensure!(v.holds, "{} fails at grid {grid}", formula.name());
            psi::replay(&v.certificate).map_err(|e| format!("{} grid {grid}: {e}", formula.name()))?;
            if formula != Formula::Psi {
                continue;
            }
            for p in v.certificate.points.iter().filter(|p| p.y1 == "1/2") {
                let color = match p.y2.as_str() {
                    "0" => 4,
                    "1" => 5,
                    _ => continue,
                };
                let case = p
                    .cases
                    .iter()
                    .find(|c| c.region == psi::Region::T1One)
                    .ok_or(format!("grid {grid}: no t1 = 1 case at y2 = {}", p.y2))?;
                ensure!(case.discrepancies.len() == 1, "grid {grid}: {:?}", case.discrepancies);
                let d = &case.discrepancies[0];
                ensure!(d.colors == [color], "grid {grid} y2 = {}: colours {:?}", p.y2, d.colors);
                ensure!(
                    d.g_mass == "0" && d.h_mass == "1/2",
                    "grid {grid} y2 = {}: {} vs {}",
                    p.y2,
                    d.g_mass,
                    d.h_mass
                );
                pure_points += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure!(pure_points == 30, "{pure_points} pure points checked");
    ensure!(t < Duration::from_secs(5), "took {:.3} s", seconds(t));
    Ok(format!(
        "psi and psi-prime hold with replayed certificates for grid 2..16; y2 in {{0,1}} shows 1/2 vs 0 on colours 4/5; {:.3} s",
        seconds(t)
    ))
}

// C8

const DEPTH: usize = 6;

fn equivalence_closure(n: usize, pairs: &BTreeSet<(usize, usize)>) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    let find = |label: &mut Vec<usize>, mut x: usize| {
        while label[x] != x {
            label[x] = label[label[x]];
            x = label[x];
        }
        x
    };
    for &(p, q) in pairs {
        let (rp, rq) = (find(&mut label, p), find(&mut label, q));
        label[rp.max(rq)] = rp.min(rq);
    }
    (0..n).map(|x| find(&mut label, x)).collect()
}

/// Compares every validator with brute force on one game and morphism.
/// Returns the number of verdicts compared.
fn fidelity(name: &str, game: &Game, m: &Morphism) -> Result<usize, String> {
    let mut verdicts = 0;
    let report = validate_game(game, 0);
    let brute = enumerate::game_axiom_witnesses(game, DEPTH);
    for axiom in Axiom::ALL {
        let exact = &report.verdict(axiom).witness;
        let found = &brute[&axiom];
        match (exact, found) {
            (None, Some(w)) => return Err(format!("{name}: {} passes but fails on {w:?}", axiom.name())),
            (Some(w), None) if w.left.len().max(w.right.len()) <= DEPTH => {
                return Err(format!("{name}: {} witness {w:?} not confirmed", axiom.name()))
            }
            (Some(w), Some(b)) if w.left.len().max(w.right.len()) <= DEPTH && w != b => {
                return Err(format!("{name}: {} witness {w:?} is not the least ({b:?})", axiom.name()))
            }
            _ => {}
        }
        verdicts += 1;
    }
    let m = m.trim();
    let refinement = morphism::validate_refinement(game, &m).map_err(|e| e.to_string())?;
    match &refinement {
        None => ensure!(
            !enumerate::refinement_violated(game, &m, DEPTH),
            "{name}: refinement passes but brute force finds a violation"
        ),
        Some(v) => {
            let (l, r) = (&v.witness.left, &v.witness.right);
            let color = |h: &[usize]| game.coloring.output(game.coloring.run(h));
            ensure!(
                m.run(l) == m.run(r) && color(l) != color(r),
                "{name}: refinement witness is not a violation"
            );
            ensure!(
                l.len().max(r.len()) > DEPTH || enumerate::refinement_violated(game, &m, DEPTH),
                "{name}: refinement fails but brute force finds no violation"
            );
        }
    }
    verdicts += 1;
    let rect = morphism::validate_rectangularity(game, &m).map_err(|e| e.to_string())?;
    let brute_rect = enumerate::rectangularity_violated(game, &m, DEPTH);
    match &rect {
        None => ensure!(!brute_rect, "{name}: rectangularity passes but brute force finds a violation"),
        Some(v) => ensure!(
            brute_rect || v.witness.left.len().max(v.witness.right.len()) >= DEPTH,
            "{name}: rectangularity fails ({}) but brute force finds no violation",
            v.detail
        ),
    }
    verdicts += 1;
    if report.is_valid() && refinement.is_none() && rect.is_none() {
        let approx = morphism::compute_approx(game, &m).map_err(|v| format!("{name}: {v}"))?;
        let closure = equivalence_closure(m.num_states(), &enumerate::approx_pairs(game, &m, DEPTH));
        for p in 0..m.num_states() {
            for q in 0..m.num_states() {
                ensure!(
                    approx.related(p, q) == (closure[p] == closure[q]),
                    "{name}: approx disagrees on ({}, {})",
                    m.name(p),
                    m.name(q)
                );
            }
        }
        let targets = raw_targets(game, &m);
        let brute: HashSet<usize> = enumerate::histories(game.num_moves(), DEPTH)
            .iter()
            .filter(|h| game.coloring.output(game.coloring.run(h)) == TARGET)
            .map(|h| m.run(h))
            .collect();
        for p in 0..m.num_states() {
            ensure!(targets.contains(p) == brute.contains(&p), "{name}: target set disagrees at {}", m.name(p));
        }
        verdicts += 2;
    }
    Ok(verdicts)
}

fn c8() -> Outcome {
    let mut verdicts = 0;
    let bundled = instances::bundled();
    for inst in &bundled {
        verdicts += fidelity(inst.name, &inst.game, &inst.morphism)?;
    }
    let mut bases: Vec<Instance> = bundled;
    bases.extend(observation_instances(21, 6));
    bases.extend(perfect_information_instances(22, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut broken = 0;
    for i in 0..100 {
        let base = &bases[i % bases.len()];
        let (g, m, mutation) = generate::mutate(&mut rng, &base.game, &base.morphism);
        let name = format!("mutant {i} of {} ({mutation:?})", base.name);
        verdicts += fidelity(&name, &g, &m)?;
        let report = validate_game(&g, 0);
        let mm = m.trim();
        let bad = !report.is_valid()
            || morphism::validate_refinement(&g, &mm).map_err(|e| e.to_string())?.is_some()
            || morphism::validate_rectangularity(&g, &mm).map_err(|e| e.to_string())?.is_some();
        broken += usize::from(bad);
    }
    Ok(format!(
        "{} bundled instances and 100 mutants ({broken} rejected), {verdicts} verdicts agree with depth-{DEPTH} enumeration, 0 false",
        instances::bundled().len()
    ))
}

// C9

/// Bottom SCCs reachable from `start` on a small successor graph.
fn reachable_bottoms(succ: &[Vec<usize>], start: usize) -> Vec<Vec<usize>> {
    let n = succ.len();
    let reach_from = |s: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &succ[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let reach: Vec<Vec<bool>> = (0..n).map(reach_from).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in (0..n).filter(|&s| reach[start][s]) {
        let bottom = (0..n).all(|t| !reach[s][t] || reach[t][s]);
        if bottom {
            let comp: Vec<usize> = (0..n).filter(|&t| reach[s][t]).collect();
            if !out.contains(&comp) {
                out.push(comp);
            }
        }
    }
    out
}

/// Whether some information-consistent support pattern over the morphism
/// visits targets infinitely often with probability 1 against every
/// positional environment.
fn buchi_oracle(a: &Arena) -> bool {
    let np = a.num_states();
    let am = a.actmap();
    let na = am.num_actions();
    let classes = a.approx().classes();
    let per = (1usize << na) - 1;
    let patterns = per.pow(classes.len() as u32);
    let points: Vec<(usize, usize)> = (0..np).flat_map(|p| (0..na).map(move |x| (p, x))).collect();
    let envs: usize = points.iter().map(|&(_, x)| am.moves_of(x).len()).product();
    (0..patterns).any(|mut code| {
        let mut support = vec![0usize; np];
        for class in classes {
            let mask = code % per + 1;
            code /= per;
            for &p in class {
                support[p] = mask;
            }
        }
        (0..envs).all(|mut e| {
            let mut choice = HashMap::new();
            for &(p, x) in &points {
                let k = am.moves_of(x).len();
                choice.insert((p, x), am.moves_of(x)[e % k]);
                e /= k;
            }
            let succ: Vec<Vec<usize>> = (0..np)
                .map(|p| {
                    (0..na)
                        .filter(|x| support[p] >> x & 1 == 1)
                        .map(|x| a.step(p, choice[&(p, x)]))
                        .collect()
                })
                .collect();
            reachable_bottoms(&succ, a.initial())
                .iter()
                .all(|comp| comp.iter().any(|&p| a.targets().contains(p)))
        })
    })
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut arenas = Vec::new();
    let mut attempts = 0;
    while arenas.len() < 50 {
        attempts += 1;
        ensure!(attempts < 10_000, "could not generate 50 small instances");
        let inst = if attempts % 2 == 0 {
            generate::perfect_information(&mut rng, 5, 2, 4)
        } else {
            let am = generate::random_actmap(&mut rng, 2, 2, 3);
            generate::observation_game(&mut rng, 3, am, 2, 0.4)
        };
        let Ok(a) = Arena::build(&inst.game, &inst.morphism, Objective::Buchi) else {
            continue;
        };
        if a.num_states() <= 6 {
            arenas.push(a);
        }
    }
    let mut winning = 0;
    for (i, a) in arenas.iter().enumerate() {
        let solved = solve_buchi(a).winning;
        let oracle = buchi_oracle(a);
        ensure!(solved == oracle, "instance {i}: solver {solved}, chain analysis {oracle} ({:?})", a.state_names());
        winning += usize::from(solved);
    }
    Ok(format!("50 instances agree with exhaustive chain analysis ({winning} winning)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("C1", c1),
        ("C2", c2),
        ("C3", c3),
        ("C4", c4),
        ("C5", c5),
        ("C6", c6),
        ("C7", c7),
        ("C8", c8),
        ("C9", c9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, f) in criteria {
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("{id} PASS: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id} FAIL: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
