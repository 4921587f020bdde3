//! Seeded random instances and deliberate mutations for oracle tests and
//! benchmarks.

use rand::Rng;

use crate::game::{ActMap, Game, MooreMachine, SyncRelation};
use crate::instances::{moore_morphism, observation_relation, Instance};
use crate::morphism::Morphism;
use crate::reif::{belief_morphism, ReifGame};
use crate::solver::Arena;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `num_actions` actions named `a`, `b`, ... with between 1 and
/// `max_per_action` moves each, and at most `max_moves` moves in total.
pub fn random_actmap<R: Rng>(rng: &mut R, num_actions: usize, max_per_action: usize, max_moves: usize) -> ActMap {
    assert!((1..=26).contains(&num_actions) && num_actions <= max_moves);
    let mut counts = vec![1usize; num_actions];
    let mut total = num_actions;
    for c in counts.iter_mut() {
        let extra = rng.random_range(0..max_per_action);
        let extra = extra.min(max_moves - total);
        *c += extra;
        total += extra;
    }
    let mut actions = Vec::new();
    let mut moves = Vec::new();
    let mut act = Vec::new();
    for (a, &k) in counts.iter().enumerate() {
        let name = ((b'a' + a as u8) as char).to_string();
        for i in 1..=k {
            moves.push(format!("{name}{i}"));
            act.push(a);
        }
        actions.push(name);
    }
    ActMap::new(actions, moves, act).expect("every action has a move")
}

/// Random Moore machine; each state is a target with probability `p_target`.
pub fn random_moore<R: Rng>(rng: &mut R, num_states: usize, num_moves: usize, p_target: f64) -> MooreMachine {
    let delta = (0..num_states)
        .map(|_| (0..num_moves).map(|_| rng.random_range(0..num_states)).collect())
        .collect();
    let output = (0..num_states).map(|_| u32::from(rng.random_bool(p_target))).collect();
    MooreMachine::new(names("s", num_states), 0, delta, output).expect("tables are total")
}

/// Perfect-information instance: `∼` is equality and the morphism is the
/// colouring machine itself. Sizes are drawn up to the given bounds.
pub fn perfect_information<R: Rng>(rng: &mut R, max_states: usize, max_actions: usize, max_moves: usize) -> Instance {
    let na = rng.random_range(1..=max_actions);
    let actmap = random_actmap(rng, na, 3, max_moves);
    let n = rng.random_range(2..=max_states);
    let moore = random_moore(rng, n, actmap.num_moves(), 0.2).trim();
    let refs: Vec<&str> = moore.names().iter().map(String::as_str).collect();
    let morphism = moore_morphism(&moore, &refs);
    let indist = SyncRelation::identity(actmap.num_moves());
    Instance {
        name: "perfect-information",
        game: Game::new(actmap, moore, indist).expect("identity relation reads the moves"),
        morphism,
    }
}

/// Imperfect-information instance: the player sees one of `num_obs`
/// observations of the current Moore state (refined by its colour) and the
/// morphism is the belief construction.
pub fn observation_game<R: Rng>(rng: &mut R, num_states: usize, actmap: ActMap, num_obs: u32, p_target: f64) -> Instance {
    let raw = random_moore(rng, num_states, actmap.num_moves(), p_target);
    let raw_obs: Vec<u32> = (0..num_states)
        .map(|q| 2 * rng.random_range(0..num_obs) + raw.output(q))
        .collect();
    let moore = raw.trim();
    let obs: Vec<u32> = moore
        .names()
        .iter()
        .map(|n| raw_obs[n[1..].parse::<usize>().expect("generated names are s<i>")])
        .collect();
    let indist = observation_relation(&actmap, &moore, &obs);
    let morphism = belief_morphism(&actmap, &moore, &obs);
    Instance {
        name: "observation",
        game: Game::new(actmap, moore, indist).expect("observation relation reads the moves"),
        morphism,
    }
}

/// A game with a state-based observation in the style of Reif: up to
/// `max_locations` locations, two actions with one or two moves each, and
/// `num_obs` observations.
pub fn random_reif<R: Rng>(rng: &mut R, max_locations: usize, num_obs: u32) -> ReifGame {
    let actmap = random_actmap(rng, 2, 2, 4);
    let n = rng.random_range(2..=max_locations);
    let trans = (0..n)
        .map(|_| (0..actmap.num_moves()).map(|_| rng.random_range(0..n)).collect())
        .collect();
    let observation = (0..n).map(|_| rng.random_range(0..num_obs)).collect();
    let winning = (0..n).map(|l| l != 0 && rng.random_bool(0.3)).collect();
    ReifGame::new(names("l", n), 0, actmap, trans, observation, winning).expect("tables are total")
}

/// Family whose reachability solve peels one level per outer round:
/// states `x_i ≈ y_i` for `i < levels`, a target `T` and a losing sink `L`.
/// Action `a` takes `x_i` to `T` and `y_i` to `x_{i+1}` (the last `y` falls
/// to `L`); action `b` always falls to `L`. Losing `y_i` drags `x_i` out
/// through the interior, which in turn loses `y_{i-1}` in the next round.
/// `|P| = 2·levels + 2`.
pub fn cascade(levels: usize) -> Arena {
    assert!(levels >= 1);
    let actmap = ActMap::new(
        vec!["a".into(), "b".into()],
        vec!["a1".into(), "b1".into()],
        vec![0, 1],
    )
    .expect("two actions with one move each");
    let (t, l) = (2 * levels, 2 * levels + 1);
    let x = |i: usize| i;
    let y = |i: usize| levels + i;
    let mut delta = vec![Vec::new(); 2 * levels + 2];
    let mut labels = vec![0; 2 * levels + 2];
    for i in 0..levels {
        let last = i + 1 == levels;
        delta[x(i)] = vec![t, l];
        delta[y(i)] = vec![if last { l } else { x(i + 1) }, l];
        labels[x(i)] = i;
        labels[y(i)] = i;
    }
    delta[t] = vec![t, t];
    delta[l] = vec![l, l];
    labels[t] = levels;
    labels[l] = levels + 1;
    let mut state_names: Vec<String> = (0..levels).map(|i| format!("x{i}")).collect();
    state_names.extend((0..levels).map(|i| format!("y{i}")));
    state_names.extend(["T".to_string(), "L".to_string()]);
    let mut targets = vec![false; 2 * levels + 2];
    targets[t] = true;
    Arena::from_parts(state_names, actmap, x(0), delta, &labels, targets).expect("cascade tables are consistent")
}

/// A deliberate change to a game or morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// `delta_p[state][mv] := to`
    RedirectMorphism { state: usize, mv: usize, to: usize },
    /// Flip the output of a colouring state between 0 and 1.
    FlipColor { state: usize },
    /// Remove a transition of the relation automaton.
    DropRelation { state: usize, letter: usize },
    /// Add or redirect a transition of the relation automaton.
    SetRelation { state: usize, letter: usize, to: usize },
}

fn relation_table(r: &SyncRelation) -> Vec<Vec<Option<usize>>> {
    let n = r.num_moves();
    let mut delta = vec![vec![None; n * n]; r.num_states()];
    for (s, c, d, t) in r.transitions() {
        delta[s][c * n + d] = Some(t);
    }
    delta
}

/// Applies one random mutation. The result may or may not violate an axiom;
/// that is for the validators to decide.
pub fn mutate<R: Rng>(rng: &mut R, game: &Game, m: &Morphism) -> (Game, Morphism, Mutation) {
    let mut game = game.clone();
    let mut m = m.clone();
    let nm = game.num_moves();
    let mutation = match rng.random_range(0..4) {
        0 => {
            let state = rng.random_range(0..m.num_states());
            let mv = rng.random_range(0..nm);
            let to = rng.random_range(0..m.num_states());
            let mut delta: Vec<Vec<usize>> = (0..m.num_states())
                .map(|p| (0..nm).map(|c| m.step(p, c)).collect())
                .collect();
            delta[state][mv] = to;
            m = Morphism::new(m.names().to_vec(), m.initial(), delta).expect("same shape");
            Mutation::RedirectMorphism { state, mv, to }
        }
        1 => {
            let mc = &game.coloring;
            let state = rng.random_range(0..mc.num_states());
            let delta = (0..mc.num_states())
                .map(|q| (0..nm).map(|c| mc.step(q, c)).collect())
                .collect();
            let output = (0..mc.num_states())
                .map(|q| if q == state { u32::from(mc.output(q) == 0) } else { mc.output(q) })
                .collect();
            game.coloring = MooreMachine::new(mc.names().to_vec(), mc.initial(), delta, output).expect("same shape");
            Mutation::FlipColor { state }
        }
        k => {
            let r = &game.indist;
            let mut delta = relation_table(r);
            let state = rng.random_range(0..r.num_states());
            let present: Vec<usize> = (0..nm * nm).filter(|&l| delta[state][l].is_some()).collect();
            let mutation = if k == 2 && !present.is_empty() {
                let letter = present[rng.random_range(0..present.len())];
                delta[state][letter] = None;
                Mutation::DropRelation { state, letter }
            } else {
                let letter = rng.random_range(0..nm * nm);
                let to = rng.random_range(0..r.num_states());
                delta[state][letter] = Some(to);
                Mutation::SetRelation { state, letter, to }
            };
            let accepting = (0..r.num_states()).map(|s| r.is_accepting(s)).collect();
            game.indist = SyncRelation::new(r.names().to_vec(), r.initial(), nm, delta, accepting).expect("same shape");
            mutation
        }
    };
    (game, m, mutation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_game, Objective};
    use crate::morphism::{validate_rectangularity, validate_refinement};
    use crate::solver::solve_reach;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn actmap_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let na = rng.random_range(1..=3);
            let am = random_actmap(&mut rng, na, 3, 6);
            assert_eq!(am.num_actions(), na);
            assert!(am.num_moves() <= 6);
        }
    }

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let inst = perfect_information(&mut rng, 8, 3, 6);
            assert!(inst.morphism.num_states() <= 8);
            assert!(validate_game(&inst.game, 0).is_valid());
            let am = random_actmap(&mut rng, 2, 2, 4);
            let inst = observation_game(&mut rng, 4, am, 2, 0.3);
            assert!(validate_game(&inst.game, 0).is_valid());
            assert_eq!(validate_refinement(&inst.game, &inst.morphism).unwrap(), None);
            assert_eq!(validate_rectangularity(&inst.game, &inst.morphism).unwrap(), None);
            Arena::build(&inst.game, &inst.morphism, Objective::Buchi).unwrap();
        }
    }

    #[test]
    fn cascade_peels_one_level_per_round() {
        for levels in [1, 4, 9] {
            let arena = cascade(levels);
            assert_eq!(arena.num_states(), 2 * levels + 2);
            let r = solve_reach(&arena);
            assert!(!r.winning);
            assert_eq!(r.outer_iterations, levels + 2);
            let winning_states: Vec<&str> = r.y_star.ones().filter(|&y| y < arena.num_states()).map(|p| arena.state_name(p)).collect();
            assert_eq!(winning_states, vec!["T"]);
        }
    }

    #[test]
    fn mutation_changes_something() {
        let inst = crate::instances::matching_pennies();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (g, m, mu) = mutate(&mut rng, &inst.game, &inst.morphism);
            let changed = g != inst.game || m != inst.morphism;
            let noop = match mu {
                Mutation::RedirectMorphism { state, mv, to } => inst.morphism.step(state, mv) == to,
                Mutation::SetRelation { state, letter, to } => {
                    let n = inst.game.num_moves();
                    inst.game.indist.step(state, letter / n, letter % n) == Some(to)
                }
                _ => false,
            };
            assert_eq!(changed, !noop, "{mu:?}");
        }
    }
}
