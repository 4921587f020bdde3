//! Small built-in games with hand-written morphisms.

use crate::game::{ActMap, Game, MooreMachine, SyncRelation};
use crate::morphism::Morphism;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: &'static str,
    pub game: Game,
    pub morphism: Morphism,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Relates same-length histories whose actions agree and whose successive
/// Moore states carry equal observations.
pub fn observation_relation(actmap: &ActMap, moore: &MooreMachine, obs: &[u32]) -> SyncRelation {
    SyncRelation::explore(
        actmap.num_moves(),
        (moore.initial(), moore.initial()),
        |&(q, r), c, d| {
            let (q2, r2) = (moore.step(q, c), moore.step(r, d));
            (actmap.act(c) == actmap.act(d) && obs[q2] == obs[r2]).then_some((q2, r2))
        },
        |_| true,
        |&(q, r)| format!("{}|{}", moore.name(q), moore.name(r)),
    )
}

/// The colouring machine itself, read as a morphism.
pub fn moore_morphism(moore: &MooreMachine, names: &[&str]) -> Morphism {
    let delta = (0..moore.num_states())
        .map(|q| (0..moore.num_moves()).map(|c| moore.step(q, c)).collect())
        .collect();
    Morphism::new(strings(names), moore.initial(), delta).expect("moore tables are total")
}

fn pennies_actmap() -> ActMap {
    ActMap::new(strings(&["a", "b"]), strings(&["a1", "a2", "b1", "b2"]), vec![0, 0, 1, 1]).unwrap()
}

/// Pennies where `restart` says what the winning state does next: stay
/// (absorbing) or play another round.
fn pennies_moore(restart: bool) -> MooreMachine {
    // moves: a1 a2 b1 b2; q1 = env chose 1, q2 = env chose 2
    let q3 = if restart { vec![1, 2, 1, 2] } else { vec![3, 3, 3, 3] };
    MooreMachine::new(
        strings(&["q0", "q1", "q2", "q3"]),
        0,
        vec![vec![1, 2, 1, 2], vec![3, 3, 0, 0], vec![0, 0, 3, 3], q3],
        vec![0, 0, 0, 1],
    )
    .unwrap()
}

/// Each round the environment hides a bit and the player wins by guessing
/// it: `a` matches 1, `b` matches 2. A wrong guess restarts the round.
pub fn matching_pennies() -> Instance {
    let actmap = pennies_actmap();
    let moore = pennies_moore(false);
    let indist = observation_relation(&actmap, &moore, &[0, 0, 0, 1]);
    let morphism = moore_morphism(&moore, &["p0", "p1", "p2", "pw"]);
    Instance {
        name: "matching-pennies",
        game: Game::new(actmap, moore, indist).unwrap(),
        morphism,
    }
}

/// Matching pennies where `a1·a1 ∼ a1·b1` is added to the relation. The
/// morphism is no longer rectangular.
pub fn matching_pennies_coarsened() -> Instance {
    let base = matching_pennies();
    let rel = &base.game.indist;
    let n = rel.num_moves();
    let mut names = rel.names().to_vec();
    names.push("mix".into());
    let mix = names.len() - 1;
    let q11 = rel.names().iter().position(|s| s == "q1|q1").unwrap();
    let mut delta: Vec<Vec<Option<usize>>> = (0..rel.num_states())
        .map(|s| (0..n * n).map(|l| rel.step(s, l / n, l % n)).collect())
        .collect();
    delta.push(vec![None; n * n]);
    let (a1, b1) = (0, 2);
    delta[q11][a1 * n + b1] = Some(mix);
    delta[q11][b1 * n + a1] = Some(mix);
    let mut accepting = vec![true; rel.num_states()];
    accepting.push(true);
    let indist = SyncRelation::new(names, rel.initial(), n, delta, accepting).unwrap();
    Instance {
        name: "matching-pennies-coarsened",
        game: Game { indist, ..base.game },
        morphism: base.morphism,
    }
}

/// Matching pennies where a win starts a fresh round, so colour 1 recurs.
pub fn mp_buchi() -> Instance {
    let actmap = pennies_actmap();
    let moore = pennies_moore(true);
    let indist = observation_relation(&actmap, &moore, &[0, 0, 0, 1]);
    let morphism = moore_morphism(&moore, &["p0", "p1", "p2", "pw"]);
    Instance {
        name: "mp-buchi",
        game: Game::new(actmap, moore, indist).unwrap(),
        morphism,
    }
}

/// One action; the environment picks between a winning and a losing sink.
pub fn env_loss() -> Instance {
    let actmap = ActMap::new(strings(&["go"]), strings(&["win", "lose"]), vec![0, 0]).unwrap();
    let moore = MooreMachine::new(
        strings(&["s0", "W", "L"]),
        0,
        vec![vec![1, 2], vec![1, 1], vec![2, 2]],
        vec![0, 1, 0],
    )
    .unwrap();
    let indist = SyncRelation::identity(2);
    let morphism = moore_morphism(&moore, &["p0", "pW", "pL"]);
    Instance {
        name: "env-loss",
        game: Game::new(actmap, moore, indist).unwrap(),
        morphism,
    }
}

/// The target is reached surely, after which the environment may move to a
/// colour-0 sink and stay there.
pub fn confine() -> Instance {
    let actmap = ActMap::new(strings(&["go"]), strings(&["stay", "leave"]), vec![0, 0]).unwrap();
    let moore = MooreMachine::new(
        strings(&["s0", "T", "S"]),
        0,
        vec![vec![1, 1], vec![1, 2], vec![2, 2]],
        vec![0, 1, 0],
    )
    .unwrap();
    let indist = SyncRelation::identity(2);
    let morphism = moore_morphism(&moore, &["p0", "pT", "pS"]);
    Instance {
        name: "confine",
        game: Game::new(actmap, moore, indist).unwrap(),
        morphism,
    }
}

/// Bundled instances with colours in {0, 1} and a valid morphism.
pub fn all() -> Vec<Instance> {
    vec![matching_pennies(), mp_buchi(), env_loss(), confine()]
}

/// Every bundled instance, including the six-colour counterexample game and
/// the deliberately non-rectangular pennies variant.
pub fn bundled() -> Vec<Instance> {
    let mut v = all();
    v.push(matching_pennies_coarsened());
    v.push(crate::refinement::fig3::instance());
    v
}
