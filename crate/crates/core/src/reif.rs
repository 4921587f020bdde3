//! Partial-observation games with observations on locations, compiled to a
//! game with an indistinguishability relation plus the subset-construction
//! morphism.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Result, RigError};
use crate::game::{ActMap, Game, MooreMachine, SyncRelation};
use crate::morphism::Morphism;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReifGame {
    pub locations: Vec<String>,
    pub initial: usize,
    pub actmap: ActMap,
    /// `trans[l][c]`
    pub trans: Vec<Vec<usize>>,
    pub observation: Vec<u32>,
    pub winning: Vec<bool>,
}

impl ReifGame {
    pub fn new(
        locations: Vec<String>,
        initial: usize,
        actmap: ActMap,
        trans: Vec<Vec<usize>>,
        observation: Vec<u32>,
        winning: Vec<bool>,
    ) -> Result<Self> {
        let n = locations.len();
        if n == 0
            || initial >= n
            || trans.len() != n
            || observation.len() != n
            || winning.len() != n
            || trans.iter().any(|r| r.len() != actmap.num_moves() || r.iter().any(|&t| t >= n))
        {
            return Err(RigError::InvalidGame("location tables are inconsistent or not total".into()));
        }
        Ok(Self { locations, initial, actmap, trans, observation, winning })
    }

    /// Successor after normalisation: winning locations are sinks.
    pub fn step(&self, l: usize, c: usize) -> usize {
        if self.winning[l] {
            l
        } else {
            self.trans[l][c]
        }
    }

    /// Observation refined by the winning flag, so the colour is observable.
    pub fn obs(&self, l: usize) -> (u32, bool) {
        (self.observation[l], self.winning[l])
    }

    /// `{δ(l, c) | l ∈ B, act(c) = a, obs(δ(l, c)) = o}`.
    pub fn post(&self, belief: &BTreeSet<usize>, a: usize, o: (u32, bool)) -> BTreeSet<usize> {
        belief
            .iter()
            .flat_map(|&l| self.actmap.moves_of(a).iter().map(move |&c| self.step(l, c)))
            .filter(|&t| self.obs(t) == o)
            .collect()
    }
}

/// Colouring tracks the location (1 at winning locations, which are made
/// absorbing); histories are related when their actions and the observations
/// along them agree.
pub fn reif_to_game(rg: &ReifGame) -> Game {
    let n = rg.locations.len();
    let delta = (0..n)
        .map(|l| (0..rg.actmap.num_moves()).map(|c| rg.step(l, c)).collect())
        .collect();
    let output = rg.winning.iter().map(|&w| u32::from(w)).collect();
    let moore = MooreMachine::new(rg.locations.clone(), rg.initial, delta, output)
        .expect("location tables are total")
        .trim();
    let index: HashMap<&str, usize> = rg.locations.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let obs: Vec<(u32, bool)> = moore.names().iter().map(|n| rg.obs(index[n.as_str()])).collect();
    let am = &rg.actmap;
    let moore_ref = &moore;
    let indist = SyncRelation::explore(
        am.num_moves(),
        (moore.initial(), moore.initial()),
        |&(q, r), c, d| {
            let (q2, r2) = (moore_ref.step(q, c), moore_ref.step(r, d));
            (am.act(c) == am.act(d) && obs[q2] == obs[r2]).then_some((q2, r2))
        },
        |_| true,
        |&(q, r)| format!("{}|{}", moore_ref.name(q), moore_ref.name(r)),
    );
    Game::new(rg.actmap.clone(), moore, indist).expect("compiled automata read the game's moves")
}

/// Abstract states `(location, belief)`; the belief is the set of locations
/// consistent with the actions and observations so far.
pub fn subset_morphism(rg: &ReifGame) -> Morphism {
    let n = rg.locations.len();
    let delta = (0..n)
        .map(|l| (0..rg.actmap.num_moves()).map(|c| rg.step(l, c)).collect())
        .collect();
    let output = rg.winning.iter().map(|&w| u32::from(w)).collect();
    let moore = MooreMachine::new(rg.locations.clone(), rg.initial, delta, output).expect("location tables are total");
    let mut codes: HashMap<(u32, bool), u32> = HashMap::new();
    let obs: Vec<u32> = (0..n)
        .map(|l| {
            let k = codes.len() as u32;
            *codes.entry(rg.obs(l)).or_insert(k)
        })
        .collect();
    belief_morphism(&rg.actmap, &moore, &obs)
}

/// Subset construction over a Moore machine observed through `obs`: the
/// state after a history is its Moore state together with every Moore state
/// reachable by a history with the same actions and observations.
pub fn belief_morphism(actmap: &ActMap, moore: &MooreMachine, obs: &[u32]) -> Morphism {
    type State = (usize, BTreeSet<usize>);
    let init: State = (moore.initial(), BTreeSet::from([moore.initial()]));
    let mut index: HashMap<State, usize> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut delta = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (q, belief) = states[k].clone();
        let row = (0..actmap.num_moves())
            .map(|c| {
                let t = moore.step(q, c);
                let post: BTreeSet<usize> = belief
                    .iter()
                    .flat_map(|&l| actmap.moves_of(actmap.act(c)).iter().map(move |&d| moore.step(l, d)))
                    .filter(|&u| obs[u] == obs[t])
                    .collect();
                let next = (t, post);
                *index.entry(next.clone()).or_insert_with(|| {
                    states.push(next);
                    states.len() - 1
                })
            })
            .collect();
        delta.push(row);
        k += 1;
    }
    let names = states
        .iter()
        .map(|(q, b)| {
            let members: Vec<&str> = b.iter().map(|&x| moore.name(x)).collect();
            format!("{}|{{{}}}", moore.name(*q), members.join(","))
        })
        .collect();
    Morphism::new(names, 0, delta).expect("subset construction is total")
}

/// The belief component of a subset-morphism state name.
pub fn belief_of(name: &str) -> &str {
    name.split_once('|').map_or(name, |(_, b)| b)
}

/// Matching pennies with two observations: not yet won, won.
pub fn matching_pennies() -> ReifGame {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let actmap = ActMap::new(s(&["a", "b"]), s(&["a1", "a2", "b1", "b2"]), vec![0, 0, 1, 1]).unwrap();
    ReifGame::new(
        s(&["q0", "q1", "q2", "q3"]),
        0,
        actmap,
        vec![vec![1, 2, 1, 2], vec![3, 3, 0, 0], vec![0, 0, 3, 3], vec![3, 3, 3, 3]],
        vec![0, 0, 0, 1],
        vec![false, false, false, true],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_game, Objective};
    use crate::morphism::{compute_approx, validate_rectangularity, validate_refinement};
    use crate::solver::{solve_reach, Arena};

    #[test]
    fn pennies_compiles_to_a_valid_winning_game() {
        let rg = matching_pennies();
        let g = reif_to_game(&rg);
        let m = subset_morphism(&rg);
        assert!(validate_game(&g, 4).is_valid());
        assert_eq!(validate_refinement(&g, &m).unwrap(), None);
        assert_eq!(validate_rectangularity(&g, &m).unwrap(), None);
        let arena = Arena::build(&g, &m, Objective::Reach).unwrap();
        assert!(solve_reach(&arena).winning);
        let approx = compute_approx(&g, &m).unwrap();
        for (p, q) in approx.nontrivial_pairs() {
            assert_eq!(belief_of(m.name(p)), belief_of(m.name(q)));
        }
    }

    #[test]
    fn blind_game_relates_equal_action_sequences() {
        let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let actmap = ActMap::new(s(&["a"]), s(&["x", "y"]), vec![0, 0]).unwrap();
        let rg = ReifGame::new(
            s(&["l0", "l1", "l2"]),
            0,
            actmap,
            vec![vec![1, 2], vec![2, 0], vec![0, 1]],
            vec![0, 0, 0],
            vec![false; 3],
        )
        .unwrap();
        let g = reif_to_game(&rg);
        assert!(g.indist.relates(&[0, 0, 1], &[1, 1, 0]));
        let m = subset_morphism(&rg);
        let approx = compute_approx(&g, &m).unwrap();
        // after one move the belief is {l1, l2} whatever the location
        let b1: Vec<usize> = (0..m.num_states()).filter(|&p| belief_of(m.name(p)) == "{l1,l2}").collect();
        assert_eq!(b1.len(), 2);
        assert!(approx.related(b1[0], b1[1]));
    }

    #[test]
    fn fully_observed_game_has_singleton_beliefs() {
        let mut rg = matching_pennies();
        rg.observation = vec![0, 1, 2, 3];
        let m = subset_morphism(&rg);
        assert_eq!(m.num_states(), 4);
        assert!((0..m.num_states()).all(|p| !belief_of(m.name(p)).contains(',')));
    }
}
