//! Games with imperfect information: the action map, the Moore machine that
//! colours histories, and the synchronous automaton for indistinguishability.
//!
//! Histories are slices of move indices. Names are only kept for I/O and
//! witness rendering.

mod validate;

pub use validate::{validate_game, Axiom, AxiomVerdict, CrossCheck, ValidationReport, Witness};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Result, RigError};

pub type Color = u32;

/// The target colour for reachability and Büchi objectives.
pub const TARGET: Color = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActMap {
    actions: Vec<String>,
    moves: Vec<String>,
    act: Vec<usize>,
    by_action: Vec<Vec<usize>>,
}

impl ActMap {
    pub fn new(actions: Vec<String>, moves: Vec<String>, act: Vec<usize>) -> Result<Self> {
        if actions.is_empty() || moves.is_empty() {
            return Err(RigError::InvalidGame("actions and moves must be nonempty".into()));
        }
        if act.len() != moves.len() {
            return Err(RigError::InvalidGame("act must map every move".into()));
        }
        let mut by_action = vec![Vec::new(); actions.len()];
        for (c, &a) in act.iter().enumerate() {
            let slot = by_action
                .get_mut(a)
                .ok_or_else(|| RigError::InvalidGame(format!("move `{}` maps to an unknown action", moves[c])))?;
            slot.push(c);
        }
        if let Some(a) = by_action.iter().position(Vec::is_empty) {
            return Err(RigError::InvalidGame(format!(
                "act is not surjective: action `{}` supports no move",
                actions[a]
            )));
        }
        Ok(Self { actions, moves, act, by_action })
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_moves(&self) -> usize {
        self.moves.len()
    }

    pub fn act(&self, c: usize) -> usize {
        self.act[c]
    }

    /// Moves supported by action `a`, in file order.
    pub fn moves_of(&self, a: usize) -> &[usize] {
        &self.by_action[a]
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.actions[a]
    }

    pub fn move_name(&self, c: usize) -> &str {
        &self.moves[c]
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn moves(&self) -> &[String] {
        &self.moves
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == name)
    }

    pub fn move_index(&self, name: &str) -> Option<usize> {
        self.moves.iter().position(|c| c == name)
    }

    pub fn check_history(&self, history: &[usize]) -> Result<()> {
        match history.iter().find(|&&c| c >= self.moves.len()) {
            Some(&c) => Err(RigError::MoveOutOfRange(c)),
            None => Ok(()),
        }
    }

    pub fn parse_history<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| self.move_index(n.as_ref()).ok_or_else(|| RigError::UnknownMove(n.as_ref().to_string())))
            .collect()
    }

    pub fn history_names(&self, history: &[usize]) -> Vec<String> {
        history.iter().map(|&c| self.moves[c].clone()).collect()
    }
}

/// Deterministic, complete automaton with outputs on states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine {
    names: Vec<String>,
    initial: usize,
    /// `delta[q][c]`
    delta: Vec<Vec<usize>>,
    output: Vec<Color>,
}

impl MooreMachine {
    pub fn new(names: Vec<String>, initial: usize, delta: Vec<Vec<usize>>, output: Vec<Color>) -> Result<Self> {
        let n = names.len();
        if n == 0 || initial >= n || delta.len() != n || output.len() != n {
            return Err(RigError::InvalidGame("Moore machine dimensions are inconsistent".into()));
        }
        let width = delta[0].len();
        if delta.iter().any(|row| row.len() != width || row.iter().any(|&t| t >= n)) {
            return Err(RigError::InvalidGame("Moore transition table is not total".into()));
        }
        Ok(Self { names, initial, delta, output })
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_moves(&self) -> usize {
        self.delta[0].len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, c: usize) -> usize {
        self.delta[q][c]
    }

    pub fn output(&self, q: usize) -> Color {
        self.output[q]
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn run(&self, history: &[usize]) -> usize {
        history.iter().fold(self.initial, |q, &c| self.delta[q][c])
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.output.iter().copied()
    }

    /// Restricts the machine to states reachable from the initial state,
    /// keeping file order among the survivors.
    pub fn trim(&self) -> MooreMachine {
        let mut seen = vec![false; self.num_states()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let mut remap = vec![usize::MAX; self.num_states()];
        let kept: Vec<usize> = (0..self.num_states()).filter(|&q| seen[q]).collect();
        for (i, &q) in kept.iter().enumerate() {
            remap[q] = i;
        }
        MooreMachine {
            names: kept.iter().map(|&q| self.names[q].clone()).collect(),
            initial: remap[self.initial],
            delta: kept.iter().map(|&q| self.delta[q].iter().map(|&t| remap[t]).collect()).collect(),
            output: kept.iter().map(|&q| self.output[q]).collect(),
        }
    }
}

/// Deterministic automaton over letter pairs `(c, c')`, read synchronously.
/// A missing transition rejects the pair and all its extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncRelation {
    names: Vec<String>,
    initial: usize,
    num_moves: usize,
    /// `delta[s][c * num_moves + c']`
    delta: Vec<Vec<Option<usize>>>,
    accepting: Vec<bool>,
}

impl SyncRelation {
    pub fn new(
        names: Vec<String>,
        initial: usize,
        num_moves: usize,
        delta: Vec<Vec<Option<usize>>>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || initial >= n || delta.len() != n || accepting.len() != n {
            return Err(RigError::InvalidGame("relation automaton dimensions are inconsistent".into()));
        }
        if delta
            .iter()
            .any(|row| row.len() != num_moves * num_moves || row.iter().flatten().any(|&t| t >= n))
        {
            return Err(RigError::InvalidGame("relation transition table has wrong shape".into()));
        }
        Ok(Self { names, initial, num_moves, delta, accepting })
    }

    /// The equality relation: each history is related only to itself.
    pub fn identity(num_moves: usize) -> Self {
        let delta = vec![(0..num_moves * num_moves)
            .map(|l| (l / num_moves == l % num_moves).then_some(0))
            .collect()];
        Self {
            names: vec!["id".into()],
            initial: 0,
            num_moves,
            delta,
            accepting: vec![true],
        }
    }

    /// Builds the reachable part of a deterministic relation automaton from a
    /// state type and a step function.
    pub fn explore<S, F, A>(num_moves: usize, init: S, step: F, accept: A, name: impl Fn(&S) -> String) -> Self
    where
        S: Clone + Eq + std::hash::Hash,
        F: Fn(&S, usize, usize) -> Option<S>,
        A: Fn(&S) -> bool,
    {
        let mut index: HashMap<S, usize> = HashMap::new();
        let mut states = vec![init.clone()];
        index.insert(init, 0);
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let s = states[i].clone();
            let mut row = vec![None; num_moves * num_moves];
            for c in 0..num_moves {
                for d in 0..num_moves {
                    if let Some(t) = step(&s, c, d) {
                        let id = *index.entry(t.clone()).or_insert_with(|| {
                            states.push(t);
                            states.len() - 1
                        });
                        row[c * num_moves + d] = Some(id);
                    }
                }
            }
            delta.push(row);
            i += 1;
        }
        Self {
            names: states.iter().map(&name).collect(),
            initial: 0,
            num_moves,
            accepting: states.iter().map(accept).collect(),
            delta,
        }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_moves(&self) -> usize {
        self.num_moves
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, s: usize, c: usize, d: usize) -> Option<usize> {
        self.delta[s][c * self.num_moves + d]
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Defined transitions as `(from, c, c', to)`, in table order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let n = self.num_moves;
        self.delta.iter().enumerate().flat_map(move |(s, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(l, t)| t.map(|t| (s, l / n, l % n, t)))
        })
    }

    pub fn run(&self, left: &[usize], right: &[usize]) -> Option<usize> {
        if left.len() != right.len() {
            return None;
        }
        left.iter()
            .zip(right)
            .try_fold(self.initial, |s, (&c, &d)| self.step(s, c, d))
    }

    pub fn relates(&self, left: &[usize], right: &[usize]) -> bool {
        self.run(left, right).is_some_and(|s| self.accepting[s])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub actmap: ActMap,
    pub coloring: MooreMachine,
    pub indist: SyncRelation,
}

impl Game {
    pub fn new(actmap: ActMap, coloring: MooreMachine, indist: SyncRelation) -> Result<Self> {
        let n = actmap.num_moves();
        if coloring.num_moves() != n || indist.num_moves() != n {
            return Err(RigError::InvalidGame(
                "coloring and indistinguishability automata must read the game's moves".into(),
            ));
        }
        Ok(Self { actmap, coloring, indist })
    }

    pub fn num_moves(&self) -> usize {
        self.actmap.num_moves()
    }

    pub fn num_actions(&self) -> usize {
        self.actmap.num_actions()
    }

    /// Colour of a history: the output of the Moore machine after reading it.
    pub fn color_of(&self, history: &[usize]) -> Result<Color> {
        self.actmap.check_history(history)?;
        Ok(self.coloring.output(self.coloring.run(history)))
    }

    /// `λ(c1) λ(c1c2) … λ(c1…ck)`; empty for the empty history.
    pub fn cumulative_coloring(&self, history: &[usize]) -> Result<Vec<Color>> {
        self.actmap.check_history(history)?;
        let mut q = self.coloring.initial();
        Ok(history
            .iter()
            .map(|&c| {
                q = self.coloring.step(q, c);
                self.coloring.output(q)
            })
            .collect())
    }

    pub fn is_binary(&self) -> bool {
        self.coloring.colors().all(|c| c <= 1)
    }

    /// Returns the game whose colouring latches [`TARGET`] forever once it
    /// has been emitted. Other colours are left untouched.
    pub fn make_target_absorbing(&self) -> Game {
        let m = &self.coloring;
        let latched = |q: usize, was: bool| was || m.output(q) == TARGET;
        let init = (m.initial(), latched(m.initial(), false));
        let mut index: HashMap<(usize, bool), usize> = HashMap::from([(init, 0)]);
        let mut states = vec![init];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q, l) = states[i];
            let row = (0..m.num_moves())
                .map(|c| {
                    let t = m.step(q, c);
                    let key = (t, latched(t, l));
                    *index.entry(key).or_insert_with(|| {
                        states.push(key);
                        states.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        // a Moore state reached both before and after the first target keeps
        // its name for the unlatched copy only
        let mut variants: HashMap<usize, usize> = HashMap::new();
        for &(q, _) in &states {
            *variants.entry(q).or_default() += 1;
        }
        let names = states
            .iter()
            .map(|&(q, l)| {
                if variants[&q] > 1 && l && m.output(q) != TARGET {
                    format!("{}+won", m.name(q))
                } else {
                    m.name(q).to_string()
                }
            })
            .collect();
        let output = states
            .iter()
            .map(|&(q, l)| if l { TARGET } else { m.output(q) })
            .collect();
        let coloring = MooreMachine { names, initial: 0, delta, output };
        Game {
            actmap: self.actmap.clone(),
            coloring,
            indist: self.indist.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// `0*1{0,1}^ω`
    Reach,
    /// `0^ω`
    Safe,
    /// `(0*1)^ω`
    Buchi,
    /// `{0,1}*0^ω`
    CoBuchi,
}

impl Objective {
    /// Whether a colour sequence, given as a finite prefix followed by a
    /// repeated cycle, belongs to the objective.
    pub fn accepts_lasso(&self, prefix: &[Color], cycle: &[Color]) -> bool {
        let hit = |s: &[Color]| s.contains(&TARGET);
        match self {
            Objective::Reach => hit(prefix) || hit(cycle),
            Objective::Safe => !(hit(prefix) || hit(cycle)),
            Objective::Buchi => hit(cycle),
            Objective::CoBuchi => !hit(cycle),
        }
    }

    /// `Reach^{≤x}` on a finite colour prefix.
    pub fn reach_within(colors: &[Color], x: usize) -> bool {
        colors.iter().take(x + 1).any(|&c| c == TARGET)
    }
}

impl std::str::FromStr for Objective {
    type Err = RigError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reach" => Ok(Objective::Reach),
            "safe" => Ok(Objective::Safe),
            "buchi" => Ok(Objective::Buchi),
            "cobuchi" => Ok(Objective::CoBuchi),
            _ => Err(RigError::Unsupported(format!("unknown objective `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn mp() -> Game {
        instances::matching_pennies().game
    }

    fn h(g: &Game, names: &[&str]) -> Vec<usize> {
        g.actmap.parse_history(names).unwrap()
    }

    #[test]
    fn act_map_rejects_non_surjective() {
        let err = ActMap::new(vec!["a".into(), "b".into()], vec!["a1".into()], vec![0]).unwrap_err();
        assert!(err.to_string().contains("not surjective"));
    }

    #[test]
    fn color_of_matching_pennies() {
        let g = mp();
        assert_eq!(g.color_of(&[]).unwrap(), 0);
        assert_eq!(g.color_of(&h(&g, &["a1", "a1"])).unwrap(), 1);
        assert_eq!(g.color_of(&h(&g, &["a1", "b1"])).unwrap(), 0);
        assert!(matches!(g.color_of(&[17]), Err(RigError::MoveOutOfRange(17))));
        assert!(g.actmap.parse_history(&["zz"]).is_err());
    }

    #[test]
    fn cumulative_coloring_examples() {
        let g = mp();
        assert!(g.cumulative_coloring(&[]).unwrap().is_empty());
        assert_eq!(g.cumulative_coloring(&h(&g, &["a1", "a1"])).unwrap(), vec![0, 1]);
    }

    #[test]
    fn identity_relation_relates_only_equal_histories() {
        let id = SyncRelation::identity(3);
        assert!(id.relates(&[0, 1, 2], &[0, 1, 2]));
        assert!(!id.relates(&[0, 1, 2], &[0, 1, 1]));
        assert!(!id.relates(&[0], &[0, 0]));
    }

    #[test]
    fn latching_a_one_then_zero_machine() {
        // q0 -> q1 (colour 1) -> q2 (colour 0, sink)
        let actmap = ActMap::new(vec!["a".into()], vec!["c".into()], vec![0]).unwrap();
        let moore = MooreMachine::new(
            vec!["q0".into(), "q1".into(), "q2".into()],
            0,
            vec![vec![1], vec![2], vec![2]],
            vec![0, 1, 0],
        )
        .unwrap();
        let g = Game::new(actmap, moore, SyncRelation::identity(1)).unwrap();
        assert_eq!(g.color_of(&[0, 0]).unwrap(), 0);
        let latched = g.make_target_absorbing();
        assert_eq!(latched.cumulative_coloring(&[0, 0, 0, 0]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(latched.color_of(&[]).unwrap(), 0);
    }

    #[test]
    fn latching_is_idempotent_on_absorbing_machines() {
        let g = mp();
        let once = g.make_target_absorbing();
        assert_eq!(once.coloring, g.coloring);
        assert_eq!(once.make_target_absorbing(), once);
    }

    #[test]
    fn lasso_objectives() {
        assert!(Objective::Reach.accepts_lasso(&[0, 1], &[0]));
        assert!(!Objective::Safe.accepts_lasso(&[0, 1], &[0]));
        assert!(!Objective::Buchi.accepts_lasso(&[0, 1], &[0]));
        assert!(Objective::CoBuchi.accepts_lasso(&[0, 1], &[0]));
        assert!(Objective::reach_within(&[0, 0, 1], 2));
        assert!(!Objective::reach_within(&[0, 0, 1], 1));
    }
}
