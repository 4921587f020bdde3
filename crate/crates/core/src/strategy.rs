//! Finite-memory strategies: extraction of the uniform winning strategy,
//! rank-progress checks, and the search for spoiling environment
//! strategies.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Result, RigError};
use crate::game::ActMap;
use crate::morphism::Morphism;
use crate::probability::{bottom_sccs, MarkovChain};
use crate::rational::{self, Rational};
use crate::solver::{Arena, FixpointResult};

/// Sorted `(index, probability)` entries with positive probabilities.
pub type Distribution = Vec<(usize, Rational)>;

pub fn uniform(support: &[usize]) -> Distribution {
    let p = rational::ratio(1, support.len() as i64);
    let mut d: Distribution = support.iter().map(|&x| (x, p.clone())).collect();
    d.sort_by_key(|(x, _)| *x);
    d
}

pub fn dirac(x: usize) -> Distribution {
    vec![(x, Rational::one())]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emission {
    /// one distribution over actions per memory state
    Player(Vec<Distribution>),
    /// `[memory][action]`, a distribution over moves
    Environment(Vec<Vec<Distribution>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMemoryStrategy {
    memory: Vec<String>,
    initial: usize,
    /// `update[m][c]`
    update: Vec<Vec<usize>>,
    emit: Emission,
}

impl FiniteMemoryStrategy {
    /// Checks shapes, that distributions sum to 1, and that environment
    /// emissions only use moves supporting the action.
    pub fn new(memory: Vec<String>, initial: usize, update: Vec<Vec<usize>>, emit: Emission, actmap: &ActMap) -> Result<Self> {
        let n = memory.len();
        let bad = |msg: String| Err(RigError::InvalidStrategy(msg));
        if n == 0 || initial >= n || update.len() != n {
            return bad("memory tables are inconsistent".into());
        }
        if update.iter().any(|r| r.len() != actmap.num_moves() || r.iter().any(|&t| t >= n)) {
            return bad("update must map every (memory, move) to a memory state".into());
        }
        let check = |d: &Distribution, range: usize, what: &str| -> Result<()> {
            let mut sum = Rational::zero();
            for (i, (x, p)) in d.iter().enumerate() {
                if *x >= range || !rational::is_probability(p) || p.is_zero() {
                    return Err(RigError::InvalidStrategy(format!("{what}: bad entry {x} -> {}", rational::format(p))));
                }
                if i > 0 && d[i - 1].0 >= *x {
                    return Err(RigError::InvalidStrategy(format!("{what}: entries must be sorted and distinct")));
                }
                sum += p;
            }
            if !sum.is_one() {
                return Err(RigError::InvalidStrategy(format!("{what}: probabilities sum to {}", rational::format(&sum))));
            }
            Ok(())
        };
        match &emit {
            Emission::Player(ds) => {
                if ds.len() != n {
                    return bad("one action distribution per memory state is required".into());
                }
                for (m, d) in ds.iter().enumerate() {
                    check(d, actmap.num_actions(), &memory[m])?;
                }
            }
            Emission::Environment(ds) => {
                if ds.len() != n || ds.iter().any(|r| r.len() != actmap.num_actions()) {
                    return bad("one move distribution per (memory, action) is required".into());
                }
                for (m, row) in ds.iter().enumerate() {
                    for (a, d) in row.iter().enumerate() {
                        let what = format!("{}/{}", memory[m], actmap.action_name(a));
                        check(d, actmap.num_moves(), &what)?;
                        if let Some((c, _)) = d.iter().find(|(c, _)| actmap.act(*c) != a) {
                            return bad(format!("{what}: move {} does not support the action", actmap.move_name(*c)));
                        }
                    }
                }
            }
        }
        Ok(Self { memory, initial, update, emit })
    }

    pub fn is_player(&self) -> bool {
        matches!(self.emit, Emission::Player(_))
    }

    pub fn memory_size(&self) -> usize {
        self.memory.len()
    }

    pub fn memory_name(&self, m: usize) -> &str {
        &self.memory[m]
    }

    pub fn memory_names(&self) -> &[String] {
        &self.memory
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn update(&self, m: usize, c: usize) -> usize {
        self.update[m][c]
    }

    pub fn emission(&self) -> &Emission {
        &self.emit
    }

    pub fn memory_after(&self, history: &[usize]) -> usize {
        history.iter().fold(self.initial, |m, &c| self.update[m][c])
    }

    pub fn player_dist(&self, m: usize) -> &Distribution {
        match &self.emit {
            Emission::Player(ds) => &ds[m],
            Emission::Environment(_) => panic!("environment strategy has no action distribution"),
        }
    }

    pub fn env_dist(&self, m: usize, a: usize) -> &Distribution {
        match &self.emit {
            Emission::Environment(ds) => &ds[m][a],
            Emission::Player(_) => panic!("player strategy has no move distribution"),
        }
    }

    /// Player strategy whose memory is the morphism automaton.
    pub fn over_morphism(m: &Morphism, emit: Vec<Distribution>, actmap: &ActMap) -> Result<Self> {
        let update = (0..m.num_states())
            .map(|p| (0..m.num_moves()).map(|c| m.step(p, c)).collect())
            .collect();
        Self::new(m.names().to_vec(), m.initial(), update, Emission::Player(emit), actmap)
    }

    /// Memoryless environment strategy playing uniformly over supporting moves.
    pub fn uniform_env(actmap: &ActMap) -> Self {
        let emit = vec![(0..actmap.num_actions()).map(|a| uniform(actmap.moves_of(a))).collect()];
        Self::new(
            vec!["e".into()],
            0,
            vec![vec![0; actmap.num_moves()]],
            Emission::Environment(emit),
            actmap,
        )
        .expect("uniform environment is well formed")
    }
}

/// The uniform strategy over `A_p`, with the morphism as memory. States
/// outside `Y*` play uniformly over all actions.
pub fn extract_strategy(arena: &Arena, result: &FixpointResult) -> Result<FiniteMemoryStrategy> {
    if !result.winning {
        return Err(RigError::NotWinning);
    }
    let all: Vec<usize> = (0..arena.num_actions()).collect();
    let emit = (0..arena.num_states())
        .map(|p| {
            let a = &result.action_sets[p];
            uniform(if a.is_empty() { &all } else { a })
        })
        .collect();
    FiniteMemoryStrategy::over_morphism(&arena.morphism(), emit, arena.actmap())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProgress {
    /// smallest one-step probability of decreasing the rank over
    /// non-target states of `Y*`
    pub min_decrease_prob: Rational,
    pub violations: Vec<String>,
}

impl RankProgress {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, at every non-target state `p ∈ Y*`, that some action in the
/// support lowers the rank surely, that every supported action keeps play
/// inside `Y*`, and that the decrease has probability at least `1/|A|`.
pub fn check_rank_progress(arena: &Arena, result: &FixpointResult, sigma: &FiniteMemoryStrategy) -> RankProgress {
    let mut violations = Vec::new();
    let mut min = Rational::one();
    let floor = rational::ratio(1, arena.num_actions() as i64);
    let morph = arena.morphism();
    for p in (0..arena.num_states()).filter(|&p| result.contains(p) && !arena.targets().contains(p)) {
        let name = arena.state_name(p);
        let Some(rp) = result.rank(p) else {
            violations.push(format!("{name} has no rank"));
            continue;
        };
        // the strategy's memory is the morphism, so memory index = state
        let m = if sigma.memory_size() == morph.num_states() { p } else { sigma.initial() };
        let dist = sigma.player_dist(m);
        let mut prob = Rational::zero();
        for (a, pa) in dist {
            let y = arena.pair(p, *a);
            if !result.contains(y) || arena.successors(p, *a).iter().any(|&q| !result.contains(q)) {
                violations.push(format!("{} may leave Y*", arena.element_name(y)));
            }
            let decreases = result.rank(y).is_some_and(|ry| {
                ry < rp && arena.successors(p, *a).iter().all(|&q| result.rank(q).is_some_and(|rq| rq < ry))
            });
            if decreases {
                prob += pa;
            }
        }
        if prob.is_zero() {
            violations.push(format!("no supported action lowers the rank of {name}"));
        } else if prob < floor {
            violations.push(format!("{name} lowers its rank with probability {} only", rational::format(&prob)));
        }
        if prob < min {
            min = prob;
        }
    }
    RankProgress {
        min_decrease_prob: min,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spoiler {
    /// pure environment strategy; memory is the product state
    pub strategy: FiniteMemoryStrategy,
    /// exact `Pr(Reach)` of the induced chain, strictly below 1
    pub reach_prob: Rational,
    /// enumeration index of the spoiler
    pub index: u128,
}

/// Decision points of the environment: product states `(p, m, k)` of arena
/// state, player memory and adversary memory.
struct Product<'a> {
    arena: &'a Arena,
    sigma: &'a FiniteMemoryStrategy,
    /// reachable `(p, m)` under every environment choice, start first
    states: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// adversary memory size
    k: usize,
    /// `(state index, adversary memory, action)` with options
    points: Vec<(usize, usize, usize)>,
    options: Vec<Vec<(usize, usize)>>,
}

impl<'a> Product<'a> {
    fn new(arena: &'a Arena, sigma: &'a FiniteMemoryStrategy, start: usize, k: usize) -> Self {
        let init = (start, sigma.initial());
        let mut index = HashMap::from([(init, 0usize)]);
        let mut states = vec![init];
        let mut i = 0;
        while i < states.len() {
            let (p, m) = states[i];
            if !arena.targets().contains(p) {
                for (a, _) in sigma.player_dist(m) {
                    for &c in arena.actmap().moves_of(*a) {
                        let next = (arena.step(p, c), sigma.update(m, c));
                        index.entry(next).or_insert_with(|| {
                            states.push(next);
                            states.len() - 1
                        });
                    }
                }
            }
            i += 1;
        }
        let mut points = Vec::new();
        let mut options = Vec::new();
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by_key(|&s| states[s]);
        for s in order {
            let (p, m) = states[s];
            if arena.targets().contains(p) {
                continue;
            }
            for mem in 0..k {
                for (a, _) in sigma.player_dist(m) {
                    points.push((s, mem, *a));
                    options.push(
                        arena
                            .actmap()
                            .moves_of(*a)
                            .iter()
                            .flat_map(|&c| (0..k).map(move |m2| (c, m2)))
                            .collect(),
                    );
                }
            }
        }
        Self { arena, sigma, states, index, k, points, options }
    }

    fn count(&self) -> Option<u128> {
        self.options.iter().try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
    }

    /// Option chosen at each point for enumeration index `i`; the first
    /// point is the most significant digit.
    fn decode(&self, mut i: u128) -> Vec<usize> {
        let mut digits = vec![0; self.points.len()];
        for j in (0..self.points.len()).rev() {
            let base = self.options[j].len() as u128;
            digits[j] = (i % base) as usize;
            i /= base;
        }
        digits
    }

    fn lookup(&self) -> HashMap<(usize, usize, usize), usize> {
        self.points.iter().enumerate().map(|(j, &pt)| (pt, j)).collect()
    }

    /// Support graph of the chain over `(state, adversary memory)` nodes.
    fn support(&self, digits: &[usize], lookup: &HashMap<(usize, usize, usize), usize>) -> Vec<Vec<usize>> {
        let n = self.states.len() * self.k;
        let mut succ = vec![Vec::new(); n];
        for s in 0..self.states.len() {
            let (p, m) = self.states[s];
            for mem in 0..self.k {
                let node = s * self.k + mem;
                if self.arena.targets().contains(p) {
                    succ[node].push(node);
                    continue;
                }
                for (a, _) in self.sigma.player_dist(m) {
                    let j = lookup[&(s, mem, *a)];
                    let (c, m2) = self.options[j][digits[j]];
                    let t = self.index[&(self.arena.step(p, c), self.sigma.update(m, c))];
                    succ[node].push(t * self.k + m2);
                }
                succ[node].sort_unstable();
                succ[node].dedup();
            }
        }
        succ
    }

    fn spoils(&self, digits: &[usize], lookup: &HashMap<(usize, usize, usize), usize>) -> bool {
        let succ = self.support(digits, lookup);
        let target = |node: usize| self.arena.targets().contains(self.states[node / self.k].0);
        bottom_sccs(&succ, 0).iter().any(|scc| !scc.iter().any(|&v| target(v)))
    }

    /// Exact chain for a chosen environment strategy.
    fn chain(&self, digits: &[usize], lookup: &HashMap<(usize, usize, usize), usize>) -> MarkovChain {
        let n = self.states.len() * self.k;
        let mut trans = vec![Vec::new(); n];
        for s in 0..self.states.len() {
            let (p, m) = self.states[s];
            for mem in 0..self.k {
                let node = s * self.k + mem;
                if self.arena.targets().contains(p) {
                    trans[node] = vec![(node, Rational::one())];
                    continue;
                }
                let mut out: HashMap<usize, Rational> = HashMap::new();
                for (a, pa) in self.sigma.player_dist(m) {
                    let j = lookup[&(s, mem, *a)];
                    let (c, m2) = self.options[j][digits[j]];
                    let t = self.index[&(self.arena.step(p, c), self.sigma.update(m, c))];
                    *out.entry(t * self.k + m2).or_insert_with(Rational::zero) += pa;
                }
                let mut row: Vec<_> = out.into_iter().collect();
                row.sort_by_key(|(t, _)| *t);
                trans[node] = row;
            }
        }
        MarkovChain {
            labels: (0..n)
                .map(|v| {
                    let (p, m) = self.states[v / self.k];
                    format!("{}/{}/{}", self.arena.state_name(p), self.sigma.memory_name(m), v % self.k)
                })
                .collect(),
            initial: 0,
            target: (0..n).map(|v| self.arena.targets().contains(self.states[v / self.k].0)).collect(),
            trans,
        }
    }

    /// The environment strategy as a finite-memory machine whose memory is
    /// `(p, m, adversary memory)`, with a sink for unreachable situations.
    fn strategy(&self, digits: &[usize], lookup: &HashMap<(usize, usize, usize), usize>) -> FiniteMemoryStrategy {
        let am = self.arena.actmap();
        let nodes = self.states.len() * self.k;
        let sink = nodes;
        let mut names: Vec<String> = (0..nodes)
            .map(|v| {
                let (p, m) = self.states[v / self.k];
                if self.k == 1 {
                    format!("{}/{}", self.arena.state_name(p), self.sigma.memory_name(m))
                } else {
                    format!("{}/{}/{}", self.arena.state_name(p), self.sigma.memory_name(m), v % self.k)
                }
            })
            .collect();
        names.push("other".into());
        let mut update = vec![vec![sink; am.num_moves()]; nodes + 1];
        let first_moves: Vec<Distribution> = (0..am.num_actions()).map(|a| dirac(am.moves_of(a)[0])).collect();
        let mut emit = vec![first_moves.clone(); nodes + 1];
        for s in 0..self.states.len() {
            let (p, m) = self.states[s];
            for mem in 0..self.k {
                let node = s * self.k + mem;
                for a in 0..am.num_actions() {
                    let choice = lookup.get(&(s, mem, a)).map(|&j| self.options[j][digits[j]]);
                    let (c_chosen, m_chosen) = choice.unwrap_or((am.moves_of(a)[0], mem));
                    emit[node][a] = dirac(c_chosen);
                    for &c in am.moves_of(a) {
                        if let Some(&t) = self.index.get(&(self.arena.step(p, c), self.sigma.update(m, c))) {
                            let m2 = if c == c_chosen { m_chosen } else { mem };
                            update[node][c] = t * self.k + m2;
                        }
                    }
                }
            }
        }
        FiniteMemoryStrategy::new(names, 0, update, Emission::Environment(emit), am)
            .expect("spoiler tables are well formed")
    }
}

/// Searches pure environment strategies with `memory` states over the
/// product with `sigma`, in lexicographic order of (state, action, move),
/// for one under which the target is missed with positive probability.
/// Returns the first such strategy, or `None`.
pub fn build_spoiler_with_memory(
    arena: &Arena,
    sigma: &FiniteMemoryStrategy,
    start: usize,
    memory: usize,
    cap: u128,
) -> Result<Option<Spoiler>> {
    if !sigma.is_player() || sigma.update.first().map(Vec::len) != Some(arena.actmap().num_moves()) {
        return Err(RigError::InvalidStrategy("expected a player strategy over the game's moves".into()));
    }
    if arena.targets().contains(start) {
        return Ok(None);
    }
    let prod = Product::new(arena, sigma, start, memory.max(1));
    let total = prod.count().filter(|&t| t <= cap).ok_or(RigError::CapExceeded {
        what: "spoiler enumeration",
        needed: prod.count().unwrap_or(u128::MAX),
        cap,
    })?;
    let lookup = prod.lookup();
    let found = if total <= u64::MAX as u128 {
        (0..total as u64)
            .into_par_iter()
            .find_first(|&i| prod.spoils(&prod.decode(i as u128), &lookup))
            .map(|i| i as u128)
    } else {
        (0..total).find(|&i| prod.spoils(&prod.decode(i), &lookup))
    };
    Ok(found.map(|i| {
        let digits = prod.decode(i);
        let reach_prob = prod.chain(&digits, &lookup).reach_prob_limit();
        Spoiler {
            strategy: prod.strategy(&digits, &lookup),
            reach_prob,
            index: i,
        }
    }))
}

/// Positional spoiler search: the environment's memory is the product of
/// the arena state and the player's memory.
pub fn build_spoiler(arena: &Arena, sigma: &FiniteMemoryStrategy, start: usize, cap: u128) -> Result<Option<Spoiler>> {
    build_spoiler_with_memory(arena, sigma, start, 1, cap)
}

/// Whether `sigma` reaches the target with probability 1 from `start`
/// against every positional environment strategy.
pub fn verify_almost_sure(arena: &Arena, sigma: &FiniteMemoryStrategy, start: usize, cap: u128) -> Result<bool> {
    Ok(build_spoiler(arena, sigma, start, cap)?.is_none())
}

/// Whether `sigma` visits targets infinitely often with probability 1 from
/// `start` against every positional environment strategy. Targets are not
/// treated as absorbing.
pub fn verify_almost_sure_buchi(arena: &Arena, sigma: &FiniteMemoryStrategy, start: usize, cap: u128) -> Result<bool> {
    let prod = BuchiProduct::new(arena, sigma, start);
    let total = prod.count().filter(|&t| t <= cap).ok_or(RigError::CapExceeded {
        what: "spoiler enumeration",
        needed: prod.count().unwrap_or(u128::MAX),
        cap,
    })?;
    Ok(!(0..total as u64).into_par_iter().any(|i| prod.spoils(i as u128)))
}

struct BuchiProduct<'a> {
    arena: &'a Arena,
    sigma: &'a FiniteMemoryStrategy,
    states: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    points: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl<'a> BuchiProduct<'a> {
    fn new(arena: &'a Arena, sigma: &'a FiniteMemoryStrategy, start: usize) -> Self {
        let init = (start, sigma.initial());
        let mut index = HashMap::from([(init, 0usize)]);
        let mut states = vec![init];
        let mut i = 0;
        while i < states.len() {
            let (p, m) = states[i];
            for (a, _) in sigma.player_dist(m) {
                for &c in arena.actmap().moves_of(*a) {
                    let next = (arena.step(p, c), sigma.update(m, c));
                    index.entry(next).or_insert_with(|| {
                        states.push(next);
                        states.len() - 1
                    });
                }
            }
            i += 1;
        }
        let mut points = Vec::new();
        for (s, &(_, m)) in states.iter().enumerate() {
            for (a, _) in sigma.player_dist(m) {
                points.push((s, *a));
            }
        }
        let lookup = points.iter().enumerate().map(|(j, &pt)| (pt, j)).collect();
        Self { arena, sigma, states, index, points, lookup }
    }

    fn radix(&self, j: usize) -> u128 {
        self.arena.actmap().moves_of(self.points[j].1).len() as u128
    }

    fn count(&self) -> Option<u128> {
        (0..self.points.len()).try_fold(1u128, |acc, j| acc.checked_mul(self.radix(j)))
    }

    fn spoils(&self, mut i: u128) -> bool {
        let mut digits = vec![0usize; self.points.len()];
        for j in (0..self.points.len()).rev() {
            digits[j] = (i % self.radix(j)) as usize;
            i /= self.radix(j);
        }
        let am = self.arena.actmap();
        let succ: Vec<Vec<usize>> = self
            .states
            .iter()
            .enumerate()
            .map(|(s, &(p, m))| {
                self.sigma
                    .player_dist(m)
                    .iter()
                    .map(|(a, _)| {
                        let c = am.moves_of(*a)[digits[self.lookup[&(s, *a)]]];
                        self.index[&(self.arena.step(p, c), self.sigma.update(m, c))]
                    })
                    .collect()
            })
            .collect();
        let target = |s: usize| self.arena.targets().contains(self.states[s].0);
        bottom_sccs(&succ, 0).iter().any(|scc| !scc.iter().any(|&s| target(s)))
    }
}

/// Uniform strategies over the morphism memory with every nonempty action
/// support, constant on `≈`-classes. Fails once more than `cap` patterns would be
/// needed.
pub fn support_patterns(arena: &Arena, cap: u128) -> Result<Vec<FiniteMemoryStrategy>> {
    let na = arena.num_actions();
    let classes = arena.approx().classes();
    let per = (1u128 << na) - 1;
    let total = (0..classes.len()).try_fold(1u128, |acc, _| acc.checked_mul(per));
    let total = total.filter(|&t| t <= cap).ok_or(RigError::CapExceeded {
        what: "support patterns",
        needed: total.unwrap_or(u128::MAX),
        cap,
    })?;
    let morph = arena.morphism();
    let mut out = Vec::with_capacity(total as usize);
    for mut i in 0..total {
        let mut emit = vec![Vec::new(); arena.num_states()];
        for class in classes {
            let mask = (i % per) as usize + 1;
            i /= per;
            let support: Vec<usize> = (0..na).filter(|a| mask >> a & 1 == 1).collect();
            for &p in class {
                emit[p] = uniform(&support);
            }
        }
        out.push(FiniteMemoryStrategy::over_morphism(&morph, emit, arena.actmap())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Objective;
    use crate::instances;
    use crate::rational::ratio;
    use crate::solver::solve_reach;

    const CAP: u128 = 1 << 20;

    fn mp() -> Arena {
        let inst = instances::matching_pennies();
        Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap()
    }

    #[test]
    fn extracted_matching_pennies_strategy_is_uniform() {
        let a = mp();
        let r = solve_reach(&a);
        let s = extract_strategy(&a, &r).unwrap();
        let half = ratio(1, 2);
        for p in 0..a.num_states() {
            assert_eq!(s.player_dist(p), &vec![(0, half.clone()), (1, half.clone())]);
        }
        let progress = check_rank_progress(&a, &r, &s);
        assert!(progress.ok(), "{:?}", progress.violations);
        assert_eq!(progress.min_decrease_prob, half);
        assert!(verify_almost_sure(&a, &s, a.initial(), CAP).unwrap());
    }

    #[test]
    fn always_a_is_spoiled() {
        let a = mp();
        let s = FiniteMemoryStrategy::over_morphism(&a.morphism(), vec![dirac(0); a.num_states()], a.actmap()).unwrap();
        let sp = build_spoiler(&a, &s, a.initial(), CAP).unwrap().unwrap();
        assert_eq!(sp.reach_prob, ratio(0, 1));
        // the environment hides 2 at the start
        let m0 = sp.strategy.initial();
        assert_eq!(a.actmap().move_name(sp.strategy.env_dist(m0, 0)[0].0), "a2");
    }

    #[test]
    fn env_loss_spoiler_picks_losing_move() {
        let inst = instances::env_loss();
        let a = Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap();
        let s = FiniteMemoryStrategy::over_morphism(&a.morphism(), vec![dirac(0); a.num_states()], a.actmap()).unwrap();
        let sp = build_spoiler(&a, &s, a.initial(), CAP).unwrap().unwrap();
        assert_eq!(sp.reach_prob, ratio(0, 1));
        assert_eq!(a.actmap().move_name(sp.strategy.env_dist(0, 0)[0].0), "lose");
    }

    #[test]
    fn start_in_target_is_verified() {
        let a = mp();
        let pw = a.state_names().iter().position(|n| n == "pw").unwrap();
        let s = FiniteMemoryStrategy::over_morphism(&a.morphism(), vec![dirac(0); a.num_states()], a.actmap()).unwrap();
        assert!(verify_almost_sure(&a, &s, pw, CAP).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let a = mp();
        let s = extract_strategy(&a, &solve_reach(&a)).unwrap();
        assert!(matches!(build_spoiler(&a, &s, a.initial(), 2), Err(RigError::CapExceeded { .. })));
    }

    #[test]
    fn rejects_env_move_outside_support() {
        let am = mp().actmap().clone();
        let emit = Emission::Environment(vec![vec![dirac(2), dirac(2)]]);
        assert!(FiniteMemoryStrategy::new(vec!["e".into()], 0, vec![vec![0; 4]], emit, &am).is_err());
    }

    #[test]
    fn support_patterns_are_information_consistent() {
        let a = mp();
        let pats = support_patterns(&a, CAP).unwrap();
        // p0, {p1,p2}, pw: three classes, three supports each
        assert_eq!(pats.len(), 27);
        let (p1, p2) = (1, 2);
        assert!(pats.iter().all(|s| s.player_dist(p1) == s.player_dist(p2)));
    }
}
