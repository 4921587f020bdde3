//! Exact and sampled evaluation of the probability measure induced by a
//! pair of strategies.

use std::collections::HashMap;

use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::game::{ActMap, Game, TARGET};
use crate::rational::{self, Rational};
use crate::solver::Arena;
use crate::strategy::{Distribution, FiniteMemoryStrategy};

/// Finite Markov chain with exact transition probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovChain {
    pub labels: Vec<String>,
    pub initial: usize,
    /// outgoing `(successor, probability)`, sorted by successor
    pub trans: Vec<Vec<(usize, Rational)>>,
    pub target: Vec<bool>,
}

/// States of a chain induced by two strategies on an arena: abstract
/// state, player memory and environment memory.
pub type ProductState = (usize, usize, usize);

impl MarkovChain {
    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    /// Builds the reachable part of the chain induced by `alpha` and `beta`
    /// on `arena` from state `start` with both memories initial.
    pub fn product(arena: &Arena, alpha: &FiniteMemoryStrategy, beta: &FiniteMemoryStrategy, start: usize) -> MarkovChain {
        let init: ProductState = (start, alpha.initial(), beta.initial());
        let mut index = HashMap::from([(init, 0usize)]);
        let mut states = vec![init];
        let mut trans = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let (p, m, e) = states[k];
            let mut out: HashMap<usize, Rational> = HashMap::new();
            for (a, pa) in alpha.player_dist(m) {
                for (c, pc) in beta.env_dist(e, *a) {
                    let next = (arena.step(p, *c), alpha.update(m, *c), beta.update(e, *c));
                    let id = *index.entry(next).or_insert_with(|| {
                        states.push(next);
                        states.len() - 1
                    });
                    *out.entry(id).or_insert_with(Rational::zero) += pa * pc;
                }
            }
            let mut row: Vec<(usize, Rational)> = out.into_iter().collect();
            row.sort_by_key(|(s, _)| *s);
            trans.push(row);
            k += 1;
        }
        MarkovChain {
            labels: states
                .iter()
                .map(|&(p, m, e)| format!("{}/{}/{}", arena.state_name(p), alpha.memory_name(m), beta.memory_name(e)))
                .collect(),
            initial: 0,
            target: states.iter().map(|&(p, _, _)| arena.targets().contains(p)).collect(),
            trans,
        }
    }

    fn support(&self, absorbing_targets: bool) -> Vec<Vec<usize>> {
        (0..self.num_states())
            .map(|s| {
                if absorbing_targets && self.target[s] {
                    vec![s]
                } else {
                    self.trans[s].iter().map(|(t, _)| *t).collect()
                }
            })
            .collect()
    }

    /// `Pr(Reach) = 1`: every reachable bottom SCC, with targets made
    /// absorbing, contains a target.
    pub fn almost_sure_reach(&self) -> bool {
        bottom_sccs(&self.support(true), self.initial)
            .iter()
            .all(|scc| scc.iter().any(|&s| self.target[s]))
    }

    /// Targets are visited infinitely often with probability 1: every
    /// reachable bottom SCC contains a target.
    pub fn almost_sure_buchi(&self) -> bool {
        bottom_sccs(&self.support(false), self.initial)
            .iter()
            .all(|scc| scc.iter().any(|&s| self.target[s]))
    }

    /// Probability of visiting a target within `k` steps.
    pub fn reach_prob_horizon(&self, k: usize) -> Rational {
        let n = self.num_states();
        let mut mass = vec![Rational::zero(); n];
        mass[self.initial] = Rational::one();
        let mut hit = Rational::zero();
        if self.target[self.initial] {
            return Rational::one();
        }
        for _ in 0..k {
            let mut next = vec![Rational::zero(); n];
            for (s, m) in mass.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                for (t, p) in &self.trans[s] {
                    let flow = m * p;
                    if self.target[*t] {
                        hit += flow;
                    } else {
                        next[*t] += flow;
                    }
                }
            }
            mass = next;
        }
        hit
    }

    /// Exact `Pr(Reach)` by solving the absorbing-chain linear system.
    pub fn reach_prob_limit(&self) -> Rational {
        let n = self.num_states();
        let support = self.support(true);
        // states that can reach a target
        let mut rev = vec![Vec::new(); n];
        for (s, succ) in support.iter().enumerate() {
            for &t in succ {
                rev[t].push(s);
            }
        }
        let mut can = self.target.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&s| can[s]).collect();
        while let Some(t) = stack.pop() {
            for &s in &rev[t] {
                if !can[s] {
                    can[s] = true;
                    stack.push(s);
                }
            }
        }
        if self.target[self.initial] {
            return Rational::one();
        }
        if !can[self.initial] {
            return Rational::zero();
        }
        let unknown: Vec<usize> = (0..n).filter(|&s| can[s] && !self.target[s]).collect();
        let pos: HashMap<usize, usize> = unknown.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let m = unknown.len();
        // (I - Q) x = b
        let mut a = vec![vec![Rational::zero(); m + 1]; m];
        for (i, &s) in unknown.iter().enumerate() {
            a[i][i] = Rational::one();
            for (t, p) in &self.trans[s] {
                if self.target[*t] {
                    a[i][m] += p;
                } else if let Some(&j) = pos.get(t) {
                    a[i][j] -= p;
                }
            }
        }
        let x = gauss(a);
        x[pos[&self.initial]].clone()
    }
}

/// Solves an augmented square system with a unique solution.
fn gauss(mut a: Vec<Vec<Rational>>) -> Vec<Rational> {
    let m = a.len();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).expect("absorbing system is nonsingular");
        a.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= &f * pv;
                }
            }
        }
    }
    a.into_iter().map(|row| row[m].clone()).collect()
}

/// Bottom SCCs reachable from `start` in a graph given by successor lists,
/// each sorted, in lexicographic order.
pub fn bottom_sccs(succ: &[Vec<usize>], start: usize) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut reach = vec![false; n];
    reach[start] = true;
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        for &t in &succ[s] {
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for s in (0..n).filter(|&s| reach[s]) {
        for &t in &succ[s] {
            g.add_edge(nodes[s], nodes[t], ());
        }
    }
    let mut comp = vec![usize::MAX; n];
    let sccs: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v.index()).collect::<Vec<_>>())
        .filter(|c: &Vec<usize>| reach[c[0]])
        .collect();
    for (i, c) in sccs.iter().enumerate() {
        for &s in c {
            comp[s] = i;
        }
    }
    let mut bottom: Vec<Vec<usize>> = sccs
        .into_iter()
        .enumerate()
        .filter(|(i, c)| c.iter().all(|&s| succ[s].iter().all(|&t| comp[t] == *i)))
        .map(|(_, mut c)| {
            c.sort_unstable();
            c
        })
        .collect();
    bottom.sort_unstable();
    bottom
}

/// `Pr_τ(Cyl(ρ))` for finite-memory strategies: 1 if `ρ` is a prefix of
/// `τ`, the product of action and move probabilities along the extension
/// if `τ` is a prefix of `ρ`, and 0 otherwise.
pub fn cylinder_prob(
    actmap: &ActMap,
    alpha: &FiniteMemoryStrategy,
    beta: &FiniteMemoryStrategy,
    rho: &[usize],
    tau: &[usize],
) -> Rational {
    if tau.starts_with(rho) {
        return Rational::one();
    }
    if !rho.starts_with(tau) {
        return Rational::zero();
    }
    let mut m = alpha.memory_after(tau);
    let mut e = beta.memory_after(tau);
    let mut prob = Rational::one();
    for &c in &rho[tau.len()..] {
        let a = actmap.act(c);
        prob *= prob_of(alpha.player_dist(m), a) * prob_of(beta.env_dist(e, a), c);
        if prob.is_zero() {
            break;
        }
        m = alpha.update(m, c);
        e = beta.update(e, c);
    }
    prob
}

fn prob_of(d: &Distribution, x: usize) -> Rational {
    d.iter().find(|(y, _)| *y == x).map(|(_, p)| p.clone()).unwrap_or_else(Rational::zero)
}

/// Player strategy given as a function of the full history.
pub trait PlayerPolicy: Sync {
    fn action_dist(&self, history: &[usize]) -> Distribution;
}

/// Environment strategy given as a function of the history and the action.
pub trait EnvPolicy: Sync {
    fn move_dist(&self, history: &[usize], action: usize) -> Distribution;
}

impl PlayerPolicy for FiniteMemoryStrategy {
    fn action_dist(&self, history: &[usize]) -> Distribution {
        self.player_dist(self.memory_after(history)).clone()
    }
}

impl EnvPolicy for FiniteMemoryStrategy {
    fn move_dist(&self, history: &[usize], action: usize) -> Distribution {
        self.env_dist(self.memory_after(history), action).clone()
    }
}

/// Uniform over the moves supporting the chosen action.
pub struct UniformEnv<'a>(pub &'a ActMap);

impl EnvPolicy for UniformEnv<'_> {
    fn move_dist(&self, _history: &[usize], action: usize) -> Distribution {
        let moves = self.0.moves_of(action);
        let p = rational::ratio(1, moves.len() as i64);
        moves.iter().map(|&c| (c, p.clone())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub moves: Vec<usize>,
    /// index of the first history with colour 1, if any
    pub reached_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub samples: usize,
    pub successes: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub transcripts: Vec<Transcript>,
}

/// Samples per RNG stream. Fixed so results do not depend on the thread count.
pub const CHUNK: usize = 256;

/// Samples `samples` plays of `moves` moves each and counts those that
/// visit colour 1. Sample `i` uses the ChaCha8 stream `i / CHUNK` of
/// `seed`; supports are sampled by inverse CDF in index order. The first
/// `keep` plays are returned as transcripts.
pub fn simulate(
    game: &Game,
    alpha: &dyn PlayerPolicy,
    beta: &dyn EnvPolicy,
    moves: usize,
    samples: usize,
    seed: u64,
    keep: usize,
) -> Estimate {
    let chunks = samples.div_ceil(CHUNK);
    let results: Vec<Vec<Transcript>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let n = CHUNK.min(samples - chunk * CHUNK);
            (0..n).map(|_| play(game, alpha, beta, moves, &mut rng)).collect()
        })
        .collect();
    let all: Vec<Transcript> = results.into_iter().flatten().collect();
    let successes = all.iter().filter(|t| t.reached_at.is_some()).count();
    let est = successes as f64 / samples.max(1) as f64;
    Estimate {
        samples,
        successes,
        estimate: est,
        std_error: (est * (1.0 - est) / samples.max(1) as f64).sqrt(),
        transcripts: all.into_iter().take(keep).collect(),
    }
}

fn sample(d: &Distribution, rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (x, p) in d {
        acc += rational::to_f64(p);
        if u < acc {
            return *x;
        }
    }
    d.last().expect("distribution has support").0
}

fn play(game: &Game, alpha: &dyn PlayerPolicy, beta: &dyn EnvPolicy, moves: usize, rng: &mut ChaCha8Rng) -> Transcript {
    let m = &game.coloring;
    let mut q = m.initial();
    let mut history = Vec::with_capacity(moves);
    let mut reached_at = (m.output(q) == TARGET).then_some(0);
    for i in 0..moves {
        let a = sample(&alpha.action_dist(&history), rng);
        let c = sample(&beta.move_dist(&history, a), rng);
        history.push(c);
        q = m.step(q, c);
        if reached_at.is_none() && m.output(q) == TARGET {
            reached_at = Some(i + 1);
        }
    }
    Transcript { moves: history, reached_at }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn chain(trans: Vec<Vec<(usize, Rational)>>, target: Vec<bool>) -> MarkovChain {
        MarkovChain {
            labels: (0..trans.len()).map(|i| i.to_string()).collect(),
            initial: 0,
            trans,
            target,
        }
    }

    #[test]
    fn half_loss_chain_limit() {
        // s0: 1/2 to target, 1/4 to loss sink, 1/4 stay
        let c = chain(
            vec![
                vec![(0, ratio(1, 4)), (1, ratio(1, 2)), (2, ratio(1, 4))],
                vec![(1, ratio(1, 1))],
                vec![(2, ratio(1, 1))],
            ],
            vec![false, true, false],
        );
        assert_eq!(c.reach_prob_limit(), ratio(2, 3));
        assert!(!c.almost_sure_reach());
        assert_eq!(c.reach_prob_horizon(0), ratio(0, 1));
        assert_eq!(c.reach_prob_horizon(1), ratio(1, 2));
        assert_eq!(c.reach_prob_horizon(2), ratio(1, 2) + ratio(1, 8));
    }

    #[test]
    fn start_in_target() {
        let c = chain(vec![vec![(0, ratio(1, 1))]], vec![true]);
        assert_eq!(c.reach_prob_horizon(5), ratio(1, 1));
        assert_eq!(c.reach_prob_limit(), ratio(1, 1));
        assert!(c.almost_sure_reach());
    }

    #[test]
    fn bottom_sccs_of_small_graph() {
        let succ = vec![vec![1, 2], vec![1], vec![3], vec![2], vec![4]];
        assert_eq!(bottom_sccs(&succ, 0), vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn gauss_solves_two_by_two() {
        // x + y = 3, x - y = 1
        let a = vec![
            vec![ratio(1, 1), ratio(1, 1), ratio(3, 1)],
            vec![ratio(1, 1), ratio(-1, 1), ratio(1, 1)],
        ];
        assert_eq!(gauss(a), vec![ratio(2, 1), ratio(1, 1)]);
    }
}
