//! The solver against direct transcriptions of its defining fixpoints and
//! against the classical perfect-information algorithms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rig_core::game::Objective;
use rig_core::generate;
use rig_core::instances;
use rig_core::solver::{solve_buchi, solve_reach, Arena};

/// Elements are `Elem::S(p)` or `Elem::P(p, a)`, stored as plain bool vectors.
struct Naive<'a> {
    arena: &'a Arena,
    np: usize,
    na: usize,
}

impl Naive<'_> {
    fn idx_pair(&self, p: usize, a: usize) -> usize {
        self.np + p * self.na + a
    }

    fn succ(&self, p: usize, a: usize) -> Vec<usize> {
        let am = self.arena.actmap();
        am.moves_of(a).iter().map(|&c| self.arena.step(p, c)).collect()
    }

    fn pre(&self, x: &[bool]) -> Vec<bool> {
        let mut out = vec![false; x.len()];
        for p in 0..self.np {
            for a in 0..self.na {
                if x[self.idx_pair(p, a)] {
                    out[p] = true;
                }
                if self.succ(p, a).iter().all(|&q| x[q]) {
                    out[self.idx_pair(p, a)] = true;
                }
            }
        }
        out
    }

    fn interior(&self, y: &[bool]) -> Vec<bool> {
        let approx = self.arena.approx();
        let mut out = y.to_vec();
        for p in 0..self.np {
            for q in 0..self.np {
                if approx.related(p, q) {
                    out[p] &= y[q];
                    for a in 0..self.na {
                        out[self.idx_pair(p, a)] &= y[self.idx_pair(q, a)];
                    }
                }
            }
        }
        out
    }

    /// `νY. μX. int(Y) ∩ (Pre(X) ∪ P_F)`
    fn y_star(&self) -> Vec<bool> {
        let n = self.np * (self.na + 1);
        let targets: Vec<bool> = (0..n).map(|y| y < self.np && self.arena.targets().contains(y)).collect();
        let mut y = vec![true; n];
        loop {
            let iy = self.interior(&y);
            let mut x = vec![false; n];
            loop {
                let pre = self.pre(&x);
                let next: Vec<bool> = (0..n).map(|e| iy[e] && (pre[e] || targets[e])).collect();
                if next == x {
                    break;
                }
                x = next;
            }
            if x == y {
                return y;
            }
            y = x;
        }
    }
}

fn suite() -> Vec<Arena> {
    let mut out: Vec<Arena> = instances::all()
        .iter()
        .map(|i| Arena::build(&i.game, &i.morphism, Objective::Reach).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let inst = generate::perfect_information(&mut rng, 8, 3, 6);
        out.push(Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap());
        let am = generate::random_actmap(&mut rng, 2, 2, 4);
        let inst = generate::observation_game(&mut rng, 4, am, 2, 0.3);
        out.push(Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap());
    }
    for levels in [1, 3, 6] {
        out.push(generate::cascade(levels));
    }
    out
}

#[test]
fn layered_solver_matches_naive_iteration() {
    for arena in suite() {
        let naive = Naive {
            arena: &arena,
            np: arena.num_states(),
            na: arena.num_actions(),
        };
        let expected = naive.y_star();
        let r = solve_reach(&arena);
        let got: Vec<bool> = (0..arena.universe_size()).map(|y| r.y_star.contains(y)).collect();
        assert_eq!(got, expected, "{:?}", arena.state_names());
    }
}

/// Sure-winning Büchi on a turn-based arena, `νZ. μX. (T ∩ CPre(Z)) ∪ CPre(X)`.
fn classical_buchi(arena: &Arena) -> Vec<bool> {
    let np = arena.num_states();
    let am = arena.actmap();
    let cpre = |x: &[bool]| -> Vec<bool> {
        (0..np)
            .map(|p| (0..am.num_actions()).any(|a| am.moves_of(a).iter().all(|&c| x[arena.step(p, c)])))
            .collect()
    };
    let mut z = vec![true; np];
    loop {
        let cz = cpre(&z);
        let mut x = vec![false; np];
        loop {
            let cx = cpre(&x);
            let next: Vec<bool> = (0..np).map(|p| (arena.targets().contains(p) && cz[p]) || cx[p]).collect();
            if next == x {
                break;
            }
            x = next;
        }
        if x == z {
            return z;
        }
        z = x;
    }
}

#[test]
fn buchi_matches_classical_algorithm_under_perfect_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let inst = generate::perfect_information(&mut rng, 8, 3, 6);
        let arena = Arena::build(&inst.game, &inst.morphism, Objective::Buchi).unwrap();
        let r = solve_buchi(&arena);
        let got: Vec<bool> = (0..arena.num_states()).map(|p| r.y_star.contains(p)).collect();
        assert_eq!(got, classical_buchi(&arena), "{:?}", arena.state_names());
    }
}

#[test]
fn buchi_equals_reach_on_absorbing_targets() {
    for inst in [instances::matching_pennies(), instances::env_loss()] {
        let reach = solve_reach(&Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap());
        let buchi = solve_buchi(&Arena::build(&inst.game, &inst.morphism, Objective::Buchi).unwrap());
        assert_eq!(reach.winning, buchi.winning, "{}", inst.name);
    }
}

#[test]
fn buchi_separates_confinement_from_reachability() {
    let inst = instances::confine();
    assert!(solve_reach(&Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap()).winning);
    assert!(!solve_buchi(&Arena::build(&inst.game, &inst.morphism, Objective::Buchi).unwrap()).winning);
    let inst = instances::mp_buchi();
    assert!(solve_buchi(&Arena::build(&inst.game, &inst.morphism, Objective::Buchi).unwrap()).winning);
}
