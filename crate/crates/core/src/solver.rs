//! The two-sorted arena over `P ∪ (P × A)` and the nested fixpoints deciding
//! almost-sure reachability and Büchi objectives.
//!
//! Elements are indexed with states first (file order), then pairs in
//! lexicographic `(state, action)` order.

use fixedbitset::FixedBitSet;

use crate::error::{Result, RigError};
use crate::game::{validate_game, ActMap, Game, Objective};
use crate::morphism::{
    self, compute_approx, compute_targets, latch_morphism, validate_rectangularity, validate_refinement,
    ApproxRelation, Morphism, TargetSet,
};

pub type Set = FixedBitSet;

#[derive(Debug, Clone)]
pub struct Arena {
    names: Vec<String>,
    actmap: ActMap,
    initial: usize,
    /// `delta[p][c]`
    delta: Vec<Vec<usize>>,
    approx: ApproxRelation,
    targets: TargetSet,
    /// distinct successors of each pair
    pair_succ: Vec<Vec<usize>>,
    /// pairs having state `q` among their successors
    pred_pairs: Vec<Vec<usize>>,
    /// the validated game and morphism the arena was built from, if any
    source: Option<(Game, Morphism)>,
}

impl Arena {
    /// Validates the game and morphism and builds the arena for `objective`.
    /// For reachability the colouring is latched first, and the morphism is
    /// latched too if its targets are not already a sink.
    pub fn build(game: &Game, m: &Morphism, objective: Objective) -> Result<Arena> {
        match objective {
            Objective::Reach | Objective::Buchi => {}
            Objective::Safe => {
                return Err(RigError::Unsupported(
                    "almost-sure safety coincides with sure winning for pure strategies; \
                     it is not handled by this solver"
                        .into(),
                ))
            }
            Objective::CoBuchi => {
                return Err(RigError::Unsupported(
                    "almost-sure coBüchi is undecidable in general for these games; not supported".into(),
                ))
            }
        }
        if !game.is_binary() {
            return Err(RigError::Unsupported("the solver requires colours in {0, 1}".into()));
        }
        let report = validate_game(game, 0);
        if let Some(f) = report.failures().next() {
            return Err(RigError::InvalidGame(format!("axiom {} fails", f.axiom.name())));
        }
        if m.num_moves() != game.num_moves() {
            return Err(RigError::InvalidMorphism("morphism and game read different moves".into()));
        }
        let m = m.trim();
        let (game, m) = if objective == Objective::Reach {
            // targets are read off the original colouring
            let m = latch_morphism(game, &m);
            (game.make_target_absorbing(), m)
        } else {
            (game.clone(), m)
        };
        if let Some(v) = validate_refinement(&game, &m)? {
            return Err(v.into());
        }
        if let Some(v) = validate_rectangularity(&game, &m)? {
            return Err(v.into());
        }
        let approx = compute_approx(&game, &m)?;
        let targets = if objective == Objective::Reach {
            compute_targets(&game, &m, &approx)?
        } else {
            let t = morphism::raw_targets(&game, &m);
            morphism::check_closed(&game, &m, &approx, &t, &m.access_words())?;
            t
        };
        let delta = (0..m.num_states())
            .map(|p| (0..m.num_moves()).map(|c| m.step(p, c)).collect())
            .collect();
        let mut arena = Self::assemble(m.names().to_vec(), game.actmap.clone(), m.initial(), delta, approx, targets);
        arena.source = Some((game, m));
        Ok(arena)
    }

    /// Builds an arena directly from tables, without a game. `approx_labels`
    /// assigns a class id to each state.
    pub fn from_parts(
        names: Vec<String>,
        actmap: ActMap,
        initial: usize,
        delta: Vec<Vec<usize>>,
        approx_labels: &[usize],
        targets: Vec<bool>,
    ) -> Result<Arena> {
        let n = names.len();
        if n == 0
            || initial >= n
            || delta.len() != n
            || approx_labels.len() != n
            || targets.len() != n
            || delta.iter().any(|r| r.len() != actmap.num_moves() || r.iter().any(|&t| t >= n))
        {
            return Err(RigError::InvalidMorphism("arena tables are inconsistent".into()));
        }
        let approx = ApproxRelation::from_labels(approx_labels);
        if approx.nontrivial_pairs().any(|(p, q)| targets[p] != targets[q]) {
            return Err(RigError::InvalidMorphism("targets are not closed under approx".into()));
        }
        Ok(Self::assemble(names, actmap, initial, delta, approx, TargetSet::from_members(targets)))
    }

    fn assemble(
        names: Vec<String>,
        actmap: ActMap,
        initial: usize,
        delta: Vec<Vec<usize>>,
        approx: ApproxRelation,
        targets: TargetSet,
    ) -> Arena {
        let np = names.len();
        let na = actmap.num_actions();
        let mut pair_succ = Vec::with_capacity(np * na);
        let mut pred_pairs = vec![Vec::new(); np];
        for p in 0..np {
            for a in 0..na {
                let mut succ: Vec<usize> = actmap.moves_of(a).iter().map(|&c| delta[p][c]).collect();
                succ.sort_unstable();
                succ.dedup();
                for &q in &succ {
                    pred_pairs[q].push(np + p * na + a);
                }
                pair_succ.push(succ);
            }
        }
        Arena {
            names,
            actmap,
            initial,
            delta,
            approx,
            targets,
            pair_succ,
            pred_pairs,
            source: None,
        }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actmap.num_actions()
    }

    pub fn universe_size(&self) -> usize {
        self.num_states() * (1 + self.num_actions())
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn actmap(&self) -> &ActMap {
        &self.actmap
    }

    pub fn approx(&self) -> &ApproxRelation {
        &self.approx
    }

    pub fn targets(&self) -> &TargetSet {
        &self.targets
    }

    pub fn state_name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn step(&self, p: usize, c: usize) -> usize {
        self.delta[p][c]
    }

    pub fn source(&self) -> Option<(&Game, &Morphism)> {
        self.source.as_ref().map(|(g, m)| (g, m))
    }

    /// Morphism over the arena's states, usable as strategy memory.
    pub fn morphism(&self) -> Morphism {
        match &self.source {
            Some((_, m)) => m.clone(),
            None => Morphism::new(self.names.clone(), self.initial, self.delta.clone()).expect("arena tables are total"),
        }
    }

    pub fn check_cap(&self, max_universe: usize) -> Result<()> {
        if self.universe_size() > max_universe {
            return Err(RigError::CapExceeded {
                what: "universe",
                needed: self.universe_size() as u128,
                cap: max_universe as u128,
            });
        }
        Ok(())
    }

    pub fn pair(&self, p: usize, a: usize) -> usize {
        self.num_states() + p * self.num_actions() + a
    }

    pub fn is_pair(&self, y: usize) -> bool {
        y >= self.num_states()
    }

    /// `(p, a)` for a pair index.
    pub fn unpair(&self, y: usize) -> (usize, usize) {
        let k = y - self.num_states();
        (k / self.num_actions(), k % self.num_actions())
    }

    /// Distinct `δ^P(p, c)` over moves `c` supporting `a`.
    pub fn successors(&self, p: usize, a: usize) -> &[usize] {
        &self.pair_succ[p * self.num_actions() + a]
    }

    pub fn element_name(&self, y: usize) -> String {
        if self.is_pair(y) {
            let (p, a) = self.unpair(y);
            format!("({},{})", self.names[p], self.actmap.action_name(a))
        } else {
            self.names[y].clone()
        }
    }

    pub fn empty_set(&self) -> Set {
        FixedBitSet::with_capacity(self.universe_size())
    }

    pub fn full_set(&self) -> Set {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `P_F` as a subset of the universe.
    pub fn target_set(&self) -> Set {
        let mut s = self.empty_set();
        for p in self.targets.iter() {
            s.insert(p);
        }
        s
    }

    /// `{p | ∃a. (p,a) ∈ X} ∪ {(p,a) | ∀c. act(c) = a ⟹ δ^P(p,c) ∈ X}`.
    pub fn pre(&self, x: &Set) -> Set {
        let mut out = self.empty_set();
        for p in 0..self.num_states() {
            for a in 0..self.num_actions() {
                let y = self.pair(p, a);
                if x.contains(y) {
                    out.insert(p);
                }
                if self.successors(p, a).iter().all(|&q| x.contains(q)) {
                    out.insert(y);
                }
            }
        }
        out
    }

    /// Removes every element with an `≈`-equivalent outside `y`.
    pub fn interior(&self, y: &Set) -> Set {
        let mut out = self.empty_set();
        for class in self.approx.classes() {
            if class.iter().all(|&p| y.contains(p)) {
                class.iter().for_each(|&p| out.insert(p));
            }
            for a in 0..self.num_actions() {
                if class.iter().all(|&p| y.contains(self.pair(p, a))) {
                    class.iter().for_each(|&p| out.insert(self.pair(p, a)));
                }
            }
        }
        out
    }

    /// Adds every element with an `≈`-equivalent inside `y`.
    pub fn closure(&self, y: &Set) -> Set {
        let mut out = self.empty_set();
        for class in self.approx.classes() {
            if class.iter().any(|&p| y.contains(p)) {
                class.iter().for_each(|&p| out.insert(p));
            }
            for a in 0..self.num_actions() {
                if class.iter().any(|&p| y.contains(self.pair(p, a))) {
                    class.iter().for_each(|&p| out.insert(self.pair(p, a)));
                }
            }
        }
        out
    }

    pub fn complement(&self, y: &Set) -> Set {
        let mut out = self.full_set();
        out.difference_with(y);
        out
    }

    /// Least fixpoint `μX. allowed ∩ (Pre(X) ∪ base)` by layers. Entry
    /// `k` of the returned vector is the (1-based) layer at which element
    /// `k` entered, i.e. its rank.
    fn least_fixpoint(&self, allowed: &Set, base: &Set) -> (Set, Vec<Option<u32>>, usize) {
        let np = self.num_states();
        let mut x = self.empty_set();
        let mut rank = vec![None; self.universe_size()];
        let mut missing: Vec<usize> = self.pair_succ.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = base.ones().filter(|&y| allowed.contains(y)).collect();
        let mut level = 0u32;
        while !layer.is_empty() {
            level += 1;
            for &y in &layer {
                x.insert(y);
                rank[y] = Some(level);
            }
            let mut next = Vec::new();
            for &y in &layer {
                if y < np {
                    for &pr in &self.pred_pairs[y] {
                        let k = pr - np;
                        missing[k] -= 1;
                        if missing[k] == 0 && allowed.contains(pr) && !x.contains(pr) {
                            next.push(pr);
                        }
                    }
                } else {
                    let (p, _) = self.unpair(y);
                    if allowed.contains(p) && !x.contains(p) {
                        next.push(p);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            // an element already in the base may also be produced here
            next.retain(|&y| !x.contains(y));
            layer = next;
        }
        (x, rank, level as usize)
    }

    /// `νY. μX. int(Y) ∩ bound ∩ (Pre(X) ∪ base)`.
    fn nested(&self, bound: &Set, base: &Set) -> FixpointResult {
        let mut y = bound.clone();
        let mut outer = 0;
        let mut inner_total = 0;
        loop {
            outer += 1;
            let mut allowed = self.interior(&y);
            allowed.intersect_with(bound);
            let (x, ranks, inner) = self.least_fixpoint(&allowed, base);
            inner_total += inner;
            if x == y {
                return self.finish(x, ranks, outer, inner, inner_total);
            }
            y = x;
        }
    }

    fn finish(&self, y_star: Set, ranks: Vec<Option<u32>>, outer: usize, inner: usize, inner_total: usize) -> FixpointResult {
        let action_sets: Vec<Vec<usize>> = (0..self.num_states())
            .map(|p| {
                if y_star.contains(p) {
                    (0..self.num_actions()).filter(|&a| y_star.contains(self.pair(p, a))).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        FixpointResult {
            winning: y_star.contains(self.initial),
            y_star,
            ranks,
            action_sets,
            outer_iterations: outer,
            inner_iterations: inner,
            inner_iterations_total: inner_total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointResult {
    pub y_star: Set,
    /// rank of each universe element in the final inner run
    pub ranks: Vec<Option<u32>>,
    /// `A_p = {a | (p, a) ∈ Y*}`, empty outside `Y*`
    pub action_sets: Vec<Vec<usize>>,
    pub winning: bool,
    pub outer_iterations: usize,
    /// layers of the final inner run
    pub inner_iterations: usize,
    pub inner_iterations_total: usize,
}

impl FixpointResult {
    /// `N*`, the largest rank.
    pub fn max_rank(&self) -> u32 {
        self.ranks.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn rank(&self, y: usize) -> Option<u32> {
        self.ranks[y]
    }

    pub fn contains(&self, y: usize) -> bool {
        self.y_star.contains(y)
    }
}

/// `Y* = νY. μX. int≈(Y) ∩ (Pre(X) ∪ P_F)`. The arena's targets must form
/// a sink.
pub fn solve_reach(arena: &Arena) -> FixpointResult {
    let r = arena.nested(&arena.full_set(), &arena.target_set());
    for p in r.y_star.ones().filter(|&y| y < arena.num_states()) {
        assert!(
            !r.action_sets[p].is_empty() || arena.targets.contains(p),
            "state {} in Y* has no action",
            arena.state_name(p)
        );
    }
    r
}

pub fn is_almost_sure_winning(arena: &Arena, result: &FixpointResult) -> bool {
    result.y_star.contains(arena.initial())
}

/// Almost-sure Büchi by iterating almost-sure reachability inside a
/// shrinking region `Z ⊆ P`. Targets need not be absorbing.
///
/// Each round keeps the targets in `Z` that have an action whose moves
/// all stay in `Z` (robustly under `≈`), then solves reachability of those
/// targets while confined to `Z`; the states of the result form the next
/// `Z`.
pub fn solve_buchi(arena: &Arena) -> FixpointResult {
    let np = arena.num_states();
    let na = arena.num_actions();
    let mut z: Vec<bool> = vec![true; np];
    let mut outer_total = 0;
    loop {
        let mut bound = arena.empty_set();
        let mut zset = arena.empty_set();
        for p in (0..np).filter(|&p| z[p]) {
            bound.insert(p);
            zset.insert(p);
            for a in 0..na {
                bound.insert(arena.pair(p, a));
            }
        }
        let stay = arena.interior(&arena.pre(&zset));
        let mut base = arena.empty_set();
        for p in arena.targets.iter().filter(|&p| z[p]) {
            let good: Vec<usize> = (0..na).filter(|&a| stay.contains(arena.pair(p, a))).collect();
            if !good.is_empty() {
                base.insert(p);
                good.iter().for_each(|&a| base.insert(arena.pair(p, a)));
            }
        }
        let mut r = arena.nested(&bound, &base);
        outer_total += r.outer_iterations;
        let next: Vec<bool> = (0..np).map(|p| r.y_star.contains(p)).collect();
        if next == z {
            r.outer_iterations = outer_total;
            return r;
        }
        z = next;
    }
}
