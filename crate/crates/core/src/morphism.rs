//! Rectangular morphisms given as deterministic automata over moves, their
//! validators, the induced equivalence `≈` and the target set.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::automata::{Mode, SyncNfa};
use crate::error::{Result, RigError};
use crate::game::{Color, Game, SyncRelation, Witness, TARGET};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    names: Vec<String>,
    initial: usize,
    /// `delta[p][c]`
    delta: Vec<Vec<usize>>,
}

impl Morphism {
    pub fn new(names: Vec<String>, initial: usize, delta: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || initial >= n || delta.len() != n {
            return Err(RigError::InvalidMorphism("state table dimensions are inconsistent".into()));
        }
        let width = delta[0].len();
        if width == 0 || delta.iter().any(|row| row.len() != width || row.iter().any(|&t| t >= n)) {
            return Err(RigError::InvalidMorphism("delta_p is not total".into()));
        }
        Ok(Self { names, initial, delta })
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

    pub fn step(&self, p: usize, c: usize) -> usize {
        self.delta[p][c]
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn run(&self, history: &[usize]) -> usize {
        self.run_from(self.initial, history)
    }

    pub fn run_from(&self, p: usize, history: &[usize]) -> usize {
        history.iter().fold(p, |p, &c| self.delta[p][c])
    }

    /// Shortest history reaching each state, lexicographically least among
    /// the shortest; `None` for unreachable states.
    pub fn access_words(&self) -> Vec<Option<Vec<usize>>> {
        let mut words = vec![None; self.num_states()];
        words[self.initial] = Some(Vec::new());
        let mut queue = VecDeque::from([self.initial]);
        while let Some(p) = queue.pop_front() {
            for c in 0..self.num_moves() {
                let t = self.delta[p][c];
                if words[t].is_none() {
                    let mut w = words[p].clone().unwrap();
                    w.push(c);
                    words[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
        words
    }

    pub fn is_trim(&self) -> bool {
        self.access_words().iter().all(Option::is_some)
    }

    /// Drops unreachable states so that `h` is onto the state set.
    pub fn trim(&self) -> Morphism {
        let words = self.access_words();
        let kept: Vec<usize> = (0..self.num_states()).filter(|&p| words[p].is_some()).collect();
        let mut remap = vec![usize::MAX; self.num_states()];
        for (i, &p) in kept.iter().enumerate() {
            remap[p] = i;
        }
        Morphism {
            names: kept.iter().map(|&p| self.names[p].clone()).collect(),
            initial: remap[self.initial],
            delta: kept.iter().map(|&p| self.delta[p].iter().map(|&t| remap[t]).collect()).collect(),
        }
    }
}

pub fn h_eval(game: &Game, m: &Morphism, history: &[usize]) -> Result<usize> {
    game.actmap.check_history(history)?;
    Ok(m.run(history))
}

fn check_shape(game: &Game, m: &Morphism) -> Result<()> {
    if m.num_moves() != game.num_moves() {
        return Err(RigError::InvalidMorphism(format!(
            "morphism reads {} moves but the game has {}",
            m.num_moves(),
            game.num_moves()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NotEquivalence,
    Refinement,
    Rectangularity,
    TargetNotSink,
    TargetNotClosed,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::NotEquivalence => "not an equivalence",
            ViolationKind::Refinement => "refinement",
            ViolationKind::Rectangularity => "rectangularity",
            ViolationKind::TargetNotSink => "target not absorbing",
            ViolationKind::TargetNotClosed => "target not closed under approx",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Witness,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.detail)
    }
}

impl From<Violation> for RigError {
    fn from(v: Violation) -> Self {
        RigError::InvalidMorphism(v.to_string())
    }
}

/// The equivalence `≈` on abstract states, stored as class ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRelation {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl ApproxRelation {
    /// Builds the relation from a class id per state. Ids need not be dense.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut dense: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let class_of = labels
            .iter()
            .enumerate()
            .map(|(p, l)| {
                let id = *dense.entry(*l).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[id].push(p);
                id
            })
            .collect();
        Self { class_of, classes }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn num_states(&self) -> usize {
        self.class_of.len()
    }

    pub fn related(&self, p: usize, q: usize) -> bool {
        self.class_of[p] == self.class_of[q]
    }

    pub fn class_id(&self, p: usize) -> usize {
        self.class_of[p]
    }

    pub fn class(&self, p: usize) -> &[usize] {
        &self.classes[self.class_of[p]]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// All related pairs `(p, q)` with `p < q`.
    pub fn nontrivial_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classes
            .iter()
            .flat_map(|cl| cl.iter().enumerate().flat_map(move |(i, &p)| cl[i + 1..].iter().map(move |&q| (p, q))))
    }
}

/// Reachable `(indist state, p, p')` triples with a shortest pair of
/// histories reaching each.
fn approx_product(game: &Game, m: &Morphism) -> (Vec<(usize, usize, usize)>, Vec<Option<(usize, usize, usize)>>) {
    let rel = &game.indist;
    let n = game.num_moves();
    let start = (rel.initial(), m.initial(), m.initial());
    let mut index = HashMap::from([(start, 0)]);
    let mut nodes = vec![start];
    let mut parent = vec![None];
    let mut k = 0;
    while k < nodes.len() {
        let (s, p, q) = nodes[k];
        for c in 0..n {
            for d in 0..n {
                if let Some(t) = rel.step(s, c, d) {
                    let next = (t, m.step(p, c), m.step(q, d));
                    if !index.contains_key(&next) {
                        index.insert(next, nodes.len());
                        nodes.push(next);
                        parent.push(Some((k, c, d)));
                    }
                }
            }
        }
        k += 1;
    }
    (nodes, parent)
}

fn trace_pair(parent: &[Option<(usize, usize, usize)>], mut k: usize) -> Witness {
    let (mut left, mut right) = (Vec::new(), Vec::new());
    while let Some((p, c, d)) = parent[k] {
        left.push(c);
        right.push(d);
        k = p;
    }
    left.reverse();
    right.reverse();
    Witness::new(left, right)
}

/// `≈ = {(h(τ), h(τ')) | τ ∼ τ'}`, computed by product reachability and
/// checked to be an equivalence.
pub fn compute_approx(game: &Game, m: &Morphism) -> std::result::Result<ApproxRelation, Violation> {
    let rel = &game.indist;
    let np = m.num_states();
    let (nodes, parent) = approx_product(game, m);
    let mut how: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, &(s, p, q)) in nodes.iter().enumerate() {
        if rel.is_accepting(s) {
            how.entry((p, q)).or_insert(k);
        }
    }
    let related = |p: usize, q: usize| how.contains_key(&(p, q));
    let fail = |w: Witness, detail: String| Violation {
        kind: ViolationKind::NotEquivalence,
        witness: w,
        detail,
    };
    let words = m.access_words();
    for p in 0..np {
        if words[p].is_some() && !related(p, p) {
            let w = words[p].clone().unwrap();
            return Err(fail(Witness::new(w.clone(), w), format!("{} is not related to itself", m.name(p))));
        }
    }
    let mut pairs: Vec<(usize, usize)> = how.keys().copied().collect();
    pairs.sort_unstable();
    for &(p, q) in &pairs {
        if !related(q, p) {
            return Err(fail(
                trace_pair(&parent, how[&(p, q)]),
                format!("{} ≈ {} but not conversely", m.name(p), m.name(q)),
            ));
        }
    }
    let mut succ = vec![Vec::new(); np];
    for &(p, q) in &pairs {
        succ[p].push(q);
    }
    for &(p, q) in &pairs {
        for &r in &succ[q] {
            if !related(p, r) {
                let first = trace_pair(&parent, how[&(p, q)]);
                let second = trace_pair(&parent, how[&(q, r)]);
                return Err(fail(
                    Witness::new(first.left, second.right),
                    format!("{} ≈ {} ≈ {} but {} ≉ {}", m.name(p), m.name(q), m.name(r), m.name(p), m.name(r)),
                ));
            }
        }
    }
    // reflexive, symmetric and transitive: every state's related set is its class
    let labels: Vec<usize> = (0..np)
        .map(|p| (0..np).find(|&q| related(p, q)).unwrap_or(p))
        .collect();
    Ok(ApproxRelation::from_labels(&labels))
}

/// Reachable `(p, q)` pairs of the morphism and the colouring machine, each
/// with a shortest history, in discovery order.
fn morphism_moore_product(game: &Game, m: &Morphism) -> Vec<((usize, usize), Vec<usize>)> {
    let moore = &game.coloring;
    let start = (m.initial(), moore.initial());
    let mut seen = HashMap::from([(start, 0usize)]);
    let mut nodes = vec![(start, Vec::new())];
    let mut k = 0;
    while k < nodes.len() {
        let ((p, q), ref word) = nodes[k];
        let word = word.clone();
        for c in 0..game.num_moves() {
            let next = (m.step(p, c), moore.step(q, c));
            if !seen.contains_key(&next) {
                seen.insert(next, nodes.len());
                let mut w = word.clone();
                w.push(c);
                nodes.push((next, w));
            }
        }
        k += 1;
    }
    nodes
}

/// Checks that `h(τ) = h(τ')` implies `λ(τ) = λ(τ')`, over histories of any
/// lengths. Returns the first violating pair in breadth-first order.
pub fn validate_refinement(game: &Game, m: &Morphism) -> Result<Option<Violation>> {
    check_shape(game, m)?;
    let mut first: HashMap<usize, (Color, Vec<usize>)> = HashMap::new();
    for ((p, q), word) in morphism_moore_product(game, m) {
        let color = game.coloring.output(q);
        match first.get(&p) {
            None => {
                first.insert(p, (color, word));
            }
            Some((c0, w0)) if *c0 != color => {
                return Ok(Some(Violation {
                    kind: ViolationKind::Refinement,
                    witness: Witness::new(w0.clone(), word),
                    detail: format!("{} is the image of histories coloured {} and {}", m.name(p), c0, color),
                }));
            }
            Some(_) => {}
        }
    }
    Ok(None)
}

/// The colour carried by each abstract state. Meaningful once refinement
/// holds; unreachable states get `None`.
pub fn state_colors(game: &Game, m: &Morphism) -> Vec<Option<Color>> {
    let mut colors = vec![None; m.num_states()];
    for ((p, q), _) in morphism_moore_product(game, m) {
        colors[p].get_or_insert(game.coloring.output(q));
    }
    colors
}

/// `H = {(τ, τ') | h(τ) = h(τ')}` restricted to equal lengths.
pub fn kernel_relation(m: &Morphism) -> SyncRelation {
    SyncRelation::explore(
        m.num_moves(),
        (m.initial(), m.initial()),
        |&(p, q), c, d| Some((m.step(p, c), m.step(q, d))),
        |&(p, q)| p == q,
        |&(p, q)| format!("{}|{}", m.name(p), m.name(q)),
    )
}

/// Same-length form of rectangularity: `H ∘ ∼ = ∼ ∘ H`. Returns a shortest
/// pair in the symmetric difference.
pub fn rectangularity_sync_witness(game: &Game, m: &Morphism) -> Option<Witness> {
    let h = SyncNfa::from_relation(&kernel_relation(m));
    let sim = SyncNfa::from_relation(&game.indist);
    h.compose(&sim).difference_witness(&sim.compose(&h), Mode::Equality)
}

/// Cross-length form of rectangularity: histories with the same image must
/// have information sets with the same image. Explores `τ ↦ (h(τ), S)` where
/// `S` tracks every `(indist state, h(τ''))` over same-length `τ''`.
pub fn rectangularity_exact_witness(game: &Game, m: &Morphism) -> Option<Witness> {
    let rel = &game.indist;
    let n = game.num_moves();
    type Node = (usize, Vec<(usize, usize)>);
    let image = |s: &[(usize, usize)]| {
        let mut img: Vec<usize> = s.iter().filter(|(r, _)| rel.is_accepting(*r)).map(|&(_, p)| p).collect();
        img.sort_unstable();
        img.dedup();
        img
    };
    let start: Node = (m.initial(), vec![(rel.initial(), m.initial())]);
    let mut seen: HashMap<Node, ()> = HashMap::from([(start.clone(), ())]);
    let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
    let mut by_state: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    while let Some(((p, set), word)) = queue.pop_front() {
        let img = image(&set);
        match by_state.get(&p) {
            None => {
                by_state.insert(p, (img, word.clone()));
            }
            Some((img0, w0)) if *img0 != img => return Some(Witness::new(w0.clone(), word)),
            Some(_) => {}
        }
        for c in 0..n {
            let mut next: Vec<(usize, usize)> = set
                .iter()
                .flat_map(|&(r, q)| (0..n).filter_map(move |d| rel.step(r, c, d).map(|t| (t, m.step(q, d)))))
                .collect();
            next.sort_unstable();
            next.dedup();
            let node = (m.step(p, c), next);
            if !seen.contains_key(&node) {
                seen.insert(node.clone(), ());
                let mut w = word.clone();
                w.push(c);
                queue.push_back((node, w));
            }
        }
    }
    None
}

/// Passes only if both the same-length and the cross-length checks pass.
pub fn validate_rectangularity(game: &Game, m: &Morphism) -> Result<Option<Violation>> {
    check_shape(game, m)?;
    let exact = rectangularity_exact_witness(game, m);
    let sync = rectangularity_sync_witness(game, m);
    Ok(match (exact, sync) {
        (None, None) => None,
        (Some(w), _) => Some(Violation {
            kind: ViolationKind::Rectangularity,
            detail: format!(
                "{} and {} share the image {} but their information sets have different images",
                fmt_history(game, &w.left),
                fmt_history(game, &w.right),
                m.name(m.run(&w.left))
            ),
            witness: w,
        }),
        (None, Some(w)) => Some(Violation {
            kind: ViolationKind::Rectangularity,
            detail: format!(
                "({}, {}) separates the two compositions of the kernel with the indistinguishability relation",
                fmt_history(game, &w.left),
                fmt_history(game, &w.right)
            ),
            witness: w,
        }),
    })
}

fn fmt_history(game: &Game, h: &[usize]) -> String {
    if h.is_empty() {
        "ε".into()
    } else {
        game.actmap.history_names(h).join("·")
    }
}

/// Abstract states that are images of colour-1 histories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    members: Vec<bool>,
}

impl TargetSet {
    pub fn from_members(members: Vec<bool>) -> Self {
        Self { members }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members[p]
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }
}

/// `P_F` without the sink requirement, for objectives where targets are
/// revisited rather than latched.
pub fn raw_targets(game: &Game, m: &Morphism) -> TargetSet {
    let mut members = vec![false; m.num_states()];
    for ((p, q), _) in morphism_moore_product(game, m) {
        if game.coloring.output(q) == TARGET {
            members[p] = true;
        }
    }
    TargetSet { members }
}

/// `P_F`, checked to be closed under `≈` and absorbing under `δ^P`.
pub fn compute_targets(game: &Game, m: &Morphism, approx: &ApproxRelation) -> std::result::Result<TargetSet, Violation> {
    let targets = raw_targets(game, m);
    let words = m.access_words();
    if let Some(w) = sink_violation(m, &targets, &words) {
        return Err(Violation {
            kind: ViolationKind::TargetNotSink,
            detail: format!("{} leaves the target set", fmt_history(game, &w.right)),
            witness: w,
        });
    }
    check_closed(game, m, approx, &targets, &words)?;
    Ok(targets)
}

pub(crate) fn check_closed(
    game: &Game,
    m: &Morphism,
    approx: &ApproxRelation,
    targets: &TargetSet,
    words: &[Option<Vec<usize>>],
) -> std::result::Result<(), Violation> {
    for (p, q) in approx.nontrivial_pairs() {
        if targets.contains(p) != targets.contains(q) {
            let (wp, wq) = (words[p].clone().unwrap_or_default(), words[q].clone().unwrap_or_default());
            return Err(Violation {
                kind: ViolationKind::TargetNotClosed,
                detail: format!(
                    "{} ≈ {} but only one is a target ({} vs {})",
                    m.name(p),
                    m.name(q),
                    fmt_history(game, &wp),
                    fmt_history(game, &wq)
                ),
                witness: Witness::new(wp, wq),
            });
        }
    }
    Ok(())
}

fn sink_violation(m: &Morphism, targets: &TargetSet, words: &[Option<Vec<usize>>]) -> Option<Witness> {
    for p in targets.iter() {
        for c in 0..m.num_moves() {
            if !targets.contains(m.step(p, c)) {
                let w = words[p].clone().unwrap_or_default();
                let mut ext = w.clone();
                ext.push(c);
                return Some(Witness::new(w, ext));
            }
        }
    }
    None
}

pub fn targets_are_sink(m: &Morphism, targets: &TargetSet) -> bool {
    sink_violation(m, targets, &m.access_words()).is_none()
}

/// Pairs each abstract state with a flag recording whether a target has
/// been seen, so that the latched colouring is refined. Returns the input
/// unchanged when the targets already form a sink.
pub fn latch_morphism(game: &Game, m: &Morphism) -> Morphism {
    let targets = raw_targets(game, m);
    if targets_are_sink(m, &targets) {
        return m.clone();
    }
    let init = (m.initial(), targets.contains(m.initial()));
    let mut index = HashMap::from([(init, 0usize)]);
    let mut states = vec![init];
    let mut delta = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (p, won) = states[k];
        let row = (0..m.num_moves())
            .map(|c| {
                let t = m.step(p, c);
                let key = (t, won || targets.contains(t));
                *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                })
            })
            .collect();
        delta.push(row);
        k += 1;
    }
    let mut variants: HashMap<usize, usize> = HashMap::new();
    for &(p, _) in &states {
        *variants.entry(p).or_default() += 1;
    }
    let names = states
        .iter()
        .map(|&(p, won)| {
            if variants[&p] > 1 && won && !targets.contains(p) {
                format!("{}+won", m.name(p))
            } else {
                m.name(p).to_string()
            }
        })
        .collect();
    Morphism { names, initial: 0, delta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn h_eval_matching_pennies() {
        let inst = instances::matching_pennies();
        let (g, m) = (&inst.game, &inst.morphism);
        let hist = |names: &[&str]| g.actmap.parse_history(names).unwrap();
        assert_eq!(m.name(h_eval(g, m, &[]).unwrap()), "p0");
        assert_eq!(m.name(h_eval(g, m, &hist(&["a1"])).unwrap()), "p1");
        let won = h_eval(g, m, &hist(&["a1", "a1"])).unwrap();
        assert_eq!(m.name(won), "pw");
        assert_eq!(g.color_of(&hist(&["a1", "a1"])).unwrap(), 1);
        assert!(h_eval(g, m, &[99]).is_err());
    }

    #[test]
    fn approx_matching_pennies_merges_mid_states() {
        let inst = instances::matching_pennies();
        let m = &inst.morphism;
        let approx = compute_approx(&inst.game, m).unwrap();
        let idx = |n: &str| m.index_of(n).unwrap();
        assert!(approx.related(idx("p1"), idx("p2")));
        assert_eq!(approx.nontrivial_pairs().count(), 1);
    }

    #[test]
    fn approx_is_identity_under_identity_relation() {
        let inst = instances::matching_pennies();
        let mut g = inst.game.clone();
        g.indist = SyncRelation::identity(g.num_moves());
        let approx = compute_approx(&g, &inst.morphism).unwrap();
        assert_eq!(approx.nontrivial_pairs().count(), 0);
    }

    #[test]
    fn matching_pennies_morphism_is_valid() {
        let inst = instances::matching_pennies();
        assert_eq!(validate_refinement(&inst.game, &inst.morphism).unwrap(), None);
        assert_eq!(validate_rectangularity(&inst.game, &inst.morphism).unwrap(), None);
        let approx = compute_approx(&inst.game, &inst.morphism).unwrap();
        let t = compute_targets(&inst.game, &inst.morphism, &approx).unwrap();
        assert_eq!(t.iter().map(|p| inst.morphism.name(p)).collect::<Vec<_>>(), vec!["pw"]);
    }

    #[test]
    fn moore_machine_as_morphism_refines() {
        let inst = instances::matching_pennies();
        let moore = &inst.game.coloring;
        let m = Morphism::new(
            moore.names().to_vec(),
            moore.initial(),
            (0..moore.num_states())
                .map(|q| (0..moore.num_moves()).map(|c| moore.step(q, c)).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(validate_refinement(&inst.game, &m).unwrap(), None);
    }

    #[test]
    fn collapsing_win_into_initial_breaks_refinement() {
        let inst = instances::matching_pennies();
        let m = &inst.morphism;
        let (p0, pw) = (m.index_of("p0").unwrap(), m.index_of("pw").unwrap());
        let delta = (0..m.num_states())
            .map(|p| {
                (0..m.num_moves())
                    .map(|c| if m.step(p, c) == pw { p0 } else { m.step(p, c) })
                    .collect()
            })
            .collect();
        let broken = Morphism::new(m.names().to_vec(), m.initial(), delta).unwrap().trim();
        let v = validate_refinement(&inst.game, &broken).unwrap().unwrap();
        assert_eq!(v.kind, ViolationKind::Refinement);
        assert!(v.witness.left.is_empty());
        assert_eq!(inst.game.actmap.history_names(&v.witness.right), vec!["a1", "a1"]);
    }

    #[test]
    fn coarsened_indistinguishability_breaks_rectangularity() {
        let inst = instances::matching_pennies_coarsened();
        let v = validate_rectangularity(&inst.game, &inst.morphism).unwrap().unwrap();
        assert_eq!(v.kind, ViolationKind::Rectangularity);
        assert!(rectangularity_sync_witness(&inst.game, &inst.morphism).is_some());
    }

    #[test]
    fn empty_targets_when_never_winning() {
        let inst = instances::matching_pennies();
        let mut g = inst.game.clone();
        let names = g.coloring.names().to_vec();
        let delta = (0..g.coloring.num_states())
            .map(|q| (0..g.num_moves()).map(|c| g.coloring.step(q, c)).collect())
            .collect();
        g.coloring = crate::game::MooreMachine::new(names.clone(), g.coloring.initial(), delta, vec![0; names.len()]).unwrap();
        assert!(raw_targets(&g, &inst.morphism).is_empty());
    }

    #[test]
    fn latching_a_revisited_target() {
        let inst = instances::mp_buchi();
        let m = latch_morphism(&inst.game, &inst.morphism);
        let g = inst.game.make_target_absorbing();
        assert!(m.num_states() > inst.morphism.num_states());
        assert_eq!(validate_refinement(&g, &m).unwrap(), None);
        assert_eq!(validate_rectangularity(&g, &m).unwrap(), None);
        let approx = compute_approx(&g, &m).unwrap();
        assert!(compute_targets(&g, &m, &approx).is_ok());
    }
}
