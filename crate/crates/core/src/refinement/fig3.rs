//! The two-level counterexample game `G`, its morphism, and the abstract
//! game `H` it induces, both as parameterised trees.

use super::tree::{Affine, NodeKind, ParamTreeGame, TreeNode};
use crate::game::{ActMap, Game, MooreMachine};
use crate::instances::{moore_morphism, observation_relation, Instance};
use crate::morphism::Morphism;

fn s(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Moves `L1 L2 R1 R2`: at environment nodes only the index matters, at
/// player nodes only the action.
pub fn actmap() -> ActMap {
    ActMap::new(s(&["L", "R"]), s(&["L1", "L2", "R1", "R2"]), vec![0, 0, 1, 1]).unwrap()
}

const STATES: [&str; 15] = [
    "q0", "q1", "q1'", "q2", "q2'", "q3", "q4", "q3'", "q4'", "l1", "l2", "l3", "l4", "l5", "l6",
];

fn leaf(c: usize) -> usize {
    8 + c
}

/// Row for a node where the environment picks the child by move index.
fn by_index(first: usize, second: usize) -> Vec<usize> {
    vec![first, second, first, second]
}

/// Row for a node where the player picks the child by action.
fn by_action(left: usize, right: usize) -> Vec<usize> {
    vec![left, left, right, right]
}

pub fn game() -> Game {
    let mut delta = vec![
        by_index(1, 2),
        by_action(leaf(1), 3),
        by_action(leaf(2), 4),
        by_index(5, 6),
        by_index(7, 8),
        by_action(leaf(3), leaf(4)),
        by_action(leaf(5), leaf(6)),
        by_action(leaf(3), leaf(4)),
        by_action(leaf(5), leaf(6)),
    ];
    for c in 1..=6 {
        delta.push(vec![leaf(c); 4]);
    }
    let output = (0..15).map(|q| if q >= 9 { q as u32 - 8 } else { 0 }).collect();
    let moore = MooreMachine::new(s(&STATES), 0, delta, output).unwrap();
    // information sets: {q1,q1'}, {q2,q2'}, {q3,q4'}, {q4,q3'}; leaves by colour
    let obs = [0, 1, 1, 2, 2, 3, 4, 4, 3, 11, 12, 13, 14, 15, 16];
    let am = actmap();
    let indist = observation_relation(&am, &moore, &obs);
    Game::new(am, moore, indist).unwrap()
}

pub fn morphism() -> Morphism {
    let mut delta = vec![
        by_index(1, 2),
        by_action(6 + 1, 3),
        by_action(6 + 2, 4),
        by_index(5, 6),
        by_index(5, 6),
        by_action(6 + 3, 6 + 4),
        by_action(6 + 5, 6 + 6),
    ];
    for c in 1..=6 {
        delta.push(vec![6 + c; 4]);
    }
    let names = s(&["p0", "p1", "p1'", "p2", "p2'", "p3", "p4", "l1", "l2", "l3", "l4", "l5", "l6"]);
    Morphism::new(names, 0, delta).unwrap()
}

pub fn instance() -> Instance {
    Instance {
        name: "fig3",
        game: game(),
        morphism: morphism(),
    }
}

/// The colouring of `G` used as its own morphism (no merging).
pub fn identity_morphism() -> Morphism {
    moore_morphism(&game().coloring, &STATES)
}

struct Builder {
    nodes: Vec<TreeNode>,
}

impl Builder {
    fn add(&mut self, label: &str, kind: NodeKind, children: Vec<(Affine, usize)>) -> usize {
        self.nodes.push(TreeNode {
            label: label.into(),
            kind,
            children,
        });
        self.nodes.len() - 1
    }

    fn leaf(&mut self, c: u32) -> usize {
        self.add(&format!("l{c}"), NodeKind::Leaf(c), vec![])
    }

    fn choice(&mut self, label: &str, kind: NodeKind, var: &str, first: usize, second: usize) -> usize {
        self.add(label, kind, vec![(Affine::param(var), first), (Affine::one_minus(var), second)])
    }
}

/// Labels and parameters of one two-level tree. `player` gives the
/// variables at `[q1/q1', q3, q4, q3', q4']`, `env` those at
/// `[q0, q2, q2']`.
fn tree(labels: [&str; 9], player: [&str; 5], env: [&str; 3]) -> ParamTreeGame {
    use NodeKind::{Environment as E, Player as P};
    let mut b = Builder { nodes: Vec::new() };
    let [l0, l1, l1p, l2, l2p, l3, l4, l3p, l4p] = labels;
    let mk = |b: &mut Builder, label: &str, var: &str, c1: u32, c2: u32| {
        let (x, y) = (b.leaf(c1), b.leaf(c2));
        b.choice(label, P, var, x, y)
    };
    let n3 = mk(&mut b, l3, player[1], 3, 4);
    let n4 = mk(&mut b, l4, player[2], 5, 6);
    let n3p = mk(&mut b, l3p, player[3], 3, 4);
    let n4p = mk(&mut b, l4p, player[4], 5, 6);
    let n2 = b.choice(l2, E, env[1], n3, n4);
    let n2p = b.choice(l2p, E, env[2], n3p, n4p);
    let leaf1 = b.leaf(1);
    let n1 = b.choice(l1, P, player[0], leaf1, n2);
    let leaf2 = b.leaf(2);
    let n1p = b.choice(l1p, P, player[0], leaf2, n2p);
    let root = b.choice(l0, E, env[0], n1, n1p);
    ParamTreeGame::new(b.nodes, root).expect("counterexample trees are well formed")
}

/// `G` with player parameters `x1 x2 x3` and environment parameters `t1 t2 t3`.
pub fn g_tree() -> ParamTreeGame {
    tree(
        ["q0", "q1", "q1'", "q2", "q2'", "q3", "q4", "q3'", "q4'"],
        ["x1", "x2", "x3", "x3", "x2"],
        ["t1", "t2", "t3"],
    )
}

/// `H` with player parameters `y1 y2` and environment parameters `z1 z2 z3`.
pub fn h_tree() -> ParamTreeGame {
    tree(
        ["p0", "p1", "p1'", "p2", "p2'", "p3", "p4", "p3", "p4"],
        ["y1", "y2", "y2", "y2", "y2"],
        ["z1", "z2", "z3"],
    )
}

/// History of moves following a child-index path in the trees: at
/// environment nodes child `i` is move index `i + 1` (with action `L`), at
/// player nodes child 0 is `L` and child 1 is `R`.
pub fn path_history(tree: &ParamTreeGame, path: &[usize]) -> Vec<usize> {
    let mut node = tree.root;
    let mut out = Vec::new();
    for &i in path {
        let n = &tree.nodes[node];
        out.push(match (n.kind, i) {
            (NodeKind::Environment, 0) => 0,
            (NodeKind::Environment, _) => 1,
            (_, 0) => 0,
            _ => 2,
        });
        node = n.children[i].1;
    }
    out
}
