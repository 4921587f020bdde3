//! JSON documents for games, morphisms, strategies, Reif games and
//! parameterised trees. Tables are written as explicit `{from, move, to}`
//! entries; rationals are strings such as `"1/2"`.
//!
//! Every document carries a `format` tag and may carry a `manifest` object,
//! which is ignored on input.

use std::collections::{BTreeMap, HashMap};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RigError};
use crate::game::{ActMap, Color, Game, MooreMachine, SyncRelation};
use crate::morphism::Morphism;
use crate::rational;
use crate::refinement::tree::{Affine, NodeKind, ParamTreeGame, TreeNode};
use crate::reif::ReifGame;
use crate::strategy::{Distribution, Emission, FiniteMemoryStrategy};

pub const GAME_FORMAT: &str = "rig-game/1";
pub const MORPHISM_FORMAT: &str = "rig-morphism/1";
pub const STRATEGY_FORMAT: &str = "rig-strategy/1";
pub const REIF_FORMAT: &str = "rig-reif/1";
pub const TREE_FORMAT: &str = "rig-tree/1";

/// Deserializes with the path of the offending field in errors.
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        RigError::schema(if path == "." { "(root)".into() } else { path }, e.into_inner().to_string())
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn check_format(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(RigError::schema("format", format!("expected `{expected}`, found `{found}`")))
    }
}

/// Name-to-index lookup that rejects duplicates.
struct Names<'a> {
    index: HashMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(names: &'a [String], path: &str) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(RigError::schema(format!("{path}[{i}]"), format!("duplicate name `{n}`")));
            }
        }
        if names.is_empty() {
            return Err(RigError::schema(path, "must not be empty"));
        }
        Ok(Self { index })
    }

    fn get(&self, name: &str, path: impl Into<String>, what: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| RigError::schema(path, format!("unknown {what} `{name}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from: String,
    #[serde(rename = "move")]
    pub mv: String,
    pub to: String,
}

/// Reads a total deterministic table `delta[state][move]` from edges.
fn read_table(edges: &[Edge], states: &Names, moves: &Names, n: usize, nm: usize, path: &str) -> Result<Vec<Vec<usize>>> {
    let mut delta = vec![vec![None; nm]; n];
    for (i, e) in edges.iter().enumerate() {
        let at = |f: &str| format!("{path}[{i}].{f}");
        let s = states.get(&e.from, at("from"), "state")?;
        let c = moves.get(&e.mv, at("move"), "move")?;
        let t = states.get(&e.to, at("to"), "state")?;
        if delta[s][c].replace(t).is_some() {
            return Err(RigError::schema(format!("{path}[{i}]"), format!("duplicate transition from `{}` on `{}`", e.from, e.mv)));
        }
    }
    delta
        .into_iter()
        .enumerate()
        .map(|(s, row)| {
            row.into_iter()
                .enumerate()
                .map(|(c, t)| t.ok_or_else(|| RigError::schema(path, format!("missing transition from state {s} on move {c}"))))
                .collect()
        })
        .collect()
}

fn write_table(delta: impl Fn(usize, usize) -> usize, states: &[String], moves: &[String]) -> Vec<Edge> {
    let mut out = Vec::new();
    for (s, from) in states.iter().enumerate() {
        for (c, mv) in moves.iter().enumerate() {
            out.push(Edge {
                from: from.clone(),
                mv: mv.clone(),
                to: states[delta(s, c)].clone(),
            });
        }
    }
    out
}

fn read_actmap(actions: &[String], moves: &[String], act: &[String]) -> Result<ActMap> {
    let an = Names::new(actions, "actions")?;
    Names::new(moves, "moves")?;
    if act.len() != moves.len() {
        return Err(RigError::schema("act", "must list one action per move"));
    }
    let act = act
        .iter()
        .enumerate()
        .map(|(i, a)| an.get(a, format!("act[{i}]"), "action"))
        .collect::<Result<Vec<_>>>()?;
    ActMap::new(actions.to_vec(), moves.to_vec(), act).map_err(|e| RigError::schema("act", e.to_string()))
}

fn write_act(am: &ActMap) -> Vec<String> {
    (0..am.num_moves()).map(|c| am.action_name(am.act(c)).to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MooreDoc {
    pub states: Vec<String>,
    pub initial: String,
    pub delta: Vec<Edge>,
    /// one colour per state
    pub output: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEdge {
    pub from: String,
    pub moves: [String; 2],
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub states: Vec<String>,
    pub initial: String,
    /// partial: a missing pair rejects
    pub delta: Vec<PairEdge>,
    pub accepting: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub format: String,
    pub actions: Vec<String>,
    pub moves: Vec<String>,
    /// action of each move, in move order
    pub act: Vec<String>,
    pub moore: MooreDoc,
    pub indist: RelationDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl GameDoc {
    pub fn from_game(g: &Game) -> Self {
        let am = &g.actmap;
        let m = &g.coloring;
        let r = &g.indist;
        let mut delta = Vec::new();
        for (s, c, d, t) in r.transitions() {
            delta.push(PairEdge {
                from: r.name(s).to_string(),
                moves: [am.move_name(c).to_string(), am.move_name(d).to_string()],
                to: r.name(t).to_string(),
            });
        }
        GameDoc {
            format: GAME_FORMAT.into(),
            actions: am.actions().to_vec(),
            moves: am.moves().to_vec(),
            act: write_act(am),
            moore: MooreDoc {
                states: m.names().to_vec(),
                initial: m.name(m.initial()).to_string(),
                delta: write_table(|q, c| m.step(q, c), m.names(), am.moves()),
                output: (0..m.num_states()).map(|q| m.output(q)).collect(),
            },
            indist: RelationDoc {
                states: r.names().to_vec(),
                initial: r.name(r.initial()).to_string(),
                delta,
                accepting: (0..r.num_states()).filter(|&s| r.is_accepting(s)).map(|s| r.name(s).to_string()).collect(),
            },
            manifest: None,
        }
    }

    pub fn to_game(&self) -> Result<Game> {
        check_format(&self.format, GAME_FORMAT)?;
        let am = read_actmap(&self.actions, &self.moves, &self.act)?;
        let moves = Names::new(&self.moves, "moves")?;
        let nm = am.num_moves();

        let ms = Names::new(&self.moore.states, "moore.states")?;
        let n = self.moore.states.len();
        let delta = read_table(&self.moore.delta, &ms, &moves, n, nm, "moore.delta")?;
        if self.moore.output.len() != n {
            return Err(RigError::schema("moore.output", "must list one colour per state"));
        }
        let init = ms.get(&self.moore.initial, "moore.initial", "state")?;
        let moore = MooreMachine::new(self.moore.states.clone(), init, delta, self.moore.output.clone())
            .map_err(|e| RigError::schema("moore", e.to_string()))?;

        let rs = Names::new(&self.indist.states, "indist.states")?;
        let k = self.indist.states.len();
        let mut rdelta = vec![vec![None; nm * nm]; k];
        for (i, e) in self.indist.delta.iter().enumerate() {
            let at = |f: &str| format!("indist.delta[{i}].{f}");
            let s = rs.get(&e.from, at("from"), "state")?;
            let c = moves.get(&e.moves[0], at("moves[0]"), "move")?;
            let d = moves.get(&e.moves[1], at("moves[1]"), "move")?;
            let t = rs.get(&e.to, at("to"), "state")?;
            if rdelta[s][c * nm + d].replace(t).is_some() {
                return Err(RigError::schema(format!("indist.delta[{i}]"), "duplicate transition"));
            }
        }
        let mut accepting = vec![false; k];
        for (i, a) in self.indist.accepting.iter().enumerate() {
            accepting[rs.get(a, format!("indist.accepting[{i}]"), "state")?] = true;
        }
        let rinit = rs.get(&self.indist.initial, "indist.initial", "state")?;
        let indist = SyncRelation::new(self.indist.states.clone(), rinit, nm, rdelta, accepting)
            .map_err(|e| RigError::schema("indist", e.to_string()))?;
        Game::new(am, moore, indist)
    }
}

pub fn parse_game(text: &str) -> Result<Game> {
    from_str::<GameDoc>(text)?.to_game()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub format: String,
    pub abstract_states: Vec<String>,
    pub initial: String,
    pub delta_p: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl MorphismDoc {
    pub fn from_morphism(m: &Morphism, am: &ActMap) -> Self {
        MorphismDoc {
            format: MORPHISM_FORMAT.into(),
            abstract_states: m.names().to_vec(),
            initial: m.name(m.initial()).to_string(),
            delta_p: write_table(|p, c| m.step(p, c), m.names(), am.moves()),
            manifest: None,
        }
    }

    /// Reads the morphism over the moves of `am`; the result is trimmed to
    /// the states reachable from the initial one.
    pub fn to_morphism(&self, am: &ActMap) -> Result<Morphism> {
        check_format(&self.format, MORPHISM_FORMAT)?;
        let ps = Names::new(&self.abstract_states, "abstract_states")?;
        let moves = Names::new(am.moves(), "moves")?;
        let n = self.abstract_states.len();
        let delta = read_table(&self.delta_p, &ps, &moves, n, am.num_moves(), "delta_p")?;
        let init = ps.get(&self.initial, "initial", "state")?;
        Ok(Morphism::new(self.abstract_states.clone(), init, delta)?.trim())
    }
}

pub fn parse_morphism(text: &str, am: &ActMap) -> Result<Morphism> {
    from_str::<MorphismDoc>(text)?.to_morphism(am)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Player,
    Environment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitEntry {
    pub memory: String,
    /// the action being resolved, for environment strategies
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    /// action (player) or move (environment) to probability
    pub dist: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub format: String,
    pub kind: StrategyKind,
    pub memory: Vec<String>,
    pub initial: String,
    pub update: Vec<Edge>,
    pub emit: Vec<EmitEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

fn write_dist(d: &Distribution, name: impl Fn(usize) -> String) -> BTreeMap<String, String> {
    d.iter().map(|(x, p)| (name(*x), rational::format(p))).collect()
}

fn read_dist(d: &BTreeMap<String, String>, names: &Names, path: &str, what: &str) -> Result<Distribution> {
    let mut out = Vec::new();
    for (k, v) in d {
        let x = names.get(k, format!("{path}.{k}"), what)?;
        let p = rational::parse(v).ok_or_else(|| RigError::schema(format!("{path}.{k}"), format!("not a rational: `{v}`")))?;
        if !num_traits::Zero::is_zero(&p) {
            out.push((x, p));
        }
    }
    out.sort_by_key(|(x, _)| *x);
    Ok(out)
}

impl StrategyDoc {
    pub fn from_strategy(s: &FiniteMemoryStrategy, am: &ActMap) -> Self {
        let mem = s.memory_names();
        let mut emit = Vec::new();
        let kind = match s.emission() {
            Emission::Player(ds) => {
                for (m, d) in ds.iter().enumerate() {
                    emit.push(EmitEntry {
                        memory: mem[m].clone(),
                        action: None,
                        dist: write_dist(d, |a| am.action_name(a).to_string()),
                    });
                }
                StrategyKind::Player
            }
            Emission::Environment(ds) => {
                for (m, row) in ds.iter().enumerate() {
                    for (a, d) in row.iter().enumerate() {
                        emit.push(EmitEntry {
                            memory: mem[m].clone(),
                            action: Some(am.action_name(a).to_string()),
                            dist: write_dist(d, |c| am.move_name(c).to_string()),
                        });
                    }
                }
                StrategyKind::Environment
            }
        };
        StrategyDoc {
            format: STRATEGY_FORMAT.into(),
            kind,
            memory: mem.to_vec(),
            initial: mem[s.initial()].clone(),
            update: write_table(|m, c| s.update(m, c), mem, am.moves()),
            emit,
            manifest: None,
        }
    }

    pub fn to_strategy(&self, am: &ActMap) -> Result<FiniteMemoryStrategy> {
        check_format(&self.format, STRATEGY_FORMAT)?;
        let ms = Names::new(&self.memory, "memory")?;
        let moves = Names::new(am.moves(), "moves")?;
        let actions = Names::new(am.actions(), "actions")?;
        let n = self.memory.len();
        let update = read_table(&self.update, &ms, &moves, n, am.num_moves(), "update")?;
        let init = ms.get(&self.initial, "initial", "memory state")?;
        let emit = match self.kind {
            StrategyKind::Player => {
                let mut ds: Vec<Option<Distribution>> = vec![None; n];
                for (i, e) in self.emit.iter().enumerate() {
                    let path = format!("emit[{i}]");
                    if e.action.is_some() {
                        return Err(RigError::schema(format!("{path}.action"), "player emissions take no action"));
                    }
                    let m = ms.get(&e.memory, format!("{path}.memory"), "memory state")?;
                    let d = read_dist(&e.dist, &actions, &format!("{path}.dist"), "action")?;
                    if ds[m].replace(d).is_some() {
                        return Err(RigError::schema(path, format!("duplicate emission for `{}`", e.memory)));
                    }
                }
                let ds = ds
                    .into_iter()
                    .enumerate()
                    .map(|(m, d)| d.ok_or_else(|| RigError::schema("emit", format!("no emission for `{}`", self.memory[m]))))
                    .collect::<Result<Vec<_>>>()?;
                Emission::Player(ds)
            }
            StrategyKind::Environment => {
                let na = am.num_actions();
                let mut ds: Vec<Vec<Option<Distribution>>> = vec![vec![None; na]; n];
                for (i, e) in self.emit.iter().enumerate() {
                    let path = format!("emit[{i}]");
                    let m = ms.get(&e.memory, format!("{path}.memory"), "memory state")?;
                    let Some(action) = &e.action else {
                        return Err(RigError::schema(format!("{path}.action"), "environment emissions need an action"));
                    };
                    let a = actions.get(action, format!("{path}.action"), "action")?;
                    let d = read_dist(&e.dist, &moves, &format!("{path}.dist"), "move")?;
                    if ds[m][a].replace(d).is_some() {
                        return Err(RigError::schema(path, "duplicate emission"));
                    }
                }
                let mut rows = Vec::new();
                for (m, row) in ds.into_iter().enumerate() {
                    let mut r = Vec::new();
                    for (a, d) in row.into_iter().enumerate() {
                        r.push(d.ok_or_else(|| {
                            RigError::schema("emit", format!("no emission for `{}` on `{}`", self.memory[m], am.action_name(a)))
                        })?);
                    }
                    rows.push(r);
                }
                Emission::Environment(rows)
            }
        };
        FiniteMemoryStrategy::new(self.memory.clone(), init, update, emit, am)
    }
}

pub fn parse_strategy(text: &str, am: &ActMap) -> Result<FiniteMemoryStrategy> {
    from_str::<StrategyDoc>(text)?.to_strategy(am)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReifDoc {
    pub format: String,
    pub actions: Vec<String>,
    pub moves: Vec<String>,
    pub act: Vec<String>,
    pub locations: Vec<String>,
    pub initial: String,
    pub trans: Vec<Edge>,
    /// one observation per location
    pub observation: Vec<u32>,
    pub winning: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl ReifDoc {
    pub fn from_reif(rg: &ReifGame) -> Self {
        let am = &rg.actmap;
        ReifDoc {
            format: REIF_FORMAT.into(),
            actions: am.actions().to_vec(),
            moves: am.moves().to_vec(),
            act: write_act(am),
            locations: rg.locations.clone(),
            initial: rg.locations[rg.initial].clone(),
            trans: write_table(|l, c| rg.trans[l][c], &rg.locations, am.moves()),
            observation: rg.observation.clone(),
            winning: (0..rg.locations.len())
                .filter(|&l| rg.winning[l])
                .map(|l| rg.locations[l].clone())
                .collect(),
            manifest: None,
        }
    }

    pub fn to_reif(&self) -> Result<ReifGame> {
        check_format(&self.format, REIF_FORMAT)?;
        let am = read_actmap(&self.actions, &self.moves, &self.act)?;
        let moves = Names::new(&self.moves, "moves")?;
        let ls = Names::new(&self.locations, "locations")?;
        let n = self.locations.len();
        let trans = read_table(&self.trans, &ls, &moves, n, am.num_moves(), "trans")?;
        if self.observation.len() != n {
            return Err(RigError::schema("observation", "must list one observation per location"));
        }
        let mut winning = vec![false; n];
        for (i, w) in self.winning.iter().enumerate() {
            winning[ls.get(w, format!("winning[{i}]"), "location")?] = true;
        }
        let init = ls.get(&self.initial, "initial", "location")?;
        ReifGame::new(self.locations.clone(), init, am, trans, self.observation.clone(), winning)
    }
}

pub fn parse_reif(text: &str) -> Result<ReifGame> {
    from_str::<ReifDoc>(text)?.to_reif()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    Player,
    Environment,
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeEdge {
    /// `"x"`, `"1-x"` or a rational constant
    pub prob: String,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeNodeDoc {
    pub label: String,
    pub kind: TreeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub format: String,
    pub root: usize,
    pub nodes: Vec<TreeNodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl TreeDoc {
    pub fn from_tree(t: &ParamTreeGame) -> Self {
        let nodes = t
            .nodes
            .iter()
            .map(|n| {
                let (kind, color) = match n.kind {
                    NodeKind::Player => (TreeKind::Player, None),
                    NodeKind::Environment => (TreeKind::Environment, None),
                    NodeKind::Leaf(c) => (TreeKind::Leaf, Some(c)),
                };
                TreeNodeDoc {
                    label: n.label.clone(),
                    kind,
                    color,
                    children: n
                        .children
                        .iter()
                        .map(|(a, to)| TreeEdge {
                            prob: a.to_string(),
                            to: *to,
                        })
                        .collect(),
                }
            })
            .collect();
        TreeDoc {
            format: TREE_FORMAT.into(),
            root: t.root,
            nodes,
            manifest: None,
        }
    }

    pub fn to_tree(&self) -> Result<ParamTreeGame> {
        check_format(&self.format, TREE_FORMAT)?;
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let kind = match (n.kind, n.color) {
                (TreeKind::Leaf, Some(c)) => NodeKind::Leaf(c),
                (TreeKind::Leaf, None) => return Err(RigError::schema(format!("nodes[{i}].color"), "leaves need a colour")),
                (_, Some(_)) => return Err(RigError::schema(format!("nodes[{i}].color"), "only leaves carry a colour")),
                (TreeKind::Player, None) => NodeKind::Player,
                (TreeKind::Environment, None) => NodeKind::Environment,
            };
            let children = n
                .children
                .iter()
                .enumerate()
                .map(|(j, e)| {
                    Affine::parse(&e.prob)
                        .map(|a| (a, e.to))
                        .ok_or_else(|| RigError::schema(format!("nodes[{i}].children[{j}].prob"), format!("cannot read `{}`", e.prob)))
                })
                .collect::<Result<Vec<_>>>()?;
            nodes.push(TreeNode {
                label: n.label.clone(),
                kind,
                children,
            });
        }
        ParamTreeGame::new(nodes, self.root)
    }
}

pub fn parse_tree(text: &str) -> Result<ParamTreeGame> {
    from_str::<TreeDoc>(text)?.to_tree()
}

/// The bundled data files as `(file name, contents)`: every bundled
/// instance as a game and a morphism, the Reif version of matching pennies,
/// and the two counterexample trees.
pub fn bundled_documents() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for inst in crate::instances::bundled() {
        out.push((format!("{}.game.json", inst.name), to_string(&GameDoc::from_game(&inst.game))));
        out.push((
            format!("{}.morphism.json", inst.name),
            to_string(&MorphismDoc::from_morphism(&inst.morphism, &inst.game.actmap)),
        ));
    }
    out.push((
        "matching-pennies.reif.json".into(),
        to_string(&ReifDoc::from_reif(&crate::reif::matching_pennies())),
    ));
    out.push(("fig3-G.json".into(), to_string(&TreeDoc::from_tree(&crate::refinement::fig3::g_tree()))));
    out.push(("fig3-H.json".into(), to_string(&TreeDoc::from_tree(&crate::refinement::fig3::h_tree()))));
    out
}
