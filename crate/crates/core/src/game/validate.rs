use serde::Serialize;

use super::{Game, SyncRelation};
use crate::automata::{Mode, SyncNfa};
use crate::enumerate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Reflexivity,
    Symmetry,
    Transitivity,
    PrefixClosure,
    ActionVisibility,
    InformationConsistency,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Reflexivity,
        Axiom::Symmetry,
        Axiom::Transitivity,
        Axiom::PrefixClosure,
        Axiom::ActionVisibility,
        Axiom::InformationConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Reflexivity => "reflexivity",
            Axiom::Symmetry => "symmetry",
            Axiom::Transitivity => "transitivity",
            Axiom::PrefixClosure => "prefix-closure",
            Axiom::ActionVisibility => "action-visibility",
            Axiom::InformationConsistency => "information-consistency",
        }
    }
}

/// A pair of histories. For same-length relations both sides have equal
/// length; morphism witnesses may differ in length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Witness {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Self {
        Self { left, right }
    }

    /// Sort key matching the automata search order: length, then the
    /// interleaved letter sequence.
    pub fn order_key(&self) -> (usize, usize, Vec<usize>) {
        let interleaved = self
            .left
            .iter()
            .zip(&self.right)
            .flat_map(|(&c, &d)| [c, d])
            .collect();
        (self.left.len().max(self.right.len()), self.left.len(), interleaved)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }
}

/// Outcome of the bounded brute-force comparison for one axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub axiom: Axiom,
    pub depth: usize,
    pub brute_witness: Option<Witness>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub verdicts: Vec<AxiomVerdict>,
    pub cross_checks: Vec<CrossCheck>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.verdicts.iter().all(AxiomVerdict::pass)
    }

    pub fn verdict(&self, axiom: Axiom) -> &AxiomVerdict {
        self.verdicts.iter().find(|v| v.axiom == axiom).expect("every axiom has a verdict")
    }

    pub fn cross_checks_agree(&self) -> bool {
        self.cross_checks.iter().all(|c| c.agrees)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomVerdict> {
        self.verdicts.iter().filter(|v| !v.pass())
    }
}

/// Exact automata-based check of every axiom on `game.indist` and the
/// colouring. With `depth > 0` each verdict is also compared against
/// brute-force enumeration of history pairs up to that length.
pub fn validate_game(game: &Game, depth: usize) -> ValidationReport {
    let verdicts: Vec<AxiomVerdict> = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomVerdict {
            axiom,
            witness: exact_witness(game, axiom),
        })
        .collect();
    let cross_checks = if depth == 0 {
        Vec::new()
    } else {
        let brute = enumerate::game_axiom_witnesses(game, depth);
        verdicts
            .iter()
            .map(|v| {
                let b = brute.get(&v.axiom).cloned().flatten();
                let expected = v.witness.clone().filter(|w| w.left.len().max(w.right.len()) <= depth);
                CrossCheck {
                    axiom: v.axiom,
                    depth,
                    agrees: b == expected,
                    brute_witness: b,
                }
            })
            .collect()
    };
    ValidationReport { verdicts, cross_checks }
}

fn exact_witness(game: &Game, axiom: Axiom) -> Option<Witness> {
    let n = game.num_moves();
    let rel = &game.indist;
    let l = SyncNfa::from_relation(rel);
    match axiom {
        Axiom::Reflexivity => SyncNfa::from_relation(&SyncRelation::identity(n)).difference_witness(&l, Mode::Inclusion),
        Axiom::Symmetry => l.difference_witness(&l.swap(), Mode::Equality),
        Axiom::Transitivity => l.compose(&l).difference_witness(&l, Mode::Inclusion),
        Axiom::PrefixClosure => {
            let flagged = SyncRelation::explore(
                n,
                (rel.initial(), !rel.is_accepting(rel.initial())),
                |&(s, broken), c, d| rel.step(s, c, d).map(|t| (t, broken || !rel.is_accepting(t))),
                |&(s, broken)| broken && rel.is_accepting(s),
                |&(s, b)| format!("{}{}", rel.name(s), if b { "!" } else { "" }),
            );
            SyncNfa::from_relation(&flagged).difference_witness(&SyncNfa::empty(n), Mode::Inclusion)
        }
        Axiom::ActionVisibility => {
            let am = &game.actmap;
            let act_eq = SyncRelation::explore(n, (), |_, c, d| (am.act(c) == am.act(d)).then_some(()), |_| true, |_| "eq".into());
            l.difference_witness(&SyncNfa::from_relation(&act_eq), Mode::Inclusion)
        }
        Axiom::InformationConsistency => {
            let m = &game.coloring;
            let same_color = SyncRelation::explore(
                n,
                (m.initial(), m.initial()),
                |&(q, r), c, d| Some((m.step(q, c), m.step(r, d))),
                |&(q, r)| m.output(q) == m.output(r),
                |&(q, r)| format!("{}|{}", m.name(q), m.name(r)),
            );
            l.difference_witness(&SyncNfa::from_relation(&same_color), Mode::Inclusion)
        }
    }
}
