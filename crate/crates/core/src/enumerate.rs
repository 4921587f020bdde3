//! Bounded brute-force counterparts of the automata-based validators. Every
//! history (pair) up to a given length is listed explicitly.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::game::{Axiom, Game, SyncRelation, Witness};
use crate::morphism::Morphism;

/// All histories of length at most `depth`, shortest first, then
/// lexicographically.
pub fn histories(num_moves: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..depth {
        let end = out.len();
        for i in start..end {
            for c in 0..num_moves {
                let mut h = out[i].clone();
                h.push(c);
                out.push(h);
            }
        }
        start = end;
    }
    out
}

/// Pairs whose run in the relation automaton is defined, up to `depth`,
/// with their acceptance. Pairs with a dead run are omitted since no
/// extension of them is related.
pub fn live_pairs(rel: &SyncRelation, depth: usize) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    let n = rel.num_moves();
    let mut frontier = vec![(Vec::new(), Vec::new(), rel.initial())];
    let mut out = Vec::new();
    for k in 0..=depth {
        let mut next = Vec::new();
        for (l, r, s) in frontier {
            if k < depth {
                for c in 0..n {
                    for d in 0..n {
                        if let Some(t) = rel.step(s, c, d) {
                            let (mut l2, mut r2) = (l.clone(), r.clone());
                            l2.push(c);
                            r2.push(d);
                            next.push((l2, r2, t));
                        }
                    }
                }
            }
            out.push((l, r, rel.is_accepting(s)));
        }
        frontier = next;
    }
    out
}

/// Accepted pairs up to `depth`.
pub fn related_pairs(rel: &SyncRelation, depth: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    live_pairs(rel, depth)
        .into_iter()
        .filter(|(_, _, acc)| *acc)
        .map(|(l, r, _)| (l, r))
        .collect()
}

fn least(cands: impl IntoIterator<Item = Witness>) -> Option<Witness> {
    cands.into_iter().min_by_key(Witness::order_key)
}

/// For each axiom, the least violating pair of length at most `depth`.
pub fn game_axiom_witnesses(game: &Game, depth: usize) -> HashMap<Axiom, Option<Witness>> {
    let rel = &game.indist;
    let am = &game.actmap;
    let related = related_pairs(rel, depth);
    let set: HashSet<(&[usize], &[usize])> = related.iter().map(|(l, r)| (l.as_slice(), r.as_slice())).collect();
    let rel_has = |l: &[usize], r: &[usize]| set.contains(&(l, r));
    let mut by_left: HashMap<&[usize], Vec<&[usize]>> = HashMap::new();
    for (l, r) in &related {
        by_left.entry(l.as_slice()).or_default().push(r.as_slice());
    }
    let pair = |l: &[usize], r: &[usize]| Witness::new(l.to_vec(), r.to_vec());
    let mut out = HashMap::new();

    out.insert(
        Axiom::Reflexivity,
        least(
            histories(game.num_moves(), depth)
                .into_iter()
                .filter(|h| !rel_has(h, h))
                .map(|h| Witness::new(h.clone(), h)),
        ),
    );
    out.insert(
        Axiom::Symmetry,
        least(
            related
                .iter()
                .filter(|(l, r)| !rel_has(r, l))
                .flat_map(|(l, r)| [pair(l, r), pair(r, l)]),
        ),
    );
    out.insert(
        Axiom::Transitivity,
        least(related.iter().flat_map(|(l, m)| {
            by_left
                .get(m.as_slice())
                .into_iter()
                .flatten()
                .filter(|r| !rel_has(l, r))
                .map(|r| pair(l, r))
                .collect::<Vec<_>>()
        })),
    );
    out.insert(
        Axiom::PrefixClosure,
        least(
            related
                .iter()
                .filter(|(l, r)| (0..l.len()).any(|i| !rel_has(&l[..i], &r[..i])))
                .map(|(l, r)| pair(l, r)),
        ),
    );
    out.insert(
        Axiom::ActionVisibility,
        least(
            related
                .iter()
                .filter(|(l, r)| l.iter().zip(r.iter()).any(|(&c, &d)| am.act(c) != am.act(d)))
                .map(|(l, r)| pair(l, r)),
        ),
    );
    out.insert(
        Axiom::InformationConsistency,
        least(
            related
                .iter()
                .filter(|(l, r)| game.coloring.output(game.coloring.run(l)) != game.coloring.output(game.coloring.run(r)))
                .map(|(l, r)| pair(l, r)),
        ),
    );
    out
}

/// Whether some pair of histories up to `depth` has equal images but
/// different colours.
pub fn refinement_violated(game: &Game, m: &Morphism, depth: usize) -> bool {
    let mut color_of: HashMap<usize, u32> = HashMap::new();
    histories(game.num_moves(), depth).iter().any(|h| {
        let c = game.coloring.output(game.coloring.run(h));
        *color_of.entry(m.run(h)).or_insert(c) != c
    })
}

/// `h` applied to every member of every information set of histories up to
/// `depth`, keyed by the representative history.
pub fn class_images(game: &Game, m: &Morphism, depth: usize) -> HashMap<Vec<usize>, BTreeSet<usize>> {
    let mut images: HashMap<Vec<usize>, BTreeSet<usize>> = HashMap::new();
    for (l, r) in related_pairs(&game.indist, depth) {
        images.entry(l).or_default().insert(m.run(&r));
    }
    images
}

/// Brute-force form of rectangularity: equal images imply equal images of
/// the information sets, for all histories up to `depth`.
pub fn rectangularity_violated(game: &Game, m: &Morphism, depth: usize) -> bool {
    let images = class_images(game, m, depth);
    let mut by_state: HashMap<usize, &BTreeSet<usize>> = HashMap::new();
    let empty = BTreeSet::new();
    histories(game.num_moves(), depth).iter().any(|h| {
        let img = images.get(h).unwrap_or(&empty);
        let first = *by_state.entry(m.run(h)).or_insert(img);
        first != img
    })
}

/// `{(h(τ), h(τ')) | τ ∼ τ', |τ| ≤ depth}`.
pub fn approx_pairs(game: &Game, m: &Morphism, depth: usize) -> BTreeSet<(usize, usize)> {
    related_pairs(&game.indist, depth)
        .iter()
        .map(|(l, r)| (m.run(l), m.run(r)))
        .collect()
}
