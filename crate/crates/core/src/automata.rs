//! Nondeterministic synchronous two-tape automata, used to decide inclusion
//! and equality of regular same-length relations.

use std::collections::{HashMap, VecDeque};

use crate::game::{SyncRelation, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Look for a pair accepted by the left automaton but not the right one.
    Inclusion,
    /// Look for a pair accepted by exactly one of the two.
    Equality,
}

#[derive(Debug, Clone)]
pub struct SyncNfa {
    n: usize,
    initial: Vec<usize>,
    /// `trans[s][c * n + c']`, sorted and deduplicated
    trans: Vec<Vec<Vec<usize>>>,
    accepting: Vec<bool>,
}

impl SyncNfa {
    pub fn from_relation(r: &SyncRelation) -> Self {
        let n = r.num_moves();
        let trans = (0..r.num_states())
            .map(|s| {
                (0..n * n)
                    .map(|l| r.step(s, l / n, l % n).into_iter().collect())
                    .collect()
            })
            .collect();
        Self {
            n,
            initial: vec![r.initial()],
            trans,
            accepting: (0..r.num_states()).map(|s| r.is_accepting(s)).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            initial: vec![0],
            trans: vec![vec![Vec::new(); n * n]],
            accepting: vec![false],
        }
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    /// Exchanges the two tapes.
    pub fn swap(&self) -> Self {
        let n = self.n;
        let trans = self
            .trans
            .iter()
            .map(|row| (0..n * n).map(|l| row[(l % n) * n + l / n].clone()).collect())
            .collect();
        Self { trans, ..self.clone() }
    }

    /// `{(x, z) | ∃y. (x, y) ∈ self ∧ (y, z) ∈ other}`, restricted to
    /// reachable product states.
    pub fn compose(&self, other: &SyncNfa) -> SyncNfa {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states = Vec::new();
        let mut initial = Vec::new();
        for &i in &self.initial {
            for &j in &other.initial {
                let id = *index.entry((i, j)).or_insert_with(|| {
                    states.push((i, j));
                    states.len() - 1
                });
                initial.push(id);
            }
        }
        let mut trans = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let (i, j) = states[k];
            let mut row = vec![Vec::new(); n * n];
            for c in 0..n {
                for e in 0..n {
                    let mut targets = Vec::new();
                    for d in 0..n {
                        for &i2 in &self.trans[i][c * n + d] {
                            for &j2 in &other.trans[j][d * n + e] {
                                let id = *index.entry((i2, j2)).or_insert_with(|| {
                                    states.push((i2, j2));
                                    states.len() - 1
                                });
                                targets.push(id);
                            }
                        }
                    }
                    targets.sort_unstable();
                    targets.dedup();
                    row[c * n + e] = targets;
                }
            }
            trans.push(row);
            k += 1;
        }
        let accepting = states
            .iter()
            .map(|&(i, j)| self.accepting[i] && other.accepting[j])
            .collect();
        initial.sort_unstable();
        initial.dedup();
        SyncNfa { n, initial, trans, accepting }
    }

    fn post(&self, set: &[usize], letter: usize) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().flat_map(|&s| self.trans[s][letter].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn accepts_some(&self, set: &[usize]) -> bool {
        set.iter().any(|&s| self.accepting[s])
    }

    /// Shortest, then lexicographically least (over letters `c·n + c'`),
    /// pair of histories separating the two languages under `mode`.
    pub fn difference_witness(&self, other: &SyncNfa, mode: Mode) -> Option<Witness> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut init_a = self.initial.clone();
        init_a.sort_unstable();
        let mut init_b = other.initial.clone();
        init_b.sort_unstable();
        let start = (init_a, init_b);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut nodes = vec![start.clone()];
        let mut seen: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let (a, b) = &nodes[k];
            let (fa, fb) = (self.accepts_some(a), other.accepts_some(b));
            let bad = match mode {
                Mode::Inclusion => fa && !fb,
                Mode::Equality => fa != fb,
            };
            if bad {
                let mut letters = Vec::new();
                let mut cur = k;
                while let Some((p, l)) = parent[cur] {
                    letters.push(l);
                    cur = p;
                }
                letters.reverse();
                return Some(Witness {
                    left: letters.iter().map(|l| l / n).collect(),
                    right: letters.iter().map(|l| l % n).collect(),
                });
            }
            // an empty left set can never become accepting again, and under
            // inclusion that ends the search along this branch
            let a_dead = a.is_empty();
            if a_dead && (mode == Mode::Inclusion || b.is_empty()) {
                continue;
            }
            for l in 0..n * n {
                let (a, b) = &nodes[k];
                let next = (self.post(a, l), other.post(b, l));
                if next.0.is_empty() && next.1.is_empty() {
                    continue;
                }
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), nodes.len());
                    parent.push(Some((k, l)));
                    nodes.push(next);
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_from(n: usize, pairs: &[(usize, usize)]) -> SyncRelation {
        // relates single-letter histories listed in `pairs`, plus ε
        let mut row = vec![None; n * n];
        for &(c, d) in pairs {
            row[c * n + d] = Some(1);
        }
        SyncRelation::new(
            vec!["s0".into(), "s1".into()],
            0,
            n,
            vec![row, vec![None; n * n]],
            vec![true, true],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_included_in_full_relation() {
        let id = SyncNfa::from_relation(&SyncRelation::identity(2));
        let full = SyncNfa::from_relation(&SyncRelation::explore(2, (), |_, _, _| Some(()), |_| true, |_| "x".into()));
        assert!(id.difference_witness(&full, Mode::Inclusion).is_none());
        let w = full.difference_witness(&id, Mode::Inclusion).unwrap();
        assert_eq!((w.left, w.right), (vec![0], vec![1]));
    }

    #[test]
    fn swap_detects_asymmetry() {
        let r = SyncNfa::from_relation(&rel_from(2, &[(0, 0), (1, 1), (0, 1)]));
        let w = r.difference_witness(&r.swap(), Mode::Equality).unwrap();
        assert_eq!((w.left, w.right), (vec![0], vec![1]));
    }

    #[test]
    fn composition_of_single_letter_relations() {
        let r = SyncNfa::from_relation(&rel_from(3, &[(0, 1)]));
        let s = SyncNfa::from_relation(&rel_from(3, &[(1, 2)]));
        let rs = r.compose(&s);
        let expect = SyncNfa::from_relation(&rel_from(3, &[(0, 2)]));
        assert!(rs.difference_witness(&expect, Mode::Equality).is_none());
        assert!(s.compose(&r).difference_witness(&SyncNfa::from_relation(&rel_from(3, &[])), Mode::Equality).is_none());
    }

    #[test]
    fn witness_is_shortest_then_lexicographic() {
        // relates (x, y) for every letter pair except (0, 0)
        let n = 2;
        let r = SyncRelation::explore(n, 0u8, |_, c, d| (c + d > 0).then_some(0), |_| true, |_| "s".into());
        let id = SyncNfa::from_relation(&SyncRelation::identity(n));
        let w = id.difference_witness(&SyncNfa::from_relation(&r), Mode::Inclusion).unwrap();
        assert_eq!((w.left, w.right), (vec![0], vec![0]));
    }
}
