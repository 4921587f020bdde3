//! Finite game trees whose edge probabilities are affine in named
//! strategy parameters.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Result, RigError};
use crate::rational::{self, Rational};

/// `constant + Σ coef·param`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub terms: Vec<(String, Rational)>,
}

impl Affine {
    pub fn constant(r: Rational) -> Self {
        Self { constant: r, terms: Vec::new() }
    }

    pub fn param(name: &str) -> Self {
        Self {
            constant: Rational::zero(),
            terms: vec![(name.to_string(), Rational::one())],
        }
    }

    /// `1 - name`
    pub fn one_minus(name: &str) -> Self {
        Self {
            constant: Rational::one(),
            terms: vec![(name.to_string(), -Rational::one())],
        }
    }

    /// Parses `"x1"`, `"1-x1"` or a rational constant such as `"1/2"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some(r) = rational::parse(s) {
            return Some(Self::constant(r));
        }
        let valid = |v: &str| !v.is_empty() && v.chars().all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '\'');
        if let Some(rest) = s.strip_prefix("1-") {
            let rest = rest.trim();
            return valid(rest).then(|| Self::one_minus(rest));
        }
        valid(s).then(|| Self::param(s))
    }

    pub fn to_poly(&self) -> Poly {
        self.terms.iter().fold(Poly::constant(self.constant.clone()), |acc, (v, c)| {
            &acc + &(&Poly::constant(c.clone()) * &Poly::var(v))
        })
    }
}

impl std::fmt::Display for Affine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.terms.as_slice(), self.constant.is_zero(), self.constant.is_one()) {
            ([], _, _) => write!(f, "{}", rational::format(&self.constant)),
            ([(v, c)], true, _) if c.is_one() => write!(f, "{v}"),
            ([(v, c)], _, true) if *c == -Rational::one() => write!(f, "1-{v}"),
            _ => write!(f, "{}", self.to_poly()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Player,
    Environment,
    Leaf(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub label: String,
    pub kind: NodeKind,
    pub children: Vec<(Affine, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamTreeGame {
    pub nodes: Vec<TreeNode>,
    pub root: usize,
}

impl ParamTreeGame {
    /// Checks that the nodes form a tree rooted at `root`, that leaves have
    /// no children, and that outgoing probabilities sum identically to 1.
    pub fn new(nodes: Vec<TreeNode>, root: usize) -> Result<Self> {
        let bad = |m: String| Err(RigError::InvalidGame(m));
        if root >= nodes.len() {
            return bad("root is out of range".into());
        }
        let mut parents = vec![0usize; nodes.len()];
        for n in &nodes {
            for (_, c) in &n.children {
                if *c >= nodes.len() {
                    return bad(format!("{}: child out of range", n.label));
                }
                parents[*c] += 1;
            }
        }
        if parents[root] != 0 || parents.iter().enumerate().any(|(i, &k)| i != root && k != 1) {
            return bad("nodes do not form a tree".into());
        }
        for n in &nodes {
            match n.kind {
                NodeKind::Leaf(_) if !n.children.is_empty() => return bad(format!("leaf {} has children", n.label)),
                NodeKind::Player | NodeKind::Environment => {
                    if n.children.is_empty() {
                        return bad(format!("{} has no children", n.label));
                    }
                    let sum = n.children.iter().fold(Poly::zero(), |acc, (a, _)| &acc + &a.to_poly());
                    if sum != Poly::one() {
                        return bad(format!("probabilities out of {} sum to {sum}", n.label));
                    }
                }
                _ => {}
            }
        }
        Ok(Self { nodes, root })
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.nodes
            .iter()
            .flat_map(|n| n.children.iter().flat_map(|(a, _)| a.terms.iter().map(|(v, _)| v.clone())))
            .collect()
    }

    /// Parameters appearing at nodes of the given kind.
    pub fn params_of(&self, kind: NodeKind) -> BTreeSet<String> {
        self.nodes
            .iter()
            .filter(|n| n.kind == kind)
            .flat_map(|n| n.children.iter().flat_map(|(a, _)| a.terms.iter().map(|(v, _)| v.clone())))
            .collect()
    }

    /// Symbolic probability mass per leaf colour.
    pub fn color_polys(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        let mut stack = vec![(self.root, Poly::one())];
        while let Some((n, p)) = stack.pop() {
            let node = &self.nodes[n];
            if let NodeKind::Leaf(c) = node.kind {
                let e = out.entry(c).or_default();
                *e = &*e + &p;
            }
            for (a, child) in &node.children {
                stack.push((*child, &p * &a.to_poly()));
            }
        }
        out
    }

    /// Exact mass per leaf colour under a full assignment of the parameters.
    pub fn leaf_distribution(&self, assignment: &HashMap<String, Rational>) -> Result<BTreeMap<u32, Rational>> {
        for v in self.params() {
            match assignment.get(&v) {
                None => return Err(RigError::InvalidStrategy(format!("parameter {v} is unassigned"))),
                Some(r) if !rational::is_probability(r) => {
                    return Err(RigError::InvalidStrategy(format!(
                        "parameter {v} = {} is outside [0, 1]",
                        rational::format(r)
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(self
            .color_polys()
            .into_iter()
            .map(|(c, p)| (c, p.eval(assignment).expect("every parameter is assigned")))
            .collect())
    }

    /// Child-index path from the root to every node.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut paths = vec![Vec::new(); self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            for (i, (_, child)) in self.nodes[n].children.iter().enumerate() {
                let mut p = paths[n].clone();
                p.push(i);
                paths[*child] = p;
                stack.push(*child);
            }
        }
        paths
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn leaf(label: &str, c: u32) -> TreeNode {
        TreeNode {
            label: label.into(),
            kind: NodeKind::Leaf(c),
            children: vec![],
        }
    }

    #[test]
    fn affine_parsing() {
        assert_eq!(Affine::parse("x1"), Some(Affine::param("x1")));
        assert_eq!(Affine::parse("1-z2"), Some(Affine::one_minus("z2")));
        assert_eq!(Affine::parse("1/2"), Some(Affine::constant(ratio(1, 2))));
        assert_eq!(Affine::parse("1-"), None);
        assert_eq!(Affine::one_minus("t").to_string(), "1-t");
    }

    #[test]
    fn two_leaf_tree() {
        let g = ParamTreeGame::new(
            vec![
                TreeNode {
                    label: "r".into(),
                    kind: NodeKind::Player,
                    children: vec![(Affine::param("x"), 1), (Affine::one_minus("x"), 2)],
                },
                leaf("a", 1),
                leaf("b", 2),
            ],
            0,
        )
        .unwrap();
        let d = g.leaf_distribution(&HashMap::from([("x".into(), ratio(1, 3))])).unwrap();
        assert_eq!(d[&1], ratio(1, 3));
        assert_eq!(d[&2], ratio(2, 3));
        assert!(g.leaf_distribution(&HashMap::from([("x".into(), ratio(3, 2))])).is_err());
    }

    #[test]
    fn rejects_non_stochastic_node() {
        let r = ParamTreeGame::new(
            vec![
                TreeNode {
                    label: "r".into(),
                    kind: NodeKind::Environment,
                    children: vec![(Affine::param("x"), 1), (Affine::param("x"), 2)],
                },
                leaf("a", 1),
                leaf("b", 2),
            ],
            0,
        );
        assert!(r.is_err());
    }
}
