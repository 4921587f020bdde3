//! Exact verification that the abstract game does not refine the concrete
//! one: for the fixed player witness in `G` and every sampled `ȳ` in `H`,
//! the chosen environment response in `H` separates the two colour
//! distributions (or their almost-sure reachability verdicts) for every `t̄`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fig3::{g_tree, h_tree};
use super::poly::Poly;
use super::tree::ParamTreeGame;
use crate::error::{Result, RigError};
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// Some colour has different mass.
    Psi,
    /// Some reachability target is almost sure in one game only.
    PsiPrime,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::Psi => "psi",
            Formula::PsiPrime => "psi-prime",
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "psi" => Ok(Formula::Psi),
            "psi-prime" => Ok(Formula::PsiPrime),
            _ => Err(format!("unknown formula `{s}` (expected psi or psi-prime)")),
        }
    }
}

/// Region of environment parameters `t̄` a case covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    AllT,
    T1NotOne,
    T1One,
}

impl Region {
    fn restrict(self, p: &Poly) -> Poly {
        match self {
            Region::T1One => p.substitute(&HashMap::from([("t1".to_string(), Rational::one())])),
            _ => p.clone(),
        }
    }
}

/// The masses of a colour set in both games, as polynomials in `t̄` on the
/// case's region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub colors: Vec<u32>,
    pub g_mass: String,
    pub h_mass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseEntry {
    pub region: Region,
    pub discrepancies: Vec<Discrepancy>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointEntry {
    pub y1: String,
    pub y2: String,
    /// `[z1, z2, z3]`
    pub z: [String; 3],
    /// Pure choice of `z2` when `y2 ∈ {0, 1}`.
    pub z2_pure: Option<String>,
    pub cases: Vec<CaseEntry>,
    /// Every point of the coarse `t̄` grid shows a difference.
    pub corroborated: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub formula: Formula,
    pub grid_n: u32,
    /// `[x1, x2, x3]`
    pub x: [String; 3],
    pub z3_choice: String,
    pub points: Vec<PointEntry>,
    pub verdict: bool,
}

/// Result of a check: the verdict and its certificate.
pub struct Verdict {
    pub holds: bool,
    pub certificate: Certificate,
}

fn witness_x() -> [Rational; 3] {
    [ratio(1, 2), int(1), int(0)]
}

fn witness_z(y2: &Rational) -> [Rational; 3] {
    [int(1), int(1) - y2, int(0)]
}

fn z2_pure(y2: &Rational) -> Option<Rational> {
    if y2.is_zero() {
        Some(int(1))
    } else if y2.is_one() {
        Some(int(0))
    } else {
        None
    }
}

fn assign(names: [&str; 3], vals: &[Rational; 3]) -> HashMap<String, Rational> {
    names.iter().map(|n| n.to_string()).zip(vals.iter().cloned()).collect()
}

fn y_assign(y1: &Rational, y2: &Rational) -> HashMap<String, Rational> {
    HashMap::from([("y1".to_string(), y1.clone()), ("y2".to_string(), y2.clone())])
}

/// `0..=grid_n` over `grid_n`, together with 0, 1/2 and 1, sorted.
pub fn y_grid(grid_n: u32) -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..=grid_n as i64).map(|i| ratio(i, grid_n as i64)).collect();
    v.extend([int(0), ratio(1, 2), int(1)]);
    v.sort();
    v.dedup();
    v
}

static G_POLYS: OnceLock<BTreeMap<u32, Poly>> = OnceLock::new();
static H_POLYS: OnceLock<BTreeMap<u32, Poly>> = OnceLock::new();

fn color_polys(cell: &'static OnceLock<BTreeMap<u32, Poly>>, tree: fn() -> ParamTreeGame) -> &'static BTreeMap<u32, Poly> {
    cell.get_or_init(|| tree().color_polys())
}

/// Mass of each colour 1..=6 in `G` under `x`, as polynomials in `t̄`.
fn g_masses(x: &[Rational; 3]) -> Vec<Poly> {
    let polys = color_polys(&G_POLYS, g_tree);
    let xs = assign(["x1", "x2", "x3"], x);
    (1..=6).map(|c| polys.get(&c).map_or_else(Poly::zero, |p| p.substitute(&xs))).collect()
}

/// Mass of each colour 1..=6 in `H` under `y` and `z`.
fn h_masses(y1: &Rational, y2: &Rational, z: &[Rational; 3]) -> Vec<Poly> {
    let polys = color_polys(&H_POLYS, h_tree);
    let mut vals = y_assign(y1, y2);
    vals.extend(assign(["z1", "z2", "z3"], z));
    (1..=6).map(|c| polys.get(&c).map_or_else(Poly::zero, |p| p.substitute(&vals))).collect()
}

fn mass_of(masses: &[Poly], colors: &[u32]) -> Poly {
    colors.iter().fold(Poly::zero(), |acc, &c| &acc + &masses[c as usize - 1])
}

/// `d ≠ 0` for every `t̄` in the region. On `T1NotOne` an affine function of
/// `t1` whose only root is 1 qualifies.
fn never_zero(d: &Poly, region: Region) -> bool {
    if let Some(c) = d.as_constant() {
        return !c.is_zero();
    }
    region == Region::T1NotOne
        && matches!(d.as_affine_in("t1"), Some((a, b)) if !a.is_zero() && -(&b) / &a == Rational::one())
}

fn case_holds(formula: Formula, region: Region, g: &Poly, h: &Poly) -> bool {
    let differs = never_zero(&(g - h), region);
    match formula {
        Formula::Psi => differs,
        // one side is almost sure, the other never reaches probability 1
        Formula::PsiPrime => differs && ((*g == Poly::one()) != (*h == Poly::one())),
    }
}

/// Regions and colour sets the case split uses at a given `y1`.
fn plan(formula: Formula, y1: &Rational) -> Vec<(Region, Vec<Vec<u32>>)> {
    match formula {
        Formula::Psi if *y1 != ratio(1, 2) => vec![(Region::AllT, vec![vec![1, 2]])],
        Formula::Psi => vec![(Region::T1NotOne, vec![vec![1]]), (Region::T1One, vec![vec![4], vec![5]])],
        Formula::PsiPrime if y1.is_zero() => vec![(Region::AllT, vec![vec![3, 4, 5, 6]])],
        Formula::PsiPrime if y1.is_one() => vec![(Region::AllT, vec![vec![1, 2]])],
        Formula::PsiPrime => vec![
            (Region::T1NotOne, vec![vec![1, 3, 4, 5, 6]]),
            (Region::T1One, vec![vec![1, 2, 3, 6]]),
        ],
    }
}

/// Builds one case; colour sets whose masses coincide on the region are
/// dropped, and the case holds if some remaining set separates the games.
fn build_case(formula: Formula, region: Region, sets: Vec<Vec<u32>>, g: &[Poly], h: &[Poly]) -> CaseEntry {
    let mut discrepancies = Vec::new();
    let mut holds = false;
    for colors in sets {
        let gm = region.restrict(&mass_of(g, &colors));
        let hm = region.restrict(&mass_of(h, &colors));
        if (&gm - &hm).is_zero() {
            continue;
        }
        holds |= case_holds(formula, region, &gm, &hm);
        discrepancies.push(Discrepancy {
            colors,
            g_mass: gm.to_string(),
            h_mass: hm.to_string(),
        });
    }
    CaseEntry {
        region,
        discrepancies,
        holds,
    }
}

/// Redundant evaluation on `t̄ ∈ {0, 1/2, 1}³`; cannot prove the universal
/// claim on its own.
fn corroborate(formula: Formula, plan: &[(Region, Vec<Vec<u32>>)], g: &[Poly], h: &[Poly]) -> bool {
    let vals = [int(0), ratio(1, 2), int(1)];
    let mut all = true;
    for t1 in &vals {
        for t2 in &vals {
            for t3 in &vals {
                let t = assign(["t1", "t2", "t3"], &[t1.clone(), t2.clone(), t3.clone()]);
                let region = if t1.is_one() { Region::T1One } else { Region::T1NotOne };
                let sets = plan
                    .iter()
                    .filter(|(r, _)| *r == Region::AllT || *r == region)
                    .flat_map(|(_, s)| s.iter());
                let separated = sets.into_iter().any(|colors| {
                    let gm = mass_of(g, colors).eval(&t).expect("only t̄ remains");
                    let hm = mass_of(h, colors).eval(&t).expect("only t̄ remains");
                    match formula {
                        Formula::Psi => gm != hm,
                        Formula::PsiPrime => gm.is_one() != hm.is_one(),
                    }
                });
                all &= separated;
            }
        }
    }
    all
}

fn check_point(formula: Formula, g: &[Poly], y1: &Rational, y2: &Rational) -> PointEntry {
    let z = witness_z(y2);
    let h = h_masses(y1, y2, &z);
    let plan = plan(formula, y1);
    let cases: Vec<CaseEntry> = plan
        .iter()
        .map(|(region, sets)| build_case(formula, *region, sets.clone(), g, &h))
        .collect();
    let holds = cases.iter().all(|c| c.holds);
    PointEntry {
        y1: rational::format(y1),
        y2: rational::format(y2),
        z: z.each_ref().map(rational::format),
        z2_pure: z2_pure(y2).map(|r| rational::format(&r)),
        corroborated: corroborate(formula, &plan, g, &h),
        cases,
        holds,
    }
}

pub fn check(formula: Formula, grid_n: u32) -> Result<Verdict> {
    if grid_n < 2 {
        return Err(RigError::Unsupported("grid resolution must be at least 2".into()));
    }
    let x = witness_x();
    let g = g_masses(&x);
    let ys = y_grid(grid_n);
    let grid: Vec<(Rational, Rational)> = ys
        .iter()
        .flat_map(|a| ys.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let points: Vec<PointEntry> = grid.par_iter().map(|(y1, y2)| check_point(formula, &g, y1, y2)).collect();
    let holds = points.iter().all(|p| p.holds);
    Ok(Verdict {
        holds,
        certificate: Certificate {
            formula,
            grid_n,
            x: x.each_ref().map(rational::format),
            z3_choice: "0".into(),
            points,
            verdict: holds,
        },
    })
}

pub fn check_psi(grid_n: u32) -> Result<Verdict> {
    check(Formula::Psi, grid_n)
}

pub fn check_psi_prime(grid_n: u32) -> Result<Verdict> {
    check(Formula::PsiPrime, grid_n)
}

/// Re-derives every recorded mass from the trees and re-checks each case.
/// Returns the first inconsistency found.
pub fn replay(cert: &Certificate) -> std::result::Result<(), String> {
    let parse = |s: &str| rational::parse(s).ok_or_else(|| format!("not a rational: `{s}`"));
    let x = [parse(&cert.x[0])?, parse(&cert.x[1])?, parse(&cert.x[2])?];
    let g = g_masses(&x);
    let expected: Vec<(Rational, Rational)> = {
        let ys = y_grid(cert.grid_n.max(1));
        ys.iter().flat_map(|a| ys.iter().map(move |b| (a.clone(), b.clone()))).collect()
    };
    let mut seen = Vec::new();
    for (i, p) in cert.points.iter().enumerate() {
        let at = |m: &str| format!("points[{i}]: {m}");
        let (y1, y2) = (parse(&p.y1)?, parse(&p.y2)?);
        for v in [&y1, &y2] {
            if !rational::is_probability(v) {
                return Err(at("y outside [0, 1]"));
            }
        }
        let z = [parse(&p.z[0])?, parse(&p.z[1])?, parse(&p.z[2])?];
        if z.iter().any(|v| !rational::is_probability(v)) {
            return Err(at("z outside [0, 1]"));
        }
        if p.z2_pure != z2_pure(&y2).map(|r| rational::format(&r)) {
            return Err(at("pure z2 does not follow the snapping rule"));
        }
        let h = h_masses(&y1, &y2, &z);
        let regions: Vec<Region> = p.cases.iter().map(|c| c.region).collect();
        if regions != [Region::AllT] && regions != [Region::T1NotOne, Region::T1One] {
            return Err(at("cases do not cover every t"));
        }
        let mut point_holds = true;
        for case in &p.cases {
            let mut case_ok = false;
            for d in &case.discrepancies {
                if d.colors.is_empty() || d.colors.iter().any(|c| !(1..=6).contains(c)) {
                    return Err(at("colour out of range"));
                }
                let gm = case.region.restrict(&mass_of(&g, &d.colors));
                let hm = case.region.restrict(&mass_of(&h, &d.colors));
                if gm.to_string() != d.g_mass || hm.to_string() != d.h_mass {
                    return Err(at(&format!("recorded masses for {:?} do not match", d.colors)));
                }
                case_ok |= case_holds(cert.formula, case.region, &gm, &hm);
            }
            if case_ok != case.holds {
                return Err(at("case verdict does not match its discrepancies"));
            }
            point_holds &= case_ok;
        }
        if point_holds != p.holds {
            return Err(at("point verdict does not match its cases"));
        }
        seen.push((y1, y2));
    }
    if seen != expected {
        return Err("points do not enumerate the grid".into());
    }
    if cert.verdict != cert.points.iter().all(|p| p.holds) {
        return Err("verdict does not match the points".into());
    }
    Ok(())
}
