//! The stratification poset on Harder-Narasimhan types.
//!
//! Labels are pairs `(mu, I)` with `mu` dominant and `I` the simple roots
//! positive on `mu`. The order is `(mu, P_I) >= (mu', P_I')` when
//! `P_I` is contained in `P_I'` and `mu'` lies in the convex hull of the Weyl
//! orbit of `mu`. With this orientation the semistable label of a given
//! topological type sits below every other label of that type.

use std::collections::BTreeSet;
use std::fmt;

use crate::exec::{self, Execution};
use crate::lattice::{lattice_tower, ObstructionClass};
use crate::linalg;
use crate::lp;
use crate::parabolic::{check_family, ParabolicIndex};
use crate::rootsys::{CartanVector, GroupFamily, Kind, RootSystem};
use crate::canon::HNType;
use crate::{Error, Result, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumLabel {
    pub family: GroupFamily,
    pub mu: HNType,
    pub index: ParabolicIndex,
}

impl StratumLabel {
    /// Label of a dominant vector, with its forced parabolic.
    pub fn new(family: GroupFamily, mu: CartanVector) -> Result<Self> {
        let t = HNType { family, mu };
        if !t.is_dominant()? {
            return Err(Error::InvalidReduction(format!("{} is not dominant for {family}", t.mu)));
        }
        let index = t.parabolic()?;
        Ok(StratumLabel { family, mu: t, index })
    }

    pub fn is_semistable(&self) -> bool {
        self.index.is_empty()
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.mu.mu, self.index)
    }
}

/// Labels plus the covering relation `(upper, lower)` of the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataPoset {
    pub labels: Vec<StratumLabel>,
    pub relation: Vec<(usize, usize)>,
}

impl StrataPoset {
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Reachability along covering edges: `result[i][j]` iff `labels[j] <= labels[i]`.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.labels.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(u, l) in &self.relation {
            reach[u][l] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        reach
    }
}

pub const HULL_DIM_LIMIT: usize = 6;

/// Convex coefficients expressing `nu` over the Weyl orbit of `mu`, if `nu`
/// lies in its hull.
pub fn hull_certificate(family: GroupFamily, mu: &CartanVector, nu: &CartanVector) -> Result<Option<Vec<(CartanVector, Q)>>> {
    if family.cartan_dim() > HULL_DIM_LIMIT {
        return Err(Error::TooLarge(format!(
            "hull test limited to Cartan dimension {HULL_DIM_LIMIT}, got {}",
            family.cartan_dim()
        )));
    }
    let rs = RootSystem::new(family)?;
    family.check_dim(mu.len())?;
    family.check_dim(nu.len())?;
    let roots: Vec<Vec<Q>> = rs.positive().iter().map(|r| linalg::to_q(&r.0)).collect();
    let center = linalg::complement_projector(&roots, family.cartan_dim());
    if linalg::apply(&center, mu.coords()) != linalg::apply(&center, nu.coords()) {
        return Ok(None);
    }
    let orbit = rs.weyl_orbit(mu)?;
    let points: Vec<Vec<Q>> = orbit.iter().map(|p| p.0.clone()).collect();
    Ok(lp::convex_combination(&points, nu.coords()).map(|lam| {
        orbit.into_iter().zip(lam).filter(|(_, l)| *l != Q::from_integer(0)).collect()
    }))
}

pub fn hull_membership(family: GroupFamily, mu: &CartanVector, nu: &CartanVector) -> Result<bool> {
    Ok(hull_certificate(family, mu, nu)?.is_some())
}

/// Partial-sum dominance on `GL`: `nu` is dominated by `mu`.
pub fn gl_dominates(mu: &CartanVector, nu: &CartanVector) -> bool {
    if mu.len() != nu.len() || mu.sum() != nu.sum() {
        return false;
    }
    let sorted = |v: &CartanVector| {
        let mut c = v.0.clone();
        c.sort_by(|a, b| b.cmp(a));
        c
    };
    let (m, n) = (sorted(mu), sorted(nu));
    let mut sm = Q::from_integer(0);
    let mut sn = Q::from_integer(0);
    m.iter().zip(&n).all(|(a, b)| {
        sm += a;
        sn += b;
        sn <= sm
    })
}

/// `b >= a` in the stratum order.
pub fn stratum_leq(a: &StratumLabel, b: &StratumLabel) -> Result<bool> {
    if a.family != b.family {
        return Err(Error::FamilyMismatch(a.family.to_string(), b.family.to_string()));
    }
    check_family(a.family, a.index.family())?;
    check_family(b.family, b.index.family())?;
    if !b.index.members().is_superset(a.index.members()) {
        return Ok(false);
    }
    hull_membership(a.family, &b.mu.mu, &a.mu.mu)
}

/// Variant that only compares labels of equal topological type.
pub fn stratum_leq_same_type(a: &StratumLabel, b: &StratumLabel) -> Result<bool> {
    if a.family != b.family {
        return Err(Error::FamilyMismatch(a.family.to_string(), b.family.to_string()));
    }
    match (topological_class(&a.mu.mu, a.family), topological_class(&b.mu.mu, b.family)) {
        (Some(x), Some(y)) if x == y => stratum_leq(a, b),
        _ => Ok(false),
    }
}

fn topological_class(mu: &CartanVector, family: GroupFamily) -> Option<ObstructionClass> {
    lattice_tower(family).ok()?.class_of(mu).ok()
}

pub const STRATA_DIM_LIMIT: usize = 4;
pub const STRATA_BOUND_LIMIT: i64 = 4;

/// Dominant integer vectors with entries in `[-bound, bound]` (trace zero
/// for `SL`), optionally restricted to one topological class, ordered and
/// reduced to their covering relation.
pub fn enumerate_strata(
    family: GroupFamily,
    bound: i64,
    fixed_class: Option<&ObstructionClass>,
    mode: Execution,
) -> Result<StrataPoset> {
    if family.cartan_dim() > STRATA_DIM_LIMIT || !(0..=STRATA_BOUND_LIMIT).contains(&bound) {
        return Err(Error::TooLarge(format!(
            "strata enumeration limited to Cartan dimension {STRATA_DIM_LIMIT} and bound {STRATA_BOUND_LIMIT}"
        )));
    }
    let rs = RootSystem::new(family)?;
    let tower = lattice_tower(family)?;
    let d = family.cartan_dim();
    let side = (2 * bound + 1) as usize;
    let mut labels = BTreeSet::new();
    for code in 0..side.pow(d as u32) {
        let mut c = code;
        let v: Vec<i64> = (0..d)
            .map(|_| {
                let x = (c % side) as i64 - bound;
                c /= side;
                x
            })
            .collect();
        if family.kind() == Kind::SL && v.iter().sum::<i64>() != 0 {
            continue;
        }
        let cv = CartanVector::from_ints(&v);
        if !rs.is_dominant(&cv) {
            continue;
        }
        if let Some(cls) = fixed_class {
            if tower.class_of(&cv)? != *cls {
                continue;
            }
        }
        labels.insert(StratumLabel::new(family, cv)?);
    }
    // Higher types first, then by parabolic.
    let mut labels: Vec<StratumLabel> = labels.into_iter().collect();
    labels.reverse();
    let n = labels.len();
    let leq: Vec<Result<bool>> = exec::map_range(mode, n * n, |k| {
        let (i, j) = (k / n, k % n);
        if i == j {
            Ok(true)
        } else {
            stratum_leq(&labels[j], &labels[i])
        }
    });
    let mut below = vec![vec![false; n]; n];
    for (k, r) in leq.into_iter().enumerate() {
        below[k / n][k % n] = r?;
    }
    let relation = transitive_reduction(&below);
    Ok(StrataPoset { labels, relation })
}

/// Covering pairs `(i, j)` of a reflexive partial order given by
/// `below[i][j] <=> j <= i`.
pub fn transitive_reduction(below: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = below.len();
    let strict = |i: usize, j: usize| i != j && below[i][j];
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if strict(i, j) && !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn to_dot(p: &StrataPoset) -> String {
    let mut s = String::from("digraph strata {\n");
    for l in &p.labels {
        s.push_str(&format!("  \"{l}\";\n"));
    }
    for &(u, l) in &p.relation {
        s.push_str(&format!("  \"{}\" -> \"{}\";\n", p.labels[u], p.labels[l]));
    }
    s.push_str("}\n");
    s
}

/// Nodes and edges of a graph produced by [`to_dot`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

pub fn parse_dot(text: &str) -> Result<DotGraph> {
    let bad = |m: &str| Error::InvalidBundle(format!("malformed DOT: {m}"));
    let body = text
        .trim()
        .strip_prefix("digraph strata {")
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| bad("missing graph header"))?;
    let quoted = |t: &str| -> Result<String> {
        t.trim()
            .strip_prefix('"')
            .and_then(|x| x.strip_suffix('"'))
            .map(str::to_string)
            .ok_or_else(|| bad(t))
    };
    let mut graph = DotGraph { nodes: Vec::new(), edges: Vec::new() };
    for stmt in body.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let stmt = stmt.strip_suffix(';').ok_or_else(|| bad(stmt))?;
        match stmt.split_once(" -> ") {
            Some((a, b)) => graph.edges.push((quoted(a)?, quoted(b)?)),
            None => graph.nodes.push(quoted(stmt)?),
        }
    }
    Ok(graph)
}
