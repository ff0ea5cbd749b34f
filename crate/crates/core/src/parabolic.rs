//! Standard parabolic subgroups `P_I`, indexed by subsets `I` of the simple
//! roots. `I = {}` is the whole group, `I = all simple roots` the Borel.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{self, to_q};
use crate::rootsys::{GroupFamily, Kind, RootFunctional, RootSystem};
use crate::{Error, Result, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicIndex {
    family: GroupFamily,
    members: BTreeSet<usize>,
}

impl ParabolicIndex {
    pub fn new(family: GroupFamily, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        family.require_root_datum()?;
        let members: BTreeSet<usize> = members.into_iter().collect();
        let n = simple_count(family);
        if let Some(&bad) = members.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidIndex(format!("{family} has {n} simple roots, got index {bad}")));
        }
        Ok(ParabolicIndex { family, members })
    }

    /// `P_{}` = the whole group.
    pub fn whole(family: GroupFamily) -> Result<Self> {
        Self::new(family, [])
    }

    pub fn borel(family: GroupFamily) -> Result<Self> {
        Self::new(family, 0..simple_count(family))
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Simple-root names of the members, in index order.
    pub fn names(&self) -> Vec<String> {
        self.members.iter().map(|&i| crate::rootsys::simple_root_name(self.family, i)).collect()
    }

    /// Every subset of the simple roots, ordered by bitmask.
    pub fn all_subsets(family: GroupFamily) -> Result<Vec<Self>> {
        let n = simple_count(family);
        (0u32..1 << n)
            .map(|mask| Self::new(family, (0..n).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }
}

impl fmt::Display for ParabolicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(";"))
    }
}

fn simple_count(family: GroupFamily) -> usize {
    match family.kind() {
        Kind::GL | Kind::SL => family.r() - 1,
        Kind::Sp | Kind::SO => family.half(),
    }
}

impl RootSystem {
    /// Roots of the Levi factor `L_I`: those with zero coefficient on `I`.
    pub fn levi_roots(&self, index: &ParabolicIndex) -> Vec<RootFunctional> {
        self.roots_with_coeffs()
            .into_iter()
            .filter(|(_, c)| index.members().iter().all(|&i| c[i] == 0))
            .map(|(r, _)| r)
            .collect()
    }

    /// Roots of `Lie(P_I)`: positive on or orthogonal to `I` in simple-root
    /// coefficients.
    pub fn parabolic_roots(&self, index: &ParabolicIndex) -> Vec<RootFunctional> {
        self.roots_with_coeffs()
            .into_iter()
            .filter(|(_, c)| index.members().iter().all(|&i| c[i] >= 0))
            .map(|(r, _)| r)
            .collect()
    }
}

/// Parabolic stabilizing a (isotropic, for `Sp`/`SO`) flag with the given
/// subbundle ranks.
pub fn parabolic_from_flag(family: GroupFamily, flag_ranks: &[usize]) -> Result<ParabolicIndex> {
    family.require_root_datum()?;
    if flag_ranks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidFlag(format!("ranks {flag_ranks:?} not strictly increasing")));
    }
    let r = family.r();
    let n = family.half();
    let mut members = BTreeSet::new();
    for &l in flag_ranks {
        let in_range = match family.kind() {
            Kind::GL | Kind::SL => (1..r).contains(&l),
            Kind::Sp | Kind::SO => (1..=n).contains(&l),
        };
        if !in_range {
            return Err(Error::InvalidFlag(format!("rank {l} out of range for {family}")));
        }
        match family.kind() {
            Kind::GL | Kind::SL | Kind::Sp => {
                members.insert(l - 1);
            }
            Kind::SO if r % 2 == 1 => {
                members.insert(l - 1);
            }
            Kind::SO => {
                if l + 1 == n {
                    members.insert(n - 2);
                    members.insert(n - 1);
                } else if l == n {
                    members.insert(n - 1);
                } else {
                    members.insert(l - 1);
                }
            }
        }
    }
    ParabolicIndex::new(family, members)
}

/// Diagonal blocks of the Levi factor, as sets of 1-based matrix
/// coordinates. Blocks are contiguous except for `SO(2n)` parabolics
/// containing `a{n-1},{n}` but not `a{n-1}+a{n}`, whose Levi is the
/// Lagrangian one with the two middle coordinates exchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviBlocks {
    pub r: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl LeviBlocks {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `(start, length)` pairs when every block is contiguous.
    pub fn ranges(&self) -> Option<Vec<(usize, usize)>> {
        self.blocks
            .iter()
            .map(|b| {
                let contiguous = b.windows(2).all(|w| w[1] == w[0] + 1);
                contiguous.then(|| (b[0], b.len()))
            })
            .collect()
    }
}

pub fn levi_blocks(family: GroupFamily, index: &ParabolicIndex) -> Result<LeviBlocks> {
    check_family(family, index.family())?;
    let r = family.r();
    let n = family.half();
    let mut cuts = BTreeSet::new();
    let mut swap_middle = false;
    match family.kind() {
        Kind::GL | Kind::SL => cuts.extend(index.members().iter().map(|&i| i + 1)),
        Kind::Sp | Kind::SO => {
            let odd_so = family.kind() == Kind::SO && r % 2 == 1;
            let even_so = family.kind() == Kind::SO && r % 2 == 0;
            let generic = if even_so { n.saturating_sub(2) } else { n - 1 };
            for &i in index.members() {
                if i < generic {
                    cuts.insert(i + 1);
                    cuts.insert(r - i - 1);
                }
            }
            if family.kind() == Kind::Sp && index.contains(n - 1) {
                cuts.insert(n);
            }
            if odd_so && index.contains(n - 1) {
                cuts.insert(n);
                cuts.insert(n + 1);
            }
            if even_so {
                let a = index.contains(n - 2);
                let b = index.contains(n - 1);
                match (a, b) {
                    (true, true) => cuts.extend([n - 1, n, n + 1]),
                    (false, true) => {
                        cuts.insert(n);
                    }
                    (true, false) => {
                        cuts.insert(n);
                        swap_middle = true;
                    }
                    (false, false) => {}
                }
            }
        }
    }
    let mut blocks = Vec::new();
    let mut start = 1;
    for &c in cuts.iter().chain(std::iter::once(&r)) {
        if c >= start {
            blocks.push((start..=c).collect::<Vec<_>>());
            start = c + 1;
        }
    }
    if swap_middle {
        for b in &mut blocks {
            for x in b.iter_mut() {
                if *x == n {
                    *x = n + 1;
                } else if *x == n + 1 {
                    *x = n;
                }
            }
            b.sort_unstable();
        }
    }
    Ok(LeviBlocks { r, blocks })
}

/// `P_I <= P_J` as subgroups, i.e. `I` contains `J`.
pub fn parabolic_leq(i: &ParabolicIndex, j: &ParabolicIndex) -> Result<bool> {
    check_family(i.family(), j.family())?;
    Ok(i.members().is_superset(j.members()))
}

pub(crate) fn check_family(a: GroupFamily, b: GroupFamily) -> Result<()> {
    if a != b {
        return Err(Error::FamilyMismatch(a.to_string(), b.to_string()));
    }
    Ok(())
}

/// Outcome of [`is_dominant_character`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceCheck {
    pub dominant: bool,
    /// Simple-root coefficients; `None` when the functional leaves the span
    /// of the simple roots (e.g. `det` on `GL`).
    pub coefficients: Option<Vec<Q>>,
}

pub fn is_dominant_character(
    family: GroupFamily,
    index: &ParabolicIndex,
    dchi: &RootFunctional,
) -> Result<DominanceCheck> {
    check_family(family, index.family())?;
    family.check_dim(dchi.0.len())?;
    let rs = RootSystem::new(family)?;
    if dchi.is_zero() {
        return Err(Error::NotACharacter("trivial functional".into()));
    }
    for (i, gamma) in rs.simple().iter().enumerate() {
        if index.contains(i) {
            continue;
        }
        let pairing = dchi.eval(&rs.coroot(gamma)?);
        if !pairing.is_zero() {
            return Err(Error::NotACharacter(format!(
                "{dchi} pairs to {pairing} with the coroot of {}",
                rs.simple_name(i)
            )));
        }
    }
    let simple_q: Vec<Vec<Q>> = rs.simple().iter().map(|s| to_q(&s.0)).collect();
    let coefficients = linalg::solve_combination(&simple_q, &to_q(&dchi.0));
    let dominant = coefficients
        .as_ref()
        .is_some_and(|c| c.iter().all(|q| q.is_integer() && !q.is_negative()));
    Ok(DominanceCheck { dominant, coefficients })
}

/// One character per `a` in `I`: its simple-root expansion vanishes on
/// `I \ {a}`, has minimal positive integer coefficient at `a`, and it kills
/// the coroots of the Levi simple roots.
pub fn character_generators(family: GroupFamily, index: &ParabolicIndex) -> Result<Vec<RootFunctional>> {
    check_family(family, index.family())?;
    if index.is_empty() {
        return Err(Error::NothingToGenerate);
    }
    let rs = RootSystem::new(family)?;
    let cartan = rs.cartan_matrix();
    let levi: Vec<usize> = (0..rs.simple().len()).filter(|i| !index.contains(*i)).collect();
    let mut out = Vec::new();
    for &alpha in index.members() {
        // sum_{g'} c_{g'} <g', g^vee> = -<alpha, g^vee> for every Levi simple g.
        let columns: Vec<Vec<Q>> = levi
            .iter()
            .map(|&gp| levi.iter().map(|&g| Q::from_integer(cartan[gp][g])).collect())
            .collect();
        let rhs: Vec<Q> = levi.iter().map(|&g| Q::from_integer(-cartan[alpha][g])).collect();
        let c_levi = if levi.is_empty() {
            Vec::new()
        } else {
            linalg::solve_combination(&columns, &rhs).expect("Levi Cartan matrix is nondegenerate")
        };
        let scale = c_levi.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let mut coeffs = vec![0i64; rs.simple().len()];
        coeffs[alpha] = scale;
        for (k, &g) in levi.iter().enumerate() {
            coeffs[g] = (c_levi[k] * scale).to_integer();
        }
        let mut chi = vec![0i64; family.cartan_dim()];
        for (s, &c) in rs.simple().iter().zip(&coeffs) {
            for (x, &y) in chi.iter_mut().zip(&s.0) {
                *x += c * y;
            }
        }
        out.push(RootFunctional(chi));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(v: &[i64]) -> RootFunctional {
        RootFunctional(v.to_vec())
    }

    fn idx(f: GroupFamily, m: &[usize]) -> ParabolicIndex {
        ParabolicIndex::new(f, m.iter().copied()).unwrap()
    }

    #[test]
    fn flags() {
        assert_eq!(parabolic_from_flag(GroupFamily::gl(4), &[2]).unwrap(), idx(GroupFamily::gl(4), &[1]));
        assert_eq!(parabolic_from_flag(GroupFamily::sp(4), &[2]).unwrap(), idx(GroupFamily::sp(4), &[1]));
        assert_eq!(parabolic_from_flag(GroupFamily::so(8), &[3]).unwrap(), idx(GroupFamily::so(8), &[2, 3]));
        assert_eq!(parabolic_from_flag(GroupFamily::so(8), &[4]).unwrap(), idx(GroupFamily::so(8), &[3]));
        assert_eq!(
            parabolic_from_flag(GroupFamily::so(4), &[1]).unwrap(),
            ParabolicIndex::borel(GroupFamily::so(4)).unwrap()
        );
        assert!(matches!(parabolic_from_flag(GroupFamily::gl(4), &[4]), Err(Error::InvalidFlag(_))));
        assert!(matches!(parabolic_from_flag(GroupFamily::sp(4), &[3]), Err(Error::InvalidFlag(_))));
        assert!(matches!(parabolic_from_flag(GroupFamily::gl(4), &[2, 1]), Err(Error::InvalidFlag(_))));
        assert!(matches!(
            parabolic_from_flag(GroupFamily::so(2), &[1]),
            Err(Error::UnsupportedRank { .. })
        ));
    }

    #[test]
    fn blocks() {
        let b = |f, m: &[usize]| levi_blocks(f, &idx(f, m)).unwrap();
        assert_eq!(b(GroupFamily::gl(4), &[1]).ranges().unwrap(), vec![(1, 2), (3, 2)]);
        assert_eq!(b(GroupFamily::sp(4), &[0]).ranges().unwrap(), vec![(1, 1), (2, 2), (4, 1)]);
        assert_eq!(b(GroupFamily::sp(4), &[1]).ranges().unwrap(), vec![(1, 2), (3, 2)]);
        assert_eq!(b(GroupFamily::so(5), &[1]).ranges().unwrap(), vec![(1, 2), (3, 1), (4, 2)]);
        assert_eq!(b(GroupFamily::so(4), &[0]).blocks, vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(b(GroupFamily::so(4), &[1]).ranges().unwrap(), vec![(1, 2), (3, 2)]);
        assert_eq!(b(GroupFamily::so(4), &[0, 1]).sizes(), vec![1, 1, 1, 1]);
        assert_eq!(b(GroupFamily::gl(3), &[]).sizes(), vec![3]);
    }

    #[test]
    fn leq() {
        let f = GroupFamily::gl(3);
        assert!(parabolic_leq(&idx(f, &[0, 1]), &idx(f, &[0])).unwrap());
        assert!(!parabolic_leq(&idx(f, &[0]), &idx(f, &[1])).unwrap());
        assert!(!parabolic_leq(&idx(f, &[]), &idx(f, &[1])).unwrap());
        assert!(parabolic_leq(&idx(f, &[1]), &idx(f, &[])).unwrap());
        let g = GroupFamily::gl(4);
        assert!(matches!(parabolic_leq(&idx(f, &[]), &idx(g, &[])), Err(Error::FamilyMismatch(..))));
    }

    #[test]
    fn dominant_characters() {
        let f = GroupFamily::gl(4);
        let i = idx(f, &[1]);
        let ok = is_dominant_character(f, &i, &rf(&[1, 1, -1, -1])).unwrap();
        assert!(ok.dominant);
        assert_eq!(ok.coefficients.unwrap(), to_q(&[1, 2, 1]));
        let neg = is_dominant_character(f, &i, &rf(&[-1, -1, 1, 1])).unwrap();
        assert!(!neg.dominant);
        assert_eq!(neg.coefficients.unwrap(), to_q(&[-1, -2, -1]));
        assert!(matches!(is_dominant_character(f, &i, &rf(&[0, 0, 0, 0])), Err(Error::NotACharacter(_))));
        assert!(matches!(is_dominant_character(f, &i, &rf(&[1, 0, 0, -1])), Err(Error::NotACharacter(_))));
        let det = is_dominant_character(f, &i, &rf(&[1, 1, 1, 1])).unwrap();
        assert_eq!(det, DominanceCheck { dominant: false, coefficients: None });
    }

    #[test]
    fn generators() {
        let f = GroupFamily::gl(4);
        assert_eq!(character_generators(f, &idx(f, &[1])).unwrap(), vec![rf(&[1, 1, -1, -1])]);
        let g = GroupFamily::gl(3);
        assert_eq!(
            character_generators(g, &idx(g, &[0, 1])).unwrap(),
            vec![rf(&[1, -1, 0]), rf(&[0, 1, -1])]
        );
        let s = GroupFamily::sp(4);
        assert_eq!(character_generators(s, &idx(s, &[1])).unwrap(), vec![rf(&[1, 1])]);
        assert_eq!(character_generators(s, &idx(s, &[0])).unwrap(), vec![rf(&[2, 0])]);
        assert!(matches!(character_generators(f, &idx(f, &[])), Err(Error::NothingToGenerate)));
    }
}
