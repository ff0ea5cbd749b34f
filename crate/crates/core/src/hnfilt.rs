//! Harder-Narasimhan filtrations of plain, symplectic and special
//! orthogonal bundles.
//!
//! The fast path follows the recursive construction: peel off the strongly
//! contradicting semistability subbundle (SCSS) of the current quotient
//! (resp. of `E_{m-1}^perp / E_{m-1}`) until it is semistable. The oracles
//! re-derive the result by enumerating every candidate filtration of the
//! atom multiset.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::bundle::{AnyBundle, Atom, PlainBundle, SoBundle, SpBundle};
use crate::exec::{self, Execution};
use crate::{Error, Result, Q};

/// Semistable quotients with strictly decreasing slopes, top first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filtration {
    quotients: Vec<PlainBundle>,
}

impl Filtration {
    pub fn new(quotients: Vec<PlainBundle>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::ZeroBundle);
        }
        if !satisfies_hn_conditions(&quotients) {
            return Err(Error::InvalidBundle("quotients are not semistable with decreasing slopes".into()));
        }
        Ok(Filtration { quotients })
    }

    pub fn quotients(&self) -> &[PlainBundle] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.quotients.iter().map(PlainBundle::slope).collect()
    }

    /// Ranks of the proper subbundles `E_1 .. E_{t-1}`.
    pub fn flag_ranks(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::new();
        for q in &self.quotients[..self.quotients.len() - 1] {
            acc += q.rank() as usize;
            out.push(acc);
        }
        out
    }

    /// Direct sum of the quotients.
    pub fn total(&self) -> PlainBundle {
        let atoms = self.quotients.iter().flat_map(|q| q.atoms().iter().copied()).collect();
        PlainBundle::new(atoms).expect("nonempty")
    }
}

fn satisfies_hn_conditions(quotients: &[PlainBundle]) -> bool {
    quotients.iter().all(PlainBundle::is_semistable)
        && quotients.windows(2).all(|w| w[0].slope() > w[1].slope())
}

/// Isotropic filtration `0 = E_0 < E_1 < .. < E_t` of a symplectic or
/// orthogonal bundle, recorded by its quotients and `E_t^perp / E_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicFiltration {
    quotients: Vec<PlainBundle>,
    middle: Option<PlainBundle>,
    rank_flag: bool,
}

impl IsotropicFiltration {
    pub fn quotients(&self) -> &[PlainBundle] {
        &self.quotients
    }

    /// `E_t^perp / E_t`; `None` when `E_t` is Lagrangian.
    pub fn middle(&self) -> Option<&PlainBundle> {
        self.middle.as_ref()
    }

    pub fn middle_rank(&self) -> u32 {
        self.middle.as_ref().map_or(0, PlainBundle::rank)
    }

    /// Set for `SO(2n)` when `E_t` has rank `n - 1`.
    pub fn rank_flag(&self) -> bool {
        self.rank_flag
    }

    pub fn is_trivial(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.quotients.iter().map(PlainBundle::slope).collect()
    }

    /// Ranks of `E_1 .. E_t`.
    pub fn flag_ranks(&self) -> Vec<usize> {
        self.quotients
            .iter()
            .scan(0usize, |acc, q| {
                *acc += q.rank() as usize;
                Some(*acc)
            })
            .collect()
    }

    pub fn isotropic_rank(&self) -> u32 {
        self.quotients.iter().map(PlainBundle::rank).sum()
    }
}

/// All atoms of maximal slope: the maximal-rank subbundle among those of
/// maximal slope.
pub fn scss(b: &PlainBundle) -> PlainBundle {
    let top = b.max_slope();
    PlainBundle::new(b.atoms().iter().filter(|a| a.slope() == top).copied().collect()).expect("nonempty")
}

fn remove_atoms(b: &[Atom], taken: &[Atom]) -> Vec<Atom> {
    let mut rest = b.to_vec();
    for t in taken {
        let pos = rest.iter().position(|a| a == t).expect("sub-multiset");
        rest.remove(pos);
    }
    rest
}

pub fn hn_filtration(b: &PlainBundle) -> Filtration {
    let mut quotients = Vec::new();
    let mut rest = b.atoms().to_vec();
    while !rest.is_empty() {
        let current = PlainBundle::new(rest.clone()).expect("nonempty");
        let g = scss(&current);
        rest = remove_atoms(&rest, g.atoms());
        quotients.push(g);
    }
    Filtration { quotients }
}

/// SCSS of a self-dual bundle: maximal-slope positive atoms, or nothing once
/// the maximal slope is `<= 0`.
fn isotropic_steps(positive: &[Atom]) -> Vec<PlainBundle> {
    let mut quotients = Vec::new();
    let mut rest = positive.to_vec();
    while let Some(top) = rest.iter().map(Atom::slope).max() {
        if !top.is_positive() {
            break;
        }
        let g: Vec<Atom> = rest.iter().filter(|a| a.slope() == top).copied().collect();
        rest = remove_atoms(&rest, &g);
        quotients.push(PlainBundle::new(g).expect("nonempty"));
    }
    quotients
}

fn middle_of(zero: &[Atom]) -> Option<PlainBundle> {
    (!zero.is_empty()).then(|| PlainBundle::new(zero.to_vec()).expect("nonempty"))
}

pub fn hn_filtration_sp(b: &SpBundle) -> IsotropicFiltration {
    IsotropicFiltration {
        quotients: isotropic_steps(b.positive()),
        middle: middle_of(b.zero_atoms()),
        rank_flag: false,
    }
}

pub fn hn_filtration_so(b: &SoBundle) -> Result<IsotropicFiltration> {
    let r = b.rank() as usize;
    if r < 3 {
        return Err(Error::UnsupportedRank { family: format!("SO({r})"), rank: r });
    }
    let quotients = isotropic_steps(b.positive());
    let iso: usize = quotients.iter().map(|q| q.rank() as usize).sum();
    Ok(IsotropicFiltration {
        rank_flag: r % 2 == 0 && iso + 1 == r / 2,
        quotients,
        middle: middle_of(b.zero_atoms()),
    })
}

/// Adds the co-isotropic terms: `F_1 .. F_t, middle, F_t^* .. F_1^*`.
pub fn extend_with_perps(f: &IsotropicFiltration) -> Filtration {
    let mut quotients = f.quotients.clone();
    quotients.extend(f.middle.clone());
    quotients.extend(f.quotients.iter().rev().map(PlainBundle::dual));
    Filtration { quotients }
}

const ORACLE_RANK_LIMIT: u32 = 8;

/// Every ordered partition of the atom multiset into semistable blocks of
/// strictly decreasing slope, deduplicated as filtrations.
pub fn enumerate_hn_candidates(b: &PlainBundle, mode: Execution) -> Result<Vec<Filtration>> {
    if b.rank() > ORACLE_RANK_LIMIT {
        return Err(Error::TooLarge(format!("rank {} exceeds oracle limit", b.rank())));
    }
    let atoms = b.atoms();
    let full = (1u32 << atoms.len()) - 1;
    let firsts: Vec<u32> = (1..=full).collect();
    let per_first = exec::map(mode, &firsts, |&first| {
        let mut found = BTreeSet::new();
        let mut chain = vec![first];
        ordered_partitions(full & !first, &mut chain, &mut |blocks| {
            let quotients: Vec<PlainBundle> = blocks.iter().map(|&m| bundle_of(atoms, m)).collect();
            if satisfies_hn_conditions(&quotients) {
                found.insert(Filtration { quotients });
            }
        });
        found
    });
    let all: BTreeSet<Filtration> = per_first.into_iter().flatten().collect();
    Ok(all.into_iter().collect())
}

fn bundle_of(atoms: &[Atom], mask: u32) -> PlainBundle {
    PlainBundle::new((0..atoms.len()).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i]).collect())
        .expect("nonempty block")
}

/// Calls `visit` with every ordered sequence of nonempty disjoint blocks
/// covering `remaining`, prefixed by `chain`.
fn ordered_partitions(remaining: u32, chain: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if remaining == 0 {
        visit(chain);
        return;
    }
    let mut sub = remaining;
    while sub != 0 {
        chain.push(sub);
        ordered_partitions(remaining & !sub, chain, visit);
        chain.pop();
        sub = (sub - 1) & remaining;
    }
}

/// Every isotropic chain over sub-multisets of `P + P^*` whose quotients are
/// semistable with strictly decreasing positive slopes and whose
/// `E_t^perp / E_t` is semistable. The zero block is opaque: its internal
/// isotropic subbundles have slope `<= 0` and never qualify.
pub fn enumerate_isotropic_candidates(
    positive: &[Atom],
    zero: &[Atom],
    so_even_half: Option<usize>,
    mode: Execution,
) -> Result<Vec<IsotropicFiltration>> {
    let rank: u32 = 2 * positive.iter().map(|a| a.rank).sum::<u32>() + zero.iter().map(|a| a.rank).sum::<u32>();
    if rank > ORACLE_RANK_LIMIT {
        return Err(Error::TooLarge(format!("rank {rank} exceeds oracle limit")));
    }
    let k = positive.len();
    // Index 2i is the positive atom i, 2i+1 its dual partner.
    let indexed: Vec<Atom> = positive.iter().flat_map(|a| [*a, a.dual()]).collect();
    let selections: Vec<u32> = (0..3u32.pow(k as u32))
        .map(|mut code| {
            let mut mask = 0u32;
            for i in 0..k {
                match code % 3 {
                    1 => mask |= 1 << (2 * i),
                    2 => mask |= 1 << (2 * i + 1),
                    _ => {}
                }
                code /= 3;
            }
            mask
        })
        .collect();
    let found = exec::map(mode, &selections, |&sel| {
        let mut out = BTreeSet::new();
        // Remaining atoms: pairs with neither member selected, plus the zero block.
        let mut rest: Vec<Atom> = zero.to_vec();
        for i in 0..k {
            if sel >> (2 * i) & 3 == 0 {
                rest.push(indexed[2 * i]);
                rest.push(indexed[2 * i + 1]);
            }
        }
        let middle = (!rest.is_empty()).then(|| PlainBundle::new(rest).expect("nonempty"));
        if middle.as_ref().is_some_and(|m| !m.is_semistable()) {
            return out;
        }
        let iso_rank: usize = (0..indexed.len()).filter(|i| sel >> i & 1 == 1).map(|i| indexed[i].rank as usize).sum();
        let rank_flag = so_even_half.is_some_and(|n| iso_rank + 1 == n);
        let mut chain = Vec::new();
        ordered_partitions(sel, &mut chain, &mut |blocks| {
            let quotients: Vec<PlainBundle> = blocks.iter().map(|&m| bundle_of(&indexed, m)).collect();
            let positive_slopes = quotients.last().is_none_or(|q| q.slope().is_positive());
            if positive_slopes && satisfies_hn_conditions(&quotients) {
                out.insert(IsotropicFiltration { quotients, middle: middle.clone(), rank_flag });
            }
        });
        out
    });
    let all: BTreeSet<IsotropicFiltration> = found.into_iter().flatten().collect();
    Ok(all.into_iter().collect())
}

/// Exhaustively checks that exactly one candidate satisfies the HN
/// conditions and that it is the fast-path output.
pub fn hn_uniqueness_oracle(b: &AnyBundle) -> Result<bool> {
    hn_uniqueness_oracle_with(b, Execution::default())
}

pub fn hn_uniqueness_oracle_with(b: &AnyBundle, mode: Execution) -> Result<bool> {
    match b {
        AnyBundle::Plain(_) | AnyBundle::Sl(_) => {
            let plain = b.underlying();
            let candidates = enumerate_hn_candidates(&plain, mode)?;
            Ok(candidates.len() == 1 && candidates[0] == hn_filtration(&plain))
        }
        AnyBundle::Sp(sp) => {
            let candidates = enumerate_isotropic_candidates(sp.positive(), sp.zero_atoms(), None, mode)?;
            Ok(candidates.len() == 1 && candidates[0] == hn_filtration_sp(sp))
        }
        AnyBundle::So(so) => {
            let fast = hn_filtration_so(so)?;
            let r = so.rank() as usize;
            let half = (r % 2 == 0).then_some(r / 2);
            let candidates = enumerate_isotropic_candidates(so.positive(), so.zero_atoms(), half, mode)?;
            Ok(candidates.len() == 1 && candidates[0] == fast)
        }
    }
}

/// True iff the filtration witnesses semistability (a single quotient for
/// plain bundles, no positive quotient for decorated ones).
pub fn is_trivial_filtration(b: &AnyBundle) -> Result<bool> {
    Ok(match b {
        AnyBundle::Plain(_) | AnyBundle::Sl(_) => hn_filtration(&b.underlying()).len() == 1,
        AnyBundle::Sp(sp) => hn_filtration_sp(sp).is_trivial(),
        AnyBundle::So(so) if so.rank() == 2 => true,
        AnyBundle::So(so) => hn_filtration_so(so)?.is_trivial(),
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn pb(p: &[(i64, u32)]) -> PlainBundle {
        PlainBundle::from_pairs(p).unwrap()
    }

    fn at(d: i64, r: u32) -> Atom {
        Atom { degree: d, rank: r }
    }

    /// Brute force: maximize slope, then rank, over all sub-multisets.
    fn scss_brute(b: &PlainBundle) -> PlainBundle {
        let atoms = b.atoms();
        let mut best: Option<PlainBundle> = None;
        for mask in 1u32..1 << atoms.len() {
            let s = bundle_of(atoms, mask);
            let better = match &best {
                None => true,
                Some(cur) => (s.slope(), s.rank()) > (cur.slope(), cur.rank()),
            };
            if better {
                best = Some(s);
            }
        }
        best.unwrap()
    }

    #[test]
    fn scss_examples() {
        for b in [
            pb(&[(3, 1), (1, 2), (1, 2), (-2, 1)]),
            pb(&[(0, 1), (0, 3)]),
            pb(&[(2, 2), (1, 1)]),
        ] {
            assert_eq!(scss(&b), scss_brute(&b));
        }
        assert_eq!(scss(&pb(&[(3, 1), (1, 2), (1, 2), (-2, 1)])), pb(&[(3, 1)]));
        assert_eq!(scss(&pb(&[(2, 2), (1, 1)])), pb(&[(2, 2), (1, 1)]));
    }

    #[test]
    fn plain_filtrations() {
        let f = hn_filtration(&pb(&[(3, 1), (1, 2), (1, 2), (-2, 1)]));
        assert_eq!(f.quotients(), &[pb(&[(3, 1)]), pb(&[(1, 2), (1, 2)]), pb(&[(-2, 1)])]);
        assert_eq!(f.slopes(), vec![Q::from_integer(3), Q::new(1, 2), Q::from_integer(-2)]);
        assert_eq!(f.flag_ranks(), vec![1, 5]);
        assert_eq!(hn_filtration(&pb(&[(1, 2), (2, 4)])).len(), 1);
        assert_eq!(hn_filtration(&pb(&[(2, 1), (1, 1), (0, 1)])).len(), 3);
    }

    #[test]
    fn symplectic_filtrations() {
        let f = hn_filtration_sp(&SpBundle::new(vec![at(2, 1)], 2).unwrap());
        assert_eq!(f.quotients(), &[pb(&[(2, 1)])]);
        assert_eq!(f.middle_rank(), 2);
        let t = hn_filtration_sp(&SpBundle::new(vec![], 4).unwrap());
        assert!(t.is_trivial());
        assert_eq!(t.middle_rank(), 4);
        let l = hn_filtration_sp(&SpBundle::new(vec![at(3, 1), at(1, 2)], 0).unwrap());
        assert_eq!(l.quotients(), &[pb(&[(3, 1)]), pb(&[(1, 2)])]);
        assert!(l.middle().is_none());
    }

    #[test]
    fn orthogonal_filtrations() {
        let f = hn_filtration_so(&SoBundle::new(vec![at(1, 1)], 2).unwrap()).unwrap();
        assert!(f.rank_flag());
        assert_eq!(f.middle_rank(), 2);
        let g = hn_filtration_so(&SoBundle::new(vec![at(2, 1), at(1, 1)], 1).unwrap()).unwrap();
        assert_eq!(g.quotients(), &[pb(&[(2, 1)]), pb(&[(1, 1)])]);
        assert!(!g.rank_flag());
        assert!(hn_filtration_so(&SoBundle::new(vec![], 6).unwrap()).unwrap().is_trivial());
        assert!(matches!(
            hn_filtration_so(&SoBundle::new(vec![at(1, 1)], 0).unwrap()),
            Err(Error::UnsupportedRank { .. })
        ));
    }

    #[test]
    fn perps() {
        let sp = SpBundle::new(vec![at(2, 1)], 2).unwrap();
        let e = extend_with_perps(&hn_filtration_sp(&sp));
        assert_eq!(e.quotients(), &[pb(&[(2, 1)]), pb(&[(0, 2)]), pb(&[(-2, 1)])]);
        assert_eq!(e, hn_filtration(&sp.underlying()));
        let triv = extend_with_perps(&hn_filtration_sp(&SpBundle::new(vec![], 4).unwrap()));
        assert_eq!(triv.quotients(), &[pb(&[(0, 4)])]);
        let lag = SpBundle::new(vec![at(3, 1), at(1, 2)], 0).unwrap();
        let e = extend_with_perps(&hn_filtration_sp(&lag));
        assert_eq!(e.quotients(), &[pb(&[(3, 1)]), pb(&[(1, 2)]), pb(&[(-1, 2)]), pb(&[(-3, 1)])]);
    }

    #[test]
    fn oracle_examples() {
        let two = AnyBundle::Plain(pb(&[(3, 1), (-2, 1)]));
        assert!(hn_uniqueness_oracle(&two).unwrap());
        let cands = enumerate_hn_candidates(&pb(&[(3, 1), (-2, 1)]), Execution::Sequential).unwrap();
        assert_eq!(cands.len(), 1);
        assert!(hn_uniqueness_oracle(&AnyBundle::Plain(pb(&[(0, 1), (0, 1)]))).unwrap());
        let sp = AnyBundle::Sp(SpBundle::new(vec![at(2, 1), at(1, 1)], 0).unwrap());
        assert!(hn_uniqueness_oracle(&sp).unwrap());
        let big = AnyBundle::Plain(pb(&[(1, 9)]));
        assert!(matches!(hn_uniqueness_oracle(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn so_even_flagged_case_is_unique() {
        let so = AnyBundle::So(SoBundle::new(vec![at(1, 1)], 2).unwrap());
        assert!(hn_uniqueness_oracle_with(&so, Execution::Sequential).unwrap());
    }
}
