//! Canonical reductions of torus-split principal bundles and
//! Harder-Narasimhan types.
//!
//! A torus-split bundle is an integer vector `a` in Cartan coordinates. Its
//! canonical reduction is reported through the dominant representative
//! `mu` of the Weyl orbit of `a`, together with the parabolic
//! `I = {alpha simple : alpha(mu) > 0}`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::bundle::{adjoint_bundle, AnyBundle};
use crate::exec::{self, Execution};
use crate::hnfilt::{hn_filtration, hn_filtration_so, hn_filtration_sp, Filtration};
use crate::lattice::lattice_tower;
use crate::parabolic::{character_generators, parabolic_from_flag, ParabolicIndex};
use crate::rootsys::{CartanVector, GroupFamily, Kind, RootFunctional, RootSystem};
use crate::{Error, Result, Q};

/// Dominant rational Cartan vector of slopes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HNType {
    pub family: GroupFamily,
    pub mu: CartanVector,
}

impl HNType {
    pub fn is_dominant(&self) -> Result<bool> {
        Ok(RootSystem::new(self.family)?.is_dominant(&self.mu))
    }

    /// The parabolic forced by the type.
    pub fn parabolic(&self) -> Result<ParabolicIndex> {
        forced_parabolic(&RootSystem::new(self.family)?, &self.mu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalReduction {
    pub family: GroupFamily,
    pub index: ParabolicIndex,
    pub mu: HNType,
    /// Roots of the nilradical: `alpha(mu) > 0`.
    pub ad_positive_roots: Vec<RootFunctional>,
    /// Roots of the parabolic: `alpha(mu) >= 0` (the Cartan is implicit).
    pub ad_parabolic_roots: Vec<RootFunctional>,
}

impl CanonicalReduction {
    /// Reduction attached to a dominant rational vector.
    pub fn from_dominant(family: GroupFamily, mu: CartanVector) -> Result<Self> {
        let rs = RootSystem::new(family)?;
        family.check_dim(mu.len())?;
        if !rs.is_dominant(&mu) {
            return Err(Error::InvalidReduction(format!("{mu} is not dominant for {family}")));
        }
        let index = forced_parabolic(&rs, &mu)?;
        let roots = rs.roots();
        let ad_positive_roots = roots.iter().filter(|r| r.eval(&mu).is_positive()).cloned().collect();
        let ad_parabolic_roots = roots.iter().filter(|r| !r.eval(&mu).is_negative()).cloned().collect();
        Ok(CanonicalReduction {
            family,
            index,
            mu: HNType { family, mu },
            ad_positive_roots,
            ad_parabolic_roots,
        })
    }

    /// Dimension of the parabolic Lie algebra.
    pub fn ad_parabolic_rank(&self) -> usize {
        self.ad_parabolic_roots.len() + self.family.torus_rank()
    }

    /// `deg ad` of the reduction: the sum of `alpha(mu)` over parabolic roots.
    pub fn ad_degree(&self) -> Q {
        self.ad_parabolic_roots.iter().map(|r| r.eval(&self.mu.mu)).sum()
    }
}

fn forced_parabolic(rs: &RootSystem, mu: &CartanVector) -> Result<ParabolicIndex> {
    let members = rs.simple().iter().enumerate().filter(|(_, s)| s.eval(mu).is_positive()).map(|(i, _)| i);
    ParabolicIndex::new(rs.family(), members)
}

fn integral_point(family: GroupFamily, a: &CartanVector) -> Result<Vec<i64>> {
    family.check_dim(a.len())?;
    let ints = a.to_ints().ok_or_else(|| Error::NotIntegral(a.to_string()))?;
    if family.kind() == Kind::SL && ints.iter().sum::<i64>() != 0 {
        return Err(Error::NotInKernelLattice(a.to_string()));
    }
    Ok(ints)
}

pub fn canonical_reduction(family: GroupFamily, a: &CartanVector) -> Result<CanonicalReduction> {
    let rs = RootSystem::new(family)?;
    integral_point(family, a)?;
    CanonicalReduction::from_dominant(family, rs.dominant_representative(a)?)
}

/// The same reduction read off the orthogonal HN filtration of the adjoint
/// bundle: the roots whose line atoms land in the top isotropic step.
pub fn atiyah_bott_reduction(family: GroupFamily, a: &CartanVector) -> Result<CanonicalReduction> {
    let rs = RootSystem::new(family)?;
    integral_point(family, a)?;
    let mu = rs.dominant_representative(a)?;
    let ad = adjoint_bundle(family, &mu)?;
    let mut isotropic_degrees: Vec<i64> = if ad.orthogonal.rank() >= 3 {
        let filt = hn_filtration_so(&ad.orthogonal)?;
        filt.quotients().iter().flat_map(|q| q.atoms().iter().map(|x| x.degree)).collect()
    } else {
        Vec::new()
    };
    let mut nilradical = Vec::new();
    for (root, d) in &ad.root_degrees {
        if let Some(pos) = isotropic_degrees.iter().position(|x| x == d) {
            isotropic_degrees.swap_remove(pos);
            nilradical.push(root.clone());
        }
    }
    if !isotropic_degrees.is_empty() {
        return Err(Error::InvalidReduction("isotropic step is not a union of root lines".into()));
    }
    let index = ParabolicIndex::new(
        family,
        rs.simple().iter().enumerate().filter(|(_, s)| nilradical.contains(s)).map(|(i, _)| i),
    )?;
    let nil: BTreeSet<&RootFunctional> = nilradical.iter().collect();
    // The parabolic is the perp of the nilradical under the Killing pairing
    // that sends a root line to the line of its negative.
    let ad_parabolic_roots = rs.roots().into_iter().filter(|r| !nil.contains(&r.neg())).collect();
    let ad_positive_roots = rs.roots().into_iter().filter(|r| nil.contains(r)).collect();
    Ok(CanonicalReduction { family, index, mu: HNType { family, mu }, ad_positive_roots, ad_parabolic_roots })
}

/// Slopes of the HN filtration, repeated by rank; for `Sp`/`SO` the positive
/// slopes followed by zeros.
///
/// For `SO(2n)` atoms cannot tell the two families of Lagrangian subbundles
/// apart, so the last coordinate is always reported nonnegative.
pub fn hn_type(b: &AnyBundle) -> Result<HNType> {
    let family = b.family();
    let repeat = |slopes: Vec<(Q, u32)>| -> Vec<Q> {
        slopes.into_iter().flat_map(|(s, r)| std::iter::repeat_n(s, r as usize)).collect()
    };
    let plain = |f: Filtration| repeat(f.quotients().iter().map(|q| (q.slope(), q.rank())).collect());
    let mu = match b {
        AnyBundle::Plain(p) => plain(hn_filtration(p)),
        AnyBundle::Sl(s) => plain(hn_filtration(s.underlying())),
        AnyBundle::Sp(_) | AnyBundle::So(_) => {
            let filt = match b {
                AnyBundle::Sp(s) => hn_filtration_sp(s),
                AnyBundle::So(s) => isotropic_so(s)?,
                _ => unreachable!(),
            };
            let mut mu = repeat(filt.quotients().iter().map(|q| (q.slope(), q.rank())).collect());
            mu.resize(family.half(), Q::zero());
            mu
        }
    };
    Ok(HNType { family, mu: CartanVector(mu) })
}

fn isotropic_so(s: &crate::bundle::SoBundle) -> Result<crate::hnfilt::IsotropicFiltration> {
    if s.rank() < 3 {
        // SO(2) has no proper isotropic flags beyond the line itself.
        return Err(Error::UnsupportedRank { family: "SO".into(), rank: s.rank() as usize });
    }
    hn_filtration_so(s)
}

/// Parabolic stabilizing the HN flag of `b`, computed from its subbundle
/// ranks alone.
pub fn filtration_parabolic(b: &AnyBundle) -> Result<ParabolicIndex> {
    let family = b.family();
    let ranks = match b {
        AnyBundle::Plain(p) => hn_filtration(p).flag_ranks(),
        AnyBundle::Sl(s) => hn_filtration(s.underlying()).flag_ranks(),
        AnyBundle::Sp(s) => hn_filtration_sp(s).flag_ranks(),
        AnyBundle::So(s) => isotropic_so(s)?.flag_ranks(),
    };
    parabolic_from_flag(family, &ranks)
}

/// Outcome of the Levi-semistability and character-degree tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BhReport {
    pub levi_semistable: bool,
    pub char_degrees: Vec<Q>,
}

impl BhReport {
    pub fn holds(&self) -> bool {
        self.levi_semistable && self.char_degrees.iter().all(Signed::is_positive)
    }
}

/// Tests the reduction of the torus-split bundle `b` to the standard
/// parabolic `I` (`b` read as the degree vector of the Levi reduction).
pub fn bh_conditions(family: GroupFamily, index: &ParabolicIndex, b: &CartanVector) -> Result<BhReport> {
    let rs = RootSystem::new(family)?;
    family.check_dim(b.len())?;
    let levi_semistable = rs.levi_roots(index).iter().all(|r| r.eval(b).is_zero());
    let char_degrees = if index.is_empty() {
        Vec::new()
    } else {
        character_generators(family, index)?.iter().map(|chi| chi.eval(b)).collect()
    };
    Ok(BhReport { levi_semistable, char_degrees })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BhCheck {
    pub levi_semistable: bool,
    pub char_degrees: Vec<i64>,
}

pub fn check_bh(family: GroupFamily, a: &CartanVector, red: &CanonicalReduction) -> Result<BhCheck> {
    if red.family != family {
        return Err(Error::InvalidReduction(format!("reduction of {} checked against {family}", red.family)));
    }
    let rs = RootSystem::new(family)?;
    integral_point(family, a)?;
    let mu = rs.dominant_representative(a)?;
    if mu != red.mu.mu {
        return Err(Error::InvalidReduction(format!("type {} does not match {}", red.mu.mu, mu)));
    }
    let report = bh_conditions(family, &red.index, &mu)?;
    Ok(BhCheck {
        levi_semistable: report.levi_semistable,
        char_degrees: report.char_degrees.iter().map(|q| q.to_integer()).collect(),
    })
}

/// Exhaustive maximization of `deg ad` over standard parabolics and Weyl
/// conjugates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdDegreeMax {
    pub max_degree: i64,
    pub argmax: Vec<(ParabolicIndex, CartanVector)>,
    /// Every `(I, w.a)` pair with its degree, in enumeration order.
    pub all: Vec<(ParabolicIndex, CartanVector, i64)>,
}

impl AdDegreeMax {
    /// Attaining pairs whose parabolic is maximal (no attainer has a
    /// strictly larger parabolic).
    pub fn maximal_attainers(&self) -> Vec<&(ParabolicIndex, CartanVector)> {
        self.argmax
            .iter()
            .filter(|(i, _)| {
                !self.argmax.iter().any(|(j, _)| j.members().is_subset(i.members()) && j.members() != i.members())
            })
            .collect()
    }
}

pub const AD_ORACLE_DIM_LIMIT: usize = 5;

pub fn ad_degree_max_oracle(family: GroupFamily, a: &CartanVector, mode: Execution) -> Result<AdDegreeMax> {
    if family.cartan_dim() > AD_ORACLE_DIM_LIMIT {
        return Err(Error::TooLarge(format!(
            "degree oracle limited to Cartan dimension {AD_ORACLE_DIM_LIMIT}, got {}",
            family.cartan_dim()
        )));
    }
    let rs = RootSystem::new(family)?;
    integral_point(family, a)?;
    let orbit = rs.weyl_orbit(a)?;
    let subsets = ParabolicIndex::all_subsets(family)?;
    let pairs: Vec<(usize, usize)> =
        (0..subsets.len()).flat_map(|i| (0..orbit.len()).map(move |w| (i, w))).collect();
    let parabolic_roots: Vec<Vec<RootFunctional>> = subsets.iter().map(|i| rs.parabolic_roots(i)).collect();
    let degrees = exec::map(mode, &pairs, |&(i, w)| {
        parabolic_roots[i].iter().map(|r| r.eval(&orbit[w])).sum::<Q>().to_integer()
    });
    let max_degree = degrees.iter().copied().max().expect("nonempty enumeration");
    let all: Vec<(ParabolicIndex, CartanVector, i64)> = pairs
        .iter()
        .zip(&degrees)
        .map(|(&(i, w), &d)| (subsets[i].clone(), orbit[w].clone(), d))
        .collect();
    let argmax = all.iter().filter(|(_, _, d)| *d == max_degree).map(|(i, b, _)| (i.clone(), b.clone())).collect();
    Ok(AdDegreeMax { max_degree, argmax, all })
}

/// Root-level closure of the nilradical and of the parabolic under addition.
pub fn bracket_closure_check(red: &CanonicalReduction) -> bool {
    let Ok(rs) = RootSystem::new(red.family) else {
        return false;
    };
    closed_under_addition(&rs, &red.ad_positive_roots) && closed_under_addition(&rs, &red.ad_parabolic_roots)
}

pub fn closed_under_addition(rs: &RootSystem, set: &[RootFunctional]) -> bool {
    let members: BTreeSet<&RootFunctional> = set.iter().collect();
    set.iter().all(|a| {
        set.iter().all(|b| {
            let s = a.add(b);
            !rs.is_root(&s) || members.contains(&s)
        })
    })
}

/// Degree vector of the underlying `GL(2n)` bundle of a torus-split
/// `Sp(2n)` bundle.
pub fn sp_to_gl(a: &[i64]) -> Vec<i64> {
    a.iter().copied().chain(a.iter().rev().map(|x| -x)).collect()
}

/// Same embedding on rational types.
pub fn sp_type_to_gl(mu: &CartanVector) -> CartanVector {
    CartanVector(mu.coords().iter().copied().chain(mu.coords().iter().rev().map(|x| -x)).collect())
}

/// `hn_type` equals the topological type exactly for semistable bundles;
/// this returns the topological type of a torus-split bundle as the central
/// projection of its HN type.
pub fn central_type(t: &HNType) -> Result<CartanVector> {
    Ok(lattice_tower(t.family)?.central_part(&t.mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{Atom, PlainBundle, SpBundle};

    fn cv(v: &[i64]) -> CartanVector {
        CartanVector::from_ints(v)
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn sp4_examples() {
        let f = GroupFamily::sp(4);
        let red = canonical_reduction(f, &cv(&[2, 1])).unwrap();
        assert_eq!(red.index, ParabolicIndex::borel(f).unwrap());
        assert_eq!(red.ad_parabolic_rank(), 6);
        let red = canonical_reduction(f, &cv(&[-2, 1])).unwrap();
        assert_eq!(red.mu.mu, cv(&[2, 1]));
        let red = canonical_reduction(f, &cv(&[1, 1])).unwrap();
        assert_eq!(red.index, ParabolicIndex::new(f, [1]).unwrap());
    }

    #[test]
    fn zero_is_semistable() {
        for f in [GroupFamily::gl(3), GroupFamily::sl(3), GroupFamily::sp(4), GroupFamily::so(5)] {
            let red = canonical_reduction(f, &CartanVector::zero(f.cartan_dim())).unwrap();
            assert!(red.index.is_empty());
            let bh = check_bh(f, &CartanVector::zero(f.cartan_dim()), &red).unwrap();
            assert_eq!(bh, BhCheck { levi_semistable: true, char_degrees: vec![] });
            assert!(bracket_closure_check(&red));
        }
    }

    #[test]
    fn errors() {
        let f = GroupFamily::gl(2);
        assert!(matches!(
            canonical_reduction(f, &CartanVector(vec![q(1, 2), q(0, 1)])),
            Err(Error::NotIntegral(_))
        ));
        assert!(matches!(
            canonical_reduction(GroupFamily::so(2), &cv(&[1])),
            Err(Error::UnsupportedRank { .. })
        ));
        let red = canonical_reduction(f, &cv(&[1, 0])).unwrap();
        assert!(matches!(check_bh(f, &cv(&[2, 0]), &red), Err(Error::InvalidReduction(_))));
        assert!(matches!(
            ad_degree_max_oracle(GroupFamily::gl(6), &cv(&[0; 6]), Execution::Sequential),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn bh_examples() {
        let f = GroupFamily::gl(4);
        let i = ParabolicIndex::new(f, [1]).unwrap();
        let rep = bh_conditions(f, &i, &cv(&[3, 2, 1, 0])).unwrap();
        assert_eq!(rep.char_degrees, vec![Q::from_integer(4)]);
        assert!(!rep.levi_semistable);
        let g = GroupFamily::gl(3);
        let red = canonical_reduction(g, &cv(&[1, 1, 0])).unwrap();
        assert_eq!(red.index, ParabolicIndex::new(g, [1]).unwrap());
        let bh = check_bh(g, &cv(&[1, 1, 0]), &red).unwrap();
        assert!(bh.levi_semistable);
        assert_eq!(bh.char_degrees.len(), 1);
        assert!(bh.char_degrees[0] > 0);
    }

    #[test]
    fn oracle_examples() {
        let m = ad_degree_max_oracle(GroupFamily::gl(2), &cv(&[1, 0]), Execution::Sequential).unwrap();
        assert_eq!(m.max_degree, 1);
        assert_eq!(m.argmax, vec![(ParabolicIndex::borel(GroupFamily::gl(2)).unwrap(), cv(&[1, 0]))]);

        let f = GroupFamily::sp(4);
        let m = ad_degree_max_oracle(f, &cv(&[1, 1]), Execution::Parallel).unwrap();
        assert_eq!(m.max_degree, 6);
        let maximal = m.maximal_attainers();
        assert_eq!(maximal.len(), 1);
        assert_eq!(maximal[0].0, ParabolicIndex::new(f, [1]).unwrap());
        assert_eq!(maximal[0].1, cv(&[1, 1]));

        let z = ad_degree_max_oracle(GroupFamily::so(5), &cv(&[0, 0]), Execution::Sequential).unwrap();
        assert_eq!(z.max_degree, 0);
        assert_eq!(z.argmax.len(), z.all.len());
    }

    #[test]
    fn atiyah_bott_agrees() {
        let cases: &[(GroupFamily, &[i64])] = &[
            (GroupFamily::gl(3), &[2, -1, 0]),
            (GroupFamily::sp(4), &[1, 1]),
            (GroupFamily::so(4), &[1, 0]),
            (GroupFamily::so(5), &[0, -2]),
            (GroupFamily::gl(1), &[5]),
        ];
        for &(f, a) in cases {
            assert_eq!(atiyah_bott_reduction(f, &cv(a)).unwrap(), canonical_reduction(f, &cv(a)).unwrap());
        }
    }

    #[test]
    fn bracket_closure_adversarial() {
        let f = GroupFamily::sp(4);
        let red = canonical_reduction(f, &cv(&[1, 0])).unwrap();
        let names: Vec<String> = red.ad_positive_roots.iter().map(|r| r.to_string()).collect();
        assert_eq!(names.len(), 3);
        assert!(bracket_closure_check(&red));
        let rs = RootSystem::new(f).unwrap();
        // {e1-e2, 2e2} is not closed: their sum e1+e2 is a root.
        assert!(!closed_under_addition(&rs, &[RootFunctional(vec![1, -1]), RootFunctional(vec![0, 2])]));
    }

    #[test]
    fn types() {
        let p = PlainBundle::from_pairs(&[(3, 1), (1, 2), (1, 2), (-2, 1)]).unwrap();
        let t = hn_type(&AnyBundle::Plain(p)).unwrap();
        let h = q(1, 2);
        assert_eq!(t.mu, CartanVector(vec![Q::from_integer(3), h, h, h, h, Q::from_integer(-2)]));
        let s = SpBundle::new(vec![Atom::new(2, 1).unwrap()], 2).unwrap();
        assert_eq!(hn_type(&AnyBundle::Sp(s)).unwrap().mu, cv(&[2, 0]));
        let ss = PlainBundle::from_pairs(&[(3, 2), (3, 2)]).unwrap();
        let t = hn_type(&AnyBundle::Plain(ss)).unwrap();
        assert_eq!(t.mu, CartanVector(vec![q(3, 2); 4]));
        assert_eq!(central_type(&t).unwrap(), t.mu);
    }
}
