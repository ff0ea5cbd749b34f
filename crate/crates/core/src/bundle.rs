//! The formal bundle model: finite direct sums of semistable atoms.
//!
//! An [`Atom`] stands for a semistable bundle with the given degree and
//! rank. Tensor products of atoms are single atoms (semistability of
//! tensor products is a law of the model). Symplectic and special
//! orthogonal bundles record only their positive-slope part and a slope-0
//! block; the negative part is the implied mirror.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::rootsys::{CartanVector, GroupFamily, Kind, RootFunctional, RootSystem};
use crate::{Error, Result, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub degree: i64,
    pub rank: u32,
}

impl Atom {
    pub fn new(degree: i64, rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidBundle("atom of rank 0".into()));
        }
        Ok(Atom { degree, rank })
    }

    pub fn slope(&self) -> Q {
        Q::new(self.degree, self.rank as i64)
    }

    pub fn dual(&self) -> Atom {
        Atom { degree: -self.degree, rank: self.rank }
    }

    pub fn tensor(&self, other: &Atom) -> Atom {
        Atom {
            degree: self.degree * other.rank as i64 + other.degree * self.rank as i64,
            rank: self.rank * other.rank,
        }
    }
}

impl Ord for Atom {
    /// Slope descending, then degree ascending.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .slope()
            .cmp(&self.slope())
            .then(self.degree.cmp(&other.degree))
            .then(self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.degree, self.rank)
    }
}

/// A nonempty multiset of atoms, kept in canonical order so that equality
/// is multiset equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlainBundle {
    atoms: Vec<Atom>,
}

impl PlainBundle {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::ZeroBundle);
        }
        if atoms.iter().any(|a| a.rank == 0) {
            return Err(Error::InvalidBundle("atom of rank 0".into()));
        }
        atoms.sort();
        Ok(PlainBundle { atoms })
    }

    /// Convenience constructor from `(degree, rank)` pairs.
    pub fn from_pairs(pairs: &[(i64, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(d, r)| Atom { degree: d, rank: r }).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn degree(&self) -> i64 {
        self.atoms.iter().map(|a| a.degree).sum()
    }

    pub fn rank(&self) -> u32 {
        self.atoms.iter().map(|a| a.rank).sum()
    }

    pub fn slope(&self) -> Q {
        Q::new(self.degree(), self.rank() as i64)
    }

    pub fn dual(&self) -> PlainBundle {
        PlainBundle::new(self.atoms.iter().map(Atom::dual).collect()).expect("nonempty")
    }

    pub fn tensor(&self, other: &PlainBundle) -> PlainBundle {
        let atoms = self
            .atoms
            .iter()
            .flat_map(|a| other.atoms.iter().map(move |b| a.tensor(b)))
            .collect();
        PlainBundle::new(atoms).expect("nonempty")
    }

    pub fn direct_sum(&self, other: &PlainBundle) -> PlainBundle {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        PlainBundle::new(atoms).expect("nonempty")
    }

    /// All atoms share one slope.
    pub fn is_semistable(&self) -> bool {
        let s = self.atoms[0].slope();
        self.atoms.iter().all(|a| a.slope() == s)
    }

    pub fn max_slope(&self) -> Q {
        self.atoms[0].slope()
    }
}

impl fmt::Display for PlainBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn slope(b: &PlainBundle) -> Q {
    b.slope()
}

pub fn degree(b: &PlainBundle) -> i64 {
    b.degree()
}

pub fn rank(b: &PlainBundle) -> u32 {
    b.rank()
}

pub fn dual(b: &PlainBundle) -> PlainBundle {
    b.dual()
}

pub fn tensor(a: &PlainBundle, b: &PlainBundle) -> PlainBundle {
    a.tensor(b)
}

pub fn direct_sum(a: &PlainBundle, b: &PlainBundle) -> PlainBundle {
    a.direct_sum(b)
}

/// A bundle with trivialized determinant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlBundle {
    underlying: PlainBundle,
}

impl SlBundle {
    pub fn new(underlying: PlainBundle) -> Result<Self> {
        if underlying.degree() != 0 {
            return Err(Error::NotDegreeZero(underlying.degree()));
        }
        Ok(SlBundle { underlying })
    }

    pub fn underlying(&self) -> &PlainBundle {
        &self.underlying
    }
}

/// Positive part plus slope-0 block; the common shape of symplectic and
/// special orthogonal data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct SelfDual {
    positive: Vec<Atom>,
    zero: Vec<Atom>,
}

impl SelfDual {
    fn new(mut positive: Vec<Atom>, mut zero: Vec<Atom>) -> Result<Self> {
        if let Some(a) = positive.iter().find(|a| a.rank == 0 || a.degree <= 0) {
            return Err(Error::InvalidBundle(format!("positive part has atom {a} of slope <= 0")));
        }
        if let Some(a) = zero.iter().find(|a| a.rank == 0 || a.degree != 0) {
            return Err(Error::InvalidBundle(format!("zero block has atom {a} of nonzero slope")));
        }
        positive.sort();
        zero.sort();
        Ok(SelfDual { positive, zero })
    }

    fn positive_rank(&self) -> u32 {
        self.positive.iter().map(|a| a.rank).sum()
    }

    fn zero_rank(&self) -> u32 {
        self.zero.iter().map(|a| a.rank).sum()
    }

    fn rank(&self) -> u32 {
        2 * self.positive_rank() + self.zero_rank()
    }

    fn underlying(&self) -> Result<PlainBundle> {
        let mut atoms = self.positive.clone();
        atoms.extend(self.positive.iter().map(Atom::dual));
        atoms.extend_from_slice(&self.zero);
        PlainBundle::new(atoms)
    }
}

fn zero_block(zero_rank: u32) -> Vec<Atom> {
    if zero_rank == 0 {
        Vec::new()
    } else {
        vec![Atom { degree: 0, rank: zero_rank }]
    }
}

/// Symplectic bundle `P + P^* + Z` with `P` of positive slopes and `Z` a
/// semistable slope-0 symplectic block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpBundle(SelfDual);

impl SpBundle {
    /// Zero block given as a single opaque semistable block of even rank.
    pub fn new(positive: Vec<Atom>, zero_rank: u32) -> Result<Self> {
        Self::with_zero_atoms(positive, zero_block(zero_rank))
    }

    pub fn with_zero_atoms(positive: Vec<Atom>, zero: Vec<Atom>) -> Result<Self> {
        let sd = SelfDual::new(positive, zero)?;
        if sd.zero_rank() % 2 != 0 {
            return Err(Error::InvalidBundle("symplectic zero block of odd rank".into()));
        }
        if sd.rank() == 0 {
            return Err(Error::ZeroBundle);
        }
        Ok(SpBundle(sd))
    }

    pub fn positive(&self) -> &[Atom] {
        &self.0.positive
    }

    pub fn zero_atoms(&self) -> &[Atom] {
        &self.0.zero
    }

    pub fn zero_rank(&self) -> u32 {
        self.0.zero_rank()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank()
    }

    pub fn family(&self) -> GroupFamily {
        GroupFamily::sp(self.rank() as usize)
    }

    pub fn underlying(&self) -> PlainBundle {
        self.0.underlying().expect("nonempty")
    }

    pub fn is_semistable(&self) -> bool {
        self.0.positive.is_empty()
    }
}

/// Special orthogonal bundle `P + P^* + Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SoBundle(SelfDual);

impl SoBundle {
    pub fn new(positive: Vec<Atom>, zero_rank: u32) -> Result<Self> {
        Self::with_zero_atoms(positive, zero_block(zero_rank))
    }

    pub fn with_zero_atoms(positive: Vec<Atom>, zero: Vec<Atom>) -> Result<Self> {
        let sd = SelfDual::new(positive, zero)?;
        if sd.rank() == 0 {
            return Err(Error::ZeroBundle);
        }
        Ok(SoBundle(sd))
    }

    pub fn positive(&self) -> &[Atom] {
        &self.0.positive
    }

    pub fn zero_atoms(&self) -> &[Atom] {
        &self.0.zero
    }

    pub fn zero_rank(&self) -> u32 {
        self.0.zero_rank()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank()
    }

    pub fn family(&self) -> GroupFamily {
        GroupFamily::so(self.rank().max(2) as usize)
    }

    pub fn underlying(&self) -> PlainBundle {
        self.0.underlying().expect("nonempty")
    }

    /// `SO(2)` is abelian, so every rank-2 bundle counts as semistable.
    pub fn is_semistable(&self) -> bool {
        self.rank() == 2 || self.0.positive.is_empty()
    }
}

/// Any bundle kind accepted by the semistability and HN-type entry points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnyBundle {
    Plain(PlainBundle),
    Sl(SlBundle),
    Sp(SpBundle),
    So(SoBundle),
}

impl AnyBundle {
    pub fn underlying(&self) -> PlainBundle {
        match self {
            AnyBundle::Plain(b) => b.clone(),
            AnyBundle::Sl(b) => b.underlying().clone(),
            AnyBundle::Sp(b) => b.underlying(),
            AnyBundle::So(b) => b.underlying(),
        }
    }

    pub fn family(&self) -> GroupFamily {
        match self {
            AnyBundle::Plain(b) => GroupFamily::gl(b.rank() as usize),
            AnyBundle::Sl(b) => GroupFamily::sl(b.underlying().rank() as usize),
            AnyBundle::Sp(b) => b.family(),
            AnyBundle::So(b) => b.family(),
        }
    }

    /// The torus-split bundle of `family` with the given Cartan degrees.
    pub fn torus_split(family: GroupFamily, degrees: &[i64]) -> Result<Self> {
        family.check_dim(degrees.len())?;
        let line = |d: i64| Atom { degree: d, rank: 1 };
        match family.kind() {
            Kind::GL => Ok(AnyBundle::Plain(PlainBundle::new(degrees.iter().map(|&d| line(d)).collect())?)),
            Kind::SL => {
                let b = PlainBundle::new(degrees.iter().map(|&d| line(d)).collect())?;
                Ok(AnyBundle::Sl(SlBundle::new(b)?))
            }
            Kind::Sp | Kind::SO => {
                let positive: Vec<Atom> =
                    degrees.iter().filter(|&&d| d != 0).map(|&d| line(d.abs())).collect();
                let zeros = degrees.iter().filter(|&&d| d == 0).count() as u32;
                let odd = (family.r() % 2) as u32;
                let zero: Vec<Atom> = (0..2 * zeros + odd).map(|_| line(0)).collect();
                if family.kind() == Kind::Sp {
                    Ok(AnyBundle::Sp(SpBundle::with_zero_atoms(positive, zero)?))
                } else {
                    Ok(AnyBundle::So(SoBundle::with_zero_atoms(positive, zero)?))
                }
            }
        }
    }
}

pub fn is_semistable(b: &AnyBundle) -> bool {
    match b {
        AnyBundle::Plain(p) => p.is_semistable(),
        AnyBundle::Sl(s) => s.underlying().is_semistable(),
        AnyBundle::Sp(s) => s.is_semistable(),
        AnyBundle::So(s) => s.is_semistable(),
    }
}

fn check_isotropic_rank(family: GroupFamily, l: u32) -> Result<()> {
    let ok = match family.kind() {
        Kind::GL | Kind::SL => l >= 1 && (l as usize) < family.r(),
        Kind::Sp | Kind::SO => l >= 1 && (l as usize) <= family.half(),
    };
    if !ok {
        return Err(Error::InvalidFlag(format!("subbundle rank {l} out of range for {family}")));
    }
    Ok(())
}

fn check_vdeg_input(family: GroupFamily, e_degree: i64, e_rank: u32, f_rank: u32) -> Result<()> {
    family.require_root_datum()?;
    if e_rank as usize != family.r() {
        return Err(Error::InvalidFlag(format!("bundle rank {e_rank} does not match {family}")));
    }
    check_isotropic_rank(family, f_rank)?;
    if family.is_decorated() && e_degree != 0 {
        return Err(Error::NotDegreeZero(e_degree));
    }
    Ok(())
}

/// Degree of the vertical tangent bundle along the reduction given by a
/// subbundle `F = (f_degree, f_rank)` of `E = (e_degree, e_rank)`.
///
/// Nonnegative exactly when `slope(F) <= slope(E)`, positive exactly when
/// strictly smaller.
pub fn vertical_degree(family: GroupFamily, e: (i64, u32), f: (i64, u32)) -> Result<i64> {
    let ((d, r), (fd, l)) = (e, f);
    check_vdeg_input(family, d, r, l)?;
    let (r, l) = (r as i64, l as i64);
    Ok(match family.kind() {
        Kind::GL | Kind::SL => -fd * r + d * l,
        Kind::Sp => -fd * (r - l + 1),
        Kind::SO => -fd * (r - l - 1),
    })
}

/// The same degree computed through determinants of the pieces:
/// `deg(F^* (x) E/F)` for `GL`/`SL`, and
/// `deg(F^* (x) F^perp/F) + k * deg(F^*)` with `k = l+1` (`Sp`) or `l-1` (`SO`).
pub fn vertical_degree_composite(family: GroupFamily, e: (i64, u32), f: (i64, u32)) -> Result<i64> {
    let ((d, r), (fd, l)) = (e, f);
    check_vdeg_input(family, d, r, l)?;
    let sub = PlainBundle::new(vec![Atom::new(fd, l)?])?;
    Ok(match family.kind() {
        Kind::GL | Kind::SL => {
            let quotient = PlainBundle::new(vec![Atom::new(d - fd, r - l)?])?;
            sub.dual().tensor(&quotient).degree()
        }
        Kind::Sp | Kind::SO => {
            let middle_rank = r - 2 * l;
            let twist = if family.kind() == Kind::Sp { l as i64 + 1 } else { l as i64 - 1 };
            let middle = if middle_rank == 0 {
                0
            } else {
                let perp_quotient = PlainBundle::new(vec![Atom::new(0, middle_rank)?])?;
                sub.dual().tensor(&perp_quotient).degree()
            };
            middle + twist * sub.dual().degree()
        }
    })
}

/// Adjoint bundle of a torus-split principal bundle, with its root labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointBundle {
    pub family: GroupFamily,
    /// `(root, root(a))` for every root.
    pub root_degrees: Vec<(RootFunctional, i64)>,
    pub underlying: PlainBundle,
    pub orthogonal: SoBundle,
}

impl AdjointBundle {
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.underlying.atoms().iter().map(|a| a.degree).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }
}

pub fn adjoint_bundle(family: GroupFamily, a: &CartanVector) -> Result<AdjointBundle> {
    let rs = RootSystem::new(family)?;
    family.check_dim(a.len())?;
    let ints = a.to_ints().ok_or_else(|| Error::NotIntegral(a.to_string()))?;
    let root_degrees: Vec<(RootFunctional, i64)> =
        rs.roots().into_iter().map(|r| {
            let d = r.eval_ints(&ints);
            (r, d)
        }).collect();
    let line = |d: i64| Atom { degree: d, rank: 1 };
    let torus = family.torus_rank();
    let mut atoms: Vec<Atom> = root_degrees.iter().map(|&(_, d)| line(d)).collect();
    atoms.extend((0..torus).map(|_| line(0)));
    let positive: Vec<Atom> = root_degrees.iter().filter(|(_, d)| *d > 0).map(|&(_, d)| line(d)).collect();
    let zero_count = root_degrees.iter().filter(|(_, d)| *d == 0).count() + torus;
    let zero: Vec<Atom> = (0..zero_count).map(|_| line(0)).collect();
    Ok(AdjointBundle {
        family,
        root_degrees,
        underlying: PlainBundle::new(atoms)?,
        orthogonal: SoBundle::with_zero_atoms(positive, zero)?,
    })
}

/// `End(E) = E^* (x) E` with its trace-form orthogonal structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointGl {
    pub underlying: PlainBundle,
    pub orthogonal: SoBundle,
}

pub fn adjoint_gl(e: &PlainBundle) -> Result<AdjointGl> {
    let underlying = e.dual().tensor(e);
    let positive: Vec<Atom> = underlying.atoms().iter().filter(|a| a.degree > 0).copied().collect();
    let zero: Vec<Atom> = underlying.atoms().iter().filter(|a| a.degree == 0).copied().collect();
    let orthogonal = SoBundle::with_zero_atoms(positive, zero)?;
    debug_assert_eq!(orthogonal.underlying(), underlying);
    Ok(AdjointGl { underlying, orthogonal })
}

/// Semistability of a torus-split principal bundle: every root vanishes on
/// its degree vector (equivalently, the degrees are central).
pub fn torus_split_semistable(family: GroupFamily, a: &CartanVector) -> Result<bool> {
    let rs = RootSystem::new(family)?;
    family.check_dim(a.len())?;
    Ok(rs.positive().iter().all(|r| r.eval(a).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(p: &[(i64, u32)]) -> PlainBundle {
        PlainBundle::from_pairs(p).unwrap()
    }

    #[test]
    fn slopes() {
        assert_eq!(pb(&[(3, 1), (1, 2)]).slope(), Q::new(4, 3));
        assert_eq!(pb(&[(0, 5)]).slope(), Q::zero());
        let m = pb(&[(-2, 1), (2, 1)]);
        assert_eq!((m.slope(), m.degree(), m.rank()), (Q::zero(), 0, 2));
        assert_eq!(PlainBundle::new(vec![]), Err(Error::ZeroBundle));
    }

    #[test]
    fn tensor_and_dual() {
        let t = pb(&[(1, 2)]).tensor(&pb(&[(1, 3)]));
        assert_eq!(t, pb(&[(5, 6)]));
        assert_eq!(t.slope(), Q::new(1, 2) + Q::new(1, 3));
        assert_eq!(pb(&[(3, 1), (-1, 2)]).dual(), pb(&[(-3, 1), (1, 2)]));
        let b = pb(&[(3, 1), (1, 2), (-2, 1)]);
        assert_eq!(b.tensor(&pb(&[(0, 1)])), b);
    }

    #[test]
    fn vertical_degrees() {
        assert_eq!(vertical_degree(GroupFamily::gl(4), (2, 4), (3, 2)).unwrap(), -8);
        assert_eq!(vertical_degree(GroupFamily::sp(4), (0, 4), (2, 1)).unwrap(), -8);
        assert_eq!(vertical_degree(GroupFamily::so(5), (0, 5), (1, 2)).unwrap(), -2);
        assert_eq!(vertical_degree_composite(GroupFamily::gl(4), (2, 4), (3, 2)).unwrap(), -8);
        assert_eq!(vertical_degree_composite(GroupFamily::sp(4), (0, 4), (2, 1)).unwrap(), -8);
        assert_eq!(vertical_degree_composite(GroupFamily::so(5), (0, 5), (1, 2)).unwrap(), -2);
        assert_eq!(vertical_degree(GroupFamily::sp(4), (1, 4), (2, 1)), Err(Error::NotDegreeZero(1)));
        assert!(matches!(vertical_degree(GroupFamily::sp(4), (0, 4), (2, 3)), Err(Error::InvalidFlag(_))));
        assert!(matches!(vertical_degree(GroupFamily::gl(4), (0, 4), (2, 4)), Err(Error::InvalidFlag(_))));
    }

    #[test]
    fn semistability() {
        assert!(is_semistable(&AnyBundle::Plain(pb(&[(1, 2), (1, 2)]))));
        assert!(!is_semistable(&AnyBundle::Sp(SpBundle::new(vec![Atom { degree: 1, rank: 1 }], 0).unwrap())));
        assert!(is_semistable(&AnyBundle::So(SoBundle::new(vec![], 4).unwrap())));
        assert!(is_semistable(&AnyBundle::So(SoBundle::new(vec![Atom { degree: 3, rank: 1 }], 0).unwrap())));
        assert!(SpBundle::new(vec![], 3).is_err());
        assert!(SpBundle::new(vec![Atom { degree: -1, rank: 1 }], 2).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let sp = adjoint_bundle(GroupFamily::sp(4), &CartanVector::from_ints(&[2, 1])).unwrap();
        assert_eq!(sp.degrees(), vec![4, 3, 2, 1, 0, 0, -1, -2, -3, -4]);
        assert_eq!(sp.underlying.rank(), 10);
        let gl = adjoint_bundle(GroupFamily::gl(2), &CartanVector::from_ints(&[1, 1])).unwrap();
        assert_eq!(gl.degrees(), vec![0, 0, 0, 0]);
        let so = adjoint_bundle(GroupFamily::so(4), &CartanVector::from_ints(&[1, 0])).unwrap();
        assert_eq!(so.degrees(), vec![1, 1, 0, 0, -1, -1]);
        assert_eq!(so.orthogonal.underlying(), so.underlying);
        assert!(matches!(
            adjoint_bundle(GroupFamily::gl(2), &CartanVector(vec![Q::new(1, 2), Q::zero()])),
            Err(Error::NotIntegral(_))
        ));
    }

    #[test]
    fn adjoint_gl_examples() {
        assert_eq!(
            adjoint_gl(&pb(&[(1, 1), (0, 2)])).unwrap().underlying,
            pb(&[(0, 1), (2, 2), (-2, 2), (0, 4)])
        );
        assert_eq!(adjoint_gl(&pb(&[(0, 1)])).unwrap().underlying, pb(&[(0, 1)]));
        let m = adjoint_gl(&pb(&[(3, 1), (-3, 1)])).unwrap();
        assert_eq!(m.underlying, pb(&[(0, 1), (6, 1), (-6, 1), (0, 1)]));
        assert_eq!(m.orthogonal.positive(), &[Atom { degree: 6, rank: 1 }]);
    }

    #[test]
    fn torus_split_shapes() {
        let b = AnyBundle::torus_split(GroupFamily::so(5), &[2, 0]).unwrap();
        let AnyBundle::So(so) = &b else { panic!() };
        assert_eq!((so.positive().len(), so.zero_rank()), (1, 3));
        assert_eq!(b.underlying(), pb(&[(2, 1), (-2, 1), (0, 1), (0, 1), (0, 1)]));
        assert!(matches!(
            AnyBundle::torus_split(GroupFamily::sl(2), &[1, 0]),
            Err(Error::NotDegreeZero(1))
        ));
    }
}
