//! Root systems of `GL(r)`, `SL(r)`, `Sp(2n)` and `SO(r)` in diagonal
//! coordinates, together with their Weyl group actions.
//!
//! Cartan coordinates follow the matrix conventions of the groups:
//! `GL`/`SL` use all `r` diagonal entries, `Sp(2n)` the first `n` entries of
//! `diag(z_1..z_n, -z_n..-z_1)`, and `SO(r)` the first `floor(r/2)` entries of
//! `diag(z_1..z_n, [0], -z_n..-z_1)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::linalg::{self, to_q};
use crate::{fmt_q, Error, Result, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    GL,
    SL,
    Sp,
    SO,
}

impl Kind {
    pub fn token(self) -> &'static str {
        match self {
            Kind::GL => "gl",
            Kind::SL => "sl",
            Kind::Sp => "sp",
            Kind::SO => "so",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Kind::GL),
            "sl" => Ok(Kind::SL),
            "sp" => Ok(Kind::Sp),
            "so" => Ok(Kind::SO),
            other => Err(Error::InvalidFamily(format!("unknown family token {other:?}"))),
        }
    }
}

/// A classical group given by its kind and matrix size `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupFamily {
    kind: Kind,
    r: usize,
}

impl GroupFamily {
    /// Validates `r`: positive, even for `Sp`, at least 2 for `SO`.
    ///
    /// `SO(2)` is representable (it is only meaningful for semistability
    /// tests); every root-theoretic operation rejects it.
    pub fn new(kind: Kind, r: usize) -> Result<Self> {
        let ok = match kind {
            Kind::GL | Kind::SL => r >= 1,
            Kind::Sp => r >= 2 && r % 2 == 0,
            Kind::SO => r >= 2,
        };
        if !ok {
            return Err(Error::InvalidFamily(format!("{}{r}", kind.token())));
        }
        Ok(GroupFamily { kind, r })
    }

    pub fn gl(r: usize) -> Self {
        Self::new(Kind::GL, r).expect("valid GL rank")
    }

    pub fn sl(r: usize) -> Self {
        Self::new(Kind::SL, r).expect("valid SL rank")
    }

    pub fn sp(r: usize) -> Self {
        Self::new(Kind::Sp, r).expect("valid Sp rank")
    }

    pub fn so(r: usize) -> Self {
        Self::new(Kind::SO, r).expect("valid SO rank")
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Matrix size.
    pub fn r(&self) -> usize {
        self.r
    }

    /// `r / 2` (the isotropic rank bound for `Sp`/`SO`).
    pub fn half(&self) -> usize {
        self.r / 2
    }

    pub fn cartan_dim(&self) -> usize {
        match self.kind {
            Kind::GL | Kind::SL => self.r,
            Kind::Sp | Kind::SO => self.r / 2,
        }
    }

    pub fn is_decorated(&self) -> bool {
        matches!(self.kind, Kind::Sp | Kind::SO)
    }

    /// Errors for `SO(r)` with `r < 3`.
    pub fn require_root_datum(&self) -> Result<()> {
        if self.kind == Kind::SO && self.r < 3 {
            return Err(Error::UnsupportedRank { family: self.to_string(), rank: self.r });
        }
        Ok(())
    }

    /// Dimension of the group.
    pub fn dim(&self) -> usize {
        let r = self.r;
        match self.kind {
            Kind::GL => r * r,
            Kind::SL => r * r - 1,
            Kind::Sp => (r / 2) * (r + 1),
            Kind::SO => r * (r - 1) / 2,
        }
    }

    /// Rank of the maximal torus.
    pub fn torus_rank(&self) -> usize {
        match self.kind {
            Kind::SL => self.r - 1,
            _ => self.cartan_dim(),
        }
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.cartan_dim() {
            return Err(Error::DimensionMismatch { expected: self.cartan_dim(), got: len });
        }
        Ok(())
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            Kind::GL => "GL",
            Kind::SL => "SL",
            Kind::Sp => "Sp",
            Kind::SO => "SO",
        };
        write!(f, "{name}({})", self.r)
    }
}

/// A rational vector in Cartan coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanVector(pub Vec<Q>);

impl CartanVector {
    pub fn from_ints(v: &[i64]) -> Self {
        CartanVector(to_q(v))
    }

    pub fn zero(dim: usize) -> Self {
        CartanVector(vec![Q::zero(); dim])
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|q| q.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect()
    }

    pub fn sum(&self) -> Q {
        self.0.iter().sum()
    }
}

impl fmt::Display for CartanVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An integer linear functional on Cartan coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootFunctional(pub Vec<i64>);

impl RootFunctional {
    pub fn eval(&self, v: &CartanVector) -> Q {
        self.0.iter().zip(&v.0).map(|(&c, x)| x * c).sum()
    }

    pub fn eval_ints(&self, v: &[i64]) -> i64 {
        self.0.iter().zip(v).map(|(c, x)| c * x).sum()
    }

    pub fn norm2(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn neg(&self) -> Self {
        RootFunctional(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        RootFunctional(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn unit(dim: usize, i: usize, c: i64) -> Self {
        let mut v = vec![0; dim];
        v[i] = c;
        RootFunctional(v)
    }

    fn pair(dim: usize, i: usize, ci: i64, j: usize, cj: i64) -> Self {
        let mut v = vec![0; dim];
        v[i] = ci;
        v[j] = cj;
        RootFunctional(v)
    }
}

impl fmt::Display for RootFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.abs();
            let coef = if mag == 1 { String::new() } else { mag.to_string() };
            out.push_str(&format!("{sign}{coef}e{}", i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Precomputed roots of a family.
#[derive(Debug, Clone)]
pub struct RootSystem {
    family: GroupFamily,
    simple: Vec<RootFunctional>,
    positive: Vec<RootFunctional>,
    /// Simple-root coefficients of each positive root.
    positive_coeffs: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(family: GroupFamily) -> Result<Self> {
        family.require_root_datum()?;
        let simple = build_simple(family);
        let positive = build_positive(family);
        let simple_q: Vec<Vec<Q>> = simple.iter().map(|s| to_q(&s.0)).collect();
        let positive_coeffs = positive
            .iter()
            .map(|p| {
                let c = linalg::solve_combination(&simple_q, &to_q(&p.0))
                    .expect("positive root lies in the span of the simple roots");
                c.iter()
                    .map(|q| {
                        assert!(q.is_integer() && !q.is_negative(), "non-integral root coefficient");
                        q.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(RootSystem { family, simple, positive, positive_coeffs })
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn simple(&self) -> &[RootFunctional] {
        &self.simple
    }

    pub fn positive(&self) -> &[RootFunctional] {
        &self.positive
    }

    /// Simple-root coefficients of the `i`-th positive root.
    pub fn positive_coeffs(&self, i: usize) -> &[i64] {
        &self.positive_coeffs[i]
    }

    /// All roots: positives followed by their negatives.
    pub fn roots(&self) -> Vec<RootFunctional> {
        let mut all = self.positive.clone();
        all.extend(self.positive.iter().map(RootFunctional::neg));
        all
    }

    /// All roots paired with their simple-root coefficients.
    pub fn roots_with_coeffs(&self) -> Vec<(RootFunctional, Vec<i64>)> {
        let mut all: Vec<_> = self
            .positive
            .iter()
            .cloned()
            .zip(self.positive_coeffs.iter().cloned())
            .collect();
        all.extend(
            self.positive
                .iter()
                .zip(&self.positive_coeffs)
                .map(|(p, c)| (p.neg(), c.iter().map(|x| -x).collect())),
        );
        all
    }

    pub fn is_root(&self, root: &RootFunctional) -> bool {
        root.0.len() == self.family.cartan_dim()
            && self.positive.iter().any(|p| p == root || p.neg() == *root)
    }

    pub fn coroot(&self, root: &RootFunctional) -> Result<CartanVector> {
        if !self.is_root(root) {
            return Err(Error::NotARoot { family: self.family.to_string(), root: root.to_string() });
        }
        Ok(coroot_unchecked(root))
    }

    /// Reflection `s_a(v) = v - a(v) a^vee`.
    pub fn reflect(&self, root: &RootFunctional, v: &CartanVector) -> CartanVector {
        reflect_unchecked(root, v)
    }

    /// Cartan integers `<a_i, a_j^vee>` over the simple roots.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.simple
            .iter()
            .map(|a| {
                self.simple
                    .iter()
                    .map(|b| {
                        let c = a.eval(&coroot_unchecked(b));
                        c.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_dominant(&self, v: &CartanVector) -> bool {
        self.simple.iter().all(|a| !a.eval(v).is_negative())
    }

    pub fn dominant_representative(&self, v: &CartanVector) -> Result<CartanVector> {
        self.family.check_dim(v.len())?;
        let mut cur = v.clone();
        while let Some(a) = self.simple.iter().find(|a| a.eval(&cur).is_negative()) {
            cur = reflect_unchecked(a, &cur);
        }
        Ok(cur)
    }

    /// Weyl orbit generated by simple reflections, sorted.
    pub fn weyl_orbit(&self, v: &CartanVector) -> Result<Vec<CartanVector>> {
        self.family.check_dim(v.len())?;
        if self.family.cartan_dim() > 8 {
            return Err(Error::TooLarge(format!("Weyl orbit in dimension {}", self.family.cartan_dim())));
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(v.clone());
        queue.push_back(v.clone());
        while let Some(cur) = queue.pop_front() {
            for a in &self.simple {
                if a.eval(&cur).is_zero() {
                    continue;
                }
                let next = reflect_unchecked(a, &cur);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Display name of the `i`-th simple root.
    pub fn simple_name(&self, i: usize) -> String {
        simple_root_name(self.family, i)
    }
}

fn coroot_unchecked(root: &RootFunctional) -> CartanVector {
    let n2 = root.norm2();
    CartanVector(root.0.iter().map(|&c| Q::new(2 * c, n2)).collect())
}

fn reflect_unchecked(root: &RootFunctional, v: &CartanVector) -> CartanVector {
    let val = root.eval(v);
    if val.is_zero() {
        return v.clone();
    }
    let co = coroot_unchecked(root);
    CartanVector(v.0.iter().zip(&co.0).map(|(x, c)| x - val * c).collect())
}

fn build_simple(family: GroupFamily) -> Vec<RootFunctional> {
    let d = family.cartan_dim();
    let mut out: Vec<RootFunctional> = Vec::new();
    match family.kind() {
        Kind::GL | Kind::SL => {
            for l in 0..d.saturating_sub(1) {
                out.push(RootFunctional::pair(d, l, 1, l + 1, -1));
            }
        }
        Kind::Sp => {
            for l in 0..d - 1 {
                out.push(RootFunctional::pair(d, l, 1, l + 1, -1));
            }
            out.push(RootFunctional::unit(d, d - 1, 2));
        }
        Kind::SO => {
            for l in 0..d - 1 {
                out.push(RootFunctional::pair(d, l, 1, l + 1, -1));
            }
            if family.r() % 2 == 1 {
                out.push(RootFunctional::unit(d, d - 1, 1));
            } else {
                out.push(RootFunctional::pair(d, d - 2, 1, d - 1, 1));
            }
        }
    }
    out
}

fn build_positive(family: GroupFamily) -> Vec<RootFunctional> {
    let d = family.cartan_dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            out.push(RootFunctional::pair(d, i, 1, j, -1));
            if family.is_decorated() {
                out.push(RootFunctional::pair(d, i, 1, j, 1));
            }
        }
        match family.kind() {
            Kind::Sp => out.push(RootFunctional::unit(d, i, 2)),
            Kind::SO if family.r() % 2 == 1 => out.push(RootFunctional::unit(d, i, 1)),
            _ => {}
        }
    }
    out
}

/// Names `a{l},{l+1}`, `2a{n}` (Sp), `a{n}` (SO odd), `a{n-1}+a{n}` (SO even).
pub fn simple_root_name(family: GroupFamily, i: usize) -> String {
    let d = family.cartan_dim();
    let last = family.is_decorated() && i + 1 == d;
    if !last {
        return format!("a{},{}", i + 1, i + 2);
    }
    match family.kind() {
        Kind::Sp => format!("2a{d}"),
        Kind::SO if family.r() % 2 == 1 => format!("a{d}"),
        _ => format!("a{}+a{}", d - 1, d),
    }
}

pub fn simple_roots(family: GroupFamily) -> Result<Vec<RootFunctional>> {
    Ok(RootSystem::new(family)?.simple)
}

pub fn positive_roots(family: GroupFamily) -> Result<Vec<RootFunctional>> {
    Ok(RootSystem::new(family)?.positive)
}

pub fn coroot(family: GroupFamily, root: &RootFunctional) -> Result<CartanVector> {
    RootSystem::new(family)?.coroot(root)
}

pub fn weyl_orbit(family: GroupFamily, v: &CartanVector) -> Result<Vec<CartanVector>> {
    RootSystem::new(family)?.weyl_orbit(v)
}

pub fn dominant_representative(family: GroupFamily, v: &CartanVector) -> Result<CartanVector> {
    RootSystem::new(family)?.dominant_representative(v)
}
