//! Shared generators for the integration tests.
#![allow(dead_code)]

use hnkit::bundle::{Atom, AnyBundle, PlainBundle, SlBundle, SoBundle, SpBundle};
use hnkit::rootsys::{CartanVector, GroupFamily};
use proptest::prelude::*;
use rand::Rng;

pub fn cv(v: &[i64]) -> CartanVector {
    CartanVector::from_ints(v)
}

/// Every integer vector of length `d` with entries in `[lo, hi]`.
pub fn grid(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Families with a root datum and Cartan dimension at most `max_dim`.
pub fn families_up_to(max_dim: usize) -> Vec<GroupFamily> {
    let mut out = Vec::new();
    for r in 1..=max_dim {
        out.push(GroupFamily::gl(r));
    }
    for r in 2..=max_dim + 1 {
        out.push(GroupFamily::sl(r));
    }
    for n in 1..=max_dim {
        out.push(GroupFamily::sp(2 * n));
    }
    for r in 3..=2 * max_dim + 1 {
        out.push(GroupFamily::so(r));
    }
    out
}

pub fn random_atoms<R: Rng>(rng: &mut R, max_rank: u32, deg: i64) -> Vec<Atom> {
    let total = rng.gen_range(1..=max_rank);
    let mut left = total;
    let mut atoms = Vec::new();
    while left > 0 {
        let r = rng.gen_range(1..=left.min(3));
        atoms.push(Atom::new(rng.gen_range(-deg..=deg), r).unwrap());
        left -= r;
    }
    atoms
}

pub fn random_positive<R: Rng>(rng: &mut R, max_rank: u32, deg: i64) -> Vec<Atom> {
    let mut left = rng.gen_range(0..=max_rank);
    let mut atoms = Vec::new();
    while left > 0 {
        let r = rng.gen_range(1..=left.min(2));
        atoms.push(Atom::new(rng.gen_range(1..=deg), r).unwrap());
        left -= r;
    }
    atoms
}

pub fn random_zero<R: Rng>(rng: &mut R, rank: u32, even: bool) -> Vec<Atom> {
    let mut left = rank;
    let mut atoms = Vec::new();
    while left > 0 {
        let r = if even { 2 * rng.gen_range(1..=left / 2) } else { rng.gen_range(1..=left) };
        atoms.push(Atom::new(0, r).unwrap());
        left -= r;
    }
    atoms
}

pub fn random_plain<R: Rng>(rng: &mut R, max_rank: u32, deg: i64) -> PlainBundle {
    PlainBundle::new(random_atoms(rng, max_rank, deg)).unwrap()
}

pub fn random_sl<R: Rng>(rng: &mut R, max_rank: u32, deg: i64) -> SlBundle {
    let mut atoms = random_atoms(rng, max_rank, deg);
    let total: i64 = atoms.iter().map(|a| a.degree).sum();
    atoms.push(Atom::new(-total, 1).unwrap());
    SlBundle::new(PlainBundle::new(atoms).unwrap()).unwrap()
}

pub fn random_sp<R: Rng>(rng: &mut R, max_half: u32, deg: i64) -> SpBundle {
    loop {
        let positive = random_positive(rng, max_half, deg);
        let p: u32 = positive.iter().map(|a| a.rank).sum();
        let z = 2 * rng.gen_range(0..=max_half - p);
        let zero = random_zero(rng, z, true);
        if let Ok(b) = SpBundle::with_zero_atoms(positive, zero) {
            return b;
        }
    }
}

pub fn random_so<R: Rng>(rng: &mut R, max_rank: u32, deg: i64) -> SoBundle {
    loop {
        let positive = random_positive(rng, max_rank / 2, deg);
        let p: u32 = positive.iter().map(|a| a.rank).sum();
        let z = rng.gen_range(0..=max_rank - 2 * p);
        let zero = random_zero(rng, z, false);
        if let Ok(b) = SoBundle::with_zero_atoms(positive, zero) {
            if b.rank() >= 3 {
                return b;
            }
        }
    }
}

pub fn random_any<R: Rng>(rng: &mut R, deg: i64) -> AnyBundle {
    match rng.gen_range(0..4) {
        0 => AnyBundle::Plain(random_plain(rng, 8, deg)),
        1 => AnyBundle::Sl(random_sl(rng, 7, deg)),
        2 => AnyBundle::Sp(random_sp(rng, 4, deg)),
        _ => AnyBundle::So(random_so(rng, 9, deg)),
    }
}

pub fn atom_strategy(deg: i64, max_rank: u32) -> impl Strategy<Value = Atom> {
    (-deg..=deg, 1..=max_rank).prop_map(|(d, r)| Atom::new(d, r).unwrap())
}

pub fn plain_strategy(max_atoms: usize, deg: i64, max_rank: u32) -> impl Strategy<Value = PlainBundle> {
    prop::collection::vec(atom_strategy(deg, max_rank), 1..=max_atoms).prop_map(|a| PlainBundle::new(a).unwrap())
}

pub fn positive_strategy(max_atoms: usize, deg: i64, max_rank: u32) -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec((1..=deg, 1..=max_rank).prop_map(|(d, r)| Atom::new(d, r).unwrap()), 0..=max_atoms)
}

pub fn sp_strategy() -> impl Strategy<Value = SpBundle> {
    (positive_strategy(3, 4, 2), prop::collection::vec(1u32..=2, 0..=2)).prop_filter_map("nonzero", |(p, z)| {
        let zero = z.into_iter().map(|h| Atom::new(0, 2 * h).unwrap()).collect();
        SpBundle::with_zero_atoms(p, zero).ok()
    })
}

pub fn so_strategy() -> impl Strategy<Value = SoBundle> {
    (positive_strategy(3, 4, 2), prop::collection::vec(1u32..=3, 0..=2)).prop_filter_map("rank >= 3", |(p, z)| {
        let zero = z.into_iter().map(|r| Atom::new(0, r).unwrap()).collect();
        SoBundle::with_zero_atoms(p, zero).ok().filter(|b| b.rank() >= 3)
    })
}

/// A family with Cartan dimension at most `max_dim` and a vector in it.
pub fn torus_point(max_dim: usize, entries: i64) -> impl Strategy<Value = (GroupFamily, Vec<i64>)> {
    prop::sample::select(families_up_to(max_dim)).prop_flat_map(move |f| {
        let d = f.cartan_dim();
        prop::collection::vec(-entries..=entries, d).prop_map(move |mut v| {
            if f.kind() == hnkit::rootsys::Kind::SL {
                let s: i64 = v.iter().sum();
                v[d - 1] -= s;
            }
            (f, v)
        })
    })
}

/// A vector in the kernel lattice of `f`.
pub fn point_in(f: GroupFamily, entries: i64) -> impl Strategy<Value = Vec<i64>> {
    let d = f.cartan_dim();
    prop::collection::vec(-entries..=entries, d).prop_map(move |mut v| {
        if f.kind() == hnkit::rootsys::Kind::SL {
            let s: i64 = v.iter().sum();
            v[d - 1] -= s;
        }
        v
    })
}

/// A family with two points in it.
pub fn torus_pair(max_dim: usize, entries: i64) -> impl Strategy<Value = (GroupFamily, Vec<i64>, Vec<i64>)> {
    prop::sample::select(families_up_to(max_dim))
        .prop_flat_map(move |f| (Just(f), point_in(f, entries), point_in(f, entries)))
}
