//! Randomized oracle suites behind `hnkit check`.
//!
//! Cases are drawn sequentially from a seeded ChaCha stream, evaluated
//! concurrently, and aggregated in case order.

use clap::ValueEnum;
use hnkit::bundle::{AnyBundle, Atom, PlainBundle, SlBundle, SoBundle, SpBundle};
use hnkit::canon::{ad_degree_max_oracle, atiyah_bott_reduction, canonical_reduction, check_bh};
use hnkit::exec;
use hnkit::hnfilt::hn_uniqueness_oracle_with;
use hnkit::lattice::lattice_tower;
use hnkit::rootsys::{CartanVector, GroupFamily, Kind, RootSystem};
use hnkit::strata::{gl_dominates, hull_membership};
use hnkit::{Execution, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Hn,
    Canon,
    Hull,
    Lattice,
}

const REPORTED_FAILURES: usize = 10;

/// Runs `cases` random cases; returns the summary and whether all passed.
pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> (Value, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results: Vec<Result<(), String>> = match suite {
        Suite::Hn => {
            let inputs: Vec<AnyBundle> = (0..cases).map(|_| random_bundle(&mut rng)).collect();
            exec::map(Execution::Parallel, &inputs, check_hn)
        }
        Suite::Canon => {
            let inputs: Vec<(GroupFamily, Vec<i64>)> = (0..cases).map(|_| random_point(&mut rng, 4, 2)).collect();
            exec::map(Execution::Parallel, &inputs, |(f, a)| check_canon(*f, a))
        }
        Suite::Hull => {
            let inputs: Vec<(Vec<i64>, Vec<i64>)> = (0..cases).map(|_| random_gl_pair(&mut rng)).collect();
            exec::map(Execution::Parallel, &inputs, |(m, n)| check_hull(m, n))
        }
        Suite::Lattice => {
            let inputs: Vec<(GroupFamily, Vec<i64>, Vec<i64>)> = (0..cases)
                .map(|_| {
                    let (f, a) = random_point(&mut rng, 5, 4);
                    let b = random_in(&mut rng, f, 4);
                    (f, a, b)
                })
                .collect();
            exec::map(Execution::Parallel, &inputs, |(f, a, b)| check_lattice(*f, a, b))
        }
    };
    let failures: Vec<String> = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().err().map(|e| format!("case {i}: {e}")))
        .collect();
    let passed = results.len() - failures.len();
    let summary = json!({
        "suite": format!("{suite:?}").to_lowercase(),
        "seed": seed,
        "cases": cases,
        "passed": passed,
        "failed": failures.len(),
        "failures": failures.iter().take(REPORTED_FAILURES).collect::<Vec<_>>(),
    });
    (summary, failures.is_empty())
}

fn families(max_dim: usize) -> Vec<GroupFamily> {
    let mut out = Vec::new();
    for d in 1..=max_dim {
        out.push(GroupFamily::gl(d));
        out.push(GroupFamily::sl(d + 1));
        out.push(GroupFamily::sp(2 * d));
        out.push(GroupFamily::so(2 * d + 1));
        if d >= 2 {
            out.push(GroupFamily::so(2 * d));
        }
    }
    out
}

fn random_in(rng: &mut ChaCha8Rng, f: GroupFamily, entries: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..f.cartan_dim()).map(|_| rng.gen_range(-entries..=entries)).collect();
    if f.kind() == Kind::SL {
        let s: i64 = v.iter().sum();
        v[0] -= s;
    }
    v
}

fn random_point(rng: &mut ChaCha8Rng, max_dim: usize, entries: i64) -> (GroupFamily, Vec<i64>) {
    let fams = families(max_dim);
    let f = fams[rng.gen_range(0..fams.len())];
    let v = random_in(rng, f, entries);
    (f, v)
}

fn atoms(rng: &mut ChaCha8Rng, rank: u32, positive: bool) -> Vec<Atom> {
    let mut left = rank;
    let mut out = Vec::new();
    while left > 0 {
        let r = rng.gen_range(1..=left.min(2));
        let d = if positive { rng.gen_range(1..=3) } else { rng.gen_range(-3..=3) };
        out.push(Atom::new(d, r).expect("positive rank"));
        left -= r;
    }
    out
}

fn random_bundle(rng: &mut ChaCha8Rng) -> AnyBundle {
    match rng.gen_range(0..4) {
        0 => {
            let rank = rng.gen_range(1..=6);
            AnyBundle::Plain(PlainBundle::new(atoms(rng, rank, false)).expect("nonempty"))
        }
        1 => {
            let rank = rng.gen_range(1..=5);
            let mut a = atoms(rng, rank, false);
            let total: i64 = a.iter().map(|x| x.degree).sum();
            a.push(Atom::new(-total, 1).expect("rank 1"));
            AnyBundle::Sl(SlBundle::new(PlainBundle::new(a).expect("nonempty")).expect("degree 0"))
        }
        2 => {
            let p = rng.gen_range(0..=4);
            let z = 2 * rng.gen_range(if p == 0 { 1 } else { 0 }..=(4 - p));
            AnyBundle::Sp(SpBundle::new(atoms(rng, p, true), z).expect("valid symplectic data"))
        }
        _ => {
            let p = rng.gen_range(0..=3);
            let z = rng.gen_range(if p == 0 { 3 } else { (3u32).saturating_sub(2 * p) }..=(8 - 2 * p));
            AnyBundle::So(SoBundle::new(atoms(rng, p, true), z).expect("valid orthogonal data"))
        }
    }
}

fn random_gl_pair(rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<i64>) {
    let d = rng.gen_range(1..=4);
    let mut m: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    let mut n: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    if rng.gen_bool(0.7) {
        let diff: i64 = m.iter().sum::<i64>() - n.iter().sum::<i64>();
        n[0] += diff;
    }
    m.sort_by(|a, b| b.cmp(a));
    n.sort_by(|a, b| b.cmp(a));
    (m, n)
}

fn check_hn(b: &AnyBundle) -> Result<(), String> {
    match hn_uniqueness_oracle_with(b, Execution::Sequential) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("fast path is not the unique HN candidate for {b:?}")),
        Err(e) => Err(e.to_string()),
    }
}

fn check_canon(f: GroupFamily, v: &[i64]) -> Result<(), String> {
    let a = CartanVector::from_ints(v);
    let red = canonical_reduction(f, &a).map_err(|e| e.to_string())?;
    let bh = check_bh(f, &a, &red).map_err(|e| e.to_string())?;
    if !bh.levi_semistable || bh.char_degrees.iter().any(|&d| d <= 0) {
        return Err(format!("{f} {v:?}: BH fails on the canonical reduction"));
    }
    if atiyah_bott_reduction(f, &a).map_err(|e| e.to_string())? != red {
        return Err(format!("{f} {v:?}: formulations disagree"));
    }
    let m = ad_degree_max_oracle(f, &a, Execution::Sequential).map_err(|e| e.to_string())?;
    let maximal = m.maximal_attainers();
    if Q::from_integer(m.max_degree) != red.ad_degree()
        || maximal.len() != 1
        || maximal[0].0 != red.index
        || maximal[0].1 != red.mu.mu
    {
        return Err(format!("{f} {v:?}: degree maximization disagrees"));
    }
    Ok(())
}

fn check_hull(m: &[i64], n: &[i64]) -> Result<(), String> {
    let f = GroupFamily::gl(m.len());
    let (mu, nu) = (CartanVector::from_ints(m), CartanVector::from_ints(n));
    let lp = hull_membership(f, &mu, &nu).map_err(|e| e.to_string())?;
    if lp == gl_dominates(&mu, &nu) {
        Ok(())
    } else {
        Err(format!("{mu} vs {nu}: LP {lp} disagrees with dominance"))
    }
}

fn check_lattice(f: GroupFamily, a: &[i64], b: &[i64]) -> Result<(), String> {
    let t = lattice_tower(f).map_err(|e| e.to_string())?;
    let class = |v: &[i64]| t.class_of(&CartanVector::from_ints(v)).map_err(|e| e.to_string());
    let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let (ca, cb, cs) = (class(a)?, class(b)?, class(&sum)?);
    let torsion = t.fundamental_groups().full.torsion;
    let additive = torsion.iter().enumerate().all(|(k, d)| (ca.torsion[k] + cb.torsion[k]) % d == cs.torsion[k])
        && (0..cs.free.len()).all(|k| ca.free[k] + cb.free[k] == cs.free[k]);
    if !additive {
        return Err(format!("{f}: classes of {a:?} and {b:?} are not additive"));
    }
    let rs = RootSystem::new(f).map_err(|e| e.to_string())?;
    for r in rs.roots() {
        let co = rs.coroot(&r).map_err(|e| e.to_string())?.to_ints().expect("integral coroot");
        let shifted: Vec<i64> = a.iter().zip(&co).map(|(x, y)| x + y).collect();
        if class(&shifted)? != ca {
            return Err(format!("{f}: coroot {r} changes the class of {a:?}"));
        }
    }
    Ok(())
}
