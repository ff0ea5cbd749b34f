//! Subcommand definitions and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hnkit::bundle::{is_semistable, vertical_degree, vertical_degree_composite, AnyBundle};
use hnkit::canon::{
    ad_degree_max_oracle, atiyah_bott_reduction, canonical_reduction, check_bh, filtration_parabolic, hn_type,
};
use hnkit::hnfilt::{extend_with_perps, hn_filtration, hn_filtration_so, hn_filtration_sp, Filtration, IsotropicFiltration};
use hnkit::lattice::{lattice_tower, levi_lattice_tower, obstruction_class, topological_type};
use hnkit::parabolic::ParabolicIndex;
use hnkit::rootsys::{CartanVector, GroupFamily, Kind};
use hnkit::strata::{enumerate_strata, to_dot};
use hnkit::Execution;
use serde_json::{json, Value};

use crate::report::{self, block, parabolic, rational, vector};
use crate::spec::parse_bundle_spec;
use crate::suites::{run_suite, Suite};
use crate::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "hnkit", version, about = "Exact Harder-Narasimhan computations for decorated bundles")]
struct Cli {
    /// Render aligned tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Gl,
    Sl,
    Sp,
    So,
}

impl From<FamilyArg> for Kind {
    fn from(f: FamilyArg) -> Kind {
        match f {
            FamilyArg::Gl => Kind::GL,
            FamilyArg::Sl => Kind::SL,
            FamilyArg::Sp => Kind::Sp,
            FamilyArg::So => Kind::SO,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// HN filtration and HN type of a bundle.
    Hn { spec: String },
    /// Semistability of a bundle.
    Semistable { spec: String },
    /// Fundamental groups of a group or of a Levi factor.
    Pi1 {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        rank: usize,
        /// Simple roots of the parabolic, 1-based, comma separated.
        #[arg(long, value_name = "I")]
        levi: Option<String>,
    },
    /// Canonical reduction of a torus-split bundle.
    Canon {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        deg: String,
        /// Matrix size; inferred from the list length when omitted (even for so).
        #[arg(long)]
        rank: Option<usize>,
        /// Cross-check against exhaustive degree maximization.
        #[arg(long)]
        oracle: bool,
    },
    /// Vertical degree of the reduction given by a subbundle.
    Vdeg {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long = "E", value_name = "d,r", allow_hyphen_values = true)]
        e: String,
        #[arg(long = "F", value_name = "f,l", allow_hyphen_values = true)]
        f: String,
    },
    /// Stratification poset of HN types.
    Strata {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        bound: i64,
        /// Write the Hasse diagram as DOT to this path.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Keep labels of the topological type of (DEG, 0, ..., 0).
        #[arg(long, value_name = "DEG", num_args = 0..=1, default_missing_value = "0", allow_negative_numbers = true)]
        fix_type: Option<i64>,
    },
    /// Run a randomized oracle suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

/// Parses `argv` (including the program name), runs the command and
/// collects its output.
pub fn run(argv: Vec<String>) -> Outcome {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let echo = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    match execute(&cli.command) {
        Ok(result) => {
            let doc = report::document(&echo, result);
            let stdout = if cli.pretty { report::to_table(&doc) } else { report::to_json(&doc) };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err((e, partial)) => {
            let stdout = partial
                .map(|r| {
                    let doc = report::document(&echo, r);
                    if cli.pretty { report::to_table(&doc) } else { report::to_json(&doc) }
                })
                .unwrap_or_default();
            Outcome { code: e.exit_code(), stdout, stderr: format!("hnkit: {e}\n") }
        }
    }
}

type CmdResult = Result<Value, (CliError, Option<Value>)>;

fn plain(e: impl Into<CliError>) -> (CliError, Option<Value>) {
    (e.into(), None)
}

fn family(kind: FamilyArg, rank: usize) -> Result<GroupFamily, CliError> {
    Ok(GroupFamily::new(kind.into(), rank)?)
}

fn int_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("{what}: cannot parse {p:?} as an integer"))))
        .collect()
}

fn pair(text: &str, what: &str) -> Result<(i64, u32), CliError> {
    match int_list(text, what)?.as_slice() {
        &[d, r] if r > 0 => Ok((d, r as u32)),
        _ => Err(CliError::Usage(format!("{what}: expected DEGREE,RANK with RANK > 0"))),
    }
}

fn execute(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Hn { spec } => cmd_hn(spec).map_err(plain),
        Command::Semistable { spec } => cmd_semistable(spec).map_err(plain),
        Command::Pi1 { family: f, rank, levi } => cmd_pi1(*f, *rank, levi.as_deref()).map_err(plain),
        Command::Canon { family: f, deg, rank, oracle } => cmd_canon(*f, deg, *rank, *oracle),
        Command::Vdeg { family: f, e, f: sub } => cmd_vdeg(*f, e, sub),
        Command::Strata { family: f, rank, bound, dot, fix_type } => {
            cmd_strata(*f, *rank, *bound, dot.as_ref(), *fix_type).map_err(plain)
        }
        Command::Check { suite, seed, cases } => {
            let (summary, ok) = run_suite(*suite, *seed, *cases);
            if ok {
                Ok(summary)
            } else {
                Err((CliError::Invariant(format!("{suite:?} suite reported failures")), Some(summary)))
            }
        }
    }
}

fn filtration_json(f: &Filtration) -> Value {
    json!({
        "blocks": f.quotients().iter().map(block).collect::<Vec<_>>(),
        "slopes": f.slopes().iter().map(rational).collect::<Vec<_>>(),
    })
}

fn isotropic_json(f: &IsotropicFiltration) -> Value {
    json!({
        "blocks": f.quotients().iter().map(block).collect::<Vec<_>>(),
        "slopes": f.slopes().iter().map(rational).collect::<Vec<_>>(),
        "middle": f.middle().map(block),
        "rank_flag": f.rank_flag(),
        "extended": filtration_json(&extend_with_perps(f)),
    })
}

fn cmd_hn(text: &str) -> Result<Value, CliError> {
    let spec = parse_bundle_spec(text)?;
    let b = spec.to_input()?.bundle()?;
    let filtration = match &b {
        AnyBundle::Plain(p) => filtration_json(&hn_filtration(p)),
        AnyBundle::Sl(s) => filtration_json(&hn_filtration(s.underlying())),
        AnyBundle::Sp(s) => isotropic_json(&hn_filtration_sp(s)),
        AnyBundle::So(s) => isotropic_json(&hn_filtration_so(s)?),
    };
    let t = hn_type(&b)?;
    Ok(json!({
        "spec": spec.to_string(),
        "family": b.family().to_string(),
        "filtration": filtration,
        "hn_type": vector(&t.mu),
        "parabolic": parabolic(&filtration_parabolic(&b)?),
        "semistable": is_semistable(&b),
    }))
}

fn cmd_semistable(text: &str) -> Result<Value, CliError> {
    let spec = parse_bundle_spec(text)?;
    let b = spec.to_input()?.bundle()?;
    let underlying = b.underlying();
    Ok(json!({
        "spec": spec.to_string(),
        "family": b.family().to_string(),
        "semistable": is_semistable(&b),
        "underlying_semistable": underlying.is_semistable(),
        "slope": rational(&underlying.slope()),
        "max_slope": rational(&underlying.max_slope()),
    }))
}

fn levi_index(f: GroupFamily, text: &str) -> Result<ParabolicIndex, CliError> {
    let mut members = Vec::new();
    for p in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = p.parse().map_err(|_| CliError::Usage(format!("--levi: cannot parse {p:?}")))?;
        if i == 0 {
            return Err(CliError::Usage("--levi: simple roots are numbered from 1".into()));
        }
        members.push(i - 1);
    }
    Ok(ParabolicIndex::new(f, members)?)
}

fn cmd_pi1(kind: FamilyArg, rank: usize, levi: Option<&str>) -> Result<Value, CliError> {
    let f = family(kind, rank)?;
    let (tower, idx) = match levi {
        Some(text) => {
            let i = levi_index(f, text)?;
            (levi_lattice_tower(f, &i)?, Some(i))
        }
        None => (lattice_tower(f)?, None),
    };
    let g = tower.fundamental_groups();
    Ok(json!({
        "family": f.to_string(),
        "levi": idx.as_ref().map(parabolic),
        "der": g.derived.to_string(),
        "pi1": g.full.to_string(),
        "ab": g.abelian.to_string(),
        "psi_denominators": tower.psi_denominators,
    }))
}

fn cmd_canon(kind: FamilyArg, deg: &str, rank: Option<usize>, oracle: bool) -> CmdResult {
    let degrees = int_list(deg, "--deg").map_err(plain)?;
    let f = family(kind, rank.unwrap_or_else(|| infer_rank(kind, degrees.len()))).map_err(plain)?;
    let a = CartanVector::from_ints(&degrees);
    let red = canonical_reduction(f, &a).map_err(plain)?;
    let bh = check_bh(f, &a, &red).map_err(plain)?;
    let ab = atiyah_bott_reduction(f, &a).map_err(plain)?;
    let mut result = json!({
        "family": f.to_string(),
        "degrees": degrees,
        "mu": vector(&red.mu.mu),
        "parabolic": parabolic(&red.index),
        "ad_positive_roots": red.ad_positive_roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "ad_parabolic_rank": red.ad_parabolic_rank(),
        "ad_degree": rational(&red.ad_degree()),
        "bh": {
            "levi_semistable": bh.levi_semistable,
            "char_degrees": bh.char_degrees,
        },
        "atiyah_bott_agrees": ab == red,
        "obstruction_class": obstruction_class(f, &a).map_err(plain)?.to_string(),
        "topological_type": vector(&topological_type(f, &a).map_err(plain)?),
    });
    let mut breach = None;
    if ab != red {
        breach = Some("adjoint-filtration and Levi formulations disagree".to_string());
    }
    if !(bh.levi_semistable && bh.char_degrees.iter().all(|&d| d > 0)) {
        breach = Some("canonical reduction fails a BH condition".to_string());
    }
    if oracle {
        let m = ad_degree_max_oracle(f, &a, Execution::default()).map_err(plain)?;
        let maximal = m.maximal_attainers();
        let unique = maximal.len() == 1 && maximal[0].0 == red.index && maximal[0].1 == red.mu.mu;
        result["oracle"] = json!({
            "max_degree": m.max_degree,
            "argmax": m.argmax.iter().map(|(i, b)| json!({"parabolic": parabolic(i), "point": vector(b)})).collect::<Vec<_>>(),
            "canonical_is_unique_maximal": unique,
        });
        if !unique || hnkit::Q::from_integer(m.max_degree) != red.ad_degree() {
            breach = Some("degree maximization disagrees with the canonical reduction".to_string());
        }
    }
    match breach {
        None => Ok(result),
        Some(msg) => Err((CliError::Invariant(msg), Some(result))),
    }
}

/// Matrix size from the number of Cartan coordinates.
fn infer_rank(kind: FamilyArg, coords: usize) -> usize {
    match kind {
        FamilyArg::Gl | FamilyArg::Sl => coords,
        FamilyArg::Sp | FamilyArg::So => 2 * coords,
    }
}

fn cmd_vdeg(kind: FamilyArg, e: &str, sub: &str) -> CmdResult {
    let e = pair(e, "--E").map_err(plain)?;
    let sub = pair(sub, "--F").map_err(plain)?;
    let f = family(kind, e.1 as usize).map_err(plain)?;
    let closed = vertical_degree(f, e, sub).map_err(plain)?;
    let composite = vertical_degree_composite(f, e, sub).map_err(plain)?;
    let result = json!({
        "family": f.to_string(),
        "E": format!("{}:{}", e.0, e.1),
        "F": format!("{}:{}", sub.0, sub.1),
        "vertical_degree": closed,
        "composite": composite,
        "nonnegative": closed >= 0,
    });
    if closed == composite {
        Ok(result)
    } else {
        Err((CliError::Invariant("closed form and composite route disagree".into()), Some(result)))
    }
}

fn cmd_strata(
    kind: FamilyArg,
    rank: usize,
    bound: i64,
    dot: Option<&PathBuf>,
    fix_type: Option<i64>,
) -> Result<Value, CliError> {
    let f = family(kind, rank)?;
    let class = match fix_type {
        Some(d) => {
            let mut v = vec![0i64; f.cartan_dim()];
            v[0] = d;
            Some(lattice_tower(f)?.class_of(&CartanVector::from_ints(&v))?)
        }
        None => None,
    };
    let poset = enumerate_strata(f, bound, class.as_ref(), Execution::default())?;
    if let Some(path) = dot {
        std::fs::write(path, to_dot(&poset))
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    let names: Vec<String> = poset.labels.iter().map(|l| l.to_string()).collect();
    Ok(json!({
        "family": f.to_string(),
        "bound": bound,
        "fixed_type": fix_type,
        "labels": poset.labels.iter().map(|l| json!({"mu": vector(&l.mu.mu), "parabolic": parabolic(&l.index)})).collect::<Vec<_>>(),
        "edges": poset.relation.iter().map(|&(u, l)| json!([names[u], names[l]])).collect::<Vec<_>>(),
        "dot": dot.map(|p| p.display().to_string()),
    }))
}
