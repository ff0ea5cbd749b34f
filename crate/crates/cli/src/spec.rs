//! Bundle specifications.
//!
//! ```text
//! spec  := family rank ":" body          family := gl | sl | sp | so
//! body  := atoms [ "|" "z=" INT ]  |  "deg=" INT ("," INT)*
//! atoms := atom ("," atom)*              atom   := INT ":" POSINT
//! ```
//!
//! Whitespace is ignored. For `sp`/`so` the atoms are the positive part and
//! the optional `z=` gives the rank of the slope-0 block.

use std::fmt;

use hnkit::bundle::{AnyBundle, Atom, PlainBundle, SlBundle, SoBundle, SpBundle};
use hnkit::rootsys::{GroupFamily, Kind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Atoms { atoms: Vec<(i64, u32)>, zero: Option<u32> },
    Degrees(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSpec {
    pub kind: Kind,
    pub rank: usize,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at position {position}: expected {expected}, found {found}")]
    Syntax { position: usize, expected: String, found: String },
    #[error("rule {rule} violated: {message}")]
    Semantic { rule: &'static str, message: String },
}

/// Parsed input ready for the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Bundle(AnyBundle),
    TorusSplit(GroupFamily, Vec<i64>),
}

impl Input {
    pub fn family(&self) -> GroupFamily {
        match self {
            Input::Bundle(b) => b.family(),
            Input::TorusSplit(f, _) => *f,
        }
    }

    /// The bundle view; torus-split data become sums of line bundles.
    pub fn bundle(&self) -> hnkit::Result<AnyBundle> {
        match self {
            Input::Bundle(b) => Ok(b.clone()),
            Input::TorusSplit(f, a) => AnyBundle::torus_split(*f, a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(i64),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "'{w}'"),
            Tok::Int(i) => write!(f, "'{i}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SpecError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphabetic() {
                i += 1;
            }
            out.push((pos, Tok::Word(chars[start..i].iter().map(|p| p.1).collect())));
        } else if c.is_ascii_digit() || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(|n| n.1.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|p| p.1).collect();
            let v = s.parse::<i64>().map_err(|_| SpecError::Syntax {
                position: pos,
                expected: "an integer in range".into(),
                found: format!("'{s}'"),
            })?;
            out.push((pos, Tok::Int(v)));
        } else if ":,|=".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(SpecError::Syntax { position: pos, expected: "a token".into(), found: format!("'{c}'") });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn fail<T>(&self, expected: &str) -> Result<T, SpecError> {
        let (position, found) = &self.toks[self.at];
        Err(SpecError::Syntax { position: *position, expected: expected.into(), found: found.to_string() })
    }

    fn sym(&mut self, c: char) -> Result<(), SpecError> {
        if *self.peek() == Tok::Sym(c) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("'{c}'"))
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, SpecError> {
        if let Tok::Int(v) = *self.peek() {
            self.at += 1;
            Ok(v)
        } else {
            self.fail(what)
        }
    }

    fn unsigned(&mut self, what: &str, min: i64) -> Result<i64, SpecError> {
        let save = self.at;
        let v = self.int(what)?;
        if v < min {
            self.at = save;
            return self.fail(what);
        }
        Ok(v)
    }

    fn word(&mut self, w: &str) -> Result<(), SpecError> {
        if matches!(self.peek(), Tok::Word(x) if x.eq_ignore_ascii_case(w)) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("'{w}'"))
        }
    }
}

fn semantic(rule: &'static str, message: impl Into<String>) -> SpecError {
    SpecError::Semantic { rule, message: message.into() }
}

pub fn parse_bundle_spec(text: &str) -> Result<BundleSpec, SpecError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let kind = match p.peek() {
        Tok::Word(w) => match w.to_ascii_lowercase().as_str() {
            "gl" => Kind::GL,
            "sl" => Kind::SL,
            "sp" => Kind::Sp,
            "so" => Kind::SO,
            _ => return p.fail("a family (gl, sl, sp, so)"),
        },
        _ => return p.fail("a family (gl, sl, sp, so)"),
    };
    p.at += 1;
    let rank = p.unsigned("a positive rank", 1)? as usize;
    p.sym(':')?;
    let body = if matches!(p.peek(), Tok::Word(w) if w.eq_ignore_ascii_case("deg")) {
        p.at += 1;
        p.sym('=')?;
        let mut degs = vec![p.int("an integer degree")?];
        while *p.peek() == Tok::Sym(',') {
            p.at += 1;
            degs.push(p.int("an integer degree")?);
        }
        Body::Degrees(degs)
    } else {
        let mut atoms = Vec::new();
        loop {
            let d = p.int("an atom degree")?;
            p.sym(':')?;
            let r = p.unsigned("a positive atom rank", 1)?;
            let r = u32::try_from(r).map_err(|_| semantic("atom-rank", format!("rank {r} too large")))?;
            atoms.push((d, r));
            if *p.peek() != Tok::Sym(',') {
                break;
            }
            p.at += 1;
        }
        let zero = if *p.peek() == Tok::Sym('|') {
            p.at += 1;
            p.word("z")?;
            p.sym('=')?;
            let z = p.unsigned("a nonnegative zero-block rank", 0)?;
            Some(u32::try_from(z).map_err(|_| semantic("zero-block", format!("rank {z} too large")))?)
        } else {
            None
        };
        Body::Atoms { atoms, zero }
    };
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    let spec = BundleSpec { kind, rank, body };
    validate(&spec)?;
    Ok(spec)
}

fn validate(spec: &BundleSpec) -> Result<(), SpecError> {
    let fam = GroupFamily::new(spec.kind, spec.rank).map_err(|e| match spec.kind {
        Kind::Sp => semantic("sp-even-rank", e.to_string()),
        _ => semantic("family-rank", e.to_string()),
    })?;
    let decorated = fam.is_decorated();
    match &spec.body {
        Body::Degrees(d) => {
            if d.len() != fam.cartan_dim() {
                return Err(semantic(
                    "degree-length",
                    format!("{fam} needs {} degrees, got {}", fam.cartan_dim(), d.len()),
                ));
            }
            if spec.kind == Kind::SL && d.iter().sum::<i64>() != 0 {
                return Err(semantic("sl-degree-zero", format!("degrees sum to {}", d.iter().sum::<i64>())));
            }
        }
        Body::Atoms { atoms, zero } => {
            if zero.is_some() && !decorated {
                return Err(semantic("zero-block-family", "z= is only meaningful for sp and so"));
            }
            if decorated {
                if let Some(&(d, r)) = atoms.iter().find(|&&(d, _)| d <= 0) {
                    return Err(semantic("positive-part-slope", format!("atom {d}:{r} has slope <= 0")));
                }
            }
            let atom_rank: u64 = atoms.iter().map(|&(_, r)| u64::from(r)).sum();
            let total = if decorated { 2 * atom_rank + u64::from(zero.unwrap_or(0)) } else { atom_rank };
            if total != spec.rank as u64 {
                return Err(semantic("rank-mismatch", format!("atoms give rank {total}, declared {}", spec.rank)));
            }
            if spec.kind == Kind::SL && atoms.iter().map(|&(d, _)| d).sum::<i64>() != 0 {
                return Err(semantic("sl-degree-zero", "an SL bundle must have degree 0"));
            }
            if spec.kind == Kind::Sp && zero.unwrap_or(0) % 2 == 1 {
                return Err(semantic("sp-even-zero-block", "the symplectic zero block has odd rank"));
            }
        }
    }
    Ok(())
}

impl BundleSpec {
    pub fn family(&self) -> GroupFamily {
        GroupFamily::new(self.kind, self.rank).expect("validated at parse time")
    }

    pub fn to_input(&self) -> hnkit::Result<Input> {
        let fam = self.family();
        match &self.body {
            Body::Degrees(d) => Ok(Input::TorusSplit(fam, d.clone())),
            Body::Atoms { atoms, zero } => {
                let atoms: Vec<Atom> = atoms.iter().map(|&(d, r)| Atom::new(d, r)).collect::<hnkit::Result<_>>()?;
                let z = zero.unwrap_or(0);
                Ok(Input::Bundle(match self.kind {
                    Kind::GL => AnyBundle::Plain(PlainBundle::new(atoms)?),
                    Kind::SL => AnyBundle::Sl(SlBundle::new(PlainBundle::new(atoms)?)?),
                    Kind::Sp => AnyBundle::Sp(SpBundle::new(atoms, z)?),
                    Kind::SO => AnyBundle::So(SoBundle::new(atoms, z)?),
                }))
            }
        }
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}: ", self.kind.token(), self.rank)?;
        match &self.body {
            Body::Degrees(d) => {
                let parts: Vec<String> = d.iter().map(i64::to_string).collect();
                write!(f, "deg={}", parts.join(","))
            }
            Body::Atoms { atoms, zero } => {
                let parts: Vec<String> = atoms.iter().map(|(d, r)| format!("{d}:{r}")).collect();
                f.write_str(&parts.join(", "))?;
                if let Some(z) = zero {
                    write!(f, " | z={z}")?;
                }
                Ok(())
            }
        }
    }
}
