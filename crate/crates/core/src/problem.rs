//! Problem files.
//!
//! A problem file is TOML with four kinds of sections:
//!
//! ```toml
//! [context]              # optional; defaults shown
//! genus = 0
//! ceiling = 1000000      # most tuple evaluations a solve may spend
//! box = 64               # side of the family base-point search box
//! strict_case4 = 5000    # optional: enumerate offset sets up to this many
//!
//! [sequences.U]          # U_n = sum coeffs[i] * roots[i]^n
//! roots = ["x-1", "x-2"]
//! coeffs = ["1", "1"]
//!
//! [sets.S]               # finite places plus an optional infinite place
//! polys = ["x-1", "x-2"]
//! infinity = true
//!
//! [problem]
//! kind = "sunit_sum"     # U_{n_1} + ... + U_{n_r} in O_S^*
//! sequence = "U"
//! r = 2
//! sset = "S"
//! ```
//!
//! or, for three sequences,
//!
//! ```toml
//! [problem]
//! kind = "triple_zero"   # U_n + V_m + W_l = 0
//! sequences = ["U", "V", "W"]
//! enforce_c11 = false
//! sset = "S"             # optional
//! ```
//!
//! Names are bare TOML keys (`A-Z a-z 0-9 _ -`). Every error carries the
//! line and column of the offending text.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use toml::Spanned;

use crate::bounds::BoundContext;
use crate::places::SSet;
use crate::ratfunc::{parse_poly, parse_ratfunc, Poly, RatFunc};
use crate::recurrence::SimpleRecurrence;
use crate::solvers::{SUnitSumProblem, SolveOptions, TripleZeroProblem, DEFAULT_BOX, DEFAULT_CEILING};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    UnknownReference,
    Invariant,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::UnknownReference => "unknown reference",
            DiagnosticKind::Invariant => "invalid value",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}: {}", self.line, self.column, self.kind, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Context {
    pub genus: u32,
    pub ceiling: u64,
    pub search_box: u64,
    pub strict_case4: Option<u64>,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            genus: 0,
            ceiling: DEFAULT_CEILING,
            search_box: DEFAULT_BOX,
            strict_case4: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemDecl {
    SUnitSum {
        sequence: String,
        r: u64,
        sset: String,
    },
    TripleZero {
        sequences: [String; 3],
        enforce_c11: bool,
        sset: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub context: Context,
    pub sequences: BTreeMap<String, SimpleRecurrence>,
    pub sets: BTreeMap<String, SSet>,
    pub problem: ProblemDecl,
}

pub enum Problem {
    SUnitSum(SUnitSumProblem),
    TripleZero(TripleZeroProblem),
}

impl ProblemFile {
    /// The declared problem with all names resolved.
    pub fn instantiate(&self) -> Problem {
        match &self.problem {
            ProblemDecl::SUnitSum { sequence, r, sset } => Problem::SUnitSum(SUnitSumProblem {
                rec: self.sequences[sequence].clone(),
                r: *r,
                s: self.sets[sset].clone(),
            }),
            ProblemDecl::TripleZero {
                sequences,
                enforce_c11,
                sset,
            } => Problem::TripleZero(TripleZeroProblem {
                u: self.sequences[&sequences[0]].clone(),
                v: self.sequences[&sequences[1]].clone(),
                w: self.sequences[&sequences[2]].clone(),
                s: sset.as_ref().map_or_else(SSet::empty, |n| self.sets[n].clone()),
                enforce_c11: *enforce_c11,
            }),
        }
    }

    pub fn bound_context(&self) -> BoundContext {
        BoundContext::new(self.context.genus, 1)
    }

    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            ceiling: self.context.ceiling,
            search_box: self.context.search_box,
            strict_case4: self.context.strict_case4,
            oracle: true,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    genus: Option<u32>,
    ceiling: Option<u64>,
    #[serde(rename = "box")]
    search_box: Option<Spanned<u64>>,
    strict_case4: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeq {
    roots: Spanned<Vec<Spanned<String>>>,
    coeffs: Spanned<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    polys: Spanned<Vec<Spanned<String>>>,
    #[serde(default)]
    infinity: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: Spanned<String>,
    sequence: Option<Spanned<String>>,
    sequences: Option<Spanned<Vec<Spanned<String>>>>,
    r: Option<Spanned<u64>>,
    sset: Option<Spanned<String>>,
    #[serde(default)]
    enforce_c11: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    context: Option<RawContext>,
    #[serde(default)]
    sequences: BTreeMap<String, Spanned<RawSeq>>,
    #[serde(default)]
    sets: BTreeMap<String, Spanned<RawSet>>,
    problem: Spanned<RawProblem>,
}

struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn at(&self, offset: usize, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Diagnostic {
            kind,
            line,
            column,
            message: message.into(),
        }
    }

    fn span<T>(&self, s: &Spanned<T>, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        self.at(s.span().start, kind, message)
    }

    /// Offset of the text inside a quoted string value.
    fn inner(&self, s: &Spanned<String>, offset: usize) -> usize {
        s.span().start + 1 + offset
    }

    fn ratfunc(&self, s: &Spanned<String>) -> Result<RatFunc, Diagnostic> {
        parse_ratfunc(s.get_ref()).map_err(|e| {
            self.at(
                self.inner(s, e.offset),
                DiagnosticKind::Syntax,
                format!("in `{}`: {}", s.get_ref(), e.message),
            )
        })
    }

    fn poly(&self, s: &Spanned<String>) -> Result<Poly, Diagnostic> {
        let f = self.ratfunc(s)?;
        if !f.is_polynomial() {
            return Err(self.span(s, DiagnosticKind::Invariant, format!("`{}` is not a polynomial", s.get_ref())));
        }
        parse_poly(s.get_ref()).map_err(|e| self.span(s, DiagnosticKind::Syntax, e.message))
    }
}

fn require<'a, T>(
    loc: &Locator,
    field: &'a Option<Spanned<T>>,
    at: &Spanned<RawProblem>,
    name: &str,
) -> Result<&'a Spanned<T>, Diagnostic> {
    field
        .as_ref()
        .ok_or_else(|| loc.span(at, DiagnosticKind::Syntax, format!("missing field `{name}` in [problem]")))
}

fn resolve<'a, V>(
    loc: &Locator,
    map: &'a BTreeMap<String, V>,
    name: &Spanned<String>,
    what: &str,
) -> Result<&'a V, Diagnostic> {
    map.get(name.get_ref()).ok_or_else(|| {
        loc.span(
            name,
            DiagnosticKind::UnknownReference,
            format!("no {what} named `{}`", name.get_ref()),
        )
    })
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, Diagnostic> {
    let loc = Locator { text };
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        loc.at(offset, DiagnosticKind::Syntax, e.message().trim().to_string())
    })?;

    let mut context = Context::default();
    if let Some(c) = &raw.context {
        context.genus = c.genus.unwrap_or(context.genus);
        context.ceiling = c.ceiling.unwrap_or(context.ceiling);
        context.strict_case4 = c.strict_case4;
        if let Some(b) = &c.search_box {
            if *b.get_ref() == 0 {
                return Err(loc.span(b, DiagnosticKind::Invariant, "box must be positive"));
            }
            context.search_box = *b.get_ref();
        }
    }

    let mut sequences = BTreeMap::new();
    for (name, seq) in &raw.sequences {
        let body = seq.get_ref();
        let roots = body.roots.get_ref().iter().map(|s| loc.ratfunc(s)).collect::<Result<Vec<_>, _>>()?;
        let coeffs = body.coeffs.get_ref().iter().map(|s| loc.ratfunc(s)).collect::<Result<Vec<_>, _>>()?;
        let rec = SimpleRecurrence::new(roots, coeffs).map_err(|e| {
            use crate::error::Error;
            let at = match &e {
                Error::RepeatedRoot(_, j) | Error::ZeroRoot(j) => body.roots.get_ref()[*j].span().start,
                Error::ZeroCoefficient(j) => body.coeffs.get_ref()[*j].span().start,
                Error::DimensionMismatch { .. } => body.coeffs.span().start,
                _ => body.roots.span().start,
            };
            loc.at(at, DiagnosticKind::Invariant, format!("sequence `{name}`: {e}"))
        })?;
        sequences.insert(name.clone(), rec);
    }

    let mut sets = BTreeMap::new();
    for (name, set) in &raw.sets {
        let body = set.get_ref();
        let polys = body.polys.get_ref().iter().map(|s| loc.poly(s)).collect::<Result<Vec<_>, _>>()?;
        let s = SSet::new(polys, body.infinity)
            .map_err(|e| loc.span(&body.polys, DiagnosticKind::Invariant, format!("set `{name}`: {e}")))?;
        sets.insert(name.clone(), s);
    }

    let p = &raw.problem;
    let body = p.get_ref();
    let problem = match body.kind.get_ref().as_str() {
        "sunit_sum" => {
            let seq = require(&loc, &body.sequence, p, "sequence")?;
            resolve(&loc, &sequences, seq, "sequence")?;
            let r = require(&loc, &body.r, p, "r")?;
            if *r.get_ref() == 0 {
                return Err(loc.span(r, DiagnosticKind::Invariant, "r must be at least 1"));
            }
            let sset = require(&loc, &body.sset, p, "sset")?;
            resolve(&loc, &sets, sset, "set")?;
            ProblemDecl::SUnitSum {
                sequence: seq.get_ref().clone(),
                r: *r.get_ref(),
                sset: sset.get_ref().clone(),
            }
        }
        "triple_zero" => {
            let seqs = require(&loc, &body.sequences, p, "sequences")?;
            if seqs.get_ref().len() != 3 {
                return Err(loc.span(seqs, DiagnosticKind::Invariant, "exactly three sequences are required"));
            }
            for s in seqs.get_ref() {
                resolve(&loc, &sequences, s, "sequence")?;
            }
            if let Some(s) = &body.sset {
                resolve(&loc, &sets, s, "set")?;
            }
            let names: Vec<String> = seqs.get_ref().iter().map(|s| s.get_ref().clone()).collect();
            ProblemDecl::TripleZero {
                sequences: [names[0].clone(), names[1].clone(), names[2].clone()],
                enforce_c11: body.enforce_c11,
                sset: body.sset.as_ref().map(|s| s.get_ref().clone()),
            }
        }
        other => {
            return Err(loc.span(
                &body.kind,
                DiagnosticKind::Invariant,
                format!("unknown problem kind `{other}` (expected `sunit_sum` or `triple_zero`)"),
            ))
        }
    };
    Ok(ProblemFile {
        context,
        sequences,
        sets,
        problem,
    })
}

fn quoted_list<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|i| format!("\"{i}\"")).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text form; parses back to an equal [`ProblemFile`].
pub fn serialize_problem(p: &ProblemFile) -> String {
    let mut out = String::new();
    out.push_str("[context]\n");
    out.push_str(&format!("genus = {}\n", p.context.genus));
    out.push_str(&format!("ceiling = {}\n", p.context.ceiling));
    out.push_str(&format!("box = {}\n", p.context.search_box));
    if let Some(limit) = p.context.strict_case4 {
        out.push_str(&format!("strict_case4 = {limit}\n"));
    }
    for (name, rec) in &p.sequences {
        out.push_str(&format!("\n[sequences.{name}]\n"));
        out.push_str(&format!("roots = {}\n", quoted_list(rec.roots())));
        out.push_str(&format!("coeffs = {}\n", quoted_list(rec.coeffs())));
    }
    for (name, set) in &p.sets {
        out.push_str(&format!("\n[sets.{name}]\n"));
        out.push_str(&format!("polys = {}\n", quoted_list(set.finite_polys())));
        out.push_str(&format!("infinity = {}\n", set.include_infinity()));
    }
    out.push_str("\n[problem]\n");
    match &p.problem {
        ProblemDecl::SUnitSum { sequence, r, sset } => {
            out.push_str("kind = \"sunit_sum\"\n");
            out.push_str(&format!("sequence = \"{sequence}\"\nr = {r}\nsset = \"{sset}\"\n"));
        }
        ProblemDecl::TripleZero {
            sequences,
            enforce_c11,
            sset,
        } => {
            out.push_str("kind = \"triple_zero\"\n");
            out.push_str(&format!("sequences = {}\n", quoted_list(sequences)));
            out.push_str(&format!("enforce_c11 = {enforce_c11}\n"));
            if let Some(s) = sset {
                out.push_str(&format!("sset = \"{s}\"\n"));
            }
        }
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetFile {
    polys: Spanned<Vec<Spanned<String>>>,
    #[serde(default)]
    infinity: bool,
}

/// A standalone S-set file: top-level `polys = [...]` and `infinity = ...`.
pub fn parse_sset(text: &str) -> Result<SSet, Diagnostic> {
    let loc = Locator { text };
    let raw: RawSetFile = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        loc.at(offset, DiagnosticKind::Syntax, e.message().trim().to_string())
    })?;
    let polys = raw.polys.get_ref().iter().map(|s| loc.poly(s)).collect::<Result<Vec<_>, _>>()?;
    SSet::new(polys, raw.infinity).map_err(|e| loc.span(&raw.polys, DiagnosticKind::Invariant, e.to_string()))
}
