//! Report documents for the command-line front end.
//!
//! Each document serializes to one JSON object and renders to text; both
//! forms list the same solutions.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bounds::{thm1_bound_with, thm2_constants, BoundTrace, Thm1Options};
use crate::error::{Error, Result};
use crate::problem::{Problem, ProblemDecl, ProblemFile};
use crate::solvers::{
    c11_violations, enumerate_sunit_sums, enumerate_triple, solve_sunit_sum, solve_triple, FlaggedSolution,
    InfiniteFamily, SolutionReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceSummary {
    pub roots: Vec<String>,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetSummary {
    pub polys: Vec<String>,
    pub infinity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemSummary {
    pub kind: &'static str,
    pub genus: u32,
    pub ceiling: u64,
    #[serde(rename = "box")]
    pub search_box: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_case4: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enforce_c11: Option<bool>,
    pub sequences: BTreeMap<String, SequenceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sset: Option<SetSummary>,
}

impl ProblemSummary {
    pub fn of(pf: &ProblemFile) -> ProblemSummary {
        let strings = |v: &[_]| -> Vec<String> { v.iter().map(|f: &crate::RatFunc| f.to_string()).collect() };
        let (kind, names, r, enforce, set) = match &pf.problem {
            ProblemDecl::SUnitSum { sequence, r, sset } => {
                ("sunit_sum", vec![sequence.clone()], Some(*r), None, Some(sset.clone()))
            }
            ProblemDecl::TripleZero {
                sequences,
                enforce_c11,
                sset,
            } => ("triple_zero", sequences.to_vec(), None, Some(*enforce_c11), sset.clone()),
        };
        let sequences = names
            .iter()
            .map(|n| {
                let rec = &pf.sequences[n];
                (
                    n.clone(),
                    SequenceSummary {
                        roots: strings(rec.roots()),
                        coeffs: strings(rec.coeffs()),
                    },
                )
            })
            .collect();
        let sset = set.map(|n| {
            let s = &pf.sets[&n];
            SetSummary {
                polys: s.finite_polys().iter().map(|p| p.to_string()).collect(),
                infinity: s.include_infinity(),
            }
        });
        ProblemSummary {
            kind,
            genus: pf.context.genus,
            ceiling: pf.context.ceiling,
            search_box: pf.context.search_box,
            strict_case4: pf.context.strict_case4,
            r,
            enforce_c11: enforce,
            sequences,
            sset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub flagged: Vec<FlaggedSolution>,
    pub oracle_checked: bool,
    pub beyond_bound: Vec<Vec<u64>>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveDocument {
    pub problem: ProblemSummary,
    pub trace: BoundTrace,
    pub solutions: Vec<Vec<u64>>,
    pub sporadic: Vec<Vec<u64>>,
    pub families: Vec<InfiniteFamily>,
    pub flags: Flags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundDocument {
    pub problem: ProblemSummary,
    pub trace: BoundTrace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDocument {
    pub problem: ProblemSummary,
    pub max: u64,
    pub solutions: Vec<Vec<u64>>,
    /// Triple problems only: solutions with a vanishing cross subsum.
    pub flagged: Vec<FlaggedSolution>,
}

fn tuple(t: &[u64]) -> String {
    let parts: Vec<String> = t.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn write_tuples(f: &mut fmt::Formatter<'_>, title: &str, ts: &[Vec<u64>]) -> fmt::Result {
    writeln!(f, "{title} ({}):", ts.len())?;
    for t in ts {
        writeln!(f, "  {}", tuple(t))?;
    }
    Ok(())
}

fn write_flagged(f: &mut fmt::Formatter<'_>, flagged: &[FlaggedSolution]) -> fmt::Result {
    writeln!(f, "flagged ({}):", flagged.len())?;
    for s in flagged {
        let v: Vec<String> = s.vanishing.iter().map(|[i, j, k]| format!("[{i},{j},{k}]")).collect();
        writeln!(f, "  {} vanishing {}", tuple(&s.solution), v.join(" "))?;
    }
    Ok(())
}

fn write_problem(f: &mut fmt::Formatter<'_>, p: &ProblemSummary) -> fmt::Result {
    write!(f, "problem: {}", p.kind)?;
    if let Some(r) = p.r {
        write!(f, ", r = {r}")?;
    }
    if let Some(e) = p.enforce_c11 {
        write!(f, ", enforce_c11 = {e}")?;
    }
    writeln!(f)?;
    for (name, s) in &p.sequences {
        writeln!(f, "  {name}: roots [{}], coeffs [{}]", s.roots.join(", "), s.coeffs.join(", "))?;
    }
    Ok(())
}

impl fmt::Display for SolveDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_problem(f, &self.problem)?;
        writeln!(f, "{}", self.trace)?;
        write_tuples(f, "solutions", &self.solutions)?;
        writeln!(f, "families ({}):", self.families.len())?;
        for fam in &self.families {
            let kind = serde_json::to_value(fam.kind).expect("plain enum");
            writeln!(
                f,
                "  {} + u*{} [{}] checked at u = {:?}",
                tuple(&fam.base),
                tuple(&fam.steps),
                kind.as_str().unwrap_or_default(),
                fam.verified_at
            )?;
            for r in &fam.certificate.relations {
                writeln!(f, "    {r}")?;
            }
            for b in &fam.certificate.blocks {
                writeln!(f, "    block {b}")?;
            }
        }
        write_tuples(f, "sporadic", &self.sporadic)?;
        write_flagged(f, &self.flags.flagged)?;
        writeln!(f, "oracle checked: {}", self.flags.oracle_checked)?;
        write_tuples(f, "beyond bound", &self.flags.beyond_bound)?;
        for d in &self.flags.diagnostics {
            writeln!(f, "note: {d}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BoundDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_problem(f, &self.problem)?;
        writeln!(f, "{}", self.trace)
    }
}

impl fmt::Display for OracleDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_problem(f, &self.problem)?;
        writeln!(f, "search up to {}", self.max)?;
        write_tuples(f, "solutions", &self.solutions)?;
        if self.problem.kind == "triple_zero" {
            write_flagged(f, &self.flagged)?;
        }
        Ok(())
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report types serialize");
    s.push('\n');
    s
}

pub fn solve(pf: &ProblemFile) -> Result<SolveDocument> {
    let report: SolutionReport = match pf.instantiate() {
        Problem::SUnitSum(p) => solve_sunit_sum(&p, pf.bound_context(), pf.options())?,
        Problem::TripleZero(p) => solve_triple(&p, pf.bound_context(), pf.options())?,
    };
    Ok(SolveDocument {
        problem: ProblemSummary::of(pf),
        trace: report.trace,
        solutions: report.solutions,
        sporadic: report.sporadic,
        families: report.families,
        flags: Flags {
            flagged: report.flagged,
            oracle_checked: report.oracle_checked,
            beyond_bound: report.beyond_bound,
            diagnostics: report.diagnostics,
        },
    })
}

pub fn bound(pf: &ProblemFile) -> Result<BoundDocument> {
    let trace = match pf.instantiate() {
        Problem::SUnitSum(p) => thm1_bound_with(
            &p.rec,
            p.r,
            &p.s,
            pf.bound_context(),
            Thm1Options {
                strict_limit: pf.context.strict_case4,
            },
        )?,
        Problem::TripleZero(p) => thm2_constants(&p.u, &p.v, &p.w, &p.s, pf.bound_context())?,
    };
    Ok(BoundDocument {
        problem: ProblemSummary::of(pf),
        trace,
    })
}

/// Brute force up to `max` in every exponent, with no bound computed.
pub fn oracle(pf: &ProblemFile, max: u64) -> Result<OracleDocument> {
    let ceiling = pf.context.ceiling;
    let guard = |needed: u128| {
        if needed > u128::from(ceiling) {
            Err(Error::CostCeiling { needed, ceiling })
        } else {
            Ok(())
        }
    };
    let (solutions, flagged) = match pf.instantiate() {
        Problem::SUnitSum(p) => {
            guard(crate::solvers::binom(max.saturating_add(1), p.r))?;
            (enumerate_sunit_sums(&p, max), Vec::new())
        }
        Problem::TripleZero(p) => {
            guard(u128::from(max).saturating_add(1).pow(3))?;
            let all = enumerate_triple(&p, max, false);
            let mut solutions = Vec::new();
            let mut flagged = Vec::new();
            for t in all {
                let vanishing = c11_violations(&p, &t);
                if !vanishing.is_empty() {
                    flagged.push(FlaggedSolution {
                        solution: t.clone(),
                        vanishing,
                    });
                    if p.enforce_c11 {
                        continue;
                    }
                }
                solutions.push(t);
            }
            (solutions, flagged)
        }
    };
    Ok(OracleDocument {
        problem: ProblemSummary::of(pf),
        max,
        solutions,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    const FIXTURE: &str = r#"
[sequences.U]
roots = ["x", "x+1"]
coeffs = ["1", "-1"]

[sets.S]
polys = ["x", "x+1"]
infinity = true

[problem]
kind = "sunit_sum"
sequence = "U"
r = 2
sset = "S"
"#;

    #[test]
    fn solve_document_forms_agree() {
        let pf = parse_problem(FIXTURE).unwrap();
        let doc = solve(&pf).unwrap();
        assert_eq!(doc.trace.final_bound, 93);
        let json: serde_json::Value = serde_json::from_str(&to_json(&doc)).unwrap();
        for key in ["problem", "trace", "solutions", "families", "flags"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let listed: Vec<Vec<u64>> = serde_json::from_value(json["solutions"].clone()).unwrap();
        assert_eq!(listed, doc.solutions);
        let text = doc.to_string();
        assert!(text.contains(&format!("solutions ({}):", doc.solutions.len())));
        assert!(text.contains("  (2, 1)\n"));
    }

    #[test]
    fn oracle_and_bound() {
        let pf = parse_problem(FIXTURE).unwrap();
        let o = oracle(&pf, 6).unwrap();
        assert!(o.solutions.contains(&vec![2, 1]));
        assert_eq!(bound(&pf).unwrap().trace.final_bound, 93);
        assert!(matches!(oracle(&pf, 5000), Err(Error::CostCeiling { .. })));
    }
}
