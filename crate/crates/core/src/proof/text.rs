//! Line-based proof files.
//!
//! ```text
//! proof over int_impl
//! hyp 1: x
//! 1: AX A1
//! 2: HYP 1
//! 3: SUB 1 {x:=x -> x; y:=y}
//! 4: MP 3 2
//! qed 4
//! ```
//!
//! Line and hypothesis numbers are 1-based.

use std::fmt::Write as _;

use crate::calculus::Calculus;
use crate::formula::{parse, Substitution, Variable};

use super::{Proof, ProofError, Step};

pub fn write_proof(p: &Proof) -> String {
    let mut out = String::new();
    writeln!(out, "proof over {}", p.calculus.name()).unwrap();
    for (i, h) in p.hypotheses.iter().enumerate() {
        writeln!(out, "hyp {}: {h}", i + 1).unwrap();
    }
    for (k, step) in p.steps.iter().enumerate() {
        let body = match step {
            Step::Axiom(label) => format!("AX {label}"),
            Step::Hyp(i) => format!("HYP {}", i + 1),
            Step::Subst(j, s) => format!("SUB {} {s}", j + 1),
            Step::MP(j, i) => format!("MP {} {}", j + 1, i + 1),
        };
        writeln!(out, "{}: {body}", k + 1).unwrap();
    }
    writeln!(out, "qed {}", p.conclusion + 1).unwrap();
    out
}

/// The calculus name from a proof file's header.
pub fn proof_calculus_name(text: &str) -> Option<&str> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())?
        .strip_prefix("proof over ")
        .map(str::trim)
}

fn index(text: &str, line: usize) -> Result<usize, ProofError> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n - 1),
        _ => Err(ProofError::Parse {
            line,
            message: format!("expected a positive number, found `{text}`"),
        }),
    }
}

fn parse_substitution(text: &str, line: usize) -> Result<Substitution, ProofError> {
    let err = |message: String| ProofError::Parse { line, message };
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| err(format!("expected `{{...}}`, found `{text}`")))?;
    let mut s = Substitution::new();
    for binding in inner.split(';').map(str::trim).filter(|b| !b.is_empty()) {
        let (v, f) = binding
            .split_once(":=")
            .ok_or_else(|| err(format!("expected `var:=formula`, found `{binding}`")))?;
        let v = Variable::new(v.trim()).map_err(|e| err(e.to_string()))?;
        let f = parse(f).map_err(|e| err(e.to_string()))?;
        if s.insert(v.clone(), f).is_some() {
            return Err(err(format!("variable `{v}` bound twice")));
        }
    }
    Ok(s)
}

/// Reads a proof file; `resolve` maps the header's calculus name to a calculus.
pub fn parse_proof(
    text: &str,
    resolve: impl FnOnce(&str) -> Option<Calculus>,
) -> Result<Proof, ProofError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or(ProofError::Parse {
        line: 1,
        message: "empty proof file".into(),
    })?;
    let name = header
        .strip_prefix("proof over ")
        .map(str::trim)
        .ok_or_else(|| ProofError::Parse {
            line: n,
            message: format!("expected `proof over <name>`, found `{header}`"),
        })?;
    let calculus = resolve(name).ok_or_else(|| ProofError::Parse {
        line: n,
        message: format!("unknown calculus `{name}`"),
    })?;

    let mut hypotheses = Vec::new();
    let mut steps = Vec::new();
    let mut conclusion = None;
    for (n, l) in lines {
        let err = |message: String| ProofError::Parse { line: n, message };
        if conclusion.is_some() {
            return Err(err("text after `qed`".into()));
        }
        if let Some(rest) = l.strip_prefix("qed ") {
            conclusion = Some(index(rest.trim(), n)?);
            continue;
        }
        if let Some(rest) = l.strip_prefix("hyp ") {
            let (k, f) = rest
                .split_once(':')
                .ok_or_else(|| err(format!("malformed hypothesis `{l}`")))?;
            if index(k.trim(), n)? != hypotheses.len() || !steps.is_empty() {
                return Err(err("hypotheses must be numbered 1, 2, ... before the steps".into()));
            }
            hypotheses.push(parse(f).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let (k, body) = l
            .split_once(':')
            .ok_or_else(|| err(format!("malformed step `{l}`")))?;
        if index(k.trim(), n)? != steps.len() {
            return Err(err(format!("expected step {}", steps.len() + 1)));
        }
        let body = body.trim();
        let (op, args) = body.split_once(' ').unwrap_or((body, ""));
        let args = args.trim();
        let step = match op {
            "AX" if !args.is_empty() => Step::Axiom(args.to_string()),
            "HYP" => Step::Hyp(index(args, n)?),
            "SUB" => {
                let (j, s) = args
                    .split_once(' ')
                    .ok_or_else(|| err(format!("malformed substitution step `{l}`")))?;
                Step::Subst(index(j, n)?, parse_substitution(s, n)?)
            }
            "MP" => {
                let mut it = args.split_whitespace();
                match (it.next(), it.next(), it.next()) {
                    (Some(j), Some(i), None) => Step::MP(index(j, n)?, index(i, n)?),
                    _ => return Err(err(format!("malformed MP step `{l}`"))),
                }
            }
            _ => return Err(err(format!("unknown step `{body}`"))),
        };
        steps.push(step);
    }
    let conclusion = conclusion.ok_or(ProofError::Parse {
        line: text.lines().count(),
        message: "missing `qed`".into(),
    })?;
    Ok(Proof {
        calculus,
        hypotheses,
        steps,
        conclusion,
    })
}
