//! Calculi as labelled axiom lists, the builtin implicational systems, and
//! the generator for the reduction calculus of a tag system.
//!
//! The reduction calculus for `T`, `ω` and `P0` has the axiom groups
//!
//! ```text
//! W    ▷ -> ω→
//! T1   (▷ -> (a_i α y)→) -> (▷ -> (y ω_i)→)        |α| = d − 1
//! T2   (▷ -> (a_i α)→) -> (▷ -> ω_i→)              |α| = d − 1
//! H    (▷ -> α→) -> A                              0 < |α| < d, A ∈ P0
//! R1   (▷ -> (y ∨ (a z)→) ∨ u) -> (▷ -> ((y a)← ∨ z) ∨ u)
//! R2   (▷ -> (y a)← ∨ z) -> (▷ -> y ∨ (a z)→)
//! ```
//!
//! where `y`, `z`, `u` and the base variable are fresh for `P0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::encode::{letter_code_over, nest_over, triangle_over, vee, Direction};
use crate::formula::{parse, Formula, FormulaError, Variable};
use crate::tagsys::{Letter, TagError, TagSystem, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("unknown builtin calculus `{0}`")]
    UnknownBuiltin(String),
    #[error("duplicate axiom label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid axiom label `{0}`")]
    InvalidLabel(String),
    #[error("connective `{symbol}` has arity {first} and {second}")]
    ArityClash {
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("the initial word must be nonempty")]
    EmptyWord,
    #[error("group {0} does not occur in the calculus")]
    MissingGroup(AxiomGroup),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Tag(#[from] TagError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomGroup {
    W,
    T1,
    T2,
    H,
    R1,
    R2,
    P0,
    Builtin,
}

impl AxiomGroup {
    pub const REDUCTION: [AxiomGroup; 6] = [
        AxiomGroup::W,
        AxiomGroup::T1,
        AxiomGroup::T2,
        AxiomGroup::H,
        AxiomGroup::R1,
        AxiomGroup::R2,
    ];

    /// Groups of the subsystem that simulates productions.
    pub const PRODUCTIONS: [AxiomGroup; 4] =
        [AxiomGroup::T1, AxiomGroup::T2, AxiomGroup::R1, AxiomGroup::R2];

    /// The group a label belongs to, read from its prefix (`T1.3` is in `T1`).
    pub fn of_label(label: &str) -> AxiomGroup {
        let prefix = label.split('.').next().unwrap_or(label);
        prefix.parse().unwrap_or(AxiomGroup::Builtin)
    }
}

impl fmt::Display for AxiomGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomGroup::W => "W",
            AxiomGroup::T1 => "T1",
            AxiomGroup::T2 => "T2",
            AxiomGroup::H => "H",
            AxiomGroup::R1 => "R1",
            AxiomGroup::R2 => "R2",
            AxiomGroup::P0 => "P0",
            AxiomGroup::Builtin => "builtin",
        };
        f.write_str(s)
    }
}

impl FromStr for AxiomGroup {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "W" => AxiomGroup::W,
            "T1" => AxiomGroup::T1,
            "T2" => AxiomGroup::T2,
            "H" => AxiomGroup::H,
            "R1" => AxiomGroup::R1,
            "R2" => AxiomGroup::R2,
            "P0" => AxiomGroup::P0,
            "builtin" => AxiomGroup::Builtin,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub label: String,
    pub group: AxiomGroup,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calculus {
    name: String,
    axioms: Vec<Axiom>,
    signature: BTreeMap<Arc<str>, usize>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
}

impl Calculus {
    /// Groups are taken from the label prefixes.
    pub fn new(
        name: impl Into<String>,
        axioms: impl IntoIterator<Item = (String, Formula)>,
    ) -> Result<Calculus, CalculusError> {
        let mut out = Calculus {
            name: name.into(),
            axioms: Vec::new(),
            signature: BTreeMap::new(),
        };
        for (label, formula) in axioms {
            let group = AxiomGroup::of_label(&label);
            out.push(Axiom {
                label,
                group,
                formula,
            })?;
        }
        Ok(out)
    }

    fn push(&mut self, axiom: Axiom) -> Result<(), CalculusError> {
        if !valid_label(&axiom.label) {
            return Err(CalculusError::InvalidLabel(axiom.label));
        }
        if self.axiom(&axiom.label).is_some() {
            return Err(CalculusError::DuplicateLabel(axiom.label));
        }
        for (sym, arity) in axiom.formula.connectives() {
            match self.signature.get(&sym) {
                Some(&known) if known != arity => {
                    return Err(CalculusError::ArityClash {
                        symbol: sym.to_string(),
                        first: known,
                        second: arity,
                    })
                }
                Some(_) => {}
                None => {
                    self.signature.insert(sym, arity);
                }
            }
        }
        self.axioms.push(axiom);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Calculus {
        self.name = name.into();
        self
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn axiom(&self, label: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.label == label)
    }

    pub fn group(&self, group: AxiomGroup) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(move |a| a.group == group)
    }

    /// Connectives other than `->`, with arities.
    pub fn signature(&self) -> &BTreeMap<Arc<str>, usize> {
        &self.signature
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        self.axioms.iter().flat_map(|a| a.formula.vars()).collect()
    }

    /// Restriction to the given groups, keeping axiom order.
    pub fn subsystem(&self, groups: &[AxiomGroup]) -> Result<Calculus, CalculusError> {
        for g in groups {
            if self.group(*g).next().is_none() {
                return Err(CalculusError::MissingGroup(*g));
            }
        }
        let tag: Vec<String> = groups.iter().map(|g| g.to_string()).collect();
        let mut out = Calculus {
            name: format!("{}[{}]", self.name, tag.join(",")),
            axioms: Vec::new(),
            signature: BTreeMap::new(),
        };
        for a in self.axioms.iter().filter(|a| groups.contains(&a.group)) {
            out.push(a.clone())?;
        }
        Ok(out)
    }

    /// The base variable of a reduction calculus, read off a guard.
    pub fn reduction_base(&self) -> Option<Variable> {
        self.axioms
            .iter()
            .filter(|a| AxiomGroup::REDUCTION.contains(&a.group))
            .find_map(|a| {
                let (lhs, _) = a.formula.as_imp()?;
                let guard = match lhs.as_imp() {
                    Some((g, _)) if a.group != AxiomGroup::W => g,
                    _ => lhs,
                };
                let (_, base) = guard.as_imp()?;
                let base = base.as_var()?;
                (*guard == triangle_over(&Formula::Var(base.clone()))).then(|| base.clone())
            })
    }

    /// Reads the line format written by `Display`.
    pub fn parse(text: &str) -> Result<Calculus, CalculusError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (n, header) = lines.next().ok_or(CalculusError::Parse {
            line: 1,
            message: "missing `calculus:` header".into(),
        })?;
        let name = header
            .strip_prefix("calculus:")
            .map(str::trim)
            .filter(|s| !s.is_empty() && !s.contains(char::is_whitespace))
            .ok_or_else(|| CalculusError::Parse {
                line: n,
                message: format!("expected `calculus: <name>`, found `{header}`"),
            })?;
        let mut axioms = Vec::new();
        for (n, line) in lines {
            let (label, formula) = line.split_once(':').ok_or_else(|| CalculusError::Parse {
                line: n,
                message: format!("expected `<label>: <formula>`, found `{line}`"),
            })?;
            let formula = parse(formula).map_err(|e| CalculusError::Parse {
                line: n,
                message: e.to_string(),
            })?;
            axioms.push((label.trim().to_string(), formula));
        }
        Calculus::new(name, axioms)
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "calculus: {}", self.name)?;
        for a in &self.axioms {
            writeln!(f, "{}: {}", a.label, a.formula)?;
        }
        Ok(())
    }
}

pub const BUILTINS: [&str; 4] = ["int_impl", "cl_impl", "lukasiewicz_single", "meredith_single"];

pub fn builtin(name: &str) -> Result<Calculus, CalculusError> {
    let a1 = ("A1", "x -> y -> x");
    let a2 = ("A2", "(x -> y -> z) -> (x -> y) -> x -> z");
    let peirce = ("Peirce", "((x -> y) -> x) -> x");
    let axioms: Vec<(&str, &str)> = match name {
        "int_impl" => vec![a1, a2],
        "cl_impl" => vec![a1, a2, peirce],
        "lukasiewicz_single" => vec![("L", "((x -> y) -> z) -> (z -> x) -> u -> x")],
        "meredith_single" => vec![("M", "((x -> y) -> z) -> u -> (y -> z -> v) -> y -> v")],
        _ => return Err(CalculusError::UnknownBuiltin(name.to_string())),
    };
    Calculus::new(
        name,
        axioms
            .into_iter()
            .map(|(l, f)| (l.to_string(), parse(f).expect("builtin axioms parse"))),
    )
}

/// Variables chosen fresh for `P0` when building a reduction calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshVars {
    pub base: Variable,
    pub y: Variable,
    pub z: Variable,
    pub u: Variable,
}

impl FreshVars {
    /// First four names `v0, v1, ...` that do not occur in `p0`.
    pub fn for_calculus(p0: &Calculus) -> FreshVars {
        let used = p0.vars();
        let mut fresh = (0..)
            .map(|k| Variable::named(&format!("v{k}")))
            .filter(|v| !used.contains(v));
        let mut next = || fresh.next().expect("unbounded supply of names");
        FreshVars {
            base: next(),
            y: next(),
            z: next(),
            u: next(),
        }
    }
}

/// All words of exactly `len` letters over `m` letters, lexicographically.
pub fn words_of_length(m: usize, len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=m).map(move |i| {
                    let mut w = w.clone();
                    w.push(Letter::new(i).expect("positive index"));
                    w
                })
            })
            .collect();
    }
    out
}

fn right_nest(items: Vec<Formula>) -> Formula {
    items
        .into_iter()
        .rev()
        .reduce(|acc, f| vee(f, acc))
        .expect("nonempty item list")
}

/// The reduction calculus for tag system `t`, initial word `omega` and `p0`.
pub fn build_reduction(
    t: &TagSystem,
    omega: &[Letter],
    p0: &Calculus,
) -> Result<Calculus, CalculusError> {
    if omega.is_empty() {
        return Err(CalculusError::EmptyWord);
    }
    t.step(omega)?;
    let fresh = FreshVars::for_calculus(p0);
    let b = Formula::Var(fresh.base.clone());
    let y = Formula::Var(fresh.y.clone());
    let z = Formula::Var(fresh.z.clone());
    let u = Formula::Var(fresh.u.clone());
    let tri = triangle_over(&b);
    let guarded = |body: Formula| Formula::imp(tri.clone(), body);
    let code = |w: &[Letter]| letter_codes(w, &b);

    let m = t.alphabet().len();
    let d = t.deletion();
    let mut axioms: Vec<(String, Formula)> = Vec::new();
    axioms.push((
        "W".into(),
        guarded(nest_over(omega, Direction::Forward, &b)),
    ));

    let tails = words_of_length(m, d - 1);
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for a in t.letters() {
        let production = t.production(a)?;
        for alpha in &tails {
            let mut head = vec![a];
            head.extend_from_slice(alpha);

            let mut premise = code(&head);
            premise.push(y.clone());
            let mut conclusion = vec![y.clone()];
            conclusion.extend(code(production));
            t1.push(Formula::imp(
                guarded(right_nest(premise)),
                guarded(right_nest(conclusion)),
            ));

            t2.push(Formula::imp(
                guarded(right_nest(code(&head))),
                guarded(right_nest(code(production))),
            ));
        }
    }
    let mut h = Vec::new();
    for len in 1..d {
        for alpha in words_of_length(m, len) {
            for a in p0.axioms() {
                h.push(Formula::imp(
                    guarded(right_nest(code(&alpha))),
                    a.formula.clone(),
                ));
            }
        }
    }
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for a in t.letters() {
        let ac = letter_code_over(a, &b);
        r1.push(Formula::imp(
            guarded(vee(vee(y.clone(), vee(ac.clone(), z.clone())), u.clone())),
            guarded(vee(vee(vee(y.clone(), ac.clone()), z.clone()), u.clone())),
        ));
        r2.push(Formula::imp(
            guarded(vee(vee(y.clone(), ac.clone()), z.clone())),
            guarded(vee(y.clone(), vee(ac, z.clone()))),
        ));
    }
    for (group, list) in [("T1", t1), ("T2", t2), ("H", h), ("R1", r1), ("R2", r2)] {
        axioms.extend(
            list.into_iter()
                .enumerate()
                .map(|(i, f)| (format!("{group}.{}", i + 1), f)),
        );
    }
    let name = format!("reduction_{}", p0.name());
    let mut out = Calculus::new(name, axioms)?;
    // p0's own connectives belong to the signature even when unused by H
    for (sym, arity) in p0.signature() {
        out.signature.entry(sym.clone()).or_insert(*arity);
    }
    Ok(out)
}

fn letter_codes(w: &[Letter], base: &Formula) -> Vec<Formula> {
    w.iter().map(|&l| letter_code_over(l, base)).collect()
}
