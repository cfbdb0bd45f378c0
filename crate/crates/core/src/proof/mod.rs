//! Hilbert-style proofs under modus ponens and substitution.
//!
//! A [`Proof`] is a flat list of [`Step`]s that refer back to earlier
//! steps by index. [`check`] is the trusted kernel; everything else in this
//! module builds proofs and relies on the kernel for validation.
//!
//! Substitution is only allowed on lines whose ancestry contains no
//! hypothesis. This keeps derivations from hypotheses sound and makes the
//! deduction theorem hold.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::calculus::{AxiomGroup, Calculus};
use crate::formula::{match_instance, Formula, Substitution};

mod elaborate;
mod generate;
mod text;

pub use elaborate::{
    deduction_elaborate, disjunction_intro_left, disjunction_intro_right, identity_proof,
    inclusion_proof, is_provable_disjunction, prove_alphabetic, weaken,
};
pub use generate::{halting_completion, merge_code, shift_assoc, simulate_trace};
pub use text::{parse_proof, proof_calculus_name, write_proof};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("axiom `{label}` is not in calculus `{calculus}`")]
    UnknownAxiom { label: String, calculus: String },
    #[error("no axiom of {scope} has `{target}` as an instance")]
    NoInstance { scope: String, target: Formula },
    #[error("hypothesis {0} does not exist")]
    NoHypothesis(usize),
    #[error("line {0} does not exist")]
    NoLine(usize),
    #[error("modus ponens on lines {major} and {minor}: premise mismatch")]
    PremiseMismatch { major: usize, minor: usize },
    #[error("line {0} depends on a hypothesis and cannot be instantiated")]
    SubstOnHypothesis(usize),
    #[error("proof has no hypothesis to discharge")]
    NothingToDischarge,
    #[error("input proof is invalid at line {}: {reason}", step + 1)]
    InvalidInput { step: usize, reason: String },
    #[error("hypothesis {index} of the imported proof is `{found}`")]
    HypothesisMismatch { index: usize, found: Formula },
    #[error("`{0}` is not a disjunction of letter codes with a provable branch")]
    NotAlphabetic(Formula),
    #[error("calculus `{0}` is not a reduction calculus")]
    NotReduction(String),
    #[error("word arguments must be nonempty")]
    EmptyWord,
    #[error("trace does not match the calculus: {0}")]
    TraceMismatch(String),
    #[error("the trace does not halt")]
    NotHalted,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Axiom(String),
    Hyp(usize),
    Subst(usize, Substitution),
    /// `MP(major, minor)`: from `minor` and `minor -> c` at `major`, infer `c`.
    MP(usize, usize),
}

/// Step references are 0-based indices into `steps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub calculus: Calculus,
    pub hypotheses: Vec<Formula>,
    pub steps: Vec<Step>,
    pub conclusion: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid { conclusion: Formula },
    /// `step` is 0-based.
    Invalid { step: usize, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        match self {
            Verdict::Valid { conclusion } => Some(conclusion),
            Verdict::Invalid { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid { conclusion } => write!(f, "valid: {conclusion}"),
            Verdict::Invalid { step, reason } => write!(f, "invalid at step {}: {reason}", step + 1),
        }
    }
}

/// The proof kernel.
pub fn check(p: &Proof) -> Verdict {
    let invalid = |step: usize, reason: String| Verdict::Invalid { step, reason };
    let mut lines: Vec<Formula> = Vec::with_capacity(p.steps.len());
    let mut uses_hyp: Vec<bool> = Vec::with_capacity(p.steps.len());
    for (k, step) in p.steps.iter().enumerate() {
        let earlier = |j: usize| j < k;
        let (formula, dep) = match step {
            Step::Axiom(label) => match p.calculus.axiom(label) {
                Some(a) => (a.formula.clone(), false),
                None => return invalid(k, format!("unknown axiom `{label}`")),
            },
            Step::Hyp(i) => match p.hypotheses.get(*i) {
                Some(h) => (h.clone(), true),
                None => return invalid(k, format!("no hypothesis {}", i + 1)),
            },
            Step::Subst(j, s) => {
                if !earlier(*j) {
                    return invalid(k, format!("reference to line {} is not earlier", j + 1));
                }
                if uses_hyp[*j] {
                    return invalid(k, "subst-on-hypothesis".into());
                }
                for (_, f) in s.iter() {
                    for (sym, arity) in f.connectives() {
                        if p.calculus.signature().get(&sym) != Some(&arity) {
                            return invalid(
                                k,
                                format!("connective `{sym}`/{arity} is outside the signature"),
                            );
                        }
                    }
                }
                (s.apply(&lines[*j]), false)
            }
            Step::MP(major, minor) => {
                if !earlier(*major) || !earlier(*minor) {
                    return invalid(k, "modus ponens refers to a later line".into());
                }
                match lines[*major].as_imp() {
                    Some((premise, c)) if *premise == lines[*minor] => {
                        (c.clone(), uses_hyp[*major] || uses_hyp[*minor])
                    }
                    Some(_) => return invalid(k, "premise-mismatch".into()),
                    None => return invalid(k, "major premise is not an implication".into()),
                }
            }
        };
        lines.push(formula);
        uses_hyp.push(dep);
    }
    match lines.get(p.conclusion) {
        Some(c) => Verdict::Valid {
            conclusion: c.clone(),
        },
        None => invalid(p.conclusion, "conclusion is not a line of the proof".into()),
    }
}

impl Proof {
    /// The formula on each line, assuming the proof is valid.
    pub fn formulas(&self) -> Vec<Formula> {
        let mut lines: Vec<Formula> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let f = match step {
                Step::Axiom(label) => self.calculus.axiom(label).expect("known axiom").formula.clone(),
                Step::Hyp(i) => self.hypotheses[*i].clone(),
                Step::Subst(j, s) => s.apply(&lines[*j]),
                Step::MP(major, _) => lines[*major].as_imp().expect("implication").1.clone(),
            };
            lines.push(f);
        }
        lines
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Steps other than axiom and hypothesis lines.
    pub fn inference_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Subst(..) | Step::MP(..)))
            .count()
    }

    pub fn mp_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::MP(..))).count()
    }
}

/// Incremental proof construction with the same rules as the kernel.
///
/// Axiom lines are shared, and substitutions that change nothing are
/// skipped.
#[derive(Debug, Clone)]
pub struct ProofBuilder<'c> {
    calculus: &'c Calculus,
    hypotheses: Vec<Formula>,
    steps: Vec<Step>,
    lines: Vec<Formula>,
    uses_hyp: Vec<bool>,
    axiom_lines: HashMap<String, usize>,
    hyp_lines: HashMap<usize, usize>,
}

impl<'c> ProofBuilder<'c> {
    pub fn new(calculus: &'c Calculus) -> Self {
        Self::with_hypotheses(calculus, Vec::new())
    }

    pub fn with_hypotheses(calculus: &'c Calculus, hypotheses: Vec<Formula>) -> Self {
        ProofBuilder {
            calculus,
            hypotheses,
            steps: Vec::new(),
            lines: Vec::new(),
            uses_hyp: Vec::new(),
            axiom_lines: HashMap::new(),
            hyp_lines: HashMap::new(),
        }
    }

    pub fn calculus(&self) -> &'c Calculus {
        self.calculus
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn formula(&self, line: usize) -> &Formula {
        &self.lines[line]
    }

    pub fn depends_on_hypothesis(&self, line: usize) -> bool {
        self.uses_hyp[line]
    }

    fn push(&mut self, step: Step, formula: Formula, dep: bool) -> usize {
        self.steps.push(step);
        self.lines.push(formula);
        self.uses_hyp.push(dep);
        self.steps.len() - 1
    }

    fn line(&self, line: usize) -> Result<&Formula, ProofError> {
        self.lines.get(line).ok_or(ProofError::NoLine(line))
    }

    pub fn axiom(&mut self, label: &str) -> Result<usize, ProofError> {
        if let Some(&line) = self.axiom_lines.get(label) {
            return Ok(line);
        }
        let a = self
            .calculus
            .axiom(label)
            .ok_or_else(|| ProofError::UnknownAxiom {
                label: label.to_string(),
                calculus: self.calculus.name().to_string(),
            })?;
        let line = self.push(Step::Axiom(label.to_string()), a.formula.clone(), false);
        self.axiom_lines.insert(label.to_string(), line);
        Ok(line)
    }

    pub fn hyp(&mut self, index: usize) -> Result<usize, ProofError> {
        if let Some(&line) = self.hyp_lines.get(&index) {
            return Ok(line);
        }
        let h = self
            .hypotheses
            .get(index)
            .ok_or(ProofError::NoHypothesis(index))?
            .clone();
        let line = self.push(Step::Hyp(index), h, true);
        self.hyp_lines.insert(index, line);
        Ok(line)
    }

    pub fn subst(&mut self, line: usize, s: Substitution) -> Result<usize, ProofError> {
        let f = self.line(line)?;
        let out = s.apply(f);
        if out == *f {
            return Ok(line);
        }
        if self.uses_hyp[line] {
            return Err(ProofError::SubstOnHypothesis(line));
        }
        Ok(self.push(Step::Subst(line, s.without_trivial()), out, false))
    }

    pub fn mp(&mut self, major: usize, minor: usize) -> Result<usize, ProofError> {
        let m = self.line(minor)?;
        let (premise, c) = self
            .line(major)?
            .as_imp()
            .ok_or(ProofError::PremiseMismatch { major, minor })?;
        if premise != m {
            return Err(ProofError::PremiseMismatch { major, minor });
        }
        let c = c.clone();
        let dep = self.uses_hyp[major] || self.uses_hyp[minor];
        Ok(self.push(Step::MP(major, minor), c, dep))
    }

    /// A line proving `target` as an instance of the axiom `label`.
    pub fn instance(&mut self, label: &str, target: &Formula) -> Result<usize, ProofError> {
        let axiom = self.axiom(label)?;
        let s = match_instance(self.formula(axiom), target).ok_or_else(|| {
            ProofError::NoInstance {
                scope: format!("axiom {label}"),
                target: target.clone(),
            }
        })?;
        self.subst(axiom, s)
    }

    /// A line proving `target` as an instance of the first axiom that has it
    /// as one, optionally restricted to a group.
    pub fn instance_of_any(
        &mut self,
        group: Option<AxiomGroup>,
        target: &Formula,
    ) -> Result<usize, ProofError> {
        let label = self
            .calculus
            .axioms()
            .iter()
            .filter(|a| group.is_none_or(|g| a.group == g))
            .find(|a| match_instance(&a.formula, target).is_some())
            .map(|a| a.label.clone())
            .ok_or_else(|| ProofError::NoInstance {
                scope: match group {
                    Some(g) => format!("group {g}"),
                    None => format!("calculus {}", self.calculus.name()),
                },
                target: target.clone(),
            })?;
        self.instance(&label, target)
    }

    /// Detaches `line` with the first axiom of `groups` whose premise it
    /// instantiates, returning the conclusion line and the axiom label.
    pub fn detach_with(
        &mut self,
        groups: &[AxiomGroup],
        line: usize,
    ) -> Result<Option<(usize, String)>, ProofError> {
        let minor = self.line(line)?.clone();
        let found = self
            .calculus
            .axioms()
            .iter()
            .filter(|a| groups.contains(&a.group))
            .find_map(|a| {
                let (premise, _) = a.formula.as_imp()?;
                let s = match_instance(premise, &minor)?;
                Some((a.label.clone(), s))
            });
        let Some((label, s)) = found else {
            return Ok(None);
        };
        let axiom = self.axiom(&label)?;
        let major = self.subst(axiom, s)?;
        Ok(Some((self.mp(major, line)?, label)))
    }

    /// Replays `proof` into this builder and returns the line of its
    /// conclusion. Hypotheses of `proof` must coincide with this builder's.
    pub fn replay(&mut self, proof: &Proof) -> Result<usize, ProofError> {
        let mut map: Vec<usize> = Vec::with_capacity(proof.steps.len());
        for step in &proof.steps {
            let line = match step {
                Step::Axiom(label) => {
                    let ours = self.calculus.axiom(label).map(|a| &a.formula);
                    let theirs = proof.calculus.axiom(label).map(|a| &a.formula);
                    if ours.is_none() || ours != theirs {
                        return Err(ProofError::UnknownAxiom {
                            label: label.clone(),
                            calculus: self.calculus.name().to_string(),
                        });
                    }
                    self.axiom(label)?
                }
                Step::Hyp(i) => {
                    let theirs = proof.hypotheses.get(*i).ok_or(ProofError::NoHypothesis(*i))?;
                    if self.hypotheses.get(*i) != Some(theirs) {
                        return Err(ProofError::HypothesisMismatch {
                            index: *i,
                            found: theirs.clone(),
                        });
                    }
                    self.hyp(*i)?
                }
                Step::Subst(j, s) => {
                    let j = *map.get(*j).ok_or(ProofError::NoLine(*j))?;
                    self.subst(j, s.clone())?
                }
                Step::MP(major, minor) => {
                    let major = *map.get(*major).ok_or(ProofError::NoLine(*major))?;
                    let minor = *map.get(*minor).ok_or(ProofError::NoLine(*minor))?;
                    self.mp(major, minor)?
                }
            };
            map.push(line);
        }
        map.get(proof.conclusion)
            .copied()
            .ok_or(ProofError::NoLine(proof.conclusion))
    }

    pub fn finish(self, conclusion: usize) -> Proof {
        assert!(conclusion < self.steps.len(), "conclusion must be a line");
        Proof {
            calculus: self.calculus.clone(),
            hypotheses: self.hypotheses,
            steps: self.steps,
            conclusion,
        }
    }
}
