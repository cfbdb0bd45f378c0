//! Bounded forward closure by condensed detachment.
//!
//! Closure under substitution is infinite at every level, so the closure is
//! computed on schemes: a scheme stands for all of its instances, and a new
//! scheme that is an instance of a retained one adds nothing. Depth counts
//! condensed-detachment steps; one such step bundles two substitutions and
//! one modus ponens, so it is not the same number as a derivation height
//! under the two separate rules.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::calculus::{build_reduction, AxiomGroup, Calculus, CalculusError};
use crate::encode::{code_of, decode_instance, CodeType};
use crate::formula::{canonical_variant, match_instance, Formula};
use crate::proof::{Proof, Step};
use crate::tagsys::{Letter, TagError, TagSystem, Word};
use crate::unify::{mgu, rename_apart};

/// Condensed detachment: the most general result of modus ponens with
/// `major` and an instance of `minor` renamed apart from it.
pub fn cd_step(major: &Formula, minor: &Formula) -> Option<Formula> {
    let (premise, conclusion) = major.as_imp()?;
    let (minor, _) = rename_apart(minor, &major.vars());
    let s = mgu(premise, &minor)?;
    Some(s.apply(conclusion))
}

/// The five-line proof behind one [`cd_step`], over a calculus whose two
/// axioms are `major` and `minor`.
pub fn cd_witness(major: &Formula, minor: &Formula) -> Option<Proof> {
    let (premise, _) = major.as_imp()?;
    let (renamed, renaming) = rename_apart(minor, &major.vars());
    let s = mgu(premise, &renamed)?;
    let calculus = Calculus::new(
        "cd",
        [("major".to_string(), major.clone()), ("minor".to_string(), minor.clone())],
    )
    .ok()?;
    Some(Proof {
        calculus,
        hypotheses: Vec::new(),
        steps: vec![
            Step::Axiom("major".into()),
            Step::Axiom("minor".into()),
            Step::Subst(0, s.clone()),
            Step::Subst(1, renaming.compose(&s)),
            Step::MP(2, 3),
        ],
        conclusion: 4,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub formula: Formula,
    pub depth: usize,
    /// `(major, minor)` indices; `None` for axioms.
    pub parents: Option<(usize, usize)>,
    pub label: Option<String>,
    /// False once a later, more general scheme has been retained.
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeSet {
    pub schemes: Vec<Scheme>,
    /// Deepest level that was fully expanded.
    pub depth: usize,
    /// A level produced nothing new, so deeper levels would be empty too.
    pub saturated: bool,
    /// The size cap stopped the run part-way through a level.
    pub truncated: bool,
}

impl SchemeSet {
    pub fn len(&self) -> usize {
        self.schemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemes.is_empty()
    }

    pub fn active(&self) -> impl Iterator<Item = (usize, &Scheme)> {
        self.schemes.iter().enumerate().filter(|(_, s)| s.active)
    }

    pub fn at_depth(&self, depth: usize) -> impl Iterator<Item = (usize, &Scheme)> {
        self.schemes
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.depth == depth)
    }

    /// Whether some active scheme has `f` as an instance.
    pub fn subsumes(&self, f: &Formula) -> bool {
        self.active().any(|(_, s)| match_instance(&s.formula, f).is_some())
    }
}

/// Breadth-first closure of `c` under [`cd_step`], to `max_depth` levels or
/// `max_size` schemes.
pub fn saturate(c: &Calculus, max_depth: usize, max_size: usize) -> SchemeSet {
    saturate_until(c, max_depth, max_size, |_| false)
}

/// Like [`saturate`], but stops after the first level that retains a scheme
/// satisfying `stop`.
pub fn saturate_until(
    c: &Calculus,
    max_depth: usize,
    max_size: usize,
    stop: impl Fn(&Formula) -> bool,
) -> SchemeSet {
    let mut set = SchemeSet {
        schemes: c
            .axioms()
            .iter()
            .map(|a| Scheme {
                formula: a.formula.clone(),
                depth: 0,
                parents: None,
                label: Some(a.label.clone()),
                active: true,
            })
            .collect(),
        depth: 0,
        saturated: false,
        truncated: false,
    };
    if set.schemes.iter().any(|s| stop(&s.formula)) {
        return set;
    }
    for depth in 1..=max_depth {
        let active: Vec<usize> = set.active().map(|(i, _)| i).collect();
        let pairs: Vec<(usize, usize)> = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| {
                set.schemes[i].depth + 1 == depth || set.schemes[j].depth + 1 == depth
            })
            .collect();
        let mut candidates: Vec<(Formula, usize, usize)> = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let f = cd_step(&set.schemes[i].formula, &set.schemes[j].formula)?;
                let f = canonical_variant(&f, "x");
                (!set.subsumes(&f)).then_some((f, i, j))
            })
            .collect();
        candidates.sort_by(|a, b| {
            (a.0.size(), &a.0, a.1, a.2).cmp(&(b.0.size(), &b.0, b.1, b.2))
        });
        candidates.dedup_by(|later, earlier| later.0 == earlier.0);

        let mut added = 0;
        let mut hit = false;
        for (f, i, j) in candidates {
            if set.subsumes(&f) {
                continue;
            }
            if set.schemes.len() >= max_size {
                set.truncated = true;
                return set;
            }
            for s in set.schemes.iter_mut().filter(|s| s.active) {
                if match_instance(&f, &s.formula).is_some() {
                    s.active = false;
                }
            }
            hit |= stop(&f);
            set.schemes.push(Scheme {
                formula: f,
                depth,
                parents: Some((i, j)),
                label: None,
                active: true,
            });
            added += 1;
        }
        set.depth = depth;
        if added == 0 {
            set.saturated = true;
            break;
        }
        if hit {
            break;
        }
    }
    set
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Instance of a code of a word reachable from the initial word.
    Code { word: Word, code_type: CodeType },
    /// Instance of a production or halting axiom.
    Axiom { label: String },
    /// A code of a word not reached before the fuel ran out.
    Inconclusive { word: Word, code_type: CodeType },
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub index: usize,
    pub depth: usize,
    pub class: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    /// Schemes that are both a code instance and an axiom instance.
    pub overlaps: Vec<usize>,
}

impl AuditReport {
    pub fn violations(&self) -> usize {
        self.count(|c| matches!(c, Classification::Violation))
    }

    pub fn inconclusive(&self) -> usize {
        self.count(|c| matches!(c, Classification::Inconclusive { .. }))
    }

    fn count(&self, pred: impl Fn(&Classification) -> bool) -> usize {
        self.entries.iter().filter(|e| pred(&e.class)).count()
    }

    /// No violations, no overlaps, nothing left undecided.
    pub fn is_clean(&self) -> bool {
        self.violations() == 0 && self.inconclusive() == 0 && self.overlaps.is_empty()
    }

    /// One line per scheme, numbered from 1.
    pub fn render(&self, t: &TagSystem) -> String {
        let mut out = String::new();
        for e in &self.entries {
            write!(out, "scheme {} depth {}: ", e.index + 1, e.depth).unwrap();
            match &e.class {
                Classification::Code { word, code_type } => {
                    writeln!(out, "CODE word={} type={code_type}", t.format_word(word))
                }
                Classification::Axiom { label } => writeln!(out, "AXIOM {label}"),
                Classification::Inconclusive { word, code_type } => {
                    writeln!(out, "INCONCLUSIVE word={} type={code_type}", t.format_word(word))
                }
                Classification::Violation => writeln!(out, "VIOLATION"),
            }
            .unwrap();
        }
        out
    }
}

/// Checks that every scheme of `s` is an instance of a code of a word
/// reachable from `omega`, or of an axiom of `full` other than `W`.
pub fn audit_shapes(
    s: &SchemeSet,
    t: &TagSystem,
    omega: &[Letter],
    full: &Calculus,
    fuel: usize,
) -> Result<AuditReport, TagError> {
    let trace = t.run(omega, fuel)?;
    let reachable: BTreeSet<&Word> = trace.words.iter().collect();
    let complete = !trace.fuel_exhausted;
    let base = full.reduction_base();
    let axioms: Vec<_> = full
        .axioms()
        .iter()
        .filter(|a| a.group != AxiomGroup::W)
        .collect();

    let classify = |f: &Formula| {
        let code = decode_instance(f).filter(|d| {
            let letters_ok = d.word.iter().all(|l| l.index() <= t.alphabet().len());
            let literal = base
                .as_ref()
                .and_then(|b| code_of(&d.word, d.code_type, b).ok())
                .is_some_and(|c| match_instance(&c, f).is_some());
            letters_ok && literal
        });
        let axiom = axioms
            .iter()
            .find(|a| match_instance(&a.formula, f).is_some())
            .map(|a| a.label.clone());
        (code, axiom)
    };

    let results: Vec<_> = s.schemes.par_iter().map(|sc| classify(&sc.formula)).collect();
    let mut report = AuditReport {
        entries: Vec::with_capacity(s.len()),
        overlaps: Vec::new(),
    };
    for (index, (sc, (code, axiom))) in s.schemes.iter().zip(results).enumerate() {
        if code.is_some() && axiom.is_some() {
            report.overlaps.push(index);
        }
        let class = match (code, axiom) {
            (Some(d), _) if reachable.contains(&d.word) => Classification::Code {
                word: d.word,
                code_type: d.code_type,
            },
            (_, Some(label)) => Classification::Axiom { label },
            (Some(d), None) if !complete => Classification::Inconclusive {
                word: d.word,
                code_type: d.code_type,
            },
            _ => Classification::Violation,
        };
        report.entries.push(AuditEntry {
            index,
            depth: sc.depth,
            class,
        });
    }
    Ok(report)
}

/// Whether `f` is an instance of a code of a word shorter than `d`.
pub fn is_short_code(f: &Formula, d: usize) -> bool {
    decode_instance(f).is_some_and(|c| c.word.len() < d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightSearch {
    pub calculus: Calculus,
    pub set: SchemeSet,
    /// Smallest depth holding a short-word code, if one was found.
    pub height: Option<usize>,
    /// Index of the first such scheme.
    pub witness: Option<usize>,
}

impl HeightSearch {
    /// The word decoded from the witness scheme.
    pub fn word(&self) -> Option<Word> {
        let w = self.witness?;
        decode_instance(&self.set.schemes[w].formula).map(|d| d.word)
    }
}

/// Builds the reduction calculus and saturates it until a code of a word
/// shorter than the deletion number appears.
pub fn search_height(
    t: &TagSystem,
    omega: &[Letter],
    p0: &Calculus,
    max_depth: usize,
    max_size: usize,
) -> Result<HeightSearch, CalculusError> {
    let calculus = build_reduction(t, omega, p0)?;
    let d = t.deletion();
    let set = saturate_until(&calculus, max_depth, max_size, |f| is_short_code(f, d));
    let witness = set.schemes.iter().position(|s| is_short_code(&s.formula, d));
    let height = witness.map(|w| set.schemes[w].depth);
    Ok(HeightSearch {
        calculus,
        set,
        height,
        witness,
    })
}

/// The least closure depth holding a code of a word shorter than the
/// deletion number, or `None` if there is none within the bounds.
pub fn find_height(
    t: &TagSystem,
    omega: &[Letter],
    p0: &Calculus,
    max_depth: usize,
    max_size: usize,
) -> Result<Option<usize>, CalculusError> {
    Ok(search_height(t, omega, p0, max_depth, max_size)?.height)
}
