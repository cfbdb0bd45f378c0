//! Deduction-theorem elaboration, weakening, and proofs of alphabetic
//! formulas in calculi containing `x -> y -> x` and
//! `(x -> y -> z) -> (x -> y) -> x -> z`.

use crate::calculus::Calculus;
use crate::encode::{read_letter, triangle_over};
use crate::formula::{parse, Formula, Substitution, Variable};

use super::{check, Proof, ProofBuilder, ProofError, Step, Verdict};

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}

fn require_valid(p: &Proof) -> Result<Formula, ProofError> {
    match check(p) {
        Verdict::Valid { conclusion } => Ok(conclusion),
        Verdict::Invalid { step, reason } => Err(ProofError::InvalidInput { step, reason }),
    }
}

/// `F -> (b -> F)` by an instance of `x -> y -> x`, then MP.
fn weaken_line(b: &mut ProofBuilder, line: usize, by: &Formula) -> Result<usize, ProofError> {
    let f = b.formula(line).clone();
    let k = b.instance_of_any(None, &imp(&f, &imp(by, &f)))?;
    b.mp(k, line)
}

/// From a proof of `A`, a proof of `B -> A` with the same hypotheses.
pub fn weaken(p: &Proof, by: &Formula) -> Result<Proof, ProofError> {
    require_valid(p)?;
    let mut b = ProofBuilder::with_hypotheses(&p.calculus, p.hypotheses.clone());
    let line = b.replay(p)?;
    let out = weaken_line(&mut b, line, by)?;
    Ok(b.finish(out))
}

/// `A -> A` in five inference lines.
fn identity_line(b: &mut ProofBuilder, a: &Formula) -> Result<usize, ProofError> {
    let aa = imp(a, a);
    let a_aa_a = imp(a, &imp(&aa, a));
    let s = b.instance_of_any(None, &imp(&a_aa_a, &imp(&imp(a, &aa), &aa)))?;
    let k1 = b.instance_of_any(None, &a_aa_a)?;
    let m = b.mp(s, k1)?;
    let k2 = b.instance_of_any(None, &imp(a, &aa))?;
    b.mp(m, k2)
}

/// Discharges the last hypothesis: from `Γ, A ⊢ B` builds `Γ ⊢ A -> B`.
///
/// Lines that do not depend on `A` are copied unchanged; substitution is
/// only ever applied to such lines, so the input may contain it.
pub fn deduction_elaborate(p: &Proof) -> Result<Proof, ProofError> {
    require_valid(p)?;
    let (a, gamma) = p
        .hypotheses
        .split_last()
        .ok_or(ProofError::NothingToDischarge)?;
    let discharged = gamma.len();
    let lines = p.formulas();
    let n = p.steps.len();

    let mut b = ProofBuilder::with_hypotheses(&p.calculus, gamma.to_vec());
    let mut dep = vec![false; n];
    let mut plain: Vec<Option<usize>> = vec![None; n];
    let mut implied: Vec<Option<usize>> = vec![None; n];

    fn implication(
        b: &mut ProofBuilder,
        a: &Formula,
        k: usize,
        plain: &[Option<usize>],
        implied: &mut [Option<usize>],
    ) -> Result<usize, ProofError> {
        if let Some(line) = implied[k] {
            return Ok(line);
        }
        let line = weaken_line(b, plain[k].expect("independent line is copied"), a)?;
        implied[k] = Some(line);
        Ok(line)
    }

    for (k, step) in p.steps.iter().enumerate() {
        match step {
            Step::Hyp(i) if *i == discharged => {
                dep[k] = true;
                implied[k] = Some(identity_line(&mut b, a)?);
            }
            Step::MP(j, i) if dep[*j] || dep[*i] => {
                dep[k] = true;
                let aj = implication(&mut b, a, *j, &plain, &mut implied)?;
                let ai = implication(&mut b, a, *i, &plain, &mut implied)?;
                let (fi, fk) = (&lines[*i], &lines[k]);
                let s = b.instance_of_any(
                    None,
                    &imp(&imp(a, &imp(fi, fk)), &imp(&imp(a, fi), &imp(a, fk))),
                )?;
                let m = b.mp(s, aj)?;
                implied[k] = Some(b.mp(m, ai)?);
            }
            Step::Axiom(label) => plain[k] = Some(b.axiom(label)?),
            Step::Hyp(i) => plain[k] = Some(b.hyp(*i)?),
            Step::Subst(j, s) => {
                let j = plain[*j].expect("substituted lines are hypothesis-free");
                plain[k] = Some(b.subst(j, s.clone())?);
            }
            Step::MP(j, i) => {
                let (j, i) = (plain[*j].expect("copied"), plain[*i].expect("copied"));
                plain[k] = Some(b.mp(j, i)?);
            }
        }
    }
    let out = implication(&mut b, a, p.conclusion, &plain, &mut implied)?;
    Ok(b.finish(out))
}

/// `A -> A`, by elaborating the one-line proof of `A` from `A`.
pub fn identity_proof(calculus: &Calculus, a: &Formula) -> Result<Proof, ProofError> {
    let hyp = Proof {
        calculus: calculus.clone(),
        hypotheses: vec![a.clone()],
        steps: vec![Step::Hyp(0)],
        conclusion: 0,
    };
    deduction_elaborate(&hyp)
}

/// `x -> (x -> y) -> y`, from `x, x -> y ⊢ y` by two eliminations.
pub fn disjunction_intro_left(calculus: &Calculus) -> Result<Proof, ProofError> {
    let hyp = Proof {
        calculus: calculus.clone(),
        hypotheses: vec![parse("x").expect("formula"), parse("x -> y").expect("formula")],
        steps: vec![Step::Hyp(0), Step::Hyp(1), Step::MP(1, 0)],
        conclusion: 2,
    };
    deduction_elaborate(&deduction_elaborate(&hyp)?)
}

/// `y -> (x -> y) -> y`, from `y, x -> y ⊢ y` by two eliminations.
pub fn disjunction_intro_right(calculus: &Calculus) -> Result<Proof, ProofError> {
    let hyp = Proof {
        calculus: calculus.clone(),
        hypotheses: vec![parse("y").expect("formula"), parse("x -> y").expect("formula")],
        steps: vec![Step::Hyp(0)],
        conclusion: 0,
    };
    deduction_elaborate(&deduction_elaborate(&hyp)?)
}

fn vee_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (lhs, r) = f.as_imp()?;
    let (l, r2) = lhs.as_imp()?;
    (r == r2).then_some((l, r))
}

/// Whether `f` is a letter code over `base`, or a disjunction with a
/// branch of that kind. Other leaves may be arbitrary formulas.
pub fn is_provable_disjunction(f: &Formula, base: &Formula) -> bool {
    read_letter(f, base).is_some()
        || vee_parts(f).is_some_and(|(l, r)| {
            is_provable_disjunction(r, base) || is_provable_disjunction(l, base)
        })
}

struct Disjunctions {
    left_lemma: Option<usize>,
}

impl Disjunctions {
    fn prove(
        &mut self,
        b: &mut ProofBuilder,
        f: &Formula,
        base: &Formula,
    ) -> Result<usize, ProofError> {
        if read_letter(f, base).is_some() {
            let (_, k) = f.as_imp().expect("letter codes are implications");
            let kl = b.instance_of_any(None, k)?;
            return weaken_line(b, kl, f.as_imp().expect("implication").0);
        }
        let (l, r) = vee_parts(f).ok_or_else(|| ProofError::NotAlphabetic(f.clone()))?;
        if is_provable_disjunction(r, base) {
            let rl = self.prove(b, r, base)?;
            let intro = b.instance_of_any(None, &imp(r, f))?;
            b.mp(intro, rl)
        } else if is_provable_disjunction(l, base) {
            let ll = self.prove(b, l, base)?;
            let lemma = match self.left_lemma {
                Some(line) => line,
                None => {
                    let proof = disjunction_intro_left(b.calculus())?;
                    let line = b.replay(&proof)?;
                    self.left_lemma = Some(line);
                    line
                }
            };
            let s: Substitution = [
                (Variable::named("x"), l.clone()),
                (Variable::named("y"), r.clone()),
            ]
            .into_iter()
            .collect();
            let intro = b.subst(lemma, s)?;
            b.mp(intro, ll)
        } else {
            Err(ProofError::NotAlphabetic(f.clone()))
        }
    }
}

fn rightmost_leaf(f: &Formula) -> &Formula {
    match f {
        Formula::Imp(_, c) => rightmost_leaf(c),
        _ => f,
    }
}

/// A hypothesis-free proof of an alphabetic formula.
pub fn prove_alphabetic(a: &Formula, calculus: &Calculus) -> Result<Proof, ProofError> {
    let base = rightmost_leaf(a).clone();
    if base.as_var().is_none() || crate::encode::alphabetic_tree(a, &base).is_none() {
        return Err(ProofError::NotAlphabetic(a.clone()));
    }
    let mut b = ProofBuilder::new(calculus);
    let line = Disjunctions { left_lemma: None }.prove(&mut b, a, &base)?;
    Ok(b.finish(line))
}

fn guarded_body(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (guard, body) = f.as_imp()?;
    let (_, base) = guard.as_imp()?;
    (*guard == triangle_over(base)).then_some((base, body))
}

/// A proof of a reduction-calculus axiom in `calculus`.
///
/// Axioms of the shape `X -> A` with `A` an axiom of `calculus` are
/// weakenings of `A`. The others are `▷ -> D` or `(▷ -> C) -> (▷ -> D)`
/// where `D` is a disjunction with a letter-code branch.
pub fn inclusion_proof(axiom: &Formula, calculus: &Calculus) -> Result<Proof, ProofError> {
    let mut b = ProofBuilder::new(calculus);
    let not_covered = || ProofError::NotAlphabetic(axiom.clone());
    if let Some((x, a)) = axiom.as_imp() {
        if let Some(ax) = calculus.axioms().iter().find(|ax| ax.formula == *a) {
            let line = b.axiom(&ax.label.clone())?;
            let out = weaken_line(&mut b, line, x)?;
            return Ok(b.finish(out));
        }
    }
    let (outer, inner) = match guarded_body(axiom) {
        Some(_) => (None, axiom),
        None => {
            let (x, rest) = axiom.as_imp().ok_or_else(not_covered)?;
            (Some(x), rest)
        }
    };
    let (base, body) = guarded_body(inner).ok_or_else(not_covered)?;
    let guard = inner.as_imp().expect("guarded").0;
    let mut line = Disjunctions { left_lemma: None }.prove(&mut b, body, base)?;
    line = weaken_line(&mut b, line, guard)?;
    if let Some(x) = outer {
        line = weaken_line(&mut b, line, x)?;
    }
    Ok(b.finish(line))
}
