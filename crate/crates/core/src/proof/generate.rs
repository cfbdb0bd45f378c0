//! Derivations inside a reduction calculus: reassociating guarded
//! disjunctions, merging codes, simulating tag-system runs, and deriving
//! the axioms of `P0` from a halting run.

use crate::calculus::{AxiomGroup, Calculus};
use crate::encode::{alphabetic_tree, letter_code_over, nest_over, triangle_over, vee, Direction};
use crate::formula::Formula;
use crate::tagsys::{Letter, TagTrace};

use super::{Proof, ProofBuilder, ProofError};

fn base_of(c: &Calculus) -> Result<Formula, ProofError> {
    c.reduction_base()
        .map(Formula::Var)
        .ok_or_else(|| ProofError::NotReduction(c.name().to_string()))
}

fn fwd(w: &[Letter], base: &Formula) -> Formula {
    nest_over(w, Direction::Forward, base)
}

fn bwd(w: &[Letter], base: &Formula) -> Formula {
    nest_over(w, Direction::Backward, base)
}

fn guarded(base: &Formula, body: Formula) -> Formula {
    Formula::imp(triangle_over(base), body)
}

fn expect_line(b: &ProofBuilder, line: usize, expected: &Formula) -> Result<(), ProofError> {
    if b.formula(line) == expected {
        Ok(())
    } else {
        Err(ProofError::TraceMismatch(format!(
            "derived `{}`, expected `{expected}`",
            b.formula(line)
        )))
    }
}

/// From `▷ -> (ξ← ∨ β→) ∨ ζ→` at `line`, derives `▷ -> (ξβ)← ∨ ζ→` with
/// `|β| - 1` detachments against the reassociation axioms.
pub(crate) fn shift_assoc_into(
    b: &mut ProofBuilder,
    mut line: usize,
    xi: &[Letter],
    beta: &[Letter],
    zeta: &[Letter],
    base: &Formula,
) -> Result<usize, ProofError> {
    let z = fwd(zeta, base);
    let mut xi = xi.to_vec();
    for k in 0..beta.len().saturating_sub(1) {
        let a = letter_code_over(beta[k], base);
        let delta = fwd(&beta[k + 1..], base);
        let from = guarded(base, vee(vee(bwd(&xi, base), vee(a.clone(), delta.clone())), z.clone()));
        expect_line(b, line, &from)?;
        let to = guarded(base, vee(vee(vee(bwd(&xi, base), a), delta), z.clone()));
        let r1 = b.instance_of_any(Some(AxiomGroup::R1), &Formula::imp(from, to))?;
        line = b.mp(r1, line)?;
        xi.push(beta[k]);
    }
    Ok(line)
}

/// From `▷ -> ξ→ ∨ ζ→` at `line`, derives `▷ -> (ξζ)→`.
pub(crate) fn merge_code_into(
    b: &mut ProofBuilder,
    mut line: usize,
    xi: &[Letter],
    zeta: &[Letter],
    base: &Formula,
) -> Result<usize, ProofError> {
    if xi.len() >= 2 {
        line = shift_assoc_into(b, line, &xi[..1], &xi[1..], zeta, base)?;
    }
    let mut head = xi.to_vec();
    let mut tail = zeta.to_vec();
    while head.len() >= 2 {
        let a = head.pop().expect("nonempty");
        let ac = letter_code_over(a, base);
        let tail_f = fwd(&tail, base);
        let from = guarded(base, vee(vee(bwd(&head, base), ac.clone()), tail_f.clone()));
        expect_line(b, line, &from)?;
        let to = guarded(base, vee(bwd(&head, base), vee(ac, tail_f)));
        let r2 = b.instance_of_any(Some(AxiomGroup::R2), &Formula::imp(from, to))?;
        line = b.mp(r2, line)?;
        tail.insert(0, a);
    }
    Ok(line)
}

/// `▷ -> (ξ← ∨ β→) ∨ ζ→ ⊢ ▷ -> (ξβ)← ∨ ζ→` in any calculus with the
/// reassociation axioms for the letters involved.
pub fn shift_assoc(
    xi: &[Letter],
    beta: &[Letter],
    zeta: &[Letter],
    pt: &Calculus,
) -> Result<Proof, ProofError> {
    if xi.is_empty() || beta.is_empty() || zeta.is_empty() {
        return Err(ProofError::EmptyWord);
    }
    let base = base_of(pt)?;
    let hyp = guarded(&base, vee(vee(bwd(xi, &base), fwd(beta, &base)), fwd(zeta, &base)));
    let mut b = ProofBuilder::with_hypotheses(pt, vec![hyp]);
    let h = b.hyp(0)?;
    let out = shift_assoc_into(&mut b, h, xi, beta, zeta, &base)?;
    Ok(b.finish(out))
}

/// `▷ -> ξ→ ∨ ζ→ ⊢ ▷ -> (ξζ)→`.
pub fn merge_code(xi: &[Letter], zeta: &[Letter], pt: &Calculus) -> Result<Proof, ProofError> {
    if xi.is_empty() || zeta.is_empty() {
        return Err(ProofError::EmptyWord);
    }
    let base = base_of(pt)?;
    let hyp = guarded(&base, vee(fwd(xi, &base), fwd(zeta, &base)));
    let mut b = ProofBuilder::with_hypotheses(pt, vec![hyp]);
    let h = b.hyp(0)?;
    let out = merge_code_into(&mut b, h, xi, zeta, &base)?;
    Ok(b.finish(out))
}

fn read_forward(f: &Formula, base: &Formula) -> Option<Vec<Letter>> {
    alphabetic_tree(f, base)?.forward()
}

/// One tag step `ξ ↦ ζ` applied to the line holding `▷ -> ξ→`.
fn simulate_step(
    b: &mut ProofBuilder,
    line: usize,
    zeta: &[Letter],
    base: &Formula,
) -> Result<usize, ProofError> {
    let out = if let Some((out, _)) = b.detach_with(&[AxiomGroup::T2], line)? {
        out
    } else if let Some((out, label)) = b.detach_with(&[AxiomGroup::T1], line)? {
        let body = b.formula(out).as_imp().expect("guarded").1;
        let split = body.as_imp().and_then(|(lhs, omega)| {
            let (beta, _) = lhs.as_imp()?;
            Some((read_forward(beta, base)?, read_forward(omega, base)?))
        });
        let (beta, omega) = split.ok_or_else(|| {
            ProofError::TraceMismatch(format!("{label} produced a non-code `{body}`"))
        })?;
        merge_code_into(b, out, &beta, &omega, base)?
    } else {
        return Err(ProofError::TraceMismatch(format!(
            "no production axiom applies to `{}`",
            b.formula(line)
        )));
    };
    expect_line(b, out, &guarded(base, fwd(zeta, base)))?;
    Ok(out)
}

fn simulate_into(
    b: &mut ProofBuilder,
    trace: &TagTrace,
    base: &Formula,
) -> Result<usize, ProofError> {
    let first = trace
        .words
        .first()
        .ok_or_else(|| ProofError::TraceMismatch("empty trace".into()))?;
    let start = guarded(base, fwd(first, base));
    let mut line = b
        .instance_of_any(Some(AxiomGroup::W), &start)
        .map_err(|_| ProofError::TraceMismatch("the trace does not start at the initial word".into()))?;
    for zeta in &trace.words[1..] {
        line = simulate_step(b, line, zeta, base)?;
    }
    Ok(line)
}

/// A hypothesis-free proof of `▷ -> β→` for the last word `β` of `trace`.
pub fn simulate_trace(trace: &TagTrace, calculus: &Calculus) -> Result<Proof, ProofError> {
    let base = base_of(calculus)?;
    let mut b = ProofBuilder::new(calculus);
    let line = simulate_into(&mut b, trace, &base)?;
    Ok(b.finish(line))
}

/// For a halting trace, one proof per `H` axiom that fires on the halting
/// word, each concluding an axiom of `P0` (in `P0` order).
pub fn halting_completion(trace: &TagTrace, full: &Calculus) -> Result<Vec<Proof>, ProofError> {
    if !trace.halted {
        return Err(ProofError::NotHalted);
    }
    let base = base_of(full)?;
    let mut b = ProofBuilder::new(full);
    let line = simulate_into(&mut b, trace, &base)?;
    let halted = b.formula(line).clone();
    let proofs: Vec<Proof> = full
        .group(AxiomGroup::H)
        .filter(|a| a.formula.as_imp().is_some_and(|(premise, _)| *premise == halted))
        .map(|a| {
            let mut bb = b.clone();
            let h = bb.axiom(&a.label)?;
            let out = bb.mp(h, line)?;
            Ok(bb.finish(out))
        })
        .collect::<Result<_, ProofError>>()?;
    if proofs.is_empty() {
        return Err(ProofError::TraceMismatch(format!(
            "no H axiom has premise `{halted}`"
        )));
    }
    Ok(proofs)
}
