//! Formula encodings of letters and words.
//!
//! With `K = b -> (b -> b)` and the left-nested tower `P_1 = b -> b`,
//! `P_{k+1} = P_k -> b`, the code of the i-th letter is `P_i -> K`, where `b`
//! is the base variable. Disjunction is the abbreviation `a ∨ b := (a -> b) -> b`
//! and every word code is guarded by the triangle `((b -> b) -> b) -> b`.
//!
//! All builders take the base as a parameter; the `*_over` variants accept an
//! arbitrary formula in place of the base variable, which is what a
//! substitution instance of a code looks like.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Variable};
use crate::tagsys::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("letter indices start at 1")]
    ZeroLetter,
    #[error("cannot encode the empty word")]
    EmptyWord,
    #[error("split {0} violates the side conditions of its code type")]
    BadSplit(CodeType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

/// The shape of a word code. Split fields are the lengths of the parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeType {
    /// `▷ -> α→`
    Type0,
    /// `▷ -> α₁→ ∨ α₂→`, `|α₁| ≥ 2`, `|α₂| ≥ 1`
    Type1 { first: usize },
    /// `▷ -> (α₁← ∨ α₂→) ∨ α₃→`, `|α₁| ≥ 2`, `|α₂| ≥ 2`, `|α₃| ≥ 1`
    Type2 { first: usize, second: usize },
    /// `▷ -> α₁← ∨ α₂→`, `|α₁| ≥ 3`, `|α₂| ≥ 1`
    Type3 { first: usize },
}

impl CodeType {
    /// Whether the split fits a word of length `len`.
    pub fn admits(self, len: usize) -> bool {
        match self {
            CodeType::Type0 => len >= 1,
            CodeType::Type1 { first } => first >= 2 && len > first,
            CodeType::Type2 { first, second } => {
                first >= 2 && second >= 2 && len > first + second
            }
            CodeType::Type3 { first } => first >= 3 && len > first,
        }
    }

    pub fn is_canonical(self) -> bool {
        self == CodeType::Type0
    }
}

impl fmt::Display for CodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeType::Type0 => write!(f, "0"),
            CodeType::Type1 { first } => write!(f, "1({first})"),
            CodeType::Type2 { first, second } => write!(f, "2({first},{second})"),
            CodeType::Type3 { first } => write!(f, "3({first})"),
        }
    }
}

pub fn vee(a: Formula, b: Formula) -> Formula {
    Formula::imp(Formula::imp(a, b.clone()), b)
}

fn tail_k(base: &Formula) -> Formula {
    Formula::imp(base.clone(), Formula::imp(base.clone(), base.clone()))
}

/// Code of the letter with 1-based index `i`.
pub fn letter_code(i: usize, base: &Variable) -> Result<Formula, EncodeError> {
    let letter = Letter::new(i).ok_or(EncodeError::ZeroLetter)?;
    Ok(letter_code_over(letter, &Formula::Var(base.clone())))
}

pub fn letter_code_over(letter: Letter, base: &Formula) -> Formula {
    let mut tower = Formula::imp(base.clone(), base.clone());
    for _ in 1..letter.index() {
        tower = Formula::imp(tower, base.clone());
    }
    Formula::imp(tower, tail_k(base))
}

pub fn triangle(base: &Variable) -> Formula {
    triangle_over(&Formula::Var(base.clone()))
}

pub fn triangle_over(base: &Formula) -> Formula {
    let b = base.clone();
    Formula::imp(
        Formula::imp(Formula::imp(b.clone(), b.clone()), b.clone()),
        b,
    )
}

/// `α→` (right-nested) or `α←` (left-nested) disjunction of letter codes.
pub fn nest(word: &[Letter], direction: Direction, base: &Variable) -> Result<Formula, EncodeError> {
    if word.is_empty() {
        return Err(EncodeError::EmptyWord);
    }
    Ok(nest_over(word, direction, &Formula::Var(base.clone())))
}

/// Panics on an empty word.
pub fn nest_over(word: &[Letter], direction: Direction, base: &Formula) -> Formula {
    let codes = word.iter().map(|&l| letter_code_over(l, base));
    match direction {
        Direction::Forward => codes
            .rev()
            .reduce(|acc, c| vee(c, acc))
            .expect("nonempty word"),
        Direction::Backward => codes.reduce(vee).expect("nonempty word"),
    }
}

/// The code of `word` with the given shape.
pub fn code_of(word: &[Letter], ty: CodeType, base: &Variable) -> Result<Formula, EncodeError> {
    if word.is_empty() {
        return Err(EncodeError::EmptyWord);
    }
    if !ty.admits(word.len()) {
        return Err(EncodeError::BadSplit(ty));
    }
    Ok(code_of_over(word, ty, &Formula::Var(base.clone())))
}

/// Panics if `ty` does not admit `word`.
pub fn code_of_over(word: &[Letter], ty: CodeType, base: &Formula) -> Formula {
    assert!(ty.admits(word.len()), "{ty} does not fit length {}", word.len());
    use Direction::*;
    let body = match ty {
        CodeType::Type0 => nest_over(word, Forward, base),
        CodeType::Type1 { first } => vee(
            nest_over(&word[..first], Forward, base),
            nest_over(&word[first..], Forward, base),
        ),
        CodeType::Type2 { first, second } => vee(
            vee(
                nest_over(&word[..first], Backward, base),
                nest_over(&word[first..first + second], Forward, base),
            ),
            nest_over(&word[first + second..], Forward, base),
        ),
        CodeType::Type3 { first } => vee(
            nest_over(&word[..first], Backward, base),
            nest_over(&word[first..], Forward, base),
        ),
    };
    Formula::imp(triangle_over(base), body)
}

/// Every admissible code type for a word of length `len`, in a fixed order.
pub fn code_types(len: usize) -> Vec<CodeType> {
    let mut out = vec![CodeType::Type0];
    out.extend((2..len).map(|first| CodeType::Type1 { first }));
    for first in 2..len {
        for second in 2..len {
            let ty = CodeType::Type2 { first, second };
            if ty.admits(len) {
                out.push(ty);
            }
        }
    }
    out.extend((3..len).map(|first| CodeType::Type3 { first }));
    out
}

/// All members of the code set of `word`, canonical code first.
pub fn word_codes(word: &[Letter], base: &Variable) -> Result<Vec<(CodeType, Formula)>, EncodeError> {
    if word.is_empty() {
        return Err(EncodeError::EmptyWord);
    }
    let b = Formula::Var(base.clone());
    Ok(code_types(word.len())
        .into_iter()
        .map(|ty| (ty, code_of_over(word, ty, &b)))
        .collect())
}

/// Parse tree of an alphabetic formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaTree {
    Letter(Letter),
    Vee(Box<AlphaTree>, Box<AlphaTree>),
}

impl AlphaTree {
    pub fn leaves(&self) -> usize {
        match self {
            AlphaTree::Letter(_) => 1,
            AlphaTree::Vee(a, b) => a.leaves() + b.leaves(),
        }
    }

    /// The word read right-nested, if the tree is a forward nesting.
    pub fn forward(&self) -> Option<Word> {
        match self {
            AlphaTree::Letter(l) => Some(vec![*l]),
            AlphaTree::Vee(head, rest) => match **head {
                AlphaTree::Letter(l) => {
                    let mut w = vec![l];
                    w.extend(rest.forward()?);
                    Some(w)
                }
                _ => None,
            },
        }
    }

    /// The word read left-nested, if the tree is a backward nesting.
    pub fn backward(&self) -> Option<Word> {
        match self {
            AlphaTree::Letter(l) => Some(vec![*l]),
            AlphaTree::Vee(rest, last) => match **last {
                AlphaTree::Letter(l) => {
                    let mut w = rest.backward()?;
                    w.push(l);
                    Some(w)
                }
                _ => None,
            },
        }
    }
}

/// Reads a letter code over `base`, returning its letter.
pub fn read_letter(f: &Formula, base: &Formula) -> Option<Letter> {
    let (mut tower, k) = f.as_imp()?;
    if *k != tail_k(base) {
        return None;
    }
    let mut height = 1;
    loop {
        let (lhs, rhs) = tower.as_imp()?;
        if rhs != base {
            return None;
        }
        if lhs == base {
            return Letter::new(height);
        }
        tower = lhs;
        height += 1;
    }
}

/// Recognises an alphabetic formula over `base` (letter codes closed under ∨).
pub fn alphabetic_tree(f: &Formula, base: &Formula) -> Option<AlphaTree> {
    if let Some(l) = read_letter(f, base) {
        return Some(AlphaTree::Letter(l));
    }
    let (lhs, b) = f.as_imp()?;
    let (a, b2) = lhs.as_imp()?;
    if b != b2 {
        return None;
    }
    Some(AlphaTree::Vee(
        Box::new(alphabetic_tree(a, base)?),
        Box::new(alphabetic_tree(b, base)?),
    ))
}

/// Decodes the body (the part after the guard) of a code.
fn decode_body(body: &Formula, base: &Formula) -> Option<(Word, CodeType)> {
    let tree = alphabetic_tree(body, base)?;
    if let Some(w) = tree.forward() {
        return Some((w, CodeType::Type0));
    }
    let AlphaTree::Vee(left, right) = &tree else {
        return None;
    };
    let tail = right.forward()?;
    if let Some(head) = left.forward() {
        if head.len() >= 2 {
            let first = head.len();
            return Some(([head, tail].concat(), CodeType::Type1 { first }));
        }
    }
    if let AlphaTree::Vee(l1, l2) = &**left {
        if let (Some(a1), Some(a2)) = (l1.backward(), l2.forward()) {
            if a1.len() >= 2 && a2.len() >= 2 {
                let ty = CodeType::Type2 {
                    first: a1.len(),
                    second: a2.len(),
                };
                return Some(([a1, a2, tail].concat(), ty));
            }
        }
    }
    if let Some(head) = left.backward() {
        if head.len() >= 3 {
            let first = head.len();
            return Some(([head, tail].concat(), CodeType::Type3 { first }));
        }
    }
    None
}

/// Inverse of [`word_codes`]: the word and code type `f` is literally a code of.
pub fn decode(f: &Formula, base: &Variable) -> Option<(Word, CodeType)> {
    let b = Formula::Var(base.clone());
    let (guard, body) = f.as_imp()?;
    if *guard != triangle_over(&b) {
        return None;
    }
    decode_body(body, &b)
}

/// A formula recognised as a substitution instance of a word code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedCode {
    pub word: Word,
    pub code_type: CodeType,
    /// What the base variable was replaced by.
    pub base: Formula,
}

/// Like [`decode`], but accepts any instance: codes contain a single
/// variable, so the instance is fixed by what replaced it in the guard.
pub fn decode_instance(f: &Formula) -> Option<DecodedCode> {
    let (guard, body) = f.as_imp()?;
    let (_, base) = guard.as_imp()?;
    if *guard != triangle_over(base) {
        return None;
    }
    let (word, code_type) = decode_body(body, base)?;
    Some(DecodedCode {
        word,
        code_type,
        base: base.clone(),
    })
}

/// All alphabetic formulas over `m` letters with at most `max_leaves` leaves,
/// grouped by leaf count.
pub fn alphabetic_formulas(m: usize, max_leaves: usize, base: &Variable) -> Vec<Formula> {
    let b = Formula::Var(base.clone());
    let mut by_leaves: Vec<Vec<Formula>> = vec![Vec::new()];
    for k in 1..=max_leaves {
        let mut level = Vec::new();
        if k == 1 {
            level.extend((1..=m).filter_map(Letter::new).map(|l| letter_code_over(l, &b)));
        }
        for j in 1..k {
            for a in &by_leaves[j] {
                for c in &by_leaves[k - j] {
                    level.push(vee(a.clone(), c.clone()));
                }
            }
        }
        by_leaves.push(level);
    }
    by_leaves.into_iter().flatten().collect()
}
