//! Executable form of the reduction from the halting problem for Post tag
//! systems to the completeness problem for implicational propositional
//! calculi.
//!
//! The crate is organised bottom-up:
//!
//! - [`formula`]: formulas, parsing/printing, substitution, matching
//! - [`unify`]: syntactic unification with occurs check
//! - [`tagsys`]: tag systems and bounded runs
//! - [`encode`]: letter and word codes, alphabetic formulas, decoding
//! - [`calculus`]: calculi, builtin axiom systems, the reduction calculus
//! - [`proof`]: proof objects, the checking kernel, derivation generators
//! - [`closure`]: condensed-detachment saturation and the shape audit
//! - [`cli`]: the `tagcalc` command-line driver

pub mod formula;
pub mod unify;
pub mod tagsys;
pub mod encode;
pub mod calculus;
pub mod proof;
pub mod closure;
pub mod cli;

#[cfg(test)]
mod testutil;

pub use formula::{parse, Formula, Substitution, Variable};
