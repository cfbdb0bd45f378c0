//! Propositional formulas over a signature containing `->`.
//!
//! Formulas are immutable trees with shared (`Arc`) children, so cloning is
//! cheap and values can be handed to worker threads freely. Extra connectives
//! are kept opaque: the library never interprets them, it only requires that a
//! symbol is used with one arity throughout a parse.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid identifier `{0}`")]
    InvalidIdent(String),
    #[error("connective `{symbol}` used with arity {found}, previously {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A propositional variable, compared by exact name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Result<Self, FormulaError> {
        if is_ident(name) {
            Ok(Variable(name.into()))
        } else {
            Err(FormulaError::InvalidIdent(name.to_string()))
        }
    }

    /// Panics if `name` is not a valid identifier. Meant for literals.
    pub fn named(name: &str) -> Self {
        Self::new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Variable),
    Imp(Arc<Formula>, Arc<Formula>),
    Conn(Arc<str>, Arc<[Formula]>),
}

impl Formula {
    /// Panics if `name` is not a valid identifier.
    pub fn var(name: &str) -> Formula {
        Formula::Var(Variable::named(name))
    }

    pub fn imp(premise: Formula, conclusion: Formula) -> Formula {
        Formula::Imp(Arc::new(premise), Arc::new(conclusion))
    }

    pub fn conn(symbol: &str, args: Vec<Formula>) -> Result<Formula, FormulaError> {
        if !is_ident(symbol) {
            return Err(FormulaError::InvalidIdent(symbol.to_string()));
        }
        if args.is_empty() {
            return Err(FormulaError::Syntax {
                pos: 0,
                message: format!("connective `{symbol}` needs at least one argument"),
            });
        }
        Ok(Formula::Conn(symbol.into(), args.into()))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(p, c) => Some((p, c)),
            _ => None,
        }
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            Formula::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Imp(p, c) => 1 + p.size() + c.size(),
            Formula::Conn(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Imp(p, c) => 1 + p.depth().max(c.depth()),
            Formula::Conn(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn occurs(&self, v: &Variable) -> bool {
        match self {
            Formula::Var(w) => w == v,
            Formula::Imp(p, c) => p.occurs(v) || c.occurs(v),
            Formula::Conn(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Imp(p, c) => {
                p.collect_vars(out);
                c.collect_vars(out);
            }
            Formula::Conn(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence (left to right).
    pub fn vars_in_order(&self) -> Vec<Variable> {
        fn walk(f: &Formula, seen: &mut BTreeSet<Variable>, out: &mut Vec<Variable>) {
            match f {
                Formula::Var(v) => {
                    if seen.insert(v.clone()) {
                        out.push(v.clone());
                    }
                }
                Formula::Imp(p, c) => {
                    walk(p, seen, out);
                    walk(c, seen, out);
                }
                Formula::Conn(_, args) => args.iter().for_each(|a| walk(a, seen, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut BTreeSet::new(), &mut out);
        out
    }

    /// Connective symbols with their arities, excluding `->`.
    pub fn connectives(&self) -> BTreeMap<Arc<str>, usize> {
        fn walk(f: &Formula, out: &mut BTreeMap<Arc<str>, usize>) {
            match f {
                Formula::Var(_) => {}
                Formula::Imp(p, c) => {
                    walk(p, out);
                    walk(c, out);
                }
                Formula::Conn(sym, args) => {
                    out.entry(sym.clone()).or_insert(args.len());
                    args.iter().for_each(|a| walk(a, out));
                }
            }
        }
        let mut out = BTreeMap::new();
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Imp(p, c) => {
                if matches!(**p, Formula::Imp(..)) {
                    write!(f, "({p}) -> {c}")
                } else {
                    write!(f, "{p} -> {c}")
                }
            }
            Formula::Conn(sym, args) => {
                write!(f, "{sym}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Renders a formula with minimal parentheses; `->` associates to the right.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// Parses a formula. `->` is right-associative and binds loosest.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        src: text.as_bytes(),
        text,
        pos: 0,
        arities: HashMap::new(),
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    arities: HashMap<String, usize>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> FormulaError {
        FormulaError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.atom()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.formula()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            Some(_) => return Err(self.error("expected identifier or `(`")),
            None => return Err(self.error("unexpected end of input")),
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let ident = &self.text[start..self.pos];
        if !self.eat("(") {
            return Ok(Formula::Var(Variable(ident.into())));
        }
        let mut args = vec![self.formula()?];
        while self.eat(",") {
            args.push(self.formula()?);
        }
        if !self.eat(")") {
            return Err(self.error("expected `,` or `)`"));
        }
        match self.arities.get(ident) {
            Some(&n) if n != args.len() => {
                return Err(FormulaError::ArityMismatch {
                    symbol: ident.to_string(),
                    expected: n,
                    found: args.len(),
                })
            }
            Some(_) => {}
            None => {
                self.arities.insert(ident.to_string(), args.len());
            }
        }
        Ok(Formula::Conn(ident.into(), args.into()))
    }
}

/// Finite map from variables to formulas; unmapped variables are fixed.
/// Application is simultaneous.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: BTreeMap<Variable, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Variable, f: Formula) -> Self {
        let mut s = Self::new();
        s.insert(v, f);
        s
    }

    pub fn insert(&mut self, v: Variable, f: Formula) -> Option<Formula> {
        self.bindings.insert(v, f)
    }

    pub fn get(&self, v: &Variable) -> Option<&Formula> {
        self.bindings.get(v)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Formula)> {
        self.bindings.iter()
    }

    /// True when every binding maps a variable to itself.
    pub fn is_identity(&self) -> bool {
        self.bindings
            .iter()
            .all(|(v, f)| f.as_var().is_some_and(|w| w == v))
    }

    /// Drops bindings of the form `x := x`.
    pub fn without_trivial(mut self) -> Self {
        self.bindings
            .retain(|v, f| f.as_var() != Some(v));
        self
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        if self.bindings.is_empty() {
            return f.clone();
        }
        self.apply_shared(f).unwrap_or_else(|| f.clone())
    }

    // Returns None when the subtree is unchanged so untouched children stay shared.
    fn apply_shared(&self, f: &Formula) -> Option<Formula> {
        match f {
            Formula::Var(v) => self.bindings.get(v).cloned(),
            Formula::Imp(p, c) => {
                let np = self.apply_shared(p);
                let nc = self.apply_shared(c);
                if np.is_none() && nc.is_none() {
                    return None;
                }
                Some(Formula::Imp(
                    np.map(Arc::new).unwrap_or_else(|| p.clone()),
                    nc.map(Arc::new).unwrap_or_else(|| c.clone()),
                ))
            }
            Formula::Conn(sym, args) => {
                let new: Vec<Option<Formula>> = args.iter().map(|a| self.apply_shared(a)).collect();
                if new.iter().all(Option::is_none) {
                    return None;
                }
                let args = new
                    .into_iter()
                    .zip(args.iter())
                    .map(|(n, a)| n.unwrap_or_else(|| a.clone()))
                    .collect::<Vec<_>>();
                Some(Formula::Conn(sym.clone(), args.into()))
            }
        }
    }

    /// The substitution that applies `self` first and then `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, f) in &self.bindings {
            out.insert(v.clone(), then.apply(f));
        }
        for (v, f) in &then.bindings {
            out.bindings.entry(v.clone()).or_insert_with(|| f.clone());
        }
        out
    }
}

impl FromIterator<(Variable, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Formula)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}:={t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn apply_subst(s: &Substitution, f: &Formula) -> Formula {
    s.apply(f)
}

pub fn vars_of(f: &Formula) -> BTreeSet<Variable> {
    f.vars()
}

/// One-sided matching: finds `s` with `s(pattern) == target`. Variables of
/// `target` are treated as constants.
pub fn match_instance(pattern: &Formula, target: &Formula) -> Option<Substitution> {
    let mut s = Substitution::new();
    if match_into(pattern, target, &mut s) {
        Some(s)
    } else {
        None
    }
}

fn match_into(pattern: &Formula, target: &Formula, s: &mut Substitution) -> bool {
    match (pattern, target) {
        (Formula::Var(v), _) => match s.bindings.get(v) {
            Some(bound) => bound == target,
            None => {
                s.bindings.insert(v.clone(), target.clone());
                true
            }
        },
        (Formula::Imp(p1, c1), Formula::Imp(p2, c2)) => {
            match_into(p1, p2, s) && match_into(c1, c2, s)
        }
        (Formula::Conn(s1, a1), Formula::Conn(s2, a2)) => {
            s1 == s2
                && a1.len() == a2.len()
                && a1.iter().zip(a2.iter()).all(|(x, y)| match_into(x, y, s))
        }
        _ => false,
    }
}

/// `a` and `b` are equal up to a bijective renaming of variables.
pub fn is_variant(a: &Formula, b: &Formula) -> bool {
    let Some(s) = match_instance(a, b) else {
        return false;
    };
    let mut targets = BTreeSet::new();
    let injective = s
        .iter()
        .all(|(_, f)| f.as_var().is_some_and(|v| targets.insert(v.clone())));
    injective
}

/// Renames variables in order of first occurrence to `prefix1`, `prefix2`, ...
pub fn canonical_variant(f: &Formula, prefix: &str) -> Formula {
    let s: Substitution = f
        .vars_in_order()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Formula::var(&format!("{prefix}{}", i + 1))))
        .collect();
    s.apply(f)
}
