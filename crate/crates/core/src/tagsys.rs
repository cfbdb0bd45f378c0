//! Post tag systems: a production `a_i β γ ↦ γ ω_i` with `|β| = d − 1`,
//! iterated while the word has at least `d` letters.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(char),
    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(usize),
    #[error("deletion number must be positive")]
    ZeroDeletion,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("letter `{0}` appears twice in the alphabet")]
    DuplicateLetter(char),
    #[error("production for `{0}` is empty")]
    EmptyProduction(char),
    #[error("expected {expected} productions, got {found}")]
    ProductionCount { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A letter, stored as its 1-based position in the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(usize);

impl Letter {
    pub fn new(index: usize) -> Option<Letter> {
        (index >= 1).then_some(Letter(index))
    }

    pub fn index(self) -> usize {
        self.0
    }
}

pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSystem {
    alphabet: Vec<char>,
    productions: Vec<Word>,
    deletion: usize,
}

impl TagSystem {
    /// `rules` lists `(letter, production)` in alphabet order.
    pub fn new(deletion: usize, rules: &[(char, &str)]) -> Result<TagSystem, TagError> {
        let alphabet: Vec<char> = rules.iter().map(|(c, _)| *c).collect();
        let productions = rules
            .iter()
            .map(|(_, w)| w.chars().map(|c| index_of(&alphabet, c)).collect())
            .collect::<Result<Vec<Word>, _>>()?;
        Self::from_parts(alphabet, productions, deletion)
    }

    pub fn from_parts(
        alphabet: Vec<char>,
        productions: Vec<Word>,
        deletion: usize,
    ) -> Result<TagSystem, TagError> {
        if deletion == 0 {
            return Err(TagError::ZeroDeletion);
        }
        if alphabet.is_empty() {
            return Err(TagError::EmptyAlphabet);
        }
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(c) {
                return Err(TagError::DuplicateLetter(*c));
            }
        }
        if productions.len() != alphabet.len() {
            return Err(TagError::ProductionCount {
                expected: alphabet.len(),
                found: productions.len(),
            });
        }
        for (c, w) in alphabet.iter().zip(&productions) {
            if w.is_empty() {
                return Err(TagError::EmptyProduction(*c));
            }
            if let Some(bad) = w.iter().find(|l| l.0 > alphabet.len()) {
                return Err(TagError::LetterOutOfRange(bad.0));
            }
        }
        Ok(TagSystem {
            alphabet,
            productions,
            deletion,
        })
    }

    pub fn deletion(&self) -> usize {
        self.deletion
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (1..=self.alphabet.len()).map(Letter)
    }

    pub fn production(&self, letter: Letter) -> Result<&[Letter], TagError> {
        self.productions
            .get(letter.0.wrapping_sub(1))
            .map(Vec::as_slice)
            .ok_or(TagError::LetterOutOfRange(letter.0))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, TagError> {
        text.chars().map(|c| index_of(&self.alphabet, c)).collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|l| self.alphabet.get(l.0.wrapping_sub(1)).copied().unwrap_or('?'))
            .collect()
    }

    fn check_word(&self, w: &[Letter]) -> Result<(), TagError> {
        match w.iter().find(|l| l.0 > self.alphabet.len()) {
            Some(bad) => Err(TagError::LetterOutOfRange(bad.0)),
            None => Ok(()),
        }
    }

    /// One production, or `None` when `|w| < d`.
    pub fn step(&self, w: &[Letter]) -> Result<Option<Word>, TagError> {
        self.check_word(w)?;
        if w.len() < self.deletion {
            return Ok(None);
        }
        let mut next = w[self.deletion..].to_vec();
        next.extend_from_slice(self.production(w[0])?);
        Ok(Some(next))
    }

    /// Applies `step` until the word is too short or `fuel` steps were taken.
    pub fn run(&self, w: &[Letter], fuel: usize) -> Result<TagTrace, TagError> {
        self.check_word(w)?;
        let mut words = vec![w.to_vec()];
        loop {
            let current = words.last().expect("trace is never empty");
            if current.len() < self.deletion {
                return Ok(TagTrace {
                    words,
                    halted: true,
                    fuel_exhausted: false,
                });
            }
            if words.len() > fuel {
                return Ok(TagTrace {
                    words,
                    halted: false,
                    fuel_exhausted: true,
                });
            }
            let next = self.step(current)?.expect("word is long enough");
            words.push(next);
        }
    }

    /// Reads the line format: `deletion: <d>` followed by `<letter> -> <word>`
    /// lines in alphabet order. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<TagSystem, TagError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (n, header) = lines.next().ok_or(TagError::Parse {
            line: 1,
            message: "missing `deletion:` header".into(),
        })?;
        let deletion = header
            .strip_prefix("deletion:")
            .and_then(|d| d.trim().parse::<usize>().ok())
            .ok_or_else(|| TagError::Parse {
                line: n,
                message: format!("expected `deletion: <d>`, found `{header}`"),
            })?;
        let mut rules = Vec::new();
        for (n, line) in lines {
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| TagError::Parse {
                line: n,
                message: format!("expected `<letter> -> <word>`, found `{line}`"),
            })?;
            let mut lhs_chars = lhs.trim().chars();
            let letter = match (lhs_chars.next(), lhs_chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(TagError::Parse {
                        line: n,
                        message: format!("`{}` is not a single letter", lhs.trim()),
                    })
                }
            };
            rules.push((letter, rhs.trim().to_string()));
        }
        let alphabet: Vec<char> = rules.iter().map(|(c, _)| *c).collect();
        let productions = rules
            .iter()
            .map(|(_, w)| w.chars().map(|c| index_of(&alphabet, c)).collect())
            .collect::<Result<Vec<Word>, _>>()?;
        Self::from_parts(alphabet, productions, deletion)
    }
}

impl fmt::Display for TagSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "deletion: {}", self.deletion)?;
        for (c, w) in self.alphabet.iter().zip(&self.productions) {
            writeln!(f, "{c} -> {}", self.format_word(w))?;
        }
        Ok(())
    }
}

fn index_of(alphabet: &[char], c: char) -> Result<Letter, TagError> {
    alphabet
        .iter()
        .position(|&a| a == c)
        .map(|i| Letter(i + 1))
        .ok_or(TagError::UnknownLetter(c))
}

/// The history of a bounded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagTrace {
    pub words: Vec<Word>,
    pub halted: bool,
    pub fuel_exhausted: bool,
}

impl TagTrace {
    pub fn first(&self) -> &[Letter] {
        &self.words[0]
    }

    pub fn last(&self) -> &[Letter] {
        self.words.last().expect("trace is never empty")
    }

    pub fn steps(&self) -> usize {
        self.words.len() - 1
    }

    /// Re-checks that adjacent words are related by one production.
    pub fn is_valid_for(&self, t: &TagSystem) -> bool {
        !self.words.is_empty()
            && self
                .words
                .windows(2)
                .all(|p| t.step(&p[0]).ok().flatten().as_deref() == Some(&p[1][..]))
            && (!self.halted || self.last().len() < t.deletion())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t1() -> TagSystem {
        TagSystem::new(2, &[('a', "ab"), ('b', "b")]).unwrap()
    }

    fn t2() -> TagSystem {
        TagSystem::new(2, &[('a', "aa")]).unwrap()
    }

    /// Independent string-level rewrite used as an oracle.
    fn oracle_step(rules: &[(char, &str)], d: usize, w: &str) -> Option<String> {
        let chars: Vec<char> = w.chars().collect();
        if chars.len() < d {
            return None;
        }
        let prod = rules.iter().find(|(c, _)| *c == chars[0])?.1;
        Some(chars[d..].iter().collect::<String>() + prod)
    }

    fn words(t: &TagSystem, trace: &TagTrace) -> Vec<String> {
        trace.words.iter().map(|w| t.format_word(w)).collect()
    }

    #[test]
    fn step_examples() {
        let t = t1();
        let w = t.parse_word("aaa").unwrap();
        assert_eq!(t.format_word(&t.step(&w).unwrap().unwrap()), "aab");
        assert_eq!(
            oracle_step(&[('a', "ab"), ('b', "b")], 2, "aaa").as_deref(),
            Some("aab")
        );
        assert_eq!(t.step(&t.parse_word("b").unwrap()).unwrap(), None);
        let t = t2();
        let aa = t.parse_word("aa").unwrap();
        assert_eq!(t.step(&aa).unwrap().unwrap(), aa);
    }

    #[test]
    fn step_rejects_foreign_letters() {
        assert_eq!(t1().parse_word("abc"), Err(TagError::UnknownLetter('c')));
        assert_eq!(
            t1().step(&[Letter(1), Letter(3)]),
            Err(TagError::LetterOutOfRange(3))
        );
    }

    #[test]
    fn run_examples() {
        let t = t1();
        let trace = t.run(&t.parse_word("aaa").unwrap(), 100).unwrap();
        assert_eq!(words(&t, &trace), ["aaa", "aab", "bab", "bb", "b"]);
        assert!(trace.halted && !trace.fuel_exhausted);
        assert_eq!(trace.steps(), 4);

        let t = t2();
        let trace = t.run(&t.parse_word("aa").unwrap(), 10).unwrap();
        assert_eq!(trace.steps(), 10);
        assert!(words(&t, &trace).iter().all(|w| w == "aa"));
        assert!(trace.fuel_exhausted && !trace.halted);

        let t = t1();
        let trace = t.run(&t.parse_word("a").unwrap(), 5).unwrap();
        assert_eq!(words(&t, &trace), ["a"]);
        assert!(trace.halted);

        let trace = t.run(&[], 5).unwrap();
        assert!(trace.halted && trace.words == vec![Vec::<Letter>::new()]);
    }

    #[test]
    fn halting_on_the_last_unit_of_fuel_counts_as_halted() {
        let t = t1();
        let trace = t.run(&t.parse_word("aaa").unwrap(), 4).unwrap();
        assert!(trace.halted && !trace.fuel_exhausted);
        let trace = t.run(&t.parse_word("aaa").unwrap(), 3).unwrap();
        assert!(!trace.halted && trace.fuel_exhausted);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(TagSystem::new(0, &[('a', "a")]), Err(TagError::ZeroDeletion));
        assert_eq!(TagSystem::new(2, &[('a', "")]), Err(TagError::EmptyProduction('a')));
        assert_eq!(TagSystem::new(2, &[('a', "b")]), Err(TagError::UnknownLetter('b')));
        assert_eq!(
            TagSystem::new(2, &[('a', "a"), ('a', "a")]),
            Err(TagError::DuplicateLetter('a'))
        );
    }

    #[test]
    fn file_format() {
        let text = "deletion: 2\na -> ab\nb -> b\n";
        let t = TagSystem::parse(text).unwrap();
        assert_eq!(t, t1());
        assert_eq!(t.to_string(), text);
        assert!(matches!(
            TagSystem::parse("deletion: x\n"),
            Err(TagError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            TagSystem::parse("deletion: 2\nab -> a\n"),
            Err(TagError::Parse { line: 2, .. })
        ));
    }

    fn arb_system() -> impl Strategy<Value = (usize, Vec<(char, String)>)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(d, m)| {
            let letters: Vec<char> = "abc".chars().take(m).collect();
            let word = prop::collection::vec(prop::sample::select(letters.clone()), 1..=3)
                .prop_map(|v| v.into_iter().collect::<String>());
            (Just(d), prop::collection::vec(word, m)).prop_map(move |(d, ws)| {
                (d, letters.iter().copied().zip(ws).collect::<Vec<_>>())
            })
        })
    }

    proptest! {
        #[test]
        fn step_matches_oracle_and_length_law(
            (d, rules) in arb_system(),
            seed in prop::collection::vec(0usize..3, 0..8),
        ) {
            let borrowed: Vec<(char, &str)> = rules.iter().map(|(c, w)| (*c, w.as_str())).collect();
            let t = TagSystem::new(d, &borrowed).unwrap();
            let m = rules.len();
            let w: String = seed.iter().map(|i| rules[i % m].0).collect();
            let word = t.parse_word(&w).unwrap();
            let got = t.step(&word).unwrap();
            prop_assert_eq!(got.as_ref().map(|g| t.format_word(g)), oracle_step(&borrowed, d, &w));
            if let Some(next) = got {
                let first = t.production(word[0]).unwrap().len();
                prop_assert_eq!(next.len(), word.len() - d + first);
            }
            let trace = t.run(&word, 20).unwrap();
            prop_assert!(trace.is_valid_for(&t));
            prop_assert!(trace.halted != trace.fuel_exhausted);
        }
    }
}
