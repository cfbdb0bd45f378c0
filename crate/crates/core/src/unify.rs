//! Syntactic first-order unification over [`Formula`].
//!
//! `mgu` treats variables shared between its arguments as the same variable.
//! `unifiable` follows the instance-intersection reading (`A* ∩ B* ≠ ∅`), so
//! it renames its second argument apart before unifying.

use std::collections::{BTreeSet, HashMap};

use crate::formula::{Formula, Substitution, Variable};

/// Renames the variables of `f` that occur in `forbidden`. The returned
/// substitution holds only the variables that were actually renamed.
pub fn rename_apart(f: &Formula, forbidden: &BTreeSet<Variable>) -> (Formula, Substitution) {
    let vars = f.vars();
    let mut taken: BTreeSet<Variable> = forbidden.union(&vars).cloned().collect();
    let mut renaming = Substitution::new();
    for v in vars.iter().filter(|v| forbidden.contains(*v)) {
        let fresh = fresh_variant(v, &taken);
        taken.insert(fresh.clone());
        renaming.insert(v.clone(), Formula::Var(fresh));
    }
    (renaming.apply(f), renaming)
}

/// First name of the form `{v}_{k}` that is not in `taken`.
pub fn fresh_variant(v: &Variable, taken: &BTreeSet<Variable>) -> Variable {
    (1..)
        .map(|k| Variable::named(&format!("{}_{k}", v.name())))
        .find(|c| !taken.contains(c))
        .expect("unbounded supply of names")
}

struct Unifier {
    bindings: HashMap<Variable, Formula>,
}

impl Unifier {
    fn walk<'a>(&'a self, mut f: &'a Formula) -> &'a Formula {
        while let Formula::Var(v) = f {
            match self.bindings.get(v) {
                Some(next) => f = next,
                None => break,
            }
        }
        f
    }

    fn occurs(&self, v: &Variable, f: &Formula) -> bool {
        match self.walk(f) {
            Formula::Var(w) => w == v,
            Formula::Imp(p, c) => self.occurs(v, p) || self.occurs(v, c),
            Formula::Conn(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &Formula, b: &Formula) -> bool {
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((a, b)) = stack.pop() {
            let a = self.walk(&a).clone();
            let b = self.walk(&b).clone();
            match (&a, &b) {
                (Formula::Var(x), Formula::Var(y)) if x == y => {}
                (Formula::Var(x), t) | (t, Formula::Var(x)) => {
                    if self.occurs(x, t) {
                        return false;
                    }
                    self.bindings.insert(x.clone(), t.clone());
                }
                (Formula::Imp(p1, c1), Formula::Imp(p2, c2)) => {
                    stack.push(((**c1).clone(), (**c2).clone()));
                    stack.push(((**p1).clone(), (**p2).clone()));
                }
                (Formula::Conn(s1, a1), Formula::Conn(s2, a2)) => {
                    if s1 != s2 || a1.len() != a2.len() {
                        return false;
                    }
                    for (x, y) in a1.iter().zip(a2.iter()).rev() {
                        stack.push((x.clone(), y.clone()));
                    }
                }
                _ => return false,
            }
        }
        true
    }

    fn resolve(&self, f: &Formula, memo: &mut HashMap<Variable, Formula>) -> Formula {
        match f {
            Formula::Var(v) => {
                if let Some(done) = memo.get(v) {
                    return done.clone();
                }
                let out = match self.bindings.get(v) {
                    Some(t) => self.resolve(t, memo),
                    None => f.clone(),
                };
                memo.insert(v.clone(), out.clone());
                out
            }
            Formula::Imp(p, c) => Formula::imp(self.resolve(p, memo), self.resolve(c, memo)),
            Formula::Conn(sym, args) => Formula::Conn(
                sym.clone(),
                args.iter().map(|a| self.resolve(a, memo)).collect::<Vec<_>>().into(),
            ),
        }
    }

    fn into_substitution(self) -> Substitution {
        let mut memo = HashMap::new();
        let mut vars: Vec<&Variable> = self.bindings.keys().collect();
        vars.sort();
        vars.into_iter()
            .map(|v| (v.clone(), self.resolve(&Formula::Var(v.clone()), &mut memo)))
            .collect()
    }
}

/// Most general unifier of `a` and `b`, idempotent, with occurs check.
/// Variables shared by `a` and `b` are the same variable.
pub fn mgu(a: &Formula, b: &Formula) -> Option<Substitution> {
    let mut u = Unifier {
        bindings: HashMap::new(),
    };
    u.unify(a, b).then(|| u.into_substitution())
}

/// Whether `a` and `b` have a common substitution instance.
pub fn unifiable(a: &Formula, b: &Formula) -> bool {
    let (b, _) = rename_apart(b, &a.vars());
    mgu(a, &b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{match_instance, parse};
    use crate::testutil::{arb_formula, arb_imp_formula};
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn vset(names: &[&str]) -> BTreeSet<Variable> {
        names.iter().map(|n| Variable::named(n)).collect()
    }

    #[test]
    fn rename_apart_examples() {
        let (f, r) = rename_apart(&p("x -> x"), &vset(&["x"]));
        assert_eq!(f, p("x_1 -> x_1"));
        assert_eq!(r.get(&Variable::named("x")), Some(&p("x_1")));

        let (f, r) = rename_apart(&p("x -> y"), &BTreeSet::new());
        assert_eq!(f, p("x -> y"));
        assert!(r.is_empty());

        let tri = p("((x0 -> x0) -> x0) -> x0");
        let (f, _) = rename_apart(&tri, &vset(&["x0"]));
        assert!(f.vars().is_disjoint(&vset(&["x0"])));
        assert!(crate::formula::is_variant(&f, &tri));
    }

    #[test]
    fn rename_apart_avoids_existing_names() {
        let (f, _) = rename_apart(&p("x -> x_1"), &vset(&["x"]));
        assert_eq!(f, p("x_2 -> x_1"));
    }

    #[test]
    fn mgu_examples() {
        assert!(mgu(&p("x"), &p("x")).unwrap().is_empty());
        assert!(mgu(&p("x -> x"), &p("(y -> z) -> z")).is_none());
        let s = mgu(&p("x -> y -> x"), &p("u -> v -> u")).unwrap();
        assert_eq!(s.apply(&p("x -> y -> x")), s.apply(&p("u -> v -> u")));
        assert!(s.iter().all(|(_, f)| f.as_var().is_some()));
    }

    #[test]
    fn occurs_check() {
        assert!(mgu(&p("x"), &p("x -> y")).is_none());
        assert!(mgu(&p("x -> y"), &p("y -> (x -> x)")).is_none());
    }

    #[test]
    fn mgu_result_is_idempotent() {
        let s = mgu(&p("x -> y -> z"), &p("y -> z -> (u -> u)")).unwrap();
        for (_, f) in s.iter() {
            assert_eq!(&s.apply(f), f);
        }
    }

    #[test]
    fn unifiable_renames_apart() {
        // shared-variable unification fails, instance intersection does not
        assert!(mgu(&p("x -> y"), &p("y -> (x -> x)")).is_none());
        assert!(unifiable(&p("x -> y"), &p("y -> (x -> x)")));
        assert!(unifiable(&p("x -> y"), &p("u -> v")));
        assert!(!unifiable(&p("x -> x"), &p("(y -> z) -> z")));
    }

    /// Every formula over {x, y} with implication depth at most `depth`.
    fn all_formulas(depth: usize) -> Vec<Formula> {
        let mut level = vec![p("x"), p("y")];
        for _ in 0..depth {
            let mut next = vec![p("x"), p("y")];
            for a in &level {
                for b in &level {
                    next.push(Formula::imp(a.clone(), b.clone()));
                }
            }
            level = next;
        }
        level
    }

    // Brute-force generality check: every unifier over a bounded space must
    // factor through the computed mgu.
    fn check_generality(a: &Formula, b: &Formula, depth: usize) -> usize {
        let s = mgu(a, b);
        let x = Variable::named("x");
        let y = Variable::named("y");
        let tuple = |sub: &Substitution| {
            Formula::conn("tuple", vec![sub.apply(&Formula::Var(x.clone())), sub.apply(&Formula::Var(y.clone()))]).unwrap()
        };
        let space = all_formulas(depth);
        let mut unifiers = 0;
        for fx in &space {
            for fy in &space {
                let t: Substitution = [(x.clone(), fx.clone()), (y.clone(), fy.clone())].into_iter().collect();
                if t.apply(a) != t.apply(b) {
                    continue;
                }
                unifiers += 1;
                let s = s.as_ref().expect("brute force found a unifier but mgu failed");
                assert!(
                    match_instance(&tuple(s), &tuple(&t)).is_some(),
                    "{t} does not factor through {s}"
                );
            }
        }
        unifiers
    }

    #[test]
    fn mgu_is_most_general_on_small_instances() {
        let cases = [
            ("x -> y", "y -> x"),
            ("x -> (x -> y)", "(y -> y) -> (x -> x)"),
            ("x", "y -> y"),
            ("x -> y", "(y -> y) -> x"),
            ("(x -> y) -> x", "y -> (x -> x)"),
        ];
        let mut total = 0;
        for (a, b) in cases {
            let (a, b) = (p(a), p(b));
            total += check_generality(&a, &b, 2);
        }
        assert!(total > 0);
        total += check_generality(&p("x -> y"), &p("y -> x"), 3);
        assert!(total > 1000);
    }

    proptest! {
        #[test]
        fn mgu_is_sound(a in arb_formula(5), b in arb_formula(5)) {
            if let Some(s) = mgu(&a, &b) {
                prop_assert_eq!(s.apply(&a), s.apply(&b));
            }
        }

        #[test]
        fn mgu_finds_unifier_of_constructed_instances(
            a in arb_imp_formula(&["x", "y"], 4),
            b in arb_imp_formula(&["u", "v"], 4),
        ) {
            // a and b share no variables, so any common instance is witnessed by mgu
            match mgu(&a, &b) {
                Some(s) => prop_assert_eq!(s.apply(&a), s.apply(&b)),
                None => prop_assert!(!unifiable(&a, &b)),
            }
        }

        #[test]
        fn unifiable_is_symmetric(a in arb_formula(5), b in arb_formula(5)) {
            prop_assert_eq!(unifiable(&a, &b), unifiable(&b, &a));
        }
    }
}
