use proptest::prelude::*;

use crate::formula::Formula;

pub(crate) fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["x", "y", "z", "u"]).prop_map(Formula::var);
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            4 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            1 => inner.clone().prop_map(|a| Formula::conn("neg", vec![a]).unwrap()),
            1 => (inner.clone(), inner).prop_map(|(a, b)| Formula::conn("and", vec![a, b]).unwrap()),
        ]
    })
}

/// Implication-only formulas over the given variables.
pub(crate) fn arb_imp_formula(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vars.to_vec()).prop_map(Formula::var);
    leaf.prop_recursive(depth, 32, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b))
    })
}
