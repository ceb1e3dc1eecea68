use knowhow_core::formula::{is_identifier, parse_coalition, Coalition, Formula};
use knowhow_core::{format_formula, parse_formula};
use proptest::prelude::*;

fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,3}".prop_filter("identifier", |s| is_identifier(s))
}

fn coalition() -> impl Strategy<Value = Coalition> {
    prop::collection::btree_set(ident(), 0..4).prop_map(Coalition::new)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![ident().prop_map(Formula::Var), Just(Formula::False)];
    leaf.prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::know(c, a)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::strat(c, a)),
            (coalition(), inner).prop_map(|(c, a)| Formula::howto(c, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parse_inverts_format(f in formula()) {
        let text = format_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn format_is_a_fixed_point(f in formula()) {
        let once = format_formula(&f);
        let twice = format_formula(&parse_formula(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn coalitions_round_trip(c in coalition()) {
        prop_assert_eq!(parse_coalition(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn garbage_never_panics(s in "[ -~]{0,24}") {
        let _ = parse_formula(&s);
    }
}
