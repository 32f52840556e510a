use proptest::prelude::*;
use qlw_core::formula::{parse, render, Formula};

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => "[A-D][a-z0-9_]{0,2}".prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::seq(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in arb_formula()) {
        let text = render(&f);
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn json_round_trip(f in arb_formula()) {
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Formula>(&text).unwrap(), f);
    }

    #[test]
    fn rendering_is_a_fixed_point(f in arb_formula()) {
        let once = render(&f);
        prop_assert_eq!(render(&parse(&once).unwrap()), once);
    }

    #[test]
    fn parser_is_total(input in "[A-C01~&|>()\\- !x]{0,24}") {
        if let Err(e) = parse(&input) {
            prop_assert!(e.position <= input.len());
        }
    }

    #[test]
    fn parser_survives_arbitrary_unicode(input in "\\PC{0,32}") {
        if let Err(e) = parse(&input) {
            prop_assert!(e.position <= input.len());
        }
    }

    #[test]
    fn whitespace_is_insignificant(f in arb_formula()) {
        let spaced = render(&f).replace(' ', "   ").replace('(', "( ").replace(')', " )");
        prop_assert_eq!(parse(&spaced).unwrap(), f);
    }
}
