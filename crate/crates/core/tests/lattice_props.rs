use proptest::prelude::*;
use qlw_core::formula::Formula;
use qlw_core::omlattice::{standard, Elem, Law, OrthoLattice, Standard};
use qlw_core::semantics::{evaluate, Valuation};

fn arb_oml() -> impl Strategy<Value = OrthoLattice> {
    prop_oneof![
        (1usize..=4).prop_map(Standard::Boolean),
        (1usize..=6).prop_map(Standard::Mo),
    ]
    .prop_map(|s| standard(s).unwrap())
}

fn with_elems(n: usize) -> impl Strategy<Value = (OrthoLattice, Vec<Elem>)> {
    arb_oml().prop_flat_map(move |l| {
        let len = l.len();
        (Just(l), proptest::collection::vec(0..len, n))
    })
}

proptest! {
    #[test]
    fn hook_is_top_exactly_on_order((l, e) in with_elems(2)) {
        let (a, b) = (e[0], e[1]);
        prop_assert_eq!(l.sasaki_hook(a, b).unwrap() == l.top(), l.leq(a, b));
    }

    #[test]
    fn de_morgan((l, e) in with_elems(2)) {
        let (a, b) = (e[0], e[1]);
        prop_assert_eq!(l.ortho(l.join(a, b)), l.meet(l.ortho(a), l.ortho(b)));
        prop_assert_eq!(l.ortho(l.meet(a, b)), l.join(l.ortho(a), l.ortho(b)));
    }

    #[test]
    fn orthomodular_identity((l, e) in with_elems(2)) {
        let (a, b) = (e[0], e[1]);
        if l.leq(a, b) {
            prop_assert_eq!(l.join(a, l.meet(b, l.ortho(a))), b);
        }
    }

    #[test]
    fn foulis_holland((l, e) in with_elems(3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        if l.commensurable(a, b) && l.commensurable(a, c) {
            prop_assert_eq!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
            prop_assert_eq!(l.meet(b, l.join(a, c)), l.join(l.meet(b, a), l.meet(b, c)));
        }
    }

    #[test]
    fn commensurability_is_symmetric((l, e) in with_elems(2)) {
        prop_assert_eq!(l.commensurable(e[0], e[1]), l.commensurable(e[1], e[0]));
    }

    #[test]
    fn operations_are_monotone((l, e) in with_elems(3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        if l.leq(a, b) {
            prop_assert!(l.leq(l.meet(a, c), l.meet(b, c)));
            prop_assert!(l.leq(l.join(a, c), l.join(b, c)));
            prop_assert!(l.leq(l.ortho(b), l.ortho(a)));
            prop_assert!(l.leq(l.sasaki_projection(c, a).unwrap(), l.sasaki_projection(c, b).unwrap()));
        }
    }

    #[test]
    fn sasaki_projection_stays_below((l, e) in with_elems(2)) {
        let p = l.sasaki_projection(e[0], e[1]).unwrap();
        prop_assert!(l.leq(p, e[0]));
    }

    #[test]
    fn spec_round_trip(l in arb_oml()) {
        let back = OrthoLattice::from_spec(&l.to_spec()).unwrap();
        prop_assert_eq!(back.len(), l.len());
        for a in 0..l.len() {
            for b in 0..l.len() {
                let (x, y) = (back.elem(l.label(a)).unwrap(), back.elem(l.label(b)).unwrap());
                prop_assert_eq!(back.leq(x, y), l.leq(a, b));
            }
        }
    }
}

fn bit_eval(f: &Formula, atoms: &[(String, usize)], n: usize) -> usize {
    let full = (1usize << n) - 1;
    match f {
        Formula::Elementary(name) => atoms.iter().find(|(k, _)| k == name).unwrap().1,
        Formula::Top => full,
        Formula::Bottom => 0,
        Formula::Not(a) => full & !bit_eval(a, atoms, n),
        Formula::And(a, b) => bit_eval(a, atoms, n) & bit_eval(b, atoms, n),
        Formula::Or(a, b) => bit_eval(a, atoms, n) | bit_eval(b, atoms, n),
        Formula::Implies(a, b) => (full & !bit_eval(a, atoms, n)) | bit_eval(b, atoms, n),
        Formula::Seq(..) => unreachable!(),
    }
}

fn arb_lattice_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop_oneof![Just("A"), Just("B"), Just("C")].prop_map(Formula::atom),
        Just(Formula::Top),
        Just(Formula::Bottom),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

proptest! {
    // In a Boolean algebra the hook is material implication, so evaluation
    // agrees with bitwise truth tables.
    #[test]
    fn boolean_models_collapse_to_truth_tables(
        f in arb_lattice_formula(),
        n in 1usize..=3,
        picks in proptest::collection::vec(0usize..8, 3),
    ) {
        let l = standard(Standard::Boolean(n)).unwrap();
        let atoms: Vec<(String, usize)> =
            ["A", "B", "C"].iter().zip(&picks).map(|(k, &p)| (k.to_string(), p % l.len())).collect();
        let mut v = Valuation::new(&l);
        for (k, e) in &atoms {
            v = v.with(k, l.label(*e)).unwrap();
        }
        prop_assert_eq!(evaluate(&f, &v).unwrap(), bit_eval(&f, &atoms, n));
    }
}

/// A lattice is orthomodular iff `a <= b` and `a' & b = 0` force `a = b`,
/// i.e. no O6 sits inside it.
fn has_o6_pair(l: &OrthoLattice) -> Option<(Elem, Elem)> {
    (0..l.len())
        .flat_map(|a| (0..l.len()).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && l.leq(a, b) && l.meet(l.ortho(a), b) == l.bottom())
}

#[test]
fn orthomodular_lattices_contain_no_o6() {
    for s in (1..=4).map(Standard::Boolean).chain((1..=6).map(Standard::Mo)) {
        let l = standard(s).unwrap();
        assert!(has_o6_pair(&l).is_none(), "{s}");
        assert!(l.check_law(Law::Orthomodular).holds);
    }
    let o6 = standard(Standard::O6).unwrap();
    let (a, b) = has_o6_pair(&o6).unwrap();
    assert_eq!((o6.label(a), o6.label(b)), ("a", "b"));
}

#[test]
fn every_commensurable_pair_closes_to_a_boolean_algebra() {
    for s in [Standard::Mo(3), Standard::Boolean(3)] {
        let l = standard(s).unwrap();
        for a in 0..l.len() {
            for b in 0..l.len() {
                if l.commensurable(a, b) {
                    let sub = l.boolean_closure(&[a, b]).unwrap();
                    assert!(sub.check_law(Law::Distributive).holds);
                    assert!(sub.len().is_power_of_two());
                } else {
                    assert!(l.boolean_closure(&[a, b]).is_err());
                }
            }
        }
    }
}
