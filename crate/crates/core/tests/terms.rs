use proptest::prelude::*;
use simlab_core::lambda::{
    check_type, parse_term, reduce, term_eq, typecheck, ReductionGraph, SumMode, Term,
};
use simlab_core::laws::corpus;

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["x", "y", "f"]).prop_map(Term::var),
        1 => Just(Term::zero()),
    ];
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(t, u)| Term::app(t, u)),
            (prop::sample::select(vec!["x", "y"]), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            (inner.clone(), inner.clone()).prop_map(|(t, u)| Term::dapp(t, u)),
            (inner.clone(), inner).prop_map(|(t, u)| t.plus(u)),
        ]
    })
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(t in term()) {
        let c = t.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert!(c.is_locally_closed());
    }

    #[test]
    fn printing_round_trips(t in term()) {
        let back = parse_term(&t.to_string()).unwrap();
        prop_assert!(term_eq(&back, &t, SumMode::Multiset), "{} reparsed as {}", t, back);
    }

    #[test]
    fn sums_commute(t in term(), u in term()) {
        prop_assert!(term_eq(&t.clone().plus(u.clone()), &u.plus(t), SumMode::Multiset));
    }
}

#[test]
fn corpus_normal_forms_are_unique_and_typed() {
    for (ctx, t) in corpus() {
        let ty = typecheck(&ctx, &t).unwrap();
        let graph = ReductionGraph::explore(&t, 10_000).unwrap();
        let nf = reduce(&t, 10_000);
        assert!(!nf.exhausted, "{t}");
        for n in graph.normal_forms() {
            assert!(term_eq(&n, &nf.term, SumMode::Multiset), "{t}: {n} vs {}", nf.term);
        }
        check_type(&ctx, &nf.term, &ty).unwrap();
    }
}

#[test]
fn beta_and_differential_examples() {
    let nf = |s: &str| reduce(&parse_term(s).unwrap(), 1000).term;
    assert!(term_eq(&nf("(\\x. f (f x)) y"), &parse_term("f (f y)").unwrap(), SumMode::Multiset));
    assert!(term_eq(&nf("D (\\x. x) . y"), &parse_term("\\x. y").unwrap(), SumMode::Multiset));
    assert!(term_eq(&nf("(\\x. 0) y"), &Term::zero(), SumMode::Multiset));
}
