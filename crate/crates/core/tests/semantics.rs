use simlab_core::kernel::stack_example;
use simlab_core::lambda::{parse_context, parse_term, Term};
use simlab_core::laws::{corpus, corpus_valuations, flip};
use simlab_core::reflexive::{interp_untyped, interp_untyped_in, member_untyped, Membership};
use simlab_core::semantics::{check_soundness, dapp_via_combinator, interp_term, semantic_eq};
use simlab_core::Budget;

fn budget(depth: usize, bag: usize) -> Budget {
    Budget::default().with_depth(depth).with_bag(bag)
}

#[test]
fn differential_application_agrees_with_the_combinator() {
    let v = &corpus_valuations()[0];
    let b = budget(3, 2);
    let mut checked = 0;
    for (ctx, t) in corpus() {
        if let Term::DApp(f, u) = &t {
            let direct = interp_term(&ctx, &t, v, &b).unwrap();
            let via = dapp_via_combinator(&ctx, f, u, v, &b).unwrap();
            assert_eq!(direct.elements, via, "{t}");
            checked += 1;
        }
    }
    assert!(checked >= 5, "only {checked} differential applications in the corpus");
}

#[test]
fn corpus_is_sound_under_both_valuations() {
    for v in corpus_valuations() {
        for (ctx, t) in corpus() {
            assert!(check_soundness(&ctx, &t, &v, &budget(3, 1)).unwrap().holds, "{t}");
        }
    }
}

#[test]
fn alpha_equivalent_terms_have_equal_denotations() {
    let ctx = parse_context("y : a, f : a -> a").unwrap();
    let v = &corpus_valuations()[1];
    let (t1, t2) = (parse_term("\\x. f x").unwrap(), parse_term("\\z. f z").unwrap());
    assert!(semantic_eq(&ctx, &t1, &t2, v, &budget(3, 2)).unwrap());
    let other = parse_term("\\x. f (f x)").unwrap();
    assert!(!semantic_eq(&ctx, &t1, &other, v, &budget(3, 2)).unwrap());
}

#[test]
fn untyped_denotations_grow_with_the_depth() {
    let base = flip();
    for src in ["\\x. x", "\\x. \\y. x", "(\\x. x) a", "D (\\x. x x) . a", "a (a b)"] {
        let t = parse_term(src).unwrap();
        let small = interp_untyped(&base, &t, &budget(1, 1)).unwrap();
        let large = interp_untyped(&base, &t, &budget(2, 1)).unwrap().restrict(1, 1);
        assert!(small.elements.is_subset(&large.elements), "{src}");
    }
}

#[test]
fn enumerated_elements_are_members() {
    let base = stack_example(1);
    let b = budget(2, 1);
    let vars = vec!["a".to_string()];
    for src in ["a", "\\x. x", "\\x. a", "(\\x. x) a", "D (\\x. x) . a"] {
        let t = parse_term(src).unwrap();
        let den = interp_untyped_in(&base, &vars, &t, &b).unwrap();
        assert!(!den.elements.is_empty(), "{src}");
        for e in &den.elements {
            let m = member_untyped(&base, &vars, &t, &e.context, &e.point, &b).unwrap();
            assert_eq!(m, Membership::Yes, "{src}: {e}");
        }
    }
}
