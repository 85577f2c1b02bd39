use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use simlab_core::category::{greatest_simulation, is_simulation};
use simlab_core::connectives::{bang, double_dual, oplus, tensor};
use simlab_core::kernel::stack_example;
use simlab_core::lambda::{parse_context, parse_term, reduce, ReductionGraph};
use simlab_core::laws::{coin, corpus, flip};
use simlab_core::pt::angelic;
use simlab_core::reflexive::interp_untyped;
use simlab_core::semantics::interp_term;
use simlab_core::{Budget, Relation};

fn simulation(c: &mut Criterion) {
    let (w1, w2) = (stack_example(3), stack_example(3));
    c.bench_function("greatest_simulation stack3", |b| b.iter(|| greatest_simulation(black_box(&w1), black_box(&w2))));
    let w = stack_example(2);
    let dd = double_dual(&w);
    let id = Relation::identity(w.states().unwrap().iter());
    c.bench_function("identity into double dual stack2", |b| b.iter(|| is_simulation(black_box(&id), &w, &dd)));
    let (l, r) = (bang(&oplus(&flip(), &coin())), tensor(&bang(&flip()), &bang(&coin())));
    let budget = Budget::default().with_bag(3);
    let iso = simlab_core::category::lafont_iso(&flip(), &coin(), &budget).unwrap();
    c.bench_function("lafont iso bags 3", |b| b.iter(|| is_simulation(black_box(&iso), &l, &r)));
}

fn lambda(c: &mut Criterion) {
    let terms = corpus();
    c.bench_function("reduce corpus", |b| {
        b.iter(|| terms.iter().map(|(_, t)| reduce(black_box(t), 10_000).steps).sum::<usize>())
    });
    c.bench_function("explore corpus", |b| {
        b.iter(|| terms.iter().map(|(_, t)| ReductionGraph::explore(black_box(t), 10_000).unwrap().terms().count()).sum::<usize>())
    });
}

fn semantics(c: &mut Criterion) {
    let ctx = parse_context("y : a, f : a -> a").unwrap();
    let t = parse_term("\\x. f (f x)").unwrap();
    let v = [("a".to_string(), coin())].into_iter().collect();
    let budget = Budget::default().with_bag(2);
    c.bench_function("interp twice over coin", |b| b.iter(|| interp_term(&ctx, black_box(&t), &v, &budget)));
    let k = parse_term("\\x. \\y. x").unwrap();
    let deep = Budget::default().with_depth(2).with_bag(1);
    c.bench_function("untyped K over stack1", |b| b.iter(|| interp_untyped(&stack_example(1), black_box(&k), &deep)));
    let w = stack_example(3);
    c.bench_function("angelic update stack3", |b| b.iter(|| angelic(black_box(&w))));
}

criterion_group!(benches, simulation, lambda, semantics);
criterion_main!(benches);
