use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simlab_core::category::is_simulation;
use simlab_core::laws::random_system;
use simlab_core::pt::{angelic, concretize, is_refinement, pt_dual, PredicateTransformer};
use simlab_core::{Relation, Value};

fn base(n: usize) -> Vec<Value> {
    (0..n).map(|i| Value::atom(format!("x{i}"))).collect()
}

/// `F(x) = ∪ { seeds[y] | y ⊆ x }` is monotone for any seeds.
fn monotone(n: usize, seeds: &[u32]) -> PredicateTransformer {
    let full = (1u32 << n) - 1;
    PredicateTransformer::from_fn(&base(n), |x| {
        (0..=full).filter(|y| y & !x == 0).fold(0, |acc, y| acc | seeds[y as usize])
    })
    .unwrap()
}

proptest! {
    #[test]
    fn concretize_round_trips(n in 1usize..=4, seeds in prop::collection::vec(any::<u32>(), 16)) {
        let f = monotone(n, &seeds);
        prop_assert_eq!(angelic(&concretize(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn dual_is_an_involution(n in 1usize..=4, seeds in prop::collection::vec(any::<u32>(), 16)) {
        let f = monotone(n, &seeds);
        prop_assert_eq!(pt_dual(&pt_dual(&f)), f);
    }

    #[test]
    fn greatest_simulation_refines(a in any::<u64>(), b in any::<u64>()) {
        let w1 = random_system(&mut ChaCha8Rng::seed_from_u64(a), 3, 2, 2);
        let w2 = random_system(&mut ChaCha8Rng::seed_from_u64(b), 3, 2, 2);
        let g = simlab_core::category::greatest_simulation(&w1, &w2).unwrap();
        let (f1, f2) = (angelic(&w1).unwrap(), angelic(&w2).unwrap());
        prop_assert!(is_refinement(&g, &f1, &f2).unwrap().holds);
        prop_assert!(is_simulation(&g, &w1, &w2).unwrap().holds);
    }
}

#[test]
fn non_monotone_tables_are_rejected() {
    assert!(PredicateTransformer::from_fn(&base(2), |x| !x).is_err());
    let id = PredicateTransformer::from_fn(&base(2), |x| x).unwrap();
    let r = Relation::identity(base(2).iter());
    assert!(is_refinement(&r, &id, &id).unwrap().holds);
}
