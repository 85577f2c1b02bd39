use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simlab_core::category::{greatest_safety, greatest_simulation, is_safety, is_simulation};
use simlab_core::connectives::{double_dual, oplus, tensor};
use simlab_core::laws::random_system;
use simlab_core::{Relation, System};

fn system(seed: u64) -> System {
    random_system(&mut ChaCha8Rng::seed_from_u64(seed), 3, 2, 2)
}

proptest! {
    #[test]
    fn greatest_simulation_is_a_simulation(a in any::<u64>(), b in any::<u64>()) {
        let (w1, w2) = (system(a), system(b));
        let g = greatest_simulation(&w1, &w2).unwrap();
        prop_assert!(is_simulation(&g, &w1, &w2).unwrap().holds);
    }

    #[test]
    fn identity_is_the_greatest_on_itself(a in any::<u64>()) {
        let w = system(a);
        let id = Relation::identity(w.states().unwrap().iter());
        let g = greatest_simulation(&w, &w).unwrap();
        prop_assert!(id.is_subset(&g));
    }

    #[test]
    fn greatest_simulations_compose(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (w1, w2, w3) = (system(a), system(b), system(c));
        let g12 = greatest_simulation(&w1, &w2).unwrap();
        let g23 = greatest_simulation(&w2, &w3).unwrap();
        let g13 = greatest_simulation(&w1, &w3).unwrap();
        prop_assert!(g12.then(&g23).is_subset(&g13));
    }

    #[test]
    fn greatest_safety_is_safe(a in any::<u64>()) {
        let w = system(a);
        let x = greatest_safety(&w, &w.states().unwrap().into_iter().collect()).unwrap();
        prop_assert!(is_safety(&x, &w).unwrap().holds);
    }

    #[test]
    fn double_dual_is_isomorphic(a in any::<u64>()) {
        let w = system(a);
        let id = Relation::identity(w.states().unwrap().iter());
        let dd = double_dual(&w);
        prop_assert!(is_simulation(&id, &w, &dd).unwrap().holds);
        prop_assert!(is_simulation(&id, &dd, &w).unwrap().holds);
    }

    #[test]
    fn connectives_are_functorial(a in any::<u64>(), b in any::<u64>()) {
        let (w1, w2) = (system(a), system(b));
        let g = greatest_simulation(&w1, &w2).unwrap();
        let id = Relation::identity(w1.states().unwrap().iter());
        let pairs: Relation = g
            .iter()
            .flat_map(|(x, y)| id.iter().map(move |(u, _)| (simlab_core::Value::pair(x.clone(), u.clone()), simlab_core::Value::pair(y.clone(), u.clone()))))
            .collect();
        prop_assert!(is_simulation(&pairs, &tensor(&w1, &w1), &tensor(&w2, &w1)).unwrap().holds);
        let sum = oplus(&w1, &w1);
        prop_assert!(greatest_simulation(&sum, &sum).unwrap().len() >= 2 * id.len());
    }
}
