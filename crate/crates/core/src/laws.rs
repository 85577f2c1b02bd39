//! The acceptance laws: thirteen exhaustive checks at desk scale, each with a time limit.
//!
//! Random systems come from a seeded ChaCha generator, so every run checks the same cases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{
    assoc_right, comonad_maps, comonoid_maps, copair, deriving, deriving_equations, greatest_simulation,
    greatest_simulation_within, inj1, inj2, is_simulation, lafont_iso, map_targets, pair, proj1, proj2, swap,
    tensor_morphism, unit_right, bang_morphism, curry, uncurry, Relation,
};
use crate::connectives::{bang, bang_list, double_dual, dual, lollipop, oplus, sigma_p, tensor, unit_i, zero};
use crate::error::Error;
use crate::kernel::{stack_example, Budget, System, TableBuilder, Value};
use crate::lambda::{check_type, parse_context, parse_term, term_eq, typecheck, Context, SumMode, Term, ReductionGraph, reduce};
use crate::pt::{angelic, concretize, is_refinement, pt_dual, pt_tensor, PredicateTransformer};
use crate::reflexive::{interp_untyped_in, Reflexive};
use crate::semantics::{check_soundness, semantic_eq, Valuation};

/// One acceptance criterion.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Duration,
    run: fn() -> Checked,
}

type Checked = std::result::Result<String, String>;

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, name: "simulation-oracle", limit: secs(10), run: simulation_oracle },
    Criterion { id: 2, name: "sup-lattice", limit: secs(5), run: sup_lattice },
    Criterion { id: 3, name: "zero-coproduct-product", limit: secs(30), run: zero_coproduct_product },
    Criterion { id: 4, name: "monoidal-closure", limit: secs(60), run: monoidal_closure },
    Criterion { id: 5, name: "dualizing", limit: secs(60), run: dualizing },
    Criterion { id: 6, name: "comonoid-comonad", limit: secs(60), run: comonoid_comonad },
    Criterion { id: 7, name: "lafont", limit: secs(30), run: lafont },
    Criterion { id: 8, name: "deriving", limit: secs(30), run: deriving_laws },
    Criterion { id: 9, name: "metatheory", limit: secs(60), run: metatheory },
    Criterion { id: 10, name: "semantic-invariance", limit: secs(120), run: semantic_invariance },
    Criterion { id: 11, name: "reflexive", limit: secs(120), run: reflexive_object },
    Criterion { id: 12, name: "pt-equivalence", limit: secs(60), run: pt_equivalence },
    Criterion { id: 13, name: "trivial-formulas", limit: secs(10), run: trivial_formulas },
];

/// Criteria that fail for a documented reason, with the reason.
pub const KNOWN_RED: &[(u8, &str)] = &[(
    13,
    "! has one action per ordering of a bag, so formulas over I with ! have several actions",
)];

/// Looks a criterion up by number or name.
pub fn find(key: &str) -> Option<&'static Criterion> {
    let key = key.trim();
    CRITERIA
        .iter()
        .find(|c| c.name == key || key.parse::<u8>().is_ok_and(|n| n == c.id))
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    /// The law held on every checked case.
    pub holds: bool,
    pub elapsed: Duration,
    pub limit: Duration,
    pub detail: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.holds && self.elapsed <= self.limit
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let late = if self.holds && !self.passed() { " (over the time limit)" } else { "" };
        write!(
            f,
            "{status} {:>2} {:<24} {:>8.2}s / {}s{late}  {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

impl Criterion {
    pub fn known_red(&self) -> Option<&'static str> {
        KNOWN_RED.iter().find(|(id, _)| *id == self.id).map(|(_, why)| *why)
    }

    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let result = (self.run)();
        let elapsed = start.elapsed();
        let (holds, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome {
            id: self.id,
            name: self.name,
            holds,
            elapsed,
            limit: self.limit,
            detail,
        }
    }
}

fn fail(e: Error) -> String {
    format!("error: {e}")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Checked {
    if cond {
        Ok(String::new())
    } else {
        Err(msg())
    }
}

/// A random table system on `states` states named `s0, s1, …`, each with up to
/// `max_actions` actions and each action with up to `max_reactions` reactions.
pub fn random_system(rng: &mut impl Rng, states: usize, max_actions: usize, max_reactions: usize) -> System {
    let names: Vec<Value> = (0..states).map(|i| Value::atom(format!("s{i}"))).collect();
    let mut b = TableBuilder::new();
    for s in &names {
        b.state(s.clone());
    }
    let mut desc = Vec::new();
    for s in &names {
        for a in 0..rng.gen_range(0..=max_actions) {
            let act = Value::atom(format!("a{a}"));
            let nd = rng.gen_range(0..=max_reactions);
            if nd == 0 {
                b.action(s.clone(), act.clone());
            }
            for d in 0..nd {
                let t = names[rng.gen_range(0..states)].clone();
                desc.push(format!("{s}.{act}.d{d}->{t}"));
                b.transition(s.clone(), act.clone(), Value::atom(format!("d{d}")), t);
            }
        }
    }
    let label = format!("random[{}]", desc.join(" "));
    System::from_table(b.build().expect("random tables are well formed"), label)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every relation between the states of two finite systems that is a simulation.
fn all_simulations(w1: &System, w2: &System) -> Result<Vec<Relation>, Error> {
    let s1 = w1.states().ok_or_else(|| Error::NotFinite(w1.to_string()))?;
    let s2 = w2.states().ok_or_else(|| Error::NotFinite(w2.to_string()))?;
    let pairs: Vec<(Value, Value)> = s1
        .iter()
        .flat_map(|a| s2.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let r: Relation = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        if is_simulation(&r, w1, w2)?.holds {
            out.push(r);
        }
    }
    Ok(out)
}

fn simulation_oracle() -> Checked {
    let mut g = rng(1);
    for case in 0..50 {
        let (n1, n2) = (g.gen_range(1..=3), g.gen_range(1..=3));
        let w1 = random_system(&mut g, n1, 2, 2);
        let w2 = random_system(&mut g, n2, 2, 2);
        let union = Relation::union(all_simulations(&w1, &w2).map_err(fail)?.iter());
        let greatest = greatest_simulation(&w1, &w2).map_err(fail)?;
        ensure(union == greatest, || {
            format!("case {case}: fixpoint {greatest} but brute force {union} for {w1} and {w2}")
        })?;
    }
    Ok("50 random pairs: greatest simulation = union of all simulations".into())
}

fn sup_lattice() -> Checked {
    let mut g = rng(2);
    let mut families = 0;
    for case in 0..30 {
        let ws: Vec<System> = (0..3)
            .map(|_| {
                let n = g.gen_range(1..=3);
                random_system(&mut g, n, 2, 2)
            })
            .collect();
        let s12 = all_simulations(&ws[0], &ws[1]).map_err(fail)?;
        let s23 = all_simulations(&ws[1], &ws[2]).map_err(fail)?;
        ensure(is_simulation(&Relation::new(), &ws[0], &ws[1]).map_err(fail)?.holds, || {
            format!("case {case}: the empty relation is not a simulation")
        })?;
        for _ in 0..5 {
            let pick = |g: &mut ChaCha8Rng, from: &[Relation]| -> Vec<Relation> {
                let k = g.gen_range(0..=4.min(from.len()));
                (0..k).map(|_| from[g.gen_range(0..from.len())].clone()).collect()
            };
            let fam = pick(&mut g, &s12);
            let fam2 = pick(&mut g, &s23);
            let s = &s23[g.gen_range(0..s23.len())];
            let t = &s12[g.gen_range(0..s12.len())];
            let u = Relation::union(fam.iter());
            let u2 = Relation::union(fam2.iter());
            let right = Relation::union(fam.iter().map(|r| r.then(s)).collect::<Vec<_>>().iter());
            ensure(u.then(s) == right, || format!("case {case}: (∪F);s ≠ ∪(F;s)"))?;
            let left = Relation::union(fam2.iter().map(|r| t.then(r)).collect::<Vec<_>>().iter());
            ensure(t.then(&u2) == left, || format!("case {case}: t;(∪G) ≠ ∪(t;G)"))?;
            ensure(is_simulation(&u, &ws[0], &ws[1]).map_err(fail)?.holds, || {
                format!("case {case}: a union of simulations is not a simulation")
            })?;
            ensure(is_simulation(&t.then(s), &ws[0], &ws[2]).map_err(fail)?.holds, || {
                format!("case {case}: a composite of simulations is not a simulation")
            })?;
            families += 1;
        }
    }
    Ok(format!("{families} random families: composition distributes over unions"))
}

fn zero_coproduct_product() -> Checked {
    let mut g = rng(3);
    let b = Budget::default();
    let z = zero();
    for case in 0..20 {
        let mut sys = |max: usize| {
            let n = g.gen_range(1..=max);
            random_system(&mut g, n, 2, 2)
        };
        let (w1, w2, w3) = (sys(2), sys(2), sys(2));
        // zero object: the only relations to and from 0 are empty, and they are simulations
        for w in [&w1, &w2, &w3] {
            let to = all_simulations(&z, w).map_err(fail)?;
            let from = all_simulations(w, &z).map_err(fail)?;
            ensure(to == vec![Relation::new()] && from == vec![Relation::new()], || {
                format!("case {case}: 0 is not a zero object for {w}")
            })?;
        }
        let sum = oplus(&w1, &w2);
        let (i1, i2) = (inj1(&w1, &b).map_err(fail)?, inj2(&w2, &b).map_err(fail)?);
        let (p1, p2) = (proj1(&w1, &b).map_err(fail)?, proj2(&w2, &b).map_err(fail)?);
        for (r, a, c) in [(&i1, &w1, &sum), (&i2, &w2, &sum), (&p1, &sum, &w1), (&p2, &sum, &w2)] {
            ensure(is_simulation(r, a, c).map_err(fail)?.holds, || {
                format!("case {case}: an injection or projection is not a simulation")
            })?;
        }
        let f13 = all_simulations(&w1, &w3).map_err(fail)?;
        let f23 = all_simulations(&w2, &w3).map_err(fail)?;
        let (f, h) = (&f13[g.gen_range(0..f13.len())], &f23[g.gen_range(0..f23.len())]);
        let cp = copair(f, h);
        ensure(i1.then(&cp) == *f && i2.then(&cp) == *h, || format!("case {case}: injection equations"))?;
        let mediators: Vec<Relation> = all_simulations(&sum, &w3)
            .map_err(fail)?
            .into_iter()
            .filter(|m| i1.then(m) == *f && i2.then(m) == *h)
            .collect();
        ensure(mediators == vec![cp.clone()], || {
            format!("case {case}: {} coproduct mediators found, expected exactly the copairing", mediators.len())
        })?;
        let f31 = all_simulations(&w3, &w1).map_err(fail)?;
        let f32 = all_simulations(&w3, &w2).map_err(fail)?;
        let (f, h) = (&f31[g.gen_range(0..f31.len())], &f32[g.gen_range(0..f32.len())]);
        let pr = pair(f, h);
        ensure(pr.then(&p1) == *f && pr.then(&p2) == *h, || format!("case {case}: projection equations"))?;
        let mediators: Vec<Relation> = all_simulations(&w3, &sum)
            .map_err(fail)?
            .into_iter()
            .filter(|m| m.then(&p1) == *f && m.then(&p2) == *h)
            .collect();
        ensure(mediators == vec![pr.clone()], || {
            format!("case {case}: {} product mediators found, expected exactly the pairing", mediators.len())
        })?;
    }
    Ok("20 random triples: 0 is a zero object, ⊕ is a biproduct with unique mediators".into())
}

fn random_subsimulation(g: &mut ChaCha8Rng, w1: &System, w2: &System) -> Result<Relation, Error> {
    let greatest = greatest_simulation(w1, w2)?;
    for _ in 0..8 {
        let within: Relation = greatest.iter().filter(|_| g.gen_bool(0.6)).map(|(a, b)| (a.clone(), b.clone())).collect();
        let r = greatest_simulation_within(w1, w2, &within)?;
        if !r.is_empty() {
            return Ok(r);
        }
    }
    Ok(greatest)
}

fn monoidal_closure() -> Checked {
    let mut g = rng(4);
    let mut nonempty = 0;
    for case in 0..20 {
        let ws: Vec<System> = (0..3).map(|_| random_system(&mut g, 2, 2, 2)).collect();
        let (w1, w2, w3) = (&ws[0], &ws[1], &ws[2]);
        let src = tensor(w1, w2);
        let r = random_subsimulation(&mut g, &src, w3).map_err(fail)?;
        nonempty += usize::from(!r.is_empty());
        let c = curry(&r).map_err(fail)?;
        let v = is_simulation(&c, w1, &lollipop(w2, w3)).map_err(fail)?;
        ensure(v.holds, || format!("case {case}: curry is not a simulation: {v:?}"))?;
        ensure(uncurry(&c).map_err(fail)? == r, || format!("case {case}: uncurry ∘ curry ≠ id"))?;
    }
    Ok(format!("20 random simulations ({nonempty} non-empty): curry is a simulation, uncurry ∘ curry = id"))
}

fn dualizing() -> Checked {
    let mut g = rng(5);
    let mut systems = vec![stack_example(1)];
    systems.extend((0..20).map(|_| random_system(&mut g, 2, 2, 2)));
    for w in &systems {
        let states = w.states().expect("finite");
        let id = Relation::identity(states.iter());
        let dd = double_dual(w);
        ensure(is_simulation(&id, w, &dd).map_err(fail)?.holds, || format!("{w} → w⊥⊥ fails"))?;
        ensure(is_simulation(&id, &dd, w).map_err(fail)?.holds, || format!("w⊥⊥ → {w} fails"))?;
        let d = dual(w);
        for s in &states {
            let acts = w.actions(s).map_err(fail)?;
            for a in d.actions(s).map_err(fail)?.iter() {
                let ds = d.reactions(s, a).map_err(fail)?;
                ensure(ds == acts.to_vec(), || format!("{w}: reactions of w⊥ at {s} depend on the action"))?;
            }
        }
    }
    Ok("stack(1) and 20 random systems: identity is an iso w ≅ w⊥⊥; w⊥ reactions are action-independent".into())
}

fn comonoid_comonad() -> Checked {
    let mut g = rng(6);
    let b3 = Budget::default().with_bag(3);
    let mut systems: Vec<System> = (0..10).map(|_| random_system(&mut g, 2, 2, 2)).collect();
    systems.push(oplus(&unit_i(), &unit_i()));
    for w in &systems {
        let bw = bang(w);
        let bags: Vec<Value> = bw.slice(&b3).map_err(fail)?;
        let id_bang = Relation::identity(bags.iter());
        let (e, m) = comonoid_maps(w, &b3).map_err(fail)?;
        let (eps, delta) = comonad_maps(w, &b3).map_err(fail)?;
        let (sigma, p) = sigma_p(w, &b3).map_err(fail)?;
        let bl = bang_list(w);
        let checks: [(&str, &Relation, System, System); 6] = [
            ("e", &e, bw.clone(), unit_i()),
            ("m", &m, bw.clone(), tensor(&bw, &bw)),
            ("ε", &eps, bw.clone(), w.clone()),
            ("δ", &delta, bw.clone(), bang(&bw)),
            ("σ", &sigma, bl.clone(), bw.clone()),
            ("p", &p, bw.clone(), bl.clone()),
        ];
        for (name, r, a, c) in checks {
            let v = is_simulation(r, &a, &c).map_err(fail)?;
            ensure(v.holds, || format!("{w}: {name} is not a simulation: {v:?}"))?;
        }
        // comonoid laws
        let counit = map_targets(&m.then(&tensor_morphism(&id_bang, &e)), unit_right).map_err(fail)?;
        ensure(counit == id_bang, || format!("{w}: counit law"))?;
        let left = map_targets(&m.then(&tensor_morphism(&m, &id_bang)), assoc_right).map_err(fail)?;
        let right = m.then(&tensor_morphism(&id_bang, &m));
        ensure(left == right, || format!("{w}: coassociativity"))?;
        ensure(map_targets(&m, swap).map_err(fail)? == m, || format!("{w}: commutativity"))?;
        // comonad laws
        let (eps_bang, delta_bang) = comonad_maps(&bw, &b3).map_err(fail)?;
        ensure(delta.then(&eps_bang) == id_bang, || format!("{w}: δ ; ε! = id"))?;
        ensure(delta.then(&bang_morphism(&eps, &b3)) == id_bang, || format!("{w}: δ ; !ε = id"))?;
        let lhs = delta.then(&delta_bang);
        let rhs = delta.then(&bang_morphism(&delta, &b3));
        let window = |x: &Value| {
            x.as_bag()
                .is_some_and(|outer| outer.iter().map(|g| g.as_bag().map_or(0, <[Value]>::len)).sum::<usize>() <= 3)
        };
        let rhs = rhs.restrict(|_| true, window);
        ensure(lhs == rhs, || format!("{w}: δ ; δ! = δ ; !δ"))?;
    }
    Ok(format!("{} systems, bags ≤ 3: e, m, ε, δ, σ, p are simulations; comonoid and comonad laws hold", systems.len()))
}

fn lafont() -> Checked {
    let mut g = rng(7);
    let b3 = Budget::default().with_bag(3);
    let mut pairs = vec![(unit_i(), unit_i()), (stack_example(1), unit_i())];
    pairs.extend((0..20).map(|_| (random_system(&mut g, 2, 2, 2), random_system(&mut g, 2, 2, 2))));
    for (w1, w2) in &pairs {
        let iso = lafont_iso(w1, w2, &b3).map_err(fail)?;
        let left = bang(&oplus(w1, w2));
        let right = tensor(&bang(w1), &bang(w2));
        ensure(is_simulation(&iso, &left, &right).map_err(fail)?.holds, || format!("{w1}, {w2}: !(w1⊕w2) → !w1⊗!w2"))?;
        ensure(is_simulation(&iso.converse(), &right, &left).map_err(fail)?.holds, || {
            format!("{w1}, {w2}: !w1⊗!w2 → !(w1⊕w2)")
        })?;
    }
    Ok(format!("{} pairs, bags ≤ 3: the componentwise bijection is a simulation both ways", pairs.len()))
}

fn deriving_laws() -> Checked {
    let mut g = rng(8);
    let b2 = Budget::default().with_bag(2);
    let mut systems: Vec<System> = (0..20).map(|_| random_system(&mut g, 2, 2, 2)).collect();
    systems.push(oplus(&unit_i(), &unit_i()));
    for w in &systems {
        for eq in deriving_equations(w, 2).map_err(fail)? {
            ensure(eq.holds(), || format!("{w}: equation {} fails", eq.name))?;
        }
        let d = deriving(w, &b2).map_err(fail)?;
        let v = is_simulation(&d, &tensor(w, &bang(w)), &bang(w)).map_err(fail)?;
        ensure(v.holds, || format!("{w}: d_w is not a simulation"))?;
    }
    Ok(format!("{} two-state systems: the four equations hold on bags ≤ 2; d_w is a simulation", systems.len()))
}

/// The shared context of the term corpus.
pub const CORPUS_CONTEXT: &str = "y : a, z : a, f : a -> a, g : a -> a";

/// Typed terms (in [`CORPUS_CONTEXT`]) exercising β- and differential reduction.
pub const CORPUS: &[&str] = &[
    "(\\x. x) y",
    "(\\x. f x) y",
    "(\\x. f (f x)) y",
    "(\\x. \\w. x) y z",
    "(\\x. \\w. w) y z",
    "D (\\x. x) . y",
    "D (\\x. f x) . y",
    "D (\\x. f (f x)) . y",
    "(D (\\x. f x) . y) z",
    "(\\h. h y) f",
    "(\\h. h (h y)) f",
    "(\\h. \\x. h x) f y",
    "D (\\h. h y) . g",
    "(\\x. x) ((\\x. x) y)",
    "(\\x. f x) ((\\x. g x) y)",
    "(\\x. x) y + (\\x. f x) z",
    "D (\\x. x) . ((\\w. w) y)",
    "(D (\\x. \\w. x) . y) z",
    "D (D (\\x. f (f x)) . y) . z",
    "(\\x. 0) y",
    "D (\\x. y) . z",
    "(\\x. f x + x) y",
    "(\\h. D h . y) f",
    "(\\h. (D h . y) z) g",
    "(\\x. \\w. f x) y z",
    "(\\x. f (g x)) ((\\x. x) z)",
    "((\\x. x) f) y",
    "((\\h. h) (\\x. f x)) y",
    "D ((\\h. h) f) . y",
    "(\\x. D f . x) y",
    "(\\x. (\\w. w) x) y",
    "D (\\x. (\\w. f w) x) . y",
    "(\\x. \\w. x) ((\\x. x) y) z",
    "D (\\x. f x + x) . y",
];

pub fn corpus() -> Vec<(Context, Term)> {
    let ctx = parse_context(CORPUS_CONTEXT).expect("corpus context parses");
    CORPUS
        .iter()
        .map(|s| (ctx.clone(), parse_term(s).expect("corpus term parses")))
        .collect()
}

fn metatheory() -> Checked {
    let mut steps = 0;
    for (ctx, t) in corpus() {
        ensure(t.size() <= 12, || format!("{t} has size {}", t.size()))?;
        let ty = typecheck(&ctx, &t).map_err(fail)?;
        let graph = ReductionGraph::explore(&t, 10_000).map_err(fail)?;
        ensure(graph.longest_path(&t).is_some(), || format!("{t}: some reduction order loops"))?;
        let nfs: Vec<Term> = graph.normal_forms().into_iter().collect();
        ensure(!nfs.is_empty(), || format!("{t}: no normal form"))?;
        ensure(nfs.iter().all(|n| term_eq(n, &nfs[0], SumMode::Multiset)), || {
            format!("{t}: distinct normal forms {}", nfs.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" | "))
        })?;
        let lo = reduce(&t, 10_000);
        ensure(!lo.exhausted && term_eq(&lo.term, &nfs[0], SumMode::Multiset), || {
            format!("{t}: leftmost-outermost normal form differs")
        })?;
        for u in graph.terms() {
            check_type(&ctx, u, &ty).map_err(|e| format!("{t}: subject reduction fails at {u}: {e}"))?;
            steps += graph.edges[u].len();
        }
    }
    Ok(format!("{} corpus terms, {steps} reduction steps: confluent, terminating, type-preserving", CORPUS.len()))
}

/// `s ↔ t` under a single action.
pub fn flip() -> System {
    let (s, t) = (Value::atom("s"), Value::atom("t"));
    let (go, ok) = (Value::atom("go"), Value::atom("ok"));
    let mut b = TableBuilder::new();
    b.state(s.clone()).state(t.clone());
    b.transition(s.clone(), go.clone(), ok.clone(), t.clone());
    b.transition(t, go, ok, s);
    System::from_table(b.build().expect("flip is well formed"), "flip")
}

/// At `h` a toss whose outcome the Demon picks; `t` only rests.
pub fn coin() -> System {
    let (h, t) = (Value::atom("h"), Value::atom("t"));
    let mut b = TableBuilder::new();
    b.state(h.clone()).state(t.clone());
    b.transition(h.clone(), Value::atom("toss"), Value::atom("heads"), h.clone());
    b.transition(h.clone(), Value::atom("toss"), Value::atom("tails"), t.clone());
    b.transition(t.clone(), Value::atom("rest"), Value::atom("ok"), t);
    System::from_table(b.build().expect("coin is well formed"), "coin")
}

/// The two-state valuations of the atom `a` used for the semantic laws.
pub fn corpus_valuations() -> Vec<Valuation> {
    [flip(), coin()]
        .into_iter()
        .map(|w| [("a".to_string(), w)].into_iter().collect())
        .collect()
}

/// The six quotient equations, instantiated without the canonicalizing constructors.
fn quotient_instances() -> Vec<(&'static str, Term, Term)> {
    let v = Term::var;
    let bx = |t: Term, u: Term| (Box::new(t), Box::new(u));
    let app = |t: Term, u: Term| {
        let (a, b) = bx(t, u);
        Term::App(a, b)
    };
    let dapp = |t: Term, u: Term| {
        let (a, b) = bx(t, u);
        Term::DApp(a, b)
    };
    let lam = |body: Term| Term::Lam(crate::lambda::Hint("x".into()), Box::new(body));
    let raw_sum = |a: Term, b: Term| Term::Sum(vec![a, b]);
    let fx = app(v("f"), Term::Bound(0));
    let gx = app(v("g"), Term::Bound(0));
    let fy = |f: &'static str| app(v(f), v("y"));
    let ff = lam(app(v("f"), app(v("f"), Term::Bound(0))));
    vec![
        ("(0) u = 0", app(Term::Zero, v("y")), Term::Zero),
        ("λx.0 = 0", lam(Term::Zero), Term::Zero),
        ("D 0·t = 0", dapp(Term::Zero, v("y")), Term::Zero),
        ("D t·0 = 0", dapp(v("f"), Term::Zero), Term::Zero),
        ("(t1 + t2) u", app(raw_sum(v("f"), v("g")), v("y")), raw_sum(fy("f"), fy("g"))),
        ("(t1 + t2) u, abstractions", app(raw_sum(ff.clone(), lam(gx.clone())), v("z")), raw_sum(app(ff.clone(), v("z")), app(lam(gx.clone()), v("z")))),
        ("λx.(t1 + t2)", lam(raw_sum(fx.clone(), gx.clone())), raw_sum(lam(fx.clone()), lam(gx.clone()))),
        ("D (t1 + t2)·u", dapp(raw_sum(v("f"), v("g")), v("y")), raw_sum(dapp(v("f"), v("y")), dapp(v("g"), v("y")))),
        ("D t·(u1 + u2)", dapp(ff.clone(), raw_sum(v("y"), v("z"))), raw_sum(dapp(ff.clone(), v("y")), dapp(ff.clone(), v("z")))),
        ("D (D t·u)·v", dapp(dapp(ff.clone(), v("y")), v("z")), dapp(dapp(ff.clone(), v("z")), v("y"))),
        ("D (D t·u)·v, variable head", dapp(dapp(v("f"), fy("g")), v("z")), dapp(dapp(v("f"), v("z")), fy("g"))),
    ]
}

fn semantic_invariance() -> Checked {
    let budget = Budget::default().with_bag(2);
    let mut checks = 0;
    for v in corpus_valuations() {
        let which = v["a"].label().to_string();
        for (ctx, t) in corpus() {
            let graph = ReductionGraph::explore(&t, 10_000).map_err(fail)?;
            for (u, reducts) in &graph.edges {
                for r in reducts {
                    let same = semantic_eq(&ctx, u, r, &v, &budget).map_err(fail)?;
                    ensure(same, || format!("a = {which}: [[{u}]] ≠ [[{r}]]"))?;
                    checks += 1;
                }
            }
            for u in [&t, &reduce(&t, 10_000).term] {
                let verdict = check_soundness(&ctx, u, &v, &budget).map_err(fail)?;
                ensure(verdict.holds, || format!("a = {which}: [[{u}]] is not a simulation: {verdict:?}"))?;
                checks += 1;
            }
        }
        let ctx = parse_context(CORPUS_CONTEXT).expect("corpus context parses");
        for (name, l, r) in quotient_instances() {
            let same = semantic_eq(&ctx, &l, &r, &v, &budget).map_err(fail)?;
            ensure(same, || format!("a = {which}: quotient equation {name} fails"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} checks over 2 valuations: reduction steps, quotient equations, soundness"))
}

fn iso_on_slice(base: &System, budget: &Budget) -> Result<usize, String> {
    let refl = Reflexive::new(base, budget).map_err(fail)?;
    let r = refl.iso_r(budget).map_err(fail)?;
    ensure(is_simulation(&r, &refl.sum, &refl.w).map_err(fail)?.holds, || format!("{base}: r is not a simulation"))?;
    ensure(is_simulation(&r.converse(), &refl.w, &refl.sum).map_err(fail)?.holds, || {
        format!("{base}: r~ is not a simulation")
    })?;
    let states = refl.slice(budget).map_err(fail)?;
    let sum_states: BTreeSet<Value> = r.domain().cloned().collect();
    ensure(r.then(&r.converse()) == Relation::identity(sum_states.iter()), || format!("{base}: r ; r~ ≠ id"))?;
    ensure(r.converse().then(&r) == Relation::identity(states.iter()), || format!("{base}: r~ ; r ≠ id"))?;
    let (embed, project) = refl.retraction_pair(budget).map_err(fail)?;
    let arrows = refl.arrow_slice(budget).map_err(fail)?;
    ensure(embed.then(&project) == Relation::identity(arrows.iter()), || {
        format!("{base}: retraction composite ≠ id")
    })?;
    Ok(states.len())
}

/// Depth-2 nodes over a base with a choice of actions have 2^16 actions, so the
/// full depth-2 check uses a base with one action per state; `stack(1)` is checked
/// at depth 2 without bags and at depth 1 with bags.
fn reflexive_object() -> Checked {
    let stack = stack_example(1);
    let slices = [
        (flip(), Budget::default().with_depth(2).with_bag(1)),
        (stack.clone(), Budget::default().with_depth(2).with_bag(0)),
        (stack.clone(), Budget::default().with_depth(1).with_bag(1)),
    ];
    let mut sizes = Vec::new();
    for (base, budget) in &slices {
        sizes.push(iso_on_slice(base, budget)?.to_string());
    }
    // [[(λx.λy.x) a b]] = [[a]]: K adds two levels of nesting, so compute two levels deeper
    let wide = Budget::default().with_depth(3).with_bag(1);
    let vars = vec!["a".to_string(), "b".to_string()];
    let k = parse_term("(\\x. \\y. x) a b").expect("parses");
    let lhs = interp_untyped_in(&stack, &vars, &k, &wide).map_err(fail)?.restrict(1, 1);
    let rhs = interp_untyped_in(&stack, &vars, &Term::var("a"), &wide).map_err(fail)?.restrict(1, 1);
    ensure(lhs.elements == rhs.elements, || {
        format!("[[(λx.λy.x) a b]] has {} elements, [[a]] has {}", lhs.elements.len(), rhs.elements.len())
    })?;
    Ok(format!(
        "slices of {} states: r is an iso, the retraction composite is the identity; K a b = a on {} elements",
        sizes.join("/"),
        rhs.elements.len()
    ))
}

fn random_monotone(g: &mut ChaCha8Rng, base: &[Value]) -> PredicateTransformer {
    let n = base.len();
    let full = (1u32 << n) - 1;
    let seeds: Vec<u32> = (0..=full).map(|_| g.gen_range(0..=full) & g.gen_range(0..=full)).collect();
    PredicateTransformer::from_fn(base, |x| {
        (0..=full).filter(|y| y & !x == 0).fold(0, |acc, y| acc | seeds[y as usize])
    })
    .expect("monotone by construction")
}

fn pt_equivalence() -> Checked {
    let mut g = rng(12);
    let mut relations = 0;
    for case in 0..50 {
        let (n1, n2) = (g.gen_range(1..=3), g.gen_range(1..=3));
        let w1 = random_system(&mut g, n1, 2, 2);
        let w2 = random_system(&mut g, n2, 2, 2);
        let (f1, f2) = (angelic(&w1).map_err(fail)?, angelic(&w2).map_err(fail)?);
        let s1 = w1.states().expect("finite");
        let s2 = w2.states().expect("finite");
        let pairs: Vec<(Value, Value)> = s1.iter().flat_map(|a| s2.iter().map(move |b| (a.clone(), b.clone()))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let r: Relation = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| p.clone()).collect();
            let sim = is_simulation(&r, &w1, &w2).map_err(fail)?.holds;
            let refines = is_refinement(&r, &f1, &f2).map_err(fail)?.holds;
            ensure(sim == refines, || format!("case {case}: simulation {sim} but refinement {refines} for {r}"))?;
            relations += 1;
        }
        // 𝓕(w°) ≅ w by the identity
        let c = concretize(&f1).map_err(fail)?;
        let id = Relation::identity(s1.iter());
        ensure(
            is_simulation(&id, &c, &w1).map_err(fail)?.holds && is_simulation(&id, &w1, &c).map_err(fail)?.holds,
            || format!("case {case}: 𝓕(w°) is not isomorphic to {w1}"),
        )?;
        ensure(angelic(&dual(&w1)).map_err(fail)? == pt_dual(&f1), || format!("case {case}: (w⊥)° ≠ (w°)⊥"))?;
    }
    let base: Vec<Value> = ["p", "q", "r"].iter().map(|s| Value::atom(*s)).collect();
    for case in 0..50 {
        let n = g.gen_range(1..=3);
        let f = random_monotone(&mut g, &base[..n]);
        let back = angelic(&concretize(&f).map_err(fail)?).map_err(fail)?;
        ensure(back == f, || format!("case {case}: 𝓕(F)° ≠ F for\n{f}"))?;
    }
    for case in 0..20 {
        let w1 = random_system(&mut g, 2, 2, 2);
        let w2 = random_system(&mut g, 2, 2, 2);
        let lhs = angelic(&tensor(&w1, &w2)).map_err(fail)?;
        let rhs = pt_tensor(&angelic(&w1).map_err(fail)?, &angelic(&w2).map_err(fail)?).map_err(fail)?;
        ensure(lhs == rhs, || format!("case {case}: (w1⊗w2)° ≠ w1°⊗w2°"))?;
    }
    let w = stack_example(1);
    let id = Relation::identity(w.states().expect("finite").iter());
    let c = concretize(&angelic(&w).map_err(fail)?).map_err(fail)?;
    ensure(is_simulation(&id, &c, &w).map_err(fail)?.holds && is_simulation(&id, &w, &c).map_err(fail)?.holds, || {
        "𝓕(stack(1)°) is not isomorphic to stack(1)".into()
    })?;
    Ok(format!(
        "{relations} relations: simulation ⟺ refinement; 50 transformers: 𝓕(F)° = F; duals and tensors commute with (·)°"
    ))
}

/// A system up to renaming of states, actions and reactions by their rank:
/// per state, per action, the rank of the target of each reaction.
type Shape = Vec<Vec<Vec<usize>>>;

fn shape(w: &System, budget: &Budget) -> Result<Shape, Error> {
    let states = w.slice(budget)?;
    let index: BTreeMap<&Value, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    states
        .iter()
        .map(|s| {
            w.actions(s)?
                .iter()
                .map(|a| {
                    let ds = w.reactions(s, a)?;
                    ds.iter()
                        .map(|d| Ok(index.get(&w.step(s, a, d)?).copied().unwrap_or(usize::MAX)))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn trivial(sh: &Shape) -> Option<(usize, String)> {
    for (i, acts) in sh.iter().enumerate() {
        if acts.len() != 1 {
            return Some((i, format!("{} actions", acts.len())));
        }
        if acts[0] != vec![i] {
            return Some((i, format!("reactions lead to {:?}", acts[0])));
        }
    }
    None
}

/// Whether the Angel can stay put at every state (every subset is then a safety property).
fn stays_put(sh: &Shape) -> bool {
    sh.iter().enumerate().all(|(i, acts)| acts.iter().any(|ds| ds.iter().all(|t| *t == i)))
}

fn trivial_formulas() -> Checked {
    let budget = Budget {
        bag: 2,
        cap: 20_000,
        ..Budget::default()
    };
    // one representative per shape; a compound's shape only depends on its parts' shapes,
    // so only representatives are combined
    struct Rep {
        expr: String,
        system: System,
        shape: Option<Shape>,
    }
    let mut seen: BTreeMap<Option<Shape>, usize> = BTreeMap::new();
    let mut reps: Vec<Rep> = Vec::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut expressions = 0u64;
    let mut add = |expr: String, system: System, reps: &mut Vec<Rep>, seen: &mut BTreeMap<Option<Shape>, usize>| -> Option<usize> {
        expressions += 1;
        let sh = shape(&system, &budget).ok();
        if seen.contains_key(&sh) {
            return None;
        }
        seen.insert(sh.clone(), reps.len());
        reps.push(Rep { expr, system, shape: sh });
        Some(reps.len() - 1)
    };
    let mut first = Vec::new();
    for (e, s) in [("I", unit_i()), ("0", zero())] {
        first.extend(add(e.into(), s, &mut reps, &mut seen));
    }
    layers.push(first);
    for depth in 1..=3 {
        let older: Vec<usize> = layers.iter().flatten().copied().collect();
        let newest = layers[depth - 1].clone();
        let mut next = Vec::new();
        for &i in &newest {
            let (e, w) = (reps[i].expr.clone(), reps[i].system.clone());
            for (name, s) in [("dual", dual(&w)), ("bang", bang(&w)), ("bang_list", bang_list(&w))] {
                next.extend(add(format!("{name}({e})"), s.with_cap(budget.cap), &mut reps, &mut seen));
            }
        }
        for &i in &older {
            for &j in &older {
                if !newest.contains(&i) && !newest.contains(&j) {
                    continue;
                }
                let (ei, wi) = (reps[i].expr.clone(), reps[i].system.clone());
                let (ej, wj) = (reps[j].expr.clone(), reps[j].system.clone());
                for (name, s) in [("oplus", oplus(&wi, &wj)), ("tensor", tensor(&wi, &wj)), ("lollipop", lollipop(&wi, &wj))] {
                    next.extend(add(format!("{name}({ei}, {ej})"), s.with_cap(budget.cap), &mut reps, &mut seen));
                }
            }
        }
        layers.push(next);
    }
    let mut failures = Vec::new();
    let mut safe = true;
    for rep in &reps {
        match &rep.shape {
            None => failures.push(format!("{}: enumeration exceeded the cap", rep.expr)),
            Some(sh) => {
                safe &= stays_put(sh);
                if let Some((i, why)) = trivial(sh) {
                    let state = rep.system.slice(&budget).map(|s| s[i].to_string()).unwrap_or_default();
                    failures.push(format!("{} at {state}: {why}", rep.expr));
                }
            }
        }
    }
    let summary = format!("{} shapes from {expressions} expressions up to shape (bags ≤ 2)", reps.len());
    if failures.is_empty() {
        Ok(format!("{summary}: singleton actions and reactions, identity next"))
    } else {
        let first = failures.iter().min_by_key(|f| f.len()).cloned().unwrap_or_default();
        Err(format!(
            "{summary}: {} shapes are not singleton, e.g. {first}; every subset is still a safety property: {safe}",
            failures.len()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_name_and_number() {
        assert_eq!(find("7").unwrap().name, "lafont");
        assert_eq!(find("pt-equivalence").unwrap().id, 12);
        assert!(find("nope").is_none());
    }

    #[test]
    fn corpus_is_well_typed_and_small() {
        let c = corpus();
        assert!(c.len() >= 30);
        for (ctx, t) in &c {
            assert!(t.size() <= 12, "{t}");
            typecheck(ctx, t).unwrap();
        }
    }

    #[test]
    fn random_systems_are_reproducible() {
        let a = random_system(&mut rng(9), 3, 2, 2);
        let b = random_system(&mut rng(9), 3, 2, 2);
        assert_eq!(a.label(), b.label());
        assert_eq!(crate::kernel::multiset::bags_up_to(&a.states().unwrap(), 1).len(), 4);
    }
}
