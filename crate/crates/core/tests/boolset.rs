mod common;

use ltlf_learn::boolset::{
    beam_search, collapse, div_conq, dominates, existence_check, fast_non_dominated, reconstruct,
    reduce_antichain_exact, restrict, witness_solution, BeamConfig, BoolComb, DivConqConfig,
    Existence,
};
use ltlf_learn::enumerator::{vfb_bounded, EnumConfig};
use ltlf_learn::ltl::OperatorSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 300,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn witness_solution_iff_existence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, n, k) = (rng.gen_range(1..8), rng.gen_range(1..8), rng.gen_range(1..12));
        let inst = random_instance(&mut rng, p, n, k, 3);
        match witness_solution(&inst) {
            Some(theta) => {
                prop_assert!(existence_check(&inst).is_covered());
                prop_assert!(inst.is_solution(&theta));
            }
            None => prop_assert!(!existence_check(&inst).is_covered()),
        }
    }

    #[test]
    fn div_conq_succeeds_iff_existence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, n, k) = (rng.gen_range(1..9), rng.gen_range(1..9), rng.gen_range(1..12));
        let inst = random_instance(&mut rng, p, n, k, 3);
        // A solver that never helps forces splitting down to single pairs.
        let (res, _) = div_conq(&inst, |_| None, &DivConqConfig { seed, ..Default::default() });
        match (res, existence_check(&inst)) {
            (Ok(theta), Existence::AllCovered) => prop_assert!(inst.is_solution(&theta)),
            (Err(_), Existence::Witness { .. }) => {}
            (r, e) => prop_assert!(false, "{:?} with {:?}", r, e),
        }
    }

    #[test]
    fn beam_solutions_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, n, k) = (rng.gen_range(1..6), rng.gen_range(1..6), rng.gen_range(1..10));
        let inst = random_instance(&mut rng, p, n, k, 2);
        let cfg = BeamConfig { max_weight: 9, ..BeamConfig::default() };
        let out = beam_search(&inst, &cfg);
        prop_assert_eq!(out.result.is_solution(), inst.is_solution(out.result.comb()));
        if out.result.is_solution() {
            prop_assert!(existence_check(&inst).is_covered());
        }
    }

    #[test]
    fn substitution_never_hurts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 3, 3, 5, 3);
        let (a, b) = loop {
            let a = random_comb(&mut rng, &inst, 2);
            let b = random_comb(&mut rng, &inst, 2);
            if dominates(&inst.state(&a), a.weight(), &inst.state(&b), b.weight()) {
                break (a, b);
            }
        };
        let host = BoolComb::inter(BoolComb::union(b.clone(), inst.leaf(0)), inst.leaf(1));
        let swapped = host.substitute(&b, &a);
        prop_assert!(swapped.weight() <= host.weight());
        prop_assert!(inst.state(&host).sat.is_subset(&inst.state(&swapped).sat));
    }

    #[test]
    fn fast_reduction_keeps_something_dominating(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_sets = rng.gen_range(1..30);
        let inst = random_instance(&mut rng, 4, 4, n_sets, 4);
        let items = inst.states();
        let fast = fast_non_dominated(&items, k);
        let exact = reduce_antichain_exact(&items);
        prop_assert!(exact.iter().all(|i| fast.contains(i)));
        prop_assert!(fast.windows(2).all(|w| w[0] < w[1]));
        for i in 0..items.len() {
            prop_assert!(fast.iter().any(|&j| dominates(&items[j].0, items[j].1, &items[i].0, items[i].1)));
        }
    }
}

#[test]
fn restrict_and_reconstruct_on_a_bank() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut tried = 0;
    while tried < 20 {
        let s = random_sample(&mut rng, 2, 4, 4, 7);
        let out = vfb_bounded(&s, &OperatorSet::default(), &EnumConfig::bounded(3));
        if out.solution.is_some() {
            continue;
        }
        tried += 1;
        let inst = collapse(&out.bank);
        for _ in 0..10 {
            let leaves = rng.gen_range(1..5);
            let theta = random_comb(&mut rng, &inst, leaves);
            let f = reconstruct(&theta, &inst, &s).unwrap();
            assert_eq!(f.size(), theta.weight());
        }
        let (sub, origin) = restrict(&inst, &[0, 1], &[4, 5], None);
        assert_eq!((sub.n_pos(), sub.n_neg()), (2, 2));
        for (i, set) in sub.sets().iter().enumerate() {
            let root = inst.set(origin[i]);
            for (e, &u) in [0, 1, 4, 5].iter().enumerate() {
                assert_eq!(set.members.get(e), root.members.get(u));
            }
        }
        if let Some(theta) = witness_solution(&inst) {
            let f = reconstruct(&theta, &inst, &s).unwrap();
            assert!(separates(&f, &s));
        }
    }
}
