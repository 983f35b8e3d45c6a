use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use workbench_core::diagonal::prime_factor_count;
use workbench_core::machine::{
    decode_trace, encode_trace, evaluate_index, min_trace_code, Evaluation,
};
use workbench_core::tree::brute_force_level_set;
use workbench_core::*;

fn n(v: u64) -> BigUint {
    BigUint::from(v)
}

fn ordinal_from_seed(seed: u64, depth: u32) -> CnfOrdinal {
    fn go(rng: &mut ChaCha8Rng, depth: u32) -> CnfOrdinal {
        if depth == 0 {
            return CnfOrdinal::nat(rng.gen_range(0..4));
        }
        let terms: Vec<(CnfOrdinal, u64)> = (0..rng.gen_range(0..=3))
            .map(|_| (go(rng, depth - 1), rng.gen_range(1..=3u64)))
            .collect();
        // from_terms normalises, so unsorted exponents are fine
        CnfOrdinal::from_terms(terms)
    }
    go(&mut ChaCha8Rng::seed_from_u64(seed), depth)
}

fn ordinal() -> impl Strategy<Value = CnfOrdinal> {
    (any::<u64>(), 0u32..=3).prop_map(|(seed, depth)| ordinal_from_seed(seed, depth))
}

fn index() -> impl Strategy<Value = ProgramIndex> {
    prop::collection::vec(any::<u8>(), 0..24)
        .prop_map(|bytes| ProgramIndex::new(BigUint::from_bytes_le(&bytes)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn budgets_are_monotone(e in index(), x in 0u64..20, b in 0u64..300, extra in 0u64..300) {
        if let Evaluation::Halted { output, steps } = evaluate_index(&e, &[n(x)], b) {
            prop_assert!(steps <= b);
            prop_assert_eq!(
                evaluate_index(&e, &[n(x)], b + extra),
                Evaluation::Halted { output, steps }
            );
        }
    }

    #[test]
    fn traces_round_trip(e in index(), x in 0u64..8) {
        let budget = 40;
        let code = match min_trace_code(&e, &[n(x)], budget) {
            Ok(Some(code)) => code,
            // diverging runs and codes over the guard say nothing here
            _ => return Ok(()),
        };
        prop_assert!(t_predicate(&e, &[n(x)], &code));
        let output = evaluate_index(&e, &[n(x)], budget).output().cloned();
        prop_assert_eq!(Some(u_extract(&code).unwrap()), output);
        let trace = decode_trace(&code).unwrap();
        prop_assert_eq!(encode_trace(&trace).unwrap(), code);
    }

    #[test]
    fn smn_agrees_with_the_original(e in index(), a in 0u64..50, x in 0u64..50) {
        let direct = evaluate_index(&e, &[n(a), n(x)], 300);
        if let Some(out) = direct.output() {
            let specialised = smn(&e, &[n(a)]);
            let via = evaluate_index(&specialised, &[n(x)], 300 + 10_000);
            prop_assert_eq!(via.output(), Some(out));
        }
    }

    #[test]
    fn cnf_addition_is_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn cnf_multiplication_is_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn cnf_left_distributivity(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn small_summands_are_absorbed(a in ordinal(), b in ordinal()) {
        if let (Some(ea), Some(eb)) = (a.leading_exponent(), b.leading_exponent()) {
            if ea < eb {
                prop_assert_eq!(a.add(&b), b.clone());
            }
        }
        if !b.is_zero() {
            prop_assert!(a < a.add(&b));
        }
        prop_assert!(b <= a.add(&b));
    }

    #[test]
    fn cnf_text_round_trips(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<CnfOrdinal>().unwrap(), a);
    }

    #[test]
    fn fundamental_sequences_increase(a in ordinal(), k in 0u64..6) {
        if a.is_limit() {
            let lo = a.fundamental_sequence(k).unwrap();
            let hi = a.fundamental_sequence(k + 1).unwrap();
            prop_assert!(lo < hi && hi < a);
        } else {
            prop_assert!(a.fundamental_sequence(k).is_err());
        }
    }

    #[test]
    fn dnr_trees_are_prefix_closed(bits in prop::collection::vec(0u64..2, 0..40), budget in 0u64..200) {
        let v = dnr2_predicate(budget);
        let s = KString::new(bits, 2).unwrap();
        if v.accepts(&s) {
            for len in 0..s.len() {
                prop_assert!(v.accepts(&s.prefix(len)));
            }
        }
    }

    #[test]
    fn level_sets_match_brute_force(forbidden in prop::collection::vec(prop::collection::vec(0u64..3, 1..4), 0..5), depth in 0u64..6) {
        let v = TreePredicate::prefix_closure(3, "avoid", move |s: &KString| {
            !forbidden.iter().any(|f| s.values().ends_with(f))
        });
        prop_assert_eq!(level_set(&v, depth).unwrap().members, brute_force_level_set(&v, depth).unwrap());
    }

    #[test]
    fn wf_check_is_sound(edges in prop::collection::btree_set((0u64..8, 0u64..8), 0..16)) {
        let rel = FiniteRelation::from_edges(edges);
        let report = wf_check(&rel);
        prop_assert!(report.witness_replays(&rel));
        // a finite relation is well-founded iff repeatedly deleting nodes
        // without successors empties it
        let mut live = rel.domain.clone();
        loop {
            let sinks: Vec<u64> = live
                .iter()
                .copied()
                .filter(|&y| !live.iter().any(|&x| rel.is_edge(y, x)))
                .collect();
            if sinks.is_empty() {
                break;
            }
            for s in sinks {
                live.remove(&s);
            }
        }
        prop_assert_eq!(report.is_well_founded(), live.is_empty());
    }

    #[test]
    fn fgh_is_increasing_in_its_argument(a in 0u64..3, x in 0u64..4) {
        let a = CnfOrdinal::nat(a);
        let f = |x: u64| fgh_eval(&a, &n(x), 1_000_000).unwrap();
        prop_assert!(f(x) < f(x + 1));
        prop_assert!(n(x) < f(x));
    }

    #[test]
    fn majorization_witnesses_hold(f in prop::collection::vec(0u64..20, 1..12), g in prop::collection::vec(0u64..20, 1..12)) {
        let h = f.len().min(g.len()) as u64 - 1;
        let (fs, gs) = (
            FnSource::Table(f.iter().map(|&v| n(v)).collect()),
            FnSource::Table(g.iter().map(|&v| n(v)).collect()),
        );
        match majorizes(&fs, &gs, h, 0).unwrap() {
            Majorization::Witness(y) => {
                prop_assert!(y < h);
                prop_assert!((y + 1..=h).all(|x| g[x as usize] < f[x as usize]));
                prop_assert!(y == 0 || g[y as usize] >= f[y as usize]);
                // majorization in both directions is impossible on a shared window
                prop_assert!(!matches!(majorizes(&gs, &fs, h, 0).unwrap(), Majorization::Witness(z) if z < h));
            }
            Majorization::NoWitnessUpTo(top) => {
                prop_assert_eq!(top, h);
                prop_assert!(h == 0 || g[h as usize] >= f[h as usize]);
            }
        }
    }

    #[test]
    fn prime_factor_counts_multiply(a in 1u64..2000, b in 1u64..2000) {
        let omega = |v: u64| prime_factor_count(&n(v), 5000).unwrap();
        prop_assert_eq!(omega(a * b), omega(a) + omega(b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn jump_stages_are_monotone(stage in 1u64..40, extra in 0u64..40) {
        let lo = iterate_jump(1, stage, 60).unwrap();
        let hi = iterate_jump(1, stage + extra, 60).unwrap();
        prop_assert!(lo.members.is_subset(&hi.members));
    }

    #[test]
    fn etr_matches_the_oracle_on_chains(len in 1u64..6) {
        // successor step over the chain 0 < 1 < ... < len-1: value at k is k
        // applied to the predecessor values
        let rel = FiniteRelation::new(0..len, (1..len).flat_map(|y| (0..y).map(move |x| (y, x)))).unwrap();
        let step = machine::Asm::new().load(0, 3u32).finish(0);
        let step = machine::encode_program(&step);
        let e = etr_define(&rel, &step, 100_000).unwrap();
        for k in 0..len {
            let out = evaluate_index(&e, &[n(k)], 1_000_000);
            prop_assert_eq!(out.output(), Some(&n(3)));
        }
    }
}
