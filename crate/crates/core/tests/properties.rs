use proptest::prelude::*;

use scales_core::combin::{binomial, choose, combinations};
use scales_core::offline_adjacency::{adjacency_plan_size, build_adjacency_plan};
use scales_core::offline_recursive::{
    build_recursive_plan, offline_lower_bound, order_superset, recursive_plan_size, KnowledgeBase,
};
use scales_core::online::{online_singleton_bound, online_sort};
use scales_core::{
    equivalent_up_to_ambiguity, Answers, ElementId, HiddenOrder, Oracle, Query, ScaleSpec,
};

fn order_strategy(n: usize) -> impl Strategy<Value = HiddenOrder> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|r| HiddenOrder::from_ranks(r).unwrap())
}

fn singleton() -> impl Strategy<Value = ScaleSpec> {
    (2usize..=6)
        .prop_flat_map(|k| (Just(k), 1..=k))
        .prop_map(|(k, t)| ScaleSpec::singleton(k, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spec_text_round_trips(k in 2usize..9, picks in proptest::collection::btree_set(1usize..9, 1..4)) {
        let outputs: Vec<usize> = picks.into_iter().filter(|&t| t <= k).collect();
        prop_assume!(!outputs.is_empty());
        let sp = ScaleSpec::new(k, outputs).unwrap();
        let back: ScaleSpec = sp.to_string().parse().unwrap();
        prop_assert_eq!(back, sp);
    }

    #[test]
    fn outcome_reads_ranks(sp in singleton(), seed in any::<u64>()) {
        let n = sp.k() + 3;
        let order = HiddenOrder::from_ranks(shuffle(n, seed)).unwrap();
        let q: Vec<ElementId> = (0..sp.k()).map(ElementId).collect();
        let out = order.outcome(&sp, &q);
        let mut sorted = q.clone();
        sorted.sort_by_key(|&e| order.rank(e));
        prop_assert_eq!(out.single(), Some(sorted[sp.t1() - 1]));
        // reading from the other end gives the mirrored scale
        prop_assert_eq!(order.reversed().outcome(&sp.mirrored(), &q), out);
    }

    #[test]
    fn binomials_agree(n in 0u64..60, r in 0u64..60) {
        let b = binomial(n, r).unwrap();
        prop_assert_eq!(b, choose(n as usize, r as usize) as u128);
        if n > 0 && r > 0 {
            prop_assert_eq!(b, binomial(n - 1, r - 1).unwrap() + binomial(n - 1, r).unwrap());
        }
        if n <= 16 {
            let items: Vec<u64> = (0..n).collect();
            prop_assert_eq!(combinations(&items, r as usize).count() as u128, b);
        }
    }

    #[test]
    fn online_singleton_sorts_within_bound((sp, order) in singleton().prop_flat_map(|sp| {
        let k = sp.k();
        (Just(sp), (k + 1..=k + 14).prop_flat_map(order_strategy))
    })) {
        let n = order.n();
        let mut o = Oracle::new(sp.clone(), order.clone());
        let res = online_sort(&mut o).unwrap();
        prop_assert!(equivalent_up_to_ambiguity(&res, &order, &sp).unwrap());
        prop_assert_eq!(res.queries_used, o.query_count());
        prop_assert!(res.queries_used <= online_singleton_bound(n, &sp));
        for e in o.transcript().iter() {
            prop_assert_eq!(res.predict(&sp, e.query.elements()), Some(e.outcome.returned().to_vec()));
        }
    }

    #[test]
    fn online_multi_sorts(
        s in prop::sample::select(vec!["5:2,4", "6:2,4", "6:2,5", "7:2,6", "6:3,4,5"]),
        extra in 1usize..15,
        seed in any::<u64>(),
    ) {
        let sp: ScaleSpec = s.parse().unwrap();
        let n = 2 * sp.k() + extra;
        let order = HiddenOrder::from_ranks(shuffle(n, seed)).unwrap();
        let mut o = Oracle::new(sp.clone(), order.clone());
        let res = online_sort(&mut o).unwrap();
        prop_assert!(equivalent_up_to_ambiguity(&res, &order, &sp).unwrap());
    }

    #[test]
    fn plan_sizes_respect_lower_bound(sp in singleton(), extra in 1usize..6) {
        let k = sp.k();
        let n = 2 * k + extra;
        let lb = offline_lower_bound(n, k, sp.t1()).unwrap();
        let adj = build_adjacency_plan(n, &sp).unwrap();
        prop_assert_eq!(adj.len(), adjacency_plan_size(n, &sp));
        prop_assert!(adj.len() as u128 >= lb);
        let rec = build_recursive_plan(n, &sp).unwrap();
        prop_assert_eq!(rec.len(), recursive_plan_size(n, k, sp.t1()));
        prop_assert!(rec.distinct_len() as u128 >= lb);
    }

    #[test]
    fn deduction_matches_truth(
        (k, t) in prop::sample::select(vec![(3, 1), (3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (5, 4), (6, 3)]),
        extra in 1usize..4,
        seed in any::<u64>(),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 10),
    ) {
        let sp = ScaleSpec::singleton(k, t).unwrap();
        let n = 2 * k + extra;
        let order = HiddenOrder::from_ranks(shuffle(n, seed)).unwrap();
        let plan = build_recursive_plan(n, &sp).unwrap();
        let answers: Answers = plan.queries().map(|q| (q.clone(), order.outcome(&sp, q.elements()))).collect();
        let sup = order_superset(&plan, &answers).unwrap();
        let mut kb = KnowledgeBase::from_plan(&plan, &answers, &sup).unwrap();
        for pick in picks {
            let mut pool: Vec<ElementId> = (0..n).map(ElementId).collect();
            let mut q = Vec::with_capacity(k);
            let mut i = pick.index(usize::MAX);
            for _ in 0..k {
                q.push(pool.remove(i % pool.len()));
                i /= 3;
                i = i.wrapping_add(7);
            }
            let q = Query::new(q, k).unwrap();
            prop_assert_eq!(kb.deduce(&q).unwrap(), order.outcome(&sp, q.elements()));
        }
    }
}

fn shuffle(n: usize, seed: u64) -> Vec<usize> {
    let mut ranks: Vec<usize> = (1..=n).collect();
    let mut x = seed;
    for i in (1..n).rev() {
        x = x
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ranks.swap(i, (x >> 33) as usize % (i + 1));
    }
    ranks
}
