//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::panic;
use std::process::Command;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scales::core::combin::combinations;
use scales::core::offline_adjacency::{
    adjacency_plan_size, build_adjacency_plan, eliminate_nonadjacent, solve_adjacency,
};
use scales::core::offline_recursive::{
    build_recursive_plan, offline_lower_bound, order_superset, recursive_plan_size, KnowledgeBase,
};
use scales::core::online::{multi_sort_with_stages, singleton_sort};
use scales::core::{
    equivalent_up_to_ambiguity, Answers, ElementId, HiddenOrder, Oracle, Query, ScaleSpec,
    Transcript,
};
use scales::rng::seeded_order;
use scales::{
    bench_sweep, consistent_permutations, run_experiment, write_csv, Algorithm, AmbiguityClass,
    OrderSource,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(s: &str) -> ScaleSpec {
    s.parse().unwrap()
}

/// All orders for `n <= exhaustive_to`, otherwise `samples` seeded ones.
fn orders(n: usize, exhaustive_to: usize, samples: u64) -> Vec<HiddenOrder> {
    if n <= exhaustive_to {
        (1..=n)
            .permutations(n)
            .map(|r| HiddenOrder::from_ranks(r).unwrap())
            .collect()
    } else {
        (0..samples).map(|s| seeded_order(n, s)).collect()
    }
}

fn answer_all<'a>(
    sp: &ScaleSpec,
    order: &HiddenOrder,
    qs: impl Iterator<Item = &'a Query>,
) -> Answers {
    qs.map(|q| (q.clone(), order.outcome(sp, q.elements())))
        .collect()
}

fn criterion_1() -> Outcome {
    let mut trials = 0;
    for k in 2..=5usize {
        for t in 1..=k {
            let sp = ScaleSpec::singleton(k, t).unwrap();
            for n in k + 1..=12 {
                for order in orders(n, 7, 50) {
                    let mut o = Oracle::new(sp.clone(), order.clone());
                    let res = singleton_sort(&mut o).map_err(|e| format!("{sp} n={n}: {e}"))?;
                    ensure(
                        equivalent_up_to_ambiguity(&res, &order, &sp).unwrap_or(false),
                        || format!("{sp} n={n} ranks {:?}", order.ranks()),
                    )?;
                    trials += 1;
                }
            }
        }
    }
    Ok(format!("{trials} trials correct"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for k in 3..=5usize {
        for t in 1..=k.div_ceil(2) {
            let sp = ScaleSpec::singleton(k, t).unwrap();
            for n in [100usize, 1_000, 10_000] {
                let np = n - k + 1;
                let kp = k - t + 1;
                let mut d = 1;
                while kp.pow(d as u32) < np {
                    d += 1;
                }
                let bound = n + 2 * d * np;
                for seed in 0..3 {
                    let order = seeded_order(n, seed);
                    let mut o = Oracle::new(sp.clone(), order.clone());
                    let res = singleton_sort(&mut o).map_err(|e| format!("{sp} n={n}: {e}"))?;
                    ensure(res.queries_used == o.query_count(), || {
                        format!("{sp} n={n}: miscounted")
                    })?;
                    ensure(res.queries_used <= bound, || {
                        format!("{sp} n={n} seed={seed}: {} > {bound}", res.queries_used)
                    })?;
                    ensure(
                        equivalent_up_to_ambiguity(&res, &order, &sp).unwrap_or(false),
                        || format!("{sp} n={n} seed={seed}: wrong order"),
                    )?;
                    worst = worst.max(res.queries_used as f64 / bound as f64);
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} runs, worst queries/bound {worst:.3}"))
}

fn criterion_3() -> Outcome {
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for s in ["5:2,4", "6:2,4", "6:2,5", "7:2,6", "5:1,2"] {
        let sp = spec(s);
        let (k, outs) = (sp.k(), sp.s());
        let (mut wrong, mut stage_bad, mut errors, mut total) = (0, 0, 0, 0);
        for n in 2 * k + 1..=40 {
            for seed in 0..25 {
                total += 1;
                let order = seeded_order(n, seed);
                let mut o = Oracle::new(sp.clone(), order.clone());
                let (res, st) = match multi_sort_with_stages(&mut o) {
                    Ok(x) => x,
                    Err(_) => {
                        errors += 1;
                        continue;
                    }
                };
                if !equivalent_up_to_ambiguity(&res, &order, &sp).unwrap_or(false) {
                    wrong += 1;
                }
                let elim_cap = (n - (k - outs)).div_ceil(outs);
                if st.initial_elimination > elim_cap || st.partition != sp.s_size() + sp.l_size() {
                    stage_bad += 1;
                }
            }
        }
        summary.push(format!("{s}: {wrong}/{total} wrong"));
        if wrong + stage_bad + errors > 0 {
            problems.push(format!("{s}: {wrong} wrong, {stage_bad} stage-count violations, {errors} errors of {total}"));
        }
    }
    if problems.is_empty() {
        Ok(summary.join(", "))
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_4() -> Outcome {
    let mut trials = 0;
    for k in 3..=4usize {
        for t in 1..=2usize {
            let sp = ScaleSpec::singleton(k, t).unwrap();
            for n in k + 5..=13 {
                let plan = build_adjacency_plan(n, &sp).map_err(|e| format!("{sp} n={n}: {e}"))?;
                let r = t - 1;
                let expected = if r == 0 {
                    combinations(&(0..n).collect::<Vec<_>>(), k).count()
                } else {
                    3 * combinations(&(0..n - r).collect::<Vec<_>>(), k - r).count()
                };
                ensure(plan.len() == expected, || {
                    format!("{sp} n={n}: plan {} != {expected}", plan.len())
                })?;
                for order in orders(n, 7, 10) {
                    let answers = answer_all(&sp, &order, plan.queries());
                    let adj = eliminate_nonadjacent(&plan, &answers)
                        .map_err(|e| format!("{sp} n={n}: {e}"))?;
                    let asc = order.ascending();
                    let middle = &asc[sp.s_size()..n - sp.l_size()];
                    for w in middle.windows(2) {
                        ensure(adj.has_edge(w[0], w[1]), || {
                            format!("{sp} n={n}: true edge deleted")
                        })?;
                    }
                    let path = adj
                        .path()
                        .map_err(|e| format!("{sp} n={n} ranks {:?}: {e}", order.ranks()))?;
                    let mut rev = path.clone();
                    rev.reverse();
                    ensure(path == middle || rev == middle, || {
                        format!("{sp} n={n}: path is not the true order")
                    })?;
                    let transcript: Transcript = plan
                        .queries()
                        .map(|q| scales::core::TranscriptEntry {
                            query: q.clone(),
                            outcome: answers[q].clone(),
                        })
                        .collect();
                    let res = solve_adjacency(&plan, &transcript)
                        .map_err(|e| format!("{sp} n={n}: {e}"))?;
                    ensure(
                        equivalent_up_to_ambiguity(&res, &order, &sp).unwrap_or(false),
                        || format!("{sp} n={n}: wrong result"),
                    )?;
                    trials += 1;
                }
            }
        }
    }
    Ok(format!("{trials} trials, no true edge lost"))
}

fn recursive_configs() -> Vec<(ScaleSpec, usize)> {
    let mut v = Vec::new();
    for k in 3..=5usize {
        for t in 2..=k.div_ceil(2) {
            for n in 2 * k + 1..=10 {
                v.push((ScaleSpec::singleton(k, t).unwrap(), n));
            }
        }
    }
    v
}

fn criterion_5() -> Outcome {
    let mut deduced = 0usize;
    for (sp, n) in recursive_configs() {
        let (k, t) = (sp.k(), sp.t1());
        let plan = build_recursive_plan(n, &sp).map_err(|e| e.to_string())?;
        let m = k + t - 2;
        let formula = combinations(&(0..m).collect::<Vec<_>>(), k).count()
            + combinations(&(0..m).collect::<Vec<_>>(), t - 1).count()
                * combinations(&(0..n - t + 1).collect::<Vec<_>>(), k - t + 1).count();
        ensure(plan.len() == formula, || {
            format!("{sp} n={n}: plan {} != {formula}", plan.len())
        })?;
        let all: Vec<ElementId> = (0..n).map(ElementId).collect();
        for order in orders(n, 7, 30) {
            let answers = answer_all(&sp, &order, plan.queries());
            let sup = order_superset(&plan, &answers).map_err(|e| format!("{sp} n={n}: {e}"))?;
            let mut kb =
                KnowledgeBase::from_plan(&plan, &answers, &sup).map_err(|e| e.to_string())?;
            for q in combinations(&all, k) {
                let q = Query::new(q, k).unwrap();
                let got = kb
                    .deduce(&q)
                    .map_err(|e| format!("{sp} n={n} {q:?}: {e}"))?;
                ensure(got == order.outcome(&sp, q.elements()), || {
                    format!("{sp} n={n} ranks {:?} {q:?}", order.ranks())
                })?;
                deduced += 1;
            }
            // the k+1 answers over any (k+1)-set
            let base = &all[..=k];
            let mut mult: Vec<usize> = base
                .iter()
                .map(|&drop| {
                    let q: Vec<ElementId> = base.iter().copied().filter(|&e| e != drop).collect();
                    order.outcome(&sp, &q).single().unwrap()
                })
                .counts()
                .into_values()
                .collect();
            mult.sort_unstable();
            let mut want = vec![k + 1 - t, t];
            want.sort_unstable();
            ensure(mult == want, || format!("{sp}: multiplicities {mult:?}"))?;
        }
        // S together with the next element as a chain of length t: every probe returns its top.
        let order = HiddenOrder::identity(n);
        let chain: Vec<ElementId> = (0..t).map(ElementId).collect();
        let known = answer_all(
            &sp,
            &order,
            combinations(&all, k)
                .map(|q| Query::new(q, k).unwrap())
                .filter(|q| chain.iter().all(|&c| q.contains(c)))
                .collect::<Vec<_>>()
                .iter(),
        );
        let mut kb = KnowledgeBase::new(&sp, chain.clone(), known).map_err(|e| e.to_string())?;
        let mut q: Vec<ElementId> = chain[..t - 1].to_vec();
        q.extend((t + 1..).take(k - t + 1).map(ElementId));
        let q = Query::new(q, k).unwrap();
        let tally = kb.probe_responses(&q).map_err(|e| e.to_string())?;
        ensure(tally.probes.iter().all(|&(_, r)| r == chain[t - 1]), || {
            format!("{sp}: a probe missed x_r")
        })?;
        ensure(kb.deduce(&q).is_err(), || {
            format!("{sp}: chain of length t still deduced")
        })?;
    }
    Ok(format!("{deduced} deduced answers match"))
}

fn binomial_big(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn criterion_6() -> Outcome {
    ensure(offline_lower_bound(10, 3, 2).unwrap() == 15, || {
        "(10,3,2) is not 15".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let n = rng.random_range(2..=60usize);
        let k = rng.random_range(1..=n);
        let t = rng.random_range(1..=k);
        let tt = t.min(k + 1 - t);
        let num = binomial_big(n, k - tt + 1);
        let den = binomial_big(k, k - tt + 1);
        let want = (num + &den - BigUint::from(1u32)) / den;
        let got = BigUint::from(offline_lower_bound(n, k, t).unwrap());
        ensure(got == want, || format!("({n},{k},{t}): {got} != {want}"))?;
    }
    let mut checked = 0;
    for k in 3..=4usize {
        for t in 1..=2usize {
            let sp = ScaleSpec::singleton(k, t).unwrap();
            for n in k + 5..=13 {
                let lb = offline_lower_bound(n, k, t).unwrap();
                ensure(adjacency_plan_size(n, &sp) as u128 >= lb, || {
                    format!("adjacency {sp} n={n}")
                })?;
                checked += 1;
            }
        }
    }
    for (sp, n) in recursive_configs() {
        let lb = offline_lower_bound(n, sp.k(), sp.t1()).unwrap();
        ensure(
            recursive_plan_size(n, sp.k(), sp.t1()) as u128 >= lb,
            || format!("recursive {sp} n={n}"),
        )?;
        checked += 1;
    }
    Ok(format!(
        "20 random triples match, {checked} plans above the bound"
    ))
}

fn criterion_7() -> Outcome {
    let mut runs = 0;
    for k in 3..=4usize {
        for t in 1..=k {
            let sp = ScaleSpec::singleton(k, t).unwrap();
            let free: usize =
                (1..=sp.s_size()).product::<usize>() * (1..=sp.l_size()).product::<usize>();
            let (class, count) = if sp.is_symmetric() {
                (AmbiguityClass::SlFreeWithReflection, 2 * free)
            } else {
                (AmbiguityClass::SlFree, free)
            };
            for n in k + 1..=8 {
                let mut algos = vec![Algorithm::Online];
                if n >= k + 5 {
                    algos.push(Algorithm::OfflineAdjacency);
                }
                if n > 2 * k {
                    algos.push(Algorithm::OfflineRecursive);
                }
                for a in algos {
                    for seed in 0..3 {
                        let order = seeded_order(n, seed);
                        let mut o = Oracle::new(sp.clone(), order.clone());
                        a.run(&mut o).map_err(|e| format!("{a} {sp} n={n}: {e}"))?;
                        let rep = consistent_permutations(o.transcript(), n, &sp)
                            .map_err(|e| e.to_string())?;
                        ensure(rep.class == class && rep.consistent_count == count, || {
                            format!(
                                "{a} {sp} n={n} seed={seed}: {:?} with {} orders",
                                rep.class, rep.consistent_count
                            )
                        })?;
                        runs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{runs} transcripts pin down exactly the S/L class"))
}

fn criterion_8() -> Outcome {
    let report = || -> Vec<u8> {
        let mut out = Vec::new();
        for (s, n, a) in [
            ("4:2", 30, Algorithm::Online),
            ("6:2,4", 20, Algorithm::Online),
            ("3:2", 10, Algorithm::OfflineAdjacency),
            ("4:2", 12, Algorithm::OfflineRecursive),
        ] {
            let r = run_experiment(&spec(s), n, OrderSource::Seed(42), a, false).unwrap();
            out.extend(serde_json::to_vec(&r).unwrap());
        }
        let rows = bench_sweep(&spec("4:2"), &[20, 40], 3, &Algorithm::ALL, false).unwrap();
        write_csv(&rows, &mut out).unwrap();
        out
    };
    ensure(report() == report(), || "library reports differ".into())?;

    let dir = std::env::temp_dir().join(format!("scales-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let cli = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_scales"))
            .args(args)
            .output()
            .unwrap()
    };
    let json_a = cli(&["sort-online", "--scale", "5:2", "--n", "200", "--seed", "3"]).stdout;
    let json_b = cli(&["sort-online", "--scale", "5:2", "--n", "200", "--seed", "3"]).stdout;
    let csv_of = |name: &str| {
        let p = dir.join(name);
        cli(&[
            "bench",
            "--scale",
            "3:2",
            "--n-list",
            "8,12",
            "--trials",
            "2",
            "--algos",
            "online,adjacency,recursive",
            "--csv",
            p.to_str().unwrap(),
        ]);
        std::fs::read(&p).unwrap()
    };
    let (csv_a, csv_b) = (csv_of("a.csv"), csv_of("b.csv"));
    let _ = std::fs::remove_dir_all(&dir);
    ensure(!json_a.is_empty() && json_a == json_b, || {
        "CLI JSON differs".into()
    })?;
    ensure(csv_a.len() > 60 && csv_a == csv_b, || {
        "CLI CSV differs".into()
    })?;
    Ok("library and CLI output byte-identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("online singleton correctness", criterion_1),
        ("online singleton query bound", criterion_2),
        ("online multi-output", criterion_3),
        ("offline adjacency", criterion_4),
        ("offline recursive deduction", criterion_5),
        ("lower-bound calculator", criterion_6),
        ("information maximality", criterion_7),
        ("determinism", criterion_8),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
