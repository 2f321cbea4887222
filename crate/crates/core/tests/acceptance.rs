//! Acceptance criteria, one report line each. Runs as a plain binary so the
//! lines are always printed; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use asp_core::corpus::{generate_synthetic, SyntheticSpec};
use asp_core::engine::{compute_asp, compute_asp_dag_oracle, compute_asp_dense_oracle, AspConfig};
use asp_core::graph::{
    build_graph, build_graph_from_links, citation_counts, filter_window, CitationGraph,
    PreprocessPolicy,
};
use asp_core::corpus::{ArticleRecord, RawEdge};
use asp_core::metrics::{decile_correlations, tail_index_above};
use asp_core::tuner::{
    deviation_standard_error, subject_deviation, sweep_graph, Aggregator, SweepGrid, SweepOptions,
};
use common::{article, build, dag_links, max_abs_diff, random_cyclic, random_dag, sorted_articles};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Nodes without incoming edges sit exactly at 1 - d.
fn floor(g: &CitationGraph, d: f64) -> Result<usize, String> {
    let r = compute_asp(g, &AspConfig::new(d)).map_err(|e| e.to_string())?;
    let r32 = compute_asp(g, &AspConfig::new(d as f32)).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for v in (0..g.n()).filter(|&v| g.citers(v).is_empty()) {
        if r.values[v] != 1.0 - d || r32.values[v] != 1.0 - d as f32 {
            return Err(format!("node {v}: {} (d = {d})", r.values[v]));
        }
        checked += 1;
    }
    Ok(checked)
}

fn uncited_floor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    let mut graphs = 0;
    for trial in 0..60 {
        let n = rng.gen_range(1..3_000);
        let g = if trial % 2 == 0 {
            random_cyclic(&mut rng, n, 3.0)
        } else {
            random_dag(&mut rng, n, 4.0)
        };
        for w in [1, 3, 5, 10] {
            let gw = filter_window(&g, w).map_err(|e| e.to_string())?;
            let d = [0.1, 0.25, 0.5, 0.75, 0.85, 0.99][rng.gen_range(0..6)];
            checked += floor(&gw, d)?;
            graphs += 1;
        }
    }
    let corpus = synthetic(20_000, 1.0, 102);
    for d in [0.3, 0.5, 0.8] {
        checked += floor(&filter_window(&corpus, 5).unwrap(), d)?;
        graphs += 1;
    }
    check(checked > 0, format!("{checked} uncited nodes over {graphs} windowed graphs, all exactly 1-d"))
}

fn dense_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let mut worst: f64 = 0.0;
    let mut cyclic = 0;
    let start = Instant::now();
    for _ in 0..50 {
        let n = rng.gen_range(1..=500);
        let degree = rng.gen_range(0.5..6.0);
        let g = random_cyclic(&mut rng, n, degree);
        if matches!(
            asp_core::graph::topological_order(&g),
            asp_core::graph::TopoOrder::Cyclic(_)
        ) {
            cyclic += 1;
        }
        let d = rng.gen_range(0.1..0.9);
        let config = AspConfig::new(d).with_epsilon(1e-12).with_max_iterations(100_000);
        let fast = compute_asp(&g, &config).map_err(|e| e.to_string())?;
        let slow = compute_asp_dense_oracle(&g, &config).map_err(|e| e.to_string())?;
        worst = worst.max(max_abs_diff(&fast.values, &slow));
    }
    let elapsed = secs(start.elapsed());
    check(
        worst <= 1e-8 && elapsed < 10.0,
        format!("max diff {worst:.2e} (limit 1e-8), {cyclic}/50 cyclic, {elapsed:.2} s (limit 10 s)"),
    )
}

fn dag_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let graphs: Vec<CitationGraph> = (0..20).map(|_| random_dag(&mut rng, 10_000, 8.0)).collect();
    let mut worst: f64 = 0.0;
    let start = Instant::now();
    for g in &graphs {
        let fast = compute_asp(g, &AspConfig::new(0.5).with_epsilon(1e-6).with_max_iterations(1_000))
            .map_err(|e| e.to_string())?;
        let exact = compute_asp_dag_oracle(g, 0.5).map_err(|e| e.to_string())?;
        worst = worst.max(max_abs_diff(&fast.values, &exact));
    }
    let elapsed = secs(start.elapsed());
    check(
        worst <= 1e-4 && elapsed < 5.0,
        format!("max diff {worst:.2e} (limit 1e-4), {elapsed:.2} s (limit 5 s)"),
    )
}

fn synthetic(n: usize, boost: f64, seed: u64) -> CitationGraph {
    let corpus = generate_synthetic(&SyntheticSpec {
        n_articles: n,
        hot_subject_boost: boost,
        n_subjects: 4,
        seed,
        ..SyntheticSpec::default()
    })
    .unwrap();
    build_graph_from_links(&corpus.articles, &corpus.links, &PreprocessPolicy::default())
        .unwrap()
        .0
}

fn convergence_budget(big: &CitationGraph) -> Outcome {
    let start = Instant::now();
    let r = compute_asp(big, &AspConfig::<f64>::default()).map_err(|e| e.to_string())?;
    let elapsed = secs(start.elapsed());
    let per_iter = elapsed / r.iterations.max(1) as f64;
    check(
        r.converged && r.iterations <= 20 && per_iter <= 2.0,
        format!(
            "{} nodes, {} edges: {} iterations (limit 20), {per_iter:.3} s/iteration (limit 2 s), {} threads",
            big.n(),
            big.n_edges(),
            r.iterations,
            rayon::current_num_threads()
        ),
    )
}

fn determinism(big: &CitationGraph) -> Outcome {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| compute_asp(big, &AspConfig::<f64>::default()).unwrap())
    };
    let base = run(1);
    let mut differing = Vec::new();
    for threads in [2, 4, 8] {
        let other = run(threads);
        let same = other.values.len() == base.values.len()
            && other
                .values
                .iter()
                .zip(&base.values)
                .all(|(a, b)| a.to_bits() == b.to_bits());
        if !same {
            differing.push(threads);
        }
    }
    check(
        differing.is_empty(),
        format!("threads 1/2/4/8 on {} nodes, differing: {differing:?}", big.n()),
    )
}

fn tail_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    let mut parts = Vec::new();
    let mut ok = true;
    for (alpha, tol) in [(1.88, 0.10), (3.0, 0.15)] {
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / alpha))
            .collect();
        let est = tail_index_above(&xs, 1.0).map_err(|e| e.to_string())?;
        ok &= (est.alpha - alpha).abs() <= tol;
        parts.push(format!("alpha {alpha}: {:.4} (tol {tol})", est.alpha));
    }
    check(ok, parts.join(", "))
}

/// Two-pass Pearson, written independently of the library.
fn naive_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn decile_shape() -> Outcome {
    let corpus = generate_synthetic(&SyntheticSpec {
        n_articles: 100_000,
        seed: 701,
        ..SyntheticSpec::default()
    })
    .unwrap();
    let (g, _) =
        build_graph_from_links(&corpus.articles, &corpus.links, &PreprocessPolicy::default())
            .unwrap();
    let gw = filter_window(&g, 5).unwrap();
    let asp = compute_asp(&gw, &AspConfig::default()).unwrap().values;
    let ncit = citation_counts(&g, 5);
    let groups = vec!["all"; g.n()];
    let rows = decile_correlations(&asp, &ncit, &groups).map_err(|e| e.to_string())?;

    // Naive oracle: filter, sort by (-ncit, index), cut, correlate.
    let mut cited: Vec<usize> = (0..g.n()).filter(|&i| ncit[i] > 0).collect();
    cited.sort_by_key(|&i| (std::cmp::Reverse(ncit[i]), i));
    let mut worst: f64 = 0.0;
    let mut start = 0;
    for k in 0..10 {
        let size = cited.len() / 10 + usize::from(k < cited.len() % 10);
        let bin = &cited[start..start + size];
        start += size;
        let x: Vec<f64> = bin.iter().map(|&i| asp[i]).collect();
        let y: Vec<f64> = bin.iter().map(|&i| ncit[i] as f64).collect();
        let row = &rows[k];
        match (row.r, naive_pearson(&x, &y)) {
            (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
            (None, None) => {}
            (a, b) => return Err(format!("decile {}: {a:?} vs oracle {b:?}", k + 1)),
        }
        if row.n != size {
            return Err(format!("decile {} size {} vs {size}", k + 1, row.n));
        }
    }
    let r: Vec<f64> = rows.iter().map(|r| r.r.unwrap_or(f64::NEG_INFINITY)).collect();
    let rest = r[1..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    check(
        r[0] > rest && worst <= 1e-12,
        format!("decile-1 r {:.3} vs max other {rest:.3}, oracle diff {worst:.1e}", r[0]),
    )
}

fn brute_deviation(asp: &[f64], g: &CitationGraph, year: i32) -> f64 {
    let members: Vec<usize> = (0..g.n()).filter(|&v| g.year(v) == year).collect();
    if members.is_empty() {
        return 0.0;
    }
    let grand = members.iter().map(|&v| asp[v]).sum::<f64>() / members.len() as f64;
    let mut total = 0.0;
    for s in 0..g.subject_names().len() as u32 {
        let xs: Vec<f64> = members
            .iter()
            .filter(|&&v| g.subjects(v).contains(&s))
            .map(|&v| asp[v])
            .collect();
        if !xs.is_empty() {
            total += (xs.iter().sum::<f64>() / xs.len() as f64 - grand).abs();
        }
    }
    total
}

fn sweep_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(801);
    let names = ["a", "b", "c", "d", "e", "f"];
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..400);
        let articles: Vec<_> = (0..n)
            .map(|k| {
                let mut s: Vec<&str> = names.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
                if s.is_empty() {
                    s.push(names[0]);
                }
                article(common::node_id(k), rng.gen_range(1990..1996), &s)
            })
            .collect();
        let links = dag_links(&mut rng, n, 3.0);
        let links: Vec<(u32, u32)> = links
            .into_iter()
            .filter(|&(c, t)| articles[t as usize].year <= articles[c as usize].year)
            .collect();
        let g = build(&articles, &links);
        let asp = compute_asp(&g, &AspConfig::new(rng.gen_range(0.1..0.9)))
            .unwrap()
            .values;
        for year in 1990..1996 {
            let fast = subject_deviation(&asp, &g, year, Aggregator::L1).unwrap().value;
            worst = worst.max((fast - brute_deviation(&asp, &g, year)).abs());
        }
    }

    let g = synthetic(30_000, 1.0, 802);
    let grid = SweepGrid {
        d_values: vec![0.3, 0.5, 0.7],
        w_values: vec![3, 5, 8],
        years: (1990, 2015),
    };
    let sweep = sweep_graph(&g, &grid, &SweepOptions::default()).unwrap();
    let mut worst_ratio: f64 = 0.0;
    let mut max_se: f64 = 0.0;
    let mut totals = Vec::new();
    for cell in &sweep.cells {
        let gw = filter_window(&g, cell.w).unwrap();
        let asp = compute_asp(&gw, &AspConfig::new(cell.d)).unwrap().values;
        let se: f64 = (1990..=2015)
            .map(|y| deviation_standard_error(&asp, &gw, y))
            .sum();
        let total = cell.total.ok_or("cell did not converge")?;
        worst_ratio = worst_ratio.max(total / se);
        max_se = max_se.max(se);
        totals.push(total);
    }
    let spread = totals.iter().cloned().fold(f64::MIN, f64::max)
        - totals.iter().cloned().fold(f64::MAX, f64::min);
    check(
        worst <= 1e-12 && worst_ratio <= 3.0 && spread <= 3.0 * max_se,
        format!(
            "brute-force diff {worst:.1e} (limit 1e-12); exchangeable: max deviation {worst_ratio:.2} SE, spread {:.2} SE (limit 3)",
            spread / max_se
        ),
    )
}

fn messy_corpus(rng: &mut ChaCha8Rng) -> (Vec<ArticleRecord>, Vec<RawEdge>) {
    let n = rng.gen_range(2..500);
    let articles: Vec<ArticleRecord> = (0..n)
        .map(|k| article(format!("x{k}"), rng.gen_range(1978..2023), &["s"]))
        .collect();
    let edges = (0..rng.gen_range(0..6 * n))
        .map(|_| {
            let c = rng.gen_range(0..n);
            let t = if rng.gen_bool(0.05) { c } else { rng.gen_range(0..n) };
            RawEdge::new(format!("x{c}"), format!("x{t}"))
        })
        .collect();
    (articles, edges)
}

fn preprocessing_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    let mut edges_seen = 0;
    let mut dropped_future = 0;
    for _ in 0..100 {
        let (articles, edges) = messy_corpus(&mut rng);
        let (g, report) =
            build_graph(&articles, &edges, &PreprocessPolicy::default()).map_err(|e| e.to_string())?;
        dropped_future += report.edges_dropped_future;
        for (c, t) in g.edges() {
            edges_seen += 1;
            if c == t {
                return Err(format!("self-loop at node {c}"));
            }
            if g.year(t as usize) > g.year(c as usize) {
                return Err(format!("future reference {c} -> {t}"));
            }
        }
        let mut prev: Vec<(u32, u32)> = Vec::new();
        for w in 1..=12 {
            let gw = filter_window(&g, w).unwrap();
            let twice = filter_window(&gw, w).unwrap();
            let cur: Vec<(u32, u32)> = gw.edges().collect();
            if twice.edges().collect::<Vec<_>>() != cur {
                return Err(format!("window {w} not idempotent"));
            }
            if !prev.iter().all(|e| cur.binary_search(e).is_ok()) {
                return Err(format!("window {w} lost edges of window {}", w - 1));
            }
            prev = cur;
        }
    }
    check(
        dropped_future > 0,
        format!("{edges_seen} edges scanned, 0 future refs, 0 self-loops ({dropped_future} future refs removed); windows idempotent and monotone"),
    )
}

fn monotone_citation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut pairs = 0;
    let mut min_gain = f64::INFINITY;
    while pairs < 1_000 {
        let n = rng.gen_range(2..200);
        let articles = sorted_articles(&mut rng, n, (1981, 2020));
        let degree = rng.gen_range(0.5..5.0);
        let mut links = dag_links(&mut rng, n, degree);
        links.sort_unstable();
        links.dedup();
        let c = rng.gen_range(1..n) as u32;
        let t = rng.gen_range(0..c);
        if links.binary_search(&(c, t)).is_ok() {
            continue;
        }
        let before = compute_asp_dag_oracle(&build(&articles, &links), 0.5).unwrap();
        links.push((c, t));
        let after = compute_asp_dag_oracle(&build(&articles, &links), 0.5).unwrap();
        let gain = after[t as usize] - before[t as usize];
        if gain <= 0.0 {
            return Err(format!("pair {pairs}: cited node changed by {gain:e}"));
        }
        if after[c as usize] != before[c as usize] {
            return Err(format!("pair {pairs}: citing node changed"));
        }
        min_gain = min_gain.min(gain);
        pairs += 1;
    }
    check(true, format!("{pairs} pairs, smallest gain {min_gain:.3e}, citing node unchanged"))
}

fn main() {
    let mut failures = 0;
    let mut report = |k: usize, name: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {k:>2} {tag} {name}: {detail}");
    };

    report(1, "uncited floor", uncited_floor());
    report(2, "dense oracle", dense_oracle());
    report(3, "dag oracle", dag_oracle());

    let start = Instant::now();
    let big = synthetic(1_000_000, 1.0, 401);
    eprintln!("built 10^6 corpus in {:.1} s", secs(start.elapsed()));
    report(4, "convergence budget", convergence_budget(&big));
    report(5, "determinism", determinism(&big));
    drop(big);

    report(6, "tail index", tail_recovery());
    report(7, "decile shape", decile_shape());
    report(8, "sweep correctness", sweep_correctness());
    report(9, "preprocessing invariants", preprocessing_invariants());
    report(10, "monotone citation", monotone_citation());

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
