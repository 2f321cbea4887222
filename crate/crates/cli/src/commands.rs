use std::collections::HashMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use asp_core::corpus::{
    articles_table, generate_synthetic, parse_articles, parse_edges, write_delimited_file,
    write_table, ArticleFormat, ArticleRecord, RawEdge, ReportFormat, SyntheticSpec, Table, Value,
};
use asp_core::engine::compute_asp;
use asp_core::graph::{
    build_graph, citation_counts, filter_window, read_snapshot, topological_order, write_snapshot,
    CitationGraph, PreprocessReport, TopoOrder,
};
use asp_core::metrics::{
    cluster_rollup, covariate_association, cross_intensity, decile_correlations,
    discordant_share, journal_aggregate, noncited_ratio, percentile_ranks, summary_stats,
    tail_index_series, ClusterMap, GradeTable, IntensityLevel,
    IntensityOptions, RollupStat,
};
use asp_core::tuner::{select_optimal, sweep_graph, SweepOptions};
use log::info;

use crate::cli::{GraphCheckArgs, SynthArgs};
use crate::config::{Provenance, RunConfig};

/// How a successful command ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NotConverged,
}

struct Reports {
    dir: PathBuf,
    format: ReportFormat,
}

impl Reports {
    fn open(cfg: &RunConfig, prov: &Provenance) -> Result<Self> {
        let dir = cfg.out_dir();
        std::fs::create_dir_all(&dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let banner = cfg.provenance_text(prov)?;
        let path = dir.join("run_config.toml");
        std::fs::write(&path, banner).with_context(|| format!("writing {}", path.display()))?;
        Ok(Reports {
            dir,
            format: cfg.format,
        })
    }

    fn write(&self, name: &str, table: &Table) -> Result<()> {
        let path = self
            .dir
            .join(format!("{name}.{}", self.format.extension()));
        write_table(table, &path, self.format)?;
        info!("wrote {}", path.display());
        Ok(())
    }
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    match path {
        Some(p) => Ok(p),
        None => bail!("missing input: pass --{flag} or set it in the config file"),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("cannot open {}", path.display()))
}

struct Corpus {
    articles: Vec<ArticleRecord>,
    edges: Vec<RawEdge>,
}

fn load_corpus(cfg: &RunConfig) -> Result<Corpus> {
    let articles_path = require(&cfg.paths.articles, "articles")?;
    let edges_path = require(&cfg.paths.edges, "edges")?;
    let articles = parse_articles(open(articles_path)?, &ArticleFormat::default())
        .with_context(|| format!("parsing {}", articles_path.display()))?
        .records;
    let edges = parse_edges(open(edges_path)?)
        .with_context(|| format!("parsing {}", edges_path.display()))?;
    info!("read {} articles, {} edges", articles.len(), edges.len());
    Ok(Corpus { articles, edges })
}

fn load_graph(cfg: &RunConfig) -> Result<(CitationGraph, Option<PreprocessReport>, Corpus)> {
    cfg.policy.validate()?;
    if let Some(path) = &cfg.paths.graph {
        let graph = read_snapshot(open(path)?)
            .with_context(|| format!("reading snapshot {}", path.display()))?;
        let empty = Corpus {
            articles: Vec::new(),
            edges: Vec::new(),
        };
        return Ok((graph, None, empty));
    }
    let corpus = load_corpus(cfg)?;
    let (graph, report) = build_graph(&corpus.articles, &corpus.edges, &cfg.policy)?;
    Ok((graph, Some(report), corpus))
}

pub fn asp(cfg: &RunConfig, prov: &Provenance) -> Result<Outcome> {
    let config = cfg.asp.engine_config();
    config.validate()?;
    let (graph, report, _) = load_graph(cfg)?;
    let reports = Reports::open(cfg, prov)?;
    let solve_graph = if cfg.asp.window_asp_graph {
        filter_window(&graph, cfg.asp.window)?
    } else {
        graph.clone()
    };
    let result = compute_asp(&solve_graph, &config)?;
    let ncit = citation_counts(&graph, cfg.asp.window);

    let mut table = Table::new([
        "article_id",
        "year",
        "asp",
        "n_cit_windowed",
        "iterations_to_converge",
    ]);
    let mut asp_in = Vec::new();
    let mut ncit_in = Vec::new();
    for v in (0..graph.n()).filter(|&v| cfg.policy.in_analysis(graph.year(v))) {
        table.push(vec![
            Value::from(graph.id(v)),
            Value::from(graph.year(v)),
            Value::from(result.values[v]),
            Value::from(ncit[v]),
            Value::from(result.iterations),
        ])?;
        asp_in.push(result.values[v]);
        ncit_in.push(ncit[v] as f64);
    }
    reports.write("asp", &table)?;

    let mut log = Table::new(["iteration", "residual", "converged"]);
    for (k, r) in result.residuals.iter().enumerate() {
        let last = k + 1 == result.residuals.len();
        log.push(vec![
            Value::from(k + 1),
            Value::from(*r),
            Value::from(if last { result.converged } else { false }.to_string()),
        ])?;
    }
    reports.write("convergence", &log)?;

    let mut summary = summary_header();
    if !asp_in.is_empty() {
        push_summary(&mut summary, "asp", "all", &asp_in)?;
        push_summary(&mut summary, "ncit", "all", &ncit_in)?;
    }
    reports.write("asp_summary", &summary)?;

    let mut run = Table::new(["key", "value"]);
    let mut kv = |k: &str, v: Value| run.push(vec![Value::from(k), v]);
    kv("nodes", Value::from(graph.n()))?;
    kv("edges_solved", Value::from(solve_graph.n_edges()))?;
    kv("damping", Value::from(config.damping))?;
    kv("epsilon", Value::from(config.epsilon))?;
    kv("iterations", Value::from(result.iterations))?;
    kv("converged", Value::from(result.converged.to_string()))?;
    kv("mean_asp", Value::from(result.mean()))?;
    if let Some(r) = &report {
        kv("edges_dropped_future", Value::from(r.edges_dropped_future))?;
    }
    reports.write("asp_run", &run)?;

    println!(
        "asp: {} nodes, {} iterations, converged={}, mean asp {:.6}",
        graph.n(),
        result.iterations,
        result.converged,
        result.mean()
    );
    Ok(if result.converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    })
}

pub fn sweep(cfg: &RunConfig, prov: &Provenance) -> Result<Outcome> {
    let grid = cfg.sweep_grid();
    grid.validate()?;
    let (graph, _, _) = load_graph(cfg)?;
    let reports = Reports::open(cfg, prov)?;
    let options = SweepOptions {
        epsilon: cfg.asp.epsilon,
        max_iterations: cfg.asp.max_iterations,
        aggregator: cfg.sweep.aggregator,
        window_asp_graph: cfg.sweep.window_asp_graph,
    };
    let result = sweep_graph(&graph, &grid, &options)?;
    reports.write("sweep", &result.long_table())?;
    reports.write("sweep_heat", &result.heat_table())?;

    let mut optimum = Table::new(["d", "w", "total_deviation", "tie_break"]);
    let outcome = match select_optimal(&result) {
        Ok((d, w)) => {
            let total = result
                .cells
                .iter()
                .find(|c| c.d == d && c.w == w)
                .and_then(|c| c.total);
            optimum.push(vec![
                Value::from(d),
                Value::from(w),
                Value::from(total),
                Value::from(result.tie_break),
            ])?;
            println!("optimum: d={d} w={w}");
            Outcome::Done
        }
        Err(e) => {
            eprintln!("no optimum: {e}");
            Outcome::NotConverged
        }
    };
    reports.write("sweep_optimum", &optimum)?;
    Ok(outcome)
}

fn summary_header() -> Table {
    Table::new(["metric", "group", "n", "min", "q1", "median", "mean", "q3", "max"])
}

fn push_summary(table: &mut Table, metric: &str, group: &str, values: &[f64]) -> Result<()> {
    let s = summary_stats(values)?;
    table.push(vec![
        Value::from(metric),
        Value::from(group),
        Value::from(values.len()),
        Value::from(s.min),
        Value::from(s.q1),
        Value::from(s.median),
        Value::from(s.mean),
        Value::from(s.q3),
        Value::from(s.max),
    ])?;
    Ok(())
}

fn write_intensity(reports: &Reports, prefix: &str, m: &asp_core::IntensityMatrix) -> Result<()> {
    reports.write(&format!("{prefix}_long"), &m.long_table())?;
    reports.write(&format!("{prefix}_matrix"), &m.square_table())
}

pub fn stats(cfg: &RunConfig, prov: &Provenance) -> Result<Outcome> {
    let config = cfg.asp.engine_config();
    config.validate()?;
    let cluster_map = match &cfg.paths.cluster_map {
        Some(p) => Some(
            ClusterMap::parse(open(p)?).with_context(|| format!("parsing {}", p.display()))?,
        ),
        None => None,
    };
    let grades = match &cfg.paths.grade_table {
        Some(p) => Some(
            GradeTable::parse(open(p)?).with_context(|| format!("parsing {}", p.display()))?,
        ),
        None => None,
    };
    cfg.policy.validate()?;
    let corpus = load_corpus(cfg)?;
    let (graph, _) = build_graph(&corpus.articles, &corpus.edges, &cfg.policy)?;
    if let Some(map) = &cluster_map {
        map.check_covers(graph.subject_names().iter().map(String::as_str))?;
    }
    let reports = Reports::open(cfg, prov)?;

    let solve_graph = if cfg.asp.window_asp_graph {
        filter_window(&graph, cfg.asp.window)?
    } else {
        graph.clone()
    };
    let result = compute_asp(&solve_graph, &config)?;
    let ncit_all = citation_counts(&graph, cfg.asp.window);

    let record_of: HashMap<&str, &ArticleRecord> = corpus
        .articles
        .iter()
        .map(|a| (a.article_id.as_str(), a))
        .collect();
    let nodes: Vec<usize> = (0..graph.n())
        .filter(|&v| cfg.policy.in_analysis(graph.year(v)))
        .collect();
    let asp: Vec<f64> = nodes.iter().map(|&v| result.values[v]).collect();
    let ncit: Vec<u32> = nodes.iter().map(|&v| ncit_all[v]).collect();
    let ncit_f: Vec<f64> = ncit.iter().map(|&c| c as f64).collect();
    let years: Vec<i32> = nodes.iter().map(|&v| graph.year(v)).collect();
    let subjects: Vec<Vec<&str>> = nodes
        .iter()
        .map(|&v| {
            graph
                .subjects(v)
                .iter()
                .map(|&s| graph.subject_names()[s as usize].as_str())
                .collect()
        })
        .collect();
    let groups: Vec<String> = subjects
        .iter()
        .map(|subj| {
            let label = match &cluster_map {
                Some(map) => map.assign(subj).ok().flatten(),
                None => subj.first().copied(),
            };
            label.unwrap_or("(none)").to_string()
        })
        .collect();
    let records: Vec<&ArticleRecord> = nodes.iter().map(|&v| record_of[graph.id(v)]).collect();
    let coauthors: Vec<u32> = records.iter().map(|r| r.n_coauthors).collect();
    let references: Vec<u32> = records.iter().map(|r| r.n_references_declared).collect();

    // Summaries, overall and per group.
    let mut summary = summary_header();
    if !nodes.is_empty() {
        let covs = [
            ("asp", asp.clone()),
            ("ncit", ncit_f.clone()),
            ("n_refs", references.iter().map(|&x| x as f64).collect()),
            ("n_coauthors", coauthors.iter().map(|&x| x as f64).collect()),
        ];
        for (metric, values) in &covs {
            push_summary(&mut summary, metric, "all", values)?;
            let mut by_group: std::collections::BTreeMap<&str, Vec<f64>> = Default::default();
            for (g, &x) in groups.iter().zip(values) {
                by_group.entry(g).or_default().push(x);
            }
            for (g, vals) in by_group {
                push_summary(&mut summary, metric, g, &vals)?;
            }
        }
    }
    reports.write("summary", &summary)?;

    let mut tails = Table::new(["metric", "group", "year", "n", "alpha", "x_min", "n_tail"]);
    for (metric, values) in [("asp", &asp), ("ncit", &ncit_f)] {
        for row in tail_index_series(values, &groups, &years, cfg.stats.tail_quantile)? {
            tails.push(vec![
                Value::from(metric),
                Value::from(row.group.as_str()),
                Value::from(row.year),
                Value::from(row.n),
                Value::from(row.estimate.map(|e| e.alpha)),
                Value::from(row.estimate.map(|e| e.x_min)),
                Value::from(row.estimate.map(|e| e.n_tail)),
            ])?;
        }
    }
    reports.write("tail_index", &tails)?;

    let mut deciles = Table::new(["group", "decile", "n", "r"]);
    let everyone = vec!["all".to_string(); asp.len()];
    for labels in [&everyone, &groups] {
        for row in decile_correlations(&asp, &ncit, labels)? {
            deciles.push(vec![
                Value::from(row.group.as_str()),
                Value::from(row.decile),
                Value::from(row.n),
                Value::from(row.r),
            ])?;
        }
    }
    reports.write("deciles", &deciles)?;

    let mut noncited = Table::new(["group", "year", "n", "ratio"]);
    for row in noncited_ratio(&ncit, &groups, &years, cfg.policy.analysis_years)? {
        noncited.push(vec![
            Value::from(row.group.as_str()),
            Value::from(row.year),
            Value::from(row.n),
            Value::from(row.ratio),
        ])?;
    }
    reports.write("noncited", &noncited)?;

    let options = IntensityOptions {
        scale: cfg.stats.intensity_scale,
        zero_diagonal: cfg.stats.intensity_zero_diagonal,
    };
    let subject_level = cross_intensity(&graph, IntensityLevel::Subject, &options)?;
    write_intensity(&reports, "intensity", &subject_level)?;
    if let Some(map) = &cluster_map {
        let m = cross_intensity(&graph, IntensityLevel::Cluster(map), &options)?;
        write_intensity(&reports, "intensity_cluster", &m)?;
    }

    if let Some(grades) = &grades {
        let journals: Vec<Option<&str>> = nodes.iter().map(|&v| graph.journal(v)).collect();
        let agg = journal_aggregate(&asp, &ncit, &journals, grades)?;
        reports.write("journal_grades", &agg.to_table())?;
        println!(
            "journal grades: {} ungraded journals, {} articles without journal",
            agg.unmatched_journals, agg.articles_without_journal
        );
    }

    let mut covariates = Table::new(["covariate", "r", "bin", "n", "median_asp"]);
    for (name, cov) in [("n_coauthors", &coauthors), ("n_refs", &references)] {
        match covariate_association(&asp, cov) {
            Ok(a) => {
                for b in a.bins {
                    covariates.push(vec![
                        Value::from(name),
                        Value::from(a.r),
                        Value::from(b.label),
                        Value::from(b.n),
                        Value::from(b.median),
                    ])?;
                }
            }
            Err(e) => log::warn!("{name}: {e}"),
        }
    }
    reports.write("covariates", &covariates)?;

    if let Some(map) = &cluster_map {
        let mut rollup = Table::new(["metric", "stat", "cluster", "year", "n", "value"]);
        for (metric, values) in [("asp", &asp), ("ncit", &ncit_f)] {
            for (stat_name, stat) in [("mean", RollupStat::Mean), ("median", RollupStat::Median)] {
                for row in cluster_rollup(values, &subjects, map, stat, &years)? {
                    rollup.push(vec![
                        Value::from(metric),
                        Value::from(stat_name),
                        Value::from(row.cluster),
                        Value::from(row.year),
                        Value::from(row.n),
                        Value::from(row.value),
                    ])?;
                }
            }
        }
        reports.write("cluster_rollup", &rollup)?;
    }

    let asp_pct = percentile_ranks(&asp);
    let ncit_pct = percentile_ranks(&ncit_f);
    let mut order: Vec<usize> = (0..asp.len()).collect();
    order.sort_by(|&a, &b| asp[b].total_cmp(&asp[a]).then(a.cmp(&b)));
    let mut top = Table::new([
        "rank",
        "article_id",
        "year",
        "asp",
        "asp_percentile",
        "ncit",
        "ncit_percentile",
    ]);
    for (rank, &k) in order.iter().take(cfg.stats.top_articles).enumerate() {
        top.push(vec![
            Value::from(rank + 1),
            Value::from(graph.id(nodes[k])),
            Value::from(years[k]),
            Value::from(asp[k]),
            Value::from(asp_pct[k].floor() as i64),
            Value::from(ncit[k]),
            Value::from(ncit_pct[k].floor() as i64),
        ])?;
    }
    reports.write("percentiles", &top)?;

    if !asp.is_empty() {
        let share = discordant_share(
            &asp,
            &ncit,
            cfg.stats.high_asp_percentile,
            cfg.stats.low_ncit_percentile,
        )?;
        let mut disc = Table::new(["asp_min_percentile", "ncit_max_percentile", "share"]);
        disc.push(vec![
            Value::from(cfg.stats.high_asp_percentile),
            Value::from(cfg.stats.low_ncit_percentile),
            Value::from(share),
        ])?;
        reports.write("discordance", &disc)?;
    }

    println!(
        "stats: {} articles in analysis years, solver converged={}",
        nodes.len(),
        result.converged
    );
    Ok(if result.converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    })
}

pub fn synth(args: &SynthArgs) -> Result<Outcome> {
    let spec = SyntheticSpec {
        n_articles: args.n_articles,
        year_range: (args.year_start, args.year_end),
        n_subjects: args.n_subjects,
        mean_out_degree: args.mean_out_degree,
        attachment_exponent: args.attachment_exponent,
        seed: args.seed,
        hot_subject_boost: args.hot_subject_boost,
        journals_per_subject: args.journals_per_subject,
    };
    let corpus = generate_synthetic(&spec)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    write_delimited_file(
        &articles_table(&corpus.articles),
        &args.out.join("articles.tsv"),
        b'\t',
        true,
    )?;
    let mut edges = Table::new(["citing_id", "cited_id"]);
    for &(c, t) in &corpus.links {
        edges.push(vec![
            Value::from(corpus.articles[c as usize].article_id.as_str()),
            Value::from(corpus.articles[t as usize].article_id.as_str()),
        ])?;
    }
    write_delimited_file(&edges, &args.out.join("edges.tsv"), b'\t', false)?;
    println!(
        "synth: {} articles, {} edges -> {}",
        corpus.articles.len(),
        corpus.links.len(),
        args.out.display()
    );
    Ok(Outcome::Done)
}

pub fn graph_check(cfg: &RunConfig, args: &GraphCheckArgs) -> Result<Outcome> {
    cfg.policy.validate()?;
    let corpus = load_corpus(cfg)?;
    let (graph, report) = build_graph(&corpus.articles, &corpus.edges, &cfg.policy)?;
    print!("{report}");
    match topological_order(&graph) {
        TopoOrder::Acyclic(_) => println!("{:<32}acyclic", "cycles"),
        TopoOrder::Cyclic(nodes) => println!("{:<32}{} nodes on cycles", "cycles", nodes.len()),
    }
    if let Some(out) = &cfg.paths.out {
        std::fs::create_dir_all(out)
            .with_context(|| format!("creating output directory {}", out.display()))?;
        let path = out.join(format!("preprocess.{}", cfg.format.extension()));
        write_table(&report.to_table(), &path, cfg.format)?;
    }
    if let Some(path) = &args.snapshot {
        let file =
            File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_snapshot(&graph, file).with_context(|| format!("writing {}", path.display()))?;
        println!("snapshot written to {}", path.display());
    }
    Ok(Outcome::Done)
}
