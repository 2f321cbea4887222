#![allow(dead_code)]

use asp_core::corpus::ArticleRecord;
use asp_core::graph::{build_graph_from_links, CitationGraph, PreprocessPolicy};
use rand::Rng;

pub fn article(id: String, year: i32, subjects: &[&str]) -> ArticleRecord {
    ArticleRecord {
        article_id: id,
        year,
        subjects: subjects.iter().map(|s| s.to_string()).collect(),
        journal_id: None,
        n_coauthors: 1,
        n_references_declared: 1,
    }
}

/// Keeps every article; only edge cleanup applies.
pub fn permissive() -> PreprocessPolicy {
    PreprocessPolicy {
        drop_no_subject: false,
        drop_no_reference: false,
        ..PreprocessPolicy::default()
    }
}

/// Ids sort in generation order, so node `k` of the built graph is article `k`.
pub fn node_id(k: usize) -> String {
    format!("N{k:07}")
}

/// Articles with non-decreasing years spread over `years`.
pub fn sorted_articles<R: Rng>(rng: &mut R, n: usize, years: (i32, i32)) -> Vec<ArticleRecord> {
    let mut ys: Vec<i32> = (0..n).map(|_| rng.gen_range(years.0..=years.1)).collect();
    ys.sort_unstable();
    ys.into_iter()
        .enumerate()
        .map(|(k, y)| article(node_id(k), y, &["S"]))
        .collect()
}

pub fn build(articles: &[ArticleRecord], links: &[(u32, u32)]) -> CitationGraph {
    build_graph_from_links(articles, links, &permissive())
        .unwrap()
        .0
}

/// Acyclic: every link points from a later index to an earlier one.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, mean_degree: f64) -> CitationGraph {
    let articles = sorted_articles(rng, n, (1981, 2020));
    let links = dag_links(rng, n, mean_degree);
    build(&articles, &links)
}

pub fn dag_links<R: Rng>(rng: &mut R, n: usize, mean_degree: f64) -> Vec<(u32, u32)> {
    let mut links = Vec::new();
    for c in 1..n {
        let m = rng.gen_range(0.0..2.0 * mean_degree).round() as usize;
        for _ in 0..m {
            links.push((c as u32, rng.gen_range(0..c) as u32));
        }
    }
    links
}

/// Random graph without future references; same-year pairs may cite each
/// other, so cycles are possible.
pub fn random_cyclic<R: Rng>(rng: &mut R, n: usize, mean_degree: f64) -> CitationGraph {
    let articles = sorted_articles(rng, n, (1981, 1990));
    let mut links = Vec::new();
    for c in 0..n {
        let y = articles[c].year;
        // Last index whose year is <= y.
        let hi = articles.partition_point(|a| a.year <= y);
        let m = rng.gen_range(0.0..2.0 * mean_degree).round() as usize;
        for _ in 0..m {
            links.push((c as u32, rng.gen_range(0..hi) as u32));
        }
    }
    build(&articles, &links)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
