use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CitationGraph, Csr, NodeAttributes};
use crate::corpus::{ArticleRecord, RawEdge, Table, Value};
use crate::error::{Error, Result};

/// Which articles and edges survive preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessPolicy {
    pub drop_no_subject: bool,
    pub drop_no_reference: bool,
    pub drop_future_refs: bool,
    pub dedup_parallel_edges: bool,
    /// Years reported by the analytics layer.
    pub analysis_years: (i32, i32),
    /// Years kept in the graph; articles outside are dropped.
    pub corpus_years: (i32, i32),
}

impl Default for PreprocessPolicy {
    fn default() -> Self {
        PreprocessPolicy {
            drop_no_subject: true,
            drop_no_reference: true,
            drop_future_refs: true,
            dedup_parallel_edges: true,
            analysis_years: (1990, 2015),
            corpus_years: (1981, 2020),
        }
    }
}

impl PreprocessPolicy {
    pub fn validate(&self) -> Result<()> {
        let (a0, a1) = self.analysis_years;
        let (c0, c1) = self.corpus_years;
        if a0 > a1 || c0 > c1 {
            return Err(Error::invalid("year intervals must be non-empty"));
        }
        if a0 < c0 || a1 > c1 {
            return Err(Error::invalid(format!(
                "analysis years {a0}-{a1} not within corpus years {c0}-{c1}"
            )));
        }
        Ok(())
    }

    pub fn in_analysis(&self, year: i32) -> bool {
        (self.analysis_years.0..=self.analysis_years.1).contains(&year)
    }
}

/// Tally of everything removed while building a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub articles_in: usize,
    pub articles_dropped_out_of_range: usize,
    pub articles_dropped_no_subject: usize,
    pub articles_dropped_no_reference: usize,
    pub edges_in: usize,
    pub edges_dropped_dangling: usize,
    pub self_loops_removed: usize,
    pub edges_dropped_future: usize,
    pub parallel_edges_merged: usize,
    pub nodes: usize,
    pub edges: usize,
}

impl PreprocessReport {
    fn entries(&self) -> [(&'static str, usize); 11] {
        [
            ("articles_in", self.articles_in),
            ("articles_dropped_out_of_range", self.articles_dropped_out_of_range),
            ("articles_dropped_no_subject", self.articles_dropped_no_subject),
            ("articles_dropped_no_reference", self.articles_dropped_no_reference),
            ("edges_in", self.edges_in),
            ("edges_dropped_dangling", self.edges_dropped_dangling),
            ("self_loops_removed", self.self_loops_removed),
            ("edges_dropped_future", self.edges_dropped_future),
            ("parallel_edges_merged", self.parallel_edges_merged),
            ("nodes", self.nodes),
            ("edges", self.edges),
        ]
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["item", "count"]);
        for (k, v) in self.entries() {
            t.push_unchecked(vec![Value::from(k), Value::from(v)]);
        }
        t
    }
}

impl fmt::Display for PreprocessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k:<32}{v}")?;
        }
        Ok(())
    }
}

/// Applies `policy` to articles and edges and assembles the graph.
///
/// Order of operations: articles outside `corpus_years`, without subjects,
/// or without any reference are dropped; edges with a missing endpoint are
/// dropped as dangling; then self-loops, future references and parallel
/// duplicates are removed in that order. An article has a reference when
/// its declared count is positive or it cites anything in the raw edge list
/// (known or not). Node indices follow sorted `article_id`.
pub fn build_graph(
    articles: &[ArticleRecord],
    edges: &[RawEdge],
    policy: &PreprocessPolicy,
) -> Result<(CitationGraph, PreprocessReport)> {
    let mut index: HashMap<&str, u32> = HashMap::with_capacity(articles.len());
    for (k, a) in articles.iter().enumerate() {
        if index.insert(a.article_id.as_str(), k as u32).is_some() {
            return Err(Error::invalid(format!(
                "duplicate article id {:?}",
                a.article_id
            )));
        }
    }
    let mut cites_something = vec![false; articles.len()];
    let mut links = Vec::with_capacity(edges.len());
    let mut unknown = 0usize;
    for e in edges {
        let citing = index.get(e.citing_id.as_str()).copied();
        if let Some(c) = citing {
            cites_something[c as usize] = true;
        }
        match (citing, index.get(e.cited_id.as_str())) {
            (Some(c), Some(&t)) => links.push((c, t)),
            _ => unknown += 1,
        }
    }
    assemble(articles, &links, cites_something, unknown, policy)
}

/// Like [`build_graph`] with edges given as `(citing, cited)` indices into
/// `articles`.
pub fn build_graph_from_links(
    articles: &[ArticleRecord],
    links: &[(u32, u32)],
    policy: &PreprocessPolicy,
) -> Result<(CitationGraph, PreprocessReport)> {
    let n = articles.len();
    let mut cites_something = vec![false; n];
    for &(c, t) in links {
        if c as usize >= n || t as usize >= n {
            return Err(Error::invalid(format!("link ({c}, {t}) out of range")));
        }
        cites_something[c as usize] = true;
    }
    {
        let mut ids: Vec<&str> = articles.iter().map(|a| a.article_id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate article id {:?}", w[0])));
        }
    }
    assemble(articles, links, cites_something, 0, policy)
}

fn assemble(
    articles: &[ArticleRecord],
    links: &[(u32, u32)],
    cites_something: Vec<bool>,
    unknown_endpoints: usize,
    policy: &PreprocessPolicy,
) -> Result<(CitationGraph, PreprocessReport)> {
    policy.validate()?;
    let mut report = PreprocessReport {
        articles_in: articles.len(),
        edges_in: links.len() + unknown_endpoints,
        edges_dropped_dangling: unknown_endpoints,
        ..Default::default()
    };

    let (c0, c1) = policy.corpus_years;
    let mut kept: Vec<u32> = Vec::with_capacity(articles.len());
    for (k, a) in articles.iter().enumerate() {
        if a.year < c0 || a.year > c1 {
            report.articles_dropped_out_of_range += 1;
        } else if policy.drop_no_subject && a.subjects.is_empty() {
            report.articles_dropped_no_subject += 1;
        } else if policy.drop_no_reference && a.n_references_declared == 0 && !cites_something[k]
        {
            report.articles_dropped_no_reference += 1;
        } else {
            kept.push(k as u32);
        }
    }
    kept.sort_unstable_by(|&a, &b| {
        articles[a as usize]
            .article_id
            .cmp(&articles[b as usize].article_id)
    });

    const ABSENT: u32 = u32::MAX;
    let mut node_of = vec![ABSENT; articles.len()];
    for (node, &k) in kept.iter().enumerate() {
        node_of[k as usize] = node as u32;
    }
    let attrs = node_attributes(articles, &kept);

    let mut pairs = Vec::with_capacity(links.len());
    for &(c, t) in links {
        let (j, i) = (node_of[c as usize], node_of[t as usize]);
        if j == ABSENT || i == ABSENT {
            report.edges_dropped_dangling += 1;
        } else if j == i {
            report.self_loops_removed += 1;
        } else if policy.drop_future_refs && attrs.years[j as usize] < attrs.years[i as usize] {
            report.edges_dropped_future += 1;
        } else {
            pairs.push((j, i));
        }
    }
    pairs.sort_unstable();
    if policy.dedup_parallel_edges {
        let before = pairs.len();
        pairs.dedup();
        report.parallel_edges_merged = before - pairs.len();
    }

    let out_csr = Csr::from_sorted_pairs(kept.len(), &pairs);
    let graph = CitationGraph::from_parts(Arc::new(attrs), out_csr);
    report.nodes = graph.n();
    report.edges = graph.n_edges();
    Ok((graph, report))
}

fn node_attributes(articles: &[ArticleRecord], kept: &[u32]) -> NodeAttributes {
    let rows = || kept.iter().map(|&k| &articles[k as usize]);

    let subject_names: Vec<String> = rows()
        .flat_map(|a| a.subjects.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .cloned()
        .collect();
    let subject_id: HashMap<&str, u32> = subject_names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i as u32))
        .collect();
    let mut offsets = Vec::with_capacity(kept.len() + 1);
    let mut ids = Vec::new();
    offsets.push(0);
    for a in rows() {
        let start = ids.len();
        for s in &a.subjects {
            let sid = subject_id[s.as_str()];
            if !ids[start..].contains(&sid) {
                ids.push(sid);
            }
        }
        offsets.push(ids.len());
    }

    let journal_names: Vec<String> = rows()
        .filter_map(|a| a.journal_id.as_ref())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .cloned()
        .collect();
    let journal_id: HashMap<&str, u32> = journal_names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i as u32))
        .collect();

    NodeAttributes {
        ids: rows().map(|a| a.article_id.clone()).collect(),
        years: rows().map(|a| a.year).collect(),
        subjects: Csr::from_parts(offsets, ids),
        subject_names,
        journals: rows()
            .map(|a| a.journal_id.as_deref().map(|j| journal_id[j]))
            .collect(),
        journal_names,
    }
}
