//! Article and edge ingestion, synthetic corpora, and report tables.

mod parse;
mod synth;
mod table;

use serde::{Deserialize, Serialize};

pub use parse::{
    articles_table, edges_table, parse_articles, parse_edges, ArticleFormat, BadRowPolicy,
    ParsedArticles,
};
pub use synth::{generate_synthetic, SyntheticCorpus, SyntheticSpec};
pub use table::{write_delimited, write_delimited_file, write_table, ReportFormat, Table, Value};

/// One publication as read from an article table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub article_id: String,
    pub year: i32,
    /// Subject labels in file order. May be empty.
    pub subjects: Vec<String>,
    pub journal_id: Option<String>,
    pub n_coauthors: u32,
    pub n_references_declared: u32,
}

/// A citation as read from an edge list: `citing_id` references `cited_id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawEdge {
    pub citing_id: String,
    pub cited_id: String,
}

impl RawEdge {
    pub fn new(citing: impl Into<String>, cited: impl Into<String>) -> Self {
        RawEdge {
            citing_id: citing.into(),
            cited_id: cited.into(),
        }
    }
}
