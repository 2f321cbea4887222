//! Preprocessed temporal citation graph.
//!
//! Nodes are articles, indexed `0..n` in ascending `article_id` order. An
//! edge `j -> i` means article `j` references article `i`. Both directions
//! are stored as CSR: `out` rows list the references of a node and `in`
//! rows list its citers, each sorted by node index.

mod build;
mod csr;
mod snapshot;
mod topo;
mod window;

use std::sync::Arc;

pub use build::{build_graph, build_graph_from_links, PreprocessPolicy, PreprocessReport};
pub use csr::Csr;
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
pub use topo::{topological_order, TopoOrder};
pub use window::{citation_counts, filter_window};

/// Per-node attributes shared between a graph and its windowed views.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeAttributes {
    pub ids: Vec<String>,
    pub years: Vec<i32>,
    /// Sorted, distinct subject labels; node subjects index into this.
    pub subject_names: Vec<String>,
    /// Per-node subject ids in the article's original order, deduplicated.
    pub subjects: Csr,
    pub journal_names: Vec<String>,
    pub journals: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    attrs: Arc<NodeAttributes>,
    out_csr: Csr,
    in_csr: Csr,
}

impl CitationGraph {
    /// Builds a graph from attributes and the outgoing adjacency; the
    /// incoming side is derived.
    pub fn from_parts(attrs: Arc<NodeAttributes>, out_csr: Csr) -> Self {
        let n = attrs.ids.len();
        assert_eq!(out_csr.n_rows(), n, "adjacency rows must match node count");
        let in_csr = out_csr.transpose(n);
        CitationGraph {
            attrs,
            out_csr,
            in_csr,
        }
    }

    pub(crate) fn with_edges(&self, out_csr: Csr) -> Self {
        CitationGraph::from_parts(Arc::clone(&self.attrs), out_csr)
    }

    pub fn n(&self) -> usize {
        self.attrs.ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.out_csr.nnz()
    }

    pub fn attributes(&self) -> &NodeAttributes {
        &self.attrs
    }

    pub fn id(&self, node: usize) -> &str {
        &self.attrs.ids[node]
    }

    /// Node index of `article_id`, by binary search over the sorted ids.
    pub fn node_of(&self, article_id: &str) -> Option<usize> {
        self.attrs
            .ids
            .binary_search_by(|probe| probe.as_str().cmp(article_id))
            .ok()
    }

    pub fn year(&self, node: usize) -> i32 {
        self.attrs.years[node]
    }

    pub fn years(&self) -> &[i32] {
        &self.attrs.years
    }

    pub fn subjects(&self, node: usize) -> &[u32] {
        self.attrs.subjects.row(node)
    }

    pub fn subject_names(&self) -> &[String] {
        &self.attrs.subject_names
    }

    pub fn journal(&self, node: usize) -> Option<&str> {
        self.attrs.journals[node].map(|j| self.attrs.journal_names[j as usize].as_str())
    }

    /// Articles referenced by `node`.
    pub fn references(&self, node: usize) -> &[u32] {
        self.out_csr.row(node)
    }

    /// Articles citing `node`.
    pub fn citers(&self, node: usize) -> &[u32] {
        self.in_csr.row(node)
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_csr.row_len(node)
    }

    pub fn out_csr(&self) -> &Csr {
        &self.out_csr
    }

    pub fn in_csr(&self) -> &Csr {
        &self.in_csr
    }

    /// All `(citing, cited)` edges in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.out_csr.pairs()
    }

    /// Year of the citing article minus year of the cited one.
    #[inline]
    pub fn lag(&self, citing: usize, cited: usize) -> i32 {
        self.attrs.years[citing] - self.attrs.years[cited]
    }
}
