use super::{CitationGraph, Csr};
use crate::error::{Error, Result};

/// Keeps only edges whose citing lag lies in `0..=window` years.
///
/// The node set is unchanged; out-degrees shrink accordingly.
pub fn filter_window(graph: &CitationGraph, window: u32) -> Result<CitationGraph> {
    if window < 1 {
        return Err(Error::invalid("citing window must be at least 1 year"));
    }
    let w = window as i64;
    let n = graph.n();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(graph.n_edges());
    offsets.push(0);
    for j in 0..n {
        for &i in graph.references(j) {
            let lag = graph.lag(j, i as usize) as i64;
            if (0..=w).contains(&lag) {
                targets.push(i);
            }
        }
        offsets.push(targets.len());
    }
    Ok(graph.with_edges(Csr::from_parts(offsets, targets)))
}

/// Per node, the number of citations received within `window` years.
pub fn citation_counts(graph: &CitationGraph, window: u32) -> Vec<u32> {
    let w = window as i64;
    (0..graph.n())
        .map(|i| {
            graph
                .citers(i)
                .iter()
                .filter(|&&j| (0..=w).contains(&(graph.lag(j as usize, i) as i64)))
                .count() as u32
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::graph;

    #[test]
    fn lag_boundary() {
        let g = graph(
            &[("A", 1990), ("B", 1996), ("C", 1995)],
            &[("B", "A"), ("C", "A")],
        );
        let f = filter_window(&g, 5).unwrap();
        assert_eq!(f.n(), 3);
        assert_eq!(f.n_edges(), 1);
        assert_eq!(f.references(2), &[0]);
        assert_eq!(f.out_degree(1), 0);
    }

    #[test]
    fn full_span_is_identity() {
        let g = graph(
            &[("A", 1990), ("B", 1996), ("C", 1995)],
            &[("B", "A"), ("C", "A"), ("B", "C")],
        );
        assert_eq!(filter_window(&g, 6).unwrap(), g);
    }

    #[test]
    fn zero_window_rejected() {
        let g = graph(&[("A", 1990)], &[]);
        assert!(matches!(filter_window(&g, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn counts() {
        let mut nodes = vec![("T", 1990)];
        let names: Vec<String> = (0..8).map(|k| format!("C{k}")).collect();
        for (k, name) in names.iter().enumerate() {
            nodes.push((name.as_str(), if k < 7 { 1993 } else { 1999 }));
        }
        let edges: Vec<_> = names.iter().map(|n| (n.as_str(), "T")).collect();
        let g = graph(&nodes, &edges);
        let counts = citation_counts(&g, 5);
        let t = g.node_of("T").unwrap();
        assert_eq!(counts[t], 7);
        assert_eq!(counts.iter().filter(|&&c| c == 0).count(), 8);
        let total: u32 = counts.iter().sum();
        assert_eq!(total as usize, filter_window(&g, 5).unwrap().n_edges());
    }
}
