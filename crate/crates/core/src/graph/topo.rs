use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::CitationGraph;

/// Result of ordering a citation graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopoOrder {
    /// Every article precedes the articles it references.
    Acyclic(Vec<u32>),
    /// Sorted nodes lying on at least one directed cycle.
    Cyclic(Vec<u32>),
}

impl TopoOrder {
    pub fn order(&self) -> Option<&[u32]> {
        match self {
            TopoOrder::Acyclic(o) => Some(o),
            TopoOrder::Cyclic(_) => None,
        }
    }
}

/// Orders nodes newest-first (citing before cited) with Kahn's algorithm,
/// or reports the nodes on cycles when none exists.
pub fn topological_order(graph: &CitationGraph) -> TopoOrder {
    let n = graph.n();
    let mut pending: Vec<u32> = (0..n).map(|i| graph.citers(i).len() as u32).collect();
    let mut queue: VecDeque<u32> = (0..n as u32).filter(|&i| pending[i as usize] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(j) = queue.pop_front() {
        order.push(j);
        for &i in graph.references(j as usize) {
            let p = &mut pending[i as usize];
            *p -= 1;
            if *p == 0 {
                queue.push_back(i);
            }
        }
    }
    if order.len() == n {
        return TopoOrder::Acyclic(order);
    }

    // Cycles live among the leftovers; isolate the non-trivial components.
    let left: Vec<u32> = (0..n as u32).filter(|&i| pending[i as usize] > 0).collect();
    let mut local = vec![u32::MAX; n];
    for (k, &v) in left.iter().enumerate() {
        local[v as usize] = k as u32;
    }
    let mut sub = DiGraph::<u32, ()>::with_capacity(left.len(), 0);
    for &v in &left {
        sub.add_node(v);
    }
    for &j in &left {
        for &i in graph.references(j as usize) {
            let li = local[i as usize];
            if li != u32::MAX {
                sub.add_edge((local[j as usize]).into(), li.into(), ());
            }
        }
    }
    let mut on_cycle: Vec<u32> = tarjan_scc(&sub)
        .into_iter()
        .filter(|scc| scc.len() > 1)
        .flatten()
        .map(|ix| sub[ix])
        .collect();
    on_cycle.sort_unstable();
    TopoOrder::Cyclic(on_cycle)
}
