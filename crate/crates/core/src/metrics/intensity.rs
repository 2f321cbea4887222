use std::collections::BTreeMap;

use super::ClusterMap;
use crate::corpus::{Table, Value};
use crate::error::Result;
use crate::graph::CitationGraph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub enum IntensityLevel<'a> {
    Subject,
    Cluster(&'a ClusterMap),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityOptions<T> {
    pub scale: T,
    pub zero_diagonal: bool,
}

impl<T: Scalar> Default for IntensityOptions<T> {
    fn default() -> Self {
        IntensityOptions {
            scale: T::one(),
            zero_diagonal: false,
        }
    }
}

/// Symmetric cross-citation intensity between labels.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMatrix<T> {
    pub labels: Vec<String>,
    /// Article count per label.
    pub sizes: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> IntensityMatrix<T> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, s: usize, t: usize) -> T {
        self.values[s * self.len() + t]
    }

    /// `(source, target, intensity)` for every ordered pair.
    pub fn long_table(&self) -> Table {
        let mut table = Table::new(["source", "target", "intensity"]);
        for (s, a) in self.labels.iter().enumerate() {
            for (t, b) in self.labels.iter().enumerate() {
                table.push_unchecked(vec![
                    Value::from(a.as_str()),
                    Value::from(b.as_str()),
                    Value::from(self.get(s, t).as_f64()),
                ]);
            }
        }
        table
    }

    /// Square layout with a leading label column.
    pub fn square_table(&self) -> Table {
        let mut columns = vec!["label".to_string()];
        columns.extend(self.labels.iter().cloned());
        let mut table = Table::new(columns);
        for (s, a) in self.labels.iter().enumerate() {
            let mut row = vec![Value::from(a.as_str())];
            row.extend((0..self.len()).map(|t| Value::from(self.get(s, t).as_f64())));
            table.push_unchecked(row);
        }
        table
    }
}

/// `intensity(s, t) = scale * (c(s->t) + c(t->s)) / (n(s) + n(t))`.
///
/// Each article belongs to every label it carries (distinct labels per
/// article at cluster level); an edge between articles with label sets `A`
/// and `B` adds one to `c(a->b)` for every pair in `A x B`.
pub fn cross_intensity<T: Scalar>(
    graph: &CitationGraph,
    level: IntensityLevel<'_>,
    options: &IntensityOptions<T>,
) -> Result<IntensityMatrix<T>> {
    let subject_names = graph.subject_names();
    let (labels, label_of_subject): (Vec<String>, Vec<u32>) = match level {
        IntensityLevel::Subject => (
            subject_names.to_vec(),
            (0..subject_names.len() as u32).collect(),
        ),
        IntensityLevel::Cluster(map) => {
            map.check_covers(subject_names.iter().map(String::as_str))?;
            let clusters: BTreeMap<&str, u32> = subject_names
                .iter()
                .filter_map(|s| map.cluster_of(s))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(k, c)| (c, k as u32))
                .collect();
            let of_subject = subject_names
                .iter()
                .map(|s| clusters[map.cluster_of(s).unwrap()])
                .collect();
            (clusters.keys().map(|c| c.to_string()).collect(), of_subject)
        }
    };
    let k = labels.len();
    let node_labels: Vec<Vec<u32>> = (0..graph.n())
        .map(|v| {
            let mut ls: Vec<u32> = graph
                .subjects(v)
                .iter()
                .map(|&s| label_of_subject[s as usize])
                .collect();
            ls.sort_unstable();
            ls.dedup();
            ls
        })
        .collect();

    let mut sizes = vec![0usize; k];
    for ls in &node_labels {
        for &l in ls {
            sizes[l as usize] += 1;
        }
    }
    let mut counts = vec![0u64; k * k];
    for (j, i) in graph.edges() {
        for &a in &node_labels[j as usize] {
            for &b in &node_labels[i as usize] {
                counts[a as usize * k + b as usize] += 1;
            }
        }
    }

    let mut values = vec![T::zero(); k * k];
    for s in 0..k {
        for t in 0..k {
            if options.zero_diagonal && s == t {
                continue;
            }
            let denom = sizes[s] + sizes[t];
            let both = counts[s * k + t] + counts[t * k + s];
            if denom > 0 {
                values[s * k + t] = options.scale * T::from_u64(both).unwrap()
                    / T::from_usize_lossy(denom);
            }
        }
    }
    Ok(IntensityMatrix {
        labels,
        sizes,
        values,
    })
}
