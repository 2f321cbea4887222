use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::Serialize;

use super::summary::{mean, median_sorted, sorted_copy};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Subject label to cluster label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClusterMap {
    map: BTreeMap<String, String>,
}

impl ClusterMap {
    pub fn from_pairs<I, S, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, C)>,
        S: Into<String>,
        C: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (s, c) in pairs {
            let (s, c) = (s.into(), c.into());
            if c.trim().is_empty() {
                return Err(Error::invalid(format!("empty cluster label for {s:?}")));
            }
            map.insert(s, c);
        }
        Ok(ClusterMap { map })
    }

    /// Reads `subject<TAB>cluster` rows after a header line.
    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let mut pairs = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            if row.len() != 2 {
                return Err(Error::Row {
                    line,
                    message: format!("expected 2 fields, found {}", row.len()),
                });
            }
            pairs.push((row[0].trim().to_string(), row[1].trim().to_string()));
        }
        ClusterMap::from_pairs(pairs)
    }

    pub fn cluster_of(&self, subject: &str) -> Option<&str> {
        self.map.get(subject).map(String::as_str)
    }

    pub fn clusters(&self) -> BTreeSet<&str> {
        self.map.values().map(String::as_str).collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Fails with every subject that has no cluster.
    pub fn check_covers<'a, I>(&self, subjects: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let missing: BTreeSet<&str> = subjects
            .into_iter()
            .filter(|s| !self.map.contains_key(*s))
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::UnmappedSubjects(
                missing.into_iter().map(String::from).collect(),
            ))
        }
    }

    /// The single cluster an article belongs to: the one holding most of
    /// its subjects; on a tie, the cluster of the earliest listed subject
    /// among the tied ones. `None` for articles without subjects.
    pub fn assign<'a, S: AsRef<str>>(&'a self, subjects: &[S]) -> Result<Option<&'a str>> {
        let mut counts: Vec<(&str, usize)> = Vec::new();
        for s in subjects {
            let c = self
                .cluster_of(s.as_ref())
                .ok_or_else(|| Error::UnmappedSubjects(vec![s.as_ref().to_string()]))?;
            match counts.iter_mut().find(|(k, _)| *k == c) {
                Some(entry) => entry.1 += 1,
                None => counts.push((c, 1)),
            }
        }
        // `counts` is in first-appearance order, so the first maximum wins.
        let best = counts.iter().map(|&(_, n)| n).max();
        Ok(best.and_then(|b| counts.iter().find(|&&(_, n)| n == b).map(|&(c, _)| c)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RollupStat {
    Mean,
    Median,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RollupRow<T> {
    pub cluster: String,
    pub year: i32,
    pub n: usize,
    pub value: T,
}

/// Mean or median of `values` per `(cluster, year)`, each article counted
/// once in its assigned cluster. Articles without subjects are skipped.
pub fn cluster_rollup<T: Scalar, S: AsRef<str>>(
    values: &[T],
    subjects: &[Vec<S>],
    cluster_map: &ClusterMap,
    stat: RollupStat,
    years: &[i32],
) -> Result<Vec<RollupRow<T>>> {
    if values.len() != subjects.len() || values.len() != years.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: subjects.len().min(years.len()),
        });
    }
    cluster_map.check_covers(subjects.iter().flatten().map(AsRef::as_ref))?;
    let mut cells: BTreeMap<(&str, i32), Vec<T>> = BTreeMap::new();
    for ((&v, subj), &y) in values.iter().zip(subjects).zip(years) {
        if let Some(c) = cluster_map.assign(subj)? {
            cells.entry((c, y)).or_default().push(v);
        }
    }
    Ok(cells
        .into_iter()
        .map(|((cluster, year), vals)| RollupRow {
            cluster: cluster.to_string(),
            year,
            n: vals.len(),
            value: match stat {
                RollupStat::Mean => mean(&vals),
                RollupStat::Median => median_sorted(&sorted_copy(&vals)),
            },
        })
        .collect())
}
