use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use serde::Serialize;

use super::summary::{mean, median_sorted, sorted_copy};
use crate::corpus::{Table, Value};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// External journal grades: SJR quartile and H-index quartile labels.
#[derive(Debug, Clone, Default)]
pub struct GradeTable {
    grades: HashMap<String, (String, String)>,
}

/// Case-folded, trimmed journal key.
pub fn normalize_journal(id: &str) -> String {
    id.trim().to_lowercase()
}

impl GradeTable {
    pub fn insert(&mut self, journal: &str, sjr: impl Into<String>, h: impl Into<String>) {
        self.grades
            .insert(normalize_journal(journal), (sjr.into(), h.into()));
    }

    /// Reads `journal<TAB>sjr_quartile<TAB>h_quartile` rows after a header.
    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let mut table = GradeTable::default();
        for row in rdr.records() {
            let row = row?;
            if row.len() != 3 {
                return Err(Error::Row {
                    line: row.position().map_or(0, |p| p.line()),
                    message: format!("expected 3 fields, found {}", row.len()),
                });
            }
            table.insert(&row[0], row[1].trim(), row[2].trim());
        }
        Ok(table)
    }

    pub fn get(&self, journal: &str) -> Option<&(String, String)> {
        self.grades.get(&normalize_journal(journal))
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }
}

pub const JOURNAL_STATS: [&str; 4] = ["min", "mean", "median", "max"];

/// One cell of the grade table: how a journal-level statistic of one
/// metric ranges over the journals of a grade.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradeRow<T> {
    /// `"sjr"` or `"h"`.
    pub scheme: &'static str,
    pub grade: String,
    /// `"asp"` or `"ncit"`.
    pub metric: &'static str,
    /// One of [`JOURNAL_STATS`].
    pub journal_stat: &'static str,
    pub n_journals: usize,
    pub range_min: T,
    pub range_max: T,
    pub mean: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JournalAggregate<T> {
    pub rows: Vec<GradeRow<T>>,
    /// Distinct journals with no grade entry.
    pub unmatched_journals: usize,
    pub articles_without_journal: usize,
}

impl<T: Scalar> JournalAggregate<T> {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "scheme",
            "grade",
            "metric",
            "journal_stat",
            "n_journals",
            "range_min",
            "range_max",
            "mean",
        ]);
        for r in &self.rows {
            t.push_unchecked(vec![
                Value::from(r.scheme),
                Value::from(r.grade.as_str()),
                Value::from(r.metric),
                Value::from(r.journal_stat),
                Value::from(r.n_journals),
                Value::from(r.range_min.as_f64()),
                Value::from(r.range_max.as_f64()),
                Value::from(r.mean.as_f64()),
            ]);
        }
        t
    }
}

fn four_stats<T: Scalar>(values: &[T]) -> [T; 4] {
    let sorted = sorted_copy(values);
    [
        sorted[0],
        mean(&sorted),
        median_sorted(&sorted),
        sorted[sorted.len() - 1],
    ]
}

/// Per-journal min/mean/median/max of prestige and citation count, then
/// per grade the range and mean of each journal-level statistic.
pub fn journal_aggregate<T: Scalar, J: AsRef<str>>(
    asp: &[T],
    ncit: &[u32],
    journal_ids: &[Option<J>],
    grades: &GradeTable,
) -> Result<JournalAggregate<T>> {
    if asp.len() != ncit.len() || asp.len() != journal_ids.len() {
        return Err(Error::LengthMismatch {
            left: asp.len(),
            right: ncit.len().min(journal_ids.len()),
        });
    }
    let mut journals: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut articles_without_journal = 0;
    for (i, j) in journal_ids.iter().enumerate() {
        match j {
            Some(j) => journals
                .entry(normalize_journal(j.as_ref()))
                .or_default()
                .push(i),
            None => articles_without_journal += 1,
        }
    }

    // (scheme, grade, metric index, stat index) -> journal-level values
    let mut cells: BTreeMap<(&'static str, &str, usize, usize), Vec<T>> = BTreeMap::new();
    let mut unmatched_journals = 0;
    for (journal, members) in &journals {
        let Some((sjr, h)) = grades.grades.get(journal) else {
            unmatched_journals += 1;
            continue;
        };
        let a: Vec<T> = members.iter().map(|&i| asp[i]).collect();
        let c: Vec<T> = members
            .iter()
            .map(|&i| T::from_u32(ncit[i]).unwrap())
            .collect();
        for (m, stats) in [four_stats(&a), four_stats(&c)].into_iter().enumerate() {
            for (s, v) in stats.into_iter().enumerate() {
                for (scheme, grade) in [("sjr", sjr.as_str()), ("h", h.as_str())] {
                    cells.entry((scheme, grade, m, s)).or_default().push(v);
                }
            }
        }
    }

    let rows = cells
        .into_iter()
        .map(|((scheme, grade, m, s), vals)| GradeRow {
            scheme,
            grade: grade.to_string(),
            metric: ["asp", "ncit"][m],
            journal_stat: JOURNAL_STATS[s],
            n_journals: vals.len(),
            range_min: vals.iter().copied().fold(T::infinity(), T::min),
            range_max: vals.iter().copied().fold(T::neg_infinity(), T::max),
            mean: mean(&vals),
        })
        .collect();
    Ok(JournalAggregate {
        rows,
        unmatched_journals,
        articles_without_journal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_article_single_journal() {
        let mut grades = GradeTable::default();
        grades.insert(" Nature ", "Q1", "H1");
        let agg = journal_aggregate(&[0.5], &[0], &[Some("nature")], &grades).unwrap();
        assert_eq!(agg.rows.len(), 2 * 2 * 4);
        for r in agg.rows.iter().filter(|r| r.metric == "asp") {
            assert_eq!((r.range_min, r.range_max, r.mean), (0.5, 0.5, 0.5));
        }
        assert_eq!(agg.unmatched_journals, 0);
    }

    #[test]
    fn unmatched_and_missing_counted() {
        let grades = GradeTable::default();
        let ids = [Some("a"), Some("A "), None, Some("b")];
        let agg = journal_aggregate(&[1.0; 4], &[1; 4], &ids, &grades).unwrap();
        assert!(agg.rows.is_empty());
        assert_eq!(agg.unmatched_journals, 2);
        assert_eq!(agg.articles_without_journal, 1);
    }

    #[test]
    fn parse_grades() {
        let g = GradeTable::parse("journal\tsjr\th\nNature\tQ1\tH1\n".as_bytes()).unwrap();
        assert_eq!(g.get("NATURE"), Some(&("Q1".to_string(), "H1".to_string())));
    }
}
