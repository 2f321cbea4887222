use std::collections::HashMap;
use std::io::Read;

use super::{ArticleRecord, RawEdge, Table, Value};
use crate::error::{Error, Result};

/// What to do with a row that fails to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BadRowPolicy {
    /// Abort with the first row error.
    #[default]
    Fail,
    /// Skip the row and keep its error in [`ParsedArticles::rejected`].
    Skip,
}

/// Layout and validation settings for article tables.
#[derive(Debug, Clone)]
pub struct ArticleFormat {
    pub delimiter: u8,
    /// Inclusive envelope for the year column.
    pub year_range: Option<(i32, i32)>,
    pub bad_rows: BadRowPolicy,
}

impl Default for ArticleFormat {
    fn default() -> Self {
        ArticleFormat {
            delimiter: b'\t',
            year_range: None,
            bad_rows: BadRowPolicy::Fail,
        }
    }
}

impl ArticleFormat {
    pub fn with_delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }
}

#[derive(Debug, Default)]
pub struct ParsedArticles {
    pub records: Vec<ArticleRecord>,
    /// Row-level failures, only populated under [`BadRowPolicy::Skip`].
    pub rejected: Vec<Error>,
}

#[derive(Default)]
struct Columns {
    id: Option<usize>,
    year: Option<usize>,
    subjects: Option<usize>,
    journal: Option<usize>,
    authors: Option<usize>,
    refs: Option<usize>,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let mut cols = Columns::default();
        for (idx, name) in header.iter().enumerate() {
            let slot = match name.trim().to_ascii_lowercase().as_str() {
                "id" | "article_id" => &mut cols.id,
                "year" => &mut cols.year,
                "subjects" | "subject" => &mut cols.subjects,
                "journal" | "journal_id" => &mut cols.journal,
                "n_authors" | "n_coauthors" => &mut cols.authors,
                "n_refs" | "n_references" => &mut cols.refs,
                _ => continue,
            };
            slot.get_or_insert(idx);
        }
        if cols.id.is_none() {
            return Err(Error::MissingColumn("id"));
        }
        if cols.year.is_none() {
            return Err(Error::MissingColumn("year"));
        }
        Ok(cols)
    }
}

fn row_error(line: u64, message: impl Into<String>) -> Error {
    Error::Row {
        line,
        message: message.into(),
    }
}

fn parse_count(raw: Option<&str>, name: &str, line: u64) -> Result<u32> {
    match raw.map(str::trim) {
        None | Some("") => Ok(0),
        Some(s) => s
            .parse()
            .map_err(|_| row_error(line, format!("{name} is not a non-negative integer: {s:?}"))),
    }
}

fn parse_row(
    row: &csv::StringRecord,
    cols: &Columns,
    arity: usize,
    format: &ArticleFormat,
    line: u64,
) -> Result<ArticleRecord> {
    if row.len() != arity {
        return Err(row_error(
            line,
            format!("expected {arity} fields, found {}", row.len()),
        ));
    }
    let field = |idx: Option<usize>| idx.and_then(|i| row.get(i));

    let article_id = field(cols.id).unwrap_or_default().to_string();
    if article_id.is_empty() {
        return Err(row_error(line, "empty article id"));
    }
    let year_raw = field(cols.year).unwrap_or_default().trim();
    let year: i32 = year_raw
        .parse()
        .map_err(|_| row_error(line, format!("year is not an integer: {year_raw:?}")))?;
    if let Some((lo, hi)) = format.year_range {
        if year < lo || year > hi {
            return Err(row_error(line, format!("year {year} outside [{lo}, {hi}]")));
        }
    }
    let subjects = field(cols.subjects)
        .map(|s| {
            s.split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect()
        })
        .unwrap_or_default();
    let journal_id = field(cols.journal)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from);

    Ok(ArticleRecord {
        article_id,
        year,
        subjects,
        journal_id,
        n_coauthors: parse_count(field(cols.authors), "n_authors", line)?,
        n_references_declared: parse_count(field(cols.refs), "n_refs", line)?,
    })
}

/// Reads an article table with a header row.
///
/// Recognized columns are `id`, `year`, `subjects` (`;`-separated),
/// `journal`, `n_authors` and `n_refs`; only `id` and `year` are required and
/// any other column is ignored. Duplicate ids are always fatal.
pub fn parse_articles<R: Read>(reader: R, format: &ArticleFormat) -> Result<ParsedArticles> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let cols = Columns::from_header(&header)?;
    let arity = header.len();

    let mut out = ParsedArticles::default();
    let mut seen: HashMap<String, u64> = HashMap::new();
    let mut row = csv::StringRecord::new();
    loop {
        let more = rdr.read_record(&mut row).map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            row_error(line, e.to_string())
        })?;
        if !more {
            break;
        }
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row, &cols, arity, format, line) {
            Ok(rec) => {
                if let Some(&first_line) = seen.get(&rec.article_id) {
                    return Err(Error::DuplicateId {
                        id: rec.article_id,
                        first_line,
                        line,
                    });
                }
                seen.insert(rec.article_id.clone(), line);
                out.records.push(rec);
            }
            Err(e) => match format.bad_rows {
                BadRowPolicy::Fail => return Err(e),
                BadRowPolicy::Skip => {
                    log::warn!("skipping article row: {e}");
                    out.rejected.push(e);
                }
            },
        }
    }
    Ok(out)
}

/// Reads a headerless two-column `citing<TAB>cited` edge list.
///
/// Edges come back in file order; duplicates are kept.
pub fn parse_edges<R: Read>(reader: R) -> Result<Vec<RawEdge>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .from_reader(reader);
    let mut edges = Vec::new();
    let mut row = csv::StringRecord::new();
    while rdr.read_record(&mut row)? {
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != 2 {
            return Err(row_error(
                line,
                format!("expected 2 fields, found {}", row.len()),
            ));
        }
        let (citing, cited) = (row[0].trim(), row[1].trim());
        if citing.is_empty() || cited.is_empty() {
            return Err(row_error(line, "empty article id in edge"));
        }
        edges.push(RawEdge::new(citing, cited));
    }
    Ok(edges)
}

/// Article records laid out in the article-file column order.
pub fn articles_table(records: &[ArticleRecord]) -> Table {
    let mut table = Table::new(["id", "year", "subjects", "journal", "n_authors", "n_refs"]);
    for r in records {
        table.push_unchecked(vec![
            Value::from(r.article_id.as_str()),
            Value::Int(r.year as i64),
            Value::Text(r.subjects.join(";")),
            Value::Text(r.journal_id.clone().unwrap_or_default()),
            Value::Int(r.n_coauthors as i64),
            Value::Int(r.n_references_declared as i64),
        ]);
    }
    table
}

pub fn edges_table(edges: &[RawEdge]) -> Table {
    let mut table = Table::new(["citing_id", "cited_id"]);
    for e in edges {
        table.push_unchecked(vec![
            Value::from(e.citing_id.as_str()),
            Value::from(e.cited_id.as_str()),
        ]);
    }
    table
}
