//! Binary graph snapshot.
//!
//! All integers are little-endian. Layout:
//!
//! ```text
//! magic        8 bytes  "ASPGRAPH"
//! version      u32      currently 1
//! n            u64      nodes
//! m            u64      edges
//! n_subjects   u64      distinct subject labels
//! n_memberships u64     total node-subject entries
//! n_journals   u64      distinct journal labels
//! years        n x i32
//! out_offsets  (n+1) x u64
//! out_targets  m x u32
//! subj_offsets (n+1) x u64
//! subj_ids     n_memberships x u32
//! journals     n x u32  (0xFFFFFFFF = none)
//! ids          n x string
//! subjects     n_subjects x string
//! journal_names n_journals x string
//! ```
//!
//! Strings are a `u32` byte length followed by UTF-8 bytes. The incoming
//! adjacency is rebuilt on load.

use std::io::{Read, Write};
use std::sync::Arc;

use super::{CitationGraph, Csr, NodeAttributes};
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"ASPGRAPH";
pub const SNAPSHOT_VERSION: u32 = 1;
const NO_JOURNAL: u32 = u32::MAX;

struct Sink<W> {
    inner: W,
}

impl<W: Write> Sink<W> {
    fn bytes(&mut self, b: &[u8]) -> std::io::Result<()> {
        self.inner.write_all(b)
    }
    fn u32(&mut self, v: u32) -> std::io::Result<()> {
        self.bytes(&v.to_le_bytes())
    }
    fn u64(&mut self, v: u64) -> std::io::Result<()> {
        self.bytes(&v.to_le_bytes())
    }
    fn string(&mut self, s: &str) -> std::io::Result<()> {
        self.u32(s.len() as u32)?;
        self.bytes(s.as_bytes())
    }
    fn offsets(&mut self, offsets: &[usize]) -> std::io::Result<()> {
        offsets.iter().try_for_each(|&o| self.u64(o as u64))
    }
}

struct Source<R> {
    inner: R,
}

impl<R: Read> Source<R> {
    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| Error::Snapshot(format!("truncated: {e}")))?;
        Ok(buf)
    }
    fn u32(&mut self) -> Result<u32> {
        self.array().map(u32::from_le_bytes)
    }
    fn u64(&mut self) -> Result<u64> {
        self.array().map(u64::from_le_bytes)
    }
    fn len(&mut self, limit: u64) -> Result<usize> {
        let v = self.u64()?;
        if v > limit {
            return Err(Error::Snapshot(format!("count {v} exceeds limit")));
        }
        Ok(v as usize)
    }
    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let mut buf = vec![0u8; len];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| Error::Snapshot(format!("truncated: {e}")))?;
        String::from_utf8(buf).map_err(|_| Error::Snapshot("invalid UTF-8".into()))
    }
    fn offsets(&mut self, rows: usize, nnz: usize) -> Result<Vec<usize>> {
        let offsets = (0..=rows)
            .map(|_| self.u64().map(|v| v as usize))
            .collect::<Result<Vec<_>>>()?;
        let monotone = offsets.windows(2).all(|w| w[0] <= w[1]);
        if offsets[0] != 0 || offsets[rows] != nnz || !monotone {
            return Err(Error::Snapshot("inconsistent offsets".into()));
        }
        Ok(offsets)
    }
    fn indices(&mut self, count: usize, bound: usize) -> Result<Vec<u32>> {
        (0..count)
            .map(|_| {
                let v = self.u32()?;
                if v as usize >= bound {
                    return Err(Error::Snapshot(format!("index {v} out of range")));
                }
                Ok(v)
            })
            .collect()
    }
}

pub fn write_snapshot<W: Write>(graph: &CitationGraph, writer: W) -> std::io::Result<()> {
    let a = graph.attributes();
    let mut s = Sink {
        inner: std::io::BufWriter::new(writer),
    };
    s.bytes(SNAPSHOT_MAGIC)?;
    s.u32(SNAPSHOT_VERSION)?;
    s.u64(graph.n() as u64)?;
    s.u64(graph.n_edges() as u64)?;
    s.u64(a.subject_names.len() as u64)?;
    s.u64(a.subjects.nnz() as u64)?;
    s.u64(a.journal_names.len() as u64)?;
    for &y in &a.years {
        s.bytes(&y.to_le_bytes())?;
    }
    s.offsets(graph.out_csr().offsets())?;
    graph.out_csr().targets().iter().try_for_each(|&t| s.u32(t))?;
    s.offsets(a.subjects.offsets())?;
    a.subjects.targets().iter().try_for_each(|&t| s.u32(t))?;
    for j in &a.journals {
        s.u32(j.unwrap_or(NO_JOURNAL))?;
    }
    for name in a.ids.iter().chain(&a.subject_names).chain(&a.journal_names) {
        s.string(name)?;
    }
    s.inner.flush()
}

pub fn read_snapshot<R: Read>(reader: R) -> Result<CitationGraph> {
    let mut src = Source {
        inner: std::io::BufReader::new(reader),
    };
    if &src.array::<8>()? != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = src.u32()?;
    if version != SNAPSHOT_VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let limit = u32::MAX as u64;
    let n = src.len(limit)?;
    let m = src.len(1 << 40)?;
    let n_subjects = src.len(limit)?;
    let n_memberships = src.len(1 << 40)?;
    let n_journals = src.len(limit)?;

    let years = (0..n)
        .map(|_| src.array().map(i32::from_le_bytes))
        .collect::<Result<Vec<_>>>()?;
    let out_offsets = src.offsets(n, m)?;
    let out_targets = src.indices(m, n)?;
    let subj_offsets = src.offsets(n, n_memberships)?;
    let subj_ids = src.indices(n_memberships, n_subjects)?;
    let journals = (0..n)
        .map(|_| match src.u32()? {
            NO_JOURNAL => Ok(None),
            j if (j as usize) < n_journals => Ok(Some(j)),
            j => Err(Error::Snapshot(format!("journal {j} out of range"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut strings = |count: usize| (0..count).map(|_| src.string()).collect::<Result<Vec<_>>>();
    let ids = strings(n)?;
    let subject_names = strings(n_subjects)?;
    let journal_names = strings(n_journals)?;
    if ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Snapshot("node ids not strictly sorted".into()));
    }

    let attrs = NodeAttributes {
        ids,
        years,
        subject_names,
        subjects: Csr::from_parts(subj_offsets, subj_ids),
        journal_names,
        journals,
    };
    Ok(CitationGraph::from_parts(
        Arc::new(attrs),
        Csr::from_parts(out_offsets, out_targets),
    ))
}
