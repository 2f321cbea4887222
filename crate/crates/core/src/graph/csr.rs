/// Compressed sparse rows of `u32` column indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    pub(crate) fn from_parts(offsets: Vec<usize>, targets: Vec<u32>) -> Self {
        debug_assert_eq!(*offsets.last().unwrap_or(&0), targets.len());
        Csr { offsets, targets }
    }

    /// Builds rows from `(row, col)` pairs already sorted by `(row, col)`.
    pub(crate) fn from_sorted_pairs(n_rows: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; n_rows + 1];
        for &(r, _) in pairs {
            offsets[r as usize + 1] += 1;
        }
        for i in 0..n_rows {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, c)| c).collect();
        Csr { offsets, targets }
    }

    /// Transpose by counting sort; rows of the result are sorted.
    pub(crate) fn transpose(&self, n_cols: usize) -> Self {
        let mut offsets = vec![0usize; n_cols + 1];
        for &c in &self.targets {
            offsets[c as usize + 1] += 1;
        }
        for i in 0..n_cols {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; self.targets.len()];
        for r in 0..self.n_rows() {
            for &c in self.row(r) {
                let slot = &mut cursor[c as usize];
                targets[*slot] = r as u32;
                *slot += 1;
            }
        }
        Csr { offsets, targets }
    }

    pub fn n_rows(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn nnz(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.targets[self.offsets[r]..self.offsets[r + 1]]
    }

    #[inline]
    pub fn row_len(&self, r: usize) -> usize {
        self.offsets[r + 1] - self.offsets[r]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    /// All `(row, col)` pairs in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n_rows()).flat_map(move |r| self.row(r).iter().map(move |&c| (r as u32, c)))
    }
}
