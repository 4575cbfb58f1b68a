//! Square binary matrices and their rank over GF(2).

use alloc::vec::Vec;

/// Rows are bit masks: bit `j` of row `i` is entry `(i, j)`. At most 64 columns.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BinaryMatrix {
    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Self {
        assert!(cols <= 64, "at most 64 columns");
        let mask = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        assert!(rows.iter().all(|r| r & !mask == 0), "row wider than {cols} columns");
        BinaryMatrix { cols, rows }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_rows(n, alloc::vec![0; n])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| 1u64 << i).collect())
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.rows[row].count_ones() as usize
    }

    pub fn rank(&self) -> usize {
        gf2_rank(&self.rows)
    }
}

/// Rank over GF(2) by Gaussian elimination on bit-mask rows.
pub fn gf2_rank(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r >> bit & 1 == 1 {
                *r ^= p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        for n in [1, 5, 20, 64] {
            assert_eq!(BinaryMatrix::identity(n).rank(), n);
            assert_eq!(BinaryMatrix::zeros(n).rank(), 0);
        }
    }

    #[test]
    fn all_ones_minus_identity_parity() {
        // J - I is singular over GF(2) exactly when n is odd
        for n in 2..=12usize {
            let full = (1u64 << n) - 1;
            let rows: Vec<u64> = (0..n).map(|i| full ^ (1 << i)).collect();
            assert_eq!(gf2_rank(&rows) == n, n % 2 == 0, "n = {n}");
        }
    }

    #[test]
    fn dependent_rows() {
        assert_eq!(gf2_rank(&[0b011, 0b110, 0b101]), 2);
        assert_eq!(gf2_rank(&[0b011, 0b110, 0b100]), 3);
    }
}
