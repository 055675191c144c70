use std::fmt;

use crate::error::{Error, Result};

/// Boolean connectivity between a stage's source nodes (rows) and target
/// nodes (columns). Row `α` is a bit mask over columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceTargetMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl SourceTargetMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64, "at most 64 target columns");
        SourceTargetMatrix {
            cols,
            rows: vec![0; rows],
        }
    }

    /// Builds a matrix from 0/1 rows. Every row must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (a, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged matrix");
            for (b, &bit) in row.iter().enumerate() {
                assert!(bit <= 1, "entries are 0 or 1");
                m.set(a, b, bit == 1);
            }
        }
        m
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    /// Entry `(α, β)`, both 0-based.
    pub fn get(&self, alpha: usize, beta: usize) -> bool {
        assert!(beta < self.cols);
        self.rows[alpha] >> beta & 1 == 1
    }

    pub fn set(&mut self, alpha: usize, beta: usize, value: bool) {
        assert!(beta < self.cols);
        if value {
            self.rows[alpha] |= 1 << beta;
        } else {
            self.rows[alpha] &= !(1 << beta);
        }
    }

    /// Row `α` as a mask over columns.
    pub fn row_mask(&self, alpha: usize) -> u64 {
        self.rows[alpha]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.row_count())
            .map(|a| (0..self.cols).map(|b| self.get(a, b) as u8).collect())
            .collect()
    }
}

impl fmt::Display for SourceTargetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(u8::to_string).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        if rows.len() == 1 {
            f.write_str(&rows[0])
        } else {
            write!(f, "[{}]", rows.join(", "))
        }
    }
}

/// Boolean max-min product: entry `(α, β)` is 1 iff some `h` has
/// `a[α][h] = b[h][β] = 1`.
pub fn stm_convolve(
    a: &SourceTargetMatrix,
    b: &SourceTargetMatrix,
) -> Result<SourceTargetMatrix> {
    if a.col_count() != b.row_count() {
        return Err(Error::DimensionMismatch {
            left_cols: a.col_count(),
            right_rows: b.row_count(),
        });
    }
    let rows = a
        .rows
        .iter()
        .map(|&mask| {
            let mut out = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let h = rest.trailing_zeros() as usize;
                out |= b.rows[h];
                rest &= rest - 1;
            }
            out
        })
        .collect();
    Ok(SourceTargetMatrix {
        cols: b.cols,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> SourceTargetMatrix {
        SourceTargetMatrix::from_rows(rows)
    }

    #[test]
    fn row_times_square() {
        let r10 = m(&[&[1, 0]]);
        assert_eq!(stm_convolve(&r10, &m(&[&[1, 0], &[1, 0]])).unwrap(), r10);
        assert!(stm_convolve(&r10, &m(&[&[0, 0], &[1, 1]])).unwrap().is_zero());
        assert_eq!(
            stm_convolve(&m(&[&[1, 1]]), &m(&[&[0, 1], &[1, 0]])).unwrap(),
            m(&[&[1, 1]])
        );
    }

    #[test]
    fn dimension_mismatch() {
        let err = stm_convolve(&m(&[&[1, 0, 1]]), &m(&[&[1], &[1]])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                left_cols: 3,
                right_rows: 2
            }
        );
    }

    #[test]
    fn display() {
        assert_eq!(m(&[&[1, 0]]).to_string(), "[1, 0]");
        assert_eq!(m(&[&[0, 0], &[1, 0]]).to_string(), "[[0, 0], [1, 0]]");
        assert_eq!(m(&[&[1], &[0]]).to_string(), "[[1], [0]]");
    }
}
