//! Dense rectangular extracts of a matrix view, with CSV and JSON export.

use crate::scalar::{FieldKind, Scalar};
use crate::view::MatrixView;
use serde::Serialize;

/// A fully materialized `[rows.0, rows.1] x [cols.0, cols.1]` block.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseWindow {
    field: FieldKind,
    rows: (i64, i64),
    cols: (i64, i64),
    /// Row-major, `(rows.1-rows.0+1) * (cols.1-cols.0+1)` entries.
    data: Vec<Scalar>,
}

impl DenseWindow {
    pub fn from_columns(
        field: FieldKind,
        rows: (i64, i64),
        cols: (i64, i64),
        columns: Vec<Vec<Scalar>>,
    ) -> Self {
        // An empty column range (cols.1 == cols.0 - 1) is allowed: a kernel
        // basis can have zero columns.
        assert!(rows.0 <= rows.1 && cols.1 >= cols.0 - 1, "bad window bounds");
        let nr = (rows.1 - rows.0 + 1) as usize;
        let nc = (cols.1 - cols.0 + 1) as usize;
        assert_eq!(columns.len(), nc);
        let mut data = Vec::with_capacity(nr * nc);
        for r in 0..nr {
            for col in &columns {
                assert_eq!(col.len(), nr);
                data.push(col[r].clone());
            }
        }
        DenseWindow { field, rows, cols, data }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn row_range(&self) -> (i64, i64) {
        self.rows
    }

    pub fn col_range(&self) -> (i64, i64) {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        (self.rows.1 - self.rows.0 + 1) as usize
    }

    pub fn num_cols(&self) -> usize {
        (self.cols.1 - self.cols.0 + 1) as usize
    }

    pub fn get(&self, row: i64, col: i64) -> &Scalar {
        assert!(
            row >= self.rows.0 && row <= self.rows.1 && col >= self.cols.0 && col <= self.cols.1,
            "({row},{col}) outside window"
        );
        let r = (row - self.rows.0) as usize;
        let c = (col - self.cols.0) as usize;
        &self.data[r * self.num_cols() + c]
    }

    pub fn row_slice(&self, row: i64) -> &[Scalar] {
        let r = (row - self.rows.0) as usize;
        let nc = self.num_cols();
        &self.data[r * nc..(r + 1) * nc]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// True when the block agrees with the identity matrix on its footprint.
    pub fn is_identity_block(&self) -> bool {
        (self.rows.0..=self.rows.1).all(|a| {
            (self.cols.0..=self.cols.1).all(|b| {
                let e = self.get(a, b);
                if a == b {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Header row and column of indices, entries as exact literals.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("row\\col");
        for b in self.cols.0..=self.cols.1 {
            out.push(',');
            out.push_str(&b.to_string());
        }
        out.push('\n');
        for a in self.rows.0..=self.rows.1 {
            out.push_str(&a.to_string());
            for b in self.cols.0..=self.cols.1 {
                out.push(',');
                out.push_str(&self.get(a, b).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct WindowJson<'a> {
            rows: [i64; 2],
            cols: [i64; 2],
            entries: Vec<Vec<String>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            modulus: Option<&'a u64>,
        }
        let modulus = match &self.field {
            FieldKind::Rational => None,
            FieldKind::Prime(p) => Some(p),
        };
        let entries = (self.rows.0..=self.rows.1)
            .map(|a| self.row_slice(a).iter().map(Scalar::to_string).collect())
            .collect();
        let json = WindowJson {
            rows: [self.rows.0, self.rows.1],
            cols: [self.cols.0, self.cols.1],
            entries,
            modulus,
        };
        serde_json::to_string(&json).expect("window serializes")
    }
}

/// Materialize a window, filling columns through the rayon pool when the
/// `parallel` feature is enabled.
pub fn dense_window<V: MatrixView + Sync>(
    view: &V,
    rows: (i64, i64),
    cols: (i64, i64),
) -> DenseWindow {
    let columns = crate::par::map_vec((cols.0..=cols.1).collect(), |b| {
        view.column_segment(b, rows)
    });
    DenseWindow::from_columns(view.field(), rows, cols, columns)
}

/// Sequential window fill regardless of enabled features; the benchmark
/// baseline and the fallback for single-threaded callers.
pub fn dense_window_seq<V: MatrixView>(
    view: &V,
    rows: (i64, i64),
    cols: (i64, i64),
) -> DenseWindow {
    let columns = (cols.0..=cols.1).map(|b| view.column_segment(b, rows)).collect();
    DenseWindow::from_columns(view.field(), rows, cols, columns)
}
