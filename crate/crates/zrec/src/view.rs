//! Read-only views over bi-infinite matrices.
//!
//! Everything that can produce an entry at `(row, col)` implements
//! [`MatrixView`]; window extraction, products, and verification sweeps are
//! written against the trait so derived matrices never need materializing.

use crate::recmat::{MatrixError, PivotMatrix, RecurrenceMatrix, RowPattern};
use crate::scalar::{FieldKind, Scalar};

pub trait MatrixView {
    fn field(&self) -> FieldKind;

    fn entry(&self, row: i64, col: i64) -> Scalar;

    /// Inclusive column bounds outside which row `row` is zero, when a
    /// finite bound is known. Bounds need not be tight.
    fn row_bounds(&self, row: i64) -> Option<(i64, i64)>;

    /// Inclusive row bounds outside which column `col` is zero, when a
    /// finite bound is known.
    fn col_bounds(&self, col: i64) -> Option<(i64, i64)>;

    /// Contiguous slice of one column. Views with a recurrence structure
    /// override this with a single substitution pass.
    fn column_segment(&self, col: i64, rows: (i64, i64)) -> Vec<Scalar> {
        (rows.0..=rows.1).map(|a| self.entry(a, col)).collect()
    }
}

impl<T: MatrixView + ?Sized> MatrixView for &T {
    fn field(&self) -> FieldKind {
        (**self).field()
    }
    fn entry(&self, row: i64, col: i64) -> Scalar {
        (**self).entry(row, col)
    }
    fn row_bounds(&self, row: i64) -> Option<(i64, i64)> {
        (**self).row_bounds(row)
    }
    fn col_bounds(&self, col: i64) -> Option<(i64, i64)> {
        (**self).col_bounds(col)
    }
    fn column_segment(&self, col: i64, rows: (i64, i64)) -> Vec<Scalar> {
        (**self).column_segment(col, rows)
    }
}

impl MatrixView for RecurrenceMatrix {
    fn field(&self) -> FieldKind {
        RecurrenceMatrix::field(self)
    }
    fn entry(&self, row: i64, col: i64) -> Scalar {
        RecurrenceMatrix::entry(self, row, col)
    }
    fn row_bounds(&self, row: i64) -> Option<(i64, i64)> {
        Some((self.shape(row), row))
    }
    fn col_bounds(&self, col: i64) -> Option<(i64, i64)> {
        Some((col, col + self.band_width()))
    }
}

impl MatrixView for PivotMatrix {
    fn field(&self) -> FieldKind {
        self.base().field()
    }
    fn entry(&self, row: i64, col: i64) -> Scalar {
        PivotMatrix::entry(self, row, col)
    }
    fn row_bounds(&self, row: i64) -> Option<(i64, i64)> {
        Some((row, row + self.base().band_width()))
    }
    fn col_bounds(&self, col: i64) -> Option<(i64, i64)> {
        let s = self.base().shape(col);
        Some((s, s))
    }
}

/// The product CP of a matrix with its pivot matrix; upper unitriangular
/// exactly when the base is reduced.
#[derive(Debug, Clone)]
pub struct CpView {
    base: RecurrenceMatrix,
}

impl CpView {
    pub fn new(base: &RecurrenceMatrix) -> Self {
        CpView { base: base.clone() }
    }

    pub fn base(&self) -> &RecurrenceMatrix {
        &self.base
    }
}

impl MatrixView for CpView {
    fn field(&self) -> FieldKind {
        self.base.field()
    }
    fn entry(&self, row: i64, col: i64) -> Scalar {
        let s = self.base.shape(col);
        let c = self.base.entry(row, s);
        if c.is_zero() {
            return c;
        }
        let pivot = self.base.entry(col, s);
        c.mul(&pivot.inverse().expect("pivot entries are nonzero"))
    }
    fn row_bounds(&self, row: i64) -> Option<(i64, i64)> {
        let w = self.base.band_width();
        Some((row - w, row + w))
    }
    fn col_bounds(&self, col: i64) -> Option<(i64, i64)> {
        let s = self.base.shape(col);
        Some((s, s + self.base.band_width()))
    }
}

/// Lazy product of two views. Entries are computed through whichever factor
/// offers a finite summation range: the left factor's row support or the
/// right factor's column support.
#[derive(Debug, Clone)]
pub struct ProductView<A, B> {
    left: A,
    right: B,
}

impl<A: MatrixView, B: MatrixView> ProductView<A, B> {
    pub fn new(left: A, right: B) -> Self {
        assert_eq!(left.field(), right.field(), "product factors over one field");
        ProductView { left, right }
    }
}

impl<A: MatrixView, B: MatrixView> MatrixView for ProductView<A, B> {
    fn field(&self) -> FieldKind {
        self.left.field()
    }

    fn entry(&self, row: i64, col: i64) -> Scalar {
        let range = self
            .left
            .row_bounds(row)
            .or_else(|| self.right.col_bounds(col))
            .expect("a product needs one banded factor");
        let mut acc = Scalar::zero(self.field());
        for c in range.0..=range.1 {
            let l = self.left.entry(row, c);
            if l.is_zero() {
                continue;
            }
            let r = self.right.entry(c, col);
            if r.is_zero() {
                continue;
            }
            acc = acc.add(&l.mul(&r));
        }
        acc
    }

    fn row_bounds(&self, row: i64) -> Option<(i64, i64)> {
        let (lo, hi) = self.left.row_bounds(row)?;
        let mut out: Option<(i64, i64)> = None;
        for c in lo..=hi {
            let (blo, bhi) = self.right.row_bounds(c)?;
            out = Some(match out {
                None => (blo, bhi),
                Some((a, b)) => (a.min(blo), b.max(bhi)),
            });
        }
        out
    }

    fn col_bounds(&self, col: i64) -> Option<(i64, i64)> {
        let (lo, hi) = self.right.col_bounds(col)?;
        let mut out: Option<(i64, i64)> = None;
        for c in lo..=hi {
            let (alo, ahi) = self.left.col_bounds(c)?;
            out = Some(match out {
                None => (alo, ahi),
                Some((a, b)) => (a.min(alo), b.max(ahi)),
            });
        }
        out
    }
}

/// Multiply two finitely-described matrices and re-describe the product
/// finitely: tails become periodic with the least common period, and the
/// middle widens to cover every row whose value mixes tail regimes.
pub fn compose(a: &RecurrenceMatrix, b: &RecurrenceMatrix) -> Result<RecurrenceMatrix, MatrixError> {
    if a.field() != b.field() {
        return Err(MatrixError::FieldMismatch { expected: a.field(), found: b.field() });
    }
    let field = a.field();
    let view = ProductView::new(a, b);
    let wa = a.band_width();
    let wb = b.band_width();
    let pl = num_integer::lcm(a.left_period(), b.left_period());
    let pr = num_integer::lcm(a.right_period(), b.right_period());
    let anchor = a.anchor_left().min(b.anchor_left());
    let last = a.anchor_right().max(b.anchor_right() + wa);
    let product_row = |i: i64| -> Result<RowPattern, MatrixError> {
        let mut pairs = Vec::new();
        for d in 0..=wa + wb {
            let v = view.entry(i, i - d);
            if d == 0 && !v.is_one() {
                return Err(MatrixError::NonUnitriangular(i));
            }
            if !v.is_zero() {
                pairs.push((d, v));
            }
        }
        RowPattern::new(field, pairs)
    };
    let mut left = vec![RowPattern::identity(field); pl as usize];
    for i in anchor - pl..anchor {
        left[i.rem_euclid(pl) as usize] = product_row(i)?;
    }
    let mut middle = Vec::new();
    for i in anchor..=last {
        middle.push(product_row(i)?);
    }
    let mut right = vec![RowPattern::identity(field); pr as usize];
    for i in last + 1..=last + pr {
        right[i.rem_euclid(pr) as usize] = product_row(i)?;
    }
    Ok(RecurrenceMatrix::new(field, left, anchor, middle, right)?.canonical())
}
