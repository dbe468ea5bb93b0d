//! Tame frieze patterns: diamond determinant validation, rotation into
//! purely periodic recurrence matrices, and an empirical superperiodicity
//! check on the resulting solution spaces.
//!
//! A frieze is finitely many periodic integer rows offset in a diamond
//! pattern, bounded above and below by rows of 1s. Rotating the diamond 45
//! degrees clockwise turns row `r` into the offset-`r` band of a matrix
//! whose diagonal is the top row; all checks here work on that rotated
//! array.

use thiserror::Error;

use crate::kernel::{self, KernelError};
use crate::recmat::{RecurrenceMatrix, RowPattern};
use crate::reduction::{self, ReductionError};
use crate::scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FriezeError {
    #[error("frieze shape: {0}")]
    Shape(String),
    /// The frieze fails a diamond determinant; run [`validate_tame`] for
    /// the location.
    #[error("not a tame frieze")]
    InvalidFrieze,
    #[error("window holds {got} entries but the period bound needs {needed}")]
    WindowTooShort { needed: i64, got: i64 },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A frieze in canonical alignment. `rows[r][m]` is the entry of the
/// rotated array on diagonal `r` at column `m`, read periodically.
#[derive(Debug, Clone, PartialEq)]
pub struct Frieze {
    k: usize,
    rows: Vec<Vec<Scalar>>,
}

impl Frieze {
    /// Build from rows as displayed, top to bottom, one period each. Row
    /// `r` sits half a step right of row `r - 1`, so its entry `t` lies on
    /// diagonal `r` at column `t - r/2` of the rotated array (wrapping
    /// around the period).
    pub fn from_rows(k: usize, rows: Vec<Vec<i64>>) -> Result<Self, FriezeError> {
        if k < 2 {
            return Err(FriezeError::Shape(format!("k must be at least 2, got {k}")));
        }
        if rows.len() < 2 {
            return Err(FriezeError::Shape("a frieze needs two bounding rows of 1s".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(FriezeError::Shape("rows must be nonempty".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(FriezeError::Shape("rows must all share one period".into()));
        }
        for edge in [0, rows.len() - 1] {
            if rows[edge].iter().any(|&v| v != 1) {
                return Err(FriezeError::Shape("bounding rows must consist of 1s".into()));
            }
        }
        let canon = rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                (0..n)
                    .map(|m| Scalar::from_integer(FieldKind::Rational, row[(m + r / 2) % n]))
                    .collect()
            })
            .collect();
        Ok(Frieze { k, rows: canon })
    }

    /// Parse a whitespace-separated text block, one period per line, top
    /// to bottom. Indentation is cosmetic: the half-step stagger follows
    /// row parity.
    pub fn parse_text(k: usize, src: &str) -> Result<Self, FriezeError> {
        let mut rows = Vec::new();
        for (idx, line) in src.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let v = tok.parse::<i64>().map_err(|_| {
                    FriezeError::Shape(format!("line {}: {tok:?} is not an integer", idx + 1))
                })?;
                row.push(v);
            }
            rows.push(row);
        }
        Self::from_rows(k, rows)
    }

    /// Parse the JSON form `{"k": 2, "rows": [[3, 2, ...], ...]}`, rows in
    /// the same convention as the text block.
    pub fn from_json(src: &str) -> Result<Self, FriezeError> {
        let v: serde_json::Value =
            serde_json::from_str(src).map_err(|e| FriezeError::Shape(format!("bad json: {e}")))?;
        let k = v
            .get("k")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| FriezeError::Shape("missing integer field \"k\"".into()))?;
        let rows_v = v
            .get("rows")
            .and_then(|x| x.as_array())
            .ok_or_else(|| FriezeError::Shape("missing array field \"rows\"".into()))?;
        let mut rows = Vec::new();
        for rv in rows_v {
            let arr = rv
                .as_array()
                .ok_or_else(|| FriezeError::Shape("rows must be arrays of integers".into()))?;
            let mut row = Vec::with_capacity(arr.len());
            for e in arr {
                let x = e
                    .as_i64()
                    .ok_or_else(|| FriezeError::Shape("entries must be integers".into()))?;
                row.push(x);
            }
            rows.push(row);
        }
        Self::from_rows(k as usize, rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of rows, bounding 1s included.
    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn period(&self) -> i64 {
        self.rows[0].len() as i64
    }

    /// Rotated-array entry on diagonal `row` at column `col`.
    fn rotated(&self, row: usize, col: i64) -> &Scalar {
        &self.rows[row][col.rem_euclid(self.period()) as usize]
    }
}

/// Outcome of the diamond determinant check.
#[derive(Debug, Clone, PartialEq)]
pub enum TameOutcome {
    Tame,
    /// First failing diamond: the `size x size` block of the rotated array
    /// whose top-left entry sits at `(row, col)` has determinant `det`.
    Broken { size: usize, row: i64, col: i64, det: Scalar },
}

impl TameOutcome {
    pub fn is_tame(&self) -> bool {
        matches!(self, TameOutcome::Tame)
    }
}

/// Check every diamond determinant over one period: `k x k` blocks must
/// have determinant 1 and `(k+1) x (k+1)` blocks determinant 0. A size-`j`
/// diamond is a contiguous square submatrix of the rotated array, so it
/// fits the band exactly when its diagonal offset lies in
/// `[j - 1, height - j]`; an offset range that comes out empty is
/// vacuously satisfied.
pub fn validate_tame(f: &Frieze) -> TameOutcome {
    let m = f.height() as i64;
    let n = f.period();
    for (j, want_one) in [(f.k() as i64, true), (f.k() as i64 + 1, false)] {
        for d0 in (j - 1)..=(m - j) {
            for b0 in 0..n {
                let block: Vec<Vec<Scalar>> = (0..j)
                    .map(|i| {
                        (0..j)
                            .map(|l| f.rotated((d0 + i - l) as usize, b0 + l).clone())
                            .collect()
                    })
                    .collect();
                let det = determinant(block);
                let ok = if want_one { det.is_one() } else { det.is_zero() };
                if !ok {
                    return TameOutcome::Broken {
                        size: j as usize,
                        row: b0 + d0,
                        col: b0,
                        det,
                    };
                }
            }
        }
    }
    TameOutcome::Tame
}

/// Exact determinant by Gaussian elimination.
fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let field = m[0][0].field();
    let mut det = Scalar::one(field);
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero(field);
        };
        if pr != col {
            m.swap(pr, col);
            det = det.neg();
        }
        let piv = m[col][col].clone();
        let inv = piv.inverse().expect("pivot nonzero");
        det = det.mul(&piv);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let lam = m[r][col].mul(&inv);
            for c in col..n {
                let v = m[r][c].sub(&lam.mul(&m[col][c]));
                m[r][c] = v;
            }
        }
    }
    det
}

/// Rotate a tame frieze into a purely periodic recurrence matrix: the top
/// row becomes the diagonal and row `d` the offset-`d` band. With
/// `alternating_sign`, offset `d` is scaled by `(-1)^d`; that is the
/// convention under which the solutions come out superperiodic.
pub fn frieze_to_recurrence(
    f: &Frieze,
    alternating_sign: bool,
) -> Result<RecurrenceMatrix, FriezeError> {
    if !validate_tame(f).is_tame() {
        return Err(FriezeError::InvalidFrieze);
    }
    let field = FieldKind::Rational;
    let n = f.period();
    let mut patterns = Vec::with_capacity(n as usize);
    for rho in 0..n {
        let mut pairs = Vec::new();
        for d in 0..f.height() as i64 {
            let v = f.rotated(d as usize, rho - d).clone();
            if v.is_zero() {
                continue;
            }
            let signed = if alternating_sign && d % 2 == 1 { v.neg() } else { v };
            pairs.push((d, signed));
        }
        patterns.push(RowPattern::new(field, pairs).expect("diagonal is one"));
    }
    Ok(RecurrenceMatrix::purely_periodic(field, patterns).expect("one pattern per residue"))
}

/// Find the smallest `n <= max_n` and sign `s` such that every kernel
/// basis column satisfies `x_{i+n} = (-1)^s x_i` across the window,
/// reducing the matrix first if needed. The window must hold at least
/// `3 * max_n` entries so every candidate period is checked against at
/// least two full shifts. A zero-dimensional kernel reports `(1, 0)`.
pub fn check_superperiodic(
    c: &RecurrenceMatrix,
    window: (i64, i64),
    max_n: i64,
) -> Result<Option<(i64, u8)>, FriezeError> {
    assert!(max_n >= 1, "the period bound must be positive");
    assert!(window.0 <= window.1, "empty window");
    let got = window.1 - window.0 + 1;
    let needed = 3 * max_n;
    if got < needed {
        return Err(FriezeError::WindowTooShort { needed, got });
    }
    let red = if c.is_reduced() {
        c.clone()
    } else {
        reduction::reduce(c, reduction::DEFAULT_FUEL)?
    };
    let basis = kernel::kernel_basis(&red, window.1, window)?;
    let (clo, chi) = basis.col_range();
    for n in 1..=max_n {
        's: for s in [0u8, 1] {
            for col in clo..=chi {
                for i in window.0..=window.1 - n {
                    let want = if s == 0 {
                        basis.get(i, col).clone()
                    } else {
                        basis.get(i, col).neg()
                    };
                    if *basis.get(i + n, col) != want {
                        continue 's;
                    }
                }
            }
            return Ok(Some((n, s)));
        }
    }
    Ok(None)
}
