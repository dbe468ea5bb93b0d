//! Independent brute-force checks: dense exact linear algebra over the
//! same scalar type, used to cross-validate the structural algorithms.
//!
//! Everything here favors obviousness over speed; windows in tests are
//! small enough that plain Gaussian elimination with exact arithmetic is
//! instant.

use crate::recmat::RecurrenceMatrix;
use crate::scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("windowed nullspace did not stabilize on [{0}, {1}]")]
    NoStabilization(i64, i64),
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
fn rref(mut m: Vec<Vec<Scalar>>, field: FieldKind) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("pivot nonzero");
        for j in c..ncols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                let t = m[r][j].mul(&f);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let _ = field;
    (m, pivots)
}

pub fn rank(rows: Vec<Vec<Scalar>>, field: FieldKind) -> usize {
    rref(rows, field).1.len()
}

/// Determinant of a square matrix by fraction-exact forward elimination.
pub fn det(mut m: Vec<Vec<Scalar>>, field: FieldKind) -> Scalar {
    let n = m.len();
    for row in &m {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    let mut sign_flip = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Scalar::zero(field);
        };
        if p != c {
            m.swap(c, p);
            sign_flip = !sign_flip;
        }
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].checked_div(&m[c][c]).expect("pivot nonzero");
            for j in c..n {
                let t = m[c][j].mul(&f);
                m[i][j] = m[i][j].sub(&t);
            }
        }
    }
    let mut d = Scalar::one(field);
    for (i, row) in m.iter().enumerate() {
        d = d.mul(&row[i]);
    }
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

/// Basis of `{x : rows * x = 0}` with `x` of length `ncols`.
pub fn nullspace(rows: Vec<Vec<Scalar>>, ncols: usize, field: FieldKind) -> Vec<Vec<Scalar>> {
    let (m, pivots) = rref(rows, field);
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = vec![Scalar::zero(field); ncols];
        v[f] = Scalar::one(field);
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = m[i][f].neg();
        }
        basis.push(v);
    }
    basis
}

/// Canonical basis of the span of `vectors`: the nonzero rows of the
/// reduced row echelon form, unique per subspace.
pub fn canonical_basis(vectors: Vec<Vec<Scalar>>, field: FieldKind) -> Vec<Vec<Scalar>> {
    let (m, pivots) = rref(vectors, field);
    m.into_iter().take(pivots.len()).collect()
}

pub fn subspace_eq(a: Vec<Vec<Scalar>>, b: Vec<Vec<Scalar>>, field: FieldKind) -> bool {
    canonical_basis(a, field) == canonical_basis(b, field)
}

/// One solution of `mat * x = rhs`, or None when inconsistent.
pub fn solve(
    mat: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    field: FieldKind,
) -> Option<Vec<Scalar>> {
    let ncols = mat.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Scalar>> = mat
        .into_iter()
        .zip(rhs)
        .map(|(mut row, b)| {
            row.push(b);
            row
        })
        .collect();
    let (m, pivots) = rref(aug, field);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(field); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][ncols].clone();
    }
    Some(x)
}

fn rows_supported_in(
    c: &RecurrenceMatrix,
    lo: i64,
    hi: i64,
) -> Vec<Vec<Scalar>> {
    (lo..=hi)
        .filter(|&r| c.shape(r) >= lo)
        .map(|r| (lo..=hi).map(|col| c.entry(r, col)).collect())
        .collect()
}

/// Restriction of the full solution space to the window `[a, b]`, computed
/// by brute force: widen the constraint strip leftward until the projected
/// nullspace stops changing. Returns the canonical basis of the projection.
pub fn windowed_nullspace(
    c: &RecurrenceMatrix,
    window: (i64, i64),
) -> Result<Vec<Vec<Scalar>>, OracleError> {
    let (a, b) = window;
    assert!(a <= b, "window must be nonempty");
    let field = c.field();
    let mut margin =
        (c.band_width() + c.left_period().max(c.right_period()) + 1).max(2);
    let mut prev: Option<Vec<Vec<Scalar>>> = None;
    for _ in 0..16 {
        let lo = a - margin;
        let rows = rows_supported_in(c, lo, b);
        let null = nullspace(rows, (b - lo + 1) as usize, field);
        let projected: Vec<Vec<Scalar>> =
            null.into_iter().map(|v| v[(a - lo) as usize..].to_vec()).collect();
        let canon = canonical_basis(projected, field);
        if prev.as_ref() == Some(&canon) {
            return Ok(canon);
        }
        prev = Some(canon);
        margin *= 2;
    }
    Err(OracleError::NoStabilization(a, b))
}

/// Adjugate entry by its determinant formula: the minor on rows
/// `[b+1, a]` and columns `[b, a-1]`, signed by parity of `a + b`.
pub fn det_minor_adjugate(c: &RecurrenceMatrix, a: i64, b: i64) -> Scalar {
    let field = c.field();
    if a < b {
        return Scalar::zero(field);
    }
    if a == b {
        return Scalar::one(field);
    }
    let minor: Vec<Vec<Scalar>> = (b + 1..=a)
        .map(|i| (b..a).map(|j| c.entry(i, j)).collect())
        .collect();
    let d = det(minor, field);
    if (a + b).rem_euclid(2) == 0 {
        d
    } else {
        d.neg()
    }
}

/// Dimension of the solutions of `c` on the window, by actual rank
/// computation over the rows fully supported inside. Windows with `a > b`
/// take the conventional value `b - a + 1`.
pub fn window_solution_dim(c: &RecurrenceMatrix, window: (i64, i64)) -> i64 {
    let (a, b) = window;
    if a > b {
        return b - a + 1;
    }
    let rows = rows_supported_in(c, a, b);
    (b - a + 1) - rank(rows, c.field()) as i64
}

/// Same dimension count for an explicit finite constraint list: only the
/// constraints whose support lies inside the window apply.
pub fn constraint_solution_dim(
    constraints: &[Vec<(i64, Scalar)>],
    window: (i64, i64),
    field: FieldKind,
) -> i64 {
    let (a, b) = window;
    if a > b {
        return b - a + 1;
    }
    let rows: Vec<Vec<Scalar>> = constraints
        .iter()
        .filter(|row| row.iter().all(|&(i, _)| i >= a && i <= b))
        .map(|row| {
            let mut dense = vec![Scalar::zero(field); (b - a + 1) as usize];
            for (i, v) in row {
                dense[(i - a) as usize] = v.clone();
            }
            dense
        })
        .collect();
    (b - a + 1) - rank(rows, field) as i64
}
