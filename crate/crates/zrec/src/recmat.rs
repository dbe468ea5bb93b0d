//! Bi-infinite lower unitriangular matrices with finitely many nonzero
//! entries per row, described by eventually-periodic row patterns.
//!
//! A matrix is stored as a left periodic tail, an explicit block of middle
//! rows, and a right periodic tail. Tail patterns are pinned to absolute
//! residues: row `a` of the left tail uses pattern `a mod p` (mathematical
//! modulus), so shifting the seam never relabels patterns.

use crate::scalar::{FieldKind, Scalar, ScalarError};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum MatrixError {
    #[error("row pattern must carry coefficient 1 at offset 0")]
    MissingDiagonal,
    #[error("row pattern offset {0} is negative")]
    NegativeOffset(i64),
    #[error("row pattern stores an explicit zero at offset {0}")]
    ZeroCoefficient(i64),
    #[error("periodic tail must contain at least one row pattern")]
    EmptyTail,
    #[error("pattern field {found} does not match matrix field {expected}")]
    FieldMismatch { expected: FieldKind, found: FieldKind },
    #[error("product is not lower unitriangular at row {0}")]
    NonUnitriangular(i64),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

/// One row, keyed by offset `d >= 0`: the coefficient at offset `d` applies
/// to column `rowIndex - d`. Offset 0 is always present with coefficient 1;
/// stored coefficients are nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowPattern {
    field: FieldKind,
    coeffs: BTreeMap<i64, Scalar>,
}

impl RowPattern {
    pub fn new(
        field: FieldKind,
        pairs: impl IntoIterator<Item = (i64, Scalar)>,
    ) -> Result<Self, MatrixError> {
        let mut coeffs = BTreeMap::new();
        for (d, c) in pairs {
            if d < 0 {
                return Err(MatrixError::NegativeOffset(d));
            }
            if c.field() != field {
                return Err(MatrixError::FieldMismatch { expected: field, found: c.field() });
            }
            if c.is_zero() {
                return Err(MatrixError::ZeroCoefficient(d));
            }
            coeffs.insert(d, c);
        }
        match coeffs.get(&0) {
            Some(c) if c.is_one() => {}
            _ => return Err(MatrixError::MissingDiagonal),
        }
        Ok(RowPattern { field, coeffs })
    }

    /// The identity row `x_i = 0`, i.e. just the diagonal 1.
    pub fn identity(field: FieldKind) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, Scalar::one(field));
        RowPattern { field, coeffs }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_integers(field: FieldKind, pairs: &[(i64, i64)]) -> Result<Self, MatrixError> {
        Self::new(field, pairs.iter().map(|&(d, n)| (d, Scalar::from_integer(field, n))))
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn coeff(&self, offset: i64) -> Option<&Scalar> {
        self.coeffs.get(&offset)
    }

    /// Largest offset carrying a nonzero coefficient. Zero for the identity
    /// row.
    pub fn width(&self) -> i64 {
        *self.coeffs.keys().next_back().expect("diagonal always present")
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// `self - lambda * (other shifted by `shift`)`. Shift must be positive
    /// so the diagonal stays untouched; this is the elementary row operation
    /// at pattern level.
    pub fn sub_scaled(&self, other: &RowPattern, shift: i64, lambda: &Scalar) -> RowPattern {
        debug_assert!(shift >= 1);
        let mut coeffs = self.coeffs.clone();
        for (d, c) in other.iter() {
            let t = d + shift;
            let delta = lambda.mul(c);
            let cur = coeffs.remove(&t).unwrap_or_else(|| Scalar::zero(self.field));
            let next = cur.sub(&delta);
            if !next.is_zero() {
                coeffs.insert(t, next);
            }
        }
        RowPattern { field: self.field, coeffs }
    }

    pub(crate) fn pairs_for_json(&self) -> Vec<(i64, String)> {
        self.iter().map(|(d, c)| (d, c.to_string())).collect()
    }

    pub(crate) fn from_json_pairs(
        field: FieldKind,
        pairs: &[(i64, String)],
    ) -> Result<Self, MatrixError> {
        Self::new(
            field,
            pairs
                .iter()
                .map(|(d, s)| Ok((*d, Scalar::parse(field, s)?)))
                .collect::<Result<Vec<_>, ScalarError>>()?,
        )
    }
}

impl fmt::Display for RowPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn residue(a: i64, p: i64) -> usize {
    a.rem_euclid(p) as usize
}

/// Eventually-periodic lower unitriangular matrix over `ZxZ`.
#[derive(Debug, Clone)]
pub struct RecurrenceMatrix {
    field: FieldKind,
    left: Vec<RowPattern>,
    /// First row index not governed by the left tail.
    anchor: i64,
    middle: Vec<RowPattern>,
    right: Vec<RowPattern>,
}

impl RecurrenceMatrix {
    pub fn new(
        field: FieldKind,
        left: Vec<RowPattern>,
        anchor: i64,
        middle: Vec<RowPattern>,
        right: Vec<RowPattern>,
    ) -> Result<Self, MatrixError> {
        if left.is_empty() || right.is_empty() {
            return Err(MatrixError::EmptyTail);
        }
        for p in left.iter().chain(middle.iter()).chain(right.iter()) {
            if p.field() != field {
                return Err(MatrixError::FieldMismatch { expected: field, found: p.field() });
            }
        }
        Ok(RecurrenceMatrix { field, left, anchor, middle, right })
    }

    /// A purely periodic matrix: the degenerate case where the same patterns
    /// govern every row.
    pub fn purely_periodic(
        field: FieldKind,
        patterns: Vec<RowPattern>,
    ) -> Result<Self, MatrixError> {
        Self::new(field, patterns.clone(), 0, Vec::new(), patterns)
    }

    pub fn identity(field: FieldKind) -> Self {
        Self::purely_periodic(field, vec![RowPattern::identity(field)]).expect("valid")
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    /// First explicit row index (the left seam L).
    pub fn anchor_left(&self) -> i64 {
        self.anchor
    }

    /// Last explicit row index (R); `anchor_left() - 1` when the middle is
    /// empty.
    pub fn anchor_right(&self) -> i64 {
        self.anchor + self.middle.len() as i64 - 1
    }

    pub fn left_period(&self) -> i64 {
        self.left.len() as i64
    }

    pub fn right_period(&self) -> i64 {
        self.right.len() as i64
    }

    pub fn left_patterns(&self) -> &[RowPattern] {
        &self.left
    }

    pub fn right_patterns(&self) -> &[RowPattern] {
        &self.right
    }

    pub fn middle_patterns(&self) -> &[RowPattern] {
        &self.middle
    }

    pub fn row(&self, a: i64) -> &RowPattern {
        if a < self.anchor {
            &self.left[residue(a, self.left_period())]
        } else if a <= self.anchor_right() {
            &self.middle[(a - self.anchor) as usize]
        } else {
            &self.right[residue(a, self.right_period())]
        }
    }

    pub fn entry(&self, a: i64, b: i64) -> Scalar {
        let d = a - b;
        if d < 0 {
            return Scalar::zero(self.field);
        }
        self.row(a).coeff(d).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Column index of the leftmost nonzero entry of row `a`.
    pub fn shape(&self, a: i64) -> i64 {
        a - self.row(a).width()
    }

    /// Maximum row width over every pattern the matrix can produce.
    pub fn band_width(&self) -> i64 {
        self.left
            .iter()
            .chain(self.middle.iter())
            .chain(self.right.iter())
            .map(RowPattern::width)
            .max()
            .expect("tails nonempty")
    }

    /// Row range that exhibits every local row configuration: one full
    /// period beyond each seam plus `extra` slack on both sides.
    pub fn probe_rows(&self, extra: i64) -> std::ops::RangeInclusive<i64> {
        let lo = self.anchor - self.left_period() - extra;
        let hi = self.anchor_right() + self.right_period() + extra;
        lo..=hi
    }

    /// A matrix is reduced when every pivot (the leftmost nonzero entry of
    /// its row) is the bottom-most nonzero entry of its column. Periodic
    /// tails make this decidable by probing one period of row pairs.
    pub fn is_reduced(&self) -> bool {
        let w = self.band_width();
        if w == 0 {
            return true;
        }
        for b in self.probe_rows(w) {
            let pivot_col = self.shape(b);
            for a in b + 1..=b + w {
                if !self.entry(a, pivot_col).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The unique row `c` with `shape(c) == a`, when one exists. Unique for
    /// reduced matrices; scans the band.
    pub fn shape_preimage(&self, a: i64) -> Option<i64> {
        let w = self.band_width();
        (a..=a + w).find(|&c| self.shape(c) == a)
    }

    pub fn pivot_matrix(&self) -> PivotMatrix {
        PivotMatrix { base: self.clone() }
    }

    fn minimize_tail(patterns: &[RowPattern]) -> Vec<RowPattern> {
        let p = patterns.len();
        for d in 1..=p {
            if p % d != 0 {
                continue;
            }
            if (0..p).all(|i| patterns[i] == patterns[i % d]) {
                return patterns[..d].to_vec();
            }
        }
        patterns.to_vec()
    }

    /// Canonical form: minimal tail periods, maximal absorption of middle
    /// rows into the tails, and a normalized seam when the middle is empty.
    pub fn canonical(&self) -> RecurrenceMatrix {
        let left = Self::minimize_tail(&self.left);
        let right = Self::minimize_tail(&self.right);
        let mut anchor = self.anchor;
        let mut middle: Vec<RowPattern> = self.middle.clone();
        let pl = left.len() as i64;
        let pr = right.len() as i64;
        loop {
            let mut changed = false;
            if let Some(first) = middle.first() {
                if *first == left[residue(anchor, pl)] {
                    middle.remove(0);
                    anchor += 1;
                    changed = true;
                }
            }
            if let Some(last) = middle.last() {
                let r = anchor + middle.len() as i64 - 1;
                if *last == right[residue(r, pr)] {
                    middle.pop();
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if middle.is_empty() {
            if left == right {
                anchor = 0;
            } else {
                // push the seam as far left as the maps agree; termination is
                // guaranteed because distinct minimized tails must disagree
                // within one combined period
                let bound = num_integer::lcm(pl, pr);
                let mut steps = 0;
                while steps <= bound {
                    let a = anchor - 1;
                    if left[residue(a, pl)] == right[residue(a, pr)] {
                        anchor = a;
                        steps += 1;
                    } else {
                        break;
                    }
                }
                debug_assert!(steps <= bound, "distinct minimized tails agree everywhere");
            }
        }
        RecurrenceMatrix { field: self.field, left, anchor, middle, right }
    }

    /// Semantic equality: equal canonical forms describe the same infinite
    /// matrix.
    pub fn semantic_eq(&self, other: &RecurrenceMatrix) -> bool {
        if self.field != other.field {
            return false;
        }
        let a = self.canonical();
        let b = other.canonical();
        a.left == b.left && a.anchor == b.anchor && a.middle == b.middle && a.right == b.right
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, MatrixError> {
        serde_json::from_str(s).map_err(|e| MatrixError::Json(e.to_string()))
    }
}

/// The pivot matrix P of C: `P[S(b), b]` is the inverse of C's pivot entry
/// in row `b`, every other entry is zero. CP is upper unitriangular exactly
/// when C is reduced.
#[derive(Debug, Clone)]
pub struct PivotMatrix {
    base: RecurrenceMatrix,
}

impl PivotMatrix {
    pub fn base(&self) -> &RecurrenceMatrix {
        &self.base
    }

    pub fn entry(&self, a: i64, b: i64) -> Scalar {
        if self.base.shape(b) == a {
            let pivot = self.base.entry(b, a);
            pivot.inverse().expect("pivot entries are nonzero")
        } else {
            Scalar::zero(self.base.field())
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldJson {
    Named(String),
    Prime { prime: u64 },
}

impl From<FieldKind> for FieldJson {
    fn from(f: FieldKind) -> Self {
        match f {
            FieldKind::Rational => FieldJson::Named("rational".into()),
            FieldKind::Prime(p) => FieldJson::Prime { prime: p },
        }
    }
}

impl TryFrom<&FieldJson> for FieldKind {
    type Error = MatrixError;
    fn try_from(f: &FieldJson) -> Result<Self, MatrixError> {
        match f {
            FieldJson::Named(s) if s == "rational" => Ok(FieldKind::Rational),
            FieldJson::Named(s) => Err(MatrixError::Json(format!("unknown field `{s}`"))),
            FieldJson::Prime { prime } => {
                if crate::scalar::is_prime(*prime) {
                    Ok(FieldKind::Prime(*prime))
                } else {
                    Err(MatrixError::Json(format!("{prime} is not prime")))
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TailJson {
    p: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    anchor: Option<i64>,
    rows: Vec<Vec<(i64, String)>>,
}

#[derive(Serialize, Deserialize)]
struct MiddleJson {
    rows: Vec<Vec<(i64, String)>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    field: FieldJson,
    #[serde(rename = "leftPeriod")]
    left_period: TailJson,
    middle: MiddleJson,
    #[serde(rename = "rightPeriod")]
    right_period: TailJson,
}

impl Serialize for RecurrenceMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let json = MatrixJson {
            field: self.field.into(),
            left_period: TailJson {
                p: self.left_period(),
                anchor: Some(self.anchor),
                rows: self.left.iter().map(RowPattern::pairs_for_json).collect(),
            },
            middle: MiddleJson {
                rows: self.middle.iter().map(RowPattern::pairs_for_json).collect(),
            },
            right_period: TailJson {
                p: self.right_period(),
                anchor: None,
                rows: self.right.iter().map(RowPattern::pairs_for_json).collect(),
            },
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RecurrenceMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = MatrixJson::deserialize(deserializer)?;
        let field = FieldKind::try_from(&json.field).map_err(D::Error::custom)?;
        let tail = |t: &TailJson| -> Result<Vec<RowPattern>, MatrixError> {
            if t.p as usize != t.rows.len() || t.rows.is_empty() {
                return Err(MatrixError::Json(format!(
                    "tail declares p={} but carries {} rows",
                    t.p,
                    t.rows.len()
                )));
            }
            t.rows.iter().map(|r| RowPattern::from_json_pairs(field, r)).collect()
        };
        let left = tail(&json.left_period).map_err(D::Error::custom)?;
        let right = tail(&json.right_period).map_err(D::Error::custom)?;
        let anchor = json
            .left_period
            .anchor
            .ok_or_else(|| D::Error::custom("leftPeriod.anchor is required"))?;
        let middle = json
            .middle
            .rows
            .iter()
            .map(|r| RowPattern::from_json_pairs(field, r))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        RecurrenceMatrix::new(field, left, anchor, middle, right).map_err(D::Error::custom)
    }
}
