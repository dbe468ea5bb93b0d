//! Derived matrices of a recurrence matrix and the solvers built on them.
//!
//! The adjugate is the two-sided unitriangular inverse; the solution matrix
//! collects kernel sequences column by column; the splitting matrix is the
//! banded right inverse used for affine systems. All three are lazy
//! [`MatrixView`]s computed by substitution, never materialized beyond the
//! requested window.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::combinatorics::{self, GrowthStep};
use crate::recdsl::SystemSpec;
use crate::recmat::RecurrenceMatrix;
use crate::reduction::{self, ReductionError};
use crate::scalar::{FieldKind, Scalar};
use crate::view::{CpView, MatrixView};
use crate::window::DenseWindow;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KernelError {
    #[error("matrix is not reduced")]
    NotReduced,
    /// A finitely described reduced matrix always has finitely many kernel
    /// chains, so the current representation never produces this; kept so
    /// callers can match on it stably.
    #[error("kernel dimension is not finite")]
    InfiniteDimension,
    #[error("index set is not a schedule")]
    NotASchedule,
    #[error("no initial value for row {0}")]
    MissingInitial(i64),
    #[error("row {0} takes no initial value")]
    UnexpectedInitial(i64),
    #[error("index {0} lies outside the one-sided range")]
    IndexOutOfRange(i64),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Column `b` of the adjugate of `v`, rows `b..=hi`, by forward
/// substitution. The row sums stay finite through the base's row bounds
/// when it has them, and through the column's own support (zero above row
/// `b`) when it does not.
fn adj_column<V: MatrixView>(v: &V, b: i64, hi: i64) -> Vec<Scalar> {
    let field = v.field();
    let mut x = Vec::with_capacity((hi - b + 1).max(1) as usize);
    x.push(Scalar::one(field));
    for a in b + 1..=hi {
        let lo = v.row_bounds(a).map_or(b, |(l, _)| l.max(b));
        let mut acc = Scalar::zero(field);
        for c in lo..a {
            let coeff = v.entry(a, c);
            if coeff.is_zero() {
                continue;
            }
            acc = acc.add(&coeff.mul(&x[(c - b) as usize]));
        }
        x.push(acc.neg());
    }
    x
}

/// Column `b` of the adjugate of the upper unitriangular product CP, rows
/// `lo..=b`, by back substitution.
fn upper_adj_column(u: &CpView, b: i64, lo: i64) -> Vec<Scalar> {
    let field = u.field();
    let w = u.base().band_width();
    let n = (b - lo + 1) as usize;
    let mut x = vec![Scalar::zero(field); n];
    x[n - 1] = Scalar::one(field);
    for a in (lo..b).rev() {
        let hi = (a + w).min(b);
        let mut acc = Scalar::zero(field);
        for c in a + 1..=hi {
            let coeff = u.entry(a, c);
            if coeff.is_zero() {
                continue;
            }
            acc = acc.add(&coeff.mul(&x[(c - lo) as usize]));
        }
        x[(a - lo) as usize] = acc.neg();
    }
    x
}

/// Lazy adjugate: the unique lower unitriangular two-sided inverse of a
/// lower unitriangular view.
#[derive(Debug, Clone)]
pub struct AdjugateView<V> {
    base: V,
}

impl<V: MatrixView> AdjugateView<V> {
    pub fn new(base: V) -> Self {
        AdjugateView { base }
    }

    pub fn base(&self) -> &V {
        &self.base
    }
}

impl<V: MatrixView> MatrixView for AdjugateView<V> {
    fn field(&self) -> FieldKind {
        self.base.field()
    }

    fn entry(&self, row: i64, col: i64) -> Scalar {
        if row < col {
            return Scalar::zero(self.field());
        }
        adj_column(&self.base, col, row).pop().expect("column is never empty")
    }

    fn row_bounds(&self, _row: i64) -> Option<(i64, i64)> {
        None
    }

    fn col_bounds(&self, _col: i64) -> Option<(i64, i64)> {
        None
    }

    fn column_segment(&self, col: i64, rows: (i64, i64)) -> Vec<Scalar> {
        let field = self.field();
        if rows.1 < col {
            return vec![Scalar::zero(field); (rows.1 - rows.0 + 1) as usize];
        }
        let full = adj_column(&self.base, col, rows.1);
        (rows.0..=rows.1)
            .map(|a| {
                if a < col {
                    Scalar::zero(field)
                } else {
                    full[(a - col) as usize].clone()
                }
            })
            .collect()
    }
}

/// Lazy adjugate of the upper unitriangular product CP of a reduced matrix
/// with its pivot matrix.
#[derive(Debug, Clone)]
pub struct UpperAdjugateView {
    base: CpView,
}

impl MatrixView for UpperAdjugateView {
    fn field(&self) -> FieldKind {
        self.base.field()
    }

    fn entry(&self, row: i64, col: i64) -> Scalar {
        if row > col {
            return Scalar::zero(self.field());
        }
        upper_adj_column(&self.base, col, row)[0].clone()
    }

    fn row_bounds(&self, _row: i64) -> Option<(i64, i64)> {
        None
    }

    fn col_bounds(&self, _col: i64) -> Option<(i64, i64)> {
        None
    }

    fn column_segment(&self, col: i64, rows: (i64, i64)) -> Vec<Scalar> {
        let field = self.field();
        if rows.0 > col {
            return vec![Scalar::zero(field); (rows.1 - rows.0 + 1) as usize];
        }
        let full = upper_adj_column(&self.base, col, rows.0);
        (rows.0..=rows.1)
            .map(|a| {
                if a > col {
                    Scalar::zero(field)
                } else {
                    full[(a - rows.0) as usize].clone()
                }
            })
            .collect()
    }
}

/// Solution matrix of a reduced matrix: adjugate minus the pivot-routed
/// upper adjugate. Every column lies in the kernel; the columns indexed by
/// a T-set form a basis.
#[derive(Debug, Clone)]
pub struct SolutionView {
    base: RecurrenceMatrix,
    cp: CpView,
}

impl SolutionView {
    pub fn base(&self) -> &RecurrenceMatrix {
        &self.base
    }
}

impl MatrixView for SolutionView {
    fn field(&self) -> FieldKind {
        self.base.field()
    }

    fn entry(&self, row: i64, col: i64) -> Scalar {
        self.column_segment(col, (row, row)).pop().expect("one entry")
    }

    fn row_bounds(&self, _row: i64) -> Option<(i64, i64)> {
        None
    }

    fn col_bounds(&self, _col: i64) -> Option<(i64, i64)> {
        None
    }

    fn column_segment(&self, col: i64, rows: (i64, i64)) -> Vec<Scalar> {
        let field = self.field();
        let (lo, hi) = rows;
        let adj = if hi >= col { Some(adj_column(&self.base, col, hi)) } else { None };
        let up = if lo <= col { Some(upper_adj_column(&self.cp, col, lo)) } else { None };
        (lo..=hi)
            .map(|a| {
                let mut v = if a >= col {
                    adj.as_ref().expect("rows reach the column")[(a - col) as usize].clone()
                } else {
                    Scalar::zero(field)
                };
                if a <= col {
                    if let Some(cc) = self.base.shape_preimage(a) {
                        if cc <= col {
                            let piv = self.base.entry(cc, a);
                            let pivinv = piv.inverse().expect("pivots are nonzero");
                            let u = &up.as_ref().expect("rows reach the column")
                                [(cc - lo) as usize];
                            v = v.sub(&pivinv.mul(u));
                        }
                    }
                }
                v
            })
            .collect()
    }
}

/// Splitting matrix of a reduced matrix: the banded right inverse whose
/// column `b` takes the adjugate wedge for `b >= 0` and the pivot-routed
/// upper adjugate wedge for `b < 0`. Row `a` is supported inside `[0, a]`
/// or `[a, 0]`.
#[derive(Debug, Clone)]
pub struct SplittingView {
    base: RecurrenceMatrix,
    cp: CpView,
}

impl SplittingView {
    pub fn base(&self) -> &RecurrenceMatrix {
        &self.base
    }
}

impl MatrixView for SplittingView {
    fn field(&self) -> FieldKind {
        self.base.field()
    }

    fn entry(&self, row: i64, col: i64) -> Scalar {
        self.column_segment(col, (row, row)).pop().expect("one entry")
    }

    fn row_bounds(&self, row: i64) -> Option<(i64, i64)> {
        Some((row.min(0), row.max(0)))
    }

    fn col_bounds(&self, _col: i64) -> Option<(i64, i64)> {
        None
    }

    fn column_segment(&self, col: i64, rows: (i64, i64)) -> Vec<Scalar> {
        let field = self.field();
        let (lo, hi) = rows;
        let n = (hi - lo + 1) as usize;
        if col >= 0 {
            if hi < col {
                return vec![Scalar::zero(field); n];
            }
            let full = adj_column(&self.base, col, hi);
            (lo..=hi)
                .map(|a| {
                    if a < col {
                        Scalar::zero(field)
                    } else {
                        full[(a - col) as usize].clone()
                    }
                })
                .collect()
        } else {
            if lo > col {
                return vec![Scalar::zero(field); n];
            }
            let up = upper_adj_column(&self.cp, col, lo);
            (lo..=hi)
                .map(|a| {
                    if a > col {
                        return Scalar::zero(field);
                    }
                    match self.base.shape_preimage(a) {
                        Some(cc) if cc <= col => {
                            let piv = self.base.entry(cc, a);
                            piv.inverse()
                                .expect("pivots are nonzero")
                                .mul(&up[(cc - lo) as usize])
                        }
                        _ => Scalar::zero(field),
                    }
                })
                .collect()
        }
    }
}

pub fn adjugate(c: &RecurrenceMatrix) -> AdjugateView<RecurrenceMatrix> {
    AdjugateView { base: c.clone() }
}

pub fn upper_adjugate(c: &RecurrenceMatrix) -> Result<UpperAdjugateView, KernelError> {
    if !c.is_reduced() {
        return Err(KernelError::NotReduced);
    }
    Ok(UpperAdjugateView { base: CpView::new(c) })
}

pub fn solution(c: &RecurrenceMatrix) -> Result<SolutionView, KernelError> {
    if !c.is_reduced() {
        return Err(KernelError::NotReduced);
    }
    Ok(SolutionView { base: c.clone(), cp: CpView::new(c) })
}

pub fn splitting(c: &RecurrenceMatrix) -> Result<SplittingView, KernelError> {
    if !c.is_reduced() {
        return Err(KernelError::NotReduced);
    }
    Ok(SplittingView { base: c.clone(), cp: CpView::new(c) })
}

pub fn adj_entry(c: &RecurrenceMatrix, a: i64, b: i64) -> Scalar {
    adjugate(c).entry(a, b)
}

pub fn upper_adj_entry(c: &RecurrenceMatrix, a: i64, b: i64) -> Result<Scalar, KernelError> {
    Ok(upper_adjugate(c)?.entry(a, b))
}

pub fn sol_entry(c: &RecurrenceMatrix, a: i64, b: i64) -> Result<Scalar, KernelError> {
    Ok(solution(c)?.entry(a, b))
}

pub fn spl_entry(c: &RecurrenceMatrix, a: i64, b: i64) -> Result<Scalar, KernelError> {
    Ok(splitting(c)?.entry(a, b))
}

/// A finite index set that determines kernel elements uniquely: values may
/// be prescribed freely on it, and every solution is pinned down by its
/// restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub indices: BTreeSet<i64>,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.indices.iter().copied()
    }
}

/// The index region a schedule is measured against: the whole line, or one
/// finite interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexDomain {
    All,
    Interval(i64, i64),
}

/// T-set at `b`: the largest element `<= b` of each kernel chain. The
/// columns of the solution matrix indexed by it form a kernel basis, and it
/// is always a schedule for the whole line.
pub fn t_set(c: &RecurrenceMatrix, b: i64) -> Result<Schedule, KernelError> {
    if !c.is_reduced() {
        return Err(KernelError::NotReduced);
    }
    let dim = combinatorics::count_balls(c).expect("reducedness already checked");
    let floor = b.min(c.anchor_left()) - c.band_width() - c.left_period() - 2;
    let mut indices = BTreeSet::new();
    let mut a = b;
    while indices.len() < dim {
        assert!(a >= floor, "deep indices of a reduced matrix are always shape images");
        match c.shape_preimage(a) {
            Some(cc) if cc <= b => {}
            _ => {
                indices.insert(a);
            }
        }
        a -= 1;
    }
    Ok(Schedule { indices })
}

/// Is `j` a schedule for the given domain, i.e. does prescribing values on
/// `j` determine solutions there uniquely? Witnessed by a growth chain of
/// intervals whose `j`-count matches the interval ball count at every step.
pub fn is_schedule(
    c: &RecurrenceMatrix,
    j: &BTreeSet<i64>,
    domain: IndexDomain,
) -> Result<bool, KernelError> {
    if !c.is_reduced() {
        return Err(KernelError::NotReduced);
    }
    let chain = match domain {
        IndexDomain::All => {
            let cover = (c.anchor_left(), c.anchor_right().max(c.anchor_left()));
            combinatorics::full_schedule_chain(c, j, cover)
        }
        IndexDomain::Interval(lo, hi) => {
            assert!(lo <= hi, "empty interval");
            combinatorics::interval_schedule_chain(c, j, lo, hi)
        }
    };
    Ok(chain.is_some())
}

/// The unique kernel sequence taking the given values on their key set (a
/// schedule for the whole line), evaluated on the window. Following the
/// witness chain outward, each rightward step evaluates a full row at its
/// rightmost index and each leftward step solves the unique covered row
/// whose pivot sits at the new index.
pub fn extend_solution(
    c: &RecurrenceMatrix,
    values: &BTreeMap<i64, Scalar>,
    window: (i64, i64),
) -> Result<Vec<Scalar>, KernelError> {
    if !c.is_reduced() {
        return Err(KernelError::NotReduced);
    }
    assert!(window.0 <= window.1, "empty window");
    let field = c.field();
    for v in values.values() {
        assert_eq!(v.field(), field, "values over the matrix field");
    }
    let j: BTreeSet<i64> = values.keys().copied().collect();
    let Some(chain) = combinatorics::full_schedule_chain(c, &j, window) else {
        return Err(KernelError::NotASchedule);
    };
    let mut x: BTreeMap<i64, Scalar> = BTreeMap::new();
    for step in chain {
        match step {
            GrowthStep::Seed(i) => {
                // A seed outside the schedule is a bare-pivot index, pinned
                // to zero by its own row.
                let v = values.get(&i).cloned().unwrap_or_else(|| Scalar::zero(field));
                x.insert(i, v);
            }
            GrowthStep::Left(a) => {
                let v = if let Some(v) = values.get(&a) {
                    v.clone()
                } else {
                    let r = c.shape_preimage(a).expect("leftward steps are pivot-hit");
                    let piv = c.entry(r, a);
                    let mut acc = Scalar::zero(field);
                    for (d, coeff) in c.row(r).iter() {
                        let col = r - d;
                        if col == a {
                            continue;
                        }
                        acc = acc.add(&coeff.mul(&x[&col]));
                    }
                    acc.neg().mul(&piv.inverse().expect("pivots are nonzero"))
                };
                x.insert(a, v);
            }
            GrowthStep::Right(b) => {
                let v = if let Some(v) = values.get(&b) {
                    v.clone()
                } else {
                    let mut acc = Scalar::zero(field);
                    for (d, coeff) in c.row(b).iter() {
                        if d == 0 {
                            continue;
                        }
                        acc = acc.add(&coeff.mul(&x[&(b - d)]));
                    }
                    acc.neg()
                };
                x.insert(b, v);
            }
        }
    }
    Ok((window.0..=window.1).map(|i| x[&i].clone()).collect())
}

/// Kernel basis on a window: the solution matrix columns indexed by the
/// T-set at `b`, relabeled `0..dim-1` in ascending T-set order.
pub fn kernel_basis(
    c: &RecurrenceMatrix,
    b: i64,
    window: (i64, i64),
) -> Result<DenseWindow, KernelError> {
    assert!(window.0 <= window.1, "empty window");
    let t = t_set(c, b)?;
    let sol = solution(c)?;
    let labels: Vec<i64> = t.iter().collect();
    let dim = labels.len() as i64;
    let columns = crate::par::map_vec(labels, |tb| sol.column_segment(tb, window));
    Ok(DenseWindow::from_columns(c.field(), window, (0, dim - 1), columns))
}

/// One particular solution of `matrix . x = rhs` on the window, computed as
/// the splitting matrix applied to the right-hand side. The system is
/// reduced first, carrying the right-hand side through the same row
/// operations; the full solution set is this plus the kernel.
pub fn solve_affine(spec: &SystemSpec, window: (i64, i64)) -> Result<Vec<Scalar>, KernelError> {
    assert!(window.0 <= window.1, "empty window");
    let red = reduction::reduce_system(spec, reduction::DEFAULT_FUEL)?;
    let spl = splitting(&red.matrix)?;
    let field = red.matrix.field();
    let mut out = vec![Scalar::zero(field); (window.1 - window.0 + 1) as usize];
    for b in window.0.min(0)..=window.1.max(0) {
        let rv = red.rhs.value(b);
        if rv.is_zero() {
            continue;
        }
        let seg = spl.column_segment(b, window);
        for (k, s) in seg.iter().enumerate() {
            if !s.is_zero() {
                out[k] = out[k].add(&s.mul(rv));
            }
        }
    }
    Ok(out)
}

/// Solve a recurrence on the one-sided index line `0..=n`. Identity rows
/// are the initial positions and must carry exactly the given values;
/// every other row is evaluated by direct recursion, reading indices below
/// zero as absent.
pub fn solve_one_sided(
    c: &RecurrenceMatrix,
    initial: &BTreeMap<i64, Scalar>,
    n: i64,
) -> Result<Vec<Scalar>, KernelError> {
    if n < 0 {
        return Err(KernelError::IndexOutOfRange(n));
    }
    let field = c.field();
    for (&i, v) in initial {
        assert_eq!(v.field(), field, "values over the matrix field");
        if !(0..=n).contains(&i) {
            return Err(KernelError::IndexOutOfRange(i));
        }
        if !c.row(i).is_identity() {
            return Err(KernelError::UnexpectedInitial(i));
        }
    }
    let mut xs: Vec<Scalar> = Vec::with_capacity((n + 1) as usize);
    for i in 0..=n {
        let v = if c.row(i).is_identity() {
            match initial.get(&i) {
                Some(v) => v.clone(),
                None => return Err(KernelError::MissingInitial(i)),
            }
        } else {
            let mut acc = Scalar::zero(field);
            for (d, coeff) in c.row(i).iter() {
                if d == 0 {
                    continue;
                }
                let j = i - d;
                if j < 0 {
                    continue;
                }
                acc = acc.add(&coeff.mul(&xs[j as usize]));
            }
            acc.neg()
        };
        xs.push(v);
    }
    Ok(xs)
}
