//! Shape combinatorics: ball orbits, interval and box ball counts, rank
//! matrices with their defects, and rebuilding reduced rows from a window
//! of solution data.
//!
//! Everything here works on the shape function alone (plus exact linear
//! algebra from [`crate::oracle`] where data windows are involved), so the
//! results can cross-check the matrix-level algorithms in [`crate::kernel`].

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::oracle;
use crate::recmat::{RecurrenceMatrix, RowPattern};
use crate::scalar::{FieldKind, Scalar};
use crate::window::DenseWindow;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("matrix is not reduced")]
    NotReduced,
    #[error("data window [{0}, {1}] too small for the requested query")]
    WindowTooSmall(i64, i64),
    #[error("solution data does not span the kernel on its window")]
    RankDeficient,
}

fn require_reduced(c: &RecurrenceMatrix) -> Result<(), CombinatoricsError> {
    if c.is_reduced() {
        Ok(())
    } else {
        Err(CombinatoricsError::NotReduced)
    }
}

/// Number of S-balls, which is the kernel dimension. Each ball is an orbit
/// of the partial map `a -> shape_preimage(a)`; every orbit descends
/// through the purely periodic part of the left tail, crossing the gap
/// between `x` and `x + 1` exactly once, so counting crossings at one deep
/// gap counts the balls.
pub fn count_balls(c: &RecurrenceMatrix) -> Result<usize, CombinatoricsError> {
    require_reduced(c)?;
    let w = c.band_width();
    let crossings = |x: i64| {
        (x + 1..=x + w).filter(|&a| c.shape(a) <= x).count()
    };
    let x = c.anchor_left() - c.left_period() - w - 2;
    let n = crossings(x);
    debug_assert_eq!(n, crossings(x - c.left_period()), "count must be stable below the seam");
    Ok(n)
}

/// Ball count of the finite interval `[lo, hi]`: indices minus the pivot
/// pairs `(shape(b), b)` lying inside, i.e. components of the orbit forest
/// restricted to the interval (fixed points contribute zero). This is also
/// the dimension of the solution space projected to the interval.
pub fn interval_balls(
    c: &RecurrenceMatrix,
    lo: i64,
    hi: i64,
) -> Result<usize, CombinatoricsError> {
    require_reduced(c)?;
    assert!(lo <= hi, "interval must be nonempty");
    let inside = (lo..=hi).filter(|&b| c.shape(b) >= lo).count();
    Ok((hi - lo + 1) as usize - inside)
}

/// Entry `R_{a,b}` of the rank matrix of `ker(c)`, computed combinatorially.
pub fn rank_matrix_entry(
    c: &RecurrenceMatrix,
    a: i64,
    b: i64,
) -> Result<usize, CombinatoricsError> {
    assert!(a <= b, "rank matrix entries live on a <= b");
    interval_balls(c, a, b)
}

/// A windowed description of a solution subspace: either the kernel of a
/// reduced matrix, or the joint nullspace of finitely many explicit
/// constraints (each a list of `(index, coefficient)` pairs), taken inside
/// an outer window that contains every constraint's support.
pub enum SubspaceData<'a> {
    Reduced(&'a RecurrenceMatrix),
    Constraints {
        rows: &'a [Vec<(i64, Scalar)>],
        field: FieldKind,
        outer: (i64, i64),
    },
}

/// All defects of the rank matrix inside the square box `[lo, hi]^2`: the
/// positions where the mixed second difference of `R` is -1. Every row and
/// every column holds at most one defect. For a reduced matrix these are
/// exactly the pivot pairs `(shape(b), b)`; for constraint data they are
/// found from exact ranks of the projected nullspace.
pub fn defects(
    v: &SubspaceData,
    square: (i64, i64),
) -> Result<Vec<(i64, i64)>, CombinatoricsError> {
    let (lo, hi) = square;
    assert!(lo <= hi, "box must be nonempty");
    match v {
        SubspaceData::Reduced(c) => {
            require_reduced(c)?;
            Ok((lo..=hi)
                .filter(|&b| c.shape(b) >= lo)
                .map(|b| (c.shape(b), b))
                .collect())
        }
        SubspaceData::Constraints { rows, field, outer } => {
            let (olo, ohi) = *outer;
            let covered = rows.iter().all(|row| {
                row.iter().all(|&(i, _)| i >= olo && i <= ohi)
            });
            if !covered || lo < olo || hi > ohi {
                return Err(CombinatoricsError::WindowTooSmall(olo, ohi));
            }
            let ncols = (ohi - olo + 1) as usize;
            let dense: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|row| {
                    let mut out = vec![Scalar::zero(*field); ncols];
                    for &(i, ref coeff) in row {
                        out[(i - olo) as usize] = coeff.clone();
                    }
                    out
                })
                .collect();
            let basis = oracle::nullspace(dense, ncols, *field);
            let mut memo: BTreeMap<(i64, i64), i64> = BTreeMap::new();
            let mut rank_of = |a: i64, b: i64| -> i64 {
                if a > b {
                    return b - a + 1;
                }
                *memo.entry((a, b)).or_insert_with(|| {
                    let rows: Vec<Vec<Scalar>> = basis
                        .iter()
                        .map(|v| {
                            v[(a - olo) as usize..=(b - olo) as usize].to_vec()
                        })
                        .collect();
                    oracle::rank(rows, *field) as i64
                })
            };
            let mut out = Vec::new();
            for b in lo..=hi {
                for a in lo..=b {
                    let second = rank_of(a, b) - rank_of(a + 1, b) - rank_of(a, b - 1)
                        + rank_of(a + 1, b - 1);
                    debug_assert!(second == 0 || second == -1);
                    if second == -1 {
                        out.push((a, b));
                    }
                }
            }
            out.sort_by_key(|&(_, b)| b);
            Ok(out)
        }
    }
}

/// Ball count inside the box `rows x cols`: connected components of the
/// circled positions, where every non-fixed index `j` circles `(j, j)` and
/// `(shape(j), j)` and the chain `(j,j) ~ (shape(j),j) ~ (shape(j),shape(j))`
/// joins them when both endpoints lie in the box.
pub fn balls_in_box(
    c: &RecurrenceMatrix,
    rows: (i64, i64),
    cols: (i64, i64),
) -> Result<usize, CombinatoricsError> {
    require_reduced(c)?;
    let (rlo, rhi) = rows;
    let (clo, chi) = cols;
    assert!(rlo <= rhi && clo <= chi, "box must be nonempty");
    let w = c.band_width();
    let in_box = |p: (i64, i64)| p.0 >= rlo && p.0 <= rhi && p.1 >= clo && p.1 <= chi;
    let scan = rlo.min(clo)..=rhi.max(chi) + w;

    let mut ids: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for j in scan.clone() {
        let s = c.shape(j);
        if s == j {
            continue;
        }
        for p in [(j, j), (s, j), (s, s)] {
            if in_box(p) {
                let next = ids.len();
                ids.entry(p).or_insert(next);
            }
        }
    }

    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in scan {
        let s = c.shape(j);
        if s == j {
            continue;
        }
        if let Some(&mid) = ids.get(&(s, j)) {
            for p in [(j, j), (s, s)] {
                if let Some(&other) = ids.get(&p) {
                    let a = find(&mut parent, mid);
                    let b = find(&mut parent, other);
                    parent[a] = b;
                }
            }
        }
    }
    let roots: BTreeSet<usize> =
        (0..parent.len()).map(|i| find(&mut parent, i)).collect();
    Ok(roots.len())
}

/// The hypothesis under which box rank equals box ball count:
/// `b - c >= -1` and `min(a - c, b - d) <= 0` for the box `[a,b] x [c,d]`.
pub fn box_condition(rows: (i64, i64), cols: (i64, i64)) -> bool {
    let (a, b) = rows;
    let (c, d) = cols;
    b - c >= -1 && (a - c).min(b - d) <= 0
}

/// Result of comparing the rank of a solution-matrix window against the
/// ball count of the same box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxRankCheck {
    pub rank: usize,
    pub ball_count: usize,
    pub condition_holds: bool,
}

/// Exact rank of the solution matrix restricted to `rows x cols`, together
/// with the ball count of the box and whether the equality hypothesis
/// holds. Rank is never below the ball count; under the hypothesis the two
/// are equal.
pub fn box_rank_check(
    c: &RecurrenceMatrix,
    rows: (i64, i64),
    cols: (i64, i64),
) -> Result<BoxRankCheck, CombinatoricsError> {
    let sol = crate::kernel::solution(c).map_err(|_| CombinatoricsError::NotReduced)?;
    let window = crate::window::dense_window_seq(&sol, rows, cols);
    let dense: Vec<Vec<Scalar>> =
        (rows.0..=rows.1).map(|r| window.row_slice(r).to_vec()).collect();
    let rank = oracle::rank(dense, c.field());
    let ball_count = balls_in_box(c, rows, cols)?;
    let condition_holds = box_condition(rows, cols);
    debug_assert!(rank >= ball_count);
    Ok(BoxRankCheck { rank, ball_count, condition_holds })
}

/// Batch variant of [`box_rank_check`]; boxes are independent, so they are
/// evaluated in parallel when the `parallel` feature is on.
pub fn box_rank_checks(
    c: &RecurrenceMatrix,
    boxes: &[((i64, i64), (i64, i64))],
) -> Result<Vec<BoxRankCheck>, CombinatoricsError> {
    require_reduced(c)?;
    let results = crate::par::map_vec(boxes.to_vec(), |(rows, cols)| {
        box_rank_check(c, rows, cols).expect("reducedness already checked")
    });
    Ok(results)
}

/// One S-ball as seen around the seam: the explicit chain of indices
/// walked from deep inside the left tail, plus the translation amounts
/// with which the chain continues periodically into each tail.
/// `right_shift` is `None` when the ball has a maximum element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub chain: Vec<i64>,
    pub left_shift: i64,
    pub right_shift: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallSet {
    pub balls: Vec<Ball>,
}

impl BallSet {
    pub fn to_json_string(&self) -> String {
        let balls: Vec<serde_json::Value> = self
            .balls
            .iter()
            .map(|b| {
                serde_json::json!({
                    "chain": b.chain,
                    "leftShift": b.left_shift,
                    "rightShift": b.right_shift,
                })
            })
            .collect();
        serde_json::json!({ "balls": balls }).to_string()
    }
}

/// Enumerate every S-ball with explicit chains through the seam region and
/// periodic tail descriptors. Balls are ordered by their crossing index at
/// the deep-left counting gap.
pub fn ball_set(c: &RecurrenceMatrix) -> Result<BallSet, CombinatoricsError> {
    require_reduced(c)?;
    let w = c.band_width();
    let pl = c.left_period();
    let pr = c.right_period();
    let deep_left = c.anchor_left() - pl - w - 2;
    let deep_right = c.anchor_right() + pr + w + 2;

    let mut balls = Vec::new();
    for a in deep_left + 1..=deep_left + w {
        if c.shape(a) > deep_left {
            continue;
        }
        // left period: walk down until the residue class repeats
        let mut down = a;
        loop {
            down = c.shape(down);
            if down.rem_euclid(pl) == a.rem_euclid(pl) {
                break;
            }
        }
        let left_shift = a - down;
        // upward walk across the seam
        let mut chain = vec![a];
        let mut right_shift = None;
        let mut seen_right: BTreeMap<i64, i64> = BTreeMap::new();
        let mut cur = a;
        while let Some(next) = c.shape_preimage(cur) {
            if next == cur {
                break;
            }
            chain.push(next);
            cur = next;
            if cur > deep_right {
                let r = cur.rem_euclid(pr);
                if let Some(&first) = seen_right.get(&r) {
                    right_shift = Some(cur - first);
                    break;
                }
                seen_right.insert(r, cur);
            }
        }
        balls.push(Ball { chain, left_shift, right_shift });
    }
    Ok(BallSet { balls })
}

/// Maximal chains of the orbit map inside `[lo, hi]`: increasing runs
/// `a_0 < a_1 < ...` with `shape(a_{k+1}) = a_k`, starting where the
/// predecessor leaves the range. Fixed points are excluded.
pub fn chains_in_range(
    c: &RecurrenceMatrix,
    lo: i64,
    hi: i64,
) -> Result<Vec<Vec<i64>>, CombinatoricsError> {
    require_reduced(c)?;
    assert!(lo <= hi);
    let mut out = Vec::new();
    for a in lo..=hi {
        if c.shape(a) == a || c.shape(a) >= lo {
            continue;
        }
        let mut chain = vec![a];
        let mut cur = a;
        while let Some(next) = c.shape_preimage(cur) {
            if next == cur || next > hi {
                break;
            }
            chain.push(next);
            cur = next;
        }
        out.push(chain);
    }
    Ok(out)
}

/// Indices in `[lo, hi]` whose shape is a fixed point, i.e. rows whose
/// equation is `x_a = 0`.
pub fn fixed_points_in_range(c: &RecurrenceMatrix, lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|&a| c.shape(a) == a).collect()
}

/// One step of a witnessing interval chain for a schedule: the seed index,
/// or a one-index extension to the left or right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GrowthStep {
    Seed(i64),
    Left(i64),
    Right(i64),
}

/// Does `[a, min(a + w, b)]` contain a row whose pivot sits at `a`? Covers
/// both the fixed-point case (the row `a` itself) and a proper pivot hit.
fn pivot_hit(c: &RecurrenceMatrix, a: i64, b: i64) -> bool {
    let hi = (a + c.band_width()).min(b);
    (a..=hi).any(|r| c.shape(r) == a)
}

fn seed_ok(c: &RecurrenceMatrix, j: &BTreeSet<i64>, x: i64) -> bool {
    j.contains(&x) == (c.shape(x) != x)
}

fn left_ok(c: &RecurrenceMatrix, j: &BTreeSet<i64>, a: i64, b: i64) -> bool {
    j.contains(&a) == !pivot_hit(c, a, b)
}

fn right_ok(c: &RecurrenceMatrix, j: &BTreeSet<i64>, a: i64, b: i64) -> bool {
    j.contains(&b) == (c.shape(b) < a)
}

/// Witnessing chain for `j` as a schedule on the finite interval
/// `[lo, hi]`: a nested family of intervals growing one index at a time
/// whose `j`-count matches the interval ball count at every width. Returns
/// the growth steps (seed first), or `None` when no chain exists.
pub(crate) fn interval_schedule_chain(
    c: &RecurrenceMatrix,
    j: &BTreeSet<i64>,
    lo: i64,
    hi: i64,
) -> Option<Vec<GrowthStep>> {
    if j.iter().any(|&x| x < lo || x > hi) {
        return None;
    }
    let n = (hi - lo + 1) as usize;
    let idx = |a: i64, b: i64| (a - lo) as usize * n + (b - lo) as usize;
    // 0 unreachable, 1 seed, 2 grown left, 3 grown right
    let mut how = vec![0u8; n * n];
    for x in lo..=hi {
        if seed_ok(c, j, x) {
            how[idx(x, x)] = 1;
        }
    }
    for width in 2..=n as i64 {
        for a in lo..=hi - width + 1 {
            let b = a + width - 1;
            if how[idx(a + 1, b)] != 0 && left_ok(c, j, a, b) {
                how[idx(a, b)] = 2;
            } else if how[idx(a, b - 1)] != 0 && right_ok(c, j, a, b) {
                how[idx(a, b)] = 3;
            }
        }
    }
    if how[idx(lo, hi)] == 0 {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    let mut steps = Vec::with_capacity(n);
    loop {
        match how[idx(a, b)] {
            1 => {
                steps.push(GrowthStep::Seed(a));
                break;
            }
            2 => {
                steps.push(GrowthStep::Left(a));
                a += 1;
            }
            3 => {
                steps.push(GrowthStep::Right(b));
                b -= 1;
            }
            _ => unreachable!("backtrack only visits reachable states"),
        }
    }
    steps.reverse();
    Some(steps)
}

/// Witnessing chain for `j` as a schedule on all of Z, long enough to
/// cover `cover`. Outside a window containing `j`, the seam, and a band
/// margin, every extension is forced and valid (deep indices are always
/// pivot-hit on the left and band-shadowed on the right), so the chain is
/// searched inside that window only.
pub(crate) fn full_schedule_chain(
    c: &RecurrenceMatrix,
    j: &BTreeSet<i64>,
    cover: (i64, i64),
) -> Option<Vec<GrowthStep>> {
    let w = c.band_width();
    let jlo = j.first().copied().unwrap_or(c.anchor_left());
    let jhi = j.last().copied().unwrap_or(c.anchor_right());
    let lo = [cover.0, jlo, c.anchor_left() - c.left_period()]
        .into_iter()
        .min()
        .unwrap()
        - w
        - c.left_period()
        - 4;
    let hi = [cover.1, jhi, c.anchor_right() + c.right_period()]
        .into_iter()
        .max()
        .unwrap()
        + w
        + c.right_period()
        + 4;
    interval_schedule_chain(c, j, lo, hi)
}

/// Rebuild rows of the reduced matrix whose kernel produced `basis`. The
/// basis columns must restrict a spanning set of solutions to the window.
/// Rows are recovered for every index in `rows_wanted`; each is the unique
/// relation on the hole set of its defect interval, normalized to diagonal
/// coefficient one.
pub fn reduced_from_kernel(
    basis: &DenseWindow,
    rows_wanted: (i64, i64),
) -> Result<Vec<(i64, RowPattern)>, CombinatoricsError> {
    let field = basis.field();
    let (rlo, rhi) = basis.row_range();
    let (blo, bhi) = rows_wanted;
    assert!(blo <= bhi);
    if blo < rlo || bhi > rhi {
        return Err(CombinatoricsError::WindowTooSmall(rlo, rhi));
    }

    let mut memo: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    let mut rank_of = |a: i64, b: i64| -> i64 {
        if a > b {
            return b - a + 1;
        }
        *memo.entry((a, b)).or_insert_with(|| {
            let rows: Vec<Vec<Scalar>> =
                (a..=b).map(|r| basis.row_slice(r).to_vec()).collect();
            oracle::rank(rows, field) as i64
        })
    };

    // pass one: defect row of every column visible in the window
    let mut defect_row: BTreeMap<i64, i64> = BTreeMap::new();
    for b in rlo..=rhi {
        for a in rlo..=b {
            let second = rank_of(a, b) - rank_of(a + 1, b) - rank_of(a, b - 1)
                + rank_of(a + 1, b - 1);
            if second == -1 {
                defect_row.insert(b, a);
                break;
            }
        }
    }

    // pass two: solve for each requested relation on its hole support
    let mut out = Vec::new();
    for b in blo..=bhi {
        let Some(&alpha) = defect_row.get(&b) else {
            return Err(CombinatoricsError::WindowTooSmall(rlo, rhi));
        };
        if alpha == b {
            out.push((b, RowPattern::identity(field)));
            continue;
        }
        let hit: BTreeSet<i64> = (alpha..b)
            .filter_map(|col| defect_row.get(&col).copied())
            .filter(|&r| r >= alpha)
            .collect();
        let unknowns: Vec<i64> = (alpha..b).filter(|f| !hit.contains(f)).collect();
        let ncols = basis.num_cols();
        let (clo, _) = basis.col_range();
        let mut mat = Vec::with_capacity(ncols);
        let mut rhs = Vec::with_capacity(ncols);
        for k in 0..ncols {
            let col = clo + k as i64;
            mat.push(unknowns.iter().map(|&f| basis.get(f, col).clone()).collect::<Vec<_>>());
            rhs.push(basis.get(b, col).neg());
        }
        if oracle::rank(mat.clone(), field) < unknowns.len() {
            return Err(CombinatoricsError::RankDeficient);
        }
        let Some(coeffs) = oracle::solve(mat, rhs, field) else {
            return Err(CombinatoricsError::RankDeficient);
        };
        let mut pairs = vec![(0i64, Scalar::one(field))];
        for (f, v) in unknowns.iter().zip(coeffs) {
            if !v.is_zero() {
                pairs.push((b - f, v));
            }
        }
        let row = RowPattern::new(field, pairs).expect("diagonal present, offsets positive");
        out.push((b, row));
    }
    Ok(out)
}
