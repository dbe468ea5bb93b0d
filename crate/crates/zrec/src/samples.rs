//! Built-in example matrices and systems used across tests, benches, and
//! the command-line tool's demo corpus.

use crate::recmat::{RecurrenceMatrix, RowPattern};
use crate::scalar::{FieldKind, Scalar};

fn pattern(field: FieldKind, pairs: &[(i64, i64)]) -> RowPattern {
    RowPattern::from_integers(field, pairs).expect("valid sample pattern")
}

/// `x_a = x_{a-1} + x_{a-2}` as a recurrence matrix row
/// `x_a - x_{a-1} - x_{a-2} = 0`, the same rule at every index.
pub fn fibonacci() -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    RecurrenceMatrix::purely_periodic(f, vec![pattern(f, &[(0, 1), (1, -1), (2, -1)])])
        .expect("valid")
}

/// Period-two rule: even rows `x_a - x_{a-1} + x_{a-2} = 0`, odd rows
/// `x_a - 2x_{a-1} + x_{a-2} - x_{a-4} = 0`.
pub fn linrec2() -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    RecurrenceMatrix::purely_periodic(
        f,
        vec![
            pattern(f, &[(0, 1), (1, -1), (2, 1)]),
            pattern(f, &[(0, 1), (1, -2), (2, 1), (4, -1)]),
        ],
    )
    .expect("valid")
}

/// Small eventually-periodic example with distinct tails: width-two rows on
/// the left, width-one rows on the right, and two exceptional middle rows
/// (a bare pivot at row 0, a gap at row 1).
pub fn pivots() -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    RecurrenceMatrix::new(
        f,
        vec![pattern(f, &[(0, 1), (1, 1), (2, 1)])],
        0,
        vec![pattern(f, &[(0, 1)]), pattern(f, &[(0, 1), (2, 1)])],
        vec![pattern(f, &[(0, 1), (1, 1)])],
    )
    .expect("valid")
}

/// Same support as [`pivots`] with all off-diagonal signs flipped.
pub fn pivots_signed() -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    RecurrenceMatrix::new(
        f,
        vec![pattern(f, &[(0, 1), (1, -1), (2, -1)])],
        0,
        vec![pattern(f, &[(0, 1)]), pattern(f, &[(0, 1), (2, -1)])],
        vec![pattern(f, &[(0, 1), (1, -1)])],
    )
    .expect("valid")
}

/// Period-eight reduced matrix whose four solution chains have throws of
/// mixed lengths; exercises wide bands and residue bookkeeping.
pub fn cover() -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    RecurrenceMatrix::purely_periodic(
        f,
        vec![
            pattern(f, &[(0, 1), (1, 1)]),
            pattern(f, &[(0, 1), (1, 3), (3, -2), (4, -1), (6, 1)]),
            pattern(f, &[(0, 1), (1, 2), (2, 5), (4, -3), (5, -1)]),
            pattern(f, &[(0, 1), (1, 1), (2, 1), (3, 2), (5, -1)]),
            pattern(f, &[(0, 1), (1, 5), (2, 3), (3, 1), (4, 1)]),
            pattern(f, &[(0, 1), (1, 1), (2, 2), (3, 1)]),
            pattern(f, &[(0, 1), (1, 5), (2, 3), (3, 1), (5, -1)]),
            pattern(f, &[(0, 1), (1, 1), (2, 2), (3, 1)]),
        ],
    )
    .expect("valid")
}

pub fn identity() -> RecurrenceMatrix {
    RecurrenceMatrix::identity(FieldKind::Rational)
}

/// The one-sided Fibonacci recurrence embedded on the integers: the rows
/// for the two initial variables (and everything left of them) are bare
/// pivots, the rest is the Fibonacci rule. Deliberately not reduced.
pub fn one_sided_fibonacci() -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    RecurrenceMatrix::new(
        f,
        vec![pattern(f, &[(0, 1)])],
        0,
        vec![pattern(f, &[(0, 1)]), pattern(f, &[(0, 1)])],
        vec![pattern(f, &[(0, 1), (1, -1), (2, -1)])],
    )
    .expect("valid")
}

/// Three-row constraint system (not unitriangular): `x_{-1} = 0`,
/// `x_{-2} - x_0 = 0`, `x_0 + x_1 + x_2 = 0`.
pub fn three_constraints() -> Vec<Vec<(i64, Scalar)>> {
    let f = FieldKind::Rational;
    let row = |pairs: &[(i64, i64)]| -> Vec<(i64, Scalar)> {
        pairs.iter().map(|&(i, v)| (i, Scalar::from_integer(f, v))).collect()
    };
    vec![
        row(&[(-1, 1)]),
        row(&[(-2, 1), (0, -1)]),
        row(&[(0, 1), (1, 1), (2, 1)]),
    ]
}

/// Period-eight tame frieze with seven rows; odd rows sit half a step to
/// the right of even rows.
pub fn frieze_text() -> &'static str {
    "1 1 1 1 1 1 1 1\n 3 2 2 1 4 3 1 2\n5 5 3 1 3 11 2 1\n 8 7 1 2 8 7 1 2\n3 11 2 1 5 5 3 1\n 4 3 1 2 3 2 2 1\n1 1 1 1 1 1 1 1\n"
}
