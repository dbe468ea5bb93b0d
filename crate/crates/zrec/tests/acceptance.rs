//! Acceptance gate: fourteen numbered checks covering regression values,
//! algebraic identities, combinatorial counts, and randomized property
//! sweeps. Every comparison is exact; random draws use fixed seeds. Each
//! check is one test, so the harness prints one pass/fail line per
//! criterion.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zrec::combinatorics::{
    ball_set, box_rank_check, count_balls, defects, rank_matrix_entry, reduced_from_kernel,
    SubspaceData,
};
use zrec::frieze::{check_superperiodic, frieze_to_recurrence, validate_tame, Frieze, TameOutcome};
use zrec::kernel::{
    adjugate, extend_solution, kernel_basis, solution, solve_affine, solve_one_sided, splitting,
    t_set, AdjugateView,
};
use zrec::oracle;
use zrec::recdsl;
use zrec::reduction::{reduce_with, SweepOrder, DEFAULT_FUEL};
use zrec::samples;
use zrec::view::{compose, CpView};
use zrec::{dense_window, FieldKind, MatrixView, ProductView, RecurrenceMatrix, RowPattern, Scalar};

fn rat(n: i64) -> Scalar {
    Scalar::from_integer(FieldKind::Rational, n)
}

fn corpus() -> Vec<RecurrenceMatrix> {
    vec![
        samples::fibonacci(),
        samples::linrec2(),
        samples::pivots(),
        samples::cover(),
        samples::identity(),
    ]
}

/// F_0 = 0, F_1 = 1, valid for the small indices used here.
fn fibn(k: i64) -> i64 {
    assert!(k >= 0);
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 0..k {
        let t = a + b;
        a = b;
        b = t;
    }
    a
}

fn det_of(entry: &dyn Fn(i64, i64) -> Scalar, rows: &[i64], cols: &[i64]) -> Scalar {
    assert_eq!(rows.len(), cols.len());
    let m: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| entry(r, c)).collect())
        .collect();
    oracle::det(m, FieldKind::Rational)
}

#[test]
fn c01_fibonacci_adjugate_column() {
    let adj = adjugate(&samples::fibonacci());
    let want = [1, 1, 2, 3, 5, 8, 13];
    for (i, &w) in want.iter().enumerate() {
        assert_eq!(adj.entry(i as i64, 0), rat(w), "row {i}");
    }
    println!("criterion 01: pass");
}

#[test]
fn c02_fibonacci_solution_columns() {
    let sol = solution(&samples::fibonacci()).unwrap();
    for a in -4..=4i64 {
        for b in a - 6..=a + 6 {
            let d = b - a;
            let want = if d + 1 >= 0 {
                rat(fibn(d + 1))
            } else {
                let v = fibn(-d - 1);
                if d.rem_euclid(2) == 0 {
                    rat(v)
                } else {
                    rat(-v)
                }
            };
            assert_eq!(sol.entry(b, a), want, "col {a} row {b}");
        }
    }
    println!("criterion 02: pass");
}

#[test]
fn c03_two_clause_system_regression() {
    let text = "x[i] = x[i-1] - x[i-2] for i % 2 == 0;\n\
                x[i] = 2*x[i-1] - x[i-2] + x[i-4] for i % 2 == 1;\n";
    let spec = recdsl::parse(text).unwrap();
    let c = spec.matrix;
    assert!(c.semantic_eq(&samples::linrec2()));
    assert!(c.is_reduced());

    // First subdiagonal of the adjugate alternates 2 (even col) and 1.
    let adj = adjugate(&c);
    for a in -6..=6i64 {
        let want = if a.rem_euclid(2) == 0 { 2 } else { 1 };
        assert_eq!(adj.entry(a + 1, a), rat(want), "col {a}");
    }

    let seeds: BTreeMap<i64, Scalar> =
        [(-3, rat(0)), (-1, rat(2)), (0, rat(1))].into_iter().collect();
    let got = extend_solution(&c, &seeds, (-6, 8)).unwrap();
    let want = [1, 0, -1, 0, 1, 2, 1, 0, -1, 0, 1, 2, 1, 0, -1];
    assert_eq!(got, want.map(rat).to_vec());
    // Six-periodic across the window.
    for i in 0..got.len() - 6 {
        assert_eq!(got[i], got[i + 6]);
    }
    println!("criterion 03: pass");
}

/// Rebuild a ball's member set on a window from its packed description.
fn ball_members(ball: &zrec::combinatorics::Ball, lo: i64, hi: i64) -> BTreeSet<i64> {
    let mut out: BTreeSet<i64> = ball.chain.iter().copied().filter(|x| (lo..=hi).contains(x)).collect();
    let first = *ball.chain.first().expect("chains are nonempty");
    let mut x = first - ball.left_shift;
    while x >= lo {
        if x <= hi {
            out.insert(x);
        }
        x -= ball.left_shift;
    }
    if let Some(step) = ball.right_shift {
        let last = *ball.chain.last().unwrap();
        let mut x = last + step;
        while x <= hi {
            if x >= lo {
                out.insert(x);
            }
            x += step;
        }
    }
    out
}

#[test]
fn c04_ball_counts_and_enumeration() {
    assert_eq!(count_balls(&samples::fibonacci()).unwrap(), 2);
    assert_eq!(count_balls(&samples::pivots()).unwrap(), 2);
    assert_eq!(count_balls(&samples::cover()).unwrap(), 4);
    assert_eq!(count_balls(&samples::identity()).unwrap(), 0);

    // Fibonacci balls are the even and the odd integers.
    let fib_balls = ball_set(&samples::fibonacci()).unwrap();
    let members: Vec<BTreeSet<i64>> =
        fib_balls.balls.iter().map(|b| ball_members(b, -8, 8)).collect();
    let evens: BTreeSet<i64> = (-8..=8).filter(|x| x % 2 == 0).collect();
    let odds: BTreeSet<i64> = (-8..=8).filter(|x| x % 2 != 0).collect();
    assert!(members.contains(&evens));
    assert!(members.contains(&odds));

    // The staircase example: one ball of negative evens ending at -2, one
    // ball through the negative odds that continues up the positive line.
    let piv_balls = ball_set(&samples::pivots()).unwrap();
    let members: Vec<BTreeSet<i64>> =
        piv_balls.balls.iter().map(|b| ball_members(b, -9, 9)).collect();
    let neg_evens: BTreeSet<i64> = [-8, -6, -4, -2].into_iter().collect();
    let hook: BTreeSet<i64> =
        [-9, -7, -5, -3, -1].into_iter().chain(1..=9).collect();
    assert!(members.contains(&neg_evens), "{members:?}");
    assert!(members.contains(&hook), "{members:?}");
    println!("criterion 04: pass");
}

/// Id plus one periodic off-diagonal coefficient; trivial when `d % p != 0`.
fn elementary(p: i64, r: i64, d: i64, alpha: i64) -> RecurrenceMatrix {
    let f = FieldKind::Rational;
    let pats = (0..p)
        .map(|i| {
            if i == r.rem_euclid(p) {
                RowPattern::from_integers(f, &[(0, 1), (d, alpha)]).unwrap()
            } else {
                RowPattern::identity(f)
            }
        })
        .collect();
    RecurrenceMatrix::purely_periodic(f, pats).unwrap()
}

#[test]
fn c05_reduction_is_unique_under_sweep_orders() {
    let bases = [samples::fibonacci(), samples::linrec2(), samples::pivots()];
    let orders = [
        SweepOrder::ShapeAscending,
        SweepOrder::ShapeDescending,
        SweepOrder::RowAscending,
        SweepOrder::RowDescending,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..102 {
        let base = &bases[case % bases.len()];
        let mut c = base.clone();
        let m = rng.gen_range(1..=5);
        for _ in 0..m {
            let p = rng.gen_range(2..=4i64);
            let d = loop {
                let d = rng.gen_range(1..=4i64);
                if d % p != 0 {
                    break d;
                }
            };
            let r = rng.gen_range(0..p);
            let alpha = [-4, -3, -2, -1, 1, 2, 3, 4][rng.gen_range(0..8)];
            c = compose(&elementary(p, r, d, alpha), &c).unwrap();
        }
        for order in orders {
            let red = reduce_with(&c, DEFAULT_FUEL, order)
                .unwrap_or_else(|e| panic!("case {case}, {order:?}: {e}"));
            assert!(red.semantic_eq(base), "case {case}, {order:?}");
        }
    }
    println!("criterion 05: pass");
}

#[test]
fn c06_inverse_identities() {
    let span = (-8i64, 8i64);
    for c in corpus() {
        let adj = adjugate(&c);
        assert!(dense_window(&ProductView::new(&adj, &c), span, span).is_identity_block());
        assert!(dense_window(&ProductView::new(&c, &adj), span, span).is_identity_block());

        // Double adjugate returns the original matrix.
        let adj2 = AdjugateView::new(adjugate(&c));
        for b in span.0..=span.1 {
            for a in b..=span.1 {
                assert_eq!(adj2.entry(a, b), c.entry(a, b), "({a}, {b})");
            }
        }
    }

    // Adjugate of a product is the reversed product of adjugates.
    let pairs = [
        (samples::fibonacci(), samples::pivots()),
        (samples::linrec2(), samples::fibonacci()),
    ];
    for (c, d) in pairs {
        let cd = compose(&c, &d).unwrap();
        let adj_cd = adjugate(&cd);
        let adj_c = adjugate(&c);
        let adj_d = adjugate(&d);
        for b in span.0..=span.1 {
            for a in b..=span.1 {
                let mut sum = rat(0);
                for k in b..=a {
                    sum = sum.add(&adj_d.entry(a, k).mul(&adj_c.entry(k, b)));
                }
                assert_eq!(adj_cd.entry(a, b), sum, "({a}, {b})");
            }
        }
    }

    // Minor duality: an adjugate minor equals a complementary minor of the
    // matrix, transposed and signed by the index sums.
    let mats = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..200 {
        let c = &mats[case % mats.len()];
        let adj = adjugate(c);
        let a = rng.gen_range(-8..=4i64);
        let b = rng.gen_range(a + 1..=(a + 4).min(8));
        let len = (b - a + 1) as usize;
        let k = rng.gen_range(1..=len.saturating_sub(1).min(4).max(1));
        let pick = |rng: &mut ChaCha8Rng| -> Vec<i64> {
            let mut all: Vec<i64> = (a..=b).collect();
            for i in 0..k {
                let j = rng.gen_range(i..all.len());
                all.swap(i, j);
            }
            let mut s = all[..k].to_vec();
            s.sort_unstable();
            s
        };
        let i_set = pick(&mut rng);
        let j_set = pick(&mut rng);
        let co = |s: &[i64]| -> Vec<i64> { (a..=b).filter(|x| !s.contains(x)).collect() };
        let lhs = det_of(&|r, cc| adj.entry(r, cc), &i_set, &j_set);
        let rhs = det_of(&|r, cc| c.entry(r, cc), &co(&j_set), &co(&i_set));
        let parity: i64 = (i_set.iter().sum::<i64>() + j_set.iter().sum::<i64>()).rem_euclid(2);
        let want = if parity == 0 { rhs } else { rhs.neg() };
        assert_eq!(lhs, want, "case {case}: I {i_set:?} J {j_set:?} in [{a}, {b}]");
    }
    println!("criterion 06: pass");
}

#[test]
fn c07_solution_identities_and_vanishing() {
    let span = (-10i64, 10i64);
    for c in corpus() {
        let sol = solution(&c).unwrap();
        let spl = splitting(&c).unwrap();
        let cp = CpView::new(&c);
        assert!(dense_window(&ProductView::new(&c, &sol), span, span).is_zero());
        assert!(dense_window(&ProductView::new(&sol, &cp), span, span).is_zero());
        assert!(dense_window(&ProductView::new(&c, &spl), span, span).is_identity_block());

        for b in span.0..=span.1 {
            for a in span.0..=span.1 {
                // Column vanishing: above the diagonal and not thrown to
                // from anywhere at or left of b.
                let thrown = c.shape_preimage(a).map_or(false, |p| p <= b);
                if a < b && !thrown {
                    assert!(sol.entry(a, b).is_zero(), "colvan ({a}, {b})");
                }
                // Row vanishing: strictly between the pivot column of row
                // b and the diagonal.
                if c.shape(b) < a && a < b {
                    assert!(sol.entry(a, b).is_zero(), "rowvan ({a}, {b})");
                }
            }
        }
    }
    println!("criterion 07: pass");
}

#[test]
fn c08_rank_matrix_against_oracle_and_defects() {
    for c in corpus() {
        // Exact agreement with brute-forced restriction dimensions.
        for a in -8..=8i64 {
            for b in a..=8 {
                let fast = rank_matrix_entry(&c, a, b).unwrap();
                let slow = oracle::windowed_nullspace(&c, (a, b)).unwrap().len();
                assert_eq!(fast, slow, "[{a}, {b}]");
            }
        }
        // Unit-step and supermodularity laws.
        let r = |a: i64, b: i64| -> i64 {
            if a > b {
                b - a + 1
            } else {
                rank_matrix_entry(&c, a, b).unwrap() as i64
            }
        };
        for a in -8..=7i64 {
            for b in a..=7 {
                let row_step = r(a, b) - r(a + 1, b);
                let col_step = r(a, b) - r(a, b - 1);
                let second = r(a, b) - r(a + 1, b) - r(a, b - 1) + r(a + 1, b - 1);
                assert!(row_step == 0 || row_step == 1);
                assert!(col_step == 0 || col_step == 1);
                assert!(second == 0 || second == -1);
            }
        }
    }

    // The three-constraint subspace: defects and rank triangle match the
    // worked example.
    let rows = samples::three_constraints();
    let data = SubspaceData::Constraints {
        rows: &rows,
        field: FieldKind::Rational,
        outer: (-8, 8),
    };
    assert_eq!(defects(&data, (-3, 3)).unwrap(), vec![(-1, -1), (-2, 0), (0, 2)]);

    let ncols = 17usize;
    let dense: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|row| {
            let mut out = vec![rat(0); ncols];
            for &(i, ref coeff) in row {
                out[(i + 8) as usize] = coeff.clone();
            }
            out
        })
        .collect();
    let basis = oracle::nullspace(dense, ncols, FieldKind::Rational);
    let rank = |a: i64, b: i64| -> usize {
        let rows: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|v| v[(a + 8) as usize..=(b + 8) as usize].to_vec())
            .collect();
        oracle::rank(rows, FieldKind::Rational)
    };
    assert_eq!(rank(-1, -1), 0);
    let triangle: [(i64, &[usize]); 7] = [
        (-3, &[1, 1, 0, 1, 1, 1, 1]),
        (-3, &[2, 1, 1, 2, 2, 2, 2]),
        (-4, &[3, 2, 1, 2, 2, 3, 3]),
        (-4, &[3, 2, 2, 2, 3, 4, 4]),
        (-5, &[4, 3, 3, 2, 3, 4, 5]),
        (-5, &[4, 4, 3, 3, 4, 5, 6]),
        (-6, &[5, 5, 4, 4, 4, 5, 6]),
    ];
    for (len, (start, row)) in triangle.iter().enumerate() {
        for (i, &want) in row.iter().enumerate() {
            let a = start + i as i64;
            let b = a + len as i64;
            assert_eq!(rank(a, b), want, "[{a}, {b}]");
        }
    }
    println!("criterion 08: pass");
}

#[test]
fn c09_box_ranks_bound_ball_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for c in corpus() {
        for case in 0..125 {
            let a = rng.gen_range(-10..=10i64);
            let b = rng.gen_range(a..=10);
            let cc = rng.gen_range(-10..=10i64);
            let d = rng.gen_range(cc..=10);
            let chk = box_rank_check(&c, (a, b), (cc, d)).unwrap();
            assert!(
                chk.rank >= chk.ball_count,
                "case {case}: box [{a}, {b}] x [{cc}, {d}]"
            );
            if chk.condition_holds {
                assert_eq!(
                    chk.rank, chk.ball_count,
                    "case {case}: box [{a}, {b}] x [{cc}, {d}]"
                );
            }
        }
    }
    println!("criterion 09: pass");
}

#[test]
fn c10_schedule_extension_matches_basis_span() {
    let window = (-12i64, 12i64);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for c in corpus() {
        for b in -4..=4i64 {
            let t = t_set(&c, b).unwrap();
            let labels: Vec<i64> = t.iter().collect();
            assert!(labels.iter().all(|&i| window.0 <= i && i <= window.1));
            let values: BTreeMap<i64, Scalar> = labels
                .iter()
                .map(|&i| (i, rat(rng.gen_range(-9..=9))))
                .collect();
            let x = extend_solution(&c, &values, window).unwrap();

            // The extension restricts back to the prescribed values.
            for (&i, v) in &values {
                assert_eq!(&x[(i - window.0) as usize], v, "b {b}, seed {i}");
            }
            if labels.is_empty() {
                assert!(x.iter().all(Scalar::is_zero));
                continue;
            }

            // It also lies in the span of the basis columns, with
            // coordinates solved on the schedule rows.
            let basis = kernel_basis(&c, b, window).unwrap();
            let dim = basis.num_cols();
            assert_eq!(dim, labels.len());
            let mat: Vec<Vec<Scalar>> = labels
                .iter()
                .map(|&i| (0..dim).map(|j| basis.get(i, j as i64).clone()).collect())
                .collect();
            let rhs: Vec<Scalar> = labels.iter().map(|i| values[i].clone()).collect();
            let gamma = oracle::solve(mat, rhs, c.field()).expect("basis spans the schedule");
            for i in window.0..=window.1 {
                let mut acc = rat(0);
                for (j, g) in gamma.iter().enumerate() {
                    acc = acc.add(&g.mul(basis.get(i, j as i64)));
                }
                assert_eq!(acc, x[(i - window.0) as usize], "b {b}, row {i}");
            }
        }
    }
    println!("criterion 10: pass");
}

#[test]
fn c11_affine_solving_and_splitting_wedges() {
    let impulse = "x[i] = x[i-1] + x[i-2] for all i;\n\
                   middle { x[i] = x[i-1] + x[i-2] + 1 for i == 0; }\n";
    let constant = "x[i] = x[i-1] + x[i-2] + 1 for all i;\n";
    for text in [impulse, constant] {
        let spec = recdsl::parse(text).unwrap();
        let (lo, hi) = (-10i64, 10i64);
        let x = solve_affine(&spec, (lo - 2, hi)).unwrap();
        for a in lo..=hi {
            let mut acc = rat(0);
            for (d, coeff) in spec.matrix.row(a).iter() {
                acc = acc.add(&coeff.mul(&x[(a - d - (lo - 2)) as usize]));
            }
            assert_eq!(&acc, spec.rhs.value(a), "residual at {a}");
        }
    }

    // Splitting wedges on either side of the axis column.
    let spl = splitting(&samples::fibonacci()).unwrap();
    for (a, w) in [(0, 1), (1, 1), (2, 2), (3, 3), (4, 5)] {
        assert_eq!(spl.entry(a, 0), rat(w), "row {a}");
    }
    for (a, w) in [(-3, -1), (-4, 1), (-5, -2), (-6, 3), (-7, -5)] {
        assert_eq!(spl.entry(a, -1), rat(w), "row {a}");
    }
    for a in -4..=-1i64 {
        assert!(spl.entry(a, 0).is_zero(), "row {a} col 0");
    }
    for a in 0..=4i64 {
        assert!(spl.entry(a, -1).is_zero(), "row {a} col -1");
    }
    println!("criterion 11: pass");
}

#[test]
fn c12_one_sided_recursion_equals_adjugate_columns() {
    let c = samples::one_sided_fibonacci();
    let adj = adjugate(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..10 {
        let a = rat(rng.gen_range(-9..=9));
        let b = rat(rng.gen_range(-9..=9));
        let initial: BTreeMap<i64, Scalar> =
            [(0, a.clone()), (1, b.clone())].into_iter().collect();
        let xs = solve_one_sided(&c, &initial, 63).unwrap();
        assert_eq!(xs.len(), 64);
        for (n, x) in xs.iter().enumerate() {
            let n = n as i64;
            let want = a.mul(&adj.entry(n, 0)).add(&b.mul(&adj.entry(n, 1)));
            assert_eq!(x, &want, "case {case}, term {n}");
        }
    }
    println!("criterion 12: pass");
}

#[test]
fn c13_frieze_validation_conversion_superperiod() {
    let f = Frieze::parse_text(2, samples::frieze_text()).unwrap();
    assert_eq!(validate_tame(&f), TameOutcome::Tame);

    let c = frieze_to_recurrence(&f, true).unwrap();
    assert!(c.is_reduced());
    let found = check_superperiodic(&c, (-49, 50), 25).unwrap();
    assert_eq!(found, Some((8, 1)));

    // The signed period holds entry-wise on a kernel basis window.
    let basis = kernel_basis(&c, 0, (-30, 30)).unwrap();
    assert!(basis.num_cols() > 0);
    for j in 0..basis.num_cols() as i64 {
        for i in -30..=22i64 {
            assert_eq!(basis.get(i + 8, j), &basis.get(i, j).neg(), "col {j} row {i}");
        }
    }

    // One bumped interior entry breaks a diamond and the conversion.
    let broken_text = samples::frieze_text().replacen("3 2 2 1 4 3 1 2", "4 2 2 1 4 3 1 2", 1);
    let broken = Frieze::parse_text(2, &broken_text).unwrap();
    assert!(!validate_tame(&broken).is_tame());
    assert!(frieze_to_recurrence(&broken, true).is_err());
    println!("criterion 13: pass");
}

#[test]
fn c14_reduced_rows_reconstruct_from_kernel_windows() {
    for c in corpus() {
        let basis = kernel_basis(&c, 0, (-9, 9)).unwrap();
        let rows = reduced_from_kernel(&basis, (-3, 3)).unwrap();
        assert_eq!(rows.len(), 7);
        for (a, pattern) in rows {
            assert_eq!(&pattern, c.row(a), "row {a}");
        }
    }
    println!("criterion 14: pass");
}
