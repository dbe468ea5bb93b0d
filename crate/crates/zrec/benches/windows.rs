//! Parallel vs sequential timings for the two fan-out hot spots: dense
//! window extraction (per-column fill) and batched box rank checks. With
//! the `parallel` feature off, the "parallel" entries degrade to the same
//! sequential code path, so the group doubles as a regression guard.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use zrec::combinatorics::{box_rank_check, box_rank_checks};
use zrec::kernel;
use zrec::samples;
use zrec::window::{dense_window, dense_window_seq};

fn adjugate_windows(crit: &mut Criterion) {
    let c = samples::cover();
    let adj = kernel::adjugate(&c);
    let span = ((-40, 40), (-40, 40));
    let mut group = crit.benchmark_group("adjugate-window-81x81");
    group.bench_function("parallel", |b| {
        b.iter(|| dense_window(black_box(&adj), span.0, span.1))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| dense_window_seq(black_box(&adj), span.0, span.1))
    });
    group.finish();
}

fn solution_windows(crit: &mut Criterion) {
    let c = samples::cover();
    let sol = kernel::solution(&c).expect("cover is reduced");
    let span = ((-30, 30), (-30, 30));
    let mut group = crit.benchmark_group("solution-window-61x61");
    group.bench_function("parallel", |b| {
        b.iter(|| dense_window(black_box(&sol), span.0, span.1))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| dense_window_seq(black_box(&sol), span.0, span.1))
    });
    group.finish();
}

fn box_checks(crit: &mut Criterion) {
    let c = samples::cover();
    let mut boxes = Vec::new();
    for a in (-12..=6).step_by(3) {
        for col in (-12..=6).step_by(3) {
            boxes.push(((a, a + 6), (col, col + 6)));
        }
    }
    let mut group = crit.benchmark_group("box-rank-checks-49");
    group.bench_function("parallel", |b| {
        b.iter(|| box_rank_checks(black_box(&c), black_box(&boxes)).expect("reduced"))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            boxes
                .iter()
                .map(|&(rows, cols)| box_rank_check(black_box(&c), rows, cols).expect("reduced"))
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group!(benches, adjugate_windows, solution_windows, box_checks);
criterion_main!(benches);
