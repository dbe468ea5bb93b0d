//! Juggling-diagram renderer. Each solution chain of the matrix becomes one
//! colored polyline over the time axis: a throw from `S(a)` to `a` is drawn
//! as a triangle arc peaking at the throw height `a - S(a)`. Fixed points
//! `S(a) = a` appear as dashed circles on the axis.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use zrec::recmat::RecurrenceMatrix;

const PALETTE: [&str; 6] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const STEP_X: f64 = 36.0;
const STEP_Y: f64 = 20.0;
const MARGIN_X: f64 = 30.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 34.0;

/// Chains and fixed points of the shape map restricted to a window. Every
/// chain is listed ascending and chains are ordered by first element, so
/// the output is deterministic.
fn chains_on_window(c: &RecurrenceMatrix, lo: i64, hi: i64) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut chains: Vec<Vec<i64>> = Vec::new();
    let mut fixed: Vec<i64> = Vec::new();
    let mut seen: BTreeSet<i64> = BTreeSet::new();
    for a in lo..=hi {
        if c.shape(a) == a {
            fixed.push(a);
            continue;
        }
        if seen.contains(&a) {
            continue;
        }
        let mut start = a;
        loop {
            let s = c.shape(start);
            if s < lo || s == start {
                break;
            }
            start = s;
        }
        let mut chain = vec![start];
        seen.insert(start);
        let mut cur = start;
        while let Some(next) = c.shape_preimage(cur) {
            if next == cur || next > hi {
                break;
            }
            chain.push(next);
            seen.insert(next);
            cur = next;
        }
        chains.push(chain);
    }
    (chains, fixed)
}

pub fn render_juggling(c: &RecurrenceMatrix, window: (i64, i64)) -> Result<String, String> {
    let (lo, hi) = window;
    if lo > hi {
        return Err("window start exceeds its end".into());
    }
    if !c.is_reduced() {
        return Err("juggling diagrams need a reduced matrix".into());
    }
    let (chains, fixed) = chains_on_window(c, lo, hi);

    let max_height = chains
        .iter()
        .flat_map(|ch| ch.windows(2).map(|w| w[1] - w[0]))
        .max()
        .unwrap_or(1)
        .max(1);
    let width = 2.0 * MARGIN_X + (hi - lo) as f64 * STEP_X;
    let base_y = MARGIN_TOP + max_height as f64 * STEP_Y;
    let height = base_y + MARGIN_BOTTOM;
    let x = |a: i64| MARGIN_X + (a - lo) as f64 * STEP_X;
    let y = |h: i64| base_y - h as f64 * STEP_Y;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.1} {height:.1}\" \
         width=\"{width:.1}\" height=\"{height:.1}\">"
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{:.1}\" y1=\"{base_y:.1}\" x2=\"{:.1}\" y2=\"{base_y:.1}\" \
         stroke=\"#888888\" stroke-width=\"1\"/>",
        x(lo) - 10.0,
        x(hi) + 10.0
    );
    for a in lo..=hi {
        let _ = writeln!(
            svg,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" text-anchor=\"middle\" \
             fill=\"#555555\">{a}</text>",
            x(a),
            base_y + 16.0
        );
    }
    for (i, chain) in chains.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if chain.len() >= 2 {
            let mut points = format!("{:.1},{:.1}", x(chain[0]), base_y);
            for pair in chain.windows(2) {
                let (s, t) = (pair[0], pair[1]);
                let _ = write!(
                    points,
                    " {:.1},{:.1} {:.1},{:.1}",
                    (x(s) + x(t)) / 2.0,
                    y(t - s),
                    x(t),
                    base_y
                );
            }
            let _ = writeln!(
                svg,
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" \
                 points=\"{points}\"/>"
            );
        }
        for &a in chain {
            let _ = writeln!(
                svg,
                "  <circle cx=\"{:.1}\" cy=\"{base_y:.1}\" r=\"3.5\" fill=\"{color}\"/>",
                x(a)
            );
        }
    }
    for &a in &fixed {
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.1}\" cy=\"{base_y:.1}\" r=\"3.5\" fill=\"none\" \
             stroke=\"#555555\" stroke-dasharray=\"2,2\"/>",
            x(a)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
