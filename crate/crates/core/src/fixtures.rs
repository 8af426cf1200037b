//! Small reference spaces and actions used by tests, the oracle sweeps and
//! the bundled example inputs.

use std::f64::consts::PI;

use crate::action::{GroupAction, Perm, DEFAULT_GROUP_CAP};
use crate::space::{Coords, FiniteSpace};

/// `n` equally spaced points on the unit circle with the chord metric. The
/// cycle edges are declared as 1-simplices and the angle is the single
/// coordinate.
pub fn circle(n: usize) -> FiniteSpace {
    let angle = |i: usize| 2.0 * PI * i as f64 / n as f64;
    let metric = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        let k = (i as i64 - j as i64).rem_euclid(n as i64) as usize;
                        let k = k.min(n - k);
                        2.0 * (PI * k as f64 / n as f64).sin()
                    }
                })
                .collect()
        })
        .collect();
    let simplices = if n >= 2 {
        (0..n)
            .map(|i| {
                let mut e = vec![i, (i + 1) % n];
                e.sort_unstable();
                e
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .filter(|e: &Vec<usize>| e[0] != e[1])
            .collect()
    } else {
        Vec::new()
    };
    let coords = Coords {
        dim: 1,
        points: (0..n).map(|i| vec![angle(i)]).collect(),
    };
    FiniteSpace::new(metric)
        .and_then(|s| s.with_simplices(simplices))
        .and_then(|s| s.with_coords(coords))
        .expect("circle fixture is well formed")
}

/// Points `0..n` on a line with unit spacing; consecutive points span edges.
pub fn path(n: usize) -> FiniteSpace {
    let metric = (0..n)
        .map(|i| (0..n).map(|j| (i as f64 - j as f64).abs()).collect())
        .collect();
    let simplices = (1..n).map(|i| vec![i - 1, i]).collect();
    let coords = Coords {
        dim: 1,
        points: (0..n).map(|i| vec![i as f64]).collect(),
    };
    FiniteSpace::new(metric)
        .and_then(|s| s.with_simplices(simplices))
        .and_then(|s| s.with_coords(coords))
        .expect("path fixture is well formed")
}

/// `rows × cols` grid with the Euclidean metric, unit spacing, triangulated,
/// with planar coordinates.
pub fn grid(rows: usize, cols: usize) -> FiniteSpace {
    let n = rows * cols;
    let pos = |i: usize| ((i / cols) as f64, (i % cols) as f64);
    let metric = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (a, b) = (pos(i), pos(j));
                    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
                })
                .collect()
        })
        .collect();
    let mut simplices = Vec::new();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            let v = r * cols + c;
            simplices.push(vec![v, v + 1, v + cols]);
            simplices.push(vec![v + 1, v + cols, v + cols + 1]);
        }
    }
    let coords = Coords {
        dim: 2,
        points: (0..n).map(|i| vec![pos(i).0, pos(i).1]).collect(),
    };
    FiniteSpace::new(metric)
        .and_then(|s| s.with_simplices(simplices))
        .and_then(|s| s.with_coords(coords))
        .expect("grid fixture is well formed")
}

/// Cyclic group generated by rotating the `n`-point circle by `step`.
pub fn rotation_action(n: usize, step: usize) -> GroupAction {
    GroupAction::generate(circle(n), vec![Perm::rotation(n, step)], DEFAULT_GROUP_CAP)
        .expect("rotation fixture is well formed")
}

/// `Z/2` acting on the `n`-point circle (n even) by the antipodal map.
pub fn antipodal_action(n: usize) -> GroupAction {
    rotation_action(n, n / 2)
}

/// The trivial group acting on the `n`-point circle.
pub fn trivial_action(n: usize) -> GroupAction {
    GroupAction::generate(circle(n), Vec::new(), DEFAULT_GROUP_CAP)
        .expect("trivial fixture is well formed")
}
