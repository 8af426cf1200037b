//! The dimension inequalities gating every construction.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::GroupAction;
use crate::family::MapFamily;
use crate::partition::{all_partitions, compatible_subset, induced_partition, Partition};

/// Largest family size for which unrealized partitions are listed too.
pub const ALL_PARTITIONS_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subject {
    /// `(G,X)_N`.
    Period { n: usize },
    /// `X_P` for a partition of the family.
    Partition { partition: Partition },
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Period { n } => write!(f, "N={n}"),
            Subject::Partition { partition } => write!(f, "P={:?}", partition.blocks()),
        }
    }
}

/// One strict inequality `dim < (r/2)·count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisEntry {
    pub subject: Subject,
    /// Number of points in the constrained set.
    pub points: usize,
    pub dim: i64,
    /// `N` or `|P|`.
    pub count: usize,
    pub bound: f64,
    pub holds: bool,
}

impl fmt::Display for HypothesisEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: dim {} < {} ({} points) {}",
            self.subject,
            self.dim,
            self.bound,
            self.points,
            if self.holds { "ok" } else { "FAILS" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub r: usize,
    pub entries: Vec<HypothesisEntry>,
    pub passed: bool,
}

impl HypothesisReport {
    fn new(r: usize, entries: Vec<HypothesisEntry>) -> Self {
        let passed = entries.iter().all(|e| e.holds);
        HypothesisReport { r, entries, passed }
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }

    /// Human-readable summary of the failing inequalities.
    pub fn failure_summary(&self) -> String {
        self.failures()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn entry(subject: Subject, points: usize, dim: i64, count: usize, r: usize) -> HypothesisEntry {
    HypothesisEntry {
        subject,
        points,
        dim,
        count,
        bound: r as f64 * count as f64 / 2.0,
        // dim < r·count/2, compared in integers
        holds: 2 * dim < (r * count) as i64,
    }
}

/// `dim X_P < (r/2)|P|` for every partition realized by a source point, and
/// for every partition of `[N]` when `all` is set and `N ≤ 8`.
pub fn check_hypotheses_family(fam: &MapFamily, r: usize, all: bool) -> HypothesisReport {
    let src = fam.source();
    let points: Vec<usize> = (0..src.n_points()).collect();
    let mut partitions: BTreeSet<Partition> = points
        .iter()
        .map(|&x| induced_partition(fam, x).expect("source index"))
        .collect();
    if all && fam.len() <= ALL_PARTITIONS_MAX {
        partitions.extend(all_partitions(fam.len()));
    }
    let entries = partitions
        .into_iter()
        .map(|p| {
            let xp = compatible_subset(fam, &points, &p).expect("matching ground");
            let count = p.len();
            entry(
                Subject::Partition { partition: p },
                xp.len(),
                src.dim(&xp),
                count,
                r,
            )
        })
        .collect();
    HypothesisReport::new(r, entries)
}

/// `dim (G,X)_N < (r/2)N` for `N = 1..=n_max`.
pub fn check_hypotheses_action(a: &GroupAction, r: usize, n_max: usize) -> HypothesisReport {
    let entries = (1..=n_max)
        .map(|n| {
            let set = a.periodic_set(n);
            entry(Subject::Period { n }, set.len(), a.space().dim(&set), n, r)
        })
        .collect();
    HypothesisReport::new(r, entries)
}

/// Size of the largest orbit; beyond it every `(G,X)_N` is all of `X`.
pub fn max_orbit_size(a: &GroupAction) -> usize {
    (0..a.space().n_points())
        .map(|x| a.orbit(x).map(|o| o.len()).unwrap_or(1))
        .max()
        .unwrap_or(1)
}
