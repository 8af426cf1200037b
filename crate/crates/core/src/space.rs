//! Finite samples of compact metric spaces.
//!
//! A [`FiniteSpace`] is an index set `0..n` with an explicit metric matrix.
//! Finite samples are topologically zero-dimensional, so the dimension of the
//! approximated continuum travels with the sample as declared structure: an
//! optional simplicial complex and optional per-subset dimension labels.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used only when checking the triangle inequality of
/// floating-point metric input.
const TRIANGLE_SLACK: f64 = 1e-12;

/// Ambient coordinates for the shifted-brick cover backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coords {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

/// Declares that the region touched by `subset` has covering dimension `dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimLabel {
    pub subset: Vec<usize>,
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace {
    metric: Vec<Vec<f64>>,
    simplices: Vec<Vec<usize>>,
    dim_labels: Vec<DimLabel>,
    coords: Option<Coords>,
}

impl FiniteSpace {
    /// Builds a space from a square metric matrix. Metric axioms are not
    /// enforced here; see [`validate_space`].
    pub fn new(metric: Vec<Vec<f64>>) -> Result<Self> {
        let n = metric.len();
        for (i, row) in metric.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(
                    format!("metric[{i}]"),
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
        }
        Ok(FiniteSpace {
            metric,
            simplices: Vec::new(),
            dim_labels: Vec::new(),
            coords: None,
        })
    }

    pub fn with_simplices(mut self, simplices: Vec<Vec<usize>>) -> Result<Self> {
        for (s, simplex) in simplices.iter().enumerate() {
            for (k, &v) in simplex.iter().enumerate() {
                if v >= self.n_points() {
                    return Err(Error::input(
                        format!("simplices[{s}][{k}]"),
                        format!("vertex {v} out of range"),
                    ));
                }
            }
        }
        self.simplices = simplices;
        Ok(self)
    }

    pub fn with_dim_labels(mut self, labels: Vec<DimLabel>) -> Result<Self> {
        for (l, label) in labels.iter().enumerate() {
            for (k, &v) in label.subset.iter().enumerate() {
                if v >= self.n_points() {
                    return Err(Error::input(
                        format!("dim_labels[{l}].subset[{k}]"),
                        format!("index {v} out of range"),
                    ));
                }
            }
        }
        self.dim_labels = labels;
        Ok(self)
    }

    pub fn with_coords(mut self, coords: Coords) -> Result<Self> {
        if coords.points.len() != self.n_points() {
            return Err(Error::input(
                "points",
                format!(
                    "{} coordinate rows for a space with {} points",
                    coords.points.len(),
                    self.n_points()
                ),
            ));
        }
        for (i, p) in coords.points.iter().enumerate() {
            if p.len() != coords.dim {
                return Err(Error::input(
                    format!("points[{i}]"),
                    format!("expected {} coordinates, found {}", coords.dim, p.len()),
                ));
            }
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn n_points(&self) -> usize {
        self.metric.len()
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric[i][j]
    }

    pub fn metric(&self) -> &[Vec<f64>] {
        &self.metric
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn dim_labels(&self) -> &[DimLabel] {
        &self.dim_labels
    }

    pub fn coords(&self) -> Option<&Coords> {
        self.coords.as_ref()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n_points() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                n_points: self.n_points(),
            })
        }
    }

    /// Largest pairwise distance inside `subset`; zero for sets of size < 2.
    pub fn diameter(&self, subset: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                best = best.max(self.metric[i][j]);
            }
        }
        best
    }

    /// Smallest strictly positive distance, or `None` for fewer than two points.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let n = self.n_points();
        let mut best: Option<f64> = None;
        for i in 0..n {
            for j in i + 1..n {
                let d = self.metric[i][j];
                if d > 0.0 {
                    best = Some(best.map_or(d, |b: f64| b.min(d)));
                }
            }
        }
        best
    }

    /// The declared dimension of a subset.
    ///
    /// * the empty set has dimension −1;
    /// * a nonempty set has dimension at least 0;
    /// * every simplex whose vertices all lie in the subset contributes its
    ///   dimension (the full subcomplex spanned by the subset);
    /// * every dimension label whose subset meets the subset contributes its
    ///   declared dimension.
    ///
    /// Each rule is monotone under inclusion, hence so is the maximum.
    pub fn dim(&self, subset: &[usize]) -> i64 {
        if subset.is_empty() {
            return -1;
        }
        let mut member = vec![false; self.n_points()];
        for &i in subset {
            member[i] = true;
        }
        let mut d = 0i64;
        for simplex in &self.simplices {
            if !simplex.is_empty() && simplex.iter().all(|&v| member[v]) {
                d = d.max(simplex.len() as i64 - 1);
            }
        }
        for label in &self.dim_labels {
            if label.subset.iter().any(|&v| member[v]) {
                d = d.max(label.dim);
            }
        }
        d
    }

    /// Dimension of the whole space.
    pub fn total_dim(&self) -> i64 {
        let all: Vec<usize> = (0..self.n_points()).collect();
        self.dim(&all)
    }

    /// The induced subspace on `indices` (in the given order). Simplices are
    /// kept when fully contained, labels are intersected, coordinates are
    /// restricted.
    pub fn subspace(&self, indices: &[usize]) -> Result<FiniteSpace> {
        let mut local = vec![usize::MAX; self.n_points()];
        for (k, &i) in indices.iter().enumerate() {
            self.check_index(i)?;
            local[i] = k;
        }
        let metric = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.metric[i][j]).collect())
            .collect();
        let simplices = self
            .simplices
            .iter()
            .filter(|s| s.iter().all(|&v| local[v] != usize::MAX))
            .map(|s| s.iter().map(|&v| local[v]).collect())
            .collect();
        let dim_labels = self
            .dim_labels
            .iter()
            .filter_map(|l| {
                let subset: Vec<usize> = l
                    .subset
                    .iter()
                    .filter(|&&v| local[v] != usize::MAX)
                    .map(|&v| local[v])
                    .collect();
                (!subset.is_empty()).then_some(DimLabel {
                    subset,
                    dim: l.dim,
                })
            })
            .collect();
        let coords = self.coords.as_ref().map(|c| Coords {
            dim: c.dim,
            points: indices.iter().map(|&i| c.points[i].clone()).collect(),
        });
        Ok(FiniteSpace {
            metric,
            simplices,
            dim_labels,
            coords,
        })
    }
}

/// A single problem found by [`validate_space`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonFinite { i: usize, j: usize },
    Negative { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    ZeroDistance { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize },
    DimNotMonotone { smaller: Vec<usize>, larger: Vec<usize> },
    LabelBelowOracle { label: usize, declared: i64, oracle: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { i, j } => write!(f, "metric[{i}][{j}]: non-finite distance"),
            Violation::Negative { i, j } => write!(f, "metric[{i}][{j}]: negative distance"),
            Violation::NonzeroDiagonal { i } => {
                write!(f, "metric[{i}][{i}]: nonzero distance from a point to itself")
            }
            Violation::ZeroDistance { i, j } => {
                write!(f, "metric[{i}][{j}]: zero distance between distinct points")
            }
            Violation::Asymmetric { i, j } => {
                write!(f, "metric[{i}][{j}]: differs from metric[{j}][{i}]")
            }
            Violation::Triangle { i, j, k } => write!(
                f,
                "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
            ),
            Violation::DimNotMonotone { smaller, larger } => write!(
                f,
                "dimension not monotone: dim({smaller:?}) > dim({larger:?})"
            ),
            Violation::LabelBelowOracle {
                label,
                declared,
                oracle,
            } => write!(
                f,
                "dim_labels[{label}]: declared {declared} but overlapping labels give {oracle}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Number of random nested subset pairs probed for dimension monotonicity.
const MONOTONE_SAMPLES: usize = 256;

/// Reports every violated metric axiom and every dimension monotonicity
/// violation found on sampled nested subset pairs.
pub fn validate_space(s: &FiniteSpace) -> ValidationReport {
    let n = s.n_points();
    let m = s.metric();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let d = m[i][j];
            if !d.is_finite() {
                violations.push(Violation::NonFinite { i, j });
                continue;
            }
            if d < 0.0 {
                violations.push(Violation::Negative { i, j });
            }
            if i == j {
                if d != 0.0 {
                    violations.push(Violation::NonzeroDiagonal { i });
                }
            } else if i < j {
                if d == 0.0 {
                    violations.push(Violation::ZeroDistance { i, j });
                }
                if d != m[j][i] {
                    violations.push(Violation::Asymmetric { i, j });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in i + 1..n {
                if j == i || j == k {
                    continue;
                }
                let lhs = m[i][k];
                let rhs = m[i][j] + m[j][k];
                if lhs > rhs + TRIANGLE_SLACK * lhs.abs().max(1.0) {
                    violations.push(Violation::Triangle { i, j, k });
                }
            }
        }
    }

    for (l, label) in s.dim_labels().iter().enumerate() {
        let oracle = s.dim(&label.subset);
        if oracle > label.dim {
            violations.push(Violation::LabelBelowOracle {
                label: l,
                declared: label.dim,
                oracle,
            });
        }
    }

    if n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..MONOTONE_SAMPLES {
            order.shuffle(&mut rng);
            let big = rng.gen_range(1..=n);
            let small = rng.gen_range(0..=big);
            let mut larger = order[..big].to_vec();
            let mut smaller = order[..small].to_vec();
            larger.sort_unstable();
            smaller.sort_unstable();
            if s.dim(&smaller) > s.dim(&larger) {
                violations.push(Violation::DimNotMonotone { smaller, larger });
            }
        }
    }
    ValidationReport { violations }
}
