use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// A function `Y → [0,1]^r`, stored pointwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub r: usize,
    pub values: Vec<Vec<f64>>,
}

impl Observable {
    pub fn new(r: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::input("r", "r must be at least 1"));
        }
        for (y, row) in values.iter().enumerate() {
            if row.len() != r {
                return Err(Error::input(
                    format!("values[{y}]"),
                    format!("{} coordinates, expected {r}", row.len()),
                ));
            }
            for (l, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::input(
                        format!("values[{y}][{l}]"),
                        format!("{v} is outside [0, 1]"),
                    ));
                }
            }
        }
        Ok(Observable { r, values })
    }

    /// Checks that the observable is defined on every point of `space`.
    pub fn check_domain(&self, space: &FiniteSpace) -> Result<()> {
        if self.values.len() != space.n_points() {
            return Err(Error::input(
                "values",
                format!(
                    "{} rows for a space with {} points",
                    self.values.len(),
                    space.n_points()
                ),
            ));
        }
        Ok(())
    }

    /// Independent uniform coordinates from a seeded ChaCha stream.
    pub fn sample(n_points: usize, r: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n_points)
            .map(|_| (0..r).map(|_| rng.gen::<f64>()).collect())
            .collect();
        Observable { r, values }
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, y: usize, l: usize) -> f64 {
        self.values[y][l]
    }

    /// `‖self − other‖∞` over all points and coordinates.
    pub fn sup_distance(&self, other: &Observable) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// `min{d(y1, y2) : |f_ℓ(y1) − f_ℓ(y2)| > eps}`, or `None` (infinity) when no
/// pair varies by more than `eps`. Any two points strictly closer than the
/// returned value have `f_ℓ` values within `eps`.
pub fn modulus(space: &FiniteSpace, f: &Observable, l: usize, eps: f64) -> Option<f64> {
    let n = space.n_points();
    let mut best: Option<f64> = None;
    for a in 0..n {
        for b in a + 1..n {
            if (f.get(a, l) - f.get(b, l)).abs() > eps {
                let d = space.distance(a, b);
                best = Some(best.map_or(d, |x: f64| x.min(d)));
            }
        }
    }
    best
}
