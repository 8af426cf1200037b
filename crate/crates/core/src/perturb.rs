//! Locally constant perturbations that separate the subsets of disjoint
//! families.
//!
//! Given, for each coordinate `ℓ`, a family `C_ℓ` of pairwise-disjoint subsets
//! of `Y` on which `f_ℓ` varies by at most `ε/2`, [`assign_values`] picks one
//! grid value per subset and [`perturb`] writes it onto the subset. The result
//! satisfies
//!
//! * (a) `‖f̃_ℓ − f_ℓ‖∞ ≤ ε`,
//! * (b) distinct subsets of `C_ℓ` carry distinct `f̃_ℓ` values,
//! * (c) covered points of distinct coordinates carry distinct values,
//!
//! all checked exactly before [`perturb`] returns.
//!
//! Grid values are dyadic rationals `k / 2^p` with `p ≤ 52`, so they are exact
//! in `f64` and equality tests are exact.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{abs_diff_le, clamp_unit, half, rational};
use crate::observable::Observable;

/// Finest admissible grid exponent.
pub const MAX_GRID_EXPONENT: u32 = 52;

/// A dyadic value `num / den` with `den = 2^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridValue {
    pub num: u64,
    pub den: u64,
}

impl GridValue {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssignedSubset {
    pub subset: Vec<usize>,
    pub value: GridValue,
}

/// One list of valued subsets per coordinate `ℓ`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValueAssignment {
    pub families: Vec<Vec<AssignedSubset>>,
}

/// Smallest `p` with `2^-p ≤ target`.
fn grid_exponent(target: f64) -> Option<u32> {
    (0..=MAX_GRID_EXPONENT).find(|&p| (0.5f64).powi(p as i32) <= target)
}

/// Picks values satisfying (α) every value is within `eps/2` of every
/// `f_ℓ(y)`, `y ∈ C`; (β) injective within each coordinate; (γ) disjoint
/// ranges across coordinates.
///
/// The grid has spacing `2^-p ≤ eps / (4·S·r)` for `S` subsets in total, and
/// coordinate `ℓ` only uses grid indices `k ≡ ℓ (mod r)`. Each subset takes the
/// free admissible value closest to the midpoint of its `f_ℓ` range.
pub fn assign_values(fams: &[Vec<Vec<usize>>], f: &Observable, eps: f64) -> Result<ValueAssignment> {
    let r = f.r;
    if fams.len() != r {
        return Err(Error::Precondition(format!(
            "{} families for an observable with r = {r}",
            fams.len()
        )));
    }
    let total: usize = fams.iter().map(Vec::len).sum();
    if total == 0 {
        return Ok(ValueAssignment {
            families: vec![Vec::new(); r],
        });
    }
    let target = eps / (4.0 * total as f64 * r as f64);
    let p = grid_exponent(target).ok_or_else(|| {
        Error::GridInfeasible(format!(
            "spacing {target:e} needs a grid finer than 2^-{MAX_GRID_EXPONENT}"
        ))
    })?;
    let den: u64 = 1 << p;
    let den_q = BigRational::from_integer(BigInt::from(den));
    let half_eps = half(eps);

    let mut families = Vec::with_capacity(r);
    for (l, fam) in fams.iter().enumerate() {
        let mut used: HashSet<u64> = HashSet::new();
        let mut out = Vec::with_capacity(fam.len());
        for subset in fam {
            if subset.is_empty() {
                return Err(Error::Precondition(format!("empty subset in family {l}")));
            }
            let (lo_f, hi_f) = subset.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| {
                (a.min(f.get(y, l)), b.max(f.get(y, l)))
            });
            if rational(hi_f) - rational(lo_f) > half_eps {
                return Err(Error::Precondition(format!(
                    "f_{l} varies by {} on {subset:?}, more than eps/2 = {}",
                    hi_f - lo_f,
                    eps / 2.0
                )));
            }
            let lo = clamp_unit(rational(hi_f) - &half_eps);
            let hi = clamp_unit(rational(lo_f) + &half_eps);
            let k_lo = (&lo * &den_q).ceil().to_integer();
            let k_hi = (&hi * &den_q).floor().to_integer();
            let (k_lo, k_hi) = match (k_lo.to_u64(), k_hi.to_u64()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::GridInfeasible("grid index overflow".into())),
            };
            let centre = (rational(lo_f) + rational(hi_f)) / BigRational::from_integer(BigInt::from(2));
            let first = k_lo + ((l as u64 + r as u64 - k_lo % r as u64) % r as u64);
            let mut candidates: Vec<(BigRational, u64)> = (first..=k_hi)
                .step_by(r)
                .filter(|k| !used.contains(k))
                .map(|k| {
                    let v = BigRational::new(BigInt::from(k), BigInt::from(den));
                    let dist = if v > centre { &v - &centre } else { &centre - &v };
                    (dist, k)
                })
                .collect();
            candidates.sort();
            let Some(&(_, k)) = candidates.first() else {
                return Err(Error::GridInfeasible(format!(
                    "coordinate {l}: window [{}, {}] on grid 2^-{p} has no free value for {subset:?}",
                    lo.to_f64().unwrap_or(f64::NAN),
                    hi.to_f64().unwrap_or(f64::NAN)
                )));
            };
            used.insert(k);
            out.push(AssignedSubset {
                subset: subset.clone(),
                value: GridValue { num: k, den },
            });
        }
        families.push(out);
    }
    Ok(ValueAssignment { families })
}

/// Result of [`perturb`]: the new observable and its exact-checked
/// displacement from the input.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub observable: Observable,
    pub displacement: f64,
}

/// Writes the assigned values onto their subsets and keeps `f` on uncovered
/// points, then verifies (a), (b) and (c) exhaustively.
pub fn perturb(f: &Observable, assignment: &ValueAssignment, eps: f64) -> Result<Perturbation> {
    let r = f.r;
    if assignment.families.len() != r {
        return Err(Error::Precondition(format!(
            "assignment has {} coordinates, observable has {r}",
            assignment.families.len()
        )));
    }
    let mut out = f.clone();
    // point -> subset index, per coordinate
    let mut owner: Vec<HashMap<usize, usize>> = vec![HashMap::new(); r];
    for (l, fam) in assignment.families.iter().enumerate() {
        for (c, a) in fam.iter().enumerate() {
            for &y in &a.subset {
                if y >= f.n_points() {
                    return Err(Error::IndexOutOfRange {
                        index: y,
                        n_points: f.n_points(),
                    });
                }
                if let Some(prev) = owner[l].insert(y, c) {
                    return Err(Error::Precondition(format!(
                        "coordinate {l}: subsets {prev} and {c} share point {y}"
                    )));
                }
                out.values[y][l] = a.value.to_f64();
            }
        }
    }

    // (a)
    for (y, (new, old)) in out.values.iter().zip(&f.values).enumerate() {
        for l in 0..r {
            if !abs_diff_le(new[l], old[l], eps) {
                return Err(Error::Verification(format!(
                    "(a) fails at point {y}, coordinate {l}: {} vs {}",
                    new[l], old[l]
                )));
            }
        }
    }
    // (b)
    for l in 0..r {
        let covered: Vec<(&usize, &usize)> = owner[l].iter().collect();
        let mut by_value: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
        for (&y, &c) in covered {
            let bits = out.values[y][l].to_bits();
            if let Some(&(c0, y0)) = by_value.get(&bits) {
                if c0 != c {
                    return Err(Error::Verification(format!(
                        "(b) fails for coordinate {l}: points {y0} and {y} in distinct subsets share a value"
                    )));
                }
            } else {
                by_value.insert(bits, (c, y));
            }
        }
    }
    // (c)
    let mut seen: HashMap<u64, (usize, usize)> = HashMap::new();
    for (l, own) in owner.iter().enumerate() {
        let mut ys: Vec<usize> = own.keys().copied().collect();
        ys.sort_unstable();
        for y in ys {
            let bits = out.values[y][l].to_bits();
            match seen.get(&bits) {
                Some(&(l0, y0)) if l0 != l => {
                    return Err(Error::Verification(format!(
                        "(c) fails: f̃_{l0}({y0}) = f̃_{l}({y})"
                    )));
                }
                Some(_) => {}
                None => {
                    seen.insert(bits, (l, y));
                }
            }
        }
    }
    let displacement = out.sup_distance(f);
    Ok(Perturbation {
        observable: out,
        displacement,
    })
}
