//! ε-separated subsets and the restricted domains `X^(F,ε)` used when the
//! acting group is only available through a finite element list.

use crate::action::{GroupAction, Perm};
use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// Default size below which [`sep`] is exact.
pub const DEFAULT_EXACT_CAP: usize = 24;

/// Hard limit for the exact search (bitmask width).
const MAX_EXACT: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct SepResult {
    /// Size of the best ε-separated subset found.
    pub count: usize,
    /// `true` if `count` is the maximum; otherwise it is a certified lower
    /// bound realized by `witness`.
    pub exact: bool,
    pub witness: Vec<usize>,
}

/// Maximal cardinality of a subset of `k` with pairwise distances `≥ eps`.
///
/// Exact branch and bound when `|k| ≤ exact_cap`, greedy lower bound above.
pub fn sep(s: &FiniteSpace, k: &[usize], eps: f64, exact_cap: usize) -> Result<SepResult> {
    if k.is_empty() {
        return Err(Error::EmptySet("sep"));
    }
    let mut pts: Vec<usize> = k.to_vec();
    pts.sort_unstable();
    pts.dedup();
    for &p in &pts {
        s.check_index(p)?;
    }
    let close = |a: usize, b: usize| a != b && s.distance(a, b) < eps;

    if pts.len() <= exact_cap.min(MAX_EXACT) {
        let n = pts.len();
        let conflict: Vec<u64> = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| close(pts[a], pts[b]))
                    .fold(0u64, |m, b| m | (1 << b))
            })
            .collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = 0u64;
        branch(&conflict, 0, all, &mut best);
        let witness = (0..n).filter(|&b| best >> b & 1 == 1).map(|b| pts[b]).collect::<Vec<_>>();
        Ok(SepResult {
            count: witness.len(),
            exact: true,
            witness,
        })
    } else {
        let mut witness: Vec<usize> = Vec::new();
        for &p in &pts {
            if witness.iter().all(|&q| !close(p, q)) {
                witness.push(p);
            }
        }
        Ok(SepResult {
            count: witness.len(),
            exact: false,
            witness,
        })
    }
}

fn branch(conflict: &[u64], chosen: u64, candidates: u64, best: &mut u64) {
    if candidates == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u64 << v;
    branch(conflict, chosen | bit, candidates & !bit & !conflict[v], best);
    branch(conflict, chosen, candidates & !bit, best);
}

/// `X^(F,ε) = {x : G·x = F·x or sep_ε(F·x) ≥ r·n}`, sorted.
///
/// Inexact separation counts are lower bounds, so a point is only admitted
/// through the second clause when the bound already reaches `r·n`.
pub fn restricted_space(
    a: &GroupAction,
    f: &[Perm],
    eps: f64,
    r: usize,
    n: usize,
    exact_cap: usize,
) -> Result<Vec<usize>> {
    if f.is_empty() {
        return Err(Error::EmptySet("restricted_space"));
    }
    let space = a.space();
    let mut out = Vec::new();
    for x in 0..space.n_points() {
        let orbit = a.orbit(x)?;
        let mut fx: Vec<usize> = f.iter().map(|g| g.apply(x)).collect();
        fx.sort_unstable();
        fx.dedup();
        if fx == orbit || sep(space, &fx, eps, exact_cap)?.count >= r * n {
            out.push(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Independent oracle: enumerate every subset.
    fn brute_sep(s: &FiniteSpace, k: &[usize], eps: f64) -> usize {
        let n = k.len();
        (0u32..1 << n)
            .filter(|mask| {
                (0..n).all(|a| {
                    (0..n).all(|b| {
                        a == b
                            || mask >> a & 1 == 0
                            || mask >> b & 1 == 0
                            || s.distance(k[a], k[b]) >= eps
                    })
                })
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn singleton() {
        let s = fixtures::circle(5);
        assert_eq!(sep(&s, &[3], 100.0, DEFAULT_EXACT_CAP).unwrap().count, 1);
    }

    #[test]
    fn three_points_on_circle() {
        let s = fixtures::circle(3);
        // brute force over all subsets: chords are √3
        assert_eq!(brute_sep(&s, &[0, 1, 2], 1.0), 3);
        assert_eq!(brute_sep(&s, &[0, 1, 2], 2.0), 1);
        assert_eq!(sep(&s, &[0, 1, 2], 1.0, DEFAULT_EXACT_CAP).unwrap().count, 3);
        assert_eq!(sep(&s, &[0, 1, 2], 2.0, DEFAULT_EXACT_CAP).unwrap().count, 1);
    }

    #[test]
    fn empty_is_error() {
        assert!(sep(&fixtures::circle(3), &[], 1.0, 24).is_err());
    }

    #[test]
    fn exact_matches_brute_force_on_grid() {
        let s = fixtures::grid(3, 4);
        let k: Vec<usize> = (0..12).collect();
        for eps in [0.5, 1.0, 1.2, 1.5, 2.0, 2.3, 3.0] {
            let got = sep(&s, &k, eps, DEFAULT_EXACT_CAP).unwrap();
            assert!(got.exact);
            assert_eq!(got.count, brute_sep(&s, &k, eps), "eps {eps}");
        }
    }

    #[test]
    fn greedy_is_flagged_lower_bound() {
        let s = fixtures::circle(30);
        let k: Vec<usize> = (0..30).collect();
        let got = sep(&s, &k, 0.5, 24).unwrap();
        assert!(!got.exact);
        for (a, &p) in got.witness.iter().enumerate() {
            for &q in &got.witness[a + 1..] {
                assert!(s.distance(p, q) >= 0.5);
            }
        }
    }

    #[test]
    fn restricted_with_all_elements_is_everything() {
        let a = fixtures::rotation_action(9, 3);
        let f = a.elements().unwrap().to_vec();
        assert_eq!(restricted_space(&a, &f, 0.1, 1, 3, 24).unwrap().len(), 9);
    }

    #[test]
    fn restricted_with_identity_only() {
        let a = fixtures::rotation_action(6, 1);
        let f = vec![Perm::identity(6)];
        let eps = 0.5 * a.space().min_positive_distance().unwrap();
        assert_eq!(restricted_space(&a, &f, eps, 1, 1, 24).unwrap().len(), 6);
    }

    #[test]
    fn restricted_rotation_segments() {
        let a = fixtures::rotation_action(12, 1);
        let f: Vec<Perm> = (0..6).map(|k| Perm::rotation(12, k)).collect();
        let eps = 0.5 * a.space().min_positive_distance().unwrap();
        // oracle: brute force on every orbit segment
        let expected: Vec<usize> = (0..12)
            .filter(|&x| {
                let seg: Vec<usize> = f.iter().map(|g| g.apply(x)).collect();
                brute_sep(a.space(), &seg, eps) >= 6
            })
            .collect();
        assert_eq!(expected.len(), 12);
        assert_eq!(restricted_space(&a, &f, eps, 1, 6, 24).unwrap(), expected);
    }
}
