//! Embedding certificates, orbit-map tables, and their re-verification.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cover::Backend;
use crate::error::{Error, Result};
use crate::exact::abs_diff_le;
use crate::family::MapFamily;
use crate::hypothesis::{check_hypotheses_family, HypothesisReport};
use crate::observable::Observable;
use crate::action::{GroupAction, Perm};
use crate::hypothesis::{check_hypotheses_action, max_orbit_size};
use crate::pipeline::{equivariant_setup, margin, orbit_vector, unordered_pairs, BlockLog};
use crate::space::FiniteSpace;

/// One scale of the `X^(F,ε)` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Restriction {
    pub sep_eps: f64,
    /// The `N` with `2·dim X < r·N`.
    pub n: usize,
    pub points: Vec<usize>,
}

/// Rows `x ↦ (f̃(g x))_{g ∈ F}`, each `g` contributing `r` columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitTable {
    /// Original index of the point behind each row.
    pub points: Vec<usize>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl OrbitTable {
    /// Fails with the first pair of equal rows.
    pub fn check_injective(&self) -> Result<()> {
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for (k, row) in self.rows.iter().enumerate() {
            // +0.0 and -0.0 never occur: values are in [0, 1] and built
            // from non-negative grid numerators or input data
            let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
            if let Some(prev) = seen.insert(key, k) {
                return Err(Error::Verification(format!(
                    "orbit-map rows of points {} and {} coincide",
                    self.points[prev], self.points[k]
                )));
            }
        }
        Ok(())
    }
}

pub fn orbit_table(f: &Observable, fam: &MapFamily, points: &[usize]) -> OrbitTable {
    OrbitTable {
        points: points.to_vec(),
        labels: fam.labels().to_vec(),
        rows: (0..fam.source().n_points())
            .map(|x| orbit_vector(f, fam, x))
            .collect(),
    }
}

/// Largest `|f_ℓ(y) − f_ℓ(y')| / d(y, y')` over distinct points; a
/// diagnostic of how sharply the perturbation localizes.
pub fn lipschitz(space: &FiniteSpace, f: &Observable) -> f64 {
    let n = space.n_points();
    let mut best: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let d = space.distance(a, b);
            for l in 0..f.r {
                best = best.max((f.get(a, l) - f.get(b, l)).abs() / d);
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub version: String,
    pub r: usize,
    pub eps: f64,
    pub backend: Backend,
    /// Size limit for exact `sep_ε` computations.
    pub exact_cap: usize,
    pub labels: Vec<String>,
    /// Original indices of the source points (all points unless the family
    /// was restricted to `X^(F,ε)`).
    pub source_points: Vec<usize>,
    /// Whether the hypothesis report lists unrealized partitions too.
    pub all_partitions: bool,
    pub hypothesis: HypothesisReport,
    pub action_hypothesis: Option<HypothesisReport>,
    pub restrictions: Vec<Restriction>,
    /// Seed `f0` was sampled from, if it was.
    pub seed: Option<u64>,
    /// SHA-256 of each input file, keyed by role.
    pub input_hashes: BTreeMap<String, String>,
    pub f0: Observable,
    pub observable: Observable,
    pub blocks: Vec<BlockLog>,
    pub perturbation_steps: usize,
    pub budget_total: f64,
    pub initial_margin: Option<f64>,
    /// `None` when the source has fewer than two points.
    pub margin: Option<f64>,
    pub displacement: f64,
    pub lipschitz_before: f64,
    pub lipschitz_after: f64,
    pub table: Option<OrbitTable>,
}

fn same_bits(a: Option<f64>, b: Option<f64>) -> bool {
    a.map(f64::to_bits) == b.map(f64::to_bits)
}

fn mismatch(what: &str, stored: impl std::fmt::Debug, recomputed: impl std::fmt::Debug) -> Error {
    Error::Verification(format!(
        "{what}: certificate has {stored:?}, recomputed {recomputed:?}"
    ))
}

/// Recomputes everything the certificate claims about `fam` and reports the
/// first disagreement. Floating-point quantities must match bit for bit.
pub fn verify_certificate(cert: &EmbeddingCertificate, fam: &MapFamily) -> Result<()> {
    if cert.labels != fam.labels() {
        return Err(mismatch("labels", &cert.labels, fam.labels()));
    }
    let n = fam.source().n_points();
    if cert.source_points.len() != n {
        return Err(mismatch("source size", cert.source_points.len(), n));
    }
    let f = Observable::new(cert.observable.r, cert.observable.values.clone())
        .map_err(|e| Error::Verification(format!("observable: {e}")))?;
    let f0 = Observable::new(cert.f0.r, cert.f0.values.clone())
        .map_err(|e| Error::Verification(format!("f0: {e}")))?;
    if f.r != cert.r || f0.r != cert.r {
        return Err(mismatch("r", cert.r, (f.r, f0.r)));
    }
    f.check_domain(fam.target())
        .and_then(|_| f0.check_domain(fam.target()))
        .map_err(|e| Error::Verification(e.to_string()))?;

    let hypothesis = check_hypotheses_family(fam, cert.r, cert.all_partitions);
    if hypothesis != cert.hypothesis {
        return Err(mismatch("hypothesis report", cert.hypothesis.passed, hypothesis.passed));
    }

    let pairs = unordered_pairs(n);
    let m = margin(&f, fam, &pairs);
    let m = m.is_finite().then_some(m);
    if !same_bits(m, cert.margin) {
        return Err(mismatch("margin", cert.margin, m));
    }
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|x| orbit_vector(&f, fam, x).iter().map(|v| v.to_bits()).collect())
        .collect();
    let mut seen: HashMap<&Vec<u64>, usize> = HashMap::new();
    for (x, row) in rows.iter().enumerate() {
        if let Some(prev) = seen.insert(row, x) {
            return Err(Error::Verification(format!(
                "orbit map not injective: points {prev} and {x} collide"
            )));
        }
    }
    if m.is_some_and(|v| v <= 0.0) {
        return Err(Error::Verification("margin is not positive".into()));
    }

    let displacement = f.sup_distance(&f0);
    if displacement.to_bits() != cert.displacement.to_bits() {
        return Err(mismatch("displacement", cert.displacement, displacement));
    }
    for (y, (a, b)) in f.values.iter().zip(&f0.values).enumerate() {
        for l in 0..cert.r {
            if !abs_diff_le(a[l], b[l], cert.eps) {
                return Err(Error::Verification(format!(
                    "point {y}, coordinate {l} moved by more than eps"
                )));
            }
        }
    }
    let budgets: f64 = cert.blocks.iter().map(|b| b.budget).sum();
    if budgets > cert.eps {
        return Err(Error::Verification(format!(
            "block budgets sum to {budgets}, above eps {}",
            cert.eps
        )));
    }

    if let Some(table) = &cert.table {
        let expected = orbit_table(&f, fam, &cert.source_points);
        if table.labels != expected.labels || table.points != expected.points {
            return Err(mismatch("orbit table layout", &table.points, &expected.points));
        }
        for (k, (row, want)) in table.rows.iter().zip(&expected.rows).enumerate() {
            let bits = |v: &Vec<f64>| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            if bits(row) != bits(want) {
                return Err(mismatch(
                    &format!("orbit table row {k}"),
                    row,
                    want,
                ));
            }
        }
        if table.rows.len() != expected.rows.len() {
            return Err(mismatch("orbit table rows", table.rows.len(), expected.rows.len()));
        }
        table.check_injective()?;
    }
    Ok(())
}

/// Re-verifies a certificate produced by
/// [`embed_equivariant`](crate::pipeline::embed_equivariant): the action
/// hypotheses, the `X^(F,ε)` restrictions, the orbit table, and everything
/// [`verify_certificate`] checks.
pub fn verify_equivariant(
    cert: &EmbeddingCertificate,
    a: &GroupAction,
    window: Option<&[Perm]>,
) -> Result<()> {
    let expected = check_hypotheses_action(a, cert.r, max_orbit_size(a));
    match &cert.action_hypothesis {
        Some(h) if *h == expected => {}
        Some(h) => return Err(mismatch("action hypothesis report", h.passed, expected.passed)),
        None => return Err(Error::Verification("certificate has no action hypothesis report".into())),
    }
    let setup = equivariant_setup(a, window, cert.r, cert.exact_cap)?;
    if setup.restrictions != cert.restrictions {
        return Err(mismatch(
            "restriction sizes",
            cert.restrictions.iter().map(|r| r.points.len()).collect::<Vec<_>>(),
            setup.restrictions.iter().map(|r| r.points.len()).collect::<Vec<_>>(),
        ));
    }
    let points: Vec<usize> = match setup.restrictions.last() {
        Some(r) => r.points.clone(),
        None => (0..a.space().n_points()).collect(),
    };
    if points != cert.source_points {
        return Err(mismatch("source points", &cert.source_points, &points));
    }
    if cert.table.is_none() {
        return Err(Error::Verification("certificate has no orbit table".into()));
    }
    verify_certificate(cert, &setup.family)
}
