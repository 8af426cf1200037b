//! Witness finders for the two-column counting argument that closes the
//! separation proof, plus an exhaustive oracle over small universes.
//!
//! Setting: surjections `F_1 : W → V_1`, `F_2 : W → V_2` with `|V_1| ≥ |V_2|`
//! and majority subsets `V_1^*`, `V_2^*`. Either some `w` lands in both
//! majorities (an A-witness) or two elements of `W` share their `F_2` value
//! while having distinct `F_1` values inside `V_1^*` (a B-witness).

use std::fmt::Debug;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInstance {
    f1: Vec<usize>,
    f2: Vec<usize>,
    v1_star: Vec<bool>,
    v2_star: Vec<bool>,
}

fn check_surjective(f: &[usize], n: usize, name: &str) -> Result<()> {
    let mut hit = vec![false; n];
    for (w, &v) in f.iter().enumerate() {
        if v >= n {
            return Err(Error::input(format!("{name}[{w}]"), format!("value {v} out of range")));
        }
        hit[v] = true;
    }
    if let Some(v) = hit.iter().position(|h| !h) {
        return Err(Error::input(name, format!("not surjective: {v} has no preimage")));
    }
    Ok(())
}

fn check_majority(star: &[usize], n: usize, name: &str) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in star {
        if v >= n {
            return Err(Error::input(name, format!("element {v} out of range")));
        }
        mask[v] = true;
    }
    let size = mask.iter().filter(|&&b| b).count();
    if 2 * size <= n {
        return Err(Error::input(
            name,
            format!("|{name}| = {size} is not more than half of {n}"),
        ));
    }
    Ok(mask)
}

impl BipartiteInstance {
    /// `f1[w]`, `f2[w]` are the images of `w`; `V_j = 0..v_j`.
    pub fn new(
        v1: usize,
        v2: usize,
        f1: Vec<usize>,
        f2: Vec<usize>,
        v1_star: &[usize],
        v2_star: &[usize],
    ) -> Result<Self> {
        if v1 < v2 {
            return Err(Error::input("V1", format!("|V1| = {v1} < |V2| = {v2}")));
        }
        if f1.len() != f2.len() {
            return Err(Error::input("F2", "F1 and F2 have different domains"));
        }
        check_surjective(&f1, v1, "F1")?;
        check_surjective(&f2, v2, "F2")?;
        let v1_star = check_majority(v1_star, v1, "V1*")?;
        let v2_star = check_majority(v2_star, v2, "V2*")?;
        Ok(BipartiteInstance {
            f1,
            f2,
            v1_star,
            v2_star,
        })
    }

    pub fn w_len(&self) -> usize {
        self.f1.len()
    }

    pub fn f1(&self, w: usize) -> usize {
        self.f1[w]
    }

    pub fn f2(&self, w: usize) -> usize {
        self.f2[w]
    }

    pub fn in_v1_star(&self, v: usize) -> bool {
        self.v1_star[v]
    }

    pub fn in_v2_star(&self, v: usize) -> bool {
        self.v2_star[v]
    }

    fn both_stars(&self, w: usize) -> bool {
        self.v1_star[self.f1[w]] && self.v2_star[self.f2[w]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// `F_1(w) ∈ V_1^*` and `F_2(w) ∈ V_2^*`.
    A(usize),
    /// `F_2(w) = F_2(w')`, `F_1(w) ≠ F_1(w')`, both in `V_1^*`.
    B(usize, usize),
}

/// Checks a witness against its defining conditions.
pub fn verify_witness(inst: &BipartiteInstance, witness: Witness) -> bool {
    let n = inst.w_len();
    match witness {
        Witness::A(w) => w < n && inst.both_stars(w),
        Witness::B(w, v) => {
            w < n
                && v < n
                && inst.f2[w] == inst.f2[v]
                && inst.f1[w] != inst.f1[v]
                && inst.v1_star[inst.f1[w]]
                && inst.v1_star[inst.f1[v]]
        }
    }
}

/// Finds a witness by the section argument: `ψ` picks the least preimage
/// of each `v ∈ V_1`, `W^* = ψ(V_1^*)`; an A-witness is looked for in `W^*`
/// and then in the rest of `W`, otherwise `F_2` cannot be injective on `W^*`
/// and the first collision is a B-witness.
pub fn find_witness(inst: &BipartiteInstance) -> Result<Witness> {
    let v1 = inst.v1_star.len();
    let psi: Vec<usize> = (0..v1)
        .map(|v| {
            inst.f1
                .iter()
                .position(|&x| x == v)
                .expect("F1 is surjective")
        })
        .collect();
    let w_star: Vec<usize> = (0..v1).filter(|&v| inst.v1_star[v]).map(|v| psi[v]).collect();

    let found = w_star
        .iter()
        .copied()
        .find(|&w| inst.both_stars(w))
        .or_else(|| (0..inst.w_len()).find(|&w| inst.both_stars(w)))
        .map(Witness::A)
        .or_else(|| {
            let mut first_with: Vec<Option<usize>> = vec![None; inst.v2_star.len()];
            for &w in &w_star {
                let v = inst.f2[w];
                if let Some(prev) = first_with[v] {
                    return Some(Witness::B(prev, w));
                }
                first_with[v] = Some(w);
            }
            None
        });
    match found {
        Some(witness) if verify_witness(inst, witness) => Ok(witness),
        Some(witness) => Err(Error::Verification(format!(
            "witness {witness:?} fails re-verification"
        ))),
        None => Err(Error::Verification("no witness exists".into())),
    }
}

/// An element separating `φ_1 ∘ F_1` from `φ_2 ∘ F_2`, with the witness it
/// was derived from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub w: usize,
    pub witness: Witness,
}

/// Produces `w` with `φ_1(F_1(w)) ≠ φ_2(F_2(w))`.
///
/// Requires `φ_1` injective on `V_1^*`, `φ_2` injective on `V_2^*`, and
/// `φ_1(F_1(w)) ≠ φ_2(F_2(w))` whenever `w` lands in both majorities.
pub fn check_separation<T: PartialEq + Debug>(
    inst: &BipartiteInstance,
    phi1: &[T],
    phi2: &[T],
) -> Result<Separation> {
    if phi1.len() != inst.v1_star.len() || phi2.len() != inst.v2_star.len() {
        return Err(Error::Precondition("φ tables do not match V1, V2".into()));
    }
    for (star, phi, name) in [(&inst.v1_star, phi1, "φ1"), (&inst.v2_star, phi2, "φ2")] {
        let members: Vec<usize> = (0..star.len()).filter(|&v| star[v]).collect();
        for (a, &x) in members.iter().enumerate() {
            for &y in &members[a + 1..] {
                if phi[x] == phi[y] {
                    return Err(Error::Precondition(format!(
                        "{name} not injective on the majority: {name}({x}) = {name}({y}) = {:?}",
                        phi[x]
                    )));
                }
            }
        }
    }
    for w in 0..inst.w_len() {
        if inst.both_stars(w) && phi1[inst.f1[w]] == phi2[inst.f2[w]] {
            return Err(Error::Precondition(format!(
                "element {w} lands in both majorities with equal values {:?}",
                phi1[inst.f1[w]]
            )));
        }
    }
    let witness = find_witness(inst)?;
    let separates = |w: usize| phi1[inst.f1[w]] != phi2[inst.f2[w]];
    let w = match witness {
        Witness::A(w) => w,
        Witness::B(w, v) => {
            if separates(w) {
                w
            } else {
                v
            }
        }
    };
    if !separates(w) {
        return Err(Error::Verification(format!(
            "element {w} derived from {witness:?} does not separate"
        )));
    }
    Ok(Separation { w, witness })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub instances: usize,
    pub failures: usize,
}

/// All maps `0..w → 0..v` that hit every value.
pub fn surjections(w: usize, v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if v == 0 {
        return out;
    }
    let total = v.pow(w as u32);
    for code in 0..total {
        let mut c = code;
        let f: Vec<usize> = (0..w)
            .map(|_| {
                let x = c % v;
                c /= v;
                x
            })
            .collect();
        let mut hit = vec![false; v];
        for &x in &f {
            hit[x] = true;
        }
        if hit.iter().all(|&h| h) {
            out.push(f);
        }
    }
    out
}

/// Subsets of `0..n` with more than `n/2` elements.
pub fn majorities(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| 2 * m.count_ones() as usize > n)
        .map(|m| (0..n).filter(|&b| m >> b & 1 == 1).collect())
        .collect()
}

/// Runs [`find_witness`] on every instance with `|W| ≤ max_w`,
/// `|V_2| ≤ |V_1| ≤ max_v1`, `|V_2| ≤ max_v2`, and counts failures.
pub fn exhaustive_oracle(max_w: usize, max_v1: usize, max_v2: usize) -> OracleSummary {
    let mut shapes = Vec::new();
    for v1 in 1..=max_v1 {
        for v2 in 1..=max_v2.min(v1) {
            for w in v1.max(v2)..=max_w {
                shapes.push((w, v1, v2));
            }
        }
    }
    shapes
        .par_iter()
        .map(|&(w, v1, v2)| {
            let s1 = surjections(w, v1);
            let s2 = surjections(w, v2);
            let m1 = majorities(v1);
            let m2 = majorities(v2);
            let mut summary = OracleSummary::default();
            for f1 in &s1 {
                for f2 in &s2 {
                    for a in &m1 {
                        for b in &m2 {
                            summary.instances += 1;
                            let ok = BipartiteInstance::new(v1, v2, f1.clone(), f2.clone(), a, b)
                                .and_then(|inst| {
                                    let wit = find_witness(&inst)?;
                                    Ok(verify_witness(&inst, wit))
                                })
                                .unwrap_or(false);
                            if !ok {
                                summary.failures += 1;
                            }
                        }
                    }
                }
            }
            summary
        })
        .reduce(OracleSummary::default, |a, b| OracleSummary {
            instances: a.instances + b.instances,
            failures: a.failures + b.failures,
        })
}
