//! Replays a certificate's block log from `f0` without the library's
//! perturbation code and checks, in exact rational arithmetic:
//!
//! * (a) each block moves every value by at most its budget, and the final
//!   observable is within `eps` of `f0`;
//! * (b) within a coordinate, distinct subsets get distinct values;
//! * (c) covered values of distinct coordinates never coincide;
//! * persistence: after each block, every pair handled so far has distinct
//!   orbit vectors.

#![allow(dead_code)]

use num_rational::BigRational;

use menger_core::pipeline::BlockStatus;
use menger_core::{EmbeddingCertificate, MapFamily};

#[derive(Debug, Default)]
pub struct Replay {
    pub blocks: usize,
    pub perturbations: usize,
    pub multi_block: bool,
    pub violations: Vec<String>,
}

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

fn within(a: f64, b: f64, bound: f64) -> bool {
    let d = q(a) - q(b);
    let d = if d < BigRational::from_integer(0.into()) { -d } else { d };
    d <= q(bound)
}

fn orbit_row(values: &[Vec<f64>], fam: &MapFamily, x: usize) -> Vec<u64> {
    (0..fam.len())
        .flat_map(|i| values[fam.eval(i, x)].iter().map(|v| v.to_bits()))
        .collect()
}

pub fn replay(cert: &EmbeddingCertificate, fam: &MapFamily) -> Replay {
    let mut out = Replay {
        blocks: cert.blocks.len(),
        ..Replay::default()
    };
    let r = cert.r;
    let mut cur = cert.f0.values.clone();
    let mut handled: Vec<(usize, usize)> = Vec::new();
    for (k, block) in cert.blocks.iter().enumerate() {
        if block.status == BlockStatus::Separated {
            let Some(detail) = &block.detail else {
                out.violations.push(format!("block {k}: separated without detail"));
                continue;
            };
            out.perturbations += 1;
            let mut next = cur.clone();
            let mut owner: Vec<Vec<Option<usize>>> = vec![vec![None; cur.len()]; r];
            for (l, fam_l) in detail.assignment.families.iter().enumerate() {
                for (c, a) in fam_l.iter().enumerate() {
                    for &y in &a.subset {
                        if owner[l][y].replace(c).is_some() {
                            out.violations.push(format!("block {k}: point {y} twice in coordinate {l}"));
                        }
                        next[y][l] = a.value.num as f64 / a.value.den as f64;
                    }
                }
            }
            for y in 0..cur.len() {
                for l in 0..r {
                    if !within(next[y][l], cur[y][l], block.budget) {
                        out.violations.push(format!("block {k}: (a) fails at ({y}, {l})"));
                    }
                }
            }
            for l in 0..r {
                for y in 0..cur.len() {
                    for z in y + 1..cur.len() {
                        if let (Some(a), Some(b)) = (owner[l][y], owner[l][z]) {
                            if a != b && next[y][l] == next[z][l] {
                                out.violations.push(format!("block {k}: (b) fails for {y}, {z} in coordinate {l}"));
                            }
                        }
                    }
                }
            }
            for l1 in 0..r {
                for l2 in l1 + 1..r {
                    for y in 0..cur.len() {
                        for z in 0..cur.len() {
                            if owner[l1][y].is_some() && owner[l2][z].is_some() && next[y][l1] == next[z][l2] {
                                out.violations.push(format!("block {k}: (c) fails for ({y}, {l1}), ({z}, {l2})"));
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        handled.extend(block.pairs.iter().copied());
        for &(a, b) in &handled {
            if orbit_row(&cur, fam, a) == orbit_row(&cur, fam, b) {
                out.violations.push(format!("after block {k}: pair ({a}, {b}) not separated"));
            }
        }
    }
    out.multi_block = out.perturbations > 1;
    for (y, (new, old)) in cur.iter().zip(&cert.f0.values).enumerate() {
        for l in 0..r {
            if !within(new[l], old[l], cert.eps) {
                out.violations.push(format!("total displacement exceeds eps at ({y}, {l})"));
            }
        }
    }
    let bits = |v: &Vec<Vec<f64>>| v.iter().flatten().map(|x| x.to_bits()).collect::<Vec<_>>();
    if bits(&cur) != bits(&cert.observable.values) {
        out.violations.push("replayed observable differs from the certificate".into());
    }
    out
}
