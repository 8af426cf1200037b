//! Colored covers: `m` families of pairwise-disjoint subsets of diameter at
//! most `eps`, with every point of the ambient set lying in subsets from at
//! least `mu` distinct families.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// Halvings of the brick side tried before the bricks backend gives up.
const MAX_BRICK_HALVINGS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Diameter-bounded clustering registered in `mu` families round-robin.
    Cells,
    /// Shifted grids of bricks over the space's coordinates.
    Bricks,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cells" => Ok(Backend::Cells),
            "bricks" => Ok(Backend::Bricks),
            other => Err(Error::input("backend", format!("unknown backend `{other}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Cells => "cells",
            Backend::Bricks => "bricks",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoredCover {
    pub ambient: Vec<usize>,
    pub families: Vec<Vec<Vec<usize>>>,
    pub eps: f64,
    pub mu: usize,
}

impl ColoredCover {
    fn empty(m: usize, mu: usize, eps: f64) -> Self {
        ColoredCover {
            ambient: Vec::new(),
            families: vec![Vec::new(); m],
            eps,
            mu,
        }
    }

    /// Families containing `x`.
    pub fn families_of(&self, x: usize) -> Vec<usize> {
        self.families
            .iter()
            .enumerate()
            .filter(|(_, fam)| fam.iter().any(|c| c.contains(&x)))
            .map(|(k, _)| k)
            .collect()
    }

    /// Every point appearing in some subset.
    pub fn support(&self) -> BTreeSet<usize> {
        self.families.iter().flatten().flatten().copied().collect()
    }

    pub fn subset_count(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }
}

/// Partition of `z` into clusters of diameter at most `eps`.
///
/// Farthest-point centers are chosen until every point is within `eps/2` of
/// a center (ties to the lowest index), points join their nearest center,
/// and clusters are then merged first-fit while the merged diameter stays
/// within `eps`. Clusters are returned sorted by least element.
pub fn cluster(s: &FiniteSpace, z: &[usize], eps: f64) -> Vec<Vec<usize>> {
    let mut pts: Vec<usize> = z.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return Vec::new();
    }
    let radius = eps / 2.0;
    let mut centers = vec![pts[0]];
    let mut nearest: Vec<f64> = pts.iter().map(|&p| s.distance(p, pts[0])).collect();
    loop {
        let (far, &d) = nearest
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        if d <= radius {
            break;
        }
        let c = pts[far];
        centers.push(c);
        for (k, &p) in pts.iter().enumerate() {
            nearest[k] = nearest[k].min(s.distance(p, c));
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); centers.len()];
    for &p in &pts {
        let mut best = 0;
        for (k, &c) in centers.iter().enumerate() {
            if s.distance(p, c) < s.distance(p, centers[best]) {
                best = k;
            }
        }
        groups[best].push(p);
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for g in groups {
        if s.diameter(&g) > eps {
            // only reachable when the triangle inequality fails
            clusters.extend(g.into_iter().map(|p| vec![p]));
        } else {
            clusters.push(g);
        }
    }
    clusters.sort_unstable_by_key(|c| c[0]);
    let mut merged: Vec<Vec<usize>> = Vec::new();
    for c in clusters {
        let slot = merged.iter().position(|m| {
            let mut u = m.clone();
            u.extend_from_slice(&c);
            s.diameter(&u) <= eps
        });
        match slot {
            Some(k) => merged[k].extend(c),
            None => merged.push(c),
        }
    }
    for m in &mut merged {
        m.sort_unstable();
    }
    merged.sort_unstable_by_key(|c| c[0]);
    merged
}

/// Builds a colored cover of `z` with `m` families, multiplicity `mu` and
/// diameter bound `eps`.
pub fn build_cover(
    s: &FiniteSpace,
    z: &[usize],
    m: usize,
    mu: usize,
    eps: f64,
    backend: Backend,
) -> Result<ColoredCover> {
    if mu == 0 || mu > m {
        return Err(Error::Precondition(format!("need 1 ≤ mu ≤ m, got mu={mu}, m={m}")));
    }
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    for &x in z {
        s.check_index(x)?;
    }
    let mut ambient = z.to_vec();
    ambient.sort_unstable();
    ambient.dedup();
    if ambient.is_empty() {
        return Ok(ColoredCover::empty(m, mu, eps));
    }
    let mut cover = match backend {
        Backend::Cells => cells(s, &ambient, m, mu, eps),
        Backend::Bricks => bricks(s, &ambient, m, mu, eps)?,
    };
    cover.ambient = ambient;
    Ok(cover)
}

fn cells(s: &FiniteSpace, z: &[usize], m: usize, mu: usize, eps: f64) -> ColoredCover {
    let mut cover = ColoredCover::empty(m, mu, eps);
    for (c, cl) in cluster(s, z, eps).into_iter().enumerate() {
        for q in 0..mu {
            cover.families[(c * mu + q) % m].push(cl.clone());
        }
    }
    cover
}

fn bricks(s: &FiniteSpace, z: &[usize], m: usize, mu: usize, eps: f64) -> Result<ColoredCover> {
    let coords = s
        .coords()
        .ok_or_else(|| Error::CoverInfeasible("bricks backend needs coordinates".into()))?;
    let d = coords.dim;
    if m - mu < d {
        return Err(Error::CoverInfeasible(format!(
            "{m} shifted grids in dimension {d} guarantee multiplicity {}, below {mu} \
             (need m - mu + 1 > {d})",
            m.saturating_sub(d)
        )));
    }
    let mut side = eps / (d.max(1) as f64).sqrt();
    for _ in 0..MAX_BRICK_HALVINGS {
        let cover = bricks_with_side(z, m, mu, eps, side, &coords.points);
        let fits = cover
            .families
            .iter()
            .flatten()
            .all(|c| s.diameter(c) <= eps);
        if fits {
            return Ok(cover);
        }
        side /= 2.0;
    }
    Err(Error::CoverInfeasible(format!(
        "no brick side keeps metric diameters within {eps}"
    )))
}

fn bricks_with_side(
    z: &[usize],
    m: usize,
    mu: usize,
    eps: f64,
    side: f64,
    points: &[Vec<f64>],
) -> ColoredCover {
    let mut cover = ColoredCover::empty(m, mu, eps);
    // per point and coordinate: the grid index q of the fractional position
    // and the single family whose boundary band contains it
    let scaled: HashMap<usize, Vec<(f64, usize)>> = z
        .iter()
        .map(|&x| {
            let v: Vec<(f64, usize)> = points[x]
                .iter()
                .map(|&c| {
                    let u = c / side;
                    let w = u - u.floor();
                    let q = ((w * m as f64).floor() as usize).min(m - 1);
                    (u, (q + 1) % m)
                })
                .collect();
            (x, v)
        })
        .collect();
    for j in 0..m {
        let shift = j as f64 / m as f64;
        let mut bricks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for &x in z {
            let coords = &scaled[&x];
            if coords.iter().any(|&(_, bad)| bad == j) {
                continue;
            }
            let key: Vec<i64> = coords.iter().map(|&(u, _)| (u - shift).floor() as i64).collect();
            bricks.entry(key).or_default().push(x);
        }
        cover.families[j] = bricks.into_values().collect();
    }
    cover
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoverViolation {
    Overlap {
        family: usize,
        first: usize,
        second: usize,
        shared: Vec<usize>,
    },
    Diameter {
        family: usize,
        subset: usize,
        diameter: f64,
    },
    Multiplicity {
        point: usize,
        count: usize,
    },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::Overlap {
                family,
                first,
                second,
                shared,
            } => write!(
                f,
                "family {family}: subsets {first} and {second} share {shared:?}"
            ),
            CoverViolation::Diameter {
                family,
                subset,
                diameter,
            } => write!(f, "family {family}: subset {subset} has diameter {diameter}"),
            CoverViolation::Multiplicity { point, count } => {
                write!(f, "point {point} lies in only {count} families")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoverReport {
    pub violations: Vec<CoverViolation>,
}

impl CoverReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks disjointness inside each family, diameters, and multiplicity of
/// every ambient point.
pub fn verify_cover(c: &ColoredCover, s: &FiniteSpace) -> CoverReport {
    let mut violations: Vec<CoverViolation> = c
        .families
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, fam)| {
            let mut out = Vec::new();
            for (a, ca) in fam.iter().enumerate() {
                let d = s.diameter(ca);
                if d > c.eps {
                    out.push(CoverViolation::Diameter {
                        family: k,
                        subset: a,
                        diameter: d,
                    });
                }
                for (b, cb) in fam.iter().enumerate().skip(a + 1) {
                    let shared: Vec<usize> = ca.iter().filter(|x| cb.contains(x)).copied().collect();
                    if !shared.is_empty() {
                        out.push(CoverViolation::Overlap {
                            family: k,
                            first: a,
                            second: b,
                            shared,
                        });
                    }
                }
            }
            out
        })
        .collect();
    let mut count: HashMap<usize, usize> = HashMap::new();
    for fam in &c.families {
        let members: BTreeSet<usize> = fam.iter().flatten().copied().collect();
        for x in members {
            *count.entry(x).or_default() += 1;
        }
    }
    for &x in &c.ambient {
        let k = count.get(&x).copied().unwrap_or(0);
        if k < c.mu {
            violations.push(CoverViolation::Multiplicity { point: x, count: k });
        }
    }
    CoverReport { violations }
}

fn rebound(families: &[Vec<Vec<usize>>], eps: f64, space: &FiniteSpace) -> f64 {
    let max = families
        .iter()
        .flatten()
        .map(|c| space.diameter(c))
        .fold(0.0, f64::max);
    if max <= eps {
        eps
    } else {
        max
    }
}

/// Image of a cover under the index map `g` (source index ↦ target index).
///
/// The diameter bound is kept when every image fits inside it and otherwise
/// replaced by the largest image diameter in `target`.
pub fn push_cover(c: &ColoredCover, g: &[usize], target: &FiniteSpace) -> Result<ColoredCover> {
    let mut support = c.support();
    support.extend(c.ambient.iter().copied());
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for &x in &support {
        let y = *g
            .get(x)
            .ok_or_else(|| Error::NotInjective(format!("point {x} has no image")))?;
        target.check_index(y)?;
        if let Some(prev) = seen.insert(y, x) {
            return Err(Error::NotInjective(format!("{prev} and {x} both map to {y}")));
        }
    }
    let image = |set: &Vec<usize>| {
        let mut v: Vec<usize> = set.iter().map(|&x| g[x]).collect();
        v.sort_unstable();
        v
    };
    let families: Vec<Vec<Vec<usize>>> = c
        .families
        .iter()
        .map(|fam| fam.iter().map(image).collect())
        .collect();
    Ok(ColoredCover {
        ambient: image(&c.ambient),
        eps: rebound(&families, c.eps, target),
        families,
        mu: c.mu,
    })
}

/// Preimage of a cover under the bijection `t` (domain ↦ codomain).
pub fn pull_cover(
    c: &ColoredCover,
    t: &BTreeMap<usize, usize>,
    domain: &FiniteSpace,
) -> Result<ColoredCover> {
    let mut inverse: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in t {
        domain.check_index(x)?;
        if let Some(prev) = inverse.insert(y, x) {
            return Err(Error::NotBijective(format!("{prev} and {x} both map to {y}")));
        }
    }
    let mut support = c.support();
    support.extend(c.ambient.iter().copied());
    if let Some(y) = support.iter().find(|y| !inverse.contains_key(y)) {
        return Err(Error::NotBijective(format!("{y} has no preimage")));
    }
    let pre = |set: &Vec<usize>| {
        let mut v: Vec<usize> = set.iter().map(|y| inverse[y]).collect();
        v.sort_unstable();
        v
    };
    let families: Vec<Vec<Vec<usize>>> = c
        .families
        .iter()
        .map(|fam| fam.iter().map(pre).collect())
        .collect();
    Ok(ColoredCover {
        ambient: pre(&c.ambient),
        eps: rebound(&families, c.eps, domain),
        families,
        mu: c.mu,
    })
}
