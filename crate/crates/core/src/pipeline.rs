//! Separation of coherent blocks and the sequential constructions built on
//! it: injectivity of `f^F` for a map family, and the orbit map of a group
//! action.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{GroupAction, Perm};
use crate::certificate::{lipschitz, orbit_table, EmbeddingCertificate, Restriction};
use crate::cover::{build_cover, cluster, pull_cover, verify_cover, Backend, ColoredCover};
use crate::doubled::{
    decompose_pairs, intersective_transport, reduced_maps, CoherentBlock, DoubledFamily, Kind,
    Pair, ReducedMaps, Transport,
};
use crate::error::{Error, Result};
use crate::exact::abs_diff_le;
use crate::family::MapFamily;
use crate::hypothesis::{check_hypotheses_action, check_hypotheses_family, max_orbit_size};
use crate::observable::{modulus, Observable};
use crate::partition::{induced_partition, Partition};
use crate::perturb::{assign_values, perturb, ValueAssignment};
use crate::separation::{restricted_space, DEFAULT_EXACT_CAP};
use crate::witness::{check_separation, BipartiteInstance, Witness};

/// Scales tried for `X^(F,ε)` when the group is only known through a finite
/// window: the space diameter halved until it drops below the smallest
/// positive distance.
const MAX_SEPARATION_SCALES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedOptions {
    pub backend: Backend,
    /// Also list unrealized partitions in the hypothesis report.
    pub all_partitions: bool,
    pub exact_cap: usize,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            backend: Backend::Cells,
            all_partitions: true,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

/// `f^F(x)`, map-major: entry `i·r + ℓ` is `f_ℓ(g_i(x))`.
pub fn orbit_vector(f: &Observable, fam: &MapFamily, x: usize) -> Vec<f64> {
    (0..fam.len())
        .flat_map(|i| f.values[fam.eval(i, x)].iter().copied())
        .collect()
}

fn pair_distance(f: &Observable, fam: &MapFamily, (a, b): Pair) -> f64 {
    (0..fam.len())
        .flat_map(|i| {
            let (ya, yb) = (fam.eval(i, a), fam.eval(i, b));
            (0..f.r).map(move |l| (ya, yb, l))
        })
        .map(|(ya, yb, l)| (f.get(ya, l) - f.get(yb, l)).abs())
        .fold(0.0, f64::max)
}

/// Minimum over `pairs` of `‖f^F(x_1) − f^F(x_2)‖∞`; infinite when `pairs`
/// is empty and zero exactly when some pair collides.
pub fn margin(f: &Observable, fam: &MapFamily, pairs: &[Pair]) -> f64 {
    pairs
        .par_iter()
        .map(|&p| pair_distance(f, fam, p))
        .reduce(|| f64::INFINITY, f64::min)
}

/// `{(a, b) : a < b}` over `n` points.
pub fn unordered_pairs(n: usize) -> Vec<Pair> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    Empty,
    /// Every pair was already separated; nothing was perturbed.
    AlreadySeparated,
    Separated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSummary {
    pub column: usize,
    pub families: usize,
    pub mu: usize,
    pub subsets: usize,
    pub eps: f64,
}

impl CoverSummary {
    fn of(column: usize, c: &ColoredCover) -> Self {
        CoverSummary {
            column,
            families: c.families.len(),
            mu: c.mu,
            subsets: c.subset_count(),
            eps: c.eps,
        }
    }
}

/// The coordinate `(i, ℓ)` at which `f̃^F` separates a pair, and the
/// combinatorial witness it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub pair: Pair,
    pub map: usize,
    pub coordinate: usize,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDetail {
    pub m1: usize,
    pub m2: usize,
    pub delta: Option<f64>,
    pub eta: Option<f64>,
    pub transport: Option<Transport>,
    pub covers: Vec<CoverSummary>,
    pub assignment: ValueAssignment,
    pub witnesses: Vec<PairWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockLog {
    pub partition: Partition,
    pub kind: Kind,
    /// Pairs as processed, oriented so that `M_1 ≥ M_2`.
    pub pairs: Vec<Pair>,
    pub status: BlockStatus,
    pub budget: f64,
    pub displacement: f64,
    pub detail: Option<BlockDetail>,
    /// Margin over every pair processed so far, after this block.
    pub margin_after: Option<f64>,
}

impl BlockLog {
    fn trivial(block: &CoherentBlock, status: BlockStatus) -> Self {
        BlockLog {
            partition: block.partition.clone(),
            kind: block.kind(),
            pairs: block.pairs.clone(),
            status,
            budget: 0.0,
            displacement: 0.0,
            detail: None,
            margin_after: None,
        }
    }
}

/// `η`: every pair of source points closer than it is moved by each `g_i`
/// to points closer than `delta`. `None` when no pair constrains it.
fn eta_for(fam: &MapFamily, delta: f64) -> Option<f64> {
    let n = fam.source().n_points();
    let eta = unordered_pairs(n)
        .into_par_iter()
        .filter(|&(a, b)| {
            (0..fam.len()).any(|i| fam.target().distance(fam.eval(i, a), fam.eval(i, b)) >= delta)
        })
        .map(|(a, b)| fam.source().distance(a, b))
        .reduce(|| f64::INFINITY, f64::min);
    finite(eta)
}

fn column_cover_from_parts(
    ambient: &[usize],
    families: Vec<Vec<Vec<usize>>>,
    eps: f64,
    mu: usize,
) -> ColoredCover {
    ColoredCover {
        ambient: ambient.to_vec(),
        families,
        eps,
        mu,
    }
}

fn check_cover(c: &ColoredCover, fam: &MapFamily, column: usize) -> Result<()> {
    let report = verify_cover(c, fam.source());
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Verification(format!("column {} cover: {v}", column + 1))),
    }
}

/// Perturbs `f` by at most `eps` so that `f̃^F` separates every pair of
/// `block`, following the block-separation construction: modulus `δ`,
/// scale `η`, reduced maps, colored covers of `Z_1` and `Z_2` (pulled back
/// through `T` when the block is intersective), merged families, value
/// assignment, and a per-pair separation certificate from the bipartite
/// witness lemma.
pub fn separate_on_block(
    df: &DoubledFamily,
    block: &CoherentBlock,
    f: &Observable,
    eps: f64,
    backend: Backend,
) -> Result<(Observable, BlockLog)> {
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    let fam = df.base();
    f.check_domain(fam.target())?;
    if block.is_empty() {
        return Ok((f.clone(), BlockLog::trivial(block, BlockStatus::Empty)));
    }
    block.verify(df)?;
    let mut block = block.clone();
    if reduced_maps(df, &block, 0)?.count() < reduced_maps(df, &block, 1)?.count() {
        block = block.swapped(df);
    }
    let red = [reduced_maps(df, &block, 0)?, reduced_maps(df, &block, 1)?];
    let (m1, m2) = (red[0].count(), red[1].count());
    let r = f.r;
    let mu = |m: usize| r * m / 2 + 1;

    let delta = (0..r)
        .filter_map(|l| modulus(fam.target(), f, l, eps / 2.0))
        .map(|d| d / 2.0)
        .reduce(f64::min);
    let eta = delta.and_then(|d| eta_for(fam, d));
    let all: Vec<usize> = (0..fam.source().n_points()).collect();
    let cover_eps = match eta {
        Some(e) => e / 2.0,
        None => fam.source().diameter(&all) + 1.0,
    };

    let z1 = block.projection(0);
    let z2 = block.projection(1);
    let x = fam.source();
    let cover2 = build_cover(x, &z2, r * m2, mu(m2), cover_eps, backend)?;
    let mut transport = None;
    let cover1 = match block.kind() {
        Kind::NonIntersective => build_cover(x, &z1, r * m1, mu(m1), cover_eps, backend)?,
        Kind::Intersective => {
            let tr = intersective_transport(df, &block)?;
            let pulled = pull_cover(&cover2, &tr.forward(), x)?;
            let mut families = vec![Vec::new(); r * m1];
            let mut hit = vec![false; m1];
            for t2 in 0..m2 {
                let t1 = tr.zeta[t2];
                hit[t1] = true;
                for l in 0..r {
                    let sets = &pulled.families[t2 * r + l];
                    families[t1 * r + l] = if tr.intersecting[t2] {
                        sets.clone()
                    } else {
                        let mut refined: Vec<Vec<usize>> =
                            sets.iter().flat_map(|s| cluster(x, s, cover_eps)).collect();
                        refined.sort_unstable();
                        refined
                    };
                }
            }
            let filler = cluster(x, &z1, cover_eps);
            for t1 in (0..m1).filter(|&t| !hit[t]) {
                for l in 0..r {
                    families[t1 * r + l] = filler.clone();
                }
            }
            transport = Some(tr);
            column_cover_from_parts(&z1, families, cover_eps, mu(m1))
        }
    };
    let covers = [cover1, cover2];
    for (column, c) in covers.iter().enumerate() {
        check_cover(c, fam, column)?;
    }

    // push every cover set forward by its reduced map into coordinate ℓ
    let mut merged: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); r];
    for (c, reduced) in covers.iter().zip(&red) {
        for (k, family) in c.families.iter().enumerate() {
            let rep = reduced.representatives[k / r];
            for set in family {
                let mut image: Vec<usize> = set.iter().map(|&p| fam.eval(rep, p)).collect();
                image.sort_unstable();
                merged[k % r].insert(image);
            }
        }
    }
    let families: Vec<Vec<Vec<usize>>> = merged.into_iter().map(|s| s.into_iter().collect()).collect();
    for (l, family) in families.iter().enumerate() {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (k, set) in family.iter().enumerate() {
            for &y in set {
                if let Some(prev) = owner.insert(y, k) {
                    return Err(Error::Verification(format!(
                        "merged family {l}: subsets {prev} and {k} share {y}"
                    )));
                }
            }
        }
    }

    let assignment = assign_values(&families, f, eps)?;
    let pert = perturb(f, &assignment, eps)?;
    let g = pert.observable;

    let witnesses = certify_pairs(fam, &block, &red, &covers, &g)?;
    let log = BlockLog {
        partition: block.partition.clone(),
        kind: block.kind(),
        pairs: block.pairs.clone(),
        status: BlockStatus::Separated,
        budget: eps,
        displacement: pert.displacement,
        detail: Some(BlockDetail {
            m1,
            m2,
            delta,
            eta,
            transport,
            covers: covers
                .iter()
                .enumerate()
                .map(|(j, c)| CoverSummary::of(j, c))
                .collect(),
            assignment,
            witnesses,
        }),
        margin_after: None,
    };
    Ok((g, log))
}

/// Runs the bipartite separation lemma on every pair of the block with
/// `W = [N]×[r]`, `V_j = [M_j]×[r]`, `F_j(i, ℓ) = (P_j(i), ℓ)`, `V_j^*` the
/// families covering `x_j`, and `φ_j(t, ℓ) = f̃_ℓ(g̃_{t,j}(x_j))`.
fn certify_pairs(
    fam: &MapFamily,
    block: &CoherentBlock,
    red: &[ReducedMaps; 2],
    covers: &[ColoredCover; 2],
    g: &Observable,
) -> Result<Vec<PairWitness>> {
    let r = g.r;
    let n = fam.len();
    let f_j: Vec<Vec<usize>> = red
        .iter()
        .map(|rm| {
            (0..n)
                .flat_map(|i| (0..r).map(move |l| rm.partition.block_of(i) * r + l))
                .collect()
        })
        .collect();
    block
        .pairs
        .par_iter()
        .map(|&(x1, x2)| {
            let xs = [x1, x2];
            let stars: Vec<Vec<usize>> = (0..2)
                .map(|j| {
                    (0..covers[j].families.len())
                        .filter(|&k| covers[j].families[k].iter().any(|s| s.contains(&xs[j])))
                        .collect()
                })
                .collect();
            let phis: Vec<Vec<f64>> = (0..2)
                .map(|j| {
                    (0..red[j].count() * r)
                        .map(|k| g.get(fam.eval(red[j].representatives[k / r], xs[j]), k % r))
                        .collect()
                })
                .collect();
            let inst = BipartiteInstance::new(
                red[0].count() * r,
                red[1].count() * r,
                f_j[0].clone(),
                f_j[1].clone(),
                &stars[0],
                &stars[1],
            )
            .map_err(|e| Error::Verification(format!("pair ({x1}, {x2}): {e}")))?;
            let sep = check_separation(&inst, &phis[0], &phis[1])
                .map_err(|e| Error::Verification(format!("pair ({x1}, {x2}): {e}")))?;
            let (i, l) = (sep.w / r, sep.w % r);
            if g.get(fam.eval(i, x1), l) == g.get(fam.eval(i, x2), l) {
                return Err(Error::Verification(format!(
                    "pair ({x1}, {x2}) not separated at map {i}, coordinate {l}"
                )));
            }
            Ok(PairWitness {
                pair: (x1, x2),
                map: i,
                coordinate: l,
                witness: sep.witness,
            })
        })
        .collect()
}

/// All coherent blocks covering every unordered pair once, each pair
/// oriented with `M_1 ≥ M_2` (ties keep the smaller index first).
/// Partitions come by decreasing block count then lexicographically, and
/// blocks within a partition by least pair.
pub fn plan_blocks(df: &DoubledFamily) -> Result<Vec<CoherentBlock>> {
    let fam = df.base();
    let n = fam.source().n_points();
    let m: Vec<usize> = (0..n)
        .map(|x| induced_partition(fam, x).map(|p| p.len()))
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<Partition, Vec<Pair>> = BTreeMap::new();
    for (a, b) in unordered_pairs(n) {
        let pair = if m[b] > m[a] { (b, a) } else { (a, b) };
        classes.entry(df.induced_partition(pair)?).or_default().push(pair);
    }
    let mut order: Vec<(Partition, Vec<Pair>)> = classes.into_iter().collect();
    order.sort_by(|(p, _), (q, _)| q.len().cmp(&p.len()).then_with(|| p.cmp(q)));
    let mut blocks = Vec::new();
    for (p, pairs) in order {
        let mut bs = decompose_pairs(df, &p, pairs)?;
        bs.sort_by(|a, b| a.pairs.first().cmp(&b.pairs.first()));
        blocks.extend(bs);
    }
    Ok(blocks)
}

fn check_observable(fam: &MapFamily, r: usize, eps: f64, f0: &Observable) -> Result<()> {
    if r == 0 {
        return Err(Error::input("r", "r must be at least 1"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::input("eps", format!("eps must be positive and finite, got {eps}")));
    }
    if f0.r != r {
        return Err(Error::input("r", format!("observable has r = {}, requested {r}", f0.r)));
    }
    f0.check_domain(fam.target())
}

/// Builds `f̃` within `eps` of `f0` with `f̃^F` injective on the source.
///
/// Blocks are processed in [`plan_blocks`] order. A block whose pairs are
/// already separated is recorded and skipped; otherwise the `k`-th actual
/// perturbation gets budget `min(eps / 2^(k+1), m / 2)` where `m` is the
/// margin over all pairs handled so far. Each perturbation moves values by
/// at most half its budget, so earlier separations survive; this is
/// asserted after every block.
pub fn embed_family(
    fam: &MapFamily,
    r: usize,
    eps: f64,
    f0: &Observable,
    opts: &EmbedOptions,
) -> Result<EmbeddingCertificate> {
    check_observable(fam, r, eps, f0)?;
    let hypothesis = check_hypotheses_family(fam, r, opts.all_partitions);
    if !hypothesis.passed {
        return Err(Error::HypothesisFailed(hypothesis.failure_summary()));
    }
    let df = DoubledFamily::new(fam.clone());
    let blocks = plan_blocks(&df)?;
    let all_pairs = unordered_pairs(fam.source().n_points());
    let initial_margin = margin(f0, fam, &all_pairs);

    let mut f = f0.clone();
    let mut processed: Vec<Pair> = Vec::new();
    let mut logs = Vec::with_capacity(blocks.len());
    let mut steps = 0u32;
    let mut budget_total = 0.0;
    for (idx, block) in blocks.iter().enumerate() {
        if margin(&f, fam, &block.pairs) > 0.0 {
            processed.extend_from_slice(&block.pairs);
            let mut log = BlockLog::trivial(block, BlockStatus::AlreadySeparated);
            log.margin_after = finite(margin(&f, fam, &processed));
            logs.push(log);
            continue;
        }
        let running = margin(&f, fam, &processed);
        let budget = (eps / 2f64.powi(steps as i32 + 1)).min(running / 2.0);
        let (g, mut log) = separate_on_block(&df, block, &f, budget, opts.backend).map_err(|e| match e {
            Error::GridInfeasible(message) => Error::BudgetExhausted { block: idx, message },
            other => other,
        })?;
        steps += 1;
        budget_total += budget;
        let before = processed.len();
        processed.extend_from_slice(&block.pairs);
        // persistence: nothing separated earlier may collide now
        if let Some(&p) = processed[..before]
            .iter()
            .find(|&&p| pair_distance(&g, fam, p) == 0.0)
        {
            return Err(Error::Verification(format!(
                "block {idx} undid the separation of pair {p:?}"
            )));
        }
        let after = margin(&g, fam, &processed);
        if !(after > 0.0) {
            return Err(Error::Verification(format!(
                "block {idx} left a pair unseparated"
            )));
        }
        log.margin_after = Some(after);
        logs.push(log);
        f = g;
    }

    let final_margin = margin(&f, fam, &all_pairs);
    if !(final_margin > 0.0) {
        return Err(Error::Verification("final orbit map is not injective".into()));
    }
    for (y, (new, old)) in f.values.iter().zip(&f0.values).enumerate() {
        for l in 0..r {
            if !abs_diff_le(new[l], old[l], eps) {
                return Err(Error::Verification(format!(
                    "total displacement exceeds eps at point {y}, coordinate {l}"
                )));
            }
        }
    }
    let displacement = f.sup_distance(f0);
    Ok(EmbeddingCertificate {
        version: env!("CARGO_PKG_VERSION").to_string(),
        r,
        eps,
        backend: opts.backend,
        exact_cap: opts.exact_cap,
        labels: fam.labels().to_vec(),
        source_points: (0..fam.source().n_points()).collect(),
        all_partitions: opts.all_partitions,
        hypothesis,
        action_hypothesis: None,
        restrictions: Vec::new(),
        seed: None,
        input_hashes: BTreeMap::new(),
        lipschitz_before: lipschitz(fam.target(), f0),
        lipschitz_after: lipschitz(fam.target(), &f),
        f0: f0.clone(),
        observable: f,
        blocks: logs,
        perturbation_steps: steps as usize,
        budget_total,
        initial_margin: finite(initial_margin),
        margin: finite(final_margin),
        displacement,
        table: None,
    })
}

/// The family an action contributes: all elements of the faithful quotient
/// when `G` is enumerable, otherwise the distinct members of `window`
/// restricted to the largest `X^(F,ε)` over the scale grid.
pub struct EquivariantSetup {
    pub family: MapFamily,
    pub restrictions: Vec<Restriction>,
}

pub fn equivariant_setup(
    a: &GroupAction,
    window: Option<&[Perm]>,
    r: usize,
    exact_cap: usize,
) -> Result<EquivariantSetup> {
    let space = a.space();
    match window {
        None => {
            let q = a.quotient()?;
            Ok(EquivariantSetup {
                family: MapFamily::from_perms(space, q.elements()?)?,
                restrictions: Vec::new(),
            })
        }
        Some(w) => {
            let mut seen = BTreeSet::new();
            let f: Vec<Perm> = w.iter().filter(|g| seen.insert((*g).clone())).cloned().collect();
            if f.is_empty() {
                return Err(Error::EmptySet("window"));
            }
            for g in &f {
                if g.len() != space.n_points() {
                    return Err(Error::input("window", "permutation length differs from the space"));
                }
            }
            let all: Vec<usize> = (0..space.n_points()).collect();
            let dim = space.dim(&all).max(0) as usize;
            let n = 2 * dim / r + 1;
            let floor = space.min_positive_distance().unwrap_or(1.0);
            let mut scale = space.diameter(&all).max(floor);
            let mut restrictions = Vec::new();
            for _ in 0..MAX_SEPARATION_SCALES {
                let points = restricted_space(a, &f, scale, r, n, exact_cap)?;
                restrictions.push(Restriction {
                    sep_eps: scale,
                    n,
                    points,
                });
                if scale < floor {
                    break;
                }
                scale /= 2.0;
            }
            let largest = restrictions.last().expect("at least one scale").points.clone();
            Ok(EquivariantSetup {
                family: MapFamily::from_perms(space, &f)?.restrict_source(&largest)?,
                restrictions,
            })
        }
    }
}

/// Equivariant embedding: gates on `dim (G,X)_N < (r/2)N` for every `N` up
/// to the largest orbit, builds the family from [`equivariant_setup`], runs
/// [`embed_family`] and attaches the orbit-map table.
pub fn embed_equivariant(
    a: &GroupAction,
    window: Option<&[Perm]>,
    r: usize,
    eps: f64,
    f0: &Observable,
    opts: &EmbedOptions,
) -> Result<EmbeddingCertificate> {
    if r == 0 {
        return Err(Error::input("r", "r must be at least 1"));
    }
    if window.is_none() {
        a.elements()?;
    }
    let action_hypothesis = check_hypotheses_action(a, r, max_orbit_size(a));
    if !action_hypothesis.passed {
        return Err(Error::HypothesisFailed(action_hypothesis.failure_summary()));
    }
    let setup = equivariant_setup(a, window, r, opts.exact_cap)?;
    let mut cert = embed_family(&setup.family, r, eps, f0, opts)?;
    if let Some(last) = setup.restrictions.last() {
        cert.source_points = last.points.clone();
    }
    cert.action_hypothesis = Some(action_hypothesis);
    cert.restrictions = setup.restrictions;
    let table = orbit_table(&cert.observable, &setup.family, &cert.source_points);
    table.check_injective()?;
    cert.table = Some(table);
    Ok(cert)
}

/// Outcome of embedding from many seeded starting observables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub samples: usize,
    pub injective_before: usize,
    pub certified_after: usize,
    pub fraction_before: f64,
    pub success_rate: f64,
}

/// Samples `f0` from each seed, records whether `f0^F` is already
/// injective, and whether the construction certifies an embedding.
pub fn genericity_sample(
    fam: &MapFamily,
    r: usize,
    eps: f64,
    seeds: std::ops::Range<u64>,
    opts: &EmbedOptions,
) -> GenericityReport {
    let pairs = unordered_pairs(fam.source().n_points());
    let outcomes: Vec<(bool, bool)> = seeds
        .into_par_iter()
        .map(|seed| {
            let f0 = Observable::sample(fam.target().n_points(), r, seed);
            let before = margin(&f0, fam, &pairs) > 0.0;
            let after = embed_family(fam, r, eps, &f0, opts)
                .map(|c| c.margin.is_none_or(|m| m > 0.0))
                .unwrap_or(false);
            (before, after)
        })
        .collect();
    let samples = outcomes.len();
    let injective_before = outcomes.iter().filter(|o| o.0).count();
    let certified_after = outcomes.iter().filter(|o| o.1).count();
    let frac = |k: usize| if samples == 0 { 0.0 } else { k as f64 / samples as f64 };
    GenericityReport {
        samples,
        injective_before,
        certified_after,
        fraction_before: frac(injective_before),
        success_rate: frac(certified_after),
    }
}
