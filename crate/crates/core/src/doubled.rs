//! The doubled family on the off-diagonal, coherent decompositions of its
//! compatible sets, and the transport data of intersective partitions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::MapFamily;
use crate::partition::Partition;

pub type Pair = (usize, usize);

/// Label of `g_i^{(j)}` for map `i` and column `j ∈ {0, 1}` (first and second
/// coordinate of the pair). The order is `g_1^{(1)}, g_1^{(2)}, g_2^{(1)}, …`.
#[inline]
pub const fn label(i: usize, column: usize) -> usize {
    2 * i + column
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Intersective,
    NonIntersective,
}

/// The `2N` maps `g_i^{(j)}(x_1, x_2) = g_i(x_j)` on `X × X` minus the diagonal.
#[derive(Clone, Debug)]
pub struct DoubledFamily {
    base: MapFamily,
}

impl DoubledFamily {
    pub fn new(base: MapFamily) -> Self {
        DoubledFamily { base }
    }

    pub fn base(&self) -> &MapFamily {
        &self.base
    }

    /// Number of doubled labels, `2N`.
    pub fn len(&self) -> usize {
        2 * self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn label_names(&self) -> Vec<String> {
        self.base
            .labels()
            .iter()
            .flat_map(|l| [format!("{l}^(1)"), format!("{l}^(2)")])
            .collect()
    }

    #[inline]
    pub fn eval(&self, label: usize, pair: Pair) -> usize {
        let x = if label.is_multiple_of(2) { pair.0 } else { pair.1 };
        self.base.eval(label / 2, x)
    }

    /// Partition of the `2N` labels by equality of their values at `pair`.
    pub fn induced_partition(&self, pair: Pair) -> Result<Partition> {
        let src = self.base.source();
        src.check_index(pair.0)?;
        src.check_index(pair.1)?;
        if pair.0 == pair.1 {
            return Err(Error::DiagonalPair(pair.0));
        }
        let values: Vec<usize> = (0..self.len()).map(|k| self.eval(k, pair)).collect();
        Ok(Partition::from_keys(&values))
    }

    /// Every ordered off-diagonal pair, grouped by induced partition.
    pub fn off_diagonal_classes(&self) -> BTreeMap<Partition, Vec<Pair>> {
        let n = self.base.source().n_points();
        let mut classes: BTreeMap<Partition, Vec<Pair>> = BTreeMap::new();
        for x1 in 0..n {
            for x2 in 0..n {
                if x1 != x2 {
                    let p = self
                        .induced_partition((x1, x2))
                        .expect("indices in range and off the diagonal");
                    classes.entry(p).or_default().push((x1, x2));
                }
            }
        }
        classes
    }

    /// `X^Δ_P̂`: the off-diagonal pairs whose induced partition is `p_hat`.
    pub fn compatible_pairs(&self, p_hat: &Partition) -> Result<Vec<Pair>> {
        if p_hat.ground_size() != self.len() {
            return Err(Error::GroundMismatch {
                left: p_hat.ground_size(),
                right: self.len(),
            });
        }
        let n = self.base.source().n_points();
        let mut out = Vec::new();
        for x1 in 0..n {
            for x2 in 0..n {
                if x1 != x2 && self.induced_partition((x1, x2))? == *p_hat {
                    out.push((x1, x2));
                }
            }
        }
        Ok(out)
    }
}

/// Whether some block of `p_hat` holds both a column-1 and a column-2 label.
pub fn classify(p_hat: &Partition) -> Kind {
    let mixes = p_hat.blocks().iter().any(|b| {
        b.iter().any(|&k| k % 2 == 0) && b.iter().any(|&k| k % 2 == 1)
    });
    if mixes {
        Kind::Intersective
    } else {
        Kind::NonIntersective
    }
}

/// The partition with the two columns exchanged, matching swapped pairs.
pub fn swap_columns(p_hat: &Partition) -> Partition {
    let blocks = p_hat
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&k| k ^ 1).collect())
        .collect();
    Partition::from_blocks(p_hat.ground_size(), blocks).expect("relabeling keeps a partition")
}

/// A finite coherent piece of `X^Δ_P̂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentBlock {
    pub partition: Partition,
    pub pairs: Vec<Pair>,
    /// For each block of `partition`, the sorted target indices its labels
    /// take on `pairs`.
    pub image_sets: Vec<Vec<usize>>,
}

impl CoherentBlock {
    fn from_pairs(df: &DoubledFamily, partition: Partition, mut pairs: Vec<Pair>) -> Self {
        pairs.sort_unstable();
        let mut images = vec![BTreeSet::new(); partition.len()];
        for &pair in &pairs {
            for k in 0..df.len() {
                images[partition.block_of(k)].insert(df.eval(k, pair));
            }
        }
        CoherentBlock {
            partition,
            pairs,
            image_sets: images.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn kind(&self) -> Kind {
        classify(&self.partition)
    }

    /// `π_j` of the pairs, sorted.
    pub fn projection(&self, column: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .pairs
            .iter()
            .map(|&(a, b)| if column == 0 { a } else { b })
            .collect();
        set.into_iter().collect()
    }

    /// The same block seen with the coordinates of every pair exchanged.
    pub fn swapped(&self, df: &DoubledFamily) -> Self {
        CoherentBlock::from_pairs(
            df,
            swap_columns(&self.partition),
            self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        )
    }

    /// Re-checks membership in `X^Δ_P̂` and coherence.
    pub fn verify(&self, df: &DoubledFamily) -> Result<()> {
        for &pair in &self.pairs {
            if df.induced_partition(pair)? != self.partition {
                return Err(Error::Verification(format!(
                    "pair {pair:?} does not induce the block partition"
                )));
            }
        }
        let recomputed = CoherentBlock::from_pairs(df, self.partition.clone(), self.pairs.clone());
        if recomputed.image_sets != self.image_sets {
            return Err(Error::Verification("stale image sets".into()));
        }
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (b, set) in self.image_sets.iter().enumerate() {
            for &y in set {
                if let Some(prev) = owner.insert(y, b) {
                    return Err(Error::Verification(format!(
                        "image {y} shared by partition blocks {prev} and {b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Splits `X^Δ_P̂` into coherent blocks by first-fit: each pair (in
/// lexicographic order) joins the first block whose image sets it does not
/// cross-contaminate, or opens a new one. Singletons are always coherent, so
/// this never fails.
pub fn coherent_decomposition(df: &DoubledFamily, p_hat: &Partition) -> Result<Vec<CoherentBlock>> {
    let pairs = df.compatible_pairs(p_hat)?;
    decompose_pairs(df, p_hat, pairs)
}

/// First-fit decomposition of a chosen subset of `X^Δ_P̂`.
pub fn decompose_pairs(
    df: &DoubledFamily,
    p_hat: &Partition,
    mut pairs: Vec<Pair>,
) -> Result<Vec<CoherentBlock>> {
    pairs.sort_unstable();
    pairs.dedup();
    for &pair in &pairs {
        if df.induced_partition(pair)? != *p_hat {
            return Err(Error::Precondition(format!(
                "pair {pair:?} does not induce the requested partition"
            )));
        }
    }
    struct Growing {
        pairs: Vec<Pair>,
        owner: HashMap<usize, usize>,
    }
    let mut growing: Vec<Growing> = Vec::new();
    for pair in pairs {
        let labelled: Vec<(usize, usize)> = (0..df.len())
            .map(|k| (df.eval(k, pair), p_hat.block_of(k)))
            .collect();
        let slot = growing.iter().position(|g| {
            labelled
                .iter()
                .all(|(y, b)| g.owner.get(y).is_none_or(|owner| owner == b))
        });
        let g = match slot {
            Some(s) => &mut growing[s],
            None => {
                growing.push(Growing {
                    pairs: Vec::new(),
                    owner: HashMap::new(),
                });
                growing.last_mut().expect("just pushed")
            }
        };
        g.pairs.push(pair);
        for (y, b) in labelled {
            g.owner.insert(y, b);
        }
    }
    Ok(growing
        .into_iter()
        .map(|g| CoherentBlock::from_pairs(df, p_hat.clone(), g.pairs))
        .collect())
}

/// The column partition `P_j` of `[N]` and one representative map per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedMaps {
    pub partition: Partition,
    /// Least map index in each block; it agrees with every member on `Z_j`.
    pub representatives: Vec<usize>,
}

impl ReducedMaps {
    /// `M_j`.
    pub fn count(&self) -> usize {
        self.partition.len()
    }
}

pub fn reduced_maps(df: &DoubledFamily, block: &CoherentBlock, column: usize) -> Result<ReducedMaps> {
    if block.is_empty() {
        return Err(Error::EmptySet("reduced_maps"));
    }
    let n = df.base().len();
    let keys: Vec<usize> = (0..n)
        .map(|i| block.partition.block_of(label(i, column)))
        .collect();
    let partition = Partition::from_keys(&keys);
    let representatives: Vec<usize> = partition.blocks().iter().map(|b| b[0]).collect();
    for (t, members) in partition.blocks().iter().enumerate() {
        let rep = representatives[t];
        for &x in &block.projection(column) {
            for &i in members {
                if df.base().eval(i, x) != df.base().eval(rep, x) {
                    return Err(Error::Verification(format!(
                        "map {i} differs from representative {rep} at {x}"
                    )));
                }
            }
        }
    }
    Ok(ReducedMaps {
        partition,
        representatives,
    })
}

/// Transport data of an intersective block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transport {
    /// `T : Z_1 → Z_2` as sorted `(x_1, T(x_1))` entries.
    pub map: Vec<Pair>,
    /// `ζ : [M_2] → [M_1]`, injective.
    pub zeta: Vec<usize>,
    /// Membership of each column-2 block index in `I`.
    pub intersecting: Vec<bool>,
}

impl Transport {
    pub fn forward(&self) -> BTreeMap<usize, usize> {
        self.map.iter().copied().collect()
    }
}

/// Builds `T` and `ζ` for an intersective block with `M_1 ≥ M_2`; verified
/// exhaustively on the block's pairs before returning.
pub fn intersective_transport(df: &DoubledFamily, block: &CoherentBlock) -> Result<Transport> {
    if block.kind() != Kind::Intersective {
        return Err(Error::NotIntersective);
    }
    let p_hat = &block.partition;
    let n = df.base().len();
    let r1 = reduced_maps(df, block, 0)?;
    let r2 = reduced_maps(df, block, 1)?;
    let (m1, m2) = (r1.count(), r2.count());
    if m1 < m2 {
        return Err(Error::Precondition(format!(
            "transport needs M_1 ≥ M_2, got {m1} < {m2}"
        )));
    }

    let mut zeta = vec![usize::MAX; m2];
    let mut intersecting = vec![false; m2];
    for (t2, members) in r2.partition.blocks().iter().enumerate() {
        let hat_block = p_hat.block_of(label(members[0], 1));
        if let Some(i1) = (0..n).find(|&i| p_hat.block_of(label(i, 0)) == hat_block) {
            zeta[t2] = r1.partition.block_of(i1);
            intersecting[t2] = true;
        }
    }
    let mut used = vec![false; m1];
    for &t1 in zeta.iter().filter(|&&t| t != usize::MAX) {
        if used[t1] {
            return Err(Error::Verification("ζ is not injective on I".into()));
        }
        used[t1] = true;
    }
    for t2 in 0..m2 {
        if zeta[t2] == usize::MAX {
            let t1 = used.iter().position(|u| !u).expect("M_1 ≥ M_2 leaves room");
            used[t1] = true;
            zeta[t2] = t1;
        }
    }

    let mut forward: BTreeMap<usize, usize> = BTreeMap::new();
    let mut backward: BTreeMap<usize, usize> = BTreeMap::new();
    for &(x1, x2) in &block.pairs {
        if let Some(&prev) = forward.get(&x1) {
            if prev != x2 {
                return Err(Error::Verification(format!("T({x1}) is both {prev} and {x2}")));
            }
        }
        if let Some(&prev) = backward.get(&x2) {
            if prev != x1 {
                return Err(Error::Verification(format!("T({prev}) = T({x1}) = {x2}")));
            }
        }
        forward.insert(x1, x2);
        backward.insert(x2, x1);
    }
    let cross: Vec<(usize, usize)> = (0..n)
        .flat_map(|i1| (0..n).map(move |i2| (i1, i2)))
        .filter(|&(i1, i2)| p_hat.same_block(label(i1, 0), label(i2, 1)))
        .collect();
    for (&x1, &x2) in &forward {
        for &(i1, i2) in &cross {
            if df.base().eval(i1, x1) != df.base().eval(i2, x2) {
                return Err(Error::Verification(format!(
                    "g_{i1}({x1}) ≠ g_{i2}(T({x1}))"
                )));
            }
        }
    }
    for (t2, &on) in intersecting.iter().enumerate() {
        if on {
            let (rep2, rep1) = (r2.representatives[t2], r1.representatives[zeta[t2]]);
            for (&x1, &x2) in &forward {
                if df.base().eval(rep2, x2) != df.base().eval(rep1, x1) {
                    return Err(Error::Verification(format!(
                        "reduced map {t2} does not match ζ({t2}) through T at {x1}"
                    )));
                }
            }
        }
    }
    Ok(Transport {
        map: forward.into_iter().collect(),
        zeta,
        intersecting,
    })
}
