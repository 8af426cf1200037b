//! Partitions of labeled map families and the compatible subsets `W_P`.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::MapFamily;

/// A partition of the labels `0..n`.
///
/// Blocks are kept canonical (each block sorted, blocks ordered by least
/// label) so that equality of partitions is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::input(format!("[{b}]"), "empty block"));
            }
            for &s in block {
                if s >= n {
                    return Err(Error::input(format!("[{b}]"), format!("label {s} out of range")));
                }
                if block_of[s] != usize::MAX {
                    return Err(Error::input(format!("[{b}]"), format!("label {s} in two blocks")));
                }
                block_of[s] = b;
            }
        }
        if let Some(s) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::input("", format!("label {s} not covered")));
        }
        Ok(Self::canonical(blocks))
    }

    /// The partition of `0..keys.len()` into classes of equal keys.
    pub fn from_keys<K: Eq + Hash>(keys: &[K]) -> Self {
        let mut class: HashMap<&K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (s, k) in keys.iter().enumerate() {
            let b = *class.entry(k).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(s);
        }
        // already canonical: blocks open in order of their least label
        let mut block_of = vec![0; keys.len()];
        for (b, block) in blocks.iter().enumerate() {
            for &s in block {
                block_of[s] = b;
            }
        }
        Partition { blocks, block_of }
    }

    /// All singletons.
    pub fn discrete(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|s| vec![s]).collect(),
            block_of: (0..n).collect(),
        }
    }

    fn canonical(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let n = blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![0; n];
        for (b, block) in blocks.iter().enumerate() {
            for &s in block {
                block_of[s] = b;
            }
        }
        Partition { blocks, block_of }
    }

    pub fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    /// `|P|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index of the block containing `s`.
    #[inline]
    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    #[inline]
    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, blocks)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

/// Whether every block of `fine` lies inside a block of `coarse`.
pub fn refines(fine: &Partition, coarse: &Partition) -> Result<bool> {
    if fine.ground_size() != coarse.ground_size() {
        return Err(Error::GroundMismatch {
            left: fine.ground_size(),
            right: coarse.ground_size(),
        });
    }
    Ok(fine
        .blocks()
        .iter()
        .all(|b| b.iter().all(|&s| coarse.same_block(s, b[0]))))
}

/// Every partition of `0..n`, in restricted-growth-string order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(k: usize, max: usize, rgs: &mut [usize], out: &mut Vec<Partition>) {
        if k == rgs.len() {
            out.push(Partition::from_keys(rgs));
            return;
        }
        for v in 0..=max + 1 {
            rgs[k] = v;
            rec(k + 1, max.max(v), rgs, out);
        }
    }
    if n == 0 {
        return vec![Partition::discrete(0)];
    }
    rgs[0] = 0;
    rec(1, 0, &mut rgs, &mut out);
    out
}

/// The `x`-induced partition: `g_i ~ g_j` iff `g_i(x) = g_j(x)`.
pub fn induced_partition(fam: &MapFamily, x: usize) -> Result<Partition> {
    fam.source().check_index(x)?;
    let values: Vec<usize> = (0..fam.len()).map(|i| fam.eval(i, x)).collect();
    Ok(Partition::from_keys(&values))
}

/// `W_P = {x ∈ W : x_F = P}`.
pub fn compatible_subset(fam: &MapFamily, w: &[usize], p: &Partition) -> Result<Vec<usize>> {
    if p.ground_size() != fam.len() {
        return Err(Error::GroundMismatch {
            left: p.ground_size(),
            right: fam.len(),
        });
    }
    let mut out = Vec::new();
    for &x in w {
        if induced_partition(fam, x)? == *p {
            out.push(x);
        }
    }
    Ok(out)
}
