use std::collections::HashSet;

use crate::action::Perm;
use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// An ordered tuple `(g_1, …, g_N)` of injective index maps `X → Y`.
#[derive(Clone, Debug)]
pub struct MapFamily {
    source: FiniteSpace,
    target: FiniteSpace,
    maps: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl MapFamily {
    pub fn new(
        source: FiniteSpace,
        target: FiniteSpace,
        maps: Vec<Vec<usize>>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::input("maps", "a family needs at least one map"));
        }
        if labels.len() != maps.len() {
            return Err(Error::input(
                "labels",
                format!("{} labels for {} maps", labels.len(), maps.len()),
            ));
        }
        let mut seen = HashSet::new();
        for (k, l) in labels.iter().enumerate() {
            if !seen.insert(l) {
                return Err(Error::input(format!("labels[{k}]"), format!("duplicate label `{l}`")));
            }
        }
        for (i, map) in maps.iter().enumerate() {
            if map.len() != source.n_points() {
                return Err(Error::input(
                    format!("maps[{i}]"),
                    format!("{} images for {} source points", map.len(), source.n_points()),
                ));
            }
            let mut hit = vec![false; target.n_points()];
            for (x, &y) in map.iter().enumerate() {
                if y >= target.n_points() {
                    return Err(Error::input(
                        format!("maps[{i}][{x}]"),
                        format!("image {y} out of range"),
                    ));
                }
                if hit[y] {
                    return Err(Error::input(
                        format!("maps[{i}][{x}]"),
                        format!("image {y} repeated; maps must be injective"),
                    ));
                }
                hit[y] = true;
            }
        }
        Ok(MapFamily {
            source,
            target,
            maps,
            labels,
        })
    }

    /// The family `F ⊆ G` acting on `space`, with `X = Y`.
    pub fn from_perms(space: &FiniteSpace, elements: &[Perm]) -> Result<Self> {
        let maps = elements.iter().map(|g| g.images().to_vec()).collect();
        let labels = (0..elements.len()).map(|k| format!("g{k}")).collect();
        MapFamily::new(space.clone(), space.clone(), maps, labels)
    }

    /// Restricts every map to the source points `indices`.
    pub fn restrict_source(&self, indices: &[usize]) -> Result<Self> {
        let source = self.source.subspace(indices)?;
        let maps = self
            .maps
            .iter()
            .map(|m| indices.iter().map(|&x| m[x]).collect())
            .collect();
        MapFamily::new(source, self.target.clone(), maps, self.labels.clone())
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    #[inline]
    pub fn eval(&self, i: usize, x: usize) -> usize {
        self.maps[i][x]
    }
}
