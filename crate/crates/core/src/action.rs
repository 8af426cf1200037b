//! Permutation actions of finite groups on a [`FiniteSpace`].

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// Default cap on the number of enumerated group elements.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// A bijection of `0..n`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &v) in images.iter().enumerate() {
            if v >= n {
                return Err(Error::input(format!("[{i}]"), format!("image {v} out of range")));
            }
            if seen[v] {
                return Err(Error::input(format!("[{i}]"), format!("image {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Perm(images))
    }

    /// Rotation `i ↦ i + step (mod n)`.
    pub fn rotation(n: usize, step: usize) -> Self {
        Perm((0..n).map(|i| (i + step) % n).collect())
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }
}

#[derive(Clone, Debug)]
pub struct GroupAction {
    space: FiniteSpace,
    generators: Vec<Perm>,
    elements: Option<Vec<Perm>>,
    cap: usize,
    isometry: bool,
}

impl GroupAction {
    /// Action generated by `generators`. The group is enumerated by breadth
    /// first closure with the identity first; if it exceeds `cap` elements the
    /// action is still usable for orbit queries, but [`GroupAction::elements`]
    /// fails.
    pub fn generate(space: FiniteSpace, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        let n = space.n_points();
        for (g, p) in generators.iter().enumerate() {
            if p.len() != n {
                return Err(Error::input(
                    format!("generators[{g}]"),
                    format!("permutation of {} points on a space of {n}", p.len()),
                ));
            }
        }
        let elements = enumerate_closure(n, &generators, cap);
        let isometry = generators.iter().all(|g| preserves_metric(&space, g));
        Ok(GroupAction {
            space,
            generators,
            elements,
            cap,
            isometry,
        })
    }

    /// Action given by an explicit element list, which may repeat
    /// permutations (a non-faithful action of an abstract group). The distinct
    /// permutations must form a group.
    pub fn from_elements(space: FiniteSpace, elements: Vec<Perm>) -> Result<Self> {
        let n = space.n_points();
        for (g, p) in elements.iter().enumerate() {
            if p.len() != n {
                return Err(Error::input(
                    format!("elements[{g}]"),
                    format!("permutation of {} points on a space of {n}", p.len()),
                ));
            }
        }
        let distinct: HashSet<&Perm> = elements.iter().collect();
        if !distinct.contains(&Perm::identity(n)) {
            return Err(Error::input("elements", "identity missing"));
        }
        for a in &distinct {
            for b in &distinct {
                if !distinct.contains(&a.compose(b)) {
                    return Err(Error::input("elements", "not closed under composition"));
                }
            }
        }
        let generators: Vec<Perm> = {
            let set: BTreeSet<Perm> = elements.iter().cloned().collect();
            set.into_iter().collect()
        };
        let isometry = generators.iter().all(|g| preserves_metric(&space, g));
        let cap = elements.len();
        Ok(GroupAction {
            space,
            generators,
            elements: Some(elements),
            cap,
            isometry,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> Result<&[Perm]> {
        self.elements
            .as_deref()
            .ok_or(Error::GroupCapExceeded { cap: self.cap })
    }

    pub fn is_isometric(&self) -> bool {
        self.isometry
    }

    /// `G·x`, sorted.
    pub fn orbit(&self, x: usize) -> Result<Vec<usize>> {
        self.space.check_index(x)?;
        let mut seen = vec![false; self.space.n_points()];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    queue.push_back(z);
                }
            }
        }
        Ok(seen
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect())
    }

    fn orbit_sizes(&self) -> Vec<usize> {
        (0..self.space.n_points())
            .map(|x| self.orbit(x).map(|o| o.len()).unwrap_or(0))
            .collect()
    }

    /// Points whose orbit has at most `n` elements.
    pub fn periodic_set(&self, n: usize) -> Vec<usize> {
        self.orbit_sizes()
            .into_iter()
            .enumerate()
            .filter_map(|(x, size)| (size <= n).then_some(x))
            .collect()
    }

    pub fn fix_set(&self) -> Vec<usize> {
        self.periodic_set(1)
    }

    /// Indices of the elements acting as the identity.
    pub fn action_kernel(&self) -> Result<Vec<usize>> {
        Ok(self
            .elements()?
            .iter()
            .enumerate()
            .filter_map(|(k, g)| g.is_identity().then_some(k))
            .collect())
    }

    /// The induced faithful action: one element per distinct permutation, in
    /// order of first appearance.
    pub fn quotient(&self) -> Result<GroupAction> {
        let mut seen = HashSet::new();
        let elements: Vec<Perm> = self
            .elements()?
            .iter()
            .filter(|g| seen.insert((*g).clone()))
            .cloned()
            .collect();
        Ok(GroupAction {
            space: self.space.clone(),
            generators: self.generators.clone(),
            cap: self.cap,
            isometry: self.isometry,
            elements: Some(elements),
        })
    }
}

fn preserves_metric(space: &FiniteSpace, g: &Perm) -> bool {
    let n = space.n_points();
    (0..n).all(|i| (0..n).all(|j| space.distance(i, j) == space.distance(g.apply(i), g.apply(j))))
}

fn enumerate_closure(n: usize, generators: &[Perm], cap: usize) -> Option<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in generators {
            let h = g.compose(&e);
            if seen.insert(h.clone()) {
                if elements.len() >= cap {
                    return None;
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Some(elements)
}
