//! JSON input formats. Every error names the JSON path at fault.
//!
//! * space: `{"n_points", "metric", "simplices"?, "dim_labels"?, "coords"?}`
//! * action: `{"generators", "elements"?, "window"?, "cap"?}`
//! * family: `{"maps", "labels"?, "target"?}` with `target` a space object;
//!   without it the maps act on the source space itself
//! * observable: `{"r", "values"}`

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::action::{GroupAction, Perm, DEFAULT_GROUP_CAP};
use crate::error::{Error, Result};
use crate::family::MapFamily;
use crate::observable::Observable;
use crate::space::{validate_space, Coords, DimLabel, FiniteSpace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub n_points: usize,
    pub metric: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dim_labels: Vec<DimLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Coords>,
}

impl SpaceFile {
    pub fn from_space(s: &FiniteSpace) -> Self {
        SpaceFile {
            n_points: s.n_points(),
            metric: s.metric().to_vec(),
            simplices: s.simplices().to_vec(),
            dim_labels: s.dim_labels().to_vec(),
            coords: s.coords().cloned(),
        }
    }

    /// Builds the space; `prefix` is prepended to error paths.
    pub fn build(self, prefix: &str) -> Result<FiniteSpace> {
        let at = |e: Error| match e {
            Error::InvalidInput { path, message } => Error::InvalidInput {
                path: format!("{prefix}{path}"),
                message,
            },
            other => other,
        };
        if self.metric.len() != self.n_points {
            return Err(Error::input(
                format!("{prefix}metric"),
                format!("{} rows for n_points = {}", self.metric.len(), self.n_points),
            ));
        }
        let mut s = FiniteSpace::new(self.metric).map_err(at)?;
        s = s.with_simplices(self.simplices).map_err(at)?;
        s = s.with_dim_labels(self.dim_labels).map_err(at)?;
        if let Some(c) = self.coords {
            s = s.with_coords(c).map_err(at)?;
        }
        let report = validate_space(&s);
        if let Some(v) = report.violations.first() {
            return Err(Error::input(
                format!("{prefix}metric"),
                format!("{v} ({} violations in total)", report.violations.len()),
            ));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub generators: Vec<Vec<usize>>,
    /// A complete list of group elements, repeats allowed when the abstract
    /// group acts non-faithfully.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<usize>>>,
    /// Finite set `F ⊆ G` used when `G` is too large to enumerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

fn perms(rows: Vec<Vec<usize>>, n: usize, field: &str) -> Result<Vec<Perm>> {
    rows.into_iter()
        .enumerate()
        .map(|(k, row)| {
            if row.len() != n {
                return Err(Error::input(
                    format!("{field}[{k}]"),
                    format!("{} entries for {n} points", row.len()),
                ));
            }
            Perm::new(row).map_err(|e| Error::input(format!("{field}[{k}]"), e.to_string()))
        })
        .collect()
}

/// A loaded action and its optional finite window.
pub struct LoadedAction {
    pub action: GroupAction,
    pub window: Option<Vec<Perm>>,
}

impl ActionFile {
    pub fn build(self, space: FiniteSpace, cap_override: Option<usize>) -> Result<LoadedAction> {
        let n = space.n_points();
        let generators = perms(self.generators, n, "generators")?;
        let window = self.window.map(|w| perms(w, n, "window")).transpose()?;
        let action = match self.elements {
            Some(rows) => {
                let elements = perms(rows, n, "elements")?;
                GroupAction::from_elements(space, elements)
                    .map_err(|e| Error::input("elements", e.to_string()))?
            }
            None => {
                let cap = cap_override.or(self.cap).unwrap_or(DEFAULT_GROUP_CAP);
                GroupAction::generate(space, generators, cap)?
            }
        };
        Ok(LoadedAction { action, window })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub maps: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SpaceFile>,
}

impl FamilyFile {
    pub fn build(self, source: FiniteSpace) -> Result<MapFamily> {
        let target = match self.target {
            Some(t) => t.build("target.")?,
            None => source.clone(),
        };
        let labels = self
            .labels
            .unwrap_or_else(|| (0..self.maps.len()).map(|k| format!("g{k}")).collect());
        MapFamily::new(source, target, self.maps, labels)
    }
}

/// Parses JSON text into `T`, reporting the path of the first problem.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::input(
            if path == "." { "$".to_string() } else { path },
            e.into_inner().to_string(),
        )
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(path.display().to_string(), e.to_string()))
}

pub fn load_space(path: &Path) -> Result<FiniteSpace> {
    parse::<SpaceFile>(&read(path)?)?.build("")
}

pub fn load_action(path: &Path, space: FiniteSpace, cap: Option<usize>) -> Result<LoadedAction> {
    parse::<ActionFile>(&read(path)?)?.build(space, cap)
}

pub fn load_family(path: &Path, source: FiniteSpace) -> Result<MapFamily> {
    parse::<FamilyFile>(&read(path)?)?.build(source)
}

pub fn load_observable(path: &Path) -> Result<Observable> {
    let raw: Observable = parse(&read(path)?)?;
    Observable::new(raw.r, raw.values)
}
