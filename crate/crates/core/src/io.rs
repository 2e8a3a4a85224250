//! JSON instance files.
//!
//! ```json
//! {"type":"family","n":2,"labels":["x","y"],"convex":[[0],[0,1]],"winning":[1]}
//! {"type":"points","dim":1,"points":[["-1"],["0"],["1"]],"deleted":[],"winning":[0,2]}
//! {"type":"tree","n":3,"edges":[[0,1],[1,2]]}
//! ```
//!
//! `winning` is optional (the whole ground set when absent) and names
//! elements of the game's ground set, either by index or by label. For point
//! files the ground set is the list of surviving points, reindexed in order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::builders::{deleted_affine, format_rational, parse_rational, PointConfig, TreeSpec};
use crate::builders::tree_vertex_geometry;
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::geometry::Geometry;
use crate::mask::SubsetMask;

/// An element named by index or by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceFile {
    Family {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        convex: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        winning: Option<Vec<ElementRef>>,
    },
    Points {
        dim: usize,
        points: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        deleted: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        winning: Option<Vec<ElementRef>>,
    },
    Tree {
        n: usize,
        edges: Vec<[usize; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        winning: Option<Vec<ElementRef>>,
    },
}

/// Where a geometry came from; closed forms need the tree or points.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Family,
    Tree(TreeSpec),
    Points(PointConfig),
}

/// A game plus its provenance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub spec: GameSpec,
    pub source: Source,
}

impl Instance {
    pub fn geometry(&self) -> &Geometry {
        self.spec.geometry()
    }

    pub fn with_winning(&self, winning: SubsetMask) -> Result<Instance> {
        Ok(Instance {
            id: self.id.clone(),
            spec: self.spec.with_winning(winning)?,
            source: self.source.clone(),
        })
    }

    /// File form of this instance, including its winning set.
    pub fn to_file(&self) -> InstanceFile {
        let winning = Some(
            self.spec
                .winning()
                .iter()
                .map(ElementRef::Index)
                .collect(),
        );
        let g = self.geometry();
        match &self.source {
            Source::Family => InstanceFile::Family {
                n: g.n(),
                labels: g.labels().map(<[String]>::to_vec),
                convex: g.convex_sets().iter().map(|k| k.to_vec()).collect(),
                winning,
            },
            Source::Tree(t) => InstanceFile::Tree {
                n: t.n,
                edges: t.edges.iter().map(|&(a, b)| [a, b]).collect(),
                labels: t.labels.clone(),
                winning,
            },
            Source::Points(c) => InstanceFile::Points {
                dim: c.dim,
                points: c
                    .points
                    .iter()
                    .map(|p| p.iter().map(format_rational).collect())
                    .collect(),
                deleted: c.deleted.to_vec(),
                labels: c.labels.clone(),
                winning,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }
}

fn resolve(g: &Geometry, refs: &[ElementRef]) -> Result<SubsetMask> {
    let mut set = SubsetMask::EMPTY;
    for r in refs {
        let i = match r {
            ElementRef::Index(i) if *i < g.n() => *i,
            ElementRef::Index(i) => {
                return Err(Error::ElementOutOfRange {
                    element: *i,
                    n: g.n(),
                })
            }
            ElementRef::Label(l) => g.resolve_element(l)?,
        };
        set = set.with(i);
    }
    Ok(set)
}

impl InstanceFile {
    /// Geometry and provenance, without a winning set.
    pub fn geometry(&self) -> Result<(Geometry, Source)> {
        match self {
            InstanceFile::Family {
                n, labels, convex, ..
            } => {
                let mut family = Vec::with_capacity(convex.len());
                for set in convex {
                    let mut k = SubsetMask::EMPTY;
                    for &i in set {
                        if i >= *n || i >= crate::mask::MAX_ELEMENTS {
                            return Err(Error::ElementOutOfRange { element: i, n: *n });
                        }
                        k = k.with(i);
                    }
                    family.push(k);
                }
                Ok((Geometry::new(*n, family, labels.clone())?, Source::Family))
            }
            InstanceFile::Points {
                dim,
                points,
                deleted,
                labels,
                ..
            } => {
                let coords = points
                    .iter()
                    .map(|p| p.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if let Some(p) = coords.iter().find(|p| p.len() != *dim) {
                    return Err(Error::Dimension {
                        expected: *dim,
                        found: p.len(),
                    });
                }
                let mut cfg = PointConfig::new(coords)?;
                if let Some(l) = labels {
                    cfg = cfg.with_labels(l.clone())?;
                }
                for &d in deleted {
                    if d >= cfg.points.len() {
                        return Err(Error::ElementOutOfRange {
                            element: d,
                            n: cfg.points.len(),
                        });
                    }
                }
                cfg = cfg.with_deleted(deleted.iter().copied().collect())?;
                let g = deleted_affine(&cfg)?;
                Ok((g, Source::Points(cfg)))
            }
            InstanceFile::Tree {
                n, edges, labels, ..
            } => {
                let mut t = TreeSpec::new(*n, edges.iter().map(|e| (e[0], e[1])).collect())?;
                t.labels = labels.clone();
                if let Some(l) = labels {
                    if l.len() != *n {
                        return Err(Error::Input(format!(
                            "expected {n} labels, found {}",
                            l.len()
                        )));
                    }
                }
                let g = tree_vertex_geometry(&t)?;
                Ok((g, Source::Tree(t)))
            }
        }
    }

    pub fn winning_refs(&self) -> Option<&[ElementRef]> {
        match self {
            InstanceFile::Family { winning, .. }
            | InstanceFile::Points { winning, .. }
            | InstanceFile::Tree { winning, .. } => winning.as_deref(),
        }
    }

    /// Builds the instance. `winning_override` (comma-separated labels or
    /// indices) replaces the file's winning set.
    pub fn instance(&self, id: &str, winning_override: Option<&str>) -> Result<Instance> {
        let (g, source) = self.geometry()?;
        let winning = match (winning_override, self.winning_refs()) {
            (Some(list), _) => g.parse_set(list)?,
            (None, Some(refs)) => resolve(&g, refs)?,
            (None, None) => g.ground(),
        };
        Ok(Instance {
            id: id.to_string(),
            spec: GameSpec::new(g, winning)?,
            source,
        })
    }
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    Ok(serde_json::from_str(text)?)
}

/// Reads an instance; its id is the file stem.
pub fn load_instance(path: &Path, winning_override: Option<&str>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_instance_file(&text)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    file.instance(&id, winning_override)
}
