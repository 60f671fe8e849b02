//! Facet and ray lists as JSON documents, with an on-disk cache keyed by a content hash.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qcone::eigencone::{self, RationalCone};
use qcone::linalg::{self, Q};
use qcone::rootsys::RootSystem;

use crate::invalid;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeDoc {
    pub schema: u32,
    pub group: String,
    pub s: usize,
    pub facets: Vec<FacetRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FacetRecord {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<Vec<i64>>,
    pub functional: Vec<i64>,
}

impl FacetRecord {
    pub fn describe(&self) -> String {
        let mut out = match self.kind.as_str() {
            "dominance" => format!(
                "dominance  λ{}(α{}∨) >= 0",
                self.slot.unwrap_or(0),
                self.root.unwrap_or(0)
            ),
            "alcove" => format!("alcove     λ{}(θ∨) <= l", self.slot.unwrap_or(0)),
            _ => {
                let d: Vec<String> = self
                    .degree
                    .iter()
                    .flatten()
                    .map(|x| x.to_string())
                    .collect();
                format!(
                    "regular    P{}  {}  d=({})",
                    self.parabolic.as_deref().unwrap_or("?"),
                    self.classes.as_deref().unwrap_or(&[]).join(" | "),
                    d.join(",")
                )
            }
        };
        let _ = write!(out, "  {:?}", self.functional);
        out
    }
}

pub fn primitive_row(f: &[Q]) -> Vec<i64> {
    linalg::primitive_i64(f).expect("facet coefficients fit in i64")
}

impl ConeDoc {
    pub fn build(rs: &Arc<RootSystem>, s: usize, with_rays: bool) -> Result<Self> {
        let cone = eigencone::eigen_cone(rs, s)?;
        let rows = cone.cone.integer_rows();
        let mut facets = Vec::with_capacity(rows.len());
        for (k, row) in rows.into_iter().enumerate() {
            let rec = if k < cone.n_dominance {
                FacetRecord {
                    kind: "dominance".into(),
                    slot: Some(k / rs.rank + 1),
                    root: Some(k % rs.rank + 1),
                    parabolic: None,
                    classes: None,
                    degree: None,
                    functional: row,
                }
            } else if k < cone.n_dominance + cone.n_alcove {
                FacetRecord {
                    kind: "alcove".into(),
                    slot: Some(k - cone.n_dominance + 1),
                    root: None,
                    parabolic: None,
                    classes: None,
                    degree: None,
                    functional: row,
                }
            } else {
                let f = &cone.facets[k - cone.n_dominance - cone.n_alcove];
                FacetRecord {
                    kind: "regular".into(),
                    slot: None,
                    root: None,
                    parabolic: Some(f.par.label()),
                    classes: Some(f.classes.iter().map(|&w| f.par.format(w)).collect()),
                    degree: Some(f.degree.clone()),
                    functional: row,
                }
            };
            facets.push(rec);
        }
        let rays = if with_rays {
            Some(cone.cone.compute_rays()?.to_vec())
        } else {
            None
        };
        Ok(ConeDoc {
            schema: 1,
            group: rs.label(),
            s,
            facets,
            rays,
        })
    }

    pub fn check(&self, rs: &RootSystem) -> Result<()> {
        if self.schema != 1 {
            return Err(invalid(format!("unsupported schema {}", self.schema)));
        }
        if self.s < 3 {
            return Err(invalid("at least three points are needed"));
        }
        let dim = self.s * rs.rank + 1;
        if self.facets.iter().any(|f| f.functional.len() != dim) {
            return Err(invalid(format!("facet rows must have {dim} entries")));
        }
        Ok(())
    }

    pub fn cone(&self, rs: &RootSystem) -> RationalCone {
        let rows = self.facets.iter().map(|f| linalg::qvec(&f.functional)).collect();
        RationalCone::new(self.s * rs.rank + 1, rows)
    }

    pub fn regular_rows(&self) -> Vec<Vec<Q>> {
        self.facets
            .iter()
            .filter(|f| f.kind == "regular")
            .map(|f| linalg::qvec(&f.functional))
            .collect()
    }
}

fn cache_path(dir: &Path, rs: &RootSystem, s: usize) -> PathBuf {
    let mut h = Sha256::new();
    h.update(format!("qcone-cone-v1\n{}\n{s}\n", rs.label()));
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{hex}.json"))
}

fn store(path: &Path, doc: &ConeDoc) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(doc)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))
}

/// The cone document, from the cache when possible.
pub fn load_or_build(rs: &Arc<RootSystem>, s: usize, cache: Option<&Path>, with_rays: bool) -> Result<ConeDoc> {
    let Some(dir) = cache else {
        return ConeDoc::build(rs, s, with_rays);
    };
    let path = cache_path(dir, rs, s);
    let cached = std::fs::read_to_string(&path)
        .ok()
        .and_then(|t| serde_json::from_str::<ConeDoc>(&t).ok())
        .filter(|d| d.group == rs.label() && d.s == s && d.check(rs).is_ok());
    match cached {
        Some(mut doc) => {
            if with_rays && doc.rays.is_none() {
                doc.rays = Some(doc.cone(rs).compute_rays()?.to_vec());
                store(&path, &doc)?;
            }
            Ok(doc)
        }
        None => {
            let doc = ConeDoc::build(rs, s, with_rays)?;
            store(&path, &doc)?;
            Ok(doc)
        }
    }
}
