//! Persistence, the fixture library and text export.
//!
//! Complexes are stored as versioned JSON documents:
//!
//! ```json
//! { "schema_version": 1, "name": "...", "labels": [1, 2, "a"],
//!   "facets": [[1, 2, 3], ...], "cached_properties": { ... },
//!   "move_log": [...], "provenance": "..." }
//! ```
//!
//! `move_log` and `provenance` are optional.

mod export;
mod library;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bistellar::Move;
use crate::error::{Error, Result};
use crate::invariants::{euler_characteristic, homology, is_orientable};
use crate::kernel::{Complex, Label, PropertyCache, Vertex};
use crate::slicing::NormalSurface;

pub use export::{export, import_topaz, ExportFormat};
pub use library::{library_dir, Library, LibraryEntry, Predicate, Query};

pub const SCHEMA_VERSION: u32 = 1;

/// Cache keys that strict loading recomputes.
pub const VERIFIED_KEYS: [&str; 5] = ["f_vector", "flags", "euler_characteristic", "homology", "orientable"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub schema_version: u32,
    pub name: Option<String>,
    pub labels: Vec<Label>,
    pub facets: Vec<Vec<Vertex>>,
    #[serde(default)]
    pub cached_properties: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_log: Option<Vec<Move>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl ComplexDocument {
    pub fn from_complex(c: &Complex) -> ComplexDocument {
        ComplexDocument {
            schema_version: SCHEMA_VERSION,
            name: c.name().map(str::to_string),
            labels: c.labels().to_vec(),
            facets: c.facets().iter().map(|f| f.to_vec()).collect(),
            cached_properties: c.cache().snapshot(),
            move_log: None,
            provenance: None,
        }
    }

    pub fn with_move_log(mut self, moves: Vec<Move>) -> Self {
        self.move_log = Some(moves);
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    /// Rebuilds the complex. Facets must already be in canonical form
    /// (sorted, 1-based, contiguous), otherwise the document is malformed.
    pub fn to_complex(&self) -> Result<Complex> {
        let raw: Vec<Vec<i64>> = self
            .facets
            .iter()
            .map(|f| f.iter().map(|&v| v as i64).collect())
            .collect();
        let c = Complex::from_facets(&raw, Some(self.labels.clone()))?;
        if c.n_vertices() != self.labels.len() {
            return Err(Error::Malformed(format!(
                "{} labels for {} vertices",
                self.labels.len(),
                c.n_vertices()
            )));
        }
        let canonical = c.facets().len() == self.facets.len()
            && c.facets().iter().zip(&self.facets).all(|(a, b)| a.vertices() == b.as_slice());
        if !canonical {
            return Err(Error::Malformed("facets are not sorted, maximal and contiguous".into()));
        }
        let c = c.with_cache(PropertyCache::from_map(self.cached_properties.clone()));
        Ok(match &self.name {
            Some(n) => c.with_name(n.clone()),
            None => c,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<ComplexDocument> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let found = value
            .get("schema_version")
            .ok_or_else(|| Error::Malformed("missing field `schema_version`".into()))?
            .as_u64()
            .ok_or_else(|| Error::Malformed("field `schema_version` must be an integer".into()))?;
        if found != SCHEMA_VERSION as u64 {
            return Err(Error::SchemaVersion {
                expected: SCHEMA_VERSION,
                found: found as u32,
            });
        }
        serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Computes and caches the properties listed in [`VERIFIED_KEYS`].
/// Orientability is skipped for complexes that are not pseudomanifolds.
pub fn fill_cache(c: &Complex) {
    c.f_vector();
    c.structural_flags();
    euler_characteristic(c);
    homology(c);
    let _ = is_orientable(c);
}

pub fn save(c: &Complex, path: impl AsRef<Path>) -> Result<()> {
    save_document(&ComplexDocument::from_complex(c), path)
}

pub fn save_document(doc: &ComplexDocument, path: impl AsRef<Path>) -> Result<()> {
    let mut text = doc.to_json();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_document(path: impl AsRef<Path>) -> Result<ComplexDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    ComplexDocument::from_json(&text).map_err(|e| match e {
        Error::Malformed(m) => Error::Malformed(format!("{}: {m}", path.display())),
        e => e,
    })
}

pub fn load(path: impl AsRef<Path>) -> Result<Complex> {
    load_document(path)?.to_complex()
}

/// Loads and recomputes every verified cached property, failing on the
/// first disagreement.
pub fn load_strict(path: impl AsRef<Path>) -> Result<Complex> {
    let c = load(path)?;
    verify_cache(&c)?;
    Ok(c)
}

/// Keys whose cached value differs from a fresh computation.
pub fn cache_mismatches(c: &Complex) -> Vec<String> {
    let fresh = Complex::from_facets(&c.facet_lists(), Some(c.labels().to_vec())).expect("valid complex rebuilds");
    let cached = c.cache().snapshot();
    let mut bad = Vec::new();
    for key in VERIFIED_KEYS {
        let Some(stored) = cached.get(key) else { continue };
        let recomputed = match key {
            "f_vector" => serde_json::to_value(fresh.f_vector()),
            "flags" => serde_json::to_value(fresh.structural_flags()),
            "euler_characteristic" => serde_json::to_value(euler_characteristic(&fresh)),
            "homology" => serde_json::to_value(homology(&fresh)),
            "orientable" => match is_orientable(&fresh) {
                Ok(o) => serde_json::to_value(o),
                Err(_) => Ok(Value::Null),
            },
            _ => unreachable!(),
        }
        .expect("properties serialize");
        if &recomputed != stored {
            bad.push(key.to_string());
        }
    }
    bad
}

pub fn verify_cache(c: &Complex) -> Result<()> {
    match cache_mismatches(c).into_iter().next() {
        Some(key) => Err(Error::CacheMismatch { key }),
        None => Ok(()),
    }
}

/// On-disk form of a [`NormalSurface`]: the schema version next to the
/// surface fields, with triangles and quads kept as separate lists.
#[derive(Serialize, Deserialize)]
struct NormalSurfaceDocument {
    schema_version: u32,
    kind: String,
    #[serde(flatten)]
    surface: NormalSurface,
}

const NORMAL_SURFACE_KIND: &str = "normal_surface";

pub fn normal_surface_to_json(ns: &NormalSurface) -> String {
    serde_json::to_string_pretty(&NormalSurfaceDocument {
        schema_version: SCHEMA_VERSION,
        kind: NORMAL_SURFACE_KIND.into(),
        surface: ns.clone(),
    })
    .expect("normal surfaces serialize")
}

pub fn normal_surface_from_json(text: &str) -> Result<NormalSurface> {
    let doc: NormalSurfaceDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION,
            found: doc.schema_version,
        });
    }
    if doc.kind != NORMAL_SURFACE_KIND {
        return Err(Error::Malformed(format!("expected kind `{NORMAL_SURFACE_KIND}`, found `{}`", doc.kind)));
    }
    Ok(doc.surface)
}

pub fn save_normal_surface(ns: &NormalSurface, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, normal_surface_to_json(ns) + "\n")?;
    Ok(())
}

pub fn load_normal_surface(path: impl AsRef<Path>) -> Result<NormalSurface> {
    normal_surface_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cyclic_polytope_boundary;

    #[test]
    fn round_trip_keeps_cache() {
        let c = cyclic_polytope_boundary(4, 10).unwrap();
        fill_cache(&c);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        save(&c, &path).unwrap();
        let back = load_strict(&path).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.name(), c.name());
        assert_eq!(back.cache().snapshot(), c.cache().snapshot());
    }

    #[test]
    fn rejects_bad_documents() {
        let c = cyclic_polytope_boundary(4, 6).unwrap();
        let text = ComplexDocument::from_complex(&c).to_json();
        assert!(matches!(
            ComplexDocument::from_json(&text[..text.len() / 2]),
            Err(Error::Malformed(_))
        ));
        let v2 = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(
            ComplexDocument::from_json(&v2),
            Err(Error::SchemaVersion { expected: 1, found: 2 })
        ));
        assert!(ComplexDocument::from_json(&format!("{text} {{}}")).is_err());
    }

    #[test]
    fn normal_surface_round_trip() {
        use crate::slicing::{slicing, VertexPartition};
        let c = cyclic_polytope_boundary(4, 10).unwrap();
        let ns = slicing(&c, &VertexPartition::new([1, 3, 5, 7, 9], [2, 4, 6, 8, 10]).unwrap()).unwrap();
        let text = normal_surface_to_json(&ns);
        assert!(text.contains("\"quads\""));
        assert_eq!(normal_surface_from_json(&text).unwrap(), ns);
        assert!(normal_surface_from_json(&ComplexDocument::from_complex(&c).to_json()).is_err());
    }

    #[test]
    fn strict_load_catches_tampering() {
        let c = cyclic_polytope_boundary(4, 7).unwrap();
        fill_cache(&c);
        let mut doc = ComplexDocument::from_complex(&c);
        doc.cached_properties
            .insert("euler_characteristic".into(), Value::from(3));
        let back = doc.to_complex().unwrap();
        assert_eq!(cache_mismatches(&back), vec!["euler_characteristic".to_string()]);
        assert!(matches!(verify_cache(&back), Err(Error::CacheMismatch { .. })));
    }
}
