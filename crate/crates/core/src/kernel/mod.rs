//! Facet-list simplicial complexes.
//!
//! A [`Complex`] stores its maximal faces as strictly increasing vertex lists
//! over the contiguous index range `1..=n`, sorted lexicographically. Original
//! vertex names survive as [`Label`]s, so compaction never loses track of
//! which vertex is which.

mod cache;
mod construct;
mod face;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cache::PropertyCache;
pub use construct::{
    cartesian_product, cone, connected_sum, from_generators, handle_addition, join, suspension,
    Permutation,
};
pub use face::{Face, Vertex};
pub(crate) use construct::lattice_paths;

/// Display name of a vertex. Integer labels come from raw facet lists,
/// text labels from derived constructions such as products and slicings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(v: i64) -> Self {
        Label::Int(v)
    }
}

impl From<&str> for Label {
    fn from(v: &str) -> Self {
        Label::Text(v.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralFlags {
    pub is_pure: bool,
    pub is_connected: bool,
    pub is_strongly_connected: bool,
    pub is_pseudomanifold: bool,
    pub has_boundary: bool,
}

impl StructuralFlags {
    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.is_pseudomanifold && !self.has_boundary
    }
}

/// A finite abstract simplicial complex given by its facets.
pub struct Complex {
    facets: Vec<Face>,
    labels: Vec<Label>,
    name: Option<String>,
    cache: PropertyCache,
    ridges: OnceLock<HashMap<Face, Vec<usize>>>,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        Complex {
            facets: self.facets.clone(),
            labels: self.labels.clone(),
            name: self.name.clone(),
            cache: self.cache.clone(),
            ridges: OnceLock::new(),
        }
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets && self.labels == other.labels
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("name", &self.name)
            .field("n", &self.labels.len())
            .field("facets", &self.facets)
            .finish()
    }
}

impl Complex {
    /// The void complex: no vertices, no facets.
    pub fn empty() -> Complex {
        Complex {
            facets: Vec::new(),
            labels: Vec::new(),
            name: None,
            cache: PropertyCache::default(),
            ridges: OnceLock::new(),
        }
    }

    /// Builds a complex from raw vertex lists.
    ///
    /// Duplicates and non-maximal entries are dropped and the vertices are
    /// compacted to `1..=n` in increasing order. Without explicit labels the
    /// raw values become the labels; with labels, `labels[v - 1]` names raw
    /// vertex `v`.
    pub fn from_facets(raw: &[Vec<i64>], labels: Option<Vec<Label>>) -> Result<Complex> {
        if raw.is_empty() || raw.iter().all(|f| f.is_empty()) {
            return Err(Error::NoFacets);
        }
        let mut sets = Vec::with_capacity(raw.len());
        let mut max = 0i64;
        for f in raw {
            let mut s = Vec::with_capacity(f.len());
            for &v in f {
                if v <= 0 || v > u32::MAX as i64 {
                    return Err(Error::BadVertex(v));
                }
                max = max.max(v);
                s.push(v as u32);
            }
            sets.push(s);
        }
        match labels {
            None => Ok(Complex::build(sets, |v| Label::Int(v as i64))),
            Some(labels) => {
                if labels.len() < max as usize {
                    return Err(Error::MissingLabel {
                        needed: max as usize,
                        got: labels.len(),
                    });
                }
                Ok(Complex::build(sets, |v| labels[v as usize - 1].clone()))
            }
        }
    }

    /// Normalizing constructor used throughout the crate. `label_of` is
    /// queried with the pre-compaction vertex ids.
    pub(crate) fn build(sets: Vec<Vec<Vertex>>, label_of: impl Fn(Vertex) -> Label) -> Complex {
        let mut faces: Vec<Vec<Vertex>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .filter(|s| !s.is_empty())
            .collect();
        faces.sort_unstable();
        faces.dedup();

        let pure = faces.windows(2).all(|w| w[0].len() == w[1].len());
        let faces = if pure { faces } else { maximal_only(faces) };

        let verts: BTreeSet<Vertex> = faces.iter().flatten().copied().collect();
        let mut index = HashMap::with_capacity(verts.len());
        let mut labels = Vec::with_capacity(verts.len());
        let mut identity = true;
        for (i, &v) in verts.iter().enumerate() {
            let new = i as Vertex + 1;
            identity &= new == v;
            index.insert(v, new);
            labels.push(label_of(v));
        }
        let mut facets: Vec<Face> = if identity {
            faces.into_iter().map(Face::from_sorted).collect()
        } else {
            faces
                .into_iter()
                .map(|f| Face::from_sorted(f.iter().map(|v| index[v]).collect()))
                .collect()
        };
        facets.sort_unstable();
        Complex {
            facets,
            labels,
            name: None,
            cache: PropertyCache::default(),
            ridges: OnceLock::new(),
        }
    }

    /// Builds from sets whose vertices already live in `1..=n` of `self`,
    /// inheriting this complex's labels.
    pub(crate) fn sub_build(&self, sets: Vec<Vec<Vertex>>) -> Complex {
        Complex::build(sets, |v| self.labels[v as usize - 1].clone())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Complex {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &Label {
        &self.labels[v as usize - 1]
    }

    /// Replaces the labels; the list must have one entry per vertex.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Complex> {
        if labels.len() != self.labels.len() {
            return Err(Error::MissingLabel {
                needed: self.labels.len(),
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn cache(&self) -> &PropertyCache {
        &self.cache
    }

    /// Replaces the property cache wholesale, e.g. with values read from disk.
    pub fn with_cache(mut self, cache: PropertyCache) -> Complex {
        self.cache = cache;
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Size of the largest facet minus one; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize).max().unwrap_or(0) - 1
    }

    /// First vertex carrying `label`.
    pub fn vertex_by_label(&self, label: &Label) -> Option<Vertex> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as Vertex + 1)
    }

    /// Integer labels plus one, or `n + 1` when no integer labels exist.
    pub(crate) fn next_int_label(&self) -> i64 {
        self.labels
            .iter()
            .filter_map(|l| match l {
                Label::Int(i) => Some(*i),
                Label::Text(_) => None,
            })
            .max()
            .unwrap_or(self.labels.len() as i64)
            .max(self.labels.len() as i64)
            + 1
    }

    /// Raw facet lists, 1-based.
    pub fn facet_lists(&self) -> Vec<Vec<i64>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&v| v as i64).collect())
            .collect()
    }

    /// Whether `face` is contained in some facet. The empty face is a face
    /// of every nonempty complex.
    pub fn contains_face(&self, face: &[Vertex]) -> bool {
        if face.is_empty() {
            return !self.facets.is_empty();
        }
        self.facets.iter().any(|f| f.contains_all(face))
    }

    /// All faces of dimension `k`, sorted. Out-of-range `k` gives an empty list.
    pub fn faces(&self, k: usize) -> Vec<Face> {
        let size = k + 1;
        let mut set = BTreeSet::new();
        for f in &self.facets {
            if f.len() >= size {
                for sub in f.subsets_of_size(size) {
                    set.insert(sub);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Faces grouped by dimension `0..=dim`, each group sorted.
    pub fn all_faces(&self) -> Vec<Vec<Face>> {
        let d = self.dim();
        if d < 0 {
            return Vec::new();
        }
        let mut sets: Vec<HashSet<Face>> = vec![HashSet::new(); d as usize + 1];
        for f in &self.facets {
            for sub in f.nonempty_subsets() {
                sets[sub.len() - 1].insert(sub);
            }
        }
        sets.into_iter()
            .map(|s| {
                let mut v: Vec<Face> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    pub fn f_vector(&self) -> Vec<u64> {
        self.cache.get_or_compute("f_vector", || {
            self.all_faces().iter().map(|g| g.len() as u64).collect()
        })
    }

    /// Facet indices grouped by ridge (codimension-one subsets of each facet).
    pub fn ridge_index(&self) -> &HashMap<Face, Vec<usize>> {
        self.ridges.get_or_init(|| {
            let mut map: HashMap<Face, Vec<usize>> = HashMap::new();
            for (i, f) in self.facets.iter().enumerate() {
                if f.len() < 2 {
                    continue;
                }
                for r in f.subsets_of_size(f.len() - 1) {
                    map.entry(r).or_default().push(i);
                }
            }
            map
        })
    }

    /// All facets containing `face`, as a complex.
    pub fn star(&self, face: &[Vertex]) -> Result<Complex> {
        let sets: Vec<Vec<Vertex>> = self
            .facets
            .iter()
            .filter(|f| f.contains_all(face))
            .map(|f| f.to_vec())
            .collect();
        if sets.is_empty() {
            return Err(Error::NotAFace(face.to_vec()));
        }
        Ok(self.sub_build(sets))
    }

    /// Faces disjoint from `face` whose union with it is a face.
    pub fn link(&self, face: &[Vertex]) -> Result<Complex> {
        let mut found = false;
        let mut sets = Vec::new();
        for f in &self.facets {
            if f.contains_all(face) {
                found = true;
                let rest: Vec<Vertex> = f.iter().copied().filter(|v| !face.contains(v)).collect();
                if !rest.is_empty() {
                    sets.push(rest);
                }
            }
        }
        if !found {
            return Err(Error::NotAFace(face.to_vec()));
        }
        Ok(self.sub_build(sets))
    }

    /// Same as [`Complex::link`] but keeps the ambient vertex ids as
    /// integer labels, which is what gluing code needs.
    pub fn link_with_ids(&self, face: &[Vertex]) -> Result<Complex> {
        let sets: Vec<Vec<Vertex>> = self
            .facets
            .iter()
            .filter(|f| f.contains_all(face))
            .map(|f| f.difference(face).into_vec())
            .collect();
        if sets.is_empty() {
            return Err(Error::NotAFace(face.to_vec()));
        }
        Ok(Complex::build(sets, |v| Label::Int(v as i64)))
    }

    /// Complex generated by the ridges lying in exactly one facet.
    pub fn boundary(&self) -> Result<Complex> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        let sets: Vec<Vec<Vertex>> = self
            .ridge_index()
            .iter()
            .filter(|(_, fs)| fs.len() == 1)
            .map(|(r, _)| r.to_vec())
            .collect();
        if sets.is_empty() {
            return Ok(Complex::empty());
        }
        Ok(self.sub_build(sets))
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn structural_flags(&self) -> StructuralFlags {
        self.cache.get_or_compute("flags", || self.compute_flags())
    }

    fn compute_flags(&self) -> StructuralFlags {
        let is_pure = self.is_pure();
        let is_connected = !self.facets.is_empty() && self.vertex_components() == 1;
        if !is_pure || self.facets.is_empty() {
            return StructuralFlags {
                is_pure,
                is_connected,
                is_strongly_connected: false,
                is_pseudomanifold: false,
                has_boundary: false,
            };
        }
        let ridges = self.ridge_index();
        let is_pseudomanifold = self.facets[0].len() >= 2 && ridges.values().all(|fs| fs.len() <= 2);
        let has_boundary = ridges.values().any(|fs| fs.len() == 1);

        let mut uf = UnionFind::new(self.facets.len());
        for fs in ridges.values() {
            for w in fs.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let is_strongly_connected = uf.count() == 1;
        StructuralFlags {
            is_pure,
            is_connected,
            is_strongly_connected,
            is_pseudomanifold,
            has_boundary,
        }
    }

    /// Number of connected components of the 1-skeleton.
    pub fn vertex_components(&self) -> usize {
        let mut uf = UnionFind::new(self.n_vertices());
        for f in &self.facets {
            for w in f.windows(2) {
                uf.union(w[0] as usize - 1, w[1] as usize - 1);
            }
        }
        uf.count()
    }

    /// Vertex ids adjacent to `v` in the 1-skeleton.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for f in self.facets.iter().filter(|f| f.contains(&v)) {
            out.extend(f.iter().copied().filter(|&w| w != v));
        }
        out
    }

    /// Renames vertex `v` to `image[v - 1]`; labels travel with their vertex.
    pub fn permute_vertices(&self, image: &[Vertex]) -> Result<Complex> {
        let perm = Permutation::new(image.to_vec())?;
        if perm.len() != self.n_vertices() {
            return Err(Error::InvalidPermutation(format!(
                "length {} for {} vertices",
                perm.len(),
                self.n_vertices()
            )));
        }
        let mut labels = vec![Label::Int(0); self.n_vertices()];
        for (i, l) in self.labels.iter().enumerate() {
            labels[image[i] as usize - 1] = l.clone();
        }
        let sets = self
            .facets
            .iter()
            .map(|f| f.iter().map(|&v| image[v as usize - 1]).collect())
            .collect();
        Ok(Complex::build(sets, |v| labels[v as usize - 1].clone()))
    }
}

fn maximal_only(mut faces: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<Vec<Vertex>> = Vec::new();
    let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for f in faces {
        let dominated = by_vertex
            .get(&f[0])
            .map(|ids| {
                ids.iter()
                    .any(|&i| kept[i].len() > f.len() && f.iter().all(|v| kept[i].binary_search(v).is_ok()))
            })
            .unwrap_or(false);
        if !dominated {
            for &v in &f {
                by_vertex.entry(v).or_default().push(kept.len());
            }
            kept.push(f);
        }
    }
    kept
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.components -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(raw: &[&[i64]]) -> Complex {
        Complex::from_facets(&raw.iter().map(|f| f.to_vec()).collect::<Vec<_>>(), None).unwrap()
    }

    #[test]
    fn triangle_circle() {
        let k = c(&[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.f_vector(), vec![3, 3]);
    }

    #[test]
    fn drops_non_maximal() {
        let k = c(&[&[1, 2, 3], &[1, 2]]);
        assert_eq!(k.facets().len(), 1);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn compacts_and_keeps_labels() {
        let k = c(&[&[2, 5], &[5, 9]]);
        assert_eq!(k.facet_lists(), vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(k.labels(), &[Label::Int(2), Label::Int(5), Label::Int(9)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Complex::from_facets(&[], None), Err(Error::NoFacets)));
        assert!(matches!(
            Complex::from_facets(&[vec![1, 0]], None),
            Err(Error::BadVertex(0))
        ));
        assert!(matches!(
            Complex::from_facets(&[vec![1, -3]], None),
            Err(Error::BadVertex(-3))
        ));
    }

    #[test]
    fn explicit_labels_follow_raw_vertices() {
        let k = Complex::from_facets(
            &[vec![2, 4]],
            Some(vec!["a".into(), "b".into(), "c".into(), "d".into()]),
        )
        .unwrap();
        assert_eq!(k.labels(), &[Label::from("b"), Label::from("d")]);
        assert!(Complex::from_facets(&[vec![2, 4]], Some(vec!["a".into()])).is_err());
    }

    #[test]
    fn from_facets_idempotent() {
        let k = c(&[&[3, 1, 2], &[2, 3, 4], &[1, 4], &[4, 2]]);
        let again = Complex::from_facets(&k.facet_lists(), None).unwrap();
        assert_eq!(k.facets(), again.facets());
    }

    #[test]
    fn faces_out_of_range_is_empty() {
        let k = c(&[&[1, 2, 3]]);
        assert!(k.faces(5).is_empty());
        assert_eq!(k.faces(1).len(), 3);
    }

    #[test]
    fn link_and_star_in_boundary_of_4_simplex() {
        let raw: Vec<Vec<i64>> = (1..=5)
            .map(|skip| (1..=5).filter(|&v| v != skip).collect())
            .collect();
        let k = Complex::from_facets(&raw, None).unwrap();
        let lk = k.link(&[1]).unwrap();
        assert_eq!(lk.f_vector(), vec![4, 6, 4]);
        assert_eq!(lk.labels(), &[Label::Int(2), Label::Int(3), Label::Int(4), Label::Int(5)]);
        let st = k.star(&[1]).unwrap();
        assert_eq!(st.facets().len(), 4);
        assert!(matches!(k.link(&[1, 2, 3, 4, 5]), Err(Error::NotAFace(_))));
    }

    #[test]
    fn link_of_facet_is_empty() {
        let k = c(&[&[1, 2, 3]]);
        assert!(k.link(&[1, 2, 3]).unwrap().is_empty());
    }

    #[test]
    fn boundary_cases() {
        let tet = c(&[&[1, 2, 3, 4]]);
        assert_eq!(tet.boundary().unwrap().f_vector(), vec![4, 6, 4]);
        let two = c(&[&[1, 2, 3, 4], &[1, 2, 3, 5]]);
        let b = two.boundary().unwrap();
        assert_eq!(b.facets().len(), 6);
        assert_eq!(b.f_vector(), vec![5, 9, 6]);
        let closed = tet.boundary().unwrap();
        assert!(closed.boundary().unwrap().is_empty());
        assert!(matches!(c(&[&[1, 2, 3], &[3, 4]]).boundary(), Err(Error::NotPure)));
    }

    #[test]
    fn flags() {
        let bowtie = c(&[&[1, 2, 3], &[3, 4, 5]]);
        let fl = bowtie.structural_flags();
        assert!(fl.is_connected && !fl.is_strongly_connected && fl.is_pure);
        let edges = c(&[&[1, 2], &[3, 4]]);
        assert!(!edges.structural_flags().is_connected);
        let sphere = c(&[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        let fl = sphere.structural_flags();
        assert!(fl.is_pseudomanifold && !fl.has_boundary && fl.is_strongly_connected);
    }

    #[test]
    fn permute_vertices_moves_labels() {
        let k = c(&[&[1, 2], &[2, 3]]);
        let p = k.permute_vertices(&[3, 1, 2]).unwrap();
        assert_eq!(p.facet_lists(), vec![vec![1, 2], vec![1, 3]]);
        assert_eq!(p.label(3), &Label::Int(1));
    }
}
