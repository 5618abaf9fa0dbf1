//! Resolution of ordinary double points in combinatorial 4-pseudomanifolds.
//!
//! The star of the singular vertex is cut out and replaced by a resolution
//! block, a 4-manifold whose boundary is a real projective 3-space. Before
//! gluing, the block boundary is transformed into a copy of the vertex link
//! by bistellar moves realized on the block itself: a boundary move
//! `a * ∂b -> ∂a * b` is performed by attaching the 4-simplex `a ∪ b` to the
//! block along `a * ∂b`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bistellar::{equivalent_workspaces, is_sphere, Move, ReductionOptions, Workspace};
use crate::error::{Error, Result};
use crate::generators::boundary_simplex;
use crate::invariants::{homology, HomologyProfile};
use crate::kernel::{cartesian_product, lattice_paths, Complex, Face, Label, Vertex};

/// Compact 4-manifold with boundary used to replace a singular vertex star.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionBlock {
    pub block: Complex,
    pub boundary_type: String,
    pub provenance: String,
}

impl ResolutionBlock {
    /// Checks the structural requirements on `block`.
    pub fn new(block: Complex, boundary_type: impl Into<String>, provenance: impl Into<String>) -> Result<Self> {
        let flags = block.structural_flags();
        if !flags.is_pure || block.dim() != 4 {
            return Err(Error::InvalidBlock("block must be pure of dimension 4".into()));
        }
        if !flags.is_strongly_connected || !flags.is_pseudomanifold || !flags.has_boundary {
            return Err(Error::InvalidBlock(
                "block must be a strongly connected pseudomanifold with boundary".into(),
            ));
        }
        let boundary = block.boundary()?;
        if !boundary.structural_flags().is_closed_pseudomanifold() {
            return Err(Error::InvalidBlock("boundary is not a closed 3-pseudomanifold".into()));
        }
        if homology(&block).get(2).map(|e| e.betti) != Some(1) {
            return Err(Error::InvalidBlock("second Betti number must be 1".into()));
        }
        Ok(ResolutionBlock {
            block,
            boundary_type: boundary_type.into(),
            provenance: provenance.into(),
        })
    }

    /// Complement of an open regular neighbourhood of the diagonal in the
    /// staircase triangulation of `S^2 x S^2` (each factor the boundary of
    /// a tetrahedron).
    ///
    /// Cutting every 4-simplex `σ` halfway along its edges between diagonal
    /// (`A`) and off-diagonal (`B`) vertices leaves the prism
    /// `cone(σ_A) x σ_B` on the off-diagonal side. Each prism is triangulated
    /// by the staircase rule under one global vertex order, so neighbouring
    /// prisms agree on shared faces. Vertex `(apex, b)` is `b` itself and
    /// `(a, b)` is the midpoint of the edge `ab`. The result is the disk
    /// bundle of Euler number `-2` over the anti-diagonal sphere; its
    /// boundary, the unit tangent bundle of `S^2`, is `RP^3`.
    pub fn diagonal_complement() -> ResolutionBlock {
        let k = boundary_simplex(3).expect("d = 3 is valid");
        let product = cartesian_product(&k, &k).expect("factors are pure");
        let diagonal: HashSet<Vertex> = (1..=4).map(|i| (i - 1) * 4 + i).collect();
        let mut ids: BTreeMap<(Vertex, Vertex), Vertex> = BTreeMap::new();
        let mut sets = Vec::new();
        for sigma in product.facets() {
            // apex first, then diagonal vertices in increasing order
            let p: Vec<Vertex> = std::iter::once(0)
                .chain(sigma.iter().copied().filter(|v| diagonal.contains(v)))
                .collect();
            let q: Vec<Vertex> = sigma.iter().copied().filter(|v| !diagonal.contains(v)).collect();
            if q.is_empty() {
                continue;
            }
            for path in lattice_paths(p.len() - 1, q.len() - 1) {
                let (mut x, mut y) = (0usize, 0usize);
                let mut cell = vec![(p[0], q[0])];
                for right in path {
                    if right {
                        x += 1;
                    } else {
                        y += 1;
                    }
                    cell.push((p[x], q[y]));
                }
                let s: Vec<Vertex> = cell
                    .into_iter()
                    .map(|key| {
                        let n = ids.len() as Vertex + 1;
                        *ids.entry(key).or_insert(n)
                    })
                    .collect();
                sets.push(s);
            }
        }
        let names: HashMap<Vertex, (Vertex, Vertex)> = ids.iter().map(|(&k, &v)| (v, k)).collect();
        let block = Complex::build(sets, |v| {
            let (a, b) = names[&v];
            if a == 0 {
                product.label(b).clone()
            } else {
                Label::Text(format!("{}|{}", product.label(a), product.label(b)))
            }
        })
        .with_name("resolution block (S^2 x S^2 minus diagonal)");
        ResolutionBlock {
            block,
            boundary_type: "RP^3".into(),
            provenance: "complement of a regular neighbourhood of the diagonal in the staircase \
                         triangulation of S^2 x S^2; disk bundle of Euler number -2 over S^2"
                .into(),
        }
    }

    /// Boundary facets in the block's own vertex ids.
    pub fn boundary_facets(&self) -> Vec<Face> {
        boundary_faces(self.block.facets())
    }
}

fn boundary_faces(facets: &[Face]) -> Vec<Face> {
    let mut count: HashMap<Face, usize> = HashMap::new();
    for f in facets {
        for r in f.subsets_of_size(f.len() - 1) {
            *count.entry(r).or_insert(0) += 1;
        }
    }
    let mut out: Vec<Face> = count.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularVertex {
    pub vertex: Vertex,
    pub link_homology: HomologyProfile,
    /// The link has the homology of a sphere but was not reduced to one.
    pub suspect: bool,
}

/// Vertices whose links could not be certified as spheres.
pub fn singular_vertices(c: &Complex, opts: &ReductionOptions) -> Result<Vec<SingularVertex>> {
    require_closed_4d(c)?;
    let mut out = Vec::new();
    for v in 1..=c.n_vertices() as Vertex {
        let link = c.link(&[v])?;
        let h = homology(&link);
        if h == HomologyProfile::sphere(3) {
            if !is_sphere(&link, opts)? {
                out.push(SingularVertex {
                    vertex: v,
                    link_homology: h,
                    suspect: true,
                });
            }
        } else {
            out.push(SingularVertex {
                vertex: v,
                link_homology: h,
                suspect: false,
            });
        }
    }
    Ok(out)
}

fn require_closed_4d(c: &Complex) -> Result<()> {
    if c.dim() != 4 {
        return Err(Error::DimensionMismatch(c.dim(), 4));
    }
    if !c.is_pure() {
        return Err(Error::NotPure);
    }
    if !c.structural_flags().is_closed_pseudomanifold() {
        return Err(Error::NotClosedPseudomanifold);
    }
    Ok(())
}

/// Whether the link of `v` is bistellarly equivalent to `rp3`.
pub fn is_ordinary_double_point(c: &Complex, v: Vertex, rp3: &Complex, opts: &ReductionOptions) -> Result<bool> {
    let link = c.link(&[v])?;
    if link.dim() != rp3.dim() || homology(&link) != homology(rp3) {
        return Ok(false);
    }
    Ok(crate::bistellar::bistellarly_equivalent(&link, rp3, opts)?.is_equivalent())
}

/// One line of the blowup log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum BlowupEvent {
    CheckLink { vertex: Vertex, homology: HomologyProfile },
    OrdinaryDoublePoint { vertex: Vertex },
    MapBoundaries { block_boundary: Vec<u64>, link: Vec<u64> },
    BoundariesNotIsomorphic,
    SmallerBoundary { f: Vec<u64> },
    Collar { boundary: Vec<u64> },
    IsomorphicBoundaries { moves: usize },
    Glue { f: Vec<u64> },
}

#[derive(Clone, Debug)]
pub struct Blowup {
    pub complex: Complex,
    pub log: Vec<BlowupEvent>,
}

/// Block under construction, with ids stable across collars.
struct GrowingBlock {
    facets: BTreeSet<Face>,
    /// Number of facets containing each face.
    faces: HashMap<Face, u32>,
    boundary: Workspace,
    next_id: Vertex,
}

impl GrowingBlock {
    fn new(block: &Complex, boundary: Vec<Face>) -> GrowingBlock {
        let next_id = block.n_vertices() as Vertex + 1;
        let mut grow = GrowingBlock {
            facets: BTreeSet::new(),
            faces: HashMap::new(),
            boundary: Workspace::new(boundary, next_id),
            next_id,
        };
        for f in block.facets() {
            grow.attach(f.clone());
        }
        grow
    }

    fn fresh(&mut self) -> Vertex {
        let v = self.next_id;
        self.next_id += 1;
        v
    }

    fn attach(&mut self, simplex: Face) {
        for s in simplex.nonempty_subsets() {
            *self.faces.entry(s).or_insert(0) += 1;
        }
        self.facets.insert(simplex);
    }

    fn detach(&mut self, simplex: &Face) {
        for s in simplex.nonempty_subsets() {
            let n = self.faces.get_mut(&s).expect("faces of a facet are counted");
            *n -= 1;
            if *n == 0 {
                self.faces.remove(&s);
            }
        }
        self.facets.remove(simplex);
    }

    /// Realizes the boundary move `a -> b`: by attaching `a ∪ b` when `b`
    /// is new, or by removing the facet `a ∪ b` when `a` lies in no other
    /// facet (an elementary shelling). Returns `false`, leaving the block
    /// untouched, when neither applies.
    fn realize(&mut self, a: Face, b: Face) -> Result<bool> {
        let m = Move::new(a.clone(), b.clone());
        let sigma = a.union(&b);
        if !self.faces.contains_key(&b) {
            self.boundary.apply(&m)?;
            self.attach(sigma);
            return Ok(true);
        }
        if self.facets.contains(&sigma) && self.faces.get(&a) == Some(&1) {
            self.boundary.apply(&m)?;
            self.detach(&sigma);
            return Ok(true);
        }
        Ok(false)
    }

    /// Glues `∂ x [0, 1]` onto the boundary; returns the map from each old
    /// boundary vertex to its copy on the new boundary.
    fn collar(&mut self) -> HashMap<Vertex, Vertex> {
        let old: Vec<Face> = self.boundary.facets().iter().cloned().collect();
        let mut verts: Vec<Vertex> = old.iter().flat_map(|f| f.iter().copied()).collect();
        verts.sort_unstable();
        verts.dedup();
        let outer: HashMap<Vertex, Vertex> = verts.iter().map(|&v| (v, self.fresh())).collect();
        for f in &old {
            // staircase prism over f: lower part f[..=j], upper part f[j..]
            for j in 0..f.len() {
                let mut s: Vec<Vertex> = f[..=j].to_vec();
                s.extend(f[j..].iter().map(|v| outer[v]));
                self.attach(Face::new(s));
            }
        }
        let renamed = old
            .iter()
            .map(|f| Face::new(f.iter().map(|v| outer[v]).collect()));
        self.boundary = Workspace::new(renamed, self.next_id);
        outer
    }
}

fn map_face(f: &Face, map: &mut HashMap<Vertex, Vertex>, block: &mut GrowingBlock) -> Face {
    Face::new(
        f.iter()
            .map(|v| match map.get(v) {
                Some(&w) => w,
                None => {
                    let w = block.fresh();
                    map.insert(*v, w);
                    w
                }
            })
            .collect(),
    )
}

fn compose(map: &mut HashMap<Vertex, Vertex>, outer: &HashMap<Vertex, Vertex>) {
    for w in map.values_mut() {
        if let Some(&o) = outer.get(w) {
            *w = o;
        }
    }
}

/// Replaces the star of `v` by `block`, after checking that `v` is an
/// ordinary double point (its link is equivalent to `rp3`).
pub fn blowup(
    c: &Complex,
    v: Vertex,
    block: &ResolutionBlock,
    rp3: &Complex,
    opts: &ReductionOptions,
) -> Result<Blowup> {
    require_closed_4d(c)?;
    if v == 0 || v as usize > c.n_vertices() {
        return Err(Error::NotAFace(vec![v]));
    }
    let mut log = Vec::new();
    let link = c.link_with_ids(&[v])?;
    log.push(BlowupEvent::CheckLink {
        vertex: v,
        homology: homology(&link),
    });
    if !is_ordinary_double_point(c, v, rp3, opts)? {
        return Err(Error::UnsupportedSingularity(v));
    }
    log.push(BlowupEvent::OrdinaryDoublePoint { vertex: v });

    let boundary = block.boundary_facets();
    let mut grow = GrowingBlock::new(&block.block, boundary.clone());
    log.push(BlowupEvent::MapBoundaries {
        block_boundary: grow.boundary.f_vector(),
        link: link.f_vector(),
    });
    let cert = equivalent_workspaces(
        Workspace::new(boundary.iter().cloned(), grow.next_id),
        Workspace::from_complex(&link)?,
        opts,
    )
    .ok_or(Error::BoundariesNotMapped)?;
    if !cert.moves_first.is_empty() || !cert.moves_second.is_empty() {
        log.push(BlowupEvent::BoundariesNotIsomorphic);
    }

    // workspace ids of the block boundary run -> current block ids
    let mut rho: HashMap<Vertex, Vertex> = boundary
        .iter()
        .flat_map(|f| f.iter().map(|&w| (w, w)))
        .collect();
    let mut best = key(&grow.boundary.f_vector());
    for m in &cert.moves_first {
        let a = map_face(&m.a, &mut rho, &mut grow);
        let b = map_face(&m.b, &mut rho, &mut grow);
        if !grow.realize(a, b)? {
            let outer = grow.collar();
            log.push(BlowupEvent::Collar {
                boundary: grow.boundary.f_vector(),
            });
            compose(&mut rho, &outer);
            let a = map_face(&m.a, &mut rho, &mut grow);
            let b = map_face(&m.b, &mut rho, &mut grow);
            if !grow.realize(a, b)? {
                return Err(Error::BoundariesNotMapped);
            }
        }
        let f = grow.boundary.f_vector();
        if key(&f) < best {
            best = key(&f);
            log.push(BlowupEvent::SmallerBoundary { f });
        }
    }

    // link ids -> block ids, walking the link's reduction backwards
    let mut phi: HashMap<Vertex, Vertex> = cert
        .isomorphism
        .iter()
        .map(|(x, y)| (*y, rho[x]))
        .collect();
    for m in cert.moves_second.iter().rev() {
        let a = map_face(&m.b, &mut phi, &mut grow);
        let b = map_face(&m.a, &mut phi, &mut grow);
        if !grow.realize(a, b)? {
            let outer = grow.collar();
            log.push(BlowupEvent::Collar {
                boundary: grow.boundary.f_vector(),
            });
            compose(&mut phi, &outer);
            let a = map_face(&m.b, &mut phi, &mut grow);
            let b = map_face(&m.a, &mut phi, &mut grow);
            if !grow.realize(a, b)? {
                return Err(Error::BoundariesNotMapped);
            }
        }
        if m.b.len() == 1 {
            phi.remove(&m.b[0]);
        }
    }
    let mapped: BTreeSet<Face> = link
        .facets()
        .iter()
        .map(|f| Face::new(f.iter().map(|x| phi[x]).collect()))
        .collect();
    if &mapped != grow.boundary.facets() {
        return Err(Error::BoundariesNotMapped);
    }
    log.push(BlowupEvent::IsomorphicBoundaries {
        moves: cert.moves_first.len() + cert.moves_second.len(),
    });

    // An interior face of the block spanned by boundary vertices would be
    // merged with an equal face on the other side; a collar separates them.
    let ambient = |phi: &HashMap<Vertex, Vertex>| -> HashMap<Vertex, Vertex> {
        phi.iter()
            .map(|(&x, &w)| match link.label(x) {
                Label::Int(id) => (w, *id as Vertex),
                Label::Text(_) => unreachable!("link_with_ids uses integer labels"),
            })
            .collect()
    };
    let mut ambient_of = ambient(&phi);
    let boundary_faces: HashSet<Face> = grow
        .boundary
        .facets()
        .iter()
        .flat_map(|f| f.nonempty_subsets().collect::<Vec<_>>())
        .collect();
    let clash = grow.faces.keys().any(|s| {
        !boundary_faces.contains(s)
            && s.iter().all(|w| ambient_of.contains_key(w))
            && c.contains_face(&Face::new(s.iter().map(|w| ambient_of[w]).collect()))
    });
    if clash {
        let outer = grow.collar();
        log.push(BlowupEvent::Collar {
            boundary: grow.boundary.f_vector(),
        });
        compose(&mut phi, &outer);
        ambient_of = ambient(&phi);
    }

    let n = c.n_vertices() as Vertex;
    let mut interior: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut block_ids: Vec<Vertex> = grow.facets.iter().flat_map(|f| f.iter().copied()).collect();
    block_ids.sort_unstable();
    block_ids.dedup();
    for w in block_ids {
        if !ambient_of.contains_key(&w) {
            let next = n + interior.len() as Vertex + 1;
            interior.insert(w, next);
        }
    }
    let mut sets: Vec<Vec<Vertex>> = c
        .facets()
        .iter()
        .filter(|f| !f.contains(&v))
        .map(|f| f.to_vec())
        .collect();
    for f in &grow.facets {
        sets.push(
            f.iter()
                .map(|w| ambient_of.get(w).copied().unwrap_or_else(|| interior[w]))
                .collect(),
        );
    }
    let base = c.next_int_label();
    let mut out = Complex::build(sets, |w| {
        if w <= n {
            c.label(w).clone()
        } else {
            Label::Int(base + (w - n - 1) as i64)
        }
    });
    if let Some(name) = c.name() {
        out.set_name(format!("{name} blown up at {}", c.label(v)));
    }
    if !out.structural_flags().is_closed_pseudomanifold() {
        return Err(Error::BoundariesNotMapped);
    }
    log.push(BlowupEvent::Glue { f: out.f_vector() });
    Ok(Blowup { complex: out, log })
}

fn key(f: &[u64]) -> Vec<u64> {
    f.iter().rev().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::euler_characteristic;

    #[test]
    fn diagonal_complement_block() {
        let b = ResolutionBlock::diagonal_complement();
        let checked = ResolutionBlock::new(b.block.clone(), "RP^3", "test").unwrap();
        assert_eq!(euler_characteristic(&checked.block), 2);
        assert_eq!(
            homology(&b.block),
            HomologyProfile::from_pairs(&[(0, &[]), (0, &[]), (1, &[]), (0, &[]), (0, &[])])
        );
        let boundary = b.block.boundary().unwrap();
        assert_eq!(
            homology(&boundary),
            HomologyProfile::from_pairs(&[(0, &[]), (0, &[2]), (0, &[]), (1, &[])])
        );
    }

    #[test]
    fn block_boundary_is_induced() {
        let b = ResolutionBlock::diagonal_complement();
        let boundary: HashSet<Face> = b
            .boundary_facets()
            .iter()
            .flat_map(|f| f.nonempty_subsets().collect::<Vec<_>>())
            .collect();
        let verts: HashSet<Vertex> = boundary.iter().flat_map(|f| f.iter().copied()).collect();
        for f in b.block.facets() {
            for s in f.nonempty_subsets() {
                if s.iter().all(|v| verts.contains(v)) {
                    assert!(boundary.contains(&s), "{s:?} spans boundary vertices only");
                }
            }
        }
    }

    #[test]
    fn sphere_rejects_as_block() {
        let s = boundary_simplex(5).unwrap();
        assert!(matches!(ResolutionBlock::new(s, "", ""), Err(Error::InvalidBlock(_))));
    }
}
