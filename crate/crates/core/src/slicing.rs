//! Discrete normal surfaces of 3-manifolds.
//!
//! A bipartition of the vertices of a triangulated 3-manifold determines the
//! level set of the piecewise linear function that is 0 on one side and 1 on
//! the other. It meets every tetrahedron with vertices on both sides in a
//! normal triangle (3-1 split) or a normal quadrilateral (2-2 split).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{euler_characteristic, is_orientable};
use crate::kernel::{Complex, Label, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    pub side_a: BTreeSet<Vertex>,
    pub side_b: BTreeSet<Vertex>,
}

impl VertexPartition {
    pub fn new(side_a: impl IntoIterator<Item = Vertex>, side_b: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let side_a: BTreeSet<Vertex> = side_a.into_iter().collect();
        let side_b: BTreeSet<Vertex> = side_b.into_iter().collect();
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::InvalidPartition("both sides must be nonempty".into()));
        }
        if let Some(v) = side_a.intersection(&side_b).next() {
            return Err(Error::InvalidPartition(format!("vertex {v} lies on both sides")));
        }
        Ok(VertexPartition { side_a, side_b })
    }

    /// `side_a` against all remaining vertices of `c`.
    pub fn complement(c: &Complex, side_a: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let side_a: BTreeSet<Vertex> = side_a.into_iter().collect();
        let side_b = (1..=c.n_vertices() as Vertex).filter(|v| !side_a.contains(v)).collect::<Vec<_>>();
        VertexPartition::new(side_a, side_b)
    }

    /// Parses `"1,3,5/2,4,6"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPartition(format!("expected `A/B` with comma-separated vertices, got `{s}`"));
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        let side = |t: &str| -> Result<Vec<Vertex>> {
            t.split(',')
                .map(|x| x.trim().parse::<Vertex>().map_err(|_| bad()))
                .collect()
        };
        VertexPartition::new(side(a)?, side(b)?)
    }

    pub fn swapped(&self) -> Self {
        VertexPartition {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    fn check_covers(&self, c: &Complex) -> Result<()> {
        let n = c.n_vertices() as Vertex;
        if let Some(v) = self.side_a.iter().chain(&self.side_b).find(|&&v| v == 0 || v > n) {
            return Err(Error::InvalidPartition(format!("vertex {v} not in 1..={n}")));
        }
        if self.side_a.len() + self.side_b.len() != n as usize {
            return Err(Error::InvalidPartition(format!(
                "sides cover {} of {n} vertices",
                self.side_a.len() + self.side_b.len()
            )));
        }
        Ok(())
    }
}

/// Polytopal surface with triangle and quadrilateral cells.
///
/// Vertex `i` (1-based) sits on the ambient edge `edges_crossed[i - 1]`,
/// stored with the smaller ambient id first. Quads are listed in the cyclic
/// order induced by their tetrahedron, starting at their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalSurface {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub edges_crossed: Vec<(Vertex, Vertex)>,
    /// `"u-v"` from the ambient labels of the crossed edge.
    pub labels: Vec<String>,
    pub edges: Vec<[Vertex; 2]>,
    pub triangles: Vec<[Vertex; 3]>,
    pub quads: Vec<[Vertex; 4]>,
}

impl NormalSurface {
    /// `[vertices, edges, triangles, quads]`.
    pub fn f_vector(&self) -> [u64; 4] {
        [
            self.edges_crossed.len() as u64,
            self.edges.len() as u64,
            self.triangles.len() as u64,
            self.quads.len() as u64,
        ]
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [v, e, t, q] = self.f_vector().map(|x| x as i64);
        v - e + t + q
    }
}

pub fn slicing(c: &Complex, p: &VertexPartition) -> Result<NormalSurface> {
    if c.dim() != 3 {
        return Err(Error::SlicingDimension(c.dim()));
    }
    if !c.structural_flags().is_closed_pseudomanifold() {
        return Err(Error::NotClosedPseudomanifold);
    }
    p.check_covers(c)?;
    let on_a = |v: Vertex| p.side_a.contains(&v);

    let mut index: BTreeMap<(Vertex, Vertex), Vertex> = BTreeMap::new();
    for e in c.faces(1) {
        if on_a(e[0]) != on_a(e[1]) {
            index.insert((e[0], e[1]), 0);
        }
    }
    for (i, id) in index.values_mut().enumerate() {
        *id = i as Vertex + 1;
    }
    let node = |u: Vertex, v: Vertex| index[&(u.min(v), u.max(v))];

    let mut edges = Vec::new();
    for t in c.faces(2) {
        let (a, b): (Vec<Vertex>, Vec<Vertex>) = t.iter().partition(|&&v| on_a(v));
        if a.is_empty() || b.is_empty() {
            continue;
        }
        // the lone vertex meets the other two
        let (lone, pair) = if a.len() == 1 { (a[0], &b) } else { (b[0], &a) };
        let mut e = [node(lone, pair[0]), node(lone, pair[1])];
        e.sort_unstable();
        edges.push(e);
    }
    edges.sort_unstable();

    let mut triangles = Vec::new();
    let mut quads = Vec::new();
    for f in c.facets() {
        let (a, b): (Vec<Vertex>, Vec<Vertex>) = f.iter().partition(|&&v| on_a(v));
        match (a.len(), b.len()) {
            (1, 3) | (3, 1) => {
                let (lone, rest) = if a.len() == 1 { (a[0], &b) } else { (b[0], &a) };
                let mut t = [node(lone, rest[0]), node(lone, rest[1]), node(lone, rest[2])];
                t.sort_unstable();
                triangles.push(t);
            }
            (2, 2) => {
                let cycle = [node(a[0], b[0]), node(a[0], b[1]), node(a[1], b[1]), node(a[1], b[0])];
                quads.push(normalize_cycle(cycle));
            }
            _ => {}
        }
    }
    triangles.sort_unstable();
    quads.sort_unstable();

    let labels = index
        .keys()
        .map(|&(u, v)| format!("{}-{}", c.label(u), c.label(v)))
        .collect();
    Ok(NormalSurface {
        name: c.name().map(|n| format!("slicing of {n}")),
        edges_crossed: index.into_keys().collect(),
        labels,
        edges,
        triangles,
        quads,
    })
}

/// Rotates to the smallest vertex and walks towards its smaller neighbour.
fn normalize_cycle(q: [Vertex; 4]) -> [Vertex; 4] {
    let start = (0..4).min_by_key(|&i| q[i]).expect("four entries");
    let at = |k: usize| q[(start + k) % 4];
    if at(1) < at(3) {
        [at(0), at(1), at(2), at(3)]
    } else {
        [at(0), at(3), at(2), at(1)]
    }
}

/// Splits every quad `(w, x, y, z)` along `w-y`, `w` its smallest vertex.
pub fn ns_triangulation(ns: &NormalSurface) -> Complex {
    let mut sets: Vec<Vec<Vertex>> = ns.triangles.iter().map(|t| t.to_vec()).collect();
    for &[w, x, y, z] in &ns.quads {
        sets.push(vec![w, x, y]);
        sets.push(vec![w, y, z]);
    }
    let labels = &ns.labels;
    let mut c = Complex::build(sets, |v| Label::Text(labels[v as usize - 1].clone()));
    if let Some(name) = &ns.name {
        c.set_name(name);
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    pub orientable: bool,
    /// Sum of the genera of the components.
    pub genus: u64,
    pub components: usize,
    pub euler_characteristic: i64,
    /// One descriptor per component, joined by `" + "`.
    pub descriptor: String,
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor)
    }
}

/// Classifies a connected closed surface from its Euler characteristic and
/// orientability.
pub fn surface_name(orientable: bool, chi: i64) -> Result<(u64, String)> {
    if orientable {
        if chi > 2 || chi % 2 != 0 {
            return Err(Error::NotClosedSurface(format!("orientable surface with chi = {chi}")));
        }
        let g = ((2 - chi) / 2) as u64;
        let name = match g {
            0 => "S^2".to_string(),
            1 => "T^2".to_string(),
            _ => format!("(T^2)#{g}"),
        };
        Ok((g, name))
    } else {
        if chi > 1 {
            return Err(Error::NotClosedSurface(format!("non-orientable surface with chi = {chi}")));
        }
        let g = (2 - chi) as u64;
        let name = if g == 1 { "RP^2".to_string() } else { format!("(RP^2)#{g}") };
        Ok((g, name))
    }
}

pub fn surface_type(ns: &NormalSurface) -> Result<SurfaceType> {
    let t = ns_triangulation(ns);
    if t.is_empty() {
        return Err(Error::NotClosedSurface("empty".into()));
    }
    for (r, fs) in t.ridge_index() {
        if fs.len() != 2 {
            return Err(Error::NotClosedSurface(format!(
                "edge {:?} lies in {} triangles",
                r.vertices(),
                fs.len()
            )));
        }
    }
    for v in 1..=t.n_vertices() as Vertex {
        let link = t.link(&[v])?;
        if link.vertex_components() != 1 {
            return Err(Error::NotClosedSurface(format!("vertex {v} is pinched")));
        }
    }
    let chi = ns.euler_characteristic();
    debug_assert_eq!(chi, euler_characteristic(&t));

    let parts = components(&t);
    let mut genus = 0;
    let mut names = Vec::with_capacity(parts.len());
    let mut orientable = true;
    for part in &parts {
        let o = is_orientable(part)?;
        let (g, name) = surface_name(o, euler_characteristic(part))?;
        orientable &= o;
        genus += g;
        names.push(name);
    }
    Ok(SurfaceType {
        orientable,
        genus,
        components: parts.len(),
        euler_characteristic: chi,
        descriptor: names.join(" + "),
    })
}

/// Connected components as separate complexes, ordered by smallest vertex.
fn components(c: &Complex) -> Vec<Complex> {
    let n = c.n_vertices();
    let mut root: Vec<usize> = (0..=n).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        root[x] = r;
        r
    }
    for f in c.facets() {
        for w in f.windows(2) {
            let (a, b) = (find(&mut root, w[0] as usize), find(&mut root, w[1] as usize));
            root[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<Vertex>>> = BTreeMap::new();
    for f in c.facets() {
        let r = find(&mut root, f[0] as usize);
        groups.entry(r).or_default().push(f.to_vec());
    }
    groups
        .into_values()
        .map(|sets| Complex::build(sets, |v| c.label(v).clone()))
        .collect()
}
