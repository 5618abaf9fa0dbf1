//! Standard triangulations generated from scratch.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Complex, Face, Label, Vertex};
use crate::rng;

/// Parameters naming one member of a standard family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum SeriesSpec {
    Simplex { d: usize },
    BoundarySimplex { d: usize },
    CrossPolytope { d: usize },
    CyclicBoundary { d: usize, n: usize },
    StackedSphere { d: usize, n: usize, seed: u64 },
}

impl SeriesSpec {
    pub fn build(&self) -> Result<Complex> {
        match *self {
            SeriesSpec::Simplex { d } => Ok(simplex(d)),
            SeriesSpec::BoundarySimplex { d } => boundary_simplex(d),
            SeriesSpec::CrossPolytope { d } => cross_polytope(d),
            SeriesSpec::CyclicBoundary { d, n } => cyclic_polytope_boundary(d, n),
            SeriesSpec::StackedSphere { d, n, seed } => stacked_sphere(d, n, seed),
        }
    }
}

fn int_labels(sets: Vec<Vec<Vertex>>) -> Complex {
    Complex::build(sets, |v| Label::Int(v as i64))
}

pub fn simplex(d: usize) -> Complex {
    int_labels(vec![(1..=d as Vertex + 1).collect()]).with_name(format!("D^{d}"))
}

pub fn boundary_simplex(d: usize) -> Result<Complex> {
    if d == 0 {
        return Err(Error::InvalidArgument("boundary of a simplex needs d >= 1".into()));
    }
    let full = Face::new((1..=d as Vertex + 1).collect());
    let sets = full.subsets_of_size(d).into_iter().map(Face::into_vec).collect();
    Ok(int_labels(sets).with_name(format!("S^{}_{}", d - 1, d + 1)))
}

/// Boundary of the `d`-dimensional cross polytope on vertex pairs `(2i-1, 2i)`.
pub fn cross_polytope(d: usize) -> Result<Complex> {
    if d == 0 {
        return Err(Error::InvalidArgument("cross polytope needs d >= 1".into()));
    }
    let sets = (0u64..1 << d)
        .map(|mask| {
            (0..d)
                .map(|i| 2 * i as Vertex + 1 + (mask >> i & 1) as Vertex)
                .collect()
        })
        .collect();
    Ok(int_labels(sets).with_name(format!("Bd(Beta^{d})")))
}

/// Gale's evenness condition: between any two non-members, the members of
/// `face` form a block of even size.
pub fn gale_evenness(face: &[Vertex], n: usize) -> bool {
    let mut last_gap: Option<Vertex> = None;
    for v in 1..=n as Vertex {
        if face.contains(&v) {
            continue;
        }
        if let Some(prev) = last_gap {
            let between = face.iter().filter(|&&k| k > prev && k < v).count();
            if between % 2 == 1 {
                return false;
            }
        }
        last_gap = Some(v);
    }
    true
}

/// Boundary of the cyclic `d`-polytope on `n` vertices.
pub fn cyclic_polytope_boundary(d: usize, n: usize) -> Result<Complex> {
    if d < 2 {
        return Err(Error::InvalidArgument("cyclic polytope needs d >= 2".into()));
    }
    if n < d + 2 {
        return Err(Error::InvalidArgument(format!(
            "cyclic polytope C_{d}({n}) needs n >= d + 2"
        )));
    }
    let all = Face::new((1..=n as Vertex).collect());
    let sets = all
        .subsets_of_size(d)
        .into_iter()
        .filter(|f| gale_evenness(f, n))
        .map(Face::into_vec)
        .collect();
    Ok(int_labels(sets).with_name(format!("Bd(C_{d}({n}))")))
}

/// Stacked `d`-sphere on `n` vertices: starting from the boundary of the
/// `(d+1)`-simplex, repeatedly subdivide a uniformly chosen facet.
pub fn stacked_sphere(d: usize, n: usize, seed: u64) -> Result<Complex> {
    if d == 0 || n < d + 2 {
        return Err(Error::InvalidArgument(format!(
            "stacked {d}-sphere needs d >= 1 and n >= d + 2, got n = {n}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let full = Face::new((1..=d as Vertex + 2).collect());
    let mut facets: Vec<Face> = full.subsets_of_size(d + 1);
    for v in d as Vertex + 3..=n as Vertex {
        let i = rng.gen_range(0..facets.len());
        let old = facets.swap_remove(i);
        for w in old.iter() {
            let mut s = old.without(*w).into_vec();
            s.push(v);
            facets.push(Face::from_sorted(s));
        }
    }
    let sets = facets.into_iter().map(Face::into_vec).collect();
    Ok(int_labels(sets).with_name(format!("stacked S^{d} on {n} vertices (seed {seed})")))
}

/// The 16-vertex Kummer variety: the Freudenthal (staircase) triangulation
/// of the 4-cube with coordinates read mod 2, so that its 16 vertices are
/// the points of `{0,1}^4` and every facet is a monotone lattice path of
/// length four. Vertex `1 + sum(x_i 2^i)` is the point `x`.
pub fn kummer_variety() -> Complex {
    let mut sets = Vec::with_capacity(384);
    for start in 0u32..16 {
        for perm in permutations(4) {
            let mut x = start;
            let mut f = vec![x + 1];
            for i in perm {
                x ^= 1 << i;
                f.push(x + 1);
            }
            sets.push(f);
        }
    }
    int_labels(sets).with_name("4-dimensional Kummer variety")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
