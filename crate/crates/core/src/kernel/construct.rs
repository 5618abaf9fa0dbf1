//! Combinatorial constructions: orbit closure, joins, products, connected
//! sums and handles.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Complex, Face, Label, Vertex};
use crate::error::{Error, Result};

/// A bijection of `1..=n`, stored as the image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<Vertex>,
}

impl Permutation {
    pub fn new(image: Vec<Vertex>) -> Result<Permutation> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v as usize > n || std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection on 1..{n}")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            image: (1..=n as Vertex).collect(),
        }
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[Vertex]]) -> Result<Permutation> {
        let mut image: Vec<Vertex> = (1..=n as Vertex).collect();
        for cycle in cycles.iter().rev() {
            let mut step: Vec<Vertex> = (1..=n as Vertex).collect();
            for (i, &v) in cycle.iter().enumerate() {
                if v == 0 || v as usize > n {
                    return Err(Error::InvalidPermutation(format!("cycle entry {v} outside 1..{n}")));
                }
                step[v as usize - 1] = cycle[(i + 1) % cycle.len()];
            }
            image = image.iter().map(|&v| step[v as usize - 1]).collect();
        }
        Permutation::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[Vertex] {
        &self.image
    }

    /// Points beyond the permutation's range are fixed.
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.image.get(v as usize - 1).copied().unwrap_or(v)
    }

    pub fn apply_face(&self, f: &[Vertex]) -> Face {
        Face::new(f.iter().map(|&v| self.apply(v)).collect())
    }
}

/// Closure of `generators` under the group generated by `group_gens`.
pub fn from_generators(generators: &[Vec<i64>], group_gens: &[Permutation]) -> Result<Complex> {
    if generators.is_empty() {
        return Err(Error::NoFacets);
    }
    let mut seeds = Vec::new();
    for g in generators {
        let mut f = Vec::with_capacity(g.len());
        for &v in g {
            if v <= 0 {
                return Err(Error::BadVertex(v));
            }
            f.push(v as Vertex);
        }
        seeds.push(Face::new(f));
    }
    let max_vertex = seeds.iter().flat_map(|f| f.iter().copied()).max().unwrap_or(0);
    if let Some(p) = group_gens.iter().find(|p| p.len() < max_vertex as usize) {
        return Err(Error::InvalidPermutation(format!(
            "permutation on {} points does not act on vertex {max_vertex}",
            p.len()
        )));
    }
    let mut seen: BTreeSet<Face> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<Face> = seeds.into_iter().collect();
    while let Some(f) = queue.pop_front() {
        for p in group_gens {
            let g = p.apply_face(&f);
            if seen.insert(g.clone()) {
                queue.push_back(g);
            }
        }
    }
    let sets = seen.into_iter().map(Face::into_vec).collect();
    Ok(Complex::build(sets, |v| Label::Int(v as i64)))
}

/// Join on disjoint copies of the vertex sets. The empty complex is the unit.
pub fn join(a: &Complex, b: &Complex) -> Complex {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let shift = a.n_vertices() as Vertex;
    let mut sets = Vec::with_capacity(a.facets().len() * b.facets().len());
    for f in a.facets() {
        for g in b.facets() {
            let mut s = f.to_vec();
            s.extend(g.iter().map(|&v| v + shift));
            sets.push(s);
        }
    }
    Complex::build(sets, |v| {
        if v <= shift {
            a.label(v).clone()
        } else {
            b.label(v - shift).clone()
        }
    })
}

pub fn cone(c: &Complex) -> Complex {
    let apex = Complex::build(vec![vec![1]], |_| Label::Int(c.next_int_label()));
    join(c, &apex)
}

pub fn suspension(c: &Complex) -> Complex {
    let next = c.next_int_label();
    let poles = Complex::build(vec![vec![1], vec![2]], |v| Label::Int(next + v as i64 - 1));
    join(c, &poles)
}

/// Staircase triangulation of the product of two pure complexes. Vertex
/// `(i, j)` becomes `(i - 1) * n2 + j`; each pair of facets contributes one
/// simplex per monotone lattice path through their vertex grid.
pub fn cartesian_product(a: &Complex, b: &Complex) -> Result<Complex> {
    if !a.is_pure() || !b.is_pure() {
        return Err(Error::NotPure);
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Complex::empty());
    }
    let n2 = b.n_vertices() as Vertex;
    let id = |i: Vertex, j: Vertex| (i - 1) * n2 + j;
    let mut sets = Vec::new();
    for f in a.facets() {
        for g in b.facets() {
            let (p, q) = (f.len() - 1, g.len() - 1);
            for path in lattice_paths(p, q) {
                let (mut x, mut y) = (0usize, 0usize);
                let mut s = vec![id(f[0], g[0])];
                for right in path {
                    if right {
                        x += 1;
                    } else {
                        y += 1;
                    }
                    s.push(id(f[x], g[y]));
                }
                sets.push(s);
            }
        }
    }
    Ok(Complex::build(sets, |v| {
        let i = (v - 1) / n2 + 1;
        let j = (v - 1) % n2 + 1;
        Label::Text(format!("({},{})", a.label(i), b.label(j)))
    }))
}

/// All step sequences with `p` right-steps and `q` up-steps.
pub(crate) fn lattice_paths(p: usize, q: usize) -> Vec<Vec<bool>> {
    if p == 0 {
        return vec![vec![false; q]];
    }
    if q == 0 {
        return vec![vec![true; p]];
    }
    let mut out = Vec::new();
    for mut rest in lattice_paths(p - 1, q) {
        rest.insert(0, true);
        out.push(rest);
    }
    for mut rest in lattice_paths(p, q - 1) {
        rest.insert(0, false);
        out.push(rest);
    }
    out
}

fn require_closed_pm(c: &Complex) -> Result<()> {
    if !c.is_pure() {
        return Err(Error::NotPure);
    }
    if !c.structural_flags().is_closed_pseudomanifold() {
        return Err(Error::NotClosedPseudomanifold);
    }
    Ok(())
}

/// Removes the first facet of each summand and identifies their boundaries
/// vertex by vertex in ascending order. For chiral manifolds the PL type of
/// the result may depend on this identification.
pub fn connected_sum(a: &Complex, b: &Complex) -> Result<Complex> {
    require_closed_pm(a)?;
    require_closed_pm(b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let fa = &a.facets()[0];
    let fb = &b.facets()[0];
    let n1 = a.n_vertices() as Vertex;
    let mut map: HashMap<Vertex, Vertex> = fb.iter().copied().zip(fa.iter().copied()).collect();
    let mut origin: HashMap<Vertex, Vertex> = HashMap::new();
    let mut next = n1;
    for v in 1..=b.n_vertices() as Vertex {
        if let std::collections::hash_map::Entry::Vacant(e) = map.entry(v) {
            next += 1;
            e.insert(next);
            origin.insert(next, v);
        }
    }
    let mut sets: Vec<Vec<Vertex>> = a.facets()[1..].iter().map(|f| f.to_vec()).collect();
    sets.extend(
        b.facets()[1..]
            .iter()
            .map(|g| g.iter().map(|v| map[v]).collect()),
    );
    Ok(Complex::build(sets, |v| match origin.get(&v) {
        Some(&w) => b.label(w).clone(),
        None => a.label(v).clone(),
    }))
}

/// Removes two facets whose closed vertex neighbourhoods are disjoint and
/// identifies their boundaries in ascending vertex order.
pub fn handle_addition(c: &Complex, f1: &[Vertex], f2: &[Vertex]) -> Result<Complex> {
    require_closed_pm(c)?;
    let f1 = Face::new(f1.to_vec());
    let f2 = Face::new(f2.to_vec());
    let facets = c.facets();
    if facets.binary_search(&f1).is_err() {
        return Err(Error::NotAFace(f1.into_vec()));
    }
    if facets.binary_search(&f2).is_err() {
        return Err(Error::NotAFace(f2.into_vec()));
    }
    let closed_nbhd = |f: &Face| -> BTreeSet<Vertex> {
        facets
            .iter()
            .filter(|g| !g.is_disjoint(f))
            .flat_map(|g| g.iter().copied())
            .collect()
    };
    if !closed_nbhd(&f1).is_disjoint(&closed_nbhd(&f2)) {
        return Err(Error::StarsNotDisjoint);
    }
    let map: HashMap<Vertex, Vertex> = f2.iter().copied().zip(f1.iter().copied()).collect();
    let sets = facets
        .iter()
        .filter(|g| **g != f1 && **g != f2)
        .map(|g| g.iter().map(|v| *map.get(v).unwrap_or(v)).collect())
        .collect();
    Ok(c.sub_build(sets))
}
