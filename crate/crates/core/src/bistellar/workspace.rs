use std::collections::{BTreeSet, HashMap};

use super::Move;
use crate::error::{Error, Result};
use crate::kernel::{Complex, Face, Label, Vertex};

/// Mutable facet set with stable vertex ids, tuned for repeated move
/// enumeration and application.
///
/// Every nonempty face carries the number of facets containing it. A face
/// `a` can only support a move if that number equals `d + 2 - |a|`, so
/// those faces are kept in per-size candidate sets.
#[derive(Clone, Debug)]
pub(crate) struct Workspace {
    dim: usize,
    facets: BTreeSet<Face>,
    counts: HashMap<Face, u32>,
    by_vertex: HashMap<Vertex, BTreeSet<Face>>,
    candidates: Vec<BTreeSet<Face>>,
    next_fresh: Vertex,
}

impl Workspace {
    /// `facets` must be pure and nonempty.
    pub(crate) fn new(facets: impl IntoIterator<Item = Face>, next_fresh: Vertex) -> Workspace {
        let facets: Vec<Face> = facets.into_iter().collect();
        let dim = facets[0].len() - 1;
        let mut ws = Workspace {
            dim,
            facets: BTreeSet::new(),
            counts: HashMap::new(),
            by_vertex: HashMap::new(),
            candidates: vec![BTreeSet::new(); dim + 1],
            next_fresh,
        };
        for f in facets {
            ws.next_fresh = ws.next_fresh.max(f[f.len() - 1] + 1);
            ws.insert_facet(f);
        }
        ws
    }

    pub(crate) fn from_complex(c: &Complex) -> Result<Workspace> {
        if !c.is_pure() {
            return Err(Error::NotPure);
        }
        if c.is_empty() {
            return Err(Error::NoFacets);
        }
        Ok(Workspace::new(c.facets().iter().cloned(), c.n_vertices() as Vertex + 1))
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn facets(&self) -> &BTreeSet<Face> {
        &self.facets
    }

    pub(crate) fn n_vertices(&self) -> usize {
        self.by_vertex.len()
    }

    pub(crate) fn is_face(&self, f: &[Vertex]) -> bool {
        self.counts.contains_key(f)
    }

    pub(crate) fn f_vector(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.dim + 1];
        for face in self.counts.keys() {
            f[face.len() - 1] += 1;
        }
        f
    }

    fn insert_facet(&mut self, f: Face) {
        for s in f.nonempty_subsets() {
            let c = self.counts.entry(s.clone()).or_insert(0);
            *c += 1;
            let c = *c;
            self.update_candidate(s, c);
        }
        for &v in f.iter() {
            self.by_vertex.entry(v).or_default().insert(f.clone());
        }
        self.facets.insert(f);
    }

    fn remove_facet(&mut self, f: &Face) {
        for s in f.nonempty_subsets() {
            let c = self.counts.get_mut(&s).expect("subset of a facet is counted");
            *c -= 1;
            let c = *c;
            if c == 0 {
                self.counts.remove(&s);
            }
            self.update_candidate(s, c);
        }
        for v in f.iter() {
            let set = self.by_vertex.get_mut(v).expect("vertex index is complete");
            set.remove(f);
            if set.is_empty() {
                self.by_vertex.remove(v);
            }
        }
        self.facets.remove(f);
    }

    fn update_candidate(&mut self, s: Face, count: u32) {
        let size = s.len();
        if count as usize == self.dim + 2 - size {
            self.candidates[size - 1].insert(s);
        } else {
            self.candidates[size - 1].remove(&s);
        }
    }

    /// Facets containing `a`.
    pub(crate) fn star(&self, a: &[Vertex]) -> Vec<&Face> {
        let Some(pivot) = a
            .iter()
            .filter_map(|v| self.by_vertex.get(v))
            .min_by_key(|s| s.len())
        else {
            return Vec::new();
        };
        if a.iter().any(|v| !self.by_vertex.contains_key(v)) {
            return Vec::new();
        }
        pivot.iter().filter(|f| f.contains_all(a)).collect()
    }

    /// The move at `a`, if `a` supports one. Facets get a fresh vertex.
    pub(crate) fn move_at(&self, a: &Face) -> Option<Move> {
        let k = self.dim + 2 - a.len();
        if self.counts.get(a).copied() != Some(k as u32) {
            return None;
        }
        if a.len() == self.dim + 1 {
            return Some(Move::new(a.clone(), Face::from_sorted(vec![self.next_fresh])));
        }
        let mut b: Vec<Vertex> = Vec::with_capacity(k);
        for f in self.star(a) {
            for &v in f.iter() {
                if !a.contains(&v) && !b.contains(&v) {
                    b.push(v);
                    if b.len() > k {
                        return None;
                    }
                }
            }
        }
        let b = Face::new(b);
        if b.len() != k || self.is_face(&b) {
            return None;
        }
        Some(Move::new(a.clone(), b))
    }

    /// Valid moves removing a face with `size` vertices, ordered by `a`.
    pub(crate) fn moves_of_size(&self, size: usize) -> Vec<Move> {
        self.candidates[size - 1]
            .iter()
            .filter_map(|a| self.move_at(a))
            .collect()
    }

    /// First valid move of the given class in lexicographic order.
    pub(crate) fn first_move_of_size(&self, size: usize) -> Option<Move> {
        self.candidates[size - 1].iter().find_map(|a| self.move_at(a))
    }

    pub(crate) fn all_moves(&self) -> Vec<Move> {
        (1..=self.dim + 1).flat_map(|s| self.moves_of_size(s)).collect()
    }

    pub(crate) fn check(&self, m: &Move) -> Result<()> {
        let bad = |why: &str| Err(Error::MoveNotApplicable(format!("{:?} -> {:?}: {why}", m.a.vertices(), m.b.vertices())));
        if m.a.is_empty() || m.b.is_empty() || m.a.len() + m.b.len() != self.dim + 2 {
            return bad("face sizes do not add up to d + 2");
        }
        if !m.a.is_disjoint(&m.b) {
            return bad("faces intersect");
        }
        if m.b.len() == 1 {
            if self.by_vertex.contains_key(&m.b[0]) {
                return bad("new vertex already in use");
            }
            if self.counts.get(&m.a) != Some(&1) {
                return bad("not a facet");
            }
            return Ok(());
        }
        match self.move_at(&m.a) {
            Some(found) if found.b == m.b => Ok(()),
            _ => bad("link is not the boundary of the complementary simplex or it is already a face"),
        }
    }

    pub(crate) fn apply(&mut self, m: &Move) -> Result<()> {
        self.check(m)?;
        self.apply_unchecked(m);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, m: &Move) {
        for x in m.b.iter() {
            let mut old = m.a.to_vec();
            old.extend(m.b.iter().filter(|&y| y != x));
            self.remove_facet(&Face::new(old));
        }
        for y in m.a.iter() {
            let mut new = m.b.to_vec();
            new.extend(m.a.iter().filter(|&x| x != y));
            self.insert_facet(Face::new(new));
        }
        if m.b.len() == 1 {
            self.next_fresh = self.next_fresh.max(m.b[0] + 1);
        }
    }

    /// Compacts to a complex; vertices keep their relative order.
    pub(crate) fn to_complex(&self, label_of: impl Fn(Vertex) -> Label) -> Complex {
        Complex::build(self.facets.iter().map(|f| f.to_vec()).collect(), label_of)
    }
}
