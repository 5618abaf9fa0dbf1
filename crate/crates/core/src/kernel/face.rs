use std::borrow::Borrow;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// 1-based vertex index.
pub type Vertex = u32;

/// A simplex as a strictly increasing list of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<Vertex>);

impl Borrow<[Vertex]> for Face {
    fn borrow(&self) -> &[Vertex] {
        &self.0
    }
}

impl Face {
    pub fn new(mut vertices: Vec<Vertex>) -> Face {
        vertices.sort_unstable();
        vertices.dedup();
        Face(vertices)
    }

    /// Wraps a list that is already strictly increasing.
    pub fn from_sorted(vertices: Vec<Vertex>) -> Face {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    /// Subset test; `other` need not be sorted.
    pub fn contains_all(&self, other: &[Vertex]) -> bool {
        other.len() <= self.0.len() && other.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    pub fn is_disjoint(&self, other: &[Vertex]) -> bool {
        other.iter().all(|v| self.0.binary_search(v).is_err())
    }

    pub fn union(&self, other: &[Vertex]) -> Face {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Face::new(v)
    }

    pub fn difference(&self, other: &[Vertex]) -> Face {
        Face(self.0.iter().copied().filter(|v| !other.contains(v)).collect())
    }

    pub fn without(&self, v: Vertex) -> Face {
        Face(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// All subsets with exactly `k` elements, in lexicographic order.
    pub fn subsets_of_size(&self, k: usize) -> Vec<Face> {
        let n = self.0.len();
        if k > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(Face(idx.iter().map(|&i| self.0[i]).collect()));
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Every nonempty subset, the face itself included.
    pub fn nonempty_subsets(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Face(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

impl Deref for Face {
    type Target = [Vertex];
    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}

impl From<Vec<Vertex>> for Face {
    fn from(v: Vec<Vertex>) -> Face {
        Face::new(v)
    }
}

impl<const N: usize> From<[Vertex; N]> for Face {
    fn from(v: [Vertex; N]) -> Face {
        Face::new(v.to_vec())
    }
}
