//! Numerical and algebraic invariants of complexes.

mod fundamental_group;
mod snf;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Complex, Face};

pub use fundamental_group::{abelianization, fundamental_group_presentation, GroupPresentation};
pub use snf::{rank_mod_p, smith_normal_form, IntegerMatrix, SnfResult};

/// Betti number and torsion coefficients of one homology group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u64, Vec<u64>)", into = "(u64, Vec<u64>)")]
pub struct HomologyEntry {
    pub betti: u64,
    pub torsion: Vec<u64>,
}

impl HomologyEntry {
    pub fn new(betti: u64, torsion: Vec<u64>) -> Self {
        HomologyEntry { betti, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl From<(u64, Vec<u64>)> for HomologyEntry {
    fn from((betti, torsion): (u64, Vec<u64>)) -> Self {
        HomologyEntry { betti, torsion }
    }
}

impl From<HomologyEntry> for (u64, Vec<u64>) {
    fn from(e: HomologyEntry) -> Self {
        (e.betti, e.torsion)
    }
}

impl fmt::Display for HomologyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[ {}, [ ", self.betti)?;
        let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
        if t.is_empty() {
            write!(f, "] ]")
        } else {
            write!(f, "{} ] ]", t.join(", "))
        }
    }
}

/// Integral homology in degrees `0..=dim`, reduced in degree zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyProfile {
    pub entries: Vec<HomologyEntry>,
}

impl HomologyProfile {
    pub fn new(entries: Vec<HomologyEntry>) -> Self {
        HomologyProfile { entries }
    }

    /// Shorthand for tests and fixtures: `[(betti, &[torsion...]), ...]`.
    pub fn from_pairs(pairs: &[(u64, &[u64])]) -> Self {
        HomologyProfile {
            entries: pairs
                .iter()
                .map(|(b, t)| HomologyEntry::new(*b, t.to_vec()))
                .collect(),
        }
    }

    pub fn get(&self, k: usize) -> Option<&HomologyEntry> {
        self.entries.get(k)
    }

    pub fn betti_numbers(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.betti).collect()
    }

    /// Homology of a `d`-sphere.
    pub fn sphere(d: usize) -> Self {
        let mut entries = vec![HomologyEntry::default(); d + 1];
        entries[d].betti = 1;
        HomologyProfile { entries }
    }

    pub fn is_sphere(&self) -> bool {
        let d = self.entries.len();
        d > 0 && *self == HomologyProfile::sphere(d - 1)
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[ {} ]", parts.join(", "))
    }
}

pub fn euler_characteristic(c: &Complex) -> i64 {
    c.cache().get_or_compute("euler_characteristic", || {
        c.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    })
}

/// Full h- and g-vectors (`h_0..h_{d+1}`, `g_0..g_{d+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HgVectors {
    pub h: Vec<i64>,
    pub g: Vec<i64>,
}

impl HgVectors {
    /// `h_1..h_{d+1}`, the leading `h_0 = 1` dropped.
    pub fn transcript_h(&self) -> Vec<i64> {
        self.h[1..].to_vec()
    }

    /// `g_1..g_{floor((d+2)/2)}`.
    pub fn transcript_g(&self) -> Vec<i64> {
        let d = self.h.len() as i64 - 2;
        let top = ((d + 2) / 2) as usize;
        self.g[1..=top.min(self.g.len() - 1)].to_vec()
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// h- and g-vectors of a pure complex with the given f-vector.
pub fn hg_from_f_vector(f: &[u64]) -> HgVectors {
    let d = f.len() as i64 - 1;
    let fm = |i: i64| if i == 0 { 1 } else { f[i as usize - 1] as i64 };
    let h: Vec<i64> = (0..=d + 1)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d + 1 - i, k - i) * fm(i)
                })
                .sum()
        })
        .collect();
    let g = std::iter::once(h[0])
        .chain(h.windows(2).map(|w| w[1] - w[0]))
        .collect();
    HgVectors { h, g }
}

pub fn hg_vectors(c: &Complex) -> Result<HgVectors> {
    if !c.is_pure() {
        return Err(Error::NotPure);
    }
    Ok(hg_from_f_vector(&c.f_vector()))
}

/// Boundary map from `k`-faces to `(k-1)`-faces; rows index the `k`-faces.
pub fn boundary_matrix(upper: &[Face], lower: &[Face]) -> IntegerMatrix {
    let index: HashMap<&Face, usize> = lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut triplets = Vec::with_capacity(upper.len() * upper.first().map_or(0, |f| f.len()));
    for (r, f) in upper.iter().enumerate() {
        for i in 0..f.len() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let face = f.without(f[i]);
            triplets.push((r, index[&face], BigInt::from(sign)));
        }
    }
    IntegerMatrix::from_triplets(upper.len(), lower.len(), triplets)
}

/// Reduced integral simplicial homology.
pub fn homology(c: &Complex) -> HomologyProfile {
    c.cache().get_or_compute("homology", || compute_homology(c))
}

fn compute_homology(c: &Complex) -> HomologyProfile {
    let faces = c.all_faces();
    if faces.is_empty() {
        return HomologyProfile::default();
    }
    let d = faces.len() - 1;
    // snfs[k] is the Smith form of the boundary map out of dimension k.
    let mut snfs: Vec<Option<SnfResult>> = vec![None; d + 2];
    for k in 1..=d {
        snfs[k] = Some(smith_normal_form(&boundary_matrix(&faces[k], &faces[k - 1])));
    }
    let rank = |k: usize| -> u64 {
        if k == 0 {
            1
        } else {
            snfs[k].as_ref().map_or(0, |s| s.rank as u64)
        }
    };
    let entries = (0..=d)
        .map(|k| {
            let betti = faces[k].len() as u64 - rank(k) - if k < d { rank(k + 1) } else { 0 };
            let torsion = snfs[k + 1]
                .as_ref()
                .map(|s| {
                    s.torsion()
                        .iter()
                        .map(|t| t.to_u64().expect("torsion coefficient fits in u64"))
                        .collect()
                })
                .unwrap_or_default();
            HomologyEntry { betti, torsion }
        })
        .collect();
    HomologyProfile { entries }
}

/// Reduced homology ranks with coefficients in `Z/p`, via modular elimination.
pub fn homology_mod_p(c: &Complex, p: u64) -> Vec<u64> {
    let faces = c.all_faces();
    if faces.is_empty() {
        return Vec::new();
    }
    let d = faces.len() - 1;
    let mut ranks = vec![0u64; d + 2];
    ranks[0] = 1;
    for k in 1..=d {
        ranks[k] = rank_mod_p(&boundary_matrix(&faces[k], &faces[k - 1]), p) as u64;
    }
    (0..=d)
        .map(|k| faces[k].len() as u64 - ranks[k] - ranks[k + 1])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientability {
    pub orientable: bool,
    /// Sign per facet, in facet order, when orientable.
    pub orientation: Option<Vec<i8>>,
}

/// Propagates facet orientations across ridges; two facets sharing a ridge
/// must induce opposite orientations on it.
pub fn orientability(c: &Complex) -> Result<Orientability> {
    if !c.structural_flags().is_pseudomanifold {
        return Err(Error::NotPseudomanifold);
    }
    let facets = c.facets();
    let ridges = c.ridge_index();
    let position = |f: &Face, r: &Face| -> usize {
        f.iter().position(|v| !r.contains(v)).expect("ridge is a proper subset")
    };
    let mut sign: Vec<i8> = vec![0; facets.len()];
    let mut adjacency: Vec<Vec<(&Face, usize)>> = vec![Vec::new(); facets.len()];
    for (r, fs) in ridges {
        if fs.len() == 2 {
            adjacency[fs[0]].push((r, fs[1]));
            adjacency[fs[1]].push((r, fs[0]));
        }
    }
    for start in 0..facets.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &(r, j) in &adjacency[i] {
                let pi = position(&facets[i], r);
                let pj = position(&facets[j], r);
                // induced sign on r from facet x is (-1)^(position) * sign[x]
                let want = -sign[i] * if (pi + pj) % 2 == 0 { 1 } else { -1 };
                if sign[j] == 0 {
                    sign[j] = want;
                    queue.push_back(j);
                } else if sign[j] != want {
                    return Ok(Orientability {
                        orientable: false,
                        orientation: None,
                    });
                }
            }
        }
    }
    Ok(Orientability {
        orientable: true,
        orientation: Some(sign),
    })
}

pub fn is_orientable(c: &Complex) -> Result<bool> {
    if let Some(v) = c.cache().get("orientable").and_then(|v| v.as_bool()) {
        return Ok(v);
    }
    let o = orientability(c)?.orientable;
    c.cache().publish("orientable", serde_json::Value::Bool(o));
    Ok(o)
}
