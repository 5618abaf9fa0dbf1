use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::snf::{smith_normal_form, IntegerMatrix};
use super::HomologyEntry;
use crate::error::{Error, Result};
use crate::kernel::{Complex, Vertex};

/// Finitely presented group. Words are lists of signed 1-based generator
/// indices; `-i` stands for the inverse of generator `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relators: Vec<Vec<i64>>,
}

/// Edge-path presentation: generators are the edges outside a breadth-first
/// spanning tree rooted at vertex 1, with one relator per triangle. Relators
/// whose edges all lie in the tree are kept as empty words.
pub fn fundamental_group_presentation(c: &Complex) -> Result<GroupPresentation> {
    if c.is_empty() {
        return Ok(GroupPresentation {
            generator_count: 0,
            relators: Vec::new(),
        });
    }
    if c.vertex_components() != 1 {
        return Err(Error::Disconnected);
    }
    let n = c.n_vertices();
    let edges = c.faces(1);
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for e in &edges {
        adjacency[e[0] as usize].push(e[1]);
        adjacency[e[1] as usize].push(e[0]);
    }
    for a in &mut adjacency {
        a.sort_unstable();
    }
    let mut tree: std::collections::HashSet<(Vertex, Vertex)> = Default::default();
    let mut seen = vec![false; n + 1];
    seen[1] = true;
    let mut queue = VecDeque::from([1 as Vertex]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let mut generator: HashMap<(Vertex, Vertex), i64> = HashMap::new();
    for e in &edges {
        let key = (e[0], e[1]);
        if !tree.contains(&key) {
            let next = generator.len() as i64 + 1;
            generator.insert(key, next);
        }
    }
    let letter = |a: Vertex, b: Vertex, inverse: bool| -> Option<i64> {
        generator.get(&(a, b)).map(|&g| if inverse { -g } else { g })
    };
    let relators = c
        .faces(2)
        .iter()
        .map(|t| {
            [
                letter(t[0], t[1], false),
                letter(t[1], t[2], false),
                letter(t[0], t[2], true),
            ]
            .into_iter()
            .flatten()
            .collect()
        })
        .collect();
    Ok(GroupPresentation {
        generator_count: generator.len(),
        relators,
    })
}

/// Rank and torsion of the abelianized group.
pub fn abelianization(p: &GroupPresentation) -> HomologyEntry {
    let mut triplets = Vec::new();
    for (r, word) in p.relators.iter().enumerate() {
        let mut exps: HashMap<usize, i64> = HashMap::new();
        for &l in word {
            *exps.entry(l.unsigned_abs() as usize - 1).or_default() += l.signum();
        }
        triplets.extend(exps.into_iter().map(|(g, e)| (r, g, BigInt::from(e))));
    }
    let m = IntegerMatrix::from_triplets(p.relators.len(), p.generator_count, triplets);
    let snf = smith_normal_form(&m);
    HomologyEntry {
        betti: (p.generator_count - snf.rank) as u64,
        torsion: snf
            .torsion()
            .iter()
            .map(|t| t.to_u64().expect("torsion coefficient fits in u64"))
            .collect(),
    }
}
