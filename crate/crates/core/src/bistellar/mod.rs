//! Bistellar moves, randomization, reduction, isomorphism and equivalence.

mod isomorphism;
mod reduce;
mod workspace;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Complex, Face, Label, Vertex};
use crate::rng;

pub use isomorphism::{face_isomorphism, is_isomorphic};
pub use reduce::{
    bistellarly_equivalent, is_combinatorial_manifold, is_sphere, reduce, Equivalence,
    EquivalenceCertificate, ManifoldCheck, Reducer, Reduction, ReductionOptions, ReductionTarget,
    StepOutcome,
};
pub(crate) use reduce::equivalent_workspaces;
pub(crate) use workspace::Workspace;

/// A bistellar move replacing `a * ∂b` by `∂a * b`.
///
/// When `b` is a single vertex the move subdivides the facet `a`. On a
/// [`Complex`] the new vertex is inserted at position `b[0]` (any value in
/// `1..=n+1`) and `label`, if present, becomes its label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub a: Face,
    pub b: Face,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

impl Move {
    pub fn new(a: Face, b: Face) -> Move {
        Move { a, b, label: None }
    }

    /// Dimension of the removed face.
    pub fn dim_class(&self) -> usize {
        self.a.len() - 1
    }

    /// The move undoing `self`, expressed in the vertex numbering of
    /// `apply_move(before, self)`.
    pub fn inverse(&self, before: &Complex) -> Move {
        if self.b.len() == 1 {
            let v = self.b[0];
            let shifted = self.a.iter().map(|&w| if w >= v { w + 1 } else { w }).collect();
            return Move::new(Face::from_sorted(vec![v]), Face::new(shifted));
        }
        if self.a.len() == 1 {
            let v = self.a[0];
            let shifted = self.b.iter().map(|&w| if w > v { w - 1 } else { w }).collect();
            return Move {
                a: Face::new(shifted),
                b: Face::from_sorted(vec![v]),
                label: Some(before.label(v).clone()),
            };
        }
        Move::new(self.b.clone(), self.a.clone())
    }
}

/// All valid moves, optionally restricted to one `dim_class`. Subdivisions
/// of facets use the fresh vertex `n + 1`. Sorted by `(|a|, a)`.
pub fn valid_moves(c: &Complex, dim_class: Option<usize>) -> Result<Vec<Move>> {
    let ws = Workspace::from_complex(c)?;
    Ok(match dim_class {
        Some(i) if i <= ws.dim() => ws.moves_of_size(i + 1),
        Some(_) => Vec::new(),
        None => ws.all_moves(),
    })
}

pub fn apply_move(c: &Complex, m: &Move) -> Result<Complex> {
    let ws = Workspace::from_complex(c)?;
    let n = c.n_vertices() as Vertex;
    if m.b.len() == 1 {
        let v = m.b[0];
        if v == 0 || v > n + 1 {
            return Err(Error::MoveNotApplicable(format!(
                "new vertex position {v} outside 1..={}",
                n + 1
            )));
        }
        ws.check(&Move::new(m.a.clone(), Face::from_sorted(vec![n + 1])))?;
        let shift = |w: Vertex| if w >= v { w + 1 } else { w };
        let a: Vec<Vertex> = m.a.iter().map(|&w| shift(w)).collect();
        let mut sets: Vec<Vec<Vertex>> = c
            .facets()
            .iter()
            .filter(|f| **f != m.a)
            .map(|f| f.iter().map(|&w| shift(w)).collect())
            .collect();
        for &y in &a {
            let mut s: Vec<Vertex> = a.iter().copied().filter(|&x| x != y).collect();
            s.push(v);
            sets.push(s);
        }
        let label = m.label.clone().unwrap_or_else(|| Label::Int(c.next_int_label()));
        let out = Complex::build(sets, |w| match w.cmp(&v) {
            std::cmp::Ordering::Less => c.label(w).clone(),
            std::cmp::Ordering::Equal => label.clone(),
            std::cmp::Ordering::Greater => c.label(w - 1).clone(),
        });
        return Ok(carry_name(out, c));
    }
    let mut ws = ws;
    ws.apply(m)?;
    Ok(carry_name(ws.to_complex(|w| c.label(w).clone()), c))
}

fn carry_name(mut out: Complex, c: &Complex) -> Complex {
    if let Some(name) = c.name() {
        out.set_name(name);
    }
    out
}

/// Labels for a complex derived from `c` by moves in stable ids: original
/// vertices keep theirs, fresh vertices count up from `c`'s integer labels.
pub(crate) fn derived_labels(c: &Complex) -> impl Fn(Vertex) -> Label + '_ {
    let n = c.n_vertices() as Vertex;
    let base = c.next_int_label();
    move |w| {
        if w <= n {
            c.label(w).clone()
        } else {
            Label::Int(base + (w - n - 1) as i64)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Randomized {
    pub complex: Complex,
    /// Moves applied, in the stable vertex ids of the input.
    pub moves: Vec<Move>,
}

/// Applies `n_moves` moves, each drawn uniformly from the currently valid
/// ones. Stops early if no move is valid.
pub fn randomize(c: &Complex, n_moves: usize, seed: u64) -> Result<Randomized> {
    let mut ws = Workspace::from_complex(c)?;
    let mut rng = rng::seeded(seed);
    let mut moves = Vec::with_capacity(n_moves);
    for _ in 0..n_moves {
        let options = ws.all_moves();
        if options.is_empty() {
            break;
        }
        let m = options[rng.gen_range(0..options.len())].clone();
        ws.apply_unchecked(&m);
        moves.push(m);
    }
    Ok(Randomized {
        complex: carry_name(ws.to_complex(derived_labels(c)), c),
        moves,
    })
}

/// Applies a move log in stable ids (as produced by [`randomize`] and
/// [`reduce`]) and compacts the result.
pub fn replay(c: &Complex, moves: &[Move]) -> Result<Complex> {
    let mut ws = Workspace::from_complex(c)?;
    for m in moves {
        ws.apply(m)?;
    }
    Ok(carry_name(ws.to_complex(derived_labels(c)), c))
}

/// f-vector change of a move with `|a| = a_size` in dimension `d`. Faces
/// containing `a` and a proper subset of `b` vanish; faces containing `b`
/// and a proper subset of `a` appear.
pub fn pachner_delta(d: usize, a_size: usize) -> Vec<i64> {
    let b_size = d + 2 - a_size;
    let binom = |n: usize, k: usize| -> i64 {
        if k > n {
            0
        } else {
            (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
        }
    };
    let count = |keep: usize, other: usize, k: usize| -> i64 {
        let need = (k + 1).checked_sub(keep);
        match need {
            Some(j) if j < other => binom(other, j),
            _ => 0,
        }
    };
    (0..=d)
        .map(|k| count(b_size, a_size, k) - count(a_size, b_size, k))
        .collect()
}
