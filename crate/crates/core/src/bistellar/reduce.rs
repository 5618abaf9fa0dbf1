use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::hash::{Hash, Hasher};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::isomorphism::face_isomorphism;
use super::{derived_labels, Move, Workspace};
use crate::error::{Error, Result};
use crate::invariants::{homology, HomologyProfile};
use crate::kernel::{Complex, Face, Label, Vertex};
use crate::rng::{self, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionTarget {
    FVector(Vec<u64>),
    Complex(Vec<Face>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionOptions {
    pub rounds: usize,
    /// Non-improving rounds before a heating phase starts.
    pub heating: usize,
    /// Random non-reducing moves per heating phase.
    pub relaxation: usize,
    pub seed: u64,
    pub target: Option<ReductionTarget>,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            rounds: 5000,
            heating: 50,
            relaxation: 15,
            seed: 0,
            target: None,
        }
    }
}

impl ReductionOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub complex: Complex,
    /// Moves leading from the input to `complex`, in stable vertex ids.
    pub moves: Vec<Move>,
    /// Reached the target, or `d + 2` vertices when no target was given.
    pub converged: bool,
    pub rounds: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// The reversed f-vector dropped below the best seen so far.
    Improved,
    /// Back at the best f-vector with a different facet set.
    Level,
    Continue,
    Finished,
}

/// Simulated-annealing reducer that can be driven one round at a time.
///
/// Each round applies the reducing move with the smallest removed face
/// (ties broken lexicographically). Without one, or during a heating phase,
/// a uniformly random move that does not shrink the facet count is applied
/// instead. Facets are only subdivided when no other such move exists.
#[derive(Clone, Debug)]
pub struct Reducer {
    ws: Workspace,
    rng: Rng,
    opts: ReductionOptions,
    round: usize,
    stall: usize,
    heat: usize,
    log: Vec<Move>,
    best_key: Vec<u64>,
    best_facets: Vec<Face>,
    best_log_len: usize,
    converged: bool,
    finished: bool,
}

fn key(f: &[u64]) -> Vec<u64> {
    f.iter().rev().copied().collect()
}

impl Reducer {
    pub fn new(c: &Complex, opts: ReductionOptions) -> Result<Reducer> {
        let ws = Workspace::from_complex(c)?;
        Ok(Reducer::from_workspace(ws, opts))
    }

    pub(crate) fn from_workspace(ws: Workspace, opts: ReductionOptions) -> Reducer {
        let best_key = key(&ws.f_vector());
        let best_facets = ws.facets().iter().cloned().collect();
        let mut r = Reducer {
            rng: rng::seeded(opts.seed),
            ws,
            opts,
            round: 0,
            stall: 0,
            heat: 0,
            log: Vec::new(),
            best_key,
            best_facets,
            best_log_len: 0,
            converged: false,
            finished: false,
        };
        if r.done() {
            r.converged = true;
            r.finished = true;
        }
        r
    }

    fn done(&self) -> bool {
        match &self.opts.target {
            None => self.ws.n_vertices() <= self.ws.dim() + 2,
            Some(ReductionTarget::FVector(f)) => self.ws.f_vector() == *f,
            Some(ReductionTarget::Complex(target)) => {
                target.len() == self.ws.facets().len()
                    && face_isomorphism(&self.current_facets(), target).is_some()
            }
        }
    }

    pub fn current_facets(&self) -> Vec<Face> {
        self.ws.facets().iter().cloned().collect()
    }

    pub fn current_f_vector(&self) -> Vec<u64> {
        self.ws.f_vector()
    }

    pub fn best_facets(&self) -> &[Face] {
        &self.best_facets
    }

    pub fn best_f_vector(&self) -> Vec<u64> {
        key(&self.best_key)
    }

    pub fn log(&self) -> &[Move] {
        &self.log
    }

    pub fn rounds(&self) -> usize {
        self.round
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    fn reducing_move(&self) -> Option<Move> {
        let d = self.ws.dim();
        (1..=d + 1)
            .take_while(|&s| 2 * s < d + 2)
            .find_map(|s| self.ws.first_move_of_size(s))
    }

    fn random_move(&mut self) -> Option<Move> {
        let d = self.ws.dim();
        let mut pool: Vec<Move> = (1..=d)
            .filter(|&s| 2 * s >= d + 2)
            .flat_map(|s| self.ws.moves_of_size(s))
            .collect();
        if pool.is_empty() {
            pool = self.ws.moves_of_size(d + 1);
        }
        if pool.is_empty() {
            return None;
        }
        let i = self.rng.gen_range(0..pool.len());
        Some(pool[i].clone())
    }

    pub fn step(&mut self) -> StepOutcome {
        if self.finished {
            return StepOutcome::Finished;
        }
        if self.round >= self.opts.rounds {
            self.finished = true;
            return StepOutcome::Finished;
        }
        self.round += 1;
        let m = if self.heat > 0 {
            self.heat -= 1;
            self.random_move()
        } else {
            self.reducing_move().or_else(|| self.random_move())
        };
        let Some(m) = m else {
            self.finished = true;
            return StepOutcome::Finished;
        };
        self.ws.apply_unchecked(&m);
        self.log.push(m);
        let k = key(&self.ws.f_vector());
        let outcome = if k < self.best_key {
            self.best_key = k;
            self.best_facets = self.current_facets();
            self.best_log_len = self.log.len();
            self.stall = 0;
            StepOutcome::Improved
        } else {
            self.stall += 1;
            if self.stall >= self.opts.heating {
                self.stall = 0;
                self.heat = self.opts.relaxation;
            }
            if k == self.best_key {
                StepOutcome::Level
            } else {
                StepOutcome::Continue
            }
        };
        if self.done() {
            self.best_key = key(&self.ws.f_vector());
            self.best_facets = self.current_facets();
            self.best_log_len = self.log.len();
            self.converged = true;
            self.finished = true;
        }
        outcome
    }

    pub fn run(&mut self) {
        while self.step() != StepOutcome::Finished {}
    }

    /// Moves from the input to the best complex.
    pub fn best_moves(&self) -> &[Move] {
        &self.log[..self.best_log_len]
    }
}

/// Reduces the facet count (and with it the vertex count) by bistellar
/// moves. Never returns a complex with larger reversed f-vector.
pub fn reduce(c: &Complex, opts: &ReductionOptions) -> Result<Reduction> {
    let mut r = Reducer::new(c, opts.clone())?;
    r.run();
    let sets = r.best_facets.iter().map(|f| f.to_vec()).collect();
    let mut complex = Complex::build(sets, derived_labels(c));
    if let Some(name) = c.name() {
        complex.set_name(name);
    }
    Ok(Reduction {
        complex,
        moves: r.best_moves().to_vec(),
        converged: r.converged,
        rounds: r.round,
    })
}

/// Two reduction runs that met in isomorphic complexes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceCertificate {
    /// Moves on the first complex, in its stable vertex ids.
    pub moves_first: Vec<Move>,
    pub moves_second: Vec<Move>,
    /// Vertex map from the first reduced complex onto the second.
    pub isomorphism: BTreeMap<Vertex, Vertex>,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Equivalence {
    Equivalent(EquivalenceCertificate),
    /// No common reduction was found; this is not a proof of inequivalence.
    NotEstablished,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

struct Snapshot {
    f: Vec<u64>,
    facets: Vec<Face>,
    log_len: usize,
}

/// Snapshots kept per f-vector level and trajectory.
const LEVEL_SNAPSHOTS: usize = 64;

struct Trajectory {
    reducer: Reducer,
    snapshots: Vec<Snapshot>,
    seen: HashSet<u64>,
    level: Vec<u64>,
    at_level: usize,
}

impl Trajectory {
    fn new(reducer: Reducer) -> Trajectory {
        let mut t = Trajectory {
            snapshots: Vec::new(),
            seen: HashSet::new(),
            level: reducer.current_f_vector(),
            at_level: 0,
            reducer,
        };
        t.record();
        t
    }

    /// Records the current state unless already seen; returns its index.
    fn record(&mut self) -> Option<usize> {
        let facets = self.reducer.current_facets();
        let mut h = DefaultHasher::new();
        facets.hash(&mut h);
        if !self.seen.insert(h.finish()) {
            return None;
        }
        let f = self.reducer.current_f_vector();
        if f != self.level {
            self.level = f.clone();
            self.at_level = 0;
        }
        if self.at_level >= LEVEL_SNAPSHOTS {
            return None;
        }
        self.at_level += 1;
        self.snapshots.push(Snapshot {
            f,
            facets,
            log_len: self.reducer.log().len(),
        });
        Some(self.snapshots.len() - 1)
    }

    fn advance(&mut self) -> Option<Option<usize>> {
        match self.reducer.step() {
            StepOutcome::Finished => None,
            StepOutcome::Improved | StepOutcome::Level => Some(self.record()),
            StepOutcome::Continue => Some(None),
        }
    }
}

fn find_match(snap: &Snapshot, other: &Trajectory) -> Option<(usize, BTreeMap<Vertex, Vertex>)> {
    other
        .snapshots
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, s)| s.f == snap.f)
        .find_map(|(i, s)| face_isomorphism(&snap.facets, &s.facets).map(|m| (i, m.into_iter().collect())))
}

/// Reduces both complexes side by side and compares every improvement of
/// one trajectory with the states visited by the other.
pub fn bistellarly_equivalent(
    c1: &Complex,
    c2: &Complex,
    opts: &ReductionOptions,
) -> Result<Equivalence> {
    if c1.is_empty() || c2.is_empty() || c1.dim() != c2.dim() {
        return Ok(Equivalence::NotEstablished);
    }
    if homology(c1) != homology(c2) {
        return Ok(Equivalence::NotEstablished);
    }
    Ok(
        match equivalent_workspaces(Workspace::from_complex(c1)?, Workspace::from_complex(c2)?, opts) {
            Some(cert) => Equivalence::Equivalent(cert),
            None => Equivalence::NotEstablished,
        },
    )
}

/// Core of [`bistellarly_equivalent`] on workspaces with arbitrary ids.
pub(crate) fn equivalent_workspaces(
    w1: Workspace,
    w2: Workspace,
    opts: &ReductionOptions,
) -> Option<EquivalenceCertificate> {
    let mut opts = opts.clone();
    opts.target = None;
    let mut first = Trajectory::new(Reducer::from_workspace(w1, opts.clone()));
    let mut second = Trajectory::new(Reducer::from_workspace(w2, opts.clone().with_seed(opts.seed.wrapping_add(1))));
    let certificate = |a: &Trajectory, ia: usize, b: &Trajectory, ib: usize, iso, swap: bool| {
        let ma = a.reducer.log()[..a.snapshots[ia].log_len].to_vec();
        let mb = b.reducer.log()[..b.snapshots[ib].log_len].to_vec();
        let rounds = a.reducer.rounds() + b.reducer.rounds();
        let iso: BTreeMap<Vertex, Vertex> = iso;
        if swap {
            EquivalenceCertificate {
                moves_first: mb,
                moves_second: ma,
                isomorphism: iso.into_iter().map(|(x, y)| (y, x)).collect(),
                rounds,
            }
        } else {
            EquivalenceCertificate {
                moves_first: ma,
                moves_second: mb,
                isomorphism: iso,
                rounds,
            }
        }
    };
    if let Some((j, iso)) = find_match(&first.snapshots[0], &second) {
        return Some(certificate(&first, 0, &second, j, iso, false));
    }
    loop {
        let mut active = false;
        if let Some(rec) = first.advance() {
            active = true;
            if let Some(i) = rec {
                if let Some((j, iso)) = find_match(&first.snapshots[i], &second) {
                    return Some(certificate(&first, i, &second, j, iso, false));
                }
            }
        }
        if let Some(rec) = second.advance() {
            active = true;
            if let Some(j) = rec {
                if let Some((i, iso)) = find_match(&second.snapshots[j], &first) {
                    return Some(certificate(&second, j, &first, i, iso, true));
                }
            }
        }
        if !active {
            return None;
        }
    }
}

/// Certifies that `c` is a PL sphere by reducing it to the boundary of a
/// simplex. `false` means "not established".
pub fn is_sphere(c: &Complex, opts: &ReductionOptions) -> Result<bool> {
    if c.is_empty() {
        return Ok(false);
    }
    let d = c.dim();
    if d == 0 {
        return Ok(c.n_vertices() == 2);
    }
    if !c.structural_flags().is_closed_pseudomanifold() {
        return Ok(false);
    }
    if homology(c) != HomologyProfile::sphere(d as usize) {
        return Ok(false);
    }
    let mut opts = opts.clone();
    opts.target = None;
    let r = reduce(c, &opts)?;
    Ok(r.converged && r.complex.n_vertices() == d as usize + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldCheck {
    /// Every vertex link was reduced to the boundary of a simplex (or, at
    /// the boundary, closed up by a cone to such a sphere).
    Manifold,
    Unknown,
}

/// Heuristic combinatorial-manifold test over all vertex links.
pub fn is_combinatorial_manifold(c: &Complex, opts: &ReductionOptions) -> Result<ManifoldCheck> {
    if !c.is_pure() {
        return Err(Error::NotPure);
    }
    if !c.structural_flags().is_pseudomanifold {
        return Err(Error::NotPseudomanifold);
    }
    for v in 1..=c.n_vertices() as Vertex {
        let link = c.link(&[v])?;
        if link.dim() <= 0 {
            if link.n_vertices() > 2 {
                return Ok(ManifoldCheck::Unknown);
            }
            continue;
        }
        let closed = if link.structural_flags().has_boundary {
            close_up(&link)
        } else {
            link
        };
        if !is_sphere(&closed, opts)? {
            return Ok(ManifoldCheck::Unknown);
        }
    }
    Ok(ManifoldCheck::Manifold)
}

/// `link ∪ cone(∂link)`: a sphere exactly when `link` is a ball.
fn close_up(link: &Complex) -> Complex {
    let apex = link.n_vertices() as Vertex + 1;
    let mut sets: Vec<Vec<Vertex>> = link.facets().iter().map(|f| f.to_vec()).collect();
    for (ridge, fs) in link.ridge_index() {
        if fs.len() == 1 {
            let mut s = ridge.to_vec();
            s.push(apex);
            sets.push(s);
        }
    }
    Complex::build(sets, |w| Label::Int(w as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bistellar::{is_isomorphic, randomize};
    use crate::generators::{boundary_simplex, cross_polytope, cyclic_polytope_boundary, simplex};

    #[test]
    fn simplex_boundary_is_a_fixpoint() {
        let c = boundary_simplex(4).unwrap();
        let r = reduce(&c, &ReductionOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.moves.is_empty());
        assert_eq!(r.complex, c);
    }

    #[test]
    fn octahedron_reduces_to_tetrahedron_boundary() {
        let r = reduce(&cross_polytope(3).unwrap(), &ReductionOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.complex.f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn randomized_sphere_comes_back() {
        let c = boundary_simplex(4).unwrap();
        let messy = randomize(&c, 50, 5).unwrap().complex;
        let r = reduce(&messy, &ReductionOptions::default().with_seed(5)).unwrap();
        assert!(r.converged);
        assert!(is_isomorphic(&r.complex, &c).is_some());
    }

    #[test]
    fn equivalence_of_spheres() {
        let c = boundary_simplex(4).unwrap();
        let messy = randomize(&c, 30, 2).unwrap().complex;
        let eq = bistellarly_equivalent(&c, &messy, &ReductionOptions::default()).unwrap();
        assert!(eq.is_equivalent());
        let other = cyclic_polytope_boundary(4, 8).unwrap();
        assert!(bistellarly_equivalent(&messy, &other, &ReductionOptions::default())
            .unwrap()
            .is_equivalent());
    }

    #[test]
    fn manifolds() {
        let opts = ReductionOptions::default();
        assert_eq!(
            is_combinatorial_manifold(&cyclic_polytope_boundary(4, 10).unwrap(), &opts).unwrap(),
            ManifoldCheck::Manifold
        );
        assert_eq!(
            is_combinatorial_manifold(&simplex(3), &opts).unwrap(),
            ManifoldCheck::Manifold
        );
        for d in 2..=5 {
            assert_eq!(
                is_combinatorial_manifold(&boundary_simplex(d).unwrap(), &opts).unwrap(),
                ManifoldCheck::Manifold
            );
        }
    }
}
