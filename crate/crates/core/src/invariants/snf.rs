//! Sparse Smith normal form over the integers.
//!
//! Elimination always pivots on an entry of minimal absolute value. The
//! kernel first runs on checked `i64` arithmetic and restarts on
//! arbitrary-precision integers if any intermediate value overflows.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse integer matrix in triplet form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    // sorted by (row, col), no zeros, no duplicates
    entries: Vec<(usize, usize, BigInt)>,
}

impl IntegerMatrix {
    /// Builds a matrix from triplets; duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> IntegerMatrix {
        let mut entries: Vec<(usize, usize, BigInt)> = triplets.into_iter().collect();
        for (r, c, _) in &entries {
            assert!(*r < rows && *c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
        }
        entries.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, BigInt)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| !e.2.is_zero());
        IntegerMatrix {
            rows,
            cols,
            entries: merged,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> IntegerMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntegerMatrix::from_triplets(
            rows.len(),
            cols,
            rows.iter().enumerate().flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(move |(j, &v)| (i, j, BigInt::from(v)))
            }),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, BigInt)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> IntegerMatrix {
        IntegerMatrix::from_triplets(
            self.cols,
            self.rows,
            self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal of the Smith form; each entry divides the next.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SnfResult {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let small: Option<Vec<(usize, usize, i64)>> = m
        .entries
        .iter()
        .map(|(r, c, v)| v.to_i64().map(|x| (*r, *c, x)))
        .collect();
    let diagonal = small
        .and_then(|t| Eliminator::<i64>::new(m.rows, m.cols, t).diagonalize())
        .unwrap_or_else(|| {
            Eliminator::<BigInt>::new(m.rows, m.cols, m.entries.clone())
                .diagonalize()
                .expect("big-integer elimination cannot overflow")
        });
    let invariant_factors = normalize_diagonal(diagonal);
    SnfResult {
        rank: invariant_factors.len(),
        invariant_factors,
    }
}

/// Turns a diagonal of positive integers into the equivalent chain of
/// invariant factors by repeated gcd/lcm exchange.
fn normalize_diagonal(diagonal: Vec<BigInt>) -> Vec<BigInt> {
    let (ones, mut rest): (Vec<BigInt>, Vec<BigInt>) = diagonal.into_iter().partition(|d| d.is_one());
    rest.sort();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if (&rest[j] % &rest[i]).is_zero() {
                continue;
            }
            let g = rest[i].gcd(&rest[j]);
            let l = &rest[i] / &g * &rest[j];
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = ones;
    out.extend(rest);
    out
}

/// Integer arithmetic the eliminator needs. Operations return `None` on
/// overflow so the caller can retry with a wider type.
trait Scalar: Clone + std::fmt::Debug {
    fn s_zero() -> Self;
    fn s_is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn lt_abs(&self, other: &Self) -> bool;
    /// `q` with `a - q * b` of absolute value below `|b|`.
    fn quotient(a: &Self, b: &Self) -> Option<Self>;
    /// `a - q * b`
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl Scalar for i64 {
    fn s_zero() -> Self {
        0
    }
    fn s_is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn lt_abs(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quotient(a: &Self, b: &Self) -> Option<Self> {
        a.checked_div_euclid(*b)
    }
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| a.checked_sub(p))
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Scalar for BigInt {
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn lt_abs(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn quotient(a: &Self, b: &Self) -> Option<Self> {
        Some(a.div_floor(b))
    }
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self> {
        Some(a - q * b)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

struct Eliminator<S: Scalar> {
    rows: Vec<Vec<(usize, S)>>,
    cols: Vec<BTreeSet<usize>>,
    live_rows: BTreeSet<usize>,
}

impl<S: Scalar> Eliminator<S> {
    fn new(nrows: usize, ncols: usize, triplets: Vec<(usize, usize, S)>) -> Self {
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); nrows];
        let mut cols = vec![BTreeSet::new(); ncols];
        for (r, c, v) in triplets {
            rows[r].push((c, v));
            cols[c].insert(r);
        }
        let live_rows = (0..nrows).filter(|&r| !rows[r].is_empty()).collect();
        Eliminator {
            rows,
            cols,
            live_rows,
        }
    }

    fn entry(&self, r: usize, c: usize) -> Option<&S> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    /// Entry of least absolute value; ties go to the sparsest row/column pair.
    fn pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, S, usize)> = None;
        for &r in &self.live_rows {
            let rlen = self.rows[r].len();
            for (c, v) in &self.rows[r] {
                let cost = (rlen - 1) * (self.cols[*c].len() - 1);
                let better = match &best {
                    None => true,
                    Some((_, _, bv, bcost)) => {
                        v.lt_abs(bv) || (!bv.lt_abs(v) && cost < *bcost)
                    }
                };
                if better {
                    let done = v.is_unit() && cost == 0;
                    best = Some((r, *c, v.clone(), cost));
                    if done {
                        return Some((r, *c));
                    }
                }
            }
        }
        best.map(|(r, c, _, _)| (r, c))
    }

    /// `row[target] -= q * row[source]`
    fn row_op(&mut self, target: usize, q: &S, source: usize) -> Option<()> {
        let src = std::mem::take(&mut self.rows[source]);
        let tgt = std::mem::take(&mut self.rows[target]);
        let mut out = Vec::with_capacity(src.len() + tgt.len());
        let (mut i, mut j) = (0, 0);
        let zero_like = |v: &S| v.s_is_zero();
        while i < tgt.len() || j < src.len() {
            let tc = tgt.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let sc = src.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            if tc < sc {
                out.push(tgt[i].clone());
                i += 1;
            } else if sc < tc {
                let neg = S::sub_mul(&S::s_zero(), q, &src[j].1)?;
                if !zero_like(&neg) {
                    self.cols[sc].insert(target);
                    out.push((sc, neg));
                }
                j += 1;
            } else {
                let v = S::sub_mul(&tgt[i].1, q, &src[j].1)?;
                if zero_like(&v) {
                    self.cols[tc].remove(&target);
                } else {
                    out.push((tc, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[source] = src;
        self.rows[target] = out;
        if self.rows[target].is_empty() {
            self.live_rows.remove(&target);
        } else {
            self.live_rows.insert(target);
        }
        Some(())
    }

    fn drop_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
        }
        self.live_rows.remove(&r);
    }

    fn diagonalize(mut self) -> Option<Vec<BigInt>> {
        let mut diagonal = Vec::new();
        while let Some((r, c)) = self.pivot() {
            let p = self.entry(r, c).cloned().expect("pivot present");
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
            let mut clean = true;
            for i in others {
                let a = self.entry(i, c).cloned().expect("column index in sync");
                let q = S::quotient(&a, &p)?;
                self.row_op(i, &q, r)?;
                if self.entry(i, c).is_some() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            if p.is_unit() {
                diagonal.push(BigInt::one());
                self.drop_row(r);
                continue;
            }
            // Column c holds only the pivot, so column operations touch row r alone.
            let mut row = std::mem::take(&mut self.rows[r]);
            for e in row.iter_mut() {
                if e.0 != c {
                    let q = S::quotient(&e.1, &p)?;
                    e.1 = S::sub_mul(&e.1, &q, &p)?;
                    if e.1.s_is_zero() {
                        self.cols[e.0].remove(&r);
                    } else {
                        clean = false;
                    }
                }
            }
            row.retain(|e| !e.1.s_is_zero());
            self.rows[r] = row;
            if clean {
                diagonal.push(p.into_big().abs());
                self.drop_row(r);
            }
        }
        Some(diagonal)
    }
}

/// Rank over the prime field `Z/p`, by plain echelon insertion. Kept
/// independent of the Smith form so each can check the other.
pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> usize {
    assert!(p >= 2, "modulus must be at least 2");
    let pb = BigInt::from(p);
    let reduce = |v: &BigInt| -> u64 { v.mod_floor(&pb).to_u64().expect("reduced below p") };
    let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); m.rows];
    for (r, c, v) in &m.entries {
        let x = reduce(v);
        if x != 0 {
            rows[*r].push((*c, x));
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| -> u64 {
        // Fermat; p is assumed prime
        let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> = Default::default();
    for mut row in rows {
        while let Some(&(lead, val)) = row.first() {
            match pivots.get(&lead) {
                Some(prow) => {
                    // prow is normalized to leading 1
                    let factor = val;
                    let mut out = Vec::with_capacity(row.len() + prow.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < prow.len() {
                        let rc = row.get(i).map_or(usize::MAX, |e| e.0);
                        let pc = prow.get(j).map_or(usize::MAX, |e| e.0);
                        if rc < pc {
                            out.push(row[i]);
                            i += 1;
                        } else if pc < rc {
                            out.push((pc, (p - mulmod(factor, prow[j].1)) % p));
                            j += 1;
                        } else {
                            let x = (row[i].1 + p - mulmod(factor, prow[j].1)) % p;
                            if x != 0 {
                                out.push((rc, x));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
                None => {
                    let s = inv(val);
                    for e in row.iter_mut() {
                        e.1 = mulmod(e.1, s);
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntegerMatrix::from_dense(rows))
            .invariant_factors
            .iter()
            .map(|f| f.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn two_by_two() {
        // d1 = gcd(2,4,6,8) = 2, d1*d2 = |det| = 8
        assert_eq!(factors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(factors(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        let z = smith_normal_form(&IntegerMatrix::zeros(3, 4));
        assert!(z.invariant_factors.is_empty());
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn diagonal_is_normalized() {
        assert_eq!(factors(&[vec![4, 0], vec![0, 6]]), vec![2, 12]);
        assert_eq!(factors(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]), vec![1, 1, 30]);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // eliminating the first column doubles i64::MAX
        let m = IntegerMatrix::from_dense(&[vec![1, i64::MAX], vec![-1, i64::MAX]]);
        let r = smith_normal_form(&m);
        assert_eq!(
            r.invariant_factors,
            vec![BigInt::one(), BigInt::from(i64::MAX) * 2]
        );
    }

    #[test]
    fn triplets_are_merged() {
        let m = IntegerMatrix::from_triplets(
            2,
            2,
            [(0, 0, BigInt::from(1)), (0, 0, BigInt::from(-1)), (1, 1, BigInt::from(3))],
        );
        assert_eq!(m.entries().len(), 1);
        assert_eq!(m.transpose().entries()[0].0, 1);
    }

    #[test]
    fn modular_rank() {
        let m = IntegerMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(rank_mod_p(&m, 2), 0);
        assert_eq!(rank_mod_p(&m, 3), 2);
        let m = IntegerMatrix::from_dense(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
        })
    }

    fn mix(rows: &mut [Vec<i64>], ops: &[(usize, usize, i64)], by_rows: bool) {
        let n = if by_rows { rows.len() } else { rows[0].len() };
        for &(a, b, k) in ops {
            let (a, b) = (a % n, b % n);
            if a == b {
                continue;
            }
            if by_rows {
                let src = rows[b].clone();
                for (x, y) in rows[a].iter_mut().zip(src) {
                    *x += k * y;
                }
            } else {
                for row in rows.iter_mut() {
                    row[a] += k * row[b];
                }
            }
        }
    }

    proptest! {
        #[test]
        fn invariant_under_unimodular_mixing(
            m in matrix_strategy(),
            row_ops in proptest::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..6),
            col_ops in proptest::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..6),
        ) {
            let base = factors(&m);
            let mut mixed = m.clone();
            mix(&mut mixed, &row_ops, true);
            mix(&mut mixed, &col_ops, false);
            prop_assert_eq!(base, factors(&mixed));
        }

        #[test]
        fn divisibility_chain_and_mod_p_agreement(m in matrix_strategy()) {
            let snf = smith_normal_form(&IntegerMatrix::from_dense(&m));
            for w in snf.invariant_factors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            for p in [2u64, 3, 5, 7] {
                let expected = snf
                    .invariant_factors
                    .iter()
                    .filter(|f| !(*f % p).is_zero())
                    .count();
                prop_assert_eq!(rank_mod_p(&IntegerMatrix::from_dense(&m), p), expected);
            }
        }
    }
}
