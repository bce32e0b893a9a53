//! Exact sparse linear algebra over the rationals.
//!
//! Rows are cleared to integers and reduced fraction-free (`a·r − b·p`,
//! followed by content removal). Pivots are chosen by smallest column, so
//! the echelon form depends only on the order in which rows are inserted;
//! nullspace bases are read off in reduced form (one vector per free column,
//! free entry 1, other free entries 0), which is independent of that order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{denominator_lcm, Rational};

/// Sorted sparse integer row.
pub type IntRow = Vec<(usize, BigInt)>;

/// Sparse rational vector, sorted by column.
pub type SparseVec = Vec<(usize, Rational)>;

/// Scale a sparse rational row to a primitive integer row with positive
/// leading coefficient. Zero entries are dropped; duplicate columns summed.
pub fn to_int_row(row: &[(usize, Rational)]) -> IntRow {
    let mut sorted: Vec<(usize, Rational)> = row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
    sorted.sort_by_key(|(c, _)| *c);
    let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(sorted.len());
    for (c, v) in sorted {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| !v.is_zero());
    let l = denominator_lcm(merged.iter().map(|(_, v)| v));
    let mut out: IntRow = merged
        .into_iter()
        .map(|(c, v)| (c, (v * BigRational::from_integer(l.clone())).to_integer()))
        .collect();
    normalize(&mut out);
    out
}

fn normalize(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// a·x − b·y on sorted sparse rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    pivots: Vec<Option<IntRow>>,
    rank: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduce `row` against the current pivots until its leading column is
    /// free; returns the remainder (empty when `row` is in the span).
    pub fn reduce(&self, mut row: IntRow) -> IntRow {
        while let Some((c, lead)) = row.first() {
            match &self.pivots[*c] {
                Some(p) => {
                    let a = p[0].1.clone();
                    let b = lead.clone();
                    let g = a.gcd(&b);
                    row = combine(&(&a / &g), &row, &(&b / &g), p);
                    normalize(&mut row);
                }
                None => break,
            }
        }
        row
    }

    /// Insert a row; returns true when the rank grows.
    pub fn insert(&mut self, row: IntRow) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some((c, _)) => {
                let c = *c;
                self.pivots[c] = Some(row);
                self.rank += 1;
                true
            }
        }
    }

    pub fn insert_rational(&mut self, row: &[(usize, Rational)]) -> bool {
        self.insert(to_int_row(row))
    }

    pub fn contains(&self, row: &[(usize, Rational)]) -> bool {
        self.reduce(to_int_row(row)).is_empty()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().enumerate().filter_map(|(c, p)| p.as_ref().map(|_| c))
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| self.pivots[*c].is_none()).collect()
    }

    /// Reduced nullspace basis: one vector per free column.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let free = self.free_columns();
        let pivots_desc: Vec<usize> = {
            let mut v: Vec<usize> = self.pivot_columns().collect();
            v.reverse();
            v
        };
        free.par_iter()
            .map(|&f| {
                let mut x: std::collections::BTreeMap<usize, Rational> = std::collections::BTreeMap::new();
                x.insert(f, Rational::one());
                for &c in &pivots_desc {
                    if c > f {
                        continue;
                    }
                    let row = self.pivots[c].as_ref().unwrap();
                    let mut acc = Rational::zero();
                    for (j, v) in row.iter().skip(1) {
                        if let Some(xj) = x.get(j) {
                            acc += xj * BigRational::from_integer(v.clone());
                        }
                    }
                    if !acc.is_zero() {
                        x.insert(c, -acc / BigRational::from_integer(row[0].1.clone()));
                    }
                }
                x.into_iter().collect()
            })
            .collect()
    }
}

/// Rank of a family of sparse rational vectors.
pub fn rank(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert_rational(&r);
    }
    e.rank()
}

/// Reduced basis of {x : A x = 0} for sparse rows of A.
pub fn nullspace(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert_rational(&r);
    }
    e.nullspace()
}

/// Inverse of a dense square rational matrix by Gauss–Jordan elimination.
pub fn invert_dense(a: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn dense_to_sparse(row: &[i64]) -> SparseVec {
        row.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, q(*v))).collect()
    }

    fn apply(row: &SparseVec, x: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        for (c, v) in row {
            if let Some((_, xv)) = x.iter().find(|(j, _)| j == c) {
                acc += v * xv;
            }
        }
        acc
    }

    #[test]
    fn small_nullspace() {
        // x0 + x1 + x2 = 0, x1 - x2 = 0  ->  free column 2: (-2, 1, 1)
        let rows = vec![dense_to_sparse(&[1, 1, 1]), dense_to_sparse(&[0, 1, -1])];
        let ns = nullspace(3, rows);
        assert_eq!(ns, vec![vec![(0, q(-2)), (1, q(1)), (2, q(1))]]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            dense_to_sparse(&[2, 4, 6]),
            dense_to_sparse(&[1, 2, 3]),
            dense_to_sparse(&[0, 0, 5]),
        ];
        assert_eq!(rank(3, rows), 2);
    }

    #[test]
    fn dense_inverse() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert_dense(&a).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert_eq!(invert_dense(&[vec![q(1), q(2)], vec![q(2), q(4)]]), Err(Error::Singular));
    }

    proptest! {
        #[test]
        fn nullspace_is_annihilated_and_complete(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 6), 0..6)
        ) {
            let sparse: Vec<SparseVec> = rows.iter().map(|r| dense_to_sparse(r)).collect();
            let r = rank(6, sparse.clone());
            let ns = nullspace(6, sparse.clone());
            prop_assert_eq!(r + ns.len(), 6);
            for x in &ns {
                for row in &sparse {
                    prop_assert!(apply(row, x).is_zero());
                }
            }
            // insertion order does not change the reduced basis
            let mut rev = sparse.clone();
            rev.reverse();
            prop_assert_eq!(nullspace(6, rev), ns);
        }
    }
}
