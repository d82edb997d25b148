//! Sparse exact linear algebra over the rationals: incremental row echelon
//! form, rank, kernels and consistency of linear systems.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::series::Rational;

/// A sparse vector as `(column, value)` pairs, strictly increasing in column,
/// with no zero values.
pub type SparseRow = Vec<(usize, Rational)>;

/// Builds a canonical sparse row from arbitrary `(column, value)` terms,
/// summing duplicates and dropping zeros.
pub fn sparse_row<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> SparseRow {
    let mut v: Vec<(usize, Rational)> = terms.into_iter().collect();
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a - f b`.
fn axpy(a: &[(usize, Rational)], f: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form built one row at a time. Pivot rows are stored with
/// leading coefficient 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` until its leading column is not a pivot column.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((lead, c)) = row.first() {
            match self.pivots.get(lead) {
                Some(p) => {
                    let f = c.clone();
                    row = axpy(&row, &f, p);
                }
                None => break,
            }
        }
        row
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((lead, c)) = row.first() else {
            return false;
        };
        let lead = *lead;
        let inv = c.recip();
        let row: SparseRow = row.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pivots.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// Basis of `{x : r . x = 0 for every inserted row r}` in a space of
    /// dimension `ncols`.
    pub fn kernel_basis(&self, ncols: usize) -> Vec<SparseRow> {
        // Back-substitute to reduced row echelon form.
        let cols = self.pivot_columns();
        let mut reduced: HashMap<usize, SparseRow> = HashMap::new();
        for &c in cols.iter().rev() {
            let mut row = self.pivots[&c].clone();
            loop {
                let hit = row.iter().skip(1).find(|(k, _)| reduced.contains_key(k)).map(|(k, x)| (*k, x.clone()));
                match hit {
                    Some((k, x)) => row = axpy(&row, &x, &reduced[&k]),
                    None => break,
                }
            }
            reduced.insert(c, row);
        }
        let is_pivot: Vec<bool> = (0..ncols).map(|c| reduced.contains_key(&c)).collect();
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![(free, Rational::one())];
            for (&pc, row) in &reduced {
                if let Some((_, x)) = row.iter().find(|(k, _)| *k == free) {
                    v.push((pc, -x.clone()));
                }
            }
            basis.push(sparse_row(v));
        }
        basis
    }
}

/// Rank of a list of sparse rows.
pub fn rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Whether `A x = b` has a solution, with rows of `A` given sparsely and
/// `b` given per row.
pub fn is_consistent(rows: &[SparseRow], rhs: &[Rational]) -> bool {
    assert_eq!(rows.len(), rhs.len());
    let rhs_col = rows.iter().flat_map(|r| r.iter().map(|(c, _)| *c)).max().map_or(0, |c| c + 1);
    let mut plain = Echelon::new();
    let mut aug = Echelon::new();
    for (r, b) in rows.iter().zip(rhs) {
        plain.insert(r.clone());
        let mut ra = r.clone();
        if !b.is_zero() {
            ra.push((rhs_col, b.clone()));
        }
        aug.insert(ra);
    }
    plain.rank() == aug.rank()
}

/// Dot product of a sparse row with a dense vector.
pub fn dot(row: &[(usize, Rational)], x: &[Rational]) -> Rational {
    row.iter().fold(Rational::zero(), |acc, (c, v)| acc + v * &x[*c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use proptest::prelude::*;

    fn dense_to_sparse(r: &[i64]) -> SparseRow {
        sparse_row(r.iter().enumerate().map(|(c, &x)| (c, rat(x))))
    }

    /// Dense Gaussian elimination, the textbook way.
    fn dense_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
        let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] / &m[rank][c];
                    for k in 0..ncols {
                        let s = &f * &m[rank][k];
                        m[r][k] -= s;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_rank() {
        let rows = vec![dense_to_sparse(&[1, 2, 3]), dense_to_sparse(&[2, 4, 6]), dense_to_sparse(&[0, 1, 1])];
        assert_eq!(rank(rows), 2);
        assert_eq!(rank(Vec::<SparseRow>::new()), 0);
    }

    #[test]
    fn consistency() {
        let rows = vec![dense_to_sparse(&[1, 1]), dense_to_sparse(&[2, 2])];
        assert!(is_consistent(&rows, &[rat(1), rat(2)]));
        assert!(!is_consistent(&rows, &[rat(1), rat(3)]));
    }

    proptest! {
        #[test]
        fn rank_matches_dense(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 0..8)) {
            let sparse: Vec<SparseRow> = rows.iter().map(|r| dense_to_sparse(r)).collect();
            prop_assert_eq!(rank(sparse), dense_rank(&rows, 6));
        }

        #[test]
        fn kernel_is_annihilated(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 5), 0..6)) {
            let mut e = Echelon::new();
            for r in &rows {
                e.insert(dense_to_sparse(r));
            }
            let basis = e.kernel_basis(5);
            prop_assert_eq!(basis.len() + e.rank(), 5);
            for v in &basis {
                let mut dense = vec![Rational::zero(); 5];
                for (c, x) in v {
                    dense[*c] = x.clone();
                }
                for r in &rows {
                    prop_assert!(dot(&dense_to_sparse(r), &dense).is_zero());
                }
            }
            prop_assert_eq!(rank(basis), 5 - e.rank());
        }
    }
}
