//! Square matrices over [`LaurentPoly`].

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{LaurentPoly, Rational, Valuation};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zero(dim: usize) -> Self {
        PolyMatrix { dim, entries: vec![LaurentPoly::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = PolyMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (k, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!("row {} has {} entries, expected {dim}", k + 1, r.len())));
            }
            entries.extend(r);
        }
        Ok(PolyMatrix { dim, entries })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| LaurentPoly::from_int(x)).collect()).collect())
    }

    /// `diag(t^e_1, ..., t^e_d)`.
    pub fn torus(exponents: &[i64]) -> Self {
        let mut m = PolyMatrix::zero(exponents.len());
        for (i, &e) in exponents.iter().enumerate() {
            m.set(i, i, LaurentPoly::t_pow(e));
        }
        m
    }

    pub fn diagonal(entries: Vec<LaurentPoly>) -> Self {
        let mut m = PolyMatrix::zero(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// `I + a E_{i,j}` with 0-based indices.
    pub fn elementary(dim: usize, i: usize, j: usize, a: LaurentPoly) -> Self {
        let mut m = PolyMatrix::identity(dim);
        let cur = m.get(i, j).clone();
        m.set(i, j, &cur + &a);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &LaurentPoly)> + '_ {
        self.entries.iter().enumerate().map(move |(k, e)| (k / self.dim, k % self.dim, e))
    }

    fn check_dim(&self, other: &PolyMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.dim, self.dim, other.dim, other.dim)));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = PolyMatrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.dim);
        for (i, j, e) in self.entries() {
            out.set(j, i, e.clone());
        }
        out
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> PolyMatrix {
        PolyMatrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &LaurentPoly) -> PolyMatrix {
        self.map(|e| e * s)
    }

    pub fn substitute_neg_t(&self) -> PolyMatrix {
        self.map(|e| e.substitute_neg_t())
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|e| -e)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_dim(other)?;
        Ok(PolyMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_dim(other)?;
        Ok(PolyMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    /// Smallest valuation among the entries.
    pub fn min_valuation(&self) -> Valuation {
        self.entries.iter().map(|e| e.valuation()).min().unwrap_or(Valuation::Infinity)
    }

    pub fn is_identity(&self) -> bool {
        self.entries().all(|(i, j, e)| if i == j { e.is_one() } else { e.is_zero() })
    }

    /// Whether every entry has nonnegative valuation.
    pub fn is_integral(&self) -> bool {
        self.min_valuation() >= Valuation::Finite(0)
    }

    /// Diagonal entries equal to 1 and nothing below the diagonal.
    pub fn is_upper_unipotent(&self) -> bool {
        self.entries().all(|(i, j, e)| match i.cmp(&j) {
            std::cmp::Ordering::Equal => e.is_one(),
            std::cmp::Ordering::Greater => e.is_zero(),
            std::cmp::Ordering::Less => true,
        })
    }

    /// If `self = c I` for a Laurent polynomial `c`, returns `c`.
    pub fn as_scalar(&self) -> Option<LaurentPoly> {
        let c = self.get(0, 0).clone();
        let ok = self.entries().all(|(i, j, e)| if i == j { *e == c } else { e.is_zero() });
        ok.then_some(c)
    }

    /// Determinant of the submatrix on `rows x cols` by expansion over column
    /// subsets, `O(2^k k)` ring operations.
    fn det_sub(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        if k == 0 {
            return LaurentPoly::one();
        }
        let full = 1usize << k;
        let mut dp = vec![LaurentPoly::zero(); full];
        dp[0] = LaurentPoly::one();
        for mask in 1..full {
            let r = rows[mask.count_ones() as usize - 1];
            let mut acc = LaurentPoly::zero();
            for c in 0..k {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let prev = &dp[mask ^ (1 << c)];
                let a = self.get(r, cols[c]);
                if prev.is_zero() || a.is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones();
                let term = a * prev;
                if above % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            dp[mask] = acc;
        }
        dp[full - 1].clone()
    }

    pub fn det(&self) -> LaurentPoly {
        let idx: Vec<usize> = (0..self.dim).collect();
        self.det_sub(&idx, &idx)
    }

    /// Determinant of the minor on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        self.det_sub(rows, cols)
    }

    /// Classical adjugate, `adj(A) A = det(A) I`.
    pub fn adjugate(&self) -> PolyMatrix {
        let d = self.dim;
        if d == 1 {
            return PolyMatrix::identity(1);
        }
        let mut out = PolyMatrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                let rows: Vec<usize> = (0..d).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..d).filter(|&c| c != i).collect();
                let m = self.det_sub(&rows, &cols);
                out.set(i, j, if (i + j) % 2 == 0 { m } else { -m });
            }
        }
        out
    }

    /// Exact inverse; requires the determinant to be a monomial.
    pub fn inverse(&self) -> Result<PolyMatrix> {
        if self.is_upper_unipotent() {
            return Ok(self.unipotent_inverse());
        }
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let inv = det.inverse().ok_or_else(|| Error::NotLaurentInvertible(det.to_string()))?;
        Ok(self.adjugate().scale(&inv))
    }

    /// `(I + U)^{-1} = sum_k (-U)^k` for strictly upper triangular `U`.
    fn unipotent_inverse(&self) -> PolyMatrix {
        let d = self.dim;
        let nil = self.sub(&PolyMatrix::identity(d)).unwrap().neg();
        let mut acc = PolyMatrix::identity(d);
        let mut power = PolyMatrix::identity(d);
        for _ in 1..d {
            power = power.checked_mul(&nil).unwrap();
            acc = acc.add(&power).unwrap();
        }
        acc
    }

    /// Entrywise equality up to a common nonzero scalar factor.
    pub fn proportional_to(&self, other: &PolyMatrix) -> bool {
        if self.dim != other.dim {
            return false;
        }
        // Find a pivot to read off the ratio from.
        let Some(k) = self.entries.iter().position(|e| !e.is_zero()) else {
            return other.entries.iter().all(|e| e.is_zero());
        };
        let a = &self.entries[k];
        let b = &other.entries[k];
        if b.is_zero() {
            return false;
        }
        // self * b == other * a entrywise.
        self.entries.iter().zip(&other.entries).all(|(x, y)| x * b == y * a)
    }

    /// Constant coefficient matrix, used for unit tests on matrices over `O`.
    pub fn constant_term_det(&self) -> Rational {
        let m = self.map(|e| LaurentPoly::constant(e.coeff(0)));
        let d = m.det();
        if d.is_zero() {
            Rational::zero()
        } else {
            d.coeff(0)
        }
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    /// Panics on dimension mismatch.
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix[")?;
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Text form: rows separated by `;`, entries by `,`.
impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| self.row(i).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl FromStr for PolyMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|r| r.split(',').map(|e| e.parse::<LaurentPoly>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(rows)
    }
}
