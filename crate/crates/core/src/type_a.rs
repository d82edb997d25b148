//! Roots and coweights of `PGL(n+1)`.
//!
//! A coweight is stored through its `GL(n+1)` lift, an integer vector of
//! length `n+1`, modulo the central direction `(1, ..., 1)`. The canonical
//! representative has minimum entry 0.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight {
    vector: Vec<i64>,
}

impl Coweight {
    /// Coweight with the given `GL` lift; the lift is normalized.
    pub fn from_gl(vector: Vec<i64>) -> Result<Self> {
        if vector.len() < 2 {
            return Err(Error::InvalidCoweight(format!(
                "a GL lift needs at least 2 entries, got {}",
                vector.len()
            )));
        }
        let mut c = Coweight { vector };
        c.normalize();
        Ok(c)
    }

    /// `sum_i coeffs[i-1] * fw_i`, where `fw_i` lifts to `(1^i, 0^(n+1-i))`.
    pub fn from_fundamental(coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCoweight("rank must be positive".into()));
        }
        let n = coeffs.len();
        let mut v = vec![0i64; n + 1];
        for k in (0..n).rev() {
            v[k] = v[k + 1] + coeffs[k];
        }
        Coweight::from_gl(v)
    }

    pub fn zero(n: usize) -> Self {
        Coweight { vector: vec![0; n + 1] }
    }

    /// The fundamental coweight `fw_i`, `1 <= i <= n`.
    pub fn fundamental(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidCoweight(format!("fundamental index {i} out of range 1..={n}")));
        }
        let v = (0..=n).map(|k| i64::from(k < i)).collect();
        Coweight::from_gl(v)
    }

    fn normalize(&mut self) {
        let m = *self.vector.iter().min().unwrap();
        for x in &mut self.vector {
            *x -= m;
        }
    }

    pub fn rank(&self) -> usize {
        self.vector.len() - 1
    }

    /// Canonical `GL` lift (minimum entry 0).
    pub fn as_slice(&self) -> &[i64] {
        &self.vector
    }

    /// Coefficients in the fundamental coweight basis, `<alpha_i, self>`.
    pub fn fundamental_coefficients(&self) -> Vec<i64> {
        self.vector.windows(2).map(|w| w[0] - w[1]).collect()
    }

    pub fn is_dominant(&self) -> bool {
        self.vector.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(|&x| x == 0)
    }

    fn check_rank(&self, other: &Coweight) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Coweight) -> Result<Coweight> {
        self.check_rank(other)?;
        Coweight::from_gl(self.vector.iter().zip(&other.vector).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Coweight) -> Result<Coweight> {
        self.check_rank(other)?;
        Coweight::from_gl(self.vector.iter().zip(&other.vector).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Coweight {
        Coweight::from_gl(self.vector.iter().map(|x| x * k).collect()).unwrap()
    }

    /// `-w0(self)`: reverse, negate, renormalize.
    pub fn dualize_w0(&self) -> Result<Coweight> {
        if !self.is_dominant() {
            return Err(Error::NotDominant(self.to_string()));
        }
        Ok(self.neg_w0())
    }

    /// `-w0(self)` without the dominance check.
    pub fn neg_w0(&self) -> Coweight {
        Coweight::from_gl(self.vector.iter().rev().map(|x| -x).collect()).unwrap()
    }

    /// The dominant element of the Weyl orbit (entries sorted decreasingly).
    pub fn dominant_translate(&self) -> Coweight {
        let mut v = self.vector.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Coweight::from_gl(v).unwrap()
    }

    /// `max_i v_i - min_i v_i`, the largest pairing with a positive root.
    pub fn spread(&self) -> i64 {
        let mx = self.vector.iter().max().unwrap();
        let mn = self.vector.iter().min().unwrap();
        mx - mn
    }
}

impl fmt::Debug for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coweight({self})")
    }
}

/// Prints the canonical lift as `v:a,b,c`.
impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v:")?;
        let parts: Vec<String> = self.vector.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn parse_ints(body: &str, src: &str) -> Result<Vec<i64>> {
    body.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {x:?} in coweight {src:?}")))
        })
        .collect()
}

/// Accepts `fw:c1,...,cn` (fundamental coefficients) or `v:a1,...,a(n+1)`.
impl FromStr for Coweight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("fw:") {
            Coweight::from_fundamental(&parse_ints(body, s)?)
        } else if let Some(body) = s.strip_prefix("v:") {
            Coweight::from_gl(parse_ints(body, s)?)
        } else {
            Err(Error::Parse(format!("coweight {s:?} must start with 'fw:' or 'v:'")))
        }
    }
}

impl Add for &Coweight {
    type Output = Coweight;
    /// Panics on rank mismatch; use [`Coweight::checked_add`] otherwise.
    fn add(self, rhs: &Coweight) -> Coweight {
        self.checked_add(rhs).expect("coweight rank mismatch")
    }
}

impl Sub for &Coweight {
    type Output = Coweight;
    fn sub(self, rhs: &Coweight) -> Coweight {
        self.checked_sub(rhs).expect("coweight rank mismatch")
    }
}

impl Mul<&Coweight> for i64 {
    type Output = Coweight;
    fn mul(self, rhs: &Coweight) -> Coweight {
        rhs.scale(self)
    }
}

impl Neg for &Coweight {
    type Output = Coweight;
    fn neg(self) -> Coweight {
        self.scale(-1)
    }
}

/// The positive root `eps_{i,j} = alpha_i + ... + alpha_{j-1}`, with
/// 1-based `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PositiveRoot {
    i: usize,
    j: usize,
}

impl PositiveRoot {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::InvalidRoot(format!("eps_({i},{j}) needs 1 <= i < j")));
        }
        Ok(PositiveRoot { i, j })
    }

    /// `alpha_p + ... + alpha_q`, that is `eps_{p,q+1}`.
    pub fn simple_range(p: usize, q: usize) -> Result<Self> {
        if p == 0 || p > q {
            return Err(Error::InvalidRoot(format!("{p}..{q} needs 1 <= p <= q")));
        }
        PositiveRoot::new(p, q + 1)
    }

    pub fn simple(i: usize) -> Result<Self> {
        PositiveRoot::simple_range(i, i)
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// First simple root in the support.
    pub fn p(&self) -> usize {
        self.i
    }

    /// Last simple root in the support.
    pub fn q(&self) -> usize {
        self.j - 1
    }

    pub fn is_simple(&self) -> bool {
        self.j == self.i + 1
    }

    /// Number of simple roots in the support, `<rho, beta^vee>`.
    pub fn height(&self) -> usize {
        self.j - self.i
    }

    pub fn fits_rank(&self, n: usize) -> bool {
        self.j <= n + 1
    }

    fn check_rank(&self, n: usize) -> Result<()> {
        if !self.fits_rank(n) {
            return Err(Error::InvalidRoot(format!("{self} does not exist in rank {n}")));
        }
        Ok(())
    }

    /// All positive roots of `A_n`, ordered by `(i, j)`.
    pub fn all(n: usize) -> Vec<PositiveRoot> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n + 1 {
                out.push(PositiveRoot { i, j });
            }
        }
        out
    }
}

/// Prints as `p..q`.
impl fmt::Display for PositiveRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.p(), self.q())
    }
}

impl FromStr for PositiveRoot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("root {s:?} must look like p..q")))?;
        let p: usize = a.trim().parse().map_err(|_| Error::Parse(format!("bad root start in {s:?}")))?;
        let q: usize = b.trim().parse().map_err(|_| Error::Parse(format!("bad root end in {s:?}")))?;
        PositiveRoot::simple_range(p, q)
    }
}

/// `<r, v>` for the canonical pairing of roots with coweights.
pub fn pairing(r: &PositiveRoot, v: &Coweight) -> Result<i64> {
    if !r.fits_rank(v.rank()) {
        return Err(Error::RankMismatch { expected: r.j - 1, found: v.rank() });
    }
    Ok(v.vector[r.i - 1] - v.vector[r.j - 1])
}

/// `<alpha_i, v>` for a simple root.
pub fn simple_pairing(i: usize, v: &Coweight) -> i64 {
    v.vector[i - 1] - v.vector[i]
}

/// `<rho, v>` with `rho` the half sum of positive roots.
pub fn rho_pairing(v: &Coweight) -> Rational64 {
    let n = v.rank() as i64;
    let twice: i64 = v
        .vector
        .iter()
        .enumerate()
        .map(|(k, x)| (n - 2 * k as i64) * x)
        .sum();
    Rational64::new(twice, 2)
}

/// `<2 rho, v>`, always an integer.
pub fn two_rho_pairing(v: &Coweight) -> i64 {
    let n = v.rank() as i64;
    v.vector.iter().enumerate().map(|(k, x)| (n - 2 * k as i64) * x).sum()
}

/// The coroot `e_i - e_j` of `eps_{i,j}`.
pub fn coroot_vector(b: &PositiveRoot, n: usize) -> Result<Coweight> {
    b.check_rank(n)?;
    let mut v = vec![0i64; n + 1];
    v[b.i - 1] = 1;
    v[b.j - 1] = -1;
    Coweight::from_gl(v)
}

/// `sum fw_i` over simple `alpha_i` with `beta^vee - alpha_i^vee` a coroot
/// or zero; in type A these are `i = p` and `i = q`.
pub fn rho_beta(b: &PositiveRoot, n: usize) -> Result<Coweight> {
    b.check_rank(n)?;
    let mut c = vec![0i64; n];
    c[b.p() - 1] = 1;
    c[b.q() - 1] = 1;
    Coweight::from_fundamental(&c)
}

/// Whether `beta^vee - alpha_i^vee` lies in the coroots or is zero.
pub fn coroot_difference_is_root_or_zero(b: &PositiveRoot, i: usize) -> bool {
    i == b.p() || i == b.q()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    /// `lambda + mu - N beta^vee` is dominant.
    pub cond1: bool,
    /// The simple-root condition on small pairings.
    pub cond2: bool,
    /// Simple root indices `i` violating the second condition.
    pub witnesses: Vec<usize>,
    /// `lambda + mu - N beta^vee`.
    pub nu_star: Coweight,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.cond1 && self.cond2
    }
}

/// Checks the two root-component conditions for `(lambda, mu, beta, N)`.
pub fn check_root_component_conditions(
    lam: &Coweight,
    mu: &Coweight,
    b: &PositiveRoot,
    big_n: i64,
) -> Result<ConditionReport> {
    lam.check_rank(mu)?;
    let n = lam.rank();
    b.check_rank(n)?;
    for w in [lam, mu] {
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.to_string()));
        }
    }
    let nu_star = &(lam + mu) - &coroot_vector(b, n)?.scale(big_n);
    let cond1 = nu_star.is_dominant();
    let witnesses: Vec<usize> = (1..=n)
        .filter(|&i| simple_pairing(i, lam) < big_n || simple_pairing(i, mu) < big_n)
        .filter(|&i| coroot_difference_is_root_or_zero(b, i))
        .collect();
    Ok(ConditionReport { cond1, cond2: witnesses.is_empty(), witnesses, nu_star })
}
