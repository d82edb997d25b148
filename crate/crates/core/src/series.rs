//! Exact scalars: Laurent polynomials in `t` over the rationals, and
//! polynomials truncated at a fixed order `t^M`.
//!
//! Every matrix entry in the constructions of this crate is a Laurent
//! polynomial with integer (or, for the one-parameter family, rational)
//! coefficients, so no power-series machinery is needed.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Order of vanishing at `t = 0`. The zero polynomial has valuation
/// `Infinity`, which compares greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A Laurent polynomial `sum_k c_k t^k` with rational coefficients.
///
/// Stored as a lowest exponent plus a dense coefficient vector whose first
/// and last entries are nonzero. The zero polynomial is the empty vector with
/// `min_exp == 0`, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        LaurentPoly::constant(rat(c))
    }

    /// `c * t^exp`.
    pub fn monomial(c: Rational, exp: i64) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min_exp: exp, coeffs: vec![c] }
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> Self {
        LaurentPoly::monomial(Rational::one(), exp)
    }

    pub fn t() -> Self {
        LaurentPoly::t_pow(1)
    }

    /// Builds `sum_i coeffs[i] t^(min_exp + i)` and normalizes.
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.normalize();
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut acc = LaurentPoly::zero();
        for (e, c) in terms {
            acc += &LaurentPoly::monomial(c, e);
        }
        acc
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.min_exp = 0;
            }
            Some(k) => {
                let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..k);
                self.min_exp += k as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.min_exp)
        }
    }

    /// Largest exponent with nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        let k = exp - self.min_exp;
        if k < 0 || k >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.min_exp + k as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `Some((c, e))` when the polynomial is the single term `c t^e`.
    pub fn as_monomial(&self) -> Option<(&Rational, i64)> {
        if self.num_terms() == 1 {
            Some((&self.coeffs[0], self.min_exp))
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.as_monomial().is_some()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min_exp: self.min_exp + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// The substitution `t -> -t`: the coefficient of `t^k` picks up `(-1)^k`.
    pub fn substitute_neg_t(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if (self.min_exp + k as i64).rem_euclid(2) == 1 { -c } else { c.clone() })
            .collect();
        LaurentPoly { min_exp: self.min_exp, coeffs }
    }

    /// Inverse in the Laurent polynomial ring; only monomials are units.
    pub fn inverse(&self) -> Option<Self> {
        let (c, e) = self.as_monomial()?;
        Some(LaurentPoly::monomial(c.recip(), -e))
    }

    /// Exact division by a monomial.
    pub fn div_monomial(&self, m: &LaurentPoly) -> Option<Self> {
        let inv = m.inverse()?;
        Some(self * &inv)
    }

    /// Derivative with respect to `t`.
    pub fn derivative(&self) -> Self {
        LaurentPoly::from_terms(
            self.terms().map(|(e, c)| (e - 1, c * rat(e))),
        )
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

fn fmt_exp(e: i64) -> String {
    match e {
        1 => "t".to_string(),
        _ => format!("t^{e}"),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if e == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", fmt_exp(e))?;
            } else {
                write!(f, "{a}*{}", fmt_exp(e))?;
            }
        }
        Ok(())
    }
}

/// Parses expressions such as `1 + 2*t^2`, `t^-1 - 3/2 t`, `-t^{2}`.
impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pos = 0;
        let mut acc = LaurentPoly::zero();
        let mut first = true;
        while pos < chars.len() {
            let mut sign = 1i64;
            match chars[pos] {
                '+' => pos += 1,
                '-' => {
                    sign = -1;
                    pos += 1;
                }
                _ if first => {}
                c => return Err(Error::Parse(format!("unexpected '{c}' in polynomial {s:?}"))),
            }
            first = false;
            let (term, next) = parse_term(&chars, pos, s)?;
            pos = next;
            acc += &term.scale(&rat(sign));
        }
        Ok(acc)
    }
}

fn parse_uint(chars: &[char], mut pos: usize) -> Option<(BigInt, usize)> {
    let start = pos;
    while pos < chars.len() && chars[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == start {
        return None;
    }
    let digits: String = chars[start..pos].iter().collect();
    Some((digits.parse().ok()?, pos))
}

fn parse_term(chars: &[char], mut pos: usize, src: &str) -> Result<(LaurentPoly, usize)> {
    let err = || Error::Parse(format!("malformed term in polynomial {src:?}"));
    let mut coeff = Rational::one();
    let mut have_coeff = false;
    if let Some((num, next)) = parse_uint(chars, pos) {
        pos = next;
        have_coeff = true;
        let mut den = BigInt::one();
        if pos < chars.len() && chars[pos] == '/' {
            let (d, next) = parse_uint(chars, pos + 1).ok_or_else(err)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {src:?}")));
            }
            den = d;
            pos = next;
        }
        coeff = Rational::new(num, den);
    }
    if pos < chars.len() && chars[pos] == '*' {
        if !have_coeff {
            return Err(err());
        }
        pos += 1;
        if pos >= chars.len() || chars[pos] != 't' {
            return Err(err());
        }
    }
    let mut exp = 0i64;
    if pos < chars.len() && chars[pos] == 't' {
        pos += 1;
        exp = 1;
        if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            let close = match chars.get(pos) {
                Some('{') => Some('}'),
                Some('(') => Some(')'),
                _ => None,
            };
            if close.is_some() {
                pos += 1;
            }
            let mut neg = false;
            if pos < chars.len() && (chars[pos] == '-' || chars[pos] == '+') {
                neg = chars[pos] == '-';
                pos += 1;
            }
            let (e, next) = parse_uint(chars, pos).ok_or_else(err)?;
            pos = next;
            if let Some(c) = close {
                if chars.get(pos) != Some(&c) {
                    return Err(err());
                }
                pos += 1;
            }
            let e: i64 = e.try_into().map_err(|_| err())?;
            exp = if neg { -e } else { e };
        }
    } else if !have_coeff {
        return Err(err());
    }
    Ok((LaurentPoly::monomial(coeff, exp), pos))
}

fn add_into(acc: &mut LaurentPoly, other: &LaurentPoly, sign: bool) {
    if other.is_zero() {
        return;
    }
    if acc.is_zero() {
        *acc = if sign { other.clone() } else { -other };
        return;
    }
    let lo = acc.min_exp.min(other.min_exp);
    let hi = acc.degree().unwrap().max(other.degree().unwrap());
    let len = (hi - lo + 1) as usize;
    if acc.min_exp > lo {
        let pad = (acc.min_exp - lo) as usize;
        let mut v = vec![Rational::zero(); pad];
        v.append(&mut acc.coeffs);
        acc.coeffs = v;
        acc.min_exp = lo;
    }
    acc.coeffs.resize(len, Rational::zero());
    let off = (other.min_exp - lo) as usize;
    for (k, c) in other.coeffs.iter().enumerate() {
        if sign {
            acc.coeffs[off + k] += c;
        } else {
            acc.coeffs[off + k] -= c;
        }
    }
    acc.normalize();
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        add_into(self, rhs, true);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        add_into(self, rhs, false);
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::from_coeffs(self.min_exp + rhs.min_exp, coeffs)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::from_int(c)
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        LaurentPoly::constant(c)
    }
}

/// An element of `Q[t]/(t^M)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncPoly {
    coeffs: Vec<Rational>,
}

impl TruncPoly {
    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        TruncPoly { coeffs: vec![Rational::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        let mut p = TruncPoly::zero(order);
        p.coeffs[0] = Rational::one();
        p
    }

    /// Reduces a Laurent polynomial of nonnegative valuation modulo `t^order`.
    pub fn from_laurent(p: &LaurentPoly, order: usize) -> Result<Self> {
        if let Valuation::Finite(v) = p.valuation() {
            if v < 0 {
                return Err(Error::Parse(format!("{p} has negative valuation")));
            }
        }
        let mut out = TruncPoly::zero(order);
        for (e, c) in p.terms() {
            if (e as usize) < order {
                out.coeffs[e as usize] = c.clone();
            }
        }
        Ok(out)
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_coeffs(0, self.coeffs.clone())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Valuation, with `Infinity` for anything divisible by `t^M`.
    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Valuation::Finite(k as i64),
            None => Valuation::Infinity,
        }
    }

    fn check_order(&self, other: &TruncPoly) {
        assert_eq!(self.order(), other.order(), "mixed truncation orders");
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Option<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return None;
        }
        let m = self.order();
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); m];
        out[0] = inv0.clone();
        for k in 1..m {
            let mut s = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -(s * &inv0);
        }
        Some(TruncPoly { coeffs: out })
    }

    /// Some `q` with `t^k q == self`, choosing zero for the undetermined top
    /// coefficients; `None` when the valuation is below `k`.
    pub fn div_t_pow(&self, k: usize) -> Option<Self> {
        if self.coeffs[..k.min(self.order())].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let m = self.order();
        let mut out = vec![Rational::zero(); m];
        out[..m - k].clone_from_slice(&self.coeffs[k..m]);
        Some(TruncPoly { coeffs: out })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
}

impl Add<&TruncPoly> for &TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_order(rhs);
        TruncPoly { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&TruncPoly> for &TruncPoly {
    type Output = TruncPoly;
    fn sub(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_order(rhs);
        TruncPoly { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        TruncPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul<&TruncPoly> for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_order(rhs);
        let m = self.order();
        let mut out = vec![Rational::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..m - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncPoly { coeffs: out }
    }
}
