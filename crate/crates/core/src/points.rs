//! Explicit group elements and points: root subgroups, the unipotent
//! matrices `x` and `x~`, the triples built from them, the automorphism
//! `sigma`, and the one-parameter family `xi(a)` for `PGL_3`.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grassmannian::{coset_equal, torus_point, ConvolutionTriple, GrPoint};
use crate::matrix::PolyMatrix;
use crate::series::{LaurentPoly, Rational};
use crate::type_a::{check_root_component_conditions, pairing, Coweight, PositiveRoot};

/// A root `e_i - e_j` with `i != j` (1-based); positive iff `i < j`.
/// Its root subgroup is `a -> I + a E_{i,j}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Root {
    i: usize,
    j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i == j {
            return Err(Error::InvalidRoot(format!("e_{i} - e_{j}")));
        }
        Ok(Root { i, j })
    }

    pub fn positive(b: &PositiveRoot) -> Self {
        Root { i: b.i(), j: b.j() }
    }

    pub fn negative(b: &PositiveRoot) -> Self {
        Root { i: b.j(), j: b.i() }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn negate(&self) -> Root {
        Root { i: self.j, j: self.i }
    }

    pub fn fits_rank(&self, n: usize) -> bool {
        self.i.max(self.j) <= n + 1
    }

    /// `<r, v>`.
    pub fn pairing(&self, v: &Coweight) -> i64 {
        v.as_slice()[self.i - 1] - v.as_slice()[self.j - 1]
    }

    /// All roots of `A_n`.
    pub fn all(n: usize) -> Vec<Root> {
        let mut out = Vec::new();
        for i in 1..=n + 1 {
            for j in 1..=n + 1 {
                if i != j {
                    out.push(Root { i, j });
                }
            }
        }
        out
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i, self.j)
    }
}

/// `x_r(a)`, an `(n+1) x (n+1)` matrix.
pub fn chevalley(r: Root, a: &LaurentPoly, n: usize) -> Result<PolyMatrix> {
    if !r.fits_rank(n) {
        return Err(Error::InvalidRoot(format!("{r} does not exist in rank {n}")));
    }
    Ok(PolyMatrix::elementary(n + 1, r.i - 1, r.j - 1, a.clone()))
}

/// Commutator law of this pinning: if `r1 + r2` is a root, returns it with
/// the sign `c` such that `x_r1(a) x_r2(b) x_r1(-a) x_r2(-b) = x_{r1+r2}(c a b)`.
/// Returns `None` when the sum is not a root (the generators then commute,
/// unless `r2 = -r1`).
pub fn commutator_law(r1: Root, r2: Root) -> Option<(Root, i64)> {
    if r1.j == r2.i && r1.i != r2.j {
        Some((Root { i: r1.i, j: r2.j }, 1))
    } else if r2.j == r1.i && r2.i != r1.j {
        Some((Root { i: r2.i, j: r1.j }, -1))
    } else {
        None
    }
}

/// `s_beta = x_beta(1) x_{-beta}(-1) x_beta(1)`.
pub fn s_beta(b: &PositiveRoot, n: usize) -> Result<PolyMatrix> {
    let one = LaurentPoly::one();
    let up = chevalley(Root::positive(b), &one, n)?;
    let down = chevalley(Root::negative(b), &-&one, n)?;
    Ok(&(&up * &down) * &up)
}

/// Both sides of `t^{-N beta^vee} = x_beta(-t^{-N}) x_{-beta}(t^N) s_beta^{-1} x_{-beta}(t^{-N})`.
pub fn torus_identity_sides(b: &PositiveRoot, big_n: i64, n: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    let mut exps = vec![0i64; n + 1];
    if !b.fits_rank(n) {
        return Err(Error::InvalidRoot(format!("{b} does not exist in rank {n}")));
    }
    exps[b.i() - 1] = -big_n;
    exps[b.j() - 1] = big_n;
    let lhs = PolyMatrix::torus(&exps);
    let pos = Root::positive(b);
    let neg = Root::negative(b);
    let rhs = [
        chevalley(pos, &-LaurentPoly::t_pow(-big_n), n)?,
        chevalley(neg, &LaurentPoly::t_pow(big_n), n)?,
        s_beta(b, n)?.inverse()?,
        chevalley(neg, &LaurentPoly::t_pow(-big_n), n)?,
    ]
    .iter()
    .fold(PolyMatrix::identity(n + 1), |acc, m| &acc * m);
    Ok((lhs, rhs))
}

/// Checks the torus identity as an equality of points of `Gr_{PGL}`.
pub fn verify_torus_identity(b: &PositiveRoot, big_n: i64, n: usize) -> Result<bool> {
    let (lhs, rhs) = torus_identity_sides(b, big_n, n)?;
    coset_equal(&GrPoint::new(lhs)?, &GrPoint::new(rhs)?)
}

fn monomial_generator(r: Root, exp: i64, n: usize) -> Result<PolyMatrix> {
    if exp < 0 {
        return Err(Error::ConditionsViolated(format!("negative exponent {exp} for x_({r})")));
    }
    chevalley(r, &LaurentPoly::t_pow(exp), n)
}

fn root_of(i: usize, j: usize) -> PositiveRoot {
    PositiveRoot::new(i, j).expect("i < j by construction")
}

/// `x = prod_{i=p}^{q} x_{alpha_{p,i}}(t^{<alpha_{p,i}, lam> - N})`.
pub fn build_x(lam: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<PolyMatrix> {
    let n = lam.rank();
    pairing(b, lam)?;
    let mut x = PolyMatrix::identity(n + 1);
    for i in b.p()..=b.q() {
        let r = root_of(b.p(), i + 1);
        x = &x * &monomial_generator(Root::positive(&r), pairing(&r, lam)? - big_n, n)?;
    }
    Ok(x)
}

/// `x~ = prod_{i=p}^{q} x_{alpha_{i,q}}(t^{<alpha_{i,q}, lam> - N})`.
pub fn build_x_tilde(lam: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<PolyMatrix> {
    let n = lam.rank();
    pairing(b, lam)?;
    let mut x = PolyMatrix::identity(n + 1);
    for i in b.p()..=b.q() {
        let r = root_of(i, b.q() + 1);
        x = &x * &monomial_generator(Root::positive(&r), pairing(&r, lam)? - big_n, n)?;
    }
    Ok(x)
}

/// The single generator `x_beta(t^{<beta, lam> - N})`.
pub fn build_naive_x(lam: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<PolyMatrix> {
    monomial_generator(Root::positive(b), pairing(b, lam)? - big_n, lam.rank())
}

/// The triple `([lam], g [nu*], [0])` with `nu = -w0 nu*`.
pub fn triple_from_middle(lam: &Coweight, mu: &Coweight, g: &PolyMatrix, nu_star: &Coweight) -> Result<ConvolutionTriple> {
    let l2 = GrPoint::new(g.checked_mul(torus_point(nu_star).matrix())?)?;
    Ok(ConvolutionTriple {
        l1: torus_point(lam),
        l2,
        l3: GrPoint::base(lam.rank()),
        lam: lam.clone(),
        mu: mu.clone(),
        nu: nu_star.neg_w0(),
    })
}

fn checked_nu_star(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<Coweight> {
    let rep = check_root_component_conditions(lam, mu, b, big_n)?;
    if !rep.holds() {
        let mut why = Vec::new();
        if !rep.cond1 {
            why.push(format!("{} is not dominant", rep.nu_star));
        }
        if !rep.cond2 {
            why.push(format!("small pairings at simple roots {:?}", rep.witnesses));
        }
        return Err(Error::ConditionsViolated(why.join("; ")));
    }
    Ok(rep.nu_star)
}

/// `xi = ([lam], x [lam + mu - N beta^vee], [0])`.
pub fn build_xi(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<ConvolutionTriple> {
    let nu_star = checked_nu_star(lam, mu, b, big_n)?;
    triple_from_middle(lam, mu, &build_x(lam, b, big_n)?, &nu_star)
}

/// `xi~ = ([lam], x~ [lam + mu - N beta^vee], [0])`.
pub fn build_xi_tilde(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<ConvolutionTriple> {
    let nu_star = checked_nu_star(lam, mu, b, big_n)?;
    triple_from_middle(lam, mu, &build_x_tilde(lam, b, big_n)?, &nu_star)
}

/// The single-generator point `([lam], x_beta(..) [lam + mu - N beta^vee], [0])`.
pub fn build_naive_xi(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<ConvolutionTriple> {
    let nu_star = checked_nu_star(lam, mu, b, big_n)?;
    triple_from_middle(lam, mu, &build_naive_x(lam, b, big_n)?, &nu_star)
}

/// Antidiagonal representative of `w0` with entries `+1, -1, +1, ...`.
pub fn w0_tilde(n: usize) -> PolyMatrix {
    let d = n + 1;
    let mut m = PolyMatrix::zero(d);
    for i in 0..d {
        m.set(i, d - 1 - i, LaurentPoly::from_int(if i % 2 == 0 { 1 } else { -1 }));
    }
    m
}

/// `A -> w0~ (A^t)^{-1} w0~^{-1}` followed by `t -> -t`, on representatives.
/// When `det A` is not a monomial the inverse is replaced by the adjugate,
/// which differs by a central scalar.
pub fn apply_sigma_matrix(a: &PolyMatrix) -> Result<PolyMatrix> {
    let n = a.dim() - 1;
    let at = a.transpose();
    let inv = match at.inverse() {
        Ok(m) => m,
        Err(Error::NotLaurentInvertible(_)) => at.adjugate(),
        Err(e) => return Err(e),
    };
    let w = w0_tilde(n);
    let w_inv = w.inverse()?;
    Ok((&(&w * &inv) * &w_inv).substitute_neg_t())
}

pub fn apply_sigma(l: &GrPoint) -> Result<GrPoint> {
    GrPoint::new(apply_sigma_matrix(l.matrix())?)
}

/// `sigma` on all three points and all three coweights.
pub fn apply_sigma_triple(tr: &ConvolutionTriple) -> Result<ConvolutionTriple> {
    Ok(ConvolutionTriple {
        l1: apply_sigma(&tr.l1)?,
        l2: apply_sigma(&tr.l2)?,
        l3: apply_sigma(&tr.l3)?,
        lam: tr.lam.neg_w0(),
        mu: tr.mu.neg_w0(),
        nu: tr.nu.neg_w0(),
    })
}

/// Image of a positive root under the diagram automorphism.
pub fn sigma_root(b: &PositiveRoot, n: usize) -> Result<PositiveRoot> {
    if !b.fits_rank(n) {
        return Err(Error::InvalidRoot(format!("{b} does not exist in rank {n}")));
    }
    PositiveRoot::new(n + 2 - b.j(), n + 2 - b.i())
}

/// Signs `s_i = +-1` with `a_{ij} = s_i s_j b_{ij}` for all `i, j`, if any.
/// This is conjugation by the torus element `diag(s)`.
pub fn sign_conjugator(a: &PolyMatrix, b: &PolyMatrix) -> Option<Vec<i64>> {
    let d = a.dim();
    if b.dim() != d {
        return None;
    }
    // relation[i][j] = Some(+1) if a_ij = b_ij, Some(-1) if a_ij = -b_ij.
    let mut rel = vec![vec![None; d]; d];
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (a.get(i, j), b.get(i, j));
            if x.is_zero() && y.is_zero() {
                continue;
            }
            if x == y {
                rel[i][j] = Some(1i64);
            } else if *x == -y {
                rel[i][j] = Some(-1);
            } else {
                return None;
            }
        }
    }
    let mut signs = vec![0i64; d];
    for start in 0..d {
        if signs[start] != 0 {
            continue;
        }
        signs[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..d {
                let r = rel[u][v].or(rel[v][u]);
                let Some(r) = r else { continue };
                if u == v {
                    if r != 1 {
                        return None;
                    }
                    continue;
                }
                let want = signs[u] * r;
                if signs[v] == 0 {
                    signs[v] = want;
                    queue.push_back(v);
                } else if signs[v] != want {
                    return None;
                }
            }
        }
    }
    // Both directions must agree when both entries are present.
    for i in 0..d {
        for j in 0..d {
            if let Some(r) = rel[i][j] {
                if signs[i] * signs[j] != r {
                    return None;
                }
            }
        }
    }
    Some(signs)
}

fn check_family_parameter(a: &Rational) -> Result<()> {
    if a.is_zero() || a.is_one() {
        return Err(Error::ExcludedParameter(a.to_string()));
    }
    Ok(())
}

/// `2 rho^vee = (4, 2, 0)` for `PGL_3`.
pub fn two_rho_vee_rank2() -> Coweight {
    Coweight::from_gl(vec![4, 2, 0]).expect("valid coweight")
}

/// `u(a)` with rows `(1, t, a t^2)`, `(0, 1, t)`, `(0, 0, 1)`.
pub fn family_u(a: &Rational) -> Result<PolyMatrix> {
    check_family_parameter(a)?;
    let mut u = PolyMatrix::identity(3);
    u.set(0, 1, LaurentPoly::t());
    u.set(0, 2, LaurentPoly::monomial(a.clone(), 2));
    u.set(1, 2, LaurentPoly::t());
    Ok(u)
}

/// `d u / d a`.
pub fn family_u_derivative() -> PolyMatrix {
    let mut m = PolyMatrix::zero(3);
    m.set(0, 2, LaurentPoly::t_pow(2));
    m
}

/// `xi(a) = ([2 rho^vee], u(a) [2 rho^vee], [0])`.
pub fn build_counterexample_xi(a: &Rational) -> Result<ConvolutionTriple> {
    let l = two_rho_vee_rank2();
    triple_from_middle(&l, &l, &family_u(a)?, &l)
}

/// The explicit element `W(a)` of `G(O)` with
/// `t^{-2 rho^vee} W t^{-2 rho^vee} u(a) t^{2 rho^vee}` in `G(O)`.
pub fn counterexample_witness(a: &Rational) -> Result<PolyMatrix> {
    check_family_parameter(a)?;
    let one = Rational::one();
    let am1 = a - &one;
    let c = |x: Rational| LaurentPoly::constant(x);
    PolyMatrix::from_rows(vec![
        vec![LaurentPoly::t_pow(2), -LaurentPoly::t(), c(&one - a)],
        vec![LaurentPoly::monomial(-(&one / &am1), 1), c(a / &am1), LaurentPoly::zero()],
        vec![c(a.recip()), LaurentPoly::zero(), LaurentPoly::zero()],
    ])
}

/// Checks the witness identity: `det W = 1` and the product equals the
/// lower unipotent matrix with entries `-t/(a-1)`, `t^2/a`, `t/a`.
pub fn verify_counterexample_witness(a: &Rational) -> Result<bool> {
    let w = counterexample_witness(a)?;
    let u = family_u(a)?;
    // Trace-zero lift diag(t^2, 1, t^-2); the lift (4, 2, 0) changes the
    // product by the central scalar t^-2.
    let tr = PolyMatrix::torus(&[2, 0, -2]);
    let tr_inv = tr.inverse()?;
    let lhs = [&tr_inv, &w, &tr_inv, &u, &tr].iter().fold(PolyMatrix::identity(3), |acc, m| &acc * *m);
    let one = Rational::one();
    let mut expect = PolyMatrix::identity(3);
    expect.set(1, 0, LaurentPoly::monomial(-(&one / (a - &one)), 1));
    expect.set(2, 0, LaurentPoly::monomial(a.recip(), 2));
    expect.set(2, 1, LaurentPoly::monomial(a.recip(), 1));
    Ok(w.det().is_one() && lhs == expect)
}
