//! Dimensions of `G(O)`-orbits on triples via the tangent space
//! `g(O) / (intersection of the point stabilizers)`, computed exactly modulo
//! `t^M`, plus the closed forms and case tables they are compared with.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grassmannian::ConvolutionTriple;
use crate::linalg::{dot, is_consistent, sparse_row, Echelon, SparseRow};
use crate::matrix::PolyMatrix;
use crate::points::{build_counterexample_xi, build_naive_xi, build_xi, build_xi_tilde, family_u, family_u_derivative, two_rho_vee_rank2};
use crate::series::{LaurentPoly, Rational};
use crate::type_a::{check_root_component_conditions, coroot_vector, pairing, rho_pairing, two_rho_pairing, Coweight, PositiveRoot};

/// Position of a matrix entry relative to `beta = alpha_p + ... + alpha_q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum EntryCase {
    /// On or below the diagonal.
    A,
    /// `j <= p` or `j > q + 1`, and `i != p`.
    B,
    /// `i = p`, `j > q + 1`.
    C,
    /// `p < j <= q + 1`, `i != p`, `i < j`.
    D,
    /// `i = p`, `p < j <= q + 1`.
    E,
}

/// Classifies the 1-based entry `(i, j)`.
pub fn classify_entry(i: usize, j: usize, p: usize, q: usize) -> EntryCase {
    if i >= j {
        EntryCase::A
    } else if i == p {
        if j > q + 1 {
            EntryCase::C
        } else if j > p {
            EntryCase::E
        } else {
            // i = p < j forces j > p.
            unreachable!("i = p < j implies j > p")
        }
    } else if j > p && j <= q + 1 {
        EntryCase::D
    } else {
        EntryCase::B
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseEntry {
    pub i: usize,
    pub j: usize,
    pub case: EntryCase,
    /// Minimal valuation of `(x^{-1} v x)_{ij}` for `v` in `V`.
    pub list_bound: i64,
    /// The same once the case-B coordinates meet their targets.
    pub refined_bound: i64,
    /// `max(0, <eps_{ij}, nu*>)`, the valuation required in `W`.
    pub target: i64,
    /// `target - refined_bound` above the diagonal, 0 below.
    pub contribution: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseTable {
    pub entries: Vec<CaseEntry>,
    /// Sum of contributions: `dim V/W`.
    pub dim_v_mod_w: i64,
}

impl CaseTable {
    pub fn get(&self, i: usize, j: usize) -> Option<&CaseEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    pub fn count(&self, case: EntryCase) -> usize {
        self.entries.iter().filter(|e| e.case == case).count()
    }
}

fn checked_nu_star(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<Coweight> {
    let rep = check_root_component_conditions(lam, mu, b, big_n)?;
    if !rep.holds() {
        return Err(Error::ConditionsViolated(format!(
            "cond1 = {}, cond2 = {} (witnesses {:?})",
            rep.cond1, rep.cond2, rep.witnesses
        )));
    }
    Ok(rep.nu_star)
}

/// Per-entry valuation bounds and the resulting count of `dim V/W`.
pub fn case_valuation_table(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<CaseTable> {
    let nu_star = checked_nu_star(lam, mu, b, big_n)?;
    let d = lam.rank() + 1;
    let (p, q) = (b.p(), b.q());
    let mut entries = Vec::with_capacity(d * d);
    let mut total = 0;
    for i in 1..=d {
        for j in 1..=d {
            let case = classify_entry(i, j, p, q);
            let (list_bound, refined_bound, target) = if case == EntryCase::A {
                (0, 0, 0)
            } else {
                let eps = PositiveRoot::new(i, j)?;
                let l = pairing(&eps, lam)?;
                let target = pairing(&eps, &nu_star)?.max(0);
                match case {
                    EntryCase::B => (l, l, target),
                    EntryCase::C => (l - big_n, l, target),
                    EntryCase::D => (l, l, target),
                    EntryCase::E => (l - big_n, l - big_n, target),
                    EntryCase::A => unreachable!(),
                }
            };
            let contribution = target - refined_bound;
            total += contribution;
            entries.push(CaseEntry { i, j, case, list_bound, refined_bound, target, contribution });
        }
    }
    Ok(CaseTable { entries, dim_v_mod_w: total })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    /// `<rho, 2 lam + 2 mu - N beta^vee>`.
    pub orbit_dim: i64,
    /// `<2 rho, lam>`.
    pub g_mod_v: i64,
    /// `<2 rho, mu> - N <rho, beta^vee>`.
    pub v_mod_w: i64,
}

pub fn closed_form_orbit_dim(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<ClosedForm> {
    checked_nu_star(lam, mu, b, big_n)?;
    let n = lam.rank();
    let arg = &(&lam.scale(2) + &mu.scale(2)) - &coroot_vector(b, n)?.scale(big_n);
    let r = rho_pairing(&arg);
    if !r.is_integer() {
        return Err(Error::ConditionsViolated(format!("<rho, {arg}> = {r} is not an integer")));
    }
    let g_mod_v = two_rho_pairing(lam);
    let v_mod_w = two_rho_pairing(mu) - big_n * b.height() as i64;
    Ok(ClosedForm { orbit_dim: r.to_integer(), g_mod_v, v_mod_w })
}

/// `2 max_eps <eps, lam + mu> + N + 2`.
pub fn truncation_bound(lam: &Coweight, mu: &Coweight, _b: &PositiveRoot, big_n: i64) -> usize {
    let sum = lam + mu;
    (2 * sum.spread() + big_n + 2).max(1) as usize
}

/// Smallest `M` with `t^M g(O)` inside `Ad_A g(O)`.
pub fn required_truncation_for(a: &PolyMatrix) -> usize {
    let delta = a.det().valuation().finite().expect("nonsingular point");
    let adj = a.adjugate().min_valuation().finite().unwrap_or(delta);
    let own = a.min_valuation().finite().unwrap_or(0);
    (delta - adj - own).max(1) as usize
}

pub fn required_truncation(tr: &ConvolutionTriple) -> usize {
    [&tr.l1, &tr.l2, &tr.l3].iter().map(|l| required_truncation_for(l.matrix())).max().unwrap()
}

/// Index of the variable `t^k E_{ab}` in `gl_d(O)/t^M`.
fn var(d: usize, m: usize, a: usize, b: usize, k: usize) -> usize {
    (a * d + b) * m + k
}

/// Linear conditions on `v` in `gl_d(O)/t^M` for `v` in `Ad_A g(O)`: the
/// coefficients of `t^e`, `e < val det A`, of `adj(A) v A` vanish.
pub fn point_constraints(a: &PolyMatrix, m: usize) -> Vec<SparseRow> {
    let d = a.dim();
    let delta = a.det().valuation().finite().expect("nonsingular point");
    let adj = a.adjugate();
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut prods: Vec<(usize, usize, LaurentPoly)> = Vec::new();
            for x in 0..d {
                let l = adj.get(i, x);
                if l.is_zero() {
                    continue;
                }
                for y in 0..d {
                    let r = a.get(y, j);
                    if !r.is_zero() {
                        prods.push((x, y, l * r));
                    }
                }
            }
            let Some(lo) = prods.iter().filter_map(|(_, _, p)| p.valuation().finite()).min() else {
                continue;
            };
            for e in lo..delta {
                let mut terms = Vec::new();
                for (x, y, p) in &prods {
                    for (exp, c) in p.terms() {
                        let k = e - exp;
                        if k >= 0 && (k as usize) < m {
                            terms.push((var(d, m, *x, *y, k as usize), c.clone()));
                        }
                    }
                }
                let row = sparse_row(terms);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Which Lie algebra the tangent space is modelled on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieModel {
    Gl,
    /// Trace-zero slice: `v_{dd} = -sum_{i<d} v_{ii}`.
    Sl,
}

/// Rewrites rows in `gl` coordinates as rows on the trace-zero slice.
fn restrict_to_sl(rows: Vec<SparseRow>, d: usize, m: usize) -> Vec<SparseRow> {
    let last = d - 1;
    rows.into_iter()
        .map(|row| {
            let mut terms = Vec::with_capacity(row.len() + d);
            for (c, x) in row {
                let (ab, k) = (c / m, c % m);
                if ab == last * d + last {
                    for i in 0..last {
                        terms.push((var(d, m, i, i, k), -x.clone()));
                    }
                } else {
                    terms.push((c, x));
                }
            }
            sparse_row(terms)
        })
        .collect()
}

/// The subspace of `g(O)/t^M` cut out by a list of constraints.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    echelon: Echelon,
}

impl Subspace {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn codim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.codim()
    }

    /// A basis over `Q`, as sparse coordinate vectors.
    pub fn basis(&self) -> Vec<SparseRow> {
        self.echelon.kernel_basis(self.ambient_dim)
    }
}

/// Which lattice `Ad_A g(O)` to intersect with `g(O)`.
#[derive(Clone, Debug)]
pub enum LatticeKind {
    Base,
    Torus(Coweight),
    /// `Ad_{g t^nu} g(O)`.
    Conjugated(PolyMatrix, Coweight),
}

pub fn stabilizer_lattice(kind: &LatticeKind, n: usize, m: usize) -> Result<Subspace> {
    let a = match kind {
        LatticeKind::Base => PolyMatrix::identity(n + 1),
        LatticeKind::Torus(v) => PolyMatrix::torus(v.as_slice()),
        LatticeKind::Conjugated(g, v) => g.checked_mul(&PolyMatrix::torus(v.as_slice()))?,
    };
    if a.dim() != n + 1 {
        return Err(Error::DimensionMismatch(format!("lattice data has size {}, rank {n} needs {}", a.dim(), n + 1)));
    }
    let required = required_truncation_for(&a);
    if m < required {
        return Err(Error::TruncationTooSmall { given: m, required });
    }
    let mut echelon = Echelon::new();
    for r in point_constraints(&a, m) {
        echelon.insert(r);
    }
    Ok(Subspace { ambient_dim: (n + 1) * (n + 1) * m, echelon })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDimReport {
    pub dim_linear_algebra: usize,
    pub dim_closed_form: Option<i64>,
    pub truncation: usize,
    pub required_truncation: usize,
    /// Results at `M` and `M + 1` agree.
    pub stable: bool,
    /// Codimension of the stabilizer of the first and third points.
    pub dim_g_mod_v: usize,
    /// The remaining part, `dim V/W`.
    pub dim_v_mod_w: usize,
}

/// `(dim g/V, dim g/W)` at truncation `m`.
fn tangent_ranks(tr: &ConvolutionTriple, m: usize, model: LieModel) -> (usize, usize) {
    let d = tr.l1.matrix().dim();
    let prep = |rows: Vec<SparseRow>| match model {
        LieModel::Gl => rows,
        LieModel::Sl => restrict_to_sl(rows, d, m),
    };
    let mut e = Echelon::new();
    for l in [&tr.l1, &tr.l3] {
        for r in prep(point_constraints(l.matrix(), m)) {
            e.insert(r);
        }
    }
    let first = e.rank();
    for r in prep(point_constraints(tr.l2.matrix(), m)) {
        e.insert(r);
    }
    (first, e.rank())
}

fn check_triple(tr: &ConvolutionTriple) -> Result<()> {
    let d = tr.l1.matrix().dim();
    if tr.l2.matrix().dim() != d || tr.l3.matrix().dim() != d {
        return Err(Error::DimensionMismatch("points of a triple must share their size".into()));
    }
    Ok(())
}

fn default_truncation(tr: &ConvolutionTriple) -> usize {
    let sum = &tr.lam + &tr.mu;
    (2 * sum.spread() + 2) as usize
}

/// Orbit dimension of a triple, checked for stability at `M + 1`.
/// Without an explicit truncation a bound from `lam + mu` is used.
pub fn orbit_dimension(tr: &ConvolutionTriple, truncation: Option<usize>) -> Result<OrbitDimReport> {
    orbit_dimension_with(tr, truncation, LieModel::Gl)
}

pub fn orbit_dimension_with(tr: &ConvolutionTriple, truncation: Option<usize>, model: LieModel) -> Result<OrbitDimReport> {
    check_triple(tr)?;
    let required = required_truncation(tr);
    let m = match truncation {
        Some(m) if m < required => return Err(Error::TruncationTooSmall { given: m, required }),
        Some(m) => m,
        None => default_truncation(tr).max(required),
    };
    let (gv, total) = tangent_ranks(tr, m, model);
    let (_, total_next) = tangent_ranks(tr, m + 1, model);
    if total != total_next {
        return Err(Error::UnstableTruncation { m, at_m: total, at_m1: total_next });
    }
    Ok(OrbitDimReport {
        dim_linear_algebra: total,
        dim_closed_form: None,
        truncation: m,
        required_truncation: required,
        stable: true,
        dim_g_mod_v: gv,
        dim_v_mod_w: total - gv,
    })
}

/// The three points built from root-component data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    Xi,
    XiTilde,
    /// The single-generator point `x_beta(t^{<beta, lam> - N})`.
    Naive,
}

pub fn build_point(kind: PointKind, lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<ConvolutionTriple> {
    match kind {
        PointKind::Xi => build_xi(lam, mu, b, big_n),
        PointKind::XiTilde => build_xi_tilde(lam, mu, b, big_n),
        PointKind::Naive => build_naive_xi(lam, mu, b, big_n),
    }
}

/// Orbit dimension of one of the constructed points, at the truncation
/// from [`truncation_bound`] unless overridden, with the closed form filled in.
pub fn case_orbit_dimension(
    kind: PointKind,
    lam: &Coweight,
    mu: &Coweight,
    b: &PositiveRoot,
    big_n: i64,
    truncation: Option<usize>,
) -> Result<OrbitDimReport> {
    let tr = build_point(kind, lam, mu, b, big_n)?;
    let closed = closed_form_orbit_dim(lam, mu, b, big_n)?;
    let m = truncation.unwrap_or_else(|| truncation_bound(lam, mu, b, big_n).max(required_truncation(&tr)));
    let mut rep = orbit_dimension(&tr, Some(m))?;
    rep.dim_closed_form = Some(closed.orbit_dim);
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalityReport {
    pub orbit_dim: usize,
    /// Whether `u'(a) u(a)^{-1}` is tangent to the orbit at `xi(a)`.
    pub derivative_tangent: bool,
    pub truncation: usize,
}

/// Default truncation for the family: the bound for `lam = mu = 2 rho^vee`,
/// `beta = alpha_1 + alpha_2`, `N = 2`.
pub fn family_truncation() -> usize {
    let l = two_rho_vee_rank2();
    truncation_bound(&l, &l, &PositiveRoot::simple_range(1, 2).expect("valid root"), 2)
}

/// Orbit dimension of `xi(a)` and whether the curve direction `d xi / d a`
/// lies in the tangent space of the orbit.
pub fn family_transversality(a: &Rational, truncation: Option<usize>) -> Result<TransversalityReport> {
    let tr = build_counterexample_xi(a)?;
    let m = truncation.unwrap_or_else(family_truncation);
    let rep = orbit_dimension(&tr, Some(m))?;
    let d = 3;

    // The curve moves only the middle point, along X = u'(a) u(a)^{-1}.
    let x = family_u_derivative().checked_mul(&family_u(a)?.inverse()?)?;
    let mut xvec = vec![Rational::zero(); d * d * m];
    for (i, j, e) in x.entries() {
        for (exp, c) in e.terms() {
            if exp < 0 {
                return Err(Error::PreconditionMismatch("curve direction is not integral".into()));
            }
            if (exp as usize) < m {
                xvec[var(d, m, i, j, exp as usize)] = c.clone();
            }
        }
    }
    // Solve for v in V with v - X in Ad_{u t^{2 rho}} g(O).
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for l in [&tr.l1, &tr.l3] {
        for r in point_constraints(l.matrix(), m) {
            rows.push(r);
            rhs.push(Rational::zero());
        }
    }
    for r in point_constraints(tr.l2.matrix(), m) {
        rhs.push(dot(&r, &xvec));
        rows.push(r);
    }
    Ok(TransversalityReport {
        orbit_dim: rep.dim_linear_algebra,
        derivative_tangent: is_consistent(&rows, &rhs),
        truncation: m,
    })
}
