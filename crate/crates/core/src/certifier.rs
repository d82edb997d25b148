//! Disjointness certificates for `G(O) xi` and `G(O) xi~`.
//!
//! Suppose `g` in `G(O)` carries one triple to the other. Then `g` fixes
//! `[lam]`, and `h = x~^{-1} g x` lies in `t^{nu*} G(O) t^{-nu*}`. Each
//! entry of `h` is a linear form in the entries of `g`. Lower bounds on
//! `val(g_ij)` are propagated through these forms until nothing changes, and
//! a minimal assignment then bounds `val(det g)` from below. A positive bound
//! contradicts `det g` being a unit.

use std::fmt;

use crate::assignment::min_cost_assignment;
use crate::error::{Error, Result};
use crate::grassmannian::{coset_equal, torus_point, ConvolutionTriple, GrPoint};
use crate::matrix::PolyMatrix;
use crate::series::LaurentPoly;
use crate::type_a::Coweight;

/// One raised bound, with the entry of `h` whose requirement forced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementStep {
    /// 1-based entry of `g`.
    pub entry: (usize, usize),
    pub old: i64,
    pub new: i64,
    /// 1-based entry of `h`.
    pub forced_by: (usize, usize),
}

impl fmt::Display for RefinementStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "val g[{},{}] >= {} (was {}) from h[{},{}]",
            self.entry.0, self.entry.1, self.new, self.old, self.forced_by.0, self.forced_by.1
        )
    }
}

/// Lower bounds on `val(g_ij)` for an unknown `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValBoundMatrix {
    bounds: Vec<Vec<i64>>,
    steps: Vec<RefinementStep>,
}

impl ValBoundMatrix {
    pub fn from_bounds(bounds: Vec<Vec<i64>>) -> Self {
        ValBoundMatrix { bounds, steps: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    /// 1-based access.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.bounds[i - 1][j - 1]
    }

    pub fn bounds(&self) -> &[Vec<i64>] {
        &self.bounds
    }

    pub fn steps(&self) -> &[RefinementStep] {
        &self.steps
    }
}

/// `max(0, <eps_ij, lam>)` above the diagonal and 0 elsewhere: the
/// conditions for `g` in `G(O)` to fix `[lam]`.
pub fn init_bounds(lam: &Coweight) -> ValBoundMatrix {
    let v = lam.as_slice();
    let d = v.len();
    let bounds = (0..d)
        .map(|i| (0..d).map(|j| if i < j { (v[i] - v[j]).max(0) } else { 0 }).collect())
        .collect();
    ValBoundMatrix::from_bounds(bounds)
}

/// `coeff * g[source]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTerm {
    /// 0-based entry of `g`.
    pub source: (usize, usize),
    pub coeff: LaurentPoly,
}

/// One entry of `x~^{-1} g x` as a linear form in the entries of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolicEntry {
    pub terms: Vec<SymTerm>,
}

impl SymbolicEntry {
    /// Substitutes a concrete `g`.
    pub fn evaluate(&self, g: &PolyMatrix) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for t in &self.terms {
            acc += &(&t.coeff * g.get(t.source.0, t.source.1));
        }
        acc
    }

    pub fn coeff_of(&self, source: (usize, usize)) -> Option<&LaurentPoly> {
        self.terms.iter().find(|t| t.source == source).map(|t| &t.coeff)
    }
}

fn is_monomial_unipotent(m: &PolyMatrix) -> bool {
    m.is_upper_unipotent() && m.entries().all(|(_, _, e)| e.is_zero() || e.is_monomial())
}

/// Expands `xt^{-1} g x` for a matrix `g` of indeterminates; entry `(i, j)`
/// of the result (0-based) is at `[i][j]`.
pub fn symbolic_conjugate(xt: &PolyMatrix, x: &PolyMatrix) -> Result<Vec<Vec<SymbolicEntry>>> {
    if !is_monomial_unipotent(xt) || !is_monomial_unipotent(x) {
        return Err(Error::NonUnipotent);
    }
    if xt.dim() != x.dim() {
        return Err(Error::DimensionMismatch("conjugating matrices differ in size".into()));
    }
    let d = x.dim();
    let xt_inv = xt.inverse()?;
    let mut out = vec![vec![SymbolicEntry::default(); d]; d];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for a in 0..d {
                let l = xt_inv.get(i, a);
                if l.is_zero() {
                    continue;
                }
                for b in 0..d {
                    let r = x.get(b, j);
                    if !r.is_zero() {
                        entry.terms.push(SymTerm { source: (a, b), coeff: l * r });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `max(0, nu*_i - nu*_j)`: what `h` in `t^{nu*} G(O) t^{-nu*}` and
/// `G(O)` forces on `val(h_ij)`.
pub fn requirements(nu_star: &Coweight) -> Vec<Vec<i64>> {
    let v = nu_star.as_slice();
    let d = v.len();
    (0..d).map(|i| (0..d).map(|j| (v[i] - v[j]).max(0)).collect()).collect()
}

/// Raises bounds to the fixpoint of the rule: if `val(h_ij) >= R` and every
/// other term of `h_ij` has valuation at least `O`, then the remaining term
/// has valuation at least `min(R, O)`.
pub fn propagate_bounds(bm: &ValBoundMatrix, sym: &[Vec<SymbolicEntry>], nu_star: &Coweight) -> ValBoundMatrix {
    let req = requirements(nu_star);
    let mut out = bm.clone();
    let d = out.dim();
    loop {
        let mut changed = false;
        for i in 0..d {
            for j in 0..d {
                let r = req[i][j];
                let terms = &sym[i][j].terms;
                let vals: Vec<i64> = terms
                    .iter()
                    .map(|t| t.coeff.valuation().finite().expect("nonzero coefficient") + out.bounds[t.source.0][t.source.1])
                    .collect();
                for (k, t) in terms.iter().enumerate() {
                    let others = vals.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, v)| *v).min();
                    let floor = others.map_or(r, |o| o.min(r));
                    let m = t.coeff.valuation().finite().unwrap();
                    let (a, b) = t.source;
                    let cand = floor - m;
                    if cand > out.bounds[a][b] {
                        out.steps.push(RefinementStep {
                            entry: (a + 1, b + 1),
                            old: out.bounds[a][b],
                            new: cand,
                            forced_by: (i + 1, j + 1),
                        });
                        out.bounds[a][b] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Lower bound on `val(det g)` over all `g` meeting the bounds, with the
/// minimizing assignment (row `i` to column `assignment[i]`, 0-based).
pub fn det_min_valuation(bm: &ValBoundMatrix) -> (i64, Vec<usize>) {
    min_cost_assignment(&bm.bounds)
}

pub const LIFT_ASSUMPTION: &str =
    "an element of PGL_{n+1}(O) relating the triples is lifted to GL_{n+1}(O) with unit determinant";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub initial: ValBoundMatrix,
    pub propagated: ValBoundMatrix,
    pub det_bound: i64,
    pub assignment: Vec<usize>,
    pub assumption: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Disjoint(ProofTrace),
    Unknown(ProofTrace),
}

impl Verdict {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, Verdict::Disjoint(_))
    }

    pub fn trace(&self) -> &ProofTrace {
        match self {
            Verdict::Disjoint(t) | Verdict::Unknown(t) => t,
        }
    }
}

/// Factors the middle point as `x t^{nu*}` with `x` upper unipotent.
fn middle_factor(tr: &ConvolutionTriple, nu_star: &Coweight) -> Result<PolyMatrix> {
    let t_inv = PolyMatrix::torus(&nu_star.as_slice().iter().map(|e| -e).collect::<Vec<_>>());
    let x = tr.l2.matrix().checked_mul(&t_inv)?;
    if !is_monomial_unipotent(&x) {
        return Err(Error::PreconditionMismatch(
            "middle point is not of the form x t^{nu*} with x unipotent with monomial entries".into(),
        ));
    }
    Ok(x)
}

/// Tries to prove that no `g` in `G(O)` carries `tr1` to `tr2`.
pub fn certify_disjoint(tr1: &ConvolutionTriple, tr2: &ConvolutionTriple) -> Result<Verdict> {
    if tr1.lam != tr2.lam || tr1.mu != tr2.mu || tr1.nu != tr2.nu {
        return Err(Error::PreconditionMismatch("triples have different coweights".into()));
    }
    let lam = &tr1.lam;
    let n = lam.rank();
    for tr in [tr1, tr2] {
        if tr.l1.rank() != n || !coset_equal(&tr.l1, &torus_point(lam))? {
            return Err(Error::PreconditionMismatch("first point is not [lam]".into()));
        }
        if !coset_equal(&tr.l3, &GrPoint::base(n))? {
            return Err(Error::NotBasePoint);
        }
    }
    let nu_star = tr1.nu.neg_w0();
    let x = middle_factor(tr1, &nu_star)?;
    let xt = middle_factor(tr2, &nu_star)?;
    let sym = symbolic_conjugate(&xt, &x)?;
    let initial = init_bounds(lam);
    let propagated = propagate_bounds(&initial, &sym, &nu_star);
    let (det_bound, assignment) = det_min_valuation(&propagated);
    let trace = ProofTrace { initial, propagated, det_bound, assignment, assumption: LIFT_ASSUMPTION };
    Ok(if det_bound >= 1 { Verdict::Disjoint(trace) } else { Verdict::Unknown(trace) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::{build_x, build_x_tilde, build_xi, build_xi_tilde, two_rho_vee_rank2};
    use crate::series::rat;
    use crate::type_a::{pairing, PositiveRoot};
    use proptest::prelude::*;

    fn cw(s: &str) -> Coweight {
        s.parse().unwrap()
    }

    fn root(s: &str) -> PositiveRoot {
        s.parse().unwrap()
    }

    fn example() -> (Coweight, Coweight, PositiveRoot) {
        (cw("fw:0,1,1,0"), cw("fw:1,1,1,1"), root("2..3"))
    }

    #[test]
    fn initial_bounds() {
        assert!(init_bounds(&Coweight::zero(3)).bounds().iter().flatten().all(|&b| b == 0));
        let bm = init_bounds(&cw("v:2,2,1,0,0"));
        assert_eq!(bm.get(1, 5), 2);
        assert!((1..=5).all(|i| (1..=i).all(|j| bm.get(i, j) == 0)));
    }

    #[test]
    fn identity_conjugation() {
        let id = PolyMatrix::identity(3);
        let sym = symbolic_conjugate(&id, &id).unwrap();
        for (i, row) in sym.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(e.terms.len(), 1);
                assert_eq!(e.terms[0].source, (i, j));
                assert!(e.terms[0].coeff.is_one());
            }
        }
        let bm = init_bounds(&cw("v:2,1,0"));
        let out = propagate_bounds(&bm, &sym, &Coweight::zero(2));
        assert_eq!(out.bounds(), bm.bounds());
    }

    #[test]
    fn single_terms_raise_to_requirement() {
        let id = PolyMatrix::identity(3);
        let sym = symbolic_conjugate(&id, &id).unwrap();
        let out = propagate_bounds(&init_bounds(&Coweight::zero(2)), &sym, &cw("v:3,1,0"));
        assert_eq!(out.bounds(), requirements(&cw("v:3,1,0")).as_slice());
    }

    #[test]
    fn rejects_non_unipotent() {
        let m: PolyMatrix = "1,0;1,1".parse().unwrap();
        assert_eq!(symbolic_conjugate(&m, &PolyMatrix::identity(2)), Err(Error::NonUnipotent));
        let m: PolyMatrix = "1,1+t;0,1".parse().unwrap();
        assert_eq!(symbolic_conjugate(&m, &PolyMatrix::identity(2)), Err(Error::NonUnipotent));
    }

    #[test]
    fn row_q_formula() {
        let (lam, _, b) = example();
        let x = build_x(&lam, &b, 1).unwrap();
        let xt = build_x_tilde(&lam, &b, 1).unwrap();
        let sym = symbolic_conjugate(&xt, &x).unwrap();
        // h_{q,j} for j > q + 1: q = 3, j = 5.
        let e = &sym[2][4];
        let exp = pairing(&PositiveRoot::new(3, 4).unwrap(), &lam).unwrap() - 1;
        assert_eq!(e.coeff_of((3, 4)), Some(&-LaurentPoly::t_pow(exp)));
        assert_eq!(e.terms.len(), 2);
    }

    /// The four-case formula for `h_ij` written out directly.
    fn four_case(lam: &Coweight, b: &PositiveRoot, big_n: i64, g: &PolyMatrix) -> PolyMatrix {
        let (p, q) = (b.p(), b.q());
        let d = lam.rank() + 1;
        let bj = |j: usize| LaurentPoly::t_pow(pairing(&PositiveRoot::new(p, j).unwrap(), lam).unwrap() - big_n);
        let ci = |i: usize| LaurentPoly::t_pow(pairing(&PositiveRoot::new(i, q + 1).unwrap(), lam).unwrap() - big_n);
        let gg = |i: usize, j: usize| g.get(i - 1, j - 1).clone();
        let mut h = PolyMatrix::zero(d);
        for i in 1..=d {
            for j in 1..=d {
                let in_i = (p..=q).contains(&i);
                let in_j = (p + 1..=q + 1).contains(&j);
                let mut v = gg(i, j);
                if in_i {
                    v -= &(&gg(q + 1, j) * &ci(i));
                }
                if in_j {
                    v += &(&gg(i, p) * &bj(j));
                }
                if in_i && in_j {
                    v -= &(&(&gg(q + 1, p) * &ci(i)) * &bj(j));
                }
                h.set(i - 1, j - 1, v);
            }
        }
        h
    }

    #[test]
    fn matches_four_case_formula() {
        let cases = [
            (cw("fw:0,1,1,0"), root("2..3"), 1),
            (two_rho_vee_rank2(), root("1..2"), 2),
            (cw("fw:2,1,1,2"), root("1..4"), 1),
            (cw("fw:1,2,0,1,2"), root("2..5"), 1),
        ];
        for (lam, b, big_n) in cases {
            let d = lam.rank() + 1;
            let x = build_x(&lam, &b, big_n).unwrap();
            let xt = build_x_tilde(&lam, &b, big_n).unwrap();
            let sym = symbolic_conjugate(&xt, &x).unwrap();
            // Evaluate at a generic g with distinct entries.
            let mut g = PolyMatrix::zero(d);
            for i in 0..d {
                for j in 0..d {
                    g.set(i, j, LaurentPoly::from_coeffs(0, vec![rat((7 * i + 3 * j + 1) as i64), rat((i * j) as i64 + 2)]));
                }
            }
            let direct = &(&xt.inverse().unwrap() * &g) * &x;
            let formula = four_case(&lam, &b, big_n, &g);
            assert_eq!(direct, formula, "{b}");
            for i in 0..d {
                for j in 0..d {
                    assert_eq!(&sym[i][j].evaluate(&g), direct.get(i, j));
                }
            }
        }
    }

    #[test]
    fn running_example_is_disjoint() {
        let (lam, mu, b) = example();
        let xi = build_xi(&lam, &mu, &b, 1).unwrap();
        let xit = build_xi_tilde(&lam, &mu, &b, 1).unwrap();
        let v = certify_disjoint(&xi, &xit).unwrap();
        assert!(v.is_disjoint());
        let bm = &v.trace().propagated;
        assert!(bm.get(4, 4) >= 1 && bm.get(4, 5) >= 1);
        assert!(v.trace().det_bound >= 1);
        assert!(!certify_disjoint(&xi, &xi).unwrap().is_disjoint());
    }

    #[test]
    fn rank_two_is_disjoint() {
        let l = two_rho_vee_rank2();
        let b = root("1..2");
        let xi = build_xi(&l, &l, &b, 2).unwrap();
        let xit = build_xi_tilde(&l, &l, &b, 2).unwrap();
        assert!(certify_disjoint(&xi, &xit).unwrap().is_disjoint());
    }

    #[test]
    fn mismatched_triples_rejected() {
        let (lam, mu, b) = example();
        let xi = build_xi(&lam, &mu, &b, 1).unwrap();
        let other = build_xi(&mu, &mu, &root("1..1"), 1).unwrap();
        assert!(matches!(certify_disjoint(&xi, &other), Err(Error::PreconditionMismatch(_))));
    }

    #[test]
    fn forced_block_assignment() {
        let bm = ValBoundMatrix::from_bounds(vec![vec![0, 1, 1], vec![0, 1, 1], vec![0, 0, 5]]);
        assert!(det_min_valuation(&bm).0 >= 1);
        let zero = ValBoundMatrix::from_bounds(vec![vec![0; 3]; 3]);
        assert_eq!(det_min_valuation(&zero).0, 0);
    }

    proptest! {
        #[test]
        fn det_bound_is_sound(
            bounds in prop::collection::vec(0i64..4, 16),
            extra in prop::collection::vec(0i64..3, 16),
            coeffs in prop::collection::vec(-3i64..4, 16),
        ) {
            let d = 4;
            let b: Vec<Vec<i64>> = bounds.chunks(d).map(|c| c.to_vec()).collect();
            let mut g = PolyMatrix::zero(d);
            for i in 0..d {
                for j in 0..d {
                    let k = i * d + j;
                    g.set(i, j, LaurentPoly::monomial(rat(coeffs[k]), b[i][j] + extra[k]));
                }
            }
            let det = g.det();
            let (bound, _) = det_min_valuation(&ValBoundMatrix::from_bounds(b));
            if let Some(v) = det.valuation().finite() {
                prop_assert!(v >= bound);
            }
        }

        #[test]
        fn propagation_is_monotone(lam in prop::collection::vec(0i64..4, 4), nu in prop::collection::vec(0i64..5, 4)) {
            let mut lam = lam;
            lam.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Coweight::from_gl(lam).unwrap();
            let mut nu = nu;
            nu.sort_unstable_by(|a, b| b.cmp(a));
            let nu = Coweight::from_gl(nu).unwrap();
            let b = root("1..2");
            prop_assume!(pairing(&PositiveRoot::new(1, 2).unwrap(), &lam).unwrap() >= 1);
            prop_assume!(pairing(&PositiveRoot::new(2, 3).unwrap(), &lam).unwrap() >= 1);
            let x = build_x(&lam, &b, 1).unwrap();
            let xt = build_x_tilde(&lam, &b, 1).unwrap();
            let sym = symbolic_conjugate(&xt, &x).unwrap();
            let init = init_bounds(&lam);
            let out = propagate_bounds(&init, &sym, &nu);
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!(out.bounds()[i][j] >= init.bounds()[i][j]);
                }
            }
            for s in out.steps() {
                prop_assert!(s.new > s.old);
            }
        }
    }
}
