//! Points of the affine Grassmannian of `PGL_{n+1}` as matrix cosets, and
//! relative positions via Smith invariants over `O = Q[[t]]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::series::{LaurentPoly, TruncPoly, Valuation};
use crate::type_a::Coweight;

/// A coset `g G(O)` given by a representative `g`.
///
/// Equality of points is [`coset_equal`]; the derived `PartialEq` compares
/// representatives only.
#[derive(Clone, PartialEq, Eq)]
pub struct GrPoint {
    matrix: PolyMatrix,
}

impl GrPoint {
    pub fn new(matrix: PolyMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::DimensionMismatch("points need matrices of size at least 2".into()));
        }
        if matrix.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(GrPoint { matrix })
    }

    /// The base point `[0]`.
    pub fn base(n: usize) -> Self {
        GrPoint { matrix: PolyMatrix::identity(n + 1) }
    }

    pub fn rank(&self) -> usize {
        self.matrix.dim() - 1
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> PolyMatrix {
        self.matrix
    }

    /// `g . self` for `g` in `G(K)`.
    pub fn left_mul(&self, g: &PolyMatrix) -> Result<GrPoint> {
        GrPoint::new(g.checked_mul(&self.matrix)?)
    }
}

impl fmt::Debug for GrPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrPoint[{}]", self.matrix)
    }
}

impl fmt::Display for GrPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// `[v] = t^v G(O)` using the canonical lift of `v`.
pub fn torus_point(v: &Coweight) -> GrPoint {
    GrPoint { matrix: PolyMatrix::torus(v.as_slice()) }
}

/// Invariant factor exponents `a_1 >= ... >= a_d` with
/// `m = u diag(t^{a_i}) u'` for `u, u'` in `GL_d(O)`.
pub fn smith_invariants(m: &PolyMatrix) -> Result<Vec<i64>> {
    let det = m.det();
    let Valuation::Finite(_) = det.valuation() else {
        return Err(Error::Singular);
    };
    let shift = m.min_valuation().finite().expect("nonzero matrix");
    let d = m.dim();
    // Every invariant of the shifted matrix is at most val(det), so working
    // modulo t^{val(det)+1} loses nothing.
    let big_d = det.valuation().finite().unwrap() - shift * d as i64;
    let order = big_d as usize + 1;

    let mut a: Vec<Vec<TruncPoly>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| TruncPoly::from_laurent(&m.get(i, j).shift(-shift), order).expect("shifted entry is integral"))
                .collect()
        })
        .collect();

    let mut out = Vec::with_capacity(d);
    for k in 0..d {
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if let Valuation::Finite(v) = e.valuation() {
                    if best.is_none_or(|(_, _, b)| v < b) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else {
            // Impossible for a nonsingular matrix, kept as a guard.
            return Err(Error::Singular);
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let vu = v as usize;
        let unit = a[k][k].div_t_pow(vu).expect("pivot valuation").inverse().expect("unit");
        let pivot_row: Vec<TruncPoly> = a[k].iter().map(|e| e * &unit).collect();
        a[k] = pivot_row;
        for r in k + 1..d {
            if a[r][k].is_zero() {
                continue;
            }
            let f = a[r][k].div_t_pow(vu).expect("minimal pivot");
            for c in k..d {
                let sub = &f * &a[k][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
        out.push(v + shift);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    Ok(out)
}

/// `d(L1, L2)`, the dominant coweight of `L1^{-1} L2`.
pub fn relative_position(l1: &GrPoint, l2: &GrPoint) -> Result<Coweight> {
    // adj(L1) differs from L1^{-1} by the scalar det(L1), which only shifts
    // every invariant by the same amount.
    let q = l1.matrix.adjugate().checked_mul(&l2.matrix)?;
    Coweight::from_gl(smith_invariants(&q)?)
}

/// Whether `L1` and `L2` are the same point of `Gr_{PGL}`.
pub fn coset_equal(l1: &GrPoint, l2: &GrPoint) -> Result<bool> {
    let q = l1.matrix.adjugate().checked_mul(&l2.matrix)?;
    let inv = smith_invariants(&q)?;
    Ok(inv.windows(2).all(|w| w[0] == w[1]))
}

/// A triple `(L1, L2, L3)` with prescribed cyclic relative positions
/// `d(L3, L1) = lam`, `d(L1, L2) = mu`, `d(L2, L3) = nu`.
#[derive(Clone, Debug)]
pub struct ConvolutionTriple {
    pub l1: GrPoint,
    pub l2: GrPoint,
    pub l3: GrPoint,
    pub lam: Coweight,
    pub mu: Coweight,
    pub nu: Coweight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub ok: bool,
    /// `d(L3, L1)`, `d(L1, L2)`, `d(L2, L3)`.
    pub distances: [Coweight; 3],
}

pub fn verify_convolution_triple(tr: &ConvolutionTriple) -> Result<MembershipReport> {
    let n = tr.l3.rank();
    if tr.l1.rank() != n || tr.l2.rank() != n {
        return Err(Error::RankMismatch { expected: n, found: tr.l1.rank().max(tr.l2.rank()) });
    }
    if !coset_equal(&tr.l3, &GrPoint::base(n))? {
        return Err(Error::NotBasePoint);
    }
    let d1 = relative_position(&tr.l3, &tr.l1)?;
    let d2 = relative_position(&tr.l1, &tr.l2)?;
    let d3 = relative_position(&tr.l2, &tr.l3)?;
    let ok = d1 == tr.lam && d2 == tr.mu && d3 == tr.nu;
    Ok(MembershipReport { ok, distances: [d1, d2, d3] })
}

/// Product of elementary matrices `I + a E_{i,j}`; with polynomial `a` this
/// lies in `SL(O)`. Diagonal operations are skipped.
pub fn elementary_product(dim: usize, ops: &[(usize, usize, LaurentPoly)]) -> PolyMatrix {
    let mut g = PolyMatrix::identity(dim);
    for (i, j, a) in ops {
        if i != j {
            g = &g * &PolyMatrix::elementary(dim, *i, *j, a.clone());
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use proptest::prelude::*;

    fn m(s: &str) -> PolyMatrix {
        s.parse().unwrap()
    }

    fn cw(s: &str) -> Coweight {
        s.parse().unwrap()
    }

    /// Invariants from determinantal divisors: `delta_k` is the minimal
    /// valuation over all `k x k` minors and `a_(d-k+1) = delta_k - delta_(k-1)`.
    fn smith_by_minors(a: &PolyMatrix) -> Vec<i64> {
        fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << d)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..d).filter(|i| m & (1 << i) != 0).collect())
                .collect()
        }
        let d = a.dim();
        let mut deltas = vec![0i64];
        for k in 1..=d {
            let mut best = Valuation::Infinity;
            for r in subsets(d, k) {
                for c in subsets(d, k) {
                    best = best.min(a.minor(&r, &c).valuation());
                }
            }
            deltas.push(best.finite().unwrap());
        }
        let mut inv: Vec<i64> = (1..=d).map(|k| deltas[k] - deltas[k - 1]).collect();
        inv.sort_unstable_by(|x, y| y.cmp(x));
        inv
    }

    fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(-3i64..=3, 1..4).prop_map(|cs| {
            LaurentPoly::from_coeffs(0, cs.into_iter().map(rat).collect())
        })
    }

    fn unimodular_strategy(dim: usize) -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec((0..dim, 0..dim, poly_strategy()), 0..8)
            .prop_map(move |ops| elementary_product(dim, &ops))
    }

    #[test]
    fn torus_invariants() {
        assert_eq!(smith_invariants(&PolyMatrix::torus(&[3, 1, 0])).unwrap(), vec![3, 1, 0]);
        assert_eq!(smith_invariants(&PolyMatrix::torus(&[0, 3, -1])).unwrap(), vec![3, 0, -1]);
        assert!(smith_invariants(&m("1,t;1,t")).is_err());
    }

    #[test]
    fn torus_point_examples() {
        assert!(torus_point(&Coweight::zero(3)).matrix().is_identity());
        assert_eq!(torus_point(&cw("fw:0,1,0,0")).matrix(), &PolyMatrix::torus(&[1, 1, 0, 0, 0]));
        assert_eq!(torus_point(&cw("fw:2,2")).matrix(), &PolyMatrix::torus(&[4, 2, 0]));
    }

    #[test]
    fn minors_oracle_on_fixed_matrices() {
        for s in ["t,1+t;t^2,3", "t^2,t,1;0,t,t^3;1,0,t", "1+t,t^-1,0;t,t,t;0,2t,t^4"] {
            let a = m(s);
            assert_eq!(smith_invariants(&a).unwrap(), smith_by_minors(&a), "{s}");
        }
    }

    #[test]
    fn base_distance_is_coweight() {
        for s in ["v:2,2,1,0,0", "v:4,2,0", "v:5,1,1,0"] {
            let l = cw(s);
            let r = relative_position(&GrPoint::base(l.rank()), &torus_point(&l)).unwrap();
            assert_eq!(r, l);
        }
    }

    #[test]
    fn coset_equality_examples() {
        let lam = cw("v:3,1,0");
        let u = m("1,t,2;0,1,0;3t,0,1+t");
        assert_eq!(u.constant_term_det(), rat(1));
        let moved = GrPoint::new(torus_point(&lam).matrix() * &u).unwrap();
        assert!(coset_equal(&torus_point(&lam), &moved).unwrap());
        assert!(!coset_equal(&GrPoint::base(2), &torus_point(&cw("fw:1,0"))).unwrap());
        // Overall scalars are invisible in PGL.
        let scaled = GrPoint::new(torus_point(&lam).matrix().scale(&LaurentPoly::t_pow(2))).unwrap();
        assert!(coset_equal(&torus_point(&lam), &scaled).unwrap());
    }

    #[test]
    fn triple_of_torus_points() {
        let lam = cw("v:3,1,0");
        let mu = cw("v:2,2,0");
        let sum = &lam + &mu;
        let tr = ConvolutionTriple {
            l1: torus_point(&lam),
            l2: torus_point(&sum),
            l3: GrPoint::base(2),
            lam: lam.clone(),
            mu: mu.clone(),
            nu: sum.dualize_w0().unwrap(),
        };
        assert!(verify_convolution_triple(&tr).unwrap().ok);
        let bad = ConvolutionTriple { l3: torus_point(&lam), ..tr };
        assert_eq!(verify_convolution_triple(&bad), Err(Error::NotBasePoint));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_through_unimodular(
            exps in prop::collection::vec(-2i64..6, 3),
            u in unimodular_strategy(3),
            w in unimodular_strategy(3),
        ) {
            let a = &(&u * &PolyMatrix::torus(&exps)) * &w;
            let mut sorted = exps.clone();
            sorted.sort_unstable_by(|x, y| y.cmp(x));
            prop_assert_eq!(smith_invariants(&a).unwrap(), sorted);
        }

        #[test]
        fn agrees_with_minors(
            entries in prop::collection::vec(poly_strategy(), 9),
        ) {
            let a = PolyMatrix::from_rows(entries.chunks(3).map(|c| c.to_vec()).collect()).unwrap();
            prop_assume!(!a.det().is_zero());
            prop_assert_eq!(smith_invariants(&a).unwrap(), smith_by_minors(&a));
        }

        #[test]
        fn invariants_sum_to_det_valuation(
            e1 in prop::collection::vec(poly_strategy(), 4),
            e2 in prop::collection::vec(poly_strategy(), 4),
        ) {
            let a = PolyMatrix::from_rows(e1.chunks(2).map(|c| c.to_vec()).collect()).unwrap();
            let b = PolyMatrix::from_rows(e2.chunks(2).map(|c| c.to_vec()).collect()).unwrap();
            prop_assume!(!a.det().is_zero() && !b.det().is_zero());
            let total: i64 = smith_invariants(&(&a * &b)).unwrap().iter().sum();
            let expect = (a.det().valuation() + b.det().valuation()).finite().unwrap();
            prop_assert_eq!(total, expect);
        }

        #[test]
        fn left_invariance_and_symmetry(
            e1 in prop::collection::vec(-1i64..4, 3),
            e2 in prop::collection::vec(-1i64..4, 3),
            u in unimodular_strategy(3),
            g in unimodular_strategy(3),
        ) {
            let l1 = torus_point(&Coweight::from_gl(e1).unwrap());
            let l2 = GrPoint::new(&u * torus_point(&Coweight::from_gl(e2).unwrap()).matrix()).unwrap();
            let d = relative_position(&l1, &l2).unwrap();
            let moved = relative_position(&l1.left_mul(&g).unwrap(), &l2.left_mul(&g).unwrap()).unwrap();
            prop_assert_eq!(&d, &moved);
            let back = relative_position(&l2, &l1).unwrap();
            prop_assert_eq!(back, d.dualize_w0().unwrap());
        }

        #[test]
        fn coset_equal_is_an_equivalence(
            e in prop::collection::vec(0i64..4, 3),
            u in unimodular_strategy(3),
            w in unimodular_strategy(3),
        ) {
            let a = torus_point(&Coweight::from_gl(e).unwrap());
            let b = GrPoint::new(a.matrix() * &u).unwrap();
            let c = GrPoint::new(b.matrix() * &w).unwrap();
            prop_assert!(coset_equal(&a, &a).unwrap());
            prop_assert!(coset_equal(&a, &b).unwrap() && coset_equal(&b, &a).unwrap());
            prop_assert!(coset_equal(&b, &c).unwrap() && coset_equal(&a, &c).unwrap());
        }
    }
}
