//! Cross-ratio and j-invariant machinery: from four branch points of P^1 (or
//! a quartic's root set) to the Legendre parameter and the j-invariant of
//! the associated double cover.

use crate::gf::{self, Field, FieldError, FieldSpec, Fq};
use crate::multipoly::{rational_roots, MultipolyError, QPoly, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::One;

#[derive(Debug, thiserror::Error)]
pub enum EllipticError {
    #[error("branch points must be pairwise distinct")]
    RepeatedPoints,
    #[error("lambda in {{0, 1}} degenerates the curve")]
    DegenerateLambda,
    #[error("quartic must be squarefree of degree 3 or 4, got degree {0}")]
    BadQuartic(usize),
    #[error("quartic is not squarefree")]
    NotSquarefree,
    #[error("rational branch points required over Q; irrational roots remain")]
    IrrationalBranchPoints,
    #[error("roots did not split over extensions of degree <= {0}")]
    SplittingTooLarge(u32),
    #[error("j-invariant landed outside the prime field")]
    JOutsidePrimeField,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] MultipolyError),
}

/// Point of P^1 over a scalar field, in canonical form: (x : 1) or (1 : 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Point<C: Scalar> {
    x: C,
    y: C,
}

impl<C: Scalar> P1Point<C> {
    pub fn affine(x: C) -> Self {
        let y = x.one_like();
        P1Point { x, y }
    }

    pub fn infinity(one: C) -> Self {
        P1Point {
            x: one.clone(),
            y: one.zero_like(),
        }
    }

    pub fn new(x: C, y: C) -> Result<Self, EllipticError> {
        if y.is_zero() {
            if x.is_zero() {
                return Err(EllipticError::RepeatedPoints);
            }
            Ok(Self::infinity(x.one_like()))
        } else {
            let inv = y.inv().expect("nonzero");
            Ok(P1Point {
                x: x.mul(&inv),
                y: y.one_like(),
            })
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn coords(&self) -> (&C, &C) {
        (&self.x, &self.y)
    }

    fn det(&self, other: &Self) -> C {
        self.x.mul(&other.y).sub(&self.y.mul(&other.x))
    }
}

/// Four distinct points of P^1.
#[derive(Debug, Clone)]
pub struct BranchQuadruple<C: Scalar> {
    points: [P1Point<C>; 4],
}

impl<C: Scalar> BranchQuadruple<C> {
    pub fn new(points: [P1Point<C>; 4]) -> Result<Self, EllipticError> {
        for i in 0..4 {
            for j in (i + 1)..4 {
                if points[i].det(&points[j]).is_zero() {
                    return Err(EllipticError::RepeatedPoints);
                }
            }
        }
        Ok(BranchQuadruple { points })
    }

    pub fn points(&self) -> &[P1Point<C>; 4] {
        &self.points
    }
}

/// Cross-ratio: the Moebius map sending the first three points (in the order
/// given by `perm`) to infinity, 0, 1 evaluates the fourth to lambda.
pub fn cross_ratio<C: Scalar>(
    q: &BranchQuadruple<C>,
    perm: [usize; 4],
) -> Result<C, EllipticError> {
    let p = |i: usize| -> &P1Point<C> { &q.points[perm[i]] };
    // lambda = ([p4,p2][p3,p1]) / ([p4,p1][p3,p2])
    let num = p(3).det(p(1)).mul(&p(2).det(p(0)));
    let den = p(3).det(p(0)).mul(&p(2).det(p(1)));
    let inv = den.inv().ok_or(EllipticError::RepeatedPoints)?;
    Ok(num.mul(&inv))
}

/// j from the Legendre parameter: j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2),
/// normalized so the harmonic class (orbit of -1, 1/2, 2) lands on 1728.
pub fn j_from_lambda<C: Scalar>(lambda: &C) -> Result<C, EllipticError> {
    let one = lambda.one_like();
    if lambda.is_zero() || *lambda == one {
        return Err(EllipticError::DegenerateLambda);
    }
    let l2 = lambda.mul(lambda);
    let num_base = l2.sub(lambda).add(&one);
    let num = num_base.mul(&num_base).mul(&num_base).scale_nat(256);
    let lm1 = lambda.sub(&one);
    let den = l2.mul(&lm1.mul(&lm1));
    let inv = den.inv().ok_or(EllipticError::DegenerateLambda)?;
    Ok(num.mul(&inv))
}

/// Legendre curve y^2 = x (x - 1) (x - lambda).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreCurve<C: Scalar> {
    lambda: C,
}

impl<C: Scalar> LegendreCurve<C> {
    pub fn new(lambda: C) -> Result<Self, EllipticError> {
        if lambda.is_zero() || lambda.is_one() {
            return Err(EllipticError::DegenerateLambda);
        }
        Ok(LegendreCurve { lambda })
    }

    pub fn lambda(&self) -> &C {
        &self.lambda
    }

    pub fn j_invariant(&self) -> C {
        j_from_lambda(&self.lambda).expect("lambda not in {0,1}")
    }
}

/// Legendre model of the double cover branched at the quadruple, using the
/// identity ordering for the cross-ratio.
pub fn legendre_curve_of_quadruple<C: Scalar>(
    q: &BranchQuadruple<C>,
) -> Result<LegendreCurve<C>, EllipticError> {
    let lambda = cross_ratio(q, [0, 1, 2, 3])?;
    LegendreCurve::new(lambda)
}

/// The six-element orbit of lambda under reordering the branch points.
pub fn lambda_orbit<C: Scalar>(lambda: &C) -> Vec<C> {
    let one = lambda.one_like();
    let mut orbit = vec![lambda.clone(), one.sub(lambda)];
    if let Some(inv) = lambda.inv() {
        orbit.push(inv.clone());
        orbit.push(one.sub(&inv));
    }
    if let Some(inv1) = one.sub(lambda).inv() {
        orbit.push(inv1.clone());
        orbit.push(one.sub(&inv1));
    }
    orbit
}

/// j-invariant of y^2 = q(x) for a squarefree rational quartic (or cubic,
/// with infinity as the fourth branch point). Requires rational roots.
pub fn j_from_quartic_rational(q: &QPoly) -> Result<Rational, EllipticError> {
    let deg = q.total_degree() as usize;
    if deg != 3 && deg != 4 {
        return Err(EllipticError::BadQuartic(deg));
    }
    let rr = rational_roots(q)?;
    if rr.residual {
        return Err(EllipticError::IrrationalBranchPoints);
    }
    if rr.roots.len() != deg {
        // roots were found with multiplicity: not squarefree
        return Err(EllipticError::NotSquarefree);
    }
    let mut pts: Vec<P1Point<Rational>> = Vec::with_capacity(4);
    if deg == 3 {
        pts.push(P1Point::infinity(Rational::one()));
    }
    for r in rr.roots {
        pts.push(P1Point::affine(r));
    }
    let quad = BranchQuadruple::new([
        pts[0].clone(),
        pts[1].clone(),
        pts[2].clone(),
        pts[3].clone(),
    ])?;
    let lambda = cross_ratio(&quad, [0, 1, 2, 3])?;
    j_from_lambda(&lambda)
}

/// j-invariant of y^2 = q(x) over F_p: find the branch points over
/// extensions of degree <= 4 (a quartic's splitting field), compute the
/// cross-ratio there, and certify the j-invariant back into F_p.
pub fn j_from_quartic_mod_p(coeffs: &[i64], base: &Field) -> Result<Fq, EllipticError> {
    let p = base.p();
    let nonzero: Vec<usize> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c.rem_euclid(p as i64) != 0)
        .map(|(i, _)| i)
        .collect();
    let deg = nonzero.last().copied().unwrap_or(0);
    if deg != 3 && deg != 4 {
        return Err(EllipticError::BadQuartic(deg));
    }
    // squarefree over F_p
    let dense: Vec<Fq> = coeffs.iter().map(|&c| base.from_i64(c)).collect();
    if !gf::is_squarefree(&dense) {
        return Err(EllipticError::NotSquarefree);
    }
    // minimal degrees of the roots determine the common splitting field
    let per_degree = gf::univariate_roots(coeffs, base, 4)?;
    let mut l = 1u32;
    let mut count = 0usize;
    for (_, e, m) in &per_degree {
        l = num_integer::lcm(l, *e);
        count += *m as usize * if *e > 1 { *e as usize } else { 1 };
    }
    // conjugates are found once per orbit; total roots over the splitting
    // field must be deg
    if l > 4 || count < deg {
        return Err(EllipticError::SplittingTooLarge(4));
    }
    let split = FieldSpec::extension(p, l)?;
    let cs: Vec<Fq> = coeffs.iter().map(|&c| split.from_i64(c)).collect();
    let roots = gf::roots_in_field(&cs, &split);
    let total: u32 = roots.iter().map(|(_, m)| *m).sum();
    if total as usize != deg {
        return Err(EllipticError::SplittingTooLarge(4));
    }
    let mut pts: Vec<P1Point<Fq>> = Vec::with_capacity(4);
    if deg == 3 {
        pts.push(P1Point::infinity(split.one()));
    }
    for (r, m) in roots {
        if m != 1 {
            return Err(EllipticError::NotSquarefree);
        }
        pts.push(P1Point::affine(r));
    }
    let quad = BranchQuadruple::new([
        pts[0].clone(),
        pts[1].clone(),
        pts[2].clone(),
        pts[3].clone(),
    ])?;
    let lambda = cross_ratio(&quad, [0, 1, 2, 3])?;
    let j = j_from_lambda(&lambda)?;
    // j always lies in the base field; certify and project
    let v = j
        .as_prime_value()
        .ok_or(EllipticError::JOutsidePrimeField)?;
    Ok(base.from_u64(v))
}

/// 1728 as a rational number.
pub fn j_harmonic() -> Rational {
    Rational::from_integer(BigInt::from(1728))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{parse_rational_poly, vars};

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn quad_q(vals: [Option<i64>; 4]) -> BranchQuadruple<Rational> {
        let pts = vals.map(|v| match v {
            Some(n) => P1Point::affine(q(n)),
            None => P1Point::infinity(Rational::one()),
        });
        BranchQuadruple::new(pts).unwrap()
    }

    #[test]
    fn cross_ratio_of_normalized_points() {
        // (infinity, 0, 1, w) -> w
        for w in [2i64, 5, -3] {
            let quad = quad_q([None, Some(0), Some(1), Some(w)]);
            assert_eq!(cross_ratio(&quad, [0, 1, 2, 3]).unwrap(), q(w));
        }
    }

    #[test]
    fn pencil_quadruple_lands_in_harmonic_orbit() {
        // pencil points (1:0),(0:1),(1:1),(1:2) in the affine chart 0, inf, 1, 2
        let quad = quad_q([Some(0), None, Some(1), Some(2)]);
        let lambda = cross_ratio(&quad, [0, 1, 2, 3]).unwrap();
        assert!(lambda_orbit(&q(2)).contains(&lambda));
        assert_eq!(j_from_lambda(&lambda).unwrap(), j_harmonic());
    }

    #[test]
    fn reordering_stays_in_orbit() {
        let quad = quad_q([None, Some(0), Some(1), Some(5)]);
        let base = cross_ratio(&quad, [0, 1, 2, 3]).unwrap();
        let orbit = lambda_orbit(&base);
        for perm in [[1usize, 0, 2, 3], [2, 1, 0, 3], [0, 2, 1, 3], [3, 1, 2, 0]] {
            let l = cross_ratio(&quad, perm).unwrap();
            assert!(orbit.contains(&l), "{l} outside orbit of {base}");
        }
    }

    #[test]
    fn j_values() {
        assert_eq!(j_from_lambda(&q(2)).unwrap(), q(1728));
        assert_eq!(j_from_lambda(&q(-1)).unwrap(), q(1728));
        assert_eq!(j_from_lambda(&qq(1, 2)).unwrap(), q(1728));
        assert_eq!(j_from_lambda(&q(3)).unwrap(), qq(21952, 9));
        assert!(j_from_lambda(&q(0)).is_err());
        assert!(j_from_lambda(&q(1)).is_err());
    }

    #[test]
    fn j_constant_on_orbit() {
        for l in [q(7), qq(3, 5), q(-11)] {
            let j = j_from_lambda(&l).unwrap();
            for m in lambda_orbit(&l) {
                if Scalar::is_zero(&m) || Scalar::is_one(&m) {
                    continue;
                }
                assert_eq!(j_from_lambda(&m).unwrap(), j);
            }
        }
        // and over F_p
        let f11 = FieldSpec::prime(11).unwrap();
        for n in 2..10u64 {
            let l = f11.from_u64(n);
            let j = j_from_lambda(&l).unwrap();
            for m in lambda_orbit(&l) {
                if Scalar::is_zero(&m) || Scalar::is_one(&m) {
                    continue;
                }
                assert_eq!(j_from_lambda(&m).unwrap(), j);
            }
        }
    }

    #[test]
    fn cross_ratio_moebius_invariance() {
        // simultaneous Moebius transform z -> (2z + 3)/(z - 4) on all points
        let transform = |pt: &P1Point<Rational>| -> P1Point<Rational> {
            let (x, y) = pt.coords();
            let nx = &(x * &q(2)) + &(y * &q(3));
            let ny = x - &(y * &q(4));
            P1Point::new(nx, ny).unwrap()
        };
        let quad = quad_q([Some(0), Some(1), Some(2), None]);
        let l1 = cross_ratio(&quad, [0, 1, 2, 3]).unwrap();
        let moved = BranchQuadruple::new([
            transform(&quad.points()[0]),
            transform(&quad.points()[1]),
            transform(&quad.points()[2]),
            transform(&quad.points()[3]),
        ])
        .unwrap();
        let l2 = cross_ratio(&moved, [0, 1, 2, 3]).unwrap();
        assert_eq!(l1, l2);
    }

    #[test]
    fn quartic_j_over_q() {
        let vs = vars(["x"]);
        let p = |s: &str| parse_rational_poly(&vs, s).unwrap();
        // branch points {0,1,2,infinity}: the pencil configuration
        assert_eq!(j_from_quartic_rational(&p("x*(x-1)*(x-2)")).unwrap(), q(1728));
        // harmonic set {0, 1, -1, infinity}
        assert_eq!(j_from_quartic_rational(&p("x^3 - x")).unwrap(), q(1728));
        // generic quartic with rational roots: not 1728
        let j = j_from_quartic_rational(&p("x*(x-1)*(x-2)*(x-5)")).unwrap();
        assert_ne!(j, q(1728));
        // non-squarefree rejected
        assert!(j_from_quartic_rational(&p("x^2*(x-1)")).is_err());
        // irrational branch points rejected
        assert!(j_from_quartic_rational(&p("(x^2-2)*(x-1)")).is_err());
    }

    #[test]
    fn quartic_j_mod_p() {
        let f7 = FieldSpec::prime(7).unwrap();
        // x(x-1)(x-2) = x^3 - 3x^2 + 2x: 1728 mod 7 = 6
        let j = j_from_quartic_mod_p(&[0, 2, -3, 1], &f7).unwrap();
        assert_eq!(j.as_prime_value(), Some(6));
        let f11 = FieldSpec::prime(11).unwrap();
        let j = j_from_quartic_mod_p(&[0, 2, -3, 1], &f11).unwrap();
        assert_eq!(j.as_prime_value(), Some(1728 % 11));
        // roots in an extension: x^2+1 irreducible mod 7, times x(x-1)
        // branch points {i, -i, 0, 1} still give a j in F_7
        let j = j_from_quartic_mod_p(&[0, 0, 1, 0, 1], &f7);
        // x^2(x^2+1) is not squarefree: rejected
        assert!(j.is_err());
        let j = j_from_quartic_mod_p(&[0, 1, 1, 1, 1], &f7).unwrap(); // x^4+x^3+x^2+x = x(x+1)(x^2+1)
        assert!(j.in_prime_field());
    }

    #[test]
    fn negative_control_non_harmonic_quartic() {
        // x(x-1)(x-2)(x-lambda) with lambda = 4: the branch set {0,1,2,4} is
        // not harmonic mod 7 (lambda = 3 happens to collide with the
        // harmonic j residue mod 7, so it makes a poor control there)
        let f7 = FieldSpec::prime(7).unwrap();
        // expand x(x-1)(x-2)(x-4) = x^4 - 7x^3 + 14x^2 - 8x
        let j = j_from_quartic_mod_p(&[0, -8, 14, -7, 1], &f7).unwrap();
        assert_ne!(j.as_prime_value(), Some(1728 % 7));
        // over Q, lambda = 3 is already a valid control
        assert_ne!(j_from_lambda(&q(3)).unwrap(), q(1728));
    }

    #[test]
    fn quartic_invariance_under_moebius_substitution() {
        // j of y^2 = q(x) is invariant under fractional-linear substitution;
        // exhaustively over F_7 for a fixed quartic and all unimodular maps
        let f7 = FieldSpec::prime(7).unwrap();
        let base_j = j_from_quartic_mod_p(&[0, 2, -3, 1], &f7).unwrap();
        // x -> x + c translations keep the quartic squarefree cubic shape
        for c in 1..7i64 {
            // q(x + c) coefficients via binomial expansion of x^3-3x^2+2x
            let a = c;
            let c0 = a * a * a - 3 * a * a + 2 * a;
            let c1 = 3 * a * a - 6 * a + 2;
            let c2 = 3 * a - 3;
            let j = j_from_quartic_mod_p(&[c0, c1, c2, 1], &f7).unwrap();
            assert_eq!(j, base_j, "translation by {c}");
        }
    }

    #[test]
    fn legendre_curve_from_quadruple() {
        // set {0, 1, -1, infinity} listed with the normalized points first
        let quad = quad_q([None, Some(0), Some(1), Some(-1)]);
        let curve = legendre_curve_of_quadruple(&quad).unwrap();
        assert_eq!(curve.lambda(), &q(-1));
        assert_eq!(curve.j_invariant(), q(1728));
        // degenerate quadruple with repeats
        let dup = BranchQuadruple::new([
            P1Point::affine(q(0)),
            P1Point::affine(q(0)),
            P1Point::affine(q(1)),
            P1Point::infinity(Rational::one()),
        ]);
        assert!(dup.is_err());
    }
}
