//! Zeta functions from point counts: rational zeta data for curves, exact
//! count prediction via Newton identities, complex root extraction by
//! Durand-Kerner iteration, Frobenius weight buckets, and the weight-3
//! cardinality obstruction.

use crate::multipoly::{univariate_gcd, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum ZetaError {
    #[error("constant term must be 1, got {0}")]
    BadConstantTerm(String),
    #[error("numerator and denominator share a rational root")]
    NotCoprime,
    #[error("Weil bound violated: |{0} + 1 - N| > 2 sqrt({0}) for N = {1}")]
    WeilViolation(u64, u64),
    #[error("zetas live over different fields: q = {0} vs {1}")]
    MismatchedQ(u64, u64),
    #[error("Durand-Kerner failed to converge after {0} iterations (residual {1:e})")]
    NoConvergence(usize, f64),
    #[error("degree must be at least 1")]
    ConstantPolynomial,
}

/// Integer polynomial in T with constant term 1, as a coefficient vector
/// c_0 = 1, c_1, ..., c_d.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolyT {
    coeffs: Vec<BigInt>,
}

impl IntPolyT {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, ZetaError> {
        Self::from_bigints(coeffs.into_iter().map(BigInt::from).collect())
    }

    pub fn from_bigints(mut coeffs: Vec<BigInt>) -> Result<Self, ZetaError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() || !coeffs[0].is_one() {
            return Err(ZetaError::BadConstantTerm(
                coeffs.first().map(|c| c.to_string()).unwrap_or_default(),
            ));
        }
        Ok(IntPolyT { coeffs })
    }

    pub fn one() -> Self {
        IntPolyT {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolyT { coeffs: out }
    }

    /// Power sums of the reciprocal roots, via Newton's identities on the
    /// exact integer coefficients: for f = prod (1 - a_i T), returns
    /// s_k = sum a_i^k for k = 1..=kmax.
    pub fn reciprocal_root_power_sums(&self, kmax: usize) -> Vec<BigInt> {
        let d = self.degree();
        let a = |i: usize| -> BigInt {
            if i <= d {
                self.coeffs[i].clone()
            } else {
                BigInt::zero()
            }
        };
        let mut s: Vec<BigInt> = Vec::with_capacity(kmax + 1);
        s.push(BigInt::from(d as i64)); // s_0 = number of roots
        for k in 1..=kmax {
            // s_k = -k a_k - sum_{i=1}^{k-1} a_i s_{k-i}
            let mut acc = -a(k) * BigInt::from(k as i64);
            for i in 1..k {
                acc -= a(i) * &s[k - i];
            }
            s.push(acc);
        }
        s.truncate(kmax + 1);
        s
    }

    fn to_rational_vec(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Display for IntPolyT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "T")?,
                1 => write!(f, "{mag}*T")?,
                _ if mag.is_one() => write!(f, "T^{i}")?,
                _ => write!(f, "{mag}*T^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolyT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolyT({self})")
    }
}

/// Rational zeta function num/den with constant terms 1 and no common
/// rational roots, over F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFunction {
    num: IntPolyT,
    den: IntPolyT,
    q: u64,
}

impl ZetaFunction {
    pub fn new(num: IntPolyT, den: IntPolyT, q: u64) -> Result<Self, ZetaError> {
        let g = univariate_gcd(&num.to_rational_vec(), &den.to_rational_vec());
        if g.len() > 1 {
            // a common factor over Q is only a problem when it has rational
            // roots; reject any nontrivial gcd to keep data canonical
            return Err(ZetaError::NotCoprime);
        }
        Ok(ZetaFunction { num, den, q })
    }

    pub fn num(&self) -> &IntPolyT {
        &self.num
    }

    pub fn den(&self) -> &IntPolyT {
        &self.den
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// P^1 over F_q: 1 / ((1 - T)(1 - qT)).
    pub fn projective_line(q: u64) -> Self {
        let den = IntPolyT::from_bigints(vec![
            BigInt::one(),
            BigInt::from(-1i64 - q as i64),
            BigInt::from(q),
        ])
        .unwrap();
        ZetaFunction {
            num: IntPolyT::one(),
            den,
            q,
        }
    }

    /// Multiply two zetas over the same q, cancelling common factors is the
    /// caller's business; inputs must stay coprime.
    pub fn mul(&self, rhs: &ZetaFunction) -> Result<ZetaFunction, ZetaError> {
        if self.q != rhs.q {
            return Err(ZetaError::MismatchedQ(self.q, rhs.q));
        }
        ZetaFunction::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den), self.q)
    }

    pub fn serialize(&self) -> String {
        format!("num={}; den={}; q={}", self.num, self.den, self.q)
    }
}

/// Zeta function of an elliptic curve from its F_p point count:
/// (1 - aT + pT^2) / ((1 - T)(1 - pT)) with a = p + 1 - N1. Rejects counts
/// violating the Hasse bound (those signal a counting bug).
pub fn zeta_elliptic_from_count(n1: u64, p: u64) -> Result<ZetaFunction, ZetaError> {
    let a = p as i64 + 1 - n1 as i64;
    if a * a > 4 * p as i64 {
        return Err(ZetaError::WeilViolation(p, n1));
    }
    let num = IntPolyT::from_bigints(vec![BigInt::one(), BigInt::from(-a), BigInt::from(p)])
        .unwrap();
    let den = IntPolyT::from_bigints(vec![
        BigInt::one(),
        BigInt::from(-1i64 - p as i64),
        BigInt::from(p),
    ])
    .unwrap();
    ZetaFunction::new(num, den, p)
}

/// Predicted point count over F_{q^k}: the difference of reciprocal-root
/// power sums of denominator and numerator, exactly.
pub fn predict_count(z: &ZetaFunction, k: usize) -> BigInt {
    assert!(k >= 1);
    let den_sums = z.den.reciprocal_root_power_sums(k);
    let num_sums = z.num.reciprocal_root_power_sums(k);
    &den_sums[k] - &num_sums[k]
}

/// All complex roots of an integer polynomial by Durand-Kerner iteration.
/// Residuals are checked against 1e-10 times the coefficient scale;
/// multiplicities are recovered by clustering within 1e-7.
pub fn complex_roots(poly: &IntPolyT) -> Result<Vec<(Complex64, usize)>, ZetaError> {
    let d = poly.degree();
    if d == 0 {
        return Err(ZetaError::ConstantPolynomial);
    }
    let coeffs: Vec<f64> = poly
        .coeffs
        .iter()
        .map(|c| c.to_f64().expect("coefficient fits in f64"))
        .collect();
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    // monic normalization for iteration
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // deterministic spiral start
    let mut roots: Vec<Complex64> = (0..d)
        .map(|i| Complex64::new(0.4, 0.9).powu(i as u32 + 1))
        .collect();
    let max_iter = 1000;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut max_delta = 0.0f64;
        for i in 0..d {
            let zi = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            let delta = eval(zi) / denom;
            roots[i] = zi - delta;
            max_delta = max_delta.max(delta.norm());
        }
        if max_delta < 1e-14 {
            converged = true;
            break;
        }
    }
    // residual check against the original polynomial scale
    let eval_orig = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let tol = 1e-10 * scale.max(1.0);
    let worst = roots
        .iter()
        .map(|&z| eval_orig(z).norm())
        .fold(0.0f64, f64::max);
    if !converged && worst > tol {
        return Err(ZetaError::NoConvergence(max_iter, worst));
    }
    // cluster multiplicities within 1e-7
    let mut clustered: Vec<(Complex64, usize)> = Vec::new();
    'next: for &z in &roots {
        for (c, m) in clustered.iter_mut() {
            if (*c - z).norm() < 1e-7 {
                *m += 1;
                // running mean keeps the representative centered
                *c = (*c * (*m as f64 - 1.0) + z) / (*m as f64);
                continue 'next;
            }
        }
        clustered.push((z, 1));
    }
    Ok(clustered)
}

/// Roots of the numerator sorted into weight buckets: bucket i collects
/// roots with |root| within relative tolerance of q^(-i/2). Unmatched roots
/// are reported, never dropped.
#[derive(Debug, Clone)]
pub struct WeightMultiset {
    pub q: u64,
    pub tolerance: f64,
    /// weight i in 0..=6 -> roots (with multiplicity) at |.| = q^(-i/2)
    pub buckets: BTreeMap<u32, Vec<(Complex64, usize)>>,
    pub unassigned: Vec<(Complex64, usize)>,
}

impl WeightMultiset {
    pub fn bucket_cardinality(&self, i: u32) -> usize {
        self.buckets
            .get(&i)
            .map(|v| v.iter().map(|(_, m)| m).sum())
            .unwrap_or(0)
    }
}

pub const DEFAULT_WEIGHT_TOLERANCE: f64 = 1e-6;

/// Bucket the numerator roots of a zeta function by Frobenius weight.
/// Magnitudes are compared in log scale with relative tolerance.
pub fn weight_buckets(z: &ZetaFunction, tol: f64) -> Result<WeightMultiset, ZetaError> {
    let mut buckets: BTreeMap<u32, Vec<(Complex64, usize)>> = BTreeMap::new();
    let mut unassigned = Vec::new();
    if z.num.degree() > 0 {
        let roots = complex_roots(&z.num)?;
        let logq = (z.q as f64).ln();
        for (root, mult) in roots {
            let target = (0..=6u32).find(|&i| {
                let expected = -(i as f64) / 2.0 * logq;
                (root.norm().ln() - expected).abs() <= tol.max(f64::EPSILON) * expected.abs().max(1.0)
            });
            match target {
                Some(i) => buckets.entry(i).or_default().push((root, mult)),
                None => unassigned.push((root, mult)),
            }
        }
    }
    Ok(WeightMultiset {
        q: z.q,
        tolerance: tol,
        buckets,
        unassigned,
    })
}

/// Verdict of the weight-3 comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// weight-3 bucket cardinalities differ: the two zetas cannot come from
    /// varieties agreeing away from curves
    Obstructed { lhs: usize, rhs: usize },
    NotObstructed { common: usize },
}

/// Compare the weight-3 bucket cardinalities of two zetas over the same q.
/// Multiplying either side by factors whose roots all sit in weight buckets
/// 0 and 1 cannot change the verdict, which is exactly what makes the
/// comparison meaningful for zetas equal up to curve factors.
pub fn weight3_obstruction(
    za: &ZetaFunction,
    zb: &ZetaFunction,
) -> Result<ObstructionVerdict, ZetaError> {
    if za.q != zb.q {
        return Err(ZetaError::MismatchedQ(za.q, zb.q));
    }
    let a = weight_buckets(za, DEFAULT_WEIGHT_TOLERANCE)?.bucket_cardinality(3);
    let b = weight_buckets(zb, DEFAULT_WEIGHT_TOLERANCE)?.bucket_cardinality(3);
    if a != b {
        Ok(ObstructionVerdict::Obstructed { lhs: a, rhs: b })
    } else {
        Ok(ObstructionVerdict::NotObstructed { common: a })
    }
}

/// True iff every numerator root lands in one of the expected weight
/// buckets within the default tolerance.
pub fn weil_check(z: &ZetaFunction, expected_weights: &[u32]) -> Result<bool, ZetaError> {
    let buckets = weight_buckets(z, DEFAULT_WEIGHT_TOLERANCE)?;
    if !buckets.unassigned.is_empty() {
        return Ok(false);
    }
    Ok(buckets
        .buckets
        .keys()
        .all(|w| expected_weights.contains(w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn elliptic_zeta_from_counts() {
        // N = 8 over F_7: a = 0, numerator 1 + 7T^2
        let z = zeta_elliptic_from_count(8, 7).unwrap();
        assert_eq!(z.num(), &IntPolyT::new(vec![1, 0, 7]).unwrap());
        assert_eq!(z.serialize(), "num=1 + 7*T^2; den=1 - 8*T + 7*T^2; q=7");
        // supersingular shape for any N = p + 1
        let z = zeta_elliptic_from_count(12, 11).unwrap();
        assert_eq!(z.num(), &IntPolyT::new(vec![1, 0, 11]).unwrap());
        // bound violation: N = p + 1 + ceil(2 sqrt p) + 1
        assert!(zeta_elliptic_from_count(7 + 1 + 6 + 1, 7).is_err());
    }

    #[test]
    fn predicted_counts() {
        let z = zeta_elliptic_from_count(8, 7).unwrap();
        assert_eq!(predict_count(&z, 1), int(8));
        assert_eq!(predict_count(&z, 2), int(64)); // q^2 + 1 + 2q for a = 0
        assert_eq!(predict_count(&z, 3), int(344)); // a_{p^3} = 0
        let p1 = ZetaFunction::projective_line(7);
        for k in 1..=4usize {
            assert_eq!(predict_count(&p1, k), int(7i64.pow(k as u32) + 1));
        }
    }

    #[test]
    fn functional_equation_pairing() {
        // reciprocal roots of 1 - aT + pT^2 multiply to p
        for (n1, p) in [(8u64, 7u64), (12, 11), (20, 19)] {
            let z = zeta_elliptic_from_count(n1, p).unwrap();
            let s = z.num().reciprocal_root_power_sums(2);
            // s1^2 - s2 = 2 * product of roots = 2p
            let prod2 = &s[1] * &s[1] - &s[2];
            assert_eq!(prod2, int(2 * p as i64));
        }
    }

    #[test]
    fn roots_of_simple_factors() {
        // 1 + 7T^2: roots +- i/sqrt(7)
        let roots = complex_roots(&IntPolyT::new(vec![1, 0, 7]).unwrap()).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            assert!((r.norm() - 1.0 / 7f64.sqrt()).abs() < 1e-12);
        }
        // (1 - T)(1 - 7T): roots 1 and 1/7
        let p = IntPolyT::new(vec![1, -8, 7]).unwrap();
        let mut roots = complex_roots(&p).unwrap();
        roots.sort_by(|a, b| a.0.norm().partial_cmp(&b.0.norm()).unwrap());
        assert!((roots[0].0.re - 1.0 / 7.0).abs() < 1e-12);
        assert!((roots[1].0.re - 1.0).abs() < 1e-12);
        // double root clustering: (1 - T)^2
        let p = IntPolyT::new(vec![1, -2, 1]).unwrap();
        let roots = complex_roots(&p).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].1, 2);
    }

    #[test]
    fn weight_bucket_assignment() {
        let z = zeta_elliptic_from_count(8, 7).unwrap();
        let w = weight_buckets(&z, DEFAULT_WEIGHT_TOLERANCE).unwrap();
        assert_eq!(w.bucket_cardinality(1), 2);
        assert_eq!(w.bucket_cardinality(0), 0);
        assert_eq!(w.bucket_cardinality(3), 0);
        assert!(w.unassigned.is_empty());
        // weight-3 factor 1 + 343T^2 over q = 7
        let z3 = ZetaFunction::new(
            IntPolyT::new(vec![1, 0, 343]).unwrap(),
            IntPolyT::one(),
            7,
        )
        .unwrap();
        let w = weight_buckets(&z3, DEFAULT_WEIGHT_TOLERANCE).unwrap();
        assert_eq!(w.bucket_cardinality(3), 2);
        // bucketing stable under tolerance halving
        let w2 = weight_buckets(&z3, DEFAULT_WEIGHT_TOLERANCE / 2.0).unwrap();
        assert_eq!(w2.bucket_cardinality(3), 2);
    }

    #[test]
    fn mixed_weight_numerator() {
        // (1 + 7T^2)(1 + 343T^2): two roots at weight 1, two at weight 3
        let num = IntPolyT::new(vec![1, 0, 7]).unwrap().mul(&IntPolyT::new(vec![1, 0, 343]).unwrap());
        let z = ZetaFunction::new(num, IntPolyT::one(), 7).unwrap();
        let w = weight_buckets(&z, DEFAULT_WEIGHT_TOLERANCE).unwrap();
        assert_eq!(w.bucket_cardinality(1), 2);
        assert_eq!(w.bucket_cardinality(3), 2);
    }

    #[test]
    fn weil_check_cases() {
        let z = zeta_elliptic_from_count(8, 7).unwrap();
        assert!(weil_check(&z, &[1]).unwrap());
        assert!(!weil_check(&z, &[0, 3]).unwrap());
        // P^1 zeta: empty numerator, vacuously true
        assert!(weil_check(&ZetaFunction::projective_line(7), &[]).unwrap());
        // 1 - 3T with q = 7: |1/3| matches no q^(-i/2)
        let z = ZetaFunction::new(IntPolyT::new(vec![1, -3]).unwrap(), IntPolyT::one(), 7)
            .unwrap();
        assert!(!weil_check(&z, &[0, 1, 2, 3, 4, 5, 6]).unwrap());
    }

    #[test]
    fn obstruction_verdicts() {
        // b3 = 4 vs b3 = 2 configuration with supersingular placeholders
        let w3 = IntPolyT::new(vec![1, 0, 343]).unwrap();
        let za = ZetaFunction::new(w3.mul(&w3), IntPolyT::one(), 7).unwrap();
        let zb = ZetaFunction::new(w3.clone(), IntPolyT::one(), 7).unwrap();
        assert_eq!(
            weight3_obstruction(&za, &zb).unwrap(),
            ObstructionVerdict::Obstructed { lhs: 4, rhs: 2 }
        );
        assert_eq!(
            weight3_obstruction(&za, &za).unwrap(),
            ObstructionVerdict::NotObstructed { common: 4 }
        );
        // multiplying by weight-<=1 factors never flips the verdict
        let curve_factor = ZetaFunction::new(
            IntPolyT::new(vec![1, -2, 7]).unwrap(), // a = 2 elliptic numerator
            IntPolyT::one(),
            7,
        )
        .unwrap();
        let za_dressed = za.mul(&curve_factor).unwrap();
        assert_eq!(
            weight3_obstruction(&za_dressed, &zb).unwrap(),
            ObstructionVerdict::Obstructed { lhs: 4, rhs: 2 }
        );
        // mismatched q errors
        let z11 = zeta_elliptic_from_count(12, 11).unwrap();
        assert!(weight3_obstruction(&za, &z11).is_err());
    }

    #[test]
    fn coprimality_enforced() {
        // num = den = 1 - T is rejected
        let n = IntPolyT::new(vec![1, -1]).unwrap();
        assert!(ZetaFunction::new(n.clone(), n, 7).is_err());
    }
}
