use super::monomial::Monomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::{Debug, Display};

/// Arbitrary-precision rational, the coefficient domain of every
/// characteristic-zero computation. Always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Coefficient field for sparse polynomials.
///
/// `zero_like`/`one_like` exist because finite-field elements carry their
/// field with them; there is no global constant. On rationals they ignore
/// `self`.
pub trait Scalar: Clone + PartialEq + Eq + Debug + Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Multiply by a natural number (formal derivatives scale by exponents).
    fn scale_nat(&self, n: u64) -> Self;

    /// Canonical rescaling of a term list (sorted leading-first) used for
    /// Gröbner-basis output. Default: monic.
    fn canonicalize_terms(terms: &mut [(Monomial, Self)]) {
        if let Some((_, lc)) = terms.first() {
            if !lc.is_one() {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                for (_, c) in terms.iter_mut() {
                    *c = c.mul(&inv);
                }
            }
        }
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn one_like(&self) -> Self {
        Rational::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn scale_nat(&self, n: u64) -> Self {
        self * Rational::from_integer(BigInt::from(n))
    }

    /// Rational Gröbner generators are normalized to primitive integer
    /// content with positive leading coefficient, which keeps coefficient
    /// growth in check and makes bases reproducible.
    fn canonicalize_terms(terms: &mut [(Monomial, Self)]) {
        if terms.is_empty() {
            return;
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in terms.iter() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if terms[0].1.is_negative() {
            factor = -factor;
        }
        for (_, c) in terms.iter_mut() {
            *c = &*c * &factor;
        }
    }
}
