//! Rational root extraction for univariate polynomials over the rationals,
//! by divisor search on the primitive integer form, with multiplicities via
//! repeated deflation.

use super::poly::QPoly;
use super::scalar::Rational;
use super::MultipolyError;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Result of a rational-root search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRoots {
    /// Distinct rational roots.
    pub roots: BTreeSet<Rational>,
    /// True when non-rational roots remain (root count with multiplicity is
    /// short of the degree).
    pub residual: bool,
}

/// Dense coefficient vector c_0..c_d of an (effectively) univariate
/// polynomial.
fn dense_coeffs(f: &QPoly) -> Result<(Vec<Rational>, usize), MultipolyError> {
    if f.is_zero() {
        return Err(MultipolyError::ZeroPolynomial);
    }
    let mut var: Option<usize> = None;
    for (m, _) in f.terms() {
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                match var {
                    None => var = Some(i),
                    Some(v) if v == i => {}
                    Some(v) => {
                        return Err(MultipolyError::NotUnivariate(format!(
                            "both {} and {}",
                            f.vars().name(v),
                            f.vars().name(i)
                        )))
                    }
                }
            }
        }
    }
    let var = var.unwrap_or(0);
    let deg = f.degree_in(var) as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in f.terms() {
        coeffs[m.exp(var) as usize] = c.clone();
    }
    Ok((coeffs, var))
}

fn eval_dense(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division by (x - r); the caller guarantees r is a root.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); coeffs.len() - 1];
    let mut carry = Rational::zero();
    for i in (0..coeffs.len() - 1).rev() {
        carry = &coeffs[i + 1] + &carry * r;
        out[i] = carry.clone();
    }
    out
}

fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>, MultipolyError> {
    let n = n.abs();
    let v: u128 = (&n)
        .try_into()
        .map_err(|_| MultipolyError::CoefficientTooLarge(n.to_string()))?;
    let mut divs = Vec::new();
    let mut d: u128 = 1;
    while d.saturating_mul(d) <= v {
        if v % d == 0 {
            divs.push(BigInt::from(d));
            if d != v / d {
                divs.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Ok(divs)
}

/// All rational roots of a nonzero univariate polynomial, with a residual
/// flag for remaining non-rational roots.
pub fn rational_roots(f: &QPoly) -> Result<RationalRoots, MultipolyError> {
    let (mut coeffs, _) = dense_coeffs(f)?;
    let mut roots = BTreeSet::new();
    let mut found_with_multiplicity = 0usize;
    let degree = coeffs.len() - 1;

    // strip trailing zero coefficients: roots at 0
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        roots.insert(Rational::zero());
        found_with_multiplicity += 1;
        coeffs.remove(0);
    }

    'outer: while coeffs.len() > 1 {
        // primitive integer form for the divisor search
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &coeffs {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| {
                let r = c * Rational::new(den_lcm.clone(), num_gcd.clone());
                debug_assert!(r.denom().is_one());
                r.numer().clone()
            })
            .collect();
        let a0 = &ints[0];
        let ad = ints.last().unwrap();
        debug_assert!(!a0.is_zero());
        let p_divs = small_divisors(a0)?;
        let q_divs = small_divisors(ad)?;
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i32, -1] {
                    let cand = Rational::new(p * BigInt::from(sign), q.clone());
                    if eval_dense(&coeffs, &cand).is_zero() {
                        roots.insert(cand.clone());
                        found_with_multiplicity += 1;
                        coeffs = deflate(&coeffs, &cand);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    Ok(RationalRoots {
        roots,
        residual: found_with_multiplicity < degree,
    })
}

/// Monic gcd of two univariate rational polynomials given as dense
/// coefficient vectors (used by the zeta module for coprimality checks).
pub fn univariate_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn rem(mut a: Vec<Rational>, b: &[Rational]) -> Vec<Rational> {
        let db = b.len() - 1;
        let lb = b.last().unwrap();
        while a.len() > db {
            let la = a.last().unwrap().clone();
            if la.is_zero() {
                a.pop();
                continue;
            }
            let shift = a.len() - 1 - db;
            let factor = la / lb;
            for i in 0..=db {
                let t = &b[i] * &factor;
                a[shift + i] = &a[shift + i] - &t;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        a
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &l;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::super::{parse_rational_poly, vars};
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn roots_of_split_cubic() {
        let vs = vars(["t"]);
        let f = parse_rational_poly(&vs, "t*(t-1)*(t-2)").unwrap();
        let r = rational_roots(&f).unwrap();
        assert_eq!(
            r.roots.into_iter().collect::<Vec<_>>(),
            vec![q(0, 1), q(1, 1), q(2, 1)]
        );
        assert!(!r.residual);
    }

    #[test]
    fn irreducible_quadratic_has_residual_flag() {
        let vs = vars(["t"]);
        let f = parse_rational_poly(&vs, "t^2 + 1").unwrap();
        let r = rational_roots(&f).unwrap();
        assert!(r.roots.is_empty());
        assert!(r.residual);
    }

    #[test]
    fn fractional_roots_and_multiplicity() {
        let vs = vars(["t"]);
        let f = parse_rational_poly(&vs, "(2*t - 1)^2 * (3*t + 2)").unwrap();
        let r = rational_roots(&f).unwrap();
        assert_eq!(
            r.roots.into_iter().collect::<Vec<_>>(),
            vec![q(-2, 3), q(1, 2)]
        );
        assert!(!r.residual);
    }

    #[test]
    fn mixed_rational_and_irrational() {
        let vs = vars(["t"]);
        let f = parse_rational_poly(&vs, "(t - 3) * (t^2 - 2)").unwrap();
        let r = rational_roots(&f).unwrap();
        assert_eq!(r.roots.into_iter().collect::<Vec<_>>(), vec![q(3, 1)]);
        assert!(r.residual);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let vs = vars(["t"]);
        let f = QPoly::zero(&vs);
        assert!(rational_roots(&f).is_err());
    }

    #[test]
    fn gcd_of_univariate_polys() {
        // gcd((x-1)(x-2), (x-1)(x-3)) = x - 1
        let a = vec![q(2, 1), q(-3, 1), q(1, 1)];
        let b = vec![q(3, 1), q(-4, 1), q(1, 1)];
        let g = univariate_gcd(&a, &b);
        assert_eq!(g, vec![q(-1, 1), q(1, 1)]);
        // coprime
        let c = vec![q(1, 1), q(1, 1)];
        let d = vec![q(1, 1), q(-1, 1)];
        assert_eq!(univariate_gcd(&c, &d).len(), 1);
    }
}
