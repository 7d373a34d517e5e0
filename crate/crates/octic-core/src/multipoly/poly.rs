use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::scalar::{Rational, Scalar};
use super::{check_same_vars, join_names, MultipolyError, Vars};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;

/// Sparse multivariate polynomial. Terms are kept sorted by degrevlex,
/// leading term first, with no zero coefficients, so equality is structural
/// and printing is canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C: Scalar> {
    vars: Vars,
    terms: Vec<(Monomial, C)>,
}

/// Polynomial over the rationals.
pub type QPoly = Poly<Rational>;

const STORAGE_ORDER: MonomialOrder = MonomialOrder::DegRevLex;

impl<C: Scalar> Poly<C> {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        Poly {
            vars: vars.clone(),
            terms: vec![(Monomial::one(vars.len()), c)],
        }
    }

    /// The variable `name` with coefficient `one` (pass the field's 1; finite
    /// field elements carry their field with them).
    pub fn var_with(vars: &Vars, name: &str, one: C) -> Result<Self, MultipolyError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| MultipolyError::UnknownVariable(name.to_string()))?;
        Ok(Poly {
            vars: vars.clone(),
            terms: vec![(Monomial::var(vars.len(), i, 1), one)],
        })
    }

    pub fn from_terms(vars: &Vars, terms: Vec<(Monomial, C)>) -> Self {
        let mut map: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), vars.len());
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&c);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    if !c.is_zero() {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = map.into_iter().collect();
        terms.sort_by(|a, b| STORAGE_ORDER.cmp(&b.0, &a.0));
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial is a (possibly zero) constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => None, // zero: caller must supply its own zero element
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    /// Does the variable occur at all?
    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &C)> {
        if order == STORAGE_ORDER {
            return self.terms.first().map(|(m, c)| (m, c));
        }
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Some nonzero coefficient, used to mint 0/1 of the right field.
    pub fn any_coeff(&self) -> Option<&C> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, MultipolyError> {
        check_same_vars(&self.vars, &rhs.vars)?;
        Ok(self.merge(rhs, false))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, MultipolyError> {
        check_same_vars(&self.vars, &rhs.vars)?;
        Ok(self.merge(rhs, true))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MultipolyError> {
        check_same_vars(&self.vars, &rhs.vars)?;
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&c);
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        if !c.is_zero() {
                            e.insert(c);
                        }
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().collect();
        terms.sort_by(|a, b| STORAGE_ORDER.cmp(&b.0, &a.0));
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    fn merge(&self, rhs: &Self, subtract: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match STORAGE_ORDER.cmp(&self.terms[i].0, &rhs.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let (m, c) = &rhs.terms[j];
                    out.push((m.clone(), if subtract { c.neg() } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (m, ca) = &self.terms[i];
                    let cb = &rhs.terms[j].1;
                    let c = if subtract { ca.sub(cb) } else { ca.add(cb) };
                    if !c.is_zero() {
                        out.push((m.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for (m, c) in &rhs.terms[j..] {
            out.push((m.clone(), if subtract { c.neg() } else { c.clone() }));
        }
        Poly {
            vars: self.vars.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, co)| (m.clone(), co.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mo, c)| (mo.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut n = n;
        if n == 0 {
            let one = self
                .any_coeff()
                .map(|c| c.one_like())
                .expect("cannot raise the zero polynomial to the 0th power without a unit");
            return Self::constant(&self.vars, one);
        }
        while n > 0 {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.try_mul(&base).expect("same vars"),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.try_mul(&base).expect("same vars");
            }
        }
        result.unwrap()
    }

    /// Exact composition `f(v -> map[v])`. Every image must live on the same
    /// target variable list; variables without an image must exist in the
    /// target list and map to themselves.
    pub fn substitute(&self, map: &HashMap<String, Poly<C>>) -> Result<Poly<C>, MultipolyError> {
        let target: Vars = match map.values().next() {
            Some(p) => p.vars.clone(),
            None => self.vars.clone(),
        };
        for (name, img) in map {
            check_same_vars(&img.vars, &target)?;
            if self.vars.index_of(name).is_none() {
                return Err(MultipolyError::UnknownVariable(name.clone()));
            }
        }
        if self.is_zero() {
            return Ok(Poly::zero(&target));
        }
        let one = self.terms[0].1.one_like();
        // image of each source variable
        let mut images: Vec<Poly<C>> = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            let name = self.vars.name(i);
            match map.get(name) {
                Some(p) => images.push(p.clone()),
                None => images.push(Poly::var_with(&target, name, one.clone()).map_err(|_| {
                    MultipolyError::UnknownVariable(format!(
                        "{name} (missing from substitution targets [{}])",
                        join_names(&target)
                    ))
                })?),
            }
        }
        // memoized powers
        let mut powers: Vec<Vec<Poly<C>>> = images
            .iter()
            .map(|p| vec![Poly::constant(&target, one.clone()), p.clone()])
            .collect();
        let mut acc = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().try_mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.try_mul(&powers[i][e as usize])?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative.
    pub fn partial_derivative(&self, var: &str) -> Result<Poly<C>, MultipolyError> {
        let i = self
            .vars
            .index_of(var)
            .ok_or_else(|| MultipolyError::UnknownVariable(var.to_string()))?;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] = e - 1;
            let c = c.scale_nat(e as u64);
            if !c.is_zero() {
                terms.push((Monomial::new(exps), c));
            }
        }
        Ok(Poly::from_terms(&self.vars, terms))
    }

    /// Exact division by `var^power`; fails when any term has a smaller
    /// exponent (callers treat that as odd vanishing order).
    pub fn exact_divide(&self, var: &str, power: u16) -> Result<Poly<C>, MultipolyError> {
        let i = self
            .vars
            .index_of(var)
            .ok_or_else(|| MultipolyError::UnknownVariable(var.to_string()))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exp(i) < power {
                return Err(MultipolyError::NotDivisible {
                    poly: self.to_string(),
                    var: var.to_string(),
                    power: power as u32,
                });
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= power;
            terms.push((Monomial::new(exps), c.clone()));
        }
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_exp(&self, var: usize) -> u16 {
        self.terms
            .iter()
            .map(|(m, _)| m.exp(var))
            .min()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.vars.len());
        assert!(!point.is_empty());
        let zero = point[0].zero_like();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Map coefficients into another field (e.g. reduction mod p).
    pub fn map_coeffs<D: Scalar, E>(
        &self,
        mut f: impl FnMut(&C) -> Result<D, E>,
    ) -> Result<Poly<D>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.push((m.clone(), d));
            }
        }
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Rebuild over an extended variable list with a fresh first variable.
    pub fn lift_front(&self, lifted: &Vars) -> Poly<C> {
        debug_assert_eq!(lifted.len(), self.vars.len() + 1);
        Poly {
            vars: lifted.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.lift_front(), c.clone()))
                .collect(),
        }
    }

    /// Drop the first `k` variables; every term must be free of them.
    pub fn project(&self, k: usize, target: &Vars) -> Poly<C> {
        debug_assert!(self
            .terms
            .iter()
            .all(|(m, _)| m.exps()[..k].iter().all(|&e| e == 0)));
        Poly {
            vars: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.project(k), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn from_sorted_terms_unchecked(vars: Vars, terms: Vec<(Monomial, C)>) -> Self {
        Poly { vars, terms }
    }
}

impl Poly<Rational> {
    /// Variable as a rational polynomial.
    pub fn qvar(vars: &Vars, name: &str) -> Self {
        Self::var_with(vars, name, Rational::one()).expect("known variable")
    }

    pub fn qconst(vars: &Vars, n: i64) -> Self {
        Self::constant(vars, Rational::from_integer(BigInt::from(n)))
    }

    /// Content: positive rational c with self = c * primitive integer poly.
    pub fn content(&self) -> Rational {
        if self.terms.is_empty() {
            return Rational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Primitive integer form with positive leading (degrevlex) coefficient.
    pub fn primitive(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        Scalar::canonicalize_terms(&mut terms);
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    /// Canonical text form: terms in descending lex order (`u^2 - x*y*z`),
    /// coefficients as `num/den`. This string keys the count cache.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<&(Monomial, C)> = self.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::Lex.cmp(&b.0, &a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                m.format(self.vars.names(), f)?;
            } else {
                write!(f, "{mag}*")?;
                m.format(self.vars.names(), f)?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<'a, C: Scalar> std::ops::$trait<&'a Poly<C>> for &'a Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &'a Poly<C>) -> Poly<C> {
                self.$inner(rhs).expect("operands share a variable list")
            }
        }
        impl<C: Scalar> std::ops::$trait<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                self.$inner(&rhs).expect("operands share a variable list")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Scalar> std::ops::Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_rational_poly, vars};
    use super::*;
    use std::collections::HashMap;

    fn p(vs: &Vars, s: &str) -> QPoly {
        parse_rational_poly(vs, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let vs = vars(["x", "y"]);
        let lhs = p(&vs, "(x+y)*(x-y)");
        assert_eq!(lhs, p(&vs, "x^2 - y^2"));
    }

    #[test]
    fn self_subtraction_is_zero() {
        let vs = vars(["x", "y", "z"]);
        let f = p(&vs, "x + 2*x*y + z + 7");
        assert!(f.try_sub(&f).unwrap().is_zero());
    }

    #[test]
    fn step_one_branch_expansion() {
        // xyz*(x+2xy+z+7) expanded by hand
        let vs = vars(["x", "y", "z"]);
        let f = p(&vs, "x*y*z*(x + 2*x*y + z + 7)");
        assert_eq!(f, p(&vs, "x^2*y*z + 2*x^2*y^2*z + x*y*z^2 + 7*x*y*z"));
    }

    #[test]
    fn substitution_matches_step_two_charts() {
        let vs = vars(["x", "y", "z"]);
        let f = p(&vs, "x*y*z*(x + 2*x*y + z + 7)");
        // y -> x*y gives x^2 * (y*z*(x + 2*x^2*y + z + 7))
        let mut map = HashMap::new();
        map.insert("y".to_string(), p(&vs, "x*y"));
        let g = f.substitute(&map).unwrap();
        assert_eq!(g, p(&vs, "x^2 * y*z*(x + 2*x^2*y + z + 7)"));
        // x -> y*x gives y^2 * (x*z*(x*y + 2*x*y^2 + z + 7))
        let mut map = HashMap::new();
        map.insert("x".to_string(), p(&vs, "y*x"));
        let g = f.substitute(&map).unwrap();
        assert_eq!(g, p(&vs, "y^2 * x*z*(x*y + 2*x*y^2 + z + 7)"));
        // identity substitution
        let mut map = HashMap::new();
        map.insert("x".to_string(), p(&vs, "x"));
        assert_eq!(f.substitute(&map).unwrap(), f);
    }

    #[test]
    fn substitution_composes() {
        let vs = vars(["x", "y"]);
        let f = p(&vs, "x^2*y + 3*x - y^2");
        let sigma: HashMap<String, QPoly> =
            [("x".to_string(), p(&vs, "x + y"))].into_iter().collect();
        let tau: HashMap<String, QPoly> =
            [("y".to_string(), p(&vs, "x*y - 1"))].into_iter().collect();
        let lhs = f.substitute(&sigma).unwrap().substitute(&tau).unwrap();
        // tau . sigma: x -> tau(x+y) = x + x*y - 1, y -> x*y - 1
        let comp: HashMap<String, QPoly> = [
            ("x".to_string(), p(&vs, "x + x*y - 1")),
            ("y".to_string(), p(&vs, "x*y - 1")),
        ]
        .into_iter()
        .collect();
        assert_eq!(lhs, f.substitute(&comp).unwrap());
    }

    #[test]
    fn partial_derivatives() {
        let vs = vars(["u", "x", "y", "z"]);
        let f = p(&vs, "u^2 - x*y*z");
        assert_eq!(f.partial_derivative("u").unwrap(), p(&vs, "2*u"));
        let g = p(&vs, "x^2*y");
        assert_eq!(g.partial_derivative("x").unwrap(), p(&vs, "2*x*y"));
        // product rule case from the step-2 chart
        let h = p(&vs, "y*z*(x + 2*x^2*y + z + 7)");
        let expect = p(&vs, "y*(x + 2*x^2*y + z + 7) + y*z");
        assert_eq!(h.partial_derivative("z").unwrap(), expect);
    }

    #[test]
    fn derivative_product_rule_holds() {
        let vs = vars(["x", "y"]);
        let f = p(&vs, "x^3*y - 2*x*y^2 + 5");
        let g = p(&vs, "x*y + y^3 - 1");
        let fg = f.try_mul(&g).unwrap();
        let lhs = fg.partial_derivative("y").unwrap();
        let rhs = f
            .try_mul(&g.partial_derivative("y").unwrap())
            .unwrap()
            .try_add(&g.try_mul(&f.partial_derivative("y").unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_by_variable_power() {
        let vs = vars(["x", "y", "z"]);
        assert_eq!(
            p(&vs, "x^2*y").exact_divide("x", 2).unwrap(),
            p(&vs, "y")
        );
        let f = p(&vs, "x^2 * y*z*(x + 2*x^2*y + z + 7)");
        assert_eq!(
            f.exact_divide("x", 2).unwrap(),
            p(&vs, "y*z*(x + 2*x^2*y + z + 7)")
        );
        assert!(p(&vs, "x^2*y + x").exact_divide("x", 2).is_err());
    }

    #[test]
    fn mismatched_variable_lists_error() {
        let a = vars(["x", "y"]);
        let b = vars(["x", "z"]);
        let f = p(&a, "x + y");
        let g = p(&b, "x + z");
        assert!(f.try_add(&g).is_err());
    }

    #[test]
    fn display_is_canonical_and_parses_back() {
        let vs = vars(["u", "x", "y", "z"]);
        let f = p(&vs, "u^2 - x*y*z");
        assert_eq!(f.to_string(), "u^2 - x*y*z");
        let g = p(&vs, "-1/2*x + y^2 - 3");
        assert_eq!(parse_rational_poly(&vs, &g.to_string()).unwrap(), g);
        assert_eq!(QPoly::zero(&vs).to_string(), "0");
    }

    #[test]
    fn primitive_form_strips_content() {
        let vs = vars(["x", "y"]);
        let f = p(&vs, "2/3*x - 4/3*y");
        let g = f.primitive();
        assert_eq!(g, p(&vs, "x - 2*y"));
        let h = p(&vs, "-2*x + 6*y");
        assert_eq!(h.primitive(), p(&vs, "x - 3*y"));
    }

    #[test]
    fn ring_axioms_on_fixed_samples() {
        let vs = vars(["x", "y", "z"]);
        let f = p(&vs, "x^2 - 3*y + z");
        let g = p(&vs, "y*z - 2");
        let h = p(&vs, "x + y + 1/5");
        let assoc_l = f.try_mul(&g).unwrap().try_mul(&h).unwrap();
        let assoc_r = f.try_mul(&g.try_mul(&h).unwrap()).unwrap();
        assert_eq!(assoc_l, assoc_r);
        let dist_l = f.try_add(&g).unwrap().try_mul(&h).unwrap();
        let dist_r = f
            .try_mul(&h)
            .unwrap()
            .try_add(&g.try_mul(&h).unwrap())
            .unwrap();
        assert_eq!(dist_l, dist_r);
    }
}
