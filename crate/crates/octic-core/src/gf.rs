//! Arithmetic in F_p and F_{p^k} for primes p > 5: field elements over a
//! deterministically chosen irreducible modulus, quadratic characters,
//! square roots (exhaustive for tiny fields, Tonelli–Shanks above), and
//! univariate root finding over extensions.

use crate::multipoly::{MultipolyError, Poly, Rational, Scalar, Vars};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("p must be a prime > 5, got {0}")]
    BadCharacteristic(u64),
    #[error("extension degree must be >= 1, got {0}")]
    BadDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of F_{0} used where F_{1} was expected")]
    SpecMismatch(u64, u64),
    #[error("coefficient {0} does not reduce mod p = {1}")]
    BadReduction(String, u64),
    #[error("field too large: q exceeds {0}")]
    FieldTooLarge(u64),
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
}

/// Cap on q = p^k; counting and root finding enumerate entire fields.
pub const MAX_Q: u64 = 1 << 21;

/// Description of F_{p^k}: characteristic, degree, and the monic irreducible
/// modulus with coefficients c_0..c_k stored constant-first. For k = 1 the
/// modulus is the placeholder x - 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
}

pub type Field = Arc<FieldSpec>;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Prime field F_p; rejects p <= 5 and composites outright.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p <= 5 || !is_prime(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        Ok(Arc::new(FieldSpec {
            p,
            k: 1,
            modulus: vec![0, 1],
        }))
    }

    /// F_{p^k} with the deterministic smallest irreducible modulus
    /// (lexicographic coefficient scan, constant term last).
    pub fn extension(p: u64, k: u32) -> Result<Field, FieldError> {
        if k == 0 {
            return Err(FieldError::BadDegree(k));
        }
        if k == 1 {
            return Self::prime(p);
        }
        if p <= 5 || !is_prime(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        match (p as u128).checked_pow(k) {
            Some(q) if q <= MAX_Q as u128 => {}
            _ => return Err(FieldError::FieldTooLarge(MAX_Q)),
        }
        let modulus = find_irreducible(p, k);
        Ok(Arc::new(FieldSpec { p, k, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// Modulus coefficients c_0..c_k, constant first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Human-readable modulus in the variable `x` (reported for
    /// reproducibility of extension-field labels).
    pub fn modulus_text(&self) -> String {
        if self.k == 1 {
            return "x".to_string();
        }
        let mut parts = vec![format!("x^{}", self.k)];
        for i in (0..self.k as usize).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            });
        }
        parts.join(" + ")
    }

    pub fn zero(self: &Arc<Self>) -> Fq {
        Fq {
            spec: self.clone(),
            repr: vec![0; self.k as usize],
        }
    }

    pub fn one(self: &Arc<Self>) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, n: u64) -> Fq {
        let mut repr = vec![0; self.k as usize];
        repr[0] = n % self.p;
        Fq {
            spec: self.clone(),
            repr,
        }
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> Fq {
        let p = self.p as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    /// Element from its base-p digit packing in [0, q).
    pub fn from_packed(self: &Arc<Self>, mut code: u64) -> Fq {
        let mut repr = vec![0; self.k as usize];
        for digit in repr.iter_mut() {
            *digit = code % self.p;
            code /= self.p;
        }
        debug_assert_eq!(code, 0, "packed code out of range");
        Fq {
            spec: self.clone(),
            repr,
        }
    }

    /// All field elements, in packed order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q()).map(move |c| self.from_packed(c))
    }
}

/// Element of F_{p^k}: canonical coefficient vector of length k with entries
/// in [0, p), constant coefficient first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fq {
    spec: Field,
    repr: Vec<u64>,
}

impl Fq {
    pub fn field(&self) -> &Field {
        &self.spec
    }

    pub fn repr(&self) -> &[u64] {
        &self.repr
    }

    /// Base-p digit packing into [0, q).
    pub fn packed(&self) -> u64 {
        let mut code = 0u64;
        for &d in self.repr.iter().rev() {
            code = code * self.spec.p + d;
        }
        code
    }

    pub fn in_prime_field(&self) -> bool {
        self.repr[1..].iter().all(|&d| d == 0)
    }

    /// Value in [0, p) when the element lies in the prime subfield.
    pub fn as_prime_value(&self) -> Option<u64> {
        self.in_prime_field().then_some(self.repr[0])
    }

    fn check_same(&self, rhs: &Fq) {
        assert!(
            self.spec == rhs.spec,
            "elements of different fields: q={} vs q={}",
            self.spec.q(),
            rhs.spec.q()
        );
    }

    pub fn add(&self, rhs: &Fq) -> Fq {
        self.check_same(rhs);
        let p = self.spec.p;
        Fq {
            spec: self.spec.clone(),
            repr: self
                .repr
                .iter()
                .zip(&rhs.repr)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Fq) -> Fq {
        self.check_same(rhs);
        let p = self.spec.p;
        Fq {
            spec: self.spec.clone(),
            repr: self
                .repr
                .iter()
                .zip(&rhs.repr)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }

    pub fn neg(&self) -> Fq {
        let p = self.spec.p;
        Fq {
            spec: self.spec.clone(),
            repr: self.repr.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    pub fn mul(&self, rhs: &Fq) -> Fq {
        self.check_same(rhs);
        let p = self.spec.p as u128;
        let k = self.spec.k as usize;
        if k == 1 {
            return Fq {
                spec: self.spec.clone(),
                repr: vec![((self.repr[0] as u128 * rhs.repr[0] as u128) % p) as u64],
            };
        }
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &a) in self.repr.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.repr.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % p;
            }
        }
        // x^(k+j) rewrites through the monic modulus
        for i in (k..2 * k - 1).rev() {
            let coeff = prod[i];
            if coeff == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let c = self.spec.modulus[j] as u128;
                if c == 0 {
                    continue;
                }
                let idx = i - k + j;
                prod[idx] = (prod[idx] + (p - c) * coeff) % p;
            }
        }
        Fq {
            spec: self.spec.clone(),
            repr: prod[..k].iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.repr.iter().all(|&d| d == 0)
    }

    pub fn pow(&self, mut n: u64) -> Fq {
        let mut base = self.clone();
        let mut acc = self.spec.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<Fq, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.spec.q() - 2))
    }

    pub fn div(&self, rhs: &Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self) -> Fq {
        self.pow(self.spec.p)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.k == 1 {
            return write!(f, "{}", self.repr[0]);
        }
        write!(f, "[")?;
        for (i, d) in self.repr.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({} in F_{})", self, self.spec.q())
    }
}

impl Scalar for Fq {
    fn zero_like(&self) -> Self {
        self.spec.zero()
    }

    fn one_like(&self) -> Self {
        self.spec.one()
    }

    fn is_zero(&self) -> bool {
        Fq::is_zero(self)
    }

    fn is_one(&self) -> bool {
        self.repr[0] == 1 && self.repr[1..].iter().all(|&d| d == 0)
    }

    fn add(&self, rhs: &Self) -> Self {
        Fq::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fq::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Fq::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        Fq::neg(self)
    }

    fn inv(&self) -> Option<Self> {
        Fq::inv(self).ok()
    }

    fn scale_nat(&self, n: u64) -> Self {
        self.mul(&self.spec.from_u64(n % self.spec.p))
    }
}

/// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
pub fn quadratic_character(a: &Fq) -> i32 {
    if a.is_zero() {
        return 0;
    }
    if a.pow((a.spec.q() - 1) / 2).is_one() {
        1
    } else {
        -1
    }
}

/// Square root when one exists, returning the candidate with the
/// lexicographically smaller coefficient vector. Exhaustive search doubles
/// as the oracle for tiny fields; prime fields beyond 2^16 use
/// Tonelli–Shanks.
pub fn sqrt_in_field(a: &Fq) -> Option<Fq> {
    if a.is_zero() {
        return Some(a.clone());
    }
    if quadratic_character(a) == -1 {
        return None;
    }
    let spec = a.spec.clone();
    let r = if spec.q() <= 1 << 16 {
        spec.elements().find(|r| r.mul(r) == *a)?
    } else if spec.k == 1 {
        spec.from_u64(tonelli_shanks(a.repr[0], spec.p)?)
    } else {
        return None; // extension fields beyond 2^16 are outside scope
    };
    let other = r.neg();
    Some(if r.repr <= other.repr { r } else { other })
}

fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
        let mut base = b as u128;
        let mut acc = 1u128;
        let m = p as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u64
    }
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    let mut s = p - 1;
    let mut e = 0u32;
    while s % 2 == 0 {
        s /= 2;
        e += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = e;
    let mut c = pow_mod(z, s, p);
    let mut t = pow_mod(n, s, p);
    let mut r = pow_mod(n, (s + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = (t2 as u128 * t2 as u128 % p as u128) as u64;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    Some(r)
}

// ---------------------------------------------------------------------------
// dense univariate helpers over F_p / F_q
// ---------------------------------------------------------------------------

fn poly_mod_mul(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    for i in (k..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            let m = modulus[j] as u128;
            if m == 0 {
                continue;
            }
            prod[i - k + j] = (prod[i - k + j] + (p as u128 - m) * c) % p as u128;
        }
    }
    let mut out: Vec<u64> = prod.iter().take(k).map(|&c| c as u64).collect();
    out.resize(k, 0);
    out
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut e = p - 2;
    let mut base = a as u128;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

fn trim_u64(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a;
    trim_u64(&mut a);
    let db = b.len() - 1;
    let lb_inv = mod_inv(b[db], p);
    while a.len() > db {
        let la = *a.last().unwrap();
        if la == 0 {
            a.pop();
            continue;
        }
        let shift = a.len() - 1 - db;
        let f = la as u128 * lb_inv as u128 % p as u128;
        for i in 0..=db {
            let sub = f * b[i] as u128 % p as u128;
            a[shift + i] = ((a[shift + i] as u128 + p as u128 - sub) % p as u128) as u64;
        }
        trim_u64(&mut a);
    }
    a
}

fn poly_gcd_deg(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    let mut a = a;
    let mut b = b;
    trim_u64(&mut a);
    trim_u64(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if f[0] == 0 {
        return false; // divisible by x
    }
    // x^{p^t} mod f
    let frob_power = |times: usize| -> Vec<u64> {
        let mut cur = vec![0u64, 1];
        cur.resize(k.max(2), 0);
        cur.truncate(k);
        if k == 1 {
            unreachable!("irreducibility scan only runs for k >= 2");
        }
        for _ in 0..times {
            let mut acc = vec![0u64; k];
            acc[0] = 1;
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mod_mul(&acc, &base, f, p);
                }
                base = poly_mod_mul(&base, &base, f, p);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    };
    let mut xk = frob_power(k);
    xk[1] = (xk[1] + p - 1) % p; // x^{p^k} - x
    if xk.iter().any(|&c| c != 0) {
        return false;
    }
    let mut prime_divs = vec![];
    let mut n = k;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            prime_divs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        prime_divs.push(n);
    }
    for r in prime_divs {
        let mut xd = frob_power(k / r);
        xd[1] = (xd[1] + p - 1) % p;
        trim_u64(&mut xd);
        if xd.is_empty() {
            return false; // f divides x^{p^{k/r}} - x: all factors too small
        }
        if poly_gcd_deg(xd, f.to_vec(), p) > 0 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest (coefficient vector compared with the
/// constant term last) monic degree-k irreducible over F_p. Deterministic
/// across runs by construction.
pub fn find_irreducible(p: u64, k: u32) -> Vec<u64> {
    assert!(k >= 2);
    let k = k as usize;
    let mut tuple = vec![0u64; k]; // (c_{k-1}, ..., c_1, c_0)
    loop {
        let mut f: Vec<u64> = Vec::with_capacity(k + 1);
        f.push(tuple[k - 1]);
        for i in (0..k - 1).rev() {
            f.push(tuple[i]);
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        let mut i = k;
        loop {
            assert!(i > 0, "irreducible scan exhausted (impossible)");
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < p {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Roots of an integer-coefficient univariate polynomial over the extensions
/// F_{p^e}, e = 1..=max_ext_degree, by exhaustive evaluation. Returns
/// (root, e, multiplicity) with each root listed once, in the smallest field
/// containing it (checked intrinsically through Frobenius).
pub fn univariate_roots(
    coeffs: &[i64],
    base: &Field,
    max_ext_degree: u32,
) -> Result<Vec<(Fq, u32, u32)>, FieldError> {
    let p = base.p() as i64;
    if coeffs.iter().all(|&c| c.rem_euclid(p) == 0) {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for e in 1..=max_ext_degree {
        let field = FieldSpec::extension(base.p(), e)?;
        let cs: Vec<Fq> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        for (root, mult) in roots_in_field(&cs, &field) {
            let minimal = (1..e).filter(|d| e % d == 0).all(|d| {
                let mut r = root.clone();
                for _ in 0..d {
                    r = r.frobenius();
                }
                r != root
            });
            if minimal {
                out.push((root, e, mult));
            }
        }
    }
    Ok(out)
}

/// All roots of a dense univariate polynomial inside one field, with
/// multiplicities via repeated deflation.
pub fn roots_in_field(coeffs: &[Fq], field: &Field) -> Vec<(Fq, u32)> {
    let mut found = Vec::new();
    for cand in field.elements() {
        let mut work = coeffs.to_vec();
        let mut mult = 0u32;
        loop {
            if work.iter().all(|c| c.is_zero()) || work.len() <= 1 {
                break;
            }
            let mut acc = field.zero();
            for c in work.iter().rev() {
                acc = acc.mul(&cand).add(c);
            }
            if !acc.is_zero() {
                break;
            }
            mult += 1;
            work = deflate_fq(&work, &cand, field);
        }
        if mult > 0 {
            found.push((cand, mult));
        }
    }
    found
}

fn deflate_fq(coeffs: &[Fq], r: &Fq, field: &Field) -> Vec<Fq> {
    let mut out = vec![field.zero(); coeffs.len() - 1];
    let mut carry = field.zero();
    for i in (0..coeffs.len() - 1).rev() {
        carry = coeffs[i + 1].add(&carry.mul(r));
        out[i] = carry.clone();
    }
    out
}

/// Reduce a rational scalar into the prime subfield of `field`; errors when
/// the denominator is divisible by p.
pub fn reduce_rational(c: &Rational, field: &Field) -> Result<Fq, FieldError> {
    use num_integer::Integer;
    use num_traits::Zero;
    let p = num_bigint::BigInt::from(field.p());
    let den = c.denom().mod_floor(&p);
    if den.is_zero() {
        return Err(FieldError::BadReduction(c.to_string(), field.p()));
    }
    let num = c.numer().mod_floor(&p);
    let num_el = field.from_u64(u64::try_from(num).expect("mod_floor is nonnegative"));
    let den_el = field.from_u64(u64::try_from(den).expect("mod_floor is nonnegative"));
    num_el.div(&den_el)
}

/// Coefficientwise reduction of a rational polynomial into `field`.
pub fn reduce_poly(f: &Poly<Rational>, field: &Field) -> Result<Poly<Fq>, FieldError> {
    f.map_coeffs(|c| reduce_rational(c, field))
}

/// Prime-subfield embedding of an F_p polynomial into a larger field over
/// the same p.
pub fn embed_poly(f: &Poly<Fq>, target: &Field) -> Result<Poly<Fq>, FieldError> {
    f.map_coeffs(|c| {
        c.as_prime_value()
            .map(|v| target.from_u64(v))
            .ok_or_else(|| FieldError::SpecMismatch(c.field().q(), target.q()))
    })
}

/// Dense coefficient list (constant first) of an effectively univariate
/// polynomial over Fq; also reports which variable carried the degree.
pub fn dense_univariate(f: &Poly<Fq>) -> Result<(Vec<Fq>, usize), MultipolyError> {
    if f.is_zero() {
        return Err(MultipolyError::ZeroPolynomial);
    }
    let mut var = None;
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
    let zero = f.any_coeff().unwrap().zero_like();
    let mut out = vec![zero; deg + 1];
    for (m, c) in f.terms() {
        out[m.exp(var) as usize] = c.clone();
    }
    Ok((out, var))
}

fn trim_fq(v: &mut Vec<Fq>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_rem_fq(mut a: Vec<Fq>, b: &[Fq]) -> Vec<Fq> {
    trim_fq(&mut a);
    let db = b.len() - 1;
    let lb_inv = b[db].inv().expect("nonzero leading coefficient");
    while a.len() > db {
        let la = a.last().unwrap().clone();
        if la.is_zero() {
            a.pop();
            continue;
        }
        let shift = a.len() - 1 - db;
        let factor = la.mul(&lb_inv);
        for i in 0..=db {
            let t = b[i].mul(&factor);
            a[shift + i] = a[shift + i].sub(&t);
        }
        trim_fq(&mut a);
    }
    a
}

/// Monic gcd of two dense univariate polynomials over Fq.
pub fn univariate_gcd_fq(a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim_fq(&mut a);
    trim_fq(&mut b);
    while !b.is_empty() {
        let r = poly_rem_fq(a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        if !l.is_one() {
            let inv = l.inv().unwrap();
            for c in &mut a {
                *c = c.mul(&inv);
            }
        }
    }
    a
}

/// Squarefree test: gcd(f, f') is constant.
pub fn is_squarefree(coeffs: &[Fq]) -> bool {
    let mut f = coeffs.to_vec();
    trim_fq(&mut f);
    if f.len() <= 1 {
        return true;
    }
    let field = f[0].field().clone();
    let deriv: Vec<Fq> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&field.from_u64(i as u64 % field.p())))
        .collect();
    if deriv.iter().all(|c| c.is_zero()) {
        return false; // p-th power
    }
    univariate_gcd_fq(&f, &deriv).len() == 1
}

/// Variable polynomial over Fq.
pub fn fq_var(vars: &Vars, name: &str, field: &Field) -> Poly<Fq> {
    Poly::var_with(vars, name, field.one()).expect("known variable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_characteristics_rejected() {
        for p in [2u64, 3, 5] {
            assert!(FieldSpec::prime(p).is_err());
        }
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(7).is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f7 = FieldSpec::prime(7).unwrap();
        let three = f7.from_u64(3);
        let five = f7.from_u64(5);
        assert!(three.mul(&five).is_one());
        for a in f7.elements().skip(1) {
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        assert!(f7.zero().inv().is_err());
    }

    #[test]
    fn deterministic_irreducibles() {
        // x^2 + 1 over F_7 (7 = 3 mod 4), x^2 + 2 over F_5 would apply if 5
        // were admitted; the k=3 modulus must at least be irreducible
        assert_eq!(find_irreducible(7, 2), vec![1, 0, 1]);
        assert_eq!(find_irreducible(11, 2), vec![1, 0, 1]);
        let m = find_irreducible(7, 3);
        assert_eq!(m.len(), 4);
        assert!(is_irreducible(&m, 7));
        // rejects x^2 - 1 shape: reducibility witness
        assert!(!is_irreducible(&[7 - 1, 0, 1], 7));
    }

    #[test]
    fn frobenius_permutes_conjugate_roots() {
        // brute force over all of F_49: a^7 is the other root of a's minimal
        // polynomial over F_7
        let f49 = FieldSpec::extension(7, 2).unwrap();
        for a in f49.elements() {
            let c = a.frobenius();
            // a and c share trace and norm in F_7
            let tr = a.add(&c);
            let nm = a.mul(&c);
            assert!(tr.in_prime_field());
            assert!(nm.in_prime_field());
            assert_eq!(c.frobenius(), a);
        }
    }

    #[test]
    fn character_values_match_square_table() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(quadratic_character(&f7.from_u64(4)), 1);
        assert_eq!(quadratic_character(&f7.from_u64(3)), -1);
        assert_eq!(quadratic_character(&f7.zero()), 0);
        // squares mod 7 are {1, 2, 4}
        let squares: Vec<u64> = (1..7).filter(|&n| quadratic_character(&f7.from_u64(n)) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }

    #[test]
    fn character_is_multiplicative_exhaustively() {
        for (p, k) in [(7u64, 1u32), (7, 2)] {
            let f = FieldSpec::extension(p, k).unwrap();
            let els: Vec<Fq> = f.elements().collect();
            for a in &els {
                for b in &els {
                    assert_eq!(
                        quadratic_character(&a.mul(b)),
                        quadratic_character(a) * quadratic_character(b)
                    );
                }
            }
        }
    }

    #[test]
    fn half_the_units_are_squares() {
        for (p, k) in [(7u64, 1u32), (7, 2), (7, 3), (11, 1), (11, 2)] {
            let f = FieldSpec::extension(p, k).unwrap();
            let q = f.q();
            let squares = f
                .elements()
                .filter(|a| quadratic_character(a) == 1)
                .count() as u64;
            assert_eq!(squares, (q - 1) / 2, "q = {q}");
        }
    }

    #[test]
    fn sqrt_choices_and_correctness() {
        let f7 = FieldSpec::prime(7).unwrap();
        // sqrt(2) = 3 (tie-break picks 3 over 4)
        assert_eq!(sqrt_in_field(&f7.from_u64(2)), Some(f7.from_u64(3)));
        assert_eq!(sqrt_in_field(&f7.zero()), Some(f7.zero()));
        assert_eq!(sqrt_in_field(&f7.from_u64(3)), None);
        // exhaustive consistency over F_49
        let f49 = FieldSpec::extension(7, 2).unwrap();
        for a in f49.elements() {
            if let Some(r) = sqrt_in_field(&a) {
                assert_eq!(r.mul(&r), a);
            } else {
                assert_eq!(quadratic_character(&a), -1);
            }
        }
    }

    #[test]
    fn tonelli_shanks_on_larger_primes() {
        // p = 1 mod 4 exercises the full Tonelli-Shanks loop
        let p = 1000003u64; // within the sqrt fast path cutoff? q > 2^16, prime
        let f = FieldSpec::prime(p).unwrap();
        for n in [2u64, 3, 5, 123456, 999999] {
            let a = f.from_u64(n);
            match sqrt_in_field(&a) {
                Some(r) => assert_eq!(r.mul(&r), a),
                None => assert_eq!(quadratic_character(&a), -1),
            }
        }
    }

    #[test]
    fn frobenius_is_a_field_homomorphism() {
        let f343 = FieldSpec::extension(7, 3).unwrap();
        let samples: Vec<Fq> = (0..25).map(|i| f343.from_packed(i * 13 % 343)).collect();
        for a in &samples {
            for b in &samples {
                assert_eq!(a.add(b).frobenius(), a.frobenius().add(&b.frobenius()));
                assert_eq!(a.mul(b).frobenius(), a.frobenius().mul(&b.frobenius()));
            }
        }
    }

    #[test]
    fn roots_over_extensions() {
        let f7 = FieldSpec::prime(7).unwrap();
        // x^2 + 1 has no roots in F_7 (7 = 3 mod 4), two in F_49
        let roots = univariate_roots(&[1, 0, 1], &f7, 2).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|(_, e, m)| *e == 2 && *m == 1));
        // x(x-1)(x-2): all three in F_7
        let roots = univariate_roots(&[0, 2, -3, 1], &f7, 2).unwrap();
        let mut vals: Vec<u64> = roots
            .iter()
            .map(|(r, e, _)| {
                assert_eq!(*e, 1);
                r.as_prime_value().unwrap()
            })
            .collect();
        vals.sort();
        assert_eq!(vals, vec![0, 1, 2]);
        // (x-3)^2: root 3 with multiplicity 2
        let roots = univariate_roots(&[9, -6, 1], &f7, 1).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].0.as_prime_value(), Some(3));
        assert_eq!(roots[0].2, 2);
    }

    #[test]
    fn packed_codes_roundtrip() {
        let f343 = FieldSpec::extension(7, 3).unwrap();
        for code in [0u64, 1, 6, 7, 48, 342] {
            assert_eq!(f343.from_packed(code).packed(), code);
        }
    }

    #[test]
    fn squarefree_detection() {
        let f7 = FieldSpec::prime(7).unwrap();
        let c = |v: &[i64]| -> Vec<Fq> { v.iter().map(|&x| f7.from_i64(x)).collect() };
        assert!(is_squarefree(&c(&[0, 2, -3, 1]))); // x(x-1)(x-2)
        assert!(!is_squarefree(&c(&[9, -6, 1]))); // (x-3)^2
        assert!(is_squarefree(&c(&[5]))); // constants are trivially squarefree
    }

    #[test]
    fn rational_reduction() {
        use num_bigint::BigInt;
        let f7 = FieldSpec::prime(7).unwrap();
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(reduce_rational(&half, &f7).unwrap(), f7.from_u64(4));
        let bad = Rational::new(BigInt::from(1), BigInt::from(7));
        assert!(reduce_rational(&bad, &f7).is_err());
    }
}
