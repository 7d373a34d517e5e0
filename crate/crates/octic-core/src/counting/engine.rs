//! Fast counting kernels: dense character table, digitwise packed
//! arithmetic, stratified projective enumeration partitioned across threads.
//! Exact integer arithmetic throughout; thread partitioning cannot change
//! the result because contributions are summed over disjoint ranges.

use super::CountError;
use crate::gf::{Field, Fq};
use crate::multipoly::{Poly, Scalar};
use rayon::prelude::*;

/// Character table plus packing data for one field.
pub(crate) struct FieldTables {
    pub p: u64,
    pub k: usize,
    pub q: u64,
    /// chi indexed by packed code; i8 in {-1, 0, 1}
    pub chi: Vec<i8>,
}

impl FieldTables {
    pub fn new(field: &Field) -> Self {
        let q = field.q();
        let mut chi = vec![0i8; q as usize];
        // fill by walking powers of a generator: chi(g^m) = (-1)^m
        let g = find_generator(field);
        let mut acc = field.one();
        for m in 0..(q - 1) {
            chi[acc.packed() as usize] = if m % 2 == 0 { 1 } else { -1 };
            acc = acc.mul(&g);
        }
        chi[0] = 0;
        FieldTables {
            p: field.p(),
            k: field.k() as usize,
            q,
            chi,
        }
    }
}

fn find_generator(field: &Field) -> Fq {
    let q = field.q();
    let mut prime_factors = vec![];
    let mut n = q - 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            prime_factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        prime_factors.push(n);
    }
    for code in 2..q {
        let cand = field.from_packed(code);
        if cand.is_zero() {
            continue;
        }
        if prime_factors
            .iter()
            .all(|&r| !cand.pow((q - 1) / r).is_one())
        {
            return cand;
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic");
}

fn unpack(mut code: u64, p: u64, k: usize, out: &mut [u64]) {
    for d in out.iter_mut().take(k) {
        *d = code % p;
        code /= p;
    }
}

fn pack(digits: &[u64], p: u64) -> u64 {
    let mut code = 0u64;
    for &d in digits.iter().rev() {
        code = code * p + d;
    }
    code
}

/// Double cover of P^3 branched along 8 linear forms:
/// N = #P^3 + sum over P of chi(prod forms(P)), evaluated per point as the
/// product of per-form character values. Points are enumerated on the four
/// affine strata (1,y,z,v), (0,1,z,v), (0,0,1,v), (0,0,0,1); the branch
/// value is only defined up to 8th powers of scalars, which the character
/// kills, so any stratum representative works.
pub(crate) fn count_double_cover(forms: &[[Fq; 4]], field: &Field) -> Result<u64, CountError> {
    if forms.len() != 8 {
        return Err(CountError::WrongFormCount(forms.len()));
    }
    let tables = FieldTables::new(field);
    let p = tables.p;
    let k = tables.k;
    let q = tables.q;

    // coefficient digit matrices: coeffs[form][var][digit]
    let coeffs: Vec<[Vec<u64>; 4]> = forms
        .iter()
        .map(|f| {
            [
                f[0].repr().to_vec(),
                f[1].repr().to_vec(),
                f[2].repr().to_vec(),
                f[3].repr().to_vec(),
            ]
        })
        .collect();
    let prime_coeffs = coeffs
        .iter()
        .all(|f| f.iter().all(|c| c[1..].iter().all(|&d| d == 0)));

    let chi_sum_stratum = |stratum: usize| -> i64 {
        // coordinates: positions 0..stratum are 0, position stratum is 1,
        // the rest range over F_q
        let free = 3 - stratum;
        let outer: u64 = if free == 0 { 1 } else { q };
        (0..outer)
            .into_par_iter()
            .map(|first| {
                let mut point = vec![vec![0u64; k]; 4];
                point[stratum][0] = 1;
                let mut sum = 0i64;
                let mut inner_codes = 1u64;
                for _ in 1..free {
                    inner_codes *= q;
                }
                if free > 0 {
                    unpack(first, p, k, &mut point[stratum + 1]);
                }
                for rest in 0..inner_codes {
                    if free >= 2 {
                        let mut r = rest;
                        for slot in (stratum + 2)..4 {
                            unpack(r % q, p, k, &mut point[slot]);
                            r /= q;
                        }
                    }
                    sum += chi_of_branch(&coeffs, &point, &tables, prime_coeffs, field) as i64;
                }
                sum
            })
            .sum()
    };

    let mut total = (q * q * q + q * q + q + 1) as i64;
    for stratum in 0..4 {
        total += chi_sum_stratum(stratum);
    }
    Ok(total as u64)
}

#[inline]
fn chi_of_branch(
    coeffs: &[[Vec<u64>; 4]],
    point: &[Vec<u64>],
    tables: &FieldTables,
    prime_coeffs: bool,
    field: &Field,
) -> i32 {
    let p = tables.p;
    let k = tables.k;
    let mut chi_prod = 1i32;
    let mut digits = [0u64; 8];
    for form in coeffs {
        let code = if prime_coeffs {
            // digitwise scalar multiply-accumulate
            for d in digits.iter_mut().take(k) {
                *d = 0;
            }
            for (c, x) in form.iter().zip(point.iter()) {
                let c0 = c[0];
                if c0 == 0 {
                    continue;
                }
                for d in 0..k {
                    digits[d] += c0 * x[d];
                }
            }
            for d in digits.iter_mut().take(k) {
                *d %= p;
            }
            pack(&digits[..k], p)
        } else {
            // general coefficients: full field arithmetic (small-q test path)
            let mut acc = field.zero();
            for (c, x) in form.iter().zip(point.iter()) {
                let xe = field.from_packed(pack(&x[..k], p));
                acc = acc.add(&c_to_fq(c, field).mul(&xe));
            }
            acc.packed()
        };
        let c = tables.chi[code as usize];
        if c == 0 {
            return 0;
        }
        chi_prod *= c as i32;
    }
    chi_prod
}

fn c_to_fq(digits: &[u64], field: &Field) -> Fq {
    field.from_packed(pack(digits, field.p()))
}

/// Compiled term list for fast repeated evaluation.
struct Compiled {
    terms: Vec<(Fq, Vec<(usize, u16)>)>,
    max_deg: Vec<u16>,
    nvars: usize,
}

fn compile(f: &Poly<Fq>) -> Compiled {
    let nvars = f.vars().len();
    let mut max_deg = vec![0u16; nvars];
    let mut terms = Vec::with_capacity(f.num_terms());
    for (m, c) in f.terms() {
        let mut exps = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                exps.push((i, e));
                max_deg[i] = max_deg[i].max(e);
            }
        }
        terms.push((c.clone(), exps));
    }
    Compiled {
        terms,
        max_deg,
        nvars,
    }
}

impl Compiled {
    /// Evaluate at a point given as field elements, using power tables.
    fn eval(&self, point: &[Fq], powers: &mut Vec<Vec<Fq>>, field: &Field) -> Fq {
        powers.clear();
        for (i, x) in point.iter().enumerate() {
            let mut col = Vec::with_capacity(self.max_deg[i] as usize + 1);
            col.push(field.one());
            for e in 1..=self.max_deg[i] {
                let prev = col[(e - 1) as usize].clone();
                col.push(prev.mul(x));
            }
            powers.push(col);
        }
        let mut acc = field.zero();
        for (c, exps) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in exps {
                t = t.mul(&powers[i][e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }
}

/// Points of {f = 0} in P^{n-1} by stratified enumeration.
pub(crate) fn count_projective_hypersurface(f: &Poly<Fq>, field: &Field) -> u64 {
    let q = field.q();
    let compiled = compile(f);
    let nvars = compiled.nvars;
    let mut total = 0u64;
    for stratum in 0..nvars {
        let free = nvars - stratum - 1;
        let mut inner_codes = 1u128;
        for _ in 0..free.saturating_sub(1) {
            inner_codes *= q as u128;
        }
        let outer: u64 = if free == 0 { 1 } else { q };
        let sub: u64 = (0..outer)
            .into_par_iter()
            .map(|first| {
                let mut point: Vec<Fq> = vec![field.zero(); nvars];
                point[stratum] = field.one();
                if free > 0 {
                    point[stratum + 1] = field.from_packed(first);
                }
                let mut powers: Vec<Vec<Fq>> = Vec::new();
                let mut count = 0u64;
                for rest in 0..inner_codes {
                    if free >= 2 {
                        let mut r = rest;
                        for slot in (stratum + 2)..nvars {
                            point[slot] = field.from_packed((r % q as u128) as u64);
                            r /= q as u128;
                        }
                    }
                    if compiled.eval(&point, &mut powers, field).is_zero() {
                        count += 1;
                    }
                }
                count
            })
            .sum();
        total += sub;
    }
    total
}

/// Common zeros of a system over affine space.
pub(crate) fn count_affine_zeros(system: &[Poly<Fq>], field: &Field) -> u64 {
    let q = field.q();
    let compiled: Vec<Compiled> = system.iter().map(compile).collect();
    let nvars = system[0].vars().len();
    let mut inner_codes = 1u128;
    for _ in 0..nvars.saturating_sub(1) {
        inner_codes *= q as u128;
    }
    let outer: u64 = if nvars == 0 { 1 } else { q };
    (0..outer)
        .into_par_iter()
        .map(|first| {
            let mut point: Vec<Fq> = vec![field.zero(); nvars];
            point[0] = field.from_packed(first);
            let mut powers: Vec<Vec<Fq>> = Vec::new();
            let mut count = 0u64;
            for rest in 0..inner_codes {
                let mut r = rest;
                for slot in 1..nvars {
                    point[slot] = field.from_packed((r % q as u128) as u64);
                    r /= q as u128;
                }
                if compiled
                    .iter()
                    .all(|c| c.eval(&point, &mut powers, field).is_zero())
                {
                    count += 1;
                }
            }
            count
        })
        .sum()
}

/// Projective Legendre count: N = 1 + sum_x (1 + chi(x(x-1)(x-lambda))).
pub(crate) fn count_legendre(lambda: &Fq, field: &Field) -> u64 {
    let tables = FieldTables::new(field);
    let q = field.q();
    let one = field.one();
    let mut n: i64 = 1 + q as i64;
    for code in 0..q {
        let x = field.from_packed(code);
        let val = x.mul(&x.sub(&one)).mul(&x.sub(lambda));
        n += tables.chi[val.packed() as usize] as i64;
    }
    n as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{quadratic_character, FieldSpec};

    #[test]
    fn chi_table_matches_direct_character() {
        for (p, k) in [(7u64, 1u32), (7, 2), (11, 1)] {
            let field = FieldSpec::extension(p, k).unwrap();
            let t = FieldTables::new(&field);
            for a in field.elements() {
                assert_eq!(t.chi[a.packed() as usize] as i32, quadratic_character(&a));
            }
        }
    }
}
