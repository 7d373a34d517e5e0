//! Anti-bug oracles: unoptimized counting paths that enumerate raw
//! representatives with explicit deduplication, avoid the quadratic
//! character entirely, and refuse large domains. Kept deliberately separate
//! from the fast engines so the two only agree if both are right.

use super::CountError;
use crate::gf::{Field, Fq};
use crate::multipoly::{vars, Poly, Scalar};

const DOMAIN_CAP: u128 = 100_000_000;

fn check_domain(size: u128) -> Result<(), CountError> {
    if size > DOMAIN_CAP {
        return Err(CountError::DomainTooLarge(size, DOMAIN_CAP));
    }
    Ok(())
}

/// Is (x0..xn) the canonical representative of its projective class, i.e.
/// is the first nonzero coordinate equal to 1?
fn is_canonical_rep(coords: &[Fq]) -> bool {
    for c in coords {
        if !c.is_zero() {
            return c.is_one();
        }
    }
    false // the zero tuple represents nothing
}

fn tuple_iter(field: &Field, n: usize) -> impl Iterator<Item = Vec<Fq>> + '_ {
    let q = field.q() as u128;
    let total = q.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(field.from_packed((code % q) as u64));
            code /= q;
        }
        out
    })
}

/// Double cover of P^3: walk every 4-tuple, keep canonical representatives,
/// multiply out the branch product, and count the solutions of u^2 = value
/// by scanning u over the whole field.
pub(crate) fn count_double_cover(forms: &[[Fq; 4]], field: &Field) -> Result<u64, CountError> {
    let q = field.q() as u128;
    check_domain(q.pow(4))?;
    // expand the octic once, as a polynomial product (a different evaluation
    // route than the engine's factored form)
    let vs = vars(["x", "y", "z", "v"]);
    let mut octic = Poly::constant(&vs, field.one());
    for f in forms {
        let mut form_poly = Poly::zero(&vs);
        for (i, name) in ["x", "y", "z", "v"].iter().enumerate() {
            let term = Poly::var_with(&vs, name, f[i].clone()).expect("known var");
            form_poly = form_poly.try_add(&term).expect("same vars");
        }
        octic = octic.try_mul(&form_poly).expect("same vars");
    }
    let mut n = 0u64;
    for coords in tuple_iter(field, 4) {
        if !is_canonical_rep(&coords) {
            continue;
        }
        let value = octic.eval(&coords);
        for u_code in 0..field.q() {
            let u = field.from_packed(u_code);
            if u.mul(&u) == value {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Count by raw weighted-projective orbits: solutions of u^2 = f(x,y,z,v)
/// with (x,y,z,v) != 0 form free scalar orbits of size q - 1; the count must
/// divide exactly. This guards the P^3 quotient description used everywhere
/// else. Only feasible for tiny q.
pub fn orbit_oracle_double_cover(forms: &[[Fq; 4]], field: &Field) -> Result<u64, CountError> {
    let q = field.q() as u128;
    check_domain(q.pow(5))?;
    let vs = vars(["x", "y", "z", "v"]);
    let mut octic = Poly::constant(&vs, field.one());
    for f in forms {
        let mut form_poly = Poly::zero(&vs);
        for (i, name) in ["x", "y", "z", "v"].iter().enumerate() {
            let term = Poly::var_with(&vs, name, f[i].clone()).expect("known var");
            form_poly = form_poly.try_add(&term).expect("same vars");
        }
        octic = octic.try_mul(&form_poly).expect("same vars");
    }
    let mut raw = 0u128;
    for coords in tuple_iter(field, 4) {
        if coords.iter().all(|c| c.is_zero()) {
            continue;
        }
        let value = octic.eval(&coords);
        for u_code in 0..field.q() {
            let u = field.from_packed(u_code);
            if u.mul(&u) == value {
                raw += 1;
            }
        }
    }
    let orbit = (field.q() - 1) as u128;
    if raw % orbit != 0 {
        return Err(CountError::OrbitMismatch(raw, field.q() - 1));
    }
    Ok((raw / orbit) as u64)
}

pub(crate) fn count_projective_hypersurface(
    f: &Poly<Fq>,
    field: &Field,
) -> Result<u64, CountError> {
    let nvars = f.vars().len();
    let q = field.q() as u128;
    check_domain(q.pow(nvars as u32))?;
    let mut n = 0u64;
    for coords in tuple_iter(field, nvars) {
        if !is_canonical_rep(&coords) {
            continue;
        }
        if f.eval(&coords).is_zero() {
            n += 1;
        }
    }
    Ok(n)
}

pub(crate) fn count_affine_zeros(system: &[Poly<Fq>], field: &Field) -> Result<u64, CountError> {
    let nvars = system[0].vars().len();
    let q = field.q() as u128;
    check_domain(q.pow(nvars as u32))?;
    let mut n = 0u64;
    for coords in tuple_iter(field, nvars) {
        if system.iter().all(|f| f.eval(&coords).is_zero()) {
            n += 1;
        }
    }
    Ok(n)
}

/// Legendre count without the character: scan y for every x, add the point
/// at infinity.
pub(crate) fn count_legendre(lambda: &Fq, field: &Field) -> Result<u64, CountError> {
    let q = field.q() as u128;
    check_domain(q * q)?;
    let one = field.one();
    let mut n = 1u64;
    for x_code in 0..field.q() {
        let x = field.from_packed(x_code);
        let rhs = x.mul(&x.sub(&one)).mul(&x.sub(lambda));
        for y_code in 0..field.q() {
            let y = field.from_packed(y_code);
            if y.mul(&y) == rhs {
                n += 1;
            }
        }
    }
    Ok(n)
}
