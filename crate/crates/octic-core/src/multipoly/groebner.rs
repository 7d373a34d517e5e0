//! Buchberger's algorithm with the Gebauer–Möller pair criteria, normal
//! selection strategy and full interreduction, plus the ideal operations
//! built on top of it: membership, radical membership via the Rabinowitsch
//! trick, elimination by block orders, and saturation.

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::poly::Poly;
use super::scalar::Scalar;
use super::{check_same_vars, MultipolyError, Vars};
use std::cmp::Ordering;

/// Finitely generated ideal. An empty generator list is the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal<C: Scalar> {
    vars: Vars,
    gens: Vec<Poly<C>>,
}

impl<C: Scalar> Ideal<C> {
    pub fn new(vars: &Vars, gens: Vec<Poly<C>>) -> Result<Self, MultipolyError> {
        for g in &gens {
            check_same_vars(g.vars(), vars)?;
        }
        Ok(Ideal {
            vars: vars.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn gens(&self) -> &[Poly<C>] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, g: Poly<C>) -> Result<(), MultipolyError> {
        check_same_vars(g.vars(), &self.vars)?;
        if !g.is_zero() {
            self.gens.push(g);
        }
        Ok(())
    }
}

/// Reduced Gröbner basis together with the order that produced it.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<C: Scalar> {
    vars: Vars,
    order: MonomialOrder,
    gens: Vec<Poly<C>>,
}

impl<C: Scalar> GroebnerBasis<C> {
    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn gens(&self) -> &[Poly<C>] {
        &self.gens
    }

    /// Does the basis generate the unit ideal?
    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant() && !self.gens[0].is_zero()
    }

    pub fn normal_form(&self, f: &Poly<C>) -> Poly<C> {
        let reducers: Vec<Reducer<C>> = self
            .gens
            .iter()
            .map(|g| Reducer::new(g, self.order))
            .collect();
        let ordered = sort_terms(f, self.order);
        let nf = normal_form_terms(ordered, &reducers, self.order);
        Poly::from_terms(&self.vars, nf)
    }

    pub fn contains(&self, f: &Poly<C>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn into_ideal(self) -> Ideal<C> {
        Ideal {
            vars: self.vars,
            gens: self.gens,
        }
    }
}

struct Reducer<C: Scalar> {
    terms: Vec<(Monomial, C)>, // sorted for the active order, leading first
    lm: Monomial,
    lc_inv: C,
}

impl<C: Scalar> Reducer<C> {
    fn new(g: &Poly<C>, order: MonomialOrder) -> Self {
        let terms = sort_terms(g, order);
        Self::from_terms(terms)
    }

    fn from_terms(terms: Vec<(Monomial, C)>) -> Self {
        let (lm, lc) = terms[0].clone();
        Reducer {
            terms,
            lm,
            lc_inv: lc.inv().expect("nonzero leading coefficient"),
        }
    }
}

fn sort_terms<C: Scalar>(f: &Poly<C>, order: MonomialOrder) -> Vec<(Monomial, C)> {
    let mut t = f.terms().to_vec();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

/// `a - c * x^m * b`, both inputs sorted for `order`.
fn sub_scaled<C: Scalar>(
    a: &[(Monomial, C)],
    c: &C,
    m: &Monomial,
    b: &[(Monomial, C)],
    order: MonomialOrder,
) -> Vec<(Monomial, C)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bm = b[j].0.mul(m);
        match order.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, c.mul(&b[j].1).neg()));
                j += 1;
            }
            Ordering::Equal => {
                let coeff = a[i].1.sub(&c.mul(&b[j].1));
                if !coeff.is_zero() {
                    out.push((a[i].0.clone(), coeff));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for (bm, bc) in &b[j..] {
        out.push((bm.mul(m), c.mul(bc).neg()));
    }
    out
}

/// Full normal form: reduce head and tail against every reducer.
fn normal_form_terms<C: Scalar>(
    mut p: Vec<(Monomial, C)>,
    reducers: &[Reducer<C>],
    order: MonomialOrder,
) -> Vec<(Monomial, C)> {
    let mut remainder: Vec<(Monomial, C)> = Vec::new();
    'outer: while !p.is_empty() {
        let (lm, lc) = p[0].clone();
        for r in reducers {
            if r.lm.divides(&lm) {
                let q = lm.div(&r.lm).unwrap();
                let factor = lc.mul(&r.lc_inv);
                p = sub_scaled(&p, &factor, &q, &r.terms, order);
                continue 'outer;
            }
        }
        remainder.push(p.remove(0));
    }
    remainder
}

fn spoly<C: Scalar>(a: &Reducer<C>, b: &Reducer<C>, order: MonomialOrder) -> Vec<(Monomial, C)> {
    let l = a.lm.lcm(&b.lm);
    let ma = l.div(&a.lm).unwrap();
    let mb = l.div(&b.lm).unwrap();
    let a_scaled: Vec<(Monomial, C)> = a
        .terms
        .iter()
        .map(|(m, c)| (m.mul(&ma), c.mul(&a.lc_inv)))
        .collect();
    sub_scaled(&a_scaled, &b.lc_inv, &mb, &b.terms, order)
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Gebauer–Möller update of the pair queue when element `t` joins the basis.
fn gm_update<C: Scalar>(basis: &[Reducer<C>], pairs: &mut Vec<Pair>, t: usize) {
    let lt = &basis[t].lm;
    let cand: Vec<Pair> = (0..t)
        .map(|i| Pair {
            i,
            j: t,
            lcm: basis[i].lm.lcm(lt),
        })
        .collect();

    // criterion M: drop (i,t) when another new pair's lcm properly divides it
    let mut keep_m = vec![true; cand.len()];
    for x in 0..cand.len() {
        for y in 0..cand.len() {
            if x == y || !keep_m[y] {
                continue;
            }
            if cand[y].lcm.divides(&cand[x].lcm) && cand[y].lcm != cand[x].lcm {
                keep_m[x] = false;
                break;
            }
        }
    }
    // criterion F: among equal lcms keep one representative
    let mut filtered: Vec<Pair> = Vec::new();
    for (x, p) in cand.into_iter().enumerate() {
        if !keep_m[x] {
            continue;
        }
        if filtered.iter().any(|q| q.lcm == p.lcm) {
            continue;
        }
        filtered.push(p);
    }
    // product criterion: coprime leading monomials reduce to zero
    filtered.retain(|p| !basis[p.i].lm.coprime(lt));

    // criterion B: prune old pairs strictly refined by t
    pairs.retain(|p| {
        if !lt.divides(&p.lcm) {
            return true;
        }
        let lcm_it = basis[p.i].lm.lcm(lt);
        let lcm_jt = basis[p.j].lm.lcm(lt);
        lcm_it == p.lcm || lcm_jt == p.lcm
    });
    pairs.extend(filtered);
}

/// Reduced Gröbner basis of `ideal` for `order`.
///
/// Generators come out canonically scaled: monic over finite fields,
/// primitive integer with positive leading coefficient over the rationals.
pub fn buchberger<C: Scalar>(ideal: &Ideal<C>, order: MonomialOrder) -> GroebnerBasis<C> {
    let vars = ideal.vars().clone();
    let mut basis: Vec<Reducer<C>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    fn insert<C: Scalar>(
        mut h: Vec<(Monomial, C)>,
        basis: &mut Vec<Reducer<C>>,
        pairs: &mut Vec<Pair>,
    ) {
        C::canonicalize_terms(&mut h);
        basis.push(Reducer::from_terms(h));
        let t = basis.len() - 1;
        gm_update(basis, pairs, t);
    }

    for g in ideal.gens() {
        let nf = normal_form_terms(sort_terms(g, order), &basis, order);
        if !nf.is_empty() {
            insert(nf, &mut basis, &mut pairs);
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                order
                    .cmp(&a.lcm, &b.lcm)
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)
            .unwrap();
        let pair = pairs.swap_remove(best);
        let s = spoly(&basis[pair.i], &basis[pair.j], order);
        let h = normal_form_terms(s, &basis, order);
        if !h.is_empty() {
            insert(h, &mut basis, &mut pairs);
        }
    }

    // minimalize: keep only elements whose leading monomial no other kept
    // element divides
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| order.cmp(&basis[a].lm, &basis[b].lm));
    let mut minimal: Vec<usize> = Vec::new();
    for &k in &idx {
        if !minimal.iter().any(|&m| basis[m].lm.divides(&basis[k].lm)) {
            minimal.push(k);
        }
    }

    // interreduce to the unique reduced basis
    let mut reduced: Vec<Poly<C>> = Vec::new();
    interreduce_minimal(&basis, &minimal, order, &vars, &mut reduced);
    reduced.sort_by(|a, b| {
        let la = a.leading_term(order).unwrap().0;
        let lb = b.leading_term(order).unwrap().0;
        order.cmp(lb, la)
    });
    GroebnerBasis {
        vars,
        order,
        gens: reduced,
    }
}

fn interreduce_minimal<C: Scalar>(
    basis: &[Reducer<C>],
    minimal: &[usize],
    order: MonomialOrder,
    vars: &Vars,
    out: &mut Vec<Poly<C>>,
) {
    for (pos, &k) in minimal.iter().enumerate() {
        let others: Vec<Reducer<C>> = minimal
            .iter()
            .enumerate()
            .filter(|(q, _)| *q != pos)
            .map(|(_, &m)| Reducer::from_terms(basis[m].terms.clone()))
            .collect();
        let mut nf = normal_form_terms(basis[k].terms.clone(), &others, order);
        if nf.is_empty() {
            continue;
        }
        C::canonicalize_terms(&mut nf);
        out.push(Poly::from_terms(vars, nf));
    }
}

/// Ideal membership via normal form against a degrevlex basis.
pub fn ideal_membership<C: Scalar>(f: &Poly<C>, ideal: &Ideal<C>) -> Result<bool, MultipolyError> {
    check_same_vars(f.vars(), ideal.vars())?;
    if ideal.is_zero_ideal() {
        return Ok(f.is_zero());
    }
    let gb = buchberger(ideal, MonomialOrder::DegRevLex);
    Ok(gb.contains(f))
}

/// Radical membership: f lies in rad(I) iff 1 lies in I + (1 - w f).
pub fn radical_membership<C: Scalar>(
    f: &Poly<C>,
    ideal: &Ideal<C>,
) -> Result<bool, MultipolyError> {
    check_same_vars(f.vars(), ideal.vars())?;
    if f.is_zero() {
        return Ok(true);
    }
    let fresh = fresh_name(ideal.vars());
    let lifted_vars = ideal.vars().with_prefix(&fresh);
    let mut gens: Vec<Poly<C>> = ideal
        .gens()
        .iter()
        .map(|g| g.lift_front(&lifted_vars))
        .collect();
    let one = f.any_coeff().unwrap().one_like();
    let w = Poly::var_with(&lifted_vars, &fresh, one.clone()).unwrap();
    let one_p = Poly::constant(&lifted_vars, one);
    gens.push(one_p.try_sub(&w.try_mul(&f.lift_front(&lifted_vars))?)?);
    let ext = Ideal::new(&lifted_vars, gens)?;
    Ok(buchberger(&ext, MonomialOrder::DegRevLex).is_unit())
}

/// Eliminate the first `k` variables: I ∩ k[x_{k+1}, ...].
pub fn eliminate<C: Scalar>(ideal: &Ideal<C>, k: usize) -> Result<Ideal<C>, MultipolyError> {
    assert!(k < ideal.vars().len(), "cannot eliminate every variable");
    let target = ideal.vars().suffix(k);
    if ideal.is_zero_ideal() {
        return Ideal::new(&target, vec![]);
    }
    let gb = buchberger(ideal, MonomialOrder::Block { prefix: k });
    let gens: Vec<Poly<C>> = gb
        .gens()
        .iter()
        .filter(|g| {
            g.terms()
                .iter()
                .all(|(m, _)| m.exps()[..k].iter().all(|&e| e == 0))
        })
        .map(|g| g.project(k, &target))
        .collect();
    Ideal::new(&target, gens)
}

/// Saturation (I : f^inf) via eliminate(I + (1 - w f), {w}).
pub fn saturate_by<C: Scalar>(ideal: &Ideal<C>, f: &Poly<C>) -> Result<Ideal<C>, MultipolyError> {
    check_same_vars(f.vars(), ideal.vars())?;
    if f.is_zero() {
        return Err(MultipolyError::SaturateByZero);
    }
    if ideal.is_zero_ideal() {
        return Ok(ideal.clone());
    }
    let fresh = fresh_name(ideal.vars());
    let lifted_vars = ideal.vars().with_prefix(&fresh);
    let mut gens: Vec<Poly<C>> = ideal
        .gens()
        .iter()
        .map(|g| g.lift_front(&lifted_vars))
        .collect();
    let one = f.any_coeff().unwrap().one_like();
    let w = Poly::var_with(&lifted_vars, &fresh, one.clone()).unwrap();
    let one_p = Poly::constant(&lifted_vars, one);
    gens.push(one_p.try_sub(&w.try_mul(&f.lift_front(&lifted_vars))?)?);
    let ext = Ideal::new(&lifted_vars, gens)?;
    let projected = eliminate(&ext, 1)?;
    // eliminate() built a fresh suffix VarSet; rebuild over the original handle
    Ideal::new(
        ideal.vars(),
        projected
            .gens()
            .iter()
            .map(|g| Poly::from_sorted_terms_unchecked(ideal.vars().clone(), g.terms().to_vec()))
            .collect(),
    )
}

fn fresh_name(vars: &super::VarSet) -> String {
    let mut name = "w".to_string();
    while vars.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::super::{parse_rational_poly, vars};
    use super::*;
    use crate::multipoly::QPoly;

    fn p(vs: &Vars, s: &str) -> QPoly {
        parse_rational_poly(vs, s).unwrap()
    }

    fn ideal(vs: &Vars, gens: &[&str]) -> Ideal<crate::multipoly::Rational> {
        Ideal::new(vs, gens.iter().map(|s| p(vs, s)).collect()).unwrap()
    }

    #[test]
    fn coordinate_ideal_is_its_own_basis() {
        let vs = vars(["x", "y"]);
        let gb = buchberger(&ideal(&vs, &["x", "y"]), MonomialOrder::DegRevLex);
        assert_eq!(gb.gens(), &[p(&vs, "x"), p(&vs, "y")][..]);
    }

    #[test]
    fn unit_ideal_from_translates() {
        let vs = vars(["x"]);
        let gb = buchberger(&ideal(&vs, &["x", "x+1"]), MonomialOrder::DegRevLex);
        assert!(gb.is_unit());
    }

    #[test]
    fn unit_ideal_from_xy_minus_one_and_x_squared() {
        // S-polynomial chain: x*(xy-1) = -x mod x^2, then 1 = x*y - (xy-1)
        let vs = vars(["x", "y"]);
        let gb = buchberger(&ideal(&vs, &["x*y - 1", "x^2"]), MonomialOrder::DegRevLex);
        assert!(gb.is_unit());
    }

    #[test]
    fn reduced_basis_properties() {
        let vs = vars(["x", "y", "z"]);
        let i = ideal(
            &vs,
            &["x^2 + y^2 + z^2 - 1", "x*y - z", "x - y + 2*z^2 - 1"],
        );
        let order = MonomialOrder::DegRevLex;
        let gb = buchberger(&i, order);
        // every original generator reduces to zero
        for g in i.gens() {
            assert!(gb.contains(g), "generator {g} not in basis");
        }
        // leading terms pairwise non-divisible, generators primitive-integer
        let lms: Vec<_> = gb
            .gens()
            .iter()
            .map(|g| g.leading_term(order).unwrap().0.clone())
            .collect();
        for a in 0..lms.len() {
            for b in 0..lms.len() {
                if a != b {
                    assert!(!lms[a].divides(&lms[b]));
                }
            }
        }
        for g in gb.gens() {
            assert_eq!(&g.primitive(), g);
        }
        // every S-polynomial reduces to zero
        for a in 0..gb.gens().len() {
            for b in a + 1..gb.gens().len() {
                let ra = Reducer::new(&gb.gens()[a], order);
                let rb = Reducer::new(&gb.gens()[b], order);
                let s = spoly(&ra, &rb, order);
                let nf = normal_form_terms(
                    s,
                    &gb.gens()
                        .iter()
                        .map(|g| Reducer::new(g, order))
                        .collect::<Vec<_>>(),
                    order,
                );
                assert!(nf.is_empty());
            }
        }
    }

    #[test]
    fn membership_and_radical_membership() {
        let vs = vars(["x", "y"]);
        let i = ideal(&vs, &["x^2", "x*y"]);
        let x = p(&vs, "x");
        assert!(!ideal_membership(&x, &i).unwrap());
        assert!(radical_membership(&x, &i).unwrap());
        let y = p(&vs, "y");
        let j = ideal(&vs, &["x^2"]);
        assert!(!radical_membership(&y, &j).unwrap());
    }

    #[test]
    fn eliminate_graph_of_parabola() {
        // eliminate y from (y - x^2) in vars [y, x]: nothing survives
        let vs = vars(["y", "x"]);
        let i = ideal(&vs, &["y - x^2"]);
        let e = eliminate(&i, 1).unwrap();
        assert!(e.is_zero_ideal());
    }

    #[test]
    fn eliminate_keeps_relations() {
        // graph of y = x^2 with the circle: eliminating y leaves a relation in x
        let vs = vars(["y", "x"]);
        let i = ideal(&vs, &["y - x^2", "y^2 + x^2 - 1"]);
        let e = eliminate(&i, 1).unwrap();
        assert_eq!(e.gens().len(), 1);
        let xv = vars(["x"]);
        assert_eq!(e.gens()[0], p(&xv, "x^4 + x^2 - 1"));
    }

    #[test]
    fn saturation_of_xy_by_x() {
        let vs = vars(["x", "y"]);
        let i = ideal(&vs, &["x*y"]);
        let s = saturate_by(&i, &p(&vs, "x")).unwrap();
        assert_eq!(s.gens(), &[p(&vs, "y")][..]);
    }

    #[test]
    fn saturation_of_saturated_ideal_is_identity() {
        // base-point-free graph relation: already saturated
        let vs = vars(["x", "y", "r"]);
        let i = ideal(&vs, &["y - r*x"]);
        let s = saturate_by(&i, &p(&vs, "x")).unwrap();
        let gb = buchberger(&s, MonomialOrder::DegRevLex);
        assert_eq!(gb.gens(), &[p(&vs, "r*x - y")][..]);
    }

    #[test]
    fn elimination_output_lies_in_ideal() {
        let vs = vars(["y", "x", "z"]);
        let i = ideal(&vs, &["y^2 - x*z", "y*x - z^2"]);
        let e = eliminate(&i, 1).unwrap();
        assert!(!e.is_zero_ideal());
        // re-embed and check membership
        for g in e.gens() {
            let lifted = parse_rational_poly(&vs, &g.to_string()).unwrap();
            assert!(ideal_membership(&lifted, &i).unwrap());
        }
    }

    #[test]
    fn normal_form_is_confluent_on_random_reduction_paths() {
        // the reduced GB's normal form is unique no matter how the input is
        // shuffled beforehand
        let vs = vars(["x", "y", "z"]);
        let i = ideal(&vs, &["x^2 - y", "y^2 - z", "x*z - y^2 + x"]);
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        let f = p(&vs, "x^5*z - y^3 + 4*x*y*z^2 - 7");
        let nf = gb.normal_form(&f);
        // f - nf must be in the ideal, and nf must be irreducible
        let diff = f.try_sub(&nf).unwrap();
        assert!(gb.contains(&diff));
        for (m, _) in nf.terms() {
            for g in gb.gens() {
                let lm = g.leading_term(MonomialOrder::DegRevLex).unwrap().0;
                assert!(!lm.divides(m), "normal form still reducible");
            }
        }
    }
}
