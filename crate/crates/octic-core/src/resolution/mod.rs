//! Blow-up charts of the double-octic resolution: strict transforms of
//! double covers under coordinate-line blow-ups, the graph-closure blow-up
//! via elimination and saturation, smoothness and singular-locus
//! certification over Q and mod p, and transverse discriminants along a
//! singular line.

mod pipeline;

pub use pipeline::{run_paper_pipeline, PipelineReport, WindowReport};

use crate::gf::{self, Field, FieldError, Fq};
use crate::multipoly::{
    buchberger, radical_membership, saturate_by, GroebnerBasis, Ideal, Monomial, MonomialOrder,
    MultipolyError, Poly, QPoly, Rational, Scalar, VarSet, Vars,
};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum ResolutionError {
    #[error("center variables must be ambient chart coordinates: {0}")]
    UnsupportedCenter(String),
    #[error("graph blow-up needs at least 2 nonzero generators")]
    BadGraphCenter,
    #[error("every chart of the blow-up is empty (unit ideal after saturation)")]
    EmptyBlowup,
    #[error("chart shape unsupported for the Jacobian criterion: codim {0} after reduction")]
    UnsupportedShape(usize),
    #[error("chart is empty; no singular locus to compute")]
    EmptyChart,
    #[error("chart is not singular along the requested line: {0}")]
    NotSingularAlongLine(String),
    #[error("discriminant is not a squarefree polynomial of degree 3 or 4")]
    BadDiscriminant,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] MultipolyError),
}

/// Affine chart of a double cover u^2 = f, with the branch kept in factored
/// form (the product of `factors` is f; the cover variable never occurs in
/// them).
#[derive(Debug, Clone)]
pub struct DoubleCoverChart<C: Scalar> {
    ambient: Vars,
    cover: String,
    factors: Vec<Poly<C>>,
    pub exceptional: Vec<String>,
    pub history: Vec<String>,
}

impl<C: Scalar> DoubleCoverChart<C> {
    pub fn new(ambient: &Vars, cover: &str, factors: Vec<Poly<C>>) -> Self {
        assert!(
            ambient.index_of(cover).is_none(),
            "cover variable must not be ambient"
        );
        DoubleCoverChart {
            ambient: ambient.clone(),
            cover: cover.to_string(),
            factors,
            exceptional: Vec::new(),
            history: Vec::new(),
        }
    }

    pub fn ambient(&self) -> &Vars {
        &self.ambient
    }

    pub fn cover_var(&self) -> &str {
        &self.cover
    }

    pub fn factors(&self) -> &[Poly<C>] {
        &self.factors
    }

    pub fn branch(&self) -> Poly<C> {
        let mut acc: Option<Poly<C>> = None;
        for f in &self.factors {
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => a.try_mul(f).expect("same vars"),
            });
        }
        acc.unwrap_or_else(|| Poly::zero(&self.ambient))
    }

    /// Variable list of the total space: ambient then the cover variable.
    pub fn total_vars(&self) -> Vars {
        let mut names: Vec<String> = self.ambient.names().to_vec();
        names.push(self.cover.clone());
        VarSet::new(names)
    }

    /// u^2 - f over the total variable list.
    pub fn hypersurface(&self) -> Poly<C> {
        let tv = self.total_vars();
        let branch = self.branch();
        let one = branch
            .any_coeff()
            .map(|c| c.one_like())
            .expect("branch is nonzero");
        let u = Poly::var_with(&tv, &self.cover, one).unwrap();
        let lifted = lift_to(&branch, &tv);
        u.try_mul(&u).unwrap().try_sub(&lifted).unwrap()
    }

    pub fn display_equation(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                if f.num_terms() > 1 {
                    format!("({f})")
                } else {
                    format!("{f}")
                }
            })
            .collect();
        format!("{}^2 = {}", self.cover, parts.join("*"))
    }
}

/// Rebuild a polynomial over a superset variable list (names must match).
fn lift_to<C: Scalar>(f: &Poly<C>, target: &Vars) -> Poly<C> {
    let src = f.vars();
    let map: Vec<usize> = src
        .names()
        .iter()
        .map(|n| target.index_of(n).expect("superset variable list"))
        .collect();
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut exps = vec![0u16; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] = e;
            }
            (Monomial::new(exps), c.clone())
        })
        .collect();
    Poly::from_terms(target, terms)
}

/// Blow up a double-cover chart in the coordinate line {xi = xj = 0}. The
/// two output charts substitute xj -> xi*xj and xi -> xj*xi; even powers of
/// the exceptional coordinate move into the cover variable, an odd leftover
/// stays in the branch.
pub fn blowup_double_cover<C: Scalar>(
    chart: &DoubleCoverChart<C>,
    center: (&str, &str),
) -> Result<[DoubleCoverChart<C>; 2], ResolutionError> {
    let (xi, xj) = center;
    for v in [xi, xj] {
        if chart.ambient.index_of(v).is_none() {
            return Err(ResolutionError::UnsupportedCenter(v.to_string()));
        }
    }
    let one = chart
        .factors
        .iter()
        .find_map(|f| f.any_coeff())
        .map(|c| c.one_like())
        .expect("nonzero branch");
    let make_chart = |keep: &str, scaled: &str| -> Result<DoubleCoverChart<C>, ResolutionError> {
        // scaled -> keep * scaled
        let keep_poly = Poly::var_with(&chart.ambient, keep, one.clone())?;
        let scaled_poly = Poly::var_with(&chart.ambient, scaled, one.clone())?;
        let image = keep_poly.try_mul(&scaled_poly)?;
        let mut map = HashMap::new();
        map.insert(scaled.to_string(), image);
        let keep_idx = chart.ambient.index_of(keep).unwrap();
        let mut new_factors = Vec::new();
        let mut pool: u32 = 0;
        for f in &chart.factors {
            let sub = f.substitute(&map)?;
            let k = sub.min_exp(keep_idx);
            pool += k as u32;
            let residual = sub.exact_divide(keep, k)?;
            if residual.is_constant() && residual.as_constant().map_or(false, |c| c.is_one()) {
                continue;
            }
            new_factors.push(residual);
        }
        if pool % 2 == 1 {
            new_factors.insert(0, keep_poly);
        }
        let mut out = DoubleCoverChart {
            ambient: chart.ambient.clone(),
            cover: chart.cover.clone(),
            factors: new_factors,
            exceptional: chart.exceptional.clone(),
            history: chart.history.clone(),
        };
        out.exceptional.push(keep.to_string());
        out.history.push(format!(
            "blow-up of ({xi}, {xj}): chart {scaled} = {keep}*{scaled}, stripped {keep}^{}",
            pool - (pool % 2)
        ));
        Ok(out)
    };
    Ok([make_chart(xi, xj)?, make_chart(xj, xi)?])
}

/// Chart cut out by an ideal (general shape used after the graph blow-up).
#[derive(Debug, Clone)]
pub struct IdealChart<C: Scalar> {
    vars: Vars,
    ideal: Ideal<C>,
    /// expected dimension of the chart variety
    pub expected_dim: usize,
    pub exceptional: Vec<String>,
    pub history: Vec<String>,
}

impl<C: Scalar> IdealChart<C> {
    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn ideal(&self) -> &Ideal<C> {
        &self.ideal
    }

    pub fn is_empty_chart(&self) -> bool {
        self.ideal
            .gens()
            .iter()
            .any(|g| g.is_constant() && !g.is_zero())
    }
}

/// Closure of the graph of the generator map restricted to the double
/// cover: for each index i, the chart where the i-th homogeneous coordinate
/// is 1 carries ratio variables r_j (j != i) with relations
/// g_j = r_j * g_i, saturated by g_i.
pub fn graph_closure_blowup(
    chart: &DoubleCoverChart<Rational>,
    gens: &[QPoly],
) -> Result<Vec<IdealChart<Rational>>, ResolutionError> {
    let nonzero = gens.iter().filter(|g| !g.is_zero()).count();
    if gens.len() < 2 || nonzero < 2 {
        return Err(ResolutionError::BadGraphCenter);
    }
    let tv = chart.total_vars();
    let hyp = chart.hypersurface();
    let mut charts = Vec::with_capacity(gens.len());
    let mut all_empty = true;
    for (i, gi) in gens.iter().enumerate() {
        if gi.is_zero() {
            continue;
        }
        let ratio_names: Vec<String> = (0..gens.len())
            .filter(|&j| j != i)
            .map(|j| format!("r{j}"))
            .collect();
        let mut names: Vec<String> = tv.names().to_vec();
        names.extend(ratio_names.iter().cloned());
        let cv = VarSet::new(names);
        let mut ideal_gens = vec![lift_to(&hyp, &cv)];
        let gi_l = lift_to(&lift_to(gi, &tv), &cv);
        let mut r_iter = ratio_names.iter();
        for (j, gj) in gens.iter().enumerate() {
            if j == i {
                continue;
            }
            let r = r_iter.next().unwrap();
            let r_poly = Poly::var_with(&cv, r, num_traits::One::one())?;
            let gj_l = lift_to(&lift_to(gj, &tv), &cv);
            ideal_gens.push(gj_l.try_sub(&r_poly.try_mul(&gi_l)?)?);
        }
        let ideal = Ideal::new(&cv, ideal_gens)?;
        let saturated = saturate_by(&ideal, &gi_l)?;
        let mut out = IdealChart {
            vars: cv,
            ideal: saturated,
            expected_dim: 3,
            exceptional: vec![format!("{{{gi} = 0}}")],
            history: chart.history.clone(),
        };
        out.history
            .push(format!("graph-closure chart {i} (coordinate {gi} = 1)"));
        if !out.is_empty_chart() {
            all_empty = false;
        }
        charts.push(out);
    }
    if all_empty {
        return Err(ResolutionError::EmptyBlowup);
    }
    Ok(charts)
}

/// Coefficientwise reduction of a rational chart mod p.
pub fn central_fiber_ideal(
    chart: &IdealChart<Rational>,
    field: &Field,
) -> Result<IdealChart<Fq>, ResolutionError> {
    let gens: Result<Vec<Poly<Fq>>, FieldError> = chart
        .ideal
        .gens()
        .iter()
        .map(|g| gf::reduce_poly(g, field))
        .collect();
    let gens: Vec<Poly<Fq>> = gens?.into_iter().filter(|g| !g.is_zero()).collect();
    Ok(IdealChart {
        vars: chart.vars.clone(),
        ideal: Ideal::new(&chart.vars, gens)?,
        expected_dim: chart.expected_dim,
        exceptional: chart.exceptional.clone(),
        history: chart.history.clone(),
    })
}

/// Coefficientwise reduction of a double-cover chart mod p.
pub fn central_fiber_double_cover(
    chart: &DoubleCoverChart<Rational>,
    field: &Field,
) -> Result<DoubleCoverChart<Fq>, ResolutionError> {
    let factors: Result<Vec<Poly<Fq>>, FieldError> = chart
        .factors
        .iter()
        .map(|f| gf::reduce_poly(f, field))
        .collect();
    Ok(DoubleCoverChart {
        ambient: chart.ambient.clone(),
        cover: chart.cover.clone(),
        factors: factors?,
        exceptional: chart.exceptional.clone(),
        history: chart.history.clone(),
    })
}

/// A chart presented as a graph over a smaller coordinate space: generators
/// of the form v - h(other vars) have been substituted away.
#[derive(Debug, Clone)]
pub struct EffectiveChart<C: Scalar> {
    pub vars: Vars,
    pub gens: Vec<Poly<C>>,
    /// eliminated variable -> its expression over the remaining variables
    pub graph_map: Vec<(String, Poly<C>)>,
    pub expected_dim: usize,
}

/// Substitute away every generator of the shape c*v + h with c a nonzero
/// constant and v absent from h. The chart variety is a graph over the
/// remaining coordinates, so singular loci can be computed downstairs.
pub fn reduce_to_effective<C: Scalar>(
    chart: &IdealChart<C>,
) -> Result<EffectiveChart<C>, ResolutionError> {
    let mut vars = chart.vars.clone();
    let mut gens: Vec<Poly<C>> = chart.ideal.gens().to_vec();
    let mut graph_map: Vec<(String, Poly<C>)> = Vec::new();
    'outer: loop {
        for (gi, g) in gens.iter().enumerate() {
            // prefer eliminating later variables (ratio coordinates first)
            for v_idx in (0..vars.len()).rev() {
                let v_name = vars.name(v_idx).to_string();
                if g.degree_in(v_idx) != 1 {
                    continue;
                }
                // the only v-term must be the bare monomial v with constant c
                let mut v_coeff: Option<C> = None;
                let mut ok = true;
                for (m, c) in g.terms() {
                    if m.exp(v_idx) == 0 {
                        continue;
                    }
                    if m.exp(v_idx) == 1 && m.total_degree() == 1 {
                        if v_coeff.is_some() {
                            ok = false;
                            break;
                        }
                        v_coeff = Some(c.clone());
                    } else {
                        ok = false;
                        break;
                    }
                }
                let Some(c) = v_coeff else { continue };
                if !ok {
                    continue;
                }
                // v = -(g - c v)/c
                let inv = c.inv().expect("nonzero constant");
                let v_poly = Poly::var_with(&vars, &v_name, c.one_like())?;
                let h = g
                    .try_sub(&v_poly.scale(&c))?
                    .scale(&inv.neg());
                // rebuild everything over vars minus v
                let remaining: Vec<String> = vars
                    .names()
                    .iter()
                    .filter(|n| *n != &v_name)
                    .cloned()
                    .collect();
                let new_vars = VarSet::new(remaining);
                let project = |f: &Poly<C>| -> Poly<C> {
                    debug_assert!(!f.involves(v_idx));
                    let terms = f
                        .terms()
                        .iter()
                        .map(|(m, c)| {
                            let mut exps: Vec<u16> = m.exps().to_vec();
                            exps.remove(v_idx);
                            (Monomial::new(exps), c.clone())
                        })
                        .collect();
                    Poly::from_terms(&new_vars, terms)
                };
                let mut sub_map = HashMap::new();
                sub_map.insert(v_name.clone(), h.clone());
                let mut new_gens = Vec::with_capacity(gens.len() - 1);
                for (k, other) in gens.iter().enumerate() {
                    if k == gi {
                        continue;
                    }
                    let s = other.substitute(&sub_map)?;
                    if !s.is_zero() {
                        new_gens.push(project(&s));
                    }
                }
                let h_down = project(&h);
                // earlier graph entries may reference v: substitute through
                for (_, expr) in graph_map.iter_mut() {
                    let s = expr.substitute(&sub_map)?;
                    *expr = project(&s);
                }
                graph_map.push((v_name, h_down));
                vars = new_vars;
                gens = new_gens;
                continue 'outer;
            }
        }
        break;
    }
    // tidy the remaining presentation
    if !gens.is_empty() {
        let gb = buchberger(&Ideal::new(&vars, gens)?, MonomialOrder::DegRevLex);
        gens = gb.gens().to_vec();
    }
    Ok(EffectiveChart {
        vars,
        gens,
        graph_map,
        expected_dim: chart.expected_dim,
    })
}

/// Jacobian-criterion singular locus of an effective chart of codimension
/// <= 2: the chart equations together with all c x c minors of their
/// Jacobian, returned as a reduced Groebner basis.
pub fn singular_locus_effective<C: Scalar>(
    eff: &EffectiveChart<C>,
) -> Result<GroebnerBasis<C>, ResolutionError> {
    if eff.gens.is_empty() {
        return Err(ResolutionError::EmptyChart);
    }
    if eff.gens.iter().any(|g| g.is_constant()) {
        // empty chart: unit ideal; report it as its own basis
        let ideal = Ideal::new(&eff.vars, eff.gens.clone())?;
        return Ok(buchberger(&ideal, MonomialOrder::DegRevLex));
    }
    let n = eff.vars.len();
    let c = n
        .checked_sub(eff.expected_dim)
        .ok_or(ResolutionError::UnsupportedShape(0))?;
    if c == 0 || c > 2 {
        return Err(ResolutionError::UnsupportedShape(c));
    }
    // rows of the Jacobian
    let mut jac: Vec<Vec<Poly<C>>> = Vec::with_capacity(eff.gens.len());
    for g in &eff.gens {
        let row: Result<Vec<Poly<C>>, MultipolyError> = (0..n)
            .map(|i| g.partial_derivative(eff.vars.name(i)))
            .collect();
        jac.push(row?);
    }
    let mut gens = eff.gens.clone();
    if c == 1 {
        for row in &jac {
            for d in row {
                if !d.is_zero() {
                    gens.push(d.clone());
                }
            }
        }
    } else {
        // all 2x2 minors
        for r1 in 0..jac.len() {
            for r2 in (r1 + 1)..jac.len() {
                for c1 in 0..n {
                    for c2 in (c1 + 1)..n {
                        let m = jac[r1][c1]
                            .try_mul(&jac[r2][c2])?
                            .try_sub(&jac[r1][c2].try_mul(&jac[r2][c1])?)?;
                        if !m.is_zero() {
                            gens.push(m);
                        }
                    }
                }
            }
        }
    }
    let ideal = Ideal::new(&eff.vars, gens)?;
    Ok(buchberger(&ideal, MonomialOrder::DegRevLex))
}

/// Singular locus of a double-cover chart u^2 = f: the hypersurface
/// Jacobian ideal (u^2 - f, 2u, grad f) as a reduced basis over the total
/// variable list.
pub fn singular_locus_double_cover<C: Scalar>(
    chart: &DoubleCoverChart<C>,
) -> Result<GroebnerBasis<C>, ResolutionError> {
    let tv = chart.total_vars();
    let hyp = chart.hypersurface();
    let mut gens = vec![hyp.clone()];
    for i in 0..tv.len() {
        let d = hyp.partial_derivative(tv.name(i))?;
        if !d.is_zero() {
            gens.push(d);
        }
    }
    let ideal = Ideal::new(&tv, gens)?;
    Ok(buchberger(&ideal, MonomialOrder::DegRevLex))
}

/// Singular locus of an ideal chart, through the effective reduction.
pub fn singular_locus_ideal<C: Scalar>(
    chart: &IdealChart<C>,
) -> Result<(EffectiveChart<C>, GroebnerBasis<C>), ResolutionError> {
    let eff = reduce_to_effective(chart)?;
    let gb = singular_locus_effective(&eff)?;
    Ok((eff, gb))
}

pub fn is_smooth_ideal<C: Scalar>(chart: &IdealChart<C>) -> Result<bool, ResolutionError> {
    Ok(singular_locus_ideal(chart)?.1.is_unit())
}

pub fn is_smooth_double_cover<C: Scalar>(
    chart: &DoubleCoverChart<C>,
) -> Result<bool, ResolutionError> {
    Ok(singular_locus_double_cover(chart)?.is_unit())
}

/// Certify V(J) = L as sets for a coordinate line L = {zero_vars = 0}: all
/// line coordinates lie in rad(J), and every generator of J lies in the
/// (prime) coordinate ideal of L.
pub fn certify_singular_line<C: Scalar>(
    j_sing: &GroebnerBasis<C>,
    zero_vars: &[String],
) -> Result<bool, ResolutionError> {
    let vars = j_sing.vars().clone();
    let zero_idx: Vec<usize> = zero_vars
        .iter()
        .map(|v| vars.index_of(v).expect("line variable in chart"))
        .collect();
    // J subset of I(L): every monomial of every generator meets a zero var
    for g in j_sing.gens() {
        for (m, _) in g.terms() {
            if !zero_idx.iter().any(|&i| m.exp(i) > 0) {
                return Ok(false);
            }
        }
    }
    // I(L) subset of rad(J)
    let one = j_sing
        .gens()
        .iter()
        .find_map(|g| g.any_coeff())
        .map(|c| c.one_like())
        .ok_or(ResolutionError::EmptyChart)?;
    let ideal = Ideal::new(&vars, j_sing.gens().to_vec())?;
    for v in zero_vars {
        let vp = Poly::var_with(&vars, v, one.clone())?;
        if !radical_membership(&vp, &ideal)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Determinant of the quadratic form of the second-order transverse jet
/// along a coordinate line, as a dense univariate polynomial in the line
/// parameter, with degree, squarefreeness and the root list over
/// extensions of degree <= 4.
#[derive(Debug, Clone)]
pub struct TransverseDiscriminant {
    /// dense coefficients c_0..c_d in the line parameter
    pub disc: Vec<Fq>,
    pub degree: usize,
    pub squarefree: bool,
    /// roots as (value, extension degree, multiplicity)
    pub roots: Vec<(Fq, u32, u32)>,
    pub pinch_count: usize,
}

/// Expand a hypersurface F in the chart coordinates along the line
/// {zero_vars = 0} with parameter `param`: the 0th and 1st transverse jets
/// must vanish identically; the determinant of the quadratic jet is the
/// discriminant whose roots are the pinch points.
pub fn transverse_discriminant(
    f: &Poly<Fq>,
    zero_vars: &[String],
    param: &str,
) -> Result<TransverseDiscriminant, ResolutionError> {
    let vars = f.vars().clone();
    let zero_idx: Vec<usize> = zero_vars
        .iter()
        .map(|v| vars.index_of(v).expect("line variable in chart"))
        .collect();
    let param_idx = vars.index_of(param).expect("parameter in chart");
    let field = f.any_coeff().expect("nonzero chart equation").field().clone();
    // sort terms by transverse degree
    let mut jet0 = false;
    let mut jet1 = false;
    // quadratic-form coefficient polynomials q[i][j] (i <= j), dense in param
    let d = zero_idx.len();
    let max_param_deg = f.degree_in(param_idx) as usize;
    let mut q: Vec<Vec<Vec<Fq>>> =
        vec![vec![vec![field.zero(); max_param_deg + 1]; d]; d];
    for (m, c) in f.terms() {
        let tdeg: u32 = zero_idx.iter().map(|&i| m.exp(i) as u32).sum();
        // anything outside zero_vars and param would make the "line" bogus
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 && i != param_idx && !zero_idx.contains(&i) {
                return Err(ResolutionError::NotSingularAlongLine(format!(
                    "variable {} is neither transverse nor the parameter",
                    vars.name(i)
                )));
            }
        }
        match tdeg {
            0 => jet0 = true,
            1 => jet1 = true,
            2 => {
                // identify the pair (i, j)
                let mut pair = Vec::new();
                for (slot, &i) in zero_idx.iter().enumerate() {
                    for _ in 0..m.exp(i) {
                        pair.push(slot);
                    }
                }
                let (a, b) = (pair[0], pair[1]);
                let pd = m.exp(param_idx) as usize;
                q[a.min(b)][a.max(b)][pd] = q[a.min(b)][a.max(b)][pd].add(c);
            }
            _ => {} // higher jets do not enter the quadratic form
        }
    }
    if jet0 {
        return Err(ResolutionError::NotSingularAlongLine(
            "0th transverse jet does not vanish".into(),
        ));
    }
    if jet1 {
        return Err(ResolutionError::NotSingularAlongLine(
            "1st transverse jet does not vanish".into(),
        ));
    }
    // symmetric matrix M[i][j] = q_ij / 2 for i != j, q_ii on the diagonal
    let half = field
        .from_u64(2)
        .inv()
        .expect("odd characteristic");
    let entry = |i: usize, j: usize| -> Vec<Fq> {
        let (a, b) = (i.min(j), i.max(j));
        let coeffs = &q[a][b];
        if i == j {
            coeffs.clone()
        } else {
            coeffs.iter().map(|c| c.mul(&half)).collect()
        }
    };
    let matrix: Vec<Vec<Vec<Fq>>> = (0..d)
        .map(|i| (0..d).map(|j| entry(i, j)).collect())
        .collect();
    let disc = poly_det(&matrix, &field);
    let mut trimmed = disc.clone();
    while trimmed.last().is_some_and(|c| c.is_zero()) {
        trimmed.pop();
    }
    let degree = trimmed.len().saturating_sub(1);
    let squarefree = gf::is_squarefree(&trimmed);
    let roots = if trimmed.iter().all(|c| c.in_prime_field()) && trimmed.len() > 1 {
        let ints: Vec<i64> = trimmed
            .iter()
            .map(|c| c.as_prime_value().unwrap() as i64)
            .collect();
        gf::univariate_roots(&ints, &field, 4)?
    } else {
        Vec::new()
    };
    let pinch_count = if squarefree { degree } else { roots.len() };
    Ok(TransverseDiscriminant {
        disc: trimmed,
        degree,
        squarefree,
        roots,
        pinch_count,
    })
}

/// Determinant of a matrix of dense univariate polynomials by cofactor
/// expansion (matrices here are at most 4 x 4).
fn poly_det(m: &[Vec<Vec<Fq>>], field: &Field) -> Vec<Fq> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![field.zero()];
    for col in 0..n {
        if m[0][col].iter().all(|c| c.is_zero()) {
            continue;
        }
        let minor: Vec<Vec<Vec<Fq>>> = (1..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != col)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        let sub = poly_det(&minor, field);
        let term = dense_mul(&m[0][col], &sub, field);
        acc = if col % 2 == 0 {
            dense_add(&acc, &term, field)
        } else {
            dense_sub(&acc, &term, field)
        };
    }
    acc
}

fn dense_mul(a: &[Fq], b: &[Fq], field: &Field) -> Vec<Fq> {
    if a.is_empty() || b.is_empty() {
        return vec![field.zero()];
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn dense_add(a: &[Fq], b: &[Fq], field: &Field) -> Vec<Fq> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| field.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| field.zero());
            x.add(&y)
        })
        .collect()
}

fn dense_sub(a: &[Fq], b: &[Fq], field: &Field) -> Vec<Fq> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| field.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| field.zero());
            x.sub(&y)
        })
        .collect()
}

/// j-invariant of the double cover of the line branched at the pinch
/// points, from a squarefree quartic transverse discriminant.
pub fn pinch_point_j_check(
    disc: &TransverseDiscriminant,
    field: &Field,
) -> Result<Fq, ResolutionError> {
    if !disc.squarefree || disc.degree != 4 {
        return Err(ResolutionError::BadDiscriminant);
    }
    if !disc.disc.iter().all(|c| c.in_prime_field()) {
        return Err(ResolutionError::BadDiscriminant);
    }
    let ints: Vec<i64> = disc
        .disc
        .iter()
        .map(|c| c.as_prime_value().unwrap() as i64)
        .collect();
    crate::elliptic::j_from_quartic_mod_p(&ints, field)
        .map_err(|_| ResolutionError::BadDiscriminant)
}
