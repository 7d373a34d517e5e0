//! Exact incidence analysis of parameterized 8-plane families in P^3:
//! multiple lines, multiple points, the octic admissibility predicate, and
//! degeneration detection in the family parameter t.

use crate::multipoly::{
    parse_rational_poly, rational_roots, vars, MultipolyError, QPoly, Rational, Vars,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum ArrangementError {
    #[error("planes {0} and {1} coincide (degenerate parameter)")]
    DegenerateParameter(usize, usize),
    #[error("plane is identically zero at this parameter")]
    ZeroPlane,
    #[error("plane does not contain the line")]
    NotThroughLine,
    #[error("lines are skew (no common plane)")]
    SkewLines,
    #[error("lines are equal (no unique spanning plane)")]
    EqualLines,
    #[error("expected exactly {0} planes, got {1}")]
    WrongCount(usize, usize),
    #[error(transparent)]
    Poly(#[from] MultipolyError),
}

// ---------------------------------------------------------------------------
// exact linear algebra over Q on tiny matrices
// ---------------------------------------------------------------------------

fn rref(rows: &mut Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let t = &rows[rank][c] * &f;
                    rows[r][c] = &rows[r][c] - &t;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn rank_of(rows: &[&[BigInt]]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|c| Rational::from_integer(c.clone())).collect())
        .collect();
    rref(&mut m)
}

/// Primitive integer vector from a rational one: clear denominators, divide
/// by the gcd, make the first nonzero entry positive.
fn primitive_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut den_lcm = BigInt::one();
    for c in v {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|c| {
            let r = c * Rational::from_integer(den_lcm.clone());
            debug_assert!(r.denom().is_one());
            r.numer().clone()
        })
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in &mut ints {
            *c = &*c / &g;
        }
    }
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut ints {
                *c = -&*c;
            }
        }
    }
    ints
}

// ---------------------------------------------------------------------------
// planes, points, lines
// ---------------------------------------------------------------------------

/// Plane in P^3 as a primitive integer covector (c_x, c_y, c_z, c_v), first
/// nonzero entry positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    coeffs: [BigInt; 4],
}

impl Plane {
    pub fn new(coeffs: [BigInt; 4]) -> Result<Self, ArrangementError> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(ArrangementError::ZeroPlane);
        }
        let v: Vec<Rational> = coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let prim = primitive_vector(&v);
        Ok(Plane {
            coeffs: [
                prim[0].clone(),
                prim[1].clone(),
                prim[2].clone(),
                prim[3].clone(),
            ],
        })
    }

    pub fn from_i64(c: [i64; 4]) -> Self {
        Plane::new(c.map(BigInt::from)).expect("nonzero plane")
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.coeffs
    }

    pub fn contains_point(&self, pt: &ProjPoint) -> bool {
        let s: BigInt = self
            .coeffs
            .iter()
            .zip(pt.coords.iter())
            .map(|(a, b)| a * b)
            .sum();
        s.is_zero()
    }

    pub fn contains_line(&self, line: &LineP3) -> bool {
        let rows: Vec<&[BigInt]> = vec![&line.basis[0].coeffs, &line.basis[1].coeffs, &self.coeffs];
        rank_of(&rows) == 2
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "v"];
        let mut first = true;
        for (c, n) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if first {
                if c == &BigInt::from(-1) {
                    write!(f, "-")?;
                } else if c != &BigInt::one() {
                    write!(f, "{c}*")?;
                }
                write!(f, "{n}")?;
                first = false;
            } else {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let a = c.abs();
                if a != BigInt::one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{n}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Plane({self})")
    }
}

/// Point of P^3 as a primitive integer coordinate vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [BigInt; 4],
}

impl ProjPoint {
    pub fn from_rational(v: &[Rational]) -> Self {
        let prim = primitive_vector(v);
        ProjPoint {
            coords: [
                prim[0].clone(),
                prim[1].clone(),
                prim[2].clone(),
                prim[3].clone(),
            ],
        }
    }

    pub fn from_i64(c: [i64; 4]) -> Self {
        let v: Vec<Rational> = c
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect();
        Self::from_rational(&v)
    }

    pub fn coords(&self) -> &[BigInt; 4] {
        &self.coords
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{}:{})",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint{self}")
    }
}

/// Line in P^3, identified by its primitive dual Pluecker vector (the 2x2
/// minors of a covector basis of the planes through it), carrying a
/// canonical two-plane basis in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineP3 {
    pluecker: [BigInt; 6],
    basis: [Plane; 2],
}

impl LineP3 {
    /// The intersection line of two distinct planes.
    pub fn from_planes(a: &Plane, b: &Plane) -> Result<Self, ArrangementError> {
        if a == b {
            return Err(ArrangementError::EqualLines);
        }
        let mut rows: Vec<Vec<Rational>> = [a, b]
            .iter()
            .map(|p| {
                p.coeffs
                    .iter()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect()
            })
            .collect();
        let rank = rref(&mut rows);
        debug_assert_eq!(rank, 2);
        let b0 = primitive_vector(&rows[0]);
        let b1 = primitive_vector(&rows[1]);
        let basis = [
            Plane::new([b0[0].clone(), b0[1].clone(), b0[2].clone(), b0[3].clone()])?,
            Plane::new([b1[0].clone(), b1[1].clone(), b1[2].clone(), b1[3].clone()])?,
        ];
        let (ca, cb) = (&basis[0].coeffs, &basis[1].coeffs);
        let q = |i: usize, j: usize| -> BigInt { &ca[i] * &cb[j] - &ca[j] * &cb[i] };
        let raw = [q(0, 1), q(0, 2), q(0, 3), q(1, 2), q(1, 3), q(2, 3)];
        let v: Vec<Rational> = raw
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let prim = primitive_vector(&v);
        let pluecker = [
            prim[0].clone(),
            prim[1].clone(),
            prim[2].clone(),
            prim[3].clone(),
            prim[4].clone(),
            prim[5].clone(),
        ];
        Ok(LineP3 { pluecker, basis })
    }

    pub fn pluecker(&self) -> &[BigInt; 6] {
        &self.pluecker
    }

    /// Canonical covector basis (RREF); `basis()[0]` is the pencil's first
    /// reference plane.
    pub fn basis(&self) -> &[Plane; 2] {
        &self.basis
    }

    pub fn contains_point(&self, pt: &ProjPoint) -> bool {
        self.basis[0].contains_point(pt) && self.basis[1].contains_point(pt)
    }

    /// Pluecker quadric relation q01 q23 - q02 q13 + q03 q12 = 0.
    pub fn pluecker_relation_holds(&self) -> bool {
        let q = &self.pluecker;
        (&q[0] * &q[5] - &q[1] * &q[4] + &q[2] * &q[3]).is_zero()
    }
}

impl fmt::Debug for LineP3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LineP3[{} = 0, {} = 0]", self.basis[0], self.basis[1])
    }
}

/// Pencil coordinate of a plane through a line: plane = a*basis0 + b*basis1
/// as a primitive (a : b).
pub fn pencil_coordinate(
    line: &LineP3,
    plane: &Plane,
) -> Result<(BigInt, BigInt), ArrangementError> {
    if !plane.contains_line(line) {
        return Err(ArrangementError::NotThroughLine);
    }
    let b0 = &line.basis[0].coeffs;
    let b1 = &line.basis[1].coeffs;
    let target = &plane.coeffs;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let det = &b0[i] * &b1[j] - &b0[j] * &b1[i];
            if det.is_zero() {
                continue;
            }
            let det = Rational::from_integer(det);
            let a = Rational::from_integer(&target[i] * &b1[j] - &target[j] * &b1[i]) / &det;
            let b = Rational::from_integer(&b0[i] * &target[j] - &b0[j] * &target[i]) / &det;
            let prim = primitive_vector(&[a, b]);
            return Ok((prim[0].clone(), prim[1].clone()));
        }
    }
    unreachable!("line basis has rank 2");
}

/// The unique plane containing two distinct intersecting lines.
pub fn span_line_line(a: &LineP3, b: &LineP3) -> Result<Plane, ArrangementError> {
    if a == b {
        return Err(ArrangementError::EqualLines);
    }
    // planes through both lines = intersection of the two dual 2-spaces:
    // solve x*a0 + y*a1 - z*b0 - w*b1 = 0
    let mut m: Vec<Vec<Rational>> = (0..4)
        .map(|r| {
            vec![
                Rational::from_integer(a.basis[0].coeffs[r].clone()),
                Rational::from_integer(a.basis[1].coeffs[r].clone()),
                Rational::from_integer(-&b.basis[0].coeffs[r]),
                Rational::from_integer(-&b.basis[1].coeffs[r]),
            ]
        })
        .collect();
    let rank = rref(&mut m);
    if rank == 4 {
        return Err(ArrangementError::SkewLines);
    }
    let mut pivots = vec![None; 4];
    let mut free_col = None;
    let mut r = 0;
    for c in 0..4 {
        if r < rank && !m[r][c].is_zero() {
            pivots[c] = Some(r);
            r += 1;
        } else {
            free_col = Some(c);
        }
    }
    let free_col = free_col.expect("rank < 4 has a free column");
    let mut sol = vec![Rational::zero(); 4];
    sol[free_col] = Rational::one();
    for c in 0..4 {
        if let Some(pr) = pivots[c] {
            sol[c] = -m[pr][free_col].clone();
        }
    }
    let cov: Vec<Rational> = (0..4)
        .map(|i| {
            &sol[0] * &Rational::from_integer(a.basis[0].coeffs[i].clone())
                + &sol[1] * &Rational::from_integer(a.basis[1].coeffs[i].clone())
        })
        .collect();
    if cov.iter().all(|c| c.is_zero()) {
        return Err(ArrangementError::SkewLines);
    }
    let prim = primitive_vector(&cov);
    Plane::new([
        prim[0].clone(),
        prim[1].clone(),
        prim[2].clone(),
        prim[3].clone(),
    ])
}

// ---------------------------------------------------------------------------
// the parameterized family
// ---------------------------------------------------------------------------

/// Plane family: coefficient 4-vectors whose entries are integer polynomials
/// in t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyArrangement {
    tvars: Vars,
    planes: Vec<[QPoly; 4]>,
}

impl FamilyArrangement {
    pub fn new(planes: Vec<[QPoly; 4]>) -> Self {
        let tvars = planes
            .first()
            .map(|p| p[0].vars().clone())
            .unwrap_or_else(|| vars(["t"]));
        FamilyArrangement { tvars, planes }
    }

    /// The built-in double-octic branch family:
    /// x, y, x+y, z, x+2y+z+tv, v, y+z+v, x+y+z+(t-1)v.
    pub fn paper_octic() -> Self {
        let tv = vars(["t"]);
        let q = |s: &str| parse_rational_poly(&tv, s).unwrap();
        let rows: [[&str; 4]; 8] = [
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["1", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["1", "2", "1", "t"],
            ["0", "0", "0", "1"],
            ["0", "1", "1", "1"],
            ["1", "1", "1", "t-1"],
        ];
        FamilyArrangement::new(
            rows.iter()
                .map(|r| [q(r[0]), q(r[1]), q(r[2]), q(r[3])])
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn plane_coeff_polys(&self) -> &[[QPoly; 4]] {
        &self.planes
    }

    /// Instantiate at a rational parameter; errors when a plane vanishes or
    /// two coincide (the finite degenerate-parameter mechanism).
    pub fn instantiate(&self, t: &Rational) -> Result<Vec<Plane>, ArrangementError> {
        let point = [t.clone()];
        let mut planes = Vec::with_capacity(self.planes.len());
        for coeffs in &self.planes {
            let v: Vec<Rational> = coeffs.iter().map(|c| c.eval(&point)).collect();
            if v.iter().all(|c| c.is_zero()) {
                return Err(ArrangementError::ZeroPlane);
            }
            let prim = primitive_vector(&v);
            planes.push(Plane::new([
                prim[0].clone(),
                prim[1].clone(),
                prim[2].clone(),
                prim[3].clone(),
            ])?);
        }
        for i in 0..planes.len() {
            for j in (i + 1)..planes.len() {
                if planes[i] == planes[j] {
                    return Err(ArrangementError::DegenerateParameter(i, j));
                }
            }
        }
        Ok(planes)
    }

    /// The limiting arrangement as t goes to infinity: each plane tends to
    /// its leading t-coefficient vector.
    pub fn instantiate_at_infinity(&self) -> Result<Vec<Plane>, ArrangementError> {
        let mut planes = Vec::with_capacity(self.planes.len());
        for coeffs in &self.planes {
            let dmax = coeffs.iter().map(|c| c.total_degree()).max().unwrap_or(0);
            let v: Vec<Rational> = coeffs
                .iter()
                .map(|c| {
                    c.terms()
                        .iter()
                        .find(|(m, _)| m.total_degree() == dmax)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Rational::zero)
                })
                .collect();
            if v.iter().all(|c| c.is_zero()) {
                return Err(ArrangementError::ZeroPlane);
            }
            let prim = primitive_vector(&v);
            planes.push(Plane::new([
                prim[0].clone(),
                prim[1].clone(),
                prim[2].clone(),
                prim[3].clone(),
            ])?);
        }
        for i in 0..planes.len() {
            for j in (i + 1)..planes.len() {
                if planes[i] == planes[j] {
                    return Err(ArrangementError::DegenerateParameter(i, j));
                }
            }
        }
        Ok(planes)
    }
}

// ---------------------------------------------------------------------------
// incidence census
// ---------------------------------------------------------------------------

/// Exact incidence census: m-fold lines (m >= 2), l-fold points (l >= 3)
/// split by whether they lie on a >= 3-fold line, and the resolved list of
/// points with 5 or more planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSignature {
    /// multiplicity m -> number of m-fold lines
    pub line_census: BTreeMap<usize, usize>,
    /// (multiplicity l, lies on a >= 3-fold line) -> number of points
    pub point_census: BTreeMap<(usize, bool), usize>,
    /// points with >= 5 incident planes, with 1-based plane index sets
    pub fivefold_points: Vec<(ProjPoint, BTreeSet<usize>)>,
    /// every m-fold line with m >= 3, with its 1-based plane index set
    pub multiple_lines: Vec<(LineP3, BTreeSet<usize>)>,
}

pub fn incidence_signature(planes: &[Plane]) -> IncidenceSignature {
    let n = planes.len();
    let mut lines: HashMap<[BigInt; 6], (LineP3, BTreeSet<usize>)> = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let line = LineP3::from_planes(&planes[i], &planes[j]).expect("distinct planes");
            let entry = lines
                .entry(line.pluecker.clone())
                .or_insert_with(|| (line.clone(), BTreeSet::new()));
            entry.1.insert(i + 1);
            entry.1.insert(j + 1);
        }
    }
    for (line, incident) in lines.values_mut() {
        for (k, p) in planes.iter().enumerate() {
            if p.contains_line(line) {
                incident.insert(k + 1);
            }
        }
    }
    let mut line_census: BTreeMap<usize, usize> = BTreeMap::new();
    let mut multiple_lines = Vec::new();
    for (line, incident) in lines.values() {
        let m = incident.len();
        *line_census.entry(m).or_insert(0) += 1;
        if m >= 3 {
            multiple_lines.push((line.clone(), incident.clone()));
        }
    }
    multiple_lines.sort_by(|a, b| a.0.pluecker.cmp(&b.0.pluecker));

    let mut points: HashMap<[BigInt; 4], BTreeSet<usize>> = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let rows: Vec<&[BigInt]> =
                    vec![&planes[i].coeffs, &planes[j].coeffs, &planes[k].coeffs];
                if rank_of(&rows) != 3 {
                    continue;
                }
                let pt = nullspace_point(&[&planes[i], &planes[j], &planes[k]]);
                points.entry(pt.coords.clone()).or_default();
            }
        }
    }
    for (coords, incident) in points.iter_mut() {
        let pt = ProjPoint {
            coords: coords.clone(),
        };
        for (k, p) in planes.iter().enumerate() {
            if p.contains_point(&pt) {
                incident.insert(k + 1);
            }
        }
    }
    let mut point_census: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut fivefold_points = Vec::new();
    for (coords, incident) in &points {
        let pt = ProjPoint {
            coords: coords.clone(),
        };
        let l = incident.len();
        if l < 3 {
            continue;
        }
        let on_multi_line = multiple_lines
            .iter()
            .any(|(line, _)| line.contains_point(&pt));
        *point_census.entry((l, on_multi_line)).or_insert(0) += 1;
        if l >= 5 {
            fivefold_points.push((pt, incident.clone()));
        }
    }
    fivefold_points.sort_by(|a, b| a.0.coords.cmp(&b.0.coords));
    IncidenceSignature {
        line_census,
        point_census,
        fivefold_points,
        multiple_lines,
    }
}

fn nullspace_point(planes: &[&Plane; 3]) -> ProjPoint {
    let mut m: Vec<Vec<Rational>> = planes
        .iter()
        .map(|p| {
            p.coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    let rank = rref(&mut m);
    debug_assert_eq!(rank, 3);
    let mut pivots = vec![None; 4];
    let mut free_col = None;
    let mut r = 0;
    for c in 0..4 {
        if r < rank && !m[r][c].is_zero() {
            pivots[c] = Some(r);
            r += 1;
        } else {
            free_col = Some(c);
        }
    }
    let free_col = free_col.expect("rank 3 in 4 columns");
    let mut sol = vec![Rational::zero(); 4];
    sol[free_col] = Rational::one();
    for c in 0..4 {
        if let Some(pr) = pivots[c] {
            sol[c] = -m[pr][free_col].clone();
        }
    }
    ProjPoint::from_rational(&sol)
}

/// Admissibility report for a double-octic branch arrangement.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// lines on >= 4 planes (their plane index sets)
    pub violating_lines: Vec<BTreeSet<usize>>,
    /// points on >= 6 planes
    pub violating_points: Vec<(ProjPoint, BTreeSet<usize>)>,
}

/// No k-fold lines for k >= 4 and no l-fold points for l >= 6.
pub fn is_octic_admissible(planes: &[Plane]) -> Result<AdmissibilityReport, ArrangementError> {
    if planes.len() != 8 {
        return Err(ArrangementError::WrongCount(8, planes.len()));
    }
    let sig = incidence_signature(planes);
    let violating_lines: Vec<BTreeSet<usize>> = sig
        .multiple_lines
        .iter()
        .filter(|(_, inc)| inc.len() >= 4)
        .map(|(_, inc)| inc.clone())
        .collect();
    let violating_points: Vec<(ProjPoint, BTreeSet<usize>)> = sig
        .fivefold_points
        .iter()
        .filter(|(_, inc)| inc.len() >= 6)
        .cloned()
        .collect();
    Ok(AdmissibilityReport {
        admissible: violating_lines.is_empty() && violating_points.is_empty(),
        violating_lines,
        violating_points,
    })
}

/// Degenerate parameter values of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationReport {
    /// rational t where the incidence signature differs from generic
    pub degenerate: BTreeSet<Rational>,
    /// the t = infinity (leading-coefficient) arrangement degenerates
    pub infinity: bool,
    /// candidate polynomials had non-rational roots (left undecided)
    pub residual: bool,
    /// the verified-generic reference parameter
    pub reference_t: Rational,
}

/// All rational parameters where the incidence signature changes: collect
/// the 4x4 coefficient minors and pairwise-coincidence conditions as
/// polynomials in t, take rational roots of each, then re-run the census at
/// every candidate against a verified-generic reference value.
pub fn degenerate_parameters(
    fam: &FamilyArrangement,
) -> Result<DegenerationReport, ArrangementError> {
    let mut candidate_polys: Vec<QPoly> = Vec::new();
    let n = fam.planes.len();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let det = det4(
                        &fam.planes[a],
                        &fam.planes[b],
                        &fam.planes[c],
                        &fam.planes[d],
                    );
                    if !det.is_zero() && !det.is_constant() {
                        candidate_polys.push(det);
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let m = &(&fam.planes[a][i] * &fam.planes[b][j])
                        - &(&fam.planes[a][j] * &fam.planes[b][i]);
                    if !m.is_zero() && !m.is_constant() {
                        candidate_polys.push(m);
                    }
                }
            }
        }
    }

    let mut candidates: BTreeSet<Rational> = BTreeSet::new();
    let mut residual = false;
    for p in &candidate_polys {
        let r = rational_roots(p)?;
        residual |= r.residual;
        candidates.extend(r.roots);
    }

    let mut ref_t = Rational::zero();
    while candidates.contains(&ref_t) {
        ref_t = ref_t + Rational::one();
    }
    let ref_planes = fam.instantiate(&ref_t)?;
    let ref_sig = incidence_signature(&ref_planes);

    let mut degenerate = BTreeSet::new();
    for t in &candidates {
        let differs = match fam.instantiate(t) {
            Err(_) => true,
            Ok(planes) => {
                let sig = incidence_signature(&planes);
                sig.line_census != ref_sig.line_census || sig.point_census != ref_sig.point_census
            }
        };
        if differs {
            degenerate.insert(t.clone());
        }
    }

    let infinity = match fam.instantiate_at_infinity() {
        Err(_) => true,
        Ok(planes) => {
            let sig = incidence_signature(&planes);
            sig.line_census != ref_sig.line_census || sig.point_census != ref_sig.point_census
        }
    };
    Ok(DegenerationReport {
        degenerate,
        infinity,
        residual,
        reference_t: ref_t,
    })
}

fn det4(a: &[QPoly; 4], b: &[QPoly; 4], c: &[QPoly; 4], d: &[QPoly; 4]) -> QPoly {
    let rows = [a, b, c, d];
    let vars = a[0].vars().clone();
    let mut acc = QPoly::zero(&vars);
    let minor3 = |r: [&[QPoly; 4]; 3], cols: [usize; 3]| -> QPoly {
        let m = |i: usize, j: usize| -> &QPoly { &r[i][cols[j]] };
        let t1 = m(0, 0) * &(&(m(1, 1) * m(2, 2)) - &(m(1, 2) * m(2, 1)));
        let t2 = m(0, 1) * &(&(m(1, 0) * m(2, 2)) - &(m(1, 2) * m(2, 0)));
        let t3 = m(0, 2) * &(&(m(1, 0) * m(2, 1)) - &(m(1, 1) * m(2, 0)));
        &(&t1 - &t2) + &t3
    };
    for (j, sign) in [(0usize, 1i64), (1, -1), (2, 1), (3, -1)] {
        let cols: [usize; 3] = match j {
            0 => [1, 2, 3],
            1 => [0, 2, 3],
            2 => [0, 1, 3],
            _ => [0, 1, 2],
        };
        let sub = minor3([rows[1], rows[2], rows[3]], cols);
        let term = &rows[0][j] * &sub;
        let signed = if sign == 1 { term } else { term.neg() };
        acc = &acc + &signed;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn instantiate_paper_family() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(0)).unwrap();
        assert_eq!(planes[4], Plane::from_i64([1, 2, 1, 0])); // x + 2y + z
        let planes = fam.instantiate(&q(1)).unwrap();
        assert_eq!(planes[7], Plane::from_i64([1, 1, 1, 0])); // x + y + z
        let planes = fam.instantiate(&q(5)).unwrap();
        assert_eq!(planes.len(), 8);
    }

    #[test]
    fn generic_census_matches_known_values() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(5)).unwrap();
        let sig = incidence_signature(&planes);
        assert_eq!(sig.line_census.get(&3), Some(&1));
        assert_eq!(sig.line_census.get(&2), Some(&25));
        assert_eq!(sig.point_census.get(&(4, false)), Some(&6));
        assert_eq!(sig.point_census.get(&(4, true)), Some(&5));
        assert!(sig.fivefold_points.is_empty());
        let (l3, incident) = &sig.multiple_lines[0];
        assert_eq!(sig.multiple_lines.len(), 1);
        assert_eq!(incident.iter().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(l3.contains_point(&ProjPoint::from_i64([0, 0, 1, 0])));
        assert!(l3.contains_point(&ProjPoint::from_i64([0, 0, 0, 1])));
        assert!(l3.pluecker_relation_holds());
    }

    #[test]
    fn double_line_count_mechanism() {
        // 25 = C(8,2) - C(3,2): exactly the pairs within {P1,P2,P3} share l3
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(5)).unwrap();
        let mut shared = 0;
        for i in 0..8 {
            for j in (i + 1)..8 {
                let line = LineP3::from_planes(&planes[i], &planes[j]).unwrap();
                let m = planes.iter().filter(|p| p.contains_line(&line)).count();
                if m >= 3 {
                    shared += 1;
                    assert!(i < 3 && j < 3, "unexpected shared line P{} P{}", i + 1, j + 1);
                }
            }
        }
        assert_eq!(shared, 3); // C(3,2)
        let sig = incidence_signature(&planes);
        assert_eq!(sig.line_census.get(&2), Some(&(28 - 3)));
    }

    #[test]
    fn census_at_zero_has_fivefold_point() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(0)).unwrap();
        let sig = incidence_signature(&planes);
        assert_eq!(sig.fivefold_points.len(), 1);
        let (pt, incident) = &sig.fivefold_points[0];
        assert_eq!(pt, &ProjPoint::from_i64([0, 0, 0, 1]));
        assert_eq!(
            incident.iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5]
        );
        assert_eq!(sig.point_census.get(&(4, true)), Some(&3));
        assert_eq!(sig.point_census.get(&(4, false)), Some(&6));
        assert_eq!(sig.line_census.get(&2), Some(&25));
    }

    #[test]
    fn simplex_census() {
        let planes = vec![
            Plane::from_i64([1, 0, 0, 0]),
            Plane::from_i64([0, 1, 0, 0]),
            Plane::from_i64([0, 0, 1, 0]),
            Plane::from_i64([1, 1, 1, 1]),
        ];
        let sig = incidence_signature(&planes);
        assert_eq!(sig.line_census.get(&2), Some(&6));
        assert_eq!(sig.line_census.get(&3), None);
        assert_eq!(sig.point_census.get(&(3, false)), Some(&4));
        assert!(sig.fivefold_points.is_empty());
    }

    #[test]
    fn admissibility() {
        let fam = FamilyArrangement::paper_octic();
        for t in [0i64, 5] {
            let planes = fam.instantiate(&q(t)).unwrap();
            let rep = is_octic_admissible(&planes).unwrap();
            assert!(rep.admissible, "t = {t}");
        }
        let planes = vec![
            Plane::from_i64([1, 0, 0, 0]),
            Plane::from_i64([0, 1, 0, 0]),
            Plane::from_i64([1, 1, 0, 0]),
            Plane::from_i64([1, -1, 0, 0]),
            Plane::from_i64([0, 0, 1, 0]),
            Plane::from_i64([0, 0, 0, 1]),
            Plane::from_i64([0, 0, 1, 1]),
            Plane::from_i64([1, 1, 1, 1]),
        ];
        let rep = is_octic_admissible(&planes).unwrap();
        assert!(!rep.admissible);
        assert_eq!(rep.violating_lines.len(), 1);
        assert_eq!(
            rep.violating_lines[0].iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
    }

    #[test]
    fn degenerations_of_paper_family() {
        let fam = FamilyArrangement::paper_octic();
        let rep = degenerate_parameters(&fam).unwrap();
        assert_eq!(
            rep.degenerate.iter().cloned().collect::<Vec<_>>(),
            vec![q(0), q(1), q(2)]
        );
        assert!(rep.infinity);
        assert!(!rep.residual);
        let ref_sig = incidence_signature(&fam.instantiate(&rep.reference_t).unwrap());
        for t in &rep.degenerate {
            let sig = incidence_signature(&fam.instantiate(t).unwrap());
            assert_ne!(
                (sig.line_census, sig.point_census),
                (ref_sig.line_census.clone(), ref_sig.point_census.clone())
            );
        }
    }

    #[test]
    fn t_equals_one_merges_p4_and_p8_points() {
        // at t = 1 the l3-P8 point lands on the l3-P4 point (0:0:0:1); two
        // further coincidences appear elsewhere, cross-checked externally
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(1)).unwrap();
        let sig = incidence_signature(&planes);
        let five: Vec<_> = sig
            .fivefold_points
            .iter()
            .map(|(p, inc)| (p.clone(), inc.iter().copied().collect::<Vec<_>>()))
            .collect();
        assert_eq!(five.len(), 3);
        assert!(five.contains(&(ProjPoint::from_i64([0, 0, 0, 1]), vec![1, 2, 3, 4, 8])));
        assert!(five.contains(&(ProjPoint::from_i64([0, 0, 1, -1]), vec![1, 2, 3, 5, 7])));
        assert!(five.contains(&(ProjPoint::from_i64([1, -1, 0, 1]), vec![3, 4, 5, 7, 8])));
    }

    #[test]
    fn t_equals_two_signature() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(2)).unwrap();
        let sig = incidence_signature(&planes);
        let five: Vec<_> = sig
            .fivefold_points
            .iter()
            .map(|(p, inc)| (p.clone(), inc.iter().copied().collect::<Vec<_>>()))
            .collect();
        assert_eq!(five.len(), 2);
        assert!(five.contains(&(ProjPoint::from_i64([0, 0, 1, -1]), vec![1, 2, 3, 7, 8])));
        assert!(five.contains(&(ProjPoint::from_i64([0, 1, 0, -1]), vec![1, 4, 5, 7, 8])));
    }

    #[test]
    fn constant_family_has_no_degenerations() {
        let tv = vars(["t"]);
        let c = |s: &str| parse_rational_poly(&tv, s).unwrap();
        let fam = FamilyArrangement::new(vec![
            [c("1"), c("0"), c("0"), c("0")],
            [c("0"), c("1"), c("0"), c("0")],
            [c("0"), c("0"), c("1"), c("0")],
            [c("1"), c("1"), c("1"), c("1")],
        ]);
        let rep = degenerate_parameters(&fam).unwrap();
        assert!(rep.degenerate.is_empty());
        assert!(!rep.infinity);
    }

    #[test]
    fn pencil_coordinates_in_l3() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(0)).unwrap();
        let l3 = LineP3::from_planes(&planes[0], &planes[1]).unwrap();
        assert_eq!(l3.basis()[0], Plane::from_i64([1, 0, 0, 0]));
        assert_eq!(l3.basis()[1], Plane::from_i64([0, 1, 0, 0]));
        assert_eq!(
            pencil_coordinate(&l3, &planes[0]).unwrap(),
            (BigInt::one(), BigInt::zero())
        );
        assert_eq!(
            pencil_coordinate(&l3, &planes[2]).unwrap(),
            (BigInt::one(), BigInt::one())
        );
        let p4p5 = LineP3::from_planes(&planes[3], &planes[4]).unwrap();
        let span = span_line_line(&l3, &p4p5).unwrap();
        assert_eq!(span, Plane::from_i64([1, 2, 0, 0]));
        assert_eq!(
            pencil_coordinate(&l3, &span).unwrap(),
            (BigInt::one(), BigInt::from(2))
        );
        assert!(pencil_coordinate(&l3, &planes[3]).is_err());
    }

    #[test]
    fn span_of_simple_lines() {
        let x = Plane::from_i64([1, 0, 0, 0]);
        let y = Plane::from_i64([0, 1, 0, 0]);
        let z = Plane::from_i64([0, 0, 1, 0]);
        let v = Plane::from_i64([0, 0, 0, 1]);
        let xy = LineP3::from_planes(&x, &y).unwrap();
        let xz = LineP3::from_planes(&x, &z).unwrap();
        assert_eq!(span_line_line(&xy, &xz).unwrap(), x);
        let zv = LineP3::from_planes(&z, &v).unwrap();
        assert!(matches!(
            span_line_line(&xy, &zv),
            Err(ArrangementError::SkewLines)
        ));
        assert!(matches!(
            span_line_line(&xy, &xy),
            Err(ArrangementError::EqualLines)
        ));
    }

    #[test]
    fn pencil_coordinate_injective_on_distinct_planes() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(0)).unwrap();
        let l3 = LineP3::from_planes(&planes[0], &planes[1]).unwrap();
        let p4p5 = LineP3::from_planes(&planes[3], &planes[4]).unwrap();
        let span = span_line_line(&l3, &p4p5).unwrap();
        let mut seen = BTreeSet::new();
        for p in [&planes[0], &planes[1], &planes[2], &span] {
            let c = pencil_coordinate(&l3, p).unwrap();
            assert!(seen.insert(c), "pencil coordinate repeated for {p}");
        }
    }

    #[test]
    fn signature_invariant_under_unimodular_change() {
        let fam = FamilyArrangement::paper_octic();
        let planes = fam.instantiate(&q(5)).unwrap();
        let sig = incidence_signature(&planes);
        let t_rows: [[i64; 4]; 4] = [[1, 2, 0, 1], [0, 1, 1, 0], [0, 0, 1, 3], [0, 0, 0, 1]];
        let transformed: Vec<Plane> = planes
            .iter()
            .map(|p| {
                let mut c = [
                    BigInt::zero(),
                    BigInt::zero(),
                    BigInt::zero(),
                    BigInt::zero(),
                ];
                for (i, ci) in c.iter_mut().enumerate() {
                    for j in 0..4 {
                        *ci += BigInt::from(t_rows[j][i]) * &p.coeffs()[j];
                    }
                }
                Plane::new(c).unwrap()
            })
            .collect();
        let sig2 = incidence_signature(&transformed);
        assert_eq!(sig.line_census, sig2.line_census);
        assert_eq!(sig.point_census, sig2.point_census);
    }
}
