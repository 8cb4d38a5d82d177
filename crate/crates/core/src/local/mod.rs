//! Invariants of a plane curve germ at a point with coordinates in the
//! working field: multiplicity, tangent cone, intersection numbers, Milnor
//! and Tjurina numbers, Hessian contact and tangential multiplicities.

mod colength;
mod singularity;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{CoeffError, Field, Scalar};
use crate::parse::point_text;
use crate::poly::{binary_roots, translate_to_origin, AffineLocalPoly, BinaryForm, Chart, HomogPoly, Point, Poly, PolyError, UV};

pub use colength::{colength, colength_bounded, default_cap};
pub use singularity::{SingularityType, SingularityTypeClaim};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LocalError {
    #[error("the point does not lie on the curve")]
    NotOnCurve,
    #[error("the point has no nonzero coordinate")]
    BadPoint,
    #[error("singularity is not isolated (no stabilization up to truncation degree {cap})")]
    NotIsolated { cap: u32 },
    #[error("the germs share a component through the point")]
    CommonComponent,
    #[error("tangent cone does not split over the field: remaining factor {0}")]
    IncompleteSplit(String),
    #[error("the line is not in the tangent cone")]
    NotTangent,
    #[error("the Hessian vanishes identically")]
    HessianVanishes,
    #[error("the point is singular")]
    SingularPoint,
    #[error("a line component of the curve passes through the point")]
    LineComponent,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Linear form `α u + β v` in local coordinates, normalized so that its
/// first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLine {
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl LocalLine {
    pub fn new(field: &Field, alpha: &Scalar, beta: &Scalar) -> Result<Self, LocalError> {
        let lead = if field.is_zero(alpha) { beta } else { alpha };
        let inv = field.inv(lead).map_err(|_| LocalError::BadPoint)?;
        Ok(LocalLine {
            alpha: field.mul(alpha, &inv),
            beta: field.mul(beta, &inv),
        })
    }

    /// New coordinates `(s, w)` with `w` equal to this linear form.
    fn adapted_coordinates(&self, field: &Field) -> [Poly<2>; 2] {
        let s = Poly::var(field, 0);
        let w = Poly::var(field, 1);
        let (c1, c2) = if field.is_zero(&self.alpha) {
            (field.zero(), field.inv(&self.beta).expect("normalized"))
        } else {
            (field.inv(&self.alpha).expect("normalized"), field.zero())
        };
        [
            s.scale(&self.beta).add(&w.scale(&c1)),
            s.scale(&field.neg(&self.alpha)).add(&w.scale(&c2)),
        ]
    }
}

/// One factor `ℓ^a` of the tangent cone.
#[derive(Clone, Debug)]
pub struct TangentFactor {
    pub line: LocalLine,
    pub exponent: u32,
}

fn germ_at(f: &HomogPoly, p: &Point) -> Result<(Chart, AffineLocalPoly), LocalError> {
    translate_to_origin(f, p).ok_or(LocalError::BadPoint)
}

/// Lowest total degree of the germ.
pub fn multiplicity(f: &AffineLocalPoly) -> Result<u32, LocalError> {
    if !f.field().is_zero(&f.coeff(&[0, 0])) {
        return Err(LocalError::NotOnCurve);
    }
    f.order().ok_or(LocalError::Poly(PolyError::ZeroPolynomial))
}

fn initial_form(f: &AffineLocalPoly) -> Result<(u32, BinaryForm), LocalError> {
    let m = multiplicity(f)?;
    let g = f.homogeneous_part(m);
    // coefficient of u^j v^(m-j) goes to slot j
    let mut coeffs = vec![f.field().zero(); m as usize + 1];
    for (e, c) in g.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    Ok((m, BinaryForm::new(f.field(), m as usize, coeffs)))
}

/// Number of distinct tangent lines over the algebraic closure.
pub fn distinct_tangent_count(f: &AffineLocalPoly) -> Result<usize, LocalError> {
    let (_, g) = initial_form(f)?;
    Ok(g.squarefree_part()?.degree())
}

/// Factors the initial form into linear forms over the working field.
pub fn tangent_cone(f: &AffineLocalPoly) -> Result<Vec<TangentFactor>, LocalError> {
    let field = f.field();
    let (m, g) = initial_form(f)?;
    let roots = binary_roots(&g)?;
    let mut out = Vec::new();
    let mut rest = g.clone();
    for ((a, b), k) in roots {
        // g(a, b) = 0 means b·u − a·v divides g
        let line = LocalLine::new(field, &b, &field.neg(&a))?;
        let lin = BinaryForm::new(field, 1, vec![line.beta.clone(), line.alpha.clone()]);
        for _ in 0..k {
            rest = rest.exact_div(&lin)?;
        }
        out.push(TangentFactor {
            line,
            exponent: k as u32,
        });
    }
    let found: u32 = out.iter().map(|t| t.exponent).sum();
    if found < m {
        return Err(LocalError::IncompleteSplit(rest.to_text(UV)));
    }
    Ok(out)
}

/// `dim O/(f, g)` at the origin.
pub fn intersection_multiplicity(f: &AffineLocalPoly, g: &AffineLocalPoly) -> Result<usize, LocalError> {
    let bound = f.total_degree().unwrap_or(0) as usize * g.total_degree().unwrap_or(0) as usize;
    let gens = [f.clone(), g.clone()];
    colength_bounded(&gens, default_cap(&gens), Some(bound)).map_err(|e| match e {
        LocalError::NotIsolated { .. } => LocalError::CommonComponent,
        other => other,
    })
}

/// `μ = dim O/(f_u, f_v)`.
pub fn milnor_number(f: &AffineLocalPoly) -> Result<usize, LocalError> {
    let d = f.total_degree().unwrap_or(0).saturating_sub(1) as usize;
    let gens = [f.derivative(0), f.derivative(1)];
    colength_bounded(&gens, default_cap(&gens), Some(d * d))
}

/// `τ = dim O/(f, f_u, f_v)`.
pub fn tjurina_local(f: &AffineLocalPoly) -> Result<usize, LocalError> {
    let d = f.total_degree().unwrap_or(0) as usize;
    let gens = [f.clone(), f.derivative(0), f.derivative(1)];
    colength_bounded(&gens, default_cap(&gens), Some(d * d.saturating_sub(1)))
}

/// Quasi-homogeneity, decided by `μ = τ`.
pub fn is_quasi_homogeneous(f: &AffineLocalPoly) -> Result<bool, LocalError> {
    Ok(milnor_number(f)? == tjurina_local(f)?)
}

/// Milnor number `(1−w₁)(1−w₂)/(w₁w₂)` of a weighted homogeneous germ.
pub fn weighted_mu(w1: &BigRational, w2: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one - w1) * (&one - w2) / (w1 * w2)
}

/// `(L, C)_p` for the line `ℓ = 0` through the origin.
pub fn line_contact(f: &AffineLocalPoly, line: &LocalLine) -> Result<u32, LocalError> {
    let g = f.compose(&line.adapted_coordinates(f.field()));
    g.terms()
        .keys()
        .filter(|e| e[1] == 0)
        .map(|e| e[0])
        .min()
        .ok_or(LocalError::LineComponent)
}

/// Exponent of `ℓ` in the initial form of `f`.
pub fn tangent_exponent(f: &AffineLocalPoly, line: &LocalLine) -> Result<u32, LocalError> {
    let (m, _) = initial_form(f)?;
    let g = f.homogeneous_part(m).compose(&line.adapted_coordinates(f.field()));
    Ok(g.terms().keys().map(|e| e[1]).min().unwrap_or(0))
}

/// `m_L = (L, C)_p − m_p + a_L`: the branches not tangent to `L` meet it
/// with their multiplicity, so the remainder is the contact of the
/// branches tangent to `L`.
pub fn tangential_multiplicity(f: &AffineLocalPoly, line: &LocalLine) -> Result<u32, LocalError> {
    let m = multiplicity(f)?;
    let a = tangent_exponent(f, line)?;
    if a == 0 {
        return Err(LocalError::NotTangent);
    }
    Ok(line_contact(f, line)? - m + a)
}

/// `(C, H_C)_p`, computed directly from the germs of `F` and its Hessian.
pub fn hessian_contact(f: &HomogPoly, p: &Point) -> Result<usize, LocalError> {
    let h = f.hessian()?;
    if h.is_zero() {
        return Err(LocalError::HessianVanishes);
    }
    hessian_contact_with(f, &h, p)
}

/// Product of the directions of lines through the origin contained in the
/// germ's curve: the gcd of all homogeneous parts.
pub fn line_component_form(f: &AffineLocalPoly) -> Result<BinaryForm, LocalError> {
    let field = f.field();
    let lo = multiplicity(f)?;
    let hi = f.total_degree().unwrap_or(lo);
    let mut acc: Option<BinaryForm> = None;
    for k in lo..=hi {
        let part = f.homogeneous_part(k);
        if part.is_zero() {
            continue;
        }
        let mut coeffs = vec![field.zero(); k as usize + 1];
        for (e, c) in part.terms() {
            coeffs[e[0] as usize] = c.clone();
        }
        let b = BinaryForm::new(field, k as usize, coeffs);
        acc = Some(match acc {
            None => b,
            Some(a) => a.gcd(&b)?,
        });
        if acc.as_ref().is_some_and(|a| a.degree() == 0) {
            break;
        }
    }
    Ok(acc.expect("germ is nonzero"))
}

fn hessian_contact_with(f: &HomogPoly, h: &HomogPoly, p: &Point) -> Result<usize, LocalError> {
    let (chart, germ) = germ_at(f, p)?;
    multiplicity(&germ)?;
    // a line component lies on the Hessian, and in characteristic zero
    // nothing else does
    if line_component_form(&germ)?.degree() > 0 {
        return Err(LocalError::CommonComponent);
    }
    let hg = chart.localize(h);
    intersection_multiplicity(&germ, &hg)
}

/// Fixed pseudo-random points used as polar centres.
fn polar_centres(field: &Field) -> Vec<Point> {
    [[3, -7, 11], [-5, 2, 13], [17, 19, -4]]
        .iter()
        .map(|c| c.map(|v| field.from_i64(v)))
        .filter(|q| q.iter().any(|c| !field.is_zero(c)))
        .collect()
}

/// `κ_p = (C, Δ_q)_p` for a generic polar, taken as the minimum over a few
/// fixed centres.
pub fn kappa(f: &HomogPoly, p: &Point) -> Result<usize, LocalError> {
    let (chart, germ) = germ_at(f, p)?;
    multiplicity(&germ)?;
    let mut best: Option<usize> = None;
    for q in polar_centres(f.field()) {
        let polar = f.polar(&q);
        if polar.is_zero() {
            continue;
        }
        match intersection_multiplicity(&germ, &chart.localize(&polar)) {
            Ok(k) => best = Some(best.map_or(k, |b| b.min(k))),
            Err(LocalError::CommonComponent) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or(LocalError::CommonComponent)
}

/// Checks `μ(X∪Y) = μ(X) + μ(Y) + 2(X,Y) − 1` for coprime germs.
pub fn check_milnor_union(fx: &AffineLocalPoly, fy: &AffineLocalPoly) -> Result<bool, LocalError> {
    let lhs = milnor_number(&fx.mul(fy))? as i64;
    let rhs = milnor_number(fx)? as i64 + milnor_number(fy)? as i64 + 2 * intersection_multiplicity(fx, fy)? as i64 - 1;
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TangentReport {
    /// Projective tangent line.
    pub line: String,
    pub exponent: u32,
    /// `(L, C)_p`.
    pub contact: u32,
    /// `m_L`.
    pub m_l: u32,
}

/// Local identities evaluated on the computed numbers.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LocalChecks {
    /// `κ = μ + m − 1`.
    pub kappa_formula: bool,
    /// `τ ≤ μ`.
    pub tau_le_mu: bool,
    /// `Σ a_L = m`, when the cone splits.
    pub cone_degree: Option<bool>,
    /// `(C,H_C)_p = 3μ + m − 3 + Σ m_L`, when the cone splits.
    pub hessian_formula: Option<bool>,
    /// `(C,H_C)_p ≥ 3k(k−1)` with equality iff ordinary simple.
    pub hessian_bound: Option<bool>,
    /// `(C,H_C)_p = 3κ + Σ m_L − 2m`, when the cone splits.
    pub hessian_kappa_split: Option<bool>,
}

impl LocalChecks {
    pub fn all_hold(&self) -> bool {
        self.kappa_formula
            && self.tau_le_mu
            && [self.cone_degree, self.hessian_formula, self.hessian_bound, self.hessian_kappa_split]
                .iter()
                .all(|c| c.unwrap_or(true))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LocalReport {
    pub point: String,
    pub mult: u32,
    pub mu: usize,
    pub tau: usize,
    pub quasi_homogeneous: bool,
    pub kappa: usize,
    pub distinct_tangents: usize,
    pub hessian_contact: Option<usize>,
    /// Present when the tangent cone splits over the field.
    pub tangent_cone: Option<Vec<TangentReport>>,
    /// Why some field is missing.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub checks: LocalChecks,
}

impl LocalReport {
    pub fn sum_m_l(&self) -> Option<u32> {
        self.tangent_cone.as_ref().map(|c| c.iter().map(|t| t.m_l).sum())
    }

    /// Whether the point is smooth or an ADE singularity: double points are
    /// `A_k`, triple points with two or more tangents are `D_k`, a triple
    /// tangent leaves `E_6, E_7, E_8` (`μ ≤ 8`), and higher multiplicity is
    /// never simple.
    pub fn is_simple(&self) -> bool {
        match self.mult {
            0..=2 => true,
            3 => self.distinct_tangents >= 2 || self.mu <= 8,
            _ => false,
        }
    }

    /// Ordinary simple multiple point: distinct tangents, each of contact 2.
    pub fn is_ordinary_simple(&self) -> Option<bool> {
        let cone = self.tangent_cone.as_ref()?;
        Some(cone.len() as u32 == self.mult && cone.iter().all(|t| t.exponent == 1 && t.m_l == 2))
    }
}

/// Full local analysis of `C: F = 0` at `p`.
pub fn analyze_point(f: &HomogPoly, p: &Point) -> Result<LocalReport, LocalError> {
    let h = f.hessian()?;
    analyze_point_with_hessian(f, &h, p)
}

/// As [`analyze_point`], reusing a precomputed Hessian.
pub fn analyze_point_with_hessian(f: &HomogPoly, h: &HomogPoly, p: &Point) -> Result<LocalReport, LocalError> {
    let field = f.field();
    let (chart, germ) = germ_at(f, p)?;
    let mult = multiplicity(&germ)?;
    let (mu, tau) = if mult == 1 { (0, 0) } else { (milnor_number(&germ)?, tjurina_local(&germ)?) };
    let kappa = if mult == 1 { 0 } else { kappa(f, p)? };
    let distinct_tangents = distinct_tangent_count(&germ)?;
    let mut notes = Vec::new();

    let hessian_contact = if h.is_zero() {
        notes.push(LocalError::HessianVanishes.to_string());
        None
    } else {
        match hessian_contact_with(f, h, p) {
            Ok(c) => Some(c),
            Err(LocalError::CommonComponent) => {
                notes.push("curve and Hessian share a component through the point".into());
                None
            }
            Err(e) => return Err(e),
        }
    };

    let tangent_cone = match tangent_cone(&germ) {
        Ok(factors) => {
            let mut out = Vec::new();
            for t in factors {
                let contact = match line_contact(&germ, &t.line) {
                    Ok(c) => c,
                    Err(LocalError::LineComponent) => {
                        notes.push("a tangent line is a component of the curve".into());
                        out.clear();
                        break;
                    }
                    Err(e) => return Err(e),
                };
                let line = chart.line_from_local(field, &t.line.alpha, &t.line.beta);
                out.push(TangentReport {
                    line: line.to_text(),
                    exponent: t.exponent,
                    contact,
                    m_l: contact - mult + t.exponent,
                });
            }
            (!out.is_empty()).then_some(out)
        }
        Err(LocalError::IncompleteSplit(rest)) => {
            notes.push(format!("tangent cone does not split; remaining factor {rest}"));
            None
        }
        Err(e) => return Err(e),
    };

    let sum_ml = tangent_cone.as_ref().map(|c| c.iter().map(|t| t.m_l as i64).sum::<i64>());
    let (m, mu_i, kappa_i) = (mult as i64, mu as i64, kappa as i64);
    let cone_degree = tangent_cone
        .as_ref()
        .map(|c| c.iter().map(|t| t.exponent).sum::<u32>() == mult);
    let hessian_formula = match (hessian_contact, sum_ml) {
        (Some(hc), Some(s)) => Some(hc as i64 == 3 * mu_i + m - 3 + s),
        _ => None,
    };
    let hessian_kappa_split = match (hessian_contact, sum_ml) {
        (Some(hc), Some(s)) => Some(hc as i64 == 3 * kappa_i + s - 2 * m),
        _ => None,
    };
    let ordinary = tangent_cone
        .as_ref()
        .map(|c| c.len() as u32 == mult && c.iter().all(|t| t.exponent == 1 && t.m_l == 2));
    let hessian_bound = match (hessian_contact, ordinary) {
        (Some(hc), Some(ord)) if mult >= 2 => {
            let b = 3 * m * (m - 1);
            let hc = hc as i64;
            Some(hc >= b && ((hc == b) == ord))
        }
        _ => None,
    };

    Ok(LocalReport {
        point: point_text(field, p),
        mult,
        mu,
        tau,
        quasi_homogeneous: mu == tau,
        kappa,
        distinct_tangents,
        hessian_contact,
        tangent_cone,
        notes,
        checks: LocalChecks {
            kappa_formula: kappa_i == mu_i + m - 1 || mult == 1,
            tau_le_mu: tau <= mu,
            cone_degree,
            hessian_formula,
            hessian_bound,
            hessian_kappa_split,
        },
    })
}

/// Tjurina number of `C` at `p`.
pub fn tjurina_at(f: &HomogPoly, p: &Point) -> Result<usize, LocalError> {
    let (_, germ) = germ_at(f, p)?;
    if multiplicity(&germ)? == 1 {
        return Ok(0);
    }
    tjurina_local(&germ)
}

/// Milnor number of `C` at `p`.
pub fn milnor_at(f: &HomogPoly, p: &Point) -> Result<usize, LocalError> {
    let (_, germ) = germ_at(f, p)?;
    if multiplicity(&germ)? == 1 {
        return Ok(0);
    }
    milnor_number(&germ)
}

/// Germ of `F` at `p` together with its chart.
pub fn germ(f: &HomogPoly, p: &Point) -> Result<(Chart, AffineLocalPoly), LocalError> {
    germ_at(f, p)
}

/// Histogram of multiplicities, for flex bounds.
pub fn multiplicity_histogram(reports: &[LocalReport]) -> BTreeMap<u32, u32> {
    let mut h = BTreeMap::new();
    for r in reports.iter().filter(|r| r.mult >= 2) {
        *h.entry(r.mult).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldConfig;
    use crate::parse::{parse_homog, parse_point, parse_poly};

    fn q() -> Field {
        Field::rationals()
    }

    fn germ_q(s: &str) -> AffineLocalPoly {
        parse_poly(s, &q(), &UV).unwrap()
    }

    fn report(f: &str, p: &str, field: &Field) -> LocalReport {
        let f = parse_homog(f, field).unwrap();
        analyze_point(&f, &parse_point(p, field).unwrap()).unwrap()
    }

    #[test]
    fn simple_points() {
        let fld = q();
        assert!(report("y^2*z-x^3", "(0:0:1)", &fld).is_simple());
        assert!(report("x^3*z-y^4", "(0:0:1)", &fld).is_simple());
        assert!(!report("x^3*z^3-y^6", "(0:0:1)", &fld).is_simple());
        assert!(report("x*y*(x-y)*z-x^4-y^4", "(0:0:1)", &fld).is_simple());
        assert!(!report("x*y*(x-y)*(x+y)*z-x^5-y^5", "(0:0:1)", &fld).is_simple());
    }

    #[test]
    fn line_components_through_the_origin() {
        assert_eq!(line_component_form(&germ_q("u*v+u^3+v^3")).unwrap().degree(), 0);
        assert_eq!(line_component_form(&germ_q("u*(v+u^2)")).unwrap().degree(), 1);
        assert_eq!(line_component_form(&germ_q("u*v*(u-v)")).unwrap().degree(), 3);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&germ_q("u*v+u^3+v^3")).unwrap(), 2);
        assert_eq!(multiplicity(&germ_q("u^2+v^3")).unwrap(), 2);
        assert_eq!(multiplicity(&germ_q("v+u^2")).unwrap(), 1);
        assert_eq!(multiplicity(&germ_q("1+v")), Err(LocalError::NotOnCurve));
    }

    #[test]
    fn tangent_cones() {
        let t = tangent_cone(&germ_q("u*v+u^3+v^3")).unwrap();
        assert_eq!(t.len(), 2);
        let t = tangent_cone(&germ_q("u^2+v^3")).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].exponent, 2);
        assert!(q().is_one(&t[0].line.alpha) && q().is_zero(&t[0].line.beta));
        assert!(matches!(tangent_cone(&germ_q("u^2+v^2+u^3")), Err(LocalError::IncompleteSplit(s)) if s == "u^2+v^2"));
        let g = FieldConfig::gaussian().build().unwrap();
        let f = parse_poly("u^2+v^2+u^3", &g, &UV).unwrap();
        assert_eq!(tangent_cone(&f).unwrap().len(), 2);
    }

    #[test]
    fn intersection_numbers() {
        assert_eq!(intersection_multiplicity(&germ_q("v"), &germ_q("u^2+v^3")).unwrap(), 2);
        let f = germ_q("u^3+u*v^2+v^5");
        let g = germ_q("u^2-v^2+u^4");
        assert_eq!(
            intersection_multiplicity(&f, &g).unwrap(),
            intersection_multiplicity(&g, &f).unwrap()
        );
        assert_eq!(
            intersection_multiplicity(&germ_q("u*v"), &germ_q("u*(u+v)")),
            Err(LocalError::CommonComponent)
        );
    }

    #[test]
    fn milnor_and_tjurina() {
        let cusp = germ_q("u^2+v^3");
        assert_eq!(milnor_number(&cusp).unwrap(), 2);
        assert_eq!(tjurina_local(&cusp).unwrap(), 2);
        assert!(is_quasi_homogeneous(&cusp).unwrap());
        // u^4+v^5+u^2v^3 has μ = 12, τ = 11
        let f = germ_q("u^4+v^5+u^2*v^3");
        assert_eq!(milnor_number(&f).unwrap(), 12);
        assert_eq!(tjurina_local(&f).unwrap(), 11);
        assert!(!is_quasi_homogeneous(&f).unwrap());
    }

    #[test]
    fn weighted_formula() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(weighted_mu(&r(1, 2), &r(1, 2)), r(1, 1));
        assert_eq!(weighted_mu(&r(1, 3), &r(1, 2)), r(2, 1));
        for (k, d) in [(1i64, 2i64), (2, 3), (3, 5)] {
            let w1 = r(1, k + 1);
            let w2 = r(k, d * (k + 1));
            assert_eq!(weighted_mu(&w1, &w2), r((d - 1) * k + d, 1));
        }
    }

    #[test]
    fn tangential_multiplicities() {
        let node = germ_q("u*v+u^3+v^3");
        for t in tangent_cone(&node).unwrap() {
            assert_eq!(tangential_multiplicity(&node, &t.line).unwrap(), 2);
        }
        let cusp = germ_q("u^2+v^3");
        let l = LocalLine::new(&q(), &q().one(), &q().zero()).unwrap();
        assert_eq!(tangential_multiplicity(&cusp, &l).unwrap(), 3);
        let other = LocalLine::new(&q(), &q().zero(), &q().one()).unwrap();
        assert_eq!(tangential_multiplicity(&cusp, &other), Err(LocalError::NotTangent));
    }

    #[test]
    fn hessian_contacts_of_cubics() {
        let origin = "(0:0:1)";
        let cusp = report("x^2*z+y^3", origin, &q());
        assert_eq!(cusp.hessian_contact, Some(8));
        assert!(cusp.checks.all_hold());
        let node = report("x*y*z+x^3+y^3", origin, &q());
        assert_eq!(node.hessian_contact, Some(6));
        assert_eq!(node.is_ordinary_simple(), Some(true));
        assert!(node.checks.all_hold());
        let d4 = report("(x^3+y^3)*z+x^4+y^4", origin, &q());
        assert_eq!(d4.hessian_contact, Some(18));
        assert_eq!((d4.mu, d4.tau, d4.mult), (4, 4, 3));
    }

    #[test]
    fn milnor_union_identity() {
        assert!(check_milnor_union(&germ_q("u"), &germ_q("v")).unwrap());
        assert!(check_milnor_union(&germ_q("v-u^2"), &germ_q("v+u^2")).unwrap());
        assert!(check_milnor_union(&germ_q("u"), &germ_q("u^2+v^3")).unwrap());
        assert_eq!(milnor_number(&germ_q("v^2-u^4")).unwrap(), 3);
    }
}
