//! Global questions built on local data: flex counts, inflection along a
//! line, modular points and supersolvability.

mod modular;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::flex_bound;
use crate::coeff::{CoeffError, Field};
use crate::local::{self, LocalError, LocalLine, LocalReport};
use crate::parse::point_text;
use crate::poly::{HomogPoly, Point, PolyError};

pub(crate) use modular::cross;
pub use modular::{
    check_line, is_modular_point, is_supersolvable, pencil_through_point, sampled_lines_agreement, LineCheck,
    ModularityReport, Pencil, SampledAgreement, SupersolvableReport,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AnalyzeError {
    #[error("the point has no nonzero coordinate")]
    BadPoint,
    #[error("the point is singular")]
    SingularPoint,
    #[error("a line component of the curve passes through the point")]
    LineComponent,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Text of the line `a x + b y + c z`, scaled so that its first nonzero
/// coefficient is 1.
pub fn line_text(field: &Field, coeffs: &Point) -> String {
    let Some(lead) = coeffs.iter().find(|c| !field.is_zero(c)) else {
        return "0".into();
    };
    let inv = field.inv(lead).expect("nonzero");
    let scaled = coeffs.clone().map(|c| field.mul(&c, &inv));
    HomogPoly::linear(field, &scaled).to_text()
}

/// Inflection order at a smooth point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InflectionOrder {
    pub point: String,
    /// `(C, H_C)_p`.
    pub iota: usize,
    /// `(C, T_pC)_p − 2`.
    pub tangent_contact_minus_two: u32,
    pub tangent_line: String,
}

impl InflectionOrder {
    pub fn consistent(&self) -> bool {
        self.iota == self.tangent_contact_minus_two as usize
    }
}

fn tangent_at(f: &HomogPoly, p: &Point) -> Point {
    f.partials().map(|g| g.eval(p))
}

/// `ι_p = (C, H_C)_p` at a smooth point, cross-checked against the contact
/// with the tangent line.
pub fn inflection_order(f: &HomogPoly, p: &Point) -> Result<InflectionOrder, AnalyzeError> {
    let field = f.field();
    let (_, germ) = local::germ(f, p)?;
    if local::multiplicity(&germ)? != 1 {
        return Err(AnalyzeError::SingularPoint);
    }
    let lin = germ.homogeneous_part(1);
    let line = LocalLine::new(field, &lin.coeff(&[1, 0]), &lin.coeff(&[0, 1]))?;
    let contact = match local::line_contact(&germ, &line) {
        Ok(c) => c,
        Err(LocalError::LineComponent) => return Err(AnalyzeError::LineComponent),
        Err(e) => return Err(e.into()),
    };
    let iota = match local::hessian_contact(f, p) {
        Ok(c) => c,
        Err(LocalError::CommonComponent) => return Err(AnalyzeError::LineComponent),
        Err(e) => return Err(e.into()),
    };
    Ok(InflectionOrder {
        point: point_text(field, p),
        iota,
        tangent_contact_minus_two: contact - 2,
        tangent_line: line_text(field, &tangent_at(f, p)),
    })
}

/// Inflection count along one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineInflection {
    pub line: String,
    /// Sum of `ι_p` over the supplied flexes whose tangent is the line.
    pub i_line: usize,
    /// Distinct points of `L ∩ C`.
    pub points: usize,
    /// `Σ_{p ∈ L∩C} ((C,L)_p − 2) = d − 2|L ∩ C|`.
    pub signed_excess: i64,
    /// `Σ ((C,L)_p − 2)` over the points of `L ∩ C` where `L` is tangent;
    /// always an upper bound for `i_line`.
    pub tangent_excess: i64,
}

/// `i(L)`: the inflection of `C` concentrated at points where `L` is the
/// tangent line. Only the supplied points are considered.
pub fn line_inflection(f: &HomogPoly, l: &Point, flexes: &[Point]) -> Result<LineInflection, AnalyzeError> {
    let field = f.field();
    let lf = HomogPoly::linear(field, l);
    let proportional = |a: &Point, b: &Point| {
        let c = modular::cross(field, a, b);
        c.iter().all(|x| field.is_zero(x))
    };
    let mut i_line = 0;
    for p in flexes {
        if !field.is_zero(&lf.eval(p)) {
            continue;
        }
        let t = tangent_at(f, p);
        if t.iter().all(|c| field.is_zero(c)) || !proportional(&t, l) {
            continue;
        }
        i_line += inflection_order(f, p)?.iota;
    }
    // points of L ∩ C from the restriction to two points spanning L
    let (a, b) = line_basis(field, l);
    let h = f.restrict_to_line(&a, &b);
    if h.is_zero() {
        return Err(AnalyzeError::LineComponent);
    }
    let sqf = h.squarefree_part()?;
    let d = f.degree() as i64;
    let points = sqf.degree();
    // tangency points: repeated roots of the restriction
    let repeated = h.exact_div(&sqf)?;
    let tangent_excess = if repeated.degree() == 0 {
        0
    } else {
        let rep_sqf = repeated.squarefree_part()?;
        // each repeated root of multiplicity k contributes k − 2
        repeated.degree() as i64 - rep_sqf.degree() as i64
    };
    Ok(LineInflection {
        line: line_text(field, l),
        i_line,
        points,
        signed_excess: d - 2 * points as i64,
        tangent_excess,
    })
}

/// Two points spanning the line `l`.
pub(crate) fn line_basis(field: &Field, l: &Point) -> (Point, Point) {
    let units: [Point; 3] = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { field.one() } else { field.zero() }));
    let mut pts: Vec<Point> = Vec::new();
    for u in &units {
        let c = modular::cross(field, l, u);
        if c.iter().any(|x| !field.is_zero(x)) && pts.iter().all(|q| modular::cross(field, q, &c).iter().any(|x| !field.is_zero(x))) {
            pts.push(c);
        }
        if pts.len() == 2 {
            break;
        }
    }
    (pts[0].clone(), pts[1].clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlexReport {
    /// `i(C) = 3d(d−2) − Σ (C, H_C)_p` over the singular points.
    pub total_i: i64,
    pub per_point: Vec<InflectionOrder>,
    pub per_line: Vec<LineInflection>,
    /// `3d(d−2) − Σ 3k(k−1) n_k`.
    pub bound: i64,
    pub equality_case: bool,
    /// Whether every singular point is an ordinary simple multiple point;
    /// `None` when some tangent cone does not split.
    pub all_ordinary_simple: Option<bool>,
    pub singular_points: Vec<LocalReport>,
}

/// Flex census from the complete list of singular points (the caller
/// attests completeness) plus optional flexes and lines to inspect.
pub fn total_inflection(
    f: &HomogPoly,
    singular_points: &[Point],
    flexes: &[Point],
    lines: &[Point],
) -> Result<FlexReport, AnalyzeError> {
    let h = f.hessian()?;
    let reports = singular_points
        .par_iter()
        .map(|p| local::analyze_point_with_hessian(f, &h, p))
        .collect::<Result<Vec<_>, _>>()?;
    let d = f.degree() as i64;
    let mut total = 3 * d * (d - 2);
    for r in &reports {
        let hc = r.hessian_contact.ok_or_else(|| {
            AnalyzeError::Local(LocalError::CommonComponent)
        })?;
        total -= hc as i64;
    }
    let per_point = flexes
        .par_iter()
        .map(|p| inflection_order(f, p))
        .collect::<Result<Vec<_>, _>>()?;
    let per_line = lines
        .iter()
        .map(|l| line_inflection(f, l, flexes))
        .collect::<Result<Vec<_>, _>>()?;
    let bound = flex_bound(f.degree(), &local::multiplicity_histogram(&reports));
    let all_ordinary_simple = reports
        .iter()
        .filter(|r| r.mult >= 2)
        .map(|r| r.is_ordinary_simple())
        .collect::<Option<Vec<bool>>>()
        .map(|v| v.iter().all(|&b| b));
    Ok(FlexReport {
        total_i: total,
        per_point,
        per_line,
        bound,
        equality_case: total == bound,
        all_ordinary_simple,
        singular_points: reports,
    })
}

/// `(e+m)² − em − 2m − e + 1`, the total Milnor number of `m` concurrent
/// lines together with a residual curve of degree `e` whose singularities
/// are all quasi-homogeneous.
pub fn euler_mu_identity(e: i64, m: i64) -> i64 {
    (e + m) * (e + m) - e * m - 2 * m - e + 1
}
