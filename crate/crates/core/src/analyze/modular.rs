//! Modular points: every line through `p` that is not a component meets
//! the curve at `p` with multiplicity `m_p` and transversally elsewhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Field, Scalar};
use crate::parse::point_text;
use crate::poly::resultant::{interpolate, sample_points};
use crate::poly::{binary_roots, discriminant_binary, BinaryForm, HomogPoly, Point, Poly, PolyError};

use super::{line_text, AnalyzeError};

/// Restrictions of `F` to the lines through `p`.
///
/// Lines through `p` are parametrized as `p ∨ w` with `w = β e₁ − α e₂`,
/// where `e₁, e₂` are the unit vectors complementary to a nonzero
/// coordinate of `p`. On such a line `F(u w + v p) = u^{m_p} g(u, v)` and
/// `g = Σ c_j(α, β) u^j v^{n−j}` with `n = d − m_p`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub point: Point,
    pub mult: u32,
    /// `c_j` as binary forms in `(α, β)` of degree `j + m_p`.
    pub coeffs: Vec<BinaryForm>,
    e: [usize; 2],
}

impl Pencil {
    pub fn residual_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Direction `w` for the parameter `(α:β)`.
    pub fn direction(&self, field: &Field, alpha: &Scalar, beta: &Scalar) -> Point {
        let mut w: Point = std::array::from_fn(|_| field.zero());
        w[self.e[0]] = beta.clone();
        w[self.e[1]] = field.neg(alpha);
        w
    }

    /// Coefficients of the line `p ∨ w`.
    pub fn line(&self, field: &Field, alpha: &Scalar, beta: &Scalar) -> Point {
        cross(field, &self.point, &self.direction(field, alpha, beta))
    }

    /// `g` specialized at `(α:β)`, as a binary form in `(u, v)`.
    pub fn specialize(&self, field: &Field, alpha: &Scalar, beta: &Scalar) -> BinaryForm {
        let c = self.coeffs.iter().map(|b| b.eval(alpha, beta)).collect();
        BinaryForm::new(field, self.residual_degree(), c)
    }
}

pub(crate) fn cross(f: &Field, a: &Point, b: &Point) -> Point {
    let m = |i: usize, j: usize| f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i]));
    [m(1, 2), m(2, 0), m(0, 1)]
}

pub fn pencil_through_point(f: &HomogPoly, p: &Point) -> Result<Pencil, AnalyzeError> {
    let field = f.field();
    let k = (0..3).rev().find(|&i| !field.is_zero(&p[i])).ok_or(AnalyzeError::BadPoint)?;
    let e = match k {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    // variables (α, β, u, v)
    let var = |i: usize| Poly::<4>::var(field, i);
    let images: [Poly<4>; 3] = std::array::from_fn(|i| {
        let mut img = var(3).scale(&p[i]);
        if i == e[0] {
            img = img.add(&var(2).mul(&var(1)));
        } else if i == e[1] {
            img = img.sub(&var(2).mul(&var(0)));
        }
        img
    });
    let r = f.poly().compose(&images);
    let d = f.degree() as usize;
    let mult = r.terms().keys().map(|t| t[2]).min().unwrap_or(d as u32);
    let n = d - mult as usize;
    let coeffs = (0..=n)
        .map(|j| {
            let uexp = j as u32 + mult;
            let mut c = vec![field.zero(); uexp as usize + 1];
            for (t, a) in r.terms().iter().filter(|(t, _)| t[2] == uexp) {
                c[t[0] as usize] = field.add(&c[t[0] as usize], a);
            }
            BinaryForm::new(field, uexp as usize, c)
        })
        .collect();
    Ok(Pencil {
        point: p.clone(),
        mult,
        coeffs,
        e,
    })
}

/// Outcome of checking one line through `p` directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCheck {
    pub line: String,
    /// `(C, L)_p`.
    pub contact_at_p: u32,
    /// Distinct points of `L ∩ C` over the algebraic closure.
    pub points: usize,
    pub good: bool,
}

/// Restricts `F` to `p ∨ w` and checks the modularity condition on that
/// line; `None` when the line is a component.
pub fn check_line(f: &HomogPoly, p: &Point, w: &Point, mult: u32) -> Result<Option<LineCheck>, AnalyzeError> {
    let field = f.field();
    let h = f.restrict_to_line(w, p);
    if h.is_zero() {
        return Ok(None);
    }
    let contact = (0..=h.degree()).find(|&j| !field.is_zero(&h.coeffs()[j])).unwrap_or(0) as u32;
    let distinct = h.squarefree_part()?.degree();
    // the residual after removing the contact at p must be squarefree
    // and must not vanish at p again
    let residual_ok = {
        let c = h.coeffs()[contact as usize..].to_vec();
        let g = BinaryForm::new(field, h.degree() - contact as usize, c);
        g.is_squarefree()?
    };
    Ok(Some(LineCheck {
        line: line_text(field, &cross(field, p, w)),
        contact_at_p: contact,
        points: distinct,
        good: contact == mult && residual_ok,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularityReport {
    pub point: String,
    pub mult: u32,
    pub is_modular: bool,
    /// Lines through `p` contained in the curve.
    pub component_lines: Vec<String>,
    /// Squarefree part of the product of the component-line forms in `(α, β)`.
    pub component_form: String,
    /// Squarefree part of `T·D`, the parameters of lines with extra
    /// contact at `p` or a tangency elsewhere.
    pub bad_form: String,
    /// Bad lines with parameters in the field, each confirmed by direct
    /// restriction.
    pub witnesses: Vec<LineCheck>,
    /// Part of the obstruction without roots in the field.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsplit_factor: Option<String>,
    #[serde(skip)]
    pub witness_params: Vec<(Scalar, Scalar)>,
}

const AB: [&str; 2] = ["a", "b"];

/// Decides whether `p` is a modular point of `C: F = 0`.
///
/// With `T = c_0` (lines with extra contact at `p`), `D` the discriminant of
/// `g` in `(u, v)` (lines with a repeated intersection) and `P = gcd(c_j)`
/// (component lines through `p`), the point is modular iff every root of
/// `T·D` is a root of `P`.
pub fn is_modular_point(f: &HomogPoly, p: &Point) -> Result<ModularityReport, AnalyzeError> {
    let field = f.field();
    let pencil = pencil_through_point(f, p)?;
    let n = pencil.residual_degree();
    let m = pencil.mult as usize;
    if field.characteristic() != 0 && n as u64 % field.characteristic() == 0 && n > 0 {
        return Err(AnalyzeError::Poly(PolyError::Unsupported(
            "characteristic divides the residual degree".into(),
        )));
    }
    let t = pencil.coeffs[0].clone();
    let d = if n < 2 {
        BinaryForm::new(field, 0, vec![field.one()])
    } else {
        let delta = (n - 1) * (2 * m + n);
        let xs = sample_points(field, delta + 1)?;
        let ys = xs
            .par_iter()
            .map(|a| discriminant_binary(&pencil.specialize(field, a, &field.one())))
            .collect::<Result<Vec<_>, _>>()?;
        BinaryForm::from_uni(&interpolate(field, &xs, &ys)?, delta)
    };
    let mut comp = BinaryForm::new(field, 0, vec![field.zero()]);
    for c in &pencil.coeffs {
        comp = comp.gcd(c)?;
    }
    let comp_sqf = if comp.is_zero() { comp.clone() } else { comp.squarefree_part()? };
    let component_lines = if comp_sqf.is_zero() || comp_sqf.degree() == 0 {
        Vec::new()
    } else {
        binary_roots(&comp_sqf)?
            .into_iter()
            .map(|((a, b), _)| line_text(field, &pencil.line(field, &a, &b)))
            .collect()
    };

    let td = t.mul(&d);
    let mut witnesses = Vec::new();
    let mut witness_params = Vec::new();
    let mut unsplit = None;
    let (is_modular, bad_text) = if td.is_zero() {
        // every line is bad; any non-component line is a witness
        for i in 0..64i64 {
            let (a, b) = (field.from_i64(i), field.one());
            if let Some(c) = check_line(f, p, &pencil.direction(field, &a, &b), pencil.mult)? {
                witnesses.push(c);
                witness_params.push((a, b));
                break;
            }
        }
        (false, "0".to_string())
    } else {
        let bad = td.squarefree_part()?;
        let modular = comp_sqf.is_zero() || bad.divides(&comp_sqf)?;
        if !modular {
            let shared = bad.gcd(&comp_sqf)?;
            let offending = bad.exact_div(&shared)?;
            let roots = binary_roots(&offending)?;
            let found: usize = roots.iter().map(|r| r.1).sum();
            for ((a, b), _) in &roots {
                let w = pencil.direction(field, a, b);
                if let Some(c) = check_line(f, p, &w, pencil.mult)? {
                    witnesses.push(c);
                    witness_params.push((a.clone(), b.clone()));
                }
            }
            if found < offending.degree() {
                let mut rest = offending.clone();
                for ((a, b), _) in &roots {
                    rest = rest.exact_div(&BinaryForm::linear_vanishing_at(field, a, b))?;
                }
                unsplit = Some(rest.to_text(AB));
            }
        }
        (modular, bad.to_text(AB))
    };
    if !is_modular && witnesses.iter().any(|w| w.good) {
        return Err(AnalyzeError::Inconsistent(
            "a witness line passed the direct check".into(),
        ));
    }
    Ok(ModularityReport {
        point: point_text(field, p),
        mult: pencil.mult,
        is_modular,
        component_lines,
        component_form: comp_sqf.to_text(AB),
        bad_form: bad_text,
        witnesses,
        unsplit_factor: unsplit,
        witness_params,
    })
}

/// Comparison of the modularity decision with direct checks on sampled lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledAgreement {
    pub sampled: usize,
    pub components_skipped: usize,
    /// Lines whose direct check matched the prediction from `T·D` and `P`.
    pub agreeing: usize,
    /// For a modular point, lines with `|L ∩ C| = d − m_p + 1`.
    pub fibration_count_ok: Option<usize>,
}

impl SampledAgreement {
    pub fn all_agree(&self) -> bool {
        self.agreeing + self.components_skipped == self.sampled
            && self.fibration_count_ok.is_none_or(|k| k + self.components_skipped == self.sampled)
    }
}

/// Checks `count` pseudo-random lines through `p` directly against the
/// line-by-line prediction of the divisibility certificate, together with
/// the witness lines of the report.
pub fn sampled_lines_agreement(
    f: &HomogPoly,
    p: &Point,
    report: &ModularityReport,
    count: usize,
    seed: u64,
) -> Result<SampledAgreement, AnalyzeError> {
    let field = f.field();
    let pencil = pencil_through_point(f, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params: Vec<(Scalar, Scalar)> = (0..count)
        .map(|_| {
            let a = field.from_i64(rng.gen_range(-1000..=1000));
            let b = field.from_i64(rng.gen_range(1..=1000));
            (a, b)
        })
        .collect();
    let n = pencil.residual_degree();
    let t = &pencil.coeffs[0];
    let predicted_bad = |a: &Scalar, b: &Scalar| -> Result<bool, AnalyzeError> {
        if field.is_zero(&t.eval(a, b)) {
            return Ok(true);
        }
        let g = pencil.specialize(field, a, b);
        Ok(n >= 2 && field.is_zero(&discriminant_binary(&g)?))
    };
    // the witness lines are known to be bad; include them
    params.extend(report.witness_params.iter().cloned());
    let d = f.degree() as usize;
    let results = params
        .par_iter()
        .map(|(a, b)| -> Result<Option<(bool, bool, usize)>, AnalyzeError> {
            let w = pencil.direction(field, a, b);
            let Some(c) = check_line(f, p, &w, pencil.mult)? else {
                return Ok(None);
            };
            Ok(Some((c.good, !predicted_bad(a, b)?, c.points)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = SampledAgreement {
        sampled: results.len(),
        components_skipped: 0,
        agreeing: 0,
        fibration_count_ok: report.is_modular.then_some(0),
    };
    for r in results {
        match r {
            None => out.components_skipped += 1,
            Some((good, predicted, points)) => {
                if good == predicted {
                    out.agreeing += 1;
                }
                if let Some(k) = out.fibration_count_ok.as_mut() {
                    if points == d - pencil.mult as usize + 1 {
                        *k += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupersolvableReport {
    /// First modular candidate, in the given order.
    pub modular_point: Option<String>,
    pub candidates: Vec<ModularityReport>,
}

/// Tests the candidates for modularity. A negative answer only means that
/// none of these candidates is modular.
pub fn is_supersolvable(f: &HomogPoly, candidates: &[Point]) -> Result<SupersolvableReport, AnalyzeError> {
    let reports = candidates
        .par_iter()
        .map(|p| is_modular_point(f, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SupersolvableReport {
        modular_point: reports.iter().find(|r| r.is_modular).map(|r| r.point.clone()),
        candidates: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_homog, parse_point};

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn pencil_specializes_to_restriction() {
        let f = parse_homog("x^3+y^3+z^3", &q()).unwrap();
        let p = parse_point("(0:0:1)", &q()).unwrap();
        let pen = pencil_through_point(&f, &p).unwrap();
        assert_eq!(pen.mult, 0);
        assert_eq!(pen.residual_degree(), 3);
        let (a, b) = (q().from_i64(2), q().from_i64(5));
        let w = pen.direction(&q(), &a, &b);
        assert_eq!(pen.specialize(&q(), &a, &b), f.restrict_to_line(&w, &p));
    }

    #[test]
    fn nodal_cubic_with_tangents_is_modular_at_the_node() {
        let f = parse_homog("x*y*(x*y*z+x^3+y^3)", &q()).unwrap();
        let p = parse_point("(0:0:1)", &q()).unwrap();
        let r = is_modular_point(&f, &p).unwrap();
        assert!(r.is_modular, "{r:?}");
        assert_eq!(r.mult, 4);
        assert_eq!(r.component_lines.len(), 2);
        let s = sampled_lines_agreement(&f, &p, &r, 50, 7).unwrap();
        assert!(s.all_agree(), "{s:?}");
    }

    #[test]
    fn generic_point_of_a_conic_is_not_modular() {
        let f = parse_homog("x*y-z^2", &q()).unwrap();
        let p = parse_point("(1:1:1)", &q()).unwrap();
        let r = is_modular_point(&f, &p).unwrap();
        assert!(!r.is_modular);
        // the tangent line x+y-2z
        assert!(r.witnesses.iter().any(|w| w.line == "x+y-2*z"), "{r:?}");
        let s = sampled_lines_agreement(&f, &p, &r, 50, 7).unwrap();
        assert!(s.all_agree());
    }
}
