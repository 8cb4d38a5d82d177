//! Curve families built from parameters, the line-adding combinators and
//! the expected-invariant catalog.

mod catalog;
mod repro;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyze::line_basis;
use crate::classify::Verdict;
use crate::coeff::{CoeffError, Field, FieldConfig, Scalar};
use crate::local::{self, LocalError};
use crate::parse::{parse_homog, parse_scalar, point_text, ParseError};
use crate::poly::{binary_roots, roots, BinaryForm, HomogPoly, Point, Poly, PolyError, UniPoly};

pub use catalog::{load_catalog, CatalogEntry, CatalogError, Expected, NonModularClaim, PointClaim, CATALOG_SCHEMA};
pub use repro::{reduce_mod_p, verify_entry, Check, EntryOutcome, ReproOptions, Status, DEFAULT_PRIMES};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConstructError {
    #[error("degree mismatch: the exponents sum to {sum}, expected {d}")]
    DegreeMismatch { sum: u32, d: u32 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("unknown entry '{0}'")]
    UnknownEntry(String),
    #[error("the polynomial is not reduced")]
    NotReduced,
    #[error("tangency parameters do not split over the field: {0}")]
    NotSplit(String),
    #[error("repeated tangent from the point")]
    TangencyDegenerate,
    #[error("the point lies on the conic")]
    PointOnConic,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Local(#[from] LocalError),
}

/// Which member of a construction to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    /// The seed curve.
    Base,
    /// Seed plus the first batch of lines.
    Prime,
    /// The second construction.
    DoublePrime,
    /// Seed plus the three coordinate lines.
    Triangle,
    /// The coordinate triangle with the `3d` flex tangents.
    TangentsAndTriangle,
    /// The `3d` inflectional tangent lines of the Fermat curve.
    FlexTangents,
    /// The monomial arrangement `(x^d−y^d)(y^d−z^d)(x^d−z^d)`.
    Monomial,
}

/// Symbolic constructor plus parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Recipe {
    /// `F = Π ℓ_j(x,y)^{k_j} − z^d`; prime adds `Π ℓ_j`, double-prime adds
    /// `z Π ℓ_j`.
    ThomSebastiani { lines: Vec<String>, k: Vec<u32>, d: u32, part: Part },
    /// Fermat curve with the lines `x^d + y^d`; double-prime adds `z`.
    FermatExtended { d: u32, part: Part },
    /// Fermat curve with line arrangements built from its flex tangents.
    FermatArrangement { d: u32, part: Part },
    /// `xyz(x^d+y^d)(y^d+z^d)` plus the first `k` lines of `x^d + z^d`.
    TangentChain { d: u32, k: u32 },
    /// `G = x^m y^m + y^m z^m + x^m z^m` and the curves built on it.
    Cross { m: u32, part: Part },
    /// `x^4+y^4+z^4 + λ(y^2z^2+z^2x^2+x^2y^2)`.
    Ciani { lambda: String },
    /// Named small curves and their line extensions.
    Named { name: String },
    /// Hyperosculating conics `x^{2m}+(xz+y^2)^m`, the common tangent `x`
    /// for `j ≥ 1`, and `j − 1` further tangents through `(0:1:0)`.
    Conicline { m: u32, j: u32 },
    /// Bitangent conics `xy + s^2 z^2` (`s = 1..m`), the lines `x, y, z`,
    /// and `k` tangents through `(1:1:0)`; `k = 2m+1` adds `x − y` last.
    Bitangent { m: u32, k: u32 },
    Explicit { polynomial: String },
}

/// A recipe together with the field it is instantiated over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub recipe: Recipe,
    pub field: FieldConfig,
}

impl CurveSpec {
    pub fn new(recipe: Recipe) -> Result<Self, ConstructError> {
        let field = recipe.required_field()?;
        Ok(CurveSpec { recipe, field })
    }

    /// Builds the polynomial and checks that it is reduced.
    pub fn instantiate(&self) -> Result<HomogPoly, ConstructError> {
        let field = self.field.build()?;
        let f = self.recipe.build(&field)?;
        if !f.is_squarefree()? {
            return Err(ConstructError::NotReduced);
        }
        Ok(f)
    }
}

/// `Q[t]/(Φ_{2n}(t))`, which contains every root of `t^n + 1`.
fn roots_of_minus_one_field(n: u32) -> Result<FieldConfig, ConstructError> {
    let cyclo = match n {
        1 => return Ok(FieldConfig::Rationals),
        2 => return Ok(FieldConfig::gaussian()),
        3 => "t^2-t+1",
        4 => "t^4+1",
        5 => "t^4-t^3+t^2-t+1",
        6 => "t^4-t^2+1",
        _ => return Err(ConstructError::BadParams(format!("roots of t^{n}+1 are only wired up for n <= 6"))),
    };
    Ok(FieldConfig::extension(FieldConfig::Rationals, cyclo, "t"))
}

impl Recipe {
    pub fn family(&self) -> &'static str {
        match self {
            Recipe::ThomSebastiani { .. } => "thom-sebastiani",
            Recipe::FermatExtended { .. } => "fermat-extended",
            Recipe::FermatArrangement {
                part: Part::FlexTangents | Part::Monomial,
                ..
            } => "fermat-lines",
            Recipe::FermatArrangement { .. } => "fermat-arrangement",
            Recipe::TangentChain { .. } => "tangent-chain",
            Recipe::Cross { .. } => "cross",
            Recipe::Ciani { .. } => "ciani",
            Recipe::Named { .. } => "named",
            Recipe::Conicline { .. } => "conicline",
            Recipe::Bitangent { .. } => "bitangent",
            Recipe::Explicit { .. } => "explicit",
        }
    }

    /// Smallest field the recipe can be instantiated over.
    pub fn required_field(&self) -> Result<FieldConfig, ConstructError> {
        Ok(match self {
            Recipe::Named { name } if name == "three-node-quartic-tangents" => FieldConfig::gaussian(),
            Recipe::TangentChain { d, k } if *k > 0 => {
                if *d % 2 == 1 && *k == 1 {
                    FieldConfig::Rationals
                } else {
                    roots_of_minus_one_field(*d)?
                }
            }
            Recipe::Conicline { m, j } if *j >= 2 => {
                if *m % 2 == 1 && *j == 2 {
                    FieldConfig::Rationals
                } else {
                    roots_of_minus_one_field(*m)?
                }
            }
            _ => FieldConfig::Rationals,
        })
    }

    pub fn build(&self, field: &Field) -> Result<HomogPoly, ConstructError> {
        match self {
            Recipe::ThomSebastiani { lines, k, d, part } => {
                let lines = lines
                    .iter()
                    .map(|l| parse_homog(l, field))
                    .collect::<Result<Vec<_>, _>>()?;
                let [c, c1, c2] = build_thom_sebastiani(&lines, k, *d)?;
                match part {
                    Part::Base => Ok(c),
                    Part::Prime => Ok(c1),
                    Part::DoublePrime => Ok(c2),
                    _ => Err(bad_part(self)),
                }
            }
            Recipe::FermatExtended { d, part } => build_fermat_extended(field, *d, *part),
            Recipe::FermatArrangement { d, part } => build_fermat_arrangement(field, *d, *part),
            Recipe::TangentChain { d, k } => build_tangent_chain(field, *d, *k),
            Recipe::Cross { m, part } => build_cross_family(field, *m, *part),
            Recipe::Ciani { lambda } => build_ciani(field, &parse_scalar(lambda, field)?),
            Recipe::Named { name } => build_named(field, name),
            Recipe::Conicline { m, j } => build_conicline(field, *m, *j),
            Recipe::Bitangent { m, k } => build_bitangent(field, *m, *k),
            Recipe::Explicit { polynomial } => Ok(parse_homog(polynomial, field)?),
        }
    }
}

impl Recipe {
    /// Invariants predicted in closed form for families with a general
    /// statement; `None` when there is none.
    pub fn predicted(&self, degree: u32) -> Option<Expected> {
        use Part::*;
        let free = |a: u32, b: u32| {
            let (a, b) = (a.min(b), a.max(b));
            (a + b + 1 == degree).then(|| Expected {
                degree,
                mdr: Some(a),
                tau: Some(((degree - 1) * (degree - 1) - a * b) as u64),
                verdict: Some(Verdict::Free { exponents: (a, b) }),
                ..Default::default()
            })
        };
        match *self {
            Recipe::ThomSebastiani { ref lines, d, part, .. } => {
                let m = lines.len() as u32;
                match part {
                    Prime => free(m - 1, d),
                    DoublePrime => free(m - 1, d + 1),
                    _ => None,
                }
            }
            Recipe::FermatExtended { d, part: Prime } => free(d - 1, d),
            Recipe::FermatExtended { d, part: DoublePrime } => free(d - 1, d + 1),
            Recipe::FermatArrangement { d, part: Prime } => free(2 * d + 1, 2 * d + 1),
            Recipe::FermatArrangement { d, part: DoublePrime } => free(d + 1, 2 * d),
            Recipe::FermatArrangement { d, part: TangentsAndTriangle } => Some(Expected {
                degree,
                mdr: Some(2 * d + 1),
                ..Default::default()
            }),
            Recipe::TangentChain { d, k } => Some(Expected {
                degree,
                mdr: Some(d + 1 + k),
                ..Default::default()
            }),
            Recipe::Cross { m, part: Prime } => free(2 * m - 1, 2 * m),
            Recipe::Cross { m, part: DoublePrime } => free(m + 1, 2 * m),
            Recipe::Cross { m, part: Triangle } => free(m + 1, m + 1),
            Recipe::Conicline { m, j: 0 } => free(1, 2 * m - 2),
            Recipe::Conicline { m, j } => free(j, 2 * m - 1),
            _ => None,
        }
    }
}

fn bad_part(r: &Recipe) -> ConstructError {
    ConstructError::BadParams(format!("part not available for {r:?}"))
}

fn poly(text: &str, field: &Field) -> Result<HomogPoly, ConstructError> {
    Ok(parse_homog(text, field)?)
}

fn product(field: &Field, fs: &[HomogPoly]) -> HomogPoly {
    fs.iter()
        .fold(HomogPoly::new(Poly::one(field)).expect("constant"), |acc, f| acc.mul(f))
}

/// `C: Π ℓ_j^{k_j} − z^d`, `C′: C·Π ℓ_j` and `C″: z·C′`.
pub fn build_thom_sebastiani(lines: &[HomogPoly], k: &[u32], d: u32) -> Result<[HomogPoly; 3], ConstructError> {
    let sum: u32 = k.iter().sum();
    if sum != d {
        return Err(ConstructError::DegreeMismatch { sum, d });
    }
    if lines.len() != k.len() || lines.len() < 2 {
        return Err(ConstructError::BadParams("need at least two lines, one exponent per line".into()));
    }
    if k.contains(&0) {
        return Err(ConstructError::BadParams("exponents must be positive".into()));
    }
    let field = lines[0].field().clone();
    for (i, l) in lines.iter().enumerate() {
        if l.degree() != 1 || !l.poly().terms().keys().all(|e| e[2] == 0) {
            return Err(ConstructError::BadParams(format!("{} is not a linear form in x, y", l.to_text())));
        }
        for m in &lines[..i] {
            let (a, b) = (l.poly(), m.poly());
            let det = field.sub(
                &field.mul(&a.coeff(&[1, 0, 0]), &b.coeff(&[0, 1, 0])),
                &field.mul(&a.coeff(&[0, 1, 0]), &b.coeff(&[1, 0, 0])),
            );
            if field.is_zero(&det) {
                return Err(ConstructError::BadParams("proportional lines".into()));
            }
        }
    }
    let powers: Vec<HomogPoly> = lines.iter().zip(k).map(|(l, &e)| l.pow(e)).collect();
    let z = HomogPoly::var(&field, 2);
    let c = product(&field, &powers).sub(&z.pow(d))?;
    let c1 = c.mul(&product(&field, lines));
    let c2 = c1.mul(&z);
    Ok([c, c1, c2])
}

pub fn build_fermat_extended(field: &Field, d: u32, part: Part) -> Result<HomogPoly, ConstructError> {
    if d < 2 {
        return Err(ConstructError::BadParams("d >= 2".into()));
    }
    let c = poly(&format!("x^{d}+y^{d}+z^{d}"), field)?;
    let lines = poly(&format!("x^{d}+y^{d}"), field)?;
    match part {
        Part::Base => Ok(c),
        Part::Prime => Ok(c.mul(&lines)),
        Part::DoublePrime => Ok(c.mul(&lines).mul(&HomogPoly::var(field, 2))),
        _ => Err(ConstructError::BadParams(format!("{part:?} is not a fermat-extended part"))),
    }
}

pub fn build_fermat_arrangement(field: &Field, d: u32, part: Part) -> Result<HomogPoly, ConstructError> {
    if d < 2 {
        return Err(ConstructError::BadParams("d >= 2".into()));
    }
    let text = match part {
        Part::Base => format!("x^{d}+y^{d}+z^{d}"),
        Part::Prime => format!("x*y*z*(x^{d}+y^{d})*(y^{d}+z^{d})*(x^{d}+z^{d})*(x^{d}+y^{d}+z^{d})"),
        Part::DoublePrime => format!("x*y*(y^{d}+z^{d})*(x^{d}+z^{d})*(x^{d}+y^{d}+z^{d})"),
        Part::TangentsAndTriangle => format!("x*y*z*(x^{d}+y^{d})*(y^{d}+z^{d})*(x^{d}+z^{d})"),
        Part::FlexTangents => format!("(x^{d}+y^{d})*(y^{d}+z^{d})*(x^{d}+z^{d})"),
        Part::Monomial => format!("(x^{d}-y^{d})*(y^{d}-z^{d})*(x^{d}-z^{d})"),
        Part::Triangle => return Err(ConstructError::BadParams("triangle is not a fermat-arrangement part".into())),
    };
    poly(&text, field)
}

/// Roots of `t^n + 1` in the field, in canonical order.
fn roots_of_minus_one(field: &Field, n: u32) -> Result<Vec<Scalar>, ConstructError> {
    let mut c = vec![field.zero(); n as usize + 1];
    c[0] = field.one();
    c[n as usize] = field.one();
    Ok(roots(&UniPoly::new(field, c))?.into_iter().map(|(r, _)| r).collect())
}

fn need_roots(field: &Field, n: u32, count: usize) -> Result<Vec<Scalar>, ConstructError> {
    let rs = roots_of_minus_one(field, n)?;
    if rs.len() < count {
        return Err(ConstructError::NotSplit(format!(
            "t^{n}+1 has {} roots in {}, {count} needed",
            rs.len(),
            field.describe()
        )));
    }
    Ok(rs)
}

pub fn build_tangent_chain(field: &Field, d: u32, k: u32) -> Result<HomogPoly, ConstructError> {
    if d < 2 || k > d {
        return Err(ConstructError::BadParams("need d >= 2 and k <= d".into()));
    }
    let mut f = poly(&format!("x*y*z*(x^{d}+y^{d})*(y^{d}+z^{d})"), field)?;
    if k == 0 {
        return Ok(f);
    }
    for zeta in need_roots(field, d, k as usize)?.iter().take(k as usize) {
        // x^d + z^d = Π (x − ζ z)
        let l = HomogPoly::linear(field, &[field.one(), field.zero(), field.neg(zeta)]);
        f = add_line(&f, &l)?;
    }
    Ok(f)
}

pub fn build_cross_family(field: &Field, m: u32, part: Part) -> Result<HomogPoly, ConstructError> {
    if m < 2 {
        return Err(ConstructError::BadParams("m >= 2".into()));
    }
    let g = format!("(x^{m}*y^{m}+y^{m}*z^{m}+x^{m}*z^{m})");
    let text = match part {
        Part::Base => g,
        Part::Prime => format!("{g}*(x^{m}+y^{m})*(y^{m}+z^{m})"),
        Part::DoublePrime => format!("y*z*{g}*(y^{m}+z^{m})"),
        Part::Triangle => format!("x*y*z*{g}"),
        _ => return Err(ConstructError::BadParams(format!("{part:?} is not a cross part"))),
    };
    poly(&text, field)
}

pub fn build_ciani(field: &Field, lambda: &Scalar) -> Result<HomogPoly, ConstructError> {
    let quartic = poly("x^4+y^4+z^4", field)?;
    let pencil = poly("y^2*z^2+z^2*x^2+x^2*y^2", field)?;
    Ok(quartic.add(&pencil.scale(lambda))?)
}

/// Names accepted by [`Recipe::Named`].
pub const NAMED_CURVES: &[&str] = &[
    "cuspidal-cubic",
    "nodal-cubic",
    "nodal-cubic-lines",
    "d4-quartic",
    "d4-quartic-lines",
    "three-node-quartic",
    "three-node-quartic-tangents",
    "tricuspidal-quartic",
    "tricuspidal-1",
    "tricuspidal-2",
    "tricuspidal-3",
    "sextic",
    "sextic-1",
    "sextic-2",
    "sextic-3",
];

pub fn build_named(field: &Field, name: &str) -> Result<HomogPoly, ConstructError> {
    const TRICUSPIDAL: &str = "(x^2*y^2+y^2*z^2+x^2*z^2-2*x*y*z*(x+y+z))";
    const SEXTIC: &str = "((x^2+y^2+z^2)^3-27*x^2*y^2*z^2)";
    let text = match name {
        "cuspidal-cubic" => "y^2*z-x^3".to_string(),
        "nodal-cubic" => "x*y*z+x^3+y^3".into(),
        "nodal-cubic-lines" => "x*y*(x*y*z+x^3+y^3)".into(),
        "d4-quartic" => "(x^3+y^3)*z+x^4+y^4".into(),
        "d4-quartic-lines" => "(x^3+y^3)*((x^3+y^3)*z+x^4+y^4)".into(),
        "three-node-quartic" => "x^2*y^2+y^2*z^2+x^2*z^2".into(),
        "three-node-quartic-tangents" => {
            let i = roots_of_minus_one(field, 2)?
                .pop()
                .ok_or_else(|| ConstructError::NotSplit("needs a square root of -1".into()))?;
            let f = poly("x^2*y^2+y^2*z^2+x^2*z^2", field)?;
            // x + i y, y + i z, z + i x
            let l = |a: usize, b: usize| {
                let mut c: Point = std::array::from_fn(|_| field.zero());
                c[a] = field.one();
                c[b] = i.clone();
                HomogPoly::linear(field, &c)
            };
            return Ok(product(field, &[f, l(0, 1), l(1, 2), l(2, 0)]));
        }
        "tricuspidal-quartic" => TRICUSPIDAL.into(),
        "tricuspidal-1" => format!("(x-y)*{TRICUSPIDAL}"),
        "tricuspidal-2" => format!("(x-y)*(y-z)*{TRICUSPIDAL}"),
        "tricuspidal-3" => format!("(x-y)*(y-z)*(z-x)*{TRICUSPIDAL}"),
        "sextic" => SEXTIC.into(),
        "sextic-1" => format!("x*{SEXTIC}"),
        "sextic-2" => format!("x*y*{SEXTIC}"),
        "sextic-3" => format!("x*y*z*{SEXTIC}"),
        _ => return Err(ConstructError::UnknownEntry(name.to_string())),
    };
    poly(&text, field)
}

fn unit(field: &Field, i: usize) -> Point {
    std::array::from_fn(|j| if i == j { field.one() } else { field.zero() })
}

/// Conic-line arrangement `C_j` with `q = (0:1:0)` and base point
/// `(0:0:1)`. The conics are `xz + y^2 − ζ x^2` with `ζ^m = −1`, taken in
/// canonical root order; `L_k` is the tangent from `q` to the `k`-th conic
/// other than `x = 0`.
pub fn build_conicline(field: &Field, m: u32, j: u32) -> Result<HomogPoly, ConstructError> {
    if m < 2 || j > m + 1 {
        return Err(ConstructError::BadParams("need m >= 2 and j <= m+1".into()));
    }
    let c0 = poly(&format!("x^{}+(x*z+y^2)^{m}", 2 * m), field)?;
    if j == 0 {
        return Ok(c0);
    }
    let x = HomogPoly::var(field, 0);
    let mut f = c0.mul(&x);
    if j == 1 {
        return Ok(f);
    }
    let q = unit(field, 1);
    let zetas = need_roots(field, m, (j - 1) as usize)?;
    for zeta in zetas.iter().take((j - 1) as usize) {
        let conic = poly("x*z+y^2", field)?.sub(&poly("x^2", field)?.scale(zeta))?;
        let tangents = conic_tangents_from_point(&conic, &q)?;
        let l = tangents
            .into_iter()
            .find(|t| t != &x)
            .ok_or(ConstructError::TangencyDegenerate)?;
        f = add_line(&f, &l)?;
    }
    Ok(f)
}

/// Bitangent pencil arrangement `D_k` over the rationals.
pub fn build_bitangent(field: &Field, m: u32, k: u32) -> Result<HomogPoly, ConstructError> {
    if m < 1 || k > 2 * m + 1 {
        return Err(ConstructError::BadParams("need m >= 1 and k <= 2m+1".into()));
    }
    let mut f = poly("x*y*z", field)?;
    for s in 1..=m {
        f = f.mul(&poly(&format!("x*y+{}*z^2", s * s), field)?);
    }
    let q = [field.one(), field.one(), field.zero()];
    let mut added = 0;
    'conics: for s in 1..=m {
        let conic = poly(&format!("x*y+{}*z^2", s * s), field)?;
        for t in conic_tangents_from_point(&conic, &q)? {
            if added == k.min(2 * m) {
                break 'conics;
            }
            f = add_line(&f, &t)?;
            added += 1;
        }
    }
    if k == 2 * m + 1 {
        f = add_line(&f, &poly("x-y", field)?)?;
    }
    Ok(f)
}

/// Tangent lines from `q` to a smooth conic, normalized so the first
/// nonzero coefficient is 1 and sorted.
pub fn conic_tangents_from_point(conic: &HomogPoly, q: &Point) -> Result<Vec<HomogPoly>, ConstructError> {
    let field = conic.field();
    if conic.degree() != 2 {
        return Err(ConstructError::BadParams("not a conic".into()));
    }
    if conic.hessian()?.is_zero() {
        return Err(ConstructError::BadParams("the conic is singular".into()));
    }
    if field.is_zero(&conic.eval(q)) {
        return Err(ConstructError::PointOnConic);
    }
    // lines through q and w = s a + t b for a basis {q, a, b}
    let k = (0..3).find(|&i| !field.is_zero(&q[i])).ok_or(ConstructError::BadParams("zero point".into()))?;
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let (a, b) = (unit(field, others[0]), unit(field, others[1]));
    // substitute x_i = u q_i + s a_i + t b_i, variables (u, s, t)
    let images: [Poly<3>; 3] = std::array::from_fn(|i| {
        Poly::from_terms(
            field,
            [
                ([1, 0, 0], q[i].clone()),
                ([0, 1, 0], a[i].clone()),
                ([0, 0, 1], b[i].clone()),
            ],
        )
    });
    let g = conic.poly().compose(&images);
    let part = |e0: u32| -> Poly<2> {
        Poly::from_terms(
            field,
            g.terms().iter().filter(|(e, _)| e[0] == e0).map(|(e, c)| ([e[1], e[2]], c.clone())),
        )
    };
    let (pa, pb, pc) = (part(2), part(1), part(0));
    let disc = pb.mul(&pb).sub(&pa.mul(&pc).scale(&field.from_i64(4)));
    let coeffs = (0..=2).map(|j| disc.coeff(&[j, 2 - j])).collect();
    let form = BinaryForm::new(field, 2, coeffs);
    if form.is_zero() {
        return Err(ConstructError::BadParams("degenerate tangency condition".into()));
    }
    let rs = binary_roots(&form)?;
    if rs.iter().any(|(_, mult)| *mult > 1) {
        return Err(ConstructError::TangencyDegenerate);
    }
    if rs.len() < 2 {
        return Err(ConstructError::NotSplit(form.to_text(["s", "t"])));
    }
    let mut lines: Vec<HomogPoly> = rs
        .into_iter()
        .map(|((s, t), _)| {
            let w: Point = std::array::from_fn(|i| field.add(&field.mul(&s, &a[i]), &field.mul(&t, &b[i])));
            normalized_line(field, &crate::analyze::cross(field, q, &w))
        })
        .collect();
    lines.sort_by_key(|l| l.to_text());
    Ok(lines)
}

fn normalized_line(field: &Field, c: &Point) -> HomogPoly {
    let lead = c.iter().find(|x| !field.is_zero(x)).expect("nonzero line");
    let inv = field.inv(lead).expect("nonzero");
    HomogPoly::linear(field, &c.clone().map(|x| field.mul(&x, &inv)))
}

/// `ℓ·F`, refusing a line that is already a component.
pub fn add_line(f: &HomogPoly, l: &HomogPoly) -> Result<HomogPoly, ConstructError> {
    let field = f.field();
    if l.degree() != 1 {
        return Err(ConstructError::BadParams(format!("{} is not linear", l.to_text())));
    }
    let (a, b) = line_basis(field, &line_coeffs(l));
    if f.restrict_to_line(&a, &b).is_zero() {
        return Err(ConstructError::NotReduced);
    }
    Ok(f.mul(l))
}

pub fn line_coeffs(l: &HomogPoly) -> Point {
    std::array::from_fn(|i| {
        let mut e = [0u32; 3];
        e[i] = 1;
        l.poly().coeff(&e)
    })
}

/// Outcome of the line-addition predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineAddition {
    /// `|R| > (r_1 + 1) d_2`, so `mdr(F_1 F_2) = r_1 + d_2`.
    Predicted { mdr: u32, r1: u32, d2: u32, intersections: usize },
    NotApplicable { reason: String },
}

/// Predicted `mdr` after adding the line `l` to a curve with `mdr = r1`.
/// The singularities of both curves along the line must be
/// quasi-homogeneous; this is checked at every intersection point, which
/// therefore has to be defined over the field.
pub fn line_addition_predicate(f1: &HomogPoly, r1: u32, l: &HomogPoly) -> Result<LineAddition, ConstructError> {
    let field = f1.field();
    let na = |reason: String| Ok(LineAddition::NotApplicable { reason });
    if l.degree() != 1 {
        return na("only lines are supported as the added curve".into());
    }
    let (a, b) = line_basis(field, &line_coeffs(l));
    let h = f1.restrict_to_line(&a, &b);
    if h.is_zero() {
        return Err(ConstructError::NotReduced);
    }
    let sqf = h.squarefree_part()?;
    let distinct = sqf.degree();
    // a simple root of the restriction is a transverse crossing at a smooth
    // point, hence a node of the union; only repeated roots need inspection
    let repeated = h.exact_div(&sqf)?;
    let rs = if repeated.degree() == 0 {
        Vec::new()
    } else {
        let rep = repeated.squarefree_part()?;
        let rs = binary_roots(&rep)?;
        if rs.len() != rep.degree() {
            return na(format!(
                "{} of {} tangency points are defined over the field",
                rs.len(),
                rep.degree()
            ));
        }
        rs
    };
    let f = f1.mul(l);
    for ((s, t), _) in &rs {
        let p: Point = std::array::from_fn(|i| field.add(&field.mul(s, &a[i]), &field.mul(t, &b[i])));
        for (name, g) in [("the curve", f1), ("the union", &f)] {
            let (_, germ) = local::germ(g, &p)?;
            if local::multiplicity(&germ)? >= 2 && !local::is_quasi_homogeneous(&germ)? {
                return na(format!(
                    "{name} has a non quasi-homogeneous singularity at {}",
                    point_text(field, &p)
                ));
            }
        }
    }
    let d2 = 1;
    if distinct as u32 > (r1 + 1) * d2 {
        Ok(LineAddition::Predicted {
            mdr: r1 + d2,
            r1,
            d2,
            intersections: distinct,
        })
    } else {
        na(format!("|R| = {distinct} is not above (r1+1)d2 = {}", (r1 + 1) * d2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{global_tjurina, mdr};

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn closed_form_predictions_match_computation() {
        let recipes = [
            Recipe::ThomSebastiani { lines: vec!["x".into(), "y".into(), "x+y".into()], k: vec![1, 1, 1], d: 3, part: Part::Prime },
            Recipe::FermatExtended { d: 3, part: Part::DoublePrime },
            Recipe::Cross { m: 2, part: Part::Triangle },
            Recipe::Conicline { m: 2, j: 0 },
            Recipe::TangentChain { d: 2, k: 1 },
        ];
        for r in recipes {
            let spec = CurveSpec::new(r.clone()).unwrap();
            let f = spec.instantiate().unwrap();
            let e = r.predicted(f.degree()).unwrap();
            assert_eq!(e.mdr, Some(mdr(&f).unwrap()), "{r:?}");
            if let Some(t) = e.tau {
                assert_eq!(t, global_tjurina(&f).unwrap() as u64, "{r:?}");
            }
        }
        assert!(Recipe::Named { name: "sextic".into() }.predicted(6).is_none());
    }

    #[test]
    fn thom_sebastiani_small() {
        let f = q();
        let lines = vec![poly("x", &f).unwrap(), poly("y", &f).unwrap()];
        let [c, c1, c2] = build_thom_sebastiani(&lines, &[1, 1], 2).unwrap();
        assert_eq!(c.to_text(), poly("x*y-z^2", &f).unwrap().to_text());
        assert_eq!(c1.degree(), 4);
        assert_eq!(c2.degree(), 5);
        assert_eq!(global_tjurina(&c1).unwrap(), 7);
        assert_eq!(
            build_thom_sebastiani(&lines, &[1, 1], 3),
            Err(ConstructError::DegreeMismatch { sum: 2, d: 3 })
        );
        let prop = vec![poly("x", &f).unwrap(), poly("2*x", &f).unwrap()];
        assert!(build_thom_sebastiani(&prop, &[1, 1], 2).is_err());
    }

    #[test]
    fn tangents_from_external_points() {
        let f = q();
        let conic = poly("x*y-z^2", &f).unwrap();
        let t = conic_tangents_from_point(&conic, &[f.zero(), f.zero(), f.one()]).unwrap();
        let texts: Vec<String> = t.iter().map(|l| l.to_text()).collect();
        assert_eq!(texts, vec!["x", "y"]);
    }

    #[test]
    fn tangents_circle() {
        let f = q();
        let conic = poly("x^2+y^2-z^2", &f).unwrap();
        let p = [f.one(), f.one(), f.one()];
        let t = conic_tangents_from_point(&conic, &p).unwrap();
        let texts: Vec<String> = t.iter().map(|l| l.to_text()).collect();
        assert_eq!(texts, vec!["x-z", "y-z"]);
        // each tangent restricts to a square on the conic
        for l in &t {
            let (a, b) = line_basis(&f, &line_coeffs(l));
            let h = conic.restrict_to_line(&a, &b);
            assert_eq!(h.squarefree_part().unwrap().degree(), 1);
            assert!(f.is_zero(&l.eval(&p)));
        }
        // from (2:0:1) the tangency points need sqrt(3)
        let far = [f.from_i64(2), f.zero(), f.one()];
        assert!(matches!(conic_tangents_from_point(&conic, &far), Err(ConstructError::NotSplit(_))));
        let on = [f.one(), f.zero(), f.one()];
        assert_eq!(conic_tangents_from_point(&conic, &on), Err(ConstructError::PointOnConic));
        // (0:0:1) is inside the real circle: tangents need sqrt(-1)
        let inside = [f.zero(), f.zero(), f.one()];
        assert!(matches!(conic_tangents_from_point(&conic, &inside), Err(ConstructError::NotSplit(_))));
    }

    #[test]
    fn add_line_rejects_components() {
        let f = q();
        let cubic = poly("x^3+y^3+z^3", &f).unwrap();
        let l = poly("x+y", &f).unwrap();
        let g = add_line(&cubic, &l).unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(add_line(&g, &l), Err(ConstructError::NotReduced));
    }

    #[test]
    fn conicline_tower_over_gaussian() {
        let f = FieldConfig::gaussian().build().unwrap();
        let c3 = build_conicline(&f, 2, 3).unwrap();
        assert_eq!(c3.to_text(), poly("x*(x^2+z^2)*(x^4+(x*z+y^2)^2)", &f).unwrap().to_text());
        assert!(matches!(build_conicline(&q(), 2, 2), Err(ConstructError::NotSplit(_))));
        assert_eq!(build_conicline(&q(), 3, 2).unwrap().degree(), 8);
    }

    #[test]
    fn predicate_along_a_chain() {
        let f = FieldConfig::gaussian().build().unwrap();
        let b0 = build_tangent_chain(&f, 2, 0).unwrap();
        let r0 = mdr(&b0).unwrap();
        assert_eq!(r0, 3);
        let zeta = &roots_of_minus_one(&f, 2).unwrap()[0];
        let l = HomogPoly::linear(&f, &[f.one(), f.zero(), f.neg(zeta)]);
        match line_addition_predicate(&b0, r0, &l).unwrap() {
            LineAddition::Predicted { mdr: r, intersections, .. } => {
                assert_eq!(intersections, 6);
                assert_eq!(r, mdr(&add_line(&b0, &l).unwrap()).unwrap());
            }
            other => panic!("{other:?}"),
        }
        // the base point of the hyperosculating pencil is not quasi-homogeneous
        let c1 = build_conicline(&f, 2, 1).unwrap();
        let through_base = poly("y", &f).unwrap();
        assert!(matches!(line_addition_predicate(&c1, 1, &through_base).unwrap(), LineAddition::NotApplicable { .. }));
    }
}
