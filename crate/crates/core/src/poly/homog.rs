use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BinaryForm, Poly, PolyError};
use crate::coeff::{Field, Scalar};

pub const XYZ: [&str; 3] = ["x", "y", "z"];

/// Homogeneous polynomial in `x, y, z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    degree: u32,
    poly: Poly<3>,
}

/// Projective point with coordinates in the working field.
pub type Point = [Scalar; 3];

impl HomogPoly {
    /// Wraps a polynomial, checking that it is homogeneous.
    pub fn new(poly: Poly<3>) -> Result<Self, PolyError> {
        let mut degs = poly.terms().keys().map(|e| (e, e.iter().sum::<u32>()));
        let Some((first, d)) = degs.next() else {
            return Ok(HomogPoly { degree: 0, poly });
        };
        if let Some((other, _)) = degs.find(|(_, k)| *k != d) {
            let f = poly.field();
            let show = |e: &[u32; 3]| Poly::<3>::monomial(f, *e, poly.coeff(e)).to_text(&XYZ);
            return Err(PolyError::NotHomogeneous {
                first: show(first),
                second: show(other),
            });
        }
        Ok(HomogPoly { degree: d, poly })
    }

    pub fn zero(field: &Field) -> Self {
        HomogPoly {
            degree: 0,
            poly: Poly::zero(field),
        }
    }

    pub fn var(field: &Field, i: usize) -> Self {
        HomogPoly {
            degree: 1,
            poly: Poly::var(field, i),
        }
    }

    /// The linear form `a x + b y + c z`.
    pub fn linear(field: &Field, coeffs: &Point) -> Self {
        let mut p = Poly::zero(field);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            p.add_term(e, c);
        }
        HomogPoly { degree: 1, poly: p }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly<3> {
        &self.poly
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn to_text(&self) -> String {
        self.poly.to_text(&XYZ)
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let poly = self.poly.mul(&other.poly);
        HomogPoly {
            degree: if poly.is_zero() { 0 } else { self.degree + other.degree },
            poly,
        }
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        HomogPoly {
            degree: self.degree * k,
            poly: self.poly.pow(k),
        }
    }

    pub fn scale(&self, c: &Scalar) -> HomogPoly {
        let poly = self.poly.scale(c);
        HomogPoly {
            degree: if poly.is_zero() { 0 } else { self.degree },
            poly,
        }
    }

    /// Scalar multiple whose leading term is 1.
    pub fn monic(&self) -> HomogPoly {
        HomogPoly {
            degree: self.degree,
            poly: self.poly.monic(),
        }
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        HomogPoly::new(self.poly.add(&other.poly))
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        HomogPoly::new(self.poly.sub(&other.poly))
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            degree: self.degree,
            poly: self.poly.neg(),
        }
    }

    pub fn derivative(&self, i: usize) -> HomogPoly {
        let poly = self.poly.derivative(i);
        HomogPoly {
            degree: if poly.is_zero() { 0 } else { self.degree - 1 },
            poly,
        }
    }

    /// `(F_x, F_y, F_z)`.
    pub fn partials(&self) -> [HomogPoly; 3] {
        [self.derivative(0), self.derivative(1), self.derivative(2)]
    }

    /// Determinant of the matrix of second partials, of degree `3(d-2)`.
    pub fn hessian(&self) -> Result<HomogPoly, PolyError> {
        if self.degree < 2 || self.is_zero() {
            return Err(PolyError::DegreeTooSmall {
                needed: 2,
                got: self.degree,
            });
        }
        let first = self.partials();
        let h: Vec<Vec<HomogPoly>> = first.iter().map(|g| g.partials().to_vec()).collect();
        let m = |i: usize, j: usize| &h[i][j].poly;
        let minor = |a: usize, b: usize, c: usize, d: usize| m(1, a).mul(m(2, b)).sub(&m(1, c).mul(m(2, d)));
        let det = m(0, 0)
            .mul(&minor(1, 2, 2, 1))
            .sub(&m(0, 1).mul(&minor(0, 2, 2, 0)))
            .add(&m(0, 2).mul(&minor(0, 1, 1, 0)));
        let out = HomogPoly::new(det).expect("hessian of a form is a form");
        Ok(if out.is_zero() {
            out
        } else {
            HomogPoly {
                degree: 3 * (self.degree - 2),
                poly: out.poly,
            }
        })
    }

    /// Polar `a F_x + b F_y + c F_z` with respect to `q = (a:b:c)`.
    pub fn polar(&self, q: &Point) -> HomogPoly {
        let f = self.field();
        let mut acc = Poly::zero(f);
        for (i, g) in self.partials().iter().enumerate() {
            acc = acc.add(&g.poly.scale(&q[i]));
        }
        let deg = self.degree.saturating_sub(1);
        HomogPoly {
            degree: if acc.is_zero() { 0 } else { deg },
            poly: acc,
        }
    }

    pub fn eval(&self, p: &Point) -> Scalar {
        self.poly.eval(p)
    }

    /// `x F_x + y F_y + z F_z == d F`.
    pub fn euler_identity_holds(&self) -> bool {
        let f = self.field();
        let mut lhs = Poly::zero(f);
        for (i, g) in self.partials().iter().enumerate() {
            lhs = lhs.add(&g.poly.mul(&Poly::var(f, i)));
        }
        lhs == self.poly.scale(&f.from_i64(self.degree as i64))
    }

    /// Applies a linear change of coordinates: `x_i -> Σ_j m[i][j] x_j`.
    pub fn linear_substitute(&self, m: &[Point; 3]) -> HomogPoly {
        let f = self.field();
        let images = [0, 1, 2].map(|i| HomogPoly::linear(f, &m[i]).poly);
        let poly = self.poly.compose(&images);
        HomogPoly {
            degree: if poly.is_zero() { 0 } else { self.degree },
            poly,
        }
    }

    /// Restriction to the line through `a` and `b`: the binary form
    /// `F(s a + t b)` in `(s, t)`.
    pub fn restrict_to_line(&self, a: &Point, b: &Point) -> BinaryForm {
        let f = self.field();
        let images = [0, 1, 2].map(|i| {
            let mut p = Poly::<2>::zero(f);
            p.add_term([1, 0], &a[i]);
            p.add_term([0, 1], &b[i]);
            p
        });
        let r = self.poly.compose(&images);
        let mut coeffs = vec![f.zero(); self.degree as usize + 1];
        for (e, c) in r.terms() {
            coeffs[e[0] as usize] = c.clone();
        }
        BinaryForm::new(f, self.degree as usize, coeffs)
    }

    /// Whether the coefficients all lie in the immediate base field.
    pub fn is_over_base(&self) -> bool {
        self.poly.is_over_base()
    }

    /// Same polynomial over the base field; only valid when [`Self::is_over_base`].
    pub fn descend(&self) -> Option<HomogPoly> {
        let f = self.field();
        let base = f.base()?;
        if !self.is_over_base() {
            return None;
        }
        Some(HomogPoly {
            degree: self.degree,
            poly: self.poly.map_coeffs(base, |c| f.as_base(c).unwrap()),
        })
    }

    /// Re-expresses the polynomial over a larger field of the same tower.
    pub fn lift_to(&self, target: &Field) -> HomogPoly {
        let f = self.field().clone();
        HomogPoly {
            degree: self.degree,
            poly: self.poly.map_coeffs(target, |c| target.lift_from(&f, c.clone())),
        }
    }

    /// Squarefreeness, certified by a squarefree restriction to some line.
    ///
    /// A square factor `G^2 | F` restricts to a square factor on every line
    /// not inside `G = 0`, so one squarefree restriction proves `F` reduced.
    /// If forty pseudo-random lines all fail the form is reported as not
    /// squarefree.
    pub fn is_squarefree(&self) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Ok(false);
        }
        if self.degree <= 1 {
            return Ok(true);
        }
        let f = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for attempt in 0..40 {
            let (a, b): (Point, Point) = if attempt == 0 {
                (
                    [f.one(), f.from_i64(2), f.from_i64(3)],
                    [f.from_i64(5), f.from_i64(-1), f.from_i64(7)],
                )
            } else {
                (
                    [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)],
                    [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)],
                )
            };
            let r = self.restrict_to_line(&a, &b);
            if r.is_zero() {
                continue;
            }
            match r.is_squarefree() {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(PolyError::Coeff(e)) => return Err(PolyError::Coeff(e)),
                Err(_) => {}
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_homog;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn partials_of_fermat_and_cusp() {
        let f = parse_homog("x^3+y^3+z^3", &q()).unwrap();
        let p = f.partials();
        assert_eq!(p[0].to_text(), "3*x^2");
        assert_eq!(p[1].to_text(), "3*y^2");
        assert_eq!(p[2].to_text(), "3*z^2");
        let g = parse_homog("x*y*z", &q()).unwrap();
        let p = g.partials();
        assert_eq!(
            [p[0].to_text(), p[1].to_text(), p[2].to_text()],
            ["y*z".to_string(), "x*z".into(), "x*y".into()]
        );
        let c = parse_homog("x^2*z+y^3", &q()).unwrap();
        let p = c.partials();
        assert_eq!(
            [p[0].to_text(), p[1].to_text(), p[2].to_text()],
            ["2*x*z".to_string(), "3*y^2".into(), "x^2".into()]
        );
    }

    #[test]
    fn hessians_of_cubics() {
        let c = parse_homog("x^2*z+y^3", &q()).unwrap();
        assert_eq!(c.hessian().unwrap().to_text(), "-24*x^2*y");
        let n = parse_homog("x*y*z+x^3+y^3", &q()).unwrap();
        let expected = parse_homog("-2*(3*(x^3+y^3)-x*y*z)", &q()).unwrap();
        assert_eq!(n.hessian().unwrap(), expected);
        let line = parse_homog("x+y", &q()).unwrap();
        assert!(matches!(line.hessian(), Err(PolyError::DegreeTooSmall { .. })));
    }

    #[test]
    fn polar_examples() {
        let f = q();
        let fermat = parse_homog("x^3+y^3+z^3", &f).unwrap();
        assert_eq!(fermat.polar(&[f.zero(), f.zero(), f.one()]).to_text(), "3*z^2");
        let conic = parse_homog("x*y-z^2", &f).unwrap();
        assert_eq!(conic.polar(&[f.one(), f.one(), f.zero()]).to_text(), "x+y");
    }

    #[test]
    fn squarefree_detection() {
        let f = q();
        assert!(parse_homog("x*y*(x+y)", &f).unwrap().is_squarefree().unwrap());
        assert!(!parse_homog("x^2*y", &f).unwrap().is_squarefree().unwrap());
        assert!(!parse_homog("(x^2+y*z)^2*z", &f).unwrap().is_squarefree().unwrap());
    }
}
