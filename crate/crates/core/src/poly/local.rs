use super::{HomogPoly, Point, Poly};
use crate::coeff::{Field, Scalar};

/// Polynomial in local coordinates `(u, v)` centred at a point.
pub type AffineLocalPoly = Poly<2>;

pub const UV: [&str; 2] = ["u", "v"];

/// Affine chart around a projective point: the coordinate `k` with nonzero
/// entry is set to 1 and the other two, in increasing index order, become
/// `u + a` and `v + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub point: Point,
    pub fixed: usize,
    pub others: [usize; 2],
    /// Normalized affine coordinates `(a, b)` of the point.
    pub center: [Scalar; 2],
}

impl Chart {
    pub fn new(field: &Field, p: &Point) -> Option<Chart> {
        let k = (0..3).rev().find(|&i| !field.is_zero(&p[i]))?;
        let inv = field.inv(&p[k]).ok()?;
        let others = match k {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let center = others.map(|i| field.mul(&p[i], &inv));
        let mut point = p.clone();
        for c in point.iter_mut() {
            *c = field.mul(c, &inv);
        }
        Some(Chart {
            point,
            fixed: k,
            others,
            center,
        })
    }

    /// Germ of `F` at the point in local coordinates.
    pub fn localize(&self, f: &HomogPoly) -> AffineLocalPoly {
        let field = f.field();
        let mut images: [Poly<2>; 3] = std::array::from_fn(|_| Poly::zero(field));
        images[self.fixed] = Poly::one(field);
        for (slot, &i) in self.others.iter().enumerate() {
            images[i] = Poly::var(field, slot).add(&Poly::constant(field, self.center[slot].clone()));
        }
        f.poly().compose(&images)
    }

    /// Projective line through the point corresponding to the local linear
    /// form `α u + β v`.
    pub fn line_from_local(&self, field: &Field, alpha: &Scalar, beta: &Scalar) -> HomogPoly {
        let mut coeffs: Point = std::array::from_fn(|_| field.zero());
        let [i, j] = self.others;
        coeffs[i] = alpha.clone();
        coeffs[j] = beta.clone();
        let shift = field.add(
            &field.mul(alpha, &self.center[0]),
            &field.mul(beta, &self.center[1]),
        );
        coeffs[self.fixed] = field.neg(&shift);
        HomogPoly::linear(field, &coeffs)
    }
}

/// Germ of `F` at `p`; its constant term is `F(p)` up to a unit.
pub fn translate_to_origin(f: &HomogPoly, p: &Point) -> Option<(Chart, AffineLocalPoly)> {
    let chart = Chart::new(f.field(), p)?;
    let g = chart.localize(f);
    Some((chart, g))
}
