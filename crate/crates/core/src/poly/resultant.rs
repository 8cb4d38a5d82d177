use super::{BinaryForm, Poly, PolyError, UniPoly};
use crate::coeff::{Field, Scalar};
use crate::linalg;

/// Sylvester matrix of two coefficient lists given highest degree first,
/// with formal degrees `a.len()-1` and `b.len()-1`.
fn sylvester(field: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Vec<Scalar>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![field.zero(); size];
        r[i..i + m + 1].clone_from_slice(a);
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![field.zero(); size];
        r[i..i + n + 1].clone_from_slice(b);
        rows.push(r);
    }
    rows
}

fn formal_resultant(field: &Field, a: &[Scalar], b: &[Scalar]) -> Result<Scalar, PolyError> {
    if a.len() == 1 && b.len() == 1 {
        return Ok(field.one());
    }
    Ok(linalg::det(field, sylvester(field, a, b))?)
}

/// Resultant of two univariate polynomials with respect to their actual degrees.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Result<Scalar, PolyError> {
    let field = f.field();
    if f.is_zero() || g.is_zero() {
        return Ok(field.zero());
    }
    let a: Vec<Scalar> = f.coeffs().iter().rev().cloned().collect();
    let b: Vec<Scalar> = g.coeffs().iter().rev().cloned().collect();
    formal_resultant(field, &a, &b)
}

/// Homogeneous resultant of two binary forms, using their formal degrees.
pub fn resultant_binary(f: &BinaryForm, g: &BinaryForm) -> Result<Scalar, PolyError> {
    let a: Vec<Scalar> = f.coeffs().iter().rev().cloned().collect();
    let b: Vec<Scalar> = g.coeffs().iter().rev().cloned().collect();
    formal_resultant(f.field(), &a, &b)
}

/// `Res(∂g/∂s, ∂g/∂t)`, which is `n^(n-2)` times the discriminant of `g`
/// up to sign and vanishes exactly when `g` has a repeated linear factor
/// (in characteristic not dividing `n`).
pub fn discriminant_binary(g: &BinaryForm) -> Result<Scalar, PolyError> {
    if g.degree() < 2 {
        return Err(PolyError::DegreeTooSmall {
            needed: 2,
            got: g.degree() as u32,
        });
    }
    let (gs, gt) = g.partials();
    resultant_binary(&gs, &gt)
}

/// Distinct evaluation points `0, 1, 2, ...` in the field, or an error when
/// the prime field is too small.
pub fn sample_points(field: &Field, count: usize) -> Result<Vec<Scalar>, PolyError> {
    let p = field.characteristic();
    if p != 0 && (count as u64) > p {
        return Err(PolyError::FieldTooSmall { needed: count });
    }
    Ok((0..count).map(|i| field.from_i64(i as i64)).collect())
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(field: &Field, xs: &[Scalar], ys: &[Scalar]) -> Result<UniPoly, PolyError> {
    let n = xs.len();
    let mut dd: Vec<Scalar> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = field.sub(&dd[i], &dd[i - 1]);
            let den = field.sub(&xs[i], &xs[i - level]);
            dd[i] = field.div(&num, &den)?;
        }
    }
    let mut acc = UniPoly::zero(field);
    for i in (0..n).rev() {
        acc = acc
            .mul(&UniPoly::linear_root(field, &xs[i]))
            .add(&UniPoly::constant(field, dd[i].clone()));
    }
    Ok(acc)
}

/// Resultant of two bivariate polynomials eliminating variable `var`
/// (0 or 1), as a polynomial in the other variable. Computed by evaluation
/// at enough points and interpolation; leading coefficients in `var` are
/// kept formal so the result is the generic Sylvester determinant.
pub fn resultant_bivariate(f: &Poly<2>, g: &Poly<2>, var: usize) -> Result<UniPoly, PolyError> {
    let field = f.field();
    let other = 1 - var;
    let (m, n) = (f.degree_in(var).unwrap_or(0), g.degree_in(var).unwrap_or(0));
    if f.is_zero() || g.is_zero() {
        return Ok(UniPoly::zero(field));
    }
    let bound = (n * f.degree_in(other).unwrap_or(0) + m * g.degree_in(other).unwrap_or(0)) as usize;
    let xs = sample_points(field, bound + 1)?;
    let column = |p: &Poly<2>, deg: u32, x: &Scalar| -> Vec<Scalar> {
        let mut c = vec![field.zero(); deg as usize + 1];
        for (e, a) in p.terms() {
            let t = field.mul(a, &field.pow(x, e[other] as u64));
            let k = (deg - e[var]) as usize;
            c[k] = field.add(&c[k], &t);
        }
        c
    };
    let mut ys = Vec::with_capacity(xs.len());
    for x in &xs {
        ys.push(formal_resultant(field, &column(f, m, x), &column(g, n, x))?);
    }
    interpolate(field, &xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn bivariate_examples() {
        let f = Field::rationals();
        let vars = ["u", "s"];
        let a = parse_poly::<2>("u^2-s", &f, &vars).unwrap();
        let b = parse_poly::<2>("u-1", &f, &vars).unwrap();
        assert_eq!(resultant_bivariate(&a, &b, 0).unwrap().to_text("s"), "-s+1");
        let c = parse_poly::<2>("u^2", &f, &vars).unwrap();
        let d = parse_poly::<2>("u+s", &f, &vars).unwrap();
        assert_eq!(resultant_bivariate(&c, &d, 0).unwrap().to_text("s"), "s^2");
        assert!(resultant_bivariate(&a, &a, 0).unwrap().is_zero());
    }

    #[test]
    fn binary_discriminants() {
        let f = Field::rationals();
        let uv = BinaryForm::new(&f, 2, vec![f.zero(), f.one(), f.zero()]);
        assert!(!f.is_zero(&discriminant_binary(&uv).unwrap()));
        let sq = BinaryForm::new(&f, 2, vec![f.zero(), f.zero(), f.one()]);
        assert!(f.is_zero(&discriminant_binary(&sq).unwrap()));
        // s^2 - a t^2: discriminant proportional to a
        for a in [1i64, 2, 5, -3] {
            let g = BinaryForm::new(&f, 2, vec![f.from_i64(-a), f.zero(), f.one()]);
            let d = discriminant_binary(&g).unwrap();
            assert_eq!(d, f.from_i64(-4 * a));
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = Field::rationals();
        let p = UniPoly::new(&f, vec![f.from_i64(3), f.from_i64(-1), f.zero(), f.from_i64(2)]);
        let xs = sample_points(&f, 4).unwrap();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&f, &xs, &ys).unwrap(), p);
    }
}
