use crate::coeff::{dense, fmt_dense, join_terms, Field, Scalar};

use super::PolyError;

/// Dense univariate polynomial, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Scalar>) -> Self {
        dense::trim(field, &mut coeffs);
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Scalar) -> Self {
        Self::new(field, vec![c])
    }

    /// `s - a`.
    pub fn linear_root(field: &Field, a: &Scalar) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        dense::degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.field, dense::add(&self.field, &self.coeffs, &o.coeffs))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.field, dense::sub(&self.field, &self.coeffs, &o.coeffs))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.field, dense::mul(&self.field, &self.coeffs, &o.coeffs))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(&self.field, dense::scale(&self.field, &self.coeffs, c))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, o: &Self) -> Result<(Self, Self), PolyError> {
        let (q, r) = dense::divrem(&self.field, &self.coeffs, &o.coeffs)?;
        Ok((Self::new(&self.field, q), Self::new(&self.field, r)))
    }

    /// Exact quotient; errors if `o` does not divide `self`.
    pub fn exact_div(&self, o: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.divrem(o)?;
        if !r.is_zero() {
            return Err(PolyError::NotDivisible);
        }
        Ok(q)
    }

    pub fn divides(&self, o: &Self) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Ok(o.is_zero());
        }
        Ok(o.divrem(self)?.1.is_zero())
    }

    pub fn monic(&self) -> Result<Self, PolyError> {
        Ok(Self::new(&self.field, dense::make_monic(&self.field, &self.coeffs)?))
    }

    pub fn gcd(&self, o: &Self) -> Result<Self, PolyError> {
        Ok(Self::new(&self.field, dense::gcd(&self.field, &self.coeffs, &o.coeffs)?))
    }

    pub fn derivative(&self) -> Self {
        Self::new(&self.field, dense::derivative(&self.field, &self.coeffs))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        dense::eval(&self.field, &self.coeffs, x)
    }

    /// `f / gcd(f, f')`, made monic: the product of the distinct irreducible
    /// factors of `f`.
    ///
    /// In positive characteristic a factor whose exponent is divisible by the
    /// characteristic disappears from the derivative; that case is detected
    /// and rejected rather than silently dropped.
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let fp = self.derivative();
        if self.field.characteristic() > 0 && fp.is_zero() && !self.is_constant() {
            return Err(PolyError::CharDividesExponent);
        }
        let g = self.gcd(&fp)?;
        let s = self.exact_div(&g)?.monic()?;
        if self.field.characteristic() > 0 {
            // every factor of g must already occur in s
            let mut h = g;
            loop {
                let c = h.gcd(&s)?;
                if c.is_constant() {
                    break;
                }
                h = h.exact_div(&c)?;
            }
            if !h.is_constant() {
                return Err(PolyError::CharDividesExponent);
            }
        }
        Ok(s)
    }

    pub fn is_squarefree(&self) -> Result<bool, PolyError> {
        if self.is_constant() {
            return Ok(!self.is_zero());
        }
        Ok(self.gcd(&self.derivative())?.is_constant())
    }

    pub fn to_text(&self, var: &str) -> String {
        fmt_dense(&self.field, &self.coeffs, var)
    }
}

/// Binary form `Σ c_j s^j t^(n-j)` of formal degree `n`.
///
/// The formal degree is kept separately so roots at `(1:0)` are visible as a
/// drop in the degree of the dehomogenization `b(s, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    /// `coeffs[j]` multiplies `s^j t^(degree-j)`; missing entries are zero.
    pub fn new(field: &Field, degree: usize, mut coeffs: Vec<Scalar>) -> Self {
        coeffs.resize(degree + 1, field.zero());
        BinaryForm {
            field: field.clone(),
            degree,
            coeffs,
        }
    }

    pub fn from_uni(u: &UniPoly, degree: usize) -> Self {
        assert!(u.degree().unwrap_or(0) <= degree);
        Self::new(u.field(), degree, u.coeffs().to_vec())
    }

    /// The linear form `b s - a t` vanishing at `(a:b)`.
    pub fn linear_vanishing_at(field: &Field, a: &Scalar, b: &Scalar) -> Self {
        Self::new(field, 1, vec![field.neg(b), a.clone()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    /// `b(s, 1)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.clone())
    }

    /// Multiplicity of the root `(1:0)`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.degree - self.dehomogenize().degree().unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.dehomogenize().mul(&o.dehomogenize());
        Self::from_uni(&p, self.degree + o.degree)
    }

    pub fn eval(&self, s: &Scalar, t: &Scalar) -> Scalar {
        let f = &self.field;
        let mut acc = f.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let term = f.mul(c, &f.mul(&f.pow(s, j as u64), &f.pow(t, (self.degree - j) as u64)));
            acc = f.add(&acc, &term);
        }
        acc
    }

    /// `∂b/∂s` and `∂b/∂t` as forms of degree `n - 1`.
    pub fn partials(&self) -> (Self, Self) {
        let f = &self.field;
        let n = self.degree;
        if n == 0 {
            return (Self::new(f, 0, vec![]), Self::new(f, 0, vec![]));
        }
        let ds = (1..=n)
            .map(|j| f.mul(&self.coeffs[j], &f.from_i64(j as i64)))
            .collect();
        let dt = (0..n)
            .map(|j| f.mul(&self.coeffs[j], &f.from_i64((n - j) as i64)))
            .collect();
        (Self::new(f, n - 1, ds), Self::new(f, n - 1, dt))
    }

    /// Squarefree part as a binary form: the distinct linear factors over the
    /// algebraic closure, each once.
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let u = self.dehomogenize();
        let s = if u.is_constant() {
            UniPoly::constant(&self.field, self.field.one())
        } else {
            u.squarefree_part()?
        };
        let inf = usize::from(self.infinity_multiplicity() > 0);
        let deg = s.degree().unwrap_or(0) + inf;
        Ok(Self::from_uni(&s, deg))
    }

    pub fn is_squarefree(&self) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Ok(false);
        }
        Ok(self.infinity_multiplicity() <= 1 && self.dehomogenize().is_squarefree()?)
    }

    /// Whether `self` divides `o` as binary forms.
    pub fn divides(&self, o: &Self) -> Result<bool, PolyError> {
        if o.is_zero() {
            return Ok(true);
        }
        if self.is_zero() || self.degree > o.degree {
            return Ok(false);
        }
        Ok(self.infinity_multiplicity() <= o.infinity_multiplicity()
            && self.dehomogenize().divides(&o.dehomogenize())?)
    }

    /// Greatest common divisor, normalized so the dehomogenization is monic.
    pub fn gcd(&self, o: &Self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        let g = self.dehomogenize().gcd(&o.dehomogenize())?;
        let inf = self.infinity_multiplicity().min(o.infinity_multiplicity());
        let deg = g.degree().unwrap_or(0) + inf;
        Ok(Self::from_uni(&g, deg))
    }

    /// Exact quotient.
    pub fn exact_div(&self, o: &Self) -> Result<Self, PolyError> {
        if !o.divides(self)? {
            return Err(PolyError::NotDivisible);
        }
        let q = self.dehomogenize().exact_div(&o.dehomogenize())?;
        Ok(Self::from_uni(&q, self.degree - o.degree))
    }

    pub fn to_text(&self, vars: [&str; 2]) -> String {
        let f = &self.field;
        let terms: Vec<(Scalar, String)> = (0..=self.degree)
            .rev()
            .filter(|&j| !f.is_zero(&self.coeffs[j]))
            .map(|j| {
                let e = [j as u32, (self.degree - j) as u32];
                (self.coeffs[j].clone(), super::sparse::monomial_text(&e, &vars))
            })
            .collect();
        join_terms(f, &terms)
    }
}
