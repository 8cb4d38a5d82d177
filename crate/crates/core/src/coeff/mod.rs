//! Exact coefficient fields: rationals, word-size prime fields and simple
//! algebraic extensions `base[t]/(m(t))` by a monic squarefree modulus.
//!
//! A [`Field`] is a cheap, shareable context; [`Scalar`] values carry no
//! reference to it and every operation goes through the field. Extension
//! moduli only need to be squarefree: inverting an element that shares a
//! factor with the modulus fails with [`CoeffError::ZeroDivisor`], carrying
//! the factor so the caller can rebuild the field over it.

pub mod dense;
mod config;
mod prime;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub use config::FieldConfig;
pub use prime::{add_mod, inv_mod, is_prime, mul_mod, pow_mod, prev_prime, prime_congruent_one, sub_mod};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoeffError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("zero divisor: the extension modulus has the nontrivial factor {text}")]
    ZeroDivisor { factor: Vec<Scalar>, text: String },
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("invalid extension modulus: {0}")]
    BadModulus(String),
    #[error("{0}")]
    Parse(String),
    #[error("rational {0} has a denominator divisible by the characteristic")]
    BadReduction(String),
}

/// A field element in canonical form.
///
/// Rationals are reduced with positive denominator, residues live in `[0, p)`
/// and extension elements are coefficient vectors over the base field of
/// length below the modulus degree with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
    Ext(Vec<Scalar>),
}

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    Rationals,
    Prime(u64),
    Extension {
        base: Field,
        modulus: Vec<Scalar>,
        generator: String,
    },
}

/// Coefficient field context.
#[derive(Clone, PartialEq, Eq)]
pub struct Field(Arc<Kind>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field, CoeffError> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    /// Builds `base[gen]/(modulus)`. The modulus is given lowest degree first.
    pub fn extension(
        base: &Field,
        modulus: Vec<Scalar>,
        generator: &str,
    ) -> Result<Field, CoeffError> {
        let mut modulus = modulus;
        dense::trim(base, &mut modulus);
        let deg = modulus.len().saturating_sub(1);
        if deg < 2 {
            return Err(CoeffError::BadModulus(format!(
                "degree {deg} < 2 for generator {generator}"
            )));
        }
        if !base.is_one(modulus.last().unwrap()) {
            return Err(CoeffError::BadModulus("modulus is not monic".into()));
        }
        let levels = base.extension_levels() + 1;
        let limit = if base.characteristic() == 0 { 2 } else { 1 };
        if levels > limit {
            return Err(CoeffError::BadModulus(format!(
                "at most {limit} extension level(s) supported over this prime field"
            )));
        }
        let g = dense::gcd(base, &modulus, &dense::derivative(base, &modulus))?;
        if g.len() > 1 {
            return Err(CoeffError::BadModulus(format!(
                "modulus is not squarefree (common factor with derivative: {})",
                fmt_dense(base, &g, generator)
            )));
        }
        Ok(Field(Arc::new(Kind::Extension {
            base: base.clone(),
            modulus,
            generator: generator.to_string(),
        })))
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Rationals => 0,
            Kind::Prime(p) => *p,
            Kind::Extension { base, .. } => base.characteristic(),
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, Kind::Rationals)
    }

    pub fn prime_modulus(&self) -> Option<u64> {
        match &*self.0 {
            Kind::Prime(p) => Some(*p),
            _ => None,
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            Kind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Modulus of an extension, lowest degree first.
    pub fn modulus(&self) -> Option<&[Scalar]> {
        match &*self.0 {
            Kind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match &*self.0 {
            Kind::Extension { generator, .. } => Some(generator),
            _ => None,
        }
    }

    /// Degree of the extension over its immediate base (1 for prime fields).
    pub fn relative_degree(&self) -> usize {
        self.modulus().map_or(1, |m| m.len() - 1)
    }

    pub fn extension_levels(&self) -> usize {
        match &*self.0 {
            Kind::Extension { base, .. } => 1 + base.extension_levels(),
            _ => 0,
        }
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        match &*self.0 {
            Kind::Extension { base, modulus, .. } => (modulus.len() - 1) * base.absolute_degree(),
            _ => 1,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<BigUint> {
        match self.characteristic() {
            0 => None,
            p => Some(BigUint::from(p).pow(self.absolute_degree() as u32)),
        }
    }

    /// Every generator name reachable from this field, outermost first.
    pub fn generator_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Kind::Extension {
            base, generator, ..
        } = &*cur.0
        {
            out.push(generator.clone());
            cur = base;
        }
        out
    }

    pub fn describe(&self) -> String {
        match &*self.0 {
            Kind::Rationals => "Q".into(),
            Kind::Prime(p) => format!("F_{p}"),
            Kind::Extension {
                base,
                modulus,
                generator,
            } => format!(
                "{}[{generator}]/({})",
                base.describe(),
                fmt_dense(base, modulus, generator)
            ),
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            Kind::Rationals => Scalar::Rational(BigRational::zero()),
            Kind::Prime(_) => Scalar::Residue(0),
            Kind::Extension { .. } => Scalar::Ext(Vec::new()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// The ring homomorphism from the integers.
    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            Kind::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Kind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Residue(r.to_u64().unwrap())
            }
            Kind::Extension { base, .. } => self.lift(base.from_bigint(n)),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, CoeffError> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        if self.is_zero(&den) {
            return Err(CoeffError::BadReduction(q.to_string()));
        }
        self.div(&num, &den)
    }

    /// Embeds an element of the immediate base field.
    pub fn lift(&self, base_elem: Scalar) -> Scalar {
        match &*self.0 {
            Kind::Extension { base, .. } => {
                let mut v = vec![base_elem];
                dense::trim(base, &mut v);
                Scalar::Ext(v)
            }
            _ => base_elem,
        }
    }

    /// Embeds an element of any field below this one in the tower.
    pub fn lift_from(&self, sub: &Field, s: Scalar) -> Scalar {
        if sub == self {
            return s;
        }
        match &*self.0 {
            Kind::Extension { base, .. } => self.lift(base.lift_from(sub, s)),
            _ => s,
        }
    }

    /// Coefficient vector over the base field, if this element is constant there.
    pub fn as_base(&self, s: &Scalar) -> Option<Scalar> {
        match (&*self.0, s) {
            (Kind::Extension { base, .. }, Scalar::Ext(v)) => match v.len() {
                0 => Some(base.zero()),
                1 => Some(v[0].clone()),
                _ => None,
            },
            _ => Some(s.clone()),
        }
    }

    /// The adjoined generator.
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.0 {
            Kind::Extension { base, .. } => Some(Scalar::Ext(vec![base.zero(), base.one()])),
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
            Scalar::Ext(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match (&*self.0, a) {
            (Kind::Rationals, Scalar::Rational(q)) => q.is_one(),
            (Kind::Prime(_), Scalar::Residue(r)) => *r == 1,
            (Kind::Extension { base, .. }, Scalar::Ext(v)) => v.len() == 1 && base.is_one(&v[0]),
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (Kind::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Kind::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                let s = x + y;
                Scalar::Residue(if s >= *p { s - p } else { s })
            }
            (Kind::Extension { base, .. }, Scalar::Ext(x), Scalar::Ext(y)) => {
                Scalar::Ext(dense::add(base, x, y))
            }
            _ => panic!("scalar does not belong to {}", self.describe()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (Kind::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Kind::Prime(p), Scalar::Residue(x)) => Scalar::Residue(if *x == 0 { 0 } else { p - x }),
            (Kind::Extension { base, .. }, Scalar::Ext(x)) => {
                Scalar::Ext(x.iter().map(|c| base.neg(c)).collect())
            }
            _ => panic!("scalar does not belong to {}", self.describe()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (Kind::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x - y),
            (Kind::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(prime::sub_mod(*x, *y, *p))
            }
            (Kind::Extension { base, .. }, Scalar::Ext(x), Scalar::Ext(y)) => {
                Scalar::Ext(dense::sub(base, x, y))
            }
            _ => panic!("scalar does not belong to {}", self.describe()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (Kind::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Kind::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(mul_mod(*x, *y, *p))
            }
            (Kind::Extension { base, modulus, .. }, Scalar::Ext(x), Scalar::Ext(y)) => {
                let prod = dense::mul(base, x, y);
                Scalar::Ext(dense::rem_monic(base, &prod, modulus))
            }
            _ => panic!("scalar does not belong to {}", self.describe()),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, CoeffError> {
        if self.is_zero(a) {
            return Err(CoeffError::ZeroInverse);
        }
        match (&*self.0, a) {
            (Kind::Rationals, Scalar::Rational(x)) => Ok(Scalar::Rational(x.recip())),
            (Kind::Prime(p), Scalar::Residue(x)) => {
                Ok(Scalar::Residue(inv_mod(*x, *p).ok_or(CoeffError::ZeroInverse)?))
            }
            (
                Kind::Extension {
                    base,
                    modulus,
                    generator,
                },
                Scalar::Ext(x),
            ) => {
                let (g, s) = dense::ext_gcd_left(base, x, modulus)?;
                if g.len() > 1 {
                    let text = fmt_dense(base, &g, generator);
                    return Err(CoeffError::ZeroDivisor { factor: g, text });
                }
                Ok(Scalar::Ext(dense::rem_monic(base, &s, modulus)))
            }
            _ => panic!("scalar does not belong to {}", self.describe()),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, CoeffError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &Scalar, e: &BigUint) -> Scalar {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Uniform-ish random element: residues are uniform, rationals have small
    /// numerators and denominators.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match &*self.0 {
            Kind::Rationals => {
                let n: i64 = rng.gen_range(-50..=50);
                let d: i64 = rng.gen_range(1..=12);
                Scalar::Rational(BigRational::new(n.into(), d.into()))
            }
            Kind::Prime(p) => Scalar::Residue(rng.gen_range(0..*p)),
            Kind::Extension { base, modulus, .. } => {
                let mut v: Vec<Scalar> = (0..modulus.len() - 1).map(|_| base.random(rng)).collect();
                dense::trim(base, &mut v);
                Scalar::Ext(v)
            }
        }
    }

    /// Canonical text form, parseable back by [`crate::parse`].
    pub fn fmt_scalar(&self, a: &Scalar) -> String {
        match (&*self.0, a) {
            (_, Scalar::Rational(q)) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            (_, Scalar::Residue(r)) => r.to_string(),
            (
                Kind::Extension {
                    base, generator, ..
                },
                Scalar::Ext(v),
            ) => fmt_dense(base, v, generator),
            _ => panic!("scalar does not belong to {}", self.describe()),
        }
    }

    /// Rational value of a scalar that lies in the prime subfield of a
    /// characteristic-zero tower.
    pub fn as_rational(&self, a: &Scalar) -> Option<BigRational> {
        match (&*self.0, a) {
            (Kind::Rationals, Scalar::Rational(q)) => Some(q.clone()),
            (Kind::Extension { base, .. }, _) => base.as_rational(&self.as_base(a)?),
            _ => None,
        }
    }

    /// Whether the text form of a scalar needs parentheses as a coefficient.
    pub(crate) fn needs_parens(text: &str) -> bool {
        text.char_indices()
            .any(|(i, c)| (c == '+' || c == '-') && i > 0)
    }
}

/// Text form of a dense polynomial in `var`, highest degree first.
pub(crate) fn fmt_dense(field: &Field, v: &[Scalar], var: &str) -> String {
    let terms: Vec<(Scalar, String)> = v
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(i, c)| {
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            (c.clone(), mono)
        })
        .collect();
    join_terms(field, &terms)
}

/// Joins `(coefficient, monomial)` pairs into canonical text.
pub(crate) fn join_terms(field: &Field, terms: &[(Scalar, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, mono)) in terms.iter().enumerate() {
        let piece = if mono.is_empty() {
            let t = field.fmt_scalar(c);
            if Field::needs_parens(&t) && k > 0 {
                format!("({t})")
            } else {
                t
            }
        } else if field.is_one(c) {
            mono.clone()
        } else if field.is_one(&field.neg(c)) {
            format!("-{mono}")
        } else {
            let t = field.fmt_scalar(c);
            if Field::needs_parens(&t) {
                format!("({t})*{mono}")
            } else {
                format!("{t}*{mono}")
            }
        };
        if k > 0 && !piece.starts_with('-') {
            out.push('+');
        }
        out.push_str(&piece);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    fn gaussian() -> Field {
        let qf = Field::rationals();
        Field::extension(&qf, vec![qf.one(), qf.zero(), qf.one()], "t").unwrap()
    }

    #[test]
    fn invert_rational() {
        let f = Field::rationals();
        assert_eq!(f.inv(&q(3, 4)).unwrap(), q(4, 3));
        assert_eq!(f.inv(&f.zero()), Err(CoeffError::ZeroInverse));
    }

    #[test]
    fn invert_generator_of_gaussian_field() {
        let f = gaussian();
        let t = f.generator().unwrap();
        assert_eq!(f.inv(&t).unwrap(), f.neg(&t));
    }

    #[test]
    fn zero_divisor_over_reducible_modulus() {
        let qf = Field::rationals();
        // t^3 + 1 = (t + 1)(t^2 - t + 1)
        let f = Field::extension(&qf, vec![qf.one(), qf.zero(), qf.zero(), qf.one()], "t").unwrap();
        let t = f.generator().unwrap();
        let a = f.add(&t, &f.one());
        match f.inv(&a) {
            Err(CoeffError::ZeroDivisor { factor, text }) => {
                assert_eq!(factor, vec![qf.one(), qf.one()]);
                assert_eq!(text, "t+1");
            }
            other => panic!("expected zero divisor, got {other:?}"),
        }
        // t^2 - t + 1 is also a factor
        let b = f.add(&f.sub(&f.mul(&t, &t), &t), &f.one());
        assert!(matches!(f.inv(&b), Err(CoeffError::ZeroDivisor { .. })));
        // but t itself is a unit: t * (-t^2) = -t^3 = 1
        let inv = f.inv(&t).unwrap();
        assert!(f.is_one(&f.mul(&inv, &t)));
    }

    #[test]
    fn embed_integers() {
        assert_eq!(Field::rationals().from_i64(5), q(5, 1));
        assert_eq!(Field::prime(3).unwrap().from_i64(5), Scalar::Residue(2));
        let g = gaussian();
        let t = g.generator().unwrap();
        assert_eq!(g.from_i64(-1), g.mul(&t, &t));
        assert!(g.is_one(&g.from_i64(1)));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(Field::prime(1_000_001).is_err());
        let qf = Field::rationals();
        // (t+1)^2 is not squarefree
        assert!(Field::extension(&qf, vec![qf.one(), qf.from_i64(2), qf.one()], "t").is_err());
        // not monic
        assert!(Field::extension(&qf, vec![qf.one(), qf.zero(), qf.from_i64(2)], "t").is_err());
        let fp = Field::prime(7).unwrap();
        let e = Field::extension(&fp, vec![fp.one(), fp.zero(), fp.one()], "t").unwrap();
        assert!(Field::extension(&e, vec![e.one(), e.zero(), e.one()], "s").is_err());
        let g = gaussian();
        let two = Field::extension(&g, vec![g.from_i64(-2), g.zero(), g.one()], "s").unwrap();
        assert!(Field::extension(&two, vec![two.from_i64(-3), two.zero(), two.one()], "r").is_err());
    }

    fn check_axioms(f: &Field, samples: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            if !f.is_zero(&a) {
                let inv = f.inv(&a).unwrap();
                assert!(f.is_one(&f.mul(&a, &inv)));
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        check_axioms(&Field::rationals(), 1000, 1);
        check_axioms(&Field::prime(1_000_003).unwrap(), 1000, 2);
        check_axioms(&gaussian(), 1000, 3);
        let fp = Field::prime(101).unwrap();
        // t^2 - 2 is irreducible mod 101 (2 is a non-residue since 101 = 5 mod 8)
        let e = Field::extension(&fp, vec![fp.from_i64(-2), fp.zero(), fp.one()], "t").unwrap();
        check_axioms(&e, 1000, 4);
        let qf = Field::rationals();
        let c8 = Field::extension(
            &qf,
            vec![qf.one(), qf.zero(), qf.zero(), qf.zero(), qf.one()],
            "t",
        )
        .unwrap();
        check_axioms(&c8, 300, 5);
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let p = 1_000_003;
        let f = Field::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            assert_eq!(f.pow(&a, p), a);
        }
    }

    #[test]
    fn scalar_text() {
        let g = gaussian();
        let t = g.generator().unwrap();
        let x = g.sub(&g.mul(&g.from_i64(3), &t), &g.from_i64(1));
        assert_eq!(g.fmt_scalar(&x), "3*t-1");
        assert_eq!(Field::rationals().fmt_scalar(&q(-3, 4)), "-3/4");
        assert_eq!(g.describe(), "Q[t]/(t^2+1)");
    }
}
