//! Dense univariate polynomial kernels over a [`Field`], coefficients stored
//! lowest degree first. These back extension-field arithmetic and the public
//! [`crate::poly::UniPoly`] type.

use super::{CoeffError, Field, Scalar};

pub fn trim(field: &Field, v: &mut Vec<Scalar>) {
    while v.last().is_some_and(|c| field.is_zero(c)) {
        v.pop();
    }
}

pub fn degree(v: &[Scalar]) -> Option<usize> {
    v.len().checked_sub(1)
}

pub fn add(field: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => field.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    trim(field, &mut out);
    out
}

pub fn sub(field: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => field.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => field.neg(y),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    trim(field, &mut out);
    out
}

pub fn scale(field: &Field, a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = a.iter().map(|x| field.mul(x, c)).collect();
    trim(field, &mut out);
    out
}

pub fn mul(field: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &t);
        }
    }
    trim(field, &mut out);
    out
}

/// Remainder modulo a monic polynomial, no inversions required.
pub fn rem_monic(field: &Field, a: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if field.is_zero(&lead) {
            continue;
        }
        let shift = r.len() - dm;
        for k in 0..dm {
            let t = field.mul(&lead, &m[k]);
            r[shift + k] = field.sub(&r[shift + k], &t);
        }
    }
    trim(field, &mut r);
    r
}

/// Division with remainder; the divisor's leading coefficient must be invertible.
pub fn divrem(
    field: &Field,
    a: &[Scalar],
    b: &[Scalar],
) -> Result<(Vec<Scalar>, Vec<Scalar>), CoeffError> {
    let db = degree(b).ok_or(CoeffError::ZeroInverse)?;
    let inv_lead = field.inv(&b[db])?;
    let mut r = a.to_vec();
    trim(field, &mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![field.zero(); r.len() - db];
    while r.len() > db {
        let lead = r.pop().unwrap();
        if field.is_zero(&lead) {
            continue;
        }
        let c = field.mul(&lead, &inv_lead);
        let shift = r.len() - db;
        for k in 0..db {
            let t = field.mul(&c, &b[k]);
            r[shift + k] = field.sub(&r[shift + k], &t);
        }
        q[shift] = c;
    }
    trim(field, &mut q);
    trim(field, &mut r);
    Ok((q, r))
}

pub fn make_monic(field: &Field, a: &[Scalar]) -> Result<Vec<Scalar>, CoeffError> {
    match a.last() {
        None => Ok(Vec::new()),
        Some(l) => {
            let inv = field.inv(l)?;
            Ok(scale(field, a, &inv))
        }
    }
}

/// Extended Euclid: returns `(g, s)` with `g` monic and `s·a ≡ g (mod b)`.
pub fn ext_gcd_left(
    field: &Field,
    a: &[Scalar],
    b: &[Scalar],
) -> Result<(Vec<Scalar>, Vec<Scalar>), CoeffError> {
    let (mut r0, mut r1) = (b.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Vec<Scalar>, Vec<Scalar>) = (Vec::new(), vec![field.one()]);
    trim(field, &mut r0);
    trim(field, &mut r1);
    while !r1.is_empty() {
        let (q, r) = divrem(field, &r0, &r1)?;
        let s = sub(field, &s0, &mul(field, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    match r0.last() {
        None => Ok((Vec::new(), Vec::new())),
        Some(l) => {
            let inv = field.inv(l)?;
            Ok((scale(field, &r0, &inv), scale(field, &s0, &inv)))
        }
    }
}

pub fn gcd(field: &Field, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>, CoeffError> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(field, &mut r0);
    trim(field, &mut r1);
    while !r1.is_empty() {
        let (_, r) = divrem(field, &r0, &r1)?;
        r0 = std::mem::replace(&mut r1, r);
    }
    make_monic(field, &r0)
}

pub fn derivative(field: &Field, a: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| field.mul(&field.from_i64(i as i64), c))
        .collect();
    trim(field, &mut out);
    out
}

pub fn eval(field: &Field, a: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = field.zero();
    for c in a.iter().rev() {
        acc = field.add(&field.mul(&acc, x), c);
    }
    acc
}
