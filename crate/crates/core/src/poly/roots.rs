//! Roots of univariate polynomials inside the working field.
//!
//! Finite fields use Cantor-Zassenhaus splitting. Over the rationals and
//! over a single extension of the rationals the roots are found modulo a
//! prime where everything splits, Hensel-lifted, rationally reconstructed
//! and checked exactly, so every reported root is a true root.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BinaryForm, PolyError, UniPoly};
use crate::coeff::{is_prime, Field, Scalar};

/// Distinct roots lying in the field, with multiplicities, sorted by their
/// canonical scalar order.
pub fn roots(f: &UniPoly) -> Result<Vec<(Scalar, usize)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let field = f.field();
    let s = f.squarefree_part()?;
    let mut found = distinct_roots(&s)?;
    found.sort();
    found.dedup();
    let mut out = Vec::with_capacity(found.len());
    for r in found {
        let lin = UniPoly::linear_root(field, &r);
        let mut k = 0;
        let mut rest = f.clone();
        loop {
            let (q, rem) = rest.divrem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            k += 1;
            rest = q;
        }
        out.push((r, k));
    }
    Ok(out)
}

/// Roots `(a:b)` of a binary form, normalized as `(a:1)` or `(1:0)`.
pub fn binary_roots(g: &BinaryForm) -> Result<Vec<((Scalar, Scalar), usize)>, PolyError> {
    let f = g.field();
    if g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out: Vec<((Scalar, Scalar), usize)> = roots(&g.dehomogenize())?
        .into_iter()
        .map(|(r, k)| ((r, f.one()), k))
        .collect();
    let inf = g.infinity_multiplicity();
    if inf > 0 {
        out.push(((f.one(), f.zero()), inf));
    }
    Ok(out)
}

fn distinct_roots(s: &UniPoly) -> Result<Vec<Scalar>, PolyError> {
    let field = s.field();
    if s.degree() == Some(1) {
        let c = &s.coeffs()[0];
        let l = &s.coeffs()[1];
        return Ok(vec![field.neg(&field.div(c, l)?)]);
    }
    if field.characteristic() > 0 {
        return finite_field_roots(s);
    }
    match field.extension_levels() {
        0 => rational_roots(s),
        1 => number_field_roots(s),
        _ => Err(PolyError::Unsupported(
            "root extraction over a two-level extension is not supported".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// finite fields

fn mulmod(a: &UniPoly, b: &UniPoly, m: &UniPoly) -> Result<UniPoly, PolyError> {
    Ok(a.mul(b).divrem(m)?.1)
}

fn powmod(base: &UniPoly, e: &BigUint, m: &UniPoly) -> Result<UniPoly, PolyError> {
    let field = base.field();
    let mut acc = UniPoly::constant(field, field.one()).divrem(m)?.1;
    let base = base.divrem(m)?.1;
    for i in (0..e.bits()).rev() {
        acc = mulmod(&acc, &acc, m)?;
        if e.bit(i) {
            acc = mulmod(&acc, &base, m)?;
        }
    }
    Ok(acc)
}

fn finite_field_roots(s: &UniPoly) -> Result<Vec<Scalar>, PolyError> {
    let field = s.field();
    let q = field.order().expect("finite field");
    let x = UniPoly::new(field, vec![field.zero(), field.one()]);
    let xq = powmod(&x, &q, s)?;
    let g = s.gcd(&xq.sub(&x))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc2);
    let mut out = Vec::new();
    split_linear(&g, &q, &mut rng, &mut out)?;
    Ok(out)
}

/// Splits a monic product of distinct linear factors.
fn split_linear(
    g: &UniPoly,
    q: &BigUint,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Scalar>,
) -> Result<(), PolyError> {
    let field = g.field();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let g = g.monic()?;
            out.push(field.neg(&g.coeffs()[0]));
            return Ok(());
        }
        _ => {}
    }
    let p = field.characteristic();
    loop {
        let delta = field.random(rng);
        let h = if p == 2 {
            // absolute trace of delta*x
            let k = field.absolute_degree();
            let lin = UniPoly::new(field, vec![field.zero(), delta]);
            let mut term = lin.divrem(g)?.1;
            let mut acc = term.clone();
            for _ in 1..k {
                term = mulmod(&term, &term, g)?;
                acc = acc.add(&term);
            }
            acc
        } else {
            let lin = UniPoly::new(field, vec![delta, field.one()]);
            let e = (q - 1u32) / 2u32;
            powmod(&lin, &e, g)?.sub(&UniPoly::constant(field, field.one()))
        };
        let d = g.gcd(&h)?;
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < g.degree().unwrap() {
            let rest = g.exact_div(&d)?;
            split_linear(&d, q, rng, out)?;
            return split_linear(&rest, q, rng, out);
        }
    }
}

// ---------------------------------------------------------------------------
// p-adic lifting over Q and Q(α)

/// Arithmetic modulo `M = p^N`.
struct Modulus {
    m: BigInt,
}

impl Modulus {
    fn red(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.m)
    }

    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        let e = a.mod_floor(&self.m).extended_gcd(&self.m);
        e.gcd.is_one().then(|| e.x.mod_floor(&self.m))
    }

    fn of_rational(&self, q: &BigRational) -> Option<BigInt> {
        let d = self.inv(q.denom())?;
        Some(self.red(&(q.numer() * d)))
    }

    fn eval(&self, coeffs: &[BigInt], x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = self.red(&(acc * x + c));
        }
        acc
    }
}

/// Rational `a/b ≡ u (mod m)` with `|a|, |b| ≤ sqrt(m/2)`, if one exists.
pub(crate) fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

fn newton_lift(md: &Modulus, f: &[BigInt], root: BigInt, steps: u32) -> Option<BigInt> {
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut r = root;
    for _ in 0..steps {
        let v = md.eval(f, &r);
        if v.is_zero() {
            break;
        }
        let d = md.inv(&md.eval(&df, &r))?;
        r = md.red(&(r - v * d));
    }
    Some(r)
}

fn lift_steps(n: u32) -> u32 {
    32 - n.leading_zeros() + 1
}

/// Candidate primes around 2^30 in a fixed order.
fn candidate_primes() -> impl Iterator<Item = u64> {
    (0..).map(|i| (1u64 << 30) + 3 + 2 * i).filter(|&p| is_prime(p)).take(400)
}

fn residues_mod_p(coeffs: &[BigRational], p: u64) -> Option<Vec<u64>> {
    let pb = BigInt::from(p);
    coeffs
        .iter()
        .map(|c| {
            let d = c.denom().mod_floor(&pb).to_u64()?;
            let inv = crate::coeff::inv_mod(d, p)?;
            let n = c.numer().mod_floor(&pb).to_u64()?;
            Some(crate::coeff::mul_mod(n, inv, p))
        })
        .collect()
}

fn fp_poly(fp: &Field, c: &[u64]) -> UniPoly {
    UniPoly::new(fp, c.iter().map(|&r| Scalar::Residue(r)).collect())
}

fn residue(s: &Scalar) -> u64 {
    match s {
        Scalar::Residue(r) => *r,
        _ => unreachable!("prime field element expected"),
    }
}

fn rational_of(field: &Field, s: &Scalar) -> BigRational {
    field.as_rational(s).expect("rational coefficient")
}

fn rational_roots(s: &UniPoly) -> Result<Vec<Scalar>, PolyError> {
    let field = s.field();
    let mut out = Vec::new();
    let mut coeffs: Vec<BigRational> = s.coeffs().iter().map(|c| rational_of(field, c)).collect();
    if coeffs[0].is_zero() {
        out.push(field.zero());
        coeffs.remove(0);
    }
    if coeffs.len() <= 1 {
        return Ok(out);
    }
    // integer coefficients
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
    let bound = ints[0].abs().max(ints.last().unwrap().abs());
    let target = BigInt::from(2u32) * &bound * &bound + 1u32;
    let qcoeffs: Vec<BigRational> = ints.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    for p in candidate_primes() {
        let Some(red) = residues_mod_p(&qcoeffs, p) else { continue };
        if red.last() == Some(&0) {
            continue;
        }
        let fp = Field::prime(p)?;
        let fpoly = fp_poly(&fp, &red);
        if !fpoly.is_squarefree()? {
            continue;
        }
        let mut n = 1u32;
        let mut m = BigInt::from(p);
        while m <= target {
            m *= p;
            n += 1;
        }
        let md = Modulus { m: m.clone() };
        for r in finite_field_roots(&fpoly.monic()?)? {
            let Some(lifted) = newton_lift(&md, &ints, BigInt::from(residue(&r)), lift_steps(n)) else {
                continue;
            };
            if let Some(q) = rational_reconstruct(&lifted, &m) {
                let cand = Scalar::Rational(q);
                if field.is_zero(&s.eval(&cand)) {
                    out.push(cand);
                }
            }
        }
        return Ok(out);
    }
    Err(PolyError::Unsupported("no suitable prime for rational root search".into()))
}

/// Coordinates of an element of a one-level extension of Q, padded to `k`.
fn coords(field: &Field, s: &Scalar, k: usize) -> Vec<BigRational> {
    let base = field.base().unwrap();
    let mut v: Vec<BigRational> = match s {
        Scalar::Ext(v) => v.iter().map(|c| rational_of(base, c)).collect(),
        _ => unreachable!(),
    };
    v.resize(k, BigRational::zero());
    v
}

fn number_field_roots(s: &UniPoly) -> Result<Vec<Scalar>, PolyError> {
    let field = s.field();
    let base = field.base().unwrap().clone();
    let modulus: Vec<BigRational> = field.modulus().unwrap().iter().map(|c| rational_of(&base, c)).collect();
    let k = modulus.len() - 1;
    let s = s.monic()?;
    let deg = s.degree().unwrap();
    let coeff_coords: Vec<Vec<BigRational>> = s.coeffs().iter().map(|c| coords(field, c, k)).collect();
    for p in candidate_primes() {
        let Some(mred) = residues_mod_p(&modulus, p) else { continue };
        let fp = Field::prime(p)?;
        let mpoly = fp_poly(&fp, &mred);
        if !mpoly.is_squarefree()? {
            continue;
        }
        let rho = finite_field_roots(&mpoly)?;
        if rho.len() != k {
            continue;
        }
        // images of s in each embedding, mod p
        let mut images = Vec::with_capacity(k);
        let mut ok = true;
        for r in &rho {
            let mut c = Vec::with_capacity(deg + 1);
            for cc in &coeff_coords {
                let Some(res) = residues_mod_p(cc, p) else {
                    ok = false;
                    break;
                };
                let v = UniPoly::new(&fp, res.into_iter().map(Scalar::Residue).collect()).eval(r);
                c.push(residue(&v));
            }
            if !ok {
                break;
            }
            let poly = fp_poly(&fp, &c);
            if poly.degree() != Some(deg) || !poly.is_squarefree()? {
                ok = false;
                break;
            }
            images.push(poly);
        }
        if !ok {
            continue;
        }
        let root_sets: Vec<Vec<u64>> = images
            .iter()
            .map(|g| finite_field_roots(g).map(|v| v.iter().map(residue).collect()))
            .collect::<Result<_, _>>()?;
        if root_sets.iter().any(|r| r.is_empty()) {
            return Ok(Vec::new());
        }
        return lift_combinations(field, &s, &modulus, &coeff_coords, p, &rho, &root_sets);
    }
    Err(PolyError::Unsupported("no split prime found for the extension modulus".into()))
}

#[allow(clippy::too_many_arguments)]
fn lift_combinations(
    field: &Field,
    s: &UniPoly,
    modulus: &[BigRational],
    coeff_coords: &[Vec<BigRational>],
    p: u64,
    rho: &[Scalar],
    root_sets: &[Vec<u64>],
) -> Result<Vec<Scalar>, PolyError> {
    let k = rho.len();
    let deg = s.degree().unwrap();
    let max_roots = root_sets.iter().map(|r| r.len()).min().unwrap();
    let mut found: Vec<Scalar> = Vec::new();
    let mut used: Vec<Vec<usize>> = Vec::new();
    let mut bits = 128u64;
    while bits <= 4096 && found.len() < max_roots.min(deg) {
        let mut n = 1u32;
        let mut m = BigInt::from(p);
        while m.bits() < bits {
            m *= p;
            n += 1;
        }
        let md = Modulus { m: m.clone() };
        let steps = lift_steps(n);
        let mod_ints: Vec<BigInt> = modulus.iter().map(|c| md.of_rational(c).unwrap()).collect();
        let lifted_rho: Vec<BigInt> = rho
            .iter()
            .map(|r| newton_lift(&md, &mod_ints, BigInt::from(residue(r)), steps).unwrap())
            .collect();
        // s in each embedding mod p^N and its lifted roots
        let mut lifted_roots: Vec<Vec<BigInt>> = Vec::with_capacity(k);
        for (j, rj) in lifted_rho.iter().enumerate() {
            let poly: Vec<BigInt> = coeff_coords
                .iter()
                .map(|cc| {
                    let vals: Vec<BigInt> = cc.iter().map(|c| md.of_rational(c).unwrap()).collect();
                    md.eval(&vals, rj)
                })
                .collect();
            let lr: Vec<BigInt> = root_sets[j]
                .iter()
                .map(|&r| newton_lift(&md, &poly, BigInt::from(r), steps).unwrap())
                .collect();
            lifted_roots.push(lr);
        }
        let vinv = vandermonde_inverse(&md, &lifted_rho);
        let mut idx = vec![0usize; k];
        'combos: loop {
            if !used.contains(&idx) {
                let vals: Vec<&BigInt> = (0..k).map(|j| &lifted_roots[j][idx[j]]).collect();
                let mut cand = Vec::with_capacity(k);
                let mut good = true;
                for row in &vinv {
                    let mut acc = BigInt::zero();
                    for (a, v) in row.iter().zip(&vals) {
                        acc += a * *v;
                    }
                    match rational_reconstruct(&md.red(&acc), &m) {
                        Some(q) => cand.push(Scalar::Rational(q)),
                        None => {
                            good = false;
                            break;
                        }
                    }
                }
                if good {
                    let base = field.base().unwrap();
                    let mut v = cand;
                    crate::coeff::dense::trim(base, &mut v);
                    let x = Scalar::Ext(v);
                    if field.is_zero(&s.eval(&x)) {
                        found.push(x);
                        used.push(idx.clone());
                    }
                }
            }
            // next combination
            let mut j = 0;
            loop {
                if j == k {
                    break 'combos;
                }
                idx[j] += 1;
                if idx[j] < lifted_roots[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
        bits *= 2;
    }
    Ok(found)
}

/// Inverse of `V[j][i] = ρ_j^i` modulo `M`.
fn vandermonde_inverse(md: &Modulus, rho: &[BigInt]) -> Vec<Vec<BigInt>> {
    let k = rho.len();
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut row = Vec::with_capacity(2 * k);
            let mut pw = BigInt::one();
            for _ in 0..k {
                row.push(pw.clone());
                pw = md.red(&(pw * &rho[j]));
            }
            for c in 0..k {
                row.push(if c == j { BigInt::one() } else { BigInt::zero() });
            }
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| md.inv(&a[r][col]).is_some()).expect("distinct roots mod p");
        a.swap(col, piv);
        let inv = md.inv(&a[col][col]).unwrap();
        for c in 0..2 * k {
            a[col][c] = md.red(&(&a[col][c] * &inv));
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * k {
                    let t = &factor * &a[col][c];
                    a[r][c] = md.red(&(&a[r][c] - t));
                }
            }
        }
    }
    a.into_iter().map(|row| row[k..].to_vec()).collect()
}
