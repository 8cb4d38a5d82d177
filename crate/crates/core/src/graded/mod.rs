//! Graded linear algebra over `S = k[x,y,z]`: Jacobian syzygies, the
//! minimal degree of a syzygy, the Hilbert function of the Milnor algebra
//! and the global Tjurina number.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::coeff::{CoeffError, Field};
use crate::linalg::{self, SparseMatrix};
use crate::poly::{monomials_of_degree, HomogPoly, Poly, PolyError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GradedError {
    #[error("Milnor algebra dimensions did not stabilize up to degree {max_degree}")]
    NoStabilization { max_degree: u32 },
    #[error("syzygy degrees {d1} + {d2} do not add up to {expected}")]
    DegreeMismatch { d1: u32, d2: u32, expected: u32 },
    #[error("the curve has degree 0")]
    ConstantCurve,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// `(a, b, c)` of degree `r` with `a F_x + b F_y + c F_z = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyVector {
    pub degree: u32,
    pub comps: [HomogPoly; 3],
}

impl SyzygyVector {
    pub fn new(degree: u32, comps: [HomogPoly; 3]) -> Self {
        SyzygyVector { degree, comps }
    }

    /// Exact membership in `D₀(F)`.
    pub fn annihilates(&self, f: &HomogPoly) -> bool {
        let parts = f.partials();
        let mut acc = Poly::zero(f.field());
        for (c, p) in self.comps.iter().zip(parts.iter()) {
            acc = acc.add(&c.poly().mul(p.poly()));
        }
        acc.is_zero()
    }

    pub fn to_text(&self) -> [String; 3] {
        self.comps.clone().map(|c| c.to_text())
    }
}

fn monomial_index(k: u32) -> (Vec<[u32; 3]>, HashMap<[u32; 3], usize>) {
    let mons = monomials_of_degree::<3>(k);
    let idx = mons.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    (mons, idx)
}

/// Matrix of `(a,b,c) ↦ a F_x + b F_y + c F_z` on degree-`r` triples:
/// one row per monomial of degree `r + d − 1`, one column per unknown.
fn syzygy_matrix(f: &HomogPoly, r: u32) -> (SparseMatrix, Vec<[u32; 3]>) {
    let d = f.degree();
    let (src, _) = monomial_index(r);
    let (_, tgt) = monomial_index(r + d - 1);
    let parts = f.partials();
    let n = src.len();
    let mut rows: Vec<Vec<(usize, _)>> = vec![Vec::new(); tgt.len()];
    for (i, p) in parts.iter().enumerate() {
        for (j, m) in src.iter().enumerate() {
            for (e, c) in p.poly().terms() {
                let t = [e[0] + m[0], e[1] + m[1], e[2] + m[2]];
                rows[tgt[&t]].push((i * n + j, c.clone()));
            }
        }
    }
    let mut a = SparseMatrix::new(3 * n);
    a.rows = rows;
    (a, src)
}

/// Basis of `D₀(F)_r`.
pub fn syzygy_space(f: &HomogPoly, r: u32) -> Result<Vec<SyzygyVector>, GradedError> {
    if f.degree() == 0 {
        return Err(GradedError::ConstantCurve);
    }
    let field = f.field();
    let (a, src) = syzygy_matrix(f, r);
    let n = src.len();
    let basis = linalg::nullspace(field, &a)?;
    basis
        .into_iter()
        .map(|v| {
            let comp = |i: usize| -> Result<HomogPoly, GradedError> {
                let p = Poly::from_terms(field, src.iter().enumerate().map(|(j, m)| (*m, v[i * n + j].clone())));
                Ok(HomogPoly::new(p)?)
            };
            Ok(SyzygyVector::new(r, [comp(0)?, comp(1)?, comp(2)?]))
        })
        .collect()
}

/// `dim D₀(F)_r`.
pub fn syzygy_dimension(f: &HomogPoly, r: u32) -> Result<usize, GradedError> {
    let (a, _) = syzygy_matrix(f, r);
    Ok(a.cols - linalg::rank(f.field(), &a)?)
}

/// Least `r` with `D₀(F)_r ≠ 0`; at most `d − 1` because of the Koszul
/// syzygies.
pub fn mdr(f: &HomogPoly) -> Result<u32, GradedError> {
    let d = f.degree();
    if d == 0 {
        return Err(GradedError::ConstantCurve);
    }
    for r in 0..d - 1 {
        let (a, _) = syzygy_matrix(f, r);
        if a.cols > a.nrows() {
            return Ok(r);
        }
        // a single-prime rank that is full is already certified
        let lb = linalg::rank_lower_bound(f.field(), &a)?;
        if lb == a.cols {
            continue;
        }
        if linalg::rank(f.field(), &a)? < a.cols {
            return Ok(r);
        }
    }
    Ok(d - 1)
}

/// Matrix of the multiples `m·F_i` of degree `k`, rows indexed by the
/// multiples and columns by the monomials of degree `k`.
fn jacobian_matrix(f: &HomogPoly, k: u32) -> SparseMatrix {
    let d = f.degree();
    let (_, tgt) = monomial_index(k);
    let mut a = SparseMatrix::new(tgt.len());
    if k + 1 < d {
        return a;
    }
    let (src, _) = monomial_index(k + 1 - d);
    for p in f.partials().iter() {
        for m in &src {
            let mut row: Vec<(usize, _)> = p
                .poly()
                .terms()
                .iter()
                .map(|(e, c)| (tgt[&[e[0] + m[0], e[1] + m[1], e[2] + m[2]]], c.clone()))
                .collect();
            if row.is_empty() {
                continue;
            }
            row.sort_by_key(|x| x.0);
            a.rows.push(row);
        }
    }
    a
}

/// `dim M(F)_k = dim S_k − dim (J_F)_k`.
pub fn milnor_hilbert(f: &HomogPoly, k: u32) -> Result<usize, GradedError> {
    let a = jacobian_matrix(f, k);
    Ok(a.cols - linalg::rank(f.field(), &a)?)
}

fn milnor_hilbert_upper(f: &HomogPoly, k: u32) -> Result<usize, GradedError> {
    let a = jacobian_matrix(f, k);
    Ok(a.cols - linalg::rank_lower_bound(f.field(), &a)?)
}

/// Computed window of the Milnor algebra Hilbert function.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MilnorProfile {
    /// `(k, dim M(F)_k)`; entries are exact except where marked in `estimated`.
    pub window: Vec<(u32, usize)>,
    /// Degrees whose value was only bounded from above by a single prime.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub estimated: Vec<u32>,
    pub stabilized_value: Option<usize>,
}

/// Scans `dim M(F)_k` from `k = 3d − 6` until two consecutive degrees
/// agree, giving up past `6d`. The scan uses single-prime ranks and the
/// two values at the plateau are recomputed exactly.
pub fn milnor_profile(f: &HomogPoly) -> Result<MilnorProfile, GradedError> {
    let d = f.degree();
    if d == 0 {
        return Err(GradedError::ConstantCurve);
    }
    let start = (3 * d).saturating_sub(6);
    let max_degree = 6 * d;
    let mut window: Vec<(u32, usize)> = Vec::new();
    let mut estimated = Vec::new();
    let mut exact = false;
    for k in start..=max_degree {
        let v = if exact { milnor_hilbert(f, k)? } else { milnor_hilbert_upper(f, k)? };
        if !exact {
            estimated.push(k);
        }
        if let Some(&(_, prev)) = window.last() {
            if prev == v {
                if exact {
                    window.push((k, v));
                    return Ok(MilnorProfile {
                        window,
                        estimated,
                        stabilized_value: Some(v),
                    });
                }
                exact = true;
                let lo = milnor_hilbert(f, k - 1)?;
                let hi = milnor_hilbert(f, k)?;
                estimated.retain(|&e| e < k - 1);
                window.pop();
                window.push((k - 1, lo));
                window.push((k, hi));
                if lo == hi {
                    return Ok(MilnorProfile {
                        window,
                        estimated,
                        stabilized_value: Some(hi),
                    });
                }
                continue;
            }
        }
        window.push((k, v));
    }
    Err(GradedError::NoStabilization { max_degree })
}

/// Total Tjurina number `τ(C)`.
pub fn global_tjurina(f: &HomogPoly) -> Result<usize, GradedError> {
    let p = milnor_profile(f)?;
    Ok(p.stabilized_value.expect("profile returns only when stabilized"))
}

/// Checks `det[(x,y,z); ρ1; ρ2] = c·F` with `c ≠ 0`, after verifying that
/// both vectors are syzygies. A true result certifies that `F` is free with
/// exponents `(deg ρ1, deg ρ2)`.
pub fn saito_certificate(f: &HomogPoly, r1: &SyzygyVector, r2: &SyzygyVector) -> Result<bool, GradedError> {
    let d = f.degree();
    if d == 0 || r1.degree + r2.degree + 1 != d {
        return Err(GradedError::DegreeMismatch {
            d1: r1.degree,
            d2: r2.degree,
            expected: d.saturating_sub(1),
        });
    }
    if !r1.annihilates(f) || !r2.annihilates(f) {
        return Ok(false);
    }
    let det = saito_determinant(f.field(), r1, r2);
    Ok(is_nonzero_multiple(&det, f.poly()))
}

/// `det[(x,y,z); ρ1; ρ2]`.
pub fn saito_determinant(field: &Field, r1: &SyzygyVector, r2: &SyzygyVector) -> Poly<3> {
    let [a1, b1, c1] = r1.comps.clone().map(|c| c.poly().clone());
    let [a2, b2, c2] = r2.comps.clone().map(|c| c.poly().clone());
    let x = Poly::var(field, 0);
    let y = Poly::var(field, 1);
    let z = Poly::var(field, 2);
    let m0 = b1.mul(&c2).sub(&c1.mul(&b2));
    let m1 = a1.mul(&c2).sub(&c1.mul(&a2));
    let m2 = a1.mul(&b2).sub(&b1.mul(&a2));
    x.mul(&m0).sub(&y.mul(&m1)).add(&z.mul(&m2))
}

fn is_nonzero_multiple(p: &Poly<3>, f: &Poly<3>) -> bool {
    let field = f.field();
    let Some((e, fc)) = f.terms().iter().next() else {
        return false;
    };
    let pc = p.coeff(e);
    if field.is_zero(&pc) {
        return false;
    }
    let Ok(c) = field.div(&pc, fc) else {
        return false;
    };
    p.sub(&f.scale(&c)).is_zero()
}

/// Searches pairs of basis syzygies in degrees `r` and `d − 1 − r` for a
/// Saito certificate.
pub fn find_saito_pair(f: &HomogPoly, r: u32) -> Result<Option<(SyzygyVector, SyzygyVector)>, GradedError> {
    let d = f.degree();
    if r + 1 > d {
        return Ok(None);
    }
    let r2 = d - 1 - r;
    let b1 = syzygy_space(f, r)?;
    let b2 = if r2 == r { b1.clone() } else { syzygy_space(f, r2)? };
    for (i, u) in b1.iter().enumerate() {
        for (j, v) in b2.iter().enumerate() {
            if r2 == r && j <= i {
                continue;
            }
            if saito_certificate(f, u, v)? {
                return Ok(Some((u.clone(), v.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_homog;

    fn q() -> Field {
        Field::rationals()
    }

    fn h(s: &str) -> HomogPoly {
        parse_homog(s, &q()).unwrap()
    }

    #[test]
    fn fermat_cubic_has_only_koszul_syzygies() {
        let f = h("x^3+y^3+z^3");
        assert!(syzygy_space(&f, 1).unwrap().is_empty());
        assert_eq!(mdr(&f).unwrap(), 2);
        assert_eq!(syzygy_space(&f, 2).unwrap().len(), 3);
    }

    #[test]
    fn syzygies_annihilate() {
        let f = h("x^2*y^2+y^2*z^2+x^2*z^2");
        let basis = syzygy_space(&f, 3).unwrap();
        assert!(!basis.is_empty());
        assert!(basis.iter().all(|s| s.annihilates(&f)));
    }

    #[test]
    fn pencil_of_lines_has_constant_syzygy() {
        // F_z = 0, so (0,0,1) is a syzygy of degree 0
        assert_eq!(mdr(&h("x^2+y^2")).unwrap(), 0);
        assert_eq!(mdr(&h("x*y*(x-y)")).unwrap(), 0);
    }

    #[test]
    fn smooth_milnor_algebra() {
        for d in [3u32, 4] {
            let f = h(&format!("x^{d}+y^{d}+z^{d}"));
            let s = 3 * (d - 2);
            assert_eq!(milnor_hilbert(&f, s).unwrap(), 1);
            assert_eq!(milnor_hilbert(&f, s + 1).unwrap(), 0);
            assert_eq!(global_tjurina(&f).unwrap(), 0);
        }
    }

    #[test]
    fn tjurina_of_small_curves() {
        assert_eq!(global_tjurina(&h("x*y*z+x^3+y^3")).unwrap(), 1);
        assert_eq!(global_tjurina(&h("x^2*z+y^3")).unwrap(), 2);
        // three concurrent lines plus a transversal: one ordinary triple point and three nodes
        assert_eq!(global_tjurina(&h("x*y*(x-y)*z")).unwrap(), 4 + 3);
    }

    #[test]
    fn saito_on_a_free_arrangement() {
        // xyz(x-y): exponents (1, 2)
        let f = h("x*y*z*(x-y)");
        assert_eq!(mdr(&f).unwrap(), 1);
        let pair = find_saito_pair(&f, 1).unwrap();
        assert!(pair.is_some());
        let (r1, _) = pair.unwrap();
        assert!(matches!(
            saito_certificate(&f, &r1, &r1),
            Err(GradedError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn dependent_syzygies_fail() {
        let f = h("x*y*z");
        let b = syzygy_space(&f, 1).unwrap();
        assert_eq!(b.len(), 2);
        let double = SyzygyVector::new(1, b[0].comps.clone().map(|c| c.scale(&q().from_i64(2))));
        assert!(!saito_certificate(&f, &b[0], &double).unwrap());
        assert!(saito_certificate(&f, &b[0], &b[1]).unwrap());
    }
}
