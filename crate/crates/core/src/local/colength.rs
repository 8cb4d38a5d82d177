//! Colength of an ideal of germs at the origin by truncated linear algebra.
//!
//! `dim_N = dim O/(I + m^N)` is nondecreasing in `N`; once two consecutive
//! values agree, `m^N ⊂ I + m^{N+1}` and Nakayama gives `m^N ⊂ I`, so the
//! common value is the colength.

use crate::coeff::Field;
use crate::linalg::{self, SparseMatrix};
use crate::poly::AffineLocalPoly;

use super::LocalError;

fn index(e: &[u32; 2]) -> usize {
    let k = (e[0] + e[1]) as usize;
    k * (k + 1) / 2 + e[1] as usize
}

fn monomial_count(n: u32) -> usize {
    let n = n as usize;
    n * (n + 1) / 2
}

/// Matrix whose rows are the multiples `μ·g` truncated below degree `n`,
/// over the monomials of degree `< n`.
fn truncated_matrix(gens: &[AffineLocalPoly], n: u32) -> SparseMatrix {
    let mut m = SparseMatrix::new(monomial_count(n));
    for g in gens {
        let Some(ord) = g.order() else { continue };
        if ord >= n {
            continue;
        }
        let terms: Vec<([u32; 2], _)> = g
            .terms()
            .iter()
            .filter(|(e, _)| e[0] + e[1] < n)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        for k in 0..n - ord {
            for b in 0..=k {
                let mu = [k - b, b];
                let mut row: Vec<(usize, _)> = terms
                    .iter()
                    .filter(|(e, _)| e[0] + e[1] + k < n)
                    .map(|(e, c)| (index(&[e[0] + mu[0], e[1] + mu[1]]), c.clone()))
                    .collect();
                row.sort_by_key(|x| x.0);
                m.rows.push(row);
            }
        }
    }
    m
}

fn truncated_dim(field: &Field, gens: &[AffineLocalPoly], n: u32, exact: bool) -> Result<usize, LocalError> {
    let a = truncated_matrix(gens, n);
    let r = if exact {
        linalg::rank(field, &a)?
    } else {
        linalg::rank_lower_bound(field, &a)?
    };
    Ok(a.cols - r)
}

/// Default truncation cap `4·(sum of generator degrees) + 8`.
pub fn default_cap(gens: &[AffineLocalPoly]) -> u32 {
    4 * gens.iter().map(|g| g.total_degree().unwrap_or(0)).sum::<u32>() + 8
}

/// `dim O/(gens)` at the origin.
///
/// The scan runs on single-prime ranks, which can only overestimate the
/// truncated dimensions; the two dimensions at the first plateau are then
/// recomputed exactly. `dim_bound` is an a priori bound valid whenever the
/// colength is finite, used to stop early on non-isolated input.
pub fn colength_bounded(gens: &[AffineLocalPoly], cap: u32, dim_bound: Option<usize>) -> Result<usize, LocalError> {
    let Some(field) = gens.first().map(|g| g.field().clone()) else {
        return Err(LocalError::NotIsolated { cap });
    };
    if gens.iter().any(|g| !field.is_zero(&g.coeff(&[0, 0]))) {
        return Ok(0);
    }
    let gens: Vec<AffineLocalPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Err(LocalError::NotIsolated { cap });
    }
    let over = |d: usize| dim_bound.is_some_and(|b| d > b);
    let mut exact = false;
    let mut prev: Option<usize> = None;
    for n in 1..=cap {
        let mut d = truncated_dim(&field, &gens, n, exact)?;
        if !exact && over(d) {
            d = truncated_dim(&field, &gens, n, true)?;
            if over(d) {
                return Err(LocalError::NotIsolated { cap });
            }
            exact = true;
            prev = Some(d);
            continue;
        }
        if exact && over(d) {
            return Err(LocalError::NotIsolated { cap });
        }
        if prev == Some(d) {
            if exact {
                return Ok(d);
            }
            exact = true;
            let lo = truncated_dim(&field, &gens, n - 1, true)?;
            let hi = truncated_dim(&field, &gens, n, true)?;
            if lo == hi {
                return Ok(hi);
            }
            d = hi;
        }
        prev = Some(d);
    }
    Err(LocalError::NotIsolated { cap })
}

/// `dim O/(gens)` with the default cap.
pub fn colength(gens: &[AffineLocalPoly], cap: Option<u32>) -> Result<usize, LocalError> {
    colength_bounded(gens, cap.unwrap_or_else(|| default_cap(gens)), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::UV;

    fn germ(s: &str) -> AffineLocalPoly {
        parse_poly(s, &Field::rationals(), &UV).unwrap()
    }

    /// Colength of a monomial ideal by counting standard monomials.
    fn staircase(gens: &[[u32; 2]]) -> usize {
        let mut count = 0;
        for a in 0..64u32 {
            for b in 0..64u32 {
                if !gens.iter().any(|g| a >= g[0] && b >= g[1]) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn monomial_ideals() {
        assert_eq!(colength(&[germ("u"), germ("v")], None).unwrap(), 1);
        assert_eq!(colength(&[germ("u^2"), germ("v^3")], None).unwrap(), 6);
        let cases: [&[[u32; 2]]; 3] = [&[[3, 0], [1, 1], [0, 4]], &[[5, 0], [2, 2], [0, 3]], &[[1, 0], [0, 7]]];
        for c in cases {
            let gens: Vec<_> = c.iter().map(|e| AffineLocalPoly::monomial(&Field::rationals(), *e, Field::rationals().one())).collect();
            assert_eq!(colength(&gens, None).unwrap(), staircase(c));
        }
    }

    #[test]
    fn cusp_milnor_algebra() {
        let f = germ("u^2+v^3");
        assert_eq!(colength(&[f.derivative(0), f.derivative(1)], None).unwrap(), 2);
    }

    #[test]
    fn units_and_non_isolated() {
        assert_eq!(colength(&[germ("1+u"), germ("v")], None).unwrap(), 0);
        assert!(matches!(
            colength(&[germ("u*v"), germ("u^2")], Some(12)),
            Err(LocalError::NotIsolated { .. })
        ));
        assert!(matches!(
            colength_bounded(&[germ("u*v"), germ("u^2")], 40, Some(4)),
            Err(LocalError::NotIsolated { .. })
        ));
    }
}
