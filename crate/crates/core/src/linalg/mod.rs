//! Exact linear algebra over the coefficient fields.
//!
//! Prime fields are handled directly by word-size elimination. Over Q and a
//! single extension of Q ranks and kernels are computed from modular
//! images and certified (see [`multimodular`]). Everything else falls back
//! to Gauss-Jordan elimination with exact field operations.

pub mod modp;
mod multimodular;

use crate::coeff::{CoeffError, Field, Scalar};

/// Matrix stored as sparse rows of `(column, nonzero value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_dense(field: &Field, rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            cols,
            rows: rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, s)| !field.is_zero(s))
                        .map(|(j, s)| (j, s.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, s) in row {
                rows[*j].push((i, s.clone()));
            }
        }
        SparseMatrix {
            cols: self.rows.len(),
            rows,
        }
    }

    fn to_dense(&self, field: &Field) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![field.zero(); self.cols];
                for (j, s) in row {
                    d[*j] = s.clone();
                }
                d
            })
            .collect()
    }

    fn all_in_base(&self, field: &Field) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().all(|(_, s)| field.as_base(s).is_some()))
    }

    fn descend(&self, field: &Field) -> SparseMatrix {
        SparseMatrix {
            cols: self.cols,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(j, s)| (*j, field.as_base(s).unwrap())).collect())
                .collect(),
        }
    }

    /// `A v`.
    pub fn apply(&self, field: &Field, v: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|row| {
                let mut s = field.zero();
                for (j, a) in row {
                    s = field.add(&s, &field.mul(a, &v[*j]));
                }
                s
            })
            .collect()
    }
}

fn residues(a: &SparseMatrix) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; a.cols]; a.rows.len()];
    for (i, row) in a.rows.iter().enumerate() {
        for (j, s) in row {
            if let Scalar::Residue(r) = s {
                out[i][*j] = *r;
            }
        }
    }
    out
}

/// Exact rank.
pub fn rank(field: &Field, a: &SparseMatrix) -> Result<usize, CoeffError> {
    if a.rows.is_empty() || a.cols == 0 {
        return Ok(0);
    }
    if let Some(p) = field.prime_modulus() {
        return Ok(modp::rref(residues(a), a.cols, p, false).rank());
    }
    if let Some(base) = field.base() {
        if a.all_in_base(field) {
            return rank(base, &a.descend(field));
        }
    }
    if let Some(engine) = multimodular::Engine::new(field) {
        // reconstruct whichever kernel is smaller
        let r0 = engine.rank_lower_bound(a);
        let b = if a.cols - r0 <= a.rows.len() - r0 {
            a.clone()
        } else {
            a.transpose()
        };
        if let Ok(res) = engine.kernel(&b, false) {
            return Ok(res.rank);
        }
    }
    Ok(generic_rref(field, a.to_dense(field))?.0.len())
}

/// A lower bound on the rank from one modular image; exact over prime fields
/// and for fields without a modular route.
pub fn rank_lower_bound(field: &Field, a: &SparseMatrix) -> Result<usize, CoeffError> {
    if a.rows.is_empty() || a.cols == 0 {
        return Ok(0);
    }
    if field.prime_modulus().is_some() {
        return rank(field, a);
    }
    if let Some(base) = field.base() {
        if a.all_in_base(field) {
            return rank_lower_bound(base, &a.descend(field));
        }
    }
    match multimodular::Engine::new(field) {
        Some(engine) => Ok(engine.rank_lower_bound(a)),
        None => rank(field, a),
    }
}

/// Basis of the right kernel `{v : A v = 0}`, in the canonical reduced form
/// (one vector per non-pivot column, with a 1 there and 0 at the other
/// non-pivot columns).
pub fn nullspace(field: &Field, a: &SparseMatrix) -> Result<Vec<Vec<Scalar>>, CoeffError> {
    if a.cols == 0 {
        return Ok(Vec::new());
    }
    if a.rows.is_empty() {
        return Ok((0..a.cols)
            .map(|j| {
                let mut v = vec![field.zero(); a.cols];
                v[j] = field.one();
                v
            })
            .collect());
    }
    if let Some(p) = field.prime_modulus() {
        let r = modp::rref(residues(a), a.cols, p, true);
        let (free, entries) = r.kernel_pivot_entries(a.cols, p);
        return Ok(free
            .iter()
            .zip(entries)
            .map(|(&f, e)| {
                let mut v = vec![Scalar::Residue(0); a.cols];
                v[f] = Scalar::Residue(1);
                for (i, &pc) in r.pivots.iter().enumerate() {
                    v[pc] = Scalar::Residue(e[i]);
                }
                v
            })
            .collect());
    }
    if let Some(base) = field.base() {
        if a.all_in_base(field) {
            let basis = nullspace(base, &a.descend(field))?;
            return Ok(basis
                .into_iter()
                .map(|v| v.into_iter().map(|s| field.lift(s)).collect())
                .collect());
        }
    }
    if let Some(engine) = multimodular::Engine::new(field) {
        if let Ok(multimodular::KernelResult {
            basis: Some(basis), ..
        }) = engine.kernel(a, true)
        {
            return Ok(basis);
        }
    }
    let (pivots, rows) = generic_rref(field, a.to_dense(field))?;
    let mut is_pivot = vec![false; a.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    Ok((0..a.cols)
        .filter(|&c| !is_pivot[c])
        .map(|f| {
            let mut v = vec![field.zero(); a.cols];
            v[f] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&rows[i][f]);
            }
            v
        })
        .collect())
}

/// Gauss-Jordan elimination with exact field operations.
pub fn generic_rref(field: &Field, mut a: Vec<Vec<Scalar>>) -> Result<(Vec<usize>, Vec<Vec<Scalar>>), CoeffError> {
    let nrows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !field.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, piv);
        let inv = field.inv(&a[r][c])?;
        for j in c..cols {
            a[r][j] = field.mul(&a[r][j], &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !field.is_zero(&pivot_row[j]) {
                    row[j] = field.sub(&row[j], &field.mul(&f, &pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((pivots, a))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(field: &Field, mut a: Vec<Vec<Scalar>>) -> Result<Scalar, CoeffError> {
    let n = a.len();
    if n == 0 {
        return Ok(field.one());
    }
    let mut sign_negative = false;
    let mut prev = field.one();
    for k in 0..n - 1 {
        if field.is_zero(&a[k][k]) {
            match (k + 1..n).find(|&i| !field.is_zero(&a[i][k])) {
                Some(i) => {
                    a.swap(k, i);
                    sign_negative = !sign_negative;
                }
                None => return Ok(field.zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = field.sub(&field.mul(&a[k][k], &a[i][j]), &field.mul(&a[i][k], &a[k][j]));
                a[i][j] = field.div(&t, &prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_negative { field.neg(&d) } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int_matrix(f: &Field, rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect()
    }

    #[test]
    fn bareiss_determinant() {
        let q = Field::rationals();
        let a = int_matrix(&q, &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(det(&q, a).unwrap(), q.from_i64(4));
        let b = int_matrix(&q, &[&[0, 1], &[1, 0]]);
        assert_eq!(det(&q, b).unwrap(), q.from_i64(-1));
        let c = int_matrix(&q, &[&[1, 2], &[2, 4]]);
        assert_eq!(det(&q, c).unwrap(), q.zero());
    }

    /// Rank from the multimodular route against plain exact elimination.
    #[test]
    fn certified_rank_matches_exact_elimination() {
        let q = Field::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..30 {
            let rows = rng.gen_range(1..12);
            let cols = rng.gen_range(1..12);
            let true_rank = rng.gen_range(0..=rows.min(cols));
            // product of random rows x cols factors of inner dimension true_rank
            let left: Vec<Vec<i64>> = (0..rows).map(|_| (0..true_rank).map(|_| rng.gen_range(-50..50)).collect()).collect();
            let right: Vec<Vec<i64>> = (0..true_rank).map(|_| (0..cols).map(|_| rng.gen_range(-50..50)).collect()).collect();
            let dense: Vec<Vec<Scalar>> = (0..rows)
                .map(|i| {
                    (0..cols)
                        .map(|j| {
                            let v: i64 = (0..true_rank).map(|t| left[i][t] * right[t][j]).sum();
                            q.from_i64(v * (1 + trial % 3))
                        })
                        .collect()
                })
                .collect();
            let m = SparseMatrix::from_dense(&q, &dense);
            let exact = generic_rref(&q, dense.clone()).unwrap().0.len();
            assert_eq!(rank(&q, &m).unwrap(), exact);
            let ns = nullspace(&q, &m).unwrap();
            assert_eq!(ns.len(), cols - exact);
            for v in &ns {
                assert!(m.apply(&q, v).iter().all(|s| q.is_zero(s)));
            }
        }
    }

    #[test]
    fn gaussian_field_rank_and_kernel() {
        let g = FieldConfig::gaussian().build().unwrap();
        let i = g.generator().unwrap();
        let one = g.one();
        // rows (1, i), (i, -1) are dependent
        let dense = vec![vec![one.clone(), i.clone()], vec![i.clone(), g.neg(&one)]];
        let m = SparseMatrix::from_dense(&g, &dense);
        assert_eq!(rank(&g, &m).unwrap(), 1);
        let ns = nullspace(&g, &m).unwrap();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![g.neg(&i), one]);
    }

    #[test]
    fn prime_field_kernel() {
        let f = Field::prime(7).unwrap();
        let dense = int_matrix(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let m = SparseMatrix::from_dense(&f, &dense);
        assert_eq!(rank(&f, &m).unwrap(), 1);
        assert_eq!(nullspace(&f, &m).unwrap().len(), 2);
    }
}
