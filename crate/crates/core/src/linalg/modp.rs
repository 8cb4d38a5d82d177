//! Dense Gauss-Jordan elimination over a word-size prime field.

use crate::coeff::{inv_mod, mul_mod};

/// Reduced row echelon form of a dense matrix modulo `p`.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// Reduced rows; only the first `pivots.len()` are meaningful.
    pub rows: Vec<Vec<u64>>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical kernel basis: one vector per free column `f`, with a 1 at
    /// `f`, zeros at the other free columns and `-R[i][f]` at pivot `i`.
    /// Only the pivot entries are returned, as `entries[f_index][i]`.
    pub fn kernel_pivot_entries(&self, cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
        let free = self.free_columns(cols);
        let entries = free
            .iter()
            .map(|&f| {
                (0..self.rank())
                    .map(|i| {
                        let v = self.rows[i][f];
                        if v == 0 {
                            0
                        } else {
                            p - v
                        }
                    })
                    .collect()
            })
            .collect();
        (free, entries)
    }

    pub fn free_columns(&self, cols: usize) -> Vec<usize> {
        let mut is_pivot = vec![false; cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..cols).filter(|&c| !is_pivot[c]).collect()
    }
}

#[inline]
fn mulp(a: u64, b: u64, p: u64, small: bool) -> u64 {
    if small {
        a * b % p
    } else {
        mul_mod(a, b, p)
    }
}

/// Row reduction with the first nonzero entry of each column as pivot.
/// With `full` the result is fully reduced; otherwise only entries below
/// pivots are cleared (enough for the rank).
pub fn rref(mut a: Vec<Vec<u64>>, cols: usize, p: u64, full: bool) -> Rref {
    let small = p < (1 << 32);
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p).expect("nonzero residue");
        let nz: Vec<usize> = (c..cols).filter(|&j| a[r][j] != 0).collect();
        for &j in &nz {
            a[r][j] = mulp(a[r][j], inv, p, small);
        }
        let pivot_row = std::mem::take(&mut a[r]);
        let start = if full { 0 } else { r + 1 };
        for (i, row) in a.iter_mut().enumerate().skip(start) {
            if i == r {
                continue;
            }
            let f = row[c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for &j in &nz {
                let t = mulp(nf, pivot_row[j], p, small);
                let s = row[j] + t;
                row[j] = if s >= p { s - p } else { s };
            }
        }
        a[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    Rref { pivots, rows: a }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rank_and_kernel() {
        let p = 101;
        // rows: (1 2 3), (2 4 6), (1 0 1)
        let a = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        let r = rref(a, 3, p, true);
        assert_eq!(r.pivots, vec![0, 1]);
        let (free, k) = r.kernel_pivot_entries(3, p);
        assert_eq!(free, vec![2]);
        // kernel vector (-1, -1, 1)
        assert_eq!(k[0], vec![p - 1, p - 1]);
    }

    #[test]
    fn large_prime_path() {
        let p = (1u64 << 61) - 1;
        let a = vec![vec![p - 1, 1], vec![1, p - 1]];
        assert_eq!(rref(a, 2, p, false).rank(), 1);
    }
}
