//! Certified ranks and kernels over Q and over one extension Q(α) from
//! images modulo word-size primes.
//!
//! Any modular image gives a lower bound on the rank. The matching upper
//! bound comes from one of two certificates:
//!
//! * the canonical kernel basis is rebuilt from its images by CRT and
//!   rational reconstruction, then checked exactly against the matrix;
//! * over Q only, the product of the primes used exceeds the Hadamard
//!   bound for every `(r+1)`-minor of the integer-scaled matrix, so all of
//!   those minors vanish.
//!
//! For Q(α) a prime is usable when the modulus of α splits into distinct
//! linear factors mod p; each root gives one image and the coordinates in
//! the power basis of α are recovered with the inverse Vandermonde matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::modp::{rref, Rref};
use super::SparseMatrix;
use crate::coeff::{dense, inv_mod, mul_mod, prev_prime, CoeffError, Field, Scalar};
use crate::poly::roots::rational_reconstruct;
use crate::poly::{roots, UniPoly};

/// Primes used before giving up on the modular route.
const MAX_PRIMES: usize = 600;

pub(crate) struct Engine<'a> {
    field: &'a Field,
    /// Degree of α over Q (1 for Q itself).
    k: usize,
    /// Modulus of α as rationals, lowest degree first (empty for Q).
    modulus: Vec<BigRational>,
}

/// Per-prime data: the prime and the images of α (empty over Q).
#[derive(Clone)]
struct PrimeData {
    p: u64,
    roots: Vec<u64>,
}

pub(crate) struct KernelResult {
    pub rank: usize,
    /// Kernel basis of the matrix, present when reconstruction succeeded.
    pub basis: Option<Vec<Vec<Scalar>>>,
}

fn residue_of_rational(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64()?;
    let inv = inv_mod(d, p)?;
    let n = q.numer().mod_floor(&pb).to_u64()?;
    Some(mul_mod(n, inv, p))
}

impl<'a> Engine<'a> {
    /// Engine for Q or a one-level extension of Q; `None` otherwise.
    pub fn new(field: &'a Field) -> Option<Engine<'a>> {
        if field.characteristic() != 0 {
            return None;
        }
        match field.extension_levels() {
            0 => Some(Engine {
                field,
                k: 1,
                modulus: Vec::new(),
            }),
            1 => {
                let base = field.base().unwrap();
                let modulus: Vec<BigRational> = field
                    .modulus()
                    .unwrap()
                    .iter()
                    .map(|c| base.as_rational(c).unwrap())
                    .collect();
                Some(Engine {
                    field,
                    k: modulus.len() - 1,
                    modulus,
                })
            }
            _ => None,
        }
    }

    fn primes(&self) -> impl Iterator<Item = PrimeData> + '_ {
        let mut p = (1u64 << 31) - 1;
        std::iter::from_fn(move || {
            loop {
                p = prev_prime(p - 1);
                if p < (1 << 20) {
                    return None;
                }
                if self.k == 1 && self.modulus.is_empty() {
                    return Some(PrimeData { p, roots: Vec::new() });
                }
                let Some(m) = self
                    .modulus
                    .iter()
                    .map(|c| residue_of_rational(c, p))
                    .collect::<Option<Vec<u64>>>()
                else {
                    continue;
                };
                let fp = Field::prime(p).expect("prime");
                let poly = UniPoly::new(&fp, m.into_iter().map(Scalar::Residue).collect());
                let Ok(rs) = roots(&poly) else { continue };
                if rs.len() == self.k && rs.iter().all(|(_, mult)| *mult == 1) {
                    let roots = rs
                        .into_iter()
                        .map(|(r, _)| match r {
                            Scalar::Residue(v) => v,
                            _ => unreachable!(),
                        })
                        .collect();
                    return Some(PrimeData { p, roots });
                }
            }
        })
    }

    /// Residue images of a scalar, one per embedding.
    fn reduce(&self, s: &Scalar, pd: &PrimeData) -> Option<Vec<u64>> {
        match s {
            Scalar::Rational(q) => Some(vec![residue_of_rational(q, pd.p)?]),
            Scalar::Ext(v) => {
                let base = self.field.base().unwrap();
                let coords: Vec<u64> = v
                    .iter()
                    .map(|c| residue_of_rational(&base.as_rational(c).unwrap(), pd.p))
                    .collect::<Option<_>>()?;
                Some(
                    pd.roots
                        .iter()
                        .map(|&r| {
                            let mut acc = 0u64;
                            for c in coords.iter().rev() {
                                acc = (mul_mod(acc, r, pd.p) + c) % pd.p;
                            }
                            acc
                        })
                        .collect(),
                )
            }
            Scalar::Residue(_) => None,
        }
    }

    /// Dense images of the matrix, one per embedding.
    fn images(&self, a: &SparseMatrix, pd: &PrimeData) -> Option<Vec<Vec<Vec<u64>>>> {
        let k = self.k;
        let mut out = vec![vec![vec![0u64; a.cols]; a.rows.len()]; k];
        for (i, row) in a.rows.iter().enumerate() {
            for (j, s) in row {
                let r = self.reduce(s, pd)?;
                for (t, v) in r.into_iter().enumerate() {
                    out[t][i][*j] = v;
                }
            }
        }
        Some(out)
    }

    /// Rank of a single modular image: a lower bound on the true rank.
    pub fn rank_lower_bound(&self, a: &SparseMatrix) -> usize {
        for pd in self.primes() {
            if let Some(img) = self.images(a, &pd) {
                return rref(img.into_iter().next().unwrap(), a.cols, pd.p, false).rank();
            }
        }
        0
    }

    /// Inverse Vandermonde matrix `V[j][i] = ρ_j^i` modulo p.
    fn vandermonde_inverse(&self, pd: &PrimeData) -> Vec<Vec<u64>> {
        let k = self.k;
        let p = pd.p;
        if pd.roots.is_empty() {
            return vec![vec![1]];
        }
        let mut rows: Vec<Vec<u64>> = (0..k)
            .map(|j| {
                let mut row = Vec::with_capacity(2 * k);
                let mut pw = 1u64;
                for _ in 0..k {
                    row.push(pw);
                    pw = mul_mod(pw, pd.roots[j], p);
                }
                row.extend((0..k).map(|c| u64::from(c == j)));
                row
            })
            .collect();
        let red = rref(std::mem::take(&mut rows), 2 * k, p, true);
        red.rows.into_iter().map(|r| r[k..].to_vec()).collect()
    }

    /// Modular computation for one prime: pivots and kernel coordinates in
    /// the power basis of α (`entries[f][i][t]`).
    fn per_prime(&self, b: &SparseMatrix, pd: &PrimeData) -> Option<(Vec<usize>, Vec<Vec<Vec<u64>>>)> {
        let imgs = self.images(b, pd)?;
        let reds: Vec<Rref> = imgs.into_iter().map(|m| rref(m, b.cols, pd.p, true)).collect();
        let pivots = reds[0].pivots.clone();
        if reds.iter().any(|r| r.pivots != pivots) {
            return None;
        }
        let per_image: Vec<Vec<Vec<u64>>> = reds.iter().map(|r| r.kernel_pivot_entries(b.cols, pd.p).1).collect();
        let vinv = self.vandermonde_inverse(pd);
        let nfree = per_image[0].len();
        let rank = pivots.len();
        let p = pd.p;
        let mut entries = vec![vec![vec![0u64; self.k]; rank]; nfree];
        for f in 0..nfree {
            for i in 0..rank {
                for t in 0..self.k {
                    let mut acc = 0u64;
                    for j in 0..self.k {
                        acc = (acc + mul_mod(vinv[t][j], per_image[j][f][i], p)) % p;
                    }
                    entries[f][i][t] = acc;
                }
            }
        }
        Some((pivots, entries))
    }

    fn scalar_from_coords(&self, coords: Vec<BigRational>) -> Scalar {
        if self.modulus.is_empty() {
            return Scalar::Rational(coords.into_iter().next().unwrap());
        }
        let base = self.field.base().unwrap();
        let mut v: Vec<Scalar> = coords.into_iter().map(Scalar::Rational).collect();
        dense::trim(base, &mut v);
        Scalar::Ext(v)
    }

    /// Squared Hadamard bound for any `(r+1)`-minor of the row-scaled
    /// integer matrix.
    fn hadamard_squared(&self, b: &SparseMatrix, r: usize) -> Option<BigInt> {
        if !self.modulus.is_empty() {
            return None;
        }
        let mut norms = vec![BigInt::zero(); b.cols];
        for row in &b.rows {
            let den = row.iter().fold(BigInt::one(), |acc, (_, s)| match s {
                Scalar::Rational(q) => acc.lcm(q.denom()),
                _ => acc,
            });
            for (j, s) in row {
                if let Scalar::Rational(q) = s {
                    let v = (q * &den).to_integer();
                    norms[*j] += &v * &v;
                }
            }
        }
        norms.sort_by(|a, b| b.cmp(a));
        Some(norms.into_iter().take(r + 1).fold(BigInt::one(), |acc, n| acc * n.max(BigInt::one())))
    }

    /// Certified rank of `b`, with its kernel basis when `want_kernel`.
    pub fn kernel(&self, b: &SparseMatrix, want_kernel: bool) -> Result<KernelResult, CoeffError> {
        let threads = rayon::current_num_threads().clamp(1, 8);
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut acc: Vec<Vec<Vec<BigInt>>> = Vec::new();
        let mut modulus = BigInt::one();
        let mut all_primes = BigInt::one();
        let mut since_attempt = 0usize;
        let mut next_attempt = 1usize;
        let mut used = 0usize;
        let mut hadamard: Option<(usize, Option<BigInt>)> = None;
        let mut primes = self.primes();
        while used < MAX_PRIMES {
            let batch: Vec<PrimeData> = primes.by_ref().take(threads).collect();
            if batch.is_empty() {
                break;
            }
            let results: Vec<(u64, Option<(Vec<usize>, Vec<Vec<Vec<u64>>>)>)> =
                batch.par_iter().map(|pd| (pd.p, self.per_prime(b, pd))).collect();
            for (p, res) in results {
                used += 1;
                let Some((pivots, entries)) = res else { continue };
                all_primes *= p;
                let key = (pivots.len(), pivots);
                let better = match &best {
                    None => true,
                    Some((r, piv)) => key.0 > *r || (key.0 == *r && key.1 < *piv),
                };
                if better {
                    best = Some(key.clone());
                    modulus = BigInt::from(p);
                    acc = entries
                        .iter()
                        .map(|f| f.iter().map(|e| e.iter().map(|&v| BigInt::from(v)).collect()).collect())
                        .collect();
                    since_attempt = 0;
                    next_attempt = 1;
                } else if key == *best.as_ref().unwrap() {
                    crt_accumulate(&mut acc, &modulus, &entries, p);
                    modulus *= p;
                } else {
                    continue;
                }
                since_attempt += 1;
                let (rank, pivots) = best.clone().unwrap();
                if rank == b.cols || acc.is_empty() {
                    // full column rank: trivial kernel
                    return Ok(KernelResult {
                        rank,
                        basis: Some(Vec::new()),
                    });
                }
                if !want_kernel {
                    if hadamard.as_ref().map(|h| h.0) != Some(rank) {
                        hadamard = Some((rank, self.hadamard_squared(b, rank)));
                    }
                    if let Some((_, Some(h2))) = &hadamard {
                        if &all_primes * &all_primes > *h2 {
                            return Ok(KernelResult { rank, basis: None });
                        }
                    }
                }
                if since_attempt >= next_attempt {
                    since_attempt = 0;
                    next_attempt = (next_attempt * 3).div_ceil(2);
                    if let Some(basis) = self.try_reconstruct(b, &pivots, &acc, &modulus) {
                        return Ok(KernelResult {
                            rank,
                            basis: Some(basis),
                        });
                    }
                }
            }
        }
        Err(CoeffError::Parse("multimodular reconstruction did not converge".into()))
    }

    fn try_reconstruct(
        &self,
        b: &SparseMatrix,
        pivots: &[usize],
        acc: &[Vec<Vec<BigInt>>],
        modulus: &BigInt,
    ) -> Option<Vec<Vec<Scalar>>> {
        let zero = self.field.zero();
        let one = self.field.one();
        let mut is_pivot = vec![false; b.cols];
        for &c in pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..b.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Vec::with_capacity(free.len());
        for (fi, &f) in free.iter().enumerate() {
            let mut v = vec![zero.clone(); b.cols];
            v[f] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                let coords: Vec<BigRational> = acc[fi][i]
                    .iter()
                    .map(|u| rational_reconstruct(u, modulus))
                    .collect::<Option<_>>()?;
                v[pc] = self.scalar_from_coords(coords);
            }
            basis.push(v);
        }
        let ok = basis.par_iter().all(|v| b.rows.iter().all(|row| {
            let mut s = self.field.zero();
            for (j, a) in row {
                if !self.field.is_zero(&v[*j]) {
                    s = self.field.add(&s, &self.field.mul(a, &v[*j]));
                }
            }
            self.field.is_zero(&s)
        }));
        ok.then_some(basis)
    }
}

fn crt_accumulate(acc: &mut [Vec<Vec<BigInt>>], modulus: &BigInt, entries: &[Vec<Vec<u64>>], p: u64) {
    let pb = BigInt::from(p);
    let m_mod_p = modulus.mod_floor(&pb).to_u64().unwrap();
    let inv = inv_mod(m_mod_p, p).expect("distinct primes");
    acc.par_iter_mut().zip(entries.par_iter()).for_each(|(af, ef)| {
        for (ai, ei) in af.iter_mut().zip(ef) {
            for (x, &r) in ai.iter_mut().zip(ei) {
                let xr = x.mod_floor(&pb).to_u64().unwrap();
                let diff = (r + p - xr) % p;
                let t = mul_mod(diff, inv, p);
                if t != 0 {
                    *x += modulus * BigInt::from(t);
                }
            }
        }
    });
}
