//! Word-size modular arithmetic helpers.

/// Modular multiplication with a 128-bit intermediate.
#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    // extended Euclid on i128 avoids the Fermat exponentiation
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime strictly below `n`.
pub fn prev_prime(mut n: u64) -> u64 {
    loop {
        n -= 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Smallest prime `p >= start` with `p % modulus == 1`.
pub fn prime_congruent_one(start: u64, modulus: u64) -> u64 {
    let modulus = modulus.max(1);
    let mut p = start - start % modulus + 1;
    if p < start {
        p += modulus;
    }
    loop {
        if is_prime(p) {
            return p;
        }
        p += modulus;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "n = {n}");
        }
        assert!(is_prime(1_000_003));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime((1u64 << 61) + 1));
        // strong pseudoprime to bases 2..=37 would need > 3.3e24
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn inverse_and_power() {
        let p = 1_000_003;
        for a in [1u64, 2, 3, 999_999, 123_456] {
            let inv = inv_mod(a, p).unwrap();
            assert_eq!(mul_mod(a, inv, p), 1);
        }
        assert_eq!(inv_mod(0, p), None);
        assert_eq!(pow_mod(3, p - 1, p), 1);
        assert_eq!(prime_congruent_one(100, 12) % 12, 1);
    }
}
