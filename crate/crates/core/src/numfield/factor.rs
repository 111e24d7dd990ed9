//! Integer primality and factorization at desk scale: trial division with a
//! deterministic Miller-Rabin check, plus Brent's variant of Pollard rho for
//! stubborn cofactors.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Simple sieve of Eratosthenes. Returns all primes `<= n`.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // callers guarantee m < 2^64, so the product fits in u128
    debug_assert!(m < (1u128 << 64));
    (a % m) * (b % m) % m
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `n < 2^64` using the standard 12-witness set.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let n128 = n as u128;
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a as u128, d as u128, n128);
        if x == 1 || x == n128 - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n128);
            if x == n128 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent-cycle Pollard rho; returns a non-trivial factor of composite odd `n < 2^64`.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let n128 = n as u128;
    let mut c = 1u64;
    loop {
        let f = |x: u128| (mul_mod(x, x, n128) + c as u128) % n128;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u64(diff as u64, n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Factor `n < 2^64` into sorted (prime, exponent) pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut extra: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            extra.push(m);
            continue;
        }
        // trial divide a little further before rho
        let mut m = m;
        let mut p = 49u64;
        while p * p <= m && p < 1 << 16 {
            if m % p == 0 {
                extra.push(p);
                m /= p;
                continue;
            }
            p += 2;
        }
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            extra.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    extra.sort_unstable();
    for p in extra {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => out.push((p, 1)),
        }
    }
    out.sort_unstable();
    out
}

/// Factor an arbitrary-precision non-negative integer. Inputs at desk scale
/// fit in u64 after trial division; anything larger falls back to plain
/// trial division, which is slow but exact.
pub fn factor_biguint(n: &BigUint) -> Vec<(u64, u32)> {
    if n.is_zero() || n.is_one() {
        return Vec::new();
    }
    if let Some(small) = n.to_u64() {
        return factor_u64(small);
    }
    let mut n = n.clone();
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    loop {
        if let Some(small) = n.to_u64() {
            for (q, e) in factor_u64(small) {
                out.push((q, e));
            }
            break;
        }
        let bp = BigUint::from(p);
        let mut e = 0u32;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    out.sort_unstable();
    out
}

/// Largest `m` with `m^k <= n`.
pub fn iroot_u128(n: u128, k: u32) -> u128 {
    if n == 0 || k == 1 {
        return n;
    }
    let mut lo = 0u128;
    let mut hi = 1u128;
    while hi.checked_pow(k).map_or(false, |h| h <= n) {
        hi *= 2;
    }
    // invariant: lo^k <= n < hi^k
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mid.checked_pow(k).map_or(false, |m| m <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(1_000_000_007u64 * 3));
    }

    #[test]
    fn factor_roundtrip() {
        for n in [1u64, 2, 12, 97, 720, 1_234_567_890, 600_851_475_143] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back.max(1), n.max(1), "factors of {n}: {f:?}");
            for (p, _) in &f {
                assert!(is_prime_u64(*p));
            }
        }
    }

    #[test]
    fn iroot_bounds() {
        assert_eq!(iroot_u128(0, 3), 0);
        assert_eq!(iroot_u128(26, 3), 2);
        assert_eq!(iroot_u128(27, 3), 3);
        assert_eq!(iroot_u128(1_000_000, 2), 1000);
        assert_eq!(iroot_u128(999_999, 2), 999);
    }

    #[test]
    fn sieve_matches_primality() {
        let primes = primes_upto(200);
        for n in 2..=200u64 {
            assert_eq!(primes.contains(&n), is_prime_u64(n), "n = {n}");
        }
    }
}
