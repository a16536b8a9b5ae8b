//! Small integer helpers: factorization, prime parts, gcd.

/// Prime factorization as `(prime, exponent)` pairs in ascending prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The set of primes dividing `n`, ascending. Empty for `n <= 1`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Largest divisor of `n` whose prime divisors all satisfy `keep`.
pub fn part_of(n: u64, mut keep: impl FnMut(u64) -> bool) -> u64 {
    factorize(n)
        .into_iter()
        .filter(|&(p, _)| keep(p))
        .map(|(p, e)| p.pow(e))
        .product()
}

/// The `p`-part of `n`.
pub fn p_part(n: u64, p: u64) -> u64 {
    part_of(n, |q| q == p)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// If `n = p^k` for a prime `p` and `k >= 1`, returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}
