//! Small integer helpers shared by the field and family code.

pub use num_integer::gcd;

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, m)` with `n = p^m` when `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let primes = prime_factors(n);
    if primes.len() != 1 {
        return None;
    }
    let p = primes[0];
    let mut m = 0;
    let mut rest = n;
    while rest > 1 {
        rest /= p;
        m += 1;
    }
    Some((p, m))
}

/// gcd with the convention that the sign of `a` is ignored.
pub fn gcd_signed(a: i64, b: u64) -> u64 {
    gcd(a.unsigned_abs(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(1021), Some((1021, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(80), vec![2, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(97), vec![97]);
    }

    #[test]
    fn signed_gcd() {
        assert_eq!(gcd_signed(-4, 6), 2);
        assert_eq!(gcd_signed(0, 5), 5);
    }
}
