//! Small integer helpers.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n > 0 && n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}

/// True iff `n = p^k` for some `k >= 0`.
pub fn is_prime_power_of(n: u64, p: u64) -> bool {
    n > 0 && p_part(n, p) == n
}

/// True iff `n` is `1` or a power of a single prime.
pub fn is_prime_power(n: u64) -> bool {
    prime_divisors(n).len() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(p_part(24, 2), 8);
        assert_eq!(p_part(24, 5), 1);
        assert!(is_prime_power_of(1, 3));
        assert!(is_prime_power(8));
        assert!(is_prime_power(1));
        assert!(!is_prime_power(6));
    }
}
