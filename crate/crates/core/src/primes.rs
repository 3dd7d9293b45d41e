//! Small prime utilities; trial division is plenty for the primes this crate
//! is ever asked about.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// The smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.saturating_add(1);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Iterator over the primes in increasing order, starting at 2.
pub fn primes() -> impl Iterator<Item = u64> {
    std::iter::successors(Some(2u64), |&p| Some(next_prime(p)))
}

pub fn first_primes(count: usize) -> Vec<u64> {
    primes().take(count).collect()
}

/// The `count` smallest primes strictly greater than `bound`.
pub fn primes_above(bound: u64, count: usize) -> Vec<u64> {
    std::iter::successors(Some(next_prime(bound)), |&p| Some(next_prime(p)))
        .take(count)
        .collect()
}
