//! Prime sieves and factorization by trial division.
//!
//! Everything here is desk-scale plumbing: an Eratosthenes sieve up to
//! `~10^8`, interval extraction, a smallest-prime-factor table for bulk
//! factorization, and an exact `PrimeFactorization` record.

use crate::error::{Error, Result};

/// Largest bound the plain sieve will accept.
pub const SIEVE_LIMIT: u64 = 100_000_000;

/// Primes up to `limit` inclusive, ascending.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    if limit > SIEVE_LIMIT {
        return Err(Error::Capacity(format!(
            "sieve bound {limit} exceeds limit {SIEVE_LIMIT}"
        )));
    }
    let n = limit as usize;
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if is_prime[i] {
            let mut j = i * i;
            while j <= n {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    Ok(is_prime
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| if p { Some(i as u64) } else { None })
        .collect())
}

/// Primes in the half-open-from-below interval `(lo, hi]`.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<Vec<u64>> {
    let all = primes_up_to(hi)?;
    Ok(all.into_iter().filter(|&p| p > lo && p <= hi).collect())
}

/// Smallest-prime-factor table for `0..=n`; `spf[m]` is the least prime
/// dividing `m` (and `spf[0] = spf[1] = 0`).
pub fn smallest_prime_factor_table(n: u64) -> Result<Vec<u32>> {
    if n > SIEVE_LIMIT {
        return Err(Error::Capacity(format!(
            "spf table bound {n} exceeds limit {SIEVE_LIMIT}"
        )));
    }
    let n = n as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                match j.checked_add(i) {
                    Some(next) => j = next,
                    None => break,
                }
            }
        }
    }
    Ok(spf)
}

/// Exact factorization `n = ∏ p_i^{e_i}` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    /// Build from raw `(prime, exponent)` pairs, validating the invariants.
    pub fn new(factors: Vec<(u64, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::Precondition(
                    "factor primes must be strictly increasing".into(),
                ));
            }
        }
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::Precondition(format!("exponent 0 for prime {p}")));
            }
            if !is_prime_trial(p) {
                return Err(Error::Precondition(format!("{p} is not prime")));
            }
        }
        Ok(PrimeFactorization { factors })
    }

    /// Factor `n ≥ 1` by trial division.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("cannot factor 0".into()));
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m % p == 0 {
                let mut e = 0u32;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(PrimeFactorization { factors })
    }

    /// Factor using a precomputed smallest-prime-factor table (fast in bulk).
    pub fn with_spf(n: u64, spf: &[u32]) -> Result<Self> {
        if n == 0 || n as usize >= spf.len() {
            return Err(Error::Precondition(format!(
                "n={n} outside spf table range"
            )));
        }
        let mut factors = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = spf[m] as u64;
            let mut e = 0u32;
            while m > 1 && spf[m] as u64 == p {
                m /= p as usize;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(PrimeFactorization { factors })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The integer this factorization represents, if it fits in u64.
    pub fn value(&self) -> Result<u64> {
        let mut n: u64 = 1;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                n = n
                    .checked_mul(p)
                    .ok_or_else(|| Error::Overflow("factorization value exceeds u64".into()))?;
            }
        }
        Ok(n)
    }
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}
