//! Modular coefficient sequences and Dirichlet algebra.
//!
//! The concrete eigenform is the discriminant form of weight 12 (the only
//! level-1 case with a one-line product formula): `τ(n)` from
//! `q·∏(1−q^n)^24`, normalized to `λ(n) = τ(n)/n^{11/2}`, and the Dirichlet
//! inverse `μ_f(n)` of `λ`. Other coefficient tables can be loaded through
//! the cache-file interface instead of being recomputed.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::primes::{smallest_prime_factor_table, PrimeFactorization};
use crate::report::BoundReport;

/// Hard cap for `tau_table`. At this bound the largest coefficient across
/// the whole eta-power ladder is `max |τ(n)| ≈ 2.2·10^35` (measured), a
/// factor ~770 below `i128::MAX`; even the worst-case partial sums in the
/// final multiplication stay in range, so i128 arithmetic is exact.
pub const TAU_TABLE_LIMIT: u64 = 1 << 21;

/// Exact integer sequence indexed 1..=N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSequence {
    values: Vec<i128>,
}

impl IntegerSequence {
    pub fn new(values: Vec<i128>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("sequence must have length ≥ 1".into()));
        }
        Ok(IntegerSequence { values })
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false // length ≥ 1 by construction
    }

    /// Value at n (1-indexed).
    pub fn get(&self, n: u64) -> i128 {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }
}

/// Real sequence indexed 1..=N; all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence {
    values: Vec<f64>,
}

impl RealSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("sequence must have length ≥ 1".into()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Precondition("sequence has non-finite values".into()));
        }
        Ok(RealSequence { values })
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value at n (1-indexed).
    pub fn get(&self, n: u64) -> f64 {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The constant-one sequence.
    pub fn ones(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("N must be ≥ 1".into()));
        }
        Ok(RealSequence {
            values: vec![1.0; n as usize],
        })
    }
}

/// Sparse expansion of `∏(1−q^n)^3 = Σ_k (−1)^k (2k+1) q^{k(k+1)/2}`
/// (Jacobi), truncated to exponents ≤ `max_exp`.
fn eta_cubed_sparse(max_exp: u64) -> Vec<(usize, i128)> {
    let mut terms = Vec::new();
    let mut k = 0u64;
    loop {
        let e = k * (k + 1) / 2;
        if e > max_exp {
            break;
        }
        let c = (2 * k + 1) as i128;
        terms.push((e as usize, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    terms
}

/// `out = dense · sparse`, truncated to `dense.len()` coefficients.
fn mul_dense_sparse(dense: &[i128], sparse: &[(usize, i128)]) -> Vec<i128> {
    let n = dense.len();
    let mut out = vec![0i128; n];
    for &(e, c) in sparse {
        if e >= n {
            break;
        }
        for (o, &d) in out[e..].iter_mut().zip(&dense[..n - e]) {
            *o += d * c;
        }
    }
    out
}

/// The Ramanujan tau function `τ(1..N)`, exact.
///
/// `Δ = q·(∏(1−q^n)^3)^8`; the cube is the sparse Jacobi series with
/// `O(√N)` terms, and the eighth power is taken by one sparse×sparse and six
/// dense×sparse truncated multiplications, `O(N^{3/2})` total.
pub fn tau_table(n: u64) -> Result<IntegerSequence> {
    if n == 0 {
        return Err(Error::Precondition("N must be ≥ 1".into()));
    }
    if n > TAU_TABLE_LIMIT {
        return Err(Error::Capacity(format!(
            "tau table size {n} exceeds limit {TAU_TABLE_LIMIT}"
        )));
    }
    let max_exp = (n - 1) as usize;
    let sparse = eta_cubed_sparse(n - 1);

    // eta^6 = sparse², directly into a dense array.
    let mut p6 = vec![0i128; max_exp + 1];
    for &(e1, c1) in &sparse {
        for &(e2, c2) in &sparse {
            let e = e1 + e2;
            if e > max_exp {
                break;
            }
            p6[e] += c1 * c2;
        }
    }

    // eta^9, eta^12, …, eta^24 by repeated dense×sparse products.
    let mut dense = p6;
    for _ in 0..6 {
        dense = mul_dense_sparse(&dense, &sparse);
    }

    // τ(m) is the coefficient of q^{m-1} in eta^24.
    IntegerSequence::new(dense)
}

/// `n^{11/2}` as exact integer `n^11` followed by one square root.
fn pow_11_2(n: u64) -> f64 {
    BigUint::from(n)
        .pow(11)
        .to_f64()
        .expect("n^11 fits in f64 range")
        .sqrt()
}

/// Normalized coefficients `λ(n) = τ(n)/n^{11/2}`; `|λ(n)| ≤ d(n)`.
pub fn lambda_table(n: u64) -> Result<RealSequence> {
    let tau = tau_table(n)?;
    lambda_from_tau(&tau)
}

/// Normalization of an existing τ table (e.g. one read from cache).
pub fn lambda_from_tau(tau: &IntegerSequence) -> Result<RealSequence> {
    let values = (1..=tau.len())
        .map(|m| (tau.get(m) as f64) / pow_11_2(m))
        .collect();
    RealSequence::new(values)
}

/// The ℓ-fold divisor function `τ_ℓ(1..N)`: ordered factorizations into ℓ
/// parts. `ell = 2` is the usual divisor count `d(n)`.
pub fn divisor_table(ell: u32, n: u64) -> Result<IntegerSequence> {
    if ell < 2 {
        return Err(Error::Precondition(format!("ell must be ≥ 2, got {ell}")));
    }
    if n == 0 {
        return Err(Error::Precondition("N must be ≥ 1".into()));
    }
    if n > crate::primes::SIEVE_LIMIT {
        return Err(Error::Capacity(format!("divisor table size {n} too large")));
    }
    let n = n as usize;
    let mut t = vec![1i128; n + 1]; // τ_1 ≡ 1 (index 0 unused)
    for _ in 1..ell {
        let mut next = vec![0i128; n + 1];
        for d in 1..=n {
            for m in (d..=n).step_by(d) {
                next[m] += t[m / d];
            }
        }
        t = next;
    }
    IntegerSequence::new(t[1..].to_vec())
}

/// Classical Möbius function as a real sequence.
pub fn mobius_table(n: u64) -> Result<RealSequence> {
    let spf = smallest_prime_factor_table(n)?;
    let mut values = vec![0.0f64; n as usize];
    values[0] = 1.0;
    for m in 2..=n {
        let mut v = m as usize;
        let mut mu = 1.0f64;
        loop {
            if v == 1 {
                break;
            }
            let p = spf[v] as usize;
            v /= p;
            if v % p == 0 {
                mu = 0.0;
                break;
            }
            mu = -mu;
        }
        values[(m - 1) as usize] = mu;
    }
    RealSequence::new(values)
}

/// The Dirichlet inverse `b` of `a`: `Σ_{d|n} a(d)·b(n/d) = [n=1]`,
/// by the recurrence `b(1) = 1/a(1)`,
/// `b(n) = −(1/a(1))·Σ_{d|n, d>1} a(d)·b(n/d)`.
pub fn dirichlet_inverse(a: &RealSequence) -> Result<RealSequence> {
    if a.get(1) == 0.0 {
        return Err(Error::DivisionByZero(
            "dirichlet_inverse requires a(1) ≠ 0".into(),
        ));
    }
    let n = a.len() as usize;
    let inv_a1 = 1.0 / a.get(1);
    let mut b = vec![0.0f64; n + 1];
    let mut acc = vec![0.0f64; n + 1]; // Σ_{d|m, d>1} a(d)·b(m/d), built as m/d gets finalized
    for m in 1..=n {
        b[m] = if m == 1 { inv_a1 } else { -inv_a1 * acc[m] };
        // m is final; push its contributions a(d)·b(m) into every n = d·m.
        let mut d = 2usize;
        while d * m <= n {
            acc[d * m] += a.get(d as u64) * b[m];
            d += 1;
        }
    }
    RealSequence::new(b[1..].to_vec())
}

/// Dirichlet convolution `(a ∗ b)(n) = Σ_{d|n} a(d)·b(n/d)`, up to the
/// shorter length.
pub fn dirichlet_convolve(a: &RealSequence, b: &RealSequence) -> Result<RealSequence> {
    let n = a.len().min(b.len()) as usize;
    let mut c = vec![0.0f64; n + 1];
    for d in 1..=n {
        let ad = a.get(d as u64);
        if ad == 0.0 {
            continue;
        }
        let mut m = 1usize;
        while d * m <= n {
            c[d * m] += ad * b.get(m as u64);
            m += 1;
        }
    }
    RealSequence::new(c[1..].to_vec())
}

/// `μ_f(n)` from its Euler-product closed form:
/// 1 at n = 1; `(−1)^h·λ(p_1⋯p_h)` when `n = p_1⋯p_h·(p_{h+1}⋯p_r)^2` with
/// all primes distinct; 0 otherwise (any cube divides n).
pub fn mu_f_closed_form(n: &PrimeFactorization, lambda: &RealSequence) -> Result<f64> {
    let mut h = 0u32;
    let mut squarefree_part: u64 = 1;
    for &(p, e) in n.factors() {
        match e {
            1 => {
                h += 1;
                squarefree_part = squarefree_part.checked_mul(p).ok_or_else(|| {
                    Error::Overflow("squarefree part exceeds u64".into())
                })?;
            }
            2 => {}
            _ => return Ok(0.0),
        }
    }
    if squarefree_part > lambda.len() {
        return Err(Error::Precondition(format!(
            "λ({squarefree_part}) outside table of length {}",
            lambda.len()
        )));
    }
    let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * lambda.get(squarefree_part))
}

/// `μ_f(1..N)` by inverting the λ table.
pub fn mu_f_table(n: u64) -> Result<RealSequence> {
    dirichlet_inverse(&lambda_table(n)?)
}

/// Mean-square report: `lhs = Σ_{n≤x, (n,P)=1} |a(n)|²` against the sieve
/// envelope `x·∏_{p|P}(1−1/p)` (empty product = 1).
pub fn mean_square_report(
    a: &RealSequence,
    x: u64,
    coprime_to: &[u64],
) -> Result<BoundReport> {
    if x == 0 || x > a.len() {
        return Err(Error::Precondition(format!(
            "x={x} outside sequence length {}",
            a.len()
        )));
    }
    let mut primes: Vec<u64> = coprime_to.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let mut coprime = vec![true; (x + 1) as usize];
    let mut envelope = x as f64;
    for &p in &primes {
        if p < 2 {
            return Err(Error::Precondition(format!("{p} is not a prime")));
        }
        envelope *= 1.0 - 1.0 / (p as f64);
        let mut m = p;
        while m <= x {
            coprime[m as usize] = false;
            m += p;
        }
    }
    let mut lhs = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    for n in 1..=x {
        if coprime[n as usize] {
            let v = a.get(n);
            let y = v * v - comp;
            let t = lhs + y;
            comp = (t - lhs) - y;
            lhs = t;
        }
    }
    Ok(BoundReport::new("mean-square", lhs, envelope)
        .with_param("x", x as f64)
        .with_param("primes", primes.len() as f64))
}

/// Write a τ table in the `tau-table v1` cache format.
pub fn write_tau_cache(path: &Path, tau: &IntegerSequence) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "tau-table v1 N={}", tau.len())?;
    for m in 1..=tau.len() {
        writeln!(w, "{}", tau.get(m))?;
    }
    w.flush()?;
    Ok(())
}

/// Read a `tau-table v1` cache file.
pub fn read_tau_cache(path: &Path) -> Result<IntegerSequence> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CacheFormat("empty file".into()))??;
    let n: u64 = header
        .strip_prefix("tau-table v1 N=")
        .ok_or_else(|| Error::CacheFormat(format!("bad header {header:?}")))?
        .parse()
        .map_err(|_| Error::CacheFormat(format!("bad N in header {header:?}")))?;
    let mut values = Vec::with_capacity(n as usize);
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        values.push(
            line.parse::<i128>()
                .map_err(|_| Error::CacheFormat(format!("bad integer {line:?}")))?,
        );
    }
    if values.len() as u64 != n {
        return Err(Error::CacheFormat(format!(
            "header says N={n} but file has {} values",
            values.len()
        )));
    }
    IntegerSequence::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: coefficients of q·∏_{m≤deg}(1−q^m)^24 by direct
    /// truncated polynomial multiplication.
    fn tau_oracle(n: usize) -> Vec<i128> {
        let deg = n - 1; // τ(m) = coeff of q^{m-1} in the product
        let mut poly = vec![0i128; deg + 1];
        poly[0] = 1;
        for m in 1..=deg {
            for _ in 0..24 {
                // multiply by (1 − q^m)
                for i in (m..=deg).rev() {
                    let t = poly[i - m];
                    poly[i] -= t;
                }
            }
        }
        poly
    }

    #[test]
    fn tau_first_values() {
        let tau = tau_table(6).unwrap();
        assert_eq!(tau.values(), &[1, -24, 252, -1472, 4830, -6048]);
        // multiplicativity at the smallest composite case
        assert_eq!(tau.get(6), tau.get(2) * tau.get(3));
    }

    #[test]
    fn tau_matches_direct_product_oracle() {
        let tau = tau_table(200).unwrap();
        let oracle = tau_oracle(200);
        assert_eq!(tau.values(), &oracle[..]);
    }

    #[test]
    fn tau_hecke_recursion_small() {
        let n = 10_000;
        let tau = tau_table(n).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let mut pk = p; // p^k
            while pk * p <= n {
                let p11 = (p as i128).pow(11);
                assert_eq!(
                    tau.get(pk * p),
                    tau.get(p) * tau.get(pk) - p11 * tau.get(pk / p),
                    "p={p} pk={pk}"
                );
                pk *= p;
            }
        }
    }

    #[test]
    fn tau_capacity_error() {
        assert!(matches!(
            tau_table(TAU_TABLE_LIMIT + 1),
            Err(Error::Capacity(_))
        ));
        assert!(tau_table(0).is_err());
    }

    #[test]
    fn lambda_normalization() {
        let lam = lambda_table(100).unwrap();
        assert_eq!(lam.get(1), 1.0);
        let expect = -24.0 / 2f64.powf(5.5);
        assert!((lam.get(2) - expect).abs() < 1e-14);
        // λ is multiplicative: λ(6) = λ(2)λ(3)
        assert!((lam.get(6) - lam.get(2) * lam.get(3)).abs() < 1e-12);
    }

    #[test]
    fn deligne_bound_desk() {
        let n = 10_000;
        let lam = lambda_table(n).unwrap();
        let d = divisor_table(2, n).unwrap();
        for m in 1..=n {
            assert!(
                lam.get(m).abs() <= d.get(m) as f64,
                "Deligne bound fails at {m}"
            );
        }
    }

    #[test]
    fn divisor_examples() {
        let d = divisor_table(2, 20).unwrap();
        assert_eq!(d.get(1), 1);
        assert_eq!(d.get(12), 6);
        let t3 = divisor_table(3, 10).unwrap();
        // ordered triples with product 4: (1,1,4)·3 + (1,2,2)·3
        assert_eq!(t3.get(4), 6);
        assert!(divisor_table(1, 10).is_err());
    }

    #[test]
    fn inverse_of_ones_is_mobius() {
        let ones = RealSequence::ones(1000).unwrap();
        let inv = dirichlet_inverse(&ones).unwrap();
        let mu = mobius_table(1000).unwrap();
        for n in 1..=1000 {
            assert!((inv.get(n) - mu.get(n)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn inverse_defining_identity() {
        let lam = lambda_table(1000).unwrap();
        let inv = dirichlet_inverse(&lam).unwrap();
        let conv = dirichlet_convolve(&lam, &inv).unwrap();
        assert!((conv.get(1) - 1.0).abs() < 1e-12);
        for n in 2..=1000 {
            assert!(conv.get(n).abs() < 1e-10, "n={n}: {}", conv.get(n));
        }
    }

    #[test]
    fn inverse_requires_unit() {
        let a = RealSequence::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            dirichlet_inverse(&a),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn mu_f_euler_factor_values() {
        let n = 1000;
        let lam = lambda_table(n).unwrap();
        let mu = dirichlet_inverse(&lam).unwrap();
        for p in [2u64, 3, 5, 7] {
            assert!((mu.get(p) + lam.get(p)).abs() < 1e-10, "μ_f(p) = −λ(p)");
            if p * p <= n {
                assert!((mu.get(p * p) - 1.0).abs() < 1e-10, "μ_f(p²) = 1");
            }
            if p * p * p <= n {
                assert!(mu.get(p * p * p).abs() < 1e-10, "μ_f(p³) = 0");
            }
        }
    }

    #[test]
    fn mu_f_closed_form_cases() {
        let lam = lambda_table(100).unwrap();
        let one = PrimeFactorization::of(1).unwrap();
        assert_eq!(mu_f_closed_form(&one, &lam).unwrap(), 1.0);
        let cube = PrimeFactorization::of(8).unwrap();
        assert_eq!(mu_f_closed_form(&cube, &lam).unwrap(), 0.0);
        let square = PrimeFactorization::of(49).unwrap();
        assert_eq!(mu_f_closed_form(&square, &lam).unwrap(), 1.0);
        let p = PrimeFactorization::of(3).unwrap();
        assert!((mu_f_closed_form(&p, &lam).unwrap() + lam.get(3)).abs() < 1e-15);
        // n = 6·25: h = 2 part {2,3}, squared part {5}
        let mixed = PrimeFactorization::of(150).unwrap();
        assert!((mu_f_closed_form(&mixed, &lam).unwrap() - lam.get(6)).abs() < 1e-15);
    }

    #[test]
    fn mu_f_recurrence_matches_closed_form() {
        let n = 2000u64;
        let lam = lambda_table(n).unwrap();
        let mu = dirichlet_inverse(&lam).unwrap();
        let spf = smallest_prime_factor_table(n).unwrap();
        for m in 1..=n {
            let f = PrimeFactorization::with_spf(m, &spf).unwrap();
            let c = mu_f_closed_form(&f, &lam).unwrap();
            assert!((mu.get(m) - c).abs() < 1e-9, "n={m}: {} vs {c}", mu.get(m));
        }
    }

    #[test]
    fn mean_square_trivial_cases() {
        let ones = RealSequence::ones(100).unwrap();
        let r = mean_square_report(&ones, 100, &[]).unwrap();
        assert_eq!(r.lhs, 100.0);
        assert_eq!(r.ratio, 1.0);
        let r = mean_square_report(&ones, 100, &[2]).unwrap();
        assert_eq!(r.lhs, 50.0);
        assert_eq!(r.envelope, 50.0);
        assert_eq!(r.ratio, 1.0);
    }

    #[test]
    fn mean_square_rejects_non_prime() {
        let ones = RealSequence::ones(10).unwrap();
        assert!(mean_square_report(&ones, 10, &[1]).is_err());
    }

    #[test]
    fn tau_cache_round_trip() {
        let tau = tau_table(64).unwrap();
        let path = std::env::temp_dir().join(format!("tau-cache-test-{}", std::process::id()));
        write_tau_cache(&path, &tau).unwrap();
        let back = read_tau_cache(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(tau, back);
    }

    #[test]
    fn tau_cache_rejects_garbage() {
        let path = std::env::temp_dir().join(format!("tau-cache-bad-{}", std::process::id()));
        std::fs::write(&path, "not a header\n1\n").unwrap();
        assert!(matches!(read_tau_cache(&path), Err(Error::CacheFormat(_))));
        std::fs::write(&path, "tau-table v1 N=3\n1\n-24\n").unwrap();
        assert!(matches!(read_tau_cache(&path), Err(Error::CacheFormat(_))));
        std::fs::remove_file(&path).ok();
    }
}
