//! Block decomposition of `[1, x]`.
//!
//! For integer parameters `2 ≤ H < K` with `K² ≤ x`, each block
//! `ν ∈ [H, K]` carries the primes `𝒫_ν` in `((ν−1)², ν²]`, the product
//! `P_ν` of all primes in `((H−1)², ν²]`, and the rough set
//! `ℳ_ν = {m ≤ x/ν² : (m, P_ν) = 1}`. The products `𝒫_ν·ℳ_ν` are pairwise
//! disjoint, every element factors uniquely as `p·m`, and the complement of
//! their union `𝓘` splits into the classes used to bound the leftover sum:
//! exactly one in-block prime divisor but not in `𝓘`, at least two prime
//! divisors in the critical block, or no in-range prime factor at all.

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::Serialize;

use crate::coefficients::RealSequence;
use crate::error::{Error, Result};
use crate::phase::{unit, KahanComplex, Phase};
use crate::primes::primes_in_range;
use crate::report::BoundReport;

/// Largest x for which the per-n class table is materialized.
pub const MATERIALIZE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecompositionParams {
    pub x: u64,
    pub h: u32,
    pub k: u32,
    pub delta: f64,
}

impl DecompositionParams {
    pub fn new(x: u64, h: u32, k: u32, delta: f64) -> Result<Self> {
        if h < 2 || h >= k {
            return Err(Error::Precondition(format!(
                "need 2 ≤ H < K, got H={h}, K={k}"
            )));
        }
        let k2 = (k as u64)
            .checked_mul(k as u64)
            .ok_or_else(|| Error::Overflow("K² overflows".into()))?;
        if k2 > x {
            return Err(Error::Precondition(format!(
                "need K² ≤ x, got K²={k2}, x={x}"
            )));
        }
        if !(delta > 0.0 && delta <= 0.1) {
            return Err(Error::Precondition(format!(
                "delta must be in (0, 1/10], got {delta}"
            )));
        }
        Ok(DecompositionParams { x, h, k, delta })
    }

    /// Whether the asymptotic regime `log^δ x < H < K < x^δ` holds. At desk
    /// scale it usually does not; the decomposition stays well defined and we
    /// only attach a warning.
    pub fn regime_ok(&self) -> bool {
        let x = self.x as f64;
        let lo = x.ln().powf(self.delta);
        let hi = x.powf(self.delta);
        lo < self.h as f64 && (self.k as f64) < hi
    }

    pub fn theorem1_envelope(&self, tau_est: f64) -> f64 {
        theorem1_envelope(self.x as f64, self.h as f64, self.k as f64, tau_est)
    }
}

/// `x·(1/√(H·log H) + √τ + log H/log K)`, the orthogonality-criterion
/// envelope with implied constant 1.
pub fn theorem1_envelope(x: f64, h: f64, k: f64, tau_est: f64) -> f64 {
    x * (1.0 / (h * h.ln()).sqrt() + tau_est.sqrt() + h.ln() / k.ln())
}

#[derive(Debug, Clone)]
pub struct Block {
    pub nu: u32,
    /// Primes in `((ν−1)², ν²]`.
    pub primes: Vec<u64>,
    /// `∏_{(H−1)² < p ≤ ν²} p`.
    pub p_nu: BigUint,
    /// `m ≤ x/ν²` coprime to `P_ν`, ascending.
    pub m_set: Vec<u64>,
}

impl Block {
    /// The interval `((ν−1)², ν²]` as (lo, hi].
    pub fn interval(&self) -> (u64, u64) {
        let nu = self.nu as u64;
        ((nu - 1) * (nu - 1), nu * nu)
    }
}

/// Class of an integer in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Class {
    /// `n = p·m ∈ 𝒫_ν ℳ_ν` for (the unique) block ν.
    I,
    /// Exactly one prime divisor in the block of its least in-range prime,
    /// but the cofactor disqualifies it from `𝓘`.
    J1MinusI,
    /// At least two distinct prime divisors in that block.
    J2MinusJ1,
    /// No prime factor in `((H−1)², K²]` at all.
    J3,
}

const TAG_I: u8 = 1;
const TAG_J1: u8 = 2;
const TAG_J2: u8 = 3;
const TAG_J3: u8 = 4;

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub params: DecompositionParams,
    pub blocks: Vec<Block>,
    pub regime_warning: bool,
    class: Vec<u8>, // one tag per n ∈ [1, x]; index 0 unused
    spf: Vec<u32>,  // least prime factor within ((H−1)², K²], 0 if none
}

/// Block index of an in-range prime: the ν with `p ∈ ((ν−1)², ν²]`.
fn block_of(p: u64) -> u32 {
    let s = isqrt(p);
    (if s * s == p { s } else { s + 1 }) as u32
}

fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s > 0 && s * s > n {
        s -= 1;
    }
    while (s + 1).checked_mul(s + 1).is_some_and(|v| v <= n) {
        s += 1;
    }
    s
}

pub fn build_decomposition(params: DecompositionParams) -> Result<Decomposition> {
    let x = params.x;
    if x > MATERIALIZE_LIMIT {
        return Err(Error::Capacity(format!(
            "x={x} above materialization limit {MATERIALIZE_LIMIT}; classify per-n instead"
        )));
    }
    let h = params.h as u64;
    let k = params.k as u64;
    let lo = (h - 1) * (h - 1);
    let range_primes = primes_in_range(lo, k * k)?;

    // Per-block data.
    let mut blocks = Vec::with_capacity((k - h + 1) as usize);
    let mut p_nu = BigUint::from(1u32);
    for nu in h..=k {
        let (blo, bhi) = ((nu - 1) * (nu - 1), nu * nu);
        let start = range_primes.partition_point(|&p| p <= blo);
        let end = range_primes.partition_point(|&p| p <= bhi);
        let primes: Vec<u64> = range_primes[start..end].to_vec();
        for &p in &primes {
            p_nu *= BigUint::from(p);
        }
        let m_cap = x / (nu * nu);
        let mut coprime = vec![true; (m_cap + 1) as usize];
        for &p in &range_primes[..end] {
            let mut m = p;
            while m <= m_cap {
                coprime[m as usize] = false;
                m += p;
            }
        }
        let m_set: Vec<u64> = (1..=m_cap).filter(|&m| coprime[m as usize]).collect();
        blocks.push(Block {
            nu: nu as u32,
            primes,
            p_nu: p_nu.clone(),
            m_set,
        });
    }

    // Per-n classification sieve.
    let len = (x + 1) as usize;
    let mut spf = vec![0u32; len];
    for &p in &range_primes {
        let mut m = p;
        while m <= x {
            if spf[m as usize] == 0 {
                spf[m as usize] = p as u32;
            }
            m += p;
        }
    }
    // second distinct prime in the same block as the least one
    let mut multi = vec![false; len];
    for &p in &range_primes {
        let bp = block_of(p);
        let mut m = p;
        while m <= x {
            let s = spf[m as usize] as u64;
            if s != p && block_of(s) == bp {
                multi[m as usize] = true;
            }
            m += p;
        }
    }
    // least in-range prime divides to the second power
    let mut sq = vec![false; len];
    for &p in &range_primes {
        if let Some(p2) = p.checked_mul(p) {
            let mut m = p2;
            while m <= x {
                if spf[m as usize] as u64 == p {
                    sq[m as usize] = true;
                }
                m += p2;
            }
        }
    }

    let mut class = vec![0u8; len];
    for n in 1..=x {
        let i = n as usize;
        class[i] = if spf[i] == 0 {
            TAG_J3
        } else if multi[i] {
            TAG_J2
        } else {
            let p = spf[i] as u64;
            let nu = block_of(p) as u64;
            let m = n / p;
            if !sq[i] && m <= x / (nu * nu) {
                TAG_I
            } else {
                TAG_J1
            }
        };
    }

    Ok(Decomposition {
        regime_warning: !params.regime_ok(),
        params,
        blocks,
        class,
        spf,
    })
}

impl Decomposition {
    pub fn class_of(&self, n: u64) -> Class {
        match self.class[n as usize] {
            TAG_I => Class::I,
            TAG_J1 => Class::J1MinusI,
            TAG_J2 => Class::J2MinusJ1,
            TAG_J3 => Class::J3,
            _ => unreachable!("unclassified n={n}"),
        }
    }

    /// For `n ∈ 𝓘`, the unique `(ν, p, m)` with `n = p·m`, `p ∈ 𝒫_ν`,
    /// `m ∈ ℳ_ν`.
    pub fn witness(&self, n: u64) -> Option<(u32, u64, u64)> {
        if self.class[n as usize] != TAG_I {
            return None;
        }
        let p = self.spf[n as usize] as u64;
        Some((block_of(p), p, n / p))
    }

    pub fn block(&self, nu: u32) -> Option<&Block> {
        if nu < self.params.h || nu > self.params.k {
            return None;
        }
        self.blocks.get((nu - self.params.h) as usize)
    }

    /// Class sizes in order `[|𝓘|, |𝓙₁\𝓘|, |𝓙₂\𝓙₁|, |𝓙₃|]`.
    pub fn class_sizes(&self) -> [u64; 4] {
        let mut sizes = [0u64; 4];
        for &t in &self.class[1..] {
            sizes[(t - 1) as usize] += 1;
        }
        sizes
    }

    /// Largest observed `|𝒫_ν|·log ν/ν`, the empirical Brun–Titchmarsh
    /// constant across blocks.
    pub fn brun_titchmarsh_constant(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.primes.len() as f64 * (b.nu as f64).ln() / b.nu as f64)
            .fold(0.0, f64::max)
    }
}

/// Streaming per-n classification by trial division over the range primes;
/// used when the class table is not materialized, and as an independent
/// cross-check of the sieve. Returns the class and, for `𝓘`, the witness.
pub fn classify_n(
    params: &DecompositionParams,
    range_primes: &[u64],
    n: u64,
) -> (Class, Option<(u32, u64, u64)>) {
    let x = params.x;
    let mut least: Option<u64> = None;
    let mut block_end = 0u64;
    let mut second_in_block = false;
    for &p in range_primes {
        if let Some(l) = least {
            if p > block_end {
                break;
            }
            if p != l && n % p == 0 {
                second_in_block = true;
                break;
            }
        } else if n % p == 0 {
            let nu = block_of(p) as u64;
            least = Some(p);
            block_end = nu * nu;
        }
    }
    match least {
        None => (Class::J3, None),
        Some(_) if second_in_block => (Class::J2MinusJ1, None),
        Some(p) => {
            let nu = block_of(p) as u64;
            let m = n / p;
            if m % p != 0 && m <= x / (nu * nu) {
                (Class::I, Some((nu as u32, p, m)))
            } else {
                (Class::J1MinusI, None)
            }
        }
    }
}

/// The split `S = S_𝓘 + S_𝓙`; `s` is defined as the exact sum of the two
/// class accumulators, each built in index order.
#[derive(Debug, Clone, Copy)]
pub struct SplitSum {
    pub s_i: Complex64,
    pub s_j: Complex64,
    pub s: Complex64,
}

pub fn split_sum(a: &RealSequence, phi: &Phase, dec: &Decomposition) -> Result<SplitSum> {
    let x = dec.params.x;
    if x > a.len() {
        return Err(Error::Precondition(format!(
            "decomposition x={x} exceeds sequence length {}",
            a.len()
        )));
    }
    let mut scan = phi.scan(1)?;
    let mut acc_i = KahanComplex::default();
    let mut acc_j = KahanComplex::default();
    for n in 1..=x {
        let term = unit(scan.next_value()) * a.get(n);
        if dec.class[n as usize] == TAG_I {
            acc_i.add(term);
        } else {
            acc_j.add(term);
        }
    }
    let s_i = acc_i.value();
    let s_j = acc_j.value();
    Ok(SplitSum {
        s_i,
        s_j,
        s: s_i + s_j,
    })
}

/// Empirical size reports for the three leftover classes.
pub fn class_count_reports(dec: &Decomposition) -> Vec<BoundReport> {
    let [_, j1, j2, j3] = dec.class_sizes();
    let x = dec.params.x as f64;
    let h = dec.params.h as f64;
    let k = dec.params.k as f64;
    let tag = |r: BoundReport| r.with_param("x", x).with_param("H", h).with_param("K", k);
    vec![
        tag(BoundReport::new(
            "class-J1-minus-I",
            j1 as f64,
            x / (h * h.ln()),
        )),
        tag(BoundReport::new(
            "class-J2-minus-J1",
            j2 as f64,
            x / (h * h.ln() * h.ln()),
        )),
        tag(BoundReport::new("class-J3", j3 as f64, x * h.ln() / k.ln())),
    ]
}

/// Serializable summary for the CLI.
#[derive(Debug, Serialize)]
pub struct DecompositionSummary {
    pub x: u64,
    pub h: u32,
    pub k: u32,
    pub regime_warning: bool,
    pub brun_titchmarsh_constant: f64,
    pub blocks: Vec<BlockSummary>,
    pub class_sizes: ClassSizes,
    pub reports: Vec<BoundReport>,
}

#[derive(Debug, Serialize)]
pub struct BlockSummary {
    pub nu: u32,
    pub prime_count: usize,
    pub m_count: usize,
    pub p_nu_bits: u64,
}

#[derive(Debug, Serialize)]
pub struct ClassSizes {
    pub i: u64,
    pub j1_minus_i: u64,
    pub j2_minus_j1: u64,
    pub j3: u64,
}

impl Decomposition {
    pub fn summary(&self) -> DecompositionSummary {
        let [i, j1, j2, j3] = self.class_sizes();
        DecompositionSummary {
            x: self.params.x,
            h: self.params.h,
            k: self.params.k,
            regime_warning: self.regime_warning,
            brun_titchmarsh_constant: self.brun_titchmarsh_constant(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockSummary {
                    nu: b.nu,
                    prime_count: b.primes.len(),
                    m_count: b.m_set.len(),
                    p_nu_bits: b.p_nu.bits(),
                })
                .collect(),
            class_sizes: ClassSizes {
                i,
                j1_minus_i: j1,
                j2_minus_j1: j2,
                j3,
            },
            reports: class_count_reports(self),
        }
    }
}
