//! Weyl differencing sums and their envelope reports.
//!
//! The chain being checked empirically: squaring a degree-d exponential sum
//! d−1 times reduces it to reciprocal-distance sums
//! `Σ min(y, 1/‖d!h₁⋯h_{d−1}α‖)`; those are bounded through the
//! rational approximation of α (the reciprocal-sum estimate), with the
//! divisor-function moment absorbing the multiplicity of products
//! `h = d!h₁⋯h_{d−1}`. Every inequality is reported as (lhs, envelope,
//! ratio) with implied constant 1.

use num_integer::Integer;

use crate::coefficients::divisor_table;
use crate::error::{Error, Result};
use crate::fixed::Frac192;
use crate::phase::{weyl_sum, Phase, PhasePolynomial};
use crate::report::BoundReport;

/// Feasibility guard: refuse h-tuple enumerations above this many iterations.
pub const LOOP_BUDGET: f64 = 1e9;
/// Largest divisor-moment table `d!·y^{d−1}` we will sieve.
pub const MOMENT_TABLE_LIMIT: u64 = 20_000_000;

/// Parameters of a differencing experiment; `c` is the constant in
/// `|α − a/q| ≤ C/q²`.
#[derive(Debug, Clone, Copy)]
pub struct WeylParams {
    pub d: u32,
    pub y: u64,
    pub z: f64,
    pub c: f64,
}

impl WeylParams {
    pub fn new(d: u32, y: u64, z: f64, c: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Precondition(format!("d must be ≥ 2, got {d}")));
        }
        if y == 0 {
            return Err(Error::Precondition("y must be ≥ 1".into()));
        }
        if !(z > 1.0) {
            return Err(Error::Precondition(format!("Z must exceed 1, got {z}")));
        }
        if !(c >= 1.0) {
            return Err(Error::Precondition(format!("C must be ≥ 1, got {c}")));
        }
        Ok(WeylParams { d, y, z, c })
    }
}

/// `Σ_{n=1..N} min(M, 1/‖αn‖)`, with `min(M, 1/0) = M`, by streaming
/// mod-1 accumulation of the exact fixed-point α.
pub fn min_reciprocal_sum(alpha: Frac192, n_max: u64, m: f64) -> f64 {
    let mut acc = Frac192::ZERO;
    let mut sum = 0.0f64;
    for _ in 0..n_max {
        acc = acc.wrapping_add(alpha);
        sum += reciprocal_term(acc, m);
    }
    sum
}

/// Same sum by independent per-term multiplication `n·α mod 1`.
pub fn min_reciprocal_sum_direct(alpha: Frac192, n_max: u64, m: f64) -> f64 {
    let mut sum = 0.0f64;
    for n in 1..=n_max {
        sum += reciprocal_term(alpha.mul_u128(n as u128), m);
    }
    sum
}

#[inline]
fn reciprocal_term(v: Frac192, m: f64) -> f64 {
    let dist = v.dist_to_int();
    if dist == 0.0 {
        m
    } else {
        m.min(1.0 / dist)
    }
}

/// Reciprocal-sum report: `Σ min(M, 1/‖αn‖)` against
/// `C·(MN/q + N·log q + M + q·log q)`, valid when `|α − a/q| ≤ C/q²` with
/// `1 ≤ a < q`, `(a, q) = 1`.
pub fn lemma34_report(
    alpha: Frac192,
    a: u64,
    q: u64,
    c: f64,
    n_max: u64,
    m: f64,
) -> Result<BoundReport> {
    if q < 2 || a == 0 || a >= q {
        return Err(Error::Precondition(format!(
            "need 1 ≤ a < q, got a={a}, q={q}"
        )));
    }
    if a.gcd(&q) != 1 {
        return Err(Error::Precondition(format!("gcd({a}, {q}) ≠ 1")));
    }
    if !(c >= 1.0) {
        return Err(Error::Precondition(format!("C must be ≥ 1, got {c}")));
    }
    let delta = alpha
        .wrapping_sub(Frac192::from_u64_ratio(a, q)?)
        .dist_to_int();
    let qf = q as f64;
    if delta > c / (qf * qf) + 1e-30 {
        return Err(Error::Precondition(format!(
            "|α − {a}/{q}| = {delta} exceeds C/q² = {}",
            c / (qf * qf)
        )));
    }
    let lhs = min_reciprocal_sum(alpha, n_max, m);
    let nf = n_max as f64;
    let envelope = c * (m * nf / qf + nf * qf.ln() + m + qf * qf.ln());
    Ok(BoundReport::new("reciprocal-sum", lhs, envelope)
        .with_param("N", nf)
        .with_param("M", m)
        .with_param("q", qf)
        .with_param("C", c))
}

fn factorial(d: u32) -> Result<u128> {
    let mut f: u128 = 1;
    for i in 2..=d as u128 {
        f = f
            .checked_mul(i)
            .ok_or_else(|| Error::Overflow(format!("{d}! overflows u128")))?;
    }
    Ok(f)
}

/// The inner sum of the differencing bound:
/// `Σ_{h₁,…,h_{d−1}} min(y, 1/‖d!h₁⋯h_{d−1}α‖)` with
/// `h_j ∈ [1, y−1−h_{j−1}]` (and `h₀ = 0`), α the leading coefficient of U.
/// Brute-force enumeration; errors when the loop count estimate exceeds
/// [`LOOP_BUDGET`].
pub fn weyl_differenced_sum(u: &PhasePolynomial, y: u64) -> Result<f64> {
    let d = u.degree() as u32;
    if d < 2 {
        return Err(Error::Precondition(format!(
            "differencing needs degree ≥ 2, got {d}"
        )));
    }
    if y < 2 {
        return Err(Error::Precondition("y must be ≥ 2".into()));
    }
    if (y as f64).powi(d as i32 - 1) > LOOP_BUDGET {
        return Err(Error::Feasibility(format!(
            "≈ y^{} ≈ {:.2e} tuples exceeds budget {LOOP_BUDGET:.0e}",
            d - 1,
            (y as f64).powi(d as i32 - 1)
        )));
    }
    let alpha = u.coeff(u.degree());
    let d_fact = factorial(d)?;
    let cap = d_fact * (y as u128 - 1).pow(d - 1); // d!·y^{d−1} enumeration bound

    fn recurse(
        levels_left: u32,
        h_prev: u64,
        prod: u128,
        y: u64,
        alpha: Frac192,
        cap: u128,
        sum: &mut f64,
    ) {
        if levels_left == 0 {
            debug_assert!(prod <= cap);
            *sum += reciprocal_term(alpha.mul_u128(prod), y as f64);
            return;
        }
        let hi = y - 1 - h_prev;
        for h in 1..=hi {
            recurse(levels_left - 1, h, prod * h as u128, y, alpha, cap, sum);
        }
    }

    let mut sum = 0.0;
    recurse(d - 1, 0, d_fact, y, alpha, cap, &mut sum);
    Ok(sum)
}

/// Differencing-constant report: `c_d(y)` such that
/// `|W(y,U)|^{2^{d−1}} = c_d·(y^{2^{d−1}−1} + y^{2^{d−1}−d}·Σ)`;
/// stability of `c_d` under y-doubling is the empirical check.
pub fn differencing_constant(u: &PhasePolynomial, y: u64) -> Result<BoundReport> {
    let d = u.degree() as u32;
    let inner = weyl_differenced_sum(u, y)?;
    let w = weyl_sum(&Phase::Poly(u.clone()), y)?.norm();
    let e = 1u32 << (d - 1); // 2^{d−1}
    let lhs = w.powi(e as i32);
    let yf = y as f64;
    let envelope = yf.powi(e as i32 - 1) + yf.powi(e as i32 - d as i32) * inner;
    Ok(BoundReport::new("weyl-differencing", lhs, envelope)
        .with_param("d", d as f64)
        .with_param("y", yf))
}

/// Divisor-moment report: `Σ_{h ≤ d!·y^{d−1}} τ_d(h)²` against
/// `y^{d−1}·(log y)^c`, default `c = d²−1` (the classical moment exponent
/// for the d-fold divisor function).
pub fn divisor_moment_report(d: u32, y: u64, c_exp: Option<f64>) -> Result<BoundReport> {
    if d < 2 {
        return Err(Error::Precondition(format!("d must be ≥ 2, got {d}")));
    }
    if y < 2 {
        return Err(Error::Precondition("y must be ≥ 2".into()));
    }
    let d_fact = factorial(d)?;
    let x_cap = (y as u128)
        .checked_pow(d - 1)
        .and_then(|v| v.checked_mul(d_fact))
        .ok_or_else(|| Error::Overflow("d!·y^{d−1} overflows".into()))?;
    if x_cap > MOMENT_TABLE_LIMIT as u128 {
        return Err(Error::Feasibility(format!(
            "moment table of size {x_cap} exceeds limit {MOMENT_TABLE_LIMIT}"
        )));
    }
    let x_cap = x_cap as u64;
    let table = divisor_table(d, x_cap)?;
    let mut lhs = 0.0f64;
    for h in 1..=x_cap {
        let t = table.get(h) as f64;
        lhs += t * t;
    }
    let c = c_exp.unwrap_or((d * d - 1) as f64);
    let yf = y as f64;
    let envelope = yf.powi(d as i32 - 1) * yf.ln().powf(c);
    Ok(BoundReport::new("divisor-moment", lhs, envelope)
        .with_param("d", d as f64)
        .with_param("y", yf)
        .with_param("c", c))
}

/// Sharpened Weyl-bound report for `W(y, U)`, degree d ≥ 2, leading
/// coefficient approximated by `a/q` with `|α − a/q| ≤ C/q²`:
/// envelope `y·(CZ/q + (CZ/y)log q + CZ·q·log q/y^d + log^A y/Z)^κ` with
/// `κ = 2^{1−d}` and `A = (d−1)²` by default. The companion report carries
/// the classical bound `y·C^κ·(1/q + 1/y + q/y^d)^κ` (ε = 0).
pub fn lemma35_report(
    u: &PhasePolynomial,
    y: u64,
    z: f64,
    c: f64,
    q: u64,
    a_exp: Option<f64>,
) -> Result<(BoundReport, BoundReport)> {
    let d = u.degree() as u32;
    if d < 2 {
        return Err(Error::Precondition(format!("d must be ≥ 2, got {d}")));
    }
    if !(z > 1.0) {
        return Err(Error::Precondition(format!("Z must exceed 1, got {z}")));
    }
    if q < 2 {
        return Err(Error::Precondition(format!("q must be ≥ 2, got {q}")));
    }
    // ‖qα‖ ≤ C/q ⟺ |α − a/q| ≤ C/q² for the nearest-integer a
    let alpha = u.coeff(u.degree());
    let qa_dist = alpha.mul_u128(q as u128).dist_to_int();
    let qf = q as f64;
    if qa_dist > c / qf + 1e-30 {
        return Err(Error::Precondition(format!(
            "‖qα‖ = {qa_dist} exceeds C/q = {}",
            c / qf
        )));
    }

    let lhs = weyl_sum(&Phase::Poly(u.clone()), y)?.norm();
    let yf = y as f64;
    let kappa = 2f64.powi(1 - d as i32);
    let a = a_exp.unwrap_or(((d - 1) * (d - 1)) as f64);
    let inner = c * z / qf
        + (c * z / yf) * qf.ln()
        + c * z * qf * qf.ln() / yf.powi(d as i32)
        + yf.ln().powf(a) / z;
    let envelope = yf * inner.powf(kappa);
    let sharpened = BoundReport::new("weyl-sharpened", lhs, envelope)
        .with_param("d", d as f64)
        .with_param("y", yf)
        .with_param("Z", z)
        .with_param("C", c)
        .with_param("q", qf)
        .with_param("A", a);

    let classic_inner = 1.0 / qf + 1.0 / yf + qf / yf.powi(d as i32);
    let classic = yf * c.powf(kappa) * classic_inner.powf(kappa);
    let classical = BoundReport::new("weyl-classical", lhs, classic)
        .with_param("d", d as f64)
        .with_param("y", yf)
        .with_param("C", c)
        .with_param("q", qf);
    Ok((sharpened, classical))
}
