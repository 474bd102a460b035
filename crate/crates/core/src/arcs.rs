//! Dirichlet approximation and major/minor arc machinery.
//!
//! Each phase coefficient `α_j` (read at full fixed-point precision) gets a
//! rational approximation `a_j/q_j` with `q_j ≤ Q_j` and
//! `|α_j − a_j/q_j| ≤ 1/(q_j Q_j)` via continued-fraction convergents. A
//! coefficient is *major* when `q_j ≤ R_j` for the schedule cutoff `R_j`
//! (ties are major), and the polynomial is major iff every coefficient is.
//! The critical index is `d = max{j : q_j > R_j}` (0 when major).
//!
//! The module also carries the two exact finite identities used on the major
//! arcs: splitting a rational-phase sum over progressions, and expanding the
//! degree-≥2 rational part through additive characters.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::coefficients::RealSequence;
use crate::error::{Error, Result};
use crate::fixed::{Frac192, FRAC_BITS};
use crate::phase::{unit, KahanComplex, PhasePolynomial};
use crate::report::BoundReport;

/// Progression machinery refuses moduli above this (the sums degenerate).
pub const PROGRESSION_MODULUS_LIMIT: u64 = 1_000_000;
/// Character expansion cost grows like `q̄·t + q̄²`; keep q̄ modest.
pub const CHARACTER_MODULUS_LIMIT: u64 = 10_000;

/// Deviation tolerance for the progression-split identity, scaled by t.
pub const MAJOR_IDENTITY_TOL: f64 = 1e-9;
/// Deviation tolerance for the character-expansion identity, scaled by t.
pub const CHARACTER_EXPANSION_TOL: f64 = 1e-8;

/// A Dirichlet rational approximation of a mod-1 coefficient.
#[derive(Debug, Clone)]
pub struct RationalApprox {
    /// Numerator representative in `[1, q]` (`a = q` encodes the fraction 0).
    pub a: BigUint,
    pub q: BigUint,
    /// Circle distance `‖α − a/q‖`.
    pub err: f64,
    /// The Q this approximation was built for.
    pub q_max: BigUint,
    true_num: BigUint, // continued-fraction numerator (may be 0)
}

impl RationalApprox {
    /// The approximating fraction as an exact rational in `[0, 1)`.
    pub fn fraction(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.true_num.clone()),
            BigInt::from(self.q.clone()),
        )
    }

    /// Exact integer check of `‖α − a/q‖ ≤ 1/(q·Q)`.
    pub fn satisfies_dirichlet(&self, alpha: Frac192) -> bool {
        let a_big = alpha.to_biguint();
        let d = BigUint::one() << FRAC_BITS;
        let lhs = &a_big * &self.q;
        let rhs = &self.true_num * &d;
        let diff = if lhs >= rhs { lhs - rhs } else { rhs - lhs };
        diff * &self.q_max <= d
    }
}

/// Best rational approximation with `q ≤ Q` and `‖α − a/q‖ ≤ 1/(qQ)`, by
/// scanning continued-fraction convergents of the exact fixed-point value in
/// increasing q and returning the first that satisfies the bound (existence
/// by Dirichlet's theorem). An exact rational α with denominator ≤ Q comes
/// back with `err = 0`; α = 0 maps to a = q = 1.
pub fn best_approx(alpha: Frac192, q_cap: &BigUint) -> Result<RationalApprox> {
    if *q_cap < BigUint::from(2u32) {
        return Err(Error::Precondition(format!("Q must be ≥ 2, got {q_cap}")));
    }
    let a_val = alpha.to_biguint();
    let d_val = BigUint::one() << FRAC_BITS;

    // Convergents h_i/k_i with h_i = a_i·h_{i-1} + h_{i-2} (same for k),
    // seeded by h_{-2}/h_{-1} = 0/1 and k_{-2}/k_{-1} = 1/0.
    let mut h_m2 = BigUint::zero();
    let mut h_m1 = BigUint::one();
    let mut k_m2 = BigUint::one();
    let mut k_m1 = BigUint::zero();

    let mut num = a_val.clone();
    let mut den = d_val.clone();
    while !den.is_zero() {
        let (quot, rem) = num.div_rem(&den);
        let h = &quot * &h_m1 + &h_m2;
        let k = &quot * &k_m1 + &k_m2;
        if k > *q_cap {
            break;
        }
        // ‖α − h/k‖ ≤ 1/(kQ)  ⟺  |A·k − h·D|·Q ≤ D
        let lhs = &a_val * &k;
        let rhs = &h * &d_val;
        let diff = if lhs >= rhs { lhs - rhs } else { rhs - lhs };
        if &diff * q_cap <= d_val {
            let err = diff.to_f64().unwrap_or(f64::INFINITY)
                / (k.to_f64().unwrap_or(f64::INFINITY) * d_val.to_f64().unwrap());
            let a_rep = if h.is_zero() { k.clone() } else { h.clone() };
            return Ok(RationalApprox {
                a: a_rep,
                q: k,
                err,
                q_max: q_cap.clone(),
                true_num: h,
            });
        }
        h_m2 = std::mem::replace(&mut h_m1, h);
        k_m2 = std::mem::replace(&mut k_m1, k);
        num = den.clone();
        den = rem;
    }
    // Unreachable: the last convergent with k ≤ Q always satisfies the bound.
    Err(Error::Precondition(
        "no convergent satisfied the Dirichlet bound".into(),
    ))
}

/// Major/minor cutoff schedules.
///
/// Power: `Q_j = x^{j−c_j}`, `R_j = x^{c'_j}`.
/// Exponential: `Q_j = x^j·e^{−β_j√log x}`, `R_j = e^{β'_j√log x}`.
#[derive(Debug, Clone)]
pub enum ArcSchedule {
    Power { c: Vec<f64>, cp: Vec<f64> },
    Exponential { beta: Vec<f64>, betap: Vec<f64> },
}

impl ArcSchedule {
    /// Default power schedule `c_j = 2^{−10j−2}`, `c'_j = 2^{−10j−3}`, which
    /// keeps the ratio condition `c_{j+1} ≤ 2^{−10j}·c_j` with room.
    pub fn default_power(k: usize) -> ArcSchedule {
        let c = (1..=k).map(|j| 2f64.powi(-(10 * j as i32) - 2)).collect();
        let cp = (1..=k).map(|j| 2f64.powi(-(10 * j as i32) - 3)).collect();
        ArcSchedule::Power { c, cp }
    }

    /// Default exponential schedule with base value 0.01 and the same
    /// `2^{−10j}` decay between consecutive constants.
    pub fn default_exponential(k: usize) -> ArcSchedule {
        let beta: Vec<f64> = (1..=k)
            .map(|j| 0.01 * 2f64.powi(-10 * (j as i32 - 1)))
            .collect();
        let betap = beta.iter().map(|b| b / 2.0).collect();
        ArcSchedule::Exponential { beta, betap }
    }

    pub fn degree(&self) -> usize {
        match self {
            ArcSchedule::Power { c, .. } => c.len(),
            ArcSchedule::Exponential { beta, .. } => beta.len(),
        }
    }

    /// `(Q_j, R_j)` at the given x; j is 1-indexed.
    pub fn cutoffs(&self, j: usize, x: u64) -> (f64, f64) {
        let xf = x as f64;
        match self {
            ArcSchedule::Power { c, cp } => {
                (xf.powf(j as f64 - c[j - 1]), xf.powf(cp[j - 1]))
            }
            ArcSchedule::Exponential { beta, betap } => {
                let l = xf.ln().sqrt();
                (
                    xf.powi(j as i32) * (-beta[j - 1] * l).exp(),
                    (betap[j - 1] * l).exp(),
                )
            }
        }
    }

    pub fn validate(&self, x: u64) -> Result<()> {
        for j in 1..=self.degree() {
            let (q, r) = self.cutoffs(j, x);
            if !(r > 1.0) {
                return Err(Error::InvalidSchedule(format!(
                    "R_{j} = {r} must exceed 1 at x={x}"
                )));
            }
            if r >= q {
                return Err(Error::InvalidSchedule(format!(
                    "R_{j} = {r} must be below Q_{j} = {q} at x={x}"
                )));
            }
            if q < 2.0 {
                return Err(Error::InvalidSchedule(format!(
                    "Q_{j} = {q} must be ≥ 2 at x={x}"
                )));
            }
        }
        Ok(())
    }

    /// Exponent bookkeeping of the closed-form major/minor bounds. For a
    /// power schedule: `γ₁ = 1/2 + max c_j + Σc'_j/2` and
    /// `γ₂ = 1/2 + max_{j≥2} c_j + Σ_{j≥2} c'_j`. For the exponential
    /// schedule the analogous amounts subtracted from the (ineffective)
    /// progression-decay constants: `max β_j + (3/2)Σβ'_j` and
    /// `max_{j≥2} β_j + Σ_{j≥2} β'_j`.
    pub fn exponent_bookkeeping(&self) -> (f64, f64) {
        match self {
            ArcSchedule::Power { c, cp } => {
                let g1 = 0.5
                    + c.iter().cloned().fold(0.0, f64::max)
                    + 0.5 * cp.iter().sum::<f64>();
                let g2 = 0.5
                    + c.iter().skip(1).cloned().fold(0.0, f64::max)
                    + cp.iter().skip(1).sum::<f64>();
                (g1, g2)
            }
            ArcSchedule::Exponential { beta, betap } => {
                let g1 = beta.iter().cloned().fold(0.0, f64::max)
                    + 1.5 * betap.iter().sum::<f64>();
                let g2 = beta.iter().skip(1).cloned().fold(0.0, f64::max)
                    + betap.iter().skip(1).sum::<f64>();
                (g1, g2)
            }
        }
    }
}

/// Per-coefficient classification record.
#[derive(Debug, Clone)]
pub struct CoefficientArc {
    pub j: usize,
    pub approx: RationalApprox,
    pub q_cutoff: f64,
    pub r_cutoff: f64,
    /// Major iff `q_j ≤ R_j`.
    pub major: bool,
}

#[derive(Debug, Clone)]
pub struct ArcClassification {
    pub per_coefficient: Vec<CoefficientArc>,
    /// `d = max{j : q_j > R_j}`, 0 if every coefficient is major.
    pub d: usize,
}

impl ArcClassification {
    pub fn overall_major(&self) -> bool {
        self.d == 0
    }
}

pub fn classify(
    p: &PhasePolynomial,
    schedule: &ArcSchedule,
    x: u64,
) -> Result<ArcClassification> {
    if schedule.degree() != p.degree() {
        return Err(Error::InvalidSchedule(format!(
            "schedule degree {} does not match polynomial degree {}",
            schedule.degree(),
            p.degree()
        )));
    }
    schedule.validate(x)?;
    let mut per_coefficient = Vec::with_capacity(p.degree());
    let mut d = 0usize;
    for j in 1..=p.degree() {
        let (qj, rj) = schedule.cutoffs(j, x);
        let q_cap = BigUint::from_f64(qj.floor()).ok_or_else(|| {
            Error::InvalidSchedule(format!("Q_{j} = {qj} not representable"))
        })?;
        let approx = best_approx(p.coeff(j), &q_cap)?;
        let r_floor = BigUint::from_f64(rj.floor()).unwrap_or_default();
        let major = approx.q <= r_floor;
        if !major {
            d = j;
        }
        per_coefficient.push(CoefficientArc {
            j,
            approx,
            q_cutoff: qj,
            r_cutoff: rj,
            major,
        });
    }
    Ok(ArcClassification { per_coefficient, d })
}

/// A polynomial with exact rational coefficients, `Σ_{j=1..k} c_j n^j`.
#[derive(Debug, Clone)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("degree must be ≥ 1".into()));
        }
        Ok(RationalPolynomial { coeffs })
    }

    pub fn from_u64_fractions(fracs: &[(u64, u64)]) -> Result<Self> {
        let coeffs = fracs
            .iter()
            .map(|&(a, q)| {
                if q == 0 {
                    Err(Error::DivisionByZero("denominator 0".into()))
                } else {
                    Ok(BigRational::new(BigInt::from(a), BigInt::from(q)))
                }
            })
            .collect::<Result<_>>()?;
        RationalPolynomial::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `q = lcm` of the reduced denominators.
    pub fn lcm_denominator(&self) -> BigUint {
        let mut q = BigUint::one();
        for c in &self.coeffs {
            let den = c.denom().to_biguint().expect("denominators positive");
            q = q.lcm(&den);
        }
        q
    }

    /// Integerized coefficients mod q (u64 residues) together with q.
    /// Errors when q exceeds the progression limit.
    pub fn integerized_mod_q(&self) -> Result<(Vec<u64>, u64)> {
        let q_big = self.lcm_denominator();
        let q = q_big
            .to_u64()
            .filter(|&q| q <= PROGRESSION_MODULUS_LIMIT)
            .ok_or_else(|| {
                Error::Feasibility(format!(
                    "lcm denominator {q_big} exceeds limit {PROGRESSION_MODULUS_LIMIT}"
                ))
            })?;
        let qi = BigInt::from(q);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = c * &qi; // integer: q kills the denominator
                debug_assert!(scaled.is_integer());
                scaled
                    .to_integer()
                    .mod_floor(&qi)
                    .to_u64()
                    .expect("residue below q fits u64")
            })
            .collect();
        Ok((coeffs, q))
    }
}

/// The major-arc split `P = P̄ + R`: `P̄` has the rational coefficients
/// `a_j/q_j`, `R` the signed circle residuals `α_j − a_j/q_j` (absolute
/// value ≤ `1/(q_j Q_j)` each), plus `q = lcm(q_j)` and the integerized
/// `P̃ = q·P̄` reduced mod q.
#[derive(Debug, Clone)]
pub struct SplitPolynomial {
    pub rational: RationalPolynomial,
    pub remainder: Vec<BigRational>,
    pub q: BigUint,
    pub integerized: Vec<BigUint>,
}

pub fn split_polynomial(
    p: &PhasePolynomial,
    cls: &ArcClassification,
) -> Result<SplitPolynomial> {
    if cls.per_coefficient.len() != p.degree() {
        return Err(Error::Precondition(
            "classification does not match polynomial degree".into(),
        ));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let one = BigRational::one();
    let mut rational = Vec::with_capacity(p.degree());
    let mut remainder = Vec::with_capacity(p.degree());
    for (idx, arc) in cls.per_coefficient.iter().enumerate() {
        let frac = arc.approx.fraction();
        let (num, den) = crate::fixed::to_exact_ratio(p.coeff(idx + 1));
        let alpha = BigRational::new(num, den);
        // signed circle residual in (−1/2, 1/2]
        let mut delta = &alpha - &frac;
        while delta > half {
            delta -= &one;
        }
        while delta <= -half.clone() {
            delta += &one;
        }
        rational.push(frac);
        remainder.push(delta);
    }
    let rational = RationalPolynomial::new(rational)?;
    let q = rational.lcm_denominator();
    let qi = BigInt::from(q.clone());
    let integerized = rational
        .coeffs()
        .iter()
        .map(|c| {
            let scaled = c * &qi;
            debug_assert!(scaled.is_integer());
            scaled
                .to_integer()
                .mod_floor(&qi)
                .to_biguint()
                .expect("mod_floor is non-negative")
        })
        .collect();
    Ok(SplitPolynomial {
        rational,
        remainder,
        q,
        integerized,
    })
}

/// `Σ_{n≤t, n ≡ b (mod q)} a(n)`.
pub fn progression_sum(a: &RealSequence, t: u64, q: u64, b: u64) -> Result<f64> {
    if q == 0 || q > PROGRESSION_MODULUS_LIMIT {
        return Err(Error::Feasibility(format!(
            "modulus q={q} outside (0, {PROGRESSION_MODULUS_LIMIT}]"
        )));
    }
    if b == 0 || b > q {
        return Err(Error::Precondition(format!("need 1 ≤ b ≤ q, got b={b}")));
    }
    if t > a.len() {
        return Err(Error::Precondition(format!(
            "t={t} outside sequence length {}",
            a.len()
        )));
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut n = b;
    while n <= t {
        let y = a.get(n) - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        n += q;
    }
    Ok(sum)
}

/// `Σ_{b=1..q} |S_a(t; q, b)|` against the progression envelope `√(q·t)`.
pub fn progression_l1_report(a: &RealSequence, t: u64, q: u64) -> Result<BoundReport> {
    let mut lhs = 0.0f64;
    for b in 1..=q {
        lhs += progression_sum(a, t, q, b)?.abs();
    }
    Ok(
        BoundReport::new("progression-l1", lhs, ((q * t) as f64).sqrt())
            .with_param("q", q as f64)
            .with_param("t", t as f64),
    )
}

/// Phase table `e(P̃(r)/q)` for r = 0..q−1, by Horner evaluation mod q.
fn rational_phase_table(coeffs_mod_q: &[u64], q: u64) -> Vec<Complex64> {
    rational_frac_table(coeffs_mod_q, q)
        .into_iter()
        .map(unit)
        .collect()
}

/// `P̃(r)/q mod 1` for r = 0..q−1 as exact fixed-point fractions.
fn rational_frac_table(coeffs_mod_q: &[u64], q: u64) -> Vec<Frac192> {
    (0..q)
        .map(|r| {
            let mut acc: u64 = 0;
            for &c in coeffs_mod_q.iter().rev() {
                // builds Σ c_j r^j from the top: acc ← (acc + c_j)·r mod q
                acc = ((acc + c) as u128 * r as u128 % q as u128) as u64;
            }
            Frac192::from_u64_ratio(acc, q).expect("q > 0")
        })
        .collect()
}

/// Exact finite identity: for purely rational `P̄ = P̃/q`,
/// `S_a(t, P̄) = Σ_{b=1..q} e(P̃(b)/q)·S_a(t; q, b)`.
/// Both sides are computed along different routes (per-term vs aggregated
/// progressions); the report carries the observed deviation against
/// `1e-9·t`.
pub fn major_identity_check(
    a: &RealSequence,
    t: u64,
    pbar: &RationalPolynomial,
) -> Result<BoundReport> {
    if t == 0 || t > a.len() {
        return Err(Error::Precondition(format!(
            "t={t} outside sequence length {}",
            a.len()
        )));
    }
    let (coeffs, q) = pbar.integerized_mod_q()?;
    let etable = rational_phase_table(&coeffs, q);

    let mut lhs = KahanComplex::default();
    for n in 1..=t {
        lhs.add(etable[(n % q) as usize] * a.get(n));
    }
    let mut rhs = KahanComplex::default();
    for b in 1..=q {
        let s_b = progression_sum(a, t, q, b)?;
        rhs.add(etable[(b % q) as usize] * s_b);
    }
    let deviation = (lhs.value() - rhs.value()).norm();
    Ok(BoundReport::new(
        "major-arc-identity",
        deviation,
        MAJOR_IDENTITY_TOL * t as f64,
    )
    .with_param("q", q as f64)
    .with_param("t", t as f64))
}

/// Exact finite identity via orthogonality of additive characters: with
/// `L(n) = α₁n` and `R₁ = R̃₁/q̄` supported on degrees ≥ 2,
/// `S_a(t, L+R₁) = Σ_b e(R̃₁(b)/q̄)·(1/q̄)·Σ_c e(−bc/q̄)·Σ_{n≤t} a(n)e((α₁+c/q̄)n)`.
pub fn character_expansion_check(
    a: &RealSequence,
    t: u64,
    alpha1: Frac192,
    rbar: &RationalPolynomial,
) -> Result<BoundReport> {
    if t == 0 || t > a.len() {
        return Err(Error::Precondition(format!(
            "t={t} outside sequence length {}",
            a.len()
        )));
    }
    if rbar.degree() < 2 {
        return Err(Error::Precondition(
            "character expansion needs a degree ≥ 2 rational part".into(),
        ));
    }
    if !rbar.coeffs()[0].is_zero() {
        return Err(Error::Precondition(
            "the linear coefficient of the rational part must be zero".into(),
        ));
    }
    let (coeffs, qbar) = rbar.integerized_mod_q()?;
    if qbar > CHARACTER_MODULUS_LIMIT {
        return Err(Error::Feasibility(format!(
            "q̄={qbar} exceeds character-expansion limit {CHARACTER_MODULUS_LIMIT}"
        )));
    }
    let frac_table = rational_frac_table(&coeffs, qbar);

    // left: S_a(t, L + R₁), rational part from the residue table
    let mut lhs = KahanComplex::default();
    let mut lin = Frac192::ZERO;
    for n in 1..=t {
        lin = lin.wrapping_add(alpha1);
        let theta = lin.wrapping_add(frac_table[(n % qbar) as usize]);
        lhs.add(unit(theta) * a.get(n));
    }

    // right: T_c = Σ a(n)·e((α₁ + c/q̄)n), then the double character sum
    let t_sums: Vec<Complex64> = (1..=qbar)
        .map(|c| {
            let coef =
                alpha1.wrapping_add(Frac192::from_u64_ratio(c % qbar, qbar).unwrap());
            let mut acc = KahanComplex::default();
            let mut phase = Frac192::ZERO;
            for n in 1..=t {
                phase = phase.wrapping_add(coef);
                acc.add(unit(phase) * a.get(n));
            }
            acc.value()
        })
        .collect();
    let mut rhs = KahanComplex::default();
    let inv_q = 1.0 / qbar as f64;
    for b in 1..=qbar {
        let outer = unit(frac_table[(b % qbar) as usize]); // e(R̃₁(b)/q̄)
        let mut inner = KahanComplex::default();
        for c in 1..=qbar {
            let chi = unit(
                Frac192::from_u64_ratio((b * c) % qbar, qbar)
                    .unwrap()
                    .wrapping_neg(),
            );
            inner.add(chi * t_sums[(c - 1) as usize]);
        }
        rhs.add(outer * inner.value() * inv_q);
    }
    let deviation = (lhs.value() - rhs.value()).norm();
    Ok(BoundReport::new(
        "character-expansion-identity",
        deviation,
        CHARACTER_EXPANSION_TOL * t as f64,
    )
    .with_param("qbar", qbar as f64)
    .with_param("t", t as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::lambda_table;
    use crate::fixed::parse_coefficient;
    use num_traits::Signed;

    fn approx(alpha: Frac192, q: u64) -> RationalApprox {
        best_approx(alpha, &BigUint::from(q)).unwrap()
    }

    #[test]
    fn exact_rational_is_recovered() {
        let third = Frac192::from_u64_ratio(1, 3).unwrap();
        let r = approx(third, 10);
        assert_eq!(r.a, BigUint::from(1u32));
        assert_eq!(r.q, BigUint::from(3u32));
        // fixed-point 1/3 is floor(2^192/3)/2^192, one ulp below 1/3
        assert!(r.err < 1e-55);
    }

    #[test]
    fn sqrt2_minus_one_convergent() {
        let alpha = parse_coefficient("sqrt2").unwrap(); // √2 − 1
        let r = approx(alpha, 10);
        assert_eq!(r.a, BigUint::from(2u32));
        assert_eq!(r.q, BigUint::from(5u32));
        assert!((r.err - 0.01421356).abs() < 1e-6);
        assert!(r.err <= 1.0 / 50.0);
        assert!(r.satisfies_dirichlet(alpha));
    }

    #[test]
    fn zero_maps_to_unit_fraction() {
        let r = approx(Frac192::ZERO, 100);
        assert_eq!(r.a, BigUint::from(1u32));
        assert_eq!(r.q, BigUint::from(1u32));
        assert_eq!(r.err, 0.0);
    }

    #[test]
    fn near_one_wraps_to_unit_fraction() {
        let alpha = parse_coefficient("0.999").unwrap();
        let r = approx(alpha, 500);
        // 999/1000 needs q = 1000 > Q; 1/1 has circle error 0.001 ≤ 1/(1·500)
        assert_eq!(r.q, BigUint::from(1u32));
        assert_eq!(r.a, BigUint::from(1u32));
        assert!((r.err - 0.001).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_bound_randomized() {
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let alpha = Frac192::from_limbs([next(), next(), next()]);
            let q_cap = 2 + next() % 1_000_000;
            let r = best_approx(alpha, &BigUint::from(q_cap)).unwrap();
            assert!(r.q <= BigUint::from(q_cap));
            assert!(r.satisfies_dirichlet(alpha), "alpha={alpha:?} Q={q_cap}");
            assert!(!r.a.is_zero() && r.a <= r.q);
        }
    }

    #[test]
    fn classify_all_halves_is_major() {
        let p = PhasePolynomial::new(vec![Frac192::HALF, Frac192::HALF]).unwrap();
        // R_j ≈ 6.3 ≥ 2 under this schedule
        let schedule = ArcSchedule::Power {
            c: vec![0.5, 0.5],
            cp: vec![0.2, 0.2],
        };
        let cls = classify(&p, &schedule, 10_000).unwrap();
        assert!(cls.overall_major());
        assert_eq!(cls.d, 0);
        for arc in &cls.per_coefficient {
            assert!(arc.major);
            assert_eq!(arc.approx.q, BigUint::from(2u32));
        }
    }

    #[test]
    fn classify_golden_leading_is_minor() {
        // Golden-ratio fractional part has Fibonacci convergent denominators;
        // with R₂ < 3 the needed denominator is unreachable, so j=2 is minor.
        let p = PhasePolynomial::new(vec![Frac192::HALF, Frac192::golden()]).unwrap();
        let schedule = ArcSchedule::Power {
            c: vec![0.5, 0.5],
            cp: vec![0.2, 0.05],
        };
        let x = 10_000u64;
        let (_, r2) = schedule.cutoffs(2, x);
        assert!(r2 < 3.0);
        let cls = classify(&p, &schedule, x).unwrap();
        assert!(!cls.per_coefficient[1].major);
        assert_eq!(cls.d, 2);
        assert!(!cls.overall_major());
    }

    #[test]
    fn classify_monotone_in_r() {
        // Enlarging every R_j can only move verdicts minor → major.
        let p = PhasePolynomial::new(vec![
            parse_coefficient("sqrt2").unwrap(),
            Frac192::golden(),
            parse_coefficient("0.1234567").unwrap(),
        ])
        .unwrap();
        let x = 100_000u64;
        let small = ArcSchedule::Power {
            c: vec![0.3; 3],
            cp: vec![0.02; 3],
        };
        let large = ArcSchedule::Power {
            c: vec![0.3; 3],
            cp: vec![0.4; 3],
        };
        let cls_small = classify(&p, &small, x).unwrap();
        let cls_large = classify(&p, &large, x).unwrap();
        assert!(cls_large.d <= cls_small.d);
        for (s, l) in cls_small
            .per_coefficient
            .iter()
            .zip(&cls_large.per_coefficient)
        {
            if s.major {
                assert!(l.major);
            }
        }
    }

    #[test]
    fn invalid_schedule_rejected() {
        let p = PhasePolynomial::new(vec![Frac192::HALF]).unwrap();
        let bad = ArcSchedule::Power {
            c: vec![0.1],
            cp: vec![0.95], // R ≥ Q
        };
        assert!(matches!(
            classify(&p, &bad, 1000),
            Err(Error::InvalidSchedule(_))
        ));
    }

    #[test]
    fn default_schedules_are_valid() {
        for k in 1..=5 {
            ArcSchedule::default_power(k).validate(1_000_000).unwrap();
            ArcSchedule::default_exponential(k)
                .validate(1_000_000)
                .unwrap();
        }
        let (g1, g2) = ArcSchedule::default_power(3).exponent_bookkeeping();
        assert!(g1 > 0.5 && g1 < 1.0);
        assert!(g2 > 0.5 && g2 < 1.0);
    }

    #[test]
    fn split_reconstructs_polynomial() {
        // 5/16 has a dyadic denominator, so its fixed-point image is exact.
        let p = PhasePolynomial::new(vec![
            parse_coefficient("sqrt2").unwrap(),
            parse_coefficient("5/16").unwrap(),
        ])
        .unwrap();
        let schedule = ArcSchedule::Power {
            c: vec![0.4, 0.4],
            cp: vec![0.3, 0.3],
        };
        let cls = classify(&p, &schedule, 10_000).unwrap();
        let split = split_polynomial(&p, &cls).unwrap();
        assert!(split.remainder[1].is_zero());
        assert_eq!(
            split.rational.coeffs()[1],
            BigRational::new(BigInt::from(5), BigInt::from(16))
        );
        // |remainder_j| ≤ 1/(q_j·Q_j)
        for (arc, rem) in cls.per_coefficient.iter().zip(&split.remainder) {
            let bound = BigRational::new(
                BigInt::one(),
                BigInt::from(arc.approx.q.clone()) * BigInt::from(arc.approx.q_max.clone()),
            );
            assert!(rem.abs() <= bound);
        }
        // P̄(n) + R(n) ≡ P(n) (mod 1) at n = 1..100
        for n in 1..=100u64 {
            let mut total = BigRational::zero();
            let nn = BigInt::from(n);
            let mut pw = BigInt::one();
            for j in 0..2 {
                pw = &pw * &nn;
                total += (&split.rational.coeffs()[j] + &split.remainder[j])
                    * BigRational::from_integer(pw.clone());
            }
            let frac = &total - total.floor();
            let expect = p.eval(n).unwrap().to_f64();
            let got = frac.to_f64().unwrap();
            let diff = (got - expect).abs();
            assert!(diff < 1e-12 || (1.0 - diff) < 1e-12, "n={n} diff={diff}");
        }
    }

    #[test]
    fn lcm_example() {
        let p = RationalPolynomial::from_u64_fractions(&[(1, 4), (1, 6)]).unwrap();
        assert_eq!(p.lcm_denominator(), BigUint::from(12u32));
        let (coeffs, q) = p.integerized_mod_q().unwrap();
        assert_eq!(q, 12);
        assert_eq!(coeffs, vec![3, 2]);
    }

    #[test]
    fn progression_trivia() {
        let ones = RealSequence::ones(10).unwrap();
        assert_eq!(progression_sum(&ones, 10, 3, 1).unwrap(), 4.0);
        // partition: Σ_b S(t; q, b) = Σ_{n≤t} a(n)
        let total: f64 = (1..=3)
            .map(|b| progression_sum(&ones, 10, 3, b).unwrap())
            .sum();
        assert_eq!(total, 10.0);
        assert!(progression_sum(&ones, 10, 3, 0).is_err());
        assert!(progression_sum(&ones, 10, 3, 4).is_err());
        assert!(progression_sum(&ones, 10, PROGRESSION_MODULUS_LIMIT + 1, 1).is_err());
    }

    #[test]
    fn progression_l1_reported() {
        let lam = lambda_table(2000).unwrap();
        let r = progression_l1_report(&lam, 2000, 7).unwrap();
        assert!(r.lhs > 0.0 && r.ratio.is_finite());
        assert_eq!(r.envelope, (7.0f64 * 2000.0).sqrt());
    }

    #[test]
    fn major_identity_trivial_q1() {
        let ones = RealSequence::ones(50).unwrap();
        let pbar = RationalPolynomial::from_u64_fractions(&[(0, 1), (2, 1)]).unwrap();
        let r = major_identity_check(&ones, 50, &pbar).unwrap();
        assert!(r.passes());
        assert!(r.lhs < 1e-12);
    }

    #[test]
    fn major_identity_alternating() {
        // P̄(n) = n/2 at t = 4: both sides vanish.
        let ones = RealSequence::ones(4).unwrap();
        let pbar = RationalPolynomial::from_u64_fractions(&[(1, 2)]).unwrap();
        let r = major_identity_check(&ones, 4, &pbar).unwrap();
        assert!(r.passes());
    }

    #[test]
    fn major_identity_lambda_randomized() {
        let lam = lambda_table(5000).unwrap();
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..10 {
            let q1 = 1 + next() % 12;
            let q2 = 1 + next() % 12;
            let pbar = RationalPolynomial::from_u64_fractions(&[
                (next() % (q1 + 1), q1),
                (next() % (q2 + 1), q2),
            ])
            .unwrap();
            let t = 1000 + next() % 4000;
            let r = major_identity_check(&lam, t, &pbar).unwrap();
            assert!(r.passes(), "q1={q1} q2={q2} t={t}: {}", r.lhs);
        }
    }

    #[test]
    fn character_expansion_collapses_at_q1() {
        let ones = RealSequence::ones(100).unwrap();
        let rbar = RationalPolynomial::from_u64_fractions(&[(0, 1), (0, 1)]).unwrap();
        let alpha1 = parse_coefficient("sqrt2").unwrap();
        let r = character_expansion_check(&ones, 100, alpha1, &rbar).unwrap();
        assert!(r.passes());
    }

    #[test]
    fn character_expansion_small_modulus() {
        let ones = RealSequence::ones(200).unwrap();
        let rbar = RationalPolynomial::from_u64_fractions(&[(0, 1), (1, 2)]).unwrap();
        let alpha1 = parse_coefficient("golden").unwrap();
        let r = character_expansion_check(&ones, 200, alpha1, &rbar).unwrap();
        assert!(r.passes(), "deviation {}", r.lhs);
    }

    #[test]
    fn character_expansion_lambda() {
        let lam = lambda_table(1000).unwrap();
        let rbar =
            RationalPolynomial::from_u64_fractions(&[(0, 1), (5, 12), (7, 12)]).unwrap();
        let alpha1 = parse_coefficient("sqrt2").unwrap();
        let r = character_expansion_check(&lam, 1000, alpha1, &rbar).unwrap();
        assert!(r.passes(), "deviation {}", r.lhs);
    }

    #[test]
    fn character_expansion_rejects_linear_part() {
        let ones = RealSequence::ones(10).unwrap();
        let bad = RationalPolynomial::from_u64_fractions(&[(1, 3), (1, 2)]).unwrap();
        assert!(character_expansion_check(&ones, 10, Frac192::ZERO, &bad).is_err());
        let too_short = RationalPolynomial::from_u64_fractions(&[(0, 1)]).unwrap();
        assert!(character_expansion_check(&ones, 10, Frac192::ZERO, &too_short).is_err());
    }
}
