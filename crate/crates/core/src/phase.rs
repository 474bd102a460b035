//! Polynomial phases and exponential-sum kernels.
//!
//! A phase is `P(n) = Σ_{j=1..k} α_j n^j` with the `α_j` reduced mod 1 and
//! held in 192-bit fixed point. Two evaluation strategies are provided and
//! must agree exactly: direct per-term evaluation with exact wide-integer
//! powers (random access), and finite-difference streaming (full-range
//! scans). The difference table lives in the same wrap-around fixed-point
//! arithmetic, so streaming is exact modular integer arithmetic — only the
//! initial rounding of the coefficients matters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixed::Frac192;

/// Real polynomial `Σ_{j=1..k} α_j n^j` with mod-1 fixed-point coefficients.
/// Degree k ≥ 1; the zero polynomial is represented by [`Phase::One`]
/// instead (the top coefficient may be 0 only if a lower one is nonzero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePolynomial {
    coeffs: Vec<Frac192>, // coeffs[j-1] = α_j
}

impl PhasePolynomial {
    pub fn new(coeffs: Vec<Frac192>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("degree must be ≥ 1".into()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Precondition(
                "all-zero polynomial; use Phase::One for a constant phase".into(),
            ));
        }
        Ok(PhasePolynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient α_j, 1-indexed.
    pub fn coeff(&self, j: usize) -> Frac192 {
        self.coeffs[j - 1]
    }

    pub fn coeffs(&self) -> &[Frac192] {
        &self.coeffs
    }

    /// The polynomial with every coefficient negated mod 1, i.e. `-P`.
    pub fn negated(&self) -> PhasePolynomial {
        PhasePolynomial {
            coeffs: self.coeffs.iter().map(|c| c.wrapping_neg()).collect(),
        }
    }

    /// Exact value of `P(n)` mod 1 by direct evaluation.
    /// Errors when `n^degree` exceeds the u128 intermediate.
    pub fn eval(&self, n: u64) -> Result<Frac192> {
        let mut acc = Frac192::ZERO;
        let mut power: u128 = 1;
        for &c in &self.coeffs {
            power = power.checked_mul(n as u128).ok_or_else(|| {
                Error::Overflow(format!("n^j overflows u128 for n={n}"))
            })?;
            acc = acc.wrapping_add(c.mul_u128(power));
        }
        Ok(acc)
    }
}

/// A phase evaluator: either the constant phase 0 (so `e(·) ≡ 1`) or a
/// genuine polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase {
    One,
    Poly(PhasePolynomial),
}

impl Phase {
    /// Build from raw coefficients; an all-zero list collapses to `One`.
    pub fn from_coeffs(coeffs: Vec<Frac192>) -> Result<Phase> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("degree must be ≥ 1".into()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            Ok(Phase::One)
        } else {
            Ok(Phase::Poly(PhasePolynomial::new(coeffs)?))
        }
    }

    pub fn eval(&self, n: u64) -> Result<Frac192> {
        match self {
            Phase::One => Ok(Frac192::ZERO),
            Phase::Poly(p) => p.eval(n),
        }
    }

    /// Streaming scanner producing `P(start), P(start+1), …` exactly.
    pub fn scan(&self, start: u64) -> Result<PhaseScan> {
        match self {
            Phase::One => Ok(PhaseScan { diffs: Vec::new() }),
            Phase::Poly(p) => {
                let k = p.degree();
                // Forward differences of order 0..=k at `start`; the k-th is
                // constant, so advancing is k wrap-around additions.
                let mut table: Vec<Frac192> = (0..=k as u64)
                    .map(|j| p.eval(start + j))
                    .collect::<Result<_>>()?;
                let mut diffs = Vec::with_capacity(k + 1);
                diffs.push(table[0]);
                for _level in 1..=k {
                    for j in 0..table.len() - 1 {
                        table[j] = table[j + 1].wrapping_sub(table[j]);
                    }
                    table.pop();
                    diffs.push(table[0]);
                }
                Ok(PhaseScan { diffs })
            }
        }
    }
}

/// Finite-difference streaming state; `next_value()` yields consecutive
/// phase values with k additions each, bit-identical to direct evaluation.
pub struct PhaseScan {
    diffs: Vec<Frac192>, // empty for the constant phase
}

impl PhaseScan {
    #[inline]
    pub fn next_value(&mut self) -> Frac192 {
        if self.diffs.is_empty() {
            return Frac192::ZERO;
        }
        let out = self.diffs[0];
        for i in 0..self.diffs.len() - 1 {
            self.diffs[i] = self.diffs[i].wrapping_add(self.diffs[i + 1]);
        }
        out
    }
}

/// `e(θ) = exp(2πiθ)` from the leading bits of the fixed-point fraction.
#[inline]
pub fn unit(theta: Frac192) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * theta.to_f64()).sin_cos();
    Complex64::new(c, s)
}

/// Compensated (Kahan) accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    sum: Complex64,
    err: Complex64,
}

impl KahanComplex {
    pub fn add(&mut self, z: Complex64) {
        let y = z - self.err;
        let t = self.sum + y;
        self.err = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// `S_a(x, P) = Σ_{n≤x} a(n)·e(P(n))` with compensated accumulation.
pub fn exp_sum(a: &crate::coefficients::RealSequence, phase: &Phase, x: u64) -> Result<Complex64> {
    if x == 0 || x > a.len() {
        return Err(Error::Precondition(format!(
            "x={x} outside sequence length {}",
            a.len()
        )));
    }
    let mut scan = phase.scan(1)?;
    let mut acc = KahanComplex::default();
    for &an in &a.values()[..x as usize] {
        let theta = scan.next_value();
        acc.add(unit(theta) * an);
    }
    Ok(acc.value())
}

/// `W(y, U) = Σ_{n≤y} e(U(n))`, i.e. [`exp_sum`] with `a ≡ 1`.
pub fn weyl_sum(phase: &Phase, y: u64) -> Result<Complex64> {
    if y == 0 {
        return Err(Error::Precondition("y must be ≥ 1".into()));
    }
    let mut scan = phase.scan(1)?;
    let mut acc = KahanComplex::default();
    for _ in 0..y {
        acc.add(unit(scan.next_value()));
    }
    Ok(acc.value())
}

/// Prime-pair correlation data: for `φ(n) = e(P(n))` and distinct primes
/// `p ≠ q`, `φ(pm)·conj(φ(qm)) = e(Σ_j C_j α_j m^j)` with `C_j = p^j − q^j`.
#[derive(Debug, Clone)]
pub struct CorrelationSpec {
    p: u64,
    q: u64,
    base: PhasePolynomial,
    c: Vec<i128>, // C_j = p^j − q^j, exact
}

impl CorrelationSpec {
    pub fn new(p: u64, q: u64, base: &PhasePolynomial) -> Result<Self> {
        if p == q {
            return Err(Error::Precondition(format!(
                "correlation primes must be distinct, got p=q={p}"
            )));
        }
        let k = base.degree() as u32;
        let mut c = Vec::with_capacity(k as usize);
        for j in 1..=k {
            let pj = (p as i128).checked_pow(j).ok_or_else(|| {
                Error::Overflow(format!("p^{j} overflows i128 for p={p}"))
            })?;
            let qj = (q as i128).checked_pow(j).ok_or_else(|| {
                Error::Overflow(format!("q^{j} overflows i128 for q={q}"))
            })?;
            c.push(pj - qj);
        }
        Ok(CorrelationSpec {
            p,
            q,
            base: base.clone(),
            c,
        })
    }

    pub fn primes(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    pub fn c_coeffs(&self) -> &[i128] {
        &self.c
    }

    /// The mod-1 reduced difference polynomial `Σ_j (C_j α_j mod 1) m^j`.
    /// Reducing before evaluation keeps everything exact for any `C_j`.
    pub fn difference_phase(&self) -> Result<Phase> {
        let coeffs: Vec<Frac192> = self
            .c
            .iter()
            .enumerate()
            .map(|(i, &cj)| self.base.coeff(i + 1).mul_i128(cj))
            .collect();
        Phase::from_coeffs(coeffs)
    }
}

/// `Σ_{m≤y} e(Σ_j C_j α_j m^j)` for a correlation spec.
pub fn correlation_sum(spec: &CorrelationSpec, y: u64) -> Result<Complex64> {
    weyl_sum(&spec.difference_phase()?, y)
}
