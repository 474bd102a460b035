//! 192-bit fixed-point fractions in `[0, 1)`.
//!
//! A phase coefficient is stored as an unsigned 192-bit integer `A` with the
//! meaning `A / 2^192`; wrap-around addition is then exactly addition mod 1,
//! which is the only structure polynomial phase evaluation needs. 192
//! fractional bits leave ample headroom: the worst in-scope rounding
//! amplification is `n^k ≈ 2^100` (degree 5 at `n = 10^6`), so accumulated
//! coefficient-rounding error stays below `2^-90`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Number of fractional bits.
pub const FRAC_BITS: u32 = 192;

const MASK64: u128 = u64::MAX as u128;

/// Fixed-point fraction in `[0, 1)` with 192 fractional bits.
/// Limbs are little-endian: value = (l0 + l1·2^64 + l2·2^128) / 2^192.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Frac192([u64; 3]);

impl Frac192 {
    pub const ZERO: Frac192 = Frac192([0, 0, 0]);
    /// 1/2 exactly.
    pub const HALF: Frac192 = Frac192([0, 0, 1u64 << 63]);

    pub fn from_limbs(limbs: [u64; 3]) -> Self {
        Frac192(limbs)
    }

    pub fn limbs(self) -> [u64; 3] {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// Addition mod 1.
    pub fn wrapping_add(self, rhs: Frac192) -> Frac192 {
        let (r0, c0) = self.0[0].overflowing_add(rhs.0[0]);
        let (r1a, c1a) = self.0[1].overflowing_add(rhs.0[1]);
        let (r1, c1b) = r1a.overflowing_add(c0 as u64);
        let r2 = self.0[2]
            .wrapping_add(rhs.0[2])
            .wrapping_add((c1a as u64) + (c1b as u64));
        Frac192([r0, r1, r2])
    }

    /// Negation mod 1 (distance to the next integer above, as a fraction).
    pub fn wrapping_neg(self) -> Frac192 {
        if self.is_zero() {
            self
        } else {
            let (r0, b0) = 0u64.overflowing_sub(self.0[0]);
            let (r1a, b1a) = 0u64.overflowing_sub(self.0[1]);
            let (r1, b1b) = r1a.overflowing_sub(b0 as u64);
            let r2 = 0u64
                .wrapping_sub(self.0[2])
                .wrapping_sub((b1a as u64) + (b1b as u64));
            Frac192([r0, r1, r2])
        }
    }

    pub fn wrapping_sub(self, rhs: Frac192) -> Frac192 {
        self.wrapping_add(rhs.wrapping_neg())
    }

    /// Multiply by a non-negative integer, mod 1. Exact: discarding the bits
    /// above 2^192 of the full product is exactly reduction mod 1.
    pub fn mul_u128(self, m: u128) -> Frac192 {
        let m0 = (m & MASK64) as u64;
        let m1 = (m >> 64) as u64;
        let [a0, a1, a2] = self.0;

        let p00 = (a0 as u128) * (m0 as u128);
        let p10 = (a1 as u128) * (m0 as u128);
        let p01 = (a0 as u128) * (m1 as u128);
        let p20 = (a2 as u128) * (m0 as u128);
        let p11 = (a1 as u128) * (m1 as u128);

        let r0 = (p00 & MASK64) as u64;
        let carry1 = p00 >> 64;

        let col1 = (p10 & MASK64) + (p01 & MASK64) + carry1;
        let r1 = (col1 & MASK64) as u64;
        let carry2 = (col1 >> 64) + (p10 >> 64) + (p01 >> 64);

        let col2 = (p20 & MASK64)
            .wrapping_add(p11 & MASK64)
            .wrapping_add(carry2);
        let r2 = (col2 & MASK64) as u64;

        Frac192([r0, r1, r2])
    }

    /// Multiply by a signed integer, mod 1.
    pub fn mul_i128(self, m: i128) -> Frac192 {
        let prod = self.mul_u128(m.unsigned_abs());
        if m < 0 {
            prod.wrapping_neg()
        } else {
            prod
        }
    }

    /// Leading 128 bits as f64; error below 2^-128.
    pub fn to_f64(self) -> f64 {
        const INV64: f64 = 1.0 / 18446744073709551616.0; // 2^-64
        (self.0[2] as f64) * INV64 + (self.0[1] as f64) * INV64 * INV64
    }

    /// Distance to the nearest integer, `‖value‖ = min(v, 1 - v)`.
    pub fn dist_to_int(self) -> f64 {
        if self.0[2] >> 63 == 0 {
            self.to_f64()
        } else {
            self.wrapping_neg().to_f64()
        }
    }

    pub fn to_biguint(self) -> BigUint {
        let mut v = BigUint::from(self.0[2]);
        v <<= 64;
        v += self.0[1];
        v <<= 64;
        v += self.0[0];
        v
    }

    /// Low 192 bits of a BigUint, i.e. its value mod 2^192.
    pub fn from_biguint_mod1(v: &BigUint) -> Frac192 {
        let digits = v.to_u64_digits();
        let limb = |i: usize| digits.get(i).copied().unwrap_or(0);
        Frac192([limb(0), limb(1), limb(2)])
    }

    /// The fractional part of `num / den`, exact to the last bit.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Frac192> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("fraction with denominator 0".into()));
        }
        let den = den.abs();
        let r = num.mod_floor(&den); // in [0, den)
        let r = r.to_biguint().expect("mod_floor is non-negative");
        let den = den.to_biguint().expect("abs is non-negative");
        let scaled = (r << FRAC_BITS) / den;
        Ok(Frac192::from_biguint_mod1(&scaled))
    }

    pub fn from_u64_ratio(num: u64, den: u64) -> Result<Frac192> {
        Frac192::from_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    /// Round an f64 in-range value to fixed point (convenience; CLI input
    /// goes through [`parse_coefficient`] instead to avoid the double).
    pub fn from_f64(x: f64) -> Result<Frac192> {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite coefficient {x}")));
        }
        let mut f = x.fract();
        if f < 0.0 {
            f += 1.0;
        }
        if f >= 1.0 {
            f = 0.0; // x was a negative value with fract rounding up to 1
        }
        let hi_f = f * 18446744073709551616.0; // f · 2^64
        let hi = hi_f.floor();
        let mid_f = (hi_f - hi) * 18446744073709551616.0;
        let mid = mid_f.floor();
        let lo_f = (mid_f - mid) * 18446744073709551616.0;
        Ok(Frac192([lo_f.floor() as u64, mid as u64, hi as u64]))
    }

    /// `frac(√n)` to full precision: `isqrt(n · 2^384) mod 2^192`.
    pub fn sqrt_of_integer(n: u64) -> Frac192 {
        let scaled: BigUint = BigUint::from(n) << (2 * FRAC_BITS);
        let root = scaled.sqrt();
        Frac192::from_biguint_mod1(&root)
    }

    /// `(√5 − 1)/2`, the golden-ratio fractional part.
    pub fn golden() -> Frac192 {
        let root5 = (BigUint::from(5u32) << (2 * FRAC_BITS)).sqrt();
        let one = BigUint::from(1u32) << FRAC_BITS;
        let frac = (root5 - one) >> 1;
        Frac192::from_biguint_mod1(&frac)
    }
}

impl std::fmt::Debug for Frac192 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Frac192({:.17} = {:#018x}_{:016x}_{:016x})",
            self.to_f64(),
            self.0[2],
            self.0[1],
            self.0[0]
        )
    }
}

/// Parse a phase coefficient without any f64 round trip.
///
/// Accepted forms: decimal (`0.25`, `.5`, `-0.125`, `2.75`), exact rationals
/// (`3/7`, `-1/4`), and the named constants `sqrt2` (frac of √2) and
/// `golden` (`(√5−1)/2`). Values are reduced mod 1.
pub fn parse_coefficient(s: &str) -> Result<Frac192> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::InvalidInput("empty coefficient".into()));
    }
    match t {
        "sqrt2" => return Ok(Frac192::sqrt_of_integer(2)),
        "golden" => return Ok(Frac192::golden()),
        _ => {}
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rational numerator in {t:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rational denominator in {t:?}")))?;
        return Frac192::from_ratio(&num, &den);
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Result<Frac192> {
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::InvalidInput(format!("bad decimal {t:?}")));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::InvalidInput(format!("bad decimal {t:?}")));
    }
    // Integer part only matters mod 1, i.e. not at all.
    let value = if frac_part.is_empty() {
        Frac192::ZERO
    } else {
        let digits: BigUint = frac_part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad decimal {t:?}")))?;
        let scale = BigUint::from(10u32).pow(frac_part.len() as u32);
        let scaled = (digits << FRAC_BITS) / scale;
        Frac192::from_biguint_mod1(&scaled)
    };
    Ok(if negative { value.wrapping_neg() } else { value })
}

/// Exact rational view of a fixed-point fraction, `A / 2^192`.
pub fn to_exact_ratio(f: Frac192) -> (BigInt, BigInt) {
    let num = BigInt::from_biguint(Sign::Plus, f.to_biguint());
    let den = BigInt::from(1) << FRAC_BITS;
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plus_half_wraps() {
        assert_eq!(Frac192::HALF.wrapping_add(Frac192::HALF), Frac192::ZERO);
    }

    #[test]
    fn third_times_three_is_almost_zero() {
        let third = Frac192::from_u64_ratio(1, 3).unwrap();
        let v = third.mul_u128(3);
        // floor(2^192/3)·3 = 2^192 − 1, i.e. distance 2^-192 from 0.
        assert!(v.dist_to_int() < 1e-30);
    }

    #[test]
    fn mul_matches_biguint() {
        let a = Frac192::sqrt_of_integer(2);
        for &m in &[1u128, 2, 3, 12345, u64::MAX as u128, u128::MAX / 7] {
            let expect =
                Frac192::from_biguint_mod1(&(a.to_biguint() * BigUint::from(m)));
            assert_eq!(a.mul_u128(m), expect, "m={m}");
        }
    }

    #[test]
    fn neg_is_additive_inverse() {
        for f in [
            Frac192::from_u64_ratio(3, 7).unwrap(),
            Frac192::golden(),
            Frac192::from_limbs([1, 0, 0]),
        ] {
            assert_eq!(f.wrapping_add(f.wrapping_neg()), Frac192::ZERO);
        }
        assert_eq!(Frac192::ZERO.wrapping_neg(), Frac192::ZERO);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            parse_coefficient("1/2").unwrap(),
            Frac192::HALF
        );
        assert_eq!(
            parse_coefficient("0.5").unwrap(),
            Frac192::HALF
        );
        assert_eq!(parse_coefficient(".5").unwrap(), Frac192::HALF);
        assert_eq!(parse_coefficient("3").unwrap(), Frac192::ZERO);
        assert_eq!(parse_coefficient("2.5").unwrap(), Frac192::HALF);
        // -1/4 ≡ 3/4 (mod 1)
        assert_eq!(
            parse_coefficient("-1/4").unwrap(),
            Frac192::from_u64_ratio(3, 4).unwrap()
        );
        let s2 = parse_coefficient("sqrt2").unwrap().to_f64();
        assert!((s2 - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let g = parse_coefficient("golden").unwrap().to_f64();
        assert!((g - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!(parse_coefficient("abc").is_err());
        assert!(parse_coefficient("1/0").is_err());
    }

    #[test]
    fn distance_to_int() {
        assert_eq!(Frac192::HALF.dist_to_int(), 0.5);
        assert_eq!(Frac192::ZERO.dist_to_int(), 0.0);
        let quarter = Frac192::from_u64_ratio(1, 4).unwrap();
        assert_eq!(quarter.dist_to_int(), 0.25);
        let three_quarters = Frac192::from_u64_ratio(3, 4).unwrap();
        assert_eq!(three_quarters.dist_to_int(), 0.25);
    }

    #[test]
    fn f64_round_trip() {
        for &x in &[0.0, 0.25, 0.7071067811865476, 0.9999999999] {
            let f = Frac192::from_f64(x).unwrap();
            assert!((f.to_f64() - x).abs() < 1e-15, "x={x}");
        }
        let f = Frac192::from_f64(-0.25).unwrap();
        assert!((f.to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn decimal_parse_is_exact_not_f64() {
        // 0.1 in fixed point is floor(2^192/10), not the f64 nearest double.
        let parsed = parse_coefficient("0.1").unwrap();
        let exact = (BigUint::from(1u32) << FRAC_BITS) / BigUint::from(10u32);
        assert_eq!(parsed.to_biguint(), exact);
    }
}
