use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fixreal::FixReal;
use super::NumericsError;

/// ⌊ln 2 · 2^576⌋.
const LN2_HEX: &str = "b17217f7d1cf79abc9e3b39803f2f6af40f343267298b62d8a0d175b8baafa2be7b876206debac98559552fb4afa1b10ed2eae35c138214427573b291169b8253e96ca16224ae8c5";

pub const LN2_TABLE_BITS: u32 = 576;

const GUARD_BITS: u32 = 24;

/// 2·atanh(num/den) at `w` fractional bits, |num/den| ≤ 1/3.
/// Returns (mantissa, error in ulps).
fn atanh2_series(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, u64) {
    if num.is_negative() {
        // odd function; keeps every shift below truncating toward zero
        let (v, e) = atanh2_series(&-num, den, w);
        return (-v, e);
    }
    let z: BigInt = (num << w).div_floor(den);
    if z.is_zero() && num.is_zero() {
        return (BigInt::zero(), 0);
    }
    let z2: BigInt = (&z * &z) >> w;
    let mut power = z.clone();
    let mut sum = z;
    let mut terms: u64 = 1;
    let mut k: u64 = 1;
    loop {
        power = (&power * &z2) >> w;
        if power.is_zero() {
            break;
        }
        k += 2;
        sum += &power / BigInt::from(k);
        terms += 1;
    }
    // per-term truncation plus the propagated error of z, power and the tail, doubled
    (sum << 1u32, 4 * terms + 32)
}

fn ln2_fixed(w: u32) -> (BigInt, u64) {
    if w <= LN2_TABLE_BITS {
        let table = BigInt::parse_bytes(LN2_HEX.as_bytes(), 16).expect("valid constant");
        (table >> (LN2_TABLE_BITS - w), 1)
    } else {
        // ln 2 = 2·atanh(1/3)
        atanh2_series(&BigInt::one(), &BigInt::from(3), w)
    }
}

/// ln of a positive rational at `prec_bits`; the result carries its own bound,
/// which is at most 2^(−prec_bits).
pub fn ln_rational(x: &BigRational, prec_bits: u32) -> Result<FixReal, NumericsError> {
    if !x.is_positive() {
        return Err(NumericsError::NonPositiveLog);
    }
    let out_scale = prec_bits + 2;
    if x.is_one() {
        return Ok(FixReal::zero(out_scale));
    }
    let (p, q) = (x.numer(), x.denom());
    // choose k with p/(q·2^k) in [3/4, 3/2)
    let mut k = p.bits() as i64 - q.bits() as i64;
    let scaled = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (p.clone(), q << (k as u64))
        } else {
            (p << ((-k) as u64), q.clone())
        }
    };
    let (mut pn, mut qn) = scaled(k);
    let three = BigInt::from(3);
    if &pn * 2 >= &qn * &three {
        k += 1;
        (pn, qn) = scaled(k);
    } else if &pn * 4 < &qn * &three {
        k -= 1;
        (pn, qn) = scaled(k);
    }
    let w = out_scale + GUARD_BITS + 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let (series, series_err) = atanh2_series(&(&pn - &qn), &(&pn + &qn), w);
    let (ln2, ln2_err) = ln2_fixed(w);
    let mantissa = series + &ln2 * BigInt::from(k);
    let err = BigUint::from(series_err) + BigUint::from(ln2_err) * BigUint::from(k.unsigned_abs());
    Ok(FixReal::new(mantissa, w, err).rescale(out_scale))
}

/// ln of an interval value. The input error is propagated as
/// ⌈e / (m − e)⌉ in output ulps.
pub fn ln_fix(x: &FixReal, prec_bits: u32) -> Result<FixReal, NumericsError> {
    let m = x.mantissa();
    let e = BigInt::from(x.err_ulps().clone());
    if m <= &e {
        return Err(if m + &e <= BigInt::zero() {
            NumericsError::NonPositiveLog
        } else {
            NumericsError::UnresolvedSign
        });
    }
    let base = ln_rational(&x.to_rational(), prec_bits)?;
    if e.is_zero() {
        return Ok(base);
    }
    let lo = m - &e;
    let extra: BigInt = (&e << base.scale()).div_ceil(&lo);
    Ok(base.with_extra_err(extra.magnitude()))
}
