use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::numerics::{cf_convergents, round_ratio};

use super::QError;

/// Candidates for S from two outcomes c, d of the same run. For every
/// convergent k/l of c/d the candidate is ⌊kq/c⌉; returned smallest first
/// without duplicates.
pub fn decode_two_samples(c: u64, d: u64, q: u64) -> Result<Vec<BigInt>, QError> {
    if c == 0 || d == 0 {
        return Err(QError::ZeroSample);
    }
    let cf = cf_convergents(&BigInt::from(c), &BigInt::from(d))?;
    let q = BigInt::from(q);
    let c = BigInt::from(c);
    let mut out: Vec<BigInt> = cf
        .convergents
        .iter()
        .filter(|(k, _)| !k.is_zero())
        .map(|(k, _)| round_ratio(&BigRational::new(k * &q, c.clone())))
        .filter(|m| m.is_positive())
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn rounded(k: u64, q: u64, s: &BigRational) -> BigInt {
    round_ratio(&(BigRational::from_integer(BigInt::from(k) * BigInt::from(q)) / s))
}

/// |c/d − k/l| < 1/(2l²) for c = ⌊kq/S⌉, d = ⌊lq/S⌉, exactly.
pub fn lemma_holds(k: u64, l: u64, s: &BigRational, q: u64) -> bool {
    let c = rounded(k, q, s);
    let d = rounded(l, q, s);
    if d.is_zero() {
        return false;
    }
    let diff = (BigRational::new(c, d) - BigRational::new(k.into(), l.into())).abs();
    diff < BigRational::new(1.into(), BigInt::from(2 * l * l))
}

/// |S − ⌊kq/c⌉| ≤ 1 for c = ⌊kq/S⌉.
pub fn rounding_sound(k: u64, s: &BigRational, q: u64) -> bool {
    let c = rounded(k, q, s);
    if c.is_zero() {
        return false;
    }
    let back = round_ratio(&BigRational::new(BigInt::from(k) * BigInt::from(q), c));
    (s - BigRational::from_integer(back)).abs() <= BigRational::from_integer(1.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_period_toy() {
        assert_eq!(decode_two_samples(4, 4, 8).unwrap(), vec![BigInt::from(2)]);
        assert_eq!(decode_two_samples(0, 4, 8), Err(QError::ZeroSample));
    }

    #[test]
    fn recovers_a_period_from_good_outcomes() {
        // S = 19.1, q = 2048: outcomes for k = 3 and l = 5
        let s = BigRational::new(191.into(), 10.into());
        let q = 2048u64;
        let c = rounded(3, q, &s).try_into().unwrap();
        let d = rounded(5, q, &s).try_into().unwrap();
        let cands = decode_two_samples(c, d, q).unwrap();
        assert!(cands.iter().any(|m| *m == BigInt::from(19) || *m == BigInt::from(20)), "{cands:?}");
    }

    #[test]
    fn lemma_on_a_small_period() {
        let s = BigRational::new(77.into(), 10.into());
        for l in 2..=7u64 {
            for k in 1..l {
                assert!(lemma_holds(k, l, &s, 256));
                assert!(rounding_sound(k, &s, 256));
            }
        }
    }
}
