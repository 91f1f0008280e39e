use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumericsError;

/// ⌊√n⌋ for n ≥ 0.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative value");
    n.sqrt()
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// √n if n is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact comparison of an integer with √D for non-square D > 0.
pub fn cmp_with_sqrt(x: &BigInt, disc: &BigInt) -> Ordering {
    if x.is_negative() {
        return Ordering::Less;
    }
    // x² ≠ D because D is not a square
    (x * x).cmp(disc)
}

/// Nearest integer to a rational, halves rounded up: ⌊r + ½⌋.
pub fn round_ratio(r: &BigRational) -> BigInt {
    let twice = r * BigInt::from(2) + BigInt::one();
    (twice.numer()).div_floor(&(twice.denom() * BigInt::from(2)))
}

/// τ(b, a): the representative of b mod 2|a| lying in (−|a|, |a|] when
/// |a| > √D and in (√D − 2|a|, √D] when |a| < √D.
pub fn tau(b: &BigInt, a: &BigInt, disc: &BigInt) -> Result<BigInt, NumericsError> {
    if a.is_zero() {
        return Err(NumericsError::ZeroModulus);
    }
    if !disc.is_positive() || is_perfect_square(disc) {
        return Err(NumericsError::SquareDiscriminant(disc.clone()));
    }
    Ok(tau_with_root(b, a, disc, &isqrt(disc)))
}

/// [`tau`] with ⌊√D⌋ supplied by the caller. No validation.
pub fn tau_with_root(b: &BigInt, a: &BigInt, disc: &BigInt, root: &BigInt) -> BigInt {
    let a = a.abs();
    let modulus: BigInt = &a << 1;
    if cmp_with_sqrt(&a, disc) == Ordering::Greater {
        let r = b.mod_floor(&modulus);
        if r > a {
            r - modulus
        } else {
            r
        }
    } else {
        // largest value ≡ b that is ≤ ⌊√D⌋, which is the same as ≤ √D
        root - (root - b).mod_floor(&modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtGcd {
    pub gcd: BigInt,
    pub u: BigInt,
    pub v: BigInt,
}

/// g = gcd(a, b) > 0 with u·a + v·b = g.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<ExtGcd, NumericsError> {
    if a.is_zero() && b.is_zero() {
        return Err(NumericsError::BothZero);
    }
    // a | b gives the trivial combination directly
    if !a.is_zero() && b.is_multiple_of(a) {
        let sign = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
        return Ok(ExtGcd { gcd: a.abs(), u: sign, v: BigInt::zero() });
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    Ok(ExtGcd { gcd: old_r, u: old_s, v: old_t })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtGcd3 {
    pub gcd: BigInt,
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
}

/// g = gcd(a, b, c) with u·a + v·b + w·c = g and small coefficients.
pub fn ext_gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<ExtGcd3, NumericsError> {
    if a.is_zero() && b.is_zero() {
        let ExtGcd { gcd, u, v } = ext_gcd(c, &BigInt::zero())?;
        debug_assert!(v.is_zero());
        return Ok(ExtGcd3 { gcd, u: BigInt::zero(), v: BigInt::zero(), w: u });
    }
    let first = ext_gcd(a, b)?;
    let second = ext_gcd(&first.gcd, c)?;
    let mut u = &second.u * &first.u;
    let mut v = &second.u * &first.v;
    let w = second.v;
    // u → u − s·b/g₁, v → v + s·a/g₁ leaves u·a + v·b unchanged
    let step = (b / &first.gcd).abs();
    if !b.is_zero() && u.abs() > step {
        let s = round_ratio(&BigRational::new(u.clone(), step.clone()));
        let sign = if b.is_negative() { -BigInt::one() } else { BigInt::one() };
        let a_step = a / &first.gcd * &sign;
        u -= &s * &step;
        v += &s * a_step;
    }
    Ok(ExtGcd3 { gcd: second.gcd, u, v, w })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&bi(5), &bi(1), &bi(5)).unwrap(), bi(1));
        assert_eq!(tau(&bi(12), &bi(1), &bi(12)).unwrap(), bi(2));
        assert_eq!(tau(&bi(-2), &bi(2), &bi(12)).unwrap(), bi(2));
    }

    #[test]
    fn tau_large_modulus_is_centered() {
        // a = 10 > √12: representative in (−10, 10]
        assert_eq!(tau(&bi(15), &bi(10), &bi(12)).unwrap(), bi(-5));
        assert_eq!(tau(&bi(10), &bi(10), &bi(12)).unwrap(), bi(10));
        assert_eq!(tau(&bi(-10), &bi(10), &bi(12)).unwrap(), bi(10));
    }

    #[test]
    fn tau_rejects_bad_input() {
        assert_eq!(tau(&bi(1), &bi(0), &bi(5)), Err(NumericsError::ZeroModulus));
        assert!(matches!(tau(&bi(1), &bi(1), &bi(16)), Err(NumericsError::SquareDiscriminant(_))));
    }

    #[test]
    fn tau_idempotent_and_congruent() {
        for disc in [5i64, 8, 12, 13] {
            let d = bi(disc);
            for a in 1..=1000i64 {
                for b in (-10_000i64..=10_000).step_by(37) {
                    let t = tau(&bi(b), &bi(a), &d).unwrap();
                    assert_eq!(tau(&t, &bi(a), &d).unwrap(), t);
                    assert!((bi(b) - &t).is_multiple_of(&bi(2 * a)));
                }
            }
        }
    }

    #[test]
    fn ext_gcd_examples() {
        assert_eq!(
            ext_gcd(&bi(2), &bi(16)).unwrap(),
            ExtGcd { gcd: bi(2), u: bi(1), v: bi(0) }
        );
        assert_eq!(
            ext_gcd(&bi(0), &bi(7)).unwrap(),
            ExtGcd { gcd: bi(7), u: bi(0), v: bi(1) }
        );
        let g = ext_gcd(&bi(649), &bi(180)).unwrap();
        assert_eq!(g.gcd, bi(1));
        assert_eq!(&g.u * bi(649) + &g.v * bi(180), bi(1));
        assert_eq!(ext_gcd(&bi(0), &bi(0)), Err(NumericsError::BothZero));
        let g = ext_gcd(&bi(-12), &bi(18)).unwrap();
        assert_eq!(g.gcd, bi(6));
        assert_eq!(&g.u * bi(-12) + &g.v * bi(18), bi(6));
    }

    #[test]
    fn ext_gcd3_examples() {
        assert_eq!(
            ext_gcd3(&bi(2), &bi(2), &bi(2)).unwrap(),
            ExtGcd3 { gcd: bi(2), u: bi(1), v: bi(0), w: bi(0) }
        );
        let r = ext_gcd3(&bi(6), &bi(10), &bi(15)).unwrap();
        assert_eq!(r.gcd, bi(1));
        assert_eq!(&r.u * bi(6) + &r.v * bi(10) + &r.w * bi(15), bi(1));
        let r = ext_gcd3(&bi(4), &bi(6), &bi(0)).unwrap();
        assert_eq!(r.gcd, bi(2));
        assert_eq!(&r.u * bi(4) + &r.v * bi(6), bi(2));
        let r = ext_gcd3(&bi(0), &bi(0), &bi(-9)).unwrap();
        assert_eq!(r.gcd, bi(9));
        assert_eq!(&r.w * bi(-9), bi(9));
    }

    #[test]
    fn ext_gcd3_coefficients_stay_small() {
        for (a, b, c) in [(1234567i64, 7654321, 1000003), (97, 89, 83), (360, 1001, 77)] {
            let r = ext_gcd3(&bi(a), &bi(b), &bi(c)).unwrap();
            assert_eq!(&r.u * bi(a) + &r.v * bi(b) + &r.w * bi(c), r.gcd);
            let bound = bi(a.max(b).max(c)).pow(2);
            assert!(r.u.abs() <= bound && r.v.abs() <= bound && r.w.abs() <= bound);
        }
    }

    #[test]
    fn sqrt_comparison_is_exact() {
        let d = bi(12);
        assert_eq!(cmp_with_sqrt(&bi(3), &d), Ordering::Less);
        assert_eq!(cmp_with_sqrt(&bi(4), &d), Ordering::Greater);
        assert_eq!(cmp_with_sqrt(&bi(-4), &d), Ordering::Less);
    }

    #[test]
    fn rounding_to_nearest() {
        let r = |n: i64, d: i64| round_ratio(&BigRational::new(bi(n), bi(d)));
        assert_eq!(r(7, 2), bi(4));
        assert_eq!(r(-7, 2), bi(-3));
        assert_eq!(r(5, 3), bi(2));
        assert_eq!(r(-5, 3), bi(-2));
    }
}
