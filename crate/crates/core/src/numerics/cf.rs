use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::NumericsError;

/// Simple continued fraction of a rational with all its convergents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub partial_quotients: Vec<BigInt>,
    /// (numerator, denominator) pairs, denominators positive.
    pub convergents: Vec<(BigInt, BigInt)>,
}

impl CfExpansion {
    pub fn last(&self) -> &(BigInt, BigInt) {
        self.convergents.last().expect("expansion has at least one term")
    }
}

pub fn cf_convergents(num: &BigInt, den: &BigInt) -> Result<CfExpansion, NumericsError> {
    if den.is_zero() {
        return Err(NumericsError::ZeroDenominator);
    }
    let (mut n, mut d) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
    let mut partial_quotients = Vec::new();
    let mut convergents = Vec::new();
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        convergents.push((p.clone(), q.clone()));
        partial_quotients.push(a);
        n = std::mem::replace(&mut d, r);
    }
    Ok(CfExpansion { partial_quotients, convergents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn seven_fifths() {
        let cf = cf_convergents(&bi(7), &bi(5)).unwrap();
        assert_eq!(cf.partial_quotients, vec![bi(1), bi(2), bi(2)]);
        assert_eq!(cf.convergents, vec![(bi(1), bi(1)), (bi(3), bi(2)), (bi(7), bi(5))]);
    }

    #[test]
    fn integer_input() {
        let cf = cf_convergents(&bi(4), &bi(1)).unwrap();
        assert_eq!(cf.convergents, vec![(bi(4), bi(1))]);
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(cf_convergents(&bi(3), &bi(0)), Err(NumericsError::ZeroDenominator));
    }

    #[test]
    fn approximation_property_exhaustive() {
        for d in 1..=200i64 {
            for c in 0..=d {
                let target = BigRational::new(bi(c), bi(d));
                let cf = cf_convergents(&bi(c), &bi(d)).unwrap();
                let (ln, ld) = cf.last();
                assert_eq!(BigRational::new(ln.clone(), ld.clone()), target);
                assert_eq!(ln.gcd(ld), BigInt::one());
                for (cn, dn) in &cf.convergents {
                    let diff = (&target - BigRational::new(cn.clone(), dn.clone())).abs();
                    assert!(diff < BigRational::new(BigInt::one(), dn * dn));
                }
            }
        }
    }
}
