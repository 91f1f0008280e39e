use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A real number `mantissa · 2^(−scale)` whose true value lies within
/// `err · 2^(−scale)` of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixReal {
    mantissa: BigInt,
    scale: u32,
    err: BigUint,
}

fn ceil_shift(x: &BigUint, bits: u32) -> BigUint {
    let shifted = x >> bits;
    if (&shifted << bits) == *x {
        shifted
    } else {
        shifted + 1u32
    }
}

impl FixReal {
    pub fn new(mantissa: BigInt, scale: u32, err: BigUint) -> Self {
        FixReal { mantissa, scale, err }
    }

    pub fn zero(scale: u32) -> Self {
        FixReal::new(BigInt::zero(), scale, BigUint::zero())
    }

    pub fn from_int(n: &BigInt, scale: u32) -> Self {
        FixReal::new(n << scale, scale, BigUint::zero())
    }

    /// Nearest-below approximation of a rational.
    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        let num: BigInt = r.numer() << scale;
        let (q, rem) = num.div_mod_floor(r.denom());
        let err = if rem.is_zero() { BigUint::zero() } else { BigUint::one() };
        FixReal::new(q, scale, err)
    }

    /// √n for a non-negative integer n.
    pub fn sqrt_int(n: &BigInt, scale: u32) -> Self {
        assert!(!n.is_negative(), "square root of negative value");
        let shifted: BigInt = n << (2 * scale);
        let root = shifted.sqrt();
        let err = if &root * &root == shifted { BigUint::zero() } else { BigUint::one() };
        FixReal::new(root, scale, err)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Error bound in units of 2^(−scale).
    pub fn err_ulps(&self) -> &BigUint {
        &self.err
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// Error bound as an exact rational.
    pub fn err_value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.err.clone()), BigInt::one() << self.scale)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.scale)
    }

    pub fn lower(&self) -> BigRational {
        self.to_rational() - self.err_value()
    }

    pub fn upper(&self) -> BigRational {
        self.to_rational() + self.err_value()
    }

    /// Widen the error bound by `extra` ulps.
    pub fn with_extra_err(mut self, extra: &BigUint) -> Self {
        self.err += extra;
        self
    }

    pub fn rescale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = scale - self.scale;
                FixReal::new(&self.mantissa << k, scale, &self.err << k)
            }
            Ordering::Less => {
                let k = self.scale - scale;
                let q = &self.mantissa >> k;
                let lost = (&q << k) != self.mantissa;
                let mut err = ceil_shift(&self.err, k);
                if lost {
                    err += 1u32;
                }
                FixReal::new(q, scale, err)
            }
        }
    }

    fn aligned(&self, other: &FixReal) -> (FixReal, FixReal) {
        let s = self.scale.max(other.scale);
        (self.rescale(s), other.rescale(s))
    }

    pub fn add(&self, other: &FixReal) -> FixReal {
        let (a, b) = self.aligned(other);
        FixReal::new(a.mantissa + b.mantissa, a.scale, a.err + b.err)
    }

    pub fn sub(&self, other: &FixReal) -> FixReal {
        let (a, b) = self.aligned(other);
        FixReal::new(a.mantissa - b.mantissa, a.scale, a.err + b.err)
    }

    pub fn neg(&self) -> FixReal {
        FixReal::new(-&self.mantissa, self.scale, self.err.clone())
    }

    /// Product, returned at the larger of the two scales.
    pub fn mul(&self, other: &FixReal) -> FixReal {
        let m = &self.mantissa * &other.mantissa;
        let e = self.mantissa.magnitude() * &other.err
            + other.mantissa.magnitude() * &self.err
            + &self.err * &other.err;
        FixReal::new(m, self.scale + other.scale, e).rescale(self.scale.max(other.scale))
    }

    pub fn mul_int(&self, n: &BigInt) -> FixReal {
        FixReal::new(&self.mantissa * n, self.scale, &self.err * n.magnitude())
    }

    pub fn div_int(&self, n: &BigInt) -> FixReal {
        assert!(!n.is_zero(), "division by zero");
        let (q, r) = self.mantissa.div_mod_floor(n);
        let mut err = self.err.div_ceil(n.magnitude());
        if !r.is_zero() {
            err += 1u32;
        }
        FixReal::new(q, self.scale, err)
    }

    /// Certified sign: `None` when zero lies inside the error interval
    /// (unless the value is exactly zero).
    pub fn signum_certified(&self) -> Option<Ordering> {
        let mag = self.mantissa.magnitude();
        if self.err.is_zero() {
            return Some(self.mantissa.sign_ordering());
        }
        if *mag > self.err {
            Some(self.mantissa.sign_ordering())
        } else {
            None
        }
    }

    /// Certified comparison with another interval.
    pub fn cmp_certified(&self, other: &FixReal) -> Option<Ordering> {
        self.sub(other).signum_certified()
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        let lo = self.lower();
        let hi = self.upper();
        if self.err.is_zero() {
            return Some(lo.cmp(r));
        }
        if &lo > r {
            Some(Ordering::Greater)
        } else if &hi < r {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// ⌊x⌋ when every point of the error interval has the same floor.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let lo = &self.mantissa - BigInt::from(self.err.clone());
        let hi = &self.mantissa + BigInt::from(self.err.clone());
        let fl = lo >> self.scale;
        let fh = if self.err.is_zero() {
            fl.clone()
        } else {
            // the upper end itself may be the true value
            hi >> self.scale
        };
        (fl == fh).then_some(fl)
    }

    /// Nearest f64, ignoring the error bound.
    pub fn to_f64(&self) -> f64 {
        let drop = self.mantissa.bits().saturating_sub(60);
        let m = (&self.mantissa >> drop).to_f64().unwrap_or(f64::NAN);
        let mut exp = drop as i64 - i64::from(self.scale);
        let mut v = m;
        while exp != 0 {
            let step = exp.clamp(-1000, 1000);
            v *= 2f64.powi(step as i32);
            exp -= step;
        }
        v
    }

    pub fn err_f64(&self) -> f64 {
        FixReal::new(BigInt::from(self.err.clone()), self.scale, BigUint::zero()).to_f64()
    }

    /// Decimal string with `digits` fractional digits, rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(&self.to_rational(), digits)
    }

    /// Upper bound on the error as a short decimal string.
    pub fn err_decimal(&self) -> String {
        let e = self.err_f64();
        if e == 0.0 {
            "0".to_string()
        } else {
            format!("{e:.3e}")
        }
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Round a rational to `digits` decimals and print it.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let pow = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * &pow;
    let twice = scaled * BigInt::from(2) + BigInt::one();
    let n = twice.numer().div_floor(&(twice.denom() * BigInt::from(2)));
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl fmt::Display for FixReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (f64::from(self.scale) * std::f64::consts::LOG10_2).floor() as usize;
        write!(f, "{} ± {}", self.to_decimal(digits.min(40)), self.err_decimal())
    }
}
