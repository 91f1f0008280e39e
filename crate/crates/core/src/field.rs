//! The real quadratic field Q(√d): discriminant, conjugation, norms and the
//! integrality and unit tests.
//!
//! Elements are stored as (p + q√D)/2 with rational p, q.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numerics::{cmp_with_sqrt, isqrt, FixReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("d = {0} must be greater than 1")]
    TooSmall(u64),
    #[error("d = {d} is not square-free (divisible by {p}²)")]
    NotSquareFree { d: u64, p: u64 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Basis in which users write elements: x + y·ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaKind {
    /// ω = (−1 + √d)/2, used when d ≡ 1 mod 4.
    HalfInteger,
    /// ω = √d.
    SqrtD,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    d: u64,
    disc: BigInt,
    sqrt_floor: BigInt,
    omega: OmegaKind,
    d_min: BigRational,
}

/// Smallest prime p with p² | n, if any.
pub fn square_factor(n: u64) -> Option<u64> {
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return Some(p);
            }
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    None
}

impl FieldCtx {
    pub fn new(d: u64) -> Result<Self, FieldError> {
        if d <= 1 {
            return Err(FieldError::TooSmall(d));
        }
        if let Some(p) = square_factor(d) {
            return Err(FieldError::NotSquareFree { d, p });
        }
        let (disc, omega) = if d % 4 == 1 {
            (BigInt::from(d), OmegaKind::HalfInteger)
        } else {
            (BigInt::from(d) * 4, OmegaKind::SqrtD)
        };
        let sqrt_floor = isqrt(&disc);
        let d_min = BigRational::new(BigInt::from(3), &disc * 32);
        Ok(FieldCtx { d, disc, sqrt_floor, omega, d_min })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The discriminant D.
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// ⌊√D⌋.
    pub fn sqrt_floor(&self) -> &BigInt {
        &self.sqrt_floor
    }

    pub fn omega(&self) -> OmegaKind {
        self.omega
    }

    /// Lower bound 3/(32D) on the distance between neighbouring reduced ideals.
    pub fn d_min(&self) -> &BigRational {
        &self.d_min
    }

    pub fn sqrt_disc(&self, scale: u32) -> FixReal {
        FixReal::sqrt_int(&self.disc, scale)
    }

    pub fn elem(&self, p: BigRational, q: BigRational) -> QuadElem {
        QuadElem { p, q, disc: self.disc.clone() }
    }

    /// (p + q√D)/2 with integer p, q.
    pub fn elem_int(&self, p: BigInt, q: BigInt) -> QuadElem {
        self.elem(BigRational::from_integer(p), BigRational::from_integer(q))
    }

    pub fn rational(&self, r: BigRational) -> QuadElem {
        self.elem(r * BigInt::from(2), BigRational::zero())
    }

    pub fn integer(&self, n: impl Into<BigInt>) -> QuadElem {
        self.rational(BigRational::from_integer(n.into()))
    }

    /// x + y√d.
    pub fn from_sqrt_d(&self, x: BigRational, y: BigRational) -> QuadElem {
        let two = BigInt::from(2);
        match self.omega {
            OmegaKind::HalfInteger => self.elem(x * &two, y * &two),
            OmegaKind::SqrtD => self.elem(x * &two, y),
        }
    }

    /// x + y·ω in the user-facing integral basis.
    pub fn from_omega_basis(&self, x: BigInt, y: BigInt) -> QuadElem {
        match self.omega {
            OmegaKind::HalfInteger => self.elem_int(2 * x - &y, y),
            OmegaKind::SqrtD => self.elem_int(2 * x, y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    p: BigRational,
    q: BigRational,
    disc: BigInt,
}

impl QuadElem {
    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { p: self.p.clone(), q: -&self.q, disc: self.disc.clone() }
    }

    pub fn trace(&self) -> BigRational {
        self.p.clone()
    }

    pub fn norm(&self) -> BigRational {
        (&self.p * &self.p - &self.q * &self.q * &self.disc) / BigInt::from(4)
    }

    pub fn is_alg_integer(&self) -> bool {
        self.p.is_integer() && self.norm().is_integer()
    }

    pub fn is_unit(&self) -> bool {
        self.is_alg_integer() && self.norm().abs().is_one()
    }

    /// Integer coordinates (p, q) when both are integral.
    pub fn integral_coords(&self) -> Option<(BigInt, BigInt)> {
        (self.p.is_integer() && self.q.is_integer()).then(|| (self.p.to_integer(), self.q.to_integer()))
    }

    /// (x, y) with self = x + y√d.
    pub fn to_sqrt_d(&self, omega: OmegaKind) -> (BigRational, BigRational) {
        let two = BigInt::from(2);
        match omega {
            OmegaKind::HalfInteger => (&self.p / &two, &self.q / &two),
            OmegaKind::SqrtD => (&self.p / &two, self.q.clone()),
        }
    }

    /// Exact sign of the real number (p + q√D)/2.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        if sp == sq || sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal {
            return sq;
        }
        // opposite signs: compare p² with q²D
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.disc;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> QuadElem {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<QuadElem, FieldError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let c = self.conj();
        Ok(QuadElem { p: c.p / &n, q: c.q / &n, disc: self.disc.clone() })
    }

    pub fn div(&self, other: &QuadElem) -> Result<QuadElem, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> QuadElem {
        let mut base = self.clone();
        let mut acc = QuadElem {
            p: BigRational::from_integer(BigInt::from(2)),
            q: BigRational::zero(),
            disc: self.disc.clone(),
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Interval approximation at `scale` fractional bits.
    pub fn to_fix(&self, scale: u32) -> FixReal {
        let work = scale + 8;
        let root = FixReal::sqrt_int(&self.disc, work);
        let p = FixReal::from_rational(&self.p, work);
        let q = FixReal::from_rational(&self.q, work);
        p.add(&q.mul(&root)).div_int(&BigInt::from(2)).rescale(scale)
    }

    /// True when the element is an integer combination of 1 and (D + √D)/2.
    pub fn in_maximal_order(&self) -> bool {
        match self.integral_coords() {
            Some((p, q)) => (p - q * &self.disc).is_even(),
            None => false,
        }
    }
}

fn same_field(a: &QuadElem, b: &QuadElem) {
    assert_eq!(a.disc, b.disc, "elements of different fields");
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        same_field(self, rhs);
        QuadElem { p: &self.p + &rhs.p, q: &self.q + &rhs.q, disc: self.disc.clone() }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        same_field(self, rhs);
        QuadElem { p: &self.p - &rhs.p, q: &self.q - &rhs.q, disc: self.disc.clone() }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        same_field(self, rhs);
        let two = BigInt::from(2);
        let p = (&self.p * &rhs.p + &self.q * &rhs.q * &self.disc) / &two;
        let q = (&self.p * &rhs.q + &self.q * &rhs.p) / &two;
        QuadElem { p, q, disc: self.disc.clone() }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { p: -self.p, q: -self.q, disc: self.disc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}·√{})/2", self.p, self.q, self.disc)
    }
}

/// Sign of b + √D − t, exactly.
pub fn cmp_b_plus_sqrt(b: &BigInt, t: &BigInt, disc: &BigInt) -> Ordering {
    cmp_with_sqrt(&(t - b), disc).reverse()
}
