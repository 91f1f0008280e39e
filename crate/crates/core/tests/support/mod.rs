//! Independent oracles for the integration tests. Nothing here calls into
//! the library's arithmetic beyond reading plain integers back out.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// (p + q√D)/2 with rational p, q, multiplied without the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Half {
    pub p: BigRational,
    pub q: BigRational,
}

impl Half {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        Half { p, q }
    }

    pub fn int(p: i64, q: i64) -> Self {
        Half { p: BigRational::from_integer(p.into()), q: BigRational::from_integer(q.into()) }
    }

    pub fn mul(&self, o: &Half, disc: &BigInt) -> Half {
        let two = BigRational::from_integer(2.into());
        let d = BigRational::from_integer(disc.clone());
        Half {
            p: (&self.p * &o.p + &self.q * &o.q * d) / &two,
            q: (&self.p * &o.q + &o.p * &self.q) / &two,
        }
    }

    /// ω = (D + √D)/2.
    pub fn omega(disc: &BigInt) -> Half {
        Half { p: BigRational::from_integer(disc.clone()), q: BigRational::one() }
    }
}

/// Canonical basis {(a, 0), (c, e)} of the lattice spanned by integer
/// vectors, with a, e > 0 and 0 ≤ c < a.
pub fn hnf(vectors: &[(BigInt, BigInt)]) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let mut vs: Vec<(BigInt, BigInt)> = vectors.to_vec();
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut flat = BigInt::zero();
    for v in vs.drain(..) {
        let mut v = v;
        match pivot.take() {
            None if v.1.is_zero() => flat = flat.gcd(&v.0),
            None => pivot = Some(v),
            Some(mut u) => {
                // Euclid on the second coordinate, keeping the transform unimodular
                while !v.1.is_zero() {
                    let t = u.1.div_floor(&v.1);
                    u = (&u.0 - &t * &v.0, &u.1 - &t * &v.1);
                    std::mem::swap(&mut u, &mut v);
                }
                flat = flat.gcd(&v.0);
                pivot = Some(u);
            }
        }
    }
    let mut u = pivot.expect("lattice of rank 2");
    assert!(!flat.is_zero(), "lattice of rank 2");
    if u.1.is_negative() {
        u = (-u.0, -u.1);
    }
    let c = u.0.mod_floor(&flat);
    ((flat, BigInt::zero()), (c, u.1))
}

/// HNF of the Z-span of field elements, after clearing denominators by `scale`.
pub fn lattice(elems: &[Half], scale: &BigInt) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let s = BigRational::from_integer(scale.clone());
    let vs: Vec<(BigInt, BigInt)> = elems
        .iter()
        .map(|e| {
            let p = &e.p * &s;
            let q = &e.q * &s;
            assert!(p.is_integer() && q.is_integer(), "scale does not clear denominators");
            (p.to_integer(), q.to_integer())
        })
        .collect();
    hnf(&vs)
}

pub fn common_denominator(elems: &[Half]) -> BigInt {
    elems.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.p.denom()).lcm(e.q.denom()))
}

/// Fundamental solution of x² − dy² = 1 from the continued fraction of √d.
pub fn cf_pell(d: u64) -> (BigInt, BigInt) {
    let a0 = d.sqrt();
    assert!(a0 * a0 != d, "square d");
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let (mut p0, mut p1) = (BigInt::one(), BigInt::from(a0));
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    let dd = BigInt::from(d);
    while &p1 * &p1 - &dd * &q1 * &q1 != BigInt::one() {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        let p2 = BigInt::from(a) * &p1 + &p0;
        let q2 = BigInt::from(a) * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    (p1, q1)
}

/// (t + u√D)/2 in integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfInt {
    pub t: BigInt,
    pub u: BigInt,
}

impl HalfInt {
    fn mul(&self, o: &HalfInt, disc: &BigInt) -> HalfInt {
        HalfInt {
            t: (&self.t * &o.t + &self.u * &o.u * disc) / 2,
            u: (&self.t * &o.u + &o.t * &self.u) / 2,
        }
    }

    fn pow(&self, j: u32, disc: &BigInt) -> HalfInt {
        let mut out = HalfInt { t: BigInt::from(2), u: BigInt::zero() };
        for _ in 0..j {
            out = out.mul(self, disc);
        }
        out
    }
}

/// x + y√d as (t + u√D)/2 for square-free d.
pub fn pell_as_half(x: &BigInt, y: &BigInt, d: u64, disc: &BigInt) -> HalfInt {
    if *disc == BigInt::from(d) {
        HalfInt { t: x * 2, u: y * 2 }
    } else {
        HalfInt { t: x * 2, u: y.clone() }
    }
}

/// The unit ε > 1 with ε^j = ξ for the largest j ∈ {6, 3, 2, 1}, found by
/// integer root extraction of the trace.
pub fn unit_from_pell(xi: &HalfInt, disc: &BigInt) -> (HalfInt, u32) {
    for j in [6u32, 3, 2, 1] {
        // ε^j = ξ with ε' tiny, so the trace t of ε is near the j-th root of 2x
        let root: BigInt = xi.t.nth_root(j);
        let mut t: BigInt = &root - 2;
        while t <= &root + 2 {
            if t.is_positive() {
                for n in [1i64, -1] {
                    let rest: BigInt = &t * &t - 4 * n;
                    if rest.is_positive() && rest.is_multiple_of(disc) {
                        let u2 = &rest / disc;
                        let u = u2.sqrt();
                        if &u * &u == u2 {
                            let eps = HalfInt { t: t.clone(), u };
                            if eps.pow(j, disc) == *xi {
                                return (eps, j);
                            }
                        }
                    }
                }
            }
            t += 1;
        }
    }
    panic!("no root of the Pell unit found");
}

/// Whether (t + u√D)/2 ≥ c/2^w for u ≥ 0.
pub fn half_ge(e: &HalfInt, disc: &BigInt, c: &BigInt, w: u32) -> bool {
    // t·2^w + u√D·2^w ≥ 2c
    let rhs: BigInt = c * 2 - (&e.t << w);
    if !rhs.is_positive() {
        return true;
    }
    let lhs: BigInt = &e.u << w;
    &lhs * &lhs * disc >= &rhs * &rhs
}

/// Whether (t + u√D)/2 ≤ c/2^w for u ≥ 0.
pub fn half_le(e: &HalfInt, disc: &BigInt, c: &BigInt, w: u32) -> bool {
    let rhs: BigInt = c * 2 - (&e.t << w);
    if rhs.is_negative() {
        return false;
    }
    let lhs: BigInt = &e.u << w;
    &lhs * &lhs * disc <= &rhs * &rhs
}

/// Bounds lo ≤ e^r·2^w ≤ hi for rational r ≥ 0, by Taylor series on
/// r/2^k ≤ ½ and k squarings, every step rounded outward.
pub fn exp_bounds(r: &BigRational, w: u32) -> (BigInt, BigInt) {
    assert!(!r.is_negative());
    let mut k = 0u32;
    while r / BigRational::from_integer(BigInt::one() << k) > BigRational::new(1.into(), 2.into()) {
        k += 1;
    }
    let scaled = r * BigRational::from_integer(BigInt::one() << w) / BigRational::from_integer(BigInt::one() << k);
    let x_lo = scaled.floor().to_integer();
    let x_hi = scaled.ceil().to_integer();
    let one = BigInt::one() << w;
    let series = |x: &BigInt, up: bool| -> BigInt {
        let mut term = one.clone();
        let mut sum = one.clone();
        let mut n = 1u32;
        // rounding up never reaches zero, so stop once a term is at most one ulp
        while term > BigInt::one() || (!up && !term.is_zero()) {
            let num = &term * x;
            let den = BigInt::from(n) << w;
            term = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
            sum += &term;
            n += 1;
        }
        if up {
            // ratios are at most ½, so the tail is below the last term
            sum + 2
        } else {
            sum
        }
    };
    let mut lo = series(&x_lo, false);
    let mut hi = series(&x_hi, true);
    for _ in 0..k {
        lo = (&lo * &lo) >> w;
        hi = (&hi * &hi).div_ceil(&one);
    }
    (lo, hi)
}

/// Rational to f64 for diagnostics.
pub fn ratf(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
