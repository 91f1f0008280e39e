//! Ideals of the maximal order in standard form, the reduction operator ρ,
//! its inverse, the reflection σ, reduction of arbitrary forms and products.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::field::{FieldCtx, QuadElem};
use crate::numerics::{cmp_with_sqrt, ext_gcd, ext_gcd3, ln_fix, ln_rational, tau_with_root, FixReal, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdealError {
    #[error("({a}, {b}) is not a valid form: 4a must divide b² − D")]
    Malformed { a: BigInt, b: BigInt },
    #[error("b₁ + b₂ is odd for {} and {}", .0.0, .0.1)]
    Parity(Box<(IdealForm, IdealForm)>),
    #[error("the zero element generates no ideal")]
    ZeroAlpha,
    #[error("{0} is not an algebraic integer")]
    NotIntegral(String),
    #[error("computed standard form failed the membership check")]
    Verification,
    #[error("reduction did not terminate within {0} steps")]
    ReductionStalled(usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The lattice Z + ((b + √D)/(2a))Z, a > 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealForm {
    pub a: BigInt,
    pub b: BigInt,
}

/// Reduced forms use the same representation; `IdealForm::is_reduced` is the test.
pub type ReducedIdeal = IdealForm;

impl IdealForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        IdealForm { a: a.into(), b: b.into() }
    }

    /// Checks a > 0, 4a | b² − D and b = τ(b, a).
    pub fn validate(&self, ctx: &FieldCtx) -> Result<(), IdealError> {
        let malformed = || IdealError::Malformed { a: self.a.clone(), b: self.b.clone() };
        if !self.a.is_positive() {
            return Err(malformed());
        }
        let four_a: BigInt = &self.a * 4;
        if !(&self.b * &self.b - ctx.disc()).is_multiple_of(&four_a) {
            return Err(malformed());
        }
        if tau_with_root(&self.b, &self.a, ctx.disc(), ctx.sqrt_floor()) != self.b {
            return Err(malformed());
        }
        Ok(())
    }

    /// b ≥ 0 and b + √D > 2a, exactly.
    pub fn is_reduced(&self, ctx: &FieldCtx) -> bool {
        !self.b.is_negative() && cmp_with_sqrt(&(&self.a * 2 - &self.b), ctx.disc()) == Ordering::Less
    }

    pub fn gamma(&self) -> GammaVal {
        GammaVal { b: self.b.clone(), a: self.a.clone() }
    }

    /// Standard form with k = 1, l = a.
    pub fn to_std(&self) -> StdIdeal {
        StdIdeal::new(BigInt::one(), self.a.clone(), self.a.clone(), self.b.clone())
    }
}

impl fmt::Display for IdealForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// The real number (b + √D)/(2a), kept exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaVal {
    pub b: BigInt,
    pub a: BigInt,
}

impl GammaVal {
    pub fn to_elem(&self, ctx: &FieldCtx) -> QuadElem {
        let den: BigInt = &self.a * 2;
        ctx.elem(BigRational::new(self.b.clone() * 2, den.clone()), BigRational::new(BigInt::from(2), den))
    }

    pub fn to_fix(&self, ctx: &FieldCtx, scale: u32) -> FixReal {
        let work = scale + 8;
        ctx.sqrt_disc(work)
            .add(&FixReal::from_int(&self.b, work))
            .div_int(&(&self.a * 2))
            .rescale(scale)
    }

    /// ln|γ| with absolute error at most 2^(−prec_bits).
    ///
    /// For b < 0 the value b + √D is rewritten as (D − b²)/(√D − b).
    pub fn ln_abs(&self, ctx: &FieldCtx, prec_bits: u32) -> Result<FixReal, NumericsError> {
        let part = prec_bits + 3;
        let two_a = &self.a * 2;
        let ln_den = ln_rational(&BigRational::from_integer(two_a), part)?;
        let work = part + 8;
        let root = ctx.sqrt_disc(work);
        let out = if !self.b.is_negative() {
            let num = root.add(&FixReal::from_int(&self.b, work));
            ln_fix(&num, part)?.sub(&ln_den)
        } else {
            let gap = (ctx.disc() - &self.b * &self.b).abs();
            let ln_gap = ln_rational(&BigRational::from_integer(gap), part)?;
            let ln_mid = ln_fix(&root.sub(&FixReal::from_int(&self.b, work)), part)?;
            ln_gap.sub(&ln_mid).sub(&ln_den)
        };
        Ok(out)
    }
}

impl fmt::Display for GammaVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + √D)/{}", self.b, &self.a * 2)
    }
}

/// (k/l)(aZ + ((b + √D)/2)Z) with gcd(k, l) = 1 and b = τ(b, a).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StdIdeal {
    pub k: BigInt,
    pub l: BigInt,
    pub a: BigInt,
    pub b: BigInt,
}

impl StdIdeal {
    /// Builds and normalizes gcd(k, l) = 1 (the sign of k and l is dropped).
    pub fn new(k: BigInt, l: BigInt, a: BigInt, b: BigInt) -> Self {
        let g = k.gcd(&l);
        StdIdeal { k: (k / &g).abs(), l: (l / &g).abs(), a, b }
    }

    pub fn integral(k: BigInt, a: BigInt, b: BigInt) -> Self {
        StdIdeal::new(k, BigInt::one(), a, b)
    }

    /// N(I) = (k/l)²·a.
    pub fn norm(&self) -> BigRational {
        let r = BigRational::new(self.k.clone(), self.l.clone());
        &r * &r * &self.a
    }

    pub fn is_integral(&self) -> bool {
        self.l.is_one()
    }

    /// I = s · (Z + ((b+√D)/(2a))Z) with s = ka/l.
    pub fn split_form(&self) -> (BigRational, IdealForm) {
        (
            BigRational::new(&self.k * &self.a, self.l.clone()),
            IdealForm { a: self.a.clone(), b: self.b.clone() },
        )
    }

    pub fn normalized(&self, ctx: &FieldCtx) -> StdIdeal {
        let b = tau_with_root(&self.b, &self.a, ctx.disc(), ctx.sqrt_floor());
        StdIdeal::new(self.k.clone(), self.l.clone(), self.a.clone(), b)
    }

    /// Whether (P + Q√D)/2 lies in the ideal.
    pub fn contains(&self, elem: &QuadElem) -> bool {
        // scale by l so that the lattice is k(aZ + ((b+√D)/2)Z)
        let p = elem.p() * &self.l;
        let q = elem.q() * &self.l;
        if !p.is_integer() || !q.is_integer() {
            return false;
        }
        let (p, q) = (p.to_integer(), q.to_integer());
        if !q.is_multiple_of(&self.k) {
            return false;
        }
        let n = &q / &self.k;
        (p - &self.k * &n * &self.b).is_multiple_of(&(&self.k * &self.a * 2))
    }

    /// Z-basis ka/l, k(b + √D)/(2l).
    pub fn basis(&self, ctx: &FieldCtx) -> [QuadElem; 2] {
        let first = ctx.rational(BigRational::new(&self.k * &self.a, self.l.clone()));
        let second = ctx.elem(
            BigRational::new(&self.k * &self.b, self.l.clone()),
            BigRational::new(self.k.clone(), self.l.clone()),
        );
        [first, second]
    }
}

impl fmt::Display for StdIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{})·[{}, {}]", self.k, self.l, self.a, self.b)
    }
}

/// O = Z + ((b + √D)/2)Z with b = τ(D, 1).
pub fn unit_ideal(ctx: &FieldCtx) -> IdealForm {
    IdealForm {
        a: BigInt::one(),
        b: tau_with_root(ctx.disc(), &BigInt::one(), ctx.disc(), ctx.sqrt_floor()),
    }
}

fn check_form(ctx: &FieldCtx, form: &IdealForm) -> Result<(), IdealError> {
    if !form.a.is_positive() || !(&form.b * &form.b - ctx.disc()).is_multiple_of(&(&form.a * 4)) {
        return Err(IdealError::Malformed { a: form.a.clone(), b: form.b.clone() });
    }
    Ok(())
}

/// ρ(I) together with γ(I), the factor by which the distance advances.
pub fn rho(ctx: &FieldCtx, form: &IdealForm) -> Result<(IdealForm, GammaVal), IdealError> {
    check_form(ctx, form)?;
    let c = (ctx.disc() - &form.b * &form.b).abs() / (&form.a * 4);
    let b = tau_with_root(&-&form.b, &c, ctx.disc(), ctx.sqrt_floor());
    Ok((IdealForm { a: c, b }, form.gamma()))
}

/// ρ⁻¹(I) together with γ(ρ⁻¹(I)), by which the distance decreases.
pub fn rho_inv(ctx: &FieldCtx, form: &IdealForm) -> Result<(IdealForm, GammaVal), IdealError> {
    check_form(ctx, form)?;
    let (disc, root) = (ctx.disc(), ctx.sqrt_floor());
    let b_star = tau_with_root(&-&form.b, &form.a, disc, root);
    let a2: BigInt = (disc - &b_star * &b_star) / (&form.a * 4);
    if !a2.is_positive() {
        return Err(IdealError::Malformed { a: form.a.clone(), b: form.b.clone() });
    }
    let b2 = tau_with_root(&b_star, &a2, disc, root);
    let prev = IdealForm { a: a2, b: b2 };
    let gamma = prev.gamma();
    Ok((prev, gamma))
}

/// The conjugate ideal (a, τ(−b, a)).
pub fn sigma(ctx: &FieldCtx, form: &IdealForm) -> IdealForm {
    IdealForm {
        a: form.a.clone(),
        b: tau_with_root(&-&form.b, &form.a, ctx.disc(), ctx.sqrt_floor()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub ideal: IdealForm,
    /// γ of every form passed through, in order.
    pub gammas: Vec<GammaVal>,
}

impl Reduction {
    pub fn steps(&self) -> usize {
        self.gammas.len()
    }

    /// Σ ln|γ| at `prec_bits` per term.
    pub fn shift(&self, ctx: &FieldCtx, prec_bits: u32) -> Result<FixReal, NumericsError> {
        let mut acc = FixReal::zero(prec_bits + 2);
        for g in &self.gammas {
            acc = acc.add(&g.ln_abs(ctx, prec_bits)?);
        }
        Ok(acc)
    }
}

/// Applies ρ until the form is reduced.
pub fn reduce_to_reduced(ctx: &FieldCtx, form: &IdealForm) -> Result<Reduction, IdealError> {
    check_form(ctx, form)?;
    let start = IdealForm {
        a: form.a.clone(),
        b: tau_with_root(&form.b, &form.a, ctx.disc(), ctx.sqrt_floor()),
    };
    let cap = 2 * (form.a.bits() as usize) + 2 * (ctx.disc().bits() as usize) + 16;
    let mut current = start;
    let mut gammas = Vec::new();
    while !current.is_reduced(ctx) {
        if gammas.len() >= cap {
            return Err(IdealError::ReductionStalled(cap));
        }
        let (next, gamma) = rho(ctx, &current)?;
        gammas.push(gamma);
        current = next;
    }
    Ok(Reduction { ideal: current, gammas })
}

/// Product of the integral parts k(aZ + ((b+√D)/2)Z), scales multiplied.
pub fn multiply(ctx: &FieldCtx, i1: &StdIdeal, i2: &StdIdeal) -> Result<StdIdeal, IdealError> {
    let (k, a3, b3) = multiply_parts(ctx, &i1.a, &i1.b, &i2.a, &i2.b)?;
    Ok(StdIdeal::new(&i1.k * &i2.k * k, &i1.l * &i2.l, a3, b3))
}

/// (Z + γ₁Z)(Z + γ₂Z) = (1/k)(Z + γ₃Z). Returns the form and k.
pub fn multiply_forms(ctx: &FieldCtx, f1: &IdealForm, f2: &IdealForm) -> Result<(IdealForm, BigInt), IdealError> {
    let (k, a, b) = multiply_parts(ctx, &f1.a, &f1.b, &f2.a, &f2.b)?;
    Ok((IdealForm { a, b }, k))
}

fn multiply_parts(
    ctx: &FieldCtx,
    a1: &BigInt,
    b1: &BigInt,
    a2: &BigInt,
    b2: &BigInt,
) -> Result<(BigInt, BigInt, BigInt), IdealError> {
    let sum = b1 + b2;
    if sum.is_odd() {
        let pair = (IdealForm::new(a1.clone(), b1.clone()), IdealForm::new(a2.clone(), b2.clone()));
        return Err(IdealError::Parity(Box::new(pair)));
    }
    let half = sum / 2;
    let g = ext_gcd3(a1, a2, &half)?;
    let k = g.gcd;
    let a3 = a1 * a2 / (&k * &k);
    let num: BigInt = &g.u * a1 * b2 + &g.v * a2 * b1 + &g.w * (b1 * b2 + ctx.disc()) / 2;
    debug_assert!(num.is_multiple_of(&k));
    let b3 = tau_with_root(&(num / &k), &a3, ctx.disc(), ctx.sqrt_floor());
    Ok((k, a3, b3))
}

/// Standard form of αO for a nonzero algebraic integer α.
pub fn alpha_to_standard(ctx: &FieldCtx, alpha: &QuadElem) -> Result<StdIdeal, IdealError> {
    if alpha.is_zero() {
        return Err(IdealError::ZeroAlpha);
    }
    let (x, y) = match alpha.integral_coords() {
        Some(c) if alpha.is_alg_integer() => c,
        _ => return Err(IdealError::NotIntegral(alpha.to_string())),
    };
    let disc = ctx.disc();
    // αO has Z-basis α = (x + y√D)/2 and α(D + √D)/2 = ((x+y)D/2 + ((x+yD)/2)√D)/2
    let q2: BigInt = (&x + &y * disc) / 2;
    let p2: BigInt = (&x + &y) * disc / 2;
    let g = ext_gcd(&y, &q2)?;
    let k = g.gcd;
    let norm = alpha.norm().abs().to_integer();
    let a = &norm / (&k * &k);
    let b_raw = (&g.u * &x + &g.v * &p2) / &k;
    let b = tau_with_root(&b_raw, &a, disc, ctx.sqrt_floor());
    let ideal = StdIdeal::integral(k, a, b);
    let generators = [alpha.clone(), ctx.elem_int(p2, q2)];
    let forward = generators.iter().all(|gen| ideal.contains(gen));
    let backward = ideal.basis(ctx).iter().all(|beta| {
        beta.div(alpha).map(|ratio| ratio.in_maximal_order()).unwrap_or(false)
    });
    if !(forward && backward) {
        return Err(IdealError::Verification);
    }
    Ok(ideal)
}
