//! Giant steps along the principal cycle: the *-product of two anchored
//! ideals, iterated squaring, h(x), regulator refinement and the
//! near-multiple test.
//!
//! A [`Navigator`] owns its caches (logarithms of γ, *-product offsets and
//! the squaring ladder), so a caller keeps one per field and precision.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::FieldCtx;
use crate::ideal::{multiply_forms, reduce_to_reduced, rho, rho_inv, unit_ideal, IdealError, IdealForm};
use crate::numerics::{ln_rational, precision_for_digits, FixReal, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NavError {
    #[error("x must be non-negative")]
    NegativeX,
    #[error("distance error bound reached half the minimum gap; retry with more precision")]
    PrecisionExhausted,
    #[error("target not found within {0} alignment steps")]
    AlignmentWindow(usize),
    #[error("no unit ideal within distance 1 of {0}")]
    BadEstimate(BigInt),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A cycle member with its distance from O.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchored {
    pub ideal: IdealForm,
    pub delta: FixReal,
}

/// h(x): the last cycle member at distance ≤ x and the gap x − δ.
#[derive(Debug, Clone, PartialEq)]
pub struct HValue {
    pub ideal: IdealForm,
    pub delta: FixReal,
    pub gap: FixReal,
}

#[derive(Debug, Clone)]
pub struct Navigator {
    ctx: FieldCtx,
    prec: u32,
    unit: IdealForm,
    window: usize,
    half_d_min: BigRational,
    ln_gamma: HashMap<IdealForm, FixReal>,
    ln_int: HashMap<BigInt, FixReal>,
    star_memo: HashMap<(IdealForm, IdealForm), (IdealForm, FixReal)>,
    ladder: Vec<Anchored>,
    max_offset_err: BigRational,
}

const MEMO_LIMIT: usize = 1 << 20;

fn is_left(delta: &FixReal, x: &BigRational) -> bool {
    delta.cmp_rational(x) != Some(Ordering::Greater)
}

impl Navigator {
    pub fn new(ctx: &FieldCtx, prec_bits: u32) -> Self {
        let ln_d = ctx.disc().bits() as f64 * std::f64::consts::LN_2;
        let window = (3.0 * ln_d / std::f64::consts::LN_2).ceil() as usize + 4;
        Navigator {
            ctx: ctx.clone(),
            prec: prec_bits,
            unit: unit_ideal(ctx),
            window,
            half_d_min: ctx.d_min() / BigInt::from(2),
            ln_gamma: HashMap::new(),
            ln_int: HashMap::new(),
            star_memo: HashMap::new(),
            ladder: Vec::new(),
            max_offset_err: BigRational::zero(),
        }
    }

    /// Precision for distances up to `x_max` reported to `digits` decimals
    /// and resolved finer than the minimum gap.
    pub fn precision_for(ctx: &FieldCtx, digits: u32, x_max: f64) -> u32 {
        let levels = (x_max.max(0.0) + 2.0).log2().ceil() as u64 + 1;
        let disc_bits = ctx.disc().bits();
        let steps = levels * 4 * (3 * disc_bits + 16);
        // each ladder level doubles the error of the level below
        let dmin_bits = (disc_bits + 6) as u32;
        let digit_bits = precision_for_digits(digits, steps) - 32;
        precision_for_digits(0, steps) + digit_bits.max(dmin_bits) + levels as u32
    }

    pub fn for_digits(ctx: &FieldCtx, digits: u32, x_max: f64) -> Self {
        Navigator::new(ctx, Navigator::precision_for(ctx, digits, x_max))
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec
    }

    pub fn unit(&self) -> &IdealForm {
        &self.unit
    }

    /// Largest alignment window allowed in a *-product.
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn origin(&self) -> Anchored {
        Anchored { ideal: self.unit.clone(), delta: FixReal::zero(self.prec + 2) }
    }

    /// ln|γ(form)|, cached.
    pub fn ln_gamma(&mut self, form: &IdealForm) -> Result<FixReal, NavError> {
        if let Some(v) = self.ln_gamma.get(form) {
            return Ok(v.clone());
        }
        let v = form.gamma().ln_abs(&self.ctx, self.prec)?;
        if self.ln_gamma.len() >= MEMO_LIMIT {
            self.ln_gamma.clear();
        }
        self.ln_gamma.insert(form.clone(), v.clone());
        Ok(v)
    }

    fn ln_int(&mut self, k: &BigInt) -> Result<FixReal, NavError> {
        if let Some(v) = self.ln_int.get(k) {
            return Ok(v.clone());
        }
        let v = ln_rational(&BigRational::from_integer(k.clone()), self.prec)?;
        self.ln_int.insert(k.clone(), v.clone());
        Ok(v)
    }

    pub fn step(&mut self, a: &Anchored) -> Result<Anchored, NavError> {
        let (next, _) = rho(&self.ctx, &a.ideal)?;
        let ln = self.ln_gamma(&a.ideal)?;
        Ok(Anchored { ideal: next, delta: a.delta.add(&ln) })
    }

    pub fn step_back(&mut self, a: &Anchored) -> Result<Anchored, NavError> {
        let (prev, _) = rho_inv(&self.ctx, &a.ideal)?;
        let ln = self.ln_gamma(&prev)?;
        Ok(Anchored { ideal: prev, delta: a.delta.sub(&ln) })
    }

    fn check_err(&self, v: &FixReal) -> Result<(), NavError> {
        if v.err_value() >= self.half_d_min {
            return Err(NavError::PrecisionExhausted);
        }
        Ok(())
    }

    /// For reduced cycle members J₁, J₂ returns (J, c): J is the first member
    /// with δ(J) > δ(J₁) + δ(J₂), and δ(J) = δ(J₁) + δ(J₂) + c.
    pub fn star_offset(&mut self, f1: &IdealForm, f2: &IdealForm) -> Result<(IdealForm, FixReal), NavError> {
        let key = if f1 <= f2 { (f1.clone(), f2.clone()) } else { (f2.clone(), f1.clone()) };
        if let Some(v) = self.star_memo.get(&key) {
            return Ok(v.clone());
        }
        let (product, k) = multiply_forms(&self.ctx, f1, f2)?;
        let mut offset = FixReal::zero(self.prec + 2);
        if !k.is_one() {
            offset = offset.sub(&self.ln_int(&k)?);
        }
        let red = reduce_to_reduced(&self.ctx, &product)?;
        for g in &red.gammas {
            let form = IdealForm { a: g.a.clone(), b: g.b.clone() };
            offset = offset.add(&self.ln_gamma(&form)?);
        }
        let mut current = red.ideal;
        let right = |v: &FixReal| v.signum_certified() == Some(Ordering::Greater);
        let mut steps = 0;
        if !right(&offset) {
            while !right(&offset) {
                steps += 1;
                if steps > self.window {
                    return Err(NavError::AlignmentWindow(self.window));
                }
                offset = offset.add(&self.ln_gamma(&current)?);
                current = rho(&self.ctx, &current)?.0;
            }
        } else {
            loop {
                let (prev, _) = rho_inv(&self.ctx, &current)?;
                let back = offset.sub(&self.ln_gamma(&prev)?);
                if !right(&back) {
                    break;
                }
                steps += 1;
                if steps > self.window {
                    return Err(NavError::AlignmentWindow(self.window));
                }
                offset = back;
                current = prev;
            }
        }
        self.check_err(&offset)?;
        let err = offset.err_value();
        if err > self.max_offset_err {
            self.max_offset_err = err;
        }
        if self.star_memo.len() >= MEMO_LIMIT {
            self.star_memo.clear();
        }
        self.star_memo.insert(key, (current.clone(), offset.clone()));
        Ok((current, offset))
    }

    /// A₁ * A₂: the first cycle member beyond δ(A₁) + δ(A₂).
    pub fn star(&mut self, a1: &Anchored, a2: &Anchored) -> Result<Anchored, NavError> {
        let (ideal, offset) = self.star_offset(&a1.ideal, &a2.ideal)?;
        let delta = a1.delta.add(&a2.delta).add(&offset);
        self.check_err(&delta)?;
        Ok(Anchored { ideal, delta })
    }

    /// ρ²(O), the bottom rung of the squaring ladder.
    fn ladder_base(&mut self) -> Result<Anchored, NavError> {
        let o = self.origin();
        let one = self.step(&o)?;
        self.step(&one)
    }

    /// Extends the ladder L₀ = ρ²(O), L_{j+1} = L_j * L_j past x.
    pub fn ladder_to(&mut self, x: &BigRational) -> Result<&[Anchored], NavError> {
        if self.ladder.is_empty() {
            let base = self.ladder_base()?;
            self.ladder.push(base);
        }
        while is_left(&self.ladder.last().expect("nonempty").delta, x) {
            let top = self.ladder.last().expect("nonempty").clone();
            let next = self.star(&top, &top)?;
            self.ladder.push(next);
        }
        Ok(&self.ladder)
    }

    /// h(x) for x ≥ 0.
    pub fn h_eval(&mut self, x: &BigRational) -> Result<HValue, NavError> {
        if x.is_negative() {
            return Err(NavError::NegativeX);
        }
        let levels = self.ladder_to(x)?.len();
        let mut current = self.origin();
        for j in (0..levels).rev() {
            let rung = self.ladder[j].clone();
            let mut accepted = 0;
            loop {
                let candidate = self.star(&current, &rung)?;
                if !is_left(&candidate.delta, x) {
                    break;
                }
                current = candidate;
                accepted += 1;
                if accepted > 64 {
                    return Err(NavError::AlignmentWindow(64));
                }
            }
        }
        let mut guard = 0;
        loop {
            let one = self.step(&current)?;
            let two = self.step(&one)?;
            if !is_left(&two.delta, x) {
                if is_left(&one.delta, x) {
                    current = one;
                }
                break;
            }
            current = two;
            guard += 1;
            if guard > 4 * self.window {
                return Err(NavError::AlignmentWindow(4 * self.window));
            }
        }
        let x_fix = FixReal::from_rational(x, self.prec + 2);
        let gap = x_fix.sub(&current.delta);
        Ok(HValue { ideal: current.ideal, delta: current.delta, gap })
    }

    /// Whether O sits within `radius` of x, scanning four members on each
    /// side of h(x).
    pub fn is_near_multiple(&mut self, x: &BigRational, radius: &BigRational) -> Result<bool, NavError> {
        let h = self.h_eval(x)?;
        let start = Anchored { ideal: h.ideal, delta: h.delta };
        let within = |a: &Anchored, unit: &IdealForm| {
            if a.ideal != *unit {
                return false;
            }
            let diff = a.delta.sub(&FixReal::from_rational(x, a.delta.scale()));
            diff.cmp_rational(radius) == Some(Ordering::Less)
                && diff.cmp_rational(&-radius) == Some(Ordering::Greater)
        };
        let unit = self.unit.clone();
        if within(&start, &unit) {
            return Ok(true);
        }
        let mut fwd = start.clone();
        let mut back = start;
        for _ in 0..4 {
            fwd = self.step(&fwd)?;
            if within(&fwd, &unit) {
                return Ok(true);
            }
            back = self.step_back(&back)?;
            if within(&back, &unit) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether |jR − m| < 1 for some integer j.
    pub fn is_near_multiple_of_r(&mut self, m: &BigInt) -> Result<bool, NavError> {
        if m.is_negative() {
            return Err(NavError::NegativeX);
        }
        self.is_near_multiple(&BigRational::from_integer(m.clone()), &BigRational::one())
    }

    /// From an integer m with |R − m| < 1, the distance of the first O after
    /// h(m − 1). If the estimate is only within 1 of a multiple jR, that
    /// multiple is what comes back.
    pub fn refine_regulator(&mut self, m: &BigInt) -> Result<FixReal, NavError> {
        let start: BigInt = (m - 1u32).max(BigInt::zero());
        let h = self.h_eval(&BigRational::from_integer(start))?;
        let mut current = Anchored { ideal: h.ideal, delta: h.delta };
        let cap = self.window + 8;
        for _ in 0..=cap {
            if current.ideal == self.unit && current.delta.signum_certified() == Some(Ordering::Greater) {
                let diff = current.delta.sub(&FixReal::from_int(m, current.delta.scale()));
                let one = BigRational::one();
                if diff.cmp_rational(&one) == Some(Ordering::Less)
                    && diff.cmp_rational(&-one) == Some(Ordering::Greater)
                {
                    return Ok(current.delta);
                }
                return Err(NavError::BadEstimate(m.clone()));
            }
            current = self.step(&current)?;
        }
        Err(NavError::BadEstimate(m.clone()))
    }

    /// Largest error bound seen on a *-product offset.
    pub fn max_offset_err(&self) -> &BigRational {
        &self.max_offset_err
    }
}
