//! Exhaustive enumeration of the principal cycle with accumulated distances.
//! Slow but simple; used as the reference for everything else.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::field::FieldCtx;
use crate::ideal::{rho, unit_ideal, GammaVal, IdealError, IdealForm};
use crate::numerics::{ln_rational, FixReal, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CycleError {
    #[error("principal cycle longer than the step cap {0}")]
    StepCap(usize),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleEntry {
    pub index: usize,
    pub ideal: IdealForm,
    /// Distance from O, not reduced mod R.
    pub delta: FixReal,
    /// γ of this entry; ρ(entry) is the next one.
    pub gamma: GammaVal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalCycle {
    pub entries: Vec<CycleEntry>,
    pub regulator: FixReal,
    pub prec_bits: u32,
    index: HashMap<IdealForm, usize>,
}

/// Default bound on the number of ρ steps in [`walk_cycle`].
pub const DEFAULT_STEP_CAP: usize = 50_000_000;

/// Walks ρ from O until O recurs, summing ln γ at `prec_bits` per step.
pub fn walk_cycle(ctx: &FieldCtx, prec_bits: u32) -> Result<PrincipalCycle, CycleError> {
    walk_cycle_capped(ctx, prec_bits, DEFAULT_STEP_CAP)
}

pub fn walk_cycle_capped(ctx: &FieldCtx, prec_bits: u32, cap: usize) -> Result<PrincipalCycle, CycleError> {
    let unit = unit_ideal(ctx);
    let mut entries = Vec::new();
    let mut index = HashMap::new();
    let mut current = unit.clone();
    let mut delta = FixReal::zero(prec_bits + 2);
    loop {
        if entries.len() >= cap {
            return Err(CycleError::StepCap(cap));
        }
        let (next, gamma) = rho(ctx, &current)?;
        let step = gamma.ln_abs(ctx, prec_bits)?;
        index.insert(current.clone(), entries.len());
        entries.push(CycleEntry { index: entries.len(), ideal: current, delta: delta.clone(), gamma });
        delta = delta.add(&step);
        current = next;
        if current == unit {
            break;
        }
    }
    Ok(PrincipalCycle { entries, regulator: delta, prec_bits, index })
}

impl PrincipalCycle {
    pub fn k0(&self) -> usize {
        self.entries.len()
    }

    pub fn locate(&self, ideal: &IdealForm) -> Option<usize> {
        self.index.get(ideal).copied()
    }

    /// Distance from entry i to entry i+1 (indices mod k0).
    pub fn gap(&self, i: usize) -> FixReal {
        let k0 = self.k0();
        let i = i % k0;
        if i + 1 == k0 {
            self.regulator.sub(&self.entries[i].delta)
        } else {
            self.entries[i + 1].delta.sub(&self.entries[i].delta)
        }
    }

    /// Distance of the unrolled member i + p·k0.
    pub fn unrolled_delta(&self, period: &BigInt, i: usize) -> FixReal {
        self.regulator.mul_int(period).add(&self.entries[i].delta)
    }

    /// Last member of the periodically unrolled cycle with distance ≤ x.
    /// Returns (entry index, period, distance). Undecided comparisons count as ≤.
    pub fn member_at_or_below(&self, x: &BigRational) -> (usize, BigInt, FixReal) {
        assert!(!x.is_negative(), "negative distance");
        let r = self.regulator.to_rational();
        let mut period = (x / &r).floor().to_integer();
        // the floor from the midpoint may be off by one near a multiple of R
        while period.is_positive() && self.unrolled_delta(&period, 0).cmp_rational(x) == Some(std::cmp::Ordering::Greater) {
            period -= 1;
        }
        loop {
            let next = &period + 1;
            match self.unrolled_delta(&next, 0).cmp_rational(x) {
                Some(std::cmp::Ordering::Greater) => break,
                _ => period = next,
            }
        }
        let left = |i: usize| self.unrolled_delta(&period, i).cmp_rational(x) != Some(std::cmp::Ordering::Greater);
        let (mut lo, mut hi) = (0usize, self.k0());
        // entries are increasing in delta; find the last one that is ≤ x
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if left(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let delta = self.unrolled_delta(&period, lo);
        (lo, period, delta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundViolation {
    GapTooSmall { index: usize, gap: f64 },
    GapTooLarge { index: usize, gap: f64 },
    TwoStepTooSmall { index: usize, gap: f64 },
    LengthBelow { k0: usize, bound: f64 },
    LengthAbove { k0: usize, bound: f64 },
}

/// Checks gap ∈ [3/(32D), ½ ln D], two-step gap ≥ ln 2 and
/// 2R/ln D ≤ k0 ≤ 2R/ln 2. Comparisons that the error bounds cannot settle
/// are reported as violations.
pub fn check_cycle_bounds(ctx: &FieldCtx, cycle: &PrincipalCycle) -> Result<Vec<BoundViolation>, CycleError> {
    use std::cmp::Ordering::{Greater, Less};
    let prec = cycle.prec_bits;
    let ln_d = ln_rational(&BigRational::from_integer(ctx.disc().clone()), prec)?;
    let half_ln_d = ln_d.div_int(&BigInt::from(2));
    let ln2 = ln_rational(&BigRational::from_integer(BigInt::from(2)), prec)?;
    let d_min = FixReal::from_rational(ctx.d_min(), prec + 2);
    let mut out = Vec::new();
    let k0 = cycle.k0();
    for i in 0..k0 {
        let gap = cycle.gap(i);
        if gap.cmp_certified(&d_min) != Some(Greater) {
            out.push(BoundViolation::GapTooSmall { index: i, gap: gap.to_f64() });
        }
        if gap.cmp_certified(&half_ln_d) != Some(Less) {
            out.push(BoundViolation::GapTooLarge { index: i, gap: gap.to_f64() });
        }
        let two = gap.add(&cycle.gap(i + 1));
        if two.cmp_certified(&ln2) != Some(Greater) {
            out.push(BoundViolation::TwoStepTooSmall { index: i, gap: two.to_f64() });
        }
    }
    let k = FixReal::from_int(&BigInt::from(k0), prec + 2);
    let twice_r = cycle.regulator.mul_int(&BigInt::from(2));
    // 2R ≤ k0·ln D and k0·ln 2 ≤ 2R
    if k.mul(&ln_d).cmp_certified(&twice_r) == Some(Less) {
        out.push(BoundViolation::LengthBelow { k0, bound: twice_r.to_f64() / ln_d.to_f64() });
    }
    if k.mul(&ln2).cmp_certified(&twice_r) == Some(Greater) {
        out.push(BoundViolation::LengthAbove { k0, bound: twice_r.to_f64() / ln2.to_f64() });
    }
    Ok(out)
}

/// Square-free integers in [lo, hi).
pub fn square_free_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..hi).filter(|&d| crate::field::square_factor(d).is_none()).collect()
}

/// Every entry is reduced and distinct, the first is O, and ρ maps each
/// entry to the next.
pub fn is_consistent(ctx: &FieldCtx, cycle: &PrincipalCycle) -> bool {
    let k0 = cycle.k0();
    cycle.index.len() == k0
        && cycle.entries[0].ideal == unit_ideal(ctx)
        && cycle.entries.iter().enumerate().all(|(i, e)| {
            e.ideal.is_reduced(ctx)
                && rho(ctx, &e.ideal).map(|(next, _)| next == cycle.entries[(i + 1) % k0].ideal).unwrap_or(false)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn close(v: &FixReal, want: f64, tol: f64) -> bool {
        (v.to_f64() - want).abs() < tol
    }

    #[test]
    fn small_cycles() {
        let ctx5 = FieldCtx::new(5).unwrap();
        let c5 = walk_cycle(&ctx5, 64).unwrap();
        assert_eq!(c5.k0(), 1);
        assert!(close(&c5.regulator, 0.48121182505960347, 1e-15));

        let ctx3 = FieldCtx::new(3).unwrap();
        let c3 = walk_cycle(&ctx3, 64).unwrap();
        assert_eq!(c3.k0(), 2);
        assert!(close(&c3.regulator, 1.3169578969248168, 1e-15));
        assert_eq!(c3.locate(&IdealForm::new(2, 2)), Some(1));
        assert_eq!(c3.locate(&IdealForm::new(1, 2)), Some(0));

        let ctx13 = FieldCtx::new(13).unwrap();
        let c13 = walk_cycle(&ctx13, 64).unwrap();
        assert_eq!(c13.k0(), 1);
        assert!(close(&c13.regulator, 1.1947632172871094, 1e-15));
    }

    #[test]
    fn bounds_hold_for_small_fields() {
        for d in [2u64, 3, 5, 13, 94, 199] {
            let ctx = FieldCtx::new(d).unwrap();
            let c = walk_cycle(&ctx, 64).unwrap();
            assert!(check_cycle_bounds(&ctx, &c).unwrap().is_empty(), "d={d}");
            assert!(is_consistent(&ctx, &c));
        }
    }

    #[test]
    fn step_cap_is_enforced() {
        let ctx = FieldCtx::new(94).unwrap();
        assert_eq!(walk_cycle_capped(&ctx, 64, 1), Err(CycleError::StepCap(1)));
    }

    #[test]
    fn unrolled_lookup() {
        let ctx = FieldCtx::new(3).unwrap();
        let c = walk_cycle(&ctx, 64).unwrap();
        // ln(1+√3) ≈ 1.0051, R ≈ 1.3170
        let at = |x: f64| {
            let r = BigRational::new(BigInt::from((x * 1e6) as i64), BigInt::from(1_000_000));
            let (i, p, _) = c.member_at_or_below(&r);
            (i, p)
        };
        assert_eq!(at(0.0), (0, BigInt::zero()));
        assert_eq!(at(1.0), (0, BigInt::zero()));
        assert_eq!(at(1.01), (1, BigInt::zero()));
        assert_eq!(at(2.0), (0, BigInt::one()));
        assert_eq!(at(2.33), (1, BigInt::one()));
    }
}
