use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::FieldCtx;
use crate::ideal::IdealForm;
use crate::navigator::{NavError, Navigator};
use crate::numerics::FixReal;

use super::QError;

/// h̃_N(k): the ideal h(k/N) lands on and the gap in whole grid steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HTildeValue {
    pub ideal: IdealForm,
    pub gap_steps: BigInt,
}

/// h sampled on the grid (1/N)Z, with a fallback to higher precision when
/// ⌊N·gap⌋ is not settled.
#[derive(Debug, Clone)]
pub struct DiscretizedH {
    n: u64,
    nav: Navigator,
    retries: usize,
}

const MAX_REFINEMENTS: u32 = 4;

impl DiscretizedH {
    /// Grid 1/N for arguments up to `k_max`/N.
    pub fn new(ctx: &FieldCtx, n: u64, k_max: u64) -> Self {
        assert!(n >= 1, "grid size must be positive");
        let digits = (n as f64).log10().ceil() as u32 + 4;
        let x_max = k_max as f64 / n as f64 + 2.0;
        DiscretizedH { n, nav: Navigator::for_digits(ctx, digits, x_max), retries: 0 }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn navigator(&mut self) -> &mut Navigator {
        &mut self.nav
    }

    /// Evaluations that had to be repeated at higher precision.
    pub fn retries(&self) -> usize {
        self.retries
    }

    pub fn value(&mut self, k: u64) -> Result<HTildeValue, QError> {
        let x = BigRational::new(BigInt::from(k), BigInt::from(self.n));
        let n_big = BigInt::from(self.n);
        if let Some(v) = evaluate(&mut self.nav, k, &x, &n_big)? {
            return Ok(v);
        }
        self.retries += 1;
        let ctx = self.nav.ctx().clone();
        let mut prec = self.nav.prec_bits();
        for _ in 0..MAX_REFINEMENTS {
            prec *= 2;
            let mut fine = Navigator::new(&ctx, prec);
            if let Some(v) = evaluate(&mut fine, k, &x, &n_big)? {
                return Ok(v);
            }
        }
        Err(QError::UnresolvedFloor { k })
    }

    /// h̃ on 0..count.
    pub fn table(&mut self, count: u64) -> Result<Vec<HTildeValue>, QError> {
        (0..count).map(|k| self.value(k)).collect()
    }
}

fn evaluate(nav: &mut Navigator, k: u64, x: &BigRational, n: &BigInt) -> Result<Option<HTildeValue>, QError> {
    let h = match nav.h_eval(x) {
        Ok(h) => h,
        Err(NavError::PrecisionExhausted) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    // N·gap = k − N·δ keeps the δ = 0 case exact
    let steps = FixReal::from_int(&BigInt::from(k), h.delta.scale()).sub(&h.delta.mul_int(n));
    Ok(steps.floor_certified().map(|gap_steps| HTildeValue { ideal: h.ideal, gap_steps }))
}

/// Fraction of pairs (k, l) with f(k) = f(k + ⌊lS⌋) or f(k) = f(k + ⌈lS⌉),
/// over 0 ≤ k ≤ k_max and l in `ls`.
pub fn weak_periodicity_fraction<T, F>(mut f: F, s: &BigRational, k_max: u64, ls: &[u64]) -> Result<WeakAudit, QError>
where
    T: Eq + Clone + Hash,
    F: FnMut(u64) -> Result<T, QError>,
{
    let mut cache: HashMap<u64, T> = HashMap::new();
    let mut get = |k: u64, f: &mut F| -> Result<T, QError> {
        if let Some(v) = cache.get(&k) {
            return Ok(v.clone());
        }
        let v = f(k)?;
        cache.insert(k, v.clone());
        Ok(v)
    };
    let mut audit = WeakAudit::default();
    for k in 0..=k_max {
        let base = get(k, &mut f)?;
        for &l in ls {
            let ls_val = s * BigInt::from(l);
            let lo = ls_val.floor().to_integer();
            let hi = ls_val.ceil().to_integer();
            let lo = u64::try_from(lo).map_err(|_| QError::BadParameter("shift out of range".into()))?;
            let hi = u64::try_from(hi).map_err(|_| QError::BadParameter("shift out of range".into()))?;
            audit.checked += 1;
            let ok = get(k + lo, &mut f)? == base || (hi != lo && get(k + hi, &mut f)? == base);
            if ok {
                audit.satisfied += 1;
            } else {
                audit.failures.push((k, l));
            }
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeakAudit {
    pub checked: u64,
    pub satisfied: u64,
    /// (k, l) pairs where neither shift reproduces f(k).
    pub failures: Vec<(u64, u64)>,
}

impl WeakAudit {
    pub fn fraction(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.satisfied as f64 / self.checked as f64
        }
    }
}

/// Weak-periodicity audit of h̃_N against a reference period S = N·R,
/// for k in 0..=⌊S⌋.
pub fn audit_weak_periodicity(h: &mut DiscretizedH, s_ref: &BigRational, ls: &[u64]) -> Result<WeakAudit, QError> {
    let k_max = s_ref.floor().to_integer();
    let k_max = u64::try_from(k_max).map_err(|_| QError::BadParameter("period out of range".into()))?;
    weak_periodicity_fraction(|k| h.value(k), s_ref, k_max, ls)
}
