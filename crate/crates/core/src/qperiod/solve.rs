use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::field::FieldCtx;
use crate::ideal::IdealForm;
use crate::navigator::{NavError, Navigator};
use crate::numerics::{ln_rational, round_ratio, FixReal};

use super::decode::decode_two_samples;
use super::htilde::DiscretizedH;
use super::run::{build_run, min_q_exponent};
use super::QError;

/// Number of reduced forms of discriminant D over all classes, an upper
/// bound on the principal cycle length.
pub fn count_reduced_forms(ctx: &FieldCtx) -> u64 {
    let disc = ctx.disc().to_u128().expect("discriminant fits in u128");
    let root = ctx.sqrt_floor().to_u128().expect("root fits in u128");
    let mut count = 0;
    let mut b = disc % 2;
    while b <= root {
        let n = (disc - b * b) / 4;
        for a in 1..=(b + root) / 2 + 1 {
            if n.is_multiple_of(a) {
                let form = IdealForm::new(a, b);
                if form.validate(ctx).is_ok() && form.is_reduced(ctx) {
                    count += 1;
                }
            }
        }
        b += 2;
    }
    count
}

/// R ≤ (#reduced forms)·½ ln D, without walking the cycle.
pub fn regulator_upper_bound(ctx: &FieldCtx) -> Result<BigRational, QError> {
    let ln_d = ln_rational(&BigRational::from_integer(ctx.disc().clone()), 64)?;
    Ok(ln_d.upper() * BigInt::from(count_reduced_forms(ctx)) / BigInt::from(2))
}

/// Smallest N with 1/N < d_min/ln d.
pub fn default_grid(ctx: &FieldCtx) -> Result<u64, QError> {
    let ln_d = ln_rational(&BigRational::from_integer(BigInt::from(ctx.d())), 64)?;
    let n: BigInt = (ln_d.upper() / ctx.d_min()).floor().to_integer() + 1;
    n.to_u64().ok_or_else(|| QError::BadParameter("grid size out of range".into()))
}

#[derive(Debug, Clone)]
pub struct QSolveConfig {
    /// Decimal digits of the refined regulator.
    pub digits: u32,
    /// Grid size N; defaults to [`default_grid`].
    pub grid: Option<u64>,
    /// Upper bound on R for sizing q; defaults to [`regulator_upper_bound`].
    pub r_bound: Option<BigRational>,
    pub max_trials: usize,
    pub seed: u64,
    /// Stop at the first trial that yields a refined value.
    pub stop_at_first: bool,
}

impl Default for QSolveConfig {
    fn default() -> Self {
        QSolveConfig { digits: 10, grid: None, r_bound: None, max_trials: 200, seed: 0, stop_at_first: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialStats {
    pub trials: usize,
    /// Trials whose refined value matches the final answer within 1/N.
    pub successes: usize,
    /// Trials where some candidate passed the near-multiple test.
    pub validated: usize,
    /// Trials lost to an outcome j = 0.
    pub zero_samples: usize,
    pub first_success: Option<usize>,
}

impl TrialStats {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct QSolveReport {
    pub regulator: FixReal,
    /// Decoded grid multiple m ≈ N·R behind the answer.
    pub candidate: BigInt,
    pub grid: u64,
    pub q_exponent: u32,
    pub s_bound: BigRational,
    pub groups: usize,
    pub stats: TrialStats,
}

/// Full pipeline: size q blindly, build the run, then per trial measure two
/// outcomes, decode, validate each candidate m with |R − m/N| < 1/N through
/// the distance machinery and refine the survivor.
pub fn qsolve(ctx: &FieldCtx, config: &QSolveConfig) -> Result<QSolveReport, QError> {
    let n = match config.grid {
        Some(n) if n >= 1 => n,
        Some(_) => return Err(QError::BadParameter("grid size must be positive".into())),
        None => default_grid(ctx)?,
    };
    let r_bound = match &config.r_bound {
        Some(r) => r.clone(),
        None => regulator_upper_bound(ctx)?,
    };
    let s_bound = &r_bound * BigInt::from(n);
    let q_exponent = min_q_exponent(&s_bound);
    let q = 1u64 << q_exponent;
    let mut h = DiscretizedH::new(ctx, n, q);
    let mut run = build_run(&mut h, q_exponent, &s_bound)?;

    let x_max = r_bound.to_f64().unwrap_or(f64::MAX) + 2.0;
    let mut refiner = Navigator::for_digits(ctx, config.digits + 2, x_max);
    let grid = BigRational::from_integer(BigInt::from(n));
    let radius = grid.recip();
    let m_cap = s_bound.ceil().to_integer() + 1;
    let mut rng = StdRng::seed_from_u64(config.seed);

    let mut stats = TrialStats::default();
    let mut found: Vec<Option<(BigInt, FixReal)>> = Vec::new();
    for _ in 0..config.max_trials {
        stats.trials += 1;
        let (_, c) = run.measure(&mut rng)?;
        let (_, d) = run.measure(&mut rng)?;
        let candidates = match decode_two_samples(c as u64, d as u64, q) {
            Ok(v) => v,
            Err(QError::ZeroSample) => {
                stats.zero_samples += 1;
                found.push(None);
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut result = None;
        for m in candidates.into_iter().filter(|m| *m <= m_cap) {
            let x = BigRational::from_integer(m.clone()) / &grid;
            if !h.navigator().is_near_multiple(&x, &radius)? {
                continue;
            }
            match refiner.refine_regulator(&round_ratio(&x)) {
                Ok(r) => {
                    result = Some((m, r));
                    break;
                }
                Err(NavError::BadEstimate(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        if result.is_some() {
            stats.validated += 1;
        }
        let done = result.is_some() && config.stop_at_first;
        found.push(result);
        if done {
            break;
        }
    }

    let best = found
        .iter()
        .flatten()
        .min_by(|a, b| a.1.to_rational().cmp(&b.1.to_rational()))
        .cloned();
    let Some((candidate, regulator)) = best else {
        return Err(QError::TrialsExhausted(stats));
    };
    for (i, r) in found.iter().enumerate() {
        if let Some((_, v)) = r {
            let diff = v.sub(&regulator);
            if diff.cmp_rational(&radius) == Some(Ordering::Less) {
                stats.successes += 1;
                stats.first_success.get_or_insert(i + 1);
            }
        }
    }
    Ok(QSolveReport { regulator, candidate, grid: n, q_exponent, s_bound, groups: run.groups().len(), stats })
}
