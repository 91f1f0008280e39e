//! Pell solutions from the principal cycle: the fundamental unit as the exact
//! product of the γ values around one period, then the smallest power with
//! integral coordinates and norm +1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cycle::{walk_cycle_capped, CycleError, DEFAULT_STEP_CAP};
use crate::field::{square_factor, FieldCtx, FieldError, QuadElem};
use crate::ideal::{rho, unit_ideal, IdealError};

/// Default cap on the decimal size of exact unit coordinates.
pub const DEFAULT_MAX_DIGITS: u64 = 100_000;

/// Environment variable overriding [`DEFAULT_MAX_DIGITS`].
pub const MAX_DIGITS_ENV: &str = "QUADREG_MAX_DIGITS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PellError {
    #[error("d = {0} is a perfect square; x² − dy² = 1 has only trivial solutions")]
    SquareD(u64),
    #[error("d must be at least 2")]
    TooSmall,
    #[error("exact unit exceeds the size cap of {cap} digits")]
    SizeCap { cap: u64 },
    #[error("no power up to {0} of the unit gives an integral solution")]
    PowerSearch(u32),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
}

impl PellSolution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        PellSolution { x: x.into(), y: y.into() }
    }

    pub fn satisfies(&self, d: u64) -> bool {
        &self.x * &self.x - BigInt::from(d) * &self.y * &self.y == BigInt::one()
    }

    /// (x₁ + y₁√d)(x₂ + y₂√d).
    pub fn compose(&self, other: &PellSolution, d: u64) -> PellSolution {
        let d = BigInt::from(d);
        PellSolution {
            x: &self.x * &other.x + &d * &self.y * &other.y,
            y: &self.x * &other.y + &other.x * &self.y,
        }
    }
}

/// Size cap from the environment, falling back to the default.
pub fn max_digits_from_env() -> u64 {
    std::env::var(MAX_DIGITS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DIGITS)
}

fn decimal_digits(n: &BigInt) -> u64 {
    (n.bits() as f64 * std::f64::consts::LOG10_2).ceil() as u64
}

fn elem_digits(e: &QuadElem) -> u64 {
    [e.p().numer(), e.p().denom(), e.q().numer(), e.q().denom()]
        .iter()
        .map(|n| decimal_digits(n))
        .max()
        .unwrap_or(0)
}

/// ε₀ as the product of γ over one period of the principal cycle.
pub fn fundamental_unit(ctx: &FieldCtx, max_digits: u64) -> Result<QuadElem, PellError> {
    let unit = unit_ideal(ctx);
    let mut current = unit.clone();
    let mut eps = ctx.integer(1);
    let mut steps = 0usize;
    loop {
        let (next, gamma) = rho(ctx, &current)?;
        eps = &eps * &gamma.to_elem(ctx);
        if elem_digits(&eps) > max_digits {
            return Err(PellError::SizeCap { cap: max_digits });
        }
        steps += 1;
        if next == unit {
            break;
        }
        if next.a.is_one() {
            return Err(PellError::Internal(format!("unit ideal with b = {} inside the cycle", next.b)));
        }
        if steps >= DEFAULT_STEP_CAP {
            return Err(CycleError::StepCap(DEFAULT_STEP_CAP).into());
        }
        current = next;
    }
    if !eps.is_unit() || (&eps - &ctx.integer(1)).signum() != std::cmp::Ordering::Greater {
        return Err(PellError::Internal(format!("cycle product {eps} is not a unit above 1")));
    }
    Ok(eps)
}

/// Regulator cycle plus unit, for callers that want both.
pub fn fundamental_unit_with_cycle(
    ctx: &FieldCtx,
    prec_bits: u32,
    max_digits: u64,
) -> Result<(QuadElem, crate::cycle::PrincipalCycle), PellError> {
    let cycle = walk_cycle_capped(ctx, prec_bits, DEFAULT_STEP_CAP)?;
    Ok((fundamental_unit(ctx, max_digits)?, cycle))
}

/// Power of the unit that first has integer coordinates in 1, √d and norm +1,
/// together with the exponent (1, 2, 3 or 6).
pub fn smallest_pell_power(ctx: &FieldCtx, eps: &QuadElem) -> Result<(PellSolution, u32), PellError> {
    let mut power = eps.clone();
    for j in 1..=6u32 {
        let (x, y) = power.to_sqrt_d(ctx.omega());
        if x.is_integer() && y.is_integer() && power.norm().is_one() {
            let sol = PellSolution { x: x.to_integer(), y: y.to_integer() };
            if sol.x.is_positive() && sol.y.is_positive() && sol.satisfies(ctx.d()) {
                return Ok((sol, j));
            }
        }
        power = &power * eps;
    }
    Err(PellError::PowerSearch(6))
}

/// Fundamental solution for any non-square d ≥ 2. For d = f²·d₀ the powers
/// of the d₀ solution are searched for the first with f | y.
pub fn fundamental_pell_solution(d: u64, max_digits: u64) -> Result<PellSolution, PellError> {
    if d < 2 {
        return Err(PellError::TooSmall);
    }
    let (core, f) = square_free_part(d);
    if core == 1 {
        return Err(PellError::SquareD(d));
    }
    let ctx = FieldCtx::new(core)?;
    let eps = fundamental_unit(&ctx, max_digits)?;
    let (base, _) = smallest_pell_power(&ctx, &eps)?;
    if f == 1 {
        return Ok(base);
    }
    let f_big = BigInt::from(f);
    let mut current = base.clone();
    // the order of the solution group mod f is below 2f²
    let cap = 2 * f * f + 2;
    for _ in 0..cap {
        if (&current.y % &f_big).is_zero() {
            let sol = PellSolution { x: current.x.clone(), y: &current.y / &f_big };
            if !sol.satisfies(d) {
                return Err(PellError::Internal("scaled solution fails".into()));
            }
            return Ok(sol);
        }
        current = current.compose(&base, core);
        if decimal_digits(&current.x) > max_digits {
            return Err(PellError::SizeCap { cap: max_digits });
        }
    }
    Err(PellError::Internal(format!("no power with {f} | y")))
}

/// (d₀, f) with d = f²·d₀ and d₀ square-free.
pub fn square_free_part(d: u64) -> (u64, u64) {
    let mut core = d;
    let mut f = 1u64;
    while let Some(p) = square_factor(core) {
        core /= p * p;
        f *= p;
    }
    (core, f)
}

/// The first `count` solutions, as powers of the fundamental one.
pub fn solutions(d: u64, count: usize, max_digits: u64) -> Result<Vec<PellSolution>, PellError> {
    let base = fundamental_pell_solution(d, max_digits)?;
    let mut out = Vec::with_capacity(count);
    let mut current = base.clone();
    for _ in 0..count {
        if !current.satisfies(d) {
            return Err(PellError::Internal("power fails the equation".into()));
        }
        out.push(current.clone());
        current = current.compose(&base, d);
    }
    Ok(out)
}

/// Smallest solution with y ≤ y_bound by testing whether 1 + d·y² is a square.
pub fn brute_force_pell(d: u64, y_bound: u64) -> Option<PellSolution> {
    let dd = u128::from(d);
    for y in 1..=y_bound {
        let t = 1 + dd * u128::from(y) * u128::from(y);
        let mut x = (t as f64).sqrt() as u128;
        while x * x > t {
            x -= 1;
        }
        while (x + 1) * (x + 1) <= t {
            x += 1;
        }
        if x * x == t {
            return Some(PellSolution::new(BigInt::from(x), BigInt::from(y)));
        }
        if t > u128::MAX / 4 {
            break;
        }
    }
    None
}

/// ln(x + y√d) as f64, for quick comparisons.
pub fn ln_solution_f64(sol: &PellSolution, d: u64) -> f64 {
    let bits = sol.x.bits().saturating_sub(60);
    let x = (&sol.x >> bits).to_f64().unwrap_or(f64::NAN);
    let y = (&sol.y >> bits).to_f64().unwrap_or(f64::NAN);
    (x + y * (d as f64).sqrt()).ln() + bits as f64 * std::f64::consts::LN_2
}

/// x + y√d as an element of the field of d (d square-free).
pub fn solution_elem(ctx: &FieldCtx, sol: &PellSolution) -> QuadElem {
    ctx.from_sqrt_d(BigRational::from_integer(sol.x.clone()), BigRational::from_integer(sol.y.clone()))
}
