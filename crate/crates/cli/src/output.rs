//! JSON records and exit codes.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use quadreg::cycle::CycleError;
use quadreg::field::{FieldCtx, FieldError};
use quadreg::navigator::NavError;
use quadreg::numerics::{rational_to_decimal, FixReal};
use quadreg::pell::PellError;
use quadreg::qperiod::QError;

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TRIALS: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Extra payload, e.g. trial statistics.
    pub detail: Option<Value>,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, kind: "invalid_input", message: message.into(), detail: None }
    }

    fn new(code: i32, kind: &'static str, message: String) -> Self {
        CliError { code, kind, message, detail: None }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "code": self.code, "kind": self.kind, "message": self.message });
        if let Some(d) = &self.detail {
            v["detail"] = d.clone();
        }
        v
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<CycleError> for CliError {
    fn from(e: CycleError) -> Self {
        match e {
            CycleError::StepCap(_) => CliError::new(EXIT_CAP, "resource_cap", e.to_string()),
            _ => CliError::new(EXIT_INTERNAL, "internal", e.to_string()),
        }
    }
}

impl From<PellError> for CliError {
    fn from(e: PellError) -> Self {
        match e {
            PellError::SquareD(_) | PellError::TooSmall | PellError::Field(_) => CliError::invalid(e.to_string()),
            PellError::SizeCap { .. } => CliError::new(EXIT_CAP, "resource_cap", e.to_string()),
            PellError::Cycle(c) => c.into(),
            _ => CliError::new(EXIT_INTERNAL, "internal", e.to_string()),
        }
    }
}

impl From<NavError> for CliError {
    fn from(e: NavError) -> Self {
        match e {
            NavError::NegativeX => CliError::invalid(e.to_string()),
            _ => CliError::new(EXIT_INTERNAL, "internal", e.to_string()),
        }
    }
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        match e {
            QError::TrialsExhausted(ref stats) => CliError {
                code: EXIT_TRIALS,
                kind: "trials_exhausted",
                message: e.to_string(),
                detail: Some(trial_json(stats)),
            },
            QError::MemoryGuard(_) => CliError::new(EXIT_CAP, "resource_cap", e.to_string()),
            QError::QTooSmall { .. } | QError::BadParameter(_) => CliError::invalid(e.to_string()),
            QError::Cycle(c) => c.into(),
            _ => CliError::new(EXIT_INTERNAL, "internal", e.to_string()),
        }
    }
}

pub fn trial_json(s: &quadreg::qperiod::TrialStats) -> Value {
    json!({
        "trials": s.trials,
        "successes": s.successes,
        "validated": s.validated,
        "zero_samples": s.zero_samples,
        "first_success": s.first_success,
        "rate": format!("{:.4}", s.rate()),
    })
}

/// Upper bound on a non-negative rational as a two-digit scientific string.
pub fn err_string(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut e: i32 = 0;
    let mut scaled = r.clone();
    while scaled >= ten {
        scaled /= &ten;
        e += 1;
    }
    while scaled < BigRational::one() {
        scaled *= &ten;
        e -= 1;
    }
    // scaled ∈ [1, 10); keep two significant digits, rounded up
    let mut m = (scaled * &ten).ceil().to_integer();
    if m >= BigInt::from(100) {
        m = BigInt::from(10);
        e += 1;
    }
    let s = m.to_string();
    format!("{}.{}e{}", &s[..1], &s[1..], e)
}

/// {"value", "err"} where err bounds |value − true| including the rounding
/// of the printed digits.
pub fn real_json(x: &FixReal, digits: usize) -> Value {
    let value = x.to_decimal(digits);
    let printed = parse_decimal(&value).expect("own decimal output parses");
    let err = (printed - x.to_rational()).abs() + x.err_value();
    json!({ "value": value, "err": err_string(&err) })
}

pub fn exact_json(r: &BigRational, digits: usize) -> Value {
    let value = rational_to_decimal(r, digits);
    let printed = parse_decimal(&value).expect("own decimal output parses");
    json!({ "value": value, "err": err_string(&(printed - r).abs()) })
}

/// Exact value of a plain decimal string such as "-2.50".
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(n, den);
    Some(if neg { -r } else { r })
}

pub fn field_json(ctx: &FieldCtx) -> Value {
    json!({
        "d": ctx.d(),
        "D": ctx.disc().to_string(),
        "d_min": exact_json(ctx.d_min(), 20),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_strings_round_up() {
        assert_eq!(err_string(&BigRational::new(1.into(), 3.into())), "3.4e-1");
        assert_eq!(err_string(&BigRational::new(1.into(), 100.into())), "1.0e-2");
        assert_eq!(err_string(&BigRational::new(999.into(), 1.into())), "1.0e3");
        assert_eq!(err_string(&BigRational::zero()), "0");
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_decimal("2.0"), Some(BigRational::from_integer(2.into())));
        assert_eq!(parse_decimal("-0.25"), Some(BigRational::new((-1).into(), 4.into())));
        assert_eq!(parse_decimal(".5"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_decimal("1e3"), None);
        assert_eq!(parse_decimal(""), None);
    }
}
