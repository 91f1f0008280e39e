use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use quadreg::cycle::walk_cycle;
use quadreg::field::FieldCtx;
use quadreg::navigator::{NavError, Navigator};
use quadreg::pell::{max_digits_from_env, solutions, square_free_part};
use quadreg::qperiod::{build_run, good_js, min_q_exponent, qsolve, DiscretizedH, QSolveConfig};

use crate::output::{field_json, parse_decimal, real_json, trial_json, CliError};
use crate::Method;

type Outcome = Result<(Value, Value), CliError>;

fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32
}

/// Cycle walk with the precision raised until the regulator is certified to
/// well below half a unit in the last printed digit.
fn certified_cycle(ctx: &FieldCtx, digits: u32) -> Result<quadreg::cycle::PrincipalCycle, CliError> {
    let target = BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), digits as usize) * 4);
    let mut prec = bits_for_digits(digits) + 24;
    loop {
        let cycle = walk_cycle(ctx, prec)?;
        if cycle.regulator.err_value() < target {
            return Ok(cycle);
        }
        prec += 8 + cycle.k0().max(1).ilog2();
    }
}

pub fn regulator(d: u64, digits: u32, method: Method, grid: Option<u64>, trials: usize, seed: u64) -> Outcome {
    let ctx = FieldCtx::new(d)?;
    let result = match method {
        Method::Cycle => {
            let cycle = certified_cycle(&ctx, digits)?;
            json!({ "method": "cycle", "regulator": real_json(&cycle.regulator, digits as usize), "k0": cycle.k0() })
        }
        Method::Quantum => {
            let cfg = QSolveConfig { digits, grid, max_trials: trials, seed, ..QSolveConfig::default() };
            let rep = qsolve(&ctx, &cfg)?;
            json!({
                "method": "quantum",
                "regulator": real_json(&rep.regulator, digits as usize),
                "candidate": rep.candidate.to_string(),
                "grid": rep.grid,
                "q_exponent": rep.q_exponent,
                "groups": rep.groups,
                "stats": trial_json(&rep.stats),
            })
        }
    };
    Ok((field_json(&ctx), result))
}

pub fn pell(d: u64, count: usize) -> Outcome {
    if d < 2 {
        return Err(CliError::invalid("d must be at least 2"));
    }
    if count == 0 {
        return Err(CliError::invalid("count must be positive"));
    }
    let (core, factor) = square_free_part(d);
    if core == 1 {
        return Err(CliError::invalid(format!("d = {d} is a perfect square")));
    }
    let ctx = FieldCtx::new(core)?;
    let sols = solutions(d, count, max_digits_from_env())?;
    let list: Vec<Value> = sols.iter().map(|s| json!({ "x": s.x.to_string(), "y": s.y.to_string() })).collect();
    Ok((
        field_json(&ctx),
        json!({ "square_factor": factor, "fundamental": list[0].clone(), "solutions": list }),
    ))
}

pub fn cycle(d: u64, digits: u32) -> Outcome {
    let ctx = FieldCtx::new(d)?;
    let cycle = certified_cycle(&ctx, digits)?;
    let entries: Vec<Value> = cycle
        .entries
        .iter()
        .map(|e| {
            json!({
                "index": e.index,
                "a": e.ideal.a.to_string(),
                "b": e.ideal.b.to_string(),
                "delta": real_json(&e.delta, digits as usize),
            })
        })
        .collect();
    Ok((
        field_json(&ctx),
        json!({ "k0": cycle.k0(), "regulator": real_json(&cycle.regulator, digits as usize), "entries": entries }),
    ))
}

pub fn h(d: u64, x: &str, digits: u32) -> Outcome {
    let ctx = FieldCtx::new(d)?;
    let xr = parse_decimal(x).ok_or_else(|| CliError::invalid(format!("x = {x:?} is not a decimal number")))?;
    if xr.is_negative() {
        return Err(CliError::invalid("x must be non-negative"));
    }
    let x_max = xr.to_f64().unwrap_or(f64::MAX);
    let mut nav = Navigator::for_digits(&ctx, digits + 2, x_max);
    let mut attempts = 0;
    let hv = loop {
        match nav.h_eval(&xr) {
            Ok(v) => break v,
            Err(NavError::PrecisionExhausted) if attempts < 4 => {
                attempts += 1;
                nav = Navigator::new(&ctx, nav.prec_bits() * 2);
            }
            Err(e) => return Err(e.into()),
        }
    };
    Ok((
        field_json(&ctx),
        json!({
            "x": x,
            "ideal": { "a": hv.ideal.a.to_string(), "b": hv.ideal.b.to_string() },
            "delta": real_json(&hv.delta, digits as usize),
            "gap": real_json(&hv.gap, digits as usize),
        }),
    ))
}

/// FFT round-off on any single probability stays far below this.
const PROB_ERR: &str = "1.0e-10";

pub fn qdist(d: u64, n: u64, exhaustive: bool, count: usize, seed: u64, q_exp: Option<u32>, min_prob: f64) -> Outcome {
    let ctx = FieldCtx::new(d)?;
    if n == 0 {
        return Err(CliError::invalid("grid size N must be positive"));
    }
    // the simulator sizes q from the reference period; decoding never uses it
    let reference = walk_cycle(&ctx, 128)?.regulator;
    let s = reference.to_rational() * BigInt::from(n);
    let sf = s.to_f64().unwrap_or(f64::NAN);
    if sf <= 1.0 {
        return Err(CliError::invalid(format!("period S = N·R = {sf:.3} must exceed 1; raise N")));
    }
    let exp = q_exp.unwrap_or_else(|| min_q_exponent(&s));
    let mut h = DiscretizedH::new(&ctx, n, 1u64 << exp.min(62));
    let mut run = build_run(&mut h, exp, &s)?;
    let q = run.q();
    let good = good_js(q, sf);
    let mut result = json!({
        "N": n,
        "S": real_json(&reference.mul_int(&BigInt::from(n)), 12),
        "q": q,
        "q_exponent": exp,
        "groups": run.groups().len(),
        "p_err": PROB_ERR,
    });
    if exhaustive {
        let mix = run.mixture()?;
        let listed: Vec<Value> = mix
            .iter()
            .enumerate()
            .filter(|(_, p)| **p >= min_prob)
            .map(|(j, p)| json!({ "j": j, "p": format!("{p:.12e}") }))
            .collect();
        let omitted = mix.iter().filter(|p| **p < min_prob).fold(0.0f64, |a, p| a + p);
        let good_list: Vec<Value> =
            good.iter().map(|g| json!({ "j": g.j, "k": g.k, "p": format!("{:.12e}", mix[g.j]) })).collect();
        let good_mass: f64 = good.iter().map(|g| mix[g.j]).sum();
        result["mode"] = json!("exhaustive");
        result["distribution"] = json!(listed);
        result["omitted_mass"] = json!(format!("{omitted:.3e}"));
        result["good_j"] = json!(good_list);
        result["good_mass"] = json!(format!("{good_mass:.12e}"));
        result["amplitude_bound"] = json!(format!("{:.12e}", 1.0 / 18.0 / sf));
    } else {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            let (g, j) = run.measure(&mut rng)?;
            let p = run.distribution(g)?[j];
            let k = good.iter().find(|x| x.j == j).map(|x| x.k);
            samples.push(json!({ "group": g, "j": j, "p": format!("{p:.12e}"), "good_k": k }));
        }
        let good_list: Vec<Value> = good.iter().map(|g| json!({ "j": g.j, "k": g.k })).collect();
        result["mode"] = json!("sampled");
        result["samples"] = json!(samples);
        result["good_j"] = json!(good_list);
    }
    Ok((field_json(&ctx), result))
}
