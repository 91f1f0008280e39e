use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::numerics::dft_indicator;

use super::htilde::{DiscretizedH, HTildeValue};
use super::QError;

/// Largest q = 2^e a run may allocate.
pub const MAX_Q_EXPONENT: u32 = 24;

// sampler tables kept at once; each holds q weights
const SAMPLER_CACHE: usize = 64;

/// Smallest e with 2^e ≥ 3S².
pub fn min_q_exponent(s: &BigRational) -> u32 {
    let need = s * s * BigInt::from(3);
    let mut e = 0u32;
    let mut q = BigRational::one();
    while q < need {
        q *= BigInt::from(2);
        e += 1;
    }
    e
}

/// The state after measuring h̃_N: preimage sets of every value over [0, q).
#[derive(Debug, Clone)]
pub struct QRun {
    q: usize,
    groups: Vec<Vec<usize>>,
    group_of: Vec<u32>,
    group_values: Option<Vec<HTildeValue>>,
    samplers: HashMap<usize, WeightedIndex<f64>>,
}

/// Evaluates h̃_N on [0, 2^q_exponent) and groups by value. `s_bound` is an
/// upper bound on S = N·R used only to check q ≥ 3S².
pub fn build_run(h: &mut DiscretizedH, q_exponent: u32, s_bound: &BigRational) -> Result<QRun, QError> {
    if q_exponent > MAX_Q_EXPONENT {
        return Err(QError::MemoryGuard(q_exponent));
    }
    let need = min_q_exponent(s_bound);
    if q_exponent < need {
        let s = s_bound.to_string().parse::<f64>().unwrap_or(f64::NAN);
        return Err(QError::QTooSmall { exp: q_exponent, need: 3.0 * s * s });
    }
    let q = 1u64 << q_exponent;
    let values = h.table(q)?;
    let mut run = build_run_from_values(&values)?;
    let mut reps = Vec::with_capacity(run.groups.len());
    for g in &run.groups {
        reps.push(values[g[0]].clone());
    }
    run.group_values = Some(reps);
    Ok(run)
}

/// Run over an arbitrary labelling of [0, q); q = values.len() must be a
/// power of two.
pub fn build_run_from_values<T: Eq + Hash>(values: &[T]) -> Result<QRun, QError> {
    let q = values.len();
    if !q.is_power_of_two() {
        return Err(QError::BadParameter(format!("q = {q} is not a power of two")));
    }
    if q > 1 << MAX_Q_EXPONENT {
        return Err(QError::MemoryGuard(q.trailing_zeros()));
    }
    let mut index: HashMap<&T, u32> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = Vec::with_capacity(q);
    for (m, v) in values.iter().enumerate() {
        let g = *index.entry(v).or_insert_with(|| {
            groups.push(Vec::new());
            (groups.len() - 1) as u32
        });
        groups[g as usize].push(m);
        group_of.push(g);
    }
    Ok(QRun { q, groups, group_of, group_values: None, samplers: HashMap::new() })
}

impl QRun {
    pub fn q(&self) -> usize {
        self.q
    }

    /// Preimage sets, in order of first occurrence.
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_of(&self, m: usize) -> usize {
        self.group_of[m] as usize
    }

    /// h̃_N value of each group, when built from a [`DiscretizedH`].
    pub fn group_values(&self) -> Option<&[HTildeValue]> {
        self.group_values.as_deref()
    }

    /// Output distribution after measuring the value of group `g`.
    pub fn distribution(&self, g: usize) -> Result<Vec<f64>, QError> {
        Ok(dft_indicator(&self.groups[g], self.q)?)
    }

    /// Σ_v (|P_v|/q)·dist_v, the distribution of j with the value unobserved.
    pub fn mixture(&self) -> Result<Vec<f64>, QError> {
        let mut out = vec![0.0; self.q];
        for (g, members) in self.groups.iter().enumerate() {
            let w = members.len() as f64 / self.q as f64;
            for (o, p) in out.iter_mut().zip(self.distribution(g)?) {
                *o += w * p;
            }
        }
        let total: f64 = out.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(crate::numerics::NumericsError::Normalization(total).into());
        }
        Ok(out)
    }

    /// One measurement: m uniform in [0, q) fixes the value, then j is drawn
    /// from that group's distribution. Returns (group, j).
    pub fn measure<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(usize, usize), QError> {
        let m = rng.gen_range(0..self.q);
        let g = self.group_of(m);
        if !self.samplers.contains_key(&g) {
            if self.samplers.len() >= SAMPLER_CACHE {
                self.samplers.clear();
            }
            let dist = self.distribution(g)?;
            let sampler = WeightedIndex::new(&dist)
                .map_err(|e| QError::BadParameter(format!("degenerate distribution: {e}")))?;
            self.samplers.insert(g, sampler);
        }
        Ok((g, self.samplers[&g].sample(rng)))
    }
}

/// A Fourier outcome nearest kq/S and below q/ln S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoodJ {
    pub j: usize,
    pub k: u64,
}

/// Good outcomes for period `s` (> 1) and dimension q, k = 1, 2, ….
pub fn good_js(q: usize, s: f64) -> Vec<GoodJ> {
    assert!(s > 1.0, "period must exceed 1");
    let limit = q as f64 / s.ln();
    let mut out = Vec::new();
    for k in 1u64.. {
        let j = (k as f64 * q as f64 / s).round();
        if j >= limit || j >= q as f64 {
            break;
        }
        out.push(GoodJ { j: j as usize, k });
    }
    out
}
