use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::NumericsError;

fn validate(positions: &[usize], q: usize) -> Result<(), NumericsError> {
    if positions.is_empty() {
        return Err(NumericsError::EmptyPositions);
    }
    if !q.is_power_of_two() {
        return Err(NumericsError::NotPowerOfTwo(q));
    }
    let mut seen = vec![false; q];
    for &pos in positions {
        if pos >= q {
            return Err(NumericsError::PositionOutOfRange { pos, q });
        }
        if std::mem::replace(&mut seen[pos], true) {
            return Err(NumericsError::DuplicatePosition(pos));
        }
    }
    Ok(())
}

fn check_mass(probs: &[f64]) -> Result<(), NumericsError> {
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(NumericsError::Normalization(total));
    }
    Ok(())
}

/// |Σ_{m∈P} e^{2πi jm/q}|² / (|P|·q) for every j in [0, q), via FFT.
pub fn dft_indicator(positions: &[usize], q: usize) -> Result<Vec<f64>, NumericsError> {
    validate(positions, q)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); q];
    for &pos in positions {
        buf[pos] = Complex64::new(1.0, 0.0);
    }
    // the sign convention of the transform does not change the moduli
    FftPlanner::new().plan_fft_inverse(q).process(&mut buf);
    let scale = (positions.len() * q) as f64;
    let probs: Vec<f64> = buf.iter().map(|z| z.norm_sqr() / scale).collect();
    check_mass(&probs)?;
    Ok(probs)
}

/// Same distribution by direct O(|P|·q) summation.
pub fn direct_indicator_distribution(positions: &[usize], q: usize) -> Result<Vec<f64>, NumericsError> {
    validate(positions, q)?;
    let scale = (positions.len() * q) as f64;
    let step = std::f64::consts::TAU / q as f64;
    let probs: Vec<f64> = (0..q)
        .map(|j| {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for &m in positions {
                // reduce jm mod q first so the angle stays accurate
                let phase = ((j as u128 * m as u128) % q as u128) as f64 * step;
                re += phase.cos();
                im += phase.sin();
            }
            (re * re + im * im) / scale
        })
        .collect();
    check_mass(&probs)?;
    Ok(probs)
}
