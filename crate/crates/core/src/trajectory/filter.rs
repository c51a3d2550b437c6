//! Zero-phase Butterworth low-pass filtering and prominence-based peak picking.

use crate::error::{Error, Result};

/// First-order Butterworth low-pass via the bilinear transform with frequency
/// prewarping, applied forward-backward for zero phase. DC gain is exactly 1;
/// the squared magnitude response at the cutoff is 1/2.
///
/// Edge transients are suppressed scipy-style: odd reflection padding plus
/// steady-state initial conditions.
pub fn butterworth_lowpass(signal: &[f64], sample_rate: f64, cutoff: f64) -> Result<Vec<f64>> {
    if !(sample_rate > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sample rate must be positive, got {sample_rate}"
        )));
    }
    if !(cutoff > 0.0) || cutoff >= sample_rate / 2.0 {
        return Err(Error::InvalidInput(format!(
            "cutoff must lie in (0, fs/2) = (0, {}), got {cutoff}",
            sample_rate / 2.0
        )));
    }
    if signal.len() < 2 {
        return Ok(signal.to_vec());
    }

    let k = (std::f64::consts::PI * cutoff / sample_rate).tan();
    let b0 = k / (k + 1.0);
    let b1 = b0;
    let a1 = (k - 1.0) / (k + 1.0);

    let pad = 6.min(signal.len() - 1);
    let padded = odd_reflect(signal, pad);
    let fwd = lfilter_with_zi(&padded, b0, b1, a1);
    let mut rev: Vec<f64> = fwd.into_iter().rev().collect();
    rev = lfilter_with_zi(&rev, b0, b1, a1);
    rev.reverse();
    Ok(rev[pad..rev.len() - pad].to_vec())
}

/// `y[n] = b0 x[n] + b1 x[n-1] − a1 y[n-1]`, with the filter state initialized
/// to its step-response steady state for x[0].
fn lfilter_with_zi(x: &[f64], b0: f64, b1: f64, a1: f64) -> Vec<f64> {
    // zi satisfies zi = b1 x − a1 (b0 x + zi) at steady state with unit input.
    let zi = (b1 - a1 * b0) / (1.0 + a1);
    let mut state = zi * x[0];
    let mut y = Vec::with_capacity(x.len());
    for &xn in x {
        let yn = b0 * xn + state;
        state = b1 * xn - a1 * yn;
        y.push(yn);
    }
    y
}

fn odd_reflect(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n + 2 * pad);
    for k in (1..=pad).rev() {
        out.push(2.0 * x[0] - x[k]);
    }
    out.extend_from_slice(x);
    for k in 1..=pad {
        out.push(2.0 * x[n - 1] - x[n - 1 - k]);
    }
    out
}

/// A detected local extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    /// Topographic prominence on the (possibly negated) signal.
    pub prominence: f64,
}

/// Finds prominent local extrema (maxima and minima) of `signal`.
///
/// A candidate must have prominence at least `min_prominence`; candidates are
/// then thinned greedily by descending prominence so that survivors are at
/// least `min_spacing` samples apart.
pub fn prominent_extrema(signal: &[f64], min_prominence: f64, min_spacing: usize) -> Vec<Peak> {
    let mut candidates = local_maxima(signal, min_prominence);
    let negated: Vec<f64> = signal.iter().map(|v| -v).collect();
    candidates.extend(local_maxima(&negated, min_prominence));
    candidates.sort_by(|a, b| {
        b.prominence
            .partial_cmp(&a.prominence)
            .unwrap()
            .then(a.index.cmp(&b.index))
    });
    let mut kept: Vec<Peak> = Vec::new();
    for cand in candidates {
        if kept
            .iter()
            .all(|k| k.index.abs_diff(cand.index) >= min_spacing.max(1))
        {
            kept.push(cand);
        }
    }
    kept.sort_by_key(|p| p.index);
    kept.dedup_by_key(|p| p.index);
    kept
}

fn local_maxima(signal: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = signal.len();
    let mut peaks = Vec::new();
    if n < 3 {
        return peaks;
    }
    let mut i = 1;
    while i < n - 1 {
        if signal[i] > signal[i - 1] {
            // Allow flat tops: scan the plateau.
            let mut j = i;
            while j + 1 < n && signal[j + 1] == signal[i] {
                j += 1;
            }
            if j < n - 1 && signal[j + 1] < signal[i] {
                let idx = (i + j) / 2;
                let prom = prominence(signal, idx);
                if prom >= min_prominence {
                    peaks.push(Peak {
                        index: idx,
                        prominence: prom,
                    });
                }
                i = j + 1;
                continue;
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// Topographic prominence: height above the higher of the two valley minima
/// reached before a strictly taller sample (or the signal boundary).
fn prominence(signal: &[f64], peak: usize) -> f64 {
    let h = signal[peak];
    let mut left_min = h;
    let mut i = peak;
    while i > 0 {
        i -= 1;
        if signal[i] > h {
            break;
        }
        left_min = left_min.min(signal[i]);
    }
    let mut right_min = h;
    let mut i = peak;
    while i + 1 < signal.len() {
        i += 1;
        if signal[i] > h {
            break;
        }
        right_min = right_min.min(signal[i]);
    }
    h - left_min.max(right_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_signal_unchanged() {
        let x = vec![3.5; 100];
        let y = butterworth_lowpass(&x, 100.0, 100.0 / 3.0).unwrap();
        for v in y {
            assert!((v - 3.5).abs() < 1e-12);
        }
    }

    #[test]
    fn impulse_response_sums_to_one() {
        let mut x = vec![0.0; 401];
        x[200] = 1.0;
        let y = butterworth_lowpass(&x, 100.0, 100.0 / 3.0).unwrap();
        let sum: f64 = y.iter().sum();
        assert!((sum - 1.0).abs() < 1e-6, "impulse response sum {sum}");
    }

    #[test]
    fn cutoff_sinusoid_attenuated_to_half_power() {
        // Forward-backward application squares the magnitude response, so a
        // tone at the cutoff comes out at amplitude 1/2.
        let fs = 120.0;
        let fc = 40.0;
        let n = 4800;
        let x: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::TAU * fc * i as f64 / fs).sin())
            .collect();
        let y = butterworth_lowpass(&x, fs, fc).unwrap();
        // Quadrature projection recovers the amplitude despite the sparse
        // sampling (only three samples per period at fs/3).
        let (mut qs, mut qc) = (0.0, 0.0);
        let (lo, hi) = (n / 4, 3 * n / 4);
        for (i, v) in y.iter().enumerate().take(hi).skip(lo) {
            let ph = std::f64::consts::TAU * fc * i as f64 / fs;
            qs += v * ph.sin();
            qc += v * ph.cos();
        }
        let count = (hi - lo) as f64;
        let amp = 2.0 * (qs * qs + qc * qc).sqrt() / count;
        assert!((amp - 0.5).abs() < 0.015, "amplitude at cutoff {amp}");
    }

    #[test]
    fn rejects_cutoff_at_nyquist() {
        let x = vec![0.0; 10];
        assert!(butterworth_lowpass(&x, 100.0, 50.0).is_err());
        assert!(butterworth_lowpass(&x, 100.0, 49.9).is_ok());
    }

    #[test]
    fn finds_planted_extrema() {
        let mut x = vec![0.0; 60];
        for (i, v) in x.iter_mut().enumerate() {
            *v = (i as f64 / 8.0).sin();
        }
        let peaks = prominent_extrema(&x, 0.5, 3);
        assert!(peaks.len() >= 2);
        for w in peaks.windows(2) {
            assert!(w[1].index - w[0].index >= 3);
        }
    }

    #[test]
    fn monotone_signal_has_no_extrema() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        assert!(prominent_extrema(&x, 0.1, 1).is_empty());
    }
}
