//! Unitary discrete Fourier transform with signed-mode coefficient ordering.
//!
//! Coefficients are stored by integer mode m in the order
//! `-floor(n/2), ..., ceil(n/2) - 1`, so index `s` holds mode `s - floor(n/2)`.
//! The transform pair is unitary: `idft(dft(v)) == v` and Parseval holds.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Integer modes in storage order for an `n`-point transform.
pub fn modes(n: usize) -> impl Iterator<Item = i64> {
    let half = (n / 2) as i64;
    (0..n as i64).map(move |s| s - half)
}

/// Storage index of integer mode `m`, if representable on `n` points.
pub fn mode_index(n: usize, m: i64) -> Option<usize> {
    let half = (n / 2) as i64;
    let s = m + half;
    if s >= 0 && s < n as i64 {
        Some(s as usize)
    } else {
        None
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension {
            expected: 2,
            actual: n,
        });
    }
    Ok(())
}

/// Forward transform: `c_m = n^{-1/2} * sum_j v_j e^{-2 pi i m j / n}`, mode order.
pub fn dft(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = values.len();
    check_len(n)?;
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    // FFT bin j holds mode j for j < ceil(n/2), mode j - n above.
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, c) in buf.iter().enumerate() {
        let m = if j < n.div_ceil(2) { j as i64 } else { j as i64 - n as i64 };
        out[mode_index(n, m).unwrap()] = c * scale;
    }
    Ok(out)
}

/// Inverse of [`dft`]: takes coefficients in mode order, returns samples.
pub fn idft(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len();
    check_len(n)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (s, m) in modes(n).enumerate() {
        let j = m.rem_euclid(n as i64) as usize;
        buf[j] = coeffs[s];
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for c in &mut buf {
        *c *= scale;
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::inf_norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_vector_lands_in_mode_zero() {
        let v = vec![c(1.0, 0.0); 4];
        let coeffs = dft(&v).unwrap();
        for (s, m) in modes(4).enumerate() {
            if m == 0 {
                assert!((coeffs[s] - c(2.0, 0.0)).norm() < 1e-14);
            } else {
                assert!(coeffs[s].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn pure_mode_one() {
        let n = 8;
        let v: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .collect();
        let coeffs = dft(&v).unwrap();
        for (s, m) in modes(n).enumerate() {
            if m == 1 {
                assert!((coeffs[s].norm() - (n as f64).sqrt()).abs() < 1e-13);
            } else {
                assert!(coeffs[s].norm() < 1e-13);
            }
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let n = 13; // non power of two on purpose
        let v: Vec<Complex64> = (0..n)
            .map(|j| c((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
            .collect();
        let coeffs = dft(&v).unwrap();
        let back = idft(&coeffs).unwrap();
        let diff: Vec<Complex64> = v.iter().zip(&back).map(|(a, b)| a - b).collect();
        assert!(inf_norm(&diff) <= 1e-13 * inf_norm(&v));

        let e_v: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let e_c: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        assert!((e_v - e_c).abs() <= 1e-12 * e_v);
    }

    #[test]
    fn rejects_short_input() {
        assert!(dft(&[c(1.0, 0.0)]).is_err());
    }
}
