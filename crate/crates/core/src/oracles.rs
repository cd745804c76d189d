//! Independent reference solutions used to verify the propagator: companion
//! first-order system integration, spectral translation, d'Alembert's formula
//! and heat-eigenfunction closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{dft, idft, modes};
use crate::grid::{Grid, GridFunction};
use crate::propagator::CauchyProblem;

/// Stacked state of the companion system: block i holds `d^i u / dt^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionState {
    pub blocks: Vec<Vec<Complex64>>,
    pub t: f64,
}

fn companion_rhs(problem: &CauchyProblem, y: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let n = problem.order;
    let mut out = Vec::with_capacity(n);
    for i in 0..n - 1 {
        out.push(y[i + 1].clone());
    }
    out.push(problem.op.apply(&y[0])?);
    Ok(out)
}

fn axpy(y: &mut [Vec<Complex64>], a: f64, x: &[Vec<Complex64>]) {
    for (yb, xb) in y.iter_mut().zip(x) {
        for (yv, xv) in yb.iter_mut().zip(xb) {
            *yv += a * xv;
        }
    }
}

/// Integrate the companion system `y_i' = y_{i+1}`, `y_{N-1}' = G y_0` with
/// classical fixed-step RK4 from t0 to `t`; returns block 0.
pub fn companion_rk4(problem: &CauchyProblem, t: f64, steps: usize) -> Result<Vec<Complex64>> {
    assert!(steps >= 1, "steps must be >= 1");
    let h = (t - problem.t0) / steps as f64;
    let mut y = problem.initial_data.clone();
    for step in 0..steps {
        // overflow inside a stage shows up as a non-finite apply input
        let diverged = |e| match e {
            Error::NonFinite { .. } => Error::IntegrationDiverged { step },
            other => other,
        };
        let k1 = companion_rhs(problem, &y).map_err(diverged)?;
        let mut y2 = y.clone();
        axpy(&mut y2, h / 2.0, &k1);
        let k2 = companion_rhs(problem, &y2).map_err(diverged)?;
        let mut y3 = y.clone();
        axpy(&mut y3, h / 2.0, &k2);
        let k3 = companion_rhs(problem, &y3).map_err(diverged)?;
        let mut y4 = y.clone();
        axpy(&mut y4, h, &k3);
        let k4 = companion_rhs(problem, &y4).map_err(diverged)?;
        axpy(&mut y, h / 6.0, &k1);
        axpy(&mut y, h / 3.0, &k2);
        axpy(&mut y, h / 3.0, &k3);
        axpy(&mut y, h / 6.0, &k4);
        if y.iter()
            .flatten()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::IntegrationDiverged { step });
        }
    }
    Ok(y.into_iter().next().unwrap())
}

/// Spectral translation: samples of `f(x + a)`, exact for band-limited f.
pub fn translate(f: &GridFunction, a: f64) -> Result<GridFunction> {
    if a == 0.0 {
        return Ok(f.clone());
    }
    let grid = f.grid();
    let mut coeffs = dft(f.values())?;
    for (s, m) in modes(grid.n()).enumerate() {
        let k = grid.wavenumber(m);
        coeffs[s] *= Complex64::from_polar(1.0, k * a);
    }
    GridFunction::new(grid, idft(&coeffs)?)
}

/// d'Alembert solution of `u_tt = v^2 u_xx` with `u(.,t0) = f`,
/// `u_t(.,t0) = g` on a periodic grid, evaluated at `t0 + dt`.
///
/// The velocity contribution uses the baseline-free antiderivative difference
/// `(1/2v)[Ghat(x + v dt) - Ghat(x - v dt)]` where Ghat is the spectral
/// antiderivative of the zero-mean part of g; the mean of g contributes
/// `mean(g) * dt` exactly.
pub fn dalembert(
    f: &GridFunction,
    g: &GridFunction,
    velocity: f64,
    dt: f64,
) -> Result<GridFunction> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    if dt == 0.0 {
        return Ok(f.clone());
    }
    let grid = f.grid();
    let n = grid.n();
    let shift = velocity * dt;

    let f_plus = translate(f, shift)?;
    let f_minus = translate(f, -shift)?;

    let g_coeffs = dft(g.values())?;
    let mode0 = crate::fourier::mode_index(n, 0).unwrap();
    // unitary dft: c_0 = sqrt(n) * mean(g)
    let g_mean = g_coeffs[mode0] / (n as f64).sqrt();

    // spectral antiderivative of the zero-mean part, then its two translates
    let mut anti = vec![Complex64::new(0.0, 0.0); n];
    for (s, m) in modes(n).enumerate() {
        if m != 0 {
            let k = grid.wavenumber(m);
            anti[s] = g_coeffs[s] / Complex64::new(0.0, k);
        }
    }
    let mut anti_plus = anti.clone();
    let mut anti_minus = anti;
    for (s, m) in modes(n).enumerate() {
        let k = grid.wavenumber(m);
        anti_plus[s] *= Complex64::from_polar(1.0, k * shift);
        anti_minus[s] *= Complex64::from_polar(1.0, -k * shift);
    }
    let anti_plus = idft(&anti_plus)?;
    let anti_minus = idft(&anti_minus)?;

    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let wave = 0.5 * (f_plus.values()[i] + f_minus.values()[i]);
        let vel = (anti_plus[i] - anti_minus[i]) / (2.0 * velocity) + g_mean * dt;
        values.push(wave + vel);
    }
    GridFunction::new(grid, values)
}

/// Exact heat-equation eigenfunction solution: `e^{-diffusivity k^2 dt} sin(kx)`.
pub fn heat_eigen_exact(k: i64, diffusivity: f64, dt: f64, grid: Grid) -> Result<GridFunction> {
    if 2 * k.unsigned_abs() as usize >= grid.n() {
        return Err(Error::AliasedMode {
            mode: k,
            n: grid.n(),
        });
    }
    let amp = (-diffusivity * (k * k) as f64 * dt).exp();
    GridFunction::sample(grid, |x| amp * (k as f64 * x).sin())
}
