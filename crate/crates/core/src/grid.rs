//! Uniform periodic grids and complex-valued grid functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A uniform periodic grid on `[a, b)` with `n` points, point `i` at `a + i*h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    a: f64,
    b: f64,
}

impl Grid {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need n >= 2, got {n}")));
        }
        if b <= a || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need finite b > a, got a = {a}, b = {b}"
            )));
        }
        Ok(Grid { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Grid spacing `(b - a) / n`.
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Length of the periodic interval.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn point(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Angular wavenumber of integer mode `m`: `2*pi*m / (b - a)`.
    pub fn wavenumber(&self, m: i64) -> f64 {
        2.0 * std::f64::consts::PI * m as f64 / self.length()
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::Dimension {
                expected: grid.n(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid function values",
            });
        }
        Ok(GridFunction { grid, values })
    }

    /// Sample a real-valued function of `x` on the grid.
    pub fn sample(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid
            .points()
            .map(|x| Complex64::new(f(x), 0.0))
            .collect();
        GridFunction::new(grid, values)
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Max-modulus norm of a complex vector.
pub fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Euclidean norm of a complex vector.
pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
