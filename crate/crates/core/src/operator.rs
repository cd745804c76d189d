//! Representations of the linear spatial operator G and its action on states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{dft, idft};
use crate::grid::Grid;

/// Default dimension cap for [`OperatorSpec::to_dense`].
pub const DENSE_CAP: usize = 256;

/// A linear operator G in one of several concrete representations.
///
/// All representations act on complex state vectors; `FourierSymbol` and
/// `FiniteDifference` are tied to a periodic grid, `DenseMatrix` to an abstract
/// dimension and `Scalar` to dimension 1.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    /// Row-major `dim x dim` complex matrix.
    DenseMatrix { dim: usize, entries: Vec<Complex64> },
    /// Eigenvalues sigma(k_m) in mode order `-floor(n/2) .. ceil(n/2)-1`.
    FourierSymbol { grid: Grid, symbol: Vec<Complex64> },
    /// Odd-length centered stencil applied periodically; coefficients are
    /// already scaled by the caller (e.g. divided by h^2).
    FiniteDifference { grid: Grid, stencil: Vec<f64> },
    /// One-dimensional operator for scalar ODE problems.
    Scalar { value: Complex64 },
}

impl OperatorSpec {
    pub fn dense(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidOperator(format!(
                "dense matrix needs dim^2 = {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "dense matrix entries",
            });
        }
        Ok(OperatorSpec::DenseMatrix { dim, entries })
    }

    pub fn fourier_symbol(grid: Grid, symbol: Vec<Complex64>) -> Result<Self> {
        if symbol.len() != grid.n() {
            return Err(Error::Dimension {
                expected: grid.n(),
                actual: symbol.len(),
            });
        }
        if symbol.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "fourier symbol",
            });
        }
        Ok(OperatorSpec::FourierSymbol { grid, symbol })
    }

    /// Build a Fourier symbol from a function of the integer mode and its
    /// angular wavenumber `k_m = 2 pi m / (b - a)`.
    pub fn fourier_symbol_fn(grid: Grid, f: impl Fn(i64, f64) -> Complex64) -> Result<Self> {
        let symbol = crate::fourier::modes(grid.n())
            .map(|m| f(m, grid.wavenumber(m)))
            .collect();
        OperatorSpec::fourier_symbol(grid, symbol)
    }

    pub fn finite_difference(grid: Grid, stencil: Vec<f64>) -> Result<Self> {
        if stencil.len().is_multiple_of(2) || stencil.is_empty() || stencil.len() > grid.n() {
            return Err(Error::InvalidOperator(format!(
                "stencil length must be odd and <= n = {}, got {}",
                grid.n(),
                stencil.len()
            )));
        }
        if stencil.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "stencil coefficients",
            });
        }
        Ok(OperatorSpec::FiniteDifference { grid, stencil })
    }

    pub fn scalar(value: Complex64) -> Self {
        OperatorSpec::Scalar { value }
    }

    /// State dimension this operator acts on.
    pub fn dim(&self) -> usize {
        match self {
            OperatorSpec::DenseMatrix { dim, .. } => *dim,
            OperatorSpec::FourierSymbol { grid, .. } => grid.n(),
            OperatorSpec::FiniteDifference { grid, .. } => grid.n(),
            OperatorSpec::Scalar { .. } => 1,
        }
    }

    /// Grid the operator is tied to, when any.
    pub fn grid(&self) -> Option<Grid> {
        match self {
            OperatorSpec::FourierSymbol { grid, .. }
            | OperatorSpec::FiniteDifference { grid, .. } => Some(*grid),
            _ => None,
        }
    }

    /// Compute `G v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "operator input vector",
            });
        }
        match self {
            OperatorSpec::DenseMatrix { dim, entries } => {
                let mut out = vec![Complex64::new(0.0, 0.0); *dim];
                for i in 0..*dim {
                    let row = &entries[i * dim..(i + 1) * dim];
                    out[i] = row.iter().zip(v).map(|(a, x)| a * x).sum();
                }
                Ok(out)
            }
            OperatorSpec::FourierSymbol { symbol, .. } => {
                let mut coeffs = dft(v)?;
                for (c, s) in coeffs.iter_mut().zip(symbol) {
                    *c *= s;
                }
                idft(&coeffs)
            }
            OperatorSpec::FiniteDifference { grid, stencil } => {
                let n = grid.n();
                let r = stencil.len() / 2;
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (q, &c) in stencil.iter().enumerate() {
                        let off = q as i64 - r as i64;
                        let j = (i as i64 + off).rem_euclid(n as i64) as usize;
                        acc += c * v[j];
                    }
                    *o = acc;
                }
                Ok(out)
            }
            OperatorSpec::Scalar { value } => Ok(vec![value * v[0]]),
        }
    }

    /// Upper estimate of the induced norm, guaranteed >= spectral radius.
    pub fn norm_estimate(&self) -> f64 {
        match self {
            OperatorSpec::DenseMatrix { dim, entries } => (0..*dim)
                .map(|i| {
                    entries[i * dim..(i + 1) * dim]
                        .iter()
                        .map(|c| c.norm())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max),
            OperatorSpec::FourierSymbol { symbol, .. } => {
                symbol.iter().map(|c| c.norm()).fold(0.0, f64::max)
            }
            OperatorSpec::FiniteDifference { stencil, .. } => {
                stencil.iter().map(|c| c.abs()).sum()
            }
            OperatorSpec::Scalar { value } => value.norm(),
        }
    }

    /// Materialize the operator as a dense matrix, columns `G e_i`.
    pub fn to_dense(&self) -> Result<OperatorSpec> {
        self.to_dense_with_cap(DENSE_CAP)
    }

    pub fn to_dense_with_cap(&self, cap: usize) -> Result<OperatorSpec> {
        let dim = self.dim();
        if dim > cap {
            return Err(Error::DenseCapExceeded { dim, cap });
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[i] = Complex64::new(1.0, 0.0);
            let col = self.apply(&e)?;
            for (row, val) in col.into_iter().enumerate() {
                entries[row * dim + i] = val;
            }
        }
        OperatorSpec::dense(dim, entries)
    }
}
