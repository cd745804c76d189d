//! Scalar generalized hyperbolic functions.
//!
//! `scalar_h(N, j, z)` sums the stride-N partition of the exponential series,
//! `H_{N,j}(z) = sum_{n>=0} z^{Nn+j} / (Nn+j)!`. The partitions satisfy
//! `sum_j H_{N,j}(z) = exp(z)`; for N = 1 this is `exp`, for N = 2 the pair
//! `cosh` / `sinh`.
//!
//! The sum is accumulated in double-double arithmetic: for oscillatory or
//! negative arguments the terms grow to order `e^{|z|}` while the result can be
//! exponentially smaller, and plain f64 summation loses most of its digits to
//! cancellation.

use num_complex::Complex64;

use crate::dd::CDd;
use crate::error::{Error, Result};

/// Overflow guard on `|z|`; beyond this the dominating `e^{|z|}` envelope
/// leaves no representable accuracy.
pub const SCALAR_H_RADIUS: f64 = 700.0;

const TOL: f64 = 1e-31;
const MAX_CLASS_TERMS: usize = 400;

/// Evaluate `H_{N,j}(z)` for `order = N >= 1` and `0 <= j < N`.
pub fn scalar_h(order: usize, j: usize, z: Complex64) -> Result<Complex64> {
    assert!(order >= 1, "order must be >= 1");
    assert!(j < order, "class index j must satisfy j < N");
    let magnitude = z.norm();
    if !magnitude.is_finite() || magnitude > SCALAR_H_RADIUS {
        return Err(Error::ArgumentOutOfRange {
            magnitude,
            guard: SCALAR_H_RADIUS,
        });
    }

    let zd = CDd::from_complex(z);
    let mut term = CDd::from_complex(Complex64::new(1.0, 0.0)); // z^m / m!
    let mut sum = CDd::ZERO;
    let mut class_terms = 0usize;
    let mut small_streak = 0usize;

    let mut m = 0usize;
    loop {
        if m % order == j {
            sum = sum.add(term);
            class_terms += 1;
            let last_term = term.norm();
            // ignore small terms while |z|/(m+1) >= 1: the series can rebound
            if magnitude < (m + 1) as f64 && last_term <= TOL * (1.0 + sum.norm()) {
                small_streak += 1;
                if small_streak >= 2 {
                    return Ok(sum.to_complex());
                }
            } else {
                small_streak = 0;
            }
            if class_terms >= MAX_CLASS_TERMS {
                return Err(Error::NoConvergence {
                    max_terms: MAX_CLASS_TERMS,
                    last_term,
                    sum_norm: sum.norm(),
                });
            }
        }
        term = term.mul(zd).div_f64((m + 1) as f64);
        m += 1;
    }
}
