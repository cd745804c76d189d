//! Cross-module invariants: linearity, representation equivalence, series
//! identities and oracle consistency on randomized inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cauchyprop::fourier::{dft, idft};
use cauchyprop::grid::{inf_norm, l2_norm};
use cauchyprop::oracles::{companion_rk4, dalembert, translate};
use cauchyprop::propagator::{propagate, propagate_order2_closed};
use cauchyprop::{scalar_h, CauchyProblem, Grid, GridFunction, OperatorSpec, SeriesParams};

const TWO_PI: f64 = std::f64::consts::TAU;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    c(
        scale * (2.0 * rng.random::<f64>() - 1.0),
        scale * (2.0 * rng.random::<f64>() - 1.0),
    )
}

fn rand_vec(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<Complex64> {
    (0..n).map(|_| rand_complex(rng, scale)).collect()
}

/// Random band-limited grid function with modes up to `max_mode`.
fn rand_band_limited(rng: &mut impl Rng, grid: Grid, max_mode: i64) -> GridFunction {
    let mut values = vec![c(0.0, 0.0); grid.n()];
    for m in 1..=max_mode {
        let (a, b) = (rand_complex(rng, 1.0), rand_complex(rng, 1.0));
        for (v, x) in values.iter_mut().zip(grid.points()) {
            let phase = m as f64 * x;
            *v += a * phase.cos() + b * phase.sin();
        }
    }
    GridFunction::new(grid, values).unwrap()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn sample_operators(rng: &mut impl Rng) -> Vec<OperatorSpec> {
    let grid = Grid::new(16, 0.0, TWO_PI).unwrap();
    vec![
        OperatorSpec::scalar(rand_complex(rng, 2.0)),
        OperatorSpec::dense(5, rand_vec(rng, 25, 1.0)).unwrap(),
        OperatorSpec::fourier_symbol(grid, rand_vec(rng, 16, 3.0)).unwrap(),
        OperatorSpec::finite_difference(
            grid,
            (0..5).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect(),
        )
        .unwrap(),
    ]
}

#[test]
fn apply_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        for op in sample_operators(&mut rng) {
            let n = op.dim();
            let v = rand_vec(&mut rng, n, 1.0);
            let w = rand_vec(&mut rng, n, 1.0);
            let alpha = rand_complex(&mut rng, 1.0);
            let beta = rand_complex(&mut rng, 1.0);
            let combined: Vec<Complex64> = v
                .iter()
                .zip(&w)
                .map(|(a, b)| alpha * a + beta * b)
                .collect();
            let lhs = op.apply(&combined).unwrap();
            let av = op.apply(&v).unwrap();
            let aw = op.apply(&w).unwrap();
            let rhs: Vec<Complex64> = av
                .iter()
                .zip(&aw)
                .map(|(a, b)| alpha * a + beta * b)
                .collect();
            assert!(max_diff(&lhs, &rhs) <= 1e-12, "linearity violated");
        }
    }
}

#[test]
fn to_dense_reproduces_apply() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        for op in sample_operators(&mut rng) {
            let dense = op.to_dense().unwrap();
            let v = rand_vec(&mut rng, op.dim(), 1.0);
            let direct = op.apply(&v).unwrap();
            let via_dense = dense.apply(&v).unwrap();
            let scale = inf_norm(&direct).max(1.0);
            assert!(max_diff(&direct, &via_dense) <= 1e-12 * scale);
        }
    }
}

#[test]
fn norm_estimate_dominates_observed_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for op in sample_operators(&mut rng) {
        let est = op.norm_estimate();
        for _ in 0..20 {
            let v = rand_vec(&mut rng, op.dim(), 1.0);
            let out = op.apply(&v).unwrap();
            // max row sum bounds the inf-induced norm, the eigenvalue-based
            // estimates bound the l2-induced norm
            let ratio = match op {
                OperatorSpec::DenseMatrix { .. } => inf_norm(&out) / inf_norm(&v),
                _ => l2_norm(&out) / l2_norm(&v),
            };
            assert!(ratio <= est * (1.0 + 1e-12), "ratio {ratio} > estimate {est}");
        }
    }
}

#[test]
fn stencil_converges_at_second_order() {
    // [1,-2,1]/h^2 on e^{ikx} tends to -k^2 e^{ikx} at O(h^2)
    let k = 3.0;
    let mut errors = Vec::new();
    for n in [32usize, 64, 128, 256] {
        let grid = Grid::new(n, 0.0, TWO_PI).unwrap();
        let h2 = grid.h() * grid.h();
        let op =
            OperatorSpec::finite_difference(grid, vec![1.0 / h2, -2.0 / h2, 1.0 / h2]).unwrap();
        let v: Vec<Complex64> = grid
            .points()
            .map(|x| Complex64::from_polar(1.0, k * x))
            .collect();
        let out = op.apply(&v).unwrap();
        let exact: Vec<Complex64> = v.iter().map(|e| -k * k * e).collect();
        errors.push(max_diff(&out, &exact));
    }
    for pair in errors.windows(2) {
        let order = (pair[0] / pair[1]).log2();
        assert!((1.8..=2.2).contains(&order), "observed order {order}");
    }
}

#[test]
fn scalar_h_derivative_chain() {
    // d/dz H_{N,j} = H_{N,j-1} (cyclically, with j = 0 mapping to j = N-1)
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for order in 2..=4usize {
        for j in 0..order {
            let z = rand_complex(&mut rng, 2.0);
            let target = if j == 0 { order - 1 } else { j - 1 };
            let exact = scalar_h(order, target, z).unwrap();
            let mut errors = Vec::new();
            for eps in [1e-2, 5e-3, 2.5e-3] {
                let plus = scalar_h(order, j, z + c(eps, 0.0)).unwrap();
                let minus = scalar_h(order, j, z - c(eps, 0.0)).unwrap();
                let fd = (plus - minus) / (2.0 * eps);
                errors.push((fd - exact).norm());
            }
            for pair in errors.windows(2) {
                let order_obs = (pair[0] / pair[1]).log2();
                assert!(
                    (1.8..=2.2).contains(&order_obs),
                    "derivative chain order {order_obs} for N={order} j={j}"
                );
            }
        }
    }
}

#[test]
fn fourier_and_dense_representations_propagate_alike() {
    let grid = Grid::new(32, 0.0, TWO_PI).unwrap();
    let symbol_op =
        OperatorSpec::fourier_symbol_fn(grid, |m, _| c(-((m * m) as f64), 0.0)).unwrap();
    let dense_op = symbol_op.to_dense().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let u0 = rand_band_limited(&mut rng, grid, 6);
    let params = SeriesParams::default();
    for order in [1usize, 2] {
        let mut data = vec![u0.values().to_vec()];
        for _ in 1..order {
            data.push(rand_band_limited(&mut rng, grid, 6).into_values());
        }
        let p_sym = CauchyProblem::new(order, symbol_op.clone(), 0.0, data.clone()).unwrap();
        let p_dense = CauchyProblem::new(order, dense_op.clone(), 0.0, data).unwrap();
        let a = propagate(&p_sym, 0.1, &params).unwrap();
        let b = propagate(&p_dense, 0.1, &params).unwrap();
        assert!(
            max_diff(&a.state, &b.state) <= 1e-9,
            "representations diverge: {}",
            max_diff(&a.state, &b.state)
        );
    }
}

#[test]
fn closed_form_agrees_with_series_on_random_waves() {
    let grid = Grid::new(32, 0.0, TWO_PI).unwrap();
    let op = OperatorSpec::fourier_symbol_fn(grid, |m, _| c(-((m * m) as f64), 0.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let params = SeriesParams::default();
    for _ in 0..5 {
        let f = rand_band_limited(&mut rng, grid, 8);
        let g = rand_band_limited(&mut rng, grid, 8);
        let problem =
            CauchyProblem::new(2, op.clone(), 0.0, vec![f.into_values(), g.into_values()])
                .unwrap();
        let dt = 0.25 + 0.5 * rng.random::<f64>();
        let series = propagate(&problem, dt, &params).unwrap();
        let closed = propagate_order2_closed(&problem, dt, &params).unwrap();
        let scale = inf_norm(&series.state).max(1.0);
        assert!(max_diff(&series.state, &closed.state) <= 1e-12 * scale);
    }
}

#[test]
fn advection_propagator_is_translation() {
    let grid = Grid::new(64, 0.0, TWO_PI).unwrap();
    let v = 1.0;
    let op = OperatorSpec::fourier_symbol_fn(grid, |_, k| c(0.0, v * k)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = rand_band_limited(&mut rng, grid, 8);
    let problem = CauchyProblem::new(1, op, 0.0, vec![f.values().to_vec()]).unwrap();
    let dt = 0.7;
    let frame = propagate(&problem, dt, &SeriesParams::default()).unwrap();
    let shifted = translate(&f, v * dt).unwrap();
    assert!(max_diff(&frame.state, shifted.values()) <= 1e-9);
}

#[test]
fn rk4_error_decays_at_fourth_order() {
    let op = OperatorSpec::scalar(c(-1.0, 0.0));
    let problem =
        CauchyProblem::new(2, op, 0.0, vec![vec![c(1.0, 0.0)], vec![c(0.5, 0.0)]]).unwrap();
    let t = std::f64::consts::PI;
    let truth = propagate(&problem, t, &SeriesParams::default()).unwrap();
    let mut errors = Vec::new();
    for steps in [20usize, 40, 80, 160] {
        let approx = companion_rk4(&problem, t, steps).unwrap();
        errors.push(max_diff(&approx, &truth.state));
    }
    for pair in errors.windows(2) {
        let order = (pair[0] / pair[1]).log2();
        assert!((3.7..=4.3).contains(&order), "observed RK4 order {order}");
    }
}

#[test]
fn dalembert_satisfies_the_initial_conditions() {
    let grid = Grid::new(64, 0.0, TWO_PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let f = rand_band_limited(&mut rng, grid, 3);
    let g = rand_band_limited(&mut rng, grid, 3);
    let at_zero = dalembert(&f, &g, 1.0, 0.0).unwrap();
    assert_eq!(at_zero.values(), f.values());
    let eps = 1e-3;
    let plus = dalembert(&f, &g, 1.0, eps).unwrap();
    let minus = dalembert(&f, &g, 1.0, -eps).unwrap();
    let fd: Vec<Complex64> = plus
        .values()
        .iter()
        .zip(minus.values())
        .map(|(p, m)| (p - m) / (2.0 * eps))
        .collect();
    assert!(max_diff(&fd, g.values()) <= 1e-4);
}

#[test]
fn converged_frames_honor_their_tail_bound() {
    let params = SeriesParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for order in 1..=4usize {
        let op = OperatorSpec::dense(4, rand_vec(&mut rng, 16, 0.25)).unwrap();
        let data: Vec<Vec<Complex64>> = (0..order).map(|_| rand_vec(&mut rng, 4, 1.0)).collect();
        let problem = CauchyProblem::new(order, op, 0.0, data).unwrap();
        let frame = propagate(&problem, 1.3, &params).unwrap();
        assert!(frame.converged);
        assert!(frame.terms_used <= params.max_terms);
        assert!(
            frame.truncation_bound
                <= params.tol * (1.0 + inf_norm(&frame.state)) * order as f64
        );
    }
}

proptest! {
    #[test]
    fn dft_round_trip_and_parseval(values in proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 2..64)) {
        let v: Vec<Complex64> = values.iter().map(|(re, im)| c(*re, *im)).collect();
        let coeffs = dft(&v).unwrap();
        let back = idft(&coeffs).unwrap();
        let scale = inf_norm(&v).max(1.0);
        prop_assert!(max_diff(&v, &back) <= 1e-13 * scale);
        let ev: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let ec: f64 = coeffs.iter().map(|x| x.norm_sqr()).sum();
        prop_assert!((ev - ec).abs() <= 1e-12 * ev.max(1.0));
    }

    #[test]
    fn scalar_h_partition_sums_to_exp(re in -8.0..8.0f64, im in -8.0..8.0f64, order in 1usize..=6) {
        let z = c(re, im);
        let mut sum = c(0.0, 0.0);
        for j in 0..order {
            sum += scalar_h(order, j, z).unwrap();
        }
        // scale by e^{|z|}: the summands are that large, so the partition can
        // cancel down to exp(z) only up to rounding at the summand scale
        let exact = z.exp();
        prop_assert!((sum - exact).norm() <= 1e-12 * z.norm().exp());
    }
}
