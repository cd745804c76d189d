//! Config-file parsing for the CLI driver.
//!
//! The format is a flat TOML document with a closed catalog of operator kinds
//! and initial-data expressions; unknown keys are rejected outright.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::operator::OperatorSpec;
use crate::propagator::{CauchyProblem, SeriesParams};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    order: usize,
    #[serde(default)]
    t0: f64,
    times: Vec<f64>,
    #[serde(default = "default_output_path")]
    output_path: String,
    grid: Option<GridSection>,
    operator: OperatorSection,
    initial_data: Vec<String>,
    #[serde(default)]
    series: SeriesSection,
    oracle: Option<OracleSection>,
}

fn default_output_path() -> String {
    "out".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    n: usize,
    a: f64,
    b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorSection {
    kind: String,
    // scalar
    value_re: Option<f64>,
    value_im: Option<f64>,
    // derivative symbol: sigma(k) = coefficient * (i k)^order_x
    coefficient: Option<f64>,
    order_x: Option<u32>,
    // finite difference
    stencil: Option<Vec<f64>>,
    scale: Option<f64>,
    divide_h_power: Option<u32>,
    // dense
    entries_re: Option<Vec<Vec<f64>>>,
    entries_im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SeriesSection {
    tol: Option<f64>,
    max_terms: Option<usize>,
    safety_radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleSection {
    kind: String,
    steps: Option<usize>,
    velocity: Option<f64>,
    mode: Option<i64>,
    diffusivity: Option<f64>,
}

/// Which reference solution `compare` and `scan` run against.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpec {
    None,
    Rk4 { steps: usize },
    Dalembert { velocity: f64 },
    HeatEigen { mode: i64, diffusivity: f64 },
    Translate { velocity: f64 },
}

/// Fully validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: CauchyProblem,
    pub times: Vec<f64>,
    pub series: SeriesParams,
    pub oracle: OracleSpec,
    pub output_path: String,
}

/// One entry of the closed initial-data expression catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum DataExpr {
    Sin(f64),
    Cos(f64),
    Gaussian { center: f64, width: f64 },
    Zero,
    Constant(f64),
}

const CATALOG: &str = "sin(k), cos(k), gaussian(center,width), zero, constant(c)";

impl DataExpr {
    pub fn parse(text: &str) -> Result<DataExpr> {
        let s = text.trim();
        if s == "zero" {
            return Ok(DataExpr::Zero);
        }
        let (name, args) = match s.find('(') {
            Some(p) if s.ends_with(')') => {
                let name = &s[..p];
                let inner = &s[p + 1..s.len() - 1];
                let args: std::result::Result<Vec<f64>, _> =
                    inner.split(',').map(|a| a.trim().parse::<f64>()).collect();
                (
                    name,
                    args.map_err(|_| {
                        Error::Config(format!(
                            "bad arguments in expression '{s}'; catalog: {CATALOG}"
                        ))
                    })?,
                )
            }
            _ => {
                return Err(Error::Config(format!(
                    "unknown initial-data expression '{s}'; catalog: {CATALOG}"
                )))
            }
        };
        match (name, args.as_slice()) {
            ("sin", [k]) => Ok(DataExpr::Sin(*k)),
            ("cos", [k]) => Ok(DataExpr::Cos(*k)),
            ("gaussian", [center, width]) => Ok(DataExpr::Gaussian {
                center: *center,
                width: *width,
            }),
            ("constant", [c]) => Ok(DataExpr::Constant(*c)),
            _ => Err(Error::Config(format!(
                "unknown initial-data expression '{s}'; catalog: {CATALOG}"
            ))),
        }
    }

    /// Evaluate on a grid, or as a single scalar when `grid` is `None`.
    pub fn eval(&self, grid: Option<Grid>) -> Result<Vec<Complex64>> {
        match grid {
            Some(g) => {
                let f: Box<dyn Fn(f64) -> f64> = match self {
                    DataExpr::Sin(k) => Box::new(move |x| (k * x).sin()),
                    DataExpr::Cos(k) => Box::new(move |x| (k * x).cos()),
                    DataExpr::Gaussian { center, width } => {
                        let (c0, w) = (*center, *width);
                        Box::new(move |x| (-((x - c0) * (x - c0)) / (2.0 * w * w)).exp())
                    }
                    DataExpr::Zero => Box::new(|_| 0.0),
                    DataExpr::Constant(c) => {
                        let c = *c;
                        Box::new(move |_| c)
                    }
                };
                Ok(GridFunction::sample(g, f)?.into_values())
            }
            None => match self {
                DataExpr::Zero => Ok(vec![Complex64::new(0.0, 0.0)]),
                DataExpr::Constant(c) => Ok(vec![Complex64::new(*c, 0.0)]),
                _ => Err(Error::Config(
                    "scalar problems only accept 'zero' or 'constant(c)' initial data".into(),
                )),
            },
        }
    }
}

fn build_operator(section: &OperatorSection, grid: Option<Grid>) -> Result<OperatorSpec> {
    let need_grid = || {
        grid.ok_or_else(|| {
            Error::Config(format!(
                "operator kind '{}' requires a [grid] section",
                section.kind
            ))
        })
    };
    match section.kind.as_str() {
        "scalar" => {
            let re = section.value_re.ok_or_else(|| {
                Error::Config("scalar operator requires 'value_re'".into())
            })?;
            let im = section.value_im.unwrap_or(0.0);
            Ok(OperatorSpec::scalar(Complex64::new(re, im)))
        }
        "derivative" => {
            let g = need_grid()?;
            let coeff = section.coefficient.unwrap_or(1.0);
            let p = section.order_x.ok_or_else(|| {
                Error::Config("derivative operator requires 'order_x'".into())
            })?;
            OperatorSpec::fourier_symbol_fn(g, |_, k| {
                coeff * Complex64::new(0.0, k).powu(p)
            })
        }
        "finite_difference" => {
            let g = need_grid()?;
            let stencil = section.stencil.clone().ok_or_else(|| {
                Error::Config("finite_difference operator requires 'stencil'".into())
            })?;
            let mut scale = section.scale.unwrap_or(1.0);
            if let Some(p) = section.divide_h_power {
                scale /= g.h().powi(p as i32);
            }
            OperatorSpec::finite_difference(g, stencil.into_iter().map(|c| c * scale).collect())
        }
        "dense" => {
            let rows = section.entries_re.as_ref().ok_or_else(|| {
                Error::Config("dense operator requires 'entries_re'".into())
            })?;
            let dim = rows.len();
            let mut entries = Vec::with_capacity(dim * dim);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    return Err(Error::Config(format!(
                        "entries_re row {i} has length {}, expected {dim}",
                        row.len()
                    )));
                }
                for (j, re) in row.iter().enumerate() {
                    let im = section
                        .entries_im
                        .as_ref()
                        .and_then(|m| m.get(i).and_then(|r| r.get(j)))
                        .copied()
                        .unwrap_or(0.0);
                    entries.push(Complex64::new(*re, im));
                }
            }
            OperatorSpec::dense(dim, entries)
        }
        other => Err(Error::Config(format!(
            "unknown operator kind '{other}' (scalar, derivative, finite_difference, dense)"
        ))),
    }
}

fn build_oracle(section: &Option<OracleSection>) -> Result<OracleSpec> {
    let Some(s) = section else {
        return Ok(OracleSpec::None);
    };
    match s.kind.as_str() {
        "none" => Ok(OracleSpec::None),
        "rk4" => Ok(OracleSpec::Rk4 {
            steps: s.steps.unwrap_or(10_000),
        }),
        "dalembert" => Ok(OracleSpec::Dalembert {
            velocity: s
                .velocity
                .ok_or_else(|| Error::Config("dalembert oracle requires 'velocity'".into()))?,
        }),
        "heat_eigen" => Ok(OracleSpec::HeatEigen {
            mode: s
                .mode
                .ok_or_else(|| Error::Config("heat_eigen oracle requires 'mode'".into()))?,
            diffusivity: s.diffusivity.unwrap_or(1.0),
        }),
        "translate" => Ok(OracleSpec::Translate {
            velocity: s
                .velocity
                .ok_or_else(|| Error::Config("translate oracle requires 'velocity'".into()))?,
        }),
        other => Err(Error::Config(format!(
            "unknown oracle kind '{other}' (none, rk4, dalembert, heat_eigen, translate)"
        ))),
    }
}

/// Parse and validate a config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;

    if file.times.is_empty() {
        return Err(Error::Config("times must be nonempty".into()));
    }
    if file.times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Config("times must be finite".into()));
    }

    let grid = file
        .grid
        .as_ref()
        .map(|g| Grid::new(g.n, g.a, g.b))
        .transpose()
        .map_err(|e| Error::Config(e.to_string()))?;
    let op = build_operator(&file.operator, grid)?;

    if file.initial_data.len() != file.order {
        return Err(Error::Config(format!(
            "initial_data: need {} entries for an order-{} problem, got {}",
            file.order,
            file.order,
            file.initial_data.len()
        )));
    }
    let mut data = Vec::with_capacity(file.order);
    for expr in &file.initial_data {
        data.push(DataExpr::parse(expr)?.eval(op.grid())?);
    }
    let problem = CauchyProblem::new(file.order, op, file.t0, data)
        .map_err(|e| Error::Config(e.to_string()))?;

    let defaults = SeriesParams::default();
    let series = SeriesParams {
        tol: file.series.tol.unwrap_or(defaults.tol),
        max_terms: file.series.max_terms.unwrap_or(defaults.max_terms),
        safety_radius: file.series.safety_radius.unwrap_or(defaults.safety_radius),
    };
    series.validate().map_err(|e| Error::Config(e.to_string()))?;

    let oracle = build_oracle(&file.oracle)?;

    Ok(RunConfig {
        problem,
        times: file.times,
        series,
        oracle,
        output_path: file.output_path,
    })
}
