use dephasing_core::witness::{backflow_intervals, blp_measure, information_flow, WitnessSample};
use dephasing_core::{ModelParams, SampleRecord, Simulation};
use rayon::prelude::*;

use crate::error::CliError;

/// Column names of the exported table, in order.
pub const CSV_HEADER: [&str; 10] = [
    "t",
    "re_gamma",
    "im_gamma",
    "abs_gamma",
    "q_mean",
    "c_coherent",
    "w_mean",
    "trace_distance",
    "sigma",
    "identity_residual",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub t: f64,
    pub re_gamma: f64,
    pub im_gamma: f64,
    pub abs_gamma: f64,
    pub q_mean: f64,
    pub c_coherent: f64,
    pub w_mean: f64,
    pub trace_distance: f64,
    pub sigma: f64,
    pub identity_residual: f64,
}

impl Row {
    pub fn values(&self) -> [f64; 10] {
        [
            self.t,
            self.re_gamma,
            self.im_gamma,
            self.abs_gamma,
            self.q_mean,
            self.c_coherent,
            self.w_mean,
            self.trace_distance,
            self.sigma,
            self.identity_residual,
        ]
    }

    pub fn from_values(v: [f64; 10]) -> Self {
        Self {
            t: v[0],
            re_gamma: v[1],
            im_gamma: v[2],
            abs_gamma: v[3],
            q_mean: v[4],
            c_coherent: v[5],
            w_mean: v[6],
            trace_distance: v[7],
            sigma: v[8],
            identity_residual: v[9],
        }
    }
}

/// Time series for one parameter point.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: ModelParams,
    pub records: Vec<SampleRecord>,
    /// Trace distance with its derivative, aligned with `records`.
    pub flow: Vec<WitnessSample>,
}

impl Trajectory {
    pub fn empty(params: ModelParams) -> Self {
        Self {
            params,
            records: Vec::new(),
            flow: Vec::new(),
        }
    }

    /// Samples are evaluated in parallel; `times` must be a uniform grid of at least three
    /// points.
    pub fn compute(sim: &Simulation, times: &[f64]) -> Result<Self, CliError> {
        let params = sim.params().clone();
        let numeric = |t, source| CliError::Numeric {
            n_spins: params.n_spins,
            g: params.g0,
            t,
            source,
        };
        let records = times
            .par_iter()
            .map(|&t| sim.sample(t).map_err(|e| (t, e)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|(t, e)| numeric(Some(t), e))?;
        let distances: Vec<WitnessSample> = records
            .iter()
            .map(|r| WitnessSample {
                t: r.t,
                d: r.trace_distance,
                sigma: 0.0,
                backflow: false,
            })
            .collect();
        let flow = information_flow(&distances).map_err(|e| numeric(None, e))?;
        Ok(Self {
            params,
            records,
            flow,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn n_spins(&self) -> usize {
        self.params.n_spins
    }

    pub fn g(&self) -> f64 {
        self.params.g0
    }

    pub fn rows(&self) -> Vec<Row> {
        self.records
            .iter()
            .zip(&self.flow)
            .map(|(r, w)| Row {
                t: r.t,
                re_gamma: r.gamma.re,
                im_gamma: r.gamma.im,
                abs_gamma: r.gamma.norm(),
                q_mean: r.thermo.q_mean,
                c_coherent: r.thermo.c_coherent,
                w_mean: r.thermo.w_mean,
                trace_distance: r.trace_distance,
                sigma: w.sigma,
                identity_residual: r.thermo.identity_residual,
            })
            .collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn abs_gamma(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.gamma.norm()).collect()
    }

    pub fn q_mean(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.thermo.q_mean).collect()
    }

    pub fn sigma(&self) -> Vec<f64> {
        self.flow.iter().map(|w| w.sigma).collect()
    }

    pub fn dt(&self) -> Option<f64> {
        match self.records.as_slice() {
            [a, b, ..] => Some(b.t - a.t),
            _ => None,
        }
    }

    pub fn blp(&self) -> f64 {
        self.dt().map_or(0.0, |dt| blp_measure(&self.sigma(), dt).value)
    }

    pub fn backflow_intervals(&self) -> usize {
        backflow_intervals(&self.flow)
    }

    pub fn min_abs_gamma(&self) -> f64 {
        self.abs_gamma().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_q(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.thermo.q_mean.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_identity_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.thermo.identity_residual)
            .fold(0.0, f64::max)
    }

    pub fn max_first_law_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| (r.thermo.w_mean - r.thermo.q_mean).abs())
            .fold(0.0, f64::max)
    }
}
