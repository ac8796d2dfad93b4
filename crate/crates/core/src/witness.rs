//! Trace-distance witness of information backflow for the `|+⟩, |−⟩` pair.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::CoherenceSample;
use crate::error::{Error, Result};
use crate::linalg::{trace_norm, CMatrix};

/// Agreement required between the trace-norm route and `|Γ|`.
pub const TRACE_DISTANCE_TOL: f64 = 1e-10;

/// Relative slack on grid spacing before a grid counts as non-uniform.
const SPACING_RTOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessSample {
    pub t: f64,
    /// Trace distance `D(ρ⁺(t), ρ⁻(t))`, in `[0, 1]`.
    pub d: f64,
    /// `dD/dt`
    pub sigma: f64,
    /// `σ > 0` at an interior grid point.
    pub backflow: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BlpMeasure {
    pub value: f64,
}

fn dephased_pair_member(gamma: Complex64, sign: f64) -> CMatrix {
    let half = Complex64::new(0.5, 0.0);
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => gamma * (0.5 * sign),
        (1, 0) => gamma.conj() * (0.5 * sign),
        _ => half,
    })
}

/// Evolves `ρ^±` with the sample's `Γ` and takes `½‖ρ⁺ − ρ⁻‖₁` with the general trace norm.
/// Fails if the result strays from `|Γ|` by more than [`TRACE_DISTANCE_TOL`].
pub fn trace_distance_pair(sample: &CoherenceSample) -> Result<WitnessSample> {
    let plus = dephased_pair_member(sample.gamma, 1.0);
    let minus = dephased_pair_member(sample.gamma, -1.0);
    let d = 0.5 * trace_norm(&(&plus - &minus))?;
    let deviation = (d - sample.gamma.norm()).abs();
    if deviation > TRACE_DISTANCE_TOL {
        return Err(Error::RouteMismatch {
            what: "trace distance vs |Γ|",
            deviation,
        });
    }
    Ok(WitnessSample {
        t: sample.t,
        d,
        sigma: 0.0,
        backflow: false,
    })
}

/// Checks `times` for at least three strictly increasing, uniformly spaced points and
/// returns the spacing.
pub fn uniform_spacing(times: &[f64]) -> Result<f64> {
    if times.len() < 3 {
        return Err(Error::GridTooSmall { len: times.len() });
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if h.is_nan() || h <= 0.0 {
        return Err(Error::NonUniformGrid { index: 0 });
    }
    for (i, w) in times.windows(2).enumerate() {
        let step = w[1] - w[0];
        if step.is_nan() || step <= 0.0 || (step - h).abs() > SPACING_RTOL * h {
            return Err(Error::NonUniformGrid { index: i });
        }
    }
    Ok(h)
}

/// Second-order derivative on a uniform grid: central differences inside, three-point
/// one-sided stencils at both ends.
pub fn derivative(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    if values.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: "one value per time",
            found: values.len(),
        });
    }
    let h = uniform_spacing(times)?;
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h));
    for i in 1..n - 1 {
        out.push((values[i + 1] - values[i - 1]) / (2.0 * h));
    }
    out.push((3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h));
    Ok(out)
}

/// Fills `sigma` and `backflow` for an ordered trace-distance series. The two end points get
/// a one-sided `σ` but never a backflow flag.
pub fn information_flow(series: &[WitnessSample]) -> Result<Vec<WitnessSample>> {
    let times: Vec<f64> = series.iter().map(|s| s.t).collect();
    let d: Vec<f64> = series.iter().map(|s| s.d).collect();
    let sigma = derivative(&times, &d)?;
    let last = series.len() - 1;
    Ok(series
        .iter()
        .zip(sigma)
        .enumerate()
        .map(|(i, (s, sigma))| WitnessSample {
            sigma,
            backflow: i != 0 && i != last && sigma > 0.0,
            ..*s
        })
        .collect())
}

/// Trapezoidal integral of `max(σ, 0)`.
pub fn blp_measure(sigma: &[f64], dt: f64) -> BlpMeasure {
    let value = sigma
        .windows(2)
        .map(|w| 0.5 * dt * (w[0].max(0.0) + w[1].max(0.0)))
        .sum();
    BlpMeasure { value }
}

/// Number of maximal runs of consecutive backflow samples.
pub fn backflow_intervals(series: &[WitnessSample]) -> usize {
    let mut count = 0;
    let mut inside = false;
    for s in series {
        if s.backflow && !inside {
            count += 1;
        }
        inside = s.backflow;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time_grid;
    use core::f64::consts::PI;

    fn series(times: &[f64], f: impl Fn(f64) -> f64) -> Vec<WitnessSample> {
        times
            .iter()
            .map(|&t| WitnessSample {
                t,
                d: f(t),
                sigma: 0.0,
                backflow: false,
            })
            .collect()
    }

    #[test]
    fn pair_distance_limits() {
        let start = CoherenceSample {
            t: 0.0,
            gamma: Complex64::new(1.0, 0.0),
            c_l1: 1.0,
        };
        assert!((trace_distance_pair(&start).unwrap().d - 1.0).abs() < 1e-15);
        let lost = CoherenceSample {
            t: 1.0,
            gamma: Complex64::new(0.0, 0.0),
            c_l1: 0.0,
        };
        assert_eq!(trace_distance_pair(&lost).unwrap().d, 0.0);
        let g = Complex64::from_polar(0.83, 2.1);
        let mid = CoherenceSample {
            t: 2.0,
            gamma: g,
            c_l1: g.norm(),
        };
        assert!((trace_distance_pair(&mid).unwrap().d - 0.83).abs() < 1e-12);
    }

    #[test]
    fn constant_distance_has_no_flow() {
        let t = time_grid(5.0, 101);
        let flow = information_flow(&series(&t, |_| 0.7)).unwrap();
        assert!(flow.iter().all(|s| s.sigma.abs() < 1e-12 && !s.backflow));
        let sig: Vec<f64> = flow.iter().map(|s| s.sigma).collect();
        assert!(blp_measure(&sig, t[1] - t[0]).value < 1e-12);
    }

    #[test]
    fn derivative_of_cos_squared_is_second_order() {
        let a = 1.3;
        let mut errors = Vec::new();
        for &n in &[401usize, 801] {
            let t = time_grid(4.0, n);
            let flow = information_flow(&series(&t, |x| libm::cos(a * x).powi(2))).unwrap();
            let err = flow
                .iter()
                .map(|s| (s.sigma + a * libm::sin(2.0 * a * s.t)).abs())
                .fold(0.0, f64::max);
            errors.push(err);
        }
        let h = 4.0 / 400.0;
        assert!(errors[0] < 4.0 * a.powi(3) * h * h);
        // halving h cuts the error by roughly four
        assert!(errors[0] / errors[1] > 3.5);
    }

    #[test]
    fn blp_of_monotone_decay_is_zero() {
        let t = time_grid(10.0, 1001);
        let flow = information_flow(&series(&t, |x| libm::exp(-x))).unwrap();
        let sig: Vec<f64> = flow.iter().map(|s| s.sigma).collect();
        assert_eq!(blp_measure(&sig, t[1] - t[0]).value, 0.0);
        assert_eq!(backflow_intervals(&flow), 0);
    }

    #[test]
    fn blp_of_a_full_revival_is_one() {
        let period = 3.0;
        let t = time_grid(period, 3001);
        let flow = information_flow(&series(&t, |x| libm::cos(PI * x / period).powi(2))).unwrap();
        let sig: Vec<f64> = flow.iter().map(|s| s.sigma).collect();
        let blp = blp_measure(&sig, t[1] - t[0]);
        assert!((blp.value - 1.0).abs() < 1e-4, "{}", blp.value);
        assert_eq!(backflow_intervals(&flow), 1);
    }

    #[test]
    fn grid_validation() {
        assert_eq!(
            information_flow(&series(&[0.0, 1.0], |_| 1.0)),
            Err(Error::GridTooSmall { len: 2 })
        );
        assert!(matches!(
            information_flow(&series(&[0.0, 1.0, 1.5, 3.0], |_| 1.0)),
            Err(Error::NonUniformGrid { .. })
        ));
        assert!(matches!(
            information_flow(&series(&[0.0, 0.0, 0.0], |_| 1.0)),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn end_points_never_flag_backflow() {
        let t = time_grid(1.0, 11);
        let flow = information_flow(&series(&t, |x| x)).unwrap();
        assert!(!flow[0].backflow && !flow[10].backflow);
        assert!(flow[1..10].iter().all(|s| s.backflow));
    }
}
