use dephasing_core::witness::{backflow_intervals, blp_measure, information_flow, WitnessSample};
use dephasing_core::{time_grid, ModelParams, Simulation};

fn flow(params: ModelParams, t_max: f64, n: usize) -> (Vec<f64>, Vec<WitnessSample>) {
    let sim = Simulation::new(params).unwrap();
    let times = time_grid(t_max, n);
    let series: Vec<WitnessSample> = sim
        .run(&times)
        .unwrap()
        .iter()
        .map(|r| WitnessSample {
            t: r.t,
            d: r.trace_distance,
            sigma: 0.0,
            backflow: false,
        })
        .collect();
    (times, information_flow(&series).unwrap())
}

fn blp(params: ModelParams, t_max: f64, n: usize) -> f64 {
    let (times, f) = flow(params, t_max, n);
    let sigma: Vec<f64> = f.iter().map(|s| s.sigma).collect();
    blp_measure(&sigma, times[1] - times[0]).value
}

#[test]
fn blp_converges_under_refinement() {
    let p = ModelParams::default().with_spins(3);
    let coarse = blp(p.clone(), 10.0, 1001);
    let mid = blp(p.clone(), 10.0, 2001);
    let fine = blp(p, 10.0, 4001);
    assert!(fine > 0.0);
    let (e1, e2) = ((coarse - mid).abs(), (mid - fine).abs());
    assert!(e2 < 1e-3 * fine, "{coarse} {mid} {fine}");
    assert!(e2 < 0.5 * e1, "{coarse} {mid} {fine}");
}

#[test]
fn uncoupled_ring_has_no_memory() {
    let (times, f) = flow(ModelParams::default().with_spins(4).with_coupling(0.0), 20.0, 801);
    let sigma: Vec<f64> = f.iter().map(|s| s.sigma).collect();
    assert!(f.iter().all(|s| (1.0 - s.d).abs() < 1e-10));
    assert!(sigma.iter().all(|s| s.abs() < 1e-10));
    assert!(blp_measure(&sigma, times[1] - times[0]).value < 1e-10);
}

#[test]
fn coherence_oscillates_and_revives() {
    let sim = Simulation::new(ModelParams::default().with_spins(5)).unwrap();
    let abs: Vec<f64> = sim
        .run(&time_grid(20.0, 801))
        .unwrap()
        .iter()
        .map(|r| r.gamma.norm())
        .collect();
    let min = abs.iter().copied().fold(1.0, f64::min);
    assert!(min < 0.99);
    let first_dip = abs.iter().position(|&a| a < 0.99).unwrap();
    let revival = abs[first_dip..].iter().copied().fold(0.0, f64::max);
    assert!(revival > 0.999, "{revival}");
}

#[test]
fn backflow_marks_rising_distance() {
    let (_, f) = flow(ModelParams::default().with_spins(3), 5.0, 501);
    assert!(backflow_intervals(&f) > 0);
    for w in f.windows(3) {
        if w[1].backflow {
            assert!(w[2].d > w[0].d);
        }
    }
}
