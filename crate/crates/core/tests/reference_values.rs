//! Values frozen from an independent dense-matrix computation: `expm(−i H_total t)` applied
//! to `ρ_S ⊗ ρ_E` in the full space, with `ε = (−½, ½)`, `β = 1`, `J_z = 1`, `h_z = −5` and
//! the qubit in `|+⟩`.

use dephasing_core::{ModelParams, Simulation};

const TOL: f64 = 1e-10;

struct Frozen {
    n: usize,
    g: f64,
    t: f64,
    re_gamma: f64,
    im_gamma: f64,
    q: f64,
    w: f64,
}

const FROZEN: [Frozen; 4] = [
    Frozen {
        n: 3,
        g: 0.5,
        t: 1.0,
        re_gamma: 0.5312078459389377,
        im_gamma: 0.8393480366585884,
        q: 0.09341949471988542,
        w: 0.0934194947199672,
    },
    Frozen {
        n: 1,
        g: 0.5,
        t: 0.7,
        re_gamma: 0.7629624270980586,
        im_gamma: 0.6443785207164259,
        q: 0.013339869895276912,
        w: 0.013339869895279004,
    },
    Frozen {
        n: 2,
        g: 0.3,
        t: 2.0,
        re_gamma: -0.4179148585917279,
        im_gamma: 0.9045343408350096,
        q: 0.05031218790672831,
        w: 0.050312187906703845,
    },
    Frozen {
        n: 5,
        g: 0.5,
        t: 1.5,
        re_gamma: 0.0500355454336976,
        im_gamma: 0.9790494517182601,
        q: 0.2774245261856443,
        w: 0.27742452618579183,
    },
];

#[test]
fn matches_full_space_exponentiation() {
    for f in &FROZEN {
        let sim = Simulation::new(ModelParams::default().with_spins(f.n).with_coupling(f.g)).unwrap();
        let r = sim.sample(f.t).unwrap();
        let ctx = format!("N={} g={} t={}", f.n, f.g, f.t);
        assert!(
            (r.gamma.re - f.re_gamma).abs() < TOL,
            "{ctx}: Re Γ {}",
            r.gamma.re
        );
        assert!(
            (r.gamma.im - f.im_gamma).abs() < TOL,
            "{ctx}: Im Γ {}",
            r.gamma.im
        );
        assert!(
            (r.thermo.q_mean - f.q).abs() < TOL,
            "{ctx}: Q {}",
            r.thermo.q_mean
        );
        assert!(
            (r.thermo.w_mean - f.w).abs() < TOL,
            "{ctx}: W {}",
            r.thermo.w_mean
        );
        assert!(
            (r.thermo.c_coherent - f.q).abs() < TOL,
            "{ctx}: C {}",
            r.thermo.c_coherent
        );
    }
}

#[test]
fn single_spin_heat_is_independent_of_qubit_phase() {
    use dephasing_core::InitialQubit;
    let base = ModelParams::default().with_spins(1);
    let plus = Simulation::new(base.clone()).unwrap();
    let minus = Simulation::new(base.with_initial(InitialQubit::Minus)).unwrap();
    for t in [0.3, 1.1, 2.9] {
        let a = plus.sample(t).unwrap();
        let b = minus.sample(t).unwrap();
        assert!((a.thermo.q_mean - b.thermo.q_mean).abs() < 1e-14);
        assert!((a.gamma - b.gamma).norm() < 1e-14);
    }
}
