use std::path::PathBuf;

use clap::Parser;
use dephasing::config::{parse_config_text, Emit, OracleMode};
use dephasing::{Cli, CliError, FigKind, RunConfig};
use dephasing_core::InitialQubit;

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("dephasing").chain(args.iter().copied())).unwrap()
}

fn fields(err: CliError) -> Vec<String> {
    match err {
        CliError::ConfigInvalid(list) => list.into_iter().map(|e| e.field).collect(),
        other => panic!("expected a config error, got {other}"),
    }
}

#[test]
fn defaults() {
    let c = RunConfig::default();
    assert_eq!(c.model.n_spins, 7);
    assert_eq!((c.model.j_z, c.model.h_z, c.model.beta), (1.0, -5.0, 1.0));
    assert_eq!((c.model.g0, c.model.g1), (0.5, 0.5));
    assert_eq!((c.t_max, c.n_samples), (20.0, 2001));
    assert_eq!(c.oracle, OracleMode::Auto);
    assert_eq!(c.emit, Emit::All);
    assert_eq!(c.figs, FigKind::ALL.to_vec());
    assert_eq!(c.out_dir, PathBuf::from("./results"));
    assert_eq!(c.points().len(), 1);
    assert_eq!(c.times().len(), 2001);
    assert_eq!(*c.times().last().unwrap(), 20.0);
}

#[test]
fn coupling_scale_sets_derived_defaults() {
    let c = RunConfig::resolve(cli(&["--jz", "-2", "--sweep-g"])).unwrap();
    assert_eq!(c.model.h_z, -10.0);
    assert_eq!(c.model.beta, 0.5);
    assert_eq!(c.model.g0, 1.0);
    assert_eq!(c.sweep_g, Some(vec![0.2, 0.6, 1.0]));
}

#[test]
fn bare_sweep_flags_use_standard_values() {
    let c = RunConfig::resolve(cli(&["--sweep-n", "--sweep-g"])).unwrap();
    assert_eq!(c.sweep_n, Some(vec![3, 5, 7]));
    assert_eq!(c.points().len(), 9);
    let c = RunConfig::resolve(cli(&["--sweep-n", "2,4", "--g", "0.2"])).unwrap();
    let pts = c.points();
    assert_eq!(pts.iter().map(|p| p.n_spins).collect::<Vec<_>>(), vec![2, 4]);
    assert!(pts.iter().all(|p| p.g0 == 0.2 && p.g1 == 0.2));
}

#[test]
fn file_then_flag_precedence() {
    let file = parse_config_text(
        "# comment line\n\
         n_spins = 4   # trailing comment\n\
         g = 0.25\n\
         t_max = 5\n\
         hz = -3\n\
         initial = minus\n\
         fig = 4,5\n",
    )
    .unwrap();
    let merged = cli(&["--n-spins", "3", "--samples", "11"]).or(file);
    let c = RunConfig::resolve(merged).unwrap();
    assert_eq!(c.model.n_spins, 3);
    assert_eq!(c.model.g0, 0.25);
    assert_eq!(c.model.h_z, -3.0);
    assert_eq!(c.t_max, 5.0);
    assert_eq!(c.n_samples, 11);
    assert_eq!(c.model.initial_qubit, InitialQubit::Minus);
    assert_eq!(c.figs, vec![FigKind::Fig4, FigKind::Fig5]);
}

#[test]
fn config_file_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "samples = 21\noracle = off\nemit = csv\n").unwrap();
    let c = RunConfig::from_cli(cli(&["--config", path.to_str().unwrap(), "--emit", "svg"])).unwrap();
    assert_eq!(c.n_samples, 21);
    assert_eq!(c.oracle, OracleMode::Off);
    assert_eq!(c.emit, Emit::Svg);

    let missing = RunConfig::from_cli(cli(&["--config", "/nonexistent/run.cfg"])).unwrap_err();
    assert_eq!(missing.exit_code(), 2);
    assert_eq!(fields(missing), vec!["config"]);
}

#[test]
fn file_errors_name_the_line() {
    let err = parse_config_text("n_spins = 3\nbogus = 1\ng = x\nno equals sign\nn-spins = 2\nn_spins = 4\n")
        .unwrap_err();
    assert_eq!(
        fields(err),
        vec![
            "bogus (line 2)",
            "g (line 3)",
            "line 4",
            "n-spins (line 5)",
            "n_spins (line 6)"
        ]
    );
}

#[test]
fn validation_collects_every_field() {
    let opts = cli(&[
        "--t-max",
        "0",
        "--samples",
        "2",
        "--beta",
        "-1",
        "--n-spins",
        "11",
        "--sweep-n",
        "0,3",
    ]);
    let mut f = fields(RunConfig::resolve(opts).unwrap_err());
    f.sort();
    assert_eq!(f, vec!["n_spins", "samples", "sweep_n", "t_max"]);
    let f = fields(RunConfig::resolve(cli(&["--beta", "-1"])).unwrap_err());
    assert_eq!(f, vec!["beta"]);
    let f = fields(RunConfig::resolve(cli(&["--jz", "0"])).unwrap_err());
    assert_eq!(f, vec!["beta"]);
    assert!(RunConfig::resolve(cli(&["--jz", "0", "--beta", "2", "--g", "0.3"])).is_ok());
}

#[test]
fn initial_state_forms() {
    let c = RunConfig::resolve(cli(&["--initial", "1.2,0.4"])).unwrap();
    assert_eq!(
        c.model.initial_qubit,
        InitialQubit::Custom { theta: 1.2, phi: 0.4 }
    );
    assert!(Cli::try_parse_from(["dephasing", "--initial", "sideways"]).is_err());
}

#[test]
fn oracle_modes() {
    let auto = RunConfig::default();
    assert!(auto.oracle_enabled(5) && !auto.oracle_enabled(7));
    let on = RunConfig::resolve(cli(&["--oracle", "on"])).unwrap();
    assert!(on.oracle_enabled(7));
    let off = RunConfig::resolve(cli(&["--oracle", "off"])).unwrap();
    assert!(!off.oracle_enabled(1));
}
