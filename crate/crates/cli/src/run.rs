//! Sweep execution, the summary report and output files.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use dephasing_core::simulation::OracleReport;
use dephasing_core::{ModelParams, Simulation};

use crate::analysis::{align_extrema, non_increasing, AlignmentPair};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::{export_svg, FigKind};
use crate::table::export_csv;
use crate::trajectory::Trajectory;

pub const ORACLE_SAMPLES: usize = 10;
pub const PROPAGATOR_TOL: f64 = 1e-8;
pub const REDUCED_STATE_TOL: f64 = 1e-10;
pub const IDENTITY_RTOL: f64 = 1e-9;
pub const SYSTEM_ENERGY_TOL: f64 = 1e-10;
pub const EXTREMUM_PROMINENCE: f64 = 1e-12;
pub const ALIGNMENT_STEPS: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.label, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct TrajectorySummary {
    pub n_spins: usize,
    pub g: f64,
    pub max_identity_residual: f64,
    pub max_abs_q: f64,
    pub blp: f64,
    pub backflow_intervals: usize,
    pub min_abs_gamma: f64,
    pub alignment: Vec<AlignmentPair>,
    pub oracle: Option<OracleReport>,
}

impl TrajectorySummary {
    pub fn all_aligned(&self) -> bool {
        self.alignment.iter().all(|p| p.aligned)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub trajectories: Vec<TrajectorySummary>,
    /// Assertions that decide the exit status.
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.trajectories {
            writeln!(f, "N = {}, g = {}", s.n_spins, s.g)?;
            writeln!(f, "  max |<Q> - C|        {:.3e}", s.max_identity_residual)?;
            writeln!(f, "  min |Gamma|          {:.6}", s.min_abs_gamma)?;
            writeln!(f, "  BLP                  {:.6}", s.blp)?;
            writeln!(f, "  backflow intervals   {}", s.backflow_intervals)?;
            if let Some(o) = &s.oracle {
                writeln!(
                    f,
                    "  oracle ({} times)     propagator {:.3e}, reduced states {:.3e}",
                    o.samples, o.max_propagator_deviation, o.max_reduced_state_deviation
                )?;
            }
            let aligned = s.alignment.iter().filter(|p| p.aligned).count();
            writeln!(
                f,
                "  <Q> maxima aligned with |Gamma| minima: {aligned}/{}",
                s.alignment.len()
            )?;
            for p in &s.alignment {
                writeln!(
                    f,
                    "    Q max t = {:.4}  |Gamma| min t = {}  gap = {}{}",
                    p.q_max_time,
                    fmt_opt(p.gamma_min_time),
                    fmt_opt(p.gap),
                    if p.aligned { "" } else { "  (not aligned)" }
                )?;
            }
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub trajectories: Vec<Trajectory>,
    pub summary: Summary,
}

/// Evenly spread subset of `times` used for the full-space comparison.
pub fn oracle_times(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    if n <= ORACLE_SAMPLES {
        return times.to_vec();
    }
    (0..ORACLE_SAMPLES)
        .map(|i| times[i * (n - 1) / (ORACLE_SAMPLES - 1)])
        .collect()
}

fn numeric(p: &ModelParams, e: dephasing_core::Error) -> CliError {
    CliError::Numeric {
        n_spins: p.n_spins,
        g: p.g0,
        t: None,
        source: e,
    }
}

fn point_checks(traj: &Trajectory, sim: &Simulation, oracle: Option<&OracleReport>, out: &mut Vec<Check>) {
    let tag = format!("N={} g={}", traj.n_spins(), traj.g());
    let scale = traj.max_abs_q().max(1.0);
    let hs = sim.hamiltonians();

    let commutator = hs.pure_dephasing_defect();
    let assembly = hs.assembly_defect();
    out.push(Check {
        label: format!("{tag} structure"),
        pass: commutator < 1e-12 && assembly == 0.0,
        detail: format!("|[H_S, H_I]| = {commutator:.2e}, assembly defect = {assembly:.2e}"),
    });

    let identity = traj.max_identity_residual();
    out.push(Check {
        label: format!("{tag} heat = coherent energy"),
        pass: identity < IDENTITY_RTOL * scale,
        detail: format!("max |<Q> - C| = {identity:.3e}"),
    });

    let first_law = traj.max_first_law_residual();
    let du_s = traj
        .records
        .iter()
        .map(|r| r.thermo.u_s_delta.abs())
        .fold(0.0, f64::max);
    let du_tot = traj
        .records
        .iter()
        .map(|r| r.thermo.u_total_delta.abs())
        .fold(0.0, f64::max);
    let h_norm = hs.h_total.max_abs();
    out.push(Check {
        label: format!("{tag} first law"),
        pass: first_law < IDENTITY_RTOL * scale
            && du_s < SYSTEM_ENERGY_TOL
            && du_tot < IDENTITY_RTOL * h_norm,
        detail: format!("max |<W> - <Q>| = {first_law:.3e}, |dU_S| = {du_s:.3e}, |dU| = {du_tot:.3e}"),
    });

    if let Some(o) = oracle {
        out.push(Check {
            label: format!("{tag} oracle"),
            pass: o.max_propagator_deviation < PROPAGATOR_TOL
                && o.max_reduced_state_deviation < REDUCED_STATE_TOL,
            detail: format!(
                "propagator {:.3e}, reduced states {:.3e}",
                o.max_propagator_deviation, o.max_reduced_state_deviation
            ),
        });
    }
}

fn monotonicity_checks(summaries: &[TrajectorySummary], out: &mut Vec<Check>) {
    let gs: BTreeSet<u64> = summaries.iter().map(|s| s.g.to_bits()).collect();
    let ns: BTreeSet<usize> = summaries.iter().map(|s| s.n_spins).collect();
    for g in gs {
        let mut group: Vec<&TrajectorySummary> = summaries.iter().filter(|s| s.g.to_bits() == g).collect();
        if group.len() < 2 {
            continue;
        }
        group.sort_by_key(|s| s.n_spins);
        let mins: Vec<f64> = group.iter().map(|s| s.min_abs_gamma).collect();
        out.push(Check {
            label: format!("min |Gamma| non-increasing in N at g={}", f64::from_bits(g)),
            pass: non_increasing(&mins),
            detail: describe(group.iter().map(|s| format!("N={}", s.n_spins)), &mins),
        });
    }
    for n in ns {
        let mut group: Vec<&TrajectorySummary> = summaries.iter().filter(|s| s.n_spins == n).collect();
        if group.len() < 2 {
            continue;
        }
        group.sort_by(|a, b| a.g.total_cmp(&b.g));
        let mins: Vec<f64> = group.iter().map(|s| s.min_abs_gamma).collect();
        out.push(Check {
            label: format!("min |Gamma| non-increasing in g at N={n}"),
            pass: non_increasing(&mins),
            detail: describe(group.iter().map(|s| format!("g={}", s.g)), &mins),
        });
    }
}

fn describe(keys: impl Iterator<Item = String>, values: &[f64]) -> String {
    keys.zip(values)
        .map(|(k, v)| format!("{k}: {v:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Runs every parameter point of `config`. Points execute one after another; the samples of
/// each point are spread over the thread pool.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    let times = config.times();
    let mut trajectories = Vec::new();
    let mut summary = Summary::default();
    for params in config.points() {
        let sim = Simulation::new(params.clone()).map_err(|e| numeric(&params, e))?;
        let traj = Trajectory::compute(&sim, &times)?;
        let oracle = if config.oracle_enabled(params.n_spins) {
            Some(
                sim.oracle_check(&oracle_times(&times))
                    .map_err(|e| numeric(&params, e))?,
            )
        } else {
            None
        };
        point_checks(&traj, &sim, oracle.as_ref(), &mut summary.checks);
        summary.trajectories.push(TrajectorySummary {
            n_spins: params.n_spins,
            g: params.g0,
            max_identity_residual: traj.max_identity_residual(),
            max_abs_q: traj.max_abs_q(),
            blp: traj.blp(),
            backflow_intervals: traj.backflow_intervals(),
            min_abs_gamma: traj.min_abs_gamma(),
            alignment: align_extrema(
                &traj.times(),
                &traj.q_mean(),
                &traj.abs_gamma(),
                EXTREMUM_PROMINENCE,
                ALIGNMENT_STEPS,
            ),
            oracle,
        });
        trajectories.push(traj);
    }
    monotonicity_checks(&summary.trajectories, &mut summary.checks);
    Ok(RunOutput {
        trajectories,
        summary,
    })
}

pub fn csv_name(n_spins: usize, g: f64) -> String {
    format!("traj_N{n_spins}_g{g}.csv")
}

/// `fig{k}_N{N}_g{g}.svg`; overlays join the swept values with `-`.
pub fn svg_name(kind: FigKind, group: &[&Trajectory]) -> String {
    let join = |vals: Vec<String>| {
        let mut out: Vec<String> = Vec::new();
        for v in vals {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out.join("-")
    };
    let ns = join(group.iter().map(|t| t.n_spins().to_string()).collect());
    let gs = join(group.iter().map(|t| t.g().to_string()).collect());
    format!("fig{}_N{ns}_g{gs}.svg", kind.number())
}

/// Groups for an overlay figure: fig2 holds `g` fixed, fig3 holds `N` fixed.
fn overlay_groups(kind: FigKind, trajs: &[Trajectory]) -> Vec<Vec<&Trajectory>> {
    let mut groups: Vec<Vec<&Trajectory>> = Vec::new();
    for t in trajs {
        let same = |other: &&Trajectory| match kind {
            FigKind::Fig2 => other.g().to_bits() == t.g().to_bits(),
            _ => other.n_spins() == t.n_spins(),
        };
        match groups.iter_mut().find(|g| same(&g[0])) {
            Some(g) => g.push(t),
            None => groups.push(vec![t]),
        }
    }
    groups
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes CSV tables, figures and `summary.txt` into `config.out_dir`.
pub fn write_outputs(config: &RunConfig, output: &RunOutput) -> Result<Vec<PathBuf>, CliError> {
    let dir = &config.out_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    if config.emit.csv() {
        for t in &output.trajectories {
            let path = dir.join(csv_name(t.n_spins(), t.g()));
            export_csv(t, &path)?;
            written.push(path);
        }
    }
    if config.emit.svg() {
        for &kind in &config.figs {
            let groups = if kind.is_overlay() {
                overlay_groups(kind, &output.trajectories)
            } else {
                output.trajectories.iter().map(|t| vec![t]).collect()
            };
            for group in groups {
                let path = dir.join(svg_name(kind, &group));
                export_svg(kind, &group, &path)?;
                written.push(path);
            }
        }
    }
    let path = dir.join("summary.txt");
    std::fs::write(&path, output.summary.to_string()).map_err(io_err(&path))?;
    written.push(path);
    Ok(written)
}
