use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, observables, uniform_grid, ObservableSeries, Trajectory};
use crate::energy::{optimal_scaling, protocol_energy, scaled_drive_table};
use crate::error::Error;
use crate::generator::Generator;
use crate::numeric::simpson_uniform;
use crate::protocols::{faquad, faquad_schedule, AngularTrajectory, FaquadParams, StirapParams, StirapProtocol};
use crate::pulses::{PulseKind, PulseSet};
use crate::qsl::{corrected_chi, orthogonality_time, quantum_speed, QslTrace};
use crate::state::{real_diagonal, QuantumState};
use crate::table::Table;
use crate::timescale::{apply_scaling, energy_matched_duration, quasi_unitary_scaling, DampingProfile, ScalingFamily, ScalingFunction};

use super::config::{ConfigError, Scenario, ScalingKind, ScalingOptions, ScenarioConfig};
use super::defaults::DEFAULTS_VERSION;
use super::CliError;

/// Config echo and versions attached to every summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ScenarioConfig,
    pub version: String,
    pub defaults_version: String,
}

/// Scalar results of a run. Every value is also the last row (or a value
/// derived from) one of the CSV files written alongside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub scenario: Scenario,
    pub scaling: ScalingKind,
    pub final_norm: Option<f64>,
    pub final_purity: Option<f64>,
    pub final_fidelity: Option<f64>,
    pub c_prime: Option<f64>,
    pub energy: Option<f64>,
    #[serde(rename = "T_star")]
    pub t_star: Option<f64>,
    pub duration: Option<f64>,
    pub extras: BTreeMap<String, f64>,
    pub provenance: Provenance,
}

/// A finished run: the summary and the files to write, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: SummaryRecord,
    pub files: Vec<(String, String)>,
}

impl RunOutput {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }
}

/// The pieces of a driven protocol that the runner needs.
struct Protocol {
    drive_generator: Generator,
    drive: PulseSet,
    corrections: Option<PulseSet>,
    psi0: QuantumState,
    target: usize,
    duration: f64,
    profile: DampingProfile,
    angles: Option<AngularTrajectory>,
}

fn schema(field: &str, e: Error) -> CliError {
    CliError::Config(ConfigError { field: field.into(), message: e.to_string() })
}

fn faquad_protocol(cfg: &ScenarioConfig) -> Result<Protocol, CliError> {
    let params = FaquadParams {
        omega0: cfg.param("omega0"),
        epsilon: cfg.param("epsilon"),
        duration: cfg.param("duration"),
        gamma_e: cfg.param("gamma_e"),
        gamma_g: cfg.param("gamma_g"),
    };
    params.validate().map_err(|e| schema("parameters", e))?;
    let s = faquad_schedule(params)?;
    Ok(Protocol {
        psi0: s.initial_state(),
        target: faquad::GROUND,
        duration: params.duration,
        drive_generator: s.generator,
        drive: s.pulses,
        corrections: None,
        profile: s.profile,
        angles: None,
    })
}

fn stirap_params(cfg: &ScenarioConfig) -> Result<StirapParams, CliError> {
    let params = StirapParams {
        epsilon: cfg.param("epsilon"),
        delta_peak: cfg.param("delta"),
        duration: cfg.param("duration"),
        gamma2: cfg.param("gamma2"),
    };
    params.validate().map_err(|e| schema("parameters", e))?;
    Ok(params)
}

fn stirap_protocol(cfg: &ScenarioConfig) -> Result<Protocol, CliError> {
    let params = stirap_params(cfg)?;
    let corrected = cfg.parameters.get("corrected").is_none_or(|&v| v != 0.0);
    let p = StirapProtocol::with_corrections(params, corrected)?;
    Ok(Protocol {
        psi0: p.initial_state(),
        target: p.target_level(),
        duration: params.duration,
        profile: p.damping_profile(),
        angles: Some(p.angles),
        corrections: corrected.then(|| p.corrections.clone()),
        drive: p.drive,
        drive_generator: p.drive_generator,
    })
}

struct Scaled {
    lambda: ScalingFunction,
    c_prime: Option<f64>,
    c_opt: Option<f64>,
    reference_energy: Option<f64>,
}

fn build_scaling(p: &Protocol, opts: &ScalingOptions) -> Result<Scaled, CliError> {
    let t = p.duration;
    let family = match opts.kind {
        ScalingKind::Identity => ScalingFamily::Uniform,
        ScalingKind::Polynomial => ScalingFamily::Polynomial,
        ScalingKind::QuasiUnitary => ScalingFamily::QuasiUnitary(p.profile.clone()),
        ScalingKind::Optimal => ScalingFamily::Optimal(p.angles.ok_or_else(|| {
            CliError::Config(ConfigError { field: "scaling.kind".into(), message: "optimal scaling needs a STIRAP protocol".into() })
        })?),
    };
    let (lambda, reference_energy) = if opts.energy_matched {
        let e_ref = protocol_energy(&p.drive, &ScalingFunction::identity(t)).drive_part;
        let (_, lambda) = energy_matched_duration(&p.drive, &family, e_ref)?;
        (lambda, Some(e_ref))
    } else {
        let d = opts.duration.unwrap_or(t);
        let lambda = if opts.kind == ScalingKind::Identity && d == t { ScalingFunction::identity(t) } else { family.build(d, t)? };
        (lambda, None)
    };
    let d = lambda.duration();
    let c_prime = match opts.kind {
        ScalingKind::QuasiUnitary => Some(quasi_unitary_scaling(&p.profile, d, t)?.1),
        _ => None,
    };
    let c_opt = match (opts.kind, &p.angles) {
        (ScalingKind::Optimal, Some(a)) => Some(optimal_scaling(a, d)?.1),
        _ => None,
    };
    Ok(Scaled { lambda, c_prime, c_opt, reference_energy })
}

fn trajectory_table(obs: &ObservableSeries) -> Table {
    let mut t = Table::new().with_column("t", obs.grid.clone()).with_column("norm", obs.norm.clone());
    for (k, pops) in obs.populations.iter().enumerate() {
        t.push(format!("population_{}", k + 1), pops.clone());
    }
    t.with_column("purity", obs.purity.clone())
        .with_column("fidelity", obs.target_population.clone())
        .with_column("fidelity_vs_initial", obs.fidelity_vs_initial.clone())
}

fn summary(cfg: &ScenarioConfig, obs: &ObservableSeries) -> SummaryRecord {
    SummaryRecord {
        scenario: cfg.scenario,
        scaling: cfg.scaling_options().kind,
        final_norm: Some(obs.final_norm()),
        final_purity: Some(obs.final_purity()),
        final_fidelity: Some(obs.final_fidelity()),
        c_prime: None,
        energy: None,
        t_star: None,
        duration: obs.grid.last().copied(),
        extras: BTreeMap::new(),
        provenance: Provenance {
            config: cfg.clone(),
            version: env!("CARGO_PKG_VERSION").into(),
            defaults_version: DEFAULTS_VERSION.into(),
        },
    }
}

fn files(traj: &Table, pulses: &Table, qsl: &QslTrace, scaling: String) -> Vec<(String, String)> {
    vec![
        ("trajectory.csv".into(), traj.to_csv()),
        ("pulses.csv".into(), pulses.to_csv()),
        ("qsl.csv".into(), qsl.table().to_csv()),
        ("scaling.csv".into(), scaling),
    ]
}

/// Runs of the driven protocols (FAQUAD, STIRAP and their QSL and energy
/// variants) share everything up to the scenario-specific extras.
fn run_protocol(cfg: &ScenarioConfig, p: Protocol) -> Result<RunOutput, CliError> {
    let opts = cfg.scaling_options();
    let sc = build_scaling(&p, &opts)?;
    let lambda = &sc.lambda;
    let gen = apply_scaling(&p.drive_generator, p.corrections.as_ref(), lambda)?;
    let grid = uniform_grid(lambda.duration(), cfg.steps);
    let traj = evolve(&gen, &p.psi0, &grid)?;
    let obs = observables(&traj, p.target)?;
    let qsl = quantum_speed(&traj)?;
    let pulses = match &p.corrections {
        Some(c) => p.drive.with_correction_from(c)?,
        None => p.drive.clone(),
    };
    let report = protocol_energy(&pulses, lambda);
    let pulse_table = pulses.rescaled(lambda).table(&grid);
    let [na, nb] = pulses.kind().names();
    let (pa, pb) = (pulse_table.column(na).expect("drive column"), pulse_table.column(nb).expect("drive column"));
    let power: Vec<f64> = pa.iter().zip(pb).map(|(a, b)| a * a + b * b).collect();
    let energy = simpson_uniform(&power, lambda.duration());

    let mut s = summary(cfg, &obs);
    s.c_prime = sc.c_prime;
    s.energy = Some(energy);
    s.extras.insert("energy_total".into(), report.total);
    s.extras.insert("energy_correction".into(), report.correction_part);
    s.extras.insert("energy_cross".into(), report.cross_term);
    s.extras.insert("correction_overhead".into(), report.overhead_fraction);
    if let Some(e) = sc.reference_energy {
        s.extras.insert("reference_energy".into(), e);
    }
    if cfg.scenario == Scenario::Faquad {
        s.extras.insert("c".into(), (1.0 - cfg.param("epsilon")) / (2.0 * cfg.param("omega0") * cfg.param("duration")));
    }
    let mut out = files(&trajectory_table(&obs), &pulse_table, &qsl, lambda.to_csv(cfg.steps));

    match cfg.scenario {
        Scenario::Qsl3 => {
            let bare = apply_scaling(&p.drive_generator, None, lambda)?;
            let cc = corrected_chi(&traj, &bare)?;
            s.extras.insert("max_chi_gap".into(), cc.max_relative_gap(0.9));
            let t = Table::new()
                .with_column("t", cc.grid.clone())
                .with_column("chi", cc.chi.clone())
                .with_column("delta_h0", cc.delta_h0.clone());
            out.push(("corrected_chi.csv".into(), t.to_csv()));
        }
        Scenario::Optimize => {
            let c = sc.c_opt.expect("optimal scaling");
            let e0 = protocol_energy(&p.drive, &ScalingFunction::identity(p.duration)).drive_part;
            s.extras.insert("c".into(), c);
            s.extras.insert("reference_energy".into(), e0);
            s.extras.insert("energy_ratio".into(), energy / e0);
            out.push(("optimal.csv".into(), scaled_drive_table(&p.drive, lambda, 2.0 * c, cfg.steps).to_csv()));
        }
        _ => {
            if let Some(c) = sc.c_opt {
                s.extras.insert("c".into(), c);
            }
        }
    }
    Ok(RunOutput { summary: s, files: out })
}

/// Largest `|φ̇/χ − 1|` over stencils that end before `t_star` and move
/// faster than `0.05/T`.
fn saturation_deviation(q: &QslTrace, t_star: f64) -> f64 {
    (1..q.grid.len().saturating_sub(1))
        .filter(|&i| q.phi_dot[i] > 0.05 && q.grid[i + 1] <= t_star)
        .map(|i| (q.ratio[i] - 1.0).abs())
        .fold(0.0, f64::max)
}

fn run_qsl2(cfg: &ScenarioConfig) -> Result<RunOutput, CliError> {
    let (omega0, horizon) = (cfg.param("omega0"), cfg.param("horizon"));
    let pulses = PulseSet::new(PulseKind::TwoLevel, horizon, move |_| 0.5 * omega0, |_| 0.0);
    let gen = pulses.generator(real_diagonal(&[cfg.param("gamma_e"), cfg.param("gamma_g")]), "qsl2")?;
    let grid = uniform_grid(horizon, cfg.steps);
    let traj: Trajectory = evolve(&gen, &QuantumState::basis(2, faquad::EXCITED)?, &grid)?;
    let obs = observables(&traj, faquad::GROUND)?;
    let qsl = quantum_speed(&traj)?;
    let t_star = orthogonality_time(&traj)?;
    let mut s = summary(cfg, &obs);
    s.t_star = Some(t_star);
    s.extras.insert("max_saturation_deviation".into(), saturation_deviation(&qsl, t_star));
    let lambda = ScalingFunction::identity(horizon);
    Ok(RunOutput { summary: s, files: files(&trajectory_table(&obs), &pulses.table(&grid), &qsl, lambda.to_csv(cfg.steps)) })
}

/// Validate `config`, run it, and return the summary and file contents.
pub fn run(config: ScenarioConfig) -> Result<RunOutput, CliError> {
    let cfg = config.resolve()?;
    let mut out = match cfg.scenario {
        Scenario::Faquad => run_protocol(&cfg, faquad_protocol(&cfg)?)?,
        Scenario::Stirap | Scenario::Qsl3 | Scenario::Optimize => run_protocol(&cfg, stirap_protocol(&cfg)?)?,
        Scenario::Qsl2 => run_qsl2(&cfg)?,
    };
    let json = serde_json::to_string_pretty(&out.summary).expect("summary serializes");
    out.files.push(("summary.json".into(), json + "\n"));
    Ok(out)
}

/// Write each file through a temporary sibling and a rename, so readers
/// never see a partial file.
pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, content)?;
        fs::rename(&tmp, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// One row of a comparison report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub label: String,
    pub scaling: ScalingKind,
    pub energy_matched: bool,
    pub duration: f64,
    pub final_fidelity: f64,
    pub final_purity: f64,
    pub energy: Option<f64>,
}

/// Run every config (in parallel) and return one row each, sorted by
/// ascending fidelity. All configs must share a scenario.
pub fn compare(configs: Vec<(String, ScenarioConfig)>) -> Result<Vec<CompareRow>, CliError> {
    if configs.len() < 2 {
        return Err(CliError::Usage("compare needs at least two configs".into()));
    }
    let scenario = configs[0].1.scenario;
    if let Some((label, c)) = configs.iter().find(|(_, c)| c.scenario != scenario) {
        return Err(CliError::Usage(format!("mixed scenarios: {label} is {}, expected {scenario}", c.scenario)));
    }
    let results: Vec<Result<RunOutput, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|(_, c)| scope.spawn(move || run(c.clone()))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(configs.len());
    for ((label, _), r) in configs.into_iter().zip(results) {
        let s = r?.summary;
        let opts = s.provenance.config.scaling_options();
        rows.push(CompareRow {
            label,
            scaling: opts.kind,
            energy_matched: opts.energy_matched,
            duration: s.duration.unwrap_or(f64::NAN),
            final_fidelity: s.final_fidelity.unwrap_or(f64::NAN),
            final_purity: s.final_purity.unwrap_or(f64::NAN),
            energy: s.energy,
        });
    }
    rows.sort_by(|a, b| a.final_fidelity.total_cmp(&b.final_fidelity));
    Ok(rows)
}

/// `label,scaling,energy_matched,duration,final_fidelity,final_purity,energy`.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("label,scaling,energy_matched,duration,final_fidelity,final_purity,energy\n");
    for r in rows {
        out += &format!("{},{},{},", r.label.replace(',', ";"), r.scaling, r.energy_matched);
        for (i, v) in [r.duration, r.final_fidelity, r.final_purity, r.energy.unwrap_or(f64::NAN)].into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            crate::table::write_number(&mut out, v);
        }
        out.push('\n');
    }
    out
}
