use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qscale::cli::{self, CliError, ConfigError, Scenario, ScalingKind, ScenarioConfig, OUTPUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "qscale", version, about = "Time-scaled non-Hermitian 2- and 3-level protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its CSV series and summary.json.
    Run(RunArgs),
    /// Run several configs of one scenario and print a table sorted by fidelity.
    Compare(CompareArgs),
    /// Print the default parameters of every scenario.
    Defaults,
    /// Print the config schema as JSON.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    /// faquad, stirap, qsl2, qsl3 or optimize. Optional with --config.
    scenario: Option<String>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// identity, polynomial, quasi_unitary or optimal.
    #[arg(long)]
    scaling: Option<String>,
    /// Choose the scaled duration so the drive energy matches the unscaled protocol.
    #[arg(long)]
    energy_matched: bool,
    /// Scaled duration T_dur (defaults to the protocol duration).
    #[arg(long)]
    scaled_duration: Option<f64>,
    #[arg(long)]
    gamma_e: Option<f64>,
    #[arg(long)]
    gamma_g: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Protocol duration T.
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Output directory (overrides the config and the environment).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Generic override, repeatable: `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct CompareArgs {
    /// Config files, or inline specs `scenario[:key=value;key=value]`.
    #[arg(required = true, num_args = 2..)]
    configs: Vec<String>,
    /// Also write compare.csv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(ScenarioConfig::from_json(&text)?)
}

fn scenario(name: &str) -> Result<Scenario, CliError> {
    Scenario::parse(name).ok_or_else(|| {
        let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
        CliError::Config(ConfigError { field: "scenario".into(), message: format!("unknown scenario {name}; expected one of {}", names.join(", ")) })
    })
}

fn build_run_config(a: &RunArgs) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match (&a.config, &a.scenario) {
        (Some(path), None) => read_config(path)?,
        (Some(path), Some(name)) => {
            let cfg = read_config(path)?;
            if cfg.scenario != scenario(name)? {
                return Err(CliError::Usage(format!("config is for {}, command line asks for {name}", cfg.scenario)));
            }
            cfg
        }
        (None, Some(name)) => ScenarioConfig::new(scenario(name)?),
        (None, None) => return Err(CliError::Usage("give a scenario or --config".into())),
    };
    if let Some(k) = &a.scaling {
        if ScalingKind::parse(k).is_none() {
            return Err(CliError::Config(ConfigError { field: "scaling.kind".into(), message: format!("unknown scaling {k}") }));
        }
        cfg.set(&format!("scaling.kind={k}"))?;
    }
    if a.energy_matched {
        cfg.set("scaling.energy_matched=true")?;
    }
    if let Some(d) = a.scaled_duration {
        cfg.set(&format!("scaling.duration={d}"))?;
    }
    let named = [
        ("gamma_e", a.gamma_e),
        ("gamma_g", a.gamma_g),
        ("gamma2", a.gamma2),
        ("omega0", a.omega0),
        ("epsilon", a.epsilon),
        ("delta", a.delta),
        ("duration", a.duration),
    ];
    for (key, value) in named {
        if let Some(v) = value {
            cfg.parameters.insert(key.into(), v);
        }
    }
    if let Some(s) = a.steps {
        cfg.steps = s;
    }
    for s in &a.set {
        cfg.set(s)?;
    }
    Ok(cfg)
}

fn output_dir(flag: Option<&PathBuf>, cfg: &ScenarioConfig) -> PathBuf {
    flag.cloned()
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("qscale-out"))
}

fn cmd_run(a: RunArgs) -> Result<(), CliError> {
    let cfg = build_run_config(&a)?;
    let dir = output_dir(a.out.as_ref(), &cfg);
    let out = cli::run(cfg)?;
    cli::write_outputs(&dir, &out.files)?;
    println!("{}", out.file("summary.json").unwrap_or_default().trim_end());
    eprintln!("wrote {} files to {}", out.files.len(), dir.display());
    Ok(())
}

fn parse_inline(spec: &str) -> Result<ScenarioConfig, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut cfg = ScenarioConfig::new(scenario(name)?);
    for kv in rest.split(';').filter(|s| !s.is_empty()) {
        cfg.set(kv)?;
    }
    Ok(cfg)
}

fn cmd_compare(a: CompareArgs) -> Result<(), CliError> {
    let configs = a
        .configs
        .iter()
        .map(|c| {
            let p = Path::new(c);
            let cfg = if p.is_file() { read_config(p)? } else { parse_inline(c)? };
            Ok((c.clone(), cfg))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let rows = cli::compare(configs)?;
    let csv = cli::compare_csv(&rows);
    print!("{csv}");
    if let Some(dir) = a.out {
        cli::write_outputs(&dir, &[("compare.csv".into(), csv)])?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match args.command {
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Defaults => {
            print!("{}", cli::defaults_table());
            Ok(())
        }
        Command::Schema => {
            println!("{}", serde_json::to_string_pretty(&cli::schema()).expect("schema serializes"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qscale: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
