use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rcsim_cli::commands::{cmd_cftp, cmd_percolation, cmd_sample, cmd_sweep, print_json};
use rcsim_cli::validate::run_validation;
use rcsim_cli::{parse_config, CliError, Command, ExperimentConfig};

/// Continuum Ising / Widom-Rowlinson sampling and random-cluster experiments.
///
/// Exit status: 0 success, 2 config error, 3 validation failure,
/// 4 non-coalescence, 1 other errors.
#[derive(Debug, Parser)]
#[command(name = "rcsim", version)]
struct Args {
    command: Command,

    /// JSON experiment config (optional for `validate`).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,

    /// Output directory (default: config `output`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// `key.path=value` applied to the config before parsing; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Run the identity checks with a wrong random-cluster parameter.
    #[arg(long)]
    inject_wrong_p: bool,
}

fn load(args: &Args) -> Result<ExperimentConfig, CliError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?,
        None if args.command == Command::Validate => r#"{"seed": 0}"#.to_string(),
        None => return Err(CliError::config("--config", "a config file is required")),
    };
    let mut overrides = args.overrides.clone();
    if let Some(seed) = args.seed {
        overrides.push(format!("seed={seed}"));
    }
    let cfg = parse_config(&text, &overrides)?;
    if let Some(c) = cfg.command {
        if c != args.command {
            return Err(CliError::config("command", format!("config is for {c:?}, not {:?}", args.command)));
        }
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<(), CliError> {
    let mut cfg = load(args)?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    match args.command {
        Command::Sample => print_json(&cmd_sample(&cfg, &out)?),
        Command::Cftp => print_json(&cmd_cftp(&cfg, &out)?),
        Command::Sweep => print_json(&cmd_sweep(&cfg, &out)?),
        Command::Percolation => print_json(&cmd_percolation(&cfg, &out)?),
        Command::Validate => {
            cfg.validate.inject_wrong_p |= args.inject_wrong_p;
            let report = run_validation(&cfg.validate, cfg.seed)?;
            std::fs::create_dir_all(&out)?;
            let mut text = serde_json::to_string_pretty(&report).expect("serializable");
            text.push('\n');
            std::fs::write(out.join("validate.json"), &text)?;
            print!("{text}");
            if !report.pass {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                return Err(CliError::Validation(failed.join("; ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.jobs {
        Some(0) => Err(CliError::config("--jobs", "must be >= 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&args)),
            Err(e) => Err(CliError::config("--jobs", e)),
        },
        None => run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rcsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
