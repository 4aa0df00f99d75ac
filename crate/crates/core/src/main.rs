use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use plurilab::cli::{execute, Artifacts, CliError, RunConfig, RunContext};

/// Pluripotential computations driven by JSON run configurations.
#[derive(Parser, Debug)]
#[command(name = "plurilab", version, about)]
struct Args {
    /// Run configuration (JSON); its `command` field selects the computation.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV, SVG and meta files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Run twice and fail unless the outputs are byte-identical.
    #[arg(long)]
    seedless: bool,
}

fn write_all(out: &Path, artifacts: &Artifacts) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    // Stage every file first so a failed write leaves no partial set.
    let mut staged = Vec::new();
    for (name, bytes) in &artifacts.files {
        let tmp = out.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, bytes)?;
        staged.push((tmp, out.join(name)));
    }
    for (tmp, dest) in staged {
        std::fs::rename(tmp, dest)?;
    }
    Ok(())
}

fn run(args: &Args) -> Result<Artifacts, CliError> {
    if let Some(k) = args.threads {
        if k == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let config = RunConfig::from_json(&text)?;
    let ctx = RunContext {
        base_dir: args.config.parent().map(Path::to_path_buf).unwrap_or_default(),
        seedless: args.seedless,
    };
    let artifacts = execute(&config, &ctx)?;
    write_all(&args.out, &artifacts)?;
    Ok(artifacts)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(a) => {
            for line in &a.summary {
                println!("{line}");
            }
            if a.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("plurilab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
