use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use versal_kit::cli::{run, Command, JobSpec};

/// Deformation invariants and miniversal families of isolated complete
/// intersection singularities.
#[derive(Parser, Debug)]
#[command(name = "versal-kit", version)]
struct Args {
    command: Command,
    input: PathBuf,
    /// Coefficient field, `Q` or `Fp:<prime>`; overrides the input file.
    #[arg(long)]
    field: Option<String>,
    /// Order for `lift` and `verify`.
    #[arg(long)]
    order: Option<u32>,
    /// Also write the report as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut options = BTreeMap::new();
    if let Some(o) = args.order {
        options.insert("order".to_string(), o.to_string());
    }
    let job = JobSpec {
        command: args.command,
        field_spec: args.field,
        input_path: args.input,
        options,
    };
    match run(&job) {
        Ok(report) => {
            print!("{report}");
            if let Some(path) = args.json {
                if let Err(e) = std::fs::write(&path, report.to_json()) {
                    eprintln!("versal-kit: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("versal-kit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
