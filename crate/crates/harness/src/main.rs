use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dvbwarp_harness::{run, ExitStatus, Overrides, ProblemSpec, SpecError, Suite, DEMO_SPEC};

/// Run the verification suites on a problem description and write a JSON
/// report (to stdout unless --report is given).
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    /// Problem description (JSON). Omit with --demo.
    #[arg(required_unless_present_any = ["demo", "print_demo"])]
    spec: Option<PathBuf>,

    /// Use the built-in demo problem (X = ∂0, Y = x0 ∂1).
    #[arg(long, conflicts_with = "spec")]
    demo: bool,

    /// Print the built-in demo problem and exit.
    #[arg(long)]
    print_demo: bool,

    /// Run only this suite; repeatable.
    #[arg(long = "suite", value_enum)]
    suites: Vec<Suite>,

    #[arg(long)]
    samples: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    tol: Option<f64>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Suppress the per-check summary on stderr.
    #[arg(long)]
    quiet: bool,
}

fn load(cli: &Cli) -> Result<ProblemSpec, SpecError> {
    match &cli.spec {
        Some(path) => ProblemSpec::load(&path.to_string_lossy()),
        None => ProblemSpec::from_json(DEMO_SPEC),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.print_demo {
        print!("{DEMO_SPEC}");
        return ExitCode::SUCCESS;
    }

    let prepared = load(&cli).and_then(|spec| {
        let mut problem = spec.validate()?;
        Overrides {
            samples: cli.samples,
            seed: cli.seed,
            tolerance: cli.tol,
        }
        .apply(&mut problem)?;
        Ok((spec, problem))
    });
    let (spec, problem) = match prepared {
        Ok(v) => v,
        Err(e) => {
            let source = cli.spec.as_ref().map_or("demo".into(), |p| p.display().to_string());
            eprintln!("spec error in {source}: {e}");
            return ExitCode::from(ExitStatus::SpecError as u8);
        }
    };

    let report = run(&spec, &problem, &cli.suites);
    let json = report.to_json();
    match &cli.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write report {}: {e}", path.display());
                return ExitCode::from(ExitStatus::SpecError as u8);
            }
        }
        None => print!("{json}"),
    }
    if !cli.quiet {
        eprint!("{}", report.summary());
    }
    let status = if report.pass() { ExitStatus::Pass } else { ExitStatus::Fail };
    ExitCode::from(status as u8)
}
