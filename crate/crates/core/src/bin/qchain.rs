use std::process::ExitCode;

use clap::{error::ErrorKind, ArgGroup, CommandFactory, Parser, Subcommand, ValueEnum};

use qchain::registry::{self, Format, Params, Status, Verdict};
use qchain::{Error, QMonomial};

#[derive(Parser)]
#[command(
    name = "qchain",
    version,
    about = "Expand q-series and verify identities with exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one identity or the whole registry
    #[command(group(ArgGroup::new("what").required(true).args(["identity", "all"])))]
    Verify {
        #[arg(long)]
        identity: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        k: Option<i64>,
        /// Monomial such as `-1`, `q^3`, `-q^3`, `q^-2`
        #[arg(long, allow_hyphen_values = true)]
        z: Option<QMonomial>,
        #[arg(long)]
        order: Option<i64>,
        /// Worker threads for --all
        #[arg(long)]
        jobs: Option<usize>,
        /// Append wall time to each line
        #[arg(long)]
        timings: bool,
    },
    /// Print the coefficients of a series
    Expand {
        #[arg(long)]
        series: String,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<QMonomial>,
        #[arg(long)]
        order: i64,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// List identities and series
    List {
        #[arg(long)]
        identities: bool,
        #[arg(long)]
        series: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::BadParams(_)
            | Error::InvalidParams(_)
            | Error::UnknownIdentity(_)
            | Error::UnknownSeries(_)
            | Error::UnknownPair(_)
            | Error::NonIntegerExponent(_)
            | Error::PolarParameters(_)
    )
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if usage_error(&e) { 2 } else { 1 })
}

fn print_verdict(v: &Verdict, timings: bool) {
    if timings {
        println!("{} {:.3}s", v.report_line(), v.wall_time.as_secs_f64());
    } else {
        println!("{}", v.report_line());
    }
    if let Some(s) = &v.series {
        for line in registry::to_text(s).lines() {
            println!("    {line}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            identity,
            all,
            k,
            z,
            order,
            jobs,
            timings,
        } => {
            if all {
                if k.is_some() || z.is_some() {
                    Cli::command()
                        .error(ErrorKind::ArgumentConflict, "--k and --z apply to --identity only")
                        .exit();
                }
                let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
                if jobs == 0 || order.is_some_and(|o| o < 1) {
                    Cli::command()
                        .error(ErrorKind::InvalidValue, "--jobs and --order must be positive")
                        .exit();
                }
                let verdicts = registry::run_all(order, jobs);
                let count = |s: Status| verdicts.iter().filter(|v| v.status == s).count();
                for v in &verdicts {
                    print_verdict(v, timings);
                }
                let failed = count(Status::Failed);
                println!(
                    "# {} verified, {} failed, {} skipped",
                    count(Status::Verified),
                    failed,
                    count(Status::Skipped)
                );
                return ExitCode::from(registry::exit_code(&verdicts));
            }
            let id = identity.expect("clap group requires one of the two");
            let Some(order) = order else {
                Cli::command()
                    .error(ErrorKind::MissingRequiredArgument, "--identity needs --order")
                    .exit();
            };
            match registry::check(&id, &Params { k, z }, order) {
                Ok(v) => {
                    print_verdict(&v, timings);
                    ExitCode::from(u8::from(v.status == Status::Failed))
                }
                Err(e) => fail(e),
            }
        }
        Command::Expand {
            series,
            k,
            z,
            order,
            format,
        } => {
            let format = match format {
                OutFormat::Text => Format::Text,
                OutFormat::Json => Format::Json,
            };
            match registry::expand(&series, &Params { k, z }, order, format) {
                Ok(doc) => {
                    print!("{doc}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::List { identities, series } => {
            let both = !identities && !series;
            if identities || both {
                for r in registry::registry() {
                    let kind = if r.is_emitter() { "emitter" } else { "identity" };
                    println!("{}\t{}\t{}\t{}", r.id, kind, r.default_order, r.citation);
                }
            }
            if series || both {
                for (id, about) in registry::SERIES {
                    println!("{id}\t{about}");
                }
            }
            ExitCode::SUCCESS
        }
    }
}
