use std::io::Read;
use std::process::ExitCode;

use cartdec_cli::commands::{self, finish, input_failure, CheckLevel, Options, Outcome};
use cartdec_cli::format::{self, InputError};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cartdec", version, about = "Cartesian systems and decompositions of innately transitive groups")]
struct Cli {
    /// Print only the JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of members the oracle searches for.
    #[arg(long, global = true, env = "CARTDEC_MAX_LEN", default_value_t = 4)]
    max_len: usize,
    /// Bound on the number of elements enumerated for any group.
    #[arg(long, global = true, env = "CARTDEC_ELEMENT_CAP")]
    element_cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = CheckLevel::Full)]
    check_level: CheckLevel,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "2sim")]
    TwoSim,
    #[value(name = "2nsim")]
    TwoNsim,
    #[value(name = "1s")]
    OneS,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining equations, invariance and transitivity.
    Verify { file: String },
    /// Classify the system and check the structural assertions.
    Classify { file: String },
    /// Build the quotient system and check the quotient action suite.
    Quotient { file: String },
    /// Run every property suite applicable to the class.
    Properties { file: String },
    /// Print the graph attached to the system.
    ExtractGraph { file: String },
    /// Build a system from the file's construction request.
    Construct { kind: Kind, file: String },
    /// Enumerate the subgroup interval and all systems in it.
    Oracle { file: String },
    /// Print a bundled instance file.
    Demo { name: String },
}

fn read(path: &str) -> Result<String, InputError> {
    let mut text = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    r.map_err(|e| InputError {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    Ok(text)
}

fn run(cli: &Cli) -> Outcome {
    let opts = Options {
        max_len: cli.max_len,
        element_cap: cli.element_cap,
        check_level: cli.check_level,
    };
    let (name, file) = match &cli.command {
        Command::Demo { name } => return commands::demo(name),
        Command::Verify { file } => ("verify", file),
        Command::Classify { file } => ("classify", file),
        Command::Quotient { file } => ("quotient", file),
        Command::Properties { file } => ("properties", file),
        Command::ExtractGraph { file } => ("extract-graph", file),
        Command::Construct { file, .. } => ("construct", file),
        Command::Oracle { file } => ("oracle", file),
    };
    let loaded = match read(file).and_then(|t| format::load(&t, opts.element_cap)) {
        Ok(l) => l,
        Err(e) => return input_failure(name, &e),
    };
    let r = match &cli.command {
        Command::Verify { .. } => commands::verify(&loaded, &opts),
        Command::Classify { .. } => commands::classify(&loaded, &opts),
        Command::Quotient { .. } => commands::quotient(&loaded, &opts),
        Command::Properties { .. } => commands::properties(&loaded, &opts),
        Command::ExtractGraph { .. } => commands::extract_graph(&loaded, &opts),
        Command::Construct { kind, .. } => {
            let k = match kind {
                Kind::TwoSim => "2sim",
                Kind::TwoNsim => "2nsim",
                Kind::OneS => "1s",
            };
            commands::construct(k, &loaded, &opts)
        }
        Command::Oracle { .. } => commands::run_oracle(&loaded, &opts),
        Command::Demo { .. } => unreachable!("handled above"),
    };
    finish(name, r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    if cli.json || matches!(cli.command, Command::Demo { .. }) {
        println!("{}", out.json());
    } else {
        print!("{}", out.text());
        println!();
        println!("{}", out.json());
    }
    ExitCode::from(out.exit)
}
