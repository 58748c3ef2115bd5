use clap::{Parser, Subcommand, ValueEnum};
use singlocus_cli::commands::{self, CliError, Outcome};
use singlocus_cli::render;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "singlocus",
    version,
    about = "Exact local analysis of surface singularities"
)]
struct Cli {
    /// Truncation order N: series are handled modulo m^N.
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u32).range(2..=128))]
    order: u32,
    /// Degree bound for the linear-algebra oracles.
    #[arg(long, global = true, default_value_t = 8)]
    degree: u32,
    /// Seed for generic surface equations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize the singularity of F = 0 at the origin.
    Recognize { expr: String },
    /// Tjurina number of F, searching degrees up to --degree.
    Tjurina { expr: String },
    /// Factor xy + f as X * Y, for f in x, y of order at least three.
    FactorXy { expr: String },
    /// n-th root of a unit with a rational n-th root constant term.
    Root {
        expr: String,
        #[arg(long, short)]
        n: u32,
    },
    /// Intersect two ideals "(a, b)" and "(c, d)" with d in (a, b).
    Intersect { first: String, second: String },
    /// Predicted singularity and class images of a configuration (JSON).
    ScenarioPredict { config: String },
    /// Check a configuration on a seeded generic surface, or a whole
    /// manifest ("builtin" or a file) with --manifest.
    ScenarioCrosscheck {
        #[arg(required_unless_present = "manifest")]
        config: Option<String>,
        #[arg(long, conflicts_with = "config")]
        manifest: Option<String>,
    },
    /// Local class of the curve "(g1, g2)" on F = 0.
    CurveClass {
        expr: String,
        #[arg(long)]
        curve: String,
    },
    /// Picard group from a problem file.
    Picard {
        #[arg(long)]
        input: String,
    },
}

fn run(cli: &Cli) -> Outcome {
    let (order, degree) = (cli.order, cli.degree);
    match &cli.command {
        Command::Recognize { expr } => commands::recognize_cmd(expr, order),
        Command::Tjurina { expr } => commands::tjurina_cmd(expr, order, degree),
        Command::FactorXy { expr } => commands::factor_xy_cmd(expr, order),
        Command::Root { expr, n } => commands::root_cmd(expr, *n, order),
        Command::Intersect { first, second } => {
            commands::intersect_cmd(first, second, order, degree)
        }
        Command::ScenarioPredict { config } => commands::predict_cmd(config),
        Command::ScenarioCrosscheck {
            config: Some(c), ..
        } => commands::crosscheck_cmd(c, cli.seed, order),
        Command::ScenarioCrosscheck {
            manifest: Some(m), ..
        } => commands::crosscheck_manifest_cmd(m),
        Command::ScenarioCrosscheck { .. } => {
            Err(CliError::invalid("need a configuration or --manifest"))
        }
        Command::CurveClass { expr, curve } => commands::curve_class_cmd(expr, curve, order),
        Command::Picard { input } => commands::picard_cmd(input),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok((value, code)) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("serializable")
                ),
                Format::Text => print!("{}", render::render(&value)),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}
