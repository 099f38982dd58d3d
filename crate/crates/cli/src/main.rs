use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weakval::pointer::PointerGrid;
use weakval_cli::{cmd_eval, cmd_hardy, cmd_lattice, cmd_simulate, cmd_threebox, CliResult, OutputTable};

#[derive(Parser, Debug)]
#[command(name = "weakval", version, about = "Weak values of pre- and post-selected systems")]
struct Args {
    /// Commutator tolerance used for classification.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two-particle interferometer fixture.
    Hardy,
    /// Three-box fixture.
    Threebox,
    /// Evaluate a JSON scenario file.
    Eval { path: String },
    /// Simulate a von Neumann pointer and extrapolate the weak value.
    Simulate {
        /// `hardy`, `threebox` or a scenario file.
        scenario: String,
        #[arg(long)]
        observable: String,
        /// Coupling in units of the pointer width; repeatable.
        #[arg(long = "g", allow_negative_numbers = true, default_values_t = [0.05, 0.02, 0.01])]
        g: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        grid_points: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Lattice diagnostics for two projector observables (`@pre` and `@post` allowed).
    Lattice {
        scenario: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
}

fn run(args: &Args) -> CliResult<OutputTable> {
    match &args.command {
        Command::Hardy => cmd_hardy(args.tol),
        Command::Threebox => cmd_threebox(args.tol),
        Command::Eval { path } => cmd_eval(path, args.tol),
        Command::Simulate {
            scenario,
            observable,
            g,
            grid_points,
            sigma,
        } => {
            let grid = PointerGrid::with_points(*grid_points, *sigma)?;
            cmd_simulate(scenario, observable, g, &grid)
        }
        Command::Lattice { scenario, p, q } => cmd_lattice(scenario, p, q, args.tol),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(table) => {
            match args.format {
                Format::Table => print!("{}", table.render_table()),
                Format::Csv => print!("{}", table.render_csv()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
