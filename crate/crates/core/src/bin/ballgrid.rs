use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ballgrid::io::commands::{
    cmd_compress, cmd_grid, cmd_map, cmd_transform, cmd_verify, Action, CommandOutput,
    CompressArgs, Direction, GridArgs, MapArgs, TransformArgs, DEFAULT_MAX_GRID_LEVEL,
};
use ballgrid::io::mesh_export::{MeshFormat, Side};
use ballgrid::io::verify::VerifyOptions;
use ballgrid::io::{write_output, CliError};

/// Volume-preserving ball/octahedron map, equal-volume grids and Haar-type
/// wavelets on the ball.
#[derive(Debug, Parser)]
#[command(name = "ballgrid", version)]
struct Cli {
    /// Ball radius r; the octahedron half-diagonal is r·π^(1/3).
    #[arg(long, global = true, default_value_t = 1.0)]
    radius: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Map CSV points between the ball and the octahedron.
    Map(MapCmd),
    /// Export the level-j grid of the octahedron or the ball as a mesh.
    Grid(GridCmd),
    /// Run the invariant suite and print a PASS/FAIL report.
    Verify(VerifyCmd),
    /// Wavelet analysis of samples or synthesis from a coefficient file.
    Transform(TransformCmd),
    /// Keep the largest wavelet coefficients and report the error.
    Compress(CompressCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Inverse,
}

#[derive(Debug, Args)]
struct MapCmd {
    #[arg(long, value_enum, default_value = "forward")]
    direction: DirectionArg,
    /// Shorthand for --direction inverse.
    #[arg(long, conflicts_with = "direction")]
    inverse: bool,
    /// CSV file with x,y,z (or X,Y,Z) rows; stdin when omitted.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Oct,
    Ball,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Obj,
    Vtk,
}

#[derive(Debug, Args)]
struct GridCmd {
    #[arg(long, short, default_value_t = 1)]
    level: u32,
    #[arg(long, value_enum, default_value = "oct")]
    side: SideArg,
    #[arg(long, value_enum, default_value = "vtk")]
    format: FormatArg,
    /// Edge subdivisions per face of a curved ball cell.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_GRID_LEVEL)]
    max_level: u32,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyCmd {
    /// Deepest grid level checked; 0 runs structural checks only.
    #[arg(long, default_value_t = 3)]
    depth: u32,
    /// Monte Carlo sample count; scientific notation such as 1e6 is accepted.
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ActionArg {
    Analyze,
    Synthesize,
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// haar, sym+, sym-, tensor or a file holding an 8x8 matrix.
    #[arg(long, short)]
    matrix: Option<String>,
    /// Separate filter for M-cell parents.
    #[arg(long)]
    m_matrix: Option<String>,
    /// Fine level J; inferred from the sample count when omitted.
    #[arg(long, short)]
    level: Option<u32>,
}

#[derive(Debug, Args)]
struct TransformCmd {
    #[arg(value_enum)]
    action: ActionArg,
    #[command(flatten)]
    filters: FilterArgs,
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompressCmd {
    /// Fraction of all coefficients to keep, in (0, 1].
    #[arg(long, short)]
    keep: f64,
    #[command(flatten)]
    filters: FilterArgs,
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Where to write the reconstructed samples.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(format!("not a non-negative integer: {s:?}"))
    }
}

fn run(cli: Cli) -> Result<(CommandOutput, Option<PathBuf>), CliError> {
    let radius = cli.radius;
    Ok(match cli.command {
        Command::Map(c) => {
            let direction = match (c.inverse, c.direction) {
                (true, _) | (_, DirectionArg::Inverse) => Direction::Inverse,
                _ => Direction::Forward,
            };
            let args = MapArgs {
                direction,
                input: c.input,
                radius,
            };
            (cmd_map(&args)?, c.output)
        }
        Command::Grid(c) => {
            let args = GridArgs {
                level: c.level,
                side: match c.side {
                    SideArg::Oct => Side::Oct,
                    SideArg::Ball => Side::Ball,
                },
                format: match c.format {
                    FormatArg::Obj => MeshFormat::Obj,
                    FormatArg::Vtk => MeshFormat::Vtk,
                },
                n: c.n,
                radius,
                max_level: c.max_level,
            };
            (cmd_grid(&args)?, c.output)
        }
        Command::Verify(c) => {
            let opts = VerifyOptions {
                depth: c.depth,
                samples: c.samples,
                seed: c.seed,
                radius,
            };
            (cmd_verify(&opts)?, c.output)
        }
        Command::Transform(c) => {
            let args = TransformArgs {
                action: match c.action {
                    ActionArg::Analyze => Action::Analyze,
                    ActionArg::Synthesize => Action::Synthesize,
                },
                input: c.input,
                matrix: c.filters.matrix,
                m_matrix: c.filters.m_matrix,
                level: c.filters.level,
                radius,
            };
            (cmd_transform(&args)?, c.output)
        }
        Command::Compress(c) => {
            let args = CompressArgs {
                input: c.input,
                keep: c.keep,
                matrix: c.filters.matrix,
                m_matrix: c.filters.m_matrix,
                level: c.filters.level,
                radius,
            };
            (cmd_compress(&args)?, c.output)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(cli).and_then(|(out, path)| {
        for w in &out.warnings {
            eprintln!("{w}");
        }
        match &out.report {
            // Samples go only to an explicit file; the report goes to stdout.
            Some(report) => {
                if path.is_some() {
                    write_output(path.as_deref(), out.data.as_bytes())?;
                }
                write_output(None, report.as_bytes())?;
            }
            None => write_output(path.as_deref(), out.data.as_bytes())?,
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
