//! Library side of the `ballgrid` subcommands. Each command returns its full
//! output; the binary only routes it to files, stdout and stderr.

use std::path::PathBuf;

use crate::error::Error;
use crate::map::{ball_to_oct, oct_to_ball, BallGeometry, CartesianPoint, OctPoint};
use crate::mra::{
    analyze_full, l2_distance, synthesize_full, threshold_compress, FilterBank, FineSignal,
};

use super::coeffs::{level_for_len, parse_samples, resolve_matrix, write_samples, CoefficientFile};
use super::mesh_export::{
    ball_grid, octahedron_grid, surfaces_to_obj, surfaces_to_vtk, tet_mesh_to_obj, tet_mesh_to_vtk,
    MeshFormat, Side,
};
use super::points::{parse_points, write_points};
use super::verify::{run_verify, VerifyOptions};
use super::{format_num, read_input, CliError, CliResult};

/// Largest level `grid` exports unless raised explicitly.
pub const DEFAULT_MAX_GRID_LEVEL: u32 = 6;

/// What a command produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    /// Main payload, for `--output` or standard output.
    pub data: String,
    /// Secondary text for standard output when `data` goes to a file.
    pub report: Option<String>,
    /// Warnings for standard error.
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
pub struct MapArgs {
    pub direction: Direction,
    pub input: Option<PathBuf>,
    pub radius: f64,
}

pub fn cmd_map(args: &MapArgs) -> CliResult<CommandOutput> {
    let geo = BallGeometry::new(args.radius)?;
    let file = parse_points(&read_input(args.input.as_deref())?)?;
    let mut out = Vec::with_capacity(file.rows.len());
    let mut warnings = Vec::new();
    for (line, p) in &file.rows {
        let mapped = match args.direction {
            Direction::Forward => {
                ball_to_oct(&CartesianPoint::from(*p), &geo).map(OctPoint::to_array)
            }
            Direction::Inverse => {
                oct_to_ball(&OctPoint::from(*p), &geo).map(CartesianPoint::to_array)
            }
        };
        match mapped {
            Ok(q) => out.push(q),
            Err(e @ (Error::PointOutsideBall { .. } | Error::PointOutsideOctahedron { .. })) => {
                warnings.push(format!("warning: line {line}: {e}; row skipped"))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let header: Option<&[&str]> = file.header.as_ref().map(|_| match args.direction {
        Direction::Forward => &["X", "Y", "Z"][..],
        Direction::Inverse => &["x", "y", "z"][..],
    });
    Ok(CommandOutput {
        data: write_points(header, &out),
        warnings,
        ..Default::default()
    })
}

#[derive(Debug, Clone)]
pub struct GridArgs {
    pub level: u32,
    pub side: Side,
    pub format: MeshFormat,
    /// Edge subdivisions per face for curved ball cells.
    pub n: usize,
    pub radius: f64,
    pub max_level: u32,
}

pub fn cmd_grid(args: &GridArgs) -> CliResult<CommandOutput> {
    let geo = BallGeometry::new(args.radius)?;
    if args.level > args.max_level {
        return Err(CliError::invalid(format!(
            "level {} exceeds the maximum {} (raise it with --max-level)",
            args.level, args.max_level
        )));
    }
    if args.n == 0 {
        return Err(CliError::invalid("--n must be at least 1"));
    }
    let data = match args.side {
        Side::Oct => {
            let mesh = octahedron_grid(args.level, &geo);
            match args.format {
                MeshFormat::Obj => tet_mesh_to_obj(&mesh, args.level),
                MeshFormat::Vtk => tet_mesh_to_vtk(&mesh),
            }
        }
        Side::Ball => {
            let meshes = ball_grid(args.level, args.n, &geo)?;
            match args.format {
                MeshFormat::Obj => surfaces_to_obj(&meshes, args.level),
                MeshFormat::Vtk => surfaces_to_vtk(&meshes),
            }
        }
    };
    Ok(CommandOutput {
        data,
        ..Default::default()
    })
}

pub fn cmd_verify(opts: &VerifyOptions) -> CliResult<CommandOutput> {
    let report = run_verify(opts)?;
    Ok(CommandOutput {
        data: report.render(),
        exit_code: if report.passed() { 0 } else { 1 },
        ..Default::default()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Analyze,
    Synthesize,
}

#[derive(Debug, Clone)]
pub struct TransformArgs {
    pub action: Action,
    pub input: Option<PathBuf>,
    /// Filter for T cells (and M cells unless `m_matrix` is given).
    pub matrix: Option<String>,
    pub m_matrix: Option<String>,
    pub level: Option<u32>,
    pub radius: f64,
}

fn filter_bank(matrix: Option<&str>, m_matrix: Option<&str>) -> CliResult<FilterBank> {
    let t = resolve_matrix(matrix.unwrap_or("haar"))?;
    Ok(match m_matrix {
        Some(m) => FilterBank::per_kind(t, resolve_matrix(m)?),
        None => FilterBank::uniform(t),
    })
}

/// Reads a fine signal, checking its length against `level` when given.
fn read_signal(
    input: Option<&std::path::Path>,
    level: Option<u32>,
    radius: f64,
) -> CliResult<FineSignal> {
    let geo = BallGeometry::new(radius)?;
    let values = parse_samples(&read_input(input)?)?;
    let n = values.len();
    let level = match (level, level_for_len(n)) {
        (Some(j), _) => j,
        (None, Some(j)) => j,
        (None, None) => {
            return Err(CliError::invalid(format!(
                "{n} samples is not 4·8^J for any level J"
            )))
        }
    };
    Ok(FineSignal::new(level, geo, values)?)
}

pub fn cmd_transform(args: &TransformArgs) -> CliResult<CommandOutput> {
    match args.action {
        Action::Analyze => {
            let bank = filter_bank(args.matrix.as_deref(), args.m_matrix.as_deref())?;
            let sig = read_signal(args.input.as_deref(), args.level, args.radius)?;
            let tree = analyze_full(&sig, &bank);
            Ok(CommandOutput {
                data: CoefficientFile::new(&tree, &bank).to_json(),
                ..Default::default()
            })
        }
        Action::Synthesize => {
            let file = CoefficientFile::from_json(&read_input(args.input.as_deref())?)?;
            if let Some(j) = args.level.filter(|j| *j != file.level) {
                return Err(Error::LevelMismatch(format!(
                    "--level {j} but the coefficient file has level {}",
                    file.level
                ))
                .into());
            }
            let bank = file.filters()?;
            if args.matrix.is_some() || args.m_matrix.is_some() {
                let asked = filter_bank(args.matrix.as_deref(), args.m_matrix.as_deref())?;
                if asked != bank {
                    return Err(CliError::invalid(
                        "--matrix differs from the filters recorded in the coefficient file",
                    ));
                }
            }
            let sig = synthesize_full(&file.tree()?, &bank)?;
            Ok(CommandOutput {
                data: write_samples(&sig.values),
                ..Default::default()
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompressArgs {
    pub input: Option<PathBuf>,
    pub keep: f64,
    pub matrix: Option<String>,
    pub m_matrix: Option<String>,
    pub level: Option<u32>,
    pub radius: f64,
}

/// Thresholds the wavelet coefficients of a sample file. `data` holds the
/// reconstructed samples and `report` the statistics.
pub fn cmd_compress(args: &CompressArgs) -> CliResult<CommandOutput> {
    if !(args.keep > 0.0 && args.keep <= 1.0) {
        return Err(CliError::invalid(format!(
            "--keep must be in (0, 1], got {}",
            args.keep
        )));
    }
    let bank = filter_bank(args.matrix.as_deref(), args.m_matrix.as_deref())?;
    let sig = read_signal(args.input.as_deref(), args.level, args.radius)?;
    let tree = analyze_full(&sig, &bank);
    let (kept, stats) = threshold_compress(&tree, args.keep);
    let rec = synthesize_full(&kept, &bank)?;
    let recomputed = l2_distance(&rec.values, &sig.values);
    let rel = if sig.norm() > 0.0 {
        stats.l2_error / sig.norm()
    } else {
        0.0
    };
    let report = format!(
        "level={}\nmatrix={}\nkeep={}\ncoefficients={}\nretained={}\nretained_details={}\nl2_error={}\nrelative_error={}\nreconstruction_error={}\n",
        sig.level,
        bank.t.label(),
        format_num(args.keep),
        stats.total,
        stats.retained_total,
        stats.retained_details,
        format_num(stats.l2_error),
        format_num(rel),
        format_num(recomputed),
    );
    Ok(CommandOutput {
        data: write_samples(&rec.values),
        report: Some(report),
        ..Default::default()
    })
}
