//! Sample files, filter-matrix files and the JSON coefficient-tree format.
//!
//! A coefficient file looks like
//!
//! ```json
//! {"format":"ballgrid-coefficients","version":1,"radius":1.0,"level":2,
//!  "matrix":"haar","per_kind":false,"coefficients":[8.0, ...]}
//! ```
//!
//! with `coefficients` in flat tree order: the four level-0 scaling
//! coefficients, then for every level the seven wavelet coefficients of each
//! cell in depth-first address order. `m_matrix` names the M-cell filter when
//! it differs from the T-cell one, and custom filters carry their rows in
//! `t_rows` / `m_rows`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::grid::total_cells;
use crate::map::BallGeometry;
use crate::mra::{validate_filter, CoefficientTree, FilterBank, FilterLabel, FilterMatrix};

use super::{format_num, read_input, CliError, CliResult};

pub const COEFF_FORMAT: &str = "ballgrid-coefficients";
pub const COEFF_VERSION: u32 = 1;

/// Parses one value per line; blank lines and `#` comments are skipped.
pub fn parse_samples(text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Parse {
                line: i + 1,
                message: format!("not a finite number: {line:?}"),
            })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(CliError::invalid("sample file contains no values"));
    }
    Ok(out)
}

pub fn write_samples(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&format_num(*v));
        out.push('\n');
    }
    out
}

/// The level `J` with `4 · 8^J = n`, if any.
pub fn level_for_len(n: usize) -> Option<u32> {
    (0..=10).find(|&j| total_cells(j) == n)
}

/// Parses an 8×8 matrix given either as a JSON array of rows or as eight lines
/// of eight numbers separated by whitespace or commas.
pub fn parse_matrix(text: &str) -> CliResult<[[f64; 8]; 8]> {
    let trimmed = text.trim_start();
    let rows: Vec<Vec<f64>> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| CliError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?
    } else {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>().map_err(|_| CliError::Parse {
                        line: i + 1,
                        message: format!("not a number: {s:?}"),
                    })
                })
                .collect::<CliResult<Vec<f64>>>()?;
            rows.push(row);
        }
        rows
    };
    if rows.len() != 8 || rows.iter().any(|r| r.len() != 8) {
        return Err(CliError::invalid(format!(
            "filter matrix must be 8x8, got {} rows with lengths {:?}",
            rows.len(),
            rows.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j])))
}

/// Resolves a `--matrix` argument: a built-in name (`haar`, `sym+`, `sym-`,
/// `tensor`) or the path of a matrix file.
pub fn resolve_matrix(arg: &str) -> CliResult<FilterMatrix> {
    if let Ok(label) = arg.parse::<FilterLabel>() {
        if let Some(m) = label.builtin() {
            return Ok(m);
        }
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::invalid(format!(
            "unknown matrix {arg:?}: expected haar, sym+, sym-, tensor or a matrix file"
        )));
    }
    let rows = parse_matrix(&read_input(Some(path))?)?;
    Ok(validate_filter(rows)?)
}

/// On-disk form of a [`CoefficientTree`] plus the filters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub format: String,
    pub version: u32,
    pub radius: f64,
    pub level: u32,
    pub matrix: FilterLabelName,
    pub per_kind: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_matrix: Option<FilterLabelName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_rows: Option<[[f64; 8]; 8]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_rows: Option<[[f64; 8]; 8]>,
    pub coefficients: Vec<f64>,
}

/// A filter label serialized by its short name (`haar`, `sym+`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FilterLabelName(pub FilterLabel);

impl TryFrom<String> for FilterLabelName {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse().map(FilterLabelName)
    }
}

impl From<FilterLabelName> for String {
    fn from(l: FilterLabelName) -> String {
        l.0.as_str().to_string()
    }
}

impl CoefficientFile {
    pub fn new(tree: &CoefficientTree, bank: &FilterBank) -> Self {
        let custom = |m: &FilterMatrix| (m.label() == FilterLabel::Custom).then(|| *m.rows());
        let per_kind = bank.is_per_kind();
        Self {
            format: COEFF_FORMAT.into(),
            version: COEFF_VERSION,
            radius: tree.geometry.radius(),
            level: tree.level,
            matrix: FilterLabelName(bank.t.label()),
            per_kind,
            m_matrix: per_kind.then_some(FilterLabelName(bank.m.label())),
            t_rows: custom(&bank.t),
            m_rows: if per_kind { custom(&bank.m) } else { None },
            coefficients: tree.to_flat(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let f: Self = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if f.format != COEFF_FORMAT {
            return Err(CliError::invalid(format!(
                "not a coefficient file (format {:?})",
                f.format
            )));
        }
        if f.version != COEFF_VERSION {
            return Err(CliError::invalid(format!(
                "unsupported coefficient file version {}",
                f.version
            )));
        }
        Ok(f)
    }

    fn filter(
        label: FilterLabel,
        rows: Option<[[f64; 8]; 8]>,
        which: &str,
    ) -> CliResult<FilterMatrix> {
        match (label.builtin(), rows) {
            (Some(m), _) => Ok(m),
            (None, Some(r)) => Ok(validate_filter(r)?),
            (None, None) => Err(CliError::invalid(format!(
                "custom {which} filter without rows"
            ))),
        }
    }

    pub fn filters(&self) -> CliResult<FilterBank> {
        let t = Self::filter(self.matrix.0, self.t_rows, "T-cell")?;
        if !self.per_kind {
            return Ok(FilterBank::uniform(t));
        }
        let label = self
            .m_matrix
            .ok_or_else(|| CliError::invalid("per_kind file without m_matrix"))?;
        let m = Self::filter(label.0, self.m_rows, "M-cell")?;
        Ok(FilterBank::per_kind(t, m))
    }

    pub fn tree(&self) -> CliResult<CoefficientTree> {
        let geo = BallGeometry::new(self.radius)?;
        Ok(CoefficientTree::from_flat(
            self.level,
            geo,
            &self.coefficients,
        )?)
    }
}
