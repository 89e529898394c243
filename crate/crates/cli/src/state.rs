//! State specifications: built-in names or JSON state files.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qfi_gme::states::{ghz, ghz_w_mix, w3, white_noise_mix};
use qfi_gme::{ComplexMatrix, DensityMatrix, DimensionSpec, C64};

use crate::error::{usage, CliError, Result};

/// A state named on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Ghz { d: usize },
    W3,
    GhzWMix { x: f64, y: f64 },
    WhiteNoiseGhz { d: usize, p: f64 },
    WhiteNoiseW3 { p: f64 },
    MaximallyMixed { dims: DimensionSpec },
    File(String),
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("cannot parse {what} from {s:?}")))
}

/// Parses `2` as `2x2x2`, or an explicit `2x3x2`.
pub fn parse_dims(s: &str) -> Result<DimensionSpec> {
    let parts: Vec<&str> = s.split('x').collect();
    let dims = match parts.as_slice() {
        [d] => DimensionSpec::uniform(number(d, "dimension")?)?,
        [a, b, c] => DimensionSpec::new(
            number(a, "dimension")?,
            number(b, "dimension")?,
            number(c, "dimension")?,
        )?,
        _ => return Err(usage(format!("dims {s:?} must look like 3 or 2x3x2"))),
    };
    Ok(dims)
}

impl StateSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let spec = match head {
            "ghz" => StateSpec::Ghz {
                d: number(rest, "d")?,
            },
            "w3" if rest.is_empty() => StateSpec::W3,
            "ghz-w-mix" => {
                let (x, y) = rest
                    .split_once(',')
                    .ok_or_else(|| usage("ghz-w-mix expects ghz-w-mix:x,y"))?;
                StateSpec::GhzWMix {
                    x: number(x, "x")?,
                    y: number(y, "y")?,
                }
            }
            "white-noise" => match rest.split(':').collect::<Vec<_>>().as_slice() {
                ["ghz", d, p] => StateSpec::WhiteNoiseGhz {
                    d: number(d, "d")?,
                    p: number(p, "p")?,
                },
                ["w3", p] => StateSpec::WhiteNoiseW3 { p: number(p, "p")? },
                _ => {
                    return Err(usage(
                        "white-noise expects white-noise:ghz:d:p or white-noise:w3:p",
                    ))
                }
            },
            "maximally-mixed" => StateSpec::MaximallyMixed {
                dims: parse_dims(rest)?,
            },
            _ => StateSpec::File(s.to_string()),
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        let rho = match self {
            StateSpec::Ghz { d } => {
                DensityMatrix::from_pure(&ghz(*d)?, DimensionSpec::uniform(*d)?)?
            }
            StateSpec::W3 => DensityMatrix::from_pure(&w3(), DimensionSpec::qubits())?,
            StateSpec::GhzWMix { x, y } => ghz_w_mix(*x, *y)?,
            StateSpec::WhiteNoiseGhz { d, p } => {
                white_noise_mix(&ghz(*d)?, *p, DimensionSpec::uniform(*d)?)?
            }
            StateSpec::WhiteNoiseW3 { p } => white_noise_mix(&w3(), *p, DimensionSpec::qubits())?,
            StateSpec::MaximallyMixed { dims } => DensityMatrix::maximally_mixed(*dims),
            StateSpec::File(path) => load_state_file(Path::new(path))?,
        };
        Ok(rho)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Ghz { d } => write!(f, "ghz:{d}"),
            StateSpec::W3 => write!(f, "w3"),
            StateSpec::GhzWMix { x, y } => write!(f, "ghz-w-mix:{x},{y}"),
            StateSpec::WhiteNoiseGhz { d, p } => write!(f, "white-noise:ghz:{d}:{p}"),
            StateSpec::WhiteNoiseW3 { p } => write!(f, "white-noise:w3:{p}"),
            StateSpec::MaximallyMixed { dims } => write!(f, "maximally-mixed:{dims}"),
            StateSpec::File(path) => f.write_str(path),
        }
    }
}

/// On-disk state: local dimensions plus the dense matrix as rows of
/// `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: DimensionSpec,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let entries = rho
            .matrix()
            .rows()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            dims: rho.dims(),
            entries,
        }
    }

    pub fn to_density(&self) -> qfi_gme::Result<DensityMatrix> {
        let rows = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        DensityMatrix::new(self.dims, ComplexMatrix::from_rows(rows)?)
    }
}

pub fn load_state_file(path: &Path) -> Result<DensityMatrix> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: display.clone(),
        source,
    })?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::StateFile {
        path: display.clone(),
        message: e.to_string(),
    })?;
    file.to_density().map_err(|e| CliError::StateFile {
        path: display,
        message: e.to_string(),
    })
}
