//! One-parameter state families for scans and comparisons.

use std::fmt;

use qfi_gme::states::{ghz, ghz_w_mix, w3, white_noise_mix};
use qfi_gme::{DensityMatrix, DimensionSpec};

use crate::error::{usage, Result};
use crate::state::parse_dims;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `(1−y) I/8 + y|W⟩⟨W|`
    WNoise,
    /// `(1−p) I/d³ + p|GHZ_d⟩⟨GHZ_d|`
    GhzNoise { d: usize },
    /// GHZ/W/noise mixture with `x` held fixed, varying `y`.
    GhzWMixFixedX(f64),
    /// GHZ/W/noise mixture with `y` held fixed, varying `x`.
    GhzWMixFixedY(f64),
    /// Constant `I/n`; no criterion ever crosses.
    MaximallyMixed { dims: DimensionSpec },
}

pub const FAMILY_HELP: &str =
    "w-noise | ghz-noise:d=N | ghz-w-mix:x=X | ghz-w-mix:y=Y | maximally-mixed[:d=N]";

fn value_of(s: &str, key: &str) -> Option<String> {
    let s = s.trim();
    s.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .map(str::to_string)
        .or_else(|| (!s.contains('=')).then(|| s.to_string()))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| usage(format!("cannot parse {what} from {s:?}")))
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let family = match (head, rest) {
            ("w-noise", "") => Family::WNoise,
            ("ghz-noise", "") => Family::GhzNoise { d: 2 },
            ("ghz-noise", r) => {
                let d = value_of(r, "d").ok_or_else(|| usage("expected ghz-noise:d=N"))?;
                Family::GhzNoise {
                    d: d.parse()
                        .map_err(|_| usage(format!("cannot parse d from {d:?}")))?,
                }
            }
            ("ghz-w-mix", r) => match r.split_once('=') {
                Some(("x", v)) => Family::GhzWMixFixedX(parse_f64(v, "x")?),
                Some(("y", v)) => Family::GhzWMixFixedY(parse_f64(v, "y")?),
                _ => return Err(usage("expected ghz-w-mix:x=X or ghz-w-mix:y=Y")),
            },
            ("maximally-mixed", "") => Family::MaximallyMixed {
                dims: DimensionSpec::qubits(),
            },
            ("maximally-mixed", r) => {
                let d = value_of(r, "d").ok_or_else(|| usage("expected maximally-mixed:d=N"))?;
                Family::MaximallyMixed {
                    dims: parse_dims(&d)?,
                }
            }
            _ => {
                return Err(usage(format!(
                    "unknown family {s:?}; expected one of {FAMILY_HELP}"
                )))
            }
        };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Family::GhzNoise { d } if *d < 2 => Err(usage("ghz-noise needs d >= 2")),
            Family::GhzWMixFixedX(v) | Family::GhzWMixFixedY(v) if !(0.0..=1.0).contains(v) => {
                Err(usage(format!("fixed mixture weight {v} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    pub fn parameter(&self) -> &'static str {
        match self {
            Family::WNoise | Family::GhzWMixFixedX(_) => "y",
            Family::GhzNoise { .. } => "p",
            Family::GhzWMixFixedY(_) => "x",
            Family::MaximallyMixed { .. } => "t",
        }
    }

    /// Largest admissible parameter value.
    pub fn upper(&self) -> f64 {
        match self {
            Family::GhzWMixFixedX(v) | Family::GhzWMixFixedY(v) => 1.0 - v,
            _ => 1.0,
        }
    }

    pub fn dims(&self) -> DimensionSpec {
        match self {
            Family::GhzNoise { d } => DimensionSpec::uniform(*d).expect("validated"),
            Family::MaximallyMixed { dims } => *dims,
            _ => DimensionSpec::qubits(),
        }
    }

    pub fn state(&self, t: f64) -> Result<DensityMatrix> {
        let rho = match self {
            Family::WNoise => white_noise_mix(&w3(), t, DimensionSpec::qubits())?,
            Family::GhzNoise { d } => white_noise_mix(&ghz(*d)?, t, self.dims())?,
            Family::GhzWMixFixedX(x) => ghz_w_mix(*x, t)?,
            Family::GhzWMixFixedY(y) => ghz_w_mix(t, *y)?,
            Family::MaximallyMixed { dims } => DensityMatrix::maximally_mixed(*dims),
        };
        Ok(rho)
    }

    /// Published thresholds of other criteria for this family, as
    /// `(label, value)`. Quoted, never recomputed.
    pub fn literature(&self) -> Vec<(&'static str, f64)> {
        match self {
            Family::WNoise => vec![("positive-map criterion", 0.90)],
            Family::GhzNoise { d: 2 } => vec![("positive-map criterion", 11.0 / 15.0)],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::WNoise => f.write_str("w-noise"),
            Family::GhzNoise { d } => write!(f, "ghz-noise:d={d}"),
            Family::GhzWMixFixedX(x) => write!(f, "ghz-w-mix:x={x}"),
            Family::GhzWMixFixedY(y) => write!(f, "ghz-w-mix:y={y}"),
            Family::MaximallyMixed { dims } => write!(f, "maximally-mixed:d={dims}"),
        }
    }
}
