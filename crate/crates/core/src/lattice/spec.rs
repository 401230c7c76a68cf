//! Symbolic frequencies and the frequency-file format.
//!
//! ```text
//! # one frequency per line
//! log 2
//! sqrt 5
//! dec 1.6180339887
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::precise::Fixed;
use super::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum FrequencyKind {
    /// Natural logarithm of an integer `>= 2`.
    Log(u64),
    /// Square root of a non-square integer `>= 2`.
    Sqrt(u64),
    /// Decimal literal, parsed exactly at the evaluation precision.
    Decimal(String),
}

impl fmt::Display for FrequencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyKind::Log(n) => write!(f, "log {n}"),
            FrequencyKind::Sqrt(n) => write!(f, "sqrt {n}"),
            FrequencyKind::Decimal(s) => write!(f, "dec {s}"),
        }
    }
}

impl FromStr for FrequencyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split_whitespace();
        let (Some(tag), Some(payload), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("expected `<log|sqrt|dec> <value>`, got {s:?}"));
        };
        let int = |p: &str| p.parse::<u64>().map_err(|_| format!("expected an integer, got {p:?}"));
        match tag {
            "log" => Ok(FrequencyKind::Log(int(payload)?)),
            "sqrt" => Ok(FrequencyKind::Sqrt(int(payload)?)),
            "dec" => Ok(FrequencyKind::Decimal(payload.to_string())),
            other => Err(format!("unknown frequency kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencySpec {
    pub kind: FrequencyKind,
    pub precision: u32,
}

fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|c| c.checked_mul(c) == Some(n))
}

impl FrequencySpec {
    pub fn new(kind: FrequencyKind, precision: u32) -> Result<Self, LatticeError> {
        if precision < 16 {
            return Err(LatticeError::InvalidSpec(format!(
                "precision {precision} is below 16 bits"
            )));
        }
        match &kind {
            FrequencyKind::Log(n) if *n < 2 => {
                return Err(LatticeError::InvalidSpec(format!("log payload must be >= 2, got {n}")))
            }
            FrequencyKind::Sqrt(n) if *n < 2 || is_square(*n) => {
                return Err(LatticeError::InvalidSpec(format!(
                    "sqrt payload must be a non-square >= 2, got {n}"
                )))
            }
            FrequencyKind::Decimal(s) => {
                Fixed::parse_decimal(s, precision).map_err(LatticeError::InvalidSpec)?;
            }
            _ => {}
        }
        Ok(Self { kind, precision })
    }

    pub fn evaluate(&self) -> Fixed {
        match &self.kind {
            FrequencyKind::Log(n) => Fixed::ln_int(*n, self.precision),
            FrequencyKind::Sqrt(n) => Fixed::sqrt_int(*n, self.precision),
            FrequencyKind::Decimal(s) => {
                Fixed::parse_decimal(s, self.precision).expect("validated on construction")
            }
        }
    }
}

/// Parses a frequency file; errors carry the 1-based line number.
pub fn parse_frequency_file(text: &str) -> Result<Vec<FrequencyKind>, LatticeError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let kind = content.parse::<FrequencyKind>().map_err(|message| LatticeError::Parse {
            line: i + 1,
            message,
        })?;
        out.push(kind);
    }
    if out.is_empty() {
        return Err(LatticeError::Parse {
            line: 0,
            message: "no frequencies found".into(),
        });
    }
    Ok(out)
}
