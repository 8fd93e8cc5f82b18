use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::error::{Error, Result};
use crate::series::{to_decimal, Precision};

/// Point at which a summed series is evaluated: a finite coupling or the
/// strong-coupling limit.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    Finite(Float),
    Infinite,
}

impl Coupling {
    pub fn finite(value: Float) -> Self {
        Coupling::Finite(value)
    }

    /// Parses `inf`/`infinity`/`∞` or a decimal value.
    pub fn parse(text: &str, prec: Precision) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(Coupling::Infinite),
            other => Ok(Coupling::Finite(prec.parse(other)?)),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Coupling::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Float> {
        match self {
            Coupling::Finite(g) => Some(g),
            Coupling::Infinite => None,
        }
    }

    /// Rejects negative and NaN couplings.
    pub fn check_non_negative(&self) -> Result<()> {
        if let Coupling::Finite(g) = self {
            if g.is_nan() || g.is_sign_negative() && !g.is_zero() {
                return Err(Error::domain(format!(
                    "coupling must be >= 0, got {}",
                    g.to_f64()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Finite(g) => write!(f, "{}", to_decimal(g, 20)),
            Coupling::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Coupling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Coupling::parse(s, Precision::default())
    }
}
