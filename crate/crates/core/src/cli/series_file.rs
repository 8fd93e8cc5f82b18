//! TOML series files.
//!
//! ```toml
//! name = "alternating factorial"
//! variable = "g"
//! coefficients = ["1", "-1", "2", "-6", "24"]
//!
//! [large_order]
//! A = "1"
//! b = "0"
//! ```
//!
//! or, instead of `coefficients`, a built-in generator:
//!
//! ```toml
//! name = "quartic integral"
//! variable = "g"
//! [generator]
//! kind = "d0"
//! order = 40
//! ```

use std::path::Path;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{anharmonic_ground_coeffs, d0_partition_coeffs, rg_series};
use crate::series::{PowerSeries, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    D0,
    Anharmonic,
    RgBeta,
    RgGammaInv,
    RgEta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub order: usize,
}

/// `f_k ~ (-1)^k k^b k! / A^k`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LargeOrder {
    #[serde(rename = "A")]
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub name: String,
    #[serde(default = "default_variable")]
    pub variable: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub large_order: Option<LargeOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
}

fn default_variable() -> String {
    "g".into()
}

impl SeriesFile {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let file: SeriesFile = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let line = text[..span.start].matches('\n').count() + 1;
                    format!("{origin}:{line}")
                }
                None => origin.to_string(),
            };
            Error::Parse {
                location,
                message: e.message().to_string(),
            }
        })?;
        file.validate(origin)?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text, &path.display().to_string())
    }

    fn validate(&self, origin: &str) -> Result<()> {
        let field_error = |field: &str, message: String| Error::Parse {
            location: format!("{origin}: {field}"),
            message,
        };
        match (&self.coefficients, &self.generator) {
            (Some(_), Some(_)) => Err(field_error(
                "coefficients/generator",
                "give either coefficients or a generator, not both".into(),
            )),
            (None, None) => Err(field_error(
                "coefficients/generator",
                "one of coefficients or generator is required".into(),
            )),
            (Some(c), None) if c.is_empty() => {
                Err(field_error("coefficients", "at least one coefficient is required".into()))
            }
            (None, Some(g)) if g.kind.max_order().is_some_and(|m| g.order > m) => Err(field_error(
                "generator.order",
                format!(
                    "{:?} is known through order {}, asked for {}",
                    g.kind,
                    g.kind.max_order().unwrap_or(0),
                    g.order
                ),
            )),
            _ => Ok(()),
        }
    }

    /// Coefficients at working precision.
    pub fn series(&self, prec: Precision) -> Result<PowerSeries> {
        let s = match (&self.coefficients, &self.generator) {
            (Some(c), _) => {
                let values = c
                    .iter()
                    .enumerate()
                    .map(|(i, text)| {
                        prec.parse(text).map_err(|e| Error::Parse {
                            location: format!("coefficients[{i}]"),
                            message: e.to_string(),
                        })
                    })
                    .collect::<Result<Vec<Float>>>()?;
                PowerSeries::new(values, self.variable.clone())?
            }
            (None, Some(g)) => g.kind.generate(g.order, prec)?.with_var(self.variable.clone()),
            (None, None) => unreachable!("validated on load"),
        };
        Ok(s)
    }

    /// `a = 1/A` from the large-order data, when present.
    pub fn singularity_a(&self, prec: Precision) -> Result<Option<Float>> {
        match &self.large_order {
            Some(lo) => {
                let a = prec.parse(&lo.a).map_err(|e| Error::Parse {
                    location: "large_order.A".into(),
                    message: e.to_string(),
                })?;
                if a <= 0 {
                    return Err(Error::Parse {
                        location: "large_order.A".into(),
                        message: "A must be positive".into(),
                    });
                }
                Ok(Some(a.recip()))
            }
            None => Ok(None),
        }
    }
}

impl GeneratorKind {
    /// Highest order a generator knows, `None` when unbounded.
    pub fn max_order(self) -> Option<usize> {
        match self {
            GeneratorKind::D0 | GeneratorKind::Anharmonic => None,
            GeneratorKind::RgBeta | GeneratorKind::RgGammaInv | GeneratorKind::RgEta => Some(7),
        }
    }

    pub fn generate(self, order: usize, prec: Precision) -> Result<PowerSeries> {
        Ok(match self {
            GeneratorKind::D0 => d0_partition_coeffs(order, prec),
            GeneratorKind::Anharmonic => anharmonic_ground_coeffs(order, prec),
            GeneratorKind::RgBeta => rg_series(prec).beta.truncate(order),
            GeneratorKind::RgGammaInv => rg_series(prec).gamma_inv.truncate(order),
            GeneratorKind::RgEta => rg_series(prec).eta.truncate(order),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_file() {
        let f = SeriesFile::from_toml(
            "name = \"t\"\ncoefficients = [\"1\", \"-1/3\", \"2.5e-1\"]\n",
            "t.toml",
        )
        .unwrap();
        assert_eq!(f.variable, "g");
        let s = f.series(Precision::default()).unwrap();
        assert_eq!(s.order(), 2);
        assert!((s.coeff(1).to_f64() + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn generator_file() {
        let f = SeriesFile::from_toml(
            "name = \"d0\"\nvariable = \"g\"\n[generator]\nkind = \"d0\"\norder = 5\n",
            "d0.toml",
        )
        .unwrap();
        let s = f.series(Precision::default()).unwrap();
        assert_eq!(s.order(), 5);
        assert_eq!(s.coeff(1).to_f64(), -0.125);
    }

    #[test]
    fn both_sources_rejected() {
        let err = SeriesFile::from_toml(
            "name = \"x\"\ncoefficients = [\"1\"]\n[generator]\nkind = \"d0\"\norder = 3\n",
            "x.toml",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn syntax_error_names_the_line() {
        let err = SeriesFile::from_toml("name = \"x\"\ncoefficients = [1, \n", "bad.toml").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.starts_with("bad.toml:"), "{location}"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn bad_coefficient_names_the_field() {
        let f = SeriesFile::from_toml("name = \"x\"\ncoefficients = [\"1\", \"abc\"]\n", "x.toml").unwrap();
        match f.series(Precision::default()).unwrap_err() {
            Error::Parse { location, .. } => assert_eq!(location, "coefficients[1]"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn rg_order_is_bounded() {
        let err = SeriesFile::from_toml(
            "name = \"b\"\n[generator]\nkind = \"rg_beta\"\norder = 9\n",
            "b.toml",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
