use serde::{Deserialize, Serialize};

use super::{CoeffError, Field};
use crate::parse;

/// Serializable description of a coefficient field.
///
/// JSON forms: `{"kind":"Q"}`, `{"kind":"Fp","p":1000003}` and
/// `{"kind":"ext","base":{...},"minpoly":"t^2+1"}` with an optional
/// `"gen"` naming the adjoined root (default `t`, or `s` over an extension).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldConfig {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    PrimeField { p: u64 },
    #[serde(rename = "ext")]
    Extension {
        base: Box<FieldConfig>,
        minpoly: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gen: Option<String>,
    },
}

impl FieldConfig {
    pub fn extension(base: FieldConfig, minpoly: &str, gen: &str) -> FieldConfig {
        FieldConfig::Extension {
            base: Box::new(base),
            minpoly: minpoly.to_string(),
            gen: Some(gen.to_string()),
        }
    }

    /// `Q[i]/(i^2+1)`.
    pub fn gaussian() -> FieldConfig {
        FieldConfig::extension(FieldConfig::Rationals, "i^2+1", "i")
    }

    pub fn build(&self) -> Result<Field, CoeffError> {
        match self {
            FieldConfig::Rationals => Ok(Field::rationals()),
            FieldConfig::PrimeField { p } => Field::prime(*p),
            FieldConfig::Extension { base, minpoly, gen } => {
                let base = base.build()?;
                let gen = match gen {
                    Some(g) => g.clone(),
                    None if base.base().is_some() => "s".into(),
                    None => "t".into(),
                };
                if parse::RESERVED.contains(&gen.as_str()) || base.generator_names().contains(&gen) {
                    return Err(CoeffError::BadModulus(format!(
                        "generator name {gen} is already in use"
                    )));
                }
                let poly = parse::parse_univariate(minpoly, &base, &gen)
                    .map_err(|e| CoeffError::Parse(e.to_string()))?;
                Field::extension(&base, poly, &gen)
            }
        }
    }

    /// Inverse of [`FieldConfig::build`].
    pub fn of(field: &Field) -> FieldConfig {
        match (field.base(), field.prime_modulus()) {
            (Some(base), _) => {
                let gen = field.generator_name().unwrap();
                FieldConfig::Extension {
                    base: Box::new(FieldConfig::of(base)),
                    minpoly: super::fmt_dense(base, field.modulus().unwrap(), gen),
                    gen: Some(gen.to_string()),
                }
            }
            (None, Some(p)) => FieldConfig::PrimeField { p },
            (None, None) => FieldConfig::Rationals,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let cfg: FieldConfig =
            serde_json::from_str(r#"{"kind":"ext","base":{"kind":"Q"},"minpoly":"t^2+1"}"#).unwrap();
        let f = cfg.build().unwrap();
        assert_eq!(f.describe(), "Q[t]/(t^2+1)");
        let again = FieldConfig::of(&f);
        assert_eq!(again.build().unwrap(), f);
        let fp: FieldConfig = serde_json::from_str(r#"{"kind":"Fp","p":1000003}"#).unwrap();
        assert_eq!(fp.build().unwrap().characteristic(), 1_000_003);
    }

    #[test]
    fn nested_generators() {
        let cfg = FieldConfig::Extension {
            base: Box::new(FieldConfig::gaussian()),
            minpoly: "s^2-2".into(),
            gen: None,
        };
        let f = cfg.build().unwrap();
        assert_eq!(f.generator_names(), vec!["s".to_string(), "i".to_string()]);
        assert_eq!(f.absolute_degree(), 4);
    }

    #[test]
    fn rejects_bad_minpoly() {
        let bad = FieldConfig::extension(FieldConfig::Rationals, "t^2+2*t+1", "t");
        assert!(matches!(bad.build(), Err(CoeffError::BadModulus(_))));
        let bad = FieldConfig::extension(FieldConfig::Rationals, "x^2+1", "x");
        assert!(bad.build().is_err());
        assert!(FieldConfig::PrimeField { p: 91 }.build().is_err());
    }
}
