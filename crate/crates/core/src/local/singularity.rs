//! Singularity type labels and their verification against local reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LocalReport;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SingularityType {
    A(u32),
    D(u32),
    E(u32),
    /// Ordinary `k`-fold point whose branches have tangential
    /// multiplicities `m_1, ..., m_k`.
    OrdinaryMultiple(Vec<u32>),
    Other,
}

impl SingularityType {
    pub fn is_ade(&self) -> bool {
        matches!(self, SingularityType::A(_) | SingularityType::D(_) | SingularityType::E(_))
    }

    /// Milnor number of a simple singularity.
    pub fn ade_mu(&self) -> Option<usize> {
        match self {
            SingularityType::A(k) | SingularityType::D(k) | SingularityType::E(k) => Some(*k as usize),
            _ => None,
        }
    }

    /// Multiplicity and number of distinct tangents of a simple singularity.
    fn ade_shape(&self) -> Option<(u32, usize)> {
        match *self {
            SingularityType::A(1) => Some((2, 2)),
            SingularityType::A(_) => Some((2, 1)),
            SingularityType::D(4) => Some((3, 3)),
            SingularityType::D(_) => Some((3, 2)),
            SingularityType::E(_) => Some((3, 1)),
            _ => None,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::A(k) => write!(f, "A{k}"),
            SingularityType::D(k) => write!(f, "D{k}"),
            SingularityType::E(k) => write!(f, "E{k}"),
            SingularityType::OrdinaryMultiple(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                write!(f, "ordinary({})", parts.join(","))
            }
            SingularityType::Other => write!(f, "other"),
        }
    }
}

impl FromStr for SingularityType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "other" {
            return Ok(SingularityType::Other);
        }
        if let Some(inner) = s.strip_prefix("ordinary(").and_then(|r| r.strip_suffix(')')) {
            let ms: Result<Vec<u32>, _> = inner.split(',').map(|t| t.trim().parse::<u32>()).collect();
            return match ms {
                Ok(ms) if ms.len() >= 2 && ms.iter().all(|&m| m >= 2) => Ok(SingularityType::OrdinaryMultiple(ms)),
                _ => Err(format!("bad ordinary point label '{s}'")),
            };
        }
        let bad = || format!("unknown singularity label '{s}'");
        let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let k: u32 = tail.parse().map_err(|_| bad())?;
        match head {
            "A" if k >= 1 => Ok(SingularityType::A(k)),
            "D" if k >= 4 => Ok(SingularityType::D(k)),
            "E" if (6..=8).contains(&k) => Ok(SingularityType::E(k)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for SingularityType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SingularityType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A claimed singularity type, with optional explicit `μ` and `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityTypeClaim {
    #[serde(rename = "type")]
    pub label: SingularityType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
}

impl SingularityTypeClaim {
    pub fn new(label: SingularityType) -> Self {
        SingularityTypeClaim {
            label,
            mu: None,
            tau: None,
        }
    }

    pub fn expected_mu(&self) -> Option<usize> {
        self.mu.or_else(|| self.label.ade_mu()).or_else(|| match &self.label {
            SingularityType::OrdinaryMultiple(ms) => Some((ms.len() - 1).pow(2)),
            _ => None,
        })
    }

    pub fn expected_tau(&self) -> Option<usize> {
        self.tau.or_else(|| self.label.ade_mu())
    }

    /// Compares the claim with computed invariants. A simple singularity is
    /// pinned down by its multiplicity, its number of distinct tangents and
    /// `μ`, so those are what an ADE label is checked against.
    pub fn verify(&self, r: &LocalReport) -> Result<(), String> {
        let mut bad = Vec::new();
        if let Some(mu) = self.expected_mu() {
            if mu != r.mu {
                bad.push(format!("mu {} != {mu}", r.mu));
            }
        }
        if let Some(tau) = self.expected_tau() {
            if tau != r.tau {
                bad.push(format!("tau {} != {tau}", r.tau));
            }
        }
        if let Some((mult, lines)) = self.label.ade_shape() {
            if r.mult != mult {
                bad.push(format!("multiplicity {} != {mult}", r.mult));
            }
            if r.distinct_tangents != lines {
                bad.push(format!("{} distinct tangents, expected {lines}", r.distinct_tangents));
            }
        }
        if let SingularityType::OrdinaryMultiple(ms) = &self.label {
            let k = ms.len();
            if r.mult as usize != k || r.distinct_tangents != k {
                bad.push(format!("not an ordinary {k}-fold point"));
            }
            match &r.tangent_cone {
                Some(cone) => {
                    let mut got: Vec<u32> = cone.iter().map(|t| t.m_l).collect();
                    let mut want = ms.clone();
                    got.sort_unstable();
                    want.sort_unstable();
                    if got != want {
                        bad.push(format!("tangential multiplicities {got:?} != {want:?}"));
                    }
                }
                None => bad.push("tangent cone does not split; tangential multiplicities unchecked".into()),
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(format!("{} at {}: {}", self.label, r.point, bad.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in ["A1", "A12", "D4", "D8", "E7", "ordinary(3,3)", "other"] {
            assert_eq!(s.parse::<SingularityType>().unwrap().to_string(), s);
        }
        for s in ["A0", "D3", "E9", "ordinary(3)", "X2", ""] {
            assert!(s.parse::<SingularityType>().is_err(), "{s}");
        }
    }

    #[test]
    fn claim_json() {
        let c: SingularityTypeClaim = serde_json::from_str(r#"{"type":"E7"}"#).unwrap();
        assert_eq!(c.expected_mu(), Some(7));
        let c: SingularityTypeClaim = serde_json::from_str(r#"{"type":"other","mu":17,"tau":16}"#).unwrap();
        assert_eq!((c.expected_mu(), c.expected_tau()), (Some(17), Some(16)));
        let ord: SingularityTypeClaim = serde_json::from_str(r#"{"type":"ordinary(3,3)"}"#).unwrap();
        assert_eq!(ord.expected_mu(), Some(1));
    }
}
