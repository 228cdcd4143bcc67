//! Serializable verification reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rational::{to_ratio_string, Rational};
use crate::semigroup::NumericalSemigroup;
use crate::symmetric::Poly;

/// One side of an identity: an exact scalar, a coefficient or sample
/// vector, or a rendered float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportValue {
    Scalar(String),
    Vector(Vec<String>),
}

impl From<&Rational> for ReportValue {
    fn from(r: &Rational) -> Self {
        Self::Scalar(to_ratio_string(r))
    }
}

impl From<&Poly> for ReportValue {
    fn from(p: &Poly) -> Self {
        Self::Vector(p.to_ratio_strings())
    }
}

impl From<&[Rational]> for ReportValue {
    fn from(v: &[Rational]) -> Self {
        Self::Vector(v.iter().map(to_ratio_string).collect())
    }
}

impl From<f64> for ReportValue {
    fn from(x: f64) -> Self {
        Self::Scalar(format!("{x:e}"))
    }
}

/// Outcome of checking one identity on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub equal: bool,
    pub residual: Option<f64>,
    pub witness: Option<String>,
}

impl IdentityReport {
    pub fn exact(identity: &str, lhs: ReportValue, rhs: ReportValue, equal: bool) -> Self {
        Self {
            identity: identity.to_string(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            equal,
            residual: None,
            witness: None,
        }
    }

    /// Report for a floating-point identity; passes when `residual < tolerance`.
    pub fn numeric(identity: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = (lhs - rhs).abs();
        let mut r = Self::exact(identity, lhs.into(), rhs.into(), residual < tolerance);
        r.residual = Some(residual);
        r.params.insert("tolerance".into(), tolerance.into());
        r
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupRecord {
    pub gaps: Vec<u64>,
}

/// One line of a suite report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub semigroup: Option<SemigroupRecord>,
    pub m: Option<u64>,
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub equal: bool,
    pub residual: Option<f64>,
    pub witness: Option<String>,
}

impl InstanceRecord {
    pub fn new(semigroup: Option<(&NumericalSemigroup, u64)>, report: IdentityReport) -> Self {
        Self {
            semigroup: semigroup.map(|(s, _)| SemigroupRecord {
                gaps: s.gaps().to_vec(),
            }),
            m: semigroup.map(|(_, m)| m),
            identity: report.identity,
            params: report.params,
            lhs: report.lhs,
            rhs: report.rhs,
            equal: report.equal,
            residual: report.residual,
            witness: report.witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: Vec<InstanceRecord>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, instances: Vec<InstanceRecord>) -> Self {
        let pass = instances.iter().all(|i| i.equal);
        Self {
            suite: suite.to_string(),
            seed,
            instances,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn json_round_trip_is_byte_identical() {
        let s = NumericalSemigroup::from_generators(&[3, 5]).unwrap();
        let exact = IdentityReport::exact("gassert-shor", (&int(120)).into(), (&int(120)).into(), true)
            .param("p", 1);
        let numeric = IdentityReport::numeric("qbernoulli-difference", 0.1 + 0.2, 0.3, 1e-9).param("q", 0.5);
        let report = SuiteReport::new(
            "demo",
            7,
            vec![
                InstanceRecord::new(Some((&s, 3)), exact),
                InstanceRecord::new(None, numeric),
            ],
        );
        let text = report.to_json();
        let parsed: SuiteReport = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, report);
        assert_eq!(parsed.to_json(), text);
        assert!(text.contains("\"120/1\""));
    }
}
