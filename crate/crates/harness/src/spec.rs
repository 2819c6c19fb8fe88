//! Problem descriptions: JSON in, validated geometric objects out.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use dvbwarp::tangentmodels::{Chart, Connection, TrivialBundle};
use dvbwarp::{ChartMap, DvbShape, MatrixMap, SmoothMap};

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The built-in demo: `X = ∂0`, `Y = x0 ∂1` on a square, `[X, Y] = ∂1`.
pub const DEMO_SPEC: &str = include_str!("../specs/demo.json");

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl SpecError {
    fn at(location: impl Into<String>, message: impl std::fmt::Display) -> Self {
        SpecError::Invalid {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub dim: usize,
    /// One `[lo, hi]` per axis; `[-1, 1]` on every axis when omitted.
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    pub fiber_dim: usize,
    /// One `k × k` matrix per chart direction, entries row-major.
    pub omega: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    #[serde(default = "one")]
    pub base: usize,
}

fn one() -> usize {
    1
}

/// The document as written. Maps are ordered so that derived check order
/// never depends on hashing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub chart: ChartSpec,
    #[serde(default)]
    pub fields: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub sections: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionSpec>,
    #[serde(default)]
    pub dvb_shapes: Vec<ShapeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub chart: Chart,
    pub fields: Vec<(String, SmoothMap)>,
    pub sections: Vec<(String, SmoothMap)>,
    pub connection: Option<Connection>,
    pub shapes: Vec<DvbShape>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &str) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<Problem, SpecError> {
        let n = self.chart.dim;
        if n == 0 {
            return Err(SpecError::at("chart.dim", "must be at least 1"));
        }
        let bounds = match &self.chart.bounds {
            None => vec![(-1.0, 1.0); n],
            Some(b) if b.len() != n => {
                return Err(SpecError::at(
                    "chart.box",
                    format!("{} intervals for a chart of dimension {n}", b.len()),
                ))
            }
            Some(b) => b.iter().map(|&[lo, hi]| (lo, hi)).collect(),
        };
        let chart = Chart::new(bounds).map_err(|e| SpecError::at("chart.box", e))?;

        let fields = self
            .fields
            .iter()
            .map(|(name, comps)| {
                let loc = format!("fields.{name}");
                if comps.len() != n {
                    return Err(SpecError::at(
                        loc,
                        format!("{} components for a chart of dimension {n}", comps.len()),
                    ));
                }
                Ok((name.clone(), parse_map(&loc, n, comps)?))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let sections = self
            .sections
            .iter()
            .map(|(name, comps)| {
                let loc = format!("sections.{name}");
                if comps.is_empty() {
                    return Err(SpecError::at(loc, "a section needs at least one component"));
                }
                Ok((name.clone(), parse_map(&loc, n, comps)?))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let connection = match &self.connection {
            None => None,
            Some(c) => Some(self.validate_connection(&chart, c)?),
        };
        if let Some(conn) = &connection {
            let k = conn.bundle().fiber_dim();
            for (name, s) in &sections {
                if s.codomain_dim() != k {
                    return Err(SpecError::at(
                        format!("sections.{name}"),
                        format!(
                            "{} components, but the connection acts on fibers of dimension {k}",
                            s.codomain_dim()
                        ),
                    ));
                }
            }
        } else if let Some(w) = sections.windows(2).find(|w| w[0].1.codomain_dim() != w[1].1.codomain_dim()) {
            return Err(SpecError::at(
                format!("sections.{}", w[1].0),
                "all sections must share one fiber dimension",
            ));
        }

        let shapes = self
            .dvb_shapes
            .iter()
            .enumerate()
            .map(|(i, s)| {
                DvbShape::new(s.a, s.b, s.c, s.base)
                    .map_err(|e| SpecError::at(format!("dvb_shapes[{i}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(SpecError::at("samples", "must be at least 1"));
        }
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(SpecError::at("tolerance", "must be a positive finite number"));
        }

        Ok(Problem {
            chart,
            fields,
            sections,
            connection,
            shapes,
            samples,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            tolerance,
        })
    }

    fn validate_connection(&self, chart: &Chart, c: &ConnectionSpec) -> Result<Connection, SpecError> {
        let n = chart.dim();
        let k = c.fiber_dim;
        let bundle = TrivialBundle::new(chart.clone(), k).map_err(|e| SpecError::at("connection.fiber_dim", e))?;
        if c.omega.len() != n {
            return Err(SpecError::at(
                "connection.omega",
                format!("{} matrices for a chart of dimension {n}", c.omega.len()),
            ));
        }
        let omega = c
            .omega
            .iter()
            .enumerate()
            .map(|(j, entries)| {
                let loc = format!("connection.omega[{j}]");
                if entries.len() != k * k {
                    return Err(SpecError::at(
                        loc,
                        format!("{} entries, expected {} for fiber dimension {k}", entries.len(), k * k),
                    ));
                }
                MatrixMap::new(k, k, parse_map(&loc, n, entries)?).map_err(|e| SpecError::at("connection.omega", e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Connection::new(bundle, omega).map_err(|e| SpecError::at("connection", e))
    }
}

fn parse_map(location: &str, dim: usize, comps: &[String]) -> Result<SmoothMap, SpecError> {
    for (i, c) in comps.iter().enumerate() {
        dvbwarp::chartcalc::parse(c, dim).map_err(|e| SpecError::at(format!("{location}[{i}]"), e))?;
    }
    SmoothMap::parse(dim, comps).map_err(|e| SpecError::at(location, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_validates() {
        let p = ProblemSpec::from_json(DEMO_SPEC).unwrap().validate().unwrap();
        assert_eq!(p.chart.dim(), 2);
        assert_eq!(p.fields.len(), 2);
        assert_eq!((p.samples, p.seed, p.tolerance), (200, 42, 1e-9));
    }

    #[test]
    fn errors_carry_locations() {
        let bad = r#"{"chart": {"dim": 2}, "fields": {"X": ["1", "x2"]}}"#;
        let e = ProblemSpec::from_json(bad).unwrap().validate().unwrap_err();
        assert!(e.to_string().starts_with("fields.X[1]:"), "{e}");

        let bad = r#"{"chart": {"dim": 2}, "fields": {"X": ["1"]}}"#;
        let e = ProblemSpec::from_json(bad).unwrap().validate().unwrap_err();
        assert!(e.to_string().starts_with("fields.X:"), "{e}");

        let e = ProblemSpec::from_json("{\"chart\": {\"dim\": 2},\n \"bogus\": 1}").unwrap_err();
        assert!(matches!(e, SpecError::Json { line: 2, .. }), "{e}");
    }
}
