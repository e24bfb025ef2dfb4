//! JSON manifests for chart manifolds.

use std::fs;
use std::path::{Path, PathBuf};

use mgeo_core::{catalog, ChartManifold, ChartSpec, GeomError, SampleConfig, Verifier};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("syntax: {0}")]
    Syntax(mgeo_core::ParseError),
    #[error(transparent)]
    Geometry(GeomError),
    #[error("degenerate metric at sample point {point:?} (|det| = {det:e})")]
    DegenerateAt { point: Vec<f64>, det: f64 },
    #[error("unknown example {0:?} (expected one of E1, E2, E3, E4)")]
    UnknownExample(String),
}

impl From<GeomError> for LoadError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Parse(p) => LoadError::Syntax(p),
            other => LoadError::Geometry(other),
        }
    }
}

/// Parses a manifest document.
pub fn load_manifest(text: &str) -> Result<ChartManifold, LoadError> {
    let spec: ChartSpec = serde_json::from_str(text)?;
    Ok(spec.build()?)
}

pub fn read_manifest(path: &Path) -> Result<ChartManifold, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    load_manifest(&text)
}

/// Pretty-printed manifest of `m`.
pub fn to_manifest(m: &ChartManifold) -> String {
    serde_json::to_string_pretty(&m.to_spec()).expect("manifest serializes")
}

pub fn example(id: &str) -> Result<ChartManifold, LoadError> {
    catalog::by_id(id).ok_or_else(|| LoadError::UnknownExample(id.to_owned()))
}

/// Rejects manifolds whose metric degenerates somewhere on the sample.
pub fn validate_on_sample(m: &ChartManifold, config: &SampleConfig) -> Result<(), LoadError> {
    let v = Verifier::new(m.domain(), config);
    for x in v.sample.iter() {
        match m.metric_at(x) {
            Ok(_) => {}
            Err(GeomError::DegenerateMetric { det }) => {
                return Err(LoadError::DegenerateAt { point: x.to_vec(), det })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_round_trip_through_json() {
        for id in catalog::IDS {
            let m = example(id).unwrap();
            let back = load_manifest(&to_manifest(&m)).unwrap();
            assert_eq!(back.to_spec(), m.to_spec());
        }
    }

    #[test]
    fn load_errors_are_classified() {
        assert!(matches!(load_manifest("{"), Err(LoadError::Schema(_))));
        let bad_expr = to_manifest(&example("E1").unwrap()).replace("\"-1\"", "\"-\"");
        assert!(matches!(load_manifest(&bad_expr), Err(LoadError::Syntax(_))));
        let extra = to_manifest(&example("E1").unwrap()).replacen('{', "{\"colour\": 1,", 1);
        assert!(matches!(load_manifest(&extra), Err(LoadError::Schema(_))));
        assert!(matches!(example("E9"), Err(LoadError::UnknownExample(_))));
    }

    #[test]
    fn degenerate_metric_is_caught_on_the_sample() {
        let text = r#"{"name":"cone","dim":2,"coords":["x","y"],"p":0,"q":1,
            "domain":[[0,0],[0,1]],"g":[["x","0"],["0","x"]],"J":[["1","0"],["0","1"]]}"#;
        let m = load_manifest(text).unwrap();
        assert!(matches!(
            validate_on_sample(&m, &SampleConfig::default()),
            Err(LoadError::DegenerateAt { .. })
        ));
    }
}
