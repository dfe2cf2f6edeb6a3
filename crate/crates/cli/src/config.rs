use std::path::Path;

use multiport::matrix::MatrixJson;
use multiport::{
    build_bell_multiport, Complex64, ComplexMatrix, InputConfiguration, PhotonState,
    TransitionMatrix,
};
use serde::Deserialize;

use crate::{read_text, CliError, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_ports: usize,
    unitary: UnitarySpec,
    inputs: Vec<RawPhoton>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum UnitarySpec {
    Named(String),
    Explicit(MatrixJson),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhoton {
    plus: [f64; 2],
    minus: [f64; 2],
}

/// A validated run configuration. The matrix is kept as given: `simulate`
/// rejects non-unitary matrices, while `verify` reports them as a failed check.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n_ports: usize,
    pub matrix: ComplexMatrix,
    pub inputs: InputConfiguration,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        if raw.n_ports == 0 {
            return Err(CliError::Config("n_ports: must be at least 1".into()));
        }
        let matrix = match raw.unitary {
            UnitarySpec::Named(name) if name == "bell" => {
                build_bell_multiport(raw.n_ports)?.as_matrix().clone()
            }
            UnitarySpec::Named(name) => {
                return Err(CliError::Config(format!(
                    "unitary: unknown name `{name}`, expected \"bell\" or a matrix"
                )))
            }
            UnitarySpec::Explicit(json) => json
                .to_matrix()
                .map_err(|e| CliError::Config(format!("unitary: {e}")))?,
        };
        if matrix.rows() != raw.n_ports || matrix.cols() != raw.n_ports {
            return Err(CliError::Config(format!(
                "unitary: matrix is {}x{}, n_ports is {}",
                matrix.rows(),
                matrix.cols(),
                raw.n_ports
            )));
        }
        if raw.inputs.len() != raw.n_ports {
            return Err(CliError::Config(format!(
                "inputs: {} photon states given, n_ports is {}",
                raw.inputs.len(),
                raw.n_ports
            )));
        }
        let photons = raw
            .inputs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                PhotonState::new(
                    Complex64::new(p.plus[0], p.plus[1]),
                    Complex64::new(p.minus[0], p.minus[1]),
                )
                .map_err(|e| CliError::Config(format!("inputs[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_ports: raw.n_ports,
            matrix,
            inputs: InputConfiguration::new(photons)?,
        })
    }

    /// The matrix as a transition matrix; fails unless it is unitary.
    pub fn transition(&self) -> Result<TransitionMatrix> {
        TransitionMatrix::new(self.matrix.clone())
            .map_err(|e| CliError::Config(format!("unitary: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W4: &str = r#"{
        "n_ports": 4,
        "unitary": "bell",
        "inputs": [
            {"plus": [1, 0], "minus": [0, 0]},
            {"plus": [0, 0], "minus": [1, 0]},
            {"plus": [0, 0], "minus": [1, 0]},
            {"plus": [0, 0], "minus": [1, 0]}
        ]
    }"#;

    #[test]
    fn parses_bell_config() {
        let cfg = RunConfig::from_json(W4).unwrap();
        assert_eq!(cfg.n_ports, 4);
        assert_eq!(cfg.inputs.basis_labels().unwrap().to_string(), "+---");
        assert!(cfg.transition().is_ok());
    }

    #[test]
    fn explicit_matrix() {
        let text = r#"{"n_ports": 1, "unitary": {"entries": [[[0, 1]]]}, "inputs": [{"plus": [0.6, 0], "minus": [0, 0.8]}]}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.matrix.get(0, 0), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = RunConfig::from_json("{\n  \"n_ports\": 4,\n  \"unitary\": bell\n}").unwrap_err();
        assert!(
            matches!(err, CliError::Parse(ref m) if m.starts_with("line 3")),
            "{err}"
        );
        let err = RunConfig::from_json(r#"{"n_ports": 1, "unitary": "bell"}"#).unwrap_err();
        assert!(err.to_string().contains("inputs"), "{err}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let unnormalized = W4.replacen("\"minus\": [1, 0]", "\"minus\": [0.9, 0]", 1);
        assert!(RunConfig::from_json(&unnormalized)
            .unwrap_err()
            .to_string()
            .starts_with("inputs[1]"));
        let short = W4.replace("\"n_ports\": 4", "\"n_ports\": 5");
        assert!(matches!(
            RunConfig::from_json(&short),
            Err(CliError::Config(_))
        ));
        let named = W4.replace("\"bell\"", "\"dft\"");
        assert!(RunConfig::from_json(&named)
            .unwrap_err()
            .to_string()
            .contains("dft"));
    }

    #[test]
    fn non_unitary_matrix_is_kept_but_not_a_transition() {
        let text = r#"{"n_ports": 1, "unitary": {"entries": [[[0.5, 0]]]}, "inputs": [{"plus": [1, 0], "minus": [0, 0]}]}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert!(matches!(cfg.transition(), Err(CliError::Config(_))));
    }
}
