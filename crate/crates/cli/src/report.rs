use multiport::sweep::format_significant;
use multiport::{
    canonical_state, decompose_general4, fidelity, normalize, postselect, success_probability,
    CanonicalStateKind, DecompositionResult, PostselectedState,
};
use serde::{Deserialize, Serialize};

use crate::{Result, RunConfig};

pub const EMPTY_STATUS: &str = "empty postselected state";
pub const RATIONAL_MAX_DENOMINATOR: u64 = 64;
pub const RATIONAL_TOLERANCE: f64 = 1e-12;

/// Smallest-denominator `p/q` with `q <= max_q` within `tol` of `x`, in lowest
/// terms.
pub fn rational_approximation(x: f64, max_q: u64, tol: f64) -> Option<(u64, u64)> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    (1..=max_q).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= tol).then_some((p as u64, q))
    })
}

/// 15 significant digits, plus ` (p/q)` when a small rational matches.
pub fn describe_probability(p: f64) -> String {
    let decimal = format_significant(p, 15);
    match rational_approximation(p, RATIONAL_MAX_DENOMINATOR, RATIONAL_TOLERANCE) {
        Some((num, den)) if den > 1 => format!("{decimal} ({num}/{den})"),
        _ => decimal,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FidelityEntry {
    pub target: String,
    pub fidelity: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulateReport {
    pub n_ports: usize,
    pub status: String,
    pub success_probability: f64,
    pub success_probability_text: String,
    pub raw_state: PostselectedState,
    pub normalized_state: Option<PostselectedState>,
    pub fidelities: Vec<FidelityEntry>,
    pub decomposition: Option<DecompositionResult>,
}

pub fn simulate(config: &RunConfig) -> Result<SimulateReport> {
    let u = config.transition()?;
    let raw = postselect(&u, &config.inputs)?;
    let p = success_probability(&raw);
    let normalized = if raw.is_empty() {
        None
    } else {
        Some(normalize(&raw)?)
    };
    let fidelities = match &normalized {
        Some(state) => CanonicalStateKind::for_ports(config.n_ports)
            .into_iter()
            .map(|kind| {
                Ok(FidelityEntry {
                    target: kind.to_string(),
                    fidelity: fidelity(state, &canonical_state(kind)?)?,
                })
            })
            .collect::<multiport::Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    // the closed form assumes the Bell multiport
    let is_bell = multiport::build_bell_multiport(config.n_ports)?
        .as_matrix()
        .max_abs_diff(&config.matrix)?
        <= 1e-12;
    let decomposition = if config.n_ports == 4 && is_bell {
        Some(decompose_general4(&config.inputs)?)
    } else {
        None
    };
    Ok(SimulateReport {
        n_ports: config.n_ports,
        status: if raw.is_empty() {
            EMPTY_STATUS.into()
        } else {
            "ok".into()
        },
        success_probability: p,
        success_probability_text: describe_probability(p),
        raw_state: raw,
        normalized_state: normalized,
        fidelities,
        decomposition,
    })
}
