//! Self-check suite: Bell unitarity, fast vs naive permanents, permanent
//! postselection vs the Fock-space expansion, label conservation and the
//! W-input phase pattern, for every port count up to `max_n`.

use std::fmt;

use multiport::matrix::{unitarity_deviation, UNITARY_TOLERANCE};
use multiport::scattering::ORACLE_LIMIT;
use multiport::{
    build_bell_multiport, oracle_full_expansion, permanent_fast, permanent_naive, postselect,
    Complex64, ComplexMatrix, InputConfiguration, Label, LabelAssignment, PhotonState,
    TransitionMatrix,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::{CliError, Result, RunConfig};

pub const AGREEMENT_TOLERANCE: f64 = 1e-10;
const PERMANENT_SAMPLES: usize = 20;
const ORACLE_SAMPLES: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    fn record(&mut self, name: String, worst: f64, tol: f64) {
        self.checks.push(CheckResult {
            name,
            passed: worst <= tol,
            detail: format!("max deviation {worst:.2e} (tolerance {tol:.0e})"),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        write!(
            f,
            "{} of {} checks passed",
            self.checks.len() - self.failures(),
            self.checks.len()
        )
    }
}

fn random_in_disk(rng: &mut StdRng) -> Complex64 {
    Complex64::from_polar(
        rng.gen::<f64>().sqrt(),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

fn random_input(rng: &mut StdRng, n: usize) -> Result<InputConfiguration> {
    let photons = (0..n)
        .map(|_| {
            let (a, b) = loop {
                let (a, b) = (random_in_disk(rng), random_in_disk(rng));
                if a.norm_sqr() + b.norm_sqr() > 1e-6 {
                    break (a, b);
                }
            };
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            PhotonState::new(a / norm, b / norm)
        })
        .collect::<multiport::Result<Vec<_>>>()?;
    Ok(InputConfiguration::new(photons)?)
}

/// Largest per-amplitude gap between the one-photon-per-port slice of the
/// Fock expansion and the permanent route, and the expansion's norm defect.
fn oracle_gap(u: &TransitionMatrix, input: &InputConfiguration) -> Result<(f64, f64)> {
    let n = input.n();
    let expansion = oracle_full_expansion(u, input)?;
    let slice = expansion.one_per_port();
    let state = postselect(u, input)?;
    let worst = (0..1u64 << n)
        .map(|mask| {
            let labels = LabelAssignment::from_plus_mask(n, mask);
            (slice.get(&labels).copied().unwrap_or_default() - state.amplitude(&labels)).norm()
        })
        .fold(0.0, f64::max);
    Ok((worst, (expansion.norm_sqr() - 1.0).abs()))
}

fn check_ports(report: &mut VerifyReport, rng: &mut StdRng, n: usize) -> Result<()> {
    let u = build_bell_multiport(n)?;
    report.record(
        format!("n={n} Bell unitarity"),
        unitarity_deviation(u.as_matrix())?,
        UNITARY_TOLERANCE,
    );

    let mut worst: f64 = 0.0;
    for _ in 0..PERMANENT_SAMPLES {
        let m = ComplexMatrix::from_fn(n, n, |_, _| random_in_disk(rng))?;
        let naive = permanent_naive(&m)?;
        worst = worst.max((permanent_fast(&m)? - naive).norm() / (1.0 + naive.norm()));
    }
    report.record(
        format!("n={n} permanent fast vs naive"),
        worst,
        AGREEMENT_TOLERANCE,
    );

    let (mut amp, mut norm): (f64, f64) = (0.0, 0.0);
    for _ in 0..ORACLE_SAMPLES {
        let (a, b) = oracle_gap(&u, &random_input(rng, n)?)?;
        amp = amp.max(a);
        norm = norm.max(b);
    }
    report.record(
        format!("n={n} postselect vs Fock expansion"),
        amp,
        AGREEMENT_TOLERANCE,
    );
    report.record(
        format!("n={n} Fock expansion norm"),
        norm,
        AGREEMENT_TOLERANCE,
    );

    let mut violations = 0;
    for mask in 0..1u64 << n {
        let labels = LabelAssignment::from_plus_mask(n, mask);
        let state = postselect(&u, &InputConfiguration::from_labels(labels.labels())?)?;
        let plus = labels.count(Label::Plus);
        violations += state
            .terms()
            .filter(|(out, _)| out.count(Label::Plus) != plus)
            .count();
    }
    report.checks.push(CheckResult {
        name: format!("n={n} label conservation"),
        passed: violations == 0,
        detail: format!(
            "{} basis inputs, {violations} violating amplitudes",
            1u64 << n
        ),
    });

    if n >= 2 {
        let state = postselect(&u, &InputConfiguration::w_input(n)?)?;
        let beta =
            |j: usize| state.amplitude(&LabelAssignment::single(n, j, Label::Plus, Label::Minus));
        let worst = (0..n)
            .map(|j| {
                let sign = if n.is_multiple_of(2) && j % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                (beta(j) - beta(0) * sign).norm()
            })
            .fold(0.0, f64::max);
        let detail = if state.is_empty() {
            "all amplitudes vanish"
        } else {
            "alternating for even n, constant for odd n"
        };
        report.checks.push(CheckResult {
            name: format!("n={n} W-input phase pattern"),
            passed: worst <= AGREEMENT_TOLERANCE,
            detail: format!("{detail}, max deviation {worst:.2e}"),
        });
    }
    Ok(())
}

fn check_config(report: &mut VerifyReport, config: &RunConfig) -> Result<()> {
    let deviation = unitarity_deviation(&config.matrix)?;
    report.record("config unitarity".into(), deviation, UNITARY_TOLERANCE);
    if deviation > UNITARY_TOLERANCE || config.n_ports > ORACLE_LIMIT {
        return Ok(());
    }
    let (amp, norm) = oracle_gap(&config.transition()?, &config.inputs)?;
    report.record(
        "config postselect vs Fock expansion".into(),
        amp,
        AGREEMENT_TOLERANCE,
    );
    report.record(
        "config Fock expansion norm".into(),
        norm,
        AGREEMENT_TOLERANCE,
    );
    Ok(())
}

/// Runs every check for `1..=max_n`, then the optional config checks.
pub fn run_verify(max_n: usize, config: Option<&RunConfig>, seed: u64) -> Result<VerifyReport> {
    if max_n == 0 {
        return Err(CliError::Config("max-n must be at least 1".into()));
    }
    if max_n > ORACLE_LIMIT {
        return Err(multiport::Error::SizeLimit {
            what: "verify max-n",
            size: max_n,
            limit: ORACLE_LIMIT,
        }
        .into());
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = VerifyReport::default();
    for n in 1..=max_n {
        check_ports(&mut report, &mut rng, n)?;
    }
    if let Some(config) = config {
        check_config(&mut report, config)?;
    }
    Ok(report)
}
