//! W-state success probability as a function of the port count, and the
//! log-linear fit `P = exp(a - b·N)` over its nonzero values.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::build_bell_multiport;
use crate::scattering::{postselect, success_probability, InputConfiguration, ZERO_THRESHOLD};

pub const SWEEP_MIN_PORTS: usize = 2;
pub const SWEEP_MAX_PORTS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub p_suc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Intercept of `ln P` against `N`.
    pub a: f64,
    /// Negated slope of `ln P` against `N`.
    pub b: f64,
    /// Sum of squared residuals of `ln P`.
    pub residual: f64,
    pub points_used: Vec<usize>,
}

impl FitResult {
    pub fn predict(&self, n: usize) -> f64 {
        (self.a - self.b * n as f64).exp()
    }
}

/// Success probability for `|+⟩` in port 0 and `|−⟩` elsewhere through Bell(n).
pub fn w_success_probability(n: usize) -> Result<f64> {
    let u = build_bell_multiport(n)?;
    let input = InputConfiguration::w_input(n)?;
    Ok(success_probability(&postselect(&u, &input)?))
}

/// One record per `n` in `n_min..=n_max`, in increasing `n`.
pub fn sweep_w_success(n_min: usize, n_max: usize) -> Result<Vec<SweepRecord>> {
    if n_min < SWEEP_MIN_PORTS || n_min > n_max || n_max > SWEEP_MAX_PORTS {
        return Err(Error::Configuration(format!(
            "sweep range {n_min}..={n_max} must satisfy {SWEEP_MIN_PORTS} <= min <= max <= {SWEEP_MAX_PORTS}"
        )));
    }
    // largest n first so the expensive sizes start early
    let mut records: Vec<SweepRecord> = (n_min..=n_max)
        .rev()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            Ok(SweepRecord {
                n,
                p_suc: w_success_probability(n)?,
            })
        })
        .collect::<Result<_>>()?;
    records.sort_by_key(|r| r.n);
    Ok(records)
}

/// Ordinary least squares of `ln p_suc` on `n`, skipping records with
/// `p_suc <= 1e-12`.
pub fn fit_exponential(records: &[SweepRecord]) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.p_suc > ZERO_THRESHOLD)
        .map(|r| (r.n as f64, r.p_suc.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "fit needs at least 3 nonzero points, got {}",
            points.len()
        )));
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "fit needs at least two distinct n".into(),
        ));
    }
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = points
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    Ok(FitResult {
        a: intercept,
        b: -slope,
        residual,
        points_used: records
            .iter()
            .filter(|r| r.p_suc > ZERO_THRESHOLD)
            .map(|r| r.n)
            .collect(),
    })
}

/// Formats `x` with `digits` significant digits, like C's `%.{digits}g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

/// Writes `n,p_suc` CSV with 15 significant digits per probability.
pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["n", "p_suc"])?;
    for r in records {
        writer.write_record([r.n.to_string(), format_significant(r.p_suc, 15)])?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "p_suc"] {
        return Err(Error::Parse(format!(
            "expected header `n,p_suc`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    for row in reader.deserialize() {
        let record: SweepRecord = row?;
        if !record.p_suc.is_finite() || record.p_suc < 0.0 || record.p_suc > 1.0 + 1e-9 {
            return Err(Error::Parse(format!(
                "p_suc {} for n = {} is not a probability",
                record.p_suc, record.n
            )));
        }
        records.push(record);
    }
    Ok(records)
}
