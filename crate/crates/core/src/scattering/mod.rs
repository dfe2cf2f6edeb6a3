//! Scattering of N single photons through a multiport, postselected on one
//! photon per output port.
//!
//! For an output assignment `ν` (label `ν_j` in port `j`) the postselected
//! amplitude is the permanent of `M[j][i] = U[j][i] · α_{i,ν_j}`: each
//! permutation sends photon `i` to port `σ(i)`, where it must carry label
//! `ν_σ(i)`. The multiport never changes labels, so for inputs made of basis
//! states only assignments with the same number of `+` labels can be nonzero.

mod fock;
mod input;
mod state;

use rayon::prelude::*;

use num_complex::Complex64;

pub use fock::{oracle_full_expansion, FockExpansion, FockOccupation, ORACLE_LIMIT};
pub use input::{InputConfiguration, Label, LabelAssignment, PhotonState, INPUT_NORM_TOLERANCE};
pub use state::{PostselectedState, NORM_SLACK, STORAGE_THRESHOLD};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, TransitionMatrix};
use crate::permanent::{permanent_fast, FAST_LIMIT};

/// Postselected amplitudes with modulus at or below this are treated as exact
/// destructive-interference zeros.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Below this port count amplitudes are evaluated on the calling thread.
const PARALLEL_MIN_PORTS: usize = 8;

/// Every `n`-bit mask with exactly `k` bits set, in increasing order.
fn masks_with_popcount(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut mask = (1u64 << k) - 1;
    while mask < limit {
        out.push(mask);
        // next integer with the same popcount
        let lowest = mask & mask.wrapping_neg();
        let ripple = mask + lowest;
        mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
    }
    out
}

/// The scattering matrix for one output assignment: `M[j][i] = U[j][i] · α_{i,ν_j}`.
pub fn assignment_matrix(
    u: &TransitionMatrix,
    input: &InputConfiguration,
    labels: &LabelAssignment,
) -> ComplexMatrix {
    let n = u.n();
    ComplexMatrix::from_fn(n, n, |j, i| {
        u.get(j, i) * input.photon(i).amplitude(labels.get(j))
    })
    .expect("products of finite entries are finite")
}

/// Projects the scattered state onto one photon per output port.
pub fn postselect(u: &TransitionMatrix, input: &InputConfiguration) -> Result<PostselectedState> {
    let n = input.n();
    if u.n() != n {
        return Err(Error::Configuration(format!(
            "{} photons for a {}-port multiport",
            n,
            u.n()
        )));
    }
    if n > FAST_LIMIT {
        return Err(Error::SizeLimit {
            what: "postselection",
            size: n,
            limit: FAST_LIMIT,
        });
    }

    let masks = match input.basis_labels() {
        Some(labels) => masks_with_popcount(n, labels.count(Label::Plus)),
        None => (0..1u64 << n).collect(),
    };

    let amplitude = |&mask: &u64| -> Result<(LabelAssignment, Complex64)> {
        let labels = LabelAssignment::from_plus_mask(n, mask);
        let amp = permanent_fast(&assignment_matrix(u, input, &labels))?;
        Ok((labels, amp))
    };
    let terms: Vec<(LabelAssignment, Complex64)> = if n >= PARALLEL_MIN_PORTS {
        masks.par_iter().map(amplitude).collect::<Result<_>>()?
    } else {
        masks.iter().map(amplitude).collect::<Result<_>>()?
    };

    let kept = terms
        .into_iter()
        .filter(|(_, amp)| amp.norm() > ZERO_THRESHOLD)
        .collect();
    Ok(PostselectedState::from_map_unchecked(n, kept))
}

/// Probability of finding one photon in every output port: the squared norm
/// of the postselected state.
pub fn success_probability(s: &PostselectedState) -> f64 {
    s.norm_sqr()
}

pub fn normalize(s: &PostselectedState) -> Result<PostselectedState> {
    let norm_sqr = s.norm_sqr();
    if norm_sqr <= 1e-20 {
        return Err(Error::EmptyState);
    }
    Ok(s.scaled(Complex64::new(1.0 / norm_sqr.sqrt(), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_bell_multiport;

    fn bell(n: usize) -> TransitionMatrix {
        build_bell_multiport(n).unwrap()
    }

    fn input(s: &str) -> InputConfiguration {
        s.parse().unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn gosper_enumeration_counts() {
        for n in 1..=10 {
            for k in 0..=n {
                let masks = masks_with_popcount(n, k);
                assert_eq!(masks.len(), binomial(n, k), "n = {n}, k = {k}");
                assert!(masks
                    .iter()
                    .all(|m| m.count_ones() as usize == k && *m < 1 << n));
                assert!(masks.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn all_plus_four_photons_is_empty() {
        let s = postselect(&bell(4), &input("++++")).unwrap();
        assert!(s.is_empty());
        assert_eq!(success_probability(&s), 0.0);
        assert!(matches!(normalize(&s), Err(Error::EmptyState)));
    }

    #[test]
    fn w4_amplitudes_alternate() {
        let s = postselect(&bell(4), &input("+---")).unwrap();
        assert_eq!(s.len(), 4);
        let expected = [-0.125, 0.125, -0.125, 0.125];
        for (j, want) in expected.iter().enumerate() {
            let labels = LabelAssignment::single(4, j, Label::Plus, Label::Minus);
            assert!(
                (s.amplitude(&labels) - Complex64::new(*want, 0.0)).norm() < 1e-15,
                "port {j}"
            );
        }
        assert!((success_probability(&s) - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn beam_splitter_pair() {
        let s = postselect(&bell(2), &input("+-")).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.amplitude_of("+-").unwrap() - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((s.amplitude_of("-+").unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ghz_and_double_singlet_probabilities() {
        let ghz = postselect(&bell(4), &input("+-+-")).unwrap();
        assert_eq!(ghz.len(), 2);
        assert!((success_probability(&ghz) - 0.125).abs() < 1e-15);
        let ds = postselect(&bell(4), &input("++--")).unwrap();
        assert_eq!(ds.len(), 4);
        assert!((success_probability(&ds) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn normalize_w4() {
        let s = normalize(&postselect(&bell(4), &input("+---")).unwrap()).unwrap();
        for (_, amp) in s.terms() {
            assert!((amp.norm() - 0.5).abs() < 1e-15);
        }
        let again = normalize(&s).unwrap();
        assert!(again.max_abs_diff(&s) < 1e-12);
        assert!((again.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            postselect(&bell(3), &input("+-")),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn superposition_inputs_enumerate_every_assignment() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let diag = PhotonState::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0)).unwrap();
        let cfg = input("+-").with_photon(0, diag).unwrap();
        let s = postselect(&bell(2), &cfg).unwrap();
        // (+ + -)/√2 ⊗ - : only the one-plus assignments survive, each ±1/(2√2)
        assert_eq!(s.len(), 2);
        assert!((success_probability(&s) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn parallel_path_matches_serial_bitwise() {
        let u = bell(9);
        let cfg = InputConfiguration::w_input(9).unwrap();
        let parallel = postselect(&u, &cfg).unwrap();
        for (labels, amp) in parallel.terms() {
            let serial = permanent_fast(&assignment_matrix(&u, &cfg, labels)).unwrap();
            assert_eq!(serial.re.to_bits(), amp.re.to_bits());
            assert_eq!(serial.im.to_bits(), amp.im.to_bits());
        }
    }
}
