//! Full Fock-space expansion of the scattered state.
//!
//! Every photon is pushed through the multiport independently: the creation
//! operator `a†_{iμ}` becomes `Σ_j U[j][i] b†_{jμ}`, and the product over
//! photons is expanded into monomials in the output operators. A monomial
//! `Π_k (b†_k)^{n_k} |0⟩` equals `Π_k √(n_k!) |{n_k}⟩` in the orthonormal
//! occupation basis. Nothing here goes through a permanent, so restricting the
//! result to one photon per port gives an independent check of
//! [`postselect`](super::postselect).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::input::{InputConfiguration, Label, LabelAssignment};
use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;

/// Largest photon number accepted by [`oracle_full_expansion`].
pub const ORACLE_LIMIT: usize = 7;

/// Photon counts per `(port, label)` mode.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockOccupation {
    counts: Vec<u8>,
}

impl FockOccupation {
    fn vacuum(ports: usize) -> Self {
        Self {
            counts: vec![0; 2 * ports],
        }
    }

    #[inline]
    fn mode(port: usize, label: Label) -> usize {
        2 * port + label.index()
    }

    pub fn ports(&self) -> usize {
        self.counts.len() / 2
    }

    pub fn count(&self, port: usize, label: Label) -> u8 {
        self.counts[Self::mode(port, label)]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Nonzero `((port, label), count)` entries.
    pub fn counts(&self) -> impl Iterator<Item = ((usize, Label), u8)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| {
                (
                    (
                        k / 2,
                        if k % 2 == 0 {
                            Label::Plus
                        } else {
                            Label::Minus
                        },
                    ),
                    c,
                )
            })
    }

    /// The label in each port if every port holds exactly one photon.
    pub fn one_per_port(&self) -> Option<LabelAssignment> {
        (0..self.ports())
            .map(
                |p| match (self.count(p, Label::Plus), self.count(p, Label::Minus)) {
                    (1, 0) => Some(Label::Plus),
                    (0, 1) => Some(Label::Minus),
                    _ => None,
                },
            )
            .collect::<Option<Vec<_>>>()
            .map(LabelAssignment::new)
    }

    fn added(&self, port: usize, label: Label) -> Self {
        let mut next = self.clone();
        next.counts[Self::mode(port, label)] += 1;
        next
    }

    /// `Π_k √(n_k!)`, the norm of the unnormalized monomial.
    fn monomial_norm(&self) -> f64 {
        self.counts
            .iter()
            .map(|&c| (1..=c as u32).map(f64::from).product::<f64>().sqrt())
            .product()
    }
}

impl fmt::Debug for FockOccupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for p in 0..self.ports() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(
                f,
                "{}+{}-",
                self.count(p, Label::Plus),
                self.count(p, Label::Minus)
            )?;
        }
        write!(f, "⟩")
    }
}

/// Output amplitudes over all occupation patterns, in the orthonormal basis.
#[derive(Clone, Debug)]
pub struct FockExpansion {
    n: usize,
    amplitudes: BTreeMap<FockOccupation, Complex64>,
}

impl FockExpansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockOccupation, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Total squared norm over every occupation pattern.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(Complex64::norm_sqr).sum()
    }

    /// Amplitudes of the patterns with exactly one photon per port.
    pub fn one_per_port(&self) -> BTreeMap<LabelAssignment, Complex64> {
        self.amplitudes
            .iter()
            .filter_map(|(occ, amp)| occ.one_per_port().map(|labels| (labels, *amp)))
            .collect()
    }
}

/// Expands the product of single-photon output superpositions over the full
/// Fock space. Cost grows like `(2N)^N` patterns; limited to `N <= 7`.
pub fn oracle_full_expansion(
    u: &TransitionMatrix,
    input: &InputConfiguration,
) -> Result<FockExpansion> {
    let n = input.n();
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            what: "full Fock expansion",
            size: n,
            limit: ORACLE_LIMIT,
        });
    }
    if u.n() != n {
        return Err(Error::Configuration(format!(
            "{} photons for a {}-port multiport",
            n,
            u.n()
        )));
    }

    let mut monomials: BTreeMap<FockOccupation, Complex64> = BTreeMap::new();
    monomials.insert(FockOccupation::vacuum(n), Complex64::new(1.0, 0.0));

    for (i, photon) in input.photons().iter().enumerate() {
        let mut next: BTreeMap<FockOccupation, Complex64> = BTreeMap::new();
        for (occ, coeff) in &monomials {
            for j in 0..n {
                for label in Label::ALL {
                    let alpha = photon.amplitude(label);
                    if alpha == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    *next.entry(occ.added(j, label)).or_default() += coeff * u.get(j, i) * alpha;
                }
            }
        }
        monomials = next;
    }

    let amplitudes = monomials
        .into_iter()
        .map(|(occ, coeff)| {
            let norm = occ.monomial_norm();
            (occ, coeff * norm)
        })
        .collect();
    Ok(FockExpansion { n, amplitudes })
}
