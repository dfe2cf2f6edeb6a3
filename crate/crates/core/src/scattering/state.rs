use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::input::LabelAssignment;
use crate::error::{Error, Result};

/// Amplitudes at or below this modulus are not stored.
pub const STORAGE_THRESHOLD: f64 = 1e-14;
/// Slack on the `norm² <= 1` bound of a projected state.
pub const NORM_SLACK: f64 = 1e-9;

/// Sparse (unnormalized) state on the one-photon-per-port subspace, keyed by
/// the label carried in each output port.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct PostselectedState {
    n: usize,
    terms: BTreeMap<LabelAssignment, Complex64>,
}

impl PostselectedState {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Collects `terms`, summing repeated assignments and dropping amplitudes
    /// with modulus at or below [`STORAGE_THRESHOLD`].
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (LabelAssignment, Complex64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<LabelAssignment, Complex64> = BTreeMap::new();
        for (labels, amp) in terms {
            if labels.len() != n {
                return Err(Error::Configuration(format!(
                    "assignment {labels} has {} ports, state has {n}",
                    labels.len()
                )));
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::NonFinite(format!("amplitude of {labels}")));
            }
            *map.entry(labels).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        map.retain(|_, amp| amp.norm() > STORAGE_THRESHOLD);
        let state = Self { n, terms: map };
        let norm = state.norm_sqr();
        if norm > 1.0 + NORM_SLACK {
            return Err(Error::Configuration(format!(
                "state norm^2 {norm} exceeds 1"
            )));
        }
        Ok(state)
    }

    /// Skips the norm bound; for maps of states that were already valid.
    pub(crate) fn from_map_unchecked(
        n: usize,
        mut terms: BTreeMap<LabelAssignment, Complex64>,
    ) -> Self {
        terms.retain(|_, amp| amp.norm() > STORAGE_THRESHOLD);
        Self { n, terms }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LabelAssignment, &Complex64)> {
        self.terms.iter()
    }

    /// Stored amplitude, or zero.
    pub fn amplitude(&self, labels: &LabelAssignment) -> Complex64 {
        self.terms.get(labels).copied().unwrap_or_default()
    }

    pub fn amplitude_of(&self, labels: &str) -> Result<Complex64> {
        Ok(self.amplitude(&labels.parse()?))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(Complex64::norm_sqr).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_map_unchecked(
            self.n,
            self.terms
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        )
    }

    /// `⟨self|other⟩` without normalization.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.terms
            .iter()
            .filter_map(|(k, a)| other.terms.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// Largest per-assignment `|self - other|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let left = self
            .terms
            .iter()
            .map(|(k, a)| (a - other.amplitude(k)).norm());
        let right = other
            .terms
            .iter()
            .filter(|(k, _)| !self.terms.contains_key(*k))
            .map(|(_, b)| b.norm());
        left.chain(right).fold(0.0, f64::max)
    }

    /// Like [`max_abs_diff`](Self::max_abs_diff) after rotating `other` by the
    /// global phase that best aligns it with `self`.
    pub fn max_abs_diff_up_to_phase(&self, other: &Self) -> f64 {
        let overlap = other.inner(self);
        if overlap.norm() == 0.0 {
            return self.max_abs_diff(other);
        }
        let phase = overlap / overlap.norm();
        self.max_abs_diff(&other.scaled(phase))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    labels: String,
    amp: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl From<PostselectedState> for StateJson {
    fn from(s: PostselectedState) -> Self {
        StateJson {
            n: s.n,
            terms: s
                .terms
                .into_iter()
                .map(|(k, v)| TermJson {
                    labels: k.to_string(),
                    amp: [v.re, v.im],
                })
                .collect(),
        }
    }
}

impl TryFrom<StateJson> for PostselectedState {
    type Error = Error;

    fn try_from(json: StateJson) -> Result<Self> {
        let terms = json
            .terms
            .into_iter()
            .map(|t| Ok((t.labels.parse()?, Complex64::new(t.amp[0], t.amp[1]))))
            .collect::<Result<Vec<_>>>()?;
        PostselectedState::from_terms(json.n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> LabelAssignment {
        s.parse().unwrap()
    }

    #[test]
    fn tiny_amplitudes_are_dropped() {
        let s = PostselectedState::from_terms(
            2,
            [
                (a("+-"), Complex64::new(0.5, 0.0)),
                (a("-+"), Complex64::new(1e-15, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.amplitude(&a("-+")), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn duplicates_accumulate() {
        let s = PostselectedState::from_terms(
            2,
            [
                (a("+-"), Complex64::new(0.25, 0.0)),
                (a("+-"), Complex64::new(0.25, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.amplitude(&a("+-")), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn rejects_overnormalized_and_mismatched() {
        assert!(PostselectedState::from_terms(1, [(a("+"), Complex64::new(1.1, 0.0))]).is_err());
        assert!(PostselectedState::from_terms(3, [(a("+"), Complex64::new(0.1, 0.0))]).is_err());
    }

    #[test]
    fn json_shape() {
        let s = PostselectedState::from_terms(
            2,
            [
                (a("-+"), Complex64::new(0.5, 0.0)),
                (a("+-"), Complex64::new(-0.5, 0.0)),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"n":2,"terms":[{"labels":"+-","amp":[-0.5,0.0]},{"labels":"-+","amp":[0.5,0.0]}]}"#
        );
        let back: PostselectedState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_accepts_typographic_minus() {
        let back: PostselectedState =
            serde_json::from_str(r#"{"n":2,"terms":[{"labels":"+−","amp":[0.5,0]}]}"#).unwrap();
        assert_eq!(back.amplitude(&a("+-")), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn phase_aligned_difference() {
        let s = PostselectedState::from_terms(
            2,
            [
                (a("+-"), Complex64::new(0.6, 0.0)),
                (a("-+"), Complex64::new(0.0, 0.8)),
            ],
        )
        .unwrap();
        let rotated = s.scaled(Complex64::from_polar(1.0, 1.234));
        assert!(s.max_abs_diff(&rotated) > 0.1);
        assert!(s.max_abs_diff_up_to_phase(&rotated) < 1e-15);
    }
}
