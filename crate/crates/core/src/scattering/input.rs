use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of `|α₊|² + |α₋|²` from one.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;

/// Internal photon label. The two values are orthogonal; whether they stand
/// for polarisation, time bin or frequency does not matter here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Plus, Label::Minus];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Label::Plus => 0,
            Label::Minus => 1,
        }
    }

    #[inline]
    pub fn flipped(self) -> Self {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::Plus => '+',
            Label::Minus => '-',
        }
    }

    /// Accepts `+`, `-` and the typographic minus `−`.
    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Label::Plus),
            '-' | '−' => Some(Label::Minus),
            _ => None,
        }
    }
}

/// One label per output port, port 0 first. Displays as e.g. `+--+`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelAssignment(Vec<Label>);

impl LabelAssignment {
    pub fn new(labels: Vec<Label>) -> Self {
        Self(labels)
    }

    /// `n` ports, plus at every set bit of `mask` (bit `j` is port `j`).
    pub fn from_plus_mask(n: usize, mask: u64) -> Self {
        Self(
            (0..n)
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        Label::Plus
                    } else {
                        Label::Minus
                    }
                })
                .collect(),
        )
    }

    /// All ports carry `background` except `port`, which carries `label`.
    pub fn single(n: usize, port: usize, label: Label, background: Label) -> Self {
        let mut labels = vec![background; n];
        labels[port] = label;
        Self(labels)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    #[inline]
    pub fn get(&self, port: usize) -> Label {
        self.0[port]
    }

    pub fn count(&self, label: Label) -> usize {
        self.0.iter().filter(|&&l| l == label).count()
    }

    pub fn with(&self, port: usize, label: Label) -> Self {
        let mut labels = self.0.clone();
        labels[port] = label;
        Self(labels)
    }
}

impl fmt::Display for LabelAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.symbol()))
    }
}

impl fmt::Debug for LabelAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

impl FromStr for LabelAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                Label::from_symbol(c)
                    .ok_or_else(|| Error::Parse(format!("invalid label {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Single-photon internal state `α₊|+⟩ + α₋|−⟩`, normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonState {
    plus: Complex64,
    minus: Complex64,
}

impl PhotonState {
    /// Rejects non-finite or unnormalized amplitudes. Nothing is renormalized.
    pub fn new(plus: Complex64, minus: Complex64) -> Result<Self> {
        if [plus.re, plus.im, minus.re, minus.im]
            .iter()
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite("photon amplitude".into()));
        }
        let norm = plus.norm_sqr() + minus.norm_sqr();
        if (norm - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return Err(Error::Configuration(format!(
                "photon state not normalized: |a+|^2 + |a-|^2 = {norm}"
            )));
        }
        Ok(Self { plus, minus })
    }

    pub fn basis(label: Label) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match label {
            Label::Plus => Self {
                plus: one,
                minus: zero,
            },
            Label::Minus => Self {
                plus: zero,
                minus: one,
            },
        }
    }

    #[inline]
    pub fn amplitude(&self, label: Label) -> Complex64 {
        match label {
            Label::Plus => self.plus,
            Label::Minus => self.minus,
        }
    }

    pub fn plus(&self) -> Complex64 {
        self.plus
    }

    pub fn minus(&self) -> Complex64 {
        self.minus
    }

    /// The same state times `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            plus: self.plus * phase,
            minus: self.minus * phase,
        }
    }

    /// `Some(label)` if the other amplitude is exactly zero.
    pub fn basis_label(&self) -> Option<Label> {
        let zero = Complex64::new(0.0, 0.0);
        match (self.plus == zero, self.minus == zero) {
            (false, true) => Some(Label::Plus),
            (true, false) => Some(Label::Minus),
            _ => None,
        }
    }
}

/// One photon per input port, port 0 first.
#[derive(Clone, Debug, PartialEq)]
pub struct InputConfiguration {
    photons: Vec<PhotonState>,
}

impl InputConfiguration {
    pub fn new(photons: Vec<PhotonState>) -> Result<Self> {
        if photons.is_empty() {
            return Err(Error::Configuration(
                "input needs at least one photon".into(),
            ));
        }
        Ok(Self { photons })
    }

    pub fn from_labels(labels: &[Label]) -> Result<Self> {
        Self::new(labels.iter().map(|&l| PhotonState::basis(l)).collect())
    }

    /// `|+⟩` in port 0 and `|−⟩` everywhere else.
    pub fn w_input(n: usize) -> Result<Self> {
        Self::from_labels(LabelAssignment::single(n, 0, Label::Plus, Label::Minus).labels())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.photons.len()
    }

    pub fn photons(&self) -> &[PhotonState] {
        &self.photons
    }

    #[inline]
    pub fn photon(&self, port: usize) -> &PhotonState {
        &self.photons[port]
    }

    /// Replaces one photon, returning the new configuration.
    pub fn with_photon(&self, port: usize, photon: PhotonState) -> Result<Self> {
        if port >= self.n() {
            return Err(Error::InvalidIndex {
                index: port,
                dim: self.n(),
            });
        }
        let mut photons = self.photons.clone();
        photons[port] = photon;
        Ok(Self { photons })
    }

    /// Labels of an all-basis-state input, or `None` if any photon is a superposition.
    pub fn basis_labels(&self) -> Option<LabelAssignment> {
        self.photons
            .iter()
            .map(PhotonState::basis_label)
            .collect::<Option<Vec<_>>>()
            .map(LabelAssignment::new)
    }
}

impl FromStr for InputConfiguration {
    type Err = Error;

    /// Basis-state input written as a label string, e.g. `+---`.
    fn from_str(s: &str) -> Result<Self> {
        let labels: LabelAssignment = s.parse()?;
        Self::from_labels(labels.labels())
    }
}
