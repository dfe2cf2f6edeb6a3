//! Canonical entangled states, single-port Pauli corrections, fidelity, and
//! the decomposition of an arbitrary four-photon output into its double
//! singlet, GHZ and two W components.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scattering::{InputConfiguration, Label, LabelAssignment, PostselectedState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalStateKind {
    /// One `+` among `n` ports.
    W(usize),
    /// One `−` among `n` ports.
    WPrimed(usize),
    Ghz4,
    DoubleSinglet4,
}

impl CanonicalStateKind {
    pub fn n(self) -> usize {
        match self {
            Self::W(n) | Self::WPrimed(n) => n,
            Self::Ghz4 | Self::DoubleSinglet4 => 4,
        }
    }

    /// Every canonical state defined on `n` ports.
    pub fn for_ports(n: usize) -> Vec<Self> {
        let mut kinds = Vec::new();
        if n >= 2 {
            kinds.extend([Self::W(n), Self::WPrimed(n)]);
        }
        if n == 4 {
            kinds.extend([Self::Ghz4, Self::DoubleSinglet4]);
        }
        kinds
    }
}

impl fmt::Display for CanonicalStateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::W(n) => write!(f, "W({n})"),
            Self::WPrimed(n) => write!(f, "W'({n})"),
            Self::Ghz4 => write!(f, "GHZ4"),
            Self::DoubleSinglet4 => write!(f, "DS4"),
        }
    }
}

fn labels(s: &str) -> LabelAssignment {
    s.parse().expect("static label string")
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Normalized canonical state.
///
/// The W states carry the sign `(-1)^j` on the excitation in port `j` when
/// `n` is even and a constant sign when `n` is odd, which is the pattern the
/// Bell multiport produces. The all-positive W form is obtained by applying
/// `z` to every odd (0-based) port with [`apply_local_pauli`].
pub fn canonical_state(kind: CanonicalStateKind) -> Result<PostselectedState> {
    match kind {
        CanonicalStateKind::W(n) | CanonicalStateKind::WPrimed(n) => {
            if n < 2 {
                return Err(Error::Configuration(format!(
                    "{kind} needs at least 2 ports"
                )));
            }
            let (excited, background) = match kind {
                CanonicalStateKind::W(_) => (Label::Plus, Label::Minus),
                _ => (Label::Minus, Label::Plus),
            };
            let mag = 1.0 / (n as f64).sqrt();
            let terms = (0..n).map(|j| {
                let sign = if n % 2 == 0 && j % 2 == 1 { -1.0 } else { 1.0 };
                (
                    LabelAssignment::single(n, j, excited, background),
                    real(sign * mag),
                )
            });
            PostselectedState::from_terms(n, terms)
        }
        CanonicalStateKind::Ghz4 => PostselectedState::from_terms(
            4,
            [
                (labels("+-+-"), real(FRAC_1_SQRT_2)),
                (labels("-+-+"), real(-FRAC_1_SQRT_2)),
            ],
        ),
        CanonicalStateKind::DoubleSinglet4 => PostselectedState::from_terms(
            4,
            [
                (labels("++--"), real(0.5)),
                (labels("--++"), real(0.5)),
                (labels("+--+"), real(-0.5)),
                (labels("-++-"), real(-0.5)),
            ],
        ),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl FromStr for PauliAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Self::X),
            "y" | "Y" => Ok(Self::Y),
            "z" | "Z" => Ok(Self::Z),
            _ => Err(Error::Configuration(format!("unknown Pauli axis {s:?}"))),
        }
    }
}

/// Applies a Pauli operator to the photon in `port`, with `|+⟩ ≙ |0⟩` and
/// `|−⟩ ≙ |1⟩`: `x` swaps labels, `z` negates `−`, and `y` maps
/// `|+⟩ → i|−⟩`, `|−⟩ → −i|+⟩`.
pub fn apply_local_pauli(
    s: &PostselectedState,
    port: usize,
    axis: PauliAxis,
) -> Result<PostselectedState> {
    if port >= s.n() {
        return Err(Error::Configuration(format!(
            "port {port} out of range for {} ports",
            s.n()
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    let one = real(1.0);
    let mapped = s
        .terms()
        .map(|(labels, amp)| {
            let label = labels.get(port);
            let (new_label, phase) = match (axis, label) {
                (PauliAxis::X, l) => (l.flipped(), one),
                (PauliAxis::Y, Label::Plus) => (Label::Minus, i),
                (PauliAxis::Y, Label::Minus) => (Label::Plus, -i),
                (PauliAxis::Z, Label::Plus) => (Label::Plus, one),
                (PauliAxis::Z, Label::Minus) => (Label::Minus, -one),
            };
            (labels.with(port, new_label), amp * phase)
        })
        .collect();
    Ok(PostselectedState::from_map_unchecked(s.n(), mapped))
}

/// `|⟨â|b̂⟩|²` of the normalized states; insensitive to global phases.
pub fn fidelity(a: &PostselectedState, b: &PostselectedState) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::Configuration(format!(
            "cannot compare {} and {} ports",
            a.n(),
            b.n()
        )));
    }
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    if na <= 1e-20 || nb <= 1e-20 {
        return Err(Error::EmptyState);
    }
    Ok((a.inner(b).norm_sqr() / (na * nb)).clamp(0.0, 1.0))
}

/// Input label patterns whose amplitude products feed the four coefficients,
/// in order γ₁ … γ₁₄.
pub const GAMMA_PATTERNS: [&str; 14] = [
    "++--", "--++", "-++-", "+--+", // double singlet
    "+-+-", "-+-+", // GHZ
    "+---", "-+--", "--+-", "---+", // W
    "-+++", "+-++", "++-+", "+++-", // W'
];

/// Coefficients of the four-photon output on the double-singlet, GHZ, W and
/// W' components, with the products `γ_k` they are built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub c_ds: Complex64,
    pub c_ghz: Complex64,
    pub c_w: Complex64,
    pub c_w_prime: Complex64,
    pub gammas: [Complex64; 14],
}

impl DecompositionResult {
    /// The four orthonormal component states in the order DS, GHZ, W, W'.
    ///
    /// The GHZ component is `(|−+−+⟩ − |+−+−⟩)/√2`, i.e. canonical GHZ4 with
    /// the opposite overall sign: that is the phase convention under which the
    /// coefficient formulas in [`decompose_general4`] hold term by term
    /// alongside the other three canonical states.
    pub fn components() -> [PostselectedState; 4] {
        let ghz = canonical_state(CanonicalStateKind::Ghz4)
            .expect("valid kind")
            .scaled(real(-1.0));
        [
            canonical_state(CanonicalStateKind::DoubleSinglet4).expect("valid kind"),
            ghz,
            canonical_state(CanonicalStateKind::W(4)).expect("valid kind"),
            canonical_state(CanonicalStateKind::WPrimed(4)).expect("valid kind"),
        ]
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.c_ds, self.c_ghz, self.c_w, self.c_w_prime]
    }

    /// Unnormalized output state assembled from the four components.
    pub fn reconstruct(&self) -> PostselectedState {
        let mut terms = std::collections::BTreeMap::new();
        for (coeff, component) in self.coefficients().into_iter().zip(Self::components()) {
            for (labels, amp) in component.terms() {
                *terms.entry(labels.clone()).or_insert(real(0.0)) += coeff * amp;
            }
        }
        PostselectedState::from_map_unchecked(4, terms)
    }

    /// The components are orthonormal, so this is `Σ |c|²`.
    pub fn success_probability(&self) -> f64 {
        self.coefficients().iter().map(Complex64::norm_sqr).sum()
    }
}

/// Closed-form decomposition of the postselected output of a 4×4 Bell
/// multiport for an arbitrary product input.
pub fn decompose_general4(input: &InputConfiguration) -> Result<DecompositionResult> {
    if input.n() != 4 {
        return Err(Error::Configuration(format!(
            "four-photon decomposition needs 4 photons, got {}",
            input.n()
        )));
    }
    let mut gammas = [real(0.0); 14];
    for (gamma, pattern) in gammas.iter_mut().zip(GAMMA_PATTERNS) {
        *gamma = labels(pattern)
            .labels()
            .iter()
            .enumerate()
            .map(|(port, &l)| input.photon(port).amplitude(l))
            .product();
    }
    let g = |k: usize| gammas[k - 1];
    Ok(DecompositionResult {
        c_ds: Complex64::new(0.0, 0.25) * (g(1) + g(2) - g(3) - g(4)),
        c_ghz: (g(5) - g(6)) / (2.0 * 2f64.sqrt()),
        c_w: (g(8) + g(10) - g(7) - g(9)) * 0.25,
        c_w_prime: (g(12) + g(14) - g(11) - g(13)) * 0.25,
        gammas,
    })
}
