#![allow(dead_code)]

use std::collections::BTreeMap;

use multiport::{
    Complex64, ComplexMatrix, InputConfiguration, Label, LabelAssignment, PhotonState,
    TransitionMatrix,
};
use rand::Rng;

pub fn random_in_disk<R: Rng>(rng: &mut R) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| random_in_disk(rng)).unwrap()
}

pub fn random_photon<R: Rng>(rng: &mut R) -> PhotonState {
    loop {
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm > 1e-3 {
            return PhotonState::new(a / norm, b / norm).unwrap();
        }
    }
}

pub fn random_input<R: Rng>(rng: &mut R, n: usize) -> InputConfiguration {
    InputConfiguration::new((0..n).map(|_| random_photon(rng)).collect()).unwrap()
}

/// Haar-ish random unitary from Gram–Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> TransitionMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| random_in_disk(rng)).collect();
        for q in &cols {
            let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(q).for_each(|(x, a)| *x -= proj * a);
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    TransitionMatrix::new(ComplexMatrix::from_fn(n, n, |r, c| cols[c][r]).unwrap()).unwrap()
}

/// All permutations of `0..n` by recursive insertion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Postselected amplitudes by the literal double sum: over every permutation
/// `σ` (photon `i` to port `σ(i)`) and every choice of label per photon.
pub fn postselect_by_permutation_sum(
    u: &TransitionMatrix,
    input: &InputConfiguration,
) -> BTreeMap<LabelAssignment, Complex64> {
    let n = input.n();
    let mut out: BTreeMap<LabelAssignment, Complex64> = BTreeMap::new();
    for sigma in permutations(n) {
        for choice in 0..1u32 << n {
            let mut labels = vec![Label::Plus; n];
            let mut amp = Complex64::new(1.0, 0.0);
            for (i, &port) in sigma.iter().enumerate() {
                let label = if choice >> i & 1 == 1 {
                    Label::Minus
                } else {
                    Label::Plus
                };
                labels[port] = label;
                amp *= u.get(port, i) * input.photon(i).amplitude(label);
            }
            *out.entry(LabelAssignment::new(labels)).or_default() += amp;
        }
    }
    out
}
