//! Dense complex matrices and the Bell multiport transition matrix.
//!
//! All indices in this API are 0-based. Row `j` of a [`TransitionMatrix`]
//! is an output port and column `i` an input port, so `get(j, i)` is the
//! amplitude for a photon entering port `i` to leave through port `j`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum-norm tolerance applied when a [`TransitionMatrix`] is constructed.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Row-major dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(format!(
                "entry ({}, {})",
                k / cols.max(1),
                k % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Ragged input is rejected.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (k, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::InvalidDimension(format!(
                    "row {k} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::new(rows, cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            data[k * n + k] = Complex64::new(1.0, 0.0);
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[_]>::to_vec)
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|z| *z = z.conj());
        t
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidDimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * rhs.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                for c in 0..rhs.cols {
                    data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidDimension(format!(
                "cannot compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Removes one row and one column, preserving the order of the rest.
    pub fn delete(&self, drop_row: usize, drop_col: usize) -> Result<Self> {
        self.delete_many(&[drop_row], &[drop_col])
    }

    /// Removes every listed row and column in a single pass.
    pub fn delete_many(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Result<Self> {
        for &r in drop_rows {
            if r >= self.rows {
                return Err(Error::InvalidIndex {
                    index: r,
                    dim: self.rows,
                });
            }
        }
        for &c in drop_cols {
            if c >= self.cols {
                return Err(Error::InvalidIndex {
                    index: c,
                    dim: self.cols,
                });
            }
        }
        let keep_rows: Vec<usize> = (0..self.rows).filter(|r| !drop_rows.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|c| !drop_cols.contains(c)).collect();
        let mut data = Vec::with_capacity(keep_rows.len() * keep_cols.len());
        for &r in &keep_rows {
            for &c in &keep_cols {
                data.push(self.get(r, c));
            }
        }
        Ok(Self {
            rows: keep_rows.len(),
            cols: keep_cols.len(),
            data,
        })
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `exp(2πi k / n)` with `k` reduced mod `n` first, so equal residues give
/// bit-identical values. Multiples of a quarter turn are returned exactly and
/// `ω^(n-k)` is the exact conjugate of `ω^k`.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    if 2 * k > n {
        return root_of_unity(n - k, n).conj();
    }
    let angle = 2.0 * PI * k as f64 / n as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// Largest elementwise deviation of `m† m` from the identity.
pub fn unitarity_deviation(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::InvalidDimension(format!(
            "unitarity needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let product = m.adjoint().matmul(m)?;
    product.max_abs_diff(&ComplexMatrix::identity(m.rows()))
}

pub fn check_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Configuration(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(unitarity_deviation(m)? <= tol)
}

/// An N×N unitary mapping input ports (columns) to output ports (rows).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct TransitionMatrix {
    inner: ComplexMatrix,
}

impl TransitionMatrix {
    /// Wraps `m` after checking it is square, non-empty and unitary within
    /// [`UNITARY_TOLERANCE`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() == 0 {
            return Err(Error::InvalidDimension(
                "transition matrix must have at least one port".into(),
            ));
        }
        let deviation = unitarity_deviation(&m)?;
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARY_TOLERANCE,
            });
        }
        Ok(Self { inner: m })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    /// Amplitude for input port `input` to reach output port `output`.
    #[inline]
    pub fn get(&self, output: usize, input: usize) -> Complex64 {
        self.inner.get(output, input)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }
}

/// Discrete Fourier transform multiport: `U[j][i] = ω_n^(j·i) / √n` (0-based).
pub fn build_bell_multiport(n: usize) -> Result<TransitionMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "Bell multiport needs n >= 1".into(),
        ));
    }
    let norm = 1.0 / (n as f64).sqrt();
    let m = ComplexMatrix::from_fn(n, n, |j, i| root_of_unity(j * i % n, n) * norm)?;
    TransitionMatrix::new(m)
}

/// Deletes one output row and one input column from `m`.
pub fn reduced_matrix(
    m: &TransitionMatrix,
    drop_row: usize,
    drop_col: usize,
) -> Result<ComplexMatrix> {
    if m.n() < 2 {
        return Err(Error::InvalidDimension(
            "reduced matrix needs n >= 2".into(),
        ));
    }
    m.as_matrix().delete(drop_row, drop_col)
}

/// JSON shape `{"n": int, "entries": [[[re, im], ...], ...]}`, row-major.
/// `n` is optional on input and checked against `entries` when present.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows: Vec<Vec<Complex64>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let m = ComplexMatrix::from_rows(&rows)?;
        if let Some(n) = self.n {
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidDimension(format!(
                    "declared n = {n} but entries are {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(m)
    }
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let entries = m
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            n: m.is_square().then_some(m.rows()),
            entries,
        }
    }
}

impl From<TransitionMatrix> for MatrixJson {
    fn from(m: TransitionMatrix) -> Self {
        Self::from(&m.inner)
    }
}

impl TryFrom<MatrixJson> for TransitionMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        TransitionMatrix::new(json.to_matrix()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bell_one_is_identity() {
        let u = build_bell_multiport(1).unwrap();
        assert_eq!(u.as_matrix(), &ComplexMatrix::identity(1));
    }

    #[test]
    fn bell_two_is_balanced_beam_splitter() {
        let u = build_bell_multiport(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected =
            ComplexMatrix::from_rows(&[[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]).unwrap();
        assert!(u.as_matrix().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn bell_four_matches_explicit_matrix() {
        let u = build_bell_multiport(4).unwrap();
        let (o, i, m, mi) = (c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5));
        let expected =
            ComplexMatrix::from_rows(&[[o, o, o, o], [o, i, m, mi], [o, m, o, m], [o, mi, m, i]])
                .unwrap();
        // quarter-turn roots are exact, so the match is bitwise
        assert_eq!(u.as_matrix(), &expected);
    }

    #[test]
    fn zero_ports_rejected() {
        assert!(matches!(
            build_bell_multiport(0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn unitarity_checks() {
        assert!(check_unitary(&ComplexMatrix::identity(3), 1e-10).unwrap());
        assert!(check_unitary(build_bell_multiport(4).unwrap().as_matrix(), 1e-10).unwrap());
        let doubled = ComplexMatrix::identity(2).scale(c(2.0, 0.0));
        assert!(!check_unitary(&doubled, 1e-10).unwrap());
        let rect = ComplexMatrix::new(2, 3, vec![c(0.0, 0.0); 6]).unwrap();
        assert!(matches!(
            check_unitary(&rect, 1e-10),
            Err(Error::InvalidDimension(_))
        ));
        assert!(check_unitary(&ComplexMatrix::identity(2), 0.0).is_err());
    }

    #[test]
    fn non_unitary_transition_rejected() {
        let doubled = ComplexMatrix::identity(2).scale(c(2.0, 0.0));
        assert!(matches!(
            TransitionMatrix::new(doubled),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn bell_is_unitary_and_symmetric_up_to_32() {
        for n in 1..=32 {
            let u = build_bell_multiport(n).unwrap();
            assert!(check_unitary(u.as_matrix(), 1e-10).unwrap(), "n = {n}");
            assert_eq!(u.as_matrix(), &u.as_matrix().transpose(), "n = {n}");
        }
    }

    #[test]
    fn bell_rows_after_first_sum_to_zero() {
        for n in 2..=20 {
            let u = build_bell_multiport(n).unwrap();
            for j in 1..n {
                let s: Complex64 = u.as_matrix().row(j).iter().sum();
                assert!(s.norm() < 1e-13, "n = {n}, row {j}: {s}");
            }
            let first: Complex64 = u.as_matrix().row(0).iter().sum();
            assert!((first - (n as f64).sqrt()).norm() < 1e-13);
        }
    }

    #[test]
    fn reduced_bell4_first_row_first_col() {
        let u = build_bell_multiport(4).unwrap();
        let red = reduced_matrix(&u, 0, 0).unwrap();
        let w = |k: usize| root_of_unity(k, 4) * 0.5;
        let expected =
            ComplexMatrix::from_rows(&[[w(1), w(2), w(3)], [w(2), w(4), w(6)], [w(3), w(6), w(9)]])
                .unwrap();
        assert_eq!(red, expected);
    }

    #[test]
    fn reduced_bell4_second_row_first_col() {
        let u = build_bell_multiport(4).unwrap();
        let red = reduced_matrix(&u, 1, 0).unwrap();
        let w = |k: usize| root_of_unity(k, 4) * 0.5;
        let expected =
            ComplexMatrix::from_rows(&[[w(0), w(0), w(0)], [w(2), w(4), w(6)], [w(3), w(6), w(9)]])
                .unwrap();
        assert_eq!(red, expected);
    }

    #[test]
    fn reduced_two_by_two_keeps_corner() {
        let m = ComplexMatrix::from_rows(&[[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 1.0)]])
            .unwrap();
        let red = m.delete(0, 0).unwrap();
        assert_eq!(red.entries(), &[c(4.0, 1.0)]);
    }

    #[test]
    fn reduced_index_out_of_range() {
        let u = build_bell_multiport(3).unwrap();
        assert!(matches!(
            reduced_matrix(&u, 3, 0),
            Err(Error::InvalidIndex { index: 3, dim: 3 })
        ));
        assert!(matches!(
            reduced_matrix(&u, 0, 7),
            Err(Error::InvalidIndex { .. })
        ));
        assert!(reduced_matrix(&build_bell_multiport(1).unwrap(), 0, 0).is_err());
    }

    #[test]
    fn double_deletion_commutes() {
        let m = build_bell_multiport(6).unwrap().as_matrix().clone();
        let shift = |idx: usize, removed: usize| idx - usize::from(idx > removed);
        for (r1, r2, c1, c2) in [(0, 2, 0, 3), (5, 1, 1, 4), (3, 4, 3, 2)] {
            let direct = m.delete_many(&[r1, r2], &[c1, c2]).unwrap();
            let first = m
                .delete(r1, c1)
                .unwrap()
                .delete(shift(r2, r1), shift(c2, c1))
                .unwrap();
            let second = m
                .delete(r2, c2)
                .unwrap()
                .delete(shift(r1, r2), shift(c1, c2))
                .unwrap();
            assert_eq!(direct, first);
            assert_eq!(direct, second);
        }
    }

    #[test]
    fn json_round_trip() {
        let u = build_bell_multiport(5).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.starts_with("{\"n\":5,\"entries\":[[["));
        let back: TransitionMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn json_rejects_non_unitary() {
        let bad = r#"{"n": 2, "entries": [[[2,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<TransitionMatrix>(bad).is_err());
        let mismatch = r#"{"n": 3, "entries": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<TransitionMatrix>(mismatch).is_err());
    }
}
