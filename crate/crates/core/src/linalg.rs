//! Small dense helpers shared by the coherent-state and metrology modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Spectral decomposition of a Hermitian matrix, used to exponentiate it.
#[derive(Debug, Clone)]
pub(crate) struct HermitianSpectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl HermitianSpectrum {
    pub fn new(h: &DMatrix<Complex64>) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    /// `exp(i t H)` as a dense unitary.
    pub fn exp_i(&self, t: f64) -> DMatrix<Complex64> {
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values
                .iter()
                .map(|&l| Complex64::from_polar(1.0, t * l)),
        );
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, c| {
            self.vectors[(r, c)] * phases[c]
        });
        scaled * self.vectors.adjoint()
    }

    /// `exp(i t H) v` without forming the full unitary.
    pub fn apply_exp_i(&self, t: f64, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut coeffs = self.vectors.adjoint() * v;
        for (c, &l) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::from_polar(1.0, t * l);
        }
        &self.vectors * coeffs
    }
}

#[cfg(test)]
pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_pauli_x() {
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let t = 0.37_f64;
        let u = HermitianSpectrum::new(&h).exp_i(t);
        let i = Complex64::i();
        assert!((u[(0, 0)] - t.cos()).norm() < 1e-14);
        assert!((u[(0, 1)] - i * t.sin()).norm() < 1e-14);
        assert!((u[(1, 0)] - i * t.sin()).norm() < 1e-14);
        let residual = u.adjoint() * &u - DMatrix::identity(2, 2);
        assert!(max_abs(&residual) < 1e-14);
    }
}
