//! Spin coherent states `|θ, φ, j⟩` in the Dicke basis.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dicke::{build_operators, DickeVector, SpinJ};
use crate::error::{Error, Result};
use crate::linalg::HermitianSpectrum;

/// Slack allowed when validating `θ ∈ [0, π]`; values inside it are clamped.
const THETA_SLACK: f64 = 1e-12;

/// Bloch-sphere angles of one coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    theta: f64,
    phi: f64,
}

impl CoherentParams {
    /// Validates `θ ∈ [0, π]` and reduces `φ` into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(-THETA_SLACK..=PI + THETA_SLACK).contains(&theta) {
            return Err(Error::InvalidAngle {
                name: "theta",
                value: theta,
            });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidAngle {
                name: "phi",
                value: phi,
            });
        }
        Ok(Self {
            theta: theta.clamp(0.0, PI),
            phi: reduce_phase(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `γ = e^{−iφ} tan(θ/2)`; infinite at the north pole.
    pub fn gamma(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.phi) * (self.theta / 2.0).tan()
    }

    fn half_angle_trig(&self) -> (f64, f64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (c, s)
    }
}

/// Reduces a phase into `[0, 2π)`.
pub fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `√C(n, k)` for all `k`, built multiplicatively.
fn sqrt_binomials(n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = 1.0_f64;
    for k in 0..=n {
        out.push(c.sqrt());
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    out
}

/// Amplitudes `√C(2j, j+m) cos(θ/2)^{j−m} sin(θ/2)^{j+m} e^{−iφ(j+m)}`.
///
/// The trigonometric form stays finite at `θ = π`, where `γ` diverges.
pub fn coherent_state(j: SpinJ, p: CoherentParams) -> DickeVector {
    let n = j.two_j();
    let (c, s) = p.half_angle_trig();
    let binom = sqrt_binomials(n);
    let amps = DVector::from_iterator(
        j.dim(),
        (0..=n).map(|k| {
            let mag = binom[k as usize] * c.powi((n - k) as i32) * s.powi(k as i32);
            Complex64::from_polar(mag, -p.phi * k as f64)
        }),
    );
    DickeVector::from_parts(j, amps)
}

/// `⟨θ1,φ1,j|θ2,φ2,j⟩ = [cos(θ1/2)cos(θ2/2) + e^{i(φ1−φ2)} sin(θ1/2)sin(θ2/2)]^{2j}`.
pub fn coherent_overlap(j: SpinJ, p1: CoherentParams, p2: CoherentParams) -> Complex64 {
    let (c1, s1) = p1.half_angle_trig();
    let (c2, s2) = p2.half_angle_trig();
    let base = Complex64::new(c1 * c2, 0.0) + Complex64::from_polar(s1 * s2, p1.phi - p2.phi);
    base.powu(j.two_j())
}

/// `exp[(θ/2)(J+ e^{−iφ} − J− e^{iφ})]`, the rotation taking `|j,−j⟩` to `|θ,φ,j⟩`.
///
/// Computed by diagonalizing the Hermitian matrix `−i·A` of the anti-Hermitian
/// generator `A`, so it is independent of the binomial amplitudes above.
pub fn rotation_matrix(j: SpinJ, p: CoherentParams) -> DMatrix<Complex64> {
    let ops = build_operators(j);
    let half = p.theta / 2.0;
    let a = ops.jp.map(|z| z * Complex64::from_polar(half, -p.phi))
        - ops.jm.map(|z| z * Complex64::from_polar(half, p.phi));
    let h = a.map(|z| z * Complex64::new(0.0, -1.0));
    HermitianSpectrum::new(&h).exp_i(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use proptest::prelude::*;

    fn params(theta: f64, phi: f64) -> CoherentParams {
        CoherentParams::new(theta, phi).unwrap()
    }

    #[test]
    fn south_pole_is_lowest_weight() {
        for two_j in [1, 2, 5, 10] {
            let j = SpinJ::from_two_j(two_j).unwrap();
            let v = coherent_state(j, params(0.0, 1.3));
            let target = DickeVector::basis(j, -(two_j as i32)).unwrap();
            assert!(v.distance(&target) < 1e-15);
        }
    }

    #[test]
    fn north_pole_up_to_phase() {
        let phi = 0.8;
        for two_j in [1, 2, 5] {
            let j = SpinJ::from_two_j(two_j).unwrap();
            let v = coherent_state(j, params(PI, phi));
            let top = DickeVector::basis(j, two_j as i32).unwrap();
            let phase = Complex64::from_polar(1.0, -(two_j as f64) * phi);
            assert!(v.distance(&top.scaled(phase)) < 1e-15);
        }
    }

    #[test]
    fn spin_half_closed_form() {
        let (theta, phi) = (1.1, 2.3);
        let v = coherent_state(SpinJ::HALF, params(theta, phi));
        let a = v.amplitudes();
        assert!((a[0] - (theta / 2.0).cos()).norm() < 1e-15);
        assert!((a[1] - Complex64::from_polar((theta / 2.0).sin(), -phi)).norm() < 1e-15);
    }

    #[test]
    fn gamma_representation_matches_away_from_pole() {
        let j = SpinJ::from_two_j(4).unwrap();
        let p = params(1.2, 0.4);
        let g = p.gamma();
        let norm = (1.0 + g.norm_sqr()).powf(j.value());
        let binom = sqrt_binomials(4);
        let v = coherent_state(j, p);
        for (k, b) in binom.iter().enumerate() {
            let expected = g.powu(k as u32) * b / norm;
            assert!((v.amplitudes()[k] - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn overlap_examples() {
        let j = SpinJ::ONE;
        let p = params(0.7, 1.9);
        assert!((coherent_overlap(j, p, p) - 1.0).norm() < 1e-15);
        let z = coherent_overlap(j, params(0.0, 0.0), params(PI, 0.3));
        assert!(z.norm() < 1e-15);
        let z = coherent_overlap(j, params(PI / 2.0, PI / 2.0), params(PI / 2.0, 0.0));
        assert!((z - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        let direct = coherent_state(j, params(PI / 2.0, PI / 2.0))
            .inner(&coherent_state(j, params(PI / 2.0, 0.0)));
        assert!((direct - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn rotation_identity_at_zero_theta() {
        let j = SpinJ::from_two_j(3).unwrap();
        let u = rotation_matrix(j, params(0.0, 0.9));
        assert!(max_abs(&(u - DMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn rotation_spin_half_closed_form() {
        let (theta, phi) = (2.1, 0.6);
        let u = rotation_matrix(SpinJ::HALF, params(theta, phi));
        let (s, c) = (theta / 2.0).sin_cos();
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                -Complex64::from_polar(s, phi),
                Complex64::from_polar(s, -phi),
                Complex64::new(c, 0.0),
            ],
        );
        assert!(max_abs(&(u - expected)) < 1e-14);
    }

    #[test]
    fn rotation_spin_one_equator() {
        let u = rotation_matrix(SpinJ::ONE, params(PI / 2.0, 0.0));
        let col = u.column(0);
        let expected = [0.5, 1.0 / 2f64.sqrt(), 0.5];
        for k in 0..3 {
            assert!((col[k] - expected[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn invalid_params() {
        assert!(CoherentParams::new(-0.1, 0.0).is_err());
        assert!(CoherentParams::new(3.2, 0.0).is_err());
        assert!(CoherentParams::new(f64::NAN, 0.0).is_err());
        assert!(CoherentParams::new(1.0, f64::INFINITY).is_err());
        let p = CoherentParams::new(1.0, -PI / 2.0).unwrap();
        assert!((p.phi() - 1.5 * PI).abs() < 1e-15);
        assert_eq!(CoherentParams::new(PI + 1e-13, 0.0).unwrap().theta(), PI);
    }

    proptest! {
        #[test]
        fn overlap_is_hermitian_and_bounded(
            two_j in 1u32..12,
            t1 in 0.0..PI, f1 in 0.0..TAU, t2 in 0.0..PI, f2 in 0.0..TAU,
        ) {
            let j = SpinJ::from_two_j(two_j).unwrap();
            let (p1, p2) = (params(t1, f1), params(t2, f2));
            let a = coherent_overlap(j, p1, p2);
            let b = coherent_overlap(j, p2, p1);
            prop_assert!((a - b.conj()).norm() < 1e-14);
            prop_assert!(a.norm() <= 1.0 + 1e-14);
            let direct = coherent_state(j, p1).inner(&coherent_state(j, p2));
            prop_assert!((a - direct).norm() < 1e-12);
        }

        #[test]
        fn states_are_normalized(two_j in 1u32..=64, t in 0.0..=PI, f in 0.0..TAU) {
            let j = SpinJ::from_two_j(two_j).unwrap();
            prop_assert!((coherent_state(j, params(t, f)).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn rotation_is_unitary(two_j in 1u32..=20, t in 0.0..=PI, f in 0.0..TAU) {
            let j = SpinJ::from_two_j(two_j).unwrap();
            let u = rotation_matrix(j, params(t, f));
            let r = u.adjoint() * &u - DMatrix::identity(j.dim(), j.dim());
            prop_assert!(max_abs(&r) < 1e-10);
        }
    }
}
