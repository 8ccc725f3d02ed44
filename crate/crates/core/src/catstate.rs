//! Equal-weight superpositions `N(|θ1,φ1,j⟩ + |θ2,φ2,j⟩)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherent::{coherent_overlap, coherent_state, CoherentParams};
use crate::dicke::{DickeVector, SpinJ};
use crate::error::{Error, Result};

/// Below this squared norm of the unnormalized sum the cat is rejected.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Raw angles `(θ1, θ2, φ1, φ2)` of a two-component cat, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl CatAngles {
    pub const fn new(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Self {
        Self {
            theta1,
            theta2,
            phi1,
            phi2,
        }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.theta2, self.theta1, self.phi2, self.phi1)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.theta1, self.theta2, self.phi1, self.phi2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatParams {
    pub j: SpinJ,
    pub p1: CoherentParams,
    pub p2: CoherentParams,
}

impl CatParams {
    pub fn new(j: SpinJ, p1: CoherentParams, p2: CoherentParams) -> Self {
        Self { j, p1, p2 }
    }

    pub fn from_angles(j: SpinJ, a: &CatAngles) -> Result<Self> {
        Ok(Self {
            j,
            p1: CoherentParams::new(a.theta1, a.phi1)?,
            p2: CoherentParams::new(a.theta2, a.phi2)?,
        })
    }

    pub fn overlap(&self) -> Complex64 {
        coherent_overlap(self.j, self.p1, self.p2)
    }

    /// `2 + 2 Re⟨1|2⟩`, the squared norm of the unnormalized sum.
    pub fn unnormalized_norm_sq(&self) -> f64 {
        2.0 + 2.0 * self.overlap().re
    }
}

/// `N = 1/√(2 + 2 Re⟨1|2⟩)`.
pub fn normalization(c: &CatParams) -> Result<f64> {
    let norm_sq = c.unnormalized_norm_sq();
    if norm_sq <= DEGENERACY_FLOOR {
        return Err(Error::DegenerateCat { norm_sq });
    }
    Ok(1.0 / norm_sq.sqrt())
}

pub fn cat_state(c: &CatParams) -> Result<DickeVector> {
    let n = normalization(c)?;
    let v1 = coherent_state(c.j, c.p1);
    let v2 = coherent_state(c.j, c.p2);
    let amps = (v1.amplitudes() + v2.amplitudes()).map(|z| z * n);
    Ok(DickeVector::from_parts(c.j, amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn cat(j: SpinJ, a: CatAngles) -> CatParams {
        CatParams::from_angles(j, &a).unwrap()
    }

    /// Spin-1/2 normalization written out in half-angle trigonometry.
    fn half_normalization_explicit(a: &CatAngles) -> f64 {
        let (s1, c1) = (a.theta1 / 2.0).sin_cos();
        let (s2, c2) = (a.theta2 / 2.0).sin_cos();
        1.0 / (2.0 * (1.0 + c1 * c2 + (a.phi1 - a.phi2).cos() * s1 * s2)).sqrt()
    }

    #[test]
    fn pole_superposition_is_single_photon_noon() {
        let phi2 = 0.9;
        let v = cat_state(&cat(SpinJ::HALF, CatAngles::new(0.0, PI, 0.0, phi2))).unwrap();
        let a = v.amplitudes();
        assert!((a[0] - FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((a[1] - Complex64::from_polar(FRAC_1_SQRT_2, -phi2)).norm() < 1e-15);
    }

    #[test]
    fn identical_components_give_coherent_state() {
        let j = SpinJ::from_two_j(3).unwrap();
        let c = cat(j, CatAngles::new(1.0, 1.0, 0.4, 0.4));
        assert!((normalization(&c).unwrap() - 0.5).abs() < 1e-15);
        let v = cat_state(&c).unwrap();
        assert!(v.distance(&coherent_state(j, c.p1)) < 1e-15);
    }

    #[test]
    fn normalization_examples() {
        let n = normalization(&cat(SpinJ::ONE, CatAngles::new(0.0, PI, 0.0, 0.0))).unwrap();
        assert!((n - FRAC_1_SQRT_2).abs() < 1e-15);
        let n = normalization(&cat(
            SpinJ::HALF,
            CatAngles::new(PI / 2.0, PI / 2.0, 0.3, 0.3),
        ))
        .unwrap();
        assert!((n - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spin_half_normalization_matches_explicit_form_on_grid() {
        let steps = 20;
        for a in 0..steps {
            for b in 0..steps {
                for d in 0..steps {
                    let t1 = PI * a as f64 / (steps - 1) as f64;
                    let t2 = PI * b as f64 / (steps - 1) as f64;
                    let dphi = 2.0 * PI * d as f64 / steps as f64;
                    let angles = CatAngles::new(t1, t2, dphi, 0.0);
                    let c = cat(SpinJ::HALF, angles);
                    match normalization(&c) {
                        Ok(n) => {
                            let e = half_normalization_explicit(&angles);
                            assert!((n - e).abs() < 1e-12 * e.max(1.0), "{angles:?}");
                        }
                        Err(Error::DegenerateCat { .. }) => {
                            assert!(c.unnormalized_norm_sq() <= DEGENERACY_FLOOR)
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn cancelling_components_are_rejected() {
        // same north-pole state with opposite sign: e^{-iφ}|+⟩ and −e^{-iφ}|+⟩
        let c = cat(SpinJ::HALF, CatAngles::new(PI, PI, 0.0, PI));
        assert!(matches!(cat_state(&c), Err(Error::DegenerateCat { .. })));
        let c = cat(SpinJ::ONE, CatAngles::new(PI, PI, 0.0, PI / 2.0));
        assert!(matches!(
            normalization(&c),
            Err(Error::DegenerateCat { .. })
        ));
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let j = SpinJ::from_two_j(4).unwrap();
        let a = CatAngles::new(0.3, 2.2, 1.7, 5.1);
        let v = cat_state(&cat(j, a)).unwrap();
        let w = cat_state(&cat(j, a.swapped())).unwrap();
        assert_eq!(v, w);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}
