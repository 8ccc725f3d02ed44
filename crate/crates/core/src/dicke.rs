//! Dicke basis bookkeeping and dense su(2) generator matrices.
//!
//! Amplitudes are stored in ascending `m`: index `k = m + j`, so the lowest
//! weight state `|j,-j⟩` sits at index 0 and `Jz` has monotone diagonal
//! entries. Half-integer quantum numbers are carried as `2j` / `2m` integers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metrology::Generator;

/// Largest supported `2j`.
pub const MAX_TWO_J: u32 = 64;

/// Total spin `j`, stored as `2j` so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinJ {
    two_j: u32,
}

impl SpinJ {
    pub const HALF: SpinJ = SpinJ { two_j: 1 };
    pub const ONE: SpinJ = SpinJ { two_j: 2 };

    pub fn from_two_j(two_j: u32) -> Result<Self> {
        if two_j == 0 || two_j > MAX_TWO_J {
            return Err(Error::InvalidSpin(two_j as i64));
        }
        Ok(Self { two_j })
    }

    /// Accepts `j` as a float; `2j` must be a positive integer.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 || twice.round() < 1.0 {
            return Err(Error::InvalidSpin(if twice.is_finite() {
                twice.round() as i64
            } else {
                -1
            }));
        }
        Self::from_two_j(twice.round() as u32)
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn value(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// Heisenberg-limited CRB `1/(2j)`.
    pub fn heisenberg_limit(self) -> f64 {
        1.0 / self.two_j as f64
    }

    /// Basis index of `2m`, or an error when `m` is not one of `-j..=j`.
    pub fn index_of(self, two_m: i32) -> Result<usize> {
        let tj = self.two_j as i32;
        if two_m < -tj || two_m > tj || (two_m + tj) % 2 != 0 {
            return Err(Error::MOutOfRange {
                two_j: self.two_j,
                two_m,
            });
        }
        Ok(((two_m + tj) / 2) as usize)
    }

    /// `2m` of basis index `k`.
    pub fn two_m_of(self, k: usize) -> i32 {
        2 * k as i32 - self.two_j as i32
    }

    /// `m` values in storage order.
    pub fn m_values(self) -> impl Iterator<Item = f64> {
        let j = self.value();
        (0..self.dim()).map(move |k| k as f64 - j)
    }
}

impl std::fmt::Display for SpinJ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Pure state in the Dicke basis of a fixed spin.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    j: SpinJ,
    amps: DVector<Complex64>,
}

impl DickeVector {
    pub fn new(j: SpinJ, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != j.dim() {
            return Err(Error::DimensionMismatch {
                len: amps.len(),
                dim: j.dim(),
            });
        }
        Ok(Self { j, amps })
    }

    pub(crate) fn from_parts(j: SpinJ, amps: DVector<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), j.dim());
        Self { j, amps }
    }

    /// The basis state `|j, m⟩`.
    pub fn basis(j: SpinJ, two_m: i32) -> Result<Self> {
        let k = j.index_of(two_m)?;
        let mut amps = DVector::zeros(j.dim());
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { j, amps })
    }

    pub fn spin(&self) -> SpinJ {
        self.j
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, two_m: i32) -> Result<Complex64> {
        Ok(self.amps[self.j.index_of(two_m)?])
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DickeVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    pub fn scaled(&self, factor: Complex64) -> DickeVector {
        Self::from_parts(self.j, self.amps.map(|z| z * factor))
    }

    pub fn distance(&self, other: &DickeVector) -> f64 {
        (&self.amps - &other.amps).norm()
    }
}

/// Dense matrices of `J+`, `J-`, `Jx`, `Jy`, `Jz` for one spin (ħ = 1).
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub j: SpinJ,
    pub jp: DMatrix<Complex64>,
    pub jm: DMatrix<Complex64>,
    pub jx: DMatrix<Complex64>,
    pub jy: DMatrix<Complex64>,
    pub jz: DMatrix<Complex64>,
}

impl SpinOperators {
    pub fn generator(&self, g: Generator) -> &DMatrix<Complex64> {
        match g {
            Generator::X => &self.jx,
            Generator::Y => &self.jy,
            Generator::Z => &self.jz,
        }
    }
}

/// `√(j(j+1) − m(m+1))`, the matrix element `⟨j,m+1|J+|j,m⟩`.
pub fn raising_coefficient(j: SpinJ, two_m: i32) -> f64 {
    let (tj, tm) = (j.two_j as f64, two_m as f64);
    // 4·(j(j+1) − m(m+1)) = (2j)(2j+2) − (2m)(2m+2), exact in integers
    ((tj * (tj + 2.0) - tm * (tm + 2.0)) / 4.0).max(0.0).sqrt()
}

pub fn build_operators(j: SpinJ) -> SpinOperators {
    let d = j.dim();
    let mut jp = DMatrix::<Complex64>::zeros(d, d);
    for k in 0..d - 1 {
        jp[(k + 1, k)] = Complex64::new(raising_coefficient(j, j.two_m_of(k)), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).map(|z| z * 0.5);
    // (J+ − J−)/(2i) = −i (J+ − J−)/2
    let jy = (&jp - &jm).map(|z| z * Complex64::new(0.0, -0.5));
    let jz = DMatrix::from_diagonal(&DVector::from_iterator(
        d,
        j.m_values().map(|m| Complex64::new(m, 0.0)),
    ));
    SpinOperators {
        j,
        jp,
        jm,
        jx,
        jy,
        jz,
    }
}

/// Schwinger map `|j,m⟩ → |Na⟩|Nb⟩` with `Na = j+m`, `Nb = j−m`.
pub fn dicke_to_fock(j: SpinJ, two_m: i32) -> Result<(u32, u32)> {
    let k = j.index_of(two_m)? as u32;
    Ok((k, j.two_j - k))
}

/// Inverse of [`dicke_to_fock`]: returns `(j, 2m)` for photon numbers `(Na, Nb)`.
pub fn fock_to_dicke(na: u32, nb: u32) -> Result<(SpinJ, i32)> {
    let j = SpinJ::from_two_j(na + nb)?;
    Ok((j, na as i32 - nb as i32))
}
