//! Parameter encoding `exp(iξG)`, quantum Fisher information and the
//! Cramér–Rao bound.
//!
//! The primary QFI path is the pure-state variance `4 Var(G)`. Two
//! independent oracles exist to cross-check it: a symmetric logarithmic
//! derivative solved in the eigenbasis of `ρ`, and a fidelity finite
//! difference along the evolution.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catstate::{cat_state, CatAngles, CatParams};
use crate::dicke::{build_operators, DickeVector, SpinJ};
use crate::error::{Error, Result};
use crate::linalg::HermitianSpectrum;

/// QFI at or below this value is reported as a divergent CRB.
pub const QFI_DIVERGENCE: f64 = 1e-14;

/// Accepted finite-difference steps for the fidelity oracle.
pub const FIDELITY_STEP_RANGE: (f64, f64) = (1e-5, 1e-2);

/// Eigenvalue-sum cutoff below which SLD matrix elements are dropped.
const SLD_SUPPORT: f64 = 1e-12;

/// Which angular-momentum component imprints the parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    X,
    Y,
    Z,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::X => "x",
            Generator::Y => "y",
            Generator::Z => "z",
        })
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "jx" => Ok(Generator::X),
            "y" | "jy" => Ok(Generator::Y),
            "z" | "jz" => Ok(Generator::Z),
            other => Err(format!("unknown generator `{other}` (expected x, y or z)")),
        }
    }
}

/// A state together with the parameter value it was evolved to.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub state: DickeVector,
    pub xi: f64,
    pub generator: Generator,
}

impl EvolvedState {
    pub fn new(initial: &DickeVector, generator: Generator, xi: f64) -> Self {
        Self {
            state: evolve(initial, generator, xi),
            xi,
            generator,
        }
    }

    /// Evolves further by `dxi`.
    pub fn advance(&self, dxi: f64) -> Self {
        Self {
            state: evolve(&self.state, self.generator, dxi),
            xi: self.xi + dxi,
            generator: self.generator,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbResult {
    /// `1/√F_Q`, or `+∞` when the QFI is below [`QFI_DIVERGENCE`].
    pub crb: f64,
    pub qfi: f64,
}

impl CrbResult {
    pub fn from_qfi(qfi: f64) -> Self {
        let qfi = qfi.max(0.0);
        let crb = if qfi > QFI_DIVERGENCE {
            1.0 / qfi.sqrt()
        } else {
            f64::INFINITY
        };
        Self { crb, qfi }
    }

    pub fn is_divergent(&self) -> bool {
        self.crb.is_infinite()
    }
}

/// `exp(iξG)|ψ⟩`.
pub fn evolve(state: &DickeVector, g: Generator, xi: f64) -> DickeVector {
    let j = state.spin();
    let amps = match g {
        Generator::Z => {
            let mut a = state.amplitudes().clone();
            for (z, m) in a.iter_mut().zip(j.m_values()) {
                *z *= Complex64::from_polar(1.0, xi * m);
            }
            a
        }
        _ => {
            let ops = build_operators(j);
            HermitianSpectrum::new(ops.generator(g)).apply_exp_i(xi, state.amplitudes())
        }
    };
    DickeVector::from_parts(j, amps)
}

/// `4(⟨G²⟩ − ⟨G⟩²)`, evaluated as `4‖(G − ⟨G⟩)ψ‖²` to avoid cancellation.
pub fn qfi_pure(state: &DickeVector, g: Generator) -> f64 {
    let ops = build_operators(state.spin());
    let psi = state.amplitudes();
    let g_psi = ops.generator(g) * psi;
    let mean = psi.dotc(&g_psi).re;
    let centered = g_psi - psi.map(|z| z * mean);
    4.0 * centered.norm_squared()
}

/// QFI from the symmetric logarithmic derivative of `ρ = |ψ⟩⟨ψ|`.
///
/// `∂ξρ = i[G, ρ]`; in the eigenbasis `{λk, |k⟩}` of `ρ` the SLD is
/// `L_kl = 2⟨k|∂ξρ|l⟩/(λk + λl)`, and the QFI is `Tr[ρ L²]`.
pub fn qfi_sld_oracle(state: &DickeVector, g: Generator) -> f64 {
    let ops = build_operators(state.spin());
    let gen = ops.generator(g);
    let psi = state.amplitudes();
    let rho: DMatrix<Complex64> = psi * psi.adjoint();
    let i = Complex64::i();
    let drho = (gen * &rho - &rho * gen).map(|z| z * i);

    let spectrum = HermitianSpectrum::new(&rho);
    let v = &spectrum.vectors;
    let lambda = &spectrum.values;
    let d_eig = v.adjoint() * drho * v;
    let dim = lambda.len();
    let l_eig = DMatrix::from_fn(dim, dim, |k, l| {
        let s = lambda[k] + lambda[l];
        if s > SLD_SUPPORT {
            d_eig[(k, l)] * (2.0 / s)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let sld = v * l_eig * v.adjoint();
    (rho * &sld * &sld).trace().re
}

/// `8(1 − |⟨ψ(0)|ψ(dξ)⟩|)/dξ²`, a finite-difference QFI estimate.
pub fn qfi_fidelity_oracle(state: &DickeVector, g: Generator, dxi: f64) -> Result<f64> {
    let (lo, hi) = FIDELITY_STEP_RANGE;
    if !(lo..=hi).contains(&dxi) {
        return Err(Error::StepSizeOutOfRange(dxi));
    }
    let start = EvolvedState::new(state, g, 0.0);
    let next = start.advance(dxi);
    let fidelity = start.state.inner(&next.state).norm();
    Ok(8.0 * (1.0 - fidelity) / (dxi * dxi))
}

/// Richardson-extrapolated fidelity oracle over steps `dxi` and `dxi/2`,
/// cancelling the leading `O(dξ²)` error.
pub fn qfi_fidelity_richardson(state: &DickeVector, g: Generator, dxi: f64) -> Result<f64> {
    let coarse = qfi_fidelity_oracle(state, g, dxi)?;
    let fine = qfi_fidelity_oracle(state, g, dxi / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

pub fn crb(state: &DickeVector, g: Generator) -> CrbResult {
    CrbResult::from_qfi(qfi_pure(state, g))
}

/// Builds the cat state for `angles` and evaluates its CRB.
pub fn cat_crb(j: SpinJ, g: Generator, angles: &CatAngles) -> Result<CrbResult> {
    let params = CatParams::from_angles(j, angles)?;
    Ok(crb(&cat_state(&params)?, g))
}
