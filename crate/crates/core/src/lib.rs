//! Quantum Fisher information and Cramér–Rao bounds for superpositions of
//! two SU(2) spin coherent states.
//!
//! The crate is organised bottom-up:
//!
//! - [`dicke`]: spin quantum numbers, Dicke basis vectors, dense su(2) generator
//!   matrices and the Dicke ↔ two-mode Fock map.
//! - [`coherent`]: spin coherent states, their analytic overlap and the rotation
//!   operator used to cross-check them.
//! - [`catstate`]: normalized equal-weight superpositions of two coherent states.
//! - [`metrology`]: unitary parameter encoding `exp(iξG)`, the quantum Fisher
//!   information (variance route plus symmetric-logarithmic-derivative and
//!   fidelity oracles) and the Cramér–Rao bound.
//! - [`closedform`]: analytic CRB expressions for spin-1/2 and spin-1 cats.
//! - [`scan`]: CRB density grids and a multistart search for Heisenberg-limited
//!   configurations.
//! - [`cli`]: the `spincat` command-line front end.
//!
//! ```
//! use spincat::{cat_crb, CatAngles, Generator, SpinJ};
//!
//! // N00N state of two photons: superposition of the two Bloch-sphere poles.
//! let noon = CatAngles::new(0.0, std::f64::consts::PI, 0.0, 0.0);
//! let result = cat_crb(SpinJ::ONE, Generator::Z, &noon).unwrap();
//! assert!((result.crb - 0.5).abs() < 1e-12);
//! ```

pub mod catstate;
pub mod cli;
pub mod closedform;
pub mod coherent;
pub mod dicke;
mod error;
mod linalg;
pub mod metrology;
pub mod scan;

pub use catstate::{cat_state, normalization, CatAngles, CatParams};
pub use closedform::{ClosedFormCase, PhaseFamily};
pub use coherent::{coherent_overlap, coherent_state, rotation_matrix, CoherentParams};
pub use dicke::{build_operators, dicke_to_fock, fock_to_dicke, DickeVector, SpinJ, SpinOperators};
pub use error::{Error, Result};
pub use metrology::{
    cat_crb, crb, evolve, qfi_fidelity_oracle, qfi_pure, qfi_sld_oracle, CrbResult, EvolvedState,
    Generator,
};
pub use scan::{find_hl, grid_scan, CellValue, CrbGrid, HlPoint, HlSearchSpec, ScanSpec};
