//! Two-level PT-symmetric quantum mechanics in finite dimensions.
//!
//! The crate is `no_std` and allocation-free. It provides
//!
//! * [`linalg`]: fixed-size complex matrices (2×2 and 4×4), a closed-form 2×2
//!   eigensolver, the 2×2 matrix exponential, Kronecker products and partial
//!   traces;
//! * [`ptqm`]: the two-level PT-symmetric Hamiltonian `[[iγ, −ζ], [−ζ, −iγ]]`
//!   together with its parity, `C` and metric (`η`) operators, phase
//!   classification and the Dirac / CPT / metric inner products;
//! * [`bipartite`]: pure states on a pair of two-level subsystems (PT-symmetric
//!   or standard), their density matrices under mixed inner-product conventions,
//!   local time evolution and the entanglement entropy.
#![no_std]
#![forbid(unsafe_code)]

#[cfg(any(feature = "std", test))]
extern crate std;

pub mod bipartite;
mod error;
pub mod linalg;
mod math;
pub mod ptqm;

pub use bipartite::{
    entropy_bits, omega_closed_form, BipartiteState, EntropySample, LocalFrame,
    ReducedDensityClosedForm, SubsystemKind,
};
pub use error::{Error, Result};
pub use linalg::{
    eig2, kron, kron_vec, partial_trace, Bra, Complex, EigenDecomposition2, Mat2, Mat4, Matrix,
    StateVector, Subsystem,
};
pub use ptqm::{InnerProduct, PhaseClass, PtParams, PtSystem};
