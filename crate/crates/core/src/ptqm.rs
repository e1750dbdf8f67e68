//! Two-level PT-symmetric systems.
//!
//! The Hamiltonian is `H = [[iγ, −ζ], [−ζ, −iγ]]` with `γ ≥ 0`, `ζ > 0`.
//! Parity swaps the two components and time reversal is complex conjugation
//! in the computational basis. In the unbroken phase (`γ < ζ`) the angle
//! `φ = arcsin(γ/ζ) ∈ [0, π/2)` fixes
//!
//! ```text
//! C = [[−i·tanφ, secφ], [secφ, i·tanφ]]
//! η = (CP)ᵀ = [[secφ, i·tanφ], [−i·tanφ, secφ]]
//! ```
//!
//! and the CPT inner product `⟨a|b⟩_CPT = (CPT|a⟩)ᵀ·|b⟩ = a†·η·b` is positive
//! definite. At `φ = 0` everything reduces to ordinary quantum mechanics with
//! `H = −ζσx`, `C = P` and `η = I`.

use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{eig2, Bra, Complex, EigenDecomposition2, Mat2, StateVector};
use crate::math;

/// Relative width of the exceptional-point band `|γ − ζ| ≤ EP_TOL·ζ`.
pub const EP_TOL: f64 = 1e-10;

/// Tolerance on `⟨ψ|ψ⟩ = 1` for states handed to [`PtSystem::effective_density`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    gamma: f64,
    zeta: f64,
}

impl PtParams {
    pub fn new(gamma: f64, zeta: f64) -> Result<Self> {
        if !gamma.is_finite() || !zeta.is_finite() {
            return Err(Error::NonFinite("PT parameters"));
        }
        if zeta <= 0.0 {
            return Err(Error::InvalidParams("zeta must be positive"));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidParams("gamma must be non-negative"));
        }
        Ok(Self { gamma, zeta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn phase(&self) -> PhaseClass {
        if math::abs(self.gamma - self.zeta) <= EP_TOL * self.zeta {
            PhaseClass::ExceptionalPoint
        } else if self.gamma < self.zeta {
            PhaseClass::Unbroken
        } else {
            PhaseClass::Broken
        }
    }

    pub fn hamiltonian(&self) -> Mat2 {
        hamiltonian(self.gamma, self.zeta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseClass {
    /// `γ < ζ`: real spectrum, positive-definite CPT norm.
    Unbroken,
    /// `γ = ζ`: coalescing eigenvalues and eigenvectors.
    ExceptionalPoint,
    /// `γ > ζ`: complex-conjugate spectrum.
    Broken,
}

impl PhaseClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseClass::Unbroken => "unbroken",
            PhaseClass::ExceptionalPoint => "exceptional_point",
            PhaseClass::Broken => "broken",
        }
    }
}

impl fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn hamiltonian(gamma: f64, zeta: f64) -> Mat2 {
    Mat2::new(
        Complex::new(0.0, gamma),
        Complex::new(-zeta, 0.0),
        Complex::new(-zeta, 0.0),
        Complex::new(0.0, -gamma),
    )
}

pub fn parity() -> Mat2 {
    Mat2::pauli_x()
}

/// `C(φ)`, sign fixed so that `C|ψ₊⟩ = −|ψ₊⟩` and `C|ψ₋⟩ = +|ψ₋⟩`.
pub fn c_operator(phi: f64) -> Mat2 {
    let (sec, tan) = sec_tan(phi);
    Mat2::new(
        Complex::new(0.0, -tan),
        Complex::new(sec, 0.0),
        Complex::new(sec, 0.0),
        Complex::new(0.0, tan),
    )
}

/// Metric `η(φ) = (C·P)ᵀ`.
pub fn metric(phi: f64) -> Mat2 {
    let (sec, tan) = sec_tan(phi);
    Mat2::new(
        Complex::new(sec, 0.0),
        Complex::new(0.0, tan),
        Complex::new(0.0, -tan),
        Complex::new(sec, 0.0),
    )
}

fn sec_tan(phi: f64) -> (f64, f64) {
    let cos = math::cos(phi);
    (1.0 / cos, math::sin(phi) / cos)
}

/// Combined parity and (even) time reversal: `PT|v⟩ = P·conj(v)`.
pub fn pt_apply(v: &StateVector<2>) -> StateVector<2> {
    parity().mul_vec(&v.conj())
}

/// Eigenbasis `ψ± = (1, ∓e^{∓iφ})/√(2cosφ)` of the model at angle `φ`.
///
/// The vectors are CPT-orthonormal. `ψ₊` belongs to `+√(ζ²−γ²)`.
pub fn eigenbasis(phi: f64) -> [StateVector<2>; 2] {
    let norm = 1.0 / math::sqrt(2.0 * math::cos(phi));
    let one = Complex::new(norm, 0.0);
    let plus = StateVector::new([one, -Complex::from_polar(norm, -phi)]);
    let minus = StateVector::new([one, Complex::from_polar(norm, phi)]);
    [plus, minus]
}

/// Rule that turns a ket into a bra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerProduct {
    /// `⟨a| = a†`.
    Dirac,
    /// `⟨a| = (C(φ)·P·conj(a))ᵀ`.
    Cpt { phi: f64 },
    /// `⟨a| = a†·M`.
    Metric(Mat2),
}

impl InnerProduct {
    pub fn cpt(phi: f64) -> Result<Self> {
        if !(0.0..core::f64::consts::FRAC_PI_2).contains(&phi) {
            return Err(Error::InvalidParams("CPT angle must lie in [0, π/2)"));
        }
        Ok(InnerProduct::Cpt { phi })
    }

    pub fn bra(&self, state: &StateVector<2>) -> Bra<2> {
        match self {
            InnerProduct::Dirac => state.dagger(),
            InnerProduct::Cpt { phi } => {
                let v = (c_operator(*phi) * parity()).mul_vec(&state.conj());
                Bra::new(*v.entries())
            }
            InnerProduct::Metric(m) => state.dagger().mul_mat(m),
        }
    }

    pub fn inner(&self, left: &StateVector<2>, right: &StateVector<2>) -> Complex {
        self.bra(left).apply(right)
    }

    /// Real part of `⟨ψ|ψ⟩`.
    pub fn norm_sqr(&self, state: &StateVector<2>) -> f64 {
        self.inner(state, state).re
    }

    /// Rescales `state` to unit norm under this convention.
    pub fn normalize(&self, state: &StateVector<2>) -> Result<StateVector<2>> {
        let n = self.norm_sqr(state);
        if n.is_nan() || n <= 0.0 || n.is_infinite() {
            return Err(Error::Normalization { norm: n });
        }
        Ok(state.scale(Complex::new(1.0 / math::sqrt(n), 0.0)))
    }
}

pub fn bra(state: &StateVector<2>, conv: &InnerProduct) -> Bra<2> {
    conv.bra(state)
}

pub fn inner(left: &StateVector<2>, right: &StateVector<2>, conv: &InnerProduct) -> Complex {
    conv.inner(left, right)
}

/// CPT machinery, present only in the unbroken phase.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CptData {
    phi: f64,
    c: Mat2,
    eta: Mat2,
    basis: [StateVector<2>; 2],
    energies: [f64; 2],
}

/// A two-level PT-symmetric system.
///
/// Construction always succeeds for valid parameters; outside the unbroken
/// phase the accessors for `φ`, `C`, `η`, the eigenbasis and the energies
/// return [`Error::Phase`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtSystem {
    params: PtParams,
    phase: PhaseClass,
    hamiltonian: Mat2,
    cpt: Option<CptData>,
}

impl PtSystem {
    pub fn new(params: PtParams) -> Self {
        let phase = params.phase();
        let cpt = (phase == PhaseClass::Unbroken).then(|| {
            let (g, z) = (params.gamma, params.zeta);
            let phi = math::asin(g / z);
            let e = math::sqrt((z - g) * (z + g));
            CptData {
                phi,
                c: c_operator(phi),
                eta: metric(phi),
                basis: eigenbasis(phi),
                energies: [e, -e],
            }
        });
        Self {
            params,
            phase,
            hamiltonian: params.hamiltonian(),
            cpt,
        }
    }

    pub fn from_gamma_zeta(gamma: f64, zeta: f64) -> Result<Self> {
        PtParams::new(gamma, zeta).map(Self::new)
    }

    fn cpt(&self, what: &'static str) -> Result<&CptData> {
        self.cpt.as_ref().ok_or(Error::Phase {
            phase: self.phase,
            what,
        })
    }

    pub fn params(&self) -> PtParams {
        self.params
    }

    pub fn phase(&self) -> PhaseClass {
        self.phase
    }

    pub fn is_unbroken(&self) -> bool {
        self.phase == PhaseClass::Unbroken
    }

    pub fn hamiltonian(&self) -> Mat2 {
        self.hamiltonian
    }

    pub fn parity(&self) -> Mat2 {
        parity()
    }

    pub fn phi(&self) -> Result<f64> {
        self.cpt("phi").map(|d| d.phi)
    }

    pub fn c_operator(&self) -> Result<Mat2> {
        self.cpt("C operator").map(|d| d.c)
    }

    pub fn eta(&self) -> Result<Mat2> {
        self.cpt("metric").map(|d| d.eta)
    }

    /// `[ψ₊, ψ₋]`, CPT-normalized.
    pub fn basis(&self) -> Result<[StateVector<2>; 2]> {
        self.cpt("eigenbasis").map(|d| d.basis)
    }

    /// `[+√(ζ²−γ²), −√(ζ²−γ²)]`.
    pub fn eigenvalues(&self) -> Result<[f64; 2]> {
        self.cpt("real eigenvalues").map(|d| d.energies)
    }

    /// Numerical spectrum of `H`, available in every phase.
    pub fn spectrum(&self) -> EigenDecomposition2 {
        eig2(&self.hamiltonian)
    }

    pub fn cpt_inner_product(&self) -> Result<InnerProduct> {
        self.cpt("CPT inner product")
            .map(|d| InnerProduct::Cpt { phi: d.phi })
    }

    /// `‖ηHη⁻¹ − H†‖∞`.
    pub fn pseudo_hermiticity_residual(&self) -> Result<f64> {
        let eta = self.eta()?;
        let inv = eta.inverse().ok_or(Error::Consistency {
            what: "singular metric",
            deviation: 0.0,
        })?;
        Ok((eta * self.hamiltonian * inv - self.hamiltonian.adjoint()).norm_inf())
    }

    /// `⟨ψ|_η A |ψ⟩`.
    pub fn expectation(&self, state: &StateVector<2>, observable: &Mat2) -> Result<Complex> {
        let eta = self.eta()?;
        Ok(InnerProduct::Metric(eta)
            .bra(state)
            .apply(&observable.mul_vec(state)))
    }

    /// `|ψ⟩⟨ψ|η`. The state must already be CPT-normalized.
    pub fn effective_density(&self, state: &StateVector<2>) -> Result<Mat2> {
        let eta = self.eta()?;
        let bra = InnerProduct::Metric(eta).bra(state);
        let norm = bra.apply(state);
        if (norm - Complex::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(Error::Normalization { norm: norm.re });
        }
        Ok(state.outer(&bra))
    }

    /// `H = H_QM·η` with the Hermitian factor `H_QM = −ζ·cosφ·σx`.
    pub fn factorize(&self) -> Result<(Mat2, Mat2)> {
        let d = self.cpt("factorization")?;
        let h_qm = Mat2::pauli_x() * (-self.params.zeta * math::cos(d.phi));
        Ok((h_qm, d.eta))
    }
}
