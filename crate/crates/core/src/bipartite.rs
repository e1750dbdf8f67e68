//! Pure states of two two-level subsystems.
//!
//! A state is stored as its coefficient matrix `C` in the product eigenbasis
//! `|u_a⟩ ⊗ |v_b⟩` of the two local Hamiltonians:
//!
//! ```text
//! |ψ⟩ = Σ C_ab |u_a⟩ ⊗ |v_b⟩,   Σ |C_ab|² = 1
//! ```
//!
//! PT-symmetric subsystems use their CPT-normalized eigenbasis and the CPT
//! bra; standard subsystems are the `σx` system with basis
//! `{(1, −1)/√2, (1, 1)/√2}` (energies `−1`, `+1`) and the Dirac bra. Density
//! matrices are assembled in the computational basis with each factor's bra
//! taken under its own convention.

use crate::error::{Error, Result};
use crate::linalg::{eig2, kron, partial_trace, Bra, Complex, Mat2, Mat4, StateVector, Subsystem};
use crate::math;
use crate::ptqm::{eigenbasis, InnerProduct, PhaseClass, PtParams, PtSystem};

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Slack allowed below 0 (or above 1) before a reduced eigenvalue is rejected.
pub const SPECTRUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsystemKind {
    Pt(PtParams),
    /// The `σx` system with the Dirac inner product.
    Standard,
}

/// Local basis, bra convention and energies of one party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    kind: SubsystemKind,
    phase: Option<PhaseClass>,
    basis: [StateVector<2>; 2],
    conv: InnerProduct,
    energies: [Complex; 2],
    // Angle for the closed-form reduced density; `None` for broken-phase frames.
    phi: Option<f64>,
}

impl LocalFrame {
    fn new(kind: SubsystemKind, allow_broken: bool) -> Result<Self> {
        match kind {
            SubsystemKind::Standard => {
                let h = Complex::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                Ok(Self {
                    kind,
                    phase: None,
                    basis: [StateVector::new([h, -h]), StateVector::new([h, h])],
                    conv: InnerProduct::Dirac,
                    energies: [Complex::new(-1.0, 0.0), Complex::new(1.0, 0.0)],
                    phi: Some(0.0),
                })
            }
            SubsystemKind::Pt(params) => {
                let sys = PtSystem::new(params);
                match sys.phase() {
                    PhaseClass::Unbroken => {
                        let phi = sys.phi()?;
                        let [e0, e1] = sys.eigenvalues()?;
                        Ok(Self {
                            kind,
                            phase: Some(PhaseClass::Unbroken),
                            basis: eigenbasis(phi),
                            conv: InnerProduct::Cpt { phi },
                            energies: [e0.into(), e1.into()],
                            phi: Some(phi),
                        })
                    }
                    PhaseClass::Broken if allow_broken => {
                        let eig = sys.spectrum();
                        Ok(Self {
                            kind,
                            phase: Some(PhaseClass::Broken),
                            basis: eig.eigenvectors,
                            conv: InnerProduct::Dirac,
                            energies: eig.eigenvalues,
                            phi: None,
                        })
                    }
                    phase => Err(Error::Phase {
                        phase,
                        what: "bipartite subsystem",
                    }),
                }
            }
        }
    }

    pub fn kind(&self) -> SubsystemKind {
        self.kind
    }

    /// `None` for the standard subsystem.
    pub fn phase(&self) -> Option<PhaseClass> {
        self.phase
    }

    pub fn basis(&self) -> &[StateVector<2>; 2] {
        &self.basis
    }

    pub fn inner_product(&self) -> InnerProduct {
        self.conv
    }

    pub fn energies(&self) -> [Complex; 2] {
        self.energies
    }

    /// Local generator of time evolution.
    pub fn hamiltonian(&self) -> Mat2 {
        match self.kind {
            SubsystemKind::Pt(p) => p.hamiltonian(),
            SubsystemKind::Standard => Mat2::pauli_x(),
        }
    }

    /// Bilinear weight matrix `W` with `⟨a|b⟩ = a†·W·b` for this frame's bra.
    pub fn metric(&self) -> Mat2 {
        match self.conv {
            InnerProduct::Dirac => Mat2::identity(),
            InnerProduct::Cpt { phi } => crate::ptqm::metric(phi),
            InnerProduct::Metric(m) => m,
        }
    }

    fn is_hermitian_evolution(&self) -> bool {
        self.phase != Some(PhaseClass::Broken)
    }

    fn bra(&self, k: usize) -> Bra<2> {
        self.conv.bra(&self.basis[k])
    }

    /// `|basis_a⟩⟨basis_n|` under this frame's convention.
    fn outer(&self, a: usize, n: usize) -> Mat2 {
        self.basis[a].outer(&self.bra(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteState {
    coeffs: Mat2,
    left: LocalFrame,
    right: LocalFrame,
    unitary: bool,
}

impl BipartiteState {
    /// Normalizes `coeffs` to unit Frobenius norm. Both PT subsystems must be
    /// in the unbroken phase.
    pub fn new(coeffs: Mat2, left: SubsystemKind, right: SubsystemKind) -> Result<Self> {
        Self::build(coeffs, left, right, false)
    }

    /// Like [`BipartiteState::new`], but a PT subsystem may sit in the broken
    /// phase. Its frame is then the Dirac-normalized numerical eigenbasis and
    /// evolving it is non-unitary.
    pub fn new_exploratory(
        coeffs: Mat2,
        left: SubsystemKind,
        right: SubsystemKind,
    ) -> Result<Self> {
        Self::build(coeffs, left, right, true)
    }

    fn build(
        coeffs: Mat2,
        left: SubsystemKind,
        right: SubsystemKind,
        allow_broken: bool,
    ) -> Result<Self> {
        if !coeffs.is_finite() {
            return Err(Error::NonFinite("coefficients"));
        }
        let norm = frobenius(&coeffs);
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            coeffs: coeffs * (1.0 / norm),
            left: LocalFrame::new(left, allow_broken)?,
            right: LocalFrame::new(right, allow_broken)?,
            unitary: true,
        })
    }

    pub fn coeffs(&self) -> &Mat2 {
        &self.coeffs
    }

    pub fn left(&self) -> &LocalFrame {
        &self.left
    }

    pub fn right(&self) -> &LocalFrame {
        &self.right
    }

    pub fn frame(&self, which: Subsystem) -> &LocalFrame {
        match which {
            Subsystem::First => &self.left,
            Subsystem::Second => &self.right,
        }
    }

    /// `false` once a broken-phase side has been evolved.
    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// `sqrt(Σ|C_ab|²)`.
    pub fn coefficient_norm(&self) -> f64 {
        frobenius(&self.coeffs)
    }

    /// `Σ C_ab |u_a⟩ ⊗ |v_b⟩` in the computational basis.
    pub fn ket(&self) -> StateVector<4> {
        let mut out = StateVector::new([ZERO; 4]);
        for a in 0..2 {
            for b in 0..2 {
                let prod = crate::linalg::kron_vec(&self.left.basis[a], &self.right.basis[b]);
                out = out + prod.scale(self.coeffs[(a, b)]);
            }
        }
        out
    }

    /// `ρ₁₂ = Σ C_ab C*_nm |u_a⟩⟨u_n| ⊗ |v_b⟩⟨v_m|`.
    pub fn full_density(&self) -> Mat4 {
        self.assemble(|_, _, _, _| Complex::new(1.0, 0.0))
    }

    fn assemble(&self, weight: impl Fn(usize, usize, usize, usize) -> Complex) -> Mat4 {
        let mut rho = Mat4::zeros();
        for a in 0..2 {
            for n in 0..2 {
                let left = self.left.outer(a, n);
                for b in 0..2 {
                    for m in 0..2 {
                        let w =
                            weight(a, b, n, m) * self.coeffs[(a, b)] * self.coeffs[(n, m)].conj();
                        rho = rho + kron(&left, &self.right.outer(b, m)).scale(w);
                    }
                }
            }
        }
        rho
    }

    /// Reduced density matrix of `keep`, traced numerically from
    /// [`BipartiteState::full_density`].
    pub fn reduced_density(&self, keep: Subsystem) -> Mat2 {
        partial_trace(&self.full_density(), keep.other())
    }

    /// Coefficient Gram matrix of `keep`: `C·C†` for the first party,
    /// `Cᵀ·C*` for the second.
    pub fn gram(&self, keep: Subsystem) -> Mat2 {
        let c = oriented(&self.coeffs, keep);
        c * c.adjoint()
    }

    /// Closed-form reduced density of `keep` in terms of `α, β, γ, δ`.
    pub fn closed_form(&self, keep: Subsystem) -> Result<ReducedDensityClosedForm> {
        let phi = self.frame(keep).phi.ok_or(Error::Phase {
            phase: PhaseClass::Broken,
            what: "closed-form reduced density",
        })?;
        Ok(ReducedDensityClosedForm::new(
            &oriented(&self.coeffs, keep),
            phi,
        ))
    }

    /// Eigenvalues `(ω₊, ω₋)` of the numerically assembled reduced density.
    pub fn reduced_spectrum(&self, keep: Subsystem) -> Result<[f64; 2]> {
        spectrum_of(&self.reduced_density(keep))
    }

    /// `ω± = ½(1 ± √(1 − 4|C₁₁C₂₂ − C₁₂C₂₁|²))`.
    pub fn reduced_spectrum_closed_form(&self) -> Result<[f64; 2]> {
        omega_closed_form(&self.coeffs)
    }

    /// Entanglement entropy in bits from the first party's reduced density.
    pub fn entropy(&self) -> Result<f64> {
        self.entropy_of(Subsystem::First)
    }

    pub fn entropy_of(&self, keep: Subsystem) -> Result<f64> {
        entropy_bits(&self.reduced_spectrum(keep)?)
    }

    pub fn sample(&self, t: f64, keep: Subsystem) -> Result<EntropySample> {
        let [omega_plus, omega_minus] = self.reduced_spectrum(keep)?;
        Ok(EntropySample {
            t,
            omega_plus,
            omega_minus,
            entropy_bits: entropy_bits(&[omega_plus, omega_minus])?,
        })
    }

    fn phases(&self, side: Subsystem, t: f64) -> Result<[Complex; 2]> {
        if !t.is_finite() {
            return Err(Error::NonFinite("time"));
        }
        let minus_it = Complex::new(0.0, -t);
        Ok(self.frame(side).energies.map(|l| (minus_it * l).exp()))
    }

    /// Applies `e^{−iHt}` on `side`: `C_nm → e^{−iλ_n t}·C_nm` for the first
    /// party, `C_nm → e^{−iλ_m t}·C_nm` for the second.
    pub fn evolve(&self, side: Subsystem, t: f64) -> Result<Self> {
        let f = self.phases(side, t)?;
        let mut rows = *self.coeffs.rows();
        for (a, row) in rows.iter_mut().enumerate() {
            for (b, z) in row.iter_mut().enumerate() {
                *z *= match side {
                    Subsystem::First => f[a],
                    Subsystem::Second => f[b],
                };
            }
        }
        Ok(Self {
            coeffs: Mat2::from_rows(rows),
            unitary: self.unitary && self.frame(side).is_hermitian_evolution(),
            ..*self
        })
    }

    /// `ρ₁₂(t) = Σ e^{i(λ_m − λ_b)t} C_ab C*_nm |u_a⟩⟨u_n| ⊗ |v_b⟩⟨v_m|` when
    /// the second party evolves (`e^{i(λ_n − λ_a)t}` for the first).
    pub fn time_dependent_density(&self, side: Subsystem, t: f64) -> Result<Mat4> {
        let f = self.phases(side, t)?;
        Ok(self.assemble(|a, b, n, m| match side {
            Subsystem::First => f[a] * f[n].conj(),
            Subsystem::Second => f[b] * f[m].conj(),
        }))
    }
}

// The coefficient matrix seen from `keep`: rows index the kept party.
fn oriented(coeffs: &Mat2, keep: Subsystem) -> Mat2 {
    match keep {
        Subsystem::First => *coeffs,
        Subsystem::Second => coeffs.transpose(),
    }
}

fn frobenius(m: &Mat2) -> f64 {
    math::sqrt(m.rows().iter().flatten().map(|z| z.norm_sqr()).sum())
}

/// Closed-form reduced spectrum for a unit-norm coefficient matrix.
pub fn omega_closed_form(coeffs: &Mat2) -> Result<[f64; 2]> {
    let d = coeffs.det();
    let radicand = 1.0 - 4.0 * d.norm_sqr();
    if radicand < -SPECTRUM_TOL {
        return Err(Error::Consistency {
            what: "negative radicand in reduced spectrum",
            deviation: -radicand,
        });
    }
    let root = math::sqrt(radicand.max(0.0));
    Ok([0.5 * (1.0 + root), 0.5 * (1.0 - root)])
}

// Real parts of the eigenvalues, descending and clamped to [0, 1].
fn spectrum_of(rho: &Mat2) -> Result<[f64; 2]> {
    let eig = eig2(rho);
    let mut w = eig.eigenvalues.map(|l| l.re);
    if w[1] > w[0] {
        w.swap(0, 1);
    }
    check_probabilities(&w)?;
    Ok(w.map(|x| x.clamp(0.0, 1.0)))
}

fn check_probabilities(w: &[f64]) -> Result<()> {
    for &x in w {
        if !(-SPECTRUM_TOL..=1.0 + SPECTRUM_TOL).contains(&x) {
            return Err(Error::Consistency {
                what: "reduced eigenvalue outside [0, 1]",
                deviation: if x < 0.0 { -x } else { x - 1.0 },
            });
        }
    }
    Ok(())
}

/// `−Σ ω log₂ ω` with `0·log 0 = 0`.
pub fn entropy_bits(omegas: &[f64]) -> Result<f64> {
    check_probabilities(omegas)?;
    let e: f64 = omegas
        .iter()
        .map(|&w| w.clamp(0.0, 1.0))
        .filter(|&w| w > 0.0)
        .map(|w| -w * math::log2(w))
        .sum();
    // -0.0 for pure states
    Ok(if e == 0.0 { 0.0 } else { e })
}

/// One time point of an entropy trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySample {
    pub t: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub entropy_bits: f64,
}

/// Reduced density `(1/(2cosφ))·[[N₁₁, N₁₂], [N₂₁, N₂₂]]` of one party.
///
/// With `M = C·C†` (rows of `C` indexing the kept party) the coefficients are
/// `α = M₁₁`, `β = M₁₂`, `γ = M₂₁ = β*`, `δ = M₂₂` and
///
/// ```text
/// N₁₁ = (α+γ)e^{iφ} + (β+δ)e^{−iφ}
/// N₁₂ = β + δ − α − γ
/// N₂₁ = δ − α − β·e^{−2iφ} + γ·e^{2iφ}
/// N₂₂ = (δ−γ)e^{iφ} + (α−β)e^{−iφ}
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensityClosedForm {
    pub alpha: Complex,
    pub beta: Complex,
    pub gamma_c: Complex,
    pub delta: Complex,
    pub n11: Complex,
    pub n12: Complex,
    pub n21: Complex,
    pub n22: Complex,
    pub phi: f64,
}

impl ReducedDensityClosedForm {
    pub fn new(coeffs: &Mat2, phi: f64) -> Self {
        let c = |i: usize, j: usize| coeffs[(i, j)];
        let alpha = c(0, 0) * c(0, 0).conj() + c(0, 1) * c(0, 1).conj();
        let beta = c(0, 0) * c(1, 0).conj() + c(0, 1) * c(1, 1).conj();
        let gamma_c = c(1, 0) * c(0, 0).conj() + c(1, 1) * c(0, 1).conj();
        let delta = c(1, 0) * c(1, 0).conj() + c(1, 1) * c(1, 1).conj();
        let e1 = Complex::from_polar(1.0, phi);
        let em1 = Complex::from_polar(1.0, -phi);
        let e2 = Complex::from_polar(1.0, 2.0 * phi);
        let em2 = Complex::from_polar(1.0, -2.0 * phi);
        Self {
            alpha,
            beta,
            gamma_c,
            delta,
            n11: (alpha + gamma_c) * e1 + (beta + delta) * em1,
            n12: beta + delta - alpha - gamma_c,
            n21: (delta - alpha) - beta * em2 + gamma_c * e2,
            n22: (delta - gamma_c) * e1 + (alpha - beta) * em1,
            phi,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        let k = 1.0 / (2.0 * math::cos(self.phi));
        Mat2::new(self.n11, self.n12, self.n21, self.n22) * k
    }

    /// `max(|α + δ − 1|, |γ − β*|)`.
    pub fn identity_residual(&self) -> f64 {
        let trace = (self.alpha + self.delta - 1.0).norm();
        let herm = (self.gamma_c - self.beta.conj()).norm();
        trace.max(herm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_exp_spectral;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn pt(g: f64, z: f64) -> SubsystemKind {
        SubsystemKind::Pt(PtParams::new(g, z).unwrap())
    }

    fn bell() -> Mat2 {
        Mat2::from_real(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2)
    }

    fn product() -> Mat2 {
        Mat2::from_real(1.0, 0.0, 0.0, 0.0)
    }

    // Oracle: ρ = |Ψ⟩⟨Ψ|·(W₁ ⊗ W₂) from the 4-vector, no outer-product table.
    fn density_oracle(state: &BipartiteState) -> Mat4 {
        let psi = state.ket();
        let w = kron(&state.left().metric(), &state.right().metric());
        psi.outer(&psi.dagger()) * w
    }

    // Oracle: evolve the 4-vector with a matrix exponential.
    fn evolved_density_oracle(state: &BipartiteState, side: Subsystem, t: f64) -> Mat4 {
        let u = mat_exp_spectral(&state.frame(side).hamiltonian(), c(0.0, -t));
        let op = match side {
            Subsystem::First => kron(&u, &Mat2::identity()),
            Subsystem::Second => kron(&Mat2::identity(), &u),
        };
        let psi = op.mul_vec(&state.ket());
        let w = kron(&state.left().metric(), &state.right().metric());
        psi.outer(&psi.dagger()) * w
    }

    fn gram_spectrum(m: &Mat2) -> [f64; 2] {
        spectrum_of(m).unwrap()
    }

    #[test]
    fn make_state_normalizes() {
        let s = BipartiteState::new(Mat2::identity(), pt(3.0, 5.0), pt(1.0, 2.0)).unwrap();
        assert!(s.coeffs().max_abs_diff(&bell()) < 1e-15);
        assert!(BipartiteState::new(Mat2::zeros(), pt(3.0, 5.0), pt(1.0, 2.0)).is_err());
        assert!(matches!(
            BipartiteState::new(bell(), pt(2.0, 1.0), SubsystemKind::Standard),
            Err(Error::Phase {
                phase: PhaseClass::Broken,
                ..
            })
        ));
        assert!(BipartiteState::new(bell(), pt(1.0, 1.0), SubsystemKind::Standard).is_err());
        assert!(
            BipartiteState::new_exploratory(bell(), pt(1.0, 1.0), SubsystemKind::Standard).is_err()
        );
    }

    #[test]
    fn product_and_uniform_coefficients_are_separable() {
        let s = BipartiteState::new(product(), pt(3.0, 5.0), pt(1.0, 2.0)).unwrap();
        assert_eq!(s.reduced_spectrum_closed_form().unwrap(), [1.0, 0.0]);
        assert_eq!(s.entropy().unwrap(), 0.0);

        let s = BipartiteState::new(
            Mat2::from_real(0.5, 0.5, 0.5, 0.5),
            pt(3.0, 5.0),
            pt(1.0, 2.0),
        )
        .unwrap();
        let [wp, wm] = s.reduced_spectrum(Subsystem::First).unwrap();
        assert!((wp - 1.0).abs() < 1e-13 && wm.abs() < 1e-13);
        assert_eq!(s.reduced_spectrum_closed_form().unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn product_state_density_factorizes_into_table_entries() {
        let s = BipartiteState::new(product(), pt(3.0, 5.0), pt(3.0, 5.0)).unwrap();
        let sys = PtSystem::from_gamma_zeta(3.0, 5.0).unwrap();
        let phi = sys.phi().unwrap();
        let e = |x: f64| Complex::from_polar(1.0, x);
        let one = c(1.0, 0.0);
        let u1u1 = Mat2::new(e(phi), -one, -one, e(-phi)) * (1.0 / (2.0 * phi.cos()));
        let rho = s.full_density();
        assert!(rho.max_abs_diff(&kron(&u1u1, &u1u1)) < 1e-14);
        assert!((rho.trace() - 1.0).norm() < 1e-13);

        let q = BipartiteState::new(product(), pt(0.0, 1.0), pt(0.0, 1.0)).unwrap();
        let proj = Mat2::from_real(0.5, -0.5, -0.5, 0.5);
        assert!(q.full_density().max_abs_diff(&kron(&proj, &proj)) < 1e-15);
    }

    #[test]
    fn pt_sqm_product_state_is_a_tensor_product() {
        let coeffs = Mat2::new(c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0));
        let s = BipartiteState::new(coeffs, pt(3.0, 5.0), SubsystemKind::Standard).unwrap();
        let rho = s.full_density();
        let factored = kron(
            &s.reduced_density(Subsystem::First),
            &s.reduced_density(Subsystem::Second),
        );
        assert!(rho.max_abs_diff(&factored) < 1e-14);
    }

    #[test]
    fn bell_state_is_maximally_mixed() {
        for (l, r) in [
            (pt(3.0, 5.0), pt(3.0, 5.0)),
            (pt(3.0, 5.0), pt(1.0, 2.0)),
            (pt(0.5, 0.6), SubsystemKind::Standard),
        ] {
            let s = BipartiteState::new(bell(), l, r).unwrap();
            assert!((s.full_density().trace() - 1.0).norm() < 1e-13);
            for keep in [Subsystem::First, Subsystem::Second] {
                let [wp, wm] = s.reduced_spectrum(keep).unwrap();
                assert!((wp - 0.5).abs() < 1e-12 && (wm - 0.5).abs() < 1e-12);
            }
            assert_eq!(s.reduced_spectrum_closed_form().unwrap(), [0.5, 0.5]);
            assert!((s.entropy().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uneven_schmidt_weights() {
        let coeffs = Mat2::from_real(0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt());
        let s = BipartiteState::new(coeffs, pt(3.0, 5.0), pt(1.0, 2.0)).unwrap();
        let [wp, wm] = s.reduced_spectrum_closed_form().unwrap();
        assert!((wp - 0.9).abs() < 1e-15 && (wm - 0.1).abs() < 1e-15);
        let g = gram_spectrum(&s.gram(Subsystem::First));
        assert!((g[0] - 0.9).abs() < 1e-15 && (g[1] - 0.1).abs() < 1e-15);
        // −0.9·log₂0.9 − 0.1·log₂0.1
        let expected = 0.468_995_593_589_281_2;
        assert!((entropy_bits(&[0.9, 0.1]).unwrap() - expected).abs() < 1e-15);
        assert!((s.entropy().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_spectra() {
        assert!(entropy_bits(&[1.0 + 1e-9, -1e-9]).is_err());
        assert_eq!(entropy_bits(&[1.0, -1e-13]).unwrap(), 0.0);
        assert_eq!(
            entropy_bits(&[1.0, 0.0]).unwrap().to_bits(),
            0.0f64.to_bits()
        );
    }

    #[test]
    fn evolution_examples() {
        let s = BipartiteState::new(bell(), pt(3.0, 5.0), pt(3.0, 5.0)).unwrap();
        assert_eq!(s.evolve(Subsystem::Second, 0.0).unwrap(), s);
        assert!(s.evolve(Subsystem::Second, f64::NAN).is_err());

        let t = 0.37;
        let e = s.evolve(Subsystem::Second, t).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = Mat2::new(
            Complex::from_polar(h, -4.0 * t),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex::from_polar(h, 4.0 * t),
        );
        assert!(e.coeffs().max_abs_diff(&expected) < 1e-15);
        assert!(
            e.full_density()
                .max_abs_diff(&evolved_density_oracle(&s, Subsystem::Second, t))
                < 1e-13
        );

        let q = BipartiteState::new(bell(), pt(3.0, 5.0), SubsystemKind::Standard).unwrap();
        let back = q
            .evolve(Subsystem::Second, 2.0 * core::f64::consts::PI)
            .unwrap();
        assert!(back.coeffs().max_abs_diff(q.coeffs()) < 1e-15);
    }

    #[test]
    fn diagonal_coefficients_pick_up_double_frequency() {
        let s = BipartiteState::new(bell(), pt(3.0, 5.0), pt(1.0, 2.0)).unwrap();
        let t = 0.8;
        let w = (2.0f64 * 2.0 - 1.0).sqrt(); // √(ζ'² − γ'²)
        let rho0 = s.full_density();
        let rho = s.time_dependent_density(Subsystem::Second, t).unwrap();
        // block (a,b)=(0,0), (n,m)=(1,1) carries e^{i(λ₂−λ₁)t} = e^{−2iwt}
        let term = |st: &BipartiteState, weight: Complex| {
            let left = st.left().outer(0, 1);
            let right = st.right().outer(0, 1);
            kron(&left, &right).scale(weight * st.coeffs()[(0, 0)] * st.coeffs()[(1, 1)].conj())
        };
        let diff = rho - rho0;
        let expected = term(&s, Complex::from_polar(1.0, -2.0 * w * t) - 1.0) + {
            let left = s.left().outer(1, 0);
            let right = s.right().outer(1, 0);
            kron(&left, &right).scale(
                (Complex::from_polar(1.0, 2.0 * w * t) - 1.0)
                    * s.coeffs()[(1, 1)]
                    * s.coeffs()[(0, 0)].conj(),
            )
        };
        assert!(diff.max_abs_diff(&expected) < 1e-14);
        assert_eq!(
            s.time_dependent_density(Subsystem::Second, 0.0).unwrap(),
            rho0
        );
    }

    #[test]
    fn broken_side_evolution_is_non_unitary() {
        let s =
            BipartiteState::new_exploratory(bell(), pt(2.0, 1.0), SubsystemKind::Standard).unwrap();
        assert!(s.closed_form(Subsystem::First).is_err());
        let kappa = 3f64.sqrt();
        let t = 1.0 / kappa;
        let e = s.evolve(Subsystem::First, t).unwrap();
        assert!(!e.is_unitary());
        // eigenvalue +i√3 comes first: that row grows as e^{√3 t}
        let growth = e.coeffs()[(0, 0)].norm() / s.coeffs()[(0, 0)].norm();
        assert!((growth - (kappa * t).exp()).abs() < 1e-14);
        let drift = (e.coefficient_norm() - 1.0).abs();
        assert!(drift >= 0.1, "drift {drift}");
        // Hermitian side stays unitary
        assert!(s.evolve(Subsystem::Second, t).unwrap().is_unitary());
    }

    fn coeff_strategy() -> impl Strategy<Value = Mat2> {
        proptest::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
            .prop_map(|v| Mat2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])))
    }

    fn kind_strategy() -> impl Strategy<Value = SubsystemKind> {
        prop_oneof![
            Just(SubsystemKind::Standard),
            (0.1f64..10.0, 0.0f64..0.95).prop_map(|(z, r)| pt(r * z, z)),
        ]
    }

    proptest! {
        #[test]
        fn density_routes_agree(coeffs in coeff_strategy(), l in kind_strategy(), r in kind_strategy()) {
            let s = BipartiteState::new(coeffs, l, r).unwrap();
            let rho = s.full_density();
            prop_assert!(rho.max_abs_diff(&density_oracle(&s)) <= 1e-12 * rho.max_abs().max(1.0));
            prop_assert!((rho.trace() - 1.0).norm() <= 1e-13 * rho.max_abs().max(1.0));
            for keep in [Subsystem::First, Subsystem::Second] {
                let numeric = s.reduced_density(keep);
                let closed = s.closed_form(keep).unwrap();
                prop_assert!(numeric.max_abs_diff(&closed.matrix()) <= 1e-12 * numeric.max_abs().max(1.0));
                prop_assert!(closed.identity_residual() <= 1e-13);
                prop_assert!((closed.matrix().trace() - 1.0).norm() <= 1e-13 * numeric.max_abs().max(1.0));
            }
        }

        #[test]
        fn spectrum_is_convention_independent(coeffs in coeff_strategy(), l in kind_strategy(), r in kind_strategy()) {
            let s = BipartiteState::new(coeffs, l, r).unwrap();
            let closed = s.reduced_spectrum_closed_form().unwrap();
            for keep in [Subsystem::First, Subsystem::Second] {
                let gram = gram_spectrum(&s.gram(keep));
                prop_assert!((gram[0] - closed[0]).abs() <= 1e-12);
                let numeric = s.reduced_spectrum(keep).unwrap();
                prop_assert!((numeric[0] - closed[0]).abs() <= 1e-10, "{numeric:?} vs {closed:?}");
            }
            let e1 = s.entropy_of(Subsystem::First).unwrap();
            let e2 = s.entropy_of(Subsystem::Second).unwrap();
            prop_assert!((e1 - e2).abs() <= 1e-11);
        }

        #[test]
        fn no_signaling(coeffs in coeff_strategy(), l in kind_strategy(), r in kind_strategy(),
                        t in 0.0f64..20.0, right in any::<bool>()) {
            let s = BipartiteState::new(coeffs, l, r).unwrap();
            let side = if right { Subsystem::Second } else { Subsystem::First };
            let e = s.evolve(side, t).unwrap();
            prop_assert!(e.is_unitary());
            prop_assert!((e.coefficient_norm() - 1.0).abs() <= 1e-14);
            // the observer's reduced density does not move at all
            let observer = side.other();
            prop_assert!(e.reduced_density(observer).max_abs_diff(&s.reduced_density(observer))
                <= 1e-12 * s.reduced_density(observer).max_abs().max(1.0));
            prop_assert!((e.entropy().unwrap() - s.entropy().unwrap()).abs() <= 1e-11);
            let tdd = s.time_dependent_density(side, t).unwrap();
            prop_assert!(tdd.max_abs_diff(&e.full_density()) <= 1e-12 * tdd.max_abs().max(1.0));
            let oracle = evolved_density_oracle(&s, side, t);
            prop_assert!(tdd.max_abs_diff(&oracle) <= 1e-11 * tdd.max_abs().max(1.0));
        }
    }
}
