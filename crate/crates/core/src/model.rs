//! Physical operators and time-evolution generators.
//!
//! Two generators are provided:
//!
//! * [`FullGenerator`]: the homodyne-feedback master equation
//!   `dρ/dt = -i[H + (c†F + Fc)/2, ρ] + D[c - iF]ρ`, or the bare
//!   `-i[H, ρ] + D[c]ρ` when feedback is off.
//! * [`AppendixGenerator`]: closed component ODEs for the X-sector entries
//!   at arbitrary feedback strength μ, written term by term.
//!
//! Units: ħ = 1, rates in units of the spontaneous decay rate Ξ, time is
//! dimensionless.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kron, pauli, Matrix2, Matrix4, C64, I, ZERO};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("lengths must be positive (d = {d}, l = {l})")]
    NonPositiveLength { d: f64, l: f64 },
    #[error("rate must be non-negative, got {0}")]
    NegativeRate(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("feedback strength |mu| must be <= 1, got {0}")]
    FeedbackOutOfRange(f64),
    #[error("state is not an X state (largest off-X entry {0:e})")]
    NotXState(f64),
    #[error("the appendix generator is only defined with feedback enabled")]
    AppendixNeedsFeedback,
}

/// Waveguide geometry and material inputs. Lengths are in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideParams {
    /// Fraction of the decay routed into the plasmon mode.
    pub beta: f64,
    /// Spontaneous decay rate Ξ; sets the unit of time.
    pub decay: f64,
    /// Qubit separation d.
    pub separation: f64,
    /// Plasmon propagation length l.
    pub propagation_length: f64,
    /// Height above the groove bottom. Documentation only.
    pub height: f64,
    pub cos_krd: f64,
    pub sin_krd: f64,
}

impl Default for WaveguideParams {
    /// Silver V-groove at 40°, `L = 150 nm`, `d = 7L/2 = 525 nm`,
    /// `l = 1.7 μm`, β = 0.9 and `cos(k_r d) = sin(k_r d) = √2/2`.
    fn default() -> Self {
        let height = 150e-9;
        Self {
            beta: 0.9,
            decay: 1.0,
            separation: 3.5 * height,
            propagation_length: 1.7e-6,
            height,
            cos_krd: std::f64::consts::FRAC_1_SQRT_2,
            sin_krd: std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

impl WaveguideParams {
    /// Replaces the two phase factors by `cos(k_r d)`, `sin(k_r d)` for a
    /// real modal wave number `k_r` in 1/m.
    pub fn with_wavenumber(mut self, kr: f64) -> Self {
        let phase = kr * self.separation;
        self.cos_krd = phase.cos();
        self.sin_krd = phase.sin();
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let all = [
            self.beta,
            self.decay,
            self.separation,
            self.propagation_length,
            self.height,
            self.cos_krd,
            self.sin_krd,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::InvalidParameter("non-finite waveguide parameter".into()));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(ModelError::InvalidParameter(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if self.decay < 0.0 {
            return Err(ModelError::NegativeRate(self.decay));
        }
        // d = 0 is allowed: the exponent simply vanishes.
        if self.separation < 0.0 || self.propagation_length <= 0.0 {
            return Err(ModelError::NonPositiveLength {
                d: self.separation,
                l: self.propagation_length,
            });
        }
        Ok(())
    }
}

/// Dynamical rates in units of Ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Collective decay rate ξ.
    pub xi: f64,
    /// Dipole-dipole coupling γ.
    pub gamma: f64,
    /// Transition frequency ω₀.
    pub omega0: f64,
    /// Lamb shift δ.
    pub delta: f64,
}

impl Rates {
    /// Rates tied to ξ the way the waveguide defaults tie them:
    /// `γ = ξ/2`, `ω₀ = γ`, `δ = 0`.
    pub fn from_xi(xi: f64) -> Self {
        Self {
            xi,
            gamma: xi / 2.0,
            omega0: xi / 2.0,
            delta: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if [self.xi, self.gamma, self.omega0, self.delta].iter().any(|v| !v.is_finite()) {
            return Err(ModelError::InvalidParameter("non-finite rate".into()));
        }
        if self.xi < 0.0 {
            return Err(ModelError::NegativeRate(self.xi));
        }
        Ok(())
    }
}

/// `ξ = βΞ e^{-d/2l} cos(k_r d)`, `γ = βΞ e^{-d/2l} sin(k_r d)/2`, `ω₀ = γ`, `δ = 0`.
pub fn derive_rates(p: &WaveguideParams) -> Result<Rates, ModelError> {
    p.validate()?;
    let envelope = p.beta * p.decay * (-p.separation / (2.0 * p.propagation_length)).exp();
    let xi = envelope * p.cos_krd;
    let gamma = envelope * p.sin_krd / 2.0;
    let rates = Rates {
        xi,
        gamma,
        omega0: gamma,
        delta: 0.0,
    };
    rates.validate()?;
    Ok(rates)
}

/// Feedback strength μ and whether feedback is applied at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackSpec {
    pub mu: f64,
    pub enabled: bool,
}

impl FeedbackSpec {
    pub fn new(mu: f64) -> Result<Self, ModelError> {
        if !mu.is_finite() || mu.abs() > 1.0 {
            return Err(ModelError::FeedbackOutOfRange(mu));
        }
        Ok(Self { mu, enabled: true })
    }

    pub fn disabled() -> Self {
        Self { mu: 0.0, enabled: false }
    }

    /// μ = -1.
    pub fn f1() -> Self {
        Self { mu: -1.0, enabled: true }
    }

    /// μ = +1.
    pub fn f2() -> Self {
        Self { mu: 1.0, enabled: true }
    }
}

/// Collective jump operator `c = -√ξ (σ⊗I + I⊗σ)`.
pub fn jump_operator(xi: f64) -> Result<Matrix4, ModelError> {
    if !(xi >= 0.0) {
        return Err(ModelError::NegativeRate(xi));
    }
    let id = Matrix2::identity();
    let s = pauli::lowering();
    Ok((kron(&s, &id) + kron(&id, &s)).scale_real(-xi.sqrt()))
}

/// `H = (ω₀+δ)(σ†σ⊗I + I⊗σ†σ) + γ(σ†⊗σ + σ⊗σ†)`.
pub fn driving_hamiltonian(r: &Rates) -> Matrix4 {
    let id = Matrix2::identity();
    let s = pauli::lowering();
    let sd = pauli::raising();
    let n = sd * s;
    (kron(&n, &id) + kron(&id, &n)).scale_real(r.omega0 + r.delta)
        + (kron(&sd, &s) + kron(&s, &sd)).scale_real(r.gamma)
}

/// `F(μ) = μ(σx⊗σz + σz⊗σx) - (σx⊗I + I⊗σx)`.
pub fn feedback_operator(mu: f64) -> Matrix4 {
    let id = Matrix2::identity();
    let (x, z) = (pauli::x(), pauli::z());
    (kron(&x, &z) + kron(&z, &x)).scale_real(mu) - (kron(&x, &id) + kron(&id, &x))
}

/// Which generator drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorMode {
    Full,
    Appendix,
}

impl std::str::FromStr for GeneratorMode {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Self::Full),
            "appendix" => Ok(Self::Appendix),
            other => Err(ModelError::InvalidParameter(format!("unknown generator mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for GeneratorMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::Appendix => "appendix",
        })
    }
}

/// X-sector positions in the order `(ρ11, ρ22, ρ33, ρ23, ρ32, ρ44, ρ14, ρ41)`,
/// zero-based.
pub const X_ENTRIES: [(usize, usize); 8] = [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1), (3, 3), (0, 3), (3, 0)];

pub fn is_x_entry(i: usize, j: usize) -> bool {
    i == j || i + j == 3
}

/// Largest magnitude among the eight entries outside the X pattern.
pub fn off_x_magnitude(m: &Matrix4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            if !is_x_entry(i, j) {
                worst = worst.max(m.data[i][j].norm());
            }
        }
    }
    worst
}

/// Zeroes everything outside the X pattern.
pub fn project_x(m: &Matrix4) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for &(i, j) in &X_ENTRIES {
        out.data[i][j] = m.data[i][j];
    }
    out
}

/// Explicit matrix of a generator over a list of matrix-element coordinates.
///
/// Column `k` is the image of the unit matrix with a one at `basis[k]`,
/// read back at the same coordinates. For the full generator the basis is
/// column-stacked, `basis[i + 4j] = (i, j)`.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    pub matrix: DMatrix<C64>,
    pub basis: Vec<(usize, usize)>,
}

impl SuperOperator {
    pub fn vectorize(&self, m: &Matrix4) -> Vec<C64> {
        self.basis.iter().map(|&(i, j)| m.data[i][j]).collect()
    }

    pub fn unvectorize(&self, v: &[C64]) -> Matrix4 {
        let mut m = Matrix4::zeros();
        for (&(i, j), &z) in self.basis.iter().zip(v) {
            m.data[i][j] = z;
        }
        m
    }
}

pub fn column_stacked_basis() -> Vec<(usize, usize)> {
    (0..16).map(|k| (k % 4, k / 4)).collect()
}

/// A linear map `ρ ↦ dρ/dt` on 4×4 matrices.
pub trait Generator: Send + Sync {
    fn apply(&self, rho: &Matrix4) -> Matrix4;

    fn mode(&self) -> GeneratorMode;

    /// Coordinates the generator acts on.
    fn domain(&self) -> Vec<(usize, usize)> {
        column_stacked_basis()
    }

    fn superoperator(&self) -> SuperOperator {
        let basis = self.domain();
        let n = basis.len();
        let mut matrix = DMatrix::from_element(n, n, ZERO);
        for (col, &(i, j)) in basis.iter().enumerate() {
            let mut e = Matrix4::zeros();
            e.data[i][j] = C64::new(1.0, 0.0);
            let image = self.apply(&e);
            for (row, &(p, q)) in basis.iter().enumerate() {
                matrix[(row, col)] = image.data[p][q];
            }
        }
        SuperOperator { matrix, basis }
    }
}

/// Lindblad generator with an effective Hamiltonian and one jump operator.
#[derive(Debug, Clone)]
pub struct FullGenerator {
    pub rates: Rates,
    pub feedback: FeedbackSpec,
    hamiltonian: Matrix4,
    channel: Matrix4,
    channel_adjoint: Matrix4,
    decay_term: Matrix4,
}

impl FullGenerator {
    pub fn new(rates: Rates, feedback: FeedbackSpec) -> Result<Self, ModelError> {
        rates.validate()?;
        if feedback.enabled {
            FeedbackSpec::new(feedback.mu)?;
        }
        let c = jump_operator(rates.xi)?;
        let h = driving_hamiltonian(&rates);
        let (hamiltonian, channel) = if feedback.enabled {
            let f = feedback_operator(feedback.mu);
            let correction = (c.adjoint() * f + f * c).scale_real(0.5);
            (h + correction, c - f.scale(I))
        } else {
            (h, c)
        };
        let channel_adjoint = channel.adjoint();
        Ok(Self {
            rates,
            feedback,
            hamiltonian,
            channel,
            channel_adjoint,
            decay_term: channel_adjoint * channel,
        })
    }

    /// Hamiltonian part including the feedback correction `(c†F + Fc)/2`.
    pub fn effective_hamiltonian(&self) -> &Matrix4 {
        &self.hamiltonian
    }

    /// Effective jump operator `c - iF` (or `c`).
    pub fn channel(&self) -> &Matrix4 {
        &self.channel
    }
}

impl Generator for FullGenerator {
    fn apply(&self, rho: &Matrix4) -> Matrix4 {
        let unitary = self.hamiltonian.commutator(rho).scale(-I);
        let jump = self.channel * *rho * self.channel_adjoint;
        let anti = self.decay_term.anticommutator(rho).scale_real(0.5);
        unitary + jump - anti
    }

    fn mode(&self) -> GeneratorMode {
        GeneratorMode::Full
    }
}

/// Which transcription of the component ODEs to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AppendixVariant {
    /// Coefficients re-derived from the full generator: `(μ-1)²` on the
    /// coherence sum in `dρ11/dt`, and `(μ+1)2i√ξ(ρ41 - ρ14)` in `dρ44/dt`.
    /// Trace preserving for every μ.
    #[default]
    Corrected,
    /// Term-for-term as printed: `(μ-1)` and `(μ+1)2i√ξ(ρ14 + ρ41)`. Not
    /// trace preserving for μ ≠ 1.
    Printed,
}

/// The X-sector entries `(ρ11, ρ22, ρ33, ρ23, ρ32, ρ44, ρ14, ρ41)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct XComponents(pub [C64; 8]);

impl XComponents {
    pub fn from_matrix(m: &Matrix4) -> Self {
        let mut v = [ZERO; 8];
        for (slot, &(i, j)) in v.iter_mut().zip(X_ENTRIES.iter()) {
            *slot = m.data[i][j];
        }
        Self(v)
    }

    pub fn to_matrix(&self) -> Matrix4 {
        let mut m = Matrix4::zeros();
        for (&z, &(i, j)) in self.0.iter().zip(X_ENTRIES.iter()) {
            m.data[i][j] = z;
        }
        m
    }

    pub fn rho11(&self) -> C64 {
        self.0[0]
    }
    pub fn rho22(&self) -> C64 {
        self.0[1]
    }
    pub fn rho33(&self) -> C64 {
        self.0[2]
    }
    pub fn rho23(&self) -> C64 {
        self.0[3]
    }
    pub fn rho32(&self) -> C64 {
        self.0[4]
    }
    pub fn rho44(&self) -> C64 {
        self.0[5]
    }
    pub fn rho14(&self) -> C64 {
        self.0[6]
    }
    pub fn rho41(&self) -> C64 {
        self.0[7]
    }
}

/// Component ODEs for the X-sector entries at feedback strength μ.
///
/// The six population/coherence equations are written out term by term. The
/// `ρ14`, `ρ41` rows are taken from the full generator restricted to the X
/// sector with `γ = ω₀ = ξ/2`, which is also the parameter relation the
/// component equations assume.
#[derive(Debug, Clone)]
pub struct AppendixGenerator {
    pub xi: f64,
    pub mu: f64,
    pub variant: AppendixVariant,
    supplement: FullGenerator,
}

impl AppendixGenerator {
    pub fn new(xi: f64, mu: f64) -> Result<Self, ModelError> {
        Self::with_variant(xi, mu, AppendixVariant::Corrected)
    }

    pub fn with_variant(xi: f64, mu: f64, variant: AppendixVariant) -> Result<Self, ModelError> {
        let feedback = FeedbackSpec::new(mu)?;
        let supplement = FullGenerator::new(Rates::from_xi(xi), feedback)?;
        Ok(Self {
            xi,
            mu,
            variant,
            supplement,
        })
    }

    /// Derivative of the eight X components.
    pub fn components(&self, x: &XComponents) -> XComponents {
        let (mu, xi) = (self.mu, self.xi);
        let c = |v: f64| C64::new(v, 0.0);
        let s = xi.sqrt();
        let [r11, r22, r33, r23, r32, r44, r14, r41] = x.0;

        let pump = c(xi + (mu - 1.0).powi(2));
        let up = c((mu + 1.0).powi(2));
        let mix = c(1.0 + mu * mu);
        let damp = c(xi + 2.0 + 2.0 * mu * mu);
        let corner = r14 + r41;
        let inner = r22 + r33 + r23 + r32;
        let drive = I * c((mu + 1.0) * s);
        let minus = C64::new(0.5, -0.5);
        let plus = C64::new(0.5, 0.5);

        let d11_coherence = match self.variant {
            AppendixVariant::Corrected => (mu - 1.0).powi(2),
            AppendixVariant::Printed => mu - 1.0,
        };
        let d44_corner = match self.variant {
            AppendixVariant::Corrected => r41 - r14,
            AppendixVariant::Printed => r14 + r41,
        };

        let d11 = -c(2.0) * r11 * pump + c(mu * mu - 1.0) * corner + c(d11_coherence) * inner;
        let d22 = r11 * pump + up * r44 - mix * (r23 + r32) - c(xi) * minus * (r23 + I * r32) - damp * r22
            + c(1.0 - mu * mu) * corner
            + drive * (r14 + r23 - r32 - r41);
        let d33 = r11 * pump + up * r44 - mix * (r23 + r32) - c(xi) * plus * (r23 - I * r32) - damp * r33
            + c(1.0 - mu * mu) * corner
            + drive * (r14 - r23 + r32 - r41);
        let d23 = r11 * pump + up * r44 - mix * (r22 + r33) - c(xi) * minus * (r22 + I * r33) - damp * r23
            + c(1.0 - mu * mu) * corner
            + drive * (r14 + r22 - r33 - r41);
        let d32 = r11 * pump + up * r44 - mix * (r22 + r33) - c(xi) * plus * (r22 - I * r33) - damp * r32
            + c(1.0 - mu * mu) * corner
            + drive * (r14 - r22 + r33 - r41);
        let d44 = c(2.0) * drive * d44_corner + c(mu * mu - 1.0) * corner - c(2.0) * up * r44
            + c(xi + (mu + 1.0).powi(2)) * inner;

        let full = self.supplement.apply(&x.to_matrix());
        XComponents([d11, d22, d33, d23, d32, d44, full.data[0][3], full.data[3][0]])
    }

    /// Checked derivative: rejects matrices with entries outside the X pattern.
    pub fn derivative(&self, rho: &Matrix4) -> Result<Matrix4, ModelError> {
        let off = off_x_magnitude(rho);
        if off > 1e-12 {
            return Err(ModelError::NotXState(off));
        }
        Ok(self.apply(rho))
    }
}

impl Generator for AppendixGenerator {
    /// Entries outside the X pattern are ignored.
    fn apply(&self, rho: &Matrix4) -> Matrix4 {
        self.components(&XComponents::from_matrix(rho)).to_matrix()
    }

    fn mode(&self) -> GeneratorMode {
        GeneratorMode::Appendix
    }

    fn domain(&self) -> Vec<(usize, usize)> {
        X_ENTRIES.to_vec()
    }
}

/// Either generator behind one type.
#[derive(Debug, Clone)]
pub enum MasterEquation {
    Full(FullGenerator),
    Appendix(AppendixGenerator),
}

impl MasterEquation {
    /// Builds the generator for `mode`. The appendix form needs feedback on
    /// and ignores γ, ω₀, δ (it assumes `γ = ω₀ = ξ/2`, `δ = 0`).
    pub fn new(mode: GeneratorMode, rates: Rates, feedback: FeedbackSpec) -> Result<Self, ModelError> {
        Self::with_variant(mode, rates, feedback, AppendixVariant::default())
    }

    /// As [`MasterEquation::new`], choosing the appendix transcription.
    pub fn with_variant(mode: GeneratorMode, rates: Rates, feedback: FeedbackSpec, variant: AppendixVariant) -> Result<Self, ModelError> {
        match mode {
            GeneratorMode::Full => Ok(Self::Full(FullGenerator::new(rates, feedback)?)),
            GeneratorMode::Appendix => {
                if !feedback.enabled {
                    return Err(ModelError::AppendixNeedsFeedback);
                }
                rates.validate()?;
                Ok(Self::Appendix(AppendixGenerator::with_variant(rates.xi, feedback.mu, variant)?))
            }
        }
    }
}

impl Generator for MasterEquation {
    fn apply(&self, rho: &Matrix4) -> Matrix4 {
        match self {
            Self::Full(g) => g.apply(rho),
            Self::Appendix(g) => g.apply(rho),
        }
    }

    fn mode(&self) -> GeneratorMode {
        match self {
            Self::Full(g) => g.mode(),
            Self::Appendix(g) => g.mode(),
        }
    }

    fn domain(&self) -> Vec<(usize, usize)> {
        match self {
            Self::Full(g) => g.domain(),
            Self::Appendix(g) => g.domain(),
        }
    }
}

/// Conjugation by the qubit swap.
pub fn swap_qubits(m: &Matrix4) -> Matrix4 {
    let perm = [0usize, 2, 1, 3];
    let mut out = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out.data[perm[i]][perm[j]] = m.data[i][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DensityMatrix;
    use approx::assert_abs_diff_eq;

    fn reference_rates() -> Rates {
        derive_rates(&WaveguideParams::default()).unwrap()
    }

    #[test]
    fn rates_at_reference_geometry() {
        let r = reference_rates();
        let expected_xi = 0.9 * (-525.0_f64 / 3400.0).exp() * std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(r.xi, expected_xi, epsilon = 1e-15);
        assert_abs_diff_eq!(r.xi, 0.545340, epsilon = 1e-6);
        assert_abs_diff_eq!(r.gamma, 0.272670, epsilon = 1e-6);
        assert_eq!(r.omega0, r.gamma);
        assert_eq!(r.delta, 0.0);
    }

    #[test]
    fn rates_degenerate_cases() {
        let zero = derive_rates(&WaveguideParams {
            beta: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert_eq!((zero.xi, zero.gamma), (0.0, 0.0));
        let touching = derive_rates(&WaveguideParams {
            beta: 1.0,
            separation: 0.0,
            cos_krd: 1.0,
            sin_krd: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert_eq!((touching.xi, touching.gamma), (1.0, 0.0));
        let bad = WaveguideParams {
            propagation_length: 0.0,
            ..Default::default()
        };
        assert!(matches!(derive_rates(&bad), Err(ModelError::NonPositiveLength { .. })));
        let bad = WaveguideParams {
            separation: -1e-9,
            ..Default::default()
        };
        assert!(matches!(derive_rates(&bad), Err(ModelError::NonPositiveLength { .. })));
    }

    #[test]
    fn jump_operator_structure() {
        assert_eq!(jump_operator(0.0).unwrap(), Matrix4::zeros());
        assert!(matches!(jump_operator(-0.1), Err(ModelError::NegativeRate(_))));
        let c = jump_operator(1.0).unwrap();
        let mut expected = Matrix4::zeros();
        for (i, j) in [(1, 0), (2, 0), (3, 1), (3, 2)] {
            expected[(i, j)] = C64::new(-1.0, 0.0);
        }
        assert_eq!(c, expected);
        let c = jump_operator(0.37).unwrap();
        for i in 0..4 {
            assert_eq!(c[(i, 3)], ZERO);
        }
    }

    #[test]
    fn hamiltonian_spectrum() {
        assert_eq!(driving_hamiltonian(&Rates::from_xi(0.0)), Matrix4::zeros());
        let r = Rates {
            xi: 0.3,
            gamma: 0.2,
            omega0: 0.7,
            delta: 0.0,
        };
        let h = driving_hamiltonian(&r);
        let e = crate::linalg::hermitian_eigenvalues(&h).unwrap();
        let mut want = [2.0 * 0.7, 0.7 + 0.2, 0.7 - 0.2, 0.0];
        want.sort_by(f64::total_cmp);
        for (x, y) in e.iter().zip(want) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn feedback_operator_cases() {
        let id = Matrix2::identity();
        let (x, z) = (pauli::x(), pauli::z());
        let f1 = -kron(&x, &z) - kron(&z, &x) - kron(&x, &id) - kron(&id, &x);
        let f2 = kron(&x, &z) + kron(&z, &x) - kron(&x, &id) - kron(&id, &x);
        assert_eq!(feedback_operator(-1.0), f1);
        assert_eq!(feedback_operator(1.0), f2);
        assert_eq!(feedback_operator(0.0), -(kron(&x, &id) + kron(&id, &x)));
        for mu in [-1.0, -0.3, 0.0, 0.6, 1.0] {
            let f = feedback_operator(mu);
            assert!(f.hermiticity_error() < 1e-15);
            assert_eq!(swap_qubits(&f), f);
        }
    }

    #[test]
    fn ground_state_is_stationary() {
        let ground = *DensityMatrix::basis_projector(4).matrix();
        let off = FullGenerator::new(reference_rates(), FeedbackSpec::disabled()).unwrap();
        assert!(off.apply(&ground).max_abs() < 1e-15);
        let f1 = FullGenerator::new(reference_rates(), FeedbackSpec::f1()).unwrap();
        assert!(f1.apply(&ground).max_abs() < 1e-15);
        let app = AppendixGenerator::new(reference_rates().xi, -1.0).unwrap();
        assert!(app.apply(&ground).max_abs() < 1e-15);
        let printed = AppendixGenerator::with_variant(reference_rates().xi, -1.0, AppendixVariant::Printed).unwrap();
        assert!(printed.apply(&ground).max_abs() < 1e-15);
    }

    #[test]
    fn printed_rho11_equation_at_f1() {
        let xi = reference_rates().xi;
        let g = AppendixGenerator::with_variant(xi, -1.0, AppendixVariant::Printed).unwrap();
        for a in [0.0, 0.3, 1.0] {
            let w = DensityMatrix::werner(a).unwrap();
            let x = XComponents::from_matrix(w.matrix());
            let d = g.components(&x);
            let want = -2.0 * (xi + 4.0) * x.rho11() - 2.0 * (x.rho22() + x.rho33() + x.rho23() + x.rho32());
            assert!((d.rho11() - want).norm() < 1e-14);
        }
    }

    #[test]
    fn printed_variant_loses_trace_at_f1() {
        let g = AppendixGenerator::with_variant(0.5, -1.0, AppendixVariant::Printed).unwrap();
        let w = DensityMatrix::werner(0.5).unwrap();
        assert!(g.apply(w.matrix()).trace().norm() > 0.1);
    }

    #[test]
    fn appendix_rejects_non_x_input() {
        let g = AppendixGenerator::new(0.5, 1.0).unwrap();
        let mut m = *DensityMatrix::maximally_mixed().matrix();
        m[(0, 1)] = C64::new(0.01, 0.0);
        m[(1, 0)] = C64::new(0.01, 0.0);
        assert!(matches!(g.derivative(&m), Err(ModelError::NotXState(_))));
    }

    #[test]
    fn appendix_mode_requires_feedback() {
        let err = MasterEquation::new(GeneratorMode::Appendix, reference_rates(), FeedbackSpec::disabled());
        assert!(matches!(err, Err(ModelError::AppendixNeedsFeedback)));
        assert!(matches!(FeedbackSpec::new(1.5), Err(ModelError::FeedbackOutOfRange(_))));
    }

    #[test]
    fn superoperator_matches_apply() {
        let g = FullGenerator::new(reference_rates(), FeedbackSpec::f2()).unwrap();
        let sup = g.superoperator();
        assert_eq!(sup.matrix.nrows(), 16);
        let rho = *DensityMatrix::werner(0.4).unwrap().matrix();
        let v = nalgebra::DVector::from_vec(sup.vectorize(&rho));
        let out = sup.unvectorize((&sup.matrix * v).as_slice());
        assert!(out.max_abs_diff(&g.apply(&rho)) < 1e-14);
        assert_eq!(AppendixGenerator::new(0.5, 1.0).unwrap().superoperator().matrix.nrows(), 8);
    }
}
