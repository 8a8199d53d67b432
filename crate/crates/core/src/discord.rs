//! Quantum discord of two-qubit states.
//!
//! [`quantum_discord`] follows the closed X-state pipeline: Pauli
//! coefficients, closed-form spectrum, conditional Bloch vectors after a
//! projective measurement on qubit N, and a two-angle minimization of the
//! measured conditional entropy. [`brute_force_discord`] is an independent
//! route that works on any two-qubit state by building the measurement
//! projectors explicitly.
//!
//! All entropies are in bits with `0·log₂0 = 0`.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{kron, partial_trace, pauli, shannon_entropy, LinalgError, Matrix2, Matrix4, Subsystem, C64};
use crate::model::off_x_magnitude;

/// Largest off-X magnitude accepted by the X pipeline.
pub const X_STATE_TOL: f64 = 1e-10;
/// Negative discord/correlation values down to this are rounded to zero.
pub const CLAMP_TOL: f64 = 1e-9;
/// Measurement outcomes less likely than this are dropped.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

pub const THETA_GRID: usize = 61;
pub const PHI_GRID: usize = 121;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscordError {
    #[error("state is not an X state (largest off-X entry {0:e})")]
    NotXState(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Coefficients of `ρ = ¼[I⊗I + Σᵢ αᵢ σⁱ⊗σⁱ + α₄ I⊗σ³ + α₅ σ³⊗I]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XStateCoeffs {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
}

impl XStateCoeffs {
    /// Rebuilds the density matrix from the Pauli expansion.
    pub fn to_matrix(&self) -> Matrix4 {
        let id = Matrix2::identity();
        let [x, y, z] = pauli::xyz();
        (kron(&id, &id)
            + kron(&x, &x).scale_real(self.alpha1)
            + kron(&y, &y).scale_real(self.alpha2)
            + kron(&z, &z).scale_real(self.alpha3)
            + kron(&id, &z).scale_real(self.alpha4)
            + kron(&z, &id).scale_real(self.alpha5))
        .scale_real(0.25)
    }
}

/// Pauli coefficients of an X state. Only the Hermitian combinations
/// `ρ14+ρ41`, `ρ23+ρ32` enter, so imaginary coherences are invisible here;
/// see [`canonical_phases`].
pub fn x_coeffs(rho: &Matrix4) -> Result<XStateCoeffs, DiscordError> {
    let off = off_x_magnitude(rho);
    if off > X_STATE_TOL {
        return Err(DiscordError::NotXState(off));
    }
    let r = |i: usize, j: usize| rho.data[i][j];
    let outer = (r(0, 3) + r(3, 0)).re;
    let inner = (r(1, 2) + r(2, 1)).re;
    let (p1, p2, p3, p4) = (r(0, 0).re, r(1, 1).re, r(2, 2).re, r(3, 3).re);
    Ok(XStateCoeffs {
        alpha1: outer + inner,
        alpha2: inner - outer,
        alpha3: p1 + p4 - p2 - p3,
        alpha4: p1 + p3 - p2 - p4,
        alpha5: p1 + p2 - p3 - p4,
    })
}

/// Applies local phase rotations `diag(e^{iα},1)⊗diag(e^{iβ},1)` that make
/// `ρ14` and `ρ23` real and non-negative. Discord, entropies and marginals
/// are unchanged.
pub fn canonical_phases(rho: &Matrix4) -> Matrix4 {
    let phi_outer = rho.data[0][3].arg();
    let phi_inner = rho.data[1][2].arg();
    let alpha = -(phi_outer + phi_inner) / 2.0;
    let beta = (phi_inner - phi_outer) / 2.0;
    let u = kron(
        &Matrix2::from_rows([[C64::from_polar(1.0, alpha), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]),
        &Matrix2::from_rows([[C64::from_polar(1.0, beta), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]),
    );
    let mut out = u * *rho * u.adjoint();
    // Strip roundoff on the rotated coherences.
    for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
        out.data[i][j] = C64::new(out.data[i][j].re, 0.0);
    }
    out
}

fn clamp_eigenvalue(e: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&e) {
        0.0
    } else {
        e
    }
}

/// The four eigenvalues `(E0, E1, E2, E3)` from the Pauli coefficients.
pub fn x_eigenvalues(c: &XStateCoeffs) -> [f64; 4] {
    let outer_block = ((c.alpha4 + c.alpha5).powi(2) + (c.alpha1 - c.alpha2).powi(2)).sqrt();
    let inner_block = ((c.alpha4 - c.alpha5).powi(2) + (c.alpha1 + c.alpha2).powi(2)).sqrt();
    [
        (1.0 + c.alpha3 + outer_block) / 4.0,
        (1.0 + c.alpha3 - outer_block) / 4.0,
        (1.0 - c.alpha3 + inner_block) / 4.0,
        (1.0 - c.alpha3 - inner_block) / 4.0,
    ]
    .map(clamp_eigenvalue)
}

/// Measurement direction on qubit N in half-angle form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAngles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// `(ε₁, ε₂, ε₃) = (sin(θ/2)cos(φ/2), sin(θ/2)sin(φ/2), cos(θ/2))`.
    pub fn direction(&self) -> [f64; 3] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let (sp, cp) = (self.phi / 2.0).sin_cos();
        [s * cp, s * sp, c]
    }
}

/// Conditional state of M after outcome k of the measurement on N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalOutcome {
    /// Bloch vector of the conditional state of M.
    pub q: [f64; 3],
    /// Bloch vector length, clamped to 1.
    pub chi: f64,
    pub probability: f64,
}

pub fn conditional_outcomes(c: &XStateCoeffs, m: &MeasurementAngles) -> [ConditionalOutcome; 2] {
    let [e1, e2, e3] = m.direction();
    [0, 1].map(|k| {
        let sign = if k == 0 { 1.0 } else { -1.0 };
        let denom = 1.0 + sign * c.alpha4 * e3;
        let probability = (denom / 2.0).clamp(0.0, 1.0);
        if probability < NEGLIGIBLE_PROBABILITY {
            return ConditionalOutcome {
                q: [0.0; 3],
                chi: 0.0,
                probability: 0.0,
            };
        }
        let q = [
            sign * c.alpha1 * e1 / denom,
            sign * c.alpha2 * e2 / denom,
            sign * (c.alpha3 * e3 + sign * c.alpha5) / denom,
        ];
        let chi = q.iter().map(|v| v * v).sum::<f64>().sqrt().min(1.0);
        ConditionalOutcome { q, chi, probability }
    })
}

/// Entropy of a qubit whose Bloch vector has length `chi`.
pub fn bloch_entropy(chi: f64) -> f64 {
    let chi = chi.clamp(0.0, 1.0);
    shannon_entropy(&[(1.0 + chi) / 2.0, (1.0 - chi) / 2.0])
}

/// Measured conditional entropy `p₀S(ρ₀) + p₁S(ρ₁)`, written as
/// `(S₀+S₁)/2 + α₄ε₃(S₀-S₁)/2`.
pub fn conditional_entropy_objective(c: &XStateCoeffs, m: &MeasurementAngles) -> f64 {
    let [o0, o1] = conditional_outcomes(c, m);
    let s0 = if o0.probability > 0.0 { bloch_entropy(o0.chi) } else { 0.0 };
    let s1 = if o1.probability > 0.0 { bloch_entropy(o1.chi) } else { 0.0 };
    let e3 = m.direction()[2];
    (s0 + s1) / 2.0 + c.alpha4 * e3 * (s0 - s1) / 2.0
}

fn marginal_entropies(c: &XStateCoeffs) -> (f64, f64) {
    let sm = shannon_entropy(&[(1.0 + c.alpha5) / 2.0, (1.0 - c.alpha5) / 2.0]);
    let sn = shannon_entropy(&[(1.0 + c.alpha4) / 2.0, (1.0 - c.alpha4) / 2.0]);
    (sm, sn)
}

/// Total correlation `S(ρᴹ) + S(ρᴺ) + Σ Eᵢ log₂ Eᵢ` of an X state.
pub fn mutual_information(rho: &Matrix4) -> Result<f64, DiscordError> {
    let c = x_coeffs(&canonical_phases_checked(rho)?)?;
    Ok(total_from_coeffs(&c))
}

fn total_from_coeffs(c: &XStateCoeffs) -> f64 {
    let (sm, sn) = marginal_entropies(c);
    (sm + sn - shannon_entropy(&x_eigenvalues(c))).max(0.0)
}

fn canonical_phases_checked(rho: &Matrix4) -> Result<Matrix4, DiscordError> {
    let off = off_x_magnitude(rho);
    if off > X_STATE_TOL {
        return Err(DiscordError::NotXState(off));
    }
    Ok(canonical_phases(rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub argmin: MeasurementAngles,
    /// Minimum of the measured conditional entropy.
    pub min_conditional_entropy: f64,
}

/// Compass search with a parabolic step on each coordinate, starting from
/// `start` with initial step sizes `steps`. `clamp` maps a trial point back
/// into the domain. Stops once both step sizes fall below `min_step`.
fn refine<F, P>(objective: F, clamp: P, start: [f64; 2], start_value: f64, steps: [f64; 2], min_step: f64) -> ([f64; 2], f64)
where
    F: Fn([f64; 2]) -> f64,
    P: Fn([f64; 2]) -> [f64; 2],
{
    let mut x = start;
    let mut fx = start_value;
    let mut h = steps;
    for _ in 0..400 {
        if h[0] < min_step && h[1] < min_step {
            break;
        }
        let mut improved = false;
        for axis in 0..2 {
            if h[axis] < min_step {
                continue;
            }
            let mut lo = x;
            lo[axis] -= h[axis];
            let mut hi = x;
            hi[axis] += h[axis];
            let (lo, hi) = (clamp(lo), clamp(hi));
            let (flo, fhi) = (objective(lo), objective(hi));
            let mut best = (x, fx);
            for cand in [(lo, flo), (hi, fhi)] {
                if cand.1 < best.1 {
                    best = cand;
                }
            }
            // Vertex of the parabola through (-h, f_lo), (0, f_x), (+h, f_hi).
            let curvature = flo - 2.0 * fx + fhi;
            if curvature > 0.0 {
                let offset = 0.5 * h[axis] * (flo - fhi) / curvature;
                if offset.abs() < h[axis] {
                    let mut v = x;
                    v[axis] += offset;
                    let v = clamp(v);
                    let fv = objective(v);
                    if fv < best.1 {
                        best = (v, fv);
                    }
                }
            }
            if best.1 < fx {
                x = best.0;
                fx = best.1;
                improved = true;
            }
        }
        if !improved {
            h = [h[0] / 2.0, h[1] / 2.0];
        }
    }
    (x, fx)
}

/// `C = S(ρᴹ) - min_{θ,φ} S(ρ|{N_k})`: 61×121 grid scan, ties toward smaller
/// θ then smaller φ, followed by local refinement.
pub fn classical_correlation(rho: &Matrix4) -> Result<ClassicalCorrelation, DiscordError> {
    let c = x_coeffs(&canonical_phases_checked(rho)?)?;
    Ok(classical_from_coeffs(&c))
}

fn classical_from_coeffs(c: &XStateCoeffs) -> ClassicalCorrelation {
    let dtheta = PI / (THETA_GRID - 1) as f64;
    let dphi = 2.0 * PI / (PHI_GRID - 1) as f64;
    let objective = |x: [f64; 2]| conditional_entropy_objective(c, &MeasurementAngles::new(x[0], x[1]));
    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..THETA_GRID {
        for j in 0..PHI_GRID {
            let x = [i as f64 * dtheta, j as f64 * dphi];
            let f = objective(x);
            if f < best.1 {
                best = (x, f);
            }
        }
    }
    let clamp = |x: [f64; 2]| [x[0].clamp(0.0, PI), x[1].rem_euclid(2.0 * PI)];
    let (x, f) = refine(objective, clamp, best.0, best.1, [dtheta, dphi], 1e-9);
    let (sm, _) = marginal_entropies(c);
    let mut value = sm - f;
    if (-CLAMP_TOL..0.0).contains(&value) {
        value = 0.0;
    }
    ClassicalCorrelation {
        value,
        argmin: MeasurementAngles::new(x[0], x[1]),
        min_conditional_entropy: f,
    }
}

/// Total correlation, classical correlation and discord, all in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationTriple {
    pub total: f64,
    pub classical: f64,
    pub discord: f64,
    pub argmin: MeasurementAngles,
}

/// Discord `Q = T - C` of an X state, measuring qubit N.
pub fn quantum_discord(rho: &Matrix4) -> Result<CorrelationTriple, DiscordError> {
    let c = x_coeffs(&canonical_phases_checked(rho)?)?;
    let total = total_from_coeffs(&c);
    let cc = classical_from_coeffs(&c);
    let mut discord = total - cc.value;
    if (-CLAMP_TOL..0.0).contains(&discord) {
        discord = 0.0;
    }
    Ok(CorrelationTriple {
        total,
        classical: cc.value,
        discord,
        argmin: cc.argmin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub total: f64,
    pub classical: f64,
    pub discord: f64,
    /// Smallest measured conditional entropy over the grid.
    pub min_conditional_entropy: f64,
    /// Bloch direction (on the measured qubit) attaining it.
    pub direction: [f64; 3],
}

fn qubit_entropy(m: &Matrix2) -> f64 {
    // Eigenvalues of a 2×2 Hermitian matrix.
    let a = m.data[0][0].re;
    let d = m.data[1][1].re;
    let b = m.data[0][1];
    let mean = (a + d) / 2.0;
    let radius = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    shannon_entropy(&[(mean + radius).max(0.0), (mean - radius).max(0.0)])
}

/// Explicit-projector discord of any two-qubit state with the measurement on
/// `measured`. Directions: `resolution` polar angles in `[0, π]` times
/// `resolution` azimuths in `[0, 2π)`; each direction `n` gives projectors
/// `(I ± n·σ)/2`.
pub fn brute_force_discord_on(rho: &Matrix4, resolution: usize, measured: Subsystem) -> Result<BruteForceResult, DiscordError> {
    let resolution = resolution.max(2);
    let kept = measured.other();
    let s_total = crate::linalg::von_neumann_entropy(rho)?;
    let s_kept = crate::linalg::von_neumann_entropy(&partial_trace(rho, kept))?;
    let s_measured = crate::linalg::von_neumann_entropy(&partial_trace(rho, measured))?;
    let total = (s_kept + s_measured - s_total).max(0.0);

    let id = Matrix2::identity();
    let [sx, sy, sz] = pauli::xyz();
    let mut best = (f64::INFINITY, [0.0, 0.0, 1.0]);
    for i in 0..resolution {
        let theta = PI * i as f64 / (resolution - 1) as f64;
        for j in 0..resolution {
            let phi = 2.0 * PI * j as f64 / resolution as f64;
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            let n_sigma = sx.scale_real(n[0]) + sy.scale_real(n[1]) + sz.scale_real(n[2]);
            let mut value = 0.0;
            for sign in [1.0, -1.0] {
                let proj = (id + n_sigma.scale_real(sign)).scale_real(0.5);
                let lifted = match measured {
                    Subsystem::N => kron(&id, &proj),
                    Subsystem::M => kron(&proj, &id),
                };
                let unnormalized = partial_trace(&(lifted * *rho), kept);
                let p = unnormalized.trace().re;
                if p > NEGLIGIBLE_PROBABILITY {
                    value += p * qubit_entropy(&unnormalized.scale_real(1.0 / p));
                }
            }
            if value < best.0 {
                best = (value, n);
            }
        }
    }
    let mut classical = s_kept - best.0;
    if (-CLAMP_TOL..0.0).contains(&classical) {
        classical = 0.0;
    }
    let mut discord = total - classical;
    if (-CLAMP_TOL..0.0).contains(&discord) {
        discord = 0.0;
    }
    Ok(BruteForceResult {
        total,
        classical,
        discord,
        min_conditional_entropy: best.0,
        direction: best.1,
    })
}

/// [`brute_force_discord_on`] with the measurement on N.
pub fn brute_force_discord(rho: &Matrix4, resolution: usize) -> Result<f64, DiscordError> {
    Ok(brute_force_discord_on(rho, resolution, Subsystem::N)?.discord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DensityMatrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients_of_reference_states() {
        let a = 0.37;
        let w = x_coeffs(DensityMatrix::werner(a).unwrap().matrix()).unwrap();
        for (got, want) in [(w.alpha1, a), (w.alpha2, a), (w.alpha3, -a), (w.alpha4, 0.0), (w.alpha5, 0.0)] {
            assert_abs_diff_eq!(got, want, epsilon = 1e-15);
        }
        let mixed = x_coeffs(DensityMatrix::maximally_mixed().matrix()).unwrap();
        assert_eq!([mixed.alpha1, mixed.alpha2, mixed.alpha3, mixed.alpha4, mixed.alpha5], [0.0; 5]);
        let g = x_coeffs(DensityMatrix::basis_projector(4).matrix()).unwrap();
        assert_eq!([g.alpha1, g.alpha2, g.alpha3, g.alpha4, g.alpha5], [0.0, 0.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn reconstruction_round_trip() {
        let rho = Matrix4::from_real([
            [0.1, 0.0, 0.0, 0.05],
            [0.0, 0.25, -0.1, 0.0],
            [0.0, -0.1, 0.3, 0.0],
            [0.05, 0.0, 0.0, 0.35],
        ]);
        let c = x_coeffs(&rho).unwrap();
        assert!(c.to_matrix().max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn werner_closed_form_spectrum() {
        for a in [0.0, 0.4, 1.0] {
            let c = x_coeffs(DensityMatrix::werner(a).unwrap().matrix()).unwrap();
            let e = x_eigenvalues(&c);
            let lo = (1.0 - a) / 4.0;
            let want = [lo, lo, (1.0 + 3.0 * a) / 4.0, lo];
            for (x, y) in e.iter().zip(want) {
                assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn non_x_state_rejected() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let m = Matrix4::outer(&v);
        assert!(matches!(quantum_discord(&m), Err(DiscordError::NotXState(_))));
        assert!(brute_force_discord(&m, 20).is_ok());
    }

    #[test]
    fn objective_reference_values() {
        let mixed = x_coeffs(DensityMatrix::maximally_mixed().matrix()).unwrap();
        for (t, p) in [(0.0, 0.0), (1.0, 2.0), (PI, 5.0)] {
            assert_abs_diff_eq!(conditional_entropy_objective(&mixed, &MeasurementAngles::new(t, p)), 1.0, epsilon = 1e-15);
        }
        let bell = XStateCoeffs {
            alpha1: 1.0,
            alpha2: 1.0,
            alpha3: -1.0,
            alpha4: 0.0,
            alpha5: 0.0,
        };
        assert_abs_diff_eq!(conditional_entropy_objective(&bell, &MeasurementAngles::new(PI, 0.0)), 0.0, epsilon = 1e-12);
        // Werner(0.5), θ = 0: q₃ = ±a so χ = 0.5 and the objective is h(0.75).
        let w = x_coeffs(DensityMatrix::werner(0.5).unwrap().matrix()).unwrap();
        let h = -(0.75_f64 * 0.75_f64.log2() + 0.25 * 0.25_f64.log2());
        let outcomes = conditional_outcomes(&w, &MeasurementAngles::new(0.0, 0.0));
        assert_abs_diff_eq!(outcomes[0].chi, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(outcomes[1].chi, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(conditional_entropy_objective(&w, &MeasurementAngles::new(0.0, 0.0)), h, epsilon = 1e-15);
        assert_abs_diff_eq!(h, 0.811278124459, epsilon = 1e-12);
    }

    #[test]
    fn measurement_direction_is_unit() {
        for (t, p) in [(0.3, 1.1), (2.0, 6.0), (PI, 0.0)] {
            let d = MeasurementAngles::new(t, p).direction();
            assert_abs_diff_eq!(d.iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn reference_discords() {
        let bell = quantum_discord(DensityMatrix::bell_psi().matrix()).unwrap();
        assert_abs_diff_eq!(bell.total, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bell.classical, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(bell.discord, 1.0, epsilon = 1e-9);
        let mixed = quantum_discord(DensityMatrix::maximally_mixed().matrix()).unwrap();
        assert_eq!((mixed.total, mixed.classical, mixed.discord), (0.0, 0.0, 0.0));
        for k in 1..=4 {
            let q = quantum_discord(DensityMatrix::basis_projector(k).matrix()).unwrap();
            assert_abs_diff_eq!(q.discord, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn werner_half_mutual_information() {
        // Spectrum: 1/8 three times and 5/8.
        let t = mutual_information(DensityMatrix::werner(0.5).unwrap().matrix()).unwrap();
        let s = -(3.0 * 0.125 * 0.125_f64.log2() + 0.625 * 0.625_f64.log2());
        assert_abs_diff_eq!(t, 2.0 - s, epsilon = 1e-14);
    }

    #[test]
    fn brute_force_reference_states() {
        assert_abs_diff_eq!(brute_force_discord(DensityMatrix::bell_psi().matrix(), 200).unwrap(), 1.0, epsilon = 1e-4);
        assert_abs_diff_eq!(brute_force_discord(DensityMatrix::maximally_mixed().matrix(), 30).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn complex_coherences_are_phase_canonicalized() {
        let w = *DensityMatrix::werner(0.7).unwrap().matrix();
        let mut rotated = w;
        rotated[(1, 2)] = w[(1, 2)] * C64::from_polar(1.0, 1.1);
        rotated[(2, 1)] = rotated[(1, 2)].conj();
        let a = quantum_discord(&w).unwrap();
        let b = quantum_discord(&rotated).unwrap();
        assert_abs_diff_eq!(a.discord, b.discord, epsilon = 1e-10);
        assert_abs_diff_eq!(b.discord, brute_force_discord(&rotated, 61).unwrap(), epsilon = 1e-3);
    }
}
