//! Closed-form Werner trajectories, stationary matrices and stationary
//! correlations under the two extreme feedback settings, F1 (μ = -1) and
//! F2 (μ = 1).
//!
//! Known deviations of the reference formulas and how they are handled:
//!
//! * F1 `ρ44(t)`: the reference expression is offset by `-(3+a)/4`;
//!   [`f1_trajectory`] adds it back and [`f1_rho44_printed`] keeps the
//!   verbatim form.
//! * F2 `ρ14(t)`: the reference expression is twice the generator value;
//!   [`f2_trajectory`] halves it and [`f2_rho14_printed`] keeps it verbatim.
//! * F1 `ρ14(t)` has no reference expression; it is integrated in closed
//!   form from its own rate equation.
//! * Stationary correlations: the closed forms are evaluated as printed and
//!   reported next to the discord-module value, which is authoritative.

use serde::Serialize;
use thiserror::Error;

use crate::discord::{quantum_discord, CorrelationTriple, DiscordError};
use crate::linalg::{DensityMatrix, LinalgError, Matrix4, C64};

/// Shorthand denominators smaller than this are rejected.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("Werner parameter a = {0} is outside [0, 1]")]
    InvalidWerner(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shorthand denominator {name} vanishes (|·| = {magnitude:e})")]
    SingularParameter { name: &'static str, magnitude: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Discord(#[from] DiscordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerParams {
    pub a: f64,
}

impl WernerParams {
    pub fn new(a: f64) -> Result<Self, AnalyticError> {
        if !(0.0..=1.0).contains(&a) {
            return Err(AnalyticError::InvalidWerner(a));
        }
        Ok(Self { a })
    }

    pub fn state(&self) -> DensityMatrix {
        DensityMatrix::werner(self.a).expect("a validated on construction")
    }

    pub fn initial(&self) -> XInitial {
        XInitial::from_matrix(self.state().matrix())
    }
}

/// Independent entries of an X-shaped initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XInitial {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho14: C64,
    pub rho23: C64,
}

impl XInitial {
    /// Reads the X entries of `m`; anything outside the X pattern is ignored.
    pub fn from_matrix(m: &Matrix4) -> Self {
        Self {
            rho11: m.data[0][0].re,
            rho22: m.data[1][1].re,
            rho33: m.data[2][2].re,
            rho44: m.data[3][3].re,
            rho14: m.data[0][3],
            rho23: m.data[1][2],
        }
    }

    pub fn to_matrix(&self) -> Matrix4 {
        let mut m = Matrix4::diagonal([self.rho11, self.rho22, self.rho33, self.rho44]);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    pub fn state(&self) -> Result<DensityMatrix, AnalyticError> {
        Ok(DensityMatrix::new(self.to_matrix())?)
    }

    /// `ρ22 + ρ33`.
    pub fn kappa1(&self) -> f64 {
        self.rho22 + self.rho33
    }

    /// `ρ23 + ρ32`.
    pub fn kappa2(&self) -> f64 {
        2.0 * self.rho23.re
    }

    /// `ρ11 + ρ44`.
    pub fn kappa3(&self) -> f64 {
        self.rho11 + self.rho44
    }
}

/// X-sector entries of a closed-form trajectory at one instant, kept complex
/// so that the realness of the diagonal can be checked after evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XEntries {
    pub rho11: C64,
    pub rho22: C64,
    pub rho33: C64,
    pub rho23: C64,
    pub rho44: C64,
    pub rho14: C64,
}

impl XEntries {
    /// Assembles the matrix with `ρ32 = ρ23*`, `ρ41 = ρ14*`.
    pub fn to_matrix(&self) -> Matrix4 {
        let rho14 = self.rho14;
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.rho11;
        m[(1, 1)] = self.rho22;
        m[(2, 2)] = self.rho33;
        m[(3, 3)] = self.rho44;
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m[(0, 3)] = rho14;
        m[(3, 0)] = rho14.conj();
        m
    }

    /// Largest imaginary part on the diagonal.
    pub fn max_diagonal_imag(&self) -> f64 {
        [self.rho11, self.rho22, self.rho33, self.rho44]
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }
}

fn check_time(xi: f64, t: f64) -> Result<(), AnalyticError> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(AnalyticError::InvalidArgument(format!("xi = {xi} must be finite and ≥ 0")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(AnalyticError::InvalidArgument(format!("t = {t} must be finite and ≥ 0")));
    }
    Ok(())
}

/// Products of `𝒞₁-𝒟₁ = e^{-2t(4+ξ)}` with the other F1 shorthands,
/// evaluated as single decaying exponentials.
struct F1Terms {
    s: f64,
    /// `(𝒞₁-𝒟₁)𝒜₁`
    ea: C64,
    /// `(𝒞₁-𝒟₁)ℬ₁`
    eb: C64,
    /// `(𝒞₁-𝒟₁)(𝒞₁+𝒟₁)`
    ecd: C64,
    /// `(𝒞₁-𝒟₁)𝒢₁`
    eg: C64,
    /// `(𝒞₁-𝒟₁)𝒥₁`
    ej: C64,
    /// `√(-2i(4+ξ))`
    q: C64,
}

impl F1Terms {
    fn new(xi: f64, t: f64) -> Self {
        let s = (4.0 + xi).sqrt();
        let decay = C64::new(-2.0 * t * (4.0 + xi), 0.0);
        let hyper = |arg: C64| ((decay + arg).exp() + (decay - arg).exp()) / 2.0;
        let hyper_odd = |arg: C64| ((decay + arg).exp() - (decay - arg).exp()) / 2.0;
        let q = C64::new(0.0, -2.0 * (4.0 + xi)).sqrt();
        let real_arg = C64::new(4.0 * t * s, 0.0);
        let complex_arg = C64::new(2.0, 2.0) * t * q;
        Self {
            s,
            ea: hyper(real_arg),
            eb: hyper_odd(real_arg),
            ecd: C64::new(1.0, 0.0),
            eg: hyper(complex_arg),
            ej: hyper_odd(complex_arg),
            q,
        }
    }
}

/// Werner trajectory under F1.
pub fn f1_trajectory(w: WernerParams, xi: f64, t: f64) -> Result<XEntries, AnalyticError> {
    check_time(xi, t)?;
    let a = w.a;
    let k = F1Terms::new(xi, t);
    let s = k.s;
    let rho11 = ((1.0 - a) * s * s * k.ea + 2.0 * (1.0 + 3.0 * a) * s * k.eb) / (4.0 * s * s);
    let rho22 = (2.0 * (1.0 + 3.0 * a) * k.ea + (1.0 - a) * s * k.eb + 2.0 * (1.0 - a) * k.ecd) / 16.0;
    let two_minus = C64::new(2.0, -2.0);
    let rho23 = C64::new(1.0, 1.0)
        * (two_minus * (1.0 + 3.0 * a) * k.ea + (1.0 - a) * k.q * k.eb - (1.0 - a) * two_minus * k.ecd)
        / 32.0;
    let rho44 = f1_rho44_from_terms(a, xi, &k) + (3.0 + a) / 4.0;
    Ok(XEntries {
        rho11,
        rho22,
        rho33: rho22,
        rho23,
        rho44,
        rho14: f1_rho14(a, xi, t),
    })
}

/// `ρ14` under F1 from Werner input. Its rate equation is
/// `ρ14' = -2i√ξ u - κ ρ14` with `κ = 4+ξ+i(ξ+4√ξ)` and
/// `u = ρ22+ρ33+ρ23+ρ32 = Σ± c± e^{λ± t}`, `λ± = -2s² ± 4s`,
/// `c± = (1+3a)/4 ± (1-a)s/8`; the convolution is done in closed form.
fn f1_rho14(a: f64, xi: f64, t: f64) -> C64 {
    let s = (4.0 + xi).sqrt();
    let root = xi.sqrt();
    let kappa = C64::new(4.0 + xi, xi + 4.0 * root);
    let tail = (-kappa * t).exp();
    let mut sum = C64::new(0.0, 0.0);
    for sign in [1.0, -1.0] {
        let lambda = -2.0 * s * s + sign * 4.0 * s;
        let c = (1.0 + 3.0 * a) / 4.0 + sign * (1.0 - a) * s / 8.0;
        sum += c * (C64::new(lambda * t, 0.0).exp() - tail) / (lambda + kappa);
    }
    C64::new(0.0, -2.0 * root) * sum
}

fn f1_rho44_from_terms(a: f64, xi: f64, k: &F1Terms) -> C64 {
    -C64::new(1.0, 1.0)
        * (C64::new(4.0, -4.0) * (1.0 + a) * (4.0 + xi) * k.eg + (8.0 + 8.0 * a - a * xi + xi) * k.q * k.ej)
        / (16.0 * (4.0 + xi))
}

/// The F1 `ρ44(t)` closed form exactly as printed, without the `(3+a)/4`
/// offset. Equals `-(1+a)/2` at `t = 0`.
pub fn f1_rho44_printed(w: WernerParams, xi: f64, t: f64) -> Result<C64, AnalyticError> {
    check_time(xi, t)?;
    Ok(f1_rho44_from_terms(w.a, xi, &F1Terms::new(xi, t)))
}

/// Stationary state under F1 for any X initial state:
/// `ρ22 = ρ33 = (κ₁-κ₂)/4`, `ρ23 = ρ32 = (κ₂-κ₁)/4`, `ρ44 = (2κ₁+2κ₂+4κ₃)/4`.
pub fn f1_stationary(x0: &XInitial) -> Result<DensityMatrix, AnalyticError> {
    let (k1, k2, k3) = (x0.kappa1(), x0.kappa2(), x0.kappa3());
    let pop = (k1 - k2) / 4.0;
    let m = Matrix4::from_real([
        [0.0, 0.0, 0.0, 0.0],
        [0.0, pop, -pop, 0.0],
        [0.0, -pop, pop, 0.0],
        [0.0, 0.0, 0.0, (2.0 * k1 + 2.0 * k2 + 4.0 * k3) / 4.0],
    ]);
    Ok(DensityMatrix::new(m)?)
}

/// Total and classical correlation plus discord, without a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedCorrelations {
    pub total: f64,
    pub classical: f64,
    pub discord: f64,
}

/// Closed-form correlations next to the discord-module values for the same
/// stationary matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryCorrelations {
    pub printed: PrintedCorrelations,
    pub numeric: CorrelationTriple,
}

impl StationaryCorrelations {
    fn new(total: f64, classical: f64, numeric: CorrelationTriple) -> Self {
        Self {
            printed: PrintedCorrelations {
                total,
                classical,
                discord: total - classical,
            },
            numeric,
        }
    }

    /// Values used downstream: the numeric ones.
    pub fn authoritative(&self) -> CorrelationTriple {
        self.numeric
    }

    /// Largest |printed - numeric| over T, C and Q (NaN if a printed value is).
    pub fn deviation(&self) -> f64 {
        let d = [
            self.printed.total - self.numeric.total,
            self.printed.classical - self.numeric.classical,
            self.printed.discord - self.numeric.discord,
        ];
        if d.iter().any(|x| x.is_nan()) {
            return f64::NAN;
        }
        d.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `x·log₂ y` with `0·log₂ 0 = 0`.
fn xlog2(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.log2()
    }
}

/// F1 stationary correlations of Werner(a).
pub fn f1_correlations(w: WernerParams) -> Result<StationaryCorrelations, AnalyticError> {
    let a = w.a;
    let total = 4.0 - xlog2((7.0 + a) / 4.0, 7.0 + a) + xlog2((3.0 + a) / 4.0, 3.0 + a);
    let root = (2.0 * (4.0 * a * a + 8.0 * a + 20.0)).sqrt();
    let classical = -1.0 - xlog2((1.0 - a) / 8.0, 1.0 - a) - xlog2((7.0 + a) / 8.0, 7.0 + a)
        + xlog2((2.0 + root) / 16.0, 8.0 + root)
        + xlog2((2.0 - root) / 16.0, 8.0 - root);
    let numeric = quantum_discord(f1_stationary(&w.initial())?.matrix())?;
    Ok(StationaryCorrelations::new(total, classical, numeric))
}

fn guard(name: &'static str, z: C64) -> Result<C64, AnalyticError> {
    if z.norm() < SINGULAR_TOL {
        return Err(AnalyticError::SingularParameter { name, magnitude: z.norm() });
    }
    Ok(z)
}

struct F2Terms {
    a2: C64,
    b2: C64,
    c2: C64,
    d2: C64,
    g2: C64,
    rho14_printed: C64,
}

impl F2Terms {
    fn new(a: f64, xi: f64, t: f64) -> Result<Self, AnalyticError> {
        let c = |re: f64, im: f64| C64::new(re, im);
        let x = c(xi, 0.0);
        let d_a = guard("(-2-2i+ξ)(6+6i+ξ)", (c(-2.0, -2.0) + x) * (c(6.0, 6.0) + x))?;
        let d_b = guard("-24+(4+4i)ξ+iξ²", c(-24.0, 0.0) + c(4.0, 4.0) * x + c(0.0, 1.0) * x * x)?;
        let d_cg = guard("8+(-4+ξ)ξ", c(8.0 + (-4.0 + xi) * xi, 0.0))?;
        let d_d = guard("(6-6i+ξ)(6+6i+ξ)(8+ξ)", (c(6.0, -6.0) + x) * (c(6.0, 6.0) + x) * (8.0 + xi))?;
        let d_14 = guard("-2-2i+ξ", c(-2.0, -2.0) + x)?;

        let e_a = (-(c(4.0, 0.0) + c(1.0, 1.0) * xi) * t).exp();
        let e_b = (c(-1.0, 1.0) * (c(2.0, 2.0) + x) * t).exp();
        let e_slow = (-2.0 * t * xi).exp();
        let e_fast = (-2.0 * t * (8.0 + xi)).exp();

        let a2 = 64.0 * xi * c(0.0, 1.0) * (a - 1.0) * e_a / d_a;
        let b2 = 64.0 * xi * (a - 1.0) * e_b / d_b;
        let c2 = c((a - 1.0) * e_slow * (-32.0 - 8.0 * xi + xi.powi(3)), 0.0) / d_cg;
        let d_num = -xi * (480.0 + xi * (184.0 + xi * (16.0 + xi))) + a * (9216.0 + xi * (4320.0 + xi * (696.0 + xi * (48.0 + xi))));
        let d2 = c(e_fast * d_num, 0.0) / d_d;
        let g2 = c((a - 1.0) * e_slow * (32.0 - 40.0 * xi + 8.0 * xi * xi + xi.powi(3)), 0.0) / d_cg;
        let rho14_printed = c(1.0, -1.0) * (1.0 - a) * xi.sqrt() * (e_slow - e_a) / d_14;
        Ok(Self {
            a2,
            b2,
            c2,
            d2,
            g2,
            rho14_printed,
        })
    }
}

/// Werner trajectory under F2, including `ρ14`.
pub fn f2_trajectory(w: WernerParams, xi: f64, t: f64) -> Result<XEntries, AnalyticError> {
    check_time(xi, t)?;
    let a = w.a;
    let k = F2Terms::new(a, xi, t)?;
    let rho11 = C64::new((1.0 - a) / 4.0 * (-2.0 * t * xi).exp(), 0.0);
    let shared = k.a2 + k.b2 - k.c2 + k.d2;
    let rho22 = (8.0 * (20.0 + xi - 4.0 * a - a * xi) / (8.0 + xi) + shared) / 64.0;
    let rho23 = (8.0 * (-1.0 + a + (12.0 + 4.0 * a) / (8.0 + xi)) + shared) / 64.0;
    let rho44 = (8.0 * (3.0 + a) * (4.0 + xi) / (8.0 + xi) - k.a2 - k.b2 + k.g2 - k.d2) / 32.0;
    Ok(XEntries {
        rho11,
        rho22,
        rho33: rho22,
        rho23,
        rho44,
        rho14: k.rho14_printed / 2.0,
    })
}

/// The F2 `ρ14(t)` closed form exactly as printed (twice the generator value).
pub fn f2_rho14_printed(w: WernerParams, xi: f64, t: f64) -> Result<C64, AnalyticError> {
    check_time(xi, t)?;
    Ok(F2Terms::new(w.a, xi, t)?.rho14_printed)
}

/// Stationary Werner state under F2.
pub fn f2_stationary(w: WernerParams, xi: f64) -> Result<DensityMatrix, AnalyticError> {
    check_time(xi, 0.0)?;
    let a = w.a;
    let den = 8.0 * (8.0 + xi);
    let pop = (20.0 + xi - a * (4.0 + xi)) / den;
    let coh = (4.0 - xi + a * (12.0 + xi)) / den;
    let ground = (3.0 + a) * (4.0 + xi) / (4.0 * (8.0 + xi));
    let m = Matrix4::from_real([
        [0.0, 0.0, 0.0, 0.0],
        [0.0, pop, coh, 0.0],
        [0.0, coh, pop, 0.0],
        [0.0, 0.0, 0.0, ground],
    ]);
    Ok(DensityMatrix::new(m)?)
}

/// Stationary state under F2 for any X initial state.
pub fn f2_stationary_x(x0: &XInitial, xi: f64) -> Result<DensityMatrix, AnalyticError> {
    check_time(xi, 0.0)?;
    let shift = x0.rho11 * (-48.0 + 24.0 * xi + xi * xi) / (16.0 * (12.0 + xi));
    let a3 = x0.rho22 - shift;
    let b3 = x0.rho33 - shift;
    let c3 = x0.rho23 - shift;
    let d3 = x0.rho23.conj() - shift;
    let e3 = x0.rho44 + x0.rho11 * (48.0 + 32.0 * xi + xi * xi) / (8.0 * (12.0 + xi));
    let den = 4.0 * (8.0 + xi);
    let cd = c3 + d3;
    let pop = ((12.0 + xi) * (a3 + b3) - (4.0 + xi) * cd + 8.0 * e3) / den;
    let coh = (-(4.0 + xi) * (a3 + b3) + (12.0 + xi) * cd + 8.0 * e3) / den;
    let ground = 2.0 * (4.0 + xi) * (a3 + b3 + cd + 2.0 * e3) / den;
    let mut m = Matrix4::zeros();
    m[(1, 1)] = pop;
    m[(2, 2)] = pop;
    m[(1, 2)] = coh;
    m[(2, 1)] = coh;
    m[(3, 3)] = ground;
    Ok(DensityMatrix::new(m)?)
}

/// F2 stationary correlations of Werner(a).
pub fn f2_correlations(w: WernerParams, xi: f64) -> Result<StationaryCorrelations, AnalyticError> {
    let a = w.a;
    let d1 = 8.0 + xi;
    let d2 = 20.0 + xi - a * (4.0 + xi);
    let d3 = (3.0 + a) * (4.0 + xi);
    let d4 = 44.0 + 7.0 * xi + a * (4.0 + xi);
    let d5 = 4.0 + 5.0 * xi + 3.0 * a * (4.0 + xi);
    let total = -(2.0 * xlog2(d2, d2 / (8.0 * d1)) - xlog2(d3, d3 / (4.0 * d1)) + 2.0 * xlog2(d4, d4 / (8.0 * d1))
        - 8.0 * xlog2(3.0 + a, (3.0 + a) / d1)
        - 2.0 * d1 * xlog2(1.0 - a, (1.0 - a) / 4.0))
        / (8.0 * d1);
    let classical = -(xlog2(d2, d2 / (8.0 * d1)) + xlog2(d4, d4 / (8.0 * d1))) / (8.0 * d1)
        + (xlog2(d4 + d5, d4 + d5) - 2.0 * xlog2(d4, d4) + xlog2(d4 - d5, d4 - d5) - 2.0 * d4) / (16.0 * d1);
    let numeric = quantum_discord(f2_stationary(w, xi)?.matrix())?;
    Ok(StationaryCorrelations::new(total, classical, numeric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const XI: f64 = 0.545;

    fn close(a: &Matrix4, b: &Matrix4, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d < tol, "difference {d:e} exceeds {tol:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn werner_range_checked() {
        assert!(WernerParams::new(1.2).is_err());
        assert!(WernerParams::new(-0.1).is_err());
        assert!(f1_trajectory(WernerParams::new(0.5).unwrap(), XI, -1.0).is_err());
    }

    #[test]
    fn trajectories_start_at_werner() {
        for a in [0.0, 0.3, 1.0] {
            let w = WernerParams::new(a).unwrap();
            let f1 = f1_trajectory(w, XI, 0.0).unwrap();
            close(&f1.to_matrix(), w.state().matrix(), 1e-14);
            let f2 = f2_trajectory(w, XI, 0.0).unwrap();
            close(&f2.to_matrix(), w.state().matrix(), 1e-14);
            assert_abs_diff_eq!(f1_rho44_printed(w, XI, 0.0).unwrap().re, -(1.0 + a) / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn trajectories_approach_stationary_matrices() {
        for a in [0.0, 0.5, 1.0] {
            let w = WernerParams::new(a).unwrap();
            // Slowest F1 rate is 2s(s-2) ≈ 0.56 with s = √(4+ξ).
            let f1 = f1_trajectory(w, XI, 30.0).unwrap();
            close(&f1.to_matrix(), f1_stationary(&w.initial()).unwrap().matrix(), 1e-6);
            // ρ11 decays as e^{-2ξt}, so a < 1 needs longer than a = 1.
            let t = if a == 1.0 { 10.0 } else { 20.0 };
            let f2 = f2_trajectory(w, XI, t).unwrap();
            close(&f2.to_matrix(), f2_stationary(w, XI).unwrap().matrix(), 1e-6);
        }
    }

    #[test]
    fn long_times_stay_finite() {
        let w = WernerParams::new(0.4).unwrap();
        for t in [100.0, 1e3, 1e5] {
            let e = f1_trajectory(w, XI, t).unwrap();
            assert!(e.to_matrix().is_finite());
            close(&e.to_matrix(), f1_stationary(&w.initial()).unwrap().matrix(), 1e-12);
        }
    }

    #[test]
    fn diagonal_is_real() {
        for a in [0.0, 0.7] {
            let w = WernerParams::new(a).unwrap();
            for t in [0.05, 0.5, 2.0, 7.0] {
                assert!(f1_trajectory(w, XI, t).unwrap().max_diagonal_imag() < 1e-10);
                assert!(f2_trajectory(w, XI, t).unwrap().max_diagonal_imag() < 1e-10);
            }
        }
    }

    #[test]
    fn f1_stationary_reference_values() {
        let w = WernerParams::new(1.0).unwrap();
        close(f1_stationary(&w.initial()).unwrap().matrix(), DensityMatrix::basis_projector(4).matrix(), 1e-15);
        let half = f1_stationary(&WernerParams::new(0.5).unwrap().initial()).unwrap();
        let want = Matrix4::from_real([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0625, -0.0625, 0.0],
            [0.0, -0.0625, 0.0625, 0.0],
            [0.0, 0.0, 0.0, 0.875],
        ]);
        close(half.matrix(), &want, 1e-15);
    }

    #[test]
    fn f2_stationary_small_xi_limit() {
        let s = f2_stationary(WernerParams::new(1.0).unwrap(), 0.0).unwrap();
        let want = Matrix4::from_real([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.25, 0.25, 0.0],
            [0.0, 0.25, 0.25, 0.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        close(s.matrix(), &want, 1e-15);
    }

    #[test]
    fn general_f2_formula_specializes_to_werner() {
        for a in [0.0, 0.4, 1.0] {
            let w = WernerParams::new(a).unwrap();
            for xi in [0.1, XI, 1.0] {
                close(f2_stationary_x(&w.initial(), xi).unwrap().matrix(), f2_stationary(w, xi).unwrap().matrix(), 1e-14);
            }
        }
    }

    #[test]
    fn f1_printed_total_matches_numeric() {
        for a in [0.0, 0.5, 0.9] {
            let c = f1_correlations(WernerParams::new(a).unwrap()).unwrap();
            assert_abs_diff_eq!(c.printed.total, c.numeric.total, epsilon = 1e-10);
        }
    }

    #[test]
    fn printed_f1_classical_goes_negative() {
        let c = f1_correlations(WernerParams::new(0.5).unwrap()).unwrap();
        assert!(c.printed.classical < -1.0);
        assert!(c.deviation() > 1.0);
        let one = f1_correlations(WernerParams::new(1.0).unwrap()).unwrap();
        assert!(one.printed.classical.is_infinite());
        assert_abs_diff_eq!(one.numeric.discord, 0.0, epsilon = 1e-9);
    }
}
