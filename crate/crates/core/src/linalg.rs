//! Fixed-size dense complex linear algebra for one and two qubits.
//!
//! Everything here lives in a 2- or 4-dimensional Hilbert space, so the
//! matrices are stack arrays with small loop kernels. Basis ordering for the
//! two-qubit space is `|1⟩=|e,e⟩, |2⟩=|e,g⟩, |3⟩=|g,e⟩, |4⟩=|g,g⟩`, i.e. the
//! first qubit (M) is the most significant index and `|e⟩` is index 0.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance on `max |m_ij - conj(m_ji)|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `|Tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are roundoff and clamped to zero.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {0:e})")]
    NonHermitianInput(f64),
    #[error("eigenvalue {0:e} is below the positivity tolerance")]
    NegativeEigenvalue(f64),
    #[error("trace {0} differs from 1")]
    TraceNotOne(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("expected a {expected}x{expected} matrix, got {rows} rows with lengths {cols:?}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: Vec<usize>,
    },
}

/// Dense `N×N` complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct SquareMatrix<const N: usize> {
    pub data: [[C64; N]; N],
}

pub type Matrix2 = SquareMatrix<2>;
pub type Matrix4 = SquareMatrix<4>;

impl<const N: usize> Default for SquareMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> SquareMatrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self {
            data: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(data: [[C64; N]; N]) -> Self {
        Self { data }
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    pub fn diagonal(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = C64::new(d[i], 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = self.data[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.data[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `max |m_ij - conj(m_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    /// Real part of every entry as a plain array.
    pub fn re(&self) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                out[i][j] = self.data[i][j].re;
            }
        }
        out
    }

    pub fn im(&self) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                out[i][j] = self.data[i][j].im;
            }
        }
        out
    }
}

impl<const N: usize> Index<(usize, usize)> for SquareMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for SquareMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i][j]
    }
}

impl<const N: usize> Add for SquareMatrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const N: usize> AddAssign for SquareMatrix<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] += rhs.data[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for SquareMatrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] -= rhs.data[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for SquareMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl<const N: usize> Mul for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul<C64> for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<f64> for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_real(rhs)
    }
}

impl<const N: usize> fmt::Debug for SquareMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.data {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl<const N: usize> SquareMatrix<N> {
    fn to_json_repr(self) -> MatrixJson {
        MatrixJson {
            re: self.re().iter().map(|r| r.to_vec()).collect(),
            im: self.im().iter().map(|r| r.to_vec()).collect(),
        }
    }

    fn from_json_repr(repr: &MatrixJson) -> Result<Self, LinalgError> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == N && rows.iter().all(|r| r.len() == N);
        if !shape_ok(&repr.re) || !shape_ok(&repr.im) {
            let bad = if shape_ok(&repr.re) { &repr.im } else { &repr.re };
            return Err(LinalgError::Shape {
                expected: N,
                rows: bad.len(),
                cols: bad.iter().map(Vec::len).collect(),
            });
        }
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = C64::new(repr.re[i][j], repr.im[i][j]);
            }
        }
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        Ok(m)
    }
}

/// Serialized as `{"re": [[…]], "im": [[…]]}`, row-major.
impl<const N: usize> Serialize for SquareMatrix<N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json_repr().serialize(serializer)
    }
}

impl<'de, const N: usize> Deserialize<'de> for SquareMatrix<N> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixJson::deserialize(deserializer)?;
        Self::from_json_repr(&repr).map_err(serde::de::Error::custom)
    }
}

pub mod pauli {
    use super::*;

    pub fn identity() -> Matrix2 {
        Matrix2::identity()
    }

    pub fn x() -> Matrix2 {
        Matrix2::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> Matrix2 {
        Matrix2::from_rows([[ZERO, -I], [I, ZERO]])
    }

    /// `σz|e⟩ = +|e⟩`.
    pub fn z() -> Matrix2 {
        Matrix2::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// Lowering operator `σ = |g⟩⟨e|`.
    pub fn lowering() -> Matrix2 {
        Matrix2::from_real([[0.0, 0.0], [1.0, 0.0]])
    }

    /// Raising operator `σ† = |e⟩⟨g|`.
    pub fn raising() -> Matrix2 {
        lowering().adjoint()
    }

    /// `[σx, σy, σz]`.
    pub fn xyz() -> [Matrix2; 3] {
        [x(), y(), z()]
    }
}

/// `(a⊗b)[2i+k][2j+l] = a[i][j]·b[k][l]`.
pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.data[2 * i + k][2 * j + l] = a.data[i][j] * b.data[k][l];
                }
            }
        }
    }
    m
}

/// One of the two qubits. `M` is the first tensor factor, `N` the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    M,
    N,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::M => Subsystem::N,
            Subsystem::N => Subsystem::M,
        }
    }
}

/// Reduced state of `keep`, tracing out the other qubit.
pub fn partial_trace(rho: &Matrix4, keep: Subsystem) -> Matrix2 {
    let mut out = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            out.data[a][b] = (0..2)
                .map(|k| match keep {
                    Subsystem::M => rho.data[2 * a + k][2 * b + k],
                    Subsystem::N => rho.data[2 * k + a][2 * k + b],
                })
                .sum();
        }
    }
    out
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// The `N×N` Hermitian `A = X + iY` is embedded as the real symmetric
/// `[[X, -Y], [Y, X]]`, whose spectrum is that of `A` with every eigenvalue
/// doubled; cyclic Jacobi sweeps then diagonalize the embedding.
pub fn hermitian_eigenvalues<const N: usize>(m: &SquareMatrix<N>) -> Result<[f64; N], LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let herr = m.hermiticity_error();
    if herr > HERMITIAN_TOL {
        return Err(LinalgError::NonHermitianInput(herr));
    }
    let h = m.hermitian_part();
    let n2 = 2 * N;
    let mut a = vec![vec![0.0; n2]; n2];
    for i in 0..N {
        for j in 0..N {
            let z = h.data[i][j];
            a[i][j] = z.re;
            a[i + N][j + N] = z.re;
            a[i][j + N] = -z.im;
            a[i + N][j] = z.im;
        }
    }
    jacobi_symmetric(&mut a);
    let mut diag: Vec<f64> = (0..n2).map(|i| a[i][i]).collect();
    diag.sort_by(|x, y| x.total_cmp(y));
    let mut out = [0.0; N];
    for (k, v) in out.iter_mut().enumerate() {
        *v = 0.5 * (diag[2 * k] + diag[2 * k + 1]);
    }
    Ok(out)
}

fn jacobi_symmetric(a: &mut [Vec<f64>]) {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
}

/// `-Σ p log₂ p` with `0·log₂0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Clamps roundoff negatives in `[-POSITIVITY_TOL, 0)` to zero; anything
/// more negative is an error.
pub fn clamp_spectrum<const N: usize>(eigs: [f64; N]) -> Result<[f64; N], LinalgError> {
    let mut out = eigs;
    for v in out.iter_mut() {
        if *v < -POSITIVITY_TOL {
            return Err(LinalgError::NegativeEigenvalue(*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(out)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy<const N: usize>(m: &SquareMatrix<N>) -> Result<f64, LinalgError> {
    let eigs = clamp_spectrum(hermitian_eigenvalues(m)?)?;
    Ok(shannon_entropy(&eigs))
}

/// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix(Matrix4);

impl DensityMatrix {
    pub fn new(m: Matrix4) -> Result<Self, LinalgError> {
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let herr = m.hermiticity_error();
        if herr > HERMITIAN_TOL {
            return Err(LinalgError::NonHermitianInput(herr));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(LinalgError::TraceNotOne(tr));
        }
        let eigs = hermitian_eigenvalues(&m)?;
        if eigs[0] < -POSITIVITY_TOL {
            return Err(LinalgError::NegativeEigenvalue(eigs[0]));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix without checks. Integrators use this for states whose
    /// health is tracked separately.
    pub fn new_unchecked(m: Matrix4) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4 {
        self.0
    }

    pub fn eigenvalues(&self) -> Result<[f64; 4], LinalgError> {
        hermitian_eigenvalues(&self.0)
    }

    pub fn entropy(&self) -> Result<f64, LinalgError> {
        von_neumann_entropy(&self.0)
    }

    pub fn reduced(&self, keep: Subsystem) -> Matrix2 {
        partial_trace(&self.0, keep)
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity().scale_real(0.25))
    }

    /// `|k⟩⟨k|` for `k` in `1..=4` (1-based labels).
    pub fn basis_projector(k: usize) -> Self {
        assert!((1..=4).contains(&k), "basis label must be 1..=4");
        let mut m = Matrix4::zeros();
        m.data[k - 1][k - 1] = ONE;
        Self(m)
    }

    /// Bell state `|Ψ⟩ = (|e,g⟩ + |g,e⟩)/√2`.
    pub fn bell_psi() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [ZERO, C64::new(h, 0.0), C64::new(h, 0.0), ZERO];
        Self(Matrix4::outer(&v))
    }

    /// Werner state `(1-a) I/4 + a |Ψ⟩⟨Ψ|`; PSD only for `a ∈ [-1/3, 1]`.
    pub fn werner(a: f64) -> Result<Self, LinalgError> {
        let m = Matrix4::identity().scale_real((1.0 - a) / 4.0) + Self::bell_psi().0.scale_real(a);
        Self::new(m)
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = Matrix4;
    fn deref(&self) -> &Matrix4 {
        &self.0
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let m = Matrix4::deserialize(deserializer)?;
        Self::new(m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kron_identity() {
        assert_eq!(kron(&Matrix2::identity(), &Matrix2::identity()), Matrix4::identity());
    }

    #[test]
    fn kron_x_z_by_hand() {
        // σx⊗σz = [[0, σz], [σz, 0]]
        let m = kron(&pauli::x(), &pauli::z());
        let mut expected = Matrix4::zeros();
        expected[(0, 2)] = ONE;
        expected[(1, 3)] = -ONE;
        expected[(2, 0)] = ONE;
        expected[(3, 1)] = -ONE;
        assert_eq!(m, expected);
    }

    #[test]
    fn collective_lowering_entries() {
        // σ⊗I + I⊗σ maps |1⟩→|2⟩+|3⟩ and |2⟩,|3⟩→|4⟩.
        let s = kron(&pauli::lowering(), &Matrix2::identity()) + kron(&Matrix2::identity(), &pauli::lowering());
        let mut expected = Matrix4::zeros();
        for (i, j) in [(1, 0), (2, 0), (3, 1), (3, 2)] {
            expected[(i, j)] = ONE;
        }
        assert_eq!(s, expected);
    }

    #[test]
    fn partial_traces_of_simple_states() {
        let half = Matrix2::identity().scale_real(0.5);
        let mixed = DensityMatrix::maximally_mixed();
        assert!(mixed.reduced(Subsystem::M).max_abs_diff(&half) < 1e-15);
        let bell = DensityMatrix::bell_psi();
        assert!(bell.reduced(Subsystem::M).max_abs_diff(&half) < 1e-15);
        assert!(bell.reduced(Subsystem::N).max_abs_diff(&half) < 1e-15);
        let w = DensityMatrix::werner(0.5).unwrap();
        assert!(w.reduced(Subsystem::N).max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn x_state_marginals_are_diagonal_sums() {
        let rho = Matrix4::from_real([
            [0.1, 0.0, 0.0, 0.05],
            [0.0, 0.2, 0.07, 0.0],
            [0.0, 0.07, 0.3, 0.0],
            [0.05, 0.0, 0.0, 0.4],
        ]);
        let m = partial_trace(&rho, Subsystem::M);
        let n = partial_trace(&rho, Subsystem::N);
        assert_eq!(m, Matrix2::diagonal([0.1 + 0.2, 0.3 + 0.4]));
        assert_eq!(n, Matrix2::diagonal([0.1 + 0.3, 0.2 + 0.4]));
    }

    #[test]
    fn eigenvalues_simple() {
        assert_eq!(hermitian_eigenvalues(&Matrix4::identity()).unwrap(), [1.0; 4]);
        let d = hermitian_eigenvalues(&Matrix4::diagonal([0.3, 0.1, 0.4, 0.2])).unwrap();
        for (x, y) in d.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
        }
    }

    #[test]
    fn werner_spectrum() {
        for a in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let e = DensityMatrix::werner(a).unwrap().eigenvalues().unwrap();
            let lo = (1.0 - a) / 4.0;
            let hi = (1.0 + 3.0 * a) / 4.0;
            for x in &e[..3] {
                assert_abs_diff_eq!(*x, lo, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(e[3], hi, epsilon = 1e-12);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = C64::new(0.5, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(LinalgError::NonHermitianInput(_))));
    }

    #[test]
    fn complex_hermitian_2x2() {
        // [[1, i],[-i, 1]] has eigenvalues 0 and 2.
        let m = Matrix2::from_rows([[ONE, I], [-I, ONE]]);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn entropies() {
        assert_abs_diff_eq!(von_neumann_entropy(&Matrix2::identity().scale_real(0.5)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(DensityMatrix::maximally_mixed().entropy().unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(DensityMatrix::bell_psi().entropy().unwrap(), 0.0, epsilon = 1e-12);
        for k in 1..=4 {
            assert_eq!(DensityMatrix::basis_projector(k).entropy().unwrap(), 0.0);
        }
    }

    #[test]
    fn entropy_clamps_roundoff_but_rejects_negative() {
        let tiny = Matrix2::diagonal([1.0 + 5e-9, -5e-9]);
        assert_abs_diff_eq!(von_neumann_entropy(&tiny).unwrap(), 0.0, epsilon = 1e-6);
        let bad = Matrix2::diagonal([1.1, -0.1]);
        assert!(matches!(von_neumann_entropy(&bad), Err(LinalgError::NegativeEigenvalue(_))));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(Matrix4::identity()).is_err());
        assert!(DensityMatrix::werner(1.0).is_ok());
        assert!(DensityMatrix::werner(-0.5).is_err());
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let w = DensityMatrix::bell_psi();
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.starts_with("{\"re\":[["));
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let bad = r#"{"re": [[1.0, 0.0]], "im": [[0.0, 0.0]]}"#;
        assert!(serde_json::from_str::<Matrix4>(bad).is_err());
    }
}
