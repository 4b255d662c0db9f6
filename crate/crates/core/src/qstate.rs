//! N-qubit pure states and density matrices.
//!
//! Basis ordering is big-endian throughout: qubit 0 is the most significant
//! bit of a basis index, so the amplitude of `|ijk⟩` lives at index
//! `4i + 2j + k`. Subsystems are addressed by their position, so in the
//! three-party setting `A, B, C` (or `A, R, R̄`) are `0, 1, 2`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};

/// Default tolerance for accepting an input as normalized.
pub const NORM_TOL: f64 = 1e-9;
/// Default tolerance for numerical comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// Position of a qubit within a register, `0` being the leftmost label.
pub type SubsystemIndex = usize;

/// Value (0 or 1) of `qubit` in basis index `index` of an `n`-qubit register.
#[inline]
pub fn bit_of(index: usize, qubit: SubsystemIndex, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// Removes the bit belonging to `qubit` from `index`, closing the gap.
pub fn delete_bit(index: usize, qubit: SubsystemIndex, n: usize) -> usize {
    let pos = n - 1 - qubit;
    let low = index & ((1 << pos) - 1);
    let high = index >> (pos + 1);
    (high << pos) | low
}

/// Inserts `value` as the bit for `qubit` into an `(n-1)`-qubit index, giving an `n`-qubit index.
pub fn insert_bit(index: usize, qubit: SubsystemIndex, n: usize, value: usize) -> usize {
    let pos = n - 1 - qubit;
    let low = index & ((1 << pos) - 1);
    let high = index >> pos;
    (high << (pos + 1)) | (value << pos) | low
}

fn log2_exact(len: usize) -> Option<usize> {
    (len >= 2 && len.is_power_of_two()).then(|| len.trailing_zeros() as usize)
}

/// A normalized pure state over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes in big-endian basis order.
    ///
    /// The amplitudes are renormalized when `|‖ψ‖² - 1| <= tol` and rejected
    /// otherwise.
    pub fn from_amplitudes(amps: Vec<Complex64>, tol: f64) -> Result<Self> {
        let n_qubits = log2_exact(amps.len()).ok_or(QrfError::NotPowerOfTwo { len: amps.len() })?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > tol {
            return Err(QrfError::NormOutOfTolerance { norm_sq, tol });
        }
        let scale = norm_sq.sqrt().recip();
        let amplitudes = amps.into_iter().map(|a| a * scale).collect();
        Ok(Self { n_qubits, amplitudes })
    }

    /// Convenience for real amplitudes.
    pub fn from_real(amps: &[f64], tol: f64) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect(), tol)
    }

    /// Scales arbitrary nonzero amplitudes onto the unit sphere.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(QrfError::NormOutOfTolerance { norm_sq, tol: f64::INFINITY });
        }
        let scale = norm_sq.sqrt().recip();
        Self::from_amplitudes(amps.into_iter().map(|a| a * scale).collect(), NORM_TOL)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if n_qubits == 0 || index >= dim {
            return Err(QrfError::InvalidSubsystem { index, n_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amps, NORM_TOL)
    }

    /// Tensor product `self ⊗ other`, with `self` occupying the leading qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState { n_qubits: self.n_qubits + other.n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self - other`; `f64::INFINITY` on a shape mismatch.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        if self.n_qubits != other.n_qubits {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix { n_qubits: self.n_qubits, matrix: m }
    }

    pub fn to_state_file(&self, perspective_of: Option<usize>) -> StateFile {
        StateFile {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
            perspective_of,
        }
    }

    pub fn from_state_file(file: &StateFile, tol: f64) -> Result<Self> {
        let amps: Vec<Complex64> =
            file.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let state = Self::from_amplitudes(amps, tol)?;
        if state.n_qubits != file.n_qubits {
            return Err(QrfError::DimensionMismatch { expected: file.n_qubits, found: state.n_qubits });
        }
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_state_file(None)).expect("state file serializes")
    }

    pub fn from_json(text: &str, tol: f64) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        Self::from_state_file(&file, tol)
    }
}

/// On-disk representation: `{"n_qubits": 3, "amplitudes": [[re, im], ...]}`.
///
/// Perspectival states carry an extra `"perspective_of"` index naming the
/// global subsystem whose point of view they describe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perspective_of: Option<usize>,
}

/// Hermitian, positive semidefinite, unit-trace matrix over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates `matrix` as a density matrix within `tol`.
    pub fn new(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QrfError::InvalidDensityMatrix(format!(
                "{}x{} is not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n_qubits =
            log2_exact(matrix.nrows()).ok_or(QrfError::NotPowerOfTwo { len: matrix.nrows() })?;
        let rho = Self { n_qubits, matrix };
        let asym = (&rho.matrix - rho.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > tol {
            return Err(QrfError::InvalidDensityMatrix(format!("not Hermitian (deviation {asym})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > tol {
            return Err(QrfError::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min_eig = rho.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(QrfError::InvalidDensityMatrix(format!("negative eigenvalue {min_eig}")));
        }
        Ok(rho)
    }

    /// Diagonal density matrix with the given probabilities.
    pub fn from_diagonal(probs: &[f64], tol: f64) -> Result<Self> {
        let d = probs.len();
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(probs[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(m, tol)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_offdiag(&self) -> f64 {
        let d = self.dim();
        let mut max = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    max = max.max(self.matrix[(i, j)].norm());
                }
            }
        }
        max
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part `(ρ + ρ†)/2`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let mut eigs: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(f64::total_cmp);
        eigs
    }

    /// Reduced state over `keep`, kept qubits retaining their relative order.
    pub fn partial_trace(&self, keep: &[SubsystemIndex]) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        if keep.is_empty() {
            return Err(QrfError::EmptyKeepSet);
        }
        if let Some(&index) = keep.iter().find(|&&q| q >= n) {
            return Err(QrfError::InvalidSubsystem { index, n_qubits: n });
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

        // Full-register bit patterns contributed by each reduced index and each traced configuration.
        let scatter = |qubits: &[usize], local: usize| -> usize {
            let m = qubits.len();
            qubits
                .iter()
                .enumerate()
                .map(|(pos, &q)| ((local >> (m - 1 - pos)) & 1) << (n - 1 - q))
                .fold(0, |acc, b| acc | b)
        };
        let kept_bits: Vec<usize> = (0..1 << kept.len()).map(|i| scatter(&kept, i)).collect();
        let traced_bits: Vec<usize> = (0..1 << traced.len()).map(|e| scatter(&traced, e)).collect();

        let d = kept_bits.len();
        let reduced = DMatrix::from_fn(d, d, |i, j| {
            traced_bits
                .iter()
                .map(|&e| self.matrix[(kept_bits[i] | e, kept_bits[j] | e)])
                .sum::<Complex64>()
        });
        Ok(DensityMatrix { n_qubits: kept.len(), matrix: reduced })
    }

    /// Maximal dephasing in the computational basis: off-diagonal entries vanish.
    pub fn dephase(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                self.matrix[(i, i)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix { n_qubits: self.n_qubits, matrix: m }
    }

    /// Purifies a diagonal state and projects the ancillas back out.
    ///
    /// The surviving amplitudes are the nonnegative square roots of the
    /// diagonal; any coherence above `tol` is an error.
    pub fn purify_diagonal(&self, tol: f64) -> Result<PureState> {
        let max_offdiag = self.max_offdiag();
        if max_offdiag > tol {
            return Err(QrfError::NotDiagonal { max_offdiag });
        }
        let amps = self
            .matrix
            .diagonal()
            .iter()
            .map(|p| Complex64::new(p.re.max(0.0).sqrt(), 0.0))
            .collect();
        PureState::from_amplitudes(amps, NORM_TOL)
    }

    /// Conjugation `K ρ K†` by an arbitrary (not necessarily unitary) operator.
    /// The result is not renormalized.
    pub(crate) fn conjugate_by(&self, op: &DMatrix<Complex64>) -> DensityMatrix {
        DensityMatrix { n_qubits: self.n_qubits, matrix: op * &self.matrix * op.adjoint() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn worked_example() -> PureState {
        PureState::from_real(&[0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5], NORM_TOL).unwrap()
    }

    #[test]
    fn basis_zero_from_amplitudes() {
        let psi = PureState::from_real(&[1.0, 0.0], NORM_TOL).unwrap();
        assert_eq!(psi.n_qubits(), 1);
        assert_eq!(psi.amplitude(0), c(1.0));
    }

    #[test]
    fn rejects_bad_lengths_and_norms() {
        assert!(matches!(
            PureState::from_real(&[1.0, 0.0, 0.0], NORM_TOL),
            Err(QrfError::NotPowerOfTwo { len: 3 })
        ));
        assert!(matches!(PureState::from_real(&[1.0], NORM_TOL), Err(QrfError::NotPowerOfTwo { .. })));
        // 0.36 + 0.64016001 = 1.00016001
        let err = PureState::from_real(&[0.6, 0.8001], 1e-6).unwrap_err();
        match err {
            QrfError::NormOutOfTolerance { norm_sq, .. } => assert!((norm_sq - 1.00016001).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let psi = PureState::from_real(&[1.0 + 1e-11, 0.0], NORM_TOL).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bit_helpers_are_big_endian() {
        // |110⟩ = index 6
        assert_eq!(bit_of(6, 0, 3), 1);
        assert_eq!(bit_of(6, 1, 3), 1);
        assert_eq!(bit_of(6, 2, 3), 0);
        assert_eq!(delete_bit(0b101, 1, 3), 0b11);
        assert_eq!(delete_bit(0b101, 0, 3), 0b01);
        assert_eq!(insert_bit(0b11, 1, 3, 0), 0b101);
        assert_eq!(insert_bit(0b01, 0, 3, 1), 0b101);
    }

    #[test]
    fn density_matrix_examples() {
        let zero = PureState::basis(1, 0).unwrap().density_matrix();
        assert_eq!(zero.entry(0, 0), c(1.0));
        assert_eq!(zero.entry(1, 1), c(0.0));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::from_real(&[h, h], NORM_TOL).unwrap().density_matrix();
        for z in plus.matrix().iter() {
            assert!((z - c(0.5)).norm() < 1e-15);
        }

        let rho = worked_example().density_matrix();
        let expected = [0.25, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25];
        for (d, e) in rho.diagonal().iter().zip(expected) {
            assert!((d - e).abs() < 1e-15);
        }
        let eigs = rho.eigenvalues();
        assert!((eigs[7] - 1.0).abs() < 1e-10);
        assert!(eigs[..7].iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn partial_trace_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_real(&[h, 0.0, 0.0, h], NORM_TOL).unwrap().density_matrix();
        let a = bell.partial_trace(&[0]).unwrap();
        let half = DensityMatrix::from_diagonal(&[0.5, 0.5], DEFAULT_TOL).unwrap();
        assert!(a.max_abs_diff(&half) < 1e-15);

        // |0⟩ ⊗ |+⟩, trace out A
        let prod = PureState::from_real(&[h, h, 0.0, 0.0], NORM_TOL).unwrap().density_matrix();
        let b = prod.partial_trace(&[1]).unwrap();
        let plus = PureState::from_real(&[h, h], NORM_TOL).unwrap().density_matrix();
        assert!(b.max_abs_diff(&plus) < 1e-15);

        assert!(matches!(bell.partial_trace(&[]), Err(QrfError::EmptyKeepSet)));
        assert!(matches!(bell.partial_trace(&[2]), Err(QrfError::InvalidSubsystem { index: 2, .. })));
    }

    #[test]
    fn partial_trace_keeps_relative_order() {
        // |0⟩_A |1⟩_B |0⟩_C: keeping {C, A} gives |00⟩ over (A, C), keeping {B, C} gives |10⟩.
        let psi = PureState::basis(3, 0b010).unwrap().density_matrix();
        let ac = psi.partial_trace(&[2, 0]).unwrap();
        assert_eq!(ac.entry(0, 0), c(1.0));
        let bc = psi.partial_trace(&[1, 2]).unwrap();
        assert_eq!(bc.entry(2, 2), c(1.0));
    }

    #[test]
    fn dephase_examples() {
        let diag = DensityMatrix::from_diagonal(&[0.3, 0.7], DEFAULT_TOL).unwrap();
        assert_eq!(diag.dephase(), diag);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::from_real(&[h, h], NORM_TOL).unwrap().density_matrix();
        let half = DensityMatrix::from_diagonal(&[0.5, 0.5], DEFAULT_TOL).unwrap();
        assert!(plus.dephase().max_abs_diff(&half) < 1e-15);

        let rho = worked_example().density_matrix().dephase();
        let expected =
            DensityMatrix::from_diagonal(&[0.25, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25], DEFAULT_TOL)
                .unwrap();
        assert!(rho.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn purify_diagonal_examples() {
        let zero = DensityMatrix::from_diagonal(&[1.0, 0.0], DEFAULT_TOL).unwrap();
        assert_eq!(zero.purify_diagonal(DEFAULT_TOL).unwrap(), PureState::basis(1, 0).unwrap());

        let rho = DensityMatrix::from_diagonal(&[0.5, 0.25, 0.0, 0.25], DEFAULT_TOL).unwrap();
        let psi = rho.purify_diagonal(DEFAULT_TOL).unwrap();
        let expected =
            PureState::from_real(&[std::f64::consts::FRAC_1_SQRT_2, 0.5, 0.0, 0.5], NORM_TOL).unwrap();
        assert!(psi.max_abs_diff(&expected) < 1e-15);

        let uniform = DensityMatrix::from_diagonal(&[0.25; 4], DEFAULT_TOL).unwrap();
        let psi = uniform.purify_diagonal(DEFAULT_TOL).unwrap();
        assert!(psi.amplitudes().iter().all(|a| (a - c(0.5)).norm() < 1e-15));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::from_real(&[h, h], NORM_TOL).unwrap().density_matrix();
        assert!(matches!(plus.purify_diagonal(DEFAULT_TOL), Err(QrfError::NotDiagonal { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = DMatrix::from_diagonal_element(2, 2, c(0.6));
        assert!(DensityMatrix::new(bad_trace, DEFAULT_TOL).is_err());
        let non_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(non_herm, DEFAULT_TOL).is_err());
        let negative = DMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(DensityMatrix::new(negative, DEFAULT_TOL).is_err());
    }

    #[test]
    fn state_file_roundtrip() {
        let psi = PureState::from_amplitudes(
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
            NORM_TOL,
        )
        .unwrap();
        let text = psi.to_json();
        assert_eq!(text, r#"{"n_qubits":1,"amplitudes":[[0.6,0.0],[0.0,0.8]]}"#);
        assert_eq!(PureState::from_json(&text, NORM_TOL).unwrap(), psi);

        let mismatched = r#"{"n_qubits": 2, "amplitudes": [[1, 0], [0, 0]]}"#;
        assert!(matches!(
            PureState::from_json(mismatched, NORM_TOL),
            Err(QrfError::DimensionMismatch { .. })
        ));
    }
}
