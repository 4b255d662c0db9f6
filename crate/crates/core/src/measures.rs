//! Entanglement, coherence and mutual-information functionals.
//!
//! Entropies are in bits. Two measure pairs are supported and never mixed:
//! entanglement entropy with the relative entropy of coherence, and linear
//! entropy with the squared ℓ²-norm of coherence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};
use crate::qstate::{DensityMatrix, PureState, SubsystemIndex, CLAMP_TOL};

/// Which (entanglement, coherence) functionals to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurePair {
    /// Entanglement entropy and relative entropy of coherence.
    Entropy,
    /// Linear entropy and ℓ²-norm of coherence.
    Linear,
}

impl MeasurePair {
    pub const ALL: [MeasurePair; 2] = [MeasurePair::Entropy, MeasurePair::Linear];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasurePair::Entropy => "entropy",
            MeasurePair::Linear => "linear",
        }
    }
}

impl fmt::Display for MeasurePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasurePair {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(MeasurePair::Entropy),
            "linear" => Ok(MeasurePair::Linear),
            other => Err(QrfError::Config(format!("unknown measure pair `{other}`"))),
        }
    }
}

/// A split of every subsystem into two disjoint, nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<SubsystemIndex>,
    right: Vec<SubsystemIndex>,
}

impl Bipartition {
    pub fn new(left: &[SubsystemIndex], right: &[SubsystemIndex], n_qubits: usize) -> Result<Self> {
        let mut l = left.to_vec();
        let mut r = right.to_vec();
        l.sort_unstable();
        l.dedup();
        r.sort_unstable();
        r.dedup();
        if l.is_empty() || r.is_empty() {
            return Err(QrfError::InvalidBipartition("both sides must be nonempty".into()));
        }
        if l.iter().any(|q| r.contains(q)) {
            return Err(QrfError::InvalidBipartition(format!("{l:?} and {r:?} overlap")));
        }
        if l.len() + r.len() != n_qubits || l.iter().chain(&r).any(|&q| q >= n_qubits) {
            return Err(QrfError::InvalidBipartition(format!(
                "{l:?} | {r:?} does not cover a {n_qubits}-qubit system"
            )));
        }
        Ok(Self { left: l, right: r })
    }

    /// `{q}` against everything else.
    pub fn isolate(q: SubsystemIndex, n_qubits: usize) -> Result<Self> {
        let rest: Vec<_> = (0..n_qubits).filter(|&i| i != q).collect();
        Self::new(&[q], &rest, n_qubits)
    }

    pub fn left(&self) -> &[SubsystemIndex] {
        &self.left
    }

    pub fn right(&self) -> &[SubsystemIndex] {
        &self.right
    }

    fn check(&self, n_qubits: usize) -> Result<()> {
        if self.left.len() + self.right.len() != n_qubits {
            return Err(QrfError::InvalidBipartition(format!(
                "{:?} | {:?} does not match a {n_qubits}-qubit state",
                self.left, self.right
            )));
        }
        Ok(())
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`; probabilities in `[-CLAMP_TOL, 0)` count as zero.
pub fn shannon_entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .map(|p| if p > 0.0 { -p * p.log2() } else { 0.0 })
        .sum::<f64>()
        .max(0.0)
}

/// Binary entropy `H(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    shannon_entropy([p, 1.0 - p])
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eigs = rho.eigenvalues();
    debug_assert!(eigs.iter().all(|&x| x >= -1e3 * CLAMP_TOL), "eigenvalues {eigs:?}");
    shannon_entropy(eigs)
}

/// Entanglement of a pure state across `split`.
pub fn entanglement(psi: &PureState, split: &Bipartition, m: MeasurePair) -> Result<f64> {
    split.check(psi.n_qubits())?;
    let reduced = psi.density_matrix().partial_trace(split.left())?;
    Ok(match m {
        MeasurePair::Entropy => von_neumann_entropy(&reduced),
        MeasurePair::Linear => (1.0 - reduced.purity()).max(0.0),
    })
}

/// Coherence of `rho` in the computational basis.
pub fn coherence(rho: &DensityMatrix, m: MeasurePair) -> f64 {
    match m {
        MeasurePair::Entropy => {
            (shannon_entropy(rho.diagonal()) - von_neumann_entropy(rho)).max(0.0)
        }
        MeasurePair::Linear => {
            let d = rho.dim();
            let mut sum = 0.0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        sum += rho.entry(i, j).norm_sqr();
                    }
                }
            }
            sum
        }
    }
}

/// `S(ρ_left) + S(ρ_right) - S(ρ)`; `rho` may be mixed.
pub fn mutual_information(rho: &DensityMatrix, split: &Bipartition) -> Result<f64> {
    split.check(rho.n_qubits())?;
    let left = rho.partial_trace(split.left())?;
    let right = rho.partial_trace(split.right())?;
    Ok(von_neumann_entropy(&left) + von_neumann_entropy(&right) - von_neumann_entropy(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{DEFAULT_TOL, NORM_TOL};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn bell() -> PureState {
        PureState::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2], NORM_TOL).unwrap()
    }

    fn plus() -> DensityMatrix {
        PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], NORM_TOL).unwrap().density_matrix()
    }

    #[test]
    fn von_neumann_examples() {
        assert!(von_neumann_entropy(&bell().density_matrix()).abs() < 1e-12);
        let half = DensityMatrix::from_diagonal(&[0.5, 0.5], DEFAULT_TOL).unwrap();
        assert!((von_neumann_entropy(&half) - 1.0).abs() < 1e-15);

        let r = FRAC_PI_4;
        let p = 0.5 * r.cos().powi(2);
        let rho = DensityMatrix::from_diagonal(&[p, 1.0 - p], DEFAULT_TOL).unwrap();
        // -(1/4)log2(1/4) - (3/4)log2(3/4)
        let expected = 0.5 + 0.75 * (4.0f64 / 3.0).log2();
        assert!((von_neumann_entropy(&rho) - expected).abs() < 1e-12);
        assert!((expected - 0.811_278_124_459_133).abs() < 1e-12);
    }

    #[test]
    fn entanglement_of_bell_state() {
        let split = Bipartition::isolate(0, 2).unwrap();
        assert!((entanglement(&bell(), &split, MeasurePair::Entropy).unwrap() - 1.0).abs() < 1e-12);
        assert!((entanglement(&bell(), &split, MeasurePair::Linear).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityMatrix::from_diagonal(&[0.2, 0.3, 0.1, 0.4], DEFAULT_TOL).unwrap();
        assert_eq!(coherence(&diag, MeasurePair::Entropy), 0.0);
        assert_eq!(coherence(&diag, MeasurePair::Linear), 0.0);
        assert!((coherence(&plus(), MeasurePair::Entropy) - 1.0).abs() < 1e-12);
        assert!((coherence(&plus(), MeasurePair::Linear) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let split = Bipartition::isolate(0, 2).unwrap();
        assert!((mutual_information(&bell().density_matrix(), &split).unwrap() - 2.0).abs() < 1e-12);

        let prod = PureState::basis(1, 1).unwrap().tensor(
            &PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], NORM_TOL).unwrap(),
        );
        assert!(mutual_information(&prod.density_matrix(), &split).unwrap().abs() < 1e-12);

        let mixed = DensityMatrix::from_diagonal(&[0.25; 4], DEFAULT_TOL).unwrap();
        assert!(mutual_information(&mixed, &split).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(&[0], &[0, 1], 2).is_err());
        assert!(Bipartition::new(&[0], &[], 1).is_err());
        assert!(Bipartition::new(&[0], &[1], 3).is_err());
        assert!(Bipartition::new(&[0], &[3], 2).is_err());
        let split = Bipartition::new(&[2], &[1, 0], 3).unwrap();
        assert_eq!(split.right(), &[0, 1]);
        assert!(matches!(
            entanglement(&bell(), &split, MeasurePair::Entropy),
            Err(QrfError::InvalidBipartition(_))
        ));
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_eq!(binary_entropy(-1e-17), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measure_pair_parsing() {
        assert_eq!("entropy".parse::<MeasurePair>().unwrap(), MeasurePair::Entropy);
        assert_eq!("linear".parse::<MeasurePair>().unwrap(), MeasurePair::Linear);
        assert!("both".parse::<MeasurePair>().is_err());
    }
}
