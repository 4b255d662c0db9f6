//! Perspective assignment and the Z2 reference-frame change.
//!
//! Assigning the perspective of qubit `P` maps an `N`-qubit global state to
//! the `(N-1)`-qubit state seen by `P`, which always sees itself in `|0⟩`.
//! Two routes are provided and agree to round-off:
//!
//! * [`assign_perspective`] flips every basis string whose `P` bit is 1 and
//!   merges the colliding pairs `(c₁, c₂)` into `√(|c₁|² + |c₂|²)`.
//! * [`assign_perspective_channel`] dephases the density matrix, applies the
//!   perspective operator `N⁽ᴾ⁾`, traces out `P` and purifies the diagonal.
//!
//! Merged amplitudes are real and nonnegative; relative phases of the input
//! are discarded.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QrfError, Result};
use crate::qstate::{bit_of, delete_bit, insert_bit, PureState, SubsystemIndex, DEFAULT_TOL};

/// The qubit whose point of view is being taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PerspectiveLabel(SubsystemIndex);

impl PerspectiveLabel {
    pub fn new(target: SubsystemIndex) -> Self {
        Self(target)
    }

    pub fn target(self) -> SubsystemIndex {
        self.0
    }

    fn validate(self, n_qubits: usize) -> Result<()> {
        if self.0 >= n_qubits {
            return Err(QrfError::InvalidSubsystem { index: self.0, n_qubits });
        }
        Ok(())
    }
}

impl fmt::Display for PerspectiveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}

fn check_assignable(psi: &PureState, p: PerspectiveLabel) -> Result<()> {
    if psi.n_qubits() < 2 {
        return Err(QrfError::TooFewQubits { n_qubits: psi.n_qubits() });
    }
    p.validate(psi.n_qubits())
}

/// Flip-and-merge perspective assignment.
pub fn assign_perspective(psi: &PureState, p: PerspectiveLabel) -> Result<PureState> {
    check_assignable(psi, p)?;
    let n = psi.n_qubits();
    let all_ones = (1usize << n) - 1;
    let amps = psi.amplitudes();
    let mut merged = vec![Complex64::new(0.0, 0.0); 1 << (n - 1)];
    for b in (0..1usize << n).filter(|&b| bit_of(b, p.target(), n) == 0) {
        let weight = (amps[b].norm_sqr() + amps[b ^ all_ones].norm_sqr()).sqrt();
        merged[delete_bit(b, p.target(), n)] = Complex64::new(weight, 0.0);
    }
    PureState::normalized(merged)
}

/// `N⁽ᴾ⁾ = |0⟩⟨0|_P ⊗ 1 + |0⟩⟨1|_P ⊗ σx^⊗(n-1)` as a dense `2ⁿ × 2ⁿ` matrix.
///
/// Basis strings with `P = 0` are left alone; strings with `P = 1` have every
/// qubit flipped. The operator is not unitary: `N N† = 2 (|0⟩⟨0|_P ⊗ 1)`.
pub fn perspective_operator(p: PerspectiveLabel, n: usize) -> Result<DMatrix<Complex64>> {
    if n == 0 {
        return Err(QrfError::InvalidSubsystem { index: p.target(), n_qubits: 0 });
    }
    p.validate(n)?;
    let dim = 1usize << n;
    let all_ones = dim - 1;
    let mut op = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let image = if bit_of(b, p.target(), n) == 0 { b } else { b ^ all_ones };
        op[(image, b)] = Complex64::new(1.0, 0.0);
    }
    Ok(op)
}

/// Perspective assignment as a channel pipeline: dephase, apply `N⁽ᴾ⁾`,
/// trace out `P`, purify.
pub fn assign_perspective_channel(psi: &PureState, p: PerspectiveLabel) -> Result<PureState> {
    check_assignable(psi, p)?;
    let n = psi.n_qubits();
    let dephased = psi.density_matrix().dephase();
    let shifted = dephased.conjugate_by(&perspective_operator(p, n)?);
    let others: Vec<_> = (0..n).filter(|&q| q != p.target()).collect();
    shifted.partial_trace(&others)?.purify_diagonal(DEFAULT_TOL)
}

/// Re-inserts the perspective qubit in `|0⟩` at position `p`, producing an
/// `(N+1)`-qubit state.
pub fn embed_perspective(psi: &PureState, p: PerspectiveLabel) -> Result<PureState> {
    let n = psi.n_qubits() + 1;
    p.validate(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        amps[insert_bit(i, p.target(), n, 0)] = *a;
    }
    PureState::normalized(amps)
}

/// Reference-frame change between two perspectives for the group Z2.
///
/// The input register holds every global subsystem except `from`, in global
/// order. The slot holding `to` carries the group element `g`; the operator
/// keeps `g⁻¹ = g` in that slot, now relabeled `from`, and applies
/// `U†(g) = σx^g` to every spectator. Since the slot does not move, the
/// matrix is a controlled flip and squares to the identity.
/// [`QrfOperator::output_labels`] gives the global label of each output slot.
#[derive(Debug, Clone, PartialEq)]
pub struct QrfOperator {
    n_qubits: usize,
    from_label: SubsystemIndex,
    to_label: SubsystemIndex,
    input_labels: Vec<SubsystemIndex>,
    matrix: DMatrix<Complex64>,
}

impl QrfOperator {
    /// Z2 frame change acting on `n_qubits`-qubit perspectival registers.
    /// `from` and `to` are global labels in `0..=n_qubits`.
    pub fn z2(n_qubits: usize, from: SubsystemIndex, to: SubsystemIndex) -> Result<Self> {
        let n_global = n_qubits + 1;
        for index in [from, to] {
            if n_qubits == 0 || index >= n_global {
                return Err(QrfError::InvalidSubsystem { index, n_qubits: n_global });
            }
        }
        if from == to {
            return Err(QrfError::Config("a frame change needs two distinct perspectives".into()));
        }
        let input_labels = (0..n_global).filter(|&q| q != from).collect();
        let slot = to - usize::from(to > from);
        let n = n_qubits;
        let dim = 1usize << n;
        let spectators = (dim - 1) ^ (1 << (n - 1 - slot));
        let mut matrix = DMatrix::zeros(dim, dim);
        for x in 0..dim {
            let image = if bit_of(x, slot, n) == 1 { x ^ spectators } else { x };
            matrix[(image, x)] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { n_qubits, from_label: from, to_label: to, input_labels, matrix })
    }

    /// The change back from `to` to `from`, acting on this operator's output
    /// register. It has the same matrix.
    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            from_label: self.to_label,
            to_label: self.from_label,
            input_labels: self.output_labels(),
            matrix: self.matrix.clone(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn from_label(&self) -> SubsystemIndex {
        self.from_label
    }

    pub fn to_label(&self) -> SubsystemIndex {
        self.to_label
    }

    /// Global labels of the input slots.
    pub fn input_labels(&self) -> &[SubsystemIndex] {
        &self.input_labels
    }

    /// Global labels of the output slots: the input labels with `to`
    /// replaced by `from`. They are in global order only when no other
    /// label lies between `from` and `to`.
    pub fn output_labels(&self) -> Vec<SubsystemIndex> {
        self.input_labels.iter().map(|&q| if q == self.to_label { self.from_label } else { q }).collect()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Applies `op` to `psi`.
pub fn qrf_transform(op: &QrfOperator, psi: &PureState) -> Result<PureState> {
    if op.n_qubits != psi.n_qubits() {
        return Err(QrfError::DimensionMismatch { expected: op.n_qubits, found: psi.n_qubits() });
    }
    let out = &op.matrix * DVector::from_column_slice(psi.amplitudes());
    PureState::normalized(out.iter().copied().collect())
}
