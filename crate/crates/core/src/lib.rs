//! Numerical toolkit for perspectival quantum reference frames on N-qubit
//! pure states.
//!
//! The crate is organized bottom-up:
//!
//! * [`qstate`]: pure states, density matrices, partial trace, dephasing.
//! * [`measures`]: entanglement, coherence and mutual information.
//! * [`perspective`]: perspective assignment and the Z2 frame change.
//! * [`transference`]: the three-qubit transference constraints, parity
//!   classes and their closed-form `X`, `Y`, `L` expressions.
//! * [`rindler`]: the fermionic entanglement-degradation family and sweeps.
//! * [`cli`]: the `qrf` command-line front end.
//!
//! ```
//! use qrf_core::perspective::{assign_perspective, PerspectiveLabel};
//! use qrf_core::qstate::{PureState, NORM_TOL};
//!
//! // ½(|000⟩ + |001⟩ + |010⟩ + |111⟩) seen from qubit B
//! let psi = PureState::from_real(&[0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5], NORM_TOL)?;
//! let seen_by_b = assign_perspective(&psi, PerspectiveLabel::new(1))?;
//! let expected = PureState::from_real(&[0.5f64.sqrt(), 0.5, 0.0, 0.5], NORM_TOL)?;
//! assert!(seen_by_b.max_abs_diff(&expected) < 1e-12);
//! # Ok::<(), qrf_core::QrfError>(())
//! ```

pub mod cli;
pub mod error;
pub mod measures;
pub mod perspective;
pub mod qstate;
pub mod rindler;
pub mod transference;

pub use error::{ErrorKind, QrfError, Result};
pub use measures::{Bipartition, MeasurePair};
pub use perspective::{PerspectiveLabel, QrfOperator};
pub use qstate::{DensityMatrix, PureState, SubsystemIndex};
