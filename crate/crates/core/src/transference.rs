//! Entanglement transference on three-qubit states.
//!
//! For a constraint with roles `(α, β, γ)` the identity under test is
//!
//! ```text
//! E⁽ᵅ⁾(β, γ) + C⁽ᵅ⁾(β) = E(γ | αβ)
//! ```
//!
//! where the left side is evaluated on the two-qubit state seen by `α` and
//! the right side on the global state. The three constraints use the cyclic
//! role assignments `(A, B, C)`, `(B, C, A)` and `(C, A, B)`.
//!
//! Parity states (support on an even or odd number of 1s) satisfy all three
//! for both measure pairs. [`xyl_closed_form`] evaluates the algebraic `X`,
//! `Y`, `L` expressions from which all three quantities follow.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{QrfError, Result};
use crate::measures::{binary_entropy, coherence, entanglement, Bipartition, MeasurePair};
use crate::perspective::{assign_perspective, PerspectiveLabel};
use crate::qstate::{PureState, SubsystemIndex};

/// Default residual tolerance for declaring a constraint satisfied.
pub const SATISFACTION_TOL: f64 = 1e-9;

/// Support moduli at or below this are treated as absent when classifying parity.
pub const SUPPORT_TOL: f64 = 1e-12;

const EVEN_SUPPORT: [usize; 4] = [0b000, 0b011, 0b101, 0b110];
const ODD_SUPPORT: [usize; 4] = [0b001, 0b010, 0b100, 0b111];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
}

impl ConstraintId {
    pub const ALL: [ConstraintId; 3] = [ConstraintId::C1, ConstraintId::C2, ConstraintId::C3];

    /// `(perspective α, coherence subsystem β, standalone γ)`.
    pub fn roles(self) -> (SubsystemIndex, SubsystemIndex, SubsystemIndex) {
        match self {
            ConstraintId::C1 => (0, 1, 2),
            ConstraintId::C2 => (1, 2, 0),
            ConstraintId::C3 => (2, 0, 1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintId::C1 => "C1",
            ConstraintId::C2 => "C2",
            ConstraintId::C3 => "C3",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ConstraintId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityClass {
    Even,
    Odd,
    Neither,
}

impl ParityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ParityClass::Even => "even",
            ParityClass::Odd => "odd",
            ParityClass::Neither => "neither",
        }
    }

    /// Basis indices a state of this class may occupy.
    pub fn support(self) -> &'static [usize] {
        match self {
            ParityClass::Even => &EVEN_SUPPORT,
            ParityClass::Odd => &ODD_SUPPORT,
            ParityClass::Neither => &[0, 1, 2, 3, 4, 5, 6, 7],
        }
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParityClass {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(ParityClass::Even),
            "odd" => Ok(ParityClass::Odd),
            "neither" | "any" => Ok(ParityClass::Neither),
            other => Err(QrfError::Config(format!("unknown parity class `{other}`"))),
        }
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub constraint: ConstraintId,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub satisfied: bool,
}

impl ConstraintReport {
    pub fn new(constraint: ConstraintId, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = (lhs - rhs).abs();
        Self { constraint, lhs, rhs, residual, satisfied: residual <= tol }
    }
}

/// Values of the `X`, `Y`, `L` expressions for one constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XylTriple {
    pub x: f64,
    pub y: f64,
    pub l: f64,
}

impl XylTriple {
    /// `E(γ | αβ)` rebuilt from `X`.
    pub fn global_entanglement(&self, m: MeasurePair) -> f64 {
        match m {
            MeasurePair::Entropy => binary_entropy((1.0 - self.x) / 2.0),
            MeasurePair::Linear => 1.0 - self.x,
        }
    }

    /// `E⁽ᵅ⁾(β, γ)` rebuilt from `Y` (and `L` for the linear pair).
    pub fn perspectival_entanglement(&self, m: MeasurePair) -> f64 {
        match m {
            MeasurePair::Entropy => binary_entropy((1.0 - self.y) / 2.0),
            MeasurePair::Linear => 1.0 - self.l - 2.0 * self.y,
        }
    }

    /// `C⁽ᵅ⁾(β)` rebuilt from `L` and `Y`.
    pub fn perspectival_coherence(&self, m: MeasurePair) -> f64 {
        match m {
            MeasurePair::Entropy => binary_entropy(self.l) - self.perspectival_entanglement(m),
            MeasurePair::Linear => 2.0 * self.y,
        }
    }
}

fn require_three(psi: &PureState) -> Result<()> {
    if psi.n_qubits() != 3 {
        return Err(QrfError::WrongQubitCount { expected: 3, found: psi.n_qubits() });
    }
    Ok(())
}

/// Classifies a three-qubit state by the parity of its support.
pub fn parity_class(psi: &PureState) -> Result<ParityClass> {
    require_three(psi)?;
    let occupied = |idx: &usize| psi.amplitude(*idx).norm() > SUPPORT_TOL;
    let in_odd = ODD_SUPPORT.iter().any(occupied);
    let in_even = EVEN_SUPPORT.iter().any(occupied);
    Ok(match (in_even, in_odd) {
        (true, false) => ParityClass::Even,
        (false, true) => ParityClass::Odd,
        _ => ParityClass::Neither,
    })
}

/// Entanglement of the state seen by `observer` and the coherence of
/// `subsystem` within it. Both indices are global labels.
pub fn perspectival_terms(
    psi: &PureState,
    observer: SubsystemIndex,
    subsystem: SubsystemIndex,
    m: MeasurePair,
) -> Result<(f64, f64)> {
    if observer == subsystem {
        return Err(QrfError::InvalidBipartition(format!(
            "observer {observer} cannot be its own coherence subsystem"
        )));
    }
    let seen = assign_perspective(psi, PerspectiveLabel::new(observer))?;
    let slot = subsystem - usize::from(subsystem > observer);
    let e = entanglement(&seen, &Bipartition::isolate(slot, seen.n_qubits())?, m)?;
    let c = coherence(&seen.density_matrix().partial_trace(&[slot])?, m);
    Ok((e, c))
}

/// `(E⁽ᵅ⁾(β, γ) + C⁽ᵅ⁾(β), E(γ | αβ))` for constraint `c`.
pub fn transference_sides(psi: &PureState, c: ConstraintId, m: MeasurePair) -> Result<(f64, f64)> {
    require_three(psi)?;
    let (alpha, beta, gamma) = c.roles();
    let (e, coh) = perspectival_terms(psi, alpha, beta, m)?;
    let rhs = entanglement(psi, &Bipartition::isolate(gamma, 3)?, m)?;
    Ok((e + coh, rhs))
}

/// Checks all three transference constraints.
pub fn check_transference(psi: &PureState, m: MeasurePair, tol: f64) -> Result<[ConstraintReport; 3]> {
    let report = |c| -> Result<ConstraintReport> {
        let (lhs, rhs) = transference_sides(psi, c, m)?;
        Ok(ConstraintReport::new(c, lhs, rhs, tol))
    };
    Ok([report(ConstraintId::C1)?, report(ConstraintId::C2)?, report(ConstraintId::C3)?])
}

/// Checks the perspective-swap identities `E⁽ᵅ⁾ + C⁽ᵅ⁾(β) = E⁽ᵝ⁾ + C⁽ᵝ⁾(α)`
/// for `(α, β) = (A, B), (B, C), (C, A)`, reported under `C1`, `C2`, `C3`.
pub fn check_corollary(psi: &PureState, m: MeasurePair, tol: f64) -> Result<[ConstraintReport; 3]> {
    require_three(psi)?;
    let report = |c: ConstraintId| -> Result<ConstraintReport> {
        let (alpha, beta, _) = c.roles();
        let (e1, c1) = perspectival_terms(psi, alpha, beta, m)?;
        let (e2, c2) = perspectival_terms(psi, beta, alpha, m)?;
        Ok(ConstraintReport::new(c, e1 + c1, e2 + c2, tol))
    };
    Ok([report(ConstraintId::C1)?, report(ConstraintId::C2)?, report(ConstraintId::C3)?])
}

/// Evaluates the closed-form `X`, `Y`, `L` for constraint `c` directly from
/// the eight amplitudes `a … h` of `|000⟩ … |111⟩`.
pub fn xyl_closed_form(psi: &PureState, c: ConstraintId, m: MeasurePair) -> Result<XylTriple> {
    require_three(psi)?;
    let z = psi.amplitudes();
    let (a, b, cc, d, e, f, g, h) = (z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7]);
    let [a2, b2, c2, d2, e2, f2, g2, h2] = [a, b, cc, d, e, f, g, h].map(|v| v.norm_sqr());

    // Squared moduli of the merged pairs seen from any perspective.
    let pa = a2 + h2;
    let pb = b2 + g2;
    let pc = c2 + f2;
    let pd = d2 + e2;
    let pi_p = (pa * pb * pc * pd).sqrt();
    let root = |v: f64| v.max(0.0).sqrt();

    let triple = match (m, c) {
        (MeasurePair::Entropy, ConstraintId::C1) => XylTriple {
            x: root(
                1.0 - 4.0 * (a2 + c2 + e2 + g2) * (b2 + d2 + f2 + h2)
                    + 4.0 * (a * b.conj() + cc * d.conj() + e * f.conj() + g * h.conj()).norm_sqr(),
            ),
            y: root(1.0 - 4.0 * (pa * pd + pb * pc) + 8.0 * pi_p),
            l: a2 + b2 + g2 + h2,
        },
        (MeasurePair::Entropy, ConstraintId::C2) => XylTriple {
            x: root(
                1.0 - 4.0 * (a2 + b2 + c2 + d2) * (e2 + f2 + g2 + h2)
                    + 4.0 * (a * e.conj() + b * f.conj() + cc * g.conj() + d * h.conj()).norm_sqr(),
            ),
            y: root(1.0 - 4.0 * (pa * pc + pb * pd) + 8.0 * pi_p),
            l: a2 + d2 + e2 + h2,
        },
        (MeasurePair::Entropy, ConstraintId::C3) => XylTriple {
            x: root(
                1.0 - 4.0 * (a2 + b2 + e2 + f2) * (c2 + d2 + g2 + h2)
                    + 4.0 * (a * cc.conj() + b * d.conj() + e * g.conj() + f * h.conj()).norm_sqr(),
            ),
            y: root(1.0 - 4.0 * (pa * pb + pc * pd) + 8.0 * pi_p),
            l: a2 + c2 + f2 + h2,
        },
        (MeasurePair::Linear, ConstraintId::C1) => XylTriple {
            x: (a2 + c2 + e2 + g2).powi(2)
                + 2.0 * (a * b.conj() + cc * d.conj() + e * f.conj() + g * h.conj()).norm_sqr()
                + (b2 + d2 + f2 + h2).powi(2),
            y: ((pa * pc).sqrt() + (pb * pd).sqrt()).powi(2),
            l: (a2 + b2 + g2 + h2).powi(2) + (c2 + d2 + e2 + f2).powi(2),
        },
        (MeasurePair::Linear, ConstraintId::C2) => XylTriple {
            x: (a2 + b2 + c2 + d2).powi(2)
                + 2.0 * (a * e.conj() + b * f.conj() + cc * g.conj() + d * h.conj()).norm_sqr()
                + (e2 + f2 + g2 + h2).powi(2),
            y: ((pa * pb).sqrt() + (pc * pd).sqrt()).powi(2),
            l: (a2 + d2 + e2 + h2).powi(2) + (b2 + c2 + f2 + g2).powi(2),
        },
        (MeasurePair::Linear, ConstraintId::C3) => XylTriple {
            x: (a2 + b2 + e2 + f2).powi(2)
                + 2.0 * (a * cc.conj() + b * d.conj() + e * g.conj() + f * h.conj()).norm_sqr()
                + (c2 + d2 + g2 + h2).powi(2),
            y: ((pa * pd).sqrt() + (pb * pc).sqrt()).powi(2),
            l: (a2 + c2 + f2 + h2).powi(2) + (b2 + d2 + e2 + g2).powi(2),
        },
    };
    Ok(triple)
}

/// Algebraic transference condition: `L = (1 ± X)/2` for the entropy pair,
/// `L = X` for the linear pair.
pub fn condition_check(psi: &PureState, c: ConstraintId, m: MeasurePair, tol: f64) -> Result<bool> {
    let XylTriple { x, l, .. } = xyl_closed_form(psi, c, m)?;
    Ok(match m {
        MeasurePair::Entropy => {
            (l - (1.0 - x) / 2.0).abs() <= tol || (l - (1.0 + x) / 2.0).abs() <= tol
        }
        MeasurePair::Linear => (l - x).abs() <= tol,
    })
}

/// Reproducible random states for batch checks.
pub mod sampling {
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    use super::ParityClass;
    use crate::error::Result;
    use crate::qstate::PureState;

    /// Independent generator for sample `index` of a batch seeded with `seed`,
    /// so batches can be evaluated in any order.
    pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        rng
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    /// Uniformly distributed state on the complex unit sphere of `n` qubits.
    pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<PureState> {
        PureState::normalized((0..1usize << n_qubits).map(|_| gaussian(rng)).collect())
    }

    /// Uniform three-qubit state supported on the basis strings of `class`;
    /// `Neither` draws from all eight.
    pub fn random_parity_state<R: Rng + ?Sized>(class: ParityClass, rng: &mut R) -> Result<PureState> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        for &idx in class.support() {
            amps[idx] = gaussian(rng);
        }
        PureState::normalized(amps)
    }
}

#[cfg(test)]
mod tests {
    use super::sampling::{random_parity_state, sample_rng};
    use super::*;
    use crate::qstate::NORM_TOL;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn real(amps: &[f64]) -> PureState {
        PureState::from_real(amps, NORM_TOL).unwrap()
    }

    fn separable() -> PureState {
        real(&[0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0])
    }

    fn ghz(g: f64) -> PureState {
        real(&[g, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, (1.0 - g * g).sqrt()])
    }

    fn phi(r: f64) -> PureState {
        let h = FRAC_1_SQRT_2;
        real(&[h * r.cos(), 0.0, 0.0, h * r.sin(), 0.0, 0.0, h, 0.0])
    }

    fn psi_q(q: f64) -> PureState {
        let s = (0.5 - q * q).sqrt();
        real(&[s, q, -q, s, 0.0, 0.0, 0.0, 0.0])
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_class(&phi(0.3)).unwrap(), ParityClass::Even);
        let w = real(&[0.0, 0.6, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0]);
        assert_eq!(parity_class(&w).unwrap(), ParityClass::Odd);
        let w = real(&[0.0, 0.5, 0.5, 0.0, FRAC_1_SQRT_2, 0.0, 0.0, 0.0]);
        assert_eq!(parity_class(&w).unwrap(), ParityClass::Odd);
        assert_eq!(parity_class(&separable()).unwrap(), ParityClass::Neither);
        assert_eq!(parity_class(&PureState::basis(3, 0).unwrap()).unwrap(), ParityClass::Even);
        assert!(matches!(
            parity_class(&PureState::basis(2, 0).unwrap()),
            Err(QrfError::WrongQubitCount { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn rindler_first_constraint_balances() {
        for r in [0.0, 0.2, 0.5, 0.7] {
            let psi = phi(r);
            let (lhs, rhs) = transference_sides(&psi, ConstraintId::C1, MeasurePair::Entropy).unwrap();
            let direct = entanglement(&psi, &Bipartition::isolate(2, 3).unwrap(), MeasurePair::Entropy).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
            assert!((rhs - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn separable_counterexample() {
        let (lhs, rhs) = transference_sides(&separable(), ConstraintId::C1, MeasurePair::Entropy).unwrap();
        assert!((lhs - 1.0).abs() < 1e-9);
        assert!(rhs.abs() < 1e-9);
        let corollary = check_corollary(&separable(), MeasurePair::Entropy, SATISFACTION_TOL).unwrap();
        assert!(corollary.iter().all(|r| r.satisfied));
    }

    #[test]
    fn ghz_violates_every_constraint() {
        for g in [0.3, 0.6, FRAC_1_SQRT_2, 0.9] {
            for report in check_transference(&ghz(g), MeasurePair::Entropy, SATISFACTION_TOL).unwrap() {
                assert!(!report.satisfied, "g = {g}: {report:?}");
                // perspectival side collapses to |00⟩; global side is H(g²)
                assert!(report.lhs.abs() < 1e-12);
                assert!((report.rhs - binary_entropy(g * g)).abs() < 1e-10);
            }
            for c in ConstraintId::ALL {
                assert!(!condition_check(&ghz(g), c, MeasurePair::Entropy, SATISFACTION_TOL).unwrap());
            }
        }
    }

    #[test]
    fn non_parity_partial_solution() {
        let reports = check_transference(&psi_q(0.3), MeasurePair::Entropy, SATISFACTION_TOL).unwrap();
        assert!(reports[0].satisfied);
        assert!(!reports[1].satisfied);
        assert!(reports[2].satisfied);
    }

    #[test]
    fn basis_states_are_trivial() {
        for idx in 0..8 {
            let psi = PureState::basis(3, idx).unwrap();
            for m in MeasurePair::ALL {
                for r in check_transference(&psi, m, SATISFACTION_TOL).unwrap() {
                    assert!(r.satisfied && r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-12);
                }
                assert!(check_corollary(&psi, m, SATISFACTION_TOL).unwrap().iter().all(|r| r.satisfied));
            }
        }
    }

    #[test]
    fn even_state_first_constraint_closed_form() {
        let (a, d, f, g) = (0.5, 0.1, 0.6, (1.0f64 - 0.25 - 0.01 - 0.36).sqrt());
        let psi = real(&[a, 0.0, 0.0, d, 0.0, f, g, 0.0]);
        let t = xyl_closed_form(&psi, ConstraintId::C1, MeasurePair::Entropy).unwrap();
        let l = a * a + g * g;
        assert!((t.l - l).abs() < 1e-15);
        assert!((t.x - (1.0 - 2.0 * l).abs()).abs() < 1e-12);
        assert!(condition_check(&psi, ConstraintId::C1, MeasurePair::Entropy, SATISFACTION_TOL).unwrap());
    }

    #[test]
    fn basis_zero_closed_form() {
        let psi = PureState::basis(3, 0).unwrap();
        for c in ConstraintId::ALL {
            let t = xyl_closed_form(&psi, c, MeasurePair::Entropy).unwrap();
            assert_eq!((t.x, t.y, t.l), (1.0, 1.0, 1.0));
        }
        assert!(condition_check(&PureState::basis(3, 1).unwrap(), ConstraintId::C2, MeasurePair::Entropy, 1e-9).unwrap());
    }

    #[test]
    fn closed_form_matches_density_matrices() {
        for i in 0..200 {
            let psi = random_parity_state(ParityClass::Neither, &mut sample_rng(7, i)).unwrap();
            for m in MeasurePair::ALL {
                for c in ConstraintId::ALL {
                    let (alpha, beta, gamma) = c.roles();
                    let t = xyl_closed_form(&psi, c, m).unwrap();
                    let (e, coh) = perspectival_terms(&psi, alpha, beta, m).unwrap();
                    let global = entanglement(&psi, &Bipartition::isolate(gamma, 3).unwrap(), m).unwrap();
                    assert!((t.global_entanglement(m) - global).abs() < 1e-9);
                    assert!((t.perspectival_entanglement(m) - e).abs() < 1e-9);
                    assert!((t.perspectival_coherence(m) - coh).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn complex_parity_states_satisfy_all_constraints() {
        for class in [ParityClass::Even, ParityClass::Odd] {
            for i in 0..100 {
                let psi = random_parity_state(class, &mut sample_rng(11, i)).unwrap();
                assert!(psi.amplitudes().iter().any(|z| z.im.abs() > 1e-3));
                for m in MeasurePair::ALL {
                    assert!(check_transference(&psi, m, SATISFACTION_TOL).unwrap().iter().all(|r| r.satisfied));
                }
            }
        }
    }

    #[test]
    fn reports_serialize_as_json_lines() {
        let report = ConstraintReport::new(ConstraintId::C2, 0.75, 0.5, SATISFACTION_TOL);
        let text = serde_json::to_string(&report).unwrap();
        assert_eq!(text, r#"{"constraint":"C2","lhs":0.75,"rhs":0.5,"residual":0.25,"satisfied":false}"#);
    }

    #[test]
    fn wrong_qubit_count_everywhere() {
        let psi = PureState::basis(2, 0).unwrap();
        let m = MeasurePair::Entropy;
        assert!(transference_sides(&psi, ConstraintId::C1, m).is_err());
        assert!(check_transference(&psi, m, 1e-9).is_err());
        assert!(check_corollary(&psi, m, 1e-9).is_err());
        assert!(xyl_closed_form(&psi, ConstraintId::C1, m).is_err());
        assert!(condition_check(&psi, ConstraintId::C1, m, 1e-9).is_err());
    }

    #[test]
    fn phases_do_not_matter_for_parity_states() {
        let amps = vec![
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(0.5, 1.1),
            Complex64::from_polar(0.5, -2.0),
            Complex64::new(0.0, 0.0),
        ];
        let psi = PureState::from_amplitudes(amps, NORM_TOL).unwrap();
        for m in MeasurePair::ALL {
            assert!(check_transference(&psi, m, SATISFACTION_TOL).unwrap().iter().all(|r| r.satisfied));
        }
    }
}
