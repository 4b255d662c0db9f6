//! Fermionic entanglement degradation seen from three perspectives.
//!
//! Alice (`A`) holds an inertial mode, Rob (`R`) a uniformly accelerated one
//! and anti-Rob (`R̄`) the complementary mode in the opposite wedge. With the
//! acceleration parameter `r` defined by `tan r = exp(-πω/a)`, the shared
//! state is
//!
//! ```text
//! |φ_r⟩ = (cos r |000⟩ + sin r |011⟩ + |110⟩) / √2        (order A, R, R̄)
//! ```
//!
//! This module provides the state family, the closed-form entanglement
//! curves for both measure pairs, the mutual-information curves, and sweeps
//! that check every closed form against direct density-matrix evaluation.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QrfError, Result};
use crate::measures::{binary_entropy, entanglement, mutual_information, Bipartition, MeasurePair};
use crate::perspective::{assign_perspective, PerspectiveLabel};
use crate::qstate::{PureState, NORM_TOL};
use crate::transference::perspectival_terms;

/// Upper end of the acceleration-parameter domain (infinite acceleration).
pub const R_MAX: f64 = FRAC_PI_4;

/// The squeezing angle `r ∈ [0, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AccelerationParameter(f64);

impl AccelerationParameter {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=R_MAX).contains(&r) {
            return Err(QrfError::GridOutOfDomain(format!("r = {r} outside [0, π/4]")));
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `r = arctan(exp(-πω/a))` for proper acceleration `a` and mode frequency `ω`.
pub fn r_from_acceleration(a: f64, omega: f64) -> Result<AccelerationParameter> {
    for (name, value) in [("a", a), ("omega", omega)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(QrfError::NonPositiveInput { name, value });
        }
    }
    AccelerationParameter::new((-PI * omega / a).exp().atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observer {
    Alice,
    Rob,
    AntiRob,
}

impl Observer {
    pub const ALL: [Observer; 3] = [Observer::Alice, Observer::Rob, Observer::AntiRob];

    pub fn index(self) -> usize {
        match self {
            Observer::Alice => 0,
            Observer::Rob => 1,
            Observer::AntiRob => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Observer::Alice => "A",
            Observer::Rob => "R",
            Observer::AntiRob => "Rbar",
        }
    }
}

impl From<Observer> for PerspectiveLabel {
    fn from(o: Observer) -> Self {
        PerspectiveLabel::new(o.index())
    }
}

fn amplitudes(values: &[f64]) -> PureState {
    PureState::from_real(values, NORM_TOL).expect("closed-form state is normalized")
}

/// `|φ_r⟩` over `(A, R, R̄)`.
pub fn global_state(r: AccelerationParameter) -> PureState {
    let (s, c) = r.0.sin_cos();
    let h = FRAC_1_SQRT_2;
    amplitudes(&[h * c, 0.0, 0.0, h * s, 0.0, 0.0, h, 0.0])
}

/// Two-qubit state seen by `obs`, written out in closed form.
///
/// * Alice, over `(R, R̄)`: `(cos r|00⟩ + |01⟩ + sin r|11⟩)/√2`
/// * Rob, over `(A, R̄)`: `(cos r|00⟩ + |01⟩ + sin r|10⟩)/√2`
/// * anti-Rob, over `(A, R)`: `(cos r|00⟩ + sin r|10⟩ + |11⟩)/√2`
pub fn perspectival_state(r: AccelerationParameter, obs: Observer) -> PureState {
    let (s, c) = r.0.sin_cos();
    let h = FRAC_1_SQRT_2;
    match obs {
        Observer::Alice => amplitudes(&[h * c, h, 0.0, h * s]),
        Observer::Rob => amplitudes(&[h * c, h, h * s, 0.0]),
        Observer::AntiRob => amplitudes(&[h * c, 0.0, h * s, h]),
    }
}

/// The six entanglement quantities characterizing `|φ_r⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// `E⁽ᴬ⁾(R, R̄)`
    PerspAlice,
    /// `E⁽ᴿ⁾(A, R̄)`
    PerspRob,
    /// `E⁽ᴿ̄⁾(A, R)`
    PerspAntiRob,
    /// `E(R̄ | AR)`
    GlobalAntiRob,
    /// `E(R | AR̄)`
    GlobalRob,
    /// `E(A | RR̄)`
    GlobalAlice,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::PerspAlice,
        Quantity::PerspRob,
        Quantity::PerspAntiRob,
        Quantity::GlobalAntiRob,
        Quantity::GlobalRob,
        Quantity::GlobalAlice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::PerspAlice => "E_persp_A_R_Rbar",
            Quantity::PerspRob => "E_persp_R_A_Rbar",
            Quantity::PerspAntiRob => "E_persp_Rbar_A_R",
            Quantity::GlobalAntiRob => "E_Rbar_AR",
            Quantity::GlobalRob => "E_R_ARbar",
            Quantity::GlobalAlice => "E_A_RRbar",
        }
    }

    /// Direct evaluation from the state vectors.
    pub fn oracle(self, r: AccelerationParameter, m: MeasurePair) -> f64 {
        let persp = |obs: Observer| {
            let psi = perspectival_state(r, obs);
            entanglement(&psi, &Bipartition::isolate(0, 2).expect("two qubits"), m)
        };
        let global = |q: usize| entanglement(&global_state(r), &Bipartition::isolate(q, 3).expect("three qubits"), m);
        match self {
            Quantity::PerspAlice => persp(Observer::Alice),
            Quantity::PerspRob => persp(Observer::Rob),
            Quantity::PerspAntiRob => persp(Observer::AntiRob),
            Quantity::GlobalAntiRob => global(2),
            Quantity::GlobalRob => global(1),
            Quantity::GlobalAlice => global(0),
        }
        .expect("fixed bipartitions are valid")
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| QrfError::UnknownQuantity(s.to_string()))
    }
}

/// Closed-form value of `quantity` at `r`.
pub fn closed_form_entanglement(r: AccelerationParameter, quantity: Quantity, m: MeasurePair) -> f64 {
    let (s, c) = r.0.sin_cos();
    let c2 = c * c;
    let s2 = s * s;
    match m {
        MeasurePair::Entropy => match quantity {
            Quantity::PerspAlice => {
                let split = (7.0 + (4.0 * r.0).cos()).sqrt() / (2.0 * 2f64.sqrt());
                binary_entropy((1.0 - split) / 2.0)
            }
            Quantity::PerspRob => binary_entropy((1.0 - c) / 2.0),
            Quantity::PerspAntiRob => binary_entropy((1.0 - s) / 2.0),
            Quantity::GlobalAntiRob => binary_entropy((1.0 - c2) / 2.0),
            Quantity::GlobalRob => binary_entropy(c2 / 2.0),
            Quantity::GlobalAlice => 1.0,
        },
        MeasurePair::Linear => match quantity {
            Quantity::PerspAlice => (2.0 * r.0).sin().powi(2) / 8.0,
            Quantity::PerspRob => s2 / 2.0,
            Quantity::PerspAntiRob => c2 / 2.0,
            Quantity::GlobalAntiRob => s2 / 2.0 * (1.0 + c2),
            Quantity::GlobalRob => c2 * (1.0 - c2 / 2.0),
            Quantity::GlobalAlice => 0.5,
        },
    }
}

/// Global and perspectival mutual information, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualInformation {
    /// `I(R : R̄)`
    pub r_rbar: f64,
    /// `I(A : R̄)`
    pub a_rbar: f64,
    /// `I(A : R)`
    pub a_r: f64,
    /// `I⁽ᴬ⁾(R : R̄)`
    pub persp_alice: f64,
    /// `I⁽ᴿ⁾(A : R̄)`
    pub persp_rob: f64,
    /// `I⁽ᴿ̄⁾(A : R)`
    pub persp_antirob: f64,
}

/// Mutual information from the entanglement-entropy closed forms.
///
/// Global values combine the three global entropies; perspectival states are
/// pure, so their mutual information is twice the entanglement entropy.
pub fn mutual_information_curves(r: AccelerationParameter) -> MutualInformation {
    let e = |q| closed_form_entanglement(r, q, MeasurePair::Entropy);
    let (e_a, e_r, e_rbar) = (e(Quantity::GlobalAlice), e(Quantity::GlobalRob), e(Quantity::GlobalAntiRob));
    MutualInformation {
        r_rbar: e_rbar + e_r - e_a,
        a_rbar: e_a + e_rbar - e_r,
        a_r: e_r + e_a - e_rbar,
        persp_alice: 2.0 * e(Quantity::PerspAlice),
        persp_rob: 2.0 * e(Quantity::PerspRob),
        persp_antirob: 2.0 * e(Quantity::PerspAntiRob),
    }
}

/// Mutual information computed from reduced density matrices.
pub fn mutual_information_oracle(r: AccelerationParameter) -> MutualInformation {
    let rho = global_state(r).density_matrix();
    let pair = |keep: [usize; 2]| {
        let reduced = rho.partial_trace(&keep).expect("valid subsystems");
        mutual_information(&reduced, &Bipartition::isolate(0, 2).expect("two qubits")).expect("two qubits")
    };
    let persp = |obs: Observer| {
        let psi = assign_perspective(&global_state(r), obs.into()).expect("three qubits");
        mutual_information(&psi.density_matrix(), &Bipartition::isolate(0, 2).expect("two qubits"))
            .expect("two qubits")
    };
    MutualInformation {
        r_rbar: pair([1, 2]),
        a_rbar: pair([0, 2]),
        a_r: pair([0, 1]),
        persp_alice: persp(Observer::Alice),
        persp_rob: persp(Observer::Rob),
        persp_antirob: persp(Observer::AntiRob),
    }
}

/// Column names of a sweep table, in order.
pub const SWEEP_COLUMNS: [&str; 21] = [
    "measures",
    "r",
    "E_persp_A_R_Rbar",
    "E_persp_R_A_Rbar",
    "E_persp_Rbar_A_R",
    "C_A_of_R",
    "C_A_of_Rbar",
    "C_R_of_A",
    "C_R_of_Rbar",
    "C_Rbar_of_A",
    "C_Rbar_of_R",
    "E_Rbar_AR",
    "E_R_ARbar",
    "E_A_RRbar",
    "MI_R_Rbar",
    "MI_A_Rbar",
    "MI_A_R",
    "MI_persp_A_R_Rbar",
    "MI_persp_R_A_Rbar",
    "MI_persp_Rbar_A_R",
    "max_residual",
];

/// One grid point of a degradation sweep.
///
/// Entanglement and coherence follow the sweep's measure pair; mutual
/// information is always von Neumann based. `C_X_of_Y` is the coherence of
/// `Y` seen by `X`. Every value is the direct density-matrix result;
/// `max_residual` is the largest deviation from its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub measures: MeasurePair,
    pub r: f64,
    #[serde(rename = "E_persp_A_R_Rbar")]
    pub e_persp_alice: f64,
    #[serde(rename = "E_persp_R_A_Rbar")]
    pub e_persp_rob: f64,
    #[serde(rename = "E_persp_Rbar_A_R")]
    pub e_persp_antirob: f64,
    #[serde(rename = "C_A_of_R")]
    pub c_alice_of_rob: f64,
    #[serde(rename = "C_A_of_Rbar")]
    pub c_alice_of_antirob: f64,
    #[serde(rename = "C_R_of_A")]
    pub c_rob_of_alice: f64,
    #[serde(rename = "C_R_of_Rbar")]
    pub c_rob_of_antirob: f64,
    #[serde(rename = "C_Rbar_of_A")]
    pub c_antirob_of_alice: f64,
    #[serde(rename = "C_Rbar_of_R")]
    pub c_antirob_of_rob: f64,
    #[serde(rename = "E_Rbar_AR")]
    pub e_antirob_ar: f64,
    #[serde(rename = "E_R_ARbar")]
    pub e_rob_arbar: f64,
    #[serde(rename = "E_A_RRbar")]
    pub e_alice_rrbar: f64,
    #[serde(rename = "MI_R_Rbar")]
    pub mi_r_rbar: f64,
    #[serde(rename = "MI_A_Rbar")]
    pub mi_a_rbar: f64,
    #[serde(rename = "MI_A_R")]
    pub mi_a_r: f64,
    #[serde(rename = "MI_persp_A_R_Rbar")]
    pub mi_persp_alice: f64,
    #[serde(rename = "MI_persp_R_A_Rbar")]
    pub mi_persp_rob: f64,
    #[serde(rename = "MI_persp_Rbar_A_R")]
    pub mi_persp_antirob: f64,
    pub max_residual: f64,
}

impl SweepRecord {
    /// Numeric fields in [`SWEEP_COLUMNS`] order, skipping `measures`.
    pub fn values(&self) -> [f64; 20] {
        [
            self.r,
            self.e_persp_alice,
            self.e_persp_rob,
            self.e_persp_antirob,
            self.c_alice_of_rob,
            self.c_alice_of_antirob,
            self.c_rob_of_alice,
            self.c_rob_of_antirob,
            self.c_antirob_of_alice,
            self.c_antirob_of_rob,
            self.e_antirob_ar,
            self.e_rob_arbar,
            self.e_alice_rrbar,
            self.mi_r_rbar,
            self.mi_a_rbar,
            self.mi_a_r,
            self.mi_persp_alice,
            self.mi_persp_rob,
            self.mi_persp_antirob,
            self.max_residual,
        ]
    }
}

/// Evaluates every sweep quantity at a single `r`.
pub fn sweep_point(r: AccelerationParameter, m: MeasurePair) -> Result<SweepRecord> {
    let psi = global_state(r);
    let terms = |obs: Observer, sub: Observer| perspectival_terms(&psi, obs.index(), sub.index(), m);
    let (e_a, c_a_r) = terms(Observer::Alice, Observer::Rob)?;
    let (_, c_a_rbar) = terms(Observer::Alice, Observer::AntiRob)?;
    let (e_r, c_r_a) = terms(Observer::Rob, Observer::Alice)?;
    let (_, c_r_rbar) = terms(Observer::Rob, Observer::AntiRob)?;
    let (e_rbar, c_rbar_a) = terms(Observer::AntiRob, Observer::Alice)?;
    let (_, c_rbar_r) = terms(Observer::AntiRob, Observer::Rob)?;
    let global = |q: usize| entanglement(&psi, &Bipartition::isolate(q, 3).expect("three qubits"), m);
    let (g_a, g_r, g_rbar) = (global(0)?, global(1)?, global(2)?);
    let mi = mutual_information_oracle(r);
    let mi_closed = mutual_information_curves(r);

    let closed = |q| closed_form_entanglement(r, q, m);
    let (ce_a, ce_r, ce_rbar) = (closed(Quantity::PerspAlice), closed(Quantity::PerspRob), closed(Quantity::PerspAntiRob));
    let (cg_a, cg_r, cg_rbar) = (closed(Quantity::GlobalAlice), closed(Quantity::GlobalRob), closed(Quantity::GlobalAntiRob));

    // Coherences have no closed form of their own; transference fixes each one as
    // the gap between a global and a perspectival entanglement.
    let pairs = [
        (e_a, ce_a),
        (e_r, ce_r),
        (e_rbar, ce_rbar),
        (g_a, cg_a),
        (g_r, cg_r),
        (g_rbar, cg_rbar),
        (c_a_r, cg_rbar - ce_a),
        (c_a_rbar, cg_r - ce_a),
        (c_r_a, cg_rbar - ce_r),
        (c_r_rbar, cg_a - ce_r),
        (c_rbar_a, cg_r - ce_rbar),
        (c_rbar_r, cg_a - ce_rbar),
        (mi.r_rbar, mi_closed.r_rbar),
        (mi.a_rbar, mi_closed.a_rbar),
        (mi.a_r, mi_closed.a_r),
        (mi.persp_alice, mi_closed.persp_alice),
        (mi.persp_rob, mi_closed.persp_rob),
        (mi.persp_antirob, mi_closed.persp_antirob),
    ];
    let max_residual = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    Ok(SweepRecord {
        measures: m,
        r: r.value(),
        e_persp_alice: e_a,
        e_persp_rob: e_r,
        e_persp_antirob: e_rbar,
        c_alice_of_rob: c_a_r,
        c_alice_of_antirob: c_a_rbar,
        c_rob_of_alice: c_r_a,
        c_rob_of_antirob: c_r_rbar,
        c_antirob_of_alice: c_rbar_a,
        c_antirob_of_rob: c_rbar_r,
        e_antirob_ar: g_rbar,
        e_rob_arbar: g_r,
        e_alice_rrbar: g_a,
        mi_r_rbar: mi.r_rbar,
        mi_a_rbar: mi.a_rbar,
        mi_a_r: mi.a_r,
        mi_persp_alice: mi.persp_alice,
        mi_persp_rob: mi.persp_rob,
        mi_persp_antirob: mi.persp_antirob,
        max_residual,
    })
}

/// Checks that `grid` is nonempty, strictly ascending and inside `[0, π/4]`.
pub fn validate_grid(grid: &[f64]) -> Result<Vec<AccelerationParameter>> {
    if grid.is_empty() {
        return Err(QrfError::GridOutOfDomain("grid is empty".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(QrfError::GridOutOfDomain(format!("grid not ascending at {} -> {}", w[0], w[1])));
    }
    grid.iter().map(|&r| AccelerationParameter::new(r)).collect()
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    match count {
        0 => Err(QrfError::GridOutOfDomain("grid needs at least one point".into())),
        1 if start != stop => Err(QrfError::GridOutOfDomain(format!(
            "a one-point grid needs start == stop, got {start}:{stop}"
        ))),
        1 => Ok(vec![start]),
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            let mut grid: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
            grid[count - 1] = stop;
            Ok(grid)
        }
    }
}

/// Sweeps the grid, evaluating points in parallel; output follows grid order.
pub fn sweep(grid: &[f64], m: MeasurePair) -> Result<Vec<SweepRecord>> {
    validate_grid(grid)?.into_par_iter().map(|r| sweep_point(r, m)).collect()
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped.
pub fn format_sig12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes records as CSV with a header row and LF line endings.
pub fn write_sweep_csv<W: std::io::Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for rec in records {
        let mut row = vec![rec.measures.as_str().to_string()];
        row.extend(rec.values().iter().map(|&v| format_sig12(v)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
