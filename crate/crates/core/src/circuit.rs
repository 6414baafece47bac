//! Elementary-gate circuit representation and the synthesis of the
//! coupled-register pipeline.
//!
//! Qubit `q_i` in 1-based labelling maps to index `i - 1`. Within one state
//! register of `q` qubits, qubit `q_1` (index 0) holds the dyadic bit `k_1`,
//! the most significant bit of the basis index, so basis state `|k>` sits at
//! amplitude index `k`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::walsh::{self, EvolutionParams, ScaledSpectrum};
use crate::{Error, Result};

/// Rotations smaller than this are dropped in [`SynthesisMode::Optimized`].
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// An elementary gate over indexed qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Hadamard { target: usize },
    RotationZ { target: usize, angle: f64 },
    ControlledNot { control: usize, target: usize },
    ControlledSwap { control: usize, target_a: usize, target_b: usize },
    MeasureZ { target: usize },
}

impl Gate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::Hadamard { .. } => "Hadamard",
            Gate::RotationZ { .. } => "RotationZ",
            Gate::ControlledNot { .. } => "ControlledNot",
            Gate::ControlledSwap { .. } => "ControlledSwap",
            Gate::MeasureZ { .. } => "MeasureZ",
        }
    }

    /// Qubit indices in role order: controls first, then targets.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Hadamard { target } => vec![target],
            Gate::RotationZ { target, .. } => vec![target],
            Gate::ControlledNot { control, target } => vec![control, target],
            Gate::ControlledSwap {
                control,
                target_a,
                target_b,
            } => vec![control, target_a, target_b],
            Gate::MeasureZ { target } => vec![target],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::RotationZ { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::MeasureZ { .. })
    }
}

/// Wire format: `{kind, qubits, angle}` with qubits in role order.
#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GateRecord {
            kind: self.kind_name().to_string(),
            qubits: self.qubits(),
            angle: self.angle(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = GateRecord::deserialize(deserializer)?;
        let q = &rec.qubits;
        let gate = match (rec.kind.as_str(), q.len()) {
            ("Hadamard", 1) => Gate::Hadamard { target: q[0] },
            ("RotationZ", 1) => Gate::RotationZ {
                target: q[0],
                angle: rec
                    .angle
                    .ok_or_else(|| D::Error::custom("RotationZ requires an angle"))?,
            },
            ("ControlledNot", 2) => Gate::ControlledNot {
                control: q[0],
                target: q[1],
            },
            ("ControlledSwap", 3) => Gate::ControlledSwap {
                control: q[0],
                target_a: q[1],
                target_b: q[2],
            },
            ("MeasureZ", 1) => Gate::MeasureZ { target: q[0] },
            (kind, n) => {
                return Err(D::Error::custom(format!(
                    "unknown gate {kind:?} with {n} qubits"
                )))
            }
        };
        Ok(gate)
    }
}

/// An ordered list of gates over `width` qubits. Measurements, when present,
/// must come last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        if qubits.iter().any(|&x| x >= self.width) {
            return Err(Error::GateOutOfBounds {
                gate: format!("{gate:?}"),
                width: self.width,
            });
        }
        let distinct: HashSet<usize> = qubits.iter().copied().collect();
        if distinct.len() != qubits.len() {
            return Err(Error::DuplicateQubit(format!("{gate:?}")));
        }
        if let Some(angle) = gate.angle() {
            if !angle.is_finite() {
                return Err(Error::InvalidTime(angle));
            }
        }
        if !gate.is_measurement() && self.gates.iter().any(Gate::is_measurement) {
            return Err(Error::MeasurementNotTerminal);
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for gate in gates {
            self.push(gate)?;
        }
        Ok(())
    }

    /// The unitary prefix: everything up to the trailing measurements.
    pub fn without_measurements(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self
                .gates
                .iter()
                .filter(|g| !g.is_measurement())
                .cloned()
                .collect(),
        }
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.gates.iter().filter(|g| g.kind_name() == kind).count()
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            width: usize,
            gates: Vec<Gate>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut circuit = Circuit::new(raw.width);
        for gate in raw.gates {
            circuit.push(gate).map_err(D::Error::custom)?;
        }
        Ok(circuit)
    }
}

/// Whether synthesis keeps or prunes numerically-zero rotations.
///
/// Faithful mode emits every spectrum entry so gate audits stay exact at any
/// `t`; optimized mode drops rotations below [`PRUNE_THRESHOLD`] radians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthesisMode {
    Faithful,
    Optimized,
}

/// Pipeline flavour: bare evolved register, or two evolved copies plus the
/// ancilla-controlled swap stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineMode {
    StateOnly,
    SwapTest,
}

/// One Hadamard per register qubit.
pub fn prepare_uniform(q: usize, register: usize) -> Vec<Gate> {
    (register..register + q)
        .map(|target| Gate::Hadamard { target })
        .collect()
}

/// CNOT-staircase synthesis of `prod_j exp(i a_j(t) w_j)` on the register at
/// `register..register + q`.
///
/// For each entry `j` with set-bit positions `m_1 < ... < m_h` (1-based,
/// `m_1` the LSB), qubits `q_{m_i}` for `i < h` control CNOTs onto the MSB
/// qubit `q_{m_h}`, a single `Rz(theta_j)` with `theta_j = -2 a_j(t)` acts on
/// `q_{m_h}`, and the staircase is mirrored. Entries are emitted in ascending
/// `j`; the realised unitary is order-independent since Walsh operators
/// commute. Applied to basis state `|k>`, each fragment contributes the phase
/// `exp(i a_j(t) w_{jk})` exactly; the `j = 0` term is omitted, so the full
/// product matches `U(t)` up to one global phase.
pub fn synthesize_diagonal(
    scaled: &ScaledSpectrum,
    register: usize,
    mode: SynthesisMode,
) -> Vec<Gate> {
    let mut gates = Vec::new();
    for (j, a) in scaled.iter() {
        let theta = -2.0 * a;
        if mode == SynthesisMode::Optimized && theta.abs() < PRUNE_THRESHOLD {
            continue;
        }
        let positions: Vec<usize> = (1..=scaled.qubits())
            .filter(|m| j & (1 << (m - 1)) != 0)
            .collect();
        let target = register + positions.last().expect("j >= 1") - 1;
        let controls: Vec<usize> = positions[..positions.len() - 1]
            .iter()
            .map(|m| register + m - 1)
            .collect();
        for &control in &controls {
            gates.push(Gate::ControlledNot { control, target });
        }
        gates.push(Gate::RotationZ { target, angle: theta });
        for &control in controls.iter().rev() {
            gates.push(Gate::ControlledNot { control, target });
        }
    }
    gates
}

/// The purity-measurement stage: ancilla at index 0, copy 1 at `1..=q`,
/// copy 2 at `q+1..=2q`. A Hadamard on the ancilla, controlled swaps pairing
/// the first `q/2` qubits of each copy, another Hadamard, then a measurement.
pub fn build_swap_test(q: usize) -> Result<Circuit> {
    if q == 0 || q % 2 != 0 {
        return Err(Error::OddSwapTestWidth(q));
    }
    let mut circuit = Circuit::new(2 * q + 1);
    circuit.push(Gate::Hadamard { target: 0 })?;
    for i in 1..=q / 2 {
        circuit.push(Gate::ControlledSwap {
            control: 0,
            target_a: i,
            target_b: q + i,
        })?;
    }
    circuit.push(Gate::Hadamard { target: 0 })?;
    circuit.push(Gate::MeasureZ { target: 0 })?;
    Ok(circuit)
}

/// Assemble the full pipeline for dimension `d` at the given evolution
/// parameters.
///
/// `StateOnly` yields a width-`q` circuit (uniform preparation followed by
/// the synthesized evolution); `SwapTest` prepares and evolves two identical
/// copies on a width `2q + 1` circuit and appends the swap-test stage.
pub fn build_pipeline(
    d: usize,
    params: &EvolutionParams,
    pipeline: PipelineMode,
    synthesis: SynthesisMode,
) -> Result<Circuit> {
    if d != params.d {
        return Err(Error::SpectrumParamsMismatch {
            spectrum_q: 2 * d.trailing_zeros() as usize,
            d: params.d,
        });
    }
    let scaled = walsh::scale_angles(&walsh::closed_form_spectrum(d)?, params)?;
    let q = params.qubits();
    match pipeline {
        PipelineMode::StateOnly => {
            let mut circuit = Circuit::new(q);
            circuit.extend(prepare_uniform(q, 0))?;
            circuit.extend(synthesize_diagonal(&scaled, 0, synthesis))?;
            Ok(circuit)
        }
        PipelineMode::SwapTest => {
            let mut circuit = Circuit::new(2 * q + 1);
            circuit.extend(prepare_uniform(q, 1))?;
            circuit.extend(prepare_uniform(q, q + 1))?;
            circuit.extend(synthesize_diagonal(&scaled, 1, synthesis))?;
            circuit.extend(synthesize_diagonal(&scaled, q + 1, synthesis))?;
            let stage = build_swap_test(q)?;
            circuit.extend(stage.gates().iter().cloned())?;
            Ok(circuit)
        }
    }
}

/// Per-stage gate tallies of a pipeline circuit checked against the predicted
/// costs `G1(q) = q`, `G2(q) = 3 q^2 / 4 + q` and `G3(q) = 3 q / 2 + 2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateCountReport {
    pub d: usize,
    pub q: usize,
    /// 1 for a state-only circuit, 2 when both copies are present.
    pub copies: usize,
    pub hadamard: usize,
    pub rotation_z: usize,
    pub controlled_not: usize,
    pub controlled_swap: usize,
    pub measure: usize,
    /// Observed stage totals: preparation Hadamards, evolution gates, and the
    /// swap-test stage under the CSWAP-as-3-elementary-gates convention
    /// (measurement excluded). `test_stage` is `None` for state-only circuits.
    pub preparation: usize,
    pub evolution: usize,
    pub test_stage: Option<usize>,
    pub predicted_g1: usize,
    pub predicted_g2: usize,
    pub predicted_g3: usize,
    pub g1_matches: bool,
    pub g2_matches: bool,
    pub g3_matches: Option<bool>,
    /// Set when the evolution stage came in below `copies * G2(q)`, which is
    /// what optimized-mode pruning looks like.
    pub pruned: bool,
}

impl GateCountReport {
    pub fn all_match(&self) -> bool {
        self.g1_matches && self.g2_matches && self.g3_matches.unwrap_or(true)
    }
}

/// Tally a pipeline circuit produced by [`build_pipeline`] and compare each
/// stage against the predicted gate counts.
///
/// A controlled swap counts as 3 elementary gates: that convention is the one
/// under which `q/2` controlled swaps plus the two ancilla Hadamards add up
/// to `G3(q) = 3 q / 2 + 2`.
pub fn audit_gates(circuit: &Circuit, d: usize) -> Result<GateCountReport> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::DimensionNotPowerOfTwo(d));
    }
    let q = 2 * d.trailing_zeros() as usize;
    let copies = if circuit.width() == 2 * q + 1 {
        2
    } else if circuit.width() == q {
        1
    } else {
        return Err(Error::WidthMismatch {
            expected: q,
            found: circuit.width(),
        });
    };

    let preparation = circuit
        .gates()
        .iter()
        .take_while(|g| matches!(g, Gate::Hadamard { .. }))
        .count();
    let evolution = circuit
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::RotationZ { .. } | Gate::ControlledNot { .. }))
        .count();
    let ancilla_h = circuit
        .gates()
        .iter()
        .skip(preparation)
        .filter(|g| matches!(g, Gate::Hadamard { target: 0 }))
        .count();
    let cswaps = circuit.count_kind("ControlledSwap");
    let test_stage = (copies == 2).then_some(ancilla_h + 3 * cswaps);

    let predicted_g1 = q;
    let predicted_g2 = 3 * q * q / 4 + q;
    let predicted_g3 = 3 * q / 2 + 2;

    Ok(GateCountReport {
        d,
        q,
        copies,
        hadamard: circuit.count_kind("Hadamard"),
        rotation_z: circuit.count_kind("RotationZ"),
        controlled_not: circuit.count_kind("ControlledNot"),
        controlled_swap: cswaps,
        measure: circuit.count_kind("MeasureZ"),
        preparation,
        evolution,
        test_stage,
        predicted_g1,
        predicted_g2,
        predicted_g3,
        g1_matches: preparation == copies * predicted_g1,
        g2_matches: evolution == copies * predicted_g2,
        g3_matches: test_stage.map(|g3| g3 == predicted_g3),
        pruned: evolution < copies * predicted_g2,
    })
}
