//! Dense statevector simulation, exact reduced purity, SWAP-test ancilla
//! statistics and reproducible shot sampling.
//!
//! Qubit index `i` of a width-`n` circuit addresses bit `n - 1 - i` of the
//! amplitude index, so qubit 0 holds the most significant bit and basis state
//! `|k>` of a state register sits at amplitude index `k`.

use num_complex::Complex64;
use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::{Error, Result};

/// How a purity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PurityMethod {
    ExactTrace,
    SwapExact,
    SwapSampled,
}

/// A reduced-purity value with its estimation metadata.
///
/// For the swap methods `value = 2 p0 - 1` holds exactly, with `p0` the
/// (exact or empirical) ancilla ground-state probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityEstimate {
    pub value: f64,
    pub method: PurityMethod,
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
}

/// `2^width` complex amplitudes, exclusively owned during mutation.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero_state(width: usize) -> Self {
        assert!(width >= 1 && width < 30, "unsupported width {width}");
        let mut amps = vec![Complex64::ZERO; 1 << width];
        amps[0] = Complex64::ONE;
        Self { width, amps }
    }

    /// A specific computational basis state `|k>`.
    pub fn basis_state(width: usize, k: usize) -> Self {
        let mut state = Self::zero_state(width);
        state.amps[0] = Complex64::ZERO;
        state.amps[k] = Complex64::ONE;
        state
    }

    pub fn from_amplitudes(width: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << width {
            return Err(Error::WidthMismatch {
                expected: 1 << width,
                found: amps.len(),
            });
        }
        Ok(Self { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_norm_sqr(&self.amps)
    }

    fn bit_mask(&self, qubit: usize) -> usize {
        1usize << (self.width - 1 - qubit)
    }

    /// Apply a single unitary gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.qubits().iter().any(|&x| x >= self.width) {
            return Err(Error::GateOutOfBounds {
                gate: format!("{gate:?}"),
                width: self.width,
            });
        }
        match *gate {
            Gate::Hadamard { target } => {
                let mask = self.bit_mask(target);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for base in step_pairs(self.amps.len(), mask) {
                    let (a0, a1) = (self.amps[base], self.amps[base | mask]);
                    self.amps[base] = s * (a0 + a1);
                    self.amps[base | mask] = s * (a0 - a1);
                }
            }
            Gate::RotationZ { target, angle } => {
                let mask = self.bit_mask(target);
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = Complex64::from_polar(1.0, angle / 2.0);
                for base in step_pairs(self.amps.len(), mask) {
                    self.amps[base] *= lo;
                    self.amps[base | mask] *= hi;
                }
            }
            Gate::ControlledNot { control, target } => {
                let c = self.bit_mask(control);
                let t = self.bit_mask(target);
                for base in step_pairs(self.amps.len(), t) {
                    if base & c != 0 {
                        self.amps.swap(base, base | t);
                    }
                }
            }
            Gate::ControlledSwap {
                control,
                target_a,
                target_b,
            } => {
                let c = self.bit_mask(control);
                let a = self.bit_mask(target_a);
                let b = self.bit_mask(target_b);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & a != 0 && i & b == 0 {
                        self.amps.swap(i, i ^ a ^ b);
                    }
                }
            }
            Gate::MeasureZ { .. } => return Err(Error::MeasurementInUnitary),
        }
        Ok(())
    }

    /// Apply all gates of `circuit` in order. The circuit must be purely
    /// unitary; use [`Circuit::without_measurements`] on measured pipelines.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: circuit.width(),
                found: self.width,
            });
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }
}

/// Indices with the `mask` bit clear, i.e. the lower member of each
/// amplitude pair split by that qubit.
fn step_pairs(len: usize, mask: usize) -> impl Iterator<Item = usize> {
    (0..len).step_by(2 * mask).flat_map(move |block| block..block + mask)
}

fn pairwise_norm_sqr(amps: &[Complex64]) -> f64 {
    if amps.len() <= 64 {
        return amps.iter().map(|a| a.norm_sqr()).sum();
    }
    let mid = amps.len() / 2;
    pairwise_norm_sqr(&amps[..mid]) + pairwise_norm_sqr(&amps[mid..])
}

/// Build the zero state for `circuit` and run it.
pub fn run_circuit(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::zero_state(circuit.width());
    state.apply_circuit(circuit)?;
    Ok(state)
}

/// `Tr(rho_A^2)` of the first-register subsystem by partial trace, together
/// with the imaginary residue of the complex trace accumulation.
///
/// The amplitudes are reshaped into a `2^cut x 2^(width-cut)` matrix `M`
/// (row = subsystem-A index), `rho_A = M M^dagger`, and the purity is
/// `Tr(rho_A^2)`; the imaginary parts cancel up to rounding.
pub fn reduced_purity_parts(state: &StateVector, cut: usize) -> Result<(f64, f64)> {
    if cut == 0 || 2 * cut != state.width {
        return Err(Error::InvalidCut {
            cut,
            width: state.width,
        });
    }
    let rows = 1usize << cut;
    let cols = state.amps.len() / rows;
    let m = &state.amps;
    // rho[r][c] = sum_k M[r][k] conj(M[c][k])
    let mut rho = vec![Complex64::ZERO; rows * rows];
    for r in 0..rows {
        for c in 0..rows {
            let mut acc = Complex64::ZERO;
            for k in 0..cols {
                acc += m[r * cols + k] * m[c * cols + k].conj();
            }
            rho[r * rows + c] = acc;
        }
    }
    let mut trace = Complex64::ZERO;
    for r in 0..rows {
        for c in 0..rows {
            trace += rho[r * rows + c] * rho[c * rows + r];
        }
    }
    Ok((trace.re, trace.im))
}

/// Exact reduced purity of the first `cut` qubits.
pub fn reduced_purity_exact(state: &StateVector, cut: usize) -> Result<PurityEstimate> {
    let (re, _im) = reduced_purity_parts(state, cut)?;
    Ok(PurityEstimate {
        value: re,
        method: PurityMethod::ExactTrace,
        shots: 0,
        p0: None,
    })
}

/// Probability of measuring the ancilla (qubit 0) in `|0>` after the
/// swap-test circuit, i.e. the total weight of the first half of the
/// amplitude array. The state width must be odd (`2q + 1`).
pub fn swap_test_p0(state: &StateVector) -> f64 {
    assert!(
        state.width % 2 == 1 && state.width >= 3,
        "swap test states have width 2q + 1"
    );
    pairwise_norm_sqr(&state.amps[..state.amps.len() / 2])
}

/// Purity estimate `2 p0 - 1` from an exactly computed ancilla probability.
pub fn purity_from_p0(p0: f64) -> PurityEstimate {
    PurityEstimate {
        value: 2.0 * p0 - 1.0,
        method: PurityMethod::SwapExact,
        shots: 0,
        p0: Some(p0),
    }
}

/// Mixing finaliser of splitmix64.
fn splitmix_mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-point seed: `hash(base_seed, point_index)`. Sweeps seed
/// each time point independently with this, so parallel execution reproduces
/// bitwise regardless of scheduling.
pub fn derive_seed(base_seed: u64, point_index: u64) -> u64 {
    splitmix_mix(base_seed ^ splitmix_mix(point_index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

/// Draw `shots` Bernoulli(`p0`) outcomes from a counter-based generator and
/// return the sampled purity `2 (successes / shots) - 1`. The stored `p0` is
/// the empirical success fraction.
pub fn sample_purity(p0: f64, shots: u64, seed: u64) -> Result<PurityEstimate> {
    // Exact arithmetic can land a hair outside [0, 1]; forgive only that.
    let p0 = if (-1e-12..=0.0).contains(&p0) {
        0.0
    } else if (1.0..=1.0 + 1e-12).contains(&p0) {
        1.0
    } else {
        p0
    };
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidProbability(p0));
    }
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Bernoulli::new(p0).expect("p0 validated");
    let successes = (0..shots).filter(|_| dist.sample(&mut rng)).count() as u64;
    let p0_hat = successes as f64 / shots as f64;
    Ok(PurityEstimate {
        value: 2.0 * p0_hat - 1.0,
        method: PurityMethod::SwapSampled,
        shots,
        p0: Some(p0_hat),
    })
}
