//! Synthesis correctness: the CNOT-staircase fragments realise exactly the
//! diagonal phases their Walsh angles prescribe.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qprimes_core::circuit::{build_pipeline, synthesize_diagonal, PipelineMode, SynthesisMode};
use qprimes_core::sim::{run_circuit, StateVector};
use qprimes_core::walsh::{
    closed_form_spectrum, scale_angles, walsh_function, EvolutionParams, ScaledSpectrum,
};

/// Apply the fragment for a single Walsh index to every basis state and read
/// off the realised diagonal.
fn realized_diagonal(scaled: &ScaledSpectrum, q: usize) -> Vec<Complex64> {
    let gates = synthesize_diagonal(scaled, 0, SynthesisMode::Faithful);
    (0..1usize << q)
        .map(|k| {
            let mut state = StateVector::basis_state(q, k);
            for gate in &gates {
                state.apply_gate(gate).unwrap();
            }
            for (idx, amp) in state.amplitudes().iter().enumerate() {
                if idx != k {
                    assert!(amp.norm() < 1e-12, "off-diagonal leakage at k={k}");
                }
            }
            state.amplitudes()[k]
        })
        .collect()
}

#[test]
fn staircase_identity_exhaustive_up_to_q6() {
    for q in 1..=6usize {
        for j in 1..1usize << q {
            let angle = 0.37 + 0.11 * j as f64;
            let scaled = ScaledSpectrum::from_angles(q, [(j, angle)]).unwrap();
            let diag = realized_diagonal(&scaled, q);
            for (k, amp) in diag.iter().enumerate() {
                let w = walsh_function(j, k, q).unwrap() as f64;
                let expect = Complex64::from_polar(1.0, angle * w);
                assert!(
                    (amp - expect).norm() < 1e-12,
                    "q={q} j={j} k={k}: got {amp}, want {expect}"
                );
            }
        }
    }
}

#[test]
fn synthesized_unitary_matches_the_evolution_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157);
    for d in [2usize, 4, 8] {
        let q = 2 * d.trailing_zeros() as usize;
        for _ in 0..8 {
            let omega = rng.random_range(0.05..0.5);
            let t = rng.random_range(0.0..2.0 * std::f64::consts::PI / omega);
            let params = EvolutionParams::new(omega, t, d).unwrap();
            let scaled = scale_angles(&closed_form_spectrum(d).unwrap(), &params).unwrap();
            let realized = realized_diagonal(&scaled, q);
            let expected: Vec<Complex64> = (1..=d)
                .flat_map(|na| {
                    (1..=d)
                        .map(move |nb| Complex64::from_polar(1.0, -omega * (na * nb) as f64 * t))
                })
                .collect();
            let global = realized[0] / expected[0];
            assert!((global.norm() - 1.0).abs() < 1e-12);
            for (k, (r, e)) in realized.iter().zip(&expected).enumerate() {
                assert!(
                    (r - global * e).norm() < 1e-10,
                    "d={d} omega={omega} t={t} k={k}"
                );
            }
        }
    }
}

#[test]
fn fragment_order_does_not_change_the_unitary() {
    let d = 4usize;
    let q = 4usize;
    let params = EvolutionParams::new(0.23, 7.9, d).unwrap();
    let scaled = scale_angles(&closed_form_spectrum(d).unwrap(), &params).unwrap();
    let entries: Vec<(usize, f64)> = scaled.iter().collect();

    let apply_order = |order: &[usize]| -> StateVector {
        let mut state = StateVector::zero_state(q);
        // A non-basis input state exercises every amplitude.
        for target in 0..q {
            state
                .apply_gate(&qprimes_core::circuit::Gate::Hadamard { target })
                .unwrap();
        }
        for &idx in order {
            let (j, a) = entries[idx];
            let single = ScaledSpectrum::from_angles(q, [(j, a)]).unwrap();
            for gate in synthesize_diagonal(&single, 0, SynthesisMode::Faithful) {
                state.apply_gate(&gate).unwrap();
            }
        }
        state
    };

    let ascending: Vec<usize> = (0..entries.len()).collect();
    let reference = apply_order(&ascending);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut shuffled = ascending.clone();
    for _ in 0..5 {
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let permuted = apply_order(&shuffled);
        for (a, b) in reference.amplitudes().iter().zip(permuted.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn norm_is_preserved_across_random_gate_streams() {
    use qprimes_core::circuit::Gate;
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for &width in &[2usize, 5, 12] {
        let mut state = StateVector::zero_state(width);
        // Scramble the start a little so the walk is not on a basis state.
        for target in 0..width {
            state.apply_gate(&Gate::Hadamard { target }).unwrap();
        }
        let gates_per_width = 10_000 / 3;
        for step in 0..gates_per_width {
            let gate = match rng.random_range(0..4) {
                0 => Gate::Hadamard {
                    target: rng.random_range(0..width),
                },
                1 => Gate::RotationZ {
                    target: rng.random_range(0..width),
                    angle: rng.random_range(-6.3..6.3),
                },
                2 => {
                    let control = rng.random_range(0..width);
                    let mut target = rng.random_range(0..width);
                    while target == control {
                        target = rng.random_range(0..width);
                    }
                    Gate::ControlledNot { control, target }
                }
                _ => {
                    if width < 3 {
                        continue;
                    }
                    let mut picks = [0usize; 3];
                    for i in 0..3 {
                        let mut x = rng.random_range(0..width);
                        while picks[..i].contains(&x) {
                            x = rng.random_range(0..width);
                        }
                        picks[i] = x;
                    }
                    Gate::ControlledSwap {
                        control: picks[0],
                        target_a: picks[1],
                        target_b: picks[2],
                    }
                }
            };
            state.apply_gate(&gate).unwrap();
            assert!(
                (state.norm_sqr() - 1.0).abs() < 1e-12,
                "width={width} step={step}"
            );
        }
    }
}

#[test]
fn state_only_pipeline_at_zero_time_is_the_uniform_state() {
    let params = EvolutionParams::new(0.1, 0.0, 2).unwrap();
    let circuit =
        build_pipeline(2, &params, PipelineMode::StateOnly, SynthesisMode::Optimized).unwrap();
    let state = run_circuit(&circuit).unwrap();
    for amp in state.amplitudes() {
        assert!((amp - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }
}
