//! The three purity routes (partial trace, swap-test ancilla statistics,
//! analytic series) agree, and the SWAP trace identity that underpins the
//! ancilla route holds on random operators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qprimes_core::circuit::{build_pipeline, PipelineMode, SynthesisMode};
use qprimes_core::sim::{
    reduced_purity_exact, reduced_purity_parts, run_circuit, swap_test_p0, StateVector,
};
use qprimes_core::spectral::{analytic_purity, InitialCoefficients};
use qprimes_core::walsh::EvolutionParams;

fn random_state(width: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << width)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(width, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

#[test]
fn exact_trace_swap_test_and_analytic_purity_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for d in [2usize, 4, 8] {
        let q = 2 * d.trailing_zeros() as usize;
        let coeffs = InitialCoefficients::uniform(d).unwrap();
        for _ in 0..10 {
            let omega = 0.1;
            let t = rng.random_range(0.0..2.0 * std::f64::consts::PI / omega);
            let params = EvolutionParams::new(omega, t, d).unwrap();

            let state_only =
                build_pipeline(d, &params, PipelineMode::StateOnly, SynthesisMode::Faithful)
                    .unwrap();
            let trace = reduced_purity_exact(&run_circuit(&state_only).unwrap(), q / 2)
                .unwrap()
                .value;

            let swap =
                build_pipeline(d, &params, PipelineMode::SwapTest, SynthesisMode::Faithful)
                    .unwrap();
            let p0 = swap_test_p0(&run_circuit(&swap.without_measurements()).unwrap());
            let via_swap = 2.0 * p0 - 1.0;

            let analytic = analytic_purity(&coeffs, omega, t);

            assert!((trace - via_swap).abs() < 1e-9, "d={d} t={t}");
            assert!((trace - analytic).abs() < 1e-9, "d={d} t={t}");
            assert!((via_swap - analytic).abs() < 1e-9, "d={d} t={t}");
        }
    }
}

#[test]
fn evolved_uniform_state_purity_matches_analytic_oracle() {
    let params = EvolutionParams::new(0.1, 5.0, 4).unwrap();
    let circuit =
        build_pipeline(4, &params, PipelineMode::StateOnly, SynthesisMode::Faithful).unwrap();
    let gamma = reduced_purity_exact(&run_circuit(&circuit).unwrap(), 2)
        .unwrap()
        .value;
    let analytic = analytic_purity(&InitialCoefficients::uniform(4).unwrap(), 0.1, 5.0);
    assert!((gamma - analytic).abs() < 1e-10);
}

#[test]
fn purity_stays_within_bounds_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for q in [2usize, 4, 6] {
        let floor = 1.0 / (1u64 << (q / 2)) as f64;
        for _ in 0..50 {
            let state = random_state(q, &mut rng);
            let gamma = reduced_purity_exact(&state, q / 2).unwrap().value;
            assert!(gamma >= floor - 1e-12, "q={q}: {gamma} below 1/2^(q/2)");
            assert!(gamma <= 1.0 + 1e-12, "q={q}: {gamma} above 1");
        }
    }
}

#[test]
fn trace_accumulation_is_real_up_to_rounding() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let state = random_state(6, &mut rng);
        let (_re, im) = reduced_purity_parts(&state, 3).unwrap();
        assert!(im.abs() < 1e-12);
    }
}

type Matrix = Vec<Vec<Complex64>>;

fn random_matrix(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    (0..d)
        .map(|_| {
            (0..d)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn trace(a: &Matrix) -> Complex64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Test-support route: explicit `(V1 (x) V2) * SWAP` product.
fn kron_times_swap(v1: &Matrix, v2: &Matrix) -> Matrix {
    let d = v1.len();
    let n = d * d;
    let mut kron = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    kron[i * d + k][j * d + l] = v1[i][j] * v2[k][l];
                }
            }
        }
    }
    let mut swap = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..d {
        for j in 0..d {
            swap[i * d + j][j * d + i] = Complex64::ONE;
        }
    }
    matmul(&kron, &swap)
}

#[test]
fn swap_trace_identity_on_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for d in [2usize, 3, 4, 8, 16] {
        for _ in 0..3 {
            let v1 = random_matrix(d, &mut rng);
            let v2 = random_matrix(d, &mut rng);
            let lhs = trace(&kron_times_swap(&v1, &v2));
            let rhs = trace(&matmul(&v1, &v2));
            assert!((lhs - rhs).norm() < 1e-10, "d={d}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn ancilla_probability_equals_half_one_plus_purity() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for d in [2usize, 4, 8] {
        let q = 2 * d.trailing_zeros() as usize;
        for _ in 0..5 {
            let t = rng.random_range(0.0..60.0);
            let params = EvolutionParams::new(0.1, t, d).unwrap();
            let state_only =
                build_pipeline(d, &params, PipelineMode::StateOnly, SynthesisMode::Faithful)
                    .unwrap();
            let gamma = reduced_purity_exact(&run_circuit(&state_only).unwrap(), q / 2)
                .unwrap()
                .value;
            let swap =
                build_pipeline(d, &params, PipelineMode::SwapTest, SynthesisMode::Faithful)
                    .unwrap();
            let p0 = swap_test_p0(&run_circuit(&swap.without_measurements()).unwrap());
            assert!((p0 - (1.0 + gamma) / 2.0).abs() < 1e-10, "d={d} t={t}");
        }
    }
}
