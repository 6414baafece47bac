//! Identifying prime numbers from the entanglement dynamics of a coupled
//! qubit register.
//!
//! A bipartite register of `q` qubits (two halves of dimension `d`, with
//! `d^2 = 2^q`) evolves under the diagonal unitary
//! `U(t) = diag(exp(-i * omega * n_A * n_B * t))`. The reduced purity of one
//! half is a finite cosine series in `t`, and its Fourier modes `alpha_n`
//! separate primes from composites: within `2 <= n <= 2(d-1)`, `alpha_n`
//! equals an analytic lower bound `B_n` exactly when `n` is prime.
//!
//! The crate is organised along the pipeline:
//!
//! - [`walsh`] — Walsh functions, the fast Paley-ordered transform, and the
//!   sparse closed-form Walsh spectrum of `U(t)` (only `q^2/4 + q` of the
//!   `2^q - 1` angles are non-zero).
//! - [`circuit`] — elementary-gate IR, CNOT-staircase synthesis of diagonal
//!   unitaries, the modified SWAP-test circuit, and gate-count audits.
//! - [`sim`] — dense statevector simulation, exact reduced purity, SWAP-test
//!   ancilla statistics, and reproducible shot sampling.
//! - [`spectral`] — analytic purity and Fourier-mode oracles, lower-bound
//!   curves, and Simpson extraction of modes from a sampled purity series.
//! - [`primality`] — regime assignment, the `alpha_n` vs `B_n` decision rule,
//!   and a classical sieve used strictly for validation.

pub mod circuit;
pub mod error;
pub mod primality;
pub mod sim;
pub mod spectral;
pub mod walsh;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
