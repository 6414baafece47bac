//! Regime assignment and the `alpha_n` vs `B_n` prime/composite decision
//! rule, validated against a classical sieve.

use serde::{Deserialize, Serialize};

use crate::spectral::{analytic_fourier_modes, mode_sigma_bound, FourierSpectrum, InitialCoefficients};
use crate::{Error, Result};

/// Mode-index regimes. The decidable region is `D = I ∪ II`.
///
/// - I: `2 <= n <= d-1` — primes sit exactly on `B_n > 0`.
/// - II: `d <= n <= 2(d-1)` — primes have `alpha_n = 0`, composites do not.
/// - III: `2(d-1) < n <= (d-1)^2` — `alpha_n != 0` certifies compositeness,
///   but `alpha_n = 0` decides nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    I,
    II,
    III,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        match s {
            "I" => Some(Regime::I),
            "II" => Some(Regime::II),
            "III" => Some(Regime::III),
            _ => None,
        }
    }
}

/// Regime of mode index `n` at dimension `d`; `None` outside `[2, (d-1)^2]`
/// (with the regime-II upper edge `2(d-1)` taking precedence at `d = 2`).
pub fn regime_of(n: usize, d: usize) -> Option<Regime> {
    if n < 2 {
        None
    } else if n <= d - 1 {
        Some(Regime::I)
    } else if n <= 2 * (d - 1) {
        Some(Regime::II)
    } else if n <= (d - 1) * (d - 1) {
        Some(Regime::III)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Prime,
    Composite,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Prime => "prime",
            Verdict::Composite => "composite",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One classified mode index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub n: usize,
    pub regime: Regime,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub verdict: Verdict,
    /// Sieve ground truth: `true` when `n` is prime.
    pub oracle_prime: bool,
    /// `false` only when a definite verdict contradicts the sieve;
    /// inconclusive rows make no claim.
    pub agree: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub decidable: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub d: usize,
    pub tau: f64,
    pub rows: Vec<ClassificationRow>,
    pub summary: ClassificationSummary,
}

impl ClassificationReport {
    /// Whether every verdict in the decidable region `D` matches the sieve.
    pub fn sieve_agrees_on_decidable(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.regime != Regime::III)
            .all(|r| r.agree)
    }
}

/// Classify every covered `n >= 2` of `spectrum` against tolerance `tau`.
///
/// Regime I: prime iff `|alpha_n - B_n| <= tau`, else composite.
/// Regime II: prime iff `alpha_n <= tau`, else composite.
/// Regime III: composite iff `alpha_n > tau`, else inconclusive.
pub fn classify(spectrum: &FourierSpectrum, tau: f64) -> Result<ClassificationReport> {
    let d = spectrum.d();
    let need = 2 * (d - 1);
    if spectrum.nmax() < need {
        return Err(Error::SpectrumTooShort {
            have: spectrum.nmax(),
            need,
        });
    }
    let prime_table = prime_table(spectrum.nmax());
    let mut rows = Vec::new();
    let mut summary = ClassificationSummary::default();
    for n in 2..=spectrum.nmax() {
        let Some(regime) = regime_of(n, d) else {
            continue;
        };
        let alpha = spectrum.mode(n).expect("mode covered");
        let bound = spectrum.bound(n);
        let verdict = match regime {
            Regime::I | Regime::II => {
                let b = bound.ok_or(Error::MissingBound(n))?;
                let on_bound = match regime {
                    Regime::I => (alpha - b).abs() <= tau,
                    _ => alpha <= tau,
                };
                if on_bound {
                    Verdict::Prime
                } else {
                    Verdict::Composite
                }
            }
            Regime::III => {
                if alpha > tau {
                    Verdict::Composite
                } else {
                    Verdict::Inconclusive
                }
            }
        };
        let oracle_prime = prime_table[n];
        let agree = match verdict {
            Verdict::Prime => oracle_prime,
            Verdict::Composite => !oracle_prime,
            Verdict::Inconclusive => true,
        };
        if regime == Regime::III {
            if verdict == Verdict::Inconclusive {
                summary.inconclusive += 1;
            }
        } else {
            summary.decidable += 1;
            if agree {
                summary.agreements += 1;
            } else {
                summary.disagreements += 1;
            }
        }
        rows.push(ClassificationRow {
            n,
            regime,
            alpha,
            bound,
            verdict,
            oracle_prime,
            agree,
        });
    }
    Ok(ClassificationReport {
        d,
        tau,
        rows,
        summary,
    })
}

/// Sieve of Eratosthenes: all primes up to and including `limit`. Ground
/// truth for validation only; never feeds the spectral decision path.
pub fn sieve_oracle(limit: usize) -> Vec<usize> {
    prime_table(limit)
        .iter()
        .enumerate()
        .filter_map(|(n, &p)| p.then_some(n))
        .collect()
}

fn prime_table(limit: usize) -> Vec<bool> {
    let mut table = vec![true; limit + 1];
    table[0] = false;
    if limit >= 1 {
        table[1] = false;
    }
    let mut p = 2usize;
    while p * p <= limit {
        if table[p] {
            let mut multiple = p * p;
            while multiple <= limit {
                table[multiple] = false;
                multiple += p;
            }
        }
        p += 1;
    }
    table
}

/// Default classification tolerance for the uniform initial state.
///
/// Noiseless: `tau0 = min(2 / d^4, g_min / 2)` where `g_min` is the smallest
/// composite excess `alpha_n - B_n` over the decidable region of the analytic
/// uniform spectrum (never below `4 / d^4`, the weight of a single
/// non-trivial divisor term). Sampled runs add three conservative quadrature
/// noise deviations: `tau = tau0 + 3 * (2 / (3 p)) sqrt((10 p - 2) / shots)`.
pub fn default_tolerance(d: usize, shots: u64, partitions: usize) -> Result<f64> {
    let coeffs = InitialCoefficients::uniform(d)?;
    let spectrum = analytic_fourier_modes(&coeffs)?;
    let prime_table = prime_table(2 * (d - 1));
    let mut min_excess = f64::INFINITY;
    for n in 2..=2 * (d - 1) {
        if !prime_table[n] {
            let gap = spectrum.mode(n).unwrap() - spectrum.bound(n).unwrap();
            min_excess = min_excess.min(gap);
        }
    }
    let d4 = (d as f64).powi(4);
    let tau0 = (2.0 / d4).min(min_excess / 2.0);
    if shots == 0 {
        Ok(tau0)
    } else {
        Ok(tau0 + 3.0 * mode_sigma_bound(partitions, shots))
    }
}
