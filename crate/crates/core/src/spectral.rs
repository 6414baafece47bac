//! Analytic oracles for the reduced purity and its Fourier modes, the
//! lower-bound curve `B_n`, and Simpson extraction of modes from a sampled
//! purity series.
//!
//! For initial weights `|c_j|^2` the reduced purity is
//! `gamma(t) = sum_{j,k,l,m} |c_j|^2 |c_k|^2 |c_l|^2 |c_m|^2 cos(omega t (j-k)(l-m))`,
//! a finite cosine series `alpha_0 + sum_n alpha_n cos(n omega t)` whose
//! coefficients carry the divisor structure of `n`: only decompositions
//! `n = y * (n/y)` with both factors below `d` contribute, so primes in
//! `2 <= n <= 2(d-1)` sit exactly on the trivial-decomposition bound `B_n`.

use serde::{Deserialize, Serialize};

use crate::sim::PurityMethod;
use crate::{Error, Result};

/// Squared magnitudes `|c_n|^2` of the initial per-subsystem state, `n = 1..d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialCoefficients {
    d: usize,
    weights: Vec<f64>,
}

impl InitialCoefficients {
    /// Validated general weights: all strictly positive, summing to 1 within
    /// `1e-12`.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let d = weights.len();
        if d < 2 {
            return Err(Error::InvalidCoefficients(format!(
                "need at least 2 levels, got {d}"
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidCoefficients(
                "all |c_n|^2 must be positive and finite".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidCoefficients(format!(
                "|c_n|^2 sum to {sum}, expected 1"
            )));
        }
        Ok(Self { d, weights })
    }

    /// The maximum-superposition state: `|c_n|^2 = 1/d` exactly.
    pub fn uniform(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidCoefficients(format!(
                "need at least 2 levels, got {d}"
            )));
        }
        Ok(Self {
            d,
            weights: vec![1.0 / d as f64; d],
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Pair-difference weights `C(delta) = sum_k w_k w_(k+delta)` for
    /// `delta = 0..d-1`. Every purity and mode formula regroups through these.
    fn pair_weights(&self) -> Vec<f64> {
        let d = self.d;
        let w = &self.weights;
        (0..d)
            .map(|delta| (0..d - delta).map(|k| w[k] * w[k + delta]).sum())
            .collect()
    }
}

/// Largest meaningful mode index: `(d-1)^2`, except that the decision region
/// extends to `2(d-1)`, which is larger for `d = 2`.
pub fn max_mode(d: usize) -> usize {
    ((d - 1) * (d - 1)).max(2 * (d - 1))
}

/// One sampled (or exact) purity value on the time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub gamma: f64,
    pub method: PurityMethod,
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Purity values on the uniform grid `t_i = i (T/2) / p`, `i = 0..p`.
///
/// The grid spans exactly half a period: `gamma` is symmetric about `T/2`,
/// so the half-period carries the full mode content. `p` must be even for
/// composite Simpson integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuritySeries {
    d: usize,
    omega: f64,
    partitions: usize,
    points: Vec<SeriesPoint>,
}

impl PuritySeries {
    pub fn new(d: usize, omega: f64, partitions: usize, points: Vec<SeriesPoint>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSeries(format!("d = {d} too small")));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidOmega(omega));
        }
        if partitions == 0 || partitions % 2 != 0 {
            return Err(Error::OddPartitionCount(partitions));
        }
        if points.len() != partitions + 1 {
            return Err(Error::InvalidSeries(format!(
                "expected {} grid points, got {}",
                partitions + 1,
                points.len()
            )));
        }
        let h = std::f64::consts::PI / omega / partitions as f64;
        for (i, pt) in points.iter().enumerate() {
            if !pt.gamma.is_finite() {
                return Err(Error::InvalidSeries(format!("gamma at index {i} not finite")));
            }
            if (pt.t - i as f64 * h).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::InvalidSeries(format!(
                    "grid point {i} at t = {} is off the uniform half-period grid",
                    pt.t
                )));
            }
        }
        Ok(Self {
            d,
            omega,
            partitions,
            points,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn partitions(&self) -> usize {
        self.partitions
    }

    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }

    pub fn half_period(&self) -> f64 {
        std::f64::consts::PI / self.omega
    }
}

/// Where a mode spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    Analytic,
    Simpson,
}

/// Fourier modes `alpha_n` for `n = 0..=nmax`, with the lower-bound curve
/// attached for the decidable indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    d: usize,
    source: SpectrumSource,
    modes: Vec<f64>,
    bounds: Vec<Option<f64>>,
}

impl FourierSpectrum {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn nmax(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn mode(&self, n: usize) -> Option<f64> {
        self.modes.get(n).copied()
    }

    pub fn modes(&self) -> &[f64] {
        &self.modes
    }

    pub fn bound(&self, n: usize) -> Option<f64> {
        self.bounds.get(n).copied().flatten()
    }

    /// Directly replace a stored mode. Exists so fault-injection tests and
    /// file round-trips can rebuild a spectrum; not part of the pipeline.
    pub fn set_mode(&mut self, n: usize, alpha: f64) {
        self.modes[n] = alpha;
    }

    /// Assemble a spectrum from raw parts (used by file loaders).
    pub fn from_parts(
        d: usize,
        source: SpectrumSource,
        modes: Vec<f64>,
        bounds: Vec<Option<f64>>,
    ) -> Result<Self> {
        if d < 2 || modes.is_empty() || bounds.len() != modes.len() {
            return Err(Error::InvalidSeries("malformed spectrum parts".into()));
        }
        Ok(Self {
            d,
            source,
            modes,
            bounds,
        })
    }

    /// Attach `B_n` for every covered `n >= 2` from the given initial state.
    pub fn attach_bounds(&mut self, coeffs: &InitialCoefficients) -> Result<()> {
        if coeffs.d() != self.d {
            return Err(Error::InvalidCoefficients(format!(
                "coefficients for d = {}, spectrum for d = {}",
                coeffs.d(),
                self.d
            )));
        }
        for n in 2..self.modes.len() {
            self.bounds[n] = Some(lower_bound(coeffs, n)?);
        }
        Ok(())
    }
}

/// Analytic reduced purity at time `t`, regrouped over pair-difference
/// weights in `O(d^2)`: matches the direct quadruple sum to rounding.
pub fn analytic_purity(coeffs: &InitialCoefficients, omega: f64, t: f64) -> f64 {
    let c = coeffs.pair_weights();
    let d = coeffs.d();
    let c0 = c[0];
    let s: f64 = c[1..].iter().sum();
    let mut cross = 0.0;
    for d1 in 1..d {
        for d2 in 1..d {
            cross += c[d1] * c[d2] * (omega * t * (d1 * d2) as f64).cos();
        }
    }
    c0 * c0 + 4.0 * c0 * s + 4.0 * cross
}

/// Analytic Fourier modes `alpha_0 ..= alpha_nmax` with bounds attached.
///
/// Two routes compute the modes and must agree: a direct `O(d^4)` quadruple
/// enumeration (kept as the production path up to `d = 16`) and the divisor
/// decomposition `alpha_n = 4 sum_(y | n) C(y) C(n/y)` over divisors with
/// both factors at most `d - 1` (the production path beyond).
pub fn analytic_fourier_modes(coeffs: &InitialCoefficients) -> Result<FourierSpectrum> {
    let d = coeffs.d();
    let nmax = max_mode(d);
    let modes = if d <= 16 {
        modes_by_enumeration(coeffs, nmax)
    } else {
        modes_by_divisors(coeffs, nmax)
    };
    let mut spectrum = FourierSpectrum {
        d,
        source: SpectrumSource::Analytic,
        modes,
        bounds: vec![None; nmax + 1],
    };
    spectrum.attach_bounds(coeffs)?;
    Ok(spectrum)
}

/// Brute-force quadruple enumeration of Eq.-style resonances.
fn modes_by_enumeration(coeffs: &InitialCoefficients, nmax: usize) -> Vec<f64> {
    let d = coeffs.d();
    let w = coeffs.weights();
    let mut modes = vec![0.0; nmax + 1];
    for j in 1..=d {
        for k in 1..=d {
            for l in 1..=d {
                for m in 1..=d {
                    let p = (j as i64 - k as i64) * (l as i64 - m as i64);
                    let weight = w[j - 1] * w[k - 1] * w[l - 1] * w[m - 1];
                    if p == 0 {
                        modes[0] += weight;
                    } else if p > 0 {
                        modes[p as usize] += 2.0 * weight;
                    }
                }
            }
        }
    }
    modes
}

/// Divisor-decomposition route over pair-difference weights.
fn modes_by_divisors(coeffs: &InitialCoefficients, nmax: usize) -> Vec<f64> {
    let d = coeffs.d();
    let c = coeffs.pair_weights();
    let s: f64 = c[1..].iter().sum();
    let mut modes = vec![0.0; nmax + 1];
    modes[0] = c[0] * c[0] + 4.0 * c[0] * s;
    for n in 1..=nmax {
        let mut acc = 0.0;
        let mut y = 1usize;
        while y * y <= n {
            if n % y == 0 {
                let z = n / y;
                if y < d && z < d {
                    acc += if y == z { c[y] * c[z] } else { 2.0 * c[y] * c[z] };
                }
            }
            y += 1;
        }
        modes[n] = 4.0 * acc;
    }
    modes
}

/// Trivial-decomposition lower bound
/// `B_n = 8 sum_(k <= d-n) sum_(m <= d-1) w_k w_m w_(k+n) w_(m+1)`,
/// an empty sum (hence 0) once `n >= d`.
pub fn lower_bound(coeffs: &InitialCoefficients, n: usize) -> Result<f64> {
    let d = coeffs.d();
    if n < 2 || n > max_mode(d) {
        return Err(Error::ModeOutOfRange {
            n,
            lo: 2,
            hi: max_mode(d),
        });
    }
    let w = coeffs.weights();
    let mut acc = 0.0;
    for k in 1..=d.saturating_sub(n) {
        for m in 1..=d - 1 {
            acc += w[k - 1] * w[m - 1] * w[k + n - 1] * w[m];
        }
    }
    Ok(8.0 * acc)
}

/// Closed piecewise form of the uniform-state bound: the straight line
/// `-8 (d-1) n / d^4 + (8d - 8) / d^3` on `2 <= n <= d-1` and zero beyond.
/// Must agree with [`lower_bound`] on uniform coefficients.
pub fn lower_bound_uniform_piecewise(d: usize, n: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidCoefficients(format!("d = {d} too small")));
    }
    if n < 2 || n > max_mode(d) {
        return Err(Error::ModeOutOfRange {
            n,
            lo: 2,
            hi: max_mode(d),
        });
    }
    let df = d as f64;
    if n <= d - 1 {
        Ok(-8.0 * (df - 1.0) * n as f64 / df.powi(4) + (8.0 * df - 8.0) / df.powi(3))
    } else {
        Ok(0.0)
    }
}

/// Composite Simpson rule on a uniform grid of `values.len() - 1` intervals
/// of width `h`. The interval count must be even.
pub fn simpson_integrate(values: &[f64], h: f64) -> Result<f64> {
    let intervals = values.len().saturating_sub(1);
    if intervals == 0 || intervals % 2 != 0 {
        return Err(Error::OddPartitionCount(intervals));
    }
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, &v) in values.iter().enumerate().skip(1).take(intervals - 1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Ok(h / 3.0 * (values[0] + values[intervals] + 4.0 * odd + 2.0 * even))
}

/// Fourier modes from a purity series by Simpson quadrature:
/// `alpha_n = (2 omega / pi) * integral_0^(T/2) gamma(t) cos(n omega t) dt`
/// for `n = 1..=nmax`, plus the mean value at `n = 0`. Bounds are not
/// attached; callers supply the initial state via
/// [`FourierSpectrum::attach_bounds`].
pub fn simpson_fourier(series: &PuritySeries, nmax: usize) -> Result<FourierSpectrum> {
    if series.partitions % 2 != 0 {
        return Err(Error::OddPartitionCount(series.partitions));
    }
    if nmax < 1 || nmax > max_mode(series.d) {
        return Err(Error::ModeOutOfRange {
            n: nmax,
            lo: 1,
            hi: max_mode(series.d),
        });
    }
    let omega = series.omega;
    let h = series.half_period() / series.partitions as f64;
    let gammas: Vec<f64> = series.points.iter().map(|p| p.gamma).collect();
    let mut modes = Vec::with_capacity(nmax + 1);
    modes.push(omega / std::f64::consts::PI * simpson_integrate(&gammas, h)?);
    let mut integrand = vec![0.0; gammas.len()];
    for n in 1..=nmax {
        for (i, pt) in series.points.iter().enumerate() {
            integrand[i] = pt.gamma * (n as f64 * omega * pt.t).cos();
        }
        let integral = simpson_integrate(&integrand, h)?;
        modes.push(2.0 * omega / std::f64::consts::PI * integral);
    }
    Ok(FourierSpectrum {
        d: series.d,
        source: SpectrumSource::Simpson,
        bounds: vec![None; modes.len()],
        modes,
    })
}

/// Standard error of a Simpson-extracted mode under binomial shot noise,
/// propagated through the quadrature weights:
/// `sigma_n^2 = (2 omega / pi)^2 sum_i (W_i cos(n omega t_i))^2 * 4 p0_i (1 - p0_i) / shots`.
pub fn simpson_mode_sigma(p0: &[f64], omega: f64, shots: u64, n: usize) -> f64 {
    assert!(shots > 0 && p0.len() >= 3 && (p0.len() - 1) % 2 == 0);
    let partitions = p0.len() - 1;
    let h = std::f64::consts::PI / omega / partitions as f64;
    let mut var = 0.0;
    for (i, &p) in p0.iter().enumerate() {
        let c = if i == 0 || i == partitions {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let w = h / 3.0 * c * (n as f64 * omega * (i as f64 * h)).cos();
        var += w * w * 4.0 * p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / shots as f64;
    }
    2.0 * omega / std::f64::consts::PI * var.sqrt()
}

/// Coefficient-free upper bound on [`simpson_mode_sigma`], using
/// `p0 (1 - p0) <= 1/4` and `|cos| <= 1`:
/// `sigma <= (2 / (3 p)) sqrt((10 p - 2) / shots)`.
pub fn mode_sigma_bound(partitions: usize, shots: u64) -> f64 {
    assert!(shots > 0 && partitions >= 2);
    2.0 / (3.0 * partitions as f64) * ((10.0 * partitions as f64 - 2.0) / shots as f64).sqrt()
}
