//! Walsh functions, the fast Paley-ordered transform, and the sparse
//! closed-form Walsh spectrum of the coupled-register evolution.
//!
//! Bit conventions, fixed module-wide:
//!
//! - Row indices `j` use the *binary* convention `bin(j) = (j_q ... j_2 j_1)`
//!   with `j_1` the least significant bit, so `j_i` is bit `i - 1` of `j`.
//! - Column indices `k` use the *dyadic* convention `dyad(k) = (k_1 k_2 ... k_q)`
//!   with `k_1` the most significant bit, so `k_i` is bit `q - i` of `k`.
//!
//! The Paley-ordered Walsh function is `w_{jk} = (-1)^(sum_i j_i k_i)`, which
//! under these conventions is the parity of `j & reverse_bits(k, q)`. Mixing
//! the two index conventions is a programming error; the tests compare every
//! construction path entrywise to catch it.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// Parameters of the evolution `U(t) = diag(exp(-i * omega * n_A * n_B * t))`.
///
/// The coupling constant, level spacing and hbar are absorbed into `omega`;
/// they never appear independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub omega: f64,
    pub t: f64,
    pub d: usize,
}

impl EvolutionParams {
    pub fn new(omega: f64, t: f64, d: usize) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidOmega(omega));
        }
        if !t.is_finite() {
            return Err(Error::InvalidTime(t));
        }
        check_dimension(d)?;
        Ok(Self { omega, t, d })
    }

    /// Period `T = 2 pi / omega` of the reduced purity.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    /// Number of qubits `q = 2 log2(d)` of one register.
    pub fn qubits(&self) -> usize {
        2 * self.d.trailing_zeros() as usize
    }
}

/// The integer phase vector `f` with `f[(n_A - 1) d + (n_B - 1)] = n_A * n_B`.
///
/// These are the eigenvalues of the diagonal generator at unit scale; the
/// physical factor `-omega t / d^2` is applied only in [`scale_angles`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseVector {
    d: usize,
    entries: Vec<i64>,
}

impl PhaseVector {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn qubits(&self) -> usize {
        2 * self.d.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }
}

/// Sparse raw Walsh spectrum: a map from Paley index `j >= 1` to the integer
/// angle `a_j = sum_k f_k w_{jk}`. Zero angles are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    q: usize,
    entries: BTreeMap<usize, i64>,
}

impl WalshSpectrum {
    pub fn qubits(&self) -> usize {
        self.q
    }

    /// Raw angle at index `j`; absent entries are zero.
    pub fn raw_angle(&self, j: usize) -> i64 {
        self.entries.get(&j).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending `j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.entries.iter().map(|(&j, &a)| (j, a))
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }
}

/// Time-scaled Walsh spectrum: `j -> a_j(t) = (-omega t / d^2) * a_j`.
///
/// Unlike [`WalshSpectrum`], zero values are kept (all angles vanish at
/// `t = 0`); pruning is a synthesis-mode concern.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSpectrum {
    q: usize,
    entries: BTreeMap<usize, f64>,
}

impl ScaledSpectrum {
    /// Assemble a scaled spectrum from explicit `(j, a_j(t))` pairs; every
    /// `j` must lie in `[1, 2^q - 1]`.
    pub fn from_angles(q: usize, angles: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (j, a) in angles {
            check_index(j, q)?;
            if j == 0 {
                return Err(Error::IndexOutOfRange { index: j, q });
            }
            if !a.is_finite() {
                return Err(Error::InvalidTime(a));
            }
            entries.insert(j, a);
        }
        Ok(Self { q, entries })
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.entries.get(&j).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&j, &a)| (j, a))
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d >= 2 && d.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::DimensionNotPowerOfTwo(d))
    }
}

fn check_index(x: usize, q: usize) -> Result<()> {
    if q == 0 || q >= usize::BITS as usize {
        return Err(Error::IndexOutOfRange { index: x, q });
    }
    if x < (1usize << q) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: x, q })
    }
}

/// Reverse the low `q` bits of `x`.
fn reverse_bits(x: usize, q: usize) -> usize {
    let mut out = 0usize;
    for b in 0..q {
        if x & (1 << b) != 0 {
            out |= 1 << (q - 1 - b);
        }
    }
    out
}

/// Paley-ordered Walsh function `w_{jk} = (-1)^(sum_i j_i k_i)` on `q` qubits.
pub fn walsh_function(j: usize, k: usize, q: usize) -> Result<i64> {
    check_index(j, q)?;
    check_index(k, q)?;
    let parity = (j & reverse_bits(k, q)).count_ones() & 1;
    Ok(if parity == 0 { 1 } else { -1 })
}

/// Row `j` of the `2^q x 2^q` Paley-ordered Walsh matrix, built from
/// Rademacher blocks.
///
/// For `j = 2^(r-1)` this is the Rademacher row of period `T_r = 2^(q-r)`:
/// alternating blocks of `+1` and `-1` of that length. For general `j` the
/// row is grown by the recursion `R_{m_(i-1)} = [R_{m_i} (-R_{m_i}) ...]`
/// over the set-bit positions `m_1 < m_2 < ... < m_h` of `j`, starting from
/// the all-`+1` block of length `2^(q - m_h)`.
pub fn walsh_row(j: usize, q: usize) -> Result<Vec<i64>> {
    check_index(j, q)?;
    let full = 1usize << q;
    if j == 0 {
        return Ok(vec![1; full]);
    }
    // Set-bit positions of j, 1-based, ascending (m_1 = LSB position).
    let positions: Vec<usize> = (1..=q).filter(|m| j & (1 << (m - 1)) != 0).collect();
    let m_last = *positions.last().expect("j > 0 has a set bit");
    let mut block: Vec<i64> = vec![1; 1 << (q - m_last)];
    for &m in positions.iter().rev().skip(1) {
        block = tile_alternating(&block, 1 << (q - m));
    }
    Ok(tile_alternating(&block, full))
}

/// `[B, -B, B, -B, ...]` repeated up to `target_len`.
fn tile_alternating(block: &[i64], target_len: usize) -> Vec<i64> {
    debug_assert!(target_len % (2 * block.len()) == 0);
    let mut out = Vec::with_capacity(target_len);
    let mut sign = 1i64;
    while out.len() < target_len {
        out.extend(block.iter().map(|&v| sign * v));
        sign = -sign;
    }
    out
}

/// The phase vector `f = [P_1, P_2, ..., P_d]` with `P_eta = [eta, 2 eta, ..., d eta]`.
pub fn phase_vector(d: usize) -> Result<PhaseVector> {
    check_dimension(d)?;
    let mut entries = Vec::with_capacity(d * d);
    for n_a in 1..=d as i64 {
        for n_b in 1..=d as i64 {
            entries.push(n_a * n_b);
        }
    }
    Ok(PhaseVector { d, entries })
}

/// In-place fast Walsh transform in Paley ordering: replaces `values` by
/// `a_j = sum_k values_k w_{jk}` (no `1/2^q` normalisation). `O(q 2^q)`.
///
/// The matrix is symmetric and self-inverse up to `2^q`, so applying this
/// twice multiplies the input by `2^q`.
pub fn fwht_paley(values: &mut [i64]) {
    let n = values.len();
    assert!(n.is_power_of_two(), "length must be a power of two");
    let q = n.trailing_zeros() as usize;
    // Bit-reversal permutation maps the dyadic column convention onto the
    // binary row convention; the plain butterfly network does the rest.
    for k in 0..n {
        let r = reverse_bits(k, q);
        if r > k {
            values.swap(k, r);
        }
    }
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (x, y) = (values[i], values[i + h]);
                values[i] = x + y;
                values[i + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Raw Walsh spectrum of the phase vector via the fast transform; entries
/// with `a_j = 0` and the global-phase index `j = 0` are omitted.
pub fn walsh_transform(f: &PhaseVector) -> WalshSpectrum {
    let q = f.qubits();
    let mut values = f.entries.clone();
    fwht_paley(&mut values);
    let entries = values
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, a)| a != 0)
        .collect();
    WalshSpectrum { q, entries }
}

/// Closed-form sparse Walsh spectrum of the phase vector, in `O(q^2)` time.
///
/// Non-zero raw angles sit exactly at
///
/// - Hamming-weight-1 indices `j = 2^r`:
///   `a_j = -(1+d) d^3 / (8 j)` for `j <= d/2` and `-(1+d) d^4 / (8 j)` for
///   `j >= d`;
/// - Hamming-weight-2 indices `j = l_1 + l_2` with `l_1 <= d/2 <= d <= l_2`:
///   `a_j = d^5 / (16 l_1 l_2)`.
///
/// That is `q^2/4 + q` entries, matching [`walsh_transform`] value for value.
/// Only even `q` is supported (a `d x d` register always has even `q`);
/// arbitrary phase vectors go through [`walsh_transform`] instead.
pub fn closed_form_spectrum(d: usize) -> Result<WalshSpectrum> {
    check_dimension(d)?;
    let s = d.trailing_zeros() as usize;
    let q = 2 * s;
    let di = d as i64;
    let d3 = checked_pow(di, 3, 1)?;
    let d4 = checked_pow(di, 4, 1)?;
    let d5 = checked_pow(di, 5, 1)?;
    let mut entries = BTreeMap::new();

    for r in 0..q {
        let j = 1i64 << r;
        let numerator = if j <= di / 2 { d3 } else { d4 };
        let a = -checked_mul(1 + di, numerator, j as usize)? / (8 * j);
        entries.insert(j as usize, a);
    }
    for r1 in 0..s {
        for r2 in s..q {
            let (l1, l2) = (1i64 << r1, 1i64 << r2);
            let j = (l1 + l2) as usize;
            entries.insert(j, d5 / (16 * l1 * l2));
        }
    }
    debug_assert_eq!(entries.len(), q * q / 4 + q);
    Ok(WalshSpectrum { q, entries })
}

fn checked_mul(a: i64, b: i64, j: usize) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::AngleOverflow(j))
}

fn checked_pow(base: i64, exp: u32, j: usize) -> Result<i64> {
    base.checked_pow(exp).ok_or(Error::AngleOverflow(j))
}

/// Scale a raw spectrum to the Walsh angles of `U(t)`:
/// `a_j(t) = (-omega t / d^2) * a_j`.
pub fn scale_angles(spectrum: &WalshSpectrum, params: &EvolutionParams) -> Result<ScaledSpectrum> {
    if spectrum.q != params.qubits() {
        return Err(Error::SpectrumParamsMismatch {
            spectrum_q: spectrum.q,
            d: params.d,
        });
    }
    let factor = -params.omega * params.t / (params.d * params.d) as f64;
    let entries = spectrum
        .entries
        .iter()
        .map(|(&j, &a)| (j, factor * a as f64))
        .collect();
    Ok(ScaledSpectrum {
        q: spectrum.q,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walsh_function_small_cases() {
        for k in 0..4 {
            assert_eq!(walsh_function(0, k, 2).unwrap(), 1);
        }
        // bin(1) = (01), dyad(2) = (10): exponent j_1 k_1 = 1.
        assert_eq!(walsh_function(1, 2, 2).unwrap(), -1);
        // bin(3) = (11), dyad(3) = (11): exponent k_1 + k_2 = 2.
        assert_eq!(walsh_function(3, 3, 2).unwrap(), 1);
        assert!(walsh_function(4, 0, 2).is_err());
        assert!(walsh_function(0, 7, 2).is_err());
    }

    #[test]
    fn walsh_rows_q2() {
        assert_eq!(walsh_row(0, 2).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(walsh_row(1, 2).unwrap(), vec![1, 1, -1, -1]);
        assert_eq!(walsh_row(2, 2).unwrap(), vec![1, -1, 1, -1]);
        assert_eq!(walsh_row(3, 2).unwrap(), vec![1, -1, -1, 1]);
    }

    #[test]
    fn rows_match_walsh_function_up_to_q8() {
        for q in 1..=8 {
            for j in 0..1usize << q {
                let row = walsh_row(j, q).unwrap();
                for k in 0..1usize << q {
                    assert_eq!(
                        row[k],
                        walsh_function(j, k, q).unwrap(),
                        "mismatch at q={q} j={j} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn phase_vector_values() {
        assert_eq!(phase_vector(2).unwrap().entries(), &[1, 2, 2, 4]);
        let f4 = phase_vector(4).unwrap();
        assert_eq!(&f4.entries()[..8], &[1, 2, 3, 4, 2, 4, 6, 8]);
        // Flat index (n_A - 1) d + (n_B - 1) holds n_A * n_B.
        for (d, idx, expect) in [(2usize, 3usize, 4i64), (4, 10, 9), (8, 63, 64)] {
            assert_eq!(phase_vector(d).unwrap().entries()[idx], expect);
        }
        assert!(phase_vector(3).is_err());
        assert!(phase_vector(1).is_err());
        assert!(phase_vector(0).is_err());
    }

    #[test]
    fn transform_d2_hand_computed() {
        let spec = walsh_transform(&phase_vector(2).unwrap());
        assert_eq!(spec.support(), vec![1, 2, 3]);
        assert_eq!(spec.raw_angle(1), -3);
        assert_eq!(spec.raw_angle(2), -3);
        assert_eq!(spec.raw_angle(3), 1);
    }

    #[test]
    fn transform_of_constant_vector_is_empty() {
        let mut values = vec![7i64; 16];
        fwht_paley(&mut values);
        assert_eq!(values[0], 7 * 16);
        assert!(values[1..].iter().all(|&a| a == 0));
    }

    #[test]
    fn transform_d4_support_is_theorem_set() {
        let spec = walsh_transform(&phase_vector(4).unwrap());
        assert_eq!(spec.support(), vec![1, 2, 4, 5, 6, 8, 9, 10]);
    }

    #[test]
    fn transform_matches_direct_sum_small_q() {
        for d in [2usize, 4] {
            let f = phase_vector(d).unwrap();
            let q = f.qubits();
            let spec = walsh_transform(&f);
            for j in 1..1usize << q {
                let direct: i64 = (0..1usize << q)
                    .map(|k| f.entries()[k] * walsh_function(j, k, q).unwrap())
                    .sum();
                assert_eq!(spec.raw_angle(j), direct, "d={d} j={j}");
            }
        }
    }

    #[test]
    fn closed_form_matches_hand_values() {
        let spec = closed_form_spectrum(2).unwrap();
        assert_eq!(spec.raw_angle(1), -3);
        assert_eq!(spec.raw_angle(2), -3);
        assert_eq!(spec.raw_angle(3), 1);

        let spec = closed_form_spectrum(4).unwrap();
        assert_eq!(spec.len(), 8);
        let expect = [
            (1, -40),
            (2, -20),
            (4, -40),
            (5, 16),
            (6, 8),
            (8, -20),
            (9, 8),
            (10, 4),
        ];
        for (j, a) in expect {
            assert_eq!(spec.raw_angle(j), a, "j={j}");
        }
    }

    #[test]
    fn closed_form_rejects_non_power_dimensions() {
        assert!(matches!(
            closed_form_spectrum(6),
            Err(Error::DimensionNotPowerOfTwo(6))
        ));
    }

    #[test]
    fn sparsity_matches_brute_force_up_to_q12() {
        for s in 1..=6usize {
            let d = 1usize << s;
            let q = 2 * s;
            let brute = walsh_transform(&phase_vector(d).unwrap());
            let closed = closed_form_spectrum(d).unwrap();
            assert_eq!(brute, closed, "d={d}");
            assert_eq!(closed.len(), q * q / 4 + q, "count at q={q}");
        }
    }

    #[test]
    fn nonzero_angles_have_hamming_weight_one_or_two() {
        for s in 1..=5usize {
            let d = 1usize << s;
            let q = 2 * s;
            let mut values = phase_vector(d).unwrap().entries().to_vec();
            fwht_paley(&mut values);
            for (j, &a) in values.iter().enumerate().skip(1) {
                let h = j.count_ones();
                if a != 0 {
                    assert!(h == 1 || h == 2, "q={q} j={j} h={h}");
                }
                if h >= 3 {
                    assert_eq!(a, 0, "q={q} j={j}");
                }
            }
        }
    }

    #[test]
    fn scale_angles_values() {
        let spec = closed_form_spectrum(2).unwrap();
        let zero = scale_angles(&spec, &EvolutionParams::new(0.1, 0.0, 2).unwrap()).unwrap();
        assert!(zero.iter().all(|(_, a)| a == 0.0));
        assert_eq!(zero.len(), 3);

        let scaled = scale_angles(&spec, &EvolutionParams::new(0.1, 1.0, 2).unwrap()).unwrap();
        assert!((scaled.angle(1) - 0.075).abs() < 1e-15);
        assert!((scaled.angle(3) + 0.025).abs() < 1e-15);

        let other = EvolutionParams::new(0.1, 1.0, 4).unwrap();
        assert!(scale_angles(&spec, &other).is_err());
    }

    #[test]
    fn round_trip_recovers_phase_vector() {
        for d in [2usize, 4, 8] {
            let f = phase_vector(d).unwrap();
            let mut values = f.entries().to_vec();
            fwht_paley(&mut values);
            fwht_paley(&mut values);
            let n = f.entries().len() as i64;
            let recovered: Vec<i64> = values.into_iter().map(|v| v / n).collect();
            assert_eq!(recovered, f.entries());
        }
    }
}
