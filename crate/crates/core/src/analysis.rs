//! Analytical references: Q-function bounds, binary-input AWGN capacity
//! and dispersion, finite-blocklength normal approximation, and code
//! weight spectra (exhaustive and list-based).

use std::collections::BTreeMap;

use statrs::function::erf::erfc;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::list_decoder::scl_decode;
use crate::polar_code::CodeSpec;
use crate::sc_decoder::{log1p_exp, LLR_CLAMP};
use crate::crc::{self, CrcSpec};

const LN_2: f64 = std::f64::consts::LN_2;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x) = erfc(x / sqrt(2)) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of `q_function` on (0, 1), solved by bisection against our own
/// forward evaluation.
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!(
            "Q^-1 argument must lie in (0, 1), got {p}"
        )));
    }
    let (mut lo, mut hi) = (-40.0f64, 40.0f64); // Q(lo) ~ 1, Q(hi) ~ 0
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q_function(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Union bound on the frame error rate of soft-decision ML decoding over
/// BPSK/AWGN: `sum_d A_d Q(sqrt(2 d R 10^(ebno/10)))` for distance
/// multiplicity pairs `(d, A_d)`.
pub fn union_bound_fer(ebno_db: f64, rate: f64, terms: &[(usize, u64)]) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid(format!(
            "rate must lie in (0, 1], got {rate}"
        )));
    }
    let es_no = rate * 10f64.powf(ebno_db / 10.0);
    let mut sum = 0.0;
    for &(d, mult) in terms {
        if d == 0 {
            return Err(Error::invalid("union bound distances must be >= 1"));
        }
        if mult == 0 {
            return Err(Error::invalid("union bound multiplicities must be >= 1"));
        }
        sum += mult as f64 * q_function((2.0 * d as f64 * es_no).sqrt());
    }
    Ok(sum)
}

/// Tag for emitted bound curves.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    UnionBound,
    NormalApprox,
}

/// One point of an analytical curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundPoint {
    pub ebno_db: f64,
    pub value: f64,
    pub kind: BoundKind,
}

/// Union bound evaluated over an Eb/No grid.
pub fn union_bound_curve(
    ebno_db_grid: &[f64],
    rate: f64,
    terms: &[(usize, u64)],
) -> Result<Vec<BoundPoint>> {
    ebno_db_grid
        .iter()
        .map(|&e| {
            Ok(BoundPoint {
                ebno_db: e,
                value: union_bound_fer(e, rate, terms)?,
                kind: BoundKind::UnionBound,
            })
        })
        .collect()
}

/// Capacity (bits per channel use) and dispersion (bits^2) of the
/// binary-input AWGN channel with noise deviation `sigma`, by composite
/// Simpson integration of the information density over the conditional
/// output distribution.
///
/// With BPSK at unit energy and the all-zero symbol transmitted, the
/// channel LLR is `L = 2(1 + z)/sigma^2` for noise `z ~ N(0, sigma^2)`,
/// the information density is `1 - log2(1 + e^{-L})`, capacity is its
/// mean, and dispersion its variance.
fn biawgn_moments(sigma: f64) -> Result<(f64, f64)> {
    if sigma.is_nan() || sigma <= 0.0 || sigma.is_infinite() {
        return Err(Error::invalid(format!(
            "noise sigma must be positive and finite, got {sigma}"
        )));
    }
    // t(z) = ln(1 + e^{-L(z)}); capacity = 1 - E[t]/ln2,
    // dispersion = Var[t]/ln2^2. Integrate t and t^2 against the normal
    // density over |z| <= 12 sigma (the tail mass is ~1e-32).
    let m = 16_384usize; // Simpson subintervals (even)
    let lo = -12.0 * sigma;
    let h = (24.0 * sigma) / m as f64;
    let density = |z: f64| {
        (-(z * z) / (2.0 * sigma * sigma)).exp()
            / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    };
    let t_of = |z: f64| log1p_exp(-(2.0 * (1.0 + z) / (sigma * sigma)));
    let mut e_t = 0.0;
    let mut e_t2 = 0.0;
    for i in 0..=m {
        let z = lo + h * i as f64;
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let p = density(z) * w;
        let t = t_of(z);
        e_t += p * t;
        e_t2 += p * t * t;
    }
    e_t *= h / 3.0;
    e_t2 *= h / 3.0;
    let capacity = 1.0 - e_t / LN_2;
    let dispersion = ((e_t2 - e_t * e_t) / (LN_2 * LN_2)).max(0.0);
    Ok((capacity, dispersion))
}

/// Capacity of the binary-input AWGN channel in bits per channel use.
pub fn biawgn_capacity(sigma: f64) -> Result<f64> {
    Ok(biawgn_moments(sigma)?.0)
}

/// Dispersion of the binary-input AWGN channel in bits^2.
pub fn biawgn_dispersion(sigma: f64) -> Result<f64> {
    Ok(biawgn_moments(sigma)?.1)
}

/// Smallest Eb/No (dB) at which the normal approximation
/// `R ~ C(sigma) - sqrt(V(sigma)/N) Q^{-1}(eps)` admits rate `rate` at
/// block length `block_len` and target error `eps`. Solved by bisection
/// on Eb/No to a 1e-3 dB tolerance.
pub fn normal_approx_min_ebno(rate: f64, block_len: usize, eps: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::invalid(format!(
            "rate must lie in (0, 1), got {rate}"
        )));
    }
    if block_len == 0 {
        return Err(Error::invalid("block length must be at least 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!(
            "target error rate must lie in (0, 1), got {eps}"
        )));
    }
    let qinv_eps = q_inv(eps)?;
    let achievable = |ebno_db: f64| -> Result<f64> {
        let sigma = crate::channel_sim::ebno_to_sigma(ebno_db, rate)?;
        let (c, v) = biawgn_moments(sigma)?;
        Ok(c - (v / block_len as f64).sqrt() * qinv_eps - rate)
    };
    let (mut lo, mut hi) = (-3.0f64, 10.0f64);
    if achievable(lo)? >= 0.0 || achievable(hi)? <= 0.0 {
        return Err(Error::invalid(
            "normal approximation has no crossing in [-3, 10] dB",
        ));
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if achievable(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Multiset of nonzero codeword weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpectrum {
    counts: BTreeMap<usize, u64>,
}

impl WeightSpectrum {
    fn new() -> Self {
        WeightSpectrum {
            counts: BTreeMap::new(),
        }
    }

    fn tally(&mut self, weight: usize) {
        *self.counts.entry(weight).or_insert(0) += 1;
    }

    /// Smallest observed nonzero weight.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    /// Number of codewords observed at a weight.
    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    /// Total number of nonzero codewords observed.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// (weight, count) pairs in increasing weight order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&w, &c)| (w, c))
    }
}

/// Result of the list-based spectrum enumeration.
#[derive(Clone, Debug)]
pub struct ListSpectrumReport {
    pub spectrum: WeightSpectrum,
    /// List size used for the enumeration.
    pub list_size: usize,
    /// Number of list candidates returned by the decoder.
    pub candidates: usize,
    /// Accounting identity: candidates = total nonzero + 1 (the all-zero
    /// codeword itself survives as the best path).
    pub identity_holds: bool,
    /// Information fields of the candidates achieving the minimum weight,
    /// in metric order.
    pub min_weight_messages: Vec<BitVec>,
}

/// Estimates the low-weight spectrum by list-decoding the all-zero
/// codeword at noiseless LLRs with a large list: the survivors are the
/// `list_size` codewords closest to all-zero in likelihood, i.e. the
/// lowest-weight ones. Counts at a weight are exact once the list is
/// large enough that the population at that weight saturates. The spec
/// must not have a CRC bound (the spectrum belongs to the underlying
/// polar code), and `list_size` must be at least 2.
pub fn weight_spectrum_via_list(spec: &CodeSpec, list_size: usize) -> Result<ListSpectrumReport> {
    if spec.crc().is_some() {
        return Err(Error::CrcBinding(
            "list spectrum enumeration requires a spec without a CRC bound".into(),
        ));
    }
    if list_size < 2 {
        return Err(Error::invalid("spectrum list size must be at least 2"));
    }
    let llrs = vec![LLR_CLAMP; spec.block_len()];
    let res = scl_decode(&llrs, spec, list_size)?;
    let mut spectrum = WeightSpectrum::new();
    let mut zero_candidates = 0u64;
    let mut weights = Vec::with_capacity(res.candidates.len());
    for cand in &res.candidates {
        let w = spec.encode(&cand.u_hat)?.weight();
        weights.push(w);
        if w == 0 {
            zero_candidates += 1;
        } else {
            spectrum.tally(w);
        }
    }
    let min_weight_messages = match spectrum.min_weight() {
        Some(wmin) => res
            .candidates
            .iter()
            .zip(&weights)
            .filter(|(_, &w)| w == wmin)
            .map(|(c, _)| spec.extract_info(&c.u_hat))
            .collect::<Result<Vec<BitVec>>>()?,
        None => Vec::new(),
    };
    let identity_holds =
        zero_candidates == 1 && res.candidates.len() as u64 == spectrum.total() + 1;
    Ok(ListSpectrumReport {
        spectrum,
        list_size,
        candidates: res.candidates.len(),
        identity_holds,
        min_weight_messages,
    })
}

/// Result of the exhaustive spectrum enumeration.
#[derive(Clone, Debug)]
pub struct ExhaustiveSpectrumReport {
    pub spectrum: WeightSpectrum,
    /// Information fields of the minimum-weight codewords, in message
    /// enumeration order.
    pub min_weight_messages: Vec<BitVec>,
}

/// Exact weight spectrum by encoding all `2^K - 1` nonzero messages of
/// the underlying polar code (any CRC binding is ignored: the information
/// field is enumerated freely). Restricted to `K <= 24`.
pub fn exhaustive_weight_spectrum(spec: &CodeSpec) -> Result<ExhaustiveSpectrumReport> {
    let k = spec.dimension();
    if k > 24 {
        return Err(Error::invalid(format!(
            "exhaustive enumeration is limited to dimension <= 24, got {k}"
        )));
    }
    let mut spectrum = WeightSpectrum::new();
    let mut min_weight = usize::MAX;
    let mut min_weight_messages: Vec<BitVec> = Vec::new();
    for m in 1u64..(1u64 << k) {
        let info = BitVec::from_raw((0..k).map(|j| ((m >> j) & 1) as u8).collect());
        let u = spec.place_info(&info)?;
        let w = spec.encode(&u)?.weight();
        spectrum.tally(w);
        if w < min_weight {
            min_weight = w;
            min_weight_messages.clear();
        }
        if w == min_weight {
            min_weight_messages.push(info);
        }
    }
    Ok(ExhaustiveSpectrumReport {
        spectrum,
        min_weight_messages,
    })
}

/// Outcome of filtering candidate messages through a CRC.
#[derive(Clone, Debug, PartialEq)]
pub struct CrcFilterReport {
    pub total: usize,
    pub survivors: usize,
    /// survivors / total; 0.0 when no messages were supplied.
    pub surviving_fraction: f64,
}

/// Counts how many information-field vectors (payload plus trailing CRC
/// bits) would pass a CRC check, e.g. the minimum-weight messages from a
/// spectrum enumeration. Every message must be longer than the CRC.
pub fn crc_filter_spectrum(messages: &[BitVec], crc_spec: &CrcSpec) -> Result<CrcFilterReport> {
    let mut survivors = 0usize;
    for m in messages {
        if m.len() <= crc_spec.width() {
            return Err(Error::invalid(format!(
                "filter messages must be longer than the {}-bit CRC, got {} bits",
                crc_spec.width(),
                m.len()
            )));
        }
        if crc::crc_verify(m, crc_spec)? {
            survivors += 1;
        }
    }
    let total = messages.len();
    let surviving_fraction = if total == 0 {
        0.0
    } else {
        survivors as f64 / total as f64
    };
    Ok(CrcFilterReport {
        total,
        survivors,
        surviving_fraction,
    })
}
