//! Polar code construction, code specification, and encoding.
//!
//! A code is described by its block length `N = 2^n`, dimension `K`, the
//! set of frozen input positions (all frozen values are zero), and an
//! optional CRC bound to the information field. The generator is
//! `G = B_N F^{⊗n}` where `F = [[1,0],[1,1]]` and `B_N` is the bit-reversal
//! permutation, so encoding is the in-place butterfly transform followed by
//! a bit-reversal reordering of the output.
//!
//! Channel reliabilities are ranked with the Bhattacharyya parameter
//! recursion seeded at `z0 = exp(-10^(design_snr_db/10))`; the `K` most
//! reliable (smallest-`z`) positions carry information, ties resolved
//! toward the lower index.

use crate::bits::BitVec;
use crate::crc::{self, CrcSpec};
use crate::error::{Error, Result};

/// Largest supported block-length exponent (N = 2^20).
pub const MAX_LOG_LEN: usize = 20;

/// Design SNR (dB) used when no explicit construction parameter is given.
pub const DEFAULT_DESIGN_SNR_DB: f64 = 2.0;

/// Bhattacharyya seed for a BPSK/AWGN channel at the given design SNR:
/// `z0 = exp(-10^(design_snr_db / 10))`.
pub fn design_z0(design_snr_db: f64) -> f64 {
    (-(10f64.powf(design_snr_db / 10.0))).exp()
}

/// The permutation `perm[i]` = bit-reversal of `i` over `log_len` bits.
pub fn bit_reversal_permutation(log_len: usize) -> Result<Vec<usize>> {
    if log_len > MAX_LOG_LEN {
        return Err(Error::invalid(format!(
            "log block length {log_len} exceeds maximum {MAX_LOG_LEN}"
        )));
    }
    let n = 1usize << log_len;
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = 0usize;
        for j in 0..log_len {
            if (i >> j) & 1 == 1 {
                r |= 1 << (log_len - 1 - j);
            }
        }
        perm.push(r);
    }
    Ok(perm)
}

/// Bhattacharyya parameters of the `2^log_len` synthesized channels, in the
/// input-domain order used by the decoders. Each doubling step maps a
/// parent parameter `z` to `2z - z^2` (the degraded minus transform) at the
/// even child and `z^2` (the upgraded plus transform) at the odd child.
pub fn bhattacharyya_parameters(log_len: usize, z0: f64) -> Result<Vec<f64>> {
    if log_len > MAX_LOG_LEN {
        return Err(Error::invalid(format!(
            "log block length {log_len} exceeds maximum {MAX_LOG_LEN}"
        )));
    }
    if !(z0 > 0.0 && z0 < 1.0) {
        return Err(Error::invalid(format!(
            "Bhattacharyya seed must lie in (0, 1), got {z0}"
        )));
    }
    let mut z = vec![z0];
    for _ in 0..log_len {
        let mut next = Vec::with_capacity(2 * z.len());
        for &zi in &z {
            next.push(2.0 * zi - zi * zi);
            next.push(zi * zi);
        }
        z = next;
    }
    Ok(z)
}

/// Frozen-position mask for an `(2^log_len, k)` code: `true` marks frozen.
/// The `k` positions with the smallest Bhattacharyya parameters are left
/// unfrozen; equal parameters resolve toward the lower index.
pub fn construct_frozen_mask(log_len: usize, k: usize, z0: f64) -> Result<Vec<bool>> {
    let z = bhattacharyya_parameters(log_len, z0)?;
    let n = z.len();
    if k > n {
        return Err(Error::invalid(format!(
            "dimension {k} exceeds block length {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        z[a].partial_cmp(&z[b])
            .expect("Bhattacharyya parameters are finite")
            .then(a.cmp(&b))
    });
    let mut frozen = vec![true; n];
    for &i in &order[..k] {
        frozen[i] = false;
    }
    Ok(frozen)
}

/// In-place polar butterfly transform `x <- x F^{⊗n}` in natural order.
fn butterfly_transform(x: &mut [u8]) {
    let n = x.len();
    let mut len = 1;
    while len < n {
        let mut start = 0;
        while start < n {
            for off in 0..len {
                x[start + off] ^= x[start + len + off];
            }
            start += 2 * len;
        }
        len <<= 1;
    }
}

/// A fully specified polar code: lengths, frozen set, and optional CRC.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    log_len: usize,
    dimension: usize,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
    bitrev: Vec<usize>,
    design_snr_db: f64,
    crc: Option<CrcSpec>,
}

impl CodeSpec {
    /// Constructs an `(N, K)` code with the Bhattacharyya rule at the given
    /// design SNR. `block_len` must be a power of two in `2..=2^20`, and
    /// `1 <= dimension <= block_len`. A bound CRC must be strictly narrower
    /// than `K` so at least one payload bit remains.
    pub fn new(
        block_len: usize,
        dimension: usize,
        design_snr_db: f64,
        crc: Option<CrcSpec>,
    ) -> Result<Self> {
        let log_len = log2_exact(block_len)?;
        if !design_snr_db.is_finite() {
            return Err(Error::invalid("design SNR must be finite"));
        }
        let frozen = construct_frozen_mask(log_len, dimension, design_z0(design_snr_db))?;
        Self::from_parts(frozen, design_snr_db, crc)
    }

    /// Builds a code from an explicit frozen mask (`true` = frozen). The
    /// dimension is the number of unfrozen positions.
    pub fn from_frozen_mask(
        frozen: Vec<bool>,
        design_snr_db: f64,
        crc: Option<CrcSpec>,
    ) -> Result<Self> {
        log2_exact(frozen.len())?;
        Self::from_parts(frozen, design_snr_db, crc)
    }

    fn from_parts(frozen: Vec<bool>, design_snr_db: f64, crc: Option<CrcSpec>) -> Result<Self> {
        let log_len = log2_exact(frozen.len())?;
        let info_positions: Vec<usize> = (0..frozen.len()).filter(|&i| !frozen[i]).collect();
        let dimension = info_positions.len();
        if dimension == 0 {
            return Err(Error::invalid("code must have at least one unfrozen position"));
        }
        if let Some(c) = &crc {
            if c.width() >= dimension {
                return Err(Error::CrcBinding(format!(
                    "CRC width {} must be smaller than the code dimension {}",
                    c.width(),
                    dimension
                )));
            }
        }
        let bitrev = bit_reversal_permutation(log_len)?;
        Ok(CodeSpec {
            log_len,
            dimension,
            frozen,
            info_positions,
            bitrev,
            design_snr_db,
            crc,
        })
    }

    pub fn block_len(&self) -> usize {
        1 << self.log_len
    }

    pub fn log_len(&self) -> usize {
        self.log_len
    }

    /// Number of unfrozen positions, i.e. payload bits plus CRC bits.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Code rate `K / N` (CRC bits, when bound, count toward `K`).
    pub fn rate(&self) -> f64 {
        self.dimension as f64 / self.block_len() as f64
    }

    /// Number of payload bits: `K` minus the bound CRC width (if any).
    pub fn payload_len(&self) -> usize {
        self.dimension - self.crc.as_ref().map_or(0, |c| c.width())
    }

    pub fn crc(&self) -> Option<&CrcSpec> {
        self.crc.as_ref()
    }

    /// Frozen mask over input positions (`true` = frozen to zero).
    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    /// Unfrozen input positions in increasing order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn design_snr_db(&self) -> f64 {
        self.design_snr_db
    }

    /// Places a `K`-bit information field (payload plus any CRC bits) into
    /// the unfrozen positions of a length-`N` input vector; frozen
    /// positions are zero.
    pub fn place_info(&self, info: &BitVec) -> Result<BitVec> {
        if info.len() != self.dimension {
            return Err(Error::LengthMismatch {
                expected: self.dimension,
                got: info.len(),
            });
        }
        let mut u = BitVec::zeros(self.block_len());
        for (j, &pos) in self.info_positions.iter().enumerate() {
            u.set(pos, info.get(j));
        }
        Ok(u)
    }

    /// Appends the bound CRC (if any) to a payload and places the result
    /// into the unfrozen positions. The payload must have `payload_len()`
    /// bits.
    pub fn assemble_input(&self, payload: &BitVec) -> Result<BitVec> {
        if payload.len() != self.payload_len() {
            return Err(Error::LengthMismatch {
                expected: self.payload_len(),
                got: payload.len(),
            });
        }
        let info = match &self.crc {
            Some(c) => crc::crc_append(payload, c),
            None => payload.clone(),
        };
        self.place_info(&info)
    }

    /// Reads the `K` information bits back out of an input vector.
    pub fn extract_info(&self, u: &BitVec) -> Result<BitVec> {
        if u.len() != self.block_len() {
            return Err(Error::LengthMismatch {
                expected: self.block_len(),
                got: u.len(),
            });
        }
        let mut info = BitVec::zeros(0);
        for &pos in &self.info_positions {
            info.push(u.get(pos));
        }
        Ok(info)
    }

    /// Splits an input vector into payload and CRC fields. The CRC part is
    /// empty when no CRC is bound. Inverse of `assemble_input` up to the
    /// checksum recomputation.
    pub fn extract_payload(&self, u: &BitVec) -> Result<(BitVec, BitVec)> {
        let info = self.extract_info(u)?;
        let split = self.payload_len();
        let payload = BitVec::from_raw(info.as_slice()[..split].to_vec());
        let crc_bits = BitVec::from_raw(info.as_slice()[split..].to_vec());
        Ok((payload, crc_bits))
    }

    /// Encodes an input vector: `x = u G` with `G = B_N F^{⊗n}`.
    pub fn encode(&self, u: &BitVec) -> Result<BitVec> {
        if u.len() != self.block_len() {
            return Err(Error::LengthMismatch {
                expected: self.block_len(),
                got: u.len(),
            });
        }
        let mut x = u.as_slice().to_vec();
        butterfly_transform(&mut x);
        let out: Vec<u8> = (0..x.len()).map(|i| x[self.bitrev[i]]).collect();
        Ok(BitVec::from_raw(out))
    }

    /// Serializes the code description as line-oriented text.
    pub fn to_spec_text(&self) -> String {
        let mut s = String::new();
        s.push_str("polar-code-spec v1\n");
        s.push_str(&format!("block_len {}\n", self.block_len()));
        s.push_str(&format!("dimension {}\n", self.dimension));
        s.push_str(&format!("design_snr_db {}\n", self.design_snr_db));
        match &self.crc {
            Some(c) => s.push_str(&format!("crc {}\n", c.name())),
            None => s.push_str("crc none\n"),
        }
        s.push_str("frozen_values zero\n");
        let frozen_list: Vec<String> = (0..self.block_len())
            .filter(|&i| self.frozen[i])
            .map(|i| i.to_string())
            .collect();
        s.push_str(&format!("frozen_positions {}\n", frozen_list.join(" ")));
        s
    }

    /// Parses the format produced by `to_spec_text`. Blank lines and lines
    /// starting with `#` are ignored. CRC names are resolved through the
    /// registry.
    pub fn from_spec_text(text: &str) -> Result<Self> {
        let mut block_len: Option<usize> = None;
        let mut dimension: Option<usize> = None;
        let mut design_snr_db: Option<f64> = None;
        let mut crc_name: Option<String> = None;
        let mut frozen_positions: Option<Vec<usize>> = None;
        let mut saw_header = false;

        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "polar-code-spec v1" {
                saw_header = true;
                continue;
            }
            let (key, rest) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("malformed spec line `{line}`")))?;
            let rest = rest.trim();
            match key {
                "block_len" => block_len = Some(parse_num(rest, "block_len")?),
                "dimension" => dimension = Some(parse_num(rest, "dimension")?),
                "design_snr_db" => {
                    design_snr_db = Some(rest.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("invalid design_snr_db `{rest}`"))
                    })?)
                }
                "crc" => crc_name = Some(rest.to_string()),
                "frozen_values" => {
                    if rest != "zero" {
                        return Err(Error::Parse(format!(
                            "unsupported frozen_values `{rest}` (only `zero`)"
                        )));
                    }
                }
                "frozen_positions" => {
                    let mut list = Vec::new();
                    for tok in rest.split_whitespace() {
                        list.push(parse_num(tok, "frozen position")?);
                    }
                    frozen_positions = Some(list);
                }
                other => {
                    return Err(Error::Parse(format!("unknown spec key `{other}`")));
                }
            }
        }
        if !saw_header {
            return Err(Error::Parse("missing `polar-code-spec v1` header".into()));
        }
        let n = block_len.ok_or_else(|| Error::Parse("missing block_len".into()))?;
        let k = dimension.ok_or_else(|| Error::Parse("missing dimension".into()))?;
        let snr = design_snr_db.ok_or_else(|| Error::Parse("missing design_snr_db".into()))?;
        let positions =
            frozen_positions.ok_or_else(|| Error::Parse("missing frozen_positions".into()))?;
        log2_exact(n)?;
        let mut frozen = vec![false; n];
        for &p in &positions {
            if p >= n {
                return Err(Error::Parse(format!(
                    "frozen position {p} out of range for block length {n}"
                )));
            }
            if frozen[p] {
                return Err(Error::Parse(format!("duplicate frozen position {p}")));
            }
            frozen[p] = true;
        }
        if positions.len() != n - k {
            return Err(Error::Parse(format!(
                "expected {} frozen positions for ({n}, {k}), got {}",
                n - k,
                positions.len()
            )));
        }
        let crc = match crc_name.as_deref() {
            None => return Err(Error::Parse("missing crc line".into())),
            Some("none") => None,
            Some(name) => Some(crc::lookup(name)?),
        };
        Self::from_parts(frozen, snr, crc)
    }
}

fn parse_num(s: &str, what: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::Parse(format!("invalid {what} `{s}`")))
}

fn log2_exact(n: usize) -> Result<usize> {
    if n >= 2 && n.is_power_of_two() && n <= (1 << MAX_LOG_LEN) {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(Error::invalid(format!(
            "block length must be a power of two in 2..=2^{MAX_LOG_LEN}, got {n}"
        )))
    }
}
