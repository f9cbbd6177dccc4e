//! Bit-granular cyclic redundancy checks.
//!
//! The computation follows the usual parameter model (width, polynomial,
//! initial register, input/output reflection, final XOR) but operates on a
//! bit stream rather than bytes, so messages of any bit length are accepted.
//! With `reflect_in` set, the input stream is reversed in groups of eight
//! consecutive bits; a final partial group is reversed within its own
//! length. The checksum is emitted most-significant bit first.

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Parameters of one CRC variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrcSpec {
    name: String,
    width: usize,
    poly: u64,
    init: u64,
    reflect_in: bool,
    reflect_out: bool,
    xor_out: u64,
}

impl CrcSpec {
    /// Builds a CRC description. The width must lie in 1..=32 and the
    /// polynomial, initial value, and final XOR must fit in `width` bits
    /// (the polynomial's implicit leading 1 is not stored).
    pub fn new(
        name: &str,
        width: usize,
        poly: u64,
        init: u64,
        reflect_in: bool,
        reflect_out: bool,
        xor_out: u64,
    ) -> Result<Self> {
        if width == 0 || width > 32 {
            return Err(Error::invalid(format!(
                "CRC width must be in 1..=32, got {width}"
            )));
        }
        let mask = mask_for(width);
        if poly == 0 {
            return Err(Error::invalid("CRC polynomial must be nonzero"));
        }
        for (label, v) in [("poly", poly), ("init", init), ("xor_out", xor_out)] {
            if v & !mask != 0 {
                return Err(Error::invalid(format!(
                    "CRC {label} {v:#x} does not fit in {width} bits"
                )));
            }
        }
        Ok(CrcSpec {
            name: name.to_string(),
            width,
            poly,
            init,
            reflect_in,
            reflect_out,
            xor_out,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

fn mask_for(width: usize) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn reflect_value(v: u64, width: usize) -> u64 {
    let mut out = 0u64;
    for j in 0..width {
        if (v >> j) & 1 == 1 {
            out |= 1 << (width - 1 - j);
        }
    }
    out
}

/// Built-in CRC variants addressable by name.
pub fn registry() -> Vec<CrcSpec> {
    let make = |name, width, poly, init, ri, ro, xo| {
        CrcSpec::new(name, width, poly, init, ri, ro, xo).expect("registry entry is valid")
    };
    vec![
        make("crc8", 8, 0x07, 0x00, false, false, 0x00),
        make("crc16-ccitt-false", 16, 0x1021, 0xFFFF, false, false, 0x0000),
        make("crc16-arc", 16, 0x8005, 0x0000, true, true, 0x0000),
        make("crc16-dnp", 16, 0x3D65, 0x0000, true, true, 0xFFFF),
        make("crc16-xmodem", 16, 0x1021, 0x0000, false, false, 0x0000),
        make("crc16-cdma2000", 16, 0xC867, 0xFFFF, false, false, 0x0000),
        make("crc24", 24, 0x864CFB, 0xB704CE, false, false, 0x000000),
    ]
}

/// Looks up a registry entry by name.
pub fn lookup(name: &str) -> Result<CrcSpec> {
    registry()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCrc(name.to_string()))
}

/// Reverses a bit stream in groups of eight; a trailing partial group is
/// reversed within its own length.
fn reflect_groups(bits: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(bits.len());
    for chunk in bits.chunks(8) {
        out.extend(chunk.iter().rev().copied());
    }
    out
}

fn compute_register(bits: &[u8], spec: &CrcSpec) -> u64 {
    let mask = mask_for(spec.width);
    let mut reg = spec.init & mask;
    let top = spec.width - 1;
    for &bit in bits {
        let feedback = ((reg >> top) & 1) as u8 ^ bit;
        reg = (reg << 1) & mask;
        if feedback == 1 {
            reg ^= spec.poly;
        }
    }
    reg
}

/// Computes the checksum of a message (any bit length, including zero).
/// The returned vector holds `spec.width()` bits, most significant first.
pub fn crc_compute(message: &BitVec, spec: &CrcSpec) -> BitVec {
    let bits: Vec<u8>;
    let stream: &[u8] = if spec.reflect_in {
        bits = reflect_groups(message.as_slice());
        &bits
    } else {
        message.as_slice()
    };
    let mut reg = compute_register(stream, spec);
    if spec.reflect_out {
        reg = reflect_value(reg, spec.width);
    }
    reg ^= spec.xor_out;
    let mut out = BitVec::zeros(0);
    for j in (0..spec.width).rev() {
        out.push(((reg >> j) & 1) as u8);
    }
    out
}

/// Returns `payload || crc_compute(payload)`.
pub fn crc_append(payload: &BitVec, spec: &CrcSpec) -> BitVec {
    payload.concat(&crc_compute(payload, spec))
}

/// Splits a framed message into message and checksum parts and verifies
/// the checksum. Errors if the input is shorter than the CRC width.
pub fn crc_verify(framed: &BitVec, spec: &CrcSpec) -> Result<bool> {
    if framed.len() < spec.width {
        return Err(Error::LengthMismatch {
            expected: spec.width,
            got: framed.len(),
        });
    }
    let split = framed.len() - spec.width;
    let message = BitVec::from_raw(framed.as_slice()[..split].to_vec());
    let expected = crc_compute(&message, spec);
    Ok(expected.as_slice() == &framed.as_slice()[split..])
}
