//! Shared helpers for the integration tests: independent reference
//! implementations (oracles) that deliberately avoid the library's own
//! computation paths, plus a small deterministic RNG for test data.

#![allow(dead_code)] // not every test target uses every helper

use polar_scl::bits::BitVec;

/// Minimal xorshift64 generator for deterministic test inputs.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    pub fn bit(&mut self) -> u8 {
        (self.next_u64() & 1) as u8
    }

    pub fn bits(&mut self, len: usize) -> BitVec {
        BitVec::from_bits(&(0..len).map(|_| self.bit()).collect::<Vec<u8>>()).unwrap()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn reverse_low_bits(v: u64, width: usize) -> u64 {
    let mut out = 0u64;
    for j in 0..width {
        if (v >> j) & 1 == 1 {
            out |= 1 << (width - 1 - j);
        }
    }
    out
}

/// Independent CRC reference via explicit polynomial long division over
/// GF(2): divides `m(x) x^w + init(x) x^{len(m)}` by the generator and
/// returns the remainder (with reflection and final XOR applied). The
/// library's register-based implementation must agree with this for every
/// parameter set.
pub fn crc_long_division(
    message: &[u8],
    width: usize,
    poly: u64,
    init: u64,
    reflect_in: bool,
    reflect_out: bool,
    xor_out: u64,
) -> u64 {
    // Input reflection: reverse each group of eight bits; a final partial
    // group reverses within its own length.
    let mut stream: Vec<u8> = if reflect_in {
        message
            .chunks(8)
            .flat_map(|c| c.iter().rev().copied())
            .collect()
    } else {
        message.to_vec()
    };
    let mlen = stream.len();
    stream.resize(mlen + width, 0);
    // Fold the initial register value into the leading coefficients of
    // the augmented message.
    for (j, s) in stream.iter_mut().take(width).enumerate() {
        *s ^= ((init >> (width - 1 - j)) & 1) as u8;
    }
    // Divisor bits, including the implicit leading one.
    let mut divisor = Vec::with_capacity(width + 1);
    divisor.push(1u8);
    for j in (0..width).rev() {
        divisor.push(((poly >> j) & 1) as u8);
    }
    for i in 0..mlen {
        if stream[i] == 1 {
            for (j, &d) in divisor.iter().enumerate() {
                stream[i + j] ^= d;
            }
        }
    }
    let mut rem = 0u64;
    for j in 0..width {
        rem = (rem << 1) | stream[mlen + j] as u64;
    }
    if reflect_out {
        rem = reverse_low_bits(rem, width);
    }
    rem ^ xor_out
}

/// Reads a checksum BitVec (MSB first) back into an integer.
pub fn checksum_value(bits: &BitVec) -> u64 {
    bits.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
}

/// Independent per-codeword negative log-likelihood: the probability of
/// each received bit is computed through the logistic function rather
/// than the decoder's log1p-based penalty.
pub fn nll_by_bit_probabilities(x: &BitVec, llrs: &[f64]) -> f64 {
    x.iter()
        .zip(llrs)
        .map(|(b, &l)| {
            let signed = if b == 1 { -l } else { l };
            let p = 1.0 / (1.0 + (-signed).exp());
            -p.ln()
        })
        .sum()
}
