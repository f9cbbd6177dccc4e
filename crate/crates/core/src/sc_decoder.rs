//! Successive-cancellation decoding over log-likelihood ratios.
//!
//! LLR convention: positive favors bit 0 (`llr = ln(P(y|0) / P(y|1))`).
//! Channel LLRs arrive in codeword order; because the generator includes
//! the bit-reversal permutation, the decoder first applies that
//! permutation and then runs the standard natural-order recursion with the
//! check (`f`) and variable (`g`) combines.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::polar_code::{bit_reversal_permutation, CodeSpec};

/// Channel LLR magnitudes are clamped to this value on entry to the
/// decoders; it also stands in for "noiseless" reception.
pub const LLR_CLAMP: f64 = 40.0;

/// Clamps an LLR to `[-LLR_CLAMP, LLR_CLAMP]`.
pub fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Check-node combine rule.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CombineMode {
    /// Exact boxplus, evaluated in a form stable for large magnitudes.
    Exact,
    /// Min-sum approximation `sign(a) sign(b) min(|a|, |b|)`.
    MinSum,
}

/// `ln(1 + e^x)` without overflow for large `|x|`.
pub fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Check-node (f) combine. The exact rule is the boxplus
/// `2 atanh(tanh(a/2) tanh(b/2))`, computed as
/// `sign(a) sign(b) min(|a|,|b|) + ln(1+e^{-|a+b|}) - ln(1+e^{-|a-b|})`,
/// which stays finite and accurate at clamped magnitudes where the naive
/// tanh form saturates.
pub fn f_combine(a: f64, b: f64, mode: CombineMode) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = a.abs().min(b.abs());
    match mode {
        CombineMode::MinSum => sign * m,
        CombineMode::Exact => {
            sign * m + log1p_exp(-(a + b).abs()) - log1p_exp(-(a - b).abs())
        }
    }
}

/// Variable-node (g) combine: `b + (1 - 2u) a` for partial-sum bit `u`.
pub fn g_combine(a: f64, b: f64, u: u8) -> f64 {
    if u == 1 {
        b - a
    } else {
        b + a
    }
}

/// Hard decision on an LLR; an exact tie resolves to 0.
pub fn hard_decision(llr: f64) -> u8 {
    if llr < 0.0 {
        1
    } else {
        0
    }
}

/// Successive-cancellation decoding with the exact combine rule. Returns
/// the full length-`N` input estimate (frozen positions are zero).
pub fn sc_decode(channel_llrs: &[f64], spec: &CodeSpec) -> Result<BitVec> {
    sc_decode_with_mode(channel_llrs, spec, CombineMode::Exact)
}

/// Successive-cancellation decoding with a selectable combine rule.
pub fn sc_decode_with_mode(
    channel_llrs: &[f64],
    spec: &CodeSpec,
    mode: CombineMode,
) -> Result<BitVec> {
    let n = spec.block_len();
    if channel_llrs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: channel_llrs.len(),
        });
    }
    let perm = bit_reversal_permutation(spec.log_len())?;
    let llrs: Vec<f64> = (0..n).map(|i| channel_llrs[perm[i]]).collect();
    let mut u = vec![0u8; n];
    sc_node(&llrs, spec.frozen_mask(), mode, &mut u);
    Ok(BitVec::from_raw(u))
}

/// Decodes one subtree; `llrs`, `frozen`, and `u_out` all have the subtree
/// length. Returns the re-encoded bits of the subtree (its partial sums),
/// which the caller feeds into its `g` stage.
fn sc_node(llrs: &[f64], frozen: &[bool], mode: CombineMode, u_out: &mut [u8]) -> Vec<u8> {
    let size = llrs.len();
    if size == 1 {
        let bit = if frozen[0] { 0 } else { hard_decision(llrs[0]) };
        u_out[0] = bit;
        return vec![bit];
    }
    let half = size / 2;
    let f_llrs: Vec<f64> = (0..half)
        .map(|i| f_combine(llrs[i], llrs[i + half], mode))
        .collect();
    let x_left = sc_node(&f_llrs, &frozen[..half], mode, &mut u_out[..half]);
    let g_llrs: Vec<f64> = (0..half)
        .map(|i| g_combine(llrs[i], llrs[i + half], x_left[i]))
        .collect();
    let x_right = sc_node(&g_llrs, &frozen[half..], mode, &mut u_out[half..]);
    let mut x = Vec::with_capacity(size);
    for i in 0..half {
        x.push(x_left[i] ^ x_right[i]);
    }
    x.extend_from_slice(&x_right);
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar_code::CodeSpec;

    #[test]
    fn clamp_behaviour() {
        assert_eq!(clamp_llr(1e9), LLR_CLAMP);
        assert_eq!(clamp_llr(-1e9), -LLR_CLAMP);
        assert_eq!(clamp_llr(3.25), 3.25);
    }

    #[test]
    fn f_combine_examples() {
        // Exact boxplus of (2, 3): numerically evaluated reference.
        let v = f_combine(2.0, 3.0, CombineMode::Exact);
        assert!((v - 1.693453660970895).abs() < 1e-12);
        // Min-sum keeps the smaller magnitude.
        assert_eq!(f_combine(2.0, 3.0, CombineMode::MinSum), 2.0);
        assert_eq!(f_combine(-2.0, 3.0, CombineMode::MinSum), -2.0);
        // An erased input forces an erased output.
        assert_eq!(f_combine(0.0, 5.0, CombineMode::Exact), 0.0);
        assert_eq!(f_combine(5.0, 0.0, CombineMode::Exact), 0.0);
    }

    #[test]
    fn f_combine_matches_tanh_form_at_small_magnitudes() {
        let mut state = 0x853C49E6748FEA9Bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let a = (next() - 0.5) * 16.0;
            let b = (next() - 0.5) * 16.0;
            let reference = 2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
            let v = f_combine(a, b, CombineMode::Exact);
            assert!(
                (v - reference).abs() < 1e-9,
                "f({a}, {b}) = {v}, tanh form {reference}"
            );
        }
    }

    #[test]
    fn f_combine_stays_finite_at_clamped_inputs() {
        // The naive tanh form returns infinity here because tanh(20)
        // rounds to 1.0 in f64.
        let v = f_combine(LLR_CLAMP, LLR_CLAMP, CombineMode::Exact);
        assert!(v.is_finite());
        assert!((v - (LLR_CLAMP - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn f_combine_symmetry_and_domination() {
        let mut state = 0xC0FFEE123456789u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2.0 * LLR_CLAMP
        };
        for _ in 0..5000 {
            let (a, b) = (next(), next());
            for mode in [CombineMode::Exact, CombineMode::MinSum] {
                let v = f_combine(a, b, mode);
                assert!((v - f_combine(b, a, mode)).abs() < 1e-12, "symmetry");
                assert!(v.abs() <= a.abs().min(b.abs()) + 1e-12, "domination");
                let sign_in = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
                assert!(v * sign_in >= -1e-12, "sign agreement");
            }
        }
    }

    #[test]
    fn g_combine_examples() {
        assert_eq!(g_combine(2.0, 3.0, 0), 5.0);
        assert_eq!(g_combine(2.0, 3.0, 1), 1.0);
        assert_eq!(g_combine(-4.0, 1.0, 1), 5.0);
    }

    #[test]
    fn hard_decision_tie_resolves_to_zero() {
        assert_eq!(hard_decision(0.0), 0);
        assert_eq!(hard_decision(1e-300), 0);
        assert_eq!(hard_decision(-1e-300), 1);
    }

    #[test]
    fn sc_decodes_noiseless_frames() {
        let mut state = 0xABCDEF0123456789u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for (n, k) in [(8, 4), (64, 32), (256, 200)] {
            let spec = CodeSpec::new(n, k, 2.0, None).unwrap();
            for _ in 0..20 {
                let info = BitVec::from_raw((0..k).map(|_| (next() & 1) as u8).collect());
                let u = spec.place_info(&info).unwrap();
                let x = spec.encode(&u).unwrap();
                let llrs: Vec<f64> = x
                    .iter()
                    .map(|b| if b == 0 { LLR_CLAMP } else { -LLR_CLAMP })
                    .collect();
                let u_hat = sc_decode(&llrs, &spec).unwrap();
                assert_eq!(u_hat, u);
            }
        }
    }

    #[test]
    fn sc_handles_all_zero_llrs() {
        // Fully erased channel: every decision ties and resolves to zero.
        let spec = CodeSpec::new(16, 8, 2.0, None).unwrap();
        let u_hat = sc_decode(&[0.0; 16], &spec).unwrap();
        assert_eq!(u_hat.weight(), 0);
    }

    #[test]
    fn sc_n2_hand_example() {
        // N = 2, both positions unfrozen, LLRs (5, -1) in codeword order.
        // u0 decodes from f(5, -1), which is negative -> bit 1; then u1
        // from g(5, -1, u0 = 1) = -1 - 5 = -6 -> bit 1.
        let spec = CodeSpec::new(2, 2, 2.0, None).unwrap();
        let u_hat = sc_decode(&[5.0, -1.0], &spec).unwrap();
        assert_eq!(u_hat.as_slice(), &[1, 1]);
        // Check against encode: u = (1,1) -> x = (0,1), consistent with
        // strongly positive then negative channel observations.
        let x = spec.encode(&u_hat).unwrap();
        assert_eq!(x.as_slice(), &[0, 1]);
    }

    #[test]
    fn sc_rejects_wrong_length() {
        let spec = CodeSpec::new(8, 4, 2.0, None).unwrap();
        assert!(sc_decode(&[0.0; 7], &spec).is_err());
    }

    #[test]
    fn min_sum_also_decodes_noiseless_frames() {
        let spec = CodeSpec::new(32, 16, 2.0, None).unwrap();
        let info = BitVec::parse_binary("1011001110001111").unwrap();
        let u = spec.place_info(&info).unwrap();
        let x = spec.encode(&u).unwrap();
        let llrs: Vec<f64> = x
            .iter()
            .map(|b| if b == 0 { LLR_CLAMP } else { -LLR_CLAMP })
            .collect();
        let u_hat = sc_decode_with_mode(&llrs, &spec, CombineMode::MinSum).unwrap();
        assert_eq!(u_hat, u);
    }
}
