//! Successive-cancellation list (SCL) decoding with CRC-aided selection.
//!
//! The decoder runs the SC recursion over a population of paths. At each
//! unfrozen position every path forks into both decisions; once the
//! population exceeds the list size `L`, the `L` paths with the smallest
//! metrics survive. Frozen positions extend every path with the frozen
//! value and its metric penalty and never trigger pruning.
//!
//! Path metrics are negative log-likelihood penalties: with the exact rule
//! a decision `u` against decision LLR `λ` adds `ln(1 + e^{-(1-2u)λ})`, so
//! the metric of a complete path equals the negative log-likelihood of its
//! re-encoded codeword under the channel LLRs (up to the common
//! normalization), which makes metrics comparable across list sizes. The
//! approximate rule adds `|λ|` only when the decision contradicts the LLR
//! sign and is paired with min-sum combines.

use crate::bits::BitVec;
use crate::crc;
use crate::error::{Error, Result};
use crate::polar_code::{bit_reversal_permutation, CodeSpec};
use crate::sc_decoder::{f_combine, g_combine, hard_decision, log1p_exp, CombineMode};

/// Path-metric update rule.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MetricRule {
    /// `pm + ln(1 + e^{-(1-2u)λ})`.
    Exact,
    /// `pm + |λ|` iff the decision contradicts the LLR sign.
    Approx,
}

impl MetricRule {
    /// The metric rule conventionally paired with a combine mode.
    pub fn for_mode(mode: CombineMode) -> MetricRule {
        match mode {
            CombineMode::Exact => MetricRule::Exact,
            CombineMode::MinSum => MetricRule::Approx,
        }
    }
}

/// Applies one decision to a path metric.
pub fn path_metric_update(metric: f64, llr: f64, decision: u8, rule: MetricRule) -> f64 {
    match rule {
        MetricRule::Exact => {
            let signed = if decision == 1 { -llr } else { llr };
            metric + log1p_exp(-signed)
        }
        MetricRule::Approx => {
            if hard_decision(llr) != decision {
                metric + llr.abs()
            } else {
                metric
            }
        }
    }
}

/// One surviving decoding hypothesis.
#[derive(Clone, Debug)]
pub struct Candidate {
    /// Full length-`N` input estimate (frozen positions zero).
    pub u_hat: BitVec,
    /// Accumulated path metric (lower is more likely).
    pub metric: f64,
}

/// Output of a list decode: all survivors, metric-sorted ascending, plus
/// the selected candidate.
#[derive(Clone, Debug)]
pub struct ListDecodeResult {
    pub candidates: Vec<Candidate>,
    /// Index into `candidates` of the selected output.
    pub chosen_index: usize,
    /// True when a bound CRC selected the output; always false for codes
    /// without a CRC.
    pub crc_passed: bool,
}

impl ListDecodeResult {
    pub fn chosen(&self) -> &Candidate {
        &self.candidates[self.chosen_index]
    }
}

/// Selects the decoder output from metric-sorted candidates: the
/// lowest-metric candidate whose information field passes the bound CRC,
/// or the lowest-metric candidate overall when none passes (or when no
/// CRC is bound). Returns `(index, crc_passed)`.
pub fn select_output(candidates: &[Candidate], spec: &CodeSpec) -> Result<(usize, bool)> {
    if candidates.is_empty() {
        return Err(Error::invalid("cannot select from an empty candidate list"));
    }
    let Some(crc_spec) = spec.crc() else {
        return Ok((0, false));
    };
    for (i, cand) in candidates.iter().enumerate() {
        let info = spec.extract_info(&cand.u_hat)?;
        if crc::crc_verify(&info, crc_spec)? {
            return Ok((i, true));
        }
    }
    Ok((0, false))
}

/// List decoding with the exact combine and metric rules.
pub fn scl_decode(channel_llrs: &[f64], spec: &CodeSpec, list_size: usize) -> Result<ListDecodeResult> {
    scl_decode_with_mode(channel_llrs, spec, list_size, CombineMode::Exact)
}

/// List decoding with a selectable combine mode; the metric rule follows
/// the mode (exact combines with the exact metric, min-sum with the
/// sign-contradiction metric).
pub fn scl_decode_with_mode(
    channel_llrs: &[f64],
    spec: &CodeSpec,
    list_size: usize,
    mode: CombineMode,
) -> Result<ListDecodeResult> {
    let n = spec.block_len();
    if channel_llrs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: channel_llrs.len(),
        });
    }
    if list_size == 0 {
        return Err(Error::invalid("list size must be at least 1"));
    }
    let perm = bit_reversal_permutation(spec.log_len())?;
    let llrs: Vec<f64> = (0..n).map(|i| channel_llrs[perm[i]]).collect();
    let rule = MetricRule::for_mode(mode);

    let mut paths = vec![Path::new(n)];
    decode_node(
        &mut paths,
        0,
        n,
        &llrs,
        spec.frozen_mask(),
        mode,
        rule,
        list_size,
    );

    // Frozen-position penalties differ between paths, so re-sort the final
    // population; the sort is stable over the deterministic path order.
    paths.sort_by(|a, b| a.metric.total_cmp(&b.metric));
    let candidates: Vec<Candidate> = paths
        .into_iter()
        .map(|p| Candidate {
            u_hat: BitVec::from_raw(p.u),
            metric: p.metric,
        })
        .collect();
    let (chosen_index, crc_passed) = select_output(&candidates, spec)?;
    Ok(ListDecodeResult {
        candidates,
        chosen_index,
        crc_passed,
    })
}

/// One decoding path. The recursion keeps per-path stacks of intermediate
/// LLR vectors and pending left-subtree partial sums; `x_ret` carries the
/// re-encoded bits of the most recently finished subtree back to its
/// parent. Forking copies the whole state (eager copy semantics).
#[derive(Clone)]
struct Path {
    metric: f64,
    u: Vec<u8>,
    llr_stack: Vec<Vec<f64>>,
    left_x_stack: Vec<Vec<u8>>,
    x_ret: Vec<u8>,
}

impl Path {
    fn new(n: usize) -> Path {
        Path {
            metric: 0.0,
            u: vec![0u8; n],
            llr_stack: Vec::new(),
            left_x_stack: Vec::new(),
            x_ret: Vec::new(),
        }
    }
}

/// Decodes the subtree covering input positions `base .. base + size`.
/// Each path's LLR vector for this node sits on top of its `llr_stack`
/// (the root reads `root_llrs` instead); the vector is popped before
/// returning. On return every path's `x_ret` holds the subtree's
/// re-encoded bits.
#[allow(clippy::too_many_arguments)]
fn decode_node(
    paths: &mut Vec<Path>,
    base: usize,
    size: usize,
    root_llrs: &[f64],
    frozen: &[bool],
    mode: CombineMode,
    rule: MetricRule,
    list_size: usize,
) {
    if size == 1 {
        decode_leaf(paths, base, frozen[base], rule, list_size);
        return;
    }
    let half = size / 2;

    for p in paths.iter_mut() {
        let parent: &[f64] = p.llr_stack.last().map_or(root_llrs, Vec::as_slice);
        let f_llrs: Vec<f64> = (0..half)
            .map(|i| f_combine(parent[i], parent[i + half], mode))
            .collect();
        p.llr_stack.push(f_llrs);
    }
    decode_node(paths, base, half, root_llrs, frozen, mode, rule, list_size);

    for p in paths.iter_mut() {
        let x_left = std::mem::take(&mut p.x_ret);
        let parent: &[f64] = p.llr_stack.last().map_or(root_llrs, Vec::as_slice);
        let g_llrs: Vec<f64> = (0..half)
            .map(|i| g_combine(parent[i], parent[i + half], x_left[i]))
            .collect();
        p.left_x_stack.push(x_left);
        p.llr_stack.push(g_llrs);
    }
    decode_node(
        paths,
        base + half,
        half,
        root_llrs,
        frozen,
        mode,
        rule,
        list_size,
    );

    for p in paths.iter_mut() {
        let x_right = std::mem::take(&mut p.x_ret);
        let x_left = p.left_x_stack.pop().expect("left partial sums present");
        let mut x = Vec::with_capacity(size);
        for i in 0..half {
            x.push(x_left[i] ^ x_right[i]);
        }
        x.extend_from_slice(&x_right);
        p.x_ret = x;
        p.llr_stack.pop();
    }
}

/// Handles input position `idx`: frozen positions extend every path in
/// place; unfrozen positions fork every path into both decisions and then
/// prune once to the list size. Fork order is (path order, decision 0,
/// decision 1) and the pruning sort is stable, which fixes how metric
/// ties break.
fn decode_leaf(paths: &mut Vec<Path>, idx: usize, is_frozen: bool, rule: MetricRule, list_size: usize) {
    if is_frozen {
        for p in paths.iter_mut() {
            let llr = p.llr_stack.last().expect("leaf LLR present")[0];
            p.metric = path_metric_update(p.metric, llr, 0, rule);
            p.u[idx] = 0;
            p.x_ret = vec![0];
            p.llr_stack.pop();
        }
        return;
    }
    let mut next = Vec::with_capacity(2 * paths.len());
    for mut p in paths.drain(..) {
        let llr = p.llr_stack.last().expect("leaf LLR present")[0];
        p.llr_stack.pop();

        let mut forked = p.clone();
        p.metric = path_metric_update(p.metric, llr, 0, rule);
        p.u[idx] = 0;
        p.x_ret = vec![0];
        next.push(p);

        forked.metric = path_metric_update(forked.metric, llr, 1, rule);
        forked.u[idx] = 1;
        forked.x_ret = vec![1];
        next.push(forked);
    }
    if next.len() > list_size {
        next.sort_by(|a, b| a.metric.total_cmp(&b.metric));
        next.truncate(list_size);
    }
    *paths = next;
}
