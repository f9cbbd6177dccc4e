//! Monte Carlo simulation over the BPSK/AWGN channel.
//!
//! Reproducibility contract: every frame draws from its own generator,
//! keyed by `(seed, Eb/No value, frame index)`. Results are therefore
//! independent of worker count, chunk scheduling, and of which other
//! Eb/No points run in the same sweep; re-running any subset of a sweep
//! reproduces its rows bit for bit. Frames are executed in fixed-size
//! chunks and the stopping rule is evaluated only at chunk boundaries, so
//! the set of simulated frames is itself deterministic.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adaptive_decoder::adaptive_decode_with_mode;
use crate::bits::BitVec;
use crate::crc;
use crate::error::{Error, Result};
use crate::list_decoder::scl_decode_with_mode;
use crate::polar_code::CodeSpec;
use crate::sc_decoder::{clamp_llr, log1p_exp, sc_decode_with_mode, CombineMode, LLR_CLAMP};

/// Frames simulated between evaluations of the stopping rule. Fixed so
/// that the set of frames run does not depend on the worker count.
const CHUNK_FRAMES: u64 = 1024;

/// Per-frame random generator with explicit keying.
pub struct FrameRng {
    rng: ChaCha8Rng,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl FrameRng {
    /// Derives the generator for one frame from the run seed, the Eb/No
    /// value (by its bit pattern), and the frame index.
    pub fn for_frame(seed: u64, ebno_db: f64, frame_index: u64) -> FrameRng {
        let mut state = seed;
        let mut key = [0u8; 32];
        let a = splitmix64(&mut state);
        state ^= ebno_db.to_bits();
        let b = splitmix64(&mut state);
        state ^= frame_index;
        let c = splitmix64(&mut state);
        let d = splitmix64(&mut state);
        key[0..8].copy_from_slice(&a.to_le_bytes());
        key[8..16].copy_from_slice(&b.to_le_bytes());
        key[16..24].copy_from_slice(&c.to_le_bytes());
        key[24..32].copy_from_slice(&d.to_le_bytes());
        FrameRng {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    /// One fair bit.
    pub fn bit(&mut self) -> u8 {
        (self.rng.next_u64() & 1) as u8
    }

    /// Uniform sample in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// A pair of independent standard normal samples (Box-Muller).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform(); // (0, 1], keeps ln finite
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        let (s, c) = theta.sin_cos();
        (r * c, r * s)
    }
}

/// Noise standard deviation for a given Eb/No (dB) and code rate, with
/// unit symbol energy: `sigma = sqrt(1 / (2 R 10^(ebno/10)))`.
pub fn ebno_to_sigma(ebno_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid(format!(
            "rate must lie in (0, 1], got {rate}"
        )));
    }
    if ebno_db.is_nan() {
        return Err(Error::invalid("Eb/No must not be NaN"));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt())
}

/// BPSK mapping: bit 0 -> +1.0, bit 1 -> -1.0.
pub fn bpsk_modulate(x: &BitVec) -> Vec<f64> {
    x.iter().map(|b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds AWGN of the given sigma and returns channel LLRs `2y / sigma^2`,
/// clamped to the decoder input range. `sigma = 0` models noiseless
/// reception and yields LLRs of exactly plus or minus the clamp.
pub fn transmit_awgn(symbols: &[f64], sigma: f64, rng: &mut FrameRng) -> Result<Vec<f64>> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::invalid(format!(
            "noise sigma must be nonnegative, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(symbols
            .iter()
            .map(|&s| if s >= 0.0 { LLR_CLAMP } else { -LLR_CLAMP })
            .collect());
    }
    let scale = 2.0 / (sigma * sigma);
    let mut llrs = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        let (g0, g1) = rng.normal_pair();
        llrs.push(clamp_llr((symbols[i] + sigma * g0) * scale));
        if i + 1 < symbols.len() {
            llrs.push(clamp_llr((symbols[i + 1] + sigma * g1) * scale));
        }
        i += 2;
    }
    Ok(llrs)
}

/// Which decoder the simulation drives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl { list_size: usize },
    Adaptive { l_max: usize },
}

/// Full description of a simulation run.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub spec: CodeSpec,
    pub decoder: DecoderKind,
    /// Eb/No grid in dB.
    pub ebno_db_grid: Vec<f64>,
    /// Hard cap on frames per point.
    pub max_frames: u64,
    /// Stop a point early once this many frame errors accumulate
    /// (checked at chunk boundaries).
    pub min_frame_errors: u64,
    pub seed: u64,
    pub combine_mode: CombineMode,
    /// Worker threads; 0 uses the global thread pool's default.
    pub workers: usize,
}

/// Accumulated statistics for one Eb/No point.
#[derive(Clone, Debug, PartialEq)]
pub struct SimRecord {
    pub ebno_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    /// 95% normal-approximation confidence interval on the FER.
    pub fer_ci: (f64, f64),
    /// Bit error rate over payload bits only.
    pub ber: f64,
    /// Mean list size of the final attempt (1 for SC, L for plain list).
    pub mean_final_l: f64,
    /// Mean total work, counting each attempt by its list size.
    pub mean_work_units: f64,
    /// Fraction of frames where even a maximum-likelihood decoder must
    /// have erred: the decoded codeword was strictly more likely than the
    /// transmitted one. A lower bound on any decoder's FER.
    pub ml_lower_bound_fer: f64,
    /// Frames where the CRC passed but the payload was wrong.
    pub undetected_errors: u64,
}

/// Header for the CSV emitted by `record_to_csv_row`.
pub fn csv_header() -> &'static str {
    "ebno_db,frames,frame_errors,fer,fer_ci_lo,fer_ci_hi,ber,mean_final_L,mean_work_units,ml_lb_fer,undetected_errors"
}

/// One CSV data row matching `csv_header`.
pub fn record_to_csv_row(r: &SimRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.ebno_db,
        r.frames,
        r.frame_errors,
        r.fer,
        r.fer_ci.0,
        r.fer_ci.1,
        r.ber,
        r.mean_final_l,
        r.mean_work_units,
        r.ml_lower_bound_fer,
        r.undetected_errors
    )
}

#[derive(Clone, Copy, Default)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
    final_l_sum: u64,
    work_units_sum: u64,
    ml_errors: u64,
    undetected: u64,
}

impl Tally {
    fn add(&mut self, o: &FrameOutcome) {
        self.frames += 1;
        self.frame_errors += o.frame_error as u64;
        self.bit_errors += o.bit_errors as u64;
        self.final_l_sum += o.final_l;
        self.work_units_sum += o.work_units;
        self.ml_errors += o.ml_error as u64;
        self.undetected += o.undetected as u64;
    }
}

struct FrameOutcome {
    frame_error: bool,
    bit_errors: u32,
    final_l: u64,
    work_units: u64,
    ml_error: bool,
    undetected: bool,
}

/// Negative log-likelihood of codeword `x` under channel LLRs, up to the
/// normalization common to all codewords.
fn codeword_nll(x: &BitVec, llrs: &[f64]) -> f64 {
    x.iter()
        .zip(llrs)
        .map(|(b, &l)| log1p_exp(if b == 1 { l } else { -l }))
        .sum()
}

fn run_frame(cfg: &SimConfig, sigma: f64, ebno_db: f64, frame_index: u64) -> Result<FrameOutcome> {
    let spec = &cfg.spec;
    let mut rng = FrameRng::for_frame(cfg.seed, ebno_db, frame_index);
    let payload = BitVec::from_bits(
        &(0..spec.payload_len())
            .map(|_| rng.bit())
            .collect::<Vec<u8>>(),
    )?;
    let u = spec.assemble_input(&payload)?;
    let x = spec.encode(&u)?;
    let symbols = bpsk_modulate(&x);
    let llrs = transmit_awgn(&symbols, sigma, &mut rng)?;

    let (u_hat, crc_passed, final_l, work_units) = match &cfg.decoder {
        DecoderKind::Sc => {
            let u_hat = sc_decode_with_mode(&llrs, spec, cfg.combine_mode)?;
            let passed = match spec.crc() {
                Some(c) => crc::crc_verify(&spec.extract_info(&u_hat)?, c)?,
                None => false,
            };
            (u_hat, passed, 1u64, 1u64)
        }
        DecoderKind::Scl { list_size } => {
            let res = scl_decode_with_mode(&llrs, spec, *list_size, cfg.combine_mode)?;
            (
                res.chosen().u_hat.clone(),
                res.crc_passed,
                *list_size as u64,
                *list_size as u64,
            )
        }
        DecoderKind::Adaptive { l_max } => {
            let res = adaptive_decode_with_mode(&llrs, spec, *l_max, cfg.combine_mode)?;
            let info = res.payload.concat(&res.crc_bits);
            (
                spec.place_info(&info)?,
                res.crc_passed,
                res.final_l as u64,
                res.work_units,
            )
        }
    };

    let (payload_hat, _) = spec.extract_payload(&u_hat)?;
    let bit_errors = payload.hamming_distance(&payload_hat)? as u32;
    let frame_error = bit_errors > 0;
    // ML lower bound: the frame defeats any decoder when the (wrong)
    // decoded codeword is strictly more likely than the transmitted one.
    let ml_error = frame_error && {
        let x_hat = spec.encode(&u_hat)?;
        codeword_nll(&x_hat, &llrs) < codeword_nll(&x, &llrs)
    };
    let undetected = frame_error && crc_passed;
    Ok(FrameOutcome {
        frame_error,
        bit_errors,
        final_l,
        work_units,
        ml_error,
        undetected,
    })
}

fn validate_config(cfg: &SimConfig) -> Result<()> {
    if cfg.max_frames == 0 {
        return Err(Error::invalid("max_frames must be at least 1"));
    }
    match &cfg.decoder {
        DecoderKind::Sc => {}
        DecoderKind::Scl { list_size } => {
            if *list_size == 0 {
                return Err(Error::invalid("list size must be at least 1"));
            }
        }
        DecoderKind::Adaptive { l_max } => {
            if *l_max == 0 || !l_max.is_power_of_two() {
                return Err(Error::invalid(
                    "adaptive maximum list size must be a power of two >= 1",
                ));
            }
            if cfg.spec.crc().is_none() {
                return Err(Error::CrcBinding(
                    "adaptive decoding requires a CRC-bound code spec".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Simulates one Eb/No point. Frames run in fixed chunks of 1024; within
/// a chunk frames are distributed over the worker pool, and per-frame
/// outcomes are folded in frame order, so the record is identical for any
/// worker count.
pub fn run_point(cfg: &SimConfig, ebno_db: f64) -> Result<SimRecord> {
    validate_config(cfg)?;
    let sigma = ebno_to_sigma(ebno_db, cfg.spec.rate())?;

    let body = || -> Result<Tally> {
        let mut tally = Tally::default();
        let mut next_frame = 0u64;
        while next_frame < cfg.max_frames {
            let chunk = CHUNK_FRAMES.min(cfg.max_frames - next_frame);
            let outcomes: Vec<Result<FrameOutcome>> = (next_frame..next_frame + chunk)
                .into_par_iter()
                .map(|i| run_frame(cfg, sigma, ebno_db, i))
                .collect();
            for o in outcomes {
                tally.add(&o?);
            }
            next_frame += chunk;
            if tally.frame_errors >= cfg.min_frame_errors {
                break;
            }
        }
        Ok(tally)
    };

    let tally = if cfg.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
        pool.install(body)?
    } else {
        body()?
    };

    let frames = tally.frames as f64;
    let fer = tally.frame_errors as f64 / frames;
    let half = 1.96 * (fer * (1.0 - fer) / frames).sqrt();
    Ok(SimRecord {
        ebno_db,
        frames: tally.frames,
        frame_errors: tally.frame_errors,
        fer,
        fer_ci: ((fer - half).max(0.0), (fer + half).min(1.0)),
        ber: tally.bit_errors as f64 / (frames * cfg.spec.payload_len() as f64),
        mean_final_l: tally.final_l_sum as f64 / frames,
        mean_work_units: tally.work_units_sum as f64 / frames,
        ml_lower_bound_fer: tally.ml_errors as f64 / frames,
        undetected_errors: tally.undetected,
    })
}

/// Simulates every point of the configured grid, in grid order. Each
/// point is independent of the others (per-frame keying), so a sweep's
/// rows equal the rows of single-point runs with the same seed.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<SimRecord>> {
    if cfg.ebno_db_grid.is_empty() {
        return Err(Error::invalid("Eb/No grid must not be empty"));
    }
    cfg.ebno_db_grid
        .iter()
        .map(|&e| run_point(cfg, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crc;

    fn base_config(decoder: DecoderKind, with_crc: bool) -> SimConfig {
        let crc8 = with_crc.then(|| crc::lookup("crc8").unwrap());
        SimConfig {
            spec: CodeSpec::new(64, 32, 2.0, crc8).unwrap(),
            decoder,
            ebno_db_grid: vec![2.0],
            max_frames: 2048,
            min_frame_errors: u64::MAX,
            seed: 7,
            combine_mode: CombineMode::Exact,
            workers: 0,
        }
    }

    #[test]
    fn sigma_examples() {
        // 0 dB at rate 1/2: sigma = 1. 0 dB at rate 1: sigma = 1/sqrt(2).
        assert!((ebno_to_sigma(0.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (ebno_to_sigma(0.0, 1.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15
        );
        // +10 dB quarters the noise power relative to 0 dB.
        let s0 = ebno_to_sigma(0.0, 0.5).unwrap();
        let s10 = ebno_to_sigma(10.0, 0.5).unwrap();
        assert!((s0 / s10 - 10f64.sqrt()).abs() < 1e-12);
        // Infinite Eb/No degenerates to a noiseless channel.
        assert_eq!(ebno_to_sigma(f64::INFINITY, 0.5).unwrap(), 0.0);
        assert!(ebno_to_sigma(0.0, 0.0).is_err());
        assert!(ebno_to_sigma(0.0, 1.5).is_err());
        assert!(ebno_to_sigma(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn modulation_maps_bits_to_antipodal_symbols() {
        let x = BitVec::parse_binary("0110").unwrap();
        assert_eq!(bpsk_modulate(&x), vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn noiseless_transmission_saturates_llrs() {
        let mut rng = FrameRng::for_frame(1, 0.0, 0);
        let llrs = transmit_awgn(&[1.0, -1.0, 1.0], 0.0, &mut rng).unwrap();
        assert_eq!(llrs, vec![LLR_CLAMP, -LLR_CLAMP, LLR_CLAMP]);
        assert!(transmit_awgn(&[1.0], -1.0, &mut rng).is_err());
    }

    #[test]
    fn llrs_are_clamped_at_high_snr() {
        let mut rng = FrameRng::for_frame(3, 12.0, 5);
        let sigma = 0.1;
        let llrs = transmit_awgn(&vec![1.0; 64], sigma, &mut rng).unwrap();
        for &l in &llrs {
            assert!(l.abs() <= LLR_CLAMP);
        }
        // With sigma = 0.1 an unclamped LLR would sit near 200.
        assert!(llrs.contains(&LLR_CLAMP));
    }

    #[test]
    fn frame_rng_is_deterministic_and_keyed() {
        let draw = |seed, ebno: f64, frame| {
            let mut r = FrameRng::for_frame(seed, ebno, frame);
            (0..8).map(|_| r.uniform()).collect::<Vec<f64>>()
        };
        assert_eq!(draw(1, 2.0, 3), draw(1, 2.0, 3));
        assert_ne!(draw(1, 2.0, 3), draw(2, 2.0, 3));
        assert_ne!(draw(1, 2.0, 3), draw(1, 2.5, 3));
        assert_ne!(draw(1, 2.0, 3), draw(1, 2.0, 4));
    }

    #[test]
    fn normal_samples_have_expected_moments() {
        let mut rng = FrameRng::for_frame(11, 1.0, 0);
        let n = 200_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n / 2 {
            let (a, b) = rng.normal_pair();
            sum += a + b;
            sumsq += a * a + b * b;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        // Three standard errors: se(mean) = 1/sqrt(n), se(var) ~ sqrt(2/n).
        assert!(mean.abs() < 3.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 3.0 * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn llr_sample_mean_matches_channel_parameter() {
        // For the all-zero codeword the LLR mean is 2/sigma^2 (before
        // clamping, which is negligible at this sigma).
        let sigma = 0.9f64;
        let mut rng = FrameRng::for_frame(5, 0.0, 1);
        let n = 100_000usize;
        let llrs = transmit_awgn(&vec![1.0; n], sigma, &mut rng).unwrap();
        let mean = llrs.iter().sum::<f64>() / n as f64;
        let expected = 2.0 / (sigma * sigma);
        let sd = 2.0 / sigma; // stdev of 2y/sigma^2 is 2/sigma
        assert!((mean - expected).abs() < 3.0 * sd / (n as f64).sqrt());
    }

    #[test]
    fn noiseless_point_has_zero_error_rate() {
        let mut cfg = base_config(DecoderKind::Adaptive { l_max: 8 }, true);
        cfg.max_frames = 256;
        let rec = run_point(&cfg, f64::INFINITY).unwrap();
        assert_eq!(rec.frames, 256);
        assert_eq!(rec.frame_errors, 0);
        assert_eq!(rec.fer, 0.0);
        assert_eq!(rec.ber, 0.0);
        assert_eq!(rec.mean_final_l, 1.0);
        assert_eq!(rec.undetected_errors, 0);
    }

    #[test]
    fn run_point_is_reproducible_bit_for_bit() {
        let cfg = base_config(DecoderKind::Scl { list_size: 4 }, true);
        let a = run_point(&cfg, 1.5).unwrap();
        let b = run_point(&cfg, 1.5).unwrap();
        assert_eq!(a, b);
        assert!(a.frame_errors > 0, "1.5 dB should produce some errors");
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut cfg = base_config(DecoderKind::Adaptive { l_max: 8 }, true);
        cfg.max_frames = 3000; // exercises a partial final chunk
        cfg.min_frame_errors = 40; // exercises the early-stop path
        cfg.workers = 1;
        let one = run_point(&cfg, 1.0).unwrap();
        cfg.workers = 3;
        let three = run_point(&cfg, 1.0).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn sweep_rows_equal_single_point_runs() {
        let mut cfg = base_config(DecoderKind::Scl { list_size: 2 }, true);
        cfg.max_frames = 1024;
        cfg.ebno_db_grid = vec![1.0, 2.0];
        let sweep = run_sweep(&cfg).unwrap();
        let solo_a = run_point(&cfg, 1.0).unwrap();
        let solo_b = run_point(&cfg, 2.0).unwrap();
        assert_eq!(sweep, vec![solo_a, solo_b]);

        cfg.ebno_db_grid.clear();
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn stopping_rule_hits_chunk_boundary() {
        let mut cfg = base_config(DecoderKind::Sc, false);
        cfg.max_frames = 1_000_000;
        cfg.min_frame_errors = 1;
        // 0 dB SC on a (64,32) code errs often; the first chunk must
        // already contain errors, and the run must stop right there.
        let rec = run_point(&cfg, 0.0).unwrap();
        assert_eq!(rec.frames, CHUNK_FRAMES);
        assert!(rec.frame_errors >= 1);
    }

    #[test]
    fn adaptive_requires_crc_in_simulation() {
        let cfg = base_config(DecoderKind::Adaptive { l_max: 8 }, false);
        assert!(run_point(&cfg, 2.0).is_err());
    }

    #[test]
    fn csv_row_shape_matches_header() {
        let cfg = base_config(DecoderKind::Sc, false);
        let rec = run_point(&cfg, 2.0).unwrap();
        let header_cols = csv_header().split(',').count();
        let row = record_to_csv_row(&rec);
        assert_eq!(row.split(',').count(), header_cols);
        assert_eq!(header_cols, 11);
        assert!(row.starts_with("2,"));
    }

    #[test]
    fn undetected_errors_require_a_crc_pass() {
        // Without a CRC the undetected counter must stay zero by
        // definition; with a CRC it is bounded by the frame errors.
        let cfg = base_config(DecoderKind::Sc, false);
        let rec = run_point(&cfg, 0.0).unwrap();
        assert_eq!(rec.undetected_errors, 0);

        let cfg = base_config(DecoderKind::Scl { list_size: 2 }, true);
        let rec = run_point(&cfg, 0.5).unwrap();
        assert!(rec.undetected_errors <= rec.frame_errors);
    }

    #[test]
    fn ml_lower_bound_never_exceeds_fer() {
        let cfg = base_config(DecoderKind::Scl { list_size: 8 }, true);
        let rec = run_point(&cfg, 1.0).unwrap();
        assert!(rec.ml_lower_bound_fer <= rec.fer);
        assert!(rec.frame_errors > 0);
    }
}
