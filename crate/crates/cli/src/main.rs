//! `polarsim` — command-line front end for the polar-code library.
//!
//! Subcommands:
//!   construct   build a code and write its spec file
//!   codec       encode/decode a single frame and report the outcome
//!   simulate    Monte Carlo error-rate sweep over an Eb/No grid
//!   spectrum    distance-spectrum estimation (list-based or exhaustive)
//!   bounds      analytical references (normal approximation, union bound)
//!
//! Simulation runs write a plain-text manifest next to the CSV; the
//! manifest doubles as a `--config` input so any run can be reproduced
//! exactly, with command-line flags taking precedence over config values.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use polar_scl::analysis::{
    crc_filter_spectrum, exhaustive_weight_spectrum, normal_approx_min_ebno, union_bound_curve,
    weight_spectrum_via_list,
};
use polar_scl::bits::BitVec;
use polar_scl::channel_sim::{
    bpsk_modulate, csv_header, ebno_to_sigma, record_to_csv_row, run_point, transmit_awgn,
    DecoderKind, FrameRng, SimConfig,
};
use polar_scl::crc;
use polar_scl::list_decoder::scl_decode_with_mode;
use polar_scl::polar_code::CodeSpec;
use polar_scl::sc_decoder::{sc_decode_with_mode, CombineMode};
use polar_scl::adaptive_decoder::adaptive_decode_with_mode;

#[derive(Parser)]
#[command(
    name = "polarsim",
    version,
    about = "Polar-code construction, CRC-aided list decoding, and channel simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code and write its spec file.
    Construct(ConstructArgs),
    /// Encode one frame, pass it through the channel, decode, and report.
    Codec(CodecArgs),
    /// Run a Monte Carlo error-rate sweep and emit CSV.
    Simulate(SimulateArgs),
    /// Estimate the code's weight spectrum and emit CSV.
    Spectrum(SpectrumArgs),
    /// Print analytical bounds for comparison against simulation.
    Bounds(BoundsArgs),
}

/// Flags shared by every subcommand that needs a code: either a spec file
/// or inline construction parameters.
#[derive(Args, Clone)]
struct SpecSource {
    /// Read the code from a spec file written by `construct`.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Code block length N (power of two); alternative to --spec.
    #[arg(long, value_name = "N")]
    block_len: Option<usize>,
    /// Code dimension K (information bits, CRC included).
    #[arg(long, value_name = "K")]
    dimension: Option<usize>,
    /// Design Eb/No in dB for the Bhattacharyya construction.
    #[arg(long, value_name = "DB")]
    design_snr_db: Option<f64>,
    /// CRC to bind into the information field: a registry name or "none".
    #[arg(long, value_name = "NAME")]
    crc: Option<String>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Destination spec file (stdout when omitted).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodecArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Payload bits, binary ("0101...") or hex ("0x1f2a"); random if omitted.
    #[arg(long, value_name = "BITS")]
    payload: Option<String>,
    /// Seed for the random payload and the channel noise.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Channel Eb/No in dB; omit for a noiseless pass.
    #[arg(long, value_name = "DB")]
    ebno: Option<f64>,
    /// Decoder: "sc", "scl", or "adaptive".
    #[arg(long, default_value = "scl")]
    decoder: String,
    /// List size for the scl decoder.
    #[arg(long, default_value_t = 8)]
    list_size: usize,
    /// Maximum list size for the adaptive decoder (power of two).
    #[arg(long, default_value_t = 8)]
    l_max: usize,
    /// Use min-sum combining instead of the exact formula.
    #[arg(long)]
    min_sum: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Decoder: "sc", "scl", or "adaptive".
    #[arg(long)]
    decoder: Option<String>,
    /// List size for the scl decoder.
    #[arg(long)]
    list_size: Option<usize>,
    /// Maximum list size for the adaptive decoder (power of two).
    #[arg(long)]
    l_max: Option<usize>,
    /// Eb/No grid in dB: "1.5", "1,2,3", or "start:step:stop" (inclusive).
    #[arg(long)]
    ebno: Option<String>,
    /// Frame budget per Eb/No point.
    #[arg(long)]
    max_frames: Option<u64>,
    /// Stop a point early once this many frame errors are collected.
    #[arg(long)]
    min_frame_errors: Option<u64>,
    /// Base seed; every (seed, Eb/No, frame) triple is independent.
    #[arg(long)]
    seed: Option<u64>,
    /// Use min-sum combining instead of the exact formula.
    #[arg(long)]
    min_sum: bool,
    /// Worker threads (0 = all cores); env POLARSIM_WORKERS when omitted.
    #[arg(long)]
    workers: Option<usize>,
    /// Destination CSV; a manifest is written alongside as <out>.manifest.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Load defaults from a manifest written by an earlier run.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SpecSource,
    /// "exhaustive" (K <= 24) or "list".
    #[arg(long, default_value = "exhaustive")]
    method: String,
    /// List size for the list method.
    #[arg(long, default_value_t = 1024)]
    list_size: usize,
    /// Additionally report how many minimum-weight information fields
    /// would pass this CRC if it were appended (registry name).
    #[arg(long, value_name = "NAME")]
    crc_filter: Option<String>,
    /// Destination CSV (stdout when omitted).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Print the normal-approximation minimum Eb/No for --rate,
    /// --block-len, --eps.
    #[arg(long)]
    normal_approx: bool,
    /// Emit a union-bound FER curve for --terms over the --ebno grid.
    #[arg(long)]
    union: bool,
    /// Code rate R in (0, 1].
    #[arg(long)]
    rate: Option<f64>,
    /// Block length N.
    #[arg(long)]
    block_len: Option<usize>,
    /// Target frame error rate for the normal approximation.
    #[arg(long)]
    eps: Option<f64>,
    /// Distance spectrum terms as "d:A,d:A", e.g. "16:11648,24:215040".
    #[arg(long)]
    terms: Option<String>,
    /// Eb/No grid in dB: "1.5", "1,2,3", or "start:step:stop".
    #[arg(long)]
    ebno: Option<String>,
    /// Destination CSV for the union-bound curve (stdout when omitted).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Codec(args) => cmd_codec(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

/// Resolves a CRC name: "none" (or empty) means no CRC.
fn resolve_crc(name: &str) -> Result<Option<crc::CrcSpec>> {
    if name.is_empty() || name == "none" {
        return Ok(None);
    }
    Ok(Some(crc::lookup(name).with_context(|| {
        format!("unknown CRC '{name}' (see `polarsim construct --help`)")
    })?))
}

/// Builds the code from --spec or from inline parameters.
fn resolve_spec(source: &SpecSource) -> Result<CodeSpec> {
    if let Some(path) = &source.spec {
        if source.block_len.is_some() || source.dimension.is_some() {
            bail!("--spec conflicts with --block-len/--dimension");
        }
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading spec file {}", path.display()))?;
        return CodeSpec::from_spec_text(&text)
            .with_context(|| format!("parsing spec file {}", path.display()));
    }
    let n = source
        .block_len
        .context("need --spec FILE or --block-len/--dimension")?;
    let k = source
        .dimension
        .context("--block-len requires --dimension")?;
    let snr = source.design_snr_db.unwrap_or(2.0);
    let crc_spec = resolve_crc(source.crc.as_deref().unwrap_or("none"))?;
    Ok(CodeSpec::new(n, k, snr, crc_spec)?)
}

/// Parses "1.5", "1,2,3", or "start:step:stop" into an Eb/No grid.
fn parse_ebno_grid(text: &str) -> Result<Vec<f64>> {
    let parse_one = |s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .with_context(|| format!("bad Eb/No value '{s}'"))?;
        if !v.is_finite() {
            bail!("Eb/No value '{s}' is not finite");
        }
        Ok(v)
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("range syntax is start:step:stop, got '{text}'");
        }
        let (start, step, stop) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step <= 0.0 {
            bail!("range step must be positive, got {step}");
        }
        let mut grid = Vec::new();
        let mut k = 0u32;
        // The stop point is inclusive up to a small slack so that grids
        // like 1.0:0.2:2.0 end exactly at 2.0 despite rounding.
        loop {
            let v = start + step * f64::from(k);
            if v > stop + 1e-9 {
                break;
            }
            grid.push(v);
            k += 1;
        }
        if grid.is_empty() {
            bail!("empty Eb/No range '{text}'");
        }
        Ok(grid)
    } else {
        text.split(',').map(parse_one).collect()
    }
}

fn write_or_stdout(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

fn spec_sha256(spec: &CodeSpec) -> String {
    let mut hasher = Sha256::new();
    hasher.update(spec.to_spec_text().as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn cmd_construct(args: ConstructArgs) -> Result<()> {
    let spec = resolve_spec(&args.source)?;
    eprintln!(
        "constructed ({}, {}) rate {:.4}, design {} dB, crc {}, sha256 {}",
        spec.block_len(),
        spec.dimension(),
        spec.rate(),
        spec.design_snr_db(),
        spec.crc().map_or("none", |c| c.name()),
        &spec_sha256(&spec)[..16],
    );
    write_or_stdout(args.out.as_deref(), &spec.to_spec_text())
}

fn cmd_codec(args: CodecArgs) -> Result<()> {
    let spec = resolve_spec(&args.source)?;
    let mode = if args.min_sum {
        CombineMode::MinSum
    } else {
        CombineMode::Exact
    };
    let ebno = args.ebno.unwrap_or(f64::INFINITY);
    let mut rng = FrameRng::for_frame(args.seed, ebno, 0);
    let payload = match &args.payload {
        Some(text) => {
            let bits = if let Some(hex) = text.strip_prefix("0x") {
                BitVec::parse_hex(hex)?
            } else {
                BitVec::parse_binary(text)?
            };
            if bits.len() != spec.payload_len() {
                bail!(
                    "payload must be exactly {} bits for this code, got {}",
                    spec.payload_len(),
                    bits.len()
                );
            }
            bits
        }
        None => BitVec::from_bits(
            &(0..spec.payload_len()).map(|_| rng.bit()).collect::<Vec<u8>>(),
        )?,
    };

    let u = spec.assemble_input(&payload)?;
    let x = spec.encode(&u)?;
    let sigma = ebno_to_sigma(ebno, spec.rate())?;
    let llrs = transmit_awgn(&bpsk_modulate(&x), sigma, &mut rng)?;

    let (decoded_payload, crc_note) = match args.decoder.as_str() {
        "sc" => {
            let u_hat = sc_decode_with_mode(&llrs, &spec, mode)?;
            let (p, crc_bits) = spec.extract_payload(&u_hat)?;
            let note = match spec.crc() {
                Some(c) => {
                    let framed = p.concat(&crc_bits);
                    if crc::crc_verify(&framed, c)? { "pass" } else { "FAIL" }
                }
                None => "n/a",
            };
            (p, note)
        }
        "scl" => {
            let res = scl_decode_with_mode(&llrs, &spec, args.list_size, mode)?;
            let (p, _) = spec.extract_payload(&res.chosen().u_hat)?;
            let note = match spec.crc() {
                Some(_) => {
                    if res.crc_passed { "pass" } else { "FAIL" }
                }
                None => "n/a",
            };
            (p, note)
        }
        "adaptive" => {
            let res = adaptive_decode_with_mode(&llrs, &spec, args.l_max, mode)?;
            eprintln!(
                "adaptive: attempts {}, final L {}, work units {}",
                res.attempts, res.final_l, res.work_units
            );
            let note = if res.crc_passed { "pass" } else { "FAIL" };
            (res.payload, note)
        }
        other => bail!("unknown decoder '{other}' (expected sc, scl, or adaptive)"),
    };

    let recovered = decoded_payload == payload;
    println!("payload  in: {payload}");
    println!("payload out: {decoded_payload}");
    println!("crc: {crc_note}");
    println!("payload recovered: {}", if recovered { "yes" } else { "no" });
    Ok(())
}

/// Everything `simulate` needs, after merging flags, config file, and
/// defaults (in that order of precedence).
struct SimSettings {
    spec: CodeSpec,
    spec_file: Option<PathBuf>,
    decoder: String,
    list_size: usize,
    l_max: usize,
    ebno_grid: Vec<f64>,
    max_frames: u64,
    min_frame_errors: u64,
    seed: u64,
    combine_mode: CombineMode,
    workers: usize,
}

fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(char::is_whitespace)
            .with_context(|| format!("config line without a value: '{line}'"))?;
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn config_parse<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| anyhow::anyhow!("config {key} '{raw}': {e}")),
    }
}

fn resolve_simulate(args: &SimulateArgs) -> Result<SimSettings> {
    let config = match &args.config {
        Some(path) => load_config(path)?,
        None => BTreeMap::new(),
    };

    // The code itself: flags first, then the config's spec_file or inline
    // construction keys.
    let mut source = args.source.clone();
    if source.spec.is_none() && source.block_len.is_none() {
        if let Some(file) = config.get("spec_file") {
            source.spec = Some(PathBuf::from(file));
        } else if config.contains_key("block_len") {
            source.block_len = config_parse(&config, "block_len")?;
            source.dimension = config_parse(&config, "dimension")?;
            source.design_snr_db = config_parse(&config, "design_snr_db")?;
            source.crc = config.get("crc").cloned();
        }
    }
    let spec = resolve_spec(&source)?;
    if let Some(expected) = config.get("spec_sha256") {
        let actual = spec_sha256(&spec);
        if &actual != expected {
            bail!(
                "spec hash mismatch: config expects {expected}, resolved code is {actual}; \
                 the code definition has changed since the manifest was written"
            );
        }
    }

    let decoder = args
        .decoder
        .clone()
        .or_else(|| config.get("decoder").cloned())
        .unwrap_or_else(|| "scl".to_string());
    let list_size = match args.list_size {
        Some(v) => v,
        None => config_parse(&config, "list_size")?.unwrap_or(8),
    };
    let l_max = match args.l_max {
        Some(v) => v,
        None => config_parse(&config, "l_max")?.unwrap_or(8),
    };
    let ebno_text = args
        .ebno
        .clone()
        .or_else(|| config.get("ebno").cloned())
        .context("need --ebno (or a config with an ebno entry)")?;
    let ebno_grid = parse_ebno_grid(&ebno_text)?;
    let max_frames = match args.max_frames {
        Some(v) => v,
        None => config_parse(&config, "max_frames")?.unwrap_or(100_000),
    };
    let min_frame_errors = match args.min_frame_errors {
        Some(v) => v,
        None => config_parse(&config, "min_frame_errors")?.unwrap_or(100),
    };
    let seed = match args.seed {
        Some(v) => v,
        None => config_parse(&config, "seed")?.unwrap_or(1),
    };
    let combine_mode = if args.min_sum {
        CombineMode::MinSum
    } else {
        match config.get("combine_mode").map(String::as_str) {
            Some("min-sum") => CombineMode::MinSum,
            _ => CombineMode::Exact,
        }
    };
    let workers = match args.workers {
        Some(v) => v,
        None => match std::env::var("POLARSIM_WORKERS") {
            Ok(raw) => raw
                .parse()
                .with_context(|| format!("POLARSIM_WORKERS '{raw}' is not a thread count"))?,
            Err(_) => config_parse(&config, "workers")?.unwrap_or(0),
        },
    };

    Ok(SimSettings {
        spec,
        spec_file: source.spec,
        decoder,
        list_size,
        l_max,
        ebno_grid,
        max_frames,
        min_frame_errors,
        seed,
        combine_mode,
        workers,
    })
}

fn manifest_text(s: &SimSettings) -> String {
    let mut out = String::from("# polarsim simulate manifest\n");
    match &s.spec_file {
        Some(path) => out.push_str(&format!("spec_file {}\n", path.display())),
        None => {
            out.push_str(&format!("block_len {}\n", s.spec.block_len()));
            out.push_str(&format!("dimension {}\n", s.spec.dimension()));
            out.push_str(&format!("design_snr_db {}\n", s.spec.design_snr_db()));
            out.push_str(&format!(
                "crc {}\n",
                s.spec.crc().map_or("none", |c| c.name())
            ));
        }
    }
    out.push_str(&format!("spec_sha256 {}\n", spec_sha256(&s.spec)));
    out.push_str(&format!("decoder {}\n", s.decoder));
    match s.decoder.as_str() {
        "scl" => out.push_str(&format!("list_size {}\n", s.list_size)),
        "adaptive" => out.push_str(&format!("l_max {}\n", s.l_max)),
        _ => {}
    }
    let grid: Vec<String> = s.ebno_grid.iter().map(|v| format!("{v}")).collect();
    out.push_str(&format!("ebno {}\n", grid.join(",")));
    out.push_str(&format!("max_frames {}\n", s.max_frames));
    out.push_str(&format!("min_frame_errors {}\n", s.min_frame_errors));
    out.push_str(&format!("seed {}\n", s.seed));
    out.push_str(&format!(
        "combine_mode {}\n",
        match s.combine_mode {
            CombineMode::Exact => "exact",
            CombineMode::MinSum => "min-sum",
        }
    ));
    out.push_str(&format!("workers {}\n", s.workers));
    out
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let settings = resolve_simulate(&args)?;
    let decoder = match settings.decoder.as_str() {
        "sc" => DecoderKind::Sc,
        "scl" => DecoderKind::Scl {
            list_size: settings.list_size,
        },
        "adaptive" => DecoderKind::Adaptive {
            l_max: settings.l_max,
        },
        other => bail!("unknown decoder '{other}' (expected sc, scl, or adaptive)"),
    };
    if matches!(decoder, DecoderKind::Adaptive { .. }) && settings.spec.crc().is_none() {
        bail!("the adaptive decoder needs a CRC to test candidates; bind one with --crc");
    }

    let cfg = SimConfig {
        spec: settings.spec.clone(),
        decoder,
        ebno_db_grid: settings.ebno_grid.clone(),
        max_frames: settings.max_frames,
        min_frame_errors: settings.min_frame_errors,
        seed: settings.seed,
        combine_mode: settings.combine_mode,
        workers: settings.workers,
    };

    // Write the manifest before simulating so an interrupted run still
    // documents what it was.
    if let Some(out) = &args.out {
        let mut manifest_path = out.as_os_str().to_owned();
        manifest_path.push(".manifest");
        fs::write(&manifest_path, manifest_text(&settings))
            .with_context(|| format!("writing manifest {manifest_path:?}"))?;
    }

    eprintln!(
        "simulating ({}, {}) crc {} with {} over {} Eb/No point(s)",
        cfg.spec.block_len(),
        cfg.spec.dimension(),
        cfg.spec.crc().map_or("none", |c| c.name()),
        settings.decoder,
        cfg.ebno_db_grid.len()
    );
    let mut csv = String::from(csv_header());
    csv.push('\n');
    for &ebno in &cfg.ebno_db_grid {
        let record = run_point(&cfg, ebno)?;
        eprintln!(
            "  {} dB: {} frames, {} errors, fer {:.3e}, mean final L {:.3}",
            ebno, record.frames, record.frame_errors, record.fer, record.mean_final_l
        );
        csv.push_str(&record_to_csv_row(&record));
        csv.push('\n');
    }
    write_or_stdout(args.out.as_deref(), &csv)
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<()> {
    let spec = resolve_spec(&args.source)?;
    let (spectrum, min_weight_messages, list_size) = match args.method.as_str() {
        "exhaustive" => {
            let rep = exhaustive_weight_spectrum(&spec)?;
            (rep.spectrum, rep.min_weight_messages, 0usize)
        }
        "list" => {
            let rep = weight_spectrum_via_list(&spec, args.list_size)?;
            eprintln!(
                "list spectrum: {} candidates, identity {}",
                rep.candidates,
                if rep.identity_holds { "ok" } else { "VIOLATED" }
            );
            (rep.spectrum, rep.min_weight_messages, rep.list_size)
        }
        other => bail!("unknown method '{other}' (expected exhaustive or list)"),
    };

    match spectrum.min_weight() {
        Some(w) => eprintln!(
            "minimum weight {} with multiplicity {} ({} nonzero weights seen)",
            w,
            spectrum.count(w),
            spectrum.iter().count()
        ),
        None => eprintln!("no nonzero codewords seen"),
    }

    if let Some(name) = &args.crc_filter {
        let crc_spec = resolve_crc(name)?.context("--crc-filter needs a CRC name, not 'none'")?;
        let report = crc_filter_spectrum(&min_weight_messages, &crc_spec)?;
        eprintln!(
            "crc filter {}: {}/{} minimum-weight information fields survive (fraction {})",
            name, report.survivors, report.total, report.surviving_fraction
        );
    }

    let mut csv = String::from("weight,count,list_size\n");
    for (weight, count) in spectrum.iter() {
        csv.push_str(&format!("{weight},{count},{list_size}\n"));
    }
    write_or_stdout(args.out.as_deref(), &csv)
}

fn cmd_bounds(args: BoundsArgs) -> Result<()> {
    match (args.normal_approx, args.union) {
        (true, false) => {
            let rate = args.rate.context("--normal-approx needs --rate")?;
            let n = args.block_len.context("--normal-approx needs --block-len")?;
            let eps = args.eps.context("--normal-approx needs --eps")?;
            let ebno = normal_approx_min_ebno(rate, n, eps)?;
            println!("normal approximation minimum Eb/No: {ebno:.4} dB");
            Ok(())
        }
        (false, true) => {
            let rate = args.rate.context("--union needs --rate")?;
            let terms_text = args.terms.as_deref().context("--union needs --terms d:A,d:A")?;
            let mut terms = Vec::new();
            for part in terms_text.split(',') {
                let (d, a) = part
                    .split_once(':')
                    .with_context(|| format!("term '{part}' is not d:A"))?;
                terms.push((
                    d.trim().parse::<usize>().with_context(|| format!("bad distance '{d}'"))?,
                    a.trim().parse::<u64>().with_context(|| format!("bad multiplicity '{a}'"))?,
                ));
            }
            let grid = parse_ebno_grid(args.ebno.as_deref().context("--union needs --ebno")?)?;
            let curve = union_bound_curve(&grid, rate, &terms)?;
            let mut csv = String::from("ebno_db,union_bound_fer\n");
            for point in curve {
                csv.push_str(&format!("{},{}\n", point.ebno_db, point.value));
            }
            write_or_stdout(args.out.as_deref(), &csv)
        }
        _ => bail!("pick exactly one of --normal-approx or --union"),
    }
}
