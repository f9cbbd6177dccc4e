//! Polar-code codec and simulation library.
//!
//! The crate provides:
//!
//! - code construction (Bhattacharyya-parameter ranking) and encoding
//!   ([`polar_code`]);
//! - bit-granular CRC computation with a registry of common variants
//!   ([`crc`]);
//! - successive-cancellation (SC), SC list (SCL), and adaptive SCL
//!   decoding over LLRs ([`sc_decoder`], [`list_decoder`],
//!   [`adaptive_decoder`]);
//! - a reproducible BPSK/AWGN Monte Carlo harness ([`channel_sim`]);
//! - analytical references: Q-function bounds, BIAWGN capacity and
//!   dispersion, the finite-blocklength normal approximation, and weight
//!   spectrum enumeration ([`analysis`]).
//!
//! Conventions used throughout: bits are 0/1 `u8` values wrapped in
//! [`bits::BitVec`]; LLRs are `ln(P(y|0)/P(y|1))`, positive favoring bit
//! 0; input positions are 0-indexed; all frozen values are zero.
//!
//! One frame end to end:
//!
//! ```
//! use polar_scl::{CodeSpec, adaptive_decode, crc};
//! use polar_scl::channel_sim::{bpsk_modulate, ebno_to_sigma, transmit_awgn, FrameRng};
//!
//! let crc16 = crc::lookup("crc16-ccitt-false").unwrap();
//! let spec = CodeSpec::new(1024, 512, 2.0, Some(crc16)).unwrap();
//! let payload = polar_scl::BitVec::zeros(spec.payload_len());
//! let x = spec.encode(&spec.assemble_input(&payload).unwrap()).unwrap();
//!
//! let mut rng = FrameRng::for_frame(7, 1.5, 0);
//! let sigma = ebno_to_sigma(1.5, spec.rate()).unwrap();
//! let llrs = transmit_awgn(&bpsk_modulate(&x), sigma, &mut rng).unwrap();
//!
//! let out = adaptive_decode(&llrs, &spec, 32).unwrap();
//! assert!(out.crc_passed && out.payload == payload);
//! ```

pub mod adaptive_decoder;
pub mod analysis;
pub mod bits;
pub mod channel_sim;
pub mod crc;
pub mod error;
pub mod list_decoder;
pub mod polar_code;
pub mod sc_decoder;

pub use adaptive_decoder::{adaptive_decode, AdaptiveResult};
pub use bits::BitVec;
pub use channel_sim::{run_point, run_sweep, DecoderKind, SimConfig, SimRecord};
pub use crc::CrcSpec;
pub use error::{Error, Result};
pub use list_decoder::{scl_decode, Candidate, ListDecodeResult};
pub use polar_code::CodeSpec;
pub use sc_decoder::{sc_decode, CombineMode};
