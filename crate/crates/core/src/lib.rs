//! Generalized Reed-Muller erasure codes over small finite fields.
//!
//! A GRM codeword evaluates an `m`-variate polynomial of degree at most `r`
//! at every point of `F_q^m`. Restricted to any affine line, the codeword is a
//! `(q, r+1)` Reed-Solomon word, so a single erased symbol can be rebuilt from
//! `r + 1` symbols on a line through it. The crate provides:
//!
//! * [`gf`]: table-driven `F_q` arithmetic;
//! * [`geometry`]: canonical enumeration of points and lines of `F_q^m`;
//! * [`code`]: code parameters, encoding, generator and parity-check matrices;
//! * [`rsline`]: Reed-Solomon erasure decoding along one line;
//! * [`decoders`]: local (LD), progressive local (PLD) and Gaussian-elimination (GE) decoders;
//! * [`sim`]: block erasure channel Monte-Carlo curves and paired runtime benchmarks;
//! * [`symbols`]: the text formats for messages and (partially) received words.

pub mod code;
pub mod decoders;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod rsline;
pub mod sim;
pub mod symbols;

pub use code::{CodeParams, GrmCode, MonomialBasis};
pub use decoders::{
    decode_ge, decode_ld, decode_ld_then_ge, decode_pld, decode_pld_state, DecodeReport,
    DecoderKind, ProgressiveDecoder, ReceptionState, SymbolState,
};
pub use error::{Error, Result};
pub use geometry::{Direction, Line, LineIndex, Point};
pub use gf::{FieldElement, FieldSpec};
pub use linalg::Matrix;
pub use rsline::{interpolate_line, parity_sum_decode, LineView};
pub use sim::{
    BenchConfig, BenchRow, CurvePoint, ReceptionModel, ThresholdSummary, TrialConfig, TrialRecord,
};
