//! Shared fixtures for the decoder benchmarks.

use grm_core::sim::{random_message, trial_rng};
use grm_core::{CodeParams, GrmCode, ReceptionState};
use rand::Rng;

pub use grm_core::DecoderKind;

/// The codes exercised by the benchmarks.
pub const BENCH_CODES: [(usize, usize, usize); 2] = [(2, 2, 4), (6, 2, 8)];

pub const ERASURE_FRACTIONS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

/// A code together with received words under i.i.d. erasures.
pub struct ErasureFixture {
    pub code: GrmCode,
    pub states: Vec<ReceptionState>,
}

impl ErasureFixture {
    pub fn new(
        params: CodeParams,
        erasure_fraction: f64,
        words: usize,
        seed: u64,
    ) -> grm_core::Result<Self> {
        let code = GrmCode::from_params(params)?;
        let states = (0..words as u64)
            .map(|i| {
                let mut rng = trial_rng(seed, i);
                let word = code.encode(&random_message(&code, &mut rng))?;
                let received: Vec<_> = word
                    .iter()
                    .map(|&v| (!rng.random_bool(erasure_fraction)).then_some(v))
                    .collect();
                ReceptionState::from_received(&code, &received)
            })
            .collect::<grm_core::Result<_>>()?;
        Ok(ErasureFixture { code, states })
    }

    /// Decodes every stored word once; returns the number of known symbols afterwards.
    pub fn decode_all(&self, kind: DecoderKind) -> usize {
        self.states
            .iter()
            .map(|s| {
                kind.decode(&self.code, s)
                    .expect("consistent fixture")
                    .final_state
                    .known_count()
            })
            .sum()
    }
}
