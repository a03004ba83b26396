//! Erasure decoders for GRM codewords.
//!
//! * [`decode_ld`]: exhaustive local decoding. Sweeps every line, fills any
//!   line holding at least `r + 1` known symbols by Reed-Solomon
//!   interpolation, and repeats until a sweep makes no progress.
//! * [`ProgressiveDecoder`] / [`decode_pld`]: the same closure computed on the
//!   fly, one arriving symbol at a time, touching only the lines through
//!   newly known symbols.
//! * [`decode_ge`]: maximum-likelihood decoding by Gaussian elimination on
//!   the erased columns of the parity-check matrix.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::code::GrmCode;
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::linalg::Matrix;
use crate::rsline::{interpolate_into, parity_missing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolState {
    Received(FieldElement),
    Recovered(FieldElement),
    Erased,
}

impl SymbolState {
    #[inline]
    pub fn value(self) -> Option<FieldElement> {
        match self {
            SymbolState::Received(v) | SymbolState::Recovered(v) => Some(v),
            SymbolState::Erased => None,
        }
    }

    #[inline]
    pub fn is_known(self) -> bool {
        !matches!(self, SymbolState::Erased)
    }
}

/// Per-position status of a received word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceptionState {
    symbols: Vec<SymbolState>,
    info_mask: Arc<[bool]>,
    known_count: usize,
    info_known_count: usize,
}

impl ReceptionState {
    /// Everything erased.
    pub fn erased(code: &GrmCode) -> ReceptionState {
        ReceptionState {
            symbols: vec![SymbolState::Erased; code.params().n],
            info_mask: code.info_mask().clone(),
            known_count: 0,
            info_known_count: 0,
        }
    }

    /// `Some(v)` entries are received, `None` entries erased.
    pub fn from_received(
        code: &GrmCode,
        received: &[Option<FieldElement>],
    ) -> Result<ReceptionState> {
        let n = code.params().n;
        if received.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: received.len(),
            });
        }
        let mut state = ReceptionState::erased(code);
        for (pos, v) in received.iter().enumerate() {
            if let Some(v) = v {
                state.receive(pos, *v)?;
            }
        }
        Ok(state)
    }

    /// Receives `codeword[p]` for each `p` in `positions`.
    pub fn from_positions(
        code: &GrmCode,
        codeword: &[FieldElement],
        positions: &[usize],
    ) -> Result<ReceptionState> {
        let mut state = ReceptionState::erased(code);
        for &p in positions {
            let v = *codeword
                .get(p)
                .ok_or_else(|| Error::Parameter(format!("position {p} out of range")))?;
            state.receive(p, v)?;
        }
        Ok(state)
    }

    /// Marks `pos` as received. Errors if it is out of range or already received.
    pub fn receive(&mut self, pos: usize, value: FieldElement) -> Result<()> {
        match self.symbols.get(pos) {
            None => Err(Error::Parameter(format!("position {pos} out of range"))),
            Some(SymbolState::Received(_)) => {
                Err(Error::Parameter(format!("position {pos} received twice")))
            }
            Some(SymbolState::Recovered(v)) => {
                if *v != value {
                    return Err(Error::Integrity(format!(
                        "received value at {pos} disagrees with recovered value"
                    )));
                }
                self.symbols[pos] = SymbolState::Received(value);
                Ok(())
            }
            Some(SymbolState::Erased) => {
                self.symbols[pos] = SymbolState::Received(value);
                self.mark_known(pos);
                Ok(())
            }
        }
    }

    fn recover(&mut self, pos: usize, value: FieldElement) {
        debug_assert!(!self.symbols[pos].is_known());
        self.symbols[pos] = SymbolState::Recovered(value);
        self.mark_known(pos);
    }

    fn mark_known(&mut self, pos: usize) {
        self.known_count += 1;
        if self.info_mask[pos] {
            self.info_known_count += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn get(&self, pos: usize) -> SymbolState {
        self.symbols[pos]
    }

    #[inline]
    pub fn value(&self, pos: usize) -> Option<FieldElement> {
        self.symbols[pos].value()
    }

    #[inline]
    pub fn is_known(&self, pos: usize) -> bool {
        self.symbols[pos].is_known()
    }

    pub fn symbols(&self) -> &[SymbolState] {
        &self.symbols
    }

    pub fn values(&self) -> Vec<Option<FieldElement>> {
        self.symbols.iter().map(|s| s.value()).collect()
    }

    pub fn known_count(&self) -> usize {
        self.known_count
    }

    pub fn info_known_count(&self) -> usize {
        self.info_known_count
    }

    pub fn info_len(&self) -> usize {
        self.info_mask.iter().filter(|&&b| b).count()
    }

    pub fn recovered_count(&self) -> usize {
        self.symbols
            .iter()
            .filter(|s| matches!(s, SymbolState::Recovered(_)))
            .count()
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| !self.is_known(p)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.known_count == self.symbols.len()
    }
}

/// Outcome of one decoder invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeReport {
    pub final_state: ReceptionState,
    /// Recovered entries in `final_state`.
    pub recovered_count: usize,
    /// All `n` symbols known.
    pub full_decode: bool,
    /// All `k` information symbols known.
    pub info_decode: bool,
    /// Reed-Solomon line decodes performed (LD, PLD).
    pub line_decode_ops: usize,
    /// Rank of the erased-column system (GE).
    pub rref_pivots: usize,
    pub elapsed: Duration,
}

impl DecodeReport {
    fn new(
        final_state: ReceptionState,
        line_decode_ops: usize,
        rref_pivots: usize,
        elapsed: Duration,
    ) -> Self {
        let info_len = final_state.info_len();
        DecodeReport {
            recovered_count: final_state.recovered_count(),
            full_decode: final_state.is_complete(),
            info_decode: final_state.info_known_count() == info_len,
            line_decode_ops,
            rref_pivots,
            elapsed,
            final_state,
        }
    }
}

/// Reusable buffers for single-line decodes.
#[derive(Debug, Clone)]
struct LineScratch {
    gamma: Vec<FieldElement>,
    values: Vec<Option<FieldElement>>,
    full: Vec<FieldElement>,
}

impl LineScratch {
    fn new(code: &GrmCode) -> Self {
        let q = code.params().q;
        LineScratch {
            gamma: code.field().elements().collect(),
            values: vec![None; q],
            full: vec![FieldElement::ZERO; q],
        }
    }

    /// Decodes the erasures on one line in place, calling `on_recover` for each recovered position.
    fn decode(
        &mut self,
        code: &GrmCode,
        state: &mut ReceptionState,
        points: &[usize],
        known: usize,
        mut on_recover: impl FnMut(usize),
    ) -> Result<()> {
        let field = code.field();
        let q = field.order();
        let r = code.params().r;
        for (slot, &p) in self.values.iter_mut().zip(points) {
            *slot = state.value(p);
        }
        if r + 2 == q && known + 1 == q {
            let missing = parity_missing(field, &self.values);
            for (f, v) in self.full.iter_mut().zip(&self.values) {
                *f = v.unwrap_or(missing);
            }
        } else {
            interpolate_into(field, &self.gamma, &self.values, r, &mut self.full)?;
        }
        for (i, &p) in points.iter().enumerate() {
            if self.values[i].is_none() {
                state.recover(p, self.full[i]);
                on_recover(p);
            }
        }
        Ok(())
    }
}

/// Exhaustive local decoding to the line-closure fixpoint.
pub fn decode_ld(code: &GrmCode, state: &ReceptionState) -> Result<DecodeReport> {
    let start = Instant::now();
    let mut state = state.clone();
    let (q, r) = (code.params().q, code.params().r);
    let mut ops = 0;
    let mut scratch = LineScratch::new(code);
    loop {
        let mut progress = false;
        for line in code.lines().lines() {
            if state.is_complete() {
                break;
            }
            let known = line.points.iter().filter(|&&p| state.is_known(p)).count();
            if known > r && known < q {
                scratch.decode(code, &mut state, &line.points, known, |_| {})?;
                ops += 1;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    Ok(DecodeReport::new(state, ops, 0, start.elapsed()))
}

/// Event-driven local decoder fed one symbol at a time.
#[derive(Debug, Clone)]
pub struct ProgressiveDecoder<'a> {
    code: &'a GrmCode,
    state: ReceptionState,
    /// known symbols per line id
    line_known: Vec<u32>,
    queue: VecDeque<usize>,
    scratch: LineScratch,
    recovered: Vec<usize>,
    line_decode_ops: usize,
    elapsed: Duration,
}

impl<'a> ProgressiveDecoder<'a> {
    pub fn new(code: &'a GrmCode) -> Self {
        ProgressiveDecoder {
            code,
            state: ReceptionState::erased(code),
            line_known: vec![0; code.lines().lines().len()],
            queue: VecDeque::with_capacity(code.params().n),
            scratch: LineScratch::new(code),
            recovered: Vec::with_capacity(code.params().q),
            line_decode_ops: 0,
            elapsed: Duration::ZERO,
        }
    }

    fn became_known(&mut self, pos: usize) {
        for &id in self.code.lines().incident(pos) {
            self.line_known[id as usize] += 1;
        }
        self.queue.push_back(pos);
    }

    /// Accepts one arriving symbol and runs the recovery cascade it triggers.
    pub fn receive(&mut self, pos: usize, value: FieldElement) -> Result<()> {
        let start = Instant::now();
        let out = self.receive_untimed(pos, value);
        self.elapsed += start.elapsed();
        out
    }

    fn receive_untimed(&mut self, pos: usize, value: FieldElement) -> Result<()> {
        let was_known = pos < self.state.len() && self.state.is_known(pos);
        self.state.receive(pos, value)?;
        if !was_known {
            self.became_known(pos);
        }
        let code = self.code;
        let (q, r) = (code.params().q as u32, code.params().r as u32);
        while let Some(sym) = self.queue.pop_front() {
            for &id in code.lines().incident(sym) {
                let known = self.line_known[id as usize];
                if known > r && known < q {
                    let points = &code.lines().line(id as usize).points;
                    let recovered = &mut self.recovered;
                    recovered.clear();
                    self.scratch
                        .decode(code, &mut self.state, points, known as usize, |p| {
                            recovered.push(p)
                        })?;
                    self.line_decode_ops += 1;
                    for i in 0..self.recovered.len() {
                        self.became_known(self.recovered[i]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn state(&self) -> &ReceptionState {
        &self.state
    }

    pub fn report(&self) -> DecodeReport {
        DecodeReport::new(self.state.clone(), self.line_decode_ops, 0, self.elapsed)
    }

    pub fn into_report(self) -> DecodeReport {
        DecodeReport::new(self.state, self.line_decode_ops, 0, self.elapsed)
    }
}

/// Progressive local decoding over an arrival sequence; one cumulative report per arrival.
pub fn decode_pld(code: &GrmCode, arrivals: &[(usize, FieldElement)]) -> Result<Vec<DecodeReport>> {
    let mut seen = vec![false; code.params().n];
    let mut decoder = ProgressiveDecoder::new(code);
    let mut reports = Vec::with_capacity(arrivals.len());
    for &(pos, value) in arrivals {
        match seen.get_mut(pos) {
            None => return Err(Error::Parameter(format!("position {pos} out of range"))),
            Some(true) => return Err(Error::Parameter(format!("position {pos} arrives twice"))),
            Some(s) => *s = true,
        }
        decoder.receive(pos, value)?;
        reports.push(decoder.report());
    }
    Ok(reports)
}

/// Runs PLD over the known symbols of `state` in position order and returns only the final report.
pub fn decode_pld_state(code: &GrmCode, state: &ReceptionState) -> Result<DecodeReport> {
    if state.len() != code.params().n {
        return Err(Error::LengthMismatch {
            expected: code.params().n,
            got: state.len(),
        });
    }
    let start = Instant::now();
    let mut decoder = ProgressiveDecoder::new(code);
    for (pos, sym) in state.symbols().iter().enumerate() {
        if let Some(v) = sym.value() {
            decoder.receive_untimed(pos, v)?;
        }
    }
    decoder.elapsed = start.elapsed();
    Ok(decoder.into_report())
}

/// Maximum-likelihood erasure decoding: solves `H_E y_E = -H_K y_K` by RREF
/// and fills every erased symbol whose row reduces to a unit vector.
pub fn decode_ge(code: &GrmCode, state: &ReceptionState) -> Result<DecodeReport> {
    let start = Instant::now();
    let n = code.params().n;
    if state.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: state.len(),
        });
    }
    let field = code.field();
    let h = code.parity_check_natural();
    let rows = h.rows();
    let mut state = state.clone();
    let erased = state.erased_positions();
    if erased.is_empty() {
        return Ok(DecodeReport::new(state, 0, 0, start.elapsed()));
    }

    let e = erased.len();
    let mut system = Matrix::zeros(rows, e + 1);
    for i in 0..rows {
        let hrow = h.row(i);
        let mut rhs = FieldElement::ZERO;
        for (j, &hij) in hrow.iter().enumerate() {
            if let Some(y) = state.value(j) {
                rhs = field.mul_add(hij, y, rhs);
            }
        }
        for (c, &j) in erased.iter().enumerate() {
            system.set(i, c, hrow[j]);
        }
        system.set(i, e, field.neg(rhs));
    }

    let pivots = system.rref(field, e);
    for i in pivots.len()..rows {
        if !system.get(i, e).is_zero() {
            return Err(Error::Integrity(
                "received symbols violate a parity check".into(),
            ));
        }
    }
    for (row, &col) in pivots.iter().enumerate() {
        let determined = (col + 1..e).all(|c| system.get(row, c).is_zero());
        if determined {
            state.recover(erased[col], system.get(row, e));
        }
    }
    Ok(DecodeReport::new(state, 0, pivots.len(), start.elapsed()))
}

/// LD to its fixpoint, then GE on whatever remains erased.
pub fn decode_ld_then_ge(code: &GrmCode, state: &ReceptionState) -> Result<DecodeReport> {
    let ld = decode_ld(code, state)?;
    if ld.full_decode {
        return Ok(ld);
    }
    let ge = decode_ge(code, &ld.final_state)?;
    Ok(DecodeReport::new(
        ge.final_state,
        ld.line_decode_ops,
        ge.rref_pivots,
        ld.elapsed + ge.elapsed,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    Ld,
    Pld,
    Ge,
    #[serde(alias = "ld-ge")]
    LdThenGe,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::Ld,
        DecoderKind::Pld,
        DecoderKind::Ge,
        DecoderKind::LdThenGe,
    ];

    pub fn decode(self, code: &GrmCode, state: &ReceptionState) -> Result<DecodeReport> {
        match self {
            DecoderKind::Ld => decode_ld(code, state),
            DecoderKind::Pld => decode_pld_state(code, state),
            DecoderKind::Ge => decode_ge(code, state),
            DecoderKind::LdThenGe => decode_ld_then_ge(code, state),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Ld => "ld",
            DecoderKind::Pld => "pld",
            DecoderKind::Ge => "ge",
            DecoderKind::LdThenGe => "ld-ge",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ld" => Ok(DecoderKind::Ld),
            "pld" => Ok(DecoderKind::Pld),
            "ge" => Ok(DecoderKind::Ge),
            "ld-ge" | "ld_then_ge" => Ok(DecoderKind::LdThenGe),
            other => Err(Error::Parameter(format!("unknown decoder '{other}'"))),
        }
    }
}
