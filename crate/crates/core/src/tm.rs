//! Deterministic tape-bounded Turing machines: the tape is the input plus a
//! fixed number of blanks between end markers, and the executor detects
//! non-halting runs by configuration repetition.

use std::collections::{BTreeSet, HashSet};

use crate::error::TmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn glyph(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Stay => "S",
            Move::Right => "R",
        }
    }
}

/// A `bound`-bounded deterministic machine. Symbols and states are interned;
/// `delta` is a dense table indexed by `state * symbol_count + symbol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedTm {
    pub bound: usize,
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub blank: usize,
    pub left_marker: usize,
    pub right_marker: usize,
    /// Indices into `symbols`.
    pub input_alphabet: Vec<usize>,
    pub start: usize,
    pub delta: Vec<(usize, usize, Move)>,
    pub accepting: BTreeSet<usize>,
    pub rejecting: BTreeSet<usize>,
}

impl BoundedTm {
    pub fn validate(&self) -> Result<(), TmError> {
        let q = self.states.len();
        let s = self.symbols.len();
        if self.delta.len() != q * s {
            return Err(TmError::MissingTransition {
                state: "?".into(),
                symbol: "?".into(),
            });
        }
        for x in &self.accepting {
            if self.rejecting.contains(x) {
                return Err(TmError::AcceptRejectOverlap(self.states[*x].clone()));
            }
        }
        for qi in 0..q {
            let (_, sym, mv) = self.delta[qi * s + self.left_marker];
            if sym != self.left_marker || mv == Move::Left {
                return Err(TmError::BadLeftMarkerMove {
                    state: self.states[qi].clone(),
                });
            }
            let (_, sym, mv) = self.delta[qi * s + self.right_marker];
            if sym != self.right_marker || mv == Move::Right {
                return Err(TmError::BadRightMarkerMove {
                    state: self.states[qi].clone(),
                });
            }
        }
        for &i in &self.input_alphabet {
            if i == self.blank || i == self.left_marker || i == self.right_marker {
                return Err(TmError::BadInputSymbol(self.symbols[i].clone()));
            }
        }
        Ok(())
    }

    pub fn step_of(&self, state: usize, symbol: usize) -> (usize, usize, Move) {
        self.delta[state * self.symbols.len() + symbol]
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn is_halting(&self, state: usize) -> bool {
        self.accepting.contains(&state) || self.rejecting.contains(&state)
    }

    /// Initial configuration on `word`: left marker, the word, `bound`
    /// blanks, right marker; head on the first cell after the left marker.
    pub fn initial_config(&self, word: &[usize]) -> TmConfig {
        let mut tape = Vec::with_capacity(word.len() + self.bound + 2);
        tape.push(self.left_marker);
        tape.extend_from_slice(word);
        tape.extend(std::iter::repeat(self.blank).take(self.bound));
        tape.push(self.right_marker);
        TmConfig {
            tape,
            head: 1,
            state: self.start,
        }
    }
}

/// Tape contents between the markers, head position, current state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmConfig {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TmOutcome {
    Accept(u64),
    Reject(u64),
    /// A configuration repeated without entering a halting state.
    NonHalting(u64),
}

impl TmOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, TmOutcome::Accept(_))
    }
    pub fn is_reject(&self) -> bool {
        matches!(self, TmOutcome::Reject(_))
    }
}

/// One transition applied to a configuration; halting configurations are
/// fixed points.
pub fn step_config(tm: &BoundedTm, c: &TmConfig) -> TmConfig {
    if tm.is_halting(c.state) {
        return c.clone();
    }
    let (q, write, mv) = tm.step_of(c.state, c.tape[c.head]);
    let mut tape = c.tape.clone();
    tape[c.head] = write;
    let head = match mv {
        Move::Left => c.head - 1,
        Move::Stay => c.head,
        Move::Right => c.head + 1,
    };
    TmConfig {
        tape,
        head,
        state: q,
    }
}

/// Deterministic simulation from the initial configuration. With unlimited
/// fuel, a repeated configuration yields `NonHalting`; a fuel cap yields a
/// distinguishable error.
pub fn run_tm(tm: &BoundedTm, word: &[String], fuel: Option<u64>) -> Result<TmOutcome, TmError> {
    let word_idx: Vec<usize> = word
        .iter()
        .map(|w| {
            let i = tm
                .symbol_index(w)
                .ok_or_else(|| TmError::BadInputSymbol(w.clone()))?;
            if !tm.input_alphabet.contains(&i) {
                return Err(TmError::BadInputSymbol(w.clone()));
            }
            Ok(i)
        })
        .collect::<Result<_, _>>()?;
    run_tm_indices(tm, &word_idx, fuel)
}

pub fn run_tm_indices(
    tm: &BoundedTm,
    word: &[usize],
    fuel: Option<u64>,
) -> Result<TmOutcome, TmError> {
    let mut cfg = tm.initial_config(word);
    let mut steps: u64 = 0;
    let mut seen: HashSet<TmConfig> = HashSet::new();
    loop {
        if tm.accepting.contains(&cfg.state) {
            return Ok(TmOutcome::Accept(steps));
        }
        if tm.rejecting.contains(&cfg.state) {
            return Ok(TmOutcome::Reject(steps));
        }
        match fuel {
            Some(f) if steps >= f => return Err(TmError::FuelExhausted(steps)),
            Some(_) => {}
            None => {
                if !seen.insert(cfg.clone()) {
                    return Ok(TmOutcome::NonHalting(steps));
                }
            }
        }
        cfg = step_config(tm, &cfg);
        steps += 1;
    }
}

/// Maximum head excursion (number of cells from the left marker, inclusive
/// of visited blanks) during a halting run. Used by the measured input
/// reduction.
pub fn run_tm_space(tm: &BoundedTm, word: &[String], fuel: u64) -> Result<(TmOutcome, usize), TmError> {
    let word_idx: Vec<usize> = word
        .iter()
        .map(|w| {
            tm.symbol_index(w)
                .filter(|i| tm.input_alphabet.contains(i))
                .ok_or_else(|| TmError::BadInputSymbol(w.clone()))
        })
        .collect::<Result<_, _>>()?;
    let mut cfg = tm.initial_config(&word_idx);
    let mut steps: u64 = 0;
    let mut max_head = cfg.head;
    loop {
        max_head = max_head.max(cfg.head);
        if tm.accepting.contains(&cfg.state) {
            return Ok((TmOutcome::Accept(steps), max_head));
        }
        if tm.rejecting.contains(&cfg.state) {
            return Ok((TmOutcome::Reject(steps), max_head));
        }
        if steps >= fuel {
            return Err(TmError::FuelExhausted(steps));
        }
        cfg = step_config(tm, &cfg);
        steps += 1;
    }
}

/// Simulate the machine on a one-way-infinite tape (the right marker never
/// appears; fresh cells are blank). Returns the outcome and the maximum head
/// excursion. Needed by the measured input reduction, where the machine is
/// read as unbounded.
pub fn run_tm_unbounded(
    tm: &BoundedTm,
    word: &[String],
    fuel: u64,
) -> Result<(TmOutcome, usize), TmError> {
    let word_idx: Vec<usize> = word
        .iter()
        .map(|w| {
            tm.symbol_index(w)
                .filter(|i| tm.input_alphabet.contains(i))
                .ok_or_else(|| TmError::BadInputSymbol(w.clone()))
        })
        .collect::<Result<_, _>>()?;
    let mut tape = vec![tm.left_marker];
    tape.extend(word_idx);
    tape.push(tm.blank);
    let mut head = 1usize;
    let mut state = tm.start;
    let mut max_head = head;
    let mut steps = 0u64;
    loop {
        max_head = max_head.max(head);
        if tm.accepting.contains(&state) {
            return Ok((TmOutcome::Accept(steps), max_head));
        }
        if tm.rejecting.contains(&state) {
            return Ok((TmOutcome::Reject(steps), max_head));
        }
        if steps >= fuel {
            return Err(TmError::FuelExhausted(steps));
        }
        let (q, write, mv) = tm.step_of(state, tape[head]);
        tape[head] = write;
        state = q;
        match mv {
            Move::Left => head -= 1,
            Move::Stay => {}
            Move::Right => {
                head += 1;
                if head == tape.len() {
                    tape.push(tm.blank);
                }
            }
        }
        steps += 1;
    }
}

/// Builder for hand-assembled machines in tests and fixtures.
pub struct TmBuilder {
    pub bound: usize,
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub input: Vec<String>,
    pub start: String,
    pub accepting: Vec<String>,
    pub rejecting: Vec<String>,
    rules: Vec<(String, String, String, String, Move)>,
}

impl TmBuilder {
    /// Symbols beyond `input`: blank `_`, markers `L` and `R`.
    pub fn new(bound: usize, input: &[&str]) -> TmBuilder {
        let mut symbols: Vec<String> = input.iter().map(|s| s.to_string()).collect();
        symbols.extend(["_".to_string(), "L".to_string(), "R".to_string()]);
        TmBuilder {
            bound,
            states: Vec::new(),
            symbols,
            input: input.iter().map(|s| s.to_string()).collect(),
            start: String::new(),
            accepting: Vec::new(),
            rejecting: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        if !self.states.iter().any(|s| s == name) {
            self.states.push(name.to_string());
        }
        self
    }

    pub fn rule(&mut self, q: &str, read: &str, q2: &str, write: &str, mv: Move) -> &mut Self {
        self.state(q).state(q2);
        self.rules
            .push((q.into(), read.into(), q2.into(), write.into(), mv));
        self
    }

    /// Fill every unspecified transition with a self-loop (stay, rewrite).
    pub fn build(&self) -> Result<BoundedTm, TmError> {
        let sym_idx = |s: &str| -> Result<usize, TmError> {
            self.symbols
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| TmError::UnknownSymbol(s.to_string()))
        };
        let st_idx = |s: &str| -> Result<usize, TmError> {
            self.states
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| TmError::UnknownState(s.to_string()))
        };
        let q = self.states.len();
        let s = self.symbols.len();
        let mut delta = Vec::with_capacity(q * s);
        for qi in 0..q {
            for si in 0..s {
                delta.push((qi, si, Move::Stay));
            }
        }
        for (from, read, to, write, mv) in &self.rules {
            let (qi, si) = (st_idx(from)?, sym_idx(read)?);
            delta[qi * s + si] = (st_idx(to)?, sym_idx(write)?, *mv);
        }
        let tm = BoundedTm {
            bound: self.bound,
            states: self.states.clone(),
            symbols: self.symbols.clone(),
            blank: sym_idx("_")?,
            left_marker: sym_idx("L")?,
            right_marker: sym_idx("R")?,
            input_alphabet: self
                .input
                .iter()
                .map(|i| sym_idx(i))
                .collect::<Result<_, _>>()?,
            start: st_idx(&self.start)?,
            delta,
            accepting: self
                .accepting
                .iter()
                .map(|a| st_idx(a))
                .collect::<Result<_, _>>()?,
            rejecting: self
                .rejecting
                .iter()
                .map(|a| st_idx(a))
                .collect::<Result<_, _>>()?,
        };
        tm.validate()?;
        Ok(tm)
    }
}

/// Right-scan acceptor for words containing the letter `a`: scans right,
/// accepts on `a`, rejects at the right marker.
pub fn contains_a_machine(bound: usize) -> BoundedTm {
    let mut b = TmBuilder::new(bound, &["a", "b"]);
    b.start = "scan".into();
    b.accepting = vec!["yes".into()];
    b.rejecting = vec!["no".into()];
    b.rule("scan", "a", "yes", "a", Move::Stay)
        .rule("scan", "b", "scan", "b", Move::Right)
        .rule("scan", "_", "scan", "_", Move::Right)
        .rule("scan", "R", "no", "R", Move::Stay)
        .rule("scan", "L", "scan", "L", Move::Right)
        .state("yes")
        .state("no");
    b.build().expect("fixture machine is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::word;

    #[test]
    fn immediate_accept() {
        let mut b = TmBuilder::new(0, &["a"]);
        b.start = "go".into();
        b.accepting = vec!["go".into()];
        b.state("go");
        let tm = b.build().unwrap();
        assert_eq!(run_tm(&tm, &word("a"), None).unwrap(), TmOutcome::Accept(0));
    }

    #[test]
    fn right_scan_acceptor() {
        let tm = contains_a_machine(0);
        assert_eq!(run_tm(&tm, &word("ba"), None).unwrap(), TmOutcome::Accept(2));
        assert_eq!(run_tm(&tm, &word("bb"), None).unwrap(), TmOutcome::Reject(3));
        assert_eq!(run_tm(&tm, &word("a"), None).unwrap(), TmOutcome::Accept(1));
        assert!(run_tm(&tm, &word(""), None).unwrap().is_reject());
    }

    #[test]
    fn oscillator_detected_as_non_halting() {
        let mut b = TmBuilder::new(1, &["a"]);
        b.start = "l".into();
        b.rule("l", "a", "r", "a", Move::Right)
            .rule("l", "_", "r", "_", Move::Right)
            .rule("l", "L", "l", "L", Move::Right)
            .rule("l", "R", "r", "R", Move::Left)
            .rule("r", "a", "l", "a", Move::Left)
            .rule("r", "_", "l", "_", Move::Left)
            .rule("r", "L", "r", "L", Move::Right)
            .rule("r", "R", "l", "R", Move::Left);
        let tm = b.build().unwrap();
        match run_tm(&tm, &word("a"), None).unwrap() {
            TmOutcome::NonHalting(_) => {}
            o => panic!("expected NonHalting, got {o:?}"),
        }
        assert_eq!(
            run_tm(&tm, &word("a"), Some(3)),
            Err(TmError::FuelExhausted(3))
        );
    }

    #[test]
    fn marker_discipline_validated() {
        let mut b = TmBuilder::new(0, &["a"]);
        b.start = "q".into();
        b.rule("q", "L", "q", "L", Move::Left);
        assert!(matches!(
            b.build(),
            Err(TmError::BadLeftMarkerMove { .. })
        ));
    }

    #[test]
    fn bad_input_symbol() {
        let tm = contains_a_machine(0);
        assert!(matches!(
            run_tm(&tm, &word("c"), None),
            Err(TmError::BadInputSymbol(_))
        ));
    }
}
