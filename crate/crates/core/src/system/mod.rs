//! Pushdown systems of level 1 and 2, their text format, configurations and runs.

mod format;
mod run;
mod walk;

pub use format::{parse_run_indices, parse_system, serialize_system};
pub use run::{Configuration, Run};
pub use walk::{enumerate_runs, shortest_runs, walk_runs, RunFilter, ShortestRuns, WalkControl, WalkStats};

use std::collections::HashMap;

use thiserror::Error;

use crate::stack::{Stack, StackError, StackOp, Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u16);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("transition {transition} is not applicable at position {position}")]
    Inapplicable { position: usize, transition: usize },
    #[error("transition index {0} out of range")]
    NoSuchTransition(usize),
    #[error("final configuration of the first run differs from the start of the second")]
    EndpointMismatch,
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("cannot read `{0}`: unknown symbol")]
    UnknownSymbol(String),
    #[error(transparent)]
    Stack(#[from] StackError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub symbol: Symbol,
    pub to: StateId,
    pub op: StackOp,
}

/// An l-PS `(Q, Σ, Δ, q0)` with an ordered transition list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushdownSystem {
    level: u8,
    alphabet: Vec<String>,
    bottom: Symbol,
    states: Vec<String>,
    initial: StateId,
    transitions: Vec<Transition>,
}

impl PushdownSystem {
    pub fn new(
        level: u8,
        alphabet: Vec<String>,
        bottom: Symbol,
        states: Vec<String>,
        initial: StateId,
        transitions: Vec<Transition>,
    ) -> Result<Self, SystemError> {
        if !(1..=2).contains(&level) {
            return Err(SystemError::Invalid(format!("level {level} is not supported")));
        }
        if alphabet.len() > u16::MAX as usize || states.len() > u16::MAX as usize {
            return Err(SystemError::Capacity("more than 2^16 states or symbols".into()));
        }
        if transitions.len() > u32::MAX as usize {
            return Err(SystemError::Capacity("more than 2^32 transitions".into()));
        }
        if states.is_empty() || (initial.0 as usize) >= states.len() {
            return Err(SystemError::Invalid("initial state is not declared".into()));
        }
        if (bottom.0 as usize) >= alphabet.len() {
            return Err(SystemError::Invalid("bottom symbol is not in the alphabet".into()));
        }
        for (i, t) in transitions.iter().enumerate() {
            if (t.from.0 as usize) >= states.len() || (t.to.0 as usize) >= states.len() {
                return Err(SystemError::Invalid(format!("transition {i} uses an unknown state")));
            }
            if (t.symbol.0 as usize) >= alphabet.len() {
                return Err(SystemError::Invalid(format!("transition {i} uses an unknown symbol")));
            }
            if !t.op.valid_at(level) {
                return Err(SystemError::Invalid(format!(
                    "transition {i}: {} not valid at level {level}",
                    t.op
                )));
            }
            if let StackOp::Push(s) = t.op {
                if s == bottom || (s.0 as usize) >= alphabet.len() {
                    return Err(SystemError::Invalid(format!("transition {i} pushes an invalid symbol")));
                }
            }
        }
        Ok(PushdownSystem {
            level,
            alphabet,
            bottom,
            states,
            initial,
            transitions,
        })
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn bottom(&self) -> Symbol {
        self.bottom
    }

    /// Symbols other than the bottom symbol, in id order.
    pub fn letters(&self) -> Vec<Symbol> {
        (0..self.alphabet.len() as u16)
            .map(Symbol)
            .filter(|s| *s != self.bottom)
            .collect()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u16).map(StateId)
    }

    pub fn initial_state(&self) -> StateId {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, i: usize) -> Result<&Transition, SystemError> {
        self.transitions.get(i).ok_or(SystemError::NoSuchTransition(i))
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            state: self.initial,
            stack: Stack::initial(self.level, self.bottom),
        }
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0 as usize]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.alphabet[s.0 as usize]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u16))
    }

    pub fn symbol_by_name(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == name).map(|i| Symbol(i as u16))
    }

    /// Applies transition `delta` to `c`.
    pub fn step(&self, c: &Configuration, delta: usize) -> Result<Configuration, SystemError> {
        let t = self.transition(delta)?;
        if t.from != c.state || t.symbol != c.stack.top1() {
            return Err(SystemError::Inapplicable {
                position: 0,
                transition: delta,
            });
        }
        let stack = c.stack.apply(t.op).map_err(|_| SystemError::Inapplicable {
            position: 0,
            transition: delta,
        })?;
        Ok(Configuration { state: t.to, stack })
    }

    /// Indices of the transitions applicable at `c`, in order.
    pub fn applicable(&self, c: &Configuration) -> Vec<(usize, Configuration)> {
        let top = c.stack.top1();
        self.transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| t.from == c.state && t.symbol == top)
            .filter_map(|(i, t)| {
                c.stack
                    .apply(t.op)
                    .ok()
                    .map(|stack| (i, Configuration { state: t.to, stack }))
            })
            .collect()
    }

    fn name_table(&self) -> HashMap<&str, Symbol> {
        self.alphabet
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), Symbol(i as u16)))
            .collect()
    }

    /// Reads a word: symbol names separated by '.', or a run of single-character names.
    pub fn parse_word(&self, text: &str) -> Result<Word, SystemError> {
        let table = self.name_table();
        let text = text.trim();
        let parts: Vec<&str> = if text.contains('.') {
            text.split('.').map(str::trim).collect()
        } else if table.contains_key(text) {
            vec![text]
        } else {
            let mut v = Vec::new();
            for (i, ch) in text.char_indices() {
                v.push(&text[i..i + ch.len_utf8()]);
            }
            v
        };
        let syms = parts
            .iter()
            .map(|p| {
                table
                    .get(p)
                    .copied()
                    .ok_or_else(|| SystemError::UnknownSymbol(p.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(syms)?)
    }

    /// Reads a stack of the system's level: words separated by ':' at level 2.
    pub fn parse_stack(&self, text: &str) -> Result<Stack, SystemError> {
        if self.level == 1 {
            return Ok(Stack::Word(self.parse_word(text)?));
        }
        let words = text
            .split(':')
            .map(|w| self.parse_word(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Stack::from_words(words)?)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.symbols()
            .iter()
            .map(|s| self.symbol_name(*s))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn format_stack(&self, s: &Stack) -> String {
        s.words()
            .iter()
            .map(|w| self.format_word(w))
            .collect::<Vec<_>>()
            .join(":")
    }

    pub fn format_op(&self, op: StackOp) -> String {
        match op {
            StackOp::Push(s) => format!("push {}", self.symbol_name(s)),
            StackOp::Pop(k) => format!("pop{k}"),
            StackOp::Clone(j) => format!("clone{j}"),
        }
    }

    pub fn format_configuration(&self, c: &Configuration) -> String {
        format!("({}, {})", self.state_name(c.state), self.format_stack(&c.stack))
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    pub const FIG1: &str = include_str!("../../../../fixtures/fig1.nps");
    pub const LEVEL1: &str = include_str!("../../../../fixtures/level1.nps");
    pub const MIXED: &str = include_str!("../../../../fixtures/mixed.nps");

    pub fn fig1() -> PushdownSystem {
        parse_system(FIG1).unwrap()
    }

    pub fn level1() -> PushdownSystem {
        parse_system(LEVEL1).unwrap()
    }
}
