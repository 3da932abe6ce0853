//! Finite traces and nil-erasure.

use alloc::vec::Vec;
use core::fmt;

use crate::event::{Event, NameError};

/// A finite sequence of events. Raw traces may contain `nil`; observable ones
/// do not.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(Vec<Event>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn new(events: Vec<Event>) -> Self {
        Trace(events)
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, event: Event) {
        self.0.push(event);
    }

    /// This trace extended by one event.
    pub fn extended(&self, event: Event) -> Trace {
        let mut out = self.clone();
        out.push(event);
        out
    }

    pub fn concat(&self, other: &Trace) -> Trace {
        let mut items = Vec::with_capacity(self.len() + other.len());
        items.extend_from_slice(&self.0);
        items.extend_from_slice(&other.0);
        Trace(items)
    }

    /// The trace with every `nil` removed.
    pub fn erase_nil(&self) -> Trace {
        Trace(self.0.iter().filter(|e| !e.is_nil()).cloned().collect())
    }

    pub fn is_observable(&self) -> bool {
        !self.0.iter().any(Event::is_nil)
    }

    /// Equality after nil-erasure, without materialising the erased traces.
    pub fn observable_eq(&self, other: &Trace) -> bool {
        let mut a = self.0.iter().filter(|e| !e.is_nil());
        let mut b = other.0.iter().filter(|e| !e.is_nil());
        loop {
            match (a.next(), b.next()) {
                (None, None) => return true,
                (Some(x), Some(y)) if x == y => {}
                _ => return false,
            }
        }
    }

    /// All prefixes, shortest first, including the empty trace and the trace itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Trace> + '_ {
        (0..=self.len()).map(move |n| Trace(self.0[..n].to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Trace) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Parses the `<e1,e2,...>` rendering. Whitespace around labels is allowed.
    pub fn parse(text: &str) -> Result<Trace, TraceParseError> {
        let inner = text.trim().strip_prefix('<').and_then(|s| s.strip_suffix('>')).ok_or(TraceParseError::Brackets)?;
        if inner.trim().is_empty() {
            return Ok(Trace::empty());
        }
        inner
            .split(',')
            .map(|label| Event::from_label(label.trim()).map_err(TraceParseError::Label))
            .collect::<Result<Vec<_>, _>>()
            .map(Trace)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceParseError {
    Brackets,
    Label(NameError),
}

impl fmt::Display for TraceParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceParseError::Brackets => f.write_str("a trace is written between `<` and `>`"),
            TraceParseError::Label(e) => write!(f, "bad event label: {e}"),
        }
    }
}

impl core::error::Error for TraceParseError {}

impl From<Vec<Event>> for Trace {
    fn from(events: Vec<Event>) -> Self {
        Trace(events)
    }
}

impl FromIterator<Event> for Trace {
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        Trace(iter.into_iter().collect())
    }
}

/// Renders as `<coin,choc>`, `<>` when empty. No spaces.
impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(e.label())?;
        }
        f.write_str(">")
    }
}
