//! Events, identifiers and alphabets.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

/// Words of the surface language that can never name an event or a process.
pub const RESERVED: [&str; 6] = ["STOP", "SKIP", "mu", "nil", "tick", "alpha"];

/// Spelling of the silent event.
pub const NIL: &str = "nil";
/// Spelling of the successful-termination event.
pub const TICK: &str = "tick";

/// Rejected identifier spelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameError {
    Empty,
    BadCharacter { name: String, position: usize },
    Reserved(String),
}

impl fmt::Display for NameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NameError::Empty => write!(f, "identifier is empty"),
            NameError::BadCharacter { name, position } => {
                write!(f, "identifier `{name}` has an invalid character at offset {position}")
            }
            NameError::Reserved(name) => write!(f, "`{name}` is a reserved word"),
        }
    }
}

impl core::error::Error for NameError {}

/// An identifier matching `[a-zA-Z][a-zA-Z0-9_]*` that is not a reserved word.
///
/// Used for event labels, process names and recursion binders alike.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(String);

impl Name {
    pub fn new(text: impl Into<String>) -> Result<Self, NameError> {
        let text = text.into();
        validate_identifier(&text)?;
        Ok(Name(text))
    }

    /// Builds a name without validation. Callers guarantee the spelling is an
    /// identifier; this is how the generator and desugarer mint binders.
    pub(crate) fn new_unchecked(text: impl Into<String>) -> Self {
        Name(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::str::FromStr for Name {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Name::new(s)
    }
}

pub fn is_reserved(text: &str) -> bool {
    RESERVED.contains(&text)
}

fn validate_identifier(text: &str) -> Result<(), NameError> {
    let mut chars = text.char_indices();
    match chars.next() {
        None => return Err(NameError::Empty),
        Some((_, c)) if c.is_ascii_alphabetic() => {}
        Some((position, _)) => return Err(NameError::BadCharacter { name: text.to_string(), position }),
    }
    if let Some((position, _)) = chars.find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_')) {
        return Err(NameError::BadCharacter { name: text.to_string(), position });
    }
    if is_reserved(text) {
        return Err(NameError::Reserved(text.to_string()));
    }
    Ok(())
}

/// An interaction label.
///
/// `Nil` is the silent event: any process may perform it at no cost and it
/// leaves no record on the observable trace. `Tick` signals successful
/// termination and is observable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    Named(Name),
    Nil,
    Tick,
}

impl Event {
    pub fn named(label: &str) -> Result<Self, NameError> {
        Name::new(label).map(Event::Named)
    }

    /// Parses the textual label of any event, including `nil` and `tick`.
    pub fn from_label(label: &str) -> Result<Self, NameError> {
        match label {
            NIL => Ok(Event::Nil),
            TICK => Ok(Event::Tick),
            other => Event::named(other),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Event::Named(name) => name.as_str(),
            Event::Nil => NIL,
            Event::Tick => TICK,
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Event::Nil)
    }

    pub fn is_tick(&self) -> bool {
        matches!(self, Event::Tick)
    }

    pub fn as_name(&self) -> Option<&Name> {
        match self {
            Event::Named(name) => Some(name),
            _ => None,
        }
    }
}

// Events order by their label text so that sorted traces read alphabetically.
// Named labels never spell `nil` or `tick`, so this is a total order.
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label().cmp(other.label())
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A finite set of named events. `nil` and `tick` belong to every alphabet
/// implicitly and are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    events: BTreeSet<Name>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, event: &Event) -> bool {
        match event {
            Event::Named(name) => self.events.insert(name.clone()),
            Event::Nil | Event::Tick => false,
        }
    }

    pub fn insert_name(&mut self, name: Name) -> bool {
        self.events.insert(name)
    }

    pub fn contains(&self, event: &Event) -> bool {
        match event {
            Event::Named(name) => self.events.contains(name),
            Event::Nil | Event::Tick => true,
        }
    }

    /// Number of stored (named) events.
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> + '_ {
        self.events.iter()
    }

    pub fn union_with(&mut self, other: &Alphabet) {
        self.events.extend(other.events.iter().cloned());
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.events.is_subset(&other.events)
    }
}

impl FromIterator<Name> for Alphabet {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        Alphabet { events: iter.into_iter().collect() }
    }
}

impl<'a> FromIterator<&'a Event> for Alphabet {
    fn from_iter<I: IntoIterator<Item = &'a Event>>(iter: I) -> Self {
        let mut alphabet = Alphabet::new();
        for event in iter {
            alphabet.insert(event);
        }
        alphabet
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, name) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}")?;
        }
        f.write_str("}")
    }
}
