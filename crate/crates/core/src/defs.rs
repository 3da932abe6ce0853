//! Named process definitions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::event::{Alphabet, Event, Name};
use crate::term::{ProcessTerm, TermError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub alphabet: Alphabet,
    /// Whether the alphabet was written out rather than inferred from the body.
    pub declared: bool,
    pub body: ProcessTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefinitionError {
    Duplicate(Name),
    Unresolved { definition: Name, reference: Name },
    UnguardedCycle(Vec<Name>),
    OutsideAlphabet { definition: Name, event: Event },
    Term { definition: Name, error: TermError },
}

impl fmt::Display for DefinitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefinitionError::Duplicate(name) => write!(f, "process `{name}` is defined twice"),
            DefinitionError::Unresolved { definition, reference } => {
                write!(f, "`{definition}` refers to undefined process `{reference}`")
            }
            DefinitionError::UnguardedCycle(cycle) => {
                f.write_str("unguarded reference cycle: ")?;
                for (i, name) in cycle.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" -> ")?;
                    }
                    write!(f, "{name}")?;
                }
                Ok(())
            }
            DefinitionError::OutsideAlphabet { definition, event } => {
                write!(f, "event `{event}` used in `{definition}` is not in its alphabet")
            }
            DefinitionError::Term { definition, error } => write!(f, "in `{definition}`: {error}"),
        }
    }
}

impl core::error::Error for DefinitionError {}

/// An ordered map from process names to their alphabets and bodies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Definitions {
    entries: BTreeMap<Name, Definition>,
    order: Vec<Name>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a definition. A missing alphabet defaults to the body's
    /// syntactic alphabet.
    pub fn insert(&mut self, name: Name, alphabet: Option<Alphabet>, body: ProcessTerm) -> Result<(), DefinitionError> {
        if self.entries.contains_key(&name) {
            return Err(DefinitionError::Duplicate(name));
        }
        let declared = alphabet.is_some();
        let alphabet = alphabet.unwrap_or_else(|| body.syntactic_alphabet());
        self.order.push(name.clone());
        self.entries.insert(name, Definition { alphabet, declared, body });
        Ok(())
    }

    pub fn get(&self, name: &Name) -> Option<&Definition> {
        self.entries.get(name)
    }

    pub fn get_str(&self, name: &str) -> Option<(&Name, &Definition)> {
        self.entries.iter().find(|(n, _)| n.as_str() == name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.entries.contains_key(name)
    }

    pub fn alphabet(&self, name: &Name) -> Option<&Alphabet> {
        self.entries.get(name).map(|d| &d.alphabet)
    }

    /// Definitions in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Definition)> + '_ {
        self.order.iter().map(move |n| (n, &self.entries[n]))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// A copy with every body desugared. Alphabets are kept.
    pub fn desugared(&self) -> Definitions {
        let mut out = self.clone();
        for def in out.entries.values_mut() {
            def.body = def.body.desugar();
        }
        out
    }

    /// Checks every body for well-formedness, resolves every reference,
    /// confirms alphabets cover the bodies and rejects reference cycles that
    /// are not guarded by an event.
    pub fn validate(&self) -> Result<(), DefinitionError> {
        for (name, def) in self.iter() {
            def.body.validate().map_err(|error| DefinitionError::Term { definition: name.clone(), error })?;
            self.check_refs(&def.body, Some(name))?;
            if let Some(event) = first_event_outside(&def.body, &def.alphabet) {
                return Err(DefinitionError::OutsideAlphabet { definition: name.clone(), event });
            }
        }
        self.check_cycles()
    }

    /// Checks that every reference in `term` resolves. `context` names the
    /// definition the term belongs to, for error reporting.
    pub fn check_refs(&self, term: &ProcessTerm, context: Option<&Name>) -> Result<(), DefinitionError> {
        for reference in term.refs() {
            if !self.contains(&reference) {
                let definition = context.cloned().unwrap_or_else(|| reference.clone());
                return Err(DefinitionError::Unresolved { definition, reference });
            }
        }
        Ok(())
    }

    fn check_cycles(&self) -> Result<(), DefinitionError> {
        // Edges: references reachable from a body without crossing a guard.
        let edges: BTreeMap<&Name, BTreeSet<Name>> =
            self.iter().map(|(name, def)| (name, unguarded_refs(&def.body))).collect();

        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn dfs<'a>(
            node: &'a Name,
            edges: &'a BTreeMap<&'a Name, BTreeSet<Name>>,
            marks: &mut BTreeMap<&'a Name, Mark>,
            path: &mut Vec<&'a Name>,
        ) -> Result<(), Vec<Name>> {
            match marks.get(node) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Active) => {
                    let start = path.iter().position(|n| *n == node).unwrap_or(0);
                    let mut cycle: Vec<Name> = path[start..].iter().map(|n| (*n).clone()).collect();
                    cycle.push(node.clone());
                    return Err(cycle);
                }
                None => {}
            }
            marks.insert(node, Mark::Active);
            path.push(node);
            if let Some(targets) = edges.get(node) {
                for target in targets {
                    if let Some((key, _)) = edges.get_key_value(target) {
                        dfs(key, edges, marks, path)?;
                    }
                }
            }
            path.pop();
            marks.insert(node, Mark::Done);
            Ok(())
        }

        let mut marks = BTreeMap::new();
        for name in &self.order {
            dfs(name, &edges, &mut marks, &mut Vec::new()).map_err(DefinitionError::UnguardedCycle)?;
        }
        Ok(())
    }
}

fn unguarded_refs(term: &ProcessTerm) -> BTreeSet<Name> {
    fn walk(t: &ProcessTerm, out: &mut BTreeSet<Name>) {
        match t {
            ProcessTerm::Ref(name) => {
                out.insert(name.clone());
            }
            ProcessTerm::Parallel { left, right, .. } => {
                walk(left, out);
                walk(right, out);
            }
            ProcessTerm::Mu(_, body) => walk(body, out),
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    walk(term, &mut out);
    out
}

fn first_event_outside(term: &ProcessTerm, alphabet: &Alphabet) -> Option<Event> {
    let mut found = None;
    term.visit(&mut |t| {
        if found.is_some() {
            return;
        }
        let mut check = |e: &Event| {
            if found.is_none() && !alphabet.contains(e) {
                found = Some(e.clone());
            }
        };
        match t {
            ProcessTerm::Prefix(e, _) => check(e),
            ProcessTerm::Choice(branches) => branches.iter().for_each(|(g, _)| check(g)),
            _ => {}
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> Name {
        Name::new(s).unwrap()
    }
    fn pre(e: &str, p: ProcessTerm) -> ProcessTerm {
        ProcessTerm::prefix(Event::from_label(e).unwrap(), p)
    }

    #[test]
    fn alphabet_defaults_to_body() {
        let mut defs = Definitions::new();
        defs.insert(name("VMS"), None, pre("coin", pre("choc", ProcessTerm::StopLit))).unwrap();
        let alphabet = defs.alphabet(&name("VMS")).unwrap();
        assert_eq!(alphabet.len(), 2);
        assert!(!defs.get(&name("VMS")).unwrap().declared);
        defs.validate().unwrap();
    }

    #[test]
    fn duplicate_and_unresolved() {
        let mut defs = Definitions::new();
        defs.insert(name("P"), None, ProcessTerm::Ref(name("Q"))).unwrap();
        assert_eq!(defs.insert(name("P"), None, ProcessTerm::StopLit), Err(DefinitionError::Duplicate(name("P"))));
        assert_eq!(defs.validate(), Err(DefinitionError::Unresolved { definition: name("P"), reference: name("Q") }));
    }

    #[test]
    fn cycles_must_be_guarded() {
        let mut defs = Definitions::new();
        defs.insert(name("P"), None, ProcessTerm::Ref(name("Q"))).unwrap();
        defs.insert(name("Q"), None, ProcessTerm::Ref(name("P"))).unwrap();
        assert!(matches!(defs.validate(), Err(DefinitionError::UnguardedCycle(_))));

        let mut ok = Definitions::new();
        ok.insert(name("P"), None, pre("a", ProcessTerm::Ref(name("Q")))).unwrap();
        ok.insert(name("Q"), None, ProcessTerm::Ref(name("P"))).unwrap();
        // Q's alphabet is inferred as empty; it has no events of its own.
        ok.validate().unwrap();
    }

    #[test]
    fn declared_alphabet_must_cover_body() {
        let mut defs = Definitions::new();
        let alphabet: Alphabet = [name("coin")].into_iter().collect();
        defs.insert(name("VMS"), Some(alphabet), pre("coin", pre("choc", ProcessTerm::StopLit))).unwrap();
        assert_eq!(
            defs.validate(),
            Err(DefinitionError::OutsideAlphabet {
                definition: name("VMS"),
                event: Event::from_label("choc").unwrap()
            })
        );
    }
}
