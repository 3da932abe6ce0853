//! Labelled transitions, silent closure and bounded trace enumeration.
//!
//! Unfolding a `mu` and looking up a definition consume no label; they are
//! resolved inside [`step`]. Only explicit `nil ->` prefixes produce silent
//! transitions. Trace depth counts observable events only.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::defs::Definitions;
use crate::event::{Alphabet, Event, Name};
use crate::term::{ProcessTerm, SyncAlphabets};
use crate::trace::Trace;

/// Upper bound on the number of terms a single silent closure may visit.
pub const CLOSURE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub label: Event,
    pub successor: ProcessTerm,
}

pub type TransitionSet = BTreeSet<Transition>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Some named event is on offer.
    Live,
    /// Nothing observable is on offer; only nil-loops remain.
    Quiescent,
    /// Every observable offer is a tick, and there is at least one.
    Terminating,
}

impl Status {
    /// The status of a process whose observable offers are `offers`.
    pub fn of_offers(offers: &TransitionSet) -> Status {
        if offers.is_empty() {
            Status::Quiescent
        } else if offers.iter().all(|t| t.label.is_tick()) {
            Status::Terminating
        } else {
            Status::Live
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Live => "live",
            Status::Quiescent => "quiescent",
            Status::Terminating => "terminating",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticError {
    /// A tick transition arose inside a parallel composition.
    TickInParallel,
    UnboundReference(Name),
    FreeVariable(Name),
    /// Silent closure visited more than [`CLOSURE_LIMIT`] terms.
    ClosureLimit,
}

impl fmt::Display for SemanticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticError::TickInParallel => f.write_str("tick cannot occur inside a parallel composition"),
            SemanticError::UnboundReference(name) => write!(f, "process `{name}` is not defined"),
            SemanticError::FreeVariable(name) => write!(f, "variable `{name}` is not bound by any mu"),
            SemanticError::ClosureLimit => {
                write!(f, "silent closure exceeded {CLOSURE_LIMIT} terms")
            }
        }
    }
}

impl core::error::Error for SemanticError {}

/// A prefix-closed set of observable traces up to some depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSet {
    pub traces: BTreeSet<Trace>,
    pub depth: usize,
    /// Whether longer behaviours were cut off by the depth budget.
    pub truncated: bool,
}

impl TraceSet {
    pub fn contains(&self, trace: &Trace) -> bool {
        self.traces.contains(trace)
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Traces sorted by their event labels, as printed by the CLI.
    pub fn sorted(&self) -> Vec<&Trace> {
        // BTreeSet<Trace> already orders lexicographically by label.
        self.traces.iter().collect()
    }

    fn check_invariants(&self) {
        debug_assert!(self.traces.contains(&Trace::empty()));
        debug_assert!(self.traces.iter().all(Trace::is_observable));
        debug_assert!(self.traces.iter().all(|t| t.prefixes().all(|p| self.traces.contains(&p))));
    }
}

/// Outcome of comparing two processes' trace sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// A shortest trace of one process but not the other.
    pub witness: Option<Trace>,
}

/// All transitions `term` offers, silent ones included.
pub fn step(term: &ProcessTerm, defs: &Definitions) -> Result<TransitionSet, SemanticError> {
    match term {
        ProcessTerm::Prefix(event, rest) => {
            Ok(BTreeSet::from([Transition { label: event.clone(), successor: (**rest).clone() }]))
        }
        ProcessTerm::Choice(branches) => Ok(branches
            .iter()
            .map(|(guard, rest)| Transition { label: guard.clone(), successor: rest.clone() })
            .collect()),
        ProcessTerm::Mu(..) => step(&term.unfold().expect("mu unfolds"), defs),
        ProcessTerm::Ref(name) => {
            let def = defs.get(name).ok_or_else(|| SemanticError::UnboundReference(name.clone()))?;
            if def.body.has_literals() {
                step(&def.body.desugar(), defs)
            } else {
                step(&def.body, defs)
            }
        }
        ProcessTerm::StopLit | ProcessTerm::SkipLit => step(&term.desugar(), defs),
        ProcessTerm::Var(name) => Err(SemanticError::FreeVariable(name.clone())),
        ProcessTerm::Parallel { left, right, alphabets } => {
            let alphabets = match alphabets {
                Some(fixed) => (**fixed).clone(),
                None => SyncAlphabets { left: operand_alphabet(left, defs), right: operand_alphabet(right, defs) },
            };
            step_parallel(left, right, alphabets, defs)
        }
    }
}

fn step_parallel(
    left: &ProcessTerm,
    right: &ProcessTerm,
    alphabets: SyncAlphabets,
    defs: &Definitions,
) -> Result<TransitionSet, SemanticError> {
    let left_moves = step(left, defs)?;
    let right_moves = step(right, defs)?;
    if left_moves.iter().chain(&right_moves).any(|t| t.label.is_tick()) {
        return Err(SemanticError::TickInParallel);
    }
    let shared = |e: &Event| alphabets.left.contains(e) && alphabets.right.contains(e);
    let compose = |l: &ProcessTerm, r: &ProcessTerm| ProcessTerm::Parallel {
        left: Box::new(l.clone()),
        right: Box::new(r.clone()),
        alphabets: Some(Box::new(alphabets.clone())),
    };

    let mut out = BTreeSet::new();
    for Transition { label, successor } in &left_moves {
        if label.is_nil() || !shared(label) {
            out.insert(Transition { label: label.clone(), successor: compose(successor, right) });
        } else {
            for partner in right_moves.iter().filter(|t| t.label == *label) {
                out.insert(Transition { label: label.clone(), successor: compose(successor, &partner.successor) });
            }
        }
    }
    for Transition { label, successor } in &right_moves {
        if label.is_nil() || !shared(label) {
            out.insert(Transition { label: label.clone(), successor: compose(left, successor) });
        }
    }
    Ok(out)
}

/// The alphabet a parallel operand synchronises on: the events it mentions
/// plus the alphabets of every definition it can reach by reference.
pub fn operand_alphabet(term: &ProcessTerm, defs: &Definitions) -> Alphabet {
    let mut alphabet = term.syntactic_alphabet();
    let mut pending: Vec<Name> = term.refs().into_iter().collect();
    let mut seen = BTreeSet::new();
    while let Some(name) = pending.pop() {
        if !seen.insert(name.clone()) {
            continue;
        }
        if let Some(def) = defs.get(&name) {
            alphabet.union_with(&def.alphabet);
            pending.extend(def.body.refs());
        }
    }
    alphabet
}

/// Terms reachable from `term` by zero or more `nil` transitions.
pub fn silent_closure(term: &ProcessTerm, defs: &Definitions) -> Result<BTreeSet<ProcessTerm>, SemanticError> {
    let mut seen = BTreeSet::new();
    let mut stack = Vec::from([term.clone()]);
    while let Some(current) = stack.pop() {
        if seen.contains(&current) {
            continue;
        }
        for t in step(&current, defs)? {
            if t.label.is_nil() && !seen.contains(&t.successor) {
                stack.push(t.successor);
            }
        }
        seen.insert(current);
        if seen.len() > CLOSURE_LIMIT {
            return Err(SemanticError::ClosureLimit);
        }
    }
    Ok(seen)
}

/// Observable transitions after any number of silent steps.
pub fn observable_step(term: &ProcessTerm, defs: &Definitions) -> Result<TransitionSet, SemanticError> {
    let mut out = BTreeSet::new();
    for state in silent_closure(term, defs)? {
        out.extend(step(&state, defs)?.into_iter().filter(|t| !t.label.is_nil()));
    }
    Ok(out)
}

pub fn classify(term: &ProcessTerm, defs: &Definitions) -> Result<Status, SemanticError> {
    Ok(Status::of_offers(&observable_step(term, defs)?))
}

pub fn observable_traces(term: &ProcessTerm, defs: &Definitions, depth: usize) -> Result<TraceSet, SemanticError> {
    Explorer::new(defs).observable_traces(term, depth)
}

pub fn trace_equiv(
    a: &ProcessTerm,
    b: &ProcessTerm,
    defs: &Definitions,
    depth: usize,
) -> Result<Equivalence, SemanticError> {
    Explorer::new(defs).trace_equiv(a, b, depth)
}

/// Memoises observable steps across the terms of one exploration.
pub struct Explorer<'d> {
    defs: &'d Definitions,
    cache: RefCell<BTreeMap<ProcessTerm, TransitionSet>>,
}

impl<'d> Explorer<'d> {
    pub fn new(defs: &'d Definitions) -> Self {
        Explorer { defs, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn observable_step(&self, term: &ProcessTerm) -> Result<TransitionSet, SemanticError> {
        if let Some(hit) = self.cache.borrow().get(term) {
            return Ok(hit.clone());
        }
        let offers = observable_step(term, self.defs)?;
        self.cache.borrow_mut().insert(term.clone(), offers.clone());
        Ok(offers)
    }

    /// Breadth-first enumeration of observable traces of length at most `depth`.
    pub fn observable_traces(&self, term: &ProcessTerm, depth: usize) -> Result<TraceSet, SemanticError> {
        let mut traces = BTreeSet::from([Trace::empty()]);
        let mut frontier: BTreeMap<Trace, BTreeSet<ProcessTerm>> =
            BTreeMap::from([(Trace::empty(), BTreeSet::from([term.clone()]))]);

        for _ in 0..depth {
            let mut next: BTreeMap<Trace, BTreeSet<ProcessTerm>> = BTreeMap::new();
            for (trace, states) in &frontier {
                for state in states {
                    for Transition { label, successor } in self.observable_step(state)? {
                        next.entry(trace.extended(label)).or_default().insert(successor);
                    }
                }
            }
            if next.is_empty() {
                frontier = next;
                break;
            }
            traces.extend(next.keys().cloned());
            frontier = next;
        }

        let mut truncated = false;
        'outer: for states in frontier.values() {
            for state in states {
                if !self.observable_step(state)?.is_empty() {
                    truncated = true;
                    break 'outer;
                }
            }
        }

        let set = TraceSet { traces, depth, truncated };
        set.check_invariants();
        Ok(set)
    }

    pub fn trace_equiv(&self, a: &ProcessTerm, b: &ProcessTerm, depth: usize) -> Result<Equivalence, SemanticError> {
        let left = self.observable_traces(a, depth)?;
        let right = self.observable_traces(b, depth)?;
        let witness = left
            .traces
            .symmetric_difference(&right.traces)
            .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
            .cloned();
        Ok(Equivalence { equivalent: witness.is_none(), witness })
    }
}
