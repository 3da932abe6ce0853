//! CSP processes extended with a silent `nil` event.
//!
//! `STOP` is `mu X . nil -> X` and `SKIP` is `mu X . tick -> X`; both are
//! surface forms that [`ProcessTerm::desugar`] expands before anything runs.
//! The crate covers terms, traces with nil-erasure, a small-step semantics
//! with bounded trace enumeration, the nil rewrite laws, a seeded term
//! generator, a law-checking harness, and a parser and printer for the
//! textual syntax. It needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod check;
pub mod defs;
pub mod event;
pub mod gen;
pub mod laws;
pub mod parser;
pub mod print;
pub mod semantics;
pub mod term;
pub mod trace;

pub use check::{check_all, check_law, CheckConfig, Counterexample, LawReport};
pub use defs::{Definition, DefinitionError, Definitions};
pub use event::{Alphabet, Event, Name, NameError};
pub use gen::{gen_terms, TermGenerator};
pub use laws::{normalize, rewrite_once, LawId, RewriteStep};
pub use parser::{parse, parse_expr, ErrorKind, ParseError, SourceFile};
pub use print::{print, print_definition, print_source};
pub use semantics::{
    classify, observable_step, observable_traces, silent_closure, step, trace_equiv, Equivalence, Explorer,
    SemanticError, Status, TraceSet, Transition, TransitionSet,
};
pub use term::{ProcessTerm, SyncAlphabets, TermError};
pub use trace::Trace;
