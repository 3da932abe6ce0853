//! Rewriting with the nil laws and normalisation to nil-free form.
//!
//! Laws, oriented left to right:
//!
//! | law | rewrite                                  |
//! |-----|------------------------------------------|
//! | L1  | `nil -> x -> P`  =>  `x -> P`            |
//! | L2  | `x -> nil -> P`  =>  `x -> P`            |
//! | L3  | `nil -> P`  =>  `P`                      |
//! | L5  | `(nil -> P) || (nil -> Q)`  =>  `P || Q` |
//! | L6  | `(nil -> P) || (x -> Q)`  =>  `P || (x -> Q)` |
//!
//! L1 is the instance of L3 with `P = x -> Q` and is applied as L3. L4,
//! `nil -> P` differs from `STOP`, is an inequality and is only checked, see
//! [`crate::check`].
//!
//! Strategy: positions are visited outermost first, left to right; at each
//! position L3, L2, L5, L6 are tried in that order. A `nil` prefix that is
//! the only guard between a `mu` binder and an occurrence of its variable is
//! never removed, so `mu X . nil -> X` is a normal form.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::event::{Event, Name};
use crate::term::ProcessTerm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl LawId {
    pub const ALL: [LawId; 11] = [
        LawId::L1,
        LawId::L2,
        LawId::L3,
        LawId::L4,
        LawId::L5,
        LawId::L6,
        LawId::T1,
        LawId::T2,
        LawId::T3,
        LawId::T4,
        LawId::T5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LawId::L1 => "L1",
            LawId::L2 => "L2",
            LawId::L3 => "L3",
            LawId::L4 => "L4",
            LawId::L5 => "L5",
            LawId::L6 => "L6",
            LawId::T1 => "T1",
            LawId::T2 => "T2",
            LawId::T3 => "T3",
            LawId::T4 => "T4",
            LawId::T5 => "T5",
        }
    }

    /// The law as an equation.
    pub fn statement(self) -> &'static str {
        match self {
            LawId::L1 => "(nil -> (x -> P)) = (x -> P)",
            LawId::L2 => "(x -> (nil -> P)) = (x -> P)",
            LawId::L3 => "(nil -> P) = P",
            LawId::L4 => "(nil -> P) != STOP",
            LawId::L5 => "(nil -> P) || (nil -> Q) = (P || Q)",
            LawId::L6 => "(nil -> P) || (x -> Q) = (P || (x -> Q))",
            LawId::T1 => "<nil> = <>",
            LawId::T2 => "<nil*> = <>",
            LawId::T3 => "<x><nil> = <x>",
            LawId::T4 => "<nil><x> = <x>",
            LawId::T5 => "<x><nil><y> = <x,y>",
        }
    }

    pub fn is_trace_law(self) -> bool {
        matches!(self, LawId::T1 | LawId::T2 | LawId::T3 | LawId::T4 | LawId::T5)
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for LawId {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LawId::ALL.into_iter().find(|l| l.as_str().eq_ignore_ascii_case(s)).ok_or(())
    }
}

/// One rewrite, recorded for auditing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub law: LawId,
    /// Child indices from the root to the rewritten subterm.
    pub position: Vec<usize>,
    pub before: ProcessTerm,
    pub after: ProcessTerm,
}

/// Applies the first applicable law at the outermost, leftmost position.
pub fn rewrite_once(term: &ProcessTerm) -> Option<(ProcessTerm, RewriteStep)> {
    let mut path = Vec::new();
    let (law, replacement) = find_redex(term, &mut path, &mut Vec::new())?;
    let mut after = term.clone();
    let mut slot = &mut after;
    for &index in &path {
        slot = slot.child_mut(index).expect("path points at a subterm");
    }
    *slot = replacement;
    let step = RewriteStep { law, position: path, before: term.clone(), after: after.clone() };
    Some((after, step))
}

/// Rewrites to a fixpoint. Every step removes at least one `nil` prefix, so
/// the number of steps never exceeds `term.nil_prefix_count()`.
pub fn normalize(term: &ProcessTerm) -> (ProcessTerm, Vec<RewriteStep>) {
    let mut current = term.clone();
    let mut steps = Vec::new();
    while let Some((next, step)) = rewrite_once(&current) {
        current = next;
        steps.push(step);
    }
    (current, steps)
}

/// `open` holds the binders reachable from the current position without
/// crossing a guard.
fn find_redex<'a>(
    term: &'a ProcessTerm,
    path: &mut Vec<usize>,
    open: &mut Vec<&'a Name>,
) -> Option<(LawId, ProcessTerm)> {
    if let Some(found) = redex_here(term, open) {
        return Some(found);
    }
    match term {
        ProcessTerm::Prefix(..) | ProcessTerm::Choice(_) => {
            let mut guarded = Vec::new();
            for (i, child) in term.children().into_iter().enumerate() {
                path.push(i);
                if let Some(found) = find_redex(child, path, &mut guarded) {
                    return Some(found);
                }
                path.pop();
            }
            None
        }
        ProcessTerm::Parallel { left, right, .. } => {
            for (i, child) in [left, right].into_iter().enumerate() {
                path.push(i);
                if let Some(found) = find_redex(child, path, open) {
                    return Some(found);
                }
                path.pop();
            }
            None
        }
        ProcessTerm::Mu(binder, body) => {
            path.push(0);
            open.push(binder);
            let found = find_redex(body, path, open);
            open.pop();
            if found.is_none() {
                path.pop();
            }
            found
        }
        _ => None,
    }
}

fn redex_here(term: &ProcessTerm, open: &[&Name]) -> Option<(LawId, ProcessTerm)> {
    match term {
        ProcessTerm::Prefix(Event::Nil, rest) if !unguards(rest, open) => Some((LawId::L3, (**rest).clone())),
        ProcessTerm::Prefix(event, rest) => match &**rest {
            ProcessTerm::Prefix(Event::Nil, inner) => {
                Some((LawId::L2, ProcessTerm::Prefix(event.clone(), inner.clone())))
            }
            _ => None,
        },
        ProcessTerm::Parallel { left, right, alphabets } => {
            let ProcessTerm::Prefix(Event::Nil, p) = &**left else {
                return None;
            };
            if unguards(p, open) {
                return None;
            }
            match &**right {
                ProcessTerm::Prefix(Event::Nil, q) if !unguards(q, open) => Some((
                    LawId::L5,
                    ProcessTerm::Parallel { left: p.clone(), right: q.clone(), alphabets: alphabets.clone() },
                )),
                ProcessTerm::Prefix(x, _) if !x.is_nil() => Some((
                    LawId::L6,
                    ProcessTerm::Parallel { left: p.clone(), right: right.clone(), alphabets: alphabets.clone() },
                )),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Whether dropping a guard in front of `term` would leave an open binder's
/// variable unguarded.
fn unguards(term: &ProcessTerm, open: &[&Name]) -> bool {
    if open.is_empty() {
        return false;
    }
    let exposed = exposed_vars(term);
    open.iter().any(|b| exposed.contains(*b))
}

/// Free variables of `term` that occur outside every guard.
fn exposed_vars(term: &ProcessTerm) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    match term {
        ProcessTerm::Var(name) => {
            out.insert(name.clone());
        }
        ProcessTerm::Parallel { left, right, .. } => {
            out.extend(exposed_vars(left));
            out.extend(exposed_vars(right));
        }
        ProcessTerm::Mu(binder, body) => {
            out.extend(exposed_vars(body).into_iter().filter(|v| v != binder));
        }
        _ => {}
    }
    out
}

/// True when no law applies anywhere. The only `nil` prefixes a normal form
/// keeps are sole guards of recursion variables.
pub fn is_normal_form(term: &ProcessTerm) -> bool {
    rewrite_once(term).is_none()
}

impl ProcessTerm {
    /// Convenience for `nil -> self`.
    pub fn after_nil(self) -> ProcessTerm {
        ProcessTerm::Prefix(Event::Nil, Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::print::print;

    fn term(src: &str) -> ProcessTerm {
        parse(src).unwrap().main.unwrap().desugar()
    }

    #[test]
    fn l1_is_applied_as_l3() {
        let (after, step) = rewrite_once(&term("nil -> x -> STOP")).unwrap();
        assert_eq!(print(&after), "x -> mu X . nil -> X");
        assert_eq!(step.law, LawId::L3);
        assert!(step.position.is_empty());
    }

    #[test]
    fn l2_at_the_outer_position() {
        let (after, step) = rewrite_once(&term("x -> nil -> a -> STOP")).unwrap();
        assert_eq!(after, term("x -> a -> STOP"));
        assert_eq!(step.law, LawId::L2);
    }

    #[test]
    fn l5_and_l6() {
        let (after, step) = rewrite_once(&term("nil -> a -> STOP || nil -> b -> STOP")).unwrap();
        assert_eq!(step.law, LawId::L5);
        assert_eq!(after, term("a -> STOP || b -> STOP"));
        let (after, step) = rewrite_once(&term("nil -> a -> STOP || b -> STOP")).unwrap();
        assert_eq!(step.law, LawId::L6);
        assert_eq!(after, term("a -> STOP || b -> STOP"));
        // The mirror image is handled by L3 inside the right operand.
        let (_, step) = rewrite_once(&term("b -> STOP || nil -> a -> STOP")).unwrap();
        assert_eq!(step.law, LawId::L3);
        assert_eq!(step.position, [1]);
    }

    #[test]
    fn nil_free_terms_are_normal() {
        assert!(rewrite_once(&term("coin -> choc -> STOP")).is_none());
    }

    #[test]
    fn normalize_collapses_nil_runs() {
        let (after, steps) = normalize(&term("coin -> choc -> nil -> nil -> a -> STOP"));
        assert_eq!(after, term("coin -> choc -> a -> STOP"));
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|s| s.law == LawId::L2));
        assert_eq!(steps[0].position, [0]);
    }

    #[test]
    fn stop_guard_is_protected() {
        let stop = ProcessTerm::stop_expanded();
        let (after, steps) = normalize(&stop);
        assert!(after.identical(&stop));
        assert!(steps.is_empty());
        // A doubled guard loses one nil but keeps the last.
        let (after, steps) = normalize(&term("mu X . nil -> nil -> X"));
        assert_eq!(after, stop);
        assert_eq!(steps.len(), 1);
        // Protection reaches through parallel and nested mu.
        let t = term("mu X . nil -> ((mu Y . a -> Y) || X)");
        assert!(normalize(&t).1.is_empty());
    }

    #[test]
    fn guarded_recursion_loses_its_nils() {
        let (after, _) = normalize(&term("mu X . a -> nil -> X"));
        assert_eq!(after, term("mu X . a -> X"));
        let (after, _) = normalize(&term("mu X . nil -> a -> X"));
        assert_eq!(after, term("mu X . a -> X"));
    }

    #[test]
    fn steps_replay() {
        let start = term("nil -> (nil -> a -> STOP || nil -> b -> nil -> STOP)");
        let (end, steps) = normalize(&start);
        let mut current = start;
        for step in &steps {
            assert!(step.before.identical(&current));
            current = step.after.clone();
        }
        assert!(current.identical(&end));
        assert!(end.validate().is_ok());
    }

    #[test]
    fn law_ids_parse() {
        assert_eq!("l3".parse::<LawId>(), Ok(LawId::L3));
        assert_eq!("T5".parse::<LawId>(), Ok(LawId::T5));
        assert!("L7".parse::<LawId>().is_err());
    }
}
