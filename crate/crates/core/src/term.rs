//! The process-term language and its structural operations.
//!
//! Term equality, ordering and hashing are all taken up to renaming of
//! `mu` binders: `mu X . nil -> X` and `mu Y . nil -> Y` are the same term.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::event::{Alphabet, Event, Name};

/// Alphabets fixed for the two operands of a parallel composition once it
/// has started running.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyncAlphabets {
    pub left: Alphabet,
    pub right: Alphabet,
}

/// A process expression.
#[derive(Debug, Clone)]
pub enum ProcessTerm {
    /// `event -> rest`
    Prefix(Event, Box<ProcessTerm>),
    /// Guarded choice `g1 -> P1 | g2 -> P2 | ...` with at least two branches.
    Choice(Vec<(Event, ProcessTerm)>),
    /// Alphabetised parallel composition. `alphabets` is `None` for terms
    /// written by hand; the semantics fills it in on the first step.
    Parallel {
        left: Box<ProcessTerm>,
        right: Box<ProcessTerm>,
        alphabets: Option<Box<SyncAlphabets>>,
    },
    /// `mu X . body`
    Mu(Name, Box<ProcessTerm>),
    /// A recursion variable bound by an enclosing `Mu`.
    Var(Name),
    /// A reference to a named definition.
    Ref(Name),
    StopLit,
    SkipLit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    UnboundVariable(Name),
    UnguardedRecursion(Name),
    ChoiceArity(usize),
    NilGuard,
    DuplicateGuard(Event),
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::UnboundVariable(name) => write!(f, "variable `{name}` is not bound by any mu"),
            TermError::UnguardedRecursion(name) => {
                write!(f, "recursion on `{name}` is not guarded by an event prefix")
            }
            TermError::ChoiceArity(n) => write!(f, "choice needs at least two branches, got {n}"),
            TermError::NilGuard => write!(f, "nil cannot guard a choice branch"),
            TermError::DuplicateGuard(e) => write!(f, "event `{e}` guards more than one choice branch"),
        }
    }
}

impl core::error::Error for TermError {}

impl ProcessTerm {
    pub fn prefix(event: Event, rest: ProcessTerm) -> Self {
        ProcessTerm::Prefix(event, Box::new(rest))
    }

    /// Builds a guarded choice, enforcing arity, distinct guards and the
    /// absence of `nil` guards.
    pub fn choice(branches: Vec<(Event, ProcessTerm)>) -> Result<Self, TermError> {
        check_choice_guards(&branches)?;
        Ok(ProcessTerm::Choice(branches))
    }

    pub fn parallel(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Parallel { left: Box::new(left), right: Box::new(right), alphabets: None }
    }

    pub fn mu(binder: Name, body: ProcessTerm) -> Self {
        ProcessTerm::Mu(binder, Box::new(body))
    }

    /// `mu X . nil -> X`, the expanded form of `STOP`.
    pub fn stop_expanded() -> Self {
        let x = Name::new_unchecked("X");
        ProcessTerm::mu(x.clone(), ProcessTerm::prefix(Event::Nil, ProcessTerm::Var(x)))
    }

    /// `mu X . tick -> X`, the expanded form of `SKIP`.
    pub fn skip_expanded() -> Self {
        let x = Name::new_unchecked("X");
        ProcessTerm::mu(x.clone(), ProcessTerm::prefix(Event::Tick, ProcessTerm::Var(x)))
    }

    /// Checks closedness, guardedness of every `mu`, and the choice rules.
    /// `Ref` nodes are not resolved here; see [`crate::defs::Definitions`].
    pub fn validate(&self) -> Result<(), TermError> {
        fn walk<'a>(t: &'a ProcessTerm, env: &mut Vec<&'a Name>, barrier: usize) -> Result<(), TermError> {
            match t {
                ProcessTerm::Prefix(_, rest) => walk(rest, env, env.len()),
                ProcessTerm::Choice(branches) => {
                    check_choice_guards(branches)?;
                    branches.iter().try_for_each(|(_, rest)| walk(rest, env, env.len()))
                }
                ProcessTerm::Parallel { left, right, .. } => {
                    walk(left, env, barrier)?;
                    walk(right, env, barrier)
                }
                ProcessTerm::Mu(binder, body) => {
                    env.push(binder);
                    let result = walk(body, env, barrier);
                    env.pop();
                    result
                }
                ProcessTerm::Var(name) => match env.iter().rposition(|b| *b == name) {
                    None => Err(TermError::UnboundVariable(name.clone())),
                    Some(i) if i >= barrier => Err(TermError::UnguardedRecursion(name.clone())),
                    Some(_) => Ok(()),
                },
                ProcessTerm::Ref(_) | ProcessTerm::StopLit | ProcessTerm::SkipLit => Ok(()),
            }
        }
        walk(self, &mut Vec::new(), 0)
    }

    /// Replaces every free occurrence of `var` by `replacement`. Binders that
    /// would capture a free variable of `replacement` are renamed first.
    pub fn substitute(&self, var: &Name, replacement: &ProcessTerm) -> ProcessTerm {
        let replacement_free = replacement.free_vars();
        self.substitute_inner(var, replacement, &replacement_free)
    }

    fn substitute_inner(&self, var: &Name, replacement: &ProcessTerm, rfree: &BTreeSet<Name>) -> ProcessTerm {
        match self {
            ProcessTerm::Prefix(e, rest) => {
                ProcessTerm::Prefix(e.clone(), Box::new(rest.substitute_inner(var, replacement, rfree)))
            }
            ProcessTerm::Choice(branches) => ProcessTerm::Choice(
                branches.iter().map(|(g, rest)| (g.clone(), rest.substitute_inner(var, replacement, rfree))).collect(),
            ),
            ProcessTerm::Parallel { left, right, alphabets } => ProcessTerm::Parallel {
                left: Box::new(left.substitute_inner(var, replacement, rfree)),
                right: Box::new(right.substitute_inner(var, replacement, rfree)),
                alphabets: alphabets.clone(),
            },
            ProcessTerm::Mu(binder, body) => {
                if binder == var || !body.has_free_var(var) {
                    return self.clone();
                }
                if rfree.contains(binder) {
                    let mut avoid = rfree.clone();
                    body.collect_names(&mut avoid);
                    avoid.insert(var.clone());
                    let fresh = fresh_name(&avoid);
                    let renamed = body.substitute(binder, &ProcessTerm::Var(fresh.clone()));
                    ProcessTerm::mu(fresh, renamed.substitute_inner(var, replacement, rfree))
                } else {
                    ProcessTerm::mu(binder.clone(), body.substitute_inner(var, replacement, rfree))
                }
            }
            ProcessTerm::Var(name) if name == var => replacement.clone(),
            ProcessTerm::Var(_) | ProcessTerm::Ref(_) | ProcessTerm::StopLit | ProcessTerm::SkipLit => self.clone(),
        }
    }

    /// One unfolding of a `Mu` node: the body with the binder replaced by
    /// the whole term. Returns `None` for anything else.
    pub fn unfold(&self) -> Option<ProcessTerm> {
        match self {
            ProcessTerm::Mu(binder, body) => Some(body.substitute(binder, self)),
            _ => None,
        }
    }

    /// Expands `STOP` to `mu X . nil -> X` and `SKIP` to `mu X . tick -> X`.
    pub fn desugar(&self) -> ProcessTerm {
        if !self.has_literals() {
            return self.clone();
        }
        let mut taken = BTreeSet::new();
        self.collect_names(&mut taken);
        let fresh = fresh_name(&taken);
        self.desugar_with(&fresh)
    }

    fn desugar_with(&self, fresh: &Name) -> ProcessTerm {
        match self {
            ProcessTerm::StopLit => {
                ProcessTerm::mu(fresh.clone(), ProcessTerm::prefix(Event::Nil, ProcessTerm::Var(fresh.clone())))
            }
            ProcessTerm::SkipLit => {
                ProcessTerm::mu(fresh.clone(), ProcessTerm::prefix(Event::Tick, ProcessTerm::Var(fresh.clone())))
            }
            ProcessTerm::Prefix(e, rest) => ProcessTerm::prefix(e.clone(), rest.desugar_with(fresh)),
            ProcessTerm::Choice(branches) => {
                ProcessTerm::Choice(branches.iter().map(|(g, rest)| (g.clone(), rest.desugar_with(fresh))).collect())
            }
            ProcessTerm::Parallel { left, right, alphabets } => ProcessTerm::Parallel {
                left: Box::new(left.desugar_with(fresh)),
                right: Box::new(right.desugar_with(fresh)),
                alphabets: alphabets.clone(),
            },
            ProcessTerm::Mu(binder, body) => ProcessTerm::mu(binder.clone(), body.desugar_with(fresh)),
            ProcessTerm::Var(_) | ProcessTerm::Ref(_) => self.clone(),
        }
    }

    /// Named events used as prefixes or choice guards anywhere in the term.
    pub fn syntactic_alphabet(&self) -> Alphabet {
        let mut alphabet = Alphabet::new();
        self.visit(&mut |t| match t {
            ProcessTerm::Prefix(e, _) => {
                alphabet.insert(e);
            }
            ProcessTerm::Choice(branches) => {
                for (g, _) in branches {
                    alphabet.insert(g);
                }
            }
            _ => {}
        });
        alphabet
    }

    pub fn has_literals(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t, ProcessTerm::StopLit | ProcessTerm::SkipLit));
        found
    }

    /// Number of `nil ->` prefix nodes.
    pub fn nil_prefix_count(&self) -> usize {
        let mut count = 0;
        self.visit(&mut |t| {
            if matches!(t, ProcessTerm::Prefix(Event::Nil, _)) {
                count += 1;
            }
        });
        count
    }

    /// Number of operator nodes (prefix, choice, parallel, mu). Leaves and
    /// the expansions of `STOP` and `SKIP` count as zero.
    pub fn operator_count(&self) -> usize {
        if self.is_stop_or_skip_expansion() {
            return 0;
        }
        match self {
            ProcessTerm::Prefix(_, rest) => 1 + rest.operator_count(),
            ProcessTerm::Choice(branches) => 1 + branches.iter().map(|(_, r)| r.operator_count()).sum::<usize>(),
            ProcessTerm::Parallel { left, right, .. } => 1 + left.operator_count() + right.operator_count(),
            ProcessTerm::Mu(_, body) => 1 + body.operator_count(),
            _ => 0,
        }
    }

    /// True for terms of the shape `mu X . nil -> X` or `mu X . tick -> X`.
    pub fn is_stop_or_skip_expansion(&self) -> bool {
        match self {
            ProcessTerm::Mu(binder, body) => matches!(
                &**body,
                ProcessTerm::Prefix(Event::Nil | Event::Tick, rest)
                    if matches!(&**rest, ProcessTerm::Var(v) if v == binder)
            ),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn walk<'a>(t: &'a ProcessTerm, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
            match t {
                ProcessTerm::Prefix(_, rest) => walk(rest, bound, out),
                ProcessTerm::Choice(branches) => branches.iter().for_each(|(_, r)| walk(r, bound, out)),
                ProcessTerm::Parallel { left, right, .. } => {
                    walk(left, bound, out);
                    walk(right, bound, out);
                }
                ProcessTerm::Mu(binder, body) => {
                    bound.push(binder);
                    walk(body, bound, out);
                    bound.pop();
                }
                ProcessTerm::Var(name) if !bound.contains(&name) => {
                    out.insert(name.clone());
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free_var(&self, var: &Name) -> bool {
        match self {
            ProcessTerm::Prefix(_, rest) => rest.has_free_var(var),
            ProcessTerm::Choice(branches) => branches.iter().any(|(_, r)| r.has_free_var(var)),
            ProcessTerm::Parallel { left, right, .. } => left.has_free_var(var) || right.has_free_var(var),
            ProcessTerm::Mu(binder, body) => binder != var && body.has_free_var(var),
            ProcessTerm::Var(name) => name == var,
            _ => false,
        }
    }

    /// Names of definitions referenced anywhere in the term.
    pub fn refs(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let ProcessTerm::Ref(name) = t {
                out.insert(name.clone());
            }
        });
        out
    }

    /// Direct subterms in position order (the indices used by rewrite paths).
    pub fn children(&self) -> Vec<&ProcessTerm> {
        match self {
            ProcessTerm::Prefix(_, rest) => alloc::vec![&**rest],
            ProcessTerm::Choice(branches) => branches.iter().map(|(_, r)| r).collect(),
            ProcessTerm::Parallel { left, right, .. } => alloc::vec![&**left, &**right],
            ProcessTerm::Mu(_, body) => alloc::vec![&**body],
            _ => Vec::new(),
        }
    }

    pub fn child_mut(&mut self, index: usize) -> Option<&mut ProcessTerm> {
        match (self, index) {
            (ProcessTerm::Prefix(_, rest), 0) => Some(rest),
            (ProcessTerm::Choice(branches), i) => branches.get_mut(i).map(|(_, r)| r),
            (ProcessTerm::Parallel { left, .. }, 0) => Some(left),
            (ProcessTerm::Parallel { right, .. }, 1) => Some(right),
            (ProcessTerm::Mu(_, body), 0) => Some(body),
            _ => None,
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&ProcessTerm)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        self.visit(&mut |t| match t {
            ProcessTerm::Mu(n, _) | ProcessTerm::Var(n) | ProcessTerm::Ref(n) => {
                out.insert(n.clone());
            }
            _ => {}
        });
    }

    /// Structural comparison where binder names are irrelevant.
    pub fn alpha_cmp(&self, other: &ProcessTerm) -> Ordering {
        alpha_cmp(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Structural equality including binder names.
    pub fn identical(&self, other: &ProcessTerm) -> bool {
        match (self, other) {
            (ProcessTerm::Prefix(a, p), ProcessTerm::Prefix(b, q)) => a == b && p.identical(q),
            (ProcessTerm::Choice(xs), ProcessTerm::Choice(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|((g, p), (h, q))| g == h && p.identical(q))
            }
            (
                ProcessTerm::Parallel { left: l1, right: r1, alphabets: a1 },
                ProcessTerm::Parallel { left: l2, right: r2, alphabets: a2 },
            ) => a1 == a2 && l1.identical(l2) && r1.identical(r2),
            (ProcessTerm::Mu(x, p), ProcessTerm::Mu(y, q)) => x == y && p.identical(q),
            (ProcessTerm::Var(x), ProcessTerm::Var(y)) | (ProcessTerm::Ref(x), ProcessTerm::Ref(y)) => x == y,
            (ProcessTerm::StopLit, ProcessTerm::StopLit) | (ProcessTerm::SkipLit, ProcessTerm::SkipLit) => true,
            _ => false,
        }
    }
}

pub(crate) fn check_choice_guards(branches: &[(Event, ProcessTerm)]) -> Result<(), TermError> {
    if branches.len() < 2 {
        return Err(TermError::ChoiceArity(branches.len()));
    }
    let mut seen = BTreeSet::new();
    for (guard, _) in branches {
        if guard.is_nil() {
            return Err(TermError::NilGuard);
        }
        if !seen.insert(guard) {
            return Err(TermError::DuplicateGuard(guard.clone()));
        }
    }
    Ok(())
}

/// First of `X`, `Y`, `Z`, `X1`, `Y1`, ... not in `taken`.
pub(crate) fn fresh_name(taken: &BTreeSet<Name>) -> Name {
    (0..)
        .flat_map(|round: usize| {
            ["X", "Y", "Z"].into_iter().map(move |base| {
                if round == 0 {
                    Name::new_unchecked(base)
                } else {
                    Name::new_unchecked(format!("{base}{round}"))
                }
            })
        })
        .find(|candidate| !taken.contains(candidate))
        .expect("unbounded candidate supply")
}

fn tag(t: &ProcessTerm) -> u8 {
    match t {
        ProcessTerm::Prefix(..) => 0,
        ProcessTerm::Choice(_) => 1,
        ProcessTerm::Parallel { .. } => 2,
        ProcessTerm::Mu(..) => 3,
        ProcessTerm::Var(_) => 4,
        ProcessTerm::Ref(_) => 5,
        ProcessTerm::StopLit => 6,
        ProcessTerm::SkipLit => 7,
    }
}

/// A variable resolved against the binder stack: bound ones by de Bruijn
/// index, free ones by name.
#[derive(PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Resolved<'a> {
    Bound(usize),
    Free(&'a Name),
}

fn resolve<'a>(name: &'a Name, env: &[&Name]) -> Resolved<'a> {
    match env.iter().rev().position(|b| *b == name) {
        Some(i) => Resolved::Bound(i),
        None => Resolved::Free(name),
    }
}

fn alpha_cmp<'a>(
    a: &'a ProcessTerm,
    b: &'a ProcessTerm,
    env_a: &mut Vec<&'a Name>,
    env_b: &mut Vec<&'a Name>,
) -> Ordering {
    match (a, b) {
        (ProcessTerm::Prefix(e, p), ProcessTerm::Prefix(f, q)) => e.cmp(f).then_with(|| alpha_cmp(p, q, env_a, env_b)),
        (ProcessTerm::Choice(xs), ProcessTerm::Choice(ys)) => xs.len().cmp(&ys.len()).then_with(|| {
            for ((g, p), (h, q)) in xs.iter().zip(ys) {
                let ord = g.cmp(h).then_with(|| alpha_cmp(p, q, env_a, env_b));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        }),
        (
            ProcessTerm::Parallel { left: l1, right: r1, alphabets: a1 },
            ProcessTerm::Parallel { left: l2, right: r2, alphabets: a2 },
        ) => a1.cmp(a2).then_with(|| alpha_cmp(l1, l2, env_a, env_b)).then_with(|| alpha_cmp(r1, r2, env_a, env_b)),
        (ProcessTerm::Mu(x, p), ProcessTerm::Mu(y, q)) => {
            env_a.push(x);
            env_b.push(y);
            let ord = alpha_cmp(p, q, env_a, env_b);
            env_a.pop();
            env_b.pop();
            ord
        }
        (ProcessTerm::Var(x), ProcessTerm::Var(y)) => resolve(x, env_a).cmp(&resolve(y, env_b)),
        (ProcessTerm::Ref(x), ProcessTerm::Ref(y)) => x.cmp(y),
        _ => tag(a).cmp(&tag(b)),
    }
}

fn alpha_hash<'a, H: Hasher>(t: &'a ProcessTerm, env: &mut Vec<&'a Name>, state: &mut H) {
    tag(t).hash(state);
    match t {
        ProcessTerm::Prefix(e, rest) => {
            e.hash(state);
            alpha_hash(rest, env, state);
        }
        ProcessTerm::Choice(branches) => {
            branches.len().hash(state);
            for (g, rest) in branches {
                g.hash(state);
                alpha_hash(rest, env, state);
            }
        }
        ProcessTerm::Parallel { left, right, alphabets } => {
            alphabets.hash(state);
            alpha_hash(left, env, state);
            alpha_hash(right, env, state);
        }
        ProcessTerm::Mu(binder, body) => {
            env.push(binder);
            alpha_hash(body, env, state);
            env.pop();
        }
        ProcessTerm::Var(name) => resolve(name, env).hash(state),
        ProcessTerm::Ref(name) => name.hash(state),
        ProcessTerm::StopLit | ProcessTerm::SkipLit => {}
    }
}

impl PartialEq for ProcessTerm {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_cmp(other) == Ordering::Equal
    }
}

impl Eq for ProcessTerm {}

impl PartialOrd for ProcessTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProcessTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alpha_cmp(other)
    }
}

impl Hash for ProcessTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        alpha_hash(self, &mut Vec::new(), state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn name(s: &str) -> Name {
        Name::new(s).unwrap()
    }
    fn ev(s: &str) -> Event {
        Event::from_label(s).unwrap()
    }
    fn var(s: &str) -> ProcessTerm {
        ProcessTerm::Var(name(s))
    }
    fn pre(e: &str, p: ProcessTerm) -> ProcessTerm {
        ProcessTerm::prefix(ev(e), p)
    }

    #[test]
    fn substitute_replaces_free_occurrences_only() {
        let x = name("X");
        assert!(pre("nil", var("X"))
            .substitute(&x, &ProcessTerm::StopLit)
            .identical(&pre("nil", ProcessTerm::StopLit)));
        let no_occurrence = pre("coin", ProcessTerm::StopLit);
        assert!(no_occurrence.substitute(&x, &ProcessTerm::SkipLit).identical(&no_occurrence));
        let bound = ProcessTerm::mu(x.clone(), var("X"));
        let p = pre("a", ProcessTerm::StopLit);
        assert!(bound.substitute(&x, &p).identical(&bound));
    }

    #[test]
    fn substitute_avoids_capture() {
        // (mu Y . a -> X)[X := Y] must not capture Y.
        let t = ProcessTerm::mu(name("Y"), pre("a", ProcessTerm::parallel(var("X"), var("Y"))));
        let out = t.substitute(&name("X"), &var("Y"));
        assert_eq!(out.free_vars().into_iter().collect::<Vec<_>>(), vec![name("Y")]);
        match out {
            ProcessTerm::Mu(binder, _) => assert_ne!(binder, name("Y")),
            _ => panic!("expected mu"),
        }
    }

    #[test]
    fn unfold_examples() {
        let stop = ProcessTerm::stop_expanded();
        assert!(stop.unfold().unwrap().identical(&ProcessTerm::prefix(Event::Nil, stop.clone())));
        let skip = ProcessTerm::skip_expanded();
        assert!(skip.unfold().unwrap().identical(&ProcessTerm::prefix(Event::Tick, skip.clone())));
        let unused = ProcessTerm::mu(name("X"), pre("coin", ProcessTerm::StopLit));
        assert!(unused.unfold().unwrap().identical(&pre("coin", ProcessTerm::StopLit)));
        assert!(var("X").unfold().is_none());
    }

    #[test]
    fn desugar_examples() {
        let vms = pre("coin", pre("choc", ProcessTerm::StopLit));
        assert_eq!(vms.desugar(), pre("coin", pre("choc", ProcessTerm::stop_expanded())));
        assert_eq!(ProcessTerm::SkipLit.desugar(), ProcessTerm::skip_expanded());
        let par = ProcessTerm::parallel(pre("coin", ProcessTerm::StopLit), ProcessTerm::SkipLit);
        let expected = ProcessTerm::parallel(pre("coin", ProcessTerm::stop_expanded()), ProcessTerm::skip_expanded());
        assert_eq!(par.desugar(), expected);
        assert!(!par.desugar().has_literals());
    }

    #[test]
    fn desugar_binders_do_not_capture() {
        // mu X . a -> (X || STOP): the STOP binder must not shadow X in a way
        // that changes meaning, which alpha-equality would expose.
        let t = ProcessTerm::mu(
            name("X"),
            pre("a", ProcessTerm::Choice(vec![(ev("b"), var("X")), (ev("c"), ProcessTerm::StopLit)])),
        );
        let d = t.desugar();
        d.validate().unwrap();
        let expected = ProcessTerm::mu(
            name("Q"),
            pre("a", ProcessTerm::Choice(vec![(ev("b"), var("Q")), (ev("c"), ProcessTerm::stop_expanded())])),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn syntactic_alphabet_examples() {
        let vms = pre("coin", pre("choc", ProcessTerm::StopLit));
        let expected: Alphabet = [name("coin"), name("choc")].into_iter().collect();
        assert_eq!(vms.syntactic_alphabet(), expected);
        assert!(ProcessTerm::stop_expanded().syntactic_alphabet().is_empty());
        let choice =
            ProcessTerm::choice(vec![(ev("choc"), ProcessTerm::SkipLit), (ev("toffee"), ProcessTerm::SkipLit)])
                .unwrap();
        let expected: Alphabet = [name("choc"), name("toffee")].into_iter().collect();
        assert_eq!(choice.syntactic_alphabet(), expected);
    }

    #[test]
    fn choice_rules() {
        let stop = || ProcessTerm::StopLit;
        assert_eq!(ProcessTerm::choice(vec![(ev("a"), stop())]), Err(TermError::ChoiceArity(1)));
        assert_eq!(ProcessTerm::choice(vec![(ev("nil"), stop()), (ev("a"), stop())]), Err(TermError::NilGuard));
        assert_eq!(
            ProcessTerm::choice(vec![(ev("a"), stop()), (ev("a"), stop())]),
            Err(TermError::DuplicateGuard(ev("a")))
        );
        assert!(ProcessTerm::choice(vec![(ev("tick"), stop()), (ev("a"), stop())]).is_ok());
    }

    #[test]
    fn validation() {
        assert_eq!(ProcessTerm::mu(name("X"), var("X")).validate(), Err(TermError::UnguardedRecursion(name("X"))));
        assert_eq!(var("X").validate(), Err(TermError::UnboundVariable(name("X"))));
        let par = ProcessTerm::mu(name("X"), ProcessTerm::parallel(var("X"), ProcessTerm::StopLit));
        assert_eq!(par.validate(), Err(TermError::UnguardedRecursion(name("X"))));
        // Inner binder guarded, outer not.
        let nested = ProcessTerm::mu(name("X"), ProcessTerm::mu(name("Y"), pre("a", var("Y"))));
        assert!(nested.validate().is_ok());
        let bad = ProcessTerm::mu(name("X"), ProcessTerm::mu(name("Y"), var("X")));
        assert!(bad.validate().is_err());
        assert!(ProcessTerm::stop_expanded().validate().is_ok());
    }

    #[test]
    fn alpha_equivalence() {
        let a = ProcessTerm::mu(name("X"), pre("nil", var("X")));
        let b = ProcessTerm::mu(name("Y"), pre("nil", var("Y")));
        assert_eq!(a, b);
        assert!(!a.identical(&b));
        let c = ProcessTerm::mu(name("X"), ProcessTerm::mu(name("Y"), pre("a", var("X"))));
        let d = ProcessTerm::mu(name("X"), ProcessTerm::mu(name("Y"), pre("a", var("Y"))));
        assert_ne!(c, d);
        use core::hash::BuildHasher;
        let s = std::hash::RandomState::new();
        assert_eq!(s.hash_one(&a), s.hash_one(&b));
    }
}
