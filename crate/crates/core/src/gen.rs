//! Seeded generation of closed, guarded, desugared process terms.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::event::{Alphabet, Event, Name};
use crate::term::{fresh_name, ProcessTerm};

#[derive(Clone, Copy)]
enum Op {
    PrefixNamed,
    PrefixNil,
    PrefixTick,
    Choice,
    Parallel,
    Mu,
}

/// An endless, deterministic stream of terms for a given seed.
///
/// Each term has at most `size_bound` operators (prefix, choice, parallel,
/// mu); `mu X . nil -> X` and `mu X . tick -> X` appear as leaves. Parallel
/// operands never mention an enclosing recursion variable and never perform
/// `tick`, so every generated term has finitely many reachable states and
/// stays within the semantics' scope.
#[derive(Debug, Clone)]
pub struct TermGenerator {
    rng: ChaCha8Rng,
    size_bound: usize,
    events: Vec<Event>,
    tick: bool,
}

pub fn gen_terms(seed: u64, size_bound: usize, alphabet: &Alphabet) -> TermGenerator {
    TermGenerator::new(seed, size_bound, alphabet)
}

impl TermGenerator {
    /// # Panics
    /// If `size_bound` is zero or `alphabet` is empty.
    pub fn new(seed: u64, size_bound: usize, alphabet: &Alphabet) -> Self {
        assert!(size_bound >= 1, "size bound must be at least 1");
        assert!(!alphabet.is_empty(), "alphabet must not be empty");
        TermGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            size_bound,
            events: alphabet.names().cloned().map(Event::Named).collect(),
            tick: true,
        }
    }

    /// Turns `tick` off everywhere, making terms safe as parallel operands.
    pub fn without_tick(mut self) -> Self {
        self.tick = false;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A uniformly chosen named event of the alphabet.
    pub fn named_event(&mut self) -> Event {
        self.events.choose(&mut self.rng).expect("alphabet is not empty").clone()
    }

    fn term(&mut self, budget: usize, scope: &mut Vec<Name>, barrier: usize, tick: bool) -> ProcessTerm {
        if budget == 0 {
            return self.leaf(scope, barrier, tick);
        }
        let mut ops: Vec<(Op, u32)> = Vec::from([(Op::PrefixNamed, 5), (Op::PrefixNil, 3), (Op::Mu, 2)]);
        if tick {
            ops.push((Op::PrefixTick, 1));
        }
        if self.events.len() + usize::from(tick) >= 2 {
            ops.push((Op::Choice, 2));
        }
        if budget >= 2 {
            ops.push((Op::Parallel, 2));
        }
        let op = ops.choose_weighted(&mut self.rng, |(_, w)| *w).expect("weights are positive").0;
        let rest = budget - 1;
        let guarded = scope.len();
        match op {
            Op::PrefixNamed => {
                let event = self.named_event();
                ProcessTerm::prefix(event, self.term(rest, scope, guarded, tick))
            }
            Op::PrefixNil => ProcessTerm::prefix(Event::Nil, self.term(rest, scope, guarded, tick)),
            Op::PrefixTick => ProcessTerm::prefix(Event::Tick, self.term(rest, scope, guarded, tick)),
            Op::Choice => {
                let mut guards: Vec<Event> = self.events.clone();
                if tick {
                    guards.push(Event::Tick);
                }
                let arity = self.rng.random_range(2..=guards.len().min(3));
                let chosen: Vec<Event> = guards.choose_multiple(&mut self.rng, arity).cloned().collect();
                let shares = self.split(rest, arity);
                let branches = chosen
                    .into_iter()
                    .zip(shares)
                    .map(|(g, share)| (g, self.term(share, scope, guarded, tick)))
                    .collect();
                ProcessTerm::choice(branches).expect("guards are distinct and not nil")
            }
            Op::Parallel => {
                let shares = self.split(rest, 2);
                let left = self.term(shares[0], &mut Vec::new(), 0, false);
                let right = self.term(shares[1], &mut Vec::new(), 0, false);
                ProcessTerm::parallel(left, right)
            }
            Op::Mu => {
                let taken: BTreeSet<Name> = scope.iter().cloned().collect();
                let binder = fresh_name(&taken);
                scope.push(binder.clone());
                let body = self.term(rest, scope, barrier, tick);
                scope.pop();
                ProcessTerm::mu(binder, body)
            }
        }
    }

    fn leaf(&mut self, scope: &[Name], barrier: usize, tick: bool) -> ProcessTerm {
        // Variables below `barrier` are guarded and may recur.
        let usable = &scope[..barrier];
        let roll = self.rng.random_range(0..10);
        if !usable.is_empty() && roll < 5 {
            return ProcessTerm::Var(usable.choose(&mut self.rng).expect("nonempty").clone());
        }
        let taken: BTreeSet<Name> = scope.iter().cloned().collect();
        let binder = fresh_name(&taken);
        let event = if tick && roll >= 8 { Event::Tick } else { Event::Nil };
        ProcessTerm::mu(binder.clone(), ProcessTerm::prefix(event, ProcessTerm::Var(binder)))
    }

    /// Randomly distributes `total` units over `parts` slots.
    fn split(&mut self, total: usize, parts: usize) -> Vec<usize> {
        let mut shares = alloc::vec![0; parts];
        for _ in 0..total {
            let slot = self.rng.random_range(0..parts);
            shares[slot] += 1;
        }
        shares
    }
}

impl Iterator for TermGenerator {
    type Item = ProcessTerm;

    fn next(&mut self) -> Option<ProcessTerm> {
        let size = self.rng.random_range(0..=self.size_bound);
        let tick = self.tick;
        Some(self.term(size, &mut Vec::new(), 0, tick))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Name;

    fn alphabet(names: &[&str]) -> Alphabet {
        names.iter().map(|n| Name::new(*n).unwrap()).collect()
    }

    #[test]
    fn deterministic_per_seed() {
        let a: Vec<_> = gen_terms(7, 6, &alphabet(&["a", "b"])).take(50).collect();
        let b: Vec<_> = gen_terms(7, 6, &alphabet(&["a", "b"])).take(50).collect();
        assert!(a.iter().zip(&b).all(|(x, y)| x.identical(y)));
        let c: Vec<_> = gen_terms(8, 6, &alphabet(&["a", "b"])).take(50).collect();
        assert!(a.iter().zip(&c).any(|(x, y)| !x.identical(y)));
    }

    #[test]
    fn terms_are_well_formed_and_bounded() {
        for t in gen_terms(3, 6, &alphabet(&["a", "b", "c"])).take(2000) {
            t.validate().unwrap();
            assert!(t.is_closed());
            assert!(!t.has_literals());
            assert!(t.operator_count() <= 6, "{t}");
        }
    }

    #[test]
    fn no_nil_guards() {
        let mut choices = 0;
        for t in gen_terms(1, 6, &alphabet(&["a", "b"])).take(2000) {
            t.visit(&mut |s| {
                if let ProcessTerm::Choice(branches) = s {
                    choices += 1;
                    assert!(branches.iter().all(|(g, _)| !g.is_nil()));
                }
            });
        }
        assert!(choices > 0);
    }

    #[test]
    fn every_constructor_appears() {
        let (mut named, mut nil, mut tick, mut choice, mut par, mut mu, mut stop, mut skip, mut var) =
            (0, 0, 0, 0, 0, 0, 0, 0, 0);
        for t in gen_terms(11, 6, &alphabet(&["a", "b"])).take(1000) {
            t.visit(&mut |s| match s {
                ProcessTerm::Prefix(Event::Named(_), _) => named += 1,
                ProcessTerm::Prefix(Event::Nil, rest) if !matches!(**rest, ProcessTerm::Var(_)) => nil += 1,
                ProcessTerm::Prefix(Event::Tick, rest) if !matches!(**rest, ProcessTerm::Var(_)) => tick += 1,
                ProcessTerm::Choice(_) => choice += 1,
                ProcessTerm::Parallel { .. } => par += 1,
                ProcessTerm::Mu(..) if s.is_stop_or_skip_expansion() => {
                    if matches!(s, ProcessTerm::Mu(_, b) if matches!(**b, ProcessTerm::Prefix(Event::Nil, _))) {
                        stop += 1
                    } else {
                        skip += 1
                    }
                }
                ProcessTerm::Mu(..) => mu += 1,
                ProcessTerm::Var(_) => var += 1,
                _ => {}
            });
        }
        for (what, count) in [
            ("named prefix", named),
            ("nil prefix", nil),
            ("tick prefix", tick),
            ("choice", choice),
            ("parallel", par),
            ("mu", mu),
            ("STOP", stop),
            ("SKIP", skip),
            ("variable", var),
        ] {
            assert!(count > 0, "{what} never generated");
        }
    }

    #[test]
    fn without_tick_never_ticks() {
        for t in gen_terms(5, 6, &alphabet(&["a"])).without_tick().take(500) {
            t.visit(&mut |s| match s {
                ProcessTerm::Prefix(e, _) => assert!(!e.is_tick()),
                ProcessTerm::Choice(b) => assert!(b.iter().all(|(g, _)| !g.is_tick())),
                _ => {}
            });
        }
    }

    #[test]
    fn parallel_operands_are_tick_free() {
        for t in gen_terms(9, 6, &alphabet(&["a", "b"])).take(2000) {
            t.visit(&mut |s| {
                if let ProcessTerm::Parallel { left, right, .. } = s {
                    for side in [left, right] {
                        assert!(side.is_closed());
                        side.visit(&mut |u| {
                            if let ProcessTerm::Prefix(e, _) = u {
                                assert!(!e.is_tick());
                            }
                        });
                    }
                }
            });
        }
    }
}
