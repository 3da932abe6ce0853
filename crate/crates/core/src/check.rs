//! Checks every law against the trace semantics on generated instances.
//!
//! Process laws are decided by comparing bounded observable trace sets of the
//! two sides; trace laws by nil-erasure of generated raw traces. Each law
//! draws from its own seeded stream, so a report does not depend on which
//! other laws were checked.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::defs::Definitions;
use crate::event::{Alphabet, Event, Name};
use crate::gen::TermGenerator;
use crate::laws::LawId;
use crate::semantics::Explorer;
use crate::term::ProcessTerm;
use crate::trace::Trace;

/// L4 holds only for processes that can do something observable first.
pub const L4_NOTE: &str = "checked only for P with an observable initial event; \
for P = STOP, nil -> STOP equals STOP by L3, so the unrestricted inequality fails";

/// Events the harness instantiates metavariables over.
pub fn harness_alphabet() -> Alphabet {
    ["a", "b", "c"].into_iter().map(|n| Name::new(n).expect("valid identifier")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The instantiated law.
    pub term: String,
    /// A shortest distinguishing trace, or a description of the failure.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: LawId,
    pub instances_checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub passed: bool,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub samples: usize,
    pub size_bound: usize,
    pub depth: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { samples: 1000, size_bound: 6, depth: 6, seed: 42 }
    }
}

/// Checks all eleven laws in declaration order.
pub fn check_all(config: CheckConfig) -> Vec<LawReport> {
    LawId::ALL.into_iter().map(|law| check_law(law, config)).collect()
}

pub fn check_law(law: LawId, config: CheckConfig) -> LawReport {
    let samples = config.samples.max(1);
    let law_seed = config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(law as u64 + 1);
    let mut counterexamples = Vec::new();

    let instances_checked = if law.is_trace_law() {
        check_trace_law(law, samples, config.size_bound, law_seed, &mut counterexamples)
    } else {
        check_process_law(law, samples, config, law_seed, &mut counterexamples)
    };

    LawReport {
        law,
        instances_checked,
        passed: counterexamples.is_empty(),
        counterexamples,
        note: (law == LawId::L4).then_some(L4_NOTE),
    }
}

fn check_process_law(
    law: LawId,
    samples: usize,
    config: CheckConfig,
    seed: u64,
    counterexamples: &mut Vec<Counterexample>,
) -> usize {
    let alphabet = harness_alphabet();
    let defs = Definitions::new();
    let mut terms = TermGenerator::new(seed, config.size_bound.max(1), &alphabet);
    if matches!(law, LawId::L5 | LawId::L6) {
        terms = terms.without_tick();
    }

    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples && attempts < samples * 50 {
        attempts += 1;
        // A fresh explorer per instance keeps the memo table small.
        let explorer = Explorer::new(&defs);
        let p = terms.next().expect("endless stream");
        let x = terms.named_event();

        let (lhs, rhs) = match law {
            LawId::L1 => {
                let x = if terms.rng().random_ratio(1, 5) { Event::Tick } else { x };
                let xp = ProcessTerm::prefix(x, p);
                (xp.clone().after_nil(), xp)
            }
            LawId::L2 => (ProcessTerm::prefix(x.clone(), p.clone().after_nil()), ProcessTerm::prefix(x, p)),
            LawId::L3 => (p.clone().after_nil(), p),
            LawId::L4 => {
                match explorer.observable_step(&p) {
                    Ok(offers) if !offers.is_empty() => {}
                    _ => continue,
                }
                let lhs = p.after_nil();
                let stop = ProcessTerm::stop_expanded();
                checked += 1;
                match explorer.trace_equiv(&lhs, &stop, config.depth) {
                    Ok(verdict) if !verdict.equivalent => {}
                    Ok(_) => counterexamples.push(Counterexample {
                        term: format!("{lhs} != STOP"),
                        witness: "trace sets coincide".to_string(),
                    }),
                    Err(e) => counterexamples
                        .push(Counterexample { term: format!("{lhs} != STOP"), witness: format!("error: {e}") }),
                }
                continue;
            }
            LawId::L5 => {
                let q = terms.next().expect("endless stream");
                (ProcessTerm::parallel(p.clone().after_nil(), q.clone().after_nil()), ProcessTerm::parallel(p, q))
            }
            LawId::L6 => {
                let q = terms.next().expect("endless stream");
                let xq = ProcessTerm::prefix(x, q);
                (ProcessTerm::parallel(p.clone().after_nil(), xq.clone()), ProcessTerm::parallel(p, xq))
            }
            _ => unreachable!("trace laws are checked separately"),
        };

        checked += 1;
        match explorer.trace_equiv(&lhs, &rhs, config.depth) {
            Ok(verdict) if verdict.equivalent => {}
            Ok(verdict) => counterexamples.push(Counterexample {
                term: format!("{lhs} = {rhs}"),
                witness: verdict.witness.map(|w| w.to_string()).unwrap_or_default(),
            }),
            Err(e) => {
                counterexamples.push(Counterexample { term: format!("{lhs} = {rhs}"), witness: format!("error: {e}") })
            }
        }
    }
    checked
}

fn check_trace_law(
    law: LawId,
    samples: usize,
    size_bound: usize,
    seed: u64,
    counterexamples: &mut Vec<Counterexample>,
) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Event> = harness_alphabet().names().cloned().map(Event::Named).collect();
    pool.push(Event::Nil);
    pool.push(Event::Tick);
    let nil = Trace::new(alloc::vec![Event::Nil]);

    let raw_trace = |rng: &mut ChaCha8Rng| -> Trace {
        let len = rng.random_range(0..=size_bound);
        (0..len).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect()
    };

    for _ in 0..samples {
        let (instance, lhs, rhs) = match law {
            LawId::T1 => (nil.to_string(), nil.erase_nil(), Trace::empty()),
            LawId::T2 => {
                let run: Trace = (0..rng.random_range(1..=2 * size_bound.max(1))).map(|_| Event::Nil).collect();
                (run.to_string(), run.erase_nil(), Trace::empty())
            }
            LawId::T3 => {
                let x = raw_trace(&mut rng);
                (format!("{x}{nil}"), x.concat(&nil).erase_nil(), x.erase_nil())
            }
            LawId::T4 => {
                let x = raw_trace(&mut rng);
                (format!("{nil}{x}"), nil.concat(&x).erase_nil(), x.erase_nil())
            }
            LawId::T5 => {
                let x = raw_trace(&mut rng);
                let y = raw_trace(&mut rng);
                (format!("{x}{nil}{y}"), x.concat(&nil).concat(&y).erase_nil(), x.erase_nil().concat(&y.erase_nil()))
            }
            _ => unreachable!("process laws are checked separately"),
        };
        if lhs != rhs || !lhs.is_observable() {
            counterexamples.push(Counterexample { term: instance, witness: lhs.to_string() });
        }
    }
    samples
}
