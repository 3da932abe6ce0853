//! Pretty-printer emitting the ASCII surface syntax with minimal parentheses.

use alloc::string::String;
use core::fmt::{self, Write};

use crate::defs::{Definition, Definitions};
use crate::event::{Alphabet, Name};
use crate::term::ProcessTerm;

// Binding strength, loosest first.
const PAR: u8 = 0;
const CHOICE: u8 = 1;
const PREFIX: u8 = 2;

pub fn print(term: &ProcessTerm) -> String {
    let mut out = String::new();
    write_term(&mut out, term, PAR, true).expect("writing to a String cannot fail");
    out
}

/// `NAME = body`, or `NAME alpha {a, b} = body` when the alphabet was declared.
pub fn print_definition(name: &Name, def: &Definition) -> String {
    let mut out = String::new();
    write!(out, "{name}").unwrap();
    if def.declared {
        out.push_str(" alpha ");
        write_alphabet(&mut out, &def.alphabet).unwrap();
    }
    out.push_str(" = ");
    write_term(&mut out, &def.body, PAR, true).unwrap();
    out
}

/// One line per definition, then the main expression if any.
pub fn print_source(defs: &Definitions, main: Option<&ProcessTerm>) -> String {
    let mut out = String::new();
    for (name, def) in defs.iter() {
        out.push_str(&print_definition(name, def));
        out.push('\n');
    }
    if let Some(main) = main {
        out.push_str(&print(main));
        out.push('\n');
    }
    out
}

fn write_alphabet(out: &mut impl Write, alphabet: &Alphabet) -> fmt::Result {
    out.write_char('{')?;
    for (i, name) in alphabet.names().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        write!(out, "{name}")?;
    }
    out.write_char('}')
}

/// `tail` is true when nothing follows the term at any enclosing level, which
/// is what lets a `mu` body run to the right unparenthesised.
fn write_term(out: &mut impl Write, term: &ProcessTerm, min_prec: u8, tail: bool) -> fmt::Result {
    let own = match term {
        ProcessTerm::Parallel { .. } => PAR,
        ProcessTerm::Choice(_) => CHOICE,
        ProcessTerm::Prefix(..) => PREFIX,
        ProcessTerm::Mu(..) if !tail => {
            // Force parentheses: something follows on the right.
            return paren(out, term);
        }
        _ => u8::MAX,
    };
    if own < min_prec {
        return paren(out, term);
    }
    match term {
        ProcessTerm::Prefix(event, rest) => {
            write!(out, "{event} -> ")?;
            write_term(out, rest, PREFIX, tail)
        }
        ProcessTerm::Choice(branches) => {
            let last = branches.len().saturating_sub(1);
            for (i, (guard, rest)) in branches.iter().enumerate() {
                if i > 0 {
                    out.write_str(" | ")?;
                }
                write!(out, "{guard} -> ")?;
                write_term(out, rest, PREFIX, tail && i == last)?;
            }
            Ok(())
        }
        ProcessTerm::Parallel { left, right, alphabets } => {
            write_term(out, left, PAR, false)?;
            match alphabets {
                None => out.write_str(" || ")?,
                Some(fixed) => {
                    out.write_str(" [")?;
                    write_alphabet(out, &fixed.left)?;
                    out.write_str(" || ")?;
                    write_alphabet(out, &fixed.right)?;
                    out.write_str("] ")?;
                }
            }
            write_term(out, right, CHOICE, tail)
        }
        ProcessTerm::Mu(binder, body) => {
            write!(out, "mu {binder} . ")?;
            write_term(out, body, PAR, true)
        }
        ProcessTerm::Var(name) | ProcessTerm::Ref(name) => write!(out, "{name}"),
        ProcessTerm::StopLit => out.write_str("STOP"),
        ProcessTerm::SkipLit => out.write_str("SKIP"),
    }
}

fn paren(out: &mut impl Write, term: &ProcessTerm) -> fmt::Result {
    out.write_char('(')?;
    write_term(out, term, PAR, true)?;
    out.write_char(')')
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, PAR, true)
    }
}
