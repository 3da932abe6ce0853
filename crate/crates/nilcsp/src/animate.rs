//! Terminal animator: the user plays the environment, one event at a time.

use std::io::{self, BufRead, Write};

use nilcsp_core::{Definitions, Status};

use crate::session::{Session, SessionError};

pub const STOPPED: &str = "STOPPED (only nil remains)";

/// Runs an interactive session for `process` until `q` or end of input.
///
/// Each round prints the trace, the status and a numbered menu, then reads a
/// line: a menu number or an event label performs that event, `r` resets.
pub fn animate(
    defs: &Definitions,
    process: &str,
    input: impl BufRead,
    mut out: impl Write,
) -> Result<Session, AnimateError> {
    let mut session = Session::new(String::new(), defs, process, 0)?;
    let mut lines = input.lines();
    loop {
        show(&session, &mut out)?;
        write!(out, "> ")?;
        out.flush()?;
        let Some(line) = lines.next() else {
            writeln!(out)?;
            return Ok(session);
        };
        let line = line?;
        let choice = line.trim();
        let menu = session.menu();
        let label = match choice {
            "" => continue,
            "q" => return Ok(session),
            "r" => {
                session.reset()?;
                continue;
            }
            _ => match choice.parse::<usize>() {
                Ok(n) if (1..=menu.len()).contains(&n) => menu[n - 1].clone(),
                Ok(_) => {
                    writeln!(out, "no choice {choice}")?;
                    continue;
                }
                Err(_) => choice.to_owned(),
            },
        };
        match session.step(&label) {
            Ok(()) => {}
            Err(SessionError::NotOffered { event, .. }) => writeln!(out, "{event} is not offered")?,
            Err(e) => return Err(e.into()),
        }
    }
}

fn show(session: &Session, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "trace: {}", session.trace())?;
    writeln!(out, "status: {}", session.status())?;
    if session.status() == Status::Quiescent {
        writeln!(out, "{STOPPED}")?;
    }
    for (i, label) in session.menu().iter().enumerate() {
        writeln!(out, "  {}) {label}", i + 1)?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum AnimateError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Io(#[from] io::Error),
}
