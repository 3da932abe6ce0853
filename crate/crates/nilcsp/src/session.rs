//! In-memory animation sessions.
//!
//! A session walks one process through its observable transitions. Silent
//! steps happen inside [`Session::step`]; the menu only ever lists events the
//! environment could see.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};

use nilcsp_core::{
    observable_step, parse, Definitions, ParseError, ProcessTerm, SemanticError, Status, Trace, TransitionSet,
};
use rand::Rng;
use serde::Serialize;

pub const DEFAULT_CAPACITY: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("unknown process {0}")]
    UnknownProcess(String),
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("event {event} is not offered")]
    NotOffered { event: String, offered: Vec<String> },
    #[error("{0}")]
    Semantic(#[from] SemanticError),
}

/// What clients see of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionView {
    pub id: String,
    pub status: &'static str,
    pub trace: Vec<String>,
    pub events: Vec<String>,
}

#[derive(Debug)]
pub struct Session {
    id: String,
    defs: Arc<Definitions>,
    initial: ProcessTerm,
    current: ProcessTerm,
    trace: Trace,
    status: Status,
    offers: TransitionSet,
    /// Creation order, for diagnostics.
    pub created_at: u64,
}

impl Session {
    /// Starts `process` from `source`.
    pub fn start(id: String, source: &str, process: &str, created_at: u64) -> Result<Self, SessionError> {
        Self::new(id, &parse(source)?.definitions, process, created_at)
    }

    /// Starts `process`, one of `definitions`.
    pub fn new(id: String, definitions: &Definitions, process: &str, created_at: u64) -> Result<Self, SessionError> {
        let (name, _) = definitions.get_str(process).ok_or_else(|| SessionError::UnknownProcess(process.to_owned()))?;
        let initial = ProcessTerm::Ref(name.clone());
        let defs = Arc::new(definitions.desugared());
        let offers = observable_step(&initial, &defs)?;
        let status = Status::of_offers(&offers);
        Ok(Session { id, defs, current: initial.clone(), initial, trace: Trace::empty(), status, offers, created_at })
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            status: self.status.as_str(),
            trace: self.trace.events().iter().map(|e| e.label().to_owned()).collect(),
            events: self.menu(),
        }
    }

    /// Labels of the offered observable events, sorted and without repeats.
    pub fn menu(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.offers.iter().map(|t| t.label.label().to_owned()).collect();
        labels.dedup();
        labels
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn current(&self) -> &ProcessTerm {
        &self.current
    }

    pub fn initial(&self) -> &ProcessTerm {
        &self.initial
    }

    pub fn definitions(&self) -> &Definitions {
        &self.defs
    }

    /// Performs the offered event labelled `label`.
    ///
    /// When several transitions share the label, the first in transition
    /// order is taken.
    pub fn step(&mut self, label: &str) -> Result<(), SessionError> {
        let chosen = self.offers.iter().find(|t| t.label.label() == label).cloned();
        let Some(transition) = chosen else {
            return Err(SessionError::NotOffered { event: label.to_owned(), offered: self.menu() });
        };
        let offers = observable_step(&transition.successor, &self.defs)?;
        self.status = Status::of_offers(&offers);
        self.offers = offers;
        self.current = transition.successor;
        self.trace = self.trace.extended(transition.label);
        Ok(())
    }

    pub fn reset(&mut self) -> Result<(), SessionError> {
        self.offers = observable_step(&self.initial, &self.defs)?;
        self.status = Status::of_offers(&self.offers);
        self.current = self.initial.clone();
        self.trace = Trace::empty();
        Ok(())
    }
}

/// Sessions keyed by id, evicting the least recently used beyond a cap.
///
/// The map lock is held only to look sessions up; each session has its own
/// lock, so work on different sessions runs in parallel.
#[derive(Debug)]
pub struct SessionStore {
    inner: Mutex<Entries>,
    capacity: usize,
}

#[derive(Debug, Default)]
struct Entries {
    sessions: HashMap<String, Entry>,
    clock: u64,
    created: u64,
}

#[derive(Debug)]
struct Entry {
    session: Arc<Mutex<Session>>,
    last_used: u64,
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::with_capacity(DEFAULT_CAPACITY)
    }
}

impl SessionStore {
    /// # Panics
    /// If `capacity` is zero.
    pub fn with_capacity(capacity: usize) -> Self {
        assert!(capacity > 0, "session capacity must be positive");
        SessionStore { inner: Mutex::new(Entries::default()), capacity }
    }

    pub fn len(&self) -> usize {
        self.entries().sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, source: &str, process: &str) -> Result<SessionView, SessionError> {
        let created_at = {
            let mut entries = self.entries();
            entries.created += 1;
            entries.created
        };
        // Parsing and the first step happen outside the map lock.
        let mut session = Session::start(String::new(), source, process, created_at)?;
        let mut entries = self.entries();
        let id = loop {
            let id = format!("{:032x}", rand::rng().random::<u128>());
            if !entries.sessions.contains_key(&id) {
                break id;
            }
        };
        session.id = id.clone();
        let view = session.view();
        if entries.sessions.len() >= self.capacity {
            let oldest = entries.sessions.iter().min_by_key(|(_, e)| e.last_used).map(|(k, _)| k.clone());
            if let Some(oldest) = oldest {
                entries.sessions.remove(&oldest);
            }
        }
        entries.clock += 1;
        let last_used = entries.clock;
        entries.sessions.insert(id, Entry { session: Arc::new(Mutex::new(session)), last_used });
        Ok(view)
    }

    /// Runs `f` with exclusive access to session `id`.
    pub fn with<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> T) -> Result<T, SessionError> {
        let session = {
            let mut entries = self.entries();
            entries.clock += 1;
            let now = entries.clock;
            let entry = entries.sessions.get_mut(id).ok_or_else(|| SessionError::UnknownSession(id.to_owned()))?;
            entry.last_used = now;
            Arc::clone(&entry.session)
        };
        let mut guard = session.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
        Ok(f(&mut guard))
    }

    pub fn get(&self, id: &str) -> Result<SessionView, SessionError> {
        self.with(id, |s| s.view())
    }

    pub fn step(&self, id: &str, event: &str) -> Result<SessionView, SessionError> {
        self.with(id, |s| s.step(event).map(|()| s.view()))?
    }

    pub fn reset(&self, id: &str) -> Result<SessionView, SessionError> {
        self.with(id, |s| s.reset().map(|()| s.view()))?
    }

    pub fn delete(&self, id: &str) -> Result<(), SessionError> {
        self.entries().sessions.remove(id).map(|_| ()).ok_or_else(|| SessionError::UnknownSession(id.to_owned()))
    }

    fn entries(&self) -> MutexGuard<'_, Entries> {
        self.inner.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VMS: &str = "VMS = coin -> choc -> coin -> choc -> STOP\n";

    #[test]
    fn vms_runs_to_quiescence() {
        let store = SessionStore::default();
        let v = store.create(VMS, "VMS").unwrap();
        assert_eq!((v.status, v.events.clone()), ("live", vec!["coin".to_owned()]));
        for e in ["coin", "choc", "coin"] {
            store.step(&v.id, e).unwrap();
        }
        let end = store.step(&v.id, "choc").unwrap();
        assert_eq!(end.status, "quiescent");
        assert!(end.events.is_empty());
        assert_eq!(end.trace, ["coin", "choc", "coin", "choc"]);
    }

    #[test]
    fn refuses_events_not_offered() {
        let store = SessionStore::default();
        let v = store.create(VMS, "VMS").unwrap();
        match store.step(&v.id, "toffee") {
            Err(SessionError::NotOffered { offered, .. }) => assert_eq!(offered, ["coin"]),
            other => panic!("{other:?}"),
        }
        assert_eq!(store.get(&v.id).unwrap(), v);
    }

    #[test]
    fn evicts_least_recently_used() {
        let store = SessionStore::with_capacity(2);
        let a = store.create(VMS, "VMS").unwrap();
        let b = store.create(VMS, "VMS").unwrap();
        store.get(&a.id).unwrap();
        let c = store.create(VMS, "VMS").unwrap();
        assert_eq!(store.len(), 2);
        assert!(store.get(&a.id).is_ok());
        assert!(matches!(store.get(&b.id), Err(SessionError::UnknownSession(_))));
        assert!(store.get(&c.id).is_ok());
    }

    #[test]
    fn ids_are_long_and_distinct() {
        let store = SessionStore::default();
        let a = store.create(VMS, "VMS").unwrap();
        let b = store.create(VMS, "VMS").unwrap();
        assert_eq!(a.id.len(), 32);
        assert_ne!(a.id, b.id);
    }

    #[test]
    fn reset_returns_to_the_start() {
        let store = SessionStore::default();
        let v = store.create(VMS, "VMS").unwrap();
        store.step(&v.id, "coin").unwrap();
        assert_eq!(store.reset(&v.id).unwrap(), v);
    }

    #[test]
    fn unknown_process_and_bad_source() {
        let store = SessionStore::default();
        assert!(matches!(store.create(VMS, "VMX"), Err(SessionError::UnknownProcess(_))));
        assert!(matches!(store.create("P = ->", "P"), Err(SessionError::Parse(_))));
        assert!(store.is_empty());
    }
}
