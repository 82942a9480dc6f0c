//! In-memory game sessions with an optional JSON snapshot file.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use lucky13::GameState;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSession {
    pub id: String,
    pub state: GameState,
    /// Milliseconds since the Unix epoch.
    pub created_ms: u64,
    pub updated_ms: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("snapshot io: {0}")]
    Io(#[from] io::Error),
    #[error("snapshot json: {0}")]
    Json(#[from] serde_json::Error),
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Sessions keyed by id. Each session has its own lock, so updates to one
/// session are serialized while distinct sessions proceed in parallel.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<GameSession>>>>,
    snapshot: Option<PathBuf>,
}

impl SessionStore {
    pub fn new() -> Self {
        SessionStore::default()
    }

    /// A store that writes every change to `path`, loading it first if it exists.
    pub fn with_snapshot(path: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let path = path.into();
        let sessions = if path.exists() { load_sessions(&path)? } else { Vec::new() };
        let store = SessionStore { sessions: RwLock::default(), snapshot: Some(path) };
        {
            let mut map = store.sessions.write().unwrap();
            for s in sessions {
                map.insert(s.id.clone(), Arc::new(Mutex::new(s)));
            }
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, state: GameState) -> GameSession {
        let now = now_ms();
        let session = GameSession { id: uuid::Uuid::new_v4().simple().to_string(), state, created_ms: now, updated_ms: now };
        self.sessions
            .write()
            .unwrap()
            .insert(session.id.clone(), Arc::new(Mutex::new(session.clone())));
        self.persist();
        session
    }

    pub fn get(&self, id: &str) -> Option<GameSession> {
        let entry = self.sessions.read().unwrap().get(id).cloned()?;
        let session = entry.lock().unwrap().clone();
        Some(session)
    }

    /// Atomic read-modify-write of one session. `f` returns the next state and
    /// a value for the caller; on error the session is left untouched.
    /// Returns `None` for an unknown id.
    pub fn update<T, E>(
        &self,
        id: &str,
        f: impl FnOnce(&GameState) -> Result<(GameState, T), E>,
    ) -> Option<Result<T, E>> {
        let entry = self.sessions.read().unwrap().get(id).cloned()?;
        let result = {
            let mut session = entry.lock().unwrap();
            f(&session.state).map(|(next, out)| {
                session.state = next;
                session.updated_ms = now_ms();
                out
            })
        };
        if result.is_ok() {
            self.persist();
        }
        Some(result)
    }

    /// All sessions ordered by creation time, then id.
    pub fn sessions(&self) -> Vec<GameSession> {
        let entries: Vec<_> = self.sessions.read().unwrap().values().cloned().collect();
        let mut out: Vec<GameSession> = entries.iter().map(|e| e.lock().unwrap().clone()).collect();
        out.sort_by(|a, b| (a.created_ms, &a.id).cmp(&(b.created_ms, &b.id)));
        out
    }

    /// Writes the snapshot through a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        let json = serde_json::to_vec_pretty(&self.sessions())?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, json)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn persist(&self) {
        if let Some(path) = &self.snapshot {
            if let Err(e) = self.save(path) {
                log::error!("could not write snapshot {}: {e}", path.display());
            }
        }
    }
}

pub fn load_sessions(path: &Path) -> Result<Vec<GameSession>, StoreError> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}
