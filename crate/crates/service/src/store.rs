//! On-disk graph store: one `<id>.json` file per graph under a root directory.
//!
//! Writers to the same graph are serialized; readers always see the last
//! committed snapshot. Files are replaced by write-to-temp then rename, so a
//! failed write leaves the previous file intact.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use route_core::format::{from_json, to_json};
use route_core::Graph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("no graph with id {0:?}")]
    NotFound(String),
    #[error("invalid graph id {0:?}")]
    InvalidId(String),
    #[error(transparent)]
    Graph(#[from] route_core::Error),
    #[error("storage failure: {0}")]
    Io(#[from] io::Error),
}

struct Slot {
    writer: Mutex<()>,
    current: RwLock<Arc<Graph>>,
}

pub struct GraphStore {
    root: PathBuf,
    slots: RwLock<HashMap<String, Arc<Slot>>>,
}

/// Ids are used as file names, so only a conservative alphabet is allowed.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 64
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl GraphStore {
    /// Opens (creating if needed) a store rooted at `root` and loads every
    /// graph file found there. Files that fail to parse are skipped.
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        let mut slots = HashMap::new();
        for entry in fs::read_dir(&root)? {
            let path = entry?.path();
            let Some(id) = path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| n.strip_suffix(".json"))
                .filter(|id| valid_id(id))
            else {
                continue;
            };
            let loaded = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|t| from_json(&t).map_err(|e| e.to_string()));
            match loaded {
                Ok(g) => {
                    slots.insert(id.to_string(), Arc::new(Slot::new(g)));
                }
                Err(e) => tracing::warn!(path = %path.display(), error = %e, "skipping graph file"),
            }
        }
        Ok(GraphStore { root, slots: RwLock::new(slots) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.slots.read().expect("store lock").keys().cloned().collect();
        ids.sort();
        ids
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, StoreError> {
        self.slots
            .read()
            .expect("store lock")
            .get(id)
            .cloned()
            .ok_or_else(|| StoreError::NotFound(id.to_string()))
    }

    /// The last committed state of a graph.
    pub fn get(&self, id: &str) -> Result<Arc<Graph>, StoreError> {
        Ok(self.slot(id)?.current.read().expect("slot lock").clone())
    }

    /// Stores a new graph under a fresh id.
    pub fn create(&self, graph: Graph) -> Result<String, StoreError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        self.put(&id, graph)?;
        Ok(id)
    }

    /// Creates or replaces a graph. Returns whether it was newly created.
    pub fn put(&self, id: &str, graph: Graph) -> Result<bool, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::InvalidId(id.to_string()));
        }
        let existing = self.slots.read().expect("store lock").get(id).cloned();
        match existing {
            Some(slot) => {
                let _w = slot.writer.lock().expect("writer lock");
                self.persist(id, &graph)?;
                *slot.current.write().expect("slot lock") = Arc::new(graph);
                Ok(false)
            }
            None => {
                let mut slots = self.slots.write().expect("store lock");
                if slots.contains_key(id) {
                    drop(slots);
                    return self.put(id, graph);
                }
                self.persist(id, &graph)?;
                slots.insert(id.to_string(), Arc::new(Slot::new(graph)));
                Ok(true)
            }
        }
    }

    /// Applies `edit` to a private copy, persists the result and only then
    /// publishes it. On any error the stored graph is unchanged.
    pub fn update<T>(
        &self,
        id: &str,
        edit: impl FnOnce(&mut Graph) -> Result<T, route_core::Error>,
    ) -> Result<(T, Arc<Graph>), StoreError> {
        let slot = self.slot(id)?;
        let _w = slot.writer.lock().expect("writer lock");
        let mut next = Graph::clone(&slot.current.read().expect("slot lock"));
        let out = edit(&mut next)?;
        self.persist(id, &next)?;
        let next = Arc::new(next);
        *slot.current.write().expect("slot lock") = next.clone();
        Ok((out, next))
    }

    /// Location of a graph's overlay image, resolved against the store root.
    /// Absolute paths and parent-directory components are refused.
    pub fn overlay_path(&self, id: &str) -> Result<Option<PathBuf>, StoreError> {
        let g = self.get(id)?;
        let Some(overlay) = g.overlay() else { return Ok(None) };
        let rel = Path::new(&overlay.image_path);
        if !rel.components().all(|c| matches!(c, Component::Normal(_) | Component::CurDir)) {
            return Ok(None);
        }
        Ok(Some(self.root.join(rel)))
    }

    fn file_for(&self, id: &str) -> PathBuf {
        self.root.join(format!("{id}.json"))
    }

    fn persist(&self, id: &str, g: &Graph) -> io::Result<()> {
        let target = self.file_for(id);
        let tmp = self.root.join(format!(".{id}.json.tmp"));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(to_json(g).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)
    }
}

impl Slot {
    fn new(g: Graph) -> Self {
        Slot { writer: Mutex::new(()), current: RwLock::new(Arc::new(g)) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use route_core::{fixtures, Mutation, NodeId};

    #[test]
    fn create_update_reload() {
        let dir = tempfile::tempdir().unwrap();
        let store = GraphStore::open(dir.path()).unwrap();
        let id = store.create(fixtures::triangle()).unwrap();
        let (_, g) = store
            .update(&id, |g| g.apply(&Mutation::MoveNode { id: NodeId(0), x: 1.0, y: 2.0 }))
            .unwrap();
        assert_eq!(g.node(NodeId(0)).unwrap().x, 1.0);

        let reopened = GraphStore::open(dir.path()).unwrap();
        assert_eq!(*reopened.get(&id).unwrap(), *g);
        assert_eq!(reopened.ids(), vec![id]);
    }

    #[test]
    fn failed_update_changes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let store = GraphStore::open(dir.path()).unwrap();
        let id = store.create(fixtures::triangle()).unwrap();
        let before = fs::read_to_string(dir.path().join(format!("{id}.json"))).unwrap();
        let err = store
            .update(&id, |g| g.apply(&Mutation::AddEdge { u: NodeId(0), v: NodeId(0), weight: None }))
            .unwrap_err();
        assert!(matches!(err, StoreError::Graph(route_core::Error::SelfLoopRejected(_))));
        assert_eq!(*store.get(&id).unwrap(), fixtures::triangle());
        assert_eq!(fs::read_to_string(dir.path().join(format!("{id}.json"))).unwrap(), before);
    }

    #[test]
    fn ids_and_missing_graphs() {
        let dir = tempfile::tempdir().unwrap();
        let store = GraphStore::open(dir.path()).unwrap();
        assert!(matches!(store.get("nope"), Err(StoreError::NotFound(_))));
        assert!(matches!(store.put("../x", Graph::new()), Err(StoreError::InvalidId(_))));
        assert!(store.put("city", Graph::new()).unwrap());
        assert!(!store.put("city", fixtures::path()).unwrap());
        assert_eq!(*store.get("city").unwrap(), fixtures::path());
    }

    #[test]
    fn corrupt_files_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.json"), "{ nope").unwrap();
        fs::write(dir.path().join("good.json"), to_json(&fixtures::path())).unwrap();
        let store = GraphStore::open(dir.path()).unwrap();
        assert_eq!(store.ids(), vec!["good".to_string()]);
    }

    #[test]
    fn overlay_paths_stay_inside_root() {
        let dir = tempfile::tempdir().unwrap();
        let store = GraphStore::open(dir.path()).unwrap();
        let mk = |p: &str| {
            Graph::with_overlay(route_core::Overlay { image_path: p.into(), width: 10, height: 10 }).unwrap()
        };
        store.put("a", mk("maps/city.png")).unwrap();
        store.put("b", mk("../secret.png")).unwrap();
        store.put("c", mk("/etc/passwd")).unwrap();
        assert_eq!(store.overlay_path("a").unwrap(), Some(dir.path().join("maps/city.png")));
        assert_eq!(store.overlay_path("b").unwrap(), None);
        assert_eq!(store.overlay_path("c").unwrap(), None);
    }
}
