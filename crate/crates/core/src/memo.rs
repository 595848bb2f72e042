use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use crate::error::Result;

/// Concurrent memo table. Reads are shared; a missing entry may be computed
/// by several threads at once, and the first insertion wins.
pub(crate) struct Memo<K, V> {
    map: RwLock<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub fn new() -> Self {
        Memo { map: RwLock::new(HashMap::new()) }
    }

    pub fn get_or_try(&self, key: &K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        if let Some(v) = self.map.read().unwrap().get(key) {
            return Ok(v.clone());
        }
        let v = Arc::new(f()?);
        let mut w = self.map.write().unwrap();
        Ok(w.entry(key.clone()).or_insert(v).clone())
    }
}
