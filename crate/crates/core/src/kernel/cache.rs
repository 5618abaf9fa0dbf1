use std::collections::BTreeMap;
use std::sync::RwLock;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Write-once property map. Concurrent callers may race to compute the same
/// key; the first published value wins and later ones must agree with it.
#[derive(Default)]
pub struct PropertyCache {
    inner: RwLock<BTreeMap<String, Value>>,
}

impl PropertyCache {
    pub fn get(&self, key: &str) -> Option<Value> {
        self.inner.read().unwrap().get(key).cloned()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.inner.read().unwrap().contains_key(key)
    }

    /// Publishes `value` under `key` unless already present. Returns the
    /// value now stored, which differs from `value` only if the caller
    /// computed something inconsistent.
    pub fn publish(&self, key: &str, value: Value) -> Value {
        let mut map = self.inner.write().unwrap();
        match map.get(key) {
            Some(existing) => {
                debug_assert_eq!(existing, &value, "cache entry `{key}` recomputed differently");
                existing.clone()
            }
            None => {
                map.insert(key.to_string(), value.clone());
                value
            }
        }
    }

    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> T
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> T,
    {
        if let Some(v) = self.get(key) {
            if let Ok(t) = serde_json::from_value(v) {
                return t;
            }
        }
        let t = compute();
        let v = serde_json::to_value(&t).expect("cache values serialize");
        let stored = self.publish(key, v);
        serde_json::from_value(stored).unwrap_or(t)
    }

    pub fn snapshot(&self) -> BTreeMap<String, Value> {
        self.inner.read().unwrap().clone()
    }

    pub fn from_map(map: BTreeMap<String, Value>) -> PropertyCache {
        PropertyCache {
            inner: RwLock::new(map),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Clone for PropertyCache {
    fn clone(&self) -> Self {
        PropertyCache::from_map(self.snapshot())
    }
}

impl PartialEq for PropertyCache {
    fn eq(&self, other: &Self) -> bool {
        self.snapshot() == other.snapshot()
    }
}

impl std::fmt::Debug for PropertyCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.snapshot()).finish()
    }
}
