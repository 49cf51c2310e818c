//! Content-addressed response cache: one `<key>.json` file per entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{CacheKey, GatewayError, LlmRequest, Usage};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub replicate_index: u32,
    pub request: LlmRequest,
    pub text: String,
    #[serde(default)]
    pub usage: Usage,
}

impl CacheEntry {
    pub fn new(request: LlmRequest, replicate_index: u32, text: String, usage: Usage) -> Self {
        CacheEntry {
            key: CacheKey::of(&request, replicate_index),
            replicate_index,
            request,
            text,
            usage,
        }
    }

    /// Decodes an entry and checks that its key matches its contents.
    pub fn from_json(bytes: &[u8]) -> Result<CacheEntry, GatewayError> {
        let entry: CacheEntry =
            serde_json::from_slice(bytes).map_err(|e| GatewayError::Cache(format!("bad entry: {e}")))?;
        let expect = CacheKey::of(&entry.request, entry.replicate_index);
        if entry.key != expect {
            return Err(GatewayError::Cache(format!(
                "entry key {} does not match its request (expected {expect})",
                entry.key
            )));
        }
        Ok(entry)
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Cache, GatewayError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| GatewayError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &CacheKey) -> Result<Option<CacheEntry>, GatewayError> {
        match fs::read(self.path(key)) {
            Ok(bytes) => CacheEntry::from_json(&bytes).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(GatewayError::Cache(e.to_string())),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place, so readers never observe a partial entry.
    pub fn put(&self, entry: &CacheEntry) -> Result<(), GatewayError> {
        let io = |e: std::io::Error| GatewayError::Cache(e.to_string());
        let mut json = serde_json::to_vec_pretty(entry).map_err(|e| GatewayError::Cache(e.to_string()))?;
        json.push(b'\n');
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(&json).map_err(io)?;
        tmp.persist(self.path(&entry.key)).map_err(|e| io(e.error))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir)
            .map(|rd| {
                rd.filter_map(Result::ok)
                    .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
                    .count()
            })
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
