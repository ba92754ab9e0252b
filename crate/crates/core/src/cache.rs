//! Disk cache for the per-n data that dominates running time: character
//! tables, class decompositions and t coefficients.
//!
//! One JSON file per (n, kind). Every integer in the payload is written as a
//! decimal string so nothing passes through a 53-bit float, and the payload
//! carries a sha256 checksum. Files are written to a temporary name and
//! renamed into place, so readers only ever see complete entries. An entry
//! with another schema version or a bad checksum is ignored and recomputed.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};
use sha2::{Digest, Sha256};

use crate::characters::{spectral_data_from, CharacterTable};
use crate::coherent::{t_coefficients, ClassCounts, ClassSummary, TCoefficients};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::lp_bound::ProblemData;
use crate::permgroup::SubgroupKind;

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "KENDALL_BOUNDS_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".kb-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheKind {
    CharacterTable,
    ClassDecomposition(SubgroupKind),
    TCoefficients,
}

impl CacheKind {
    fn stem(&self) -> String {
        match self {
            CacheKind::CharacterTable => "character_table".into(),
            CacheKind::ClassDecomposition(kind) => format!("class_decomposition_{}", kind.name()),
            CacheKind::TCoefficients => "t_coefficients".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub n: usize,
    pub kind: CacheKind,
    pub payload: Value,
    /// sha256 of the compact payload text, hex
    pub checksum: String,
}

impl CacheEntry {
    pub fn new<T: Serialize>(n: usize, kind: CacheKind, value: &T) -> Result<Self> {
        let payload = integers_to_strings(serde_json::to_value(value)?);
        let checksum = checksum(&payload)?;
        Ok(CacheEntry { schema_version: SCHEMA_VERSION, n, kind, payload, checksum })
    }

    pub fn is_valid(&self) -> bool {
        self.schema_version == SCHEMA_VERSION && checksum(&self.payload).is_ok_and(|c| c == self.checksum)
    }

    pub fn decode<T: DeserializeOwned>(&self) -> Result<T> {
        Ok(serde_json::from_value(strings_to_integers(self.payload.clone()))?)
    }
}

fn checksum(payload: &Value) -> Result<String> {
    let text = serde_json::to_string(payload)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

fn integers_to_strings(v: Value) -> Value {
    match v {
        Value::Number(x) if x.is_u64() || x.is_i64() => Value::String(x.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(integers_to_strings).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, integers_to_strings(v))).collect())
        }
        other => other,
    }
}

/// Payload strings are integers or enum tags, and tags are never numeric.
fn strings_to_integers(v: Value) -> Value {
    match v {
        Value::String(s) => {
            if let Ok(x) = s.parse::<u64>() {
                Value::Number(x.into())
            } else if let Ok(x) = s.parse::<i64>() {
                Value::Number(Number::from(x))
            } else {
                Value::String(s)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(strings_to_integers).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, strings_to_integers(v))).collect())
        }
        other => other,
    }
}

/// A cache directory shared by concurrent computations; each key is
/// computed at most once per process.
pub struct Cache {
    dir: PathBuf,
    locks: Mutex<HashMap<(usize, CacheKind), Arc<Mutex<()>>>>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), locks: Mutex::new(HashMap::new()) }
    }

    /// An explicit directory, else the environment variable, else the default.
    pub fn resolve_dir(explicit: Option<&Path>) -> PathBuf {
        if let Some(dir) = explicit {
            return dir.to_path_buf();
        }
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => PathBuf::from(DEFAULT_CACHE_DIR),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: usize, kind: CacheKind) -> PathBuf {
        self.dir.join(format!("{}_n{n}.json", kind.stem()))
    }

    /// The stored value, or None if the entry is missing, stale or corrupt.
    pub fn load<T: DeserializeOwned>(&self, n: usize, kind: CacheKind) -> Result<Option<T>> {
        let text = match fs::read_to_string(self.path(n, kind)) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let Ok(entry) = serde_json::from_str::<CacheEntry>(&text) else {
            return Ok(None);
        };
        if !entry.is_valid() || entry.n != n || entry.kind != kind {
            return Ok(None);
        }
        Ok(entry.decode().ok())
    }

    pub fn store<T: Serialize>(&self, n: usize, kind: CacheKind, value: &T) -> Result<()> {
        let entry = CacheEntry::new(n, kind, value)?;
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(n, kind))
            .map_err(|e| Error::Cache(format!("cannot move entry into place: {}", e.error)))?;
        Ok(())
    }

    pub fn get_or_compute<T, F>(&self, n: usize, kind: CacheKind, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let lock = {
            let mut locks = self.locks.lock().expect("cache lock table poisoned");
            locks.entry((n, kind)).or_default().clone()
        };
        let _guard = lock.lock().expect("cache entry lock poisoned");
        if let Some(value) = self.load(n, kind)? {
            return Ok(value);
        }
        let value = compute()?;
        self.store(n, kind, &value)?;
        Ok(value)
    }

    pub fn character_table(&self, n: usize) -> Result<CharacterTable> {
        self.get_or_compute(n, CacheKind::CharacterTable, || CharacterTable::new(n))
    }

    pub fn class_summary(&self, n: usize, kind: SubgroupKind, limits: &Limits) -> Result<ClassSummary> {
        self.get_or_compute(n, CacheKind::ClassDecomposition(kind), || ClassSummary::compute(n, kind, limits))
    }

    pub fn t_coefficients(&self, n: usize, limits: &Limits) -> Result<TCoefficients> {
        self.get_or_compute(n, CacheKind::TCoefficients, || t_coefficients(n, limits))
    }

    pub fn problem_data(&self, n: usize, limits: &Limits) -> Result<ProblemData> {
        let t = self.t_coefficients(n, limits)?;
        let spectral = spectral_data_from(&self.character_table(n)?)?;
        Ok(ProblemData { t, spectral })
    }

    pub fn class_counts(&self, n: usize, limits: &Limits) -> Result<ClassCounts> {
        let full = self.class_summary(n, SubgroupKind::Full, limits)?;
        let psi = self.class_summary(n, SubgroupKind::Psi, limits)?;
        let theta = self.class_summary(n, SubgroupKind::Theta, limits)?;
        Ok(ClassCounts::from_summaries(&full, &psi, &theta))
    }
}
