//! On-disk cache for prime snake characters.
//!
//! One JSON file per snake, named by a SHA-256 of the format version and the
//! canonical snake. Entries are re-validated on every read; anything that
//! fails to parse or validate is deleted and recomputed. IO failures never
//! surface as errors, they only turn the cache off.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::character::Character;
use crate::error::Result;
use crate::lweight::LWeight;
use crate::qcharacter::{snake_char, PrimeSnake};

/// Bump when the stored layout or the character algorithm changes.
pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    n: u32,
    snake: String,
    digest: String,
    character: serde_json::Value,
}

fn digest(v: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

pub struct CharCache {
    dir: Option<PathBuf>,
    version: u32,
    mem: RwLock<HashMap<String, Character>>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl CharCache {
    /// A cache rooted at `dir`, created if missing. Falls back to memory
    /// only when the directory cannot be created.
    pub fn open(dir: impl AsRef<Path>) -> Self {
        Self::with_version(dir, CACHE_VERSION)
    }

    pub fn with_version(dir: impl AsRef<Path>, version: u32) -> Self {
        let dir = dir.as_ref().to_path_buf();
        let dir = match fs::create_dir_all(&dir) {
            Ok(()) => Some(dir),
            Err(e) => {
                log::warn!("cache directory {} unusable ({e}); caching disabled", dir.display());
                None
            }
        };
        CharCache { dir, version, mem: RwLock::new(HashMap::new()) }
    }

    pub fn memory_only() -> Self {
        CharCache { dir: None, version: CACHE_VERSION, mem: RwLock::new(HashMap::new()) }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(&self, s: &PrimeSnake) -> String {
        let mut h = Sha256::new();
        h.update(format!("snakelab-char-v{}|{}|{}", self.version, s.n(), s.to_lweight().to_compact()));
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&self, s: &PrimeSnake) -> Option<Character> {
        let key = self.key(s);
        if let Some(c) = self.mem.read().ok()?.get(&key) {
            return Some(c.clone());
        }
        let path = self.path(&key)?;
        let text = fs::read_to_string(&path).ok()?;
        match self.decode(s, &text) {
            Some(c) => {
                if let Ok(mut m) = self.mem.write() {
                    m.insert(key, c.clone());
                }
                Some(c)
            }
            None => {
                log::warn!("discarding corrupt cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    fn decode(&self, s: &PrimeSnake, text: &str) -> Option<Character> {
        let e: Entry = serde_json::from_str(text).ok()?;
        let w = s.to_lweight();
        if e.version != self.version || e.n != s.n() || e.snake != w.to_compact() || e.digest != digest(&e.character) {
            return None;
        }
        let c = Character::from_json(s.n(), &e.character.to_string()).ok()?;
        // A snake character is multiplicity free with the snake as its only
        // dominant monomial.
        let valid = c.is_multiplicity_free() && c.dominant_monomials() == vec![w];
        valid.then_some(c)
    }

    pub fn put(&self, s: &PrimeSnake, c: &Character) {
        let key = self.key(s);
        if let Ok(mut m) = self.mem.write() {
            m.insert(key.clone(), c.clone());
        }
        let Some(path) = self.path(&key) else { return };
        if let Err(e) = self.write_file(s, c, &key, &path) {
            log::warn!("cache write to {} failed: {e}", path.display());
        }
    }

    fn write_file(&self, s: &PrimeSnake, c: &Character, key: &str, path: &Path) -> std::io::Result<()> {
        let dir = path.parent().expect("entry has a parent");
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(dir.join(format!("{key}.lock")))?;
        lock.lock()?;
        let character = serde_json::to_value(c).map_err(std::io::Error::other)?;
        let entry = Entry {
            version: self.version,
            n: s.n(),
            snake: s.to_lweight().to_compact(),
            digest: digest(&character),
            character,
        };
        let tmp =
            dir.join(format!(".{key}.{}.{}.tmp", std::process::id(), TMP_COUNTER.fetch_add(1, Ordering::Relaxed)));
        {
            let mut f = File::create(&tmp)?;
            f.write_all(serde_json::to_string(&entry).map_err(std::io::Error::other)?.as_bytes())?;
            f.sync_all()?;
        }
        let res = fs::rename(&tmp, path);
        if res.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        lock.unlock()?;
        res
    }

    /// The character of `V(s)`, from the cache when a valid entry exists.
    pub fn snake_char(&self, s: &PrimeSnake) -> Result<Character> {
        if let Some(c) = self.get(s) {
            return Ok(c);
        }
        let c = snake_char(s)?;
        self.put(s, &c);
        Ok(c)
    }

    pub fn snake_char_of(&self, w: &LWeight) -> Result<Character> {
        self.snake_char(&PrimeSnake::from_lweight(w)?)
    }
}
