//! Persistent corpus of unlabeled lattices with cached property flags.
//!
//! A catalog directory holds one lattice file per isomorphism class, named by
//! the SHA-256 hex digest of its canonical key, plus `index.json` mapping each
//! canonical key (hex) to `{size, flags}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canon::CanonicalKey;
use crate::error::{io_err, Error, Result};
use crate::format::{parse_lattice_file, write_lattice_file};
use crate::lattice::Lattice;
use crate::properties::Property;

pub const INDEX_FILE: &str = "index.json";
pub const CACHE_ENV: &str = "LATMOD_CACHE";

/// `$LATMOD_CACHE`, or `latmod-catalog` in the working directory.
pub fn default_catalog_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("latmod-catalog"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub size: usize,
    pub flags: BTreeMap<Property, bool>,
}

impl CatalogEntry {
    pub fn compute(lattice: &Lattice) -> CatalogEntry {
        CatalogEntry {
            size: lattice.size(),
            flags: Property::ALL
                .iter()
                .map(|&p| (p, p.evaluate(lattice).verdict))
                .collect(),
        }
    }
}

/// Property requirement: `graded`, or negated as `!graded` / `not-graded`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub property: Property,
    pub expected: bool,
}

impl Predicate {
    pub fn parse(text: &str) -> Option<Predicate> {
        let text = text.trim();
        let (name, expected) = match text.strip_prefix('!').or_else(|| text.strip_prefix("not-")) {
            Some(rest) => (rest, false),
            None => (text, true),
        };
        Property::parse(name).map(|property| Predicate { property, expected })
    }

    pub fn accepts(&self, entry: &CatalogEntry) -> bool {
        entry.flags.get(&self.property) == Some(&self.expected)
    }
}

#[derive(Clone, Debug)]
pub struct LatticeCatalog {
    dir: PathBuf,
    entries: BTreeMap<CanonicalKey, CatalogEntry>,
}

pub fn file_name_for(key: &CanonicalKey) -> String {
    format!("{}.json", hex::encode(Sha256::digest(key.as_bytes())))
}

impl LatticeCatalog {
    pub fn create(dir: impl Into<PathBuf>) -> Result<LatticeCatalog> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(LatticeCatalog {
            dir,
            entries: BTreeMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entries(&self) -> &BTreeMap<CanonicalKey, CatalogEntry> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn path_for(&self, key: &CanonicalKey) -> PathBuf {
        self.dir.join(file_name_for(key))
    }

    /// Writes the canonical representative and records its flags. Returns
    /// `false` if the class was already present.
    pub fn insert(&mut self, lattice: &Lattice, entry: CatalogEntry) -> Result<bool> {
        let canonical = lattice.canonicalized();
        let key = canonical.canonical_form();
        if self.entries.contains_key(&key) {
            return Ok(false);
        }
        let path = self.path_for(&key);
        fs::write(&path, write_lattice_file(&canonical, None)).map_err(io_err(&path))?;
        self.entries.insert(key, entry);
        Ok(true)
    }

    pub fn load_lattice(&self, key: &CanonicalKey) -> Result<Lattice> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).map_err(|e| Error::CorruptIndex {
            key: key.to_hex(),
            reason: format!("cannot read {}: {e}", path.display()),
        })?;
        let lattice = parse_lattice_file(&text).map_err(|e| Error::CorruptIndex {
            key: key.to_hex(),
            reason: format!("{}: {e}", path.display()),
        })?;
        if lattice.canonical_form() != *key {
            return Err(Error::CorruptIndex {
                key: key.to_hex(),
                reason: format!("{} holds a different lattice", path.display()),
            });
        }
        Ok(lattice)
    }

    /// All stored lattices in key order.
    pub fn lattices(&self) -> Result<Vec<(CanonicalKey, Lattice)>> {
        self.entries
            .keys()
            .map(|k| Ok((k.clone(), self.load_lattice(k)?)))
            .collect()
    }

    pub fn save(&self) -> Result<()> {
        let index: BTreeMap<String, &CatalogEntry> =
            self.entries.iter().map(|(k, e)| (k.to_hex(), e)).collect();
        let path = self.dir.join(INDEX_FILE);
        let text = serde_json::to_string_pretty(&index).expect("index serializes");
        fs::write(&path, text + "\n").map_err(io_err(&path))
    }

    /// Reads the index and re-validates every stored lattice.
    pub fn load(dir: impl Into<PathBuf>) -> Result<LatticeCatalog> {
        let dir = dir.into();
        let path = dir.join(INDEX_FILE);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let raw: BTreeMap<String, CatalogEntry> =
            serde_json::from_str(&text).map_err(|e| Error::Syntax {
                line: e.line(),
                column: e.column(),
                message: format!("{}: {e}", path.display()),
            })?;
        let mut entries = BTreeMap::new();
        for (hex_key, entry) in raw {
            let key = CanonicalKey::from_hex(&hex_key).ok_or_else(|| Error::CorruptIndex {
                key: hex_key.clone(),
                reason: "key is not hex".into(),
            })?;
            entries.insert(key, entry);
        }
        let catalog = LatticeCatalog { dir, entries };
        for (key, entry) in &catalog.entries {
            let lattice = catalog.load_lattice(key)?;
            if lattice.size() != entry.size {
                return Err(Error::CorruptIndex {
                    key: key.to_hex(),
                    reason: format!("size {} recorded, {} stored", entry.size, lattice.size()),
                });
            }
        }
        Ok(catalog)
    }
}

/// Evaluates all property flags (in parallel) and stores the lattices that
/// satisfy every predicate.
pub fn filter_corpus(
    lattices: impl IntoIterator<Item = Lattice>,
    predicates: &[Predicate],
    dir: impl Into<PathBuf>,
) -> Result<LatticeCatalog> {
    let mut catalog = LatticeCatalog::create(dir)?;
    let all: Vec<Lattice> = lattices.into_iter().collect();
    let flagged: Vec<(Lattice, CatalogEntry)> = all
        .into_par_iter()
        .map(|l| {
            let entry = CatalogEntry::compute(&l);
            (l, entry)
        })
        .filter(|(_, e)| predicates.iter().all(|p| p.accepts(e)))
        .collect();
    for (l, e) in flagged {
        catalog.insert(&l, e)?;
    }
    Ok(catalog)
}

pub fn catalog_save(catalog: &LatticeCatalog) -> Result<()> {
    catalog.save()
}

pub fn catalog_load(path: impl Into<PathBuf>) -> Result<LatticeCatalog> {
    LatticeCatalog::load(path)
}
