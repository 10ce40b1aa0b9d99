//! Corpus manifests.
//!
//! A corpus is given as one of:
//! - a JSON manifest `{"files": [{"path": "a.mel", "transpose": -2}], ...}`
//!   with optional `curve`, `generator` and `out` sections;
//! - a flat text manifest with one `file, transpose` pair per line
//!   (transpose optional, `#` comments);
//! - a directory, whose `*.mel` and `*.txt` files are used in name order;
//! - a single `*.mel` melody file.
//!
//! Relative paths resolve against the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::read_melody_file;
use crate::seeder::SeedCorpus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub transpose: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub struct CurveSettings {
    pub g_min: f64,
    pub g_max: f64,
    pub kappa: f64,
}

/// Optional generator overrides; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSettings {
    pub seed: Option<u64>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub inc_step: Option<f64>,
    pub dec_step: Option<f64>,
    pub notes: Option<usize>,
    pub feedback: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunManifest {
    pub entries: Vec<ManifestEntry>,
    pub curve: Option<CurveSettings>,
    pub generator: GeneratorSettings,
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonManifest {
    files: Vec<JsonEntry>,
    #[serde(default)]
    curve: Option<CurveSettings>,
    #[serde(default)]
    generator: Option<GeneratorSettings>,
    #[serde(default)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEntry {
    path: PathBuf,
    #[serde(default)]
    transpose: Option<i32>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunManifest {
    /// Loads a corpus description; `default_transpose` applies to entries
    /// that do not name their own.
    pub fn load(path: &Path, default_transpose: i32) -> Result<Self> {
        let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
        if meta.is_dir() {
            return Self::from_dir(path, default_transpose);
        }
        if path.extension().is_some_and(|e| e == "mel") {
            return Ok(Self {
                entries: vec![ManifestEntry {
                    path: path.to_path_buf(),
                    transpose: default_transpose,
                }],
                ..Default::default()
            });
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let is_json =
            path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        if is_json {
            Self::from_json(&text, base, path, default_transpose)
        } else {
            Self::from_flat(&text, base, path, default_transpose)
        }
    }

    fn from_dir(dir: &Path, transpose: i32) -> Result<Self> {
        let mut paths = Vec::new();
        for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            let melody_like = path.extension().is_some_and(|e| e == "mel" || e == "txt");
            if path.is_file() && melody_like {
                paths.push(path);
            }
        }
        paths.sort();
        Ok(Self {
            entries: paths
                .into_iter()
                .map(|path| ManifestEntry { path, transpose })
                .collect(),
            ..Default::default()
        })
    }

    fn from_json(text: &str, base: &Path, path: &Path, transpose: i32) -> Result<Self> {
        let parsed: JsonManifest =
            serde_json::from_str(text).map_err(|e| Error::format(path, e.to_string()))?;
        Ok(Self {
            entries: parsed
                .files
                .into_iter()
                .map(|f| ManifestEntry {
                    path: resolve(base, &f.path),
                    transpose: f.transpose.unwrap_or(transpose),
                })
                .collect(),
            curve: parsed.curve,
            generator: parsed.generator.unwrap_or_default(),
            out: parsed.out.map(|o| resolve(base, &o)),
        })
    }

    fn from_flat(text: &str, base: &Path, path: &Path, transpose: i32) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (file, shift) = match line.split_once(',') {
                Some((file, shift)) => {
                    let shift = shift.trim().parse::<i32>().map_err(|_| {
                        Error::format(
                            path,
                            format!("line {}: invalid transpose `{}`", n + 1, shift.trim()),
                        )
                    })?;
                    (file.trim(), shift)
                }
                None => (line, transpose),
            };
            entries.push(ManifestEntry {
                path: resolve(base, Path::new(file)),
                transpose: shift,
            });
        }
        Ok(Self {
            entries,
            ..Default::default()
        })
    }

    /// Reads every referenced melody file.
    pub fn load_corpus(&self) -> Result<SeedCorpus> {
        if self.entries.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut corpus = SeedCorpus::default();
        for entry in &self.entries {
            corpus.push(read_melody_file(&entry.path)?, entry.transpose);
        }
        Ok(corpus)
    }
}
