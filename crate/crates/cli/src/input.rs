use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// An input file as recorded in a JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

/// A file's text plus its provenance record.
pub struct Loaded {
    pub text: String,
    pub record: InputFile,
}

pub fn load(path: &Path) -> Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .with_context(|| format!("{} is not valid UTF-8", path.display()))?;
    Ok(Loaded {
        text,
        record: InputFile {
            path: path.display().to_string(),
            sha256,
        },
    })
}

pub fn load_optional(path: Option<&PathBuf>) -> Result<Option<Loaded>> {
    path.map(|p| load(p)).transpose()
}

/// Adds the file name to errors raised while interpreting its contents.
pub fn in_file<T>(loaded: &Loaded, result: kappax::Result<T>) -> Result<T> {
    result.with_context(|| format!("in {}", loaded.record.path))
}
