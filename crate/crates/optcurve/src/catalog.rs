//! Loading and checksum verification of the catalog data file.

use std::path::{Path, PathBuf};

use optcurve_core::catalog::Catalog;
use sha2::{Digest, Sha256};

/// Environment variable that overrides the embedded catalog.
pub const CATALOG_ENV: &str = "OPTCURVE_CATALOG";
pub const CATALOG_VERSION: &str = "v1";

const EMBEDDED: &str = include_str!("../data/catalog.json");
const EMBEDDED_SHA256: &str = include_str!("../data/catalog.json.sha256");

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("checksum mismatch for {name}: expected {expected}, found {found}")]
    Checksum { name: String, expected: String, found: String },
    #[error("malformed checksum file {0}")]
    ChecksumFile(PathBuf),
    #[error("catalog version {found} is not {CATALOG_VERSION}")]
    Version { found: String },
    #[error("catalog does not parse: {0}")]
    Parse(#[from] serde_json::Error),
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

fn expected_digest(sidecar: &str) -> Option<&str> {
    sidecar.split_whitespace().next().filter(|d| d.len() == 64)
}

/// Parses catalog text after checking it against a `sha256sum`-style line.
pub fn parse_checked(text: &str, sidecar: &str, name: &str) -> Result<Catalog, CatalogError> {
    let expected = expected_digest(sidecar).ok_or_else(|| CatalogError::ChecksumFile(name.into()))?;
    let found = sha256_hex(text.as_bytes());
    if found != expected {
        return Err(CatalogError::Checksum { name: name.into(), expected: expected.into(), found });
    }
    let catalog: Catalog = serde_json::from_str(text)?;
    if catalog.version != CATALOG_VERSION {
        return Err(CatalogError::Version { found: catalog.version });
    }
    Ok(catalog)
}

pub fn embedded() -> Result<Catalog, CatalogError> {
    parse_checked(EMBEDDED, EMBEDDED_SHA256, "embedded catalog")
}

/// Reads `path` and its `<path>.sha256` companion.
pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
    let read =
        |p: &Path| std::fs::read_to_string(p).map_err(|source| CatalogError::Io { path: p.to_path_buf(), source });
    let text = read(path)?;
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".sha256");
    let sidecar = read(Path::new(&sidecar))?;
    parse_checked(&text, &sidecar, &path.display().to_string())
}

/// Explicit path, else the environment override, else the embedded copy.
pub fn resolve(explicit: Option<&Path>) -> Result<Catalog, CatalogError> {
    if let Some(p) = explicit {
        return load(p);
    }
    match std::env::var_os(CATALOG_ENV) {
        Some(p) if !p.is_empty() => load(Path::new(&p)),
        _ => embedded(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_catalog_verifies() {
        let c = embedded().unwrap();
        assert_eq!(c.lattices.len(), 22);
        assert_eq!(c.fixtures(-11).unwrap().elliptic.len(), 11);
    }

    #[test]
    fn tampered_text_is_rejected() {
        let bad = EMBEDDED.replacen("\"v1\"", "\"v1\" ", 1);
        assert!(matches!(parse_checked(&bad, EMBEDDED_SHA256, "x"), Err(CatalogError::Checksum { .. })));
    }
}
