//! Optional on-disk memo tables under `ROOTMULT_CACHE_DIR`.
//!
//! `stirling.tsv` holds `kind,n,k<TAB>value` lines and `characters.tsv`
//! holds `lambda|rho<TAB>value` lines. Unreadable or corrupt files are
//! ignored with a warning.

use std::path::PathBuf;

use rootmult_core::character::CharacterEngine;
use rootmult_core::number_theory::StirlingTable;

pub const ENV: &str = "ROOTMULT_CACHE_DIR";

pub fn dir() -> Option<PathBuf> {
    std::env::var_os(ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub fn load(chars: &CharacterEngine) {
    let Some(dir) = dir() else { return };
    if let Ok(text) = std::fs::read_to_string(dir.join("stirling.tsv")) {
        match StirlingTable::from_tsv(&text) {
            Ok(table) => {
                let rows = table.rows();
                if StirlingTable::install_global(table).is_ok() {
                    log::debug!("loaded {rows} Stirling rows from cache");
                }
            }
            Err(e) => log::warn!("ignoring Stirling cache: {e}"),
        }
    }
    if let Ok(text) = std::fs::read_to_string(dir.join("characters.tsv")) {
        match chars.load_tsv(&text) {
            Ok(count) => log::debug!("loaded {count} character values from cache"),
            Err(e) => log::warn!("ignoring character cache: {e}"),
        }
    }
}

pub fn save(chars: &CharacterEngine) {
    let Some(dir) = dir() else { return };
    let result = std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(dir.join("stirling.tsv"), StirlingTable::global().to_tsv()))
        .and_then(|_| std::fs::write(dir.join("characters.tsv"), chars.to_tsv()));
    if let Err(e) = result {
        log::warn!("could not write cache to {}: {e}", dir.display());
    }
}
