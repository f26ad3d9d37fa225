//! The pinned conventions and their hash, stamped into every table the CLI emits.

use sha2::{Digest, Sha256};

/// The convention ledger as text.
pub const LEDGER: &str = include_str!("../data/conventions.ledger");

/// Hex SHA-256 of [`LEDGER`].
pub fn ledger_hash() -> String {
    let digest = Sha256::digest(LEDGER.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// The first 16 hex digits of [`ledger_hash`].
pub fn short_hash() -> String {
    ledger_hash()[..16].to_string()
}

/// Look up one entry by section and key.
pub fn entry(section: &str, key: &str) -> Option<&'static str> {
    let mut current = "";
    for line in LEDGER.lines() {
        let line = line.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name;
            continue;
        }
        if current != section {
            continue;
        }
        if let Some(rest) = line.strip_prefix(key) {
            if rest.starts_with(char::is_whitespace) {
                return Some(rest.trim());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_entries_resolve() {
        assert_eq!(ledger_hash(), ledger_hash());
        assert_eq!(ledger_hash().len(), 64);
        assert!(entry("podles", "del").unwrap().starts_with("del(x"));
        assert!(entry("podles", "line-bundle").unwrap().contains("-k"));
        assert_eq!(entry("nowhere", "del"), None);
    }
}
