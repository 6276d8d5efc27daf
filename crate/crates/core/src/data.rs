//! Group data files.
//!
//! Each shipped group is a JSON file with permutation generators given as
//! cycle lists on 1-based points, a claimed small-group catalog id, and a
//! fingerprint (order, element-order histogram, abelianization, center
//! order). The fingerprint is validated by brute force against the built
//! table; full isomorphism-class certification is not attempted — the
//! reference-table reproduction is the authoritative downstream check.
//!
//! The data directory defaults to `data/groups` at the repository root and
//! can be overridden with the `FQW_DATA_DIR` environment variable.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::group::{GroupTable, PermutationGenerators};
use crate::{Error, Result};

pub const DATA_DIR_ENV: &str = "FQW_DATA_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: usize,
    /// Sorted `(element order, count)` pairs.
    pub element_order_histogram: Vec<(u32, usize)>,
    /// Invariant factors of the abelianization, ascending chain.
    pub abelianization: Vec<u64>,
    pub center_order: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    /// `(order, index)` in the standard small-group catalog; claimed, not
    /// certified here.
    pub claimed_catalog_id: (u64, u64),
    pub degree: usize,
    /// Generators as lists of disjoint cycles on 1-based points.
    pub generators: Vec<Vec<Vec<usize>>>,
    pub fingerprint: GroupFingerprint,
}

/// The configured group-data directory: `FQW_DATA_DIR` when set, otherwise
/// `data/groups` at the repository root.
pub fn data_dir() -> PathBuf {
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/groups")
}

/// Interprets `spec` as a path when it points at an existing file, otherwise
/// as a bare group name under the data directory.
pub fn resolve_group_path(spec: &str) -> PathBuf {
    let direct = PathBuf::from(spec);
    if direct.is_file() {
        return direct;
    }
    let mut named = data_dir().join(spec);
    if named.extension().is_none() {
        named.set_extension("json");
    }
    named
}

pub fn load_group_file(path: &Path) -> Result<GroupFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::GroupData {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let file: GroupFile = serde_json::from_str(&text).map_err(|e| Error::GroupData {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    Ok(file)
}

pub fn build_group(file: &GroupFile) -> Result<GroupTable> {
    let gens = PermutationGenerators::from_cycle_lists(file.degree, &file.generators)?;
    let table = GroupTable::from_permutations(&file.name, &gens)?;
    if table.order() != file.fingerprint.order {
        return Err(Error::GroupData {
            path: file.name.clone(),
            reason: format!(
                "generated order {} differs from fingerprint order {}",
                table.order(),
                file.fingerprint.order
            ),
        });
    }
    Ok(table)
}

/// Loads and builds a group by name or path; the generated order is checked
/// against the fingerprint, the finer fingerprint data via
/// [`verify_fingerprint`].
pub fn load_group(spec: &str) -> Result<(GroupFile, GroupTable)> {
    let path = resolve_group_path(spec);
    let file = load_group_file(&path)?;
    let table = build_group(&file)?;
    Ok((file, table))
}

pub fn fingerprint_of(table: &GroupTable) -> GroupFingerprint {
    GroupFingerprint {
        order: table.order(),
        element_order_histogram: table.order_histogram(),
        abelianization: table.abelian_invariants(),
        center_order: table.center_order(),
    }
}

pub fn verify_fingerprint(table: &GroupTable, expected: &GroupFingerprint) -> Result<()> {
    let got = fingerprint_of(table);
    if &got != expected {
        return Err(Error::GroupData {
            path: table.name().to_string(),
            reason: format!("fingerprint mismatch: built {got:?}, file says {expected:?}"),
        });
    }
    Ok(())
}

/// File stems of all shipped groups.
pub const SHIPPED_GROUPS: &[&str] = &[
    "a5", "s4xz2", "g32", "z5sq", "s4", "g16", "d4xz2", "z2_4", "z3sq", "z2_3",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_shipped_groups_load_and_match_fingerprints() {
        for name in SHIPPED_GROUPS {
            let (file, table) = load_group(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            verify_fingerprint(&table, &file.fingerprint)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            table.check_table().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn missing_group_is_reported() {
        let err = load_group("no-such-group").unwrap_err();
        assert!(matches!(err, Error::GroupData { .. }));
    }
}
