//! Built-in recipe list covering every group of order at most 16, selected
//! larger groups, and the abelian p-groups up to order 64.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Group, GroupRecord};
use crate::iso::{fingerprint, Fingerprint, IsoClassifier};
use crate::limits::Limits;
use crate::recipe::{construct_with, Recipe};

/// Number of isomorphism classes of groups of each order `1..=16`.
pub const GROUP_COUNTS: [usize; 16] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];

/// Every class of order at most 16. A few alternative recipes for the same
/// class are listed after the preferred one; deduplication drops them.
const SMALL: &[(&str, &str)] = &[
    ("C1", "C(1)"),
    ("C2", "C(2)"),
    ("C3", "C(3)"),
    ("C4", "C(4)"),
    ("C2xC2", "P(C(2),C(2))"),
    ("D4", "D(2)"),
    ("C4'", "Dic(1)"),
    ("C5", "C(5)"),
    ("C6", "C(6)"),
    ("S3", "S(3)"),
    ("D6", "D(3)"),
    ("C2xC3", "P(C(2),C(3))"),
    ("C7", "C(7)"),
    ("C8", "C(8)"),
    ("C4xC2", "P(C(4),C(2))"),
    ("C2^3", "P(C(2),P(C(2),C(2)))"),
    ("D8", "D(4)"),
    ("Q8", "Dic(2)"),
    ("C9", "C(9)"),
    ("C3xC3", "P(C(3),C(3))"),
    ("C10", "C(10)"),
    ("D10", "D(5)"),
    ("C11", "C(11)"),
    ("C12", "C(12)"),
    ("C6xC2", "P(C(6),C(2))"),
    ("D12", "D(6)"),
    ("Dic12", "Dic(3)"),
    ("A4", "SD(P(C(2),C(2)),C(3),action=[1:[0,2,3,1]])"),
    ("S3xC2", "P(S(3),C(2))"),
    ("C13", "C(13)"),
    ("C14", "C(14)"),
    ("D14", "D(7)"),
    ("C15", "C(15)"),
    ("C16", "C(16)"),
    ("C8xC2", "P(C(8),C(2))"),
    ("C4xC4", "P(C(4),C(4))"),
    ("C4xC2xC2", "P(C(4),P(C(2),C(2)))"),
    ("C2^4", "P(C(2),P(C(2),P(C(2),C(2))))"),
    ("D16", "D(8)"),
    ("Q16", "Dic(4)"),
    ("SD16", "SD(C(8),C(2),action=[1:[0,3,6,1,4,7,2,5]])"),
    ("M16", "SD(C(8),C(2),action=[1:[0,5,2,7,4,1,6,3]])"),
    ("D8xC2", "P(D(4),C(2))"),
    ("Q8xC2", "P(Dic(2),C(2))"),
    ("C4:C4", "SD(C(4),C(4),action=[1:[0,3,2,1]])"),
    ("C2^2:C4", "SD(P(C(2),C(2)),C(4),action=[1:[0,2,1,3]])"),
    ("C4oD8", "CQ(P(C(4),D(4)),gens=[18])"),
];

/// A selection of groups of orders 17 to 24; not complete for any order
/// that is not prime.
const EXTRAS: &[(&str, &str)] = &[
    ("C17", "C(17)"),
    ("C18", "C(18)"),
    ("C6xC3", "P(C(6),C(3))"),
    ("D18", "D(9)"),
    ("S3xC3", "P(S(3),C(3))"),
    ("C3^2:C2", "SD(P(C(3),C(3)),C(2),action=[1:[0,2,1,6,8,7,3,5,4]])"),
    ("C19", "C(19)"),
    ("C20", "C(20)"),
    ("C10xC2", "P(C(10),C(2))"),
    ("D20", "D(10)"),
    ("Dic20", "Dic(5)"),
    ("F20", "SD(C(5),C(4),action=[1:[0,2,4,1,3]])"),
    ("C21", "C(21)"),
    ("C7:C3", "SD(C(7),C(3),action=[1:[0,2,4,6,1,3,5]])"),
    ("C22", "C(22)"),
    ("D22", "D(11)"),
    ("C23", "C(23)"),
    ("C24", "C(24)"),
    ("C12xC2", "P(C(12),C(2))"),
    ("C6xC2xC2", "P(C(6),P(C(2),C(2)))"),
    ("S4", "S(4)"),
    ("SL(2,3)", "SD(Dic(2),C(3),action=[1:[0,4,2,6,5,1,7,3]])"),
    ("D24", "D(12)"),
    ("Dic24", "Dic(6)"),
    ("C3:C8", "SD(C(3),C(8),action=[1:[0,2,1]])"),
    ("A4xC2", "P(SD(P(C(2),C(2)),C(3),action=[1:[0,2,3,1]]),C(2))"),
    ("S3xC4", "P(S(3),C(4))"),
    ("D12xC2", "P(D(6),C(2))"),
    ("Dic12xC2", "P(Dic(3),C(2))"),
    ("D8xC3", "P(D(4),C(3))"),
    ("Q8xC3", "P(Dic(2),C(3))"),
];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub recipe: Recipe,
    pub group: Group,
    pub fingerprint: Fingerprint,
}

/// Which groups to include.
#[derive(Debug, Clone, Copy)]
pub struct CatalogOptions {
    pub max_order: usize,
    /// Selected groups of order 17 to 24.
    pub extras: bool,
    /// All abelian groups of prime-power order.
    pub abelian_p_groups: bool,
    pub limits: Limits,
}

impl CatalogOptions {
    pub fn new(max_order: usize) -> Self {
        Self { max_order, extras: false, abelian_p_groups: false, limits: Limits::default() }
    }
}

pub fn builtin_catalog(max_order: usize) -> Result<Vec<CatalogEntry>> {
    builtin_catalog_with(&CatalogOptions::new(max_order))
}

pub fn builtin_catalog_with(opts: &CatalogOptions) -> Result<Vec<CatalogEntry>> {
    if opts.max_order > opts.limits.order_cap {
        return Err(Error::OrderBound {
            what: "construction",
            order: opts.max_order,
            cap: opts.limits.order_cap,
        });
    }
    let mut candidates: Vec<(String, Recipe)> = SMALL
        .iter()
        .chain(if opts.extras { EXTRAS } else { &[] })
        .map(|(name, text)| (name.to_string(), text.parse().expect("built-in recipe parses")))
        .collect();
    if opts.abelian_p_groups {
        candidates.extend(abelian_p_group_recipes(opts.max_order));
    }
    // A central quotient only knows its base order, so filter again once
    // built.
    candidates.retain(|(_, r)| match r {
        Recipe::CentralQuotient { base, .. } => base.order().is_some_and(|n| n <= opts.limits.order_cap),
        _ => r.order().is_some_and(|n| n <= opts.max_order),
    });
    let built: Vec<Group> = candidates
        .par_iter()
        .map(|(_, r)| construct_with(r, &opts.limits))
        .collect::<Result<_>>()?;
    let mut candidates: Vec<((String, Recipe), Group)> =
        candidates.into_iter().zip(built).filter(|(_, g)| g.order() <= opts.max_order).collect();
    // Stable: keeps list order within one group order.
    candidates.sort_by_key(|(_, g)| g.order());

    let mut classes = IsoClassifier::new();
    let mut out = Vec::new();
    for ((name, recipe), group) in candidates {
        let before = classes.len();
        if classes.classify(&group) < before {
            continue;
        }
        out.push(CatalogEntry {
            fingerprint: fingerprint(&group),
            group: group.with_name(name.clone()),
            name,
            recipe,
        });
    }
    Ok(out)
}

/// One recipe per abelian p-group of order at most `max_order`, as products
/// of cyclic groups indexed by the partitions of the exponent.
pub fn abelian_p_group_recipes(max_order: usize) -> Vec<(String, Recipe)> {
    let mut out = Vec::new();
    for p in (2..=max_order).filter(|&p| crate::subgroups::is_prime(p as u64)) {
        let mut k = 1;
        while p.pow(k) <= max_order {
            for part in partitions(k as usize, k as usize) {
                let sizes: Vec<usize> = part.iter().map(|&e| p.pow(e as u32)).collect();
                let name = sizes.iter().map(|s| format!("C{s}")).collect::<Vec<_>>().join("x");
                out.push((name, Recipe::product_of(sizes.into_iter().map(Recipe::Cyclic))));
            }
            k += 1;
        }
    }
    out
}

/// Partitions of `n` into parts of size at most `max`, parts non-increasing.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Looks up the catalog name of the class of `g`, if any.
pub fn identify<'a>(entries: &'a [CatalogEntry], g: &Group) -> Option<&'a str> {
    let fp = fingerprint(g);
    entries
        .iter()
        .find(|e| e.fingerprint == fp && crate::iso::are_isomorphic(&e.group, g))
        .map(|e| e.name.as_str())
}

pub fn export_group(g: &Group, path: &Path) -> Result<()> {
    write_json(path, &g.to_record())
}

pub fn import_group(path: &Path) -> Result<Group> {
    import_group_with(path, &Limits::default())
}

pub fn import_group_with(path: &Path, limits: &Limits) -> Result<Group> {
    let record: GroupRecord = read_json(path)?;
    record.to_group(limits)
}

pub fn export_catalog(entries: &[CatalogEntry], path: &Path) -> Result<()> {
    let records: Vec<GroupRecord> = entries.iter().map(|e| e.group.to_record()).collect();
    write_json(path, &records)
}

/// Reads a catalog file without validating the tables, so callers can
/// report bad entries individually.
pub fn read_catalog(path: &Path) -> Result<Vec<GroupRecord>> {
    read_json(path)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string(value).map_err(|source| Error::Json { path: path.into(), source })?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io { path: path.into(), source })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.into(), source })
}
