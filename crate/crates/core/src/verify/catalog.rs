//! Built-in group names and the shipped catalog.

use crate::builders;
use crate::group::{FiniteGroup, GroupError};

/// Builds a group from a short name such as `a5`, `d4`, `psl2_7`, `c7:c3:2` or `s3xc2`.
///
/// Cyclic groups accept both `c12` and `z12`; `dN` is dihedral of order `2N`.
/// Factors joined by `x` form a direct product.
type Builder = fn(usize) -> Result<FiniteGroup, GroupError>;

pub fn resolve(name: &str) -> Result<FiniteGroup, GroupError> {
    let name = name.trim().to_ascii_lowercase();
    if name.contains('x') {
        let mut parts = name.split('x');
        let mut acc = resolve_atom(parts.next().unwrap_or_default())?;
        for p in parts {
            acc = builders::direct_product(&acc, &resolve_atom(p)?)?;
        }
        return Ok(acc);
    }
    resolve_atom(&name)
}

fn resolve_atom(name: &str) -> Result<FiniteGroup, GroupError> {
    let bad = || GroupError::UnsupportedParameter(format!("unknown group name '{name}'"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if let Some(rest) = name.strip_prefix('c') {
        if rest.contains(':') {
            let f: Vec<&str> = rest.split(':').collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let m = f[1].strip_prefix('c').ok_or_else(bad)?;
            return builders::cyclic_semidirect(num(f[0])?, num(m)?, num(f[2])?);
        }
    }
    let simple = [
        ("q8", builders::quaternion8 as fn() -> FiniteGroup),
        ("t3ii", builders::type3_group_ii),
    ];
    if let Some((_, f)) = simple.iter().find(|(n, _)| *n == name) {
        return Ok(f());
    }
    let prefixed: [(&str, Builder); 15] = [
        ("psl2_", builders::psl2),
        ("l2_", builders::psl2),
        ("pgl2_", builders::pgl2),
        ("sl2_", builders::sl2),
        ("t3i_", builders::type3_group_i),
        ("heis", builders::heisenberg),
        ("dic", builders::dicyclic),
        ("c", builders::cyclic),
        ("z", builders::cyclic),
        ("d", builders::dihedral),
        ("s", builders::symmetric),
        ("a", builders::alternating),
        ("cyclic", builders::cyclic),
        ("dihedral", builders::dihedral),
        ("symmetric", builders::symmetric),
    ];
    for (prefix, f) in prefixed {
        if let Some(rest) = name.strip_prefix(prefix) {
            if let Ok(k) = rest.parse::<usize>() {
                return f(k);
            }
        }
    }
    Err(bad())
}

/// Names in the shipped catalog, before any order filtering.
fn catalog_names() -> Vec<String> {
    let mut v: Vec<String> = Vec::new();
    v.extend((1..=64).map(|n| format!("c{n}")));
    v.extend((3..=32).map(|n| format!("d{n}")));
    v.extend((2..=16).map(|n| format!("dic{n}")));
    v.extend(["s3", "s4", "s5", "s6", "a4", "a5", "a6"].map(String::from));
    v.extend(["sl2_3", "sl2_5", "heis3", "heis5", "t3i_1", "t3i_2", "t3ii"].map(String::from));
    for q in [5, 7, 8, 9, 11, 13] {
        v.push(format!("psl2_{q}"));
    }
    for q in [7, 11, 13] {
        v.push(format!("pgl2_{q}"));
    }
    v.extend(
        [
            "c7:c3:2", "c13:c3:3", "c19:c3:7", "c5:c4:2", "c7:c6:3", "c3:c8:2", "c5:c8:2", "c4:c4:3",
            "c8:c2:3", "c8:c2:5", "c16:c2:7", "c16:c2:9", "c9:c3:4", "c11:c5:3", "c13:c4:5",
        ]
        .map(String::from),
    );
    v.extend(
        [
            "c2xc2", "c2xc2xc2", "c2xc2xc2xc2", "c2xc4", "c4xc4", "c2xc8", "c2xc2xc4", "c3xc3", "c3xc9",
            "c3xc3xc3", "c2xc6", "c6xc6", "c2xc2xc3", "c2xc2xc2xc3", "s3xc2", "s3xc3", "s3xc4", "s3xs3",
            "s3xc2xc2", "d4xc2", "q8xc2", "d4xc3", "q8xc3", "a4xc2", "a4xc3", "a4xc4", "d5xc2", "d5xc3",
            "s4xc2", "sl2_3xc2", "heis3xc2", "d4xd4", "q8xq8", "d4xq8", "d4xc2xc2", "q8xc4", "d4xc4",
            "a4xs3", "s3xd5", "a5xc2", "a5xc3", "s4xc3", "a4xa4", "d4xs3", "q8xs3", "t3i_1xc3",
            "t3i_1xc5", "c7:c3:2xc2", "c7:c3:2xc3", "dic3xc2", "dic3xc4",
        ]
        .map(String::from),
    );
    v
}

/// The catalog groups of order at most `order_cap`, sorted by order then name.
pub fn catalog(order_cap: usize) -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = catalog_names()
        .iter()
        .filter_map(|n| resolve(n).ok())
        .filter(|g| g.order() <= order_cap)
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.name().cmp(&b.name())));
    out.dedup_by(|a, b| a.name() == b.name());
    out
}

/// Display name, falling back to the table hash prefix.
pub fn label(g: &FiniteGroup) -> String {
    g.name().map(String::from).unwrap_or_else(|| format!("g{}_{}", g.order(), &g.table_hash()[..12]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases() {
        assert_eq!(resolve("a5").unwrap().order(), 60);
        assert_eq!(resolve("l2_7").unwrap().order(), 168);
        assert_eq!(resolve("z5").unwrap().order(), 5);
        assert_eq!(resolve("d4").unwrap().order(), 8);
        assert_eq!(resolve("c7:c3:2").unwrap().order(), 21);
        assert_eq!(resolve("s3xc2xc2").unwrap().order(), 24);
        assert_eq!(resolve("t3ii").unwrap().order(), 64);
        assert!(resolve("nonsense").is_err());
        assert!(resolve("s8").is_err());
    }

    #[test]
    fn catalog_is_sorted_and_named() {
        let c = catalog(64);
        assert!(c.windows(2).all(|w| w[0].order() <= w[1].order()));
        assert!(c.iter().all(|g| g.name().is_some()));
        assert!(c.iter().any(|g| g.name() == Some("q8")));
        let mut names: Vec<_> = c.iter().map(|g| g.name().unwrap().to_string()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
    }
}
