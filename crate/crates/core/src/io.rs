//! JSON group files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{AssocCheck, FiniteGroup, GroupError, MAX_ORDER};
use crate::perm::{from_permutation_generators, PermutationGenSet};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("declared order {declared} but the table has {actual} rows")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("expected a Cayley table or permutation generators")]
    UnknownFormat,
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default)]
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            name: g.name().unwrap_or_default().to_string(),
            order: g.order(),
            table: g.table_rows(),
        }
    }
}

/// A loaded group plus the relabeling applied to its table, if any.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub group: FiniteGroup,
    pub relabeling: Option<Vec<usize>>,
}

/// Parses either a Cayley-table file or a permutation-generator file.
pub fn parse_group_json(text: &str, check: AssocCheck) -> Result<Loaded, LoadError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("table").is_some() {
        let file: GroupFile = serde_json::from_value(value).map_err(LoadError::from)?;
        if file.order != file.table.len() {
            return Err(LoadError::OrderMismatch { declared: file.order, actual: file.table.len() });
        }
        let imported = FiniteGroup::from_cayley_table_with(file.table, check)?;
        let group = if file.name.is_empty() {
            imported.group
        } else {
            imported.group.with_name(file.name)
        };
        Ok(Loaded { group, relabeling: imported.relabeling })
    } else if value.get("generators").is_some() {
        let gens: PermutationGenSet = serde_json::from_value(value).map_err(LoadError::from)?;
        let group = from_permutation_generators(&gens, MAX_ORDER)?;
        Ok(Loaded { group, relabeling: None })
    } else {
        Err(LoadError::UnknownFormat)
    }
}

pub fn group_to_json(g: &FiniteGroup) -> String {
    serde_json::to_string(&GroupFile::from_group(g)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn round_trip() {
        let g = builders::dihedral(5).unwrap();
        let back = parse_group_json(&group_to_json(&g), AssocCheck::Auto).unwrap();
        assert_eq!(back.group, g);
        assert_eq!(back.group.name(), Some("d5"));
    }

    #[test]
    fn permutation_file() {
        let l = parse_group_json(r#"{"degree":4,"generators":[[1,2,3,0]]}"#, AssocCheck::Auto).unwrap();
        assert_eq!(l.group.order(), 4);
        let l = parse_group_json(r#"{"degree":5,"generators":[]}"#, AssocCheck::Auto).unwrap();
        assert_eq!(l.group.order(), 1);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_group_json("{\"order\": 2,", AssocCheck::Auto),
            Err(LoadError::Json { line: 1, .. })
        ));
        assert!(matches!(
            parse_group_json(r#"{"name":"x","order":3,"table":[[0,1],[1,0]]}"#, AssocCheck::Auto),
            Err(LoadError::OrderMismatch { declared: 3, actual: 2 })
        ));
        assert!(matches!(
            parse_group_json(r#"{"name":"x","order":2,"table":[[0,1],[1,1]]}"#, AssocCheck::Auto),
            Err(LoadError::Group(GroupError::NotClosed { row: 1, col: 1, .. }))
        ));
    }
}
