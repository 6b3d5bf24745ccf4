//! JSON interchange for groups and sequences.
//!
//! Groups serialize either as a construction recipe
//! `{"kind": "dihedral", "n": 5}` or as a raw Cayley table
//! `{"order": n, "identity": i, "names": [...], "table": [...]}` with the
//! table row-major.  Sequences serialize as
//! `{"group": <group or spec string>, "terms": ["a^4", "t^2"]}` where each
//! term is an element name with an optional `^k` multiplicity.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Group, GroupKind};
use crate::seq::Sequence;

/// Serialized form of a group.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Presented(GroupKind),
    Raw {
        order: usize,
        identity: usize,
        names: Vec<String>,
        table: Vec<usize>,
    },
}

impl GroupJson {
    pub fn from_group(group: &FiniteGroup) -> Self {
        match group.kind() {
            GroupKind::Generic => GroupJson::Raw {
                order: group.order(),
                identity: group.identity(),
                names: group.names().to_vec(),
                table: (0..group.order())
                    .flat_map(|x| (0..group.order()).map(move |y| (x, y)))
                    .map(|(x, y)| group.mul(x, y))
                    .collect(),
            },
            kind => GroupJson::Presented(kind),
        }
    }

    pub fn into_group(self) -> Result<FiniteGroup> {
        match self {
            GroupJson::Presented(kind) => FiniteGroup::build(kind),
            GroupJson::Raw {
                order,
                identity,
                names,
                table,
            } => {
                if table.len() != order * order {
                    return Err(Error::validation("table length must be order squared"));
                }
                let g = FiniteGroup::from_table(table, Some(names))?;
                if g.identity() != identity {
                    return Err(Error::validation(format!(
                        "declared identity {identity} does not match the table ({})",
                        g.identity()
                    )));
                }
                Ok(g)
            }
        }
    }
}

/// Group reference inside a sequence file: inline JSON or a spec string
/// like `"dihedral:5"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Spec(String),
    Inline(GroupJson),
}

impl GroupRef {
    pub fn resolve(self) -> Result<FiniteGroup> {
        match self {
            GroupRef::Spec(text) => parse_group_spec(&text),
            GroupRef::Inline(json) => json.into_group(),
        }
    }
}

/// Parses `cyclic:n`, `dihedral:n`, `dicyclic:n`.
pub fn parse_group_spec(text: &str) -> Result<FiniteGroup> {
    let (kind, n) = text
        .split_once(':')
        .ok_or_else(|| Error::validation(format!("group spec '{text}' is not kind:n")))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::validation(format!("bad parameter in group spec '{text}'")))?;
    match kind {
        "cyclic" => FiniteGroup::cyclic(n),
        "dihedral" => FiniteGroup::dihedral(n),
        "dicyclic" => FiniteGroup::dicyclic(n),
        other => Err(Error::validation(format!("unknown group kind '{other}'"))),
    }
}

/// Serialized form of a sequence, with its group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceJson {
    pub group: GroupRef,
    pub terms: Vec<String>,
}

impl SequenceJson {
    pub fn from_sequence(seq: &Sequence) -> Self {
        let group = GroupRef::Inline(GroupJson::from_group(seq.group()));
        let terms = seq
            .counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(e, &c)| {
                if c == 1 {
                    seq.group().name(e).to_string()
                } else {
                    format!("{}^{}", seq.group().name(e), c)
                }
            })
            .collect();
        SequenceJson { group, terms }
    }

    pub fn into_sequence(self) -> Result<Sequence> {
        let group: Group = Arc::new(self.group.resolve()?);
        let text = self.terms.join(" ");
        Sequence::parse(&group, &text)
    }

    /// Reads the terms against an already-resolved group, ignoring the
    /// embedded group reference.
    pub fn into_sequence_over(self, group: &Group) -> Result<Sequence> {
        let text = self.terms.join(" ");
        Sequence::parse(group, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trip_presented() {
        let g = FiniteGroup::dihedral(5).unwrap();
        let json = serde_json::to_string(&GroupJson::from_group(&g)).unwrap();
        assert!(json.contains("dihedral"));
        let back: GroupJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_group().unwrap(), g);
    }

    #[test]
    fn group_round_trip_raw() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::direct_product(&c2, &c2).unwrap();
        let json = serde_json::to_string(&GroupJson::from_group(&v4)).unwrap();
        let back: GroupJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_group().unwrap(), v4);
    }

    #[test]
    fn sequence_round_trip() {
        let g: Group = Arc::new(FiniteGroup::dihedral(3).unwrap());
        let s = Sequence::parse(&g, "a^4 t^2").unwrap();
        let json = serde_json::to_string(&SequenceJson::from_sequence(&s)).unwrap();
        let back: SequenceJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_sequence().unwrap(), s);
    }

    #[test]
    fn sequence_with_spec_reference() {
        let raw = r#"{"group": "dihedral:3", "terms": ["t", "(a t)"]}"#;
        let parsed: SequenceJson = serde_json::from_str(raw).unwrap();
        let seq = parsed.into_sequence().unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.to_text(), "t at");
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(parse_group_spec("dihedral").is_err());
        assert!(parse_group_spec("dihedral:x").is_err());
        assert!(parse_group_spec("frobnitz:3").is_err());
    }
}
