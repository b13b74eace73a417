//! JSON file formats for matrix maps and ideals.

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::matforms::AffineMatrixMap;

/// `"Q"` or `{"Fp": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Tag(RationalTag),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RationalTag {
    Q,
}

impl From<Field> for FieldJson {
    fn from(f: Field) -> Self {
        match f {
            Field::Rationals => FieldJson::Tag(RationalTag::Q),
            Field::Prime(p) => FieldJson::Prime { p },
        }
    }
}

impl TryFrom<FieldJson> for Field {
    type Error = Error;

    fn try_from(f: FieldJson) -> Result<Field> {
        match f {
            FieldJson::Tag(RationalTag::Q) => Ok(Field::Rationals),
            FieldJson::Prime { p } => Field::prime(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub field: FieldJson,
    pub vars: Vec<String>,
    pub m: usize,
    pub entries: Vec<Vec<String>>,
}

impl MapFile {
    pub fn from_map(map: &AffineMatrixMap) -> Self {
        MapFile {
            field: map.field().into(),
            vars: map.vars().names().to_vec(),
            m: map.size(),
            entries: map
                .rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    /// Parses and validates the entries (degree at most 1, square, size `m`).
    pub fn to_map(&self) -> Result<AffineMatrixMap> {
        let field = Field::try_from(self.field)?;
        let vars = VarSet::new(self.vars.iter().cloned())?;
        if self.entries.len() != self.m {
            return Err(Error::Arity {
                expected: self.m,
                got: self.entries.len(),
            });
        }
        let rows: Vec<Vec<&str>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        AffineMatrixMap::parse(&vars, field, &rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFile {
    pub field: FieldJson,
    pub vars: Vec<String>,
    pub polynomials: Vec<String>,
}

impl IdealFile {
    pub fn from_polys(vars: &VarSet, field: Field, polys: &[Polynomial]) -> Self {
        IdealFile {
            field: field.into(),
            vars: vars.names().to_vec(),
            polynomials: polys.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_ideal(&self) -> Result<Ideal> {
        let field = Field::try_from(self.field)?;
        let vars = VarSet::new(self.vars.iter().cloned())?;
        let gens = self
            .polynomials
            .iter()
            .map(|s| Polynomial::parse(s, &vars, field))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&vars, field, gens)
    }
}

pub fn map_to_json(map: &AffineMatrixMap) -> String {
    serde_json::to_string_pretty(&MapFile::from_map(map)).expect("serializable")
}

pub fn map_from_json(src: &str) -> Result<AffineMatrixMap> {
    serde_json::from_str::<MapFile>(src)?.to_map()
}

pub fn ideal_from_json(src: &str) -> Result<Ideal> {
    serde_json::from_str::<IdealFile>(src)?.to_ideal()
}
