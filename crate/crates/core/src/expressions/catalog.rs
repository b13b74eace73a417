//! Named determinantal expressions, each checked exactly when loaded.

use serde::Serialize;

use super::abp::{abp_to_determinant, grenet_abp};
use crate::algebra::{Field, Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::matforms::{perm_polynomial, verify_expression, AffineMatrixMap, VerifyOptions, DEFAULT_LAPLACE_CAP};

pub const CUBIC_SURFACE: &str = "x*y^2 + y*t^2 + z^3";

const NAMES: [&str; 4] = ["cubic_5x5", "quadric_2x2", "grenet_perm_2", "grenet_perm_3"];

pub fn catalog_names() -> &'static [&'static str] {
    &NAMES
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    #[serde(skip)]
    pub map: AffineMatrixMap,
    #[serde(serialize_with = "super::poly_text")]
    pub target: Polynomial,
}

/// The cubic surface `xy² + yt² + z³` in variables `x, y, z, t`.
pub fn cubic_surface(field: Field) -> Result<Polynomial> {
    Polynomial::parse(CUBIC_SURFACE, &cubic_vars(), field)
}

pub(crate) fn cubic_vars() -> VarSet {
    VarSet::new(["x", "y", "z", "t"]).expect("valid names")
}

pub fn catalog_get(name: &str, field: Field) -> Result<CatalogEntry> {
    let (name, description, map, target) = match name {
        "cubic_5x5" => {
            let vars = cubic_vars();
            let map = AffineMatrixMap::parse(
                &vars,
                field,
                &[
                    vec!["-y", "z", "0", "0", "0"],
                    vec!["0", "0", "z", "t", "x"],
                    vec!["z", "0", "1", "0", "0"],
                    vec!["0", "t", "0", "1", "0"],
                    vec!["0", "y", "0", "0", "1"],
                ],
            )?;
            (
                NAMES[0],
                "size-5 expression of the cubic surface xy^2 + yt^2 + z^3",
                map,
                cubic_surface(field)?,
            )
        }
        "quadric_2x2" => {
            let vars = VarSet::new(["x", "y", "z"])?;
            let map = AffineMatrixMap::parse(&vars, field, &[vec!["x", "y"], vec!["-z", "x"]])?;
            let target = Polynomial::parse("x^2 + y*z", &vars, field)?;
            (NAMES[1], "size-2 expression of the quadric x^2 + yz", map, target)
        }
        "grenet_perm_2" => (
            NAMES[2],
            "branching-program expression of perm_2, size 3",
            abp_to_determinant(&grenet_abp(2, field)?, DEFAULT_LAPLACE_CAP)?,
            perm_polynomial(2, field)?,
        ),
        "grenet_perm_3" => (
            NAMES[3],
            "branching-program expression of perm_3, size 7",
            abp_to_determinant(&grenet_abp(3, field)?, DEFAULT_LAPLACE_CAP)?,
            perm_polynomial(3, field)?,
        ),
        other => return Err(Error::UnknownCatalogEntry(other.to_string())),
    };
    let report = verify_expression(&map, &target, VerifyOptions::default())?;
    if !report.matches {
        return Err(Error::Invalid(format!(
            "catalog entry {name} failed its exact self-check"
        )));
    }
    Ok(CatalogEntry {
        name,
        description,
        map,
        target,
    })
}
