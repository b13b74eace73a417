//! Matrices whose entries are linear in the main variables with unknown
//! coefficients, and extraction of the coefficient equations that make the
//! determinant equal a target.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Field, FieldElement, Monomial, Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::matforms::{laplace_memo, AffineMatrixMap};

/// Entries live in the combined ring `main ++ params`; each term has degree
/// at most 1 in the main block and at most 1 in the parameter block.
#[derive(Clone, Debug)]
pub struct ParamTemplate {
    main: VarSet,
    params: VarSet,
    ring: VarSet,
    field: Field,
    size: usize,
    entries: Vec<Polynomial>,
}

impl ParamTemplate {
    pub fn new(main: &VarSet, params: &VarSet, field: Field, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let ring = main.concat(params)?;
        let nm = main.len();
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::Arity {
                    expected: size,
                    got: row.len(),
                });
            }
            for e in row {
                if e.vars() != &ring || e.field() != field {
                    return Err(Error::VarSetMismatch(e.vars().to_string(), ring.to_string()));
                }
                for (m, _) in e.terms() {
                    let dm = m.slice(0..nm).degree();
                    let dp = m.slice(nm..ring.len()).degree();
                    if dm > 1 || dp > 1 {
                        return Err(Error::Invalid(format!(
                            "template term {} has degree {dm} in the main block and {dp} in the parameters",
                            m.display(&ring)
                        )));
                    }
                }
                entries.push(e);
            }
        }
        if size == 0 {
            return Err(Error::Invalid("template must have size >= 1".into()));
        }
        Ok(ParamTemplate {
            main: main.clone(),
            params: params.clone(),
            ring,
            field,
            size,
            entries,
        })
    }

    pub fn parse(main: &VarSet, params: &VarSet, field: Field, rows: &[Vec<&str>]) -> Result<Self> {
        let ring = main.concat(params)?;
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Polynomial::parse(s, &ring, field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(main, params, field, rows)
    }

    pub fn main_vars(&self) -> &VarSet {
        &self.main
    }

    pub fn params(&self) -> &VarSet {
        &self.params
    }

    /// The combined ring, main variables first.
    pub fn ring(&self) -> &VarSet {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.size + j]
    }

    fn rows(&self) -> Vec<Vec<Polynomial>> {
        self.entries.chunks(self.size).map(<[Polynomial]>::to_vec).collect()
    }

    /// Determinant in the combined ring.
    pub fn symbolic_det(&self) -> Polynomial {
        laplace_memo(&self.rows(), &self.ring, self.field)
    }

    /// Substitutes parameter values, giving an ordinary affine map.
    pub fn instantiate(&self, values: &[FieldElement]) -> Result<AffineMatrixMap> {
        if values.len() != self.params.len() {
            return Err(Error::Arity {
                expected: self.params.len(),
                got: values.len(),
            });
        }
        let mut images: Vec<Polynomial> = (0..self.main.len())
            .map(|i| Polynomial::var(&self.main, self.field, i))
            .collect::<Result<_>>()?;
        images.extend(values.iter().map(|v| Polynomial::constant(&self.main, v.clone())));
        let rows = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|e| e.compose(&images)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        AffineMatrixMap::new(&self.main, self.field, rows)
    }

    /// Splits a combined-ring polynomial by main monomial; coefficients are
    /// polynomials in the parameters.
    pub fn group_by_main(&self, p: &Polynomial) -> Result<BTreeMap<Monomial, Polynomial>> {
        let nm = self.main.len();
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, FieldElement)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            groups
                .entry(m.slice(0..nm))
                .or_default()
                .push((m.slice(nm..self.ring.len()), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| Ok((k, Polynomial::from_terms(&self.params, self.field, ts)?)))
            .collect()
    }
}

/// `(coefficient of monomial in det) - (coefficient in f) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEquation {
    pub monomial: Monomial,
    pub monomial_text: String,
    /// Polynomial in the parameters that must vanish.
    pub polynomial: Polynomial,
}

impl CoefficientEquation {
    /// `lhs = rhs` with the constant moved to the right.
    pub fn sides(&self) -> (Polynomial, FieldElement) {
        let c = self.polynomial.constant_term();
        let lhs = self
            .polynomial
            .sub(&Polynomial::constant(self.polynomial.vars(), c.clone()))
            .expect("same ring");
        (lhs, c.neg())
    }
}

impl fmt::Display for CoefficientEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lhs, rhs) = self.sides();
        write!(f, "{}: {} = {}", self.monomial_text, lhs, rhs)
    }
}

impl Serialize for CoefficientEquation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (lhs, rhs) = self.sides();
        let mut st = s.serialize_struct("CoefficientEquation", 4)?;
        st.serialize_field("monomial", &self.monomial_text)?;
        st.serialize_field("lhs", &lhs.to_string())?;
        st.serialize_field("rhs", &rhs.to_string())?;
        st.serialize_field("polynomial", &self.polynomial.to_string())?;
        st.end()
    }
}

/// Equations in the parameters, one per main monomial accepted by `filter`
/// whose equation is not identically zero, in decreasing monomial order.
pub fn extract_coefficient_equations(
    template: &ParamTemplate,
    f: &Polynomial,
    filter: Option<&dyn Fn(&Monomial) -> bool>,
) -> Result<Vec<CoefficientEquation>> {
    if f.vars() != template.main_vars() {
        return Err(Error::VarSetMismatch(
            f.vars().to_string(),
            template.main_vars().to_string(),
        ));
    }
    if f.field() != template.field() {
        return Err(Error::FieldMismatch(
            f.field().to_string(),
            template.field().to_string(),
        ));
    }
    let mut groups = template.group_by_main(&template.symbolic_det())?;
    for (m, c) in f.terms() {
        let entry = groups
            .entry(m.clone())
            .or_insert_with(|| Polynomial::zero(template.params(), template.field()));
        *entry = entry.sub(&Polynomial::constant(template.params(), c.clone()))?;
    }
    Ok(groups
        .into_iter()
        .rev()
        .filter(|(m, p)| !p.is_zero() && filter.is_none_or(|keep| keep(m)))
        .map(|(m, p)| CoefficientEquation {
            monomial_text: m.display(template.main_vars()).to_string(),
            monomial: m,
            polynomial: p,
        })
        .collect())
}
