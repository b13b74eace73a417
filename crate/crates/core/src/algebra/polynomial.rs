use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops;

use sha2::{Digest, Sha256};

use super::field::{Field, FieldElement};
use super::monomial::{Exponent, Monomial, VarSet};
use crate::error::{Error, Result};

/// Total degree; the zero polynomial sits below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

pub type Term = (Monomial, FieldElement);

/// Sparse multivariate polynomial. Terms are kept sorted in decreasing
/// degrevlex order with no zero coefficients and no repeated monomials, so
/// structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: VarSet,
    field: Field,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(vars: &VarSet, field: Field) -> Self {
        Polynomial {
            vars: vars.clone(),
            field,
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: FieldElement) -> Self {
        let field = c.field();
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(vars.len()), c)]
        };
        Polynomial {
            vars: vars.clone(),
            field,
            terms,
        }
    }

    pub fn one(vars: &VarSet, field: Field) -> Self {
        Self::constant(vars, field.one())
    }

    pub fn var(vars: &VarSet, field: Field, i: usize) -> Result<Self> {
        if i >= vars.len() {
            return Err(Error::VariableIndex {
                index: i,
                arity: vars.len(),
            });
        }
        Ok(Polynomial {
            vars: vars.clone(),
            field,
            terms: vec![(Monomial::var(vars.len(), i), field.one())],
        })
    }

    pub fn var_named(vars: &VarSet, field: Field, name: &str) -> Result<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name:?}")))?;
        Self::var(vars, field, i)
    }

    /// Builds a polynomial from arbitrary terms: like monomials are combined,
    /// zeros dropped, and the result sorted.
    pub fn from_terms<I>(vars: &VarSet, field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = Term>,
    {
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in terms {
            if m.arity() != vars.len() {
                return Err(Error::Arity {
                    expected: vars.len(),
                    got: m.arity(),
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(c.field().to_string(), field.to_string()));
            }
            match acc.get_mut(&m) {
                Some(e) => *e = e.add_same(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Ok(Self::from_map(vars, field, acc))
    }

    fn from_map(vars: &VarSet, field: Field, acc: HashMap<Monomial, FieldElement>) -> Self {
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            vars: vars.clone(),
            field,
            terms,
        }
    }

    /// Trusts the caller: terms already sorted, distinct and non-zero.
    pub(crate) fn from_sorted_terms(vars: &VarSet, field: Field, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial {
            vars: vars.clone(),
            field,
            terms,
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as `is_zero`: no terms.
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn degree(&self) -> Degree {
        // degrevlex is degree-compatible, so the leading term has top degree
        self.terms
            .first()
            .map_or(Degree::MinusInfinity, |(m, _)| Degree::Finite(m.degree()))
    }

    /// Smallest degree among the terms.
    pub fn min_degree(&self) -> Degree {
        self.terms
            .last()
            .map_or(Degree::MinusInfinity, |(m, _)| Degree::Finite(m.degree()))
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.vars.len()))
    }

    /// The zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Self::from_sorted_terms(&self.vars, self.field, terms)
    }

    /// Non-zero homogeneous components keyed by degree.
    pub fn graded_parts(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.0.degree()).or_default().push(t.clone());
        }
        out.into_iter()
            .map(|(d, ts)| (d, Self::from_sorted_terms(&self.vars, self.field, ts)))
            .collect()
    }

    pub(crate) fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.vars != other.vars {
            return Err(Error::VarSetMismatch(self.vars.to_string(), other.vars.to_string()));
        }
        Ok(())
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        self.check_ring(other).is_ok()
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        a[i].1.sub_same(&b[j].1)
                    } else {
                        a[i].1.add_same(&b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { t.1.neg() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Self::from_sorted_terms(&self.vars, self.field, out)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.vars, self.field));
        }
        for (a, b) in [(self, other), (other, self)] {
            if a.terms.len() == 1 {
                let (m, c) = &a.terms[0];
                return b.mul_term(c, m);
            }
        }
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb)?;
                let c = ca.mul_same(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add_same(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.vars, self.field, acc))
    }

    /// `c * m * self`.
    pub fn mul_term(&self, c: &FieldElement, m: &Monomial) -> Result<Polynomial> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch(c.field().to_string(), self.field.to_string()));
        }
        if c.is_zero() {
            return Ok(Self::zero(&self.vars, self.field));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, d) in &self.terms {
            terms.push((t.mul(m)?, d.mul_same(c)));
        }
        // multiplying by a monomial preserves degrevlex order
        Ok(Self::from_sorted_terms(&self.vars, self.field, terms))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        self.mul_term(c, &Monomial::one(self.vars.len()))
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Self::from_sorted_terms(&self.vars, self.field, terms)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Self::one(&self.vars, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("leading coefficient is non-zero");
                self.scale(&inv).expect("same field")
            }
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.vars.len() {
            return Err(Error::VariableIndex {
                index: i,
                arity: self.vars.len(),
            });
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            m.derive(i)
                .map(|(e, dm)| (dm, c.mul_same(&self.field.from_u64(e as u64))))
        });
        Self::from_terms(&self.vars, self.field, terms)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.vars.len())
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// Composite `self(images)`; images may have any degree.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            // no variables: self is a constant; re-home it into the empty ring
            return Ok(self.clone());
        };
        let target_vars = first.vars.clone();
        for img in images {
            if img.field != self.field {
                return Err(Error::FieldMismatch(img.field.to_string(), self.field.to_string()));
            }
            if img.vars != target_vars {
                return Err(Error::VarSetMismatch(img.vars.to_string(), target_vars.to_string()));
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|img| vec![Self::one(&target_vars, self.field), img.clone()])
            .collect();
        let mut acc = Self::zero(&target_vars, self.field);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&target_vars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Substitution of degree-≤1 images for the variables.
    pub fn substitute_affine(&self, images: &[Polynomial]) -> Result<Polynomial> {
        for img in images {
            if let Degree::Finite(d) = img.degree() {
                if d > 1 {
                    return Err(Error::NotAffine {
                        degree: d,
                        context: " in substitution image".into(),
                    });
                }
            }
        }
        self.compose(images)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        if let Some(bad) = point.iter().find(|c| c.field() != self.field) {
            return Err(Error::FieldMismatch(bad.field().to_string(), self.field.to_string()));
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul_same(&point[i].pow(e as u64));
                }
            }
            acc = acc.add_same(&t);
        }
        Ok(acc)
    }

    /// Explicit reduction of a rational polynomial into 𝔽_p (or identity).
    pub fn reduce_mod(&self, target: Field) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), c.reduce_mod(target)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(&self.vars, target, terms)
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    pub fn embed(&self, target: &VarSet) -> Result<Polynomial> {
        let map = self
            .vars
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::Invalid(format!("variable {n:?} missing from target ring")))
            })
            .collect::<Result<Vec<_>>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0 as Exponent; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                exps[map[i]] = e;
            }
            (Monomial::from_exponents(&exps), c.clone())
        });
        Self::from_terms(target, self.field, terms)
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vars.len()];
        for (m, _) in &self.terms {
            for i in m.support() {
                seen[i] = true;
            }
        }
        (0..self.vars.len()).filter(|&i| seen[i]).collect()
    }

    /// Coefficient vector `(c_1..c_n, c_0)` of a degree-≤1 polynomial.
    pub fn affine_coefficients(&self) -> Result<(Vec<FieldElement>, FieldElement)> {
        if let Degree::Finite(d) = self.degree() {
            if d > 1 {
                return Err(Error::NotAffine {
                    degree: d,
                    context: String::new(),
                });
            }
        }
        let mut lin = vec![self.field.zero(); self.vars.len()];
        let mut c0 = self.field.zero();
        for (m, c) in &self.terms {
            match m.support().next() {
                Some(i) => lin[i] = c.clone(),
                None => c0 = c.clone(),
            }
        }
        Ok((lin, c0))
    }

    /// Inverse of [`affine_coefficients`](Self::affine_coefficients).
    pub fn from_affine(vars: &VarSet, field: Field, lin: &[FieldElement], c0: &FieldElement) -> Self {
        let mut terms: Vec<Term> = lin
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(vars.len(), i), c.clone()))
            .collect();
        if !c0.is_zero() {
            terms.push((Monomial::one(vars.len()), c0.clone()));
        }
        // x_1 > x_2 > ... > 1 in degrevlex
        Self::from_sorted_terms(vars, field, terms)
    }

    /// SHA-256 of the canonical text form together with ring data.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.to_string().as_bytes());
        h.update(b"|");
        h.update(self.vars.names().join(",").as_bytes());
        h.update(b"|");
        h.update(self.to_string().as_bytes());
        format!("sha256:{}", hex::encode(h.finalize()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.vars))?;
            } else {
                write!(f, "{abs}*{}", m.display(&self.vars))?;
            }
        }
        Ok(())
    }
}

// Operator sugar for code that already guarantees a shared ring.
// Mismatched rings panic; use the `Result`-returning methods otherwise.

impl ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs).expect("ring mismatch in +")
    }
}

impl ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs).expect("ring mismatch in -")
    }
}

impl ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs).expect("ring mismatch in *")
    }
}

impl ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}
