//! Gröbner bases in degrevlex order, normal forms and affine dimension.

mod coeffs;
mod dimension;
mod engine;
mod verify;

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Monomial, Polynomial, VarSet};
use crate::error::{Error, Result};
use coeffs::{Coeffs, ModP, Rationals};
use engine::{Engine, GPoly};

pub use dimension::dimension_from_leading_monomials;
pub use verify::{verify_basis, verify_basis_sampled, BasisCheck};

/// Prime used for heavy codimension runs unless a field is given.
pub const DEFAULT_PRIME: u64 = 32003;

/// Variable count limit of the dimension search.
pub const MAX_VARS: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    vars: VarSet,
    field: Field,
    gens: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped. All generators must share one ring.
    pub fn new(vars: &VarSet, field: Field, gens: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        if vars.len() > MAX_VARS {
            return Err(Error::SizeOutOfRange {
                what: "ideal variables",
                size: vars.len(),
                max: MAX_VARS,
            });
        }
        let probe = Polynomial::zero(vars, field);
        let mut kept = Vec::new();
        for g in gens {
            probe.check_ring(&g)?;
            if !g.is_zero() {
                kept.push(g);
            }
        }
        Ok(Ideal {
            vars: vars.clone(),
            field,
            gens: kept,
        })
    }

    /// Ring taken from the first generator.
    pub fn from_generators(gens: Vec<Polynomial>) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::Invalid("ideal needs at least one generator".into()))?;
        let (vars, field) = (first.vars().clone(), first.field());
        Self::new(&vars, field, gens)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn reduce_mod(&self, field: Field) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.reduce_mod(field))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.vars, field, gens)
    }

    pub fn groebner(&self, cfg: &GroebnerConfig) -> Result<GroebnerBasis> {
        buchberger(self, cfg)
    }

    pub fn dimension(&self, cfg: &GroebnerConfig) -> Result<i64> {
        Ok(buchberger(self, cfg)?.dimension())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerConfig {
    pub max_pairs: Option<usize>,
    pub max_degree: Option<u32>,
    pub timeout: Option<Duration>,
    /// Product and chain criteria; off only for cross-checking.
    pub use_criteria: bool,
    /// Re-check every basis with the independent verifier.
    pub verify: bool,
    /// Above this many pairs the verifier checks a random sample.
    pub verify_pair_limit: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pairs: Some(2_000_000),
            max_degree: Some(64),
            timeout: None,
            use_criteria: true,
            verify: cfg!(debug_assertions),
            verify_pair_limit: 2_000,
        }
    }
}

impl GroebnerConfig {
    pub fn unbounded() -> Self {
        GroebnerConfig {
            max_pairs: None,
            max_degree: None,
            timeout: None,
            use_criteria: true,
            verify: false,
            verify_pair_limit: 2_000,
        }
    }

    pub fn with_timeout(mut self, t: Duration) -> Self {
        self.timeout = Some(t);
        self
    }

    pub fn with_max_pairs(mut self, n: usize) -> Self {
        self.max_pairs = Some(n);
        self
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn with_verify(mut self, on: bool) -> Self {
        self.verify = on;
        self
    }

    pub fn without_criteria(mut self) -> Self {
        self.use_criteria = false;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisStats {
    pub pairs_created: usize,
    pub pairs_pruned: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub reduction_steps: u64,
    pub basis_size: usize,
    pub max_degree: u32,
    pub elapsed_ms: u64,
}

/// Reduced Gröbner basis: monic, minimal, tails in normal form, sorted by
/// increasing leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: VarSet,
    field: Field,
    polys: Vec<Polynomial>,
    stats: BasisStats,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.field == other.field && self.polys == other.polys
    }
}

impl GroebnerBasis {
    pub fn order(&self) -> &'static str {
        "degrevlex"
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn stats(&self) -> &BasisStats {
        &self.stats
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| p.leading_monomial().expect("basis elements are non-zero").clone())
            .collect()
    }

    /// True when the ideal is the whole ring.
    pub fn is_trivial(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        Polynomial::zero(&self.vars, self.field).check_ring(p)?;
        match self.field {
            Field::Prime(q) => self.nf_with(&ModP { p: q }, p),
            Field::Rationals => self.nf_with(&Rationals, p),
        }
    }

    fn nf_with<C: Coeffs>(&self, ctx: &C, p: &Polynomial) -> Result<Polynomial> {
        let basis: Vec<GPoly<C::E>> = self.polys.iter().map(|g| import(ctx, g)).collect();
        let r = engine::reduce_with(ctx, &basis, import(ctx, p))?;
        Ok(export(ctx, &self.vars, r))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Affine Krull dimension of the variety; -1 when it is empty.
    pub fn dimension(&self) -> i64 {
        dimension_from_leading_monomials(self.vars.len(), &self.leading_monomials())
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.polys {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

fn import<C: Coeffs>(ctx: &C, p: &Polynomial) -> GPoly<C::E> {
    GPoly {
        terms: p.terms().iter().map(|(m, c)| (m.clone(), ctx.import(c))).collect(),
    }
}

fn export<C: Coeffs>(ctx: &C, vars: &VarSet, p: GPoly<C::E>) -> Polynomial {
    let terms = p.terms.into_iter().map(|(m, c)| (m, ctx.export(&c))).collect();
    Polynomial::from_sorted_terms(vars, ctx.field(), terms)
}

fn run<C: Coeffs>(ctx: &C, ideal: &Ideal, cfg: &GroebnerConfig) -> Result<GroebnerBasis> {
    let mut engine = Engine::new(ctx, cfg);
    engine.run(ideal.gens.iter().map(|g| import(ctx, g)).collect())?;
    let reduced = engine.reduced_basis()?;
    let polys = reduced.into_iter().map(|g| export(ctx, &ideal.vars, g)).collect();
    Ok(GroebnerBasis {
        vars: ideal.vars.clone(),
        field: ideal.field,
        polys,
        stats: engine.stats,
    })
}

/// Reduced Gröbner basis of `ideal` (degrevlex).
pub fn buchberger(ideal: &Ideal, cfg: &GroebnerConfig) -> Result<GroebnerBasis> {
    let basis = match ideal.field {
        Field::Prime(p) => run(&ModP { p }, ideal, cfg)?,
        Field::Rationals => run(&Rationals, ideal, cfg)?,
    };
    if cfg.verify {
        let check = verify_basis_sampled(&basis, ideal.generators(), cfg.verify_pair_limit, 0)?;
        if !check.ok() {
            return Err(Error::Invalid(format!(
                "Gröbner basis failed independent verification: {}",
                check.failure.unwrap_or_default()
            )));
        }
    }
    Ok(basis)
}

pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    basis.normal_form(p)
}

pub fn dimension(ideal: &Ideal, cfg: &GroebnerConfig) -> Result<i64> {
    ideal.dimension(cfg)
}

#[cfg(test)]
mod tests;
