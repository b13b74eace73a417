//! Post-hoc basis check written against the public polynomial API only,
//! sharing no code with the engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GroebnerBasis;
use crate::algebra::{Monomial, Polynomial};
use crate::error::Result;

#[derive(Clone, Debug, Default, Serialize)]
pub struct BasisCheck {
    pub pairs_checked: usize,
    /// Pairs with coprime leading monomials, which reduce to 0 by
    /// Buchberger's first criterion.
    pub pairs_coprime: usize,
    pub generators_checked: usize,
    /// Set when only a random sample of pairs and elements was checked.
    pub sampled: bool,
    pub failure: Option<String>,
}

impl BasisCheck {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Textbook multivariate division; returns the remainder.
fn remainder(p: &Polynomial, divisors: &[Polynomial], lms: &[Monomial]) -> Result<Polynomial> {
    let mut p = p.clone();
    let mut r = Polynomial::zero(p.vars(), p.field());
    while let Some((m, c)) = p.leading_term().cloned() {
        match lms.iter().position(|lm| lm.divides(&m)) {
            Some(i) => {
                let g = &divisors[i];
                let lc = &g.leading_term().expect("non-zero divisor").1;
                let q = c.try_div(lc)?;
                p = p.sub(&g.mul_term(&q, &lm_quotient(&lms[i], &m))?)?;
            }
            None => {
                let t = Polynomial::from_terms(p.vars(), p.field(), [(m, c)])?;
                r = r.add(&t)?;
                p = p.sub(&t)?;
            }
        }
    }
    Ok(r)
}

fn lm_quotient(d: &Monomial, m: &Monomial) -> Monomial {
    let e: Vec<u16> = m.exponents().iter().zip(d.exponents()).map(|(a, b)| a - b).collect();
    Monomial::from_exponents(&e)
}

/// Checks that `basis` is reduced, that every generator reduces to 0, and
/// that every S-polynomial with non-coprime leading monomials reduces to 0.
pub fn verify_basis(basis: &GroebnerBasis, generators: &[Polynomial]) -> Result<BasisCheck> {
    verify_basis_sampled(basis, generators, usize::MAX, 0)
}

/// Like [`verify_basis`], but when the basis has more than `pair_limit`
/// pairs only `pair_limit` random pairs (and a tenth as many elements for
/// the reducedness check) are examined. Generators are always all checked.
pub fn verify_basis_sampled(
    basis: &GroebnerBasis,
    generators: &[Polynomial],
    pair_limit: usize,
    seed: u64,
) -> Result<BasisCheck> {
    let polys = basis.polys();
    let lms = basis.leading_monomials();
    let n = polys.len();
    let total_pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
    let mut out = BasisCheck {
        sampled: total_pairs > pair_limit,
        ..BasisCheck::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let elements: Vec<usize> = if out.sampled {
        (0..(pair_limit / 10).clamp(1, n))
            .map(|_| rng.random_range(0..n))
            .collect()
    } else {
        (0..n).collect()
    };
    for &i in &elements {
        let g = &polys[i];
        if !g.leading_term().expect("non-zero").1.is_one() {
            out.failure = Some(format!("element {i} is not monic"));
            return Ok(out);
        }
        for (j, lm) in lms.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some((m, _)) = g.terms().iter().find(|(m, _)| lm.divides(m)) {
                out.failure = Some(format!(
                    "term {} of element {i} is divisible by the leading monomial of element {j}",
                    m.display(basis.vars())
                ));
                return Ok(out);
            }
        }
    }

    for (k, g) in generators.iter().enumerate() {
        out.generators_checked += 1;
        if !remainder(g, polys, &lms)?.is_zero() {
            out.failure = Some(format!("generator {k} does not reduce to 0"));
            return Ok(out);
        }
    }

    let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if out.sampled {
        let mut v = Vec::with_capacity(pair_limit);
        while v.len() < pair_limit {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i < j {
                v.push((i, j));
            }
        }
        Box::new(v.into_iter())
    } else {
        Box::new((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    };
    for (i, j) in pairs {
        if lms[i].is_coprime(&lms[j]) {
            out.pairs_coprime += 1;
            continue;
        }
        let l = lms[i].lcm(&lms[j]);
        let one = polys[i].field().one();
        let s = polys[i]
            .mul_term(&one, &lm_quotient(&lms[i], &l))?
            .sub(&polys[j].mul_term(&one, &lm_quotient(&lms[j], &l))?)?;
        out.pairs_checked += 1;
        if !remainder(&s, polys, &lms)?.is_zero() {
            out.failure = Some(format!("S-polynomial of elements {i} and {j} does not reduce to 0"));
            return Ok(out);
        }
    }
    Ok(out)
}
