//! Singular loci of hypersurfaces: Jacobian ideals, codimension, the
//! lower-bound certificate, the singular-locus avoidance check for
//! determinantal expressions, and a step-by-step analysis of an expression
//! against the argument behind the bound.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::{Field, FieldElement, Polynomial, LARGE_PRIME};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, BasisStats, GroebnerConfig, Ideal};
use crate::linalg::{rank_mod_p, Matrix};
use crate::matforms::{
    fill_residue_matrix, perm_polynomial, verify_expression, AffineMatrixMap, DetAlgorithm, VerifyMode, VerifyOptions,
};

/// Codimension of a singular locus; `Empty` when the locus is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codim {
    Finite(usize),
    Empty,
}

impl Codim {
    /// Numeric value, with the empty locus counted as `n + 1`.
    pub fn value(self, n: usize) -> usize {
        match self {
            Codim::Finite(c) => c,
            Codim::Empty => n + 1,
        }
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(c) => write!(f, "{c}"),
            Codim::Empty => write!(f, "empty"),
        }
    }
}

impl Serialize for Codim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Codim::Finite(c) => s.serialize_u64(*c as u64),
            Codim::Empty => s.serialize_str("empty"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CodimReport {
    pub n: usize,
    pub field: String,
    pub dimension: i64,
    pub codim: Codim,
    pub stats: BasisStats,
}

impl CodimReport {
    pub fn value(&self) -> usize {
        self.codim.value(self.n)
    }
}

/// `[f, ∂f/∂x_1, ..., ∂f/∂x_n]`, zero entries included.
pub fn jacobian_generators(f: &Polynomial) -> Vec<Polynomial> {
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    gens
}

/// `⟨f, ∂f/∂x_1, ..., ∂f/∂x_n⟩`. `f` is always included so the ideal cuts
/// out the singular locus even when the characteristic divides `deg f`.
pub fn jacobian_ideal(f: &Polynomial) -> Result<Ideal> {
    Ideal::new(f.vars(), f.field(), jacobian_generators(f))
}

/// Codimension of `Sing(f)` in affine `n`-space.
pub fn codim_sing(f: &Polynomial, cfg: &GroebnerConfig) -> Result<CodimReport> {
    let ideal = jacobian_ideal(f)?;
    let basis = buchberger(&ideal, cfg)?;
    let n = f.vars().len();
    let dimension = basis.dimension();
    let codim = if dimension < 0 {
        Codim::Empty
    } else {
        Codim::Finite(n - dimension as usize)
    };
    Ok(CodimReport {
        n,
        field: f.field().to_string(),
        dimension,
        codim,
        stats: basis.stats().clone(),
    })
}

pub const LOWER_BOUND_RULE: &str = "dc(f) >= codim Sing(f) + 1 for homogeneous f of degree > 2 with codim Sing(f) > 4";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NotHomogeneous,
    DegreeAtMostTwo,
    CodimAtMostFour,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Bound { dc_at_least: usize },
    NotApplicable { reason: Reason, detail: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub input: String,
    pub input_hash: String,
    pub vars: Vec<String>,
    pub field: String,
    /// Degree of `f`; absent for the zero polynomial.
    pub degree: Option<u32>,
    pub homogeneous: bool,
    pub n: usize,
    pub codim: Codim,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub basis_stats: BasisStats,
    pub wall_time_ms: u64,
    pub rule: &'static str,
}

impl Certificate {
    pub fn bound(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Bound { dc_at_least } => Some(dc_at_least),
            Verdict::NotApplicable { .. } => None,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input:    {}", self.input)?;
        writeln!(f, "hash:     {}", self.input_hash)?;
        writeln!(f, "field:    {}", self.field)?;
        match self.degree {
            Some(d) => writeln!(
                f,
                "degree:   {d}{}",
                if self.homogeneous { " (homogeneous)" } else { "" }
            )?,
            None => writeln!(f, "degree:   -inf")?,
        }
        writeln!(f, "codim:    {} (in {} variables)", self.codim, self.n)?;
        match &self.verdict {
            Verdict::Bound { dc_at_least } => writeln!(f, "verdict:  dc(f) >= {dc_at_least}")?,
            Verdict::NotApplicable { detail, .. } => writeln!(f, "verdict:  not applicable ({detail})")?,
        }
        writeln!(
            f,
            "basis:    {} elements, {} pairs reduced, {} ms",
            self.basis_stats.basis_size, self.basis_stats.pairs_reduced, self.wall_time_ms
        )?;
        write!(f, "rule:     {}", self.rule)
    }
}

/// Applies the codimension lower bound to `f`. Non-applicability is a
/// verdict, not an error.
pub fn certify_lower_bound(f: &Polynomial, cfg: &GroebnerConfig) -> Result<Certificate> {
    let start = Instant::now();
    let report = codim_sing(f, cfg)?;
    let n = report.n;
    let degree = f.degree().finite();
    let homogeneous = f.is_homogeneous() && !f.is_zero();
    let c = report.value();
    let verdict = if !homogeneous {
        Verdict::NotApplicable {
            reason: Reason::NotHomogeneous,
            detail: "f is not homogeneous".into(),
        }
    } else if degree.is_none_or(|d| d <= 2) {
        Verdict::NotApplicable {
            reason: Reason::DegreeAtMostTwo,
            detail: format!("degree {} <= 2", f.degree()),
        }
    } else if c <= 4 {
        Verdict::NotApplicable {
            reason: Reason::CodimAtMostFour,
            detail: format!("codim {c} <= 4"),
        }
    } else {
        Verdict::Bound { dc_at_least: c + 1 }
    };
    Ok(Certificate {
        input: f.to_string(),
        input_hash: f.fingerprint(),
        vars: f.vars().names().to_vec(),
        field: f.field().to_string(),
        degree,
        homogeneous,
        n,
        codim: report.codim,
        verdict,
        basis_stats: report.stats,
        wall_time_ms: start.elapsed().as_millis() as u64,
        rule: LOWER_BOUND_RULE,
    })
}

/// Certificate for `perm_n`; characteristic 2 is rejected because the
/// permanent coincides with the determinant there.
pub fn certify_permanent(n: usize, field: Field, cfg: &GroebnerConfig) -> Result<Certificate> {
    if field.characteristic() == 2 {
        return Err(Error::Precondition(
            "permanent certificates need characteristic != 2".into(),
        ));
    }
    certify_lower_bound(&perm_polynomial(n, field)?, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AvoidMode {
    /// Decide emptiness of `{x : rank L(x) <= m-2}` with a Gröbner basis of
    /// the `(m-1)`-minors.
    Exact,
    /// Sample points. Maps over ℚ are sampled modulo `modulus`
    /// (default 2^61 - 1) and witnesses are re-checked exactly.
    Probabilistic {
        trials: usize,
        seed: u64,
        modulus: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AvoidVerdict {
    /// Exact: the image misses the singular locus of the determinant.
    Avoids,
    /// Exact: some point over the algebraic closure has rank <= m - 2.
    Meets,
    /// Probabilistic: no low-rank point among the samples.
    NoWitness,
    /// Probabilistic: a point with rank <= m - 2 was found.
    Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub point: Vec<String>,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AvoidReport {
    pub size: usize,
    pub rank_at_origin: usize,
    pub expected_rank: usize,
    pub rank_condition_holds: bool,
    /// `codim Sing(f)`, when it could be computed within the caps.
    pub codim: Option<Codim>,
    /// Whether `codim Sing(f) > 4`, which makes avoidance a necessity.
    pub precondition_holds: Option<bool>,
    pub mode: &'static str,
    pub verdict: AvoidVerdict,
    pub witness: Option<RankWitness>,
    pub trials: usize,
    pub sampling_modulus: Option<u64>,
    pub note: String,
}

/// Checks whether `im L` meets `Sing(det_m)`, i.e. whether some `x` has
/// `rank L(x) <= m - 2`, and reports `rank L(0)`.
pub fn check_avoids_singular_locus(
    map: &AffineMatrixMap,
    f: &Polynomial,
    mode: AvoidMode,
    cfg: &GroebnerConfig,
) -> Result<AvoidReport> {
    let m = map.size();
    let verify_mode = match mode {
        AvoidMode::Exact => VerifyMode::Exact,
        AvoidMode::Probabilistic { seed, .. } => VerifyMode::Probabilistic { trials: 20, seed },
    };
    let check = verify_expression(
        map,
        f,
        VerifyOptions {
            mode: verify_mode,
            algorithm: DetAlgorithm::Berkowitz,
            laplace_cap: m,
        },
    )?;
    if !check.matches {
        return Err(Error::Precondition("det L differs from f".into()));
    }
    let rank_at_origin = map.constant_part().rank();
    let expected_rank = m.saturating_sub(1);
    let codim = match codim_sing(f, cfg) {
        Ok(r) => Some(r.codim),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    let n = f.vars().len();
    let precondition_holds = codim.map(|c| c.value(n) > 4);

    let (verdict, witness, trials, sampling_modulus) = match mode {
        AvoidMode::Exact => {
            let meets = !minors_ideal_is_trivial(map, cfg)?;
            let v = if meets {
                AvoidVerdict::Meets
            } else {
                AvoidVerdict::Avoids
            };
            (v, None, 0, None)
        }
        AvoidMode::Probabilistic { trials, seed, modulus } => {
            let (w, p) = sample_low_rank(map, trials, seed, modulus)?;
            let v = if w.is_some() {
                AvoidVerdict::Witness
            } else {
                AvoidVerdict::NoWitness
            };
            (v, w, trials, Some(p))
        }
    };

    let meets = matches!(verdict, AvoidVerdict::Meets | AvoidVerdict::Witness);
    let note = match (precondition_holds, meets || rank_at_origin != expected_rank) {
        (Some(true), true) => {
            "codim Sing(f) > 4 yet the image meets Sing(det): contradiction with the avoidance property".to_string()
        }
        (Some(true), false) => "codim Sing(f) > 4 and the checks are consistent with avoidance".to_string(),
        (Some(false), _) => format!(
            "codim Sing(f) = {} <= 4: avoidance is not forced, result is informational",
            codim.map(|c| c.to_string()).unwrap_or_default()
        ),
        (None, _) => "codim Sing(f) not computed within the resource caps".to_string(),
    };
    Ok(AvoidReport {
        size: m,
        rank_at_origin,
        expected_rank,
        rank_condition_holds: rank_at_origin == expected_rank,
        codim,
        precondition_holds,
        mode: match mode {
            AvoidMode::Exact => "exact",
            AvoidMode::Probabilistic { .. } => "probabilistic",
        },
        verdict,
        witness,
        trials,
        sampling_modulus,
        note,
    })
}

fn minors_ideal_is_trivial(map: &AffineMatrixMap, cfg: &GroebnerConfig) -> Result<bool> {
    let m = map.size();
    if m <= 1 {
        return Ok(true);
    }
    let rows = map.rows();
    let mut gens = Vec::with_capacity(m * m);
    for skip_r in 0..m {
        for skip_c in 0..m {
            let sub: Vec<Vec<Polynomial>> = (0..m)
                .filter(|&r| r != skip_r)
                .map(|r| (0..m).filter(|&c| c != skip_c).map(|c| rows[r][c].clone()).collect())
                .collect();
            let minor = AffineMatrixMap::new(map.vars(), map.field(), sub)?;
            gens.push(minor.symbolic_det(DetAlgorithm::Berkowitz)?);
        }
    }
    let ideal = Ideal::new(map.vars(), map.field(), gens)?;
    Ok(buchberger(&ideal, cfg)?.is_trivial())
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn sample_low_rank(
    map: &AffineMatrixMap,
    trials: usize,
    seed: u64,
    modulus: Option<u64>,
) -> Result<(Option<RankWitness>, u64)> {
    let m = map.size();
    let n = map.vars().len();
    let (reduced, p) = match map.field() {
        Field::Prime(p) => (map.clone(), p),
        Field::Rationals => {
            let p = modulus.unwrap_or(LARGE_PRIME);
            let target = Field::prime(p)?;
            (map.reduce_mod(target)?, p)
        }
    };
    let table = reduced.residue_table();
    let exact_field = map.field();
    let found = (0..trials).into_par_iter().find_map_first(|t| {
        let mut rng = trial_rng(seed, t);
        let point: Vec<u64> = (0..n).map(|_| rng.random_range(0..p)).collect();
        let mut scratch = vec![0u64; m * m];
        fill_residue_matrix(&table, &point, p, &mut scratch);
        if rank_mod_p(&mut scratch, m, m, p) + 2 > m {
            return None;
        }
        // the rank over ℚ is at least the rank mod p, so only low residues
        // need the exact recheck
        let exact_point: Vec<FieldElement> = point.iter().map(|&v| exact_field.from_u64(v)).collect();
        let rank = map.evaluate(&exact_point).ok()?.rank();
        (rank + 2 <= m).then(|| RankWitness {
            point: exact_point.iter().map(|c| c.to_string()).collect(),
            rank,
        })
    });
    Ok((found, p))
}

/// Q(w) = Σ_j w_{1j} w_{j1} on `k^{2(m-1)}` with coordinates
/// `(w_12..w_1m, w_21..w_m1)`.
fn quadric(w: &[FieldElement]) -> FieldElement {
    let h = w.len() / 2;
    let mut acc = w[0].field().zero();
    for j in 0..h {
        acc = acc.add_same(&w[j].mul_same(&w[h + j]));
    }
    acc
}

/// Q0(w, w') = Q(w + w') - Q(w) - Q(w'), valid in every characteristic.
fn polar(a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    let s: Vec<FieldElement> = a.iter().zip(b).map(|(x, y)| x.add_same(y)).collect();
    quadric(&s).sub_same(&quadric(a)).sub_same(&quadric(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyReport {
    pub is_isotropic: bool,
    pub dim: usize,
    /// `m - 1`, the largest dimension of an isotropic subspace.
    pub bound: usize,
    pub exceeds_bound: bool,
    /// A vector of the span with `Q != 0`, when not isotropic.
    pub witness: Option<Vec<String>>,
}

/// Whether the span of `vectors` in `k^{arity}` lies on the quadric
/// `Q(w) = Σ_j w_{1j} w_{j1}`, with `arity = 2(m-1)`.
pub fn isotropic_dimension(field: Field, arity: usize, vectors: &[Vec<FieldElement>]) -> Result<IsotropyReport> {
    if arity == 0 || arity % 2 != 0 {
        return Err(Error::Invalid(format!(
            "arity {arity} is not of the form 2(m-1) with m >= 2"
        )));
    }
    for v in vectors {
        if v.len() != arity {
            return Err(Error::Arity {
                expected: arity,
                got: v.len(),
            });
        }
    }
    let bound = arity / 2;
    let basis: Vec<Vec<FieldElement>> = if vectors.is_empty() {
        Vec::new()
    } else {
        let (red, pivots) = Matrix::from_rows(field, vectors.to_vec())?.rref();
        (0..pivots.len()).map(|r| red.row(r).to_vec()).collect()
    };
    let dim = basis.len();
    let mut witness = None;
    'outer: for (i, b) in basis.iter().enumerate() {
        if !quadric(b).is_zero() {
            witness = Some(b.clone());
            break;
        }
        for c in &basis[..i] {
            if !polar(b, c).is_zero() {
                witness = Some(b.iter().zip(c).map(|(x, y)| x.add_same(y)).collect());
                break 'outer;
            }
        }
    }
    Ok(IsotropyReport {
        is_isotropic: witness.is_none(),
        dim,
        bound,
        exceeds_bound: dim > bound,
        witness: witness.map(|w| w.iter().map(|c| c.to_string()).collect()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TopRankChecks {
    pub z11_zero: bool,
    /// `Σ_{j>=2} Z_1j Z_j1`, which must vanish.
    pub quadric_form: String,
    pub quadric_relation: bool,
    /// First row and column of `Z`.
    pub ideal_generators: Vec<String>,
    pub ideal_linear_rank: usize,
    pub jacobian_in_ideal: bool,
    /// Indices of variables whose partial derivative is not in `I`.
    pub partials_outside_ideal: Vec<usize>,
    pub f_in_ideal_squared: bool,
    /// `dim im G = codim V(I)`.
    pub image_dimension: usize,
    pub isotropy: IsotropyReport,
    /// `m - 1`, which bounds `codim Sing(f)` from above.
    pub codim_upper_bound: usize,
    pub all_checks_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedPart {
    pub degree: u32,
    pub polynomial: String,
    pub vanishes: bool,
    /// Parts of degree other than `deg f` must vanish.
    pub must_vanish: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedChecks {
    pub parts: Vec<GradedPart>,
    /// All parts that must vanish do.
    pub consistent: bool,
    /// The degree `m - r` part equals the determinant of the top-left
    /// `(m-r) x (m-r)` block of `Z`, and lower parts vanish.
    pub lowest_part_is_block_det: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub size: usize,
    pub rank: usize,
    pub degree: u32,
    pub left: Vec<Vec<String>>,
    pub right: Vec<Vec<String>>,
    /// `det(J + Z) = scalar * f`.
    pub scalar: String,
    pub z: Vec<Vec<String>>,
    pub top_rank: Option<TopRankChecks>,
    pub graded: Option<GradedChecks>,
}

fn matrix_text(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect())
        .collect()
}

/// Rewrites modulo an ideal generated by linear forms.
struct LinearIdeal {
    /// `(pivot variable, reduced row)` from the RREF of the generators.
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl LinearIdeal {
    fn new(field: Field, forms: &[Polynomial]) -> Result<Self> {
        let coeffs = forms
            .iter()
            .map(|g| g.affine_coefficients().map(|(lin, _)| lin))
            .collect::<Result<Vec<_>>>()?;
        let rows = if coeffs.is_empty() {
            Vec::new()
        } else {
            let (red, pivots) = Matrix::from_rows(field, coeffs)?.rref();
            pivots
                .iter()
                .enumerate()
                .map(|(r, &p)| (p, red.row(r).to_vec()))
                .collect()
        };
        Ok(LinearIdeal { rows })
    }

    /// `x_p -> x_p - ℓ_p(x)` turns each generator `ℓ_p` into its pivot
    /// variable; with `keep_pivots == false` pivots map to `x_p - ℓ_p`
    /// without the `x_p`, i.e. the generators are set to zero.
    fn images(&self, f: &Polynomial, keep_pivots: bool) -> Result<Vec<Polynomial>> {
        let vars = f.vars();
        let field = f.field();
        let mut images: Vec<Polynomial> = (0..vars.len())
            .map(|i| Polynomial::var(vars, field, i))
            .collect::<Result<_>>()?;
        for (p, row) in &self.rows {
            let mut lin: Vec<FieldElement> = row.iter().map(FieldElement::neg).collect();
            lin[*p] = if keep_pivots { field.one() } else { field.zero() };
            images[*p] = Polynomial::from_affine(vars, field, &lin, &field.zero());
        }
        Ok(images)
    }

    fn contains(&self, g: &Polynomial) -> Result<bool> {
        Ok(g.compose(&self.images(g, false)?)?.is_zero())
    }

    /// Every term has degree >= `k` in the generators.
    fn contains_power(&self, g: &Polynomial, k: u32) -> Result<bool> {
        let h = g.compose(&self.images(g, true)?)?;
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        Ok(h.terms()
            .iter()
            .all(|(m, _)| pivots.iter().map(|&p| u32::from(m.exponent(p))).sum::<u32>() >= k))
    }
}

/// Runs the normalization `P L Q = J + Z` and the checks of the lower-bound
/// argument on a concrete expression.
pub fn analyze_expression(map: &AffineMatrixMap, f: &Polynomial) -> Result<AnalysisReport> {
    let m = map.size();
    let d = match f.degree().finite() {
        Some(d) if d > 2 && f.is_homogeneous() => d,
        _ => {
            return Err(Error::Precondition(
                "analysis needs a homogeneous target of degree > 2".into(),
            ))
        }
    };
    let check = verify_expression(
        map,
        f,
        VerifyOptions {
            mode: VerifyMode::Exact,
            algorithm: DetAlgorithm::Berkowitz,
            laplace_cap: m,
        },
    )?;
    if !check.matches {
        return Err(Error::Precondition("det L differs from f".into()));
    }
    let norm = map.rank_and_normalize()?;
    let z = norm.z();
    let field = f.field();
    let r = norm.rank;
    let mut report = AnalysisReport {
        size: m,
        rank: r,
        degree: d,
        left: matrix_text(&norm.left),
        right: matrix_text(&norm.right),
        scalar: norm.scalar.to_string(),
        z: z.rows()
            .iter()
            .map(|row| row.iter().map(|e| e.to_string()).collect())
            .collect(),
        top_rank: None,
        graded: None,
    };

    if r + 1 == m {
        let z11_zero = z.entry(0, 0).is_zero();
        let mut q = Polynomial::zero(f.vars(), field);
        for j in 1..m {
            q = q.add(&z.entry(0, j).mul(z.entry(j, 0))?)?;
        }
        let mut gens: Vec<Polynomial> = (0..m).map(|j| z.entry(0, j).clone()).collect();
        gens.extend((1..m).map(|i| z.entry(i, 0).clone()));
        let ideal = LinearIdeal::new(field, &gens)?;
        let mut outside = Vec::new();
        for (i, g) in f.gradient().iter().enumerate() {
            if !ideal.contains(g)? {
                outside.push(i);
            }
        }
        let f_in_sq = ideal.contains_power(f, 2)?;

        // im G is spanned by the images of the coordinate vectors
        let g_forms: Vec<&Polynomial> = (1..m)
            .map(|j| z.entry(0, j))
            .chain((1..m).map(|i| z.entry(i, 0)))
            .collect();
        let coeffs = g_forms
            .iter()
            .map(|g| g.affine_coefficients().map(|(lin, _)| lin))
            .collect::<Result<Vec<_>>>()?;
        let n = f.vars().len();
        let columns: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| coeffs.iter().map(|row| row[i].clone()).collect())
            .collect();
        let isotropy = isotropic_dimension(field, 2 * (m - 1), &columns)?;
        let quadric_relation = q.is_zero();
        let all = z11_zero
            && quadric_relation
            && outside.is_empty()
            && f_in_sq
            && isotropy.is_isotropic
            && !isotropy.exceeds_bound;
        report.top_rank = Some(TopRankChecks {
            z11_zero,
            quadric_form: q.to_string(),
            quadric_relation,
            ideal_generators: gens.iter().map(|g| g.to_string()).collect(),
            ideal_linear_rank: ideal.rows.len(),
            jacobian_in_ideal: outside.is_empty(),
            partials_outside_ideal: outside,
            f_in_ideal_squared: f_in_sq,
            image_dimension: isotropy.dim,
            isotropy,
            codim_upper_bound: m - 1,
            all_checks_pass: all,
        });
    } else {
        let det = norm.map.symbolic_det_capped(DetAlgorithm::Berkowitz, m)?;
        let parts: Vec<GradedPart> = det
            .graded_parts()
            .into_iter()
            .map(|(deg, p)| GradedPart {
                degree: deg,
                polynomial: p.to_string(),
                vanishes: p.is_zero(),
                must_vanish: deg != d,
            })
            .collect();
        let consistent = parts.iter().all(|p| !p.must_vanish || p.vanishes);
        let k = m - r;
        let block: Vec<Vec<Polynomial>> = (0..k)
            .map(|i| (0..k).map(|j| z.entry(i, j).clone()).collect())
            .collect();
        let block_det = if k == 0 {
            Polynomial::one(f.vars(), field)
        } else {
            AffineMatrixMap::new(f.vars(), field, block)?.symbolic_det(DetAlgorithm::Berkowitz)?
        };
        let lowest_ok = det.homogeneous_part(k as u32) == block_det
            && det.terms().iter().all(|(mono, _)| mono.degree() >= k as u32);
        report.graded = Some(GradedChecks {
            parts,
            consistent,
            lowest_part_is_block_det: lowest_ok,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
