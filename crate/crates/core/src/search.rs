//! Exhaustive search for determinantal expressions over small prime fields.
//!
//! In canonical mode every map is `c · (J_r + Z)` with `J_r` the canonical
//! rank-`r` constant part, `Z` an arbitrary linear part and `c` a non-zero
//! scalar on the first row. Since `det(P L Q) = det(P) det(Q) det(L)` and
//! `P L(0) Q = J_r` for suitable invertible `P, Q`, a target has a size-`m`
//! expression iff it has one of this shape.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Degree, Field, FieldElement, Polynomial};
use crate::error::{CapKind, Error, Result};
use crate::io::MapFile;
use crate::linalg::det_mod_p;
use crate::matforms::{verify_expression, AffineMatrixMap, VerifyOptions};

pub const DEFAULT_SEARCH_CAP: u128 = 1 << 30;

/// Candidates per parallel work unit.
const CHUNK: u64 = 1 << 12;
/// Work units per batch; results are merged in index order after each batch.
const BATCH: u64 = 256;
/// Residue points used to filter candidates before the exact check.
const FILTER_POINTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Constant part fixed to a canonical rank form, first row scaled.
    Canonical,
    /// Every affine map.
    Unrestricted,
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub target: Polynomial,
    pub m: usize,
    pub mode: SearchMode,
    pub cap: u128,
    /// Stop after this many expressions (in enumeration order).
    pub max_results: Option<usize>,
    /// Overrides the ranks derived from the degree window.
    pub ranks: Option<Vec<usize>>,
}

impl SearchSpec {
    pub fn new(target: Polynomial, m: usize) -> Result<Self> {
        if !matches!(target.field(), Field::Prime(_)) {
            return Err(Error::Precondition("search works over a prime field".into()));
        }
        if m == 0 {
            return Err(Error::Invalid("search size must be >= 1".into()));
        }
        Ok(SearchSpec {
            target,
            m,
            mode: SearchMode::Canonical,
            cap: DEFAULT_SEARCH_CAP,
            max_results: None,
            ranks: None,
        })
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_max_results(mut self, k: usize) -> Self {
        self.max_results = Some(k);
        self
    }

    fn p(&self) -> u64 {
        self.target.field().characteristic()
    }

    /// Ranks of `L(0)` that can occur. The lowest graded part of
    /// `det(J_r + Z)` has degree at least `m - r`, its constant term is
    /// non-zero iff `r = m`, and its degree is at most `m`.
    pub fn candidate_ranks(&self) -> Vec<usize> {
        if let Some(r) = &self.ranks {
            return r.clone();
        }
        let m = self.m;
        let f = &self.target;
        let ranks: Vec<usize> = match (f.degree(), f.min_degree()) {
            (Degree::MinusInfinity, _) | (_, Degree::MinusInfinity) => (0..m).collect(),
            (Degree::Finite(d), _) if d as usize > m => Vec::new(),
            (_, Degree::Finite(0)) => vec![m],
            (_, Degree::Finite(lo)) => (m.saturating_sub(lo as usize)..m).collect(),
        };
        ranks.into_iter().rev().collect()
    }

    fn linear_slots(&self) -> u32 {
        (self.m * self.m * self.target.vars().len()) as u32
    }

    /// Number of candidates the enumeration visits.
    pub fn candidate_count(&self) -> u128 {
        let p = self.p() as u128;
        match self.mode {
            SearchMode::Canonical => {
                let per_rank = (p - 1).saturating_mul(p.saturating_pow(self.linear_slots()));
                per_rank.saturating_mul(self.candidate_ranks().len() as u128)
            }
            SearchMode::Unrestricted => p.saturating_pow((self.m * self.m) as u32 + self.linear_slots()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub target: String,
    pub field: String,
    pub m: usize,
    pub mode: SearchMode,
    pub ranks: Vec<usize>,
    pub candidates: u64,
    pub evaluated: u64,
    pub passed_filter: u64,
    pub found: Vec<MapFile>,
    /// The whole space was enumerated.
    pub complete: bool,
    /// Complete and nothing found: no expression of this size over this field.
    pub exhausted: bool,
    pub elapsed_ms: u64,
}

/// Decodes candidate indices into residue matrices.
struct Layout {
    p: u64,
    m: usize,
    n: usize,
    mode: SearchMode,
    ranks: Vec<usize>,
    per_rank: u64,
}

impl Layout {
    /// Fills `consts` (m×m) and `lin` (n blocks of m×m) for candidate `idx`;
    /// returns the first-row scalar.
    fn decode(&self, mut idx: u64, consts: &mut [u64], lin: &mut [u64]) -> u64 {
        let (m, p) = (self.m, self.p);
        let mut scalar = 1;
        match self.mode {
            SearchMode::Canonical => {
                let r = self.ranks[(idx / self.per_rank) as usize];
                idx %= self.per_rank;
                scalar = 1 + idx % (p - 1);
                idx /= p - 1;
                consts.fill(0);
                for i in m - r..m {
                    consts[i * m + i] = 1;
                }
            }
            SearchMode::Unrestricted => {
                for c in consts.iter_mut() {
                    *c = idx % p;
                    idx /= p;
                }
            }
        }
        for c in lin.iter_mut() {
            *c = idx % p;
            idx /= p;
        }
        scalar
    }

    fn residue_det(&self, consts: &[u64], lin: &[u64], scalar: u64, point: &[u64], scratch: &mut [u64]) -> u64 {
        let (m, p) = (self.m, self.p);
        let mm = m * m;
        for k in 0..mm {
            let mut v = consts[k] as u128;
            for (i, &x) in point.iter().enumerate() {
                v += lin[i * mm + k] as u128 * x as u128;
            }
            scratch[k] = (v % p as u128) as u64;
        }
        for c in scratch.iter_mut().take(m) {
            *c = ((*c as u128 * scalar as u128) % p as u128) as u64;
        }
        det_mod_p(scratch, m, p)
    }

    fn to_map(&self, target: &Polynomial, consts: &[u64], lin: &[u64], scalar: u64) -> Result<AffineMatrixMap> {
        let (m, n) = (self.m, self.n);
        let field = target.field();
        let mm = m * m;
        let rows = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let k = i * m + j;
                        let s = if i == 0 { scalar } else { 1 };
                        let scale = |v: u64| field.from_u64(((v as u128 * s as u128) % self.p as u128) as u64);
                        let coeffs: Vec<FieldElement> = (0..n).map(|x| scale(lin[x * mm + k])).collect();
                        Polynomial::from_affine(target.vars(), field, &coeffs, &scale(consts[k]))
                    })
                    .collect()
            })
            .collect();
        AffineMatrixMap::new(target.vars(), field, rows)
    }
}

/// Evaluation points: all of `𝔽_p^n` when small, otherwise a fixed
/// pseudo-random sample.
fn filter_points(p: u64, n: usize) -> Vec<Vec<u64>> {
    let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total <= FILTER_POINTS as u128 {
        return (0..total as u64)
            .map(|mut c| {
                (0..n)
                    .map(|_| {
                        let v = c % p;
                        c /= p;
                        v
                    })
                    .collect()
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    (0..FILTER_POINTS)
        .map(|_| (0..n).map(|_| rng.random_range(0..p)).collect())
        .collect()
}

pub fn search_expressions(spec: &SearchSpec) -> Result<SearchOutcome> {
    let start = Instant::now();
    let count = spec.candidate_count();
    if count > spec.cap {
        return Err(Error::cap(
            format!("search at size {}", spec.m),
            CapKind::Candidates(count),
        ));
    }
    let count = count as u64;
    let p = spec.p();
    let n = spec.target.vars().len();
    let m = spec.m;
    let ranks = spec.candidate_ranks();
    let layout = Layout {
        p,
        m,
        n,
        mode: spec.mode,
        ranks: ranks.clone(),
        per_rank: match spec.mode {
            SearchMode::Canonical => (p - 1) * p.pow(spec.linear_slots()),
            SearchMode::Unrestricted => 0,
        },
    };
    let points = filter_points(p, n);
    let fvals: Vec<u64> = points
        .iter()
        .map(|pt| {
            let xs: Vec<FieldElement> = pt.iter().map(|&v| spec.target.field().from_u64(v)).collect();
            spec.target.evaluate(&xs).map(|v| v.residue().expect("prime field"))
        })
        .collect::<Result<_>>()?;

    let chunks = count.div_ceil(CHUNK);
    let mut found = Vec::new();
    let mut evaluated = 0u64;
    let mut passed_filter = 0u64;
    let mut complete = true;
    let mut batch_start = 0;
    while batch_start < chunks {
        let batch_end = (batch_start + BATCH).min(chunks);
        let results: Vec<(u64, Vec<AffineMatrixMap>)> = (batch_start..batch_end)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(count);
                let mut consts = vec![0u64; m * m];
                let mut lin = vec![0u64; n * m * m];
                let mut scratch = vec![0u64; m * m];
                let mut passed = 0;
                let mut hits = Vec::new();
                for idx in lo..hi {
                    let scalar = layout.decode(idx, &mut consts, &mut lin);
                    let ok = points
                        .iter()
                        .zip(&fvals)
                        .all(|(pt, &fv)| layout.residue_det(&consts, &lin, scalar, pt, &mut scratch) == fv);
                    if !ok {
                        continue;
                    }
                    passed += 1;
                    let map = layout.to_map(&spec.target, &consts, &lin, scalar)?;
                    if verify_expression(&map, &spec.target, VerifyOptions::default())?.matches {
                        hits.push(map);
                    }
                }
                Ok((passed, hits))
            })
            .collect::<Result<_>>()?;
        evaluated += ((batch_end * CHUNK).min(count)) - batch_start * CHUNK;
        for (passed, hits) in results {
            passed_filter += passed;
            found.extend(hits);
        }
        batch_start = batch_end;
        if let Some(k) = spec.max_results {
            if found.len() >= k {
                found.truncate(k);
                complete = batch_start >= chunks;
                break;
            }
        }
    }
    Ok(SearchOutcome {
        target: spec.target.to_string(),
        field: spec.target.field().to_string(),
        m,
        mode: spec.mode,
        ranks,
        candidates: count,
        evaluated,
        passed_filter,
        exhausted: complete && found.is_empty(),
        found: found.iter().map(MapFile::from_map).collect(),
        complete,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DcVerdict {
    /// Smallest size with an expression.
    Exact { dc: usize },
    /// No expression up to `m_max`.
    Above { m_max: usize },
    /// The enumeration cap was hit at size `m`; smaller sizes were exhausted.
    GaveUp { m: usize, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeSummary {
    pub m: usize,
    pub candidates: u64,
    pub evaluated: u64,
    pub exhausted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DcOutcome {
    pub target: String,
    pub field: String,
    #[serde(flatten)]
    pub verdict: DcVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MapFile>,
    pub sizes: Vec<SizeSummary>,
    pub elapsed_ms: u64,
}

impl DcOutcome {
    pub fn dc(&self) -> Option<usize> {
        match self.verdict {
            DcVerdict::Exact { dc } => Some(dc),
            _ => None,
        }
    }
}

/// Smallest `m <= m_max` with an expression of `f` over its prime field.
pub fn dc_exact(f: &Polynomial, m_max: usize, cap: u128) -> Result<DcOutcome> {
    let start = Instant::now();
    let mut sizes = Vec::new();
    let mut verdict = DcVerdict::Above { m_max };
    let mut witness = None;
    for m in 1..=m_max {
        let spec = SearchSpec::new(f.clone(), m)?.with_cap(cap).with_max_results(1);
        let out = match search_expressions(&spec) {
            Ok(o) => o,
            Err(e) if e.is_cap() => {
                verdict = DcVerdict::GaveUp {
                    m,
                    reason: e.to_string(),
                };
                break;
            }
            Err(e) => return Err(e),
        };
        sizes.push(SizeSummary {
            m,
            candidates: out.candidates,
            evaluated: out.evaluated,
            exhausted: out.exhausted,
        });
        if let Some(w) = out.found.into_iter().next() {
            verdict = DcVerdict::Exact { dc: m };
            witness = Some(w);
            break;
        }
    }
    Ok(DcOutcome {
        target: f.to_string(),
        field: f.field().to_string(),
        verdict,
        witness,
        sizes,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
