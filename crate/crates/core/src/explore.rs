//! Random sampling of linear determinantal hypersurfaces: the codimension of
//! the singular locus of `det(L(x))` for uniform linear maps `L` over 𝔽_p.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Field, Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::groebner::GroebnerConfig;
use crate::linalg::Matrix;
use crate::matforms::{AffineMatrixMap, DetAlgorithm};
use crate::singularity::codim_sing;

/// Soft threshold for the fraction of samples at the generic codimension.
pub const GENERIC_MASS_THRESHOLD: f64 = 0.9;

pub const SAMPLING_CAVEAT: &str = "generic behaviour is a characteristic-0 statement; \
frequencies over a finite field are a heuristic proxy, not a proof";

#[derive(Clone, Debug)]
pub struct SampleParams {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    /// Per-sample Gröbner budget.
    pub timeout: Option<Duration>,
}

impl SampleParams {
    pub fn new(n: usize, m: usize, p: u64, trials: usize, seed: u64) -> Self {
        SampleParams {
            n,
            m,
            p,
            trials,
            seed,
            timeout: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub codim: usize,
    pub map: crate::io::MapFile,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    /// `min(4, n)`: the upper bound, attained by a general map.
    pub bound: usize,
    pub histogram: BTreeMap<usize, usize>,
    /// Samples with `det ≡ 0`.
    pub degenerate: usize,
    /// Samples whose Gröbner computation hit its cap.
    pub timeouts: usize,
    pub violations: Vec<Violation>,
    pub modal_codim: Option<usize>,
    /// Fraction of all trials with codimension equal to `bound`.
    pub generic_fraction: f64,
    pub generic_threshold: f64,
    pub generic_threshold_met: bool,
    pub caveat: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

enum Outcome {
    Codim(usize, Option<AffineMatrixMap>),
    Degenerate,
    Timeout,
}

/// Uniform linear map with entries drawn from a stream of its own, so each
/// trial is reproducible independently of scheduling.
pub fn random_linear_map(n: usize, m: usize, field: Field, seed: u64, trial: u64) -> AffineMatrixMap {
    let p = field.characteristic();
    let vars = VarSet::indexed("x", n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let rows = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| {
                    let lin: Vec<_> = (0..n).map(|_| field.from_u64(rng.random_range(0..p))).collect();
                    Polynomial::from_affine(&vars, field, &lin, &field.zero())
                })
                .collect()
        })
        .collect();
    AffineMatrixMap::new(&vars, field, rows).expect("square linear map")
}

pub fn sample_codim(params: &SampleParams, cfg: &GroebnerConfig) -> Result<SampleReport> {
    let SampleParams {
        n, m, p, trials, seed, ..
    } = *params;
    if m < 2 {
        return Err(Error::Precondition("sampling needs m >= 2".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("sampling needs n >= 1".into()));
    }
    let field = Field::prime(p)?;
    let start = Instant::now();
    let bound = n.min(4);
    let mut cfg = cfg.clone();
    if params.timeout.is_some() {
        cfg.timeout = params.timeout;
    }
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let map = random_linear_map(n, m, field, seed, t as u64);
            let f = map.symbolic_det(DetAlgorithm::Berkowitz)?;
            if f.is_zero() {
                return Ok(Outcome::Degenerate);
            }
            match codim_sing(&f, &cfg) {
                Ok(r) => {
                    let c = r.value();
                    Ok(Outcome::Codim(c, (c > bound).then_some(map)))
                }
                Err(e) if e.is_cap() => Ok(Outcome::Timeout),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut histogram = BTreeMap::new();
    let mut degenerate = 0;
    let mut timeouts = 0;
    let mut violations = Vec::new();
    for (trial, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Codim(c, bad) => {
                *histogram.entry(c).or_insert(0) += 1;
                if let Some(map) = bad {
                    violations.push(Violation {
                        trial,
                        codim: c,
                        map: crate::io::MapFile::from_map(&map),
                    });
                }
            }
            Outcome::Degenerate => degenerate += 1,
            Outcome::Timeout => timeouts += 1,
        }
    }
    let modal_codim = histogram
        .iter()
        .max_by_key(|&(c, k)| (*k, std::cmp::Reverse(*c)))
        .map(|(c, _)| *c);
    let generic_fraction = if trials == 0 {
        0.0
    } else {
        *histogram.get(&bound).unwrap_or(&0) as f64 / trials as f64
    };
    Ok(SampleReport {
        n,
        m,
        p,
        trials,
        seed,
        bound,
        histogram,
        degenerate,
        timeouts,
        violations,
        modal_codim,
        generic_fraction,
        generic_threshold: GENERIC_MASS_THRESHOLD,
        generic_threshold_met: generic_fraction >= GENERIC_MASS_THRESHOLD,
        caveat: SAMPLING_CAVEAT,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReduction {
    #[serde(serialize_with = "map_json")]
    pub map: AffineMatrixMap,
    pub kernel_dim: usize,
    /// Variables kept; the others are eliminated.
    pub kept: Vec<String>,
    /// Rows of the projection `x ↦ y` (reduced row echelon form).
    pub projection: Vec<Vec<String>>,
}

fn map_json<S: serde::Serializer>(m: &AffineMatrixMap, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::io::MapFile::from_map(m).serialize(s)
}

/// `L(x) = L'(R x)` with `R` the reduced row echelon form of the
/// coefficient matrix; `L'` is `L` restricted to the pivot variables, its
/// coefficient map is injective and `det L` is a cone over `det L'`.
pub fn cone_reduce(map: &AffineMatrixMap) -> Result<ConeReduction> {
    if !map.has_zero_constant_part() {
        return Err(Error::Precondition("cone reduction needs a linear map".into()));
    }
    let field = map.field();
    let n = map.vars().len();
    let coeffs = map
        .rows()
        .into_iter()
        .flatten()
        .map(|e| e.affine_coefficients().map(|(lin, _)| lin))
        .collect::<Result<Vec<_>>>()?;
    let (rref, pivots) = if n == 0 {
        (Matrix::zeros(field, 0, 0), Vec::new())
    } else {
        Matrix::from_rows(field, coeffs)?.rref()
    };
    let kept: Vec<String> = pivots.iter().map(|&i| map.vars().name(i).to_string()).collect();
    let vars = VarSet::new(kept.iter().cloned())?;
    let mut images = vec![Polynomial::zero(&vars, field); n];
    for (k, &i) in pivots.iter().enumerate() {
        images[i] = Polynomial::var(&vars, field, k)?;
    }
    let rows = map
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.compose(&images)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let projection = (0..pivots.len())
        .map(|r| rref.row(r).iter().map(ToString::to_string).collect())
        .collect();
    Ok(ConeReduction {
        map: AffineMatrixMap::new(&vars, field, rows)?,
        kernel_dim: n - pivots.len(),
        kept,
        projection,
    })
}
