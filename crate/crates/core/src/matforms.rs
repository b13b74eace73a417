//! Affine-linear matrix maps `L: k^n -> k^{m x m}`, their symbolic
//! determinants, permanents, constant-part normalization and verification
//! of determinantal expressions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Degree, Field, FieldElement, Monomial, Polynomial, VarSet, LARGE_PRIME};
use crate::error::{CapKind, Error, Result};
use crate::linalg::{det_mod_p, Matrix};

/// Largest size accepted by the memoized Laplace expansion unless raised.
pub const DEFAULT_LAPLACE_CAP: usize = 8;

/// An `m x m` grid of degree-≤1 polynomials over a shared ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMatrixMap {
    size: usize,
    vars: VarSet,
    field: Field,
    entries: Vec<Polynomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetAlgorithm {
    LaplaceMemo,
    Berkowitz,
}

impl std::str::FromStr for DetAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplace-memo" | "laplace" => Ok(DetAlgorithm::LaplaceMemo),
            "berkowitz" => Ok(DetAlgorithm::Berkowitz),
            _ => Err(Error::Invalid(format!("unknown determinant algorithm {s:?}"))),
        }
    }
}

impl AffineMatrixMap {
    pub fn new(vars: &VarSet, field: Field, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Invalid("matrix map must have size >= 1".into()));
        }
        let mut entries = Vec::with_capacity(m * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::Arity {
                    expected: m,
                    got: row.len(),
                });
            }
            for (j, e) in row.into_iter().enumerate() {
                if e.vars() != vars {
                    return Err(Error::VarSetMismatch(e.vars().to_string(), vars.to_string()));
                }
                if e.field() != field {
                    return Err(Error::FieldMismatch(e.field().to_string(), field.to_string()));
                }
                if let Degree::Finite(d) = e.degree() {
                    if d > 1 {
                        return Err(Error::NotAffine {
                            degree: d,
                            context: format!(" at entry ({}, {})", i + 1, j + 1),
                        });
                    }
                }
                entries.push(e);
            }
        }
        Ok(AffineMatrixMap {
            size: m,
            vars: vars.clone(),
            field,
            entries,
        })
    }

    /// Parses every entry with [`Polynomial::parse`].
    pub fn parse(vars: &VarSet, field: Field, rows: &[Vec<&str>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Polynomial::parse(s, vars, field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, field, rows)
    }

    /// The generic matrix `(x_ij)` over `VarSet::matrix("x", m)`.
    pub fn generic(m: usize, field: Field) -> Self {
        let vars = VarSet::matrix("x", m);
        let rows = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| Polynomial::var(&vars, field, i * m + j).expect("in range"))
                    .collect()
            })
            .collect();
        Self::new(&vars, field, rows).expect("generic map is affine")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        self.entries.chunks(self.size).map(<[_]>::to_vec).collect()
    }

    /// `L(0)`.
    pub fn constant_part(&self) -> Matrix {
        let rows = self
            .entries
            .chunks(self.size)
            .map(|r| r.iter().map(Polynomial::constant_term).collect())
            .collect();
        Matrix::from_rows(self.field, rows).expect("square")
    }

    /// `L(x) - L(0)`.
    pub fn linear_part(&self) -> AffineMatrixMap {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let c = Polynomial::constant(&self.vars, e.constant_term());
                e - &c
            })
            .collect();
        AffineMatrixMap {
            entries,
            ..self.clone()
        }
    }

    pub fn has_zero_constant_part(&self) -> bool {
        self.entries.iter().all(|e| e.constant_term().is_zero())
    }

    pub fn transpose(&self) -> AffineMatrixMap {
        let m = self.size;
        let entries = (0..m * m).map(|k| self.entries[(k % m) * m + k / m].clone()).collect();
        AffineMatrixMap {
            entries,
            ..self.clone()
        }
    }

    /// `left * L * right` for constant matrices.
    pub fn transform(&self, left: &Matrix, right: &Matrix) -> Result<AffineMatrixMap> {
        let m = self.size;
        for mat in [left, right] {
            if mat.rows() != m || mat.cols() != m {
                return Err(Error::Arity {
                    expected: m,
                    got: mat.rows(),
                });
            }
            if mat.field() != self.field {
                return Err(Error::FieldMismatch(mat.field().to_string(), self.field.to_string()));
            }
        }
        let zero = Polynomial::zero(&self.vars, self.field);
        let mut tmp = vec![zero.clone(); m * m];
        for i in 0..m {
            for k in 0..m {
                let a = &left[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let t = self.entry(k, j).scale(a)?;
                    tmp[i * m + j] = &tmp[i * m + j] + &t;
                }
            }
        }
        let mut out = vec![zero; m * m];
        for i in 0..m {
            for k in 0..m {
                for j in 0..m {
                    let b = &right[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = tmp[i * m + k].scale(b)?;
                    out[i * m + j] = &out[i * m + j] + &t;
                }
            }
        }
        Ok(AffineMatrixMap {
            entries: out,
            ..self.clone()
        })
    }

    pub fn with_entry(&self, i: usize, j: usize, e: Polynomial) -> Result<AffineMatrixMap> {
        let mut rows = self.rows();
        rows[i][j] = e;
        Self::new(&self.vars, self.field, rows)
    }

    pub fn scale_row(&self, i: usize, c: &FieldElement) -> Result<AffineMatrixMap> {
        let mut rows = self.rows();
        for e in rows[i].iter_mut() {
            *e = e.scale(c)?;
        }
        Self::new(&self.vars, self.field, rows)
    }

    /// Moves every entry into the prime field `target` (explicit reduction).
    pub fn reduce_mod(&self, target: Field) -> Result<AffineMatrixMap> {
        let rows = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|e| e.reduce_mod(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.vars, target, rows)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<Matrix> {
        let rows = self
            .entries
            .chunks(self.size)
            .map(|r| r.iter().map(|e| e.evaluate(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(self.field, rows)
    }

    /// Linear coefficients and constants of every entry as residues; only
    /// for prime fields. Layout: `entry -> (coeffs[0..n], const)`.
    pub(crate) fn residue_table(&self) -> Vec<(Vec<u64>, u64)> {
        self.entries
            .iter()
            .map(|e| {
                let (lin, c0) = e.affine_coefficients().expect("entries are affine");
                (
                    lin.iter().map(|c| c.residue().expect("prime field")).collect(),
                    c0.residue().expect("prime field"),
                )
            })
            .collect()
    }

    /// Symbolic determinant with the default Laplace cap.
    pub fn symbolic_det(&self, algorithm: DetAlgorithm) -> Result<Polynomial> {
        self.symbolic_det_capped(algorithm, DEFAULT_LAPLACE_CAP)
    }

    pub fn symbolic_det_capped(&self, algorithm: DetAlgorithm, laplace_cap: usize) -> Result<Polynomial> {
        match algorithm {
            DetAlgorithm::LaplaceMemo => {
                if self.size > laplace_cap {
                    return Err(Error::cap("laplace-memo determinant", CapKind::MatrixSize(laplace_cap)));
                }
                Ok(laplace_memo(&self.rows(), &self.vars, self.field))
            }
            DetAlgorithm::Berkowitz => Ok(berkowitz(&self.rows(), &self.vars, self.field)),
        }
    }

    /// Memoized Laplace expansion without a size cap.
    pub fn det(&self) -> Polynomial {
        laplace_memo(&self.rows(), &self.vars, self.field)
    }

    /// Brings `L(0)` to the canonical rank form `J_r` by constant row and
    /// column operations.
    pub fn rank_and_normalize(&self) -> Result<NormalizedExpression> {
        let nf = self.constant_part().rank_normal_form()?;
        let map = self.transform(&nf.left, &nf.right)?;
        let scalar = nf.left.det()?.mul_same(&nf.right.det()?);
        Ok(NormalizedExpression {
            rank: nf.rank,
            map,
            left: nf.left,
            right: nf.right,
            scalar,
        })
    }
}

/// `J + Z = P * L * Q` with `J` the canonical rank-`r` constant part.
#[derive(Clone, Debug)]
pub struct NormalizedExpression {
    pub rank: usize,
    /// The transformed map `J + Z`.
    pub map: AffineMatrixMap,
    pub left: Matrix,
    pub right: Matrix,
    /// `det(P) * det(Q)`, so `det(J + Z) = scalar * det(L)`.
    pub scalar: FieldElement,
}

impl NormalizedExpression {
    /// The linear part `Z`.
    pub fn z(&self) -> AffineMatrixMap {
        self.map.linear_part()
    }

    pub fn j(&self) -> Matrix {
        Matrix::canonical_rank_form(self.map.field(), self.map.size(), self.rank)
    }

    /// `P^{-1} (J + Z) Q^{-1}`, which must equal the original map.
    pub fn recompose(&self) -> Result<AffineMatrixMap> {
        let pi = self
            .left
            .inverse()
            .ok_or_else(|| Error::Invalid("left factor not invertible".into()))?;
        let qi = self
            .right
            .inverse()
            .ok_or_else(|| Error::Invalid("right factor not invertible".into()))?;
        self.map.transform(&pi, &qi)
    }
}

/// Sign of placing column `j` first among the columns of `mask`.
fn laplace_sign(mask: u64, j: usize) -> bool {
    (mask & ((1u64 << j) - 1)).count_ones() % 2 == 1
}

/// Expansion along rows bottom-up; level `k` holds the minors of the last
/// `k` rows keyed by their column subset. Only non-zero minors are stored.
pub(crate) fn laplace_memo(rows: &[Vec<Polynomial>], vars: &VarSet, field: Field) -> Polynomial {
    let m = rows.len();
    assert!(m < 64, "laplace-memo supports sizes below 64");
    let mut level: HashMap<u64, Polynomial> = HashMap::new();
    level.insert(0, Polynomial::one(vars, field));
    for k in 1..=m {
        let row = &rows[m - k];
        // every superset of a stored minor by one column
        let mut targets: Vec<u64> = level
            .keys()
            .flat_map(|&s| (0..m).filter(move |j| s & (1 << j) == 0).map(move |j| s | (1 << j)))
            .collect();
        targets.sort_unstable();
        targets.dedup();
        let compute = |&mask: &u64| -> Option<(u64, Polynomial)> {
            let mut acc = Polynomial::zero(vars, field);
            for j in (0..m).filter(|j| mask & (1 << j) != 0) {
                let e = &row[j];
                if e.is_zero() {
                    continue;
                }
                let Some(minor) = level.get(&(mask & !(1 << j))) else {
                    continue;
                };
                let t = e * minor;
                acc = if laplace_sign(mask, j) { &acc - &t } else { &acc + &t };
            }
            (!acc.is_zero()).then_some((mask, acc))
        };
        let next: Vec<(u64, Polynomial)> = if targets.len() >= 64 {
            targets.par_iter().filter_map(compute).collect()
        } else {
            targets.iter().filter_map(compute).collect()
        };
        level = next.into_iter().collect();
    }
    level
        .remove(&((1u64 << m) - 1))
        .unwrap_or_else(|| Polynomial::zero(vars, field))
}

/// Division-free Berkowitz algorithm. Returns `det(A)` as `(-1)^m` times the
/// constant coefficient of `det(λI - A)`.
pub(crate) fn berkowitz(a: &[Vec<Polynomial>], vars: &VarSet, field: Field) -> Polynomial {
    let m = a.len();
    let zero = Polynomial::zero(vars, field);
    let one = Polynomial::one(vars, field);
    // coefficients of the characteristic polynomial of the leading k x k block,
    // highest power first
    let mut c: Vec<Polynomial> = vec![one.clone()];
    for k in 0..m {
        // A_{k+1} = [[A_k, S], [R, a_kk]]
        let r_row: Vec<&Polynomial> = (0..k).map(|j| &a[k][j]).collect();
        let s_col: Vec<Polynomial> = (0..k).map(|i| a[i][k].clone()).collect();
        // toeplitz column: 1, -a_kk, -R S, -R A S, ..., -R A^{k-1} S
        let mut col = Vec::with_capacity(k + 2);
        col.push(one.clone());
        col.push(-&a[k][k]);
        let mut v = s_col;
        for _ in 0..k {
            let rv = r_row.iter().zip(&v).fold(zero.clone(), |acc, (r, x)| &acc + &(*r * x));
            col.push(-&rv);
            // v <- A_k v
            v = (0..k)
                .map(|i| {
                    (0..k).fold(zero.clone(), |acc, j| {
                        if a[i][j].is_zero() || v[j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][j] * &v[j])
                        }
                    })
                })
                .collect();
        }
        // new c = T c where T is (k+2) x (k+1) lower-triangular Toeplitz
        let mut next = vec![zero.clone(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate().take(i + 1) {
                let t = &col[i - j];
                if t.is_zero() || cj.is_zero() {
                    continue;
                }
                *slot = &*slot + &(t * cj);
            }
        }
        c = next;
    }
    let last = c.pop().expect("m + 1 coefficients");
    if m % 2 == 1 {
        -&last
    } else {
        last
    }
}

/// Calls `f(perm, sign)` for every permutation of `0..n` (`sign` true = odd).
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], bool)) {
    // Heap's algorithm; each step is a single transposition
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut odd = false;
    f(&p, odd);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            odd = !odd;
            f(&p, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn permutation_polynomial(n: usize, field: Field, signed: bool) -> Polynomial {
    let vars = VarSet::matrix("x", n);
    let mut terms = Vec::new();
    for_each_permutation(n, |p, odd| {
        let mut exps = vec![0u16; n * n];
        for (i, &j) in p.iter().enumerate() {
            exps[i * n + j] = 1;
        }
        let c = if signed && odd { field.from_i64(-1) } else { field.one() };
        terms.push((Monomial::from_exponents(&exps), c));
    });
    Polynomial::from_terms(&vars, field, terms).expect("valid terms")
}

pub const MAX_PERM_SIZE: usize = 6;
pub const MAX_GENERIC_DET_SIZE: usize = 5;

/// `perm_n = Σ_σ x_{1σ(1)} ⋯ x_{nσ(n)}` in the variables `x11 .. xnn`.
pub fn perm_polynomial(n: usize, field: Field) -> Result<Polynomial> {
    if n == 0 || n > MAX_PERM_SIZE {
        return Err(Error::SizeOutOfRange {
            what: "perm_polynomial",
            size: n,
            max: MAX_PERM_SIZE,
        });
    }
    Ok(permutation_polynomial(n, field, false))
}

/// Determinant of the generic `m x m` matrix `(x_ij)`.
pub fn generic_det_polynomial(m: usize, field: Field) -> Result<Polynomial> {
    if m == 0 || m > MAX_GENERIC_DET_SIZE {
        return Err(Error::SizeOutOfRange {
            what: "generic_det_polynomial",
            size: m,
            max: MAX_GENERIC_DET_SIZE,
        });
    }
    Ok(permutation_polynomial(m, field, true))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exact,
    Probabilistic { trials: usize, seed: u64 },
}

/// A monomial whose coefficient differs between `det L` and `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialWitness {
    pub monomial: String,
    pub det_coefficient: String,
    pub target_coefficient: String,
}

/// A point where `det L(x) != f(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointWitness {
    pub point: Vec<u64>,
    pub modulus: u64,
    pub det_value: u64,
    pub target_value: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub size: usize,
    pub mode: &'static str,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial_witness: Option<MonomialWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_witness: Option<PointWitness>,
    pub trials: usize,
    /// Prime used for sampling (the field itself, or the hashing prime for ℚ).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling_modulus: Option<u64>,
    /// Upper bound on the probability that a mismatch survives all trials.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub algorithm: DetAlgorithm,
    pub laplace_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Exact,
            algorithm: DetAlgorithm::LaplaceMemo,
            laplace_cap: DEFAULT_LAPLACE_CAP,
        }
    }
}

/// Checks `det(L(x)) = f(x)`.
pub fn verify_expression(map: &AffineMatrixMap, f: &Polynomial, opts: VerifyOptions) -> Result<VerifyReport> {
    if f.vars() != map.vars() {
        return Err(Error::VarSetMismatch(f.vars().to_string(), map.vars().to_string()));
    }
    if f.field() != map.field() {
        return Err(Error::FieldMismatch(f.field().to_string(), map.field().to_string()));
    }
    match opts.mode {
        VerifyMode::Exact => {
            let det = map.symbolic_det_capped(opts.algorithm, opts.laplace_cap)?;
            let diff = &det - f;
            let monomial_witness = diff.leading_monomial().map(|m| MonomialWitness {
                monomial: m.display(f.vars()).to_string(),
                det_coefficient: det.coefficient(m).to_string(),
                target_coefficient: f.coefficient(m).to_string(),
            });
            Ok(VerifyReport {
                size: map.size(),
                mode: "exact",
                matches: diff.is_zero(),
                monomial_witness,
                point_witness: None,
                trials: 0,
                sampling_modulus: None,
                failure_bound: None,
            })
        }
        VerifyMode::Probabilistic { trials, seed } => verify_probabilistic(map, f, trials, seed),
    }
}

fn verify_probabilistic(map: &AffineMatrixMap, f: &Polynomial, trials: usize, seed: u64) -> Result<VerifyReport> {
    let deg = map.size().max(f.degree().finite().unwrap_or(0) as usize) as u64;
    let (map, f) = match map.field() {
        Field::Prime(p) => {
            if p <= 2 * deg {
                return Err(Error::FieldTooSmall(format!(
                    "probabilistic verification needs p > 2*{deg}, got p = {p}"
                )));
            }
            (map.clone(), f.clone())
        }
        Field::Rationals => {
            let target = Field::Prime(LARGE_PRIME);
            (map.reduce_mod(target)?, f.reduce_mod(target)?)
        }
    };
    let p = map.field().characteristic();
    let n = map.vars().len();
    let m = map.size();
    let table = map.residue_table();
    let fpoly = ResiduePoly::new(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = vec![0u64; m * m];
    let mut point = vec![0u64; n];
    for t in 0..trials {
        for x in point.iter_mut() {
            *x = rng.random_range(0..p);
        }
        fill_residue_matrix(&table, &point, p, &mut scratch);
        let dv = det_mod_p(&mut scratch, m, p);
        let fv = fpoly.eval(&point);
        if dv != fv {
            return Ok(VerifyReport {
                size: m,
                mode: "probabilistic",
                matches: false,
                monomial_witness: None,
                point_witness: Some(PointWitness {
                    point: point.clone(),
                    modulus: p,
                    det_value: dv,
                    target_value: fv,
                }),
                trials: t + 1,
                sampling_modulus: Some(p),
                failure_bound: None,
            });
        }
    }
    let per_trial = deg as f64 / p as f64;
    Ok(VerifyReport {
        size: m,
        mode: "probabilistic",
        matches: true,
        monomial_witness: None,
        point_witness: None,
        trials,
        sampling_modulus: Some(p),
        failure_bound: Some(per_trial.powi(trials.min(i32::MAX as usize) as i32)),
    })
}

/// Evaluates every affine entry at `point` into a row-major residue matrix.
pub(crate) fn fill_residue_matrix(table: &[(Vec<u64>, u64)], point: &[u64], p: u64, out: &mut [u64]) {
    use crate::algebra::{add_mod, mul_mod};
    for (slot, (lin, c0)) in out.iter_mut().zip(table) {
        let mut v = *c0;
        for (a, x) in lin.iter().zip(point) {
            if *a != 0 {
                v = add_mod(v, mul_mod(*a, *x, p), p);
            }
        }
        *slot = v;
    }
}

/// Polynomial over 𝔽_p flattened for fast repeated evaluation.
pub(crate) struct ResiduePoly {
    p: u64,
    terms: Vec<(Vec<(usize, u16)>, u64)>,
}

impl ResiduePoly {
    pub(crate) fn new(f: &Polynomial) -> Self {
        let p = f.field().characteristic();
        assert!(p > 0, "residue polynomial needs a prime field");
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| {
                let support = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| (i, *e))
                    .collect();
                (support, c.residue().expect("prime field"))
            })
            .collect();
        ResiduePoly { p, terms }
    }

    pub(crate) fn eval(&self, point: &[u64]) -> u64 {
        use crate::algebra::{add_mod, mul_mod};
        let p = self.p;
        let mut acc = 0;
        for (support, c) in &self.terms {
            let mut t = *c;
            for &(i, e) in support {
                for _ in 0..e {
                    t = mul_mod(t, point[i], p);
                }
            }
            acc = add_mod(acc, t, p);
        }
        acc
    }
}
