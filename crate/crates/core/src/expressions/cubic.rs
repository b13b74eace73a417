//! Case analysis for a size-4 expression of the cubic surface whose constant
//! part has rank 3: the coefficient systems of the normalized template and
//! their consistency under the sign conditions on α and γ.

use std::fmt;

use serde::Serialize;

use super::catalog::{cubic_surface, cubic_vars};
use super::template::{extract_coefficient_equations, CoefficientEquation, ParamTemplate};
use crate::algebra::{Field, Monomial, Polynomial, VarSet};
use crate::error::Result;
use crate::groebner::{buchberger, BasisStats, GroebnerConfig, Ideal};

/// Parameter names: `alpha, beta, gamma`, then the `x, y, z, t`
/// coefficients `X_ij, Y_ij, Z_ij, T_ij` of the lower-right block.
pub fn cubic_template_params() -> VarSet {
    let mut names = vec!["alpha".to_string(), "beta".to_string(), "gamma".to_string()];
    for letter in ["X", "Y", "Z", "T"] {
        for i in 2..=4 {
            for j in 2..=4 {
                names.push(format!("{letter}{i}{j}"));
            }
        }
    }
    VarSet::new(names).expect("valid names")
}

/// First column `(0, z, y, t)`, first row `(0, αt+βy, -βz+γt, -γy-αz)` and
/// `δ_ij + X_ij x + Y_ij y + Z_ij z + T_ij t` in the remaining block.
pub fn cubic_rank3_template(field: Field) -> Result<ParamTemplate> {
    let params = cubic_template_params();
    let entry = |i: usize, j: usize| {
        let one = if i == j { "1 + " } else { "" };
        format!("{one}X{i}{j}*x + Y{i}{j}*y + Z{i}{j}*z + T{i}{j}*t")
    };
    let rows: Vec<Vec<String>> = vec![
        vec![
            "0".into(),
            "alpha*t + beta*y".into(),
            "-beta*z + gamma*t".into(),
            "-gamma*y - alpha*z".into(),
        ],
        vec!["z".into(), entry(2, 2), entry(2, 3), entry(2, 4)],
        vec!["y".into(), entry(3, 2), entry(3, 3), entry(3, 4)],
        vec!["t".into(), entry(4, 2), entry(4, 3), entry(4, 4)],
    ];
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    ParamTemplate::parse(&cubic_vars(), &params, field, &rows)
}

/// Degree 3 monomials with `x`-exponent 1.
pub fn six_equation_filter(m: &Monomial) -> bool {
    m.degree() == 3 && m.exponent(0) == 1
}

/// The coefficient equations of the rank-3 template against the cubic.
pub fn cubic_six_equations(field: Field) -> Result<Vec<CoefficientEquation>> {
    let t = cubic_rank3_template(field)?;
    extract_coefficient_equations(&t, &cubic_surface(field)?, Some(&six_equation_filter))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseBranch {
    /// `1 - α·u` adjoined.
    AlphaInvertible,
    /// `γ` adjoined.
    GammaZero,
    Unrestricted,
    /// `α` and `1 - γ·u` adjoined.
    AlphaZeroGammaInvertible,
}

impl CaseBranch {
    pub const ALL: [CaseBranch; 4] = [
        CaseBranch::AlphaInvertible,
        CaseBranch::GammaZero,
        CaseBranch::Unrestricted,
        CaseBranch::AlphaZeroGammaInvertible,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseBranch::AlphaInvertible => "alpha != 0",
            CaseBranch::GammaZero => "gamma = 0",
            CaseBranch::Unrestricted => "unrestricted",
            CaseBranch::AlphaZeroGammaInvertible => "alpha = 0, gamma != 0",
        }
    }

    /// Consistency the claim predicts: consistent only when `α = 0, γ ≠ 0`.
    pub fn claimed_consistent(self) -> Option<bool> {
        match self {
            CaseBranch::AlphaInvertible | CaseBranch::GammaZero => Some(false),
            CaseBranch::Unrestricted | CaseBranch::AlphaZeroGammaInvertible => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// Degree 3, `x`-exponent 1.
    Six,
    /// Every degree 3 monomial.
    Degree3,
    /// Every monomial.
    Full,
}

impl SystemKind {
    pub const ALL: [SystemKind; 3] = [SystemKind::Six, SystemKind::Degree3, SystemKind::Full];

    fn keep(self, m: &Monomial) -> bool {
        match self {
            SystemKind::Six => six_equation_filter(m),
            SystemKind::Degree3 => m.degree() == 3,
            SystemKind::Full => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BranchStatus {
    Inconsistent,
    Consistent {
        dimension: i64,
    },
    Capped {
        reason: String,
    },
    /// Decided from the other branches, which cover every case.
    Implied {
        consistent: bool,
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchResult {
    pub branch: CaseBranch,
    pub condition: &'static str,
    #[serde(flatten)]
    pub status: BranchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<BasisStats>,
    /// `None` when the claim says nothing about this branch or it was capped.
    pub agrees_with_claim: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemResult {
    pub system: SystemKind,
    pub equations: Vec<CoefficientEquation>,
    pub branches: Vec<BranchResult>,
    /// Every branch the claim covers was decided and agrees with it.
    pub claim_holds: Option<bool>,
}

/// With `α = 0`, the first row vanishes on `y = 0, z = γs, t = βs`, where the
/// cubic restricts to `γ³s³`.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualCheck {
    pub substitution: &'static str,
    pub first_row_vanishes: bool,
    pub restricted_target: String,
    pub nonzero_for_gamma_nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicCaseReport {
    pub target: String,
    pub field: String,
    pub claim: &'static str,
    pub systems: Vec<SystemResult>,
    pub residual: ResidualCheck,
}

pub const CUBIC_CASE_CLAIM: &str = "the coefficient equations are inconsistent unless alpha = 0 and gamma != 0";

fn branch_generators(eqs: &[Polynomial], params: &VarSet, field: Field, branch: CaseBranch) -> Result<Ideal> {
    let ring = params.concat(&VarSet::new(["u"])?)?;
    let mut gens = eqs.iter().map(|e| e.embed(&ring)).collect::<Result<Vec<_>>>()?;
    let var = |name: &str| Polynomial::var_named(&ring, field, name);
    let one = Polynomial::one(&ring, field);
    match branch {
        CaseBranch::AlphaInvertible => gens.push(one.sub(&var("alpha")?.mul(&var("u")?)?)?),
        CaseBranch::GammaZero => gens.push(var("gamma")?),
        CaseBranch::Unrestricted => {}
        CaseBranch::AlphaZeroGammaInvertible => {
            gens.push(var("alpha")?);
            gens.push(one.sub(&var("gamma")?.mul(&var("u")?)?)?);
        }
    }
    Ideal::new(&ring, field, gens)
}

fn run_branch(
    eqs: &[Polynomial],
    params: &VarSet,
    field: Field,
    branch: CaseBranch,
    cfg: &GroebnerConfig,
) -> Result<BranchResult> {
    let ideal = branch_generators(eqs, params, field, branch)?;
    let (status, stats) = match buchberger(&ideal, cfg) {
        Ok(gb) if gb.is_trivial() => (BranchStatus::Inconsistent, Some(gb.stats().clone())),
        Ok(gb) => (
            BranchStatus::Consistent {
                dimension: gb.dimension(),
            },
            Some(gb.stats().clone()),
        ),
        Err(e) if e.is_cap() => (BranchStatus::Capped { reason: e.to_string() }, None),
        Err(e) => return Err(e),
    };
    let agrees_with_claim = match (&status, branch.claimed_consistent()) {
        (BranchStatus::Capped { .. }, _) | (_, None) => None,
        (s, Some(c)) => Some(s.is_consistent() == Some(c)),
    };
    Ok(BranchResult {
        branch,
        condition: branch.label(),
        status,
        stats,
        agrees_with_claim,
    })
}

/// `α ≠ 0`, `γ = 0` and `α = 0, γ ≠ 0` cover every point, so a capped
/// unrestricted run is decided by them.
fn settle_unrestricted(branches: &mut [BranchResult]) {
    let cover: Vec<Option<bool>> = branches
        .iter()
        .filter(|b| b.branch != CaseBranch::Unrestricted)
        .map(|b| b.status.is_consistent())
        .collect();
    let implied = if let Some(b) = branches
        .iter()
        .find(|b| b.branch != CaseBranch::Unrestricted && b.status.is_consistent() == Some(true))
    {
        Some((true, format!("the branch {} is consistent", b.condition)))
    } else if cover.iter().all(|c| *c == Some(false)) {
        Some((false, "every covering branch is inconsistent".to_string()))
    } else {
        None
    };
    let Some((consistent, reason)) = implied else {
        return;
    };
    for b in branches.iter_mut() {
        if b.branch == CaseBranch::Unrestricted {
            if let BranchStatus::Capped { reason: cap } = &b.status {
                b.status = BranchStatus::Implied {
                    consistent,
                    reason: format!("{reason}; direct run {cap}"),
                };
            }
        }
    }
}

pub fn analyze_system(kind: SystemKind, field: Field, cfg: &GroebnerConfig) -> Result<SystemResult> {
    let t = cubic_rank3_template(field)?;
    let keep = |m: &Monomial| kind.keep(m);
    let equations = extract_coefficient_equations(&t, &cubic_surface(field)?, Some(&keep))?;
    let polys: Vec<Polynomial> = equations.iter().map(|e| e.polynomial.clone()).collect();
    let mut branches = CaseBranch::ALL
        .iter()
        .map(|&b| run_branch(&polys, t.params(), field, b, cfg))
        .collect::<Result<Vec<_>>>()?;
    settle_unrestricted(&mut branches);
    let covered: Vec<Option<bool>> = branches
        .iter()
        .filter(|b| b.branch.claimed_consistent().is_some())
        .map(|b| b.agrees_with_claim)
        .collect();
    let claim_holds = if covered.contains(&Some(false)) {
        Some(false)
    } else if covered.iter().all(Option::is_some) {
        Some(true)
    } else {
        None
    };
    Ok(SystemResult {
        system: kind,
        equations,
        branches,
        claim_holds,
    })
}

pub fn residual_check(field: Field) -> Result<ResidualCheck> {
    let ring = VarSet::new(["x", "y", "z", "t", "alpha", "beta", "gamma", "s"])?;
    let p = |s: &str| Polynomial::parse(s, &ring, field);
    let images = ["x", "0", "gamma*s", "beta*s", "0", "beta", "gamma", "s"]
        .iter()
        .map(|s| p(s))
        .collect::<Result<Vec<_>>>()?;
    let row = ["alpha*t + beta*y", "-beta*z + gamma*t", "-gamma*y - alpha*z"];
    let mut first_row_vanishes = true;
    for e in row {
        first_row_vanishes &= p(e)?.compose(&images)?.is_zero();
    }
    let f = cubic_surface(field)?.embed(&ring)?.compose(&images)?;
    let expected = p("gamma^3*s^3")?;
    Ok(ResidualCheck {
        substitution: "alpha = 0, y = 0, z = gamma*s, t = beta*s",
        first_row_vanishes,
        restricted_target: f.to_string(),
        nonzero_for_gamma_nonzero: f == expected,
    })
}

/// All three systems over ℚ, each under the four branches.
pub fn cubic_case_analysis(cfg: &GroebnerConfig) -> Result<CubicCaseReport> {
    cubic_case_analysis_for(&SystemKind::ALL, cfg)
}

pub fn cubic_case_analysis_for(kinds: &[SystemKind], cfg: &GroebnerConfig) -> Result<CubicCaseReport> {
    let field = Field::Rationals;
    let systems = kinds
        .iter()
        .map(|&k| analyze_system(k, field, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(CubicCaseReport {
        target: cubic_surface(field)?.to_string(),
        field: field.to_string(),
        claim: CUBIC_CASE_CLAIM,
        systems,
        residual: residual_check(field)?,
    })
}

impl BranchStatus {
    pub fn is_consistent(&self) -> Option<bool> {
        match self {
            BranchStatus::Inconsistent => Some(false),
            BranchStatus::Consistent { .. } => Some(true),
            BranchStatus::Implied { consistent, .. } => Some(*consistent),
            BranchStatus::Capped { .. } => None,
        }
    }
}

impl fmt::Display for BranchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchStatus::Inconsistent => write!(f, "inconsistent"),
            BranchStatus::Consistent { dimension } => write!(f, "consistent (dimension {dimension})"),
            BranchStatus::Capped { reason } => write!(f, "undecided ({reason})"),
            BranchStatus::Implied { consistent: true, .. } => write!(f, "consistent (implied)"),
            BranchStatus::Implied { consistent: false, .. } => write!(f, "inconsistent (implied)"),
        }
    }
}

impl fmt::Display for CubicCaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target: {} over {}", self.target, self.field)?;
        writeln!(f, "claim: {}", self.claim)?;
        for s in &self.systems {
            writeln!(f, "system {:?}: {} equations", s.system, s.equations.len())?;
            if s.system == SystemKind::Six {
                for e in &s.equations {
                    writeln!(f, "  {e}")?;
                }
            }
            for b in &s.branches {
                let verdict = match b.agrees_with_claim {
                    Some(true) => "agrees",
                    Some(false) => "disagrees",
                    None => "-",
                };
                writeln!(f, "  {:<22} {:<32} {verdict}", b.condition, b.status.to_string())?;
            }
            let holds = match s.claim_holds {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undecided",
            };
            writeln!(f, "  claim {holds}")?;
        }
        writeln!(
            f,
            "residual: {} gives first row zero = {}, target restricts to {}",
            self.residual.substitution, self.residual.first_row_vanishes, self.residual.restricted_target
        )
    }
}
