use std::fmt::Write as _;

use detcx_core::explore::{cone_reduce, sample_codim, SampleParams};
use detcx_core::expressions::{
    abp_to_determinant, catalog_get, catalog_names, cubic_case_analysis_for, cubic_rank3_template,
    extract_coefficient_equations, grenet_abp, six_equation_filter, SystemKind,
};
use detcx_core::groebner::DEFAULT_PRIME;
use detcx_core::io::{map_from_json, MapFile};
use detcx_core::matforms::{verify_expression, DetAlgorithm, VerifyMode, VerifyOptions};
use detcx_core::search::{dc_exact, search_expressions, DcVerdict, SearchMode, SearchSpec, DEFAULT_SEARCH_CAP};
use detcx_core::singularity::{
    analyze_expression, certify_lower_bound, check_avoids_singular_locus, codim_sing, AvoidMode, AvoidVerdict,
};
use detcx_core::{Error, Field, Monomial, Result, VarSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Algorithm, Command, Global, Mode, System};
use crate::input::{groebner_config, laplace_cap, map_and_target, polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Positive,
    Negative,
    Capped,
}

pub struct Report {
    pub value: Value,
    pub headline: String,
    pub status: Status,
    /// Emitted one per line before `value` in JSON mode.
    pub stream: Vec<Value>,
}

impl Report {
    fn new(value: impl Serialize, headline: impl Into<String>, positive: bool) -> Self {
        Report {
            value: serde_json::to_value(value).expect("serializable"),
            headline: headline.into(),
            status: if positive { Status::Positive } else { Status::Negative },
            stream: Vec::new(),
        }
    }
}

fn prime_default(field: Option<Field>) -> Field {
    field.unwrap_or(Field::Prime(DEFAULT_PRIME))
}

fn system_kind(s: System) -> SystemKind {
    match s {
        System::Six => SystemKind::Six,
        System::Degree3 => SystemKind::Degree3,
        System::Full => SystemKind::Full,
    }
}

pub fn run(command: &Command, g: &Global) -> Result<Report> {
    let cfg = groebner_config(g);
    match command {
        Command::Parse { poly, vars } => {
            let field = poly.field.unwrap_or(Field::Rationals);
            let vars = vars
                .as_deref()
                .map(|v| VarSet::new(v.split(',').map(str::trim)))
                .transpose()?;
            let f = polynomial(&poly.poly, field, vars.as_ref())?;
            let value = json!({
                "input": poly.poly,
                "field": field.to_string(),
                "vars": f.vars().names(),
                "polynomial": f.to_string(),
                "degree": f.degree().finite(),
                "homogeneous": f.is_homogeneous(),
                "terms": f.len(),
                "fingerprint": f.fingerprint(),
            });
            Ok(Report::new(value, format!("polynomial: {f}"), true))
        }
        Command::Verify {
            map,
            mode,
            trials,
            seed,
            algorithm,
        } => {
            let (map, f) = map_and_target(map)?;
            let opts = VerifyOptions {
                mode: match mode {
                    Mode::Exact => VerifyMode::Exact,
                    Mode::Probabilistic => VerifyMode::Probabilistic {
                        trials: *trials,
                        seed: *seed,
                    },
                },
                algorithm: match algorithm {
                    Algorithm::Laplace => DetAlgorithm::LaplaceMemo,
                    Algorithm::Berkowitz => DetAlgorithm::Berkowitz,
                },
                laplace_cap: laplace_cap(g),
            };
            let r = verify_expression(&map, &f, opts)?;
            let headline = if r.matches {
                "verdict: match"
            } else {
                "verdict: mismatch"
            };
            let mut value = serde_json::to_value(&r)?;
            value["target"] = json!(f.to_string());
            value["field"] = json!(f.field().to_string());
            Ok(Report::new(value, headline, r.matches))
        }
        Command::Codim { poly } => {
            let f = polynomial(&poly.poly, prime_default(poly.field), None)?;
            let r = codim_sing(&f, &cfg)?;
            let mut value = serde_json::to_value(&r)?;
            value["input"] = json!(poly.poly);
            Ok(Report::new(value, format!("codim: {}", r.codim), true))
        }
        Command::Certify { poly } => {
            let f = polynomial(&poly.poly, prime_default(poly.field), None)?;
            let c = certify_lower_bound(&f, &cfg)?;
            let headline = match c.bound() {
                Some(b) => format!("verdict: dc >= {b}"),
                None => "verdict: not applicable".to_string(),
            };
            Ok(Report::new(&c, headline, c.bound().is_some()))
        }
        Command::Analyze { map } => {
            let (map, f) = map_and_target(map)?;
            let r = analyze_expression(&map, &f)?;
            let ok = match (&r.top_rank, &r.graded) {
                (Some(t), _) => t.all_checks_pass,
                (None, Some(gc)) => gc.consistent && gc.lowest_part_is_block_det,
                (None, None) => false,
            };
            let headline = format!("rank: {}, checks {}", r.rank, if ok { "pass" } else { "fail" });
            Ok(Report::new(&r, headline, ok))
        }
        Command::AvoidCheck {
            map,
            mode,
            trials,
            seed,
        } => {
            let (map, f) = map_and_target(map)?;
            let mode = match mode {
                Mode::Exact => AvoidMode::Exact,
                Mode::Probabilistic => AvoidMode::Probabilistic {
                    trials: *trials,
                    seed: *seed,
                    modulus: None,
                },
            };
            let r = check_avoids_singular_locus(&map, &f, mode, &cfg)?;
            let ok = matches!(r.verdict, AvoidVerdict::Avoids | AvoidVerdict::NoWitness);
            let headline = format!("verdict: {}", serde_json::to_value(&r.verdict)?.as_str().unwrap_or("?"));
            Ok(Report::new(&r, headline, ok))
        }
        Command::Grenet { n, field } => {
            let field = field.unwrap_or(Field::Rationals);
            let abp = grenet_abp(*n, field)?;
            let map = abp_to_determinant(&abp, laplace_cap(g).max((1 << n) - 1))?;
            let target = detcx_core::matforms::perm_polynomial(*n, field)?;
            let verified = map.det() == target;
            let value = json!({
                "n": n,
                "field": field.to_string(),
                "vertices": abp.vertex_count(),
                "edges": abp.edges().len(),
                "paths": abp.path_count().to_string(),
                "size": map.size(),
                "verified": verified,
                "map": MapFile::from_map(&map),
            });
            Ok(Report::new(value, format!("size: {}", map.size()), verified))
        }
        Command::Catalog { name, field, map_only } => {
            let field = field.unwrap_or(Field::Rationals);
            match name {
                None => {
                    let entries = catalog_names()
                        .iter()
                        .map(|n| {
                            let e = catalog_get(n, field)?;
                            Ok(json!({
                                "name": e.name,
                                "description": e.description,
                                "size": e.map.size(),
                                "target": e.target.to_string(),
                            }))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Report::new(
                        json!({ "field": field.to_string(), "entries": entries }),
                        "catalog",
                        true,
                    ))
                }
                Some(name) => {
                    let e = catalog_get(name, field)?;
                    let file = MapFile::from_map(&e.map);
                    let value = if *map_only {
                        serde_json::to_value(&file)?
                    } else {
                        json!({
                            "name": e.name,
                            "description": e.description,
                            "target": e.target.to_string(),
                            "verified": true,
                            "map": file,
                        })
                    };
                    Ok(Report::new(value, format!("entry: {}", e.name), true))
                }
            }
        }
        Command::CoeffEqs { system } => {
            let t = cubic_rank3_template(Field::Rationals)?;
            let kind = system_kind(*system);
            let keep = |m: &Monomial| match kind {
                SystemKind::Six => six_equation_filter(m),
                SystemKind::Degree3 => m.degree() == 3,
                SystemKind::Full => true,
            };
            let f = detcx_core::expressions::cubic_surface(Field::Rationals)?;
            let eqs = extract_coefficient_equations(&t, &f, Some(&keep))?;
            let template: Vec<Vec<String>> = (0..t.size())
                .map(|i| (0..t.size()).map(|j| t.entry(i, j).to_string()).collect())
                .collect();
            let value = json!({
                "target": f.to_string(),
                "system": kind,
                "parameters": t.params().names(),
                "template": template,
                "equations": eqs,
            });
            Ok(Report::new(value, format!("equations: {}", eqs.len()), true))
        }
        Command::CubicCase { systems } => {
            let mut cfg = cfg.clone();
            if cfg.timeout.is_none() {
                cfg.timeout = Some(std::time::Duration::from_secs(30));
            }
            let kinds: Vec<SystemKind> = systems.iter().map(|s| system_kind(*s)).collect();
            let r = cubic_case_analysis_for(&kinds, &cfg)?;
            let mut headline = String::new();
            for s in &r.systems {
                let verdict = match s.claim_holds {
                    Some(true) => "holds",
                    Some(false) => "fails",
                    None => "undecided",
                };
                let _ = write!(headline, "{:?}: claim {verdict}; ", s.system);
            }
            Ok(Report::new(&r, headline.trim_end_matches("; ").to_string(), true))
        }
        Command::Search {
            poly,
            m,
            unrestricted,
            max_results,
        } => {
            let field = poly
                .field
                .ok_or_else(|| Error::Invalid("search needs --field Fp:p".into()))?;
            let f = polynomial(&poly.poly, field, None)?;
            let mut spec = SearchSpec::new(f, *m)?.with_cap(g.search_cap.unwrap_or(DEFAULT_SEARCH_CAP));
            if *unrestricted {
                spec = spec.with_mode(SearchMode::Unrestricted);
            }
            if let Some(k) = max_results {
                spec = spec.with_max_results(*k);
            }
            let out = search_expressions(&spec)?;
            let found = !out.found.is_empty();
            let stream = out.found.iter().map(|f| json!({ "found": f })).collect();
            let headline = if out.exhausted {
                format!("verdict: exhausted after {} candidates", out.candidates)
            } else {
                format!("verdict: found {}", out.found.len())
            };
            let mut value = serde_json::to_value(&out)?;
            value.as_object_mut().expect("object").remove("found");
            value["found_count"] = json!(out.found.len());
            let mut report = Report::new(json!({ "verdict": value }), headline, found);
            report.stream = stream;
            Ok(report)
        }
        Command::Dc { poly, m_max } => {
            let field = poly
                .field
                .ok_or_else(|| Error::Invalid("dc needs --field Fp:p".into()))?;
            let f = polynomial(&poly.poly, field, None)?;
            let out = dc_exact(&f, *m_max, g.search_cap.unwrap_or(DEFAULT_SEARCH_CAP))?;
            let (headline, status) = match &out.verdict {
                DcVerdict::Exact { dc } => (format!("dc: {dc}"), Status::Positive),
                DcVerdict::Above { m_max } => (format!("dc: > {m_max}"), Status::Negative),
                DcVerdict::GaveUp { m, .. } => (format!("dc: undecided at size {m}"), Status::Capped),
            };
            let mut report = Report::new(&out, headline, true);
            report.status = status;
            Ok(report)
        }
        Command::Bertini {
            n,
            m,
            p,
            trials,
            seed,
            csv,
        } => {
            let mut params = SampleParams::new(*n, *m, *p, *trials, *seed);
            if let Some(t) = g.timeout {
                params.timeout = Some(std::time::Duration::from_secs_f64(t));
            }
            let r = sample_codim(&params, &cfg)?;
            if let Some(path) = csv {
                let mut text = String::from("codim,count\n");
                for (c, k) in &r.histogram {
                    let _ = writeln!(text, "{c},{k}");
                }
                let _ = writeln!(text, "degenerate,{}", r.degenerate);
                let _ = writeln!(text, "timeout,{}", r.timeouts);
                std::fs::write(path, text)
                    .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            let headline = format!(
                "violations: {}, modal codim: {}",
                r.violations.len(),
                r.modal_codim.map_or("-".to_string(), |c| c.to_string())
            );
            Ok(Report::new(&r, headline, r.violations.is_empty()))
        }
        Command::ConeReduce { map } => {
            let text = std::fs::read_to_string(map)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", map.display())))?;
            let r = cone_reduce(&map_from_json(&text)?)?;
            Ok(Report::new(&r, format!("kernel dimension: {}", r.kernel_dim), true))
        }
    }
}
