//! Polynomial aliases, map loading and cap configuration.

use std::time::Duration;

use detcx_core::expressions::{catalog_get, cubic_surface};
use detcx_core::groebner::GroebnerConfig;
use detcx_core::io::map_from_json;
use detcx_core::matforms::{generic_det_polynomial, perm_polynomial, AffineMatrixMap, DEFAULT_LAPLACE_CAP};
use detcx_core::{Error, Field, Polynomial, Result, VarSet};

use crate::args::{Global, MapArg};

/// `x1^d + ... + xn^d`.
fn fermat(d: u32, n: usize, field: Field) -> Result<Polynomial> {
    let vars = VarSet::indexed("x", n);
    let mut f = Polynomial::zero(&vars, field);
    for i in 0..n {
        f = f.add(&Polynomial::var(&vars, field, i)?.pow(d)?)?;
    }
    Ok(f)
}

fn alias(src: &str, field: Field) -> Option<Result<Polynomial>> {
    let s = src.trim();
    let size = |rest: &str| rest.parse::<usize>().ok();
    if let Some(n) = s.strip_prefix("perm").and_then(size) {
        return Some(perm_polynomial(n, field));
    }
    if let Some(n) = s.strip_prefix("det").and_then(size) {
        return Some(generic_det_polynomial(n, field));
    }
    if s == "cubic" {
        return Some(cubic_surface(field));
    }
    if let Some(rest) = s.strip_prefix("fermat:") {
        let parsed = rest
            .split_once(':')
            .and_then(|(d, n)| Some((d.parse::<u32>().ok()?, n.parse::<usize>().ok()?)));
        return Some(match parsed {
            Some((d, n)) if n >= 1 => fermat(d, n, field),
            _ => Err(Error::Invalid(format!("expected fermat:d:n, got {s:?}"))),
        });
    }
    None
}

/// Resolves aliases, then parses; with `vars` the result lives in that ring.
pub fn polynomial(src: &str, field: Field, vars: Option<&VarSet>) -> Result<Polynomial> {
    match (alias(src, field), vars) {
        (Some(p), None) => p,
        (Some(p), Some(v)) => p?.embed(v),
        (None, Some(v)) => Polynomial::parse(src, v, field),
        (None, None) => Polynomial::parse_infer(src, field),
    }
}

/// The map and its target.
pub fn map_and_target(arg: &MapArg) -> Result<(AffineMatrixMap, Polynomial)> {
    let (map, default_target) = match (&arg.map, &arg.catalog) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let map = map_from_json(&text)?;
            let map = match arg.field {
                Some(f) if f != map.field() => map.reduce_mod(f)?,
                _ => map,
            };
            (map, None)
        }
        (None, Some(name)) => {
            let e = catalog_get(name, arg.field.unwrap_or(Field::Rationals))?;
            (e.map, Some(e.target))
        }
        (None, None) => return Err(Error::Invalid("one of --map or --catalog is required".into())),
    };
    let target = match (&arg.poly, default_target) {
        (Some(src), _) => polynomial(src, map.field(), Some(map.vars()))?,
        (None, Some(t)) => t,
        (None, None) => return Err(Error::Invalid("--poly is required with --map".into())),
    };
    Ok((map, target))
}

pub fn groebner_config(g: &Global) -> GroebnerConfig {
    let mut cfg = GroebnerConfig::default().with_verify(g.check_basis);
    if let Some(t) = g.timeout {
        cfg = cfg.with_timeout(Duration::from_secs_f64(t));
    }
    if let Some(p) = g.max_pairs {
        cfg = cfg.with_max_pairs(p);
    }
    if let Some(d) = g.max_degree {
        cfg = cfg.with_max_degree(d);
    }
    cfg
}

pub fn laplace_cap(g: &Global) -> usize {
    g.laplace_cap.unwrap_or(DEFAULT_LAPLACE_CAP)
}
