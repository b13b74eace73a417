use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::matforms::generic_det_polynomial;

fn ring(names: &[&str]) -> VarSet {
    VarSet::new(names.iter().copied()).unwrap()
}

fn ideal(v: &VarSet, field: Field, gens: &[&str]) -> Ideal {
    Ideal::new(v, field, gens.iter().map(|g| Polynomial::parse(g, v, field).unwrap())).unwrap()
}

fn gb(i: &Ideal) -> GroebnerBasis {
    let b = buchberger(i, &GroebnerConfig::default().with_verify(true)).unwrap();
    assert!(verify_basis(&b, i.generators()).unwrap().ok());
    b
}

fn texts(b: &GroebnerBasis) -> Vec<String> {
    b.polys().iter().map(|p| p.to_string()).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, v: &VarSet, p: u64, max_deg: u16, terms: usize) -> Polynomial {
    let n = v.len();
    let field = Field::Prime(p);
    let ts = (0..terms).map(|_| {
        let mut e = vec![0u16; n];
        let mut budget = rng.random_range(0..=max_deg);
        while budget > 0 {
            e[rng.random_range(0..n)] += 1;
            budget -= 1;
        }
        (Monomial::from_exponents(&e), field.from_u64(rng.random_range(0..p)))
    });
    Polynomial::from_terms(v, field, ts).unwrap()
}

#[test]
fn trivial_examples() {
    let v = ring(&["x", "y"]);
    assert_eq!(texts(&gb(&ideal(&v, Field::Rationals, &["x - 1"]))), ["x - 1"]);
    assert_eq!(texts(&gb(&ideal(&v, Field::Rationals, &["2*x - 2"]))), ["x - 1"]);
    assert_eq!(
        texts(&gb(&ideal(&v, Field::Rationals, &["x^2", "x*y"]))),
        ["x*y", "x^2"]
    );
    let one = gb(&ideal(&v, Field::Rationals, &["x", "x + 1"]));
    assert!(one.is_trivial());
    assert_eq!(one.dimension(), -1);
}

#[test]
fn twisted_cubic_over_f7() {
    let v = ring(&["x", "y", "z"]);
    let i = ideal(&v, Field::Prime(7), &["x^2 - y", "x^3 - z"]);
    let b = gb(&i);
    let check = verify_basis(&b, i.generators()).unwrap();
    assert!(check.ok());
    assert!(check.pairs_checked > 0);
    assert_eq!(b.dimension(), 1);
    for g in i.generators() {
        assert!(b.normal_form(g).unwrap().is_zero());
    }
    let plain = buchberger(&i, &GroebnerConfig::default().without_criteria()).unwrap();
    assert_eq!(plain, b);
}

#[test]
fn normal_form_basics() {
    let v = ring(&["x", "y"]);
    let b = gb(&ideal(&v, Field::Rationals, &["x^2"]));
    let p = Polynomial::parse("x^2*y", &v, Field::Rationals).unwrap();
    assert!(b.normal_form(&p).unwrap().is_zero());
    let q = Polynomial::parse("x^2*y + x*y + 3", &v, Field::Rationals).unwrap();
    let r = b.normal_form(&q).unwrap();
    assert_eq!(r.to_string(), "x*y + 3");
    assert_eq!(b.normal_form(&r).unwrap(), r);
    let w = ring(&["x", "z"]);
    let bad = Polynomial::parse("x", &w, Field::Rationals).unwrap();
    assert!(b.normal_form(&bad).is_err());
}

#[test]
fn coordinate_subspaces() {
    let v = VarSet::matrix("x", 3);
    for k in 0..=v.len() {
        let gens = (0..k).map(|i| Polynomial::var(&v, Field::Prime(101), i).unwrap());
        let i = Ideal::new(&v, Field::Prime(101), gens).unwrap();
        assert_eq!(dimension(&i, &GroebnerConfig::default()).unwrap(), (9 - k) as i64);
    }
}

#[test]
fn det3_jacobian_has_dimension_five() {
    let f = generic_det_polynomial(3, Field::Prime(DEFAULT_PRIME)).unwrap();
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    let i = Ideal::from_generators(gens).unwrap();
    let b = gb(&i);
    assert_eq!(b.dimension(), 5);
}

#[test]
fn rational_basis_verifies() {
    let v = ring(&["x", "y", "z"]);
    let i = ideal(
        &v,
        Field::Rationals,
        &["x*y^2 + y*z^2 + 1/3", "x^2*y - 2*z", "x*z - y^2 + 5"],
    );
    let b = gb(&i);
    let plain = buchberger(&i, &GroebnerConfig::default().without_criteria()).unwrap();
    assert_eq!(plain, b);
}

/// Adding x^p - x for each variable makes V(I) the set of F_p-points, so
/// triviality must agree with exhaustive point search.
#[test]
fn triviality_matches_point_enumeration_over_f3() {
    let p = 3u64;
    let field = Field::Prime(p);
    let v = ring(&["x", "y", "z"]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 2];
    for _ in 0..60 {
        let k = rng.random_range(1..=3);
        let gens: Vec<Polynomial> = (0..k).map(|_| random_poly(&mut rng, &v, p, 2, 3)).collect();
        let mut all = gens.clone();
        for name in ["x", "y", "z"] {
            all.push(Polynomial::parse(&format!("{name}^3 - {name}"), &v, field).unwrap());
        }
        let b = gb(&Ideal::new(&v, field, all).unwrap());
        let mut has_point = false;
        for a in 0..p {
            for bb in 0..p {
                for c in 0..p {
                    let pt = [field.from_u64(a), field.from_u64(bb), field.from_u64(c)];
                    if gens.iter().all(|g| g.evaluate(&pt).unwrap().is_zero()) {
                        has_point = true;
                    }
                }
            }
        }
        let one = Polynomial::one(&v, field);
        assert_eq!(!b.normal_form(&one).unwrap().is_zero(), has_point);
        assert_eq!(b.dimension() >= 0, has_point);
        seen[has_point as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn criteria_do_not_change_the_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v = ring(&["a", "b", "c"]);
    for _ in 0..25 {
        let gens: Vec<Polynomial> = (0..3).map(|_| random_poly(&mut rng, &v, 31, 3, 4)).collect();
        let i = Ideal::new(&v, Field::Prime(31), gens).unwrap();
        let with = gb(&i);
        let without = buchberger(&i, &GroebnerConfig::default().without_criteria()).unwrap();
        assert_eq!(with, without);
    }
}

#[test]
fn generator_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let v = ring(&["a", "b", "c", "d"]);
    for _ in 0..15 {
        let mut gens: Vec<Polynomial> = (0..4).map(|_| random_poly(&mut rng, &v, 101, 2, 4)).collect();
        let first = gb(&Ideal::new(&v, Field::Prime(101), gens.clone()).unwrap());
        gens.reverse();
        gens.rotate_left(1);
        let second = gb(&Ideal::new(&v, Field::Prime(101), gens).unwrap());
        assert_eq!(first, second);
        assert_eq!(first.dimension(), second.dimension());
    }
}

#[test]
fn membership_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = ring(&["a", "b", "c"]);
    for _ in 0..20 {
        let gens: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, &v, 101, 2, 3)).collect();
        let b = gb(&Ideal::new(&v, Field::Prime(101), gens.clone()).unwrap());
        let h = random_poly(&mut rng, &v, 101, 3, 5);
        let mut combo = h.clone();
        for g in &gens {
            let f = random_poly(&mut rng, &v, 101, 2, 3);
            combo = combo.add(&f.mul(g).unwrap()).unwrap();
        }
        assert_eq!(b.normal_form(&combo).unwrap(), b.normal_form(&h).unwrap());
    }
}

#[test]
fn caps_are_reported() {
    let f = generic_det_polynomial(3, Field::Prime(DEFAULT_PRIME)).unwrap();
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    let i = Ideal::from_generators(gens).unwrap();
    let e = buchberger(&i, &GroebnerConfig::default().with_max_pairs(3)).unwrap_err();
    assert!(e.is_cap());
    let e = buchberger(&i, &GroebnerConfig::default().with_max_degree(2)).unwrap_err();
    assert!(e.is_cap());
}

#[test]
fn zero_generators_are_dropped() {
    let v = ring(&["x"]);
    let i = ideal(&v, Field::Rationals, &["0", "x - x"]);
    assert!(i.generators().is_empty());
    let b = gb(&i);
    assert!(b.is_empty());
    assert_eq!(b.dimension(), 1);
}
