use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::VarSet;
use crate::groebner::DEFAULT_PRIME;
use crate::matforms::generic_det_polynomial;

fn cfg() -> GroebnerConfig {
    GroebnerConfig::default().with_verify(true)
}

fn cubic(field: Field) -> Polynomial {
    let v = VarSet::new(["x", "y", "z", "t"]).unwrap();
    Polynomial::parse("x*y^2 + y*t^2 + z^3", &v, field).unwrap()
}

fn fermat(field: Field) -> Polynomial {
    let v = VarSet::new(["x1", "x2", "x3", "x4", "x5"]).unwrap();
    Polynomial::parse("x1^3 + x2^3 + x3^3 + x4^3 + x5^3", &v, field).unwrap()
}

fn texts(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

#[test]
fn cubic_jacobian() {
    let f = cubic(Field::Rationals);
    let gens = jacobian_generators(&f);
    assert_eq!(
        texts(&gens),
        ["x*y^2 + z^3 + y*t^2", "y^2", "2*x*y + t^2", "3*z^2", "2*y*t"]
    );
    assert_eq!(jacobian_ideal(&f).unwrap().generators().len(), 5);
}

#[test]
fn fermat_jacobian() {
    let f = fermat(Field::Rationals);
    let gens = jacobian_generators(&f);
    assert_eq!(gens.len(), 6);
    for (i, g) in gens[1..].iter().enumerate() {
        assert_eq!(g.to_string(), format!("3*x{}^2", i + 1));
    }
}

/// ∂perm_3/∂x_ij is the permanent of the complementary 2x2 minor.
#[test]
fn perm3_partials_are_permanental_minors() {
    let field = Field::Prime(DEFAULT_PRIME);
    let f = perm_polynomial(3, field).unwrap();
    let v = f.vars().clone();
    for i in 1..=3 {
        for j in 1..=3 {
            let rows: Vec<usize> = (1..=3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (1..=3).filter(|&c| c != j).collect();
            let text = format!(
                "x{}{}*x{}{} + x{}{}*x{}{}",
                rows[0], cols[0], rows[1], cols[1], rows[0], cols[1], rows[1], cols[0]
            );
            let expected = Polynomial::parse(&text, &v, field).unwrap();
            let idx = v.index_of(&format!("x{i}{j}")).unwrap();
            assert_eq!(f.partial_derivative(idx).unwrap(), expected);
        }
    }
}

#[test]
fn codimensions() {
    let perm3 = perm_polynomial(3, Field::Prime(DEFAULT_PRIME)).unwrap();
    let r = codim_sing(&perm3, &cfg()).unwrap();
    assert_eq!(r.codim, Codim::Finite(6));
    assert!(r.value() <= 2 * 3);
    assert_eq!(
        codim_sing(&cubic(Field::Rationals), &cfg()).unwrap().codim,
        Codim::Finite(3)
    );
    assert_eq!(
        codim_sing(&fermat(Field::Rationals), &cfg()).unwrap().codim,
        Codim::Finite(5)
    );
    let det3 = generic_det_polynomial(3, Field::Prime(DEFAULT_PRIME)).unwrap();
    assert_eq!(codim_sing(&det3, &cfg()).unwrap().codim, Codim::Finite(4));
}

#[test]
fn empty_locus_sentinel() {
    let v = VarSet::new(["x", "y"]).unwrap();
    let f = Polynomial::parse("x + 1", &v, Field::Rationals).unwrap();
    let r = codim_sing(&f, &cfg()).unwrap();
    assert_eq!(r.codim, Codim::Empty);
    assert_eq!(r.value(), 3);
    assert_eq!(serde_json::to_value(r.codim).unwrap(), "empty");
    assert_eq!(serde_json::to_value(Codim::Finite(4)).unwrap(), 4);
}

#[test]
fn certificates() {
    let c = certify_permanent(3, Field::Prime(DEFAULT_PRIME), &cfg()).unwrap();
    assert_eq!(c.bound(), Some(7));
    assert_eq!(c.field, "Fp:32003");
    let c = certify_lower_bound(&fermat(Field::Rationals), &cfg()).unwrap();
    assert_eq!(c.bound(), Some(6));
    let c = certify_lower_bound(&cubic(Field::Rationals), &cfg()).unwrap();
    assert_eq!(c.codim, Codim::Finite(3));
    assert!(matches!(
        c.verdict,
        Verdict::NotApplicable {
            reason: Reason::CodimAtMostFour,
            ..
        }
    ));
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["verdict"], "not_applicable");
    assert_eq!(json["reason"], "codim_at_most_four");
    assert_eq!(json["codim"], 3);
    assert!(json["input_hash"].as_str().unwrap().starts_with("sha256:"));

    let v = VarSet::new(["x", "y", "z"]).unwrap();
    let q = Polynomial::parse("x^2 + y*z", &v, Field::Rationals).unwrap();
    let c = certify_lower_bound(&q, &cfg()).unwrap();
    assert!(matches!(
        c.verdict,
        Verdict::NotApplicable {
            reason: Reason::DegreeAtMostTwo,
            ..
        }
    ));
    let nh = Polynomial::parse("x^3 + y", &v, Field::Rationals).unwrap();
    let c = certify_lower_bound(&nh, &cfg()).unwrap();
    assert!(matches!(
        c.verdict,
        Verdict::NotApplicable {
            reason: Reason::NotHomogeneous,
            ..
        }
    ));
    assert!(matches!(
        certify_permanent(3, Field::Prime(2), &cfg()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn never_bounds_low_degree_or_small_codim() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = VarSet::new(["a", "b", "c", "d", "e", "g"]).unwrap();
    let field = Field::Prime(101);
    for _ in 0..30 {
        let deg = rng.random_range(1..=3u16);
        let terms: Vec<_> = (0..4)
            .map(|_| {
                let mut e = vec![0u16; 6];
                for _ in 0..deg {
                    e[rng.random_range(0..6)] += 1;
                }
                (
                    crate::algebra::Monomial::from_exponents(&e),
                    field.from_u64(rng.random_range(1..101)),
                )
            })
            .collect();
        let f = Polynomial::from_terms(&v, field, terms).unwrap();
        let c = certify_lower_bound(&f, &cfg()).unwrap();
        let applicable = c.homogeneous && c.degree.is_some_and(|d| d > 2) && c.codim.value(6) > 4;
        assert_eq!(c.bound().is_some(), applicable);
        if let Some(b) = c.bound() {
            assert_eq!(b, c.codim.value(6) + 1);
        }
    }
}

fn random_change(rng: &mut ChaCha8Rng, f: &Polynomial) -> Polynomial {
    let n = f.vars().len();
    let field = f.field();
    loop {
        let rows: Vec<Vec<FieldElement>> = (0..n)
            .map(|_| (0..n).map(|_| field.from_i64(rng.random_range(-2..=2))).collect())
            .collect();
        let a = Matrix::from_rows(field, rows.clone()).unwrap();
        if a.rank() < n {
            continue;
        }
        let images: Vec<Polynomial> = rows
            .iter()
            .map(|r| Polynomial::from_affine(f.vars(), field, r, &field.zero()))
            .collect();
        return f.compose(&images).unwrap();
    }
}

#[test]
fn codim_is_invariant_under_linear_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f = cubic(Field::Rationals);
    for _ in 0..20 {
        let g = random_change(&mut rng, &f);
        assert_eq!(codim_sing(&g, &cfg()).unwrap().codim, Codim::Finite(3), "{g}");
    }
    let p = perm_polynomial(3, Field::Prime(DEFAULT_PRIME)).unwrap();
    for _ in 0..3 {
        let g = random_change(&mut rng, &p);
        assert_eq!(codim_sing(&g, &cfg()).unwrap().codim, Codim::Finite(6));
    }
}

fn unit(arity: usize, i: usize, field: Field) -> Vec<FieldElement> {
    let mut v = vec![field.zero(); arity];
    v[i] = field.one();
    v
}

#[test]
fn isotropy_examples() {
    let q = Field::Rationals;
    // coordinates (w12, w13, w21, w31)
    let r = isotropic_dimension(q, 4, &[unit(4, 0, q), unit(4, 1, q)]).unwrap();
    assert!(r.is_isotropic);
    assert_eq!((r.dim, r.bound, r.exceeds_bound), (2, 2, false));
    let r = isotropic_dimension(q, 4, &[unit(4, 0, q), unit(4, 2, q)]).unwrap();
    assert!(!r.is_isotropic);
    assert_eq!(r.witness.unwrap(), ["1", "0", "1", "0"]);
    assert!(isotropic_dimension(q, 4, &[vec![q.one(); 3]]).is_err());
    assert!(isotropic_dimension(q, 3, &[]).is_err());
}

fn q_direct(w: &[u64], p: u64) -> u64 {
    (w[0] * w[2] + w[1] * w[3]) % p
}

fn all_vectors(p: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Every 3-dimensional subspace of F_3^4 is the kernel of a non-zero
/// functional; none lies on the quadric.
#[test]
fn no_isotropic_three_space_over_f3() {
    let p = 3u64;
    let field = Field::Prime(p);
    let vectors = all_vectors(p);
    let mut subspaces = 0;
    for normal in vectors.iter().filter(|n| n.iter().any(|&c| c != 0)) {
        // one representative per line: first non-zero coordinate is 1
        if *normal.iter().find(|&&c| c != 0).unwrap() != 1 {
            continue;
        }
        subspaces += 1;
        let members: Vec<&[u64; 4]> = vectors
            .iter()
            .filter(|v| v.iter().zip(normal).map(|(a, b)| a * b).sum::<u64>() % p == 0)
            .collect();
        assert_eq!(members.len(), 27);
        let brute_isotropic = members.iter().all(|v| q_direct(&v[..], p) == 0);
        assert!(!brute_isotropic);
        let spanning: Vec<Vec<FieldElement>> = members
            .iter()
            .map(|v| v.iter().map(|&c| field.from_u64(c)).collect())
            .collect();
        let r = isotropic_dimension(field, 4, &spanning).unwrap();
        assert_eq!(r.dim, 3);
        assert!(!r.is_isotropic);
        assert!(r.exceeds_bound);
    }
    assert_eq!(subspaces, 40);
}

#[test]
fn isotropy_matches_brute_force_over_f3() {
    let p = 3u64;
    let field = Field::Prime(p);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let vectors = all_vectors(p);
    for _ in 0..300 {
        let k = rng.random_range(1..=3);
        let gens: Vec<[u64; 4]> = (0..k).map(|_| vectors[rng.random_range(0..81)]).collect();
        let mut span = vec![[0u64; 4]];
        for g in &gens {
            let mut next = Vec::new();
            for s in &span {
                for c in 0..p {
                    let mut w = *s;
                    for i in 0..4 {
                        w[i] = (w[i] + c * g[i]) % p;
                    }
                    next.push(w);
                }
            }
            next.sort();
            next.dedup();
            span = next;
        }
        let brute = span.iter().all(|v| q_direct(&v[..], p) == 0);
        let dim = (span.len() as f64).log(3.0).round() as usize;
        let input: Vec<Vec<FieldElement>> = gens
            .iter()
            .map(|v| v.iter().map(|&c| field.from_u64(c)).collect())
            .collect();
        let r = isotropic_dimension(field, 4, &input).unwrap();
        assert_eq!(r.is_isotropic, brute, "{gens:?}");
        assert_eq!(r.dim, dim);
    }
}

#[test]
fn isotropy_in_characteristic_two() {
    let field = Field::Prime(2);
    // w12 + w21 direction: Q = 1 although Q0(v, v) = 2Q(v) = 0
    let v = vec![field.one(), field.zero(), field.one(), field.zero()];
    let r = isotropic_dimension(field, 4, &[v]).unwrap();
    assert!(!r.is_isotropic);
}

#[test]
fn zero_columns_give_rank_witness() {
    let v = VarSet::new(["x", "y"]).unwrap();
    let map = AffineMatrixMap::parse(
        &v,
        Field::Prime(101),
        &[vec!["x", "0", "0"], vec!["y", "0", "0"], vec!["1", "0", "0"]],
    )
    .unwrap();
    let f = Polynomial::zero(&v, Field::Prime(101));
    let mode = AvoidMode::Probabilistic {
        trials: 10,
        seed: 1,
        modulus: None,
    };
    let r = check_avoids_singular_locus(&map, &f, mode, &cfg()).unwrap();
    assert_eq!(r.verdict, AvoidVerdict::Witness);
    assert!(r.witness.unwrap().rank <= 1);
    let r = check_avoids_singular_locus(&map, &f, AvoidMode::Exact, &cfg()).unwrap();
    assert_eq!(r.verdict, AvoidVerdict::Meets);
}

#[test]
fn quadric_meets_at_origin() {
    let v = VarSet::new(["x", "y", "z"]).unwrap();
    let map = AffineMatrixMap::parse(&v, Field::Rationals, &[vec!["x", "y"], vec!["-z", "x"]]).unwrap();
    let f = Polynomial::parse("x^2 + y*z", &v, Field::Rationals).unwrap();
    let r = check_avoids_singular_locus(&map, &f, AvoidMode::Exact, &cfg()).unwrap();
    assert_eq!(r.rank_at_origin, 0);
    assert!(!r.rank_condition_holds);
    assert_eq!(r.verdict, AvoidVerdict::Meets);
    assert_eq!(r.precondition_holds, Some(false));
}

#[test]
fn wrong_target_is_rejected() {
    let v = VarSet::new(["x"]).unwrap();
    let map = AffineMatrixMap::parse(&v, Field::Rationals, &[vec!["x"]]).unwrap();
    let f = Polynomial::parse("2*x", &v, Field::Rationals).unwrap();
    assert!(matches!(
        check_avoids_singular_locus(&map, &f, AvoidMode::Exact, &cfg()),
        Err(Error::Precondition(_))
    ));
}

/// A probabilistic witness is a genuine point, so exact mode must agree.
#[test]
fn exact_and_sampled_modes_agree() {
    let p = 7u64;
    let field = Field::Prime(p);
    let v = VarSet::new(["a", "b"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut witnessed = 0;
    for _ in 0..25 {
        let rows: Vec<Vec<Polynomial>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let lin: Vec<FieldElement> = (0..2).map(|_| field.from_u64(rng.random_range(0..p))).collect();
                        let c0 = field.from_u64(if rng.random_bool(0.5) {
                            rng.random_range(0..p)
                        } else {
                            0
                        });
                        Polynomial::from_affine(&v, field, &lin, &c0)
                    })
                    .collect()
            })
            .collect();
        let map = AffineMatrixMap::new(&v, field, rows).unwrap();
        let f = map.det();
        let exact = check_avoids_singular_locus(&map, &f, AvoidMode::Exact, &cfg()).unwrap();
        let mode = AvoidMode::Probabilistic {
            trials: 200,
            seed: 3,
            modulus: None,
        };
        let sampled = check_avoids_singular_locus(&map, &f, mode, &cfg()).unwrap();
        if sampled.verdict == AvoidVerdict::Witness {
            witnessed += 1;
            assert_eq!(exact.verdict, AvoidVerdict::Meets);
        }
        if exact.verdict == AvoidVerdict::Avoids {
            assert_eq!(sampled.verdict, AvoidVerdict::NoWitness);
        }
    }
    assert!(witnessed > 0);
}

#[test]
fn diagonal_cube_takes_the_graded_branch() {
    let v = VarSet::new(["x"]).unwrap();
    let map = AffineMatrixMap::parse(
        &v,
        Field::Rationals,
        &[vec!["x", "0", "0"], vec!["0", "x", "0"], vec!["0", "0", "x"]],
    )
    .unwrap();
    let f = Polynomial::parse("x^3", &v, Field::Rationals).unwrap();
    let r = analyze_expression(&map, &f).unwrap();
    assert_eq!(r.rank, 0);
    assert!(r.top_rank.is_none());
    let g = r.graded.unwrap();
    assert_eq!(g.parts.len(), 1);
    assert_eq!(g.parts[0].degree, 3);
    assert!(g.consistent && g.lowest_part_is_block_det);
}

#[test]
fn analysis_preconditions() {
    let v = VarSet::new(["x", "y", "z"]).unwrap();
    let map = AffineMatrixMap::parse(&v, Field::Rationals, &[vec!["x", "y"], vec!["-z", "x"]]).unwrap();
    let f = Polynomial::parse("x^2 + y*z", &v, Field::Rationals).unwrap();
    assert!(matches!(analyze_expression(&map, &f), Err(Error::Precondition(_))));
}
