//! Affine dimension from the leading-monomial ideal.
//!
//! `dim V(I)` is the largest size of a variable subset `S` such that no
//! leading monomial is supported inside `S`. Equivalently `n` minus the
//! smallest set of variables meeting every leading-monomial support.

use crate::algebra::Monomial;

fn support_mask(m: &Monomial) -> u128 {
    m.support().fold(0u128, |acc, i| acc | (1u128 << i))
}

/// Dimension for a basis with the given leading monomials over `n`
/// variables. Returns -1 when some leading monomial is 1.
pub fn dimension_from_leading_monomials(n: usize, lms: &[Monomial]) -> i64 {
    assert!(n <= 128, "dimension search supports at most 128 variables");
    let mut sets: Vec<u128> = lms.iter().map(support_mask).collect();
    if sets.contains(&0) {
        return -1;
    }
    sets.sort_by_key(|s| (s.count_ones(), *s));
    sets.dedup();
    let mut minimal: Vec<u128> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|&t| t & !s == 0) {
            minimal.push(s);
        }
    }
    n as i64 - min_hitting_set(&minimal) as i64
}

/// Size of a smallest transversal of `sets` (all non-empty).
pub(crate) fn min_hitting_set(sets: &[u128]) -> u32 {
    let mut best = sets.iter().fold(0u128, |a, &s| a | s).count_ones();
    search(sets, 0, 0, 0, &mut best);
    best
}

fn disjoint_lower_bound(sets: &[u128], chosen: u128, forbidden: u128) -> u32 {
    let mut used = 0u128;
    let mut count = 0;
    for &s in sets {
        if s & chosen == 0 {
            let avail = s & !forbidden;
            if avail & used == 0 {
                used |= avail;
                count += 1;
            }
        }
    }
    count
}

fn search(sets: &[u128], chosen: u128, forbidden: u128, size: u32, best: &mut u32) {
    let mut pick: Option<u128> = None;
    for &s in sets {
        if s & chosen != 0 {
            continue;
        }
        let avail = s & !forbidden;
        if avail == 0 {
            return;
        }
        if pick.is_none_or(|p| avail.count_ones() < p.count_ones()) {
            pick = Some(avail);
        }
    }
    let Some(mut avail) = pick else {
        *best = (*best).min(size);
        return;
    };
    if size + disjoint_lower_bound(sets, chosen, forbidden) >= *best {
        return;
    }
    let mut forbidden = forbidden;
    while avail != 0 {
        let bit = avail & avail.wrapping_neg();
        avail &= !bit;
        search(sets, chosen | bit, forbidden, size + 1, best);
        forbidden |= bit;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, sets: &[u128]) -> u32 {
        (0u128..(1 << n))
            .filter(|t| sets.iter().all(|s| s & t != 0))
            .map(|t| t.count_ones())
            .min()
            .unwrap()
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.random_range(1..=9);
            let k = rng.random_range(1..=8);
            let sets: Vec<u128> = (0..k)
                .map(|_| loop {
                    let s = rng.random_range(1u128..(1 << n));
                    if s.count_ones() <= 3 {
                        break s;
                    }
                })
                .collect();
            assert_eq!(min_hitting_set(&sets), brute(n, &sets), "{sets:?}");
        }
    }

    #[test]
    fn coordinate_cases() {
        let m = |e: &[u16]| Monomial::from_exponents(e);
        assert_eq!(dimension_from_leading_monomials(3, &[]), 3);
        assert_eq!(dimension_from_leading_monomials(3, &[m(&[0, 0, 0])]), -1);
        assert_eq!(
            dimension_from_leading_monomials(4, &[m(&[2, 0, 0, 0]), m(&[0, 1, 0, 0])]),
            2
        );
        assert_eq!(dimension_from_leading_monomials(3, &[m(&[1, 1, 0]), m(&[0, 1, 1])]), 2);
    }
}
