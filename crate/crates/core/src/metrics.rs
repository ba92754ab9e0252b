//! Kendall tau and Hamming distances, Mahonian numbers, and the Singleton
//! and Hamming (sphere-packing) comparison bounds.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{check_dmin, Result};
use crate::permgroup::Permutation;

/// Kendall tau distance: inversions of g^-1 h.
pub fn kendall_distance(g: &Permutation, h: &Permutation) -> Result<usize> {
    Ok(g.inverse().compose(h)?.inversions())
}

/// Hamming distance: number of points moved by g^-1 h.
pub fn hamming_distance(g: &Permutation, h: &Permutation) -> Result<usize> {
    Ok(g.inverse().compose(h)?.moved_points())
}

/// counts[k] = number of permutations of n with exactly k inversions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahonianRow {
    pub n: usize,
    pub counts: Vec<BigUint>,
}

impl MahonianRow {
    pub fn max_inversions(&self) -> usize {
        self.counts.len() - 1
    }

    /// Size of a Kendall ball of the given radius.
    pub fn ball_size(&self, radius: usize) -> BigUint {
        self.counts.iter().take(radius + 1).sum()
    }
}

/// Coefficients of prod_{i=1}^{n} (1 + q + ... + q^{i-1}).
pub fn mahonian_row(n: usize) -> MahonianRow {
    let mut counts = vec![BigUint::one()];
    for i in 2..=n {
        let mut next = vec![BigUint::zero(); counts.len() + i - 1];
        // multiply by (1 + q + ... + q^{i-1}) using a sliding window sum
        let mut window = BigUint::zero();
        for (k, slot) in next.iter_mut().enumerate() {
            if k < counts.len() {
                window += &counts[k];
            }
            if k >= i && k - i < counts.len() {
                window -= &counts[k - i];
            }
            *slot = window.clone();
        }
        counts = next;
    }
    MahonianRow { n, counts }
}

/// floor(n! / |Kendall ball of radius floor((dmin - 1) / 2)|).
pub fn hamming_bound(n: usize, dmin: usize) -> Result<BigUint> {
    check_dmin(n, dmin)?;
    let row = mahonian_row(n);
    let ball = row.ball_size((dmin - 1) / 2);
    Ok(factorial(n) / ball)
}

/// m! for the least m >= 2 with m(m-1)/2 > n(n-1)/2 - dmin.
pub fn singleton_bound(n: usize, dmin: usize) -> Result<BigUint> {
    check_dmin(n, dmin)?;
    let slack = n * (n - 1) / 2 - dmin;
    let m = (2..=n).find(|&m| m * (m - 1) / 2 > slack).expect("m = n always qualifies since dmin >= 1");
    Ok(factorial(m))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::permgroup::{enumerate_group, longest_element};

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn kendall_examples() {
        let e = Permutation::identity(3);
        let g = cyc(3, &[&[1, 2, 3]]);
        assert_eq!(kendall_distance(&g, &g).unwrap(), 0);
        assert_eq!(kendall_distance(&e, &g).unwrap(), 2);
        assert_eq!(kendall_distance(&e, &cyc(3, &[&[1, 3]])).unwrap(), 3);
        assert!(kendall_distance(&e, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn hamming_examples() {
        let e = Permutation::identity(3);
        let g = cyc(3, &[&[1, 2, 3]]);
        assert_eq!(hamming_distance(&g, &g).unwrap(), 0);
        assert_eq!(hamming_distance(&e, &g).unwrap(), 3);
        assert_eq!(hamming_distance(&e, &cyc(3, &[&[1, 2]])).unwrap(), 2);
        // Hamming distance 1 is impossible
        let s4 = enumerate_group(4, &Limits::default()).unwrap();
        for g in &s4 {
            for h in &s4 {
                assert_ne!(hamming_distance(g, h).unwrap(), 1);
            }
        }
    }

    fn brute_census(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n * (n - 1) / 2 + 1];
        for g in enumerate_group(n, &Limits::default()).unwrap() {
            counts[g.inversions()] += 1;
        }
        counts
    }

    #[test]
    fn mahonian_matches_census() {
        assert_eq!(mahonian_row(3).counts, vec![big(1), big(2), big(2), big(1)]);
        for n in 1..=6 {
            let expected: Vec<BigUint> = brute_census(n).into_iter().map(big).collect();
            assert_eq!(mahonian_row(n).counts, expected, "n = {n}");
        }
        let row5 = mahonian_row(5);
        assert_eq!(&row5.counts[..3], &[big(1), big(4), big(9)]);
        assert_eq!(row5.ball_size(2), big(14));
    }

    #[test]
    fn mahonian_symmetry_and_total() {
        for n in 1..=12 {
            let row = mahonian_row(n);
            let top = row.max_inversions();
            assert_eq!(top, n * (n - 1) / 2);
            assert_eq!(row.counts.iter().sum::<BigUint>(), factorial(n));
            for k in 0..=top {
                assert_eq!(row.counts[k], row.counts[top - k]);
            }
            assert!(row.counts[0].is_one() && row.counts[top].is_one());
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(hamming_bound(5, 3).unwrap(), big(24));
        assert_eq!(hamming_bound(5, 5).unwrap(), big(8));
        assert_eq!(hamming_bound(7, 17).unwrap(), big(3));
        assert_eq!(singleton_bound(5, 8).unwrap(), big(6));
        assert_eq!(singleton_bound(7, 12).unwrap(), big(120));
        assert_eq!(singleton_bound(11, 19).unwrap(), big(3628800));
        for n in 3..=8 {
            assert_eq!(hamming_bound(n, 1).unwrap(), factorial(n));
            assert_eq!(hamming_bound(n, 2).unwrap(), factorial(n));
        }
        assert!(hamming_bound(4, 0).is_err());
        assert!(singleton_bound(4, 7).is_err());
    }

    #[test]
    fn right_invariance_exhaustive() {
        for n in 1..=5 {
            let w0 = longest_element(n);
            let group = enumerate_group(n, &Limits::default()).unwrap();
            for g in &group {
                for h in &group {
                    let gw = g.compose(&w0).unwrap();
                    let hw = h.compose(&w0).unwrap();
                    assert_eq!(kendall_distance(g, h).unwrap(), kendall_distance(&gw, &hw).unwrap());
                }
            }
        }
    }
}
