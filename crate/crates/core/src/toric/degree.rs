//! Degree sequences of monomial maps computed on resolving toric models.

use num_traits::ToPrimitive;

use super::fan::Fan;
use super::maps::pullback_divisor;
use super::{refine_for_matrix, MonomialMatrix};
use crate::error::{Error, Result};
use crate::rational::q;
use crate::Q;

pub const DEFAULT_RAY_CAP: usize = 200_000;

/// `(F*H · H)` for the monomial map of `b`, computed on a model of the plane
/// where the map is holomorphic.
pub fn toric_degree(b: &MonomialMatrix, ray_cap: usize) -> Result<u64> {
    let p2 = Fan::p2();
    let src = refine_for_matrix(b, &p2, &p2)?;
    if src.len() > ray_cap {
        return Err(Error::Capacity {
            what: format!("resolving fan has {} rays (cap {ray_cap})", src.len()),
            partial: Vec::new(),
        });
    }
    let h = vec![q(0), q(0), q(1)];
    let pulled = pullback_divisor(b, &src, &p2, &h)?;
    let line: Vec<Q> = src
        .rays()
        .iter()
        .map(|r| q(0.max(-r[0]).max(-r[1])))
        .collect();
    let d = src.pair_divisors(&pulled, &line);
    debug_assert!(d.is_integer());
    d.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Invariant(format!("degree {d} is not a positive integer")))
}

pub fn toric_degree_sequence(a: &MonomialMatrix, n_max: usize) -> Result<Vec<u64>> {
    toric_degree_sequence_capped(a, n_max, DEFAULT_RAY_CAP)
}

/// `deg(Fⁿ)` for `n = 1..=n_max`. On a capacity failure the completed terms
/// are returned inside the error.
pub fn toric_degree_sequence_capped(
    a: &MonomialMatrix,
    n_max: usize,
    ray_cap: usize,
) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(n_max);
    let mut power = MonomialMatrix::identity();
    for _ in 0..n_max {
        let step = power
            .compose(a)
            .and_then(|p| toric_degree(&p, ray_cap).map(|d| (p, d)));
        match step {
            Ok((p, d)) => {
                power = p;
                out.push(d);
            }
            Err(Error::Capacity { what, .. }) => {
                return Err(Error::Capacity { what, partial: out })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(e: [i64; 4]) -> MonomialMatrix {
        MonomialMatrix::from_entries(e).unwrap()
    }

    #[test]
    fn identity_has_degree_one() {
        assert_eq!(
            toric_degree_sequence(&MonomialMatrix::identity(), 4).unwrap(),
            vec![1, 1, 1, 1]
        );
    }

    #[test]
    fn fibonacci_degrees() {
        assert_eq!(
            toric_degree_sequence(&mm([2, 1, 1, 1]), 6).unwrap(),
            vec![3, 8, 21, 55, 144, 377]
        );
    }

    #[test]
    fn degenerate_family() {
        assert_eq!(
            toric_degree_sequence(&mm([2, 0, 2, 2]), 4).unwrap(),
            vec![4, 12, 32, 80]
        );
    }

    #[test]
    fn agrees_with_exponent_formula() {
        for e in [[1, -2, 3, 1], [-3, 1, 2, 2], [0, 1, -1, 3], [2, -3, -1, 2]] {
            let a = mm(e);
            for n in 1..=4 {
                let p = a.pow(n).unwrap();
                assert_eq!(
                    toric_degree(&p, DEFAULT_RAY_CAP).unwrap(),
                    p.homogenized_degree()
                );
            }
        }
    }

    #[test]
    fn capacity_returns_partial() {
        match toric_degree_sequence_capped(&mm([1, 3, 0, 1]), 8, 16) {
            Err(Error::Capacity { partial, .. }) => assert!(!partial.is_empty()),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
