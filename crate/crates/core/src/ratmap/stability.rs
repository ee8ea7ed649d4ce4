//! Algebraic stability and submultiplicativity of a degree sequence.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub degrees: Vec<u64>,
    /// First `n` with `deg fⁿ ≠ (deg f)ⁿ`.
    pub first_unstable: Option<usize>,
    /// Largest `n` such that `deg f^k = (deg f)^k` for all `k ≤ n`.
    pub stable_through: usize,
    /// `deg f^{n+m} ≤ 2 deg fⁿ deg f^m` for every available split.
    pub submultiplicative: bool,
    /// The sharper bound without the factor 2.
    pub submultiplicative_sharp: bool,
    /// Splits `(n, m)` violating the factor-2 bound.
    pub violations: Vec<[usize; 2]>,
}

/// `degs[k]` is `deg f^{k+1}`.
pub fn stability_report(degs: &[u64]) -> Result<StabilityReport> {
    if degs.is_empty() {
        return Err(Error::InsufficientData("empty degree sequence".into()));
    }
    let d1 = degs[0] as u128;
    let mut first_unstable = None;
    let mut power: Option<u128> = Some(1);
    for (k, &d) in degs.iter().enumerate() {
        power = power.and_then(|p| p.checked_mul(d1));
        if power != Some(d as u128) {
            first_unstable = Some(k + 1);
            break;
        }
    }
    let deg = |n: usize| degs[n - 1] as u128;
    let mut sharp = true;
    let mut violations = Vec::new();
    for n in 1..=degs.len() {
        for m in n..=degs.len() - n {
            let prod = deg(n) * deg(m);
            if deg(n + m) > prod {
                sharp = false;
            }
            if deg(n + m) > 2 * prod {
                violations.push([n, m]);
            }
        }
    }
    Ok(StabilityReport {
        degrees: degs.to_vec(),
        first_unstable,
        stable_through: first_unstable.map_or(degs.len(), |n| n - 1),
        submultiplicative: violations.is_empty(),
        submultiplicative_sharp: sharp,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = stability_report(&[2, 4, 8, 16]).unwrap();
        assert_eq!(r.first_unstable, None);
        assert_eq!(r.stable_through, 4);
        let r = stability_report(&[2, 1, 2, 1]).unwrap();
        assert_eq!(r.first_unstable, Some(2));
        assert!(r.submultiplicative_sharp);
        let r = stability_report(&[3, 8, 21]).unwrap();
        assert_eq!(r.first_unstable, Some(2));
        assert!(r.submultiplicative && r.submultiplicative_sharp);
    }

    #[test]
    fn violations_are_listed() {
        let r = stability_report(&[2, 9, 100]).unwrap();
        assert!(!r.submultiplicative_sharp);
        assert_eq!(r.violations, vec![[1, 1], [1, 2]]);
        assert!(stability_report(&[]).is_err());
    }
}
