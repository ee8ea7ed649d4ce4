//! Exact linear recurrences with constant coefficients.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg::QMatrix;
use crate::rational::serde_qvec;
use crate::upoly::UPoly;
use crate::Q;

pub const DEFAULT_MAX_ORDER: usize = 6;

/// `d_{n+1} = c_1 d_n + c_2 d_{n−1} + … + c_k d_{n−k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    #[serde(with = "serde_qvec")]
    pub coeffs: Vec<Q>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Next term after `terms` (which must have at least `order` entries).
    pub fn predict_next(&self, terms: &[Q]) -> Q {
        let k = self.order();
        assert!(terms.len() >= k, "not enough terms for the recurrence");
        self.coeffs
            .iter()
            .zip(terms.iter().rev())
            .take(k)
            .fold(Q::zero(), |acc, (c, d)| acc + c * d)
    }

    /// Whether every term from index `order` on is reproduced.
    pub fn reproduces(&self, terms: &[Q]) -> bool {
        (self.order()..terms.len()).all(|n| self.predict_next(&terms[..n]) == terms[n])
    }

    /// `t^k − c_1 t^{k−1} − … − c_k`.
    pub fn char_poly(&self) -> UPoly {
        let k = self.order();
        let mut c = vec![Q::zero(); k + 1];
        c[k] = Q::one();
        for (i, ci) in self.coeffs.iter().enumerate() {
            c[k - 1 - i] = -ci.clone();
        }
        UPoly::new(c)
    }
}

pub fn detect_recurrence(degs: &[u64]) -> Option<Recurrence> {
    detect_recurrence_with(degs, DEFAULT_MAX_ORDER)
}

/// Minimal-order recurrence fitted on all terms but the last, then checked
/// on the last. Orders whose coefficients are not determined by the fitted
/// terms are skipped. Orders above `(len − 2) / 2` are not tried.
pub fn detect_recurrence_with(degs: &[u64], max_order: usize) -> Option<Recurrence> {
    let d: Vec<Q> = degs.iter().map(|&x| Q::from_integer(x.into())).collect();
    if d.len() < 4 {
        return None;
    }
    let top = max_order.min((d.len() - 2) / 2);
    for k in 1..=top {
        let fit = &d[..d.len() - 1];
        let rows: Vec<Vec<Q>> = (k..fit.len())
            .map(|n| (1..=k).map(|i| fit[n - i].clone()).collect())
            .collect();
        let rhs: Vec<Q> = (k..fit.len()).map(|n| fit[n].clone()).collect();
        let m = QMatrix::from_rows(rows);
        if m.rank() < k {
            continue;
        }
        let Some(coeffs) = m.solve(&rhs) else {
            continue;
        };
        let rec = Recurrence { coeffs };
        if rec.reproduces(&d) {
            return Some(rec);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn examples() {
        let r = detect_recurrence(&[1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(r.coeffs, qs(&[1]));
        let r = detect_recurrence(&[3, 8, 21, 55, 144, 377]).unwrap();
        assert_eq!(r.coeffs, qs(&[3, -1]));
        assert_eq!(r.predict_next(&qs(&[3, 8, 21, 55, 144, 377])), q(987));
        let r = detect_recurrence(&[2, 1, 2, 1, 2, 1]).unwrap();
        assert_eq!(r.coeffs, qs(&[0, 1]));
    }

    #[test]
    fn short_or_irregular_sequences() {
        assert!(detect_recurrence(&[1, 2, 3]).is_none());
        assert!(detect_recurrence(&[1, 2, 4, 8, 16, 33]).is_none());
        let r = detect_recurrence(&[2, 4, 8, 16, 32, 64]).unwrap();
        assert_eq!(r.coeffs, qs(&[2]));
    }
}
