//! Dense univariate polynomials over the rationals: Euclid, square-free parts,
//! resultants, interpolation, and Sturm-sequence root isolation.

use num_traits::{One, Signed, Zero};

use crate::rational::{q, Q};

/// Coefficients in ascending degree, no trailing zeros (zero = empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Q>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        UPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::rational::to_f64(c))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Q) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Q::zero)
                        + other.0.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&q(-1)))
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Euclidean division. Panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().recip();
        let mut r = self.0.clone();
        let mut quo = vec![Q::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() * &inv;
            if !f.is_zero() {
                for (i, c) in d.0.iter().enumerate() {
                    r[k + i] -= c * &f;
                }
            }
            quo[k] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) && r.len() > dd {
                r.pop();
            }
        }
        (UPoly::new(quo), UPoly::new(r))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn squarefree(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Resultant `Res(self, other)` by the Euclidean recursion.
    pub fn resultant(&self, other: &UPoly) -> Q {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Q::zero();
        };
        if n == 0 {
            return pow(&other.lc(), m);
        }
        if m == 0 {
            return pow(&self.lc(), n);
        }
        let (_, r) = self.divrem(other);
        let Some(k) = r.degree() else {
            return Q::zero();
        };
        let sign = if (m * n) % 2 == 1 { q(-1) } else { q(1) };
        sign * pow(&other.lc(), m - k) * other.resultant(&r)
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct abscissae.
    pub fn interpolate(points: &[(Q, Q)]) -> UPoly {
        // Newton divided differences
        let n = points.len();
        let mut coef: Vec<Q> = points.iter().map(|p| p.1.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&points[i].0 - &points[i - j].0);
            }
        }
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = acc
                .mul(&UPoly::new(vec![-points[i].0.clone(), Q::one()]))
                .add(&UPoly::constant(coef[i].clone()));
        }
        acc
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let p = self.squarefree();
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            chain.push(r.scale(&q(-1)));
        }
        chain.pop();
        chain
    }

    fn sign_changes(chain: &[UPoly], x: &Q) -> usize {
        let mut last: Option<bool> = None;
        let mut changes = 0;
        for p in chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let s = v.is_positive();
            if last.is_some_and(|l| l != s) {
                changes += 1;
            }
            last = Some(s);
        }
        changes
    }

    /// Bound on the absolute value of every complex root (Cauchy).
    pub fn root_bound(&self) -> Q {
        let lc = self.lc();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| (c / &lc).abs())
            .fold(Q::zero(), |a, b| if b > a { b } else { a });
        m + Q::one()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_real_roots(&self, a: &Q, b: &Q) -> usize {
        let chain = self.sturm_chain();
        Self::sign_changes(&chain, a).saturating_sub(Self::sign_changes(&chain, b))
    }

    /// Interval `(lo, hi]` of width at most `tol` containing the largest real
    /// root, or `None` when there are no real roots.
    pub fn largest_real_root(&self, tol: &Q) -> Option<(Q, Q)> {
        self.degree().filter(|&d| d > 0)?;
        let chain = self.sturm_chain();
        let bound = self.root_bound();
        let mut lo = -bound.clone();
        let mut hi = bound;
        if Self::sign_changes(&chain, &lo) == Self::sign_changes(&chain, &hi) {
            return None;
        }
        let two = q(2);
        while &hi - &lo > *tol {
            let mid = (&lo + &hi) / &two;
            if Self::sign_changes(&chain, &mid) > Self::sign_changes(&chain, &hi) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo, hi))
    }
}

fn pow(x: &Q, e: usize) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, to_f64};

    fn p(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(f.squarefree(), p(&[-2, 1, 1]));
        let g = p(&[-1, 1]).mul(&p(&[5, 1]));
        assert_eq!(f.gcd(&g), p(&[-1, 1]));
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 3) = 3^2 - 2 = 7 (monic b of degree 1)
        let a = p(&[-2, 0, 1]);
        let b = p(&[-3, 1]);
        assert_eq!(a.resultant(&b), q(7));
        // common root gives zero
        assert_eq!(a.resultant(&p(&[-2, 0, 1]).mul(&p(&[1, 1]))), q(0));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, 0, -2, 1]);
        let pts: Vec<(Q, Q)> = (0..4).map(|i| (q(i), f.eval(&q(i)))).collect();
        assert_eq!(UPoly::interpolate(&pts), f);
    }

    #[test]
    fn largest_root_of_golden_square() {
        // t^2 - 3t + 1, largest root (3+sqrt5)/2
        let f = p(&[1, -3, 1]);
        let (lo, hi) = f.largest_real_root(&qf(1, 1 << 40)).unwrap();
        let exact = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(to_f64(&lo) <= exact + 1e-12 && exact <= to_f64(&hi) + 1e-12);
        assert_eq!(f.count_real_roots(&q(-10), &q(10)), 2);
        assert!(p(&[1, 0, 1]).largest_real_root(&qf(1, 100)).is_none());
    }
}
