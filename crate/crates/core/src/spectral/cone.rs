//! Spectral radius of a matrix preserving a polyhedral cone.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::lp;
use crate::rational::{qf, to_f64};
use crate::upoly::UPoly;
use crate::Q;

const MAX_ITERATIONS: usize = 200_000;
const TOLERANCE: f64 = 1e-13;
/// Largest size for which the exact characteristic polynomial is used as a
/// cross-check.
pub const EXACT_CHECK_MAX: usize = 6;
/// Largest size for which a non-converged iteration (e.g. a dominant Jordan
/// block) falls back to exact root isolation.
const EXACT_FALLBACK_MAX: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeRadius {
    pub rho: f64,
    /// Perron vector, scaled to unit max-norm.
    pub eigvec: Vec<f64>,
    /// A posteriori bound: last change of the Rayleigh quotient plus the
    /// eigen-residual, or half the exact bracket width.
    pub error: f64,
    pub iterations: usize,
    /// Interval from exact root isolation, when computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_bracket: Option<[f64; 2]>,
}

/// Spectral radius of `m` on the cone spanned by `cone`. The cone must be
/// mapped into itself; this is verified exactly on the generators.
pub fn rho_cone(m: &QMatrix, cone: &[Vec<Q>]) -> Result<ConeRadius> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    if cone.is_empty() || cone.iter().any(|g| g.len() != n) {
        return Err(Error::Precondition(format!(
            "cone generators must be nonempty vectors of length {n}"
        )));
    }
    for g in cone {
        if !lp::cone_contains(cone, &m.mul_vec(g)) {
            return Err(Error::Precondition(
                "matrix does not map the cone into itself".into(),
            ));
        }
    }
    let full = QMatrix::from_columns(cone, n).rank() == n;
    let start = cone_interior(cone);
    power_radius(m, &start, full)
}

/// Sum of the generators as floats.
pub(crate) fn cone_interior(cone: &[Vec<Q>]) -> Vec<f64> {
    let n = cone[0].len();
    let mut s = vec![0.0; n];
    for g in cone {
        for (a, b) in s.iter_mut().zip(g) {
            *a += to_f64(b);
        }
    }
    s
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Shifted power iteration from `start` (assumed inside an invariant cone). With
/// `exact_ok` (the cone is full-dimensional, so the radius is the largest
/// real eigenvalue) the largest real root of the characteristic polynomial
/// brackets the result for small matrices.
pub(crate) fn power_radius(m: &QMatrix, start: &[f64], exact_ok: bool) -> Result<ConeRadius> {
    let n = m.rows();
    let mf = m.to_f64_rows();
    let s = max_norm(start);
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Precondition("start vector is zero".into()));
    }
    let mut x: Vec<f64> = start.iter().map(|v| v / s).collect();
    let mut prev = f64::NAN;
    let mut rho = 0.0;
    let mut error = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let y: Vec<f64> = mf
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        if max_norm(&y) == 0.0 {
            rho = 0.0;
            error = 0.0;
            converged = true;
            break;
        }
        let xx: f64 = x.iter().map(|v| v * v).sum();
        rho = y.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / xx;
        let residual = max_norm(
            &y.iter()
                .zip(&x)
                .map(|(a, b)| a - rho * b)
                .collect::<Vec<_>>(),
        );
        error = (rho - prev).abs() + residual;
        // iterate with M + I: the other peripheral eigenvalues ρe^{iθ} stop
        // competing with ρ
        let z: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a + b).collect();
        let nz = max_norm(&z);
        x = z.iter().map(|v| v / nz).collect();
        if error <= TOLERANCE * rho.max(1.0) {
            converged = true;
            break;
        }
        prev = rho;
    }
    let mut out = ConeRadius {
        rho,
        eigvec: x,
        error,
        iterations,
        exact_bracket: None,
    };
    if exact_ok && (n <= EXACT_CHECK_MAX || (!converged && n <= EXACT_FALLBACK_MAX)) {
        let poly = UPoly::new(m.charpoly());
        if let Some((lo, hi)) = poly.largest_real_root(&qf(1, 1 << 50)) {
            let (lo, hi) = (to_f64(&lo), to_f64(&hi));
            let mid = (lo + hi) / 2.0;
            let slack = if converged {
                out.error
            } else {
                1e-3 * mid.abs().max(1.0)
            };
            if (out.rho - mid).abs() > slack + (hi - lo) + 1e-9 * mid.abs().max(1.0) {
                return Err(Error::NumericalFailure(format!(
                    "power iteration gives {} but the exact largest root is {mid}",
                    out.rho
                )));
            }
            out.exact_bracket = Some([lo, hi]);
            if !converged {
                out.rho = mid;
                out.error = (hi - lo) / 2.0;
                out.eigvec = inverse_iteration(&mf, mid, &out.eigvec);
                converged = true;
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "power iteration did not converge in {MAX_ITERATIONS} steps (error {error:e})"
        )));
    }
    if out.eigvec.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvector".into()));
    }
    Ok(out)
}

/// Refines an approximate eigenvector for `rho` by a few steps of shifted
/// inverse iteration (Gaussian elimination with partial pivoting).
fn inverse_iteration(m: &[Vec<f64>], rho: f64, x0: &[f64]) -> Vec<f64> {
    let n = x0.len();
    let shift = rho + 1e-9 * rho.abs().max(1.0);
    let mut x = x0.to_vec();
    for _ in 0..3 {
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row: Vec<f64> = (0..n)
                    .map(|j| m[i][j] - if i == j { shift } else { 0.0 })
                    .collect();
                row.push(x[i]);
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .expect("nonempty");
            a.swap(col, p);
            if a[col][col] == 0.0 {
                return x;
            }
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        let mut y = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| a[r][c] * y[c]).sum();
            y[r] = (a[r][n] - s) / a[r][r];
        }
        let ny = max_norm(&y);
        if ny == 0.0 || !ny.is_finite() {
            return x;
        }
        // keep the orientation of the cone vector
        let sign = if y.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
            -1.0
        } else {
            1.0
        };
        x = y.iter().map(|v| sign * v / ny).collect();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn quadrant() -> Vec<Vec<Q>> {
        vec![vec![q(1), q(0)], vec![q(0), q(1)]]
    }

    #[test]
    fn one_by_one() {
        let r = rho_cone(&QMatrix::from_i64(&[vec![3]]), &[vec![q(1)]]).unwrap();
        assert!((r.rho - 3.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_eigenvalues() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let r = rho_cone(&m, &quadrant()).unwrap();
        let exact = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((r.rho - exact).abs() < 1e-10);
        assert!(r.error < 1e-10);
        assert!(r.exact_bracket.is_some());
        let m = QMatrix::from_i64(&[vec![0, 1], vec![1, 1]]);
        let r = rho_cone(&m, &quadrant()).unwrap();
        assert!((r.rho - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn jordan_block_uses_exact_root() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![0, 2]]);
        let r = rho_cone(&m, &quadrant()).unwrap();
        assert!((r.rho - 2.0).abs() < 1e-9);
    }

    #[test]
    fn opposite_peripheral_eigenvalue() {
        let m = QMatrix::from_i64(&[vec![0, 1], vec![2, 0]]);
        let r = rho_cone(&m, &quadrant()).unwrap();
        assert!((r.rho - 2f64.sqrt()).abs() < 1e-10);
        let v = &r.eigvec;
        assert!((v[1] / v[0] - 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn non_invariant_cone_is_rejected() {
        let m = QMatrix::from_i64(&[vec![0, -1], vec![1, 0]]);
        assert!(matches!(
            rho_cone(&m, &quadrant()),
            Err(Error::Precondition(_))
        ));
    }
}
