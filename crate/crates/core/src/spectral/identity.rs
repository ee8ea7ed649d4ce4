//! Checks of the functorial identities on every level of a tower.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fit::hypothesis_holds;
use super::tower::{eigenclass_residual, SpectralData, Tower};
use crate::error::Result;
use crate::linalg::QMatrix;
use crate::rational::q;
use crate::toric::NEF_GENERATOR_RAY_CAP;
use crate::Q;

pub const RANDOM_PAIRS: usize = 50;
pub const EIGEN_TOL: f64 = 1e-6;
pub const LEVEL_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub exact: bool,
    pub passed: bool,
    pub samples: usize,
    /// Largest deviation, for the approximate checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityLedger {
    pub seed: u64,
    pub all_passed: bool,
    pub checks: Vec<IdentityCheck>,
}

fn random_class(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-5..=5))).collect()
}

fn exact(name: &str, level: usize, samples: usize, passed: bool) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        level: Some(level),
        exact: true,
        passed,
        samples,
        deviation: None,
    }
}

fn approx(name: &str, level: usize, deviation: f64, tol: f64) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        level: Some(level),
        exact: false,
        passed: deviation < tol,
        samples: 1,
        deviation: Some(deviation),
    }
}

/// Exact identities on each level `X_{k+1} → X_k`:
///
/// * `adjointness`: `(F_*α · β) = (α · F^*β)` on random pairs and as the
///   matrix identity `F_*ᵀ G_k = G_{k+1} F^*`;
/// * `lambda2_scaling`: `((F^*β)²) = λ₂ (β²)` on the basis and random
///   classes;
/// * `cartier_norm_scaling`: the same on a basis of `H^⊥`;
/// * `nef_pullback`: pullbacks of the nef generators are nef.
///
/// At the deepest level the Perron vector must satisfy
/// `|(θ_k · T_k θ_k) − ρ_k (θ_k²)| < 1e-6`, and its eigen-defect one level up
/// must vanish on level-`k` coordinates. When `λ₁² > λ₂` the truncated
/// self-intersections `(θ_k²)` must be nonnegative and nonincreasing.
pub fn spectral_identity_suite(
    tower: &Tower,
    data: &SpectralData,
    seed: u64,
) -> Result<IdentityLedger> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda2 = q(tower.matrix().lambda2() as i64);
    let mut checks = Vec::new();
    for k in 0..=tower.depth() {
        let (lo, hi) = (tower.model(k).fan(), tower.model(k + 1).fan());
        let (g_lo, g_hi) = (lo.class_gram(), hi.class_gram());
        let (pull, push) = (tower.pullback(k), tower.pushforward(k));
        let (r_lo, r_hi) = (lo.class_rank(), hi.class_rank());

        let mut ok = push.transpose().mul(&g_lo) == g_hi.mul(pull);
        for _ in 0..RANDOM_PAIRS {
            let alpha = random_class(&mut rng, r_hi);
            let beta = random_class(&mut rng, r_lo);
            ok &=
                g_lo.form(&push.mul_vec(&alpha), &beta) == g_hi.form(&alpha, &pull.mul_vec(&beta));
        }
        checks.push(exact("adjointness", k, RANDOM_PAIRS, ok));

        let scaled = |b: &[Q]| {
            let fb = pull.mul_vec(b);
            g_hi.form(&fb, &fb) == &lambda2 * g_lo.form(b, b)
        };
        let mut ok = pull.transpose().mul(&g_hi).mul(pull) == g_lo.scale(&lambda2);
        let identity = QMatrix::identity(r_lo);
        for i in 0..r_lo {
            ok &= scaled(identity.row(i));
        }
        for _ in 0..RANDOM_PAIRS {
            ok &= scaled(&random_class(&mut rng, r_lo));
        }
        checks.push(exact("lambda2_scaling", k, r_lo + RANDOM_PAIRS, ok));

        let h = tower.hyperplane_class(k);
        let perp = QMatrix::from_rows(vec![g_lo.mul_vec(&h)]).nullspace();
        let ok = perp.iter().all(|v| scaled(v));
        checks.push(exact("cartier_norm_scaling", k, perp.len(), ok));

        let gens = if lo.len() <= NEF_GENERATOR_RAY_CAP {
            lo.nef_generators()?
        } else {
            vec![h.clone()]
        };
        let ok = gens.iter().all(|g| hi.is_nef(&pull.mul_vec(g)));
        checks.push(exact("nef_pullback", k, gens.len(), ok));
    }

    let k = tower.depth();
    let theta = &data.thetas[k];
    let gram = tower.model(k).fan().class_gram().to_f64_rows();
    let t = tower.operator(k).to_f64_rows();
    let form = |a: &[f64], b: &[f64]| -> f64 {
        gram.iter()
            .zip(a)
            .map(|(row, x)| x * row.iter().zip(b).map(|(g, y)| g * y).sum::<f64>())
            .sum()
    };
    let t_theta: Vec<f64> = t
        .iter()
        .map(|row| row.iter().zip(theta).map(|(a, b)| a * b).sum())
        .collect();
    let rho = data.rho_seq[k].rho;
    let dev = (form(theta, &t_theta) - rho * form(theta, theta)).abs();
    checks.push(approx("eigen_residual", k, dev, EIGEN_TOL));

    let res = eigenclass_residual(tower, data, k)?;
    checks.push(approx(
        "eigen_level_residual",
        k,
        res.level_max,
        LEVEL_RESIDUAL_TOL,
    ));

    if hypothesis_holds(data.lambda1, data.lambda2 as f64) {
        let s = &data.theta_self_intersections;
        let slack = 1e-9;
        let ok = s.iter().all(|x| *x >= -slack) && s.windows(2).all(|w| w[1] <= w[0] + slack);
        checks.push(IdentityCheck {
            name: "theta_self_intersection_trend".into(),
            level: None,
            exact: false,
            passed: ok,
            samples: s.len(),
            deviation: None,
        });
    }

    Ok(IdentityLedger {
        seed,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_data;
    use crate::toric::MonomialMatrix;

    #[test]
    fn fibonacci_suite_passes() {
        let a = MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap();
        let t = Tower::build(&a, 3, 400).unwrap();
        let d = spectral_data(&t).unwrap();
        let ledger = spectral_identity_suite(&t, &d, 7).unwrap();
        assert!(ledger.all_passed, "{ledger:?}");
        assert!(ledger
            .checks
            .iter()
            .any(|c| c.name == "theta_self_intersection_trend"));
    }

    #[test]
    fn degenerate_map_skips_trend() {
        let a = MonomialMatrix::from_entries([2, 0, 2, 2]).unwrap();
        let t = Tower::build(&a, 2, 400).unwrap();
        let d = spectral_data(&t).unwrap();
        let ledger = spectral_identity_suite(&t, &d, 7).unwrap();
        assert!(ledger.all_passed, "{ledger:?}");
        assert!(!ledger
            .checks
            .iter()
            .any(|c| c.name == "theta_self_intersection_trend"));
    }
}
