//! Spectral radii of the model-level pullbacks along a tower of toric models.

use std::collections::BTreeMap;

use serde::Serialize;

use super::cone::{cone_interior, power_radius, ConeRadius};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{qf, to_f64};
use crate::toric::{
    pullback_matrix, pushforward_matrix, MonomialMatrix, ToricModel, NEF_GENERATOR_RAY_CAP,
};
use crate::Q;

pub const DEFAULT_TOWER_RAY_CAP: usize = 400;
pub const MAX_TOWER_DEPTH: usize = 16;

/// Models `X_0 = P² ← X_1 ← … ← X_{depth+1}` with `F` holomorphic from
/// `X_{k+1}` to `X_k`, and the class operators between consecutive levels.
#[derive(Clone, Debug)]
pub struct Tower {
    a: MonomialMatrix,
    models: Vec<ToricModel>,
    /// `F^*: Pic(X_k) → Pic(X_{k+1})`.
    pull: Vec<QMatrix>,
    /// `F_*: Pic(X_{k+1}) → Pic(X_k)`.
    push: Vec<QMatrix>,
    /// `μ^*: Pic(X_k) → Pic(X_{k+1})`.
    down_pull: Vec<QMatrix>,
    /// `μ_*: Pic(X_{k+1}) → Pic(X_k)`.
    down_push: Vec<QMatrix>,
}

impl Tower {
    /// Builds operators for levels `0..=depth`.
    pub fn build(a: &MonomialMatrix, depth: usize, ray_cap: usize) -> Result<Tower> {
        if depth > MAX_TOWER_DEPTH {
            return Err(Error::Configuration(format!(
                "tower depth {depth} exceeds the cap {MAX_TOWER_DEPTH}"
            )));
        }
        let models = ToricModel::tower(a, depth + 1, ray_cap)?;
        let id = MonomialMatrix::identity();
        let mut t = Tower {
            a: *a,
            models,
            pull: Vec::new(),
            push: Vec::new(),
            down_pull: Vec::new(),
            down_push: Vec::new(),
        };
        for k in 0..=depth {
            let (lo, hi) = (t.models[k].fan(), t.models[k + 1].fan());
            t.pull.push(pullback_matrix(a, hi, lo)?.matrix);
            t.push.push(pushforward_matrix(a, hi, lo)?.matrix);
            t.down_pull.push(pullback_matrix(&id, hi, lo)?.matrix);
            t.down_push.push(pushforward_matrix(&id, hi, lo)?.matrix);
        }
        Ok(t)
    }

    pub fn matrix(&self) -> &MonomialMatrix {
        &self.a
    }

    /// Number of levels carrying an operator.
    pub fn depth(&self) -> usize {
        self.pull.len() - 1
    }

    pub fn model(&self, k: usize) -> &ToricModel {
        &self.models[k]
    }

    pub fn models(&self) -> &[ToricModel] {
        &self.models
    }

    pub fn pullback(&self, k: usize) -> &QMatrix {
        &self.pull[k]
    }

    pub fn pushforward(&self, k: usize) -> &QMatrix {
        &self.push[k]
    }

    pub fn blowdown_pullback(&self, k: usize) -> &QMatrix {
        &self.down_pull[k]
    }

    pub fn blowdown_pushforward(&self, k: usize) -> &QMatrix {
        &self.down_push[k]
    }

    /// `T_k = μ_* F^*` on `Pic(X_k)`.
    pub fn operator(&self, k: usize) -> QMatrix {
        self.down_push[k].mul(&self.pull[k])
    }

    /// `S_k = F_* μ^*`, the adjoint of `T_k` for the intersection form.
    pub fn adjoint_operator(&self, k: usize) -> QMatrix {
        self.push[k].mul(&self.down_pull[k])
    }

    /// Class coordinates of the line class on `X_k`.
    pub fn hyperplane_class(&self, k: usize) -> Vec<Q> {
        let m = &self.models[k];
        m.fan().divisor_to_class(&m.hyperplane_divisor())
    }
}

/// A class with floating-point coordinates in the line plus `α_E` basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxClass {
    pub base: Vec<f64>,
    pub exc: BTreeMap<String, f64>,
}

impl ApproxClass {
    pub fn max_abs(&self) -> f64 {
        self.base
            .iter()
            .chain(self.exc.values())
            .fold(0.0, |a, x| a.max(x.abs()))
    }
}

/// Converts class coordinates on a model to the line plus `α_E` basis.
pub fn approx_class(model: &ToricModel, x: &[f64]) -> Result<ApproxClass> {
    let mut out = ApproxClass {
        base: vec![0.0],
        exc: model.prime_set().into_iter().map(|id| (id, 0.0)).collect(),
    };
    let rank = model.fan().class_rank();
    for (i, xi) in x.iter().enumerate() {
        let mut e = vec![Q::from_integer(0.into()); rank];
        e[i] = Q::from_integer(1.into());
        let v = model.class_to_vector(&e)?;
        out.base[0] += xi * to_f64(&v.base[0]);
        for (id, c) in &v.exc {
            *out.exc.get_mut(id).expect("prime of this model") += xi * to_f64(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoLevel {
    pub level: usize,
    pub rays: usize,
    pub rank: usize,
    pub rho: f64,
    pub error: f64,
    pub iterations: usize,
    /// Whether cone invariance was verified exactly on nef generators.
    pub cone_checked: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralData {
    pub lambda1: f64,
    pub lambda1_error: f64,
    pub lambda2: u64,
    pub rho_seq: Vec<RhoLevel>,
    /// `(θ_k²)` for the Perron vectors normalized by `(θ_k · H) = 1`.
    pub theta_self_intersections: Vec<f64>,
    pub theta_star_approx: ApproxClass,
    pub theta_lower_approx: ApproxClass,
    /// Perron vectors of `T_k` in class coordinates, normalized as above.
    #[serde(skip)]
    pub thetas: Vec<Vec<f64>>,
}

fn f64_form(g: &QMatrix, a: &[f64], b: &[f64]) -> f64 {
    let gf = g.to_f64_rows();
    gf.iter()
        .zip(a)
        .map(|(row, ai)| ai * row.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
        .sum()
}

/// Perron data of `m` on the nef cone of `model`.
fn nef_radius(model: &ToricModel, m: &QMatrix, h: &[Q]) -> Result<(ConeRadius, bool)> {
    let fan = model.fan();
    let (start, checked) = if fan.len() <= NEF_GENERATOR_RAY_CAP {
        let gens = fan.nef_generators()?;
        for g in &gens {
            if !fan.is_nef(&m.mul_vec(g)) {
                return Err(Error::Invariant(
                    "model-level operator does not preserve the nef cone".into(),
                ));
            }
        }
        (cone_interior(&gens), true)
    } else {
        (h.iter().map(to_f64).collect(), false)
    };
    Ok((power_radius(m, &start, true)?, checked))
}

fn normalized(model: &ToricModel, v: &[f64], h: &[Q]) -> Result<Vec<f64>> {
    let hf: Vec<f64> = h.iter().map(to_f64).collect();
    let s = f64_form(&model.fan().class_gram(), v, &hf);
    if s.abs() < 1e-300 || !s.is_finite() {
        return Err(Error::NumericalFailure(
            "Perron vector is orthogonal to the line class".into(),
        ));
    }
    Ok(v.iter().map(|x| x / s).collect())
}

/// Exact spectral radius of `A` with a bracket from root isolation.
pub fn monomial_lambda1(a: &MonomialMatrix) -> (f64, f64) {
    match a.lambda1_poly().largest_real_root(&qf(1, 1 << 50)) {
        Some((lo, hi)) => {
            let (lo, hi) = (to_f64(&lo), to_f64(&hi));
            ((lo + hi) / 2.0, (hi - lo) / 2.0 + f64::EPSILON * hi.abs())
        }
        None => (a.lambda1(), 1e-12),
    }
}

/// `ρ_k` for `k = 0..=depth`, with Perron vectors and the monotonicity
/// checks `ρ_{k+1} ≤ ρ_k` and `ρ_k ≥ λ₁` (within the error bounds).
pub fn rho_tower(a: &MonomialMatrix, depth: usize) -> Result<SpectralData> {
    let tower = Tower::build(a, depth, DEFAULT_TOWER_RAY_CAP)?;
    spectral_data(&tower)
}

pub fn spectral_data(tower: &Tower) -> Result<SpectralData> {
    let (lambda1, lambda1_error) = monomial_lambda1(tower.matrix());
    let mut rho_seq = Vec::new();
    let mut thetas = Vec::new();
    let mut selfint = Vec::new();
    let mut lower = Vec::new();
    for k in 0..=tower.depth() {
        let model = tower.model(k);
        let h = tower.hyperplane_class(k);
        let t = tower.operator(k);
        let (r, checked) = nef_radius(model, &t, &h)?;
        let theta = normalized(model, &r.eigvec, &h)?;
        let gram = model.fan().class_gram();
        selfint.push(f64_form(&gram, &theta, &theta));
        rho_seq.push(RhoLevel {
            level: k,
            rays: model.fan().len(),
            rank: model.fan().class_rank(),
            rho: r.rho,
            error: r.error,
            iterations: r.iterations,
            cone_checked: checked,
        });
        thetas.push(theta);
        if k == tower.depth() {
            let (s, _) = nef_radius(model, &tower.adjoint_operator(k), &h)?;
            lower = normalized(model, &s.eigvec, &h)?;
        }
    }
    let slack = |e: f64, r: f64| e + 1e-9 * r.max(1.0);
    for w in rho_seq.windows(2) {
        if w[1].rho > w[0].rho + slack(w[0].error + w[1].error, w[0].rho) {
            return Err(Error::Invariant(format!(
                "ρ increases from level {} ({}) to level {} ({})",
                w[0].level, w[0].rho, w[1].level, w[1].rho
            )));
        }
    }
    for r in &rho_seq {
        if r.rho < lambda1 - slack(r.error + lambda1_error, lambda1) {
            return Err(Error::Invariant(format!(
                "ρ at level {} is {} < λ₁ = {lambda1}",
                r.level, r.rho
            )));
        }
    }
    let deepest = tower.model(tower.depth());
    Ok(SpectralData {
        lambda1,
        lambda1_error,
        lambda2: tower.matrix().lambda2(),
        theta_star_approx: approx_class(deepest, thetas.last().expect("nonempty"))?,
        theta_lower_approx: approx_class(deepest, &lower)?,
        rho_seq,
        theta_self_intersections: selfint,
        thetas,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenResidual {
    pub level: usize,
    pub rho: f64,
    /// `F^*θ_k − ρ_k μ^*θ_k` on `X_{k+1}`.
    pub residual: ApproxClass,
    /// Largest coordinate on the line and the primes of `X_k`.
    pub level_max: f64,
    /// Largest coordinate on the primes created at level `k + 1`.
    pub new_max: f64,
}

/// The eigen-defect of `θ_k` one level up. Its coordinates on level `k`
/// vanish up to the error of the Perron vector.
pub fn eigenclass_residual(tower: &Tower, data: &SpectralData, k: usize) -> Result<EigenResidual> {
    if k > tower.depth() || k >= data.thetas.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: data.thetas.len().min(tower.depth() + 1),
        });
    }
    let theta = &data.thetas[k];
    let rho = data.rho_seq[k].rho;
    let apply = |m: &QMatrix| -> Vec<f64> {
        m.to_f64_rows()
            .iter()
            .map(|row| row.iter().zip(theta).map(|(a, b)| a * b).sum())
            .collect()
    };
    let fp = apply(tower.pullback(k));
    let up = apply(tower.blowdown_pullback(k));
    let r: Vec<f64> = fp.iter().zip(&up).map(|(a, b)| a - rho * b).collect();
    let residual = approx_class(tower.model(k + 1), &r)?;
    let old = tower.model(k).prime_set();
    let mut level_max = residual.base[0].abs();
    let mut new_max: f64 = 0.0;
    for (id, c) in &residual.exc {
        if old.contains(id) {
            level_max = level_max.max(c.abs());
        } else {
            new_max = new_max.max(c.abs());
        }
    }
    Ok(EigenResidual {
        level: k,
        rho,
        residual,
        level_max,
        new_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(e: [i64; 4]) -> MonomialMatrix {
        MonomialMatrix::from_entries(e).unwrap()
    }

    #[test]
    fn identity_tower_is_trivial() {
        let d = rho_tower(&MonomialMatrix::identity(), 2).unwrap();
        for r in &d.rho_seq {
            assert!((r.rho - 1.0).abs() < 1e-12);
        }
        let t = Tower::build(&MonomialMatrix::identity(), 2, 100).unwrap();
        let e = eigenclass_residual(&t, &d, 1).unwrap();
        assert!(e.residual.max_abs() < 1e-12);
    }

    #[test]
    fn fibonacci_tower_decreases_toward_lambda1() {
        let a = mm([2, 1, 1, 1]);
        let d = rho_tower(&a, 4).unwrap();
        assert!((d.rho_seq[0].rho - 3.0).abs() < 1e-10);
        let l1 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((d.lambda1 - l1).abs() < 1e-12);
        assert!(d.rho_seq[4].rho - l1 < 0.2);
        let t = Tower::build(&a, 4, 400).unwrap();
        let e = eigenclass_residual(&t, &d, 2).unwrap();
        assert!(e.level_max < 1e-8, "{e:?}");
    }
}
