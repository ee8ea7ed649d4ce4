//! Topological degree (number of preimages of a generic point).
//!
//! The fiber count works in generic coordinates: after a random linear change
//! of coordinates `L`, the preimages of a target `p` in the chart `Z = 1` are
//! the common zeros of `G1 = F_0 p_2 − F_2 p_0` and `G2 = F_1 p_2 − F_2 p_1`
//! other than the indeterminacy points. The latter are shared by every
//! target, so with a second target `q` the count is the number of distinct
//! roots of `Res_y(G1, G2)` that are not roots of the corresponding resultant
//! for `q`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::map::HomMap;
use super::poly::HomPoly;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::q;
use crate::upoly::UPoly;
use crate::{Provenance, Q};

const MAX_ATTEMPTS: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopDegreeMode {
    /// `|det A|` for a monomial map.
    MonomialExact,
    /// Randomized fiber count with the given seed.
    FiberCount { seed: u64 },
    /// A value supplied by the caller.
    UserSupplied(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologicalDegree {
    pub value: u64,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of random draws used by the fiber count.
    pub attempts: u32,
    pub method: String,
}

pub fn topological_degree(f: &HomMap, mode: &TopDegreeMode) -> Result<TopologicalDegree> {
    match mode {
        TopDegreeMode::MonomialExact => {
            let m = f.as_monomial().ok_or_else(|| {
                Error::Configuration("monomial-exact mode needs a monomial map".into())
            })?;
            Ok(TopologicalDegree {
                value: m.lambda2(),
                provenance: Provenance::Exact,
                seed: None,
                attempts: 0,
                method: "monomial-exact".into(),
            })
        }
        TopDegreeMode::UserSupplied(v) => Ok(TopologicalDegree {
            value: *v,
            provenance: Provenance::UserSupplied,
            seed: None,
            attempts: 0,
            method: "user-supplied".into(),
        }),
        TopDegreeMode::FiberCount { seed } => {
            let (value, attempts) = fiber_count(f, *seed)?;
            Ok(TopologicalDegree {
                value,
                provenance: Provenance::Heuristic,
                seed: Some(*seed),
                attempts,
                method: "fiber-count (generic-target heuristic)".into(),
            })
        }
    }
}

fn linear_map(m: &[[i64; 3]; 3]) -> Result<HomMap> {
    let comp = |row: &[i64; 3]| {
        (0..3).fold(HomPoly::zero(1), |acc, i| {
            acc.add(&HomPoly::var(i).scale(&q(row[i])))
        })
    };
    HomMap::new([comp(&m[0]), comp(&m[1]), comp(&m[2])])
}

fn random_invertible(rng: &mut ChaCha8Rng) -> [[i64; 3]; 3] {
    loop {
        let m: [[i64; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-9..=9)));
        let det =
            QMatrix::from_i64(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).determinant();
        if !det.is_zero() {
            return m;
        }
    }
}

fn random_target(rng: &mut ChaCha8Rng) -> [i64; 3] {
    let mut t: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-50..=50));
    if t[2] == 0 {
        t[2] = 1;
    }
    t
}

/// `Res_y(G1, G2)` as a polynomial in `x`, where `G1`, `G2` are the chart
/// equations for target `t`. `None` when the `y`-leading coefficients are not
/// constant (coordinates not generic enough).
fn fiber_resultant(g: &HomMap, t: [i64; 3]) -> Option<UPoly> {
    let [f0, f1, f2] = g.components();
    let d = g.degree();
    let g1 = f0.scale(&q(t[2])).sub(&f2.scale(&q(t[0])));
    let g2 = f1.scale(&q(t[2])).sub(&f2.scale(&q(t[1])));
    let top = [0, d, 0];
    if g1.coeff(&top).is_zero() || g2.coeff(&top).is_zero() {
        return None;
    }
    let in_y = |p: &HomPoly, x: &Q| -> UPoly {
        let mut c = vec![Q::zero(); d as usize + 1];
        for (e, coef) in p.terms() {
            let mut v = coef.clone();
            for _ in 0..e[0] {
                v *= x;
            }
            c[e[1] as usize] += v;
        }
        UPoly::new(c)
    };
    let npts = (d * d + 1) as i64;
    let pts: Vec<(Q, Q)> = (0..npts)
        .map(|k| {
            let x = q(k);
            let r = in_y(&g1, &x).resultant(&in_y(&g2, &x));
            (x, r)
        })
        .collect();
    Some(UPoly::interpolate(&pts))
}

fn one_draw(g: &HomMap, rng: &mut ChaCha8Rng) -> Option<u64> {
    let p = random_target(rng);
    let qt = random_target(rng);
    let rp = fiber_resultant(g, p)?;
    let rq = fiber_resultant(g, qt)?;
    if rp.is_zero() || rq.is_zero() {
        return None;
    }
    let sp = rp.squarefree();
    let sq = rq.squarefree();
    let shared = sp.gcd(&sq);
    Some((sp.degree()? - shared.degree()?) as u64)
}

fn fiber_count(f: &HomMap, seed: u64) -> Result<(u64, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let l = linear_map(&random_invertible(&mut rng))?;
        let g = f.compose(&l)?;
        let first = one_draw(&g, &mut rng);
        let second = one_draw(&g, &mut rng);
        if let (Some(a), Some(b)) = (first, second) {
            if a == b && a > 0 {
                return Ok((a, attempt));
            }
        }
    }
    Err(Error::HeuristicFailure(format!(
        "fiber count inconclusive after {MAX_ATTEMPTS} attempts (seed {seed})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::MonomialMatrix;

    fn m(c: [&str; 3]) -> HomMap {
        HomMap::parse(&c).unwrap()
    }

    #[test]
    fn exact_and_user_modes() {
        let f = HomMap::from_monomial(&MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap());
        let t = topological_degree(&f, &TopDegreeMode::MonomialExact).unwrap();
        assert_eq!((t.value, t.provenance), (1, Provenance::Exact));
        let t = topological_degree(&f, &TopDegreeMode::UserSupplied(9)).unwrap();
        assert_eq!((t.value, t.provenance), (9, Provenance::UserSupplied));
        let h = m(["Y*Z", "Y^2 + X*Z", "Z^2"]);
        assert!(topological_degree(&h, &TopDegreeMode::MonomialExact).is_err());
    }

    #[test]
    fn fiber_counts() {
        let mode = TopDegreeMode::FiberCount { seed: 42 };
        let cases = [
            (m(["Y*Z", "X*Z", "X*Y"]), 1),
            (m(["X^2", "Y^2", "Z^2"]), 4),
            (m(["Y*Z", "Y^2 + X*Z", "Z^2"]), 1),
            (m(["X^2 + Y*Z", "Y^2", "Z^2"]), 4),
            (m(["X^3", "Y^3", "Z^3"]), 9),
        ];
        for (f, expected) in cases {
            let t = topological_degree(&f, &mode).unwrap();
            assert_eq!(t.value, expected, "{f}");
            assert_eq!(t.provenance, Provenance::Heuristic);
            assert_eq!(t.seed, Some(42));
        }
    }
}
