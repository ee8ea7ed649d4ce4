//! Toric surfaces, monomial maps, and exact class operators between them.
//!
//! A monomial map `(x, y) ↦ (x^{a11} y^{a12}, x^{a21} y^{a22})` acts on the
//! cocharacter lattice by the matrix `A`. Once the source fan is refined so
//! that every cone lands inside a target cone, the map is a morphism of toric
//! surfaces and pullback is composition of support functions with `A`.

mod degree;
mod fan;
mod maps;
mod model;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::q;
use crate::upoly::UPoly;

pub use degree::{
    toric_degree, toric_degree_sequence, toric_degree_sequence_capped, DEFAULT_RAY_CAP,
};
pub use fan::{primitive, Fan, Insertion, Location, Ray, NEF_GENERATOR_RAY_CAP, PSEF_RAY_CAP};
pub use maps::{
    check_holomorphic, is_holomorphic, pullback_divisor, pullback_matrix, pushforward_divisor,
    pushforward_matrix, refine_for_matrix, ToricClassMatrix,
};
pub use model::ToricModel;

/// Exponent matrix of a dominant monomial map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct MonomialMatrix {
    a: [[i64; 2]; 2],
}

impl TryFrom<[[i64; 2]; 2]> for MonomialMatrix {
    type Error = Error;
    fn try_from(a: [[i64; 2]; 2]) -> Result<Self> {
        MonomialMatrix::new(a)
    }
}

impl From<MonomialMatrix> for [[i64; 2]; 2] {
    fn from(m: MonomialMatrix) -> Self {
        m.a
    }
}

impl MonomialMatrix {
    pub fn new(a: [[i64; 2]; 2]) -> Result<Self> {
        let m = MonomialMatrix { a };
        if m.det() == 0 {
            return Err(Error::Dominance(format!(
                "monomial matrix {a:?} is singular"
            )));
        }
        Ok(m)
    }

    /// Row-major entries `a11, a12, a21, a22`.
    pub fn from_entries(e: [i64; 4]) -> Result<Self> {
        Self::new([[e[0], e[1]], [e[2], e[3]]])
    }

    pub fn identity() -> Self {
        MonomialMatrix {
            a: [[1, 0], [0, 1]],
        }
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.a
    }

    pub fn det(&self) -> i128 {
        self.a[0][0] as i128 * self.a[1][1] as i128 - self.a[0][1] as i128 * self.a[1][0] as i128
    }

    pub fn trace(&self) -> i128 {
        self.a[0][0] as i128 + self.a[1][1] as i128
    }

    pub fn apply(&self, v: Ray) -> [i128; 2] {
        let a = &self.a;
        [
            a[0][0] as i128 * v[0] as i128 + a[0][1] as i128 * v[1] as i128,
            a[1][0] as i128 * v[0] as i128 + a[1][1] as i128 * v[1] as i128,
        ]
    }

    /// `A v` as a lattice vector; overflow is a capacity error.
    pub fn apply_ray(&self, v: Ray) -> Result<Ray> {
        let w = self.apply(v);
        let cap = || Error::Capacity {
            what: "image vector overflows 64 bits".into(),
            partial: Vec::new(),
        };
        Ok([
            i64::try_from(w[0]).map_err(|_| cap())?,
            i64::try_from(w[1]).map_err(|_| cap())?,
        ])
    }

    /// The primitive vector on the ray mapped onto the ray of `w`.
    pub fn preimage_ray(&self, w: Ray) -> Result<Ray> {
        let a = &self.a;
        let s: i128 = if self.det() > 0 { 1 } else { -1 };
        let adj = [
            a[1][1] as i128 * w[0] as i128 - a[0][1] as i128 * w[1] as i128,
            -(a[1][0] as i128) * w[0] as i128 + a[0][0] as i128 * w[1] as i128,
        ];
        primitive([s * adj[0], s * adj[1]])
    }

    /// Matrix of the composite `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        let (a, b) = (&self.a, &other.a);
        let mut c = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let v = a[i][0] as i128 * b[0][j] as i128 + a[i][1] as i128 * b[1][j] as i128;
                c[i][j] = i64::try_from(v).map_err(|_| Error::Capacity {
                    what: "monomial matrix entries overflow 64 bits".into(),
                    partial: Vec::new(),
                })?;
            }
        }
        Ok(MonomialMatrix { a: c })
    }

    pub fn pow(&self, n: u32) -> Result<MonomialMatrix> {
        let mut acc = MonomialMatrix::identity();
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Topological degree `|det A|`.
    pub fn lambda2(&self) -> u64 {
        self.det().unsigned_abs() as u64
    }

    /// Spectral radius of `A`.
    pub fn lambda1(&self) -> f64 {
        let t = self.trace() as f64;
        let d = self.det() as f64;
        let disc = t * t - 4.0 * d;
        if disc >= 0.0 {
            let r = disc.sqrt();
            ((t + r).abs()).max((t - r).abs()) / 2.0
        } else {
            d.sqrt()
        }
    }

    /// A polynomial whose largest real root is exactly the spectral radius.
    pub fn lambda1_poly(&self) -> UPoly {
        let t = self.trace();
        let d = self.det();
        let small = |x: i128| q(x as i64);
        if t * t - 4 * d >= 0 {
            // p(s) p(−s): the largest real root is max |eigenvalue|
            let p = UPoly::new(vec![small(d), small(-t), q(1)]);
            let pm = UPoly::new(vec![small(d), small(t), q(1)]);
            p.mul(&pm)
        } else {
            UPoly::new(vec![small(-d), q(0), q(1)])
        }
    }

    /// Degree of the homogenized map on the plane, read off the exponents.
    pub fn homogenized_degree(&self) -> u64 {
        let a = &self.a;
        let z = 0.max(a[0][0] + a[0][1]).max(a[1][0] + a[1][1]);
        let x = 0.max(-a[0][0]).max(-a[1][0]);
        let y = 0.max(-a[0][1]).max(-a[1][1]);
        (x + y + z) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_matrix_basics() {
        assert!(MonomialMatrix::from_entries([1, 2, 2, 4]).is_err());
        let a = MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap();
        assert_eq!(a.det(), 1);
        assert_eq!(a.lambda2(), 1);
        assert!((a.lambda1() - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(a.homogenized_degree(), 3);
        assert_eq!(a.pow(2).unwrap().entries(), [[5, 3], [3, 2]]);
        let b = MonomialMatrix::from_entries([2, 0, 2, 2]).unwrap();
        assert_eq!(b.lambda1(), 2.0);
        assert_eq!(b.lambda2(), 4);
        assert_eq!(b.homogenized_degree(), 4);
        // rotation by a quarter turn: complex eigenvalues of modulus 1
        let r = MonomialMatrix::from_entries([0, -1, 1, 0]).unwrap();
        assert_eq!(r.lambda1(), 1.0);
    }

    #[test]
    fn preimage_ray_maps_onto_target() {
        let a = MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap();
        for w in [[1, 0], [0, 1], [-1, -1], [3, -2]] {
            let p = a.preimage_ray(w).unwrap();
            let img = a.apply(p);
            assert_eq!(img[0] * w[1] as i128 - img[1] * w[0] as i128, 0);
            assert!(img[0] * w[0] as i128 + img[1] * w[1] as i128 > 0);
        }
        let neg = MonomialMatrix::from_entries([0, 1, 1, 0]).unwrap();
        let p = neg.preimage_ray([1, 0]).unwrap();
        assert_eq!(neg.apply(p), [1, 0]);
    }

    #[test]
    fn lambda1_poly_root_is_spectral_radius() {
        for e in [[2, 1, 1, 1], [0, 1, 1, 1], [1, -2, 3, 1], [-3, 1, 2, 2]] {
            let a = MonomialMatrix::from_entries(e).unwrap();
            let (lo, hi) = a
                .lambda1_poly()
                .largest_real_root(&crate::rational::qf(1, 1 << 30))
                .unwrap();
            let l = a.lambda1();
            assert!(crate::rational::to_f64(&lo) <= l + 1e-9);
            assert!(l <= crate::rational::to_f64(&hi) + 1e-9);
        }
    }
}
