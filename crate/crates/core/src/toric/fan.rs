//! Smooth complete fans in the rank-2 lattice and the intersection theory of
//! the corresponding toric surfaces.
//!
//! Divisor coordinates: `c[i]` is the coefficient of the boundary divisor
//! `D_i` of ray `i`. Class coordinates: a divisor is reduced modulo
//! `div(χ^m)` so that the coefficients on rays 0 and 1 vanish; the class is
//! the remaining vector `(c_2, …, c_{n−1})`.
//!
//! Intersection numbers: adjacent divisors meet once and
//! `D_i² = −a_i` where `v_{i−1} + v_{i+1} = a_i v_i`. On the plane this gives
//! `+1` for every line; a star subdivision creates a `−1` curve.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::lp;
use crate::rational::{q, Q};

pub type Ray = [i64; 2];

/// Rays beyond which `is_psef` refuses to run the exact LP.
pub const PSEF_RAY_CAP: usize = 64;
/// Rays beyond which `nef_generators` refuses to enumerate.
pub const NEF_GENERATOR_RAY_CAP: usize = 200;

pub(crate) fn det(u: Ray, v: Ray) -> i128 {
    u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Primitive vector on the ray through `v` (`v ≠ 0`).
pub fn primitive(v: [i128; 2]) -> Result<Ray> {
    let g = {
        let (mut a, mut b) = (v[0].unsigned_abs(), v[1].unsigned_abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a as i128
    };
    if g == 0 {
        return Err(Error::InvalidFan("zero vector has no ray".into()));
    }
    let x = i64::try_from(v[0] / g).map_err(|_| overflow())?;
    let y = i64::try_from(v[1] / g).map_err(|_| overflow())?;
    Ok([x, y])
}

fn overflow() -> Error {
    Error::Capacity {
        what: "ray coordinates overflow 64 bits".into(),
        partial: Vec::new(),
    }
}

/// Half-plane index used for exact angular ordering from the positive x-axis.
fn half(p: Ray) -> u8 {
    if p[1] > 0 || (p[1] == 0 && p[0] > 0) {
        0
    } else {
        1
    }
}

/// Compares the angles of two nonzero vectors, measured ccw from `(1,0)`.
pub(crate) fn angle_cmp(p: Ray, r: Ray) -> Ordering {
    half(p).cmp(&half(r)).then_with(|| 0.cmp(&det(p, r)))
}

/// Position of a lattice vector relative to a fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    /// `p = m · v_j`.
    OnRay { ray: usize, multiple: i64 },
    /// `p = a · v_j + b · v_{j+1}` with `a, b > 0`.
    Interior { cone: usize, a: i64, b: i64 },
}

/// A ray added by a star subdivision, with the two rays it was inserted
/// between (`ray = left + right`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub ray: Ray,
    pub left: Ray,
    pub right: Ray,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanRepr", into = "FanRepr")]
pub struct Fan {
    rays: Vec<Ray>,
    /// Index of the ray with the smallest angle; rays are sorted by angle
    /// cyclically from here.
    start: usize,
}

#[derive(Serialize, Deserialize)]
struct FanRepr {
    rays: Vec<Ray>,
}

impl TryFrom<FanRepr> for Fan {
    type Error = Error;
    fn try_from(r: FanRepr) -> Result<Self> {
        Fan::new(r.rays)
    }
}

impl From<Fan> for FanRepr {
    fn from(f: Fan) -> Self {
        FanRepr { rays: f.rays }
    }
}

impl Fan {
    /// Validates primitivity, smoothness (`det(v_i, v_{i+1}) = +1`) and that
    /// the rays wind exactly once counterclockwise.
    pub fn new(rays: Vec<Ray>) -> Result<Fan> {
        let n = rays.len();
        if n < 3 {
            return Err(Error::InvalidFan(format!(
                "{n} rays cannot form a complete fan"
            )));
        }
        for r in &rays {
            if gcd(r[0], r[1]) != 1 {
                return Err(Error::InvalidFan(format!("ray {r:?} is not primitive")));
            }
        }
        for i in 0..n {
            let (u, v) = (rays[i], rays[(i + 1) % n]);
            if det(u, v) != 1 {
                return Err(Error::InvalidFan(format!(
                    "cone ({u:?}, {v:?}) has determinant {}, expected 1",
                    det(u, v)
                )));
            }
        }
        // each step turns by less than π, so the winding number is the
        // number of cyclic descents in angle order
        let descents = (0..n)
            .filter(|&i| angle_cmp(rays[(i + 1) % n], rays[i]) == Ordering::Less)
            .count();
        if descents != 1 {
            return Err(Error::InvalidFan(format!("rays wind {descents} times")));
        }
        let start = (0..n)
            .min_by(|&i, &j| angle_cmp(rays[i], rays[j]))
            .expect("nonempty");
        Ok(Fan { rays, start })
    }

    /// The projective plane.
    pub fn p2() -> Fan {
        Fan::new(vec![[1, 0], [0, 1], [-1, -1]]).expect("P2 fan is valid")
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Rank of the class group, `#rays − 2`.
    pub fn class_rank(&self) -> usize {
        self.rays.len() - 2
    }

    pub fn ray(&self, i: usize) -> Ray {
        self.rays[i % self.rays.len()]
    }

    pub fn index_of(&self, r: Ray) -> Option<usize> {
        match self.locate(r) {
            Location::OnRay { ray, multiple: 1 } => Some(ray),
            _ => None,
        }
    }

    /// `D_i² = −a_i`, where `v_{i−1} + v_{i+1} = a_i v_i`.
    pub fn self_intersections(&self) -> Vec<i64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let s = [
                    self.rays[(i + n - 1) % n][0] + self.rays[(i + 1) % n][0],
                    self.rays[(i + n - 1) % n][1] + self.rays[(i + 1) % n][1],
                ];
                let v = self.rays[i];
                // s = a v with v primitive; det(v_{i-1}, v_i) = 1 fixes a
                let a = if v[0] != 0 { s[0] / v[0] } else { s[1] / v[1] };
                -a
            })
            .collect()
    }

    /// Intersection numbers of all boundary divisors.
    pub fn intersection_matrix(&self) -> QMatrix {
        let n = self.len();
        let sq = self.self_intersections();
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = q(sq[i]);
            m[(i, (i + 1) % n)] = Q::one();
            m[((i + 1) % n, i)] = Q::one();
        }
        m
    }

    /// Intersection form on class coordinates.
    pub fn class_gram(&self) -> QMatrix {
        let n = self.len();
        let full = self.intersection_matrix();
        let mut g = QMatrix::zeros(n - 2, n - 2);
        for i in 2..n {
            for j in 2..n {
                g[(i - 2, j - 2)] = full[(i, j)].clone();
            }
        }
        g
    }

    /// `(D · D_i)` for every boundary divisor, from divisor coordinates.
    pub fn curve_degrees(&self, c: &[Q]) -> Vec<Q> {
        let n = self.len();
        assert_eq!(c.len(), n, "divisor length mismatch");
        let sq = self.self_intersections();
        (0..n)
            .map(|i| &c[(i + n - 1) % n] + &c[(i + 1) % n] + &c[i] * q(sq[i]))
            .collect()
    }

    /// Intersection number of two divisors given by coordinates.
    pub fn pair_divisors(&self, c: &[Q], d: &[Q]) -> Q {
        let deg = self.curve_degrees(d);
        c.iter()
            .zip(&deg)
            .filter(|(x, _)| !x.is_zero())
            .fold(Q::zero(), |acc, (x, y)| acc + x * y)
    }

    pub fn pair_classes(&self, x: &[Q], y: &[Q]) -> Q {
        self.pair_divisors(&self.class_to_divisor(x), &self.class_to_divisor(y))
    }

    /// Dual basis `m_0, m_1` to rays 0 and 1.
    fn dual_pivots(&self) -> [[i64; 2]; 2] {
        let (v0, v1) = (self.rays[0], self.rays[1]);
        [[v1[1], -v1[0]], [-v0[1], v0[0]]]
    }

    /// Reduces divisor coordinates to class coordinates.
    pub fn divisor_to_class(&self, c: &[Q]) -> Vec<Q> {
        assert_eq!(c.len(), self.len(), "divisor length mismatch");
        let [m0, m1] = self.dual_pivots();
        self.rays[2..]
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let i = k + 2;
                let p0 = m0[0] * v[0] + m0[1] * v[1];
                let p1 = m1[0] * v[0] + m1[1] * v[1];
                &c[i] - &c[0] * q(p0) - &c[1] * q(p1)
            })
            .collect()
    }

    /// The representative divisor of a class (zero on rays 0 and 1).
    pub fn class_to_divisor(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.class_rank(), "class length mismatch");
        let mut c = vec![Q::zero(), Q::zero()];
        c.extend_from_slice(x);
        c
    }

    /// Classes of the boundary divisors.
    pub fn boundary_classes(&self) -> Vec<Vec<Q>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut e = vec![Q::zero(); n];
                e[i] = Q::one();
                self.divisor_to_class(&e)
            })
            .collect()
    }

    /// `K = −Σ D_i`.
    pub fn canonical_divisor(&self) -> Vec<Q> {
        vec![-Q::one(); self.len()]
    }

    /// Nef iff the class meets every boundary curve nonnegatively
    /// (equivalently its support function is convex across every wall).
    pub fn is_nef(&self, x: &[Q]) -> bool {
        self.curve_degrees(&self.class_to_divisor(x))
            .iter()
            .all(|d| !d.is_negative())
    }

    /// Membership in the cone spanned by the boundary classes, which is the
    /// pseudoeffective cone of a toric surface.
    pub fn is_psef(&self, x: &[Q]) -> Result<bool> {
        if self.len() > PSEF_RAY_CAP {
            return Err(Error::Capacity {
                what: format!("psef test on {} rays (cap {PSEF_RAY_CAP})", self.len()),
                partial: Vec::new(),
            });
        }
        Ok(lp::cone_contains(&self.boundary_classes(), x))
    }

    /// Extreme rays of the nef cone, as class coordinates.
    ///
    /// A nef class is determined by its nonnegative bendings
    /// `b_i = (D · D_i)`, subject to `Σ b_i v_i = 0`. Extreme solutions have
    /// minimal support: antipodal ray pairs and positively spanning triples.
    pub fn nef_generators(&self) -> Result<Vec<Vec<Q>>> {
        let n = self.len();
        if n > NEF_GENERATOR_RAY_CAP {
            return Err(Error::Capacity {
                what: format!("nef cone enumeration on {n} rays (cap {NEF_GENERATOR_RAY_CAP})"),
                partial: Vec::new(),
            });
        }
        let ginv = self
            .class_gram()
            .inverse()
            .expect("toric intersection form is nondegenerate");
        let v = &self.rays;
        let mut bendings: Vec<Vec<(usize, i128)>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if v[i][0] == -v[j][0] && v[i][1] == -v[j][1] {
                    bendings.push(vec![(i, 1), (j, 1)]);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let dij = det(v[i], v[j]);
                if dij == 0 {
                    continue;
                }
                for k in j + 1..n {
                    let (a, b, c) = (det(v[j], v[k]), det(v[k], v[i]), dij);
                    let positive = a > 0 && b > 0 && c > 0;
                    let negative = a < 0 && b < 0 && c < 0;
                    if positive || negative {
                        let s = if positive { 1 } else { -1 };
                        bendings.push(vec![(i, s * a), (j, s * b), (k, s * c)]);
                    }
                }
            }
        }
        Ok(bendings
            .into_iter()
            .map(|b| {
                let mut rhs = vec![Q::zero(); n - 2];
                for (i, val) in b {
                    if i >= 2 {
                        rhs[i - 2] = Q::from_integer(val.into());
                    }
                }
                ginv.mul_vec(&rhs)
            })
            .collect())
    }

    /// Locates a nonzero lattice vector in the fan.
    pub fn locate(&self, p: Ray) -> Location {
        assert!(p != [0, 0], "cannot locate the origin");
        let n = self.len();
        let at = |k: usize| self.rays[(self.start + k) % n];
        // number of rays with angle <= angle(p), in sorted order
        let mut lo = 0;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if angle_cmp(at(mid), p) != Ordering::Greater {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        // rays sorted from `start`; angle(p) precedes everything → last cone
        let j = if lo == 0 {
            (self.start + n - 1) % n
        } else {
            (self.start + lo - 1) % n
        };
        let u = self.rays[j];
        let v = self.rays[(j + 1) % n];
        let a = det(p, v);
        let b = det(u, p);
        if b == 0 {
            let m = if u[0] != 0 { p[0] / u[0] } else { p[1] / u[1] };
            return Location::OnRay {
                ray: j,
                multiple: m,
            };
        }
        debug_assert!(a > 0 && b > 0);
        Location::Interior {
            cone: j,
            a: a as i64,
            b: b as i64,
        }
    }

    /// Cones (indices `j` of `cone(v_j, v_{j+1})`) whose closure contains `p`.
    pub(crate) fn containing_cones(&self, p: Ray) -> [Option<usize>; 2] {
        let n = self.len();
        match self.locate(p) {
            Location::OnRay { ray, .. } => [Some((ray + n - 1) % n), Some(ray)],
            Location::Interior { cone, .. } => [Some(cone), None],
        }
    }

    /// Inserts `v_i + v_{i+1}` between rays `i` and `i+1`.
    pub fn star_subdivide(&self, i: usize) -> Result<Fan> {
        let n = self.len();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let (u, v) = (self.rays[i], self.rays[(i + 1) % n]);
        let w = [u[0] + v[0], u[1] + v[1]];
        let mut rays = self.rays.clone();
        rays.insert(i + 1, w);
        Fan::new(rays)
    }

    /// True when every ray of `coarse` is a ray of `self`.
    pub fn refines(&self, coarse: &Fan) -> bool {
        coarse.rays.iter().all(|&r| self.index_of(r).is_some())
    }

    /// Smallest star-subdivision refinement containing every ray through the
    /// given vectors. Each inserted ray is the sum of its current neighbours,
    /// so the result is smooth. Returns the refined fan and the insertions in
    /// the order they were performed (cones in cyclic order, each cone
    /// refined top-down).
    pub fn refine_with_rays(&self, targets: &[Ray]) -> Result<(Fan, Vec<Insertion>)> {
        let n = self.len();
        let mut per_cone: Vec<Vec<(i64, i64)>> = vec![Vec::new(); n];
        for &t in targets {
            if let Location::Interior { cone, a, b } = self.locate(t) {
                let g = gcd(a, b);
                per_cone[cone].push((a / g, b / g));
            }
        }
        let mut rays = Vec::with_capacity(n);
        let mut log = Vec::new();
        for (j, mut pts) in per_cone.into_iter().enumerate() {
            rays.push(self.rays[j]);
            pts.sort_unstable();
            pts.dedup();
            if pts.is_empty() {
                continue;
            }
            refine_cone(
                self.rays[j],
                self.rays[(j + 1) % n],
                pts,
                &mut rays,
                &mut log,
            )?;
        }
        if log.is_empty() {
            return Ok((self.clone(), log));
        }
        Ok((Fan::new(rays)?, log))
    }
}

enum Task {
    Split(Ray, Ray, Vec<(i64, i64)>),
    Emit(Ray),
}

/// Stern–Brocot descent inside the unimodular cone `(u, v)`: targets are
/// given in coordinates `(a, b)` with respect to `(u, v)`, `a, b > 0`.
fn refine_cone(
    u: Ray,
    v: Ray,
    pts: Vec<(i64, i64)>,
    rays: &mut Vec<Ray>,
    log: &mut Vec<Insertion>,
) -> Result<()> {
    let mut stack = vec![Task::Split(u, v, pts)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Emit(w) => rays.push(w),
            Task::Split(u, v, pts) => {
                if pts.is_empty() {
                    continue;
                }
                let w = [
                    u[0].checked_add(v[0]).ok_or_else(overflow)?,
                    u[1].checked_add(v[1]).ok_or_else(overflow)?,
                ];
                log.push(Insertion {
                    ray: w,
                    left: u,
                    right: v,
                });
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (a, b) in pts {
                    match a.cmp(&b) {
                        Ordering::Greater => left.push((a - b, b)),
                        Ordering::Less => right.push((a, b - a)),
                        Ordering::Equal => {}
                    }
                }
                // pushed in reverse so the left cone is emitted first
                stack.push(Task::Split(w, v, right));
                stack.push(Task::Emit(w));
                stack.push(Task::Split(u, w, left));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_basics() {
        let f = Fan::p2();
        assert_eq!(f.len(), 3);
        assert_eq!(f.class_rank(), 1);
        assert_eq!(f.self_intersections(), vec![1, 1, 1]);
        assert_eq!(f.class_gram(), QMatrix::identity(1));
    }

    #[test]
    fn blowup_creates_minus_one_curve() {
        let f = Fan::p2().star_subdivide(0).unwrap();
        assert_eq!(f.rays(), &[[1, 0], [1, 1], [0, 1], [-1, -1]]);
        assert_eq!(f.self_intersections()[1], -1);
        assert_eq!(f.class_gram().inertia(), (1, 1, 0));
        let all = f.star_subdivide(2).unwrap().star_subdivide(4).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all.class_rank(), 4);
    }

    #[test]
    fn invalid_fans_rejected() {
        assert!(Fan::new(vec![[1, 0], [0, 1]]).is_err());
        assert!(Fan::new(vec![[2, 0], [0, 1], [-1, -1]]).is_err());
        assert!(Fan::new(vec![[1, 0], [-1, -1], [0, 1]]).is_err());
        // winds twice
        let twice = vec![[1, 0], [0, 1], [-1, -1], [1, 0], [0, 1], [-1, -1]];
        assert!(Fan::new(twice).is_err());
        assert!(matches!(
            Fan::p2().star_subdivide(3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn locate_points() {
        let f = Fan::p2();
        assert_eq!(
            f.locate([3, 0]),
            Location::OnRay {
                ray: 0,
                multiple: 3
            }
        );
        assert_eq!(
            f.locate([2, 5]),
            Location::Interior {
                cone: 0,
                a: 2,
                b: 5
            }
        );
        assert_eq!(
            f.locate([-1, 2]),
            Location::Interior {
                cone: 1,
                a: 3,
                b: 1
            }
        );
        assert_eq!(
            f.locate([1, -2]),
            Location::Interior {
                cone: 2,
                a: 2,
                b: 3
            }
        );
        assert_eq!(
            f.locate([-2, -2]),
            Location::OnRay {
                ray: 2,
                multiple: 2
            }
        );
    }

    #[test]
    fn refine_inserts_stern_brocot_rays() {
        let (f, log) = Fan::p2().refine_with_rays(&[[2, 3]]).unwrap();
        assert!(f.index_of([2, 3]).is_some());
        assert_eq!(log[0].ray, [1, 1]);
        for ins in &log {
            assert_eq!(
                ins.ray,
                [ins.left[0] + ins.right[0], ins.left[1] + ins.right[1]]
            );
        }
        assert_eq!(f.len(), 3 + log.len());
    }

    #[test]
    fn canonical_class_of_plane() {
        let f = Fan::p2();
        let k = f.divisor_to_class(&f.canonical_divisor());
        assert_eq!(k, vec![q(-3)]);
    }

    #[test]
    fn nef_and_psef_on_plane_and_blowup() {
        let f = Fan::p2();
        for a in -3..=3 {
            assert_eq!(f.is_nef(&[q(a)]), a >= 0);
        }
        let b = f.star_subdivide(0).unwrap();
        let mut e = vec![q(0); 4];
        e[1] = q(1);
        let ec = b.divisor_to_class(&e);
        assert!(b.is_psef(&ec).unwrap());
        assert!(!b.is_nef(&ec));
        assert_eq!(b.pair_classes(&ec, &ec), q(-1));
    }

    #[test]
    fn nef_generators_are_nef_and_span_edges() {
        let f = Fan::p2()
            .star_subdivide(0)
            .unwrap()
            .star_subdivide(2)
            .unwrap();
        let gens = f.nef_generators().unwrap();
        assert!(!gens.is_empty());
        for g in &gens {
            assert!(f.is_nef(g));
        }
        // P2 has a single generator, H
        assert_eq!(Fan::p2().nef_generators().unwrap(), vec![vec![q(1)]]);
    }
}
