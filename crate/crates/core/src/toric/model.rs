//! Toric blowups of the plane viewed as models in the prime tree.
//!
//! Every refinement of the plane's fan by star subdivisions is a sequence of
//! point blowups; each inserted ray is an exceptional prime. The total
//! transform `α_E` of the prime created between rays `u` and `v` has support
//! function `min(a, b)` at `a u + b v` inside `cone(u, v)` and zero
//! elsewhere; the line class has support function `max(0, −x, −y)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::fan::{det, Fan, Insertion, Ray};
use super::MonomialMatrix;
use crate::classlat::{BaseLattice, ClassVector, ExcPrime, PrimeId, PrimeSet, PrimeTree};
use crate::error::{Error, Result};
use crate::rational::q;
use crate::Q;

#[derive(Clone, Debug)]
pub struct ToricModel {
    fan: Fan,
    tree: PrimeTree,
    /// Prime on each ray; `None` for the three lines of the plane.
    ray_primes: Vec<Option<PrimeId>>,
    origins: BTreeMap<PrimeId, (Ray, Ray)>,
}

pub fn prime_id(r: Ray) -> PrimeId {
    format!("E[{},{}]", r[0], r[1])
}

fn point_label(u: Ray, v: Ray) -> String {
    format!("p[{},{};{},{}]", u[0], u[1], v[0], v[1])
}

impl ToricModel {
    pub fn p2() -> ToricModel {
        ToricModel {
            fan: Fan::p2(),
            tree: PrimeTree::new(Arc::new(BaseLattice::p2())),
            ray_primes: vec![None; 3],
            origins: BTreeMap::new(),
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn tree(&self) -> &PrimeTree {
        &self.tree
    }

    /// The primes of this model (a lower set of its tree).
    pub fn prime_set(&self) -> PrimeSet {
        self.tree.all_ids()
    }

    pub fn ray_prime(&self, i: usize) -> Option<&PrimeId> {
        self.ray_primes[i].as_ref()
    }

    fn apply_insertions(&self, fan: Fan, log: &[Insertion]) -> Result<ToricModel> {
        let mut tree = self.tree.clone();
        let mut origins = self.origins.clone();
        for ins in log {
            let id = prime_id(ins.ray);
            let parent = [ins.left, ins.right]
                .iter()
                .filter_map(|r| tree.get(&prime_id(*r)).cloned())
                .max_by_key(|p| tree.position(&p.id));
            let prime = match parent {
                Some(p) => ExcPrime::over_prime(id.clone(), &p),
                None => ExcPrime::over_base(id.clone(), point_label(ins.left, ins.right)),
            };
            tree.push(prime)?;
            origins.insert(id, (ins.left, ins.right));
        }
        let ray_primes = fan
            .rays()
            .iter()
            .map(|&r| {
                let id = prime_id(r);
                tree.contains(&id).then_some(id)
            })
            .collect();
        Ok(ToricModel {
            fan,
            tree,
            ray_primes,
            origins,
        })
    }

    pub fn star_subdivide(&self, i: usize) -> Result<ToricModel> {
        let fan = self.fan.star_subdivide(i)?;
        let n = self.fan.len();
        let (left, right) = (self.fan.ray(i), self.fan.ray((i + 1) % n));
        let ins = Insertion {
            ray: [left[0] + right[0], left[1] + right[1]],
            left,
            right,
        };
        self.apply_insertions(fan, &[ins])
    }

    /// Refinement on which `A` is holomorphic into `target`.
    pub fn refine_for_matrix(&self, a: &MonomialMatrix, target: &Fan) -> Result<ToricModel> {
        let pre = target
            .rays()
            .iter()
            .map(|&w| a.preimage_ray(w))
            .collect::<Result<Vec<_>>>()?;
        let (fan, log) = self.fan.refine_with_rays(&pre)?;
        super::check_holomorphic(a, &fan, target).map_err(|e| Error::Invariant(e.to_string()))?;
        self.apply_insertions(fan, &log)
    }

    /// `X_0 = P²`, `X_{k+1}` the refinement of `X_k` on which `A` is
    /// holomorphic as a map `X_{k+1} → X_k`. Returns `depth + 1` models.
    pub fn tower(a: &MonomialMatrix, depth: usize, ray_cap: usize) -> Result<Vec<ToricModel>> {
        let mut out = vec![ToricModel::p2()];
        for _ in 0..depth {
            let last = out.last().expect("nonempty");
            let next = last.refine_for_matrix(a, last.fan())?;
            if next.fan.len() > ray_cap {
                return Err(Error::Capacity {
                    what: format!("tower level has {} rays (cap {ray_cap})", next.fan.len()),
                    partial: Vec::new(),
                });
            }
            out.push(next);
        }
        Ok(out)
    }

    /// Divisor coordinates of the line class.
    pub fn hyperplane_divisor(&self) -> Vec<Q> {
        self.fan
            .rays()
            .iter()
            .map(|r| q(0.max(-r[0]).max(-r[1])))
            .collect()
    }

    /// Divisor coordinates of the total transform `α_E`.
    pub fn prime_divisor(&self, id: &str) -> Result<Vec<Q>> {
        let &(u, v) = self
            .origins
            .get(id)
            .ok_or_else(|| Error::AmbientMismatch(format!("prime {id} not on this model")))?;
        Ok(self
            .fan
            .rays()
            .iter()
            .map(|&r| {
                let a = det(r, v);
                let b = det(u, r);
                if a >= 0 && b >= 0 {
                    Q::from_integer(a.min(b).into())
                } else {
                    Q::zero()
                }
            })
            .collect())
    }

    /// Expresses a class (class coordinates on this fan) in the line plus
    /// `α_E` basis.
    pub fn class_to_vector(&self, x: &[Q]) -> Result<ClassVector> {
        let d = self.fan.class_to_divisor(x);
        let deg = self.fan.curve_degrees(&d);
        let pair = |c: &[Q]| {
            c.iter()
                .zip(&deg)
                .filter(|(a, _)| !a.is_zero())
                .fold(Q::zero(), |acc, (a, b)| acc + a * b)
        };
        let mut out = ClassVector::from_base(vec![pair(&self.hyperplane_divisor())]);
        for p in self.tree.primes() {
            let c = -pair(&self.prime_divisor(&p.id)?);
            out.set_exc(&p.id, c);
        }
        Ok(out)
    }

    /// Inverse of [`class_to_vector`](Self::class_to_vector).
    pub fn vector_to_class(&self, c: &ClassVector) -> Result<Vec<Q>> {
        self.tree.check_class(c)?;
        let mut d: Vec<Q> = self
            .hyperplane_divisor()
            .into_iter()
            .map(|h| h * &c.base[0])
            .collect();
        for (id, coef) in &c.exc {
            for (x, e) in d.iter_mut().zip(self.prime_divisor(id)?) {
                *x += e * coef;
            }
        }
        Ok(self.fan.divisor_to_class(&d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classlat::Parent;

    #[test]
    fn one_blowup_matches_class_calculus() {
        let m = ToricModel::p2().star_subdivide(0).unwrap();
        let id = prime_id([1, 1]);
        let e = m.fan.divisor_to_class(&m.prime_divisor(&id).unwrap());
        assert_eq!(m.fan.pair_classes(&e, &e), q(-1));
        let v = m.class_to_vector(&e).unwrap();
        assert_eq!(v, ClassVector::prime(1, &id));
        let h = m.fan.divisor_to_class(&m.hyperplane_divisor());
        assert_eq!(m.fan.pair_classes(&h, &h), q(1));
        assert_eq!(m.fan.pair_classes(&h, &e), q(0));
    }

    #[test]
    fn canonical_class_matches_class_calculus() {
        let m = ToricModel::p2()
            .star_subdivide(0)
            .unwrap()
            .star_subdivide(0)
            .unwrap()
            .star_subdivide(3)
            .unwrap();
        let k = m.fan.divisor_to_class(&m.fan.canonical_divisor());
        let kv = m.class_to_vector(&k).unwrap();
        assert_eq!(kv, m.tree.canonical_class(&m.prime_set()).unwrap());
    }

    #[test]
    fn parents_follow_infinitely_near_points() {
        let m = ToricModel::p2().star_subdivide(0).unwrap();
        // rays (1,0),(1,1),(0,1),(-1,-1); blow up between (1,0) and (1,1)
        let m2 = m.star_subdivide(0).unwrap();
        let p = m2.tree.get(&prime_id([2, 1])).unwrap();
        assert_eq!(p.parent, Parent::Prime(prime_id([1, 1])));
        assert_eq!(p.level, 1);
        let base = m2.tree.get(&prime_id([1, 1])).unwrap();
        assert!(matches!(base.parent, Parent::BasePoint(_)));
    }

    #[test]
    fn round_trip_conversion() {
        let a = MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap();
        let tower = ToricModel::tower(&a, 2, 10_000).unwrap();
        let m = &tower[2];
        for k in 0..m.fan.class_rank() {
            let mut x = vec![q(0); m.fan.class_rank()];
            x[k] = q(1);
            let v = m.class_to_vector(&x).unwrap();
            assert_eq!(m.vector_to_class(&v).unwrap(), x);
            assert_eq!(m.tree.pair(&v, &v).unwrap(), m.fan.pair_classes(&x, &x));
        }
    }
}
