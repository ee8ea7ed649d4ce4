//! Holomorphic lifts of monomial maps and the induced class operators.

use num_traits::{One, Zero};

use super::fan::{Fan, Location, Ray};
use super::MonomialMatrix;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::q;
use crate::Q;

/// A linear operator on class coordinates induced by a toric morphism
/// `source → target`. For a pullback the matrix maps target classes to
/// source classes; for a pushforward the other way round.
#[derive(Clone, Debug, PartialEq)]
pub struct ToricClassMatrix {
    pub source: Fan,
    pub target: Fan,
    pub matrix: QMatrix,
}

fn images(a: &MonomialMatrix, src: &Fan) -> Result<Vec<Ray>> {
    src.rays().iter().map(|&v| a.apply_ray(v)).collect()
}

/// True when `A` maps every cone of `src` into a single cone of `tgt`.
pub fn is_holomorphic(a: &MonomialMatrix, src: &Fan, tgt: &Fan) -> bool {
    check_holomorphic(a, src, tgt).is_ok()
}

pub fn check_holomorphic(a: &MonomialMatrix, src: &Fan, tgt: &Fan) -> Result<()> {
    let img = images(a, src)?;
    let n = img.len();
    for i in 0..n {
        let c1 = tgt.containing_cones(img[i]);
        let c2 = tgt.containing_cones(img[(i + 1) % n]);
        let shared = c1.iter().flatten().any(|c| c2.contains(&Some(*c)));
        if !shared {
            return Err(Error::NotHolomorphic(format!(
                "cone ({:?}, {:?}) is not mapped into a single target cone",
                src.ray(i),
                src.ray(i + 1)
            )));
        }
    }
    Ok(())
}

/// Refines `source` by star subdivisions until `A` maps each cone into a cone
/// of `target`: the preimage directions of the target rays are inserted,
/// each by its Stern–Brocot chain.
pub fn refine_for_matrix(a: &MonomialMatrix, source: &Fan, target: &Fan) -> Result<Fan> {
    let pre = target
        .rays()
        .iter()
        .map(|&w| a.preimage_ray(w))
        .collect::<Result<Vec<_>>>()?;
    let (fan, _) = source.refine_with_rays(&pre)?;
    check_holomorphic(a, &fan, target).map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(fan)
}

/// Pulls back divisor coordinates on `tgt`: the coefficient on a source ray
/// `v` is the target support function evaluated at `A v`.
pub fn pullback_divisor(a: &MonomialMatrix, src: &Fan, tgt: &Fan, c: &[Q]) -> Result<Vec<Q>> {
    check_holomorphic(a, src, tgt)?;
    let locs = locations(a, src, tgt)?;
    Ok(pull_with(&locs, tgt.len(), c))
}

fn locations(a: &MonomialMatrix, src: &Fan, tgt: &Fan) -> Result<Vec<Location>> {
    Ok(images(a, src)?.into_iter().map(|p| tgt.locate(p)).collect())
}

fn pull_with(locs: &[Location], n_tgt: usize, c: &[Q]) -> Vec<Q> {
    locs.iter()
        .map(|loc| match *loc {
            Location::OnRay { ray, multiple } => &c[ray] * q(multiple),
            Location::Interior { cone, a, b } => &c[cone] * q(a) + &c[(cone + 1) % n_tgt] * q(b),
        })
        .collect()
}

/// Pushes forward divisor coordinates on `src`: a boundary curve mapping
/// onto the curve of `w_j` (with `A v = m w_j`) goes to `(|det A| / m) D_j`;
/// a curve mapping into the interior of a cone is contracted.
pub fn pushforward_divisor(a: &MonomialMatrix, src: &Fan, tgt: &Fan, c: &[Q]) -> Result<Vec<Q>> {
    check_holomorphic(a, src, tgt)?;
    let locs = locations(a, src, tgt)?;
    Ok(push_with(&locs, tgt.len(), a.det().unsigned_abs(), c))
}

fn push_with(locs: &[Location], n_tgt: usize, det: u128, c: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); n_tgt];
    let det = Q::from_integer((det as i128).into());
    for (coef, loc) in c.iter().zip(locs) {
        if coef.is_zero() {
            continue;
        }
        if let Location::OnRay { ray, multiple } = *loc {
            out[ray] += coef * &det / q(multiple);
        }
    }
    out
}

/// Pullback on class coordinates, `Pic(target) → Pic(source)`.
pub fn pullback_matrix(a: &MonomialMatrix, src: &Fan, tgt: &Fan) -> Result<ToricClassMatrix> {
    check_holomorphic(a, src, tgt)?;
    let locs = locations(a, src, tgt)?;
    let (rs, rt) = (src.class_rank(), tgt.class_rank());
    let mut m = QMatrix::zeros(rs, rt);
    for k in 0..rt {
        let mut e = vec![Q::zero(); rt];
        e[k] = Q::one();
        let pulled = pull_with(&locs, tgt.len(), &tgt.class_to_divisor(&e));
        for (r, v) in src.divisor_to_class(&pulled).into_iter().enumerate() {
            m[(r, k)] = v;
        }
    }
    Ok(ToricClassMatrix {
        source: src.clone(),
        target: tgt.clone(),
        matrix: m,
    })
}

/// Pushforward on class coordinates, `Pic(source) → Pic(target)`, computed
/// from the geometry of the boundary curves (not by transposition), so that
/// adjointness with the pullback is a genuine check.
pub fn pushforward_matrix(a: &MonomialMatrix, src: &Fan, tgt: &Fan) -> Result<ToricClassMatrix> {
    check_holomorphic(a, src, tgt)?;
    let locs = locations(a, src, tgt)?;
    let (rs, rt) = (src.class_rank(), tgt.class_rank());
    let det = a.det().unsigned_abs();
    let mut m = QMatrix::zeros(rt, rs);
    for k in 0..rs {
        let mut e = vec![Q::zero(); rs];
        e[k] = Q::one();
        let pushed = push_with(&locs, tgt.len(), det, &src.class_to_divisor(&e));
        for (r, v) in tgt.divisor_to_class(&pushed).into_iter().enumerate() {
            m[(r, k)] = v;
        }
    }
    Ok(ToricClassMatrix {
        source: src.clone(),
        target: tgt.clone(),
        matrix: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(e: [i64; 4]) -> MonomialMatrix {
        MonomialMatrix::from_entries(e).unwrap()
    }

    #[test]
    fn identity_needs_no_refinement() {
        let p2 = Fan::p2();
        let f = refine_for_matrix(&MonomialMatrix::identity(), &p2, &p2).unwrap();
        assert_eq!(f, p2);
        let pb = pullback_matrix(&MonomialMatrix::identity(), &p2, &p2).unwrap();
        assert_eq!(pb.matrix, QMatrix::identity(1));
    }

    #[test]
    fn fibonacci_map_is_not_holomorphic_on_plane() {
        let a = mm([2, 1, 1, 1]);
        let p2 = Fan::p2();
        assert!(!is_holomorphic(&a, &p2, &p2));
        assert!(matches!(
            pullback_matrix(&a, &p2, &p2),
            Err(Error::NotHolomorphic(_))
        ));
        let src = refine_for_matrix(&a, &p2, &p2).unwrap();
        assert!(is_holomorphic(&a, &src, &p2));
    }

    #[test]
    fn degree_of_pullback_of_line() {
        let a = mm([2, 1, 1, 1]);
        let p2 = Fan::p2();
        let src = refine_for_matrix(&a, &p2, &p2).unwrap();
        let pb = pullback_matrix(&a, &src, &p2).unwrap();
        let push = pushforward_matrix(&MonomialMatrix::identity(), &src, &p2).unwrap();
        let h = vec![q(1)];
        let deg = push.matrix.mul_vec(&pb.matrix.mul_vec(&h));
        assert_eq!(deg, vec![q(3)]);
    }
}
