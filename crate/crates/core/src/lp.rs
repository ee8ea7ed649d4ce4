//! Exact cone membership: decide whether `v = Σ λ_j g_j` with `λ ≥ 0` by a
//! phase-one simplex over the rationals (Bland's rule, so it terminates).

use num_traits::{Signed, Zero};

use crate::rational::Q;

/// Returns nonnegative coefficients expressing `v` in the cone spanned by
/// `generators`, or `None` if `v` lies outside it.
pub fn cone_combination(generators: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let m = v.len();
    let n = generators.len();
    if v.iter().all(|x| x.is_zero()) {
        return Some(vec![Q::zero(); n]);
    }
    if n == 0 {
        return None;
    }
    debug_assert!(generators.iter().all(|g| g.len() == m));

    let width = n + m + 1;
    let rhs = width - 1;
    // rows 0..m constraints, row m objective (sum of artificials)
    let mut t = vec![vec![Q::zero(); width]; m + 1];
    for i in 0..m {
        let flip = v[i].is_negative();
        for (j, g) in generators.iter().enumerate() {
            t[i][j] = if flip { -g[i].clone() } else { g[i].clone() };
        }
        t[i][n + i] = Q::from_integer(1.into());
        t[i][rhs] = v[i].abs();
    }
    for j in 0..width {
        if (n..n + m).contains(&j) {
            continue;
        }
        let s = (0..m).fold(Q::zero(), |acc, i| acc + &t[i][j]);
        t[m][j] = -s;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // unbounded cannot happen in phase one (objective bounded below by 0)
        let (row, _) = leave?;
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }

    if !t[m][rhs].is_zero() {
        return None;
    }
    let mut lambda = vec![Q::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            lambda[b] = t[i][rhs].clone();
        }
    }
    Some(lambda)
}

pub fn cone_contains(generators: &[Vec<Q>], v: &[Q]) -> bool {
    cone_combination(generators, v).is_some()
}

fn pivot(t: &mut [Vec<Q>], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        *x *= &inv;
    }
    let prow = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, p) in r.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= p * &f;
            }
        }
    }
}
