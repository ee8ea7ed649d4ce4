//! Greatest common divisors of integer polynomials.
//!
//! Homogeneous inputs are stripped of their common monomial factor and
//! dehomogenized at `Z = 1`; the bivariate gcd is computed modulo word-size
//! primes (evaluation in `x`, univariate gcds in `y`, interpolation), lifted
//! by Chinese remaindering and certified by exact division over the
//! integers. Unlucky primes or evaluation points can only enlarge the
//! modular image, so images of minimal leading monomial are kept.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Exp;
use crate::error::{Error, Result};

/// Homogeneous integer polynomial (degree implicit in the exponents).
pub(crate) type ZPoly = BTreeMap<Exp, BigInt>;
/// Bivariate integer polynomial keyed by `(deg_y, deg_x)`, so the last key is
/// the lexicographic leading monomial with `y > x`.
pub(crate) type Z2 = BTreeMap<(u32, u32), BigInt>;

type Up = Vec<u64>;
type Bp = Vec<Up>;

const MAX_PRIMES: usize = 400;

// ---------- modular scalars ----------

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powm(a, p - 2, p)
}

pub(crate) fn modp(c: &BigInt, p: u64) -> u64 {
    let r = (c.magnitude() % p).to_u64().expect("residue fits");
    if c.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // deterministic for n < 3.4e14
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^31`, largest first.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    (1u64..(1 << 31))
        .rev()
        .filter(|&n| n % 2 == 1 && is_prime(n))
}

// ---------- univariate over F_p ----------

fn trim(a: &mut Up) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn up_eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| addm(mulm(acc, x, p), c, p))
}

fn up_scale(a: &[u64], s: u64, p: u64) -> Up {
    let mut r: Up = a.iter().map(|&c| mulm(c, s, p)).collect();
    trim(&mut r);
    r
}

fn up_mul(a: &[u64], b: &[u64], p: u64) -> Up {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = addm(r[i + j], mulm(x, y, p), p);
        }
    }
    trim(&mut r);
    r
}

fn up_divrem(a: &[u64], b: &[u64], p: u64) -> (Up, Up) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = invm(b[db], p);
    let mut q = vec![0; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let f = mulm(*r.last().unwrap(), inv, p);
        q[k] = f;
        if f != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[k + i] = subm(r[k + i], mulm(c, f, p), p);
            }
        }
        r.pop();
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

fn up_monic(a: &[u64], p: u64) -> Up {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => up_scale(a, invm(lc, p), p),
    }
}

fn up_gcd(a: &[u64], b: &[u64], p: u64) -> Up {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = up_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    up_monic(&a, p)
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn up_interp(xs: &[u64], ys: &[u64], p: u64) -> Up {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = subm(c[i], c[i - 1], p);
            let den = subm(xs[i], xs[i - j], p);
            c[i] = mulm(num, invm(den, p), p);
        }
    }
    let mut acc: Up = Vec::new();
    for i in (0..n).rev() {
        // acc = acc * (x - xs[i]) + c[i]
        let mut next = vec![0; acc.len() + 1];
        for (k, &a) in acc.iter().enumerate() {
            next[k + 1] = addm(next[k + 1], a, p);
            next[k] = subm(next[k], mulm(a, xs[i], p), p);
        }
        next[0] = addm(next[0], c[i], p);
        trim(&mut next);
        acc = next;
    }
    acc
}

// ---------- bivariate over F_p: polynomials in y with F_p[x] coefficients ----------

fn bp_trim(a: &mut Bp) {
    while a.last().is_some_and(|c| c.is_empty()) {
        a.pop();
    }
}

fn bp_content(a: &Bp, p: u64) -> Up {
    let mut g: Up = Vec::new();
    for c in a {
        g = up_gcd(&g, c, p);
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn bp_div_up(a: &Bp, c: &[u64], p: u64) -> Bp {
    a.iter()
        .map(|x| {
            let (q, r) = up_divrem(x, c, p);
            debug_assert!(r.is_empty());
            q
        })
        .collect()
}

fn bp_eval_x(a: &Bp, alpha: u64, p: u64) -> Up {
    let mut r: Up = a.iter().map(|c| up_eval(c, alpha, p)).collect();
    trim(&mut r);
    r
}

fn bp_deg_x(a: &Bp) -> usize {
    a.iter()
        .map(|c| c.len().saturating_sub(1))
        .max()
        .unwrap_or(0)
}

/// Exact divisibility of `a` by `h` in `F_p[x][y]`.
fn bp_divides(h: &Bp, a: &Bp, p: u64) -> bool {
    let dh = h.len() - 1;
    let lh = &h[dh];
    let mut r = a.clone();
    bp_trim(&mut r);
    while r.len() > dh {
        let k = r.len() - 1 - dh;
        let (q, rem) = up_divrem(r.last().unwrap(), lh, p);
        if !rem.is_empty() {
            return false;
        }
        for (i, hc) in h.iter().enumerate() {
            let prod = up_mul(hc, &q, p);
            let slot = &mut r[k + i];
            if slot.len() < prod.len() {
                slot.resize(prod.len(), 0);
            }
            for (s, v) in slot.iter_mut().zip(&prod) {
                *s = subm(*s, *v, p);
            }
            trim(slot);
        }
        bp_trim(&mut r);
    }
    r.is_empty()
}

/// Gcd in `F_p[x, y]`, up to a nonzero scalar; `None` if the prime looks
/// unlucky.
fn gcd_mod_p(a: &Bp, b: &Bp, p: u64) -> Option<Bp> {
    let ca = bp_content(a, p);
    let cb = bp_content(b, p);
    let c = up_gcd(&ca, &cb, p);
    let a1 = bp_div_up(a, &ca, p);
    let b1 = bp_div_up(b, &cb, p);
    if a1.len() == 1 || b1.len() == 1 {
        return Some(vec![c]);
    }
    let la = a1.last().unwrap();
    let lb = b1.last().unwrap();
    let gamma = up_gcd(la, lb, p);
    let bound = bp_deg_x(&a1).min(bp_deg_x(&b1)) + gamma.len() - 1;
    let need = bound + 2;
    let mut images: Vec<(u64, Up)> = Vec::new();
    let mut min_deg = usize::MAX;
    let limit = (4 * need as u64 + 64).min(p - 1);
    for alpha in 1..=limit {
        if up_eval(la, alpha, p) == 0 || up_eval(lb, alpha, p) == 0 {
            continue;
        }
        let g = up_gcd(&bp_eval_x(&a1, alpha, p), &bp_eval_x(&b1, alpha, p), p);
        let d = g.len() - 1;
        if d == 0 {
            return Some(vec![c]);
        }
        if d > min_deg {
            continue;
        }
        if d < min_deg {
            images.clear();
            min_deg = d;
        }
        images.push((alpha, up_scale(&g, up_eval(&gamma, alpha, p), p)));
        if images.len() < need {
            continue;
        }
        let xs: Vec<u64> = images[..bound + 1].iter().map(|(x, _)| *x).collect();
        let mut h: Bp = (0..=min_deg)
            .map(|j| {
                let ys: Vec<u64> = images[..bound + 1]
                    .iter()
                    .map(|(_, g)| g.get(j).copied().unwrap_or(0))
                    .collect();
                up_interp(&xs, &ys, p)
            })
            .collect();
        let consistent = images[bound + 1..].iter().all(|(x, g)| {
            (0..=min_deg).all(|j| up_eval(&h[j], *x, p) == g.get(j).copied().unwrap_or(0))
        });
        bp_trim(&mut h);
        if consistent && !h.is_empty() {
            let hc = bp_content(&h, p);
            let h = bp_div_up(&h, &hc, p);
            if bp_divides(&h, &a1, p) && bp_divides(&h, &b1, p) {
                return Some(h.iter().map(|x| up_mul(x, &c, p)).collect());
            }
        }
        images.remove(0);
    }
    None
}

fn reduce(a: &Z2, p: u64) -> Bp {
    let dy = a.keys().map(|k| k.0).max().unwrap_or(0) as usize;
    let mut out: Bp = vec![Vec::new(); dy + 1];
    for (&(y, x), c) in a {
        let slot = &mut out[y as usize];
        if slot.len() <= x as usize {
            slot.resize(x as usize + 1, 0);
        }
        slot[x as usize] = modp(c, p);
    }
    for s in out.iter_mut() {
        trim(s);
    }
    bp_trim(&mut out);
    out
}

fn bp_to_map(a: &Bp) -> BTreeMap<(u32, u32), u64> {
    let mut m = BTreeMap::new();
    for (y, c) in a.iter().enumerate() {
        for (x, &v) in c.iter().enumerate() {
            if v != 0 {
                m.insert((y as u32, x as u32), v);
            }
        }
    }
    m
}

// ---------- integer bivariate ----------

fn content(a: &Z2) -> BigInt {
    let mut g = BigInt::zero();
    for c in a.values() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(a: &Z2) -> Z2 {
    let g = content(a);
    if g.is_zero() || g.is_one() {
        return a.clone();
    }
    a.iter().map(|(k, c)| (*k, c / &g)).collect()
}

fn lead(a: &Z2) -> (&(u32, u32), &BigInt) {
    a.iter().next_back().expect("nonzero polynomial")
}

/// `a / b` if `b` divides `a` exactly over the integers.
pub(crate) fn z2_div_exact(a: &Z2, b: &Z2) -> Option<Z2> {
    let (&lk, lc) = lead(b);
    let mut r = a.clone();
    let mut q = Z2::new();
    while let Some((&rk, rc)) = r.iter().next_back() {
        if rk.0 < lk.0 || rk.1 < lk.1 {
            return None;
        }
        let (qc, rem) = rc.div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        let qk = (rk.0 - lk.0, rk.1 - lk.1);
        for (bk, bc) in b {
            let key = (bk.0 + qk.0, bk.1 + qk.1);
            let v = r.entry(key).or_insert_with(BigInt::zero);
            *v -= &qc * bc;
            if v.is_zero() {
                r.remove(&key);
            }
        }
        q.insert(qk, qc);
    }
    Some(q)
}

/// Cheap certificate that `a` and `b` have no common factor: univariate
/// images in `y` (at `x = α`) and in `x` (at `y = β`) are coprime with the
/// leading coefficients preserved.
fn coprime_certificate(a: &Z2, b: &Z2, p: u64) -> bool {
    let ra = reduce(a, p);
    let rb = reduce(b, p);
    if ra.is_empty() || rb.is_empty() {
        return false;
    }
    let y_ok = (1..8u64).any(|alpha| {
        up_eval(ra.last().unwrap(), alpha, p) != 0
            && up_eval(rb.last().unwrap(), alpha, p) != 0
            && up_gcd(&bp_eval_x(&ra, alpha, p), &bp_eval_x(&rb, alpha, p), p).len() == 1
    });
    if !y_ok {
        return false;
    }
    // swap roles of x and y
    let swap = |m: &Z2| -> Z2 { m.iter().map(|(&(y, x), c)| ((x, y), c.clone())).collect() };
    let sa = reduce(&swap(a), p);
    let sb = reduce(&swap(b), p);
    (1..8u64).any(|beta| {
        up_eval(sa.last().unwrap(), beta, p) != 0
            && up_eval(sb.last().unwrap(), beta, p) != 0
            && up_gcd(&bp_eval_x(&sa, beta, p), &bp_eval_x(&sb, beta, p), p).len() == 1
    })
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Primitive gcd over the integers of two nonzero bivariate polynomials
/// (sign normalized so the leading coefficient is positive).
pub(crate) fn gcd_z2(a: &Z2, b: &Z2) -> Result<Z2> {
    let one: Z2 = [((0, 0), BigInt::one())].into_iter().collect();
    let a = primitive(a);
    let b = primitive(b);
    if a.len() == 1 || b.len() == 1 {
        // the divisors of a monomial are monomials
        let min_y = a.keys().chain(b.keys()).map(|k| k.0).min().unwrap();
        let min_x = a.keys().chain(b.keys()).map(|k| k.1).min().unwrap();
        return Ok([((min_y, min_x), BigInt::one())].into_iter().collect());
    }
    let gamma = lead(&a).1.gcd(lead(&b).1);
    let mut acc: Option<(Z2, BigInt, (u32, u32))> = None;
    for (count, p) in primes().enumerate() {
        if count >= MAX_PRIMES {
            break;
        }
        if modp(lead(&a).1, p) == 0 || modp(lead(&b).1, p) == 0 {
            continue;
        }
        if coprime_certificate(&a, &b, p) {
            return Ok(one);
        }
        let Some(g) = gcd_mod_p(&reduce(&a, p), &reduce(&b, p), p) else {
            continue;
        };
        let gm = bp_to_map(&g);
        let (&gk, &glc) = gm.iter().next_back().expect("gcd image nonzero");
        if gk == (0, 0) {
            return Ok(one);
        }
        let s = mulm(modp(&gamma, p), invm(glc, p), p);
        let image: BTreeMap<(u32, u32), u64> =
            gm.into_iter().map(|(k, v)| (k, mulm(v, s, p))).collect();
        let pb = BigInt::from(p);
        match &mut acc {
            Some((_, _, key)) if gk > *key => continue,
            Some((cur, m, key)) if gk == *key => {
                // Chinese remaindering, coefficientwise
                let inv_m = BigInt::from(invm(modp(m, p), p));
                let keys: Vec<(u32, u32)> = cur.keys().chain(image.keys()).copied().collect();
                let mut next = Z2::new();
                for k in keys {
                    let old = cur.get(&k).cloned().unwrap_or_else(BigInt::zero);
                    let new = BigInt::from(image.get(&k).copied().unwrap_or(0));
                    let t = ((new - &old) * &inv_m).mod_floor(&pb);
                    let v = old + &t * &*m;
                    if !v.is_zero() {
                        next.insert(k, v);
                    }
                }
                let nm = &*m * &pb;
                let sym_old: Z2 = cur.iter().map(|(k, v)| (*k, symmetric(v, m))).collect();
                let sym_new: Z2 = next
                    .iter()
                    .map(|(k, v)| (*k, symmetric(v, &nm)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                *cur = next;
                *m = nm;
                if sym_old == sym_new {
                    let cand = primitive(&sym_new);
                    if z2_div_exact(&a, &cand).is_some() && z2_div_exact(&b, &cand).is_some() {
                        let sign = lead(&cand).1.is_negative();
                        return Ok(if sign {
                            cand.into_iter().map(|(k, v)| (k, -v)).collect()
                        } else {
                            cand
                        });
                    }
                }
            }
            _ => {
                let cur: Z2 = image
                    .into_iter()
                    .map(|(k, v)| (k, BigInt::from(v)))
                    .collect();
                acc = Some((cur, pb, gk));
            }
        }
    }
    Err(Error::Invariant("modular gcd did not stabilize".into()))
}

pub(crate) fn dehomogenize(p: &ZPoly) -> Z2 {
    p.iter().map(|(e, c)| ((e[1], e[0]), c.clone())).collect()
}

pub(crate) fn rehomogenize(a: &Z2, degree: u32) -> ZPoly {
    a.iter()
        .map(|(&(y, x), c)| ([x, y, degree - x - y], c.clone()))
        .collect()
}

/// Largest monomial dividing every nonzero input.
pub(crate) fn monomial_content(polys: &[ZPoly]) -> Exp {
    let mut m = [u32::MAX; 3];
    for p in polys {
        for e in p.keys() {
            for i in 0..3 {
                m[i] = m[i].min(e[i]);
            }
        }
    }
    if m[0] == u32::MAX {
        [0; 3]
    } else {
        m
    }
}

/// Divides homogeneous polynomials of common degree `degree` by their full
/// common factor; returns the quotients and their degree.
pub(crate) fn remove_common_factor(polys: &[ZPoly], degree: u32) -> Result<(Vec<ZPoly>, u32)> {
    let m = monomial_content(polys);
    let mdeg = m[0] + m[1] + m[2];
    let stripped: Vec<ZPoly> = polys
        .iter()
        .map(|p| {
            p.iter()
                .map(|(e, c)| ([e[0] - m[0], e[1] - m[1], e[2] - m[2]], c.clone()))
                .collect()
        })
        .collect();
    let degree = degree - mdeg;
    let nonzero: Vec<&ZPoly> = stripped.iter().filter(|p| !p.is_empty()).collect();
    if nonzero.iter().any(|p| p.len() == 1) || nonzero.len() < 2 {
        return Ok((stripped, degree));
    }
    let mut g = dehomogenize(nonzero[0]);
    for p in &nonzero[1..] {
        g = gcd_z2(&g, &dehomogenize(p))?;
        if g.len() == 1 && g.contains_key(&(0, 0)) {
            return Ok((stripped, degree));
        }
    }
    // no Z factor remains, so the dehomogenized gcd has full degree
    let gdeg = g.keys().map(|k| k.0 + k.1).max().unwrap();
    let out = stripped
        .iter()
        .map(|p| {
            if p.is_empty() {
                return Ok(ZPoly::new());
            }
            let q = z2_div_exact(&dehomogenize(p), &g)
                .ok_or_else(|| Error::Invariant("gcd does not divide component".into()))?;
            Ok(rehomogenize(&q, degree - gdeg))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((out, degree - gdeg))
}

/// Sparse product of homogeneous integer polynomials.
pub(crate) fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut acc: HashMap<Exp, BigInt> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
    for (e, c) in a {
        for (f, d) in b {
            let k = [e[0] + f[0], e[1] + f[1], e[2] + f[2]];
            *acc.entry(k).or_insert_with(BigInt::zero) += c * d;
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(terms: &[((u32, u32), i64)]) -> Z2 {
        terms.iter().map(|&(k, c)| (k, BigInt::from(c))).collect()
    }

    fn z2mul(a: &Z2, b: &Z2) -> Z2 {
        let mut out = Z2::new();
        for (ka, ca) in a {
            for (kb, cb) in b {
                let k = (ka.0 + kb.0, ka.1 + kb.1);
                *out.entry(k).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.iter().all(|&p| is_prime(p)));
        assert!(!is_prime(2147483649));
    }

    #[test]
    fn univariate_mod_p() {
        let p = 101;
        // (x+1)(x+2) and (x+1)(x+5)
        let a = up_mul(&[1, 1], &[2, 1], p);
        let b = up_mul(&[1, 1], &[5, 1], p);
        assert_eq!(up_gcd(&a, &b, p), vec![1, 1]);
        let xs = [1, 2, 3];
        let ys: Vec<u64> = xs.iter().map(|&x| up_eval(&a, x, p)).collect();
        assert_eq!(up_interp(&xs, &ys, p), a);
    }

    #[test]
    fn bivariate_gcd_recovers_common_factor() {
        // g = 3y^2 + xy - 2x^2 + 7, a = g (y - x + 1), b = g (2x^3 + y)
        let g = z2(&[((2, 0), 3), ((1, 1), 1), ((0, 2), -2), ((0, 0), 7)]);
        let f1 = z2(&[((1, 0), 1), ((0, 1), -1), ((0, 0), 1)]);
        let f2 = z2(&[((0, 3), 2), ((1, 0), 1)]);
        let a = z2mul(&g, &f1);
        let b = z2mul(&g, &f2);
        assert_eq!(gcd_z2(&a, &b).unwrap(), g);
        assert_eq!(gcd_z2(&f1, &f2).unwrap(), z2(&[((0, 0), 1)]));
    }

    #[test]
    fn gcd_with_x_content_and_large_coefficients() {
        // common factor (x^2 + 123456789) (y + 98765 x)
        let c = z2(&[((0, 2), 1), ((0, 0), 123456789)]);
        let l = z2(&[((1, 0), 1), ((0, 1), 98765)]);
        let g = z2mul(&c, &l);
        let a = z2mul(&g, &z2(&[((2, 0), 5), ((0, 1), -3)]));
        let b = z2mul(&g, &z2(&[((1, 1), 1), ((0, 0), 4)]));
        assert_eq!(gcd_z2(&a, &b).unwrap(), g);
    }

    #[test]
    fn exact_division() {
        let g = z2(&[((1, 0), 2), ((0, 1), 1)]);
        let h = z2(&[((1, 1), 3), ((0, 0), -1)]);
        let a = z2mul(&g, &h);
        assert_eq!(z2_div_exact(&a, &g).unwrap(), h);
        assert!(z2_div_exact(&h, &g).is_none());
    }

    #[test]
    fn common_factor_removed_from_homogeneous_triple() {
        // (YZ, XZ, XY) composed with itself gives XYZ * (X, Y, Z)
        let xyz = |e: Exp| -> ZPoly { [(e, BigInt::one())].into_iter().collect() };
        let polys = vec![xyz([2, 1, 1]), xyz([1, 2, 1]), xyz([1, 1, 2])];
        let (out, d) = remove_common_factor(&polys, 4).unwrap();
        assert_eq!(d, 1);
        assert_eq!(out[0], xyz([1, 0, 0]));
    }
}
