//! Rational self-maps of the plane given by three homogeneous polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::gcd::{remove_common_factor, zmul, ZPoly};
use super::poly::{Exp, HomPoly};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::q;
use crate::toric::MonomialMatrix;
use crate::Q;

/// Default bound on the number of terms of any intermediate polynomial.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;

/// `[F_0 : F_1 : F_2]`, stored normalized: integer coefficients, jointly
/// primitive, no common factor, positive leading coefficient on the first
/// nonzero component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMap {
    components: [HomPoly; 3],
    degree: u32,
}

fn to_zpoly(p: &HomPoly) -> ZPoly {
    p.terms()
        .iter()
        .map(|(e, c)| {
            debug_assert!(c.is_integer());
            (*e, c.to_integer())
        })
        .collect()
}

fn from_zpoly(p: &ZPoly, degree: u32) -> HomPoly {
    HomPoly::from_terms(
        degree,
        p.iter().map(|(e, c)| (*e, Q::from_integer(c.clone()))),
    )
    .expect("degree consistent")
}

fn term_cap_error(what: String) -> Error {
    Error::Capacity {
        what,
        partial: Vec::new(),
    }
}

impl HomMap {
    /// Normalizes three homogeneous polynomials into a map. Zero components
    /// are allowed; all nonzero ones must share a degree.
    pub fn new(components: [HomPoly; 3]) -> Result<HomMap> {
        let degree = components
            .iter()
            .find(|p| !p.is_zero())
            .map(|p| p.degree())
            .ok_or_else(|| Error::Degenerate("all components vanish".into()))?;
        if components
            .iter()
            .any(|p| !p.is_zero() && p.degree() != degree)
        {
            return Err(Error::Parse("components have different degrees".into()));
        }
        // clear denominators
        let mut lcm = BigInt::one();
        for p in &components {
            for c in p.terms().values() {
                lcm = lcm.lcm(c.denom());
            }
        }
        let scale = Q::from_integer(lcm);
        let z: Vec<ZPoly> = components
            .iter()
            .map(|p| to_zpoly(&p.scale(&scale)))
            .collect();
        Self::from_integer_components(z, degree)
    }

    fn from_integer_components(z: Vec<ZPoly>, degree: u32) -> Result<HomMap> {
        let (mut z, degree) = remove_common_factor(&z, degree)?;
        let mut g = BigInt::zero();
        for p in &z {
            for c in p.values() {
                g = g.gcd(c);
            }
        }
        let lead_negative = z
            .iter()
            .find(|p| !p.is_empty())
            .and_then(|p| p.values().next_back())
            .is_some_and(|c| c.is_negative());
        if lead_negative {
            g = -g;
        }
        if !g.is_one() {
            for p in z.iter_mut() {
                for c in p.values_mut() {
                    *c = &*c / &g;
                }
            }
        }
        let comps = [
            from_zpoly(&z[0], degree),
            from_zpoly(&z[1], degree),
            from_zpoly(&z[2], degree),
        ];
        Ok(HomMap {
            components: comps,
            degree,
        })
    }

    /// Parses three components in the monomial syntax.
    pub fn parse(components: &[&str]) -> Result<HomMap> {
        if components.len() != 3 {
            return Err(Error::Parse(format!(
                "a plane map needs 3 components, got {}",
                components.len()
            )));
        }
        let mut polys = Vec::with_capacity(3);
        for s in components {
            let p = HomPoly::parse(s)?;
            polys.push(p);
        }
        let degree = polys
            .iter()
            .find(|p| !p.is_zero())
            .map_or(0, |p| p.degree());
        let polys: Vec<HomPoly> = polys
            .into_iter()
            .map(|p| {
                if p.is_zero() {
                    HomPoly::zero(degree)
                } else {
                    p
                }
            })
            .collect();
        let [a, b, c]: [HomPoly; 3] = polys.try_into().expect("three components");
        HomMap::new([a, b, c])
    }

    pub fn identity() -> HomMap {
        HomMap::new([HomPoly::var(0), HomPoly::var(1), HomPoly::var(2)]).expect("identity")
    }

    /// The homogenization of `(x, y) ↦ (x^{a11} y^{a12}, x^{a21} y^{a22})`
    /// with `x = X/Z`, `y = Y/Z`.
    pub fn from_monomial(m: &MonomialMatrix) -> HomMap {
        let a = m.entries();
        let px = 0.max(-a[0][0]).max(-a[1][0]);
        let py = 0.max(-a[0][1]).max(-a[1][1]);
        let pz = 0.max(a[0][0] + a[0][1]).max(a[1][0] + a[1][1]);
        let e = |dx: i64, dy: i64| -> Exp {
            [(dx + px) as u32, (dy + py) as u32, (pz - dx - dy) as u32]
        };
        HomMap::new([
            HomPoly::monomial(e(a[0][0], a[0][1]), Q::one()),
            HomPoly::monomial(e(a[1][0], a[1][1]), Q::one()),
            HomPoly::monomial(e(0, 0), Q::one()),
        ])
        .expect("monomial maps are well formed")
    }

    /// The exponent matrix when every component is a single monomial.
    pub fn as_monomial(&self) -> Option<MonomialMatrix> {
        let mono: Vec<Exp> = self
            .components
            .iter()
            .map(|p| (p.len() == 1).then(|| *p.terms().keys().next().unwrap()))
            .collect::<Option<_>>()?;
        let d = |i: usize, v: usize| mono[i][v] as i64 - mono[2][v] as i64;
        MonomialMatrix::new([[d(0, 0), d(0, 1)], [d(1, 0), d(1, 1)]]).ok()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[HomPoly; 3] {
        &self.components
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(|p| p.len()).sum()
    }

    pub fn eval(&self, pt: &[Q; 3]) -> [Q; 3] {
        [
            self.components[0].eval(pt),
            self.components[1].eval(pt),
            self.components[2].eval(pt),
        ]
    }

    /// `self ∘ g`, with the common factor divided out.
    pub fn compose(&self, g: &HomMap) -> Result<HomMap> {
        self.compose_capped(g, DEFAULT_TERM_CAP)
    }

    pub fn compose_capped(&self, g: &HomMap, cap: usize) -> Result<HomMap> {
        let gz: Vec<ZPoly> = g.components.iter().map(to_zpoly).collect();
        let mut cache: HashMap<Exp, ZPoly> = HashMap::new();
        cache.insert(
            [0, 0, 0],
            [([0, 0, 0], BigInt::one())].into_iter().collect(),
        );
        let mut out: Vec<ZPoly> = Vec::with_capacity(3);
        for comp in &self.components {
            let mut acc: HashMap<Exp, BigInt> = HashMap::new();
            for (e, c) in comp.terms() {
                let prod = power_product(*e, &gz, &mut cache, cap)?;
                let c = c.to_integer();
                for (k, v) in prod {
                    *acc.entry(*k).or_insert_with(BigInt::zero) += &c * v;
                }
                if acc.len() > cap {
                    return Err(term_cap_error(format!(
                        "composition has more than {cap} terms"
                    )));
                }
            }
            out.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        if out.iter().all(|p| p.is_empty()) {
            return Err(Error::Degenerate(
                "composition vanishes identically (non-dominant input)".into(),
            ));
        }
        Self::from_integer_components(out, self.degree * g.degree)
    }

    /// Jacobian determinant of the three components at a point.
    pub fn jacobian_det(&self, pt: &[Q; 3]) -> Q {
        let rows: Vec<Vec<Q>> = self
            .components
            .iter()
            .map(|p| (0..3).map(|i| p.derivative(i).eval(pt)).collect())
            .collect();
        QMatrix::from_rows(rows).determinant()
    }

    /// Generic-rank sanity gate: the Jacobian determinant is nonzero at some
    /// random integer point (a dominant map passes with overwhelming
    /// probability on the first try).
    pub fn check_dominant(&self, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let pt = [
                q(rng.gen_range(-1000..=1000)),
                q(rng.gen_range(-1000..=1000)),
                q(rng.gen_range(-1000..=1000)),
            ];
            if !self.jacobian_det(&pt).is_zero() {
                return Ok(());
            }
        }
        Err(Error::Dominance(
            "Jacobian determinant vanished at every sampled point".into(),
        ))
    }
}

/// `g_0^{e0} g_1^{e1} g_2^{e2}`, memoized on exponent vectors.
fn power_product<'a>(
    e: Exp,
    g: &[ZPoly],
    cache: &'a mut HashMap<Exp, ZPoly>,
    cap: usize,
) -> Result<&'a ZPoly> {
    if !cache.contains_key(&e) {
        let i = (0..3).find(|&i| e[i] > 0).expect("nonzero exponent");
        let mut smaller = e;
        smaller[i] -= 1;
        let base = power_product(smaller, g, cache, cap)?.clone();
        if base.len().saturating_mul(g[i].len()) > cap.saturating_mul(64) {
            return Err(term_cap_error(format!(
                "product of {}×{} terms exceeds the work bound for cap {cap}",
                base.len(),
                g[i].len()
            )));
        }
        let prod = zmul(&base, &g[i]);
        if prod.len() > cap {
            return Err(term_cap_error(format!(
                "intermediate product has {} terms (cap {cap})",
                prod.len()
            )));
        }
        cache.insert(e, prod);
    }
    Ok(&cache[&e])
}

impl fmt::Display for HomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {})",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

/// `[deg f, deg f², …, deg f^{n_max}]` with `f^{k+1} = f ∘ f^k`. On a
/// capacity failure the completed terms travel inside the error.
pub fn degree_sequence(f: &HomMap, n_max: usize, cap: usize) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return Ok(out);
    }
    let mut cur = f.clone();
    out.push(cur.degree() as u64);
    while out.len() < n_max {
        match f.compose_capped(&cur, cap) {
            Ok(next) => {
                out.push(next.degree() as u64);
                cur = next;
            }
            Err(Error::Capacity { what, .. }) => {
                return Err(Error::Capacity { what, partial: out })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// A map file: `{"name": …, "components": ["X^2", …]}` or
/// `{"name": …, "monomial": [[a, b], [c, d]]}`, optionally with a known
/// topological degree `"lambda2"`.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub name: String,
    pub map: HomMap,
    pub monomial: Option<MonomialMatrix>,
    pub lambda2: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    components: Option<Vec<String>>,
    #[serde(default)]
    monomial: Option<[[i64; 2]; 2]>,
    #[serde(default)]
    lambda2: Option<u64>,
    #[serde(default)]
    #[allow(dead_code)]
    notes: Option<String>,
}

impl MapSpec {
    pub fn from_json(s: &str) -> Result<MapSpec> {
        let file: MapFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let monomial = file.monomial.map(MonomialMatrix::new).transpose()?;
        let map = match (&file.components, &monomial) {
            (Some(c), _) => {
                let refs: Vec<&str> = c.iter().map(String::as_str).collect();
                HomMap::parse(&refs)?
            }
            (None, Some(m)) => HomMap::from_monomial(m),
            (None, None) => {
                return Err(Error::Parse(
                    "map file needs \"components\" or \"monomial\"".into(),
                ))
            }
        };
        if let (Some(_), Some(m)) = (&file.components, &monomial) {
            if HomMap::from_monomial(m) != map {
                return Err(Error::Configuration(
                    "components disagree with the monomial matrix".into(),
                ));
            }
        }
        let monomial = monomial.or_else(|| map.as_monomial());
        Ok(MapSpec {
            name: file.name.unwrap_or_else(|| map.to_string()),
            map,
            monomial,
            lambda2: file.lambda2,
        })
    }
}

/// Integer coefficients of a polynomial, keyed by exponent (for callers that
/// want exact integer access).
pub fn integer_terms(p: &HomPoly) -> BTreeMap<Exp, BigInt> {
    to_zpoly(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(c: [&str; 3]) -> HomMap {
        HomMap::parse(&c).unwrap()
    }

    #[test]
    fn normalization() {
        let f = m(["2*X^2", "4*Y^2", "-6*Z^2"]);
        assert_eq!(f.to_string(), "(X^2 : 2*Y^2 : -3*Z^2)");
        let g = m(["1/2*X*Y", "1/3*X*Z", "X^2"]);
        assert_eq!(
            g,
            m(["Y", "2/3*Z", "2*X"])
                .compose(&HomMap::identity())
                .unwrap()
        );
        assert_eq!(g.degree(), 1);
    }

    #[test]
    fn cremona_is_an_involution() {
        let s = m(["Y*Z", "X*Z", "X*Y"]);
        assert_eq!(s.compose(&s).unwrap(), HomMap::identity());
        assert_eq!(s.compose(&HomMap::identity()).unwrap(), s);
    }

    #[test]
    fn monomial_composition_is_matrix_product() {
        let a = MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap();
        let b = MonomialMatrix::from_entries([1, -2, 0, 1]).unwrap();
        let fa = HomMap::from_monomial(&a);
        let fb = HomMap::from_monomial(&b);
        let ab = a.compose(&b).unwrap();
        assert_eq!(fa.compose(&fb).unwrap(), HomMap::from_monomial(&ab));
        assert_eq!(fa.as_monomial(), Some(a));
        assert_eq!(fa.to_string(), "(X^2*Y : X*Y*Z : Z^3)");
    }

    #[test]
    fn non_monomial_common_factor() {
        // a linear conjugate of the Cremona involution; its square cancels a
        // product of three non-coordinate lines
        let l = m(["X + Y", "Y + Z", "Z"]);
        let l_inv = m(["X - Y + Z", "Y - Z", "Z"]);
        assert_eq!(l.compose(&l_inv).unwrap(), HomMap::identity());
        let sigma = m(["Y*Z", "X*Z", "X*Y"]);
        let s = l.compose(&sigma).unwrap().compose(&l_inv).unwrap();
        assert_eq!(s.degree(), 2);
        assert!(s.as_monomial().is_none());
        assert_eq!(s.compose(&s).unwrap(), HomMap::identity());
        assert!(s.check_dominant(1).is_ok());
    }

    #[test]
    fn degree_sequences() {
        let sq = m(["X^2", "Y^2", "Z^2"]);
        assert_eq!(
            degree_sequence(&sq, 5, DEFAULT_TERM_CAP).unwrap(),
            vec![2, 4, 8, 16, 32]
        );
        let s = m(["Y*Z", "X*Z", "X*Y"]);
        assert_eq!(
            degree_sequence(&s, 4, DEFAULT_TERM_CAP).unwrap(),
            vec![2, 1, 2, 1]
        );
        let fib = HomMap::from_monomial(&MonomialMatrix::from_entries([2, 1, 1, 1]).unwrap());
        assert_eq!(
            degree_sequence(&fib, 5, DEFAULT_TERM_CAP).unwrap(),
            vec![3, 8, 21, 55, 144]
        );
    }

    #[test]
    fn capacity_is_reported_with_partial_sequence() {
        let h = m(["Y*Z", "Y^2 + X*Z", "Z^2"]);
        match degree_sequence(&h, 10, 50) {
            Err(Error::Capacity { partial, .. }) => {
                assert!(!partial.is_empty());
                assert_eq!(partial[0], 2);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn dominance_gate() {
        let flat = m(["X", "X", "Y"]);
        assert!(matches!(flat.check_dominant(7), Err(Error::Dominance(_))));
        assert!(m(["X^2", "Y^2", "Z^2"]).check_dominant(7).is_ok());
    }

    #[test]
    fn map_files() {
        let spec =
            MapSpec::from_json(r#"{"name": "c", "components": ["Y*Z", "X*Z", "X*Y"]}"#).unwrap();
        assert_eq!(spec.monomial.unwrap().entries(), [[-1, 0], [0, -1]]);
        let spec = MapSpec::from_json(r#"{"monomial": [[2, 1], [1, 1]], "lambda2": 1}"#).unwrap();
        assert_eq!(spec.map.degree(), 3);
        assert_eq!(spec.lambda2, Some(1));
        assert!(MapSpec::from_json("{").is_err());
        assert!(MapSpec::from_json(r#"{"components": ["X", "Y"]}"#).is_err());
        assert!(MapSpec::from_json(r#"{"components": ["X", "Y^2", "Z"]}"#).is_err());
    }
}
