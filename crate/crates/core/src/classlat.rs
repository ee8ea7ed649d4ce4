//! Exceptional primes over a base surface and the class calculus on them.
//!
//! A Cartier class is stored as a base part (coordinates in a basis of the
//! base surface's Néron–Severi lattice) plus finitely many coordinates `c_E`
//! on the classes `α_E` of total transforms of exceptional primes. The basis
//! `{α_E}` is orthonormal for minus the intersection form and orthogonal to
//! the base, so
//!
//! ```text
//! (a · b) = gram(a.base, b.base) − Σ_E a.c_E · b.c_E
//! ```
//!
//! With this convention `c_E(α_E) = +1`, `(α_E²) = −1`, and positive
//! coordinates mean effective exceptional support. A nef class has `c_E ≤ 0`
//! since `(α · α_E) = −c_E`.
//!
//! Models are lower sets of the prime tree (every prime in the set has its
//! parent in the set); the incarnation of a class on a model keeps the
//! coordinates of the primes in that set.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{serde_qmap, serde_qmatrix, serde_qvec, Q};

pub type PrimeId = String;
pub type PrimeSet = BTreeSet<PrimeId>;

/// Where the blowup creating a prime is centred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parent {
    /// A point of the base surface, identified by a label.
    BasePoint(String),
    /// A point on the exceptional curve of another prime.
    Prime(PrimeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcPrime {
    pub id: PrimeId,
    pub parent: Parent,
    /// Number of blowups strictly below this prime.
    pub level: u32,
}

impl ExcPrime {
    pub fn over_base(id: impl Into<String>, point: impl Into<String>) -> Self {
        ExcPrime {
            id: id.into(),
            parent: Parent::BasePoint(point.into()),
            level: 0,
        }
    }

    pub fn over_prime(id: impl Into<String>, parent: &ExcPrime) -> Self {
        ExcPrime {
            id: id.into(),
            parent: Parent::Prime(parent.id.clone()),
            level: parent.level + 1,
        }
    }
}

/// Néron–Severi lattice of the base surface with its intersection form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BaseLatticeRepr", into = "BaseLatticeRepr")]
pub struct BaseLattice {
    gram: QMatrix,
    labels: Vec<String>,
    canonical: Option<Vec<Q>>,
}

#[derive(Serialize, Deserialize)]
struct BaseLatticeRepr {
    #[serde(with = "serde_qmatrix")]
    gram: Vec<Vec<Q>>,
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical: Option<CanonicalRepr>,
}

#[derive(Serialize, Deserialize)]
struct CanonicalRepr(#[serde(with = "serde_qvec")] Vec<Q>);

impl TryFrom<BaseLatticeRepr> for BaseLattice {
    type Error = Error;
    fn try_from(r: BaseLatticeRepr) -> Result<Self> {
        BaseLattice::new(
            QMatrix::from_rows(r.gram),
            r.labels,
            r.canonical.map(|c| c.0),
        )
    }
}

impl From<BaseLattice> for BaseLatticeRepr {
    fn from(b: BaseLattice) -> Self {
        BaseLatticeRepr {
            gram: b.gram.to_rows(),
            labels: b.labels,
            canonical: b.canonical.map(CanonicalRepr),
        }
    }
}

impl BaseLattice {
    /// Validates symmetry and Minkowski signature `(1, rank − 1)`.
    pub fn new(gram: QMatrix, labels: Vec<String>, canonical: Option<Vec<Q>>) -> Result<Self> {
        let rank = gram.rows();
        if rank == 0 || !gram.is_symmetric() {
            return Err(Error::Configuration(
                "gram matrix must be square, symmetric and nonempty".into(),
            ));
        }
        if labels.len() != rank {
            return Err(Error::Configuration(format!(
                "{} labels for a rank-{rank} lattice",
                labels.len()
            )));
        }
        if canonical.as_ref().is_some_and(|k| k.len() != rank) {
            return Err(Error::Configuration(
                "canonical class has wrong length".into(),
            ));
        }
        let inertia = gram.inertia();
        if inertia != (1, rank - 1, 0) {
            return Err(Error::Configuration(format!(
                "intersection form has inertia {inertia:?}, expected (1, {}, 0)",
                rank - 1
            )));
        }
        Ok(BaseLattice {
            gram,
            labels,
            canonical,
        })
    }

    /// The projective plane: `H² = 1`, `K = −3H`.
    pub fn p2() -> Self {
        BaseLattice::new(
            QMatrix::identity(1),
            vec!["H".into()],
            Some(vec![Q::from_integer((-3).into())]),
        )
        .expect("P2 lattice is valid")
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn canonical(&self) -> Option<&[Q]> {
        self.canonical.as_deref()
    }
}

/// A finitely supported class: base coordinates plus `α_E` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVector {
    #[serde(with = "serde_qvec")]
    pub base: Vec<Q>,
    #[serde(with = "serde_qmap", default)]
    pub exc: BTreeMap<PrimeId, Q>,
}

impl ClassVector {
    pub fn zero(rank: usize) -> Self {
        ClassVector {
            base: vec![Q::zero(); rank],
            exc: BTreeMap::new(),
        }
    }

    /// The Cartier class determined by a base class (empty exceptional part).
    pub fn from_base(base: Vec<Q>) -> Self {
        ClassVector {
            base,
            exc: BTreeMap::new(),
        }
    }

    /// `α_E` itself.
    pub fn prime(rank: usize, id: &str) -> Self {
        let mut c = Self::zero(rank);
        c.exc.insert(id.to_string(), Q::one());
        c
    }

    pub fn with_exc(mut self, id: &str, coef: Q) -> Self {
        self.set_exc(id, coef);
        self
    }

    pub fn set_exc(&mut self, id: &str, coef: Q) {
        if coef.is_zero() {
            self.exc.remove(id);
        } else {
            self.exc.insert(id.to_string(), coef);
        }
    }

    pub fn exc_coef(&self, id: &str) -> Q {
        self.exc.get(id).cloned().unwrap_or_else(Q::zero)
    }

    pub fn support(&self) -> PrimeSet {
        self.exc.keys().cloned().collect()
    }

    pub fn add(&self, other: &ClassVector) -> ClassVector {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &ClassVector) -> ClassVector {
        self.combine(other, &-Q::one())
    }

    /// `self + s·other`.
    pub fn combine(&self, other: &ClassVector, s: &Q) -> ClassVector {
        assert_eq!(self.base.len(), other.base.len(), "base rank mismatch");
        let base = self
            .base
            .iter()
            .zip(&other.base)
            .map(|(a, b)| a + b * s)
            .collect();
        let mut out = ClassVector::from_base(base);
        out.exc = self.exc.clone();
        for (id, c) in &other.exc {
            let v = out.exc_coef(id) + c * s;
            out.set_exc(id, v);
        }
        out
    }

    pub fn scale(&self, s: &Q) -> ClassVector {
        let mut out = ClassVector::from_base(self.base.iter().map(|a| a * s).collect());
        for (id, c) in &self.exc {
            out.set_exc(id, c * s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.base.iter().all(|x| x.is_zero()) && self.exc.values().all(|x| x.is_zero())
    }

    /// Largest absolute coordinate, as a float.
    pub fn max_abs(&self) -> f64 {
        self.base
            .iter()
            .chain(self.exc.values())
            .map(|x| crate::rational::to_f64(x).abs())
            .fold(0.0, f64::max)
    }
}

/// A Weil class given by a coefficient rule on primes; never materialized,
/// only evaluated on finite prime sets.
pub struct WeilClass {
    pub base: Vec<Q>,
    coef: Box<dyn Fn(&ExcPrime) -> Q + Send + Sync>,
}

impl WeilClass {
    pub fn new(base: Vec<Q>, coef: impl Fn(&ExcPrime) -> Q + Send + Sync + 'static) -> Self {
        WeilClass {
            base,
            coef: Box::new(coef),
        }
    }

    /// Incarnation on the model given by the lower set `set`.
    pub fn truncate(&self, tree: &PrimeTree, set: &PrimeSet) -> Result<ClassVector> {
        tree.check_lower_set(set)?;
        let mut c = ClassVector::from_base(self.base.clone());
        for id in set {
            let p = tree.get(id).expect("checked lower set");
            c.set_exc(id, (self.coef)(p));
        }
        Ok(c)
    }
}

/// The ordered collection of exceptional primes over a base lattice.
#[derive(Clone, Debug)]
pub struct PrimeTree {
    base: Arc<BaseLattice>,
    primes: Vec<ExcPrime>,
    index: HashMap<PrimeId, usize>,
}

#[derive(Serialize, Deserialize)]
struct PrimeTreeRepr {
    base: BaseLattice,
    primes: Vec<ExcPrime>,
}

impl Serialize for PrimeTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PrimeTreeRepr {
            base: (*self.base).clone(),
            primes: self.primes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimeTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PrimeTreeRepr::deserialize(d)?;
        PrimeTree::from_primes(Arc::new(r.base), r.primes).map_err(serde::de::Error::custom)
    }
}

impl PartialEq for PrimeTree {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.primes == other.primes
    }
}

impl PrimeTree {
    pub fn new(base: Arc<BaseLattice>) -> Self {
        PrimeTree {
            base,
            primes: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_primes(base: Arc<BaseLattice>, primes: Vec<ExcPrime>) -> Result<Self> {
        let mut t = PrimeTree::new(base);
        for p in primes {
            t.push(p)?;
        }
        Ok(t)
    }

    /// Appends a prime; its parent must already be present.
    pub fn push(&mut self, prime: ExcPrime) -> Result<()> {
        if self.index.contains_key(&prime.id) {
            return Err(Error::InvalidModel(format!(
                "duplicate prime id {}",
                prime.id
            )));
        }
        match &prime.parent {
            Parent::BasePoint(_) if prime.level != 0 => {
                return Err(Error::InvalidModel(format!(
                    "prime {} over a base point must have level 0",
                    prime.id
                )))
            }
            Parent::Prime(pid) => {
                let parent = self.get(pid).ok_or_else(|| {
                    Error::InvalidModel(format!("parent {pid} of {} not in tree", prime.id))
                })?;
                if prime.level != parent.level + 1 {
                    return Err(Error::InvalidModel(format!(
                        "prime {} has level {}, parent level {}",
                        prime.id, prime.level, parent.level
                    )));
                }
            }
            _ => {}
        }
        self.index.insert(prime.id.clone(), self.primes.len());
        self.primes.push(prime);
        Ok(())
    }

    pub fn base(&self) -> &BaseLattice {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<BaseLattice> {
        self.base.clone()
    }

    pub fn primes(&self) -> &[ExcPrime] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ExcPrime> {
        self.index.get(id).map(|&i| &self.primes[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Position of a prime in creation order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn all_ids(&self) -> PrimeSet {
        self.primes.iter().map(|p| p.id.clone()).collect()
    }

    /// `id` together with all its ancestors.
    pub fn ancestors_closure(&self, id: &str) -> PrimeSet {
        let mut out = PrimeSet::new();
        let mut cur = self.get(id);
        while let Some(p) = cur {
            out.insert(p.id.clone());
            cur = match &p.parent {
                Parent::Prime(pid) => self.get(pid),
                Parent::BasePoint(_) => None,
            };
        }
        out
    }

    pub fn is_lower_set(&self, set: &PrimeSet) -> bool {
        self.check_lower_set(set).is_ok()
    }

    fn check_lower_set(&self, set: &PrimeSet) -> Result<()> {
        for id in set {
            let p = self
                .get(id)
                .ok_or_else(|| Error::InvalidModel(format!("prime {id} not in tree")))?;
            if let Parent::Prime(pid) = &p.parent {
                if !set.contains(pid) {
                    return Err(Error::InvalidModel(format!(
                        "prime set contains {id} but not its parent {pid}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_class(&self, a: &ClassVector) -> Result<()> {
        if a.base.len() != self.base.rank() {
            return Err(Error::AmbientMismatch(format!(
                "class has base rank {}, lattice rank {}",
                a.base.len(),
                self.base.rank()
            )));
        }
        if let Some(id) = a.exc.keys().find(|id| !self.contains(id)) {
            return Err(Error::AmbientMismatch(format!("prime {id} not in tree")));
        }
        Ok(())
    }

    /// Intersection pairing.
    pub fn pair(&self, a: &ClassVector, b: &ClassVector) -> Result<Q> {
        self.check_class(a)?;
        self.check_class(b)?;
        let mut v = self.base.gram.form(&a.base, &b.base);
        let (small, large) = if a.exc.len() <= b.exc.len() {
            (a, b)
        } else {
            (b, a)
        };
        for (id, c) in &small.exc {
            if let Some(d) = large.exc.get(id) {
                v -= c * d;
            }
        }
        Ok(v)
    }

    pub fn self_intersection(&self, a: &ClassVector) -> Result<Q> {
        self.pair(a, a)
    }

    /// Incarnation on the model `set`: keeps the base part and the
    /// coordinates of primes in `set`.
    pub fn incarnation(&self, a: &ClassVector, set: &PrimeSet) -> Result<ClassVector> {
        self.check_class(a)?;
        self.check_lower_set(set)?;
        let mut out = ClassVector::from_base(a.base.clone());
        for (id, c) in &a.exc {
            if set.contains(id) {
                out.exc.insert(id.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Self-intersections of the incarnations along an increasing chain of
    /// models. Nonincreasing by construction of the pairing.
    pub fn defect_sequence(&self, a: &ClassVector, chain: &[PrimeSet]) -> Result<Vec<Q>> {
        for w in chain.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::InvalidModel(
                    "chain of models is not increasing".into(),
                ));
            }
        }
        chain
            .iter()
            .map(|s| {
                let inc = self.incarnation(a, s)?;
                self.pair(&inc, &inc)
            })
            .collect()
    }

    /// The canonical class of the model `set`: base canonical part and
    /// coordinate 1 on every prime of `set`.
    pub fn canonical_class(&self, set: &PrimeSet) -> Result<ClassVector> {
        self.check_lower_set(set)?;
        let k = self
            .base
            .canonical()
            .ok_or_else(|| Error::Configuration("base canonical class not configured".into()))?;
        let mut c = ClassVector::from_base(k.to_vec());
        for id in set {
            c.exc.insert(id.clone(), Q::one());
        }
        Ok(c)
    }

    /// `(a_S · K_S)` on the model `S`.
    pub fn canonical_pairing(&self, a: &ClassVector, set: &PrimeSet) -> Result<Q> {
        let k = self.canonical_class(set)?;
        let inc = self.incarnation(a, set)?;
        self.pair(&inc, &k)
    }

    /// Checks that the pairing is negative definite on the orthogonal
    /// complement of `a` inside the span of the base and the primes of
    /// `set`. Requires `(a²) > 0`.
    pub fn hodge_index_holds(&self, a: &ClassVector, set: &PrimeSet) -> Result<bool> {
        self.check_lower_set(set)?;
        let sq = self.self_intersection(a)?;
        if !sq.is_positive() {
            return Err(Error::Precondition(format!("(a²) = {sq} is not positive")));
        }
        let a_s = self.incarnation(a, set)?;
        let r = self.base.rank();
        let ids: Vec<&PrimeId> = set.iter().collect();
        let dim = r + ids.len();
        let gram = self.truncated_gram(ids.len());
        let mut coords = a_s.base.clone();
        coords.extend(ids.iter().map(|id| a_s.exc_coef(id)));
        // functional x ↦ (a · x)
        let functional: Vec<Q> = gram.mul_vec(&coords);
        let kernel = QMatrix::from_rows(vec![functional]).nullspace();
        debug_assert_eq!(kernel.len(), dim - 1);
        if kernel.is_empty() {
            return Ok(true);
        }
        let b = QMatrix::from_columns(&kernel, dim);
        let restricted = b.transpose().mul(&gram).mul(&b);
        Ok(restricted.is_negative_definite())
    }

    fn truncated_gram(&self, n_exc: usize) -> QMatrix {
        let r = self.base.rank();
        let mut g = QMatrix::zeros(r + n_exc, r + n_exc);
        for i in 0..r {
            for j in 0..r {
                g[(i, j)] = self.base.gram[(i, j)].clone();
            }
        }
        for k in 0..n_exc {
            g[(r + k, r + k)] = -Q::one();
        }
        g
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn class_to_json(a: &ClassVector) -> String {
    serde_json::to_string(a).expect("class serializes")
}

pub fn class_from_json(s: &str) -> Result<ClassVector> {
    let c: ClassVector = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = ClassVector::from_base(c.base);
    for (id, v) in c.exc {
        out.set_exc(&id, v);
    }
    Ok(out)
}
