use std::sync::Arc;

use proptest::prelude::*;

use degrowth::classlat::{BaseLattice, ClassVector, ExcPrime, PrimeSet, PrimeTree};
use degrowth::ratmap::{stability_report, HomMap, HomPoly};
use degrowth::spectral::{
    detect_recurrence, estimate_lambda1, fit_main_theorem, monomial_lambda1, Tower,
};
use degrowth::toric::MonomialMatrix;
use degrowth::Q;

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

/// Parent choices: `None` blows up a fresh base point, `Some(j)` a point on
/// the `j % k`-th earlier prime.
fn tree_from(parents: &[Option<usize>]) -> PrimeTree {
    let mut t = PrimeTree::new(Arc::new(BaseLattice::p2()));
    for (k, p) in parents.iter().enumerate() {
        let prime = match p {
            Some(j) if k > 0 => {
                let parent = t.primes()[j % k].clone();
                ExcPrime::over_prime(format!("E{k}"), &parent)
            }
            _ => ExcPrime::over_base(format!("E{k}"), format!("p{k}")),
        };
        t.push(prime).unwrap();
    }
    t
}

fn class_on(t: &PrimeTree, base: i64, coefs: &[i64]) -> ClassVector {
    let mut a = ClassVector::from_base(vec![q(base)]);
    for (p, c) in t.primes().iter().zip(coefs) {
        a.set_exc(&p.id, q(*c));
    }
    a
}

fn invertible() -> impl Strategy<Value = MonomialMatrix> {
    prop::array::uniform4(-3i64..=3)
        .prop_filter_map("singular", |e| MonomialMatrix::from_entries(e).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        parents in prop::collection::vec(prop::option::of(0usize..8), 1..8),
        a in (-5i64..=5, prop::collection::vec(-4i64..=4, 8)),
        b in (-5i64..=5, prop::collection::vec(-4i64..=4, 8)),
        s in -3i64..=3,
    ) {
        let t = tree_from(&parents);
        let x = class_on(&t, a.0, &a.1);
        let y = class_on(&t, b.0, &b.1);
        prop_assert_eq!(t.pair(&x, &y).unwrap(), t.pair(&y, &x).unwrap());
        let lhs = t.pair(&x.combine(&y, &q(s)), &y).unwrap();
        let rhs = t.pair(&x, &y).unwrap() + q(s) * t.pair(&y, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_defects_are_nonincreasing(
        parents in prop::collection::vec(prop::option::of(0usize..8), 1..8),
        a in (-5i64..=5, prop::collection::vec(-4i64..=4, 8)),
    ) {
        let t = tree_from(&parents);
        let x = class_on(&t, a.0, &a.1);
        let mut chain = vec![PrimeSet::new()];
        for p in t.primes() {
            let mut next = chain.last().unwrap().clone();
            next.insert(p.id.clone());
            chain.push(next);
        }
        let d = t.defect_sequence(&x, &chain).unwrap();
        prop_assert!(d.windows(2).all(|w| w[1] <= w[0]), "{:?}", d);
        prop_assert_eq!(d.last().unwrap(), &t.self_intersection(&x).unwrap());
    }

    #[test]
    fn hodge_index_on_positive_classes(
        parents in prop::collection::vec(prop::option::of(0usize..8), 1..8),
        a in (1i64..=6, prop::collection::vec(-2i64..=2, 8)),
    ) {
        let t = tree_from(&parents);
        let x = class_on(&t, a.0, &a.1);
        prop_assume!(t.self_intersection(&x).unwrap() > q(0));
        prop_assert!(t.hodge_index_holds(&x, &t.all_ids()).unwrap());
    }

    #[test]
    fn pullback_scales_self_intersection(a in invertible()) {
        let t = Tower::build(&a, 1, 400).unwrap();
        let lam2 = q(a.lambda2() as i64);
        for k in 0..=1 {
            let (lo, hi) = (t.model(k).fan().class_gram(), t.model(k + 1).fan().class_gram());
            let (pull, push) = (t.pullback(k), t.pushforward(k));
            prop_assert_eq!(pull.transpose().mul(&hi).mul(pull), lo.scale(&lam2));
            prop_assert_eq!(push.transpose().mul(&lo), hi.mul(pull));
        }
    }

    #[test]
    fn monomial_degrees_are_submultiplicative(a in invertible()) {
        let degs: Vec<u64> = (1..=10).map(|n| a.pow(n).unwrap().homogenized_degree()).collect();
        let s = stability_report(&degs).unwrap();
        prop_assert!(s.submultiplicative_sharp, "{:?}", degs);
    }

    #[test]
    fn polynomial_display_parses_back(
        terms in prop::collection::vec(((0u32..=3, 0u32..=3), -9i64..=9), 1..6),
    ) {
        let p = HomPoly::from_terms(
            3,
            terms.iter().filter(|((i, j), _)| i + j <= 3).map(|((i, j), c)| ([*i, *j, 3 - i - j], q(*c))),
        ).unwrap();
        // "0" carries no degree
        prop_assume!(!p.is_zero());
        prop_assert_eq!(HomPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn composition_agrees_with_evaluation(
        a in invertible(),
        b in invertible(),
        pt in prop::array::uniform3(1i64..=9),
    ) {
        let (f, g) = (HomMap::from_monomial(&a), HomMap::parse(&["Y*Z", "X*Z", "X*Y"]).unwrap());
        let g = g.compose(&HomMap::from_monomial(&b)).unwrap();
        let fg = f.compose(&g).unwrap();
        let p = pt.map(q);
        let (lhs, rhs) = (fg.eval(&p), f.eval(&g.eval(&p)));
        // projectively equal: every 2×2 minor vanishes
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            prop_assert_eq!(&lhs[i] * &rhs[j], &lhs[j] * &rhs[i]);
        }
    }

    #[test]
    fn recurrences_reproduce_their_sequence(
        c1 in 0u64..=3,
        c2 in 0u64..=2,
        s0 in 1u64..=9,
        s1 in 1u64..=9,
    ) {
        let mut seq = vec![s0, s1];
        while seq.len() < 12 {
            let n = seq.len();
            seq.push(c1 * seq[n - 1] + c2 * seq[n - 2]);
        }
        let r = detect_recurrence(&seq).expect("an order-2 recurrence exists");
        prop_assert!(r.order() <= 2);
        let terms: Vec<Q> = seq.iter().map(|&v| q(v as i64)).collect();
        prop_assert!(r.reproduces(&terms));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fitted_lambda1_matches_spectral_value(a in invertible()) {
        // complex eigenvalues with an irrational angle leave a nonperiodic
        // factor in deg_n / λ₁ⁿ that ten terms cannot average out
        prop_assume!(a.trace() * a.trace() >= 4 * a.det());
        let degs: Vec<u64> = (1..=10).map(|n| a.pow(n).unwrap().homogenized_degree()).collect();
        let fitted = estimate_lambda1(&degs).unwrap().value;
        let (exact, _) = monomial_lambda1(&a);
        prop_assert!((fitted - exact).abs() <= 0.02 * exact, "{:?}: {} vs {}", a.entries(), fitted, exact);
    }
}

#[test]
fn bound_constant_is_stable_in_the_window() {
    for e in [
        [2, 1, 1, 1],
        [3, 1, 1, 1],
        [1, 1, 1, 2],
        [3, 2, 1, 1],
        [2, 1, 1, 2],
        [1, 2, 2, 1],
    ] {
        let a = MonomialMatrix::from_entries(e).unwrap();
        let (l1, _) = monomial_lambda1(&a);
        let l2 = a.lambda2() as f64;
        assert!(l1 * l1 > l2);
        let degs: Vec<u64> = (1..=12)
            .map(|n| a.pow(n).unwrap().homogenized_degree())
            .collect();
        let c8 = fit_main_theorem(&degs[..8], l1, l2)
            .unwrap()
            .bound_constant
            .unwrap();
        let c12 = fit_main_theorem(&degs, l1, l2)
            .unwrap()
            .bound_constant
            .unwrap();
        assert!((c12 - c8).abs() <= 0.1 * c8, "{e:?}: {c8} vs {c12}");
    }
}
