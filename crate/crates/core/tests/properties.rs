//! Algebraic invariants of polynomials and factored rational functions.

use igusa_core::poly::{default_variables, parse_polynomial, IntPolynomial};
use igusa_core::ratfun::{DenFactor, Denominator, FactoredRatFun};
use igusa_core::scalar::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

const N: usize = 2;

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, N), -5i64..=5), 1..6).prop_map(|ts| {
        IntPolynomial::from_terms(N, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap()
    })
}

fn point() -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec((-20i64..20).prop_map(BigInt::from), N)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn ratfun() -> impl Strategy<Value = FactoredRatFun<Rational>> {
    (
        prop::collection::vec(-6i64..=6, 1..4),
        prop::collection::vec((0u64..3, 1u64..3), 0..3),
    )
        .prop_map(|(num, facs)| {
            let mut den = Denominator::new();
            for (n, m) in facs {
                *den.entry(DenFactor::new(n + 1, m)).or_insert(0) += 1;
            }
            let num = num.into_iter().map(|c| Rational::from_integer(c.into())).collect();
            FactoredRatFun::from_parts(3, num, den)
        })
}

proptest! {
    #[test]
    fn display_parse_round_trip(f in poly()) {
        let vars = default_variables(N);
        let text = f.display_with(&vars);
        prop_assert_eq!(parse_polynomial(&text, &vars).unwrap(), f);
    }

    #[test]
    fn dilatation_identity(f in poly(), pt in point(), x in point(), p in prime()) {
        prop_assume!(!f.is_zero());
        let (g, e) = f.dilate(&pt, p).unwrap();
        let shifted: Vec<BigInt> = pt.iter().zip(&x).map(|(a, b)| a + b * p).collect();
        prop_assert_eq!(f.eval(&shifted), BigInt::from(p).pow(e) * g.eval(&x));
        prop_assert_eq!(g.content_valuation(p), Some(0));
    }

    #[test]
    fn leibniz_rule(f in poly(), g in poly(), i in 0..N) {
        let lhs = f.mul(&g).unwrap().partial(i);
        let rhs = f.partial(i).mul(&g).unwrap().add(&f.mul(&g.partial(i)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_commutes_with_evaluation(f in poly(), x in point(), p in prime()) {
        let xr: Vec<u64> = x.iter().map(|v| {
            let m = BigInt::from(p);
            u64::try_from(((v % &m) + &m) % &m).unwrap()
        }).collect();
        let big = f.eval(&x);
        let m = BigInt::from(p);
        let expected = u64::try_from(((big % &m) + &m) % &m).unwrap();
        prop_assert_eq!(f.reduce_mod_p(p).eval(&xr), expected);
        prop_assert_eq!(f.eval_mod(&xr, p), expected);
    }

    #[test]
    fn ring_laws(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(
            f.mul(&g).unwrap().mul(&h).unwrap(),
            f.mul(&g.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn ratfun_series_is_a_homomorphism(a in ratfun(), b in ratfun()) {
        const K: usize = 12;
        let sa = a.series_expand(K);
        let sb = b.series_expand(K);
        let sum = a.add(&b).unwrap().series_expand(K);
        let prod = a.mul(&b).unwrap().series_expand(K);
        for k in 0..=K {
            prop_assert_eq!(&sum[k], &(sa[k].clone() + sb[k].clone()));
            let conv: Rational = (0..=k).map(|i| sa[i].clone() * sb[k - i].clone()).sum();
            prop_assert_eq!(&prod[k], &conv);
        }
    }

    #[test]
    fn normalization_preserves_value(a in ratfun(), b in ratfun()) {
        let z = a.add(&b).unwrap();
        let nz = z.normalize();
        prop_assert_eq!(z.series_expand(15), nz.series_expand(15));
        prop_assert!(z.equals(&nz));
        prop_assert!(z.sub(&z).unwrap().is_zero());
    }
}
