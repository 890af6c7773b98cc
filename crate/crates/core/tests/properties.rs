use std::sync::Arc;

use localeps::character::MultiplicativeCharacter;
use localeps::hilbert::hilbert_qp;
use localeps::{CyclotomicNumber, PadicElement, RootOfUnity, UnramifiedField};
use num_rational::Rational64;
use proptest::prelude::*;

fn cyclotomic() -> impl Strategy<Value = CyclotomicNumber> {
    (1u64..=24).prop_flat_map(|m| {
        prop::collection::vec((0..m as i64, -3i64..=3), 0..5).prop_map(move |terms| {
            CyclotomicNumber::from_terms(
                m,
                terms
                    .into_iter()
                    .map(|(e, c)| (e, num_bigint::BigInt::from(c))),
            )
        })
    })
}

fn field() -> impl Strategy<Value = Arc<UnramifiedField>> {
    prop::sample::select(vec![(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)])
        .prop_map(|(p, f)| UnramifiedField::new(p, f, 8).unwrap())
}

fn coeffs(f: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-400i64..400, f)
}

/// A 1-unit 1 + p·y of the field.
fn one_unit(fld: &Arc<UnramifiedField>, c: &[i64]) -> PadicElement {
    let p = fld.p() as i64;
    let y: Vec<i64> = c.iter().map(|x| x * p).collect();
    fld.one().add(&fld.from_poly(&y))
}

/// A unit: Teichmüller lift times a 1-unit.
fn unit(fld: &Arc<UnramifiedField>, code: u64, c: &[i64]) -> PadicElement {
    let code = 1 + code % (fld.q() - 1);
    fld.teichmuller(code).unwrap().mul(&one_unit(fld, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn galois_is_a_ring_map(a in cyclotomic(), b in cyclotomic(), k in 1i64..200) {
        let m = num_integer::lcm(a.conductor(), b.conductor());
        prop_assume!(num_integer::gcd(k, m as i64) == 1);
        let a = a.embed(m).unwrap();
        let b = b.embed(m).unwrap();
        let ab = (&a * &b).galois(k).unwrap();
        prop_assert_eq!(ab, &a.galois(k).unwrap() * &b.galois(k).unwrap());
    }

    #[test]
    fn cyclotomic_json_round_trip(a in cyclotomic()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn roots_recompose_from_primary_parts(m in 1u64..5000, k in 0i64..5000) {
        let r = RootOfUnity::new(m, k);
        let back = r.decompose().values().fold(RootOfUnity::one(), |acc, &x| acc * x);
        prop_assert_eq!(back, r);
        prop_assert_eq!(r.to_cyclotomic().as_root_of_unity(), Some(r));
    }

    #[test]
    fn log_is_additive(fld in field(), a in 0u64..100, b in 0u64..100, x in coeffs(2), y in coeffs(2)) {
        let f = fld.f();
        let u = unit(&fld, a, &x[..f]);
        let v = unit(&fld, b, &y[..f]);
        prop_assert_eq!(u.mul(&v).log().unwrap(), u.log().unwrap().add(&v.log().unwrap()));
    }

    #[test]
    fn teichmuller_lifts_are_fixed(fld in field(), code in 1u64..1000) {
        let code = 1 + code % (fld.q() - 1);
        let t = fld.teichmuller(code).unwrap();
        prop_assert_eq!(t.pow(fld.q() as i64).unwrap(), t.clone());
        prop_assert_eq!(t.residue_code(), code);
        prop_assert!(t.log().unwrap().is_zero());
    }

    #[test]
    fn frobenius_is_a_ring_map_of_order_f(fld in field(), x in coeffs(2), y in coeffs(2)) {
        let f = fld.f();
        let a = fld.from_poly(&x[..f]);
        let b = fld.from_poly(&y[..f]);
        prop_assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
        prop_assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
        prop_assert_eq!(a.frobenius_pow(f as i64), a.clone());
        let sum = (0..f as i64).fold(fld.zero(), |acc, j| acc.add(&a.frobenius_pow(j)));
        prop_assert_eq!(a.trace(), sum);
    }

    #[test]
    fn hilbert_symbol_is_bilinear(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        a in prop::sample::select(vec![-1i64, 2, 3, 5, 6, 7, 10, 12, 15, 18, 20, 27]),
        b in prop::sample::select(vec![-1i64, 2, 3, 5, 7, 11, 14, 45]),
        c in prop::sample::select(vec![-3i64, 2, 3, 5, 7, 13, 24]),
    ) {
        let h = |x: i64, y: i64| hilbert_qp(Rational64::from(x), Rational64::from(y), p).unwrap();
        prop_assert_eq!(h(a * b, c), h(a, c) * h(b, c));
        prop_assert_eq!(h(a, b), h(b, a));
        prop_assert_eq!(h(a, -a), 1);
    }

    #[test]
    fn characters_are_multiplicative(
        fld in field(),
        n in 2u32..5,
        num in coeffs(2),
        tame in 0i64..20,
        a in 0u64..100,
        b in 0u64..100,
        x in coeffs(2),
        y in coeffs(2),
        va in -2i64..3,
        vb in -2i64..3,
    ) {
        let f = fld.f();
        let p = fld.p() as i64;
        let den = fld.from_int(p.pow(n));
        let alpha = fld.from_poly(&num[..f]).div(&den).unwrap();
        let chi = MultiplicativeCharacter::new(&fld, RootOfUnity::new(6, 1), tame, Some(alpha), false).unwrap();
        let pi = fld.from_int(p);
        let u = unit(&fld, a, &x[..f]).mul(&pi.pow(va).unwrap());
        let v = unit(&fld, b, &y[..f]).mul(&pi.pow(vb).unwrap());
        let lhs = chi.eval(&u.mul(&v)).unwrap();
        prop_assert_eq!(lhs, chi.eval(&u).unwrap() * chi.eval(&v).unwrap());
        let sq = chi.mul(&chi).unwrap();
        prop_assert_eq!(sq.eval(&u).unwrap(), chi.eval(&u).unwrap().pow(2));
        prop_assert_eq!(chi.pow(chi.order() as i64).eval(&u).unwrap(), RootOfUnity::one());
    }
}
