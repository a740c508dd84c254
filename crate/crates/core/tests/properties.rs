mod common;

use proptest::prelude::*;
use stablespan::filtration::WeightFiltration;
use stablespan::{builtin_family, is_central, parse_element, AutFamily, Degree, Element, Field, Signature};

use common::{random_element, random_nonzero, rng};

fn signatures() -> Vec<Signature> {
    let q = Field::Rational;
    vec![
        Signature::poly(2, q),
        Signature::laurent(2, q),
        Signature::weyl(2, q),
        Signature::parse("poly:1 x weyl:1", q).unwrap(),
        Signature::parse("laurent:1 x weyl:1", q).unwrap(),
        Signature::weyl(1, Field::prime(5).unwrap()),
    ]
}

fn families(sig: &Signature) -> Vec<AutFamily> {
    let q = sig.field();
    let mut out = vec![];
    if !sig.is_laurent(0) {
        out.push(AutFamily::Shift { gen: 0, by: q.from_i64(3) });
    }
    if !sig.weyl_pairs().is_empty() {
        let x = sig.weyl_pairs()[0].x;
        let h = &Element::generator(sig, x).pow(2) + &Element::from_i64(sig, 1);
        out.push(AutFamily::AlphaH { index: 0, h });
        out.push(AutFamily::BetaIc { index: 0, c: q.from_i64(2) });
        out.push(AutFamily::WeylSwap { index: 0 });
    }
    if sig.commutative_generators().len() == 2 && sig.is_polynomial() {
        out.push(AutFamily::Triangular { gen: 1, addend: parse_element("z1^2 - z1", sig).unwrap() });
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(seed in any::<u64>(), which in 0usize..6) {
        let sig = &signatures()[which];
        let mut r = rng(seed);
        let (a, b, c) = (random_element(sig, &mut r, 2, 3), random_element(sig, &mut r, 2, 3), random_element(sig, &mut r, 2, 3));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn automorphisms_are_homomorphisms(seed in any::<u64>(), which in 0usize..6) {
        let sig = &signatures()[which];
        let mut r = rng(seed);
        for fam in families(sig) {
            let map = builtin_family(sig, &fam).unwrap();
            let f = random_element(sig, &mut r, 2, 3);
            let g = random_element(sig, &mut r, 2, 3);
            prop_assert_eq!(map.apply(&(&f * &g)).unwrap(), &map.apply(&f).unwrap() * &map.apply(&g).unwrap());
            prop_assert_eq!(map.apply_inverse(&map.apply(&f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn leading_forms_multiply(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a1 = Signature::weyl(1, Field::Rational);
        let mixed = Signature::parse("laurent:1 x weyl:1", Field::Rational).unwrap();
        let cases = [
            WeightFiltration::bernstein(&a1),
            WeightFiltration::new(&a1, vec![2, 1]).unwrap(),
            WeightFiltration::standard(&mixed),
        ];
        for w in &cases {
            let sig = w.signature();
            let f = random_nonzero(sig, &mut r, 3, 4);
            let g = random_nonzero(sig, &mut r, 3, 4);
            let lhs = w.leading_form(&(&f * &g)).unwrap();
            let rhs = &w.leading_form(&f).unwrap() * &w.leading_form(&g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>(), which in 0usize..6) {
        let sig = &signatures()[which];
        let mut r = rng(seed);
        let e = random_element(sig, &mut r, 4, 6);
        prop_assert_eq!(parse_element(&e.to_string(), sig).unwrap(), e);
    }
}

#[test]
fn commutative_factor_is_central() {
    let s = Signature::parse("poly:1 x weyl:1", Field::Rational).unwrap();
    assert!(is_central(&parse_element("z1^2 + 3*z1", &s).unwrap()));
    assert!(!is_central(&parse_element("z1 + x1", &s).unwrap()));
}

#[test]
fn pencil_combinations_keep_weight_degree() {
    let mut r = rng(7);
    let a1 = Signature::weyl(1, Field::Rational);
    let w = WeightFiltration::bernstein(&a1);
    for _ in 0..20 {
        let f = random_nonzero(&a1, &mut r, 3, 3);
        if f.is_scalar() {
            continue;
        }
        let d = w.weight_degree(&f).finite().unwrap();
        let combo = &(&f.pow(3) * &Element::from_i64(&a1, 2)) - &f;
        assert_eq!(w.weight_degree(&combo), Degree::Finite(3 * d));
    }
}
