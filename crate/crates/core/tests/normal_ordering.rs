mod common;

use num_bigint::BigInt;
use stablespan::monomial::{monomials_up_to, Monomial};
use stablespan::{multiply, parse_element, Element, Field, Signature};

use common::{oracle_element, oracle_product, random_element, rng, word_oracle};

fn check_all_pairs(sig: &Signature, cap: u32) -> usize {
    let basis = monomials_up_to(sig.generator_count(), cap);
    let mut checked = 0;
    for a in &basis {
        for b in basis.iter().filter(|b| a.total_degree() + b.total_degree() <= cap as i64) {
            let got = multiply(&Element::monomial(sig, a.clone()), &Element::monomial(sig, b.clone())).unwrap();
            assert_eq!(got, oracle_element(sig, word_oracle(sig, a, b)), "{a:?} * {b:?}");
            checked += 1;
        }
    }
    checked
}

#[test]
fn monomial_pairs_agree_with_swap_rewriting() {
    assert!(check_all_pairs(&Signature::weyl(1, Field::Rational), 6) > 100);
    assert!(check_all_pairs(&Signature::weyl(2, Field::Rational), 6) > 1000);
}

#[test]
fn mixed_signature_pairs_agree() {
    let s = Signature::parse("poly:1 x weyl:1", Field::Rational).unwrap();
    check_all_pairs(&s, 4);
    check_all_pairs(&Signature::weyl(2, Field::prime(3).unwrap()), 4);
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn reordering_table() {
    // y^m x^n = Σ_k (-1)^k k! C(m,k) C(n,k) x^(n-k) y^(m-k), tabulated
    // against the rewriting oracle rather than the library.
    let s = Signature::weyl(1, Field::Rational);
    for m in 0..=5i32 {
        for n in 0..=5i32 {
            let ym = Monomial::from_exponents(vec![0, m]);
            let xn = Monomial::from_exponents(vec![n, 0]);
            let oracle = word_oracle(&s, &ym, &xn);
            for k in 0..=m.min(n) as i64 {
                let fact: i64 = (1..=k).product();
                let want = (if k % 2 == 0 { 1 } else { -1 }) * fact * binom(m as i64, k) * binom(n as i64, k);
                let mono = Monomial::from_exponents(vec![n - k as i32, m - k as i32]);
                assert_eq!(oracle.get(&mono).cloned().unwrap_or_default(), BigInt::from(want), "m={m} n={n} k={k}");
            }
            let lib = multiply(&Element::monomial(&s, ym), &Element::monomial(&s, xn)).unwrap();
            assert_eq!(lib, oracle_element(&s, oracle));
        }
    }
}

#[test]
fn random_elements_agree() {
    let mut r = rng(11);
    for sig in [Signature::weyl(1, Field::Rational), Signature::weyl(2, Field::Rational)] {
        for _ in 0..100 {
            let f = random_element(&sig, &mut r, 3, 4);
            let g = random_element(&sig, &mut r, 3, 4);
            assert_eq!(multiply(&f, &g).unwrap(), oracle_product(&f, &g));
        }
    }
}

#[test]
fn documented_relations() {
    let s = Signature::weyl(1, Field::Rational);
    assert_eq!(parse_element("y1*x1", &s).unwrap().to_string(), "x1*y1 - 1");
    assert_eq!(parse_element("y1^2*x1", &s).unwrap().to_string(), "x1*y1^2 - 2*y1");
    assert_eq!(parse_element("y1^2*x1^2", &s).unwrap().to_string(), "x1^2*y1^2 - 4*x1*y1 + 2");
}
