#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use stablespan::monomial::{monomials_up_to, Monomial};
use stablespan::signature::{GeneratorKind, Signature};
use stablespan::{Element, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normal ordering by adjacent swaps on words: `y_i x_i -> x_i y_i - 1`,
/// every other out-of-order pair just commutes. Independent of the
/// closed-form multiplication in the library.
pub fn word_oracle(sig: &Signature, a: &Monomial, b: &Monomial) -> BTreeMap<Monomial, BigInt> {
    let word = |m: &Monomial| -> Vec<usize> {
        (0..m.len()).flat_map(|g| std::iter::repeat_n(g, m.exponent(g) as usize)).collect()
    };
    let mut start = word(a);
    start.extend(word(b));
    let pair_of = |g: usize| match sig.generators()[g].kind {
        GeneratorKind::WeylX(p) => Some((p, true)),
        GeneratorKind::WeylY(p) => Some((p, false)),
        _ => None,
    };
    let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    let mut work: Vec<(BigInt, Vec<usize>)> = vec![(BigInt::from(1), start)];
    while let Some((c, w)) = work.pop() {
        match (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) {
            None => {
                let mut e = vec![0i32; sig.generator_count()];
                for g in w {
                    e[g] += 1;
                }
                *out.entry(Monomial::from_exponents(e)).or_default() += c;
            }
            Some(k) => {
                let mut swapped = w.clone();
                swapped.swap(k, k + 1);
                if let (Some((p, false)), Some((q, true))) = (pair_of(w[k]), pair_of(w[k + 1])) {
                    if p == q && !sig.is_graded_pair(p) {
                        let mut dropped = w.clone();
                        dropped.drain(k..k + 2);
                        work.push((-c.clone(), dropped));
                    }
                }
                work.push((c, swapped));
            }
        }
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

pub fn oracle_element(sig: &Signature, terms: BTreeMap<Monomial, BigInt>) -> Element {
    let f = sig.field();
    Element::from_terms(sig, terms.into_iter().map(|(m, c)| (m, f.from_bigint(&c)))).unwrap()
}

/// Bilinear extension of the word oracle.
pub fn oracle_product(f: &Element, g: &Element) -> Element {
    let sig = f.signature();
    let mut acc = Element::zero(sig);
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            let t = oracle_element(sig, word_oracle(sig, a, b));
            acc.add_scaled(&(ca * cb), &t);
        }
    }
    acc
}

pub fn random_scalar(sig: &Signature, rng: &mut ChaCha8Rng) -> Scalar {
    let f = sig.field();
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    match f {
        stablespan::Field::Rational => f.from_ratio(&BigInt::from(num), &BigInt::from(den)).unwrap(),
        _ => f.from_i64(num),
    }
}

/// Random element with up to `terms` terms of total degree `<= max_deg`;
/// invertible generators may get negative exponents.
pub fn random_element(sig: &Signature, rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Element {
    let n = sig.generator_count();
    let basis = monomials_up_to(n, max_deg);
    let mut e = Element::zero(sig);
    for _ in 0..rng.gen_range(1..=terms) {
        let m = &basis[rng.gen_range(0..basis.len())];
        let exps: Vec<i32> = (0..n)
            .map(|g| if sig.is_laurent(g) && rng.gen_bool(0.5) { -m.exponent(g) } else { m.exponent(g) })
            .collect();
        let c = random_scalar(sig, rng);
        e = &e + &Element::term(sig, Monomial::from_exponents(exps), c);
    }
    e
}

pub fn random_nonzero(sig: &Signature, rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Element {
    loop {
        let e = random_element(sig, rng, max_deg, terms);
        if !e.is_zero() {
            return e;
        }
    }
}

pub fn random_nonscalar(sig: &Signature, rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Element {
    loop {
        let e = random_element(sig, rng, max_deg, terms);
        if !e.is_scalar() {
            return e;
        }
    }
}
